use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use aoc_core::{ccrev, clique, dimacs, keypad, maze, wires};

#[derive(Parser, Debug)]
#[command(
    name = "aoc",
    about = "Puzzle solvers built on a small SAT and search toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a faulty ripple-carry adder (answer on a trailing `# answer:` line)
    Gen {
        #[arg(long)]
        bits: usize,
        #[arg(long, default_value_t = 4)]
        pairs: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    #[command(external_subcommand)]
    Day(Vec<String>),
}

#[derive(Parser, Debug)]
#[command(name = "aoc", about = "aoc <day> <part> [options]")]
struct SolveArgs {
    /// Puzzle day: 16, 17, 21, 23 or 24
    day: u32,
    /// Puzzle part: 1 or 2
    part: u32,
    #[command(flatten)]
    opts: SolveOpts,
}

#[derive(Args, Debug)]
struct SolveOpts {
    /// Input file (default: stdin)
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum)]
    solver: Option<Solver>,
    /// Directional-pad layers (day 21)
    #[arg(long)]
    layers: Option<u32>,
    /// Initial training inputs (day 24)
    #[arg(long)]
    trainings: Option<usize>,
    /// Swapped gate pairs (day 24)
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the CNF encoding here before solving
    #[arg(long)]
    dimacs: Option<PathBuf>,
    /// Width of register A in the bit-vector encoding (day 17)
    #[arg(long)]
    bv_width: Option<usize>,
    /// Output codes to reproduce instead of the program itself (day 17)
    #[arg(long, value_delimiter = ',')]
    target: Option<Vec<u8>>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Solver {
    Sat,
    Oracle,
    Structural,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: 2,
            msg: msg.into(),
        }
    }

    fn none(msg: impl Into<String>) -> Self {
        Failure {
            code: 1,
            msg: msg.into(),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => return clap_exit(e),
    };
    let result = match cli.command {
        Command::Gen { bits, pairs, seed } => wires::gen_instance(bits, pairs, seed)
            .map(|inst| inst.text.trim_end().to_string())
            .map_err(|e| Failure::usage(e.to_string())),
        Command::Day(args) => {
            let args =
                match SolveArgs::try_parse_from(std::iter::once("aoc".to_string()).chain(args)) {
                    Ok(a) => a,
                    Err(e) => return clap_exit(e),
                };
            solve(args)
        }
    };
    match result {
        Ok(answer) => {
            println!("{answer}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn clap_exit(e: clap::Error) -> ExitCode {
    let code = if e.use_stderr() { 2 } else { 0 };
    let _ = e.print();
    ExitCode::from(code)
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) => {
            fs::read_to_string(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))
        }
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::usage(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn write_dimacs(path: &Option<PathBuf>, inst: &aoc_core::sat::CnfInstance) -> Result<(), Failure> {
    if let Some(p) = path {
        fs::write(p, dimacs::write_dimacs(inst))
            .map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
        log::info!("wrote {} clauses to {}", inst.num_clauses(), p.display());
    }
    Ok(())
}

/// Rejects flags that the chosen day and part do not use.
fn check_flags(day: u32, part: u32, o: &SolveOpts) -> Result<(), Failure> {
    let p2 = part == 2;
    let allowed: &[(&str, bool, bool)] = &[
        ("--layers", o.layers.is_some(), day == 21),
        ("--trainings", o.trainings.is_some(), day == 24 && p2),
        ("--pairs", o.pairs.is_some(), day == 24 && p2),
        ("--seed", o.seed.is_some(), day == 24 && p2),
        ("--bv-width", o.bv_width.is_some(), day == 17 && p2),
        ("--target", o.target.is_some(), day == 17 && p2),
        (
            "--dimacs",
            o.dimacs.is_some(),
            p2 && matches!(day, 17 | 23 | 24),
        ),
    ];
    for &(flag, given, ok) in allowed {
        if given && !ok {
            return Err(Failure::usage(format!(
                "{flag} does not apply to day {day} part {part}"
            )));
        }
    }
    if let Some(s) = o.solver {
        let ok = matches!(
            (day, part, s),
            (16, 2, Solver::Oracle)
                | (17 | 23, 2, Solver::Sat | Solver::Oracle)
                | (24, 2, Solver::Sat | Solver::Structural)
        );
        if !ok {
            return Err(Failure::usage(format!(
                "--solver {s:?} does not apply to day {day} part {part}"
            )));
        }
    }
    if o.dimacs.is_some() && matches!(o.solver, Some(Solver::Oracle | Solver::Structural)) {
        return Err(Failure::usage("--dimacs needs the sat solver"));
    }
    Ok(())
}

fn solve(args: SolveArgs) -> Outcome {
    let (day, part, o) = (args.day, args.part, args.opts);
    if !matches!(part, 1 | 2) {
        return Err(Failure::usage(format!("part must be 1 or 2, got {part}")));
    }
    if !matches!(day, 16 | 17 | 21 | 23 | 24) {
        return Err(Failure::usage(format!("day {day} is not supported")));
    }
    check_flags(day, part, &o)?;
    let text = read_input(&o.input)?;
    match day {
        16 => day16(part, &o, &text),
        17 => day17(part, &o, &text),
        21 => day21(part, &o, &text),
        23 => day23(part, &o, &text),
        _ => day24(part, &o, &text),
    }
}

fn day16(part: u32, o: &SolveOpts, text: &str) -> Outcome {
    let grid = maze::parse_maze(text).map_err(|e| Failure::usage(e.to_string()))?;
    let answer = match (part, o.solver) {
        (1, _) => maze::min_cost(&grid).map(|c| c.to_string()),
        (_, Some(Solver::Oracle)) => maze::via_point_oracle(&grid).map(|n| n.to_string()),
        _ => maze::optimal_tiles(&grid).map(|n| n.to_string()),
    };
    answer.map_err(|e| Failure::none(e.to_string()))
}

fn day17(part: u32, o: &SolveOpts, text: &str) -> Outcome {
    let dev = ccrev::parse_device(text).map_err(|e| Failure::usage(e.to_string()))?;
    if part == 1 {
        let out = ccrev::run(&dev.program, dev.a, dev.b, dev.c)
            .map_err(|e| Failure::none(e.to_string()))?;
        return Ok(join(out.iter()));
    }
    let target = o.target.as_deref();
    let classify = |e: ccrev::ReverseError| match e {
        ccrev::ReverseError::Infeasible
        | ccrev::ReverseError::Exec(_)
        | ccrev::ReverseError::Unverified(_) => Failure::none(e.to_string()),
        _ => Failure::usage(e.to_string()),
    };
    let a = if o.solver == Some(Solver::Oracle) {
        ccrev::reverse_min_a_dfs(&dev.program, target).map_err(classify)?
    } else {
        let opts = ccrev::SatOptions { width: o.bv_width };
        let mut enc = ccrev::encode_reverse(&dev.program, target, opts).map_err(classify)?;
        write_dimacs(&o.dimacs, &enc.instance)?;
        ccrev::solve_encoding(&dev.program, target, &mut enc).map_err(classify)?
    };
    Ok(a.to_string())
}

fn day21(part: u32, o: &SolveOpts, text: &str) -> Outcome {
    let codes: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    let layers = o.layers.unwrap_or(if part == 1 { 2 } else { 25 });
    keypad::complexity_sum(&codes, layers)
        .map(|n| n.to_string())
        .map_err(|e| Failure::usage(e.to_string()))
}

fn day23(part: u32, o: &SolveOpts, text: &str) -> Outcome {
    let net = clique::parse_network(text).map_err(|e| Failure::usage(e.to_string()))?;
    if part == 1 {
        return Ok(clique::count_t_triangles(&net).to_string());
    }
    if net.is_empty() {
        return Err(Failure::usage("network has no vertices"));
    }
    let set = if o.solver == Some(Solver::Oracle) {
        clique::bron_kerbosch(&net)
    } else {
        let (mut inst, bs) = clique::encode_clique(&net);
        write_dimacs(&o.dimacs, &inst)?;
        clique::max_clique_from(&mut inst, &bs)
    };
    Ok(clique::password(&net, &set))
}

fn day24(part: u32, o: &SolveOpts, text: &str) -> Outcome {
    let circuit = wires::parse_circuit(text).map_err(|e| Failure::usage(e.to_string()))?;
    if part == 1 {
        return wires::eval_circuit(&circuit)
            .map(|z| z.to_string())
            .map_err(|e| Failure::usage(e.to_string()));
    }
    if o.solver == Some(Solver::Structural) {
        return Ok(wires::ripple_structural_check(&circuit).join(","));
    }
    let pairs = o.pairs.unwrap_or(4);
    let opts = wires::SwapOptions {
        trainings: o.trainings,
        seed: o.seed.unwrap_or(1),
        ..wires::SwapOptions::default()
    };
    let classify = |e: wires::WiresError| match e {
        wires::WiresError::NoConsistentSwapSet | wires::WiresError::RoundLimit(_) => {
            Failure::none(e.to_string())
        }
        _ => Failure::usage(e.to_string()),
    };
    let sol = if o.dimacs.is_some() {
        let (mut enc, mut rng) =
            wires::initial_encoding(&circuit, pairs, opts).map_err(classify)?;
        write_dimacs(&o.dimacs, enc.instance())?;
        wires::solve_swaps(&mut enc, &mut rng, opts).map_err(classify)?
    } else {
        wires::find_swaps_sat(&circuit, pairs, opts).map_err(classify)?
    };
    Ok(sol.wires.join(","))
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
