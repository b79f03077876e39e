mod common;

use std::time::{Duration, Instant};

use aoc_core::clique::{
    bron_kerbosch, count_t_triangles, max_clique_sat, parse_network, password, Network,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn planted_cliques_are_recovered() {
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (text, planted) = common::planted_graph(&mut rng, 50, 0.3, 8);
        let net = parse_network(&text).unwrap();
        let t = Instant::now();
        let sat = max_clique_sat(&net);
        assert!(
            t.elapsed() < Duration::from_secs(60),
            "seed {seed} took {:?}",
            t.elapsed()
        );
        let bk = bron_kerbosch(&net);
        assert!(
            net.is_clique(&sat),
            "seed {seed}: SAT answer is not a clique"
        );
        assert!(net.is_clique(&bk), "seed {seed}: BK answer is not a clique");
        assert_eq!(sat.len(), bk.len(), "seed {seed}");
        assert!(sat.len() >= 8, "seed {seed}: size {}", sat.len());
        if sat.len() == 8 {
            // The planted clique is a maximum; only uniqueness could differ.
            let names: Vec<usize> = planted.iter().map(|n| net.index_of(n).unwrap()).collect();
            assert!(net.is_clique(&names));
        }
    }
}

#[test]
fn small_graphs_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(231);
    for _ in 0..150 {
        let n = rng.gen_range(1..=14);
        let p = rng.gen_range(0.1..0.9);
        let mut net = Network::default();
        for i in 0..n {
            net.add_vertex(&format!(
                "{}{}",
                (b'a' + (i / 26) as u8) as char,
                (b'a' + (i % 26) as u8) as char
            ));
        }
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    net.add_edge(i, j);
                }
            }
        }
        let want = common::brute_max_clique(n, &|a, b| net.adjacent(a, b));
        let sat = max_clique_sat(&net);
        let bk = bron_kerbosch(&net);
        assert_eq!(sat.len(), want);
        assert_eq!(bk.len(), want);
        assert!(net.is_clique(&sat) && net.is_clique(&bk));
    }
}

#[test]
fn triangle_count_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let (text, _) = common::planted_graph(&mut rng, 30, 0.2, 4);
        let net = parse_network(&text).unwrap();
        let names = net.names();
        let mut want = 0;
        let n = net.len();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let tri = net.adjacent(a, b) && net.adjacent(b, c) && net.adjacent(a, c);
                    if tri && [a, b, c].iter().any(|&v| names[v].starts_with('t')) {
                        want += 1;
                    }
                }
            }
        }
        assert_eq!(count_t_triangles(&net), want);
    }
}

#[test]
fn sample_network() {
    let text = "kh-tc\nqp-kh\nde-cg\nka-co\nyn-aq\nqp-ub\ncg-tb\nvc-aq\ntb-ka\nwh-tc\nyn-cg\nkh-ub\nta-co\nde-co\n\
tc-td\ntb-wq\nwh-td\nta-ka\ntd-qp\naq-cg\nwq-ub\nub-vc\nde-ta\nwq-aq\nwq-vc\nwh-yn\nka-de\nkh-ta\nco-tc\nwh-qp\n\
tb-vc\ntd-yn\n";
    let net = parse_network(text).unwrap();
    assert_eq!(count_t_triangles(&net), 7);
    assert_eq!(password(&net, &max_clique_sat(&net)), "co,de,ka,ta");
    assert_eq!(password(&net, &bron_kerbosch(&net)), "co,de,ka,ta");
}
