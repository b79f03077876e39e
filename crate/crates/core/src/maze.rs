//! Orientation-aware grid routing: least cost from S (facing east) to E where
//! a step costs 1 and a quarter turn costs 1000, and the set of tiles lying on
//! some least-cost route.
//!
//! Coordinates are 1-based `(row, col)`.

use thiserror::Error;

use crate::search::{dijkstra_all, dijkstra_goal, Cost, CostTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MazeError {
    #[error("empty maze")]
    Empty,
    #[error("line {line}: expected {expected} columns, found {found}")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: unexpected character `{ch}`")]
    BadChar { line: usize, ch: char },
    #[error("expected exactly one `{0}`, found {1}")]
    Endpoint(char, usize),
    #[error("no path from S to E")]
    NoPath,
}

pub const STEP_COST: Cost = 1;
pub const TURN_COST: Cost = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    North,
    South,
    West,
    East,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::North, Dir::South, Dir::West, Dir::East];

    pub fn delta(self) -> (i32, i32) {
        match self {
            Dir::North => (-1, 0),
            Dir::South => (1, 0),
            Dir::West => (0, -1),
            Dir::East => (0, 1),
        }
    }

    pub fn opposite(self) -> Dir {
        match self {
            Dir::North => Dir::South,
            Dir::South => Dir::North,
            Dir::West => Dir::East,
            Dir::East => Dir::West,
        }
    }

    /// The two quarter turns.
    pub fn turns(self) -> [Dir; 2] {
        match self {
            Dir::North | Dir::South => [Dir::West, Dir::East],
            Dir::West | Dir::East => [Dir::North, Dir::South],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pose {
    pub row: i32,
    pub col: i32,
    pub dir: Dir,
}

impl Pose {
    pub fn new(row: i32, col: i32, dir: Dir) -> Pose {
        Pose { row, col, dir }
    }

    pub fn tile(self) -> (i32, i32) {
        (self.row, self.col)
    }

    fn ahead(self) -> (i32, i32) {
        let (dr, dc) = self.dir.delta();
        (self.row + dr, self.col + dc)
    }

    fn behind(self) -> (i32, i32) {
        let (dr, dc) = self.dir.delta();
        (self.row - dr, self.col - dc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    cells: Vec<Vec<u8>>,
    start: (i32, i32),
    end: (i32, i32),
}

pub fn parse_maze(text: &str) -> Result<Grid, MazeError> {
    let rows: Vec<&str> = text
        .lines()
        .map(str::trim_end)
        .filter(|l| !l.is_empty())
        .collect();
    let Some(first) = rows.first() else {
        return Err(MazeError::Empty);
    };
    let width = first.len();
    let mut cells = Vec::with_capacity(rows.len());
    let mut starts = Vec::new();
    let mut ends = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(MazeError::Ragged {
                line: r + 1,
                expected: width,
                found: row.len(),
            });
        }
        for (c, ch) in row.chars().enumerate() {
            let pos = (r as i32 + 1, c as i32 + 1);
            match ch {
                '#' | '.' => {}
                'S' => starts.push(pos),
                'E' => ends.push(pos),
                _ => return Err(MazeError::BadChar { line: r + 1, ch }),
            }
        }
        cells.push(row.as_bytes().to_vec());
    }
    if starts.len() != 1 {
        return Err(MazeError::Endpoint('S', starts.len()));
    }
    if ends.len() != 1 {
        return Err(MazeError::Endpoint('E', ends.len()));
    }
    Ok(Grid {
        cells,
        start: starts[0],
        end: ends[0],
    })
}

impl Grid {
    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    pub fn cols(&self) -> usize {
        self.cells[0].len()
    }

    pub fn start(&self) -> (i32, i32) {
        self.start
    }

    pub fn end(&self) -> (i32, i32) {
        self.end
    }

    /// Cells outside the grid count as walls.
    pub fn is_open(&self, (r, c): (i32, i32)) -> bool {
        r >= 1
            && c >= 1
            && (r as usize) <= self.rows()
            && (c as usize) <= self.cols()
            && self.cells[r as usize - 1][c as usize - 1] != b'#'
    }

    pub fn open_tiles(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        (1..=self.rows() as i32)
            .flat_map(move |r| (1..=self.cols() as i32).map(move |c| (r, c)))
            .filter(|&t| self.is_open(t))
    }

    pub fn successors(&self, p: Pose) -> Vec<(Pose, Cost)> {
        let mut out = Vec::with_capacity(3);
        let (r, c) = p.ahead();
        if self.is_open((r, c)) {
            out.push((Pose::new(r, c, p.dir), STEP_COST));
        }
        for d in p.dir.turns() {
            out.push((Pose::new(p.row, p.col, d), TURN_COST));
        }
        out
    }

    pub fn predecessors(&self, p: Pose) -> Vec<(Pose, Cost)> {
        let mut out = Vec::with_capacity(3);
        let (r, c) = p.behind();
        if self.is_open((r, c)) {
            out.push((Pose::new(r, c, p.dir), STEP_COST));
        }
        for d in p.dir.turns() {
            out.push((Pose::new(p.row, p.col, d), TURN_COST));
        }
        out
    }

    pub fn start_pose(&self) -> Pose {
        Pose::new(self.start.0, self.start.1, Dir::East)
    }

    pub fn end_poses(&self) -> [Pose; 4] {
        Dir::ALL.map(|d| Pose::new(self.end.0, self.end.1, d))
    }
}

/// Least cost from the start pose to every reachable pose.
pub fn forward_table(grid: &Grid) -> CostTable<Pose> {
    dijkstra_all([(grid.start_pose(), 0)], |&p| grid.successors(p)).expect("costs are nonnegative")
}

/// Least cost from every pose to the end tile (any arrival direction).
pub fn backward_table(grid: &Grid) -> CostTable<Pose> {
    dijkstra_all(grid.end_poses().map(|p| (p, 0)), |&p| grid.predecessors(p))
        .expect("costs are nonnegative")
}

fn min_cost_in(grid: &Grid, forward: &CostTable<Pose>) -> Result<Cost, MazeError> {
    grid.end_poses()
        .iter()
        .filter_map(|p| forward.cost(p))
        .min()
        .ok_or(MazeError::NoPath)
}

pub fn min_cost(grid: &Grid) -> Result<Cost, MazeError> {
    min_cost_in(grid, &forward_table(grid))
}

/// Tiles on at least one least-cost route, found by pairing forward and
/// backward pose costs.
pub fn optimal_tiles(grid: &Grid) -> Result<usize, MazeError> {
    let forward = forward_table(grid);
    let best = min_cost_in(grid, &forward)?;
    let backward = backward_table(grid);
    let mut tiles: Vec<(i32, i32)> = forward
        .iter()
        .filter(|(p, c)| backward.cost(p).is_some_and(|b| c + b == best))
        .map(|(p, _)| p.tile())
        .collect();
    tiles.push(grid.start);
    tiles.push(grid.end);
    tiles.sort_unstable();
    tiles.dedup();
    Ok(tiles.len())
}

/// Per-tile check by two independent searches: from the tile back to S
/// (arriving facing west) and from the tile on to E.
pub fn via_point_oracle(grid: &Grid) -> Result<usize, MazeError> {
    let best = min_cost(grid)?;
    let succ = |p: &Pose| grid.successors(*p);
    let mut count = 2;
    for t in grid.open_tiles() {
        if t == grid.start || t == grid.end {
            continue;
        }
        let mut via = None::<Cost>;
        for d in Dir::ALL {
            let back = dijkstra_goal([(Pose::new(t.0, t.1, d.opposite()), 0)], succ, |p| {
                p.tile() == grid.start && p.dir == Dir::West
            })
            .expect("costs are nonnegative");
            let on = dijkstra_goal([(Pose::new(t.0, t.1, d), 0)], succ, |p| {
                p.tile() == grid.end
            })
            .expect("costs are nonnegative");
            if let (Some((b, _)), Some((o, _))) = (back, on) {
                via = Some(via.map_or(b + o, |v| v.min(b + o)));
            }
        }
        if via == Some(best) {
            count += 1;
        }
    }
    Ok(count)
}
