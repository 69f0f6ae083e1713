//! Sequential A* baseline on an integer lattice.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::env::Environment;
use crate::geom::{Point, Polyline};

pub const DEFAULT_RESOLUTION: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AstarParams {
    /// Lattice spacing in plane units.
    pub resolution: f64,
    /// Extra blocking distance around foreign terminals, added to their radius.
    /// `None` uses the terminal radius.
    pub margin: Option<f64>,
}

impl Default for AstarParams {
    fn default() -> Self {
        AstarParams {
            resolution: DEFAULT_RESOLUTION,
            margin: None,
        }
    }
}

pub type Cell = (usize, usize);

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub origin: Point,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    blocked: Vec<bool>,
}

impl Grid {
    pub fn new(origin: Point, h: f64, nx: usize, ny: usize) -> Self {
        Grid {
            origin,
            h,
            nx,
            ny,
            blocked: vec![false; nx * ny],
        }
    }

    pub fn over(env: &Environment, h: f64) -> Self {
        let b = env.bounds;
        let nx = libm::floor(b.width() / h + 1e-9) as usize + 1;
        let ny = libm::floor(b.height() / h + 1e-9) as usize + 1;
        Grid::new(Point::new(b.x_min, b.y_min), h, nx, ny)
    }

    fn idx(&self, c: Cell) -> usize {
        c.1 * self.nx + c.0
    }

    pub fn point(&self, c: Cell) -> Point {
        Point::new(
            self.origin.x + c.0 as f64 * self.h,
            self.origin.y + c.1 as f64 * self.h,
        )
    }

    /// Nearest lattice cell to `p`, clamped to the grid.
    pub fn snap(&self, p: Point) -> Cell {
        let f = |v: f64, n: usize| (libm::round(v / self.h).max(0.0) as usize).min(n - 1);
        (
            f(p.x - self.origin.x, self.nx),
            f(p.y - self.origin.y, self.ny),
        )
    }

    pub fn is_blocked(&self, c: Cell) -> bool {
        self.blocked[self.idx(c)]
    }

    pub fn set_blocked(&mut self, c: Cell, v: bool) {
        let i = self.idx(c);
        self.blocked[i] = v;
    }

    /// Blocks every cell within `r` of `p`.
    pub fn block_disk(&mut self, p: Point, r: f64) {
        let lo = self.snap(Point::new(p.x - r, p.y - r));
        let hi = self.snap(Point::new(p.x + r, p.y + r));
        for y in lo.1..=hi.1 {
            for x in lo.0..=hi.0 {
                if self.point((x, y)).dist(p) <= r {
                    self.set_blocked((x, y), true);
                }
            }
        }
    }

    fn neighbours(&self, c: Cell) -> impl Iterator<Item = Cell> + '_ {
        let (x, y) = c;
        [
            (x + 1 < self.nx).then(|| (x + 1, y)),
            (y + 1 < self.ny).then(|| (x, y + 1)),
            (x > 0).then(|| (x - 1, y)),
            (y > 0).then(|| (x, y - 1)),
        ]
        .into_iter()
        .flatten()
        .filter(|&n| !self.is_blocked(n))
    }
}

fn manhattan(a: Cell, b: Cell) -> usize {
    a.0.abs_diff(b.0) + a.1.abs_diff(b.1)
}

/// Shortest 4-connected path from `start` to `goal` over unblocked cells.
/// Ties go to lower `f`, then lower `h`, then lower cell coordinates.
pub fn astar(grid: &Grid, start: Cell, goal: Cell) -> Option<Vec<Cell>> {
    if grid.is_blocked(start) || grid.is_blocked(goal) {
        return None;
    }
    let n = grid.nx * grid.ny;
    let mut g = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut closed = vec![false; n];
    let mut open = BinaryHeap::new();
    g[grid.idx(start)] = 0;
    let h0 = manhattan(start, goal);
    open.push(Reverse((h0, h0, start.0, start.1)));
    while let Some(Reverse((_, _, x, y))) = open.pop() {
        let c = (x, y);
        let ci = grid.idx(c);
        if closed[ci] {
            continue;
        }
        closed[ci] = true;
        if c == goal {
            let mut path = vec![c];
            let mut i = ci;
            while parent[i] != usize::MAX {
                i = parent[i];
                path.push((i % grid.nx, i / grid.nx));
            }
            path.reverse();
            return Some(path);
        }
        for nb in grid.neighbours(c) {
            let ni = grid.idx(nb);
            let ng = g[ci] + 1;
            if !closed[ni] && ng < g[ni] {
                g[ni] = ng;
                parent[ni] = ci;
                let h = manhattan(nb, goal);
                open.push(Reverse((ng + h, h, nb.0, nb.1)));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq)]
pub struct AstarResult {
    pub success: bool,
    /// Lattice paths of the nets routed before the first failure, by net.
    pub paths: Vec<(usize, Vec<Cell>)>,
    /// First net that could not be routed.
    pub failed_net: Option<usize>,
    pub grid: Grid,
}

impl AstarResult {
    /// Paths as plane polylines, with the end cells replaced by the exact
    /// terminal centers.
    pub fn polylines(&self, env: &Environment) -> Vec<(usize, Polyline)> {
        self.paths
            .iter()
            .filter_map(|(net, cells)| {
                let mut pts: Vec<Point> = cells.iter().map(|&c| self.grid.point(c)).collect();
                pts.insert(0, env.starts[net - 1].center);
                pts.push(env.ends[net - 1].center);
                Polyline::from_points_dedup(pts).ok().map(|p| (*net, p))
            })
            .collect()
    }
}

/// Routes nets 1..n in order, each path blocking the cells it uses.
pub fn route_sequential(env: &Environment, params: &AstarParams) -> AstarResult {
    let mut grid = Grid::over(env, params.resolution);
    let mut cells: Vec<(Cell, Cell)> = Vec::new();
    for (s, t) in env.starts.iter().zip(&env.ends) {
        cells.push((grid.snap(s.center), grid.snap(t.center)));
    }
    let mut paths = Vec::new();
    let mut failed_net = None;
    for net in 1..=env.net_count() {
        let mut g = grid.clone();
        for t in env.terminals().filter(|t| t.net != net) {
            g.block_disk(t.center, t.radius + params.margin.unwrap_or(t.radius));
        }
        let (s, t) = cells[net - 1];
        g.set_blocked(s, false);
        g.set_blocked(t, false);
        match astar(&g, s, t) {
            Some(path) => {
                for &c in &path {
                    grid.set_blocked(c, true);
                }
                paths.push((net, path));
            }
            None => {
                failed_net = Some(net);
                break;
            }
        }
    }
    AstarResult {
        success: failed_net.is_none(),
        paths,
        failed_net,
        grid,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::Bounds;
    use alloc::collections::VecDeque;

    fn bfs(grid: &Grid, s: Cell, t: Cell) -> Option<usize> {
        let mut dist = vec![usize::MAX; grid.nx * grid.ny];
        let mut q = VecDeque::new();
        dist[grid.idx(s)] = 0;
        q.push_back(s);
        while let Some(c) = q.pop_front() {
            if c == t {
                return Some(dist[grid.idx(c)]);
            }
            for n in grid.neighbours(c) {
                if dist[grid.idx(n)] == usize::MAX {
                    dist[grid.idx(n)] = dist[grid.idx(c)] + 1;
                    q.push_back(n);
                }
            }
        }
        None
    }

    #[test]
    fn empty_grid_corner_to_corner() {
        let g = Grid::new(Point::new(0.0, 0.0), 1.0, 10, 10);
        let p = astar(&g, (0, 0), (9, 9)).unwrap();
        assert_eq!(p.len() - 1, 18);
        for w in p.windows(2) {
            assert_eq!(manhattan(w[0], w[1]), 1);
        }
    }

    #[test]
    fn wall_blocks_second_net() {
        let b = Bounds::new(0.0, 10.0, 0.0, 10.0);
        let env = Environment::from_centers(
            b,
            0.5,
            &[Point::new(5.0, 0.0), Point::new(0.0, 5.0)],
            &[Point::new(5.0, 10.0), Point::new(10.0, 5.0)],
            0,
        );
        let res = route_sequential(
            &env,
            &AstarParams {
                resolution: 1.0,
                margin: Some(0.0),
            },
        );
        assert!(!res.success);
        assert_eq!(res.failed_net, Some(2));
        assert_eq!(res.paths.len(), 1);
    }

    #[test]
    fn matches_bfs_on_random_obstacles() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let mut g = Grid::new(Point::new(0.0, 0.0), 1.0, 12, 9);
            for y in 0..9 {
                for x in 0..12 {
                    if rng.gen_bool(0.3) {
                        g.set_blocked((x, y), true);
                    }
                }
            }
            let s = (rng.gen_range(0..12), rng.gen_range(0..9));
            let t = (rng.gen_range(0..12), rng.gen_range(0..9));
            g.set_blocked(s, false);
            g.set_blocked(t, false);
            let a = astar(&g, s, t).map(|p| p.len() - 1);
            assert_eq!(a, bfs(&g, s, t));
        }
    }

    #[test]
    fn snap_rounds_to_nearest() {
        let g = Grid::new(Point::new(-50.0, -50.0), 1.0, 101, 101);
        assert_eq!(g.snap(Point::new(0.4, -0.6)), (50, 49));
        assert_eq!(g.snap(Point::new(80.0, -80.0)), (100, 0));
    }
}
