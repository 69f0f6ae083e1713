//! Cut forest over the interior terminals and the contour walk that opens the
//! punctured plane into a disk.
//!
//! Every interior terminal is joined to the outer boundary by straight cut
//! edges. Walking the boundary of the cut-open domain passes every cut edge
//! twice, once per side; pinching each side to a point yields the cyclic node
//! sequence of the circular frame.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::fmt;

use thiserror::Error;

use crate::env::{Environment, TerminalId, TerminalKind};
use crate::frame::{NodeKind, Side};
use crate::geom::{
    orient_unchecked, segments_intersect, Orientation, Point, Segment, SegmentRelation, EPS,
};

/// Minimum distance kept between a boundary attachment and any boundary terminal.
pub const ATTACH_PIN_CLEARANCE: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemaError {
    #[error("environment is invalid")]
    InvalidEnvironment,
    #[error("cut edges {a} and {b} cross")]
    Crossing { a: usize, b: usize },
    #[error("cut edge {edge} passes through terminal {terminal}")]
    ThroughTerminal { edge: usize, terminal: TerminalId },
    #[error("terminal {0} is not connected to the boundary")]
    Uncovered(TerminalId),
    #[error("tree {0} does not have exactly one boundary attachment")]
    Attachment(usize),
    #[error("cut edge {0} is degenerate")]
    Degenerate(usize),
    #[error("cut edge {0} references an unknown terminal")]
    UnknownTerminal(usize),
}

/// Where the tail of a cut edge sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Attach {
    Terminal(TerminalId),
    Boundary(Point),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutEdge {
    pub id: usize,
    pub tail: Attach,
    pub head: TerminalId,
    pub segment: Segment,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutForest {
    pub edges: Vec<CutEdge>,
    /// Edge ids per tree; the first edge of each tree is its boundary attachment.
    pub trees: Vec<Vec<usize>>,
    pub boundary_attachments: Vec<Point>,
}

impl CutForest {
    pub fn empty() -> Self {
        CutForest {
            edges: Vec::new(),
            trees: Vec::new(),
            boundary_attachments: Vec::new(),
        }
    }

    /// Checks planarity, coverage, single attachment per tree and that no edge
    /// runs through a foreign terminal center.
    pub fn check(&self, env: &Environment) -> Result<(), SchemaError> {
        for (i, e) in self.edges.iter().enumerate() {
            if e.id != i {
                return Err(SchemaError::Degenerate(i));
            }
            let head = env
                .terminal(e.head)
                .ok_or(SchemaError::UnknownTerminal(i))?;
            if head.center != e.segment.b() {
                return Err(SchemaError::Degenerate(i));
            }
            let tail_pt = match e.tail {
                Attach::Terminal(t) => {
                    env.terminal(t)
                        .ok_or(SchemaError::UnknownTerminal(i))?
                        .center
                }
                Attach::Boundary(p) => {
                    if !env.bounds.on_boundary(p) {
                        return Err(SchemaError::Attachment(i));
                    }
                    p
                }
            };
            if tail_pt != e.segment.a() {
                return Err(SchemaError::Degenerate(i));
            }
            if env.bounds.on_boundary(head.center) {
                return Err(SchemaError::Attachment(i));
            }
        }
        for (i, a) in self.edges.iter().enumerate() {
            for b in &self.edges[i + 1..] {
                match segments_intersect(&a.segment, &b.segment) {
                    SegmentRelation::Disjoint => {}
                    SegmentRelation::Touching if shares_tree_vertex(a, b) => {}
                    _ => return Err(SchemaError::Crossing { a: a.id, b: b.id }),
                }
            }
            for t in env.terminals() {
                let p = t.center;
                if p == a.segment.a() || p == a.segment.b() {
                    continue;
                }
                if point_on_segment(&a.segment, p)
                    && orient_unchecked(a.segment.a(), a.segment.b(), p) == Orientation::Collinear
                {
                    return Err(SchemaError::ThroughTerminal {
                        edge: a.id,
                        terminal: t.id(),
                    });
                }
            }
        }
        // Every tree hangs off exactly one boundary point and reaches its terminals.
        let slot = |t: TerminalId| 2 * (t.net - 1) + usize::from(t.kind == TerminalKind::End);
        // Tree that reached each terminal, plus one; zero when none did.
        let mut reached = vec![0usize; 2 * env.net_count()];
        for (ti, tree) in self.trees.iter().enumerate() {
            let boundary_edges = tree
                .iter()
                .filter(|&&e| matches!(self.edges[e].tail, Attach::Boundary(_)))
                .count();
            if boundary_edges != 1
                || tree.is_empty()
                || !matches!(self.edges[tree[0]].tail, Attach::Boundary(_))
            {
                return Err(SchemaError::Attachment(ti));
            }
            let mark = ti + 1;
            reached[slot(self.edges[tree[0]].head)] = mark;
            let mut grew = true;
            while grew {
                grew = false;
                for &e in tree {
                    let edge = &self.edges[e];
                    if let Attach::Terminal(t) = edge.tail {
                        if reached[slot(t)] == mark && reached[slot(edge.head)] != mark {
                            reached[slot(edge.head)] = mark;
                            grew = true;
                        }
                    }
                }
            }
            for &e in tree {
                if reached[slot(self.edges[e].head)] != mark {
                    return Err(SchemaError::Attachment(ti));
                }
            }
        }
        for t in env.interior_terminals() {
            if reached[slot(t.id())] == 0 {
                return Err(SchemaError::Uncovered(t.id()));
            }
        }
        Ok(())
    }
}

fn point_on_segment(s: &Segment, p: Point) -> bool {
    let (a, b) = (s.a(), s.b());
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

fn shares_tree_vertex(a: &CutEdge, b: &CutEdge) -> bool {
    let ends = |e: &CutEdge| {
        let tail = match e.tail {
            Attach::Terminal(t) => Some(t),
            Attach::Boundary(_) => None,
        };
        [tail, Some(e.head)]
    };
    let (ea, eb) = (ends(a), ends(b));
    ea.iter()
        .flatten()
        .any(|t| eb.iter().flatten().any(|u| u == t))
}

/// A way of drawing cut edges for an environment.
pub trait CutStrategy {
    fn name(&self) -> &'static str;
    fn draw(&self, env: &Environment) -> Result<CutForest, SchemaError>;
}

/// Euclidean minimum spanning tree over the interior terminals, attached to the
/// right boundary from its rightmost vertex.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmstAttach;

/// One vertical cut from every interior terminal down to the bottom boundary.
#[derive(Debug, Clone, Copy, Default)]
pub struct VerticalDrop;

impl CutStrategy for EmstAttach {
    fn name(&self) -> &'static str {
        "emst-attach"
    }

    fn draw(&self, env: &Environment) -> Result<CutForest, SchemaError> {
        let interior: Vec<(TerminalId, Point)> = env
            .interior_terminals()
            .map(|t| (t.id(), t.center))
            .collect();
        if interior.is_empty() {
            return Ok(CutForest::empty());
        }
        // Root: largest x, ties to the lowest y.
        let root = (0..interior.len())
            .max_by(|&i, &j| {
                let (p, q) = (interior[i].1, interior[j].1);
                p.x.total_cmp(&q.x)
                    .then(q.y.total_cmp(&p.y))
                    .then(j.cmp(&i))
            })
            .unwrap();
        let parent = emst_parents(&interior.iter().map(|t| t.1).collect::<Vec<_>>(), root);

        let b = env.bounds;
        let y = attachment_height(env, interior[root].1.y);
        let attach = Point::new(b.x_max, y);
        let mut edges = Vec::with_capacity(interior.len());
        edges.push(CutEdge {
            id: 0,
            tail: Attach::Boundary(attach),
            head: interior[root].0,
            segment: Segment::new(attach, interior[root].1)
                .map_err(|_| SchemaError::Degenerate(0))?,
        });
        // Breadth-first from the root so parents precede children.
        let mut order = vec![root];
        let mut k = 0;
        while k < order.len() {
            let v = order[k];
            k += 1;
            for (c, p) in parent.iter().enumerate() {
                if *p == Some(v) {
                    order.push(c);
                }
            }
        }
        for &c in &order[1..] {
            let p = parent[c].unwrap();
            let id = edges.len();
            edges.push(CutEdge {
                id,
                tail: Attach::Terminal(interior[p].0),
                head: interior[c].0,
                segment: Segment::new(interior[p].1, interior[c].1)
                    .map_err(|_| SchemaError::Degenerate(id))?,
            });
        }
        let trees = vec![(0..edges.len()).collect()];
        Ok(CutForest {
            edges,
            trees,
            boundary_attachments: vec![attach],
        })
    }
}

impl CutStrategy for VerticalDrop {
    fn name(&self) -> &'static str {
        "vertical-drop"
    }

    fn draw(&self, env: &Environment) -> Result<CutForest, SchemaError> {
        let mut forest = CutForest::empty();
        for t in env.interior_terminals() {
            let foot = Point::new(t.center.x, env.bounds.y_min);
            let id = forest.edges.len();
            forest.edges.push(CutEdge {
                id,
                tail: Attach::Boundary(foot),
                head: t.id(),
                segment: Segment::new(foot, t.center).map_err(|_| SchemaError::Degenerate(id))?,
            });
            forest.trees.push(vec![id]);
            forest.boundary_attachments.push(foot);
        }
        Ok(forest)
    }
}

/// Prim's algorithm on the complete Euclidean graph; returns each vertex's
/// parent in the tree rooted at `root`.
pub fn emst_parents(points: &[Point], root: usize) -> Vec<Option<usize>> {
    let n = points.len();
    let mut parent = vec![None; n];
    let mut best = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    best[root] = 0.0;
    for _ in 0..n {
        let mut v = usize::MAX;
        for i in 0..n {
            if !done[i] && (v == usize::MAX || best[i] < best[v]) {
                v = i;
            }
        }
        done[v] = true;
        for w in 0..n {
            if !done[w] {
                let d = points[v].dist(points[w]);
                if d < best[w] {
                    best[w] = d;
                    parent[w] = Some(v);
                }
            }
        }
    }
    parent
}

/// Height of the right-boundary attachment: the root's own height unless that
/// lands within [`ATTACH_PIN_CLEARANCE`] of a right-boundary terminal, in which
/// case the nearest clear height is used (ties go down).
fn attachment_height(env: &Environment, y0: f64) -> f64 {
    let b = env.bounds;
    let pins: Vec<f64> = env
        .terminals()
        .filter(|t| env.bounds.on_boundary(t.center) && (t.center.x - b.x_max).abs() < EPS)
        .map(|t| t.center.y)
        .collect();
    let lo = b.y_min + ATTACH_PIN_CLEARANCE;
    let hi = b.y_max - ATTACH_PIN_CLEARANCE;
    let ok = |y: f64| {
        y >= lo
            && y <= hi
            && pins
                .iter()
                .all(|p| (p - y).abs() >= ATTACH_PIN_CLEARANCE - EPS)
    };
    let mut candidates = vec![y0.clamp(lo, hi)];
    for p in &pins {
        candidates.push(p - ATTACH_PIN_CLEARANCE);
        candidates.push(p + ATTACH_PIN_CLEARANCE);
    }
    candidates
        .into_iter()
        .filter(|&y| ok(y))
        .min_by(|a, b| {
            (a - y0)
                .abs()
                .total_cmp(&(b - y0).abs())
                .then(a.total_cmp(b))
        })
        .unwrap_or(y0)
}

/// Draws the cut forest with `strategy` and refuses to return a forest that
/// fails its own invariants.
pub fn build_cut_forest(
    env: &Environment,
    strategy: &dyn CutStrategy,
) -> Result<CutForest, SchemaError> {
    if env.validate().is_err() {
        return Err(SchemaError::InvalidEnvironment);
    }
    let forest = strategy.draw(env)?;
    forest.check(env)?;
    Ok(forest)
}

/// One piece of the cut-open contour, running from vertex `i` to vertex `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    Boundary,
    Cut { edge: usize, side: Side },
}

/// Closed contour of the cut-open domain, domain on the walking direction's left.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub vertices: Vec<Point>,
    /// `pieces[i]` joins `vertices[i]` to `vertices[(i + 1) % len]`.
    pub pieces: Vec<Piece>,
}

impl Contour {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn piece_endpoints(&self, i: usize) -> (Point, Point) {
        (
            self.vertices[i],
            self.vertices[(i + 1) % self.vertices.len()],
        )
    }
}

/// Where a frame node sits on the embedded contour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourAnchor {
    /// A terminal at a contour vertex.
    Vertex(usize),
    /// A pinched cut side covering a whole contour piece.
    Piece(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlueprintNode {
    pub kind: NodeKind,
    pub anchor: ContourAnchor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameBlueprint {
    pub nodes: Vec<BlueprintNode>,
    pub contour: Contour,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkDirection {
    Anticlockwise,
    Clockwise,
}

struct Walker {
    contour: Contour,
    nodes: Vec<BlueprintNode>,
    emitted: BTreeSet<TerminalId>,
}

impl Walker {
    fn push_vertex(&mut self, p: Point, incoming: Piece) -> usize {
        if let Some(&last) = self.contour.vertices.last() {
            if last.dist(p) < EPS && incoming == Piece::Boundary {
                return self.contour.vertices.len() - 1;
            }
        }
        if !self.contour.vertices.is_empty() {
            self.contour.pieces.push(incoming);
        }
        self.contour.vertices.push(p);
        self.contour.vertices.len() - 1
    }

    fn emit_terminal(&mut self, id: TerminalId, vertex: usize) {
        if self.emitted.insert(id) {
            self.nodes.push(BlueprintNode {
                kind: NodeKind::Terminal(id),
                anchor: ContourAnchor::Vertex(vertex),
            });
        }
    }

    fn walk_edge(&mut self, edge: usize, side: Side, to: Point) -> usize {
        let piece = self.contour.vertices.len() - 1;
        self.nodes.push(BlueprintNode {
            kind: NodeKind::RefPoint { edge, side },
            anchor: ContourAnchor::Piece(piece),
        });
        self.push_vertex(to, Piece::Cut { edge, side })
    }
}

#[derive(Clone, Copy)]
enum Vertex {
    Boundary(Point),
    Terminal(TerminalId, Point),
}

impl Vertex {
    fn point(self) -> Point {
        match self {
            Vertex::Boundary(p) | Vertex::Terminal(_, p) => p,
        }
    }
}

/// Walks the cut-open domain anticlockwise from the corner `(x_max, y_min)`.
pub fn contour_walk(env: &Environment, forest: &CutForest) -> Result<FrameBlueprint, SchemaError> {
    contour_walk_directed(env, forest, WalkDirection::Anticlockwise)
}

/// Contour walk in either direction. Boundary terminals are emitted in
/// encounter order, each cut side becomes one reference node, and each
/// interior terminal is emitted at its first passage.
pub fn contour_walk_directed(
    env: &Environment,
    forest: &CutForest,
    dir: WalkDirection,
) -> Result<FrameBlueprint, SchemaError> {
    forest.check(env)?;
    walk(env, forest, dir)
}

/// Contour walk over a forest that already passed [`CutForest::check`].
pub(crate) fn walk(
    env: &Environment,
    forest: &CutForest,
    dir: WalkDirection,
) -> Result<FrameBlueprint, SchemaError> {
    let b = env.bounds;
    let total = b.perimeter();

    #[derive(Clone, Copy)]
    enum Event {
        Corner(Point),
        Tree(usize),
        Pin(TerminalId, Point),
    }
    let mut events: Vec<(f64, u8, usize, Event)> = Vec::new();
    for (i, c) in b.corners().iter().enumerate().skip(1) {
        events.push((b.boundary_parameter(*c), 0, i, Event::Corner(*c)));
    }
    for (i, p) in forest.boundary_attachments.iter().enumerate() {
        events.push((b.boundary_parameter(*p), 1, i, Event::Tree(i)));
    }
    for (i, t) in env.terminals().enumerate() {
        if env.is_boundary_terminal(t) {
            events.push((
                b.boundary_parameter(t.center),
                2,
                i,
                Event::Pin(t.id(), t.center),
            ));
        }
    }
    let key = |s: f64| match dir {
        WalkDirection::Anticlockwise => s,
        WalkDirection::Clockwise => {
            if s == 0.0 {
                0.0
            } else {
                total - s
            }
        }
    };
    events.sort_by(|x, y| {
        key(x.0)
            .total_cmp(&key(y.0))
            .then(x.1.cmp(&y.1))
            .then(x.2.cmp(&y.2))
    });

    // Adjacency of the forest as a plane graph.
    let mut vertices: Vec<Vertex> = Vec::new();
    let index_of = |v: Vertex, vertices: &mut Vec<Vertex>| -> usize {
        let found = vertices.iter().position(|w| match (w, &v) {
            (Vertex::Terminal(a, _), Vertex::Terminal(b, _)) => a == b,
            (Vertex::Boundary(p), Vertex::Boundary(q)) => p == q,
            _ => false,
        });
        found.unwrap_or_else(|| {
            vertices.push(v);
            vertices.len() - 1
        })
    };
    let mut adj: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut edge_ends = Vec::with_capacity(forest.edges.len());
    for e in &forest.edges {
        let tail = match e.tail {
            Attach::Terminal(t) => Vertex::Terminal(t, e.segment.a()),
            Attach::Boundary(p) => Vertex::Boundary(p),
        };
        let u = index_of(tail, &mut vertices);
        let v = index_of(Vertex::Terminal(e.head, e.segment.b()), &mut vertices);
        adj.resize(vertices.len(), Vec::new());
        adj[u].push((v, e.id));
        adj[v].push((u, e.id));
        edge_ends.push((u, v));
    }

    let mut w = Walker {
        contour: Contour {
            vertices: Vec::new(),
            pieces: Vec::new(),
        },
        nodes: Vec::new(),
        emitted: BTreeSet::new(),
    };
    w.push_vertex(b.corners()[0], Piece::Boundary);
    let mut walked = vec![false; forest.edges.len()];

    for &(_, _, _, ev) in &events {
        match ev {
            Event::Corner(p) => {
                w.push_vertex(p, Piece::Boundary);
            }
            Event::Pin(id, p) => {
                let v = w.push_vertex(p, Piece::Boundary);
                w.emit_terminal(id, v);
            }
            Event::Tree(ti) => {
                let root_edge = forest.trees[ti][0];
                let attach = forest.boundary_attachments[ti];
                w.push_vertex(attach, Piece::Boundary);
                let (start, first) = edge_ends[root_edge];
                let (mut from, mut at, mut edge) = (start, first, root_edge);
                loop {
                    let side = if walked[edge] { Side::B } else { Side::A };
                    walked[edge] = true;
                    let vi = w.walk_edge(edge, side, vertices[at].point());
                    match vertices[at] {
                        Vertex::Terminal(id, _) => w.emit_terminal(id, vi),
                        Vertex::Boundary(_) => break,
                    }
                    let (next, next_edge) = next_around(&vertices, &adj[at], at, from, dir);
                    from = at;
                    at = next;
                    edge = next_edge;
                }
            }
        }
    }
    // Drop a duplicated closing vertex (a pin exactly at the start corner).
    let first = w.contour.vertices[0];
    if w.contour.vertices.len() > 1 && w.contour.vertices.last().unwrap().dist(first) < EPS {
        w.contour.vertices.pop();
        w.contour.pieces.pop();
        let last = w.contour.vertices.len();
        for n in &mut w.nodes {
            if n.anchor == ContourAnchor::Vertex(last) {
                n.anchor = ContourAnchor::Vertex(0);
            }
        }
    }
    w.contour.pieces.push(Piece::Boundary);
    Ok(FrameBlueprint {
        nodes: w.nodes,
        contour: w.contour,
    })
}

/// Next edge around `at` after the edge back to `from`: clockwise when walking
/// anticlockwise (keeps the domain on the left), counter-clockwise otherwise.
fn next_around(
    vertices: &[Vertex],
    adj: &[(usize, usize)],
    at: usize,
    from: usize,
    dir: WalkDirection,
) -> (usize, usize) {
    let here = vertices[at].point();
    let back = (vertices[from].point() - here).angle();
    let mut best = (f64::INFINITY, (from, usize::MAX));
    for &(to, edge) in adj {
        let a = (vertices[to].point() - here).angle();
        let raw = match dir {
            WalkDirection::Anticlockwise => back - a,
            WalkDirection::Clockwise => a - back,
        };
        let mut delta = libm::fmod(raw, TAU);
        if delta < 0.0 {
            delta += TAU;
        }
        if delta <= 0.0 || (to == from && delta < 1e-12) {
            delta = TAU;
        }
        if delta < best.0 {
            best = (delta, (to, edge));
        }
    }
    best.1
}

impl fmt::Display for CutForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "forest edges={} trees={}",
            self.edges.len(),
            self.trees.len()
        )?;
        for e in &self.edges {
            let tail = match e.tail {
                Attach::Terminal(t) => alloc::format!("{t}"),
                Attach::Boundary(p) => alloc::format!("b{p}"),
            };
            writeln!(
                f,
                "edge {} {} -> {} {} {}",
                e.id,
                tail,
                e.head,
                e.segment.a(),
                e.segment.b()
            )?;
        }
        for (i, (t, p)) in self
            .trees
            .iter()
            .zip(&self.boundary_attachments)
            .enumerate()
        {
            writeln!(f, "tree {i} attach {p} edges {t:?}")?;
        }
        Ok(())
    }
}

impl fmt::Display for FrameBlueprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "blueprint nodes={} contour_vertices={}",
            self.nodes.len(),
            self.contour.len()
        )?;
        for (i, n) in self.nodes.iter().enumerate() {
            match n.anchor {
                ContourAnchor::Vertex(v) => writeln!(
                    f,
                    "{i} {} at vertex {v} {}",
                    n.kind, self.contour.vertices[v]
                )?,
                ContourAnchor::Piece(p) => {
                    let (a, b) = self.contour.piece_endpoints(p);
                    writeln!(f, "{i} {} on piece {p} {a} -> {b}", n.kind)?
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{Bounds, GenParams, TerminalKind};

    fn end(net: usize) -> TerminalId {
        TerminalId {
            net,
            kind: TerminalKind::End,
        }
    }

    fn start(net: usize) -> TerminalId {
        TerminalId {
            net,
            kind: TerminalKind::Start,
        }
    }

    #[test]
    fn single_interior_terminal_gets_horizontal_cut() {
        let env = Environment::from_centers(
            Bounds::square50(),
            0.5,
            &[Point::new(50.0, 20.0)],
            &[Point::new(0.0, 0.0)],
            0,
        );
        let forest = build_cut_forest(&env, &EmstAttach).unwrap();
        assert_eq!(forest.edges.len(), 1);
        assert_eq!(forest.edges[0].segment.a(), Point::new(50.0, 0.0));
        assert_eq!(forest.edges[0].segment.b(), Point::new(0.0, 0.0));
        assert_eq!(forest.edges[0].head, end(1));
    }

    #[test]
    fn two_terminals_tie_break_on_lowest_y() {
        let env = Environment::from_centers(
            Bounds::square50(),
            0.5,
            &[Point::new(50.0, 20.0), Point::new(50.0, 28.0)],
            &[Point::new(0.0, 0.0), Point::new(0.0, 5.0)],
            0,
        );
        let forest = build_cut_forest(&env, &EmstAttach).unwrap();
        assert_eq!(forest.edges.len(), 2);
        assert_eq!(forest.edges[0].head, end(1));
        assert_eq!(forest.edges[0].segment.a(), Point::new(50.0, 0.0));
        assert_eq!(forest.edges[1].tail, Attach::Terminal(end(1)));
        assert_eq!(forest.edges[1].head, end(2));
    }

    #[test]
    fn attachment_slides_off_a_pin() {
        let env = Environment::from_centers(
            Bounds::square50(),
            0.5,
            &[Point::new(50.0, 0.0)],
            &[Point::new(0.0, 0.0)],
            0,
        );
        let forest = build_cut_forest(&env, &EmstAttach).unwrap();
        assert_eq!(forest.boundary_attachments, vec![Point::new(50.0, -1.0)]);
    }

    #[test]
    fn single_pin_contour_order() {
        // Manual trace: up the right side the attachment (y = -1) comes before
        // the pin (y = 0); the cut's lower side, the leaf, then its upper side.
        let env = Environment::from_centers(
            Bounds::square50(),
            0.5,
            &[Point::new(50.0, 0.0)],
            &[Point::new(0.0, 0.0)],
            0,
        );
        let forest = build_cut_forest(&env, &EmstAttach).unwrap();
        let bp = contour_walk(&env, &forest).unwrap();
        let kinds: Vec<NodeKind> = bp.nodes.iter().map(|n| n.kind).collect();
        assert_eq!(
            kinds,
            vec![
                NodeKind::RefPoint {
                    edge: 0,
                    side: Side::A
                },
                NodeKind::Terminal(end(1)),
                NodeKind::RefPoint {
                    edge: 0,
                    side: Side::B
                },
                NodeKind::Terminal(start(1)),
            ]
        );
        // The lower side is walked heading west.
        let ContourAnchor::Piece(p) = bp.nodes[0].anchor else {
            panic!()
        };
        let (a, b) = bp.contour.piece_endpoints(p);
        assert!(b.x < a.x);
    }

    #[test]
    fn no_interior_terminals_gives_boundary_order() {
        let env = Environment::from_centers(
            Bounds::square50(),
            0.5,
            &[Point::new(50.0, 10.0), Point::new(-50.0, 0.0)],
            &[Point::new(0.0, 50.0), Point::new(0.0, -50.0)],
            0,
        );
        let forest = build_cut_forest(&env, &EmstAttach).unwrap();
        assert!(forest.edges.is_empty());
        let bp = contour_walk(&env, &forest).unwrap();
        let kinds: Vec<NodeKind> = bp.nodes.iter().map(|n| n.kind).collect();
        assert_eq!(
            kinds,
            vec![
                NodeKind::Terminal(start(1)),
                NodeKind::Terminal(end(1)),
                NodeKind::Terminal(start(2)),
                NodeKind::Terminal(end(2)),
            ]
        );
    }

    #[test]
    fn vertical_drop_builds_a_forest() {
        let env = crate::env::generate(&GenParams::default(), 9).unwrap();
        let forest = build_cut_forest(&env, &VerticalDrop).unwrap();
        assert_eq!(forest.trees.len(), 8);
        let bp = contour_walk(&env, &forest).unwrap();
        assert_eq!(bp.nodes.len(), 16 + 16);
    }

    #[test]
    fn vertical_drop_overlap_is_a_hard_error() {
        let env = Environment::from_centers(
            Bounds::square50(),
            0.5,
            &[Point::new(50.0, 20.0), Point::new(50.0, 28.0)],
            &[Point::new(0.0, 0.0), Point::new(0.0, 5.0)],
            0,
        );
        assert!(matches!(
            build_cut_forest(&env, &VerticalDrop),
            Err(SchemaError::Crossing { .. })
        ));
    }

    #[test]
    fn corrupted_forest_is_rejected() {
        let env = crate::env::generate(&GenParams::default(), 4).unwrap();
        let mut forest = build_cut_forest(&env, &EmstAttach).unwrap();
        forest.trees[0].pop();
        let dropped = forest.edges.pop().unwrap();
        assert_eq!(
            forest.check(&env),
            Err(SchemaError::Uncovered(dropped.head))
        );
    }

    #[test]
    fn emst_prim_matches_small_case() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(10.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 3.0),
        ];
        let parent = emst_parents(&pts, 1);
        assert_eq!(parent, vec![Some(2), None, Some(1), Some(2)]);
    }
}
