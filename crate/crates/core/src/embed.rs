//! Maps routed chord chains back to the plane.
//!
//! Every chord is drawn along the contour of the cut-open domain, between the
//! ports of its two endpoints, at a fixed inward offset. Chords are nested
//! around a common root position on the contour, and a chord enclosing others
//! runs on a farther track, so the drawing inherits planarity from the frame.
//! Sewing the cuts back together joins the chords of a chain at their shared
//! crossing points.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::env::{Environment, TerminalId};
use crate::frame::{ChordChain, CircularFrame, NodeKind, Side};
use crate::geom::{
    meeting_pairs, orient_unchecked, point_polyline_clearance, segments_intersect, GeomError,
    Orientation, Point, Polyline, SegmentRelation, EPS,
};
use crate::router::RoutingResult;
use crate::schema::{ContourAnchor, CutForest, FrameBlueprint};

/// Upper bound on the track pitch.
pub const DEFAULT_EPSILON: f64 = 0.15;
/// Number of pitch halvings tried after a failed disjointness check.
pub const MAX_RETRIES: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmbedError {
    #[error("net {0} has no chord chain")]
    MissingChain(usize),
    #[error("frame node {0} has no anchor on the contour")]
    Unanchored(usize),
    #[error("routes of nets {a} and {b} still meet after {attempts} attempts")]
    NotDisjoint { a: usize, b: usize, attempts: usize },
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum PortAt {
    Vertex(usize),
    Piece(usize, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Port {
    at: PortAt,
    point: Point,
    /// Arclength from contour vertex 0.
    pos: f64,
}

/// Offset tracks of all chords.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackAssignment {
    pub epsilon: f64,
    /// Contour arclength position that no chord's drawn arc contains.
    pub root: f64,
    /// Track index per chord; the offset is `epsilon * (track + 1)`.
    pub tracks: Vec<usize>,
    /// Chords running along each contour piece as `(net, chord)`, innermost
    /// track first, concatenated piece by piece.
    occupants: Vec<(usize, usize)>,
    /// Start of each piece's run in `occupants`, plus the total length.
    piece_starts: Vec<usize>,
}

impl TrackAssignment {
    /// Chords running along contour piece `i` as `(net, chord)`, innermost
    /// track first.
    pub fn piece(&self, i: usize) -> &[(usize, usize)] {
        &self.occupants[self.piece_starts[i]..self.piece_starts[i + 1]]
    }

    pub fn piece_count(&self) -> usize {
        self.piece_starts.len() - 1
    }

    pub fn max_track(&self) -> usize {
        self.tracks.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    pub net: usize,
    pub polyline: Polyline,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    /// One route per net, sorted by net.
    pub routes: Vec<Route>,
    pub tracks: TrackAssignment,
    pub attempts: usize,
}

struct ContourGeom {
    vertices: Vec<Point>,
    dirs: Vec<Point>,
    starts: Vec<f64>,
    total: f64,
}

impl ContourGeom {
    fn new(bp: &FrameBlueprint) -> Self {
        let v = &bp.contour.vertices;
        let n = v.len();
        let mut dirs = Vec::with_capacity(n);
        let mut starts = Vec::with_capacity(n);
        let mut acc = 0.0;
        for i in 0..n {
            let d = v[(i + 1) % n] - v[i];
            starts.push(acc);
            acc += d.norm();
            dirs.push(d.normalized());
        }
        ContourGeom {
            vertices: v.clone(),
            dirs,
            starts,
            total: acc,
        }
    }

    fn len(&self) -> usize {
        self.vertices.len()
    }

    fn normal(&self, piece: usize) -> Point {
        self.dirs[piece].perp()
    }

    /// Appends the offset points at vertex `i` for distance `d`, in walking order.
    /// A reflex turn of more than a right angle is split into two mitres.
    fn corner_into(&self, i: usize, d: f64, out: &mut Vec<Point>) {
        let p = self.vertices[i];
        let a = self.dirs[(i + self.len() - 1) % self.len()];
        let b = self.dirs[i];
        let (na, nb) = (a.perp(), b.perp());
        let (cross, cos) = (a.cross(b), a.dot(b));
        let reversal = cross.abs() < 1e-12 && cos < 0.0;
        // Mitre point between offset lines with unit normals `u` and `v`.
        let mitre = |u: Point, v: Point| p + (u + v) * (d / (1.0 + u.dot(v)));
        if (cross >= 0.0 && !reversal) || cos > -1e-9 {
            out.push(mitre(na, nb));
        } else {
            let half_cos = libm::sqrt(((1.0 + cos) / 2.0).max(0.0));
            let half_sin = libm::sqrt(((1.0 - cos) / 2.0).max(0.0));
            let m = na * half_cos + Point::new(na.y, -na.x) * half_sin;
            out.push(mitre(na, m));
            out.push(mitre(m, nb));
        }
    }
}

fn port_parameter(slot: usize, count: usize) -> f64 {
    0.25 + 0.5 * (slot + 1) as f64 / (count + 1) as f64
}

/// Port of every chord end, indexed `[chord][0 = from, 1 = to]`.
fn ports(frame: &CircularFrame, geom: &ContourGeom) -> Result<Vec<[Port; 2]>, EmbedError> {
    let at_node = |node: usize, chord: usize| -> Result<Port, EmbedError> {
        let n = frame.node(node);
        match (n.anchor, n.kind) {
            (Some(ContourAnchor::Vertex(i)), _) => Ok(Port {
                at: PortAt::Vertex(i),
                point: geom.vertices[i],
                pos: geom.starts[i],
            }),
            (Some(ContourAnchor::Piece(i)), NodeKind::RefPoint { side, .. }) => {
                let slot = frame.slot_of(node, chord).unwrap();
                let t = port_parameter(slot, frame.slots(node).len());
                let t = if side == Side::A { t } else { 1.0 - t };
                let a = geom.vertices[i];
                let b = geom.vertices[(i + 1) % geom.len()];
                let len = a.dist(b);
                Ok(Port {
                    at: PortAt::Piece(i, t),
                    point: a.lerp(b, t),
                    pos: geom.starts[i] + t * len,
                })
            }
            _ => Err(EmbedError::Unanchored(node)),
        }
    };
    frame
        .chords()
        .iter()
        .map(|c| Ok([at_node(c.from, c.id)?, at_node(c.to, c.id)?]))
        .collect()
}

/// Root position minimising the total drawn arc length.
fn choose_root(ports: &[[Port; 2]], total: f64) -> f64 {
    let spans: Vec<(f64, f64)> = ports.iter().map(|p| minmax(p[0].pos, p[1].pos)).collect();
    let mut pos: Vec<f64> = spans.iter().flat_map(|&(lo, hi)| [lo, hi]).collect();
    if pos.is_empty() {
        return 0.0;
    }
    pos.sort_unstable_by(f64::total_cmp);
    let mut best = (f64::INFINITY, 0.0);
    for k in 0..pos.len() {
        let next = if k + 1 < pos.len() {
            pos[k + 1]
        } else {
            pos[0] + total
        };
        let mut g = (pos[k] + next) / 2.0;
        if g >= total {
            g -= total;
        }
        let cost: f64 = spans
            .iter()
            .map(|&(lo, hi)| {
                if lo < g && g < hi {
                    total - (hi - lo)
                } else {
                    hi - lo
                }
            })
            .sum();
        if cost < best.0 - 1e-9 {
            best = (cost, g);
        }
    }
    best.1
}

fn minmax(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Drawn arc of each chord as `(first end, last end)` in walking order, and
/// its interval in root-relative arclength.
fn arcs(ports: &[[Port; 2]], root: f64, total: f64) -> Vec<(usize, usize, f64, f64)> {
    ports
        .iter()
        .map(|p| {
            let rel = |x: f64| (x - root).rem_euclid_f(total);
            let (a, b) = (rel(p[0].pos), rel(p[1].pos));
            if a < b {
                (0, 1, a, b)
            } else {
                (1, 0, b, a)
            }
        })
        .collect()
}

trait RemEuclid {
    fn rem_euclid_f(self, m: f64) -> f64;
}

impl RemEuclid for f64 {
    fn rem_euclid_f(self, m: f64) -> f64 {
        let r = libm::fmod(self, m);
        if r < 0.0 {
            r + m
        } else {
            r
        }
    }
}

fn nesting_tracks(arcs: &[(usize, usize, f64, f64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..arcs.len()).collect();
    order.sort_unstable_by(|&i, &j| {
        (arcs[i].3 - arcs[i].2)
            .total_cmp(&(arcs[j].3 - arcs[j].2))
            .then(i.cmp(&j))
    });
    let mut tracks = vec![0usize; arcs.len()];
    for (k, &i) in order.iter().enumerate() {
        let (lo, hi) = (arcs[i].2, arcs[i].3);
        tracks[i] = order[..k]
            .iter()
            .filter(|&&j| lo < arcs[j].2 && arcs[j].3 < hi)
            .map(|&j| tracks[j] + 1)
            .max()
            .unwrap_or(0);
    }
    tracks
}

/// Largest pitch the environment's spacing allows for `max_track`.
pub fn pitch_for(env: &Environment, max_track: usize) -> f64 {
    let r = env.terminals().map(|t| t.radius).fold(0.0, f64::max);
    let budget = ((env.min_separation - 2.0 * r).min(env.min_boundary_clearance) / 2.0).max(0.0);
    let eps = DEFAULT_EPSILON.min(0.9 * budget / (max_track + 1) as f64);
    if eps > 0.0 {
        eps
    } else {
        DEFAULT_EPSILON / (max_track + 1) as f64
    }
}

/// Computes the track layout for the routed frame.
pub fn assign_tracks(
    result: &RoutingResult,
    bp: &FrameBlueprint,
    env: &Environment,
) -> Result<TrackAssignment, EmbedError> {
    let geom = ContourGeom::new(bp);
    let ports = ports(&result.frame, &geom)?;
    Ok(layout(&result.frame, &geom, &ports, env).0)
}

fn layout(
    frame: &CircularFrame,
    geom: &ContourGeom,
    ports: &[[Port; 2]],
    env: &Environment,
) -> (TrackAssignment, Vec<(usize, usize, f64, f64)>) {
    let root = choose_root(ports, geom.total);
    let arcs = arcs(ports, root, geom.total);
    let tracks = nesting_tracks(&arcs);
    let max_track = tracks.iter().copied().max().unwrap_or(0);
    let spans: Vec<(f64, f64)> = (0..geom.len())
        .map(|i| {
            let a = (geom.starts[i] - root).rem_euclid_f(geom.total);
            let next = if i + 1 < geom.len() {
                geom.starts[i + 1]
            } else {
                geom.total
            };
            (a, a + next - geom.starts[i])
        })
        .collect();
    let mut occupants = Vec::with_capacity(4 * arcs.len());
    let mut piece_starts = Vec::with_capacity(spans.len() + 1);
    for &(a, b) in &spans {
        let start = occupants.len();
        piece_starts.push(start);
        for (c, &(_, _, lo, hi)) in arcs.iter().enumerate() {
            if lo < b && a < hi {
                occupants.push((frame.chord(c).net, c));
            }
        }
        occupants[start..].sort_unstable_by_key(|&(_, c)| (tracks[c], c));
    }
    piece_starts.push(occupants.len());
    let epsilon = pitch_for(env, max_track);
    (
        TrackAssignment {
            epsilon,
            root,
            tracks,
            occupants,
            piece_starts,
        },
        arcs,
    )
}

fn draw_arc(geom: &ContourGeom, from: Port, to: Port, d: f64, pts: &mut Vec<Point>) {
    let n = geom.len();
    let start = pts.len();
    pts.push(from.point);
    let first_vertex = match from.at {
        PortAt::Vertex(i) => {
            geom.corner_into(i, d, pts);
            let last = *pts.last().unwrap();
            pts.truncate(start + 1);
            pts.push(last);
            (i + 1) % n
        }
        PortAt::Piece(i, _) => {
            pts.push(from.point + geom.normal(i) * d);
            (i + 1) % n
        }
    };
    let stop = match to.at {
        PortAt::Vertex(i) => i,
        PortAt::Piece(i, _) => (i + 1) % n,
    };
    let mut v = first_vertex;
    let mut guard = 0;
    while v != stop && guard <= n {
        geom.corner_into(v, d, pts);
        v = (v + 1) % n;
        guard += 1;
    }
    match to.at {
        PortAt::Vertex(i) => {
            let mark = pts.len();
            geom.corner_into(i, d, pts);
            pts.truncate(mark + 1);
        }
        PortAt::Piece(i, _) => pts.push(to.point + geom.normal(i) * d),
    }
    pts.push(to.point);
}

fn realize(
    chains: &[&ChordChain],
    geom: &ContourGeom,
    ports: &[[Port; 2]],
    arcs: &[(usize, usize, f64, f64)],
    tracks: &[usize],
    eps: f64,
) -> Result<Vec<Route>, EmbedError> {
    let mut routes = Vec::with_capacity(chains.len());
    for chain in chains {
        let mut pts: Vec<Point> = Vec::with_capacity(8 * geom.len());
        for (k, &c) in chain.chords.iter().enumerate() {
            let (a, b, _, _) = arcs[c];
            let d = eps * (tracks[c] + 1) as f64;
            let mark = pts.len();
            draw_arc(geom, ports[c][a], ports[c][b], d, &mut pts);
            if a == 1 {
                pts[mark..].reverse();
            }
            if k > 0 {
                // Drop the shared crossing point on the cut so the crossing
                // becomes one straight segment.
                pts.remove(mark);
                pts.remove(mark - 1);
            }
        }
        pts.dedup_by(|p, q| (*p - *q).dot(*p - *q) < EPS * EPS);
        routes.push(Route {
            net: chain.net,
            polyline: Polyline::new(pts)?,
        });
    }
    Ok(routes)
}

/// Sews the cuts back together and draws every net as a polyline from its
/// start center to its end center. Halves the pitch and retries if the drawing
/// is not pairwise disjoint.
pub fn sew_and_realize(
    result: &RoutingResult,
    bp: &FrameBlueprint,
    env: &Environment,
) -> Result<Embedding, EmbedError> {
    let mut chains: Vec<&ChordChain> = result.chains.iter().collect();
    chains.sort_by_key(|c| c.net);
    for net in 1..=env.net_count() {
        if !chains.iter().any(|c| c.net == net) {
            return Err(EmbedError::MissingChain(net));
        }
    }
    let geom = ContourGeom::new(bp);
    let ports = ports(&result.frame, &geom)?;
    let (mut tracks, arcs) = layout(&result.frame, &geom, &ports, env);
    let mut last = (0, 0);
    for attempt in 0..=MAX_RETRIES {
        let routes = realize(
            &chains,
            &geom,
            &ports,
            &arcs,
            &tracks.tracks,
            tracks.epsilon,
        )?;
        match first_conflict(&routes) {
            None => {
                return Ok(Embedding {
                    routes,
                    tracks,
                    attempts: attempt + 1,
                })
            }
            Some(pair) => last = pair,
        }
        tracks.epsilon /= 2.0;
    }
    Err(EmbedError::NotDisjoint {
        a: last.0,
        b: last.1,
        attempts: MAX_RETRIES + 1,
    })
}

/// Realizes every chain at a fixed track pitch, without the disjointness check.
pub fn realize_at_pitch(
    result: &RoutingResult,
    bp: &FrameBlueprint,
    env: &Environment,
    epsilon: f64,
) -> Result<Vec<Route>, EmbedError> {
    let mut chains: Vec<&ChordChain> = result.chains.iter().collect();
    chains.sort_by_key(|c| c.net);
    let geom = ContourGeom::new(bp);
    let ports = ports(&result.frame, &geom)?;
    let (tracks, arcs) = layout(&result.frame, &geom, &ports, env);
    realize(&chains, &geom, &ports, &arcs, &tracks.tracks, epsilon)
}

fn first_conflict(routes: &[Route]) -> Option<(usize, usize)> {
    let lines: Vec<&Polyline> = routes.iter().map(|r| &r.polyline).collect();
    meeting_pairs(&lines, true)
        .first()
        .map(|&(i, j)| (routes[i].net, routes[j].net))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClearanceFlag {
    pub net: usize,
    pub terminal: TerminalId,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingReport {
    /// Number of route pairs that meet.
    pub intersections: usize,
    /// Per route, the smallest distance to the center of a terminal of another net.
    pub terminal_clearance: Vec<f64>,
    /// Routes passing closer to a foreign terminal center than its radius.
    pub flags: Vec<ClearanceFlag>,
    /// Per route, the smallest distance to the bounds over its interior vertices.
    pub boundary_clearance: Vec<f64>,
    pub out_of_bounds: usize,
    pub lengths: Vec<f64>,
}

impl EmbeddingReport {
    pub fn total_length(&self) -> f64 {
        self.lengths.iter().sum()
    }
}

/// Measures a set of routes against the environment.
pub fn verify_embedding(routes: &[Route], env: &Environment) -> EmbeddingReport {
    let lines: Vec<&Polyline> = routes.iter().map(|r| &r.polyline).collect();
    let intersections = meeting_pairs(&lines, false).len();
    let mut terminal_clearance = Vec::with_capacity(routes.len());
    let mut flags = Vec::new();
    let mut boundary_clearance = Vec::with_capacity(routes.len());
    let mut out_of_bounds = 0;
    for r in routes {
        let mut best = f64::INFINITY;
        for t in env.terminals().filter(|t| t.net != r.net) {
            let d = point_polyline_clearance(t.center, &r.polyline);
            best = best.min(d);
            if d < t.radius {
                flags.push(ClearanceFlag {
                    net: r.net,
                    terminal: t.id(),
                    distance: d,
                });
            }
        }
        terminal_clearance.push(best);
        let v = r.polyline.vertices();
        let inner = if v.len() > 2 { &v[1..v.len() - 1] } else { v };
        let mut b = f64::INFINITY;
        for &p in inner {
            b = b.min(env.bounds.distance_to_boundary(p));
        }
        if v.iter().any(|&p| !env.bounds.contains(p)) {
            out_of_bounds += 1;
        }
        boundary_clearance.push(b);
    }
    EmbeddingReport {
        intersections,
        terminal_clearance,
        flags,
        boundary_clearance,
        out_of_bounds,
        lengths: routes.iter().map(|r| r.polyline.length()).collect(),
    }
}

/// Direction of travel along each cut edge's first-walked side.
pub fn side_a_directions(bp: &FrameBlueprint, forest: &CutForest) -> Vec<Point> {
    let mut dirs = vec![Point::new(0.0, 0.0); forest.edges.len()];
    for n in &bp.nodes {
        if let (
            NodeKind::RefPoint {
                edge,
                side: Side::A,
            },
            ContourAnchor::Piece(i),
        ) = (n.kind, n.anchor)
        {
            let (a, b) = bp.contour.piece_endpoints(i);
            dirs[edge] = b - a;
        }
    }
    dirs
}

/// Cut edges crossed by `route`, in order, with the side each crossing enters
/// from: `Side::A` when the route arrives from the left of the side-A direction.
pub fn crossing_sequence(
    route: &Polyline,
    forest: &CutForest,
    side_a: &[Point],
) -> Vec<(usize, Side)> {
    let mut out = Vec::new();
    for s in route.segments() {
        let mut hits: Vec<(f64, usize, Side)> = Vec::new();
        for e in &forest.edges {
            let cut = &e.segment;
            if segments_intersect(&s, cut) != SegmentRelation::Proper {
                continue;
            }
            let o1 = orient_unchecked(cut.a(), cut.b(), s.a());
            let o2 = orient_unchecked(cut.a(), cut.b(), s.b());
            if o1 == Orientation::Collinear || o2 == Orientation::Collinear || o1 == o2 {
                continue;
            }
            let left_of_cut = o1 == Orientation::CounterClockwise;
            let agrees = cut.direction().dot(side_a[e.id]) > 0.0;
            let side = if left_of_cut == agrees {
                Side::A
            } else {
                Side::B
            };
            let (p, q) = (s.a(), s.b() - s.a());
            let w = cut.b() - cut.a();
            let t = (cut.a() - p).cross(w) / q.cross(w);
            hits.push((t, e.id, side));
        }
        hits.sort_by(|x, y| x.0.total_cmp(&y.0));
        out.extend(hits.into_iter().map(|(_, e, s)| (e, s)));
    }
    out
}

/// Cut edges a chain passes through, with the side it enters from.
pub fn chain_crossings(chain: &ChordChain, frame: &CircularFrame) -> Vec<(usize, Side)> {
    chain
        .entries(frame)
        .into_iter()
        .filter_map(|n| match frame.node(n).kind {
            NodeKind::RefPoint { edge, side } => Some((edge, side)),
            NodeKind::Terminal(_) => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{Bounds, Environment};
    use crate::frame::CircularFrame;
    use crate::router::route_all;
    use crate::schema::{build_cut_forest, contour_walk, EmstAttach};

    fn pipeline(env: &Environment) -> (FrameBlueprint, CutForest, RoutingResult, Embedding) {
        let forest = build_cut_forest(env, &EmstAttach).unwrap();
        let bp = contour_walk(env, &forest).unwrap();
        let frame = CircularFrame::from_blueprint(&bp).unwrap();
        let res = route_all(frame, false).unwrap();
        let emb = sew_and_realize(&res, &bp, env).unwrap();
        (bp, forest, res, emb)
    }

    #[test]
    fn boundary_net_hugs_the_boundary() {
        let b = Bounds::new(-10.0, 10.0, -10.0, 10.0);
        let env = Environment::from_centers(
            b,
            0.5,
            &[Point::new(10.0, 0.0)],
            &[Point::new(0.0, 10.0)],
            0,
        );
        let (_, _, _, emb) = pipeline(&env);
        let v = emb.routes[0].polyline.vertices();
        assert_eq!(v[0], Point::new(10.0, 0.0));
        assert_eq!(*v.last().unwrap(), Point::new(0.0, 10.0));
        let eps = emb.tracks.epsilon;
        for p in &v[1..v.len() - 1] {
            assert!(
                (env.bounds.distance_to_boundary(*p) - eps).abs() < 1e-9,
                "{p}"
            );
        }
    }

    #[test]
    fn nested_chords_use_outer_track() {
        let b = Bounds::new(-10.0, 10.0, -10.0, 10.0);
        let starts = [Point::new(10.0, 2.0), Point::new(10.0, -2.0)];
        let ends = [Point::new(10.0, 6.0), Point::new(10.0, 8.0)];
        let env = Environment::from_centers(b, 0.5, &starts, &ends, 0);
        let (_, _, _, emb) = pipeline(&env);
        let mut t = emb.tracks.tracks.clone();
        t.sort();
        assert_eq!(t, vec![0, 1]);
        let r = verify_embedding(&emb.routes, &env);
        assert_eq!(r.intersections, 0);
    }

    #[test]
    fn crossing_sequence_matches_chain() {
        let b = Bounds::new(-10.0, 10.0, -10.0, 10.0);
        let starts = [Point::new(10.0, 0.0), Point::new(10.0, 4.0)];
        let ends = [Point::new(-3.0, 0.0), Point::new(-3.0, -5.0)];
        let env = Environment::from_centers(b, 0.5, &starts, &ends, 0);
        let (bp, forest, res, emb) = pipeline(&env);
        let dirs = side_a_directions(&bp, &forest);
        for (route, chain) in emb.routes.iter().zip(&res.chains) {
            assert_eq!(
                crossing_sequence(&route.polyline, &forest, &dirs),
                chain_crossings(chain, &res.frame)
            );
        }
        assert_eq!(verify_embedding(&emb.routes, &env).intersections, 0);
    }

    #[test]
    fn clearance_flag_below_radius() {
        let b = Bounds::new(-10.0, 10.0, -10.0, 10.0);
        let env = Environment::from_centers(
            b,
            0.5,
            &[Point::new(-5.0, 0.0), Point::new(0.0, 0.3)],
            &[Point::new(5.0, 0.0), Point::new(0.0, 5.0)],
            0,
        );
        let route = Route {
            net: 1,
            polyline: Polyline::new(vec![Point::new(-5.0, 0.0), Point::new(5.0, 0.0)]).unwrap(),
        };
        let r = verify_embedding(&[route], &env);
        assert_eq!(r.flags.len(), 1);
        assert!((r.flags[0].distance - 0.3).abs() < 1e-12);
        assert_eq!(r.intersections, 0);
    }

    #[test]
    fn reflex_corner_wraps_leaf_tip() {
        let g = ContourGeom {
            vertices: vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)],
            dirs: vec![Point::new(1.0, 0.0), Point::new(-1.0, 0.0)],
            starts: vec![0.0, 1.0],
            total: 2.0,
        };
        let mut c = Vec::new();
        g.corner_into(1, 0.1, &mut c);
        assert_eq!(c.len(), 2);
        assert!((c[0] - Point::new(1.1, 0.1)).norm() < 1e-12);
        assert!((c[1] - Point::new(1.1, -0.1)).norm() < 1e-12);
    }

    #[test]
    fn port_parameters_pair_up() {
        for m in 1..5 {
            for k in 0..m {
                let t = port_parameter(k, m);
                assert!(t > 0.25 && t < 0.75);
            }
        }
        assert_eq!(port_parameter(0, 1), 0.5);
    }
}
