//! Anticlockwise connection walk on the circular frame.
//!
//! Each net is routed against the chords already committed. The walk moves
//! anticlockwise from `s_i`, hopping along every chord it meets, which keeps it
//! inside one face of the disk. Crossing a cut through a gap between the chords
//! at a reference node moves it to the face on the other side of the cut. A
//! face is entered at most once per net, so the chords of one net never cross
//! each other, and every chord joins two points on the boundary of one face, so
//! it crosses nothing already drawn.

use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::frame::{ChordChain, CircularFrame, Endpoint, FrameError, NodeKind, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RouterError {
    #[error("net {0} has no start or end on the frame")]
    MissingTerminal(usize),
    #[error("net {0} is already connected")]
    AlreadyRouted(usize),
    #[error("walk for net {net} exhausted every reachable face")]
    NoRoute { net: usize },
    #[error("walk for net {net} exceeded {limit} iterations")]
    Nontermination { net: usize, limit: usize },
    #[error("frame rejected a chord of net {net}: {source}")]
    Rejected { net: usize, source: FrameError },
}

/// The step of the walk a level is in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Leaving `s_i`.
    Three,
    /// Leaving the partner of a reference node the net entered.
    Four,
    /// Continuing after hopping along a chord.
    Five,
}

/// One firing of a case arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    /// Reached `t_i` and drew the chord.
    ReachEnd(Step),
    /// Crossed a cut at an occupied reference node.
    Cross(Step),
    /// Hopped along a chord at an occupied node.
    Hop(Step),
    /// Came back to where the level started without meeting `t_i`.
    Wrap(Step),
    /// Backtracked along the trail and crossed a cut.
    Backtrack,
    /// No crossing left in this face; resume the previous one.
    Retreat,
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = |s: &Step| match s {
            Step::Three => 3,
            Step::Four => 4,
            Step::Five => 5,
        };
        match self {
            Arm::ReachEnd(s) => write!(f, "{}a", n(s)),
            Arm::Cross(s) => write!(f, "{}b", n(s)),
            Arm::Hop(Step::Three) => write!(f, "3b-hop"),
            Arm::Hop(s) => write!(f, "{}c", n(s)),
            Arm::Wrap(Step::Three) => write!(f, "3c"),
            Arm::Wrap(s) => write!(f, "{}d", n(s)),
            Arm::Backtrack => write!(f, "6"),
            Arm::Retreat => write!(f, "6-retreat"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEvent {
    pub net: usize,
    pub arm: Arm,
    /// Frame node the walk was at when the arm fired.
    pub node: usize,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "net {} step {} at node {}",
            self.net, self.arm, self.node
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutingResult {
    /// One chain per net, sorted by net.
    pub chains: Vec<ChordChain>,
    pub frame: CircularFrame,
    pub iterations: usize,
    pub trace: Vec<TraceEvent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    Free(usize),
    Gap { node: usize, gap: usize },
    End { chord: usize, node: usize },
}

impl Atom {
    fn node(self) -> usize {
        match self {
            Atom::Free(n) | Atom::Gap { node: n, .. } | Atom::End { node: n, .. } => n,
        }
    }
}

/// Everything a net's walk sees: boundary atoms in anticlockwise order and the
/// faces they belong to. Buffers are reused from net to net.
#[derive(Default)]
struct Layout {
    atoms: Vec<Atom>,
    other_end: Vec<usize>,
    partner_gap: Vec<Option<usize>>,
    face: Vec<usize>,
    faces: usize,
    first: Vec<usize>,
    ends: Vec<[usize; 2]>,
}

impl Layout {
    fn rebuild(&mut self, frame: &CircularFrame) {
        let Layout {
            atoms,
            other_end,
            partner_gap,
            face,
            first,
            ends,
            ..
        } = self;
        atoms.clear();
        first.clear();
        ends.clear();
        ends.resize(frame.chords().len(), [usize::MAX; 2]);
        // Atom index of each chord end, keyed by chord and node.
        let mut put_end = |atoms: &mut Vec<Atom>, chord: usize, node: usize| {
            ends[chord][usize::from(frame.chord(chord).from != node)] = atoms.len();
            atoms.push(Atom::End { chord, node });
        };
        for n in frame.nodes() {
            let i = n.index;
            let slots = frame.slots(i);
            first.push(atoms.len());
            match n.kind {
                NodeKind::Terminal(_) => match slots.first() {
                    Some(&c) => put_end(atoms, c, i),
                    None => atoms.push(Atom::Free(i)),
                },
                NodeKind::RefPoint { side, .. } => {
                    let m = slots.len();
                    let forward = side == Side::A;
                    for k in 0..=m {
                        let g = if forward { k } else { m - k };
                        atoms.push(Atom::Gap { node: i, gap: g });
                        if k < m {
                            let s = if forward { k } else { m - 1 - k };
                            put_end(atoms, slots[s], i);
                        }
                    }
                }
            }
        }
        let index_of = |node: usize, gap: usize| -> usize {
            let m = frame.slots(node).len();
            match frame.node(node).kind {
                NodeKind::RefPoint { side: Side::B, .. } => first[node] + 2 * (m - gap),
                _ => first[node] + 2 * gap,
            }
        };
        other_end.clear();
        other_end.extend(atoms.iter().map(|a| match *a {
            Atom::End { chord, node } => ends[chord][usize::from(frame.chord(chord).from == node)],
            _ => usize::MAX,
        }));
        partner_gap.clear();
        partner_gap.extend(atoms.iter().map(|a| match *a {
            Atom::Gap { node, gap } => frame.partner(node).map(|p| index_of(p, gap)),
            _ => None,
        }));
        face.clear();
        face.resize(atoms.len(), usize::MAX);
        self.faces = 0;
        for k in 0..self.atoms.len() {
            if self.is_end(k) || self.face[k] != usize::MAX {
                continue;
            }
            let mut j = k;
            loop {
                self.face[j] = self.faces;
                j = self.succ(j, |_| {});
                if j == k {
                    break;
                }
            }
            self.faces += 1;
        }
    }

    fn is_end(&self, k: usize) -> bool {
        matches!(self.atoms[k], Atom::End { .. })
    }

    /// Next non-chord atom on the same face. Each chord end hopped along the
    /// way is passed to `hop`.
    fn succ(&self, k: usize, mut hop: impl FnMut(usize)) -> usize {
        let n = self.atoms.len();
        let mut j = (k + 1) % n;
        while self.is_end(j) {
            hop(j);
            j = (self.other_end[j] + 1) % n;
        }
        j
    }
}

struct Level {
    entry: usize,
    pos: usize,
    step: Step,
    /// Where this level's part of the shared trail begins.
    trail_start: usize,
    wrapped: bool,
    exit: Option<usize>,
}

impl Level {
    fn new(entry: usize, step: Step, trail_start: usize) -> Self {
        Level {
            entry,
            pos: entry,
            step,
            trail_start,
            wrapped: false,
            exit: None,
        }
    }
}

/// Working storage shared by the walks of successive nets.
#[derive(Default)]
struct Scratch {
    layout: Layout,
    visited: Vec<bool>,
    stack: Vec<Level>,
    trail: Vec<usize>,
    made: Vec<(usize, usize)>,
}

/// Iteration bound for routing on a frame with `nodes` nodes.
pub fn iteration_limit(nodes: usize) -> usize {
    64 * nodes.max(2) * nodes.max(2)
}

/// Routes one net against the chords already in `frame` and commits its chain.
/// Returns the chain and the number of walk iterations used.
pub fn route_single(
    frame: &mut CircularFrame,
    net: usize,
    trace: Option<&mut Vec<TraceEvent>>,
) -> Result<(ChordChain, usize), RouterError> {
    route_with(frame, net, trace, &mut Scratch::default())
}

fn route_with(
    frame: &mut CircularFrame,
    net: usize,
    mut trace: Option<&mut Vec<TraceEvent>>,
    scratch: &mut Scratch,
) -> Result<(ChordChain, usize), RouterError> {
    let s = frame
        .start_node(net)
        .ok_or(RouterError::MissingTerminal(net))?;
    let t = frame
        .end_node(net)
        .ok_or(RouterError::MissingTerminal(net))?;
    if frame.is_connected(s) || frame.is_connected(t) {
        return Err(RouterError::AlreadyRouted(net));
    }
    let Scratch {
        layout,
        visited,
        stack,
        trail,
        made,
    } = scratch;
    layout.rebuild(frame);
    let layout = &*layout;
    let start = layout.first[s];
    let limit = iteration_limit(frame.len());
    visited.clear();
    visited.resize(layout.faces, false);
    visited[layout.face[start]] = true;
    stack.clear();
    trail.clear();
    stack.push(Level::new(start, Step::Three, 0));
    let mut iterations = 0usize;
    let mut log = |arm: Arm, atom: usize| {
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(TraceEvent {
                net,
                arm,
                node: layout.atoms[atom].node(),
            });
        }
    };

    let crossable = |k: usize, entry_node: usize, visited: &[bool]| -> Option<usize> {
        let Atom::Gap { node, .. } = layout.atoms[k] else {
            return None;
        };
        let p = layout.partner_gap[k]?;
        (node != entry_node && !visited[layout.face[p]]).then_some(p)
    };

    loop {
        iterations += 1;
        if iterations > limit {
            return Err(RouterError::Nontermination { net, limit });
        }
        let Some(level) = stack.last_mut() else {
            return Err(RouterError::NoRoute { net });
        };
        let entry_node = layout.atoms[level.entry].node();
        if level.wrapped {
            let mut found = None;
            while trail.len() > level.trail_start {
                let k = trail.pop().unwrap();
                if let Some(p) = crossable(k, entry_node, visited) {
                    found = Some((k, p));
                    break;
                }
            }
            match found {
                Some((k, p)) => {
                    log(Arm::Backtrack, k);
                    level.exit = Some(k);
                    visited[layout.face[p]] = true;
                    stack.push(Level::new(p, Step::Four, trail.len()));
                }
                None => {
                    log(Arm::Retreat, level.entry);
                    stack.pop();
                    if let Some(parent) = stack.last_mut() {
                        parent.exit = None;
                    }
                }
            }
            continue;
        }
        let next = layout.succ(level.pos, |h| {
            log(Arm::Hop(level.step), h);
            level.step = Step::Five;
        });
        level.pos = next;
        if next == level.entry {
            log(Arm::Wrap(level.step), next);
            level.wrapped = true;
            continue;
        }
        match layout.atoms[next] {
            Atom::Free(n) if n == t => {
                log(Arm::ReachEnd(level.step), next);
                level.exit = Some(next);
                break;
            }
            Atom::Gap { node, .. } => {
                let occupied = frame.is_connected(node);
                trail.push(next);
                if let Some(p) = crossable(next, entry_node, visited).filter(|_| occupied) {
                    log(Arm::Cross(level.step), next);
                    level.exit = Some(next);
                    visited[layout.face[p]] = true;
                    let at = trail.len();
                    stack.push(Level::new(p, Step::Four, at));
                }
            }
            _ => {}
        }
    }

    made.clear();
    let mut chords = Vec::with_capacity(stack.len());
    for level in stack.iter() {
        let (from, to) = (level.entry, level.exit.unwrap());
        let a = match layout.atoms[from] {
            Atom::Gap { node, .. } => Endpoint {
                node,
                slot: frame.slot_for_refpoint(node),
            },
            atom => Endpoint::terminal(atom.node()),
        };
        let b = match layout.atoms[to] {
            Atom::Gap { node, gap } => {
                // Crossings already made by this net on the same cut, as
                // pre-net gap indices, shift the slot.
                let p = frame.partner(node).unwrap();
                let shift = made
                    .iter()
                    .filter(|&&(n, g)| (n == node || n == p) && g < gap)
                    .count();
                made.push((node, gap));
                Endpoint {
                    node,
                    slot: gap + shift,
                }
            }
            atom => Endpoint::terminal(atom.node()),
        };
        let id = frame
            .add_chord_planar(a, b, net)
            .map_err(|source| RouterError::Rejected { net, source })?;
        chords.push(id);
    }
    Ok((ChordChain { net, chords }, iterations))
}

/// Routes every net in the order its start appears on the frame.
pub fn route_all(mut frame: CircularFrame, with_trace: bool) -> Result<RoutingResult, RouterError> {
    let mut trace = Vec::new();
    let mut chains = Vec::new();
    let mut iterations = 0;
    let mut scratch = Scratch::default();
    for net in frame.start_order() {
        let (chain, it) = route_with(
            &mut frame,
            net,
            with_trace.then_some(&mut trace),
            &mut scratch,
        )?;
        iterations += it;
        chains.push(chain);
    }
    chains.sort_by_key(|c| c.net);
    Ok(RoutingResult {
        chains,
        frame,
        iterations,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{TerminalId, TerminalKind};
    use alloc::format;
    use alloc::string::String;
    use alloc::vec;

    fn s(net: usize) -> NodeKind {
        NodeKind::Terminal(TerminalId {
            net,
            kind: TerminalKind::Start,
        })
    }
    fn t(net: usize) -> NodeKind {
        NodeKind::Terminal(TerminalId {
            net,
            kind: TerminalKind::End,
        })
    }
    fn r(edge: usize, side: Side) -> NodeKind {
        NodeKind::RefPoint { edge, side }
    }

    fn arms(trace: &[TraceEvent]) -> String {
        let v: Vec<String> = trace.iter().map(|e| format!("{}", e.arm)).collect();
        v.join(" ")
    }

    #[test]
    fn single_chord() {
        let f = CircularFrame::from_kinds(&[s(1), t(1)]).unwrap();
        let res = route_all(f, true).unwrap();
        assert_eq!(res.chains[0].chords, vec![0]);
        assert_eq!(arms(&res.trace), "3a");
        assert!(res.frame.verify().is_ok());
    }

    #[test]
    fn nested_nets_route_directly() {
        let f = CircularFrame::from_kinds(&[s(1), s(2), t(2), t(1)]).unwrap();
        let res = route_all(f, true).unwrap();
        assert_eq!(arms(&res.trace), "3a 3a");
        assert!(res.frame.verify().is_ok());
    }

    #[test]
    fn hop_over_connected_terminal() {
        let f = CircularFrame::from_kinds(&[s(1), t(2), s(2), t(1)]).unwrap();
        let res = route_all(f, true).unwrap();
        assert_eq!(arms(&res.trace), "3a 3b-hop 5a");
        assert!(res.frame.verify().is_ok());
    }

    /// s1 r0 s3 s2 t1 t3 r0' t2, with net 2 already drawn as (s2, t2).
    fn sealed_frame() -> CircularFrame {
        let kinds = [
            s(1),
            r(0, Side::A),
            s(3),
            s(2),
            t(1),
            t(3),
            r(0, Side::B),
            t(2),
        ];
        let mut f = CircularFrame::from_kinds(&kinds).unwrap();
        f.add_chord_between(3, 7, 2).unwrap();
        f
    }

    #[test]
    fn enclosed_end_forces_step_six() {
        let mut f = sealed_frame();
        let mut trace = Vec::new();
        let (chain, _) = route_single(&mut f, 1, Some(&mut trace)).unwrap();
        assert_eq!(arms(&trace), "3b-hop 5d 6 4c 5a");
        assert!(chain.is_linked(&f));
        assert_eq!(chain.entries(&f), vec![1]);
        assert!(f.verify().is_ok());
    }

    #[test]
    fn cross_at_occupied_refpoint() {
        let mut f = sealed_frame();
        route_single(&mut f, 1, None).unwrap();
        let mut trace = Vec::new();
        let (chain, _) = route_single(&mut f, 3, Some(&mut trace)).unwrap();
        assert_eq!(arms(&trace), "3b-hop 5c 5b 4c 5a");
        assert!(chain.is_linked(&f));
        assert_eq!(f.slot_of(1, chain.chords[0]), Some(1));
        assert_eq!(f.slot_of(6, chain.chords[1]), Some(1));
        assert!(f.verify().is_ok());
    }

    #[test]
    fn already_routed_is_an_error() {
        let mut f = CircularFrame::from_kinds(&[s(1), t(1)]).unwrap();
        route_single(&mut f, 1, None).unwrap();
        assert_eq!(
            route_single(&mut f, 1, None).unwrap_err(),
            RouterError::AlreadyRouted(1)
        );
        assert_eq!(
            route_single(&mut f, 2, None).unwrap_err(),
            RouterError::MissingTerminal(2)
        );
    }

    #[test]
    fn arm_labels() {
        assert_eq!(format!("{}", Arm::Wrap(Step::Four)), "4d");
        assert_eq!(format!("{}", Arm::Hop(Step::Three)), "3b-hop");
        assert_eq!(format!("{}", Arm::Backtrack), "6");
    }
}
