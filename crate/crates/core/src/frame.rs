//! The circular frame: a cyclic sequence of terminals and pinched cut sides,
//! with straight chords between them.
//!
//! Two chords cross inside the disk exactly when their endpoints interleave
//! around the circle, so planarity is decided from the boundary order alone.
//! A reference node may carry any number of chords. Its slots are numbered in
//! crossing order along the physical cut edge (the direction side `A` is walked
//! in), so slot `k` at `r` and slot `k` at `r'` are the two halves of the same
//! crossing. Around the circle, side `A` lists its slots in increasing order and
//! side `B` in decreasing order.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::env::{TerminalId, TerminalKind};
use crate::schema::{ContourAnchor, FrameBlueprint};

pub type ChordId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Terminal(TerminalId),
    RefPoint { edge: usize, side: Side },
}

impl NodeKind {
    pub fn is_ref(&self) -> bool {
        matches!(self, NodeKind::RefPoint { .. })
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKind::Terminal(t) => write!(f, "{t}"),
            NodeKind::RefPoint {
                edge,
                side: Side::A,
            } => write!(f, "r{edge}"),
            NodeKind::RefPoint {
                edge,
                side: Side::B,
            } => write!(f, "r{edge}'"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameNode {
    pub index: usize,
    pub kind: NodeKind,
    pub anchor: Option<ContourAnchor>,
}

/// Chord attachment: a node and, for reference nodes, the slot it occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endpoint {
    pub node: usize,
    pub slot: usize,
}

impl Endpoint {
    pub fn terminal(node: usize) -> Self {
        Endpoint { node, slot: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chord {
    pub id: ChordId,
    pub net: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("positions must be distinct and below the cycle size")]
    BadPositions,
    #[error("node {0} does not exist")]
    UnknownNode(usize),
    #[error("a chord needs two distinct nodes")]
    SameNode,
    #[error("terminal node {0} already carries a chord")]
    TerminalTaken(usize),
    #[error("slot {slot} is out of range at node {node}")]
    SlotOutOfRange { node: usize, slot: usize },
    #[error("node {node} must use slot {expected} to pair with its partner, got {got}")]
    SlotMismatch {
        node: usize,
        expected: usize,
        got: usize,
    },
    #[error("chord would cross chord {conflict}")]
    Interleaves { conflict: ChordId },
    #[error("frame blueprint is malformed: {0}")]
    Blueprint(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FrameViolation {
    Crossing {
        a: ChordId,
        b: ChordId,
    },
    UnpairedSlots {
        node: usize,
        slots: usize,
        partner_slots: usize,
    },
    PairNetMismatch {
        node: usize,
        slot: usize,
    },
    TerminalOverloaded {
        node: usize,
    },
}

/// True iff exactly one of `c`, `d` lies on the open anticlockwise arc from `a`
/// to `b` in a cycle of `n` positions.
pub fn interleaves(n: usize, a: usize, b: usize, c: usize, d: usize) -> Result<bool, FrameError> {
    let p = [a, b, c, d];
    if p.iter().any(|&x| x >= n) || (0..4).any(|i| (i + 1..4).any(|j| p[i] == p[j])) {
        return Err(FrameError::BadPositions);
    }
    Ok(on_open_arc(n, a, b, c) != on_open_arc(n, a, b, d))
}

fn on_open_arc(n: usize, a: usize, b: usize, x: usize) -> bool {
    let span = (b + n - a) % n;
    let off = (x + n - a) % n;
    off != 0 && off < span
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircularFrame {
    nodes: Vec<FrameNode>,
    chords: Vec<Chord>,
    slots: Vec<Vec<ChordId>>,
    partner: Vec<Option<usize>>,
    pending: Vec<Option<usize>>,
    /// Terminal node of each terminal, sorted by terminal.
    terminals: Vec<(TerminalId, usize)>,
}

impl CircularFrame {
    /// A frame over `kinds` in anticlockwise order, without embedding anchors.
    pub fn from_kinds(kinds: &[NodeKind]) -> Result<Self, FrameError> {
        Self::build(kinds.iter().map(|&k| (k, None)))
    }

    pub fn from_blueprint(bp: &FrameBlueprint) -> Result<Self, FrameError> {
        Self::build(bp.nodes.iter().map(|n| (n.kind, Some(n.anchor))))
    }

    fn build(
        items: impl Iterator<Item = (NodeKind, Option<ContourAnchor>)>,
    ) -> Result<Self, FrameError> {
        let nodes: Vec<FrameNode> = items
            .enumerate()
            .map(|(index, (kind, anchor))| FrameNode {
                index,
                kind,
                anchor,
            })
            .collect();
        let mut terminals: Vec<(TerminalId, usize)> = Vec::with_capacity(nodes.len());
        let mut sides: Vec<(usize, Side, usize)> = Vec::with_capacity(nodes.len());
        for n in &nodes {
            match n.kind {
                NodeKind::Terminal(t) => terminals.push((t, n.index)),
                NodeKind::RefPoint { edge, side } => sides.push((edge, side, n.index)),
            }
        }
        terminals.sort_unstable();
        if terminals.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(FrameError::Blueprint("terminal appears twice"));
        }
        sides.sort_unstable();
        let mut partner = vec![None; nodes.len()];
        for pair in sides.chunks(2) {
            match *pair {
                [(e, Side::A, i), (f, Side::B, j)] if e == f => {
                    partner[i] = Some(j);
                    partner[j] = Some(i);
                }
                [(e, s, _), (f, t, _)] if e == f && s == t => {
                    return Err(FrameError::Blueprint("cut side appears twice"))
                }
                _ => return Err(FrameError::Blueprint("cut side without partner")),
            }
        }
        let n = nodes.len();
        Ok(CircularFrame {
            nodes,
            chords: Vec::new(),
            slots: vec![Vec::new(); n],
            partner,
            pending: vec![None; n],
            terminals,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[FrameNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &FrameNode {
        &self.nodes[i]
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    pub fn chord(&self, id: ChordId) -> &Chord {
        &self.chords[id]
    }

    /// Chords at a node in slot order.
    pub fn slots(&self, node: usize) -> &[ChordId] {
        &self.slots[node]
    }

    pub fn partner(&self, node: usize) -> Option<usize> {
        self.partner[node]
    }

    pub fn terminal_node(&self, id: TerminalId) -> Option<usize> {
        self.terminals
            .binary_search_by_key(&id, |&(t, _)| t)
            .ok()
            .map(|k| self.terminals[k].1)
    }

    pub fn start_node(&self, net: usize) -> Option<usize> {
        self.terminal_node(TerminalId {
            net,
            kind: TerminalKind::Start,
        })
    }

    pub fn end_node(&self, net: usize) -> Option<usize> {
        self.terminal_node(TerminalId {
            net,
            kind: TerminalKind::End,
        })
    }

    pub fn slot_of(&self, node: usize, chord: ChordId) -> Option<usize> {
        self.slots[node].iter().position(|&c| c == chord)
    }

    pub fn is_connected(&self, node: usize) -> bool {
        !self.slots[node].is_empty()
    }

    /// Nets whose starts appear on the frame, in anticlockwise order.
    pub fn start_order(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter_map(|n| match n.kind {
                NodeKind::Terminal(TerminalId {
                    net,
                    kind: TerminalKind::Start,
                }) => Some(net),
                _ => None,
            })
            .collect()
    }

    /// Slot at which the next chord at reference node `r` must attach: the slot
    /// of the half-crossing waiting on the partner side if there is one,
    /// otherwise after the existing slots.
    pub fn slot_for_refpoint(&self, r: usize) -> usize {
        self.pending[r].unwrap_or(self.slots[r].len())
    }

    /// Every chord end, in anticlockwise order around the circle.
    pub fn port_order(&self) -> Vec<(ChordId, usize)> {
        let mut out = Vec::with_capacity(2 * self.chords.len());
        for n in &self.nodes {
            let ids = &self.slots[n.index];
            let mut push = |c: ChordId| {
                let ch = &self.chords[c];
                out.push((c, if ch.from == n.index { 0 } else { 1 }));
            };
            match n.kind {
                NodeKind::RefPoint { side: Side::B, .. } => ids.iter().rev().for_each(|&c| push(c)),
                _ => ids.iter().for_each(|&c| push(c)),
            }
        }
        out
    }

    /// Position of both ends of every chord in [`Self::port_order`].
    fn port_positions(&self) -> Vec<[usize; 2]> {
        let mut pos = vec![[0usize; 2]; self.chords.len()];
        let mut i = 0;
        for n in &self.nodes {
            let ids = &self.slots[n.index];
            let mut put = |c: ChordId| {
                let end = usize::from(self.chords[c].from != n.index);
                pos[c][end] = i;
                i += 1;
            };
            match n.kind {
                NodeKind::RefPoint { side: Side::B, .. } => ids.iter().rev().for_each(|&c| put(c)),
                _ => ids.iter().for_each(|&c| put(c)),
            }
        }
        pos
    }

    fn check_endpoint(&self, e: Endpoint) -> Result<(), FrameError> {
        let node = self
            .nodes
            .get(e.node)
            .ok_or(FrameError::UnknownNode(e.node))?;
        match node.kind {
            NodeKind::Terminal(_) => {
                if !self.slots[e.node].is_empty() {
                    return Err(FrameError::TerminalTaken(e.node));
                }
            }
            NodeKind::RefPoint { .. } => {
                if e.slot > self.slots[e.node].len() {
                    return Err(FrameError::SlotOutOfRange {
                        node: e.node,
                        slot: e.slot,
                    });
                }
                if let Some(expected) = self.pending[e.node] {
                    if expected != e.slot {
                        return Err(FrameError::SlotMismatch {
                            node: e.node,
                            expected,
                            got: e.slot,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn insert_end(&mut self, e: Endpoint, id: ChordId) {
        match self.nodes[e.node].kind {
            NodeKind::Terminal(_) => self.slots[e.node].push(id),
            NodeKind::RefPoint { .. } => {
                self.slots[e.node].insert(e.slot, id);
                let p = self.partner[e.node].unwrap();
                if self.pending[e.node].take().is_none() {
                    self.pending[p] = Some(e.slot);
                }
            }
        }
    }

    fn remove_end(&mut self, e: Endpoint, id: ChordId) {
        let pos = self.slots[e.node].iter().position(|&c| c == id).unwrap();
        self.slots[e.node].remove(pos);
        if let NodeKind::RefPoint { .. } = self.nodes[e.node].kind {
            let p = self.partner[e.node].unwrap();
            if self.pending[p].take().is_none() {
                self.pending[e.node] = Some(e.slot);
            }
        }
    }

    /// Adds a chord, inserting into reference slots at the given positions.
    /// Rejects chords that would cross an existing one.
    pub fn add_chord(
        &mut self,
        from: Endpoint,
        to: Endpoint,
        net: usize,
    ) -> Result<ChordId, FrameError> {
        if from.node == to.node {
            return Err(FrameError::SameNode);
        }
        self.check_endpoint(from)?;
        self.check_endpoint(to)?;
        let id = self.chords.len();
        self.chords.push(Chord {
            id,
            net,
            from: from.node,
            to: to.node,
        });
        self.insert_end(from, id);
        self.insert_end(to, id);
        let pos = self.port_positions();
        let n = 2 * self.chords.len();
        let [a, b] = pos[id];
        for (c, &[x, y]) in pos.iter().enumerate().take(id) {
            if on_open_arc(n, a, b, x) != on_open_arc(n, a, b, y) {
                self.remove_end(to, id);
                self.remove_end(from, id);
                self.chords.pop();
                return Err(FrameError::Interleaves { conflict: c });
            }
        }
        Ok(id)
    }

    /// Adds a chord known not to cross any existing one, skipping the
    /// crossing check.
    pub(crate) fn add_chord_planar(
        &mut self,
        from: Endpoint,
        to: Endpoint,
        net: usize,
    ) -> Result<ChordId, FrameError> {
        if from.node == to.node {
            return Err(FrameError::SameNode);
        }
        self.check_endpoint(from)?;
        self.check_endpoint(to)?;
        let id = self.chords.len();
        self.chords.push(Chord {
            id,
            net,
            from: from.node,
            to: to.node,
        });
        self.insert_end(from, id);
        self.insert_end(to, id);
        Ok(id)
    }

    /// Adds a chord between two nodes, taking reference slots from
    /// [`Self::slot_for_refpoint`].
    pub fn add_chord_between(
        &mut self,
        from: usize,
        to: usize,
        net: usize,
    ) -> Result<ChordId, FrameError> {
        let ep = |n: usize| Endpoint {
            node: n,
            slot: self.slot_for_refpoint(n),
        };
        if from >= self.len() || to >= self.len() {
            return Err(FrameError::UnknownNode(from.max(to)));
        }
        let (a, b) = (ep(from), ep(to));
        self.add_chord(a, b, net)
    }

    /// Exhaustive check: no interleaving chords, equal slot counts on both sides
    /// of every cut, matching nets at paired slots, at most one chord per terminal.
    pub fn verify(&self) -> Result<(), Vec<FrameViolation>> {
        let mut out = Vec::new();
        let pos = self.port_positions();
        let n = 2 * self.chords.len();
        for i in 0..pos.len() {
            for j in i + 1..pos.len() {
                let [a, b] = pos[i];
                let [c, d] = pos[j];
                if interleaves(n, a, b, c, d).unwrap_or(true) {
                    out.push(FrameViolation::Crossing { a: i, b: j });
                }
            }
        }
        for node in &self.nodes {
            let i = node.index;
            match node.kind {
                NodeKind::Terminal(_) => {
                    if self.slots[i].len() > 1 {
                        out.push(FrameViolation::TerminalOverloaded { node: i });
                    }
                }
                NodeKind::RefPoint { side: Side::A, .. } => {
                    let p = self.partner[i].unwrap();
                    let (m, k) = (self.slots[i].len(), self.slots[p].len());
                    if m != k {
                        out.push(FrameViolation::UnpairedSlots {
                            node: i,
                            slots: m,
                            partner_slots: k,
                        });
                        continue;
                    }
                    for s in 0..m {
                        if self.chords[self.slots[i][s]].net != self.chords[self.slots[p][s]].net {
                            out.push(FrameViolation::PairNetMismatch { node: i, slot: s });
                        }
                    }
                }
                NodeKind::RefPoint { side: Side::B, .. } => {}
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Test hook: swaps two slots at a node without any checks.
    #[doc(hidden)]
    pub fn swap_slots_unchecked(&mut self, node: usize, a: usize, b: usize) {
        self.slots[node].swap(a, b);
    }
}

/// Chords of one net from its start to its end, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordChain {
    pub net: usize,
    pub chords: Vec<ChordId>,
}

impl ChordChain {
    /// Reference nodes where the chain leaves the disk, in order. Each is
    /// followed by a chord leaving from its partner.
    pub fn entries(&self, frame: &CircularFrame) -> Vec<usize> {
        self.chords[..self.chords.len().saturating_sub(1)]
            .iter()
            .map(|&c| frame.chord(c).to)
            .collect()
    }

    /// Checks that the chain runs from `s_net` to `t_net` through partner pairs
    /// at matching slots.
    pub fn is_linked(&self, frame: &CircularFrame) -> bool {
        let (Some(s), Some(t)) = (frame.start_node(self.net), frame.end_node(self.net)) else {
            return false;
        };
        let Some(&first) = self.chords.first() else {
            return false;
        };
        let last = *self.chords.last().unwrap();
        if frame.chord(first).from != s || frame.chord(last).to != t {
            return false;
        }
        self.chords.windows(2).all(|w| {
            let (x, y) = (frame.chord(w[0]), frame.chord(w[1]));
            x.net == self.net
                && y.net == self.net
                && frame.partner(x.to) == Some(y.from)
                && frame.slot_of(x.to, x.id) == frame.slot_of(y.from, y.id)
        })
    }
}

impl fmt::Display for CircularFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "frame nodes={} chords={}",
            self.nodes.len(),
            self.chords.len()
        )?;
        for n in &self.nodes {
            write!(f, "{:>4} {:<6}", n.index, alloc::format!("{}", n.kind))?;
            if let Some(p) = self.partner[n.index] {
                write!(f, " pair={p}")?;
            }
            let slots = &self.slots[n.index];
            if !slots.is_empty() {
                write!(f, " slots=[")?;
                for (k, &c) in slots.iter().enumerate() {
                    if k > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "c{}:n{}", c, self.chords[c].net)?;
                }
                write!(f, "]")?;
            }
            writeln!(f)?;
        }
        for c in &self.chords {
            writeln!(
                f,
                "chord {} net {} {} -> {}",
                c.id, c.net, self.nodes[c.from].kind, self.nodes[c.to].kind
            )?;
        }
        Ok(())
    }
}
