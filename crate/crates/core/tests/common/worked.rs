//! Hand-traced worked example: three nets, one cut whose sides are pinched
//! to positions 2 and 6.
//!
//! Expected walk:
//! net 1 reaches t1 directly; net 2 meets t1, hops to s1, arrives back at s2,
//! backtracks to r0, crosses to r0', hops over the net 1 chord and reaches t2;
//! net 3 meets t2, hops to r0' and reaches t3.

use circframe_core::env::{TerminalId, TerminalKind};
use circframe_core::frame::{CircularFrame, NodeKind, Side};

fn term(net: usize, kind: TerminalKind) -> NodeKind {
    NodeKind::Terminal(TerminalId { net, kind })
}

pub fn worked_example() -> CircularFrame {
    use TerminalKind::{End, Start};
    CircularFrame::from_kinds(&[
        term(1, Start),
        term(2, Start),
        NodeKind::RefPoint { edge: 0, side: Side::A },
        term(1, End),
        term(3, Start),
        term(2, End),
        NodeKind::RefPoint { edge: 0, side: Side::B },
        term(3, End),
    ])
    .unwrap()
}

/// Final chords as (net, lower node, higher node), sorted.
pub const EXPECTED: [(usize, usize, usize); 4] = [(1, 0, 3), (2, 1, 2), (2, 5, 6), (3, 4, 7)];

