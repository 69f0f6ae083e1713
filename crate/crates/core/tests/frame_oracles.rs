use core::f64::consts::TAU;

use circframe_core::env::{generate, GenParams, TerminalId, TerminalKind};
use circframe_core::frame::{interleaves, CircularFrame, FrameViolation, NodeKind, Side};
use circframe_core::geom::{segments_intersect, Point, Segment, SegmentRelation};
use circframe_core::pipeline::route_circular_frame;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn on_circle(angle: f64) -> Point {
    Point::new(angle.cos(), angle.sin())
}

#[test]
fn interleaving_matches_unit_circle_chords() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut crossing = 0;
    for _ in 0..10_000 {
        let n = rng.gen_range(4..40);
        let mut pos: Vec<usize> = (0..n).collect();
        pos.shuffle(&mut rng);
        let [a, b, c, d] = [pos[0], pos[1], pos[2], pos[3]];
        let p = |k: usize| on_circle(TAU * k as f64 / n as f64);
        let s1 = Segment::new(p(a), p(b)).unwrap();
        let s2 = Segment::new(p(c), p(d)).unwrap();
        let geometric = segments_intersect(&s1, &s2) == SegmentRelation::Proper;
        assert_eq!(interleaves(n, a, b, c, d).unwrap(), geometric, "n={n} {a} {b} {c} {d}");
        crossing += usize::from(geometric);
    }
    assert!(crossing > 1000);
}

/// Chords drawn on the unit circle: node `k` at angle `2 pi k / N`, slots
/// spread around it by less than `pi / N^2` in anticlockwise port order.
fn drawing(frame: &CircularFrame) -> Vec<Segment> {
    let n = frame.len() as f64;
    let mut ends = vec![[Point::new(0.0, 0.0); 2]; frame.chords().len()];
    for node in frame.nodes() {
        let slots = frame.slots(node.index);
        let m = slots.len();
        let step = core::f64::consts::PI / (n * n * (m as f64 + 1.0));
        for (j, &c) in slots.iter().enumerate() {
            let k = match node.kind {
                NodeKind::RefPoint { side: Side::B, .. } => m - 1 - j,
                _ => j,
            };
            let angle = TAU * node.index as f64 / n + (k as f64 - (m as f64 - 1.0) / 2.0) * step;
            let end = usize::from(frame.chord(c).from != node.index);
            ends[c][end] = on_circle(angle);
        }
    }
    ends.iter().map(|&[a, b]| Segment::new(a, b).unwrap()).collect()
}

fn drawing_crossings(frame: &CircularFrame) -> usize {
    let segs = drawing(frame);
    let mut count = 0;
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            if segments_intersect(&segs[i], &segs[j]) != SegmentRelation::Disjoint {
                count += 1;
            }
        }
    }
    count
}

fn crossings(frame: &CircularFrame) -> usize {
    match frame.verify() {
        Ok(()) => 0,
        Err(v) => v
            .iter()
            .filter(|x| matches!(x, FrameViolation::Crossing { .. }))
            .count(),
    }
}

#[test]
fn verify_agrees_with_the_geometric_drawing() {
    let params = GenParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut corrupted = 0;
    for seed in 0..200 {
        let env = generate(&params, seed).unwrap();
        let mut frame = route_circular_frame(&env, false).unwrap().routing.frame;
        assert!(frame.verify().is_ok(), "seed {seed}");
        assert_eq!(drawing_crossings(&frame), 0, "seed {seed}");

        let busy: Vec<usize> = (0..frame.len()).filter(|&i| frame.slots(i).len() >= 2).collect();
        if let Some(&node) = busy.choose(&mut rng) {
            let m = frame.slots(node).len();
            let a = rng.gen_range(0..m);
            let b = (a + rng.gen_range(1..m)) % m;
            frame.swap_slots_unchecked(node, a, b);
            assert_eq!(crossings(&frame) > 0, drawing_crossings(&frame) > 0, "seed {seed}");
            corrupted += 1;
        }
    }
    assert!(corrupted > 50);
}

#[test]
fn nets_leave_each_cut_in_the_order_they_enter() {
    let params = GenParams::default();
    for seed in 0..200 {
        let env = generate(&params, seed).unwrap();
        let frame = route_circular_frame(&env, false).unwrap().routing.frame;
        for node in frame.nodes() {
            if let NodeKind::RefPoint { side: Side::A, .. } = node.kind {
                let p = frame.partner(node.index).unwrap();
                let nets = |i: usize| -> Vec<usize> {
                    frame.slots(i).iter().map(|&c| frame.chord(c).net).collect()
                };
                assert_eq!(nets(node.index), nets(p), "seed {seed} node {}", node.index);
            }
        }
    }
}

fn term(net: usize, start: bool) -> NodeKind {
    let kind = if start { TerminalKind::Start } else { TerminalKind::End };
    NodeKind::Terminal(TerminalId { net, kind })
}

/// A shuffled frame of `nets` terminal pairs and `cuts` pinched cut pairs.
fn random_frame(rng: &mut ChaCha8Rng, nets: usize, cuts: usize) -> CircularFrame {
    let mut kinds: Vec<NodeKind> = (1..=nets).flat_map(|i| [term(i, true), term(i, false)]).collect();
    for e in 0..cuts {
        kinds.push(NodeKind::RefPoint { edge: e, side: Side::A });
        kinds.push(NodeKind::RefPoint { edge: e, side: Side::B });
    }
    kinds.shuffle(rng);
    CircularFrame::from_kinds(&kinds).unwrap()
}

#[test]
fn accepted_chords_never_cross_in_the_drawing() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let (mut accepted, mut rejected) = (0, 0);
    for _ in 0..300 {
        let (nets, cuts) = (rng.gen_range(1..6), rng.gen_range(0..4));
        let mut frame = random_frame(&mut rng, nets, cuts);
        for _ in 0..12 {
            let a = rng.gen_range(0..frame.len());
            let b = rng.gen_range(0..frame.len());
            match frame.add_chord_between(a, b, 1) {
                Ok(_) => {
                    accepted += 1;
                    assert_eq!(drawing_crossings(&frame), 0);
                }
                Err(_) => rejected += 1,
            }
        }
    }
    assert!(accepted > 300 && rejected > 300, "{accepted} {rejected}");
}

proptest! {
    #[test]
    fn interleaving_is_symmetric_and_rotation_invariant(
        n in 4usize..64,
        pick in prop::array::uniform4(0usize..1000),
        shift in 0usize..64,
    ) {
        let mut pos: Vec<usize> = Vec::new();
        for p in pick {
            let mut x = p % n;
            while pos.contains(&x) {
                x = (x + 1) % n;
            }
            pos.push(x);
        }
        let [a, b, c, d] = [pos[0], pos[1], pos[2], pos[3]];
        let base = interleaves(n, a, b, c, d).unwrap();
        prop_assert_eq!(interleaves(n, c, d, a, b).unwrap(), base);
        prop_assert_eq!(interleaves(n, b, a, c, d).unwrap(), base);
        prop_assert_eq!(interleaves(n, a, b, d, c).unwrap(), base);
        let r = |x: usize| (x + shift) % n;
        prop_assert_eq!(interleaves(n, r(a), r(b), r(c), r(d)).unwrap(), base);
    }

    #[test]
    fn interleaving_rejects_repeated_positions(n in 4usize..32, a in 0usize..32, c in 0usize..32) {
        let (a, c) = (a % n, c % n);
        let b = (a + 1) % n;
        prop_assert!(interleaves(n, a, b, a, c).is_err());
        prop_assert!(interleaves(n, a, b, c, n).is_err());
    }
}
