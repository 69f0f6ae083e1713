use circframe_core::env::{generate, GenParams};
use circframe_core::frame::CircularFrame;
use circframe_core::router::route_all;
use circframe_core::schema::{build_cut_forest, contour_walk, EmstAttach};

#[test]
fn routes_500_random_environments() {
    let params = GenParams::default();
    for seed in 0..500 {
        let env = generate(&params, seed).unwrap();
        let forest = build_cut_forest(&env, &EmstAttach).unwrap();
        let bp = contour_walk(&env, &forest).unwrap();
        let frame = CircularFrame::from_blueprint(&bp).unwrap();
        let res = route_all(frame, false).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(res.frame.verify().is_ok(), "seed {seed}");
        for c in &res.chains {
            assert!(c.is_linked(&res.frame), "seed {seed} net {}", c.net);
        }
    }
}

#[test]
fn embeds_500_random_environments() {
    use circframe_core::embed::{
        chain_crossings, crossing_sequence, sew_and_realize, side_a_directions, verify_embedding,
    };
    let params = GenParams::default();
    let mut worst_attempts = 0;
    let mut flags = 0;
    for seed in 0..500 {
        let env = generate(&params, seed).unwrap();
        let forest = build_cut_forest(&env, &EmstAttach).unwrap();
        let bp = contour_walk(&env, &forest).unwrap();
        let frame = CircularFrame::from_blueprint(&bp).unwrap();
        let res = route_all(frame, false).unwrap();
        let emb = sew_and_realize(&res, &bp, &env).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        worst_attempts = worst_attempts.max(emb.attempts);
        let rep = verify_embedding(&emb.routes, &env);
        assert_eq!(rep.intersections, 0, "seed {seed}");
        assert_eq!(rep.out_of_bounds, 0, "seed {seed}");
        flags += rep.flags.len();
        let dirs = side_a_directions(&bp, &forest);
        for (route, chain) in emb.routes.iter().zip(&res.chains) {
            assert_eq!(
                crossing_sequence(&route.polyline, &forest, &dirs),
                chain_crossings(chain, &res.frame),
                "seed {seed} net {}",
                chain.net
            );
        }
    }
    eprintln!("worst attempts {worst_attempts}, clearance flags {flags}");
}

#[test]
fn astar_success_rate() {
    use circframe_core::astar::{route_sequential, AstarParams};
    let params = GenParams::default();
    let ok = (0..500)
        .filter(|&s| {
            route_sequential(&generate(&params, s).unwrap(), &AstarParams::default()).success
        })
        .count();
    eprintln!("astar successes {ok}/500");
}
