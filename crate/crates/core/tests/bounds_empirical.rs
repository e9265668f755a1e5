use spreadlab::bounds::{evaluate_bounds, BoundParams};
use spreadlab::generators::complete_uniform;
use spreadlab::spread::{min_q_spread, min_q_tiered};
use spreadlab::threshold::estimate_containment;
use spreadlab::Budget;

// K_64 edges: q-spread at 2/64 and (q; 2, 1)-spread near 4/64, so both
// alpha-bounds are below 1 at alpha = 1/2
#[test]
fn estimates_respect_non_vacuous_bounds() {
    let h = complete_uniform(64, 2).unwrap();
    let budget = Budget::default();
    let q_plain = min_q_spread(&h, &budget).unwrap().to_f64();
    let q_tiered = min_q_tiered(&h, &[2, 1], &budget).unwrap().to_f64();
    let alpha = 0.5;
    let est = estimate_containment(&h, 32, 10_000, 3).unwrap();
    let mut applied = 0;
    for (source, q) in [("small_edges", q_plain), ("second_moment", q_tiered)] {
        let params = BoundParams {
            c: 8.0,
            q,
            r_sequence: vec![2],
            n: 64,
            alpha: Some(alpha),
            ..Default::default()
        };
        let set = evaluate_bounds(&params).unwrap();
        let e = set.get(source, None).unwrap();
        assert!(e.applicable, "{source}: {:?}", e.reason);
        let b = e.value.unwrap();
        assert_eq!(e.set_size, 32.0);
        assert!(b > 0.5 && b < 1.0, "{source} = {b}");
        assert!(est.p_hat + 3.0 * est.std_err() >= b);
        applied += 1;
    }
    assert_eq!(applied, 2);
}
