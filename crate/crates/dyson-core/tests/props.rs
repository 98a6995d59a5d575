//! Property tests for the structural invariants: the spin/triangle
//! bijection, flip-cost consistency, grouping postconditions, and the JSON
//! round trips.

use proptest::prelude::*;

use dyson_core::bounds::w_closed;
use dyson_core::contour::{
    build_triangles, check_separation, group_contours, spin_flip_points, triangles_to_spins,
};
use dyson_core::lattice::{flip_cost, hamiltonian};
use dyson_core::{Boundary, CouplingParams, FieldProfile, SpinConfiguration, Triangle};

fn spin_config(max_radius: i64) -> impl Strategy<Value = SpinConfiguration> {
    (0..=max_radius, any::<bool>()).prop_flat_map(|(n, plus)| {
        let boundary = if plus { Boundary::Plus } else { Boundary::Minus };
        proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], (2 * n + 1) as usize)
            .prop_map(move |spins| SpinConfiguration::new(n, spins, boundary).unwrap())
    })
}

proptest! {
    #[test]
    fn round_trip_is_identity(sigma in spin_config(64)) {
        let family = build_triangles(&sigma);
        let back = triangles_to_spins(&family, sigma.window_radius(), sigma.boundary()).unwrap();
        prop_assert_eq!(back, sigma);
    }

    #[test]
    fn flip_count_is_even_and_mass_bounded(sigma in spin_config(64)) {
        let flips = spin_flip_points(&sigma);
        prop_assert_eq!(flips.len() % 2, 0);
        let family = build_triangles(&sigma);
        prop_assert_eq!(family.len() * 2, flips.len());
        // Total mass counts nesting multiplicities, so it dominates the
        // number of sites that disagree with the boundary.
        let minus_like = sigma
            .sites()
            .filter(|&x| sigma.spin(x) != sigma.boundary().spin())
            .count() as i64;
        prop_assert!(family.total_mass() >= minus_like);
    }

    #[test]
    fn grouping_postconditions(sigma in spin_config(48), c in 1.5f64..50.0) {
        let cfg = group_contours(&build_triangles(&sigma), c).unwrap();
        let (ok, violations) = check_separation(&cfg);
        prop_assert!(ok, "violations: {:?}", violations);
        // P.0: the partition preserves the triangle count.
        let total: usize = cfg.contours.iter().map(|g| g.triangles().len()).sum();
        prop_assert_eq!(total * 2, spin_flip_points(&sigma).len());
    }

    #[test]
    fn flip_cost_matches_two_evaluations(
        sigma in spin_config(10),
        site_pick in 0.0f64..1.0,
        alpha in 0.0f64..0.99,
        h_star in -2.0f64..2.0,
    ) {
        let n = sigma.window_radius();
        let x = -n + ((2 * n + 1) as f64 * site_pick) as i64;
        let x = x.clamp(-n, n);
        let cp = CouplingParams::new(alpha, 1.0).unwrap();
        let fp = FieldProfile::new(h_star, 0.8, 0).unwrap();
        let cost = flip_cost(&sigma, &cp, &fp, x).unwrap();
        let before = hamiltonian(&sigma, &cp, &fp).unwrap().total;
        let mut flipped = sigma.clone();
        flipped.flip(x).unwrap();
        let after = hamiltonian(&flipped, &cp, &fp).unwrap().total;
        prop_assert!((cost - (after - before)).abs() <= 1e-9);
    }

    #[test]
    fn spin_configuration_json_round_trip(sigma in spin_config(32)) {
        let text = serde_json::to_string(&sigma).unwrap();
        let back: SpinConfiguration = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, sigma);
    }

    #[test]
    fn triangle_json_round_trip(start in -100i64..100, mass in 1i64..64) {
        let t = Triangle::from_base(start, mass).unwrap();
        let text = serde_json::to_string(&t).unwrap();
        let back: Triangle = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn w_is_positive_below_alpha_star(l in 1i64..500, alpha in 0.0f64..0.27) {
        prop_assert!(w_closed(l, alpha).unwrap() > 0.0);
    }
}
