mod common;

use std::collections::HashSet;

use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polyproj::balas::{initial_test_cone, redundancy_test};
use polyproj::dd::{brute_force_rays, dd_method, homogenized_rays, rays_to_facets};
use polyproj::fme::{block_eliminate, eliminate_one};
use polyproj::io::{emit_ine, emit_poly, parse_ine, parse_poly};
use polyproj::linalg::{rat, Rat};
use polyproj::minrep::{extract_projection, minimal_input, minimal_projected_representation};
use polyproj::plp::{solve_plp, unimodular_reduce, verify_unimodular, PlpProblem};
use polyproj::polyhedron::char_cone;
use polyproj::testkit::{
    gen_random, oracle_levels, oracle_minrep, oracle_plp_value, same_polyhedron,
};
use polyproj::{HSystem, Inequality, RatMatrix};

use common::{ray_set, same_cone};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn instance() -> impl Strategy<Value = HSystem> {
    (2usize..=4, 0usize..=5, 0u32..=6, any::<u64>())
        .prop_map(|(n, extra, bits, seed)| gen_random(n, n + 1 + extra, bits, seed).unwrap())
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn dd_agrees_with_brute_force(s in instance()) {
        let cone = polyproj::polyhedron::homogenize(&s).base;
        let dd = dd_method(&cone).unwrap().rays;
        prop_assert_eq!(ray_set(&dd), ray_set(&brute_force_rays(&cone).unwrap()));
    }

    #[test]
    fn facets_of_ray_hull_are_minimal_rows(s in instance()) {
        let cone = polyproj::polyhedron::homogenize(&s).base;
        let rays = dd_method(&cone).unwrap().rays;
        let facets = rays_to_facets(&rays, &cone.var_names).unwrap();
        prop_assert_eq!(facets.row_set(), oracle_minrep(&cone).unwrap().row_set());
    }

    #[test]
    fn minrep_matches_oracle_in_any_order(s in instance(), seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..s.dim()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let names: Vec<String> = order.iter().map(|&j| s.var_names[j].clone()).collect();
        let pr = minimal_projected_representation(&s, &names).unwrap();
        let oracle = oracle_levels(&s, &order).unwrap();
        let bound = s.len().pow((s.dim() / 2) as u32) + 1;
        for (k, level) in oracle.iter().enumerate() {
            let got = extract_projection(&pr, k).unwrap();
            prop_assert_eq!(got.row_set(), level.row_set());
            prop_assert_eq!(&got.var_names, &level.var_names);
            prop_assert!(got.len() <= bound);
        }
    }

    #[test]
    fn minrep_ignores_row_scaling(s in instance(), scales in prop::collection::vec(1i64..20, 12)) {
        let mut scaled = s.clone();
        for (l, k) in scaled.ineqs.iter_mut().zip(&scales) {
            l.coeffs.iter_mut().for_each(|x| *x *= rat(*k));
            l.rhs *= rat(*k);
        }
        let a = minimal_projected_representation(&s, &s.var_names).unwrap();
        let b = minimal_projected_representation(&scaled, &s.var_names).unwrap();
        for (la, lb) in a.levels.iter().zip(&b.levels) {
            prop_assert_eq!(la.row_set(), lb.row_set());
        }
    }

    #[test]
    fn balas_test_agrees_with_oracle(s in instance()) {
        let tc = initial_test_cone(&s).unwrap();
        let minimal = oracle_minrep(&s).unwrap().row_set();
        for l in &s.ineqs {
            prop_assert_eq!(redundancy_test(&tc, l).unwrap(), !minimal.contains(l));
        }
        prop_assert_eq!(minimal_input(&s).unwrap().row_set(), minimal);
    }

    #[test]
    fn oracle_is_idempotent_and_order_free(s in instance()) {
        let m = oracle_minrep(&s).unwrap();
        prop_assert_eq!(oracle_minrep(&m).unwrap(), m.clone());
        let mut reversed = s.clone();
        reversed.ineqs.reverse();
        prop_assert_eq!(oracle_minrep(&reversed).unwrap().row_set(), m.row_set());
        prop_assert!(same_polyhedron(&s, &m).unwrap());
    }

    #[test]
    fn block_matches_sequential(s in instance()) {
        let block = block_eliminate(&s, &[0]).unwrap();
        let step = eliminate_one(&s, 0).unwrap().system;
        prop_assert!(same_polyhedron(&block, &step).unwrap());
        if s.dim() >= 3 {
            let two = block_eliminate(&s, &[0, 1]).unwrap();
            let seq = eliminate_one(&step, 0).unwrap().system;
            prop_assert!(same_polyhedron(&two, &seq).unwrap());
        }
    }

    #[test]
    fn char_cone_commutes_with_projection(s in instance()) {
        let mut s = s;
        let n = s.dim();
        s.ineqs.remove(n);
        let lhs = char_cone(&eliminate_one(&s, 0).unwrap().system).unwrap();
        let rhs = eliminate_one(&char_cone(&s).unwrap(), 0).unwrap().system;
        prop_assert!(same_cone(&lhs, &rhs));
    }

    #[test]
    fn formats_round_trip(s in instance()) {
        let poly = emit_poly(&parse_poly(&emit_poly(&s)).unwrap());
        prop_assert_eq!(emit_poly(&parse_poly(&poly).unwrap()), poly.clone());
        prop_assert_eq!(parse_poly(&poly).unwrap().row_set(), s.row_set());
        let ine = emit_ine(&parse_ine(&emit_ine(&s)).unwrap());
        prop_assert_eq!(emit_ine(&parse_ine(&ine).unwrap()), ine);
    }

    #[test]
    fn unimodular_reduce_verifies(c in prop::collection::vec(-50i64..50, 1..6)) {
        let c: Vec<Rat> = c.into_iter().map(rat).collect();
        if c.iter().all(Zero::is_zero) {
            prop_assert!(unimodular_reduce(&c).is_err());
        } else {
            let (u, g) = unimodular_reduce(&c).unwrap();
            prop_assert!(verify_unimodular(&c, &u, &g));
        }
    }
}

/// A bounded random PLP with two decision variables and `p` parameters
/// confined to a box.
fn random_plp(p: usize, seed: u64) -> PlpProblem {
    let base = gen_random(2, 5, 3, seed).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37);
    let mut a = Vec::new();
    let mut b_theta = Vec::new();
    let mut b = Vec::new();
    for l in &base.ineqs {
        a.push(l.coeffs.clone());
        b_theta.push(
            (0..p)
                .map(|_| rat(rand::Rng::gen_range(&mut rng, -2..=2)))
                .collect(),
        );
        b.push(l.rhs.clone());
    }
    for j in 0..p {
        for sign in [1, -1] {
            a.push(vec![Rat::zero(), Rat::zero()]);
            let mut row = vec![Rat::zero(); p];
            row[j] = rat(sign);
            b_theta.push(row);
            b.push(rat(3));
        }
    }
    let c = vec![
        rat(rand::Rng::gen_range(&mut rng, -3..=3)),
        rat(rand::Rng::gen_range(&mut rng, 1..=3)),
    ];
    PlpProblem::new(
        RatMatrix::from_rows(a, 2).unwrap(),
        RatMatrix::from_rows(b_theta, p).unwrap(),
        b,
        c,
        vec!["x1".into(), "x2".into()],
        HSystem::numbered_vars("theta", p),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn plp_pieces_match_vertex_oracle(p in 1usize..=2, seed in any::<u64>()) {
        let problem = random_plp(p, seed);
        let sol = solve_plp(&problem).unwrap();
        prop_assert!(verify_unimodular(&problem.c, &sol.u, &sol.g));
        for piece in &sol.pieces {
            let rays = homogenized_rays(&piece.region).unwrap();
            let vertices: Vec<Vec<Rat>> = rays
                .iter()
                .filter(|r| r[p].is_positive())
                .map(|r| r[..p].iter().map(|x| x / &r[p]).collect())
                .collect();
            prop_assert!(!vertices.is_empty());
            let mut samples = vertices.clone();
            let k = rat(vertices.len() as i64);
            samples.push((0..p).map(|j| vertices.iter().map(|v| v[j].clone()).sum::<Rat>() / &k).collect());
            for theta in &samples {
                let oracle = oracle_plp_value(&problem, theta).unwrap();
                prop_assert_eq!(oracle, Some(piece.value.eval(theta)));
                let best = sol.pieces.iter().map(|pc| pc.bound.eval(theta)).max().unwrap();
                prop_assert_eq!(best, piece.bound.eval(theta));
            }
        }
    }
}

#[test]
fn plp_outside_global_region_is_infeasible() {
    let problem = random_plp(1, 7);
    let sol = solve_plp(&problem).unwrap();
    for t in -6..=6 {
        let theta = vec![rat(t)];
        let inside = sol.global_region.contains_point(&theta);
        let value = oracle_plp_value(&problem, &theta).unwrap();
        assert_eq!(inside, value.is_some(), "theta = {t}");
    }
}

#[test]
fn levels_never_repeat_rows() {
    for seed in 0..20 {
        let s = gen_random(4, 10, 5, seed).unwrap();
        let pr = minimal_projected_representation(&s, &s.var_names).unwrap();
        for level in &pr.levels {
            let keys: HashSet<Inequality> = level.ineqs.iter().cloned().collect();
            assert_eq!(keys.len(), level.len());
        }
    }
}
