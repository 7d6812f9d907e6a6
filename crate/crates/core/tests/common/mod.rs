#![allow(dead_code)]

use std::collections::HashSet;

use polyproj::dd::dd_method;
use polyproj::linalg::primitive_normalize;
use polyproj::testkit::{cone_contains_rays, gen_random};
use polyproj::{HSystem, RatVector};

/// Seeded random polytopes with `2 <= n <= 5`, `n + 1 <= m <= max_m` and
/// 8-bit coefficients.
pub fn corpus(count: usize, max_m: usize) -> Vec<HSystem> {
    (0..count)
        .map(|i| {
            let n = 2 + i % 4;
            let m = n + 1 + (i / 4) % (max_m - n);
            gen_random(n, m, 8, 1000 + i as u64).unwrap()
        })
        .collect()
}

/// Pointed but unbounded variants: the corpus without its positive-sum row.
pub fn unbounded_corpus(count: usize, max_m: usize) -> Vec<HSystem> {
    corpus(count, max_m)
        .into_iter()
        .map(|mut s| {
            let n = s.dim();
            s.ineqs.remove(n);
            s
        })
        .collect()
}

pub fn ray_set(rays: &[RatVector]) -> HashSet<RatVector> {
    rays.iter().map(|r| primitive_normalize(r)).collect()
}

/// Equality of two pointed cones by mutual containment of extreme rays.
pub fn same_cone(a: &HSystem, b: &HSystem) -> bool {
    let ra = dd_method(a).unwrap().rays;
    let rb = dd_method(b).unwrap().rays;
    cone_contains_rays(b, &ra) && cone_contains_rays(a, &rb)
}
