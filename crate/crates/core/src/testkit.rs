//! Instance generators and LP-free oracles used by the test suites.

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dd::{homogenized_rays, rays_to_facets};
use crate::error::{Error, Result};
use crate::fme::eliminate_one;
use crate::linalg::{dot, int_rank, rat, Rat, RatVector};
use crate::plp::PlpProblem;
use crate::polyhedron::{normalize_system, require_pointed, HSystem, Inequality};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    Simplex(usize),
    Cyclic {
        d: usize,
        v: usize,
    },
    Random {
        n: usize,
        m: usize,
        coeff_bits: u32,
        seed: u64,
    },
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<HSystem> {
        match *self {
            GeneratorSpec::Simplex(n) => gen_simplex(n),
            GeneratorSpec::Cyclic { d, v } => gen_cyclic(d, v),
            GeneratorSpec::Random {
                n,
                m,
                coeff_bits,
                seed,
            } => gen_random(n, m, coeff_bits, seed),
        }
    }
}

/// `{-x_i <= 0, sum x_i <= 1}` over `x1..xn`.
pub fn gen_simplex(n: usize) -> Result<HSystem> {
    if n == 0 {
        return Err(Error::InvalidArgument("simplex needs n >= 1".into()));
    }
    let mut ineqs: Vec<Inequality> = (0..n)
        .map(|i| {
            let mut a = vec![Rat::zero(); n];
            a[i] = -Rat::one();
            Inequality::new(a, Rat::zero())
        })
        .collect();
    ineqs.push(Inequality::new(vec![Rat::one(); n], Rat::one()));
    HSystem::new(HSystem::numbered_vars("x", n), ineqs)
}

/// Convex hull of the points `(t, t^2, .., t^d)` for `t = 1..=v`.
pub fn gen_cyclic(d: usize, v: usize) -> Result<HSystem> {
    if d < 2 || v <= d {
        return Err(Error::InvalidArgument(format!(
            "cyclic polytope needs v > d >= 2, got d = {d}, v = {v}"
        )));
    }
    let rays: Vec<RatVector> = (1..=v)
        .map(|t| {
            let t = BigInt::from(t);
            let mut p: RatVector = (1..=d as u32)
                .map(|k| Rat::from_integer(Pow::pow(&t, k)))
                .collect();
            p.push(Rat::one());
            p
        })
        .collect();
    let mut names = HSystem::numbered_vars("x", d);
    names.push("x_last".into());
    let cone = rays_to_facets(&rays, &names)?;
    // a.x + a_last * 1 <= 0 on the slice x_last = 1
    let ineqs = cone
        .ineqs
        .iter()
        .filter(|l| l.coeffs[..d].iter().any(|x| !x.is_zero()))
        .map(|l| Inequality::new(l.coeffs[..d].to_vec(), -l.coeffs[d].clone()))
        .collect();
    HSystem::new(HSystem::numbered_vars("x", d), ineqs)
}

/// A bounded, full-dimensional random system with `m` rows over `n`
/// variables. The first `n + 1` rows form a scaled simplex, the remaining
/// rows are random; every row is strictly satisfied at a random integer
/// point.
pub fn gen_random(n: usize, m: usize, coeff_bits: u32, seed: u64) -> Result<HSystem> {
    if n == 0 || m < n + 1 {
        return Err(Error::InvalidArgument(format!(
            "random system needs n >= 1 and m >= n + 1, got n = {n}, m = {m}"
        )));
    }
    if coeff_bits > 30 {
        return Err(Error::InvalidArgument(
            "coefficient bits must be at most 30".into(),
        ));
    }
    let bound: i64 = 1 << coeff_bits;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(m);
    for i in 0..n {
        let mut a = vec![0i64; n];
        a[i] = -rng.gen_range(1..=bound);
        rows.push(a);
    }
    rows.push((0..n).map(|_| rng.gen_range(1..=bound)).collect());
    while rows.len() < m {
        let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
        if a.iter().any(|&x| x != 0) {
            rows.push(a);
        }
    }
    let ineqs = rows
        .into_iter()
        .map(|a| {
            let at: i64 = a.iter().zip(&point).map(|(x, y)| x * y).sum();
            let slack = rng.gen_range(1..=bound);
            let coeffs = a.iter().map(|&x| rat(x)).collect();
            Inequality::new(coeffs, rat(at + slack))
        })
        .collect();
    HSystem::new(HSystem::numbered_vars("x", n), ineqs)
}

/// Whether `row` is implied by `sys`, decided from the extreme rays of the
/// homogenized cone. An empty `sys` implies everything.
pub fn implied(sys: &HSystem, row: &Inequality) -> Result<bool> {
    let n = sys.dim();
    if row.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: row.dim(),
        });
    }
    let rank = sys.rank();
    if rank < n {
        let mut rows = sys.integer_rows();
        rows.push(crate::linalg::primitive_integers(&row.coeffs));
        if int_rank(&rows, n) > rank {
            // the normal has a component along the lineality space
            return Ok(false);
        }
        return Err(Error::NotPointed { rank, dim: n });
    }
    let rays = homogenized_rays(sys)?;
    if !rays.iter().any(|r| r[n].is_positive()) {
        return Ok(true);
    }
    Ok(rays
        .iter()
        .all(|r| !(dot(&row.coeffs, &r[..n]) - &row.rhs * &r[n]).is_positive()))
}

/// Greedy removal of implied rows until none is left.
pub fn oracle_minrep(s: &HSystem) -> Result<HSystem> {
    let mut current = normalize_system(s)?;
    require_pointed(&current)?;
    'outer: loop {
        for i in 0..current.len() {
            let mut rest = current.clone();
            let row = rest.ineqs.remove(i);
            if implied(&rest, &row)? {
                current = rest;
                continue 'outer;
            }
        }
        return Ok(current);
    }
}

/// Mutual implication of the rows of two systems over the same variables.
pub fn same_polyhedron(s1: &HSystem, s2: &HSystem) -> Result<bool> {
    if s1.dim() != s2.dim() {
        return Err(Error::DimensionMismatch {
            expected: s1.dim(),
            found: s2.dim(),
        });
    }
    require_pointed(s1)?;
    require_pointed(s2)?;
    for (a, b) in [(s1, s2), (s2, s1)] {
        for row in &a.ineqs {
            if !implied(b, row)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Oracle-minimal systems of the successive projections along `order`
/// (variable indices into `s`): entry `k` is the projection after
/// eliminating the first `k` variables, over the remaining variables in
/// their original order.
pub fn oracle_levels(s: &HSystem, order: &[usize]) -> Result<Vec<HSystem>> {
    let mut names = s.var_names.clone();
    let mut current = oracle_minrep(s)?;
    let mut out = vec![current.clone()];
    for &v in order {
        let name = &s.var_names[v];
        let idx = names
            .iter()
            .position(|x| x == name)
            .ok_or(Error::VariableOutOfRange(v))?;
        let step = eliminate_one(&current, idx)?;
        names.remove(idx);
        current = oracle_minrep(&step.system)?;
        out.push(current.clone());
    }
    Ok(out)
}

/// Optimal value of a parametric LP at a fixed parameter point, by vertex
/// enumeration of the instantiated polyhedron. `None` when infeasible.
pub fn oracle_plp_value(p: &PlpProblem, theta: &[Rat]) -> Result<Option<Rat>> {
    let n = p.a.cols();
    let shift = p.b_theta.mul_vec(theta)?;
    let ineqs = (0..p.a.rows())
        .map(|i| Inequality::new(p.a.row(i).to_vec(), &p.b[i] + &shift[i]))
        .collect();
    let s = HSystem::new(p.var_names.clone(), ineqs)?;
    require_pointed(&s)?;
    let rays = homogenized_rays(&s)?;
    if !rays.iter().any(|r| r[n].is_positive()) {
        return Ok(None);
    }
    let mut best: Option<Rat> = None;
    for r in &rays {
        let value = dot(&p.c, &r[..n]);
        if r[n].is_zero() {
            if value.is_negative() {
                return Err(Error::Unbounded);
            }
            continue;
        }
        let value = value / &r[n];
        if best.as_ref().is_none_or(|b| &value < b) {
            best = Some(value);
        }
    }
    Ok(best)
}

/// Whether every ray of `rays` satisfies every row of the cone `cone`.
pub fn cone_contains_rays(cone: &HSystem, rays: &[RatVector]) -> bool {
    rays.iter().all(|r| cone.contains_point(r))
}
