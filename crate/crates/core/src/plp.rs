//! Parametric linear programming `z(theta) = min c.x  s.t.  A x <= B theta + b`
//! by projection. A unimodular change of variables turns the objective into
//! a single coordinate `g * t_n`; after eliminating `t_1 .. t_{n-1}` the lower
//! bounds on `t_n` give the optimal value piece by piece.

use std::fmt;

use log::debug;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::dd::homogenized_rays;
use crate::error::{Error, Result};
use crate::linalg::{dot, Rat, RatMatrix, RatVector};
use crate::minrep::{minimal_input, minimal_projected_representation};
use crate::polyhedron::{format_linear, fresh_name, normalize_system, HSystem, Inequality};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlpProblem {
    /// `m x n` constraint matrix on the decision variables.
    pub a: RatMatrix,
    /// `m x p` matrix on the parameters.
    pub b_theta: RatMatrix,
    pub b: RatVector,
    /// Objective, minimized.
    pub c: RatVector,
    pub var_names: Vec<String>,
    pub param_names: Vec<String>,
}

impl PlpProblem {
    pub fn new(
        a: RatMatrix,
        b_theta: RatMatrix,
        b: RatVector,
        c: RatVector,
        var_names: Vec<String>,
        param_names: Vec<String>,
    ) -> Result<Self> {
        let m = a.rows();
        for found in [b_theta.rows(), b.len()] {
            if found != m {
                return Err(Error::DimensionMismatch { expected: m, found });
            }
        }
        for (expected, found) in [
            (a.cols(), c.len()),
            (a.cols(), var_names.len()),
            (b_theta.cols(), param_names.len()),
        ] {
            if found != expected {
                return Err(Error::DimensionMismatch { expected, found });
            }
        }
        if c.iter().all(Zero::is_zero) {
            return Err(Error::ZeroObjective);
        }
        Ok(Self {
            a,
            b_theta,
            b,
            c,
            var_names,
            param_names,
        })
    }

    /// The constraints as one system over `(x, theta)`.
    pub fn joint_system(&self) -> Result<HSystem> {
        let mut names = self.var_names.clone();
        names.extend(self.param_names.iter().cloned());
        HSystem::new(names, joint_rows(&self.a, &self.b_theta, &self.b))
    }
}

fn joint_rows(a: &RatMatrix, b_theta: &RatMatrix, b: &[Rat]) -> Vec<Inequality> {
    (0..a.rows())
        .map(|i| {
            let mut coeffs = a.row(i).to_vec();
            coeffs.extend(b_theta.row(i).iter().map(|x| -x.clone()));
            Inequality::new(coeffs, b[i].clone())
        })
        .collect()
}

/// `coeffs . theta + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineExpr {
    pub coeffs: RatVector,
    pub constant: Rat,
}

impl AffineExpr {
    pub fn eval(&self, theta: &[Rat]) -> Rat {
        dot(&self.coeffs, theta) + &self.constant
    }

    pub fn scale(&self, k: &Rat) -> AffineExpr {
        AffineExpr {
            coeffs: self.coeffs.iter().map(|x| x * k).collect(),
            constant: &self.constant * k,
        }
    }

    /// `self - other <= 0` as an inequality over theta.
    fn le(&self, other: &AffineExpr) -> Inequality {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x - y)
            .collect();
        Inequality::new(coeffs, &other.constant - &self.constant)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayAffine { e: self, names }
    }
}

struct DisplayAffine<'a> {
    e: &'a AffineExpr,
    names: &'a [String],
}

impl fmt::Display for DisplayAffine<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let linear = self.e.coeffs.iter().any(|x| !x.is_zero());
        let k = &self.e.constant;
        match (linear, k.is_zero()) {
            (false, _) => write!(f, "{k}"),
            (true, true) => write!(f, "{}", format_linear(&self.e.coeffs, self.names)),
            (true, false) => {
                let sign = if k.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "{} {sign} {}",
                    format_linear(&self.e.coeffs, self.names),
                    k.abs()
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlpPiece {
    /// Parameter region where this piece is optimal, over the parameters.
    pub region: HSystem,
    /// The lower bound on `t_n` that is active in the region.
    pub bound: AffineExpr,
    /// Optimal objective value, `g * bound`.
    pub value: AffineExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlpSolution {
    pub pieces: Vec<PlpPiece>,
    /// Rows of the projection free of `t_n`: the parameters for which the
    /// problem is feasible.
    pub global_region: HSystem,
    /// Projection onto `(t_n, theta)` in projected-representation form:
    /// the rows bounding `t_n` followed by those bounding each parameter.
    pub projection: HSystem,
    pub u: RatMatrix,
    pub g: Rat,
}

/// Integer column operations bringing `c` to `(0, .., 0, g)` with `g > 0`.
/// Rational objectives are first scaled by the lcm of their denominators.
pub fn unimodular_reduce(c: &[Rat]) -> Result<(RatMatrix, Rat)> {
    if c.iter().all(Zero::is_zero) {
        return Err(Error::ZeroObjective);
    }
    let n = c.len();
    let l = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut w: Vec<BigInt> = c
        .iter()
        .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
        .collect();
    // columns of U
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    loop {
        let nz: Vec<usize> = (0..n).filter(|&j| !w[j].is_zero()).collect();
        let p = *nz
            .iter()
            .min_by_key(|&&j| w[j].abs())
            .expect("c is nonzero");
        if nz.len() == 1 {
            w.swap(p, n - 1);
            cols.swap(p, n - 1);
            break;
        }
        for &j in &nz {
            if j == p {
                continue;
            }
            let q = &w[j] / &w[p];
            w[j] = &w[j] - &q * &w[p];
            let (cp, cj) = (cols[p].clone(), &mut cols[j]);
            for (x, y) in cj.iter_mut().zip(cp) {
                *x -= &q * y;
            }
        }
    }
    if w[n - 1].is_negative() {
        w[n - 1] = -w[n - 1].clone();
        for x in cols[n - 1].iter_mut() {
            *x = -x.clone();
        }
    }
    let mut u = RatMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            u[(i, j)] = Rat::from_integer(x.clone());
        }
    }
    Ok((u, Rat::new(w[n - 1].clone(), l)))
}

/// Checks `c U = (0, .., 0, g)`, `g > 0`, and that `U` is an integer matrix
/// with an integer inverse.
pub fn verify_unimodular(c: &[Rat], u: &RatMatrix, g: &Rat) -> bool {
    let n = c.len();
    if u.rows() != n || u.cols() != n || n == 0 || !g.is_positive() {
        return false;
    }
    let cu = match u.transpose().mul_vec(c) {
        Ok(v) => v,
        Err(_) => return false,
    };
    if cu[..n - 1].iter().any(|x| !x.is_zero()) || &cu[n - 1] != g {
        return false;
    }
    let integral = |m: &RatMatrix| m.row_iter().all(|r| r.iter().all(|x| x.is_integer()));
    match u.inverse() {
        Ok(inv) => integral(u) && integral(&inv),
        Err(_) => false,
    }
}

pub fn solve_plp(p: &PlpProblem) -> Result<PlpSolution> {
    let n = p.a.cols();
    let k = p.b_theta.cols();
    let (u, g) = unimodular_reduce(&p.c)?;
    let au = p.a.mul(&u)?;

    let mut names = Vec::with_capacity(n + k);
    for i in 1..=n {
        let mut all: Vec<String> = p.param_names.clone();
        all.extend(names.iter().cloned());
        names.push(fresh_name(&all, &format!("t{i}")));
    }
    names.extend(p.param_names.iter().cloned());
    let system = HSystem::new(names.clone(), joint_rows(&au, &p.b_theta, &p.b))?;
    let pr = minimal_projected_representation(&system, &names)?;
    let projection = pr.projected_representation(n - 1)?;
    debug!(
        "projection onto t{n} and parameters has {} rows",
        projection.len()
    );

    let mut global = Vec::new();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for l in &projection.ineqs {
        let a = &l.coeffs[0];
        let d = &l.coeffs[1..];
        if a.is_zero() {
            global.push(Inequality::new(d.to_vec(), l.rhs.clone()));
            continue;
        }
        // a t + d.theta <= e  gives  t <= or >= (e - d.theta) / a
        let bound = AffineExpr {
            coeffs: d.iter().map(|x| -x / a).collect(),
            constant: &l.rhs / a,
        };
        if a.is_negative() {
            lower.push(bound);
        } else {
            upper.push(bound);
        }
    }
    if lower.is_empty() {
        return Err(Error::Unbounded);
    }
    let global_region = HSystem::new(p.param_names.clone(), global)?;

    let mut pieces = Vec::with_capacity(lower.len());
    for (i, li) in lower.iter().enumerate() {
        let mut rows = global_region.ineqs.clone();
        rows.extend(
            lower
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, lj)| lj.le(li)),
        );
        rows.extend(upper.iter().map(|uk| li.le(uk)));
        let raw = HSystem::new(p.param_names.clone(), rows)?;
        let Some(region) = simplify_region(&raw)? else {
            debug!("lower bound {} has an empty region", i + 1);
            continue;
        };
        pieces.push(PlpPiece {
            region,
            value: li.scale(&g),
            bound: li.clone(),
        });
    }
    Ok(PlpSolution {
        pieces,
        global_region,
        projection,
        u,
        g,
    })
}

/// Normalized region, minimized when it is pointed and full-dimensional.
/// `None` when the region is certifiably empty.
fn simplify_region(raw: &HSystem) -> Result<Option<HSystem>> {
    let s = match normalize_system(raw) {
        Ok(s) => s,
        Err(Error::TriviallyInfeasible(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if s.dim() == 0 || s.rank() < s.dim() {
        return Ok(Some(s));
    }
    let rays = homogenized_rays(&s)?;
    let last = s.dim();
    if !rays.iter().any(|r| r[last].is_positive()) {
        return Ok(None);
    }
    let flat = s.ineqs.iter().any(|l| {
        rays.iter()
            .all(|r| (dot(&l.coeffs, &r[..last]) - &l.rhs * &r[last]).is_zero())
    });
    if flat {
        return Ok(Some(s));
    }
    minimal_input(&s).map(Some)
}
