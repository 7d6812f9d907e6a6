//! Extreme rays of pointed polyhedral cones `{x | A x <= 0}` by the double
//! description method, plus the algebraic extremality and adjacency tests.

use std::collections::HashSet;

use log::trace;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{
    int_dot, int_rank, primitive_int_vector, primitive_integers, Rat, RatMatrix, RatVector,
};
use crate::polyhedron::{homogenize, require_pointed, zero_set, HSystem, Inequality};

/// A cone's H-representation together with its extreme rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DDPair {
    pub rep: HSystem,
    /// Primitive integer rays, one per equivalence class.
    pub rays: Vec<RatVector>,
}

/// Fixed-width bitset over row indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct RowSet {
    words: Vec<u64>,
}

impl RowSet {
    fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn intersection(&self, other: &RowSet) -> RowSet {
        RowSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64)
                .filter(move |b| w & (1 << b) != 0)
                .map(move |b| wi * 64 + b)
        })
    }
}

struct Ray {
    v: Vec<BigInt>,
    zeros: RowSet,
}

fn check_cone(cone: &HSystem) -> Result<()> {
    if !cone.is_cone() {
        return Err(Error::NotACone);
    }
    Ok(())
}

fn rows_rank(rows: &[Vec<BigInt>], set: impl Iterator<Item = usize>, n: usize) -> usize {
    let selected: Vec<Vec<BigInt>> = set.map(|i| rows[i].clone()).collect();
    int_rank(&selected, n)
}

fn cone_products(cone: &HSystem, r: &[Rat]) -> Result<Vec<Rat>> {
    if r.len() != cone.dim() {
        return Err(Error::DimensionMismatch {
            expected: cone.dim(),
            found: r.len(),
        });
    }
    let s: Vec<Rat> = cone.ineqs.iter().map(|l| l.eval(r)).collect();
    if s.iter().any(|x| x.is_positive()) {
        return Err(Error::NotInCone);
    }
    Ok(s)
}

/// `rank(A_{zero set of r}) = n - 1`.
pub fn extreme_ray_test(cone: &HSystem, r: &[Rat]) -> Result<bool> {
    check_cone(cone)?;
    cone_products(cone, r)?;
    let z = zero_set(cone, r)?;
    let n = cone.dim();
    let rank = cone.coefficient_matrix().select_rows(&z).rank();
    Ok(n >= 1 && rank == n - 1)
}

/// Two extreme rays are adjacent iff the rows tight at both have rank n - 2.
pub fn adjacency_test(cone: &HSystem, r1: &[Rat], r2: &[Rat]) -> Result<bool> {
    if !extreme_ray_test(cone, r1)? || !extreme_ray_test(cone, r2)? {
        return Err(Error::NotExtreme);
    }
    if primitive_integers(r1) == primitive_integers(r2) {
        return Err(Error::InvalidArgument(
            "rays are positive multiples of each other".into(),
        ));
    }
    let z1 = zero_set(cone, r1)?;
    let z2 = zero_set(cone, r2)?;
    let common: Vec<usize> = z1.into_iter().filter(|i| z2.contains(i)).collect();
    let n = cone.dim();
    let rank = cone.coefficient_matrix().select_rows(&common).rank();
    Ok(n >= 2 && rank == n - 2)
}

/// Incremental double description: start from `n` independent rows (the
/// first ones in listed order) and insert the remaining rows one at a time.
pub fn dd_method(cone: &HSystem) -> Result<DDPair> {
    check_cone(cone)?;
    let n = cone.dim();
    let a = cone.integer_rows();
    let m = a.len();
    if n == 0 {
        return Ok(DDPair {
            rep: cone.clone(),
            rays: Vec::new(),
        });
    }

    let mut basis: Vec<usize> = Vec::with_capacity(n);
    let mut basis_rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (i, row) in a.iter().enumerate() {
        if basis.len() == n {
            break;
        }
        basis_rows.push(row.clone());
        if int_rank(&basis_rows, n) == basis_rows.len() {
            basis.push(i);
        } else {
            basis_rows.pop();
        }
    }
    if basis.len() < n {
        return Err(Error::NotPointed {
            rank: basis.len(),
            dim: n,
        });
    }

    // Rays of {x | A_K x <= 0} are the columns of -(A_K)^{-1}.
    let ak = RatMatrix::from_rows(
        basis_rows
            .iter()
            .map(|r| r.iter().cloned().map(Rat::from_integer).collect())
            .collect(),
        n,
    )?;
    let inv = ak.inverse()?;
    let mut rays: Vec<Ray> = (0..n)
        .map(|j| {
            let col: Vec<Rat> = inv.column(j).into_iter().map(|x| -x).collect();
            let mut zeros = RowSet::new(m);
            for (k, &row) in basis.iter().enumerate() {
                if k != j {
                    zeros.insert(row);
                }
            }
            Ray {
                v: primitive_integers(&col),
                zeros,
            }
        })
        .collect();

    for i in (0..m).filter(|i| !basis.contains(i)) {
        let products: Vec<BigInt> = rays.iter().map(|r| int_dot(&a[i], &r.v)).collect();
        let plus: Vec<usize> = (0..rays.len())
            .filter(|&j| products[j].is_positive())
            .collect();
        let minus: Vec<usize> = (0..rays.len())
            .filter(|&j| products[j].is_negative())
            .collect();
        if plus.is_empty() {
            for (r, s) in rays.iter_mut().zip(&products) {
                if s.is_zero() {
                    r.zeros.insert(i);
                }
            }
            continue;
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        if n >= 2 {
            for &p in &plus {
                for &q in &minus {
                    let common = rays[p].zeros.intersection(&rays[q].zeros);
                    if common.count() < n - 2 {
                        continue;
                    }
                    if rows_rank(&a, common.iter(), n) != n - 2 {
                        continue;
                    }
                    let v: Vec<BigInt> = rays[q]
                        .v
                        .iter()
                        .zip(&rays[p].v)
                        .map(|(vq, vp)| &products[p] * vq - &products[q] * vp)
                        .collect();
                    let mut zeros = common;
                    zeros.insert(i);
                    next.push(Ray {
                        v: primitive_int_vector(v),
                        zeros,
                    });
                }
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + next.len());
        for (j, mut r) in rays.into_iter().enumerate() {
            if products[j].is_positive() {
                continue;
            }
            if products[j].is_zero() {
                r.zeros.insert(i);
            }
            kept.push(r);
        }
        kept.extend(next);
        rays = kept;
        trace!("dd: row {i} inserted, {} rays", rays.len());
    }

    let mut seen = HashSet::new();
    let rays = rays
        .into_iter()
        .filter(|r| seen.insert(r.v.clone()))
        .map(|r| r.v.into_iter().map(Rat::from_integer).collect())
        .collect();
    Ok(DDPair {
        rep: cone.clone(),
        rays,
    })
}

/// Enumerates every `(n-1)`-subset of rows of rank `n-1`, keeps the sign of
/// its kernel vector that lies in the cone and passes the extremality test.
/// Exponential; meant as an independent check on [`dd_method`].
pub fn brute_force_rays(cone: &HSystem) -> Result<Vec<RatVector>> {
    check_cone(cone)?;
    require_pointed(cone)?;
    let n = cone.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let a = cone.coefficient_matrix();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for subset in combinations(cone.len(), n - 1) {
        let sub = a.select_rows(&subset);
        let Ok(r) = sub.null_space_1d() else {
            continue;
        };
        let neg: RatVector = r.iter().map(|x| -x.clone()).collect();
        for cand in [r, neg] {
            if cone_products(cone, &cand).is_ok()
                && extreme_ray_test(cone, &cand)?
                && seen.insert(cand.clone())
            {
                out.push(cand);
            }
        }
    }
    Ok(out)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Minimal H-representation of the cone generated by `rays`: the extreme
/// rays of the polar cone are the facet normals.
pub fn rays_to_facets(rays: &[RatVector], var_names: &[String]) -> Result<HSystem> {
    let n = var_names.len();
    let polar_rows = rays
        .iter()
        .map(|r| {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            Ok(Inequality::new(r.clone(), Rat::zero()))
        })
        .collect::<Result<Vec<_>>>()?;
    let polar = HSystem::new(var_names.to_vec(), polar_rows)?;
    let dd = match dd_method(&polar) {
        Err(Error::NotPointed { .. }) => return Err(Error::NotFullDim),
        other => other?,
    };
    let ineqs = dd
        .rays
        .into_iter()
        .map(|normal| Inequality::new(normal, Rat::zero()))
        .collect();
    HSystem::new(var_names.to_vec(), ineqs)
}

/// Extreme rays `(x, t)` of the homogenized cone of a pointed system. The
/// polyhedron is nonempty iff some ray has `t > 0`; those rays scaled to
/// `t = 1` are its vertices, the rest span its characteristic cone.
pub fn homogenized_rays(p: &HSystem) -> Result<Vec<RatVector>> {
    Ok(dd_method(&homogenize(p).base)?.rays)
}

pub fn is_feasible(p: &HSystem) -> Result<bool> {
    let n = p.dim();
    Ok(homogenized_rays(p)?.iter().any(|r| r[n].is_positive()))
}

/// Fails with [`Error::Infeasible`] when the pointed system `p` is empty.
pub fn require_feasible(p: &HSystem) -> Result<()> {
    if is_feasible(p)? {
        Ok(())
    } else {
        Err(Error::Infeasible)
    }
}
