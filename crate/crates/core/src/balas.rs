//! The redundancy test cone.
//!
//! For `Q = {y | A y <= c}` with `A` of full column rank, the cone
//! `P = {(v, v0) | exists lambda >= 0: A^T lambda = v, lambda^T c <= v0}`
//! has as extreme rays exactly the rows `(a, c)` of the minimal
//! representation of `Q`, plus possibly `(0, 1)`. Zeroing the columns of
//! eliminated variables in any representation of `P` gives the same cone for
//! the projection of `Q` onto the remaining variables, so one cone serves
//! every level of Fourier-Motzkin elimination and each redundancy check is a
//! rank computation.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::dd::dd_method;
use crate::error::{Error, Result};
use crate::fme::block_eliminate;
use crate::linalg::{int_rank, primitive_integers, Rat, RatMatrix, RatVector};
use crate::polyhedron::{fresh_name, require_pointed, HSystem, Inequality};

/// `{(v, v0) | M (v, v0) <= 0}` in the coordinates of all original
/// variables, with the columns of eliminated variables identically zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestCone {
    m: RatMatrix,
    /// Same rows as `m`, as primitive integer vectors.
    int_rows: Vec<Vec<BigInt>>,
    active_vars: Vec<usize>,
    n_total: usize,
}

impl TestCone {
    fn from_rows(rows: Vec<RatVector>, active_vars: Vec<usize>, n_total: usize) -> Self {
        let mut seen = HashSet::new();
        let mut int_rows = Vec::with_capacity(rows.len());
        for row in rows {
            let ints = primitive_integers(&row);
            if ints.iter().all(Zero::is_zero) {
                continue;
            }
            if seen.insert(ints.clone()) {
                int_rows.push(ints);
            }
        }
        let m = RatMatrix::from_rows(
            int_rows
                .iter()
                .map(|r| r.iter().cloned().map(Rat::from_integer).collect())
                .collect(),
            n_total + 1,
        )
        .expect("rows have n_total + 1 entries");
        Self {
            m,
            int_rows,
            active_vars,
            n_total,
        }
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    pub fn active_vars(&self) -> &[usize] {
        &self.active_vars
    }

    pub fn n_total(&self) -> usize {
        self.n_total
    }

    /// The cone as an `HSystem` over the active `v` coordinates followed by
    /// `v0`, named after `var_names` (the original variables).
    pub fn to_hsystem(&self, var_names: &[String]) -> Result<HSystem> {
        if var_names.len() != self.n_total {
            return Err(Error::DimensionMismatch {
                expected: self.n_total,
                found: var_names.len(),
            });
        }
        let mut names: Vec<String> = self
            .active_vars
            .iter()
            .map(|&j| var_names[j].clone())
            .collect();
        names.push(fresh_name(&names, "rhs"));
        let ineqs = self
            .m
            .row_iter()
            .map(|row| {
                let mut coeffs: RatVector =
                    self.active_vars.iter().map(|&j| row[j].clone()).collect();
                coeffs.push(row[self.n_total].clone());
                Inequality::new(coeffs, Rat::zero())
            })
            .collect();
        HSystem::new(names, ineqs)
    }

    /// `(a, c)` of an inequality over the original variables, as a point of
    /// the cone's ambient space.
    fn embed(&self, l: &Inequality) -> Result<RatVector> {
        if l.dim() != self.n_total {
            return Err(Error::DimensionMismatch {
                expected: self.n_total,
                found: l.dim(),
            });
        }
        if l.is_trivial() {
            return Err(Error::TrivialInequality);
        }
        if let Some(j) =
            (0..self.n_total).find(|j| !self.active_vars.contains(j) && !l.coeffs[*j].is_zero())
        {
            return Err(Error::StaleVariable(j));
        }
        let mut x = l.coeffs.clone();
        x.push(l.rhs.clone());
        Ok(x)
    }
}

/// The cone generated by `{(a, c) | a^T y <= c implied by Q}`, projected
/// onto `(alpha, beta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsumptionCone {
    pub system: HSystem,
}

/// Reorders the rows so that the first `n` are linearly independent (first
/// such rows in listed order, then the rest in order) and returns
/// `A0 = [A_perm | 0; e_{n+1} .. e_m]` with the permutation, where
/// `row_perm[k]` is the original index of permuted row `k`.
pub fn build_a0(s: &HSystem) -> Result<(RatMatrix, Vec<usize>)> {
    let n = s.dim();
    let row_perm = independent_first(&s.integer_rows(), n).ok_or_else(|| Error::NotPointed {
        rank: s.rank(),
        dim: n,
    })?;
    let m = s.len();
    let mut a0 = RatMatrix::zeros(m, m);
    for (k, &orig) in row_perm.iter().enumerate() {
        for j in 0..n {
            a0[(k, j)] = s.ineqs[orig].coeffs[j].clone();
        }
        if k >= n {
            a0[(k, k)] = Rat::one();
        }
    }
    Ok((a0, row_perm))
}

/// Row order putting the first `n` independent rows first, or `None` when
/// the rows have rank below `n`.
fn independent_first(rows: &[Vec<BigInt>], n: usize) -> Option<Vec<usize>> {
    let mut lead: Vec<usize> = Vec::with_capacity(n);
    let mut picked: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        if lead.len() == n {
            break;
        }
        picked.push(row.clone());
        if int_rank(&picked, n) == picked.len() {
            lead.push(i);
        } else {
            picked.pop();
        }
    }
    if lead.len() < n {
        return None;
    }
    let mut perm = lead.clone();
    perm.extend((0..rows.len()).filter(|i| !lead.contains(i)));
    Some(perm)
}

/// Builds the initial redundancy test cone.
///
/// With `A0^{-1} = [A1^{-1}, 0; -A2 A1^{-1}, I]` and `z = (v, w)`, the lifted
/// cone is `{z^T A0^{-1} >= 0, z^T A0^{-1} c <= v0}`. Eliminating `w` needs
/// the extreme rays of a projection cone in which the multipliers of the
/// `w >= 0` rows are determined by the rest, so it suffices to enumerate the
/// rays `(y, y0)` of the reduced cone
/// `{(y, y0) >= 0 | E^T y - g y0 <= 0}` with `E = (-A2 A1^{-1})^T` and `g`
/// the last `m - n` entries of `A0^{-1} c`. Each ray gives the row
/// `sum_j y_j (-A1^{-1} e_j, 0) + y0 (A1^{-1} c1, -1)`.
pub fn initial_test_cone(s: &HSystem) -> Result<TestCone> {
    let n = s.dim();
    let m = s.len();
    let (a0, perm) = build_a0(s)?;
    let a0_inv = a0.inverse()?;
    let c: RatVector = perm.iter().map(|&i| s.ineqs[i].rhs.clone()).collect();
    let a0_inv_c = a0_inv.mul_vec(&c)?;
    let tail = m - n;

    // reduced cone over (y_1..y_n, y0)
    let mut rows = Vec::with_capacity(tail + n + 1);
    for k in 0..tail {
        let mut row: RatVector = (0..n).map(|j| a0_inv[(n + k, j)].clone()).collect();
        row.push(-a0_inv_c[n + k].clone());
        rows.push(Inequality::new(row, Rat::zero()));
    }
    for j in 0..=n {
        let mut row = vec![Rat::zero(); n + 1];
        row[j] = -Rat::one();
        rows.push(Inequality::new(row, Rat::zero()));
    }
    let reduced = HSystem::new(HSystem::numbered_vars("y", n + 1), rows)?;
    let rays = dd_method(&reduced)?.rays;

    let mut cone_rows = Vec::with_capacity(rays.len());
    for y in &rays {
        let y0 = &y[n];
        for k in 0..tail {
            let w: Rat = (0..n).fold(y0 * &a0_inv_c[n + k], |acc, j| {
                acc - &y[j] * &a0_inv[(n + k, j)]
            });
            if w.is_negative() {
                return Err(Error::InternalContradiction(format!(
                    "back-substituted multiplier {w} is negative"
                )));
            }
        }
        let mut row = vec![Rat::zero(); n + 1];
        for (i, cell) in row.iter_mut().take(n).enumerate() {
            let mut acc = y0 * &a0_inv_c[i];
            for j in 0..n {
                acc -= &y[j] * &a0_inv[(i, j)];
            }
            *cell = acc;
        }
        row[n] = -y0.clone();
        cone_rows.push(row);
    }
    Ok(TestCone::from_rows(cone_rows, (0..n).collect(), n))
}

/// Lifted cone `W0` for eliminating the variables in `eliminated`, written
/// over `(v_u, w_u, v_u0)` with the equalities `[v, w] B0^{-1} A = 0` as
/// pairs of inequalities. Projecting out `w_u` gives the redundancy test cone
/// of the projection; this direct route exists to cross-check [`restrict`].
pub fn build_w0_direct(s: &HSystem, eliminated: &[usize]) -> Result<HSystem> {
    require_pointed(s)?;
    let n = s.dim();
    let m = s.len();
    if let Some(&bad) = eliminated.iter().find(|&&j| j >= n) {
        return Err(Error::VariableOutOfRange(bad));
    }
    let kept: Vec<usize> = (0..n).filter(|j| !eliminated.contains(j)).collect();
    let q = kept.len();
    let b_rows: Vec<Vec<BigInt>> = s
        .ineqs
        .iter()
        .map(|l| {
            primitive_integers(
                &kept
                    .iter()
                    .map(|&j| l.coeffs[j].clone())
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let perm = independent_first(&b_rows, q).ok_or_else(|| Error::NotPointed {
        rank: s.rank(),
        dim: n,
    })?;

    let mut b0 = RatMatrix::zeros(m, m);
    for (k, &orig) in perm.iter().enumerate() {
        for (col, &j) in kept.iter().enumerate() {
            b0[(k, col)] = s.ineqs[orig].coeffs[j].clone();
        }
        if k >= q {
            b0[(k, k)] = Rat::one();
        }
    }
    let g = b0.inverse()?;
    let a_elim = RatMatrix::from_rows(
        perm.iter()
            .map(|&i| {
                eliminated
                    .iter()
                    .map(|&j| s.ineqs[i].coeffs[j].clone())
                    .collect()
            })
            .collect(),
        eliminated.len(),
    )?;
    let ga = g.mul(&a_elim)?;
    let c: RatVector = perm.iter().map(|&i| s.ineqs[i].rhs.clone()).collect();
    let gc = g.mul_vec(&c)?;

    let mut rows = Vec::new();
    for j in 0..eliminated.len() {
        let mut row = ga.column(j);
        row.push(Rat::zero());
        let neg: RatVector = row.iter().map(|x| -x.clone()).collect();
        rows.push(Inequality::new(row, Rat::zero()));
        rows.push(Inequality::new(neg, Rat::zero()));
    }
    for k in 0..m {
        let mut row: RatVector = g.column(k).into_iter().map(|x| -x).collect();
        row.push(Rat::zero());
        rows.push(Inequality::new(row, Rat::zero()));
    }
    let mut last = gc;
    last.push(-Rat::one());
    rows.push(Inequality::new(last, Rat::zero()));

    let mut names: Vec<String> = kept.iter().map(|&j| s.var_names[j].clone()).collect();
    names.extend((1..=m - q).map(|k| format!("w{k}")));
    let rhs_name = fresh_name(&names, "rhs");
    names.push(rhs_name);
    HSystem::new(names, rows)
}

/// The redundancy test cone of `s` with respect to `eliminated`, computed
/// from [`build_w0_direct`] by block elimination of the `w` coordinates.
pub fn direct_test_cone(s: &HSystem, eliminated: &[usize]) -> Result<HSystem> {
    let w0 = build_w0_direct(s, eliminated)?;
    let q = s.dim() - eliminated.len();
    let m = s.len();
    let block: Vec<usize> = (q..m).collect();
    if block.is_empty() {
        return Ok(w0);
    }
    block_eliminate(&w0, &block)
}

/// Zeroes the column of variable `j`, then renormalizes and deduplicates.
pub fn restrict(tc: &TestCone, j: usize) -> Result<TestCone> {
    if j >= tc.n_total {
        return Err(Error::VariableOutOfRange(j));
    }
    if !tc.active_vars.contains(&j) {
        return Err(Error::AlreadyEliminated(j));
    }
    let rows =
        tc.m.row_iter()
            .map(|row| {
                let mut r = row.to_vec();
                r[j] = Rat::zero();
                r
            })
            .collect();
    let active = tc.active_vars.iter().copied().filter(|&v| v != j).collect();
    Ok(TestCone::from_rows(rows, active, tc.n_total))
}

/// `true` when `l` is redundant for the polyhedron the cone describes, i.e.
/// `(a, c)` is not an extreme ray: the rows of `M` tight at `(a, c)` do not
/// reach rank `|active_vars|`.
pub fn redundancy_test(tc: &TestCone, l: &Inequality) -> Result<bool> {
    let x = tc.embed(l)?;
    let xi = primitive_integers(&x);
    let mut tight = Vec::new();
    for row in &tc.int_rows {
        let s: BigInt = row.iter().zip(&xi).map(|(a, b)| a * b).sum();
        debug_assert!(
            !s.is_positive(),
            "inequality is not valid for the polyhedron"
        );
        if s.is_zero() {
            tight.push(row.clone());
        }
    }
    Ok(int_rank(&tight, tc.n_total + 1) != tc.active_vars.len())
}

/// `true` when `(a, c)` lies in the cone, i.e. `l` is implied by the
/// polyhedron the cone describes.
pub fn in_test_cone(tc: &TestCone, l: &Inequality) -> Result<bool> {
    let xi = primitive_integers(&tc.embed(l)?);
    Ok(tc.int_rows.iter().all(|row| {
        !row.iter()
            .zip(&xi)
            .map(|(a, b)| a * b)
            .sum::<BigInt>()
            .is_positive()
    }))
}

/// Eliminates `lambda` from
/// `{(lambda, alpha, beta) | lambda^T A = alpha^T, lambda^T c <= beta, lambda >= 0}`.
pub fn subsumption_cone(s: &HSystem) -> Result<SubsumptionCone> {
    require_pointed(s)?;
    let n = s.dim();
    let m = s.len();
    let width = m + n + 1;
    let mut rows = Vec::with_capacity(2 * n + 1 + m);
    for j in 0..n {
        let mut row = vec![Rat::zero(); width];
        for (i, l) in s.ineqs.iter().enumerate() {
            row[i] = l.coeffs[j].clone();
        }
        row[m + j] = -Rat::one();
        let neg: RatVector = row.iter().map(|x| -x.clone()).collect();
        rows.push(Inequality::new(row, Rat::zero()));
        rows.push(Inequality::new(neg, Rat::zero()));
    }
    let mut row = vec![Rat::zero(); width];
    for (i, l) in s.ineqs.iter().enumerate() {
        row[i] = l.rhs.clone();
    }
    row[m + n] = -Rat::one();
    rows.push(Inequality::new(row, Rat::zero()));
    for i in 0..m {
        let mut row = vec![Rat::zero(); width];
        row[i] = -Rat::one();
        rows.push(Inequality::new(row, Rat::zero()));
    }
    let mut names = HSystem::numbered_vars("lambda", m);
    names.extend(s.var_names.iter().cloned());
    let beta = fresh_name(&names, "rhs");
    names.push(beta);
    let t = HSystem::new(names, rows)?;
    let block: Vec<usize> = (0..m).collect();
    let system = if block.is_empty() {
        t
    } else {
        block_eliminate(&t, &block)?
    };
    Ok(SubsumptionCone { system })
}
