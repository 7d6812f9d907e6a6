//! H-representations: inequality systems over named variables.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{dot, primitive_integers, primitive_normalize, Rat, RatMatrix, RatVector};

/// A single inequality `coeffs · y <= rhs`, kept as a primitive integer
/// vector `(coeffs, rhs)` so that identity up to positive scaling is plain
/// equality.
#[derive(Clone, Debug)]
pub struct Inequality {
    pub coeffs: RatVector,
    pub rhs: Rat,
    /// Elimination level that produced this row, if known.
    pub level_tag: Option<usize>,
}

impl Inequality {
    pub fn new(coeffs: RatVector, rhs: Rat) -> Self {
        let mut joint = coeffs;
        joint.push(rhs);
        let mut joint = primitive_normalize(&joint);
        let rhs = joint.pop().expect("rhs present");
        Self {
            coeffs: joint,
            rhs,
            level_tag: None,
        }
    }

    pub fn from_i64(coeffs: &[i64], rhs: i64) -> Self {
        Self::new(crate::linalg::rat_vec(coeffs), crate::linalg::rat(rhs))
    }

    pub fn with_level(mut self, level: usize) -> Self {
        self.level_tag = Some(level);
        self
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// `true` when every coefficient is zero, i.e. the row reads `0 <= rhs`.
    pub fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The row as the integer vector `(coeffs, rhs)`.
    pub fn key(&self) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .chain(std::iter::once(&self.rhs))
            .map(|x| x.numer().clone())
            .collect()
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        dot(&self.coeffs, point)
    }

    pub fn is_satisfied_by(&self, point: &[Rat]) -> bool {
        self.eval(point) <= self.rhs
    }
}

impl PartialEq for Inequality {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.rhs == other.rhs
    }
}

impl Eq for Inequality {}

impl std::hash::Hash for Inequality {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
        self.rhs.hash(state);
    }
}

/// An ordered list of inequalities over ordered, named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSystem {
    pub var_names: Vec<String>,
    pub ineqs: Vec<Inequality>,
}

impl HSystem {
    pub fn new(var_names: Vec<String>, ineqs: Vec<Inequality>) -> Result<Self> {
        let n = var_names.len();
        if let Some(bad) = ineqs.iter().find(|l| l.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.dim(),
            });
        }
        Ok(Self { var_names, ineqs })
    }

    /// Variables named `prefix1 .. prefixN`.
    pub fn numbered_vars(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    pub fn from_i64_rows(var_names: &[&str], rows: &[(&[i64], i64)]) -> Self {
        let ineqs = rows
            .iter()
            .map(|(a, c)| Inequality::from_i64(a, *c))
            .collect();
        Self::new(var_names.iter().map(|s| s.to_string()).collect(), ineqs)
            .expect("rows match variables")
    }

    pub fn dim(&self) -> usize {
        self.var_names.len()
    }

    pub fn len(&self) -> usize {
        self.ineqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ineqs.is_empty()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|v| v == name)
    }

    pub fn coefficient_matrix(&self) -> RatMatrix {
        RatMatrix::from_rows(
            self.ineqs.iter().map(|l| l.coeffs.clone()).collect(),
            self.dim(),
        )
        .expect("rows match variables")
    }

    pub fn rhs(&self) -> RatVector {
        self.ineqs.iter().map(|l| l.rhs.clone()).collect()
    }

    /// Coefficient rows as primitive integer vectors.
    pub fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.ineqs
            .iter()
            .map(|l| primitive_integers(&l.coeffs))
            .collect()
    }

    pub fn is_cone(&self) -> bool {
        self.ineqs.iter().all(|l| l.rhs.is_zero())
    }

    pub fn rank(&self) -> usize {
        crate::linalg::int_rank(&self.integer_rows(), self.dim())
    }

    pub fn contains_point(&self, point: &[Rat]) -> bool {
        self.ineqs.iter().all(|l| l.is_satisfied_by(point))
    }

    /// The rows as a set, for order-insensitive comparisons.
    pub fn row_set(&self) -> HashSet<Inequality> {
        self.ineqs.iter().cloned().collect()
    }

    pub fn same_rows(&self, other: &HSystem) -> bool {
        self.var_names == other.var_names && self.row_set() == other.row_set()
    }

    /// Drops the given variable columns (their coefficients must already be
    /// zero for the result to mean anything).
    pub fn drop_vars(&self, vars: &[usize]) -> HSystem {
        let keep: Vec<usize> = (0..self.dim()).filter(|i| !vars.contains(i)).collect();
        let var_names = keep.iter().map(|&i| self.var_names[i].clone()).collect();
        let ineqs = self
            .ineqs
            .iter()
            .map(|l| {
                let coeffs = keep.iter().map(|&i| l.coeffs[i].clone()).collect();
                let mut out = Inequality::new(coeffs, l.rhs.clone());
                out.level_tag = l.level_tag;
                out
            })
            .collect();
        HSystem { var_names, ineqs }
    }

    /// Re-embeds rows over a subset of variables into a larger variable list
    /// by name, with zero coefficients elsewhere.
    pub fn embed_into(&self, var_names: &[String]) -> Result<HSystem> {
        let positions = self
            .var_names
            .iter()
            .map(|v| {
                var_names
                    .iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown variable `{v}`")))
            })
            .collect::<Result<Vec<usize>>>()?;
        let ineqs = self
            .ineqs
            .iter()
            .map(|l| {
                let mut coeffs = vec![Rat::zero(); var_names.len()];
                for (c, &p) in l.coeffs.iter().zip(&positions) {
                    coeffs[p] = c.clone();
                }
                let mut out = Inequality::new(coeffs, l.rhs.clone());
                out.level_tag = l.level_tag;
                out
            })
            .collect();
        Ok(HSystem {
            var_names: var_names.to_vec(),
            ineqs,
        })
    }
}

impl fmt::Display for HSystem {
    /// Human-readable form, one inequality per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.ineqs {
            writeln!(f, "{}", format_inequality(l, &self.var_names))?;
        }
        Ok(())
    }
}

/// Renders `2*x - y <= 3` style text.
pub fn format_inequality(l: &Inequality, names: &[String]) -> String {
    format!("{} <= {}", format_linear(&l.coeffs, names), l.rhs)
}

pub(crate) fn format_linear(coeffs: &[Rat], names: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let term = if mag == Rat::from_integer(1.into()) {
            name.clone()
        } else {
            format!("{mag}*{name}")
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A homogenized cone `{(y, x_last) | A y - c x_last <= 0, -x_last <= 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogenizedSystem {
    pub base: HSystem,
    /// Index of the `-x_last <= 0` row in `base`.
    pub marker: usize,
}

/// Primitive-normalizes every row, removes duplicates and rows `0 <= c` with
/// `c >= 0`, and keeps the first occurrence order otherwise.
pub fn normalize_system(s: &HSystem) -> Result<HSystem> {
    let mut seen = HashSet::new();
    let mut ineqs = Vec::with_capacity(s.len());
    for l in &s.ineqs {
        let mut row = Inequality::new(l.coeffs.clone(), l.rhs.clone());
        row.level_tag = l.level_tag;
        if row.is_trivial() {
            if row.rhs.is_negative() {
                return Err(Error::TriviallyInfeasible(l.rhs.to_string()));
            }
            continue;
        }
        if seen.insert(row.key()) {
            ineqs.push(row);
        }
    }
    Ok(HSystem {
        var_names: s.var_names.clone(),
        ineqs,
    })
}

/// Indices of the rows with `row · t = 0`.
pub fn zero_set(s: &HSystem, t: &[Rat]) -> Result<Vec<usize>> {
    if t.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: t.len(),
        });
    }
    Ok(s.ineqs
        .iter()
        .enumerate()
        .filter(|(_, l)| l.eval(t).is_zero())
        .map(|(i, _)| i)
        .collect())
}

pub fn homogenize(p: &HSystem) -> HomogenizedSystem {
    let mut var_names = p.var_names.clone();
    var_names.push(fresh_name(&p.var_names, "x_last"));
    let mut ineqs: Vec<Inequality> = p
        .ineqs
        .iter()
        .map(|l| {
            let mut coeffs = l.coeffs.clone();
            coeffs.push(-l.rhs.clone());
            Inequality::new(coeffs, Rat::zero())
        })
        .collect();
    let mut marker = vec![Rat::zero(); p.dim()];
    marker.push(-Rat::from_integer(1.into()));
    ineqs.push(Inequality::new(marker, Rat::zero()));
    HomogenizedSystem {
        marker: ineqs.len() - 1,
        base: HSystem { var_names, ineqs },
    }
}

pub(crate) fn fresh_name(existing: &[String], base: &str) -> String {
    let mut name = base.to_string();
    while existing.contains(&name) {
        name.push('_');
    }
    name
}

/// The recession cone `{y | A y <= 0}`.
pub fn char_cone(p: &HSystem) -> Result<HSystem> {
    let s = HSystem {
        var_names: p.var_names.clone(),
        ineqs: p
            .ineqs
            .iter()
            .map(|l| Inequality::new(l.coeffs.clone(), Rat::zero()))
            .collect(),
    };
    normalize_system(&s)
}

/// Full column rank of the coefficient matrix, i.e. the polyhedron (if
/// nonempty) is pointed. Full-dimensionality is not checked.
pub fn is_pointed_fulldim_candidate(p: &HSystem) -> bool {
    p.rank() == p.dim()
}

pub(crate) fn require_pointed(p: &HSystem) -> Result<()> {
    let rank = p.rank();
    if rank < p.dim() {
        return Err(Error::NotPointed { rank, dim: p.dim() });
    }
    Ok(())
}
