//! Fourier-Motzkin elimination: single-variable steps and block elimination
//! through the extreme rays of the projection cone.

use num_traits::{Signed, Zero};

use crate::dd::dd_method;
use crate::error::{Error, Result};
use crate::linalg::{Rat, RatVector};
use crate::polyhedron::{normalize_system, require_pointed, HSystem, Inequality};

#[derive(Clone, Debug)]
pub struct FmeStepResult {
    /// The projected system over the remaining variables.
    pub system: HSystem,
    /// Number of positive/negative pairs combined before normalization.
    pub combined_count: usize,
}

/// `-b_i * l1 + a_i * l2` where `a_i > 0` is the coefficient of `l1` and
/// `b_i < 0` the coefficient of `l2` on variable `i`.
pub fn combine(l1: &Inequality, l2: &Inequality, i: usize) -> Result<Inequality> {
    if i >= l1.dim() || i >= l2.dim() {
        return Err(Error::VariableOutOfRange(i));
    }
    let a = &l1.coeffs[i];
    let b = &l2.coeffs[i];
    if !a.is_positive() || !b.is_negative() {
        return Err(Error::SignPrecondition(i));
    }
    let f1 = -b.clone();
    let f2 = a.clone();
    let coeffs: RatVector = l1
        .coeffs
        .iter()
        .zip(&l2.coeffs)
        .enumerate()
        .map(|(k, (x, y))| {
            if k == i {
                Rat::zero()
            } else {
                &f1 * x + &f2 * y
            }
        })
        .collect();
    let rhs = &f1 * &l1.rhs + &f2 * &l2.rhs;
    Ok(Inequality::new(coeffs, rhs))
}

/// Eliminates variable `i`: every positive/negative pair is combined, rows
/// free of `i` are carried over verbatim, and the `i` column is dropped.
pub fn eliminate_one(s: &HSystem, i: usize) -> Result<FmeStepResult> {
    if i >= s.dim() {
        return Err(Error::VariableOutOfRange(i));
    }
    let pos: Vec<&Inequality> = s
        .ineqs
        .iter()
        .filter(|l| l.coeffs[i].is_positive())
        .collect();
    let neg: Vec<&Inequality> = s
        .ineqs
        .iter()
        .filter(|l| l.coeffs[i].is_negative())
        .collect();
    let mut rows = Vec::with_capacity(pos.len() * neg.len() + s.len());
    for p in &pos {
        for n in &neg {
            rows.push(combine(p, n, i)?);
        }
    }
    rows.extend(s.ineqs.iter().filter(|l| l.coeffs[i].is_zero()).cloned());
    let full = HSystem {
        var_names: s.var_names.clone(),
        ineqs: rows,
    };
    Ok(FmeStepResult {
        system: normalize_system(&full.drop_vars(&[i]))?,
        combined_count: pos.len() * neg.len(),
    })
}

/// Projects out a block of variables at once. The projection cone
/// `{y >= 0 | y^T A_block = 0}` is built with each equality as a pair of
/// inequalities; each of its extreme rays `y` yields `y^T B x <= y^T c`.
/// The result is generally not minimal.
pub fn block_eliminate(s: &HSystem, block: &[usize]) -> Result<HSystem> {
    if block.is_empty() {
        return Err(Error::EmptyBlock);
    }
    if let Some(&bad) = block.iter().find(|&&j| j >= s.dim()) {
        return Err(Error::VariableOutOfRange(bad));
    }
    require_pointed(s)?;
    let m = s.len();
    let mut cone_rows = Vec::with_capacity(2 * block.len() + m);
    for &j in block {
        let col: RatVector = s.ineqs.iter().map(|l| l.coeffs[j].clone()).collect();
        let neg: RatVector = col.iter().map(|x| -x.clone()).collect();
        cone_rows.push(Inequality::new(col, Rat::zero()));
        cone_rows.push(Inequality::new(neg, Rat::zero()));
    }
    for k in 0..m {
        let mut e = vec![Rat::zero(); m];
        e[k] = -Rat::from_integer(1.into());
        cone_rows.push(Inequality::new(e, Rat::zero()));
    }
    let cone = HSystem::new(HSystem::numbered_vars("y", m), cone_rows)?;
    let rays = dd_method(&cone)?.rays;

    let keep: Vec<usize> = (0..s.dim()).filter(|j| !block.contains(j)).collect();
    let ineqs = rays
        .iter()
        .map(|y| {
            let coeffs = keep
                .iter()
                .map(|&j| {
                    y.iter()
                        .zip(&s.ineqs)
                        .fold(Rat::zero(), |acc, (w, l)| acc + w * &l.coeffs[j])
                })
                .collect();
            let rhs = y
                .iter()
                .zip(&s.ineqs)
                .fold(Rat::zero(), |acc, (w, l)| acc + w * &l.rhs);
            Inequality::new(coeffs, rhs)
        })
        .collect();
    let var_names = keep.iter().map(|&j| s.var_names[j].clone()).collect();
    normalize_system(&HSystem::new(var_names, ineqs)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> HSystem {
        HSystem::from_i64_rows(
            &["x", "y"],
            &[(&[1, 0], 1), (&[-1, 0], 0), (&[0, 1], 1), (&[0, -1], 0)],
        )
    }

    #[test]
    fn combine_examples() {
        let l1 = Inequality::from_i64(&[1, 1], 1);
        let l2 = Inequality::from_i64(&[-1, 1], 0);
        assert_eq!(
            combine(&l1, &l2, 0).unwrap(),
            Inequality::from_i64(&[0, 2], 1)
        );

        let l1 = Inequality::from_i64(&[1], 1);
        let l2 = Inequality::from_i64(&[-1], 0);
        let c = combine(&l1, &l2, 0).unwrap();
        assert!(c.is_trivial());
        assert_eq!(c.rhs, crate::linalg::rat(1));

        // 1*(2x + y <= 4) + 2*(-x + y <= 1) = 3y <= 6
        let l1 = Inequality::from_i64(&[2, 1], 4);
        let l2 = Inequality::from_i64(&[-1, 1], 1);
        assert_eq!(
            combine(&l1, &l2, 0).unwrap(),
            Inequality::from_i64(&[0, 1], 2)
        );

        assert_eq!(combine(&l2, &l1, 0), Err(Error::SignPrecondition(0)));
    }

    #[test]
    fn eliminate_examples() {
        let r = eliminate_one(&unit_square(), 0).unwrap();
        assert_eq!(r.system.var_names, vec!["y"]);
        assert_eq!(
            r.system.row_set(),
            HSystem::from_i64_rows(&["y"], &[(&[1], 1), (&[-1], 0)]).row_set()
        );
        assert_eq!(r.combined_count, 1);

        let simplex =
            HSystem::from_i64_rows(&["x", "y"], &[(&[-1, 0], 0), (&[0, -1], 0), (&[1, 1], 1)]);
        let r = eliminate_one(&simplex, 0).unwrap();
        assert_eq!(
            r.system.row_set(),
            HSystem::from_i64_rows(&["y"], &[(&[-1], 0), (&[1], 1)]).row_set()
        );

        let s = HSystem::from_i64_rows(&["x", "y"], &[(&[1, -1], 0), (&[-1, 0], -1)]);
        let r = eliminate_one(&s, 0).unwrap();
        assert_eq!(r.system.ineqs, vec![Inequality::from_i64(&[-1], -1)]);
    }

    #[test]
    fn eliminate_detects_infeasibility() {
        let s = HSystem::from_i64_rows(&["x"], &[(&[1], 0), (&[-1], -1)]);
        assert!(matches!(
            eliminate_one(&s, 0),
            Err(Error::TriviallyInfeasible(_))
        ));
    }

    #[test]
    fn block_examples() {
        assert_eq!(block_eliminate(&unit_square(), &[]), Err(Error::EmptyBlock));
        let b = block_eliminate(&unit_square(), &[0]).unwrap();
        assert_eq!(
            b.row_set(),
            eliminate_one(&unit_square(), 0).unwrap().system.row_set()
        );
    }

    #[test]
    fn block_matches_small_worked_example() {
        let p = HSystem::from_i64_rows(
            &["x1", "x2", "x3", "x4"],
            &[
                (&[12, 1, -3, 1], 1),
                (&[-36, -2, 18, -11], -2),
                (&[-18, -1, 9, -7], -1),
                (&[45, 4, -18, 13], 4),
                (&[-1, 0, 0, 0], 0),
                (&[0, -1, 0, 0], 0),
            ],
        );
        let b = block_eliminate(&p, &[0, 1]).unwrap();
        let expected = HSystem::from_i64_rows(
            &["x3", "x4"],
            &[
                (&[3, -3], 1),
                (&[9, -11], 1),
                (&[6, -1], 2),
                (&[-3, 1], 1),
                (&[-18, 13], 4),
                (&[9, -8], 1),
            ],
        );
        assert_eq!(b.row_set(), expected.row_set());
    }
}
