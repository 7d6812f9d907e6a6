//! Minimal projected representation: Fourier-Motzkin elimination in a fixed
//! variable order where every produced inequality is kept only if it is an
//! extreme ray of the (restricted) redundancy test cone.

use std::collections::HashSet;

use log::debug;
use num_traits::{Signed, Zero};

use crate::balas::{initial_test_cone, redundancy_test, restrict, TestCone};
use crate::dd::require_feasible;
use crate::error::{Error, Result};
use crate::fme::combine;
use crate::polyhedron::{normalize_system, require_pointed, HSystem, Inequality};

/// Levels of a minimal projected representation. `levels[k]` is the minimal
/// system of the projection after eliminating the first `k` variables of
/// `order`, written over the remaining variables in their input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjRep {
    pub order: Vec<String>,
    pub levels: Vec<HSystem>,
}

impl ProjRep {
    /// Number of eliminated variables available, i.e. the input dimension.
    pub fn dim(&self) -> usize {
        self.order.len()
    }

    /// Rows of `levels[k]` whose largest variable in the order is the
    /// `k`-th one, i.e. the inequalities that bound it.
    pub fn fragment(&self, k: usize) -> Result<HSystem> {
        let level = self.levels.get(k).ok_or(Error::IndexOutOfRange {
            index: k,
            max: self.dim(),
        })?;
        let Some(name) = self.order.get(k) else {
            return HSystem::new(level.var_names.clone(), Vec::new());
        };
        let j = level.var_index(name).ok_or(Error::VariableOutOfRange(k))?;
        let ineqs = level
            .ineqs
            .iter()
            .filter(|l| !l.coeffs[j].is_zero())
            .cloned()
            .collect();
        HSystem::new(level.var_names.clone(), ineqs)
    }

    /// The fragments `k..=n` written over the variables of `levels[k]`:
    /// a representation of the same projection as `levels[k]`, though
    /// generally not a minimal one.
    pub fn projected_representation(&self, k: usize) -> Result<HSystem> {
        let names = &self
            .levels
            .get(k)
            .ok_or(Error::IndexOutOfRange {
                index: k,
                max: self.dim(),
            })?
            .var_names;
        let mut ineqs = Vec::new();
        for j in k..=self.dim() {
            ineqs.extend(self.fragment(j)?.embed_into(names)?.ineqs);
        }
        HSystem::new(names.clone(), ineqs)
    }
}

/// Rows of `s` that are facets, i.e. extreme rays of the initial test cone.
pub fn minimal_input(s: &HSystem) -> Result<HSystem> {
    let s = normalize_system(s)?;
    require_pointed(&s)?;
    require_feasible(&s)?;
    let tc = initial_test_cone(&s)?;
    minimal_against(&s, &tc)
}

fn minimal_against(s: &HSystem, tc: &TestCone) -> Result<HSystem> {
    let mut ineqs = Vec::with_capacity(s.len());
    for l in &s.ineqs {
        if !redundancy_test(tc, l)? {
            ineqs.push(l.clone());
        }
    }
    HSystem::new(s.var_names.clone(), ineqs)
}

/// Resolves an elimination order given by variable names into indices.
pub fn resolve_order(s: &HSystem, order: &[String]) -> Result<Vec<usize>> {
    if order.len() != s.dim() {
        return Err(Error::InvalidArgument(format!(
            "order lists {} variables, system has {}",
            order.len(),
            s.dim()
        )));
    }
    let mut seen = HashSet::new();
    order
        .iter()
        .map(|name| {
            let j = s
                .var_index(name)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown variable `{name}`")))?;
            if !seen.insert(j) {
                return Err(Error::InvalidArgument(format!(
                    "variable `{name}` repeated in order"
                )));
            }
            Ok(j)
        })
        .collect()
}

pub fn minimal_projected_representation(s: &HSystem, order: &[String]) -> Result<ProjRep> {
    let order_idx = resolve_order(s, order)?;
    let s = normalize_system(s)?;
    require_pointed(&s)?;
    require_feasible(&s)?;
    let n = s.dim();
    let mut tc = initial_test_cone(&s)?;
    let input = minimal_against(&s, &tc)?;
    debug!("input: {} of {} rows are facets", input.len(), s.len());

    let mut current: Vec<Inequality> = input
        .ineqs
        .iter()
        .map(|l| l.clone().with_level(0))
        .collect();
    let mut levels = vec![input];
    let mut eliminated = Vec::with_capacity(n);

    for (i, &v) in order_idx.iter().enumerate() {
        tc = restrict(&tc, v)?;
        eliminated.push(v);

        let pos: Vec<&Inequality> = current
            .iter()
            .filter(|l| l.coeffs[v].is_positive())
            .collect();
        let neg: Vec<&Inequality> = current
            .iter()
            .filter(|l| l.coeffs[v].is_negative())
            .collect();
        let mut candidates = Vec::with_capacity(pos.len() * neg.len() + current.len());
        for p in &pos {
            for q in &neg {
                candidates.push(combine(p, q, v)?.with_level(i + 1));
            }
        }
        candidates.extend(current.iter().filter(|l| l.coeffs[v].is_zero()).cloned());

        let mut seen = HashSet::new();
        let mut next = Vec::new();
        let mut tested = 0usize;
        for l in candidates {
            if l.is_trivial() {
                if l.rhs.is_negative() {
                    return Err(Error::TriviallyInfeasible(l.rhs.to_string()));
                }
                continue;
            }
            if !seen.insert(l.key()) {
                continue;
            }
            tested += 1;
            if !redundancy_test(&tc, &l)? {
                next.push(l);
            }
        }
        debug!(
            "level {}: eliminated {}, {} candidates, {} kept",
            i + 1,
            s.var_names[v],
            tested,
            next.len()
        );
        levels.push(level_system(&s, &next, &eliminated));
        current = next;
    }

    Ok(ProjRep {
        order: order.to_vec(),
        levels,
    })
}

/// The minimal representation of the projection onto the variables left
/// after eliminating the first `k` variables of the order.
pub fn extract_projection(pr: &ProjRep, k: usize) -> Result<HSystem> {
    pr.levels.get(k).cloned().ok_or(Error::IndexOutOfRange {
        index: k,
        max: pr.dim(),
    })
}

/// `rows` (over all original variables) with the `eliminated` columns
/// dropped.
fn level_system(s: &HSystem, rows: &[Inequality], eliminated: &[usize]) -> HSystem {
    let ineqs = rows
        .iter()
        .map(|l| {
            let coeffs = l
                .coeffs
                .iter()
                .enumerate()
                .filter(|(j, _)| !eliminated.contains(j))
                .map(|(_, x)| x.clone())
                .collect();
            let mut row = Inequality::new(coeffs, l.rhs.clone());
            row.level_tag = l.level_tag;
            row
        })
        .collect();
    HSystem {
        var_names: s.drop_vars(eliminated).var_names,
        ineqs,
    }
}
