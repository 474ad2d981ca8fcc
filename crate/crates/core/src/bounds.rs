//! Quantile upper bounds for sums of random variables and single-variable
//! Chernoff tails.
//!
//! For random variables `X_1, ..., X_n` (no independence required) whose
//! moment generating functions are finite somewhere on `(0, inf)`,
//!
//! ```text
//! P(X_1 + ... + X_n > li_1(u) + ... + li_n(u)) <= exp(-u)
//! ```
//!
//! for every real `u`, where `li_j` is the smallest generalized inverse of
//! the conjugate of the j-th CGF. The module also classifies exactly when
//! the weak-inequality event `{X >= li(u)}` escapes the same cap: that
//! happens iff the support of `X` has a finite top `x_max` carrying mass
//! `p_max > 0` and `u > -ln p_max`.

use crate::error::{Error, Result};
use crate::extreal::{ext_add, ExtReal};
use crate::ratefn::{DistributionSpec, RateFn};
use crate::transform::{conjugate, lower_inverse_flagged, Flag, SolverConfig};

use std::fmt;

/// Whether both the strict-event and weak-event caps are guaranteed, or
/// only the strict one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strictness {
    StrictAndWeakHold,
    StrictOnly,
}

impl fmt::Display for Strictness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strictness::StrictAndWeakHold => "strict_and_weak_hold",
            Strictness::StrictOnly => "strict_only",
        })
    }
}

/// A computed quantile bound for a sum.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub u: f64,
    /// `li_j(u)` per term, in input order.
    pub per_term_quantiles: Vec<ExtReal>,
    /// Extended sum of the per-term quantiles.
    pub total_quantile: ExtReal,
    /// `exp(-u)`: the guaranteed cap on `P(sum > total_quantile)`.
    pub probability_cap: f64,
    /// Conjunction over the terms: weak-event caps are only claimed when
    /// every term individually supports one.
    pub strictness: Strictness,
    pub flags: Vec<Flag>,
}

/// Per-term quantile bound at level `u` and their extended sum.
///
/// A total of `-inf` (possible for `u <= 0`) and a cap above one (for
/// `u < 0`) are valid but uninformative; both are flagged vacuous rather
/// than rejected, since `u` ranges over all of the reals.
pub fn sum_quantile_bound(
    dists: &[DistributionSpec],
    u: f64,
    cfg: &SolverConfig,
) -> Result<BoundReport> {
    if dists.is_empty() {
        return Err(Error::InvalidParam(
            "bound needs at least one distribution".into(),
        ));
    }
    let mut per_term = Vec::with_capacity(dists.len());
    let mut flags: Vec<Flag> = Vec::new();
    for (j, dist) in dists.iter().enumerate() {
        let rf = RateFn::from_dist(dist.clone()).map_err(|e| tag_term(j, e))?;
        let li = lower_inverse_flagged(&rf, u, cfg).map_err(|e| tag_term(j, e))?;
        for f in li.flags {
            if !flags.contains(&f) {
                flags.push(f);
            }
        }
        per_term.push(li.value);
    }
    // Quantiles are never +inf, so the fold cannot hit (+inf) + (-inf).
    let mut total = ExtReal::ZERO;
    for &q in &per_term {
        total = ext_add(total, q)?;
    }
    let cap = (-u).exp();
    if (cap >= 1.0 || total.is_neg_inf()) && !flags.contains(&Flag::Vacuous) {
        flags.push(Flag::Vacuous);
    }
    let strictness = if dists
        .iter()
        .all(|d| strictness_check(d, u) == Strictness::StrictAndWeakHold)
    {
        Strictness::StrictAndWeakHold
    } else {
        Strictness::StrictOnly
    };
    Ok(BoundReport {
        u,
        per_term_quantiles: per_term,
        total_quantile: total,
        probability_cap: cap,
        strictness,
        flags,
    })
}

fn tag_term(j: usize, e: Error) -> Error {
    match e {
        Error::NonConvergence(msg) => Error::NonConvergence(format!("term {j}: {msg}")),
        Error::InconsistentLimit(msg) => Error::InconsistentLimit(format!("term {j}: {msg}")),
        other => other,
    }
}

/// The Chernoff tail bound `P(X >= x) <= exp(-L_X*(x))`, with
/// `exp(-inf) = 0`.
pub fn chernoff_tail(dist: &DistributionSpec, x: f64, cfg: &SolverConfig) -> Result<f64> {
    let rf = RateFn::from_dist(dist.clone())?;
    let star = conjugate(&rf, x, cfg)?;
    Ok((-star).exp().to_f64())
}

/// Classifies whether the weak-event cap `P(X >= li(u)) <= exp(-u)` is
/// guaranteed at this `u`. It fails exactly when the support has a finite
/// top, that top carries positive mass, and `u` exceeds `-ln p_max`.
pub fn strictness_check(dist: &DistributionSpec, u: f64) -> Strictness {
    let (x_max, p_max) = dist.support_summary();
    if x_max.is_finite() && p_max > 0.0 && u > -p_max.ln() {
        Strictness::StrictOnly
    } else {
        Strictness::StrictAndWeakHold
    }
}
