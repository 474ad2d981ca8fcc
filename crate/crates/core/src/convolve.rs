//! Hölder convolution of rate functions and plain pointwise sums.
//!
//! The convolution of `L_1, ..., L_n` at `t > 0` is
//!
//! ```text
//! (L_1 # ... # L_n)(t) = inf { sum_j a_j L_j(t / a_j) :
//!                              a_j > 0, sum_j a_j = 1 }
//! ```
//!
//! It dominates the CGF of a sum of (arbitrarily dependent) random
//! variables by Hölder's inequality, and its smallest generalized inverse
//! splits additively across the parts. The n-ary infimum is computed by
//! folding pairwise left to right; the nested-infimum identity makes the
//! fold exact, and associativity is property-tested rather than assumed.

use std::cell::{Cell, RefCell};

use crate::error::{Error, Result};
use crate::extreal::{ext_inf, ExtReal};
use crate::ratefn::{RateFn, RateFnKind};
use crate::solver::{minimize_scalar, EdgePolicy};
use crate::transform::{Flag, Flagged, SolverConfig};

/// Simplex weights are confined to `[ALPHA_EDGE, 1 - ALPHA_EDGE]`; the open
/// edges are approached, never touched.
const ALPHA_EDGE: f64 = 1e-9;

/// Shared across every level of a fold so that an edge clamp anywhere in
/// the nesting surfaces on the final value.
#[derive(Debug, Default)]
struct FoldState {
    alpha_edge: Cell<bool>,
    error: RefCell<Option<Error>>,
}

impl FoldState {
    fn capture(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                let mut slot = self.error.borrow_mut();
                if slot.is_none() {
                    *slot = Some(e);
                }
                f64::INFINITY
            }
        }
    }

    fn take_error(&self) -> Option<Error> {
        self.error.borrow_mut().take()
    }
}

/// Minimizes `a f1(t/a) + (1-a) f2(t/(1-a))` over `a in (0, 1)`.
///
/// The weight is parametrized by its log-odds so both edges get the same
/// resolution. When the parts are convex the objective is convex in the
/// weight and golden-section refinement applies; otherwise the search falls
/// back to repeated grid passes. A minimum still improving at an edge cell
/// is clamped to the edge value: the infimum over the open interval may be
/// attained only in the limit, and the edge value is the best available
/// approximation.
fn pair_min<F1, F2>(
    f1: F1,
    f2: F2,
    t: f64,
    unimodal: bool,
    cfg: &SolverConfig,
    state: &FoldState,
) -> Result<f64>
where
    F1: Fn(f64) -> f64,
    F2: Fn(f64) -> f64,
{
    let z_max = ((1.0 - ALPHA_EDGE) / ALPHA_EDGE).ln();
    let obj = |z: f64| {
        let alpha = (1.0 / (1.0 + (-z).exp())).clamp(ALPHA_EDGE, 1.0 - ALPHA_EDGE);
        alpha * f1(t / alpha) + (1.0 - alpha) * f2(t / (1.0 - alpha))
    };
    let out = minimize_scalar(
        obj,
        -z_max,
        z_max,
        cfg.rel_tol,
        cfg.max_iter,
        unimodal,
        EdgePolicy::Clamp,
    )?;
    if let Some(e) = state.take_error() {
        return Err(e);
    }
    if out.clamped_edge.is_some() {
        state.alpha_edge.set(true);
    }
    Ok(out.value)
}

/// Left-to-right pairwise fold of the convolution at `t`.
fn fold_value(parts: &[RateFn], t: f64, cfg: &SolverConfig, state: &FoldState) -> Result<f64> {
    debug_assert!(!parts.is_empty());
    if parts.len() == 1 {
        return Ok(parts[0].eval_pos(t));
    }
    let (prefix, last) = parts.split_at(parts.len() - 1);
    let unimodal = parts.iter().all(RateFn::convex);
    pair_min(
        |s| state.capture(fold_value(prefix, s, cfg, state)),
        |s| last[0].eval_pos(s),
        t,
        unimodal,
        cfg,
        state,
    )
}

/// A rate function defined as the Hölder convolution of its parts.
#[derive(Debug, Clone)]
pub struct ConvolvedRateFn {
    parts: Vec<RateFn>,
    /// Configuration for the nested simplex searches; tighter than the
    /// default so that error does not stack when the convolution is itself
    /// conjugated or inverted.
    inner: SolverConfig,
}

impl ConvolvedRateFn {
    pub fn parts(&self) -> &[RateFn] {
        &self.parts
    }

    pub fn inner_config(&self) -> &SolverConfig {
        &self.inner
    }

    pub(crate) fn eval_pos(&self, t: f64) -> f64 {
        fold_value(&self.parts, t, &self.inner, &FoldState::default())
            .expect("crate-constructed inner config cannot exhaust its iteration budget")
    }
}

/// `(L_1 # ... # L_n)(t)`, with annotations.
///
/// A value of `+inf` means every probed simplex point was infeasible; it is
/// reported with a [`Flag::NeverFinite`] annotation rather than as an error.
pub fn holder_convolve_flagged(
    parts: &[RateFn],
    t: f64,
    cfg: &SolverConfig,
) -> Result<Flagged<ExtReal>> {
    cfg.validate()?;
    if parts.is_empty() {
        return Err(Error::InvalidParam(
            "convolution needs at least one part".into(),
        ));
    }
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "convolution argument must be a finite t > 0, got {t}"
        )));
    }
    let state = FoldState::default();
    let v = fold_value(parts, t, cfg, &state)?;
    let mut flags = Vec::new();
    if state.alpha_edge.get() {
        flags.push(Flag::AlphaEdge);
    }
    if v.is_infinite() {
        flags.push(Flag::NeverFinite);
    }
    Ok(Flagged::new(ExtReal::new(v), flags))
}

/// `(L_1 # ... # L_n)(t)` as a plain value.
pub fn holder_convolve(parts: &[RateFn], t: f64, cfg: &SolverConfig) -> Result<ExtReal> {
    holder_convolve_flagged(parts, t, cfg).map(|f| f.value)
}

/// Packages a convolution as a rate function of its own, so it can be
/// conjugated and inverted like any other.
///
/// The finite witness is found by probing the parts' witnesses (scaled into
/// the feasible region) and a coarse log grid; specs with no finite point
/// are rejected.
pub fn as_ratefn(parts: Vec<RateFn>) -> Result<RateFn> {
    if parts.is_empty() {
        return Err(Error::InvalidParam(
            "convolution needs at least one part".into(),
        ));
    }
    let inner = SolverConfig::default().tightened(10.0);
    let convex = parts.iter().all(RateFn::convex);

    let mut candidates: Vec<f64> = Vec::new();
    let min_witness = parts
        .iter()
        .map(RateFn::finite_witness)
        .fold(f64::INFINITY, f64::min);
    candidates.push(min_witness / parts.len() as f64);
    candidates.extend(parts.iter().map(RateFn::finite_witness));
    candidates.extend((0..13).map(|k| 10f64.powi(k - 9)));

    let finite_at = |t: f64| -> Result<bool> {
        if !(t > 0.0 && t.is_finite()) {
            return Ok(false);
        }
        Ok(fold_value(&parts, t, &inner, &FoldState::default())?.is_finite())
    };
    let mut witness = None;
    for &t in &candidates {
        if finite_at(t)? {
            witness = Some(t);
            break;
        }
    }
    let witness = witness.ok_or(Error::NeverFinite)?;

    let t_sup = if finite_at(1e12)? {
        ExtReal::POS_INF
    } else {
        let (mut lo, mut hi) = (witness.ln(), 1e12f64.ln());
        for _ in 0..60 {
            if hi - lo <= 1e-9 {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if finite_at(mid.exp())? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        ExtReal::finite(lo.exp())
    };

    Ok(RateFn::from_parts(
        RateFnKind::Convolution(ConvolvedRateFn { parts, inner }),
        convex,
        witness,
        t_sup,
    ))
}

/// Pointwise extended sum of the parts, packaged as a rate function.
///
/// `+inf` propagates through the sum, so the finite domain is the
/// intersection of the parts' domains; a spec whose intersection is empty
/// is rejected.
pub fn sum_ratefn(parts: Vec<RateFn>) -> Result<RateFn> {
    if parts.is_empty() {
        return Err(Error::InvalidParam("sum needs at least one part".into()));
    }
    let convex = parts.iter().all(RateFn::convex);
    let t_sup = ext_inf(parts.iter().map(RateFn::t_sup_finite));

    let mut candidates: Vec<f64> = Vec::new();
    candidates.push(
        parts
            .iter()
            .map(RateFn::finite_witness)
            .fold(f64::INFINITY, f64::min),
    );
    candidates.extend(parts.iter().map(RateFn::finite_witness));
    if t_sup.is_finite() {
        candidates.push(t_sup.to_f64() / 2.0);
    }
    candidates.extend((0..13).map(|k| 10f64.powi(k - 9)));

    let witness = candidates
        .iter()
        .copied()
        .find(|&t| {
            t > 0.0 && t.is_finite() && parts.iter().map(|p| p.eval_pos(t)).sum::<f64>().is_finite()
        })
        .ok_or(Error::NeverFinite)?;

    Ok(RateFn::from_parts(
        RateFnKind::Sum(parts),
        convex,
        witness,
        t_sup,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratefn::{make_ratefn, DistributionSpec, RateFnSpec};

    fn cgf(d: DistributionSpec) -> RateFn {
        RateFn::from_dist(d).unwrap()
    }

    fn power(r: f64, a: f64) -> RateFn {
        RateFn::power(r, a).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn powers_add_their_scales() {
        let cfg = SolverConfig::default();
        let v = holder_convolve(&[power(2.0, 1.0), power(2.0, 2.0)], 1.0, &cfg).unwrap();
        assert!(close(v.to_f64(), 9.0, 1e-10), "got {v}");
    }

    #[test]
    fn gaussian_scales_add() {
        let cfg = SolverConfig::default();
        let parts = [
            cgf(DistributionSpec::Gaussian {
                mu: 0.0,
                sigma: 1.0,
            }),
            cgf(DistributionSpec::Gaussian {
                mu: 0.0,
                sigma: 2.0,
            }),
        ];
        let v = holder_convolve(&parts, 1.0, &cfg).unwrap();
        assert!(close(v.to_f64(), 4.5, 1e-9), "got {v}");
    }

    #[test]
    fn single_part_is_identity() {
        let cfg = SolverConfig::default();
        let g = cgf(DistributionSpec::Gaussian {
            mu: 0.3,
            sigma: 1.0,
        });
        let v = holder_convolve(std::slice::from_ref(&g), 2.0, &cfg).unwrap();
        assert_eq!(v, g.eval(2.0).unwrap());
    }

    #[test]
    fn zero_scale_power_is_neutral() {
        let cfg = SolverConfig::default();
        let v = holder_convolve(&[power(3.0, 0.0), power(3.0, 1.5)], 2.0, &cfg).unwrap();
        assert!(close(v.to_f64(), 27.0, 1e-7), "got {v}");
    }

    #[test]
    fn pointmass_shifts_by_a_linear_term() {
        let cfg = SolverConfig::default();
        let parts = [
            cgf(DistributionSpec::PointMass { c: 2.0 }),
            cgf(DistributionSpec::Gaussian {
                mu: 0.0,
                sigma: 1.0,
            }),
        ];
        let out = holder_convolve_flagged(&parts, 1.5, &cfg).unwrap();
        // pm(c) # L = c t + L(t), approached at the weight edge.
        let want = 2.0 * 1.5 + 0.5 * 1.5 * 1.5;
        assert!(close(out.value.to_f64(), want, 1e-7), "got {:?}", out.value);
        assert!(out.flags.contains(&Flag::AlphaEdge));
    }

    #[test]
    fn single_part_fold_behaves_like_the_part() {
        let pm = cgf(DistributionSpec::PointMass { c: 2.0 });
        let rf = as_ratefn(vec![pm.clone()]).unwrap();
        for t in [0.1, 1.0, 7.5] {
            assert!((rf.eval(t).unwrap().to_f64() - pm.eval(t).unwrap().to_f64()).abs() < 1e-12);
        }
    }

    #[test]
    fn convolved_ratefn_metadata() {
        let rf = as_ratefn(vec![
            cgf(DistributionSpec::Gaussian {
                mu: 0.0,
                sigma: 1.0,
            }),
            cgf(DistributionSpec::Gaussian {
                mu: 0.0,
                sigma: 2.0,
            }),
        ])
        .unwrap();
        assert!(rf.convex());
        assert!(rf.t_sup_finite().is_pos_inf());
        assert!(rf.eval(1.0).unwrap().is_finite());
    }

    #[test]
    fn gaussian_exponential_mix_has_finite_threshold() {
        let rf = as_ratefn(vec![
            cgf(DistributionSpec::Gaussian {
                mu: 0.0,
                sigma: 1.0,
            }),
            cgf(DistributionSpec::Exponential { rate: 1.0 }),
        ])
        .unwrap();
        let t_sup = rf.t_sup_finite();
        assert!(t_sup.is_finite());
        assert!(t_sup.to_f64() > 0.0);
        assert!(rf.eval(t_sup.to_f64() / 2.0).unwrap().is_finite());
        assert!(rf.eval(t_sup.to_f64() * 4.0).unwrap().is_pos_inf());
    }

    #[test]
    fn pointmass_sum_cgfs_add() {
        let parts = vec![
            cgf(DistributionSpec::PointMass { c: 1.0 }),
            cgf(DistributionSpec::PointMass { c: 2.0 }),
        ];
        let rf = sum_ratefn(parts).unwrap();
        assert_eq!(rf.eval(1.0).unwrap(), ExtReal::finite(3.0));
    }

    #[test]
    fn sum_propagates_infinity() {
        let rf = sum_ratefn(vec![
            cgf(DistributionSpec::Gaussian {
                mu: 0.0,
                sigma: 1.0,
            }),
            cgf(DistributionSpec::Exponential { rate: 1.0 }),
        ])
        .unwrap();
        assert!((rf.eval(2.0).unwrap()).is_pos_inf());
        assert!((rf.eval(0.5).unwrap()).is_finite());
        assert_eq!(rf.t_sup_finite(), ExtReal::finite(1.0));
    }

    #[test]
    fn gaussian_sum_doubles_variance_term() {
        let g = cgf(DistributionSpec::Gaussian {
            mu: 0.0,
            sigma: 1.0,
        });
        let rf = sum_ratefn(vec![g.clone(), g]).unwrap();
        assert!(
            close(rf.eval(2.0).unwrap().to_f64(), 4.0, 1e-12),
            "got {:?}",
            rf.eval(2.0)
        );
    }

    #[test]
    fn disjoint_tabulated_sum_is_never_finite() {
        let a = make_ratefn(RateFnSpec::Tabulated(vec![(0.1, 0.0), (0.2, 0.0)])).unwrap();
        let b = make_ratefn(RateFnSpec::Tabulated(vec![(5.0, 0.0), (6.0, 0.0)])).unwrap();
        assert_eq!(sum_ratefn(vec![a, b]).unwrap_err(), Error::NeverFinite);
    }

    /// Walks the Minkowski-inequality derivation numerically, for a pair
    /// of positive discrete random variables under an independent joint
    /// law and r = 2.5:
    ///
    /// ```text
    /// E (X+Y)^r = E (p_{r,X} # p_{r,Y})(1)          (power additivity)
    ///           <= inf_b E [b p_{r,X}(1/b) + (1-b) p_{r,Y}(1/(1-b))]
    ///           = (p_{r,|X|_r} # p_{r,|Y|_r})(1)    (swap E with inf)
    ///           = (|X|_r + |Y|_r)^r
    /// ```
    ///
    /// so the r-norm of the sum is at most the sum of the r-norms.
    #[test]
    fn minkowski_inequality_via_power_convolution() {
        let cfg = SolverConfig::default();
        let r = 2.5;
        let xs = [(0.5, 0.6), (2.0, 0.4)];
        let ys = [(1.0, 0.5), (3.0, 0.5)];

        // Outcome by outcome, the convolution at t = 1 is the power of
        // the sum.
        let mut e_sum_r = 0.0;
        let mut e_conv = 0.0;
        for &(x, px) in &xs {
            for &(y, py) in &ys {
                let conv = holder_convolve(&[power(r, x), power(r, y)], 1.0, &cfg)
                    .unwrap()
                    .to_f64();
                assert!(
                    (conv - (x + y).powf(r)).abs() <= 1e-9 * (x + y).powf(r),
                    "pointwise additivity failed at ({x},{y})"
                );
                e_sum_r += px * py * (x + y).powf(r);
                e_conv += px * py * conv;
            }
        }
        assert!((e_conv - e_sum_r).abs() <= 1e-8 * e_sum_r);

        // Swapping the expectation with the weight infimum can only grow
        // the value; the outer bound is again a single convolution, now of
        // the r-norms.
        let norm = |atoms: &[(f64, f64)]| -> f64 {
            atoms
                .iter()
                .map(|&(v, p)| p * v.powf(r))
                .sum::<f64>()
                .powf(1.0 / r)
        };
        let (nx, ny) = (norm(&xs), norm(&ys));
        let outer = holder_convolve(&[power(r, nx), power(r, ny)], 1.0, &cfg)
            .unwrap()
            .to_f64();
        assert!((outer - (nx + ny).powf(r)).abs() <= 1e-9 * outer);
        assert!(
            e_sum_r <= outer + 1e-9 * outer,
            "E (X+Y)^r = {e_sum_r} escaped ({nx} + {ny})^r = {outer}"
        );

        // The headline inequality.
        assert!(e_sum_r.powf(1.0 / r) <= nx + ny + 1e-12);
    }

    #[test]
    fn infeasible_convolution_point_is_flagged_infinite() {
        // Parts finite only on [5, 6]: weights below one push the rescaled
        // arguments t/a above 6 once t > 6, so nothing is feasible there.
        let a = make_ratefn(RateFnSpec::Tabulated(vec![(5.0, 0.0), (6.0, 0.0)])).unwrap();
        let b = make_ratefn(RateFnSpec::Tabulated(vec![(5.0, 0.0), (6.0, 0.0)])).unwrap();
        let cfg = SolverConfig::default();
        let out = holder_convolve_flagged(&[a, b], 50.0, &cfg).unwrap();
        assert!(out.value.is_pos_inf());
        assert!(out.flags.contains(&Flag::NeverFinite));
    }
}
