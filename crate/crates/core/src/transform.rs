//! The convex conjugate over the positive half-line and its generalized
//! inverses.
//!
//! For a rate function `L: (0, inf) -> (-inf, inf]` that is finite
//! somewhere, this module computes
//!
//! ```text
//! L*(x)   = sup_{t > 0} [t x - L(t)]                 (conjugate)
//! tli(u)  = inf {x : L*(x) > u} = inf_{t>0} (u + L(t)) / t   (largest inverse)
//! li(u)   = inf {x : L*(x) >= u} = lim_{v -> u-} tli(v)      (smallest inverse)
//! ```
//!
//! `L*` is nondecreasing, convex, and never `-inf`; both inverses are
//! nondecreasing and never `+inf`. The largest inverse is computed directly
//! from its half-line infimum representation; the smallest one follows by a
//! left limit, short-circuited by exact piecewise values whenever the
//! function is the CGF of a distribution with a topmost atom.

use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::ratefn::RateFn;
use crate::solver::{minimize_scalar, EdgePolicy};

use std::fmt;

/// Bracket, tolerances, and left-limit schedule for the 1-D searches.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Lower end of the `t` bracket (log-spaced grid starts here).
    pub t_lo: f64,
    /// Upper end of the `t` bracket.
    pub t_hi: f64,
    /// Target width of the refined bracket, in log-`t` units.
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Decreasing offsets used to take the left limit in [`lower_inverse`].
    pub left_limit_deltas: Vec<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            t_lo: 1e-12,
            t_hi: 1e12,
            rel_tol: 1e-10,
            max_iter: 200,
            left_limit_deltas: vec![1e-3, 1e-6, 1e-9],
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bracket_ok = self.t_lo.is_finite()
            && self.t_hi.is_finite()
            && 0.0 < self.t_lo
            && self.t_lo < self.t_hi;
        if !bracket_ok {
            return Err(Error::InvalidParam(
                "solver bracket must satisfy 0 < t_lo < t_hi".into(),
            ));
        }
        if !self.rel_tol.is_finite() || self.rel_tol <= 0.0 {
            return Err(Error::InvalidParam("rel_tol must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParam("max_iter must be at least 1".into()));
        }
        if self.left_limit_deltas.is_empty() {
            return Err(Error::InvalidParam(
                "left_limit_deltas must be nonempty".into(),
            ));
        }
        for d in &self.left_limit_deltas {
            if !d.is_finite() || *d <= 0.0 {
                return Err(Error::InvalidParam(
                    "left_limit_deltas must be positive".into(),
                ));
            }
        }
        for w in self.left_limit_deltas.windows(2) {
            if w[1] >= w[0] {
                return Err(Error::InvalidParam(
                    "left_limit_deltas must be strictly decreasing".into(),
                ));
            }
        }
        Ok(())
    }

    /// A copy with the tolerance tightened by the given factor, used for
    /// inner optimizations nested inside an outer one.
    pub fn tightened(&self, factor: f64) -> SolverConfig {
        SolverConfig {
            rel_tol: self.rel_tol / factor,
            ..self.clone()
        }
    }
}

/// Annotations attached to computed values and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    /// The search declared the objective unbounded toward a bracket edge.
    EdgeDivergence,
    /// A simplex-weight search took an edge cell as the infimum
    /// approximation while the objective was still improving toward it.
    AlphaEdge,
    /// Every probed point evaluated to `+inf`.
    NeverFinite,
    /// The bound is valid but uninformative (cap `>= 1` or quantile `-inf`).
    Vacuous,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Flag::EdgeDivergence => "edge-divergence",
            Flag::AlphaEdge => "alpha-edge",
            Flag::NeverFinite => "never-finite",
            Flag::Vacuous => "vacuous",
        };
        f.write_str(s)
    }
}

/// A computed value together with its annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct Flagged<T> {
    pub value: T,
    pub flags: Vec<Flag>,
}

impl<T> Flagged<T> {
    pub fn plain(value: T) -> Flagged<T> {
        Flagged {
            value,
            flags: Vec::new(),
        }
    }

    pub fn new(value: T, flags: Vec<Flag>) -> Flagged<T> {
        Flagged { value, flags }
    }
}

/// Whether the effective domain of `L*` includes its right endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomCase {
    Open,
    Closed,
}

impl fmt::Display for DomCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomCase::Open => "open",
            DomCase::Closed => "closed",
        })
    }
}

/// Cached landmarks of the conjugate: the right end of its effective
/// domain, and the limits of `L*` at `-inf` and at that right end.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateProfile {
    /// `sup {x : L*(x) < inf}`; `-inf` when the domain is empty.
    pub x_inf: ExtReal,
    /// Limit of `L*(x)` as `x` increases to `x_inf`.
    pub u_inf: ExtReal,
    /// Limit of `L*(x)` as `x -> -inf`.
    pub u_minus_inf: ExtReal,
    pub dom_case: DomCase,
}

fn require_real(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v.abs() > 1e100 {
        return Err(Error::InvalidParam(format!(
            "{name} must be a finite real with |{name}| <= 1e100, got {v}"
        )));
    }
    Ok(())
}

/// `L*(x) = sup_{t>0} [t x - L(t)]`, with annotations.
///
/// Returns `+inf` when the objective is judged unbounded toward a bracket
/// edge; never returns `-inf`.
pub fn conjugate_flagged(rf: &RateFn, x: f64, cfg: &SolverConfig) -> Result<Flagged<ExtReal>> {
    cfg.validate()?;
    require_real("x", x)?;
    let obj = |z: f64| {
        let t = z.exp();
        rf.conj_obj_pos(t, x)
    };
    let out = minimize_scalar(
        obj,
        cfg.t_lo.ln(),
        cfg.t_hi.ln(),
        cfg.rel_tol,
        cfg.max_iter,
        rf.convex(),
        EdgePolicy::Diverge,
    )?;
    if out.all_infinite {
        return Err(Error::NonConvergence(
            "rate function is +inf at every probed t; widen the bracket".into(),
        ));
    }
    if out.diverges.is_some() {
        return Ok(Flagged::new(ExtReal::POS_INF, vec![Flag::EdgeDivergence]));
    }
    Ok(Flagged::plain(ExtReal::new(-out.value)))
}

/// `L*(x)` as a plain value.
pub fn conjugate(rf: &RateFn, x: f64, cfg: &SolverConfig) -> Result<ExtReal> {
    conjugate_flagged(rf, x, cfg).map(|f| f.value)
}

/// The largest generalized inverse `tli(u) = inf_{t>0} (u + L(t)) / t`,
/// with annotations. Returns `-inf` when the objective is judged to
/// decrease without bound toward a bracket edge; never returns `+inf`.
pub fn upper_inverse_flagged(rf: &RateFn, u: f64, cfg: &SolverConfig) -> Result<Flagged<ExtReal>> {
    cfg.validate()?;
    require_real("u", u)?;
    let obj = |z: f64| {
        let t = z.exp();
        rf.inv_obj_pos(t, u)
    };
    let out = minimize_scalar(
        obj,
        cfg.t_lo.ln(),
        cfg.t_hi.ln(),
        cfg.rel_tol,
        cfg.max_iter,
        rf.convex(),
        EdgePolicy::Diverge,
    )?;
    if out.all_infinite {
        return Err(Error::NonConvergence(
            "rate function is +inf at every probed t; widen the bracket".into(),
        ));
    }
    if out.diverges.is_some() {
        return Ok(Flagged::new(ExtReal::NEG_INF, vec![Flag::EdgeDivergence]));
    }
    Ok(Flagged::plain(ExtReal::new(out.value)))
}

/// `tli(u)` as a plain value.
pub fn upper_inverse(rf: &RateFn, u: f64, cfg: &SolverConfig) -> Result<ExtReal> {
    upper_inverse_flagged(rf, u, cfg).map(|f| f.value)
}

/// The smallest generalized inverse `li(u) = inf {x : L*(x) >= u}`, with
/// annotations.
///
/// When the function is the CGF of a distribution whose support has a
/// finite top `x_max` carrying mass `p_max > 0`, the exact values apply at
/// and above `u = -ln p_max`: `li(u) = x_max` there, except that
/// `li(-ln p_max) = -inf` for a degenerate law (`p_max = 1`). Everywhere
/// else `li(u)` is the left limit of the largest inverse, computed along
/// the configured delta schedule and extrapolated linearly in the offset.
pub fn lower_inverse_flagged(rf: &RateFn, u: f64, cfg: &SolverConfig) -> Result<Flagged<ExtReal>> {
    cfg.validate()?;
    require_real("u", u)?;

    if let Some(dist) = rf.dist() {
        let (x_max, p_max) = dist.support_summary();
        if x_max.is_finite() && p_max > 0.0 {
            let u_jump = -p_max.ln();
            if u > u_jump {
                return Ok(Flagged::plain(x_max));
            }
            if u == u_jump {
                return if p_max < 1.0 {
                    Ok(Flagged::plain(x_max))
                } else {
                    Ok(Flagged::plain(ExtReal::NEG_INF))
                };
            }
        }
    }

    // Left limit: evaluate tli(u - delta) along the schedule, extending it
    // by up to two extra offsets when the tail has not yet settled.
    let mut deltas = cfg.left_limit_deltas.clone();
    let ratio = if deltas.len() >= 2 {
        deltas[deltas.len() - 1] / deltas[deltas.len() - 2]
    } else {
        1e-3
    };
    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(deltas.len() + 2);
    let mut extensions = 0;
    let mut idx = 0;
    loop {
        if idx == deltas.len() {
            if extensions == 2 {
                break;
            }
            extensions += 1;
            let next = deltas[deltas.len() - 1] * ratio;
            deltas.push(next);
        }
        let delta = deltas[idx];
        idx += 1;
        let tli = upper_inverse_flagged(rf, u - delta, cfg)?;
        samples.push((delta, tli.value.to_f64()));
        if let Some(v) = settle(&samples, cfg.rel_tol) {
            return Ok(Flagged::new(ExtReal::new(v), tli.flags));
        }
    }
    Err(Error::InconsistentLimit(format!(
        "tli(u - delta) did not settle at u = {u}: {samples:?}"
    )))
}

/// `li(u)` as a plain value.
pub fn lower_inverse(rf: &RateFn, u: f64, cfg: &SolverConfig) -> Result<ExtReal> {
    lower_inverse_flagged(rf, u, cfg).map(|f| f.value)
}

/// Decides whether the left-limit samples `(delta, tli(u - delta))` have
/// settled, and if so returns the limit estimate.
///
/// The sequence is nondecreasing in principle (tli is nondecreasing and the
/// offsets shrink). It settles when the last two values agree exactly, or
/// differ by no more than `10 * rel_tol` relative, or shrink clearly enough
/// that a linear-in-delta extrapolation is trustworthy.
fn settle(samples: &[(f64, f64)], rel_tol: f64) -> Option<f64> {
    let n = samples.len();
    if n < 2 {
        return None;
    }
    let (d2, w2) = samples[n - 2];
    let (d3, w3) = samples[n - 1];
    if w3 == f64::NEG_INFINITY {
        // Monotonicity makes every earlier sample -inf as well.
        return Some(f64::NEG_INFINITY);
    }
    if w2 == w3 {
        return Some(w3);
    }
    if w2.is_finite() && w3.is_finite() {
        let step = w3 - w2;
        if step.abs() <= 10.0 * rel_tol * (1.0 + w3.abs()) {
            return Some(w3);
        }
        if n >= 3 {
            let w1 = samples[n - 3].1;
            if w1.is_finite() && step.abs() <= 0.5 * (w2 - w1).abs() {
                // Linear model v(delta) = li - C delta through the last two.
                return Some(w3 + step * d3 / (d2 - d3));
            }
        }
    }
    None
}

/// Computes the conjugate's landmarks.
///
/// The right end of the domain comes from the support summary when the
/// function is a catalog CGF, otherwise from a numeric scan for the
/// finiteness boundary of the conjugate. The limits are evaluated
/// numerically in either case.
pub fn profile(rf: &RateFn, cfg: &SolverConfig) -> Result<ConjugateProfile> {
    cfg.validate()?;
    let (x_inf, dom_case, u_inf) = match rf.dist() {
        Some(dist) => {
            let (x_max, p_max) = dist.support_summary();
            if x_max.is_finite() {
                if p_max > 0.0 {
                    let u = conjugate(rf, x_max.to_f64(), cfg)?;
                    (x_max, DomCase::Closed, u)
                } else {
                    (x_max, DomCase::Open, ExtReal::POS_INF)
                }
            } else {
                (ExtReal::POS_INF, DomCase::Open, ExtReal::POS_INF)
            }
        }
        None => domain_scan(rf, cfg)?,
    };
    let u_minus_inf = left_tail_scan(rf, cfg)?;
    Ok(ConjugateProfile {
        x_inf,
        u_inf,
        u_minus_inf,
        dom_case,
    })
}

/// Locates the finiteness boundary of `x -> L*(x)` by bisection.
fn domain_scan(rf: &RateFn, cfg: &SolverConfig) -> Result<(ExtReal, DomCase, ExtReal)> {
    let is_fin = |x: f64| -> Result<bool> { Ok(!conjugate(rf, x, cfg)?.is_pos_inf()) };

    let (mut lo, mut hi) = if is_fin(1.0)? {
        let mut lo = 1.0;
        let mut hi = None;
        let mut x = 10.0;
        while x <= 1e6 {
            if is_fin(x)? {
                lo = x;
            } else {
                hi = Some(x);
                break;
            }
            x *= 10.0;
        }
        match hi {
            Some(h) => (lo, h),
            // Finite out to 1e6: the domain is unbounded above.
            None => return Ok((ExtReal::POS_INF, DomCase::Open, ExtReal::POS_INF)),
        }
    } else {
        let mut x = -1.0;
        loop {
            if is_fin(x)? {
                break (x, 1.0);
            }
            if x <= -1e6 {
                // L* is +inf everywhere we can see: empty effective domain.
                return Ok((ExtReal::NEG_INF, DomCase::Open, ExtReal::POS_INF));
            }
            x *= 10.0;
        }
    };
    for _ in 0..200 {
        if hi - lo <= 1e-9 * (1.0 + lo.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if is_fin(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let at_boundary = conjugate(rf, lo, cfg)?;
    if at_boundary.is_finite() && at_boundary.to_f64() <= 1e8 {
        Ok((ExtReal::finite(lo), DomCase::Closed, at_boundary))
    } else {
        Ok((ExtReal::finite(lo), DomCase::Open, ExtReal::POS_INF))
    }
}

/// Evaluates the conjugate at decreasing `x` until it stabilizes; a steady
/// decrease through eight decades is reported as `-inf`.
fn left_tail_scan(rf: &RateFn, cfg: &SolverConfig) -> Result<ExtReal> {
    let mut prev = conjugate(rf, -1.0, cfg)?;
    for k in 1..=8 {
        let x = -(10.0f64.powi(k));
        let v = conjugate(rf, x, cfg)?;
        if v == prev {
            return Ok(v);
        }
        if v.is_finite() && prev.is_finite() {
            let diff = (v.to_f64() - prev.to_f64()).abs();
            if diff <= f64::max(1e-7, 1e3 * cfg.rel_tol * (1.0 + v.to_f64().abs())) {
                return Ok(v);
            }
        }
        prev = v;
    }
    Ok(ExtReal::NEG_INF)
}

/// Reference implementation of the smallest inverse straight from its
/// definition: bisection on the nondecreasing map `x -> L*(x)` for the
/// leftmost `x` with `L*(x) >= u`, scanning outward from `[-1e6, 1e6]`.
///
/// Exists to validate [`lower_inverse`] against an independent route; it
/// never consults the half-line infimum identity or the left-limit
/// machinery.
pub fn inverse_oracle(rf: &RateFn, u: f64, cfg: &SolverConfig) -> Result<ExtReal> {
    cfg.validate()?;
    require_real("u", u)?;
    let target = ExtReal::finite(u);
    let reaches = |x: f64| -> Result<bool> { Ok(conjugate(rf, x, cfg)? >= target) };

    let mut hi = 1e6;
    if !reaches(hi)? {
        // No x in the scan range reaches level u: inf over the empty set.
        return Ok(ExtReal::POS_INF);
    }
    let mut lo = -1e6;
    if reaches(lo)? {
        // The level set covers the whole scan range.
        return Ok(ExtReal::NEG_INF);
    }
    for _ in 0..300 {
        if hi - lo <= 1e-8 * (1.0 + hi.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if reaches(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ExtReal::finite(0.5 * (lo + hi)))
}
