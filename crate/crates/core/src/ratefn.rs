//! Rate functions `L: (0, inf) -> (-inf, inf]` and the Cramér–Chernoff
//! catalog `L_X(t) = ln E[exp(tX)]`.
//!
//! Every descriptor certifies that `L(t) < inf` for at least one `t > 0`
//! (otherwise there is nothing to conjugate) and records the supremum of the
//! finite domain. Evaluation never returns `-inf` and never returns NaN.

use crate::error::{Error, Result};
use crate::extreal::ExtReal;

/// Parametric description of a real-valued random variable.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionSpec {
    Gaussian {
        mu: f64,
        sigma: f64,
    },
    Bernoulli {
        p: f64,
    },
    Poisson {
        lambda: f64,
    },
    Exponential {
        rate: f64,
    },
    PointMass {
        c: f64,
    },
    /// Atoms `(x_i, p_i)` with distinct `x_i`, `p_i > 0`, and mass summing
    /// to one. Stored sorted by `x_i`.
    Discrete {
        atoms: Vec<(f64, f64)>,
    },
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParam(msg.into()))
    }
}

impl DistributionSpec {
    /// Builds a discrete law from atoms, sorting and validating them.
    pub fn discrete(mut atoms: Vec<(f64, f64)>) -> Result<DistributionSpec> {
        require(!atoms.is_empty(), "discrete law needs at least one atom")?;
        for &(x, p) in &atoms {
            require(x.is_finite(), "discrete atom positions must be finite")?;
            require(p.is_finite() && p > 0.0, "discrete atom masses must be > 0")?;
        }
        atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite atom positions"));
        for w in atoms.windows(2) {
            require(w[0].0 < w[1].0, "discrete atom positions must be distinct")?;
        }
        let total: f64 = atoms.iter().map(|&(_, p)| p).sum();
        require(
            (total - 1.0).abs() <= 1e-9,
            "discrete atom masses must sum to 1",
        )?;
        Ok(DistributionSpec::Discrete { atoms })
    }

    /// Checks the parameter constraints of the family.
    pub fn validate(&self) -> Result<()> {
        match self {
            DistributionSpec::Gaussian { mu, sigma } => {
                require(mu.is_finite(), "gaussian mu must be finite")?;
                require(
                    sigma.is_finite() && *sigma > 0.0,
                    "gaussian sigma must be > 0",
                )
            }
            DistributionSpec::Bernoulli { p } => require(
                p.is_finite() && *p > 0.0 && *p < 1.0,
                "bernoulli p must be in (0, 1)",
            ),
            DistributionSpec::Poisson { lambda } => require(
                lambda.is_finite() && *lambda > 0.0,
                "poisson lambda must be > 0",
            ),
            DistributionSpec::Exponential { rate } => require(
                rate.is_finite() && *rate > 0.0,
                "exponential rate must be > 0",
            ),
            DistributionSpec::PointMass { c } => {
                require(c.is_finite(), "pointmass c must be finite")
            }
            DistributionSpec::Discrete { atoms } => {
                // Re-validate; `discrete` is the canonical constructor but the
                // variant is public.
                DistributionSpec::discrete(atoms.clone()).map(|_| ())
            }
        }
    }

    /// Exact `(x_max, p_max)`: the supremum of the support and the
    /// probability mass sitting on it. Never estimated numerically.
    pub fn support_summary(&self) -> (ExtReal, f64) {
        match self {
            DistributionSpec::Gaussian { .. }
            | DistributionSpec::Poisson { .. }
            | DistributionSpec::Exponential { .. } => (ExtReal::POS_INF, 0.0),
            DistributionSpec::Bernoulli { p } => (ExtReal::finite(1.0), *p),
            DistributionSpec::PointMass { c } => (ExtReal::finite(*c), 1.0),
            DistributionSpec::Discrete { atoms } => {
                let &(x, p) = atoms.last().expect("validated atoms are nonempty");
                (ExtReal::finite(x), p)
            }
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            DistributionSpec::Gaussian { mu, .. } => *mu,
            DistributionSpec::Bernoulli { p } => *p,
            DistributionSpec::Poisson { lambda } => *lambda,
            DistributionSpec::Exponential { rate } => 1.0 / rate,
            DistributionSpec::PointMass { c } => *c,
            DistributionSpec::Discrete { atoms } => atoms.iter().map(|&(x, p)| x * p).sum(),
        }
    }

    /// Supremum of `{t > 0 : ln E[exp(tX)] < inf}`.
    pub fn cgf_domain_sup(&self) -> ExtReal {
        match self {
            DistributionSpec::Exponential { rate } => ExtReal::finite(*rate),
            _ => ExtReal::POS_INF,
        }
    }

    /// Closed-form CGF for `t > 0`, returning `+inf` where the moment
    /// generating function diverges (or overflows the float range).
    pub(crate) fn cgf_pos(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0);
        match self {
            DistributionSpec::Gaussian { mu, sigma } => mu * t + 0.5 * sigma * sigma * t * t,
            DistributionSpec::Bernoulli { p } => {
                // ln(1 - p + p e^t) written as t + ln1p((1-p) expm1(-t)) so
                // that neither tail loses precision.
                t + ((1.0 - p) * (-t).exp_m1()).ln_1p()
            }
            DistributionSpec::Poisson { lambda } => lambda * t.exp_m1(),
            DistributionSpec::Exponential { rate } => {
                if t < *rate {
                    -(-t / rate).ln_1p()
                } else {
                    f64::INFINITY
                }
            }
            DistributionSpec::PointMass { c } => c * t,
            DistributionSpec::Discrete { atoms } => {
                // Shift by the largest exponent so the sum cannot overflow.
                let m = t * atoms.last().expect("nonempty").0;
                let sum: f64 = atoms.iter().map(|&(x, p)| p * (t * x - m).exp()).sum();
                m + sum.ln()
            }
        }
    }
}

/// `ln E[exp(tX)]` for `t > 0`, in closed form per family.
pub fn eval_cgf(dist: &DistributionSpec, t: f64) -> Result<ExtReal> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "CGF argument must be a finite t > 0, got {t}"
        )));
    }
    dist.validate()?;
    Ok(ExtReal::new(dist.cgf_pos(t)))
}

/// Exact `(x_max, p_max)` for a distribution.
pub fn support_summary(dist: &DistributionSpec) -> (ExtReal, f64) {
    dist.support_summary()
}

/// A user-supplied function tabulated at strictly increasing `t`-nodes,
/// linearly interpolated between them and `+inf` outside the node range.
///
/// Node values may be `+inf` (the function is then `+inf` on the segments
/// touching that node), never `-inf` or NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedFn {
    nodes: Vec<(f64, f64)>,
}

impl TabulatedFn {
    pub fn new(nodes: Vec<(f64, f64)>) -> Result<TabulatedFn> {
        require(
            nodes.len() >= 2,
            "tabulated function needs at least 2 nodes",
        )?;
        for &(t, v) in &nodes {
            require(
                t.is_finite() && t > 0.0,
                "tabulated t-nodes must be finite and > 0",
            )?;
            require(
                !v.is_nan() && v > f64::NEG_INFINITY,
                "tabulated values must be in (-inf, inf]",
            )?;
        }
        for w in nodes.windows(2) {
            require(
                w[0].0 < w[1].0,
                "tabulated t-nodes must be strictly increasing",
            )?;
        }
        Ok(TabulatedFn { nodes })
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    fn eval_pos(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0);
        let first = self.nodes[0].0;
        let last = self.nodes[self.nodes.len() - 1].0;
        if t < first || t > last {
            return f64::INFINITY;
        }
        let i = match self
            .nodes
            .binary_search_by(|&(ti, _)| ti.partial_cmp(&t).expect("finite nodes"))
        {
            Ok(i) => return self.nodes[i].1,
            Err(i) => i,
        };
        let (t0, v0) = self.nodes[i - 1];
        let (t1, v1) = self.nodes[i];
        if v0.is_infinite() || v1.is_infinite() {
            return f64::INFINITY;
        }
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    /// A piecewise-linear function is convex iff its segment slopes are
    /// nondecreasing; `+inf` nodes must sit at the ends for the finite
    /// region to stay an interval.
    fn is_convex(&self) -> bool {
        let finite: Vec<usize> = (0..self.nodes.len())
            .filter(|&i| self.nodes[i].1.is_finite())
            .collect();
        if finite.is_empty() {
            return false;
        }
        // Finite nodes must be contiguous.
        if finite[finite.len() - 1] - finite[0] + 1 != finite.len() {
            return false;
        }
        let mut prev_slope = f64::NEG_INFINITY;
        for w in finite.windows(2) {
            let (t0, v0) = self.nodes[w[0]];
            let (t1, v1) = self.nodes[w[1]];
            let slope = (v1 - v0) / (t1 - t0);
            if slope < prev_slope - 1e-12 * (1.0 + slope.abs()) {
                return false;
            }
            prev_slope = prev_slope.max(slope);
        }
        true
    }

    fn first_finite_t(&self) -> Option<f64> {
        self.nodes
            .iter()
            .find(|&&(_, v)| v.is_finite())
            .map(|&(t, _)| t)
    }

    fn last_finite_t(&self) -> Option<f64> {
        self.nodes
            .iter()
            .rev()
            .find(|&&(_, v)| v.is_finite())
            .map(|&(t, _)| t)
    }
}

/// The supported ways of describing a rate function.
#[derive(Debug, Clone)]
pub enum RateFnKind {
    /// Cramér–Chernoff function of a distribution.
    Cgf(DistributionSpec),
    /// The power function `t -> (a t)^r` with `r >= 1`, `a >= 0`.
    Power {
        r: f64,
        a: f64,
    },
    Tabulated(TabulatedFn),
    /// Pointwise extended sum of the parts.
    Sum(Vec<RateFn>),
    /// Hölder convolution of the parts (see [`crate::convolve`]).
    Convolution(crate::convolve::ConvolvedRateFn),
}

/// Evaluable descriptor of a rate function `L: (0, inf) -> (-inf, inf]`,
/// certified to be finite somewhere.
#[derive(Debug, Clone)]
pub struct RateFn {
    kind: RateFnKind,
    convex: bool,
    finite_witness: f64,
    t_sup_finite: ExtReal,
}

impl RateFn {
    pub(crate) fn from_parts(
        kind: RateFnKind,
        convex: bool,
        finite_witness: f64,
        t_sup_finite: ExtReal,
    ) -> RateFn {
        RateFn {
            kind,
            convex,
            finite_witness,
            t_sup_finite,
        }
    }

    pub fn kind(&self) -> &RateFnKind {
        &self.kind
    }

    /// `true` when the descriptor is known convex on its finite domain.
    pub fn convex(&self) -> bool {
        self.convex
    }

    /// A `t > 0` with `L(t) < inf`.
    pub fn finite_witness(&self) -> f64 {
        self.finite_witness
    }

    /// Supremum of `{t > 0 : L(t) < inf}`.
    pub fn t_sup_finite(&self) -> ExtReal {
        self.t_sup_finite
    }

    /// The underlying distribution when the function is a catalog CGF.
    pub fn dist(&self) -> Option<&DistributionSpec> {
        match &self.kind {
            RateFnKind::Cgf(d) => Some(d),
            _ => None,
        }
    }

    /// Evaluates `L(t)`; the result lies in `(-inf, +inf]`.
    pub fn eval(&self, t: f64) -> Result<ExtReal> {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::InvalidParam(format!(
                "rate function argument must be a finite t > 0, got {t}"
            )));
        }
        Ok(ExtReal::new(self.eval_pos(t)))
    }

    /// Internal evaluation for `t > 0`, as a raw float in `(-inf, +inf]`.
    pub(crate) fn eval_pos(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0 && t.is_finite());
        let v = match &self.kind {
            RateFnKind::Cgf(d) => d.cgf_pos(t),
            RateFnKind::Power { r, a } => (a * t).powf(*r),
            RateFnKind::Tabulated(tab) => tab.eval_pos(t),
            RateFnKind::Sum(parts) => parts.iter().map(|p| p.eval_pos(t)).sum(),
            RateFnKind::Convolution(conv) => conv.eval_pos(t),
        };
        debug_assert!(!v.is_nan() && v > f64::NEG_INFINITY);
        v
    }

    /// Slope of the linear asymptote of `L` at `t -> inf`, where one is
    /// known exactly (bounded-support CGFs and linear powers); zero
    /// otherwise.
    pub(crate) fn linear_slope(&self) -> f64 {
        match &self.kind {
            RateFnKind::Cgf(d) => {
                let (x_max, _) = d.support_summary();
                if x_max.is_finite() {
                    x_max.to_f64()
                } else {
                    0.0
                }
            }
            RateFnKind::Power { r, a } if *r == 1.0 => *a,
            RateFnKind::Sum(parts) => parts.iter().map(RateFn::linear_slope).sum(),
            _ => 0.0,
        }
    }

    /// `L(t) - t * linear_slope()`, computed without forming the two huge
    /// terms separately.
    ///
    /// Subtracting the linear asymptote directly would lose the low-order
    /// bits that carry the entire answer near the conjugate's domain
    /// boundary (at `t = 1e12` a CGF like `t + ln(p + (1-p) e^{-t})` keeps
    /// only four decimals of the log term once stored).
    pub(crate) fn residual_pos(&self, t: f64) -> f64 {
        debug_assert!(t > 0.0 && t.is_finite());
        match &self.kind {
            RateFnKind::Cgf(d) => match d {
                DistributionSpec::Bernoulli { p } => ((1.0 - p) * (-t).exp_m1()).ln_1p(),
                DistributionSpec::PointMass { .. } => 0.0,
                DistributionSpec::Discrete { atoms } => {
                    let top = atoms.last().expect("nonempty").0;
                    let sum: f64 = atoms.iter().map(|&(x, p)| p * (t * (x - top)).exp()).sum();
                    sum.ln()
                }
                _ => d.cgf_pos(t),
            },
            RateFnKind::Power { r, .. } if *r == 1.0 => 0.0,
            RateFnKind::Sum(parts) => parts.iter().map(|p| p.residual_pos(t)).sum(),
            _ => self.eval_pos(t),
        }
    }

    /// `L(t) - t x`, the conjugate's objective, in the stable split form.
    pub(crate) fn conj_obj_pos(&self, t: f64, x: f64) -> f64 {
        self.residual_pos(t) + t * (self.linear_slope() - x)
    }

    /// `(u + L(t)) / t`, the largest inverse's objective, in the stable
    /// split form.
    pub(crate) fn inv_obj_pos(&self, t: f64, u: f64) -> f64 {
        self.linear_slope() + (u + self.residual_pos(t)) / t
    }

    pub fn from_dist(dist: DistributionSpec) -> Result<RateFn> {
        make_ratefn(RateFnSpec::Dist(dist))
    }

    pub fn power(r: f64, a: f64) -> Result<RateFn> {
        make_ratefn(RateFnSpec::Power { r, a })
    }
}

/// Input to [`make_ratefn`].
#[derive(Debug, Clone, PartialEq)]
pub enum RateFnSpec {
    Dist(DistributionSpec),
    Power { r: f64, a: f64 },
    Tabulated(Vec<(f64, f64)>),
}

/// Builds a validated [`RateFn`], rejecting specs whose function is `+inf`
/// everywhere on `(0, inf)`.
pub fn make_ratefn(spec: RateFnSpec) -> Result<RateFn> {
    match spec {
        RateFnSpec::Dist(dist) => {
            dist.validate()?;
            let t_sup = dist.cgf_domain_sup();
            let witness = if t_sup.is_finite() {
                t_sup.to_f64() / 2.0
            } else {
                1.0
            };
            let rf = RateFn::from_parts(RateFnKind::Cgf(dist), true, witness, t_sup);
            debug_assert!(rf.eval_pos(witness).is_finite());
            Ok(rf)
        }
        RateFnSpec::Power { r, a } => {
            require(r.is_finite() && r >= 1.0, "power exponent r must be >= 1")?;
            require(a.is_finite() && a >= 0.0, "power scale a must be >= 0")?;
            Ok(RateFn::from_parts(
                RateFnKind::Power { r, a },
                true,
                1.0,
                ExtReal::POS_INF,
            ))
        }
        RateFnSpec::Tabulated(nodes) => {
            let tab = TabulatedFn::new(nodes)?;
            let witness = tab.first_finite_t().ok_or(Error::NeverFinite)?;
            let t_sup = tab
                .last_finite_t()
                .expect("a first finite node implies a last");
            let convex = tab.is_convex();
            Ok(RateFn::from_parts(
                RateFnKind::Tabulated(tab),
                convex,
                witness,
                ExtReal::finite(t_sup),
            ))
        }
    }
}

// ---------------------------------------------------------------------------
// JSON parsing.
//
// Specs arrive as objects tagged by a "dist" key, e.g.
//   {"dist":"gaussian","mu":0,"sigma":1}
//   {"dist":"discrete","atoms":[[0,0.5],[1,0.5]]}
//   {"dist":"power","r":2,"a":1}
//   {"dist":"tabulated","nodes":[[0.1,0.0],[1.0,0.5]]}
// Unknown keys are rejected.
// ---------------------------------------------------------------------------

use serde_json::Value;

fn obj_keys_exactly(obj: &serde_json::Map<String, Value>, allowed: &[&str]) -> Result<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Spec(format!("unknown key \"{key}\"")));
        }
    }
    Ok(())
}

fn get_num(obj: &serde_json::Map<String, Value>, key: &str) -> Result<f64> {
    let v = obj
        .get(key)
        .ok_or_else(|| Error::Spec(format!("missing key \"{key}\"")))?;
    v.as_f64()
        .ok_or_else(|| Error::Spec(format!("key \"{key}\" must be a number")))
}

fn get_pairs(
    obj: &serde_json::Map<String, Value>,
    key: &str,
    inf_ok: bool,
) -> Result<Vec<(f64, f64)>> {
    let arr = obj
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Spec(format!("key \"{key}\" must be an array of pairs")))?;
    let mut out = Vec::with_capacity(arr.len());
    for item in arr {
        let pair = item
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| Error::Spec(format!("entries of \"{key}\" must be [a, b] pairs")))?;
        let a = pair[0]
            .as_f64()
            .ok_or_else(|| Error::Spec(format!("entries of \"{key}\" must be numeric")))?;
        let b = match &pair[1] {
            Value::String(s) if inf_ok && s == "inf" => f64::INFINITY,
            other => other
                .as_f64()
                .ok_or_else(|| Error::Spec(format!("entries of \"{key}\" must be numeric")))?,
        };
        out.push((a, b));
    }
    Ok(out)
}

/// Parses a rate-function spec (distribution, power, or tabulated) from JSON.
pub fn spec_from_json(v: &Value) -> Result<RateFnSpec> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Spec("spec must be a JSON object".into()))?;
    let tag = obj
        .get("dist")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Spec("spec must carry a string \"dist\" tag".into()))?;
    let spec = match tag {
        "gaussian" => {
            obj_keys_exactly(obj, &["dist", "mu", "sigma"])?;
            RateFnSpec::Dist(DistributionSpec::Gaussian {
                mu: get_num(obj, "mu")?,
                sigma: get_num(obj, "sigma")?,
            })
        }
        "bernoulli" => {
            obj_keys_exactly(obj, &["dist", "p"])?;
            RateFnSpec::Dist(DistributionSpec::Bernoulli {
                p: get_num(obj, "p")?,
            })
        }
        "poisson" => {
            obj_keys_exactly(obj, &["dist", "lambda"])?;
            RateFnSpec::Dist(DistributionSpec::Poisson {
                lambda: get_num(obj, "lambda")?,
            })
        }
        "exponential" => {
            obj_keys_exactly(obj, &["dist", "rate"])?;
            RateFnSpec::Dist(DistributionSpec::Exponential {
                rate: get_num(obj, "rate")?,
            })
        }
        "pointmass" => {
            obj_keys_exactly(obj, &["dist", "c"])?;
            RateFnSpec::Dist(DistributionSpec::PointMass {
                c: get_num(obj, "c")?,
            })
        }
        "discrete" => {
            obj_keys_exactly(obj, &["dist", "atoms"])?;
            RateFnSpec::Dist(DistributionSpec::discrete(get_pairs(obj, "atoms", false)?)?)
        }
        "power" => {
            obj_keys_exactly(obj, &["dist", "r", "a"])?;
            RateFnSpec::Power {
                r: get_num(obj, "r")?,
                a: get_num(obj, "a")?,
            }
        }
        "tabulated" => {
            obj_keys_exactly(obj, &["dist", "nodes"])?;
            RateFnSpec::Tabulated(get_pairs(obj, "nodes", true)?)
        }
        other => return Err(Error::Spec(format!("unknown dist \"{other}\""))),
    };
    if let RateFnSpec::Dist(d) = &spec {
        d.validate()?;
    }
    Ok(spec)
}

/// Parses a spec that must be a plain distribution (for sampling and bounds).
pub fn dist_from_json(v: &Value) -> Result<DistributionSpec> {
    match spec_from_json(v)? {
        RateFnSpec::Dist(d) => Ok(d),
        other => Err(Error::Spec(format!(
            "expected a distribution, got a {} spec",
            match other {
                RateFnSpec::Power { .. } => "power",
                RateFnSpec::Tabulated(_) => "tabulated",
                RateFnSpec::Dist(_) => unreachable!(),
            }
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(mu: f64, sigma: f64) -> DistributionSpec {
        DistributionSpec::Gaussian { mu, sigma }
    }

    #[test]
    fn gaussian_cgf_closed_form() {
        let v = eval_cgf(&gaussian(0.0, 1.0), 2.0).unwrap();
        assert!((v.to_f64() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_cgf_diverges_at_rate() {
        let d = DistributionSpec::Exponential { rate: 1.0 };
        assert!(eval_cgf(&d, 1.0).unwrap().is_pos_inf());
        assert!(eval_cgf(&d, 1.5).unwrap().is_pos_inf());
        assert!(eval_cgf(&d, 0.5).unwrap().is_finite());
    }

    #[test]
    fn bernoulli_cgf_at_ln3() {
        let d = DistributionSpec::Bernoulli { p: 0.5 };
        let v = eval_cgf(&d, 3.0f64.ln()).unwrap();
        assert!((v.to_f64() - 2.0f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn cgf_rejects_nonpositive_t() {
        let d = gaussian(0.0, 1.0);
        assert!(matches!(eval_cgf(&d, 0.0), Err(Error::InvalidParam(_))));
        assert!(matches!(eval_cgf(&d, -1.0), Err(Error::InvalidParam(_))));
    }

    #[test]
    fn discrete_cgf_survives_large_t() {
        let d = DistributionSpec::discrete(vec![(-1.0, 0.25), (0.0, 0.25), (2.0, 0.5)]).unwrap();
        let v = eval_cgf(&d, 1000.0).unwrap().to_f64();
        // Dominated by the largest atom: t * 2 + ln 0.5.
        assert!((v - (2000.0 + 0.5f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn power_ratefn_evaluates() {
        let rf = RateFn::power(2.0, 3.0).unwrap();
        assert!((rf.eval(1.0).unwrap().to_f64() - 9.0).abs() < 1e-12);
        assert_eq!(rf.finite_witness(), 1.0);
        assert!(rf.t_sup_finite().is_pos_inf());
    }

    #[test]
    fn exponential_ratefn_domain_boundary() {
        let rf = RateFn::from_dist(DistributionSpec::Exponential { rate: 2.0 }).unwrap();
        assert_eq!(rf.t_sup_finite(), ExtReal::finite(2.0));
        assert!(rf.eval(rf.finite_witness()).unwrap().is_finite());
    }

    #[test]
    fn all_infinite_tabulated_is_never_finite() {
        let err = make_ratefn(RateFnSpec::Tabulated(vec![
            (0.5, f64::INFINITY),
            (1.0, f64::INFINITY),
        ]))
        .unwrap_err();
        assert_eq!(err, Error::NeverFinite);
    }

    #[test]
    fn tabulated_interpolates_and_extends_by_inf() {
        let rf = make_ratefn(RateFnSpec::Tabulated(vec![(0.1, 0.0), (1.0, 0.5)])).unwrap();
        assert!(rf.convex());
        assert!((rf.eval(0.55).unwrap().to_f64() - 0.25).abs() < 1e-12);
        assert!(rf.eval(0.05).unwrap().is_pos_inf());
        assert!(rf.eval(2.0).unwrap().is_pos_inf());
    }

    #[test]
    fn nonconvex_tabulated_detected() {
        let rf = make_ratefn(RateFnSpec::Tabulated(vec![
            (0.5, 0.0),
            (1.0, 1.0),
            (2.0, 1.1),
        ]))
        .unwrap();
        assert!(!rf.convex());
    }

    #[test]
    fn support_summaries_are_exact() {
        assert_eq!(
            support_summary(&DistributionSpec::Bernoulli { p: 0.3 }),
            (ExtReal::finite(1.0), 0.3)
        );
        assert_eq!(
            support_summary(&gaussian(0.0, 1.0)),
            (ExtReal::POS_INF, 0.0)
        );
        assert_eq!(
            support_summary(&DistributionSpec::PointMass { c: 5.0 }),
            (ExtReal::finite(5.0), 1.0)
        );
        let d = DistributionSpec::discrete(vec![(2.0, 0.25), (-1.0, 0.75)]).unwrap();
        assert_eq!(support_summary(&d), (ExtReal::finite(2.0), 0.25));
    }

    #[test]
    fn json_round_trips_catalog() {
        let v: Value = serde_json::from_str(r#"{"dist":"gaussian","mu":0,"sigma":1}"#).unwrap();
        assert_eq!(
            spec_from_json(&v).unwrap(),
            RateFnSpec::Dist(gaussian(0.0, 1.0))
        );
        let v: Value =
            serde_json::from_str(r#"{"dist":"discrete","atoms":[[1,0.5],[0,0.5]]}"#).unwrap();
        let RateFnSpec::Dist(DistributionSpec::Discrete { atoms }) = spec_from_json(&v).unwrap()
        else {
            panic!("expected discrete");
        };
        assert_eq!(atoms, vec![(0.0, 0.5), (1.0, 0.5)]);
    }

    #[test]
    fn json_rejects_unknown_keys() {
        let v: Value =
            serde_json::from_str(r#"{"dist":"gaussian","mu":0,"sigma":1,"skew":2}"#).unwrap();
        assert!(matches!(spec_from_json(&v), Err(Error::Spec(_))));
        let v: Value = serde_json::from_str(r#"{"dist":"cauchy","x0":0}"#).unwrap();
        assert!(matches!(spec_from_json(&v), Err(Error::Spec(_))));
    }

    #[test]
    fn json_rejects_bad_params() {
        let v: Value = serde_json::from_str(r#"{"dist":"bernoulli","p":1.0}"#).unwrap();
        assert!(matches!(spec_from_json(&v), Err(Error::InvalidParam(_))));
    }

    #[test]
    fn json_power_and_tabulated() {
        let v: Value = serde_json::from_str(r#"{"dist":"power","r":2,"a":1}"#).unwrap();
        assert_eq!(
            spec_from_json(&v).unwrap(),
            RateFnSpec::Power { r: 2.0, a: 1.0 }
        );
        let v: Value =
            serde_json::from_str(r#"{"dist":"tabulated","nodes":[[0.1,0.0],[1.0,"inf"]]}"#)
                .unwrap();
        let RateFnSpec::Tabulated(nodes) = spec_from_json(&v).unwrap() else {
            panic!("expected tabulated");
        };
        assert_eq!(nodes[0], (0.1, 0.0));
        assert!(nodes[1].1.is_infinite());
        assert!(matches!(
            dist_from_json(&serde_json::from_str(r#"{"dist":"power","r":2,"a":1}"#).unwrap()),
            Err(Error::Spec(_))
        ));
    }
}
