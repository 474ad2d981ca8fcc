//! Convex conjugates on the positive half-line and what they buy you in
//! probability.
//!
//! For a rate function `L: (0, inf) -> (-inf, inf]` that is finite
//! somewhere, the library computes the Legendre–Fenchel transform
//! `L*(x) = sup_{t>0} [t x - L(t)]`, its smallest and largest generalized
//! inverses, and Hölder convolutions `(L_1 # L_2)(t) = inf_a [a L_1(t/a) +
//! (1-a) L_2(t/(1-a))]`. The payoff is the quantile bound
//!
//! ```text
//! P(X_1 + ... + X_n > li_1(u) + ... + li_n(u)) <= exp(-u)
//! ```
//!
//! valid for all real `u` and arbitrarily dependent summands, because the
//! smallest inverse of a Hölder convolution is the sum of the parts'
//! smallest inverses. A catalog of closed-form Cramér–Chernoff functions
//! (`ln E[exp(tX)]`) feeds the machinery, and a seeded Monte Carlo harness
//! checks the bounds empirically.
//!
//! Numbers live in the extended reals: conjugates may be `+inf`, inverses
//! may be `-inf`, and both conventions `exp(-inf) = 0` and `inf {} = +inf`
//! are honored exactly.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod convolve;
mod error;
pub mod extreal;
pub mod ratefn;
mod solver;
pub mod transform;
pub mod verify;

pub use bounds::{chernoff_tail, strictness_check, sum_quantile_bound, BoundReport, Strictness};
pub use convolve::{
    as_ratefn, holder_convolve, holder_convolve_flagged, sum_ratefn, ConvolvedRateFn,
};
pub use error::{Error, Result};
pub use extreal::{ext_add, ext_inf, ext_mul, ext_sup, ExtReal};
pub use ratefn::{
    dist_from_json, eval_cgf, make_ratefn, spec_from_json, support_summary, DistributionSpec,
    RateFn, RateFnKind, RateFnSpec, TabulatedFn,
};
pub use transform::{
    conjugate, conjugate_flagged, inverse_oracle, lower_inverse, lower_inverse_flagged, profile,
    upper_inverse, upper_inverse_flagged, ConjugateProfile, DomCase, Flag, Flagged, SolverConfig,
};
pub use verify::{sample, verify_bound, Verdict, VerifyReport};
