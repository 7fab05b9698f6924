//! Random walks on the circle and their Wasserstein distance to the uniform law.
//!
//! The walk `S_j = X_1 + ... + X_j` with integer steps is wrapped onto the
//! circle through an irrational rotation, `x_j = {S_j α}`. This crate
//! computes the empirical measure `μ_n = (1/n) Σ δ_{x_j}` exactly in fixed
//! point, measures its `W_p` distance to Lebesgue measure in closed form,
//! and provides the series, bounds and certificates that govern how fast
//! that distance decays.
//!
//! | module | contents |
//! |---|---|
//! | [`diophantine`] | continued fractions, convergents, type-γ irrationals |
//! | [`stepdist`] | step laws, characteristic functions, Hölder checks |
//! | [`walk`] | simulation, empirical measures, Fourier coefficients, discrepancy |
//! | [`wasserstein`] | exact `W_p`, Fourier `W_2`, heat kernel, lower-bound certificates |
//! | [`bounds`] | second moments, limit constants, block sums, `g_η`, moment checks |
//! | [`harness`] | replicated experiments, rate fits, CSV output |

pub mod bounds;
pub mod diophantine;
pub mod error;
pub mod fixed;
pub mod harness;
pub mod rng;
pub mod series;
pub mod special;
pub mod stepdist;
pub mod walk;
pub mod wasserstein;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/quickstart.md")]
    mod quickstart {}
    #[doc = include_str!("../../../book/src/continued-fractions.md")]
    mod continued_fractions {}
    #[doc = include_str!("../../../book/src/step-laws.md")]
    mod step_laws {}
    #[doc = include_str!("../../../book/src/walks.md")]
    mod walks {}
    #[doc = include_str!("../../../book/src/wasserstein.md")]
    mod wasserstein {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
