//! Exact algebra over the Gaussian rationals.

pub mod hermite;
pub mod identities;
pub mod poly;
pub mod rational;

pub use hermite::{
    binomial, factorial, hermite1d_exact, hermite_exact_direct, hermite_exact_recurrence, hermite_exact_via_1d,
    laguerre_exact, natural_hermite_exact, DegreePair,
};
pub use identities::{
    check_natural_link, coefficient_identity, coefficient_sum, laguerre_identity_exact,
    raising_lowering_exact, rodrigues_exact, sweep_coefficients, sweep_constructions, sweep_laguerre,
    sweep_natural_link, sweep_raising_lowering, sweep_rodrigues, SweepOutcome,
};
pub use poly::{BiPoly, ExpWeightedPoly, LinearForm, Monomial, PolyJson, UniPoly, Var, WeightSign};
pub use rational::GaussianRational;
