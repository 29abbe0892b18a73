//! Sparse formal power series in countably many real variables.
//!
//! A series is a finite map from [`MultiIndex`] to coefficients over a
//! [`VariableSpace`]. All algebra truncates by total degree and records the
//! degree up to which the result is exact.

mod certificate;
mod json;
mod monomial;
mod multi_index;
mod point;
mod space;

pub use certificate::{certify_convergence, ConvergenceCertificate};
pub use json::{series_from_json, series_to_json, SeriesJson, TermJson};
pub use monomial::{geometric_eval, geometric_series, MonomialSeries, Substitution};
pub(crate) use monomial::monomial_value;
pub use multi_index::{count_multiindices, enumerate_multiindices, MultiIndex};
pub use point::{nth_prime, primes_up_to, PointOracle, TailRule, WitnessCheck, DEFAULT_CHECK_INDEX};
pub use space::VariableSpace;
