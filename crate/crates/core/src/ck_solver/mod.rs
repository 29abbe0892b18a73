//! Cauchy problems `∂_t^m u = f(t, x, u, ∂_x^β ∂_t^j u)` in countably many
//! spatial variables (truncated to `x_vars`), solved by layerwise
//! coefficient recursion in `t`.

mod json;
mod linear;
mod problem;
mod solve;
mod summability;

pub use json::{load_problem, LinearJson, LoadedProblem, ProblemJson};
pub use linear::{LinearFirstOrderProblem, MAJORANT_SUM_BOUND, RADIUS_C0};
pub use problem::{deriv_name, w_index, CauchyProblem, Centering, DerivIndex, InitialJet, ProblemSpace};
pub use solve::{degree_ratios, SolutionSeries, SolveOptions};
pub use summability::{check_summability, oscillator_problem, SequenceRule, SummabilityReport};
