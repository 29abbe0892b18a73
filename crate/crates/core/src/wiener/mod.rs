//! Truncated weighted Gaussian measures on `(t', x'_1, …, x'_n)` and the
//! numerical checks built on them: the divergence theorem for Goodman's
//! normal surface measure, the Green identity for the transformed
//! first-order operator and its adjoint, and the Holmgren moment pipeline.
//!
//! Coordinate `i` of `p_t` is a centred normal with variance `t A_i²`.
//! Vector fields are written with their `B`-coordinate components; the
//! `H`-inner product is `Σ u_i v_i / A_i²`, so `div F = Σ ∂_i F_i` and the
//! pairing in the divergence theorem is `Σ F_i (y_i − x_i) / (A_i² t)`.

mod bounds;
mod divergence;
mod field;
mod green;
mod hermite;
mod quadrature;
mod region;
mod sampler;
mod surface;
mod weights;

pub use bounds::{check_f_bounds, trace_norm, FBoundsReport};
pub use divergence::{
    divergence_residual, face_integral, volume_integral, DivergenceReport, Domain, Estimate, Face, FaceBase, Gauss,
    Method,
};
pub use field::{h_inner, FieldSummary, PolyField, VectorField, VectorFieldF};
pub use green::{
    change_of_variables, green_residual, holmgren_moment_demo, reflect_time, GreenReport, GreenSetup,
    HolmgrenOptions, HolmgrenReport, MomentRow,
};
pub use hermite::{hermite_normalized, hermite_projection, HermiteReport, HERMITE_BATCHES};
pub use region::{Region, RegionKind};
pub use sampler::{
    FerniqueReport, GaussianSampler, McEstimate, ScalingReport, TestSet, CHUNK, FERNIQUE_INFLATION, RNG_NAME,
};
pub use surface::{gaussian_density, surface_density, SurfaceChart};
pub use weights::{build_weights, rho_grid, GeometricPattern, WeightScheme, RHO_GRID_LEN};
