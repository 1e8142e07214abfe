//! Torus-side dynamics.
//!
//! The spectral analysis on the surface side has a linear shadow on the
//! two-torus: each digit `a` acts by the integer matrix `A_a = [[a,1],[1,0]]`,
//! and the map `F(x,y) = (cos 2π(x+y), cos 2πx, cos 2πy)` intertwines that
//! action with the trace maps. This module builds the linear theory
//! ([`linear`]), the invariant cone systems with their expansion constants
//! ([`cone`]), smooth perturbed lifts of the trace maps through `F`
//! ([`perturbed`]), the graph-transform construction of local stable
//! manifolds ([`graph`]), and the uniform-hyperbolicity certificate
//! ([`property_c`]).

pub mod cone;
pub mod graph;
pub mod linear;
pub mod perturbed;
pub mod property_c;

pub use cone::{cone_check, overflow_check, ConeCheckReport, ConeSpec, BETA0};
pub use graph::{graph_transform_manifold, LipGraph, GRAPH_SAMPLES, LIP_BOUND};
pub use linear::{
    projective_contract_limit, semiconjugacy_f, stable_slope, stable_slope_exact, torus_apply,
    DigitMatrix, DirectionMap,
};
pub use perturbed::{
    common_orbit_check, distortion_ratio, CommonOrbitReport, PerturbOptions, PerturbedMapFamily,
    LAMBDA_GUARD,
};
pub use property_c::{property_c_verify, PropertyCReport};
