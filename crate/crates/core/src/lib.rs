//! Exact oriented (co)homology of products of projective spaces: formal group
//! laws, Gysin pushforwards, fundamental classes and Poincaré duality, with a
//! suite of executable identity checks.

pub mod algebra;
pub mod error;
pub mod fgl;
pub mod gysin;
pub mod homodual;
pub mod literal;
pub mod spaces;
pub mod verify;

pub use algebra::{CoeffRing, RingElem, RingKind, RingMatrix, Scalars};
pub use error::{Error, Result};
pub use fgl::{Fgl, MultiSeries, Series, TruncatedAlgebra};
pub use gysin::{GysinKernel, Mutation, Theory};
pub use homodual::{
    cap, cross_hom, duality_to_coh, duality_to_hom, fundamental_class, pair, pbt_section, psi, pushforward_hom,
    shriek_hom, slant_l, slant_r, upper_diamond, HomClass,
};
pub use spaces::{cross_coh, euler, fgl_eval, CohClass, Morphism, Shape, Space};
pub use verify::{
    all_passed, check_ids, render_table, reports_to_json, run_suite, CheckConfig, CheckReport, Status, Witness,
};
