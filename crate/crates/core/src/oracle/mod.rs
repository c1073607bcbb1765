//! Dense linear-algebra oracle: explicit invariant states, reduced density
//! matrices and entropies, used to check the closed forms.

pub mod angular;
pub mod cg;
pub mod checks;
pub mod coupling;
pub mod singlets;
pub mod state;
pub mod su_m;

pub use checks::{
    local_orthogonality_report, random_decomposition_check, verify_closed_form, ClosedFormReport,
    DecompositionReport, OverlapReport, ORACLE_TOL,
};
pub use coupling::CouplingBasis;
pub use singlets::{build_singlet_states, SingletBasis};
pub use state::{DensityMatrix, PureStateVector};
pub use su_m::{su_m_invariance_residual, su_m_invariant_basis, InvariantBasis};
