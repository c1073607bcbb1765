//! Exact entanglement of SU(2)-invariant (zero total spin) mixtures.
//!
//! The crate counts irreducible multiplicities in tensor powers of a spin,
//! evaluates entanglement of formation and distillation of mixtures on the
//! invariant subspace under any bipartition, fits the large-system entropy
//! laws, and checks all of it against a dense linear-algebra oracle and a
//! Monte Carlo distillation simulator.
//!
//! Closed-form layers are generic over the scalar: probabilities over any
//! [`Weight`] (floats or exact rationals), entropies over any [`Real`].

pub mod asymptotics;
pub mod config;
pub mod distill;
pub mod error;
pub mod measures;
pub mod multiplicity;
pub mod oracle;
pub mod scalar;
pub mod special;
pub mod spin;
pub mod unitary;

pub use asymptotics::{LinearFit, ScanResult};
pub use config::{Config, LogBase, OutputFormat, RngAlgorithm};
pub use distill::{simulate, DistillationRun};
pub use error::{Error, Result};
pub use measures::{
    entanglement, mutual_information, reduced_entropy, singlet_probabilities, unentangled_fraction,
    EntanglementReport, MixtureWeights, SectorDistribution, SectorIndex, Side, SplitSpec,
    SplitTables,
};
pub use multiplicity::{
    invariant_dimension, log_multiplicity, qubit_multiplicity, MultiplicityTable,
};
pub use scalar::{Real, Weight};
pub use spin::{ConstituentKind, SystemSpec, TwiceSpin};
pub use unitary::su_m_invariant_dimension;

pub type Report = EntanglementReport<f64>;
pub type ReportF32 = EntanglementReport<f32>;
pub type Weights = MixtureWeights<f64>;
pub type ExactWeights = MixtureWeights<num_rational::BigRational>;
pub type Distribution = SectorDistribution<f64>;
pub type ExactDistribution = SectorDistribution<num_rational::BigRational>;
