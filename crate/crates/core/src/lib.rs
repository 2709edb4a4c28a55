//! Measurement models in which a system qudit imprints its basis label on a
//! mixed apparatus through a controlled unitary, together with the tools to
//! check when the information read off the apparatus reaches the Holevo
//! quantity.
//!
//! * [`linalg`]: dense complex matrices, Kronecker products, partial traces,
//!   Hermitian eigendecomposition.
//! * [`states`]: pure system states, density matrices, ensembles, POVMs.
//! * [`interactions`]: controlled-block unitaries, the Von Neumann condition,
//!   shift gates and random Von Neumann families.
//! * [`evolution`]: the joint evolution and the reduced apparatus ensemble.
//! * [`information`]: entropies, χ, mutual information, bound certificates
//!   and the accessible-information search.
//! * [`random`]: seeded generators.
//! * [`sweeps`]: seeded property sweeps over random instances.

pub mod error;
pub mod evolution;
pub mod information;
pub mod interactions;
pub mod linalg;
pub mod random;
pub mod states;
pub mod sweeps;

pub use error::{Error, Result};
pub use evolution::{evolve, MeasurementOutcomeModel};
pub use information::{
    accessible_information_search, certify_bound, common_eigenbasis_povm, holevo_chi,
    mutual_information, shannon_entropy, von_neumann_entropy, BoundCertificate, SearchOutcome,
};
pub use interactions::{
    check_conditions, phase_shift_family, random_von_neumann_family, shift_gate, ConditionReport,
    FamilyMethod, InteractionUnitary, VonNeumannFamily,
};
pub use linalg::{
    commutator_norm, hermitian_eigendecomposition, is_unitary, partial_trace_system,
    tensor_product, ComplexMatrix, EigenDecomposition, C64,
};
pub use states::{validate_povm, DensityMatrix, Ensemble, Povm, PovmReport, PureState};
