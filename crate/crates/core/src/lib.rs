//! Pure-dephasing decoherence of a PT-symmetric qubit coupled to a
//! PT-symmetric bosonic bath.
//!
//! The dynamics are evaluated in the Hermitian-counterpart picture: the
//! qubit and bath are mapped by similarity transforms onto Hermitian
//! Hamiltonians, and the decoherence factor Λ(t) follows from the thermal
//! average of the bath displacement operators.
//!
//! - [`model`]: parameter algebra, eigenvalues and the qubit similarity map
//! - [`fock`]: truncated Fock-space checks of the bath and composite maps
//! - [`quadrature`]: adaptive integration over `[0, ∞)`
//! - [`decoherence`]: μ(t), discrete and continuum Λ(t), dephasing channels
//! - [`experiments`]: figure scenarios and sweeps
//! - [`cli`]: the `ptdephase` command line

pub mod cli;
pub mod decoherence;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod model;
pub mod quadrature;
pub mod special;

pub use decoherence::{
    dephasing_channel, discretize_spectral_density, evolve_qubit, gamma_of, kraus_operators,
    lambda_continuum, lambda_discrete, lambda_hermitian, lambda_integrand, lambda_series, mu,
    DecoherenceSeries, Mode, QubitState,
};
pub use error::{Error, Result};
pub use model::{EnvConfig, EnvParams, Matrix2, SystemConfig, Temperature, ZetaForm};
pub use quadrature::{QuadratureConfig, QuadratureResult};
