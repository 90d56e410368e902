//! Toffoli-count synthesis of multi-qubit unitaries over Clifford+Toffoli.
//!
//! Unitaries are handled through their channel (Pauli-transfer)
//! representation. Exact synthesis works over dyadic rationals, approximate
//! synthesis over floating point Pauli coefficients.

pub mod approx;
pub mod bounds;
pub mod channel;
pub mod clifford;
pub mod dense;
pub mod dyadic;
pub mod error;
pub mod exact;
pub mod genset;
pub mod pauli;

pub use channel::{ChannelMatrix, CompactRows, CosetLabel};
pub use clifford::{Circuit, Gate, Tableau};
pub use dyadic::Dyadic;
pub use exact::{Decomposition, Generators, Rule};
pub use genset::{GenMode, GenSet, GenTriple};
pub use error::{Error, Result};
pub use pauli::{Pauli, PauliIndex, Phase, SignedPauli};
