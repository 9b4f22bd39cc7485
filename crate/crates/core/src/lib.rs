//! Qubit representations of the braid groups built from a family of
//! generalized Yang-Baxter (gYB) matrices `R`, one for every odd `m >= 3`.
//!
//! The crate has four layers:
//!
//! * [`qlinalg`]: dense complex operators on qubit registers, local gate
//!   embedding and application, and rounding-based canonical keys.
//! * [`gates`]: Pauli words with exact phase tracking, the XOR-controlled
//!   NOT gate, the `R` matrix (entrywise and as a gate product) and the
//!   commutation identities between these gates.
//! * [`braidrep`]: braid words, the representation `sigma_i -> R` on qubits
//!   `(i, i+1, i+2)`, and checks of the gYB equation, far commutativity and
//!   the braid relation.
//! * [`image_group`]: an exact model of the image as `Z_m^{n(n-1)/2} x| S_n`,
//!   the map from braid words into it, its evaluation back to matrices, and
//!   breadth-first enumeration of the image on both sides.

pub mod braidrep;
pub mod error;
pub mod gates;
pub mod image_group;
pub mod qlinalg;
pub mod report;

pub use braidrep::{BraidWord, RepContext, Tolerances};
pub use error::{Error, Result};
pub use gates::{GateParams, PauliWord};
pub use image_group::{ExponentVector, ImageElement, Permutation};
pub use qlinalg::{CanonicalKey, Operator, C64};
pub use report::{CheckReport, EnumerationReport};
