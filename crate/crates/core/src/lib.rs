//! Construction and verification of solutions to Yang-Baxter type equations
//! on qudit spaces, with symbolic ansatz enumeration and entanglement checks.

pub mod acceptance;
pub mod analysis;
pub mod ansatz;
pub mod error;
pub mod families;
pub mod sampling;
pub mod symmetry;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use tensor::CMat;
pub use verify::{GybeSignature, VerifyReport};
