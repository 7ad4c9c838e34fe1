//! Braids of three points on a sphere and the two homotopy classes of closed
//! paths in SO(3).
//!
//! The algebra lives in [`braid`], [`artin`], [`quotient`] and
//! [`certificate`]; the geometry in [`rotation`], [`spherical`] and
//! [`extract`]; [`classify`] ties them together.

pub mod artin;
pub mod braid;
pub mod certificate;
pub mod classify;
pub mod diagram;
pub mod error;
pub mod extract;
pub mod quotient;
pub mod rotation;
pub mod spherical;
pub mod verify;

pub use braid::{BraidWord, Letter, Permutation};
pub use classify::{classify, ClassificationReport};
pub use error::{Error, Result};
pub use quotient::{HomotopyClass, SphereBraidClass};
pub use rotation::RotationPath;
