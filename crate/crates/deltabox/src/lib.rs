//! Two particles on the unit interval with hard walls, coupled by a contact
//! interaction that acts at a fixed separation `c` instead of at contact.
//!
//! Energies are reported in units of `hbar^2 / (2 m L^2)` and lengths in
//! units of the box size `L`, so the model is controlled by two numbers: the
//! coupling `g` and the displacement `c` of the interaction.

pub mod bethe;
pub mod dark;
pub mod eigen;
pub mod error;
pub mod matrix;
pub mod model;
pub mod quad;
pub mod strong;
pub mod validate;
pub mod wavefunction;

pub use dark::{DarkState, RationalC};
pub use eigen::EigenSolution;
pub use error::{Error, Result};
pub use matrix::HamiltonianMatrix;
pub use model::{Basis, BasisPair, Exchange, ModelParams, Parity, Sector};
pub use strong::{OutsideLevel, TriangleState};
pub use wavefunction::WavefunctionGrid;

/// Every code block in the guide compiles and runs as a doc-test, so the
/// book cannot drift from the crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/basis-and-sectors.md")]
    mod basis_and_sectors {}
    #[doc = include_str!("../../../book/src/coupling-matrix.md")]
    mod coupling_matrix {}
    #[doc = include_str!("../../../book/src/exact-reference.md")]
    mod exact_reference {}
    #[doc = include_str!("../../../book/src/blind-states.md")]
    mod blind_states {}
    #[doc = include_str!("../../../book/src/strong-coupling.md")]
    mod strong_coupling {}
    #[doc = include_str!("../../../book/src/wavefunctions.md")]
    mod wavefunctions {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
    #[doc = include_str!("../../../book/src/numerical-policy.md")]
    mod numerical_policy {}
}
