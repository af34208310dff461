//! Computational tools for tt*-geometry on classifying spaces of Brieskorn
//! lattices: spectra and Hodge filtrations of lattices, polarized mixed Hodge
//! structure tests, twistor purity, the hermitian metric on the tangent
//! space, and the holomorphic sectional curvature bound.

pub mod cli;
pub mod curvature;
pub mod error;
pub mod example3;
pub mod exponent;
pub mod gamma;
pub mod hodge;
pub mod jet;
pub mod laurent;
pub mod linalg;
pub mod schema;
pub mod terp;
pub mod twistor;

pub use error::{Error, Result};
pub use exponent::FracExponent;
pub use jet::Jet2;
pub use laurent::LaurentMatrix;
pub use linalg::CMat;
