//! Exact verification of multiple commutation relations for monodromy matrix
//! elements of U_q(ĝl_N) and the Yangian Y(gl_N) in tensor products of vector
//! representations.
//!
//! Every routine is generic over an exact [`Scalar`]; the aliases below fix
//! the three scalar types used in practice.

pub mod bethe;
pub mod commutation;
pub mod compute;
pub mod degeneration;
pub mod error;
pub mod grid;
pub mod gt;
pub mod laurent;
pub mod linalg;
pub mod monodromy;
pub mod report;
pub mod rmatrix;
pub mod sample;
pub mod scalar;
pub mod series;
pub mod special;
pub mod suites;
pub mod tensor;

pub use error::{Error, Result};
pub use laurent::Laurent;
pub use rmatrix::{Coupling, RFlavor};
pub use scalar::{Scalar, Q};
pub use series::TruncatedSeries;

/// States with exact rational coefficients.
pub type QState = tensor::SparseState<Q>;
/// Monodromy context over exact rationals.
pub type QContext = monodromy::MonodromyContext<Q>;
/// States whose coefficients are Laurent series in ε.
pub type LaurentState = tensor::SparseState<Laurent>;
