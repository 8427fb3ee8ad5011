//! Exact-arithmetic toolkit for d-dimensional ADHM data and the framed
//! instanton bundles they encode.
//!
//! Everything is computed over an exact scalar domain (arbitrary-precision
//! rationals, or a prime field for fast modular screens): regularity is a
//! rank condition and approximate ranks are meaningless.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`] — exact scalars (`ℚ` or `F_p`),
//! * [`linalg`] — dense matrices with exact rank / kernel / solve,
//! * [`poly`] — homogeneous polynomials, binary-form gcd and root extraction,
//! * [`pencil`] — matrices of linear forms and their quadratic products,
//! * [`datum`] — ADHM data: evaluation, the ADHM equation, stability,
//!   costability, global regularity, gauge action, tangent dimensions,
//! * [`monad`] — the associated linear monad on `ℂP^{d+2}`: fiberwise checks,
//!   sheaf cohomology of twists, splitting types on lines,
//! * [`twistor`] — the `d = 1` moduli seen as twistor sections: tangent
//!   spaces, web subspaces `S_t` and their projection algebra,
//! * [`io`] — JSON schemas for data files and reports.

pub mod datum;
pub mod error;
pub mod field;
pub mod io;
pub mod linalg;
pub mod monad;
pub mod pencil;
pub mod poly;
pub mod twistor;

pub use datum::{ADHMDatum, Datum0, GaugeElement, ProjPoint, RegularityVerdict};
pub use error::Error;
pub use field::{FieldConfig, Scalar};
pub use linalg::Matrix;
pub use pencil::PencilMatrix;
pub use poly::HomogPoly;
