//! Exact incidence algebra of the Fibonacci cobweb poset.
//!
//! The poset's levels are antichains sized by the Fibonacci numbers, with
//! every vertex of a level below every vertex of each higher level. This
//! crate builds finite truncations of the poset and realizes its incidence
//! algebra over exact arithmetic: the zeta function in both its delta-sum and
//! coordinate forms, the Möbius function in three forms (recurrence, level
//! formula, coordinate formula), convolution, inversion, chain counting and
//! the Möbius inversion formula. Everything is computed with unbounded
//! integers (rationals where inversion demands them), so all identities hold
//! exactly rather than approximately.

pub mod error;
pub mod fib;
pub mod incidence;
pub mod inversion;
pub mod mobius;
pub mod poset;
pub mod scalar;
pub mod verify;

pub use error::CobwebError;
pub use fib::Label;
pub use incidence::IncidenceFunction;
pub use inversion::PosetFunction;
pub use mobius::MobiusStrategy;
pub use poset::{le, TruncatedPoset, Vertex, DEFAULT_MAX_ELEMENTS};
pub use scalar::Scalar;
