pub mod backend;
pub mod degree;
pub mod envelope;
pub mod error;
pub mod linalg;
pub mod moebius;
pub mod radical;
pub mod relations;
pub mod scalar;
pub mod specialization;

pub use backend::{BackendTag, FinSetOp, FinVectFq, Limits, Obj, RegularCategory};
pub use degree::DegreeFunction;
pub use envelope::{Envelope, LinearHom};
pub use error::{Error, Result};
pub use relations::Relation;
pub use scalar::{MultiPoly, RatFunc, Rational, Scalar};
