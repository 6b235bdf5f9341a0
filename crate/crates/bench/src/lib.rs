//! Shared fixtures for the benchmarks.

use tenv_core::backend::{FinSetOp, FinVectFq, Limits};
use tenv_core::degree::DegreeFunction;
use tenv_core::envelope::Envelope;
use tenv_core::scalar::{MultiPoly, Rational};

pub fn sets() -> FinSetOp {
    FinSetOp::default()
}

pub fn f2() -> FinVectFq {
    FinVectFq::new(2, Limits::default()).expect("2 is prime")
}

pub fn symbolic_sets() -> Envelope<FinSetOp, MultiPoly> {
    Envelope::new(sets(), DegreeFunction::setop(MultiPoly::var("t")))
}

pub fn rational_sets(t: Rational) -> Envelope<FinSetOp, Rational> {
    Envelope::new(sets(), DegreeFunction::setop(t))
}
