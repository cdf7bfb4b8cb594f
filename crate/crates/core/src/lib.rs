//! Exact computations for selfadjoint-ideal (SI) semigroups generated by
//! weighted shifts with eventually periodic weights: single-diagonal operator
//! algebra, SI and simplicity decisions with replayable certificates, a
//! bounded word solver, function semigroups on finite sets, and a small
//! matrix lab for idempotents.
//!
//! Everything is exact. Weights are [`MultScalar`]s, complex numbers stored
//! as a rational squared modulus and a rational phase in turns.

#![no_std]

extern crate alloc;

pub mod diagop;
pub mod epseq;
pub mod funcsg;
pub mod matrixlab;
pub mod scalar;
pub mod shiftcheck;
pub mod wordsolver;

pub use diagop::{adjoint, diag_mul, op_equal, word_eval, DiagOp, Letter, Word};
pub use epseq::EpSeq;
pub use shiftcheck::{si_decide, Bounds, Decision, ShiftSpec, Verdict};
pub use scalar::{ComplexQ, MultScalar, Rational};
