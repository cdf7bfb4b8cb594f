#![allow(dead_code)]

use proptest::prelude::*;
use shiftlab_core::scalar::MultScalar;
use shiftlab_core::{EpSeq, Letter, Word};

pub const MAG2: &[(i64, i64)] = &[(1, 4), (1, 2), (1, 1), (2, 1), (4, 1), (1, 3), (3, 1), (9, 4)];
pub const PHASE: &[(i64, i64)] = &[(0, 1), (1, 2), (1, 3), (1, 4), (3, 4), (1, 6)];

pub fn nonzero_scalar() -> impl Strategy<Value = MultScalar> + Clone {
    (0..MAG2.len(), 0..PHASE.len()).prop_map(|(m, p)| MultScalar::q(MAG2[m].0, MAG2[m].1, PHASE[p].0, PHASE[p].1))
}

/// Nonzero with probability about 5/6.
pub fn scalar() -> impl Strategy<Value = MultScalar> + Clone {
    prop_oneof![5 => nonzero_scalar(), 1 => Just(MultScalar::zero())]
}

pub fn epseq_from(s: impl Strategy<Value = MultScalar> + Clone) -> impl Strategy<Value = EpSeq> {
    (prop::collection::vec(s.clone(), 0..4), prop::collection::vec(s, 1..4))
        .prop_map(|(p, c)| EpSeq::new(p, c).unwrap())
}

pub fn weights() -> impl Strategy<Value = EpSeq> {
    epseq_from(scalar()).prop_filter("not identically zero", |e| !e.is_all_zero())
}

pub fn nonzero_weights() -> impl Strategy<Value = EpSeq> {
    epseq_from(nonzero_scalar())
}

pub fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::bool::ANY, 1..=max)
        .prop_map(|bits| Word::new(bits.into_iter().map(|b| if b { Letter::Gen } else { Letter::Adj }).collect()).unwrap())
}

pub fn m(n: i64, d: i64) -> MultScalar {
    MultScalar::q(n, d, 0, 1)
}
