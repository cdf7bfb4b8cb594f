//! Exact matrices over `Q(i)` for idempotent checks, and floating-point
//! finite sections of diagonal operators.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::diagop::{DiagOp, Letter, ShiftPair, Word};
use crate::scalar::ComplexQ;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixError {
    /// Rows of unequal length or a non-square shape.
    NotSquare,
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("matrix must be square")
    }
}

/// Square matrix with exact complex-rational entries, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixQ {
    dim: usize,
    entries: Vec<ComplexQ>,
}

impl MatrixQ {
    pub fn from_rows(rows: Vec<Vec<ComplexQ>>) -> Result<MatrixQ, MatrixError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(MatrixError::NotSquare);
        }
        Ok(MatrixQ { dim, entries: rows.into_iter().flatten().collect() })
    }

    /// Real integer matrix.
    pub fn from_ints(rows: &[&[i64]]) -> Result<MatrixQ, MatrixError> {
        MatrixQ::from_rows(rows.iter().map(|r| r.iter().map(|&x| ComplexQ::from_ints(x, 0)).collect()).collect())
    }

    pub fn zero(dim: usize) -> MatrixQ {
        MatrixQ { dim, entries: alloc::vec![ComplexQ::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> MatrixQ {
        let mut m = MatrixQ::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ComplexQ::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Zero-indexed entry.
    pub fn get(&self, r: usize, c: usize) -> &ComplexQ {
        &self.entries[r * self.dim + c]
    }

    pub fn rows(&self) -> Vec<Vec<ComplexQ>> {
        self.entries.chunks(self.dim.max(1)).map(<[ComplexQ]>::to_vec).collect()
    }

    pub fn mul(&self, other: &MatrixQ) -> MatrixQ {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = MatrixQ::zero(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = ComplexQ::zero();
                for k in 0..n {
                    acc = &acc + &(self.get(r, k) * other.get(k, c));
                }
                out.entries[r * n + c] = acc;
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> MatrixQ {
        let n = self.dim;
        let mut out = MatrixQ::zero(n);
        for r in 0..n {
            for c in 0..n {
                out.entries[c * n + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ComplexQ::is_zero)
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }

    pub fn is_normal(&self) -> bool {
        let s = self.adjoint();
        s.mul(self) == self.mul(&s)
    }

    /// `a a* a = a`.
    pub fn is_partial_isometry(&self) -> bool {
        self.mul(&self.adjoint()).mul(self) == *self
    }
}

impl fmt::Debug for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdempotentClass {
    NotIdempotent,
    /// A projection: its semigroup is SI.
    NormalIdempotent,
    /// For these SI, simplicity and being a partial isometry coincide.
    NonNormalIdempotent { si: bool, simple: bool, partial_isometry: bool },
}

pub fn classify_idempotent(a: &MatrixQ) -> IdempotentClass {
    if !a.is_idempotent() {
        return IdempotentClass::NotIdempotent;
    }
    if a.is_normal() {
        return IdempotentClass::NormalIdempotent;
    }
    let pi = a.is_partial_isometry();
    IdempotentClass::NonNormalIdempotent { si: pi, simple: pi, partial_isometry: pi }
}

/// Facts about `a* a` for an idempotent `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionReport {
    pub idempotent: bool,
    pub normal: bool,
    /// `(a*a)^2 = a*a`.
    pub ata_idempotent: bool,
    /// `a*a` is `0` or `I`.
    pub ata_trivial: bool,
}

pub fn projection_report(a: &MatrixQ) -> ProjectionReport {
    let ata = a.adjoint().mul(a);
    ProjectionReport {
        idempotent: a.is_idempotent(),
        normal: a.is_normal(),
        ata_idempotent: ata.is_idempotent(),
        ata_trivial: ata.is_zero() || ata == MatrixQ::identity(a.dim()),
    }
}

/// Dense complex matrix for finite sections.
#[derive(Clone, PartialEq)]
pub struct DenseC {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl DenseC {
    pub fn zero(dim: usize) -> DenseC {
        DenseC { dim, data: alloc::vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> DenseC {
        let mut m = DenseC::zero(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// One-indexed entry.
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row - 1) * self.dim + (col - 1)]
    }

    pub fn mul(&self, other: &DenseC) -> DenseC {
        let n = self.dim;
        let mut out = DenseC::zero(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        out
    }
}

impl fmt::Debug for DenseC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.dim.max(1))).finish()
    }
}

/// `P_N D P_N`: entry `(i + k, i)` carries the weight of `e_i -> e_{i+k}`.
pub fn truncate(op: &DiagOp, n: usize) -> DenseC {
    let mut m = DenseC::zero(n);
    for col in 1..=n {
        let row = col as i64 + op.offset();
        if row >= 1 && row as usize <= n {
            m.data[(row as usize - 1) * n + (col - 1)] = op.coefficient(col).to_complex();
        }
    }
    m
}

/// Product of the letter truncations of a word.
pub fn truncate_word(pair: &ShiftPair, w: &Word, n: usize) -> DenseC {
    let t = truncate(&pair.gen, n);
    let ts = truncate(&pair.adj, n);
    w.letters()
        .iter()
        .fold(DenseC::identity(n), |acc, l| acc.mul(if *l == Letter::Gen { &t } else { &ts }))
}

/// Largest entry difference over rows and columns `1..=window`.
pub fn max_window_error(a: &DenseC, b: &DenseC, window: usize) -> f64 {
    let mut worst = 0.0f64;
    for r in 1..=window {
        for c in 1..=window {
            worst = worst.max((a.at(r, c) - b.at(r, c)).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epseq::EpSeq;
    use crate::scalar::MultScalar;
    use alloc::vec;

    fn mq(rows: &[&[i64]]) -> MatrixQ {
        MatrixQ::from_ints(rows).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_idempotent(&mq(&[&[1, 1], &[0, 0]])),
            IdempotentClass::NonNormalIdempotent { si: false, simple: false, partial_isometry: false }
        );
        assert_eq!(classify_idempotent(&mq(&[&[1, 0], &[0, 0]])), IdempotentClass::NormalIdempotent);
        assert_eq!(classify_idempotent(&mq(&[&[0, 1], &[0, 0]])), IdempotentClass::NotIdempotent);
        let a = mq(&[&[1, 1], &[0, 0]]);
        assert_eq!(a.mul(&a.adjoint()).mul(&a), mq(&[&[2, 2], &[0, 0]]));
    }

    #[test]
    fn projection_reports() {
        let r = projection_report(&mq(&[&[1, 1], &[0, 0]]));
        assert!(!r.ata_idempotent && !r.ata_trivial && !r.normal);
        let r = projection_report(&mq(&[&[1, 0], &[0, 0]]));
        assert!(r.ata_idempotent && !r.ata_trivial);
        let r = projection_report(&MatrixQ::identity(3));
        assert!(r.ata_trivial);
        let r = projection_report(&MatrixQ::zero(2));
        assert!(r.ata_trivial);
    }

    #[test]
    fn shape_errors() {
        assert_eq!(MatrixQ::from_ints(&[&[1, 2], &[3]]), Err(MatrixError::NotSquare));
    }

    #[test]
    fn truncation_examples() {
        let pair = ShiftPair::new(&EpSeq::ones()).unwrap();
        let t = truncate(&pair.gen, 3);
        assert_eq!(t.at(2, 1), Complex64::new(1.0, 0.0));
        assert_eq!(t.at(3, 2), Complex64::new(1.0, 0.0));
        assert_eq!(t.at(1, 1), Complex64::new(0.0, 0.0));

        let d = DiagOp::new(0, EpSeq::ones().prepend_zeros(1));
        let m = truncate(&d, 3);
        assert_eq!((m.at(1, 1).re, m.at(2, 2).re, m.at(3, 3).re), (0.0, 1.0, 1.0));

        let p = EpSeq::periodic(vec![MultScalar::q(4, 1, 0, 1), MultScalar::q(1, 2, 0, 1)]).unwrap();
        let pair = ShiftPair::new(&p).unwrap();
        let w: Word = "T* T".parse().unwrap();
        let m = truncate(&pair.eval(&w), 4);
        let diag: Vec<f64> = (1..=4).map(|i| m.at(i, i).re).collect();
        for (got, want) in diag.iter().zip([4.0, 0.5, 4.0, 0.5]) {
            assert!((got - want).abs() < 1e-12);
        }
        // The product of letter sections loses e_4 -> e_5 in the corner.
        let prod = truncate_word(&pair, &w, 4);
        assert!(max_window_error(&m, &prod, 3) < 1e-12);
        assert_eq!(prod.at(4, 4), Complex64::new(0.0, 0.0));
    }
}
