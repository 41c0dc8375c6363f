//! Dense complex matrices as concrete algebra elements.
//!
//! Every element of the fuzzy sphere or the noncommutative torus is realized
//! as an `N x N` complex matrix. Equalities between elements are residual
//! checks measured in the entrywise max modulus and judged by a
//! [`ToleranceSpec`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The imaginary unit.
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Absolute/relative tolerance pair used for every residual check.
///
/// A residual passes iff `residual <= atol + rtol * scale`, where `scale`
/// is the magnitude of the quantities being compared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSpec {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        Self {
            atol: 1e-10,
            rtol: 1e-10,
        }
    }
}

impl ToleranceSpec {
    pub fn new(atol: f64, rtol: f64) -> Self {
        Self { atol, rtol }
    }

    /// Pure absolute tolerance.
    pub fn absolute(atol: f64) -> Self {
        Self { atol, rtol: 0.0 }
    }

    pub fn bound(&self, scale: f64) -> f64 {
        self.atol + self.rtol * scale
    }

    pub fn accepts(&self, residual: f64, scale: f64) -> bool {
        residual <= self.bound(scale)
    }

    /// `maxAbsEntry(a - b) <= atol + rtol * max(maxAbsEntry(a), maxAbsEntry(b))`.
    ///
    /// Elements of different dimension are never close.
    pub fn close(&self, a: &AlgebraElement, b: &AlgebraElement) -> bool {
        match a.checked_sub(b) {
            Ok(diff) => self.accepts(diff.max_abs_entry(), a.max_abs_entry().max(b.max_abs_entry())),
            Err(_) => false,
        }
    }
}

/// An element of a finite-dimensional matrix algebra.
#[derive(Clone, PartialEq)]
pub struct AlgebraElement {
    entries: DMatrix<Complex64>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraElement")
            .field("dim", &self.dim())
            .field("entries", &self.entries)
            .finish()
    }
}

impl AlgebraElement {
    /// Wraps a square matrix. Returns `None` if the matrix is not square or empty.
    pub fn from_matrix(entries: DMatrix<Complex64>) -> Option<Self> {
        (entries.is_square() && entries.nrows() > 0).then_some(Self { entries })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim > 0, "algebra dimension must be positive");
        Self {
            entries: DMatrix::from_fn(dim, dim, f),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, Complex64::new(1.0, 0.0))
    }

    /// `c` times the unit.
    pub fn scalar(dim: usize, c: Complex64) -> Self {
        Self::from_fn(dim, |r, s| if r == s { c } else { Complex64::new(0.0, 0.0) })
    }

    /// The matrix unit `E_{row,col}` (zero-based).
    pub fn matrix_unit(dim: usize, row: usize, col: usize) -> Self {
        Self::from_fn(dim, |r, s| {
            if r == row && s == col {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        Self::from_fn(
            values.len(),
            |r, s| {
                if r == s {
                    values[r]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            },
        )
    }

    /// Random element with real and imaginary parts i.i.d. uniform on `[-1, 1]`,
    /// drawn row by row from a ChaCha8 stream seeded with `seed`. With
    /// `hermitian` set, the draw is replaced by `(a + a*) / 2`.
    pub fn random(dim: usize, seed: u64, hermitian: bool) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(&mut rng, dim, hermitian)
    }

    /// Same distribution as [`AlgebraElement::random`], drawing from `rng`.
    pub fn random_with<R: Rng + ?Sized>(rng: &mut R, dim: usize, hermitian: bool) -> Self {
        assert!(dim > 0, "algebra dimension must be positive");
        let mut values = Vec::with_capacity(dim * dim);
        for _ in 0..dim * dim {
            let re = rng.gen_range(-1.0..=1.0);
            let im = rng.gen_range(-1.0..=1.0);
            values.push(Complex64::new(re, im));
        }
        let a = Self {
            entries: DMatrix::from_row_slice(dim, dim, &values),
        };
        if hermitian {
            (&a + &a.adjoint()).scale(Complex64::new(0.5, 0.0))
        } else {
            a
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            entries: &self.entries + &other.entries,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            entries: &self.entries - &other.entries,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            entries: &self.entries * &other.entries,
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            entries: &self.entries * c,
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
        }
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            entries: &self.entries * &other.entries - &other.entries * &self.entries,
        })
    }

    /// `ab + ba`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            entries: &self.entries * &other.entries + &other.entries * &self.entries,
        })
    }

    /// `(1/N) tr(a)`, the unique normalized trace on the full matrix algebra.
    pub fn normalized_trace(&self) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for r in 0..self.dim() {
            sum += self.entries[(r, r)];
        }
        sum / self.dim() as f64
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
    }

    /// `maxAbsEntry(a - a*)`.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.entries - self.entries.adjoint())
            .iter()
            .fold(0.0_f64, |acc, z| acc.max(z.norm()))
    }

    /// `maxAbsEntry(a - b)`; panics on dimension mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).max_abs_entry()
    }
}

/// Sums elements left to right; `None` on an empty iterator.
pub fn sum<'a>(items: impl IntoIterator<Item = &'a AlgebraElement>) -> Option<AlgebraElement> {
    let mut iter = items.into_iter();
    let first = iter.next()?.clone();
    Some(iter.fold(first, |acc, x| &acc + x))
}

// The operator impls panic on dimension mismatch. They are used where the
// dimension has already been validated (inside a geometry); external callers
// should prefer the `checked_*` methods.

impl<'b> Add<&'b AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &'b AlgebraElement) -> AlgebraElement {
        self.checked_add(rhs).expect("algebra element dimension mismatch")
    }
}

impl<'b> Sub<&'b AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &'b AlgebraElement) -> AlgebraElement {
        self.checked_sub(rhs).expect("algebra element dimension mismatch")
    }
}

impl<'b> Mul<&'b AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &'b AlgebraElement) -> AlgebraElement {
        self.checked_mul(rhs).expect("algebra element dimension mismatch")
    }
}

impl Add for AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: AlgebraElement) -> AlgebraElement {
        &self + &rhs
    }
}

impl Sub for AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: AlgebraElement) -> AlgebraElement {
        &self - &rhs
    }
}

impl Mul for AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: AlgebraElement) -> AlgebraElement {
        &self * &rhs
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            entries: -&self.entries,
        }
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        -&self
    }
}
