//! The Laurent polynomial ring `Λ = ℂ[t, t⁻¹]` and matrices over it.
//!
//! Coefficients are complex doubles; terms whose modulus drops below
//! [`EPS_TRIM`](crate::EPS_TRIM) are removed so that zero tests are meaningful.
//! Matrix determinants are computed by evaluation at roots of unity followed
//! by inverse discrete-Fourier interpolation, which avoids the intermediate
//! expression swell of symbolic cofactor expansion.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::EPS_TRIM;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("matrix is {rows}x{cols}, determinant needs a square matrix")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A Laurent polynomial `Σ c_e t^e`, stored sparsely with exponents sorted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Complex64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(0, Complex64::new(1.0, 0.0))
    }

    /// The monomial `c · t^e`.
    pub fn term(exponent: i64, c: Complex64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c.norm() > EPS_TRIM {
            coeffs.insert(exponent, c);
        }
        Self { coeffs }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Complex64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exponent: i64) -> Complex64 {
        self.coeffs
            .get(&exponent)
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, exponent: i64, c: Complex64) {
        let entry = self
            .coeffs
            .entry(exponent)
            .or_insert_with(|| Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() <= EPS_TRIM {
            self.coeffs.remove(&exponent);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.iter() {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.iter() {
            out.add_term(e, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero();
        for (e, a) in self.iter() {
            out.add_term(e, a * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in self.iter() {
            for (e2, c2) in other.iter() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in self.iter() {
            acc += c * t.powi(e as i32);
        }
        acc
    }

    /// Formal derivative `d/dt`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in self.iter() {
            if e != 0 {
                out.add_term(e - 1, c * Complex64::new(e as f64, 0.0));
            }
        }
        out
    }

    /// Largest coefficient modulus, 0 for the zero polynomial.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficientwise distance, treating missing exponents as zero.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for (e, c) in self.iter() {
            d = d.max((c - other.coeff(e)).norm());
        }
        for (e, c) in other.iter() {
            d = d.max((self.coeff(e) - c).norm());
        }
        d
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e == 0 {
                write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            } else {
                write!(f, "({:.6}{:+.6}i)*t^{}", c.re, c.im, e)?;
            }
        }
        Ok(())
    }
}

/// Equality up to a unit `c·t^k` with `|c| = 1`: align the top exponents,
/// cancel the leading-coefficient phase and compare coefficientwise.
/// Alexander-type invariants are only defined up to such units.
pub fn eq_up_to_unit(p: &LaurentPoly, q: &LaurentPoly, tol: f64) -> bool {
    match (p.max_degree(), q.max_degree()) {
        (None, None) => true,
        (None, _) | (_, None) => false,
        (Some(dp), Some(dq)) => {
            let p = p.shift(-dp);
            let q = q.shift(-dq);
            let (lp, lq) = (p.coeff(0), q.coeff(0));
            if lp.norm() <= EPS_TRIM || lq.norm() <= EPS_TRIM {
                return p.distance(&q) <= tol;
            }
            // unit-modulus phase alignment only; magnitudes must agree
            let phase = (lq / lq.norm()) / (lp / lp.norm());
            p.scale(phase).distance(&q) <= tol
        }
    }
}

/// A rectangular matrix over `Λ`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![LaurentPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = LaurentPoly::one();
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> LaurentPoly>(
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut LaurentPoly {
        &mut self.entries[i * self.cols + j]
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LaurentError> {
        if self.cols != other.rows {
            return Err(LaurentError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = LaurentPoly::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.entry(i, k).mul(other.entry(k, j)));
                }
                *out.entry_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    /// Delete a contiguous block of columns `[start, start + width)`.
    pub fn delete_columns(&self, start: usize, width: usize) -> Self {
        assert!(start + width <= self.cols);
        Self::from_fn(self.rows, self.cols - width, |i, j| {
            let src = if j < start { j } else { j + width };
            self.entry(i, src).clone()
        })
    }

    /// Evaluate every entry at `t`.
    pub fn eval(&self, t: Complex64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.entry(i, j).eval(t))
    }

    pub fn max_entry_distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut d: f64 = 0.0;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            d = d.max(a.distance(b));
        }
        d
    }

    /// Determinant by evaluation–interpolation.
    ///
    /// The exponents of `det` lie in the window `[Σ_i min_i, Σ_i max_i]`
    /// where `min_i`/`max_i` are the extreme entry degrees of row `i`.  The
    /// matrix is evaluated at `K` roots of unity with `K` exceeding the
    /// window width; twisting by `ω^{-k·min}` maps the window onto
    /// `0..K`, so the inverse DFT recovers the coefficients without
    /// exponent aliasing.
    pub fn det(&self) -> Result<LaurentPoly, LaurentError> {
        if self.rows != self.cols {
            return Err(LaurentError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(LaurentPoly::one());
        }
        let mut win_min: i64 = 0;
        let mut win_max: i64 = 0;
        for i in 0..n {
            let mut row_min = i64::MAX;
            let mut row_max = i64::MIN;
            for j in 0..n {
                let p = self.entry(i, j);
                if let (Some(lo), Some(hi)) = (p.min_degree(), p.max_degree()) {
                    row_min = row_min.min(lo);
                    row_max = row_max.max(hi);
                }
            }
            if row_min == i64::MAX {
                // an all-zero row
                return Ok(LaurentPoly::zero());
            }
            win_min += row_min;
            win_max += row_max;
        }
        let width = (win_max - win_min + 1) as usize;
        let k_points = width + 1;
        let omega = 2.0 * std::f64::consts::PI / k_points as f64;
        let mut values = Vec::with_capacity(k_points);
        for k in 0..k_points {
            let t = Complex64::from_polar(1.0, omega * k as f64);
            let m = self.eval(t);
            let v = m.lu().determinant();
            // twist away the window offset: det = t^win_min * q(t)
            let untwist = Complex64::from_polar(1.0, -omega * (k as i64 * win_min) as f64);
            values.push(v * untwist);
        }
        // inverse DFT for the coefficients of q, degree <= width-1 < k_points
        let mut out = LaurentPoly::zero();
        let scale = 1.0 / k_points as f64;
        let mut magnitude: f64 = 0.0;
        let mut raw = Vec::with_capacity(width);
        for m in 0..width {
            let mut c = Complex64::new(0.0, 0.0);
            for (k, v) in values.iter().enumerate() {
                let w = Complex64::from_polar(1.0, -omega * (k * m) as f64);
                c += v * w;
            }
            c *= scale;
            magnitude = magnitude.max(c.norm());
            raw.push(c);
        }
        // drop interpolation noise relative to the coefficient scale
        let floor = (magnitude * 1e-12).max(EPS_TRIM);
        for (m, c) in raw.into_iter().enumerate() {
            if c.norm() > floor {
                out.add_term(win_min + m as i64, c);
            }
        }
        Ok(out)
    }
}
