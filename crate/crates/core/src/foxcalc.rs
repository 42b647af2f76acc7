//! Group-ring arithmetic, Fox free differential calculus and the
//! specialisation `Φ = ε ⊗ ρ` into matrices over `Λ = ℂ[t, t⁻¹]`.
//!
//! For a Wirtinger presentation the Hurewicz map `ε` sends every generator
//! to `t`, so a word `w` with coefficient `c` is sent to the matrix
//! `c · ρ(w) · t^{ε(w)}`.  Negative generator exponents use the conjugate
//! transpose of the generator image, which is the exact inverse for a
//! unitary matrix.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::laurent::LaurentMatrix;
use crate::presentations::{Presentation, Word};
use crate::EPS_TRIM;

pub const UNITARITY_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum FoxError {
    #[error("generator index {index} out of range ({count} generators)")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("twist has rank {twist} but presentation expects rank {expected}")]
    RankMismatch { twist: usize, expected: usize },
    #[error("generator image {index} is not unitary (deviation {deviation:.3e})")]
    NotUnitary { index: usize, deviation: f64 },
    #[error("character must have unit modulus, got |ξ| = {0}")]
    NotUnitCharacter(f64),
    #[error("character ξ = 1 is not cuspidal")]
    TrivialCharacter,
    #[error("twist supplies {found} generator images, presentation has {expected}")]
    ImageCountMismatch { found: usize, expected: usize },
    #[error("presentation is not marked wirtinger")]
    NotWirtinger,
    #[error("twist file: {0}")]
    Parse(String),
}

/// An element of the group ring `ℂ[F_n]`: finitely many reduced words with
/// complex coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, Complex64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::identity())
    }

    pub fn from_word(w: Word) -> Self {
        let mut e = Self::zero();
        e.add_term(w, Complex64::new(1.0, 0.0));
        e
    }

    /// `w - 1`, the ubiquitous Fox-calculus building block.
    pub fn word_minus_one(w: Word) -> Self {
        let mut e = Self::from_word(w);
        e.add_term(Word::identity(), Complex64::new(-1.0, 0.0));
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: Complex64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                if c.norm() > EPS_TRIM {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().norm() <= EPS_TRIM {
                    e.remove();
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, Complex64)> + '_ {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn coeff(&self, w: &Word) -> Complex64 {
        self.terms
            .get(w)
            .copied()
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.iter() {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in other.iter() {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero();
        for (w, a) in self.iter() {
            out.add_term(w.clone(), a * c);
        }
        out
    }

    /// Left multiplication by a single word.
    pub fn left_mul_word(&self, w: &Word) -> Self {
        let mut out = Self::zero();
        for (v, c) in self.iter() {
            out.add_term(w.multiply(v), c);
        }
        out
    }

    /// Full group-ring product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in self.iter() {
            for (v, b) in other.iter() {
                out.add_term(u.multiply(v), a * b);
            }
        }
        out
    }

    /// Largest coefficient modulus of the difference.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for (w, c) in self.iter() {
            d = d.max((c - other.coeff(w)).norm());
        }
        for (w, c) in other.iter() {
            d = d.max((self.coeff(w) - c).norm());
        }
        d
    }
}

/// A unitary twist: either a rank-1 character `ρ(t) = ξ` on the
/// abelianisation, or explicit unitary images of the generators.
#[derive(Debug, Clone)]
pub enum TwistData {
    Character(Complex64),
    Matrices {
        rank: usize,
        images: Vec<DMatrix<Complex64>>,
    },
}

impl TwistData {
    /// Rank-1 character; `|ξ| = 1` is enforced.
    pub fn character(xi: Complex64) -> Result<Self, FoxError> {
        if (xi.norm() - 1.0).abs() > EPS_TRIM {
            return Err(FoxError::NotUnitCharacter(xi.norm()));
        }
        Ok(Self::Character(xi))
    }

    /// Explicit generator images, checked for unitarity.
    pub fn matrices(images: Vec<DMatrix<Complex64>>) -> Result<Self, FoxError> {
        let rank = images.first().map(|m| m.nrows()).unwrap_or(0);
        for (index, u) in images.iter().enumerate() {
            if u.nrows() != rank || u.ncols() != rank {
                return Err(FoxError::RankMismatch {
                    twist: u.nrows(),
                    expected: rank,
                });
            }
            let dev = (u * u.adjoint() - DMatrix::identity(rank, rank))
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
            if dev > UNITARITY_TOL {
                return Err(FoxError::NotUnitary {
                    index,
                    deviation: dev,
                });
            }
        }
        Ok(Self::Matrices { rank, images })
    }

    pub fn rank(&self) -> usize {
        match self {
            Self::Character(_) => 1,
            Self::Matrices { rank, .. } => *rank,
        }
    }

    /// Reject a character twist with `ξ = 1` (not cuspidal).
    pub fn require_cuspidal(&self) -> Result<(), FoxError> {
        if let Self::Character(xi) = self {
            if (xi - Complex64::new(1.0, 0.0)).norm() <= EPS_TRIM {
                return Err(FoxError::TrivialCharacter);
            }
        }
        Ok(())
    }

    /// `ρ(w)` as an `r×r` matrix; inverse letters use the adjoint image.
    pub fn word_image(&self, w: &Word) -> DMatrix<Complex64> {
        let r = self.rank();
        match self {
            Self::Character(xi) => {
                let val = xi.powi(w.exponent_sum() as i32);
                DMatrix::from_element(1, 1, val)
            }
            Self::Matrices { images, .. } => {
                let mut acc = DMatrix::identity(r, r);
                for &(g, e) in w.letters() {
                    if e > 0 {
                        acc *= &images[g];
                    } else {
                        acc *= images[g].adjoint();
                    }
                }
                acc
            }
        }
    }

    fn check_generators(&self, p: &Presentation) -> Result<(), FoxError> {
        if let Self::Matrices { images, .. } = self {
            if images.len() != p.num_generators() {
                return Err(FoxError::ImageCountMismatch {
                    found: images.len(),
                    expected: p.num_generators(),
                });
            }
        }
        Ok(())
    }

    /// Parse the twist file format: `rank: r`, then either a single
    /// `char: re im` line (rank 1) or, per generator, `r` lines of `2r`
    /// whitespace-separated reals (row-major re/im pairs).
    pub fn parse(text: &str, num_generators: usize) -> Result<Self, FoxError> {
        let mut lines = text
            .lines()
            .map(|l| match l.find('#') {
                Some(pos) => l[..pos].trim(),
                None => l.trim(),
            })
            .filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| {
            FoxError::Parse("expected 'rank: <r>' header".to_owned())
        })?;
        let rank: usize = header
            .strip_prefix("rank:")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| FoxError::Parse(format!("bad rank line '{header}'")))?;
        if rank == 0 {
            return Err(FoxError::Parse("rank must be positive".to_owned()));
        }
        let rest: Vec<&str> = lines.collect();
        if let Some(first) = rest.first() {
            if let Some(body) = first.strip_prefix("char:") {
                if rank != 1 {
                    return Err(FoxError::Parse(
                        "char: form requires rank 1".to_owned(),
                    ));
                }
                let nums: Vec<f64> = body
                    .split_whitespace()
                    .map(|s| s.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| FoxError::Parse(e.to_string()))?;
                if nums.len() != 2 {
                    return Err(FoxError::Parse(
                        "char: expects '<re> <im>'".to_owned(),
                    ));
                }
                return Self::character(Complex64::new(nums[0], nums[1]));
            }
        }
        let expected = num_generators * rank;
        if rest.len() != expected {
            return Err(FoxError::Parse(format!(
                "expected {expected} matrix rows ({num_generators} generators × {rank}), found {}",
                rest.len()
            )));
        }
        let mut images = Vec::with_capacity(num_generators);
        for g in 0..num_generators {
            let mut m = DMatrix::zeros(rank, rank);
            for i in 0..rank {
                let row = rest[g * rank + i];
                let nums: Vec<f64> = row
                    .split_whitespace()
                    .map(|s| s.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| FoxError::Parse(e.to_string()))?;
                if nums.len() != 2 * rank {
                    return Err(FoxError::Parse(format!(
                        "matrix row needs {} reals, found {}",
                        2 * rank,
                        nums.len()
                    )));
                }
                for j in 0..rank {
                    m[(i, j)] = Complex64::new(nums[2 * j], nums[2 * j + 1]);
                }
            }
            images.push(m);
        }
        Self::matrices(images)
    }
}

/// The Fox derivative `∂w/∂x_i`, defined by `∂x_j/∂x_i = δ_ij`,
/// `∂(uv) = ∂u + u·∂v` and `∂(x_i⁻¹) = −x_i⁻¹`.
pub fn fox_derivative(w: &Word, i: usize, num_generators: usize) -> Result<GroupRingElement, FoxError> {
    if i >= num_generators {
        return Err(FoxError::GeneratorOutOfRange {
            index: i,
            count: num_generators,
        });
    }
    if let Some(g) = w.max_generator() {
        if g >= num_generators {
            return Err(FoxError::GeneratorOutOfRange {
                index: g,
                count: num_generators,
            });
        }
    }
    let mut out = GroupRingElement::zero();
    // ∂(l_1 … l_m)/∂x_i = Σ_k (l_1…l_{k-1}) · ∂l_k/∂x_i
    for (k, &(g, e)) in w.letters().iter().enumerate() {
        if g != i {
            continue;
        }
        let prefix = w.prefix(k);
        if e > 0 {
            out.add_term(prefix, Complex64::new(1.0, 0.0));
        } else {
            out.add_term(
                prefix.multiply(&Word::letter(g, -1)),
                Complex64::new(-1.0, 0.0),
            );
        }
    }
    Ok(out)
}

/// `Φ(e)`: each word `w` with coefficient `c` contributes
/// `c · ρ(w) · t^{ε(w)}`.
pub fn phi(e: &GroupRingElement, twist: &TwistData) -> LaurentMatrix {
    let r = twist.rank();
    let mut out = LaurentMatrix::zeros(r, r);
    for (w, c) in e.iter() {
        let img = twist.word_image(w);
        let power = w.exponent_sum();
        for i in 0..r {
            for j in 0..r {
                let v = img[(i, j)] * c;
                if v.norm() > EPS_TRIM {
                    out.entry_mut(i, j).add_term(power, v);
                }
            }
        }
    }
    out
}

/// The Fox-calculus boundary matrices of the 2-complex realising a
/// Wirtinger presentation.  Chains are row vectors, so the composite of
/// the two differentials is the matrix product `∂₂ · ∂₁`:
///
/// * `∂₁` is the `n·r × r` stack of blocks `Φ(x_i − 1)`;
/// * `∂₂` is the `(n−1)·r × n·r` grid of blocks `Φ(∂r_j/∂x_i)`.
pub fn boundary_matrices(
    p: &Presentation,
    twist: &TwistData,
) -> Result<(LaurentMatrix, LaurentMatrix), FoxError> {
    if !p.is_wirtinger() {
        return Err(FoxError::NotWirtinger);
    }
    twist.check_generators(p)?;
    let n = p.num_generators();
    let r = twist.rank();
    let mut d1 = LaurentMatrix::zeros(n * r, r);
    for i in 0..n {
        let block = phi(
            &GroupRingElement::word_minus_one(Word::generator(i)),
            twist,
        );
        for a in 0..r {
            for b in 0..r {
                *d1.entry_mut(i * r + a, b) = block.entry(a, b).clone();
            }
        }
    }
    let m = p.relators().len();
    let mut d2 = LaurentMatrix::zeros(m * r, n * r);
    for (j, rel) in p.relators().iter().enumerate() {
        for i in 0..n {
            let deriv = fox_derivative(rel, i, n)?;
            let block = phi(&deriv, twist);
            for a in 0..r {
                for b in 0..r {
                    *d2.entry_mut(j * r + a, i * r + b) = block.entry(a, b).clone();
                }
            }
        }
    }
    Ok((d2, d1))
}
