//! The twisted Alexander function `Δ_{K,ρ}(t) = Δ₁(t)/Δ₀(t)`, its value at
//! `t = 1` and the special value `R(0,ρ) = |Δ_{K,ρ}(1)|²`.
//!
//! `Δ₀` is the determinant of one generator block `Φ(x_k − 1)` of `∂₁` and
//! `Δ₁` the determinant of `∂₂` with that block column removed.  Wada's
//! theory guarantees some block has nonzero determinant; generator columns
//! are searched in ascending index order so the output is deterministic.

use num_complex::Complex64;
use thiserror::Error;

use crate::foxcalc::{boundary_matrices, FoxError, TwistData};
use crate::laurent::LaurentPoly;
use crate::presentations::Presentation;

#[derive(Debug, Error)]
pub enum AlexanderError {
    #[error("no generator column gives a nonzero Δ₀")]
    AllColumnsSingular,
    #[error("Δ₁ is identically zero; the twisted chain complex is not acyclic over ℂ(t)")]
    ZeroDelta1,
    #[error("character ξ = 1 violates cuspidality")]
    CuspidalityViolation,
    #[error("twist is not acyclic: {0}")]
    NonAcyclic(String),
    #[error(transparent)]
    Fox(#[from] FoxError),
}

/// The value of `Δ₁/Δ₀` at `t = 1`, with quotient-convention poles kept
/// explicit instead of collapsed to a number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValueAtOne {
    Finite(Complex64),
    Pole,
}

impl ValueAtOne {
    pub fn finite(&self) -> Option<Complex64> {
        match self {
            Self::Finite(v) => Some(*v),
            Self::Pole => None,
        }
    }
}

/// A ratio of Laurent polynomials, kept as computed; equality is by
/// cross-multiplication rather than gcd normalisation.
#[derive(Debug, Clone)]
pub struct RationalFunction {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl RationalFunction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "denominator must not vanish identically");
        Self { num, den }
    }

    /// `self == other` tested by cross-multiplication.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let lhs = self.num.mul(&other.den);
        let rhs = other.num.mul(&self.den);
        let scale = lhs.max_coeff_norm().max(rhs.max_coeff_norm()).max(1.0);
        lhs.distance(&rhs) <= tol * scale
    }

    /// Same up to a unit `c·t^k`, `|c| = 1` (cross-multiplied).
    pub fn eq_up_to_unit(&self, other: &Self, tol: f64) -> bool {
        let lhs = self.num.mul(&other.den);
        let rhs = other.num.mul(&self.den);
        crate::laurent::eq_up_to_unit(&lhs, &rhs, tol * lhs.max_coeff_norm().max(1.0))
    }
}

#[derive(Debug, Clone)]
pub struct AlexanderReport {
    pub delta0: LaurentPoly,
    pub delta1: LaurentPoly,
    /// Generator block whose `Φ(x_k − 1)` determinant was used as `Δ₀`.
    pub chosen_column: usize,
    pub value_at_1: ValueAtOne,
    /// `|Δ_{K,ρ}(1)|²` when the value is finite, per the special-value formula.
    pub special_value: Option<f64>,
}

impl AlexanderReport {
    pub fn function(&self) -> RationalFunction {
        RationalFunction::new(self.delta1.clone(), self.delta0.clone())
    }
}

const VALUE_TOL: f64 = 1e-9;

/// Evaluate `num/den` at `t = 1` with L'Hôpital handling when both vanish.
fn value_at_one(num: &LaurentPoly, den: &LaurentPoly) -> ValueAtOne {
    let one = Complex64::new(1.0, 0.0);
    let mut p = num.clone();
    let mut q = den.clone();
    // bounded by the degree window; each step lowers the vanishing order
    for _ in 0..=256 {
        let (pv, qv) = (p.eval(one), q.eval(one));
        if qv.norm() > VALUE_TOL {
            return ValueAtOne::Finite(pv / qv);
        }
        if pv.norm() > VALUE_TOL {
            return ValueAtOne::Pole;
        }
        p = p.derivative();
        q = q.derivative();
        if p.is_zero() && q.is_zero() {
            break;
        }
    }
    // 0/0 of identically-vanishing data
    ValueAtOne::Finite(Complex64::new(0.0, 0.0))
}

/// Compute the twisted Alexander data of a Wirtinger presentation.
pub fn alexander(p: &Presentation, twist: &TwistData) -> Result<AlexanderReport, AlexanderError> {
    let (d2, d1) = boundary_matrices(p, twist)?;
    let n = p.num_generators();
    let r = twist.rank();
    let mut chosen = None;
    for k in 0..n {
        // det of the k-th r×r block of ∂₁
        let block = crate::laurent::LaurentMatrix::from_fn(r, r, |a, b| {
            d1.entry(k * r + a, b).clone()
        });
        let det = block.det().expect("square block");
        if !det.is_zero() {
            chosen = Some((k, det));
            break;
        }
    }
    let (column, delta0) = chosen.ok_or(AlexanderError::AllColumnsSingular)?;
    let minor = d2.delete_columns(column * r, r);
    let delta1 = minor.det().expect("square after deleting one block column");
    if delta1.is_zero() && !p.relators().is_empty() {
        return Err(AlexanderError::ZeroDelta1);
    }
    let value = value_at_one(&delta1, &delta0);
    let special = value.finite().map(|v| v.norm_sqr());
    Ok(AlexanderReport {
        delta0,
        delta1,
        chosen_column: column,
        value_at_1: value,
        special_value: special,
    })
}

/// `R_{X_K}(0,ρ) = |A_K(ξ)/(1−ξ)|²` for a rank-1 character twist.
pub fn special_value_rank1(a_k: &LaurentPoly, xi: Complex64) -> Result<f64, AlexanderError> {
    if (xi - Complex64::new(1.0, 0.0)).norm() <= crate::EPS_TRIM {
        return Err(AlexanderError::CuspidalityViolation);
    }
    let num = a_k.eval(xi);
    if num.norm() <= VALUE_TOL {
        return Err(AlexanderError::NonAcyclic(format!(
            "A_K(ξ) = 0 at ξ = {xi}"
        )));
    }
    Ok((num / (Complex64::new(1.0, 0.0) - xi)).norm_sqr())
}

/// `Δ_{K,ρ}(1) ≠ 0`, the acyclicity criterion gating the torsion identity.
pub fn acyclicity_check(report: &AlexanderReport) -> bool {
    match report.value_at_1 {
        ValueAtOne::Finite(v) => v.norm() > VALUE_TOL,
        ValueAtOne::Pole => false,
    }
}
