//! Epstein L-functions of rank-2 lattices with nontrivial character, their
//! value at `s = 0`, the cusp constants `τ_ν` and `δ(X,ρ)`.
//!
//! For a cusp lattice `Λ = Bℤ²` and character `χ(η) = e^{2πi α·m}`
//! (`η = m₁b₁ + m₂b₂`), the L-function is
//! `ζ(s,χ) = Σ'_η χ(η)|η|^{−2(s+1)}` (`n = 1`, exponent `2n(s+1)`).
//! The theta-kernel split with Poisson summation on `(0,1]` turns it into
//! two exponentially convergent lattice sums of incomplete gamma values;
//! since `α ∉ ℤ²` the dual sum has no constant term, so there is no pole
//! and the value at the origin is regular.
//!
//! Basis coordinates must already be expressed in the normalised
//! Cartan–Killing metric; the module sums plain Euclidean norms of `B·m`.

use num_complex::Complex64;
use thiserror::Error;

use crate::cgamma::{gamma, upper_incomplete_gamma};

const PI: f64 = std::f64::consts::PI;

/// Default truncation radius: `e^{−πR²} ≈ 2·10⁻²²` at `R = 4`.
pub const DEFAULT_RADIUS: f64 = 4.0;
const MAX_POINTS_PER_AXIS: i64 = 4000;

#[derive(Debug, Error, PartialEq)]
pub enum EpsteinError {
    #[error("lattice basis is singular (det = {0})")]
    SingularBasis(f64),
    #[error("character vector α = (0, 0) is trivial; cuspidality fails")]
    TrivialCharacter,
    #[error("α components must lie in [0, 1), got ({0}, {1})")]
    AlphaOutOfRange(f64, f64),
    #[error("truncation bound not met: need {needed} points per axis (cap {cap})")]
    NonconvergentTheta { needed: i64, cap: i64 },
    #[error("cusp covolume {covolume} disagrees with |det basis| = {det}")]
    CovolumeMismatch { covolume: f64, det: f64 },
    #[error("cusp has no character lattices")]
    EmptyCusp,
    #[error("lattice file: {0}")]
    Parse(String),
}

/// A rank-2 lattice with character data: `basis` columns are the lattice
/// generators, `alpha ∈ [0,1)²` defines `χ(m₁b₁+m₂b₂) = e^{2πi α·m}`.
#[derive(Debug, Clone)]
pub struct CharLattice {
    basis: [[f64; 2]; 2],
    alpha: [f64; 2],
}

impl CharLattice {
    /// `basis = [[b11, b21], [b12, b22]]` as columns `b1 = (b11, b21)`,
    /// `b2 = (b12, b22)`.
    pub fn new(basis: [[f64; 2]; 2], alpha: [f64; 2]) -> Result<Self, EpsteinError> {
        let det = basis[0][0] * basis[1][1] - basis[1][0] * basis[0][1];
        if det.abs() <= 1e-14 {
            return Err(EpsteinError::SingularBasis(det));
        }
        for &a in &alpha {
            if !(0.0..1.0).contains(&a) {
                return Err(EpsteinError::AlphaOutOfRange(alpha[0], alpha[1]));
            }
        }
        if alpha[0] == 0.0 && alpha[1] == 0.0 {
            return Err(EpsteinError::TrivialCharacter);
        }
        Ok(Self { basis, alpha })
    }

    pub fn alpha(&self) -> [f64; 2] {
        self.alpha
    }

    pub fn det(&self) -> f64 {
        (self.basis[0][0] * self.basis[1][1] - self.basis[1][0] * self.basis[0][1]).abs()
    }

    /// `B·m`.
    pub fn point(&self, m1: i64, m2: i64) -> (f64, f64) {
        (
            self.basis[0][0] * m1 as f64 + self.basis[0][1] * m2 as f64,
            self.basis[1][0] * m1 as f64 + self.basis[1][1] * m2 as f64,
        )
    }

    /// `B^{−T}·(ν − α)`, a point of the α-shifted dual lattice.
    fn dual_point(&self, n1: i64, n2: i64) -> (f64, f64) {
        let det = self.basis[0][0] * self.basis[1][1] - self.basis[1][0] * self.basis[0][1];
        let (v1, v2) = (n1 as f64 - self.alpha[0], n2 as f64 - self.alpha[1]);
        // B^{−T} = (1/det)·[[b22, −b21], [−b12, b11]]
        (
            (self.basis[1][1] * v1 - self.basis[1][0] * v2) / det,
            (-self.basis[0][1] * v1 + self.basis[0][0] * v2) / det,
        )
    }

    pub fn character(&self, m1: i64, m2: i64) -> Complex64 {
        Complex64::from_polar(
            1.0,
            2.0 * PI * (self.alpha[0] * m1 as f64 + self.alpha[1] * m2 as f64),
        )
    }
}

/// Index range so that every lattice point within Euclidean radius `r` of
/// the origin (resp. of the α-shift) is enumerated.
fn axis_bound(col_norm1: f64, col_norm2: f64, r: f64) -> Result<(i64, i64), EpsteinError> {
    let b1 = (col_norm1 * r).ceil() as i64 + 1;
    let b2 = (col_norm2 * r).ceil() as i64 + 1;
    let needed = b1.max(b2);
    if needed > MAX_POINTS_PER_AXIS {
        return Err(EpsteinError::NonconvergentTheta {
            needed,
            cap: MAX_POINTS_PER_AXIS,
        });
    }
    Ok((b1, b2))
}

/// `ζ_ν(s, χ)` by the theta split at truncation radius `radius`.
pub fn epstein_value_with_radius(
    l: &CharLattice,
    s: Complex64,
    radius: f64,
) -> Result<Complex64, EpsteinError> {
    let w = s + 1.0;
    let volume = l.det();

    // rows of B^{−1} bound the primal indices; columns of B bound the dual
    let det = l.basis[0][0] * l.basis[1][1] - l.basis[1][0] * l.basis[0][1];
    let inv_row1 = ((l.basis[1][1] / det).powi(2) + (l.basis[0][1] / det).powi(2)).sqrt();
    let inv_row2 = ((l.basis[1][0] / det).powi(2) + (l.basis[0][0] / det).powi(2)).sqrt();
    let col1 = (l.basis[0][0].powi(2) + l.basis[1][0].powi(2)).sqrt();
    let col2 = (l.basis[0][1].powi(2) + l.basis[1][1].powi(2)).sqrt();

    let (p1, p2) = axis_bound(inv_row1, inv_row2, radius)?;
    let mut primal = Complex64::new(0.0, 0.0);
    for m1 in -p1..=p1 {
        for m2 in -p2..=p2 {
            if m1 == 0 && m2 == 0 {
                continue;
            }
            let (x, y) = l.point(m1, m2);
            let nsq = x * x + y * y;
            if nsq > radius * radius {
                continue;
            }
            let arg = PI * nsq;
            let term = Complex64::new(arg, 0.0).powc(-w) * upper_incomplete_gamma(w, arg);
            primal += l.character(m1, m2) * term;
        }
    }

    let (q1, q2) = axis_bound(col1, col2, radius + 2.0)?;
    let mut dual = Complex64::new(0.0, 0.0);
    for n1 in -q1..=q1 {
        for n2 in -q2..=q2 {
            let (x, y) = l.dual_point(n1, n2);
            let nsq = x * x + y * y;
            if nsq > radius * radius {
                continue;
            }
            let arg = PI * nsq;
            let term = Complex64::new(arg, 0.0).powc(w - 1.0)
                * upper_incomplete_gamma(Complex64::new(1.0, 0.0) - w, arg);
            dual += term;
        }
    }

    let bracket = -1.0 / w + primal + dual / volume;
    Ok(Complex64::new(PI, 0.0).powc(w) / gamma(w) * bracket)
}

/// `ζ_ν(s, χ)` at the default truncation radius.
pub fn epstein_value(l: &CharLattice, s: Complex64) -> Result<Complex64, EpsteinError> {
    epstein_value_with_radius(l, s, DEFAULT_RADIUS)
}

/// One cusp: the same lattice with one character per summand of `ρ|_Γν`,
/// plus the covolume `vol(Γ_ν\N_ν)`.
#[derive(Debug, Clone)]
pub struct CuspData {
    pub lattices: Vec<CharLattice>,
    pub covolume: f64,
}

impl CuspData {
    pub fn new(lattices: Vec<CharLattice>, covolume: f64) -> Result<Self, EpsteinError> {
        if lattices.is_empty() {
            return Err(EpsteinError::EmptyCusp);
        }
        for l in &lattices {
            let det = l.det();
            if (covolume - det).abs() > 1e-12 * det.max(1.0) {
                return Err(EpsteinError::CovolumeMismatch { covolume, det });
            }
        }
        Ok(Self { lattices, covolume })
    }
}

/// `τ_ν = Σ_i ζ_ν(0, χ_{ν,i})`.
pub fn tau_nu(cusp: &CuspData) -> Result<Complex64, EpsteinError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for l in &cusp.lattices {
        acc += epstein_value(l, Complex64::new(0.0, 0.0))?;
    }
    Ok(acc)
}

/// `δ(X,ρ) = (1/A(𝔫)) Σ_ν vol(Γ_ν\N_ν)·τ_ν` with `A(𝔫) = 2π` for the
/// 2-dimensional `𝔫` of a cusped threefold.  No cusps means `δ = 0`.
pub fn delta_constant(cusps: &[CuspData]) -> Result<Complex64, EpsteinError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for cusp in cusps {
        acc += cusp.covolume * tau_nu(cusp)?;
    }
    Ok(acc / (2.0 * PI))
}

/// Parse the cusp/lattice file: one `covolume:` line opens a cusp, then
/// one `basis:`/`alpha:` pair per character.
pub fn parse_cusps(text: &str) -> Result<Vec<CuspData>, EpsteinError> {
    let mut cusps: Vec<CuspData> = Vec::new();
    let mut covolume: Option<f64> = None;
    let mut lattices: Vec<CharLattice> = Vec::new();
    let mut pending_basis: Option<[[f64; 2]; 2]> = None;

    let close_cusp = |covolume: &mut Option<f64>,
                          lattices: &mut Vec<CharLattice>|
     -> Result<Option<CuspData>, EpsteinError> {
        if let Some(v) = covolume.take() {
            let cusp = CuspData::new(std::mem::take(lattices), v)?;
            Ok(Some(cusp))
        } else {
            Ok(None)
        }
    };

    for raw in text.lines() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("covolume:") {
            if pending_basis.is_some() {
                return Err(EpsteinError::Parse("basis line without alpha".to_owned()));
            }
            if let Some(cusp) = close_cusp(&mut covolume, &mut lattices)? {
                cusps.push(cusp);
            }
            covolume = Some(
                rest.trim()
                    .parse()
                    .map_err(|e| EpsteinError::Parse(format!("covolume: {e}")))?,
            );
        } else if let Some(rest) = line.strip_prefix("basis:") {
            if pending_basis.is_some() {
                return Err(EpsteinError::Parse("two basis lines in a row".to_owned()));
            }
            let nums: Vec<f64> = rest
                .split_whitespace()
                .map(|t| t.parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| EpsteinError::Parse(format!("basis: {e}")))?;
            if nums.len() != 4 {
                return Err(EpsteinError::Parse(
                    "basis needs 'b11 b21 b12 b22'".to_owned(),
                ));
            }
            pending_basis = Some([[nums[0], nums[2]], [nums[1], nums[3]]]);
        } else if let Some(rest) = line.strip_prefix("alpha:") {
            let basis = pending_basis
                .take()
                .ok_or_else(|| EpsteinError::Parse("alpha line without basis".to_owned()))?;
            let nums: Vec<f64> = rest
                .split_whitespace()
                .map(|t| t.parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| EpsteinError::Parse(format!("alpha: {e}")))?;
            if nums.len() != 2 {
                return Err(EpsteinError::Parse("alpha needs 'a1 a2'".to_owned()));
            }
            lattices.push(CharLattice::new(basis, [nums[0], nums[1]])?);
        } else {
            return Err(EpsteinError::Parse(format!("unrecognised line '{line}'")));
        }
    }
    if pending_basis.is_some() {
        return Err(EpsteinError::Parse("basis line without alpha".to_owned()));
    }
    if let Some(cusp) = close_cusp(&mut covolume, &mut lattices)? {
        cusps.push(cusp);
    }
    Ok(cusps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square_half_half() -> CharLattice {
        CharLattice::new([[1.0, 0.0], [0.0, 1.0]], [0.5, 0.5]).unwrap()
    }

    /// Direct lattice sum in the absolutely convergent region, grouped by
    /// increasing norm (spherical shells).
    fn direct_sum(l: &CharLattice, s: Complex64, radius: i64) -> Complex64 {
        let mut terms: Vec<(f64, Complex64)> = Vec::new();
        for m1 in -radius..=radius {
            for m2 in -radius..=radius {
                if m1 == 0 && m2 == 0 {
                    continue;
                }
                let (x, y) = l.point(m1, m2);
                let nsq = x * x + y * y;
                terms.push((nsq, l.character(m1, m2)));
            }
        }
        terms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let exponent = -(s + 1.0);
        let mut acc = c(0.0, 0.0);
        // largest norm first = smallest term magnitude first
        for (nsq, chi) in terms.into_iter().rev() {
            acc += chi * Complex64::new(nsq, 0.0).powc(exponent);
        }
        acc
    }

    #[test]
    fn constructor_invariants() {
        assert!(matches!(
            CharLattice::new([[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0]),
            Err(EpsteinError::TrivialCharacter)
        ));
        assert!(matches!(
            CharLattice::new([[1.0, 2.0], [2.0, 4.0]], [0.5, 0.0]),
            Err(EpsteinError::SingularBasis(_))
        ));
        assert!(matches!(
            CharLattice::new([[1.0, 0.0], [0.0, 1.0]], [1.25, 0.0]),
            Err(EpsteinError::AlphaOutOfRange(..))
        ));
    }

    #[test]
    fn theta_method_matches_direct_sum_at_s_15() {
        let l = square_half_half();
        let s = c(1.5, 0.0);
        let theta = epstein_value(&l, s).unwrap();
        let direct = direct_sum(&l, s, 200);
        assert!(
            (theta - direct).norm() < 1e-8,
            "theta {theta} vs direct {direct}"
        );
    }

    #[test]
    fn truncation_radius_stability_at_origin() {
        let l = square_half_half();
        let a = epstein_value_with_radius(&l, c(0.0, 0.0), DEFAULT_RADIUS).unwrap();
        let b = epstein_value_with_radius(&l, c(0.0, 0.0), DEFAULT_RADIUS + 2.0).unwrap();
        assert!((a - b).norm() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn entirety_probe_grid() {
        let l = square_half_half();
        for &re in &[-0.5, 0.0, 0.5] {
            for &im in &[0.0, 0.5, -0.5] {
                let s = c(re, im);
                let a = epstein_value_with_radius(&l, s, DEFAULT_RADIUS).unwrap();
                let b = epstein_value_with_radius(&l, s, DEFAULT_RADIUS + 2.0).unwrap();
                assert!(a.re.is_finite() && a.im.is_finite());
                assert!((a - b).norm() < 1e-10, "s={s}");
            }
        }
    }

    #[test]
    fn square_alternating_character_closed_form() {
        // Σ'(−1)^{m₁+m₂}(m₁²+m₂²)^{−w} factors as −4η(w)β(w) over the
        // Dirichlet series of ℚ(i); at w = 1 that is −4·ln2·(π/4) = −π ln2
        let l = square_half_half();
        let v = epstein_value(&l, c(0.0, 0.0)).unwrap();
        let expected = -PI * 2.0f64.ln();
        assert!((v.re - expected).abs() < 1e-10, "{} vs {expected}", v.re);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn conjugation_symmetry() {
        // ζ(s̄, χ̄) = conj ζ(s, χ); χ̄ has α ↦ (−α mod 1)
        let l = CharLattice::new([[1.3, 0.2], [0.1, 0.9]], [0.3, 0.7]).unwrap();
        let lbar = CharLattice::new([[1.3, 0.2], [0.1, 0.9]], [0.7, 0.3]).unwrap();
        for &s in &[c(0.4, 0.3), c(0.0, 0.0), c(-0.2, 0.8)] {
            let a = epstein_value(&l, s).unwrap();
            let b = epstein_value(&lbar, s.conj()).unwrap();
            assert!((b - a.conj()).norm() < 1e-10, "s={s}");
        }
    }

    #[test]
    fn real_character_gives_real_values_on_real_axis() {
        // α = (½, ½): χ = ±1, so ζ(s) is real for real s
        let l = square_half_half();
        for &s in &[c(1.5, 0.0), c(0.0, 0.0), c(-0.5, 0.0)] {
            let v = epstein_value(&l, s).unwrap();
            assert!(v.im.abs() < 1e-12, "s={s}: {v}");
        }
    }

    #[test]
    fn tau_and_delta_assembly() {
        let l = square_half_half();
        let single = epstein_value(&l, c(0.0, 0.0)).unwrap();
        let cusp = CuspData::new(vec![l.clone()], 1.0).unwrap();
        let tau = tau_nu(&cusp).unwrap();
        assert!((tau - single).norm() < 1e-14);

        // conjugate character pair gives a real τ
        let pair = CuspData::new(
            vec![
                CharLattice::new([[1.0, 0.0], [0.0, 1.0]], [0.3, 0.6]).unwrap(),
                CharLattice::new([[1.0, 0.0], [0.0, 1.0]], [0.7, 0.4]).unwrap(),
            ],
            1.0,
        )
        .unwrap();
        let tau_pair = tau_nu(&pair).unwrap();
        assert!(tau_pair.im.abs() < 1e-10, "{tau_pair}");

        // identical characters double the value
        let doubled = CuspData::new(vec![l.clone(), l.clone()], 1.0).unwrap();
        let tau_doubled = tau_nu(&doubled).unwrap();
        assert!((tau_doubled - 2.0 * single).norm() < 1e-12);

        // δ assembly: single cusp with covolume 1 → τ/(2π)
        let delta = delta_constant(std::slice::from_ref(&cusp)).unwrap();
        assert!((delta - tau / (2.0 * PI)).norm() < 1e-14);
        // closed manifold: no cusps → 0
        assert_eq!(delta_constant(&[]).unwrap(), c(0.0, 0.0));
        // two identical cusps double
        let two = delta_constant(&[cusp.clone(), cusp.clone()]).unwrap();
        assert!((two - 2.0 * delta).norm() < 1e-13);
    }

    #[test]
    fn tiny_lattice_hits_truncation_cap() {
        // spacing 1e−4 would need ~40000 points per axis
        let l = CharLattice::new([[1e-4, 0.0], [0.0, 1e-4]], [0.5, 0.5]).unwrap();
        assert!(matches!(
            epstein_value(&l, c(0.0, 0.0)),
            Err(EpsteinError::NonconvergentTheta { .. })
        ));
    }

    #[test]
    fn covolume_consistency_enforced() {
        let l = square_half_half();
        assert!(matches!(
            CuspData::new(vec![l], 2.0),
            Err(EpsteinError::CovolumeMismatch { .. })
        ));
    }

    #[test]
    fn cusp_file_parses() {
        let text = "covolume: 1.0\nbasis: 1 0 0 1\nalpha: 0.5 0.5\nbasis: 1 0 0 1\nalpha: 0.25 0.75\ncovolume: 1.0\nbasis: 1 0 0 1\nalpha: 0.5 0.0\n";
        let cusps = parse_cusps(text).unwrap();
        assert_eq!(cusps.len(), 2);
        assert_eq!(cusps[0].lattices.len(), 2);
        assert_eq!(cusps[1].lattices.len(), 1);
        assert!(parse_cusps("basis: 1 0 0 1\n").is_err());
    }
}
