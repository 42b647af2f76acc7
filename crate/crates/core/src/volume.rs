//! Dilogarithm, Bloch–Wigner function, ideal-tetrahedron volumes and the
//! L²-torsion constant.
//!
//! `Li₂` uses the principal branch with cut `[1, ∞)`.  The Bloch–Wigner
//! function is the standard single-valued combination
//! `D(z) = Im Li₂(z) + arg(1−z)·log|z|`; it satisfies the five-term
//! relation and equals the volume of the ideal tetrahedron with cross
//! ratio `z`.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum VolumeError {
    #[error("shape {index} has non-positive imaginary part {im}")]
    NonPositiveImaginary { index: usize, im: f64 },
    #[error("shape list is empty")]
    Empty,
    #[error("bad shape syntax '{0}', expected re,im pairs separated by ';'")]
    Parse(String),
}

const PI: f64 = std::f64::consts::PI;
const PI2_6: f64 = PI * PI / 6.0;

/// Bernoulli numbers B₀, B₁, B₂, B₄, …, B₂₂ (odd ones beyond B₁ vanish).
const BERNOULLI_EVEN: [f64; 12] = [
    1.0,
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
];

fn dilog_series(z: Complex64) -> Complex64 {
    // |z| ≤ 1/2: Σ z^n/n² converges geometrically
    let mut acc = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    for n in 1..=60u32 {
        pow *= z;
        acc += pow / (n as f64 * n as f64);
        if pow.norm() < 1e-17 {
            break;
        }
    }
    acc
}

fn dilog_bernoulli(z: Complex64) -> Complex64 {
    // Li₂(z) = Σ_k B_k u^{k+1}/(k+1)!, u = −log(1−z); converges for |u| < 2π
    let u = -(Complex64::new(1.0, 0.0) - z).ln();
    let usq = u * u;
    // k = 0 and k = 1 terms, then even k only
    let mut acc = u - usq / 4.0;
    let mut upow = u; // u^{2m-1} for m = 1..
    let mut factorial = 1.0; // (2m)! running," (k+1)! with k = 2m
    for (m, &b) in BERNOULLI_EVEN.iter().enumerate().skip(1) {
        upow *= usq;
        factorial *= (2 * m) as f64 * (2 * m + 1) as f64;
        let term = b * upow / factorial;
        acc += term;
        if term.norm() < 1e-17 {
            break;
        }
    }
    acc
}

/// The dilogarithm `Li₂(z) = Σ z^n/n²`, principal branch, absolute
/// accuracy around `1e−13`.
pub fn dilog(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if z.norm() <= 1e-300 {
        return Complex64::new(0.0, 0.0);
    }
    if (z - one).norm() <= 1e-300 {
        return Complex64::new(PI2_6, 0.0);
    }
    if z.norm() <= 0.5 {
        return dilog_series(z);
    }
    if z.norm() > 1.0 {
        // inversion: Li₂(z) = −Li₂(1/z) − π²/6 − ½ log²(−z)
        let log_mz = (-z).ln();
        return -dilog(one / z) - Complex64::new(PI2_6, 0.0) - 0.5 * log_mz * log_mz;
    }
    if z.re > 0.5 {
        // reflection: Li₂(z) = π²/6 − log(z)log(1−z) − Li₂(1−z)
        return Complex64::new(PI2_6, 0.0) - z.ln() * (one - z).ln() - dilog(one - z);
    }
    // |z| ∈ (½, 1], Re z ≤ ½: here |log(1−z)| ≤ 1.4 and the Bernoulli
    // series converges to machine precision within the table
    dilog_bernoulli(z)
}

/// The Bloch–Wigner function `D(z) = Im Li₂(z) + arg(1−z)·log|z|`.
/// Continuous on `ℂ`, vanishing on the real line; the singular inputs
/// `{0, 1}` return the continuous value 0.
pub fn bloch_wigner(z: Complex64) -> f64 {
    if z.im == 0.0 {
        // real axis: D vanishes identically (0 and 1 by continuity)
        return 0.0;
    }
    let one = Complex64::new(1.0, 0.0);
    dilog(z).im + (one - z).arg() * z.norm().ln()
}

/// Volume of the positively oriented ideal tetrahedron with cross ratio
/// `z`; degenerate (real) shapes give 0.
pub fn tetra_volume(z: Complex64) -> f64 {
    bloch_wigner(z)
}

/// A list of tetrahedron cross ratios, each with positive imaginary part.
#[derive(Debug, Clone)]
pub struct ShapeList {
    shapes: Vec<Complex64>,
}

impl ShapeList {
    pub fn new(shapes: Vec<Complex64>) -> Result<Self, VolumeError> {
        if shapes.is_empty() {
            return Err(VolumeError::Empty);
        }
        for (index, z) in shapes.iter().enumerate() {
            if z.im <= 0.0 || z.im.is_nan() {
                return Err(VolumeError::NonPositiveImaginary { index, im: z.im });
            }
        }
        Ok(Self { shapes })
    }

    /// Parse `re,im;re,im;...`.
    pub fn parse(text: &str) -> Result<Self, VolumeError> {
        let mut shapes = Vec::new();
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let nums: Vec<&str> = part.split(',').map(str::trim).collect();
            if nums.len() != 2 {
                return Err(VolumeError::Parse(part.to_owned()));
            }
            let re: f64 = nums[0]
                .parse()
                .map_err(|_| VolumeError::Parse(part.to_owned()))?;
            let im: f64 = nums[1]
                .parse()
                .map_err(|_| VolumeError::Parse(part.to_owned()))?;
            shapes.push(Complex64::new(re, im));
        }
        Self::new(shapes)
    }

    pub fn shapes(&self) -> &[Complex64] {
        &self.shapes
    }
}

/// Total volume `Σ D(z_i)` over the shape list.
pub fn manifold_volume(s: &ShapeList) -> f64 {
    s.shapes().iter().map(|&z| tetra_volume(z)).sum()
}

/// `log τ⁽²⁾(X,ρ) = r·vol(X)/(6π)` for `d = 3`.
pub fn l2_torsion_log(r: u32, vol: f64) -> f64 {
    r as f64 * vol / (6.0 * PI)
}

/// The `d = 3` companion relation: the constant term of the logarithmic
/// derivative at the origin equals `−18 · log τ⁽²⁾`.
pub const L2_TORSION_C1_FACTOR: f64 = -18.0;
