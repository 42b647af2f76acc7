//! Truncated evaluation of the Ruelle L-function from a geodesic length
//! spectrum, the `S_j`-factorisation and the functional-equation residual.
//!
//! Two evaluation paths are exposed and must agree on consistent data:
//!
//! * factorisation: `log R = Σ_j (−1)^{j+1} log S_j(z+j)` with
//!   `log S_j(z) = −Σ_γ (α_j(γ)/l(γ)) e^{−z l(γ)}`;
//! * direct: `log R = Σ_γ (Tr ρ(γ)/μ(γ)) e^{−z l(γ)}`, which expects every
//!   power of a primitive as its own row.  Reconstructing `Tr ρ(γ₀^k)` from
//!   `Tr ρ(γ₀)` alone is only possible for rank 1 (`ξ^k`), so the file
//!   format requires powers as explicit rows.

use num_complex::Complex64;
use thiserror::Error;

use crate::traceformula::FuncEqReport;

#[derive(Debug, Error, PartialEq)]
pub enum SpectrumError {
    #[error("entry {index}: primitive length {l0} must be positive")]
    NonPositiveLength { index: usize, l0: f64 },
    #[error("entry {index}: power {power} must be at least 1")]
    BadPower { index: usize, power: u32 },
    #[error("entry {index}: expected {expected} holonomy angles, found {found}")]
    AngleCount {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry {index}: |Tr ρ| = {norm:.6} exceeds the rank bound {rank}")]
    TraceBound { index: usize, norm: f64, rank: usize },
    #[error("entry {index}: length {length:.6} exceeds the cutoff {cutoff}")]
    BeyondCutoff {
        index: usize,
        length: f64,
        cutoff: f64,
    },
    #[error("sigma index {j} out of range 0..={top}")]
    SigmaIndex { j: usize, top: usize },
    #[error("spectrum file: {0}")]
    Parse(String),
}

/// One hyperbolic conjugacy class: a primitive of length `l0` raised to the
/// `power`-th multiple, with the holonomy angles of `m_γ ∈ SO(2n)` and the
/// twisted trace `Tr ρ(γ)`.
#[derive(Debug, Clone)]
pub struct GeodesicEntry {
    pub l0: f64,
    pub power: u32,
    pub thetas: Vec<f64>,
    pub trace_rho: Complex64,
}

impl GeodesicEntry {
    /// `l(γ) = μ(γ) · l(γ₀)`.
    pub fn length(&self) -> f64 {
        self.power as f64 * self.l0
    }
}

#[derive(Debug, Clone)]
pub struct LengthSpectrum {
    /// `d = 2n + 1`.
    pub n: usize,
    pub rank: usize,
    pub cutoff: f64,
    entries: Vec<GeodesicEntry>,
}

impl LengthSpectrum {
    pub fn new(
        n: usize,
        rank: usize,
        mut entries: Vec<GeodesicEntry>,
        cutoff: f64,
    ) -> Result<Self, SpectrumError> {
        for (index, e) in entries.iter().enumerate() {
            if e.l0 <= 0.0 || e.l0.is_nan() {
                return Err(SpectrumError::NonPositiveLength { index, l0: e.l0 });
            }
            if e.power < 1 {
                return Err(SpectrumError::BadPower {
                    index,
                    power: e.power,
                });
            }
            if e.thetas.len() != n {
                return Err(SpectrumError::AngleCount {
                    index,
                    expected: n,
                    found: e.thetas.len(),
                });
            }
            let norm = e.trace_rho.norm();
            if norm > rank as f64 + 1e-9 {
                return Err(SpectrumError::TraceBound { index, norm, rank });
            }
            if e.length() > cutoff + 1e-12 {
                return Err(SpectrumError::BeyondCutoff {
                    index,
                    length: e.length(),
                    cutoff,
                });
            }
        }
        entries.sort_by(|a, b| a.length().partial_cmp(&b.length()).unwrap());
        Ok(Self {
            n,
            rank,
            cutoff,
            entries,
        })
    }

    pub fn empty(n: usize, rank: usize) -> Self {
        Self {
            n,
            rank,
            cutoff: 0.0,
            entries: Vec::new(),
        }
    }

    pub fn entries(&self) -> &[GeodesicEntry] {
        &self.entries
    }

    /// Parse the CSV format: a literal `n,r,cutoff` header line, a line of
    /// values, then one `l0,k,theta1[,theta2...],re_tr,im_tr` row per class.
    pub fn parse_csv(text: &str) -> Result<Self, SpectrumError> {
        let mut lines = text
            .lines()
            .map(|l| match l.find('#') {
                Some(pos) => l[..pos].trim(),
                None => l.trim(),
            })
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| SpectrumError::Parse("empty file".to_owned()))?;
        if header.split(',').map(str::trim).collect::<Vec<_>>() != ["n", "r", "cutoff"] {
            return Err(SpectrumError::Parse(format!(
                "expected header 'n,r,cutoff', found '{header}'"
            )));
        }
        let meta = lines
            .next()
            .ok_or_else(|| SpectrumError::Parse("missing n,r,cutoff values".to_owned()))?;
        let fields: Vec<&str> = meta.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(SpectrumError::Parse(format!(
                "metadata row needs 3 fields, found {}",
                fields.len()
            )));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|e| SpectrumError::Parse(format!("n: {e}")))?;
        let rank: usize = fields[1]
            .parse()
            .map_err(|e| SpectrumError::Parse(format!("r: {e}")))?;
        let cutoff: f64 = fields[2]
            .parse()
            .map_err(|e| SpectrumError::Parse(format!("cutoff: {e}")))?;
        let mut entries = Vec::new();
        for (row, line) in lines.enumerate() {
            let nums: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| SpectrumError::Parse(format!("row {row}: {e}")))?;
            if nums.len() != 4 + n {
                return Err(SpectrumError::Parse(format!(
                    "row {row}: expected {} fields, found {}",
                    4 + n,
                    nums.len()
                )));
            }
            entries.push(GeodesicEntry {
                l0: nums[0],
                power: nums[1] as u32,
                thetas: nums[2..2 + n].to_vec(),
                trace_rho: Complex64::new(nums[2 + n], nums[3 + n]),
            });
        }
        Self::new(n, rank, entries, cutoff)
    }
}

/// `Tr σ_j(m_γ)`: the j-th elementary symmetric polynomial of the `2n`
/// eigenvalues `{e^{±iθ_i}}`, which is real by conjugate pairing.
pub fn sigma_trace(thetas: &[f64], j: usize) -> Result<f64, SpectrumError> {
    let top = 2 * thetas.len();
    if j > top {
        return Err(SpectrumError::SigmaIndex { j, top });
    }
    // expand Π_i (1 + 2cosθ_i x + x²)
    let mut coeffs = vec![0.0; top + 1];
    coeffs[0] = 1.0;
    let mut used = 0;
    for &theta in thetas {
        let c = 2.0 * theta.cos();
        let mut next = vec![0.0; top + 1];
        for deg in 0..=used {
            let a = coeffs[deg];
            if a == 0.0 {
                continue;
            }
            next[deg] += a;
            next[deg + 1] += a * c;
            next[deg + 2] += a;
        }
        coeffs = next;
        used += 2;
    }
    Ok(coeffs[j])
}

/// `Δ(γ) = det(I_{2n} − e^{−l} m_γ) = Π_i (1 − 2e^{−l}cosθ_i + e^{−2l})`.
pub fn delta_gamma(e: &GeodesicEntry) -> f64 {
    let x = (-e.length()).exp();
    e.thetas
        .iter()
        .map(|t| 1.0 - 2.0 * x * t.cos() + x * x)
        .product()
}

/// `α_j(γ) = Tr ρ(γ) · Tr σ_j(m_γ) · l(γ₀) / Δ(γ)`.
pub fn weight_alpha(e: &GeodesicEntry, j: usize) -> Result<Complex64, SpectrumError> {
    let sigma = sigma_trace(&e.thetas, j)?;
    Ok(e.trace_rho * sigma * e.l0 / delta_gamma(e))
}

/// `s_j(z) = Σ_γ α_j(γ) e^{−z l(γ)}`, truncated at the cutoff.
pub fn s_j(spec: &LengthSpectrum, j: usize, z: Complex64) -> Result<Complex64, SpectrumError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for e in spec.entries() {
        acc += weight_alpha(e, j)? * (-z * e.length()).exp();
    }
    Ok(acc)
}

/// `log S_j(z) = −Σ_γ (α_j(γ)/l(γ)) e^{−z l(γ)}`.
pub fn log_s_j(spec: &LengthSpectrum, j: usize, z: Complex64) -> Result<Complex64, SpectrumError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for e in spec.entries() {
        acc -= weight_alpha(e, j)? / e.length() * (-z * e.length()).exp();
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalPath {
    /// `Σ_j (−1)^{j+1} log S_j(z+j)`.
    Factorization,
    /// `Σ_γ (Tr ρ(γ)/μ(γ)) e^{−z l(γ)}`.
    Direct,
}

/// `log R_X(z,ρ)` over the truncated spectrum.
pub fn ruelle_log(
    spec: &LengthSpectrum,
    z: Complex64,
    path: EvalPath,
) -> Result<Complex64, SpectrumError> {
    match path {
        EvalPath::Factorization => {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=2 * spec.n {
                let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
                acc += sign * log_s_j(spec, j, z + j as f64)?;
            }
            Ok(acc)
        }
        EvalPath::Direct => {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in spec.entries() {
                acc += e.trace_rho / e.power as f64 * (-z * e.length()).exp();
            }
            Ok(acc)
        }
    }
}

/// `log R(z) − log R(−z) − [prefactor·X(z) + 4Σ_j(−1)^j δ·z]`.
///
/// On a truncated spectrum this does not vanish; it is a diagnostic whose
/// magnitude should shrink as the cutoff grows on genuine spectra.
pub fn funceq_residual(
    spec: &LengthSpectrum,
    report: &FuncEqReport,
    z: Complex64,
) -> Result<Complex64, SpectrumError> {
    let plus = ruelle_log(spec, z, EvalPath::Factorization)?;
    let minus = ruelle_log(spec, -z, EvalPath::Factorization)?;
    let expected = report.funceq_exponent(z);
    Ok(plus - minus - expected)
}
