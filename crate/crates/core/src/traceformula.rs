//! Exact-rational Plancherel coefficients, Laplace-transform identities,
//! the functional-equation polynomial `χ(z)` and the coefficient `c₁`.
//!
//! Every polynomial here lives over `ℚ` with `π` carried as a symbolic tag:
//! a `prefactor` field multiplies `vol/π`.  Conventions for the cusp term
//! vary between `Σ(−1)^j δ` and `Σ(−1)^n δ`; this module fixes `(−1)^j`,
//! the only choice under which the `n = 1` cancellation matches the
//! unconditional constant `c₁ = −3r·vol/π`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::quad::{self, QuadError};
use crate::ratpoly::{binomial, double_factorial_odd, factorial, rat, rat_int, RatPoly};
use crate::ruelle::{s_j, weight_alpha, LengthSpectrum, SpectrumError};

#[derive(Debug, Error)]
pub enum TraceFormulaError {
    #[error("index {j} out of range 0..={top}")]
    IndexOutOfRange { j: usize, top: usize },
    #[error("n must be at least 1")]
    BadRank,
    #[error("order formula needs {expected} cohomology inputs, found {found}")]
    OrderInputs { expected: usize, found: usize },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// The integer table `γ_{j,k}` of `q_j(λ) = Σ_k γ_{j,k} λ^{2k}`.
#[derive(Debug, Clone)]
pub struct GammaTable {
    pub n: usize,
    gamma: Vec<Vec<BigInt>>,
}

impl GammaTable {
    pub fn entry(&self, j: usize, k: usize) -> &BigInt {
        &self.gamma[j][k]
    }

    /// `q_j` as a polynomial in `λ` (even, monic of degree `2n`).
    pub fn q_poly(&self, j: usize) -> RatPoly {
        let mut coeffs = vec![BigRational::zero(); 2 * self.n + 1];
        for (k, g) in self.gamma[j].iter().enumerate() {
            coeffs[2 * k] = BigRational::from_integer(g.clone());
        }
        RatPoly::from_coeffs(coeffs)
    }
}

/// Expand `q_j(λ) = Π_{k=1}^{j}(λ²+(n−k+1)²) · Π_{k=j+1}^{n}(λ²+(n−k)²)`
/// exactly for `0 ≤ j ≤ n`.
pub fn gamma_coeffs(n: usize) -> Result<GammaTable, TraceFormulaError> {
    if n == 0 {
        return Err(TraceFormulaError::BadRank);
    }
    let mut gamma = Vec::with_capacity(n + 1);
    for j in 0..=n {
        // coefficients in μ = λ²
        let mut poly = vec![BigInt::one()];
        let mut mul_factor = |shift: i64| {
            let sq = BigInt::from(shift * shift);
            let mut next = vec![BigInt::zero(); poly.len() + 1];
            for (deg, c) in poly.iter().enumerate() {
                next[deg + 1] += c;
                next[deg] += c * &sq;
            }
            poly = next;
        };
        for k in 1..=j {
            mul_factor((n - k + 1) as i64);
        }
        for k in (j + 1)..=n {
            mul_factor((n - k) as i64);
        }
        gamma.push(poly);
    }
    Ok(GammaTable { n, gamma })
}

/// The Plancherel polynomial for `σ_j`, as an exact rational polynomial in
/// `λ` together with the implicit `1/π` tag.
#[derive(Debug, Clone)]
pub struct PlancherelPoly {
    pub n: usize,
    pub j: usize,
    /// `P_j(λ) · π`: the rational polynomial part.
    pub poly_over_pi: RatPoly,
}

impl PlancherelPoly {
    pub fn eval(&self, lambda: f64) -> f64 {
        self.poly_over_pi.eval_f64(lambda) / std::f64::consts::PI
    }
}

/// `P_j = 4^{1−n}/((2n−1)!!²π) · C(2n,j) · q_j`; indices above `n` use the
/// isomorphism `σ_j ≅ σ_{2n−j}`.
pub fn plancherel_poly(n: usize, j: usize) -> Result<PlancherelPoly, TraceFormulaError> {
    if n == 0 {
        return Err(TraceFormulaError::BadRank);
    }
    if j > 2 * n {
        return Err(TraceFormulaError::IndexOutOfRange { j, top: 2 * n });
    }
    let jq = j.min(2 * n - j);
    let table = gamma_coeffs(n)?;
    let dfo = double_factorial_odd(n as u64);
    let scale = BigRational::new(binomial(2 * n as u64, j as u64), &dfo * &dfo)
        * BigRational::new(BigInt::one(), BigInt::from(4).pow(n as u32 - 1));
    Ok(PlancherelPoly {
        n,
        j,
        poly_over_pi: table.q_poly(jq).scale(&scale),
    })
}

/// Closed form of `L(∫ e^{−tλ²} λ^{2k} dλ)(z) = (−1)^k · 2π · z^{2k}`,
/// entire in `z`.
pub fn laplace_gaussian_moment(k: usize, z: f64) -> f64 {
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * 2.0 * std::f64::consts::PI * z.powi(2 * k as i32)
}

/// Companion numeric route for `laplace_gaussian_moment`, valid at `z > 0`.
///
/// The defining double integral reduces to `2z·√π(2k−1)!!/2^k · I(s)` with
/// `I(s) = ∫₀^∞ e^{−tz²} t^{s−1} dt` at `s = ½ − k`, which diverges at the
/// origin for `k ≥ 1`; the analytic continuation is realised by subtracting
/// the first `k+1` Taylor terms of `e^{−tz²}` on `(0,1]` and integrating
/// them exactly.
pub fn laplace_gaussian_moment_quadrature(k: usize, z: f64) -> Result<f64, TraceFormulaError> {
    assert!(z > 0.0, "validation mode needs z > 0");
    let s = 0.5 - k as f64;
    let zsq = z * z;
    let terms = k + 1;
    // Taylor remainder e^{−x} − Σ_{m<terms} (−x)^m/m!, cancellation-safe
    let remainder = move |x: f64| -> f64 {
        if x <= 1.0 {
            let mut acc = 0.0;
            let mut term = (-x).powi(terms as i32) / factorial(terms as u64).to_f64().unwrap();
            for m in terms..(terms + 45) {
                acc += term;
                term *= -x / (m + 1) as f64;
            }
            acc
        } else {
            let mut partial = 0.0;
            let mut term = 1.0;
            for m in 0..terms {
                partial += term;
                term *= -x / (m + 1) as f64;
            }
            (-x).exp() - partial
        }
    };
    // ∫₀^1 remainder(tz²) t^{s−1} dt, smoothed by t = u²
    let inner = quad::integrate(
        move |u: f64| {
            if u <= 0.0 {
                return 0.0;
            }
            2.0 * remainder(u * u * zsq) * u.powf(2.0 * s - 1.0)
        },
        0.0,
        1.0,
        1e-11,
    )?;
    // exact integrals of the subtracted monomials
    let mut poles = 0.0;
    let mut coeff = 1.0;
    for m in 0..terms {
        poles += coeff / (s + m as f64);
        coeff *= -zsq / (m + 1) as f64;
    }
    // tail over [1, T] with the exponential underflow cutoff
    let t_max = (2.0f64).max(710.0 / zsq);
    let tail = quad::integrate(
        move |t: f64| (-t * zsq).exp() * t.powf(s - 1.0),
        1.0,
        t_max,
        1e-11,
    )?;
    let continued = inner.value + poles + tail.value;
    let dfo = double_factorial_odd(k as u64).to_f64().unwrap();
    Ok(2.0 * z * std::f64::consts::PI.sqrt() * dfo / 2f64.powi(k as i32) * continued)
}

/// Two-sided check of the hyperbolic Laplace identity
/// `L(e^{tc_j²}h_j)(z) = s_j(z+n)`: the left side by adaptive quadrature of
/// the explicit heat sum, the right by direct summation.  Returns the
/// absolute difference.
pub fn heat_to_geodesic_check(
    spec: &LengthSpectrum,
    j: usize,
    z: f64,
) -> Result<f64, TraceFormulaError> {
    let n = spec.n;
    if j > 2 * n {
        return Err(TraceFormulaError::IndexOutOfRange { j, top: 2 * n });
    }
    // data per entry: (α_j(γ), l(γ)); the e^{tc_j²} factor cancels the
    // tc_j² term inside h_j
    let mut data = Vec::with_capacity(spec.entries().len());
    for e in spec.entries() {
        data.push((weight_alpha(e, j)?, e.length()));
    }
    let component = |im: bool| {
        let data = data.clone();
        move |t: f64| {
            let mut acc = 0.0;
            let pref = (4.0 * std::f64::consts::PI * t).sqrt().recip();
            for &(alpha, l) in &data {
                let a = if im { alpha.im } else { alpha.re };
                if a == 0.0 {
                    continue;
                }
                let exponent = -(l * l) / (4.0 * t) - (n as f64) * l - t * z * z;
                acc += a * pref * exponent.exp();
            }
            2.0 * z * acc
        }
    };
    let lhs = Complex64::new(
        quad::integrate_zero_inf(component(false), 1e-10)?.value,
        quad::integrate_zero_inf(component(true), 1e-10)?.value,
    );
    let rhs = s_j(spec, j, Complex64::new(z + n as f64, 0.0))?;
    Ok((lhs - rhs).norm())
}

/// Everything the functional equation needs, exact where possible.
#[derive(Debug, Clone)]
pub struct FuncEqReport {
    pub n: usize,
    pub r: u32,
    pub vol: f64,
    pub delta: f64,
    /// `χ(z)`, an even polynomial with integer coefficients.
    pub chi: RatPoly,
    /// `X(z) = ∫₀^z χ`, odd with `X(0) = 0`.
    pub x_poly: RatPoly,
    /// `4^{1−n} r /(2n−1)!!²`; the full prefactor is `prefactor · vol/π`.
    pub prefactor: BigRational,
    /// Exact coefficient of `vol/π` in `c₁`, i.e. `½·prefactor·χ(0)`.
    pub c1_vol_coeff: BigRational,
    /// Exact coefficient of `δ` in `c₁`, i.e. `2·Σ_{j=0}^n(−1)^j`.
    pub c1_delta_coeff: BigRational,
    pub c1: f64,
    pub order_formula_inputs: Vec<u64>,
}

impl FuncEqReport {
    /// `prefactor · vol/π` as a double.
    pub fn prefactor_numeric(&self) -> f64 {
        self.prefactor.to_f64().unwrap() * self.vol / std::f64::consts::PI
    }

    /// The exponent `prefactor·X(z) + 4Σ_j(−1)^j δ·z` of the functional
    /// equation `R(z)/R(−z) = exp[…]`.
    pub fn funceq_exponent(&self, z: Complex64) -> Complex64 {
        let poly = self.x_poly.eval_complex(z) * self.prefactor_numeric();
        let alt = alternating_sum(self.n) as f64;
        poly + 4.0 * alt * self.delta * z
    }
}

/// `Σ_{j=0}^n (−1)^j`: 1 for even n, 0 for odd n.
fn alternating_sum(n: usize) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        0
    }
}

/// `χ(z) = Σ_{j=0}^n (−1)^j C(2n,j) Σ_k (−1)^k γ_{j,k}
///   {(z+j−n)^{2k} + (z−j+n)^{2k}}`, exact over `ℚ`.
pub fn chi_poly(n: usize) -> Result<RatPoly, TraceFormulaError> {
    let table = gamma_coeffs(n)?;
    let mut chi = RatPoly::zero();
    for j in 0..=n {
        let sign_j = if j % 2 == 0 { 1 } else { -1 };
        let binom = BigRational::from_integer(binomial(2 * n as u64, j as u64) * BigInt::from(sign_j));
        let mut inner = RatPoly::zero();
        let shift = j as i64 - n as i64;
        for k in 0..=n {
            let g = table.entry(j, k);
            if g.is_zero() {
                continue;
            }
            let sign_k = if k % 2 == 0 { 1 } else { -1 };
            let coeff = BigRational::from_integer(g * BigInt::from(sign_k));
            let plus = RatPoly::shifted_power(&rat_int(shift), 2 * k);
            let minus = RatPoly::shifted_power(&rat_int(-shift), 2 * k);
            inner = inner.add(&plus.add(&minus).scale(&coeff));
        }
        chi = chi.add(&inner.scale(&binom));
    }
    Ok(chi)
}

/// The rational prefactor `4^{1−n} r / (2n−1)!!²` multiplying `χ(z)`;
/// the remaining factor is `vol/π`.
pub fn chi_prefactor(n: usize, r: u32) -> BigRational {
    let dfo = double_factorial_odd(n as u64);
    BigRational::new(BigInt::from(r), &dfo * &dfo)
        * BigRational::new(BigInt::one(), BigInt::from(4).pow(n as u32 - 1))
}

/// `c₁ = ½·prefactor·χ(0)·vol/π + 2(Σ_j (−1)^j)·δ`.
pub fn c1(n: usize, r: u32, vol: f64, delta: f64) -> Result<f64, TraceFormulaError> {
    let report = funceq_report_checked(n, r, vol, delta)?;
    Ok(report.c1)
}

/// Assemble the full functional-equation report.
pub fn funceq_report_checked(
    n: usize,
    r: u32,
    vol: f64,
    delta: f64,
) -> Result<FuncEqReport, TraceFormulaError> {
    let chi = chi_poly(n)?;
    debug_assert!(chi.is_even());
    let x_poly = chi.integrate();
    let prefactor = chi_prefactor(n, r);
    let c1_vol_coeff = &prefactor * chi.coeff(0) * rat(1, 2);
    let c1_delta_coeff = rat_int(2 * alternating_sum(n));
    let c1 = c1_vol_coeff.to_f64().unwrap() * vol / std::f64::consts::PI
        + c1_delta_coeff.to_f64().unwrap() * delta;
    Ok(FuncEqReport {
        n,
        r,
        vol,
        delta,
        chi,
        x_poly,
        prefactor,
        c1_vol_coeff,
        c1_delta_coeff,
        c1,
        order_formula_inputs: Vec::new(),
    })
}

/// Infallible wrapper for `n ≥ 1` (panics on `n = 0`).
pub fn funceq_report(n: usize, r: u32, vol: f64, delta: f64) -> FuncEqReport {
    funceq_report_checked(n, r, vol, delta).expect("n >= 1")
}

/// Order of `R_X` at the origin: `2 Σ_{l=0}^{n−1} (−1)^l (n−l) h^{l+1}`.
pub fn order_at_origin(n: usize, h: &[u64]) -> Result<i64, TraceFormulaError> {
    if h.len() != n {
        return Err(TraceFormulaError::OrderInputs {
            expected: n,
            found: h.len(),
        });
    }
    let mut acc: i64 = 0;
    for (l, &hv) in h.iter().enumerate() {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        acc += sign * (n as i64 - l as i64) * hv as i64;
    }
    Ok(2 * acc)
}
