//! Twisted chain complexes, combinatorial Laplacians and the modified
//! Franz–Reidemeister torsion `τ* = exp(−½ ζ'_comb(0))`.
//!
//! Chains are column vectors here: `D_p` maps `C_p → C_{p−1}` and the chain
//! property reads `D_{p−1}·D_p = 0`.  The combinatorial Laplacian is
//! `Δ^p = D_{p+1}D_{p+1}* + D_p*D_p` with the codifferential the Hermitian
//! adjoint of the boundary.  Eigenvalues below `KERNEL_CUTOFF` count as
//! kernel; anything inside the guard band up to `GUARD_BAND` aborts instead
//! of silently misclassifying.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::foxcalc::{boundary_matrices, FoxError, TwistData};
use crate::presentations::Presentation;

pub const KERNEL_CUTOFF: f64 = 1e-9;
pub const GUARD_BAND: f64 = 1e-7;
const CHAIN_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum TorsionError {
    #[error("boundary D_{degree} is {rows}x{cols} but dims want {want_rows}x{want_cols}")]
    ShapeMismatch {
        degree: usize,
        rows: usize,
        cols: usize,
        want_rows: usize,
        want_cols: usize,
    },
    #[error("D_{degree_lower}·D_{degree} has entry of size {deviation:.3e}; not a chain complex")]
    NotChainComplex {
        degree: usize,
        degree_lower: usize,
        deviation: f64,
    },
    #[error("degree {0} out of range")]
    DegreeOutOfRange(usize),
    #[error("eigenvalue {0:.3e} falls in the kernel guard band ({KERNEL_CUTOFF:.0e}, {GUARD_BAND:.0e})")]
    IllConditioned(f64),
    #[error("period bases have sizes {0} and {1}")]
    BasisSizeMismatch(usize, usize),
    #[error("period matrix is singular")]
    SingularPeriod,
    #[error("chain complex file: {0}")]
    Parse(String),
    #[error(transparent)]
    Fox(#[from] FoxError),
}

/// A bounded complex of finite-dimensional complex vector spaces.
///
/// `dims[p]` is `dim C_p`; `boundaries[p]` is `D_{p+1}: C_{p+1} → C_p`
/// (there are `dims.len() − 1` boundary maps).
#[derive(Debug, Clone)]
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<DMatrix<Complex64>>,
}

impl ChainComplex {
    pub fn new(
        dims: Vec<usize>,
        boundaries: Vec<DMatrix<Complex64>>,
    ) -> Result<Self, TorsionError> {
        if boundaries.len() + 1 != dims.len() {
            return Err(TorsionError::Parse(format!(
                "{} dims need {} boundary maps, found {}",
                dims.len(),
                dims.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        for (p, d) in boundaries.iter().enumerate() {
            // D_{p+1}: C_{p+1} → C_p
            if d.nrows() != dims[p] || d.ncols() != dims[p + 1] {
                return Err(TorsionError::ShapeMismatch {
                    degree: p + 1,
                    rows: d.nrows(),
                    cols: d.ncols(),
                    want_rows: dims[p],
                    want_cols: dims[p + 1],
                });
            }
        }
        for p in 1..boundaries.len() {
            let prod = &boundaries[p - 1] * &boundaries[p];
            let dev = prod.iter().map(|c| c.norm()).fold(0.0, f64::max);
            if dev > CHAIN_TOL {
                return Err(TorsionError::NotChainComplex {
                    degree: p + 1,
                    degree_lower: p,
                    deviation: dev,
                });
            }
        }
        Ok(Self { dims, boundaries })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    /// `D_p: C_p → C_{p−1}`; zero-shaped outside `1..=top`.
    pub fn boundary(&self, p: usize) -> DMatrix<Complex64> {
        if p == 0 || p > self.top_degree() {
            let cols = self.dims.get(p).copied().unwrap_or(0);
            return DMatrix::zeros(0, cols);
        }
        self.boundaries[p - 1].clone()
    }

    /// Parse the chain-complex file format: a `dims: d0 d1 … dk` line, then
    /// for each `p ≥ 1` a `D<p>:` header followed by `d_{p−1}` rows of
    /// `2·d_p` reals (re/im pairs).
    pub fn parse(text: &str) -> Result<Self, TorsionError> {
        let mut lines = text
            .lines()
            .map(|l| match l.find('#') {
                Some(pos) => l[..pos].trim(),
                None => l.trim(),
            })
            .filter(|l| !l.is_empty());
        let dims_line = lines
            .next()
            .ok_or_else(|| TorsionError::Parse("empty file".to_owned()))?;
        let dims: Vec<usize> = dims_line
            .strip_prefix("dims:")
            .ok_or_else(|| TorsionError::Parse("expected 'dims:' line".to_owned()))?
            .split_whitespace()
            .map(|s| s.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| TorsionError::Parse(e.to_string()))?;
        if dims.is_empty() {
            return Err(TorsionError::Parse("dims list is empty".to_owned()));
        }
        let mut boundaries = Vec::new();
        for p in 1..dims.len() {
            let header = lines
                .next()
                .ok_or_else(|| TorsionError::Parse(format!("missing D{p}: header")))?;
            if header != format!("D{p}:") {
                return Err(TorsionError::Parse(format!(
                    "expected 'D{p}:', found '{header}'"
                )));
            }
            let (rows, cols) = (dims[p - 1], dims[p]);
            let mut m = DMatrix::zeros(rows, cols);
            for i in 0..rows {
                let row = lines
                    .next()
                    .ok_or_else(|| TorsionError::Parse(format!("D{p} row {i} missing")))?;
                let nums: Vec<f64> = row
                    .split_whitespace()
                    .map(|s| s.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| TorsionError::Parse(e.to_string()))?;
                if nums.len() != 2 * cols {
                    return Err(TorsionError::Parse(format!(
                        "D{p} row {i} needs {} reals, found {}",
                        2 * cols,
                        nums.len()
                    )));
                }
                for j in 0..cols {
                    m[(i, j)] = Complex64::new(nums[2 * j], nums[2 * j + 1]);
                }
            }
            boundaries.push(m);
        }
        Self::new(dims, boundaries)
    }
}

/// Build the 3-term knot complex `C₂ → C₁ → C₀` from a Wirtinger
/// presentation by specialising the Fox-calculus boundaries at `t = 1`.
pub fn complex_from_presentation(
    p: &Presentation,
    twist: &TwistData,
) -> Result<ChainComplex, TorsionError> {
    let (d2, d1) = boundary_matrices(p, twist)?;
    let one = Complex64::new(1.0, 0.0);
    // the Fox matrices act on row vectors; transpose for column convention
    let d1_col = d1.eval(one).transpose();
    let d2_col = d2.eval(one).transpose();
    let n = p.num_generators();
    let r = twist.rank();
    ChainComplex::new(vec![r, n * r, (n - 1) * r], vec![d1_col, d2_col])
}

/// `Δ^p = D_{p+1}D_{p+1}* + D_p*D_p`, Hermitian positive semidefinite.
pub fn comb_laplacian(c: &ChainComplex, p: usize) -> Result<DMatrix<Complex64>, TorsionError> {
    if p > c.top_degree() {
        return Err(TorsionError::DegreeOutOfRange(p));
    }
    let dim = c.dims()[p];
    let mut lap = DMatrix::zeros(dim, dim);
    if p < c.top_degree() {
        let up = c.boundary(p + 1);
        lap += &up * up.adjoint();
    }
    if p > 0 {
        let down = c.boundary(p);
        lap += down.adjoint() * down;
    }
    Ok(lap)
}

#[derive(Debug, Clone)]
pub struct TorsionReport {
    /// `dim ker Δ^p`, the twisted Betti numbers.
    pub betti: Vec<usize>,
    /// `Σ log λ` over the positive eigenvalues of `Δ^p`, per degree.
    pub per_degree_logdet: Vec<f64>,
    /// `log τ* = ½ Σ_p (−1)^p · p · per_degree_logdet[p]`.
    pub log_tau_star: f64,
}

impl TorsionReport {
    pub fn tau_star(&self) -> f64 {
        self.log_tau_star.exp()
    }

    pub fn is_acyclic(&self) -> bool {
        self.betti.iter().all(|&b| b == 0)
    }
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    // symmetrise away rounding before the Hermitian eigensolver
    let h = (m + m.adjoint()).scale(0.5);
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Combinatorial zeta route to the modified Franz–Reidemeister torsion.
pub fn torsion_star(c: &ChainComplex) -> Result<TorsionReport, TorsionError> {
    let mut betti = Vec::new();
    let mut per_degree_logdet = Vec::new();
    let mut log_tau = 0.0;
    for p in 0..=c.top_degree() {
        let lap = comb_laplacian(c, p)?;
        let mut kernel = 0usize;
        let mut logdet = 0.0;
        for lambda in hermitian_eigenvalues(&lap) {
            if lambda.abs() <= KERNEL_CUTOFF {
                kernel += 1;
            } else if lambda.abs() < GUARD_BAND {
                return Err(TorsionError::IllConditioned(lambda));
            } else {
                logdet += lambda.ln();
            }
        }
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        log_tau += 0.5 * sign * p as f64 * logdet;
        betti.push(kernel);
        per_degree_logdet.push(logdet);
    }
    Ok(TorsionReport {
        betti,
        per_degree_logdet,
        log_tau_star: log_tau,
    })
}

#[derive(Debug, Clone)]
pub struct PeriodMatrix {
    pub matrix: DMatrix<Complex64>,
    pub abs_det: f64,
}

/// Change of basis `ψ_i = Σ_j P_ij φ_j` between two bases of a harmonic
/// space, given in the coordinates of a common ambient space.
pub fn period_matrix(
    basis_l2: &[DVector<Complex64>],
    basis_big_l2: &[DVector<Complex64>],
) -> Result<PeriodMatrix, TorsionError> {
    if basis_l2.len() != basis_big_l2.len() {
        return Err(TorsionError::BasisSizeMismatch(
            basis_l2.len(),
            basis_big_l2.len(),
        ));
    }
    let h = basis_l2.len();
    if h == 0 {
        return Ok(PeriodMatrix {
            matrix: DMatrix::zeros(0, 0),
            abs_det: 1.0,
        });
    }
    let dim = basis_l2[0].len();
    for v in basis_l2.iter().chain(basis_big_l2) {
        if v.len() != dim {
            return Err(TorsionError::BasisSizeMismatch(v.len(), dim));
        }
    }
    // rows of F are the φ basis; solve S = P·F in the least-squares sense
    let f = DMatrix::from_fn(h, dim, |i, j| basis_l2[i][j]);
    let s = DMatrix::from_fn(h, dim, |i, j| basis_big_l2[i][j]);
    let gram = &f * f.adjoint();
    let rhs = &s * f.adjoint();
    let inv = gram
        .clone()
        .try_inverse()
        .ok_or(TorsionError::SingularPeriod)?;
    let p = rhs * inv;
    let det = p.clone().lu().determinant();
    if det.norm() <= KERNEL_CUTOFF {
        return Err(TorsionError::SingularPeriod);
    }
    Ok(PeriodMatrix {
        matrix: p,
        abs_det: det.norm(),
    })
}

/// `Per = Π_p |det P_p|^{(−1)^p}` over per-degree period determinants.
/// The acyclic case (no degrees) gives `Per = 1`.
pub fn period_alternating(abs_dets: &[(usize, f64)]) -> f64 {
    let mut acc = 1.0;
    for &(p, d) in abs_dets {
        if p % 2 == 0 {
            acc *= d;
        } else {
            acc /= d;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alexander::{acyclicity_check, alexander};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn figure_eight() -> Presentation {
        Presentation::parse("mode: wirtinger\ngens: a b\nrel: a B A b a B a b A B\n").unwrap()
    }

    fn fig8_complex() -> ChainComplex {
        let twist = TwistData::character(c(-1.0, 0.0)).unwrap();
        complex_from_presentation(&figure_eight(), &twist).unwrap()
    }

    #[test]
    fn figure_eight_dims_and_chain_property() {
        let cc = fig8_complex();
        assert_eq!(cc.dims(), &[1, 2, 1]);
        let prod = cc.boundary(1) * cc.boundary(2);
        assert!(prod.iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn laplacian_is_psd_with_kernel_betti() {
        let cc = fig8_complex();
        let report = torsion_star(&cc).unwrap();
        for p in 0..=cc.top_degree() {
            let lap = comb_laplacian(&cc, p).unwrap();
            let eigs = hermitian_eigenvalues(&lap);
            assert!(eigs.iter().all(|&l| l >= -1e-9));
            let kernel = eigs.iter().filter(|&&l| l.abs() <= KERNEL_CUTOFF).count();
            assert_eq!(kernel, report.betti[p]);
        }
        // cuspidal character: fully acyclic
        assert_eq!(report.betti, vec![0, 0, 0]);
    }

    #[test]
    fn zero_complex_laplacian_is_zero() {
        let cc = ChainComplex::new(vec![2], vec![]).unwrap();
        let lap = comb_laplacian(&cc, 0).unwrap();
        assert!(lap.iter().all(|v| v.norm() == 0.0));
        assert!(comb_laplacian(&cc, 1).is_err());
    }

    #[test]
    fn figure_eight_tau_star_matches_alexander_value() {
        let cc = fig8_complex();
        let report = torsion_star(&cc).unwrap();
        // τ* = |Δ_{K,ρ}(1)| = 2.5
        assert!((report.tau_star() - 2.5).abs() < 1e-6, "{}", report.tau_star());

        let twist = TwistData::character(c(-1.0, 0.0)).unwrap();
        let alex = alexander(&figure_eight(), &twist).unwrap();
        assert!(acyclicity_check(&alex));
        let r0 = alex.special_value.unwrap();
        let tau_sq = report.tau_star().powi(2);
        assert!((tau_sq - r0).abs() < 1e-6 * r0);
    }

    #[test]
    fn isolated_identity_boundary_gives_unit_torsion() {
        // 0 → C₁ → C₀ → 0 with D = I₁: Δ⁰ = Δ¹ = 1, τ* = 1
        let d = DMatrix::from_element(1, 1, c(1.0, 0.0));
        let cc = ChainComplex::new(vec![1, 1], vec![d]).unwrap();
        let report = torsion_star(&cc).unwrap();
        assert!((report.tau_star() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaling_boundaries_shifts_torsion_predictably() {
        // scaling every boundary of the knot complex by 2 multiplies each
        // positive eigenvalue by 4; with dims (1, 2, 1) and full rank,
        // log τ* changes by ½[−1·(#λ¹)·log4 + 2·(#λ²)·log4]
        let cc = fig8_complex();
        let base = torsion_star(&cc).unwrap();
        let scaled = ChainComplex::new(
            cc.dims().to_vec(),
            vec![cc.boundary(1).scale(2.0), cc.boundary(2).scale(2.0)],
        )
        .unwrap();
        let report = torsion_star(&scaled).unwrap();
        let log4 = 4.0f64.ln();
        let expected = base.log_tau_star + 0.5 * (-2.0 * log4 + 2.0 * 1.0 * log4);
        assert!((report.log_tau_star - expected).abs() < 1e-9);
    }

    #[test]
    fn tau_star_is_invariant_under_unitary_change_of_basis() {
        let cc = fig8_complex();
        let base = torsion_star(&cc).unwrap();
        let mut rng = StdRng::seed_from_u64(41);
        for _ in 0..5 {
            let u0 = crate::foxcalc::tests_support::random_unitary(&mut rng, 1);
            let u1 = crate::foxcalc::tests_support::random_unitary(&mut rng, 2);
            let u2 = crate::foxcalc::tests_support::random_unitary(&mut rng, 1);
            // conjugated boundaries: D₁' = U₀ D₁ U₁*, D₂' = U₁ D₂ U₂*
            let d1 = &u0 * cc.boundary(1) * u1.adjoint();
            let d2 = &u1 * cc.boundary(2) * u2.adjoint();
            let moved = ChainComplex::new(cc.dims().to_vec(), vec![d1, d2]).unwrap();
            let report = torsion_star(&moved).unwrap();
            assert!((report.log_tau_star - base.log_tau_star).abs() < 1e-8);
        }
    }

    #[test]
    fn betti_matches_rank_identity() {
        // betti_p = dim C_p − rank D_p − rank D_{p+1}
        let cc = fig8_complex();
        let report = torsion_star(&cc).unwrap();
        let rank = |m: &DMatrix<Complex64>| {
            if m.nrows() == 0 || m.ncols() == 0 {
                return 0;
            }
            m.clone()
                .svd(false, false)
                .singular_values
                .iter()
                .filter(|&&s| s > 1e-9)
                .count()
        };
        for p in 0..=cc.top_degree() {
            let down = rank(&cc.boundary(p));
            let up = if p < cc.top_degree() {
                rank(&cc.boundary(p + 1))
            } else {
                0
            };
            assert_eq!(report.betti[p], cc.dims()[p] - down - up);
        }
    }

    #[test]
    fn trivial_character_complex_has_betti0_one() {
        let p = Presentation::parse("mode: wirtinger\ngens: x y\nrel: x y x Y X Y\n").unwrap();
        let twist = TwistData::character(c(1.0, 0.0)).unwrap();
        let cc = complex_from_presentation(&p, &twist).unwrap();
        // both entries t−1 of D₁ vanish at t = 1
        assert!(cc.boundary(1).iter().all(|v| v.norm() < 1e-12));
        let report = torsion_star(&cc).unwrap();
        assert_eq!(report.betti[0], 1);
    }

    #[test]
    fn cuspidal_characters_kill_h0() {
        let p = figure_eight();
        for k in 1..8 {
            let xi = Complex64::from_polar(1.0, 0.7 * k as f64);
            let twist = TwistData::character(xi).unwrap();
            let cc = complex_from_presentation(&p, &twist).unwrap();
            let report = torsion_star(&cc).unwrap();
            assert_eq!(report.betti[0], 0);
        }
    }

    #[test]
    fn period_matrix_identity_and_scaling() {
        let e1 = DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let e2 = DVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let basis = vec![e1.clone(), e2.clone()];
        let p = period_matrix(&basis, &basis).unwrap();
        assert!((p.abs_det - 1.0).abs() < 1e-12);
        assert!((p.matrix[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(p.matrix[(0, 1)].norm() < 1e-12);

        let scaled: Vec<_> = basis.iter().map(|v| v.scale(3.0)).collect();
        let p = period_matrix(&basis, &scaled).unwrap();
        assert!((p.abs_det - 9.0).abs() < 1e-10);
    }

    #[test]
    fn acyclic_period_is_one() {
        let p = period_matrix(&[], &[]).unwrap();
        assert_eq!(p.abs_det, 1.0);
        assert_eq!(period_alternating(&[]), 1.0);
        let per = period_alternating(&[(0, 2.0), (1, 4.0)]);
        assert!((per - 0.5).abs() < 1e-12);
    }

    #[test]
    fn chain_complex_file_round_trip() {
        let text = "dims: 1 2 1\nD1:\n-2 0 -2 0\nD2:\n5 0\n-5 0\n";
        let cc = ChainComplex::parse(text).unwrap();
        assert_eq!(cc.dims(), &[1, 2, 1]);
        let report = torsion_star(&cc).unwrap();
        assert!((report.tau_star() - 2.5).abs() < 1e-9);
    }

    #[test]
    fn guard_band_eigenvalue_is_an_error() {
        // D = [1e−4]: Δ eigenvalues 1e−8 sit inside (1e−9, 1e−7)
        let d = DMatrix::from_element(1, 1, c(1e-4, 0.0));
        let cc = ChainComplex::new(vec![1, 1], vec![d]).unwrap();
        assert!(matches!(
            torsion_star(&cc),
            Err(TorsionError::IllConditioned(_))
        ));
    }

    #[test]
    fn non_chain_complex_is_rejected() {
        let d1 = DMatrix::from_row_slice(1, 2, &[c(1.0, 0.0), c(0.0, 0.0)]);
        let d2 = DMatrix::from_row_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]);
        let err = ChainComplex::new(vec![1, 2, 1], vec![d1, d2]).unwrap_err();
        assert!(matches!(err, TorsionError::NotChainComplex { .. }));
    }
}
