//! Concrete invariants of Ruelle L-functions on hyperbolic manifolds.
//!
//! The crate is organised around independent computation routes that are
//! cross-checked against each other:
//!
//! * [`presentations`] — finitely presented groups, free-group words and
//!   Wirtinger presentations of knot groups.
//! * [`foxcalc`] — group-ring arithmetic, Fox free differential calculus and
//!   the specialisation `Φ = ε ⊗ ρ` into Laurent-polynomial matrices.
//! * [`laurent`] — the Laurent-polynomial algebra `Λ = ℂ[t, t⁻¹]`, matrices
//!   over it and determinants by evaluation–interpolation.
//! * [`alexander`] — the twisted Alexander function `Δ₁(t)/Δ₀(t)` and the
//!   special value at the origin.
//! * [`torsion`] — twisted chain complexes, combinatorial Laplacians and the
//!   modified Franz–Reidemeister torsion.
//! * [`traceformula`] — exact-rational Plancherel polynomials, the
//!   functional-equation polynomial `χ(z)` and the coefficient `c₁`.
//! * [`epstein`] — Epstein L-functions of rank-2 character lattices and the
//!   cusp constant `δ(X,ρ)`.
//! * [`ruelle`] — truncated geodesic-product evaluation of `R_X(z,ρ)` and its
//!   `S_j`-factorisation.
//! * [`volume`] — dilogarithm, Bloch–Wigner function, ideal-tetrahedron
//!   volumes and the L²-torsion constant.
//! * [`spectral`] — closed-form heat-trace/Mellin identities on synthetic
//!   spectra.

pub mod alexander;
pub mod epstein;
pub mod foxcalc;
pub mod laurent;
pub mod presentations;
pub mod quad;
pub mod ratpoly;
pub mod ruelle;
pub mod spectral;
pub mod torsion;
pub mod traceformula;
pub mod volume;

mod cgamma;

/// Modulus below which sparse coefficients are dropped.
pub const EPS_TRIM: f64 = 1e-12;
