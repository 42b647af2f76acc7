#![allow(dead_code)] // each test target uses a subset

//! Shared oracles for the integration suites, kept independent of the
//! implementation paths they check.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::Rng;

use ruelle_core::foxcalc::TwistData;
use ruelle_core::laurent::{LaurentMatrix, LaurentPoly};
use ruelle_core::presentations::{Presentation, Word};

/// Determinant by Laplace cofactor expansion along the first row, using
/// only exact Laurent-polynomial arithmetic.  Exponential in the size and
/// only fit for oracle duty.
pub fn cofactor_det(m: &LaurentMatrix) -> LaurentPoly {
    let n = m.rows();
    assert_eq!(n, m.cols(), "cofactor oracle needs a square matrix");
    if n == 0 {
        return LaurentPoly::one();
    }
    if n == 1 {
        return m.entry(0, 0).clone();
    }
    let mut acc = LaurentPoly::zero();
    for j in 0..n {
        let entry = m.entry(0, j);
        if entry.is_zero() {
            continue;
        }
        let minor = LaurentMatrix::from_fn(n - 1, n - 1, |r, c| {
            let col = if c < j { c } else { c + 1 };
            m.entry(r + 1, col).clone()
        });
        let term = entry.mul(&cofactor_det(&minor));
        if j % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    acc
}

pub fn random_word(rng: &mut StdRng, gens: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_letters((0..len).map(|_| (rng.gen_range(0..gens), if rng.gen() { 1i8 } else { -1 })))
}

fn random_unitary(rng: &mut StdRng, r: usize) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(r, r, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    m.qr().q()
}

/// A random Wirtinger presentation together with a unitary twist that
/// respects its relators.
///
/// Every relator has the meridian shape `x_j = w x_i w⁻¹` with `i < j`, so
/// picking one unitary image `U₀` and conjugating along the relator tree
/// yields a genuine representation of the presented group; arbitrary
/// generator images would break `Φ(r) = I` and with it `∂₂·∂₁ = 0`.
pub fn random_wirtinger_with_twist(
    rng: &mut StdRng,
    max_gens: usize,
    max_rank: usize,
) -> (Presentation, TwistData) {
    let gens = rng.gen_range(2..=max_gens.max(2));
    let rank = rng.gen_range(1..=max_rank.max(1));
    let mut relators = Vec::new();
    let mut conjugators: Vec<(usize, Word)> = Vec::new();
    for j in 1..gens {
        let i = rng.gen_range(0..j);
        let w = {
            let len = rng.gen_range(0..6);
            Word::from_letters(
                (0..len).map(|_| (rng.gen_range(0..j), if rng.gen() { 1i8 } else { -1 })),
            )
        };
        // relator  w x_i w⁻¹ x_j⁻¹
        let relator = w
            .multiply(&Word::generator(i))
            .multiply(&w.inverse())
            .multiply(&Word::letter(j, -1));
        relators.push(relator);
        conjugators.push((i, w));
    }
    let names: Vec<String> = (0..gens).map(|g| format!("g{g}")).collect();
    let p = Presentation::new(names, relators, true).expect("construction is wirtinger-valid");

    let twist = if rank == 1 {
        let xi = Complex64::from_polar(1.0, rng.gen_range(0.1..6.0));
        TwistData::character(xi).unwrap()
    } else {
        let mut images: Vec<DMatrix<Complex64>> = vec![random_unitary(rng, rank)];
        for (i, w) in &conjugators {
            // ρ(x_j) = ρ(w) ρ(x_i) ρ(w)⁻¹, with ρ(w) built from the images
            // fixed so far
            let mut acc = DMatrix::identity(rank, rank);
            for &(g, e) in w.letters() {
                if e > 0 {
                    acc *= &images[g];
                } else {
                    acc *= images[g].adjoint();
                }
            }
            let img = &acc * &images[*i] * acc.adjoint();
            images.push(img);
        }
        TwistData::matrices(images).unwrap()
    };
    (p, twist)
}
