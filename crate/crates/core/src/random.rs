//! Seeded random matrices, points and polynomials.
//!
//! Every generator takes an explicit RNG. [`stream_rng`] derives independent, reproducible
//! streams from a master seed and an index, so parallel sampling gives the same results
//! regardless of scheduling.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::freealg::{Letter, NcPoly, Word};
use crate::mateval::MatrixPoint;

/// RNG for sample `index` under the master `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Gaussian orthogonal ensemble scaled by `1/√n`, so the spectrum stays of order one.
pub fn goe<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let scale = 1.0 / (n as f64).sqrt();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = rng.sample::<f64, _>(StandardNormal) * scale;
        for j in i + 1..n {
            let t = rng.sample::<f64, _>(StandardNormal) * scale * std::f64::consts::FRAC_1_SQRT_2;
            m[(i, j)] = t;
            m[(j, i)] = t;
        }
    }
    m
}

pub fn unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-3 {
            return v / norm;
        }
    }
}

/// Random point with GOE matrices and a unit vector.
pub fn point<R: Rng + ?Sized>(g: usize, n: usize, rng: &mut R) -> MatrixPoint {
    let x = (0..g).map(|_| goe(n, rng)).collect();
    MatrixPoint::new(x, unit_vector(n, rng)).expect("random point is valid")
}

fn random_word<R: Rng + ?Sized>(g: usize, len: usize, rng: &mut R) -> Word {
    Word::from_letters((0..len).map(|_| Letter::x(rng.random_range(0..g))))
}

/// Random symmetric polynomial of degree exactly `d` with small integer coefficients.
pub fn symmetric_poly<R: Rng + ?Sized>(g: usize, d: usize, rng: &mut R) -> NcPoly {
    loop {
        let mut q = NcPoly::zero(g);
        let terms = rng.random_range(1..=5);
        for _ in 0..terms {
            let len = rng.random_range(0..=d);
            let c = rng.random_range(-3..=3) as f64;
            q.add_term(random_word(g, len, rng), c);
        }
        let c = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        q.add_term(random_word(g, d, rng), c * rng.random_range(1..=3) as f64);
        let p = &q + &q.transpose();
        if p.degree() == Some(d) {
            return p;
        }
    }
}

/// Random polynomial (not necessarily symmetric) of degree at most `d`.
pub fn poly<R: Rng + ?Sized>(g: usize, d: usize, rng: &mut R) -> NcPoly {
    let mut p = NcPoly::zero(g);
    for _ in 0..rng.random_range(0..=6) {
        let len = rng.random_range(0..=d);
        let c = rng.random_range(-4..=4) as f64;
        p.add_term(random_word(g, len, rng), c);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = stream_rng(7, 3).random();
        let b: f64 = stream_rng(7, 3).random();
        let c: f64 = stream_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn generated_objects_are_valid() {
        let mut rng = stream_rng(1, 0);
        for d in 0..=5 {
            let p = symmetric_poly(2, d, &mut rng);
            assert!(p.is_symmetric());
            assert_eq!(p.degree(), Some(d));
        }
        let pt = point(3, 4, &mut rng);
        assert_eq!((pt.g(), pt.n()), (3, 4));
        assert!((pt.v().norm() - 1.0).abs() < 1e-12);
    }
}
