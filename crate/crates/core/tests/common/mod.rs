#![allow(dead_code)]

use nalgebra::DMatrix;
use nccurv::mateval::MatrixPoint;
use nccurv::random::{point, stream_rng, symmetric_poly};
use nccurv::NcPoly;

pub const TOL: f64 = 1e-8;

pub fn poly(s: &str, g: usize) -> NcPoly {
    NcPoly::parse(s, g).unwrap()
}

pub fn diag(d: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d))
}

pub fn diag_point(d: &[f64], v: &[f64]) -> MatrixPoint {
    MatrixPoint::new(vec![diag(d)], nalgebra::DVector::from_column_slice(v)).unwrap()
}

/// The 5×5 point of the cubic examples: `X = diag(I₂, −I₃)`, `v = (2, 0, 0, 0, 1)`.
pub fn cube_point_5() -> MatrixPoint {
    diag_point(&[1.0, 1.0, -1.0, -1.0, -1.0], &[2.0, 0.0, 0.0, 0.0, 1.0])
}

pub struct Instance {
    pub seed: u64,
    pub g: usize,
    pub d: usize,
    pub p: NcPoly,
    pub point: MatrixPoint,
}

/// Seeded random instance with `g ≤ 3`, `d ≤ 5`, `n ≤ 4`. `small` keeps `g^d` modest so
/// that matrices built on borders of length `d − 1` stay a few hundred wide.
pub fn instance(seed: u64, small: bool) -> Instance {
    let mut rng = stream_rng(seed, 0);
    use rand::Rng;
    let g = rng.random_range(1..=3);
    let max_d = match (small, g) {
        (false, _) => 5,
        (true, 1) => 5,
        (true, 2) => 4,
        (true, _) => 3,
    };
    let d = rng.random_range(2..=max_d);
    let n = rng.random_range(1..=4);
    let p = symmetric_poly(g, d, &mut rng);
    let point = point(g, n, &mut rng);
    Instance { seed, g, d, p, point }
}
