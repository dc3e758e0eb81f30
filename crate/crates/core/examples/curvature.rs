//! Signature of the clamped second fundamental form at points of `𝒱(x³)`.
//!
//! ```bash
//! cargo run --example curvature
//! ```

use nalgebra::{DMatrix, DVector};
use nccurv::curvature::{c_pm, clamped_tangent, repeat};
use nccurv::{MatrixPoint, NcPoly, DEFAULT_TOL};

fn diag_point(d: &[f64], v: &[f64]) -> MatrixPoint {
    let x = DMatrix::from_diagonal(&DVector::from_column_slice(d));
    MatrixPoint::new(vec![x], DVector::from_column_slice(v)).expect("valid point")
}

fn report(p: &NcPoly, label: &str, pt: &MatrixPoint) -> nccurv::Result<()> {
    let c = c_pm(p, pt, DEFAULT_TOL)?;
    println!(
        "{label:<28} n = {:>2}  tangent dim {:>3}  c- = {}  c+ = {}  zero = {}  full rank: {}",
        pt.n(),
        c.tangent_dim,
        c.c_minus,
        c.c_plus,
        c.form_zero_dim,
        c.full_rank
    );
    Ok(())
}

fn main() -> nccurv::Result<()> {
    let p = NcPoly::parse("x^3", 1)?;

    // X = diag(1, -1, -1), v = (1, β, γ): c- = 0 and c+ = 2 whenever 0 < β² + γ² < 1
    for (beta, gamma) in [(0.5, 0.3), (0.1, 0.9), (0.7, 0.0)] {
        let pt = diag_point(&[1.0, -1.0, -1.0], &[1.0, beta, gamma]);
        report(&p, &format!("diag(1,-1,-1), b={beta}, c={gamma}"), &pt)?;
    }
    let pt = diag_point(&[1.0, -1.0, -1.0], &[1.0, 0.5, 0.3]);
    let t = clamped_tangent(&p, &pt, DEFAULT_TOL)?;
    println!("  tangent basis (coordinates in S11, S12, S13, S22, S23, S33):\n{}", t.basis);

    // X = diag(I2, -I3), v = (2, 0, 0, 0, 1) and its direct sums
    let pt = diag_point(&[1.0, 1.0, -1.0, -1.0, -1.0], &[2.0, 0.0, 0.0, 0.0, 1.0]);
    for k in 1..=3 {
        report(&p, &format!("diag(I2,-I3) summed {k} times"), &repeat(&pt, k)?)?;
    }
    Ok(())
}
