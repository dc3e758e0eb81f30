//! Where a tuple sits relative to the positivity domain of `p`: the component of `0` in
//! `{X : p(X) ≻ 0}`.
//!
//! ```bash
//! cargo run --example positivity
//! ```

use nalgebra::DMatrix;
use nccurv::curvature::positivity_membership;
use nccurv::{NcPoly, DEFAULT_TOL};

fn main() -> nccurv::Result<()> {
    let disk = NcPoly::parse("1 - x1^2 - x2^2", 2)?;
    let s = 0.5_f64.sqrt();
    let cases: Vec<(&str, Vec<DMatrix<f64>>)> = vec![
        ("zero", vec![DMatrix::zeros(2, 2), DMatrix::zeros(2, 2)]),
        ("(I/2, 0)", vec![DMatrix::identity(2, 2) * 0.5, DMatrix::zeros(2, 2)]),
        ("(diag(1,0), 0)", vec![DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]), DMatrix::zeros(2, 2)]),
        ("(I/sqrt2, I/sqrt2)", vec![DMatrix::identity(2, 2) * s, DMatrix::identity(2, 2) * s]),
        ("(2I, 0)", vec![DMatrix::identity(2, 2) * 2.0, DMatrix::zeros(2, 2)]),
    ];
    println!("p = {disk}");
    for (label, x) in &cases {
        let r = positivity_membership(&disk, x, 64, DEFAULT_TOL)?;
        println!("  {label:<20} {:?}  (min eigenvalue {:.3})", r.membership, r.min_eigenvalue);
    }

    // 1 - x^2 + x^4/5 dips below zero on 1.18 < |x| < 1.90 and is positive again beyond it
    let p = NcPoly::parse("1 - x^2 + 0.2*x^4", 1)?;
    println!("p = {p}");
    for t in [0.5, 1.0, 2.0, 3.0] {
        let x = vec![DMatrix::from_row_slice(1, 1, &[t])];
        let r = positivity_membership(&p, &x, 64, DEFAULT_TOL)?;
        println!("  X = {t:<17} {:?}  (min eigenvalue {:.3})", r.membership, r.min_eigenvalue);
    }
    Ok(())
}
