//! The relaxed Hessian `p'' + δ ṼᵀṼ + λ p'ᵀp'` over all symmetric directions reproduces the
//! clamped signature once `δ` is small and `λ` is large.
//!
//! ```bash
//! cargo run --example relaxed_hessian
//! ```

use nalgebra::{DMatrix, DVector};
use nccurv::curvature::{c_pm, relaxed_operators, relaxed_signature, SearchConfig};
use nccurv::{MatrixPoint, NcPoly, DEFAULT_TOL};

fn main() -> nccurv::Result<()> {
    let p = NcPoly::parse("x^3", 1)?;
    let x = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, -1.0, -1.0, -1.0]));
    let pt = MatrixPoint::new(vec![x], DVector::from_vec(vec![2.0, 0.0, 0.0, 0.0, 1.0]))?;
    let c = c_pm(&p, &pt, DEFAULT_TOL)?;
    println!("clamped: c- = {}, c+ = {}\n", c.c_minus, c.c_plus);

    let ops = relaxed_operators(&p, &pt)?;
    println!("negative eigenvalue count of A + lambda Q + delta E:");
    print!("{:>10}", "delta\\lam");
    let lambdas = [0.0, 1e1, 1e2, 1e3, 1e4, 1e6];
    for l in lambdas {
        print!("{l:>8.0e}");
    }
    println!();
    for delta in [0.0, 1e-2, 1e-4, 1e-6] {
        print!("{delta:>10.0e}");
        for l in lambdas {
            print!("{:>8}", ops.inertia(l, delta, DEFAULT_TOL)?.neg);
        }
        println!();
    }

    for negative in [false, true] {
        let cfg = SearchConfig {
            negative,
            ..SearchConfig::default()
        };
        let r = relaxed_signature(&p, &pt, &cfg)?;
        println!(
            "\n{} search: matched = {}, delta = {:e}, lambda = {:e}, (e-, e0, e+) = ({}, {}, {}), target {}",
            if negative { "negative" } else { "positive" },
            r.matched,
            r.delta,
            r.lambda,
            r.e_minus,
            r.e_zero,
            r.e_plus,
            r.target
        );
    }
    Ok(())
}
