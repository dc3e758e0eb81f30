//! Middle matrices of Hessians, scalar middle matrices and the degree bound.
//!
//! ```bash
//! cargo run --example middle_matrix
//! ```

use nccurv::calculus::hessian;
use nccurv::middlematrix::{degree_bound_report, hessian_middle, relaxed_middle, scalar_middle, MiddleMatrix};
use nccurv::{NcPoly, DEFAULT_TOL};

fn show(z: &MiddleMatrix) {
    for r in 0..z.size() {
        let row: Vec<String> = (0..z.size()).map(|c| format!("{:>8}", z.entry(r, c).to_string())).collect();
        println!("  [{}]", row.join(" "));
    }
}

fn main() -> nccurv::Result<()> {
    for (text, g) in [("x^3", 1), ("x^4", 1), ("x1^2*x2 + x2*x1^2", 2), ("x1^4 - x2*x1*x2", 2)] {
        let p = NcPoly::parse(text, g)?;
        let z = hessian_middle(&p)?;
        println!("p = {p}");
        println!("p'' = {}", hessian(&p));
        println!("Z(x), border length {}:", z.border_len());
        show(&z);
        let s = scalar_middle(&z, DEFAULT_TOL)?;
        let b = degree_bound_report(&p, DEFAULT_TOL)?;
        println!(
            "inertia of Z(0): (neg, zero, pos) = {:?}; d = {} <= 2 mu + 2 = {}\n",
            s.inertia.counts(),
            b.d,
            b.bound_minus.min(b.bound_plus)
        );
    }

    // λ p'ᵀp' adds one eigenvalue of the sign of λ to the scalar middle matrix
    let p = NcPoly::parse("x^3", 1)?;
    for lambda in [5.0, -5.0] {
        let z = relaxed_middle(&p, lambda, 0.0)?;
        println!("relaxed middle matrix of x^3 with lambda = {lambda}:");
        show(&z);
        println!("  Z_lambda(0) inertia {:?}", scalar_middle(&z, DEFAULT_TOL)?.inertia.counts());
    }
    Ok(())
}
