//! Directional derivatives, Hessians and polarization.
//!
//! ```bash
//! cargo run --example derivatives
//! cargo run --example derivatives -- "x1^2*x2 + x2*x1^2" 2
//! ```

use nccurv::calculus::{directional_derivative, hessian, identify_k_with_h, mixed_hessian, polarize};
use nccurv::NcPoly;

fn main() -> nccurv::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (text, g) = match args.as_slice() {
        [p, g] => (p.clone(), g.parse().expect("g must be an integer")),
        [p] => (p.clone(), 1),
        _ => ("x^4".to_string(), 1),
    };
    let p = NcPoly::parse(&text, g)?;
    println!("p = {p}");
    let d = p.degree().unwrap_or(0);
    for k in 1..=d + 1 {
        println!("p^({k})(x)[h] = {}", directional_derivative(&p, k)?);
    }

    let f = hessian(&p);
    let b = polarize(&f)?;
    println!("\nmixed Hessian p''(x)[h][k] = {}", mixed_hessian(&p));
    println!("polarized Hessian          = {b}");
    println!("k -> h recovers p'':        {}", identify_k_with_h(&b) == f);
    Ok(())
}
