//! Convexity classification and sum-and-difference-of-squares certificates.
//!
//! ```bash
//! cargo run --example convexity
//! ```

use nccurv::middlematrix::{classify_convexity, sds_certificate, SdsOutcome};
use nccurv::{NcPoly, DEFAULT_TOL};

fn main() -> nccurv::Result<()> {
    let cases = [
        ("x1^2 + x2^2", 2),
        ("x1^2 - x2^2", 2),
        ("x^2 - 1", 1),
        ("1 - x^2", 1),
        ("x^3", 1),
        ("x^4", 1),
        ("3*x1 - x2 + 1", 2),
        ("x1*x2*x2*x1 + x2*x1*x1*x2", 2),
    ];
    for (text, g) in cases {
        let p = NcPoly::parse(text, g)?;
        let c = classify_convexity(&p, DEFAULT_TOL)?;
        println!("{:<28} {:?} (mu- = {}, mu+ = {})", p.to_string(), c.classification, c.mu_minus, c.mu_plus);
        match sds_certificate(&p, DEFAULT_TOL)? {
            SdsOutcome::Certificate(cert) => {
                for t in &cert.plus_terms {
                    println!("    + ({t})^T ({t})");
                }
                for t in &cert.minus_terms {
                    println!("    - ({t})^T ({t})");
                }
            }
            SdsOutcome::Unsupported { sigma_minus, sigma_plus } => {
                println!("    middle matrix not constant; sigma- = {sigma_minus}, sigma+ = {sigma_plus}");
            }
        }
    }
    Ok(())
}
