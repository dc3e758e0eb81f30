//! Signature `(μ₋(𝒱), μ₊(𝒱))` of a variety in the three supported modes.
//!
//! Sampled mode only reports what random variety points show. For `1 - x²` a random point has
//! `Xv = ±v` with `∓1` outside the spectrum, so the clamped tangent kills `Hv` and the lower
//! bound stays at zero.
//!
//! ```bash
//! cargo run --release --example variety_signature
//! ```

use nccurv::variety::{variety_signature, SignatureMode, VarietyConfig};
use nccurv::NcPoly;

fn main() -> nccurv::Result<()> {
    for (src, g) in [("1 - x^2", 1), ("x^3", 1), ("1 - x1^2 - x2^2", 2), ("x1*x2 + x2*x1 - 1", 2)] {
        let p = NcPoly::parse(src, g)?;
        println!("p = {p}");
        for mode in [SignatureMode::ScalarMiddle, SignatureMode::CeilingAtPoint, SignatureMode::Sampled] {
            let cfg = VarietyConfig {
                mode,
                seed: 3,
                samples: 8,
                workers: 2,
                ..VarietyConfig::default()
            };
            match variety_signature(&p, &cfg) {
                Ok(r) => println!(
                    "  {:<15} (c-, c+) = ({}, {})  {}{}",
                    format!("{mode:?}"),
                    r.c_minus,
                    r.c_plus,
                    r.validity,
                    r.n.map_or(String::new(), |n| format!(", n = {n}"))
                ),
                Err(e) => println!("  {:<15} {e}", format!("{mode:?}")),
            }
        }
    }
    Ok(())
}
