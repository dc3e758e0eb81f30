//! Codimension of the span of border vectors at a point with independent word vectors.
//!
//! ```bash
//! cargo run --example chsy
//! ```

use nccurv::random::{point, stream_rng};
use nccurv::variety::chsy_codim;
use nccurv::DEFAULT_TOL;

fn main() -> nccurv::Result<()> {
    println!("{:>2} {:>2} {:>2} {:>2} {:>10} {:>8} {:>8}", "g", "n", "r", "s", "bound", "exact", "numeric");
    for (g, n, r, s) in [(1, 2, 1, 1), (1, 3, 2, 2), (1, 4, 2, 3), (2, 3, 1, 1), (2, 5, 1, 2), (2, 8, 2, 2), (3, 5, 1, 1)] {
        let mut rng = stream_rng(11, (g * 100 + n) as u64);
        let pt = point(g, n, &mut rng);
        let rep = chsy_codim(g, n, r, s, Some(&pt), DEFAULT_TOL)?;
        let show = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        println!(
            "{g:>2} {n:>2} {r:>2} {s:>2} {:>10} {:>8} {:>8}",
            rep.formula_bound,
            show(rep.formula_exact),
            show(rep.numeric_codim)
        );
    }
    Ok(())
}
