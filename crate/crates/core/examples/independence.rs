//! Word-vector independence, minimal annihilators, and the dichotomy between tuples with a
//! polynomial relation on `v` and tuples whose word vectors span.
//!
//! ```bash
//! cargo run --example independence
//! ```

use nalgebra::{DMatrix, DVector};
use nccurv::curvature::direct_sum;
use nccurv::random::{point, stream_rng};
use nccurv::variety::{minimal_annihilator, word_independence};
use nccurv::{MatrixPoint, DEFAULT_TOL};

fn describe(label: &str, pt: &MatrixPoint, max_len: usize) -> nccurv::Result<()> {
    let c = word_independence(pt, max_len, DEFAULT_TOL);
    println!(
        "{label:<34} words {:>3}  rank {:>3}  independent {}",
        c.words, c.rank, c.independent
    );
    match minimal_annihilator(std::slice::from_ref(pt), 3, DEFAULT_TOL)? {
        Some(a) => println!("{:<34} annihilator of degree {}: {}  (residual {:.1e})", "", a.degree, a.poly, a.residual),
        None => println!("{:<34} no annihilator up to degree 3", ""),
    }
    Ok(())
}

fn main() -> nccurv::Result<()> {
    // v is an eigenvector of X: x - 2 kills it
    let x = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 1.0, -1.0]));
    let eig = MatrixPoint::new(vec![x.clone()], DVector::from_vec(vec![1.0, 0.0, 0.0]))?;
    describe("X = diag(2,1,-1), v = e1", &eig, 1)?;

    let vander = MatrixPoint::new(vec![x], DVector::from_vec(vec![1.0, 1.0, 1.0]))?;
    describe("X = diag(2,1,-1), v = (1,1,1)", &vander, 2)?;

    let mut rng = stream_rng(7, 0);
    let generic = point(2, 3, &mut rng);
    describe("random pair, n = 3", &generic, 1)?;

    // Summing generic points raises the rank until the words of length <= 2 span
    let pts: Vec<MatrixPoint> = (0..3).map(|_| point(2, 3, &mut rng)).collect();
    for k in 1..=pts.len() {
        let sum = direct_sum(&pts[..k])?;
        let c = word_independence(&sum, 2, DEFAULT_TOL);
        println!("sum of {k} random pairs (n = {:>2}): words {}  rank {}  independent {}", sum.n(), c.words, c.rank, c.independent);
    }
    Ok(())
}
