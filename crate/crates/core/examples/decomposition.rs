//! Subspaces `𝒩`, `𝓜`, `𝓛`, `𝓜₋`, `𝓜₊` relating the relaxed and clamped forms.
//!
//! ```bash
//! cargo run --example decomposition
//! ```

use nalgebra::{DMatrix, DVector};
use nccurv::curvature::subspace_decomposition;
use nccurv::mateval::sym_tuple_basis;
use nccurv::{MatrixPoint, NcPoly, DEFAULT_TOL};

fn main() -> nccurv::Result<()> {
    let p = NcPoly::parse("x^3", 1)?;
    let x = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, -1.0, -1.0, -1.0]));
    let pt = MatrixPoint::new(vec![x], DVector::from_vec(vec![2.0, 0.0, 0.0, 0.0, 1.0]))?;
    let d = subspace_decomposition(&p, &pt, DEFAULT_TOL)?;
    let r = d.report();
    println!("ambient dim {}", r.ambient_dim);
    println!("N  = ker(H -> V(X)[H]v)       dim {}", r.dim_n);
    println!("N-perp                        dim {}", r.dim_n_perp);
    println!("M  = N-perp and tangent       dim {}", r.dim_m);
    println!("L  = N-perp minus M           dim {}", r.dim_l);
    println!("M- (A negative on M)          dim {}", r.dim_m_minus);
    println!("M+ (A nonnegative on M)       dim {}", r.dim_m_plus);

    let basis = sym_tuple_basis(1, 5);
    for k in 0..d.m_minus.ncols() {
        let h = basis.tuple_from_coords(&d.m_minus.column(k).into_owned());
        println!("\nnegative direction in M:{:.4}", h[0]);
    }
    Ok(())
}
