mod common;

use common::{instance, TOL};
use nccurv::calculus::hessian;
use nccurv::mateval::{border_vector, eval_apply, Assignment};
use nccurv::middlematrix::{degree_bound_report, hessian_middle, relaxed_middle, scalar_middle};
use nccurv::numerics::{inertia, sym_eigenvalues};
use nccurv::random::{goe, stream_rng};

#[test]
fn hessian_reconstruction_is_exact() {
    for seed in 0..300 {
        let inst = instance(seed, false);
        let z = hessian_middle(&inst.p).unwrap();
        assert!(z.is_symmetric());
        assert_eq!(z.reexpand(), hessian(&inst.p), "seed {seed}");
    }
}

/// `Ṽ(X)[H]ᵀ Z(X) Ṽ(X)[H] = ⟨p''(X)[H]v, v⟩` numerically.
#[test]
fn border_vector_congruence() {
    for seed in 0..200 {
        let inst = instance(seed, true);
        let (g, n) = (inst.g, inst.point.n());
        let z = hessian_middle(&inst.p).unwrap();
        let zx = z.eval(inst.point.x()).unwrap();
        let h: Vec<_> = (0..g).map(|j| goe(n, &mut stream_rng(seed, 50 + j as u64))).collect();
        let b = border_vector(inst.point.x(), &h, inst.point.v(), z.border_len()).unwrap();
        let lhs = (b.transpose() * zx.as_matrix() * &b)[(0, 0)];
        let f = hessian(&inst.p);
        let fv = eval_apply(&f, &Assignment::xh(inst.point.x(), &h), inst.point.v()).unwrap();
        let rhs = fv.dot(inst.point.v());
        assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()), "seed {seed}: {lhs} vs {rhs}");
    }
}

/// `μ±(Z(X)) = n μ±(𝒵)`.
#[test]
fn middle_matrix_inertia_scales_with_n() {
    for seed in 0..200 {
        let inst = instance(seed, false);
        let z = hessian_middle(&inst.p).unwrap();
        let s = scalar_middle(&z, TOL).unwrap().inertia;
        let n = inst.point.n();
        let ix = inertia(&z.eval(inst.point.x()).unwrap(), TOL).unwrap();
        assert_eq!((ix.neg, ix.pos), (n * s.neg, n * s.pos), "seed {seed}");
    }
}

#[test]
fn degree_bound_holds() {
    for seed in 0..300 {
        let inst = instance(seed, false);
        let b = degree_bound_report(&inst.p, TOL).unwrap();
        assert!(b.holds && inst.d <= 2 * b.mu_minus + 2 && inst.d <= 2 * b.mu_plus + 2, "seed {seed}");
    }
}

/// Adding `λ p'ᵀp'` adds exactly one eigenvalue of the sign of `λ` to the scalar middle matrix.
#[test]
fn lambda_shift_of_scalar_middle() {
    for seed in 0..200 {
        let inst = instance(seed, false);
        let base = scalar_middle(&hessian_middle(&inst.p).unwrap(), TOL).unwrap().inertia;
        for &lambda in &[1e-3, 1.0, 1e3] {
            let plus = scalar_middle(&relaxed_middle(&inst.p, lambda, 0.0).unwrap(), TOL).unwrap().inertia;
            assert_eq!((plus.neg, plus.pos), (base.neg, base.pos + 1), "seed {seed}, λ = {lambda}");
            let minus = scalar_middle(&relaxed_middle(&inst.p, -lambda, 0.0).unwrap(), TOL).unwrap().inertia;
            assert_eq!((minus.neg, minus.pos), (base.neg + 1, base.pos), "seed {seed}, λ = -{lambda}");
        }
    }
}

/// `μ₋(Z_{λ,δ}(X)) = n μ₋(𝒵)` for `λ ≥ 0` and small `δ > 0`, and symmetrically for `μ₊`.
#[test]
fn relaxed_middle_at_points() {
    for seed in 0..200 {
        let inst = instance(seed, true);
        let n = inst.point.n();
        let base = scalar_middle(&hessian_middle(&inst.p).unwrap(), TOL).unwrap().inertia;
        for &lambda in &[0.0, 1.0, 10.0] {
            let zx = relaxed_middle(&inst.p, lambda, 0.0).unwrap().eval(inst.point.x()).unwrap();
            let values = sym_eigenvalues(&zx).unwrap();
            let i0 = inertia(&zx, TOL).unwrap();
            assert_eq!(i0.neg, n * base.neg, "seed {seed}, λ = {lambda}");
            // δ below the smallest negative eigenvalue in magnitude
            let gap = values.iter().filter(|v| **v < 0.0).fold(f64::INFINITY, |m, v| m.min(v.abs()));
            let delta = if gap.is_finite() { 0.25 * gap } else { 1e-3 };
            let zd = relaxed_middle(&inst.p, lambda, delta).unwrap().eval(inst.point.x()).unwrap();
            assert_eq!(inertia(&zd, TOL).unwrap().neg, n * base.neg, "seed {seed}, λ = {lambda}, δ = {delta}");

            let zx = relaxed_middle(&inst.p, -lambda, 0.0).unwrap().eval(inst.point.x()).unwrap();
            assert_eq!(inertia(&zx, TOL).unwrap().pos, n * base.pos, "seed {seed}, λ = -{lambda}");
        }
    }
}
