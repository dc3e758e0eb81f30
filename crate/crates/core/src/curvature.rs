//! Clamped tangent planes and signatures of the clamped second fundamental form.
//!
//! Directions `H ∈ (Sⁿ)^g` are handled in coordinates over [`sym_tuple_basis`], which is
//! orthonormal for the trace inner product; a subspace is a matrix of orthonormal coordinate
//! columns.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::calculus::{derivative, hessian};
use crate::error::{NcError, Result};
use crate::freealg::NcPoly;
use crate::mateval::{
    border_map, eval, eval_apply, h_linear_map, h_quadratic_gram, sym_tuple_basis, Assignment,
    MatrixPoint, SymTupleBasis,
};
use crate::numerics::{
    complement_within, inertia, inertia_with_cut, nullspace_orthonormal, range_orthonormal, rank,
    sym_eig, sym_eigenvalues, Inertia, SymMatrix,
};

/// Orthonormal coordinates of the clamped tangent plane `{H : p'(X)[H]v = 0}`.
#[derive(Clone, Debug)]
pub struct TangentSpace {
    pub basis: DMatrix<f64>,
    pub ambient_dim: usize,
    pub codim: usize,
    /// Largest `|p'(X)[H]v|` over the basis columns.
    pub residual: f64,
}

impl TangentSpace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// The `n × dim` matrix of `H ↦ p'(X)[H]v`.
pub fn derivative_map(p: &NcPoly, point: &MatrixPoint, basis: &SymTupleBasis) -> Result<DMatrix<f64>> {
    h_linear_map(&derivative(p), point, basis)
}

pub fn clamped_tangent(p: &NcPoly, point: &MatrixPoint, tol: f64) -> Result<TangentSpace> {
    let basis = sym_tuple_basis(point.g(), point.n());
    let l = derivative_map(p, point, &basis)?;
    let t = nullspace_orthonormal(&l, tol);
    let residual = if t.ncols() == 0 { 0.0 } else { (&l * &t).amax() };
    Ok(TangentSpace {
        codim: basis.len() - t.ncols(),
        ambient_dim: basis.len(),
        basis: t,
        residual,
    })
}

/// Whether `H ↦ p'(X)[H]v` maps onto `ℝⁿ`.
pub fn full_rank_point(p: &NcPoly, point: &MatrixPoint, tol: f64) -> Result<bool> {
    let basis = sym_tuple_basis(point.g(), point.n());
    let l = derivative_map(p, point, &basis)?;
    Ok(rank(&l, tol) == point.n())
}

/// Gram matrix of `H ↦ ⟨f(X)[H]v, v⟩` on the subspace with coordinate columns `subspace`.
pub fn form_gram(f: &NcPoly, point: &MatrixPoint, subspace: &DMatrix<f64>) -> Result<SymMatrix> {
    let basis = sym_tuple_basis(point.g(), point.n());
    if subspace.nrows() != basis.len() {
        return Err(NcError::Dimension(format!(
            "subspace coordinates have {} rows, ambient dimension is {}",
            subspace.nrows(),
            basis.len()
        )));
    }
    Ok(h_quadratic_gram(f, point, &basis)?.compress(subspace))
}

/// `(e₋, e₀, e₊)` of the form `⟨f(X)[H]v, v⟩` on a subspace.
pub fn e_pm(f: &NcPoly, point: &MatrixPoint, subspace: &DMatrix<f64>, tol: f64) -> Result<Inertia> {
    inertia(&form_gram(f, point, subspace)?, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub c_minus: usize,
    pub c_plus: usize,
    pub full_rank: bool,
    pub tangent_dim: usize,
    pub form_zero_dim: usize,
    pub ambient_dim: usize,
    /// `|p(X)v|`; zero up to rounding when the point lies on the variety.
    pub variety_residual: f64,
    pub tol: f64,
}

/// `c±ⁿ(X,v;p)`: inertia of the Hessian form on the clamped tangent plane.
pub fn c_pm(p: &NcPoly, point: &MatrixPoint, tol: f64) -> Result<CurvatureReport> {
    let basis = sym_tuple_basis(point.g(), point.n());
    let l = derivative_map(p, point, &basis)?;
    let t = nullspace_orthonormal(&l, tol);
    let gram = h_quadratic_gram(&hessian(p), point, &basis)?.compress(&t);
    let i = inertia(&gram, tol)?;
    let variety_residual = eval_apply(p, &Assignment::x(point.x()), point.v())?.amax();
    Ok(CurvatureReport {
        c_minus: i.neg,
        c_plus: i.pos,
        full_rank: rank(&l, tol) == point.n(),
        tangent_dim: t.ncols(),
        form_zero_dim: i.zero,
        ambient_dim: basis.len(),
        variety_residual,
        tol,
    })
}

/// Gram matrices over the whole of `(Sⁿ)^g` of the three forms making up the relaxed Hessian:
/// `A` from `⟨p''(X)[H]v,v⟩`, `Q` from `|p'(X)[H]v|²`, `E` from `|Ṽ(X)[H]v|²`.
#[derive(Clone, Debug)]
pub struct RelaxedOperators {
    pub a: SymMatrix,
    pub q: SymMatrix,
    pub e: SymMatrix,
    /// Coordinate matrix of `H ↦ p'(X)[H]v`.
    pub l: DMatrix<f64>,
    /// Coordinate matrix of `H ↦ Ṽ(X)[H]v`.
    pub r: DMatrix<f64>,
}

pub fn relaxed_operators(p: &NcPoly, point: &MatrixPoint) -> Result<RelaxedOperators> {
    let basis = sym_tuple_basis(point.g(), point.n());
    let d = p.degree().unwrap_or(0).max(1);
    let a = h_quadratic_gram(&hessian(p), point, &basis)?;
    let l = derivative_map(p, point, &basis)?;
    let r = border_map(point, &basis, d - 1)?;
    let q = SymMatrix::new(l.transpose() * &l)?;
    let e = SymMatrix::new(r.transpose() * &r)?;
    Ok(RelaxedOperators { a, q, e, l, r })
}

impl RelaxedOperators {
    pub fn combined(&self, lambda: f64, delta: f64) -> SymMatrix {
        let m = self.a.as_matrix() + self.q.as_matrix() * lambda + self.e.as_matrix() * delta;
        SymMatrix::new(m).expect("square")
    }

    /// Inertia of `A + λQ + δE`. The zero threshold is `tol` relative to the part of the
    /// form that can carry negative directions, plus a rounding floor proportional to the
    /// size of the `λQ` term.
    pub fn inertia(&self, lambda: f64, delta: f64, tol: f64) -> Result<Inertia> {
        let m = self.combined(lambda, delta);
        let values = sym_eigenvalues(&m)?;
        let na = self.a.as_matrix().norm();
        let nq = self.q.as_matrix().norm() * lambda.abs();
        let ne = self.e.as_matrix().norm() * delta.abs();
        let dim = m.dim().max(1) as f64;
        let cut = tol * (na + ne).max(1.0) + 16.0 * dim * f64::EPSILON * (na + nq + ne);
        Ok(inertia_with_cut(&values, cut, tol))
    }
}

/// Decade grids for the `(δ, λ)` search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Magnitudes of `δ`, scanned in the given order.
    pub deltas: Vec<f64>,
    /// Magnitudes of `λ`, scanned in the given order.
    pub lambdas: Vec<f64>,
    /// Scan `δ < 0, λ < 0` and match `e₊` against `c₊` instead.
    pub negative: bool,
    pub tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            deltas: (2..=8).map(|k| 10f64.powi(-k)).collect(),
            lambdas: (1..=8).map(|k| 10f64.powi(k)).collect(),
            negative: false,
            tol: crate::DEFAULT_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelaxedSignature {
    pub delta: f64,
    pub lambda: f64,
    pub e_minus: usize,
    pub e_zero: usize,
    pub e_plus: usize,
    /// `c₋` (or `c₊` for the negative variant) that the search tries to reproduce.
    pub target: usize,
    pub matched: bool,
    pub negative: bool,
    pub diagnostics: Vec<String>,
}

/// Scans the grid for the first `(δ, λ)` at which the relevant count of the relaxed form over
/// all of `(Sⁿ)^g` agrees at `λ` and at the next grid value and equals `c₋` (resp. `c₊`).
pub fn relaxed_signature(p: &NcPoly, point: &MatrixPoint, cfg: &SearchConfig) -> Result<RelaxedSignature> {
    if cfg.deltas.is_empty() || cfg.lambdas.len() < 2 {
        return Err(NcError::Input("search grids need one delta and two lambdas".into()));
    }
    let c = c_pm(p, point, cfg.tol)?;
    let ops = relaxed_operators(p, point)?;
    relaxed_signature_with(&ops, if cfg.negative { c.c_plus } else { c.c_minus }, cfg)
}

/// Grid search on precomputed operators.
pub fn relaxed_signature_with(ops: &RelaxedOperators, target: usize, cfg: &SearchConfig) -> Result<RelaxedSignature> {
    let sign = if cfg.negative { -1.0 } else { 1.0 };
    let count = |i: &Inertia| if cfg.negative { i.pos } else { i.neg };
    let mut last = None;
    let mut diagnostics = Vec::new();
    for &dm in &cfg.deltas {
        let delta = sign * dm;
        let mut prev: Option<(f64, Inertia)> = None;
        let mut seen = Vec::new();
        for &lm in &cfg.lambdas {
            let lambda = sign * lm;
            let i = ops.inertia(lambda, delta, cfg.tol)?;
            seen.push(count(&i));
            if let Some((pl, pi)) = prev {
                if count(&pi) == count(&i) && count(&i) == target {
                    return Ok(RelaxedSignature {
                        delta,
                        lambda: pl,
                        e_minus: pi.neg,
                        e_zero: pi.zero,
                        e_plus: pi.pos,
                        target,
                        matched: true,
                        negative: cfg.negative,
                        diagnostics,
                    });
                }
            }
            prev = Some((lambda, i));
            last = Some((delta, lambda, i));
        }
        diagnostics.push(format!("delta={delta:e}: counts over lambda grid {seen:?}"));
    }
    let (delta, lambda, i) = last.expect("nonempty grids");
    diagnostics.push(format!("no stabilized count equal to {target} on the grid"));
    Ok(RelaxedSignature {
        delta,
        lambda,
        e_minus: i.neg,
        e_zero: i.zero,
        e_plus: i.pos,
        target,
        matched: false,
        negative: cfg.negative,
        diagnostics,
    })
}

/// Subspaces from the proof relating the relaxed Hessian to the clamped form:
/// `𝒩 = ker(H ↦ Ṽ(X)[H]v)`, `𝓜 = 𝒩⊥ ∩ ker(H ↦ p'(X)[H]v)`, `𝓛 = 𝒩⊥ ⊖ 𝓜`, and `𝓜₋`, `𝓜₊`
/// the negative and nonnegative eigenspaces of `A` compressed to `𝓜`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub n: DMatrix<f64>,
    pub n_perp: DMatrix<f64>,
    pub m: DMatrix<f64>,
    pub l: DMatrix<f64>,
    pub m_minus: DMatrix<f64>,
    pub m_plus: DMatrix<f64>,
    /// `A`, `Q`, `E` compressed to `𝒩⊥` (in the coordinates of `n_perp`).
    pub a_perp: SymMatrix,
    pub q_perp: SymMatrix,
    pub e_perp: SymMatrix,
    pub ambient_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub ambient_dim: usize,
    pub dim_n: usize,
    pub dim_n_perp: usize,
    pub dim_m: usize,
    pub dim_l: usize,
    pub dim_m_minus: usize,
    pub dim_m_plus: usize,
    pub a_perp: Vec<Vec<f64>>,
    pub q_perp: Vec<Vec<f64>>,
    pub e_perp: Vec<Vec<f64>>,
}

fn rows(m: &SymMatrix) -> Vec<Vec<f64>> {
    let a = m.as_matrix();
    (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect()
}

impl Decomposition {
    pub fn report(&self) -> DecompositionReport {
        DecompositionReport {
            ambient_dim: self.ambient_dim,
            dim_n: self.n.ncols(),
            dim_n_perp: self.n_perp.ncols(),
            dim_m: self.m.ncols(),
            dim_l: self.l.ncols(),
            dim_m_minus: self.m_minus.ncols(),
            dim_m_plus: self.m_plus.ncols(),
            a_perp: rows(&self.a_perp),
            q_perp: rows(&self.q_perp),
            e_perp: rows(&self.e_perp),
        }
    }
}

pub fn subspace_decomposition(p: &NcPoly, point: &MatrixPoint, tol: f64) -> Result<Decomposition> {
    let ops = relaxed_operators(p, point)?;
    let ambient_dim = ops.a.dim();
    let n = nullspace_orthonormal(&ops.r, tol);
    let n_perp = range_orthonormal(&ops.r.transpose(), tol);
    let m = &n_perp * nullspace_orthonormal(&(&ops.l * &n_perp), tol);
    let l = complement_within(&n_perp, &m, tol);
    let a_m = ops.a.compress(&m);
    let (m_minus, m_plus) = if m.ncols() == 0 {
        (m.clone(), m.clone())
    } else {
        let eig = sym_eig(&a_m)?;
        let neg = inertia(&a_m, tol)?.neg;
        let vecs = &m * &eig.vectors;
        (
            vecs.columns(0, neg).into_owned(),
            vecs.columns(neg, m.ncols() - neg).into_owned(),
        )
    };
    Ok(Decomposition {
        a_perp: ops.a.compress(&n_perp),
        q_perp: ops.q.compress(&n_perp),
        e_perp: ops.e.compress(&n_perp),
        n,
        n_perp,
        m,
        l,
        m_minus,
        m_plus,
        ambient_dim,
    })
}

/// Direct sum of points: block-diagonal matrices and stacked vectors.
pub fn direct_sum(points: &[MatrixPoint]) -> Result<MatrixPoint> {
    let first = points
        .first()
        .ok_or_else(|| NcError::Input("direct sum of no points".into()))?;
    let g = first.g();
    if let Some(p) = points.iter().find(|p| p.g() != g) {
        return Err(NcError::MismatchedG(g, p.g()));
    }
    let total: usize = points.iter().map(|p| p.n()).sum();
    let mut x = vec![DMatrix::zeros(total, total); g];
    let mut v = DVector::zeros(total);
    let mut off = 0;
    for p in points {
        let n = p.n();
        for (j, xj) in p.x().iter().enumerate() {
            x[j].view_mut((off, off), (n, n)).copy_from(xj);
        }
        v.rows_mut(off, n).copy_from(p.v());
        off += n;
    }
    MatrixPoint::new(x, v)
}

/// `k` copies of the same point.
pub fn repeat(point: &MatrixPoint, k: usize) -> Result<MatrixPoint> {
    direct_sum(&vec![point.clone(); k])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "label", rename_all = "kebab-case")]
pub enum Membership {
    Interior,
    Boundary { kernel: Vec<Vec<f64>> },
    Exterior,
    /// `p(X) ≻ 0` but the sampled segment from `0` to `X` leaves the positive set. The label is
    /// conservative: the sampling is a semidecision.
    DisconnectedPositive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub membership: Membership,
    pub min_eigenvalue: f64,
    pub path_steps: usize,
    pub tol: f64,
}

/// Locates `X` relative to the component of `0` in `{X : p(X) ≻ 0}` and its closure.
pub fn positivity_membership(p: &NcPoly, x: &[DMatrix<f64>], path_steps: usize, tol: f64) -> Result<MembershipReport> {
    if !(p.constant_term() > 0.0) {
        return Err(NcError::Input("p(0) is not positive definite".into()));
    }
    let eval_at = |t: f64| -> Result<SymMatrix> {
        let scaled: Vec<DMatrix<f64>> = x.iter().map(|m| m * t).collect();
        SymMatrix::new(eval(p, &Assignment::x(&scaled))?)
    };
    let px = eval_at(1.0)?;
    let eig = sym_eig(&px)?;
    let scale = eig.values.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    let cut = tol * scale;
    let min_eigenvalue = eig.values[0];
    let membership = if min_eigenvalue.abs() <= cut {
        let kernel = (0..eig.values.len())
            .filter(|&k| eig.values[k].abs() <= cut)
            .map(|k| eig.vectors.column(k).iter().copied().collect())
            .collect();
        Membership::Boundary { kernel }
    } else if min_eigenvalue < 0.0 {
        Membership::Exterior
    } else {
        let mut connected = true;
        for k in 0..path_steps {
            let t = k as f64 / path_steps as f64;
            let values = sym_eigenvalues(&eval_at(t)?)?;
            if values[0] <= 0.0 {
                connected = false;
                break;
            }
        }
        if connected {
            Membership::Interior
        } else {
            Membership::DisconnectedPositive
        }
    };
    Ok(MembershipReport {
        membership,
        min_eigenvalue,
        path_steps,
        tol,
    })
}
