//! Dense real symmetric linear algebra.
//!
//! Eigenvectors come from cyclic Jacobi rotations ([`sym_eig`]). Inertia counts only need
//! eigenvalues: nalgebra tridiagonalizes and an implicit QL sweep finishes
//! ([`sym_eigenvalues`]), which keeps the large block matrices `Z(X)` cheap. Ranks and kernels
//! use Householder QR with column pivoting.

use nalgebra::{DMatrix, DVector, SymmetricTridiagonal};
use serde::{Deserialize, Serialize};

use crate::error::{NcError, Result};

/// Default relative threshold for zero eigenvalues and numerical rank.
pub const DEFAULT_TOL: f64 = 1e-8;

const MAX_JACOBI_SWEEPS: usize = 100;
const MAX_QL_ITERATIONS: usize = 60;

/// Real symmetric matrix. Entries are symmetrized on construction, so `a[(i,j)] == a[(j,i)]`
/// holds bit for bit.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(NcError::Dimension(format!(
                "symmetric matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let n = m.nrows();
        let mut s = m;
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (s[(i, j)] + s[(j, i)]);
                s[(i, j)] = avg;
                s[(j, i)] = avg;
            }
        }
        Ok(SymMatrix(s))
    }

    pub fn zeros(n: usize) -> Self {
        SymMatrix(DMatrix::zeros(n, n))
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        SymMatrix(DMatrix::from_diagonal(&DVector::from_row_slice(d)))
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(NcError::Dimension("rows must form a square matrix".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    /// Compression `Bᵀ A B` to the column span of `b`.
    pub fn compress(&self, b: &DMatrix<f64>) -> SymMatrix {
        SymMatrix::new(b.transpose() * &self.0 * b).expect("square by construction")
    }

    fn check_finite(&self) -> Result<()> {
        if self.0.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(NcError::NonFinite)
        }
    }
}

/// Eigenvalue counts of a symmetric matrix together with the threshold used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Inertia {
    pub neg: usize,
    pub zero: usize,
    pub pos: usize,
    pub tol: f64,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.neg + self.zero + self.pos
    }

    /// Counts as a tuple `(neg, zero, pos)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.neg, self.zero, self.pos)
    }
}

/// Eigendecomposition with ascending eigenvalues; column `k` of `vectors` belongs to
/// `values[k]`.
#[derive(Clone, Debug)]
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

/// Cyclic Jacobi eigendecomposition, iterated to machine precision.
pub fn sym_eig(a: &SymMatrix) -> Result<SymEig> {
    a.check_finite()?;
    let n = a.dim();
    let mut m = a.0.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let scale = m.norm();
    if n == 0 || scale == 0.0 {
        return Ok(SymEig {
            values: vec![0.0; n],
            vectors: v,
        });
    }
    let target = f64::EPSILON * scale;

    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)] * m[(p, q)];
            }
        }
        if off.sqrt() <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let tau = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(NcError::Numerical("Jacobi iteration did not converge".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymEig { values, vectors })
}

/// Eigenvalues only (ascending): nalgebra's Householder tridiagonalization, then implicit QL.
pub fn sym_eigenvalues(a: &SymMatrix) -> Result<Vec<f64>> {
    a.check_finite()?;
    let n = a.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![a.0[(0, 0)]]);
    }
    let (diag, off) = SymmetricTridiagonal::new(a.0.clone()).unpack_tridiagonal();
    let mut d: Vec<f64> = diag.iter().copied().collect();
    let mut e: Vec<f64> = off.iter().copied().collect();
    e.push(0.0);
    let anorm = a.0.amax() * n as f64;
    tridiagonal_ql(&mut d, &mut e, anorm)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Implicit QL with Wilkinson shifts on the tridiagonal matrix with diagonal `d` and
/// off-diagonal `e[0..n-1]`. An off-diagonal entry is dropped once it is negligible relative
/// to its neighbours or below `ε·anorm`; the second test keeps underflowing entries from
/// stalling the iteration and perturbs the matrix by at most `ε‖A‖`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], anorm: f64) -> Result<()> {
    let n = d.len();
    let floor = f64::EPSILON * anorm;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= floor {
                    e[m] = 0.0;
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(NcError::Numerical("QL iteration did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    if d.iter().any(|x| !x.is_finite()) {
        return Err(NcError::Numerical("QL iteration produced non-finite eigenvalues".into()));
    }
    Ok(())
}

/// Inertia from a list of eigenvalues: an eigenvalue counts as zero when
/// `|λ| <= tol * max(1, max|λ|)`.
pub fn inertia_of_values(values: &[f64], tol: f64) -> Inertia {
    let radius = values.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    inertia_with_cut(values, tol * radius.max(1.0), tol)
}

/// Inertia with an explicit absolute zero threshold `cut`; `tol` is recorded as given.
pub fn inertia_with_cut(values: &[f64], cut: f64, tol: f64) -> Inertia {
    let mut out = Inertia {
        neg: 0,
        zero: 0,
        pos: 0,
        tol,
    };
    for &x in values {
        if x < -cut {
            out.neg += 1;
        } else if x > cut {
            out.pos += 1;
        } else {
            out.zero += 1;
        }
    }
    out
}

pub fn inertia(a: &SymMatrix, tol: f64) -> Result<Inertia> {
    if !(tol >= 0.0) {
        return Err(NcError::Input(format!("tolerance must be >= 0, got {tol}")));
    }
    Ok(inertia_of_values(&sym_eigenvalues(a)?, tol))
}

/// Householder QR with column pivoting, `A P = Q R`.
struct PivotedQr {
    rows: usize,
    reflectors: Vec<DVector<f64>>,
    diag: Vec<f64>,
}

impl PivotedQr {
    fn new(a: &DMatrix<f64>) -> Self {
        let (m, n) = a.shape();
        let mut w = a.clone();
        let mut reflectors = Vec::new();
        let mut diag = Vec::new();
        for k in 0..m.min(n) {
            // pivot: largest remaining column
            let mut best = k;
            let mut best_norm = -1.0;
            for j in k..n {
                let nn = w.view((k, j), (m - k, 1)).norm_squared();
                if nn > best_norm {
                    best_norm = nn;
                    best = j;
                }
            }
            if best != k {
                w.swap_columns(k, best);
            }
            let x = w.view((k, k), (m - k, 1)).clone_owned();
            let norm = x.norm();
            if norm == 0.0 {
                break;
            }
            let alpha = if x[0] >= 0.0 { -norm } else { norm };
            let mut v = DVector::from_iterator(m - k, x.iter().copied());
            v[0] -= alpha;
            let vn = v.norm();
            if vn > 0.0 {
                v /= vn;
                let mut block = w.view_mut((k, k), (m - k, n - k));
                let proj = v.transpose() * &block;
                block -= 2.0 * &v * proj;
            }
            diag.push(alpha.abs());
            reflectors.push(v);
        }
        PivotedQr {
            rows: m,
            reflectors,
            diag,
        }
    }

    fn rank(&self, tol: f64) -> usize {
        let Some(&lead) = self.diag.first() else {
            return 0;
        };
        if lead == 0.0 {
            return 0;
        }
        self.diag.iter().take_while(|&&r| r > tol * lead).count()
    }

    /// Column `j` of the orthogonal factor `Q`.
    fn q_column(&self, j: usize) -> DVector<f64> {
        let mut x = DVector::zeros(self.rows);
        x[j] = 1.0;
        for (k, v) in self.reflectors.iter().enumerate().rev() {
            let mut seg = x.rows_mut(k, self.rows - k);
            let dot = v.dot(&seg);
            seg -= 2.0 * dot * v;
        }
        x
    }

    fn q_columns(&self, range: std::ops::Range<usize>) -> DMatrix<f64> {
        let cols: Vec<DVector<f64>> = range.map(|j| self.q_column(j)).collect();
        if cols.is_empty() {
            DMatrix::zeros(self.rows, 0)
        } else {
            DMatrix::from_columns(&cols)
        }
    }
}

/// Numerical rank: the number of pivoted-QR diagonal entries above `tol` times the largest.
pub fn rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    PivotedQr::new(m).rank(tol)
}

/// Orthonormal basis of the kernel of `m`, returned as the columns of an
/// `ncols x (ncols - rank)` matrix.
pub fn nullspace_orthonormal(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let c = m.ncols();
    if m.nrows() == 0 {
        return DMatrix::identity(c, c);
    }
    let qr = PivotedQr::new(&m.transpose());
    let r = qr.rank(tol);
    qr.q_columns(r..c)
}

/// Orthonormal basis of the column space of `m`.
pub fn range_orthonormal(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    if m.ncols() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let qr = PivotedQr::new(m);
    let r = qr.rank(tol);
    qr.q_columns(0..r)
}

/// Orthonormal basis of the orthogonal complement of the column span of `b` inside the
/// column span of `within` (both given by orthonormal columns in the same ambient space).
pub fn complement_within(within: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    // coordinates of b in the `within` basis; the kernel of their transpose is the complement
    let coords = within.transpose() * b;
    let k = nullspace_orthonormal(&coords.transpose(), tol);
    within * k
}

/// Given a basis `u` (columns) of a maximal strictly negative subspace for `x ↦ xᵀAx`,
/// returns an orthonormal basis of a complementary subspace on which the form is
/// nonnegative.
///
/// With `A = [U₁ U₂ U₃] diag(D₁, D₂, D₃) [U₁ U₂ U₃]ᵀ` split into negative, positive and zero
/// eigenvalues and `u = U₁M₁₁ + U₂M₂₁ + U₃M₃₁`, strict negativity forces `M₁₁` to be
/// invertible; the complement is then spanned by `[U₂ U₃]`.
pub fn complementary_nonneg_subspace(
    a: &SymMatrix,
    u: &DMatrix<f64>,
    tol: f64,
) -> Result<DMatrix<f64>> {
    let n = a.dim();
    if u.nrows() != n {
        return Err(NcError::Dimension(format!(
            "basis has {} rows, matrix is {n}x{n}",
            u.nrows()
        )));
    }
    let eig = sym_eig(a)?;
    let radius = eig.values.iter().fold(0.0_f64, |m, x| m.max(x.abs())).max(1.0);
    let cut = tol * radius;
    let neg: Vec<usize> = (0..n).filter(|&i| eig.values[i] < -cut).collect();
    let rest: Vec<usize> = (0..n).filter(|&i| eig.values[i] >= -cut).collect();
    let k1 = u.ncols();
    if k1 != neg.len() {
        return Err(NcError::Contract(format!(
            "subspace of dimension {k1} is not maximal strictly negative (matrix has {} negative eigenvalues)",
            neg.len()
        )));
    }
    if k1 > 0 {
        let u1 = eig.vectors.select_columns(&neg);
        let m11 = u1.transpose() * u;
        let smallest = m11.clone().svd(false, false).singular_values.min();
        let largest = m11.norm().max(f64::MIN_POSITIVE);
        if smallest <= tol * largest {
            return Err(NcError::Contract(
                "M11 is singular: the supplied subspace is not strictly negative".into(),
            ));
        }
        let form = u.transpose() * a.as_matrix() * u;
        let fe = sym_eigenvalues(&SymMatrix::new(form)?)?;
        if fe.last().copied().unwrap_or(-1.0) >= 0.0 {
            return Err(NcError::Contract(
                "the supplied subspace is not strictly negative".into(),
            ));
        }
    }
    Ok(eig.vectors.select_columns(&rest))
}
