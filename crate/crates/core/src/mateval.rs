//! Evaluation of nc polynomials at tuples of real symmetric matrices.
//!
//! Besides plain evaluation this module builds the border vectors `ℛ_s(H)`, the orthonormal
//! basis of `(Sⁿ)^g` used for every subspace computation, and the coordinate matrices of the
//! linear map `H ↦ f(X)[H]v` and the quadratic form `H ↦ ⟨f(X)[H]v, v⟩`.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::calculus::polarize;
use crate::error::{NcError, Result};
use crate::freealg::{LetterClass, NcPoly, Word};
use crate::numerics::SymMatrix;

const SYMMETRY_TOL: f64 = 1e-12;

/// A g-tuple of real symmetric `n×n` matrices together with a nonzero vector `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPoint {
    x: Vec<DMatrix<f64>>,
    v: DVector<f64>,
}

/// JSON layout of a point file. `v` may be omitted for commands that only evaluate `p(X)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointFile {
    pub g: usize,
    pub n: usize,
    #[serde(rename = "X")]
    pub x: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<f64>>,
}

/// Checks that `m` is square, finite and symmetric to `1e-12`, and returns its exact
/// symmetrization.
pub fn checked_symmetric(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    if m.nrows() != m.ncols() {
        return Err(NcError::Dimension(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(NcError::NonFinite);
    }
    let asym = (&m - m.transpose()).amax();
    if asym > SYMMETRY_TOL {
        return Err(NcError::NotSymmetric);
    }
    Ok(SymMatrix::new(m)?.into_inner())
}

impl MatrixPoint {
    pub fn new(x: Vec<DMatrix<f64>>, v: DVector<f64>) -> Result<Self> {
        let x = checked_tuple(x)?;
        let n = x[0].nrows();
        if v.len() != n {
            return Err(NcError::Dimension(format!("v has length {}, expected {n}", v.len())));
        }
        if v.iter().any(|t| !t.is_finite()) {
            return Err(NcError::NonFinite);
        }
        if v.norm() == 0.0 {
            return Err(NcError::ZeroVector);
        }
        Ok(MatrixPoint { x, v })
    }

    /// Point built from row-major data, convenient in tests and examples.
    pub fn from_rows(x: &[Vec<Vec<f64>>], v: &[f64]) -> Result<Self> {
        let mats = x.iter().map(|m| rows_to_matrix(m)).collect::<Result<Vec<_>>>()?;
        MatrixPoint::new(mats, DVector::from_column_slice(v))
    }

    pub fn from_file(file: &PointFile) -> Result<Self> {
        let x = file_matrices(file)?;
        let v = file
            .v
            .as_ref()
            .ok_or_else(|| NcError::Input("point file has no vector v".into()))?;
        MatrixPoint::new(x, DVector::from_column_slice(v))
    }

    pub fn to_file(&self) -> PointFile {
        PointFile {
            g: self.g(),
            n: self.n(),
            x: self
                .x
                .iter()
                .map(|m| (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect())
                .collect(),
            v: Some(self.v.iter().copied().collect()),
        }
    }

    pub fn g(&self) -> usize {
        self.x.len()
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn x(&self) -> &[DMatrix<f64>] {
        &self.x
    }

    pub fn v(&self) -> &DVector<f64> {
        &self.v
    }

    /// The same matrices with a different vector.
    pub fn with_v(&self, v: DVector<f64>) -> Result<Self> {
        MatrixPoint::new(self.x.clone(), v)
    }
}

fn rows_to_matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    if n == 0 {
        return Err(NcError::Dimension("empty matrix".into()));
    }
    if rows.iter().any(|r| r.len() != n) {
        return Err(NcError::Dimension("matrix rows have inconsistent length".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn checked_tuple(x: Vec<DMatrix<f64>>) -> Result<Vec<DMatrix<f64>>> {
    if x.is_empty() {
        return Err(NcError::Dimension("a point needs at least one matrix".into()));
    }
    let n = x[0].nrows();
    x.into_iter()
        .map(|m| {
            let m = checked_symmetric(m)?;
            if m.nrows() != n {
                return Err(NcError::Dimension("matrices of different sizes".into()));
            }
            Ok(m)
        })
        .collect()
}

/// Validated symmetric matrices of a point file (the vector is not required).
pub fn file_matrices(file: &PointFile) -> Result<Vec<DMatrix<f64>>> {
    if file.x.len() != file.g {
        return Err(NcError::Dimension(format!(
            "point file declares g = {} but lists {} matrices",
            file.g,
            file.x.len()
        )));
    }
    let mats = checked_tuple(file.x.iter().map(|m| rows_to_matrix(m)).collect::<Result<_>>()?)?;
    if mats[0].nrows() != file.n {
        return Err(NcError::Dimension(format!(
            "point file declares n = {} but matrices are {}x{}",
            file.n,
            mats[0].nrows(),
            mats[0].nrows()
        )));
    }
    Ok(mats)
}

/// Matrices substituted for each letter class.
#[derive(Clone, Copy, Debug)]
pub struct Assignment<'a> {
    pub x: &'a [DMatrix<f64>],
    pub h: Option<&'a [DMatrix<f64>]>,
    pub k: Option<&'a [DMatrix<f64>]>,
}

impl<'a> Assignment<'a> {
    pub fn x(x: &'a [DMatrix<f64>]) -> Self {
        Assignment { x, h: None, k: None }
    }

    pub fn xh(x: &'a [DMatrix<f64>], h: &'a [DMatrix<f64>]) -> Self {
        Assignment { x, h: Some(h), k: None }
    }

    pub fn xhk(x: &'a [DMatrix<f64>], h: &'a [DMatrix<f64>], k: &'a [DMatrix<f64>]) -> Self {
        Assignment {
            x,
            h: Some(h),
            k: Some(k),
        }
    }

    fn class(&self, class: LetterClass) -> Result<&'a [DMatrix<f64>]> {
        match class {
            LetterClass::X => Ok(self.x),
            LetterClass::H => self.h.ok_or(NcError::MissingAssignment('h')),
            LetterClass::K => self.k.ok_or(NcError::MissingAssignment('k')),
        }
    }

    fn check(&self, p: &NcPoly) -> Result<usize> {
        let n = self
            .x
            .first()
            .map(|m| m.nrows())
            .ok_or_else(|| NcError::Dimension("empty tuple".into()))?;
        for class in [LetterClass::X, LetterClass::H, LetterClass::K] {
            let needed = class == LetterClass::X || p.uses_class(class);
            if !needed {
                continue;
            }
            let mats = self.class(class)?;
            if mats.len() != p.g() {
                return Err(NcError::MismatchedG(p.g(), mats.len()));
            }
            if mats.iter().any(|m| m.nrows() != n || m.ncols() != n) {
                return Err(NcError::Dimension(format!(
                    "all substituted matrices must be {n}x{n}"
                )));
            }
        }
        Ok(n)
    }
}

/// `p(X, H, K)`: words evaluated as matrix products, the constant term as a multiple of the
/// identity.
pub fn eval(p: &NcPoly, asg: &Assignment) -> Result<DMatrix<f64>> {
    let n = asg.check(p)?;
    let mut out = DMatrix::zeros(n, n);
    for (w, c) in p.terms() {
        let mut m = DMatrix::identity(n, n);
        for l in w.letters() {
            m *= &asg.class(l.class)?[l.index];
        }
        out += m * c;
    }
    Ok(out)
}

/// `p(X, H, K)·v`, computed with matrix-vector products only.
pub fn eval_apply(p: &NcPoly, asg: &Assignment, v: &DVector<f64>) -> Result<DVector<f64>> {
    let n = asg.check(p)?;
    if v.len() != n {
        return Err(NcError::Dimension(format!("vector has length {}, expected {n}", v.len())));
    }
    let mut out = DVector::zeros(n);
    for (w, c) in p.terms() {
        let mut u = v.clone();
        for l in w.letters().iter().rev() {
            u = &asg.class(l.class)?[l.index] * u;
        }
        out += u * c;
    }
    Ok(out)
}

/// Memoized `w(X)` for x-words at a fixed tuple.
pub struct WordCache<'a> {
    x: &'a [DMatrix<f64>],
    cache: HashMap<Word, DMatrix<f64>>,
}

impl<'a> WordCache<'a> {
    pub fn new(x: &'a [DMatrix<f64>]) -> Self {
        WordCache {
            x,
            cache: HashMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.x[0].nrows()
    }

    /// `w(X)` for a word in x-letters.
    pub fn word(&mut self, w: &Word) -> DMatrix<f64> {
        if let Some(m) = self.cache.get(w) {
            return m.clone();
        }
        let m = match w.letters().split_first() {
            None => DMatrix::identity(self.n(), self.n()),
            Some((first, rest)) => {
                debug_assert_eq!(first.class, LetterClass::X);
                let tail = self.word(&Word(rest.to_vec()));
                &self.x[first.index] * tail
            }
        };
        self.cache.insert(w.clone(), m.clone());
        m
    }

    /// `p(X)` for a polynomial in x-letters.
    pub fn poly(&mut self, p: &NcPoly) -> Result<DMatrix<f64>> {
        if p.uses_class(LetterClass::H) {
            return Err(NcError::MissingAssignment('h'));
        }
        if p.uses_class(LetterClass::K) {
            return Err(NcError::MissingAssignment('k'));
        }
        let n = self.n();
        let mut out = DMatrix::zeros(n, n);
        for (w, c) in p.terms() {
            out += self.word(w) * c;
        }
        Ok(out)
    }
}

/// The vectors `w(X)v` for all x-words with `|w| ≤ s`, in graded-lex order.
pub fn word_vectors(x: &[DMatrix<f64>], v: &DVector<f64>, s: usize) -> Vec<DVector<f64>> {
    let g = x.len();
    let mut all = vec![v.clone()];
    let mut level = vec![v.clone()];
    for _ in 0..s {
        let mut next = Vec::with_capacity(level.len() * g);
        for xa in x {
            for u in &level {
                next.push(xa * u);
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    all
}

/// Number of words of length at most `t` in `g` letters: `1 + g + … + g^t`.
pub fn alpha(g: usize, t: usize) -> usize {
    (0..=t).map(|k| g.pow(k as u32)).sum()
}

/// Border vector `ℛ_s(H)`: for `k = 0..s`, the blocks `H_j w(X) v` with `|w| = k`, ordered by
/// `j` and then `w` lexicographically. Its height is `n·g·α_s`.
pub fn border_vector(
    x: &[DMatrix<f64>],
    h: &[DMatrix<f64>],
    v: &DVector<f64>,
    s: usize,
) -> Result<DVector<f64>> {
    let g = x.len();
    if h.len() != g {
        return Err(NcError::MismatchedG(g, h.len()));
    }
    let n = v.len();
    if x.iter().chain(h).any(|m| m.nrows() != n || m.ncols() != n) {
        return Err(NcError::Dimension(format!("expected {n}x{n} matrices")));
    }
    let wv = word_vectors(x, v, s);
    let mut out = DVector::zeros(n * g * alpha(g, s));
    let mut row = 0;
    let mut start = 0;
    for k in 0..=s {
        let count = g.pow(k as u32);
        for hj in h {
            for u in &wv[start..start + count] {
                out.rows_mut(row, n).copy_from(&(hj * u));
                row += n;
            }
        }
        start += count;
    }
    Ok(out)
}

/// Position of the entry `h_j w` in the border vector of words up to any length `≥ |w|`.
pub fn border_position(g: usize, j: usize, w: &Word) -> usize {
    let k = w.len();
    let before = if k == 0 { 0 } else { g * alpha(g, k - 1) };
    let lex = w.letters().iter().fold(0, |acc, l| acc * g + l.index);
    before + j * g.pow(k as u32) + lex
}

/// Inverse of [`border_position`].
pub fn border_entry(g: usize, pos: usize) -> (usize, Word) {
    let mut k = 0;
    let mut start = 0;
    loop {
        let block = g * g.pow(k as u32);
        if pos < start + block {
            let off = pos - start;
            let per = g.pow(k as u32);
            let j = off / per;
            let mut lex = off % per;
            let mut idx = vec![0; k];
            for slot in idx.iter_mut().rev() {
                *slot = lex % g;
                lex /= g;
            }
            return (j, Word::x_word(&idx));
        }
        start += block;
        k += 1;
    }
}

/// `⟨H, K⟩ = Σ_j trace(K_j H_j)`.
pub fn trace_inner(h: &[DMatrix<f64>], k: &[DMatrix<f64>]) -> f64 {
    h.iter().zip(k).map(|(a, b)| a.component_mul(b).sum()).sum()
}

/// One element of the symmetrized elementary basis: component `j`, entry `(r, c)` with
/// `r ≤ c`; `e_r e_rᵀ` on the diagonal, `(e_r e_cᵀ + e_c e_rᵀ)/√2` off it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub j: usize,
    pub r: usize,
    pub c: usize,
}

/// Trace-orthonormal basis of `(Sⁿ)^g` with `g·n(n+1)/2` elements, ordered by component and
/// then by `(r, c)` row-major.
#[derive(Clone, Debug)]
pub struct SymTupleBasis {
    g: usize,
    n: usize,
    elements: Vec<BasisElement>,
}

pub fn sym_tuple_basis(g: usize, n: usize) -> SymTupleBasis {
    let mut elements = Vec::with_capacity(g * n * (n + 1) / 2);
    for j in 0..g {
        for r in 0..n {
            for c in r..n {
                elements.push(BasisElement { j, r, c });
            }
        }
    }
    SymTupleBasis { g, n, elements }
}

impl SymTupleBasis {
    pub fn g(&self) -> usize {
        self.g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    /// The element as a tuple of dense matrices.
    pub fn tuple(&self, a: usize) -> Vec<DMatrix<f64>> {
        let e = self.elements[a];
        let mut out = vec![DMatrix::zeros(self.n, self.n); self.g];
        if e.r == e.c {
            out[e.j][(e.r, e.r)] = 1.0;
        } else {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            out[e.j][(e.r, e.c)] = s;
            out[e.j][(e.c, e.r)] = s;
        }
        out
    }

    /// `H_a u` where `H_a` is the nonzero component of element `a`.
    pub fn apply(&self, a: usize, u: &DVector<f64>) -> DVector<f64> {
        let e = self.elements[a];
        let mut out = DVector::zeros(self.n);
        if e.r == e.c {
            out[e.r] = u[e.r];
        } else {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            out[e.r] = s * u[e.c];
            out[e.c] = s * u[e.r];
        }
        out
    }

    /// `Σ_a coords[a] H_a`.
    pub fn tuple_from_coords(&self, coords: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let mut out = vec![DMatrix::zeros(self.n, self.n); self.g];
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for (e, &t) in self.elements.iter().zip(coords.iter()) {
            if e.r == e.c {
                out[e.j][(e.r, e.r)] += t;
            } else {
                out[e.j][(e.r, e.c)] += s * t;
                out[e.j][(e.c, e.r)] += s * t;
            }
        }
        out
    }

    /// Coordinates `⟨H, H_a⟩` of a symmetric tuple.
    pub fn coords_of(&self, h: &[DMatrix<f64>]) -> DVector<f64> {
        let s = std::f64::consts::SQRT_2;
        DVector::from_iterator(
            self.len(),
            self.elements.iter().map(|e| {
                if e.r == e.c {
                    h[e.j][(e.r, e.r)]
                } else {
                    s * h[e.j][(e.r, e.c)]
                }
            }),
        )
    }

    /// `n × len` matrix whose columns are `H_a u` for the elements in component `j` and zero
    /// elsewhere.
    fn applied_columns(&self, j: usize, u: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.len());
        for (a, e) in self.elements.iter().enumerate() {
            if e.j == j {
                out.set_column(a, &self.apply(a, u));
            }
        }
        out
    }
}

/// Splits a word with exactly `count` letters outside class X into its x-segments and the
/// special letters.
fn split_special(w: &Word) -> (Vec<Word>, Vec<(LetterClass, usize)>) {
    let mut segments = vec![Vec::new()];
    let mut specials = Vec::new();
    for l in w.letters() {
        if l.class == LetterClass::X {
            segments.last_mut().unwrap().push(*l);
        } else {
            specials.push((l.class, l.index));
            segments.push(Vec::new());
        }
    }
    (segments.into_iter().map(Word).collect(), specials)
}

fn check_point_basis(point: &MatrixPoint, basis: &SymTupleBasis, g: usize) -> Result<()> {
    if point.g() != g || basis.g() != g {
        return Err(NcError::MismatchedG(g, point.g()));
    }
    if basis.n() != point.n() {
        return Err(NcError::Dimension(format!(
            "basis is for n = {}, point has n = {}",
            basis.n(),
            point.n()
        )));
    }
    Ok(())
}

/// The `n × dim` matrix of `H ↦ f(X)[H]v` over the basis, for `f` linear in `h`.
pub fn h_linear_map(f: &NcPoly, point: &MatrixPoint, basis: &SymTupleBasis) -> Result<DMatrix<f64>> {
    check_point_basis(point, basis, f.g())?;
    let mut out = DMatrix::zeros(point.n(), basis.len());
    if f.is_zero() {
        return Ok(out);
    }
    if f.h_homogeneous_degree() != Some(1) || f.uses_class(LetterClass::K) {
        return Err(NcError::Contract("expected a polynomial linear in h".into()));
    }
    let mut cache = WordCache::new(point.x());
    for (w, c) in f.terms() {
        let (seg, specials) = split_special(w);
        let a = cache.word(&seg[0]);
        let u = cache.word(&seg[1]) * point.v();
        out += (a * basis.applied_columns(specials[0].1, &u)) * c;
    }
    Ok(out)
}

/// Gram matrix `G_ab = ⟨f(X)[H_a][H_b] v, v⟩` of the symmetric bilinear form obtained by
/// polarizing an h-quadratic `f`.
pub fn h_quadratic_gram(f: &NcPoly, point: &MatrixPoint, basis: &SymTupleBasis) -> Result<SymMatrix> {
    check_point_basis(point, basis, f.g())?;
    let dim = basis.len();
    let mut gram = DMatrix::zeros(dim, dim);
    if f.is_zero() {
        return SymMatrix::new(gram);
    }
    let mixed = polarize(f)?;
    let mut cache = WordCache::new(point.x());
    let v = point.v();
    for (w, c) in mixed.terms() {
        let (seg, specials) = split_special(w);
        let left = cache.word(&seg[0]).transpose() * v;
        let middle = cache.word(&seg[1]);
        let right = cache.word(&seg[2]) * v;
        let ra = basis.applied_columns(specials[0].1, &left);
        let rb = basis.applied_columns(specials[1].1, &right);
        // term a k_i m h_j b pairs the second argument with the left slot
        let block = ra.transpose() * middle * rb * c;
        if specials[0].0 == LetterClass::H {
            gram += block;
        } else {
            gram += block.transpose();
        }
    }
    SymMatrix::new(gram)
}

/// `n·g·α_s × dim` matrix whose columns are `ℛ_s(H_a)`.
pub fn border_map(point: &MatrixPoint, basis: &SymTupleBasis, s: usize) -> Result<DMatrix<f64>> {
    check_point_basis(point, basis, point.g())?;
    let g = point.g();
    let n = point.n();
    let wv = word_vectors(point.x(), point.v(), s);
    let mut out = DMatrix::zeros(n * g * alpha(g, s), basis.len());
    let mut row = 0;
    let mut start = 0;
    for k in 0..=s {
        let count = g.pow(k as u32);
        for j in 0..g {
            for u in &wv[start..start + count] {
                for (a, e) in basis.elements().iter().enumerate() {
                    if e.j == j {
                        out.view_mut((row, a), (n, 1)).copy_from(&basis.apply(a, u));
                    }
                }
                row += n;
            }
        }
        start += count;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{derivative, hessian};
    use crate::freealg::ParseOptions;

    fn diag(d: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_column_slice(d))
    }

    #[test]
    fn eval_examples() {
        let p = NcPoly::parse("3 + x^2", 1).unwrap();
        let x = vec![DMatrix::from_element(1, 1, 2.0)];
        assert_eq!(eval(&p, &Assignment::x(&x)).unwrap()[(0, 0)], 7.0);

        let cube = NcPoly::parse("x^3", 1).unwrap();
        let x = vec![diag(&[1.0, -1.0, -1.0])];
        assert_eq!(eval(&cube, &Assignment::x(&x)).unwrap(), x[0]);

        let comm = NcPoly::parse("x1*x2 - x2*x1", 2).unwrap();
        let x = vec![
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
            diag(&[1.0, -1.0]),
        ];
        assert_eq!(
            eval(&comm, &Assignment::x(&x)).unwrap(),
            DMatrix::from_row_slice(2, 2, &[0.0, -2.0, 2.0, 0.0])
        );
    }

    #[test]
    fn eval_errors() {
        let p = NcPoly::parse_with("h1*x1", 1, ParseOptions::WITH_H).unwrap();
        let x = vec![diag(&[1.0])];
        assert_eq!(eval(&p, &Assignment::x(&x)).unwrap_err(), NcError::MissingAssignment('h'));
        let h = vec![diag(&[1.0, 2.0])];
        assert!(matches!(eval(&p, &Assignment::xh(&x, &h)), Err(NcError::Dimension(_))));
    }

    #[test]
    fn eval_apply_agrees_with_eval() {
        let p = NcPoly::parse_with("x1*h1*x1 - 2*h1 + 0.5", 1, ParseOptions::WITH_H).unwrap();
        let x = vec![DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, -1.0])];
        let h = vec![DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 3.0])];
        let v = DVector::from_column_slice(&[1.0, -2.0]);
        let a = eval(&p, &Assignment::xh(&x, &h)).unwrap() * &v;
        let b = eval_apply(&p, &Assignment::xh(&x, &h), &v).unwrap();
        assert!((a - b).amax() < 1e-14);
    }

    #[test]
    fn border_examples() {
        let x = vec![DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 3.0])];
        let h = vec![DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, -1.0])];
        let v = DVector::from_column_slice(&[1.0, 1.0]);
        assert_eq!(border_vector(&x, &h, &v, 0).unwrap(), &h[0] * &v);
        let b = border_vector(&x, &h, &v, 2).unwrap();
        let expected: Vec<f64> = [&h[0] * &v, &h[0] * &x[0] * &v, &h[0] * &x[0] * &x[0] * &v]
            .iter()
            .flat_map(|u| u.iter().copied().collect::<Vec<_>>())
            .collect();
        assert_eq!(b.as_slice(), expected.as_slice());
        let zero = vec![DMatrix::zeros(2, 2)];
        let b = border_vector(&x, &zero, &v, 3).unwrap();
        assert_eq!(b.len(), 2 * 4);
        assert_eq!(b.amax(), 0.0);
    }

    #[test]
    fn border_positions_roundtrip() {
        for g in 1..=3 {
            for pos in 0..g * alpha(g, 3) {
                let (j, w) = border_entry(g, pos);
                assert_eq!(border_position(g, j, &w), pos);
            }
        }
        assert_eq!(border_position(2, 1, &Word::x_word(&[1, 0])), 2 + 4 + 4 + 2);
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(1, 2), 3);
        assert_eq!(alpha(2, 2), 7);
        assert_eq!(alpha(3, 0), 1);
    }

    #[test]
    fn basis_counts_and_orthonormality() {
        assert_eq!(sym_tuple_basis(1, 2).len(), 3);
        assert_eq!(sym_tuple_basis(2, 2).len(), 6);
        let b = sym_tuple_basis(1, 5);
        assert_eq!(b.len(), 15);
        for a in 0..b.len() {
            for c in 0..b.len() {
                let ip = trace_inner(&b.tuple(a), &b.tuple(c));
                let expected = if a == c { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-15);
            }
        }
        let b = sym_tuple_basis(2, 3);
        let coords = DVector::from_fn(b.len(), |i, _| i as f64 - 3.5);
        let t = b.tuple_from_coords(&coords);
        assert!((b.coords_of(&t) - &coords).amax() < 1e-14);
    }

    #[test]
    fn linear_map_columns_match_direct_evaluation() {
        let p = NcPoly::parse("x1*x2*x1 + x2^2 - x1", 2).unwrap();
        let dp = derivative(&p);
        let point = MatrixPoint::from_rows(
            &[
                vec![vec![1.0, 0.5], vec![0.5, -1.0]],
                vec![vec![0.0, 2.0], vec![2.0, 1.0]],
            ],
            &[0.3, -0.7],
        )
        .unwrap();
        let basis = sym_tuple_basis(2, 2);
        let l = h_linear_map(&dp, &point, &basis).unwrap();
        for a in 0..basis.len() {
            let h = basis.tuple(a);
            let col = eval_apply(&dp, &Assignment::xh(point.x(), &h), point.v()).unwrap();
            assert!((l.column(a) - col).amax() < 1e-13);
        }
    }

    #[test]
    fn gram_matches_direct_evaluation() {
        let p = NcPoly::parse("x1*x2*x1 + x2^3 - x1^2", 2).unwrap();
        let f = hessian(&p);
        let point = MatrixPoint::from_rows(
            &[
                vec![vec![1.0, 0.5], vec![0.5, -1.0]],
                vec![vec![0.0, 2.0], vec![2.0, 1.0]],
            ],
            &[0.3, -0.7],
        )
        .unwrap();
        let basis = sym_tuple_basis(2, 2);
        let gram = h_quadratic_gram(&f, &point, &basis).unwrap();
        let coords = DVector::from_fn(basis.len(), |i, _| (i as f64 * 0.37).sin());
        let h = basis.tuple_from_coords(&coords);
        let direct = point
            .v()
            .dot(&eval_apply(&f, &Assignment::xh(point.x(), &h), point.v()).unwrap());
        let via_gram = coords.dot(&(gram.as_matrix() * &coords));
        assert!((direct - via_gram).abs() < 1e-12);
    }

    #[test]
    fn point_validation() {
        let bad = MatrixPoint::from_rows(&[vec![vec![1.0, 2.0], vec![2.1, 1.0]]], &[1.0, 0.0]);
        assert_eq!(bad.unwrap_err(), NcError::NotSymmetric);
        let zero_v = MatrixPoint::from_rows(&[vec![vec![1.0]]], &[0.0]);
        assert_eq!(zero_v.unwrap_err(), NcError::ZeroVector);
        let p = MatrixPoint::from_rows(&[vec![vec![1.0, 2.0], vec![2.0, 1.0]]], &[1.0, 0.0]).unwrap();
        let round = MatrixPoint::from_file(&p.to_file()).unwrap();
        assert_eq!(round, p);
    }
}
