//! Middle matrices of nc quadratics.
//!
//! A symmetric polynomial `f(x)[h]` homogeneous of degree two in `h` is written as
//! `V(x)[h]ᵀ Z(x) V(x)[h]` where `V` is the border vector of entries `h_j w(x)`. The monomial
//! `c·a·h_i·m·h_j·b` sits at row `(i, aᵀ)` and column `(j, b)` with value `c·m`. For the
//! Hessian of `x⁴` this gives
//!
//! ```text
//!            h     hx    hx²
//! h    [ 2x²   2x    2 ]
//! xh   [ 2x    2     0 ]
//! x²h  [ 2     0     0 ]
//! ```
//!
//! (`2hxxh` lands at `(h, h)`, `2hxhx` at `(h, hx)`, `2xhxh` at `(xh, hx)`, and so on).

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::calculus::{derivative, hessian};
use crate::error::{NcError, Result};
use crate::freealg::{Letter, LetterClass, NcPoly, Word};
use crate::mateval::{alpha, border_entry, border_position, WordCache};
use crate::numerics::{inertia, sym_eig, Inertia, SymMatrix};

/// Non-constant coefficients below this are treated as absent when testing `Z(x)` for
/// constancy.
pub const CONSTANT_TOL: f64 = 1e-12;

/// Symmetric matrix of x-polynomials indexed by border entries `h_j w` with `|w| ≤ len`.
#[derive(Clone, Debug, PartialEq)]
pub struct MiddleMatrix {
    g: usize,
    len: usize,
    entries: BTreeMap<(usize, usize), NcPoly>,
}

impl MiddleMatrix {
    pub fn zero(g: usize, len: usize) -> Self {
        MiddleMatrix {
            g,
            len,
            entries: BTreeMap::new(),
        }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// Longest word in the border.
    pub fn border_len(&self) -> usize {
        self.len
    }

    /// Number of rows, `g·α_len`.
    pub fn size(&self) -> usize {
        self.g * alpha(self.g, self.len)
    }

    pub fn entry(&self, r: usize, c: usize) -> NcPoly {
        self.entries
            .get(&(r, c))
            .cloned()
            .unwrap_or_else(|| NcPoly::zero(self.g))
    }

    /// Nonzero entries in row-major order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (&(usize, usize), &NcPoly)> {
        self.entries.iter()
    }

    fn add_to(&mut self, r: usize, c: usize, p: &NcPoly) {
        let e = self
            .entries
            .entry((r, c))
            .or_insert_with(|| NcPoly::zero(p.g()));
        *e = &*e + p;
        if e.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    /// Border entry `h_j w` at position `pos` as a polynomial.
    pub fn border_poly(&self, pos: usize) -> NcPoly {
        let (j, w) = border_entry(self.g, pos);
        let mut letters = vec![Letter::h(j)];
        letters.extend_from_slice(w.letters());
        NcPoly::monomial(self.g, Word(letters), 1.0)
    }

    /// Range of positions holding words of length `k`.
    pub fn block_range(&self, k: usize) -> std::ops::Range<usize> {
        let start = if k == 0 { 0 } else { self.g * alpha(self.g, k - 1) };
        start..start + self.g * self.g.pow(k as u32)
    }

    /// The block `Z_ij` of rows with words of length `i` and columns of length `j`.
    pub fn block(&self, i: usize, j: usize) -> Vec<Vec<NcPoly>> {
        let cols = self.block_range(j);
        self.block_range(i)
            .map(|r| cols.clone().map(|c| self.entry(r, c)).collect())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries
            .iter()
            .all(|(&(r, c), p)| self.entry(c, r) == p.transpose())
    }

    /// True when every entry is constant up to [`CONSTANT_TOL`].
    pub fn is_constant(&self) -> bool {
        self.entries.values().all(|p| {
            p.terms()
                .all(|(w, c)| w.is_empty() || c.abs() < CONSTANT_TOL)
        })
    }

    /// `Z(0)`, the matrix of constant terms.
    pub fn scalar_matrix(&self) -> SymMatrix {
        let s = self.size();
        let mut m = DMatrix::zeros(s, s);
        for (&(r, c), p) in &self.entries {
            m[(r, c)] = p.constant_term();
        }
        SymMatrix::new(m).expect("square by construction")
    }

    /// `Z(X)` as an `n·size × n·size` block matrix.
    pub fn eval(&self, x: &[DMatrix<f64>]) -> Result<SymMatrix> {
        if x.len() != self.g {
            return Err(NcError::MismatchedG(self.g, x.len()));
        }
        let n = x[0].nrows();
        let mut cache = WordCache::new(x);
        let mut out = DMatrix::zeros(n * self.size(), n * self.size());
        for (&(r, c), p) in &self.entries {
            let m = cache.poly(p)?;
            out.view_mut((r * n, c * n), (n, n)).copy_from(&m);
        }
        SymMatrix::new(out)
    }

    /// `V(x)[h]ᵀ Z(x) V(x)[h]` expanded symbolically.
    pub fn reexpand(&self) -> NcPoly {
        let mut out = NcPoly::zero(self.g);
        for (&(r, c), p) in &self.entries {
            let left = self.border_poly(r).transpose();
            let right = self.border_poly(c);
            out = &out + &(&(&left * p) * &right);
        }
        out
    }

    /// `Z + δ I`.
    pub fn add_identity(&self, delta: f64) -> MiddleMatrix {
        let mut out = self.clone();
        let one = NcPoly::constant(self.g, delta);
        for r in 0..self.size() {
            out.add_to(r, r, &one);
        }
        out
    }

    /// Same matrix in a longer border, padded with zeros.
    pub fn padded(&self, len: usize) -> MiddleMatrix {
        assert!(len >= self.len);
        MiddleMatrix {
            g: self.g,
            len,
            entries: self.entries.clone(),
        }
    }

    pub fn to_json(&self) -> MiddleMatrixJson {
        let mut blocks = BTreeMap::new();
        for i in 0..=self.len {
            for j in 0..=self.len {
                let b = self
                    .block(i, j)
                    .into_iter()
                    .map(|row| row.into_iter().map(|p| p.to_string()).collect())
                    .collect();
                blocks.insert(format!("{i},{j}"), b);
            }
        }
        MiddleMatrixJson {
            g: self.g,
            border_len: self.len,
            blocks,
        }
    }
}

/// Serialized middle matrix: blocks keyed `"i,j"`, entries in parser syntax.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MiddleMatrixJson {
    pub g: usize,
    pub border_len: usize,
    pub blocks: BTreeMap<String, Vec<Vec<String>>>,
}

/// Splits `a h_i m h_j b` into its parts.
fn split_quadratic(w: &Word) -> Option<(Word, usize, Word, usize, Word)> {
    let hs: Vec<usize> = w
        .letters()
        .iter()
        .enumerate()
        .filter(|(_, l)| l.class != LetterClass::X)
        .map(|(p, _)| p)
        .collect();
    if hs.len() != 2 || hs.iter().any(|&p| w.letters()[p].class != LetterClass::H) {
        return None;
    }
    let l = w.letters();
    Some((
        Word(l[..hs[0]].to_vec()),
        l[hs[0]].index,
        Word(l[hs[0] + 1..hs[1]].to_vec()),
        l[hs[1]].index,
        Word(l[hs[1] + 1..].to_vec()),
    ))
}

/// Middle matrix of a symmetric h-quadratic `f`, using the shortest border that fits.
pub fn extract_middle(f: &NcPoly) -> Result<MiddleMatrix> {
    extract_middle_with_len(f, f.x_degree().unwrap_or(0))
}

/// Middle matrix of `f` over the border of words of length at most `len`.
pub fn extract_middle_with_len(f: &NcPoly, len: usize) -> Result<MiddleMatrix> {
    let g = f.g();
    let mut z = MiddleMatrix::zero(g, len);
    for (w, c) in f.terms() {
        let (a, i, m, j, b) = split_quadratic(w).ok_or(NcError::NotHQuadratic)?;
        if a.len() > len || b.len() > len {
            return Err(NcError::Dimension(format!(
                "monomial {w} does not fit a border of length {len}"
            )));
        }
        let r = border_position(g, i, &a.transpose());
        let col = border_position(g, j, &b);
        z.add_to(r, col, &NcPoly::monomial(g, m, c));
    }
    if !z.is_symmetric() {
        return Err(NcError::NotSymmetric);
    }
    Ok(z)
}

/// Middle matrix of the Hessian of `p`, with border length `deg p − 2`.
pub fn hessian_middle(p: &NcPoly) -> Result<MiddleMatrix> {
    let d = p.degree().unwrap_or(0);
    extract_middle_with_len(&hessian(p), d.saturating_sub(2))
}

/// Row `R(x)` with `p'(x)[h] = R(x)·Ṽ(x)[h]` over the border of length `len`: the monomial
/// `c·a·h_j·b` contributes `c·a` at `(j, b)`.
pub fn derivative_row(p: &NcPoly, len: usize) -> Result<Vec<NcPoly>> {
    let g = p.g();
    let mut row = vec![NcPoly::zero(g); g * alpha(g, len)];
    for (w, c) in derivative(p).terms() {
        let pos = w
            .letters()
            .iter()
            .position(|l| l.class == LetterClass::H)
            .expect("derivative terms carry one h");
        if w.letters()[pos + 1..].len() > len {
            return Err(NcError::Dimension(format!("border length {len} too short")));
        }
        let a = Word(w.letters()[..pos].to_vec());
        let b = Word(w.letters()[pos + 1..].to_vec());
        let idx = border_position(g, w.letters()[pos].index, &b);
        row[idx].add_term(a, c);
    }
    Ok(row)
}

/// Middle matrix of `p''(x)[h] + δ Ṽᵀ Ṽ + λ p'(x)[h]ᵀ p'(x)[h]` over the border `Ṽ` of words
/// of length at most `deg p − 1`.
pub fn relaxed_middle(p: &NcPoly, lambda: f64, delta: f64) -> Result<MiddleMatrix> {
    let d = p.degree().unwrap_or(0).max(1);
    let dp = derivative(p);
    let quadratic = &hessian(p) + &(&dp.transpose() * &dp).scale(lambda);
    Ok(extract_middle_with_len(&quadratic, d - 1)?.add_identity(delta))
}

/// Scalar middle matrix `𝒵 = Z(0)` with its inertia.
#[derive(Clone, Debug)]
pub struct ScalarMiddle {
    pub matrix: SymMatrix,
    pub inertia: Inertia,
}

pub fn scalar_middle(z: &MiddleMatrix, tol: f64) -> Result<ScalarMiddle> {
    let matrix = z.scalar_matrix();
    let inertia = inertia(&matrix, tol)?;
    Ok(ScalarMiddle { matrix, inertia })
}

fn require_symmetric(p: &NcPoly) -> Result<()> {
    if p.is_symmetric() {
        Ok(())
    } else {
        Err(NcError::NotSymmetric)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBound {
    pub d: usize,
    pub mu_minus: usize,
    pub mu_plus: usize,
    pub bound_minus: usize,
    pub bound_plus: usize,
    pub holds: bool,
}

/// Checks `deg p ≤ 2μ±(𝒵) + 2`. A violation is reported as an error since it cannot happen
/// for a correct middle matrix.
pub fn degree_bound_report(p: &NcPoly, tol: f64) -> Result<DegreeBound> {
    require_symmetric(p)?;
    let d = p.degree().unwrap_or(0);
    let (mu_minus, mu_plus) = if d < 2 {
        (0, 0)
    } else {
        let s = scalar_middle(&hessian_middle(p)?, tol)?;
        (s.inertia.neg, s.inertia.pos)
    };
    let report = DegreeBound {
        d,
        mu_minus,
        mu_plus,
        bound_minus: 2 * mu_minus + 2,
        bound_plus: 2 * mu_plus + 2,
        holds: d < 2 || (d <= 2 * mu_minus + 2 && d <= 2 * mu_plus + 2),
    };
    if !report.holds {
        return Err(NcError::Contract(format!("degree bound violated: {report:?}")));
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convexity {
    /// Degree at most one: both convex and concave.
    Affine,
    Convex,
    Concave,
    Indefinite,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub classification: Convexity,
    pub degree: Option<usize>,
    pub mu_minus: usize,
    pub mu_plus: usize,
    /// Eigenvectors of `𝒵` for its most negative and most positive eigenvalues when the
    /// Hessian takes both signs.
    pub witness_negative: Option<Vec<f64>>,
    pub witness_positive: Option<Vec<f64>>,
}

pub fn classify_convexity(p: &NcPoly, tol: f64) -> Result<ConvexityReport> {
    require_symmetric(p)?;
    let degree = p.degree();
    if degree.unwrap_or(0) < 2 {
        return Ok(ConvexityReport {
            classification: Convexity::Affine,
            degree,
            mu_minus: 0,
            mu_plus: 0,
            witness_negative: None,
            witness_positive: None,
        });
    }
    let z = hessian_middle(p)?;
    let s = scalar_middle(&z, tol)?;
    let (neg, pos) = (s.inertia.neg, s.inertia.pos);
    let classification = match (neg, pos) {
        (0, _) => Convexity::Convex,
        (_, 0) => Convexity::Concave,
        _ => Convexity::Indefinite,
    };
    if classification != Convexity::Indefinite && (degree != Some(2) || !z.is_constant()) {
        return Err(NcError::Contract(
            "semidefinite scalar middle matrix for a polynomial of degree above two".into(),
        ));
    }
    let (witness_negative, witness_positive) = if classification == Convexity::Indefinite {
        let e = sym_eig(&s.matrix)?;
        let last = e.values.len() - 1;
        (
            Some(e.vectors.column(0).iter().copied().collect()),
            Some(e.vectors.column(last).iter().copied().collect()),
        )
    } else {
        (None, None)
    };
    Ok(ConvexityReport {
        classification,
        degree,
        mu_minus: neg,
        mu_plus: pos,
        witness_negative,
        witness_positive,
    })
}

/// `f''(x)[h] = Σ (f⁺_j)ᵀ f⁺_j − Σ (f⁻_l)ᵀ f⁻_l` with each term linear in `h`.
#[derive(Clone, Debug)]
pub struct SdsCertificate {
    pub plus_terms: Vec<NcPoly>,
    pub minus_terms: Vec<NcPoly>,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub enum SdsOutcome {
    Certificate(SdsCertificate),
    /// `Z(x)` is not constant; only the minimal counts `σ±` are known.
    Unsupported { sigma_minus: usize, sigma_plus: usize },
}

/// Sum-and-difference-of-squares decomposition of the Hessian from the eigendecomposition of
/// a constant middle matrix.
pub fn sds_certificate(p: &NcPoly, tol: f64) -> Result<SdsOutcome> {
    require_symmetric(p)?;
    let g = p.g();
    if p.degree().unwrap_or(0) < 2 {
        return Ok(SdsOutcome::Certificate(SdsCertificate {
            plus_terms: vec![],
            minus_terms: vec![],
            residual: 0.0,
        }));
    }
    let z = hessian_middle(p)?;
    let s = scalar_middle(&z, tol)?;
    if !z.is_constant() {
        return Ok(SdsOutcome::Unsupported {
            sigma_minus: s.inertia.neg,
            sigma_plus: s.inertia.pos,
        });
    }
    let e = sym_eig(&s.matrix)?;
    let scale = e.values.iter().fold(0.0_f64, |m, x| m.max(x.abs())).max(1.0);
    let cut = tol * scale;
    let mut plus_terms = Vec::new();
    let mut minus_terms = Vec::new();
    for (k, &lam) in e.values.iter().enumerate() {
        if lam.abs() <= cut {
            continue;
        }
        let root = lam.abs().sqrt();
        let mut f = NcPoly::zero(g);
        for r in 0..z.size() {
            let u = e.vectors[(r, k)];
            if u != 0.0 {
                f = &f + &z.border_poly(r).scale(root * u);
            }
        }
        if lam > 0.0 {
            plus_terms.push(f);
        } else {
            minus_terms.push(f);
        }
    }
    let mut rebuilt = NcPoly::zero(g);
    for f in &plus_terms {
        rebuilt = &rebuilt + &(&f.transpose() * f);
    }
    for f in &minus_terms {
        rebuilt = &rebuilt - &(&f.transpose() * f);
    }
    let residual = (&rebuilt - &hessian(p)).max_abs_coeff();
    Ok(SdsOutcome::Certificate(SdsCertificate {
        plus_terms,
        minus_terms,
        residual,
    }))
}

/// `R(X)ᵀ` as the stacked `n·size × n` matrix of blocks `R_r(X)ᵀ`, so that
/// `p'(X)[H]v = R(X)·ℛ(H)`.
pub fn derivative_row_eval(row: &[NcPoly], x: &[DMatrix<f64>]) -> Result<DMatrix<f64>> {
    let n = x[0].nrows();
    let mut cache = WordCache::new(x);
    let mut out = DMatrix::zeros(n, n * row.len());
    for (r, p) in row.iter().enumerate() {
        out.view_mut((0, r * n), (n, n)).copy_from(&cache.poly(p)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::ParseOptions;

    fn p1(s: &str) -> NcPoly {
        NcPoly::parse(s, 1).unwrap()
    }

    fn x1(s: &str) -> NcPoly {
        NcPoly::parse(s, 1).unwrap()
    }

    fn as_strings(z: &MiddleMatrix) -> Vec<Vec<String>> {
        (0..z.size())
            .map(|r| (0..z.size()).map(|c| z.entry(r, c).to_string()).collect())
            .collect()
    }

    #[test]
    fn cubic_middle() {
        let z = hessian_middle(&p1("x^3")).unwrap();
        assert_eq!(as_strings(&z), vec![vec!["2*x1", "2"], vec!["2", "0"]]);
        assert_eq!(z.reexpand(), hessian(&p1("x^3")));
        let s = scalar_middle(&z, 1e-8).unwrap();
        assert_eq!(s.inertia.counts(), (1, 0, 1));
    }

    #[test]
    fn quartic_middle() {
        let z = hessian_middle(&p1("x^4")).unwrap();
        assert_eq!(
            as_strings(&z),
            vec![
                vec!["2*x1^2", "2*x1", "2"],
                vec!["2*x1", "2", "0"],
                vec!["2", "0", "0"]
            ]
        );
        assert_eq!(scalar_middle(&z, 1e-8).unwrap().inertia.counts(), (1, 0, 2));
    }

    #[test]
    fn sum_of_squares_middle_is_constant() {
        let p = NcPoly::parse("x1^2 + x2^2", 2).unwrap();
        let z = hessian_middle(&p).unwrap();
        assert!(z.is_constant());
        assert_eq!(z.scalar_matrix(), SymMatrix::from_diagonal(&[2.0, 2.0]));
    }

    #[test]
    fn extraction_rejects_bad_input() {
        let f = NcPoly::parse_with("h*x*h*h", 1, ParseOptions::WITH_H).unwrap();
        assert_eq!(extract_middle(&f).unwrap_err(), NcError::NotHQuadratic);
        let f = NcPoly::parse_with("h*h*x", 1, ParseOptions::WITH_H).unwrap();
        assert_eq!(extract_middle(&f).unwrap_err(), NcError::NotSymmetric);
    }

    #[test]
    fn relaxed_cubic() {
        let p = p1("x^3");
        let z0 = relaxed_middle(&p, 0.0, 0.0).unwrap();
        assert_eq!(
            as_strings(&z0),
            vec![vec!["2*x1", "2", "0"], vec!["2", "0", "0"], vec!["0", "0", "0"]]
        );
        let lam = 3.0;
        let z = relaxed_middle(&p, lam, 0.0).unwrap();
        let row = derivative_row(&p, 2).unwrap();
        let row_s: Vec<String> = row.iter().map(|q| q.to_string()).collect();
        assert_eq!(row_s, vec!["x1^2", "x1", "1"]);
        for r in 0..3 {
            for c in 0..3 {
                let expected = &z0.entry(r, c) + &(&row[r].transpose() * &row[c]).scale(lam);
                assert_eq!(z.entry(r, c), expected);
            }
        }
        let zd = relaxed_middle(&p, 0.0, 0.25).unwrap();
        assert_eq!(zd, z0.add_identity(0.25));
    }

    #[test]
    fn degree_bounds() {
        let b = degree_bound_report(&p1("x^3"), 1e-8).unwrap();
        assert_eq!((b.d, b.mu_minus, b.mu_plus, b.bound_minus, b.bound_plus), (3, 1, 1, 4, 4));
        let b = degree_bound_report(&p1("x^4"), 1e-8).unwrap();
        assert_eq!((b.d, b.mu_minus, b.bound_minus), (4, 1, 4));
        let b = degree_bound_report(&NcPoly::parse("x1^2 + x2^2", 2).unwrap(), 1e-8).unwrap();
        assert_eq!((b.d, b.mu_minus, b.bound_minus), (2, 0, 2));
        assert!(degree_bound_report(&NcPoly::parse("x1*x2", 2).unwrap(), 1e-8).is_err());
    }

    #[test]
    fn convexity_examples() {
        let c = classify_convexity(&NcPoly::parse("x1^2 + x2^2", 2).unwrap(), 1e-8).unwrap();
        assert_eq!(c.classification, Convexity::Convex);
        assert_eq!(c.degree, Some(2));
        assert_eq!(classify_convexity(&x1("-x^2"), 1e-8).unwrap().classification, Convexity::Concave);
        let c = classify_convexity(&x1("x^3"), 1e-8).unwrap();
        assert_eq!(c.classification, Convexity::Indefinite);
        assert_eq!((c.mu_minus, c.mu_plus), (1, 1));
        assert!(c.witness_negative.is_some());
        assert_eq!(classify_convexity(&x1("2*x + 1"), 1e-8).unwrap().classification, Convexity::Affine);
    }

    #[test]
    fn sds_examples() {
        match sds_certificate(&NcPoly::parse("x1^2 + x2^2", 2).unwrap(), 1e-8).unwrap() {
            SdsOutcome::Certificate(c) => {
                assert_eq!(c.plus_terms.len(), 2);
                assert!(c.minus_terms.is_empty());
                assert!(c.residual < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
        match sds_certificate(&x1("-x^2"), 1e-8).unwrap() {
            SdsOutcome::Certificate(c) => {
                assert_eq!(c.minus_terms.len(), 1);
                let h = NcPoly::parse_with("h", 1, ParseOptions::WITH_H).unwrap();
                let t = &c.minus_terms[0];
                assert!(t.approx_eq(&h.scale(2f64.sqrt()), 1e-12) || t.approx_eq(&h.scale(-(2f64.sqrt())), 1e-12));
            }
            other => panic!("unexpected {other:?}"),
        }
        match sds_certificate(&x1("x^3"), 1e-8).unwrap() {
            SdsOutcome::Unsupported { sigma_minus, sigma_plus } => assert_eq!((sigma_minus, sigma_plus), (1, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eval_matches_scalar_at_zero() {
        let z = hessian_middle(&p1("x^4 - 2*x^2")).unwrap();
        let zero = vec![DMatrix::zeros(2, 2)];
        let zx = z.eval(&zero).unwrap();
        let s = z.scalar_matrix();
        for r in 0..z.size() {
            for c in 0..z.size() {
                assert_eq!(zx.as_matrix()[(2 * r, 2 * c)], s.as_matrix()[(r, c)]);
            }
        }
    }
}
