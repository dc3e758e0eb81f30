//! Variety-level computations: word independence, annihilating polynomials, the codimension
//! of border-vector ranges, and the signature `C±` of `𝒱(p)`.

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{c_pm, direct_sum, repeat};
use crate::error::{NcError, Result};
use crate::freealg::{NcPoly, Word};
use crate::mateval::{border_map, eval, sym_tuple_basis, word_vectors, Assignment, MatrixPoint};
pub use crate::mateval::alpha;
use crate::middlematrix::{hessian_middle, scalar_middle};
use crate::numerics::{nullspace_orthonormal, rank, sym_eig, sym_eigenvalues, SymMatrix};
use crate::random::{goe, stream_rng};

/// Columns `w(X)v` for `|w| ≤ max_len` in graded-lex order.
pub fn word_matrix(point: &MatrixPoint, max_len: usize) -> DMatrix<f64> {
    let cols = word_vectors(point.x(), point.v(), max_len);
    DMatrix::from_columns(&cols)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceCertificate {
    pub n: usize,
    pub max_len: usize,
    pub words: usize,
    pub rank: usize,
    pub independent: bool,
}

/// Whether `{w(X)v : |w| ≤ max_len}` is linearly independent.
pub fn word_independence(point: &MatrixPoint, max_len: usize, tol: f64) -> IndependenceCertificate {
    let m = word_matrix(point, max_len);
    let r = rank(&m, tol);
    IndependenceCertificate {
        n: point.n(),
        max_len,
        words: m.ncols(),
        rank: r,
        independent: r == m.ncols(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnihilatorResult {
    pub degree: usize,
    /// Unit coefficient vector; the first coefficient above `1e-12` in magnitude is positive.
    pub poly: NcPoly,
    /// `max_i |q(Xⁱ)vⁱ|`.
    pub residual: f64,
}

/// Lowest-degree nonzero `q` with `q(Xⁱ)vⁱ = 0` at every supplied point, searched up to
/// degree `max_degree`. `None` when the word vectors stay independent.
pub fn minimal_annihilator(points: &[MatrixPoint], max_degree: usize, tol: f64) -> Result<Option<AnnihilatorResult>> {
    let g = points
        .first()
        .ok_or_else(|| NcError::Input("no points supplied".into()))?
        .g();
    if let Some(p) = points.iter().find(|p| p.g() != g) {
        return Err(NcError::MismatchedG(g, p.g()));
    }
    for degree in 0..=max_degree {
        let blocks: Vec<DMatrix<f64>> = points.iter().map(|p| word_matrix(p, degree)).collect();
        let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
        let cols = blocks[0].ncols();
        let mut stacked = DMatrix::zeros(rows, cols);
        let mut off = 0;
        for b in &blocks {
            stacked.view_mut((off, 0), (b.nrows(), cols)).copy_from(b);
            off += b.nrows();
        }
        let null = nullspace_orthonormal(&stacked, tol);
        if null.ncols() == 0 {
            continue;
        }
        let mut c = null.column(0).into_owned();
        if let Some(first) = c.iter().find(|t| t.abs() > 1e-12) {
            if *first < 0.0 {
                c = -c;
            }
        }
        let words = Word::x_words_up_to(g, degree);
        let poly = NcPoly::from_terms(g, words.into_iter().zip(c.iter().copied()));
        let residual = (&stacked * &c).amax();
        return Ok(Some(AnnihilatorResult {
            degree,
            poly,
            residual,
        }));
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChsyReport {
    pub g: usize,
    pub n: usize,
    pub r: usize,
    pub s: usize,
    /// `n·g·(α_s − α_r) + g·α_r(α_r − 1)/2`.
    pub formula_bound: usize,
    /// `g·α_r(α_r − 1)/2`, stated for `s = r`.
    pub formula_exact: Option<usize>,
    /// Independence of `{w(X)v : |w| ≤ r}` at the supplied point.
    pub independent: Option<bool>,
    /// `n·g·α_s − rank ℛ_s`, computed only at independence-certified points.
    pub numeric_codim: Option<usize>,
}

pub fn chsy_formula_exact(g: usize, r: usize) -> usize {
    let a = alpha(g, r);
    g * a * (a - 1) / 2
}

pub fn chsy_codim(g: usize, n: usize, r: usize, s: usize, point: Option<&MatrixPoint>, tol: f64) -> Result<ChsyReport> {
    if s < r {
        return Err(NcError::Input(format!("need s >= r, got r = {r}, s = {s}")));
    }
    let formula_bound = n * g * (alpha(g, s) - alpha(g, r)) + chsy_formula_exact(g, r);
    let mut report = ChsyReport {
        g,
        n,
        r,
        s,
        formula_bound,
        formula_exact: (s == r).then(|| chsy_formula_exact(g, r)),
        independent: None,
        numeric_codim: None,
    };
    if let Some(pt) = point {
        if pt.g() != g || pt.n() != n {
            return Err(NcError::Dimension(format!(
                "point has (g, n) = ({}, {}), expected ({g}, {n})",
                pt.g(),
                pt.n()
            )));
        }
        let independent = word_independence(pt, r, tol).independent;
        report.independent = Some(independent);
        if independent {
            report.numeric_codim = Some(numeric_codim(pt, s, tol)?);
        }
    }
    Ok(report)
}

/// `n·g·α_s − dim ℛ_s((Sⁿ)^g)` at a point.
pub fn numeric_codim(point: &MatrixPoint, s: usize, tol: f64) -> Result<usize> {
    let basis = sym_tuple_basis(point.g(), point.n());
    let m = border_map(point, &basis, s)?;
    Ok(m.nrows() - rank(&m, tol))
}

fn neg_count(p: &NcPoly, x: &[DMatrix<f64>]) -> Result<usize> {
    let values = sym_eigenvalues(&SymMatrix::new(eval(p, &Assignment::x(x))?)?)?;
    Ok(values.iter().filter(|&&v| v < 0.0).count())
}

fn along(x: &[DMatrix<f64>], y: &[DMatrix<f64>], t: f64) -> Vec<DMatrix<f64>> {
    x.iter().zip(y).map(|(a, b)| a + b * t).collect()
}

/// Kernel vector of `p(X)` for the eigenvalue closest to zero, if that eigenvalue is within
/// `tol` of zero relative to the spectral radius.
fn kernel_point(p: &NcPoly, x: Vec<DMatrix<f64>>, tol: f64) -> Result<Option<MatrixPoint>> {
    let e = sym_eig(&SymMatrix::new(eval(p, &Assignment::x(&x))?)?)?;
    let scale = e.values.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    let (k, best) = e
        .values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("nonempty spectrum");
    if best.abs() > tol * scale {
        return Ok(None);
    }
    Ok(Some(MatrixPoint::new(x, e.vectors.column(k).into_owned())?))
}

/// Greedily direct-sums points that raise the rank of the stacked word matrix until the word
/// vectors of length at most `max_len` are independent. Returns the sum and the number of
/// summands.
pub fn independent_direct_sum(points: &[MatrixPoint], max_len: usize, tol: f64) -> Result<Option<(MatrixPoint, usize)>> {
    let mut chosen: Vec<MatrixPoint> = Vec::new();
    let mut current = 0;
    for pt in points {
        let mut trial = chosen.clone();
        trial.push(pt.clone());
        let cert = word_independence(&direct_sum(&trial)?, max_len, tol);
        if cert.rank > current {
            current = cert.rank;
            chosen = trial;
            if cert.independent {
                let n = chosen.len();
                return Ok(Some((direct_sum(&chosen)?, n)));
            }
        }
    }
    Ok(None)
}

const LINE_SAMPLES: usize = 64;
const LINE_RADIUS: f64 = 3.0;
const BISECTION_STEPS: usize = 100;

/// Random point of `𝒱_n(p)`: a GOE tuple `X` is moved along a random GOE direction until an
/// eigenvalue of `p` crosses zero, located by bisection on the number of negative
/// eigenvalues. Returns `None` when no crossing is seen within a few lines.
pub fn sample_variety_point<R: Rng + ?Sized>(p: &NcPoly, n: usize, rng: &mut R, tol: f64) -> Result<Option<MatrixPoint>> {
    let g = p.g();
    for _ in 0..4 {
        let x: Vec<DMatrix<f64>> = (0..g).map(|_| goe(n, rng)).collect();
        if let Some(pt) = kernel_point(p, x.clone(), tol)? {
            return Ok(Some(pt));
        }
        let y: Vec<DMatrix<f64>> = (0..g).map(|_| goe(n, rng)).collect();
        let ts: Vec<f64> = (0..=LINE_SAMPLES)
            .map(|k| -LINE_RADIUS + 2.0 * LINE_RADIUS * k as f64 / LINE_SAMPLES as f64)
            .collect();
        let counts = ts
            .iter()
            .map(|&t| neg_count(p, &along(&x, &y, t)))
            .collect::<Result<Vec<_>>>()?;
        // start the search from the crossing nearest to X
        let mut crossings: Vec<usize> = (0..LINE_SAMPLES).filter(|&k| counts[k] != counts[k + 1]).collect();
        crossings.sort_by(|&a, &b| (ts[a].abs() + ts[a + 1].abs()).total_cmp(&(ts[b].abs() + ts[b + 1].abs())));
        for k in crossings {
            let (mut lo, mut hi) = (ts[k], ts[k + 1]);
            let lo_count = counts[k];
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if neg_count(p, &along(&x, &y, mid))? == lo_count {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            for t in [hi, lo] {
                if let Some(pt) = kernel_point(p, along(&x, &y, t), tol)? {
                    return Ok(Some(pt));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignatureMode {
    ScalarMiddle,
    CeilingAtPoint,
    Sampled,
}

#[derive(Clone, Debug)]
pub struct VarietyConfig {
    pub mode: SignatureMode,
    pub seed: u64,
    /// Sample budget per dimension.
    pub samples: usize,
    /// Dimensions for sampled mode; empty picks `1..=min(6, threshold + 1)`.
    pub dims: Vec<usize>,
    pub workers: usize,
    pub tol: f64,
    /// Point used by the ceiling mode instead of a sampled one.
    pub point: Option<MatrixPoint>,
}

impl Default for VarietyConfig {
    fn default() -> Self {
        VarietyConfig {
            mode: SignatureMode::ScalarMiddle,
            seed: 0,
            samples: 32,
            dims: Vec::new(),
            workers: 1,
            tol: crate::DEFAULT_TOL,
            point: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaSample {
    pub n: usize,
    pub points: usize,
    pub c_minus_max: usize,
    pub c_plus_max: usize,
    pub beta_minus: f64,
    pub beta_plus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarietySignatureReport {
    #[serde(rename = "C_minus")]
    pub c_minus: usize,
    #[serde(rename = "C_plus")]
    pub c_plus: usize,
    pub method: SignatureMode,
    /// `certified`, `uncertified` or `lower-bound`.
    pub validity: String,
    pub mu_minus: usize,
    pub mu_plus: usize,
    /// `g·α_{d−1}(α_{d−1} − 1)/2`; the ceiling identity needs `n` above it.
    pub threshold: usize,
    pub n: Option<usize>,
    pub c_minus_at_point: Option<usize>,
    pub c_plus_at_point: Option<usize>,
    pub certificate: Option<IndependenceCertificate>,
    pub beta_samples: Vec<BetaSample>,
    pub diagnostics: Vec<String>,
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| NcError::Numerical(e.to_string()))
}

/// Samples `count` variety points of size `n`, one deterministic stream per index.
fn sample_points(p: &NcPoly, n: usize, cfg: &VarietyConfig, stream_base: u64, count: usize) -> Result<Vec<Option<MatrixPoint>>> {
    pool(cfg.workers)?.install(|| {
        (0..count)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(cfg.seed, stream_base + i as u64);
                sample_variety_point(p, n, &mut rng, cfg.tol)
            })
            .collect()
    })
}

pub fn variety_signature(p: &NcPoly, cfg: &VarietyConfig) -> Result<VarietySignatureReport> {
    if !p.is_symmetric() {
        return Err(NcError::NotSymmetric);
    }
    let d = p.degree().unwrap_or(0);
    if d < 2 {
        return Err(NcError::Input("the signature needs a polynomial of degree at least 2".into()));
    }
    let g = p.g();
    let s = scalar_middle(&hessian_middle(p)?, cfg.tol)?;
    let (mu_minus, mu_plus) = (s.inertia.neg, s.inertia.pos);
    let threshold = chsy_formula_exact(g, d - 1);
    let mut report = VarietySignatureReport {
        c_minus: mu_minus,
        c_plus: mu_plus,
        method: cfg.mode,
        validity: "uncertified".into(),
        mu_minus,
        mu_plus,
        threshold,
        n: None,
        c_minus_at_point: None,
        c_plus_at_point: None,
        certificate: None,
        beta_samples: Vec::new(),
        diagnostics: Vec::new(),
    };
    match cfg.mode {
        SignatureMode::ScalarMiddle => {
            let n = alpha(g, d - 1);
            let found: Vec<MatrixPoint> = sample_points(p, n, cfg, 0, cfg.samples)?.into_iter().flatten().collect();
            match independent_direct_sum(&found, d - 1, cfg.tol)? {
                Some((pt, summands)) => {
                    report.certificate = Some(word_independence(&pt, d - 1, cfg.tol));
                    report.validity = "certified".into();
                    report.n = Some(pt.n());
                    report
                        .diagnostics
                        .push(format!("certificate is a direct sum of {summands} sampled variety points"));
                }
                None => report.diagnostics.push(format!(
                    "no independence certificate from {} sampled variety points of size {n}",
                    found.len()
                )),
            }
        }
        SignatureMode::CeilingAtPoint => {
            let pt = match &cfg.point {
                Some(pt) => pt.clone(),
                None => {
                    let n = alpha(g, d - 1);
                    let found: Vec<MatrixPoint> =
                        sample_points(p, n, cfg, 0, cfg.samples)?.into_iter().flatten().collect();
                    let (base, _) = independent_direct_sum(&found, d - 1, cfg.tol)?.ok_or_else(|| {
                        NcError::Numerical("no independent direct sum of sampled variety points".into())
                    })?;
                    // copies keep independence and push the size past the threshold
                    repeat(&base, threshold / base.n() + 1)?
                }
            };
            if pt.g() != g {
                return Err(NcError::MismatchedG(g, pt.g()));
            }
            let n = pt.n();
            if n <= threshold {
                return Err(NcError::Contract(format!(
                    "ceiling identity needs n > {threshold}, point has n = {n}"
                )));
            }
            let c = c_pm(p, &pt, cfg.tol)?;
            let scale = pt.v().norm().max(1.0);
            if c.variety_residual > 1e3 * cfg.tol * scale {
                report
                    .diagnostics
                    .push(format!("point is off the variety: |p(X)v| = {:e}", c.variety_residual));
            }
            let cert = word_independence(&pt, d - 1, cfg.tol);
            report.validity = if cert.independent { "certified" } else { "uncertified" }.into();
            if !cert.independent {
                report
                    .diagnostics
                    .push("word vectors of length < deg p are dependent at the point".into());
            }
            report.certificate = Some(cert);
            report.n = Some(n);
            report.c_minus_at_point = Some(c.c_minus);
            report.c_plus_at_point = Some(c.c_plus);
            report.c_minus = ceil_div(c.c_minus, n);
            report.c_plus = ceil_div(c.c_plus, n);
        }
        SignatureMode::Sampled => {
            let dims: Vec<usize> = if cfg.dims.is_empty() {
                (1..=(threshold + 1).min(6)).collect()
            } else {
                cfg.dims.clone()
            };
            let (mut best_minus, mut best_plus) = (0, 0);
            for (k, &n) in dims.iter().enumerate() {
                let base = (k as u64) << 32;
                let pts: Vec<MatrixPoint> = sample_points(p, n, cfg, base, cfg.samples)?.into_iter().flatten().collect();
                let reports = pool(cfg.workers)?.install(|| {
                    pts.par_iter().map(|pt| c_pm(p, pt, cfg.tol)).collect::<Result<Vec<_>>>()
                })?;
                let cm = reports.iter().map(|r| r.c_minus).max().unwrap_or(0);
                let cp = reports.iter().map(|r| r.c_plus).max().unwrap_or(0);
                if !pts.is_empty() {
                    best_minus = best_minus.max(ceil_div(cm, n));
                    best_plus = best_plus.max(ceil_div(cp, n));
                }
                report.beta_samples.push(BetaSample {
                    n,
                    points: pts.len(),
                    c_minus_max: cm,
                    c_plus_max: cp,
                    beta_minus: cm as f64 / n as f64,
                    beta_plus: cp as f64 / n as f64,
                });
            }
            if report.beta_samples.iter().all(|b| b.points == 0) {
                return Err(NcError::Numerical("no variety point found in the sample budget".into()));
            }
            report.c_minus = best_minus;
            report.c_plus = best_plus;
            report.validity = "lower-bound".into();
        }
    }
    Ok(report)
}
