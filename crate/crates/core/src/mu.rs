//! Bounds on the minimal faithful representation dimension: structural
//! lower-bound rules, witness upper bounds, coarse formula bounds, and a
//! least-squares feasibility search over upper-triangular matrices.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog;
use crate::liealg::LieAlgebra;
use crate::linalg::Matrix;
use crate::reps::{RepError, Representation};
use crate::scalars::{Scalar, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MuError {
    #[error("rule {rule} not applicable: {reason}")]
    NotApplicable { rule: Rule, reason: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("inconsistent bounds: lower {lower} > upper {upper}")]
    Inconsistent { lower: usize, upper: usize },
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// Where a lower bound comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Abelian of dimension `n`: `ceil(2 sqrt(n-1))`, and 1 for `n = 1`.
    Abelian,
    /// 2-step nilpotent with 1-dimensional center, `n` odd: `(n+3)/2`.
    TwoStepNilpotent,
    /// Filiform with abelian derived algebra or `n < 10`: `n`.
    Filiform,
    /// `n <= 4`, `[g,g]` abelian of dimension `n-1`: at least `n`.
    TwoSolvable,
    /// Invariants differ from every algebra embeddable in `gl(2)`: at least 3.
    Mu2Fingerprint,
    /// No faithful representation found by the numeric search.
    SearchEvidence,
    /// A faithful representation of a non-abelian or 2+-dimensional
    /// algebra needs dimension at least 2.
    Trivial,
}

impl Rule {
    pub fn is_proof(self) -> bool {
        self != Rule::SearchEvidence
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Abelian => "abelian",
            Rule::TwoStepNilpotent => "two_step_nilpotent",
            Rule::Filiform => "filiform",
            Rule::TwoSolvable => "two_solvable",
            Rule::Mu2Fingerprint => "mu2_fingerprint",
            Rule::SearchEvidence => "search_evidence",
            Rule::Trivial => "trivial",
        };
        f.write_str(s)
    }
}

fn not_applicable(rule: Rule, reason: impl Into<String>) -> MuError {
    MuError::NotApplicable {
        rule,
        reason: reason.into(),
    }
}

/// `ceil(2 sqrt(n - 1))` for `n >= 2`, and 1 for `n = 1`.
pub fn abelian_mu(n: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    let target = 4 * (n - 1);
    (0..).find(|k| k * k >= target).expect("unbounded search")
}

pub fn bound_abelian(g: &LieAlgebra) -> Result<usize, MuError> {
    if !g.is_abelian() {
        return Err(not_applicable(Rule::Abelian, "algebra is not abelian"));
    }
    Ok(abelian_mu(g.dim()))
}

pub fn bound_2step(g: &LieAlgebra, tol: Tolerance) -> Result<usize, MuError> {
    let n = g.dim();
    if !g.is_2step_with_1dim_center(tol) {
        return Err(not_applicable(
            Rule::TwoStepNilpotent,
            "not 2-step nilpotent with 1-dimensional center",
        ));
    }
    if n.is_multiple_of(2) {
        return Err(not_applicable(Rule::TwoStepNilpotent, "dimension is even"));
    }
    Ok((n + 3) / 2)
}

pub fn bound_filiform(g: &LieAlgebra, tol: Tolerance) -> Result<usize, MuError> {
    let n = g.dim();
    if !g.is_filiform(tol) {
        return Err(not_applicable(Rule::Filiform, "not filiform"));
    }
    if !(g.is_2solvable(tol) || n < 10) {
        return Err(not_applicable(
            Rule::Filiform,
            "derived algebra is not abelian and dimension is at least 10",
        ));
    }
    Ok(n)
}

pub fn bound_2solvable(g: &LieAlgebra, tol: Tolerance) -> Result<usize, MuError> {
    let n = g.dim();
    if n > 4 {
        return Err(not_applicable(Rule::TwoSolvable, "dimension exceeds 4"));
    }
    if !g.is_2solvable(tol) {
        return Err(not_applicable(Rule::TwoSolvable, "derived algebra is not abelian"));
    }
    let d = g.derived_algebra(tol).len();
    if d + 1 != n {
        return Err(not_applicable(
            Rule::TwoSolvable,
            format!("derived algebra has dimension {d}, not {}", n - 1),
        ));
    }
    Ok(n)
}

/// Isomorphism invariants compared by the `gl(2)` rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub center_dim: usize,
    pub derived: Vec<usize>,
    pub lower_central: Vec<usize>,
    pub solvable: bool,
    pub nilpotent: bool,
}

pub fn fingerprint(g: &LieAlgebra, tol: Tolerance) -> Fingerprint {
    Fingerprint {
        dim: g.dim(),
        center_dim: g.center_dim(tol),
        derived: g.derived_series_dims(tol),
        lower_central: g.lower_central_series_dims(tol),
        solvable: g.is_solvable(tol),
        nilpotent: g.is_nilpotent(tol),
    }
}

/// Fingerprints of the algebras admitting a faithful 2-dimensional
/// representation: C^2, r2, r2+C, sl2, sl2+C.
pub fn mu2_fingerprints(tol: Tolerance) -> Vec<Fingerprint> {
    ["c2", "r2", "r2_c", "sl2", "sl2_c"]
        .iter()
        .map(|name| {
            let g = catalog::instantiate(name, &catalog::Params::new()).expect("parameter-free entry");
            fingerprint(&g, tol)
        })
        .collect()
}

/// Lower bound 3 when no faithful 2-dimensional representation can exist.
/// Sound on the catalog; in general it only compares invariants.
pub fn bound_mu2_fingerprint(g: &LieAlgebra, tol: Tolerance) -> Result<usize, MuError> {
    if g.dim() < 2 {
        return Err(not_applicable(Rule::Mu2Fingerprint, "dimension below 2"));
    }
    if g.dim() > 4 {
        return Ok(3);
    }
    let fp = fingerprint(g, tol);
    if mu2_fingerprints(tol).contains(&fp) {
        Err(not_applicable(
            Rule::Mu2Fingerprint,
            "invariants match an algebra with a faithful 2-dimensional representation",
        ))
    } else {
        Ok(3)
    }
}

pub fn bound_trivial(g: &LieAlgebra) -> usize {
    if g.dim() >= 2 {
        2
    } else {
        1
    }
}

fn partitions(upto: usize) -> Vec<u128> {
    let mut p = vec![0u128; upto + 1];
    p[0] = 1;
    for part in 1..=upto {
        for total in part..=upto {
            p[total] += p[total - part];
        }
    }
    p
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Informational upper bounds: `1 + n + n^n` for solvable algebras and
/// `sum_{j=0}^{k} C(n-j, k-j) p(j)` for nilpotent class `k` (with `p` the
/// partition function), the latter only when `1 <= k < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoarseBounds {
    pub solvable: u128,
    pub nilpotent: Option<u128>,
}

pub fn coarse_bounds(n: usize, class: Option<usize>) -> CoarseBounds {
    let solvable = 1 + n as u128 + (n as u128).pow(n as u32);
    let nilpotent = class.filter(|&k| k >= 1 && k < n).map(|k| {
        let p = partitions(k);
        (0..=k).map(|j| binomial(n - j, k - j) * p[j]).sum()
    });
    CoarseBounds { solvable, nilpotent }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    Proven,
    Evidence,
    /// Lower and upper bounds differ.
    Unresolved,
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grade::Proven => "proven",
            Grade::Evidence => "evidence",
            Grade::Unresolved => "unresolved",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpperSource {
    Witness,
    Adjoint,
    Search,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MuCertificate {
    pub algebra: String,
    pub lower: usize,
    pub lower_rule: Rule,
    /// Every rule that applied, with its bound.
    pub rules: Vec<(Rule, usize)>,
    pub upper: Option<usize>,
    pub upper_source: Option<UpperSource>,
    pub witness: Option<Representation>,
    pub grade: Grade,
    pub notes: Vec<String>,
}

impl MuCertificate {
    /// The certified value when the bounds meet.
    pub fn value(&self) -> Option<usize> {
        (self.upper == Some(self.lower)).then_some(self.lower)
    }
}

/// What the numeric search must show before it counts as a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvidenceBar {
    pub min_restarts: usize,
    pub threshold: f64,
}

impl Default for EvidenceBar {
    fn default() -> Self {
        EvidenceBar {
            min_restarts: 200,
            threshold: 1e-6,
        }
    }
}

/// Every structural rule that applies to `g`, with its bound.
pub fn structural_bounds(g: &LieAlgebra, tol: Tolerance) -> Vec<(Rule, usize)> {
    let mut out = Vec::new();
    if let Ok(b) = bound_abelian(g) {
        out.push((Rule::Abelian, b));
    }
    if let Ok(b) = bound_2step(g, tol) {
        out.push((Rule::TwoStepNilpotent, b));
    }
    if let Ok(b) = bound_filiform(g, tol) {
        out.push((Rule::Filiform, b));
    }
    if let Ok(b) = bound_2solvable(g, tol) {
        out.push((Rule::TwoSolvable, b));
    }
    if let Ok(b) = bound_mu2_fingerprint(g, tol) {
        out.push((Rule::Mu2Fingerprint, b));
    }
    out.push((Rule::Trivial, bound_trivial(g)));
    out
}

/// Assembles lower and upper bounds. A witness must be a faithful
/// homomorphism; search evidence counts only when it meets `bar`.
pub fn mu_certify(
    g: &LieAlgebra,
    witness: Option<&Representation>,
    search: Option<&SearchReport>,
    bar: EvidenceBar,
    tol: Tolerance,
) -> Result<MuCertificate, MuError> {
    let mut rules = structural_bounds(g, tol);
    let mut notes = Vec::new();
    let mut upper: Option<(usize, UpperSource, Option<Representation>)> = None;

    if let Some(w) = witness {
        let kernel = w.check_faithful(tol)?;
        if !kernel.is_empty() {
            return Err(MuError::Precondition(format!(
                "witness has a {}-dimensional kernel",
                kernel.len()
            )));
        }
        upper = Some((w.dim(), UpperSource::Witness, Some(w.clone())));
    }
    if g.center_dim(tol) == 0 && upper.as_ref().is_none_or(|(u, _, _)| g.dim() < *u) {
        upper = Some((g.dim(), UpperSource::Adjoint, Some(g.adjoint_rep())));
    }
    if let Some(report) = search {
        match &report.verdict {
            Verdict::Found(rep) => {
                if upper.as_ref().is_none_or(|(u, _, _)| report.target_dim < *u) {
                    upper = Some((report.target_dim, UpperSource::Search, Some(rep.clone())));
                }
            }
            Verdict::InfeasibleEvidence => {
                if report.meets(bar) {
                    rules.push((Rule::SearchEvidence, report.target_dim + 1));
                } else {
                    notes.push(format!(
                        "search at dimension {} below the evidence bar ({} restarts, best residual {:.3e})",
                        report.target_dim,
                        report.restarts,
                        report.min_residual()
                    ));
                }
            }
        }
    }

    // highest bound wins; among equal bounds a proof beats evidence
    let (lower_rule, lower) = rules
        .iter()
        .copied()
        .max_by_key(|(r, b)| (*b, r.is_proof()))
        .expect("trivial rule always applies");
    let (upper_val, upper_source, witness) = match upper {
        Some((u, s, w)) => (Some(u), Some(s), w),
        None => (None, None, None),
    };
    if let Some(u) = upper_val {
        if lower > u {
            return Err(MuError::Inconsistent { lower, upper: u });
        }
    }
    let grade = match upper_val {
        Some(u) if u == lower && lower_rule.is_proof() => Grade::Proven,
        Some(u) if u == lower => Grade::Evidence,
        _ => Grade::Unresolved,
    };
    Ok(MuCertificate {
        algebra: g.name().to_string(),
        lower,
        lower_rule,
        rules,
        upper: upper_val,
        upper_source,
        witness,
        grade,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Found(Representation),
    InfeasibleEvidence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub algebra: String,
    pub target_dim: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Final residual norm of each restart, in restart order.
    pub best_residuals: Vec<f64>,
    pub verdict: Verdict,
}

impl SearchReport {
    pub fn min_residual(&self) -> f64 {
        self.best_residuals.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Infeasible with at least `min_restarts` restarts, all above threshold.
    pub fn meets(&self, bar: EvidenceBar) -> bool {
        matches!(self.verdict, Verdict::InfeasibleEvidence)
            && self.restarts >= bar.min_restarts
            && self.best_residuals.iter().all(|&r| r > bar.threshold)
    }
}

/// Tuning of the feasibility search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub max_iterations: usize,
    /// Minimum determinant of the Gram matrix of the normalised images.
    pub gram_floor: f64,
    /// Upper bound on the Frobenius norm of each image.
    pub norm_cap: f64,
    /// Residual below which a restart counts as a solution.
    pub found_threshold: f64,
    /// Tolerance for re-verifying a found witness.
    pub verify_tolerance: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_iterations: 400,
            gram_floor: 0.1,
            norm_cap: 10.0,
            found_threshold: 1e-10,
            verify_tolerance: 1e-6,
        }
    }
}

pub fn search_faithful(g: &LieAlgebra, m: usize, restarts: usize, seed: u64) -> Result<SearchReport, MuError> {
    search_faithful_with(g, m, restarts, seed, SearchOptions::default())
}

/// Least squares over upper-triangular complex `m x m` images, one restart
/// per independent ChaCha stream of `seed`.
///
/// The residual vector holds the real and imaginary parts of the upper
/// triangle of `[A_i, A_j] - sum_k c_ij^k A_k` for every `i < j`, then
/// `max(0, gram_floor - det G)` where `G` is the Gram matrix of the images
/// scaled to unit Frobenius norm, then `max(0, 1 - |A_i|_F)` and
/// `max(0, |A_i|_F - norm_cap)` per generator. The penalties confine the
/// search to a compact set of injective maps, so when no faithful
/// representation exists the residual stays bounded away from zero instead
/// of creeping towards it along a degenerating sequence.
pub fn search_faithful_with(
    g: &LieAlgebra,
    m: usize,
    restarts: usize,
    seed: u64,
    opts: SearchOptions,
) -> Result<SearchReport, MuError> {
    let tol = Tolerance::default();
    if m == 0 {
        return Err(MuError::Precondition("target dimension must be positive".into()));
    }
    if !g.is_solvable(tol) {
        return Err(MuError::Precondition(format!(
            "{} is not solvable; the upper-triangular ansatz does not apply",
            g.name()
        )));
    }
    let model = Model::new(g, m, &opts);
    let runs: Vec<(f64, Vec<f64>)> = (0..restarts)
        .into_par_iter()
        .map(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx as u64);
            let p0: Vec<f64> = (0..model.nparams()).map(|_| StandardNormal.sample(&mut rng)).collect();
            model.minimize(p0, opts.max_iterations)
        })
        .collect();
    let best_residuals: Vec<f64> = runs.iter().map(|(r, _)| *r).collect();
    let verify = Tolerance::new(opts.verify_tolerance);
    let mut verdict = Verdict::InfeasibleEvidence;
    for (res, p) in &runs {
        if *res < opts.found_threshold {
            let rep = model.representation(g, p);
            if rep.is_faithful(verify) {
                verdict = Verdict::Found(rep);
                break;
            }
        }
    }
    Ok(SearchReport {
        algebra: g.name().to_string(),
        target_dim: m,
        restarts,
        seed,
        best_residuals,
        verdict,
    })
}

/// Upper-triangular `m x m` complex matrices stored row-major.
struct Model {
    n: usize,
    m: usize,
    tri: Vec<(usize, usize)>,
    /// `(i, j, [(k, c_ij^k)])` for every pair `i < j`.
    pairs: Vec<(usize, usize, Vec<(usize, Complex64)>)>,
    gram_floor: f64,
    norm_cap: f64,
}

impl Model {
    fn new(g: &LieAlgebra, m: usize, opts: &SearchOptions) -> Self {
        let n = g.dim();
        let tri = (0..m).flat_map(|u| (u..m).map(move |v| (u, v))).collect();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let coeffs = g
                    .bracket_basis(i, j)
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.to_complex()))
                    .collect();
                pairs.push((i, j, coeffs));
            }
        }
        Model {
            n,
            m,
            tri,
            pairs,
            gram_floor: opts.gram_floor,
            norm_cap: opts.norm_cap,
        }
    }

    fn k(&self) -> usize {
        self.tri.len()
    }

    fn nparams(&self) -> usize {
        2 * self.n * self.k()
    }

    fn nhom(&self) -> usize {
        2 * self.pairs.len() * self.k()
    }

    fn nresiduals(&self) -> usize {
        self.nhom() + 1 + 2 * self.n
    }

    /// Parameter layout: real parts of all images, then imaginary parts.
    fn mats(&self, p: &[f64]) -> Vec<Vec<Complex64>> {
        let k = self.k();
        let half = self.n * k;
        (0..self.n)
            .map(|a| {
                let mut mat = vec![Complex64::new(0.0, 0.0); self.m * self.m];
                for (t, &(u, v)) in self.tri.iter().enumerate() {
                    mat[u * self.m + v] = Complex64::new(p[a * k + t], p[half + a * k + t]);
                }
                mat
            })
            .collect()
    }

    fn hom_block(&self, mats: &[Vec<Complex64>], out: &mut [f64]) {
        let (m, k) = (self.m, self.k());
        for (pi, (i, j, coeffs)) in self.pairs.iter().enumerate() {
            let (a, b) = (&mats[*i], &mats[*j]);
            for (t, &(u, v)) in self.tri.iter().enumerate() {
                let mut z = Complex64::new(0.0, 0.0);
                for w in u..=v {
                    z += a[u * m + w] * b[w * m + v] - b[u * m + w] * a[w * m + v];
                }
                for (c_k, c) in coeffs {
                    z -= mats[*c_k][u * m + v] * c;
                }
                out[2 * (pi * k + t)] = z.re;
                out[2 * (pi * k + t) + 1] = z.im;
            }
        }
    }

    fn gram_penalty(&self, mats: &[Vec<Complex64>]) -> f64 {
        let norms: Vec<f64> = mats.iter().map(|a| frobenius(a).max(1e-300)).collect();
        let mut gram = DMatrix::<Complex64>::zeros(self.n, self.n);
        for a in 0..self.n {
            for b in a..self.n {
                let dot: Complex64 = mats[a].iter().zip(&mats[b]).map(|(x, y)| x.conj() * y).sum();
                let z = dot / (norms[a] * norms[b]);
                gram[(a, b)] = z;
                gram[(b, a)] = z.conj();
            }
        }
        (self.gram_floor - gram.determinant().re).max(0.0)
    }

    /// Gradient of the active Gram penalty `floor - f`, where
    /// `f = det(S^H S) / prod |A_a|^2` and `S` stacks the flattened images.
    /// With `G = S^H S`, `d log det G` in the real (imaginary) part of
    /// `S[e, a]` is `2 Re (S G^-1)[e, a]` (`2 Im`).
    fn gram_gradient(&self, p: &[f64], mats: &[Vec<Complex64>]) -> Vec<f64> {
        let mut out = vec![0.0; self.nparams()];
        let (k, half, mm) = (self.k(), self.n * self.k(), self.m * self.m);
        let s = DMatrix::from_fn(mm, self.n, |e, a| mats[a][e]);
        let gram = s.ad_mul(&s);
        let norms2: Vec<f64> = mats.iter().map(|a| frobenius(a).powi(2)).collect();
        let f = gram.determinant().re / norms2.iter().product::<f64>();
        let inverse = if f > 1e-8 { gram.try_inverse() } else { None };
        let Some(inverse) = inverse else {
            // near-singular Gram matrix: fall back to central differences
            let step = 1e-7;
            let mut q = p.to_vec();
            for col in 0..self.nparams() {
                let orig = q[col];
                q[col] = orig + step;
                let plus = self.gram_penalty(&self.mats(&q));
                q[col] = orig - step;
                let minus = self.gram_penalty(&self.mats(&q));
                q[col] = orig;
                out[col] = (plus - minus) / (2.0 * step);
            }
            return out;
        };
        let sg = &s * inverse;
        for a in 0..self.n {
            for (t, &(u, v)) in self.tri.iter().enumerate() {
                let z = sg[(u * self.m + v, a)];
                let (re, im) = (a * k + t, half + a * k + t);
                out[re] = -f * (2.0 * z.re - 2.0 * p[re] / norms2[a]);
                out[im] = -f * (2.0 * z.im - 2.0 * p[im] / norms2[a]);
            }
        }
        out
    }

    fn residual(&self, p: &[f64]) -> Vec<f64> {
        let mats = self.mats(p);
        let h = self.nhom();
        let mut out = vec![0.0; self.nresiduals()];
        self.hom_block(&mats, &mut out[..h]);
        out[h] = self.gram_penalty(&mats);
        for (a, mat) in mats.iter().enumerate() {
            let nr = frobenius(mat);
            out[h + 1 + 2 * a] = (1.0 - nr).max(0.0);
            out[h + 2 + 2 * a] = (nr - self.norm_cap).max(0.0);
        }
        out
    }

    /// Penalty rows are filled only where the penalty is active.
    fn jacobian(&self, p: &[f64], r: &[f64]) -> DMatrix<f64> {
        let mats = self.mats(p);
        let (m, k) = (self.m, self.k());
        let half = self.n * k;
        let h = self.nhom();
        // row index of output entry (r, c) within a pair block
        let mut tri_index = vec![usize::MAX; m * m];
        for (s, &(u, v)) in self.tri.iter().enumerate() {
            tri_index[u * m + v] = s;
        }
        let mut jac = DMatrix::zeros(self.nresiduals(), self.nparams());
        let put = |jac: &mut DMatrix<f64>, pi: usize, s: usize, col: usize, z: Complex64| {
            let row = 2 * (pi * k + s);
            // derivative in the imaginary-part parameter is i * z
            jac[(row, col)] += z.re;
            jac[(row + 1, col)] += z.im;
            jac[(row, half + col)] -= z.im;
            jac[(row + 1, half + col)] += z.re;
        };
        for (pi, (i, j, coeffs)) in self.pairs.iter().enumerate() {
            for (t, &(u, v)) in self.tri.iter().enumerate() {
                // d/dE_uv of A_i B - B A_i is E B - B E: row u gets B[v, c], column v gets -B[r, u]
                for (a, other, sign) in [(*i, &mats[*j], 1.0), (*j, &mats[*i], -1.0)] {
                    let col = a * k + t;
                    for c in v..m {
                        put(&mut jac, pi, tri_index[u * m + c], col, other[v * m + c] * sign);
                    }
                    for rr in 0..=u {
                        put(&mut jac, pi, tri_index[rr * m + v], col, -other[rr * m + u] * sign);
                    }
                }
                for (c_k, c) in coeffs {
                    put(&mut jac, pi, t, c_k * k + t, -c);
                }
            }
        }
        for (a, mat) in mats.iter().enumerate() {
            let nr = frobenius(mat).max(1e-300);
            let low = r[h + 1 + 2 * a] > 0.0;
            let high = r[h + 2 + 2 * a] > 0.0;
            for t in 0..k {
                for col in [a * k + t, half + a * k + t] {
                    let d = p[col] / nr;
                    if low {
                        jac[(h + 1 + 2 * a, col)] = -d;
                    }
                    if high {
                        jac[(h + 2 + 2 * a, col)] = d;
                    }
                }
            }
        }
        if r[h] > 0.0 {
            for (col, d) in self.gram_gradient(p, &mats).into_iter().enumerate() {
                jac[(h, col)] = d;
            }
        }
        jac
    }

    /// Levenberg-Marquardt with Nielsen's damping update. Returns the final
    /// residual norm and parameters.
    fn minimize(&self, p0: Vec<f64>, max_iterations: usize) -> (f64, Vec<f64>) {
        let mut p = DVector::from_vec(p0);
        let mut r = self.residual(p.as_slice());
        let mut cost = sumsq(&r);
        let mut lambda: Option<f64> = None;
        let mut nu = 2.0;
        let mut stalled = 0;
        for _ in 0..max_iterations {
            if cost < 1e-28 {
                break;
            }
            let jac = self.jacobian(p.as_slice(), &r);
            let (jtj, grad) = normal_equations(&jac, &r);
            if grad.amax() < 1e-20 {
                break;
            }
            let mut damping = *lambda.get_or_insert_with(|| 1e-3 * jtj.diagonal().max().max(1e-12));
            let mut accepted = false;
            while damping < 1e20 {
                let mut lhs = jtj.clone();
                for d in 0..lhs.nrows() {
                    lhs[(d, d)] += damping;
                }
                let Some(chol) = lhs.cholesky() else {
                    damping *= nu;
                    nu *= 2.0;
                    continue;
                };
                let delta = -chol.solve(&grad);
                let p_new = &p + &delta;
                let r_new = self.residual(p_new.as_slice());
                let cost_new = sumsq(&r_new);
                // model decrease of 0.5*|r|^2 is delta.(lambda*delta - grad)/2; costs are |r|^2
                let predicted = delta.dot(&(&delta * damping - &grad));
                if predicted > 0.0 && cost_new < cost {
                    let gain = (cost - cost_new) / predicted;
                    stalled = if (cost - cost_new) < 1e-6 * cost { stalled + 1 } else { 0 };
                    p = p_new;
                    r = r_new;
                    cost = cost_new;
                    damping *= (1.0f64 / 3.0).max(1.0 - (2.0 * gain - 1.0).powi(3));
                    nu = 2.0;
                    accepted = true;
                    break;
                }
                damping *= nu;
                nu *= 2.0;
            }
            lambda = Some(damping);
            if !accepted || stalled >= 3 {
                break;
            }
        }
        (cost.sqrt(), p.iter().copied().collect())
    }

    fn representation(&self, g: &LieAlgebra, p: &[f64]) -> Representation {
        let images = self
            .mats(p)
            .iter()
            .map(|a| Matrix::new(self.m, self.m, a.iter().map(|&z| Scalar::from_complex(z)).collect()).expect("square"))
            .collect();
        Representation::new(g.clone(), images).expect("one image per basis vector")
    }
}

/// `J^T J` and `J^T r`, skipping zeros: most Jacobian rows are sparse.
fn normal_equations(jac: &DMatrix<f64>, r: &[f64]) -> (DMatrix<f64>, DVector<f64>) {
    let cols = jac.ncols();
    let mut jtj = DMatrix::zeros(cols, cols);
    let mut grad = DVector::zeros(cols);
    let mut nz: Vec<(usize, f64)> = Vec::with_capacity(cols);
    for row in 0..jac.nrows() {
        nz.clear();
        nz.extend((0..cols).map(|c| (c, jac[(row, c)])).filter(|(_, x)| *x != 0.0));
        for (ai, &(a, x)) in nz.iter().enumerate() {
            grad[a] += x * r[row];
            for &(b, y) in &nz[ai..] {
                jtj[(a, b)] += x * y;
            }
        }
    }
    jtj.fill_lower_triangle_with_upper_triangle();
    (jtj, grad)
}

fn frobenius(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn sumsq(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum()
}
