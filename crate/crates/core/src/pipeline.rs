//! The full table verification run: catalog integrity, representation
//! checks, minimal-dimension certificates with search evidence, the
//! all-ones affine construction and the comparison of derived products
//! against the printed ones.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::affine::{AffineError, AffineRep};
use crate::catalog::{self, CatalogError, Erratum, Params};
use crate::liealg::{format_vector, LieAlgebra};
use crate::lsa::LeftSymmetricAlgebra;
use crate::mu::{self, EvidenceBar, Grade, MuCertificate, MuError, Rule, SearchReport, UpperSource, Verdict};
use crate::reps::Representation;
use crate::scalars::{Scalar, Tolerance};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Mu(#[from] MuError),
    #[error("{name}: no same-dimension faithful representation ({note})")]
    NoConstruction { name: String, note: String },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TablesOptions {
    /// Seeds both the sampled parameter points and the search.
    pub seed: u64,
    pub restarts: usize,
    pub skip_search: bool,
    pub tol: Tolerance,
}

impl Default for TablesOptions {
    fn default() -> Self {
        TablesOptions {
            seed: 0,
            restarts: EvidenceBar::default().min_restarts,
            skip_search: false,
            tol: Tolerance::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub subject: String,
    pub check: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn new(subject: &str, check: &str, passed: bool) -> Self {
        CheckRecord {
            subject: subject.to_string(),
            check: check.to_string(),
            passed,
            residual: None,
            detail: None,
        }
    }

    pub fn residual(mut self, r: f64) -> Self {
        self.residual = Some(r);
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Section {
    pub name: String,
    pub checks: Vec<CheckRecord>,
}

impl Section {
    fn new(name: &str) -> Self {
        Section {
            name: name.to_string(),
            checks: Vec::new(),
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleBound {
    pub rule: Rule,
    pub bound: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateRecord {
    pub algebra: String,
    pub published: usize,
    pub lower: usize,
    pub lower_rule: Rule,
    pub rules: Vec<RuleBound>,
    pub upper: Option<usize>,
    pub upper_source: Option<UpperSource>,
    pub grade: Grade,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CertificateRecord {
    pub fn from_certificate(c: &MuCertificate, published: usize) -> Self {
        CertificateRecord {
            algebra: c.algebra.clone(),
            published,
            lower: c.lower,
            lower_rule: c.lower_rule,
            rules: c.rules.iter().map(|&(rule, bound)| RuleBound { rule, bound }).collect(),
            upper: c.upper,
            upper_source: c.upper_source,
            grade: c.grade,
            notes: c.notes.clone(),
        }
    }

    pub fn value(&self) -> Option<usize> {
        (self.upper == Some(self.lower)).then_some(self.lower)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchRecord {
    pub algebra: String,
    pub target_dim: usize,
    pub restarts: usize,
    pub seed: u64,
    pub verdict: String,
    pub min_residual: f64,
    pub residuals: Vec<f64>,
}

impl SearchRecord {
    pub fn from_report(r: &SearchReport) -> Self {
        SearchRecord {
            algebra: r.algebra.clone(),
            target_dim: r.target_dim,
            restarts: r.restarts,
            seed: r.seed,
            verdict: match r.verdict {
                Verdict::Found(_) => "found".into(),
                Verdict::InfeasibleEvidence => "infeasible_evidence".into(),
            },
            min_residual: r.min_residual(),
            residuals: r.best_residuals.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErratumRecord {
    /// `encoding` for corrections applied while reading the tables,
    /// `product_mismatch` for printed products that differ from the derived ones.
    pub kind: String,
    pub location: String,
    pub printed: String,
    pub recomputed: String,
    pub note: String,
}

impl ErratumRecord {
    fn encoding(e: Erratum) -> Self {
        ErratumRecord {
            kind: "encoding".into(),
            location: e.location,
            printed: e.printed,
            recomputed: e.recomputed,
            note: e.note,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub failed: usize,
    pub errata: usize,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub restarts: usize,
    pub skip_search: bool,
    pub tolerance: f64,
    pub sections: Vec<Section>,
    pub certificates: Vec<CertificateRecord>,
    pub searches: Vec<SearchRecord>,
    pub errata: Vec<ErratumRecord>,
    pub summary: Summary,
}

/// Every catalog instance at the sampled parameter points.
pub fn sampled_instances(seed: u64) -> Vec<(&'static str, Params)> {
    catalog::families()
        .iter()
        .flat_map(|f| {
            catalog::sample_params(f.name, seed)
                .expect("catalog family")
                .into_iter()
                .map(move |p| (f.name, p))
        })
        .collect()
}

/// Antisymmetry and Jacobi on every sampled instance, plus the flagged
/// misprinted `sl2` row.
pub fn catalog_section(seed: u64, tol: Tolerance) -> Section {
    let mut section = Section::new("catalog");
    for (name, params) in sampled_instances(seed) {
        let subject = catalog::instance_name(name, &params);
        let g = match catalog::instantiate(name, &params) {
            Ok(g) => g,
            Err(e) => {
                section.checks.push(CheckRecord::new(&subject, "instantiate", false).detail(e.to_string()));
                continue;
            }
        };
        let n = g.dim();
        let mut antisymmetric = true;
        for i in 0..n {
            for j in 0..n {
                let a = g.bracket(&basis(n, i), &basis(n, j)).expect("dimensions");
                let b = g.bracket(&basis(n, j), &basis(n, i)).expect("dimensions");
                antisymmetric &= a.iter().zip(&b).all(|(x, y)| (x + y).is_zero());
            }
        }
        section.checks.push(CheckRecord::new(&subject, "antisymmetry", antisymmetric));
        let failures = g.jacobi_check(tol);
        let exact = g.is_exact();
        let mut rec = CheckRecord::new(&subject, if exact { "jacobi_exact" } else { "jacobi" }, failures.is_empty());
        if let Some(f) = failures.first() {
            rec = rec.detail(format!("({},{},{}) residual {}", f.triple.0 + 1, f.triple.1 + 1, f.triple.2 + 1, format_vector(&f.residual)));
        }
        section.checks.push(rec);
    }
    let printed = catalog::sl2_as_printed();
    let failures = printed.jacobi_check(tol);
    let detail = failures
        .iter()
        .map(|f| format!("({},{},{}) residual {}", f.triple.0 + 1, f.triple.1 + 1, f.triple.2 + 1, format_vector(&f.residual)))
        .collect::<Vec<_>>()
        .join("; ");
    section
        .checks
        .push(CheckRecord::new("sl2 (as printed)", "jacobi_violation_flagged", !failures.is_empty()).detail(detail));
    section
}

fn basis(n: usize, i: usize) -> Vec<Scalar> {
    crate::linalg::basis_vector(n, i)
}

/// Homomorphism and faithfulness of every tabulated representation.
pub fn representation_section(seed: u64, tol: Tolerance) -> Section {
    let mut section = Section::new("representations");
    for (name, params) in sampled_instances(seed) {
        let subject = catalog::instance_name(name, &params);
        let rho = match catalog::table3_representation(name, &params) {
            Ok(r) => r,
            Err(e) => {
                section.checks.push(CheckRecord::new(&subject, "representation", false).detail(e.to_string()));
                continue;
            }
        };
        push_rep_checks(&mut section, &subject, &rho, tol);
    }
    section
}

fn push_rep_checks(section: &mut Section, subject: &str, rho: &Representation, tol: Tolerance) {
    let mode = if rho.is_exact() { "exact" } else { "approx" };
    let failures = rho.check_homomorphism(tol);
    section.checks.push(
        CheckRecord::new(subject, &format!("homomorphism_{mode}"), failures.is_empty()).residual(rho.max_residual()),
    );
    let kernel = rho.kernel(tol).len();
    section.checks.push(
        CheckRecord::new(subject, "faithful", failures.is_empty() && kernel == 0)
            .detail(format!("dim {}, kernel dim {kernel}", rho.dim())),
    );
}

/// Instances whose lower bound needs search evidence, with the target
/// dimension one below the published value.
pub fn search_targets() -> Vec<(&'static str, Params, usize)> {
    vec![
        (
            "g2",
            Params::from([("alpha".to_string(), Scalar::zero()), ("beta".to_string(), Scalar::zero())]),
            3,
        ),
        ("g8", Params::from([("alpha".to_string(), Scalar::ratio(1, 4))]), 3),
    ]
}

pub fn run_searches(seed: u64, restarts: usize) -> Result<Vec<(String, SearchReport)>, PipelineError> {
    search_targets()
        .into_iter()
        .map(|(name, params, m)| {
            let g = catalog::instantiate(name, &params)?;
            let report = mu::search_faithful(&g, m, restarts, seed)?;
            Ok((catalog::instance_name(name, &params), report))
        })
        .collect()
}

/// Certificate for one instance, using its tabulated representation as the
/// witness and the search report when one is given.
pub fn certify_instance(
    name: &str,
    params: &Params,
    search: Option<&SearchReport>,
    tol: Tolerance,
) -> Result<CertificateRecord, PipelineError> {
    let g = catalog::instantiate(name, params)?;
    let witness = catalog::table3_representation(name, params)?;
    let published = catalog::published_mu(name, params)?;
    let cert = mu::mu_certify(&g, Some(&witness), search, EvidenceBar::default(), tol)?;
    Ok(CertificateRecord::from_certificate(&cert, published))
}

pub struct MuOutcome {
    pub section: Section,
    pub certificates: Vec<CertificateRecord>,
    pub searches: Vec<SearchRecord>,
}

/// Certifies every sampled instance against the published column. Search
/// targets must reach grade evidence, everything else grade proven; with
/// `skip_search` the targets only need their bounds to bracket the
/// published value.
pub fn mu_section(opts: TablesOptions) -> Result<MuOutcome, PipelineError> {
    let mut section = Section::new("minimal_dimension");
    let searches = if opts.skip_search {
        Vec::new()
    } else {
        run_searches(opts.seed, opts.restarts)?
    };
    for (subject, report) in &searches {
        let bar = EvidenceBar::default();
        section.checks.push(
            CheckRecord::new(subject, "search_evidence", report.meets(bar))
                .residual(report.min_residual())
                .detail(format!(
                    "m={}, {} restarts, bar: >= {} restarts all above {:e}",
                    report.target_dim, report.restarts, bar.min_restarts, bar.threshold
                )),
        );
    }
    let targets: Vec<String> = search_targets().iter().map(|(n, p, _)| catalog::instance_name(n, p)).collect();
    let mut certificates = Vec::new();
    for (name, params) in sampled_instances(opts.seed) {
        let subject = catalog::instance_name(name, &params);
        let is_target = targets.contains(&subject);
        let search = searches.iter().find(|(s, _)| *s == subject).map(|(_, r)| r);
        let cert = match certify_instance(name, &params, search, opts.tol) {
            Ok(c) => c,
            Err(e) => {
                section.checks.push(CheckRecord::new(&subject, "certificate", false).detail(e.to_string()));
                continue;
            }
        };
        let (check, passed) = match (is_target, opts.skip_search) {
            (false, _) => ("proven", cert.value() == Some(cert.published) && cert.grade == Grade::Proven),
            (true, false) => ("evidence", cert.value() == Some(cert.published) && cert.grade == Grade::Evidence),
            (true, true) => (
                "bracketed",
                cert.upper == Some(cert.published) && cert.lower < cert.published,
            ),
        };
        section.checks.push(CheckRecord::new(&subject, check, passed).detail(format!(
            "lower {} ({}), upper {}, published {}",
            cert.lower,
            cert.lower_rule,
            cert.upper.map_or("none".into(), |u| u.to_string()),
            cert.published
        )));
        certificates.push(cert);
    }
    Ok(MuOutcome {
        section,
        certificates,
        searches: searches.iter().map(|(_, r)| SearchRecord::from_report(r)).collect(),
    })
}

/// Which table a same-dimension representation comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LsaTable {
    Table3,
    Table4,
}

impl LsaTable {
    pub fn id(self) -> &'static str {
        match self {
            LsaTable::Table3 => "table3",
            LsaTable::Table4 => "table4",
        }
    }
}

/// The tabulated same-dimension representation and printed products.
pub fn tabulated_pair(
    name: &str,
    params: &Params,
) -> Result<(LsaTable, Representation, LeftSymmetricAlgebra), PipelineError> {
    if catalog::has_table3_lsa(name, params)? {
        let rho = catalog::table3_representation(name, params)?;
        let lsa = catalog::table3_lsa(name, params)?;
        return Ok((LsaTable::Table3, rho, lsa));
    }
    if catalog::has_table4_entry(name) {
        let (rho, lsa) = catalog::table4_entry(name, params)?;
        return Ok((LsaTable::Table4, rho, lsa));
    }
    let spec = catalog::family(name)?;
    Err(PipelineError::NoConstruction {
        name: catalog::instance_name(name, params),
        note: if spec.notes.is_empty() {
            "not listed in either table".to_string()
        } else {
            spec.notes.to_string()
        },
    })
}

/// A product `e_i e_j` (0-based) whose printed and derived values differ.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductDiff {
    pub pair: (usize, usize),
    pub printed: Vec<Scalar>,
    pub derived: Vec<Scalar>,
}

pub fn diff_products(printed: &LeftSymmetricAlgebra, derived: &LeftSymmetricAlgebra, tol: Tolerance) -> Vec<ProductDiff> {
    let n = derived.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (p, d) = (printed.product_basis(i, j), derived.product_basis(i, j));
            if !p.iter().zip(d).all(|(x, y)| x.approx_eq(y, tol)) {
                out.push(ProductDiff {
                    pair: (i, j),
                    printed: p.clone(),
                    derived: d.clone(),
                });
            }
        }
    }
    out
}

/// Same structure constants, exactly or within `tol`.
pub fn brackets_agree(a: &LieAlgebra, b: &LieAlgebra, tol: Tolerance) -> bool {
    let n = a.dim();
    n == b.dim()
        && (0..n).all(|i| {
            (i + 1..n).all(|j| {
                a.bracket_basis(i, j)
                    .iter()
                    .zip(&b.bracket_basis(i, j))
                    .all(|(x, y)| x.approx_eq(y, tol))
            })
        })
}

/// Outcome of the all-ones construction on one representation.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub affine: AffineRep,
    pub lsa: LeftSymmetricAlgebra,
    pub cocycle: bool,
    pub left_symmetric: bool,
    pub sub_adjacent_matches: bool,
    pub zero_kernel_ideal: bool,
}

impl Derivation {
    pub fn all_passed(&self) -> bool {
        self.cocycle && self.left_symmetric && self.sub_adjacent_matches && self.zero_kernel_ideal
    }
}

pub fn derive_from_rep(rho: &Representation, tol: Tolerance) -> Result<Derivation, PipelineError> {
    let affine = AffineRep::construct_all_ones(rho, tol)?;
    let lsa = affine.induced_lsa(tol)?;
    let cocycle = affine.check_cocycle(tol).is_empty();
    let left_symmetric = lsa.is_left_symmetric(tol);
    let sub_adjacent_matches = lsa
        .sub_adjacent(tol)
        .map(|h| brackets_agree(&h, rho.algebra(), tol))
        .unwrap_or(false);
    let zero_kernel_ideal = lsa.kernel_ideal(tol).is_empty();
    Ok(Derivation {
        affine,
        lsa,
        cocycle,
        left_symmetric,
        sub_adjacent_matches,
        zero_kernel_ideal,
    })
}

fn products_text(lsa_pairs: &[ProductDiff], printed: bool) -> String {
    lsa_pairs
        .iter()
        .map(|d| {
            let v: Vec<Scalar> = if printed { &d.printed } else { &d.derived }.iter().map(chop).collect();
            format!("e{}*e{}={}", d.pair.0 + 1, d.pair.1 + 1, format_vector(&v))
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Drops rounding noise from approximate values before display.
fn chop(s: &Scalar) -> Scalar {
    if s.is_exact() {
        return s.clone();
    }
    let z = s.to_complex();
    let f = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    Scalar::approx(f(z.re), f(z.im))
}

pub fn mismatch_erratum(table: LsaTable, subject: &str, diffs: &[ProductDiff]) -> ErratumRecord {
    ErratumRecord {
        kind: "product_mismatch".into(),
        location: format!("{}:{subject}", table.id()),
        printed: products_text(diffs, true),
        recomputed: products_text(diffs, false),
        note: format!(
            "{} of the printed products differ from those induced by the printed representation",
            diffs.len()
        ),
    }
}

pub struct AffineOutcome {
    pub section: Section,
    pub errata: Vec<ErratumRecord>,
}

/// The all-ones construction on every same-dimension tabulated
/// representation. Printed products that disagree become errata and do
/// not fail the section.
pub fn affine_section(seed: u64, tol: Tolerance) -> AffineOutcome {
    let mut section = Section::new("affine");
    let mut errata = Vec::new();
    for (name, params) in sampled_instances(seed) {
        let subject = catalog::instance_name(name, &params);
        let (table, rho, printed) = match tabulated_pair(name, &params) {
            Ok(t) => t,
            Err(PipelineError::NoConstruction { .. }) => continue,
            Err(e) => {
                section.checks.push(CheckRecord::new(&subject, "tabulated", false).detail(e.to_string()));
                continue;
            }
        };
        let d = match derive_from_rep(&rho, tol) {
            Ok(d) => d,
            Err(e) => {
                section.checks.push(CheckRecord::new(&subject, "etale", false).detail(e.to_string()));
                continue;
            }
        };
        let tag = |c: &str| format!("{}:{c}", table.id());
        section.checks.push(CheckRecord::new(&subject, &tag("etale"), true));
        section.checks.push(CheckRecord::new(&subject, &tag("cocycle"), d.cocycle));
        section.checks.push(CheckRecord::new(&subject, &tag("left_symmetric"), d.left_symmetric));
        section.checks.push(CheckRecord::new(&subject, &tag("sub_adjacent"), d.sub_adjacent_matches));
        section.checks.push(CheckRecord::new(&subject, &tag("zero_kernel_ideal"), d.zero_kernel_ideal));
        let diffs = diff_products(&printed, &d.lsa, tol);
        if !diffs.is_empty() {
            errata.push(mismatch_erratum(table, &subject, &diffs));
        }
    }
    AffineOutcome { section, errata }
}

/// Runs every section and assembles the report.
pub fn check_tables(opts: TablesOptions) -> Result<Report, PipelineError> {
    let catalog = catalog_section(opts.seed, opts.tol);
    let reps = representation_section(opts.seed, opts.tol);
    let mu = mu_section(opts)?;
    let affine = affine_section(opts.seed, opts.tol);
    let mut errata: Vec<ErratumRecord> = catalog::encoding_errata().into_iter().map(ErratumRecord::encoding).collect();
    errata.extend(affine.errata);
    let sections = vec![catalog, reps, mu.section, affine.section];
    let checks = sections.iter().map(|s| s.checks.len()).sum();
    let failed = sections.iter().map(|s| s.failures().count()).sum();
    Ok(Report {
        seed: opts.seed,
        restarts: opts.restarts,
        skip_search: opts.skip_search,
        tolerance: opts.tol.epsilon,
        summary: Summary {
            checks,
            failed,
            errata: errata.len(),
            consistent: failed == 0,
        },
        sections,
        certificates: mu.certificates,
        searches: mu.searches,
        errata,
    })
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "check-tables seed={} restarts={} skip_search={} tol={:e}",
            self.seed, self.restarts, self.skip_search, self.tolerance
        );
        for s in &self.sections {
            let failed = s.failures().count();
            let _ = writeln!(out, "\n[{}] {} checks, {} failed", s.name, s.checks.len(), failed);
            for c in s.failures() {
                let _ = writeln!(out, "  FAIL {} {}: {}", c.subject, c.check, c.detail.as_deref().unwrap_or(""));
            }
        }
        let _ = writeln!(out, "\n[certificates]");
        for c in &self.certificates {
            let _ = writeln!(
                out,
                "  {:<28} mu={} lower={} ({}) upper={} grade={}",
                c.algebra,
                c.published,
                c.lower,
                c.lower_rule,
                c.upper.map_or("-".into(), |u| u.to_string()),
                c.grade
            );
        }
        if !self.searches.is_empty() {
            let _ = writeln!(out, "\n[search]");
            for s in &self.searches {
                let _ = writeln!(
                    out,
                    "  {} m={} restarts={} seed={} verdict={} min_residual={:.6e}",
                    s.algebra, s.target_dim, s.restarts, s.seed, s.verdict, s.min_residual
                );
            }
        }
        let _ = writeln!(out, "\n[errata]");
        for e in &self.errata {
            let _ = writeln!(out, "  {} ({})\n    printed:    {}\n    recomputed: {}\n    {}", e.location, e.kind, e.printed, e.recomputed, e.note);
        }
        let _ = writeln!(
            out,
            "\nsummary: {} checks, {} failed, {} errata, {}",
            self.summary.checks,
            self.summary.failed,
            self.summary.errata,
            if self.summary.consistent { "consistent" } else { "INCONSISTENT" }
        );
        out
    }
}
