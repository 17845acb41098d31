//! `ado4`: browse the catalog, verify documents, derive left-symmetric
//! products, certify minimal faithful dimensions and run the table checks.
//!
//! Exit codes: 0 verified, 1 a mathematical check failed, 2 bad input.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ado4::affine::AffineError;
use ado4::catalog::{self, CatalogError, Params};
use ado4::doc::{self, AffineDocument, AlgebraDocument, DocError, LsaDocument, RepDocument};
use ado4::liealg::format_vector;
use ado4::mu::{self, EvidenceBar, MuError, Verdict};
use ado4::pipeline::{self, CertificateRecord, CheckRecord, PipelineError, SearchRecord, TablesOptions};
use ado4::reps::Representation;
use ado4::scalars::Tolerance;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ado4", version, about = "Faithful representations and left-symmetric algebras of low-dimensional complex Lie algebras")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Tolerance for approximate comparisons.
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT_EPSILON)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// List or show catalog entries.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Check a representation, left-symmetric algebra or affine document.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// Derive the left-symmetric product of the all-ones affine construction.
    Derive {
        #[command(subcommand)]
        cmd: DeriveCmd,
    },
    /// Minimal faithful dimension: certificates and numeric search.
    Mu {
        #[command(subcommand)]
        cmd: MuCmd,
    },
    /// Run every table check and print the report.
    CheckTables {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = EvidenceBar::default().min_restarts)]
        restarts: usize,
        /// Skip the search; the two search-backed lower bounds stay open.
        #[arg(long)]
        skip_search: bool,
    },
    /// List the recorded discrepancies with the printed tables.
    Errata {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Show {
        name: String,
        /// Parameter binding such as `alpha=1/2` or `lambda=i`.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Print only this document, as JSON.
        #[arg(long, value_enum)]
        emit: Option<Emit>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Algebra,
    Rep,
    Lsa,
    Affine,
}

#[derive(Subcommand)]
enum VerifyCmd {
    Rep { file: PathBuf },
    Lsa { file: PathBuf },
    Affine { file: PathBuf },
}

#[derive(Subcommand)]
enum DeriveCmd {
    Lsa {
        algebra: String,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Use this representation document instead of the tabulated one.
        #[arg(long)]
        rep: Option<PathBuf>,
        /// Also write the derived product as a document.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum MuCmd {
    Certify {
        algebra: String,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Witness representation document (default: the tabulated one).
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Search one dimension below the upper bound when the bounds differ.
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = EvidenceBar::default().min_restarts)]
        restarts: usize,
    },
    Search {
        algebra: String,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Target dimension.
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = EvidenceBar::default().min_restarts)]
        restarts: usize,
    },
}

enum Failure {
    /// Bad input: exit 2.
    Input(String),
    /// A check or construction failed: exit 1.
    Math(String),
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Unknown(_) | CatalogError::Domain { .. } | CatalogError::Params { .. } | CatalogError::Scalar(_) => {
                Failure::Input(e.to_string())
            }
            other => Failure::Math(other.to_string()),
        }
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<MuError> for Failure {
    fn from(e: MuError) -> Self {
        match e {
            MuError::Precondition(_) | MuError::NotApplicable { .. } => Failure::Input(e.to_string()),
            other => Failure::Math(other.to_string()),
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Catalog(c) => c.into(),
            PipelineError::Mu(m) => m.into(),
            other => Failure::Math(other.to_string()),
        }
    }
}

/// What a command prints, and whether it verified.
struct Output {
    json: Value,
    text: String,
    verified: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        eprintln!("error: --tol must be a nonnegative number");
        return ExitCode::from(2);
    }
    let tol = Tolerance::new(cli.tol);
    let result = match cli.command {
        Command::Catalog { cmd } => match cmd {
            CatalogCmd::List => Ok(catalog_list()),
            CatalogCmd::Show { name, params, emit } => catalog_show(&name, &params, emit, tol),
        },
        Command::Verify { cmd } => match cmd {
            VerifyCmd::Rep { file } => verify_rep(&file, tol),
            VerifyCmd::Lsa { file } => verify_lsa(&file, tol),
            VerifyCmd::Affine { file } => verify_affine(&file, tol),
        },
        Command::Derive {
            cmd: DeriveCmd::Lsa { algebra, params, rep, out },
        } => derive_lsa(&algebra, &params, rep.as_deref(), out.as_deref(), tol),
        Command::Mu { cmd } => match cmd {
            MuCmd::Certify {
                algebra,
                params,
                witness,
                search,
                seed,
                restarts,
            } => mu_certify(&algebra, &params, witness.as_deref(), search.then_some((seed, restarts)), tol),
            MuCmd::Search {
                algebra,
                params,
                dim,
                seed,
                restarts,
            } => mu_search(&algebra, &params, dim, seed, restarts),
        },
        Command::CheckTables {
            seed,
            restarts,
            skip_search,
        } => check_tables(TablesOptions {
            seed,
            restarts,
            skip_search,
            tol,
        }),
        Command::Errata { seed } => Ok(errata(seed, tol)),
    };
    match result {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json values serialize")),
                Format::Text => print!("{}", out.text),
            }
            if out.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn instance(name: &str, bindings: &[String]) -> Result<Params, Failure> {
    let params = catalog::parse_params(bindings)?;
    // validates the name, the parameter names and the domain
    catalog::instantiate(name, &params)?;
    Ok(params)
}

fn checks_text(title: &str, checks: &[CheckRecord]) -> String {
    let mut out = format!("{title}\n");
    for c in checks {
        let _ = write!(out, "  {} {}", if c.passed { "PASS" } else { "FAIL" }, c.check);
        if let Some(r) = c.residual {
            let _ = write!(out, " (residual {r:.3e})");
        }
        if let Some(d) = &c.detail {
            let _ = write!(out, ": {d}");
        }
        out.push('\n');
    }
    out
}

fn mu_column(name: &str) -> String {
    let mut values: Vec<usize> = catalog::sample_params(name, 0)
        .expect("catalog family")
        .iter()
        .map(|p| catalog::published_mu(name, p).expect("sampled in domain"))
        .collect();
    values.sort_unstable();
    values.dedup();
    if name == "g8" {
        // the only parameter-dependent value
        return "3 (4 at alpha=1/4)".into();
    }
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" or ")
}

fn catalog_list() -> Output {
    let mut rows = Vec::new();
    let mut text = format!("{:<11} {:<13} {:>3} {:<7} {:<18} {}\n", "name", "label", "dim", "table", "mu", "domain");
    for f in catalog::families() {
        let mu = mu_column(f.name);
        let _ = writeln!(
            text,
            "{:<11} {:<13} {:>3} {:<7} {:<18} {}",
            f.name,
            f.label,
            f.dim,
            f.source.id(),
            mu,
            if f.domain.is_empty() { "-" } else { f.domain }
        );
        rows.push(json!({
            "name": f.name,
            "label": f.label,
            "dim": f.dim,
            "table": f.source.id(),
            "params": f.params,
            "domain": f.domain,
            "mu": mu,
        }));
    }
    Output {
        json: Value::Array(rows),
        text,
        verified: true,
    }
}

fn catalog_show(name: &str, bindings: &[String], emit: Option<Emit>, tol: Tolerance) -> Result<Output, Failure> {
    let params = instance(name, bindings)?;
    let spec = catalog::family(name)?;
    let g = catalog::instantiate(name, &params)?;
    let mu = catalog::published_mu(name, &params)?;
    let rep = catalog::table3_representation(name, &params)?;
    let pair = pipeline::tabulated_pair(name, &params).ok();
    if let Some(kind) = emit {
        let json = match kind {
            Emit::Algebra => serde_json::to_value(AlgebraDocument::from_algebra(&g, &params)),
            Emit::Rep => serde_json::to_value(RepDocument::from_rep(&rep, &params)),
            Emit::Lsa => {
                let (_, _, lsa) = pair.ok_or_else(|| Failure::Math(format!("{name}: no tabulated left-symmetric product")))?;
                serde_json::to_value(LsaDocument::from_lsa(&lsa, &params))
            }
            Emit::Affine => {
                let (_, rho, _) = pair.ok_or_else(|| Failure::Math(format!("{name}: no same-dimension representation")))?;
                let phi = ado4::affine::AffineRep::construct_all_ones(&rho, tol).map_err(|e| Failure::Math(e.to_string()))?;
                serde_json::to_value(AffineDocument::from_affine(&phi, &params))
            }
        }
        .expect("documents serialize");
        let text = format!("{}\n", serde_json::to_string_pretty(&json).expect("json values serialize"));
        return Ok(Output {
            json,
            text,
            verified: true,
        });
    }
    let mut text = format!("{}  [{}, {}]\n", catalog::instance_name(name, &params), spec.label, spec.source.id());
    let _ = writeln!(text, "{g}");
    let _ = writeln!(text, "mu = {mu}");
    let _ = writeln!(text, "representation (table3, dim {}):", rep.dim());
    for (k, m) in rep.images().iter().enumerate() {
        let rows: Vec<String> = m.to_rows().iter().map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))).collect();
        let _ = writeln!(text, "  e{} -> [{}]", k + 1, rows.join(", "));
    }
    let mut json = json!({
        "algebra": AlgebraDocument::from_algebra(&g, &params),
        "mu": mu,
        "representation": RepDocument::from_rep(&rep, &params),
    });
    if let Some((table, rho, lsa)) = &pair {
        let _ = writeln!(text, "left-symmetric product ({}): {lsa}", table.id());
        json["lsa"] = json!({ "table": table.id(), "product": LsaDocument::from_lsa(lsa, &params) });
        if *table == pipeline::LsaTable::Table4 {
            json["same_dimension_representation"] = serde_json::to_value(RepDocument::from_rep(rho, &params)).expect("serializes");
        }
    }
    if !spec.notes.is_empty() {
        let _ = writeln!(text, "note: {}", spec.notes);
        json["note"] = json!(spec.notes);
    }
    Ok(Output {
        json,
        text,
        verified: true,
    })
}

fn verify_rep(path: &Path, tol: Tolerance) -> Result<Output, Failure> {
    let doc: RepDocument = doc::from_json(&read_file(path)?)?;
    let rho = doc.to_rep()?;
    let name = rho.algebra().name().to_string();
    let mut checks = Vec::new();
    let jacobi = rho.algebra().jacobi_check(tol);
    checks.push(jacobi_record(&name, &jacobi));
    let failures = rho.check_homomorphism(tol);
    let mut hom = CheckRecord::new(&name, "homomorphism", failures.is_empty()).residual(rho.max_residual());
    if !failures.is_empty() {
        let pairs: Vec<String> = failures
            .iter()
            .map(|f| format!("({},{}) residual {}", f.pair.0 + 1, f.pair.1 + 1, matrix_units(&f.residual)))
            .collect();
        hom = hom.detail(pairs.join("; "));
    }
    checks.push(hom);
    let kernel = rho.kernel(tol);
    let mut faithful = CheckRecord::new(&name, "faithful", failures.is_empty() && kernel.is_empty());
    if !kernel.is_empty() {
        faithful = faithful.detail(format!(
            "kernel spanned by {}",
            kernel.iter().map(|v| format_vector(v)).collect::<Vec<_>>().join(", ")
        ));
    }
    checks.push(faithful);
    Ok(checks_output(&format!("representation of {name} in dim {}", rho.dim()), checks))
}

fn jacobi_record(name: &str, failures: &[ado4::liealg::JacobiFailure]) -> CheckRecord {
    let rec = CheckRecord::new(name, "jacobi", failures.is_empty());
    match failures.first() {
        Some(f) => rec.detail(format!(
            "({},{},{}) residual {}",
            f.triple.0 + 1,
            f.triple.1 + 1,
            f.triple.2 + 1,
            format_vector(&f.residual)
        )),
        None => rec,
    }
}

/// Renders a matrix as `sum c e_ij`, e.g. `e13` or `2*e12-e23`.
fn matrix_units(m: &ado4::linalg::Matrix) -> String {
    let n = m.cols();
    let flat = m.flatten();
    let mut out = String::new();
    for (k, c) in flat.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let unit = format!("e{}{}", k / n + 1, k % n + 1);
        let cs = c.to_string();
        let term = match cs.as_str() {
            "1" => unit,
            "-1" => format!("-{unit}"),
            _ if cs.contains(['+', 'i']) || cs[1..].contains('-') => format!("({cs})*{unit}"),
            _ => format!("{cs}*{unit}"),
        };
        if !out.is_empty() && !term.starts_with('-') {
            out.push('+');
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn checks_output(title: &str, checks: Vec<CheckRecord>) -> Output {
    let verified = checks.iter().all(|c| c.passed);
    Output {
        text: checks_text(title, &checks),
        json: json!({ "subject": title, "verified": verified, "checks": checks }),
        verified,
    }
}

fn verify_lsa(path: &Path, tol: Tolerance) -> Result<Output, Failure> {
    let doc: LsaDocument = doc::from_json(&read_file(path)?)?;
    let a = doc.to_lsa()?;
    let name = a.name().to_string();
    let failures = a.check_left_symmetric(tol);
    let mut ls = CheckRecord::new(&name, "left_symmetric", failures.is_empty());
    if !failures.is_empty() {
        let shown: Vec<String> = failures
            .iter()
            .take(5)
            .map(|f| format!("({},{},{}) residual {}", f.triple.0 + 1, f.triple.1 + 1, f.triple.2 + 1, format_vector(&f.residual)))
            .collect();
        ls = ls.detail(format!("{} failing triple(s): {}", failures.len(), shown.join("; ")));
    }
    let mut checks = vec![ls];
    if failures.is_empty() {
        let h = a.sub_adjacent(tol).map_err(|e| Failure::Math(e.to_string()))?;
        checks.push(jacobi_record(&name, &h.jacobi_check(tol)).detail(format!("sub-adjacent {h}")));
        let l = a.left_regular_rep(tol).map_err(|e| Failure::Math(e.to_string()))?;
        checks.push(CheckRecord::new(&name, "left_regular_homomorphism", l.check_homomorphism(tol).is_empty()));
        let kernel = a.kernel_ideal(tol);
        // informational: a nonzero kernel ideal is allowed, it only has to be an ideal
        checks.push(
            CheckRecord::new(&name, "kernel_ideal_is_ideal", a.is_two_sided_ideal(&kernel, tol))
                .detail(format!("dimension {}", kernel.len())),
        );
    }
    Ok(checks_output(&format!("left-symmetric algebra {name}"), checks))
}

fn verify_affine(path: &Path, tol: Tolerance) -> Result<Output, Failure> {
    let doc: AffineDocument = doc::from_json(&read_file(path)?)?;
    let phi = doc.to_affine()?;
    let name = phi.rho().algebra().name().to_string();
    let mut checks = vec![jacobi_record(&name, &phi.rho().algebra().jacobi_check(tol))];
    let hom = phi.rho().check_homomorphism(tol);
    checks.push(CheckRecord::new(&name, "homomorphism", hom.is_empty()).residual(phi.rho().max_residual()));
    let cocycle = phi.check_cocycle(tol);
    let mut rec = CheckRecord::new(&name, "cocycle", cocycle.is_empty());
    if !cocycle.is_empty() {
        let pairs: Vec<String> = cocycle
            .iter()
            .map(|f| format!("({},{}) residual {}", f.pair.0 + 1, f.pair.1 + 1, format_vector(&f.residual)))
            .collect();
        rec = rec.detail(pairs.join("; "));
    }
    checks.push(rec);
    // étale is a property of the base point, reported but not required
    let etale = match phi.check_etale(tol) {
        Ok(()) => "etale at the base point".to_string(),
        Err(AffineError::NotEtale { rank, size }) => format!("not etale: evaluation map has rank {rank} < {size}"),
        Err(e) => e.to_string(),
    };
    let mut out = checks_output(&format!("affine representation of {name}"), checks);
    let _ = writeln!(out.text, "  info {etale}");
    out.json["etale"] = json!(etale);
    Ok(out)
}

fn derive_lsa(name: &str, bindings: &[String], rep: Option<&Path>, out: Option<&Path>, tol: Tolerance) -> Result<Output, Failure> {
    let (params, rho, printed) = match rep {
        Some(path) => {
            let doc: RepDocument = doc::from_json(&read_file(path)?)?;
            let rho = doc.to_rep()?;
            (doc.algebra.params.clone(), rho, None)
        }
        None => {
            let params = instance(name, bindings)?;
            let (table, rho, lsa) = pipeline::tabulated_pair(name, &params)?;
            (params, rho, Some((table, lsa)))
        }
    };
    let d = pipeline::derive_from_rep(&rho, tol).map_err(|e| match e {
        PipelineError::Affine(AffineError::Rep(r)) => Failure::Math(r.to_string()),
        other => Failure::from(other),
    })?;
    let subject = rho.algebra().name().to_string();
    let checks = vec![
        CheckRecord::new(&subject, "etale", true),
        CheckRecord::new(&subject, "cocycle", d.cocycle),
        CheckRecord::new(&subject, "left_symmetric", d.left_symmetric),
        CheckRecord::new(&subject, "sub_adjacent", d.sub_adjacent_matches),
        CheckRecord::new(&subject, "zero_kernel_ideal", d.zero_kernel_ideal),
    ];
    let lsa_doc = LsaDocument::from_lsa(&d.lsa, &params);
    if let Some(path) = out {
        fs::write(path, doc::to_json(&lsa_doc)).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    let mut result = checks_output(&format!("all-ones construction on {subject}"), checks);
    let _ = writeln!(result.text, "translation q(e_i) = rho(e_i)(1,...,1):");
    for (k, q) in d.affine.translation().iter().enumerate() {
        let _ = writeln!(result.text, "  q(e{}) = {}", k + 1, format_vector(q));
    }
    let _ = writeln!(result.text, "product: {}", d.lsa);
    result.json["lsa"] = serde_json::to_value(&lsa_doc).expect("serializes");
    if let Some((table, printed)) = printed {
        let diffs = pipeline::diff_products(&printed, &d.lsa, tol);
        if diffs.is_empty() {
            let _ = writeln!(result.text, "matches the printed product ({})", table.id());
            result.json["diff"] = json!({ "table": table.id(), "erratum": null });
        } else {
            let e = pipeline::mismatch_erratum(table, &subject, &diffs);
            let _ = writeln!(
                result.text,
                "differs from the printed product ({}), recorded as an erratum:\n  printed:    {}\n  recomputed: {}",
                table.id(),
                e.printed,
                e.recomputed
            );
            result.json["diff"] = json!({ "table": table.id(), "erratum": e });
        }
    }
    Ok(result)
}

fn certificate_text(c: &CertificateRecord) -> String {
    let mut out = format!("{}: ", c.algebra);
    match c.value() {
        Some(v) => {
            let _ = writeln!(out, "mu = {v} ({})", c.grade);
        }
        None => {
            let _ = writeln!(
                out,
                "{} <= mu <= {} ({})",
                c.lower,
                c.upper.map_or("?".into(), |u| u.to_string()),
                c.grade
            );
        }
    }
    for r in &c.rules {
        let _ = writeln!(out, "  lower bound {} from {}", r.bound, r.rule);
    }
    if let (Some(u), Some(s)) = (c.upper, c.upper_source) {
        let _ = writeln!(out, "  upper bound {u} from {}", serde_json::to_value(s).expect("serializes").as_str().unwrap_or(""));
    }
    let _ = writeln!(out, "  published {}", c.published);
    for n in &c.notes {
        let _ = writeln!(out, "  note: {n}");
    }
    out
}

fn search_text(s: &SearchRecord) -> String {
    format!(
        "search {} in dim {}: {} ({} restarts, seed {}, smallest residual {:.6e})\n",
        s.algebra, s.target_dim, s.verdict, s.restarts, s.seed, s.min_residual
    )
}

fn mu_certify(
    name: &str,
    bindings: &[String],
    witness: Option<&Path>,
    search: Option<(u64, usize)>,
    tol: Tolerance,
) -> Result<Output, Failure> {
    let params = instance(name, bindings)?;
    let g = catalog::instantiate(name, &params)?;
    let witness: Representation = match witness {
        Some(path) => doc::from_json::<RepDocument>(&read_file(path)?)?.to_rep()?,
        None => catalog::table3_representation(name, &params)?,
    };
    if witness.algebra().dim() != g.dim() {
        return Err(Failure::Input("witness is for an algebra of another dimension".into()));
    }
    let published = catalog::published_mu(name, &params)?;
    let mut cert = mu::mu_certify(&g, Some(&witness), None, EvidenceBar::default(), tol)?;
    let mut searched = None;
    if let (Some((seed, restarts)), Some(upper)) = (search, cert.upper) {
        if cert.lower < upper && g.is_solvable(tol) {
            let report = mu::search_faithful(&g, upper - 1, restarts, seed)?;
            cert = mu::mu_certify(&g, Some(&witness), Some(&report), EvidenceBar::default(), tol)?;
            searched = Some(SearchRecord::from_report(&report));
        }
    }
    let record = CertificateRecord::from_certificate(&cert, published);
    let mut text = certificate_text(&record);
    if let Some(s) = &searched {
        text.push_str(&search_text(s));
    }
    Ok(Output {
        json: json!({ "certificate": record, "search": searched }),
        text,
        // an open bracket is not a failure as long as it contains the published value
        verified: record.lower <= published && record.upper.is_none_or(|u| published <= u),
    })
}

fn mu_search(name: &str, bindings: &[String], dim: usize, seed: u64, restarts: usize) -> Result<Output, Failure> {
    let params = instance(name, bindings)?;
    let g = catalog::instantiate(name, &params)?;
    let report = mu::search_faithful(&g, dim, restarts, seed)?;
    let record = SearchRecord::from_report(&report);
    let mut text = search_text(&record);
    let mut json = json!({ "search": record });
    if let Verdict::Found(rep) = &report.verdict {
        let _ = writeln!(text, "witness:");
        for (k, m) in rep.images().iter().enumerate() {
            let _ = writeln!(text, "  e{} ->\n{}", k + 1, indent(&m.to_string(), 4));
        }
        json["witness"] = serde_json::to_value(RepDocument::from_rep(rep, &params)).expect("serializes");
    }
    Ok(Output {
        json,
        text,
        verified: true,
    })
}

fn indent(s: &str, n: usize) -> String {
    s.lines().map(|l| format!("{}{l}", " ".repeat(n))).collect::<Vec<_>>().join("\n")
}

fn check_tables(opts: TablesOptions) -> Result<Output, Failure> {
    let report = pipeline::check_tables(opts)?;
    Ok(Output {
        text: report.to_text(),
        verified: report.summary.consistent,
        json: serde_json::to_value(&report).expect("serializes"),
    })
}

fn errata(seed: u64, tol: Tolerance) -> Output {
    let mut records: Vec<_> = catalog::encoding_errata()
        .into_iter()
        .map(|e| {
            json!({ "kind": "encoding", "location": e.location, "printed": e.printed, "recomputed": e.recomputed, "note": e.note })
        })
        .collect();
    records.extend(
        pipeline::affine_section(seed, tol)
            .errata
            .into_iter()
            .map(|e| serde_json::to_value(e).expect("serializes")),
    );
    let mut text = String::new();
    for r in &records {
        let _ = writeln!(
            text,
            "{} ({})\n  printed:    {}\n  recomputed: {}\n  {}",
            r["location"].as_str().unwrap_or(""),
            r["kind"].as_str().unwrap_or(""),
            r["printed"].as_str().unwrap_or(""),
            r["recomputed"].as_str().unwrap_or(""),
            r["note"].as_str().unwrap_or("")
        );
    }
    Output {
        json: Value::Array(records),
        text,
        verified: true,
    }
}
