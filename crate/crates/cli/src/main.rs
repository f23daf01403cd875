use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use symlie::catalog::{
    build_entry, catalog_list, check_hurwitz, check_symmetric_composition, unit_element,
    CatalogError,
};
use symlie::coordinatize::{
    build_g_from_nlrta, extract_gm_from_s3, extract_nlrta, verify_nlrta, CoordError,
};
use symlie::gmalcev::{build_g_of_m, check_gm_axioms, malcev_violations, GmError};
use symlie::io::{parse_doc, to_json, Doc, IoError};
use symlie::linalg::unit;
use symlie::symaction::{
    check_action, isotypic_s3, isotypic_s4, klein_grading, ActionError, GroupAction,
};
use symlie::tetra::{
    check_homomorphisms, check_relations, sample_elements, scodim, tetra_s4, uiuj_check, v_closure,
    v_generators_check, vs_modules, IdentityCheck, TetraError,
};
use symlie::{Algebra, Scalar};

/// Exact construction and verification of Lie algebras with S3 and S4 actions.
///
/// Exit status: 0 when every requested verification passes, 1 when one fails,
/// 2 on malformed input. Set RAYON_NUM_THREADS to cap parallelism.
#[derive(Parser, Debug)]
#[command(name = "symlie", version)]
struct Cli {
    /// Write a machine-readable report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List or build ready-made algebras.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Build a catalog algebra, or g(M) / g(A) from an input document.
    Build(BuildArgs),
    /// Run one verification on an algebra document.
    Check {
        what: CheckKind,
        #[command(flatten)]
        source: Source,
    },
    /// Isotypic decomposition under the group action in the document.
    Decompose {
        #[arg(long, value_enum)]
        group: GroupArg,
        #[command(flatten)]
        source: Source,
    },
    /// Read the coordinate algebra off a Lie algebra with an S3 or S4 action.
    Extract {
        what: ExtractKind,
        #[command(flatten)]
        source: Source,
        /// Write the extracted document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded checks on the tetrahedron algebra sl2 ⊗ 𝒜.
    #[command(subcommand)]
    Tetra(TetraCmd),
}

#[derive(Subcommand, Debug)]
enum CatalogCmd {
    List,
    Build {
        name: String,
        #[arg(long)]
        param: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct BuildArgs {
    /// A catalog name, `g-of-m` or `g-from-nlrta`.
    name: String,
    /// Input document for `g-of-m` and `g-from-nlrta`.
    input: Option<String>,
    #[arg(long, visible_aliases = ["dim", "n", "m", "d"])]
    param: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Source {
    /// Algebra document, `-` for stdin.
    file: Option<String>,
    /// Use a catalog entry instead of a file.
    #[arg(long, conflicts_with = "file")]
    catalog: Option<String>,
    #[arg(long, requires = "catalog", visible_aliases = ["dim", "n", "m", "d"])]
    param: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CheckKind {
    Jacobi,
    Malcev,
    Gm,
    Action,
    Nlrta,
    Composition,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GroupArg {
    S3,
    S4,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExtractKind {
    Gm,
    Nlrta,
}

#[derive(Subcommand, Debug)]
enum TetraCmd {
    /// Basis brackets, generator action on the uᵢ, and the vᵢ brackets.
    CheckUiuj,
    /// S4-types of the modules V'ₛ and Vₛ.
    Vs {
        /// Inclusive range `a..b`.
        #[arg(long, default_value = "-3..3", allow_hyphen_values = true)]
        s: String,
    },
    /// Bracket closure of v₀, v₁, v₂ with 𝒮-membership of every coefficient.
    Vclosure {
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// 𝒮-slice plus span{2t−1} against the 𝒜-slice on a degree window.
    Scodim {
        #[arg(long, default_value_t = 10)]
        degree: usize,
    },
    /// S4 relations and automorphism property on sample elements tᵃ(1−t)ᵇuᵢ, |a|,|b| ≤ bound.
    Relations {
        #[arg(long, default_value_t = 2)]
        bound: i64,
    },
}

/// Why a run stopped early: exit 2 for bad input, exit 1 for a failed verification.
enum Halt {
    Input(String),
    Failed(String),
}

impl From<IoError> for Halt {
    fn from(e: IoError) -> Self {
        Halt::Input(e.to_string())
    }
}

impl From<CatalogError> for Halt {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::Invalid(_) | CatalogError::Unknown(_) => Halt::Input(e.to_string()),
            _ => Halt::Failed(e.to_string()),
        }
    }
}

impl From<ActionError> for Halt {
    fn from(e: ActionError) -> Self {
        match e {
            ActionError::DimensionMismatch { .. } => Halt::Input(e.to_string()),
            _ => Halt::Failed(e.to_string()),
        }
    }
}

impl From<GmError> for Halt {
    fn from(e: GmError) -> Self {
        Halt::Failed(e.to_string())
    }
}

impl From<CoordError> for Halt {
    fn from(e: CoordError) -> Self {
        match e {
            CoordError::MissingInvolution => Halt::Input(e.to_string()),
            CoordError::Action(a) => a.into(),
            _ => Halt::Failed(e.to_string()),
        }
    }
}

impl From<TetraError> for Halt {
    fn from(e: TetraError) -> Self {
        match e {
            TetraError::Invalid(_) | TetraError::Parse(_) => Halt::Input(e.to_string()),
            _ => Halt::Failed(e.to_string()),
        }
    }
}

struct CheckResult {
    name: String,
    pass: bool,
    summary: String,
    witnesses: Vec<String>,
    detail: Value,
}

fn result(
    name: impl Into<String>,
    pass: bool,
    summary: impl Into<String>,
    detail: Value,
) -> CheckResult {
    CheckResult {
        name: name.into(),
        pass,
        summary: summary.into(),
        witnesses: Vec::new(),
        detail,
    }
}

fn tagged<T: std::fmt::Debug>(w: &[T]) -> Vec<String> {
    w.iter().map(|x| format!("{x:?}")).collect()
}

fn with_witnesses<T: std::fmt::Debug>(mut r: CheckResult, w: &[T]) -> CheckResult {
    r.witnesses = tagged(w);
    r
}

#[derive(Default)]
struct Outcome {
    digest: Option<String>,
    results: Vec<CheckResult>,
    /// Document produced by `build` / `extract`, with its destination.
    emitted: Option<(String, Option<PathBuf>)>,
    listing: Vec<String>,
}

struct Input {
    doc: Doc,
    digest: String,
}

fn digest(bytes: &[u8]) -> String {
    let mut s = String::from("sha256:");
    for b in Sha256::digest(bytes) {
        let _ = write!(s, "{b:02x}");
    }
    s
}

fn load(src: &Source) -> Result<Input, Halt> {
    if let Some(name) = &src.catalog {
        let doc = Doc::from_entry(&build_entry(name, src.param)?);
        let text = to_json(&doc);
        return Ok(Input {
            digest: digest(text.as_bytes()),
            doc,
        });
    }
    let path = src
        .file
        .as_deref()
        .ok_or_else(|| Halt::Input("no input: give a file, `-`, or --catalog".into()))?;
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Halt::Input(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Halt::Input(format!("{path}: {e}")))?
    };
    let doc = parse_doc(&text).map_err(|e| Halt::Input(format!("{path}: {e}")))?;
    Ok(Input {
        doc,
        digest: digest(text.as_bytes()),
    })
}

fn full_space(n: usize) -> Vec<Vec<Scalar>> {
    (0..n).map(|i| unit(n, i)).collect()
}

fn jacobi_result(alg: &Algebra) -> CheckResult {
    let anti = alg.check_anticommutative();
    let jac = alg.check_jacobi();
    let pass = anti.is_empty() && jac.is_empty();
    let mut r = result(
        "jacobi",
        pass,
        format!(
            "dim {}, {} anticommutativity and {} Jacobi violations",
            alg.dim,
            anti.len(),
            jac.len()
        ),
        json!({ "dim": alg.dim, "anticommutativity": anti, "jacobi": jac }),
    );
    r.witnesses = anti
        .iter()
        .map(|p| format!("anticommutativity {p:?}"))
        .chain(jac.iter().map(|t| format!("jacobi {t:?}")))
        .collect();
    r
}

fn action_of(doc: &Doc) -> Result<GroupAction<Scalar>, Halt> {
    match doc.action.as_ref().map(|a| a.group.as_str()) {
        Some("S4") => Ok(GroupAction::S4(doc.s4_action()?)),
        _ => Ok(GroupAction::S3(doc.s3_action()?)),
    }
}

fn action_result(alg: &Algebra, act: &GroupAction<Scalar>) -> Result<CheckResult, Halt> {
    let rep = check_action(alg, act)?;
    let mut r = result(
        "action",
        rep.ok(),
        format!(
            "{} relation and {} automorphism failures, {} of {} elements distinct",
            rep.relation_failures.len(),
            rep.automorphism_failures.len(),
            rep.distinct_elements,
            rep.group_order
        ),
        serde_json::to_value(&rep).expect("serializable"),
    );
    r.witnesses = rep
        .relation_failures
        .iter()
        .cloned()
        .chain(rep.automorphism_failures.iter().map(|w| format!("{w:?}")))
        .collect();
    Ok(r)
}

fn check(what: CheckKind, input: &Input) -> Result<Vec<CheckResult>, Halt> {
    let doc = &input.doc;
    Ok(match what {
        CheckKind::Jacobi => vec![jacobi_result(&doc.algebra()?)],
        CheckKind::Malcev => {
            let alg = doc.algebra()?;
            let anti = alg.check_anticommutative();
            let v = malcev_violations(&alg);
            let r = result(
                "malcev",
                anti.is_empty() && v.is_empty(),
                format!(
                    "dim {}, {} anticommutativity and {} Sagle violations",
                    alg.dim,
                    anti.len(),
                    v.len()
                ),
                json!({ "dim": alg.dim, "anticommutativity": anti, "sagle": v }),
            );
            vec![with_witnesses(r, &v)]
        }
        CheckKind::Gm => {
            let m = doc.gm()?;
            let rep = check_gm_axioms(&m);
            let mut r = result(
                "gm",
                rep.ok(),
                format!("dim {}: {}", m.dim, rep.summary()),
                serde_json::to_value(&rep).expect("serializable"),
            );
            r.witnesses = [
                ("anticommutativity", tagged(&rep.not_anticommutative)),
                ("(xy)z", tagged(&rep.product_triple)),
                ("{a,b,xy}", tagged(&rep.triple_on_product)),
                ("generalized-jordan", tagged(&rep.generalized_jordan)),
                ("cyclic-first", tagged(&rep.cyclic_first)),
                ("cyclic-second", tagged(&rep.cyclic_second)),
            ]
            .into_iter()
            .flat_map(|(n, w)| w.into_iter().map(move |x| format!("{n} {x}")))
            .collect();
            vec![r]
        }
        CheckKind::Action => vec![action_result(&doc.algebra()?, &action_of(doc)?)?],
        CheckKind::Nlrta => {
            let nl = doc.nlrta()?;
            let rep = verify_nlrta(&nl);
            let json = serde_json::to_value(&rep).expect("serializable");
            let mut witnesses = Vec::new();
            if let Value::Object(map) = &json {
                for (k, v) in map {
                    for w in v.as_array().into_iter().flatten() {
                        witnesses.push(format!("{k} {w}"));
                    }
                }
            }
            let mut r = result(
                "nlrta",
                rep.ok(),
                format!("dim {}: {}", nl.dim(), rep.summary()),
                json,
            );
            r.witnesses = witnesses;
            vec![r]
        }
        CheckKind::Composition => {
            let alg = doc.algebra()?;
            if alg.form.is_none() {
                return Err(Halt::Input("composition check needs a `form`".into()));
            }
            let (kind, rep) = if unit_element(&alg).is_some() {
                if alg.invol.is_none() {
                    return Err(Halt::Input(
                        "unital composition check needs an `invol`".into(),
                    ));
                }
                ("hurwitz", check_hurwitz(&alg))
            } else {
                ("symmetric", check_symmetric_composition(&alg))
            };
            let json = serde_json::to_value(&rep).expect("serializable");
            let r = result(
                "composition",
                rep.ok(),
                format!(
                    "{kind}, dim {}: {} alternative, {} multiplicative, {} involution, {} associative-form failures",
                    alg.dim,
                    rep.alternative.len(),
                    rep.multiplicative.len(),
                    rep.standard_involution.len(),
                    rep.associative_form.len()
                ),
                json!({ "kind": kind, "violations": json }),
            );
            vec![with_witnesses(r, &rep.multiplicative)]
        }
    })
}

fn decompose(group: GroupArg, input: &Input) -> Result<Vec<CheckResult>, Halt> {
    let alg = input.doc.algebra()?;
    let space = full_space(alg.dim);
    let rep = match group {
        GroupArg::S3 => isotypic_s3(&space, &input.doc.s3_action()?)?,
        GroupArg::S4 => isotypic_s4(&space, &input.doc.s4_action()?)?,
    };
    let total = rep.total_dim();
    let summary = rep
        .multiplicities
        .iter()
        .map(|(k, v)| format!("m_{k} = {v}"))
        .collect::<Vec<_>>()
        .join(", ");
    Ok(vec![result(
        "decompose",
        total == alg.dim,
        format!("{summary}; sum of m·dim = {total}, dim = {}", alg.dim),
        json!({ "group": format!("{group:?}"), "multiplicities": rep.multiplicities, "sum": total, "dim": alg.dim }),
    )])
}

fn emit(doc: &Doc, out: Option<PathBuf>) -> Option<(String, Option<PathBuf>)> {
    Some((to_json(doc), out))
}

fn build(args: BuildArgs, outcome: &mut Outcome) -> Result<(), Halt> {
    let from_file = |outcome: &mut Outcome| -> Result<Doc, Halt> {
        let src = Source {
            file: args.input.clone(),
            catalog: None,
            param: None,
        };
        let input = load(&src)?;
        outcome.digest = Some(input.digest);
        Ok(input.doc)
    };
    match args.name.as_str() {
        "g-of-m" => {
            let m = from_file(outcome)?.gm()?;
            let (g, act) = build_g_of_m(&m)?;
            outcome.results.push(jacobi_result(&g.alg));
            outcome
                .results
                .push(action_result(&g.alg, &GroupAction::S3(act.clone()))?);
            outcome.results.push(result(
                "g-of-m",
                true,
                format!("dim {} = d+ {} + d- {} + 2·{}", g.alg.dim, g.n_plus(), g.n_minus(), g.m_dim),
                json!({ "dim": g.alg.dim, "d_plus": g.n_plus(), "d_minus": g.n_minus(), "m_dim": g.m_dim }),
            ));
            outcome.emitted = emit(
                &Doc::from_algebra(&g.alg).with_s3(&act).with_name("g-of-m"),
                args.out,
            );
        }
        "g-from-nlrta" => {
            let nl = from_file(outcome)?.nlrta()?;
            let g = build_g_from_nlrta(&nl)?;
            outcome.results.push(jacobi_result(&g.alg));
            outcome
                .results
                .push(action_result(&g.alg, &GroupAction::S4(g.action.clone()))?);
            let k = klein_grading(&g.action)?.dims();
            let expected = [g.inlrt.len(), g.a_dim, g.a_dim, g.a_dim];
            outcome.results.push(result(
                "klein-grading",
                k == expected,
                format!("dims {k:?}, expected {expected:?}"),
                json!({ "dims": k, "expected": expected }),
            ));
            outcome.emitted = emit(
                &Doc::from_algebra(&g.alg)
                    .with_s4(&g.action)
                    .with_name("g-from-nlrta"),
                args.out,
            );
        }
        name => {
            let entry = build_entry(name, args.param)?;
            let doc = Doc::from_entry(&entry);
            for (k, v) in &entry.expected {
                outcome
                    .results
                    .push(result(k.clone(), true, v.clone(), json!(v)));
            }
            outcome.emitted = emit(&doc, args.out);
        }
    }
    Ok(())
}

fn extract(
    what: ExtractKind,
    input: &Input,
    out: Option<PathBuf>,
    outcome: &mut Outcome,
) -> Result<(), Halt> {
    let alg = input.doc.algebra()?;
    match what {
        ExtractKind::Gm => {
            let ex = extract_gm_from_s3(&alg, &input.doc.s3_action()?, None)?;
            let rep = check_gm_axioms(&ex.gm);
            outcome.results.push(result(
                "gm",
                rep.ok(),
                format!("dim {}: {}", ex.gm.dim, rep.summary()),
                json!(rep),
            ));
            outcome.emitted = emit(&Doc::from_gm(&ex.gm).with_name("extracted-gm"), out);
        }
        ExtractKind::Nlrta => {
            let ex = extract_nlrta(&alg, &input.doc.s4_action()?)?;
            let rep = verify_nlrta(&ex.nlrta);
            outcome.results.push(result(
                "nlrta",
                rep.ok(),
                format!("dim {}: {}", ex.nlrta.dim(), rep.summary()),
                json!(rep),
            ));
            outcome.emitted = emit(
                &Doc::from_nlrta(&ex.nlrta).with_name("extracted-nlrta"),
                out,
            );
        }
    }
    Ok(())
}

fn identity_results(checks: Vec<IdentityCheck>) -> Vec<CheckResult> {
    checks
        .into_iter()
        .map(|c| {
            let mut r = result(
                c.name.clone(),
                c.ok(),
                String::new(),
                json!({ "lhs": c.lhs, "rhs": c.rhs }),
            );
            if !c.ok() {
                r.witnesses = vec![format!("lhs {}", c.lhs), format!("rhs {}", c.rhs)];
            }
            r
        })
        .collect()
}

fn parse_range(s: &str) -> Result<(i64, i64), Halt> {
    let bad = || Halt::Input(format!("expected a range a..b, got `{s}`"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn tetra(cmd: TetraCmd) -> Result<Vec<CheckResult>, Halt> {
    Ok(match cmd {
        TetraCmd::CheckUiuj => {
            let mut out = identity_results(uiuj_check());
            out.extend(identity_results(v_generators_check()));
            out
        }
        TetraCmd::Vs { s } => {
            let (a, b) = parse_range(&s)?;
            let mut out = Vec::new();
            for s in a..=b {
                let (vp, v) = vs_modules(s)?;
                for m in [vp, v] {
                    let found = m
                        .multiplicities
                        .iter()
                        .map(|(k, v)| format!("{k}^{v}"))
                        .collect::<Vec<_>>()
                        .join(" + ");
                    let name = format!("{}_{s}", if m.expected == "V" { "V" } else { "V'" });
                    let summary = format!(
                        "expected {}, characters give {found}, invariant {}",
                        m.expected, m.invariant
                    );
                    out.push(result(name, m.ok(), summary, json!(m)));
                }
            }
            out
        }
        TetraCmd::Vclosure { depth } => {
            let rep = v_closure(depth)?;
            let r = result(
                "vclosure",
                rep.ok(),
                format!(
                    "depth {depth}, span dims {:?}, {} elements, {} leave S",
                    rep.dims,
                    rep.elements.len(),
                    rep.membership_failures.len()
                ),
                json!({ "depth": depth, "dims": rep.dims, "elements": rep.elements.len(), "membership_failures": rep.membership_failures }),
            );
            vec![with_witnesses(r, &rep.membership_failures)]
        }
        TetraCmd::Scodim { degree } => {
            let rep = scodim(degree);
            vec![result(
                "scodim",
                rep.ok(),
                format!(
                    "window |k| <= {degree}: A-slice dim {}, S-slice dim {}, 2t-1 in S: {}",
                    rep.window_dim, rep.s_slice_dim, rep.complement_in_s
                ),
                json!(rep),
            )]
        }
        TetraCmd::Relations { bound } => {
            if bound < 0 {
                return Err(Halt::Input("bound must be nonnegative".into()));
            }
            let act = tetra_s4();
            let samples = sample_elements(bound);
            let rel = check_relations(&act, &samples);
            let hom = check_homomorphisms(&act, &samples);
            vec![
                with_witnesses(
                    result(
                        "relations",
                        rel.ok(),
                        format!("bound {bound}, {} checks", rel.checked),
                        json!(rel),
                    ),
                    &rel.failures,
                ),
                with_witnesses(
                    result(
                        "automorphisms",
                        hom.ok(),
                        format!("bound {bound}, {} checks", hom.checked),
                        json!(hom),
                    ),
                    &hom.failures,
                ),
            ]
        }
    })
}

fn run(cli: Cli) -> Result<Outcome, Halt> {
    let mut outcome = Outcome::default();
    match cli.command {
        Command::Catalog(CatalogCmd::List) => {
            for e in catalog_list() {
                let param = e
                    .param
                    .map_or(String::new(), |(p, d)| format!(" [{p}={d}]"));
                let kind = serde_json::to_value(e.kind).expect("serializable");
                outcome.listing.push(format!(
                    "{}{param}\t{}\t{}",
                    e.name,
                    kind.as_str().unwrap_or_default(),
                    e.about
                ));
            }
        }
        Command::Catalog(CatalogCmd::Build { name, param, out }) => {
            build(
                BuildArgs {
                    name,
                    input: None,
                    param,
                    out,
                },
                &mut outcome,
            )?;
        }
        Command::Build(args) => build(args, &mut outcome)?,
        Command::Check { what, source } => {
            let input = load(&source)?;
            outcome.digest = Some(input.digest.clone());
            outcome.results = check(what, &input)?;
        }
        Command::Decompose { group, source } => {
            let input = load(&source)?;
            outcome.digest = Some(input.digest.clone());
            outcome.results = decompose(group, &input)?;
        }
        Command::Extract { what, source, out } => {
            let input = load(&source)?;
            outcome.digest = Some(input.digest.clone());
            extract(what, &input, out, &mut outcome)?;
        }
        Command::Tetra(cmd) => outcome.results = tetra(cmd)?,
    }
    Ok(outcome)
}

const SHOWN_WITNESSES: usize = 10;

fn text_report(outcome: &Outcome) -> String {
    let mut s = String::new();
    for line in &outcome.listing {
        let _ = writeln!(s, "{line}");
    }
    for r in &outcome.results {
        let status = if r.pass { "PASS" } else { "FAIL" };
        let sep = if r.summary.is_empty() { "" } else { ": " };
        let _ = writeln!(s, "{status} {}{sep}{}", r.name, r.summary);
        for w in r.witnesses.iter().take(SHOWN_WITNESSES) {
            let _ = writeln!(s, "  witness {w}");
        }
        if r.witnesses.len() > SHOWN_WITNESSES {
            let _ = writeln!(s, "  ... {} more", r.witnesses.len() - SHOWN_WITNESSES);
        }
    }
    s
}

fn json_report(
    argv: &[String],
    outcome: Option<&Outcome>,
    error: Option<&str>,
    elapsed: Option<f64>,
) -> Value {
    let mut report = json!({ "command": argv });
    if let Some(o) = outcome {
        report["input_digest"] = json!(o.digest);
        report["results"] = Value::Array(
            o.results
                .iter()
                .map(|r| json!({ "name": r.name, "pass": r.pass, "summary": r.summary, "witnesses": r.witnesses, "detail": r.detail }))
                .collect(),
        );
        if !o.listing.is_empty() {
            report["listing"] = json!(o.listing);
        }
        report["pass"] = json!(o.results.iter().all(|r| r.pass));
    }
    if let Some(e) = error {
        report["error"] = json!(e);
        report["pass"] = json!(false);
    }
    if let Some(t) = elapsed {
        report["timing_seconds"] = json!(t);
    }
    report
}

fn write_json(path: &PathBuf, report: &Value) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).expect("serializable") + "\n";
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let json_path = cli.json.clone();
    let timing = cli.timing;
    let start = Instant::now();
    let outcome = run(cli);
    let elapsed = timing.then(|| start.elapsed().as_secs_f64());

    let (code, report) = match &outcome {
        Ok(o) => {
            let text = text_report(o);
            match &o.emitted {
                Some((doc, None)) => {
                    println!("{doc}");
                    eprint!("{text}");
                }
                Some((doc, Some(path))) => {
                    if let Err(e) = std::fs::write(path, format!("{doc}\n")) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                    print!("{text}");
                }
                None => print!("{text}"),
            }
            let pass = o.results.iter().all(|r| r.pass);
            (
                if pass { 0 } else { 1 },
                json_report(&argv, Some(o), None, elapsed),
            )
        }
        Err(Halt::Input(msg)) => {
            eprintln!("error: {msg}");
            (2, json_report(&argv, None, Some(msg), elapsed))
        }
        Err(Halt::Failed(msg)) => {
            println!("FAIL {msg}");
            (1, json_report(&argv, None, Some(msg), elapsed))
        }
    };
    if let Some(path) = json_path {
        if let Err(e) = write_json(&path, &report) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
