//! Command-line front end: parse module definition files, dispatch to the
//! engines, emit human-readable and machine-readable reports.

mod doc;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use doc::{BallDoc, ModuleDocument, ModuleKind, ReportDocument, VerdictDoc, FORMAT_VERSION};
use qcurv_core::{
    cyclotomic::x_field, deform, diagonal_galois_group, parse_ratfun, q_field, qx_field,
    relation_lattice, specialize_q1, specialize_q_value, triviality_scan, verify_by_curvatures,
    BallValue, Conclusion, CurvatureError, DeformError, DiffModule, FactorError, FieldCtx, Mat,
    Prec, QDiffModule, QxFun, Rat, RatFun, RatQ, ThetaError, QQ,
};

#[derive(Parser)]
#[command(
    name = "qcurv",
    version,
    about = "Curvature tests, Galois lattices, deformation and certified theta solving for q-difference modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan v-curvatures over a range of cyclotomic places and report a
    /// triviality verdict.
    Scan {
        file: PathBuf,
        /// Place range as n_min:n_max.
        #[arg(long, default_value = "1:50")]
        range: String,
        /// Number of failing places needed for a nontrivial verdict.
        #[arg(long, default_value_t = 3)]
        threshold: u32,
        /// Skip the degenerate place n = 1.
        #[arg(long)]
        exclude_n1: bool,
        /// Evaluate places in parallel (output order is unchanged).
        #[arg(long)]
        parallel: bool,
        /// Write the report as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Compute the diagonal generic Galois group as an integer relation
    /// lattice, cross-checked by curvatures.
    GaloisDiagonal {
        file: PathBuf,
        #[arg(long, default_value = "1:30")]
        range: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Deform a differential module into the q-difference module
    /// I + (q-1)xG.
    Deform {
        file: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Specialize the deformation parameter q of a q-difference module.
    Specialize {
        file: PathBuf,
        /// Rational value for q; 1 recovers the differential matrix G.
        #[arg(long, default_value = "1")]
        q_val: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the curvature scan on the deformation of a differential module.
    DiffScan {
        file: PathBuf,
        #[arg(long, default_value = "1:50")]
        range: String,
        #[arg(long, default_value_t = 3)]
        threshold: u32,
        #[arg(long)]
        exclude_n1: bool,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Evaluate a certified fundamental solution built from theta functions.
    ThetaSolve {
        file: PathBuf,
        /// Evaluation point x0.
        #[arg(long, default_value = "1/2")]
        at: String,
        /// Rational q > 1.
        #[arg(long, default_value = "2")]
        q_val: String,
        /// Series truncation order N.
        #[arg(long, default_value_t = 16)]
        order: usize,
        /// Tolerance; accepts p/q, integers, and 2^-k.
        #[arg(long, default_value = "2^-40")]
        tol: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<CurvatureError> for CliError {
    fn from(e: CurvatureError) -> Self {
        let code = match e {
            CurvatureError::NoGoodPlaces { .. } => 3,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<FactorError> for CliError {
    fn from(e: FactorError) -> Self {
        let code = match e {
            FactorError::FactorizationOutOfRange { .. } => 4,
            FactorError::Zero => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<DeformError> for CliError {
    fn from(e: DeformError) -> Self {
        let code = match e {
            DeformError::Module(_) => 2,
            _ => 5,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<ThetaError> for CliError {
    fn from(e: ThetaError) -> Self {
        let code = match e {
            ThetaError::InvalidInput(_) => 2,
            _ => 5,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}

fn parse_range(s: &str) -> Result<(u32, u32), CliError> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| CliError::input(format!("range must be n_min:n_max, got {s:?}")))?;
    let n_min: u32 = a
        .parse()
        .map_err(|_| CliError::input(format!("bad range bound {a:?}")))?;
    let n_max: u32 = b
        .parse()
        .map_err(|_| CliError::input(format!("bad range bound {b:?}")))?;
    if n_min < 1 || n_min > n_max {
        return Err(CliError::input(format!(
            "range requires 1 <= n_min <= n_max, got {n_min}:{n_max}"
        )));
    }
    Ok((n_min, n_max))
}

/// Rational literals: "p/q", integers, and power forms like "2^-40".
fn parse_rat(s: &str) -> Result<Rat, CliError> {
    let bad = || CliError::input(format!("cannot parse rational {s:?}"));
    let s = s.trim();
    if let Some((base, exp)) = s.split_once('^') {
        let base: BigInt = base.parse().map_err(|_| bad())?;
        let exp: i64 = exp.parse().map_err(|_| bad())?;
        if base.is_zero() {
            return Err(bad());
        }
        let mag = num_traits::pow::pow(base, exp.unsigned_abs() as usize);
        return Ok(if exp < 0 {
            Rat::new(BigInt::one(), mag)
        } else {
            Rat::from_integer(mag)
        });
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(num, den));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}

fn rat_str(r: &Rat) -> String {
    r.to_string()
}

fn load_doc(path: &Path) -> Result<ModuleDocument, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let doc: ModuleDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    if doc.format != FORMAT_VERSION {
        return Err(CliError::input(format!(
            "unsupported format version {} (expected {FORMAT_VERSION})",
            doc.format
        )));
    }
    Ok(doc)
}

fn doc_matrix<'d>(doc: &'d ModuleDocument, kind: ModuleKind) -> Result<&'d Vec<Vec<String>>, CliError> {
    if doc.kind != kind {
        return Err(CliError::input(format!(
            "expected a {} document, got {:?}",
            match kind {
                ModuleKind::QDifference => "q_difference",
                ModuleKind::Differential => "differential",
                ModuleKind::DiagonalConstants => "diagonal_constants",
            },
            doc.kind
        )));
    }
    let matrix = doc
        .matrix
        .as_ref()
        .ok_or_else(|| CliError::input("document has no matrix"))?;
    if matrix.len() != doc.dimension || matrix.iter().any(|r| r.len() != doc.dimension) {
        return Err(CliError::input(format!(
            "matrix is not {0}x{0}",
            doc.dimension
        )));
    }
    Ok(matrix)
}

fn qdiff_module(doc: &ModuleDocument) -> Result<QDiffModule, CliError> {
    let matrix = doc_matrix(doc, ModuleKind::QDifference)?;
    let rows: Vec<Vec<String>> = matrix.to_vec();
    qcurv_core::module_from_strings(&rows).map_err(CliError::input)
}

/// An expression in q and x with all coefficients free of q, as an element
/// of Q(x).
fn ratfun_to_qx(f: &RatFun) -> Option<QxFun> {
    let to_rat = |c: &RatQ| -> Option<Rat> {
        if c.num.is_constant() && c.den.is_constant() {
            let den = c.den.coeff(&QQ, 0);
            Some(c.num.coeff(&QQ, 0) / den)
        } else {
            None
        }
    };
    let lift = |p: &qcurv_core::Poly<RatQ>| -> Option<qcurv_core::Poly<Rat>> {
        let coeffs = p.coeffs.iter().map(to_rat).collect::<Option<Vec<_>>>()?;
        Some(qcurv_core::Poly::from_coeffs(&QQ, coeffs))
    };
    qx_field().from_parts(lift(&f.num)?, lift(&f.den)?)
}

fn diff_module(doc: &ModuleDocument) -> Result<DiffModule, CliError> {
    let matrix = doc_matrix(doc, ModuleKind::Differential)?;
    let mut rows = Vec::with_capacity(matrix.len());
    for row in matrix {
        let mut out = Vec::with_capacity(row.len());
        for s in row {
            let f = parse_ratfun(s).map_err(|e| CliError::input(format!("{s:?}: {e}")))?;
            let g = ratfun_to_qx(&f).ok_or_else(|| {
                CliError::input(format!("{s:?}: differential entries must not involve q"))
            })?;
            out.push(g);
        }
        rows.push(out);
    }
    DiffModule::new(Mat::from_rows(rows)).map_err(|e| CliError::input(e.to_string()))
}

fn diagonal_constants(doc: &ModuleDocument) -> Result<Vec<RatQ>, CliError> {
    if doc.kind != ModuleKind::DiagonalConstants {
        return Err(CliError::input(format!(
            "expected a diagonal_constants document, got {:?}",
            doc.kind
        )));
    }
    let constants = doc
        .constants
        .as_ref()
        .ok_or_else(|| CliError::input("document has no constants"))?;
    if constants.len() != doc.dimension {
        return Err(CliError::input(format!(
            "expected {} constants, got {}",
            doc.dimension,
            constants.len()
        )));
    }
    let qf = q_field();
    let mut out = Vec::with_capacity(constants.len());
    for s in constants {
        let f = parse_ratfun(s).map_err(|e| CliError::input(format!("{s:?}: {e}")))?;
        if !(f.num.is_constant() && f.den.is_constant()) {
            return Err(CliError::input(format!(
                "{s:?}: diagonal constants must not involve x"
            )));
        }
        let num = f.num.coeff(&qf, 0);
        let den = f.den.coeff(&qf, 0);
        let inv = qf
            .inv(&den)
            .ok_or_else(|| CliError::input(format!("{s:?}: zero denominator")))?;
        let c = qf.mul(&num, &inv);
        if qf.is_zero(&c) {
            return Err(CliError::input(format!("{s:?}: constants must be nonzero")));
        }
        out.push(c);
    }
    Ok(out)
}

fn doc_echo(doc: &ModuleDocument) -> Value {
    serde_json::to_value(doc).expect("document serializes")
}

fn ball_doc(b: &BallValue) -> BallDoc {
    BallDoc {
        midpoint: rat_str(&b.midpoint),
        radius: rat_str(&b.radius),
    }
}

fn matrix_strings<T, F: Fn(&T) -> String>(m: &Mat<T>, f: F) -> Vec<Vec<String>>
where
    T: Clone + PartialEq + std::fmt::Debug,
{
    (0..m.rows)
        .map(|i| (0..m.cols).map(|j| f(m.at(i, j))).collect())
        .collect()
}

fn emit(report: &ReportDocument, json_path: &Option<PathBuf>) -> Result<(), CliError> {
    if let Some(path) = json_path {
        let text = serde_json::to_string_pretty(report)
            .expect("report serializes");
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn print_verdict(v: &VerdictDoc) {
    println!(
        "places {}..={}: {} good, {} identity, {} bad, {} failures",
        v.n_min,
        v.n_max,
        v.good_places,
        v.identity_places,
        v.bad_places.len(),
        v.failure_places.len()
    );
    for b in &v.bad_places {
        println!("  n={:<3} bad place ({})", b.n, b.witness);
    }
    for n in &v.failure_places {
        println!("  n={:<3} curvature differs from the identity", n);
    }
    println!("verdict: {}", v.conclusion);
}

fn scan_report(
    command: &str,
    doc: &ModuleDocument,
    verdict: &qcurv_core::Verdict,
    range: &str,
    threshold: u32,
    exclude_n1: bool,
    timing_ms: u128,
) -> (ReportDocument, i32) {
    let vdoc = VerdictDoc::from_verdict(verdict, threshold);
    print_verdict(&vdoc);
    let exit = match verdict.conclusion {
        Conclusion::ConsistentWithTrivial => 0,
        Conclusion::NontrivialHeuristic { .. } => 10,
    };
    let report = ReportDocument {
        command: command.to_string(),
        inputs: json!({
            "module": doc_echo(doc),
            "range": range,
            "threshold": threshold,
            "exclude_n1": exclude_n1,
        }),
        results: serde_json::to_value(&vdoc).expect("verdict serializes"),
        version: env!("CARGO_PKG_VERSION").to_string(),
        timing_ms,
    };
    (report, exit)
}

fn run(command: Command) -> Result<i32, CliError> {
    let start = Instant::now();
    match command {
        Command::Scan {
            file,
            range,
            threshold,
            exclude_n1,
            parallel,
            json,
        } => {
            let doc = load_doc(&file)?;
            let module = qdiff_module(&doc)?;
            let (mut n_min, n_max) = parse_range(&range)?;
            if exclude_n1 {
                n_min = n_min.max(2);
            }
            let verdict = triviality_scan(&module, n_min, n_max, threshold, parallel)?;
            let (report, exit) = scan_report(
                "scan",
                &doc,
                &verdict,
                &range,
                threshold,
                exclude_n1,
                start.elapsed().as_millis(),
            );
            emit(&report, &json)?;
            Ok(exit)
        }
        Command::DiffScan {
            file,
            range,
            threshold,
            exclude_n1,
            parallel,
            json,
        } => {
            let doc = load_doc(&file)?;
            let module = diff_module(&doc)?;
            let (mut n_min, n_max) = parse_range(&range)?;
            if exclude_n1 {
                n_min = n_min.max(2);
            }
            let verdict =
                qcurv_core::diff_triviality_scan(&module, n_min, n_max, threshold, parallel)?;
            let (report, exit) = scan_report(
                "diff-scan",
                &doc,
                &verdict,
                &range,
                threshold,
                exclude_n1,
                start.elapsed().as_millis(),
            );
            emit(&report, &json)?;
            Ok(exit)
        }
        Command::GaloisDiagonal { file, range, json } => {
            let doc = load_doc(&file)?;
            let constants = diagonal_constants(&doc)?;
            let (n_min, n_max) = parse_range(&range)?;
            let lattice = relation_lattice(&constants)?;
            let group = diagonal_galois_group(&constants)?;
            let verdict = verify_by_curvatures(&constants, &lattice, n_min, n_max)?;
            let vdoc = VerdictDoc::from_verdict(&verdict, 1);
            println!("relation lattice rank {} in Z^{}", lattice.rank, lattice.dim);
            for row in &lattice.basis {
                println!("  {row:?}");
            }
            println!(
                "group: torus dimension {}, finite part {:?}",
                group.torus_dimension, group.finite_part
            );
            println!(
                "curvature check over {}..={}: {} failures",
                n_min,
                n_max,
                verdict.failure_places.len()
            );
            let report = ReportDocument {
                command: "galois-diagonal".to_string(),
                inputs: json!({
                    "module": doc_echo(&doc),
                    "range": range,
                }),
                results: json!({
                    "lattice_basis": lattice.basis,
                    "rank": lattice.rank,
                    "torus_dimension": group.torus_dimension,
                    "finite_part": group.finite_part,
                    "defining_characters": group.defining_characters,
                    "curvature_check": serde_json::to_value(&vdoc).expect("verdict serializes"),
                }),
                version: env!("CARGO_PKG_VERSION").to_string(),
                timing_ms: start.elapsed().as_millis(),
            };
            emit(&report, &json)?;
            Ok(0)
        }
        Command::Deform { file, json } => {
            let doc = load_doc(&file)?;
            let module = diff_module(&doc)?;
            let deformed = deform(&module).map_err(|e| CliError::input(e.to_string()))?;
            let xf = x_field();
            let matrix = matrix_strings(&deformed.sigma_matrix, |e| xf.print(e, Prec::Add));
            for row in &matrix {
                println!("[{}]", row.join(", "));
            }
            let report = ReportDocument {
                command: "deform".to_string(),
                inputs: json!({ "module": doc_echo(&doc) }),
                results: json!({
                    "kind": "q_difference",
                    "dimension": deformed.dim,
                    "matrix": matrix,
                }),
                version: env!("CARGO_PKG_VERSION").to_string(),
                timing_ms: start.elapsed().as_millis(),
            };
            emit(&report, &json)?;
            Ok(0)
        }
        Command::Specialize { file, q_val, json } => {
            let doc = load_doc(&file)?;
            let module = qdiff_module(&doc)?;
            let a = parse_rat(&q_val)?;
            let qxf = qx_field();
            let (kind, matrix) = if a.is_one() {
                let d = specialize_q1(&module)?;
                (
                    "differential",
                    matrix_strings(&d.g, |e| qxf.print(e, Prec::Add)),
                )
            } else {
                let s = specialize_q_value(&module, &a)?;
                (
                    "q_difference_at_value",
                    matrix_strings(&s.matrix, |e| qxf.print(e, Prec::Add)),
                )
            };
            for row in &matrix {
                println!("[{}]", row.join(", "));
            }
            let report = ReportDocument {
                command: "specialize".to_string(),
                inputs: json!({
                    "module": doc_echo(&doc),
                    "q_val": rat_str(&a),
                }),
                results: json!({
                    "kind": kind,
                    "dimension": module.dim,
                    "matrix": matrix,
                }),
                version: env!("CARGO_PKG_VERSION").to_string(),
                timing_ms: start.elapsed().as_millis(),
            };
            emit(&report, &json)?;
            Ok(0)
        }
        Command::ThetaSolve {
            file,
            at,
            q_val,
            order,
            tol,
            json,
        } => {
            let doc = load_doc(&file)?;
            let module = qdiff_module(&doc)?;
            let x0 = parse_rat(&at)?;
            let qv = parse_rat(&q_val)?;
            let tol = parse_rat(&tol)?;
            let value = qcurv_core::fundamental_eval(&module, &x0, &qv, order, &tol)?;
            let qf = q_field();
            let series = qcurv_core::frobenius_series(&module, order)?;
            let exponents: Vec<String> = series
                .exponents
                .iter()
                .map(|c| qf.print(c, Prec::Add))
                .collect();
            let value_json: Vec<Vec<BallDoc>> = (0..value.value.rows)
                .map(|i| {
                    (0..value.value.cols)
                        .map(|j| ball_doc(value.value.at(i, j)))
                        .collect()
                })
                .collect();
            let residual_json: Vec<Vec<BallDoc>> = (0..value.residual.rows)
                .map(|i| {
                    (0..value.residual.cols)
                        .map(|j| ball_doc(value.residual.at(i, j)))
                        .collect()
                })
                .collect();
            let residual_ok = value
                .residual
                .entries()
                .all(BallValue::contains_zero);
            println!(
                "U({}) computed at q = {}, order {}: residual contains zero: {}",
                rat_str(&x0),
                rat_str(&qv),
                order,
                residual_ok
            );
            for row in &value_json {
                let cells: Vec<String> = row
                    .iter()
                    .map(|b| format!("{} +/- {}", b.midpoint, b.radius))
                    .collect();
                println!("[{}]", cells.join(", "));
            }
            let report = ReportDocument {
                command: "theta-solve".to_string(),
                inputs: json!({
                    "module": doc_echo(&doc),
                    "at": rat_str(&x0),
                    "q_val": rat_str(&qv),
                    "order": order,
                    "tol": rat_str(&tol),
                }),
                results: json!({
                    "exponents": exponents,
                    "value": value_json,
                    "residual": residual_json,
                    "residual_contains_zero": residual_ok,
                    "truncation_bound": rat_str(&value.truncation_bound),
                }),
                version: env!("CARGO_PKG_VERSION").to_string(),
                timing_ms: start.elapsed().as_millis(),
            };
            emit(&report, &json)?;
            Ok(0)
        }
    }
}
