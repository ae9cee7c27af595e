use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use kf_core::ellcurve::{count_points, fixed_points, points, EllipticPoint};
use kf_core::gf::{arith, field_make, ArithOp, FieldSpec};
use kf_core::kummer::artin_invariant;
use kf_core::lattice::{gram_det, smith_normal_form, two_adic_normalize, IntLattice, IntMatrix};
use kf_core::pencil::{
    brute_force_sigma1, count_sigma1_fibers, hb_graded_exactness, hb_verify, lie_splitting,
    omega_trivial, HBComplex, PencilSpec,
};
use kf_core::poly::BinaryForm;
use kf_core::report::{artin_json, cy3_table, field_json, full_report, int_json, matrix_json, position_json};
use kf_core::series::{linearize, SeriesAutomorphism};
use kf_core::surfgeom::{classify_position, AlphaPosition};
use kf_core::Error;

#[derive(Parser)]
#[command(name = "kf", version, about = "Exact computations for supersingular pencils in characteristic 2 and 3")]
struct Cli {
    /// Emit JSON (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit flattened `key: value` lines.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite field data and element arithmetic.
    Field(FieldArgs),
    /// The curve y^2 + y = x^3 over GF(2^k).
    Curve(CurveArgs),
    /// Integer Gram matrices.
    Lattice(LatticeArgs),
    /// Classify an alpha_2 position (i:j).
    Position(PositionArgs),
    /// Artin invariant of the Kummer surface at a position.
    Artin(PositionArgs),
    /// Pencil invariants, fiber counts and the Hilbert-Burch check.
    Pencil(PencilArgs),
    /// Linearize a finite-order automorphism given as a series file.
    Linearize(LinearizeArgs),
    /// Full report for a pencil, or the invariant table alone.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Inv,
    Frobenius,
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long, default_value_t = 2)]
    p: u8,
    #[arg(long)]
    k: u32,
    /// List all elements.
    #[arg(long)]
    elements: bool,
    #[arg(long, value_enum)]
    op: Option<Op>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    /// Exponent for `--op pow`.
    #[arg(long)]
    e: Option<u64>,
    /// Embed `--a` into GF(p^target).
    #[arg(long)]
    embed: Option<u32>,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    count: bool,
    #[arg(long)]
    fixed_points: bool,
    #[arg(long)]
    points: bool,
}

#[derive(Args)]
struct LatticeArgs {
    /// JSON row arrays, e.g. '[[0,1],[1,0]]'.
    #[arg(long)]
    gram: String,
    #[arg(long)]
    det: bool,
    #[arg(long)]
    snf: bool,
    #[arg(long)]
    two_adic: bool,
    #[arg(long)]
    negative_definite: bool,
}

#[derive(Args)]
struct PositionArgs {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    i: String,
    #[arg(long)]
    j: String,
    /// Accepted for symmetry with the other flags; classification is the
    /// only output.
    #[arg(long)]
    classify: bool,
}

#[derive(Args)]
struct PencilArgs {
    #[arg(long)]
    p: u8,
    /// Coefficient field degree; defaults to 2 for p = 2 and 1 for p = 3.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: String,
    #[arg(long)]
    s: String,
    #[arg(long)]
    count_sigma1: bool,
    /// Cross-check the count by enumerating P^1 over GF(2^D).
    #[arg(long, value_name = "D")]
    brute_force: Option<u32>,
    #[arg(long)]
    hb_verify: bool,
    #[arg(long, default_value_t = 10)]
    max_degree: usize,
}

#[derive(Args)]
struct LinearizeArgs {
    #[arg(long, default_value_t = 2)]
    p: u8,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    order: u32,
    /// Series file: one line per coordinate, terms `coeff:e1,e2,...`.
    #[arg(long)]
    f: String,
    /// Primitive m-th root of unity; defaults to g^((q-1)/m).
    #[arg(long)]
    zeta: Option<String>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    p: u8,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    s: Option<String>,
    /// Print only the invariant table.
    #[arg(long)]
    table: bool,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Verification(_) => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Verification(_) => Failure::Verification(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn point_json(p: &EllipticPoint) -> Value {
    match p {
        EllipticPoint::Infinity => json!("inf"),
        EllipticPoint::Affine { x, y } => json!({ "x": x.to_string(), "y": y.to_string() }),
    }
}

fn run_field(a: &FieldArgs) -> Outcome {
    let spec = field_make(a.p, a.k)?;
    let mut out = json!({ "field": field_json(&spec), "generator": spec.generator().to_string() });
    if a.elements {
        out["elements"] = json!(spec.elements().map(|e| e.to_string()).collect::<Vec<_>>());
    }
    if let Some(target) = a.embed {
        let x = spec.parse_element(a.a.as_deref().ok_or_else(|| Failure::Usage("--embed needs --a".into()))?)?;
        let big = field_make(a.p, target)?;
        out["embedded"] = json!(x.embed(&big)?.to_string());
    }
    if let Some(op) = a.op {
        let x = spec.parse_element(a.a.as_deref().ok_or_else(|| Failure::Usage("--op needs --a".into()))?)?;
        let y = a.b.as_deref().map(|b| spec.parse_element(b)).transpose()?;
        let op = match op {
            Op::Add => ArithOp::Add,
            Op::Sub => ArithOp::Sub,
            Op::Mul => ArithOp::Mul,
            Op::Div => ArithOp::Div,
            Op::Pow => ArithOp::Pow(a.e.ok_or_else(|| Failure::Usage("--op pow needs --e".into()))?),
            Op::Inv => ArithOp::Inv,
            Op::Frobenius => ArithOp::Frobenius,
        };
        out["result"] = json!(arith(&x, y.as_ref(), op)?.to_string());
    }
    Ok(out)
}

fn run_curve(a: &CurveArgs) -> Outcome {
    let spec = field_make(2, a.k)?;
    let mut out = json!({ "field": field_json(&spec) });
    let show_count = a.count || !(a.fixed_points || a.points);
    if show_count {
        out["count"] = json!(count_points(&spec)?);
    }
    if a.fixed_points {
        out["fixed_points"] = Value::Array(fixed_points(&spec)?.iter().map(point_json).collect());
    }
    if a.points {
        out["points"] = Value::Array(points(&spec)?.iter().map(point_json).collect());
    }
    Ok(out)
}

fn run_lattice(a: &LatticeArgs) -> Outcome {
    let rows: Vec<Vec<BigInt>> = serde_json::from_str::<Vec<Vec<i64>>>(&a.gram)
        .map_err(|e| Failure::Usage(format!("bad --gram: {e}")))?
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    let lattice = IntLattice::new(IntMatrix::from_rows(rows)?)?;
    let any = a.det || a.snf || a.two_adic || a.negative_definite;
    let mut out = json!({ "rank": lattice.rank() });
    let det = gram_det(&lattice);
    if a.det || !any {
        out["det"] = int_json(&det);
    }
    if a.snf {
        let snf = smith_normal_form(lattice.gram());
        out["snf"] = Value::Array(snf.diag.iter().map(int_json).collect());
        out["u"] = matrix_json(&snf.u);
        out["v"] = matrix_json(&snf.v);
    }
    if a.two_adic {
        let (v, unit) = two_adic_normalize(&det)?;
        out["two_adic"] = json!({ "valuation": v, "unit": int_json(&unit) });
    }
    if a.negative_definite {
        out["negative_definite"] = json!(lattice.gram().is_negative_definite());
    }
    Ok(out)
}

fn parse_position(a: &PositionArgs) -> Result<AlphaPosition, Failure> {
    let spec = field_make(2, a.k)?;
    Ok(AlphaPosition::new(spec.parse_element(&a.i)?, spec.parse_element(&a.j)?)?)
}

fn run_position(a: &PositionArgs) -> Outcome {
    let pos = parse_position(a)?;
    let r = classify_position(&pos)?;
    Ok(json!({
        "position": position_json(&pos),
        "v": r.v,
        "vb_disc": int_json(&r.vb_disc),
        "in_P1F4": r.in_p1_f4,
        "containing_curve": r.containing_curve,
    }))
}

fn run_artin(a: &PositionArgs) -> Outcome {
    Ok(artin_json(&artin_invariant(&parse_position(a)?)?))
}

fn pencil_spec(p: u8, k: Option<u32>, n: usize, r: &str, s: &str) -> Result<PencilSpec, Failure> {
    let k = k.unwrap_or(if p == 2 { 2 } else { 1 });
    let spec: FieldSpec = field_make(p, k)?;
    Ok(PencilSpec::new(
        p,
        n,
        BinaryForm::parse(&spec, r)?,
        BinaryForm::parse(&spec, s)?,
    )?)
}

fn run_pencil(a: &PencilArgs) -> Outcome {
    let spec = pencil_spec(a.p, a.k, a.n, &a.r, &a.s)?;
    let (trivial, twist) = omega_trivial(a.p, a.n)?;
    let mut out = json!({
        "p": a.p,
        "n": a.n,
        "field": field_json(spec.spec()),
        "omega": { "trivial": trivial, "twist": twist },
        "lie_splitting": lie_splitting(&spec),
    });
    if a.count_sigma1 {
        out["sigma1_fiber_count"] = json!(count_sigma1_fibers(&spec)?);
    }
    if let Some(d) = a.brute_force {
        let brute = brute_force_sigma1(&spec, d)?;
        let fast = count_sigma1_fibers(&spec)?;
        out["brute_force_count"] = json!(brute);
        if brute != fast {
            return Err(Failure::Verification(format!(
                "enumeration over GF(2^{d}) gives {brute}, root counting gives {fast}"
            )));
        }
    }
    if a.hb_verify {
        let complex = HBComplex::new(&spec);
        let report = hb_verify(&complex);
        let exact = hb_graded_exactness(&complex, a.max_degree)?;
        out["hb_verify"] = json!({
            "passed": report.passed(),
            "failures": report.failures.iter().map(|f| json!({
                "identity": f.identity,
                "residual": f.residual.to_string(),
            })).collect::<Vec<_>>(),
        });
        out["hb_exactness"] = json!({
            "max_degree": exact.max_degree,
            "exact": exact.exact(),
            "phi2_injective_and_reduced_ok": exact.injective_and_reduced_ok(),
            "homology_killed_by_r_p": exact.homology_killed_by_rp(),
            "pieces_with_homology": exact.homology_failures,
            "other_failures": exact.failures,
            "reduced_kernel_dims": exact.reduced.iter().map(|r| r.kernel_dim).collect::<Vec<_>>(),
            "cokernel_twists": [exact.cokernel_twists.0, exact.cokernel_twists.1],
        });
        if !report.passed() {
            emit(&render(&out, false));
            return Err(Failure::Verification("Hilbert-Burch identities fail".into()));
        }
    }
    Ok(out)
}

fn run_linearize(a: &LinearizeArgs) -> Outcome {
    let spec = field_make(a.p, a.k)?;
    let text = fs::read_to_string(&a.f).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", a.f)))?;
    let f = SeriesAutomorphism::parse(&spec, a.order, &text)?;
    let zeta = match &a.zeta {
        Some(z) => spec.parse_element(z)?,
        None => spec.root_of_unity(a.m as u64)?,
    };
    let lin = linearize(&f, a.m, &zeta, a.order)?;
    Ok(json!({
        "zeta": zeta.to_string(),
        "weights": lin.weights,
        "change": lin.change.comps().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    }))
}

fn run_report(a: &ReportArgs) -> Outcome {
    if a.table {
        return Ok(serde_json::to_value(cy3_table(a.p)?).expect("serializable"));
    }
    let (Some(n), Some(r), Some(s)) = (a.n, a.r.as_deref(), a.s.as_deref()) else {
        return Err(Failure::Usage("report needs --n, --r and --s, or --table".into()));
    };
    Ok(full_report(&pencil_spec(a.p, a.k, n, r, s)?)?)
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push(format!("{prefix}: {s}")),
        other => out.push(format!("{prefix}: {other}")),
    }
}

fn render(v: &Value, text: bool) -> String {
    if text {
        let mut lines = Vec::new();
        flatten("", v, &mut lines);
        lines.join("\n")
    } else {
        serde_json::to_string_pretty(v).expect("serializable")
    }
}

// A closed pipe (e.g. `| head`) is not an error worth a panic.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Field(a) => run_field(a),
        Command::Curve(a) => run_curve(a),
        Command::Lattice(a) => run_lattice(a),
        Command::Position(a) => run_position(a),
        Command::Artin(a) => run_artin(a),
        Command::Pencil(a) => run_pencil(a),
        Command::Linearize(a) => run_linearize(a),
        Command::Report(a) => run_report(a),
    };
    match outcome {
        Ok(v) => {
            emit(&render(&v, cli.text));
            ExitCode::SUCCESS
        }
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Verification(msg) => eprintln!("verification failed: {msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Failure::from(Error::Verification("x".into())).code(), 2);
        assert_eq!(Failure::from(Error::CommonZero).code(), 1);
        assert_eq!(Failure::from(Error::DivisionByZero).code(), 1);
    }

    #[test]
    fn text_flattening() {
        let v = json!({"a": {"b": [1, 2]}, "c": [{"d": "x"}]});
        assert_eq!(render(&v, true), "a.b: [1,2]\nc[0].d: x");
    }
}
