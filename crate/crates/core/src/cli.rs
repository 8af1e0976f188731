//! Command-line front end. `run` parses arguments, dispatches and returns the
//! exit code together with what should go to stdout and stderr.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::cm::{
    action_matrices, adjoint_check, cm_classify, cm_compare, gauge_recover, random_fixed, trace_form_gram, CmSpace,
};
use crate::decomposition::{
    fixed_block_tower, involution_orbits, local_factors, orthogonal_blocks, Block, GlobalCmAlgebra, Orbit, TowerModel,
};
use crate::error::{Error, Result};
use crate::filtered::{goodness, random_star, random_symmetric, tensor, FilteredCmSpace, GoodnessReport};
use crate::json::{
    checks_json, envelope, hodge_json, layer_matrix_json, matrix_json, parse_document, parse_hodge, parse_layer,
    parse_layer_elem, parse_poly, parse_qform, parse_star, parse_tower, parse_tower_elem, poly_json, polygon_json,
    rat_json, rats_json, tower_json,
};
use crate::kernel::matrix::Matrix;
use crate::kernel::poly::{qpoly, Poly};
use crate::kernel::rat::{fmt_rat, parse_rat, val, Rat};
use crate::kernel::ring::Ring;
use crate::lubin_tate::{build_d_pi, commutant_dimension, has_cyclic_vector, structure_checks, verify_polygons};
use crate::padic::tower::{random_eisenstein, random_rng};
use crate::padic::{
    default_precision, dwork_tame_witness, is_norm, reciprocity_symbol, standard_unram_poly, Involution, Layer,
    PadicTower, TowerElem,
};
use crate::padic::norms::{ext_kind, fixed_uniformizer, ExtKind};
use crate::phi::{admissibility_certificate, det_valuation, hodge_polygon, newton_polygon_module, FilteredPhiModule};
use crate::pipeline::{phi5_request, run_pipeline, PipelineReport, PipelineRequest};
use crate::qform::{
    diagonalize, epsilon_diag, hilbert_symbol, invariants, mod4_report, product_formula_check, relevant_places,
    same_invariants_everywhere, CheckItem, Place, QuadraticFormQ,
};

const MAX_CELL: usize = 48;

#[derive(Parser, Debug)]
#[command(name = "cmhk", version, about = "Exact checks for quadratic-form invariants, p-adic CM forms and Lubin-Tate modules")]
struct Cli {
    /// Machine-readable report on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Working p-adic precision (overrides CMHK_PRECISION).
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Diagonalization, invariants and local epsilons of a rational form.
    Qform(QformArgs),
    /// Local Hilbert symbols.
    Hilbert(HilbertArgs),
    /// Describe a tower K = Q_p(zeta, pi) and optionally one element.
    Tower(TowerArgs),
    /// Norm classes of F/F_0 for the fixed field of an involution.
    NormTest(NormTestArgs),
    /// Trace form of a CM space and gauge comparisons.
    Cm(CmArgs),
    /// Goodness and parity of filtered CM spaces.
    FilteredCm(FilteredCmArgs),
    /// Newton and Hodge polygons of a filtered phi-module.
    Phi(PhiArgs),
    /// The Lubin-Tate module D_pi.
    Lt(LtArgs),
    /// Local factors, involution orbits and orthogonal blocks.
    Decompose(DecomposeArgs),
    /// Decomposition, block comparisons, parity and the reduction check.
    Pipeline(PipelineArgs),
}

#[derive(Args, Debug)]
struct QformArgs {
    /// JSON file: {"diagonal": [..]} or {"gram": [[..]]}.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Diagonal entries, comma separated.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    diag: Vec<String>,
    /// Table of epsilon over all relevant places and their product.
    #[arg(long)]
    product_formula: bool,
    /// Read the parity of s_minus off the discriminant and real epsilon.
    #[arg(long)]
    signature: bool,
    /// Second form to compare with.
    #[arg(long)]
    compare: Option<PathBuf>,
    /// Places for the epsilon table (default: the relevant ones).
    #[arg(short, long = "place")]
    place: Vec<String>,
}

#[derive(Args, Debug)]
struct HilbertArgs {
    #[arg(short, allow_hyphen_values = true)]
    a: String,
    #[arg(short, allow_hyphen_values = true)]
    b: String,
    /// A prime or "real"; all relevant places when absent.
    #[arg(short, long = "place")]
    p: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct TowerSpec {
    /// JSON file with the tower (and command specific fields).
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(short, long)]
    p: Option<u64>,
    #[arg(short, long, default_value_t = 1)]
    f: usize,
    #[arg(short, long, default_value_t = 1)]
    e: usize,
    /// Draw the Eisenstein polynomial from the seed instead of y^e - p.
    #[arg(long)]
    random_eisenstein: bool,
}

#[derive(Args, Debug)]
struct TowerArgs {
    #[command(flatten)]
    tower: TowerSpec,
    /// Element as JSON: rational, flat coordinate list or nested layer lists.
    #[arg(long, allow_hyphen_values = true)]
    element: Option<String>,
}

#[derive(Args, Debug)]
struct NormTestArgs {
    #[command(flatten)]
    tower: TowerSpec,
    /// "negate_pi", "frobenius" or a JSON object {zeta_image, pi_image}.
    #[arg(long)]
    star: Option<String>,
    /// Fixed elements to classify (JSON each).
    #[arg(long, allow_hyphen_values = true)]
    element: Vec<String>,
    /// Random fixed elements to add.
    #[arg(long, default_value_t = 40)]
    count: usize,
    /// Run the tame non-norm witness.
    #[arg(long)]
    dwork: bool,
}

#[derive(Args, Debug)]
struct CmArgs {
    #[command(flatten)]
    tower: TowerSpec,
    #[arg(long)]
    star: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    gauge: Option<String>,
    /// Second gauge to compare against.
    #[arg(long, allow_hyphen_values = true)]
    gauge2: Option<String>,
    /// Compare against this many random gauges.
    #[arg(long, default_value_t = 0)]
    survey: usize,
}

#[derive(Args, Debug)]
struct FilteredCmArgs {
    /// JSON file: {"d", "star_perm": [..], "weights": [..]}.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Involution as a permutation list, e.g. 1,0,3,2.
    #[arg(long, value_delimiter = ',')]
    star: Vec<usize>,
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    weights: Vec<i64>,
    /// Check this many random symmetric spaces instead.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 3)]
    bound: i64,
}

#[derive(Args, Debug)]
struct PhiArgs {
    /// JSON file: {"layer": {..}, "frob_matrix": [[..]], "hodge_jumps": [[w, m], ..]}.
    #[arg(long)]
    file: PathBuf,
}

#[derive(Args, Debug)]
struct LtArgs {
    #[command(flatten)]
    tower: TowerSpec,
    /// Run the structure identities and polygon checks.
    #[arg(long)]
    verify: bool,
    /// Number of Eisenstein inputs (random after the first unless --random-eisenstein).
    #[arg(long, default_value_t = 1)]
    trials: usize,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    /// JSON file: {"g", "r", "p", "supplied_factors"?}.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Coefficients of g, constant first.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    g: Vec<String>,
    /// Coefficients of r, constant first.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    r: Vec<String>,
    #[arg(short, long)]
    p: Option<u64>,
    /// A supplied local factor (repeatable), coefficients comma separated.
    #[arg(long, allow_hyphen_values = true)]
    factor: Vec<String>,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    /// JSON request: {"g", "r", "p", "gauges", "hodge", "supplied_factors"?}.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Built-in request: phi5, phi5-control or gaussian.
    #[arg(long)]
    example: Option<String>,
}

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    pass: bool,
    text: String,
    body: Value,
}

struct Ctx {
    seed: u64,
    precision: Option<u32>,
    /// 2 on the retry after a precision error.
    scale: u32,
}

impl Ctx {
    fn precision(&self) -> u32 {
        self.precision.unwrap_or_else(default_precision) * self.scale
    }

    /// Applies the flag and the retry scale to a document's own precision.
    fn fix(&self, mut v: Value) -> Value {
        if self.precision.is_none() && self.scale == 1 {
            return v;
        }
        let own = v.get("precision").and_then(Value::as_u64).map(|n| n as u32);
        let n = self.precision.or(own).unwrap_or_else(default_precision) * self.scale;
        if let Value::Object(m) = &mut v {
            m.insert("precision".into(), json!(n));
        }
        v
    }
}

/// 0 for a pass, 1 for a failed mathematical check, 2 for bad input.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Structural(_) | Error::Consistency(_) | Error::Precision(_) => 1,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Degenerate(_) => "degenerate",
        Error::Precision(_) => "precision",
        Error::Refusal(_) => "refusal",
        Error::Rejected { .. } => "rejected",
        Error::Structural(_) => "structural",
        Error::Consistency(_) => "consistency",
        Error::Parse(_) => "parse",
        Error::Unsupported(_) => "unsupported",
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let mut ctx = Ctx {
        seed: cli.seed,
        precision: cli.precision,
        scale: 1,
    };
    let (name, mut res) = dispatch(&cli.cmd, &ctx);
    let mut note = String::new();
    if matches!(res, Err(Error::Precision(_))) {
        note = format!("cmhk {name}: precision error, retrying at {}\n", 2 * ctx.precision());
        ctx.scale = 2;
        res = dispatch(&cli.cmd, &ctx).1;
    }
    match res {
        Ok(r) => Outcome {
            code: if r.pass { 0 } else { 1 },
            stdout: if cli.json {
                to_text(&envelope(name, ctx.seed, r.pass, r.body))
            } else {
                r.text
            },
            stderr: note,
        },
        Err(e) => {
            let stdout = if cli.json {
                let body = json!({"error": {"kind": error_kind(&e), "message": e.to_string()}});
                to_text(&envelope(name, ctx.seed, false, body))
            } else {
                String::new()
            };
            Outcome {
                code: exit_code(&e),
                stdout,
                stderr: format!("{note}cmhk {name}: {e}\n"),
            }
        }
    }
}

fn dispatch(cmd: &Cmd, ctx: &Ctx) -> (&'static str, Result<Report>) {
    match cmd {
        Cmd::Qform(a) => ("qform", cmd_qform(a)),
        Cmd::Hilbert(a) => ("hilbert", cmd_hilbert(a)),
        Cmd::Tower(a) => ("tower", cmd_tower(a, ctx)),
        Cmd::NormTest(a) => ("norm-test", cmd_norm_test(a, ctx)),
        Cmd::Cm(a) => ("cm", cmd_cm(a, ctx)),
        Cmd::FilteredCm(a) => ("filtered-cm", cmd_filtered(a, ctx)),
        Cmd::Phi(a) => ("phi", cmd_phi(a, ctx)),
        Cmd::Lt(a) => ("lt", cmd_lt(a, ctx)),
        Cmd::Decompose(a) => ("decompose", cmd_decompose(a, ctx)),
        Cmd::Pipeline(a) => ("pipeline", cmd_pipeline(a, ctx)),
    }
}

fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn usage(msg: &str) -> Error {
    Error::Domain(msg.into())
}

fn load(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_document(&text)
}

fn parse_rats(items: &[String]) -> Result<Vec<Rat>> {
    items.iter().map(|s| parse_rat(s.trim())).collect()
}

fn parse_poly_arg(items: &[String]) -> Result<Poly<Rat>> {
    Ok(qpoly().from_coeffs(parse_rats(items)?))
}

/// JSON text, falling back to a bare rational.
fn json_arg(s: &str) -> Result<Value> {
    match serde_json::from_str::<Value>(s) {
        Ok(v) => Ok(v),
        Err(_) => parse_rat(s.trim()).map(|r| Value::String(fmt_rat(&r))),
    }
}

fn star_arg(s: &str) -> Result<Value> {
    if s.trim_start().starts_with('{') {
        parse_document(s)
    } else {
        Ok(Value::String(s.trim().to_string()))
    }
}

fn pm(x: i32) -> String {
    if x > 0 { "+1".into() } else { "-1".into() }
}

fn yes(b: bool) -> &'static str {
    if b { "yes" } else { "no" }
}

fn clip(s: &str) -> String {
    if s.chars().count() <= MAX_CELL {
        s.to_string()
    } else {
        let t: String = s.chars().take(MAX_CELL - 2).collect();
        format!("{t}..")
    }
}

fn table(head: &[&str], rows: &[Vec<String>]) -> String {
    let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|c| clip(c)).collect()).collect();
    let mut w: Vec<usize> = head.iter().map(|h| h.len()).collect();
    for r in &cells {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(c.chars().count());
        }
    }
    let line = |r: &[String]| -> String {
        let parts: Vec<String> = r.iter().enumerate().map(|(i, c)| format!("{c:<width$}", width = w[i])).collect();
        parts.join("  ").trim_end().to_string()
    };
    let mut out = line(&head.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    out.push('\n');
    out.push_str(&line(&w.iter().map(|n| "-".repeat(*n)).collect::<Vec<_>>()));
    out.push('\n');
    for r in &cells {
        out.push_str(&line(r));
        out.push('\n');
    }
    out
}

fn checks_table(items: &[CheckItem]) -> String {
    let rows: Vec<Vec<String>> = items
        .iter()
        .map(|i| {
            let verdict = match (i.informational, i.pass) {
                (true, _) => "info",
                (false, true) => "PASS",
                (false, false) => "FAIL",
            };
            vec![i.name.clone(), verdict.into(), i.detail.clone()]
        })
        .collect();
    table(&["check", "result", "detail"], &rows)
}

fn all_pass(items: &[CheckItem]) -> bool {
    items.iter().filter(|i| !i.informational).all(|i| i.pass)
}

fn verdict_line(pass: bool) -> String {
    format!("verdict: {}\n", if pass { "PASS" } else { "FAIL" })
}

fn matrix_text(m: &Matrix<Rat>) -> String {
    let rows: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(fmt_rat).collect()).collect();
    let w = rows.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|c| format!("{c:>w$}")).collect();
            format!("  [{}]\n", cells.join(" "))
        })
        .collect()
}

fn invariants_json(form: &QuadraticFormQ) -> Result<Value> {
    let inv = invariants(form)?;
    Ok(json!({
        "s_plus": inv.s_plus,
        "s_minus": inv.s_minus,
        "discriminant": inv.discriminant.to_string(),
        "disc_sign": inv.disc_sign,
    }))
}

fn cmd_qform(a: &QformArgs) -> Result<Report> {
    let form = match (&a.file, a.diag.is_empty()) {
        (Some(f), _) => parse_qform(&load(f)?)?,
        (None, false) => QuadraticFormQ::diagonal(&parse_rats(&a.diag)?)?,
        (None, true) => return Err(usage("give --file or --diag")),
    };
    let diag = diagonalize(&form)?;
    let inv = invariants(&form)?;
    let places: Vec<Place> = if a.place.is_empty() {
        relevant_places(diag.entries())
    } else {
        a.place.iter().map(|s| s.parse()).collect::<Result<_>>()?
    };
    let mut eps = Map::new();
    let mut rows = Vec::new();
    for pl in &places {
        let e = epsilon_diag(diag.entries(), *pl)?;
        eps.insert(pl.to_string(), json!(e));
        rows.push(vec![pl.to_string(), pm(e)]);
    }
    let mut text = format!(
        "dim {}\ndiagonal {}\ns_plus {}  s_minus {}  disc {}\n",
        form.dim(),
        crate::qform::fmt_entries(diag.entries()),
        inv.s_plus,
        inv.s_minus,
        inv.discriminant
    );
    let mut body = json!({
        "dim": form.dim(),
        "gram": matrix_json(form.gram()),
        "diagonal": rats_json(diag.entries()),
        "invariants": invariants_json(&form)?,
    });
    let mut items = Vec::new();
    if a.product_formula {
        let pf = product_formula_check(&form)?;
        let rows: Vec<Vec<String>> = pf.table.iter().map(|(pl, e)| vec![pl.to_string(), pm(*e)]).collect();
        text.push_str(&table(&["place", "epsilon"], &rows));
        text.push_str(&format!("product {}\n", pm(pf.product)));
        let t: Map<String, Value> = pf.table.iter().map(|(pl, e)| (pl.to_string(), json!(e))).collect();
        body["product_formula"] = json!({"table": t, "product": pf.product});
        items.push(CheckItem::new(
            "product-formula",
            pf.product == 1,
            format!("product over {} places = {}", pf.table.len(), pm(pf.product)),
        ));
    } else {
        text.push_str(&table(&["place", "epsilon"], &rows));
        body["epsilon"] = Value::Object(eps);
    }
    if a.signature {
        let m = mod4_report(&form)?;
        text.push_str(&format!(
            "disc sign {} => 2 | s_minus: {}; real epsilon {} => 4 | s_minus: {}\n",
            pm(m.disc_sign),
            yes(m.verdict_2_divides),
            pm(m.eps_real),
            yes(m.verdict_4_divides)
        ));
        body["signature"] = json!({
            "disc_sign": m.disc_sign,
            "s_minus": m.s_minus,
            "eps_real": m.eps_real,
            "two_divides": m.verdict_2_divides,
            "four_divides": m.verdict_4_divides,
        });
        items.push(CheckItem::new(
            "signature",
            true,
            format!("readings agree with s_minus = {}", m.s_minus),
        ));
    }
    if let Some(f2) = &a.compare {
        let other = parse_qform(&load(f2)?)?;
        let iso = same_invariants_everywhere(&form, &other)?;
        text.push_str(&format!("isometric over Q: {}\n", yes(iso)));
        body["compare"] = json!({"isometric": iso, "other": invariants_json(&other)?});
        items.push(CheckItem::info("isometric", iso, "dimension, signature, discriminant and every epsilon"));
    }
    let pass = all_pass(&items);
    if !items.is_empty() {
        text.push_str(&checks_table(&items));
        text.push_str(&verdict_line(pass));
    }
    body["checks"] = checks_json(&items);
    Ok(Report { pass, text, body })
}

fn cmd_hilbert(a: &HilbertArgs) -> Result<Report> {
    let x = parse_rat(a.a.trim())?;
    let y = parse_rat(a.b.trim())?;
    if let Some(pl) = &a.p {
        let place: Place = pl.parse()?;
        let s = hilbert_symbol(&x, &y, place)?;
        return Ok(Report {
            pass: true,
            text: format!("{s}\n"),
            body: json!({"a": rat_json(&x), "b": rat_json(&y), "place": place.to_string(), "symbol": s}),
        });
    }
    let mut rows = Vec::new();
    let mut t = Map::new();
    let mut product = 1;
    for pl in relevant_places(&[x.clone(), y.clone()]) {
        let s = hilbert_symbol(&x, &y, pl)?;
        product *= s;
        rows.push(vec![pl.to_string(), pm(s)]);
        t.insert(pl.to_string(), json!(s));
    }
    let items = vec![CheckItem::new(
        "product-formula",
        product == 1,
        format!("product over all places = {}", pm(product)),
    )];
    let pass = all_pass(&items);
    let mut text = table(&["place", "symbol"], &rows);
    text.push_str(&checks_table(&items));
    Ok(Report {
        pass,
        text,
        body: json!({"a": rat_json(&x), "b": rat_json(&y), "symbols": t, "checks": checks_json(&items)}),
    })
}

/// The tower and, when read from a file, the whole document.
fn build_tower(spec: &TowerSpec, ctx: &Ctx, rng: &mut rand_chacha::ChaCha8Rng) -> Result<(PadicTower, Option<Value>)> {
    if let Some(f) = &spec.file {
        let doc = load(f)?;
        let doc = ctx.fix(doc);
        let tv = match doc.get("tower") {
            Some(t) => ctx.fix(t.clone()),
            None => doc.clone(),
        };
        return Ok((parse_tower(&tv)?, Some(doc)));
    }
    let p = spec.p.ok_or_else(|| usage("give --file or --p"))?;
    if spec.e == 0 || spec.f == 0 {
        return Err(usage("e and f must be positive"));
    }
    let prec = ctx.precision();
    if spec.random_eisenstein {
        let layer = Layer::new(p, standard_unram_poly(p, spec.f)?, prec)?;
        let coeffs = random_eisenstein(&layer, spec.e, rng);
        return Ok((PadicTower::with_layer(layer, coeffs)?, None));
    }
    Ok((PadicTower::standard(p, spec.f, spec.e, prec)?, None))
}

fn tower_text(t: &PadicTower) -> String {
    let eis: Vec<String> = t.eisenstein_poly().iter().map(|c| c.display()).collect();
    format!(
        "p {}  e {}  f {}  d {}  precision {}\nunramified poly {}\nEisenstein coefficients [{}]\nFrobenius exact: {}\n",
        t.p(),
        t.e(),
        t.f(),
        t.d(),
        t.precision(),
        t.layer().poly().display("x"),
        eis.join(", "),
        yes(t.layer().frobenius_is_exact())
    )
}

fn elem_json(x: &TowerElem) -> Value {
    rats_json(x.coords())
}

fn opt_rat(r: Option<Rat>) -> Value {
    r.map(|r| rat_json(&r)).unwrap_or(Value::Null)
}

fn cmd_tower(a: &TowerArgs, ctx: &Ctx) -> Result<Report> {
    let mut rng = random_rng(ctx.seed);
    let (t, _) = build_tower(&a.tower, ctx, &mut rng)?;
    let p = t.p();
    let pi = t.uniformizer();
    let mut items = vec![
        CheckItem::new("uniformizer", t.vpi(&pi) == Some(1), "v_pi(pi) = 1"),
        CheckItem::new(
            "norm-of-pi",
            val(&t.norm_base(&pi), p) == Some(t.f() as i64),
            format!("v_p(N(pi)) = {:?}, expected f = {}", val(&t.norm_base(&pi), p), t.f()),
        ),
        CheckItem::new(
            "trace-of-one",
            t.trace_base(&t.one()) == Rat::from_integer((t.d() as i64).into()),
            format!("Tr(1) = {}", fmt_rat(&t.trace_base(&t.one()))),
        ),
    ];
    let l = t.layer();
    if l.frobenius_is_exact() {
        let z = l.generator();
        let mut w = z.clone();
        for _ in 0..l.f() {
            w = l.frobenius(&w);
        }
        items.push(CheckItem::new("frobenius-order", w == z, "phi^f(zeta) = zeta"));
    } else {
        items.push(CheckItem::info("frobenius-order", true, "Frobenius known to working precision only"));
    }
    let mut text = tower_text(&t);
    let mut body = json!({"tower": tower_json(&t)});
    if let Some(s) = &a.element {
        let x = parse_tower_elem(&t, &json_arg(s)?)?;
        let v = t.valuation(&x);
        let n = t.norm_base(&x);
        let tr = t.trace_base(&x);
        text.push_str(&format!(
            "element {}\nvaluation {}\nnorm {}\ntrace {}\nchar poly {}\n",
            t.display(&x),
            v.as_ref().map(fmt_rat).unwrap_or_else(|| "inf".into()),
            fmt_rat(&n),
            fmt_rat(&tr),
            t.char_poly(&x).display("x")
        ));
        body["element"] = json!({
            "coords": elem_json(&x),
            "valuation": opt_rat(v),
            "norm": rat_json(&n),
            "trace": rat_json(&tr),
            "char_poly": poly_json(&t.char_poly(&x)),
        });
    }
    let pass = all_pass(&items);
    text.push_str(&checks_table(&items));
    text.push_str(&verdict_line(pass));
    body["checks"] = checks_json(&items);
    Ok(Report { pass, text, body })
}

fn build_star(t: &PadicTower, doc: &Option<Value>, flag: &Option<String>) -> Result<Involution> {
    let v = match (flag, doc.as_ref().and_then(|d| d.get("star"))) {
        (Some(s), _) => star_arg(s)?,
        (None, Some(v)) => v.clone(),
        (None, None) => Value::String("negate_pi".into()),
    };
    parse_star(t, &v)
}

fn cmd_norm_test(a: &NormTestArgs, ctx: &Ctx) -> Result<Report> {
    let mut rng = random_rng(ctx.seed);
    let (t, doc) = build_tower(&a.tower, ctx, &mut rng)?;
    let star = build_star(&t, &doc, &a.star)?;
    let kind = ext_kind(&t, &star);
    let mut elems = Vec::new();
    if let Some(list) = doc.as_ref().and_then(|d| d.get("elements")) {
        for v in list.as_array().ok_or_else(|| Error::Parse("elements must be a list".into()))? {
            elems.push(parse_tower_elem(&t, v)?);
        }
    }
    for s in &a.element {
        elems.push(parse_tower_elem(&t, &json_arg(s)?)?);
    }
    let given = elems.len();
    for _ in 0..a.count {
        elems.push(random_fixed(&t, &star, &mut rng));
    }
    let mut rows = Vec::new();
    let mut classes = Vec::new();
    let mut ej = Vec::new();
    for x in &elems {
        let n = is_norm(&t, &star, x)?;
        let sym = reciprocity_symbol(&t, &star, x)?;
        classes.push(n);
        rows.push(vec![
            t.display(x),
            star.v_f0(&t, x).map(|v| v.to_string()).unwrap_or_default(),
            yes(n).into(),
            sym.name().into(),
        ]);
        ej.push(json!({"coords": elem_json(x), "v_f0": star.v_f0(&t, x), "norm": n, "symbol": sym.name()}));
    }
    let mut items = Vec::new();
    let observed: BTreeSet<bool> = classes.iter().copied().collect();
    let detail = format!("{} classes among {} elements", observed.len(), elems.len());
    items.push(if a.count >= 8 {
        CheckItem::new("two-classes", observed.len() == 2, detail)
    } else {
        CheckItem::info("two-classes", observed.len() == 2, detail)
    });
    let mut mult_ok = true;
    for i in given..elems.len().saturating_sub(1) {
        let xy = t.mul(&elems[i], &elems[i + 1]);
        if is_norm(&t, &star, &xy)? != (classes[i] == classes[i + 1]) {
            mult_ok = false;
        }
    }
    items.push(CheckItem::new("multiplicative", mult_ok, "class(xy) = class(x) class(y) on consecutive pairs"));
    let mut norms_ok = true;
    for _ in 0..a.count.min(10) {
        let x = t.random_nonzero(&mut rng, 4, 2);
        norms_ok &= is_norm(&t, &star, &star.norm(&t, &x))?;
    }
    items.push(CheckItem::new("norms-are-norms", norms_ok, "x x^* is a norm"));
    let u = fixed_uniformizer(&t, &star)?;
    let u_norm = is_norm(&t, &star, &u)?;
    items.push(if kind == ExtKind::Unramified {
        CheckItem::new("uniformizer-non-norm", !u_norm, "every norm has even valuation")
    } else {
        CheckItem::info("uniformizer-non-norm", !u_norm, format!("uniformizer of F_0 is a norm: {}", yes(u_norm)))
    });
    let mut body = json!({
        "tower": tower_json(&t),
        "extension": kind.name(),
        "fixed_degree": star.fixed().f0 * star.fixed().e0,
        "elements": ej,
        "uniformizer": {"coords": elem_json(&u), "norm": u_norm},
    });
    let mut text = tower_text(&t);
    text.push_str(&format!("F/F_0 {}\n", kind.name()));
    text.push_str(&table(&["element", "v_F0", "norm", "symbol"], &rows));
    if a.dwork {
        let d = dwork_tame_witness(&t, &star)?;
        items.push(CheckItem::new(
            "dwork-frobenius",
            d.frobenius_sign == -1,
            format!("phi^f(sqrt u) = {} sqrt u", pm(d.frobenius_sign)),
        ));
        items.push(CheckItem::new("dwork-c-cstar", d.c_cstar_is_u, "c c^* = u"));
        items.push(CheckItem::new("dwork-non-norm", !d.u_is_norm, "u is not a norm"));
        text.push_str(&format!("witness u = {}\n", t.display(&d.u)));
        body["dwork"] = json!({
            "u": elem_json(&d.u),
            "frobenius_sign": d.frobenius_sign,
            "c_cstar_is_u": d.c_cstar_is_u,
            "u_is_norm": d.u_is_norm,
        });
    }
    let pass = all_pass(&items);
    text.push_str(&checks_table(&items));
    text.push_str(&verdict_line(pass));
    body["checks"] = checks_json(&items);
    Ok(Report { pass, text, body })
}

fn gauge_value(doc: &Option<Value>, key: &str, flag: &Option<String>) -> Result<Option<Value>> {
    match (flag, doc.as_ref().and_then(|d| d.get(key))) {
        (Some(s), _) => Ok(Some(json_arg(s)?)),
        (None, Some(v)) => Ok(Some(v.clone())),
        (None, None) => Ok(None),
    }
}

fn cmd_cm(a: &CmArgs, ctx: &Ctx) -> Result<Report> {
    let mut rng = random_rng(ctx.seed);
    let (t, doc) = build_tower(&a.tower, ctx, &mut rng)?;
    let star = build_star(&t, &doc, &a.star)?;
    let gauge = match gauge_value(&doc, "gauge", &a.gauge)? {
        Some(v) => parse_tower_elem(&t, &v)?,
        None => t.one(),
    };
    let space = CmSpace::new(t.clone(), star.clone(), gauge.clone())?;
    let gram = trace_form_gram(&space, None)?;
    let diag = diagonalize(&gram)?;
    let inv = invariants(&gram)?;
    let place = Place::Prime(t.p());
    let eps = epsilon_diag(diag.entries(), place)?;
    let class = cm_classify(&space)?;
    let mut items = vec![CheckItem::new(
        "adjoint",
        adjoint_check(&gram, &action_matrices(&t, &star, None)?),
        "b(ax, y) = b(x, a^* y) for a = zeta, pi",
    )];
    let rec = gauge_recover(&t, &star, &gram, None)?;
    items.push(CheckItem::new("gauge-recovery", rec == gauge, "gauge read back from b(1, -)"));
    let mut text = tower_text(&t);
    text.push_str(&format!("gauge {}\n", t.display(&gauge)));
    if gram.dim() <= 8 {
        text.push_str("gram\n");
        text.push_str(&matrix_text(gram.gram()));
    }
    text.push_str(&format!(
        "diagonal {}\ndisc {}  eps_{} {}  class {}\n",
        crate::qform::fmt_entries(diag.entries()),
        inv.discriminant,
        t.p(),
        pm(eps),
        class.name()
    ));
    let mut body = json!({
        "tower": tower_json(&t),
        "gauge": elem_json(&gauge),
        "gram": matrix_json(gram.gram()),
        "diagonal": rats_json(diag.entries()),
        "invariants": invariants_json(&gram)?,
        "epsilon": eps,
        "class": class.name(),
    });
    if let Some(v) = gauge_value(&doc, "gauge2", &a.gauge2)? {
        let g2 = parse_tower_elem(&t, &v)?;
        let other = space.with_gauge(g2.clone())?;
        let c = cm_compare(&space, &other)?;
        text.push_str(&format!(
            "against gauge {}: eps {} vs {}, isomorphic {}\n",
            t.display(&g2),
            pm(c.eps_1),
            pm(c.eps_2),
            yes(c.isomorphic)
        ));
        body["compare"] = json!({"gauge2": elem_json(&g2), "eps_1": c.eps_1, "eps_2": c.eps_2, "isomorphic": c.isomorphic});
        items.push(CheckItem::info("compare", c.isomorphic, "gauge ratio norm test agrees with (disc, eps)"));
    }
    if a.survey > 0 {
        let mut discs = BTreeSet::new();
        let mut pairs = BTreeSet::new();
        discs.insert(inv.discriminant.clone());
        pairs.insert((inv.discriminant.to_string(), eps));
        for _ in 0..a.survey {
            let g = random_fixed(&t, &star, &mut rng);
            let c = cm_compare(&space, &space.with_gauge(g)?)?;
            discs.insert(c.invariants_2.discriminant.clone());
            pairs.insert((c.invariants_2.discriminant.to_string(), c.eps_2));
        }
        items.push(CheckItem::new(
            "disc-constant",
            discs.len() == 1,
            format!("{} discriminant classes over {} gauges", discs.len(), a.survey + 1),
        ));
        let detail = format!("{} (disc, eps) values", pairs.len());
        items.push(if a.survey >= 8 {
            CheckItem::new("two-classes", pairs.len() == 2, detail)
        } else {
            CheckItem::info("two-classes", pairs.len() == 2, detail)
        });
        body["survey"] = json!({"gauges": a.survey, "classes": pairs.len()});
    }
    let pass = all_pass(&items);
    text.push_str(&checks_table(&items));
    text.push_str(&verdict_line(pass));
    body["checks"] = checks_json(&items);
    Ok(Report { pass, text, body })
}

fn goodness_json(v: &FilteredCmSpace, g: &GoodnessReport) -> Value {
    json!({
        "star": v.star_perm(),
        "weights": v.weights(),
        "hodge_min": g.hodge_min,
        "period_class": g.period_class.name(),
        "forms_isomorphic": g.forms_isomorphic,
        "s_m_parity": g.s_m_parity.name(),
        "good": g.good,
        "trace": g.trace,
    })
}

fn parse_filtered(doc: &Value) -> Result<FilteredCmSpace> {
    let ints = |key: &str| -> Result<Vec<i64>> {
        crate::json::as_array(crate::json::get(doc, key)?, key)?
            .iter()
            .map(|x| crate::json::as_i64(x, key))
            .collect()
    };
    let star: Vec<usize> = ints("star_perm")?
        .into_iter()
        .map(|i| usize::try_from(i).map_err(|_| Error::Parse("negative index in star_perm".into())))
        .collect::<Result<_>>()?;
    let weights = ints("weights")?;
    if let Some(d) = doc.get("d") {
        let d = crate::json::as_u64(d, "d")? as usize;
        if d != star.len() || d != weights.len() {
            return Err(Error::Parse(format!("d = {d} but {} indices and {} weights", star.len(), weights.len())));
        }
    }
    FilteredCmSpace::new(star, weights)
}

fn cmd_filtered(a: &FilteredCmArgs, ctx: &Ctx) -> Result<Report> {
    let mut items = Vec::new();
    let mut text = String::new();
    let mut body = json!({});
    match a.random {
        None => {
            let v = match &a.file {
                Some(f) => parse_filtered(&load(f)?)?,
                None if a.star.is_empty() => return Err(usage("give --file, --star and --weights, or --random")),
                None => FilteredCmSpace::new(a.star.clone(), a.weights.clone())?,
            };
            let g = goodness(&v)?;
            for line in &g.trace {
                text.push_str(line);
                text.push('\n');
            }
            items.push(CheckItem::new("good", g.good, "iso <=> s_M even"));
            body["space"] = goodness_json(&v, &g);
        }
        Some(n) => {
            if a.dim < 2 {
                return Err(usage("--dim must be at least 2"));
            }
            let mut rng = random_rng(ctx.seed);
            let mut good = 0;
            let mut mult = true;
            let mut rows = Vec::new();
            for _ in 0..n {
                let star = random_star(a.dim, &mut rng);
                let v = random_symmetric(&star, a.bound, &mut rng);
                let w = random_symmetric(&star, a.bound, &mut rng);
                let g = goodness(&v)?;
                good += g.good as usize;
                let cw = goodness(&w)?.period_class.sign();
                let ct = goodness(&tensor(&v, &w)?)?.period_class.sign();
                mult &= ct == g.period_class.sign() * cw;
                if rows.len() < 10 {
                    rows.push(vec![
                        format!("{:?}", v.weights()),
                        g.hodge_min.to_string(),
                        g.period_class.name().into(),
                        yes(g.good).into(),
                    ]);
                }
            }
            text.push_str(&table(&["weights", "hodge_min", "period", "good"], &rows));
            items.push(CheckItem::new("good", good == n, format!("{good} of {n} spaces good")));
            items.push(CheckItem::new("tensor-multiplicative", mult, "period class of V (x) W is the product"));
            body["random"] = json!({"count": n, "dim": a.dim, "good": good});
        }
    }
    let pass = all_pass(&items);
    text.push_str(&checks_table(&items));
    text.push_str(&verdict_line(pass));
    body["checks"] = checks_json(&items);
    Ok(Report { pass, text, body })
}

fn cmd_phi(a: &PhiArgs, ctx: &Ctx) -> Result<Report> {
    let doc = load(&a.file)?;
    let lv = crate::json::get(&doc, "layer")?.clone();
    let layer = parse_layer(&ctx.fix(lv))?;
    let fm = doc.get("frob_matrix").or_else(|| doc.get("frob")).ok_or_else(|| Error::Parse("missing key \"frob_matrix\"".into()))?;
    let rows = crate::json::as_array(fm, "frob_matrix")?;
    let mut m = Vec::new();
    for r in rows {
        let r = crate::json::as_array(r, "frob row")?;
        m.push(r.iter().map(|x| parse_layer_elem(&layer, x)).collect::<Result<Vec<_>>>()?);
    }
    let frob = Matrix::from_rows(m)?;
    let hv = doc.get("hodge_jumps").or_else(|| doc.get("hodge")).ok_or_else(|| Error::Parse("missing key \"hodge_jumps\"".into()))?;
    let h = parse_hodge(hv)?;
    let jumps: Vec<(i64, u64)> = h.map().iter().map(|(i, n)| (*i, *n)).collect();
    let d = FilteredPhiModule::new(layer, frob, &jumps)?;
    let newton = newton_polygon_module(&d)?;
    let hodge = hodge_polygon(&d);
    let dv = det_valuation(&d)?;
    let cert = admissibility_certificate(&d)?;
    let items = vec![CheckItem::new(
        "admissible",
        cert.verdict == crate::phi::Admissibility::CertifiedAdmissible,
        format!("{}: {}", cert.verdict.name(), cert.reason),
    )];
    let pass = all_pass(&items);
    let mut text = format!(
        "rank {}\nNewton {}\nHodge {}\nt_N {}  t_H {}  v(det phi^f) {}\n",
        d.rank(),
        newton.describe(),
        hodge.describe(),
        fmt_rat(&cert.t_n),
        fmt_rat(&cert.t_h),
        dv
    );
    text.push_str(&checks_table(&items));
    text.push_str(&verdict_line(pass));
    let body = json!({
        "rank": d.rank(),
        "hodge_numbers": hodge_json(&h),
        "newton": polygon_json(&newton),
        "hodge": polygon_json(&hodge),
        "t_n": rat_json(&cert.t_n),
        "t_h": rat_json(&cert.t_h),
        "det_valuation": dv,
        "certificate": cert.verdict.name(),
        "reason": cert.reason,
        "checks": checks_json(&items),
    });
    Ok(Report { pass, text, body })
}

fn cmd_lt(a: &LtArgs, ctx: &Ctx) -> Result<Report> {
    if a.trials == 0 {
        return Err(usage("--trials must be positive"));
    }
    let mut rng = random_rng(ctx.seed);
    let mut all = Vec::new();
    let mut text = String::new();
    let mut trials = Vec::new();
    for k in 0..a.trials {
        let mut spec = a.tower.clone();
        if k > 0 && spec.file.is_none() {
            spec.random_eisenstein = true;
        }
        let (t, _) = build_tower(&spec, ctx, &mut rng)?;
        let lt = build_d_pi(&t)?;
        text.push_str(&format!("trial {k}\n"));
        text.push_str(&tower_text(&t));
        let mut tj = json!({"tower": tower_json(&t), "filtration": lt.filtration_line_tag});
        if t.d() <= 6 {
            tj["frob"] = layer_matrix_json(lt.module().frob_matrix());
        }
        let poly = verify_polygons(&lt)?;
        text.push_str(&format!(
            "Newton {}\nHodge {}\nv(det phi^f) {}  certificate {}\n",
            poly.newton.describe(),
            poly.hodge.describe(),
            poly.det_valuation,
            poly.certificate.name()
        ));
        tj["newton"] = polygon_json(&poly.newton);
        tj["hodge"] = polygon_json(&poly.hodge);
        tj["det_valuation"] = json!(poly.det_valuation);
        tj["certificate"] = json!(poly.certificate.name());
        if a.verify {
            let mut items = structure_checks(&lt, ctx.seed.wrapping_add(k as u64));
            items.extend(poly.items.iter().cloned());
            let cd = commutant_dimension(&lt);
            items.push(CheckItem::info(
                "commutant",
                cd == t.e(),
                format!("commutant of C has dimension {cd} over the layer"),
            ));
            items.push(CheckItem::info("cyclic-vector", has_cyclic_vector(&lt), "a cyclic vector for phi exists"));
            text.push_str(&checks_table(&items));
            tj["checks"] = checks_json(&items);
            all.extend(items);
        }
        trials.push(tj);
    }
    let pass = all_pass(&all);
    if a.verify {
        text.push_str(&verdict_line(pass));
    }
    Ok(Report {
        pass,
        text,
        body: json!({"trials": trials}),
    })
}

fn orbit_name(o: Orbit) -> String {
    match o {
        Orbit::Pending => "pending".into(),
        Orbit::Fixed => "fixed".into(),
        Orbit::Swapped(j) => format!("swapped with {j}"),
    }
}

fn orbit_json(o: Orbit) -> Value {
    match o {
        Orbit::Pending => json!("pending"),
        Orbit::Fixed => json!("fixed"),
        Orbit::Swapped(j) => json!({"swapped": j}),
    }
}

fn model_name(m: Option<TowerModel>) -> &'static str {
    match m {
        Some(TowerModel::Factor) => "factor",
        Some(TowerModel::Standard) => "standard",
        None => "data-only",
    }
}

fn block_json(b: &Block) -> Value {
    match b {
        Block::Hyperbolic { pair, degree, rank } => {
            json!({"kind": "hyperbolic", "pair": [pair.0, pair.1], "degree": degree, "rank": rank})
        }
        Block::Cm { factor, degree, e, f } => {
            json!({"kind": "cm", "factor": factor, "degree": degree, "e": e, "f": f})
        }
    }
}

fn block_text(b: &Block) -> String {
    match b {
        Block::Hyperbolic { pair, .. } => format!("factors {} and {}", pair.0, pair.1),
        Block::Cm { factor, .. } => format!("factor {factor}"),
    }
}

fn opt_usize(x: Option<usize>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "?".into())
}

fn cmd_decompose(a: &DecomposeArgs, ctx: &Ctx) -> Result<Report> {
    let mut prec = ctx.precision();
    let (alg, p, supplied) = match &a.file {
        Some(f) => {
            let doc = ctx.fix(load(f)?);
            if let Some(n) = doc.get("precision") {
                prec = crate::json::as_u64(n, "precision")? as u32;
            }
            let alg = GlobalCmAlgebra::new(parse_poly(crate::json::get(&doc, "g")?)?, parse_poly(crate::json::get(&doc, "r")?)?)?;
            let p = crate::json::as_u64(crate::json::get(&doc, "p")?, "p")?;
            let sup = match doc.get("supplied_factors").or_else(|| doc.get("factors")) {
                Some(fs) => Some(
                    crate::json::as_array(fs, "supplied_factors")?
                        .iter()
                        .map(parse_poly)
                        .collect::<Result<Vec<_>>>()?,
                ),
                None => None,
            };
            (alg, p, sup)
        }
        None => {
            if a.g.is_empty() || a.r.is_empty() {
                return Err(usage("give --file or --g, --r and --p"));
            }
            let p = a.p.ok_or_else(|| usage("give --p"))?;
            let alg = GlobalCmAlgebra::new(parse_poly_arg(&a.g)?, parse_poly_arg(&a.r)?)?;
            let sup = if a.factor.is_empty() {
                None
            } else {
                Some(
                    a.factor
                        .iter()
                        .map(|s| parse_poly_arg(&s.split(',').map(String::from).collect::<Vec<_>>()))
                        .collect::<Result<Vec<_>>>()?,
                )
            };
            (alg, p, sup)
        }
    };
    let set = local_factors(&alg, p, prec, supplied.as_deref())?;
    let set = involution_orbits(&set, &alg)?;
    let plan = orthogonal_blocks(&set)?;
    let mut frows = Vec::new();
    let mut fj = Vec::new();
    for (i, f) in set.factors.iter().enumerate() {
        frows.push(vec![
            i.to_string(),
            f.poly.display("x"),
            f.degree.to_string(),
            opt_usize(f.e),
            opt_usize(f.f),
            orbit_name(f.orbit),
        ]);
        fj.push(json!({
            "poly": poly_json(&f.poly),
            "degree": f.degree,
            "e": f.e,
            "f": f.f,
            "shift": f.shift.as_ref().map(rat_json),
            "orbit": orbit_json(f.orbit),
        }));
    }
    let mut brows = Vec::new();
    let mut bj = Vec::new();
    for (k, b) in plan.blocks.iter().enumerate() {
        let model = match b {
            Block::Cm { factor, .. } => model_name(fixed_block_tower(&alg, &set, *factor, prec)?.map(|x| x.2)),
            Block::Hyperbolic { .. } => "-",
        };
        brows.push(vec![k.to_string(), b.kind().into(), block_text(b), b.rank().to_string(), model.into()]);
        let mut v = block_json(b);
        v["tower"] = json!(model);
        bj.push(v);
    }
    let deg: usize = set.factors.iter().map(|f| f.degree).sum();
    let involutive = set.factors.iter().enumerate().all(|(i, f)| match f.orbit {
        Orbit::Swapped(j) => set.factors[j].orbit == Orbit::Swapped(i) && set.factors[j].degree == f.degree,
        Orbit::Fixed => true,
        Orbit::Pending => false,
    });
    let items = vec![
        CheckItem::new(
            "degree-accounting",
            deg == alg.degree(),
            format!("sum of local degrees {deg} = {}", alg.degree()),
        ),
        CheckItem::new("orbits-involutive", involutive, "swap partners point back, equal degrees"),
        CheckItem::new(
            "block-count",
            plan.blocks.len() == plan.n - plan.s,
            format!("{} blocks = n - s = {} - {}", plan.blocks.len(), plan.n, plan.s),
        ),
    ];
    let pass = all_pass(&items);
    let mut text = format!("g = {}  r = {}  p = {p}\n", alg.g().display("x"), alg.r().display("x"));
    text.push_str(&table(&["#", "factor", "deg", "e", "f", "orbit"], &frows));
    text.push_str(&table(&["block", "kind", "from", "rank", "tower"], &brows));
    text.push_str(&checks_table(&items));
    text.push_str(&verdict_line(pass));
    let body = json!({
        "p": p,
        "precision": prec,
        "supplied": set.supplied,
        "factors": fj,
        "blocks": bj,
        "n": plan.n,
        "s": plan.s,
        "checks": checks_json(&items),
    });
    Ok(Report { pass, text, body })
}

fn example_request(name: &str, ctx: &Ctx) -> Result<PipelineRequest> {
    let mut req = match name {
        "phi5" => phi5_request(1, 2, &[(1, 1), (-1, 1), (0, 2)]),
        "phi5-control" => phi5_request(1, 2, &[(0, 4)]),
        "gaussian" => PipelineRequest {
            algebra: GlobalCmAlgebra::from_ints(&[1, 0, 1], &[0, -1])?,
            p: 5,
            precision: default_precision(),
            gauges: vec![],
            hodge: None,
            supplied_factors: None,
        },
        _ => return Err(usage("examples: phi5, phi5-control, gaussian")),
    };
    req.precision = ctx.precision.unwrap_or(req.precision) * ctx.scale;
    Ok(req)
}

pub fn pipeline_json(r: &PipelineReport) -> Value {
    let blocks: Vec<Value> = r
        .blocks
        .iter()
        .map(|b| {
            let mut v = block_json(&b.block);
            v["tower"] = json!(match &b.block {
                Block::Hyperbolic { .. } => "hyperbolic-model",
                Block::Cm { .. } => model_name(b.model),
            });
            v["diag_b"] = b.diag_b.as_ref().map(|d| rats_json(d.entries())).unwrap_or(Value::Null);
            v["diag_z"] = b.diag_z.as_ref().map(|d| rats_json(d.entries())).unwrap_or(Value::Null);
            v["gram_b"] = b.q_b.as_ref().map(|q| matrix_json(q.gram())).unwrap_or(Value::Null);
            v["gram_z"] = b.q_z.as_ref().map(|q| matrix_json(q.gram())).unwrap_or(Value::Null);
            v["forms_isomorphic"] = json!(b.forms_isomorphic);
            if let Some(c) = &b.compare {
                v["eps_b"] = json!(c.eps_1);
                v["eps_z"] = json!(c.eps_2);
            }
            v
        })
        .collect();
    let agg: Vec<Value> = r
        .aggregate
        .blocks
        .iter()
        .map(|b| json!({"kind": b.kind, "hodge_min": b.hodge_min, "forms_isomorphic": b.forms_isomorphic, "good": b.good}))
        .collect();
    json!({
        "p": r.factors.p,
        "precision": r.factors.precision,
        "factors": r.factors.factors.iter().map(|f| json!({
            "poly": poly_json(&f.poly), "degree": f.degree, "e": f.e, "f": f.f, "orbit": orbit_json(f.orbit),
        })).collect::<Vec<_>>(),
        "n": r.plan.n,
        "s": r.plan.s,
        "blocks": blocks,
        "aggregate": {
            "blocks": agg,
            "total_hodge_min": r.aggregate.total_hodge_min,
            "total_parity": r.aggregate.total_parity.name(),
            "good": r.aggregate.good,
            "culprit": r.aggregate.culprit,
        },
        "hodge": hodge_json(&r.hodge),
        "s_m": r.hodge.s_m(),
        "reduction": r.reduction.as_ref().map(|v| json!({"eps_z": v.eps_z, "eps_b": v.eps_b, "s_m": v.s_m, "pass": v.pass})),
        "warnings": r.warnings,
        "checks": checks_json(&r.items),
        "failing_block": r.failing_block(),
    })
}

fn cmd_pipeline(a: &PipelineArgs, ctx: &Ctx) -> Result<Report> {
    let req = match (&a.file, &a.example) {
        (Some(f), None) => PipelineRequest::from_json(&ctx.fix(load(f)?))?,
        (None, Some(name)) => example_request(name, ctx)?,
        _ => return Err(usage("give exactly one of --file and --example")),
    };
    let r = run_pipeline(&req)?;
    let mut rows = Vec::new();
    for (k, b) in r.blocks.iter().enumerate() {
        let diag = |d: &Option<crate::qform::DiagonalFormQ>| {
            d.as_ref().map(|d| crate::qform::fmt_entries(d.entries())).unwrap_or_else(|| "-".into())
        };
        rows.push(vec![
            k.to_string(),
            b.block.kind().into(),
            b.block.rank().to_string(),
            diag(&b.diag_b),
            diag(&b.diag_z),
            b.forms_isomorphic.map(|x| yes(x).to_string()).unwrap_or_else(|| "?".into()),
        ]);
    }
    let mut text = format!(
        "g = {}  r = {}  p = {}\n",
        req.algebra.g().display("x"),
        req.algebra.r().display("x"),
        req.p
    );
    text.push_str(&table(&["block", "kind", "rank", "q_B", "q_Z", "iso"], &rows));
    if let Some(v) = &r.reduction {
        text.push_str(&format!(
            "eps_{p}(q_Z) {}  eps_{p}(q_B) {}  s_M {}\n",
            pm(v.eps_z),
            pm(v.eps_b),
            v.s_m,
            p = req.p
        ));
    }
    for w in &r.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    text.push_str(&checks_table(&r.items));
    if let Some(k) = r.failing_block() {
        text.push_str(&format!("failing block: {k}\n"));
    }
    text.push_str(&verdict_line(r.pass));
    let body = pipeline_json(&r);
    Ok(Report {
        pass: r.pass,
        text,
        body,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("cmhk").chain(args.iter().copied()))
    }

    #[test]
    fn hilbert_example() {
        let o = go(&["hilbert", "-a", "2", "-b", "5", "-p", "5"]);
        assert_eq!(o.code, 0);
        assert_eq!(o.stdout.trim(), "-1");
    }

    #[test]
    fn unknown_flag_is_usage() {
        assert_eq!(go(&["hilbert", "--bogus"]).code, 2);
        assert_eq!(go(&["frobnicate"]).code, 2);
    }

    #[test]
    fn pipeline_exit_codes() {
        assert_eq!(go(&["pipeline", "--example", "phi5"]).code, 0);
        assert_eq!(go(&["pipeline", "--example", "gaussian"]).code, 0);
        assert_eq!(go(&["pipeline", "--example", "phi5-control"]).code, 1);
    }

    #[test]
    fn json_is_deterministic() {
        let a = go(&["--json", "--seed", "7", "norm-test", "--p", "5", "--e", "2", "--count", "12"]);
        let b = go(&["--json", "--seed", "7", "norm-test", "--p", "5", "--e", "2", "--count", "12"]);
        assert_eq!(a.code, 0, "{}", a.stderr);
        assert_eq!(a.stdout, b.stdout);
        let v: Value = serde_json::from_str(&a.stdout).unwrap();
        assert_eq!(v["seed"], json!(7));
    }
}
