//! Command-line front end. [`run`] parses arguments, dispatches and returns
//! the exit status together with what should go to standard output and
//! standard error, so the binary is a thin wrapper and the behaviour is
//! testable in-process.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::curvature;
use crate::error::{Error, Result};
use crate::example3::{self, Example3Config};
use crate::exponent::FracExponent;
use crate::hodge;
use crate::linalg::CMat;
use crate::schema::{self, JsonMatrix, LatticeJson};
use crate::terp::{self as core, Lattice};
use crate::twistor;

const PURITY_COLUMNS: &str = "r_re,r_im,t_re,t_im,dimH0,pure,sig_plus,sig_minus";

#[derive(Debug, Parser)]
#[command(name = "terp", version, about = "Spectra, Hodge data, twistor purity and curvature of Brieskorn lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Shorthand for `--format csv`.
    #[arg(long, global = true)]
    csv: bool,
    /// Seed for randomised verbs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct LatticeInput {
    /// Lattice JSON file.
    input: Option<PathBuf>,
    /// Use the built-in rank-3 family instead of a file.
    #[arg(long)]
    example3: bool,
    /// Family parameter r as `re,im` (or a grid axis, see `purity`).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    r: Option<Complex64>,
    /// Family parameter t as `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    t: Option<Complex64>,
    /// First spectral number of the family, a rational in (-3/2, -1).
    #[arg(long, allow_hyphen_values = true)]
    alpha1: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    R,
    T,
    InvR,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral numbers of a lattice.
    Spectrum(LatticeInput),
    /// Pairing condition on the lattice basis.
    Pairing(LatticeInput),
    /// Hodge numbers of the twisted filtration.
    Hodge(LatticeInput),
    /// Compact-dual membership and polarization of the limit mixed Hodge structure.
    Pmhs(LatticeInput),
    /// Twistor purity at a point, or over a grid of the rank-3 family.
    ///
    /// CSV columns: r_re, r_im, t_re, t_im, dimH0, pure, sig_plus, sig_minus.
    Purity {
        #[command(flatten)]
        lattice: LatticeInput,
        /// Grid axes `r=a:b:count` and `t=a:b:count` (inclusive, real parts).
        #[arg(long, num_args = 1..)]
        grid: Vec<String>,
    },
    /// Gram of h on global sections and the tangent metric of a direction.
    Metric {
        #[command(flatten)]
        lattice: LatticeInput,
        /// Tangent direction of the rank-3 family.
        #[arg(long, value_enum)]
        direction: Option<Direction>,
        /// JSON file `{"dC": [matrix, ...]}` with derivatives of C_1, C_2, ...
        #[arg(long)]
        dc: Option<PathBuf>,
    },
    /// Curvature matrix and contraction for a Kodaira-Spencer coefficient.
    Curvature {
        /// JSON file `{"Delta1": matrix, "n": integer}`.
        input: Option<PathBuf>,
        /// Draw a random symmetric nilpotent matrix from the seed.
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 3)]
        mu: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Multi-start estimate of the supremum of the sectional curvature ratio.
    PhiBound {
        #[arg(long)]
        mu: usize,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
    },
    /// Rank of the horizontal directions for a pole-part matrix.
    HorizontalRank {
        /// JSON file `{"U": matrix, "Pmat": matrix, "alpha": [string, ...]}`.
        input: Option<PathBuf>,
        /// Value of the moving coefficient in the built-in rank-5 witness, `re,im`.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        witness: Option<Complex64>,
    },
    /// The rank-3 family at a point, with its closed-form expectations.
    Example3(LatticeInput),
}

/// Outcome of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("bad number {p:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re,im, got {s:?}")),
    }
}

/// Inclusive linear grid `a:b:count`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(Error::Parse(format!("grid {spec:?} is not a:b:count")));
    };
    let num = |p: &str| p.parse::<f64>().map_err(|e| Error::Parse(format!("bad grid bound {p:?}: {e}")));
    let (a, b) = (num(a)?, num(b)?);
    let n: usize = n.parse().map_err(|e| Error::Parse(format!("bad grid count {n:?}: {e}")))?;
    match n {
        0 => Err(Error::Invalid("grid count must be positive".into())),
        1 => Ok(vec![a]),
        _ => Ok((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()),
    }
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn num(x: f64) -> Value {
    let r = round12(x) + 0.0;
    serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
}

fn cnum(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

/// Entries below `1e-14` of the largest one are printed as zero.
fn matrix(m: &CMat) -> Value {
    let floor = 1e-14 * crate::linalg::max_abs(m);
    let chop = |x: f64| if x.abs() <= floor { 0.0 } else { x };
    Value::Array(
        (0..m.nrows())
            .map(|i| {
                Value::Array((0..m.ncols()).map(|j| m[(i, j)]).map(|z| cnum(Complex64::new(chop(z.re), chop(z.im)))).collect())
            })
            .collect(),
    )
}

fn csv_num(x: f64) -> String {
    let r = round12(x);
    if r != 0.0 && (r.abs() < 1e-5 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn example_config(inp: &LatticeInput) -> Result<Example3Config> {
    let mut cfg = Example3Config::default();
    if let Some(a) = &inp.alpha1 {
        let q: FracExponent = a.parse()?;
        if q.imag != 0.0 {
            return Err(Error::Invalid("alpha1 must be real".into()));
        }
        cfg.alpha1 = q.rational;
    }
    cfg.r = inp.r.unwrap_or(cfg.r);
    cfg.t = inp.t.unwrap_or(cfg.t);
    Ok(cfg)
}

fn load_lattice(inp: &LatticeInput) -> Result<Lattice> {
    match (&inp.input, inp.example3) {
        (Some(_), true) => Err(Error::Invalid("give either an input file or --example3".into())),
        (Some(p), false) => schema::parse_lattice(&read(p)?),
        (None, true) => example3::example3_lattice(&example_config(inp)?),
        (None, false) => Err(Error::Invalid("an input file or --example3 is required".into())),
    }
}

fn require_json(format: Format, verb: &str) -> Result<()> {
    if format == Format::Csv {
        return Err(Error::Unsupported(format!("CSV output is not available for {verb}")));
    }
    Ok(())
}

fn spectrum_json(spec: &[FracExponent]) -> Value {
    Value::Array(spec.iter().map(|a| Value::String(a.to_string())).collect())
}

fn cmd_spectrum(inp: &LatticeInput) -> Result<Value> {
    let lat = load_lattice(inp)?;
    Ok(json!({ "spectrum": spectrum_json(&core::spectral_numbers(&lat)?) }))
}

fn cmd_pairing(inp: &LatticeInput) -> Result<Value> {
    let lat = load_lattice(inp)?;
    let rep = core::check_pairing(&lat);
    Ok(json!({
        "holds": rep.holds,
        "max_violation": num(rep.max_violation),
        "residue_gram": matrix(&rep.residue_gram),
    }))
}

fn cmd_hodge(inp: &LatticeInput) -> Result<Value> {
    let lat = load_lattice(inp)?;
    let f = core::hodge_filtration(&lat)?;
    let numbers: Map<String, Value> = f.hodge_numbers().into_iter().map(|(p, h)| (p.to_string(), json!(h))).collect();
    let dims: Map<String, Value> =
        (f.bottom()..=f.top()).map(|p| (p.to_string(), json!(f.dim_at(p)))).collect();
    Ok(json!({
        "spectrum": spectrum_json(&core::spectral_numbers(&lat)?),
        "hodge_numbers": numbers,
        "filtration_dims": dims,
    }))
}

fn cmd_pmhs(inp: &LatticeInput) -> Result<Value> {
    let lat = load_lattice(inp)?;
    let f = core::hodge_filtration(&lat)?;
    let reference = core::hodge_filtration(&Lattice::new(lat.topo.clone(), Vec::new())?)?;
    let w = lat.topo.weight;
    let dc = hodge::check_dc_pmhs(&f, &lat.topo, &reference, w)?;
    let pol = hodge::check_pmhs_polarized(&f, &lat.topo, w)?;
    let checks: Vec<Value> = pol
        .checks
        .iter()
        .map(|c| json!({"l": c.l, "p": c.p, "q": c.q, "dim": c.dim, "min_eigenvalue": num(c.min_eigenvalue)}))
        .collect();
    Ok(json!({
        "dc_pmhs": {
            "holds": dc.holds(),
            "dims_match": dc.dims_match,
            "n_lowers_f": dc.n_lowers_f,
            "primitive_compatible": dc.primitive_compatible,
            "graded_decomposition": dc.graded_decomposition,
            "s_orthogonal": dc.s_orthogonal,
            "failures": dc.failures,
        },
        "polarized": {
            "holds": pol.holds(),
            "hodge_decomposition": pol.hodge_decomposition,
            "positive": pol.positive,
            "polarizing_nilpotent": pol.polarizing_nilpotent,
            "checks": checks,
            "failures": pol.failures,
        },
    }))
}

struct PurityRow {
    r: Complex64,
    t: Complex64,
    rep: twistor::TwistorReport,
}

fn purity_rows(inp: &LatticeInput, grid: &[String]) -> Result<Vec<PurityRow>> {
    if inp.input.is_some() {
        if !grid.is_empty() {
            return Err(Error::Invalid("--grid needs --example3".into()));
        }
        let lat = load_lattice(inp)?;
        let rep = twistor::twistor_report(&lat)?;
        return Ok(vec![PurityRow { r: Complex64::new(0.0, 0.0), t: Complex64::new(0.0, 0.0), rep }]);
    }
    let base = example_config(inp)?;
    if !inp.example3 {
        return Err(Error::Invalid("an input file or --example3 is required".into()));
    }
    let mut axes: BTreeMap<&str, Vec<Complex64>> = BTreeMap::new();
    for g in grid {
        let (name, spec) = g.split_once('=').ok_or_else(|| Error::Parse(format!("grid axis {g:?} is not name=a:b:count")))?;
        let values = parse_grid(spec)?.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        match name {
            "r" | "t" => {
                if axes.insert(if name == "r" { "r" } else { "t" }, values).is_some() {
                    return Err(Error::Invalid(format!("grid axis {name} given twice")));
                }
            }
            _ => return Err(Error::Invalid(format!("unknown grid axis {name:?}"))),
        }
    }
    let rs = axes.remove("r").unwrap_or_else(|| vec![base.r]);
    let ts = axes.remove("t").unwrap_or_else(|| vec![base.t]);
    let points: Vec<(Complex64, Complex64)> = rs.iter().flat_map(|&r| ts.iter().map(move |&t| (r, t))).collect();
    let eval = |&(r, t): &(Complex64, Complex64)| -> Result<PurityRow> {
        let lat = example3::example3_lattice(&Example3Config { r, t, ..base })?;
        Ok(PurityRow { r, t, rep: twistor::twistor_report(&lat)? })
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(points.len().max(1));
    let mut out: Vec<Option<Result<PurityRow>>> = (0..points.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let points = &points;
                scope.spawn(move || {
                    (w..points.len()).step_by(workers).map(|k| (k, eval(&points[k]))).collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (k, row) in h.join().expect("purity worker panicked") {
                out[k] = Some(row);
            }
        }
    });
    out.into_iter().map(|r| r.expect("every point evaluated")).collect()
}

fn cmd_purity(inp: &LatticeInput, grid: &[String], format: Format) -> Result<String> {
    let rows = purity_rows(inp, grid)?;
    if format == Format::Csv {
        let mut s = String::from(PURITY_COLUMNS);
        s.push('\n');
        for row in &rows {
            let (sp, sm) = match row.rep.signature {
                Some((p, m)) => (p.to_string(), m.to_string()),
                None => (String::new(), String::new()),
            };
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                csv_num(row.r.re),
                csv_num(row.r.im),
                csv_num(row.t.re),
                csv_num(row.t.im),
                row.rep.global_section_dim,
                row.rep.pure,
                sp,
                sm
            ));
        }
        return Ok(s);
    }
    let points: Vec<Value> = rows
        .iter()
        .map(|row| {
            let rep = &row.rep;
            let mut v = json!({
                "dimH0": rep.global_section_dim,
                "degree_bound": rep.degree_bound,
                "pure": rep.pure,
                "signature": rep.signature.map(|(p, m)| json!([p, m])),
                "polarized": rep.signature.map(|(_, m)| m == 0).unwrap_or(false),
                "sign": rep.sign,
            });
            if inp.example3 {
                v["r"] = cnum(row.r);
                v["t"] = cnum(row.t);
            }
            v
        })
        .collect();
    Ok(render(&json!({ "points": points })))
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct DcJson {
    #[serde(rename = "dC")]
    dc: Vec<JsonMatrix>,
}

fn cmd_metric(inp: &LatticeInput, direction: Option<Direction>, dc: &Option<PathBuf>) -> Result<Value> {
    let lat = load_lattice(inp)?;
    let rep = twistor::metric_gram(&lat)?;
    let mut out = json!({
        "dimH0": rep.global_section_dim,
        "signature": rep.signature.map(|(p, m)| json!([p, m])),
        "gram": matrix(rep.gram.as_ref().expect("pure point has a gram")),
        "sign": rep.sign,
    });
    let dirs = match (direction, dc) {
        (Some(_), Some(_)) => return Err(Error::Invalid("give either --direction or --dc".into())),
        (Some(d), None) => {
            if !inp.example3 {
                return Err(Error::Invalid("--direction needs --example3".into()));
            }
            let r = example_config(inp)?.r;
            Some(match d {
                Direction::R => example3::example3_dr(r),
                Direction::T => example3::example3_dt(),
                Direction::InvR => example3::example3_d_inv_r(r),
            })
        }
        (None, Some(p)) => {
            let parsed: DcJson = serde_json::from_str(&read(p)?).map_err(|e| Error::Parse(e.to_string()))?;
            Some(
                parsed
                    .dc
                    .iter()
                    .enumerate()
                    .map(|(k, m)| schema::matrix_from_json(&format!("dC[{k}]"), m, lat.mu()))
                    .collect::<Result<Vec<_>>>()?,
            )
        }
        (None, None) => None,
    };
    if let Some(d) = dirs {
        let ks = twistor::kodaira_spencer(&lat, &d)?;
        out["tangent_metric"] = num(twistor::tangent_metric(&lat, &ks)?);
    }
    if inp.example3 {
        let cfg = example_config(inp)?;
        let e = example3::example3_expected(&cfg);
        out["expected"] = json!({
            "wall": num(e.wall),
            "metric_rr": num(e.metric_rr),
            "metric_inv_rr": num(e.metric_inv_rr),
        });
    }
    Ok(out)
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct CurvatureJson {
    #[serde(rename = "Delta1")]
    delta1: JsonMatrix,
    #[serde(default = "default_n")]
    n: usize,
}

fn default_n() -> usize {
    1
}

fn cmd_curvature(input: &Option<PathBuf>, random: bool, mu: usize, n: usize, seed: u64) -> Result<Value> {
    let (delta, n) = match (input, random) {
        (Some(_), true) => return Err(Error::Invalid("give either an input file or --random".into())),
        (Some(p), false) => {
            let j: CurvatureJson = serde_json::from_str(&read(p)?).map_err(|e| Error::Parse(e.to_string()))?;
            let mu = j.delta1.len();
            (schema::matrix_from_json("Delta1", &j.delta1, mu)?, j.n)
        }
        (None, true) => {
            if mu < 2 {
                return Err(Error::Invalid("--mu must be at least 2".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (curvature::random_symmetric_nilpotent(mu, &mut rng), n)
        }
        (None, false) => return Err(Error::Invalid("an input file or --random is required".into())),
    };
    let closed = curvature::curvature_matrix(&delta, n)?;
    let jet = curvature::curvature_matrix_jet(&delta, n)?;
    let diff = crate::linalg::max_abs(&(&closed - &jet));
    let contraction = curvature::curvature_contraction(&delta)?;
    let phi = curvature::phi_value(&delta).ok();
    Ok(json!({
        "mu": delta.nrows(),
        "n": n,
        "Delta1": matrix(&delta),
        "contraction": num(contraction),
        "tensor_contraction": num(curvature::tensor_contraction(&delta, n)?),
        "closed_vs_jet_max_diff": num(diff),
        "phi": phi.map(num),
    }))
}

fn cmd_phi_bound(mu: usize, restarts: usize, seed: u64) -> Result<Value> {
    let est = curvature::phi_supremum_estimate(mu, restarts, seed)?;
    Ok(json!({
        "mu": mu,
        "restarts": restarts,
        "seed": seed,
        "phi_sup_estimate": num(est.value),
        "best_restart": est.restart,
        "feasible_restarts": est.feasible_restarts,
        "nilpotency_residual": num(est.residual),
    }))
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct HorizontalJson {
    #[serde(rename = "U")]
    u: JsonMatrix,
    #[serde(rename = "Pmat")]
    pmat: JsonMatrix,
    alpha: Vec<String>,
}

fn cmd_horizontal(input: &Option<PathBuf>, witness: Option<Complex64>) -> Result<Value> {
    match (input, witness) {
        (Some(_), Some(_)) => Err(Error::Invalid("give either an input file or --witness".into())),
        (Some(p), None) => {
            let j: HorizontalJson = serde_json::from_str(&read(p)?).map_err(|e| Error::Parse(e.to_string()))?;
            let mu = j.alpha.len();
            let alpha = j.alpha.iter().map(|a| a.parse()).collect::<Result<Vec<FracExponent>>>()?;
            let u = schema::matrix_from_json("U", &j.u, mu)?;
            let pmat = schema::matrix_from_json("Pmat", &j.pmat, mu)?;
            Ok(json!({ "horizontal_rank": curvature::horizontal_rank(&u, &pmat, &alpha)? }))
        }
        (None, w) => {
            let x = w.unwrap_or(Complex64::new(1.0, 0.0));
            let at = curvature::horizontal_witness(x);
            let origin = curvature::horizontal_witness(Complex64::new(0.0, 0.0));
            let triple = curvature::rank_drop_triple(&at.alpha).map(|(i, l, m)| json!([i + 1, l + 1, m + 1]));
            Ok(json!({
                "spectrum": spectrum_json(&at.alpha),
                "triple": triple,
                "coefficient": cnum(x),
                "horizontal_rank": curvature::horizontal_rank(&at.u, &at.pmat, &at.alpha)?,
                "horizontal_rank_at_origin": curvature::horizontal_rank(&origin.u, &origin.pmat, &origin.alpha)?,
            }))
        }
    }
}

fn cmd_example3(inp: &LatticeInput) -> Result<Value> {
    if inp.input.is_some() {
        return Err(Error::Invalid("example3 takes no input file".into()));
    }
    let cfg = example_config(inp)?;
    let lat = example3::example3_lattice(&cfg)?;
    let e = example3::example3_expected(&cfg);
    let lj = serde_json::to_value(LatticeJson::from_lattice(&lat)).expect("plain data serializes");
    Ok(json!({
        "alpha1": Rational64::to_string(&cfg.alpha1),
        "r": cnum(cfg.r),
        "t": cnum(cfg.t),
        "rho": num(cfg.rho()),
        "theta": num(cfg.theta()),
        "gamma": cnum(example3::gamma_constant(cfg.alpha1)?),
        "expected": {
            "pure": e.pure,
            "wall": num(e.wall),
            "metric_rr": num(e.metric_rr),
            "metric_inv_rr": num(e.metric_inv_rr),
        },
        "lattice": lj,
    }))
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli) -> Result<String> {
    let format = if cli.csv { Format::Csv } else { cli.format };
    let value = match &cli.command {
        Command::Purity { lattice, grid } => return cmd_purity(lattice, grid, format),
        _ => {
            require_json(format, "this verb")?;
            match &cli.command {
                Command::Spectrum(i) => cmd_spectrum(i)?,
                Command::Pairing(i) => cmd_pairing(i)?,
                Command::Hodge(i) => cmd_hodge(i)?,
                Command::Pmhs(i) => cmd_pmhs(i)?,
                Command::Metric { lattice, direction, dc } => cmd_metric(lattice, *direction, dc)?,
                Command::Curvature { input, random, mu, n } => cmd_curvature(input, *random, *mu, *n, cli.seed)?,
                Command::PhiBound { mu, restarts } => cmd_phi_bound(*mu, *restarts, cli.seed)?,
                Command::HorizontalRank { input, witness } => cmd_horizontal(input, *witness)?,
                Command::Example3(i) => cmd_example3(i)?,
                Command::Purity { .. } => unreachable!("handled above"),
            }
        }
    };
    Ok(render(&value))
}

fn error_report(code: &str, message: &str) -> String {
    render(&json!({ "error": { "code": code, "message": message } }))
}

/// Runs the command line `args` (including the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: e.to_string(), stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: error_report("usage", e.to_string().trim()) },
            };
        }
    };
    match dispatch(&cli) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: error_report(e.code(), &e.to_string()) },
    }
}
