//! `drinfeld-lab`: run Drinfeld-module experiments from JSON configs.
//!
//! Exit status: 0 on success, 1 on invalid input, 2 on an internal anomaly.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use drinfeld_lab::algebra::matrix::charpoly;
use drinfeld_lab::algebra::text::{parse_poly, render_poly};
use drinfeld_lab::algebra::{places_up_to, power_residue_symbol, Fq, FqCtx, Place};
use drinfeld_lab::drinfeld::{
    isogeny_search, torsion_frobenius_matrix, DrinfeldModule, IsogenyOptions, ModuleDef,
    TorsionOptions,
};
use drinfeld_lab::experiments::{
    charpoly_from_elementary, chebotarev_report, density_estimate, newton_reconstruct,
    scan_traces, smo_experiment, twist_agreement, ChebotarevOptions, Granularity,
    IntertwinerOptions, Parallelism, ScanMode,
};
use drinfeld_lab::frobenius::{frob_charpoly, FrobCharpoly, CHARPOLY_CSV_HEADER};
use drinfeld_lab::Error;
use serde::{Deserialize, Serialize};
use serde_json::Value;

const SEED_ENV: &str = "DRINFELD_LAB_SEED";

#[derive(Parser, Debug)]
#[command(name = "drinfeld-lab", version, about = "Drinfeld-module experiments over F_q(T)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare Frobenius traces or charpolys of two modules place by place.
    Scan(Common),
    /// Frobenius characteristic polynomials of one module.
    Charpoly(Common),
    /// Search for an isogeny between two modules.
    Isogeny(Common),
    /// Compare a rank-2 module with its twist by gamma.
    Twist(Common),
    /// Frobenius matrix on l-torsion at one place.
    Torsion(Common),
    /// Frobenius class frequencies mod l against |C|/|G|.
    Chebotarev(Common),
    /// Equal-charpoly frequency mod l for two modules against the product group.
    Smo(Common),
    /// Charpoly coefficients from power traces.
    Newton(NewtonArgs),
    /// Density of places where the power residue symbol of gamma is a given value.
    Density(DensityArgs),
}

#[derive(Args, Debug, Default)]
struct Output {
    /// JSON report path; CSV goes next to it. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(short = 'D', long = "max-degree")]
    max_degree: Option<usize>,
    #[arg(long)]
    ell: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    place: Option<String>,
    /// `trace|charpoly` for scans, `class|charpoly` for Chebotarev reports.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long = "tau-bound")]
    tau_bound: Option<usize>,
    #[arg(long = "group-cap")]
    group_cap: Option<usize>,
    #[arg(long = "torsion-cap")]
    torsion_cap: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct NewtonArgs {
    #[arg(short = 'p')]
    p: u64,
    #[arg(short = 'n')]
    n: usize,
    /// Comma-separated power traces p_1,...,p_n as integers mod p.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    traces: Vec<i64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[arg(short = 'p', default_value_t = 3)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    e: u32,
    #[arg(short = 'D', long = "max-degree")]
    max_degree: usize,
    #[arg(long)]
    gamma: String,
    /// Symbol value defining the set, as an integer.
    #[arg(long, default_value_t = 1)]
    value: i64,
    #[command(flatten)]
    output: Output,
}

/// Optional experiment settings in a config file; flags take precedence.
#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct ExperimentConfig {
    #[serde(default)]
    modules: Vec<ModuleDef>,
    command: Option<String>,
    max_degree: Option<usize>,
    ell: Option<String>,
    gamma: Option<String>,
    place: Option<String>,
    mode: Option<String>,
    seed: Option<u64>,
    tolerance: Option<f64>,
    tau_bound: Option<usize>,
    group_cap: Option<usize>,
    torsion_cap: Option<usize>,
}

#[derive(Debug)]
enum Failure {
    Invalid(String),
    Anomaly(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_anomaly() {
            Failure::Anomaly(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

type Outcome<T> = Result<T, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

/// A report plus optional per-place CSV.
struct Report {
    json: Value,
    csv: Option<String>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    modules: Vec<ModuleDef>,
    report: Value,
}

struct Context {
    fq: FqCtx,
    modules: Vec<DrinfeldModule>,
    cfg: ExperimentConfig,
}

fn load_config(path: &Path) -> Outcome<Context> {
    let text = fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    let where_ = |e: serde_json::Error| {
        invalid(format!("config {} line {} column {}: {e}", path.display(), e.line(), e.column()))
    };
    let value: Value = serde_json::from_str(&text).map_err(where_)?;
    let cfg: ExperimentConfig = if value.get("modules").is_some() {
        serde_json::from_value(value).map_err(|e| invalid(format!("config {}: {e}", path.display())))?
    } else {
        let def: ModuleDef = serde_json::from_value(value)
            .map_err(|e| invalid(format!("config {}: {e}", path.display())))?;
        ExperimentConfig { modules: vec![def], ..Default::default() }
    };
    let first = cfg.modules.first().ok_or_else(|| invalid("config defines no modules"))?;
    let fq = first.field()?;
    let modules = cfg
        .modules
        .iter()
        .enumerate()
        .map(|(i, d)| d.build_in(&fq).map_err(|e| invalid(format!("module {i}: {e}"))))
        .collect::<Outcome<Vec<_>>>()?;
    Ok(Context { fq, modules, cfg })
}

impl Context {
    fn one(&self) -> &DrinfeldModule {
        &self.modules[0]
    }

    /// Two modules; a single module is paired with itself.
    fn pair(&self) -> Outcome<(&DrinfeldModule, &DrinfeldModule)> {
        match self.modules.len() {
            1 => Ok((&self.modules[0], &self.modules[0])),
            2 => Ok((&self.modules[0], &self.modules[1])),
            n => Err(invalid(format!("expected one or two modules, found {n}"))),
        }
    }
}

struct Settings {
    max_degree: Option<usize>,
    ell: Option<String>,
    gamma: Option<String>,
    place: Option<String>,
    mode: Option<String>,
    seed: u64,
    tolerance: f64,
    tau_bound: Option<usize>,
    group_cap: Option<usize>,
    torsion_cap: Option<usize>,
    par: Parallelism,
}

fn seed_from_env() -> Outcome<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| invalid(format!("{SEED_ENV} is not an integer"))),
        Err(_) => Ok(None),
    }
}

fn parallelism(jobs: Option<usize>) -> Parallelism {
    if jobs == Some(1) {
        Parallelism::Sequential
    } else {
        Parallelism::Parallel
    }
}

fn settings(args: &Common, cfg: &ExperimentConfig) -> Outcome<Settings> {
    let s = Settings {
        max_degree: args.max_degree.or(cfg.max_degree),
        ell: args.ell.clone().or_else(|| cfg.ell.clone()),
        gamma: args.gamma.clone().or_else(|| cfg.gamma.clone()),
        place: args.place.clone().or_else(|| cfg.place.clone()),
        mode: args.mode.clone().or_else(|| cfg.mode.clone()),
        seed: seed_from_env()?.or(args.seed).or(cfg.seed).unwrap_or(0),
        tolerance: args.tolerance.or(cfg.tolerance).unwrap_or(0.1),
        tau_bound: args.tau_bound.or(cfg.tau_bound),
        group_cap: args.group_cap.or(cfg.group_cap),
        torsion_cap: args.torsion_cap.or(cfg.torsion_cap),
        par: parallelism(args.output.jobs),
    };
    if s.max_degree == Some(0) {
        return Err(invalid("degree bound must be at least 1"));
    }
    if !(0.0..=1.0).contains(&s.tolerance) {
        return Err(invalid("tolerance must lie in [0, 1]"));
    }
    Ok(s)
}

impl Settings {
    fn degree(&self) -> Outcome<usize> {
        self.max_degree.ok_or_else(|| invalid("missing degree bound (-D)"))
    }

    fn place_arg(&self, fq: &FqCtx, value: &Option<String>, name: &str) -> Outcome<Place> {
        let s = value.as_deref().ok_or_else(|| invalid(format!("missing --{name}")))?;
        let p = parse_poly(fq, s)?;
        Place::new(fq, p).map_err(|e| invalid(format!("--{name} {s}: {e}")))
    }

    fn ell(&self, fq: &FqCtx) -> Outcome<Place> {
        self.place_arg(fq, &self.ell, "ell")
    }

    fn gamma(&self, fq: &FqCtx) -> Outcome<Vec<Fq>> {
        let s = self.gamma.as_deref().ok_or_else(|| invalid("missing --gamma"))?;
        Ok(parse_poly(fq, s)?)
    }

    fn cheb_opts(&self) -> ChebotarevOptions {
        let mut o = ChebotarevOptions {
            intertwiner: IntertwinerOptions { seed: self.seed, ..IntertwinerOptions::default() },
            par: self.par,
            ..ChebotarevOptions::default()
        };
        if let Some(c) = self.group_cap {
            o.group_cap = c;
        }
        if let Some(c) = self.torsion_cap {
            o.torsion = TorsionOptions { max_field_degree: c };
        }
        o
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

#[derive(Serialize)]
struct CharpolyRow {
    place: String,
    degree: usize,
    trace: String,
    norm: String,
    /// `a_0, ..., a_{r-1}`.
    coefficients: Vec<String>,
    verified: bool,
}

fn charpoly_row(fq: &FqCtx, cp: &FrobCharpoly) -> CharpolyRow {
    CharpolyRow {
        place: cp.place.render(fq),
        degree: cp.degree,
        trace: render_poly(fq, cp.trace()),
        norm: render_poly(fq, cp.norm()),
        coefficients: cp.coeffs.iter().map(|c| render_poly(fq, c)).collect(),
        verified: cp.verified,
    }
}

fn run_scan(ctx: &Context, s: &Settings) -> Outcome<Report> {
    let (phi1, phi2) = ctx.pair()?;
    let mode: ScanMode = s.mode.as_deref().unwrap_or("trace").parse()?;
    let rep = scan_traces(phi1, phi2, s.degree()?, mode, s.par)?;
    Ok(Report { json: to_value(&rep), csv: Some(rep.csv()) })
}

fn run_charpoly(ctx: &Context, s: &Settings) -> Outcome<Report> {
    let phi = ctx.one();
    let places = match (&s.place, s.max_degree) {
        (Some(_), _) => vec![s.place_arg(&ctx.fq, &s.place, "place")?],
        (None, Some(d)) => places_up_to(&ctx.fq, d),
        (None, None) => return Err(invalid("charpoly needs --place or -D")),
    };
    let mut rows = Vec::new();
    let mut csv = format!("{CHARPOLY_CSV_HEADER}\n");
    let mut bad = Vec::new();
    for p in &places {
        let red = match phi.reduce_at(p) {
            Ok(r) => r,
            Err(Error::BadReduction { place }) if s.place.is_none() => {
                bad.push(place);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let cp = frob_charpoly(&red)?;
        csv.push_str(&cp.csv_row(&ctx.fq));
        csv.push('\n');
        rows.push(charpoly_row(&ctx.fq, &cp));
    }
    let json = serde_json::json!({ "charpolys": rows, "bad_reduction": bad });
    Ok(Report { json, csv: Some(csv) })
}

fn run_isogeny(ctx: &Context, s: &Settings) -> Outcome<Report> {
    let (phi1, phi2) = ctx.pair()?;
    let mut opts = IsogenyOptions::default();
    if let Some(n) = s.tau_bound {
        opts.max_degree = n;
    }
    let out = isogeny_search(phi1, phi2, &opts)?;
    let json = serde_json::json!({
        "found": out.isogeny.is_some(),
        "isogeny": out.isogeny.as_ref().map(|i| i.render(phi1)),
        "degree": out.isogeny.as_ref().map(|i| i.degree),
        "solution_dim": out.isogeny.as_ref().map(|i| i.solution_dim),
        "verified": out.isogeny.as_ref().is_some_and(|i| i.verified),
        "searched_up_to": out.searched_up_to,
        "obstruction": out.obstruction,
    });
    Ok(Report { json, csv: None })
}

fn run_twist(ctx: &Context, s: &Settings) -> Outcome<Report> {
    let rep = twist_agreement(ctx.one(), &s.gamma(&ctx.fq)?, s.degree()?, s.par)?;
    Ok(Report { json: to_value(&rep), csv: Some(rep.agreement.csv()) })
}

fn run_torsion(ctx: &Context, s: &Settings) -> Outcome<Report> {
    let fq = &ctx.fq;
    let place = s.place_arg(fq, &s.place, "place")?;
    let ell = s.ell(fq)?;
    let red = ctx.one().reduce_at(&place)?;
    let opts = s.cheb_opts().torsion;
    let data = torsion_frobenius_matrix(&red, &ell, &opts)?;
    let kl = data.ell_field();
    let render = |e: &Vec<Fq>| render_poly(fq, &kl.to_poly(e));
    let m = data.matrix();
    let rows: Vec<Vec<String>> = (0..m.rows()).map(|i| m.row(i).iter().map(render).collect()).collect();
    let cp: Vec<String> = charpoly(kl, m)?.iter().map(render).collect();
    let json = serde_json::json!({
        "place": place.render(fq),
        "ell": ell.render(fq),
        "field_degree": data.field_degree(),
        "torsion_dimension": data.kernel_dim(),
        "matrix": rows,
        "charpoly": cp,
    });
    Ok(Report { json, csv: None })
}

fn run_chebotarev(ctx: &Context, s: &Settings) -> Outcome<Report> {
    let gran: Granularity = s.mode.as_deref().unwrap_or("charpoly").parse()?;
    let rep = chebotarev_report(ctx.one(), &s.ell(&ctx.fq)?, s.degree()?, gran, &s.cheb_opts())?;
    let mut json = to_value(&rep);
    json["tolerance"] = s.tolerance.into();
    json["within_tolerance"] = (rep.max_deviation <= s.tolerance).into();
    Ok(Report { json, csv: None })
}

fn run_smo(ctx: &Context, s: &Settings) -> Outcome<Report> {
    let (phi1, phi2) = ctx.pair()?;
    let rep = smo_experiment(phi1, phi2, &s.ell(&ctx.fq)?, s.degree()?, &s.cheb_opts())?;
    let mut json = to_value(&rep);
    json["tolerance"] = s.tolerance.into();
    json["within_tolerance"] = (rep.deviation <= s.tolerance).into();
    Ok(Report { json, csv: None })
}

fn run_newton(args: &NewtonArgs) -> Outcome<Report> {
    let k = FqCtx::prime(args.p)?;
    let traces: Vec<Fq> = args.traces.iter().map(|&t| k.from_int(t)).collect();
    let e = newton_reconstruct(&k, &traces, args.n)?;
    let show = |v: &[Fq]| v.iter().map(|&c| k.render(c)).collect::<Vec<_>>();
    let json = serde_json::json!({
        "p": args.p,
        "n": args.n,
        "elementary": show(&e),
        "charpoly": show(&charpoly_from_elementary(&k, &e)),
    });
    Ok(Report { json, csv: None })
}

fn run_density(args: &DensityArgs) -> Outcome<Report> {
    if args.max_degree == 0 {
        return Err(invalid("degree bound must be at least 1"));
    }
    let fq = FqCtx::new(args.p, args.e, None)?;
    let gamma = parse_poly(&fq, &args.gamma)?;
    if gamma.is_empty() {
        return Err(Error::ZeroGamma.into());
    }
    let target = fq.from_int(args.value);
    let est = density_estimate(&fq, args.max_degree, parallelism(args.output.jobs), |p| {
        power_residue_symbol(&fq, &gamma, p).ok().map(|c| c == target)
    });
    Ok(Report { json: to_value(&est), csv: None })
}

fn write_report(name: &str, modules: Vec<ModuleDef>, rep: Report, out: &Output) -> Outcome<()> {
    let env = Envelope { command: name, modules, report: rep.json };
    let text = serde_json::to_string_pretty(&env).expect("reports serialize") + "\n";
    match &out.out {
        None => print!("{text}"),
        Some(path) => {
            let io = |e: std::io::Error| invalid(format!("cannot write {}: {e}", path.display()));
            fs::write(path, text).map_err(io)?;
            if let Some(csv) = rep.csv {
                fs::write(path.with_extension("csv"), csv).map_err(io)?;
            }
        }
    }
    Ok(())
}

fn run_common(name: &str, args: &Common, f: fn(&Context, &Settings) -> Outcome<Report>) -> Outcome<()> {
    let ctx = load_config(&args.config)?;
    if let Some(c) = &ctx.cfg.command {
        if c != name {
            return Err(invalid(format!("config is for `{c}`, not `{name}`")));
        }
    }
    let s = settings(args, &ctx.cfg)?;
    let rep = f(&ctx, &s)?;
    let defs = ctx.modules.iter().map(ModuleDef::from_module).collect();
    write_report(name, defs, rep, &args.output)
}

fn dispatch(cmd: &Command) -> Outcome<()> {
    match cmd {
        Command::Scan(a) => run_common("scan", a, run_scan),
        Command::Charpoly(a) => run_common("charpoly", a, run_charpoly),
        Command::Isogeny(a) => run_common("isogeny", a, run_isogeny),
        Command::Twist(a) => run_common("twist", a, run_twist),
        Command::Torsion(a) => run_common("torsion", a, run_torsion),
        Command::Chebotarev(a) => run_common("chebotarev", a, run_chebotarev),
        Command::Smo(a) => run_common("smo", a, run_smo),
        Command::Newton(a) => write_report("newton", Vec::new(), run_newton(a)?, &a.output),
        Command::Density(a) => write_report("density", Vec::new(), run_density(a)?, &a.output),
    }
}

fn jobs(cmd: &Command) -> Option<usize> {
    match cmd {
        Command::Scan(a)
        | Command::Charpoly(a)
        | Command::Isogeny(a)
        | Command::Twist(a)
        | Command::Torsion(a)
        | Command::Chebotarev(a)
        | Command::Smo(a) => a.output.jobs,
        Command::Newton(a) => a.output.jobs,
        Command::Density(a) => a.output.jobs,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match jobs(&cli.command) {
        Some(0) => Err(invalid("--jobs must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(invalid(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli.command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Anomaly(m)) => {
            eprintln!("anomaly: {m}");
            ExitCode::from(2)
        }
    }
}
