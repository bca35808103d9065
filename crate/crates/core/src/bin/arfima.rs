//! Command-line front end. Every flag can also be given in a TOML or JSON config file
//! (`--config`), using the flag name as key; flags on the command line win.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};

use arfima::abc::{run_abc, AbcConfig, SummaryVariant};
use arfima::draws::PosteriorDraws;
use arfima::forecast::posterior_predictive_paths;
use arfima::io::{envelope, gnp_transform, ingest_csv, read_column, write_columns, write_series_csv};
use arfima::likelihood::{log_posterior_grid, Priors};
use arfima::mcmc::{dic, run_mcmc, Algorithm, McmcConfig};
use arfima::mle::fit_mle;
use arfima::simulate::simulate_arfima;
use arfima::study::{
    forecast_markdown, forecast_study, metrics_markdown, run_study, write_forecast_csv, write_metrics_csv, StudyConfig,
};
use arfima::{ArfimaParams, Component, Error, ModelOrder, Series};

#[derive(Parser)]
#[command(name = "arfima", version, about = "Bayesian estimation of ARFIMA(p<=1, d, q<=1) models")]
struct Cli {
    /// TOML or JSON file whose keys mirror the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout if absent).
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, env = "ARFIMA_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a Gaussian ARFIMA series (CSV column `value`).
    Simulate(SimulateArgs),
    /// Sample the posterior by MCMC.
    FitMcmc(McmcArgs),
    /// Sample the approximate posterior by ABC rejection.
    FitAbc(AbcArgs),
    /// Exact Gaussian maximum likelihood.
    FitMle(MleArgs),
    /// Forecast the next points from posterior draws or a parameter point.
    Forecast(ForecastArgs),
    /// Integrated log-posterior over a (d, phi) grid (CSV).
    Grid(GridArgs),
    /// Simulation study: parameter metrics.
    Study(StudyArgs),
    /// Simulation study: forecast metrics.
    ForecastStudy(StudyArgs),
    /// Demeaned percent log-returns of a level series.
    GnpTransform(InputArgs),
    /// Deviance information criterion of a set of draws.
    Dic(DicArgs),
    /// Fit a model to quarterly GNP levels (log-return transform, GNP priors).
    Gnp(GnpArgs),
}

#[derive(Args, Clone)]
struct InputArgs {
    /// CSV file with a header row.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Column name or 0-based index.
    #[arg(long)]
    column: Option<String>,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    order: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    d: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long)]
    sigma2: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct PriorArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args)]
struct McmcArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    order: Option<String>,
    /// simultaneous or filtered.
    #[arg(long)]
    algorithm: Option<String>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    thin: Option<usize>,
    #[arg(long)]
    burn_in: Option<usize>,
    #[arg(long)]
    sigma_d: Option<f64>,
    #[command(flatten)]
    priors: PriorArgs,
    /// Write the draws as CSV here as well.
    #[arg(long)]
    draws_csv: Option<PathBuf>,
}

#[derive(Args)]
struct AbcArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    order: Option<String>,
    /// h1 (full periodogram), h2 (first 20 ordinates) or h3 (pooled log-periodogram).
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    simulations: Option<usize>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    q_sigma2: Option<f64>,
    #[command(flatten)]
    priors: PriorArgs,
    /// Spill per-simulation records to this file.
    #[arg(long)]
    scratch: Option<PathBuf>,
    #[arg(long)]
    draws_csv: Option<PathBuf>,
}

#[derive(Args)]
struct MleArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    order: Option<String>,
}

#[derive(Args)]
struct ForecastArgs {
    #[command(flatten)]
    input: InputArgs,
    /// JSON file written by fit-mcmc or fit-abc.
    #[arg(long)]
    draws: Option<PathBuf>,
    /// Without --draws: forecast from this parameter point.
    #[command(flatten)]
    params: ParamArgs,
    /// Number of paths for a parameter point.
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    horizon: Option<usize>,
    /// Write the full path matrix (one row per draw) here.
    #[arg(long)]
    paths_csv: Option<PathBuf>,
}

#[derive(Args)]
struct GridArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, allow_hyphen_values = true)]
    d_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    d_max: Option<f64>,
    #[arg(long)]
    d_steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    phi_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi_max: Option<f64>,
    #[arg(long)]
    phi_steps: Option<usize>,
    /// Fixed MA coefficient; omit for an ARFIMA(1,d,0) grid.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[command(flatten)]
    priors: PriorArgs,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Also write the Markdown table here.
    #[arg(long)]
    markdown: Option<PathBuf>,
}

#[derive(Args)]
struct DicArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    draws: Option<PathBuf>,
}

#[derive(Args)]
struct GnpArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    model: Option<String>,
    /// mcmc, mcmc-filtered, abc or mle.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    thin: Option<usize>,
    #[arg(long)]
    simulations: Option<usize>,
    #[command(flatten)]
    priors: PriorArgs,
    /// Report the DIC of the draws as well.
    #[arg(long)]
    dic: bool,
}

enum Failure {
    Error(Error),
    EmptyAbc,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn input_err(msg: impl Into<String>) -> Failure {
    Failure::Error(Error::Input(msg.into()))
}

/// Config-file values keyed by flag name (either `kebab-case` or `snake_case`).
struct FileConfig(Map<String, Value>);

impl FileConfig {
    fn load(path: Option<&Path>) -> Res<Self> {
        let Some(path) = path else { return Ok(FileConfig(Map::new())) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| input_err(format!("cannot read config {}: {e}", path.display())))?;
        let value: Value = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| input_err(format!("config {}: {e}", path.display())))?
        } else {
            let t: toml::Value = toml::from_str(&text).map_err(|e| input_err(format!("config {}: {e}", path.display())))?;
            serde_json::to_value(t).map_err(Error::from)?
        };
        match value {
            Value::Object(m) => Ok(FileConfig(m)),
            _ => Err(input_err("config file must be a table")),
        }
    }

    fn raw(&self) -> Value {
        Value::Object(self.0.clone())
    }

    fn get<T: DeserializeOwned>(&self, key: &str) -> Res<Option<T>> {
        let snake = key.replace('-', "_");
        let Some(v) = self.0.get(key).or_else(|| self.0.get(&snake)) else { return Ok(None) };
        serde_json::from_value(v.clone()).map(Some).map_err(|e| input_err(format!("config key `{key}`: {e}")))
    }

    fn pick<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Res<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    fn or<T: DeserializeOwned>(&self, flag: Option<T>, key: &str, default: T) -> Res<T> {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }

    fn need<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Res<T> {
        self.pick(flag, key)?.ok_or_else(|| input_err(format!("--{key} is required")))
    }
}

struct Ctx {
    cfg: FileConfig,
    seed: Option<u64>,
    workers: Option<usize>,
    output: Option<PathBuf>,
}

impl Ctx {
    fn seed(&self) -> Res<u64> {
        self.cfg.pick(self.seed, "seed")?.ok_or_else(|| input_err("--seed is required for this subcommand"))
    }

    fn workers(&self) -> Res<usize> {
        Ok(self.cfg.or(self.workers, "workers", 1)?.max(1))
    }

    fn out(&self) -> Res<Box<dyn Write>> {
        Ok(match &self.output {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(Error::from)?)),
            None => Box::new(BufWriter::new(std::io::stdout())),
        })
    }

    fn emit_json(&self, v: &Value) -> Res<()> {
        let mut w = self.out()?;
        serde_json::to_writer_pretty(&mut w, v).map_err(Error::from)?;
        writeln!(w).map_err(Error::from)?;
        w.flush().map_err(Error::from)?;
        Ok(())
    }

    fn series(&self, a: &InputArgs) -> Res<Series> {
        let path: PathBuf = self.cfg.need(a.input.clone(), "input")?;
        let column = self.cfg.or(a.column.clone(), "column", "value".to_string())?;
        Ok(ingest_csv(&path, &column)?)
    }

    fn order(&self, flag: Option<String>, key: &str) -> Res<ModelOrder> {
        Ok(self.cfg.or(flag, key, "1d1".to_string())?.parse()?)
    }

    fn priors(&self, a: &PriorArgs, default: Priors) -> Res<Priors> {
        let alpha = self.cfg.or(a.alpha, "alpha", default.alpha)?;
        let beta = self.cfg.or(a.beta, "beta", default.beta)?;
        Ok(Priors::inverse_gamma(alpha, beta)?)
    }

    fn params(&self, a: &ParamArgs) -> Res<ArfimaParams> {
        let order = self.order(a.order.clone(), "order")?;
        let d = self.cfg.need(a.d, "d")?;
        let phi = self.cfg.pick(a.phi, "phi")?;
        let theta = self.cfg.pick(a.theta, "theta")?;
        if order.has_phi() && phi.is_none() || order.has_theta() && theta.is_none() {
            return Err(input_err(format!("order {} needs --phi/--theta", order.label())));
        }
        let sigma2 = self.cfg.or(a.sigma2, "sigma2", 1.0)?;
        Ok(ArfimaParams::with_order(order, d, phi.unwrap_or(0.0), theta.unwrap_or(0.0), sigma2)?)
    }
}

fn summary_json(draws: &PosteriorDraws) -> Value {
    let mut m = Map::new();
    for c in Component::for_order(draws.order) {
        if let Some(s) = draws.summary(c) {
            m.insert(c.name().into(), serde_json::to_value(s).unwrap_or(Value::Null));
        }
    }
    Value::Object(m)
}

fn write_draws_csv(path: &Path, draws: &PosteriorDraws) -> Res<()> {
    let comps = Component::for_order(draws.order);
    let cols: Vec<Vec<f64>> = comps.iter().map(|c| draws.component(*c)).collect();
    let idx: Vec<f64> = draws.index.iter().map(|i| *i as f64).collect();
    let mut headers = vec!["index"];
    headers.extend(comps.iter().map(|c| c.name()));
    let mut refs: Vec<&[f64]> = vec![&idx];
    refs.extend(cols.iter().map(|c| c.as_slice()));
    write_columns(BufWriter::new(File::create(path).map_err(Error::from)?), &headers, &refs)?;
    Ok(())
}

fn read_draws(path: &Path) -> Res<PosteriorDraws> {
    let text = std::fs::read_to_string(path).map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(Error::from)?;
    let d = v.get("draws").cloned().unwrap_or(v);
    serde_json::from_value(d).map_err(|e| input_err(format!("{}: not a draws file ({e})", path.display())))
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![lo];
    }
    (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect()
}

fn run(cli: Cli) -> Res<()> {
    let ctx = Ctx { cfg: FileConfig::load(cli.config.as_deref())?, seed: cli.seed, workers: cli.workers, output: cli.output };
    let cfg = &ctx.cfg;
    match cli.command {
        Command::Simulate(a) => {
            let p = ctx.params(&a.params)?;
            let n = cfg.need(a.n, "n")?;
            let y = simulate_arfima(&p, n, ctx.seed()?)?;
            write_series_csv(ctx.out()?, y.values())?;
        }
        Command::FitMle(a) => {
            let y = ctx.series(&a.input)?;
            let fit = fit_mle(&y, ctx.order(a.order, "order")?)?;
            ctx.emit_json(&envelope(None, &cfg.raw(), "fit", &fit)?)?;
        }
        Command::FitMcmc(a) => {
            let y = ctx.series(&a.input)?;
            let algorithm: Algorithm = cfg.or(a.algorithm, "algorithm", "simultaneous".to_string())?.parse()?;
            let base = McmcConfig::default();
            let mc = McmcConfig {
                algorithm,
                order: ctx.order(a.order, "order")?,
                iterations: cfg.or(a.iterations, "iterations", base.iterations)?,
                thin: cfg.or(a.thin, "thin", base.thin)?,
                burn_in: cfg.or(a.burn_in, "burn-in", base.burn_in)?,
                sigma_d: cfg.or(a.sigma_d, "sigma-d", base.sigma_d)?,
                priors: ctx.priors(&a.priors, Priors::study())?,
                seed: ctx.seed()?,
                ..base
            };
            mc.validate()?;
            let draws = run_mcmc(&y, &mc)?;
            if let Some(p) = cfg.pick(a.draws_csv, "draws-csv")? {
                write_draws_csv(&p, &draws)?;
            }
            let mut env = envelope(Some(mc.seed), &mc, "draws", &draws)?;
            env["summary"] = summary_json(&draws);
            ctx.emit_json(&env)?;
        }
        Command::FitAbc(a) => {
            let y = ctx.series(&a.input)?;
            let base = AbcConfig::default();
            let variant: SummaryVariant = cfg.or(a.variant, "variant", "h2".to_string())?.parse()?;
            let ac = AbcConfig {
                order: ctx.order(a.order, "order")?,
                variant,
                simulations: cfg.or(a.simulations, "simulations", base.simulations)?,
                q: cfg.or(a.q, "q", base.q)?,
                q_sigma2: cfg.or(a.q_sigma2, "q-sigma2", base.q_sigma2)?,
                priors: ctx.priors(&a.priors, Priors::study())?,
                seed: ctx.seed()?,
                worker_count: ctx.workers()?,
                scratch: cfg.pick(a.scratch, "scratch")?,
                ..base
            };
            ac.validate()?;
            let run = run_abc(&y, &ac)?;
            if run.draws.is_empty() {
                log::error!("no simulations accepted (thresholds {:?})", run.thresholds);
                return Err(Failure::EmptyAbc);
            }
            if let Some(p) = cfg.pick(a.draws_csv, "draws-csv")? {
                write_draws_csv(&p, &run.draws)?;
            }
            let mut env = envelope(Some(ac.seed), &ac, "draws", &run.draws)?;
            env["summary"] = summary_json(&run.draws);
            env["thresholds"] = serde_json::to_value(run.thresholds).map_err(Error::from)?;
            env["simulator_fallbacks"] = json!(run.simulator_fallbacks);
            ctx.emit_json(&env)?;
        }
        Command::Forecast(a) => {
            let y = ctx.series(&a.input)?;
            let b = cfg.or(a.horizon, "horizon", 15)?;
            let draws = match cfg.pick(a.draws, "draws")? {
                Some(p) => read_draws(&p)?,
                None => PosteriorDraws::point_mass(ctx.params(&a.params)?, cfg.or(a.paths, "paths", 1000)?),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed()?);
            let fd = posterior_predictive_paths(&y, &draws, b, &mut rng)?;
            let step: Vec<f64> = (1..=b).map(|k| k as f64).collect();
            write_columns(ctx.out()?, &["step", "mean", "lb", "ub"], &[&step, &fd.mean, &fd.lb, &fd.ub])?;
            if let Some(p) = cfg.pick(a.paths_csv, "paths-csv")? {
                let cols: Vec<Vec<f64>> = (0..b).map(|k| fd.paths.iter().map(|row| row[k]).collect()).collect();
                let names: Vec<String> = (1..=b).map(|k| format!("step{k}")).collect();
                let headers: Vec<&str> = names.iter().map(String::as_str).collect();
                let refs: Vec<&[f64]> = cols.iter().map(Vec::as_slice).collect();
                write_columns(BufWriter::new(File::create(p).map_err(Error::from)?), &headers, &refs)?;
            }
        }
        Command::Grid(a) => {
            let y = ctx.series(&a.input)?;
            let ds = linspace(cfg.or(a.d_min, "d-min", -0.45)?, cfg.or(a.d_max, "d-max", 0.45)?, cfg.or(a.d_steps, "d-steps", 91)?);
            let ps =
                linspace(cfg.or(a.phi_min, "phi-min", -0.9)?, cfg.or(a.phi_max, "phi-max", 0.9)?, cfg.or(a.phi_steps, "phi-steps", 91)?);
            let theta = cfg.pick(a.theta, "theta")?;
            let priors = ctx.priors(&a.priors, Priors::study())?;
            let grid = log_posterior_grid(&y, &ds, &ps, theta, &priors);
            let (mut dc, mut pc, mut vc) = (Vec::new(), Vec::new(), Vec::new());
            for (i, row) in grid.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    dc.push(ds[i]);
                    pc.push(ps[j]);
                    vc.push(*v);
                }
            }
            write_columns(ctx.out()?, &["d", "phi", "log_posterior"], &[&dc, &pc, &vc])?;
        }
        Command::Study(a) => study(&ctx, a, false)?,
        Command::ForecastStudy(a) => study(&ctx, a, true)?,
        Command::GnpTransform(a) => {
            let path: PathBuf = cfg.need(a.input.clone(), "input")?;
            let column = cfg.or(a.column.clone(), "column", "value".to_string())?;
            let y = gnp_transform(&read_column(&path, &column)?)?;
            write_series_csv(ctx.out()?, y.values())?;
        }
        Command::Dic(a) => {
            let y = ctx.series(&a.input)?;
            let draws = read_draws(&cfg.need(a.draws, "draws")?)?;
            let d = dic(&y, &draws)?;
            ctx.emit_json(&envelope(None, &cfg.raw(), "dic", &d)?)?;
        }
        Command::Gnp(a) => gnp(&ctx, a)?,
    }
    Ok(())
}

fn study(ctx: &Ctx, a: StudyArgs, forecasts: bool) -> Res<()> {
    let mut sc: StudyConfig = serde_json::from_value(ctx.cfg.raw()).map_err(|e| input_err(format!("study config: {e}")))?;
    sc.seed = ctx.seed()?;
    sc.workers = ctx.workers()?;
    if let Some(r) = a.reps {
        sc.reps = r;
    }
    if let Some(n) = a.n {
        sc.n = n;
    }
    let report = if forecasts { forecast_study(&sc)? } else { run_study(&sc)? };
    let mut w = ctx.out()?;
    if forecasts {
        write_forecast_csv(&report.forecasts, &mut w)?;
    } else {
        write_metrics_csv(&report.rows, &mut w)?;
    }
    w.flush().map_err(Error::from)?;
    if let Some(p) = a.markdown {
        let md = if forecasts { forecast_markdown(&report.forecasts) } else { metrics_markdown(&report.rows) };
        std::fs::write(p, md).map_err(Error::from)?;
    }
    Ok(())
}

fn gnp(ctx: &Ctx, a: GnpArgs) -> Res<()> {
    let cfg = &ctx.cfg;
    let path: PathBuf = cfg.need(a.input.input.clone(), "input")?;
    let column = cfg.or(a.input.column.clone(), "column", "value".to_string())?;
    let y = gnp_transform(&read_column(&path, &column)?)?;
    let order: ModelOrder = ctx.order(a.model, "model")?;
    let method = cfg.or(a.method, "method", "mcmc".to_string())?;
    let priors = ctx.priors(&a.priors, Priors::gnp())?;
    let draws = match method.as_str() {
        "mcmc" | "mcmc-filtered" => {
            let mc = McmcConfig {
                algorithm: if method == "mcmc" { Algorithm::Simultaneous } else { Algorithm::Filtered },
                order,
                iterations: cfg.or(a.iterations, "iterations", 50_000)?,
                thin: cfg.or(a.thin, "thin", 50)?,
                priors,
                seed: ctx.seed()?,
                ..McmcConfig::default()
            };
            mc.validate()?;
            run_mcmc(&y, &mc)?
        }
        "abc" => {
            let ac = AbcConfig {
                order,
                simulations: cfg.or(a.simulations, "simulations", 100_000)?,
                priors,
                seed: ctx.seed()?,
                worker_count: ctx.workers()?,
                ..AbcConfig::default()
            };
            ac.validate()?;
            let run = run_abc(&y, &ac)?;
            if run.draws.is_empty() {
                return Err(Failure::EmptyAbc);
            }
            run.draws
        }
        "mle" => {
            let fit = fit_mle(&y, order)?;
            let mut out = json!({ "n": y.len(), "sample_variance": arfima::stats::variance(y.values()) });
            out["fit"] = serde_json::to_value(&fit).map_err(Error::from)?;
            return ctx.emit_json(&envelope(None, &cfg.raw(), "gnp", &out)?);
        }
        other => return Err(input_err(format!("unknown method `{other}` (mcmc, mcmc-filtered, abc, mle)"))),
    };
    let mut out = json!({
        "n": y.len(),
        "sample_variance": arfima::stats::variance(y.values()),
        "model": order.label(),
        "method": method,
        "draws": draws.len(),
        "summary": summary_json(&draws),
    });
    if a.dic || cfg.get::<bool>("dic")?.unwrap_or(false) {
        out["dic"] = serde_json::to_value(dic(&y, &draws)?).map_err(Error::from)?;
    }
    ctx.emit_json(&envelope(ctx.seed.or(cfg.get("seed")?), &cfg.raw(), "gnp", &out)?)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::EmptyAbc) => {
            eprintln!("error: ABC accepted no simulations");
            ExitCode::from(3)
        }
        Err(Failure::Error(Error::Io(e))) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Numerical(_) | Error::WorkerPanic { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
