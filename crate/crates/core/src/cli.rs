//! Command-line front end.
//!
//! Every subcommand prints one JSON report (tool version, the resolved
//! configuration, per-check pass/fail and the result). Values come from
//! flags first, then from the `--config` file, then from built-in defaults.
//! Exit codes: 0 success, 1 failed check or numerical error, 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bessel::{group_integral_mc, laplace_ball_mc, BesselSeries, TruncationControl};
use crate::beta::{
    classify_point, dichotomy_hypothesis, product_relation_check, BetaSampler, MomentFunctional, Verdict,
};
use crate::cone::{
    beta_cone, gamma_cone, gamma_poles, pochhammer_gen_exact, wallach_contains_exact, wqd_contains,
    zlambda_at_identity, ConeStructure, Field, Window,
};
use crate::error::Error;
use crate::jack::{c_over_p_exact, jack_c_eval, jack_c_exact};
use crate::jordan::ConeElement;
use crate::mc::{run_chunks, Estimate, Stats};
use crate::partition::{partitions_up_to, Partition};
use crate::rational::{parse_q, to_f64, Q};
use crate::sonine::{
    composition_check, sonine_extended_polynomial, sonine_extended_rank1, sonine_mc_with_sampler,
    sonine_rank1_quadrature,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest supported rank.
pub const MAX_RANK: usize = 3;

#[derive(Debug, Parser)]
#[command(name = "sonine", version, about = "Special functions and beta measures on matrix cones")]
pub struct Cli {
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Omit the timestamp so that reruns are byte-identical.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cone gamma and beta functions, gamma poles and Wallach membership.
    Gamma(GammaArgs),
    /// Monomial expansion and evaluation of a Jack polynomial.
    Jack(JackArgs),
    /// Evaluate the Bessel function by its series or a Monte Carlo integral.
    EvalBessel(EvalArgs),
    /// Draw beta-distributed matrices.
    SampleBeta(SampleArgs),
    /// Exact moments of a beta distribution.
    Moment(MomentArgs),
    /// Search for a negative direction of the extended beta functional.
    ClassifyPositivity(ClassifyArgs),
    /// Check the beta-integral product relation on polynomials.
    CheckProductRelation(ProductArgs),
    /// Check the Sonine formula.
    SonineCheck(SonineArgs),
    /// Check composition of beta measures through moments.
    ComposeCheck(ComposeArgs),
    /// Compare Wallach membership with the positivity detector over a list of nu.
    TheoremB(TheoremBArgs),
}

#[derive(Debug, Args)]
pub struct ConeArgs {
    /// Rank of the cone.
    #[arg(long)]
    pub q: Option<usize>,
    /// Base field: R or C.
    #[arg(long)]
    pub field: Option<Field>,
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// Monte Carlo sample count.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Base seed; a fixed seed gives identical output for any --jobs.
    #[arg(long, env = "SONINE_SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GammaArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    /// Real part of z (rational or decimal).
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub z_im: f64,
    /// Second beta argument.
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<f64>,
    /// Pole window, e.g. "[-3,1/2]" (default: [-3, mu0]).
    #[arg(long)]
    pub window: Option<String>,
}

#[derive(Debug, Args)]
pub struct JackArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    /// Partition, e.g. "2,1".
    #[arg(long)]
    pub partition: String,
    /// Jack parameter (default 2/d).
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub spectrum: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Series,
    BallMc,
    GroupMc,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    /// First parameter, decimal or fraction such as 7/2.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub mu_im: f64,
    /// Eigenvalues of the argument.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub spectrum: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = Method::Series)]
    pub method: Method,
    /// Hard cap on the series degree.
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    /// First parameter, decimal or fraction such as 7/2.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Second parameter; may be negative.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// Rows of the first Gaussian factor (singular sampler).
    #[arg(long, requires = "pt", conflicts_with_all = ["mu", "nu"])]
    pub p: Option<usize>,
    /// Rows of the second Gaussian factor (singular sampler).
    #[arg(long, requires = "p")]
    pub pt: Option<usize>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// `csv` prints one spectrum per line instead of the report.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    /// First parameter, decimal or fraction such as 7/2.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Second parameter; may be negative.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// Partitions (repeatable); default: all of weight at most `--degree`.
    #[arg(long = "partition")]
    pub partitions: Vec<String>,
    #[arg(long)]
    pub degree: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    /// First parameter, decimal or fraction such as 7/2.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Second parameter; may be negative.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    #[arg(long)]
    pub dmax: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    /// First parameter, decimal or fraction such as 7/2.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Second parameter; may be negative.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    #[arg(long)]
    pub degree: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SonineArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    /// First parameter, decimal or fraction such as 7/2.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Second parameter; may be negative.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// Extension level for the rank-one distributional check.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, requires = "pt", conflicts_with_all = ["mu", "nu"])]
    pub p: Option<usize>,
    #[arg(long, requires = "p")]
    pub pt: Option<usize>,
    /// Spectrum of r (repeatable), e.g. "2,0.5".
    #[arg(long = "spectrum", allow_hyphen_values = true)]
    pub spectra: Vec<String>,
    /// Truncation degree of the exact polynomial check.
    #[arg(long)]
    pub degree: Option<usize>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    /// First parameter, decimal or fraction such as 7/2.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu2: Option<String>,
    #[arg(long)]
    pub degree: Option<usize>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Args)]
pub struct TheoremBArgs {
    #[command(flatten)]
    pub cone: ConeArgs,
    /// First parameter, decimal or fraction such as 7/2.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Comma-separated list of nu.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub nu: Option<Vec<String>>,
    #[arg(long)]
    pub dmax: Option<usize>,
}

/// A number in a config file: JSON number or string such as `"1/2"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Num(f64),
    Text(String),
}

impl Param {
    fn text(&self) -> String {
        match self {
            Param::Num(x) => x.to_string(),
            Param::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(Param),
    Many(Vec<Param>),
}

/// Schema of the `--config` file. Every field is optional; unknown keys are rejected.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub field: Option<Field>,
    pub q: Option<usize>,
    pub mu: Option<Param>,
    pub nu: Option<OneOrMany>,
    pub nu2: Option<Param>,
    pub k: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub degree: Option<usize>,
    pub dmax: Option<usize>,
    pub spectrum: Option<Vec<f64>>,
    pub truncation: Option<TruncationControl>,
    pub format: Option<Format>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Numeric(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::Parameter(_)
            | Error::Dimension(_)
            | Error::RankExceeded { .. }
            | Error::RankCapExceeded { .. }
            | Error::DegreeCapExceeded { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Debug, Serialize)]
struct Report {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    config: Value,
    passed: bool,
    checks: Vec<Check>,
    result: Value,
}

enum Output {
    Report { config: Value, checks: Vec<Check>, result: Value },
    Raw { text: String, passed: bool },
}

struct Ctx {
    cfg: RunConfig,
}

impl Ctx {
    fn cone(&self, a: &ConeArgs) -> CliResult<ConeStructure> {
        let q = match a.q.or(self.cfg.q) {
            Some(q) => q,
            None => return usage("missing --q"),
        };
        if q == 0 || q > MAX_RANK {
            return usage(format!("--q must be between 1 and {MAX_RANK}"));
        }
        let field = a.field.or(self.cfg.field).unwrap_or(Field::Real);
        Ok(ConeStructure::new(field, q)?)
    }

    fn mu(&self, flag: &Option<String>) -> CliResult<Q> {
        match flag.clone().or_else(|| self.cfg.mu.as_ref().map(Param::text)) {
            Some(s) => Ok(parse_q(&s)?),
            None => usage("missing --mu"),
        }
    }

    fn nu(&self, flag: &Option<String>) -> CliResult<Q> {
        let s = match (flag, &self.cfg.nu) {
            (Some(s), _) => s.clone(),
            (None, Some(OneOrMany::One(p))) => p.text(),
            (None, Some(OneOrMany::Many(v))) if v.len() == 1 => v[0].text(),
            (None, Some(OneOrMany::Many(_))) => return usage("config nu must be a single value here"),
            (None, None) => return usage("missing --nu"),
        };
        Ok(parse_q(&s)?)
    }

    fn nu_list(&self, flag: &Option<Vec<String>>) -> CliResult<Vec<Q>> {
        let raw: Vec<String> = match (flag, &self.cfg.nu) {
            (Some(v), _) => v.clone(),
            (None, Some(OneOrMany::One(p))) => vec![p.text()],
            (None, Some(OneOrMany::Many(v))) => v.iter().map(Param::text).collect(),
            (None, None) => return usage("missing --nu"),
        };
        raw.iter().map(|s| Ok(parse_q(s)?)).collect()
    }

    fn samples(&self, a: &SamplingArgs, default: usize) -> usize {
        a.samples.or(self.cfg.samples).unwrap_or(default)
    }

    fn seed(&self, a: &SamplingArgs) -> u64 {
        a.seed.or(self.cfg.seed).unwrap_or(0)
    }

    fn truncation(&self, max_degree: Option<usize>) -> CliResult<TruncationControl> {
        let mut t = self.cfg.truncation.unwrap_or_default();
        if let Some(m) = max_degree {
            t.max_degree = m;
        }
        t.validate()?;
        Ok(t)
    }
}

fn q_json(x: &Q) -> Value {
    json!({ "exact": x.to_string(), "value": to_f64(x) })
}

fn cone_json(c: &ConeStructure) -> Value {
    json!({ "field": c.field, "q": c.q, "d": c.d(), "n": c.n(), "mu0": c.mu0() })
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::NegativeWitness { degree, localizer, witness, value, min_eigenvalue } => json!({
            "kind": "negative-witness",
            "degree": degree,
            "localizer": localizer,
            "witness": witness.iter().map(|(k, c)| (k.to_string(), Value::String(c.to_string()))).collect::<serde_json::Map<_, _>>(),
            "value": q_json(value),
            "min_eigenvalue": min_eigenvalue,
        }),
        Verdict::NoObstructionUpTo { dmax, min_eigenvalues } => json!({
            "kind": "no-obstruction",
            "dmax": dmax,
            "min_eigenvalues": min_eigenvalues.iter().map(|(l, e)| json!({ "localizer": l, "min_eigenvalue": e })).collect::<Vec<_>>(),
        }),
    }
}

const POSITIVITY_NOTE: &str = "a negative witness proves the functional is not positive; \
no obstruction up to dmax is necessary for positivity but does not prove it";

fn parse_spectrum(s: &str) -> CliResult<Vec<f64>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| CliError::Usage(format!("spectrum entry {t:?}: {e}"))))
        .collect()
}

fn check_spectrum(xi: &[f64], cone: &ConeStructure) -> CliResult<()> {
    if xi.len() != cone.q {
        return usage(format!("spectrum has {} entries, expected q = {}", xi.len(), cone.q));
    }
    Ok(())
}

fn gamma_cmd(ctx: &Ctx, a: &GammaArgs) -> CliResult<Output> {
    let cone = ctx.cone(&a.cone)?;
    let re = parse_q(&a.z)?;
    let z = Complex64::new(to_f64(&re), a.z_im);
    let gamma = match gamma_cone(z, &cone) {
        Ok(g) => complex_json(g),
        Err(Error::GammaPole { .. }) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let beta = match a.w {
        Some(w) => match beta_cone(z, Complex64::new(w, 0.0), &cone) {
            Ok(b) => complex_json(b),
            Err(Error::GammaPole { .. }) => Value::Null,
            Err(e) => return Err(e.into()),
        },
        None => Value::Null,
    };
    let window = match &a.window {
        Some(w) => w.parse::<Window>()?,
        None => Window::closed(crate::rational::q_int(-3), cone.mu0_exact()),
    };
    let poles = gamma_poles(&cone, &window);
    let real = a.z_im == 0.0;
    let result = json!({
        "cone": cone_json(&cone),
        "gamma": gamma,
        "is_pole": real && poles_contain(&cone, &re),
        "beta": beta,
        "poles": poles.iter().map(q_json).collect::<Vec<_>>(),
        "wallach": real && wallach_contains_exact(&re, &cone),
        "w_qd": if real { crate::cone::wqd_contains_exact(&re, &cone) } else { wqd_contains(z, &cone) },
    });
    let config = json!({ "cone": cone_json(&cone), "z": { "re": re.to_string(), "im": a.z_im }, "w": a.w, "window": a.window });
    Ok(Output::Report { config, checks: Vec::new(), result })
}

fn poles_contain(cone: &ConeStructure, x: &Q) -> bool {
    let w = Window::closed(x.clone(), x.clone());
    !gamma_poles(cone, &w).is_empty()
}

fn jack_cmd(ctx: &Ctx, a: &JackArgs) -> CliResult<Output> {
    let cone = ctx.cone(&a.cone)?;
    let lambda: Partition = a.partition.parse()?;
    if lambda.len() > cone.q {
        return usage(format!("partition {lambda} has more than q = {} parts", cone.q));
    }
    let alpha = match &a.alpha {
        Some(s) => parse_q(s)?,
        None => cone.alpha_exact(),
    };
    if alpha <= Q::zero() {
        return usage("alpha must be positive");
    }
    let expansion = jack_c_exact(&lambda, &alpha, cone.q);
    let spectrum = a.spectrum.clone().or_else(|| ctx.cfg.spectrum.clone());
    let value = match &spectrum {
        Some(xi) => {
            check_spectrum(xi, &cone)?;
            json!(jack_c_eval(&lambda, to_f64(&alpha), xi))
        }
        None => Value::Null,
    };
    let mut result = json!({
        "partition": lambda.to_string(),
        "alpha": q_json(&alpha),
        "monomial_expansion": expansion.iter().map(|(k, c)| (k.to_string(), Value::String(c.to_string()))).collect::<serde_json::Map<_, _>>(),
        "c_over_p": q_json(&c_over_p_exact(&lambda, &alpha)),
        "value": value,
    });
    if alpha == cone.alpha_exact() {
        result["z_at_identity"] = q_json(&zlambda_at_identity(&lambda, &cone)?);
    }
    let config = json!({ "cone": cone_json(&cone), "partition": lambda.to_string(), "alpha": alpha.to_string(), "spectrum": spectrum });
    Ok(Output::Report { config, checks: Vec::new(), result })
}

fn eval_cmd(ctx: &Ctx, a: &EvalArgs) -> CliResult<Output> {
    let cone = ctx.cone(&a.cone)?;
    let mu = Complex64::new(to_f64(&ctx.mu(&a.mu)?), a.mu_im);
    let xi = match a.spectrum.clone().or_else(|| ctx.cfg.spectrum.clone()) {
        Some(x) => x,
        None => return usage("missing --spectrum"),
    };
    check_spectrum(&xi, &cone)?;
    let ctl = ctx.truncation(a.max_degree)?;
    let series = BesselSeries::new(mu, &cone, ctl)?.eval_spectrum(&xi)?;
    let samples = ctx.samples(&a.sampling, 100_000);
    let seed = ctx.seed(&a.sampling);
    let mut config = json!({
        "cone": cone_json(&cone), "mu": complex_json(mu), "spectrum": xi, "method": a.method, "truncation": ctl,
    });
    let mut result = json!({
        "series": { "re": series.re, "im": series.im, "degree": series.degree, "last_block": series.last_block },
    });
    let mut checks = Vec::new();
    let mc = match a.method {
        Method::Series => None,
        Method::BallMc | Method::GroupMc => {
            if xi.iter().any(|&x| x < 0.0) {
                return usage("Monte Carlo methods need a nonnegative spectrum (argument x^2)");
            }
            let roots: Vec<f64> = xi.iter().map(|x| x.sqrt()).collect();
            let x = ConeElement::diag(cone.field, &roots);
            config["samples"] = json!(samples);
            config["seed"] = json!(seed);
            let (value, se) = if a.method == Method::BallMc {
                let e = laplace_ball_mc(mu, &x, &cone, samples, seed)?;
                result["ball_mc"] = serde_json::to_value(e).expect("serializable");
                (e.value(), e.std_error)
            } else {
                let group_mu = (cone.q * cone.d()) as f64 / 2.0;
                if (mu - group_mu).norm() > 1e-12 {
                    return usage(format!("group-mc evaluates mu = qd/2 = {group_mu} only"));
                }
                let e = group_integral_mc(x.matrix(), cone.field, samples, seed)?;
                result["group_mc"] = serde_json::to_value(e).expect("serializable");
                (e.value(), e.std_error)
            };
            Some((value, se))
        }
    };
    if let Some((value, se)) = mc {
        let diff = (value - series.value()).norm();
        checks.push(Check::new("mc-agrees-with-series", diff <= 3.0 * se, format!("|mc - series| = {diff:e}, 3 SE = {:e}", 3.0 * se)));
    }
    Ok(Output::Report { config, checks, result })
}

fn sampler_from(cone: &ConeStructure, mu: Option<&Q>, nu: Option<&Q>, p: Option<usize>, pt: Option<usize>) -> CliResult<BetaSampler> {
    match (p, pt, mu, nu) {
        (Some(p), Some(pt), _, _) => Ok(BetaSampler::singular(p, pt, cone)?),
        (_, _, Some(m), Some(n)) => Ok(BetaSampler::density(to_f64(m), to_f64(n), cone)?),
        _ => usage("give --mu and --nu, or --p and --pt"),
    }
}

fn sample_cmd(ctx: &Ctx, a: &SampleArgs) -> CliResult<Output> {
    let cone = ctx.cone(&a.cone)?;
    let singular = a.p.is_some();
    let (mu_q, nu_q) = if singular { (None, None) } else { (Some(ctx.mu(&a.mu)?), Some(ctx.nu(&a.nu)?)) };
    let sampler = sampler_from(&cone, mu_q.as_ref(), nu_q.as_ref(), a.p, a.pt)?;
    let n = ctx.samples(&a.sampling, 10_000);
    let seed = ctx.seed(&a.sampling);
    let format = a.format.or(ctx.cfg.format).unwrap_or(Format::Json);
    if format == Format::Csv {
        let mut text = String::new();
        let header: Vec<String> = (1..=cone.q).map(|i| format!("lambda{i}")).collect();
        text.push_str(&header.join(","));
        text.push('\n');
        for s in sampler.sample_n(n, seed) {
            let row: Vec<String> = s.eigenvalues().iter().map(|e| format!("{e:.17e}")).collect();
            text.push_str(&row.join(","));
            text.push('\n');
        }
        return Ok(Output::Raw { text, passed: true });
    }
    let (mu, nu) = sampler.params();
    let lambdas: Vec<Partition> = partitions_up_to(2, cone.q).into_iter().filter(|l| !l.is_empty()).collect();
    let alpha = cone.alpha();
    let parts = run_chunks(n, seed, |rng, count| {
        let mut st = vec![Stats::default(); lambdas.len()];
        for _ in 0..count {
            let s = sampler.sample(rng);
            for (t, l) in st.iter_mut().zip(&lambdas) {
                t.push(jack_c_eval(l, alpha, s.eigenvalues()));
            }
        }
        st
    });
    let tot = crate::mc::merge_all(&parts);
    let (mu_exact, nu_exact) = match (mu_q, nu_q) {
        (Some(m), Some(v)) => (m, v),
        _ => (Q::from_float(mu).expect("finite"), Q::from_float(nu).expect("finite")),
    };
    let mf = MomentFunctional::new(mu_exact, nu_exact, &cone);
    let mut checks = Vec::new();
    let mut moments = Vec::new();
    for (l, st) in lambdas.iter().zip(tot) {
        let exact = to_f64(&mf.value(l)?);
        let e = Estimate::from(st);
        let ok = (e.value - exact).abs() <= 4.0 * e.std_error;
        checks.push(Check::new(format!("moment {l}"), ok, format!("empirical {} (SE {:e}), exact {exact}", e.value, e.std_error)));
        moments.push(json!({ "partition": l.to_string(), "empirical": e, "exact": exact }));
    }
    let config = json!({
        "cone": cone_json(&cone), "mu": mu, "nu": nu, "p": a.p, "pt": a.pt, "samples": n, "seed": seed,
    });
    Ok(Output::Report { config, checks, result: json!({ "moments": moments }) })
}

fn moment_cmd(ctx: &Ctx, a: &MomentArgs) -> CliResult<Output> {
    let cone = ctx.cone(&a.cone)?;
    let mu = ctx.mu(&a.mu)?;
    let nu = ctx.nu(&a.nu)?;
    let lambdas: Vec<Partition> = if a.partitions.is_empty() {
        partitions_up_to(a.degree.or(ctx.cfg.degree).unwrap_or(3), cone.q)
    } else {
        a.partitions.iter().map(|s| s.parse()).collect::<crate::Result<_>>()?
    };
    let mf = MomentFunctional::new(mu.clone(), nu.clone(), &cone);
    let mut rows = Vec::new();
    for l in &lambdas {
        if l.len() > cone.q {
            return usage(format!("partition {l} has more than q = {} parts", cone.q));
        }
        let entry = match mf.value(l) {
            Ok(v) => json!({ "partition": l.to_string(), "moment": q_json(&v), "pochhammer_mu": pochhammer_gen_exact(&mu, l, &cone).to_string() }),
            Err(Error::MomentPole { .. }) => json!({ "partition": l.to_string(), "moment": Value::Null, "pole": true }),
            Err(e) => return Err(e.into()),
        };
        rows.push(entry);
    }
    let config = json!({ "cone": cone_json(&cone), "mu": mu.to_string(), "nu": nu.to_string(), "partitions": lambdas.iter().map(|l| l.to_string()).collect::<Vec<_>>() });
    Ok(Output::Report { config, checks: Vec::new(), result: json!({ "moments": rows }) })
}

fn classify_cmd(ctx: &Ctx, a: &ClassifyArgs) -> CliResult<Output> {
    let cone = ctx.cone(&a.cone)?;
    let mu = ctx.mu(&a.mu)?;
    let nu = ctx.nu(&a.nu)?;
    let dmax = a.dmax.or(ctx.cfg.dmax).unwrap_or(8);
    dichotomy_hypothesis(&mu, &nu, &cone)?;
    let point = classify_point(&mu, &nu, &cone, dmax)?;
    let checks = vec![Check::new(
        "no-witness-at-wallach-point",
        !point.hard_failure(),
        if point.hard_failure() { "negative witness at a Wallach point" } else { "consistent" },
    )];
    let result = json!({
        "wallach": point.wallach,
        "verdict": verdict_json(&point.verdict),
        "inconclusive": point.inconclusive(),
        "note": POSITIVITY_NOTE,
    });
    let config = json!({ "cone": cone_json(&cone), "mu": mu.to_string(), "nu": nu.to_string(), "dmax": dmax });
    Ok(Output::Report { config, checks, result })
}

fn product_cmd(ctx: &Ctx, a: &ProductArgs) -> CliResult<Output> {
    let cone = ctx.cone(&a.cone)?;
    let mu = ctx.mu(&a.mu)?;
    let nu = ctx.nu(&a.nu)?;
    let degree = a.degree.or(ctx.cfg.degree).unwrap_or(4);
    let disc = product_relation_check(&mu, &nu, &cone, degree)?;
    let checks = vec![Check::new("exact-discrepancy-zero", disc.is_zero(), format!("max discrepancy {disc}"))];
    let config = json!({ "cone": cone_json(&cone), "mu": mu.to_string(), "nu": nu.to_string(), "degree": degree });
    Ok(Output::Report { config, checks, result: json!({ "max_discrepancy": q_json(&disc) }) })
}

fn default_spectra(q: usize) -> Vec<Vec<f64>> {
    [[0.5, 0.2, 0.1], [2.0, 0.5, 0.25], [5.0, 1.0, 0.5]].iter().map(|r| r[..q].to_vec()).collect()
}

fn sonine_cmd(ctx: &Ctx, a: &SonineArgs) -> CliResult<Output> {
    let cone = ctx.cone(&a.cone)?;
    let singular = a.p.is_some();
    let (mu, nu) = if singular {
        let h = crate::rational::q_frac(cone.d() as i64, 2);
        let p = crate::rational::q_int(a.p.unwrap_or(0) as i64);
        let pt = crate::rational::q_int(a.pt.unwrap_or(0) as i64);
        (&p * &h, &pt * &h)
    } else {
        (ctx.mu(&a.mu)?, ctx.nu(&a.nu)?)
    };
    let spectra: Vec<Vec<f64>> = if !a.spectra.is_empty() {
        a.spectra.iter().map(|s| parse_spectrum(s)).collect::<CliResult<_>>()?
    } else if let Some(s) = &ctx.cfg.spectrum {
        vec![s.clone()]
    } else {
        default_spectra(cone.q)
    };
    for xi in &spectra {
        check_spectrum(xi, &cone)?;
        if xi.iter().any(|&x| x < 0.0) {
            return usage("r must lie in the closed cone");
        }
    }
    let degree = a.degree.or(ctx.cfg.degree).unwrap_or(8);
    let n = ctx.samples(&a.sampling, 100_000);
    let seed = ctx.seed(&a.sampling);
    let ctl = ctx.truncation(None)?;
    let (mf, nf) = (to_f64(&mu), to_f64(&nu));
    let mut checks = Vec::new();
    let mut result = json!({});

    let sampler = if singular {
        Some(BetaSampler::singular(a.p.unwrap_or(0), a.pt.unwrap_or(0), &cone)?)
    } else if mf > cone.mu0() && nf > cone.mu0() {
        Some(BetaSampler::density(mf, nf, &cone)?)
    } else {
        None
    };
    if let Some(sampler) = &sampler {
        let mut rows = Vec::new();
        for xi in &spectra {
            let r = ConeElement::diag(cone.field, xi);
            let rep = sonine_mc_with_sampler(sampler, &r, &cone, n, seed, ctl)?;
            let ok = rep.passes(3.0, 1e-2);
            checks.push(Check::new(format!("mc r={xi:?}"), ok, format!("residual {:e}, SE {:e}", rep.residual, rep.std_error)));
            rows.push(json!({ "spectrum": xi, "report": rep }));
        }
        result["monte_carlo"] = json!(rows);
    }
    if cone.q == 1 && mf > 0.0 && nf > 0.0 {
        let zs: Vec<f64> = (0..=100).map(|i| i as f64 / 10.0).collect();
        let rep = sonine_rank1_quadrature(mf - 1.0, nf, &zs)?;
        checks.push(Check::new("rank1-quadrature", rep.max_residual < 1e-8, format!("max residual {:e}", rep.max_residual)));
        result["rank1_quadrature"] = json!({ "alpha": rep.alpha, "beta": rep.beta, "max_residual": rep.max_residual });
    }
    match sonine_extended_polynomial(&mu, &nu, &cone, &spectra, degree) {
        Ok(rep) => {
            checks.push(Check::new("polynomial-identity", rep.exact_zero, format!("exact discrepancy {}", rep.exact_discrepancy)));
            result["polynomial_identity"] = serde_json::to_value(&rep).expect("serializable");
        }
        Err(e @ (Error::MomentPole { .. } | Error::PochhammerZero { .. })) => {
            result["polynomial_identity"] = json!({ "skipped": e.to_string() });
        }
        Err(e) => return Err(e.into()),
    }
    if cone.q == 1 {
        if let Some(k) = a.k.or(ctx.cfg.k) {
            let mut rows = Vec::new();
            let mut all_zero = true;
            for xi in &spectra {
                let r = Q::from_float(xi[0]).expect("finite");
                let diff = sonine_extended_rank1(&mu, &nu, k, &r, degree)?;
                all_zero &= diff.is_zero();
                rows.push(json!({ "r": xi[0], "difference": diff.to_string() }));
            }
            checks.push(Check::new("rank1-distribution", all_zero, "exact difference of truncations"));
            result["rank1_distribution"] = json!({ "k": k, "rows": rows });
        }
    }
    if checks.is_empty() {
        return usage("no applicable check for these parameters");
    }
    let mut config = json!({
        "cone": cone_json(&cone), "mu": mu.to_string(), "nu": nu.to_string(), "spectra": spectra, "degree": degree,
        "truncation": ctl,
    });
    if sampler.is_some() {
        config["samples"] = json!(n);
        config["seed"] = json!(seed);
        config["p"] = json!(a.p);
        config["pt"] = json!(a.pt);
    }
    Ok(Output::Report { config, checks, result })
}

fn compose_cmd(ctx: &Ctx, a: &ComposeArgs) -> CliResult<Output> {
    let cone = ctx.cone(&a.cone)?;
    let mu = ctx.mu(&a.mu)?;
    let nu1 = match &a.nu1 {
        Some(s) => parse_q(s)?,
        None => ctx.nu(&None)?,
    };
    let nu2 = match a.nu2.clone().or_else(|| ctx.cfg.nu2.as_ref().map(Param::text)) {
        Some(s) => parse_q(&s)?,
        None => return usage("missing --nu2"),
    };
    let degree = a.degree.or(ctx.cfg.degree).unwrap_or(3);
    let n = ctx.samples(&a.sampling, 100_000);
    let seed = ctx.seed(&a.sampling);
    let rows = composition_check(&mu, &nu1, &nu2, &cone, n, seed, degree)?;
    let checks = rows
        .iter()
        .map(|r| {
            Check::new(
                format!("moment {}", r.partition),
                r.within(3.0),
                format!("empirical {} (SE {:e}), exact {}", r.empirical.value, r.empirical.std_error, r.exact),
            )
        })
        .collect();
    let config = json!({
        "cone": cone_json(&cone), "mu": mu.to_string(), "nu1": nu1.to_string(), "nu2": nu2.to_string(),
        "degree": degree, "samples": n, "seed": seed,
    });
    Ok(Output::Report { config, checks, result: json!({ "moments": rows }) })
}

fn theorem_b_cmd(ctx: &Ctx, a: &TheoremBArgs) -> CliResult<Output> {
    let cone = ctx.cone(&a.cone)?;
    let mu = ctx.mu(&a.mu)?;
    let nus = ctx.nu_list(&a.nu)?;
    let dmax = a.dmax.or(ctx.cfg.dmax).unwrap_or(8);
    for nu in &nus {
        dichotomy_hypothesis(&mu, nu, &cone)?;
    }
    let table = crate::sonine::theorem_b_table(&cone, &mu, &nus, dmax)?;
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            json!({
                "nu": q_json(&r.nu),
                "wallach": r.wallach,
                "verdict": verdict_json(&r.verdict),
                "inconclusive": r.inconclusive(),
                "hard_failure": r.hard_failure(),
            })
        })
        .collect();
    let checks = table
        .rows
        .iter()
        .map(|r| {
            let label = match (r.wallach, r.verdict.is_witness()) {
                (true, false) => "Wallach point, no obstruction",
                (true, true) => "Wallach point with a negative witness",
                (false, true) => "outside the Wallach set, negative witness",
                (false, false) => "outside the Wallach set, inconclusive",
            };
            Check::new(format!("nu = {}", r.nu), !r.hard_failure(), label)
        })
        .collect();
    let config = json!({
        "cone": cone_json(&cone), "mu": mu.to_string(), "nu": nus.iter().map(|n| n.to_string()).collect::<Vec<_>>(), "dmax": dmax,
    });
    Ok(Output::Report { config, checks, result: json!({ "rows": rows, "note": POSITIVITY_NOTE }) })
}

fn load_config(path: &Option<PathBuf>) -> CliResult<RunConfig> {
    let Some(path) = path else { return Ok(RunConfig::default()) };
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let cfg: RunConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if let Some(t) = &cfg.truncation {
        t.validate()?;
    }
    Ok(cfg)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gamma(_) => "gamma",
        Command::Jack(_) => "jack",
        Command::EvalBessel(_) => "eval-bessel",
        Command::SampleBeta(_) => "sample-beta",
        Command::Moment(_) => "moment",
        Command::ClassifyPositivity(_) => "classify-positivity",
        Command::CheckProductRelation(_) => "check-product-relation",
        Command::SonineCheck(_) => "sonine-check",
        Command::ComposeCheck(_) => "compose-check",
        Command::TheoremB(_) => "theorem-b",
    }
}

fn dispatch(ctx: &Ctx, c: &Command) -> CliResult<Output> {
    match c {
        Command::Gamma(a) => gamma_cmd(ctx, a),
        Command::Jack(a) => jack_cmd(ctx, a),
        Command::EvalBessel(a) => eval_cmd(ctx, a),
        Command::SampleBeta(a) => sample_cmd(ctx, a),
        Command::Moment(a) => moment_cmd(ctx, a),
        Command::ClassifyPositivity(a) => classify_cmd(ctx, a),
        Command::CheckProductRelation(a) => product_cmd(ctx, a),
        Command::SonineCheck(a) => sonine_cmd(ctx, a),
        Command::ComposeCheck(a) => compose_cmd(ctx, a),
        Command::TheoremB(a) => theorem_b_cmd(ctx, a),
    }
}

/// Runs a parsed command line, writing the report to `out` (or `--output`)
/// and diagnostics to `err`. Returns the exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cfg = match load_config(&cli.config) {
        Ok(c) => c,
        Err(e) => return report_error(e, err),
    };
    let ctx = Ctx { cfg };
    let jobs = cli.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return report_error(CliError::Usage("--jobs must be positive".into()), err);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(p) => p,
        Err(e) => return report_error(CliError::Usage(format!("thread pool: {e}")), err),
    };
    let outcome = pool.install(|| dispatch(&ctx, &cli.command));
    let (text, passed) = match outcome {
        Ok(Output::Raw { text, passed }) => (text, passed),
        Ok(Output::Report { config, checks, result }) => {
            let passed = checks.iter().all(|c| c.passed);
            let report = Report {
                tool: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                command: command_name(&cli.command),
                timestamp: if cli.no_timestamp {
                    None
                } else {
                    SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
                },
                config,
                passed,
                checks,
                result,
            };
            let mut s = serde_json::to_string_pretty(&report).expect("report is serializable");
            s.push('\n');
            (s, passed)
        }
        Err(e) => return report_error(e, err),
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, text.as_bytes()).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return EXIT_FAILURE;
    }
    if passed {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn report_error(e: CliError, err: &mut dyn Write) -> i32 {
    match e {
        CliError::Usage(m) => {
            let _ = writeln!(err, "usage error: {m}");
            EXIT_USAGE
        }
        CliError::Numeric(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILURE
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            code
        }
    }
}

/// Entry point of the `sonine` binary.
pub fn main_exit_code() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["sonine", "--no-timestamp", "--jobs", "1"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn gamma_value() {
        let (code, out, _) = call(&["gamma", "--q", "2", "--field", "R", "--z", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let g = v["result"]["gamma"]["re"].as_f64().unwrap();
        assert!((g - 2.221441469079183).abs() < 1e-9, "{g}");
        assert!(v.get("timestamp").is_none());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["gamma", "--z", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["gamma", "--q", "9", "--z", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["no-such-command"]).0, EXIT_USAGE);
        assert_eq!(call(&["classify-positivity", "--q", "2", "--mu", "3", "--nu", "0.25"]).0, EXIT_USAGE);
    }

    #[test]
    fn negative_nu_accepted() {
        let (code, out, err) = call(&["moment", "--q", "1", "--mu", "3", "--nu", "-1/2", "--partition", "2"]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("\"exact\": \"48/35\""), "{out}");
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let dir = std::env::temp_dir().join(format!("sonine-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let bad = dir.join("bad.json");
        fs::write(&bad, r#"{"q": 2, "colour": "blue"}"#).unwrap();
        let (code, _, err) = call(&["--config", bad.to_str().unwrap(), "gamma", "--z", "2"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("colour"));
        let good = dir.join("good.json");
        fs::write(&good, r#"{"q": 2, "field": "C", "mu": "3", "nu": 1}"#).unwrap();
        let (code, out, _) = call(&["--config", good.to_str().unwrap(), "check-product-relation"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"field\": \"C\""));
    }
}
