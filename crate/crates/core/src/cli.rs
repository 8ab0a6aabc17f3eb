//! The `transfer-lab` command line: one verb per experiment, a JSON report
//! on stdout (or `--out`), exit code 0 on success, 1 on a typed computation
//! error, 2 on a usage error.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use rand::Rng;
use serde_json::{json, Map, Value};

use crate::acceptance;
use crate::corpus::{random_function, random_point, random_symsq_data, rng, CorpusShape};
use crate::error::Error;
use crate::json::{self, Kernel};
use crate::jx;
use crate::local_field::{AdditiveCharacter, FieldParams, MultiplicativeCharacter, PAdicNumber};
use crate::oracles::symsq_brute_force;
use crate::schwartz::{
    exact, fourier_transform, inverse_fourier_transform, mellin_transform, mellin_transform_exact,
    oscillatory_integral, Ball, LaurentPoly, RationalFnT, SchwartzFunction,
};
use crate::spectra::{self, SatakeParameter};
use crate::transfer::{
    inverse_transfer_g, inverse_transfer_t, transfer_g, transfer_sym_square, transfer_t, SymSqKernel, XTestData,
    IMAGE_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    TateZeta,
    Fourier,
    Mellin,
    Oscillate,
    Transfer,
    InverseTransfer,
    SymsqTransfer,
    JxVerify,
    Spherical,
    Whittaker,
    PeriodCheck,
    PlancherelCheck,
    Accept,
}

#[derive(Debug, Parser)]
#[command(name = "transfer-lab", version, about = "Rank-one transfer operators and unramified spectral checks")]
pub struct Args {
    #[arg(value_enum)]
    pub verb: Verb,
    #[arg(long)]
    pub prime: Option<u64>,
    /// Unit digits carried by p-adic numbers.
    #[arg(long, default_value_t = 10)]
    pub precision: u32,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long)]
    pub dprime: Option<u32>,
    /// Satake parameter as `RE,IM`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Satake parameters as `RE,IM;RE,IM;...`.
    #[arg(long, allow_hyphen_values = true)]
    pub alphas: Option<String>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<i64>,
    #[arg(long, default_value_t = 60)]
    pub trunc: u32,
    #[arg(long, default_value_t = 2048)]
    pub quad: usize,
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub identity: Option<String>,
    #[arg(long)]
    pub all: bool,
    /// Include wall-clock times, which makes output nondeterministic.
    #[arg(long)]
    pub timings: bool,
}

/// What a run produced: exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

struct Report {
    result: Value,
    residuals: Map<String, Value>,
    pass: bool,
}

const DEFAULT_PRIME: u64 = 5;

impl Verb {
    fn name(self) -> String {
        self.to_possible_value().unwrap().get_name().to_string()
    }

    fn default_tolerance(self) -> f64 {
        match self {
            Verb::PeriodCheck => 1e-8,
            Verb::PlancherelCheck => 1e-6,
            Verb::InverseTransfer => IMAGE_TOL,
            _ => 1e-10,
        }
    }
}

fn parse_complex(s: &str) -> Run<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| x.parse::<f64>().map_err(|_| Failure::Usage(format!("cannot read `{s}` as RE,IM")));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(Failure::Usage(format!("cannot read `{s}` as RE,IM"))),
    }
}

struct Context {
    args: Args,
    config: Map<String, Value>,
}

impl Context {
    fn tolerance(&self) -> f64 {
        self.args.tolerance.unwrap_or_else(|| self.args.verb.default_tolerance())
    }

    fn input(&self) -> Run<Option<Value>> {
        let Some(path) = &self.args.input else { return Ok(None) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        let v = serde_json::from_str(&text)
            .map_err(|e| Failure::Usage(format!("{} is not valid JSON: {e}", path.display())))?;
        Ok(Some(v))
    }

    fn params_for(&mut self, input: Option<&Value>) -> Run<FieldParams> {
        let params = match input {
            Some(v) => json::params_from(v, self.args.prime, self.args.precision)?,
            None => FieldParams::new(self.args.prime.unwrap_or(DEFAULT_PRIME), self.args.precision)?,
        };
        self.config.insert("prime".into(), json!(params.p()));
        self.config.insert("precision".into(), json!(params.precision()));
        self.config.insert(
            "conventions".into(),
            json!({"psi_conductor": 0, "multiplicative_measure": "vol(Z_p^x) = 1", "residue_field": "q = p"}),
        );
        Ok(params)
    }

    fn seeded_function(&self, params: FieldParams) -> SchwartzFunction {
        random_function(&mut rng(self.args.seed), params, &CorpusShape::default())
    }

    fn alpha(&self) -> Run<Complex64> {
        match &self.args.alpha {
            Some(a) => parse_complex(a),
            None => Err(Failure::Usage("--alpha RE,IM is required".into())),
        }
    }

    fn kernel(&self, params: FieldParams, input: Option<&Value>) -> Run<Kernel> {
        match (self.args.d, self.args.dprime) {
            (Some(d), None) => Ok(Kernel::G(crate::transfer::TransferKernelG::new(d)?)),
            (Some(d), Some(dp)) => Ok(Kernel::T(crate::transfer::TransferKernelT::new(d, dp)?)),
            (None, Some(_)) => Err(Failure::Usage("--dprime needs --d".into())),
            (None, None) => match input.and_then(|v| v.get("kernel")) {
                Some(k) => Ok(json::kernel_from(params, k)?),
                None => Err(Failure::Usage("give --d [--dprime] or a \"kernel\" in the input".into())),
            },
        }
    }
}

fn residuals(pairs: &[(&str, f64)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), json!(v))).collect()
}

/// Rewrites every integral float as an integer.
fn integralize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => json::number(n.as_f64().unwrap()),
        Value::Array(a) => Value::Array(a.into_iter().map(integralize).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, integralize(v))).collect()),
        other => other,
    }
}

fn tate_zeta(ctx: &mut Context) -> Run<Report> {
    let input = ctx.input()?;
    let params = ctx.params_for(input.as_ref())?;
    let basic = SchwartzFunction::indicator(Ball::around_zero(params, 0));
    let phi = match &input {
        Some(v) => json::schwartz_from(params, v)?,
        None => basic.clone(),
    };
    let z = mellin_transform_exact(&phi, &MultiplicativeCharacter::trivial(params))?;
    let mut pass = true;
    if phi == basic {
        let euler = RationalFnT::new(
            LaurentPoly::constant(exact(1, 1)),
            LaurentPoly::from_coeffs(0, vec![exact(1, 1), exact(-1, 1)]),
        )?;
        pass = z == euler;
    }
    Ok(Report { result: json!({"rational_function": z.to_json()}), residuals: Map::new(), pass })
}

fn fourier(ctx: &mut Context) -> Run<Report> {
    let input = ctx.input()?;
    let params = ctx.params_for(input.as_ref())?;
    let phi = match &input {
        Some(v) => json::schwartz_from(params, v)?,
        None => ctx.seeded_function(params),
    };
    let psi = AdditiveCharacter::standard(params);
    let hat = fourier_transform(&phi, &psi)?;
    let back = inverse_fourier_transform(&hat, &psi)?;
    let r = back.sup_distance(&phi);
    Ok(Report {
        result: json!({"input": json::schwartz(&phi), "transform": json::schwartz(&hat)}),
        residuals: residuals(&[("inversion", r)]),
        pass: r <= ctx.tolerance(),
    })
}

fn character_or_trivial(params: FieldParams, v: Option<&Value>, key: &str) -> Run<MultiplicativeCharacter> {
    Ok(match v.and_then(|v| v.get(key)) {
        Some(c) => json::character_from(params, c)?,
        None => MultiplicativeCharacter::trivial(params),
    })
}

fn mellin(ctx: &mut Context) -> Run<Report> {
    let input = ctx.input()?;
    let params = ctx.params_for(input.as_ref())?;
    let phi = match &input {
        Some(v) => json::schwartz_from(params, v)?,
        None => ctx.seeded_function(params),
    };
    let chi = character_or_trivial(params, input.as_ref(), "character")?;
    let m = mellin_transform(&phi, &chi)?;
    Ok(Report { result: json!({"rational_function": m.to_json()}), residuals: Map::new(), pass: true })
}

fn oscillate(ctx: &mut Context) -> Run<Report> {
    let input = ctx.input()?;
    let params = ctx.params_for(input.as_ref())?;
    let phi = match &input {
        Some(v) => json::schwartz_from(params, v)?,
        None => ctx.seeded_function(params),
    };
    let c = match input.as_ref().and_then(|v| v.get("c")) {
        Some(c) => json::padic_from(params, c)?,
        None => PAdicNumber::one(params),
    };
    let weight = character_or_trivial(params, input.as_ref(), "weight")?;
    let psi = AdditiveCharacter::standard(params);
    let out = oscillatory_integral(&phi, &c, &weight, &psi)?;
    Ok(Report {
        result: json!({"value": json::complex(out.value), "depth": out.depth, "cells": out.cells.to_string()}),
        residuals: Map::new(),
        pass: true,
    })
}

fn transfer(ctx: &mut Context) -> Run<Report> {
    let input = ctx.input()?;
    let params = ctx.params_for(input.as_ref())?;
    let kernel = ctx.kernel(params, input.as_ref())?;
    ctx.config.insert("kernel".into(), json::kernel(&kernel));
    let phi = match &input {
        Some(v) => json::schwartz_from(params, v)?,
        None => ctx.seeded_function(params),
    };
    let psi = AdditiveCharacter::standard(params);
    let (output, back) = match &kernel {
        Kernel::G(k) => {
            let f = transfer_g(&phi, k, &psi)?;
            let back = inverse_transfer_g(&f, k, &psi)?;
            (json::x_data(&XTestData::compact(f)), back)
        }
        Kernel::T(k) => {
            let x = transfer_t(&phi, k, &psi)?;
            let back = inverse_transfer_t(&x, k, &psi)?;
            (json::x_data(&x), back)
        }
        Kernel::SymSq(_) => return Err(Failure::Usage("use symsq-transfer for the symmetric-square kernel".into())),
    };
    let r = back.sup_distance(&phi);
    Ok(Report {
        result: json!({"input": json::schwartz(&phi), "output": output}),
        residuals: residuals(&[("round_trip", r)]),
        pass: r <= ctx.tolerance(),
    })
}

fn inverse_transfer(ctx: &mut Context) -> Run<Report> {
    let input = ctx.input()?;
    let params = ctx.params_for(input.as_ref())?;
    let kernel = ctx.kernel(params, input.as_ref())?;
    ctx.config.insert("kernel".into(), json::kernel(&kernel));
    let psi = AdditiveCharacter::standard(params);
    let (x, phi) = match &kernel {
        Kernel::G(k) => {
            let x = match &input {
                Some(v) => json::x_data_from(params, v)?,
                None => XTestData::compact(transfer_g(&ctx.seeded_function(params), k, &psi)?),
            };
            let phi = inverse_transfer_g(&x.f, k, &psi)?;
            let again = transfer_g(&phi, k, &psi)?;
            (x, (phi, again))
        }
        Kernel::T(k) => {
            let x = match &input {
                Some(v) => json::x_data_from(params, v)?,
                None => transfer_t(&ctx.seeded_function(params), k, &psi)?,
            };
            let phi = inverse_transfer_t(&x, k, &psi)?;
            let again = transfer_t(&phi, k, &psi)?.f;
            (x, (phi, again))
        }
        Kernel::SymSq(_) => return Err(Failure::Usage("the symmetric-square operator has no inverse here".into())),
    };
    let (phi, again) = phi;
    let scale = x.f.terms().iter().map(|t| t.1.norm()).fold(1.0, f64::max);
    let r = again.sup_distance(&x.f) / scale;
    Ok(Report {
        result: json!({"kuznetsov": json::schwartz(&phi)}),
        residuals: residuals(&[("image", r)]),
        pass: r <= ctx.tolerance(),
    })
}

fn symsq_transfer(ctx: &mut Context) -> Run<Report> {
    let input = ctx.input()?;
    let params = ctx.params_for(input.as_ref())?;
    let mut r = rng(ctx.args.seed);
    let data = match &input {
        Some(v) => json::symsq_data_from(params, v)?,
        None => random_symsq_data(&mut r, params, &CorpusShape::default()),
    };
    let kernel = match input.as_ref().and_then(|v| v.get("kernel")) {
        Some(k) => match json::kernel_from(params, k)? {
            Kernel::SymSq(s) => s,
            _ => return Err(Failure::Usage("symsq-transfer needs a kernel of type \"symsq\"".into())),
        },
        None => SymSqKernel::new(MultiplicativeCharacter::unramified_quadratic(params), None)?,
    };
    ctx.config.insert("kernel".into(), json::kernel(&Kernel::SymSq(kernel.clone())));
    let psi = AdditiveCharacter::standard(params);
    let out = transfer_sym_square(&data, &kernel, &psi)?;
    let (oracle, inversion) = symsq_residuals(&out, &data, &kernel, &psi, &mut r)?;
    Ok(Report {
        result: json!({"input": json::symsq_data(&data), "output": json::x_data(&out)}),
        residuals: residuals(&[("oracle", oracle), ("inversion", inversion)]),
        pass: oracle <= ctx.tolerance() && inversion == 0.0,
    })
}

/// Largest deviation from the double-sum oracle at random points of the
/// window, and from invariance under `a -> 1/a` in `t = a + 1/a`.
pub(crate) fn symsq_residuals(
    out: &XTestData,
    data: &crate::transfer::SymSqTestData,
    kernel: &SymSqKernel,
    psi: &AdditiveCharacter,
    r: &mut impl Rng,
) -> crate::Result<(f64, f64)> {
    let params = data.params;
    let mut oracle: f64 = 0.0;
    if let Some((lo, hi)) = out.window {
        for _ in 0..3 {
            let t = random_point(r, params, lo, hi);
            oracle = oracle.max((out.f.evaluate(&t)? - symsq_brute_force(data, kernel, psi, &t)?).norm());
        }
    }
    let mut inversion: f64 = 0.0;
    for _ in 0..10 {
        let a = random_point(r, params, -3, 3);
        let b = a.inv()?;
        let lift = |x: &PAdicNumber, y: &PAdicNumber| -> crate::Result<Complex64> { out.f.evaluate(&x.add(y)?) };
        inversion = inversion.max((lift(&a, &b)? - lift(&b, &a)?).norm());
    }
    Ok((oracle, inversion))
}

fn jx_verify(ctx: &mut Context) -> Run<Report> {
    let certs = match (&ctx.args.identity, ctx.args.all) {
        (Some(_), true) => return Err(Failure::Usage("--identity and --all are exclusive".into())),
        (Some(name), false) => vec![jx::verify_identity(name)?],
        (None, _) => jx::verify_all(),
    };
    let list: Vec<Value> = certs
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("name".into(), json!(c.name));
            m.insert("pass".into(), json!(c.pass));
            if !c.witnesses.is_empty() {
                m.insert("witness".into(), json!(c.witnesses.join("; ")));
            }
            if ctx.args.timings {
                m.insert("ms".into(), json!(c.elapsed_ms));
            }
            Value::Object(m)
        })
        .collect();
    let failing = certs.iter().filter(|c| !c.pass).count();
    Ok(Report {
        result: Value::Array(list),
        residuals: residuals(&[("failing", failing as f64)]),
        pass: failing == 0,
    })
}

fn satake(ctx: &mut Context, q: f64) -> Run<SatakeParameter> {
    let alpha = ctx.alpha()?;
    ctx.config.insert("alpha".into(), json::complex(alpha));
    ctx.config.insert("q".into(), json!(q));
    Ok(SatakeParameter::new(alpha, q)?)
}

fn spherical(ctx: &mut Context) -> Run<Report> {
    let q = ctx.args.q.unwrap_or(DEFAULT_PRIME as f64);
    let s = satake(ctx, q)?;
    let n = ctx.args.n.unwrap_or(0);
    if n < 0 {
        return Err(Failure::Usage("spherical needs --n >= 0".into()));
    }
    let n = n as u32;
    ctx.config.insert("n".into(), json!(n));
    let value = spectra::spherical_function(&s, n);
    let hecke = spectra::spherical_hecke_residual(&s, n);
    let sphere = (value - spectra::spherical_sphere_average(&s, n)).norm();
    let tol = ctx.tolerance();
    Ok(Report {
        result: json!({"value": json::complex(value), "degenerate": s.is_degenerate()}),
        residuals: residuals(&[("hecke", hecke), ("sphere_average", sphere)]),
        pass: hecke <= tol && sphere <= tol,
    })
}

fn whittaker(ctx: &mut Context) -> Run<Report> {
    let params = ctx.params_for(None)?;
    if let Some(q) = ctx.args.q {
        if q != params.q() as f64 {
            return Err(Failure::Usage("whittaker takes q from --prime".into()));
        }
    }
    let s = satake(ctx, params.q() as f64)?;
    let n = ctx.args.n.unwrap_or(0);
    ctx.config.insert("n".into(), json!(n));
    let value = spectra::whittaker_function(&s, n);
    let hecke = spectra::whittaker_hecke_residual(&s, n, &AdditiveCharacter::standard(params))?;
    Ok(Report {
        result: json!({"value": json::complex(value), "degenerate": s.is_degenerate()}),
        residuals: residuals(&[("hecke", hecke)]),
        pass: hecke <= ctx.tolerance(),
    })
}

fn period_check(ctx: &mut Context) -> Run<Report> {
    let q = ctx.args.q.unwrap_or(DEFAULT_PRIME as f64);
    let alphas = match &ctx.args.alphas {
        Some(list) => list.split(';').filter(|s| !s.trim().is_empty()).map(parse_complex).collect::<Run<Vec<_>>>()?,
        None => spectra::reference_alphas(),
    };
    ctx.config.insert("q".into(), json!(q));
    ctx.config.insert("trunc".into(), json!(ctx.args.trunc));
    ctx.config.insert("alphas".into(), Value::Array(alphas.iter().map(|a| json::complex(*a)).collect()));
    let check = spectra::period_check(q, ctx.args.trunc, &alphas)?;
    Ok(Report {
        result: json!({
            "value": json::complex(check.constant),
            "ratios": check.ratios.iter().map(|r| json::complex(*r)).collect::<Vec<_>>(),
            "certified_tail": check.certified_tail,
        }),
        residuals: residuals(&[("max_relative_deviation", check.max_relative_deviation)]),
        pass: check.max_relative_deviation <= ctx.tolerance(),
    })
}

fn plancherel_check(ctx: &mut Context) -> Run<Report> {
    let q = ctx.args.q.unwrap_or(DEFAULT_PRIME as f64);
    ctx.config.insert("q".into(), json!(q));
    ctx.config.insert("quad".into(), json!(ctx.args.quad));
    let check = spectra::plancherel_inversion_check(q, ctx.args.quad)?;
    Ok(Report {
        result: json!({"mass": check.mass, "target": check.target}),
        residuals: residuals(&[("residual", check.residual), ("refined_residual", check.refined_residual)]),
        pass: check.residual <= ctx.tolerance(),
    })
}

fn accept(ctx: &mut Context, stderr: &mut String) -> Run<Report> {
    let rows = acceptance::run_all();
    for row in &rows {
        stderr.push_str(&row.to_string());
        stderr.push('\n');
    }
    let list: Vec<Value> = rows.iter().map(|r| r.to_json(ctx.args.timings)).collect();
    let failing: Vec<&str> = rows.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    Ok(Report { result: Value::Array(list), residuals: Map::new(), pass: failing.is_empty() })
}

fn dispatch(ctx: &mut Context, stderr: &mut String) -> Run<Report> {
    match ctx.args.verb {
        Verb::TateZeta => tate_zeta(ctx),
        Verb::Fourier => fourier(ctx),
        Verb::Mellin => mellin(ctx),
        Verb::Oscillate => oscillate(ctx),
        Verb::Transfer => transfer(ctx),
        Verb::InverseTransfer => inverse_transfer(ctx),
        Verb::SymsqTransfer => symsq_transfer(ctx),
        Verb::JxVerify => jx_verify(ctx),
        Verb::Spherical => spherical(ctx),
        Verb::Whittaker => whittaker(ctx),
        Verb::PeriodCheck => period_check(ctx),
        Verb::PlancherelCheck => plancherel_check(ctx),
        Verb::Accept => accept(ctx, stderr),
    }
}

/// Runs one command line (program name first) and returns what it printed.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let verb = args.verb;
    let out_path = args.out.clone();
    let mut config = Map::new();
    config.insert("seed".into(), json!(args.seed));
    config.insert("tolerance".into(), json!(args.tolerance.unwrap_or_else(|| verb.default_tolerance())));
    let mut ctx = Context { args, config };
    let mut stderr = String::new();
    let start = Instant::now();
    let (code, body) = match dispatch(&mut ctx, &mut stderr) {
        Ok(rep) => {
            let mut body = json!({
                "command": verb.name(),
                "config": Value::Object(ctx.config.clone()),
                "result": rep.result,
                "residuals": Value::Object(rep.residuals),
                "pass": rep.pass,
            });
            if ctx.args.timings {
                body["elapsed_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
            }
            let code = if verb == Verb::Accept && !rep.pass { 1 } else { 0 };
            (code, body)
        }
        Err(Failure::Usage(msg)) => {
            return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") };
        }
        Err(Failure::Compute(e)) => {
            stderr.push_str(&format!("error: {e}\n"));
            let body = json!({
                "command": verb.name(),
                "config": Value::Object(ctx.config.clone()),
                "error": {"name": e.name(), "message": e.to_string()},
                "pass": false,
            });
            (1, body)
        }
    };
    let text = serde_json::to_string_pretty(&integralize(body)).expect("reports serialize") + "\n";
    match out_path {
        Some(path) => match std::fs::write(&path, &text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr },
            Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("cannot write {}: {e}\n", path.display()) },
        },
        None => Outcome { code, stdout: text, stderr },
    }
}
