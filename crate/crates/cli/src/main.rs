use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hessq::checks::{self, RunConfig, REGISTRY};
use hessq::flag::{f, f_tilde, ideal_generators, ideal_generators_labeled, Flavor};
use hessq::hess::HessenbergFunction;
use hessq::ideals::{flag_vars, product_series_coordinate, product_series_quantum, quantum_vars, staircase_series};
use hessq::iso::{e_generators, phi_h};
use hessq::poly::{Polynomial, VarId};
use hessq::qsym::{specialize_h, QSym};
use hessq::report::{exit_code, Params, Status, VerificationReport};
use hessq::singular::jacobian;

/// Exit code for usage and parameter errors, kept apart from the report codes 0, 1, 2.
const USAGE_ERROR: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "hessq", version, about = "Exact checks for regular nilpotent Hessenberg varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// write the output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// include wall-clock times in reports
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Object {
    /// E_i^(n), or E_i^[a,b] with --interval
    E,
    /// F_{i,j}, or F~^<m>_{i,j} with --tilde
    F,
    /// the defining equations of Hess(N,h) in the chart
    Generators,
    /// phi_h(x_{i,j})
    Phi,
    /// the Jacobian of ^hE^(n)
    Jacobian,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Side {
    Coordinate,
    Quantum,
    Both,
}

#[derive(clap::Args, Debug, Default, Clone)]
struct CheckArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Hessenberg function, comma separated
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    trunc: Option<u32>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the available checks
    List,
    /// Print a polynomial object
    Emit {
        #[arg(value_enum)]
        object: Object,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        /// interval a,b for E_i^[a,b]
        #[arg(long)]
        interval: Option<String>,
        #[arg(long)]
        h: Option<String>,
        /// truncated F~ instead of F
        #[arg(long)]
        tilde: bool,
    },
    /// Run one check by id (see `list`)
    Verify {
        check: String,
        #[command(flatten)]
        args: CheckArgs,
    },
    /// Hilbert series of both sides of phi_h
    Hilbert {
        #[arg(long)]
        h: String,
        #[arg(long, default_value_t = 20)]
        trunc: u32,
        #[arg(long, value_enum, default_value_t = Side::Both)]
        side: Side,
        /// also count standard monomials through a Groebner basis
        #[arg(long)]
        staircase: bool,
    },
    /// Singular locus of Hess(N,h_m) in the chart
    Singular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Cell combinatorics of Sing(Pet_n)
    Appendix {
        #[arg(long)]
        n: usize,
    },
    /// The whole suite
    RunAll {
        #[arg(long, default_value_t = 6)]
        max_n_identity: usize,
        #[arg(long, default_value_t = 4)]
        max_n_groebner: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
}

fn parse_h(s: &str) -> Result<HessenbergFunction> {
    s.parse::<HessenbergFunction>()
        .map_err(|e| anyhow!("invalid --h {s}: {e}"))
}

fn resolve_check(name: &str) -> &str {
    match name {
        "main" => "main-theorem",
        "hilbert" => "hilbert-eq",
        "singular" => "singular-hm",
        "xyz" => "xyz-identity",
        "cyclic" => "cyclic-quotient",
        "key" => "key-correspondence",
        other => other,
    }
}

fn render_poly(p: &Polynomial, format: Format) -> Value {
    match format {
        Format::Text => Value::String(p.to_text()),
        Format::Latex => Value::String(p.to_latex()),
        Format::Json => p.to_json(),
    }
}

/// One named polynomial per line, or a JSON object.
fn render_list(items: Vec<(String, Polynomial)>, format: Format) -> String {
    match format {
        Format::Json => {
            let obj: serde_json::Map<String, Value> = items
                .into_iter()
                .map(|(k, p)| (k, p.to_json()))
                .collect();
            serde_json::to_string_pretty(&Value::Object(obj)).expect("json")
        }
        _ => items
            .into_iter()
            .map(|(k, p)| match render_poly(&p, format) {
                Value::String(s) => format!("{k} = {s}"),
                v => format!("{k} = {v}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!("missing --{flag}"))
}

#[allow(clippy::too_many_arguments)]
fn emit(
    object: Object,
    n: Option<usize>,
    i: Option<usize>,
    j: Option<usize>,
    m: Option<usize>,
    interval: Option<String>,
    h: Option<String>,
    tilde: bool,
    format: Format,
) -> Result<String> {
    let h = h.as_deref().map(parse_h).transpose()?;
    let n = match (n, &h) {
        (Some(n), _) => n,
        (None, Some(h)) => h.n(),
        (None, None) => bail!("missing --n"),
    };
    let items = match object {
        Object::E => {
            let i = need(i, "i")?;
            let table = QSym::new(n);
            let (a, b) = match interval {
                Some(s) => {
                    let (a, b) = s
                        .split_once(',')
                        .ok_or_else(|| anyhow!("--interval expects a,b"))?;
                    (a.trim().parse()?, b.trim().parse()?)
                }
                None => (1, n),
            };
            let mut p = table.e_interval(i, a, b)?;
            if let Some(h) = &h {
                p = specialize_h(&p, h);
            }
            vec![(format!("E_{i}^[{a},{b}]"), p)]
        }
        Object::F => {
            let (i, j) = (need(i, "i")?, need(j, "j")?);
            if tilde {
                let m = need(m, "m")?;
                vec![(format!("F~^<{m}>_{{{i},{j}}}"), f_tilde(i, j, m, n)?)]
            } else {
                vec![(format!("F_{{{i},{j}}}"), f(i, j, n)?)]
            }
        }
        Object::Generators => {
            let h = need(h, "h")?;
            let flavor = if tilde { Flavor::FTilde } else { Flavor::F };
            ideal_generators_labeled(&h, flavor)?
                .into_iter()
                .map(|g| (g.label(), g.poly))
                .collect()
        }
        Object::Phi => {
            let h = h.unwrap_or_else(|| HessenbergFunction::full(n));
            match (i, j) {
                (Some(i), Some(j)) => {
                    let v = Polynomial::var(VarId::flag(i, j));
                    vec![(format!("phi_h(x_{i}_{j})"), phi_h(&v, &h)?)]
                }
                _ => flag_vars(n)
                    .into_iter()
                    .map(|v| Ok((format!("phi_h({v})"), phi_h(&Polynomial::var(v), &h)?)))
                    .collect::<Result<Vec<_>>>()?,
            }
        }
        Object::Jacobian => {
            let h = h.unwrap_or_else(|| HessenbergFunction::full(n));
            let jac = jacobian(&h)?;
            let mut items = Vec::new();
            for row in 1..=jac.n {
                for &(r, s) in &jac.columns {
                    let label = format!("d E_{row} / d {}", VarId::q_or_x(r, s));
                    items.push((label, jac.entry(row, r, s).expect("column").clone()));
                }
            }
            items
        }
    };
    Ok(render_list(items, format))
}

fn hilbert(h: &str, trunc: u32, side: Side, staircase: bool, format: Format) -> Result<String> {
    let h = parse_h(h)?;
    let mut out = serde_json::Map::new();
    let mut text = Vec::new();
    let sides: Vec<(&str, bool)> = match side {
        Side::Coordinate => vec![("coordinate", true)],
        Side::Quantum => vec![("quantum", false)],
        Side::Both => vec![("coordinate", true), ("quantum", false)],
    };
    for (name, coord) in sides {
        let series = if coord {
            product_series_coordinate(&h, trunc)
        } else {
            product_series_quantum(&h, trunc)
        };
        text.push(format!("{name}: {series}"));
        let mut entry = json!({ "closed_form": series });
        if staircase {
            let (gens, vars) = if coord {
                (ideal_generators(&h, Flavor::F)?, flag_vars(h.n()))
            } else {
                (e_generators(h.n(), Some(&h)), quantum_vars(&h))
            };
            let counted = staircase_series(&gens, &vars, trunc)?;
            text.push(format!(
                "{name} staircase: {} ({})",
                counted.expansion_string(),
                if counted.agrees_with(&series) { "agrees" } else { "differs" }
            ));
            entry["staircase"] = json!(counted.coefficients);
        }
        out.insert(name.to_string(), entry);
    }
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&Value::Object(out))?,
        _ => text.join("\n"),
    })
}

fn render_reports(reports: &[VerificationReport], format: Format, timing: bool) -> String {
    match format {
        Format::Json => {
            let v: Vec<Value> = reports.iter().map(|r| r.to_json(timing)).collect();
            let v = if v.len() == 1 {
                v.into_iter().next().expect("one")
            } else {
                Value::Array(v)
            };
            serde_json::to_string_pretty(&v).expect("json")
        }
        Format::Latex => reports.iter().map(|r| r.to_latex()).collect::<Vec<_>>().join("\n"),
        Format::Text => {
            let mut r: Vec<VerificationReport> = reports.to_vec();
            if !timing {
                for x in &mut r {
                    x.wall_time_ms = None;
                }
            }
            let mut s: String = r.iter().map(|x| x.to_text()).collect();
            if reports.len() > 1 {
                let count = |st: Status| reports.iter().filter(|x| x.status == st).count();
                s.push_str(&format!(
                    "{} reports: {} pass, {} fail, {} inconclusive, {} not attempted\n",
                    reports.len(),
                    count(Status::Pass),
                    count(Status::Fail),
                    count(Status::Inconclusive),
                    count(Status::NotAttempted)
                ));
            }
            s
        }
    }
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    let format = cli.format;
    Ok(match &cli.command {
        Command::List => {
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&Value::Array(
                    REGISTRY
                        .iter()
                        .map(|c| json!({"id": c.id, "params": c.params, "statement": c.statement}))
                        .collect(),
                ))?,
                _ => REGISTRY
                    .iter()
                    .map(|c| format!("{:<20} [{}]\n    {}", c.id, c.params, c.statement))
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            (text, 0)
        }
        Command::Emit {
            object,
            n,
            i,
            j,
            m,
            interval,
            h,
            tilde,
        } => (
            emit(*object, *n, *i, *j, *m, interval.clone(), h.clone(), *tilde, format)?,
            0,
        ),
        Command::Verify { check, args } => {
            let params = Params {
                n: args.n,
                h: args
                    .h
                    .as_deref()
                    .map(|s| parse_h(s).map(|h| h.values().to_vec()))
                    .transpose()?,
                m: args.m,
                seed: args.seed,
                trunc: args.trunc,
                trials: args.trials,
            };
            let report = checks::run(resolve_check(check), &params)?;
            let code = exit_code(std::slice::from_ref(&report));
            (render_reports(&[report], format, cli.timing), code)
        }
        Command::Hilbert {
            h,
            trunc,
            side,
            staircase,
        } => (hilbert(h, *trunc, *side, *staircase, format)?, 0),
        Command::Singular { n, m, trials, seed } => {
            let params = Params::n(*n).with_m(*m).with_trials(*trials).with_seed(*seed);
            let report = checks::run("singular-hm", &params)?;
            let code = exit_code(std::slice::from_ref(&report));
            (render_reports(&[report], format, cli.timing), code)
        }
        Command::Appendix { n } => {
            let report = checks::run("appendix", &Params::n(*n))?;
            let code = exit_code(std::slice::from_ref(&report));
            (render_reports(&[report], format, cli.timing), code)
        }
        Command::RunAll {
            max_n_identity,
            max_n_groebner,
            seed,
            trials,
        } => {
            let cfg = RunConfig {
                max_n_identity: *max_n_identity,
                max_n_groebner: *max_n_groebner,
                seed: *seed,
                trials: *trials,
                ..Default::default()
            };
            let reports = checks::run_all(&cfg);
            let code = exit_code(&reports);
            (render_reports(&reports, format, cli.timing), code)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli).and_then(|(text, code)| {
        match &cli.out {
            Some(path) => fs::write(path, format!("{}\n", text.trim_end()))
                .with_context(|| format!("writing {}", path.display()))?,
            None => {
                let mut out = io::stdout().lock();
                match writeln!(out, "{}", text.trim_end()) {
                    Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                    r => r.context("writing stdout")?,
                }
            }
        }
        Ok(code)
    }) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}
