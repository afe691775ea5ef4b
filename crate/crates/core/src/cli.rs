//! Command-line interface.
//!
//! Subcommands: `axioms | spectral | distance | mobius | horoball | wolff |
//! iterate | report`. Outputs are deterministic for a fixed seed: JSON for
//! structured results, CSV for orbits, plain decimal for the scalar commands.
//! Exit codes: 0 pass, 1 invariant failure, 2 usage or I/O error.
//!
//! Set `CARTANKIT_LOG=debug` for progress chatter on stderr.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bergmann::kobayashi_distance;
use crate::dynamics::{
    iterate_orbit, wolff_construction, BoundaryComponent, MapExpr, WolffSchedule,
};
use crate::error::CartanError;
use crate::horoball::HoroballParams;
use crate::report::{self, standard_spaces, Report, SuiteConfig};
use crate::space::{random_element, Element, FactorKind, TripleSpace};
use crate::spectral::{spectral_decompose, Tripotent};

#[derive(Parser)]
#[command(
    name = "cartankit",
    version,
    about = "Numerics for bounded symmetric domains: triple algebra, Kobayashi geometry, horoballs, iteration"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the triple-system axiom suite and print one line per check.
    Axioms(AxiomsArgs),
    /// Spectrally decompose an element and validate the decomposition.
    Spectral(SpectralArgs),
    /// Kobayashi distance between two stored elements.
    Distance { x: PathBuf, y: PathBuf },
    /// Apply the Möbius transformation g_a to z.
    Mobius { a: PathBuf, z: PathBuf },
    /// Wolff construction plus horoball membership statistics for a map.
    Horoball(HoroballArgs),
    /// Wolff point, frame and σ data for a fixed-point-free map.
    Wolff(WolffArgs),
    /// Iterate a map and emit the orbit as CSV.
    Iterate(IterateArgs),
    /// Run every identity suite over the standard spaces.
    Report(ReportArgs),
}

#[derive(Args)]
struct AxiomsArgs {
    /// Space spec: shorthand (`disc`, `bidisc`, `rect:3x2`, `sym:3`,
    /// `antisym:4`, `spin:5`, comma-separated for sums), inline JSON, or a
    /// JSON file path. Without it the whole standard pool runs.
    #[arg(long)]
    space: Option<String>,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Negative-control fixture: run with a sign-flipped triple product.
    #[arg(long, hide = true)]
    corrupt_triple: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectralArgs {
    #[arg(long)]
    space: Option<String>,
    /// Element file; omit to decompose a seeded random element.
    #[arg(long)]
    element: Option<PathBuf>,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, default_value_t = 0.9)]
    radius: f64,
    /// Emit the decomposition as JSON records instead of text lines.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HoroballArgs {
    /// Map expression file (JSON).
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    lambda: f64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Strict membership margin.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WolffArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    space: Option<String>,
    /// Schedule length K (α_k = 1 − base^{−k}).
    #[arg(long, default_value_t = 30)]
    k: usize,
    #[arg(long, default_value_t = 2.0)]
    base: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IterateArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    x0: PathBuf,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn log_enabled() -> bool {
    matches!(
        std::env::var("CARTANKIT_LOG").as_deref(),
        Ok("debug") | Ok("info") | Ok("1")
    )
}

macro_rules! logln {
    ($($arg:tt)*) => {
        if log_enabled() {
            eprintln!($($arg)*);
        }
    };
}

/// Parse a space spec: shorthand, inline JSON, or a file path.
pub fn parse_space(spec: &str) -> Result<TripleSpace, CartanError> {
    let trimmed = spec.trim();
    if trimmed.starts_with('{') {
        return TripleSpace::from_json(trimmed);
    }
    if Path::new(trimmed).exists() {
        let text = std::fs::read_to_string(trimmed)
            .map_err(|e| CartanError::InvalidArgument(format!("reading {trimmed}: {e}")))?;
        return TripleSpace::from_json(&text);
    }
    let mut factors = Vec::new();
    for token in trimmed.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        if token == "disc" {
            factors.push(FactorKind::Rect { rows: 1, cols: 1 });
            continue;
        }
        if token == "bidisc" {
            factors.push(FactorKind::Rect { rows: 1, cols: 1 });
            factors.push(FactorKind::Rect { rows: 1, cols: 1 });
            continue;
        }
        let (kind, dims) = token.split_once(':').ok_or_else(|| {
            CartanError::InvalidArgument(format!("cannot parse space token '{token}'"))
        })?;
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| CartanError::InvalidArgument(format!("bad dimension in '{token}'")))
        };
        match kind {
            "rect" => {
                let (r, c) = dims.split_once('x').ok_or_else(|| {
                    CartanError::InvalidArgument(format!("rect needs RxC in '{token}'"))
                })?;
                factors.push(FactorKind::Rect {
                    rows: parse(r)?,
                    cols: parse(c)?,
                });
            }
            "sym" => factors.push(FactorKind::Sym { n: parse(dims)? }),
            "antisym" => factors.push(FactorKind::Antisym { n: parse(dims)? }),
            "spin" => factors.push(FactorKind::Spin { n: parse(dims)? }),
            _ => {
                return Err(CartanError::InvalidArgument(format!(
                    "unknown factor kind '{kind}'"
                )))
            }
        }
    }
    TripleSpace::new(factors)
}

fn read_element(path: &Path) -> Result<Element, CartanError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CartanError::InvalidArgument(format!("reading {}: {e}", path.display())))?;
    Element::from_json(&text)
}

fn read_map(path: &Path) -> Result<MapExpr, CartanError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CartanError::InvalidArgument(format!("reading {}: {e}", path.display())))?;
    MapExpr::from_json(&text)
}

/// The ambient space of a map expression, when its leaves determine one.
fn infer_space(expr: &MapExpr) -> Option<TripleSpace> {
    match expr {
        MapExpr::Mobius { a } => Some(a.space().clone()),
        MapExpr::Constant { c } => Some(c.space().clone()),
        MapExpr::Compose { outer, inner } => infer_space(outer).or_else(|| infer_space(inner)),
        MapExpr::DirectSum { parts } => {
            let mut factors = Vec::new();
            for p in parts {
                let sub = infer_space(p)?;
                if sub.factors().len() != 1 {
                    return None;
                }
                factors.push(sub.factors()[0]);
            }
            TripleSpace::new(factors).ok()
        }
        _ => None,
    }
}

fn resolve_space(opt: &Option<String>, map: Option<&MapExpr>) -> Result<TripleSpace, CartanError> {
    if let Some(spec) = opt {
        return parse_space(spec);
    }
    if let Some(m) = map {
        if let Some(s) = infer_space(m) {
            return Ok(s);
        }
    }
    Err(CartanError::InvalidArgument(
        "the space is not determined by the map; pass --space".into(),
    ))
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CartanError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CartanError::InvalidArgument(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct WolffOutput {
    xi: Element,
    frame: Vec<Element>,
    sigmas: Vec<f64>,
    sigma_spreads: Vec<f64>,
    sigma_converged: bool,
    alphas: Vec<f64>,
    fixed_point_residuals: Vec<f64>,
    final_boundary_gap: f64,
}

#[derive(Serialize)]
struct HoroballOutput {
    lambda: f64,
    xi: Element,
    frame: Vec<Element>,
    sigmas: Vec<f64>,
    center: Element,
    samples: usize,
    excluded_boundary_band: usize,
    agreement_rate: f64,
    invariance_violations: usize,
    seed: u64,
}

pub fn run() -> Result<i32, CartanError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Axioms(args) => {
            let cfg = SuiteConfig {
                seed: args.seed,
                samples: args.samples,
                ..SuiteConfig::default()
            };
            let mut rep = Report::default();
            match args.space {
                Some(spec) => {
                    let space = parse_space(&spec)?;
                    rep.merge(report::axiom_suite("space", &space, &cfg, args.corrupt_triple)?);
                }
                None => {
                    for (name, space) in standard_spaces() {
                        logln!("axioms: {name}");
                        rep.merge(report::axiom_suite(&name, &space, &cfg, args.corrupt_triple)?);
                    }
                }
            }
            write_output(&args.out, &rep.render_text())?;
            Ok(if rep.passed() { 0 } else { 1 })
        }
        Command::Spectral(args) => {
            let element = match (&args.element, &args.space) {
                (Some(path), _) => read_element(path)?,
                (None, Some(spec)) => {
                    let space = parse_space(spec)?;
                    random_element(&space, args.seed, args.radius)
                }
                (None, None) => {
                    return Err(CartanError::InvalidArgument(
                        "spectral needs --element or --space".into(),
                    ))
                }
            };
            let d = spectral_decompose(&element)?;
            let valid = d.validate(1e-8).is_ok();
            let text = if args.json {
                format!("{}\n", d.to_json())
            } else {
                let mut text = String::new();
                for (i, (alpha, t)) in d.pairs().iter().enumerate() {
                    text.push_str(&format!(
                        "alpha[{i}] = {:.16e}  minimal = {}\n",
                        alpha,
                        t.is_minimal()
                    ));
                }
                text.push_str(&format!("norm = {:.16e}\n", element.jb_norm()));
                text.push_str(&format!(
                    "reconstruction/orthogonality: {}\n",
                    if valid { "PASS" } else { "FAIL" }
                ));
                text
            };
            write_output(&args.out, &text)?;
            Ok(if valid { 0 } else { 1 })
        }
        Command::Distance { x, y } => {
            let xe = read_element(&x)?;
            let ye = read_element(&y)?;
            let d = kobayashi_distance(&xe, &ye)?;
            println!("{d:.14e}");
            Ok(0)
        }
        Command::Mobius { a, z } => {
            let ae = read_element(&a)?;
            let ze = read_element(&z)?;
            let g = crate::bergmann::mobius_apply(&ae, &ze)?;
            for c in g.coords().iter() {
                println!("{:.14e} {:.14e}", c.re, c.im);
            }
            Ok(0)
        }
        Command::Horoball(args) => {
            let map = read_map(&args.map)?;
            let space = resolve_space(&args.space, Some(&map))?;
            logln!("horoball: wolff construction");
            let w = wolff_construction(&map, &space, &WolffSchedule::default())?;
            let hb = HoroballParams::new(
                w.sigmas.frame.clone(),
                w.sigmas.sigmas.clone(),
                args.lambda,
            )?;
            let compiled = map.compile(&space)?;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
            let mut samples = Vec::with_capacity(args.samples);
            for i in 0..args.samples {
                if i % 2 == 0 {
                    samples.push(crate::space::random_element_with(&space, &mut rng, 0.999));
                } else {
                    let wpt = crate::space::random_element_with(&space, &mut rng, 0.999);
                    samples.push(hb.map(&wpt)?);
                }
            }
            logln!("horoball: sampling {} points", samples.len());
            let eval = |x: &Element| -> Result<(Option<bool>, Option<bool>), CartanError> {
                let fx = crate::horoball::horofunction(x, &w.seq)?;
                if (fx.value * args.lambda - 1.0).abs() <= 1e-3 {
                    return Ok((None, None));
                }
                let in_h = fx.value < 1.0 / args.lambda - args.tol;
                let in_s = hb.contains(x, 0.0)?;
                let inv = if in_h {
                    let ff = crate::horoball::horofunction(&compiled.eval(x)?, &w.seq)?;
                    Some(ff.value < 1.0 / args.lambda + 1e-6)
                } else {
                    None
                };
                Ok((Some(in_h == in_s), inv))
            };
            let results: Vec<(Option<bool>, Option<bool>)> = if args.parallel > 1 {
                let eval_ref = &eval;
                std::thread::scope(|scope| {
                    let chunk = samples.len().div_ceil(args.parallel);
                    let handles: Vec<_> = samples
                        .chunks(chunk)
                        .map(|part| {
                            scope.spawn(move || {
                                part.iter()
                                    .map(eval_ref)
                                    .collect::<Result<Vec<_>, CartanError>>()
                            })
                        })
                        .collect();
                    let mut all = Vec::with_capacity(samples.len());
                    for h in handles {
                        all.extend(h.join().expect("worker panicked")?);
                    }
                    Ok::<_, CartanError>(all)
                })?
            } else {
                samples
                    .iter()
                    .map(&eval)
                    .collect::<Result<Vec<_>, CartanError>>()?
            };
            let mut agree = 0usize;
            let mut counted = 0usize;
            let mut excluded = 0usize;
            let mut violations = 0usize;
            for (cmp, inv) in &results {
                match cmp {
                    Some(ok) => {
                        counted += 1;
                        if *ok {
                            agree += 1;
                        }
                    }
                    None => excluded += 1,
                }
                if let Some(false) = inv {
                    violations += 1;
                }
            }
            let output = HoroballOutput {
                lambda: args.lambda,
                xi: w.xi().clone(),
                frame: w
                    .sigmas
                    .frame
                    .tripotents()
                    .iter()
                    .map(|t| t.element().clone())
                    .collect(),
                sigmas: w.sigmas.sigmas.clone(),
                center: hb.center().clone(),
                samples: args.samples,
                excluded_boundary_band: excluded,
                agreement_rate: if counted == 0 {
                    1.0
                } else {
                    agree as f64 / counted as f64
                },
                invariance_violations: violations,
                seed: args.seed,
            };
            write_output(
                &args.out,
                &format!(
                    "{}\n",
                    serde_json::to_string_pretty(&output)
                        .expect("horoball output serialization cannot fail")
                ),
            )?;
            Ok(if violations > 0 { 1 } else { 0 })
        }
        Command::Wolff(args) => {
            let map = read_map(&args.map)?;
            let space = resolve_space(&args.space, Some(&map))?;
            let schedule = WolffSchedule {
                base: args.base,
                k_max: args.k,
                ..WolffSchedule::default()
            };
            let w = wolff_construction(&map, &space, &schedule)?;
            let output = WolffOutput {
                xi: w.xi().clone(),
                frame: w
                    .sigmas
                    .frame
                    .tripotents()
                    .iter()
                    .map(|t| t.element().clone())
                    .collect(),
                sigmas: w.sigmas.sigmas.clone(),
                sigma_spreads: w.sigmas.spreads.clone(),
                sigma_converged: w.sigmas.converged,
                alphas: w.alphas.clone(),
                fixed_point_residuals: w.residuals.clone(),
                final_boundary_gap: 1.0 - w.points().last().expect("nonempty").jb_norm(),
            };
            write_output(
                &args.out,
                &format!(
                    "{}\n",
                    serde_json::to_string_pretty(&output)
                        .expect("wolff output serialization cannot fail")
                ),
            )?;
            Ok(0)
        }
        Command::Iterate(args) => {
            let map = read_map(&args.map)?;
            let x0 = read_element(&args.x0)?;
            let space = match &args.space {
                Some(spec) => parse_space(spec)?,
                None => x0.space().clone(),
            };
            let compiled = map.compile(&space)?;
            let orbit = iterate_orbit(&compiled, &x0, args.n)?;
            // slice deviations need the Wolff component; fall back to NaN when
            // the map has an interior fixed point
            let component = wolff_construction(&map, &space, &WolffSchedule::default())
                .ok()
                .and_then(|w| Tripotent::new(w.sigmas.frame.sum(), 1e-8).ok())
                .and_then(|e| BoundaryComponent::new(e).ok());
            let deviations = match &component {
                Some(comp) => Some(orbit.slice_deviations(comp)?),
                None => None,
            };
            let mut csv = String::new();
            csv.push_str("n");
            for k in 0..space.total_dim() {
                csv.push_str(&format!(",re{k},im{k}"));
            }
            csv.push_str(",one_minus_norm,slice_deviation\n");
            for (n, p) in orbit.points.iter().enumerate() {
                csv.push_str(&format!("{n}"));
                for c in p.coords().iter() {
                    csv.push_str(&format!(",{:.16e},{:.16e}", c.re, c.im));
                }
                let dev = deviations.as_ref().map_or(f64::NAN, |d| d[n]);
                csv.push_str(&format!(",{:.16e},{:.16e}\n", orbit.boundary_gaps[n], dev));
            }
            write_output(&args.out, &csv)?;
            Ok(0)
        }
        Command::Report(args) => {
            let cfg = SuiteConfig {
                seed: args.seed,
                samples: args.samples,
                ..SuiteConfig::default()
            };
            let rep = report::full_report(&cfg, args.parallel)?;
            let text = rep.render_text();
            print!("{text}");
            if let Some(path) = &args.out {
                std::fs::write(path, rep.to_json()).map_err(|e| {
                    CartanError::InvalidArgument(format!("writing {}: {e}", path.display()))
                })?;
            }
            Ok(if rep.passed() { 0 } else { 1 })
        }
    }
}

/// Entry point used by the binary: maps errors to exit code 2.
pub fn main() -> i32 {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
