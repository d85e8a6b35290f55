//! Command-line front end: file format round-tripping, Hasse-diagram
//! export, and access to every operation as a subcommand.
//!
//! Exit codes: 0 on success, 1 on computation errors (including failed
//! verification suites and invalid germs), 2 on usage errors.

use crate::config::Config;
use crate::finlat::{self, FiniteLattice, LatticeJson};
use crate::germ::{Germ, GermJson, GermTable};
use crate::latmod::{self, BeamParams, PLattice, PLatticeJson, Rational};
use crate::verify;
use crate::ybe::{self, RMapJson};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "glat", version, about = "Exact lattice toolkit for modular Garside-like groups")]
pub struct Cli {
    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Override the enumeration guard (also via GLAT_MAX_ENUM).
    #[arg(long, global = true)]
    pub max_enum: Option<usize>,
    /// Seed for randomized suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Optional JSON config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Finite lattice predicates on a cover-relation file.
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
    /// The coordinatized beam model over the integers localized at p.
    Latmod {
        #[command(subcommand)]
        op: LatmodOp,
    },
    /// Garside germ operations on a germ table file.
    Germ {
        #[command(subcommand)]
        op: GermOp,
    },
    /// Yang-Baxter solutions and their presentations.
    Ybe {
        #[command(subcommand)]
        op: YbeOp,
    },
    /// Run verification suites.
    Verify {
        /// Suite name, or "all".
        #[arg(long)]
        suite: String,
    },
    /// Export helpers.
    Export {
        #[command(subcommand)]
        op: ExportOp,
    },
}

#[derive(Subcommand)]
pub enum LatticeOp {
    /// Modularity, distributivity, geometricity, length and special sets.
    Classify { file: String },
    /// Central elements.
    Center { file: String },
    /// Direct decomposition into the upsets of the center dual atoms.
    Decompose { file: String },
    /// Primarity (perspectivity of atoms in every interval).
    Primary { file: String },
}

#[derive(Subcommand)]
pub enum LatmodOp {
    /// Smith profile with the index sequence of a cone element.
    Profile { file: String },
    /// Enumerate the strong interval [p^n R^delta, R^delta].
    Interval {
        #[arg(short)]
        p: i64,
        #[arg(short, long)]
        delta: usize,
        #[arg(short)]
        n: u32,
        /// Emit the Hasse diagram in DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// The frozen power p^n R^delta.
    Frozen {
        #[arg(short)]
        p: i64,
        #[arg(short, long)]
        delta: usize,
        #[arg(short)]
        n: u32,
    },
}

#[derive(Subcommand)]
pub enum GermOp {
    /// Exhaustively validate a germ table.
    Validate { file: String },
    /// Right-normal form of a word (leftmost factor first).
    Nf {
        file: String,
        factors: Vec<String>,
        /// Compute the left-normal form instead.
        #[arg(long)]
        left: bool,
    },
    /// Arrow, meet, join and comparability of two cone words.
    Arrow {
        file: String,
        /// Comma-separated factors of the left word.
        #[arg(long)]
        lhs: String,
        /// Comma-separated factors of the right word.
        #[arg(long)]
        rhs: String,
    },
    /// Interval analysis: center, U/L/M, the duality map.
    Interval { file: String },
    /// Frozen power of a center dual atom.
    Frozen {
        file: String,
        #[arg(short)]
        z: String,
        #[arg(short)]
        n: u32,
    },
    /// Semibeam components of a cone word, or beam components of a
    /// fraction when a denominator is given.
    Decompose {
        file: String,
        factors: Vec<String>,
        /// Comma-separated denominator factors (the element is then
        /// den^{-1} * factors).
        #[arg(long)]
        den: Option<String>,
    },
}

#[derive(Subcommand)]
pub enum YbeOp {
    /// Non-degeneracy, involutivity and the braid equation.
    Validate { file: String },
    /// Enumerate all solutions on n points.
    Enumerate {
        #[arg(short)]
        n: usize,
    },
    /// Structure germ of a solution.
    Germ { file: String },
}

#[derive(Subcommand)]
pub enum ExportOp {
    /// Hasse diagram of a lattice file in DOT format.
    Dot { file: String },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Computation(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Computation(m) => write!(f, "error: {m}"),
        }
    }
}

fn comp<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Computation(e.to_string())
}

/// Entry point used by the binary: parses, dispatches and maps errors to
/// exit codes.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with success exit codes
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(CliError::Usage(m)) => {
            eprintln!("usage error: {m}");
            2
        }
        Err(CliError::Computation(m)) => {
            eprintln!("error: {m}");
            1
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config, CliError> {
    let mut c = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(comp)?;
            serde_json::from_str::<Config>(&text)
                .map_err(|e| CliError::Usage(format!("config file: {e}")))?
        }
        None => Config::from_env(),
    };
    if let Some(m) = cli.max_enum {
        c.max_elements = m;
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    Ok(c)
}

fn read_lattice(path: &str) -> Result<FiniteLattice, CliError> {
    let text = std::fs::read_to_string(path).map_err(comp)?;
    let j: LatticeJson = serde_json::from_str(&text).map_err(comp)?;
    FiniteLattice::from_json(&j).map_err(comp)
}

fn read_germ(path: &str) -> Result<Germ, CliError> {
    let text = std::fs::read_to_string(path).map_err(comp)?;
    let j: GermJson = serde_json::from_str(&text).map_err(comp)?;
    let t = GermTable::from_json(&j).map_err(comp)?;
    Germ::new(t).map_err(|rep| {
        CliError::Computation(format!(
            "invalid germ: {}",
            serde_json::to_string(&rep).unwrap_or_default()
        ))
    })
}

/// Accepts a canonical element or a generator list.
#[derive(Deserialize)]
#[serde(untagged)]
enum PLatInput {
    Canonical(PLatticeJson),
    Generators {
        p: i64,
        delta: usize,
        generators: Vec<Vec<serde_json::Value>>,
    },
}

fn read_plattice(path: &str) -> Result<PLattice, CliError> {
    let text = std::fs::read_to_string(path).map_err(comp)?;
    let input: PLatInput = serde_json::from_str(&text).map_err(comp)?;
    match input {
        PLatInput::Canonical(j) => PLattice::from_json(&j).map_err(comp),
        PLatInput::Generators { p, delta, generators } => {
            let params = BeamParams::new(p, delta).map_err(comp)?;
            let gens: Vec<Vec<Rational>> = generators
                .iter()
                .map(|g| g.iter().map(parse_rational_value).collect())
                .collect::<Result<_, _>>()?;
            PLattice::from_generators(params, &gens).map_err(comp)
        }
    }
}

fn parse_rational_value(v: &serde_json::Value) -> Result<Rational, CliError> {
    match v {
        serde_json::Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| CliError::Usage("non-integer number".into()))?;
            Rational::new(i, 1).map_err(comp)
        }
        serde_json::Value::String(s) => Rational::parse(s).map_err(comp),
        other => Err(CliError::Usage(format!("cannot parse rational from {other}"))),
    }
}

fn parse_word(g: &Germ, csv_or_args: &[String]) -> Result<Vec<usize>, CliError> {
    let names: Vec<String> = csv_or_args
        .iter()
        .flat_map(|s| s.split(','))
        .filter(|s| !s.is_empty())
        .map(|s| s.trim().to_string())
        .collect();
    g.parse_word(&names).map_err(comp)
}

fn emit(json_mode: bool, value: serde_json::Value, text: String) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else {
        println!("{text}");
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    let config = load_config(&cli)?;
    let json_mode = cli.json;
    match cli.command {
        Command::Lattice { op } => lattice_cmd(op, json_mode),
        Command::Latmod { op } => latmod_cmd(op, json_mode, &config),
        Command::Germ { op } => germ_cmd(op, json_mode),
        Command::Ybe { op } => ybe_cmd(op, json_mode, &config),
        Command::Verify { suite } => verify_cmd(&suite, json_mode, &config),
        Command::Export { op } => match op {
            ExportOp::Dot { file } => {
                let lat = read_lattice(&file)?;
                print!("{}", lat.to_dot());
                Ok(0)
            }
        },
    }
}

fn lattice_cmd(op: LatticeOp, json_mode: bool) -> Result<i32, CliError> {
    match op {
        LatticeOp::Classify { file } => {
            let lat = read_lattice(&file)?;
            let c = finlat::classify(&lat);
            emit(
                json_mode,
                serde_json::to_value(&c).unwrap(),
                format!(
                    "modular: {}\ndistributive: {}\ngeometric: {}\nlength: {}\natoms: {:?}\ndual atoms: {:?}\nmeet-irreducibles: {:?}",
                    c.modular, c.distributive, c.geometric, c.length, c.atoms, c.dual_atoms,
                    c.meet_irreducibles
                ),
            );
        }
        LatticeOp::Center { file } => {
            let lat = read_lattice(&file)?;
            let c = finlat::center(&lat);
            emit(json_mode, json!({ "center": c }), format!("center: {c:?}"));
        }
        LatticeOp::Decompose { file } => {
            let lat = read_lattice(&file)?;
            let d = finlat::decompose(&lat);
            emit(
                json_mode,
                serde_json::to_value(&d).unwrap(),
                format!("{} factors: {:?}", d.factors.len(), d.factors),
            );
        }
        LatticeOp::Primary { file } => {
            let lat = read_lattice(&file)?;
            let p = finlat::is_primary(&lat).map_err(comp)?;
            emit(json_mode, json!({ "primary": p }), format!("primary: {p}"));
        }
    }
    Ok(0)
}

fn latmod_cmd(op: LatmodOp, json_mode: bool, config: &Config) -> Result<i32, CliError> {
    match op {
        LatmodOp::Profile { file } => {
            let a = read_plattice(&file)?;
            let prof = a.snf_profile().map_err(comp)?;
            emit(
                json_mode,
                json!({ "element": a.to_json(), "profile": prof }),
                format!(
                    "exponents: {:?}\ndeg: {}\nlambda: {}\niota: {:?}\none-homogeneous: {}\nmeet-irreducible: {}\ndual chain: {}",
                    prof.exponents, prof.deg, prof.lambda, prof.iota, prof.one_homogeneous,
                    prof.meet_irreducible, prof.dual_chain
                ),
            );
        }
        LatmodOp::Interval { p, delta, n, dot } => {
            let pr = BeamParams::new(p, delta).map_err(comp)?;
            let (lat, elems) =
                latmod::strong_interval(pr, n, config.max_elements).map_err(comp)?;
            if dot {
                print!("{}", lat.to_dot());
            } else {
                let elems_json: Vec<PLatticeJson> = elems.iter().map(|e| e.to_json()).collect();
                emit(
                    json_mode,
                    json!({ "lattice": lat.to_json(), "elements": elems_json }),
                    format!("{} elements, length {}", lat.n(), lat.length()),
                );
            }
        }
        LatmodOp::Frozen { p, delta, n } => {
            let pr = BeamParams::new(p, delta).map_err(comp)?;
            let f = latmod::frozen(pr, n);
            emit(
                json_mode,
                serde_json::to_value(f.to_json()).unwrap(),
                format!("p^{n} R^{delta}, deg {}", f.deg()),
            );
        }
    }
    Ok(0)
}

fn germ_cmd(op: GermOp, json_mode: bool) -> Result<i32, CliError> {
    match op {
        GermOp::Validate { file } => {
            // validation wants the raw table, not the validated wrapper
            let text = std::fs::read_to_string(&file).map_err(comp)?;
            let j: GermJson = serde_json::from_str(&text).map_err(comp)?;
            let t = GermTable::from_json(&j).map_err(comp)?;
            let rep = crate::germ::validate_germ(&t);
            emit(
                json_mode,
                serde_json::to_value(&rep).unwrap(),
                if rep.is_valid() {
                    "valid".to_string()
                } else {
                    format!("invalid: {:?}", rep.violations)
                },
            );
            return Ok(if rep.is_valid() { 0 } else { 1 });
        }
        GermOp::Nf { file, factors, left } => {
            let g = read_germ(&file)?;
            let word = parse_word(&g, &factors)?;
            let nf = if left {
                g.left_normalize(&word).map_err(comp)?
            } else {
                g.normalize(&word).map_err(comp)?
            };
            let names = g.word_names(&nf.0);
            emit(json_mode, json!(names), format!("{names:?}"));
        }
        GermOp::Arrow { file, lhs, rhs } => {
            let g = read_germ(&file)?;
            let l = parse_word(&g, &[lhs])?;
            let r = parse_word(&g, &[rhs])?;
            let mut calc = crate::germ::words::Calc::new(&g);
            let ops = calc.cone_ops(&l, &r).map_err(comp)?;
            emit(
                json_mode,
                json!({
                    "arrow": g.word_names(&ops.arrow.0),
                    "meet": g.word_names(&ops.meet.0),
                    "join": g.word_names(&ops.join.0),
                    "leq": ops.leq,
                }),
                format!(
                    "arrow: {:?}\nmeet: {:?}\njoin: {:?}\nleq: {}",
                    g.word_names(&ops.arrow.0),
                    g.word_names(&ops.meet.0),
                    g.word_names(&ops.join.0),
                    ops.leq
                ),
            );
        }
        GermOp::Interval { file } => {
            let g = read_germ(&file)?;
            let a = g.interval_analysis();
            let name = |x: &usize| g.name(*x).to_string();
            let d_map: Vec<(String, String)> = a
                .center_dual_atoms
                .iter()
                .map(|&z| (g.name(z).to_string(), g.name(a.d_map[z]).to_string()))
                .collect();
            let ulm: Vec<serde_json::Value> = (0..g.n())
                .map(|x| json!({ "element": g.name(x), "U": a.ulm[x].0, "L": a.ulm[x].1, "M": a.ulm[x].2 }))
                .collect();
            emit(
                json_mode,
                json!({
                    "center": a.center.iter().map(name).collect::<Vec<_>>(),
                    "centerDualAtoms": a.center_dual_atoms.iter().map(name).collect::<Vec<_>>(),
                    "D": d_map,
                    "ULM": ulm,
                    "dualityOK": a.duality_ok,
                    "violations": a.violations,
                }),
                format!(
                    "center: {:?}\ncenter dual atoms: {:?}\nD: {:?}\nduality ok: {}",
                    a.center.iter().map(name).collect::<Vec<_>>(),
                    a.center_dual_atoms.iter().map(name).collect::<Vec<_>>(),
                    d_map,
                    a.duality_ok
                ),
            );
        }
        GermOp::Frozen { file, z, n } => {
            let g = read_germ(&file)?;
            let a = g.interval_analysis();
            let zid = g
                .id_of(&z)
                .ok_or_else(|| CliError::Usage(format!("unknown element {z:?}")))?;
            let w = g.frozen_power(&a, zid, n).map_err(comp)?;
            let names = g.word_names(&w.0);
            emit(json_mode, json!(names), format!("{names:?}"));
        }
        GermOp::Decompose { file, factors, den } => {
            let g = read_germ(&file)?;
            let a = g.interval_analysis();
            let num = parse_word(&g, &factors)?;
            match den {
                None => {
                    let w = g.normalize(&num).map_err(comp)?;
                    let comps = g.semibeam_decompose(&a, &w).map_err(comp)?;
                    let names: Vec<Vec<String>> =
                        comps.iter().map(|c| g.word_names(&c.0)).collect();
                    emit(json_mode, json!(names), format!("{names:?}"));
                }
                Some(d) => {
                    let dw = parse_word(&g, &[d])?;
                    let f = g.fraction(&dw, &num).map_err(comp)?;
                    let comps = g.beam_decompose(&a, &f).map_err(comp)?;
                    let names: Vec<serde_json::Value> = comps
                        .iter()
                        .map(|c| {
                            json!({
                                "den": g.word_names(&c.den.0),
                                "num": g.word_names(&c.num.0),
                            })
                        })
                        .collect();
                    emit(json_mode, json!(names), format!("{names:?}"));
                }
            }
        }
    }
    Ok(0)
}

fn ybe_cmd(op: YbeOp, json_mode: bool, config: &Config) -> Result<i32, CliError> {
    match op {
        YbeOp::Validate { file } => {
            let text = std::fs::read_to_string(&file).map_err(comp)?;
            let j: RMapJson = serde_json::from_str(&text).map_err(comp)?;
            let r = ybe::RMap::from_json(&j).map_err(comp)?;
            let rep = r.validate();
            emit(
                json_mode,
                serde_json::to_value(rep).unwrap(),
                format!(
                    "nondegenerate: {}\ninvolutive: {}\nbraid: {}",
                    rep.nondegenerate, rep.involutive, rep.braid
                ),
            );
        }
        YbeOp::Enumerate { n } => {
            let e = ybe::enumerate(n).map_err(comp)?;
            let sols: Vec<RMapJson> = e.solutions.iter().map(|r| r.to_json()).collect();
            emit(
                json_mode,
                json!({
                    "n": n,
                    "count": e.solutions.len(),
                    "isoClasses": e.iso_classes,
                    "solutions": sols,
                }),
                format!("{} solutions, {} isomorphism classes", e.solutions.len(), e.iso_classes),
            );
        }
        YbeOp::Germ { file } => {
            let text = std::fs::read_to_string(&file).map_err(comp)?;
            let j: RMapJson = serde_json::from_str(&text).map_err(comp)?;
            let r = ybe::RMap::from_json(&j).map_err(comp)?;
            let g = ybe::structure_germ(&r, config.max_elements).map_err(comp)?;
            let gj = g.table().to_json();
            emit(
                json_mode,
                serde_json::to_value(&gj).unwrap(),
                serde_json::to_string_pretty(&gj).unwrap(),
            );
        }
    }
    Ok(0)
}

fn verify_cmd(suite: &str, json_mode: bool, config: &Config) -> Result<i32, CliError> {
    let reports = if suite == "all" {
        verify::run_all(config).map_err(comp)?
    } else {
        vec![verify::run_suite(suite, config).map_err(|e| match e {
            verify::VerifyError::UnknownSuite(s) => {
                CliError::Usage(format!("unknown suite {s:?}; known: {:?}", verify::SUITES))
            }
            other => comp(other),
        })?]
    };
    let all_pass = reports.iter().all(|r| r.passed());
    if json_mode {
        println!("{}", serde_json::to_string_pretty(&reports).unwrap());
    } else {
        for r in &reports {
            println!("{}", r.text());
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_error_exit_code() {
        assert_eq!(main_with_args(["glat", "bogus"]), 2);
        assert_eq!(main_with_args(["glat", "--help"]), 0);
    }

    #[test]
    fn verify_unknown_suite_is_usage_error() {
        assert_eq!(main_with_args(["glat", "verify", "--suite", "nope"]), 2);
    }

    #[test]
    fn verify_single_suite_runs() {
        assert_eq!(main_with_args(["glat", "verify", "--suite", "s_join_atoms"]), 0);
    }
}
