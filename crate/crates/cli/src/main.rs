//! `su2ent`: partial-transpose analysis, thermal scans and separability
//! certificates from the command line.
//!
//! Exit codes: 0 for PPT or success, 2 for NPT or a refused certificate,
//! 1 for any error. Payloads go to stdout, diagnostics to stderr.

mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use su2ent::exec::Execution;
use su2ent::ppt::analyze;
use su2ent::separability::decompose;
use su2ent::state::{from_correlators_half, from_correlators_one, InvariantState};
use su2ent::thermal::{
    dim_cap_from_env, scan, temperature_grid, threshold_temperature_ed, ExactDiagonalization, LatticeSpec,
};
use su2ent::{Error, SpinLength};

#[derive(Debug, Parser)]
#[command(name = "su2ent", version, about = "Entanglement of SU(2)-invariant two-spin states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Partial-transpose report for an invariant state, as JSON.
    Analyze {
        /// Twice the first spin length.
        #[arg(long)]
        s1: u32,
        /// Twice the second spin length.
        #[arg(long)]
        s2: u32,
        /// Multiplet weights A(J), J ascending, comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["c1", "c2"], allow_negative_numbers = true)]
        weights: Option<Vec<f64>>,
        /// <S1·S2>; enough on its own when one spin is 1/2.
        #[arg(long, allow_negative_numbers = true)]
        c1: Option<f64>,
        /// <(S1·S2)^2>; needed when one spin is 1.
        #[arg(long, requires = "c1", allow_negative_numbers = true)]
        c2: Option<f64>,
    },
    /// Correlators and partial-transpose positivity of a site pair over a
    /// temperature grid, as CSV.
    Thermal {
        /// Lattice file, TOML or JSON by extension.
        #[arg(long)]
        spec: PathBuf,
        /// Site pair `a,b`.
        #[arg(long)]
        pair: String,
        #[arg(long)]
        tmin: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Append the threshold temperature as a final comment line.
        #[arg(long)]
        threshold: bool,
    },
    /// Separability certificate for spin S with spin 1/2.
    Decompose {
        /// Twice the spin length S.
        #[arg(long)]
        s1: u32,
        #[arg(long, allow_negative_numbers = true)]
        c1: f64,
        /// Where to write the certificate JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run built-in consistency checks.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Cg,
    Spectra,
    Kstructure,
    Covariance,
    All,
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
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let refused = matches!(e.downcast_ref::<Error>(), Some(Error::CertificateUnavailable { .. }));
            ExitCode::from(if refused { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze { s1, s2, weights, c1, c2 } => {
            let st = build_state(SpinLength::from_twice(s1), SpinLength::from_twice(s2), weights, c1, c2)?;
            let report = analyze(&st);
            print_json(&report)?;
            Ok(ExitCode::from(if report.ppt { 0 } else { 2 }))
        }
        Command::Thermal { spec, pair, tmin, tmax, points, threshold } => {
            cmd_thermal(&spec, &pair, tmin, tmax, points, threshold)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose { s1, c1, out } => {
            cmd_decompose(SpinLength::from_twice(s1), c1, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite } => Ok(if verify::run(suite) {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }),
    }
}

fn build_state(
    s1: SpinLength,
    s2: SpinLength,
    weights: Option<Vec<f64>>,
    c1: Option<f64>,
    c2: Option<f64>,
) -> Result<InvariantState> {
    if let Some(w) = weights {
        return Ok(InvariantState::new(s1, s2, w)?);
    }
    let Some(c1) = c1 else {
        bail!("give either --weights or --c1");
    };
    // Multiplet weights depend only on J, so the family with the small spin
    // second also covers the swapped order.
    let (big, small) = if s2.twice() <= s1.twice() { (s1, s2) } else { (s2, s1) };
    let st = match (small, c2) {
        (SpinLength::HALF, None) => from_correlators_half(big, c1)?,
        (SpinLength::HALF, Some(_)) => bail!("--c2 is not used when one spin is 1/2; drop it"),
        (SpinLength::ONE, Some(c2)) => from_correlators_one(big, c1, c2)?,
        (SpinLength::ONE, None) => bail!("--c2 is required when the smaller spin is 1"),
        _ => bail!(
            "correlators fix the state only when one spin is 1/2 or 1 (got 2S1 = {}, 2S2 = {}); use --weights",
            s1.twice(),
            s2.twice()
        ),
    };
    Ok(InvariantState::new(s1, s2, st.weights().to_vec())?)
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn parse_pair(text: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok((
            a.parse().with_context(|| format!("--pair: bad site index {a:?}"))?,
            b.parse().with_context(|| format!("--pair: bad site index {b:?}"))?,
        )),
        _ => bail!("--pair expects two comma-separated site indices, got {text:?}"),
    }
}

fn load_spec(path: &Path) -> Result<LatticeSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase();
    let spec: LatticeSpec = match ext.as_str() {
        "toml" => toml::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?,
        "json" => serde_json::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?,
        _ => bail!("{}: spec files must end in .toml or .json", path.display()),
    };
    Ok(spec)
}

fn cmd_thermal(path: &Path, pair: &str, tmin: f64, tmax: f64, points: usize, threshold: bool) -> Result<()> {
    let spec = load_spec(path)?;
    let pair = parse_pair(pair)?;
    let temps = temperature_grid(tmin, tmax, points)?;
    let ed = ExactDiagonalization::with(&spec, dim_cap_from_env(), Execution::default())
        .with_context(|| format!("{}", path.display()))?;
    let table = scan(&ed, pair, &temps)?;
    println!("T,c1,c2,min_pt_eig,ppt");
    for r in &table.rows {
        println!("{},{},{},{},{}", sig12(r.t), sig12(r.c1), sig12(r.c2), sig12(r.min_pt_eig), r.ppt);
    }
    if threshold {
        match threshold_temperature_ed(&ed, pair) {
            Ok(t) => println!("# T* = {}", sig12(t)),
            Err(Error::NoThreshold(why)) => {
                eprintln!("{why}");
                println!("# no threshold");
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct DecomposeSummary<'a> {
    out: &'a Path,
    s1: u32,
    c1: f64,
    gamma: f64,
    order: usize,
    nodes: usize,
    reconstruction_error: f64,
}

fn cmd_decompose(s: SpinLength, c1: f64, out: &Path) -> Result<()> {
    let st = from_correlators_half(s, c1)?;
    let dec = decompose(&st)?;
    fs::write(out, serde_json::to_string_pretty(&dec)?).with_context(|| format!("writing {}", out.display()))?;
    print_json(&DecomposeSummary {
        out,
        s1: s.twice(),
        c1: dec.c1,
        gamma: dec.gamma,
        order: dec.order,
        nodes: dec.nodes.len(),
        reconstruction_error: dec.reconstruction_error,
    })
}

/// Twelve significant digits, `%g` style: trailing zeros dropped, scientific
/// notation outside `1e-5 <= |x| < 1e12`.
fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}e{exp}");
    }
    let decimals = (11 - exp).max(0) as usize;
    let fixed = format!("{x:.decimals$}");
    if fixed.contains('.') {
        fixed.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        fixed
    }
}
