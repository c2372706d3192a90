use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use mols_mub::mub::{design_mubs, ws_mub_number, UNBIASED_TOL};
use mols_mub::net::{build_net, representative_cells, validate_net};
use mols_mub::reproduce;
use mols_mub::spectra::{lemma_verify, STRUCTURE_TOL};
use mols_mub::squares::{
    are_orthogonal, builtin_mols10, ff_complete_mols, format_squares, macneish_bound, macneish_family, macneish_mols,
    parse_squares, quantum_macneish_bound, validate_latin,
};
use mols_mub::weyl::search_decomposition;
use mols_mub::{FieldSpec, LatinSquare, MolsFamily, MubOptions, MubReport};

/// Latin squares, net designs and mutually unbiased bases from Weyl-Schwinger classes.
#[derive(Parser)]
#[command(name = "mols-mub", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that every square in a file is Latin and that they are pairwise orthogonal.
    Validate { file: PathBuf },
    /// Build the net design of a MOLS family and print its representative cells.
    Net {
        #[command(flatten)]
        source: Source,
        /// Exit with status 1 when the design violates the net invariants.
        #[arg(long)]
        strict: bool,
    },
    /// Maximum number of MUBs among the joint eigenbases of all commuting classes.
    MubCount {
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        numeric: Numeric,
    },
    /// Run the design pipeline: representative cells, commutation, eigenbases, clique.
    DesignMubs {
        #[command(flatten)]
        source: CyclicSource,
        /// Split labels into field digits (prime-power orders only).
        #[arg(long)]
        prime_power: bool,
        #[command(flatten)]
        numeric: Numeric,
    },
    /// Verify the CRT permutation identities for coprime d1, d2.
    Lemma {
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
    },
    /// MacNeish MOLS: the product family for --d, or the product of two family files.
    Macneish {
        #[arg(long, conflicts_with = "files")]
        d: Option<usize>,
        #[arg(num_args = 2, required_unless_present = "d")]
        files: Vec<PathBuf>,
    },
    /// MacNeish lower bounds on MOLS and MUBs.
    Bounds {
        #[arg(long)]
        d: usize,
    },
    /// Run every reproduction check and print a pass/fail table.
    Report {
        #[arg(long, required = true)]
        paper: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Square file (text format).
    file: Option<PathBuf>,
    /// The embedded pair of order-10 orthogonal squares.
    #[arg(long = "builtin-10")]
    builtin_10: bool,
    /// The complete family of q-1 MOLS over GF(q).
    #[arg(long)]
    ff: Option<usize>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CyclicSource {
    file: Option<PathBuf>,
    #[arg(long = "builtin-10")]
    builtin_10: bool,
    #[arg(long)]
    ff: Option<usize>,
    /// The single cyclic square L(i, j) = i + j mod d.
    #[arg(long)]
    cyclic: Option<usize>,
}

#[derive(Args)]
struct Numeric {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Unbiasedness tolerance on |<a|b>|² - 1/d.
    #[arg(long, default_value_t = UNBIASED_TOL)]
    tolerance: f64,
}

impl Numeric {
    fn options(&self) -> anyhow::Result<MubOptions> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            bail!("tolerance must be positive");
        }
        Ok(MubOptions { seed: self.seed, tolerance: self.tolerance })
    }
}

fn read_family(path: &Path) -> anyhow::Result<MolsFamily> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let grids = parse_squares(&text).with_context(|| path.display().to_string())?;
    let order = grids[0].len();
    let squares = grids.into_iter().map(LatinSquare::new).collect::<Result<Vec<_>, _>>()?;
    Ok(MolsFamily::new(order, squares)?)
}

fn load(
    file: &Option<PathBuf>,
    builtin_10: bool,
    ff: Option<usize>,
    cyclic: Option<usize>,
) -> anyhow::Result<MolsFamily> {
    Ok(match (file, ff, cyclic) {
        (Some(path), _, _) => read_family(path)?,
        _ if builtin_10 => builtin_mols10(),
        (_, Some(q), _) => ff_complete_mols(q)?,
        (_, _, Some(d)) => MolsFamily::new(d, vec![LatinSquare::cyclic(d)])?,
        _ => bail!("no square source given"),
    })
}

fn print_json(value: &impl serde::Serialize) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn validate(path: &Path, as_json: bool) -> anyhow::Result<bool> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let grids = parse_squares(&text).with_context(|| path.display().to_string())?;
    let mut problems = Vec::new();
    for (k, grid) in grids.iter().enumerate() {
        if let Some(v) = validate_latin(grid)?.violation {
            problems.push(format!("square {k}: {v}"));
        }
    }
    let latin = problems.is_empty();
    let mut orthogonal = true;
    if latin {
        let squares = grids.iter().cloned().map(LatinSquare::new).collect::<Result<Vec<_>, _>>()?;
        for i in 0..squares.len() {
            for j in i + 1..squares.len() {
                if let Some(c) = are_orthogonal(&squares[i], &squares[j])?.collision {
                    orthogonal = false;
                    problems.push(format!(
                        "squares {i} and {j}: cells {:?} and {:?} both carry pair {:?}",
                        c.first, c.second, c.pair
                    ));
                }
            }
        }
    }
    let yes = |b: bool| if b { "yes" } else { "no" };
    if as_json {
        print_json(&json!({
            "squares": grids.len(),
            "latin": latin,
            "pairwise_orthogonal": latin && orthogonal,
            "violations": problems,
        }))?;
    } else {
        let ortho = if latin { yes(orthogonal) } else { "not checked" };
        let noun = if grids.len() == 1 { "square" } else { "squares" };
        println!("{} {noun}, Latin: {}, pairwise orthogonal: {ortho}", grids.len(), yes(latin));
        for p in &problems {
            println!("  {p}");
        }
    }
    Ok(latin && orthogonal)
}

fn net(family: &MolsFamily, strict: bool, as_json: bool) -> anyhow::Result<bool> {
    let design = build_net(family);
    let cells: Vec<String> = representative_cells(&design).iter().map(ToString::to_string).collect();
    let violation = validate_net(&design).violation;
    if as_json {
        let mut value = serde_json::to_value(&design)?;
        let obj = value.as_object_mut().expect("design serializes to an object");
        obj.insert("representative_cells".into(), json!(cells));
        obj.insert("valid".into(), json!(violation.is_none()));
        obj.insert("violation".into(), violation.as_ref().map_or(Value::Null, |v| json!(v.to_string())));
        print_json(&value)?;
    } else {
        for cell in &cells {
            println!("{cell}");
        }
        match &violation {
            None => println!("net invariants: satisfied"),
            Some(v) => println!("net invariants: violated ({v})"),
        }
    }
    Ok(!strict || violation.is_none())
}

fn mub_text(report: &MubReport) -> String {
    let mut out = String::new();
    for v in &report.row_verdicts {
        let verdict = match &v.witness {
            None => "commutes".to_string(),
            Some(w) => format!("does not commute: {} {} -> {}", w.a, w.b, w.value),
        };
        let _ = writeln!(out, "row {}: {}  {verdict}", v.row, v.cell);
    }
    for e in &report.excluded {
        let _ = writeln!(out, "excluded {}: {}", e.class, e.reason);
    }
    let chosen: Vec<&str> = report.max_clique.vertices.iter().map(|&v| report.bases[v].as_str()).collect();
    let _ = writeln!(out, "d = {}: {} candidate bases", report.dimension, report.n_bases);
    let _ = writeln!(out, "maximum mutually unbiased subset: {} [{}]", report.max_clique.size, chosen.join(", "));
    let _ = write!(out, "worst unbiasedness deviation: {:.3e}", report.worst_deviation);
    if let Some(v) = &report.net_violation {
        let _ = write!(out, "\nnote: the design violates the net invariants ({v})");
    }
    out
}

fn emit_mub(report: &MubReport, as_json: bool) -> anyhow::Result<()> {
    if as_json {
        print_json(report)
    } else {
        println!("{}", mub_text(report));
        Ok(())
    }
}

fn design(source: &CyclicSource, prime_power: bool, options: &MubOptions, as_json: bool) -> anyhow::Result<()> {
    let family = load(&source.file, source.builtin_10, source.ff, source.cyclic)?;
    let decomposition = if prime_power {
        let field = FieldSpec::with_order(family.order())?;
        let cells = representative_cells(&build_net(&family));
        Some(search_decomposition(&field, &cells)?)
    } else {
        None
    };
    emit_mub(&design_mubs(&family, decomposition.as_ref(), options)?, as_json)
}

fn lemma(d1: usize, d2: usize, as_json: bool) -> anyhow::Result<bool> {
    let r = lemma_verify(d1, d2)?;
    let pass = r.passes(STRUCTURE_TOL);
    if as_json {
        print_json(
            &json!({ "d1": d1, "d2": d2, "x_deviation": r.x_deviation, "z_deviation": r.z_deviation, "pass": pass }),
        )?;
    } else if pass {
        println!("PASS, max deviation < 1e−12");
        println!("X: {:.1e}, Z: {:.1e}", r.x_deviation, r.z_deviation);
    } else {
        println!("FAIL, max deviation {:.1e}", r.x_deviation.max(r.z_deviation));
    }
    Ok(pass)
}

fn macneish(d: Option<usize>, files: &[PathBuf], as_json: bool) -> anyhow::Result<()> {
    let family = match d {
        Some(d) => macneish_mols(d)?,
        None => macneish_family(&read_family(&files[0])?, &read_family(&files[1])?)?,
    };
    if as_json {
        let squares: Vec<_> = family.squares().iter().map(LatinSquare::rows).collect();
        print_json(&json!({ "order": family.order(), "squares": squares }))
    } else {
        println!("{}", format_squares(family.squares()));
        Ok(())
    }
}

fn bounds(d: usize, as_json: bool) -> anyhow::Result<()> {
    let (mols, mub) = (macneish_bound(d)?, quantum_macneish_bound(d)?);
    if as_json {
        print_json(&json!({ "d": d, "mols": mols, "mub": mub }))
    } else {
        println!("MOLS ≥ {mols}, MUB ≥ {mub}");
        Ok(())
    }
}

fn report(seed: u64, as_json: bool) -> anyhow::Result<bool> {
    let outcomes = reproduce::run_all(seed);
    let passed = outcomes.iter().all(|o| o.passed);
    if as_json {
        print_json(&outcomes)?;
    } else {
        for o in &outcomes {
            println!("{} {:>3}  {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.name, o.detail);
        }
        let failed = outcomes.iter().filter(|o| !o.passed).count();
        println!("{} passed, {failed} failed", outcomes.len() - failed);
    }
    Ok(passed)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let as_json = cli.json;
    match cli.command {
        Command::Validate { file } => validate(&file, as_json),
        Command::Net { source, strict } => {
            net(&load(&source.file, source.builtin_10, source.ff, None)?, strict, as_json)
        }
        Command::MubCount { d, numeric } => {
            emit_mub(&ws_mub_number(d, &numeric.options()?)?, as_json)?;
            Ok(true)
        }
        Command::DesignMubs { source, prime_power, numeric } => {
            design(&source, prime_power, &numeric.options()?, as_json)?;
            Ok(true)
        }
        Command::Lemma { d1, d2 } => lemma(d1, d2, as_json),
        Command::Macneish { d, files } => macneish(d, &files, as_json).map(|_| true),
        Command::Bounds { d } => bounds(d, as_json).map(|_| true),
        Command::Report { seed, .. } => report(seed, as_json),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
