use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use refdet::enumerate::{enumerate_3trees, enumerate_bbasic, enumerate_doombs, enumerate_trees};
use refdet::harness::{
    calibrate_constants, verify_identity, CalibrateOptions, Identity, Mode, ParamRange, SystemSpec, VerifyParams,
    WeightSpec,
};
use refdet::rootsystems::Family;
use refdet::Error;

#[derive(Parser)]
#[command(name = "refdet", version, about = "Exact checks of determinant identities for reflection commutators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate both sides of an identity and compare them.
    Verify {
        /// gendet, k1, keven-pf, matrix-tree, mv or bn-tree.
        identity: String,
        /// `an:N`, `bn:N`, `dn:N`, `file:PATH` or `random:DIM:COUNT`.
        #[arg(long, default_value = "an:2")]
        family: String,
        #[arg(long)]
        k: Option<usize>,
        /// symbolic, unit, random, random:BOUND or file:PATH.
        #[arg(long, default_value = "symbolic")]
        weights: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "exact")]
        mode: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// u or lambda for mv; derived or stated for bn-tree.
        #[arg(long)]
        variant: Option<String>,
        /// Record wall-clock time in the report (makes it non-reproducible).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Tabulate lhs/rhs over a parameter range.
    Calibrate {
        identity: String,
        /// `n=LO..HI`, or `m=LO..HI` for mv.
        #[arg(long)]
        range: String,
        /// an, bn or dn.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        variant: Option<String>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List combinatorial structures.
    Enumerate {
        kind: Structure,
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        edges: Option<usize>,
        #[arg(long)]
        count_only: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Structure {
    Doombs,
    Trees,
    #[value(name = "3trees")]
    ThreeTrees,
    Bbasic,
}

fn emit(text: &str, report: Option<&PathBuf>) -> Result<(), Error> {
    println!("{text}");
    if let Some(p) = report {
        std::fs::write(p, format!("{text}\n")).map_err(|e| Error::FileFormat(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn parse_family(s: &str) -> Result<Family, Error> {
    match s {
        "an" | "a" => Ok(Family::A),
        "bn" | "b" => Ok(Family::B),
        "dn" | "d" => Ok(Family::D),
        _ => Err(Error::Unknown {
            kind: "family",
            value: s.into(),
        }),
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Verify {
            identity,
            family,
            k,
            weights,
            seed,
            mode,
            tol,
            variant,
            timing,
            report,
        } => {
            let id: Identity = identity.parse()?;
            let params = VerifyParams {
                system: family.parse::<SystemSpec>()?,
                k,
                weights: WeightSpec::parse(&weights, seed)?,
                seed,
                mode: mode.parse::<Mode>()?,
                tol,
                variant,
                timing,
            };
            let r = verify_identity(id, &params)?;
            emit(&r.to_json(), report.as_ref())?;
            Ok(r.equal)
        }
        Command::Calibrate {
            identity,
            range,
            family,
            k,
            variant,
            report,
        } => {
            let id: Identity = identity.parse()?;
            let opts = CalibrateOptions {
                family: family.as_deref().map(parse_family).transpose()?,
                k,
                variant,
            };
            let r = calibrate_constants(id, &range.parse::<ParamRange>()?, &opts)?;
            emit(&r.to_json(), report.as_ref())?;
            Ok(r.stable)
        }
        Command::Enumerate {
            kind,
            vertices,
            edges,
            count_only,
            report,
        } => {
            let (name, edges, items) = match kind {
                Structure::Doombs => {
                    let e = edges.ok_or_else(|| Error::Precondition("doombs need --edges".into()))?;
                    ("doombs", e, serde_json::to_value(enumerate_doombs(vertices, e)))
                }
                Structure::Trees => {
                    let e = vertices.saturating_sub(1);
                    if edges.is_some_and(|x| x != e) {
                        return Err(Error::Precondition(format!("trees on {vertices} vertices have {e} edges")));
                    }
                    ("trees", e, serde_json::to_value(enumerate_trees(vertices)))
                }
                Structure::ThreeTrees => {
                    let m = edges.unwrap_or(vertices.saturating_sub(1) / 2);
                    ("3trees", m, serde_json::to_value(enumerate_3trees(m, vertices)?))
                }
                Structure::Bbasic => {
                    if edges.is_some_and(|x| x != vertices) {
                        return Err(Error::Precondition("B-basic graphs have as many edges as vertices".into()));
                    }
                    ("bbasic", vertices, serde_json::to_value(enumerate_bbasic(vertices)))
                }
            };
            let items = items.expect("structures serialize");
            let count = items.as_array().map_or(0, Vec::len);
            let mut out = json!({ "kind": name, "vertices": vertices, "edges": edges, "count": count });
            if !count_only {
                out["items"] = items;
            }
            emit(&serde_json::to_string_pretty(&out).expect("json"), report.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
