//! Command-line interface of the `polyproj` binary.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::balas::{in_test_cone, initial_test_cone, redundancy_test};
use crate::dd::dd_method;
use crate::error::{Error, Result};
use crate::io::{emit_ine, emit_poly, parse_ine, parse_inequality, parse_plp, parse_poly};
use crate::linalg::Rat;
use crate::minrep::{extract_projection, minimal_projected_representation, ProjRep};
use crate::plp::solve_plp;
use crate::polyhedron::{format_inequality, normalize_system, HSystem};
use crate::testkit::{gen_cyclic, gen_random, gen_simplex};

#[derive(Parser, Debug)]
#[command(
    name = "polyproj",
    version,
    about = "Exact polyhedral projection and parametric LP"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Minimal projected representation, one block per elimination level.
    Minrep {
        #[command(flatten)]
        input: InputArgs,
        /// Elimination order as comma-separated names (default: input order).
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<String>>,
    },
    /// Minimal representation of a projection.
    Project {
        #[command(flatten)]
        input: InputArgs,
        /// Number of leading variables to eliminate, or comma-separated names.
        #[arg(long)]
        eliminate: String,
        /// Elimination order used when `--eliminate` is a count.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<String>>,
    },
    /// Extreme rays of a pointed cone `{x | A x <= 0}`.
    ExtremeRays {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Whether an inequality is redundant for the input polyhedron.
    CheckRedundant {
        #[command(flatten)]
        input: InputArgs,
        /// The inequality as `a1 .. an c`, meaning `a.y <= c`.
        #[arg(long, allow_hyphen_values = true)]
        inequality: String,
    },
    /// Solve a parametric LP given in `.plp` format.
    Plp {
        /// Input file (standard input when omitted or `-`).
        input: Option<PathBuf>,
    },
    /// Write a generated instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, value_enum, default_value_t = Format::Poly, global = true)]
        format: Format,
    },
    /// Transcode between `.poly` and `.ine`.
    Convert {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        to: Format,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum GenKind {
    Simplex {
        n: usize,
    },
    Cyclic {
        d: usize,
        v: usize,
    },
    Random {
        n: usize,
        m: usize,
        bits: u32,
        seed: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Input file (standard input when omitted or `-`).
    pub input: Option<PathBuf>,
    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Poly,
    Ine,
}

/// Process exit status for an error: 1 when the problem has no (bounded)
/// solution, 2 for everything else.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible | Error::TriviallyInfeasible(_) | Error::Unbounded => 1,
        _ => 2,
    }
}

fn read_text(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
        }
        _ => {
            std::io::read_to_string(std::io::stdin()).map_err(|e| Error::Io(format!("stdin: {e}")))
        }
    }
}

fn read_system(args: &InputArgs) -> Result<(HSystem, Format)> {
    let format = args.format.unwrap_or_else(|| {
        match args
            .input
            .as_deref()
            .and_then(Path::extension)
            .and_then(|e| e.to_str())
        {
            Some("ine") => Format::Ine,
            _ => Format::Poly,
        }
    });
    let text = read_text(args.input.as_deref())?;
    let s = match format {
        Format::Poly => parse_poly(&text)?,
        Format::Ine => parse_ine(&text)?,
    };
    Ok((s, format))
}

fn emit(s: &HSystem, format: Format) -> String {
    match format {
        Format::Poly => emit_poly(s),
        Format::Ine => emit_ine(s),
    }
}

fn order_or_default(s: &HSystem, order: Option<Vec<String>>) -> Vec<String> {
    order.unwrap_or_else(|| s.var_names.clone())
}

fn render_levels(pr: &ProjRep, format: Format) -> String {
    let mut out = String::new();
    for (k, level) in pr.levels.iter().enumerate().take(pr.dim()) {
        if k == 0 {
            out.push_str("# level 0 (input)\n");
        } else {
            out.push_str(&format!("# level {k} (eliminated {})\n", pr.order[k - 1]));
        }
        out.push_str(&emit(level, format));
    }
    out
}

/// Runs a command and returns what it prints on standard output.
pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Minrep { input, order } => {
            let (s, format) = read_system(&input)?;
            let order = order_or_default(&s, order);
            let pr = minimal_projected_representation(&s, &order)?;
            Ok(render_levels(&pr, format))
        }
        Command::Project {
            input,
            eliminate,
            order,
        } => {
            let (s, format) = read_system(&input)?;
            let (order, k) = match eliminate.trim().parse::<usize>() {
                Ok(k) => (order_or_default(&s, order), k),
                Err(_) => {
                    let mut names: Vec<String> = eliminate
                        .split(',')
                        .map(|x| x.trim().to_string())
                        .filter(|x| !x.is_empty())
                        .collect();
                    let k = names.len();
                    names.extend(
                        s.var_names
                            .iter()
                            .filter(|v| !names.contains(v))
                            .cloned()
                            .collect::<Vec<_>>(),
                    );
                    (names, k)
                }
            };
            if k > s.dim() {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    max: s.dim(),
                });
            }
            let pr = minimal_projected_representation(&s, &order)?;
            Ok(emit(&extract_projection(&pr, k)?, format))
        }
        Command::ExtremeRays { input } => {
            let (s, _) = read_system(&input)?;
            let dd = dd_method(&s)?;
            let mut out = String::new();
            for r in &dd.rays {
                out.push_str(&r.iter().map(Rat::to_string).collect::<Vec<_>>().join(" "));
                out.push('\n');
            }
            Ok(out)
        }
        Command::CheckRedundant { input, inequality } => {
            let (s, _) = read_system(&input)?;
            let l = parse_inequality(&inequality, s.dim())?;
            let s = normalize_system(&s)?;
            crate::dd::require_feasible(&s)?;
            let tc = initial_test_cone(&s)?;
            let redundant = in_test_cone(&tc, &l)? && redundancy_test(&tc, &l)?;
            Ok(if redundant {
                "redundant\n"
            } else {
                "irredundant\n"
            }
            .to_string())
        }
        Command::Plp { input } => {
            let p = parse_plp(&read_text(input.as_deref())?)?;
            let sol = solve_plp(&p)?;
            let mut out = String::new();
            for (i, piece) in sol.pieces.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                out.push_str("region:\n");
                for l in &piece.region.ineqs {
                    out.push_str(&format!("  {}\n", format_inequality(l, &p.param_names)));
                }
                out.push_str(&format!("value: {}\n", piece.value.display(&p.param_names)));
            }
            Ok(out)
        }
        Command::Gen { kind, format } => {
            let s = match kind {
                GenKind::Simplex { n } => gen_simplex(n)?,
                GenKind::Cyclic { d, v } => gen_cyclic(d, v)?,
                GenKind::Random { n, m, bits, seed } => gen_random(n, m, bits, seed)?,
            };
            Ok(emit(&s, format))
        }
        Command::Convert { input, to } => {
            let (s, _) = read_system(&input)?;
            Ok(emit(&s, to))
        }
    }
}

/// Parses arguments, runs the command, writes its output and returns the
/// process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let output = cli.output.clone();
    match run(cli) {
        Ok(text) => {
            let written = match output {
                Some(path) => fs::write(&path, text)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code(&e)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Diagnostics level from `POLYPROJ_LOG` (`quiet`, `info` or `debug`).
pub fn init_logging() {
    let level = match std::env::var("POLYPROJ_LOG").as_deref() {
        Ok("debug") => log::LevelFilter::Debug,
        Ok("info") => log::LevelFilter::Info,
        Ok("quiet") => log::LevelFilter::Off,
        _ => log::LevelFilter::Warn,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .target(env_logger::Target::Stderr)
        .init();
}
