//! `toric-cohom`: cohomology tables, exceptional-sequence checks and figures for line
//! bundles given as differences of lattice polyhedra.

mod problem;
mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use toric_cohom::cohomology::{
    classical_cohomology_over, cohomology_table_with, default_degree_box, good_cover_report,
    h0_containment, CohomologyTable, CoverMode, DegreeBox, EngineOptions, GoodCoverOptions,
    DEFAULT_SAMPLES, DEFAULT_SEED,
};
use toric_cohom::divisor::{divisor_of_virtual, nef_decompose, ToricDivisor};
use toric_cohom::exceptional::{is_exceptional_sequence, Direction, NefSequence};
use toric_cohom::linalg::Field;
use toric_cohom::MVec;

use problem::{Issue, Problem};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}", join_issues(.0))]
    Invalid(Vec<Issue>),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("oracle mismatch:\n{0}")]
    OracleMismatch(String),
    #[error("sequence is not exceptional")]
    NotExceptional,
    #[error(transparent)]
    Core(#[from] toric_cohom::Error),
}

fn join_issues(issues: &[Issue]) -> String {
    issues
        .iter()
        .map(Issue::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::OracleMismatch(_) => 2,
            CliError::Core(toric_cohom::Error::UnboundedBox) => 3,
            _ => 1,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "toric-cohom",
    version,
    about = "Cohomology of torus-invariant line bundles on toric varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Oracle {
    Classical,
    H0,
    /// classical, h0 and the sampled good-cover verifier
    All,
    None,
}

#[derive(Subcommand)]
enum Command {
    /// Check the fan, the tail cone and every polyhedron of a problem file.
    Validate { file: PathBuf },
    /// Cohomology table of one bundle.
    Cohomology {
        file: PathBuf,
        #[arg(allow_hyphen_values = true)]
        bundle: String,
        /// Degree box `lo1,lo2:hi1,hi2`.
        #[arg(long = "box", allow_hyphen_values = true)]
        degree_box: Option<DegreeBox>,
        /// `q` or `fp:<prime>`.
        #[arg(long)]
        field: Option<Field>,
        /// `max` or `all`.
        #[arg(long)]
        cover: Option<CoverMode>,
        #[arg(long, value_enum)]
        oracle: Option<Oracle>,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
        /// Seed of the good-cover sampler.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that nef bundles, in the given order, form an exceptional sequence.
    Exceptional {
        file: PathBuf,
        #[arg(required = true, allow_hyphen_values = true)]
        bundles: Vec<String>,
        /// `reverse`: Ext^*(L_j, L_i) = 0 for i < j; `forward`: Ext^*(L_i, L_j) = 0.
        #[arg(long, default_value = "reverse")]
        direction: Direction,
        #[arg(long = "box", allow_hyphen_values = true)]
        degree_box: Option<DegreeBox>,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a divisor as a difference of nef polyhedra `(D + N·H, N·H)`.
    NefDecompose {
        file: PathBuf,
        /// Bundle whose divisor is decomposed.
        #[arg(
            long,
            conflicts_with = "divisor",
            required_unless_present = "divisor",
            allow_hyphen_values = true
        )]
        bundle: Option<String>,
        /// Divisor coefficients in ray order, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        divisor: Option<Vec<i64>>,
        /// Bundle whose plus part is the ample polytope; defaults to the file's `ample`.
        #[arg(long, allow_hyphen_values = true)]
        ample: Option<String>,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG picture of `Δ⁻` against `Δ⁺ - m` (rank 2 only).
    Render {
        file: PathBuf,
        #[arg(allow_hyphen_values = true)]
        bundle: String,
        /// Degree `m1,m2`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        degree: Vec<i64>,
        #[arg(long = "box", allow_hyphen_values = true)]
        degree_box: Option<DegreeBox>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the validation exit code; 2 is reserved for oracles
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn load_valid(file: &Path) -> Result<Problem, CliError> {
    let problem = Problem::load(file)?;
    problem.require_valid()?;
    Ok(problem)
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Validate { file } => {
            let problem = Problem::load(&file)?;
            problem.require_valid()?;
            println!(
                "ok: {} rays, {} maximal cones, {} bundles",
                problem.fan.rays().len(),
                problem.fan.max_cones().len(),
                problem.bundles.len()
            );
            Ok(())
        }
        Command::Cohomology {
            file,
            bundle,
            degree_box,
            field,
            cover,
            oracle,
            format,
            seed,
            out,
        } => {
            let problem = load_valid(&file)?;
            let opts = &problem.options;
            let field = match field {
                Some(f) => f,
                None => opts
                    .field
                    .as_deref()
                    .map(str::parse)
                    .transpose()
                    .map_err(|e| CliError::Usage(format!("options.field: {e}")))?
                    .unwrap_or_default(),
            };
            let cover = match cover {
                Some(c) => c,
                None => opts
                    .cover
                    .as_deref()
                    .map(str::parse)
                    .transpose()?
                    .unwrap_or_default(),
            };
            let oracles = match oracle {
                Some(o) => vec![o],
                None => opts
                    .oracles
                    .iter()
                    .map(|s| {
                        Oracle::from_str(s, true).map_err(|_| {
                            CliError::Usage(format!("options.oracles: unknown oracle {s:?}"))
                        })
                    })
                    .collect::<Result<_, _>>()?,
            };
            let seed = seed.or(opts.seed).unwrap_or(DEFAULT_SEED);

            let l = problem.bundle(&bundle)?;
            let b = match degree_box.or_else(|| problem.degree_box.clone()) {
                Some(b) => b,
                None => default_degree_box(&l).ok_or(toric_cohom::Error::UnboundedBox)?,
            };
            if b.dim() != l.dim() {
                return Err(CliError::Usage(format!("box {b} has the wrong dimension")));
            }
            let table = cohomology_table_with(&l, &b, &EngineOptions { field, cover })?;
            let text = match format {
                Format::Tsv => table_tsv(&table),
                Format::Json => to_json(&table),
            };
            emit(out.as_deref(), &text)?;

            let mismatches = cross_check(&problem, &l, &table, &oracles, field, seed)?;
            if mismatches.is_empty() {
                Ok(())
            } else {
                Err(CliError::OracleMismatch(mismatches.join("\n")))
            }
        }
        Command::Exceptional {
            file,
            bundles,
            direction,
            degree_box,
            format,
            out,
        } => {
            let problem = load_valid(&file)?;
            let mut polytopes = Vec::new();
            for name in &bundles {
                let (plus, minus) = problem.polyhedra(name)?;
                let [apex] = minus.points() else {
                    return Err(CliError::Usage(format!(
                        "bundle {name:?} is not nef: its minus part is not a point"
                    )));
                };
                polytopes.push(plus.translate(&-apex));
            }
            let seq = NefSequence::new(polytopes, problem.fan.clone())?;
            let report = is_exceptional_sequence(&seq, direction, degree_box.as_ref())?;
            let text = match format {
                Format::Json => to_json(&report),
                Format::Tsv => {
                    let mut s = String::new();
                    for v in &report.violations {
                        writeln!(
                            s,
                            "Ext^{}({}, {}) = {} at {}",
                            v.i, bundles[v.from], bundles[v.to], v.dim, v.degree
                        )
                        .unwrap();
                    }
                    let verdict = if report.is_exceptional() {
                        "exceptional"
                    } else {
                        "not exceptional"
                    };
                    writeln!(s, "{verdict} ({direction})").unwrap();
                    s
                }
            };
            emit(out.as_deref(), &text)?;
            if report.is_exceptional() {
                Ok(())
            } else {
                Err(CliError::NotExceptional)
            }
        }
        Command::NefDecompose {
            file,
            bundle,
            divisor,
            ample,
            format,
            out,
        } => {
            let problem = load_valid(&file)?;
            let d = match (bundle, divisor) {
                (Some(name), _) => divisor_of_virtual(&problem.bundle(&name)?),
                (None, Some(c)) => ToricDivisor::new(c),
                (None, None) => unreachable!("clap requires one of them"),
            };
            let ample = match ample.or_else(|| problem.ample.clone()) {
                Some(name) => Some(problem.polyhedra(&name)?.0.clone()),
                None => None,
            };
            let r = nef_decompose(&d, &problem.fan, ample.as_ref())?;
            let text = match format {
                Format::Json => to_json(&NefReport {
                    divisor: d.coefficients().to_vec(),
                    multiple: r.multiple,
                    plus: r.bundle.plus().points().to_vec(),
                    minus: r.bundle.minus().points().to_vec(),
                }),
                Format::Tsv => {
                    let pts =
                        |v: &[MVec]| v.iter().map(MVec::to_string).collect::<Vec<_>>().join(" ");
                    format!(
                        "divisor\t{d}\nmultiple\t{}\nplus\t{}\nminus\t{}\n",
                        r.multiple,
                        pts(r.bundle.plus().points()),
                        pts(r.bundle.minus().points())
                    )
                }
            };
            emit(out.as_deref(), &text)
        }
        Command::Render {
            file,
            bundle,
            degree,
            degree_box,
            out,
        } => {
            let problem = load_valid(&file)?;
            if problem.dim() != 2 {
                return Err(CliError::Usage(format!(
                    "rendering needs rank 2, the problem has rank {}",
                    problem.dim()
                )));
            }
            if degree.len() != 2 {
                return Err(CliError::Usage("--degree needs two coordinates".into()));
            }
            let m = MVec::new(degree);
            let l = problem.bundle(&bundle)?;
            let view = viewport(&l, &m, degree_box.or_else(|| problem.degree_box.clone()));
            emit(out.as_deref(), &svg::render(&l, &m, &bundle, &view))
        }
    }
}

#[derive(Serialize)]
struct NefReport {
    divisor: Vec<i64>,
    multiple: u32,
    plus: Vec<MVec>,
    minus: Vec<MVec>,
}

/// `m_1 … m_r h0 … hd`, one row per nonzero degree.
fn table_tsv(t: &CohomologyTable) -> String {
    let mut s = String::new();
    let head: Vec<String> = (1..=t.dim())
        .map(|i| format!("m{i}"))
        .chain((0..=t.dim()).map(|i| format!("h{i}")))
        .collect();
    writeln!(s, "{}", head.join("\t")).unwrap();
    for (m, h) in t.entries() {
        let row: Vec<String> = m
            .coords()
            .iter()
            .map(i64::to_string)
            .chain(h.iter().map(usize::to_string))
            .collect();
        writeln!(s, "{}", row.join("\t")).unwrap();
    }
    s
}

fn cross_check(
    problem: &Problem,
    l: &toric_cohom::VirtualPolyhedron,
    table: &CohomologyTable,
    oracles: &[Oracle],
    field: Field,
    seed: u64,
) -> Result<Vec<String>, CliError> {
    let wants = |o: Oracle| oracles.contains(&o) || oracles.contains(&Oracle::All);
    let mut out = Vec::new();
    let d = divisor_of_virtual(l);
    for m in table.degree_box().iter() {
        let h = table.get(&m);
        if wants(Oracle::Classical) {
            let c = classical_cohomology_over(&d, &problem.fan, &m, field)?;
            if c != h {
                out.push(format!("classical at {m}: engine {h:?}, oracle {c:?}"));
            }
        }
        if wants(Oracle::H0) {
            let c = h0_containment(l, &m);
            if c != h[0] {
                out.push(format!("h0 at {m}: engine {}, containment {c}", h[0]));
            }
        }
        if oracles.contains(&Oracle::All) {
            let opts = GoodCoverOptions {
                seed,
                samples: DEFAULT_SAMPLES,
            };
            let r = good_cover_report(l, &m, &opts)?;
            if !r.passed() {
                out.push(format!("good cover at {m}: verifier failed"));
            }
            let g = r.geometric_cohomology(problem.fan.max_cones(), l.dim(), field)?;
            if g != h {
                out.push(format!("good cover at {m}: engine {h:?}, geometric {g:?}"));
            }
        }
    }
    Ok(out)
}

/// The degree box (or, without one, nothing) joined with the generators of both drawn
/// polyhedra, inflated by 1.
fn viewport(l: &toric_cohom::VirtualPolyhedron, m: &MVec, b: Option<DegreeBox>) -> DegreeBox {
    let generators = l
        .minus()
        .points()
        .iter()
        .cloned()
        .chain(l.plus().points().iter().map(|p| p - m));
    let mut view = b.or_else(|| default_degree_box(l));
    for g in generators {
        let here = DegreeBox::point(g);
        view = Some(match view {
            Some(v) => v.hull(&here),
            None => here,
        });
    }
    view.expect("polyhedra have generators").inflate(1)
}
