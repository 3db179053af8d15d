//! The `singer` command line. [`run`] is the whole program minus process
//! plumbing, so tests can drive it in-process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use singer_core::analysis::{abelianization, coset_enumerate, DEFAULT_MAX_COSETS};
use singer_core::diffset::{
    enumerate_difference_sets, plane_modulus, singer_difference_set, verify_difference_set, BasedDifferenceSet,
};
use singer_core::polygon::{
    build_digon, build_triangle, quotient_digon, quotient_triangle, standard_action, verify_covering,
    verify_generalized_polygon, ChamberSystem, Label, SingerPolygon,
};
use singer_core::presentation::{lattice_presentation, universal_presentation_weyl};
use singer_core::weyl::{build_weyl_graph, extract_gluing_matrix, validate_gluing};

use crate::formats::{parse_gluing, parse_list, parse_presentation, parse_weyl, write_gluing, write_weyl};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout, stderr: String::new() }
    }

    fn fail(stdout: String) -> Self {
        Outcome { code: 1, stdout, stderr: String::new() }
    }

    fn error(message: impl std::fmt::Display) -> Self {
        Outcome { code: 1, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

#[derive(Debug, Clone)]
struct List(Vec<u32>);

fn list(text: &str) -> Result<List, String> {
    parse_list(text).map(List)
}

#[derive(Parser, Debug)]
#[command(name = "singer", version, about = "Singer difference sets, cyclic polygons and lattice presentations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Planar difference sets.
    #[command(subcommand)]
    Diffset(DiffsetCommand),
    /// Generalized digons and triangles and their cyclic quotients.
    #[command(subcommand)]
    Polygon(PolygonCommand),
    /// Gluing matrices, Singer graphs and lattice presentations.
    #[command(subcommand)]
    Gluing(GluingCommand),
    /// Abelianization and coset enumeration of presentations.
    #[command(subcommand)]
    Group(GroupCommand),
}

#[derive(Subcommand, Debug)]
enum DiffsetCommand {
    /// Print the Singer difference set of order q.
    Gen {
        #[arg(long)]
        q: u32,
    },
    /// Check the difference property modulo delta.
    Verify {
        #[arg(long)]
        delta: u32,
        #[arg(long, value_parser = list)]
        set: List,
    },
    /// Enumerate all difference sets of order q up to equivalence.
    Classes {
        #[arg(long)]
        q: u32,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Shape {
    /// `q` or `q1,q2`.
    #[arg(long, value_parser = list)]
    digon: Option<List>,
    /// A based difference set, e.g. `0,1,3`.
    #[arg(long, value_parser = list)]
    triangle: Option<List>,
}

#[derive(Subcommand, Debug)]
enum PolygonCommand {
    /// Build the chamber system, optionally checking the m-gon axioms.
    Build {
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        check: Option<u32>,
    },
    /// List the defining suites of the cyclic quotient.
    Suites {
        #[command(flatten)]
        shape: Shape,
    },
    /// Check that the quotient suites lift along the standard action.
    CoverCheck {
        #[command(flatten)]
        shape: Shape,
    },
}

#[derive(Subcommand, Debug)]
enum GluingCommand {
    /// Check the column conditions of a gluing matrix.
    Validate { file: PathBuf },
    /// Print the lattice presentation (or the universal group of the Singer graph).
    Present {
        file: PathBuf,
        #[arg(long)]
        universal: bool,
    },
    /// Print the Singer graph assembled from a gluing matrix.
    Weyl { file: PathBuf },
    /// Recover a gluing matrix from Singer graph data.
    Extract { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum GroupCommand {
    /// Abelian invariants of a presentation.
    Abelianize { file: PathBuf },
    /// Enumerate cosets of the trivial subgroup.
    Enumerate {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        limit: usize,
    },
}

type Step = Result<Outcome, Outcome>;

/// Parses `args` (including the program name) and executes the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let result = match cli.command {
        Command::Diffset(c) => diffset(c),
        Command::Polygon(c) => polygon(c),
        Command::Gluing(c) => gluing(c),
        Command::Group(c) => group(c),
    };
    result.unwrap_or_else(|failure| failure)
}

fn verdict(passed: bool, text: String) -> Step {
    Ok(if passed { Outcome::ok(text) } else { Outcome::fail(text) })
}

fn load<T, E: std::fmt::Display>(path: &Path, parse: impl Fn(&str) -> Result<T, E>) -> Result<T, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::error(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| Outcome::error(format!("{}: {e}", path.display())))
}

fn diffset(c: DiffsetCommand) -> Step {
    match c {
        DiffsetCommand::Gen { q } => {
            let d = singer_difference_set(q).map_err(Outcome::error)?;
            Ok(Outcome::ok(format!("{}\n", *d)))
        }
        DiffsetCommand::Verify { delta, set } => {
            let report = verify_difference_set(&set.0, delta);
            verdict(report.is_valid(), format!("{report}\n"))
        }
        DiffsetCommand::Classes { q } => {
            let census = enumerate_difference_sets(q).map_err(Outcome::error)?;
            let mut out = format!(
                "q={} subsets={} valid={} classes={}\n",
                census.q,
                census.subsets_scanned,
                census.valid_sets,
                census.classes.len()
            );
            for class in &census.classes {
                writeln!(out, "{class}").unwrap();
            }
            Ok(Outcome::ok(out))
        }
    }
}

enum Built {
    Digon(u32, u32),
    Triangle(BasedDifferenceSet),
}

fn shape(s: &Shape) -> Result<Built, Outcome> {
    if let Some(List(v)) = &s.digon {
        return match v[..] {
            [q] => Ok(Built::Digon(q, q)),
            [q1, q2] => Ok(Built::Digon(q1, q2)),
            _ => Err(Outcome::error("--digon takes q or q1,q2")),
        };
    }
    let v = &s.triangle.as_ref().expect("clap requires one shape").0;
    if v.len() < 2 {
        return Err(Outcome::error("--triangle needs at least two elements"));
    }
    let q = v.len() as u32 - 1;
    BasedDifferenceSet::new(v, plane_modulus(q)).map(Built::Triangle).map_err(Outcome::error)
}

fn chamber_system(b: &Built) -> Result<ChamberSystem, Outcome> {
    match b {
        Built::Digon(q1, q2) => build_digon(*q1, *q2).map_err(Outcome::error),
        Built::Triangle(d) => Ok(build_triangle(d)),
    }
}

fn quotient(b: &Built) -> Result<SingerPolygon, Outcome> {
    match b {
        Built::Digon(q1, q2) if q1 == q2 => quotient_digon(*q1).map_err(Outcome::error),
        Built::Digon(..) => Err(Outcome::error("cyclic quotients need q1 = q2")),
        Built::Triangle(d) => Ok(quotient_triangle(d)),
    }
}

fn polygon(c: PolygonCommand) -> Step {
    match c {
        PolygonCommand::Build { shape: s, check } => {
            let built = shape(&s)?;
            let system = chamber_system(&built)?;
            let mut out = match &built {
                Built::Digon(q1, q2) => format!("digon q1={q1} q2={q2}"),
                Built::Triangle(d) => {
                    let set: Vec<String> = d.elements().iter().map(u32::to_string).collect();
                    format!("triangle delta={} set={}", d.delta(), set.join(","))
                }
            };
            writeln!(
                out,
                " chambers={} panels={}+{}",
                system.chamber_count(),
                system.panel_count(Label::S),
                system.panel_count(Label::T)
            )
            .unwrap();
            match check {
                None => Ok(Outcome::ok(out)),
                Some(m) => {
                    let report = verify_generalized_polygon(&system, m);
                    writeln!(out, "{report}").unwrap();
                    verdict(report.passed(), out)
                }
            }
        }
        PolygonCommand::Suites { shape: s } => Ok(Outcome::ok(quotient(&shape(&s)?)?.to_string())),
        PolygonCommand::CoverCheck { shape: s } => {
            let built = shape(&s)?;
            let (system, p) = (chamber_system(&built)?, quotient(&built)?);
            let action = standard_action(&system).map_err(Outcome::error)?;
            let covered = verify_covering(&system, &action, &p).map_err(Outcome::error)?;
            let text = format!(
                "covering {}: {} suites, action of order {} on {} chambers\n",
                if covered { "verified" } else { "failed" },
                p.suites().len(),
                action.order(),
                system.chamber_count()
            );
            verdict(covered, text)
        }
    }
}

fn gluing(c: GluingCommand) -> Step {
    match c {
        GluingCommand::Validate { file } => {
            let report = validate_gluing(&load(&file, parse_gluing)?);
            verdict(report.is_valid(), format!("{report}\n"))
        }
        GluingCommand::Present { file, universal } => {
            let g = load(&file, parse_gluing)?;
            let p = if universal {
                build_weyl_graph(&g).and_then(|w| universal_presentation_weyl(&w))
            } else {
                lattice_presentation(&g)
            };
            Ok(Outcome::ok(p.map_err(Outcome::error)?.to_string()))
        }
        GluingCommand::Weyl { file } => {
            let w = build_weyl_graph(&load(&file, parse_gluing)?).map_err(Outcome::error)?;
            Ok(Outcome::ok(write_weyl(&w)))
        }
        GluingCommand::Extract { file } => {
            let w = load(&file, parse_weyl)?;
            let g = extract_gluing_matrix(&w, &w.orientation()).map_err(Outcome::error)?;
            Ok(Outcome::ok(write_gluing(&g)))
        }
    }
}

fn group(c: GroupCommand) -> Step {
    match c {
        GroupCommand::Abelianize { file } => {
            let p = load(&file, parse_presentation)?;
            Ok(Outcome::ok(format!("{}\n", abelianization(&p))))
        }
        GroupCommand::Enumerate { file, limit } => {
            let p = load(&file, parse_presentation)?;
            let table = coset_enumerate(&p, &[], limit).map_err(Outcome::error)?;
            Ok(Outcome::ok(format!("{}\n", table.status)))
        }
    }
}
