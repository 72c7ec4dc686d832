//! The `bornmeas` command line.
//!
//! Exit codes: 0 on success, 1 when a law suite reports failures, 2 on
//! usage, parse and input errors.

mod catalog;
mod document;
mod grid;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::thread;

use clap::{Parser, Subcommand};
use num::{BigInt, Signed};

pub use catalog::builtin_morphism;
pub use document::{
    parse_measure_document, parse_rational, serialize_measure_document, DocumentError,
    MeasureDocument, NumberLiteral, PointLiteral, SpaceDescriptor, FORMAT_VERSION,
};
pub use grid::{grid_uniform, Region};

use crate::em_algebra::{
    barycenter, check_algebra_laws, free_algebra, integrate, real_algebra, vector_algebra,
};
use crate::monad::{check_monad_laws, check_monad_morphism, check_naturality, kappa};
use crate::pettis::{pettis_algebra, pettis_integral, verify_pettis, Functional};
use crate::report::LawReport;
use crate::signed_measure::SignedMeasure;
use crate::spaces::{Point, Space};
use crate::Rational;

#[derive(Parser, Debug)]
#[command(name = "bornmeas", version, about = "Exact finitely-supported signed measures")]
struct Cli {
    /// Render numbers with this many decimal digits instead of exact fractions.
    #[arg(long, global = true, value_name = "DIGITS")]
    decimal: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Total variation of a measure.
    Tv { file: PathBuf },
    /// Jordan parts and Hahn sets of a measure.
    Jordan { file: PathBuf },
    /// Direct image along a built-in morphism; prints a measure document.
    Push {
        file: PathBuf,
        /// id, mod:K, embed, affine:a;b1,..,bn, proj:i or indicator:e1,e2,..
        #[arg(long = "map")]
        map: String,
    },
    /// Flattens a measure of measures; prints a measure document.
    Kappa { file: PathBuf },
    /// Integral of a built-in morphism into Q^n.
    Integrate {
        file: PathBuf,
        #[arg(long = "map", default_value = "id")]
        map: String,
    },
    /// Centre of mass of a probability measure on Q^n.
    Barycenter { file: PathBuf },
    /// Pettis integral of a built-in morphism into Q^n, verified against
    /// the coordinate functionals and any given ones.
    Pettis {
        file: PathBuf,
        #[arg(long = "map", default_value = "id")]
        map: String,
        /// Coefficients `a1,..,an` of an extra functional; repeatable.
        #[arg(long = "functional")]
        functionals: Vec<String>,
    },
    /// Runs the seeded law suites.
    CheckLaws {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        /// Print the reports as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Barycentre of the uniform grid measure on a region.
    DemoCentroid {
        /// unit-square, triangle:x,y;x,y;x,y or box:x,y;x,y
        #[arg(long, default_value = "unit-square")]
        region: String,
        #[arg(long, default_value_t = 64)]
        resolution: u32,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(stderr: String) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Formats `x` with `digits` decimals, rounding half away from zero.
pub fn decimal(x: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (x * Rational::from_integer(scale.clone())).round().to_integer();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let abs = scaled.abs();
    let int = &abs / &scale;
    if digits == 0 {
        return format!("{sign}{int}");
    }
    let frac = (&abs % &scale).to_string();
    format!("{sign}{int}.{}{frac}", "0".repeat(digits - frac.len()))
}

struct Render {
    digits: Option<usize>,
}

impl Render {
    fn number(&self, x: &Rational) -> String {
        match self.digits {
            Some(d) => decimal(x, d),
            None => x.to_string(),
        }
    }

    /// Vectors as `(a, b)`, scalars bare.
    fn point(&self, p: &Point) -> String {
        match p {
            Point::Vector(v) if v.len() == 1 => self.number(&v[0]),
            Point::Vector(v) => format!(
                "({})",
                v.iter().map(|c| self.number(c)).collect::<Vec<_>>().join(", ")
            ),
            other => other.to_string(),
        }
    }

    fn measure(&self, mu: &SignedMeasure) -> String {
        let atoms: Vec<String> = mu
            .atoms()
            .iter()
            .map(|(p, w)| format!("{}: {}", self.point(p), self.number(w)))
            .collect();
        format!("{{{}}}", atoms.join(", "))
    }

    fn set<'a>(&self, points: impl Iterator<Item = &'a Point>) -> String {
        format!(
            "{{{}}}",
            points.map(|p| self.point(p)).collect::<Vec<_>>().join(", ")
        )
    }
}

fn read_input(path: &Path) -> Result<String, String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("reading stdin: {e}"))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))
    }
}

fn load(path: &Path) -> Result<SignedMeasure, String> {
    let text = read_input(path)?;
    parse_measure_document(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn resolve_map(descriptor: &str, mu: &SignedMeasure) -> Result<crate::spaces::Morphism, String> {
    let f = builtin_morphism(descriptor, mu.space()).map_err(|e| e.to_string())?;
    catalog::check_applicable(descriptor, mu.space(), mu.support()).map_err(|e| e.to_string())?;
    Ok(f)
}

fn vector_target(f: &crate::spaces::Morphism) -> Result<usize, String> {
    match f.codomain() {
        Space::RationalVector(n) => Ok(*n),
        other => Err(format!("`{}` maps into {other}, not Q^n", f.name())),
    }
}

/// Parses and executes one command line. `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::ok(text)
                }
                _ => Outcome::usage(text),
            };
        }
    };
    let render = Render {
        digits: cli.decimal,
    };
    match execute(cli.command, &render) {
        Ok(outcome) => outcome,
        Err(msg) => Outcome::usage(format!("error: {msg}\n")),
    }
}

fn execute(command: Command, render: &Render) -> Result<Outcome, String> {
    let text = |s: String| Ok(Outcome::ok(s + "\n"));
    match command {
        Command::Tv { file } => {
            let mu = load(&file)?;
            text(render.number(&mu.total_variation()))
        }
        Command::Jordan { file } => {
            let j = load(&file)?.jordan_hahn();
            let mut out = String::new();
            writeln!(out, "positive: {}", render.measure(&j.positive_part)).unwrap();
            writeln!(out, "negative: {}", render.measure(&j.negative_part)).unwrap();
            writeln!(out, "hahn positive: {}", render.set(j.hahn_positive_set.iter())).unwrap();
            write!(out, "hahn negative: {}", render.set(j.hahn_negative_set.iter())).unwrap();
            text(out)
        }
        Command::Push { file, map } => {
            let mu = load(&file)?;
            let f = resolve_map(&map, &mu)?;
            let image = mu.pushforward(&f).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(
                serialize_measure_document(&image).map_err(|e| e.to_string())?,
            ))
        }
        Command::Kappa { file } => {
            let mm = load(&file)?;
            let flat = kappa(&mm).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(
                serialize_measure_document(&flat).map_err(|e| e.to_string())?,
            ))
        }
        Command::Integrate { file, map } => {
            let mu = load(&file)?;
            let f = resolve_map(&map, &mu)?;
            let n = vector_target(&f)?;
            let alg = if n == 1 {
                real_algebra()
            } else {
                vector_algebra(n).map_err(|e| e.to_string())?
            };
            let x = integrate(&alg, &f, &mu).map_err(|e| e.to_string())?;
            text(render.point(&x))
        }
        Command::Barycenter { file } => {
            let mu = load(&file)?;
            let n = mu
                .space()
                .dimension()
                .ok_or_else(|| format!("barycentres need a measure on Q^n, not on {}", mu.space()))?;
            let alg = vector_algebra(n).map_err(|e| e.to_string())?;
            let x = barycenter(&alg, &mu).map_err(|e| e.to_string())?;
            text(render.point(&x))
        }
        Command::Pettis {
            file,
            map,
            functionals,
        } => {
            let mu = load(&file)?;
            let f = resolve_map(&map, &mu)?;
            let n = vector_target(&f)?;
            let mut family = Functional::standard_basis(n);
            for coefficient_list in &functionals {
                let coefficients = coefficient_list
                    .split(',')
                    .map(|c| parse_rational(&NumberLiteral::Text(c.trim().to_string())))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| e.to_string())?;
                if coefficients.len() != n {
                    return Err(format!("functional `{coefficient_list}` needs {n} coefficients"));
                }
                family.push(Functional::new(coefficients));
            }
            let x = pettis_integral(n, &f, &mu).map_err(|e| e.to_string())?;
            let report = verify_pettis(&x, &f, &mu, &family);
            Ok(Outcome {
                code: if report.passed() { 0 } else { 1 },
                stdout: render.point(&Point::Vector(x)) + "\n",
                stderr: if report.passed() {
                    String::new()
                } else {
                    report.to_string()
                },
            })
        }
        Command::CheckLaws { seed, cases, json } => {
            if cases == 0 {
                return Err("--cases must be at least 1".into());
            }
            let reports = law_suites(seed, cases);
            let passed = reports.iter().all(LawReport::passed);
            let stdout = if json {
                serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n"
            } else {
                reports.iter().map(ToString::to_string).collect()
            };
            Ok(Outcome {
                code: if passed { 0 } else { 1 },
                stdout,
                stderr: String::new(),
            })
        }
        Command::DemoCentroid { region, resolution } => {
            let region: Region = region.parse().map_err(|e: crate::Error| e.to_string())?;
            let mu = grid_uniform(&region, resolution).map_err(|e| e.to_string())?;
            let alg = vector_algebra(2).map_err(|e| e.to_string())?;
            let c = barycenter(&alg, &mu).map_err(|e| e.to_string())?;
            text(render.point(&c))
        }
    }
}

/// The suites behind `check-laws`, run one per thread, reported in a fixed
/// order.
pub fn law_suites(seed: u64, cases: usize) -> Vec<LawReport> {
    let labels = Space::finite_labeled(["a", "b", "c", "d", "e", "f"]).expect("labels");
    let small = Space::finite_labeled(["x", "y", "z"]).expect("labels");
    let plane = Space::rational_vector(2).expect("dimension 2");
    type Suite = Box<dyn FnOnce() -> LawReport + Send>;
    let suites: Vec<Suite> = vec![
        {
            let s = labels.clone();
            Box::new(move || check_monad_laws(&s, seed, cases))
        },
        Box::new(move || check_monad_laws(&Space::integer_line(), seed, cases)),
        {
            let s = plane.clone();
            Box::new(move || check_monad_laws(&s, seed, cases))
        },
        {
            let s = plane.clone();
            Box::new(move || check_naturality(&s, seed, cases))
        },
        {
            let s = small.clone();
            Box::new(move || check_monad_morphism(&s, seed, cases))
        },
        Box::new(move || check_algebra_laws(&real_algebra(), seed, cases)),
        Box::new(move || check_algebra_laws(&vector_algebra(3).expect("dimension 3"), seed, cases)),
        {
            let s = small.clone();
            Box::new(move || check_algebra_laws(&free_algebra(&s), seed, cases))
        },
        Box::new(move || check_algebra_laws(&pettis_algebra(2).expect("dimension 2"), seed, cases)),
    ];
    thread::scope(|scope| {
        let handles: Vec<_> = suites.into_iter().map(|s| scope.spawn(s)).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("law suite panicked"))
            .collect()
    })
}
