//! `hlvar`: exact discrete maximal functions and the sharp variation bounds
//! they satisfy, from the command line.
//!
//! Data goes to stdout (or `--output`), diagnostics to stderr. Exit status:
//! 0 success, 1 a checked property failed, 2 bad arguments or input,
//! 3 an enumeration cap was hit, 4 geometry and dimension disagree.

mod document;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use hlvar::battery::{lemma_battery, oracle_battery, sharpness_battery};
use hlvar::lattice::enumeration_cap;
use hlvar::verify::{verify_inequality_to, DEFAULT_R_MAX};
use hlvar::{
    constant_enclosure, evaluate_on_box, format_decimal, format_rational, l1_ball_count, l1_ball_points,
    parse_rational, scan_extremizers, BallSpec, ConstantKind, Geometry, LatticeBox, ScanFamily,
};
use num_traits::Signed;

use document::GridFunctionDocument;
use output::{write_maxfn_csv, write_scan_csv, SuiteSummary, VerifySummary};

#[derive(Parser)]
#[command(name = "hlvar", version, about = "Exact discrete Hardy-Littlewood maximal functions and their variation")]
struct Cli {
    /// Worker threads for parallel evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number of lattice points in the l1 ball of radius K in Z^D.
    Count {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        radius: u64,
        /// Also list the points, one per line.
        #[arg(long)]
        enumerate: bool,
    },
    /// Maximal function of a JSON grid function on the box [-R, R]^d, as CSV.
    Maxfn {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        geometry: GeometryArg,
        #[arg(long = "box", value_name = "R")]
        box_radius: u64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        digits: usize,
    },
    /// Certified enclosure of a sharp variation constant.
    Constant {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        dim: usize,
        /// Number of series terms summed exactly.
        #[arg(long)]
        terms: u64,
        #[arg(long, default_value_t = 12)]
        digits: usize,
    },
    /// Check the variation inequality for one function, or run a canned battery.
    #[command(group(ArgGroup::new("what").required(true).args(["input", "suite"])))]
    Verify {
        #[arg(long, requires = "geometry")]
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        geometry: Option<GeometryArg>,
        /// Convergence tolerance, e.g. "1/1000" or "0.001".
        #[arg(long, default_value = "1/1000")]
        epsilon: String,
        #[arg(long, default_value_t = DEFAULT_R_MAX)]
        rmax: u64,
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Write the JSON summary here; "-" sends it to stdout and the report to stderr.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Truncated variation ratios of a family of test functions, sorted by gap.
    Scan {
        #[arg(long, value_enum)]
        geometry: GeometryArg,
        #[arg(long, value_enum, default_value = "two-point")]
        family: FamilyArg,
        /// Largest l1 distance between the two points.
        #[arg(long)]
        radius: u64,
        /// Truncation radius: variation is measured on [-B, B]^d.
        #[arg(long = "box", value_name = "B")]
        box_radius: u64,
        /// Dimension (default 1 for interval geometries, 2 otherwise).
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        digits: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryArg {
    Centered1d,
    Uncentered1d,
    L1,
    Cube,
}

impl From<GeometryArg> for Geometry {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Centered1d => Geometry::IntervalCentered,
            GeometryArg::Uncentered1d => Geometry::IntervalUncentered,
            GeometryArg::L1 => Geometry::L1Centered,
            GeometryArg::Cube => Geometry::CubeUncentered,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Centered,
    Uncentered,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    TwoPoint,
    Delta,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Lemmas,
    Sharpness,
    Oracle,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Lemmas => "lemmas",
            Suite::Sharpness => "sharpness",
            Suite::Oracle => "oracle",
        }
    }
}

/// A message for stderr together with the exit status it implies.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<hlvar::Error> for Failure {
    fn from(e: hlvar::Error) -> Self {
        use hlvar::Error::*;
        let code = match e {
            CapExceeded { .. } => 3,
            GeometryMismatch { .. } | DimensionMismatch { .. } => 4,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Count { dim, radius, enumerate } => count(dim, radius, enumerate),
        Command::Maxfn { input, geometry, box_radius, output, digits } => {
            maxfn(&input, geometry.into(), box_radius, output.as_deref(), digits)
        }
        Command::Constant { kind, dim, terms, digits } => constant(kind, dim, terms, digits),
        Command::Verify { input, geometry, epsilon, rmax, suite, seed, json } => match (input, suite) {
            (Some(input), None) => {
                let geometry = geometry.expect("clap enforces --geometry with --input").into();
                verify_file(&input, geometry, &epsilon, rmax, json.as_deref())
            }
            (None, Some(suite)) => verify_suite(suite, seed, json.as_deref()),
            _ => Err(Failure::usage("give exactly one of --input and --suite")),
        },
        Command::Scan { geometry, family, radius, box_radius, dim, output, digits } => {
            scan(geometry.into(), family, radius, box_radius, dim, output.as_deref(), digits)
        }
    }
}

fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) if p != Path::new("-") => Box::new(BufWriter::new(File::create(p)?)),
        _ => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_document(path: &Path) -> Result<GridFunctionDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::usage(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
    })
}

fn read_function(path: &Path) -> Result<(GridFunctionDocument, hlvar::ExactGridFunction), Failure> {
    let doc = read_document(path)?;
    let f = doc.to_function().map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok((doc, f))
}

fn count(dim: usize, radius: u64, enumerate: bool) -> Outcome {
    let n = l1_ball_count(dim, radius)?;
    let mut out = sink(None)?;
    if enumerate {
        let points = l1_ball_points(dim, radius)?;
        writeln!(out, "{n}")?;
        for p in points {
            writeln!(out, "{p}")?;
        }
    } else {
        writeln!(out, "{n}")?;
    }
    out.flush()?;
    Ok(())
}

fn maxfn(input: &Path, geometry: Geometry, r: u64, output: Option<&Path>, digits: usize) -> Outcome {
    let (_, f) = read_function(input)?;
    let spec = BallSpec::new(geometry, f.dim())?;
    let bx = LatticeBox::centered(f.dim(), r);
    let cap = enumeration_cap();
    if bx.volume() > cap as u128 {
        return Err(hlvar::Error::CapExceeded { requested: bx.volume().to_string(), cap }.into());
    }
    let grid = evaluate_on_box(&f, spec, &bx)?;
    let mut out = sink(output)?;
    write_maxfn_csv(&mut out, &grid, digits)?;
    out.flush()?;
    Ok(())
}

fn constant(kind: KindArg, dim: usize, terms: u64, digits: usize) -> Outcome {
    let kind = match kind {
        KindArg::Centered => ConstantKind::CenteredL1,
        KindArg::Uncentered => ConstantKind::UncenteredCube,
    };
    let e = constant_enclosure(dim, terms, kind)?;
    let mut out = sink(None)?;
    writeln!(out, "[{}, {}]", format_rational(&e.lower), format_rational(&e.upper))?;
    writeln!(out, "{}", e.render(digits))?;
    writeln!(out, "width {}", format_decimal(&e.width(), digits))?;
    writeln!(out, "{}", e.statement())?;
    out.flush()?;
    Ok(())
}

/// Prints the human report and the JSON summary to their destinations.
fn emit(human: &str, json: &str, json_path: Option<&Path>) -> Outcome {
    match json_path {
        Some(p) if p == Path::new("-") => {
            eprint!("{human}");
            let mut out = sink(None)?;
            writeln!(out, "{json}")?;
            out.flush()?;
        }
        Some(p) => {
            print!("{human}");
            std::fs::write(p, format!("{json}\n"))?;
        }
        None => print!("{human}"),
    }
    Ok(())
}

fn verify_file(input: &Path, geometry: Geometry, epsilon: &str, r_max: u64, json: Option<&Path>) -> Outcome {
    let eps = parse_rational(epsilon)
        .filter(|e| e.is_positive())
        .ok_or_else(|| Failure::usage(format!("--epsilon must be a positive rational, got {epsilon:?}")))?;
    let (_, f) = read_function(input)?;
    let spec = BallSpec::new(geometry, f.dim())?;
    let rec = verify_inequality_to(&f, spec, &eps, r_max)?;
    let canonical = GridFunctionDocument::from_function(&f);
    let summary = VerifySummary::new(&rec, &eps, r_max, canonical.clone());
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    emit(&summary.human(&rec), &text, json)?;
    if summary.passed {
        Ok(())
    } else {
        Err(Failure { code: 1, message: format!("inequality violated; instance: {}", canonical.to_json()) })
    }
}

fn verify_suite(suite: Suite, seed: u64, json: Option<&Path>) -> Outcome {
    let checks = match suite {
        Suite::Lemmas => lemma_battery(6, 2000, 6, 2000)?,
        Suite::Sharpness => sharpness_battery(200)?,
        Suite::Oracle => oracle_battery(seed, 100)?,
    };
    let summary = SuiteSummary::new(suite.name(), seed, &checks);
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    emit(&summary.human(), &text, json)?;
    if summary.passed {
        return Ok(());
    }
    let replays: Vec<String> = summary
        .checks
        .iter()
        .filter_map(|c| c.witness.as_ref().map(|w| format!("{}: {}", c.name, w.to_json())))
        .collect();
    let message = if replays.is_empty() {
        "some checks failed".to_string()
    } else {
        format!("some checks failed; instances:\n{}", replays.join("\n"))
    };
    Err(Failure { code: 1, message })
}

fn scan(
    geometry: Geometry,
    family: FamilyArg,
    radius: u64,
    r: u64,
    dim: Option<usize>,
    output: Option<&Path>,
    digits: usize,
) -> Outcome {
    let dim = dim.unwrap_or(match geometry {
        Geometry::IntervalCentered | Geometry::IntervalUncentered => 1,
        _ => 2,
    });
    let spec = BallSpec::new(geometry, dim)?;
    let family = match family {
        FamilyArg::TwoPoint => ScanFamily::two_point(radius),
        FamilyArg::Delta => ScanFamily::Delta,
    };
    if r < radius {
        return Err(Failure::usage(format!("--box {r} must be at least --radius {radius}")));
    }
    let records = scan_extremizers(spec, &family, r)?;
    let mut out = sink(output)?;
    write_scan_csv(&mut out, &records, digits)?;
    out.flush()?;
    if records.iter().any(|rec| !rec.gap_nonnegative()) {
        return Err(Failure { code: 1, message: "a scanned function exceeds the bound".into() });
    }
    Ok(())
}
