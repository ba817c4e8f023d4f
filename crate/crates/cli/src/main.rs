use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::Serialize;
use serde_json::{json, Value};

use lpm_core::oracle::{rank2_cd_lhs, rank2_cd_rhs, region_cd_index, region_face_lattice};
use lpm_core::verify::{verify_all, CHECKS};
use lpm_core::{
    bases_by_paths, edge_count_by_area, enumerate_bottoms, enumerate_face_subsets,
    facet_operations, is_border_strip, polytope_dimension, Error, SkewRegion,
};

#[derive(Parser)]
#[command(name = "lpm", version, about = "Lattice path matroids and their base polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RegionArgs {
    /// Lower path, e.g. EENNN or E^2N^3
    #[arg(long)]
    lower: String,
    /// Upper path
    #[arg(long)]
    upper: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum FvectorMethod {
    Combinatorial,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum EdgeMethod {
    Area,
    Bottoms,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// List the bases of the region's matroid
    Bases(RegionArgs),
    /// Dimension of the base polytope
    Dim(RegionArgs),
    /// Facet operations of a connected region
    Facets(RegionArgs),
    /// Faces as operation subsets (--t, border strips) or bottoms (--n)
    Faces {
        #[command(flatten)]
        region: RegionArgs,
        /// Number of facet operations in each subset
        #[arg(long, conflicts_with = "n", required_unless_present = "n")]
        t: Option<usize>,
        /// Number of blocks in each bottom
        #[arg(long)]
        n: Option<usize>,
    },
    /// Face counts by dimension
    Fvector {
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, value_enum, default_value = "combinatorial")]
        method: FvectorMethod,
    },
    /// Number of edges
    Edges {
        #[command(flatten)]
        region: RegionArgs,
        #[arg(long, value_enum, default_value = "area")]
        method: EdgeMethod,
    },
    /// cd-index of a region, or both sides of the rank-2 formula
    Cdindex {
        #[arg(long, required_unless_present = "rank2")]
        lower: Option<String>,
        #[arg(long, required_unless_present = "rank2")]
        upper: Option<String>,
        /// alpha beta gamma
        #[arg(long, num_args = 3, value_names = ["A", "B", "G"], conflicts_with_all = ["lower", "upper"])]
        rank2: Option<Vec<usize>>,
    },
    /// Cross-check everything against the exact oracle for all regions up to a length
    Verify {
        #[arg(long)]
        max_steps: usize,
        /// Check to leave out; repeatable
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(CHECKS))]
        skip: Vec<String>,
    },
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    inputs: Value,
    outputs: Value,
    counters: Value,
}

enum Failure {
    Core(Error),
    Input(String),
    Verification(Report),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Expand `X^k` into `k` copies of `X`.
fn expand_word(word: &str) -> Result<String, String> {
    let chars: Vec<char> = word.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        i += 1;
        if chars.get(i) == Some(&'^') {
            let start = i + 1;
            let mut end = start;
            while end < chars.len() && chars[end].is_ascii_digit() {
                end += 1;
            }
            if end == start {
                return Err(format!("missing exponent after {c}^ in {word:?}"));
            }
            let k: usize = chars[start..end]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| format!("exponent too large in {word:?}"))?;
            out.extend(std::iter::repeat_n(c, k));
            i = end;
        } else {
            out.push(c);
        }
    }
    Ok(out)
}

fn region_of(lower: &str, upper: &str) -> Result<SkewRegion, Failure> {
    let lower = expand_word(lower).map_err(Failure::Input)?;
    let upper = expand_word(upper).map_err(Failure::Input)?;
    Ok(SkewRegion::from_words(&lower, &upper)?)
}

fn region_inputs(region: &SkewRegion) -> Value {
    json!({"lower": region.lower().word(), "upper": region.upper().word()})
}

/// Face counts of a product are the convolution of the factors' counts.
fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn combinatorial_f_vector(region: &SkewRegion) -> Result<Vec<usize>, Error> {
    let mut total = vec![1];
    for part in region.components() {
        let dim = polytope_dimension(&part);
        let counts = (0..=dim)
            .map(|n| enumerate_bottoms(&part, n).map(|b| b.len()))
            .collect::<Result<Vec<_>, _>>()?;
        total = convolve(&total, &counts);
    }
    Ok(total)
}

fn run(command: Command) -> Result<Report, Failure> {
    Ok(match command {
        Command::Bases(args) => {
            let region = region_of(&args.lower, &args.upper)?;
            let matroid = bases_by_paths(&region)?;
            let count = matroid.bases().len();
            Report {
                command: "bases",
                inputs: region_inputs(&region),
                outputs: json!({"bases": matroid.bases(), "count": count}),
                counters: json!({"bases": count}),
            }
        }
        Command::Dim(args) => {
            let region = region_of(&args.lower, &args.upper)?;
            Report {
                command: "dim",
                inputs: region_inputs(&region),
                outputs: json!({
                    "dimension": polytope_dimension(&region),
                    "m": region.m(),
                    "r": region.r(),
                    "k": region.k(),
                }),
                counters: json!({}),
            }
        }
        Command::Facets(args) => {
            let region = region_of(&args.lower, &args.upper)?;
            let ops = facet_operations(&region)?;
            Report {
                command: "facets",
                inputs: region_inputs(&region),
                outputs: json!({"operations": ops, "count": ops.len()}),
                counters: json!({"facets": ops.len()}),
            }
        }
        Command::Faces { region, t, n } => {
            let region = region_of(&region.lower, &region.upper)?;
            let mut inputs = region_inputs(&region);
            let outputs = match (t, n) {
                (Some(t), _) => {
                    if !is_border_strip(&region) {
                        return Err(Failure::Input(format!("{region} is not a border strip")));
                    }
                    inputs["t"] = json!(t);
                    let subsets = enumerate_face_subsets(&region, t)?;
                    json!({"subsets": subsets, "count": subsets.len()})
                }
                (None, Some(n)) => {
                    inputs["n"] = json!(n);
                    let bottoms = enumerate_bottoms(&region, n)?;
                    json!({"bottoms": bottoms, "count": bottoms.len()})
                }
                (None, None) => return Err(Failure::Input("one of --t or --n is required".into())),
            };
            let count = outputs["count"].clone();
            Report {
                command: "faces",
                inputs,
                outputs,
                counters: json!({"faces": count}),
            }
        }
        Command::Fvector { region, method } => {
            let region = region_of(&region.lower, &region.upper)?;
            let (name, f) = match method {
                FvectorMethod::Combinatorial => ("combinatorial", combinatorial_f_vector(&region)?),
                FvectorMethod::Oracle => ("oracle", region_face_lattice(&region)?.1.f_vector()),
            };
            let mut inputs = region_inputs(&region);
            inputs["method"] = json!(name);
            Report {
                command: "fvector",
                inputs,
                counters: json!({"bases": f[0], "f_vector": f}),
                outputs: json!({"f_vector": f}),
            }
        }
        Command::Edges { region, method } => {
            let region = region_of(&region.lower, &region.upper)?;
            let (name, edges) = match method {
                EdgeMethod::Area => ("area", edge_count_by_area(&region)?),
                EdgeMethod::Bottoms => (
                    "bottoms",
                    if polytope_dimension(&region) == 0 {
                        0
                    } else {
                        enumerate_bottoms(&region, 1)?.len()
                    },
                ),
                EdgeMethod::Oracle => (
                    "oracle",
                    region_face_lattice(&region)?.1.f_vector().get(1).copied().unwrap_or(0),
                ),
            };
            let mut inputs = region_inputs(&region);
            inputs["method"] = json!(name);
            Report {
                command: "edges",
                inputs,
                outputs: json!({"edges": edges}),
                counters: json!({"edges": edges}),
            }
        }
        Command::Cdindex { lower, upper, rank2 } => match rank2 {
            Some(params) => {
                let (a, b, g) = (params[0], params[1], params[2]);
                let lhs = rank2_cd_lhs(a, b, g)?;
                let rhs = rank2_cd_rhs(a, b, g)?;
                let equal = lhs == rhs;
                Report {
                    command: "cdindex",
                    inputs: json!({"rank2": [a, b, g]}),
                    outputs: json!({"lhs": lhs, "rhs": rhs, "equal": equal}),
                    counters: json!({}),
                }
            }
            None => {
                let (lower, upper) = lower.zip(upper).ok_or_else(|| {
                    Failure::Input("--lower and --upper are required without --rank2".into())
                })?;
                let region = region_of(&lower, &upper)?;
                let cd = region_cd_index(&region)?;
                Report {
                    command: "cdindex",
                    inputs: region_inputs(&region),
                    outputs: json!({"cd_index": cd, "text": cd.to_string()}),
                    counters: json!({}),
                }
            }
        },
        Command::Verify { max_steps, skip } => {
            let report = verify_all(max_steps, &skip)?;
            let passed = report.passed();
            let out = Report {
                command: "verify",
                inputs: json!({"max_steps": max_steps, "skip": skip}),
                counters: json!({"regions": report.regions}),
                outputs: json!({"passed": passed, "checks": report.checks}),
            };
            if !passed {
                return Err(Failure::Verification(out));
            }
            out
        }
    })
}

fn print(report: &Report) {
    let text = serde_json::to_string_pretty(report).expect("reports serialize");
    // A closed pipe downstream is not an error of ours.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let started = Instant::now();
    let result = run(cli.command);
    let elapsed = started.elapsed();
    let code = match result {
        Ok(report) => {
            print(&report);
            0
        }
        Err(Failure::Verification(report)) => {
            print(&report);
            eprintln!("verification failed");
            3
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Resource(_) => 2,
                Error::NotEulerian(_) => 3,
                _ => 1,
            }
        }
    };
    info!("wall time {:.3}s", elapsed.as_secs_f64());
    ExitCode::from(code)
}
