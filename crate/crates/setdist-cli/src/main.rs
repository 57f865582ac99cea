//! Command-line front end: pairwise distances, metric verification, the
//! region grid, relaxed-triangle constants, LZJD on files, and the
//! FASTA-to-Newick clustering pipeline.
//!
//! Exit status: 0 on success, 1 on domain errors (invalid parameter values,
//! malformed inputs), 2 on usage errors (unknown flags or subcommands).
//! Outputs are byte-identical across runs with the same configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use setdist::measures::{jaccard, tversky};
use setdist::verify::{
    check_triangle_exhaustive, counterexample_large_n, counterexample_small, estimate_rho,
    explore_jp_triangle, gragera_rho, gragera_rho_exact, grid_to_csv, region_grid,
    region_predicate, RhoBound, FLOAT_SLACK,
};
use setdist::{
    alpha_sweep, lz78_dictionary, read_fasta, to_newick_with_precision, ward_linkage,
    DistanceMatrix, DistanceValue, Family, FiniteSet, MeasureSpec, Rat,
};

#[derive(Parser)]
#[command(
    name = "setdist",
    version,
    about = "Exact Tversky-family set dissimilarities, metric verification, and sequence clustering",
    after_help = "Rational parameters accept integers (2), fractions (3/4) and decimal \
                  literals (0.21, parsed exactly). The SETDIST_THREADS environment \
                  variable caps the worker-thread count (default: all cores)."
)]
struct Cli {
    /// Seed recorded in reports (reserved for randomized helpers; all
    /// commands here are deterministic).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MeasureArgs {
    /// Family: strm | tversky | jaccard | nid | jp | dice | overlap |
    /// delta | steinhaus | lzjd | zgram | edit
    #[arg(long)]
    measure: String,
    /// Weight on the smaller set difference (strm, tversky, delta, zgram)
    #[arg(long)]
    alpha: Option<String>,
    /// Difference scale (strm) / weight on the second difference (tversky)
    #[arg(long)]
    beta: Option<String>,
    /// Additive bias in the strm denominator (default 0)
    #[arg(long)]
    bias: Option<String>,
    /// Weight on the smaller difference (steinhaus)
    #[arg(long)]
    gamma: Option<String>,
    /// Weight on the union term (steinhaus)
    #[arg(long)]
    s: Option<String>,
    /// Root exponent (jp), integer or rational in [1, 1024]
    #[arg(long)]
    p: Option<String>,
    /// Gram length (zgram)
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Use the Steinhaus-normalized profile distance (zgram)
    #[arg(long)]
    normalize: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one pairwise distance
    Dist {
        #[command(flatten)]
        measure: MeasureArgs,
        /// First operand: comma-separated atoms for set measures, raw text
        /// for sequence measures (lzjd, zgram, edit)
        #[arg(long)]
        a: String,
        /// Second operand
        #[arg(long)]
        b: String,
    },
    /// Exhaustive exact metric check over a small power set, plus
    /// constructive counterexamples where the theory provides them
    Verify {
        #[command(flatten)]
        measure: MeasureArgs,
        /// Ground-set size n: all ordered triples of subsets of {0..n-1}
        #[arg(long, default_value_t = 4)]
        ground: u32,
    },
    /// Metric-region grid for the strm family, as CSV
    Region {
        /// Number of alpha grid points over [0, 1]
        #[arg(long, default_value_t = 21)]
        alpha_steps: usize,
        /// Upper end of the beta range (0, beta-max]
        #[arg(long, default_value = "5")]
        beta_max: String,
        /// Number of beta grid points
        #[arg(long, default_value_t = 21)]
        beta_steps: usize,
        /// Ground-set size for the exhaustive check on predicted-metric cells
        #[arg(long, default_value_t = 4)]
        ground: u32,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form vs empirical relaxed-triangle constant for the
    /// asymmetric Tversky dissimilarity
    Rho {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        /// Ground-set size for the empirical maximum
        #[arg(long, default_value_t = 4)]
        ground: u32,
    },
    /// Lempel-Ziv Jaccard distance between two files (raw bytes)
    Lzjd {
        #[arg(long)]
        file_a: PathBuf,
        #[arg(long)]
        file_b: PathBuf,
        /// Also print both dictionaries as sorted, escaped phrase lists
        #[arg(long)]
        dump_dicts: bool,
    },
    /// Distance matrix and Ward-linkage Newick tree from a FASTA file
    Phylo {
        #[arg(long)]
        fasta: PathBuf,
        #[command(flatten)]
        measure: MeasureArgs,
        /// Write the pairwise distance matrix CSV here
        #[arg(long)]
        matrix_out: Option<PathBuf>,
        /// Write the Newick tree here (stdout when omitted)
        #[arg(long)]
        newick_out: Option<PathBuf>,
        /// Branch-length decimal places
        #[arg(long, default_value_t = 6)]
        precision: usize,
    },
    /// Tree-topology segmentation across an alpha grid (zgram measure)
    Sweep {
        #[arg(long)]
        fasta: PathBuf,
        /// Gram length
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value = "0")]
        alpha_min: String,
        #[arg(long, default_value = "1/2")]
        alpha_max: String,
        #[arg(long, default_value = "1/100")]
        step: String,
        /// Use the Steinhaus-normalized profile distance
        #[arg(long)]
        normalize: bool,
    },
}

struct CliError(String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> CliError {
        CliError(e.to_string())
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("SETDIST_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError(message)) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Dist { measure, a, b } => cmd_dist(&measure, &a, &b),
        Command::Verify { measure, ground } => cmd_verify(&measure, ground, cli.seed),
        Command::Region {
            alpha_steps,
            beta_max,
            beta_steps,
            ground,
            out,
        } => cmd_region(
            alpha_steps,
            &beta_max,
            beta_steps,
            ground,
            out.as_deref(),
            cli.seed,
        ),
        Command::Rho {
            alpha,
            beta,
            ground,
        } => cmd_rho(&alpha, &beta, ground),
        Command::Lzjd {
            file_a,
            file_b,
            dump_dicts,
        } => cmd_lzjd(&file_a, &file_b, dump_dicts),
        Command::Phylo {
            fasta,
            measure,
            matrix_out,
            newick_out,
            precision,
        } => cmd_phylo(
            &fasta,
            &measure,
            matrix_out.as_deref(),
            newick_out.as_deref(),
            precision,
        ),
        Command::Sweep {
            fasta,
            k,
            alpha_min,
            alpha_max,
            step,
            normalize,
        } => cmd_sweep(
            &fasta, k, &alpha_min, &alpha_max, &step, normalize, cli.seed,
        ),
    }
}

fn parse_rat(name: &str, text: &str) -> Result<Rat, CliError> {
    text.parse()
        .map_err(|e| CliError(format!("parameter {name}: {e}")))
}

impl MeasureArgs {
    fn required(&self, name: &'static str) -> Result<Rat, CliError> {
        let slot = match name {
            "alpha" => &self.alpha,
            "beta" => &self.beta,
            "gamma" => &self.gamma,
            "s" => &self.s,
            "p" => &self.p,
            _ => unreachable!(),
        };
        match slot {
            Some(text) => parse_rat(name, text),
            None => Err(CliError(format!(
                "measure {} requires --{name}",
                self.measure
            ))),
        }
    }

    fn build(&self) -> Result<MeasureSpec, CliError> {
        let family: Family = self.measure.parse().map_err(|e| CliError(format!("{e}")))?;
        let spec = match family {
            Family::Strm => MeasureSpec::Strm {
                alpha: self.required("alpha")?,
                beta: self.required("beta")?,
                bias: match &self.bias {
                    Some(text) => parse_rat("bias", text)?,
                    None => Rat::zero(),
                },
            },
            Family::Tversky => MeasureSpec::Tversky {
                alpha: self.required("alpha")?,
                beta: self.required("beta")?,
            },
            Family::Jaccard => MeasureSpec::Jaccard,
            Family::NidAnalogue => MeasureSpec::NidAnalogue,
            Family::Jp => MeasureSpec::Jp {
                p: self.required("p")?,
            },
            Family::Dice => MeasureSpec::Dice,
            Family::Overlap => MeasureSpec::Overlap,
            Family::Delta => MeasureSpec::Delta {
                alpha: self.required("alpha")?,
            },
            Family::Steinhaus => MeasureSpec::Steinhaus {
                gamma: self.required("gamma")?,
                s: self.required("s")?,
            },
            Family::Lzjd => MeasureSpec::Lzjd,
            Family::ZGram => MeasureSpec::ZGram {
                alpha: self.required("alpha")?,
                k: self.k,
                normalize: self.normalize,
            },
            Family::Edit => MeasureSpec::Edit,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn is_sequence_family(spec: &MeasureSpec) -> bool {
    matches!(
        spec,
        MeasureSpec::Lzjd | MeasureSpec::ZGram { .. } | MeasureSpec::Edit
    )
}

/// Comma-separated atom list; atoms are trimmed and compared as strings.
fn parse_set(text: &str) -> FiniteSet<String> {
    text.split(',')
        .map(str::trim)
        .filter(|a| !a.is_empty())
        .map(str::to_string)
        .collect()
}

fn print_value(value: &DistanceValue) {
    match value {
        DistanceValue::Exact(r) => println!("{} ({})", r, r.decimal(12)),
        DistanceValue::Real(v) => println!("{v}"),
    }
}

fn cmd_dist(measure: &MeasureArgs, a: &str, b: &str) -> Result<(), CliError> {
    let spec = measure.build()?;
    let value = if is_sequence_family(&spec) {
        spec.sequence_distance(a.as_bytes(), b.as_bytes())?
    } else {
        spec.set_distance(&parse_set(a), &parse_set(b))?
    };
    print_value(&value);
    Ok(())
}

fn echo_params(spec: &MeasureSpec) {
    for (name, value) in spec.rational_params() {
        println!("parameter {name}: {} ({})", value, value.decimal(12));
    }
}

fn cmd_verify(measure: &MeasureArgs, ground: u32, seed: Option<u64>) -> Result<(), CliError> {
    let spec = measure.build()?;
    println!("measure: {spec}");
    echo_params(&spec);
    println!(
        "ground: {ground} ({} subsets, {} ordered triples)",
        1u64 << ground,
        1u64 << (3 * ground)
    );
    if let Some(seed) = seed {
        println!("seed: {seed}");
    }

    if is_sequence_family(&spec) {
        return Err(CliError(format!(
            "{} is a sequence measure; metric verification scans power sets of atoms \
             (its triangle behavior follows from the underlying set measure)",
            spec.family()
        )));
    }

    if let MeasureSpec::Jp { p } = &spec {
        // Floating-point exploration: metricity for 1 < p < inf is open.
        let report = explore_jp_triangle(p, ground, FLOAT_SLACK)?;
        println!("{report}");
        println!("note: exploratory floating-point scan; no exact claim is made for jp");
        return Ok(());
    }

    if let MeasureSpec::Strm { bias, .. } = &spec {
        if !bias.is_zero() {
            return Err(CliError(
                "bias > 0 is excluded from metric claims; rerun with --bias 0".into(),
            ));
        }
    }

    let measure_fn = spec.exact_set_fn::<i64>().map_err(|e| {
        CliError(format!(
            "{} cannot be verified exhaustively: {e}",
            spec.family()
        ))
    })?;
    let violation = check_triangle_exhaustive(|x, y| measure_fn(x, y), ground)?;

    let strm_params = match &spec {
        MeasureSpec::Strm { alpha, beta, .. } => Some((alpha.clone(), beta.clone())),
        _ => None,
    };
    if let Some((alpha, beta)) = &strm_params {
        println!(
            "region-predicate: {}",
            if region_predicate(alpha, beta) {
                "true (metric for every ground set)"
            } else {
                "false (not a metric on sufficiently large ground sets)"
            }
        );
    }

    match violation {
        Some(ce) => {
            println!("result: VIOLATION (lexicographically first triple)");
            print!("{}", ce.report());
        }
        None => {
            println!("result: METRIC on this ground set (no violating triple)");
            if let Some((alpha, beta)) = &strm_params {
                if !region_predicate(alpha, beta) {
                    let ce = if beta * (Rat::one() - alpha) < Rat::one() {
                        counterexample_small(alpha, beta)?
                    } else {
                        counterexample_large_n(alpha, beta)?
                    };
                    println!(
                        "note: a violation exists on a larger ground set; constructive certificate:"
                    );
                    print!("{}", ce.report());
                }
            }
        }
    }
    Ok(())
}

fn cmd_region(
    alpha_steps: usize,
    beta_max: &str,
    beta_steps: usize,
    ground: u32,
    out: Option<&Path>,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let beta_max = parse_rat("beta-max", beta_max)?;
    let cells = region_grid(alpha_steps, &beta_max, beta_steps, ground)?;
    let mut csv = String::new();
    if let Some(seed) = seed {
        let _ = writeln!(csv, "# seed: {seed}");
    }
    csv.push_str(&grid_to_csv(&cells));
    match out {
        Some(path) => {
            std::fs::write(path, csv)?;
            println!("wrote {} cells to {}", cells.len(), path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_rho(alpha: &str, beta: &str, ground: u32) -> Result<(), CliError> {
    let alpha = parse_rat("alpha", alpha)?;
    let beta = parse_rat("beta", beta)?;
    let spec = MeasureSpec::Tversky {
        alpha: alpha.clone(),
        beta: beta.clone(),
    };
    spec.validate()?;
    println!("measure: {spec}");
    echo_params(&spec);

    let exact = gragera_rho_exact(&alpha, &beta)?;
    match &exact {
        Some(r) => println!("theoretical rho: {} ({})", r, r.decimal(12)),
        None => println!(
            "theoretical rho: ~{} (irrational; (1 + sqrt(1/(alpha*beta)))/2)",
            gragera_rho(&alpha, &beta)?
        ),
    }
    if &alpha * &beta > Rat::one() {
        println!(
            "note: the closed form is proved for alpha, beta <= 1; for larger weights it \
             falls below 1 and no longer bounds the empirical constant"
        );
    }

    let empirical = estimate_rho(|x, y| tversky(&alpha, &beta, x, y), ground)?;
    println!("empirical rho (ground {ground}): {empirical}");
    match (&exact, &empirical) {
        (Some(bound), RhoBound::Finite(observed)) => {
            println!("bound holds: {}", observed <= bound);
        }
        (None, RhoBound::Finite(observed)) => {
            println!(
                "bound holds (floating comparison): {}",
                observed.to_f64() <= gragera_rho(&alpha, &beta)?
            );
        }
        (_, RhoBound::Infinite) => println!("bound holds: false"),
    }
    Ok(())
}

fn cmd_lzjd(file_a: &Path, file_b: &Path, dump_dicts: bool) -> Result<(), CliError> {
    let bytes_a = std::fs::read(file_a)?;
    let bytes_b = std::fs::read(file_b)?;
    let dict_a = lz78_dictionary(&bytes_a);
    let dict_b = lz78_dictionary(&bytes_b);
    if dump_dicts {
        println!(
            "dictionary {} ({} phrases):",
            file_a.display(),
            dict_a.len()
        );
        print!("{}", dict_a.dump());
        println!(
            "dictionary {} ({} phrases):",
            file_b.display(),
            dict_b.len()
        );
        print!("{}", dict_b.dump());
    }
    let d = jaccard(dict_a.phrases(), dict_b.phrases());
    println!("lzjd: {} ({})", d, d.decimal(12));
    Ok(())
}

fn cmd_phylo(
    fasta: &Path,
    measure: &MeasureArgs,
    matrix_out: Option<&Path>,
    newick_out: Option<&Path>,
    precision: usize,
) -> Result<(), CliError> {
    let spec = measure.build()?;
    if !is_sequence_family(&spec) {
        return Err(CliError(format!(
            "{} is a set measure; phylo needs a sequence measure (lzjd, zgram, edit)",
            spec.family()
        )));
    }
    let records = read_fasta(fasta)?;
    let matrix = DistanceMatrix::from_sequences(&records, &spec)?;
    if let Some(path) = matrix_out {
        std::fs::write(path, matrix.to_csv())?;
        eprintln!(
            "wrote {}x{} matrix to {}",
            matrix.len(),
            matrix.len(),
            path.display()
        );
    }
    let tree = ward_linkage(&matrix)?;
    if !tree.is_height_monotone() {
        eprintln!(
            "warning: merge heights are not monotone on this input; branch lengths may be negative"
        );
    }
    let newick = to_newick_with_precision(&tree, precision);
    match newick_out {
        Some(path) => {
            std::fs::write(path, format!("{newick}\n"))?;
            eprintln!("wrote newick tree to {}", path.display());
        }
        None => println!("{newick}"),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    fasta: &Path,
    k: usize,
    alpha_min: &str,
    alpha_max: &str,
    step: &str,
    normalize: bool,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let lo = parse_rat("alpha-min", alpha_min)?;
    let hi = parse_rat("alpha-max", alpha_max)?;
    let step = parse_rat("step", step)?;
    if !step.is_positive() {
        return Err(CliError("step must be positive".into()));
    }
    if lo.is_negative() || hi > Rat::new(1, 2) || lo > hi {
        return Err(CliError(
            "alpha range must satisfy 0 <= alpha-min <= alpha-max <= 1/2".into(),
        ));
    }
    let mut alphas = Vec::new();
    let mut alpha = lo.clone();
    while alpha <= hi {
        alphas.push(alpha.clone());
        alpha = alpha + &step;
    }
    let records = read_fasta(fasta)?;
    let intervals = alpha_sweep(&records, k, &alphas, normalize)?;

    println!(
        "# alpha sweep over [{lo}, {hi}] step {step}: {} grid points, k={k}{}",
        alphas.len(),
        if normalize { ", normalized" } else { "" }
    );
    println!("# sequences: {} from {}", records.len(), fasta.display());
    if let Some(seed) = seed {
        println!("# seed: {seed}");
    }
    println!("# {} topology interval(s)", intervals.len());
    for interval in &intervals {
        println!(
            "[{}, {}] (decimal [{}, {}]): {}",
            interval.lo,
            interval.hi,
            interval.lo.decimal(12),
            interval.hi.decimal(12),
            interval.canonical
        );
    }
    Ok(())
}
