//! Command-line frontend: generation, analysis, latency modeling, and table
//! inversion over the stable file formats.
//!
//! Exit codes are part of the contract: 0 success, 2 bad flags or flag
//! values, 3 the generator ran but could not fill a table, 4 a file could
//! not be read, parsed, or inverted.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use betabox::analysis::{analyze, analyze_with_uniformity, CryptoReport};
use betabox::dyadic::DyadicSet;
use betabox::fixedpoint::{BetaPreset, BetaValue, FixedPointState, MAX_WIDTH, MIN_WIDTH};
use betabox::io;
use betabox::latency::{
    baseline_rows, expected_cycles, measure_real_generator, simulate, LatencyConfig, LatencyRow,
    SIMULATION_RNG,
};
use betabox::sbox::{gf256, generate, GenerationParams, Mixer, Provenance, SBoxTable, Stride};

/// Marker attached to errors caused by flag values, so they exit 2 rather
/// than 4 no matter which library error sits underneath.
#[derive(Debug)]
struct Usage;

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid flag value")
    }
}

#[derive(Parser)]
#[command(name = "betabox", version, about = "Chaotic S-box generation and analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an S-box table and write it to a file
    Generate(GenerateArgs),
    /// Compute the cryptanalytic report for a table
    Analyze(AnalyzeArgs),
    /// Model and simulate generation latency for one gate rank
    Latency(LatencyArgs),
    /// Compare latency across gate ranks and fixed baselines
    Compare(CompareArgs),
    /// Invert a bijective table
    Invert(InvertArgs),
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Hex,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrideArg {
    Overlapping,
    SkipAfterAccept,
}

impl From<StrideArg> for Stride {
    fn from(arg: StrideArg) -> Stride {
        match arg {
            StrideArg::Overlapping => Stride::Overlapping,
            StrideArg::SkipAfterAccept => Stride::SkipAfterAccept,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BaselineArg {
    /// GF(2^8) inversion plus affine map
    Gf,
    /// The identity permutation
    Identity,
}

#[derive(Args)]
struct GenerateArgs {
    /// Multiplier: a preset name (phi, silver, pi, phi1024) or a decimal
    #[arg(long, default_value = "phi1024")]
    beta: String,
    /// Orbit origin, a decimal in [0, 1)
    #[arg(long, default_value = "0.3")]
    x0: String,
    /// Gate as rank:index[,index...], e.g. 3:5 for [5/8, 6/8)
    #[arg(long, default_value = "3:5")]
    gate: String,
    /// Word size n of the table entries
    #[arg(long, default_value_t = 8)]
    bits: u8,
    /// State width B in bits
    #[arg(long, default_value_t = 64)]
    width: u8,
    /// Iteration budget M
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Output permutation: identity or xor-rotate:CONST
    #[arg(long, default_value = "identity")]
    mixer: String,
    #[arg(long, value_enum, default_value_t = StrideArg::Overlapping)]
    stride: StrideArg,
    /// Where to write the table
    #[arg(long)]
    out: PathBuf,
    /// Table format; inferred from the output extension when omitted
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Table file, hex grid or JSON
    #[arg(required_unless_present = "baseline", conflicts_with = "baseline")]
    input: Option<PathBuf>,
    /// Analyze a built-in reference table instead of a file
    #[arg(long, value_enum)]
    baseline: Option<BaselineArg>,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write ddt.csv and lat.csv histograms into this directory
    #[arg(long)]
    hist_dir: Option<PathBuf>,
    /// Rerun the generator's gated stream and attach a chi-square test;
    /// needs a table with an embedded generation record
    #[arg(long)]
    uniformity: bool,
    /// Sample count for --uniformity
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
}

#[derive(Args)]
struct LatencyArgs {
    /// Gate rank k; acceptance probability is 2^-k
    #[arg(long, default_value_t = 3)]
    k: u8,
    #[command(flatten)]
    setup: LatencySetup,
}

#[derive(Args)]
struct CompareArgs {
    /// Gate rank; repeat the flag to compare several
    #[arg(long = "k", default_values_t = [3u8, 4])]
    ks: Vec<u8>,
    #[command(flatten)]
    setup: LatencySetup,
}

#[derive(Args)]
struct LatencySetup {
    /// Word size n of the collected table
    #[arg(long, default_value_t = 8)]
    bits: u8,
    #[arg(long, default_value_t = 2000)]
    trials: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Cycles per orbit iteration
    #[arg(long, default_value_t = 1.0)]
    c_iter: f64,
    /// Extra cycles per accepted draw
    #[arg(long, default_value_t = 1.0)]
    c_acc: f64,
    /// Clock frequency in Hz
    #[arg(long, default_value_t = 2.0e8)]
    fclk: f64,
    /// Also run the real orbit generator at each rank
    #[arg(long)]
    measure: bool,
    /// Write the comparison rows as CSV
    #[arg(long)]
    csv: Option<PathBuf>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<Usage>().is_some() {
                return ExitCode::from(2);
            }
            match err.downcast_ref::<betabox::Error>() {
                Some(betabox::Error::InsufficientBlocks { .. }) => {
                    eprintln!("hint: increase --budget or adjust --beta/--x0/--gate");
                    ExitCode::from(3)
                }
                Some(betabox::Error::GateStarved { .. }) => ExitCode::from(3),
                _ => ExitCode::from(4),
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Latency(args) => cmd_latency(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Invert(args) => cmd_invert(args),
    }
}

fn parse_beta(text: &str, width: u8) -> Result<BetaValue> {
    let value = match text.parse::<BetaPreset>() {
        Ok(preset) => BetaValue::preset(preset, width),
        Err(_) => BetaValue::from_decimal(text, width),
    };
    value
        .with_context(|| format!("--beta {text:?}"))
        .context(Usage)
}

fn parse_x0(text: &str, width: u8) -> Result<FixedPointState> {
    FixedPointState::from_decimal(text, width)
        .with_context(|| format!("--x0 {text:?}"))
        .context(Usage)
}

fn parse_gate(text: &str) -> Result<DyadicSet> {
    let inner = || -> Result<DyadicSet> {
        let (rank_text, index_list) = text
            .split_once(':')
            .ok_or_else(|| anyhow!("expected rank:index[,index...]"))?;
        let rank: u8 = rank_text.trim().parse().context("bad rank")?;
        let indices = index_list
            .split(',')
            .map(|token| token.trim().parse::<u64>().context("bad interval index"))
            .collect::<Result<Vec<u64>>>()?;
        Ok(DyadicSet::from_indices(rank, &indices)?)
    };
    inner()
        .with_context(|| format!("--gate {text:?}"))
        .context(Usage)
}

fn parse_constant(text: &str) -> Result<u16> {
    let trimmed = text.trim();
    if let Some(hex) = trimmed.strip_prefix("0x").or_else(|| trimmed.strip_prefix("0X")) {
        u16::from_str_radix(hex, 16).context("bad hex constant")
    } else {
        trimmed.parse().context("bad constant")
    }
}

fn parse_mixer(text: &str) -> Result<Mixer> {
    let inner = || -> Result<Mixer> {
        if text == "identity" {
            return Ok(Mixer::Identity);
        }
        if let Some(constant) = text.strip_prefix("xor-rotate:") {
            return Ok(Mixer::XorRotate {
                constant: parse_constant(constant)?,
            });
        }
        Err(anyhow!("expected identity or xor-rotate:CONST"))
    };
    inner()
        .with_context(|| format!("--mixer {text:?}"))
        .context(Usage)
}

fn pick_format(explicit: Option<Format>, path: &Path) -> Format {
    explicit.unwrap_or_else(|| {
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            Format::Json
        } else {
            Format::Hex
        }
    })
}

fn render_table(table: &SBoxTable, format: Format) -> Result<String> {
    Ok(match format {
        Format::Hex => io::render_hex_grid(table)?,
        Format::Json => io::render_table_json(table)?,
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let format = pick_format(args.format, &args.out);
    if format == Format::Hex && args.bits != 8 {
        return Err(anyhow!("the hex grid holds 8-bit tables; use --format json")
            .context(Usage));
    }
    if !(MIN_WIDTH..=MAX_WIDTH).contains(&args.width) {
        return Err(
            anyhow!("--width {} is outside {MIN_WIDTH}..={MAX_WIDTH}", args.width).context(Usage),
        );
    }
    let params = GenerationParams {
        beta: parse_beta(&args.beta, args.width)?,
        x0: parse_x0(&args.x0, args.width)?,
        gate: parse_gate(&args.gate)?,
        word_bits: args.bits,
        budget: args.budget,
        mixer: parse_mixer(&args.mixer)?,
        stride: args.stride.into(),
    };
    params.validate().context(Usage)?;
    let (table, trace) = generate(&params)?;
    write_file(&args.out, &render_table(&table, format)?)?;
    println!(
        "iterations {} acceptances {} duplicates {}",
        trace.iterations, trace.acceptances, trace.duplicates
    );
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let table = match (&args.input, args.baseline) {
        (Some(path), None) => io::parse_table(&read_file(path)?)?,
        (None, Some(BaselineArg::Gf)) => gf256::baseline(),
        (None, Some(BaselineArg::Identity)) => SBoxTable::identity(8)?,
        _ => unreachable!("clap enforces exactly one source"),
    };
    let report: CryptoReport = if args.uniformity {
        let Provenance::Generated { params: record, .. } = table.provenance() else {
            return Err(betabox::Error::NoGenerationRecord.into());
        };
        let params = record.to_params()?;
        analyze_with_uniformity(&table, &params, args.samples).map_err(|err| match err {
            betabox::Error::TooFewSamples { .. } => {
                anyhow!(err).context("--samples").context(Usage)
            }
            other => other.into(),
        })?
    } else {
        analyze(&table)
    };
    let text = io::render_report_json(&report)?;
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(dir) = &args.hist_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        write_file(&dir.join("ddt.csv"), &io::ddt_histogram_csv(&report.ddt_histogram))?;
        write_file(&dir.join("lat.csv"), &io::lat_histogram_csv(&report.lat_histogram))?;
    }
    Ok(())
}

/// Builds the model, Monte Carlo, and optional measured rows for each rank,
/// then appends the fixed baselines.
fn latency_rows(setup: &LatencySetup, ranks: &[u8]) -> Result<(Vec<LatencyRow>, Vec<String>)> {
    if !(1..=16).contains(&setup.bits) {
        return Err(anyhow!("--bits must be in 1..=16").context(Usage));
    }
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    for &rank in ranks {
        let config = LatencyConfig {
            gate_rank: rank,
            c_iter: setup.c_iter,
            c_acc: setup.c_acc,
            f_clk_hz: setup.fclk,
            trials: setup.trials,
            rng_seed: setup.seed,
        };
        config.validate().context(Usage)?;
        rows.push(LatencyRow::point(
            "model",
            Some(rank),
            expected_cycles(&config, setup.bits),
            setup.fclk,
        ));
        let stats = simulate(&config, setup.bits)?;
        notes.push(format!(
            "urllc k={rank}: {} (p95 {:.3} us)",
            if stats.p95_us < 200.0 { "pass" } else { "fail" },
            stats.p95_us
        ));
        rows.push(LatencyRow::spread("mc", Some(rank), &stats));
        if setup.measure {
            // gate cell containing 5/8 at this rank, like the default setup
            let gate = DyadicSet::single(rank, (5u64 << rank) / 8).context(Usage)?;
            let params = GenerationParams {
                gate,
                word_bits: setup.bits,
                ..GenerationParams::default()
            };
            let measured = measure_real_generator(&params, &config)?;
            if measured.failures > 0 {
                notes.push(format!(
                    "measured k={rank}: {} of {} trials hit the budget",
                    measured.failures, measured.trials
                ));
            }
            if let Some(stats) = measured.stats {
                rows.push(LatencyRow::spread("measured", Some(rank), &stats));
            }
        }
    }
    rows.extend(baseline_rows(setup.fclk));
    Ok((rows, notes))
}

fn emit_latency(setup: &LatencySetup, rows: &[LatencyRow], notes: &[String]) -> Result<()> {
    println!("rng: {SIMULATION_RNG}");
    print!("{}", io::latency_table(rows));
    for note in notes {
        println!("{note}");
    }
    if let Some(path) = &setup.csv {
        write_file(path, &io::latency_csv(rows))?;
    }
    Ok(())
}

fn cmd_latency(args: LatencyArgs) -> Result<()> {
    let (rows, notes) = latency_rows(&args.setup, &[args.k])?;
    emit_latency(&args.setup, &rows, &notes)
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    let (rows, notes) = latency_rows(&args.setup, &args.ks)?;
    emit_latency(&args.setup, &rows, &notes)
}

#[derive(Args)]
struct InvertArgs {
    /// Table file to invert
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Output format; inferred from the output extension when omitted
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn cmd_invert(args: InvertArgs) -> Result<()> {
    let table = io::parse_table(&read_file(&args.input)?)?;
    let inverse = table.invert()?;
    let format = pick_format(args.format, &args.out);
    if format == Format::Hex && inverse.word_bits() != 8 {
        return Err(anyhow!("the hex grid holds 8-bit tables; use --format json")
            .context(Usage));
    }
    write_file(&args.out, &render_table(&inverse, format)?)
}
