//! Command-line surface for the verification engine: enumerate, verify,
//! sweep and export. Scriptable and CI-friendly: exit 0 on success, 1 on a
//! mathematical refutation or violation, 2 on usage errors. Output is
//! byte-deterministic for a fixed seed unless --timings is set.

use clap::{Parser, Subcommand, ValueEnum};
use orbith::driver::{
    constants_dump, for_each_structure_filtered, gk_run, orbit_listing, structures_listing,
    sweep_type, DEFAULT_SWEEP,
};
use orbith::orbit::canonical_kahler_metric;
use orbith::rootsys::{RootSystemSpec, TypeError};
use orbith::verify::{induction_replay, verify_theorem, RankReport, Verdict};
use serde::Deserialize;
use serde_json::json;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Debug, Parser)]
#[command(name = "orbith")]
#[command(about = "exact verification of invariant Hermitian structures on adjoint orbits")]
struct Cli {
    /// JSON config file mirroring the global flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Seed for all samplers; fully determines sampled instances.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for sweeps (per-type work items).
    #[arg(long, global = true)]
    parallelism: Option<usize>,

    /// Write the report stream to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Include wall-clock timings in reports (breaks byte determinism).
    #[arg(long, global = true)]
    timings: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum OutputFormat {
    Json,
    Csv,
    Markdown,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the orbits of one or more types: S-subsets, dimensions, counts.
    Orbits { types: Vec<String> },

    /// List the invariant complex structures of each orbit as root sets.
    Structures {
        r#type: String,
        /// Restrict to one orbit: comma-separated 1-based simple-root indices.
        #[arg(long)]
        s: Option<String>,
    },

    /// Dump the integer and normalized structure-constant tables as JSON.
    Constants { r#type: String },

    /// Verify one type, optionally restricted to one orbit or one structure.
    Verify {
        r#type: String,
        /// Orbit selector: comma-separated 1-based simple-root indices.
        #[arg(long, conflicts_with = "full_flag")]
        s: Option<String>,
        /// Shorthand for the empty S (the full flag orbit).
        #[arg(long)]
        full_flag: bool,
        /// Restrict to one structure by its canonical index.
        #[arg(long)]
        sigma: Option<usize>,
        /// Attach the height-induction derivation log to each report.
        #[arg(long)]
        replay: bool,
    },

    /// Verify all orbits and structures of the configured types.
    Sweep {
        /// Types to sweep; defaults to the standard preset.
        #[arg(long, value_delimiter = ',')]
        types: Vec<String>,
        /// Skip types of total rank above this bound.
        #[arg(long)]
        max_rank: Option<usize>,
    },

    /// Sample generalized Kahler instances and check the consequences.
    Gk {
        r#type: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

/// Config file mirroring the flags; CLI values win.
#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RunConfig {
    #[serde(default)]
    types: Option<Vec<String>>,
    #[serde(default)]
    max_rank: Option<usize>,
    #[serde(default)]
    sweep_set: Option<String>,
    #[serde(default)]
    output_format: Option<OutputFormat>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    parallelism: Option<usize>,
}

struct Settings {
    format: OutputFormat,
    seed: u64,
    parallelism: usize,
    out: Option<PathBuf>,
    timings: bool,
    config: RunConfig,
}

/// Output sink that treats a closed pipe as a normal early exit.
struct Out(Box<dyn Write>);

impl Out {
    fn line(&mut self, args: std::fmt::Arguments<'_>) {
        let res = self
            .0
            .write_fmt(args)
            .and_then(|()| self.0.write_all(b"\n"));
        if let Err(e) = res {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            panic!("cannot write output: {e}");
        }
    }
}

macro_rules! outln {
    ($w:expr, $($arg:tt)*) => {
        $w.line(format_args!($($arg)*))
    };
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("ORBITH_LOG")).init();
    let cli = Cli::parse();

    let config: RunConfig = match &cli.config {
        Some(path) => match fs::read_to_string(path) {
            Ok(text) => match serde_json::from_str(&text) {
                Ok(c) => c,
                Err(e) => return usage_error(&format!("bad config {}: {e}", path.display())),
            },
            Err(e) => return usage_error(&format!("cannot read {}: {e}", path.display())),
        },
        None => RunConfig::default(),
    };

    let settings = Settings {
        format: cli
            .format
            .or(config.output_format)
            .unwrap_or(OutputFormat::Json),
        seed: cli.seed.or(config.seed).unwrap_or(0),
        parallelism: cli.parallelism.or(config.parallelism).unwrap_or(1).max(1),
        out: cli.out.clone(),
        timings: cli.timings,
        config,
    };

    match run(cli.command, &settings) {
        Ok(code) => code,
        Err(e) => match e {
            TypeError::Parse(_) | TypeError::InvalidRank { .. } | TypeError::WeylTooLarge { .. } => {
                usage_error(&e.to_string())
            }
        },
    }
}

fn writer(settings: &Settings) -> Out {
    Out(match &settings.out {
        Some(path) => Box::new(fs::File::create(path).expect("cannot create output file")),
        None => Box::new(std::io::stdout()),
    })
}

fn parse_s_arg(arg: &str, rank: usize) -> Result<u32, String> {
    let mut mask = 0u32;
    if arg.trim().is_empty() {
        return Ok(0);
    }
    for part in arg.split(',') {
        let i: usize = part
            .trim()
            .parse()
            .map_err(|_| format!("bad simple-root index {part:?}"))?;
        if i == 0 || i > rank {
            return Err(format!("simple-root index {i} out of range 1..={rank}"));
        }
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

fn run(command: Command, settings: &Settings) -> Result<ExitCode, TypeError> {
    match command {
        Command::Orbits { types } => cmd_orbits(types, settings),
        Command::Structures { r#type, s } => cmd_structures(&r#type, s.as_deref(), settings),
        Command::Constants { r#type } => cmd_constants(&r#type, settings),
        Command::Verify {
            r#type,
            s,
            full_flag,
            sigma,
            replay,
        } => cmd_verify(&r#type, s.as_deref(), full_flag, sigma, replay, settings),
        Command::Sweep { types, max_rank } => cmd_sweep(types, max_rank, settings),
        Command::Gk { r#type, samples } => cmd_gk(&r#type, samples, settings),
    }
}

fn cmd_orbits(types: Vec<String>, settings: &Settings) -> Result<ExitCode, TypeError> {
    let types = effective_types(types, settings);
    if types.is_empty() {
        return Err(TypeError::Parse("empty type list".into()));
    }
    let mut w = writer(settings);
    match settings.format {
        OutputFormat::Csv => outln!(w, "type,s,dimM,r0Size,sigmaCount"),
        OutputFormat::Markdown => {
            outln!(w, "| type | S | dim m | |R0| | structures |");
            outln!(w, "|------|---|-------|------|------------|");
        }
        OutputFormat::Json => {}
    }
    for name in &types {
        let infos = orbit_listing(name)?;
        let spec = RootSystemSpec::parse(name)?;
        for info in &infos {
            match settings.format {
                OutputFormat::Json => {
                    let line = json!({"type": spec.to_string(), "orbit": info});
                    outln!(w, "{line}");
                }
                OutputFormat::Csv => outln!(w,
                    "{},{},{},{},{}",
                    spec,
                    join_ids(&info.s),
                    info.dim_m,
                    info.r0_size,
                    info.sigma_count
                ),
                OutputFormat::Markdown => outln!(w,
                    "| {} | {{{}}} | {} | {} | {} |",
                    spec,
                    join_ids(&info.s),
                    info.dim_m,
                    info.r0_size,
                    info.sigma_count
                ),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn join_ids(s: &[usize]) -> String {
    s.iter()
        .map(|i| format!("a{i}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_structures(name: &str, s: Option<&str>, settings: &Settings) -> Result<ExitCode, TypeError> {
    let spec = RootSystemSpec::parse(name)?;
    let only_mask = match s {
        Some(arg) => Some(
            parse_s_arg(arg, spec.total_rank()).map_err(TypeError::Parse)?,
        ),
        None => None,
    };
    let listing = structures_listing(name)?;
    let mut w = writer(settings);
    for (info, sigmas) in &listing {
        if let Some(mask) = only_mask {
            let want: Vec<usize> = (0..spec.total_rank())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| i + 1)
                .collect();
            if info.s != want {
                continue;
            }
        }
        match settings.format {
            OutputFormat::Markdown => {
                outln!(w, "### {} S={{{}}} (dim {})", spec, join_ids(&info.s), info.dim_m);
                for (i, sig) in sigmas.iter().enumerate() {
                    let pretty: Vec<String> =
                        sig.iter().map(|v| format!("{v:?}")).collect();
                    outln!(w, "- sigma {i}: {}", pretty.join(" "));
                }
            }
            _ => {
                let line = json!({"type": spec.to_string(), "orbit": info, "structures": sigmas});
                outln!(w, "{line}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_constants(name: &str, settings: &Settings) -> Result<ExitCode, TypeError> {
    let value = constants_dump(name)?;
    let mut w = writer(settings);
    outln!(w, "{}", serde_json::to_string_pretty(&value).unwrap());
    Ok(ExitCode::SUCCESS)
}

fn report_line(w: &mut Out, format: OutputFormat, r: &RankReport, extra: Option<serde_json::Value>) {
    match format {
        OutputFormat::Json => {
            let mut v = serde_json::to_value(r).unwrap();
            if let Some(e) = extra {
                v.as_object_mut().unwrap().insert("replay".into(), e);
            }
            outln!(w, "{v}");
        }
        OutputFormat::Csv => {
            outln!(w,
                "{},{},{},{},{},{},{},{}",
                r.type_name,
                join_ids(&r.orbit.s),
                r.sigma_index,
                r.dim,
                r.num_vars,
                r.rank_ddj,
                r.rank_joint,
                verdict_str(r.verdict)
            );
        }
        OutputFormat::Markdown => {
            let sigma: Vec<String> = r.sigma.iter().map(|v| format!("{v:?}")).collect();
            outln!(w,
                "| {} | {{{}}} | {} | {} | {}/{} | {} | {} |",
                r.type_name,
                join_ids(&r.orbit.s),
                r.sigma_index,
                r.dim,
                r.rank_ddj,
                r.rank_joint,
                verdict_str(r.verdict),
                sigma.join(" ")
            );
        }
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Confirmed => "confirmed",
        Verdict::Trivial => "trivial",
        Verdict::Refuted => "refuted",
    }
}

fn csv_header(w: &mut Out) {
    outln!(w, "type,s,sigmaIndex,dim,numVars,rankDdj,rankJoint,verdict");
}

fn markdown_header(w: &mut Out) {
    outln!(w, "| type | S | sigma | dim | rank d(dJw)/joint | verdict | roots of sigma |");
    outln!(w, "|------|---|-------|-----|-------------------|---------|----------------|");
}

fn cmd_verify(
    name: &str,
    s: Option<&str>,
    full_flag: bool,
    sigma: Option<usize>,
    replay: bool,
    settings: &Settings,
) -> Result<ExitCode, TypeError> {
    let spec = RootSystemSpec::parse(name)?;
    let only_mask = if full_flag {
        Some(0)
    } else {
        match s {
            Some(arg) => Some(parse_s_arg(arg, spec.total_rank()).map_err(TypeError::Parse)?),
            None => None,
        }
    };
    let mut w = writer(settings);
    match settings.format {
        OutputFormat::Csv => csv_header(&mut w),
        OutputFormat::Markdown => markdown_header(&mut w),
        OutputFormat::Json => {}
    }
    let mut counts = (0usize, 0usize, 0usize); // confirmed, trivial, refuted
    let timings = settings.timings;
    let format = settings.format;
    for_each_structure_filtered(name, only_mask, sigma, |ctx| {
        let start = Instant::now();
        let mut report = verify_theorem(ctx.calc, ctx.j, ctx.sigma_index);
        if timings {
            report.timing_ms = Some(start.elapsed().as_millis());
        }
        match report.verdict {
            Verdict::Confirmed => counts.0 += 1,
            Verdict::Trivial => counts.1 += 1,
            Verdict::Refuted => counts.2 += 1,
        }
        let extra = if replay {
            let metric = canonical_kahler_metric(ctx.j);
            let log = induction_replay(ctx.calc, ctx.j, &metric)
                .expect("witness metric always replays");
            Some(serde_json::to_value(&log).unwrap())
        } else {
            None
        };
        report_line(&mut w, format, &report, extra);
    })?;
    let summary = json!({"confirmed": counts.0, "trivial": counts.1, "refuted": counts.2});
    if settings.format == OutputFormat::Json {
        outln!(w, "{summary}");
    } else {
        outln!(w,
            "confirmed={} trivial={} refuted={}",
            counts.0, counts.1, counts.2
        );
    }
    Ok(if counts.2 == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn effective_types(cli_types: Vec<String>, settings: &Settings) -> Vec<String> {
    if !cli_types.is_empty() {
        return cli_types;
    }
    if let Some(types) = &settings.config.types {
        if !types.is_empty() {
            return types.clone();
        }
    }
    match settings.config.sweep_set.as_deref() {
        None | Some("default") => DEFAULT_SWEEP.iter().map(|s| s.to_string()).collect(),
        Some(other) => other.split(',').map(|s| s.trim().to_string()).collect(),
    }
}

fn cmd_sweep(
    types: Vec<String>,
    max_rank: Option<usize>,
    settings: &Settings,
) -> Result<ExitCode, TypeError> {
    let mut types = effective_types(types, settings);
    if types.is_empty() {
        return Err(TypeError::Parse("empty type list".into()));
    }
    let max_rank = max_rank.or(settings.config.max_rank);
    if let Some(bound) = max_rank {
        let mut kept = Vec::new();
        for t in types {
            if RootSystemSpec::parse(&t)?.total_rank() <= bound {
                kept.push(t);
            }
        }
        types = kept;
    }
    // validate up front so usage errors beat long runs
    for t in &types {
        RootSystemSpec::parse(t)?;
    }

    log::info!("sweeping {} types with parallelism {}", types.len(), settings.parallelism);
    let with_timing = settings.timings;
    let results: Vec<Result<Vec<RankReport>, TypeError>> = if settings.parallelism > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(settings.parallelism)
            .build()
            .expect("thread pool");
        pool.install(|| {
            use rayon::prelude::*;
            types
                .par_iter()
                .map(|t| sweep_type(t, with_timing))
                .collect()
        })
    } else {
        types.iter().map(|t| sweep_type(t, with_timing)).collect()
    };

    let mut w = writer(settings);
    match settings.format {
        OutputFormat::Csv => csv_header(&mut w),
        OutputFormat::Markdown => markdown_header(&mut w),
        OutputFormat::Json => {}
    }
    let mut counts = (0usize, 0usize, 0usize);
    for result in results {
        for report in result? {
            match report.verdict {
                Verdict::Confirmed => counts.0 += 1,
                Verdict::Trivial => counts.1 += 1,
                Verdict::Refuted => counts.2 += 1,
            }
            report_line(&mut w, settings.format, &report, None);
        }
    }
    let summary = json!({"confirmed": counts.0, "trivial": counts.1, "refuted": counts.2});
    if settings.format == OutputFormat::Json {
        outln!(w, "{summary}");
    } else {
        outln!(w,
            "confirmed={} trivial={} refuted={}",
            counts.0, counts.1, counts.2
        );
    }
    Ok(if counts.2 == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_gk(name: &str, samples: usize, settings: &Settings) -> Result<ExitCode, TypeError> {
    let reports = gk_run(name, samples, settings.seed)?;
    let mut w = writer(settings);
    let mut violations = 0usize;
    match settings.format {
        OutputFormat::Csv => {
            outln!(w, "type,s,sample,eq2Holds,dbZero,kahlerPlus,kahlerMinus,violation")
        }
        OutputFormat::Markdown => {
            outln!(w, "| type | S | sample | matching | db=0 | Kahler+ | Kahler- | violation |");
            outln!(w, "|------|---|--------|----------|------|---------|---------|-----------|");
        }
        OutputFormat::Json => {}
    }
    for r in &reports {
        if r.violation {
            violations += 1;
        }
        match settings.format {
            OutputFormat::Json => {
                outln!(w, "{}", serde_json::to_string(r).unwrap())
            }
            OutputFormat::Csv => outln!(w,
                "{},{},{},{},{},{},{},{}",
                r.type_name,
                join_ids(&r.orbit.s),
                r.sample,
                r.eq2_holds,
                r.db_zero,
                r.kahler_plus,
                r.kahler_minus,
                r.violation
            ),
            OutputFormat::Markdown => outln!(w,
                "| {} | {{{}}} | {} | {} | {} | {} | {} | {} |",
                r.type_name,
                join_ids(&r.orbit.s),
                r.sample,
                r.eq2_holds,
                r.db_zero,
                r.kahler_plus,
                r.kahler_minus,
                r.violation
            ),
        }
    }
    let summary = json!({"samples": reports.len(), "violations": violations});
    if settings.format == OutputFormat::Json {
        outln!(w, "{summary}");
    } else {
        outln!(w, "samples={} violations={}", reports.len(), violations);
    }
    Ok(if violations == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
