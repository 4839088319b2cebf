//! Command-line driver for the comment-network motif profiling pipeline.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use egomotif::ingest::{self, InputFormat};
use egomotif::motif::{MotifFilter, MotifId};
use egomotif::netgen;
use egomotif::pipeline::{
    self, BenchReport, IngestParams, MotifParams, PipelineConfig, ProfileParams, RunReport,
    WindowParams,
};
use egomotif::select::{self, Label, LabeledRow};
use egomotif::synth;

#[derive(Parser)]
#[command(
    name = "egomotif",
    version,
    about = "Egocentric network motif profiling over user/video comment logs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and normalize a comment log, optionally selecting one window.
    Ingest(IngestCmd),
    /// Build the two-colored comment network for one window and export it.
    Netgen(NetgenCmd),
    /// Run one window through motif profiles, nrp and spatialization.
    Profile(ProfileCmd),
    /// Rank motifs by information gain over labeled nrp profiles.
    Select(SelectCmd),
    /// Generate a synthetic comment log with spam campaigns.
    Synth(SynthCmd),
    /// Run the windowed pipeline from a config file.
    Run(RunCmd),
    /// Time filtered vs full profile generation on the same windows.
    Bench(BenchCmd),
}

#[derive(Args, Clone)]
struct IngestOpts {
    /// Input JSONL comment log.
    #[arg(long)]
    input: PathBuf,
    /// Window start in UTC seconds; defaults to the earliest timestamp.
    #[arg(long)]
    window_start: Option<i64>,
    /// Window length in hours.
    #[arg(long, default_value_t = 6.0)]
    window_hours: f64,
    /// Minimum normalized text length in characters.
    #[arg(long, default_value_t = ingest::DEFAULT_MIN_LENGTH)]
    min_length: usize,
    /// Stopword list file (one word per line); defaults to the built-in
    /// English list.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Skip malformed records instead of failing.
    #[arg(long)]
    lenient: bool,
    /// Keep tokens containing non-Latin letters.
    #[arg(long)]
    keep_non_latin: bool,
}

impl IngestOpts {
    fn params(&self) -> IngestParams {
        IngestParams {
            min_length: self.min_length,
            stopwords: self.stopwords.clone(),
            latin_only: !self.keep_non_latin,
            lenient: self.lenient,
        }
    }

    fn window(&self, count: usize) -> WindowParams {
        WindowParams {
            start: self.window_start,
            hours: self.window_hours,
            count,
        }
    }
}

#[derive(Args, Clone)]
struct NetgenOpts {
    /// Jaccard distance below which two comments connect their users.
    #[arg(long, default_value_t = netgen::DEFAULT_JACCARD_THRESHOLD)]
    jaccard_threshold: f64,
    /// Character window of the rolling-hash shingles.
    #[arg(long, default_value_t = netgen::DEFAULT_SHINGLE_WINDOW)]
    shingle_window: usize,
}

impl NetgenOpts {
    fn config(&self) -> netgen::NetgenConfig {
        netgen::NetgenConfig {
            shingle_window: self.shingle_window,
            jaccard_threshold: self.jaccard_threshold,
        }
    }
}

#[derive(Args, Clone)]
struct MotifOpts {
    /// Motif sizes to enumerate.
    #[arg(long, value_delimiter = ',', default_values_t = vec![3u8, 4, 5])]
    sizes: Vec<u8>,
    /// Egocentric neighbourhood radius in hops.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Newline-delimited motif id file restricting the reported motifs.
    #[arg(long)]
    filter: Option<PathBuf>,
    /// Prune enumeration subtrees that cannot reach an allowed motif
    /// (count-equivalent to plain filtering).
    #[arg(long)]
    early_prune: bool,
}

impl MotifOpts {
    fn params(&self) -> MotifParams {
        MotifParams {
            sizes: self.sizes.clone(),
            k: self.k,
            filter: self.filter.clone(),
            early_prune: self.early_prune,
        }
    }
}

#[derive(Args, Clone)]
struct ProfileOpts {
    /// Ratio-profile damping integer.
    #[arg(long, default_value_t = egomotif::profile::DEFAULT_EPSILON)]
    epsilon: u32,
    /// Two motif ids `a,b` for the two-motif spatialization.
    #[arg(long)]
    plot_motifs: Option<String>,
}

impl ProfileOpts {
    fn params(&self) -> Result<ProfileParams> {
        let plot_motifs = match &self.plot_motifs {
            None => None,
            Some(text) => {
                let (a, b) = text
                    .split_once(',')
                    .context("--plot-motifs expects two ids `a,b`")?;
                Some([a.trim().to_string(), b.trim().to_string()])
            }
        };
        Ok(ProfileParams {
            epsilon: self.epsilon,
            plot_motifs,
        })
    }
}

#[derive(Args)]
struct IngestCmd {
    #[command(flatten)]
    ingest: IngestOpts,
    /// Output path for cleaned comments (JSONL); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Apply the window selection (otherwise the whole file is kept).
    #[arg(long)]
    window: bool,
}

#[derive(Args)]
struct NetgenCmd {
    #[command(flatten)]
    ingest: IngestOpts,
    #[command(flatten)]
    netgen: NetgenOpts,
    /// Output path for the edge-list network file.
    #[arg(long, default_value = "network.txt")]
    out: PathBuf,
    /// Also write GraphML here.
    #[arg(long)]
    graphml: Option<PathBuf>,
}

#[derive(Args)]
struct ProfileCmd {
    #[command(flatten)]
    ingest: IngestOpts,
    #[command(flatten)]
    netgen: NetgenOpts,
    #[command(flatten)]
    motif: MotifOpts,
    #[command(flatten)]
    profile: ProfileOpts,
    /// Directory receiving the window artifacts.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Ground-truth roles CSV adding a role column to spatializations.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Thread count (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct SelectCmd {
    /// nrp CSV produced by the profile stage (`ego_id,motif_id,nrp`).
    #[arg(long)]
    profiles: PathBuf,
    /// Labels CSV (`user_id,spam|regular`).
    #[arg(long)]
    labels: PathBuf,
    /// Regular:spam sampling ratio.
    #[arg(long, default_value = "3:1")]
    ratio: String,
    /// Spam rows to draw; defaults to every labeled spam row.
    #[arg(long)]
    n_spam: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Motifs to keep from the top of the ranking.
    #[arg(long, default_value_t = 7)]
    top_k: usize,
    /// Manual override: newline-delimited motif ids replacing the top-k.
    #[arg(long)]
    r#override: Option<PathBuf>,
    /// Ranking CSV output (`motif_id,gain,rank`).
    #[arg(long, default_value = "ranking.csv")]
    out_ranking: PathBuf,
    /// Selected motif id list output (pipeline filter format).
    #[arg(long, default_value = "selected.txt")]
    out_selected: PathBuf,
}

#[derive(Args)]
struct SynthCmd {
    /// Window spec JSON; built-in defaults when omitted.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output JSONL path.
    #[arg(long)]
    out: PathBuf,
    /// Ground-truth roles CSV path (defaults to `<out>.truth.csv`).
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Number of consecutive windows to generate.
    #[arg(long, default_value_t = 1)]
    windows: usize,
}

#[derive(Args)]
struct RunCmd {
    /// Pipeline config JSON.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Number of consecutive windows.
    #[arg(long)]
    windows: Option<usize>,
    #[arg(long)]
    window_start: Option<i64>,
    #[arg(long)]
    window_hours: Option<f64>,
    #[arg(long)]
    filter: Option<PathBuf>,
    #[arg(long)]
    early_prune: bool,
    #[arg(long)]
    epsilon: Option<u32>,
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    graphml: bool,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct BenchCmd {
    /// Pipeline config JSON.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    /// Motif id list defining the filtered arm.
    #[arg(long)]
    filter: PathBuf,
    /// Repetitions per arm and window.
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long)]
    windows: Option<usize>,
    #[arg(long)]
    window_start: Option<i64>,
    #[arg(long)]
    window_hours: Option<f64>,
    /// Prune enumeration subtrees in the filtered arm.
    #[arg(long)]
    early_prune: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// Write the benchmark report JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Ingest(cmd) => cmd_ingest(cmd),
        Command::Netgen(cmd) => cmd_netgen(cmd),
        Command::Profile(cmd) => cmd_profile(cmd),
        Command::Select(cmd) => cmd_select(cmd),
        Command::Synth(cmd) => cmd_synth(cmd),
        Command::Run(cmd) => cmd_run(cmd),
        Command::Bench(cmd) => cmd_bench(cmd),
    }
}

fn read_clean(opts: &IngestOpts, window: bool) -> Result<Vec<ingest::CleanComment>> {
    let file = File::open(&opts.input)
        .with_context(|| format!("ingest: opening {}", opts.input.display()))?;
    let reader = BufReader::new(file);
    let raw = if opts.lenient {
        let (ok, errors) = ingest::parse_comments_lenient(reader, InputFormat::Jsonl);
        for e in &errors {
            eprintln!("warning: skipped record: {e}");
        }
        ok
    } else {
        ingest::parse_comments_strict(reader, InputFormat::Jsonl).context("ingest")?
    };
    let mut cfg = ingest::IngestConfig {
        min_length: opts.min_length,
        latin_only: !opts.keep_non_latin,
        ..ingest::IngestConfig::default()
    };
    if let Some(path) = &opts.stopwords {
        let text = fs::read_to_string(path)
            .with_context(|| format!("ingest: reading {}", path.display()))?;
        cfg = cfg.with_stopwords(&text);
    }
    let mut clean: Vec<ingest::CleanComment> =
        raw.iter().filter_map(|r| ingest::normalize(r, &cfg)).collect();
    if window {
        let start = opts
            .window_start
            .or_else(|| clean.iter().map(|c| c.timestamp).min())
            .unwrap_or(0);
        let duration = (opts.window_hours * 3600.0).round() as i64;
        if duration <= 0 {
            bail!("ingest: window duration must be positive");
        }
        clean = ingest::select_window(&clean, start, duration);
    }
    Ok(clean)
}

fn out_writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        None => Box::new(io::stdout().lock()),
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
    })
}

fn cmd_ingest(cmd: IngestCmd) -> Result<ExitCode> {
    let clean = read_clean(&cmd.ingest, cmd.window || cmd.ingest.window_start.is_some())?;
    let mut w = out_writer(cmd.out.as_deref())?;
    for c in &clean {
        serde_json::to_writer(&mut w, c)?;
        writeln!(w)?;
    }
    w.flush()?;
    eprintln!("{} cleaned comments", clean.len());
    Ok(ExitCode::SUCCESS)
}

fn cmd_netgen(cmd: NetgenCmd) -> Result<ExitCode> {
    let cfg = cmd.netgen.config();
    cfg.validate().context("netgen")?;
    let clean = read_clean(&cmd.ingest, true)?;
    let net = pipeline::window_network(&clean, &cfg);
    let mut w = BufWriter::new(
        File::create(&cmd.out).with_context(|| format!("creating {}", cmd.out.display()))?,
    );
    netgen::write_edge_list(&net, &mut w).context("netgen: writing edge list")?;
    w.flush()?;
    if let Some(path) = &cmd.graphml {
        let mut w = BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        );
        netgen::write_graphml(&net, &mut w).context("netgen: writing graphml")?;
        w.flush()?;
    }
    let stats = net.stats();
    println!(
        "videos {}  users {} (spam {})  edges {}",
        stats.videos, stats.users, stats.spam_users, stats.edges
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_profile(cmd: ProfileCmd) -> Result<ExitCode> {
    let cfg = PipelineConfig {
        input: cmd.ingest.input.clone(),
        output_dir: cmd.out_dir.clone(),
        window: cmd.ingest.window(1),
        ingest: cmd.ingest.params(),
        netgen: cmd.netgen.config(),
        motif: cmd.motif.params(),
        profile: cmd.profile.params()?,
        truth: cmd.truth.clone(),
        graphml: false,
        threads: cmd.threads,
    };
    let report = pipeline::run_pipeline(&cfg)?;
    print_run_report(&report);
    exit_for(&report)
}

fn parse_ratio(text: &str) -> Result<(u32, u32)> {
    let (r, s) = text
        .split_once(':')
        .context("--ratio expects the form R:S")?;
    Ok((
        r.trim().parse().context("--ratio regular part")?,
        s.trim().parse().context("--ratio spam part")?,
    ))
}

fn cmd_select(cmd: SelectCmd) -> Result<ExitCode> {
    let text = fs::read_to_string(&cmd.profiles)
        .with_context(|| format!("select: reading {}", cmd.profiles.display()))?;
    let (motifs, rows) = pipeline::read_nrp_csv(&text).context("select: parsing profiles")?;
    let labels_text = fs::read_to_string(&cmd.labels)
        .with_context(|| format!("select: reading {}", cmd.labels.display()))?;
    let labels = pipeline::read_binary_labels_csv(&labels_text).context("select")?;

    let mut population: Vec<LabeledRow<f64>> = Vec::new();
    let mut unlabeled = 0usize;
    for (ego, values) in rows {
        match labels.get(&ego) {
            Some(&spam) => population.push(LabeledRow {
                ego,
                values,
                label: if spam { Label::Spam } else { Label::Regular },
            }),
            None => unlabeled += 1,
        }
    }
    if unlabeled > 0 {
        eprintln!("warning: {unlabeled} profiles had no label and were dropped");
    }

    let ratio = parse_ratio(&cmd.ratio)?;
    let n_spam = cmd.n_spam.unwrap_or_else(|| {
        population.iter().filter(|r| r.label == Label::Spam).count()
    });
    let sample =
        select::build_sample(&population, &motifs, ratio, n_spam, cmd.seed).context("select")?;
    let ranked = select::rank_motifs(&sample).context("select")?;

    let override_ids: Option<Vec<MotifId>> = match &cmd.r#override {
        None => None,
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("select: reading {}", path.display()))?;
            let filter = MotifFilter::parse(&text).context("select: override ids")?;
            Some(filter.ids().unwrap().iter().copied().collect())
        }
    };
    let selected = select::select_top(&ranked, cmd.top_k, override_ids.as_deref())
        .context("select")?;

    let mut w = BufWriter::new(File::create(&cmd.out_ranking)?);
    writeln!(w, "motif_id,gain,rank")?;
    for (rank, (id, gain)) in ranked.entries.iter().enumerate() {
        writeln!(w, "{},{},{}", id, gain, rank + 1)?;
    }
    w.flush()?;
    let mut w = BufWriter::new(File::create(&cmd.out_selected)?);
    for id in selected.ids().unwrap() {
        writeln!(w, "{id}")?;
    }
    w.flush()?;

    println!(
        "sampled {} regular + {} spam rows; ranked {} motifs; selected {}",
        sample.count(Label::Regular),
        sample.count(Label::Spam),
        ranked.entries.len(),
        selected.ids().unwrap().len()
    );
    for (id, gain) in ranked.entries.iter().take(cmd.top_k) {
        println!("  {id}  {gain:.6}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_synth(cmd: SynthCmd) -> Result<ExitCode> {
    let spec: synth::WindowSpec = match &cmd.spec {
        None => synth::WindowSpec::default(),
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("synth: reading {}", path.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("synth: parsing {}", path.display()))?
        }
    };
    let mut all = Vec::new();
    let mut roles = BTreeMap::new();
    for w in 0..cmd.windows.max(1) {
        let mut window = synth::generate_window(&spec, cmd.seed.wrapping_add(w as u64))
            .context("synth")?;
        let offset = w as i64 * spec.window_seconds();
        for c in &mut window.comments {
            c.timestamp += offset;
            c.comment_id = format!("w{w:02}{}", c.comment_id);
        }
        roles.extend(window.roles);
        all.extend(window.comments);
    }
    let mut w = BufWriter::new(
        File::create(&cmd.out).with_context(|| format!("creating {}", cmd.out.display()))?,
    );
    synth::emit_jsonl(&all, &mut w).context("synth: writing comments")?;
    w.flush()?;
    let truth_path = cmd
        .truth
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.truth.csv", cmd.out.display())));
    let mut w = BufWriter::new(
        File::create(&truth_path)
            .with_context(|| format!("creating {}", truth_path.display()))?,
    );
    synth::write_truth_csv(&roles, &mut w).context("synth: writing truth")?;
    w.flush()?;
    println!(
        "{} comments over {} window(s); truth at {}",
        all.len(),
        cmd.windows.max(1),
        truth_path.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_run(cmd: RunCmd) -> Result<ExitCode> {
    let mut cfg = match &cmd.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(input) = cmd.input {
        cfg.input = input;
    }
    if let Some(out) = cmd.out_dir {
        cfg.output_dir = out;
    }
    if let Some(n) = cmd.windows {
        cfg.window.count = n;
    }
    if let Some(start) = cmd.window_start {
        cfg.window.start = Some(start);
    }
    if let Some(hours) = cmd.window_hours {
        cfg.window.hours = hours;
    }
    if let Some(filter) = cmd.filter {
        cfg.motif.filter = Some(filter);
    }
    if cmd.early_prune {
        cfg.motif.early_prune = true;
    }
    if let Some(epsilon) = cmd.epsilon {
        cfg.profile.epsilon = epsilon;
    }
    if let Some(truth) = cmd.truth {
        cfg.truth = Some(truth);
    }
    if cmd.graphml {
        cfg.graphml = true;
    }
    if let Some(threads) = cmd.threads {
        cfg.threads = Some(threads);
    }
    let report = pipeline::run_pipeline(&cfg)?;
    print_run_report(&report);
    exit_for(&report)
}

fn print_run_report(report: &RunReport) {
    println!("window   comments  videos   users(spam)   edges  motifs   enum_ms   post_ms");
    for w in &report.windows {
        match (&w.error, w.stats) {
            (Some(e), _) => println!("{:>6}   ERROR: {e}", w.index),
            (None, Some(s)) => println!(
                "{:>6} {:>10} {:>7} {:>7}({:>4}) {:>7} {:>7} {:>9.1} {:>9.1}",
                w.index,
                w.comments,
                s.videos,
                s.users,
                s.spam_users,
                s.edges,
                w.observed_motifs,
                w.enumeration_ms,
                w.postprocessing_ms
            ),
            (None, None) => println!("{:>6}   (no data)", w.index),
        }
        for warning in &w.warnings {
            println!("         warning: {warning}");
        }
    }
    println!("artifacts under {}", report.output_dir.display());
}

fn exit_for(report: &RunReport) -> Result<ExitCode> {
    if report.failed_windows() > 0 {
        eprintln!("error: {} window(s) failed", report.failed_windows());
        Ok(ExitCode::from(2))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_bench(cmd: BenchCmd) -> Result<ExitCode> {
    let mut cfg = match &cmd.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(input) = cmd.input {
        cfg.input = input;
    }
    if let Some(n) = cmd.windows {
        cfg.window.count = n;
    }
    if let Some(start) = cmd.window_start {
        cfg.window.start = Some(start);
    }
    if let Some(hours) = cmd.window_hours {
        cfg.window.hours = hours;
    }
    if cmd.early_prune {
        cfg.motif.early_prune = true;
    }
    if let Some(threads) = cmd.threads {
        cfg.threads = Some(threads);
    }
    let text = fs::read_to_string(&cmd.filter)
        .with_context(|| format!("bench: reading {}", cmd.filter.display()))?;
    let filter = MotifFilter::parse(&text).context("bench: filter")?;
    let report = pipeline::benchmark_filtering(&cfg, &filter, cmd.runs)?;
    print_bench_report(&report);
    if let Some(path) = &cmd.out {
        let mut w = BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        );
        serde_json::to_writer_pretty(&mut w, &report)?;
        w.flush()?;
    }
    Ok(ExitCode::SUCCESS)
}

fn print_bench_report(report: &BenchReport) {
    println!("window   motifs full/allowed      full ms (σ)        filtered ms (σ)   speedup");
    for w in &report.windows {
        println!(
            "{:>6} {:>9}/{:<9} {:>12.1} ({:>7.1}) {:>12.1} ({:>7.1}) {:>8.2}x",
            w.index,
            w.full_motifs,
            w.allowed_motifs,
            w.full_mean_ms,
            w.full_std_ms,
            w.filtered_mean_ms,
            w.filtered_std_ms,
            w.speedup
        );
    }
    println!(
        "counts verified on every run; mean speedup {:.2}x over {} window(s)",
        report.mean_speedup(),
        report.windows.len()
    );
}
