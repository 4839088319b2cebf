//! End-to-end windowed pipeline: ingest, network construction, per-ego
//! motif profiles, ratio profiles, PCA spatialization, artifact emission,
//! and the filtered-vs-full timing benchmark.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{self, CleanComment, IngestConfig, InputFormat, RecordError};
use crate::motif::{
    extract_ego_network, EnumerationMode, MotifCounter, MotifError, MotifFilter, MotifId,
    MotifProfile,
};
use crate::netgen::{self, CommentNetwork, NetgenConfig, NetgenError, NetworkStats};
use crate::profile::{
    pca_2d, ratio_profile, two_motif_plot, ProfileError, ProfileMatrix, RatioProfiles,
    Spatialization, DEFAULT_EPSILON,
};
use crate::select::SelectError;
use crate::synth::{Role, SynthError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("ingest: {0}")]
    Record(#[from] RecordError),
    #[error("netgen: {0}")]
    Netgen(#[from] NetgenError),
    #[error("motif: {0}")]
    Motif(#[from] MotifError),
    #[error("profile: {0}")]
    Profile(#[from] ProfileError),
    #[error("select: {0}")]
    Select(#[from] SelectError),
    #[error("synth: {0}")]
    Synth(#[from] SynthError),
    #[error("{stage}: {message}")]
    Stage {
        stage: &'static str,
        message: String,
    },
    #[error("io: {path}: {source}")]
    Io {
        path: String,
        source: io::Error,
    },
}

impl PipelineError {
    fn io(path: &Path, source: io::Error) -> Self {
        PipelineError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct IngestParams {
    pub min_length: usize,
    pub stopwords: Option<PathBuf>,
    pub latin_only: bool,
    pub lenient: bool,
}

impl Default for IngestParams {
    fn default() -> Self {
        Self {
            min_length: ingest::DEFAULT_MIN_LENGTH,
            stopwords: None,
            latin_only: true,
            lenient: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct WindowParams {
    /// UTC seconds; absent means the earliest comment timestamp.
    pub start: Option<i64>,
    pub hours: f64,
    pub count: usize,
}

impl Default for WindowParams {
    fn default() -> Self {
        Self {
            start: None,
            hours: 6.0,
            count: 1,
        }
    }
}

impl WindowParams {
    pub fn duration_seconds(&self) -> i64 {
        (self.hours * 3600.0).round() as i64
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct MotifParams {
    pub sizes: Vec<u8>,
    pub k: usize,
    /// Path to a newline-delimited motif id list restricting the output.
    pub filter: Option<PathBuf>,
    /// Use the count-equivalent subtree-pruning mode when filtering.
    pub early_prune: bool,
}

impl Default for MotifParams {
    fn default() -> Self {
        Self {
            sizes: vec![3, 4, 5],
            k: 2,
            filter: None,
            early_prune: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ProfileParams {
    pub epsilon: u32,
    /// Two motif ids for the two-motif spatialization variant.
    pub plot_motifs: Option<[String; 2]>,
}

impl Default for ProfileParams {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            plot_motifs: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub output_dir: PathBuf,
    pub window: WindowParams,
    pub ingest: IngestParams,
    pub netgen: NetgenConfig,
    pub motif: MotifParams,
    pub profile: ProfileParams,
    /// Ground-truth roles CSV; adds a role column to spatializations.
    pub truth: Option<PathBuf>,
    pub graphml: bool,
    pub threads: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            input: PathBuf::from("comments.jsonl"),
            output_dir: PathBuf::from("out"),
            window: WindowParams::default(),
            ingest: IngestParams::default(),
            netgen: NetgenConfig::default(),
            motif: MotifParams::default(),
            profile: ProfileParams::default(),
            truth: None,
            graphml: false,
            threads: None,
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| PipelineError::Stage {
            stage: "config",
            message: format!("{}: {e}", path.display()),
        })
    }

    pub fn ingest_config(&self) -> Result<IngestConfig, PipelineError> {
        let mut cfg = IngestConfig {
            min_length: self.ingest.min_length,
            latin_only: self.ingest.latin_only,
            ..IngestConfig::default()
        };
        if let Some(path) = &self.ingest.stopwords {
            let text = fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
            cfg = cfg.with_stopwords(&text);
        }
        Ok(cfg)
    }

    pub fn motif_filter(&self) -> Result<MotifFilter, PipelineError> {
        match &self.motif.filter {
            None => Ok(MotifFilter::all()),
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
                Ok(MotifFilter::parse(&text)?)
            }
        }
    }

    pub fn enumeration_mode(&self) -> EnumerationMode {
        if self.motif.early_prune {
            EnumerationMode::EarlyPrune
        } else {
            EnumerationMode::DiscardAtOutput
        }
    }
}

/// Parameters of the per-window profile-generation stage.
#[derive(Debug, Clone)]
pub struct StageParams {
    pub sizes: Vec<u8>,
    pub k: usize,
    pub filter: MotifFilter,
    pub mode: EnumerationMode,
    pub epsilon: u32,
}

impl StageParams {
    pub fn new(
        sizes: &[u8],
        k: usize,
        filter: MotifFilter,
        mode: EnumerationMode,
        epsilon: u32,
    ) -> Result<Self, PipelineError> {
        let sizes = crate::motif::validate_sizes(sizes)?;
        Ok(Self {
            sizes,
            k,
            filter,
            mode,
            epsilon,
        })
    }
}

/// Output of the profile-generation stage for one window.
pub struct ProfileStage {
    pub profiles: Vec<MotifProfile>,
    pub matrix: ProfileMatrix,
    pub ratios: Option<RatioProfiles<f64>>,
    pub spatialization: Option<Spatialization<f64>>,
    pub enumeration_ms: f64,
    pub postprocessing_ms: f64,
    pub warnings: Vec<String>,
}

/// Run enumeration and profile post-processing over every user of the
/// network. Enumeration covers ego extraction plus subgraph classification
/// (one profile per ego, egos in id order); post-processing assembles the
/// count matrix and derives ratio profiles and the PCA spatialization.
pub fn profile_stage(
    net: &CommentNetwork,
    params: &StageParams,
) -> Result<ProfileStage, PipelineError> {
    // Validate once so per-thread counter construction cannot fail.
    MotifCounter::new(&params.sizes, params.filter.clone(), params.mode)?;
    let egos: Vec<u32> = net.users().collect();

    let start = Instant::now();
    let profiles: Vec<MotifProfile> = egos
        .par_iter()
        .map_init(
            || {
                MotifCounter::new(&params.sizes, params.filter.clone(), params.mode)
                    .expect("params validated above")
            },
            |counter, &u| {
                let ego = extract_ego_network(net, net.node_id(u), params.k)?;
                Ok::<MotifProfile, MotifError>(counter.count(&ego))
            },
        )
        .collect::<Result<Vec<_>, _>>()?;
    let enumeration_ms = start.elapsed().as_secs_f64() * 1e3;

    let start = Instant::now();
    let mut warnings = Vec::new();
    let matrix = ProfileMatrix::from_profiles(&profiles);
    let ratios = match ratio_profile::<f64>(&matrix, params.epsilon) {
        Ok(r) => Some(r),
        Err(ProfileError::EmptyMatrix) => {
            warnings.push("window has no surviving egos".to_string());
            None
        }
        Err(e) => return Err(e.into()),
    };
    let spatialization = match &ratios {
        Some(r) => match pca_2d(r) {
            Ok(s) => Some(s),
            Err(ProfileError::TooFewEgos(n)) => {
                warnings.push(format!("PCA skipped: {n} egos"));
                None
            }
            Err(ProfileError::TooFewMotifs(n)) => {
                warnings.push(format!("PCA skipped: {n} motifs"));
                None
            }
            Err(e) => return Err(e.into()),
        },
        None => None,
    };
    let postprocessing_ms = start.elapsed().as_secs_f64() * 1e3;

    Ok(ProfileStage {
        profiles,
        matrix,
        ratios,
        spatialization,
        enumeration_ms,
        postprocessing_ms,
        warnings,
    })
}

/// Build, prune and label the comment network for a window.
pub fn window_network(clean: &[CleanComment], cfg: &NetgenConfig) -> CommentNetwork {
    let net = netgen::build_network(clean, cfg);
    let net = netgen::prune_single_video_users(&net);
    netgen::label_spam_users(&net, clean)
}

#[derive(Debug, Serialize)]
pub struct WindowReport {
    pub index: usize,
    pub start: i64,
    pub end: i64,
    pub comments: usize,
    pub stats: Option<NetworkStats>,
    pub observed_motifs: usize,
    pub enumeration_ms: f64,
    pub postprocessing_ms: f64,
    pub files: Vec<String>,
    pub warnings: Vec<String>,
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub output_dir: PathBuf,
    pub windows: Vec<WindowReport>,
}

impl RunReport {
    pub fn failed_windows(&self) -> usize {
        self.windows.iter().filter(|w| w.error.is_some()).count()
    }
}

fn read_input(cfg: &PipelineConfig) -> Result<(Vec<CleanComment>, Vec<String>), PipelineError> {
    let file = File::open(&cfg.input).map_err(|e| PipelineError::io(&cfg.input, e))?;
    let reader = BufReader::new(file);
    let mut warnings = Vec::new();
    let raw = if cfg.ingest.lenient {
        let (ok, errors) = ingest::parse_comments_lenient(reader, InputFormat::Jsonl);
        warnings.extend(errors.iter().map(|e| format!("skipped record: {e}")));
        ok
    } else {
        ingest::parse_comments_strict(reader, InputFormat::Jsonl)?
    };
    let ingest_cfg = cfg.ingest_config()?;
    let clean: Vec<CleanComment> = raw.iter().filter_map(|r| ingest::normalize(r, &ingest_cfg)).collect();
    Ok((clean, warnings))
}

fn load_truth(cfg: &PipelineConfig) -> Result<Option<BTreeMap<String, Role>>, PipelineError> {
    match &cfg.truth {
        None => Ok(None),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
            Ok(Some(crate::synth::read_truth_csv(&text)))
        }
    }
}

fn create_file(path: &Path) -> Result<BufWriter<File>, PipelineError> {
    Ok(BufWriter::new(
        File::create(path).map_err(|e| PipelineError::io(path, e))?,
    ))
}

fn parse_plot_motifs(
    params: &ProfileParams,
) -> Result<Option<(MotifId, MotifId)>, PipelineError> {
    match &params.plot_motifs {
        None => Ok(None),
        Some([a, b]) => Ok(Some((a.parse::<MotifId>()?, b.parse::<MotifId>()?))),
    }
}

/// Run the full pipeline over consecutive windows, writing all artifacts
/// under `cfg.output_dir/window_NN/`. A failing window is reported and the
/// remaining windows still run.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunReport, PipelineError> {
    with_pool(cfg.threads, || run_pipeline_inner(cfg))
}

fn run_pipeline_inner(cfg: &PipelineConfig) -> Result<RunReport, PipelineError> {
    let (clean, input_warnings) = read_input(cfg)?;
    let filter = cfg.motif_filter()?;
    let truth = load_truth(cfg)?;
    let params = StageParams::new(
        &cfg.motif.sizes,
        cfg.motif.k,
        filter,
        cfg.enumeration_mode(),
        cfg.profile.epsilon,
    )?;
    let plot_motifs = parse_plot_motifs(&cfg.profile)?;

    let duration = cfg.window.duration_seconds();
    if duration <= 0 {
        return Err(PipelineError::Stage {
            stage: "config",
            message: "window duration must be positive".into(),
        });
    }
    let start = cfg
        .window
        .start
        .or_else(|| clean.iter().map(|c| c.timestamp).min())
        .unwrap_or(0);

    fs::create_dir_all(&cfg.output_dir).map_err(|e| PipelineError::io(&cfg.output_dir, e))?;
    let mut windows = Vec::new();
    for index in 0..cfg.window.count {
        let w_start = start + index as i64 * duration;
        let w_end = w_start + duration;
        let mut report = WindowReport {
            index,
            start: w_start,
            end: w_end,
            comments: 0,
            stats: None,
            observed_motifs: 0,
            enumeration_ms: 0.0,
            postprocessing_ms: 0.0,
            files: Vec::new(),
            warnings: if index == 0 {
                input_warnings.clone()
            } else {
                Vec::new()
            },
            error: None,
        };
        match run_window(cfg, &params, plot_motifs, &clean, w_start, duration, truth.as_ref(), &mut report) {
            Ok(()) => {}
            Err(e) => report.error = Some(e.to_string()),
        }
        windows.push(report);
    }

    let report = RunReport {
        output_dir: cfg.output_dir.clone(),
        windows,
    };
    let report_path = cfg.output_dir.join("report.json");
    let mut out = create_file(&report_path)?;
    serde_json::to_writer_pretty(&mut out, &report)
        .map_err(|e| PipelineError::Stage {
            stage: "report",
            message: e.to_string(),
        })?;
    out.flush().map_err(|e| PipelineError::io(&report_path, e))?;
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn run_window(
    cfg: &PipelineConfig,
    params: &StageParams,
    plot_motifs: Option<(MotifId, MotifId)>,
    clean: &[CleanComment],
    w_start: i64,
    duration: i64,
    truth: Option<&BTreeMap<String, Role>>,
    report: &mut WindowReport,
) -> Result<(), PipelineError> {
    let dir = cfg.output_dir.join(format!("window_{:02}", report.index));
    fs::create_dir_all(&dir).map_err(|e| PipelineError::io(&dir, e))?;

    let window = ingest::select_window(clean, w_start, duration);
    report.comments = window.len();
    if window.is_empty() {
        report.warnings.push("window contains no comments".to_string());
    }

    let net = window_network(&window, &cfg.netgen);
    report.stats = Some(net.stats());
    if net.user_count() == 0 {
        report.warnings.push("no users survive pruning".to_string());
    }

    let stage = profile_stage(&net, params)?;
    report.observed_motifs = stage.matrix.n_motifs();
    report.enumeration_ms = stage.enumeration_ms;
    report.postprocessing_ms = stage.postprocessing_ms;
    report.warnings.extend(stage.warnings.clone());

    let track = |report: &mut WindowReport, path: &Path| {
        report.files.push(path.display().to_string());
    };

    let network_path = dir.join("network.txt");
    let mut w = create_file(&network_path)?;
    netgen::write_edge_list(&net, &mut w).map_err(|e| PipelineError::io(&network_path, e))?;
    track(report, &network_path);

    if cfg.graphml {
        let path = dir.join("network.graphml");
        let mut w = create_file(&path)?;
        netgen::write_graphml(&net, &mut w).map_err(|e| PipelineError::io(&path, e))?;
        track(report, &path);
    }

    let counts_path = dir.join("counts.csv");
    let mut w = create_file(&counts_path)?;
    write_counts_csv(&stage.profiles, &mut w).map_err(|e| PipelineError::io(&counts_path, e))?;
    track(report, &counts_path);

    let nrp_path = dir.join("nrp.csv");
    let mut w = create_file(&nrp_path)?;
    write_nrp_csv(stage.ratios.as_ref(), &mut w).map_err(|e| PipelineError::io(&nrp_path, e))?;
    track(report, &nrp_path);

    let spatial_path = dir.join("spatialization.csv");
    let mut w = create_file(&spatial_path)?;
    write_spatialization_csv(stage.spatialization.as_ref(), &net, truth, &mut w)
        .map_err(|e| PipelineError::io(&spatial_path, e))?;
    track(report, &spatial_path);

    if let Some((a, b)) = plot_motifs {
        let path = dir.join("two_motif.csv");
        let mut w = create_file(&path)?;
        match two_motif_plot::<f64>(&stage.matrix, a, b, params.epsilon) {
            Ok(coords) => {
                write_two_motif_csv(&coords, a, b, &net, truth, &mut w)
                    .map_err(|e| PipelineError::io(&path, e))?;
                track(report, &path);
            }
            Err(ProfileError::UnknownMotif(id)) => {
                report
                    .warnings
                    .push(format!("two-motif plot skipped: {id} not observed"));
            }
            Err(e) => return Err(e.into()),
        }
    }

    Ok(())
}

/// `ego_id,motif_id,count` rows, egos then motifs ascending.
pub fn write_counts_csv<W: Write>(profiles: &[MotifProfile], mut w: W) -> io::Result<()> {
    writeln!(w, "ego_id,motif_id,count")?;
    let mut order: Vec<usize> = (0..profiles.len()).collect();
    order.sort_by(|&a, &b| profiles[a].ego.cmp(&profiles[b].ego));
    for i in order {
        let p = &profiles[i];
        for (id, count) in &p.counts {
            writeln!(w, "{},{},{}", p.ego, id, count)?;
        }
    }
    Ok(())
}

/// `ego_id,motif_id,nrp` rows over every matrix column.
pub fn write_nrp_csv<W: Write>(ratios: Option<&RatioProfiles<f64>>, mut w: W) -> io::Result<()> {
    writeln!(w, "ego_id,motif_id,nrp")?;
    let Some(r) = ratios else {
        return Ok(());
    };
    for (row, ego) in r.egos.iter().enumerate() {
        let nrp = r.nrp_row(row);
        for (col, id) in r.motifs.iter().enumerate() {
            writeln!(w, "{},{},{}", ego, id, nrp[col])?;
        }
    }
    Ok(())
}

fn role_suffix(truth: Option<&BTreeMap<String, Role>>, ego: &str) -> String {
    match truth {
        None => String::new(),
        Some(map) => format!(
            ",{}",
            map.get(ego).copied().unwrap_or(Role::Regular)
        ),
    }
}

/// `ego_id,pc1,pc2,spam_label[,role]` rows, one per surviving ego.
pub fn write_spatialization_csv<W: Write>(
    spatialization: Option<&Spatialization<f64>>,
    net: &CommentNetwork,
    truth: Option<&BTreeMap<String, Role>>,
    mut w: W,
) -> io::Result<()> {
    let role_col = if truth.is_some() { ",role" } else { "" };
    writeln!(w, "ego_id,pc1,pc2,spam_label{role_col}")?;
    let Some(s) = spatialization else {
        return Ok(());
    };
    for (ego, xy) in s.egos.iter().zip(&s.coords) {
        let spam = net
            .user_index(ego)
            .map(|u| net.is_spam(u))
            .unwrap_or(false);
        let label = if spam { "spam" } else { "regular" };
        writeln!(
            w,
            "{},{},{},{}{}",
            ego,
            xy[0],
            xy[1],
            label,
            role_suffix(truth, ego)
        )?;
    }
    Ok(())
}

/// Two-motif spatialization: nrp coordinates of the chosen motif pair.
pub fn write_two_motif_csv<W: Write>(
    coords: &[(String, [f64; 2])],
    a: MotifId,
    b: MotifId,
    net: &CommentNetwork,
    truth: Option<&BTreeMap<String, Role>>,
    mut w: W,
) -> io::Result<()> {
    let role_col = if truth.is_some() { ",role" } else { "" };
    writeln!(w, "ego_id,nrp_{a},nrp_{b},spam_label{role_col}")?;
    for (ego, xy) in coords {
        let spam = net
            .user_index(ego)
            .map(|u| net.is_spam(u))
            .unwrap_or(false);
        let label = if spam { "spam" } else { "regular" };
        writeln!(
            w,
            "{},{},{},{}{}",
            ego,
            xy[0],
            xy[1],
            label,
            role_suffix(truth, ego)
        )?;
    }
    Ok(())
}

/// Motif columns plus per-ego value rows parsed from an nrp CSV.
pub type NrpRows = (Vec<MotifId>, Vec<(String, Vec<f64>)>);

/// Parse an `ego_id,motif_id,nrp` file back into rows over the motif
/// columns it mentions (missing entries are zero).
pub fn read_nrp_csv(text: &str) -> Result<NrpRows, PipelineError> {
    let mut entries: Vec<(String, MotifId, f64)> = Vec::new();
    let mut motifs: std::collections::BTreeSet<MotifId> = std::collections::BTreeSet::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (Some(ego), Some(id), Some(value)) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(PipelineError::Stage {
                stage: "profiles",
                message: format!("line {}: expected ego_id,motif_id,nrp", i + 1),
            });
        };
        let id: MotifId = id.parse()?;
        let value: f64 = value.parse().map_err(|_| PipelineError::Stage {
            stage: "profiles",
            message: format!("line {}: bad nrp value", i + 1),
        })?;
        motifs.insert(id);
        entries.push((ego.to_string(), id, value));
    }
    let motifs: Vec<MotifId> = motifs.into_iter().collect();
    let mut rows: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (ego, id, value) in entries {
        let col = motifs.binary_search(&id).expect("column exists");
        rows.entry(ego).or_insert_with(|| vec![0.0; motifs.len()])[col] = value;
    }
    Ok((motifs, rows.into_iter().collect()))
}

/// Parse a `user_id,{spam|regular}` labels file.
pub fn read_binary_labels_csv(text: &str) -> Result<BTreeMap<String, bool>, PipelineError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line.starts_with("user_id")) {
            continue;
        }
        let Some((user, label)) = line.split_once(',') else {
            return Err(PipelineError::Stage {
                stage: "labels",
                message: format!("line {}: expected user_id,label", i + 1),
            });
        };
        let spam = match label.trim() {
            "spam" | "true" => true,
            "regular" | "false" => false,
            other => {
                return Err(PipelineError::Stage {
                    stage: "labels",
                    message: format!("line {}: unknown label `{other}`", i + 1),
                })
            }
        };
        out.insert(user.trim().to_string(), spam);
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
pub struct WindowBench {
    pub index: usize,
    pub runs: usize,
    pub full_mean_ms: f64,
    pub full_std_ms: f64,
    pub filtered_mean_ms: f64,
    pub filtered_std_ms: f64,
    pub speedup: f64,
    pub allowed_motifs: usize,
    pub full_motifs: usize,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub windows: Vec<WindowBench>,
}

impl BenchReport {
    pub fn mean_speedup(&self) -> f64 {
        if self.windows.is_empty() {
            return f64::NAN;
        }
        self.windows.iter().map(|w| w.speedup).sum::<f64>() / self.windows.len() as f64
    }
}

fn mean_std(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Compare per-ego counts of the allowed motifs between a full and a
/// filtered run. Exact equality is required.
fn check_count_agreement(
    full: &[MotifProfile],
    filtered: &[MotifProfile],
    filter: &MotifFilter,
) -> Result<(), PipelineError> {
    if full.len() != filtered.len() {
        return Err(PipelineError::Stage {
            stage: "bench",
            message: format!(
                "ego count mismatch: {} vs {}",
                full.len(),
                filtered.len()
            ),
        });
    }
    for (f, g) in full.iter().zip(filtered) {
        if f.ego != g.ego {
            return Err(PipelineError::Stage {
                stage: "bench",
                message: format!("ego order mismatch: {} vs {}", f.ego, g.ego),
            });
        }
        let allowed = filter.ids().expect("bench filter is restricted");
        for id in allowed {
            let a = f.counts.get(id).copied().unwrap_or(0);
            let b = g.counts.get(id).copied().unwrap_or(0);
            if a != b {
                return Err(PipelineError::Stage {
                    stage: "bench",
                    message: format!("count mismatch for ego {} motif {id}: {a} vs {b}", f.ego),
                });
            }
        }
        for id in g.counts.keys() {
            if !filter.allows(*id) {
                return Err(PipelineError::Stage {
                    stage: "bench",
                    message: format!("filtered run reported disallowed motif {id}"),
                });
            }
        }
    }
    Ok(())
}

/// Benchmark the profile-generation stage with and without the motif
/// filter on every window, interleaving repetitions. Counts of the allowed
/// motifs must agree exactly between the two runs on every repetition;
/// a mismatch aborts (correctness precedes speed).
pub fn benchmark_filtering(
    cfg: &PipelineConfig,
    filter: &MotifFilter,
    runs: usize,
) -> Result<BenchReport, PipelineError> {
    if !filter.is_restricted() {
        return Err(PipelineError::Stage {
            stage: "bench",
            message: "benchmark filter must be a restricted motif set".into(),
        });
    }
    with_pool(cfg.threads, || {
        let (clean, _) = read_input(cfg)?;
        let duration = cfg.window.duration_seconds();
        let start = cfg
            .window
            .start
            .or_else(|| clean.iter().map(|c| c.timestamp).min())
            .unwrap_or(0);
        let full_params = StageParams::new(
            &cfg.motif.sizes,
            cfg.motif.k,
            MotifFilter::all(),
            EnumerationMode::DiscardAtOutput,
            cfg.profile.epsilon,
        )?;
        let filtered_params = StageParams::new(
            &cfg.motif.sizes,
            cfg.motif.k,
            filter.clone(),
            cfg.enumeration_mode(),
            cfg.profile.epsilon,
        )?;

        let mut windows = Vec::new();
        for index in 0..cfg.window.count {
            let w_start = start + index as i64 * duration;
            let window = ingest::select_window(&clean, w_start, duration);
            let net = window_network(&window, &cfg.netgen);
            if net.user_count() == 0 {
                continue;
            }
            let mut full_times = Vec::with_capacity(runs);
            let mut filtered_times = Vec::with_capacity(runs);
            let mut full_motifs = 0;
            for _ in 0..runs {
                let t = Instant::now();
                let full = profile_stage(&net, &full_params)?;
                full_times.push(t.elapsed().as_secs_f64() * 1e3);
                let t = Instant::now();
                let filtered = profile_stage(&net, &filtered_params)?;
                filtered_times.push(t.elapsed().as_secs_f64() * 1e3);
                check_count_agreement(&full.profiles, &filtered.profiles, filter)?;
                full_motifs = full.matrix.n_motifs();
            }
            let (full_mean_ms, full_std_ms) = mean_std(&full_times);
            let (filtered_mean_ms, filtered_std_ms) = mean_std(&filtered_times);
            windows.push(WindowBench {
                index,
                runs,
                full_mean_ms,
                full_std_ms,
                filtered_mean_ms,
                filtered_std_ms,
                speedup: full_mean_ms / filtered_mean_ms,
                allowed_motifs: filter.ids().map(|s| s.len()).unwrap_or(0),
                full_motifs,
            });
        }
        Ok(BenchReport { windows })
    })
}

/// Run `f` on a dedicated thread pool when a thread count is configured.
pub fn with_pool<T>(
    threads: Option<usize>,
    f: impl FnOnce() -> Result<T, PipelineError> + Send,
) -> Result<T, PipelineError>
where
    T: Send,
{
    match threads {
        None => f(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| PipelineError::Stage {
                    stage: "threads",
                    message: e.to_string(),
                })?;
            pool.install(f)
        }
    }
}
