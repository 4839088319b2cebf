//! Synthetic comment-log generation: regular background activity plus
//! spam campaigns following one of three posting strategies.
//!
//! Background users post low-similarity comments on videos drawn from a
//! heavy-tailed popularity distribution, so some videos attract many
//! commenters. Campaign comments mix a per-campaign token template with
//! fresh random tokens; the template fraction controls how often the
//! near-duplicate edge threshold fires between campaign members.

use std::collections::BTreeMap;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::RawComment;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("infeasible spec: {0}")]
    Infeasible(String),
}

/// Posting strategy of a synthetic spam campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CampaignStrategy {
    /// A handful of accounts, each commenting on many videos.
    FewUsersManyVideos,
    /// Many accounts, each commenting on a few (mostly distinct) videos.
    ManyUsersFewVideos,
    /// Many accounts posting near-identical text to the same video(s).
    MassIdenticalSingleVideo,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CampaignSpec {
    pub strategy: CampaignStrategy,
    pub n_users: usize,
    pub videos_per_user: usize,
    /// Fraction of each comment's tokens drawn from the campaign template.
    pub text_similarity: f64,
    /// Probability that a campaign comment carries the spam hint.
    pub mark_spam_fraction: f64,
}

/// Inclusive integer range used for per-user and per-comment counts.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CountRange {
    pub min: usize,
    pub max: usize,
}

impl CountRange {
    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        rng.random_range(self.min..=self.max)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct BackgroundSpec {
    pub n_videos: usize,
    pub n_regular_users: usize,
    pub comments_per_user: CountRange,
    /// Size of the token vocabulary background comments draw from.
    pub vocabulary: usize,
    /// Exponent of the video popularity weights `(rank+1)^-exponent`.
    pub popularity_exponent: f64,
    pub tokens_per_comment: CountRange,
}

impl Default for BackgroundSpec {
    fn default() -> Self {
        Self {
            n_videos: 300,
            n_regular_users: 700,
            comments_per_user: CountRange { min: 2, max: 4 },
            vocabulary: 4000,
            popularity_exponent: 0.5,
            tokens_per_comment: CountRange { min: 6, max: 12 },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct WindowSpec {
    pub background: BackgroundSpec,
    pub campaigns: Vec<CampaignSpec>,
    pub window_seconds: Option<i64>,
}

impl WindowSpec {
    pub fn window_seconds(&self) -> i64 {
        self.window_seconds.unwrap_or(21_600)
    }
}

/// Ground-truth role of a generated user.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Regular,
    /// 1-based campaign index within the spec.
    Campaign(usize),
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Role::Regular => write!(f, "regular"),
            Role::Campaign(i) => write!(f, "campaign{i}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GeneratedWindow {
    pub comments: Vec<RawComment>,
    pub roles: BTreeMap<String, Role>,
}

fn token(vocab_index: usize) -> String {
    let mut s = String::with_capacity(6);
    s.push('w');
    let mut x = vocab_index;
    for _ in 0..5 {
        s.push((b'a' + (x % 26) as u8) as char);
        x /= 26;
    }
    s
}

struct VideoPool {
    weights: Vec<f64>,
    cumulative: Vec<f64>,
}

impl VideoPool {
    fn new(n: usize, exponent: f64) -> Self {
        let weights: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-exponent)).collect();
        let mut cumulative = Vec::with_capacity(n);
        let mut acc = 0.0;
        for &w in &weights {
            acc += w;
            cumulative.push(acc);
        }
        Self { weights, cumulative }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> usize {
        let total = *self.cumulative.last().unwrap();
        let x: f64 = rng.random_range(0.0..total);
        self.cumulative.partition_point(|&c| c <= x)
    }

    /// Weighted draw of `k` distinct videos.
    fn draw_distinct<R: Rng>(&self, k: usize, rng: &mut R) -> Vec<usize> {
        let mut weights = self.weights.clone();
        let mut out = Vec::with_capacity(k);
        for _ in 0..k {
            let total: f64 = weights.iter().sum();
            let x: f64 = rng.random_range(0.0..total);
            let mut acc = 0.0;
            let mut chosen = weights.len() - 1;
            for (i, &w) in weights.iter().enumerate() {
                acc += w;
                if x < acc {
                    chosen = i;
                    break;
                }
            }
            out.push(chosen);
            weights[chosen] = 0.0;
        }
        out
    }
}

/// Generate one window of raw comments plus ground-truth roles. Output is
/// byte-identical for a fixed spec and seed.
pub fn generate_window(spec: &WindowSpec, seed: u64) -> Result<GeneratedWindow, SynthError> {
    let bg = &spec.background;
    if bg.n_videos == 0 {
        return Err(SynthError::Infeasible("no videos".into()));
    }
    if bg.vocabulary == 0 {
        return Err(SynthError::Infeasible("empty vocabulary".into()));
    }
    if bg.comments_per_user.min > bg.comments_per_user.max
        || bg.tokens_per_comment.min > bg.tokens_per_comment.max
        || bg.tokens_per_comment.min == 0
    {
        return Err(SynthError::Infeasible("bad count range".into()));
    }
    for (i, c) in spec.campaigns.iter().enumerate() {
        if c.videos_per_user > bg.n_videos {
            return Err(SynthError::Infeasible(format!(
                "campaign {} wants {} videos per user, only {} exist",
                i + 1,
                c.videos_per_user,
                bg.n_videos
            )));
        }
        if c.n_users == 0 || c.videos_per_user == 0 {
            return Err(SynthError::Infeasible(format!(
                "campaign {} must have users and videos",
                i + 1
            )));
        }
        if !(0.0..=1.0).contains(&c.text_similarity) || !(0.0..=1.0).contains(&c.mark_spam_fraction)
        {
            return Err(SynthError::Infeasible(format!(
                "campaign {} fractions must lie in [0, 1]",
                i + 1
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let window_seconds = spec.window_seconds().max(1);
    let pool = VideoPool::new(bg.n_videos, bg.popularity_exponent);
    let video_id = |i: usize| format!("v{i:04}");

    let mut comments: Vec<RawComment> = Vec::new();
    let mut roles: BTreeMap<String, Role> = BTreeMap::new();
    let mut next_user = 0usize;
    let mut next_comment = 0usize;

    let push = |comments: &mut Vec<RawComment>,
                    next_comment: &mut usize,
                    rng: &mut ChaCha8Rng,
                    user: &str,
                    video: usize,
                    tokens: Vec<String>,
                    spam_hint: bool| {
        let timestamp = rng.random_range(0..window_seconds);
        comments.push(RawComment {
            comment_id: format!("c{:06}", *next_comment),
            user_id: user.to_string(),
            video_id: video_id(video),
            timestamp,
            text: tokens.join(" "),
            spam_hint,
        });
        *next_comment += 1;
    };

    // Background: low-similarity comments on popularity-weighted videos.
    for _ in 0..bg.n_regular_users {
        let user = format!("u{next_user:04}");
        next_user += 1;
        roles.insert(user.clone(), Role::Regular);
        let n_comments = bg.comments_per_user.sample(&mut rng);
        for _ in 0..n_comments {
            let video = pool.draw(&mut rng);
            let n_tokens = bg.tokens_per_comment.sample(&mut rng);
            let tokens: Vec<String> = (0..n_tokens)
                .map(|_| token(rng.random_range(0..bg.vocabulary)))
                .collect();
            push(&mut comments, &mut next_comment, &mut rng, &user, video, tokens, false);
        }
    }

    // Campaigns.
    for (idx, campaign) in spec.campaigns.iter().enumerate() {
        let role = Role::Campaign(idx + 1);
        let template: Vec<String> = (0..bg.tokens_per_comment.max)
            .map(|_| token(rng.random_range(0..bg.vocabulary)))
            .collect();
        let campaign_text = |rng: &mut ChaCha8Rng| -> Vec<String> {
            let n_tokens = bg.tokens_per_comment.sample(rng);
            let shared = ((n_tokens as f64 * campaign.text_similarity).round() as usize)
                .min(template.len())
                .min(n_tokens);
            let mut tokens: Vec<String> = template[..shared].to_vec();
            for _ in shared..n_tokens {
                tokens.push(token(rng.random_range(0..bg.vocabulary)));
            }
            tokens
        };

        // Targets shared by the whole campaign, for the single-video case.
        let shared_targets = pool.draw_distinct(campaign.videos_per_user, &mut rng);
        // Uniform pool handed out sequentially so mass campaigns spread
        // over mostly distinct videos.
        let mut uniform_pool: Vec<usize> = (0..bg.n_videos).collect();
        for i in (1..uniform_pool.len()).rev() {
            let j = rng.random_range(0..=i);
            uniform_pool.swap(i, j);
        }
        let mut pool_cursor = 0usize;

        for _ in 0..campaign.n_users {
            let user = format!("u{next_user:04}");
            next_user += 1;
            roles.insert(user.clone(), role);
            let targets: Vec<usize> = match campaign.strategy {
                CampaignStrategy::FewUsersManyVideos => {
                    pool.draw_distinct(campaign.videos_per_user, &mut rng)
                }
                CampaignStrategy::ManyUsersFewVideos => {
                    let k = rng.random_range(1..=campaign.videos_per_user);
                    (0..k)
                        .map(|_| {
                            if pool_cursor >= uniform_pool.len() {
                                pool_cursor = 0;
                            }
                            let v = uniform_pool[pool_cursor];
                            pool_cursor += 1;
                            v
                        })
                        .collect()
                }
                CampaignStrategy::MassIdenticalSingleVideo => shared_targets.clone(),
            };
            for video in targets {
                let tokens = campaign_text(&mut rng);
                let hint = rng.random_bool(campaign.mark_spam_fraction);
                push(&mut comments, &mut next_comment, &mut rng, &user, video, tokens, hint);
            }
        }
    }

    Ok(GeneratedWindow { comments, roles })
}

/// Serialize comments as JSON lines; the inverse of comment parsing.
pub fn emit_jsonl<W: Write>(comments: &[RawComment], mut w: W) -> io::Result<()> {
    for c in comments {
        serde_json::to_writer(&mut w, c)?;
        writeln!(w)?;
    }
    Ok(())
}

/// Ground-truth roles as `user_id,role` CSV.
pub fn write_truth_csv<W: Write>(roles: &BTreeMap<String, Role>, mut w: W) -> io::Result<()> {
    writeln!(w, "user_id,role")?;
    for (user, role) in roles {
        writeln!(w, "{user},{role}")?;
    }
    Ok(())
}

/// Parse a `user_id,role` CSV written by [`write_truth_csv`].
pub fn read_truth_csv(text: &str) -> BTreeMap<String, Role> {
    let mut roles = BTreeMap::new();
    for line in text.lines().skip(1) {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some((user, role)) = line.split_once(',') {
            let role = match role.strip_prefix("campaign") {
                Some(n) => n.parse().map(Role::Campaign).unwrap_or(Role::Regular),
                None => Role::Regular,
            };
            roles.insert(user.to_string(), role);
        }
    }
    roles
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{self, InputFormat};
    use crate::netgen::{build_network, NetgenConfig, NodeColor};

    fn campaign(strategy: CampaignStrategy, n_users: usize, videos: usize) -> CampaignSpec {
        CampaignSpec {
            strategy,
            n_users,
            videos_per_user: videos,
            text_similarity: 0.95,
            mark_spam_fraction: 0.5,
        }
    }

    fn small_spec(campaigns: Vec<CampaignSpec>) -> WindowSpec {
        WindowSpec {
            background: BackgroundSpec {
                n_videos: 60,
                n_regular_users: 80,
                ..BackgroundSpec::default()
            },
            campaigns,
            window_seconds: None,
        }
    }

    #[test]
    fn fixed_seed_is_byte_identical() {
        let spec = small_spec(vec![campaign(CampaignStrategy::FewUsersManyVideos, 3, 10)]);
        let a = generate_window(&spec, 99).unwrap();
        let b = generate_window(&spec, 99).unwrap();
        let mut buf_a = Vec::new();
        let mut buf_b = Vec::new();
        emit_jsonl(&a.comments, &mut buf_a).unwrap();
        emit_jsonl(&b.comments, &mut buf_b).unwrap();
        assert_eq!(buf_a, buf_b);
        let c = generate_window(&spec, 100).unwrap();
        let mut buf_c = Vec::new();
        emit_jsonl(&c.comments, &mut buf_c).unwrap();
        assert_ne!(buf_a, buf_c);
    }

    #[test]
    fn zero_campaigns_all_regular() {
        let window = generate_window(&small_spec(vec![]), 1).unwrap();
        assert!(window.roles.values().all(|&r| r == Role::Regular));
        assert!(window.comments.iter().all(|c| !c.spam_hint));
    }

    #[test]
    fn infeasible_spec_errors() {
        let spec = small_spec(vec![campaign(CampaignStrategy::FewUsersManyVideos, 3, 61)]);
        assert!(matches!(
            generate_window(&spec, 1),
            Err(SynthError::Infeasible(_))
        ));
    }

    #[test]
    fn emit_parse_round_trip() {
        let spec = small_spec(vec![campaign(CampaignStrategy::ManyUsersFewVideos, 5, 2)]);
        let window = generate_window(&spec, 5).unwrap();
        let mut buf = Vec::new();
        emit_jsonl(&window.comments, &mut buf).unwrap();
        assert_eq!(buf.iter().filter(|&&b| b == b'\n').count(), window.comments.len());
        let parsed = ingest::parse_comments_strict(&buf[..], InputFormat::Jsonl).unwrap();
        assert_eq!(parsed, window.comments);

        let mut empty = Vec::new();
        emit_jsonl(&[], &mut empty).unwrap();
        assert!(empty.is_empty());
    }

    fn pipeline_network(window: &GeneratedWindow) -> crate::netgen::CommentNetwork {
        let cfg = ingest::IngestConfig::default();
        let clean: Vec<_> = window
            .comments
            .iter()
            .filter_map(|c| ingest::normalize(c, &cfg))
            .collect();
        build_network(&clean, &NetgenConfig::default())
    }

    #[test]
    fn few_users_many_videos_have_high_video_degree() {
        let spec = small_spec(vec![campaign(CampaignStrategy::FewUsersManyVideos, 5, 30)]);
        let window = generate_window(&spec, 11).unwrap();
        let net = pipeline_network(&window);
        for (user, role) in &window.roles {
            if *role == Role::Campaign(1) {
                let u = net.user_index(user).expect("campaign user in network");
                let video_degree = net
                    .neighbors(u)
                    .filter(|&n| net.color(n) == NodeColor::Video)
                    .count();
                assert!(video_degree >= 30, "{user} has {video_degree} videos");
            }
        }
    }

    #[test]
    fn mass_identical_users_form_near_clique() {
        let spec = small_spec(vec![campaign(
            CampaignStrategy::MassIdenticalSingleVideo,
            60,
            1,
        )]);
        let window = generate_window(&spec, 13).unwrap();
        let net = pipeline_network(&window);
        for (user, role) in &window.roles {
            if *role == Role::Campaign(1) {
                let u = net.user_index(user).expect("campaign user in network");
                let uu_degree = net
                    .neighbors(u)
                    .filter(|&n| net.color(n) == NodeColor::User)
                    .count();
                assert!(uu_degree >= 50, "{user} has uu degree {uu_degree}");
            }
        }
    }

    #[test]
    fn campaign_users_hit_strategy_motifs() {
        // Mass-identical campaign users sit in all-user triangles; every
        // one of them must count that motif through the full pipeline.
        use crate::motif::{enumerate_motifs, extract_ego_network, MotifFilter};
        use crate::netgen::prune_single_video_users;
        let spec = small_spec(vec![campaign(
            CampaignStrategy::MassIdenticalSingleVideo,
            30,
            1,
        )]);
        let window = generate_window(&spec, 21).unwrap();
        let net = prune_single_video_users(&pipeline_network(&window));
        let triangle: crate::motif::MotifId = "s3:c000:a111".parse().unwrap();
        for (user, role) in &window.roles {
            if *role != Role::Campaign(1) {
                continue;
            }
            let ego = extract_ego_network(&net, user, 2).unwrap();
            let profile = enumerate_motifs(&ego, &[3], &MotifFilter::all()).unwrap();
            assert!(
                profile.counts.get(&triangle).copied().unwrap_or(0) > 0,
                "{user} has no all-user triangle"
            );
        }
    }

    #[test]
    fn background_has_no_dense_user_cliques() {
        let window = generate_window(&small_spec(vec![]), 17).unwrap();
        let net = pipeline_network(&window);
        let max_uu = net
            .users()
            .map(|u| {
                net.neighbors(u)
                    .filter(|&n| net.color(n) == NodeColor::User)
                    .count()
            })
            .max()
            .unwrap_or(0);
        assert!(max_uu < 5, "background uu degree {max_uu}");
    }

    #[test]
    fn truth_csv_round_trips() {
        let spec = small_spec(vec![campaign(CampaignStrategy::ManyUsersFewVideos, 4, 2)]);
        let window = generate_window(&spec, 3).unwrap();
        let mut buf = Vec::new();
        write_truth_csv(&window.roles, &mut buf).unwrap();
        let parsed = read_truth_csv(std::str::from_utf8(&buf).unwrap());
        assert_eq!(parsed, window.roles);
    }
}
