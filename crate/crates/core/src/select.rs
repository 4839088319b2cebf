//! Class-ratio sampling and information-gain motif ranking.
//!
//! Campaign windows contain far fewer spam users than regular users, so
//! training samples are drawn at a fixed regular:spam ratio. Each motif is
//! then scored by the entropy reduction of the best single threshold split
//! of its nrp column, in bits, and ranked.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::motif::{MotifError, MotifFilter, MotifId};
use crate::num::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Regular,
    Spam,
}

#[derive(Debug, Error)]
pub enum SelectError {
    #[error("population has {have} {class} rows, need {need}")]
    InsufficientPopulation {
        class: &'static str,
        need: usize,
        have: usize,
    },
    #[error("ratio denominators must be positive")]
    BadRatio,
    #[error("sample is empty")]
    EmptySample,
    #[error("sample contains a single class")]
    SingleClass,
    #[error("motif {0} not present in the sample")]
    UnknownMotif(MotifId),
    #[error("top-k must be at least 1")]
    BadTopK,
    #[error("override id {0} absent from the ranking")]
    OverrideNotRanked(MotifId),
    #[error(transparent)]
    Motif(#[from] MotifError),
}

/// One labeled ego: its nrp vector over the sample's motif columns.
#[derive(Debug, Clone)]
pub struct LabeledRow<T> {
    pub ego: String,
    pub values: Vec<T>,
    pub label: Label,
}

/// A class-balanced sample drawn without replacement.
#[derive(Debug, Clone)]
pub struct LabeledSample<T> {
    pub motifs: Vec<MotifId>,
    pub rows: Vec<LabeledRow<T>>,
    /// Requested regular:spam ratio.
    pub ratio: (u32, u32),
    pub seed: u64,
}

impl<T> LabeledSample<T> {
    pub fn count(&self, label: Label) -> usize {
        self.rows.iter().filter(|r| r.label == label).count()
    }
}

/// Draw `n_spam` spam rows and `n_spam * ratio.0 / ratio.1` regular rows
/// uniformly without replacement (regular count rounded to nearest when the
/// ratio is not integral). Row order inside the sample and the draw itself
/// are deterministic for a fixed seed, independent of population order.
pub fn build_sample<T: Real>(
    population: &[LabeledRow<T>],
    motifs: &[MotifId],
    ratio: (u32, u32),
    n_spam: usize,
    seed: u64,
) -> Result<LabeledSample<T>, SelectError> {
    if ratio.0 == 0 || ratio.1 == 0 {
        return Err(SelectError::BadRatio);
    }
    let n_regular =
        ((n_spam as u64 * ratio.0 as u64) as f64 / ratio.1 as f64).round() as usize;

    let mut spam_idx: Vec<usize> = Vec::new();
    let mut regular_idx: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by(|&a, &b| population[a].ego.cmp(&population[b].ego));
    for i in order {
        match population[i].label {
            Label::Spam => spam_idx.push(i),
            Label::Regular => regular_idx.push(i),
        }
    }
    if spam_idx.len() < n_spam {
        return Err(SelectError::InsufficientPopulation {
            class: "spam",
            need: n_spam,
            have: spam_idx.len(),
        });
    }
    if regular_idx.len() < n_regular {
        return Err(SelectError::InsufficientPopulation {
            class: "regular",
            need: n_regular,
            have: regular_idx.len(),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample_without_replacement(&spam_idx, n_spam, &mut rng);
    picked.extend(sample_without_replacement(&regular_idx, n_regular, &mut rng));
    picked.sort_by(|&a, &b| population[a].ego.cmp(&population[b].ego));

    Ok(LabeledSample {
        motifs: motifs.to_vec(),
        rows: picked.iter().map(|&i| population[i].clone()).collect(),
        ratio,
        seed,
    })
}

fn sample_without_replacement<R: Rng>(pool: &[usize], k: usize, rng: &mut R) -> Vec<usize> {
    let mut pool = pool.to_vec();
    for i in 0..k {
        let j = i + rng.random_range(0..pool.len() - i);
        pool.swap(i, j);
    }
    pool.truncate(k);
    pool
}

fn entropy2<T: Real>(a: usize, b: usize) -> T {
    let total = a + b;
    if total == 0 {
        return T::zero();
    }
    let term = |count: usize| {
        if count == 0 {
            T::zero()
        } else {
            let p = T::from_usize(count).unwrap() / T::from_usize(total).unwrap();
            -p * p.log2()
        }
    };
    term(a) + term(b)
}

fn column_gain<T: Real>(values: &[T], labels: &[Label]) -> T {
    let n = values.len();
    let spam_total = labels.iter().filter(|&&l| l == Label::Spam).count();
    let regular_total = n - spam_total;
    let base: T = entropy2(spam_total, regular_total);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());

    let n_t = T::from_usize(n).unwrap();
    let mut best = base;
    let mut spam_left = 0usize;
    for (i, &idx) in order.iter().enumerate() {
        if labels[idx] == Label::Spam {
            spam_left += 1;
        }
        let last = i + 1 == n;
        // Candidate thresholds sit between consecutive distinct values.
        if last || values[order[i + 1]] == values[idx] {
            if last {
                break;
            }
            continue;
        }
        let left = i + 1;
        let right = n - left;
        let left_h: T = entropy2(spam_left, left - spam_left);
        let right_h: T = entropy2(spam_total - spam_left, right - (spam_total - spam_left));
        let weighted = (T::from_usize(left).unwrap() * left_h
            + T::from_usize(right).unwrap() * right_h)
            / n_t;
        if weighted < best {
            best = weighted;
        }
    }
    base - best
}

/// Information gain, in bits, of the best binary threshold split of the
/// motif's nrp column against the sample labels.
pub fn information_gain<T: Real>(
    sample: &LabeledSample<T>,
    motif: MotifId,
) -> Result<T, SelectError> {
    let col = sample
        .motifs
        .iter()
        .position(|&m| m == motif)
        .ok_or(SelectError::UnknownMotif(motif))?;
    check_two_classes(sample)?;
    let values: Vec<T> = sample.rows.iter().map(|r| r.values[col]).collect();
    let labels: Vec<Label> = sample.rows.iter().map(|r| r.label).collect();
    Ok(column_gain(&values, &labels))
}

fn check_two_classes<T>(sample: &LabeledSample<T>) -> Result<(), SelectError> {
    if sample.rows.is_empty() {
        return Err(SelectError::EmptySample);
    }
    let first = sample.rows[0].label;
    if sample.rows.iter().all(|r| r.label == first) {
        return Err(SelectError::SingleClass);
    }
    Ok(())
}

/// Motifs ordered by descending information gain; ties break on motif id.
#[derive(Debug, Clone)]
pub struct RankedMotifs<T> {
    pub entries: Vec<(MotifId, T)>,
}

impl<T: Real> RankedMotifs<T> {
    pub fn gain(&self, id: MotifId) -> Option<T> {
        self.entries.iter().find(|(m, _)| *m == id).map(|&(_, g)| g)
    }
}

/// Score every motif column of the sample and rank.
pub fn rank_motifs<T: Real>(sample: &LabeledSample<T>) -> Result<RankedMotifs<T>, SelectError> {
    check_two_classes(sample)?;
    let labels: Vec<Label> = sample.rows.iter().map(|r| r.label).collect();
    let mut entries: Vec<(MotifId, T)> = sample
        .motifs
        .iter()
        .enumerate()
        .map(|(col, &id)| {
            let values: Vec<T> = sample.rows.iter().map(|r| r.values[col]).collect();
            (id, column_gain(&values, &labels))
        })
        .collect();
    entries.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap()
            .then_with(|| a.0.cmp(&b.0))
    });
    Ok(RankedMotifs { entries })
}

/// Keep the top `k` ranked motifs, or exactly the ids given as a manual
/// override (each of which must appear in the ranking).
pub fn select_top<T: Real>(
    ranked: &RankedMotifs<T>,
    k: usize,
    manual_override: Option<&[MotifId]>,
) -> Result<MotifFilter, SelectError> {
    if k == 0 {
        return Err(SelectError::BadTopK);
    }
    let ids: Vec<MotifId> = match manual_override {
        Some(ids) => {
            for id in ids {
                if ranked.gain(*id).is_none() {
                    return Err(SelectError::OverrideNotRanked(*id));
                }
            }
            ids.to_vec()
        }
        None => ranked.entries.iter().take(k).map(|&(id, _)| id).collect(),
    };
    Ok(MotifFilter::subset(ids)?)
}
