//! Ratio profiles and PCA spatialization of per-ego motif counts.
//!
//! For motif i with count `nmp_i` in an ego's profile and column mean
//! `mean_i` over all egos in the window, the ratio profile entry is
//!
//! ```text
//! rp_i = (nmp_i - mean_i) / (nmp_i + mean_i + epsilon)
//! ```
//!
//! with a small integer epsilon keeping rare motifs from looking
//! misleadingly large. Each ego's rp vector is then scaled to unit
//! Euclidean norm (nrp); zero vectors stay zero. Profiles are spatialized
//! by projecting the nrp matrix onto its first two principal components.

mod pca;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::motif::{MotifId, MotifProfile};
use crate::num::Real;

pub use pca::symmetric_eigen;

pub const DEFAULT_EPSILON: u32 = 4;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("profile matrix has no egos")]
    EmptyMatrix,
    #[error("epsilon must be a positive integer, got {0}")]
    InvalidEpsilon(u32),
    #[error("PCA needs at least 2 egos, got {0}")]
    TooFewEgos(usize),
    #[error("PCA needs at least 2 motifs, got {0}")]
    TooFewMotifs(usize),
    #[error("motif {0} not present in the profile matrix")]
    UnknownMotif(MotifId),
}

/// Dense egos-by-motifs count matrix. Columns are the union of motifs
/// observed across all egos in the window, in sorted id order; missing
/// counts are zero. Rows are sorted by ego id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileMatrix {
    pub egos: Vec<String>,
    pub motifs: Vec<MotifId>,
    values: Vec<u64>,
}

impl ProfileMatrix {
    pub fn from_profiles(profiles: &[MotifProfile]) -> Self {
        let mut order: Vec<usize> = (0..profiles.len()).collect();
        order.sort_by(|&a, &b| profiles[a].ego.cmp(&profiles[b].ego));
        let egos: Vec<String> = order.iter().map(|&i| profiles[i].ego.clone()).collect();
        let motif_set: BTreeSet<MotifId> = profiles
            .iter()
            .flat_map(|p| p.counts.keys().copied())
            .collect();
        let motifs: Vec<MotifId> = motif_set.into_iter().collect();
        let mut values = vec![0u64; egos.len() * motifs.len()];
        for (row, &i) in order.iter().enumerate() {
            for (id, &count) in &profiles[i].counts {
                let col = motifs.binary_search(id).expect("column from union");
                values[row * motifs.len() + col] = count;
            }
        }
        Self { egos, motifs, values }
    }

    pub fn n_egos(&self) -> usize {
        self.egos.len()
    }

    pub fn n_motifs(&self) -> usize {
        self.motifs.len()
    }

    pub fn value(&self, ego: usize, motif: usize) -> u64 {
        self.values[ego * self.motifs.len() + motif]
    }

    pub fn row(&self, ego: usize) -> &[u64] {
        &self.values[ego * self.motifs.len()..(ego + 1) * self.motifs.len()]
    }

    pub fn motif_index(&self, id: MotifId) -> Option<usize> {
        self.motifs.binary_search(&id).ok()
    }

    /// Matrix restricted to the given motif columns (those present).
    pub fn restrict_columns(&self, keep: &BTreeSet<MotifId>) -> ProfileMatrix {
        let cols: Vec<usize> = self
            .motifs
            .iter()
            .enumerate()
            .filter(|(_, id)| keep.contains(id))
            .map(|(i, _)| i)
            .collect();
        let motifs: Vec<MotifId> = cols.iter().map(|&c| self.motifs[c]).collect();
        let mut values = Vec::with_capacity(self.egos.len() * cols.len());
        for row in 0..self.egos.len() {
            for &c in &cols {
                values.push(self.value(row, c));
            }
        }
        ProfileMatrix {
            egos: self.egos.clone(),
            motifs,
            values,
        }
    }
}

/// Ratio profiles and their unit-normalized form for every ego of a
/// window, row-aligned with the source matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioProfiles<T> {
    pub egos: Vec<String>,
    pub motifs: Vec<MotifId>,
    pub epsilon: u32,
    rp: Vec<T>,
    nrp: Vec<T>,
}

impl<T: Real> RatioProfiles<T> {
    pub fn rp_row(&self, ego: usize) -> &[T] {
        &self.rp[ego * self.motifs.len()..(ego + 1) * self.motifs.len()]
    }

    pub fn nrp_row(&self, ego: usize) -> &[T] {
        &self.nrp[ego * self.motifs.len()..(ego + 1) * self.motifs.len()]
    }
}

/// Compute ratio profiles against the column means over all egos in the
/// matrix. Requires at least one ego and a positive integer epsilon.
pub fn ratio_profile<T: Real>(
    m: &ProfileMatrix,
    epsilon: u32,
) -> Result<RatioProfiles<T>, ProfileError> {
    if m.n_egos() == 0 {
        return Err(ProfileError::EmptyMatrix);
    }
    if epsilon == 0 {
        return Err(ProfileError::InvalidEpsilon(epsilon));
    }
    let d = m.n_motifs();
    let n = m.n_egos();
    let eps = T::from_u32(epsilon).unwrap();
    let n_t = T::from_usize(n).unwrap();
    let mut means = vec![T::zero(); d];
    for row in 0..n {
        for (col, mean) in means.iter_mut().enumerate() {
            *mean += T::from_u64(m.value(row, col)).unwrap();
        }
    }
    for mean in means.iter_mut() {
        *mean /= n_t;
    }
    let mut rp = vec![T::zero(); n * d];
    for row in 0..n {
        for col in 0..d {
            let count = T::from_u64(m.value(row, col)).unwrap();
            rp[row * d + col] = (count - means[col]) / (count + means[col] + eps);
        }
    }
    let mut nrp = vec![T::zero(); n * d];
    for row in 0..n {
        let normalized = normalize_profile(&rp[row * d..(row + 1) * d]);
        nrp[row * d..(row + 1) * d].copy_from_slice(&normalized);
    }
    Ok(RatioProfiles {
        egos: m.egos.clone(),
        motifs: m.motifs.clone(),
        epsilon,
        rp,
        nrp,
    })
}

/// Scale a ratio vector to unit Euclidean norm; the zero vector maps to
/// itself.
pub fn normalize_profile<T: Real>(rp: &[T]) -> Vec<T> {
    let norm_sq: T = rp.iter().map(|&x| x * x).sum();
    if norm_sq == T::zero() {
        return rp.to_vec();
    }
    let norm = norm_sq.sqrt();
    rp.iter().map(|&x| x / norm).collect()
}

/// Two-component PCA of the nrp matrix.
#[derive(Debug, Clone)]
pub struct Spatialization<T> {
    pub egos: Vec<String>,
    pub motifs: Vec<MotifId>,
    /// One (pc1, pc2) pair per ego, aligned with `egos`.
    pub coords: Vec<[T; 2]>,
    /// Fraction of total variance captured by each component.
    pub explained_variance: [T; 2],
    /// Per-motif loadings of the two components, aligned with `motifs`.
    pub loadings: Vec<[T; 2]>,
}

/// Project egos onto the first two principal components of their nrp
/// vectors: mean-center columns, eigendecompose the covariance matrix,
/// and fix each component's sign so its largest-magnitude loading is
/// positive.
pub fn pca_2d<T: Real>(profiles: &RatioProfiles<T>) -> Result<Spatialization<T>, ProfileError> {
    let n = profiles.egos.len();
    let d = profiles.motifs.len();
    if n < 2 {
        return Err(ProfileError::TooFewEgos(n));
    }
    if d < 2 {
        return Err(ProfileError::TooFewMotifs(d));
    }

    let n_t = T::from_usize(n).unwrap();
    let mut means = vec![T::zero(); d];
    for row in 0..n {
        for (col, mean) in means.iter_mut().enumerate() {
            *mean += profiles.nrp_row(row)[col];
        }
    }
    for mean in means.iter_mut() {
        *mean /= n_t;
    }
    let mut centered = vec![T::zero(); n * d];
    for row in 0..n {
        let src = profiles.nrp_row(row);
        for col in 0..d {
            centered[row * d + col] = src[col] - means[col];
        }
    }

    let denom = T::from_usize(n - 1).unwrap();
    let mut cov = vec![T::zero(); d * d];
    for row in 0..n {
        let r = &centered[row * d..(row + 1) * d];
        for i in 0..d {
            let ri = r[i];
            if ri == T::zero() {
                continue;
            }
            for j in i..d {
                cov[i * d + j] += ri * r[j];
            }
        }
    }
    for i in 0..d {
        for j in i..d {
            let val = cov[i * d + j] / denom;
            cov[i * d + j] = val;
            cov[j * d + i] = val;
        }
    }

    let total: T = (0..d).map(|i| cov[i * d + i]).sum();
    let (eigenvalues, eigenvectors) = symmetric_eigen(cov, d);

    let mut loadings = vec![[T::zero(); 2]; d];
    let mut explained = [T::zero(); 2];
    for comp in 0..2 {
        let col = &eigenvectors[comp * d..(comp + 1) * d];
        // Reflection is ambiguous: orient so the largest-magnitude loading
        // is positive, ties resolved by the first such index.
        let mut lead = 0;
        for (i, &x) in col.iter().enumerate() {
            if x.abs() > col[lead].abs() {
                lead = i;
            }
        }
        let flip = col[lead] < T::zero();
        for (i, &x) in col.iter().enumerate() {
            loadings[i][comp] = if flip { -x } else { x };
        }
        let lambda = eigenvalues[comp].max(T::zero());
        explained[comp] = if total > T::zero() {
            lambda / total
        } else {
            T::zero()
        };
    }

    let mut coords = vec![[T::zero(); 2]; n];
    for row in 0..n {
        let r = &centered[row * d..(row + 1) * d];
        for comp in 0..2 {
            let mut acc = T::zero();
            for col in 0..d {
                acc += r[col] * loadings[col][comp];
            }
            coords[row][comp] = acc;
        }
    }

    Ok(Spatialization {
        egos: profiles.egos.clone(),
        motifs: profiles.motifs.clone(),
        coords,
        explained_variance: explained,
        loadings,
    })
}

/// Per-ego coordinates of two chosen motifs in the full nrp (computed over
/// all motif columns, then projected onto the pair).
pub fn two_motif_plot<T: Real>(
    m: &ProfileMatrix,
    a: MotifId,
    b: MotifId,
    epsilon: u32,
) -> Result<Vec<(String, [T; 2])>, ProfileError> {
    let ca = m.motif_index(a).ok_or(ProfileError::UnknownMotif(a))?;
    let cb = m.motif_index(b).ok_or(ProfileError::UnknownMotif(b))?;
    let profiles = ratio_profile::<T>(m, epsilon)?;
    Ok(m.egos
        .iter()
        .enumerate()
        .map(|(row, ego)| {
            let nrp = profiles.nrp_row(row);
            (ego.clone(), [nrp[ca], nrp[cb]])
        })
        .collect())
}
