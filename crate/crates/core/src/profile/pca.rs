//! Dense symmetric eigendecomposition via cyclic Jacobi rotations.
//!
//! Profile covariance matrices stay small (one row/column per motif, a
//! couple hundred at most), so the exact Jacobi sweep is both fast and
//! deterministic.

use crate::num::Real;

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a symmetric matrix given in row-major order.
/// Returns eigenvalues in descending order with matching eigenvectors
/// (column-major: eigenvector `k` occupies `vectors[k*d..(k+1)*d]`).
pub fn symmetric_eigen<T: Real>(mut a: Vec<T>, d: usize) -> (Vec<T>, Vec<T>) {
    assert_eq!(a.len(), d * d);
    let mut v = vec![T::zero(); d * d];
    for i in 0..d {
        v[i * d + i] = T::one();
    }
    if d > 1 {
        let scale: T = a.iter().map(|x| x.abs()).sum();
        let tiny = scale * T::epsilon();
        for _ in 0..MAX_SWEEPS {
            let mut off = T::zero();
            for p in 0..d {
                for q in p + 1..d {
                    off += a[p * d + q].abs();
                }
            }
            if off <= tiny {
                break;
            }
            for p in 0..d - 1 {
                for q in p + 1..d {
                    rotate(&mut a, &mut v, d, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        a[j * d + j]
            .partial_cmp(&a[i * d + i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigenvalues: Vec<T> = order.iter().map(|&i| a[i * d + i]).collect();
    let mut vectors = vec![T::zero(); d * d];
    for (k, &i) in order.iter().enumerate() {
        for r in 0..d {
            vectors[k * d + r] = v[r * d + i];
        }
    }
    (eigenvalues, vectors)
}

fn rotate<T: Real>(a: &mut [T], v: &mut [T], d: usize, p: usize, q: usize) {
    let apq = a[p * d + q];
    if apq == T::zero() {
        return;
    }
    let theta = (a[q * d + q] - a[p * d + p]) / (apq + apq);
    let t = {
        let abs = theta.abs() + (theta * theta + T::one()).sqrt();
        let t = T::one() / abs;
        if theta < T::zero() {
            -t
        } else {
            t
        }
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    let tau = s / (T::one() + c);

    let app = a[p * d + p];
    let aqq = a[q * d + q];
    a[p * d + p] = app - t * apq;
    a[q * d + q] = aqq + t * apq;
    a[p * d + q] = T::zero();
    a[q * d + p] = T::zero();
    for r in 0..d {
        if r == p || r == q {
            continue;
        }
        let arp = a[r * d + p];
        let arq = a[r * d + q];
        let new_rp = arp - s * (arq + tau * arp);
        let new_rq = arq + s * (arp - tau * arq);
        a[r * d + p] = new_rp;
        a[p * d + r] = new_rp;
        a[r * d + q] = new_rq;
        a[q * d + r] = new_rq;
    }
    for r in 0..d {
        let vrp = v[r * d + p];
        let vrq = v[r * d + q];
        v[r * d + p] = c * vrp - s * vrq;
        v[r * d + q] = s * vrp + c * vrq;
    }
}
