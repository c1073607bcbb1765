//! Invariant vectors of `m` copies of the SU(M) fundamental, by brute force.
//!
//! Invariants have zero weight, so only product states carrying every color
//! `m / M` times are searched. On that subspace the invariants are the common
//! null space of `E_ab` for `a != b`, i.e. the kernel of `sum_{a!=b} E_ba E_ab`.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenvalues below this count as kernel.
pub const KERNEL_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct InvariantBasis {
    pub rank: u32,
    pub count: u32,
    /// Product dimension `M^m`.
    pub dim: usize,
    /// Dimension of the zero-weight subspace that was searched.
    pub weight_zero_dim: usize,
    /// Orthonormal invariant vectors, embedded in the product space.
    pub vectors: Vec<Vec<f64>>,
}

fn digits(mut idx: usize, rank: usize, count: usize) -> Vec<usize> {
    let mut out = vec![0; count];
    for slot in out.iter_mut().rev() {
        *slot = idx % rank;
        idx /= rank;
    }
    out
}

fn encode(ds: &[usize], rank: usize) -> usize {
    ds.iter().fold(0, |acc, &d| acc * rank + d)
}

/// `E_ab` summed over constituents, applied to a product basis index.
/// Returns the images (with unit coefficients) of the state.
fn apply_e(ds: &[usize], a: usize, b: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..ds.len()).filter(move |&i| ds[i] == b).map(move |i| {
        let mut out = ds.to_vec();
        out[i] = a;
        out
    })
}

pub fn su_m_invariant_basis(rank: u32, count: u32, cap: u64) -> Result<InvariantBasis> {
    if rank < 2 {
        return Err(Error::InvalidArgument("rank must be at least 2".into()));
    }
    let dim = u64::from(rank).checked_pow(count).unwrap_or(u64::MAX);
    if dim > cap {
        return Err(Error::DimensionCapExceeded { dim, cap });
    }
    let (r, m, dim) = (rank as usize, count as usize, dim as usize);
    if m % r != 0 {
        return Ok(InvariantBasis {
            rank,
            count,
            dim,
            weight_zero_dim: 0,
            vectors: Vec::new(),
        });
    }
    let per_color = m / r;
    let zero_weight: Vec<usize> = (0..dim)
        .filter(|&idx| {
            let mut hist = vec![0usize; r];
            for d in digits(idx, r, m) {
                hist[d] += 1;
            }
            hist.iter().all(|&h| h == per_color)
        })
        .collect();
    let pos: std::collections::HashMap<usize, usize> = zero_weight
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, i))
        .collect();
    let n = zero_weight.len();

    // C = sum_{a != b} E_ba E_ab restricted to weight zero; E_ab moves out of
    // the subspace and E_ba brings it back.
    let mut c = DMatrix::<f64>::zeros(n, n);
    for (col, &idx) in zero_weight.iter().enumerate() {
        let ds = digits(idx, r, m);
        for a in 0..r {
            for b in 0..r {
                if a == b {
                    continue;
                }
                for mid in apply_e(&ds, a, b) {
                    for back in apply_e(&mid, b, a) {
                        let row = pos[&encode(&back, r)];
                        c[(row, col)] += 1.0;
                    }
                }
            }
        }
    }
    let eig = SymmetricEigen::new(c);
    let mut vectors = Vec::new();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() < KERNEL_TOL {
            let mut v = vec![0.0; dim];
            for (i, &idx) in zero_weight.iter().enumerate() {
                v[idx] = eig.eigenvectors[(i, k)];
            }
            vectors.push(v);
        }
    }
    Ok(InvariantBasis {
        rank,
        count,
        dim,
        weight_zero_dim: n,
        vectors,
    })
}

/// Largest `||E_ab v||` over all generators (including Cartan differences) and basis vectors.
pub fn su_m_invariance_residual(basis: &InvariantBasis) -> f64 {
    let (r, m) = (basis.rank as usize, basis.count as usize);
    let mut worst: f64 = 0.0;
    for v in &basis.vectors {
        for a in 0..r {
            for b in 0..r {
                let mut out = vec![0.0; basis.dim];
                for (idx, &x) in v.iter().enumerate() {
                    if x == 0.0 {
                        continue;
                    }
                    let ds = digits(idx, r, m);
                    for img in apply_e(&ds, a, b) {
                        out[encode(&img, r)] += x;
                    }
                    if a == b {
                        // traceless part: E_aa - m/M
                        out[idx] -= x * m as f64 / r as f64;
                    }
                }
                worst = worst.max(out.iter().map(|x| x * x).sum::<f64>().sqrt());
            }
        }
    }
    worst
}
