//! Left-comb coupling basis of `m` spin-`s` constituents.
//!
//! Product basis convention: constituent 0 is the most significant digit,
//! digit `d` encodes magnetic number `s - d`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::spin::TwiceSpin;

use super::cg::clebsch_gordan;

/// One coupling path and its `2j + 1` magnetic states.
#[derive(Clone, Debug)]
pub struct CoupledMultiplet {
    /// Intermediate total spin after each constituent.
    pub path: Vec<TwiceSpin>,
    pub twice_j: TwiceSpin,
    /// Position among the paths that end at the same `j`.
    pub a_index: usize,
    /// Amplitudes indexed by `(twice_m + twice_j) / 2`, each of length `(2s+1)^m`.
    pub states: Vec<Vec<f64>>,
}

impl CoupledMultiplet {
    /// Amplitudes of `|j, m, a>` for a twice-valued `m`.
    pub fn state(&self, twice_m: i32) -> &[f64] {
        let idx = (twice_m + self.twice_j.twice() as i32) / 2;
        &self.states[idx as usize]
    }
}

/// Orthonormal basis adapted to total spin, organized by `(j, a, m)`.
#[derive(Clone, Debug)]
pub struct CouplingBasis {
    pub count: u32,
    pub twice_s: TwiceSpin,
    pub multiplets: Vec<CoupledMultiplet>,
}

fn product_dim(local: u32, count: u32, cap: u64) -> Result<usize> {
    let dim = (local as u64).checked_pow(count).unwrap_or(u64::MAX);
    if dim > cap {
        return Err(Error::DimensionCapExceeded { dim, cap });
    }
    Ok(dim as usize)
}

impl CouplingBasis {
    /// Full basis of `count` constituents.
    pub fn build(count: u32, twice_s: TwiceSpin, cap: u64) -> Result<Self> {
        Self::build_for(count, twice_s, None, cap)
    }

    /// Basis restricted to multiplets whose final spin is in `targets`.
    /// Intermediate paths that cannot reach any target are pruned.
    pub fn build_for(
        count: u32,
        twice_s: TwiceSpin,
        targets: Option<&[TwiceSpin]>,
        cap: u64,
    ) -> Result<Self> {
        let local = twice_s.dim();
        product_dim(local, count, cap)?;
        let ts = twice_s.twice() as i32;
        let reachable = |tj: u32, remaining: u32| match targets {
            None => true,
            Some(ts_list) => ts_list
                .iter()
                .any(|t| tj.abs_diff(t.twice()) <= remaining * twice_s.twice()),
        };

        let mut level = vec![CoupledMultiplet {
            path: Vec::new(),
            twice_j: TwiceSpin::ZERO,
            a_index: 0,
            states: vec![vec![1.0]],
        }];
        for k in 0..count {
            let remaining = count - k - 1;
            let old_dim = local.pow(k) as usize;
            let new_dim = old_dim * local as usize;
            let mut next = Vec::new();
            for parent in &level {
                let tjp = parent.twice_j.twice() as i32;
                for tj in (tjp.abs_diff(ts)..=(tjp + ts) as u32).step_by(2) {
                    if !reachable(tj, remaining) {
                        continue;
                    }
                    let tj_i = tj as i32;
                    let mut states = Vec::with_capacity(tj as usize + 1);
                    for tm in (-tj_i..=tj_i).step_by(2) {
                        let mut amp = vec![0.0; new_dim];
                        for d in 0..local as i32 {
                            let tmu = ts - 2 * d;
                            let tmp = tm - tmu;
                            if tmp.abs() > tjp {
                                continue;
                            }
                            let cg = clebsch_gordan(tjp as u32, tmp, ts as u32, tmu, tj, tm);
                            if cg == 0.0 {
                                continue;
                            }
                            let src = parent.state(tmp);
                            for (i, &v) in src.iter().enumerate() {
                                if v != 0.0 {
                                    amp[i * local as usize + d as usize] += cg * v;
                                }
                            }
                        }
                        states.push(amp);
                    }
                    let mut path = parent.path.clone();
                    path.push(TwiceSpin(tj));
                    next.push(CoupledMultiplet {
                        path,
                        twice_j: TwiceSpin(tj),
                        a_index: 0,
                        states,
                    });
                }
            }
            level = next;
        }
        if let Some(ts_list) = targets {
            level.retain(|mlt| ts_list.contains(&mlt.twice_j));
        }
        let mut seen: BTreeMap<TwiceSpin, usize> = BTreeMap::new();
        for mlt in &mut level {
            let slot = seen.entry(mlt.twice_j).or_default();
            mlt.a_index = *slot;
            *slot += 1;
        }
        Ok(CouplingBasis {
            count,
            twice_s,
            multiplets: level,
        })
    }

    pub fn dim(&self) -> usize {
        self.twice_s.dim().pow(self.count) as usize
    }

    /// Number of paths ending at each `j`.
    pub fn path_counts(&self) -> BTreeMap<TwiceSpin, usize> {
        let mut out = BTreeMap::new();
        for mlt in &self.multiplets {
            *out.entry(mlt.twice_j).or_default() += 1;
        }
        out
    }

    /// Multiplets ending at `j`, in `a_index` order.
    pub fn multiplets_for(&self, j: TwiceSpin) -> impl Iterator<Item = &CoupledMultiplet> {
        self.multiplets.iter().filter(move |m| m.twice_j == j)
    }

    /// All basis vectors, flattened.
    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> {
        self.multiplets
            .iter()
            .flat_map(|m| m.states.iter().map(Vec::as_slice))
    }
}
