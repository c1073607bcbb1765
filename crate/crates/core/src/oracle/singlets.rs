//! Explicit cross-singlets `|j, a, b>` of a bipartite spin system.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::{SectorIndex, Side, SplitSpec};
use crate::spin::TwiceSpin;

use super::coupling::CouplingBasis;
use super::state::PureStateVector;

#[derive(Clone, Debug)]
pub struct LabeledSinglet {
    pub label: SectorIndex,
    pub state: PureStateVector,
}

/// Orthonormal basis of the invariant subspace adapted to a split.
#[derive(Clone, Debug)]
pub struct SingletBasis {
    pub split: SplitSpec,
    /// `(d_A, d_B)`.
    pub dims: (usize, usize),
    pub states: Vec<LabeledSinglet>,
}

impl SingletBasis {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn find(&self, label: &SectorIndex) -> Option<&LabeledSinglet> {
        self.states.iter().find(|s| &s.label == label)
    }
}

/// `|j, a, b> = (2j+1)^{-1/2} sum_m (-1)^{j-m} |j, -m, a>_A |j, m, b>_B`.
pub fn build_singlet_states(split: &SplitSpec, cap: u64) -> Result<SingletBasis> {
    let twice_s = split
        .total
        .twice_spin()
        .ok_or_else(|| Error::InvalidArgument("cross-singlets are built for SU(2) spins".into()))?;
    let local = u64::from(twice_s.dim());
    let total_dim = local
        .checked_pow(split.total.constituent_count)
        .unwrap_or(u64::MAX);
    if total_dim > cap {
        return Err(Error::DimensionCapExceeded {
            dim: total_dim,
            cap,
        });
    }
    let (na, nb) = (split.side_a_count, split.side_b_count());
    let max_common = na.min(nb) * twice_s.twice();
    let parity = (na * twice_s.twice()) % 2;
    let common: Vec<TwiceSpin> = (parity..=max_common).step_by(2).map(TwiceSpin).collect();
    let side_a = CouplingBasis::build_for(na, twice_s, Some(&common), cap)?;
    let side_b = CouplingBasis::build_for(nb, twice_s, Some(&common), cap)?;
    let (da, db) = (side_a.dim(), side_b.dim());

    let mut states = Vec::new();
    for &j in &common {
        let tj = j.twice() as i32;
        let norm = 1.0 / f64::from(j.dim()).sqrt();
        for ma in side_a.multiplets_for(j) {
            for mb in side_b.multiplets_for(j) {
                let mut amp = vec![0.0f64; da * db];
                for tm in (-tj..=tj).step_by(2) {
                    let sign = if ((tj - tm) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                    let va = ma.state(-tm);
                    let vb = mb.state(tm);
                    for (ia, &x) in va.iter().enumerate() {
                        if x == 0.0 {
                            continue;
                        }
                        let row = &mut amp[ia * db..(ia + 1) * db];
                        for (slot, &y) in row.iter_mut().zip(vb) {
                            *slot += sign * norm * x * y;
                        }
                    }
                }
                let amplitudes = DVector::from_iterator(
                    amp.len(),
                    amp.into_iter().map(|x| Complex64::new(x, 0.0)),
                );
                states.push(LabeledSinglet {
                    label: SectorIndex {
                        twice_j: j,
                        a: ma.a_index,
                        b: mb.a_index,
                    },
                    state: PureStateVector::new(amplitudes)?,
                });
            }
        }
    }
    Ok(SingletBasis {
        split: *split,
        dims: (da, db),
        states,
    })
}

/// Product dimension of one side.
pub fn side_dim(split: &SplitSpec, side: Side) -> u64 {
    u64::from(split.total.local_dim()).pow(split.side(side).constituent_count)
}
