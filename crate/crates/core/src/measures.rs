//! Closed-form entanglement of zero-spin mixtures under a bipartite split.
//!
//! A mixture diagonal in the cross-singlet basis `|j, a_j, b_j>` has
//! entanglement of formation and distillable entanglement both equal to
//! `S_E = sum_j p_j ln(2j + 1)`, where `p_j` is the weight of sector `j`.
//! Reduced entropies follow from the block structure of `rho_A`: each
//! `(j, a_j)` block is `2j + 1` equal eigenvalues.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::config::{Config, LogBase};
use crate::error::{Error, Result};
use crate::multiplicity::MultiplicityTable;
use crate::scalar::{stable_sum, Real, Weight};
use crate::spin::{SystemSpec, TwiceSpin};

/// Probability per sector `j`.
pub type SectorDistribution<W> = BTreeMap<TwiceSpin, W>;

/// Bipartition: Alice holds the first `side_a_count` constituents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitSpec {
    pub total: SystemSpec,
    pub side_a_count: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl SplitSpec {
    pub fn new(total: SystemSpec, side_a_count: u32) -> Result<Self> {
        if side_a_count > total.constituent_count {
            return Err(Error::InvalidArgument(format!(
                "side A holds {side_a_count} of only {} constituents",
                total.constituent_count
            )));
        }
        Ok(SplitSpec {
            total,
            side_a_count,
        })
    }

    /// `a:b` split of `a + b` qubits.
    pub fn qubits(side_a: u32, side_b: u32) -> Self {
        SplitSpec {
            total: SystemSpec::qubits(side_a + side_b),
            side_a_count: side_a,
        }
    }

    pub fn side_b_count(&self) -> u32 {
        self.total.constituent_count - self.side_a_count
    }

    pub fn side(&self, side: Side) -> SystemSpec {
        match side {
            Side::A => self.total.with_count(self.side_a_count),
            Side::B => self.total.with_count(self.side_b_count()),
        }
    }

    pub fn swapped(&self) -> Self {
        SplitSpec {
            total: self.total,
            side_a_count: self.side_b_count(),
        }
    }
}

/// Degeneracy labels of one cross-singlet `|j, a, b>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SectorIndex {
    pub twice_j: TwiceSpin,
    pub a: usize,
    pub b: usize,
}

/// Weights of a mixture of cross-singlets.
#[derive(Clone, Debug, PartialEq)]
pub enum MixtureWeights<W> {
    /// The normalized projector onto the invariant subspace.
    Uniform,
    /// Total weight per sector, spread evenly within each sector.
    PerSector(BTreeMap<TwiceSpin, W>),
    /// Weight of every basis state.
    Full(BTreeMap<SectorIndex, W>),
}

/// Multiplicity tables of both sides plus the normalization `N`.
#[derive(Clone, Debug)]
pub struct SplitTables {
    split: SplitSpec,
    side_a: MultiplicityTable,
    side_b: MultiplicityTable,
    exact_dimension: Option<BigUint>,
    ln_dimension: f64,
}

/// One sector with singlets on both sides.
#[derive(Clone, Copy, Debug)]
pub struct Sector {
    pub j: TwiceSpin,
    pub ln_count_a: f64,
    pub ln_count_b: f64,
}

impl SplitTables {
    /// Exact when the whole system is within `threshold`.
    pub fn new(split: &SplitSpec, threshold: u32) -> Result<Self> {
        if split.total.twice_spin().is_none() {
            return Err(Error::InvalidArgument(
                "closed-form entanglement is implemented for SU(2) spins".into(),
            ));
        }
        let total_size = split.total.max_twice_j().unwrap_or(0);
        let exact = total_size <= threshold;
        let build = |spec| {
            if exact {
                MultiplicityTable::exact(spec, threshold)
            } else {
                MultiplicityTable::log_domain(spec)
            }
        };
        let side_a = build(split.side(Side::A))?;
        let side_b = build(split.side(Side::B))?;
        let mut tables = SplitTables {
            split: *split,
            side_a,
            side_b,
            exact_dimension: None,
            ln_dimension: f64::NEG_INFINITY,
        };
        if exact {
            let n: BigUint = tables
                .sectors()
                .map(|s| {
                    tables.side_a.count(s.j).unwrap_or_default()
                        * tables.side_b.count(s.j).unwrap_or_default()
                })
                .sum();
            tables.ln_dimension = crate::special::big_ln(&n);
            tables.exact_dimension = Some(n);
        } else {
            let logs: Vec<f64> = tables
                .sectors()
                .map(|s| s.ln_count_a + s.ln_count_b)
                .collect();
            tables.ln_dimension = log_sum_exp(&logs);
        }
        Ok(tables)
    }

    pub fn split(&self) -> &SplitSpec {
        &self.split
    }

    pub fn table(&self, side: Side) -> &MultiplicityTable {
        match side {
            Side::A => &self.side_a,
            Side::B => &self.side_b,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact_dimension.is_some()
    }

    /// `N = sum_j c_j^A c_j^B`, when exact.
    pub fn exact_dimension(&self) -> Option<&BigUint> {
        self.exact_dimension.as_ref()
    }

    pub fn ln_dimension(&self) -> f64 {
        self.ln_dimension
    }

    /// Sectors where both sides carry spin `j`, ascending in `j`.
    pub fn sectors(&self) -> impl Iterator<Item = Sector> + '_ {
        self.side_a.ln_counts().iter().filter_map(|(j, &la)| {
            self.side_b.ln_count(*j).map(|lb| Sector {
                j: *j,
                ln_count_a: la,
                ln_count_b: lb,
            })
        })
    }

    pub fn has_sector(&self, j: TwiceSpin) -> bool {
        self.side_a.ln_count(j).is_some() && self.side_b.ln_count(j).is_some()
    }

    fn sector_size(&self, side: Side, j: TwiceSpin) -> f64 {
        let table = self.table(side);
        match table.count(j) {
            Some(c) => c.to_f64().unwrap_or(f64::INFINITY),
            None => table.ln_count(j).map_or(0.0, f64::exp),
        }
    }
}

fn log_sum_exp(values: &[f64]) -> f64 {
    let peak = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return peak;
    }
    peak + stable_sum(values.iter().map(|v| (v - peak).exp())).ln()
}

/// Sector probabilities `p_j` of a mixture.
pub fn singlet_probabilities<W: Weight>(
    split: &SplitSpec,
    weights: &MixtureWeights<W>,
    config: &Config,
) -> Result<SectorDistribution<W>> {
    let tables = SplitTables::new(split, config.exact_threshold)?;
    probabilities_from_tables(&tables, weights)
}

pub fn probabilities_from_tables<W: Weight>(
    tables: &SplitTables,
    weights: &MixtureWeights<W>,
) -> Result<SectorDistribution<W>> {
    if tables.sectors().next().is_none() {
        return Err(Error::EmptyInvariantSpace);
    }
    match weights {
        MixtureWeights::Uniform => match tables.exact_dimension() {
            Some(n) => Ok(tables
                .sectors()
                .map(|s| {
                    let ca = tables.side_a.count(s.j).unwrap_or_default();
                    let cb = tables.side_b.count(s.j).unwrap_or_default();
                    (s.j, W::from_ratio(&(ca * cb), n))
                })
                .collect()),
            None => tables
                .sectors()
                .map(|s| {
                    W::from_ln(s.ln_count_a + s.ln_count_b - tables.ln_dimension).map(|p| (s.j, p))
                })
                .collect::<Option<_>>()
                .ok_or(Error::ExactWeightsUnavailable {
                    count: tables.split.total.constituent_count,
                }),
        },
        MixtureWeights::PerSector(per_sector) => {
            for (j, w) in per_sector {
                check_weight(*j, w)?;
                if !tables.has_sector(*j) && !w.is_zero() {
                    return Err(Error::UnsupportedSector(*j));
                }
            }
            check_total(per_sector.values())?;
            Ok(per_sector
                .iter()
                .filter(|(_, w)| !w.is_zero())
                .map(|(j, w)| (*j, w.clone()))
                .collect())
        }
        MixtureWeights::Full(full) => {
            let mut per_sector: SectorDistribution<W> = BTreeMap::new();
            for (idx, w) in full {
                check_weight(idx.twice_j, w)?;
                let max_a = tables.sector_size(Side::A, idx.twice_j);
                let max_b = tables.sector_size(Side::B, idx.twice_j);
                if (idx.a as f64) >= max_a || (idx.b as f64) >= max_b {
                    return Err(Error::IndexOutOfRange {
                        twice_j: idx.twice_j.twice(),
                        a: idx.a,
                        b: idx.b,
                        max_a: max_a as usize,
                        max_b: max_b as usize,
                    });
                }
                let slot = per_sector.entry(idx.twice_j).or_insert_with(W::zero);
                *slot = slot.clone() + w.clone();
            }
            check_total(full.values())?;
            per_sector.retain(|_, w| !w.is_zero());
            Ok(per_sector)
        }
    }
}

fn check_weight<W: Weight>(j: TwiceSpin, w: &W) -> Result<()> {
    if w.is_negative() {
        return Err(Error::NegativeWeight {
            twice_j: j.twice(),
            weight: w.to_f64(),
        });
    }
    Ok(())
}

fn check_total<'a, W: Weight + 'a>(values: impl IntoIterator<Item = &'a W>) -> Result<()> {
    let total = W::total(values);
    if !W::is_unit_total(&total) {
        return Err(Error::NotNormalized {
            sum: total.to_f64(),
        });
    }
    Ok(())
}

/// `sum_j p_j ln(2j + 1)` in nats, for any weight representation.
pub fn entanglement_entropy_nats<W: Weight, T: Real>(p: &SectorDistribution<W>) -> T {
    stable_sum(
        p.iter()
            .map(|(j, w)| T::of(w.to_f64()) * T::of(f64::from(j.dim()).ln())),
    )
}

/// Everything known in closed form about one mixture and split.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntanglementReport<T> {
    pub split: SplitSpec,
    pub log_base: LogBase,
    /// Average entanglement of the cross-singlet decomposition.
    pub s_e: T,
    pub e_f: T,
    pub e_d: T,
    pub p: SectorDistribution<T>,
    /// `None` for fully indexed mixtures; see [`reduced_entropy`].
    pub s_a: Option<T>,
    pub s_b: Option<T>,
    pub s_total: T,
    pub mutual_information: Option<T>,
    pub unentangled_fraction: T,
}

struct NatsReport<T> {
    p: SectorDistribution<T>,
    s_e: T,
    s_a: Option<T>,
    s_b: Option<T>,
    s_total: T,
}

fn compute_nats<T: Real + Weight>(
    tables: &SplitTables,
    weights: &MixtureWeights<T>,
) -> Result<NatsReport<T>> {
    let p = probabilities_from_tables(tables, weights)?;
    let s_e = entanglement_entropy_nats::<T, T>(&p);
    let ln_sizes = |j: &TwiceSpin| {
        let la = tables.side_a.ln_count(*j).unwrap_or(f64::NEG_INFINITY);
        let lb = tables.side_b.ln_count(*j).unwrap_or(f64::NEG_INFINITY);
        (la, lb)
    };

    let (s_a, s_b, s_total) = match weights {
        MixtureWeights::Full(full) => {
            let s_total = stable_sum(
                full.values()
                    .filter(|w| **w > T::zero())
                    .map(|&w| -w * w.ln()),
            );
            (None, None, s_total)
        }
        MixtureWeights::Uniform | MixtureWeights::PerSector(_) => {
            let mut terms_a = Vec::with_capacity(p.len());
            let mut terms_b = Vec::with_capacity(p.len());
            let mut terms_total = Vec::with_capacity(p.len());
            for (j, &pj) in &p {
                if pj <= T::zero() {
                    continue;
                }
                let (la, lb) = ln_sizes(j);
                let ln_p = match weights {
                    MixtureWeights::Uniform => la + lb - tables.ln_dimension,
                    _ => Weight::to_f64(&pj).ln(),
                };
                let ln_dim = f64::from(j.dim()).ln();
                // each (j, a) block of rho_A holds 2j+1 eigenvalues p_j / (c_j^A (2j+1))
                terms_a.push(-pj * T::of(ln_p - la - ln_dim));
                terms_b.push(-pj * T::of(ln_p - lb - ln_dim));
                terms_total.push(-pj * T::of(ln_p - la - lb));
            }
            (
                Some(stable_sum(terms_a)),
                Some(stable_sum(terms_b)),
                stable_sum(terms_total),
            )
        }
    };
    Ok(NatsReport {
        p,
        s_e,
        s_a,
        s_b,
        s_total,
    })
}

/// Full closed-form report for one split and mixture.
pub fn entanglement<T: Real + Weight>(
    split: &SplitSpec,
    weights: &MixtureWeights<T>,
    config: &Config,
) -> Result<EntanglementReport<T>> {
    let tables = SplitTables::new(split, config.exact_threshold)?;
    entanglement_from_tables(&tables, weights, config.log_base)
}

/// As [`entanglement`], reusing prebuilt tables.
pub fn entanglement_from_tables<T: Real + Weight>(
    tables: &SplitTables,
    weights: &MixtureWeights<T>,
    base: LogBase,
) -> Result<EntanglementReport<T>> {
    let nats = compute_nats(tables, weights)?;
    let conv = |x: T| base.from_nats(x);
    let s_e = conv(nats.s_e);
    let mutual_information = match (nats.s_a, nats.s_b) {
        (Some(a), Some(b)) => Some(conv(a + b - nats.s_total)),
        _ => None,
    };
    let unentangled_fraction = nats
        .p
        .get(&TwiceSpin::ZERO)
        .copied()
        .unwrap_or_else(T::zero);
    Ok(EntanglementReport {
        split: tables.split,
        log_base: base,
        s_e,
        e_f: s_e,
        e_d: s_e,
        p: nats.p,
        s_a: nats.s_a.map(conv),
        s_b: nats.s_b.map(conv),
        s_total: conv(nats.s_total),
        mutual_information,
        unentangled_fraction,
    })
}

/// Von Neumann entropy of one side's reduced state. Fully indexed mixtures
/// are rejected: their reductions are computed by the brute-force oracle.
pub fn reduced_entropy<T: Real + Weight>(
    split: &SplitSpec,
    side: Side,
    weights: &MixtureWeights<T>,
    config: &Config,
) -> Result<T> {
    if matches!(weights, MixtureWeights::Full(_)) {
        return Err(Error::NeedsOracle);
    }
    let report = entanglement(split, weights, config)?;
    let value = match side {
        Side::A => report.s_a,
        Side::B => report.s_b,
    };
    Ok(value.expect("present for uniform and per-sector mixtures"))
}

/// `I(A:B) = S(rho_A) + S(rho_B) - S(rho)`.
pub fn mutual_information<T: Real + Weight>(
    split: &SplitSpec,
    weights: &MixtureWeights<T>,
    config: &Config,
) -> Result<T> {
    if matches!(weights, MixtureWeights::Full(_)) {
        return Err(Error::NeedsOracle);
    }
    Ok(entanglement(split, weights, config)?
        .mutual_information
        .expect("present for uniform and per-sector mixtures"))
}

/// Weight `p_0` of the sector with no entanglement.
pub fn unentangled_fraction<W: Weight>(
    split: &SplitSpec,
    weights: &MixtureWeights<W>,
    config: &Config,
) -> Result<W> {
    let p = singlet_probabilities(split, weights, config)?;
    Ok(p.get(&TwiceSpin::ZERO).cloned().unwrap_or_else(W::zero))
}
