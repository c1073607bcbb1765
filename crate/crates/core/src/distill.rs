//! Monte Carlo run of the projective distillation protocol.
//!
//! Both parties measure their total spin, read off the degeneracy labels,
//! and keep a maximally entangled state of dimension `2j + 1`. Only `j`
//! matters for the yield, so only `j` is sampled.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Config, LogBase, RngAlgorithm};
use crate::error::{Error, Result};
use crate::measures::{
    entanglement_from_tables, probabilities_from_tables, MixtureWeights, SplitSpec, SplitTables,
};
use crate::spin::TwiceSpin;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistillationRun {
    pub split: SplitSpec,
    pub trials: u64,
    pub seed: u64,
    pub rng: RngAlgorithm,
    pub shards: u32,
    pub log_base: LogBase,
    /// Number of trials that landed in each sector.
    pub histogram: BTreeMap<TwiceSpin, u64>,
    pub yield_mean: f64,
    pub yield_stderr: f64,
    /// Closed-form entanglement for comparison.
    pub s_e: f64,
}

impl DistillationRun {
    /// `|mean - S_E|` in units of the standard error.
    pub fn z_score(&self) -> f64 {
        let gap = (self.yield_mean - self.s_e).abs();
        if self.yield_stderr == 0.0 {
            if gap <= 1e-12 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            gap / self.yield_stderr
        }
    }
}

/// Inverse-CDF sampler over sectors sorted by `j`.
#[derive(Clone, Debug)]
pub struct SectorSampler {
    sectors: Vec<TwiceSpin>,
    cdf: Vec<f64>,
}

impl SectorSampler {
    pub fn new(p: &BTreeMap<TwiceSpin, f64>) -> Result<Self> {
        let mut sectors = Vec::new();
        let mut cdf = Vec::new();
        let mut acc = 0.0;
        for (j, w) in p {
            if *w > 0.0 {
                acc += w;
                sectors.push(*j);
                cdf.push(acc);
            }
        }
        match cdf.last_mut() {
            Some(last) => *last = 1.0,
            None => return Err(Error::EmptyInvariantSpace),
        }
        Ok(SectorSampler { sectors, cdf })
    }

    /// Sector for a uniform draw `u` in `[0, 1)`.
    pub fn pick(&self, u: f64) -> TwiceSpin {
        let idx = self.cdf.partition_point(|&c| c <= u);
        self.sectors[idx.min(self.sectors.len() - 1)]
    }
}

fn shard_histogram(
    sampler: &SectorSampler,
    seed: u64,
    shard: u32,
    trials: u64,
) -> BTreeMap<TwiceSpin, u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(shard));
    let mut hist = BTreeMap::new();
    for _ in 0..trials {
        *hist.entry(sampler.pick(rng.random::<f64>())).or_insert(0) += 1;
    }
    hist
}

/// Runs `trials` rounds split over `config.shards` fixed shards.
pub fn simulate(
    split: &SplitSpec,
    weights: &MixtureWeights<f64>,
    trials: u64,
    seed: u64,
    config: &Config,
) -> Result<DistillationRun> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if config.shards == 0 {
        return Err(Error::InvalidArgument(
            "shard count must be at least 1".into(),
        ));
    }
    let tables = SplitTables::new(split, config.exact_threshold)?;
    let p = probabilities_from_tables::<f64>(&tables, weights)?;
    let s_e = entanglement_from_tables::<f64>(&tables, weights, config.log_base)?.s_e;
    let sampler = SectorSampler::new(&p)?;

    let shards = u64::from(config.shards);
    let (per, extra) = (trials / shards, trials % shards);
    let parts: Vec<BTreeMap<TwiceSpin, u64>> = (0..config.shards)
        .into_par_iter()
        .map(|k| {
            let n = per + u64::from(u64::from(k) < extra);
            shard_histogram(&sampler, seed, k, n)
        })
        .collect();
    let mut histogram = BTreeMap::new();
    for part in parts {
        for (j, c) in part {
            *histogram.entry(j).or_insert(0) += c;
        }
    }

    let base = config.log_base;
    let n = trials as f64;
    let yield_of = |j: &TwiceSpin| base.from_nats(f64::from(j.dim()).ln());
    let mean = histogram
        .iter()
        .map(|(j, c)| *c as f64 * yield_of(j))
        .sum::<f64>()
        / n;
    let ss: f64 = histogram
        .iter()
        .map(|(j, c)| *c as f64 * (yield_of(j) - mean).powi(2))
        .sum();
    let stderr = if trials > 1 {
        (ss / (n - 1.0)).sqrt() / n.sqrt()
    } else {
        0.0
    };
    Ok(DistillationRun {
        split: *split,
        trials,
        seed,
        rng: config.rng,
        shards: config.shards,
        log_base: base,
        histogram,
        yield_mean: mean,
        yield_stderr: stderr,
        s_e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubits_always_one_ebit() {
        let run = simulate(
            &SplitSpec::qubits(1, 1),
            &MixtureWeights::Uniform,
            10,
            3,
            &Config::default(),
        )
        .unwrap();
        assert_eq!(run.yield_mean, 1.0);
        assert_eq!(run.yield_stderr, 0.0);
        assert_eq!(run.histogram, BTreeMap::from([(TwiceSpin::HALF, 10)]));
    }

    #[test]
    fn degenerate_sector_weights() {
        let w = MixtureWeights::PerSector(BTreeMap::from([(TwiceSpin::ONE, 1.0)]));
        let run = simulate(&SplitSpec::qubits(2, 2), &w, 1000, 0, &Config::default()).unwrap();
        assert_eq!(run.yield_mean, LogBase::Two.from_nats(3f64.ln()));
        assert_eq!(run.yield_stderr, 0.0);
    }

    #[test]
    fn four_qubits_within_three_sigma() {
        let run = simulate(
            &SplitSpec::qubits(2, 2),
            &MixtureWeights::Uniform,
            1_000_000,
            7,
            &Config::default(),
        )
        .unwrap();
        assert!((run.s_e - 0.5 * 3f64.log2()).abs() < 1e-12);
        assert!(run.z_score() <= 3.0, "{run:?}");
    }

    #[test]
    fn reproducible_and_independent_of_threads() {
        let cfg = Config::default();
        let split = SplitSpec::qubits(4, 4);
        let a = simulate(&split, &MixtureWeights::Uniform, 50_000, 11, &cfg).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b =
            pool.install(|| simulate(&split, &MixtureWeights::Uniform, 50_000, 11, &cfg).unwrap());
        assert_eq!(a, b);
        let c = simulate(&split, &MixtureWeights::Uniform, 50_000, 12, &cfg).unwrap();
        assert_ne!(a.histogram, c.histogram);
    }

    #[test]
    fn sampler_boundaries() {
        let p = BTreeMap::from([
            (TwiceSpin(0), 0.25),
            (TwiceSpin(1), 0.0),
            (TwiceSpin(2), 0.75),
        ]);
        let s = SectorSampler::new(&p).unwrap();
        assert_eq!(s.pick(0.0), TwiceSpin(0));
        assert_eq!(s.pick(0.2499), TwiceSpin(0));
        assert_eq!(s.pick(0.25), TwiceSpin(2));
        assert_eq!(s.pick(0.999_999), TwiceSpin(2));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(32))]

        #[test]
        fn yield_bounded_by_largest_sector(a in 1u32..8, b in 1u32..8, seed in 0u64..1000) {
            let split = SplitSpec::qubits(a, b);
            let cfg = Config::default();
            if let Ok(run) = simulate(&split, &MixtureWeights::Uniform, 2000, seed, &cfg) {
                let top = run.histogram.keys().next_back().unwrap();
                // 2j is at most the smaller side's count
                let bound = f64::from(a.min(b) + 1).log2();
                proptest::prop_assert!(run.yield_mean <= f64::from(top.dim()).log2() + 1e-12);
                proptest::prop_assert!(run.yield_mean <= bound + 1e-12);
                proptest::prop_assert_eq!(run.histogram.values().sum::<u64>(), 2000);
            } else {
                proptest::prop_assert!((a + b) % 2 == 1);
            }
        }
    }

    #[test]
    fn rejects_zero_trials() {
        assert!(simulate(
            &SplitSpec::qubits(1, 1),
            &MixtureWeights::Uniform,
            0,
            0,
            &Config::default()
        )
        .is_err());
    }
}
