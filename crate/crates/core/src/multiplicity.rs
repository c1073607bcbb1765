//! Multiplicities of spin-`j` irreducibles in tensor powers of a fixed spin.
//!
//! Exact counts come from the Clebsch–Gordan recursion on arbitrary-precision
//! integers. Above the exact threshold the same recursion runs on scaled
//! floats (general spin) or the closed form runs through log-gamma (qubits).

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{big_ln, ln_binomial};
use crate::spin::{ConstituentKind, SystemSpec, TwiceSpin};
use crate::unitary::su_m_invariant_dimension;

/// Default constituent-count limit for exact tables.
pub const DEFAULT_EXACT_THRESHOLD: u32 = 4096;

/// Scaled entries below this fraction of the peak are dropped.
const UNDERFLOW_CUTOFF: f64 = 1e-300;

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn admissible(m: u32, twice_j: u32, twice_s: u32) -> bool {
    let max = u64::from(m) * u64::from(twice_s);
    u64::from(twice_j) <= max && (max - u64::from(twice_j)) % 2 == 0
}

/// `c_j^(m)` for `m` qubits: `C(m, m/2 + j) - C(m, m/2 + j + 1)`, zero when
/// `j` is out of range or has the wrong parity.
pub fn qubit_multiplicity(m: u32, j: TwiceSpin) -> BigUint {
    if !admissible(m, j.twice(), 1) {
        return BigUint::zero();
    }
    let k = u64::from((m + j.twice()) / 2);
    let m = u64::from(m);
    binomial(m, k) - binomial(m, k + 1)
}

/// `ln c_j^(m)` for `m` qubits, via `c = C(m, k) (2j + 1) / (k + 1)` with
/// `k = m/2 + j`, which avoids subtracting binomials.
pub fn log_multiplicity(m: u32, j: TwiceSpin) -> Result<f64> {
    if !admissible(m, j.twice(), 1) {
        return Err(Error::ZeroMultiplicity {
            m,
            twice_j: j.twice(),
        });
    }
    let k = u64::from((m + j.twice()) / 2);
    let ratio = f64::from(j.dim()) / (k + 1) as f64;
    Ok(ln_binomial(u64::from(m), k) + ratio.ln())
}

/// Exact tables `c^(0), c^(1), ...` for one spin, one tensor factor at a time.
#[derive(Clone, Debug)]
pub struct ExactTower {
    twice_s: u32,
    count: u32,
    // indexed by twice_j
    counts: Vec<BigUint>,
}

impl ExactTower {
    pub fn new(twice_s: TwiceSpin) -> Self {
        ExactTower {
            twice_s: twice_s.twice(),
            count: 0,
            counts: vec![BigUint::one()],
        }
    }

    pub fn constituent_count(&self) -> u32 {
        self.count
    }

    /// `c_j` of the current power; zero outside the support.
    pub fn get(&self, j: TwiceSpin) -> BigUint {
        self.counts
            .get(j.twice() as usize)
            .cloned()
            .unwrap_or_default()
    }

    /// Couples one more constituent.
    pub fn step(&mut self) {
        let ts = self.twice_s as usize;
        let mut next = vec![BigUint::zero(); self.counts.len() + ts];
        for (tjp, c) in self.counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let lo = tjp.abs_diff(ts);
            for tj in (lo..=tjp + ts).step_by(2) {
                next[tj] += c;
            }
        }
        self.counts = next;
        self.count += 1;
    }

    pub fn to_map(&self) -> BTreeMap<TwiceSpin, BigUint> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(tj, c)| (TwiceSpin(tj as u32), c.clone()))
            .collect()
    }
}

/// Float tables `c^(m)` stored as `scale * exp(ln_scale)`, renormalized at
/// every step so the recursion runs far past `f64` range.
#[derive(Clone, Debug)]
pub struct ScaledTower {
    twice_s: u32,
    count: u32,
    scaled: Vec<f64>,
    ln_scale: f64,
}

impl ScaledTower {
    pub fn new(twice_s: TwiceSpin) -> Self {
        ScaledTower {
            twice_s: twice_s.twice(),
            count: 0,
            scaled: vec![1.0],
            ln_scale: 0.0,
        }
    }

    pub fn constituent_count(&self) -> u32 {
        self.count
    }

    pub fn step(&mut self) {
        let ts = self.twice_s as usize;
        let mut next = vec![0.0; self.scaled.len() + ts];
        for (tjp, &c) in self.scaled.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let lo = tjp.abs_diff(ts);
            for tj in (lo..=tjp + ts).step_by(2) {
                next[tj] += c;
            }
        }
        let peak = next.iter().copied().fold(0.0, f64::max);
        for v in &mut next {
            *v /= peak;
            if *v < UNDERFLOW_CUTOFF {
                *v = 0.0;
            }
        }
        while next.len() > 1 && next.last() == Some(&0.0) {
            next.pop();
        }
        self.scaled = next;
        self.ln_scale += peak.ln();
        self.count += 1;
    }

    /// `ln c_j`, or `None` if the entry is zero or was dropped as negligible.
    pub fn ln_get(&self, j: TwiceSpin) -> Option<f64> {
        match self.scaled.get(j.twice() as usize) {
            Some(&v) if v > 0.0 => Some(v.ln() + self.ln_scale),
            _ => None,
        }
    }

    pub fn to_ln_map(&self) -> BTreeMap<TwiceSpin, f64> {
        self.scaled
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > 0.0)
            .map(|(tj, v)| (TwiceSpin(tj as u32), v.ln() + self.ln_scale))
            .collect()
    }
}

/// Multiplicities of one system, exact when small enough.
///
/// `ln_counts` is always populated. `counts` is `None` for log-domain tables.
/// Log-domain tables of general spin omit entries smaller than `1e-300`
/// times the peak.
#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityTable {
    spec: SystemSpec,
    counts: Option<BTreeMap<TwiceSpin, BigUint>>,
    ln_counts: BTreeMap<TwiceSpin, f64>,
}

fn spin_of(spec: &SystemSpec) -> Result<TwiceSpin> {
    match spec.kind {
        ConstituentKind::Spin { twice_s } => Ok(twice_s),
        ConstituentKind::FundamentalOfUnitary { .. } => Err(Error::InvalidArgument(
            "multiplicity tables are defined for SU(2) spins only".into(),
        )),
    }
}

impl MultiplicityTable {
    /// Exact table when the largest twice-spin is within `threshold`,
    /// log-domain otherwise.
    pub fn new(spec: SystemSpec, threshold: u32) -> Result<Self> {
        match Self::exact(spec, threshold) {
            Err(Error::ExactBudgetExceeded { .. }) => Self::log_domain(spec),
            other => other,
        }
    }

    /// Exact table by Clebsch–Gordan recursion.
    pub fn exact(spec: SystemSpec, threshold: u32) -> Result<Self> {
        let twice_s = spin_of(&spec)?;
        let size = u64::from(spec.constituent_count) * u64::from(twice_s.twice());
        if size > u64::from(threshold) {
            return Err(Error::ExactBudgetExceeded {
                count: spec.constituent_count,
                threshold,
            });
        }
        let mut tower = ExactTower::new(twice_s);
        for _ in 0..spec.constituent_count {
            tower.step();
        }
        Ok(Self::from_counts(spec, tower.to_map()))
    }

    /// Builds a table from known exact counts.
    pub fn from_counts(spec: SystemSpec, counts: BTreeMap<TwiceSpin, BigUint>) -> Self {
        let ln_counts = counts.iter().map(|(j, c)| (*j, big_ln(c))).collect();
        MultiplicityTable {
            spec,
            counts: Some(counts),
            ln_counts,
        }
    }

    /// Log-domain table: closed form for qubits, scaled recursion otherwise.
    pub fn log_domain(spec: SystemSpec) -> Result<Self> {
        let twice_s = spin_of(&spec)?;
        let m = spec.constituent_count;
        let ln_counts = if twice_s == TwiceSpin::HALF {
            (m % 2..=m)
                .step_by(2)
                .map(|tj| {
                    let j = TwiceSpin(tj);
                    (
                        j,
                        log_multiplicity(m, j).expect("admissible by construction"),
                    )
                })
                .collect()
        } else {
            let mut tower = ScaledTower::new(twice_s);
            for _ in 0..m {
                tower.step();
            }
            tower.to_ln_map()
        };
        Ok(MultiplicityTable {
            spec,
            counts: None,
            ln_counts,
        })
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }

    pub fn is_exact(&self) -> bool {
        self.counts.is_some()
    }

    pub fn counts(&self) -> Option<&BTreeMap<TwiceSpin, BigUint>> {
        self.counts.as_ref()
    }

    pub fn ln_counts(&self) -> &BTreeMap<TwiceSpin, f64> {
        &self.ln_counts
    }

    /// Exact `c_j`; `None` for log-domain tables.
    pub fn count(&self, j: TwiceSpin) -> Option<BigUint> {
        self.counts
            .as_ref()
            .map(|c| c.get(&j).cloned().unwrap_or_default())
    }

    /// `ln c_j`, `None` where `c_j = 0`.
    pub fn ln_count(&self, j: TwiceSpin) -> Option<f64> {
        self.ln_counts.get(&j).copied()
    }

    /// Spins with nonzero multiplicity, ascending.
    pub fn support(&self) -> impl Iterator<Item = TwiceSpin> + '_ {
        self.ln_counts.keys().copied()
    }

    /// Invariant-subspace dimension `c_0`, exact tables only.
    pub fn invariant_dimension(&self) -> Option<BigUint> {
        self.count(TwiceSpin::ZERO)
    }
}

/// Dimension `N` of the invariant (total spin zero) subspace.
pub fn invariant_dimension(spec: &SystemSpec) -> BigUint {
    match spec.kind {
        ConstituentKind::Spin { twice_s } if twice_s == TwiceSpin::HALF => {
            qubit_multiplicity(spec.constituent_count, TwiceSpin::ZERO)
        }
        ConstituentKind::Spin { twice_s } => {
            if !admissible(spec.constituent_count, 0, twice_s.twice()) {
                return BigUint::zero();
            }
            let mut tower = ExactTower::new(twice_s);
            for _ in 0..spec.constituent_count {
                tower.step();
            }
            tower.get(TwiceSpin::ZERO)
        }
        ConstituentKind::FundamentalOfUnitary { rank } => {
            su_m_invariant_dimension(rank, spec.constituent_count)
        }
    }
}

/// `ln N` of an SU(2) spin system; `-inf` when `N = 0`.
pub fn ln_invariant_dimension(spec: &SystemSpec) -> Result<f64> {
    let twice_s = spin_of(spec)?;
    let m = spec.constituent_count;
    if !admissible(m, 0, twice_s.twice()) {
        return Ok(f64::NEG_INFINITY);
    }
    if twice_s == TwiceSpin::HALF {
        return log_multiplicity(m, TwiceSpin::ZERO);
    }
    let mut tower = ScaledTower::new(twice_s);
    for _ in 0..m {
        tower.step();
    }
    Ok(tower.ln_get(TwiceSpin::ZERO).unwrap_or(f64::NEG_INFINITY))
}

/// `ln N` for every count `0..=max_count` in a single recursion pass.
pub fn ln_invariant_dimension_series(twice_s: TwiceSpin, max_count: u32) -> Vec<f64> {
    match twice_s.twice() {
        1 => (0..=max_count)
            .map(|m| log_multiplicity(m, TwiceSpin::ZERO).unwrap_or(f64::NEG_INFINITY))
            .collect(),
        2 => ln_spin_one_series(max_count),
        _ => ln_tower_series(twice_s, max_count),
    }
}

/// Spin-1 singlet counts obey `R(m) = (m-1)/(m+1) (2R(m-1) + 3R(m-2))`.
fn ln_spin_one_series(max_count: u32) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_count as usize + 1);
    // scaled pair (R(m-1), R(m)) with a shared log offset
    let (mut prev, mut cur, mut offset) = (0.0f64, 1.0f64, 0.0f64);
    out.push(0.0);
    for m in 1..=max_count {
        let mf = f64::from(m);
        let next = (mf - 1.0) / (mf + 1.0) * (2.0 * cur + 3.0 * prev);
        prev = cur;
        cur = next;
        out.push(if cur > 0.0 {
            cur.ln() + offset
        } else {
            f64::NEG_INFINITY
        });
        if cur > 1e100 {
            offset += cur.ln();
            prev /= cur;
            cur = 1.0;
        }
    }
    out
}

fn ln_tower_series(twice_s: TwiceSpin, max_count: u32) -> Vec<f64> {
    let mut tower = ScaledTower::new(twice_s);
    let mut out = Vec::with_capacity(max_count as usize + 1);
    out.push(0.0);
    for _ in 0..max_count {
        tower.step();
        out.push(tower.ln_get(TwiceSpin::ZERO).unwrap_or(f64::NEG_INFINITY));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn series_fast_paths_match_recursion() {
        for ts in [1u32, 2] {
            let fast = ln_invariant_dimension_series(TwiceSpin(ts), 600);
            let slow = ln_tower_series(TwiceSpin(ts), 600);
            for (m, (a, b)) in fast.iter().zip(&slow).enumerate() {
                if b.is_finite() {
                    assert!((a - b).abs() < 1e-9 * b.abs().max(1.0), "2s={ts} m={m}");
                } else {
                    assert!(a.is_infinite(), "2s={ts} m={m}");
                }
            }
        }
        let exact = invariant_dimension(&SystemSpec::spins(40, TwiceSpin(2)));
        let ln = ln_spin_one_series(40)[40];
        assert!((ln - big_ln(&exact)).abs() < 1e-12);
    }

    fn catalan(n: usize) -> Vec<BigUint> {
        // C_{k+1} = sum_i C_i C_{k-i}
        let mut c = vec![BigUint::one()];
        for k in 0..n {
            let next = (0..=k).map(|i| &c[i] * &c[k - i]).sum();
            c.push(next);
        }
        c
    }

    #[test]
    fn decomposition_of_four_qubits() {
        assert_eq!(qubit_multiplicity(4, TwiceSpin(0)), BigUint::from(2u32));
        assert_eq!(qubit_multiplicity(4, TwiceSpin(2)), BigUint::from(3u32));
        assert_eq!(qubit_multiplicity(4, TwiceSpin(4)), BigUint::from(1u32));
        assert_eq!(qubit_multiplicity(0, TwiceSpin(0)), BigUint::one());
    }

    #[test]
    fn twelve_qubit_singlets_is_catalan_six() {
        assert_eq!(qubit_multiplicity(12, TwiceSpin(0)), BigUint::from(132u32));
        assert_eq!(catalan(6)[6], BigUint::from(132u32));
    }

    #[test]
    fn invalid_parity_or_range_is_zero() {
        assert!(qubit_multiplicity(4, TwiceSpin(1)).is_zero());
        assert!(qubit_multiplicity(4, TwiceSpin(6)).is_zero());
        assert!(log_multiplicity(4, TwiceSpin(1)).is_err());
        assert!(log_multiplicity(3, TwiceSpin(5)).is_err());
    }

    #[test]
    fn spin_tables_from_recursion() {
        let t = MultiplicityTable::exact(SystemSpec::qubits(2), 4096).unwrap();
        assert_eq!(
            t.counts().unwrap(),
            &BTreeMap::from([(TwiceSpin(0), 1u32.into()), (TwiceSpin(2), 1u32.into())])
        );
        let t = MultiplicityTable::exact(SystemSpec::spins(2, TwiceSpin(2)), 4096).unwrap();
        let ones: Vec<_> = t.counts().unwrap().values().cloned().collect();
        assert_eq!(ones, vec![BigUint::one(); 3]);
        // three spin-1: j = 0, 1, 2, 3 with 1, 3, 2, 1
        let t = MultiplicityTable::exact(SystemSpec::spins(3, TwiceSpin(2)), 4096).unwrap();
        let expect: BTreeMap<TwiceSpin, BigUint> = [(0, 1u32), (2, 3), (4, 2), (6, 1)]
            .into_iter()
            .map(|(j, c)| (TwiceSpin(j), c.into()))
            .collect();
        assert_eq!(t.counts().unwrap(), &expect);
    }

    #[test]
    fn exact_mode_respects_threshold() {
        let err = MultiplicityTable::exact(SystemSpec::qubits(100), 50).unwrap_err();
        assert!(matches!(err, Error::ExactBudgetExceeded { .. }));
        let t = MultiplicityTable::new(SystemSpec::qubits(100), 50).unwrap();
        assert!(!t.is_exact());
        assert_eq!(t.support().count(), 51);
    }

    #[test]
    fn unitary_spec_has_no_spin_table() {
        assert!(MultiplicityTable::exact(SystemSpec::unitary(3, 3), 100).is_err());
    }

    #[test]
    fn invariant_dimension_of_small_qubit_systems() {
        for (m, n) in [(2u32, 1u32), (4, 2), (6, 5), (3, 0)] {
            assert_eq!(
                invariant_dimension(&SystemSpec::qubits(m)),
                BigUint::from(n)
            );
        }
        assert_eq!(
            invariant_dimension(&SystemSpec::unitary(3, 6)),
            BigUint::from(5u32)
        );
    }

    #[test]
    fn log_multiplicity_examples() {
        assert!((log_multiplicity(4, TwiceSpin(2)).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert_eq!(log_multiplicity(2, TwiceSpin(2)).unwrap(), 0.0);
        let exact = big_ln(&qubit_multiplicity(2000, TwiceSpin(0)));
        let approx = log_multiplicity(2000, TwiceSpin(0)).unwrap();
        assert!(((approx - exact) / exact).abs() <= 1e-12);
    }

    #[test]
    fn log_multiplicity_agrees_across_support() {
        for m in [1u32, 7, 64, 301, 1000] {
            for tj in (m % 2..=m).step_by(2) {
                let exact = big_ln(&qubit_multiplicity(m, TwiceSpin(tj)));
                let approx = log_multiplicity(m, TwiceSpin(tj)).unwrap();
                let err = if exact == 0.0 {
                    approx.abs()
                } else {
                    ((approx - exact) / exact).abs()
                };
                assert!(err <= 1e-12, "m={m} 2j={tj}: {approx} vs {exact}");
            }
        }
    }

    #[test]
    fn scaled_tower_tracks_exact_tower() {
        let mut exact = ExactTower::new(TwiceSpin(2));
        let mut scaled = ScaledTower::new(TwiceSpin(2));
        for _ in 0..300 {
            exact.step();
            scaled.step();
        }
        for (j, c) in exact.to_map() {
            let e = big_ln(&c);
            match scaled.ln_get(j) {
                Some(s) => assert!((s - e).abs() <= 1e-11 * e.abs().max(1.0), "2j={}", j.0),
                None => panic!("dropped non-negligible entry 2j={}", j.0),
            }
        }
    }

    #[test]
    fn ln_series_matches_exact_invariant_dimensions() {
        let series = ln_invariant_dimension_series(TwiceSpin(3), 40);
        for m in [2u32, 4, 10, 40] {
            let exact = big_ln(&invariant_dimension(&SystemSpec::spins(m, TwiceSpin(3))));
            assert!((series[m as usize] - exact).abs() < 1e-11 * exact.max(1.0));
        }
        assert_eq!(series[3], f64::NEG_INFINITY);
    }

    #[test]
    fn catalan_up_to_1000() {
        let cat = catalan(1000);
        for n in [0usize, 1, 2, 10, 99, 500, 1000] {
            let m = 2 * n as u32;
            assert_eq!(qubit_multiplicity(m, TwiceSpin(0)), cat[n]);
            assert_eq!(binomial(2 * n as u64, n as u64) / (n as u64 + 1), cat[n]);
        }
    }

    #[test]
    fn recursion_equals_closed_form_up_to_64() {
        let mut tower = ExactTower::new(TwiceSpin::HALF);
        for m in 0..=64u32 {
            for tj in 0..=m + 1 {
                assert_eq!(
                    tower.get(TwiceSpin(tj)),
                    qubit_multiplicity(m, TwiceSpin(tj))
                );
            }
            tower.step();
        }
    }

    proptest! {
        #[test]
        fn spin_sum_rule(count in 0u32..24, twice_s in 1u32..5) {
            let t = MultiplicityTable::exact(SystemSpec::spins(count, TwiceSpin(twice_s)), 4096).unwrap();
            let total: BigUint = t.counts().unwrap().iter().map(|(j, c)| c * j.dim()).sum();
            prop_assert_eq!(total, BigUint::from(twice_s + 1).pow(count));
        }

        #[test]
        fn spin_support_is_range_with_parity(count in 0u32..20, twice_s in 1u32..5) {
            let t = MultiplicityTable::exact(SystemSpec::spins(count, TwiceSpin(twice_s)), 4096).unwrap();
            for tj in 0..=count * twice_s + 2 {
                let positive = t.count(TwiceSpin(tj)).unwrap() > BigUint::zero();
                // a single constituent only carries its own spin
                let expected = if count == 1 { tj == twice_s } else { admissible(count, tj, twice_s) };
                prop_assert_eq!(positive, expected);
            }
        }
    }
}
