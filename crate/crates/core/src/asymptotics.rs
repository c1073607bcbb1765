//! Large-system laws: entropy with its logarithmic correction, the peak
//! multiplicity spin, half-log entanglement growth and the ratio of mutual
//! information to entanglement.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Config, LogBase};
use crate::error::{Error, Result};
use crate::measures::{entanglement_from_tables, MixtureWeights, SplitSpec, SplitTables};
use crate::multiplicity::{ln_invariant_dimension_series, log_multiplicity, MultiplicityTable};
use crate::scalar::Real;
use crate::spin::{SystemSpec, TwiceSpin};

/// `2n ln 2 - (3/2) ln n` in the requested base; no constant term.
pub fn entropy_asymptote<T: Real>(n: f64, base: LogBase) -> T {
    let nats = 2.0 * n * std::f64::consts::LN_2 - 1.5 * n.ln();
    base.from_nats(T::of(nats))
}

/// Estimated spin of the largest multiplicity for `n` qubits: `sqrt(n + 2) / 2 - 1`.
pub fn jmax_estimate(n: u64) -> f64 {
    0.5 * ((n + 2) as f64).sqrt() - 1.0
}

/// First key with the largest value; ties go to the smaller spin.
pub fn argmax_twice_j<V: PartialOrd>(
    entries: impl IntoIterator<Item = (TwiceSpin, V)>,
) -> Option<TwiceSpin> {
    let mut best: Option<(TwiceSpin, V)> = None;
    for (j, v) in entries {
        match &best {
            Some((_, b)) if v.partial_cmp(b) != Some(std::cmp::Ordering::Greater) => {}
            _ => best = Some((j, v)),
        }
    }
    best.map(|(j, _)| j)
}

/// Spin of the largest `c_j^(n)` over `n` qubits.
pub fn jmax_exact(n: u32, exact_threshold: u32) -> TwiceSpin {
    let table = MultiplicityTable::new(SystemSpec::qubits(n), exact_threshold)
        .expect("qubit tables always build");
    let best = match table.counts() {
        Some(counts) => argmax_twice_j(counts.iter().map(|(j, c)| (*j, c))),
        None => argmax_twice_j(table.ln_counts().iter().map(|(j, l)| (*j, *l))),
    };
    best.expect("qubit tables are never empty")
}

/// Ordinary least-squares line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

pub fn ols(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    Some(LinearFit {
        slope,
        intercept,
        residual: (sse / n).sqrt(),
    })
}

/// Series over a list of sizes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub law: String,
    pub log_base: LogBase,
    pub n_values: Vec<u64>,
    pub quantities: BTreeMap<String, Vec<f64>>,
    pub fit: Option<LinearFit>,
}

impl ScanResult {
    fn new(law: &str, base: LogBase, n_values: &[u64]) -> Self {
        ScanResult {
            law: law.to_owned(),
            log_base: base,
            n_values: n_values.to_vec(),
            quantities: BTreeMap::new(),
            fit: None,
        }
    }

    fn push(&mut self, name: &str, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.n_values.len());
        self.quantities.insert(name.to_owned(), values);
    }

    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.quantities.get(name).map(Vec::as_slice)
    }
}

/// About `points` integers spaced evenly in `ln n` over `[lo, hi]`, deduplicated.
pub fn log_spaced(lo: u64, hi: u64, points: usize) -> Vec<u64> {
    assert!(lo >= 1 && hi >= lo);
    if points <= 1 || lo == hi {
        return vec![lo];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut out: Vec<u64> = (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp().round() as u64)
        .map(|v| v.clamp(lo, hi))
        .collect();
    out.dedup();
    out
}

fn check_ascending(n_values: &[u64]) -> Result<()> {
    if n_values.is_empty() || n_values.windows(2).any(|w| w[0] >= w[1]) || n_values[0] == 0 {
        return Err(Error::InvalidArgument(
            "scan sizes must be positive and strictly ascending".into(),
        ));
    }
    Ok(())
}

/// `ln N(2n)` against `ln n` for `2n` constituents of spin `s`, with the
/// residual `ln N - 2n ln(2s + 1)` fitted linearly in `ln n`.
pub fn entropy_law_scan(n_values: &[u64], twice_s: TwiceSpin, base: LogBase) -> Result<ScanResult> {
    check_ascending(n_values)?;
    let ln_dims: Vec<f64> = if twice_s == TwiceSpin::HALF {
        n_values
            .par_iter()
            .map(|&n| log_multiplicity(2 * n as u32, TwiceSpin::ZERO))
            .collect::<Result<_>>()?
    } else {
        let max = *n_values.last().expect("nonempty");
        let series = ln_invariant_dimension_series(twice_s, 2 * max as u32);
        n_values.iter().map(|&n| series[2 * n as usize]).collect()
    };
    let ln_local = f64::from(twice_s.dim()).ln();
    let log_n: Vec<f64> = n_values.iter().map(|&n| (n as f64).ln()).collect();
    let residual: Vec<f64> = n_values
        .iter()
        .zip(&ln_dims)
        .map(|(&n, l)| l - 2.0 * n as f64 * ln_local)
        .collect();
    let conv = |v: &[f64]| v.iter().map(|&x| base.from_nats(x)).collect::<Vec<f64>>();
    let mut scan = ScanResult::new("entropy", base, n_values);
    scan.fit = ols(&conv(&log_n), &conv(&residual));
    scan.push("log_n", conv(&log_n));
    scan.push("log_dimension", conv(&ln_dims));
    scan.push("residual", conv(&residual));
    if twice_s == TwiceSpin::HALF {
        let asym: Vec<f64> = n_values
            .iter()
            .map(|&n| entropy_asymptote::<f64>(n as f64, base))
            .collect();
        let offset = conv(&ln_dims)
            .iter()
            .zip(&asym)
            .map(|(a, b)| a - b)
            .collect();
        scan.push("asymptote", asym);
        scan.push("offset", offset);
    }
    Ok(scan)
}

/// Entanglement of the `n:n` qubit split against `(1/2) log n`, plus the
/// mutual-information ratio `I / S_E`.
pub fn entanglement_scaling_scan(n_values: &[u64], config: &Config) -> Result<ScanResult> {
    check_ascending(n_values)?;
    let base = config.log_base;
    // (e_f, half log n, mutual information, s_a)
    type Row = (f64, f64, f64, f64);
    let rows: Vec<Row> = n_values
        .par_iter()
        .map(|&n| {
            let n = n as u32;
            let tables = SplitTables::new(&SplitSpec::qubits(n, n), config.exact_threshold)?;
            let r = entanglement_from_tables::<f64>(&tables, &MixtureWeights::Uniform, base)?;
            let mi = r.mutual_information.expect("uniform mixture");
            let half_log = base.from_nats(0.5 * f64::from(n).ln());
            Ok((r.e_f, half_log, mi, r.s_a.expect("uniform mixture")))
        })
        .collect::<Result<_>>()?;
    let mut scan = ScanResult::new("entanglement", base, n_values);
    let col = |f: &dyn Fn(&Row) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    scan.push("e_f", col(&|r| r.0));
    scan.push("half_log_n", col(&|r| r.1));
    scan.push("ratio", col(&|r| r.0 / r.1));
    scan.push("mutual_information", col(&|r| r.2));
    scan.push("factor3", col(&|r| r.2 / r.0));
    scan.push("s_a", col(&|r| r.3));
    Ok(scan)
}

/// Exact peak spin of `c_j^(n)` against the square-root estimate.
pub fn jmax_scan(n_values: &[u64], config: &Config) -> Result<ScanResult> {
    check_ascending(n_values)?;
    let exact: Vec<f64> = n_values
        .par_iter()
        .map(|&n| jmax_exact(n as u32, config.exact_threshold).as_f64())
        .collect();
    let estimate: Vec<f64> = n_values.iter().map(|&n| jmax_estimate(n)).collect();
    let diff = exact
        .iter()
        .zip(&estimate)
        .map(|(a, b)| (a - b).abs())
        .collect();
    let mut scan = ScanResult::new("jmax", config.log_base, n_values);
    scan.push("jmax_exact", exact);
    scan.push("jmax_estimate", estimate);
    scan.push("abs_diff", diff);
    Ok(scan)
}
