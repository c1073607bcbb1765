//! Brute-force checks of the closed forms against explicit states.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::config::{Config, LogBase};
use crate::error::{Error, Result};
use crate::measures::{
    entanglement_from_tables, MixtureWeights, SectorIndex, Side, SplitSpec, SplitTables,
};
use crate::spin::TwiceSpin;

use super::singlets::{build_singlet_states, SingletBasis};
use super::state::{
    entanglement_entropy, entropy_of_spectrum, hermitian_spectrum, reduced_mixture_spectrum,
    PureStateVector,
};

/// Agreement required between closed forms and explicit linear algebra.
pub const ORACLE_TOL: f64 = 1e-9;

/// Weight of every basis state of `basis` under a mixture.
pub fn expand_weights(
    basis: &SingletBasis,
    tables: &SplitTables,
    weights: &MixtureWeights<f64>,
) -> Result<Vec<f64>> {
    let p = crate::measures::probabilities_from_tables(tables, weights)?;
    let mut per_sector: BTreeMap<TwiceSpin, usize> = BTreeMap::new();
    for s in &basis.states {
        *per_sector.entry(s.label.twice_j).or_default() += 1;
    }
    Ok(basis
        .states
        .iter()
        .map(|s| match weights {
            MixtureWeights::Full(full) => full.get(&s.label).copied().unwrap_or(0.0),
            _ => {
                p.get(&s.label.twice_j).copied().unwrap_or(0.0)
                    / per_sector[&s.label.twice_j] as f64
            }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub name: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub passed: bool,
}

/// Closed form against oracle for one split and mixture.
#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormReport {
    pub split: SplitSpec,
    pub log_base: LogBase,
    pub basis_size: usize,
    pub comparisons: Vec<Comparison>,
    /// Largest eigenvalue gap between the predicted and computed `rho_A` spectra.
    pub spectrum_deviation: Option<f64>,
    pub passed: bool,
}

impl ClosedFormReport {
    pub fn ensure(self) -> Result<Self> {
        if self.passed {
            return Ok(self);
        }
        let failing: Vec<_> = self
            .comparisons
            .iter()
            .filter(|c| !c.passed)
            .map(|c| {
                format!(
                    "{}: closed form {} vs oracle {}",
                    c.name, c.closed_form, c.oracle
                )
            })
            .collect();
        Err(Error::VerificationFailed(format!(
            "{}:{} split: {}",
            self.split.side_a_count,
            self.split.side_b_count(),
            if failing.is_empty() {
                format!("spectrum deviation {:?}", self.spectrum_deviation)
            } else {
                failing.join("; ")
            }
        )))
    }
}

/// Predicted spectrum of `rho_A` (or `rho_B`) for a uniform or per-sector mixture.
pub fn predicted_reduced_spectrum(
    tables: &SplitTables,
    weights: &MixtureWeights<f64>,
    keep: Side,
    side_dim: usize,
) -> Result<Vec<f64>> {
    let p = crate::measures::probabilities_from_tables(tables, weights)?;
    let mut out = Vec::new();
    for (j, pj) in &p {
        let count = tables
            .table(keep)
            .count(*j)
            .and_then(|c| num_traits::ToPrimitive::to_usize(&c))
            .ok_or(Error::DimensionCapExceeded {
                dim: u64::MAX,
                cap: 0,
            })?;
        let eig = pj / (count as f64 * f64::from(j.dim()));
        out.extend(std::iter::repeat_n(eig, count * j.dim() as usize));
    }
    out.resize(side_dim.max(out.len()), 0.0);
    out.sort_by(|a, b| a.total_cmp(b));
    Ok(out)
}

/// Builds the explicit mixture and compares `S_E`, `S(rho)`, `S(rho_A)`,
/// `S(rho_B)`, mutual information and the `rho_A` spectrum with the closed forms.
pub fn verify_closed_form(
    split: &SplitSpec,
    weights: &MixtureWeights<f64>,
    config: &Config,
) -> Result<ClosedFormReport> {
    let basis = build_singlet_states(split, config.dimension_cap)?;
    let tables = SplitTables::new(split, config.exact_threshold)?;
    verify_closed_form_with(&basis, &tables, weights, config.log_base)
}

pub fn verify_closed_form_with(
    basis: &SingletBasis,
    tables: &SplitTables,
    weights: &MixtureWeights<f64>,
    base: LogBase,
) -> Result<ClosedFormReport> {
    let closed = entanglement_from_tables(tables, weights, base)?;
    let w = expand_weights(basis, tables, weights)?;
    let dims = basis.dims;

    let ensemble: Vec<(f64, &PureStateVector)> = basis
        .states
        .iter()
        .zip(&w)
        .filter(|(_, w)| **w > 0.0)
        .map(|(s, w)| (*w, &s.state))
        .collect();

    let mut s_e = 0.0;
    for (wi, s) in &ensemble {
        s_e += wi * entanglement_entropy(s, dims, base)?;
    }

    // eigenvalues of rho from the weighted Gram matrix of the ensemble
    let k = ensemble.len();
    let gram = DMatrix::from_fn(k, k, |r, c| {
        let (wr, sr) = ensemble[r];
        let (wc, sc) = ensemble[c];
        sr.inner(sc) * Complex64::from((wr * wc).sqrt())
    });
    let s_total = entropy_of_spectrum(&hermitian_spectrum(&gram), base);

    let spec_a = reduced_mixture_spectrum(&ensemble, dims, Side::A)?;
    let spec_b = reduced_mixture_spectrum(&ensemble, dims, Side::B)?;
    let s_a = entropy_of_spectrum(&spec_a, base);
    let s_b = entropy_of_spectrum(&spec_b, base);

    let mut comparisons = Vec::new();
    let mut compare = |name: &str, closed_form: f64, oracle: f64| {
        comparisons.push(Comparison {
            name: name.to_owned(),
            closed_form,
            oracle,
            passed: (closed_form - oracle).abs() <= ORACLE_TOL,
        });
    };
    compare("s_e", closed.s_e, s_e);
    compare("s_total", closed.s_total, s_total);
    if let (Some(ca), Some(cb), Some(mi)) = (closed.s_a, closed.s_b, closed.mutual_information) {
        compare("s_a", ca, s_a);
        compare("s_b", cb, s_b);
        compare("mutual_information", mi, s_a + s_b - s_total);
    }
    compare("basis_size", closed_dimension(tables), basis.len() as f64);

    let spectrum_deviation = match weights {
        MixtureWeights::Full(_) => None,
        _ => {
            let predicted = predicted_reduced_spectrum(tables, weights, Side::A, dims.0)?;
            Some(
                predicted
                    .iter()
                    .zip(&spec_a)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max),
            )
        }
    };
    let passed =
        comparisons.iter().all(|c| c.passed) && spectrum_deviation.is_none_or(|d| d <= ORACLE_TOL);
    Ok(ClosedFormReport {
        split: basis.split,
        log_base: base,
        basis_size: basis.len(),
        comparisons,
        spectrum_deviation,
        passed,
    })
}

fn closed_dimension(tables: &SplitTables) -> f64 {
    tables
        .exact_dimension()
        .and_then(num_traits::ToPrimitive::to_f64)
        .unwrap_or_else(|| tables.ln_dimension().exp())
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// `R`'s diagonal folded back into `Q`.
pub fn haar_unitary(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for c in 0..n {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..n {
            q[(row, c)] *= phase;
        }
    }
    q
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub split: SplitSpec,
    pub trials: usize,
    pub seed: u64,
    pub s_e: f64,
    /// Smallest average reduced entropy seen over all trials.
    pub min_average: f64,
    pub violations: usize,
    pub passed: bool,
}

/// Average reduced entropy of the decomposition `phi_k = sum_i U_ki sqrt(w_i) psi_i`.
pub fn decomposition_average(
    ensemble: &[(f64, &PureStateVector)],
    mixing: &DMatrix<Complex64>,
    dims: (usize, usize),
    base: LogBase,
) -> Result<f64> {
    let dim = ensemble[0].1.dim();
    let mut total = 0.0;
    for k in 0..mixing.nrows() {
        let mut phi = DVector::<Complex64>::zeros(dim);
        for (i, (w, s)) in ensemble.iter().enumerate() {
            phi.axpy(
                mixing[(k, i)] * Complex64::from(w.sqrt()),
                &s.amplitudes,
                Complex64::from(1.0),
            );
        }
        if let Some((norm, state)) = PureStateVector::normalized(phi) {
            total += norm * norm * entanglement_entropy(&state, dims, base)?;
        }
    }
    Ok(total)
}

/// Draws `trials` Haar-random decompositions of the uniform mixture and
/// checks none averages below `S_E`.
pub fn random_decomposition_check(
    split: &SplitSpec,
    trials: usize,
    seed: u64,
    config: &Config,
) -> Result<DecompositionReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let basis = build_singlet_states(split, config.dimension_cap)?;
    let tables = SplitTables::new(split, config.exact_threshold)?;
    let weights = MixtureWeights::Uniform;
    let s_e = entanglement_from_tables::<f64>(&tables, &weights, config.log_base)?.s_e;
    let w = expand_weights(&basis, &tables, &weights)?;
    let ensemble: Vec<(f64, &PureStateVector)> = basis
        .states
        .iter()
        .zip(&w)
        .map(|(s, w)| (*w, &s.state))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_average = f64::INFINITY;
    let mut violations = 0;
    for _ in 0..trials {
        let u = haar_unitary(ensemble.len(), &mut rng);
        let avg = decomposition_average(&ensemble, &u, basis.dims, config.log_base)?;
        if avg < s_e - ORACLE_TOL {
            violations += 1;
        }
        min_average = min_average.min(avg);
    }
    Ok(DecompositionReport {
        split: *split,
        trials,
        seed,
        s_e,
        min_average,
        violations,
        passed: violations == 0,
    })
}

/// Pairwise `tr(rho_X^i rho_X^k)` over the cross-singlet basis, both sides.
#[derive(Clone, Debug, Serialize)]
pub struct OverlapReport {
    pub split: SplitSpec,
    pub labels: Vec<SectorIndex>,
    pub overlaps_a: Vec<Vec<f64>>,
    pub overlaps_b: Vec<Vec<f64>>,
    /// Distinct pairs with nonzero overlap on side A.
    pub nonorthogonal_a: Vec<(usize, usize)>,
    pub nonorthogonal_b: Vec<(usize, usize)>,
    /// Distinct pairs whose side-A reductions coincide.
    pub identical_reductions_a: Vec<(usize, usize)>,
    pub identical_reductions_b: Vec<(usize, usize)>,
    /// Every pair differing in `(j, a)` has orthogonal side-A supports.
    pub a_supports_orthogonal_across_ja: bool,
    pub b_supports_orthogonal_across_jb: bool,
    /// Pairwise orthogonal reductions on that side.
    pub locally_orthogonal_a: bool,
    pub locally_orthogonal_b: bool,
}

/// `tr(rho_A^i rho_A^k) = ||Psi_i^dag Psi_k||_F^2` with `rho_A^i = Psi_i Psi_i^dag`.
fn overlap_matrix(mats: &[DMatrix<Complex64>]) -> Vec<Vec<f64>> {
    let n = mats.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in i..n {
            let v = (mats[i].adjoint() * &mats[k]).norm_squared();
            out[i][k] = v;
            out[k][i] = v;
        }
    }
    out
}

pub fn local_orthogonality_report(split: &SplitSpec, config: &Config) -> Result<OverlapReport> {
    let basis = build_singlet_states(split, config.dimension_cap)?;
    let dims = basis.dims;
    let psi_a: Vec<DMatrix<Complex64>> = basis
        .states
        .iter()
        .map(|s| s.state.as_matrix(dims))
        .collect::<Result<_>>()?;
    // reducing onto B uses Psi^T
    let psi_b: Vec<DMatrix<Complex64>> = psi_a.iter().map(|m| m.transpose()).collect();
    let overlaps_a = overlap_matrix(&psi_a);
    let overlaps_b = overlap_matrix(&psi_b);
    let labels: Vec<SectorIndex> = basis.states.iter().map(|s| s.label).collect();
    const ZERO: f64 = 1e-12;
    let n = labels.len();
    let pairs = || (0..n).flat_map(move |i| ((i + 1)..n).map(move |k| (i, k)));
    let nonzero = |m: &Vec<Vec<f64>>| pairs().filter(|&(i, k)| m[i][k] > ZERO).collect::<Vec<_>>();
    // ||rho_i - rho_k||_F^2 from the overlaps
    let identical = |m: &Vec<Vec<f64>>| {
        pairs()
            .filter(|&(i, k)| (m[i][i] + m[k][k] - 2.0 * m[i][k]).abs() < ORACLE_TOL)
            .collect::<Vec<_>>()
    };
    let nonorthogonal_a = nonzero(&overlaps_a);
    let nonorthogonal_b = nonzero(&overlaps_b);
    let a_ok = pairs()
        .filter(|&(i, k)| (labels[i].twice_j, labels[i].a) != (labels[k].twice_j, labels[k].a))
        .all(|(i, k)| overlaps_a[i][k] <= ZERO);
    let b_ok = pairs()
        .filter(|&(i, k)| (labels[i].twice_j, labels[i].b) != (labels[k].twice_j, labels[k].b))
        .all(|(i, k)| overlaps_b[i][k] <= ZERO);
    Ok(OverlapReport {
        split: *split,
        identical_reductions_a: identical(&overlaps_a),
        identical_reductions_b: identical(&overlaps_b),
        locally_orthogonal_a: nonorthogonal_a.is_empty(),
        locally_orthogonal_b: nonorthogonal_b.is_empty(),
        nonorthogonal_a,
        nonorthogonal_b,
        a_supports_orthogonal_across_ja: a_ok,
        b_supports_orthogonal_across_jb: b_ok,
        labels,
        overlaps_a,
        overlaps_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> Config {
        Config {
            log_base: LogBase::E,
            ..Config::default()
        }
    }

    #[test]
    fn four_qubit_closed_form() {
        let r =
            verify_closed_form(&SplitSpec::qubits(2, 2), &MixtureWeights::Uniform, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
        let s_e = r.comparisons.iter().find(|c| c.name == "s_e").unwrap();
        assert!((s_e.oracle - 0.5 * 3f64.ln()).abs() < 1e-12);
        let s_a = r.comparisons.iter().find(|c| c.name == "s_a").unwrap();
        assert!((s_a.oracle - 0.5 * 12f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn two_qubit_closed_form_in_bits() {
        let r = verify_closed_form(
            &SplitSpec::qubits(1, 1),
            &MixtureWeights::Uniform,
            &Config::default(),
        )
        .unwrap();
        assert!(r.passed);
        assert!((r.comparisons[0].oracle - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eight_qubit_closed_form() {
        verify_closed_form(&SplitSpec::qubits(4, 4), &MixtureWeights::Uniform, &cfg())
            .unwrap()
            .ensure()
            .unwrap();
    }

    #[test]
    fn weighted_mixtures() {
        let split = SplitSpec::qubits(3, 3);
        let per_sector =
            MixtureWeights::PerSector(BTreeMap::from([(TwiceSpin(1), 0.3), (TwiceSpin(3), 0.7)]));
        verify_closed_form(&split, &per_sector, &cfg())
            .unwrap()
            .ensure()
            .unwrap();
        let full = MixtureWeights::Full(BTreeMap::from([
            (
                SectorIndex {
                    twice_j: TwiceSpin(1),
                    a: 0,
                    b: 1,
                },
                0.1,
            ),
            (
                SectorIndex {
                    twice_j: TwiceSpin(1),
                    a: 1,
                    b: 1,
                },
                0.5,
            ),
            (
                SectorIndex {
                    twice_j: TwiceSpin(3),
                    a: 0,
                    b: 0,
                },
                0.4,
            ),
        ]));
        let r = verify_closed_form(&split, &full, &cfg()).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.spectrum_deviation.is_none());
    }

    #[test]
    fn spin_one_closed_form() {
        let split = SplitSpec::new(crate::spin::SystemSpec::spins(4, TwiceSpin(2)), 2).unwrap();
        verify_closed_form(&split, &MixtureWeights::Uniform, &cfg())
            .unwrap()
            .ensure()
            .unwrap();
        let split = SplitSpec::new(crate::spin::SystemSpec::spins(4, TwiceSpin(3)), 1).unwrap();
        verify_closed_form(&split, &MixtureWeights::Uniform, &cfg())
            .unwrap()
            .ensure()
            .unwrap();
    }

    #[test]
    fn identity_mixing_recovers_s_e() {
        let split = SplitSpec::qubits(3, 3);
        let basis = build_singlet_states(&split, 1 << 14).unwrap();
        let tables = SplitTables::new(&split, 4096).unwrap();
        let w = expand_weights(&basis, &tables, &MixtureWeights::Uniform).unwrap();
        let ensemble: Vec<_> = basis
            .states
            .iter()
            .zip(&w)
            .map(|(s, w)| (*w, &s.state))
            .collect();
        let id = DMatrix::<Complex64>::identity(ensemble.len(), ensemble.len());
        let avg = decomposition_average(&ensemble, &id, basis.dims, LogBase::E).unwrap();
        let s_e = entanglement_from_tables::<f64>(&tables, &MixtureWeights::Uniform, LogBase::E)
            .unwrap()
            .s_e;
        assert!((avg - s_e).abs() < 1e-12);
    }

    #[test]
    fn haar_matrices_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = haar_unitary(7, &mut rng);
        let err = (&u * u.adjoint() - DMatrix::<Complex64>::identity(7, 7)).camax();
        assert!(err < 1e-12);
    }

    #[test]
    fn concavity_holds_on_small_splits() {
        for (a, b) in [(2u32, 2u32), (2, 4)] {
            let r = random_decomposition_check(&SplitSpec::qubits(a, b), 100, 42, &cfg()).unwrap();
            assert!(r.passed, "{r:?}");
            assert!(r.min_average >= r.s_e - ORACLE_TOL);
        }
        assert!(random_decomposition_check(&SplitSpec::qubits(1, 1), 0, 0, &cfg()).is_err());
    }

    #[test]
    fn six_qubit_overlap_structure() {
        let r = local_orthogonality_report(&SplitSpec::qubits(2, 4), &cfg()).unwrap();
        assert!(r.a_supports_orthogonal_across_ja);
        assert!(!r.locally_orthogonal_a);
        assert!(!r.identical_reductions_a.is_empty());
        for &(i, k) in &r.nonorthogonal_a {
            let (li, lk) = (r.labels[i], r.labels[k]);
            assert_eq!((li.twice_j, li.a), (lk.twice_j, lk.a));
            let expect = 1.0 / f64::from(li.twice_j.dim());
            assert!((r.overlaps_a[i][k] - expect).abs() < 1e-12);
        }
        // different j never overlap
        for i in 0..r.labels.len() {
            for k in 0..r.labels.len() {
                if r.labels[i].twice_j != r.labels[k].twice_j {
                    assert!(r.overlaps_a[i][k] < 1e-12);
                }
            }
        }
    }

    #[test]
    fn four_qubit_supports_are_orthogonal() {
        let r = local_orthogonality_report(&SplitSpec::qubits(2, 2), &cfg()).unwrap();
        assert!(r.locally_orthogonal_a && r.locally_orthogonal_b);
        assert_eq!(r.labels.len(), 2);
    }
}
