//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use spinnet::asymptotics::{entanglement_scaling_scan, entropy_law_scan, jmax_scan, log_spaced};
use spinnet::multiplicity::{binomial, ExactTower};
use spinnet::oracle::checks::{
    local_orthogonality_report, random_decomposition_check, verify_closed_form_with, ORACLE_TOL,
};
use spinnet::oracle::{build_singlet_states, su_m_invariance_residual, su_m_invariant_basis};
use spinnet::unitary::rectangular_tableaux_count;
use spinnet::{
    entanglement, invariant_dimension, qubit_multiplicity, simulate, su_m_invariant_dimension,
    Config, LogBase, MixtureWeights, MultiplicityTable, SplitSpec, SplitTables, SystemSpec,
    TwiceSpin,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent <= budget, || {
        format!("took {spent:.2?}, budget {budget:?}")
    })
}

/// Invariant dimension for small systems and exact agreement of the closed
/// form with the coupling recursion for every count up to 2000.
fn dimension_formulas() -> Outcome {
    let start = Instant::now();
    ensure(
        invariant_dimension(&SystemSpec::qubits(2)) == BigUint::one(),
        || "N(2) != 1".into(),
    )?;
    ensure(
        invariant_dimension(&SystemSpec::qubits(4)) == BigUint::from(2u32),
        || "N(4) != 2".into(),
    )?;
    let four = MultiplicityTable::exact(SystemSpec::qubits(4), 4096).map_err(|e| e.to_string())?;
    let expect: BTreeMap<TwiceSpin, BigUint> = [(0u32, 2u32), (2, 3), (4, 1)]
        .into_iter()
        .map(|(j, c)| (TwiceSpin(j), c.into()))
        .collect();
    ensure(four.counts() == Some(&expect), || {
        format!("4-qubit table {:?}", four.counts())
    })?;

    let mut tower = ExactTower::new(TwiceSpin::HALF);
    for m in 1..=2000u32 {
        tower.step();
        if m % 2 == 0 {
            let recursion = tower.get(TwiceSpin::ZERO);
            let closed = qubit_multiplicity(m, TwiceSpin::ZERO);
            ensure(recursion == closed, || format!("mismatch at 2n = {m}"))?;
        }
    }
    within_budget(start, Duration::from_secs(10))?;
    Ok(format!(
        "N(2)=1, N(4)=2, n <= 1000 bitwise equal in {:.2?}",
        start.elapsed()
    ))
}

fn sum_rules() -> Outcome {
    for n in 0..=64u32 {
        let table =
            MultiplicityTable::exact(SystemSpec::qubits(2 * n), 4096).map_err(|e| e.to_string())?;
        let counts = table.counts().expect("exact");
        let weighted: BigUint = counts.iter().map(|(j, c)| c * j.dim()).sum();
        let plain: BigUint = counts.values().sum();
        ensure(weighted == BigUint::from(4u32).pow(n), || {
            format!("dimension sum fails at n = {n}")
        })?;
        ensure(plain == binomial(u64::from(2 * n), u64::from(n)), || {
            format!("count sum fails at n = {n}")
        })?;
    }
    let mut splits = 0;
    for total in 1..=64u32 {
        let whole = invariant_dimension(&SystemSpec::qubits(total));
        for a in 0..=total {
            let ta =
                MultiplicityTable::exact(SystemSpec::qubits(a), 4096).map_err(|e| e.to_string())?;
            let tb = MultiplicityTable::exact(SystemSpec::qubits(total - a), 4096)
                .map_err(|e| e.to_string())?;
            let ca = ta.counts().expect("exact");
            let cb = tb.counts().expect("exact");
            let split: BigUint = ca
                .iter()
                .filter_map(|(j, c)| cb.get(j).map(|d| c * d))
                .sum();
            ensure(split == whole, || {
                format!("split identity fails at {a}:{}", total - a)
            })?;
            splits += 1;
        }
    }
    Ok(format!(
        "n <= 64 sum rules exact; split identity on {splits} splits"
    ))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let cfg = Config {
        log_base: LogBase::E,
        ..Config::default()
    };
    let mut checked = 0;
    let mut worst: f64 = 0.0;
    for total in (2..=12u32).step_by(2) {
        for a in 0..=total {
            let split = SplitSpec::qubits(a, total - a);
            let basis =
                build_singlet_states(&split, cfg.dimension_cap).map_err(|e| e.to_string())?;
            let tables =
                SplitTables::new(&split, cfg.exact_threshold).map_err(|e| e.to_string())?;
            let report =
                verify_closed_form_with(&basis, &tables, &MixtureWeights::Uniform, cfg.log_base)
                    .map_err(|e| e.to_string())?;
            let report = report.ensure().map_err(|e| e.to_string())?;
            for c in &report.comparisons {
                if c.name != "basis_size" {
                    worst = worst.max((c.closed_form - c.oracle).abs());
                }
            }
            worst = worst.max(report.spectrum_deviation.unwrap_or(0.0));
            let n = invariant_dimension(&SystemSpec::qubits(total))
                .to_usize()
                .unwrap();
            ensure(basis.len() == n, || {
                format!("{a}:{} has {} singlets, N = {n}", total - a, basis.len())
            })?;
            checked += 1;
        }
    }
    let twelve = build_singlet_states(&SplitSpec::qubits(6, 6), cfg.dimension_cap)
        .map_err(|e| e.to_string())?;
    ensure(twelve.len() == 132, || {
        format!("{} singlets at 12 qubits", twelve.len())
    })?;
    within_budget(start, Duration::from_secs(300))?;
    Ok(format!(
        "{checked} splits, max deviation {worst:.1e} <= {ORACLE_TOL:.0e}, 132 singlets at 12 qubits, {:.2?}",
        start.elapsed()
    ))
}

fn concavity() -> Outcome {
    let cfg = Config {
        log_base: LogBase::E,
        ..Config::default()
    };
    let mut min_gap = f64::INFINITY;
    let mut splits = 0;
    for total in (2..=8u32).step_by(2) {
        for a in 1..total {
            let r = random_decomposition_check(
                &SplitSpec::qubits(a, total - a),
                100,
                1000 + u64::from(10 * total + a),
                &cfg,
            )
            .map_err(|e| e.to_string())?;
            ensure(r.passed, || {
                format!(
                    "{a}:{}: {} violations, min {}",
                    total - a,
                    r.violations,
                    r.min_average
                )
            })?;
            min_gap = min_gap.min(r.min_average - r.s_e);
            splits += 1;
        }
    }
    Ok(format!(
        "{splits} splits x 100 decompositions, min(average - S_E) = {min_gap:.3e}"
    ))
}

fn entropy_law() -> Outcome {
    let ns = log_spaced(1_000, 100_000, 60);
    ensure(ns.len() >= 50, || format!("only {} points", ns.len()))?;
    let qubit = entropy_law_scan(&ns, TwiceSpin::HALF, LogBase::E).map_err(|e| e.to_string())?;
    let spin1 = entropy_law_scan(&ns, TwiceSpin::ONE, LogBase::E).map_err(|e| e.to_string())?;
    let s_half = qubit.fit.ok_or("no fit")?.slope;
    let s_one = spin1.fit.ok_or("no fit")?.slope;
    let rel = |s: f64| ((s + 1.5) / 1.5).abs();
    ensure(rel(s_half) <= 0.03, || format!("spin-1/2 slope {s_half}"))?;
    ensure(rel(s_one) <= 0.05, || format!("spin-1 slope {s_one}"))?;
    Ok(format!(
        "{} points; slope {s_half:.5} (spin 1/2), {s_one:.5} (spin 1)",
        ns.len()
    ))
}

fn peak_estimate() -> Outcome {
    let ns = log_spaced(10, 10_000, 60);
    let scan = jmax_scan(&ns, &Config::default()).map_err(|e| e.to_string())?;
    let diff = scan.series("abs_diff").ok_or("missing column")?;
    let (worst_idx, worst) =
        diff.iter().copied().enumerate().fold(
            (0, 0.0f64),
            |acc, (i, d)| if d > acc.1 { (i, d) } else { acc },
        );
    ensure(worst <= 1.0, || {
        format!("n = {} off by {worst}", ns[worst_idx])
    })?;
    Ok(format!(
        "{} sizes, max |exact - estimate| = {worst:.3} at n = {}",
        ns.len(),
        ns[worst_idx]
    ))
}

fn two_qubit_split() -> Outcome {
    let r = entanglement::<f64>(
        &SplitSpec::qubits(2, 9_998),
        &MixtureWeights::Uniform,
        &Config::default(),
    )
    .map_err(|e| e.to_string())?;
    let p0 = r.p.get(&TwiceSpin::ZERO).copied().unwrap_or(0.0);
    let p1 = r.p.get(&TwiceSpin::ONE).copied().unwrap_or(0.0);
    let target = 0.75 * 3f64.log2();
    ensure((p0 - 0.25).abs() <= 1e-3, || format!("p_0 = {p0}"))?;
    ensure((p1 - 0.75).abs() <= 1e-3, || format!("p_1 = {p1}"))?;
    ensure((r.s_e - target).abs() <= 2e-3 * 3f64.log2(), || {
        format!("S_E = {}", r.s_e)
    })?;
    Ok(format!(
        "p_0 = {p0:.6}, p_1 = {p1:.6}, S_E = {:.6} bits (target {target:.6})",
        r.s_e
    ))
}

fn factor_three() -> Outcome {
    let ns = [100, 1_000, 10_000, 100_000];
    let scan = entanglement_scaling_scan(&ns, &Config::default()).map_err(|e| e.to_string())?;
    let f = scan.series("factor3").ok_or("missing column")?;
    ensure(f.windows(2).all(|w| w[1] > w[0]), || {
        format!("not increasing: {f:?}")
    })?;
    ensure(f.iter().all(|&x| x < 3.0), || {
        format!("overshoots 3: {f:?}")
    })?;
    ensure((2.7..=3.3).contains(&f[3]), || {
        format!("I/S_E = {} at n = 1e5", f[3])
    })?;
    Ok(format!(
        "I/S_E = {:.4}, {:.4}, {:.4}, {:.4}",
        f[0], f[1], f[2], f[3]
    ))
}

fn half_log_scaling() -> Outcome {
    let ns = [1_000, 100_000];
    let scan = entanglement_scaling_scan(&ns, &Config::default()).map_err(|e| e.to_string())?;
    let r = scan.series("ratio").ok_or("missing column")?;
    ensure((0.8..=1.2).contains(&r[1]), || {
        format!("ratio {} at n = 1e5", r[1])
    })?;
    ensure((r[1] - 1.0).abs() < (r[0] - 1.0).abs(), || {
        format!("no improvement: {r:?}")
    })?;
    Ok(format!(
        "E_F / (log n / 2) = {:.5} at 1e3, {:.5} at 1e5",
        r[0], r[1]
    ))
}

fn distillation() -> Outcome {
    let cfg = Config::default();
    let split = SplitSpec::qubits(2, 2);
    let run = simulate(&split, &MixtureWeights::Uniform, 1_000_000, 7, &cfg)
        .map_err(|e| e.to_string())?;
    let target = 0.5 * 3f64.log2();
    let gap = (run.yield_mean - target).abs();
    ensure(gap <= 3.0 * run.yield_stderr, || {
        format!("mean {} stderr {}", run.yield_mean, run.yield_stderr)
    })?;
    let again = simulate(&split, &MixtureWeights::Uniform, 1_000_000, 7, &cfg)
        .map_err(|e| e.to_string())?;
    ensure(run == again, || "rerun with the same seed differs".into())?;
    Ok(format!(
        "mean {:.6} +- {:.6} bits vs {target:.6} ({:.2} sigma), reproducible",
        run.yield_mean,
        run.yield_stderr,
        gap / run.yield_stderr
    ))
}

fn unitary_groups() -> Outcome {
    for (rank, m, expect) in [(3u32, 3u32, 1u32), (3, 6, 5)] {
        let counted = su_m_invariant_dimension(rank, m);
        ensure(counted == BigUint::from(expect), || {
            format!("SU({rank}) m={m}: {counted}")
        })?;
        let hook = rectangular_tableaux_count(rank, m);
        ensure(hook == counted, || {
            format!("hook length gives {hook} for SU({rank}) m={m}")
        })?;
        let basis = su_m_invariant_basis(rank, m, 1 << 14).map_err(|e| e.to_string())?;
        ensure(basis.vectors.len() == expect as usize, || {
            format!("null space {} for SU({rank}) m={m}", basis.vectors.len())
        })?;
        let residual = su_m_invariance_residual(&basis);
        ensure(residual < 1e-9, || format!("generator residual {residual}"))?;
    }
    for m in 0..=30u32 {
        ensure(
            su_m_invariant_dimension(2, m) == qubit_multiplicity(m, TwiceSpin::ZERO),
            || format!("SU(2) m={m}"),
        )?;
    }
    Ok("SU(3): 1 and 5 by counting, hook length and null space; SU(2) = qubits for m <= 30".into())
}

fn local_orthogonality() -> Outcome {
    let cfg = Config {
        log_base: LogBase::E,
        ..Config::default()
    };
    let r =
        local_orthogonality_report(&SplitSpec::qubits(2, 4), &cfg).map_err(|e| e.to_string())?;
    let &(i, k) = r
        .identical_reductions_a
        .iter()
        .max_by_key(|(i, _)| r.labels[*i].twice_j)
        .ok_or("no pair with equal side-A reductions")?;
    for &(x, y) in &r.identical_reductions_a {
        let expect = 1.0 / f64::from(r.labels[x].twice_j.dim());
        ensure((r.overlaps_a[x][y] - expect).abs() < 1e-12, || {
            format!("overlap {}", r.overlaps_a[x][y])
        })?;
    }
    let (li, lk) = (r.labels[i], r.labels[k]);
    let expect = 1.0 / f64::from(li.twice_j.dim());
    ensure((r.overlaps_a[i][k] - expect).abs() < 1e-12, || {
        format!("overlap {}", r.overlaps_a[i][k])
    })?;
    ensure(r.overlaps_a[i][k] > 0.0, || "zero overlap".into())?;
    Ok(format!(
        "{} pair(s) share rho_A, e.g. (j={}, a={}, b={}) vs (b={}) with overlap {:.4}",
        r.identical_reductions_a.len(),
        li.twice_j,
        li.a,
        li.b,
        lk.b,
        r.overlaps_a[i][k]
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("dimension formulas", dimension_formulas),
        ("sum rules and split identity", sum_rules),
        ("oracle equivalence", oracle_equivalence),
        ("concavity inequality", concavity),
        ("entropy law slope", entropy_law),
        ("peak spin estimate", peak_estimate),
        ("two-qubit split", two_qubit_split),
        ("factor three", factor_three),
        ("half-log scaling", half_log_scaling),
        ("distillation", distillation),
        ("unitary groups", unitary_groups),
        ("local orthogonality", local_orthogonality),
    ];
    let mut failed = 0;
    for (idx, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let spent = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{spent:.2?}]", idx + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{spent:.2?}]", idx + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
