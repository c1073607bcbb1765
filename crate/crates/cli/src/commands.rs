use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use spinnet::asymptotics::{entanglement_scaling_scan, entropy_law_scan, jmax_scan, log_spaced};
use spinnet::oracle::checks::{
    local_orthogonality_report, random_decomposition_check, OverlapReport,
};
use spinnet::oracle::{su_m_invariance_residual, su_m_invariant_basis, verify_closed_form};
use spinnet::unitary::rectangular_tableaux_count;
use spinnet::{
    entanglement, simulate, su_m_invariant_dimension, Config, ConstituentKind, Error,
    MixtureWeights, MultiplicityTable, ScanResult, SplitSpec, SplitTables, SystemSpec, TwiceSpin,
    Weights,
};

use crate::output::{num, opt, Rendered};
use crate::{CliError, Law, VerifyArgs};

/// Largest size accepted by `scan`.
const MAX_SCAN_N: u64 = 100_000_000;
/// Largest constituent count for the generic-spin recursion in scans.
const MAX_TOWER_COUNT: u64 = 50_000;

fn split_json(split: &SplitSpec) -> Value {
    json!({
        "system": split.total,
        "side_a": split.side_a_count,
        "side_b": split.side_b_count(),
    })
}

fn big(x: &BigUint) -> String {
    x.to_str_radix(10)
}

pub fn dims(system: &SystemSpec, cfg: &Config) -> Result<Rendered, CliError> {
    let base = cfg.log_base;
    if let ConstituentKind::FundamentalOfUnitary { rank } = system.kind {
        let n = su_m_invariant_dimension(rank, system.constituent_count);
        let json = json!({
            "command": "dims",
            "system": system,
            "log_base": base,
            "exact": true,
            "invariant_dimension": big(&n),
            "multiplicities": [],
        });
        let mut r = Rendered::new(json, &["twice_j", "j", "count", "log_count"]);
        r.meta("command", "dims");
        r.meta("invariant_dimension", big(&n));
        return Ok(r);
    }
    let table = MultiplicityTable::new(*system, cfg.exact_threshold)?;
    let ln_n = table.ln_count(TwiceSpin::ZERO).unwrap_or(f64::NEG_INFINITY);
    let n = if table.is_exact() {
        Some(table.count(TwiceSpin::ZERO).unwrap_or_default())
    } else {
        None
    };
    let rows: Vec<(TwiceSpin, Option<String>, f64)> = table
        .ln_counts()
        .iter()
        .map(|(j, l)| (*j, table.count(*j).map(|c| big(&c)), base.from_nats(*l)))
        .collect();
    let json = json!({
        "command": "dims",
        "system": system,
        "log_base": base,
        "exact": table.is_exact(),
        "invariant_dimension": n.as_ref().map(big),
        "log_invariant_dimension": finite(base.from_nats(ln_n)),
        "multiplicities": rows.iter().map(|(j, c, l)| json!({
            "twice_j": j.twice(),
            "j": j.to_string(),
            "count": c,
            "log_count": l,
        })).collect::<Vec<_>>(),
    });
    let mut r = Rendered::new(json, &["twice_j", "j", "count", "log_count"]);
    r.meta("command", "dims");
    r.meta("log_base", base);
    r.meta(
        "invariant_dimension",
        n.as_ref().map(big).unwrap_or_default(),
    );
    r.meta("log_invariant_dimension", num(base.from_nats(ln_n)));
    for (j, c, l) in rows {
        r.row(vec![
            j.twice().to_string(),
            j.to_string(),
            c.unwrap_or_default(),
            num(l),
        ]);
    }
    Ok(r)
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn entangle(split: &SplitSpec, weights: &Weights, cfg: &Config) -> Result<Rendered, CliError> {
    let report = entanglement::<f64>(split, weights, cfg)?;
    let tables = SplitTables::new(split, cfg.exact_threshold)?;
    let base = cfg.log_base;
    let count = |side: &MultiplicityTable, j: TwiceSpin| side.count(j).map(|c| big(&c));
    let sectors: Vec<Value> = report
        .p
        .iter()
        .map(|(j, p)| {
            json!({
                "twice_j": j.twice(),
                "j": j.to_string(),
                "probability": p,
                "count_a": count(tables.table(spinnet::Side::A), *j),
                "count_b": count(tables.table(spinnet::Side::B), *j),
            })
        })
        .collect();
    let mode = match weights {
        MixtureWeights::Uniform => "uniform",
        MixtureWeights::PerSector(_) => "per_sector",
        MixtureWeights::Full(_) => "full",
    };
    let json = json!({
        "command": "entangle",
        "split": split_json(split),
        "mixture": mode,
        "log_base": base,
        "unit": base.unit(),
        "invariant_dimension": tables.exact_dimension().map(big),
        "log_invariant_dimension": base.from_nats(tables.ln_dimension()),
        "s_e": report.s_e,
        "e_f": report.e_f,
        "e_d": report.e_d,
        "s_a": report.s_a,
        "s_b": report.s_b,
        "s_total": report.s_total,
        "mutual_information": report.mutual_information,
        "unentangled_fraction": report.unentangled_fraction,
        "sectors": sectors,
    });
    let mut r = Rendered::new(json, &["twice_j", "j", "probability", "count_a", "count_b"]);
    r.meta("command", "entangle");
    r.meta(
        "split",
        format!("{}:{}", split.side_a_count, split.side_b_count()),
    );
    r.meta("mixture", mode);
    r.meta("log_base", base);
    r.meta("s_e", num(report.s_e));
    r.meta("e_f", num(report.e_f));
    r.meta("e_d", num(report.e_d));
    r.meta("s_a", opt(report.s_a));
    r.meta("s_b", opt(report.s_b));
    r.meta("s_total", num(report.s_total));
    r.meta("mutual_information", opt(report.mutual_information));
    r.meta("unentangled_fraction", num(report.unentangled_fraction));
    for (j, p) in &report.p {
        r.row(vec![
            j.twice().to_string(),
            j.to_string(),
            num(*p),
            count(tables.table(spinnet::Side::A), *j).unwrap_or_default(),
            count(tables.table(spinnet::Side::B), *j).unwrap_or_default(),
        ]);
    }
    Ok(r)
}

pub fn parse_range(text: &str, points: usize) -> Result<Vec<u64>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "bad range {text:?}: expected LO:HI or a comma list"
        ))
    };
    let parse = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    let ns = if let Some((lo, hi)) = text.split_once(':') {
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        if points == 0 {
            return Err(CliError::Usage("--points must be positive".into()));
        }
        log_spaced(lo, hi, points)
    } else {
        text.split(',').map(parse).collect::<Result<Vec<_>, _>>()?
    };
    if ns.is_empty() || ns[0] == 0 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(format!(
            "bad range {text:?}: sizes must be positive and ascending"
        )));
    }
    if *ns.last().unwrap() > MAX_SCAN_N {
        return Err(CliError::Usage(format!(
            "sizes above {MAX_SCAN_N} are not supported"
        )));
    }
    Ok(ns)
}

pub fn scan(law: Law, ns: &[u64], spin: TwiceSpin, cfg: &Config) -> Result<Rendered, CliError> {
    let (name, result): (&str, ScanResult) = match law {
        Law::Entropy => {
            if spin == TwiceSpin::ZERO {
                return Err(CliError::Usage("constituent spin must be positive".into()));
            }
            if spin.twice() > 2 && 2 * ns[ns.len() - 1] > MAX_TOWER_COUNT {
                return Err(CliError::Usage(format!(
                    "entropy scans for spin {spin} are limited to 2n <= {MAX_TOWER_COUNT}"
                )));
            }
            ("entropy", entropy_law_scan(ns, spin, cfg.log_base)?)
        }
        Law::Factor3 => ("factor3", entanglement_scaling_scan(ns, cfg)?),
        Law::Halflog => ("halflog", entanglement_scaling_scan(ns, cfg)?),
        Law::Jmax => ("jmax", jmax_scan(ns, cfg)?),
    };
    let json = json!({
        "command": "scan",
        "law": name,
        "log_base": result.log_base,
        "spin": matches!(law, Law::Entropy).then(|| spin.to_string()),
        "n": result.n_values,
        "columns": result.quantities.iter()
            .map(|(k, v)| (k.clone(), Value::from(v.iter().map(|x| finite(*x)).collect::<Vec<_>>())))
            .collect::<serde_json::Map<_, _>>(),
        "fit": result.fit,
    });
    let mut header = vec!["n"];
    header.extend(result.quantities.keys().map(String::as_str));
    let mut r = Rendered::new(json, &header);
    r.meta("command", "scan");
    r.meta("law", name);
    r.meta("log_base", result.log_base);
    if matches!(law, Law::Entropy) {
        r.meta("spin", spin);
    }
    if let Some(fit) = result.fit {
        r.meta("fit_slope", num(fit.slope));
        r.meta("fit_intercept", num(fit.intercept));
        r.meta("fit_rms_residual", num(fit.residual));
    }
    for (i, n) in result.n_values.iter().enumerate() {
        let mut row = vec![n.to_string()];
        row.extend(result.quantities.values().map(|v| num(v[i])));
        r.row(row);
    }
    Ok(r)
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn closed_form_check(split: &SplitSpec, weights: &Weights, cfg: &Config) -> Result<Check, Error> {
    let report = verify_closed_form(split, weights, cfg)?;
    let worst = report
        .comparisons
        .iter()
        .filter(|c| c.name != "basis_size")
        .map(|c| (c.closed_form - c.oracle).abs())
        .fold(report.spectrum_deviation.unwrap_or(0.0), f64::max);
    let failing: Vec<&str> = report
        .comparisons
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    let detail = if report.passed {
        format!("{} singlets, max deviation {worst:.2e}", report.basis_size)
    } else if failing.is_empty() {
        format!("spectrum deviation {worst:.2e}")
    } else {
        format!(
            "mismatch in {}, max deviation {worst:.2e}",
            failing.join(", ")
        )
    };
    Ok(Check {
        name: format!("closed-form {}", label(split)),
        passed: report.passed,
        detail,
    })
}

fn concavity_check(split: &SplitSpec, trials: usize, cfg: &Config) -> Result<Check, Error> {
    let seed =
        cfg.seed ^ (u64::from(split.total.constituent_count) << 32 | u64::from(split.side_a_count));
    let r = random_decomposition_check(split, trials, seed, cfg)?;
    Ok(Check {
        name: format!("concavity {}", label(split)),
        passed: r.passed,
        detail: format!(
            "{} decompositions, min average {:.6} vs S_E {:.6}, {} violations",
            r.trials, r.min_average, r.s_e, r.violations
        ),
    })
}

fn overlap_check(report: &OverlapReport) -> Check {
    let consistent = |pairs: &[(usize, usize)], m: &[Vec<f64>]| {
        pairs.iter().all(|&(i, k)| {
            let expect = 1.0 / f64::from(report.labels[i].twice_j.dim());
            (m[i][k] - expect).abs() < 1e-9
        })
    };
    let passed = report.a_supports_orthogonal_across_ja
        && report.b_supports_orthogonal_across_jb
        && consistent(&report.nonorthogonal_a, &report.overlaps_a)
        && consistent(&report.nonorthogonal_b, &report.overlaps_b);
    Check {
        name: format!("overlaps {}", label(&report.split)),
        passed,
        detail: format!(
            "{} states; side A: {} overlapping pairs, {} with equal reductions; side B: {} overlapping, {} equal",
            report.labels.len(),
            report.nonorthogonal_a.len(),
            report.identical_reductions_a.len(),
            report.nonorthogonal_b.len(),
            report.identical_reductions_b.len()
        ),
    }
}

fn unitary_check(rank: u32, count: u32, cfg: &Config) -> Result<Check, Error> {
    let counted = su_m_invariant_dimension(rank, count);
    let hook = rectangular_tableaux_count(rank, count);
    let basis = su_m_invariant_basis(rank, count, cfg.dimension_cap)?;
    let residual = su_m_invariance_residual(&basis);
    let passed =
        counted == hook && BigUint::from(basis.vectors.len()) == counted && residual < 1e-9;
    Ok(Check {
        name: format!("SU({rank}) m={count}"),
        passed,
        detail: format!(
            "count {counted}, hook length {hook}, null space {}, residual {residual:.1e}",
            basis.vectors.len()
        ),
    })
}

fn label(split: &SplitSpec) -> String {
    let kind = match split.total.twice_spin() {
        Some(TwiceSpin::HALF) => "qubits".to_owned(),
        Some(s) => format!("spin-{s}"),
        None => "fundamentals".to_owned(),
    };
    format!(
        "{} {kind} {}:{}",
        split.total.constituent_count,
        split.side_a_count,
        split.side_b_count()
    )
}

pub fn verify(args: &VerifyArgs, cfg: &Config) -> Result<Rendered, CliError> {
    let mut checks: Vec<Check> = Vec::new();
    let mut dumps: Vec<OverlapReport> = Vec::new();
    if args.all {
        let splits: Vec<SplitSpec> = (2..=args.max_qubits)
            .step_by(2)
            .flat_map(|t| (0..=t).map(move |a| SplitSpec::qubits(a, t - a)))
            .collect();
        let closed_form: Vec<Check> = splits
            .par_iter()
            .map(|s| closed_form_check(s, &MixtureWeights::Uniform, cfg))
            .collect::<Result<_, _>>()?;
        checks.extend(closed_form);
        let small: Vec<SplitSpec> = splits
            .iter()
            .filter(|s| {
                s.total.constituent_count <= 8 && s.side_a_count > 0 && s.side_b_count() > 0
            })
            .copied()
            .collect();
        let concavity: Vec<Check> = small
            .par_iter()
            .map(|s| concavity_check(s, args.trials, cfg))
            .collect::<Result<_, _>>()?;
        checks.extend(concavity);
        if args.max_qubits >= 6 {
            let report = local_orthogonality_report(&SplitSpec::qubits(2, 4), cfg)?;
            checks.push(overlap_check(&report));
            dumps.push(report);
        }
        for (rank, count) in [(2, 4), (3, 3), (3, 6)] {
            checks.push(unitary_check(rank, count, cfg)?);
        }
    } else {
        let system = args.system.system()?;
        match (system.kind, args.split) {
            (ConstituentKind::FundamentalOfUnitary { rank }, None) => {
                checks.push(unitary_check(rank, system.constituent_count, cfg)?);
            }
            (ConstituentKind::Spin { .. }, Some(a)) => {
                let split = SplitSpec::new(system, a)?;
                let weights = crate::weights::load(args.weights.as_deref())?;
                checks.push(closed_form_check(&split, &weights, cfg)?);
                if matches!(weights, MixtureWeights::Uniform) && args.trials > 0 {
                    checks.push(concavity_check(&split, args.trials, cfg)?);
                }
                let report = local_orthogonality_report(&split, cfg)?;
                checks.push(overlap_check(&report));
                dumps.push(report);
            }
            (ConstituentKind::Spin { .. }, None) => {
                return Err(CliError::Usage("verify needs --split, or --all".into()));
            }
            (ConstituentKind::FundamentalOfUnitary { .. }, Some(_)) => {
                return Err(CliError::Usage(
                    "--split does not apply to --unitary".into(),
                ));
            }
        }
    }
    if let Some(path) = &args.dump {
        let text =
            serde_json::to_string_pretty(&dumps).map_err(|e| CliError::Data(e.to_string()))?;
        std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let passed = checks.iter().all(|c| c.passed);
    let failure = checks
        .iter()
        .find(|c| !c.passed)
        .map(|c| format!("{} failed: {}", c.name, c.detail));
    let json = json!({
        "command": "verify",
        "passed": passed,
        "log_base": cfg.log_base,
        "checks": checks,
    });
    let mut r = Rendered::new(json, &["check", "passed", "detail"]);
    r.meta("command", "verify");
    r.meta("passed", passed);
    for c in &checks {
        r.row(vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]);
    }
    r.failure = failure;
    Ok(r)
}

pub fn distill(
    split: &SplitSpec,
    weights: &Weights,
    trials: u64,
    cfg: &Config,
) -> Result<Rendered, CliError> {
    let run = simulate(split, weights, trials, cfg.seed, cfg)?;
    let json = json!({
        "command": "distill",
        "split": split_json(split),
        "trials": run.trials,
        "seed": run.seed,
        "rng": run.rng,
        "shards": run.shards,
        "log_base": run.log_base,
        "unit": run.log_base.unit(),
        "yield_mean": run.yield_mean,
        "yield_stderr": run.yield_stderr,
        "s_e": run.s_e,
        "z_score": finite(run.z_score()),
        "histogram": run.histogram.iter().map(|(j, c)| json!({
            "twice_j": j.twice(),
            "j": j.to_string(),
            "trials": c,
        })).collect::<Vec<_>>(),
    });
    let mut r = Rendered::new(json, &["twice_j", "j", "trials"]);
    r.meta("command", "distill");
    r.meta(
        "split",
        format!("{}:{}", split.side_a_count, split.side_b_count()),
    );
    r.meta("trials", run.trials);
    r.meta("seed", run.seed);
    r.meta("log_base", run.log_base);
    r.meta("yield_mean", num(run.yield_mean));
    r.meta("yield_stderr", num(run.yield_stderr));
    r.meta("s_e", num(run.s_e));
    for (j, c) in &run.histogram {
        r.row(vec![j.twice().to_string(), j.to_string(), c.to_string()]);
    }
    Ok(r)
}
