//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.
//!
//! Criteria 1 to 4 run the full experiments on the bundled datasets with the
//! default seed, so this target takes several minutes on a single core.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::Rng as _;
use venn_nn::dataset::{load_csv, Dataset};
use venn_nn::evaluation::{
    reliability, run_batch, run_online_nn, run_online_vp_multi, two_sided_pvalue, BatchReport,
    Method, OnlineSummary,
};
use venn_nn::mlp::{loss_and_gradient, Mlp, Shape};
use venn_nn::seed;
use venn_nn::taxonomy::{category_of, CategoryKey, TaxonomyKind, TaxonomyRule};
use venn_nn::venn::{aggregate, ExtendedOutputs, MultiProbability};
use venn_nn_cli::config::{DatasetSpec, NetworkSpec, Protocol, RunConfig};

struct Case {
    name: &'static str,
    file: &'static str,
    hidden: usize,
    bins: usize,
    /// Target batch accuracies in percent: plain network, then V1..V5.
    target: [f64; 6],
}

const CASES: [Case; 4] = [
    Case {
        name: "TA Evaluation",
        file: "tae.csv",
        hidden: 5,
        bins: 100,
        target: [45.33, 48.67, 47.33, 50.67, 48.67, 52.67],
    },
    Case {
        name: "Glass",
        file: "glass.csv",
        hidden: 5,
        bins: 100,
        target: [57.62, 58.57, 59.52, 60.00, 60.48, 59.05],
    },
    Case {
        name: "Ecoli",
        file: "ecoli.csv",
        hidden: 10,
        bins: 100,
        target: [86.76, 88.53, 88.53, 89.12, 88.53, 89.41],
    },
    Case {
        name: "Vehicle",
        file: "vehicle.csv",
        hidden: 11,
        bins: 200,
        target: [80.35, 80.82, 81.88, 81.65, 82.12, 81.18],
    },
];

const ONLINE_STEPS: usize = 200;
const ACCURACY_TOLERANCE_PP: f64 = 5.0;
const SEED: u64 = 0;

fn data_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(file)
}

fn all_rules() -> Vec<TaxonomyRule> {
    TaxonomyKind::ALL
        .iter()
        .map(|&k| TaxonomyRule::with_default_theta(k))
        .collect()
}

fn config(case: &Case, protocol: Protocol) -> RunConfig {
    RunConfig {
        format_version: 1,
        dataset: DatasetSpec {
            path: data_path(case.file),
            has_header: false,
        },
        seed: SEED,
        network: NetworkSpec {
            hidden_units: case.hidden,
            restarts: 3,
            validation_fraction: 0.30,
            max_epochs: 200,
            patience: 20,
        },
        taxonomies: all_rules(),
        protocol,
    }
}

fn load(case: &Case) -> Dataset {
    load_csv(data_path(case.file), &Default::default()).expect("bundled dataset loads")
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn announce(index: usize, title: &str, verdict: &Verdict, started: Instant) {
    println!(
        "criterion {index} {}: {title} ({:.0}s)",
        if verdict.pass { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    for line in verdict.detail.lines() {
        println!("    {line}");
    }
}

fn criterion_1() -> Verdict {
    let mut pass = true;
    let mut detail = String::new();
    for case in &CASES {
        let cfg = config(
            case,
            Protocol::Online {
                initial_size: 50,
                subsample: Some(ONLINE_STEPS),
                baseline: false,
            },
        );
        let (options, _) = cfg.online_options().unwrap();
        let runs = run_online_vp_multi(&load(case), &cfg.taxonomies, &cfg.mlp_config(), &options)
            .expect("on-line Venn run");
        let mut strict = 0;
        let mut loose_ok = true;
        let mut cells = Vec::new();
        for run in &runs {
            let s = run.summary().unwrap();
            let (e, lep, uep) = (s.errors as f64, s.lep.unwrap(), s.uep.unwrap());
            let slack = 2.0 * (s.steps as f64).sqrt();
            loose_ok &= lep - slack <= e && e <= uep + slack;
            if s.contained == Some(true) {
                strict += 1;
            }
            cells.push(format!(
                "{}: E={} [{:.1}, {:.1}]",
                run.method.to_string().trim_start_matches("NN-VP "),
                s.errors,
                lep,
                uep
            ));
        }
        let ok = loose_ok && strict >= 4;
        pass &= ok;
        detail.push_str(&format!(
            "{} N={}: {}/5 strictly contained, all within 2*sqrt(N): {} | {}\n",
            case.name,
            runs[0].records.len(),
            strict,
            loose_ok,
            cells.join(", ")
        ));
    }
    Verdict { pass, detail }
}

fn criterion_2() -> Verdict {
    let mut above = 0;
    let mut significant = 0;
    let mut detail = String::new();
    for case in &CASES {
        let cfg = config(
            case,
            Protocol::Online {
                initial_size: 50,
                subsample: None,
                baseline: true,
            },
        );
        let (options, _) = cfg.online_options().unwrap();
        let run = run_online_nn(&load(case), &cfg.mlp_config(), &options).expect("on-line network run");
        let s: OnlineSummary = run.summary().unwrap();
        let ep = s.ep.unwrap();
        let p = s.p_value.unwrap().value;
        if s.errors as f64 > ep {
            above += 1;
        }
        if p < 0.05 {
            significant += 1;
        }
        detail.push_str(&format!(
            "{} N={}: E={} EP={:.2} p={:.6}\n",
            case.name, s.steps, s.errors, ep, p
        ));
    }
    detail.push_str(&format!(
        "E > EP on {above}/4 (need 3), p < 0.05 on {significant}/4 (need 2)\n"
    ));
    Verdict {
        pass: above >= 3 && significant >= 2,
        detail,
    }
}

fn batch_reports() -> Vec<BatchReport> {
    CASES
        .iter()
        .map(|case| {
            let cfg = config(
                case,
                Protocol::Batch {
                    repeats: 10,
                    test_fraction: 0.1,
                    reliability_bins: case.bins,
                    venn_restarts: None,
                },
            );
            let plan = cfg.split_plan().unwrap().unwrap();
            run_batch(
                &load(case),
                &cfg.taxonomies,
                &cfg.mlp_config(),
                &plan,
                &cfg.batch_options().unwrap(),
            )
            .expect("batch run")
        })
        .collect()
}

fn venn_rows(report: &BatchReport) -> Vec<(TaxonomyKind, f64, f64)> {
    report
        .rows
        .iter()
        .filter_map(|r| match r.method {
            Method::Venn(rule) => Some((rule.kind, 100.0 * r.metrics.accuracy, r.metrics.reliability)),
            Method::NeuralNet => None,
        })
        .collect()
}

fn criterion_3(reports: &[BatchReport]) -> Verdict {
    let mut within = 0;
    let mut total = 0;
    let mut detail = String::new();
    for (case, report) in CASES.iter().zip(reports) {
        let nn = 100.0 * report.get(Method::NeuralNet).unwrap().accuracy;
        let mut cells = vec![format!("NN {nn:.2} (target {:.2})", case.target[0])];
        for (i, (kind, acc, _)) in venn_rows(report).into_iter().enumerate() {
            let target = case.target[i + 1];
            let ok = (acc - target).abs() <= ACCURACY_TOLERANCE_PP;
            total += 1;
            within += usize::from(ok);
            cells.push(format!(
                "{kind} {acc:.2} (target {target:.2}{})",
                if ok { "" } else { ", off" }
            ));
        }
        detail.push_str(&format!("{}: {}\n", case.name, cells.join(", ")));
    }
    detail.push_str(&format!(
        "{within}/{total} Venn cells within {ACCURACY_TOLERANCE_PP} points (need 80%)\n"
    ));
    Verdict {
        pass: within * 5 >= total * 4,
        detail,
    }
}

fn criterion_4(reports: &[BatchReport]) -> Verdict {
    let mut best_vp = 0.0;
    let mut nn_mean = 0.0;
    let mut rel_ok = true;
    let mut detail = String::new();
    for (case, report) in CASES.iter().zip(reports) {
        let nn = report.get(Method::NeuralNet).unwrap();
        let rows = venn_rows(report);
        let best = rows.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
        best_vp += best / CASES.len() as f64;
        nn_mean += 100.0 * nn.accuracy / CASES.len() as f64;
        let worst_rel = rows.iter().map(|r| r.2).fold(f64::NEG_INFINITY, f64::max);
        let checked = case.name != "Ecoli";
        if checked {
            rel_ok &= worst_rel < nn.reliability;
        }
        detail.push_str(&format!(
            "{}: best Venn accuracy {best:.2} vs NN {:.2}; REL NN {:.4}, Venn {}{}\n",
            case.name,
            100.0 * nn.accuracy,
            nn.reliability,
            rows.iter()
                .map(|r| format!("{} {:.4}", r.0, r.2))
                .collect::<Vec<_>>()
                .join(" "),
            if checked { "" } else { " (not required)" }
        ));
    }
    detail.push_str(&format!(
        "mean best Venn accuracy {best_vp:.2} vs mean NN accuracy {nn_mean:.2}; \
         every taxonomy beats NN REL on TA, Glass, Vehicle: {rel_ok}\n"
    ));
    Verdict {
        pass: best_vp > nn_mean && rel_ok,
        detail,
    }
}

// ---- criterion 5: property suites on synthetic data ----

fn normalize(raw: Vec<f64>) -> Vec<f64> {
    let t: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / t).collect()
}

fn random_probs(rng: &mut seed::Rng, c: usize) -> Vec<f64> {
    let spread = [0.5, 3.0, 10.0][rng.gen_range(0..3)];
    normalize((0..c).map(|_| (spread * rng.gen::<f64>()).exp()).collect())
}

fn suite_gradient() -> Result<String, String> {
    let shape = Shape {
        inputs: 3,
        hidden: 4,
        outputs: 2,
    };
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for trial in 0..100u64 {
        let mut rng = seed::rng(seed::derive(1, &[trial]));
        let mut model = Mlp::random(shape, rng.gen());
        let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let data = Dataset::with_num_classes(
            vec![venn_nn::dataset::Example::new(x, rng.gen_range(0..2))],
            3,
            2,
        )
        .unwrap();
        let (_, grad) = loss_and_gradient(&model, &data).unwrap();
        for i in 0..grad.len() {
            let base = model.params()[i];
            model.params_mut()[i] = base + h;
            let plus = model.loss(&data).unwrap();
            model.params_mut()[i] = base - h;
            let minus = model.loss(&data).unwrap();
            model.params_mut()[i] = base;
            let numeric = (plus - minus) / (2.0 * h);
            let err = (grad[i] - numeric).abs() / grad[i].abs().max(numeric.abs()).max(1e-4);
            worst = worst.max(err);
        }
    }
    if worst < 1e-5 {
        Ok(format!("gradient: worst relative error {worst:.1e} over 100 instances"))
    } else {
        Err(format!("gradient: worst relative error {worst:.1e}"))
    }
}

fn suite_row_sums() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    let mut rng = seed::rng(2);
    for _ in 0..500 {
        let c = rng.gen_range(2..7);
        let shape = Shape {
            inputs: rng.gen_range(1..6),
            hidden: rng.gen_range(1..8),
            outputs: c,
        };
        let mut model = Mlp::random(shape, rng.gen());
        let scale = rng.gen_range(0.1..20.0);
        model.params_mut().iter_mut().for_each(|w| *w *= scale);
        let x: Vec<f64> = (0..shape.inputs).map(|_| rng.gen_range(-30.0..30.0)).collect();
        let o = model.forward(&x).unwrap();
        worst = worst.max((o.iter().sum::<f64>() - 1.0).abs());
    }
    for _ in 0..200 {
        let c = rng.gen_range(2..6);
        let l = rng.gen_range(1..15);
        let labels: Vec<usize> = (0..l).map(|_| rng.gen_range(0..c)).collect();
        let outputs = (0..c)
            .map(|_| (0..=l).map(|_| random_probs(&mut rng, c)).collect())
            .collect();
        let ext = ExtendedOutputs::from_parts(labels, outputs).unwrap();
        for rule in all_rules() {
            if rule.check_theta(Some(c)).is_err() {
                continue;
            }
            let p = ext.multiprobability(&rule).map_err(|e| e.to_string())?;
            for row in p.rows() {
                worst = worst.max((row.iter().sum::<f64>() - 1.0).abs());
            }
        }
    }
    if worst <= 1e-9 {
        Ok(format!("row sums: worst deviation {worst:.1e}"))
    } else {
        Err(format!("row sums: deviation {worst:.1e}"))
    }
}

fn suite_interval_order() -> Result<String, String> {
    let mut rng = seed::rng(3);
    for i in 0..1000 {
        let c = rng.gen_range(2..7);
        let rows = (0..c)
            .map(|_| {
                if rng.gen() {
                    random_probs(&mut rng, c)
                } else {
                    let counts: Vec<f64> = (0..c).map(|_| f64::from(rng.gen_range(0u32..5))).collect();
                    if counts.iter().sum::<f64>() == 0.0 {
                        normalize(vec![1.0; c])
                    } else {
                        normalize(counts)
                    }
                }
            })
            .collect();
        let r = aggregate(&MultiProbability::from_rows(rows).map_err(|e| e.to_string())?);
        for (iv, &m) in r.intervals.iter().zip(&r.mean_probs) {
            if !(0.0 <= iv.lower && iv.lower <= m && m <= iv.upper && iv.upper <= 1.0) {
                return Err(format!("interval order violated in input {i}"));
            }
        }
    }
    Ok("interval order: 1000 inputs".into())
}

fn oracle_key(rule: &TaxonomyRule, o: &[f64]) -> String {
    let mut order: Vec<usize> = (0..o.len()).collect();
    order.sort_by(|&a, &b| o[b].partial_cmp(&o[a]).unwrap().then(a.cmp(&b)));
    let (top, second) = (o[order[0]], o[order[1]]);
    let t = rule.theta;
    match rule.kind {
        TaxonomyKind::V1 => order[0].to_string(),
        TaxonomyKind::V2 => format!("{} {}", order[0], top >= t),
        TaxonomyKind::V3 => format!("{} {}", order[0], second >= t),
        TaxonomyKind::V4 => format!("{} {}", order[0], top - second >= t),
        TaxonomyKind::V5 => format!("{:?}", (0..o.len()).filter(|&j| o[j] >= t).collect::<Vec<_>>()),
    }
}

fn suite_frequencies() -> Result<String, String> {
    for instance in 0..50u64 {
        let mut rng = seed::rng(seed::derive(4, &[instance]));
        let c = rng.gen_range(2..5);
        let l = rng.gen_range(1..12);
        let labels: Vec<usize> = (0..l).map(|_| rng.gen_range(0..c)).collect();
        let outputs: Vec<Vec<Vec<f64>>> = (0..c)
            .map(|_| {
                (0..=l)
                    .map(|_| {
                        let coarse: Vec<f64> =
                            (0..c).map(|j| f64::from(rng.gen_range(1u32..5)) + 1e-7 * j as f64).collect();
                        normalize(coarse)
                    })
                    .collect()
            })
            .collect();
        let ext = ExtendedOutputs::from_parts(labels.clone(), outputs.clone()).unwrap();
        for rule in all_rules() {
            if rule.check_theta(Some(c)).is_err() {
                continue;
            }
            let p = ext.multiprobability(&rule).map_err(|e| e.to_string())?;
            for k in 0..c {
                let mut ext_labels = labels.clone();
                ext_labels.push(k);
                let keys: Vec<String> = outputs[k].iter().map(|o| oracle_key(&rule, o)).collect();
                let members: Vec<usize> = (0..=l).filter(|&i| keys[i] == keys[l]).collect();
                for j in 0..c {
                    let count = members.iter().filter(|&&i| ext_labels[i] == j).count();
                    let expected = count as f64 / members.len() as f64;
                    if p.get(k, j) != expected {
                        return Err(format!("frequency mismatch, instance {instance} {} k={k}", rule.kind));
                    }
                }
            }
        }
    }
    Ok("frequencies: 50 instances match brute-force recount".into())
}

fn suite_key_counts() -> Result<String, String> {
    let mut rng = seed::rng(5);
    let mut seen: BTreeMap<(TaxonomyKind, usize), Vec<CategoryKey>> = BTreeMap::new();
    for i in 0..10_000 {
        let c = 2 + i % 5;
        let o = random_probs(&mut rng, c);
        for rule in all_rules() {
            if rule.check_theta(Some(c)).is_err() {
                continue;
            }
            let keys = seen.entry((rule.kind, c)).or_default();
            let key = category_of(&rule, &o).map_err(|e| e.to_string())?;
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
    }
    for ((kind, c), keys) in &seen {
        if keys.len() > kind.max_categories(*c) {
            return Err(format!("{kind} with c={c}: {} keys", keys.len()));
        }
    }
    Ok("taxonomy keys: bounds hold over 10000 vectors".into())
}

fn exact_binomial(e: usize, n: usize, q: f64) -> f64 {
    let ln_pmf = |k: usize| {
        ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
            + k as f64 * q.ln()
            + (n - k) as f64 * (1.0 - q).ln()
    };
    let pmf: Vec<f64> = (0..=n).map(|k| ln_pmf(k).exp()).collect();
    let lower: f64 = pmf[..=e].iter().sum();
    let upper: f64 = pmf[e..].iter().sum();
    (2.0 * lower.min(upper)).min(1.0)
}

/// `ln Gamma(x)` for positive integers `x`, as a log-factorial sum.
fn ln_gamma(x: f64) -> f64 {
    (2..x as usize).map(|k| (k as f64).ln()).sum()
}

fn suite_pvalue() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for n in [100usize, 500] {
        for q in [0.25, 0.3, 0.4, 0.5, 0.6, 0.7, 0.75] {
            let probs = vec![q; n];
            for e in 0..=n {
                let approx = two_sided_pvalue(e, &probs).map_err(|e| e.to_string())?.value;
                worst = worst.max((approx - exact_binomial(e, n, q)).abs());
            }
        }
    }
    if worst <= 0.02 {
        Ok(format!("p-value: max deviation {worst:.4} from exact binomial"))
    } else {
        Err(format!("p-value: deviation {worst:.4}"))
    }
}

fn suite_reliability() -> Result<String, String> {
    let mut rng = seed::rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..300 {
        let c = rng.gen_range(2..6);
        let n = rng.gen_range(1..60);
        let k_bins = [1, 7, 10, 100, 200][rng.gen_range(0..5)];
        let probs: Vec<Vec<f64>> = (0..n).map(|_| random_probs(&mut rng, c)).collect();
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..c)).collect();
        let kf = k_bins as f64;
        let mut expected = 0.0;
        for k in 0..k_bins {
            let (lo, hi) = (k as f64 / kf, (k + 1) as f64 / kf);
            let (mut count, mut hits) = (0usize, 0usize);
            for (p, &y) in probs.iter().zip(&labels) {
                for (j, &o) in p.iter().enumerate() {
                    if o >= lo && (o < hi || k + 1 == k_bins) {
                        count += 1;
                        hits += usize::from(j == y);
                    }
                }
            }
            if count > 0 {
                let d = (k as f64 + 0.5) / kf - hits as f64 / count as f64;
                expected += count as f64 * d * d;
            }
        }
        expected /= n as f64;
        worst = worst.max((reliability(&probs, &labels, k_bins) - expected).abs());
    }
    if worst <= 1e-12 {
        Ok(format!("reliability: max deviation {worst:.1e} from recount"))
    } else {
        Err(format!("reliability: deviation {worst:.1e}"))
    }
}

fn criterion_5() -> Verdict {
    let suites: [fn() -> Result<String, String>; 7] = [
        suite_gradient,
        suite_row_sums,
        suite_interval_order,
        suite_frequencies,
        suite_key_counts,
        suite_pvalue,
        suite_reliability,
    ];
    let mut pass = true;
    let mut detail = String::new();
    for suite in suites {
        match suite() {
            Ok(msg) => detail.push_str(&format!("ok   {msg}\n")),
            Err(msg) => {
                pass = false;
                detail.push_str(&format!("FAIL {msg}\n"));
            }
        }
    }
    Verdict { pass, detail }
}

// ---- criterion 6: CLI determinism ----

fn cli(args: &[&std::ffi::OsStr]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_venn-nn"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(String::from_utf8_lossy(&out.stderr).into_owned())
    }
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn criterion_6() -> Verdict {
    let root = tempfile::tempdir().unwrap();
    let tae = data_path("tae.csv");
    let runs: [(&str, Vec<&str>); 2] = [
        ("online", vec!["online", "--hidden", "5", "--baseline"]),
        ("batch", vec!["batch", "--hidden", "5", "--repeats", "2"]),
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (name, args) in runs {
        let first = root.path().join(format!("{name}_a"));
        let mut argv: Vec<&std::ffi::OsStr> = args.iter().map(|a| a.as_ref()).collect();
        argv.extend([
            "--dataset".as_ref(),
            tae.as_os_str(),
            "--out-dir".as_ref(),
            first.as_os_str(),
        ]);
        let result = cli(&argv).and_then(|_| {
            let config = first.join("run_config.json");
            let reference = snapshot(&first);
            for (i, threads) in ["1", "2"].iter().enumerate() {
                let again = root.path().join(format!("{name}_rerun{i}"));
                cli(&[
                    "--threads".as_ref(),
                    threads.as_ref(),
                    "run".as_ref(),
                    "--config".as_ref(),
                    config.as_os_str(),
                    "--out-dir".as_ref(),
                    again.as_os_str(),
                ])?;
                if snapshot(&again) != reference {
                    return Err(format!("rerun {i} differs"));
                }
            }
            Ok(reference.len())
        });
        match result {
            Ok(files) => detail.push_str(&format!("{name}: {files} files identical over 2 reruns\n")),
            Err(e) => {
                pass = false;
                detail.push_str(&format!("{name}: {e}\n"));
            }
        }
    }
    Verdict { pass, detail }
}

fn main() -> ExitCode {
    // `cargo test -- <filter>` style arguments are accepted and ignored
    let mut all_pass = true;
    let mut record = |index: usize, title: &str, started: Instant, verdict: Verdict| {
        announce(index, title, &verdict, started);
        all_pass &= verdict.pass;
    };

    let t = Instant::now();
    record(5, "property suites", t, criterion_5());
    let t = Instant::now();
    record(6, "CLI determinism", t, criterion_6());
    let t = Instant::now();
    record(1, "calibration containment (on-line, Venn)", t, criterion_1());
    let t = Instant::now();
    record(2, "baseline miscalibration (on-line, network)", t, criterion_2());
    let t = Instant::now();
    let reports = batch_reports();
    println!("batch protocol finished ({:.0}s)", t.elapsed().as_secs_f64());
    for (case, report) in CASES.iter().zip(&reports) {
        println!("  {}:", case.name);
        for line in report.to_text_table().lines() {
            println!("    {line}");
        }
    }
    let t = Instant::now();
    record(3, "batch accuracy tolerance", t, criterion_3(&reports));
    let t = Instant::now();
    record(4, "relative ordering", t, criterion_4(&reports));

    if all_pass {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: some criteria failed");
        ExitCode::FAILURE
    }
}
