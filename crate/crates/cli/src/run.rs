use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;
use venn_nn::dataset::{load_csv, CsvSchema, Dataset};
use venn_nn::evaluation::{
    run_batch, run_online_nn, run_online_vp_multi, Method, OnlineRun, OnlineSummary,
};

use crate::args::InspectArgs;
use crate::config::{RunConfig, CONFIG_FILE};
use crate::error::CliError;

pub fn inspect(args: &InspectArgs) -> Result<String, CliError> {
    let schema = CsvSchema {
        has_header: args.data.header,
        num_attributes: None,
    };
    let data = load_csv(&args.data.dataset, &schema)?;
    let mut out = format!(
        "{} examples, {} attributes, {} classes\n",
        data.len(),
        data.num_attributes(),
        data.num_classes()
    );
    for (name, count) in data.class_names().iter().zip(data.class_counts()) {
        let _ = writeln!(out, "  {name}: {count}");
    }
    Ok(out)
}

#[derive(Debug, Serialize)]
struct DatasetInfo {
    examples: usize,
    attributes: usize,
    classes: Vec<String>,
}

impl DatasetInfo {
    fn of(data: &Dataset) -> Self {
        Self {
            examples: data.len(),
            attributes: data.num_attributes(),
            classes: data.class_names().to_vec(),
        }
    }
}

#[derive(Debug, Serialize)]
struct OnlineReport<'a> {
    dataset: DatasetInfo,
    runs: &'a [OnlineSummary],
}

#[derive(Debug, Serialize)]
struct BatchFile<'a, T> {
    dataset: DatasetInfo,
    report: &'a T,
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::write_failed(&path, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

/// File-name fragment for a method: `nn`, `vp_v1`, ...
fn slug(method: &Method) -> String {
    match method {
        Method::NeuralNet => "nn".into(),
        Method::Venn(rule) => format!("vp_{}", rule.kind).to_lowercase(),
    }
}

fn summary_line(s: &OnlineSummary) -> String {
    let mut line = format!("{:<10} N={} E={}", s.method, s.steps, s.errors);
    if let (Some(lep), Some(uep)) = (s.lep, s.uep) {
        let _ = write!(line, " LEP={lep:.2} UEP={uep:.2}");
        if s.contained == Some(true) {
            line.push_str(" contained");
        } else {
            line.push_str(" outside");
        }
    }
    if let Some(ep) = s.ep {
        let _ = write!(line, " EP={ep:.2}");
    }
    if let Some(p) = s.p_value {
        let _ = write!(line, " p={:.6}", p.value);
        if p.degenerate {
            line.push_str(" (degenerate)");
        }
    }
    line
}

/// Runs the experiment described by `config`, writing its artifacts to
/// `out_dir`, and returns the text report.
pub fn execute(config: &RunConfig, out_dir: &Path) -> Result<String, CliError> {
    let data = load_csv(&config.dataset.path, &config.schema())?;
    for rule in &config.taxonomies {
        rule.check_theta(Some(data.num_classes()))
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    fs::create_dir_all(out_dir).map_err(|e| CliError::write_failed(out_dir, e))?;
    write(out_dir, CONFIG_FILE, &config.to_json())?;
    let nn_config = config.mlp_config();

    if let Some((options, baseline)) = config.online_options() {
        let mut runs: Vec<OnlineRun> = Vec::new();
        if !config.taxonomies.is_empty() {
            runs = run_online_vp_multi(&data, &config.taxonomies, &nn_config, &options)?;
        }
        if baseline {
            runs.push(run_online_nn(&data, &nn_config, &options)?);
        }
        let mut summaries = Vec::with_capacity(runs.len());
        let mut text = String::new();
        for run in &runs {
            write(
                out_dir,
                &format!("online_{}.csv", slug(&run.method)),
                &run.curves().to_csv(),
            )?;
            let summary = run.summary()?;
            let _ = writeln!(text, "{}", summary_line(&summary));
            summaries.push(summary);
        }
        let report = OnlineReport {
            dataset: DatasetInfo::of(&data),
            runs: &summaries,
        };
        write(out_dir, "online_summary.json", &to_json(&report))?;
        return Ok(text);
    }

    let plan = config
        .split_plan()
        .expect("batch protocol")
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let options = config.batch_options().expect("batch protocol");
    let report = run_batch(&data, &config.taxonomies, &nn_config, &plan, &options)?;
    let table = report.to_text_table();
    write(out_dir, "batch_metrics.txt", &table)?;
    write(
        out_dir,
        "batch_metrics.json",
        &to_json(&BatchFile {
            dataset: DatasetInfo::of(&data),
            report: &report,
        }),
    )?;
    Ok(table)
}
