//! Per-example rows, exact-match scoring and csv/markdown reports.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub id: String,
    pub mode: String,
    /// The recorded answer. For an abstention this is the task's abstention
    /// label, which never scores.
    pub prediction: String,
    pub gold: String,
    pub correct: bool,
    pub abstained: bool,
    pub steps: usize,
    /// Wall time; left out of serialized rows so they stay reproducible.
    #[serde(skip)]
    pub duration: Duration,
}

impl Row {
    pub fn new(
        id: &str,
        mode: &str,
        prediction: Option<String>,
        abstention: &str,
        gold: &str,
        steps: usize,
    ) -> Row {
        let abstained = prediction.is_none();
        let prediction = prediction.unwrap_or_else(|| abstention.to_string());
        Row {
            id: id.to_string(),
            mode: mode.to_string(),
            correct: !abstained && prediction == gold,
            prediction,
            gold: gold.to_string(),
            abstained,
            steps,
            duration: Duration::ZERO,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("cannot score an empty set of rows")]
pub struct EmptyInput;

/// Fraction of rows scored correct.
pub fn exact_match(rows: &[Row]) -> Result<f64, EmptyInput> {
    if rows.is_empty() {
        return Err(EmptyInput);
    }
    Ok(rows.iter().filter(|r| r.correct).count() as f64 / rows.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub dataset: String,
    pub mode: String,
    pub model: String,
    pub n: usize,
    pub correct: usize,
}

impl Aggregate {
    pub fn from_rows(dataset: &str, mode: &str, model: &str, rows: &[Row]) -> Aggregate {
        Aggregate {
            dataset: dataset.to_string(),
            mode: mode.to_string(),
            model: model.to_string(),
            n: rows.len(),
            correct: rows.iter().filter(|r| r.correct).count(),
        }
    }

    /// `correct / n`; zero for an empty aggregate.
    pub fn accuracy(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.correct as f64 / self.n as f64
        }
    }
}

/// `numerator / denominator` (times `scale`) rounded half up to `decimals`
/// places, computed in integers so no binary rounding leaks into reports.
fn fixed_ratio(numerator: usize, denominator: usize, scale: u128, decimals: u32) -> String {
    if denominator == 0 {
        return format!("{:.*}", decimals as usize, 0.0);
    }
    let unit = 10u128.pow(decimals);
    let num = numerator as u128 * scale * unit;
    let den = denominator as u128;
    let scaled = (2 * num + den) / (2 * den);
    if decimals == 0 {
        return scaled.to_string();
    }
    format!("{}.{:0width$}", scaled / unit, scaled % unit, width = decimals as usize)
}

#[derive(Debug, Clone)]
pub struct EvalReport {
    pub rows: Vec<Row>,
    pub aggregate: Aggregate,
}

impl EvalReport {
    /// One JSON object per row.
    pub fn predictions_jsonl(&self) -> String {
        self.rows.iter().map(|r| serde_json::to_string(r).expect("rows serialize") + "\n").collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(format!("unknown format `{other}`; expected csv or markdown")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Markdown => "markdown",
        })
    }
}

pub const CSV_HEADER: &str = "dataset,mode,model,n,correct,accuracy";

/// Accuracy is a fraction to 4 places in csv and a percentage to 2 places in
/// markdown.
pub fn emit_report(aggregates: &[Aggregate], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for a in aggregates {
                let acc = fixed_ratio(a.correct, a.n, 1, 4);
                out.push_str(&format!("{},{},{},{},{},{acc}\n", a.dataset, a.mode, a.model, a.n, a.correct));
            }
        }
        Format::Markdown => {
            out.push_str("| Dataset | Mode | Model | N | Correct | Accuracy (%) |\n");
            out.push_str("|---|---|---|---:|---:|---:|\n");
            for a in aggregates {
                let acc = fixed_ratio(a.correct, a.n, 100, 2);
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {acc} |\n",
                    a.dataset, a.mode, a.model, a.n, a.correct
                ));
            }
        }
    }
    out
}

#[derive(Debug, Error)]
pub enum PredictionsError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Reads rows written by [`EvalReport::predictions_jsonl`].
pub fn load_predictions(path: &Path) -> Result<Vec<Row>, PredictionsError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| PredictionsError::Io { path: path.display().to_string(), source })?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Row = serde_json::from_str(line)
            .map_err(|e| PredictionsError::Syntax { line: i + 1, message: e.to_string() })?;
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(correct: usize, n: usize) -> Vec<Row> {
        (0..n)
            .map(|i| {
                let prediction = if i < correct { "Yes" } else { "No" };
                Row::new(&format!("r{i}"), "cot", Some(prediction.into()), "No", "Yes", 1)
            })
            .collect()
    }

    #[test]
    fn exact_match_values() {
        assert_eq!(exact_match(&rows(7, 10)), Ok(0.7));
        assert_eq!(exact_match(&[]), Err(EmptyInput));
        let abstentions: Vec<Row> =
            (0..4).map(|i| Row::new(&i.to_string(), "la", None, "No", "No", 3)).collect();
        assert!(abstentions.iter().all(|r| r.prediction == "No" && !r.correct));
        assert_eq!(exact_match(&abstentions), Ok(0.0));
    }

    #[test]
    fn fixed_point_formatting() {
        assert_eq!(fixed_ratio(1, 3, 1, 4), "0.3333");
        assert_eq!(fixed_ratio(2, 3, 1, 4), "0.6667");
        assert_eq!(fixed_ratio(20, 20, 1, 4), "1.0000");
        assert_eq!(fixed_ratio(7, 10, 100, 2), "70.00");
        assert_eq!(fixed_ratio(1, 8, 100, 2), "12.50");
        // 1/16 = 0.0625 exactly: half rounds up.
        assert_eq!(fixed_ratio(1, 16, 1, 3), "0.063");
        assert_eq!(fixed_ratio(0, 0, 1, 4), "0.0000");
    }

    #[test]
    fn report_shapes() {
        assert_eq!(emit_report(&[], Format::Csv), format!("{CSV_HEADER}\n"));
        let a = Aggregate::from_rows("fixtures/tf_synthetic", "la", "mock", &rows(20, 20));
        assert_eq!(
            emit_report(std::slice::from_ref(&a), Format::Csv).lines().nth(1),
            Some("fixtures/tf_synthetic,la,mock,20,20,1.0000")
        );
        let b = Aggregate { mode: "cot".into(), correct: 10, ..a.clone() };
        let md = emit_report(&[a, b], Format::Markdown);
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("| Dataset |"));
        assert_eq!(lines[3], "| fixtures/tf_synthetic | cot | mock | 20 | 10 | 50.00 |");
    }

    #[test]
    fn rows_serialize_without_timing() {
        let r = Row::new("t1", "la", Some("Yes".into()), "No", "Yes", 2);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"id":"t1","mode":"la","prediction":"Yes","gold":"Yes","correct":true,"abstained":false,"steps":2}"#
        );
    }
}
