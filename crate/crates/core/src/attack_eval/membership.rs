//! Class-membership attack.
//!
//! Probe images are fed to a model one true class at a time. A class the model
//! was trained on tends to collapse onto a single predicted label (high Fano
//! factor); an unseen class spreads out. The per-class Fano factors of the
//! in-training and out-training probe populations are compared with Welch's
//! t-test.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;

use super::examiner::Examiner;
use super::histogram::{class_histogram, fano_factor, label_entropy};
use super::stats::{welch_t_test, TestResult};
use crate::error::{Error, Result};
use crate::image::LabeledDataset;

pub const PREDICTIONS_HEADER: [&str; 2] = ["true_class", "predicted_class"];

/// Model predictions for the probes of one true class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGroup {
    pub class: usize,
    pub predictions: Vec<usize>,
}

/// Groups `(true_class, predicted_class)` rows by true class, in class order.
pub fn group_predictions(rows: &[(usize, usize)]) -> Vec<ClassGroup> {
    let mut map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(t, p) in rows {
        map.entry(t).or_default().push(p);
    }
    map.into_iter()
        .map(|(class, predictions)| ClassGroup { class, predictions })
        .collect()
}

/// Runs `model` on every probe and groups the predictions by probe label.
pub fn probe_groups(model: &Examiner, probes: &LabeledDataset) -> Result<Vec<ClassGroup>> {
    let preds = model.predict_all(probes.images())?;
    let rows: Vec<(usize, usize)> = probes.labels().iter().copied().zip(preds).collect();
    Ok(group_predictions(&rows))
}

/// Reads a `true_class,predicted_class` CSV.
pub fn read_predictions_csv<R: Read>(reader: R) -> Result<Vec<(usize, usize)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| Error::Csv(e.to_string()))?;
    if header.iter().collect::<Vec<_>>() != PREDICTIONS_HEADER {
        return Err(Error::Csv(format!(
            "expected header {:?}, found {:?}",
            PREDICTIONS_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Csv(e.to_string()))?;
        let field = |j: usize| -> Result<usize> {
            rec.get(j)
                .ok_or_else(|| Error::Csv(format!("row {} has {} fields", i + 1, rec.len())))?
                .parse()
                .map_err(|e| Error::Csv(format!("row {}: {e}", i + 1)))
        };
        if rec.len() != 2 {
            return Err(Error::Csv(format!(
                "row {} has {} fields",
                i + 1,
                rec.len()
            )));
        }
        rows.push((field(0)?, field(1)?));
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput("predictions file has no rows".into()));
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassDispersion {
    pub class: usize,
    pub size: usize,
    pub fano: f64,
    pub entropy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PopulationSummary {
    pub classes: Vec<ClassDispersion>,
    pub mean_fano: f64,
    pub mean_entropy: f64,
}

impl PopulationSummary {
    pub fn fano_values(&self) -> Vec<f64> {
        self.classes.iter().map(|c| c.fano).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Distinguishable,
    Indistinguishable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Distinguishable => "distinguishable",
            Verdict::Indistinguishable => "indistinguishable",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackReport {
    pub class_count: usize,
    pub in_training: PopulationSummary,
    pub out_training: PopulationSummary,
    pub test: TestResult,
    pub alpha: f64,
    pub verdict: Verdict,
}

fn summarize(groups: &[ClassGroup], k: usize, population: &str) -> Result<PopulationSummary> {
    if groups.len() < 2 {
        return Err(Error::SampleTooSmall(format!(
            "{population} population has {} class group(s), need at least 2",
            groups.len()
        )));
    }
    let classes = groups
        .iter()
        .map(|g| {
            if g.predictions.is_empty() {
                return Err(Error::EmptyInput(format!(
                    "{population} class {} has no probes",
                    g.class
                )));
            }
            let h = class_histogram(&g.predictions, k)?;
            Ok(ClassDispersion {
                class: g.class,
                size: g.predictions.len(),
                fano: fano_factor(&h)?,
                entropy: label_entropy(&h)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = classes.len() as f64;
    Ok(PopulationSummary {
        mean_fano: classes.iter().map(|c| c.fano).sum::<f64>() / n,
        mean_entropy: classes.iter().map(|c| c.entropy).sum::<f64>() / n,
        classes,
    })
}

/// Compares per-class Fano factors of in-training and out-training probes.
///
/// The verdict is distinguishable iff `p ≤ alpha` and the in-training mean
/// Fano factor exceeds the out-training one.
pub fn membership_attack_report(
    in_training: &[ClassGroup],
    out_training: &[ClassGroup],
    k: usize,
    alpha: f64,
) -> Result<AttackReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::OutOfRange(format!("alpha {alpha} outside (0, 1)")));
    }
    let inside = summarize(in_training, k, "in-training")?;
    let outside = summarize(out_training, k, "out-training")?;
    let test = welch_t_test(&inside.fano_values(), &outside.fano_values())?;
    let verdict = if test.p_value <= alpha && inside.mean_fano > outside.mean_fano {
        Verdict::Distinguishable
    } else {
        Verdict::Indistinguishable
    };
    Ok(AttackReport {
        class_count: k,
        in_training: inside,
        out_training: outside,
        test,
        alpha,
        verdict,
    })
}

impl fmt::Display for AttackReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# class-membership attack: {} in-training vs {} out-training probe classes over {} labels",
            self.in_training.classes.len(),
            self.out_training.classes.len(),
            self.class_count
        )?;
        for (name, pop) in [("in", &self.in_training), ("out", &self.out_training)] {
            for c in &pop.classes {
                writeln!(
                    f,
                    "population={name} class={} probes={} fano={:.6} entropy={:.6}",
                    c.class, c.size, c.fano, c.entropy
                )?;
            }
        }
        writeln!(f, "in_mean_fano={:.6}", self.in_training.mean_fano)?;
        writeln!(f, "out_mean_fano={:.6}", self.out_training.mean_fano)?;
        writeln!(f, "in_mean_entropy={:.6}", self.in_training.mean_entropy)?;
        writeln!(f, "out_mean_entropy={:.6}", self.out_training.mean_entropy)?;
        writeln!(f, "t_statistic={:.6}", self.test.statistic)?;
        writeln!(f, "degrees_of_freedom={:.6}", self.test.degrees_of_freedom)?;
        writeln!(f, "p_value={:.6e}", self.test.p_value)?;
        writeln!(f, "alpha={}", self.alpha)?;
        write!(f, "verdict={}", self.verdict)
    }
}
