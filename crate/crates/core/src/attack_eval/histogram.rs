use crate::error::{Error, Result};

/// Predicted-label counts over `k` classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassHistogram {
    counts: Vec<u64>,
}

impl ClassHistogram {
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidCount(
                "histogram needs at least one class".into(),
            ));
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn class_count(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn class_histogram(predicted: &[usize], k: usize) -> Result<ClassHistogram> {
    if k == 0 {
        return Err(Error::InvalidCount(
            "histogram needs at least one class".into(),
        ));
    }
    let mut counts = vec![0u64; k];
    for &p in predicted {
        if p >= k {
            return Err(Error::LabelOutOfRange {
                label: p,
                classes: k,
            });
        }
        counts[p] += 1;
    }
    Ok(ClassHistogram { counts })
}

/// Variance-to-mean ratio of the counts, with the divide-by-`k` variance.
pub fn fano_factor(h: &ClassHistogram) -> Result<f64> {
    let total = h.total();
    if total == 0 {
        return Err(Error::UndefinedDispersion);
    }
    let k = h.class_count() as f64;
    let mean = total as f64 / k;
    let var = h
        .counts
        .iter()
        .map(|&n| (n as f64 - mean).powi(2))
        .sum::<f64>()
        / k;
    Ok(var / mean)
}

/// Shannon entropy of the normalised histogram, in bits.
pub fn label_entropy(h: &ClassHistogram) -> Result<f64> {
    let total = h.total();
    if total == 0 {
        return Err(Error::UndefinedDispersion);
    }
    let total = total as f64;
    let e: f64 = h
        .counts
        .iter()
        .filter(|&&n| n > 0)
        .map(|&n| {
            let p = n as f64 / total;
            -p * p.log2()
        })
        .sum();
    // a point mass sums to -0.0
    Ok(e.max(0.0))
}
