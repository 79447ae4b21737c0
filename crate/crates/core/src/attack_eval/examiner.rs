//! Nearest-neighbour examiner.
//!
//! Stands in for a trained classifier: it memorises (a subsample of) the
//! training set and labels a query by majority vote among its nearest stored
//! images under Frobenius distance.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::{squared_distance, Geometry, ImageTensor, LabeledDataset};
use crate::parallel::run_parallel;
use crate::rng::{self, Domain};

#[derive(Debug, Clone)]
pub struct Examiner {
    geometry: Geometry,
    dim: usize,
    /// Stored images, flattened back to back.
    samples: Vec<f64>,
    labels: Vec<usize>,
    class_count: usize,
    neighbors: usize,
}

/// Memorises `train`, optionally keeping only a seeded random subset of `subsample` images.
pub fn train_examiner(
    train: &LabeledDataset,
    neighbors: usize,
    subsample: Option<usize>,
    seed: u64,
) -> Result<Examiner> {
    if train.is_empty() {
        return Err(Error::EmptyInput("examiner training set".into()));
    }
    if neighbors == 0 || neighbors.is_multiple_of(2) {
        return Err(Error::InvalidCount(format!(
            "neighbour count must be odd and positive, got {neighbors}"
        )));
    }
    let indices: Vec<usize> = match subsample {
        Some(0) => return Err(Error::InvalidCount("subsample size 0".into())),
        Some(n) if n < train.len() => {
            let mut rng = rng::stream(seed, Domain::Subsample, 0);
            let mut idx: Vec<usize> = (0..train.len()).collect();
            // partial Fisher-Yates: first n slots end up a uniform n-subset
            for i in 0..n {
                let j = rng.random_range(i..idx.len());
                idx.swap(i, j);
            }
            idx.truncate(n);
            idx.sort_unstable();
            idx
        }
        _ => (0..train.len()).collect(),
    };
    let dim = train.geometry().pixel_count();
    let mut samples = Vec::with_capacity(indices.len() * dim);
    let mut labels = Vec::with_capacity(indices.len());
    for &i in &indices {
        samples.extend_from_slice(train.images()[i].pixels());
        labels.push(train.labels()[i]);
    }
    Ok(Examiner {
        geometry: train.geometry(),
        dim,
        samples,
        labels,
        class_count: train.class_count(),
        neighbors,
    })
}

impl Examiner {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn neighbors(&self) -> usize {
        self.neighbors
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Predicted label for one image.
    ///
    /// Every stored image at or inside the `κ`-th smallest distance votes, so
    /// equidistant candidates at the boundary are all counted. The class with
    /// the most votes wins; vote ties go to the lowest class index.
    pub fn predict(&self, image: &ImageTensor) -> Result<usize> {
        if image.geometry() != self.geometry {
            return Err(Error::GeometryMismatch {
                index: 0,
                expected: self.geometry.to_string(),
                found: image.geometry().to_string(),
            });
        }
        let q = image.pixels();
        let dists: Vec<f64> = self
            .samples
            .chunks_exact(self.dim)
            .map(|s| squared_distance(s, q))
            .collect();
        let threshold = if self.neighbors == 1 {
            dists.iter().copied().fold(f64::INFINITY, f64::min)
        } else {
            let kth = self.neighbors.min(dists.len()) - 1;
            let mut scratch = dists.clone();
            let (_, v, _) = scratch.select_nth_unstable_by(kth, f64::total_cmp);
            *v
        };
        let mut votes = vec![0usize; self.class_count];
        for (d, &l) in dists.iter().zip(&self.labels) {
            if *d <= threshold {
                votes[l] += 1;
            }
        }
        let mut best = 0;
        for (c, &v) in votes.iter().enumerate() {
            if v > votes[best] {
                best = c;
            }
        }
        Ok(best)
    }

    /// Predicts every image on the global worker pool.
    pub fn predict_all(&self, images: &[ImageTensor]) -> Result<Vec<usize>> {
        images.par_iter().map(|img| self.predict(img)).collect()
    }

    /// Predicts every image on a dedicated pool of `workers` threads.
    pub fn predict_all_with(&self, images: &[ImageTensor], workers: usize) -> Result<Vec<usize>> {
        run_parallel(workers, || self.predict_all(images))?
    }
}

/// Fraction of `test` whose label the examiner reproduces.
///
/// Labels are compared as given: when scoring a disguised set, map its
/// labels back through the key first.
pub fn examiner_accuracy(examiner: &Examiner, test: &LabeledDataset) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::EmptyInput("examiner test set".into()));
    }
    let preds = examiner.predict_all(test.images())?;
    let correct = preds
        .iter()
        .zip(test.labels())
        .filter(|(p, l)| p == l)
        .count();
    Ok(correct as f64 / test.len() as f64)
}

/// Visual privacy score `1 − accuracy`.
pub fn visual_privacy(accuracy: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&accuracy) {
        return Err(Error::OutOfRange(format!(
            "accuracy {accuracy} outside [0, 1]"
        )));
    }
    Ok(1.0 - accuracy)
}
