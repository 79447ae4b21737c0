//! File loading for the CLI and its tests.

use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{Context, Result};
use disguise_core::dataset_io::{
    idx_dataset, read_cifar10_bin, read_dgt, read_idx_images, read_idx_labels,
};
use disguise_core::keygen::deserialize_key;
use disguise_core::{DisguiseKey, LabeledDataset};
use flate2::read::GzDecoder;

use crate::args::Format;
use crate::UsageError;

/// Reads a file, transparently inflating gzip.
pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    let raw = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    if raw.starts_with(&[0x1f, 0x8b]) {
        let mut out = Vec::new();
        GzDecoder::new(raw.as_slice())
            .read_to_end(&mut out)
            .with_context(|| format!("cannot inflate {}", path.display()))?;
        Ok(out)
    } else {
        Ok(raw)
    }
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

pub fn load_key(path: &Path) -> Result<DisguiseKey> {
    let bytes = read_bytes(path)?;
    deserialize_key(&bytes).with_context(|| format!("invalid key file {}", path.display()))
}

pub fn load_dataset(
    path: &Path,
    format: Format,
    labels: Option<&Path>,
    classes: usize,
) -> Result<LabeledDataset> {
    let bytes = read_bytes(path)?;
    let ctx = || format!("cannot decode {}", path.display());
    match format {
        Format::Idx => {
            let labels_path = labels.ok_or_else(|| {
                UsageError(format!("{} is IDX and needs a label file", path.display()))
            })?;
            let images = read_idx_images(&bytes).with_context(ctx)?;
            let label_bytes = read_bytes(labels_path)?;
            let labels = read_idx_labels(&label_bytes)
                .with_context(|| format!("cannot decode {}", labels_path.display()))?;
            Ok(idx_dataset(images, labels, classes).with_context(ctx)?)
        }
        Format::Cifar10 => Ok(read_cifar10_bin(&bytes).with_context(ctx)?),
        Format::Dgt => Ok(read_dgt(&bytes).with_context(ctx)?),
    }
}
