//! Dataset readers and writers.
//!
//! * IDX (MNIST-style) image and label files, big-endian headers.
//! * CIFAR-10 binary batches: 3073-byte records, label byte then R, G, B planes.
//! * `DGT1`, a container for double-precision datasets in either space.
//! * Binary PGM/PPM dumps for looking at images.

use crate::codec::{expect_magic, narrow, Reader};
use crate::error::{Error, Result};
use crate::image::{Geometry, ImageTensor, LabeledDataset, Space};

pub const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
pub const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

pub const CIFAR10_RECORD_LEN: usize = 1 + 3 * 32 * 32;
pub const CIFAR10_CLASSES: usize = 10;

pub const DGT_MAGIC: &[u8; 4] = b"DGT1";
pub const DGT_VERSION: u16 = 1;

fn idx_magic(rd: &mut Reader<'_>, expected: u32) -> Result<()> {
    let magic = rd.u32_be()?;
    if magic != expected {
        return Err(Error::BadMagic {
            expected: format!("{expected:#010x}"),
            found: format!("{magic:#010x}"),
        });
    }
    Ok(())
}

pub fn read_idx_images(bytes: &[u8]) -> Result<Vec<ImageTensor>> {
    let mut rd = Reader::new(bytes);
    idx_magic(&mut rd, IDX_IMAGES_MAGIC)?;
    let count = rd.u32_be()? as usize;
    let rows = rd.u32_be()? as usize;
    let cols = rd.u32_be()? as usize;
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidDimension(format!(
            "IDX image size {rows}x{cols}"
        )));
    }
    let per_image = rows.checked_mul(cols).ok_or(Error::DimensionOverflow)?;
    let total = count
        .checked_mul(per_image)
        .ok_or(Error::DimensionOverflow)?;
    let payload = rd.take(total)?;
    rd.finish()?;
    let g = Geometry::new(1, rows, cols);
    payload
        .chunks_exact(per_image)
        .map(|px| ImageTensor::from_u8(g, px))
        .collect()
}

pub fn read_idx_labels(bytes: &[u8]) -> Result<Vec<usize>> {
    let mut rd = Reader::new(bytes);
    idx_magic(&mut rd, IDX_LABELS_MAGIC)?;
    let count = rd.u32_be()? as usize;
    let payload = rd.take(count)?;
    rd.finish()?;
    Ok(payload.iter().map(|&b| usize::from(b)).collect())
}

/// Pairs IDX images with IDX labels into an original-space dataset.
pub fn idx_dataset(
    images: Vec<ImageTensor>,
    labels: Vec<usize>,
    class_count: usize,
) -> Result<LabeledDataset> {
    let geometry = images
        .first()
        .map(|i| i.geometry())
        .unwrap_or(Geometry::new(1, 28, 28));
    LabeledDataset::new(geometry, images, labels, class_count, Space::Original)
}

pub fn read_cifar10_bin(bytes: &[u8]) -> Result<LabeledDataset> {
    if !bytes.len().is_multiple_of(CIFAR10_RECORD_LEN) {
        return Err(Error::Framing {
            len: bytes.len(),
            record: CIFAR10_RECORD_LEN,
        });
    }
    let g = Geometry::new(3, 32, 32);
    let mut images = Vec::with_capacity(bytes.len() / CIFAR10_RECORD_LEN);
    let mut labels = Vec::with_capacity(images.capacity());
    for rec in bytes.chunks_exact(CIFAR10_RECORD_LEN) {
        let label = usize::from(rec[0]);
        if label >= CIFAR10_CLASSES {
            return Err(Error::LabelOutOfRange {
                label,
                classes: CIFAR10_CLASSES,
            });
        }
        labels.push(label);
        images.push(ImageTensor::from_u8(g, &rec[1..])?);
    }
    LabeledDataset::new(g, images, labels, CIFAR10_CLASSES, Space::Original)
}

pub fn write_dgt(dataset: &LabeledDataset) -> Result<Vec<u8>> {
    let g = dataset.geometry();
    let n = dataset.len();
    let mut out = Vec::with_capacity(18 + n * (g.pixel_count() * 8 + 2));
    out.extend_from_slice(DGT_MAGIC);
    out.extend_from_slice(&DGT_VERSION.to_le_bytes());
    out.extend_from_slice(&narrow::<u32>(n, "count")?.to_le_bytes());
    out.push(narrow::<u8>(g.channels, "channels")?);
    out.extend_from_slice(&narrow::<u16>(g.height, "height")?.to_le_bytes());
    out.extend_from_slice(&narrow::<u16>(g.width, "width")?.to_le_bytes());
    out.extend_from_slice(&narrow::<u16>(dataset.class_count(), "class_count")?.to_le_bytes());
    out.push(match dataset.space() {
        Space::Original => 0,
        Space::Disguised => 1,
    });
    for img in dataset.images() {
        for v in img.pixels() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    for &l in dataset.labels() {
        // labels < class_count <= u16::MAX
        out.extend_from_slice(&(l as u16).to_le_bytes());
    }
    Ok(out)
}

pub fn read_dgt(bytes: &[u8]) -> Result<LabeledDataset> {
    let mut rd = Reader::new(bytes);
    expect_magic(&mut rd, DGT_MAGIC)?;
    let version = rd.u16_le()?;
    if version != DGT_VERSION {
        return Err(Error::UnsupportedVersion {
            expected: DGT_VERSION,
            found: version,
        });
    }
    let count = rd.u32_le()? as usize;
    let channels = rd.u8()? as usize;
    let height = rd.u16_le()? as usize;
    let width = rd.u16_le()? as usize;
    let class_count = rd.u16_le()? as usize;
    let space = match rd.u8()? {
        0 => Space::Original,
        1 => Space::Disguised,
        other => return Err(Error::Invariant(format!("unknown space tag {other}"))),
    };
    let g = Geometry::new(channels, height, width);
    if g.pixel_count() == 0 {
        return Err(Error::InvalidDimension(format!("DGT geometry {g}")));
    }
    let record = g
        .pixel_count()
        .checked_mul(8)
        .and_then(|b| b.checked_add(2))
        .ok_or(Error::DimensionOverflow)?;
    let total = count.checked_mul(record).ok_or(Error::DimensionOverflow)?;
    rd.require(total)?;

    let px_per_image = g.pixel_count();
    let mut images = Vec::with_capacity(count);
    for _ in 0..count {
        let raw = rd.take(px_per_image * 8)?;
        let px = raw
            .chunks_exact(8)
            .map(|b| f64::from_le_bytes(b.try_into().expect("8-byte chunk")))
            .collect();
        images.push(ImageTensor::new(g, px)?);
    }
    let labels = (0..count)
        .map(|_| rd.u16_le().map(usize::from))
        .collect::<Result<Vec<_>>>()?;
    rd.finish()?;
    LabeledDataset::new(g, images, labels, class_count, space)
}

/// How pixel values are mapped to 8 bits for dumps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Clamp to `[0, 255]` and round.
    Clamp,
    /// Stretch `[min, max]` of the image onto `[0, 255]`. Constant images map to 0.
    MinMax,
}

/// Binary PGM (1 channel) or PPM (3 channels) with max value 255.
pub fn export_pnm(image: &ImageTensor, normalization: Normalization) -> Result<Vec<u8>> {
    let g = image.geometry();
    let tag = match g.channels {
        1 => "P5",
        3 => "P6",
        c => {
            return Err(Error::InvalidDimension(format!(
                "PNM export needs 1 or 3 channels, got {c}"
            )))
        }
    };
    let px = image.pixels();
    let to_u8: Box<dyn Fn(f64) -> u8> = match normalization {
        Normalization::Clamp => Box::new(|v: f64| v.clamp(0.0, 255.0).round() as u8),
        Normalization::MinMax => {
            let lo = px.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = px.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let span = hi - lo;
            if span > 0.0 {
                Box::new(move |v: f64| ((v - lo) / span * 255.0).round().clamp(0.0, 255.0) as u8)
            } else {
                Box::new(|_| 0)
            }
        }
    };
    let mut out = format!("{tag}\n{} {}\n255\n", g.width, g.height).into_bytes();
    let plane = g.height * g.width;
    out.reserve(px.len());
    for i in 0..plane {
        for c in 0..g.channels {
            out.push(to_u8(px[c * plane + i]));
        }
    }
    Ok(out)
}

/// Zero-pads the bottom and right edges up to the next multiple of the block size.
pub fn pad_to_block_multiple(
    image: &ImageTensor,
    block_rows: usize,
    block_cols: usize,
) -> Result<ImageTensor> {
    if block_rows == 0 || block_cols == 0 {
        return Err(Error::InvalidDimension(format!(
            "block size {block_rows}x{block_cols}"
        )));
    }
    let g = image.geometry();
    let height = g.height.div_ceil(block_rows) * block_rows;
    let width = g.width.div_ceil(block_cols) * block_cols;
    if (height, width) == (g.height, g.width) {
        return Ok(image.clone());
    }
    let ng = Geometry::new(g.channels, height, width);
    let mut px = vec![0.0; ng.pixel_count()];
    for c in 0..g.channels {
        for r in 0..g.height {
            let src = (c * g.height + r) * g.width;
            let dst = (c * height + r) * width;
            px[dst..dst + g.width].copy_from_slice(&image.pixels()[src..src + g.width]);
        }
    }
    ImageTensor::new(ng, px)
}
