//! Image, block-grid and dataset types.

use std::fmt;

use crate::error::{Axis, Error, Result};

/// Channel count and spatial size of an image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Geometry {
    pub channels: usize,
    pub height: usize,
    pub width: usize,
}

impl Geometry {
    pub fn new(channels: usize, height: usize, width: usize) -> Self {
        Self {
            channels,
            height,
            width,
        }
    }

    pub fn pixel_count(&self) -> usize {
        self.channels * self.height * self.width
    }

    /// Rejects geometries that cannot be split into `block_rows × block_cols` blocks.
    pub fn check_blocks(&self, block_rows: usize, block_cols: usize) -> Result<(usize, usize)> {
        if block_rows == 0 || block_cols == 0 {
            return Err(Error::InvalidDimension(format!(
                "block size {block_rows}x{block_cols}"
            )));
        }
        if self.height == 0 || self.width == 0 {
            return Err(Error::InvalidDimension(format!("image size {self}")));
        }
        if !self.height.is_multiple_of(block_rows) {
            return Err(Error::Partition {
                axis: Axis::Height,
                size: self.height,
                block: block_rows,
            });
        }
        if !self.width.is_multiple_of(block_cols) {
            return Err(Error::Partition {
                axis: Axis::Width,
                size: self.width,
                block: block_cols,
            });
        }
        Ok((self.height / block_rows, self.width / block_cols))
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}", self.channels, self.height, self.width)
    }
}

/// Channel-major, row-major pixel array.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageTensor {
    geometry: Geometry,
    pixels: Vec<f64>,
}

impl ImageTensor {
    pub fn new(geometry: Geometry, pixels: Vec<f64>) -> Result<Self> {
        if pixels.len() != geometry.pixel_count() {
            return Err(Error::ShapeMismatch(format!(
                "{} pixels for geometry {geometry}",
                pixels.len()
            )));
        }
        if let Some(i) = pixels.iter().position(|v| !v.is_finite()) {
            return Err(Error::Invariant(format!("pixel {i} is not finite")));
        }
        Ok(Self { geometry, pixels })
    }

    pub fn zeros(geometry: Geometry) -> Self {
        Self {
            geometry,
            pixels: vec![0.0; geometry.pixel_count()],
        }
    }

    /// Widens 8-bit pixels to the 0–255 real scale.
    pub fn from_u8(geometry: Geometry, bytes: &[u8]) -> Result<Self> {
        Self::new(geometry, bytes.iter().map(|&b| f64::from(b)).collect())
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    pub fn get(&self, channel: usize, row: usize, col: usize) -> f64 {
        let g = self.geometry;
        self.pixels[(channel * g.height + row) * g.width + col]
    }

    /// Squared Frobenius distance to `other`. Geometries must agree.
    pub fn squared_distance(&self, other: &ImageTensor) -> f64 {
        squared_distance(&self.pixels, &other.pixels)
    }

    pub fn distance(&self, other: &ImageTensor) -> f64 {
        self.squared_distance(other).sqrt()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.pixels.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// One block of an image: `channels` matrices of `rows × cols`, channel-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub(crate) data: Vec<f64>,
}

impl Block {
    pub fn new(data: Vec<f64>) -> Self {
        Self { data }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// An image cut into `grid_rows × grid_cols` equal blocks, numbered in row-major grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockGrid {
    pub grid_rows: usize,
    pub grid_cols: usize,
    pub block_rows: usize,
    pub block_cols: usize,
    pub channels: usize,
    pub blocks: Vec<Block>,
}

impl BlockGrid {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_len(&self) -> usize {
        self.channels * self.block_rows * self.block_cols
    }

    pub fn geometry(&self) -> Geometry {
        Geometry::new(
            self.channels,
            self.grid_rows * self.block_rows,
            self.grid_cols * self.block_cols,
        )
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let t = self.grid_rows * self.grid_cols;
        if self.blocks.len() != t {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks for a {}x{} grid",
                self.blocks.len(),
                self.grid_rows,
                self.grid_cols
            )));
        }
        let len = self.block_len();
        if let Some(i) = self.blocks.iter().position(|b| b.data.len() != len) {
            return Err(Error::ShapeMismatch(format!(
                "block {i} has {} values, expected {len}",
                self.blocks[i].data.len()
            )));
        }
        Ok(())
    }
}

/// Whether dataset images are raw or have been through the disguising transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Original,
    Disguised,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    geometry: Geometry,
    images: Vec<ImageTensor>,
    labels: Vec<usize>,
    class_count: usize,
    space: Space,
}

impl LabeledDataset {
    pub fn new(
        geometry: Geometry,
        images: Vec<ImageTensor>,
        labels: Vec<usize>,
        class_count: usize,
        space: Space,
    ) -> Result<Self> {
        if images.len() != labels.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} images but {} labels",
                images.len(),
                labels.len()
            )));
        }
        if class_count == 0 {
            return Err(Error::InvalidCount("class count must be at least 1".into()));
        }
        if let Some(&label) = labels.iter().find(|&&l| l >= class_count) {
            return Err(Error::LabelOutOfRange {
                label,
                classes: class_count,
            });
        }
        for (index, img) in images.iter().enumerate() {
            if img.geometry() != geometry {
                return Err(Error::GeometryMismatch {
                    index,
                    expected: geometry.to_string(),
                    found: img.geometry().to_string(),
                });
            }
        }
        Ok(Self {
            geometry,
            images,
            labels,
            class_count,
            space,
        })
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn images(&self) -> &[ImageTensor] {
        &self.images
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn into_parts(self) -> (Vec<ImageTensor>, Vec<usize>) {
        (self.images, self.labels)
    }

    /// Records `start..end` (clamped to the dataset length).
    pub fn slice(&self, start: usize, end: usize) -> LabeledDataset {
        let end = end.min(self.len());
        let start = start.min(end);
        self.select(start..end)
    }

    /// Records at the given indices, in iteration order.
    pub fn select(&self, indices: impl IntoIterator<Item = usize>) -> LabeledDataset {
        let (images, labels) = indices
            .into_iter()
            .map(|i| (self.images[i].clone(), self.labels[i]))
            .unzip();
        LabeledDataset {
            geometry: self.geometry,
            images,
            labels,
            class_count: self.class_count,
            space: self.space,
        }
    }

    /// First `per_class` records of each class, in original order.
    pub fn class_balanced(&self, per_class: usize) -> LabeledDataset {
        let mut taken = vec![0usize; self.class_count];
        let indices: Vec<usize> = (0..self.len())
            .filter(|&i| {
                let l = self.labels[i];
                if taken[l] < per_class {
                    taken[l] += 1;
                    true
                } else {
                    false
                }
            })
            .collect();
        self.select(indices)
    }

    /// Splits records by label: entry `c` holds every image labelled `c`.
    pub fn group_by_class(&self) -> Vec<Vec<&ImageTensor>> {
        let mut groups = vec![Vec::new(); self.class_count];
        for (img, &l) in self.images.iter().zip(&self.labels) {
            groups[l].push(img);
        }
        groups
    }
}
