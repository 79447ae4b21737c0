//! The disguising transform and its inverse.
//!
//! `disguise` runs partition → per-block noise and mixing → block permutation
//! → assemble. The mixing matrix of block `i` left-multiplies every channel of
//! that block: `R_i · (B + Δ)`, where `Δ` is fresh uniform noise on `[0, N]`.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::{Block, BlockGrid, ImageTensor, LabeledDataset, Space};
use crate::keygen::{DisguiseKey, MatrixKind};
use crate::matrix::{mul_into, Matrix};
use crate::parallel::run_parallel;
use crate::permutation::Permutation;
use crate::rng::{self, Domain, StreamRng};

pub fn partition(image: &ImageTensor, block_rows: usize, block_cols: usize) -> Result<BlockGrid> {
    let g = image.geometry();
    let (grid_rows, grid_cols) = g.check_blocks(block_rows, block_cols)?;
    let px = image.pixels();
    let mut blocks = Vec::with_capacity(grid_rows * grid_cols);
    for gr in 0..grid_rows {
        for gc in 0..grid_cols {
            let mut data = Vec::with_capacity(g.channels * block_rows * block_cols);
            for c in 0..g.channels {
                for r in 0..block_rows {
                    let start = (c * g.height + gr * block_rows + r) * g.width + gc * block_cols;
                    data.extend_from_slice(&px[start..start + block_cols]);
                }
            }
            blocks.push(Block::new(data));
        }
    }
    Ok(BlockGrid {
        grid_rows,
        grid_cols,
        block_rows,
        block_cols,
        channels: g.channels,
        blocks,
    })
}

pub fn assemble(grid: &BlockGrid) -> Result<ImageTensor> {
    grid.validate()?;
    let g = grid.geometry();
    let (br, bc) = (grid.block_rows, grid.block_cols);
    let mut px = vec![0.0; g.pixel_count()];
    for (i, block) in grid.blocks.iter().enumerate() {
        let (gr, gc) = (i / grid.grid_cols, i % grid.grid_cols);
        for c in 0..g.channels {
            for r in 0..br {
                let dst = (c * g.height + gr * br + r) * g.width + gc * bc;
                let src = (c * br + r) * bc;
                px[dst..dst + bc].copy_from_slice(&block.data[src..src + bc]);
            }
        }
    }
    ImageTensor::new(g, px)
}

/// Output block `j` is input block `perm(j)`.
pub fn permute_blocks(grid: &BlockGrid, perm: &Permutation) -> Result<BlockGrid> {
    if perm.len() != grid.block_count() {
        return Err(Error::ShapeMismatch(format!(
            "permutation of length {} for {} blocks",
            perm.len(),
            grid.block_count()
        )));
    }
    Ok(BlockGrid {
        grid_rows: grid.grid_rows,
        grid_cols: grid.grid_cols,
        block_rows: grid.block_rows,
        block_cols: grid.block_cols,
        channels: grid.channels,
        blocks: (0..perm.len())
            .map(|j| grid.blocks[perm.apply(j)].clone())
            .collect(),
    })
}

/// Returns `R · (block + Δ)` with `Δ` entries drawn uniformly from `[0, noise_level]`.
pub fn rmt_block<R: Rng + ?Sized>(
    block: &Matrix,
    r: &Matrix,
    noise_level: f64,
    rng: &mut R,
) -> Result<Matrix> {
    if r.rows() != r.cols() || r.cols() != block.rows() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} mixing matrix for a {}x{} block",
            r.rows(),
            r.cols(),
            block.rows(),
            block.cols()
        )));
    }
    let mut noisy = block.as_slice().to_vec();
    add_noise(&mut noisy, noise_level, rng);
    let mut out = vec![0.0; noisy.len()];
    mul_into(
        r.as_slice(),
        r.rows(),
        r.cols(),
        &noisy,
        block.cols(),
        &mut out,
    );
    Matrix::from_row_major(block.rows(), block.cols(), out)
}

fn add_noise<R: Rng + ?Sized>(values: &mut [f64], noise_level: f64, rng: &mut R) {
    if noise_level > 0.0 {
        for v in values {
            *v += rng.random::<f64>() * noise_level;
        }
    }
}

fn check_geometry(image: &ImageTensor, key: &DisguiseKey, index: usize) -> Result<()> {
    if image.geometry() != key.geometry {
        return Err(Error::GeometryMismatch {
            index,
            expected: key.geometry.to_string(),
            found: image.geometry().to_string(),
        });
    }
    Ok(())
}

/// Disguises one image. Noise is drawn from `rng` block by block, channel by
/// channel, in original block order.
pub fn disguise<R: Rng + ?Sized>(
    image: &ImageTensor,
    key: &DisguiseKey,
    rng: &mut R,
) -> Result<ImageTensor> {
    check_geometry(image, key, 0)?;
    let mut grid = partition(image, key.block_rows, key.block_cols)?;
    let (m, cols) = (key.block_rows, key.block_cols);
    let plane = m * cols;
    let mut scratch = vec![0.0; plane];
    for (block, r) in grid.blocks.iter_mut().zip(&key.matrices) {
        for ch in block.data.chunks_exact_mut(plane) {
            add_noise(ch, key.noise_level, rng);
            mul_into(r.as_slice(), m, m, ch, cols, &mut scratch);
            ch.copy_from_slice(&scratch);
        }
    }
    assemble(&permute_blocks(&grid, &key.permutation)?)
}

/// Undoes the permutation and applies `R_iᵀ` per block, recovering `X + Δ`.
pub fn invert(image: &ImageTensor, key: &DisguiseKey) -> Result<ImageTensor> {
    if key.matrix_kind == MatrixKind::Projection {
        return Err(Error::NotInvertible("projection"));
    }
    check_geometry(image, key, 0)?;
    let grid = partition(image, key.block_rows, key.block_cols)?;
    let mut grid = permute_blocks(&grid, &key.permutation.inverse())?;
    let (m, cols) = (key.block_rows, key.block_cols);
    let plane = m * cols;
    let mut scratch = vec![0.0; plane];
    for (block, r) in grid.blocks.iter_mut().zip(&key.matrices) {
        let rt = r.transpose();
        for ch in block.data.chunks_exact_mut(plane) {
            mul_into(rt.as_slice(), m, m, ch, cols, &mut scratch);
            ch.copy_from_slice(&scratch);
        }
    }
    assemble(&grid)
}

/// Noise stream for image `index` of a dataset disguised under `base_seed`.
pub fn image_rng(base_seed: u64, index: usize) -> StreamRng {
    rng::stream(base_seed, Domain::ImageNoise, index as u64)
}

/// Disguises every image and relabels through the key's label permutation.
///
/// Image `i` uses the noise stream `image_rng(base_seed, i)`, so the output
/// does not depend on `parallelism`.
pub fn disguise_dataset(
    dataset: &LabeledDataset,
    key: &DisguiseKey,
    base_seed: u64,
    parallelism: usize,
) -> Result<LabeledDataset> {
    if dataset.space() != Space::Original {
        return Err(Error::Invariant("dataset is already disguised".into()));
    }
    check_dataset(dataset, key)?;
    let images = run_parallel(parallelism, || {
        dataset
            .images()
            .par_iter()
            .enumerate()
            .map(|(i, img)| disguise(img, key, &mut image_rng(base_seed, i)))
            .collect::<Result<Vec<_>>>()
    })??;
    let labels = dataset
        .labels()
        .iter()
        .map(|&l| key.label_permutation.apply(l))
        .collect();
    LabeledDataset::new(
        dataset.geometry(),
        images,
        labels,
        dataset.class_count(),
        Space::Disguised,
    )
}

/// Inverse of [`disguise_dataset`] up to the additive noise.
pub fn invert_dataset(
    dataset: &LabeledDataset,
    key: &DisguiseKey,
    parallelism: usize,
) -> Result<LabeledDataset> {
    if dataset.space() != Space::Disguised {
        return Err(Error::Invariant("dataset is not disguised".into()));
    }
    if key.matrix_kind == MatrixKind::Projection {
        return Err(Error::NotInvertible("projection"));
    }
    check_dataset(dataset, key)?;
    let images = run_parallel(parallelism, || {
        dataset
            .images()
            .par_iter()
            .map(|img| invert(img, key))
            .collect::<Result<Vec<_>>>()
    })??;
    let inv = key.label_permutation.inverse();
    let labels = dataset.labels().iter().map(|&l| inv.apply(l)).collect();
    LabeledDataset::new(
        dataset.geometry(),
        images,
        labels,
        dataset.class_count(),
        Space::Original,
    )
}

fn check_dataset(dataset: &LabeledDataset, key: &DisguiseKey) -> Result<()> {
    if dataset.geometry() != key.geometry {
        return Err(Error::GeometryMismatch {
            index: 0,
            expected: key.geometry.to_string(),
            found: dataset.geometry().to_string(),
        });
    }
    if dataset.class_count() != key.class_count() {
        return Err(Error::Invariant(format!(
            "dataset has {} classes, key maps {}",
            dataset.class_count(),
            key.class_count()
        )));
    }
    Ok(())
}

/// Maps labels from the disguised label space back to the original one.
pub fn unmap_labels(labels: &[usize], key: &DisguiseKey) -> Result<Vec<usize>> {
    let inv = key.label_permutation.inverse();
    labels
        .iter()
        .map(|&l| {
            if l < inv.len() {
                Ok(inv.apply(l))
            } else {
                Err(Error::LabelOutOfRange {
                    label: l,
                    classes: inv.len(),
                })
            }
        })
        .collect()
}
