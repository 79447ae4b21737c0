//! Secret key generation and the `DNK1` key file.
//!
//! A key holds everything needed to disguise a dataset: block geometry, the
//! block permutation, one mixing matrix per block, the noise level and the
//! label relabelling. Keys are derived deterministically from a seed, with
//! each component drawn from its own random stream.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::codec::{expect_magic, narrow, Reader};
use crate::error::{Error, Result};
use crate::image::Geometry;
use crate::matrix::{householder_qr, Matrix};
use crate::permutation::Permutation;
use crate::rng::{self, Domain};

pub const KEY_MAGIC: &[u8; 4] = b"DNK1";
pub const KEY_FORMAT_VERSION: u16 = 1;

/// Orthogonal keys must satisfy `max|R·Rᵀ − I|` below this on load.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Identity,
    Orthogonal,
    Projection,
}

impl MatrixKind {
    pub fn code(self) -> u8 {
        match self {
            MatrixKind::Identity => 0,
            MatrixKind::Orthogonal => 1,
            MatrixKind::Projection => 2,
        }
    }

    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            0 => Ok(MatrixKind::Identity),
            1 => Ok(MatrixKind::Orthogonal),
            2 => Ok(MatrixKind::Projection),
            other => Err(Error::UnsupportedMatrixKind(other)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Identity => "identity",
            MatrixKind::Orthogonal => "orthogonal",
            MatrixKind::Projection => "projection",
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(MatrixKind::Identity),
            "orthogonal" => Ok(MatrixKind::Orthogonal),
            "projection" => Ok(MatrixKind::Projection),
            _ => Err(Error::InvalidDimension(format!(
                "unknown matrix kind {s:?}"
            ))),
        }
    }
}

/// Samples an `m×m` orthogonal matrix from the Haar measure.
///
/// A standard Gaussian matrix is QR-factored and each column of `Q` is
/// multiplied by the sign of the matching diagonal entry of `R`. Without that
/// sign fix the distribution of `Q` depends on the QR convention and is not
/// uniform over the group.
pub fn sample_haar_orthogonal<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Matrix> {
    if m == 0 {
        return Err(Error::InvalidDimension(
            "orthogonal matrix dimension 0".into(),
        ));
    }
    let gauss: Vec<f64> = (0..m * m).map(|_| StandardNormal.sample(rng)).collect();
    let g = Matrix::from_row_major(m, m, gauss)?;
    let (mut q, diag) = householder_qr(&g);
    for (c, d) in diag.iter().enumerate() {
        if *d < 0.0 {
            for r in 0..m {
                q.set(r, c, -q.get(r, c));
            }
        }
    }
    Ok(q)
}

/// Samples an `m×m` random projection matrix with i.i.d. `N(0, 1/m)` entries.
pub fn sample_projection<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Matrix> {
    if m == 0 {
        return Err(Error::InvalidDimension(
            "projection matrix dimension 0".into(),
        ));
    }
    let normal = Normal::new(0.0, 1.0 / (m as f64).sqrt()).expect("positive std dev");
    Matrix::from_row_major(m, m, (0..m * m).map(|_| normal.sample(rng)).collect())
}

/// Uniform random bijection on `0..t`.
pub fn sample_permutation<R: Rng + ?Sized>(t: usize, rng: &mut R) -> Result<Permutation> {
    if t == 0 {
        return Err(Error::InvalidCount("permutation of zero blocks".into()));
    }
    Ok(Permutation::random(t, rng))
}

/// Parameters for [`generate_key`].
#[derive(Debug, Clone, PartialEq)]
pub struct KeySpec {
    pub geometry: Geometry,
    pub block_rows: usize,
    pub block_cols: usize,
    pub matrix_kind: MatrixKind,
    pub noise_level: f64,
    pub class_count: usize,
    pub seed: u64,
    /// Shuffle blocks. When false the block permutation is the identity
    /// (block-wise RMT without permutation).
    pub permute_blocks: bool,
    /// Relabel classes. When false the label permutation is the identity.
    pub permute_labels: bool,
}

impl KeySpec {
    pub fn new(
        geometry: Geometry,
        block_rows: usize,
        block_cols: usize,
        matrix_kind: MatrixKind,
        noise_level: f64,
        class_count: usize,
        seed: u64,
    ) -> Self {
        Self {
            geometry,
            block_rows,
            block_cols,
            matrix_kind,
            noise_level,
            class_count,
            seed,
            permute_blocks: true,
            permute_labels: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisguiseKey {
    pub version: u16,
    pub geometry: Geometry,
    pub block_rows: usize,
    pub block_cols: usize,
    pub matrix_kind: MatrixKind,
    pub matrices: Vec<Matrix>,
    pub permutation: Permutation,
    pub noise_level: f64,
    pub label_permutation: Permutation,
    pub seed: u64,
}

impl DisguiseKey {
    pub fn block_count(&self) -> usize {
        self.matrices.len()
    }

    pub fn class_count(&self) -> usize {
        self.label_permutation.len()
    }

    /// Grid shape `(rows, cols)` of blocks.
    pub fn grid(&self) -> Result<(usize, usize)> {
        self.geometry.check_blocks(self.block_rows, self.block_cols)
    }

    pub fn validate(&self) -> Result<()> {
        let g = self.geometry;
        if g.channels != 1 && g.channels != 3 {
            return Err(Error::Invariant(format!(
                "images must have 1 or 3 channels, key declares {}",
                g.channels
            )));
        }
        let (gr, gc) = self.grid()?;
        let t = gr * gc;
        if self.matrices.len() != t {
            return Err(Error::Invariant(format!(
                "{} matrices for {t} blocks",
                self.matrices.len()
            )));
        }
        if self.permutation.len() != t {
            return Err(Error::Invariant(format!(
                "block permutation has length {}, expected {t}",
                self.permutation.len()
            )));
        }
        // Permutation::new already guarantees bijectivity, but keys can be
        // built field by field.
        Permutation::new(self.permutation.as_slice().to_vec())?;
        Permutation::new(self.label_permutation.as_slice().to_vec())?;
        if self.label_permutation.is_empty() {
            return Err(Error::InvalidCount("class count must be at least 1".into()));
        }
        if !(self.noise_level.is_finite() && self.noise_level >= 0.0) {
            return Err(Error::Invariant(format!(
                "noise level {} must be finite and non-negative",
                self.noise_level
            )));
        }
        let m = self.block_rows;
        for (i, r) in self.matrices.iter().enumerate() {
            if r.rows() != m || r.cols() != m {
                return Err(Error::Invariant(format!(
                    "matrix {i} is {}x{}, expected {m}x{m}",
                    r.rows(),
                    r.cols()
                )));
            }
            if r.as_slice().iter().any(|v| !v.is_finite()) {
                return Err(Error::Invariant(format!(
                    "matrix {i} has non-finite entries"
                )));
            }
            match self.matrix_kind {
                MatrixKind::Identity if !r.is_identity() => {
                    return Err(Error::Invariant(format!("matrix {i} is not the identity")));
                }
                MatrixKind::Orthogonal => {
                    let err = r.orthogonality_error();
                    // written as a negated comparison so NaN fails too
                    if err.is_nan() || err > ORTHOGONALITY_TOLERANCE {
                        return Err(Error::Invariant(format!(
                            "matrix {i} deviates from orthogonality by {err:e}"
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Derives a complete key from `spec`. Equal specs give equal keys.
pub fn generate_key(spec: &KeySpec) -> Result<DisguiseKey> {
    let (gr, gc) = spec
        .geometry
        .check_blocks(spec.block_rows, spec.block_cols)?;
    if !(spec.noise_level.is_finite() && spec.noise_level >= 0.0) {
        return Err(Error::Invariant(format!(
            "noise level {} must be finite and non-negative",
            spec.noise_level
        )));
    }
    if spec.class_count == 0 {
        return Err(Error::InvalidCount("class count must be at least 1".into()));
    }
    let t = gr * gc;
    let m = spec.block_rows;

    let permutation = if spec.permute_blocks {
        sample_permutation(t, &mut rng::stream(spec.seed, Domain::BlockPermutation, 0))?
    } else {
        Permutation::identity(t)
    };
    let label_permutation = if spec.permute_labels {
        sample_permutation(
            spec.class_count,
            &mut rng::stream(spec.seed, Domain::LabelPermutation, 0),
        )?
    } else {
        Permutation::identity(spec.class_count)
    };
    let mut mrng = rng::stream(spec.seed, Domain::BlockMatrices, 0);
    let matrices = (0..t)
        .map(|_| match spec.matrix_kind {
            MatrixKind::Identity => Ok(Matrix::identity(m)),
            MatrixKind::Orthogonal => sample_haar_orthogonal(m, &mut mrng),
            MatrixKind::Projection => sample_projection(m, &mut mrng),
        })
        .collect::<Result<Vec<_>>>()?;

    let key = DisguiseKey {
        version: KEY_FORMAT_VERSION,
        geometry: spec.geometry,
        block_rows: spec.block_rows,
        block_cols: spec.block_cols,
        matrix_kind: spec.matrix_kind,
        matrices,
        permutation,
        noise_level: spec.noise_level,
        label_permutation,
        seed: spec.seed,
    };
    key.validate()?;
    Ok(key)
}

pub fn serialize_key(key: &DisguiseKey) -> Result<Vec<u8>> {
    key.validate()?;
    let t = key.block_count();
    let m = key.block_rows;
    let mut out = Vec::with_capacity(48 + t * 4 + key.class_count() * 2 + t * m * m * 8);
    out.extend_from_slice(KEY_MAGIC);
    out.extend_from_slice(&key.version.to_le_bytes());
    out.push(narrow::<u8>(key.geometry.channels, "channels")?);
    out.extend_from_slice(&narrow::<u16>(key.geometry.height, "height")?.to_le_bytes());
    out.extend_from_slice(&narrow::<u16>(key.geometry.width, "width")?.to_le_bytes());
    out.extend_from_slice(&narrow::<u16>(key.block_rows, "block_rows")?.to_le_bytes());
    out.extend_from_slice(&narrow::<u16>(key.block_cols, "block_cols")?.to_le_bytes());
    out.push(key.matrix_kind.code());
    out.extend_from_slice(&key.noise_level.to_le_bytes());
    out.extend_from_slice(&narrow::<u16>(key.class_count(), "class_count")?.to_le_bytes());
    out.extend_from_slice(&key.seed.to_le_bytes());
    out.extend_from_slice(&narrow::<u32>(t, "block count")?.to_le_bytes());
    for &p in key.permutation.as_slice() {
        out.extend_from_slice(&(p as u32).to_le_bytes());
    }
    for &p in key.label_permutation.as_slice() {
        out.extend_from_slice(&(p as u16).to_le_bytes());
    }
    for r in &key.matrices {
        for v in r.as_slice() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    Ok(out)
}

pub fn deserialize_key(bytes: &[u8]) -> Result<DisguiseKey> {
    let mut rd = Reader::new(bytes);
    expect_magic(&mut rd, KEY_MAGIC)?;
    let version = rd.u16_le()?;
    if version != KEY_FORMAT_VERSION {
        return Err(Error::UnsupportedVersion {
            expected: KEY_FORMAT_VERSION,
            found: version,
        });
    }
    let channels = rd.u8()? as usize;
    let height = rd.u16_le()? as usize;
    let width = rd.u16_le()? as usize;
    let block_rows = rd.u16_le()? as usize;
    let block_cols = rd.u16_le()? as usize;
    let matrix_kind = MatrixKind::from_code(rd.u8()?)?;
    let noise_level = rd.f64_le()?;
    let class_count = rd.u16_le()? as usize;
    let seed = rd.u64_le()?;
    let t = rd.u32_le()? as usize;

    let geometry = Geometry::new(channels, height, width);
    let (gr, gc) = geometry.check_blocks(block_rows, block_cols)?;
    if t != gr * gc {
        return Err(Error::Invariant(format!(
            "header declares {t} blocks, geometry implies {}",
            gr * gc
        )));
    }
    let m = block_rows;
    // t, k and m are bounded by the u16 header fields, so this cannot overflow
    rd.require(t * 4 + class_count * 2 + t * m * m * 8)?;

    let permutation = Permutation::new(
        (0..t)
            .map(|_| rd.u32_le().map(|v| v as usize))
            .collect::<Result<_>>()?,
    )?;
    let label_permutation = Permutation::new(
        (0..class_count)
            .map(|_| rd.u16_le().map(usize::from))
            .collect::<Result<_>>()?,
    )?;
    let matrices = (0..t)
        .map(|_| {
            let vals = (0..m * m)
                .map(|_| rd.f64_le())
                .collect::<Result<Vec<_>>>()?;
            Matrix::from_row_major(m, m, vals)
        })
        .collect::<Result<Vec<_>>>()?;
    rd.finish()?;

    let key = DisguiseKey {
        version,
        geometry,
        block_rows,
        block_cols,
        matrix_kind,
        matrices,
        permutation,
        noise_level,
        label_permutation,
        seed,
    };
    key.validate()?;
    Ok(key)
}
