//! Compression (`down`, `ccdown`) and inflation (`up`, `ccup`) along a
//! partition, on matrices and vectors.
//!
//! `down` replaces each block by the arithmetic mean of its entries and
//! `up` inflates each entry back to a constant block; on the closed stratum
//! they are mutually inverse and turn entrywise multiplication into
//! entrywise multiplication. The weighted variants conjugate by the square
//! root of the block-size matrix `D`,
//!
//! ```text
//! ccdown(A) = D^{1/2} down(A) D^{1/2},    ccup(B) = up(D^{-1/2} B D^{-1/2}),
//! ```
//!
//! which makes them *-isomorphisms for ordinary matrix multiplication, the
//! workhorse behind spectral permanence, pseudo-inversion and the equation
//! solvers. All operators run as direct block loops; the explicit weight
//! matrix `W` is available from [`Partition::weight_matrices`] for the
//! factorization `A = W · down(A) · Wᵀ`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, CVector};
use crate::partition::Partition;

fn check_ambient(a: &CMatrix, pi: &Partition, what: &str) -> Result<()> {
    if !a.is_square() || a.nrows() != pi.size() {
        return Err(Error::DimensionMismatch(format!(
            "{what}: {}x{} matrix against a partition of {}",
            a.nrows(),
            a.ncols(),
            pi.size()
        )));
    }
    Ok(())
}

fn check_compressed(b: &CMatrix, pi: &Partition, what: &str) -> Result<()> {
    if !b.is_square() || b.nrows() != pi.num_blocks() {
        return Err(Error::DimensionMismatch(format!(
            "{what}: {}x{} matrix against {} blocks",
            b.nrows(),
            b.ncols(),
            pi.num_blocks()
        )));
    }
    Ok(())
}

/// Block-average an `n×n` matrix down to `m×m`: entry `(i,j)` is the mean
/// of `A` over `I_i × I_j`.
pub fn down_matrix(a: &CMatrix, pi: &Partition) -> Result<CMatrix> {
    check_ambient(a, pi, "down")?;
    let blocks = pi.blocks();
    let m = blocks.len();
    let mut out = CMatrix::zeros(m, m);
    for (i, bi) in blocks.iter().enumerate() {
        for (j, bj) in blocks.iter().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for &p in bi {
                for &q in bj {
                    s += a[(p, q)];
                }
            }
            out[(i, j)] = s / Complex64::new((bi.len() * bj.len()) as f64, 0.0);
        }
    }
    Ok(out)
}

/// Inflate an `m×m` matrix to the block-constant `n×n` matrix: entry
/// `(p,q)` is `b_{ij}` for `p ∈ I_i`, `q ∈ I_j`.
pub fn up_matrix(b: &CMatrix, pi: &Partition) -> Result<CMatrix> {
    check_compressed(b, pi, "up")?;
    let n = pi.size();
    let mut out = CMatrix::zeros(n, n);
    for p in 0..n {
        for q in 0..n {
            out[(p, q)] = b[(pi.block_of(p), pi.block_of(q))];
        }
    }
    Ok(out)
}

/// Weighted compression `D^{1/2} down(A) D^{1/2}`.
pub fn ccdown_matrix(a: &CMatrix, pi: &Partition) -> Result<CMatrix> {
    check_ambient(a, pi, "ccdown")?;
    let mut out = down_matrix(a, pi)?;
    let sizes = pi.block_sizes();
    for i in 0..out.nrows() {
        for j in 0..out.ncols() {
            out[(i, j)] *= Complex64::new((sizes[i] as f64 * sizes[j] as f64).sqrt(), 0.0);
        }
    }
    Ok(out)
}

/// Weighted inflation `up(D^{-1/2} B D^{-1/2})`, the inverse of
/// [`ccdown_matrix`] on the closed stratum.
pub fn ccup_matrix(b: &CMatrix, pi: &Partition) -> Result<CMatrix> {
    check_compressed(b, pi, "ccup")?;
    let sizes = pi.block_sizes();
    let n = pi.size();
    let mut out = CMatrix::zeros(n, n);
    for p in 0..n {
        for q in 0..n {
            let (i, j) = (pi.block_of(p), pi.block_of(q));
            out[(p, q)] = b[(i, j)] / Complex64::new((sizes[i] as f64 * sizes[j] as f64).sqrt(), 0.0);
        }
    }
    Ok(out)
}

/// The unit of the closed stratum as an algebra: `ccup(I_m) = Σ_k |I_k|⁻¹ J_{I_k}`.
pub fn algebra_unit(pi: &Partition) -> CMatrix {
    let n = pi.size();
    let mut out = CMatrix::zeros(n, n);
    for block in pi.blocks() {
        let w = Complex64::new(1.0 / block.len() as f64, 0.0);
        for &p in block {
            for &q in block {
                out[(p, q)] = w;
            }
        }
    }
    out
}

fn check_vec(len: usize, expect: usize, what: &str) -> Result<()> {
    if len != expect {
        return Err(Error::DimensionMismatch(format!(
            "{what}: vector of length {len}, expected {expect}"
        )));
    }
    Ok(())
}

/// Block means of a vector: `down(u)_j = |I_j|⁻¹ Σ_{k ∈ I_j} u_k`.
pub fn down_vec(u: &CVector, pi: &Partition) -> Result<CVector> {
    check_vec(u.len(), pi.size(), "down_vec")?;
    Ok(CVector::from_iterator(
        pi.num_blocks(),
        pi.blocks().iter().map(|block| {
            block.iter().map(|&k| u[k]).sum::<Complex64>()
                / Complex64::new(block.len() as f64, 0.0)
        }),
    ))
}

/// Weighted block sums: `ccdown(u)_j = |I_j|^{-1/2} Σ_{k ∈ I_j} u_k`.
pub fn ccdown_vec(u: &CVector, pi: &Partition) -> Result<CVector> {
    check_vec(u.len(), pi.size(), "ccdown_vec")?;
    Ok(CVector::from_iterator(
        pi.num_blocks(),
        pi.blocks().iter().map(|block| {
            block.iter().map(|&k| u[k]).sum::<Complex64>()
                / Complex64::new((block.len() as f64).sqrt(), 0.0)
        }),
    ))
}

/// Constant inflation of a vector: `up(v)_j = v_k` for `j ∈ I_k`.
pub fn up_vec(v: &CVector, pi: &Partition) -> Result<CVector> {
    check_vec(v.len(), pi.num_blocks(), "up_vec")?;
    Ok(CVector::from_iterator(
        pi.size(),
        (0..pi.size()).map(|j| v[pi.block_of(j)]),
    ))
}

/// Weighted inflation of a vector: `ccup(v)_j = |I_k|^{-1/2} v_k` for `j ∈ I_k`.
pub fn ccup_vec(v: &CVector, pi: &Partition) -> Result<CVector> {
    check_vec(v.len(), pi.num_blocks(), "ccup_vec")?;
    let sizes = pi.block_sizes();
    Ok(CVector::from_iterator(
        pi.size(),
        (0..pi.size()).map(|j| {
            let k = pi.block_of(j);
            v[k] / Complex64::new((sizes[k] as f64).sqrt(), 0.0)
        }),
    ))
}

/// The conditional expectation `up ∘ down`: the idempotent projection onto
/// the closed stratum. Fixes exactly the block-constant matrices.
pub fn conditional_expectation(a: &CMatrix, pi: &Partition) -> Result<CMatrix> {
    up_matrix(&down_matrix(a, pi)?, pi)
}

/// An `m×m` matrix tagged with the ambient partition it compresses, so it
/// can be inflated back without re-supplying the bookkeeping.
#[derive(Clone, Debug)]
pub struct CompressedMatrix {
    pub matrix: CMatrix,
    pub partition: Partition,
    /// `true` for a `ccdown` image, `false` for a plain `down` image.
    pub weighted: bool,
}

impl CompressedMatrix {
    /// Compress `a` along `pi` (weighted or plain).
    pub fn compress(a: &CMatrix, pi: &Partition, weighted: bool) -> Result<Self> {
        let matrix = if weighted {
            ccdown_matrix(a, pi)?
        } else {
            down_matrix(a, pi)?
        };
        Ok(CompressedMatrix {
            matrix,
            partition: pi.clone(),
            weighted,
        })
    }

    /// Inflate back to the ambient `n×n` matrix with the matching operator.
    pub fn inflate(&self) -> CMatrix {
        let out = if self.weighted {
            ccup_matrix(&self.matrix, &self.partition)
        } else {
            up_matrix(&self.matrix, &self.partition)
        };
        out.expect("dimensions are consistent by construction")
    }
}
