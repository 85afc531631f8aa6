//! Dense matrices over a [`RingSpec`].
//!
//! Public row/column indices are 1-based. Zero-dimensional matrices are
//! ordinary values: a `1x0` times a `0x1` matrix is the `1x1` zero matrix.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ring::{RingElement, RingSpec};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    // row-major
    entries: Vec<RingElement>,
    spec: RingSpec,
}

impl Matrix {
    pub fn new(
        spec: RingSpec,
        rows: usize,
        cols: usize,
        entries: Vec<RingElement>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                left_rows: rows,
                left_cols: cols,
                right_rows: entries.len(),
                right_cols: 1,
            });
        }
        if let Some(bad) = entries.iter().find(|e| e.spec() != spec) {
            return Err(Error::RingMismatch {
                left: spec,
                right: bad.spec(),
            });
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
            spec,
        })
    }

    /// Builds a matrix from `f(i, j)` with 1-based `i`, `j`.
    pub fn from_fn(
        spec: RingSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> RingElement,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 1..=rows {
            for j in 1..=cols {
                let e = f(i, j);
                assert_eq!(e.spec(), spec, "entry ({i},{j}) in the wrong ring");
                entries.push(e);
            }
        }
        Matrix {
            rows,
            cols,
            entries,
            spec,
        }
    }

    /// Convenience constructor from small integer rows.
    pub fn from_i64_rows<R: AsRef<[i64]>>(spec: RingSpec, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(r) = rows.iter().find(|r| r.as_ref().len() != cols) {
            return Err(Error::DimensionMismatch {
                left_rows: rows.len(),
                left_cols: cols,
                right_rows: 1,
                right_cols: r.as_ref().len(),
            });
        }
        Ok(Self::from_fn(spec, rows.len(), cols, |i, j| {
            spec.from_i64(rows[i - 1].as_ref()[j - 1])
        }))
    }

    pub fn zeros(spec: RingSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![spec.zero(); rows * cols],
            spec,
        }
    }

    pub fn identity(spec: RingSpec, n: usize) -> Self {
        Self::scalar(spec, n, &spec.one())
    }

    /// `c * I_n`.
    pub fn scalar(spec: RingSpec, n: usize, c: &RingElement) -> Self {
        let mut m = Self::zeros(spec, n, n);
        for k in 0..n {
            m.entries[k * n + k] = c.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    /// Entry `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> Option<&RingElement> {
        if (1..=self.rows).contains(&i) && (1..=self.cols).contains(&j) {
            Some(&self.entries[(i - 1) * self.cols + (j - 1)])
        } else {
            None
        }
    }

    /// 0-based access for internal loops.
    #[inline]
    pub(crate) fn at(&self, r: usize, c: usize) -> &RingElement {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, i: usize) -> &[RingElement] {
        &self.entries[(i - 1) * self.cols..i * self.cols]
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn require_same_ring(&self, other: &Matrix) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.spec,
                right: other.spec,
            })
        }
    }

    fn shape_error(&self, other: &Matrix) -> Error {
        Error::DimensionMismatch {
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    /// Standard matrix product.
    pub fn multiply(&self, other: &Matrix) -> Result<Matrix> {
        self.require_same_ring(other)?;
        if self.cols != other.rows {
            return Err(self.shape_error(other));
        }
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut entries = Vec::with_capacity(n * p);
        for r in 0..n {
            for c in 0..p {
                let mut acc = self.spec.zero();
                for k in 0..m {
                    acc = &acc + &(self.at(r, k) * other.at(k, c));
                }
                entries.push(acc);
            }
        }
        Ok(Matrix {
            rows: n,
            cols: p,
            entries,
            spec: self.spec,
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Matrix,
        f: impl Fn(&RingElement, &RingElement) -> RingElement,
    ) -> Result<Matrix> {
        self.require_same_ring(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.shape_error(other));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
            spec: self.spec,
        })
    }

    /// Multiply every entry by `c`.
    pub fn scale(&self, c: &RingElement) -> Result<Matrix> {
        if c.spec() != self.spec {
            return Err(Error::RingMismatch {
                left: self.spec,
                right: c.spec(),
            });
        }
        Ok(self.map(|e| e * c))
    }

    pub(crate) fn map(&self, f: impl Fn(&RingElement) -> RingElement) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
            spec: self.spec,
        }
    }

    /// `self^k` by repeated squaring; `self^0 = I`.
    pub fn power(&self, mut k: u64) -> Result<Matrix> {
        let n = self.require_square()?;
        let mut acc = Matrix::identity(self.spec, n);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.multiply(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.multiply(&base)?;
            }
        }
        Ok(acc)
    }

    /// The block split used at stage `j` of the Berkowitz product.
    ///
    /// With `A_j` the trailing principal submatrix on rows/cols `j..=n`,
    /// `A_j = [[a_jj, R_j], [S_j, M_j]]`. For `j = n` the blocks are
    /// zero-dimensional.
    pub fn decompose(&self, j: usize) -> Result<BlockDecomposition> {
        let n = self.require_square()?;
        if j == 0 || j > n {
            return Err(Error::IndexOutOfRange { index: j, bound: n });
        }
        let base = j - 1;
        let m = n - j;
        let spec = self.spec;
        Ok(BlockDecomposition {
            pivot: self.at(base, base).clone(),
            row_block: Matrix::from_fn(spec, 1, m, |_, c| self.at(base, base + c).clone()),
            col_block: Matrix::from_fn(spec, m, 1, |r, _| self.at(base + r, base).clone()),
            principal: Matrix::from_fn(spec, m, m, |r, c| self.at(base + r, base + c).clone()),
        })
    }

    /// The principal submatrix left after deleting rows and columns
    /// `indices` (1-based, strictly increasing). Deleting nothing returns
    /// the matrix unchanged.
    pub fn delete_rows_cols(&self, indices: &[usize]) -> Result<Matrix> {
        let n = self.require_square()?;
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::UnsortedIndices);
            }
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                bound: n,
            });
        }
        let keep: Vec<usize> = (1..=n)
            .filter(|i| indices.binary_search(i).is_err())
            .collect();
        Ok(self.principal_submatrix(&keep))
    }

    /// Principal submatrix on the given 1-based indices, in order.
    pub(crate) fn principal_submatrix(&self, keep: &[usize]) -> Matrix {
        let k = keep.len();
        Matrix::from_fn(self.spec, k, k, |r, c| {
            self.at(keep[r - 1] - 1, keep[c - 1] - 1).clone()
        })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>{}x{} [", self.spec, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
        }
        write!(f, "]")
    }
}

/// `[[pivot, row_block], [col_block, principal]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub pivot: RingElement,
    pub row_block: Matrix,
    pub col_block: Matrix,
    pub principal: Matrix,
}

impl BlockDecomposition {
    /// Reassemble the square matrix the blocks were cut from.
    pub fn reassemble(&self) -> Matrix {
        let m = self.principal.rows();
        Matrix::from_fn(self.principal.spec(), m + 1, m + 1, |i, j| match (i, j) {
            (1, 1) => self.pivot.clone(),
            (1, c) => self.row_block.at(0, c - 2).clone(),
            (r, 1) => self.col_block.at(r - 2, 0).clone(),
            (r, c) => self.principal.at(r - 2, c - 2).clone(),
        })
    }
}

/// Result of [`tree_product`].
#[derive(Debug, Clone)]
pub struct TreeProduct {
    pub product: Matrix,
    /// Number of pairing rounds; `ceil(log2(len))`.
    pub stages: usize,
}

fn check_chain(ms: &[Matrix]) -> Result<()> {
    if ms.is_empty() {
        return Err(Error::Empty("product of an empty chain"));
    }
    for w in ms.windows(2) {
        w[0].require_same_ring(&w[1])?;
        if w[0].cols != w[1].rows {
            return Err(w[0].shape_error(&w[1]));
        }
    }
    Ok(())
}

/// Left-to-right product by balanced pairing.
///
/// Each round multiplies adjacent pairs `(0,1), (2,3), ...` concurrently; an
/// odd trailing factor is carried to the next round unchanged. The pairing
/// tree depends only on the chain length, so the result does not depend on
/// scheduling.
pub fn tree_product(ms: &[Matrix]) -> Result<TreeProduct> {
    check_chain(ms)?;
    let mut level: Vec<Matrix> = ms.to_vec();
    let mut stages = 0;
    while level.len() > 1 {
        level = level
            .par_chunks(2)
            .map(|pair| match pair {
                [a, b] => a.multiply(b),
                [a] => Ok(a.clone()),
                _ => unreachable!(),
            })
            .collect::<Result<Vec<_>>>()?;
        stages += 1;
    }
    Ok(TreeProduct {
        product: level.pop().expect("nonempty"),
        stages,
    })
}

/// Left fold of `multiply` over the chain.
pub fn chain_product(ms: &[Matrix]) -> Result<Matrix> {
    check_chain(ms)?;
    ms[1..]
        .iter()
        .try_fold(ms[0].clone(), |acc, m| acc.multiply(m))
}

/// `ceil(log2(len))`, with `0` for `len <= 1`.
pub fn ceil_log2(len: usize) -> usize {
    if len <= 1 {
        0
    } else {
        (usize::BITS - (len - 1).leading_zeros()) as usize
    }
}
