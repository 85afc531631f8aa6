//! Berkowitz's division-free characteristic polynomial.
//!
//! For an `n x n` matrix `A`, stage `j` contributes a lower-triangular
//! Toeplitz matrix `C_j` of shape `(n+2-j) x (n+1-j)` whose first column is
//! `(1, -a_jj, -R_j S_j, -R_j M_j S_j, -R_j M_j^2 S_j, ...)`. The product
//! `C_1 C_2 ... C_n` is the coefficient vector of `det(xI - A)`, highest
//! degree first. Only ring additions and multiplications are used.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{ceil_log2, tree_product, Matrix};
use crate::ring::{is_unit, RingElement, RingSpec};

/// How to evaluate the product of Toeplitz factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Right-to-left matrix-vector fold, never materializing `C_j`.
    #[default]
    Sequential,
    /// Columns built concurrently, then a balanced product tree over the
    /// expanded `C_j`.
    Parallel,
}

/// First column of the Toeplitz factor `C_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToeplitzColumn {
    pub j: usize,
    pub entries: Vec<RingElement>,
}

impl ToeplitzColumn {
    /// Expand to the `r x (r-1)` lower-triangular Toeplitz matrix.
    pub fn expand(&self) -> Matrix {
        let r = self.entries.len();
        let spec = self.entries[0].spec();
        Matrix::from_fn(spec, r, r - 1, |i, k| {
            if i >= k {
                self.entries[i - k].clone()
            } else {
                spec.zero()
            }
        })
    }
}

/// Coefficients `(p_n, ..., p_0)` of `det(xI - A)`, highest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoefficientVector {
    pub coeffs: Vec<RingElement>,
}

impl CoefficientVector {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^d`.
    pub fn coeff(&self, d: usize) -> &RingElement {
        &self.coeffs[self.degree() - d]
    }

    pub fn evaluate(&self, x: &RingElement) -> RingElement {
        let mut acc = x.spec().zero();
        for c in &self.coeffs {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `sum_i p_i X^i` for a square matrix `X`, by Horner's rule.
    pub fn evaluate_matrix(&self, x: &Matrix) -> Result<Matrix> {
        let n = x.require_square()?;
        let spec = x.spec();
        let mut acc = Matrix::zeros(spec, n, n);
        for c in &self.coeffs {
            acc = acc.multiply(x)?.add(&Matrix::scalar(spec, n, c))?;
        }
        Ok(acc)
    }
}

/// Polynomial in `x` with square matrix coefficients, highest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixPolynomial {
    pub coeff_matrices: Vec<Matrix>,
}

impl MatrixPolynomial {
    pub fn degree(&self) -> usize {
        self.coeff_matrices.len().saturating_sub(1)
    }

    pub fn evaluate(&self, x: &RingElement) -> Result<Matrix> {
        let first = &self.coeff_matrices[0];
        let mut acc = Matrix::zeros(first.spec(), first.rows(), first.cols());
        for m in &self.coeff_matrices {
            acc = acc.scale(x)?.add(m)?;
        }
        Ok(acc)
    }
}

/// Stage counts of the parallel evaluation schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DepthReport {
    pub n: usize,
    /// Doubling rounds needed to produce every power `M_1^k`, `k <= n-2`.
    pub column_stages: usize,
    /// Pairing rounds of the product tree over `C_1..C_n`.
    pub product_stages: usize,
    /// `column_stages * product_stages`, the `O(log^2 n)` proxy.
    pub total_stages: usize,
}

fn check_input(a: &Matrix) -> Result<usize> {
    let n = a.require_square()?;
    if n == 0 {
        return Err(Error::Empty("0x0 matrix has no characteristic polynomial"));
    }
    Ok(n)
}

/// Dot product of two equal-length slices.
fn dot(spec: RingSpec, u: &[RingElement], v: &[RingElement]) -> RingElement {
    u.iter()
        .zip(v)
        .fold(spec.zero(), |acc, (a, b)| &acc + &(a * b))
}

/// Row vector times matrix.
fn row_times(spec: RingSpec, v: &[RingElement], m: &Matrix) -> Vec<RingElement> {
    (0..m.cols())
        .map(|c| (0..m.rows()).fold(spec.zero(), |acc, r| &acc + &(&v[r] * m.at(r, c))))
        .collect()
}

/// First column of `C_j`, `1 <= j <= n`.
///
/// The row vectors `R M^k` are built incrementally, so each power of `M` is
/// applied once and shared by all later entries.
pub fn build_toeplitz_column(a: &Matrix, j: usize) -> Result<ToeplitzColumn> {
    let blocks = a.decompose(j)?;
    let spec = a.spec();
    let m = blocks.principal.rows();
    let s: Vec<RingElement> = blocks.col_block.entries().to_vec();
    let mut entries = Vec::with_capacity(m + 2);
    entries.push(spec.one());
    entries.push(-&blocks.pivot);
    let mut v = blocks.row_block.entries().to_vec();
    for k in 0..m {
        entries.push(-dot(spec, &v, &s));
        if k + 1 < m {
            v = row_times(spec, &v, &blocks.principal);
        }
    }
    Ok(ToeplitzColumn { j, entries })
}

/// Expand a Toeplitz column to its lower-triangular matrix.
pub fn expand_toeplitz(col: &ToeplitzColumn) -> Matrix {
    col.expand()
}

/// All Toeplitz columns `C_1..C_n`; built concurrently in parallel mode.
pub fn toeplitz_columns(a: &Matrix, mode: Mode) -> Result<Vec<ToeplitzColumn>> {
    let n = check_input(a)?;
    match mode {
        Mode::Sequential => (1..=n).map(|j| build_toeplitz_column(a, j)).collect(),
        Mode::Parallel => (1..=n)
            .into_par_iter()
            .map(|j| build_toeplitz_column(a, j))
            .collect(),
    }
}

/// The product `C_1 C_2 ... C_n` of previously built columns.
pub fn multiply_columns(columns: &[ToeplitzColumn], mode: Mode) -> Result<CoefficientVector> {
    let Some(first) = columns.first() else {
        return Err(Error::Empty("no Toeplitz columns"));
    };
    let spec = first.entries[0].spec();
    Ok(match mode {
        Mode::Sequential => fold_columns(spec, columns),
        Mode::Parallel => {
            let factors: Vec<Matrix> = columns.par_iter().map(ToeplitzColumn::expand).collect();
            let product = tree_product(&factors)?.product;
            CoefficientVector {
                coeffs: product.entries().to_vec(),
            }
        }
    })
}

/// Characteristic polynomial `det(xI - A)` of a nonempty square matrix.
pub fn char_poly(a: &Matrix, mode: Mode) -> Result<CoefficientVector> {
    multiply_columns(&toeplitz_columns(a, mode)?, mode)
}

/// `C_1 (C_2 (... C_n))` using only the first columns.
fn fold_columns(spec: RingSpec, columns: &[ToeplitzColumn]) -> CoefficientVector {
    let (last, rest) = columns.split_last().expect("n >= 1");
    let mut v = last.entries.clone();
    for col in rest.iter().rev() {
        let c = &col.entries;
        debug_assert_eq!(c.len(), v.len() + 1);
        v = (0..c.len())
            .map(|i| {
                (0..=i.min(v.len() - 1)).fold(spec.zero(), |acc, k| &acc + &(&c[i - k] * &v[k]))
            })
            .collect();
    }
    CoefficientVector { coeffs: v }
}

/// `det(A) = (-1)^n p_0`.
pub fn determinant(a: &Matrix) -> Result<RingElement> {
    let p = char_poly(a, Mode::Sequential)?;
    Ok(det_from_char_poly(&p))
}

/// `(-1)^n p_0` for a degree-`n` characteristic polynomial.
pub fn det_from_char_poly(p: &CoefficientVector) -> RingElement {
    p.coeff(0).signed(p.degree() % 2 == 1)
}

/// `adj(xI - M)` as a polynomial in `x`, built from the characteristic
/// polynomial `q` of `M`.
///
/// With `m = dim M`, the coefficient of `x^(m-1-d)` is
/// `q_m M^d + q_(m-1) M^(d-1) + ... + q_(m-d) I`, computed by Horner's rule.
pub fn adjoint_poly(m: &Matrix) -> Result<MatrixPolynomial> {
    let q = char_poly(m, Mode::Sequential)?;
    let size = m.rows();
    let spec = m.spec();
    let mut coeff_matrices = Vec::with_capacity(size);
    let mut b = Matrix::scalar(spec, size, &q.coeffs[0]);
    coeff_matrices.push(b.clone());
    for qc in &q.coeffs[1..size] {
        b = m.multiply(&b)?.add(&Matrix::scalar(spec, size, qc))?;
        coeff_matrices.push(b.clone());
    }
    Ok(MatrixPolynomial { coeff_matrices })
}

/// Classical adjugate, `A adj(A) = det(A) I`, without division.
///
/// From `p(A) = 0` with `p(x) = x^n + p_(n-1) x^(n-1) + ... + p_0`:
/// `adj(A) = (-1)^(n-1) (A^(n-1) + p_(n-1) A^(n-2) + ... + p_1 I)`.
pub fn adjoint(a: &Matrix) -> Result<Matrix> {
    let p = char_poly(a, Mode::Sequential)?;
    adjoint_from_char_poly(a, &p)
}

fn adjoint_from_char_poly(a: &Matrix, p: &CoefficientVector) -> Result<Matrix> {
    let n = a.rows();
    let spec = a.spec();
    let mut acc = Matrix::identity(spec, n);
    for c in &p.coeffs[1..n] {
        acc = a.multiply(&acc)?.add(&Matrix::scalar(spec, n, c))?;
    }
    Ok(if n.is_multiple_of(2) {
        acc.map(|e| -e)
    } else {
        acc
    })
}

/// Matrix inverse as `adj(A) / det(A)`.
///
/// Over the integers this only succeeds when `det(A) = ±1`.
pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let p = char_poly(a, Mode::Sequential)?;
    let det = det_from_char_poly(&p);
    if det.is_zero() {
        return Err(Error::Singular);
    }
    if !is_unit(&det) {
        return Err(Error::Unsupported(
            "determinant is not a unit of the integer ring",
        ));
    }
    let det_inv = match det {
        // ±1 is its own inverse
        RingElement::Int(_) => det,
        _ => det.inverse()?,
    };
    adjoint_from_char_poly(a, &p)?.scale(&det_inv)
}

/// Stage counts for the parallel schedule on an `n x n` input.
pub fn depth_report(a: &Matrix) -> Result<DepthReport> {
    let n = check_input(a)?;
    Ok(depth_for_size(n))
}

pub fn depth_for_size(n: usize) -> DepthReport {
    // powers M^0..M^(n-2) of the (n-1)x(n-1) block; doubling reaches 2^r
    let column_stages = ceil_log2(n.saturating_sub(2).max(1));
    let product_stages = ceil_log2(n);
    DepthReport {
        n,
        column_stages,
        product_stages,
        total_stages: column_stages.max(1) * product_stages,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64_rows(RingSpec::Integer, rows).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<RingElement> {
        v.iter().map(|&x| RingSpec::Integer.from_i64(x)).collect()
    }

    fn labelled(n: usize) -> Matrix {
        Matrix::from_fn(RingSpec::Integer, n, n, |i, j| {
            RingSpec::Integer.from_i64((10 * i + j) as i64)
        })
    }

    #[test]
    fn toeplitz_column_4x4_first_stage() {
        let a = labelled(4);
        let d = a.decompose(1).unwrap();
        let scalar = |m: Matrix| m.entries()[0].clone();
        let rs = scalar(d.row_block.multiply(&d.col_block).unwrap());
        let rms = scalar(
            d.row_block
                .multiply(&d.principal)
                .unwrap()
                .multiply(&d.col_block)
                .unwrap(),
        );
        let rm2s = scalar(
            d.row_block
                .multiply(&d.principal.power(2).unwrap())
                .unwrap()
                .multiply(&d.col_block)
                .unwrap(),
        );
        let col = build_toeplitz_column(&a, 1).unwrap();
        assert_eq!(
            col.entries,
            vec![
                RingSpec::Integer.one(),
                RingSpec::Integer.from_i64(-11),
                -rs,
                -rms,
                -rm2s
            ]
        );
    }

    #[test]
    fn toeplitz_column_edges() {
        let a = labelled(4);
        assert_eq!(
            build_toeplitz_column(&a, 4).unwrap().entries,
            ints(&[1, -44])
        );
        let i3 = Matrix::identity(RingSpec::Integer, 3);
        assert_eq!(
            build_toeplitz_column(&i3, 1).unwrap().entries,
            ints(&[1, -1, 0, 0])
        );
        assert!(build_toeplitz_column(&a, 0).is_err());
        assert!(build_toeplitz_column(&a, 5).is_err());
    }

    #[test]
    fn expand_examples() {
        let col = ToeplitzColumn {
            j: 1,
            entries: ints(&[1, -7]),
        };
        assert_eq!(col.expand(), int(&[&[1], &[-7]]));
        let col = ToeplitzColumn {
            j: 1,
            entries: ints(&[1, -2, -3]),
        };
        assert_eq!(expand_toeplitz(&col), int(&[&[1, 0], &[-2, 1], &[-3, -2]]));
        let col = ToeplitzColumn {
            j: 1,
            entries: ints(&[1, -2, -3, -4, -5]),
        };
        assert_eq!(
            col.expand(),
            int(&[
                &[1, 0, 0, 0],
                &[-2, 1, 0, 0],
                &[-3, -2, 1, 0],
                &[-4, -3, -2, 1],
                &[-5, -4, -3, -2]
            ])
        );
    }

    #[test]
    fn char_poly_examples() {
        for mode in [Mode::Sequential, Mode::Parallel] {
            assert_eq!(
                char_poly(&int(&[&[5]]), mode).unwrap().coeffs,
                ints(&[1, -5])
            );
            let (a, b, c, d) = (3, -7, 2, 5);
            assert_eq!(
                char_poly(&int(&[&[a, b], &[c, d]]), mode).unwrap().coeffs,
                ints(&[1, -(a + d), a * d - b * c])
            );
            assert_eq!(
                char_poly(&int(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]), mode)
                    .unwrap()
                    .coeffs,
                ints(&[1, -6, 11, -6])
            );
        }
    }

    #[test]
    fn char_poly_rejects_bad_shapes() {
        assert!(matches!(
            char_poly(&int(&[&[1, 2]]), Mode::Sequential),
            Err(Error::NotSquare { .. })
        ));
        let empty = Matrix::zeros(RingSpec::Integer, 0, 0);
        assert!(matches!(
            char_poly(&empty, Mode::Sequential),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn determinant_examples() {
        for n in 1..5 {
            assert_eq!(
                determinant(&Matrix::identity(RingSpec::Integer, n)).unwrap(),
                RingSpec::Integer.one()
            );
        }
        assert_eq!(
            determinant(&int(&[&[3, -7], &[2, 5]])).unwrap(),
            RingSpec::Integer.from_i64(29)
        );
        assert_eq!(
            determinant(&int(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]])).unwrap(),
            RingSpec::Integer.from_i64(6)
        );
    }

    #[test]
    fn adjoint_examples() {
        for n in 1..5 {
            let i = Matrix::identity(RingSpec::Integer, n);
            assert_eq!(adjoint(&i).unwrap(), i);
        }
        assert_eq!(
            adjoint(&int(&[&[3, -7], &[2, 5]])).unwrap(),
            int(&[&[5, 7], &[-2, 3]])
        );
        assert_eq!(adjoint(&int(&[&[9]])).unwrap(), int(&[&[1]]));
        let a = labelled(4);
        let det = determinant(&a).unwrap();
        assert_eq!(
            a.multiply(&adjoint(&a).unwrap()).unwrap(),
            Matrix::scalar(RingSpec::Integer, 4, &det)
        );
    }

    #[test]
    fn adjoint_poly_examples() {
        // 1x1: B(x) = I
        let b = adjoint_poly(&int(&[&[7]])).unwrap();
        assert_eq!(b.coeff_matrices, vec![int(&[&[1]])]);

        // 3x3 M: B(x) = I q3 x^2 + (M q3 + I q2) x + (M^2 q3 + M q2 + I q1)
        let m = labelled(3);
        let q = char_poly(&m, Mode::Sequential).unwrap();
        let s = RingSpec::Integer;
        let i = Matrix::identity(s, 3);
        let expected = vec![
            i.scale(&q.coeffs[0]).unwrap(),
            m.scale(&q.coeffs[0])
                .unwrap()
                .add(&i.scale(&q.coeffs[1]).unwrap())
                .unwrap(),
            m.power(2)
                .unwrap()
                .scale(&q.coeffs[0])
                .unwrap()
                .add(&m.scale(&q.coeffs[1]).unwrap())
                .unwrap()
                .add(&i.scale(&q.coeffs[2]).unwrap())
                .unwrap(),
        ];
        assert_eq!(adjoint_poly(&m).unwrap().coeff_matrices, expected);
    }

    #[test]
    fn adjoint_poly_of_identity_at_sample_points() {
        let s = RingSpec::Integer;
        let m = Matrix::identity(s, 2);
        let b = adjoint_poly(&m).unwrap();
        let q = char_poly(&m, Mode::Sequential).unwrap();
        for x in 0..3 {
            let x = s.from_i64(x);
            let lhs = b
                .evaluate(&x)
                .unwrap()
                .multiply(&Matrix::scalar(s, 2, &x).sub(&m).unwrap())
                .unwrap();
            assert_eq!(lhs, Matrix::scalar(s, 2, &q.evaluate(&x)));
        }
    }

    #[test]
    fn inverse_examples() {
        let q = RingSpec::Rational;
        let i = Matrix::identity(q, 3);
        assert_eq!(inverse(&i).unwrap(), i);
        let a = Matrix::from_i64_rows(q, &[[1, 1], [0, 1]]).unwrap();
        assert_eq!(
            inverse(&a).unwrap(),
            Matrix::from_i64_rows(q, &[[1, -1], [0, 1]]).unwrap()
        );
        let z7 = RingSpec::prime_field(7).unwrap();
        let singular = Matrix::from_i64_rows(z7, &[[1, 2], [2, 4]]).unwrap();
        assert!(matches!(inverse(&singular), Err(Error::Singular)));

        // integer ring: only unimodular matrices invert
        let u = int(&[&[2, 1], &[1, 1]]);
        assert_eq!(inverse(&u).unwrap(), int(&[&[1, -1], &[-1, 2]]));
        let nu = int(&[&[2, 0], &[0, 1]]);
        assert!(matches!(inverse(&nu), Err(Error::Unsupported(_))));
        assert!(matches!(inverse(&int(&[&[0]])), Err(Error::Singular)));
    }

    #[test]
    fn depth_examples() {
        let d = |n| depth_report(&Matrix::identity(RingSpec::Integer, n)).unwrap();
        assert_eq!(d(1).product_stages, 0);
        assert_eq!(d(4).product_stages, 2);
        assert_eq!(d(8).product_stages, 3);
        assert_eq!(d(64).product_stages, 6);
        for n in 1..200 {
            let r = depth_for_size(n);
            let l = ceil_log2(n);
            assert!(r.total_stages <= l.max(1) * l.max(1), "{r:?}");
        }
    }

    #[test]
    fn polynomial_evaluation() {
        let p = CoefficientVector {
            coeffs: ints(&[1, -6, 11, -6]),
        };
        for (x, y) in [(0, -6), (1, 0), (2, 0), (4, 6)] {
            assert_eq!(
                p.evaluate(&RingSpec::Integer.from_i64(x)),
                RingSpec::Integer.from_i64(y)
            );
        }
        assert_eq!(p.coeff(0), &RingSpec::Integer.from_i64(-6));
        assert_eq!(p.coeff(3), &RingSpec::Integer.one());
    }
}
