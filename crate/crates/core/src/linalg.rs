//! Exact integer matrix algebra.
//!
//! Matrices hold arbitrary-precision entries in row-major order. Lattice bases
//! are stored column-wise: column `j` of a `d x d` matrix is the `j`-th basis
//! vector.
//!
//! The Hermite normal form used throughout is column-style and lower
//! triangular: `h[i][j] == 0` for `j > i`, the diagonal is positive, and every
//! entry left of the diagonal lies in `[0, h[i][i])`. Two full-rank integer
//! matrices generate the same lattice iff their Hermite forms are equal.
//!
//! Smith invariant factors are reported in increasing divisibility order
//! `a_1 | a_2 | ... | a_d`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("matrix must have at least one row and column".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row slices. All rows must have equal length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let data = rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect();
        Self::new(r, c, data)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<BigInt>]) -> Result<Self> {
        let c = columns.len();
        let r = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|col| col.len() != r) {
            return Err(Error::Shape("columns of unequal length".into()));
        }
        let mut m = Self::new(r, c, vec![BigInt::zero(); r * c])?;
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.data[i * c + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// `col[dst] += k * col[src]`
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let idx = i * self.cols + c;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }

    /// Replaces columns `a`, `b` by `(p*a + q*b, r*a + s*b)`.
    fn combine_cols(&mut self, a: usize, b: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
        for i in 0..self.rows {
            let x = self.data[i * self.cols + a].clone();
            let y = self.data[i * self.cols + b].clone();
            self.data[i * self.cols + a] = p * &x + q * &y;
            self.data[i * self.cols + b] = r * &x + s * &y;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Signed determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(i) => {
                    a.swap_rows(i, k);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
        }
        prev = a.get(k, k).clone();
    }
    Ok(sign * a.get(n - 1, n - 1))
}

/// Column-style lower-triangular Hermite normal form of the lattice generated
/// by the columns of `m` (a `d x k` matrix, `k >= d`).
pub fn hermite_normal_form(m: &IntMatrix) -> Result<IntMatrix> {
    let d = m.rows;
    let k = m.cols;
    if k < d {
        return Err(Error::RankDeficient { dim: d });
    }
    let mut a = m.clone();
    for i in 0..d {
        // Fold row i of columns i..k into column i via extended gcd steps.
        for j in i + 1..k {
            if a.get(i, j).is_zero() {
                continue;
            }
            if a.get(i, i).is_zero() {
                a.swap_cols(i, j);
                continue;
            }
            let x = a.get(i, i).clone();
            let y = a.get(i, j).clone();
            let eg = x.extended_gcd(&y);
            let g = eg.gcd;
            // [x y] * [[s, -y/g], [t, x/g]] = [g, 0]; the 2x2 block has det 1.
            let (s, t) = (eg.x, eg.y);
            let (yg, xg) = (&y / &g, &x / &g);
            a.combine_cols(i, j, &s, &t, &-yg, &xg);
        }
        if a.get(i, i).is_zero() {
            return Err(Error::RankDeficient { dim: d });
        }
        if a.get(i, i).is_negative() {
            a.negate_col(i);
        }
    }
    let mut h = IntMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..=i {
            h.set(i, j, a.get(i, j).clone());
        }
    }
    reduce_lower_triangular(&mut h);
    Ok(h)
}

/// Reduces entries left of the diagonal into `[0, h[i][i])`, row by row.
fn reduce_lower_triangular(h: &mut IntMatrix) {
    let d = h.rows;
    for i in 1..d {
        let diag = h.get(i, i).clone();
        for j in 0..i {
            let q = h.get(i, j).div_floor(&diag);
            if !q.is_zero() {
                h.add_col_multiple(j, i, &-q);
            }
        }
    }
}

/// `left * m * right == diag(invariant_factors)`, both transforms unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub diag: Vec<BigInt>,
    pub right: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let n = self.diag.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, a) in self.diag.iter().enumerate() {
            m.set(i, i, a.clone());
        }
        m
    }
}

/// Smith normal form of a nonsingular square matrix with transforms.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithDecomposition> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    if det(m)?.is_zero() {
        return Err(Error::Singular);
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut left = IntMatrix::identity(n);
    let mut right = IntMatrix::identity(n);

    for t in 0..n {
        loop {
            // Pivot: smallest nonzero magnitude in the trailing block.
            let (pi, pj) = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !a.get(i, j).is_zero())
                .min_by(|&(i1, j1), &(i2, j2)| a.get(i1, j1).abs().cmp(&a.get(i2, j2).abs()))
                .expect("nonsingular matrix has a nonzero entry in every trailing block");
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..n {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                a.add_row_multiple(i, t, &-&q);
                left.add_row_multiple(i, t, &-&q);
                dirty |= !a.get(i, t).is_zero();
            }
            for j in t + 1..n {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                a.add_col_multiple(j, t, &-&q);
                right.add_col_multiple(j, t, &-&q);
                dirty |= !a.get(t, j).is_zero();
            }
            if dirty {
                continue;
            }
            // Row and column t are clear; enforce divisibility on the rest.
            let offender = (t + 1..n)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a.get(i, j).is_multiple_of(a.get(t, t)));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }
    let diag = (0..n).map(|i| a.get(i, i).clone()).collect();
    Ok(SmithDecomposition { left, diag, right })
}

/// Cofactor matrix `M` of `m`, characterised by `M^T == det(m) * m^{-1}`.
/// Entries are signed `(d-1) x (d-1)` minors.
pub fn adjugate(m: &IntMatrix) -> Result<IntMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 1 {
        return Ok(IntMatrix::identity(1));
    }
    let mut out = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let minor_data: Vec<BigInt> = (0..n)
                .filter(|&r| r != i)
                .flat_map(|r| (0..n).filter(move |&c| c != j).map(move |c| (r, c)))
                .map(|(r, c)| m.get(r, c).clone())
                .collect();
            let minor = IntMatrix::new(n - 1, n - 1, minor_data)?;
            let mut v = det(&minor)?;
            if (i + j) % 2 == 1 {
                v = -v;
            }
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Solves `h * x == v` for lower-triangular `h` over the rationals.
pub(crate) fn solve_lower_triangular(h: &IntMatrix, v: &[BigInt]) -> Vec<BigRational> {
    let d = h.rows;
    let mut x: Vec<BigRational> = Vec::with_capacity(d);
    for i in 0..d {
        let mut acc = BigRational::from_integer(v[i].clone());
        for (j, xj) in x.iter().enumerate() {
            acc -= xj * BigRational::from_integer(h.get(i, j).clone());
        }
        x.push(acc / BigRational::from_integer(h.get(i, i).clone()));
    }
    x
}

/// Exact inverse over the rationals of a nonsingular square matrix.
pub(crate) fn rational_inverse(m: &IntMatrix) -> Result<Vec<Vec<BigRational>>> {
    let dt = det(m)?;
    if dt.is_zero() {
        return Err(Error::Singular);
    }
    let adj = adjugate(m)?;
    let n = m.rows;
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::new(adj.get(j, i).clone(), dt.clone()))
                .collect()
        })
        .collect())
}

/// Greatest common divisor of all entries (zero for the zero matrix).
pub fn content(m: &IntMatrix) -> BigInt {
    m.data.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&IntMatrix::identity(3)).unwrap(), bi(1));
        assert_eq!(det(&mat(&[&[4, 2], &[1, 3]])).unwrap(), bi(10));
        assert_eq!(det(&mat(&[&[2, 0], &[0, 2]])).unwrap(), bi(4));
        assert_eq!(det(&mat(&[&[0, 1], &[1, 0]])).unwrap(), bi(-1));
        assert_eq!(det(&mat(&[&[1, 2], &[2, 4]])).unwrap(), bi(0));
    }

    #[test]
    fn det_rejects_non_square() {
        assert_eq!(
            det(&mat(&[&[1, 2, 3], &[4, 5, 6]])),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn hnf_is_canonical_for_example_basis() {
        // columns (4,1) and (2,3)
        let n = mat(&[&[4, 2], &[1, 3]]);
        let h = hermite_normal_form(&n).unwrap();
        assert_eq!(h, mat(&[&[2, 0], &[3, 5]]));
        // unimodular recombination: columns (6,4), (2,3)
        let n2 = mat(&[&[6, 2], &[4, 3]]);
        assert_eq!(hermite_normal_form(&n2).unwrap(), h);
    }

    #[test]
    fn hnf_identity_and_redundant_generators() {
        assert_eq!(hermite_normal_form(&IntMatrix::identity(3)).unwrap(), IntMatrix::identity(3));
        let g = mat(&[&[2, 1, 0], &[0, 1, 2]]);
        let h = hermite_normal_form(&g).unwrap();
        assert_eq!(h, mat(&[&[1, 0], &[1, 2]]));
        assert_eq!(det(&h).unwrap(), bi(2));
    }

    #[test]
    fn hnf_rejects_rank_deficient() {
        assert_eq!(
            hermite_normal_form(&mat(&[&[1, 2], &[2, 4]])),
            Err(Error::RankDeficient { dim: 2 })
        );
        assert_eq!(hermite_normal_form(&mat(&[&[1], &[0]])), Err(Error::RankDeficient { dim: 2 }));
    }

    #[test]
    fn smith_examples() {
        let s = smith_normal_form(&mat(&[&[2, 0], &[0, 2]])).unwrap();
        assert_eq!(s.diag, vec![bi(2), bi(2)]);
        let s = smith_normal_form(&mat(&[&[4, 2], &[1, 3]])).unwrap();
        assert_eq!(s.diag, vec![bi(1), bi(10)]);
        let s = smith_normal_form(&mat(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]])).unwrap();
        assert_eq!(s.diag, vec![bi(2), bi(2), bi(2)]);
    }

    #[test]
    fn smith_transforms_reproduce_diagonal() {
        let n = mat(&[&[6, 4, 0], &[2, 8, 2], &[0, 4, 12]]);
        let s = smith_normal_form(&n).unwrap();
        let prod = s.left.mul(&n).unwrap().mul(&s.right).unwrap();
        assert_eq!(prod, s.diagonal_matrix());
        assert_eq!(det(&s.left).unwrap().abs(), bi(1));
        assert_eq!(det(&s.right).unwrap().abs(), bi(1));
        for w in s.diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn smith_rejects_singular() {
        assert_eq!(smith_normal_form(&mat(&[&[1, 2], &[2, 4]])), Err(Error::Singular));
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(adjugate(&IntMatrix::identity(3)).unwrap(), IntMatrix::identity(3));
        let n = mat(&[&[4, 2], &[1, 3]]);
        let m = adjugate(&n).unwrap();
        assert_eq!(m, mat(&[&[3, -1], &[-2, 4]]));
        // M^T N = det * I
        let prod = m.transpose().mul(&n).unwrap();
        assert_eq!(prod, mat(&[&[10, 0], &[0, 10]]));
        assert_eq!(adjugate(&mat(&[&[2, 0], &[0, 2]])).unwrap(), mat(&[&[2, 0], &[0, 2]]));
    }
}
