//! Dense matrices over cyclotomic fields and exact Gaussian elimination.

use std::fmt;

use crate::error::{Error, Result};
use crate::numbers::{lcm, CycNum};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    data: Vec<CycNum>,
}

impl CycMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<CycNum>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(CycMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<CycNum>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CycMatrix { rows, cols, data: vec![CycNum::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, CycNum::one())
    }

    pub fn scalar(n: usize, s: CycNum) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = s.clone();
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycNum) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.data
    }

    /// Least common multiple of the entry conductors.
    pub fn conductor(&self) -> u64 {
        self.data.iter().fold(1, |acc, x| lcm(acc, x.conductor()))
    }

    /// Re-expresses every entry in the field of conductor `m`.
    pub fn lift(&self, m: u64) -> Result<Self> {
        let data = self.data.iter().map(|x| x.lift(m)).collect::<Result<_>>()?;
        Ok(CycMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_mul(&self, other: &CycMatrix) -> Result<CycMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        // Entries are produced in the common field so that zero entries carry
        // the same conductor as non-zero ones (keys depend on it).
        let target = lcm(self.conductor(), other.conductor());
        let zero = CycNum::zero_in(target)?;
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = zero.clone();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.try_add(&a.try_mul(b)?)?;
                }
                out.push(acc);
            }
        }
        Ok(CycMatrix { rows: self.rows, cols: other.cols, data: out })
    }

    pub fn transpose(&self) -> CycMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        CycMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn trace(&self) -> CycNum {
        (0..self.rows.min(self.cols)).fold(CycNum::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<CycMatrix> {
        if !self.is_square() {
            return Err(Error::NotInvertible);
        }
        let n = self.rows;
        let mut aug: Vec<Vec<CycNum>> = (0..n)
            .map(|i| {
                let mut row: Vec<CycNum> = (0..n).map(|j| self.get(i, j).clone()).collect();
                row.extend((0..n).map(|j| CycNum::from_int((i == j) as i64)));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !aug[r][c].is_zero()).ok_or(Error::NotInvertible)?;
            aug.swap(c, p);
            let inv = aug[c][c].inv()?;
            for x in aug[c].iter_mut() {
                *x = x.try_mul(&inv)?;
            }
            let pivot = aug[c].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r == c || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    if !y.is_zero() {
                        *x = x.try_sub(&f.try_mul(y)?)?;
                    }
                }
            }
        }
        let data = aug.into_iter().flat_map(|row| row.into_iter().skip(n)).collect();
        Ok(CycMatrix { rows: n, cols: n, data })
    }

    /// `Some(s)` if the matrix equals `s · Id`.
    pub fn as_scalar(&self) -> Option<CycNum> {
        if !self.is_square() {
            return None;
        }
        let s = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                let ok = if i == j { *x == s } else { x.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(s)
    }

    /// Canonical key; entries must share a conductor for keys to be comparable.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.data.iter().map(CycNum::key).collect();
        format!("{}x{}[{}]", self.rows, self.cols, parts.join(";"))
    }

    pub fn to_rows(&self) -> Vec<Vec<CycNum>> {
        self.data.chunks(self.cols).map(<[CycNum]>::to_vec).collect()
    }
}

impl fmt::Display for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.data.chunks(self.cols).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Incrementally maintained reduced row echelon basis of a subspace of `K^dim`.
///
/// Every stored row has a leading 1 in its pivot column, and the pivot
/// columns are zero in all other rows, so coordinates of a vector in the span
/// can be read off at the pivots.
#[derive(Clone, Debug)]
pub struct EchelonSpan {
    dim: usize,
    rows: Vec<Vec<CycNum>>,
    pivots: Vec<usize>,
}

impl EchelonSpan {
    pub fn new(dim: usize) -> Self {
        EchelonSpan { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors<I: IntoIterator<Item = Vec<CycNum>>>(dim: usize, vectors: I) -> Self {
        let mut span = Self::new(dim);
        for v in vectors {
            span.insert(v);
        }
        span
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<CycNum>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residue of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &[CycNum]) -> Vec<CycNum> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[CycNum]) -> bool {
        self.reduce(v).iter().all(CycNum::is_zero)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<CycNum>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length does not match span dimension");
        let mut r = self.reduce(&v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv().expect("non-zero pivot");
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    /// Coordinates of `v` with respect to the stored rows, if `v` is in the span.
    pub fn coordinates(&self, v: &[CycNum]) -> Option<Vec<CycNum>> {
        let coords: Vec<CycNum> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut check = v.to_vec();
        for (c, row) in coords.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in check.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(c * y);
                }
            }
        }
        check.iter().all(CycNum::is_zero).then_some(coords)
    }
}

/// Rank of a family of vectors of common length `dim`.
pub fn rank_of(dim: usize, vectors: impl IntoIterator<Item = Vec<CycNum>>) -> usize {
    EchelonSpan::from_vectors(dim, vectors).rank()
}

/// Basis of the kernel of the linear map whose matrix has the given rows
/// (each row of length `ncols`). Basis vectors are indexed by free columns in
/// increasing order, with a 1 in their own free column.
pub fn nullspace(rows: &[Vec<CycNum>], ncols: usize) -> Vec<Vec<CycNum>> {
    let span = EchelonSpan::from_vectors(ncols, rows.iter().cloned());
    let pivots = span.pivots();
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![CycNum::zero(); ncols];
            v[free] = CycNum::one();
            for (row, &p) in span.rows().iter().zip(pivots) {
                v[p] = -&row[free];
            }
            v
        })
        .collect()
}

/// Transposes a list of columns (each of length `nrows`) into rows.
pub fn columns_to_rows(cols: &[Vec<CycNum>], nrows: usize) -> Vec<Vec<CycNum>> {
    (0..nrows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

pub type IntMatrix = Vec<Vec<i64>>;

pub fn int_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect()
        })
        .collect()
}

pub fn int_transpose(a: &IntMatrix) -> IntMatrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn int_identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn int_det(a: &IntMatrix) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// True iff `g` is upper triangular with ones on the diagonal.
pub fn is_unitriangular(g: &IntMatrix) -> bool {
    g.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, &x)| match i.cmp(&j) {
            std::cmp::Ordering::Equal => x == 1,
            std::cmp::Ordering::Greater => x == 0,
            std::cmp::Ordering::Less => true,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> CycMatrix {
        CycMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| CycNum::from_int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.try_mul(&inv).unwrap(), CycMatrix::identity(2));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn nullspace_and_rank() {
        let rows = vec![
            vec![CycNum::from_int(1), CycNum::from_int(2), CycNum::from_int(3)],
            vec![CycNum::from_int(2), CycNum::from_int(4), CycNum::from_int(6)],
        ];
        assert_eq!(rank_of(3, rows.clone()), 1);
        let ker = nullspace(&rows, 3);
        assert_eq!(ker.len(), 2);
        for v in ker {
            let dot = rows[0].iter().zip(&v).fold(CycNum::zero(), |acc, (a, b)| acc + a * b);
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn span_coordinates() {
        let mut s = EchelonSpan::new(3);
        assert!(s.insert(vec![CycNum::from_int(0), CycNum::from_int(2), CycNum::from_int(2)]));
        assert!(s.insert(vec![CycNum::from_int(1), CycNum::from_int(1), CycNum::from_int(0)]));
        assert!(!s.insert(vec![CycNum::from_int(2), CycNum::from_int(4), CycNum::from_int(2)]));
        let v = vec![CycNum::from_int(3), CycNum::from_int(5), CycNum::from_int(2)];
        let c = s.coordinates(&v).unwrap();
        // Stored rows are (1, 0, -1) and (0, 1, 1).
        assert_eq!(c, vec![CycNum::from_int(3), CycNum::from_int(5)]);
        assert!(s.coordinates(&[CycNum::from_int(0), CycNum::from_int(0), CycNum::from_int(1)]).is_none());
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(int_det(&vec![vec![2, 1], vec![7, 4]]), 1);
        assert_eq!(int_det(&vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(int_det(&vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]), -3);
    }
}
