//! Dense linear algebra over the prime field `F_p`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{check_prime, mod_inv};
use crate::error::{Error, Result};

/// An element of `F_p`, always reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FpScalar {
    pub p: u32,
    pub value: u32,
}

impl FpScalar {
    pub fn new(p: u32, value: i64) -> Self {
        FpScalar {
            p,
            value: value.rem_euclid(p as i64) as u32,
        }
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inverse(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(FpScalar {
            p: self.p,
            value: mod_inv(self.value as u64, self.p as u64) as u32,
        })
    }

}

impl std::ops::Mul for FpScalar {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        FpScalar {
            p: self.p,
            value: ((self.value as u64 * other.value as u64) % self.p as u64) as u32,
        }
    }
}

impl std::ops::Add for FpScalar {
    type Output = Self;

    fn add(self, other: Self) -> Self {
        FpScalar {
            p: self.p,
            value: (self.value + other.value) % self.p,
        }
    }
}

impl std::ops::Neg for FpScalar {
    type Output = Self;

    fn neg(self) -> Self {
        FpScalar {
            p: self.p,
            value: (self.p - self.value) % self.p,
        }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A vector over `F_p`; the prime is carried by the surrounding context.
pub type FpVector = Vec<u32>;

/// Row-major dense matrix over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FpMatrix {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u32>,
}

/// Which binary operation [`mat_arith`] performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatOp {
    Add,
    Mul,
}

/// Output of [`FpMatrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix {
            p,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, size: usize) -> Self {
        let mut m = Self::zeros(p, size, size);
        for i in 0..size {
            m.entries[i * size + i] = 1 % p;
        }
        m
    }

    /// Builds a matrix from signed rows, reducing every entry mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        check_prime(p)?;
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: format!("{cols} columns"),
                got: bad.len().to_string(),
            });
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|&x| x.rem_euclid(p as i64) as u32)
            .collect();
        Ok(FpMatrix {
            p,
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.entries[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.entries[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                got: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a + b) % self.p)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(self.p - 1))
    }

    pub fn scale(&self, factor: u32) -> Self {
        let p = self.p as u64;
        FpMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|&a| (a as u64 * factor as u64 % p) as u32)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch {
                left: self.p,
                right: other.p,
            });
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                got: format!("{} rows", other.rows),
            });
        }
        let p = self.p as u64;
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let s: u64 = (0..self.cols)
                    .map(|k| self.get(r, k) as u64 * other.get(k, c) as u64)
                    .sum();
                out.entries[r * other.cols + c] = (s % p) as u32;
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[u32]) -> FpVector {
        assert_eq!(v.len(), self.cols, "vector length");
        let p = self.p as u64;
        (0..self.rows)
            .map(|r| {
                let s: u64 = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (s % p) as u32
            })
            .collect()
    }

    /// Pfaffian of an alternating matrix, by expansion along the first row.
    pub fn pfaffian(&self) -> Result<FpScalar> {
        if !self.is_square() || self.rows % 2 == 1 {
            return Err(Error::DimensionMismatch {
                expected: "square matrix of even size".into(),
                got: format!("{}x{}", self.rows, self.cols),
            });
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(FpScalar {
            p: self.p,
            value: self.pfaffian_of(&idx) as u32,
        })
    }

    fn pfaffian_of(&self, idx: &[usize]) -> u64 {
        let p = self.p as u64;
        if idx.is_empty() {
            return 1;
        }
        let first = idx[0];
        let mut acc = 0u64;
        for (k, &j) in idx.iter().enumerate().skip(1) {
            let a = self.get(first, j) as u64;
            if a == 0 {
                continue;
            }
            let rest: Vec<usize> = idx[1..].iter().copied().filter(|&x| x != j).collect();
            let term = a * self.pfaffian_of(&rest) % p;
            // sign (−1)^{k+1} for the k-th column of the remaining block
            acc = if k % 2 == 1 { (acc + term) % p } else { (acc + p - term) % p };
        }
        acc
    }

    pub fn det(&self) -> Result<FpScalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                got: format!("{}x{}", self.rows, self.cols),
            });
        }
        let p = self.p as u64;
        let n = self.rows;
        let mut m = self.entries.clone();
        let mut det = 1u64;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| m[r * n + col] != 0) else {
                return Ok(FpScalar { p: self.p, value: 0 });
            };
            if piv != col {
                for c in 0..n {
                    m.swap(piv * n + c, col * n + c);
                }
                det = (p - det) % p;
            }
            let pv = m[col * n + col] as u64;
            det = det * pv % p;
            let inv = mod_inv(pv, p);
            for r in col + 1..n {
                let f = m[r * n + col] as u64 * inv % p;
                if f == 0 {
                    continue;
                }
                for c in col..n {
                    let v = (m[r * n + c] as u64 + p * p - f * m[col * n + c] as u64) % p;
                    m[r * n + c] = v as u32;
                }
            }
        }
        Ok(FpScalar {
            p: self.p,
            value: det as u32,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                got: format!("{}x{}", self.rows, self.cols),
            });
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.p, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let red = aug.rref();
        if red.pivots.len() < n || red.pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut out = Self::zeros(self.p, n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, red.matrix.get(r, n + c));
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form with rank and pivot columns.
    pub fn rref(&self) -> Rref {
        let p = self.p as u64;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.entries.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = mod_inv(m.get(row, col) as u64, p);
            for c in 0..m.cols {
                let v = m.get(row, c) as u64 * inv % p;
                m.entries[row * m.cols + c] = v as u32;
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col) as u64;
                if f == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let v = (m.get(r, c) as u64 + p * p - f * m.get(row, c) as u64) % p;
                    m.entries[r * m.cols + c] = v as u32;
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref {
            rank: pivots.len(),
            matrix: m,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right kernel `{x : self·x = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<FpVector> {
        let red = self.rref();
        let p = self.p;
        let free: Vec<usize> = (0..self.cols).filter(|c| !red.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u32; self.cols];
                v[f] = 1;
                for (i, &pc) in red.pivots.iter().enumerate() {
                    v[pc] = (p - red.matrix.get(i, f)) % p;
                }
                // scale so the leading nonzero entry is 1
                let lead = *v.iter().find(|&&x| x != 0).expect("nonzero");
                let inv = mod_inv(lead as u64, p as u64);
                v.iter()
                    .map(|&x| (x as u64 * inv % p as u64) as u32)
                    .collect()
            })
            .collect()
    }

    /// The nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_space_basis(&self) -> FpMatrix {
        let red = self.rref();
        FpMatrix {
            p: self.p,
            rows: red.rank,
            cols: self.cols,
            entries: red.matrix.entries[..red.rank * self.cols].to_vec(),
        }
    }
}

/// `a + b` or `a · b`.
pub fn mat_arith(a: &FpMatrix, b: &FpMatrix, which: MatOp) -> Result<FpMatrix> {
    match which {
        MatOp::Add => a.add(b),
        MatOp::Mul => a.mul(b),
    }
}

/// Some `x` with `a · x = b`, or `None` when the system is inconsistent.
pub fn solve(a: &FpMatrix, b: &FpMatrix) -> Result<Option<FpMatrix>> {
    if a.p != b.p {
        return Err(Error::PrimeMismatch {
            left: a.p,
            right: b.p,
        });
    }
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch {
            expected: format!("{} rows", a.rows),
            got: format!("{} rows", b.rows),
        });
    }
    let mut aug = FpMatrix::zeros(a.p, a.rows, a.cols + b.cols);
    for r in 0..a.rows {
        for c in 0..a.cols {
            aug.set(r, c, a.get(r, c));
        }
        for c in 0..b.cols {
            aug.set(r, a.cols + c, b.get(r, c));
        }
    }
    let red = aug.rref();
    if red.pivots.iter().any(|&c| c >= a.cols) {
        return Ok(None);
    }
    let mut x = FpMatrix::zeros(a.p, a.cols, b.cols);
    for (i, &pc) in red.pivots.iter().enumerate() {
        for c in 0..b.cols {
            x.set(pc, c, red.matrix.get(i, a.cols + c));
        }
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pfaffian_squares_to_determinant() {
        let j = FpMatrix::from_rows(
            5,
            &[vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![-1, 0, 0, 0], vec![0, -1, 0, 0]],
        )
        .unwrap();
        // Pf([[0, I], [−I, 0]]) = (−1)^{n(n−1)/2} with n = 2
        assert_eq!(j.pfaffian().unwrap().value, 4);
        let a = FpMatrix::from_rows(
            7,
            &[vec![0, 1, 2, 3], vec![-1, 0, 4, 5], vec![-2, -4, 0, 6], vec![-3, -5, -6, 0]],
        )
        .unwrap();
        let pf = a.pfaffian().unwrap();
        assert_eq!(pf * pf, a.det().unwrap());
        // af − be + cd = 6 − 10 + 12
        assert_eq!(pf.value, 8 % 7);
    }
    use proptest::prelude::*;

    fn m(p: u32, rows: &[&[i64]]) -> FpMatrix {
        FpMatrix::from_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn det_and_inverse_examples() {
        assert_eq!(FpMatrix::identity(3, 2).det().unwrap().value, 1);
        let a = m(3, &[&[2, 2], &[1, 2]]);
        assert_eq!(a.det().unwrap().value, 2);
        assert_eq!(a.inverse().unwrap(), m(3, &[&[1, 2], &[1, 1]]));
        assert_eq!(m(3, &[&[1, 1], &[2, 2]]).inverse(), Err(Error::Singular));
    }

    #[test]
    fn dimension_errors() {
        let a = FpMatrix::identity(3, 2);
        let b = FpMatrix::zeros(3, 3, 1);
        assert!(matches!(
            mat_arith(&a, &b, MatOp::Mul),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            mat_arith(&a, &b, MatOp::Add),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(solve(&a, &b).is_err());
    }

    #[test]
    fn rref_examples() {
        let z = FpMatrix::zeros(3, 2, 2);
        let r = z.rref();
        assert_eq!((r.matrix, r.rank), (z.clone(), 0));

        let r = m(3, &[&[2, 0], &[0, 1]]).rref();
        assert_eq!(r.matrix, FpMatrix::identity(3, 2));
        assert_eq!(r.rank, 2);

        let r = m(3, &[&[1, 1], &[2, 2]]).rref();
        assert_eq!(r.matrix, m(3, &[&[1, 1], &[0, 0]]));
        assert_eq!((r.rank, r.pivots), (1, vec![0]));
    }

    #[test]
    fn solve_examples() {
        let b = m(3, &[&[1, 2], &[0, 1]]);
        assert_eq!(solve(&FpMatrix::identity(3, 2), &b).unwrap(), Some(b));
        let a = m(3, &[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&a, &m(3, &[&[0], &[1]])).unwrap(), None);
        let a = m(3, &[&[1, 1]]);
        assert!(solve(&a, &m(3, &[&[0]])).unwrap().is_some());
        assert_eq!(a.kernel_basis(), vec![vec![1, 2]]);
    }

    fn arb_square(p: u32, n: usize) -> impl Strategy<Value = FpMatrix> {
        proptest::collection::vec(0..p, n * n).prop_map(move |entries| FpMatrix {
            p,
            rows: n,
            cols: n,
            entries,
        })
    }

    fn arb_rect(p: u32) -> impl Strategy<Value = FpMatrix> {
        (1usize..5, 1usize..6).prop_flat_map(move |(r, c)| {
            proptest::collection::vec(0..p, r * c).prop_map(move |entries| FpMatrix {
                p,
                rows: r,
                cols: c,
                entries,
            })
        })
    }

    proptest! {
        #[test]
        fn inverse_laws(a in arb_square(5, 3)) {
            let d = a.det().unwrap();
            if !d.is_zero() {
                let inv = a.inverse().unwrap();
                prop_assert_eq!(a.mul(&inv).unwrap(), FpMatrix::identity(5, 3));
                prop_assert_eq!(inv.det().unwrap(), d.inverse().unwrap());
            } else {
                prop_assert!(a.inverse().is_err());
            }
        }

        #[test]
        fn rank_nullity_and_rref(a in arb_rect(7), u in arb_square(7, 4)) {
            prop_assert_eq!(a.rank() + a.kernel_basis().len(), a.cols);
            for v in a.kernel_basis() {
                prop_assert!(a.apply(&v).iter().all(|&x| x == 0));
            }
            let r = a.rref();
            prop_assert_eq!(r.matrix.rref().matrix, r.matrix.clone());
            if a.rows == 4 && !u.det().unwrap().is_zero() {
                prop_assert_eq!(u.mul(&a).unwrap().rref().matrix, r.matrix);
            }
        }
    }
}
