//! Dense matrices over `Q(ζ_p)` and the labelled operators built from them.

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CycNum;
use crate::symplectic::OrientedLagrangian;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycMatrix {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<CycNum>,
}

impl CycMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        CycMatrix {
            p,
            rows,
            cols,
            entries: vec![CycNum::zero(p); rows * cols],
        }
    }

    pub fn identity(p: u32, size: usize) -> Self {
        let mut m = Self::zeros(p, size, size);
        for i in 0..size {
            m.entries[i * size + i] = CycNum::one(p);
        }
        m
    }

    pub fn scalar(p: u32, size: usize, value: &CycNum) -> Self {
        let mut m = Self::zeros(p, size, size);
        for i in 0..size {
            m.entries[i * size + i] = value.clone();
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &CycNum {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: CycNum) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * other.cols + c;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn scale(&self, factor: &CycNum) -> CycMatrix {
        CycMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn add(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CycMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CycMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn trace(&self) -> CycNum {
        (0..self.rows.min(self.cols)).fold(CycNum::zero(self.p), |acc, i| &acc + self.get(i, i))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CycNum::is_zero)
    }

    /// Some(c) when the matrix equals `c · I`.
    pub fn as_scalar(&self) -> Option<CycNum> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0).clone();
        for r in 0..self.rows {
            for col in 0..self.cols {
                let expect_zero = r != col;
                let v = self.get(r, col);
                if (expect_zero && !v.is_zero()) || (!expect_zero && *v != c) {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// First `(row, col)` at which two equally shaped matrices differ.
    pub fn first_difference(&self, other: &CycMatrix) -> Option<(usize, usize)> {
        (0..self.rows * self.cols)
            .find(|&i| self.entries[i] != other.entries[i])
            .map(|i| (i / self.cols, i % self.cols))
    }

    /// Exact rank by Gaussian elimination over `Q(ζ_p)`.
    pub fn rank(&self) -> usize {
        rank_of_rows(self.cols, (0..self.rows).map(|r| self.row(r).to_vec()))
    }

    pub fn row(&self, r: usize) -> &[CycNum] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }
}

/// Rank of the row space spanned by `rows`, reduced incrementally so that
/// only an echelon basis (at most `cols` rows) is ever kept.
pub fn rank_of_rows<I>(cols: usize, rows: I) -> usize
where
    I: IntoIterator<Item = Vec<CycNum>>,
{
    // basis rows are normalized: pivot entry 1, sorted by pivot
    let mut basis: Vec<(usize, Vec<CycNum>)> = Vec::new();
    for mut row in rows {
        assert_eq!(row.len(), cols);
        for (pc, b) in &basis {
            if row[*pc].is_zero() {
                continue;
            }
            let f = row[*pc].clone();
            for c in *pc..cols {
                if !b[c].is_zero() {
                    row[c] = &row[c] - &(&f * &b[c]);
                }
            }
        }
        if let Some(pc) = row.iter().position(|x| !x.is_zero()) {
            let inv = row[pc].inverse().expect("nonzero");
            for x in row.iter_mut().skip(pc) {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
            // keep the basis fully reduced at the new pivot
            for (_, b) in basis.iter_mut() {
                if b[pc].is_zero() {
                    continue;
                }
                let f = b[pc].clone();
                for c in pc..cols {
                    if !row[c].is_zero() {
                        b[c] = &b[c] - &(&f * &row[c]);
                    }
                }
            }
            basis.push((pc, row));
            basis.sort_by_key(|(pc, _)| *pc);
            if basis.len() == cols {
                break;
            }
        }
    }
    basis.len()
}

/// A `p^n × p^n` operator between two Lagrangian models. `source` and
/// `target` name the models when the operator is an intertwiner or a
/// Heisenberg action; they are `None` for products whose labels are implied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilOperator {
    pub source: Option<OrientedLagrangian>,
    pub target: Option<OrientedLagrangian>,
    pub matrix: CycMatrix,
}

impl WeilOperator {
    pub fn dim(&self) -> usize {
        self.matrix.rows
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeilOperator) -> WeilOperator {
        WeilOperator {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&other.matrix),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::psi;

    #[test]
    fn rank_of_small_matrices() {
        let p = 3;
        let mut m = CycMatrix::identity(p, 3);
        assert_eq!(m.rank(), 3);
        m.set(2, 2, CycNum::zero(p));
        assert_eq!(m.rank(), 2);
        // rows (1, ζ) and (ζ, ζ²) are proportional
        let rows = vec![
            vec![CycNum::one(p), psi(p, 1)],
            vec![psi(p, 1), psi(p, 2)],
        ];
        assert_eq!(rank_of_rows(2, rows), 1);
    }

    #[test]
    fn scalar_detection_and_trace() {
        let p = 5;
        let s = CycMatrix::scalar(p, 4, &psi(p, 2));
        assert_eq!(s.as_scalar(), Some(psi(p, 2)));
        assert_eq!(s.trace(), psi(p, 2).scale_int(4));
        let mut t = s.clone();
        t.set(0, 1, CycNum::one(p));
        assert_eq!(t.as_scalar(), None);
        assert_eq!(t.first_difference(&s), Some((0, 1)));
    }
}
