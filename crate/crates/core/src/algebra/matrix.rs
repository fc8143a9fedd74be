use std::collections::HashMap;

use super::ring::{Field, Ring};
use crate::error::{Error, Result};

/// Dense row-major matrix over a ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R: Ring> {
    ring: R,
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(ring: &R, rows: usize, cols: usize) -> Self {
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &R, n: usize) -> Self {
        Self::from_fn(ring, n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> R::Elem>(ring: &R, rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(ring: &R, rows: Vec<Vec<R::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            ring: ring.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = &self.ring;
        Ok(Self::from_fn(r, self.rows, other.cols, |i, j| {
            let mut acc = r.zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if r.is_zero(a) {
                    continue;
                }
                acc = r.add(&acc, &r.mul(a, other.get(k, j)));
            }
            acc
        }))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("shape mismatch in sum".into()));
        }
        Ok(Self::from_fn(&self.ring, self.rows, self.cols, |i, j| {
            self.ring.add(self.get(i, j), other.get(i, j))
        }))
    }

    pub fn map<S: Ring, F: Fn(&R::Elem) -> S::Elem>(&self, ring: &S, f: F) -> Matrix<S> {
        Matrix {
            ring: ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.ring.is_zero(x))
    }

    /// Division-free Laplace expansion along rows, memoized on the set of
    /// columns still available. Exact over any commutative ring.
    pub fn det_expansion(&self) -> Result<R::Elem> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n > 20 {
            return Err(Error::Dimension("matrix too large for expansion".into()));
        }
        let mut memo: HashMap<u32, R::Elem> = HashMap::new();
        Ok(self.minor_rec(0, (1u32 << n) - 1, &mut memo))
    }

    fn minor_rec(&self, row: usize, cols: u32, memo: &mut HashMap<u32, R::Elem>) -> R::Elem {
        if cols == 0 {
            return self.ring.one();
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let r = &self.ring;
        let mut acc = r.zero();
        let mut sign_pos = true;
        for j in 0..self.cols {
            if cols & (1 << j) == 0 {
                continue;
            }
            let a = self.get(row, j);
            if !r.is_zero(a) {
                let sub = self.minor_rec(row + 1, cols & !(1 << j), memo);
                let t = r.mul(a, &sub);
                acc = if sign_pos { r.add(&acc, &t) } else { r.sub(&acc, &t) };
            }
            sign_pos = !sign_pos;
        }
        memo.insert(cols, acc.clone());
        acc
    }
}

impl<R: Field> Matrix<R> {
    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let r = &self.ring;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !r.is_zero(m.get(i, col))) else {
                continue;
            };
            m.swap_rows(p, row);
            let inv = r.inv(m.get(row, col)).expect("nonzero pivot");
            for j in 0..m.cols {
                let v = r.mul(m.get(row, j), &inv);
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row || r.is_zero(m.get(i, col)) {
                    continue;
                }
                let f = m.get(i, col).clone();
                for j in 0..m.cols {
                    let v = r.sub(m.get(i, j), &r.mul(&f, m.get(row, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let r = &self.ring;
        let aug = Self::from_fn(r, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                r.one()
            } else {
                r.zero()
            }
        });
        let (red, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        Some(Self::from_fn(r, n, n, |i, j| red.get(i, j + n).clone()))
    }

    /// Determinant by elimination.
    pub fn det(&self) -> Result<R::Elem> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let r = &self.ring;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = r.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !r.is_zero(m.get(i, col))) else {
                return Ok(r.zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = r.neg(&det);
            }
            let piv = m.get(col, col).clone();
            det = r.mul(&det, &piv);
            let inv = r.inv(&piv).expect("nonzero pivot");
            for i in col + 1..n {
                if r.is_zero(m.get(i, col)) {
                    continue;
                }
                let f = r.mul(m.get(i, col), &inv);
                for j in col..n {
                    let v = r.sub(m.get(i, j), &r.mul(&f, m.get(col, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<R::Elem>> {
        let r = &self.ring;
        let (red, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![r.zero(); self.cols];
                v[f] = r.one();
                for (k, &p) in piv.iter().enumerate() {
                    v[p] = r.neg(red.get(k, f));
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Gf2k, Integers};
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn integer_determinant() {
        let z = Integers;
        let m = Matrix::from_rows(
            &z,
            vec![
                vec![2, 0, 1].into_iter().map(BigInt::from).collect(),
                vec![1, 3, 2].into_iter().map(BigInt::from).collect(),
                vec![1, 1, 1].into_iter().map(BigInt::from).collect(),
            ],
        )
        .unwrap();
        assert_eq!(m.det_expansion().unwrap(), BigInt::from(0));
    }

    #[test]
    fn inverse_and_det_agree_with_expansion() {
        let f = Gf2k::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m = Matrix::from_fn(&f, 5, 5, |_, _| f.random(&mut rng));
            assert_eq!(m.det().unwrap(), m.det_expansion().unwrap());
            match m.inverse() {
                Some(inv) => assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&f, 5)),
                None => assert!(f.is_zero(&m.det().unwrap())),
            }
        }
    }

    #[test]
    fn rank_ignores_row_order() {
        let f = Gf2k::default();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = Matrix::from_fn(&f, 3, 6, |_, _| f.random(&mut rng));
        let stacked = Matrix::from_fn(&f, 4, 6, |i, j| a.get(i % 3, j).clone());
        let mut rev = stacked.clone();
        rev.swap_rows(0, 3);
        assert_eq!(stacked.rank(), 3);
        assert_eq!(rev.rank(), 3);
        for v in a.kernel() {
            let col = Matrix::from_fn(&f, 6, 1, |i, _| v[i]);
            assert!(a.mul(&col).unwrap().is_zero());
        }
    }
}
