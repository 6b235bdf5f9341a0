//! Matrices over a prime field F_q with small q.

use std::fmt;

/// Row-major matrix with entries reduced into `0..q`. The modulus is not
/// stored; every operation takes it explicitly from the backend.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMat {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FqMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        FqMat { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        FqMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Columns `start..end` as a new matrix.
    pub fn col_slice(&self, start: usize, end: usize) -> Self {
        Self::from_fn(self.rows, end - start, |r, c| self.get(r, start + c))
    }

    /// Block matrix `[self | rhs]`.
    pub fn hcat(&self, rhs: &FqMat) -> Self {
        assert_eq!(self.rows, rhs.rows);
        Self::from_fn(self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                rhs.get(r, c - self.cols)
            }
        })
    }

    /// Block matrix `[self ; rhs]`.
    pub fn vcat(&self, rhs: &FqMat) -> Self {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        FqMat {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self, q: u32) -> Self {
        FqMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| (q - v) % q).collect(),
        }
    }

    pub fn mul(&self, rhs: &FqMat, q: u32) -> FqMat {
        assert_eq!(self.cols, rhs.rows, "F_q matrix shape");
        let q = q as u64;
        let mut out = FqMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc += self.get(i, k) as u64 * rhs.get(k, j) as u64;
                }
                out.set(i, j, (acc % q) as u32);
            }
        }
        out
    }

    /// Reduced row echelon form; zero rows are dropped. Returns the pivots.
    pub fn rref(&self, q: u32) -> (FqMat, Vec<usize>) {
        let mut m = self.clone();
        let qq = q as u64;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = inv_mod(m.get(row, col), q) as u64;
            for c in 0..m.cols {
                let v = m.get(row, c) as u64 * inv % qq;
                m.set(row, c, v as u32);
            }
            for r in 0..m.rows {
                let f = m.get(r, col) as u64;
                if r == row || f == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let sub = f * m.get(row, c) as u64 % qq;
                    let v = (m.get(r, c) as u64 + qq - sub) % qq;
                    m.set(r, c, v as u32);
                }
            }
            pivots.push(col);
            row += 1;
        }
        m.data.truncate(row * m.cols);
        m.rows = row;
        (m, pivots)
    }

    pub fn rank(&self, q: u32) -> usize {
        self.rref(q).1.len()
    }

    /// Basis (as rows, in RREF) of the right kernel `{v : self * v = 0}`.
    pub fn kernel(&self, q: u32) -> FqMat {
        let (r, pivots) = self.rref(q);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = FqMat::zeros(free.len(), self.cols);
        for (i, &f) in free.iter().enumerate() {
            basis.set(i, f, 1);
            for (pr, &p) in pivots.iter().enumerate() {
                basis.set(i, p, (q - r.get(pr, f)) % q);
            }
        }
        basis.rref(q).0
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self, q: u32) -> Option<FqMat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let (r, pivots) = self.hcat(&FqMat::identity(n)).rref(q);
        if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
            return None;
        }
        Some(r.col_slice(n, 2 * n))
    }
}

impl fmt::Debug for FqMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|r| format!("{:?}", self.row(r)))
            .collect();
        write!(f, "{}x{}[{}]", self.rows, self.cols, rows.join(" "))
    }
}

pub fn inv_mod(a: u32, q: u32) -> u32 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (q as i64, a as i64);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    assert_eq!(r, 1, "{a} is not invertible mod {q}");
    t.rem_euclid(q as i64) as u32
}

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
