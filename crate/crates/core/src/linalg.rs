//! Dense matrices over GF(p) with Gaussian elimination.

use crate::prime::PrimeField;

#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    fp: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl std::fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl FpMatrix {
    pub fn zeros(fp: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            fp,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(fp: PrimeField, n: usize) -> Self {
        let mut a = Self::zeros(fp, n, n);
        for i in 0..n {
            a.set(i, i, 1);
        }
        a
    }

    pub fn from_fn(
        fp: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> Self {
        let mut a = Self::zeros(fp, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                a.set(i, j, fp.reduce(f(i, j) as u64));
            }
        }
        a
    }

    /// Panics if rows have unequal lengths.
    pub fn from_rows(fp: PrimeField, rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Self::from_fn(fp, rows.len(), cols, |i, j| rows[i][j])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &PrimeField {
        &self.fp
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.fp, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let fp = self.fp;
        let mut out = Self::zeros(fp, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = fp.add(out.get(i, j), fp.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let s: u64 = self
                    .row(i)
                    .iter()
                    .zip(x)
                    .map(|(&a, &b)| a as u64 * b as u64 % self.fp.p() as u64)
                    .sum();
                self.fp.reduce(s)
            })
            .collect()
    }

    /// Row-vector `x` times the matrix times column-vector `y`.
    pub fn bilinear(&self, x: &[u32], y: &[u32]) -> u32 {
        let hy = self.apply(y);
        let s: u64 = x
            .iter()
            .zip(&hy)
            .map(|(&a, &b)| a as u64 * b as u64 % self.fp.p() as u64)
            .sum();
        self.fp.reduce(s)
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let (r, pivots, _) = self.rref_tracked();
        (r, pivots)
    }

    /// Like [`FpMatrix::rref`], also returning an invertible T with T * self = R.
    pub fn rref_tracked(&self) -> (FpMatrix, Vec<usize>, FpMatrix) {
        let fp = self.fp;
        let mut a = self.clone();
        let mut t = FpMatrix::identity(fp, self.rows);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| a.get(i, c) != 0) else {
                continue;
            };
            a.swap_rows(piv, r);
            t.swap_rows(piv, r);
            let inv = fp.inv(a.get(r, c)).expect("pivot is nonzero");
            a.scale_row(r, inv);
            t.scale_row(r, inv);
            for i in 0..self.rows {
                if i != r {
                    let f = a.get(i, c);
                    if f != 0 {
                        a.add_row_multiple(i, r, fp.neg(f));
                        t.add_row_multiple(i, r, fp.neg(f));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots, t)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space {x : A x = 0}.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref();
        let fp = self.fp;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u32; self.cols];
                v[f] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = fp.neg(r.get(i, f));
                }
                v
            })
            .collect()
    }

    /// Basis of the column space: the pivot columns of the matrix itself.
    pub fn column_space(&self) -> Vec<Vec<u32>> {
        let (_, pivots) = self.rref();
        pivots
            .iter()
            .map(|&c| (0..self.rows).map(|i| self.get(i, c)).collect())
            .collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: u32) {
        for j in 0..self.cols {
            let v = self.fp.mul(self.get(i, j), c);
            self.set(i, j, v);
        }
    }

    /// row[dst] += c * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: u32) {
        for j in 0..self.cols {
            let v = self.fp.add(self.get(dst, j), self.fp.mul(c, self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    /// col[dst] += c * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: u32) {
        for i in 0..self.rows {
            let v = self.fp.add(self.get(i, dst), self.fp.mul(c, self.get(i, src)));
            self.set(i, dst, v);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

/// Solves A x = b for a fixed A by caching the elimination transform.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    transform: FpMatrix,
    pivots: Vec<usize>,
    cols: usize,
}

impl LinearSolver {
    pub fn new(a: &FpMatrix) -> Self {
        let (_, pivots, transform) = a.rref_tracked();
        LinearSolver {
            transform,
            pivots,
            cols: a.cols(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self, b: &[u32]) -> bool {
        let c = self.transform.apply(b);
        c[self.rank()..].iter().all(|&v| v == 0)
    }

    /// Some solution with every free variable set to zero, if one exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        let c = self.transform.apply(b);
        if c[self.rank()..].iter().any(|&v| v != 0) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (i, &pc) in self.pivots.iter().enumerate() {
            x[pc] = c[i];
        }
        Some(x)
    }
}

/// Picks the member of a coset x + span(vectors) with the smallest base-p
/// little-endian encoding (highest index most significant).
#[derive(Clone, Debug)]
pub struct CosetReducer {
    fp: PrimeField,
    /// Echelon rows together with their leading position (most significant nonzero index).
    rows: Vec<(usize, Vec<u32>)>,
}

impl CosetReducer {
    pub fn new(fp: PrimeField, n: usize, vectors: &[Vec<u32>]) -> Self {
        if vectors.is_empty() {
            return CosetReducer {
                fp,
                rows: Vec::new(),
            };
        }
        // Reverse coordinates so that standard RREF pivots land on the most significant digit.
        let reversed: Vec<Vec<u32>> = vectors
            .iter()
            .map(|v| v.iter().rev().copied().collect())
            .collect();
        let (r, pivots) = FpMatrix::from_rows(fp, &reversed).rref();
        let rows = pivots
            .iter()
            .enumerate()
            .map(|(i, &pc)| {
                let v: Vec<u32> = r.row(i).iter().rev().copied().collect();
                (n - 1 - pc, v)
            })
            .collect();
        CosetReducer { fp, rows }
    }

    pub fn reduce(&self, x: &[u32]) -> Vec<u32> {
        let mut x = x.to_vec();
        for (lead, row) in &self.rows {
            let c = x[*lead];
            if c != 0 {
                let neg = self.fp.neg(c);
                for (xi, &ri) in x.iter_mut().zip(row) {
                    *xi = self.fp.add(*xi, self.fp.mul(neg, ri));
                }
            }
        }
        x
    }
}
