//! Dense matrices over an exact field.
//!
//! Row-major storage. Every reduction uses the first nonzero entry of the
//! leftmost unfinished column as pivot, so bases are reproducible.

use std::fmt;

use rand::Rng;

use crate::field::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<K: Field> {
    field: K,
    rows: usize,
    cols: usize,
    data: Vec<K::Elem>,
}

impl<K: Field> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| self.field.format(x)).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<K: Field> {
    pub reduced: Matrix<K>,
    pub pivots: Vec<usize>,
}

impl<K: Field> Matrix<K> {
    pub fn new(field: &K, rows: usize, cols: usize, data: Vec<K::Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows * cols");
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(field: &K, rows: usize, cols: usize) -> Self {
        Matrix::new(field, rows, cols, vec![field.zero(); rows * cols])
    }

    pub fn identity(field: &K, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: &K, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix::new(field, rows, cols, data)
    }

    /// Builds a matrix from integer rows. All rows must have equal length.
    pub fn from_i64(field: &K, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix::from_fn(field, rows.len(), cols, |r, c| field.from_i64(rows[r][c]))
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: &K, rows: usize, columns: &[Vec<K::Elem>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "column length mismatch");
        Matrix::from_fn(field, rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn random<R: Rng + ?Sized>(field: &K, rows: usize, cols: usize, rng: &mut R) -> Self {
        Matrix::from_fn(field, rows, cols, |_, _| field.random(rng))
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &K::Elem {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: K::Elem) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[K::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<K::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<K::Elem>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn entries(&self) -> &[K::Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn check_field(&self, other: &Self) {
        assert!(self.field == other.field, "matrices over different fields");
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_field(other);
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let f = &self.field;
        let mut out = vec![f.zero(); self.rows * other.cols];
        for r in 0..self.rows {
            let dst = &mut out[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for (c, d) in dst.iter_mut().enumerate() {
                    let b = other.get(k, c);
                    if !f.is_zero(b) {
                        *d = f.mul_add(a, b, d);
                    }
                }
            }
        }
        Matrix::new(f, self.rows, other.cols, out)
    }

    pub fn apply(&self, v: &[K::Elem]) -> Vec<K::Elem> {
        assert_eq!(v.len(), self.cols, "shape mismatch in apply");
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| if f.is_zero(a) || f.is_zero(b) { acc } else { f.mul_add(a, b, &acc) })
            })
            .collect()
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&K::Elem, &K::Elem) -> K::Elem) -> Self {
        self.check_field(other);
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect();
        Matrix::new(&self.field, self.rows, self.cols, data)
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.field.clone();
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = self.field.clone();
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    pub fn scale(&self, s: &K::Elem) -> Self {
        let data = self.data.iter().map(|x| self.field.mul(s, x)).collect();
        Matrix::new(&self.field, self.rows, self.cols, data)
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|x| self.field.neg(x)).collect();
        Matrix::new(&self.field, self.rows, self.cols, data)
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(&self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn hstack(field: &K, rows: usize, parts: &[&Self]) -> Self {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "row mismatch in hstack");
            out.set_block(0, off, p);
            off += p.cols;
        }
        out
    }

    pub fn vstack(field: &K, cols: usize, parts: &[&Self]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "column mismatch in vstack");
            out.set_block(off, 0, p);
            off += p.rows;
        }
        out
    }

    /// Overwrites the block whose top-left corner is `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Matrix::from_fn(&self.field, rows, cols, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    /// Kronecker product: the block at `(i, j)` is `self[i][j] * other`.
    pub fn kron(&self, other: &Self) -> Self {
        self.check_field(other);
        let f = &self.field;
        Matrix::from_fn(f, self.rows * other.rows, self.cols * other.cols, |r, c| {
            f.mul(self.get(r / other.rows, c / other.cols), other.get(r % other.rows, c % other.cols))
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Matrix::from_fn(&self.field, self.rows, cols.len(), |r, c| self.get(r, cols[c]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Matrix::from_fn(&self.field, rows.len(), self.cols, |r, c| self.get(rows[r], c).clone())
    }

    /// Reduced row echelon form by first-pivot Gaussian elimination.
    pub fn echelon(&self) -> Echelon<K> {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !f.is_zero(m.get(r, col))) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = f.inv(m.get(row, col));
            for c in col..m.cols {
                let x = f.mul(&inv, m.get(row, c));
                m.set(row, c, x);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                let factor = f.neg(&factor);
                for c in col..m.cols {
                    let x = m.get(row, c);
                    if !f.is_zero(x) {
                        let y = f.mul_add(&factor, x, m.get(r, c));
                        m.set(r, c, y);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Columns form a basis of the null space.
    pub fn kernel_basis(&self) -> Self {
        let f = &self.field;
        let Echelon { reduced, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, f.one());
            for (r, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, f.neg(reduced.get(r, fc)));
            }
        }
        k
    }

    /// Columns form a basis of the column space: the pivot columns of `self`.
    pub fn image_basis(&self) -> Self {
        self.select_columns(&self.echelon().pivots)
    }

    /// Some `x` with `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        self.check_field(b);
        assert_eq!(self.rows, b.rows, "shape mismatch in solve");
        let f = &self.field;
        let aug = Matrix::hstack(f, self.rows, &[self, b]);
        let Echelon { reduced, pivots } = aug.echelon();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(f, self.cols, b.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(pc, c, reduced.get(r, self.cols + c).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let x = self.solve(&Matrix::identity(&self.field, self.rows))?;
        if self.rank() == self.rows {
            Some(x)
        } else {
            None
        }
    }

    /// Standard basis vectors extending the columns of `sub` to a basis of
    /// the ambient space, chosen greedily in index order.
    pub fn complement_basis(sub: &Self, ambient: usize) -> Self {
        assert_eq!(sub.rows, ambient, "shape mismatch in complement");
        let f = &sub.field;
        let aug = Matrix::hstack(f, ambient, &[sub, &Matrix::identity(f, ambient)]);
        let chosen: Vec<usize> = aug.echelon().pivots.into_iter().filter(|&p| p >= sub.cols).map(|p| p - sub.cols).collect();
        Matrix::identity(f, ambient).select_columns(&chosen)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;
    use rand::SeedableRng;

    /// Row reduction written independently of `echelon`: plain integers
    /// modulo a small prime, Fermat inverses, no pivot bookkeeping.
    fn oracle_rank(rows: &[Vec<i64>], p: i64) -> usize {
        let mut a: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
        let cols = a.first().map_or(0, |r| r.len());
        let pow = |mut b: i64, mut e: i64| {
            let mut acc = 1;
            while e > 0 {
                if e % 2 == 1 {
                    acc = acc * b % p;
                }
                b = b * b % p;
                e /= 2;
            }
            acc
        };
        let mut rank = 0;
        for c in 0..cols {
            if let Some(i) = (rank..a.len()).find(|&i| a[i][c] != 0) {
                a.swap(rank, i);
                let inv = pow(a[rank][c], p - 2);
                for i in 0..a.len() {
                    if i != rank && a[i][c] != 0 {
                        let t = a[i][c] * inv % p;
                        for k in 0..cols {
                            a[i][k] = (a[i][k] - t * a[rank][k]).rem_euclid(p);
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    #[test]
    fn identity_has_full_rank() {
        assert_eq!(Matrix::identity(&f7(), 2).rank(), 2);
    }

    #[test]
    fn kernel_of_row_one_one() {
        let q = Rationals;
        let m = Matrix::from_i64(&q, &[&[1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.shape(), (2, 1));
        assert_eq!(k.column(0), vec![q.from_i64(-1), q.from_i64(1)]);
    }

    #[test]
    fn random_ranks_match_oracle() {
        let f = f7();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let rows: Vec<Vec<i64>> = (0..5).map(|_| (0..5).map(|_| rand::Rng::gen_range(&mut rng, 0..7)).collect()).collect();
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let m = Matrix::from_i64(&f, &refs);
            assert_eq!(m.rank(), oracle_rank(&rows, 7));
        }
    }

    #[test]
    fn inverse_of_singular_is_none() {
        let m = Matrix::from_i64(&Rationals, &[&[1, 2], &[2, 4]]);
        assert!(m.inverse().is_none());
        let m = Matrix::from_i64(&Rationals, &[&[1, 2], &[3, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(&Rationals, 2));
    }

    #[test]
    #[should_panic(expected = "shape mismatch")]
    fn product_shape_is_checked() {
        let f = f7();
        Matrix::zeros(&f, 2, 3).mul(&Matrix::zeros(&f, 2, 3));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r))
    }

    fn build(rows: &[Vec<i64>]) -> Matrix<PrimeField> {
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        Matrix::from_i64(&f7(), &refs)
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in small_matrix()) {
            let m = build(&rows);
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.cols(), m.cols());
            prop_assert!(m.mul(&k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
            prop_assert_eq!(m.rank(), oracle_rank(&rows, 7));
        }

        #[test]
        fn image_and_complement_span(rows in small_matrix()) {
            let m = build(&rows);
            let im = m.image_basis();
            prop_assert_eq!(im.rank(), im.cols());
            prop_assert_eq!(im.cols(), m.rank());
            let comp = Matrix::complement_basis(&im, m.rows());
            let all = Matrix::hstack(m.field(), m.rows(), &[&im, &comp]);
            prop_assert_eq!(all.rank(), m.rows());
            prop_assert_eq!(all.cols(), m.rows());
        }

        #[test]
        fn solve_is_exact(rows in small_matrix(), seed in 0u64..1000) {
            let m = build(&rows);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let x = Matrix::random(m.field(), m.cols(), 2, &mut rng);
            let b = m.mul(&x);
            let y = m.solve(&b).expect("consistent system");
            prop_assert_eq!(m.mul(&y), b);
        }
    }
}
