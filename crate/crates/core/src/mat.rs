//! Dense exact matrices and Gaussian elimination.
//!
//! All kernel, image and complement bases returned here are canonical: they are
//! read off a reduced echelon form, so two calls on equal inputs always agree
//! entry for entry. Downstream code compares bases for equality and relies on it.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, PartialEq)]
pub struct Mat<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Outcome of [`Mat::solve`].
#[derive(Clone, Debug, PartialEq)]
pub enum Solution<F: Field> {
    /// One particular solution per target column (free variables set to zero)
    /// together with a canonical basis of the kernel.
    Solved { particular: Mat<F>, kernel: Mat<F> },
    /// The first target column that is not in the column space.
    NoSolution { column: usize },
}

/// A complement of the column space together with the quotient projection.
///
/// `projection * complement = I`, `projection * a = 0`, and the columns of
/// `complement` are standard basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Cokernel<F: Field> {
    pub complement: Mat<F>,
    pub projection: Mat<F>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Mat<F> {
        Mat {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Mat<F> {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Mat<F> {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_vec(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Mat<F> {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from integer rows, reducing into the field.
    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Mat<F> {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == nc), "ragged rows");
        Mat::from_fn(field, nr, nc, |r, c| field.from_i64(rows[r][c]))
    }

    pub fn column_vector(field: &F, v: Vec<F::Elem>) -> Mat<F> {
        let n = v.len();
        Mat::from_vec(field, n, 1, v)
    }

    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Mat<F> {
        Mat::from_fn(field, rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn field(&self) -> &F {
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
    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }
    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }
    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn column(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }
    pub fn columns(&self) -> Vec<Vec<F::Elem>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat<F> {
        Mat::from_fn(&self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!(self.shape(), other.shape(), "matrix sum shape mismatch");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Mat::from_vec(f, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Mat<F>) -> Mat<F> {
        assert_eq!(self.shape(), other.shape(), "matrix difference shape mismatch");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Mat::from_vec(f, self.rows, self.cols, data)
    }

    pub fn scale(&self, s: &F::Elem) -> Mat<F> {
        let f = &self.field;
        let data = self.data.iter().map(|a| f.mul(a, s)).collect();
        Mat::from_vec(f, self.rows, self.cols, data)
    }

    pub fn pow(&self, mut e: usize) -> Mat<F> {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Mat::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Mat<F>) -> Mat<F> {
        let f = &self.field;
        Mat::from_fn(f, self.rows * other.rows, self.cols * other.cols, |r, c| {
            f.mul(
                self.get(r / other.rows, c / other.cols),
                other.get(r % other.rows, c % other.cols),
            )
        })
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat<F> {
        let (r0, c0) = (rows.start, cols.start);
        Mat::from_fn(&self.field, rows.len(), cols.len(), |r, c| self.get(r0 + r, c0 + c).clone())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Mat<F> {
        Mat::from_fn(&self.field, self.rows, idx.len(), |r, c| self.get(r, idx[c]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat<F> {
        Mat::from_fn(&self.field, idx.len(), self.cols, |r, c| self.get(idx[r], c).clone())
    }

    /// Horizontal concatenation; all blocks need the same row count.
    pub fn hstack(field: &F, rows: usize, blocks: &[&Mat<F>]) -> Mat<F> {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut c0 = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            out.paste(0, c0, b);
            c0 += b.cols;
        }
        out
    }

    pub fn vstack(field: &F, cols: usize, blocks: &[&Mat<F>]) -> Mat<F> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let mut r0 = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            out.paste(r0, 0, b);
            r0 += b.rows;
        }
        out
    }

    pub fn block_diag(field: &F, blocks: &[&Mat<F>]) -> Mat<F> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.paste(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Overwrites the block starting at `(r0, c0)` with `block`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Mat<F>) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduced row echelon form, choosing pivots only among the first
    /// `pivot_cols` columns. Returns the pivot columns.
    fn reduce(&mut self, pivot_cols: usize) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols {
            if r == self.rows {
                break;
            }
            let Some(i) = (r..self.rows).find(|&i| !f.is_zero(self.get(i, c))) else {
                continue;
            };
            self.swap_rows(i, r);
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for k in c..self.cols {
                let v = f.mul(self.get(r, k), &inv);
                self.set(r, k, v);
            }
            for i in 0..self.rows {
                if i == r || f.is_zero(self.get(i, c)) {
                    continue;
                }
                let factor = self.get(i, c).clone();
                for k in c..self.cols {
                    if f.is_zero(self.get(r, k)) {
                        continue;
                    }
                    let v = f.sub(self.get(i, k), &f.mul(&factor, self.get(r, k)));
                    self.set(i, k, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Mat<F>, Vec<usize>) {
        let mut m = self.clone();
        let p = m.reduce(self.cols);
        (m, p)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1.len()
    }

    /// Canonical kernel basis as columns: one vector per free column, with a 1
    /// in that position and 0 in every other free position.
    pub fn kernel_basis(&self) -> Mat<F> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&self.field, &r, &pivots, self.cols)
    }

    /// Canonical basis of the column space (reduced column echelon form).
    pub fn image_basis(&self) -> Mat<F> {
        let (r, pivots) = self.transpose().rref();
        r.select_rows(&(0..pivots.len()).collect::<Vec<_>>()).transpose()
    }

    /// Complement of the column space spanned by standard basis vectors, and the
    /// quotient projection onto it.
    pub fn cokernel(&self) -> Cokernel<F> {
        let f = &self.field;
        let img = self.image_basis();
        // In reduced column echelon form each basis column has its pivot row.
        let pivot_rows: Vec<usize> = (0..img.cols)
            .map(|c| (0..img.rows).find(|&r| !f.is_zero(img.get(r, c))).expect("nonzero column"))
            .collect();
        let free: Vec<usize> = (0..self.rows).filter(|r| !pivot_rows.contains(r)).collect();
        let complement = Mat::from_fn(f, self.rows, free.len(), |r, c| {
            if r == free[c] {
                f.one()
            } else {
                f.zero()
            }
        });
        // v - sum_j v[pivot_j] * img_j vanishes on pivot rows; read off the rest.
        let projection = Mat::from_fn(f, free.len(), self.rows, |k, r| {
            if r == free[k] {
                f.one()
            } else if let Some(j) = pivot_rows.iter().position(|&p| p == r) {
                f.neg(img.get(free[k], j))
            } else {
                f.zero()
            }
        });
        Cokernel { complement, projection }
    }

    /// Solves `self * x = b` for every column of `b` simultaneously.
    pub fn solve(&self, b: &Mat<F>) -> Result<Solution<F>> {
        if self.field != b.field {
            return Err(Error::FieldMismatch(self.field.spec(), b.field.spec()));
        }
        if self.rows != b.rows {
            return Err(Error::Shape(format!(
                "solve: system has {} rows but targets have {}",
                self.rows, b.rows
            )));
        }
        let f = &self.field;
        let aug = Mat::hstack(f, self.rows, &[self, b]);
        let mut red = aug;
        let pivots = red.reduce(self.cols);
        for j in 0..b.cols {
            let col = self.cols + j;
            if (pivots.len()..self.rows).any(|r| !f.is_zero(red.get(r, col))) {
                return Ok(Solution::NoSolution { column: j });
            }
        }
        let mut particular = Mat::zeros(f, self.cols, b.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                particular.set(pc, j, red.get(r, self.cols + j).clone());
            }
        }
        let a_part = red.submatrix(0..self.rows, 0..self.cols);
        let kernel = kernel_from_rref(f, &a_part, &pivots, self.cols);
        Ok(Solution::Solved { particular, kernel })
    }

    /// Convenience wrapper: a single particular solution, if any.
    pub fn solve_particular(&self, b: &Mat<F>) -> Option<Mat<F>> {
        match self.solve(b).expect("solve_particular on compatible inputs") {
            Solution::Solved { particular, .. } => Some(particular),
            Solution::NoSolution { .. } => None,
        }
    }

    pub fn inverse(&self) -> Option<Mat<F>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let id = Mat::identity(&self.field, n);
        let mut aug = Mat::hstack(&self.field, n, &[self, &id]);
        let pivots = aug.reduce(n);
        if pivots.len() < n {
            return None;
        }
        Some(aug.submatrix(0..n, n..2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// True when every column of `other` lies in the column space of `self`.
    pub fn column_space_contains(&self, other: &Mat<F>) -> bool {
        assert_eq!(self.rows, other.rows);
        if other.cols == 0 {
            return true;
        }
        let joint = Mat::hstack(&self.field, self.rows, &[self, other]);
        joint.rank() == self.rank()
    }

    /// Basis of `{x : self * x ∈ span(subspace)}`.
    pub fn preimage(&self, subspace: &Mat<F>) -> Mat<F> {
        assert_eq!(self.rows, subspace.rows);
        let q = subspace.cokernel().projection;
        q.mul(self).kernel_basis()
    }
}

fn kernel_from_rref<F: Field>(f: &F, r: &Mat<F>, pivots: &[usize], cols: usize) -> Mat<F> {
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    Mat::from_fn(f, cols, free.len(), |row, k| {
        let fc = free[k];
        if row == fc {
            f.one()
        } else if let Some(pr) = pivots.iter().position(|&p| p == row) {
            f.neg(r.get(pr, fc))
        } else {
            f.zero()
        }
    })
}

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "Mat{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(fm, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| self.field.format_elem(x)).collect();
            write!(fm, "{}", row.join(" "))?;
        }
        write!(fm, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rationals};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_mat<F: Field>(f: &F, rng: &mut ChaCha8Rng, r: usize, c: usize) -> Mat<F> {
        Mat::from_fn(f, r, c, |_, _| f.random(rng))
    }

    #[test]
    fn rank_examples() {
        let f = Fp::new(7);
        assert_eq!(Mat::zeros(&f, 3, 3).rank(), 0);
        assert_eq!(Mat::identity(&f, 3).rank(), 3);
        let g2 = Fp::new(2);
        assert_eq!(Mat::from_i64(&g2, &[&[1, 1], &[1, 1]]).rank(), 1);
        assert_eq!(Mat::zeros(&f, 0, 4).rank(), 0);
        assert_eq!(Mat::zeros(&f, 4, 0).rank(), 0);
    }

    #[test]
    fn solve_examples() {
        let f = Fp::new(5);
        let id = Mat::identity(&f, 2);
        let b = Mat::from_i64(&f, &[&[1], &[0]]);
        match id.solve(&b).unwrap() {
            Solution::Solved { particular, kernel } => {
                assert_eq!(particular, b);
                assert_eq!(kernel.cols(), 0);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            Mat::zeros(&f, 2, 2).solve(&b).unwrap(),
            Solution::NoSolution { column: 0 }
        );

        // Enumerating GF(2)^2: x with x0 + x1 = 1 are (1,0) and (0,1); the kernel is {0,(1,1)}.
        let g = Fp::new(2);
        let a = Mat::from_i64(&g, &[&[1, 1]]);
        match a.solve(&Mat::from_i64(&g, &[&[1]])).unwrap() {
            Solution::Solved { particular, kernel } => {
                assert_eq!(particular, Mat::from_i64(&g, &[&[1], &[0]]));
                assert_eq!(kernel, Mat::from_i64(&g, &[&[1], &[1]]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn solve_rejects_mismatch() {
        let a = Mat::identity(&Fp::new(5), 2);
        let b = Mat::zeros(&Fp::new(7), 2, 1);
        assert!(matches!(a.solve(&b), Err(Error::FieldMismatch(..))));
        let c = Mat::zeros(&Fp::new(5), 3, 1);
        assert!(matches!(a.solve(&c), Err(Error::Shape(_))));
    }

    #[test]
    fn kernel_examples() {
        let f = Fp::new(5);
        assert_eq!(Mat::identity(&f, 3).kernel_basis().cols(), 0);
        assert_eq!(Mat::zeros(&f, 2, 3).kernel_basis(), Mat::identity(&f, 3));
        // 1*3 + 2*1 = 5 = 0 in GF(5).
        let k = Mat::from_i64(&f, &[&[1, 2]]).kernel_basis();
        assert_eq!(k, Mat::from_i64(&f, &[&[3], &[1]]));
    }

    #[test]
    fn cokernel_projection_laws() {
        let f = Fp::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let r = rng.gen_range(0..6);
            let c = rng.gen_range(0..6);
            let a = random_mat(&f, &mut rng, r, c);
            let ck = a.cokernel();
            assert_eq!(ck.complement.cols(), r - a.rank());
            assert!(ck.projection.mul(&a).is_zero());
            assert_eq!(ck.projection.mul(&ck.complement), Mat::identity(&f, ck.complement.cols()));
            let joint = Mat::hstack(&f, r, &[&a.image_basis(), &ck.complement]);
            assert_eq!(joint.rank(), r);
        }
    }

    #[test]
    fn rank_nullity_and_solve_prime_fields() {
        for p in [2, 3, 5, 7] {
            let f = Fp::new(p);
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            for _ in 0..1000 {
                let r = rng.gen_range(0..7);
                let c = rng.gen_range(0..7);
                let a = random_mat(&f, &mut rng, r, c);
                let k = a.kernel_basis();
                assert_eq!(a.rank() + k.cols(), c);
                assert!(a.mul(&k).is_zero());
                assert_eq!(k.rank(), k.cols());
                // Targets inside the column space are always solvable.
                let x0 = random_mat(&f, &mut rng, c, 2);
                let b = a.mul(&x0);
                match a.solve(&b).unwrap() {
                    Solution::Solved { particular, .. } => assert_eq!(a.mul(&particular), b),
                    Solution::NoSolution { .. } => panic!("consistent system reported unsolvable"),
                }
            }
        }
    }

    #[test]
    fn solve_rationals() {
        let q = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let r = rng.gen_range(1..5);
            let c = rng.gen_range(1..5);
            let a = random_mat(&q, &mut rng, r, c);
            let x0 = random_mat(&q, &mut rng, c, 1);
            let b = a.mul(&x0);
            match a.solve(&b).unwrap() {
                Solution::Solved { particular, kernel } => {
                    assert_eq!(a.mul(&particular), b);
                    assert_eq!(a.rank() + kernel.cols(), c);
                }
                Solution::NoSolution { .. } => panic!("consistent system reported unsolvable"),
            }
        }
    }

    #[test]
    fn rationals_and_large_prime_agree_on_sign_matrices() {
        let q = Rationals;
        let fp = Fp::new(10007);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let r = rng.gen_range(1..7);
            let c = rng.gen_range(1..7);
            let ints: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-1..=1)).collect()).collect();
            let rows: Vec<&[i64]> = ints.iter().map(|v| v.as_slice()).collect();
            assert_eq!(Mat::from_i64(&q, &rows).rank(), Mat::from_i64(&fp, &rows).rank());
        }
    }

    #[test]
    fn inverse_and_preimage() {
        let f = Fp::new(7);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let a = random_mat(&f, &mut rng, 4, 4);
            if let Some(inv) = a.inverse() {
                assert_eq!(a.mul(&inv), Mat::identity(&f, 4));
            } else {
                assert!(a.rank() < 4);
            }
            let u = random_mat(&f, &mut rng, 4, 2);
            let pre = a.preimage(&u);
            assert!(u.column_space_contains(&a.mul(&pre)));
        }
    }
}
