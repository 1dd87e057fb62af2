//! Small dense matrices over an arbitrary field context.

use crate::field::FieldCtx;

#[derive(Clone, PartialEq, Debug)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<T>,
}

impl<T: Clone + PartialEq + std::fmt::Debug> Mat<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> T>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn identity<C: FieldCtx<Elem = T>>(ctx: &C, n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { ctx.one() } else { ctx.zero() })
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major iteration over all entries.
    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U, F>(&self, f: F) -> Mat<U>
    where
        U: Clone + PartialEq + std::fmt::Debug,
        F: Fn(&T) -> U,
    {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Entrywise map that can fail; the first error aborts.
    pub fn try_map<U, E, F>(&self, f: F) -> Result<Mat<U>, E>
    where
        U: Clone + PartialEq + std::fmt::Debug,
        F: Fn(&T) -> Result<U, E>,
    {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>, E>>()?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn add<C: FieldCtx<Elem = T>>(&self, ctx: &C, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| {
            ctx.add(self.at(i, j), other.at(i, j))
        })
    }

    pub fn sub<C: FieldCtx<Elem = T>>(&self, ctx: &C, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| {
            ctx.sub(self.at(i, j), other.at(i, j))
        })
    }

    pub fn mul<C: FieldCtx<Elem = T>>(&self, ctx: &C, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        Mat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = ctx.zero();
            for k in 0..self.cols {
                acc = ctx.add(&acc, &ctx.mul(self.at(i, k), other.at(k, j)));
            }
            acc
        })
    }

    pub fn scale<C: FieldCtx<Elem = T>>(&self, ctx: &C, s: &T) -> Self {
        self.map(|e| ctx.mul(e, s))
    }

    pub fn kronecker<C: FieldCtx<Elem = T>>(&self, ctx: &C, other: &Self) -> Self {
        Mat::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            ctx.mul(
                self.at(i / other.rows, j / other.cols),
                other.at(i % other.rows, j % other.cols),
            )
        })
    }

    pub fn direct_sum<C: FieldCtx<Elem = T>>(&self, ctx: &C, other: &Self) -> Self {
        Mat::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.at(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.at(i - self.rows, j - self.cols).clone()
            } else {
                ctx.zero()
            }
        })
    }

    /// Assemble [[a, b], [c, d]] from equally sized square blocks.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.rows;
        assert!(
            [a, b, c, d].iter().all(|m| m.rows == n && m.cols == n),
            "blocks must be square and equal-sized"
        );
        Mat::from_fn(2 * n, 2 * n, |i, j| {
            match (i < n, j < n) {
                (true, true) => a.at(i, j).clone(),
                (true, false) => b.at(i, j - n).clone(),
                (false, true) => c.at(i - n, j).clone(),
                (false, false) => d.at(i - n, j - n).clone(),
            }
        })
    }

    /// Determinant by cofactor expansion along the first row. For the small
    /// dimensions used here this avoids the divisions of Gaussian
    /// elimination, which cause severe expression swell when the elements are
    /// rational functions: cofactor products of polynomial entries stay
    /// polynomial.
    pub fn det<C: FieldCtx<Elem = T>>(&self, ctx: &C) -> T {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return ctx.one();
        }
        if n == 1 {
            return self.at(0, 0).clone();
        }
        let mut det = ctx.zero();
        for j in 0..n {
            if ctx.is_zero(self.at(0, j)) {
                continue;
            }
            let term = ctx.mul(self.at(0, j), &self.minor(0, j).det(ctx));
            det = if j % 2 == 0 {
                ctx.add(&det, &term)
            } else {
                ctx.sub(&det, &term)
            };
        }
        det
    }

    /// The submatrix with row `row` and column `col` removed.
    fn minor(&self, row: usize, col: usize) -> Self {
        Mat::from_fn(self.rows - 1, self.cols - 1, |i, j| {
            let si = if i < row { i } else { i + 1 };
            let sj = if j < col { j } else { j + 1 };
            self.at(si, sj).clone()
        })
    }

    /// Adjugate matrix and determinant, computed with ring operations only
    /// (no element inversion), so polynomial inputs give polynomial outputs.
    pub fn adjugate_det<C: FieldCtx<Elem = T>>(&self, ctx: &C) -> (Self, T) {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return (self.clone(), ctx.one());
        }
        if n == 1 {
            return (Mat::identity(ctx, 1), self.at(0, 0).clone());
        }
        let adj = Mat::from_fn(n, n, |i, j| {
            let c = self.minor(j, i).det(ctx);
            if (i + j) % 2 == 0 {
                c
            } else {
                ctx.neg(&c)
            }
        });
        let det = (0..n).fold(ctx.zero(), |acc, k| {
            ctx.add(&acc, &ctx.mul(self.at(0, k), adj.at(k, 0)))
        });
        (adj, det)
    }

    /// Inverse as adjugate over determinant; `None` when singular.
    pub fn inverse<C: FieldCtx<Elem = T>>(&self, ctx: &C) -> Option<Self> {
        let (adj, det) = self.adjugate_det(ctx);
        let det_inv = ctx.inv(&det)?;
        Some(adj.map(|e| ctx.mul(e, &det_inv)))
    }

    pub fn is_identity<C: FieldCtx<Elem = T>>(&self, ctx: &C) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.at(i, j) == &ctx.one()
                    } else {
                        ctx.is_zero(self.at(i, j))
                    }
                })
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat_int, Rat, QQ};

    fn m(rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&c| rat_int(c)).collect())
                .collect(),
        )
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.det(&QQ), rat_int(1));
        let inv = a.inverse(&QQ).unwrap();
        assert!(a.mul(&QQ, &inv).is_identity(&QQ));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(&QQ), None);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det(&QQ), rat_int(0));
    }

    #[test]
    fn kronecker_shape_and_values() {
        let a = m(&[&[1, 2]]);
        let b = m(&[&[3], &[4]]);
        let k = a.kronecker(&QQ, &b);
        assert_eq!((k.rows, k.cols), (2, 2));
        assert_eq!(k, m(&[&[3, 6], &[4, 8]]));
    }

    #[test]
    fn direct_sum_blocks() {
        let s = m(&[&[2]]).direct_sum(&QQ, &m(&[&[3]]));
        assert_eq!(s, m(&[&[2, 0], &[0, 3]]));
    }
}
