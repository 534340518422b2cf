//! Dense matrices over a commutative ring, with division-free
//! characteristic polynomials.

use std::fmt;

use crate::ring::CommRing;

#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[R]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<R: CommRing> Matrix<R> {
    pub fn new(rows: usize, cols: usize, data: Vec<R>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zero_like(rows: usize, cols: usize, sample: &R) -> Self {
        Matrix::new(rows, cols, vec![sample.zero_like(); rows * cols])
    }

    pub fn identity_like(n: usize, sample: &R) -> Self {
        let mut m = Self::zero_like(n, n, sample);
        for i in 0..n {
            m.data[i * n + i] = sample.one_like();
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

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: R) {
        self.data[i * self.cols + j] = x;
    }

    pub fn map<S: CommRing>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix::new(self.rows, self.cols, self.data.iter().map(f).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::new(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::new(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        )
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|a| a.mul(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let sample = &self.data[0];
        let mut out = Self::zero_like(self.rows, other.cols, sample);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(v[0].zero_like(), |acc, j| acc.add(&self.get(i, j).mul(&v[j])))
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity_like(self.rows, &self.data[0]);
        let mut base = self.clone();
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

    pub fn trace(&self) -> R {
        assert!(self.is_square());
        (0..self.rows).fold(self.data[0].zero_like(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Coefficients of `det(I − yM)`, constant term first (Berkowitz).
    ///
    /// The same vector lists `det(xI − M)` from the leading coefficient down.
    pub fn charpoly(&self) -> Vec<R> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let sample = &self.data[0];
        if n == 0 {
            return vec![sample.one_like()];
        }
        let mut vect = vec![sample.one_like(), self.get(0, 0).neg()];
        for r in 1..n {
            let a = self.get(r, r);
            let mut col: Vec<R> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let row: Vec<R> = (0..r).map(|j| self.get(r, j).clone()).collect();
            let mut t = Vec::with_capacity(r + 2);
            t.push(sample.one_like());
            t.push(a.neg());
            for i in 0..r {
                let dot = row
                    .iter()
                    .zip(&col)
                    .fold(sample.zero_like(), |acc, (x, y)| acc.add(&x.mul(y)));
                t.push(dot.neg());
                if i + 1 < r {
                    col = (0..r)
                        .map(|p| {
                            (0..r).fold(sample.zero_like(), |acc, q| {
                                acc.add(&self.get(p, q).mul(&col[q]))
                            })
                        })
                        .collect();
                }
            }
            let mut next = Vec::with_capacity(r + 2);
            for i in 0..r + 2 {
                let mut acc = sample.zero_like();
                for (j, v) in vect.iter().enumerate().take(i.min(r) + 1) {
                    acc = acc.add(&t[i - j].mul(v));
                }
                next.push(acc);
            }
            vect = next;
        }
        vect
    }

    pub fn det(&self) -> R {
        let c = self.charpoly();
        let last = c[self.rows].clone();
        if self.rows % 2 == 0 {
            last
        } else {
            last.neg()
        }
    }

    /// Adjugate via Cayley–Hamilton: no divisions.
    pub fn adjugate(&self) -> Self {
        let n = self.rows;
        let sample = &self.data[0];
        if n == 1 {
            return Self::identity_like(1, sample);
        }
        let c = self.charpoly();
        let mut b = Self::identity_like(n, sample);
        for ck in c.iter().take(n).skip(1) {
            b = self.mul(&b).add(&Self::identity_like(n, sample).scale(ck));
        }
        if n % 2 == 0 {
            b.map(|x| x.neg())
        } else {
            b
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn int_matrix(rows: &[&[i64]]) -> Matrix<BigInt> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    fn z(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Cofactor expansion along the first row.
    fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::from(1);
        }
        let mut acc = BigInt::from(0);
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn eval(p: &[BigInt], y: i64) -> BigInt {
        p.iter().rev().fold(BigInt::from(0), |acc, c| acc * y + c)
    }

    #[test]
    fn charpoly_examples() {
        assert_eq!(int_matrix(&[&[1, 0], &[0, 1]]).charpoly(), z(&[1, -2, 1]));
        assert_eq!(int_matrix(&[&[0, 1], &[0, 0]]).charpoly(), z(&[1, 0, 0]));
        assert_eq!(int_matrix(&[&[1, 2], &[3, 4]]).charpoly(), z(&[1, -5, -2]));
        assert_eq!(int_matrix(&[&[7]]).charpoly(), z(&[1, -7]));
    }

    #[test]
    fn charpoly_matches_cofactor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..80 {
            let n = if trial < 50 { 3 } else { rng.gen_range(1..=5) };
            let rows: Vec<Vec<BigInt>> = (0..n)
                .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect())
                .collect();
            let m = Matrix::from_rows(rows.clone());
            let cp = m.charpoly();
            assert_eq!(cp.len(), n + 1);
            // det(I − yM) at integer y
            for y in -3..=3i64 {
                let shifted: Vec<Vec<BigInt>> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let id = if i == j { BigInt::from(1) } else { BigInt::from(0) };
                                id - &rows[i][j] * y
                            })
                            .collect()
                    })
                    .collect();
                assert_eq!(eval(&cp, y), cofactor_det(&shifted));
            }
            assert_eq!(m.det(), cofactor_det(&rows));
        }
    }

    #[test]
    fn adjugate_inverts_up_to_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..40 {
            let n = rng.gen_range(1..=4);
            let m = Matrix::new(
                n,
                n,
                (0..n * n).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect(),
            );
            let d = m.det();
            let expect = Matrix::identity_like(n, &d).scale(&d);
            assert_eq!(m.mul(&m.adjugate()), expect);
        }
    }

    #[test]
    fn powers_and_traces() {
        let fib = int_matrix(&[&[1, 1], &[1, 0]]);
        assert_eq!(fib.pow(3).trace(), BigInt::from(4));
        assert_eq!(fib.pow(9).trace(), BigInt::from(76));
        assert_eq!(fib.pow(0), Matrix::identity_like(2, &BigInt::from(0)));
    }
}
