use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::padic::working_modulus;

/// One term `F_I · t^I` of the Frobenius matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exponents: Vec<i64>,
    pub matrix: Vec<Vec<i64>>,
}

impl Term {
    pub fn scalar(exponents: Vec<i64>, c: i64) -> Self {
        Term {
            exponents,
            matrix: vec![vec![c]],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub ell: u64,
    pub b: usize,
    pub r: usize,
    /// Row-major `b × b`.
    pub q: Vec<Vec<i64>>,
    pub f: Vec<Term>,
    pub n_max: u32,
    pub precision: u32,
    /// Largest `ℓ^{nb}` the orbit enumeration may visit.
    pub orbit_cap: u64,
}

pub const DEFAULT_ORBIT_CAP: u64 = 10_000_000;

pub fn default_precision(b: usize, n_max: u32) -> u32 {
    b as u32 * n_max + 6
}

impl TowerSpec {
    /// Validates every standing assumption on `(ℓ, Q, F)`.
    pub fn new(
        ell: u64,
        q: Vec<Vec<i64>>,
        f: Vec<Term>,
        n_max: u32,
        precision: Option<u32>,
    ) -> Result<Self> {
        let b = q.len();
        let r = f.first().map_or(0, |t| t.matrix.len());
        let spec = TowerSpec {
            ell,
            b,
            r,
            q,
            f,
            n_max,
            precision: precision.unwrap_or_else(|| default_precision(b, n_max)),
            orbit_cap: DEFAULT_ORBIT_CAP,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_orbit_cap(mut self, cap: u64) -> Self {
        self.orbit_cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        working_modulus(self.ell, self.precision)?;
        let ell = self.ell as i64;
        if self.b == 0 {
            return Err(Error::invalid("Q must be at least 1×1"));
        }
        for (i, row) in self.q.iter().enumerate() {
            if row.len() != self.b {
                return Err(Error::invalid(format!(
                    "Q row {i} has {} entries, expected {}",
                    row.len(),
                    self.b
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                let id = i64::from(i == j);
                if (x - id).rem_euclid(ell) != 0 {
                    return Err(Error::invalid(format!(
                        "Q is not ≡ I (mod {ell}): entry ({i},{j}) = {x}"
                    )));
                }
            }
        }
        if self.f.is_empty() {
            return Err(Error::invalid("F has no terms"));
        }
        if self.r == 0 {
            return Err(Error::invalid("F must be at least 1×1"));
        }
        for (k, t) in self.f.iter().enumerate() {
            if t.exponents.len() != self.b {
                return Err(Error::invalid(format!(
                    "F term {k} has {} exponents, expected {}",
                    t.exponents.len(),
                    self.b
                )));
            }
            if t.matrix.len() != self.r || t.matrix.iter().any(|row| row.len() != self.r) {
                return Err(Error::invalid(format!(
                    "F term {k} is not a {}×{} matrix",
                    self.r, self.r
                )));
            }
        }
        if self.n_max == 0 {
            return Err(Error::invalid("n_max must be at least 1"));
        }

        let modulus = BigInt::from(self.ell).pow(self.precision);
        let q_minus_i = Matrix::from_rows(
            (0..self.b)
                .map(|i| {
                    (0..self.b)
                        .map(|j| BigInt::from(self.q[i][j] - i64::from(i == j)))
                        .collect()
                })
                .collect(),
        );
        if q_minus_i.det().mod_floor(&modulus).is_zero() {
            return Err(Error::invalid(format!(
                "det(Q − I) vanishes modulo {}^{}: Q fixes a vector",
                self.ell, self.precision
            )));
        }
        let f1 = self.f_at_one();
        if f1.det().mod_floor(&BigInt::from(self.ell)).is_zero() {
            return Err(Error::invalid(format!(
                "det F(1,…,1) is divisible by {}",
                self.ell
            )));
        }
        Ok(())
    }

    pub fn q_matrix(&self) -> Matrix<BigInt> {
        Matrix::from_rows(
            self.q
                .iter()
                .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn f_at_one(&self) -> Matrix<BigInt> {
        let mut acc = vec![vec![BigInt::zero(); self.r]; self.r];
        for t in &self.f {
            for (i, row) in t.matrix.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    acc[i][j] += x;
                }
            }
        }
        Matrix::from_rows(acc)
    }

    /// `F` has no dependence on `t`.
    pub fn is_constant(&self) -> bool {
        self.f.iter().all(|t| t.exponents.iter().all(|&e| e == 0))
    }

    /// `Q = q·I`; returns `q`.
    pub fn scalar_q(&self) -> Option<i64> {
        let q0 = self.q[0][0];
        for i in 0..self.b {
            for j in 0..self.b {
                let expect = if i == j { q0 } else { 0 };
                if self.q[i][j] != expect {
                    return None;
                }
            }
        }
        Some(q0)
    }

    pub fn is_scalar(&self) -> bool {
        self.scalar_q().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_plus_t() -> Vec<Term> {
        vec![Term::scalar(vec![0], 1), Term::scalar(vec![1], 1)]
    }

    #[test]
    fn accepts_standard_examples() {
        let s = TowerSpec::new(5, vec![vec![6]], one_plus_t(), 3, None).unwrap();
        assert_eq!(s.precision, 9);
        assert!(s.is_scalar());
        let f = vec![
            Term::scalar(vec![0, 0], 1),
            Term::scalar(vec![3, 1], 1),
        ];
        let s = TowerSpec::new(3, vec![vec![4, 0], vec![3, 4]], f, 3, None).unwrap();
        assert!(!s.is_scalar());
        assert_eq!(s.precision, 12);
    }

    #[test]
    fn rejects_violations() {
        // Q ≢ I
        assert!(TowerSpec::new(5, vec![vec![7]], one_plus_t(), 3, None).is_err());
        // Q = I fixes everything
        assert!(TowerSpec::new(5, vec![vec![1]], one_plus_t(), 3, None).is_err());
        // det F(1) = 5
        let f = vec![Term::scalar(vec![0], 2), Term::scalar(vec![1], 3)];
        assert!(TowerSpec::new(5, vec![vec![6]], f, 3, None).is_err());
        // ℓ = 2
        assert!(TowerSpec::new(2, vec![vec![3]], one_plus_t(), 3, None).is_err());
        // shape errors
        let bad = vec![Term {
            exponents: vec![0, 0],
            matrix: vec![vec![1]],
        }];
        assert!(TowerSpec::new(5, vec![vec![6]], bad, 3, None).is_err());
    }
}
