//! Normalized logarithms `L_n = log r_n / ℓ^{(n−n₀)(b−1)}` and their limit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{series_exp, series_log, PadicFrac};

use super::engine::TowerEngine;

/// Valuation of a series coefficient, which may be fractional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesValuation {
    Finite(i64),
    AtLeast(i64),
}

impl SeriesValuation {
    pub fn of(x: &PadicFrac) -> Self {
        match x.val() {
            Some(v) => SeriesValuation::Finite(v),
            None => SeriesValuation::AtLeast(x.absolute_precision()),
        }
    }

    pub fn lower_bound(self) -> i64 {
        match self {
            SeriesValuation::Finite(v) | SeriesValuation::AtLeast(v) => v,
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self.lower_bound() <= other.lower_bound() {
            self
        } else {
            other
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedLog {
    pub n: u32,
    pub normalization: u32,
    pub coeffs: Vec<PadicFrac>,
}

impl NormalizedLog {
    /// Lowest absolute precision over coefficients `1..=D`.
    pub fn min_precision(&self) -> i64 {
        self.coeffs[1..]
            .iter()
            .map(|c| c.absolute_precision())
            .min()
            .unwrap_or(i64::MAX)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CauchyRow {
    pub n: u32,
    pub valuation: SeriesValuation,
    /// Coefficients whose difference carries no digits.
    pub exhausted: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseBEstimate {
    pub degree: usize,
    pub logs: Vec<NormalizedLog>,
    pub cauchy: Vec<CauchyRow>,
    pub limit: Vec<PadicFrac>,
}

pub fn normalized_log(engine: &TowerEngine, n: u32, degree: usize) -> Result<NormalizedLog> {
    let spec = engine.spec();
    let n0 = engine.params().n0;
    if n < n0 {
        return Err(Error::precondition(format!(
            "level {n} is below the stability threshold n₀ = {n0}"
        )));
    }
    let normalization = (n - n0) * (spec.b as u32 - 1);
    let r = engine.r_poly(n)?;
    let coeffs = series_log(&r, degree)?
        .iter()
        .map(|c| c.div_ell_pow(normalization))
        .collect();
    Ok(NormalizedLog {
        n,
        normalization,
        coeffs,
    })
}

pub fn caseb_limit_estimate(
    engine: &TowerEngine,
    n_range: std::ops::RangeInclusive<u32>,
    degree: usize,
) -> Result<CaseBEstimate> {
    if n_range.is_empty() {
        return Err(Error::invalid("empty level range"));
    }
    let logs = n_range
        .map(|n| normalized_log(engine, n, degree))
        .collect::<Result<Vec<_>>>()?;
    let cauchy = logs
        .windows(2)
        .map(|w| {
            let diffs: Vec<PadicFrac> = w[1].coeffs[1..]
                .iter()
                .zip(&w[0].coeffs[1..])
                .map(|(a, b)| a.sub(b))
                .collect();
            let valuation = diffs
                .iter()
                .map(SeriesValuation::of)
                .reduce(SeriesValuation::min)
                .unwrap_or(SeriesValuation::AtLeast(i64::MAX));
            let exhausted = diffs
                .iter()
                .enumerate()
                .filter(|(_, d)| d.is_exhausted())
                .map(|(i, _)| i + 1)
                .collect();
            CauchyRow {
                n: w[0].n,
                valuation,
                exhausted,
            }
        })
        .collect();
    let limit = series_exp(&logs.last().unwrap().coeffs)?;
    Ok(CaseBEstimate {
        degree,
        logs,
        cauchy,
        limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicInt;
    use crate::tower::spec::{Term, TowerSpec};

    #[test]
    fn b1_limit_recovers_last_r() {
        let spec = TowerSpec::new(
            5,
            vec![vec![6]],
            vec![Term::scalar(vec![0], 1), Term::scalar(vec![1], 1)],
            3,
            Some(12),
        )
        .unwrap();
        let eng = TowerEngine::new(spec).unwrap();
        let deg = 6;
        let est = caseb_limit_estimate(&eng, 1..=3, deg).unwrap();
        assert!(est.logs.iter().all(|l| l.normalization == 0));
        let r3 = eng.r_poly(3).unwrap();
        for (i, c) in est.limit.iter().enumerate() {
            let expect = r3.get(i).copied().unwrap_or(r3[0].sibling(0));
            let got = c.sub(&PadicFrac::from_int(&expect));
            // log then exp loses at most v(d!)-type digits
            assert!(got.val().is_none(), "coefficient {i}: {got}");
        }
    }

    #[test]
    fn constant_scalar_f_closed_form() {
        // F = c with c ≡ 1 (mod 3): A_n(v) = c^{k_n}, every orbit has size k_n,
        // r_n = (1 − c^{k_n} y)^{#orbits} and log r_n = −#orbits Σ c^{d k_n} y^d / d.
        let c = 4i64;
        let spec = TowerSpec::new(
            3,
            vec![vec![4]],
            vec![Term::scalar(vec![0], c)],
            3,
            Some(10),
        )
        .unwrap();
        let eng = TowerEngine::new(spec).unwrap();
        for n in 1..=3u32 {
            let l = normalized_log(&eng, n, 5).unwrap();
            let k = 3u64.pow(n - 1);
            let orbits = (2 * 3u64.pow(n - 1) / k) as i64;
            for d in 1..=5usize {
                let ck = PadicInt::new(3, 10, c).unwrap().pow(k * d as u64);
                let expect = PadicFrac::from_int(&ck).mul_int(-orbits).div_int(d as i64);
                assert!(l.coeffs[d].sub(&expect).val().is_none());
            }
        }
    }

    #[test]
    fn below_threshold_is_refused() {
        let spec = TowerSpec::new(
            3,
            vec![vec![10, 0], vec![0, 10]],
            vec![Term::scalar(vec![0, 0], 1), Term::scalar(vec![3, 1], 1)],
            2,
            None,
        )
        .unwrap();
        let eng = TowerEngine::new(spec).unwrap();
        assert!(normalized_log(&eng, 1, 3).is_err());
    }
}
