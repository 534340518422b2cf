//! Sums `S_n(λ; v) = Σ_{j=1}^{k_n(v)} ζ_{ℓⁿ}^{λ(Q^{−j}v)}` over a `Q`-orbit.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{Exact, ExactCyclo, CycloRecord};
use crate::error::{Error, Result};
use crate::padic::Valuation;

use super::orbit::{is_primitive, orbit_order};
use super::spec::TowerSpec;
use super::engine::TowerEngine;
use super::congruence::RowStatus;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QsumRow {
    pub n: u32,
    pub k_n: u64,
    pub value: CycloRecord,
    pub valuation: Valuation,
    pub status: RowStatus,
}

/// Exact value of `S_n(λ; v)`.
pub fn qsum(engine: &TowerEngine, lambda: &[i64], v: &[u64], n: u32) -> Result<ExactCyclo> {
    let spec: &TowerSpec = engine.spec();
    if lambda.len() != spec.b || v.len() != spec.b {
        return Err(Error::invalid(format!(
            "λ and v need {} coordinates",
            spec.b
        )));
    }
    if !is_primitive(v, spec.ell) {
        return Err(Error::precondition(format!("{v:?} is not primitive")));
    }
    let k = orbit_order(spec, n, v)?;
    let m = spec.ell.pow(n);
    let inv = engine.q_inverse().reduce(m);
    let mut w: Vec<u64> = v.iter().map(|x| x % m).collect();
    let mut counts = vec![0i64; m as usize];
    for _ in 0..k {
        w = inv.apply(&w);
        let e: i128 = lambda
            .iter()
            .zip(&w)
            .map(|(&a, &x)| a as i128 * x as i128)
            .sum::<i128>()
            .rem_euclid(m as i128);
        counts[e as usize] += 1;
    }
    let terms: Vec<(i64, BigInt)> = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(e, &c)| (e as i64, BigInt::from(c)))
        .collect();
    Ok(ExactCyclo::from_terms(spec.ell, n, &Exact, &terms))
}

/// Measurement only: each row reports `S_n` and its ℓ-divisibility.
pub fn qsum_explorer(
    engine: &TowerEngine,
    lambda: &[i64],
    v: &[u64],
    n_range: std::ops::RangeInclusive<u32>,
) -> Result<Vec<QsumRow>> {
    n_range
        .map(|n| {
            let s = qsum(engine, lambda, v, n)?;
            Ok(QsumRow {
                n,
                k_n: orbit_order(engine.spec(), n, v)?,
                valuation: s.ell_divisibility(),
                value: s.record(),
                status: RowStatus::MeasuredOnly,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::spec::Term;

    fn engine(ell: u64, q: Vec<Vec<i64>>, n_max: u32) -> TowerEngine {
        let b = q.len();
        let mut e = vec![0; b];
        e[0] = 1;
        let spec = TowerSpec::new(
            ell,
            q,
            vec![Term::scalar(vec![0; b], 1), Term::scalar(e, 1)],
            n_max,
            None,
        )
        .unwrap();
        TowerEngine::new(spec).unwrap()
    }

    #[test]
    fn zero_form_counts_the_orbit() {
        let eng = engine(5, vec![vec![6, 0], vec![0, 11]], 4);
        for n in 1..=4 {
            let s = qsum(&eng, &[0, 0], &[1, 1], n).unwrap();
            let k = orbit_order(eng.spec(), n, &[1, 1]).unwrap();
            assert_eq!(s, ExactCyclo::from_int(5, n, &Exact, k as i64));
        }
    }

    #[test]
    fn scalar_q_matches_direct_power_sum() {
        // Q = q·I: λ(Q^{−j}v) = q^{−j}·λ(v), a sum over the subgroup generated by q
        let eng = engine(3, vec![vec![10, 0], vec![0, 10]], 4);
        for n in 2..=4u32 {
            let m = 3i64.pow(n);
            let s = qsum(&eng, &[1, 2], &[1, 1], n).unwrap();
            let k = orbit_order(eng.spec(), n, &[1, 1]).unwrap();
            let w = 3i64;
            let mut direct = ExactCyclo::zero(3, n, &Exact);
            let mut qj = 1i64;
            for _ in 0..k {
                qj = qj * 10 % m;
                direct = direct.add(&ExactCyclo::exact_zeta(3, n, w * qj));
            }
            assert_eq!(s, direct);
            let bound = crate::util::val_u64(k, 3).unwrap();
            assert!(s.ell_divisibility().is_at_least(bound));
        }
    }

    #[test]
    fn explorer_rows_are_measured_only() {
        let eng = engine(5, vec![vec![6, 0], vec![0, 11]], 4);
        let rows = qsum_explorer(&eng, &[3, 1], &[1, 1], 2..=4).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.status == RowStatus::MeasuredOnly));
    }
}
