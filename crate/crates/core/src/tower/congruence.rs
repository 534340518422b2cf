//! Level-to-level congruences for `p_{n,v}` (scalar `Q`) and `r_n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::Valuation;
use crate::poly;
use crate::util::val_u64;

use super::engine::TowerEngine;
use super::orbit::canonical_rep;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Pass,
    Fail,
    BelowThreshold,
    MeasuredOnly,
}

impl RowStatus {
    fn judge(n: u32, n0: u32, measured: Valuation, required: u32) -> Self {
        if n < n0 {
            RowStatus::BelowThreshold
        } else if measured.is_at_least(required) {
            RowStatus::Pass
        } else {
            RowStatus::Fail
        }
    }

    pub fn is_violation(self) -> bool {
        self == RowStatus::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepValuation {
    pub v: Vec<u64>,
    pub valuation: Valuation,
}

/// One comparison between levels `n` and `n + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceRow {
    pub n: u32,
    pub n0: u32,
    pub k_n: u64,
    pub k_next: u64,
    pub orbits: usize,
    pub orbits_next: usize,
    pub degree: usize,
    pub degree_next: usize,
    pub measured: Valuation,
    pub required: u32,
    pub status: RowStatus,
    /// Per-representative valuations; empty for the `r_n` comparison.
    pub per_rep: Vec<RepValuation>,
}

fn check_precision(engine: &TowerEngine, required: u32) -> Result<()> {
    let prec = engine.spec().precision;
    if required > prec {
        return Err(Error::precondition(format!(
            "threshold {required} exceeds working precision {prec}"
        )));
    }
    Ok(())
}

/// `v(p_{n+1,v} − p_{n,v})` for every representative `v` at level `n`,
/// lifted with the same integer coordinates; threshold `v_ℓ(k_{n+1})`.
pub fn scalar_congruence_report(engine: &TowerEngine, n: u32) -> Result<CongruenceRow> {
    let spec = engine.spec();
    if !spec.is_scalar() {
        return Err(Error::precondition("the scalar report needs Q = q·I"));
    }
    let params = engine.params();
    let here = engine.level(n)?;
    let next = engine.level(n + 1)?;
    let required = val_u64(next.k_n, spec.ell).unwrap();
    check_precision(engine, required)?;
    let mut per_rep = Vec::with_capacity(here.reps.len());
    for (rep, p) in here.reps.iter().zip(&here.p_polys) {
        let lifted = canonical_rep(spec, n + 1, &rep.v);
        let q = next.p_for(&lifted).ok_or_else(|| {
            Error::inconsistent(format!("lift {lifted:?} missing at level {}", n + 1))
        })?;
        let valuation = poly::sub(&q.coeffs, &p.embed_up().coeffs)
            .iter()
            .map(|c| c.ell_divisibility())
            .reduce(Valuation::min)
            .unwrap();
        per_rep.push(RepValuation {
            v: rep.v.clone(),
            valuation,
        });
    }
    let measured = per_rep
        .iter()
        .map(|r| r.valuation)
        .reduce(Valuation::min)
        .unwrap();
    Ok(CongruenceRow {
        n,
        n0: params.n0,
        k_n: here.k_n,
        k_next: next.k_n,
        orbits: here.reps.len(),
        orbits_next: next.reps.len(),
        degree: spec.r,
        degree_next: spec.r,
        measured,
        required,
        status: RowStatus::judge(n, params.n0, measured, required),
        per_rep,
    })
}

/// `v(r_{n+1} − r_n^{ℓ^{b−1}})` up to `deg r_{n+1}`; threshold `n`, or `nb`
/// for scalar `Q`.
pub fn general_congruence_report(engine: &TowerEngine, n: u32) -> Result<CongruenceRow> {
    let spec = engine.spec();
    let params = engine.params();
    let here = engine.level(n)?;
    let next = engine.level(n + 1)?;
    let required = if spec.is_scalar() { n * spec.b as u32 } else { n };
    check_precision(engine, required)?;
    let deg_next = poly::degree(&next.r_poly);
    let e = spec.ell.pow(spec.b as u32 - 1);
    let pw = poly::pow(&here.r_poly, e, Some(deg_next));
    let measured = poly::sub(&next.r_poly, &pw)
        .iter()
        .take(deg_next + 1)
        .map(|c| c.val())
        .reduce(Valuation::min)
        .unwrap();
    Ok(CongruenceRow {
        n,
        n0: params.n0,
        k_n: here.k_n,
        k_next: next.k_n,
        orbits: here.reps.len(),
        orbits_next: next.reps.len(),
        degree: poly::degree(&here.r_poly),
        degree_next: deg_next,
        measured,
        required,
        status: RowStatus::judge(n, params.n0, measured, required),
        per_rep: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_fermat::{arnold_zarelua_check, int_matrix};
    use crate::tower::spec::{Term, TowerSpec};

    fn one_plus_t(b: usize, exps: Vec<i64>) -> Vec<Term> {
        vec![Term::scalar(vec![0; b], 1), Term::scalar(exps, 1)]
    }

    #[test]
    fn scalar_report_one_plus_t() {
        let spec = TowerSpec::new(5, vec![vec![6]], one_plus_t(1, vec![1]), 3, None).unwrap();
        let eng = TowerEngine::new(spec).unwrap();
        for n in 1..=2 {
            let row = scalar_congruence_report(&eng, n).unwrap();
            assert_eq!(row.required, n);
            assert_eq!(row.status, RowStatus::Pass, "{row:?}");
        }
    }

    #[test]
    fn constant_f_bridges_to_matrix_fermat() {
        let f0 = vec![vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 1]];
        let spec = TowerSpec::new(
            5,
            vec![vec![6]],
            vec![Term {
                exponents: vec![0],
                matrix: f0.clone(),
            }],
            3,
            Some(12),
        )
        .unwrap();
        let eng = TowerEngine::new(spec).unwrap();
        let a = int_matrix(&f0);
        for n in 1..=2 {
            let row = scalar_congruence_report(&eng, n).unwrap();
            let az = arnold_zarelua_check(&a, 5, n - 1).unwrap();
            assert_eq!(row.required, az.required);
            assert_eq!(
                row.status == RowStatus::Pass,
                az.charpoly_valuation.is_at_least(az.required)
            );
            assert_eq!(
                row.measured.lower_bound().min(12),
                az.charpoly_valuation.lower_bound().min(12)
            );
        }
    }

    #[test]
    fn refuses_non_scalar() {
        let spec = TowerSpec::new(
            3,
            vec![vec![4, 0], vec![3, 4]],
            one_plus_t(2, vec![3, 1]),
            2,
            None,
        )
        .unwrap();
        let eng = TowerEngine::new(spec).unwrap();
        assert!(scalar_congruence_report(&eng, 1).is_err());
    }

    #[test]
    fn general_report_b1_matches_direct_difference() {
        let spec = TowerSpec::new(3, vec![vec![4]], one_plus_t(1, vec![1]), 3, None).unwrap();
        let eng = TowerEngine::new(spec).unwrap();
        let row = general_congruence_report(&eng, 2).unwrap();
        let a = eng.r_poly(2).unwrap();
        let b = eng.r_poly(3).unwrap();
        let direct = poly::sub(&b, &a)
            .iter()
            .map(|c| c.val())
            .reduce(Valuation::min)
            .unwrap();
        assert_eq!(row.measured, direct);
        assert_eq!(row.status, RowStatus::Pass);
    }

    #[test]
    fn below_threshold_rows_are_marked() {
        let spec = TowerSpec::new(
            3,
            vec![vec![10, 0], vec![0, 10]],
            one_plus_t(2, vec![3, 1]),
            2,
            None,
        )
        .unwrap();
        let eng = TowerEngine::new(spec).unwrap();
        assert_eq!(eng.params().n0, 2);
        let row = general_congruence_report(&eng, 1).unwrap();
        assert_eq!(row.status, RowStatus::BelowThreshold);
    }
}
