//! Fermat-type congruences for integer matrices:
//! `tr A^{ℓ^{n+1}} ≡ tr A^{ℓⁿ}` and the same for `det(1 − xA^{ℓ^k})`,
//! both modulo `ℓ^{n+1}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::padic::{PadicInt, Valuation};
use crate::poly;
use crate::util::is_prime;

pub type IntMatrix = Matrix<BigInt>;

/// Parse `"a,b;c,d"` into a square integer matrix.
pub fn parse_int_matrix(text: &str) -> Result<IntMatrix> {
    let rows: Vec<Vec<BigInt>> = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<BigInt>()
                        .map_err(|_| Error::invalid(format!("bad matrix entry {x:?}")))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::invalid(format!("matrix {text:?} is not square")));
    }
    Ok(Matrix::from_rows(rows))
}

pub fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
    )
}

/// `tr(A^L)` by square-and-multiply.
pub fn trace_power(a: &IntMatrix, l: u64) -> BigInt {
    a.pow(l).trace()
}

/// Number of closed walks of length `L` in the multigraph with adjacency
/// matrix `A`, found by enumerating every walk edge by edge.
///
/// Refuses to start unless `r^L · max(A)^L ≤ guard`.
pub fn closed_walk_count(a: &IntMatrix, l: u32, guard: u64) -> Result<BigInt> {
    let r = a.rows();
    let mut adj = vec![0u64; r * r];
    for (slot, x) in adj.iter_mut().zip(a.entries()) {
        if x.is_negative() {
            return Err(Error::precondition("walk counting needs nonnegative entries"));
        }
        *slot = x
            .to_u64()
            .ok_or_else(|| Error::guard("adjacency entry too large"))?;
    }
    let max = adj.iter().copied().max().unwrap_or(0);
    let work = BigInt::from(r as u64 * max).pow(l);
    if work > BigInt::from(guard) {
        return Err(Error::guard(format!(
            "walk enumeration needs up to {work} steps (guard {guard})"
        )));
    }
    if l == 0 {
        return Ok(BigInt::from(r));
    }

    fn walk(adj: &[u64], r: usize, start: usize, at: usize, left: u32) -> u64 {
        let mut count = 0;
        for next in 0..r {
            for _edge in 0..adj[at * r + next] {
                if left == 1 {
                    if next == start {
                        count += 1;
                    }
                } else {
                    count += walk(adj, r, start, next, left - 1);
                }
            }
        }
        count
    }

    let total: u64 = (0..r).map(|s| walk(&adj, r, s, s, l)).sum();
    Ok(BigInt::from(total))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArnoldReport {
    pub ell: u64,
    pub n: u32,
    pub trace_low: String,
    pub trace_high: String,
    pub trace_valuation: Valuation,
    pub charpoly_valuation: Valuation,
    pub required: u32,
    /// For `ℓ = 2` only the trace congruence is asserted.
    pub charpoly_asserted: bool,
    pub pass: bool,
}

/// Valuations of `tr A^{ℓ^{n+1}} − tr A^{ℓⁿ}` and of the coefficient-wise
/// difference of `det(1 − xA^{ℓ^{n+1}})` and `det(1 − xA^{ℓⁿ})`.
pub fn arnold_zarelua_check(a: &IntMatrix, ell: u64, n: u32) -> Result<ArnoldReport> {
    if !is_prime(ell) {
        return Err(Error::invalid(format!("{ell} is not a prime")));
    }
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::invalid("matrix must be square and nonempty"));
    }
    let low = a.pow(ell.pow(n));
    let high = low.pow(ell);
    let t_low = low.trace();
    let t_high = high.trace();
    let trace_valuation = Valuation::of_bigint(&(&t_high - &t_low), ell);
    let diff = poly::sub(&high.charpoly(), &low.charpoly());
    let charpoly_valuation = diff
        .iter()
        .map(|c| Valuation::of_bigint(c, ell))
        .reduce(Valuation::min)
        .unwrap();
    let required = n + 1;
    let charpoly_asserted = ell != 2;
    let pass = trace_valuation.is_at_least(required)
        && (!charpoly_asserted || charpoly_valuation.is_at_least(required));
    Ok(ArnoldReport {
        ell,
        n,
        trace_low: t_low.to_string(),
        trace_high: t_high.to_string(),
        trace_valuation,
        charpoly_valuation,
        required,
        charpoly_asserted,
        pass,
    })
}

/// `det(1 − xB)` up to degree `D` from `t_d = tr(B^d)`, `d = 1..=D`, exactly.
///
/// Uses `d·c_d = −Σ_{j=1}^{d} t_j c_{d−j}`; a non-integral quotient means
/// the traces did not come from an integer matrix.
pub fn det_from_traces(traces: &[BigInt], degree: usize) -> Result<Vec<BigInt>> {
    if traces.len() < degree {
        return Err(Error::invalid(format!(
            "need {degree} traces, got {}",
            traces.len()
        )));
    }
    let mut c = vec![BigInt::one()];
    for d in 1..=degree {
        let mut acc = BigInt::zero();
        for j in 1..=d {
            acc -= &traces[j - 1] * &c[d - j];
        }
        let (q, r) = acc.div_rem(&BigInt::from(d));
        if !r.is_zero() {
            return Err(Error::inconsistent(format!(
                "coefficient {d} is not integral: {acc}/{d}"
            )));
        }
        c.push(q);
    }
    Ok(c)
}

/// Fixed-precision version of [`det_from_traces`]. Each coefficient carries
/// its own precision, reduced by the `ℓ`-part of the divisions it needed.
pub fn det_from_traces_padic(traces: &[PadicInt], degree: usize) -> Result<Vec<PadicInt>> {
    let first = traces
        .first()
        .ok_or_else(|| Error::invalid("no traces given"))?;
    if traces.len() < degree {
        return Err(Error::invalid(format!(
            "need {degree} traces, got {}",
            traces.len()
        )));
    }
    let mut c = vec![first.sibling(1)];
    for d in 1..=degree {
        let mut acc = first.sibling(0);
        for j in 1..=d {
            acc = acc.try_sub(&traces[j - 1].try_mul(&c[d - j])?)?;
        }
        c.push(acc.div_int(d as i64)?);
    }
    Ok(c)
}
