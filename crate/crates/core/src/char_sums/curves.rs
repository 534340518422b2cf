//! Point counts for Fermat, Artin–Schreier and hyperelliptic curves, and Weil
//! polynomials from point counts.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::BiCycloElem;
use crate::error::{Error, Result};
use crate::matrix_fermat::det_from_traces;

use super::characters::{AddChar, MultChar};
use super::field::FieldView;
use super::sums::{gauss_sum, jacobi_sum};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCount {
    pub field_size: u64,
    pub enumeration: u64,
    /// Count from the character-sum expansion, when it applies.
    pub characters: Option<u64>,
}

fn exact_integer(x: &BiCycloElem, what: &str) -> Result<BigInt> {
    x.to_cyclo()
        .and_then(|c| c.demote().ok())
        .map(|c| c.constant_term().clone())
        .ok_or_else(|| Error::inconsistent(format!("{what} is not a rational integer")))
}

fn to_u64(x: &BigInt, what: &str) -> Result<u64> {
    x.to_u64()
        .ok_or_else(|| Error::inconsistent(format!("{what} = {x} is not a point count")))
}

pub fn fermat_genus(d: u64) -> u64 {
    (d - 1) * (d - 2) / 2
}

pub fn artin_schreier_genus(q: u64, d: u64) -> u64 {
    (q - 1) * (d - 1) / 2
}

/// `|N − (q+1)| ≤ 2g√q`.
pub fn within_weil_bound(count: u64, q: u64, g: u64) -> bool {
    let a = BigInt::from(count) - BigInt::from(q) - 1;
    &a * &a <= BigInt::from(4 * g * g) * BigInt::from(q)
}

/// Projective points on `x^d + y^d + z^d = 0`, `d = ℓⁿ`, over the view.
pub fn fermat_point_count(ell: u64, n: u32, view: &FieldView) -> Result<PointCount> {
    let k = view.ambient();
    let d = ell.pow(n);
    let q = view.size();
    let elems: Vec<u32> = view.elements().collect();
    let mut roots = vec![0u64; k.size() as usize];
    for &x in &elems {
        roots[k.pow(x, d) as usize] += 1;
    }
    let mut affine: u64 = 0;
    for &x in &elems {
        let xd = k.pow(x, d);
        for &y in &elems {
            let s = k.add(xd, k.pow(y, d));
            affine += roots[k.neg(s) as usize];
        }
    }
    let enumeration = (affine - 1) / (q - 1);

    let characters = if (q - 1) % d == 0 {
        let chars: Vec<MultChar> = (0..d as i64)
            .map(|v| MultChar::new(view, ell, n, v))
            .collect::<Result<_>>()?;
        let minus_one = k.neg(1);
        let mut total = BigInt::from(q);
        for c in &chars {
            // χ(−1) is ±1; for odd ℓ always 1
            total += if c.exponent(minus_one) == Some(0) { 1 } else { -1 };
        }
        let mut jac = crate::cyclotomic::ExactCyclo::zero(ell, n, &crate::cyclotomic::Exact);
        for i in 1..d as usize {
            for j in 1..d as usize {
                let sign = chars[(i + j) % d as usize].exponent(minus_one) == Some(0);
                let jij = jacobi_sum(&chars[i], &chars[j])?;
                jac = if sign { jac.add(&jij) } else { jac.sub(&jij) };
            }
        }
        let jac = jac
            .demote()
            .map_err(|_| Error::inconsistent("Jacobi-sum total is not rational"))?;
        total += jac.constant_term();
        Some(to_u64(&total, "character count")?)
    } else {
        None
    };
    if let Some(c) = characters {
        if c != enumeration {
            return Err(Error::inconsistent(format!(
                "Fermat count over F_{q}: enumeration {enumeration}, characters {c}"
            )));
        }
    }
    Ok(PointCount {
        field_size: q,
        enumeration,
        characters,
    })
}

/// Points on the smooth model of `y^q − y = x^d` (`q` the size of `base`,
/// `d = ℓⁿ`) over the ambient field of `base`, one point at infinity.
pub fn artin_schreier_point_count(ell: u64, n: u32, base: &FieldView) -> Result<PointCount> {
    let k = base.ambient();
    if base.characteristic() == ell {
        return Err(Error::invalid("ℓ must differ from the characteristic"));
    }
    let d = ell.pow(n);
    let q = base.size();
    let big = FieldView::full(base.ambient_arc());
    let qm = big.size();
    let mut affine = 0u64;
    for x in big.elements() {
        if base.trace_from_ambient(k.pow(x, d)) == 0 {
            affine += q;
        }
    }
    let enumeration = affine + 1;

    let characters = if (qm - 1) % d == 0 {
        let mut total = BiCycloElem::from_int(big.characteristic(), ell, n, (qm + 1) as i64);
        for a in base.elements().skip(1) {
            let psi = AddChar::scaled(&big, a)?;
            for j in 1..d as i64 {
                let chi = MultChar::new(&big, ell, n, j)?;
                total = total.add(&gauss_sum(&psi, &chi)?);
            }
        }
        Some(to_u64(&exact_integer(&total, "Gauss-sum count")?, "Gauss-sum count")?)
    } else {
        None
    };
    if let Some(c) = characters {
        if c != enumeration {
            return Err(Error::inconsistent(format!(
                "Artin–Schreier count over F_{qm}: trace criterion {enumeration}, Gauss sums {c}"
            )));
        }
    }
    Ok(PointCount {
        field_size: qm,
        enumeration,
        characters,
    })
}

/// Points on the smooth model of `Y² = f(X)` for squarefree `f` (constant
/// term first) in odd characteristic.
pub fn hyperelliptic_point_count(coeffs: &[i64], view: &FieldView) -> Result<u64> {
    let k = view.ambient();
    if view.characteristic() == 2 {
        return Err(Error::invalid("odd characteristic required"));
    }
    let coeffs: Vec<u32> = coeffs.iter().map(|&c| k.from_int(c)).collect();
    let deg = coeffs
        .iter()
        .rposition(|&c| c != 0)
        .ok_or_else(|| Error::invalid("f is zero mod p"))?;
    let mut squares = vec![0u64; k.size() as usize];
    for y in view.elements() {
        squares[k.mul(y, y) as usize] += 1;
    }
    let mut affine = 0;
    for x in view.elements() {
        let fx = coeffs[..=deg]
            .iter()
            .rev()
            .fold(0, |acc, &c| k.add(k.mul(acc, x), c));
        affine += squares[fx as usize];
    }
    let infinity = if deg % 2 == 1 {
        1
    } else if squares[coeffs[deg] as usize] > 0 {
        2
    } else {
        0
    };
    Ok(affine + infinity)
}

/// `P(x) = det(1 − σ_q x | H¹)` from `N_1, N_2, …` (at least `g` counts).
///
/// Coefficients above the number of supplied counts come from the functional
/// equation `c_{2g−i} = q^{g−i} c_i`; supplied coefficients beyond `g` are
/// checked against it.
pub fn zeta_from_counts(counts: &[u64], q: u64, g: usize) -> Result<Vec<BigInt>> {
    if counts.len() < g || counts.len() > 2 * g {
        return Err(Error::invalid(format!(
            "need between {g} and {} counts, got {}",
            2 * g,
            counts.len()
        )));
    }
    let qb = BigInt::from(q);
    let traces: Vec<BigInt> = counts
        .iter()
        .enumerate()
        .map(|(i, &n)| qb.pow(i as u32 + 1) + 1 - BigInt::from(n))
        .collect();
    let known = det_from_traces(&traces, counts.len()).map_err(|e| match e {
        Error::Inconsistency(m) => Error::inconsistent(format!("inconsistent counts: {m}")),
        e => e,
    })?;
    let mut p = vec![BigInt::zero(); 2 * g + 1];
    for (i, c) in known.iter().enumerate().take(counts.len() + 1) {
        p[i] = c.clone();
    }
    for i in 0..g {
        let mirrored = qb.pow((g - i) as u32) * &p[i];
        let j = 2 * g - i;
        if j <= counts.len() {
            if p[j] != mirrored {
                return Err(Error::inconsistent(format!(
                    "counts violate the functional equation at degree {j}"
                )));
            }
        } else {
            p[j] = mirrored;
        }
    }
    // weight check on the power sums: |a_m| ≤ 2g q^{m/2}
    for (m, a) in traces.iter().enumerate() {
        let bound = BigInt::from(4 * g * g) * qb.pow(m as u32 + 1);
        if a * a > bound {
            return Err(Error::inconsistent(format!(
                "count N_{} violates the Weil bound",
                m + 1
            )));
        }
    }
    Ok(p)
}

/// `x^{2g} q^g P(1/(qx)) = P(x)`.
pub fn satisfies_functional_equation(p: &[BigInt], q: u64) -> bool {
    if p.len() % 2 == 0 || !p[0].is_one() {
        return false;
    }
    let g = (p.len() - 1) / 2;
    let qb = BigInt::from(q);
    (0..=g).all(|i| p[2 * g - i] == qb.pow((g - i) as u32) * &p[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char_sums::field::Fq;
    use crate::poly;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn fermat_cubic_over_small_fields() {
        for (p, f) in [(7, 1), (2, 2), (13, 1), (7, 2)] {
            let k = FieldView::build(p, f).unwrap();
            let c = fermat_point_count(3, 1, &k).unwrap();
            assert_eq!(c.characters, Some(c.enumeration));
            assert!(within_weil_bound(c.enumeration, k.size(), 1));
        }
        // 3 ∤ 5 − 1: enumeration only; the cubic is supersingular over F_5
        let k = FieldView::build(5, 1).unwrap();
        let c = fermat_point_count(3, 1, &k).unwrap();
        assert_eq!(c.characters, None);
        assert_eq!(c.enumeration, 6);
    }

    #[test]
    fn fermat_degree_nine() {
        let k = FieldView::build(19, 1).unwrap();
        let c = fermat_point_count(3, 2, &k).unwrap();
        assert_eq!(c.characters, Some(c.enumeration));
        assert!(within_weil_bound(c.enumeration, 19, fermat_genus(9)));
    }

    /// Brute force over all pairs `(x, y)`.
    fn as_oracle(ell: u64, n: u32, base: &FieldView) -> u64 {
        let k = base.ambient();
        let d = ell.pow(n);
        let q = base.size();
        let mut count = 1;
        for x in 0..k.size() as u32 {
            for y in 0..k.size() as u32 {
                if k.sub(k.pow(y, q), y) == k.pow(x, d) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn artin_schreier_counts() {
        for (p, f, m, ell, n) in [(7, 1, 1, 3, 1), (7, 1, 2, 3, 1), (5, 1, 2, 3, 1), (3, 1, 2, 2, 1)] {
            let big = Fq::build(p, f * m).unwrap();
            let base = FieldView::subfield(&big, f).unwrap();
            let c = artin_schreier_point_count(ell, n, &base).unwrap();
            assert_eq!(c.enumeration, as_oracle(ell, n, &base));
            let expect_chars = (big.size() - 1) % ell.pow(n) == 0;
            assert_eq!(c.characters.is_some(), expect_chars);
            let g = artin_schreier_genus(base.size(), ell.pow(n));
            assert!(within_weil_bound(c.enumeration, big.size(), g));
        }
        // exponent 1: a rational curve
        let big = Fq::build(7, 2).unwrap();
        let base = FieldView::subfield(&big, 1).unwrap();
        assert_eq!(artin_schreier_point_count(3, 0, &base).unwrap().enumeration, 50);
    }

    #[test]
    fn zeta_genus_one() {
        let p = zeta_from_counts(&[8], 7, 1).unwrap();
        assert_eq!(p, ints(&[1, 0, 7]));
        let p = zeta_from_counts(&[5], 5, 1).unwrap();
        assert_eq!(p, ints(&[1, -1, 5]));
        assert!(satisfies_functional_equation(&p, 5));
    }

    #[test]
    fn motivating_example() {
        let counts: Vec<u64> = (1..=6)
            .map(|m| {
                let k = FieldView::build(5, m).unwrap();
                hyperelliptic_point_count(&[1, 0, 0, 0, 0, 0, 0, 0, 1], &k).unwrap()
            })
            .collect();
        let p = zeta_from_counts(&counts, 5, 3).unwrap();
        let a = ints(&[1, -2, 5]);
        let b = ints(&[1, 0, 5]);
        let expect = poly::mul(&a, &poly::mul(&b, &b, None), None);
        assert_eq!(p, expect);
        assert!(satisfies_functional_equation(&p, 5));
        // half the counts suffice
        assert_eq!(zeta_from_counts(&counts[..3], 5, 3).unwrap(), expect);
    }

    #[test]
    fn inconsistent_counts_are_rejected() {
        assert!(zeta_from_counts(&[6, 30], 5, 1).is_err());
        assert!(zeta_from_counts(&[100], 5, 1).is_err());
        assert!(zeta_from_counts(&[1, 2, 3], 5, 1).is_err());
    }
}
