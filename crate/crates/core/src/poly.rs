//! Dense univariate polynomials in `y`, stored constant term first.

use crate::ring::CommRing;

pub fn trim<R: CommRing>(mut p: Vec<R>) -> Vec<R> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn degree<R: CommRing>(p: &[R]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

pub fn add<R: CommRing>(a: &[R], b: &[R]) -> Vec<R> {
    let zero = a.first().or(b.first()).expect("nonempty").zero_like();
    (0..a.len().max(b.len()))
        .map(|i| {
            let x = a.get(i).unwrap_or(&zero);
            let y = b.get(i).unwrap_or(&zero);
            x.add(y)
        })
        .collect()
}

pub fn sub<R: CommRing>(a: &[R], b: &[R]) -> Vec<R> {
    let zero = a.first().or(b.first()).expect("nonempty").zero_like();
    (0..a.len().max(b.len()))
        .map(|i| {
            let x = a.get(i).unwrap_or(&zero);
            let y = b.get(i).unwrap_or(&zero);
            x.sub(y)
        })
        .collect()
}

/// Product truncated to degree `cap` (inclusive) when given.
pub fn mul<R: CommRing>(a: &[R], b: &[R], cap: Option<usize>) -> Vec<R> {
    let full = a.len() + b.len() - 1;
    let len = cap.map_or(full, |c| full.min(c + 1));
    let mut out = vec![a[0].zero_like(); len];
    for (i, x) in a.iter().enumerate() {
        if i >= len || x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

pub fn pow<R: CommRing>(p: &[R], mut e: u64, cap: Option<usize>) -> Vec<R> {
    let mut acc = vec![p[0].one_like()];
    let mut base = p.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &base, cap);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base, cap);
        }
    }
    acc
}

/// `p(y^k)`.
pub fn stretch<R: CommRing>(p: &[R], k: usize) -> Vec<R> {
    assert!(k >= 1);
    let zero = p[0].zero_like();
    let mut out = vec![zero; (p.len() - 1) * k + 1];
    for (i, c) in p.iter().enumerate() {
        out[i * k] = c.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn z(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn binomial_powers() {
        let p = pow(&z(&[1, 1]), 4, None);
        assert_eq!(p, z(&[1, 4, 6, 4, 1]));
        assert_eq!(pow(&z(&[1, 1]), 4, Some(2)), z(&[1, 4, 6]));
        assert_eq!(pow(&z(&[3, 1]), 0, None), z(&[1]));
    }

    #[test]
    fn stretch_and_trim() {
        assert_eq!(stretch(&z(&[1, 2]), 3), z(&[1, 0, 0, 2]));
        assert_eq!(trim(z(&[1, 2, 0, 0])), z(&[1, 2]));
        assert_eq!(degree(&z(&[1, 2, 0])), 1);
    }
}
