//! Multiplicative characters of order dividing `ℓⁿ` and additive characters.

use crate::error::{Error, Result};

use super::field::FieldView;

/// `χ(g'^k) = ζ_{ℓⁿ}^{v·k}` with `χ(0) = 0`.
#[derive(Clone, Debug)]
pub struct MultChar {
    view: FieldView,
    ell: u64,
    level: u32,
    v: u64,
}

impl MultChar {
    pub fn new(view: &FieldView, ell: u64, level: u32, v: i64) -> Result<Self> {
        let m = ell.pow(level);
        if (view.size() - 1) % m != 0 {
            return Err(Error::precondition(format!(
                "{ell}^{level} does not divide {} − 1",
                view.size()
            )));
        }
        Ok(MultChar {
            view: view.clone(),
            ell,
            level,
            v: v.rem_euclid(m as i64) as u64,
        })
    }

    pub fn view(&self) -> &FieldView {
        &self.view
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn order_modulus(&self) -> u64 {
        self.ell.pow(self.level)
    }

    pub fn v(&self) -> u64 {
        self.v
    }

    pub fn is_trivial(&self) -> bool {
        self.v == 0
    }

    /// Exponent `e` with `χ(x) = ζ_{ℓⁿ}^e`, or `None` at `x = 0`.
    pub fn exponent(&self, x: u32) -> Option<u64> {
        let k = self.view.dlog(x)?;
        Some((k % self.order_modulus()) * self.v % self.order_modulus())
    }

    pub fn mul(&self, other: &MultChar) -> Result<MultChar> {
        self.check_same(other)?;
        Ok(MultChar {
            v: (self.v + other.v) % self.order_modulus(),
            ..self.clone()
        })
    }

    pub fn inverse(&self) -> MultChar {
        MultChar {
            v: (self.order_modulus() - self.v) % self.order_modulus(),
            ..self.clone()
        }
    }

    pub(crate) fn check_same(&self, other: &MultChar) -> Result<()> {
        if self.ell != other.ell
            || self.level != other.level
            || self.view.size() != other.view.size()
            || self.view.generator() != other.view.generator()
        {
            return Err(Error::invalid("characters live on different fields or levels"));
        }
        Ok(())
    }
}

/// `ψ_a(x) = ζ_p^{Tr(a·x)}`, `Tr` the absolute trace of the view.
#[derive(Clone, Debug)]
pub struct AddChar {
    view: FieldView,
    a: u32,
}

impl AddChar {
    pub fn standard(view: &FieldView) -> Self {
        AddChar {
            view: view.clone(),
            a: 1,
        }
    }

    pub fn scaled(view: &FieldView, a: u32) -> Result<Self> {
        if a == 0 || !view.contains(a) {
            return Err(Error::invalid("scaling must be a nonzero element of the field"));
        }
        Ok(AddChar {
            view: view.clone(),
            a,
        })
    }

    pub fn view(&self) -> &FieldView {
        &self.view
    }

    pub fn conjugate(&self) -> Self {
        AddChar {
            view: self.view.clone(),
            a: self.view.ambient().neg(self.a),
        }
    }

    /// Exponent `t` with `ψ(x) = ζ_p^t`.
    pub fn exponent(&self, x: u32) -> u64 {
        self.view.trace(self.view.ambient().mul(self.a, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characters_are_homomorphisms() {
        for (p, f, ell, n) in [(7u64, 1u32, 3u64, 1u32), (5, 2, 3, 1), (2, 6, 3, 2), (13, 1, 3, 1)] {
            let k = FieldView::build(p, f).unwrap();
            let elems: Vec<u32> = k.elements().collect();
            let m = ell.pow(n);
            for v in 0..m as i64 {
                let chi = MultChar::new(&k, ell, n, v).unwrap();
                for &x in &elems {
                    for &y in &elems {
                        let xy = k.ambient().mul(x, y);
                        match (chi.exponent(x), chi.exponent(y)) {
                            (Some(a), Some(b)) => {
                                assert_eq!(chi.exponent(xy), Some((a + b) % m))
                            }
                            _ => assert_eq!(chi.exponent(xy), None),
                        }
                    }
                }
            }
            let psi = AddChar::standard(&k);
            for &x in &elems {
                for &y in &elems {
                    let s = k.ambient().add(x, y);
                    assert_eq!(psi.exponent(s), (psi.exponent(x) + psi.exponent(y)) % p);
                }
            }
        }
    }

    #[test]
    fn additive_compatibility_across_extension() {
        // ψ on F_{q^m} equals ψ on F_q composed with the relative trace
        let big = super::super::field::Fq::build(3, 4).unwrap();
        let full = FieldView::full(&big);
        let sub = FieldView::subfield(&big, 2).unwrap();
        let psi_big = AddChar::standard(&full);
        let psi_sub = AddChar::standard(&sub);
        for x in 0..81u32 {
            assert_eq!(psi_big.exponent(x), psi_sub.exponent(sub.trace_from_ambient(x)));
        }
    }

    #[test]
    fn norm_compatibility_of_subfield_characters() {
        let big = super::super::field::Fq::build(7, 3).unwrap();
        let full = FieldView::full(&big);
        let sub = FieldView::subfield(&big, 1).unwrap();
        for v in 0..3 {
            let chi_big = MultChar::new(&full, 3, 1, v).unwrap();
            let chi_sub = MultChar::new(&sub, 3, 1, v).unwrap();
            for x in 1..343u32 {
                assert_eq!(chi_big.exponent(x), chi_sub.exponent(sub.norm_from_ambient(x)));
            }
        }
    }

    #[test]
    fn rejects_wrong_order() {
        let k = FieldView::build(5, 1).unwrap();
        assert!(MultChar::new(&k, 3, 1, 1).is_err());
    }
}
