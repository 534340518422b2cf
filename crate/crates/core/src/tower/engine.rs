//! Twisted products `A_n(v)`, their characteristic polynomials `p_{n,v}`,
//! and the orbit products `r_n`.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{Coefficient, Cyclo, CycloElem, CycloRecord, Modulus};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::padic::{PadicInt, Valuation};
use crate::poly;

use super::orbit::{
    canonical_rep, is_primitive, orbit_order, orbit_params_with_x, primitive_orbit_reps, q_inverse,
    q_mod, ModMatrix, OrbitParams, OrbitRep,
};
use super::spec::TowerSpec;

/// `F(ζ^w)` as an `r × r` array of sparse sums `Σ c·ζ^e`.
pub fn evaluate_sparse<C: Coefficient>(
    spec: &TowerSpec,
    ctx: &C::Ctx,
    n: u32,
    w: &[u64],
) -> Vec<Vec<(usize, C)>> {
    let m = spec.ell.pow(n) as i128;
    let r = spec.r;
    let mut entries: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); r * r];
    for t in &spec.f {
        let e: i128 = t
            .exponents
            .iter()
            .zip(w)
            .map(|(&a, &x)| a as i128 * x as i128)
            .sum::<i128>()
            .rem_euclid(m);
        for i in 0..r {
            for j in 0..r {
                let c = t.matrix[i][j];
                if c != 0 {
                    *entries[i * r + j].entry(e as usize).or_insert(0) += c;
                }
            }
        }
    }
    entries
        .into_iter()
        .map(|map| {
            map.into_iter()
                .filter(|&(_, c)| c != 0)
                .map(|(e, c)| (e, C::from_i64(ctx, c)))
                .collect()
        })
        .collect()
}

fn dense_from_sparse<C: Coefficient>(
    ell: u64,
    n: u32,
    ctx: &C::Ctx,
    r: usize,
    sparse: &[Vec<(usize, C)>],
) -> Matrix<Cyclo<C>> {
    Matrix::new(
        r,
        r,
        sparse
            .iter()
            .map(|terms| {
                let t: Vec<(i64, C)> = terms.iter().map(|(e, c)| (*e as i64, c.clone())).collect();
                Cyclo::from_terms(ell, n, ctx, &t)
            })
            .collect(),
    )
}

/// `F(ζ^w) · P` with `F(ζ^w)` sparse.
fn left_mul_sparse<C: Coefficient>(
    r: usize,
    sparse: &[Vec<(usize, C)>],
    p: &Matrix<Cyclo<C>>,
) -> Matrix<Cyclo<C>> {
    let zero = p.get(0, 0).zero_out();
    let mut out = Vec::with_capacity(r * r);
    for a in 0..r {
        for c in 0..r {
            let mut acc = zero.clone();
            for b in 0..r {
                let terms = &sparse[a * r + b];
                if terms.is_empty() {
                    continue;
                }
                acc = acc.add(&p.get(b, c).mul_sparse(terms));
            }
            out.push(acc);
        }
    }
    Matrix::new(r, r, out)
}

impl<C: Coefficient> Cyclo<C> {
    fn zero_out(&self) -> Self {
        Cyclo::zero(self.ell(), self.level(), self.ctx())
    }
}

/// `A_n(v) = F(ζ^{Q^{k−1}v}) ⋯ F(ζ^{Qv}) F(ζ^v)` with `k = k_n(v)`, over any
/// coefficient type.
pub fn twisted_product<C: Coefficient>(
    spec: &TowerSpec,
    ctx: &C::Ctx,
    n: u32,
    v: &[u64],
) -> Result<Matrix<Cyclo<C>>> {
    let k = orbit_order(spec, n, v)?;
    let m = spec.ell.pow(n);
    let q = q_mod(spec, n);
    let mut w: Vec<u64> = v.iter().map(|x| x % m).collect();
    let mut prod = dense_from_sparse(spec.ell, n, ctx, spec.r, &evaluate_sparse(spec, ctx, n, &w));
    for _ in 1..k {
        w = q.apply(&w);
        prod = left_mul_sparse(spec.r, &evaluate_sparse(spec, ctx, n, &w), &prod);
    }
    Ok(prod)
}

/// `p_{n,v}(y) = det(I − y·A_n(v))` with coefficients in `Z/ℓᴺ[ζ_{ℓⁿ}]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    pub level: u32,
    pub coeffs: Vec<CycloElem>,
}

impl CharPoly {
    /// Every coefficient is known modulo `ℓᴺ`: no step divides.
    pub fn effective_precision(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.precision()).collect()
    }

    pub fn embed_up(&self) -> CharPoly {
        CharPoly {
            level: self.level + 1,
            coeffs: self.coeffs.iter().map(|c| c.embed_up()).collect(),
        }
    }

    pub fn records(&self) -> Vec<CycloRecord> {
        self.coeffs.iter().map(|c| c.record()).collect()
    }

    pub fn degree(&self) -> usize {
        poly::degree(&self.coeffs)
    }
}

/// Everything computed at one level of the tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelData {
    pub level: u32,
    pub k_n: u64,
    pub reps: Vec<OrbitRep>,
    pub p_polys: Vec<CharPoly>,
    /// `r_n` with coefficients in `Z/ℓᴺ`, constant term first.
    pub r_poly: Vec<PadicInt>,
}

/// Serializable form of [`LevelData`]; integers as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: u32,
    pub k_n: u64,
    pub reps: Vec<OrbitRep>,
    pub p_polys: Vec<Vec<CycloRecord>>,
    pub r_poly: Vec<String>,
}

impl LevelData {
    pub fn record(&self) -> LevelRecord {
        LevelRecord {
            level: self.level,
            k_n: self.k_n,
            reps: self.reps.clone(),
            p_polys: self.p_polys.iter().map(|p| p.records()).collect(),
            r_poly: self.r_poly.iter().map(|c| c.residue().to_string()).collect(),
        }
    }

    pub fn from_record(rec: &LevelRecord, ctx: &Modulus) -> Result<Self> {
        let p_polys = rec
            .p_polys
            .iter()
            .map(|p| {
                let coeffs = p
                    .iter()
                    .map(|c| {
                        let x = CycloElem::from_record(c)?;
                        if x.level() != rec.level || x.modulus() != ctx {
                            return Err(Error::invalid("polynomial from a different ring"));
                        }
                        Ok(x)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(CharPoly {
                    level: rec.level,
                    coeffs,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let r_poly = rec
            .r_poly
            .iter()
            .map(|s| {
                let v: u64 = s
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad residue {s:?}")))?;
                if v >= ctx.value() {
                    return Err(Error::invalid("residue out of range"));
                }
                Ok(ctx.padic(v))
            })
            .collect::<Result<Vec<_>>>()?;
        if p_polys.len() != rec.reps.len() {
            return Err(Error::invalid("one polynomial per representative expected"));
        }
        Ok(LevelData {
            level: rec.level,
            k_n: rec.k_n,
            reps: rec.reps.clone(),
            p_polys,
            r_poly,
        })
    }

    pub fn p_for(&self, rep: &[u64]) -> Option<&CharPoly> {
        self.reps
            .binary_search_by(|r| r.v.as_slice().cmp(rep))
            .ok()
            .map(|i| &self.p_polys[i])
    }
}

/// Holds a validated spec, its orbit parameters and a per-level memo.
pub struct TowerEngine {
    spec: TowerSpec,
    params: OrbitParams,
    x: Matrix<PadicInt>,
    ctx: Modulus,
    q_inv: ModMatrix,
    levels: RwLock<BTreeMap<u32, Arc<LevelData>>>,
}

impl TowerEngine {
    pub fn new(spec: TowerSpec) -> Result<Self> {
        spec.validate()?;
        let (params, x) = orbit_params_with_x(&spec)?;
        let ctx = Modulus::new(spec.ell, spec.precision)?;
        let q_inv = q_inverse(&spec)?;
        Ok(TowerEngine {
            spec,
            params,
            x,
            ctx,
            q_inv,
            levels: RwLock::new(BTreeMap::new()),
        })
    }

    pub fn spec(&self) -> &TowerSpec {
        &self.spec
    }

    pub fn params(&self) -> OrbitParams {
        self.params
    }

    /// `X = ℓ^{−α} log Q`.
    pub fn log_direction(&self) -> &Matrix<PadicInt> {
        &self.x
    }

    pub fn modulus(&self) -> &Modulus {
        &self.ctx
    }

    /// `Q^{−1}` modulo `ℓᴺ`.
    pub fn q_inverse(&self) -> &ModMatrix {
        &self.q_inv
    }

    pub fn frobenius_product(&self, n: u32, v: &[u64]) -> Result<Matrix<CycloElem>> {
        twisted_product(&self.spec, &self.ctx, n, v)
    }

    pub fn compute_p(&self, n: u32, v: &[u64]) -> Result<CharPoly> {
        Ok(CharPoly {
            level: n,
            coeffs: self.frobenius_product(n, v)?.charpoly(),
        })
    }

    fn check_level(&self, n: u32) -> Result<()> {
        if n == 0 {
            return Err(Error::invalid("levels start at 1"));
        }
        if n > self.spec.n_max {
            return Err(Error::invalid(format!(
                "level {n} exceeds n_max = {}",
                self.spec.n_max
            )));
        }
        Ok(())
    }

    /// Compute a level from scratch, checking the orbit-order formula and
    /// the invariance `p_{n,Qv} = p_{n,v}` along the way.
    pub fn compute_level(&self, n: u32) -> Result<LevelData> {
        self.check_level(n)?;
        let reps = primitive_orbit_reps(&self.spec, n)?;
        let k_n = reps.iter().map(|r| r.size).min().unwrap();
        let expected = self.params.k_n(self.spec.ell, n);
        if k_n != expected {
            return Err(Error::inconsistent(format!(
                "level {n}: smallest orbit has size {k_n}, orbit parameters predict {expected}"
            )));
        }
        let q = q_mod(&self.spec, n);
        let p_polys = reps
            .par_iter()
            .map(|rep| {
                let p = self.compute_p(n, &rep.v)?;
                let shifted = self.compute_p(n, &q.apply(&rep.v))?;
                if shifted != p {
                    return Err(Error::inconsistent(format!(
                        "p_(n,Qv) ≠ p_(n,v) at level {n}, v = {:?}",
                        rep.v
                    )));
                }
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()?;
        let r_poly = self.fold_r(n, k_n, &reps, &p_polys)?;
        Ok(LevelData {
            level: n,
            k_n,
            reps,
            p_polys,
            r_poly,
        })
    }

    fn fold_r(
        &self,
        n: u32,
        k_n: u64,
        reps: &[OrbitRep],
        p_polys: &[CharPoly],
    ) -> Result<Vec<PadicInt>> {
        let one = CycloElem::one(self.spec.ell, n, &self.ctx);
        let mut acc = vec![one];
        for (rep, p) in reps.iter().zip(p_polys) {
            if rep.size % k_n != 0 {
                return Err(Error::inconsistent(format!(
                    "orbit size {} is not a multiple of k_n = {k_n}",
                    rep.size
                )));
            }
            let stretched = poly::stretch(&p.coeffs, (rep.size / k_n) as usize);
            acc = poly::mul(&acc, &stretched, None);
        }
        acc.iter()
            .map(|c| {
                let base = c.demote().map_err(|_| {
                    Error::inconsistent(format!(
                        "r_{n} has a coefficient outside the base ring: {c}"
                    ))
                })?;
                Ok(self.ctx.padic(*base.constant_term()))
            })
            .collect()
    }

    /// Cached level data, computing on first use.
    pub fn level(&self, n: u32) -> Result<Arc<LevelData>> {
        if let Some(d) = self.levels.read().unwrap().get(&n) {
            return Ok(d.clone());
        }
        let data = Arc::new(self.compute_level(n)?);
        self.levels.write().unwrap().insert(n, data.clone());
        Ok(data)
    }

    pub fn cached_levels(&self) -> Vec<u32> {
        self.levels.read().unwrap().keys().copied().collect()
    }

    /// Accept level data from an external cache after structural checks: the
    /// representatives must match a fresh enumeration and `r_n` must be the
    /// product of the supplied `p_{n,v}`.
    pub fn insert_level(&self, data: LevelData) -> Result<()> {
        self.check_level(data.level)?;
        let reps = primitive_orbit_reps(&self.spec, data.level)?;
        if reps != data.reps {
            return Err(Error::invalid("cached orbit representatives do not match"));
        }
        if data.k_n != self.params.k_n(self.spec.ell, data.level) {
            return Err(Error::invalid("cached k_n does not match"));
        }
        if data
            .p_polys
            .iter()
            .any(|p| p.level != data.level || p.coeffs.len() != self.spec.r + 1)
        {
            return Err(Error::invalid("cached polynomial has the wrong shape"));
        }
        let r = self.fold_r(data.level, data.k_n, &data.reps, &data.p_polys)?;
        if r != data.r_poly {
            return Err(Error::invalid("cached r_n is not the product of its factors"));
        }
        self.levels
            .write()
            .unwrap()
            .insert(data.level, Arc::new(data));
        Ok(())
    }

    /// `p_{n,v}` for any primitive `v`, via its orbit representative.
    pub fn p_poly(&self, n: u32, v: &[u64]) -> Result<CharPoly> {
        if !is_primitive(v, self.spec.ell) {
            return Err(Error::precondition(format!("{v:?} is not primitive")));
        }
        let rep = canonical_rep(&self.spec, n, v);
        let level = self.level(n)?;
        level
            .p_for(&rep)
            .cloned()
            .ok_or_else(|| Error::inconsistent(format!("no representative {rep:?} at level {n}")))
    }

    pub fn r_poly(&self, n: u32) -> Result<Vec<PadicInt>> {
        Ok(self.level(n)?.r_poly.clone())
    }
}

/// Minimum valuation of the coefficient-wise difference.
pub fn difference_valuation<T, F>(a: &[T], b: &[T], val: F) -> Valuation
where
    T: crate::ring::CommRing,
    F: Fn(&T) -> Valuation,
{
    poly::sub(a, b)
        .iter()
        .map(val)
        .reduce(Valuation::min)
        .unwrap()
}
