use std::ops::RangeInclusive;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigInt;
use serde::Serialize;
use towerlim::char_sums::{
    artin_schreier_point_count, coleman_gauss_check, coleman_jacobi_check, f_poly,
    fermat_point_count, hyperelliptic_point_count, zeta_from_counts, Family, FieldView, Fq,
    GaussDescent, GaussVerdict, JacobiDescent,
};
use towerlim::char_sums::curves::{artin_schreier_genus, fermat_genus};
use towerlim::matrix_fermat::{arnold_zarelua_check, parse_int_matrix, ArnoldReport};
use towerlim::poly;
use towerlim::tower::{
    general_congruence_report, qsum_explorer, scalar_congruence_report, CongruenceRow, QsumRow,
    TowerEngine,
};

use crate::cache::{config_digest, ensure_level, Cache};
use crate::config::ExperimentConfig;
use crate::report::{ms_since, overall, verdict, LevelTiming, Report};
use crate::CliError;

/// Enumeration over `F_Q` for the Fermat curve costs `O(Q²)`.
pub const FERMAT_ENUMERATION_CAP: u64 = 20_000;

pub fn parse_int_list(text: &str, what: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Invalid(format!("{what}: cannot parse {s:?} as an integer")))
        })
        .collect()
}

pub fn parse_u64_list(text: &str, what: &str) -> Result<Vec<u64>, CliError> {
    parse_int_list(text, what)?
        .into_iter()
        .map(|x| u64::try_from(x).map_err(|_| CliError::Invalid(format!("{what}: {x} is negative"))))
        .collect()
}

/// `"a..b"` (inclusive) or a single level `"a"`.
pub fn parse_range(text: &str) -> Result<RangeInclusive<u32>, CliError> {
    let bad = || CliError::Invalid(format!("n-range: expected \"a..b\", got {text:?}"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (text.trim(), text.trim()),
    };
    let lo: u32 = lo.parse().map_err(|_| bad())?;
    let hi: u32 = hi.parse().map_err(|_| bad())?;
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn decimals(p: &[BigInt]) -> Vec<String> {
    p.iter().map(|c| c.to_string()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Scalar,
    General,
}

#[derive(Serialize)]
struct LevelRow {
    n: u32,
    k_n: u64,
    orbits: usize,
    /// `r_n` coefficients modulo `ℓᴺ`.
    coefficients: Vec<String>,
    /// Comparison of level `n` with level `n + 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    congruence: Option<CongruenceRow>,
}

#[derive(Serialize)]
struct ConvergeResult {
    mode: Mode,
    ell: u64,
    b: usize,
    r: usize,
    q: Vec<Vec<i64>>,
    n_max: u32,
    precision: u32,
    alpha: u32,
    beta0: u32,
    n0: u32,
    levels: Vec<LevelRow>,
}

pub fn converge(config: &Path, mode: Mode, n_max: Option<u32>, out: Option<&Path>) -> Result<(), CliError> {
    let start = Instant::now();
    let cfg = ExperimentConfig::load(config)?;
    let spec = cfg.tower_spec(n_max)?;
    if mode == Mode::Scalar && !spec.is_scalar() {
        return Err(CliError::Invalid("mode scalar needs a scalar Q".into()));
    }
    let digest = config_digest(&spec);
    let cache = cfg.cache_dir().map(|d| Cache::new(&d, &digest));
    let engine = TowerEngine::new(spec.clone())?;
    let params = engine.params();

    let mut timings = Vec::new();
    for n in 1..=spec.n_max {
        let t = Instant::now();
        let source = ensure_level(&engine, cache.as_ref(), n)?;
        timings.push(LevelTiming {
            n,
            ms: ms_since(t),
            source,
        });
    }
    let mut levels = Vec::new();
    for n in 1..=spec.n_max {
        let data = engine.level(n)?;
        let congruence = if n < spec.n_max {
            Some(match mode {
                Mode::Scalar => scalar_congruence_report(&engine, n)?,
                Mode::General => general_congruence_report(&engine, n)?,
            })
        } else {
            None
        };
        levels.push(LevelRow {
            n,
            k_n: data.k_n,
            orbits: data.reps.len(),
            coefficients: data.r_poly.iter().map(|c| c.residue().to_string()).collect(),
            congruence,
        });
    }
    let status = overall(levels.iter().filter_map(|l| l.congruence.as_ref().map(|c| c.status)));
    let result = ConvergeResult {
        mode,
        ell: spec.ell,
        b: spec.b,
        r: spec.r,
        q: spec.q.clone(),
        n_max: spec.n_max,
        precision: spec.precision,
        alpha: params.alpha,
        beta0: params.beta0,
        n0: params.n0,
        levels,
    };
    let mut report = Report::new("converge", Some(digest), status, result);
    report.timings.levels = timings;
    report.timings.total_ms = ms_since(start);
    report.emit(out)
}

pub fn arnold(matrix: &str, ell: u64, n: u32, out: Option<&Path>) -> Result<(), CliError> {
    let start = Instant::now();
    let a = parse_int_matrix(matrix)?;
    let rep: ArnoldReport = arnold_zarelua_check(&a, ell, n)?;
    let mut report = Report::new("arnold", None, verdict(rep.pass), rep);
    report.timings.total_ms = ms_since(start);
    report.emit(out)
}

#[derive(Serialize)]
struct CountRow {
    m: u32,
    field_size: u64,
    enumeration: u64,
    /// From the character-sum expansion, when `ℓⁿ | q^m − 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    characters: Option<u64>,
    /// From the Weil polynomial.
    #[serde(skip_serializing_if = "Option::is_none")]
    predicted: Option<String>,
}

#[derive(Serialize)]
struct ZetaResult {
    family: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    ell: Option<u64>,
    n: u32,
    q: u64,
    genus: u64,
    /// `det(1 − σ_q x | H¹)`.
    weil_polynomial: Vec<String>,
    source: &'static str,
    counts: Vec<CountRow>,
    /// `zeta_from_counts` when at least `g` counts were enumerated.
    #[serde(skip_serializing_if = "Option::is_none")]
    from_counts: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<Vec<String>>,
    agreement: bool,
}

/// `N_m = q^m + 1 − Σ αᵢ^m` for `P(x) = Π (1 − αᵢ x)`, `m = 1..=count`.
fn counts_from_weil(p: &[BigInt], q: u64, count: usize) -> Vec<BigInt> {
    let c = |i: usize| p.get(i).cloned().unwrap_or_default();
    let mut s: Vec<BigInt> = Vec::with_capacity(count);
    for m in 1..=count {
        let mut v = -BigInt::from(m) * c(m);
        for i in 1..m {
            v -= c(i) * &s[m - i - 1];
        }
        s.push(v);
    }
    s.iter()
        .enumerate()
        .map(|(i, si)| BigInt::from(q).pow(i as u32 + 1) + 1 - si)
        .collect()
}

fn largest_m(q: u64, cap: u64, limit: u64) -> u32 {
    let mut m = 0u32;
    let mut size = 1u64;
    while (m as u64) < limit {
        match size.checked_mul(q) {
            Some(s) if s <= cap => {
                size = s;
                m += 1;
            }
            _ => break,
        }
    }
    m
}

pub struct ZetaArgs {
    pub ell: u64,
    pub n: u32,
    pub p: u64,
    pub f: u32,
    pub m_max: Option<u32>,
    pub field_cap: u64,
}

fn field_q(p: u64, f: u32) -> Result<u64, CliError> {
    p.checked_pow(f)
        .ok_or_else(|| CliError::Guard(format!("{p}^{f} overflows")))
}

fn check_m(m_max: Option<u32>, q: u64, cap: u64, default_limit: u64) -> Result<u32, CliError> {
    let feasible = largest_m(q, cap, u64::MAX);
    match m_max {
        Some(m) if m > feasible => Err(CliError::Guard(format!(
            "F_{{{q}^{m}}} exceeds the field cap {cap}"
        ))),
        Some(m) => Ok(m),
        None => Ok(feasible.min(default_limit as u32)),
    }
}

pub fn zeta_character_family(family: Family, args: &ZetaArgs, out: Option<&Path>) -> Result<(), CliError> {
    let start = Instant::now();
    let q = field_q(args.p, args.f)?;
    let d = args
        .ell
        .checked_pow(args.n)
        .ok_or_else(|| CliError::Invalid("ℓⁿ overflows".into()))?;
    let (name, genus, enum_cap) = match family {
        Family::Fermat => ("fermat", fermat_genus(d), args.field_cap.min(FERMAT_ENUMERATION_CAP)),
        Family::ArtinSchreier => ("as", artin_schreier_genus(q, d), args.field_cap),
    };
    let (_, weil) = f_poly(family, args.ell, args.n, args.p, args.f)?;
    let m_max = check_m(args.m_max, q, enum_cap, genus.max(2))?;
    let predicted = counts_from_weil(&weil, q, m_max as usize);
    let mut counts = Vec::new();
    for m in 1..=m_max {
        let c = match family {
            Family::Fermat => fermat_point_count(args.ell, args.n, &FieldView::build(args.p, args.f * m)?)?,
            Family::ArtinSchreier => {
                let big = Fq::build(args.p, args.f * m)?;
                artin_schreier_point_count(args.ell, args.n, &FieldView::subfield(&big, args.f)?)?
            }
        };
        counts.push(CountRow {
            m,
            field_size: c.field_size,
            enumeration: c.enumeration,
            characters: c.characters,
            predicted: Some(predicted[m as usize - 1].to_string()),
        });
    }
    let mut agreement = counts
        .iter()
        .zip(&predicted)
        .all(|(c, p)| BigInt::from(c.enumeration) == *p && c.characters.is_none_or(|x| x == c.enumeration));
    let from_counts = if genus > 0 && m_max as u64 >= genus {
        let raw: Vec<u64> = counts.iter().map(|c| c.enumeration).collect();
        let z = zeta_from_counts(&raw, q, genus as usize)?;
        agreement &= poly::trim(z.clone()) == poly::trim(weil.clone());
        Some(decimals(&z))
    } else {
        None
    };
    let result = ZetaResult {
        family: name,
        ell: Some(args.ell),
        n: args.n,
        q,
        genus,
        weil_polynomial: decimals(&weil),
        source: "characters",
        counts,
        from_counts,
        closed_form: None,
        agreement,
    };
    let mut report = Report::new("zeta", None, verdict(agreement), result);
    report.timings.total_ms = ms_since(start);
    report.emit(out)
}

/// `(1 − 2x + 5x²) Π_{i=1}^{n−2} (1 + 5^{2^{i−1}} x^{2^i})²`.
fn motivating_closed_form(n: u32) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = [1, -2, 5].iter().map(|&x| BigInt::from(x)).collect();
    for i in 1..n.saturating_sub(1) {
        let deg = 1usize << i;
        let mut factor = vec![BigInt::from(0); deg + 1];
        factor[0] = BigInt::from(1);
        factor[deg] = BigInt::from(5).pow(1 << (i - 1));
        p = poly::mul(&p, &poly::mul(&factor, &factor, None), None);
    }
    p
}

pub fn zeta_motivating(n: u32, m_max: Option<u32>, field_cap: u64, out: Option<&Path>) -> Result<(), CliError> {
    let start = Instant::now();
    if !(2..=20).contains(&n) {
        return Err(CliError::Invalid("motivating example needs 2 ≤ n ≤ 20".into()));
    }
    let degree = 1usize << n;
    let genus = (degree as u64 - 2) / 2;
    let m_max = check_m(m_max, 5, field_cap, 2 * genus)?;
    if (m_max as u64) < genus {
        return Err(CliError::Guard(format!(
            "genus {genus} needs F_{{5^{genus}}}, beyond the field cap {field_cap}"
        )));
    }
    let mut f = vec![0i64; degree + 1];
    f[0] = 1;
    f[degree] = 1;
    let mut counts = Vec::new();
    for m in 1..=m_max {
        let k = FieldView::build(5, m)?;
        counts.push(CountRow {
            m,
            field_size: k.size(),
            enumeration: hyperelliptic_point_count(&f, &k)?,
            characters: None,
            predicted: None,
        });
    }
    let raw: Vec<u64> = counts.iter().map(|c| c.enumeration).collect();
    let weil = zeta_from_counts(&raw, 5, genus as usize)?;
    let closed = motivating_closed_form(n);
    let agreement = poly::trim(weil.clone()) == poly::trim(closed.clone());
    let result = ZetaResult {
        family: "motivating",
        ell: None,
        n,
        q: 5,
        genus,
        weil_polynomial: decimals(&weil),
        source: "counts",
        counts,
        from_counts: None,
        closed_form: Some(decimals(&closed)),
        agreement,
    };
    let mut report = Report::new("zeta", None, verdict(agreement), result);
    report.timings.total_ms = ms_since(start);
    report.emit(out)
}

pub struct DescentArgs {
    pub ell: u64,
    pub n: u32,
    pub p: u64,
    pub f: u32,
    pub field_cap: u64,
}

fn descent_guard(a: &DescentArgs) -> Result<(), CliError> {
    let big = a
        .p
        .checked_pow(a.f * a.ell as u32)
        .filter(|&s| s <= a.field_cap);
    if big.is_none() {
        return Err(CliError::Guard(format!(
            "F_{{{}^{}}} exceeds the field cap {}",
            a.p,
            a.f * a.ell as u32,
            a.field_cap
        )));
    }
    Ok(())
}

fn parse_pairs(text: &str) -> Result<Vec<(u64, u64)>, CliError> {
    text.split(';')
        .map(|pair| match parse_u64_list(pair, "pairs")?.as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err(CliError::Invalid(format!("pairs: {pair:?} is not \"v1,v2\""))),
        })
        .collect()
}

pub fn coleman_jacobi(a: &DescentArgs, pairs: Option<&str>, out: Option<&Path>) -> Result<(), CliError> {
    let start = Instant::now();
    descent_guard(a)?;
    let pairs = pairs.map(parse_pairs).transpose()?;
    let res: JacobiDescent = coleman_jacobi_check(a.ell, a.n, a.p, a.f, pairs.as_deref())?;
    let mut report = Report::new("coleman", None, verdict(res.pass), res);
    report.timings.total_ms = ms_since(start);
    report.emit(out)
}

pub fn coleman_gauss(a: &DescentArgs, vs: Option<&str>, out: Option<&Path>) -> Result<(), CliError> {
    let start = Instant::now();
    descent_guard(a)?;
    let vs = vs.map(|s| parse_u64_list(s, "v")).transpose()?;
    let res: GaussDescent = coleman_gauss_check(a.ell, a.n, a.p, a.f, vs.as_deref())?;
    let mut report = Report::new("coleman", None, verdict(res.verdict == GaussVerdict::Resolved), res);
    report.timings.total_ms = ms_since(start);
    report.emit(out)
}

#[derive(Serialize)]
struct QsumResult {
    lambda: Vec<i64>,
    v: Vec<u64>,
    rows: Vec<QsumRow>,
}

pub fn qsum(config: &Path, lambda: &str, v: &str, n_range: &str, out: Option<&Path>) -> Result<(), CliError> {
    let start = Instant::now();
    let cfg = ExperimentConfig::load(config)?;
    let range = parse_range(n_range)?;
    let spec = cfg.tower_spec(None)?;
    let digest = config_digest(&spec);
    let engine = TowerEngine::new(spec)?;
    let lambda = parse_int_list(lambda, "lambda")?;
    let v = parse_u64_list(v, "v")?;
    let rows = qsum_explorer(&engine, &lambda, &v, range)?;
    let status = overall(rows.iter().map(|r| r.status));
    let mut report = Report::new("qsum", Some(digest), status, QsumResult { lambda, v, rows });
    report.timings.total_ms = ms_since(start);
    report.emit(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..5").unwrap(), 2..=5);
        assert_eq!(parse_range("2..=5").unwrap(), 2..=5);
        assert_eq!(parse_range("3").unwrap(), 3..=3);
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("0..2").is_err());
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn lists_and_pairs() {
        assert_eq!(parse_int_list("3, -1", "x").unwrap(), vec![3, -1]);
        assert!(parse_u64_list("1,-1", "v").is_err());
        assert_eq!(parse_pairs("1,1;2,2").unwrap(), vec![(1, 1), (2, 2)]);
        assert!(parse_pairs("1,1,1").is_err());
    }

    #[test]
    fn weil_counts_genus_one() {
        // 1 − a x + q x² has N_1 = q + 1 − a and N_2 = q² + 1 − (a² − 2q)
        let p = ints(&[1, -2, 5]);
        assert_eq!(counts_from_weil(&p, 5, 2), ints(&[4, 26 - (4 - 10)]));
    }

    #[test]
    fn closed_form_degrees() {
        assert_eq!(motivating_closed_form(2), ints(&[1, -2, 5]));
        for n in 2..6 {
            assert_eq!(poly::degree(&motivating_closed_form(n)), (1 << n) - 2);
        }
    }

    #[test]
    fn feasible_extension_degrees() {
        assert_eq!(largest_m(5, 15_625, 100), 6);
        assert_eq!(largest_m(5, 15_624, 100), 5);
        assert_eq!(largest_m(5, 10_000_000, 3), 3);
    }
}
