//! Error-bound coefficients for the grid approximation.
//!
//! Every bound has the shape `f_Δ(n,r) − (reference) ≤ c·(f̄ − f̲)`; only the
//! coefficient `c` is computed here, exactly. The reference is `f̲` for the
//! classical bounds and `f_Δ(n,m)` for the refined ones. Since
//! `f_Δ(n,m) ≥ f̲`, every coefficient also bounds `f_Δ(n,r) − f_Δ(n,m)`,
//! which is what [`check_bound`] certifies on concrete polynomials.

use std::fmt;

use num::{BigInt, One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::combin::{binomial_int, falling_int, falling_poly_coeffs};
use crate::grid::{composition_count, grid_maximize, grid_minimize, Compositions, Enclosure};
use crate::poly::{Exponent, HomogeneousPolynomial};
use crate::rational::{int, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundKind {
    /// `1/r` for quadratics.
    KlsQuad,
    /// `(1 − r^{d̲}/r^d)·C(2d−1,d)·d^d`.
    KlsGeneral,
    /// `(m−r)/(r(m−1))` for quadratics, `1 ≤ r ≤ m`.
    QuadRefined,
    /// `m/r²` for quadratics.
    QuadDenom,
    /// `4/r − 4/r²` for cubics, `r ≥ 2`.
    CubicKls,
    /// `1 − r^{d̲}/r^d` for square-free polynomials.
    SqfreeKls,
    /// `(m−r)(4mr−2m−2r)/(r²(m−1)(m−2))` for cubics, `1 ≤ r ≤ m`, `m ≥ 3`.
    CubicRefined,
    /// `1 − (r^{d̲}/r^d)(m^d/m^{d̲})` for square-free polynomials, `m ≥ d`.
    SqfreeRefined,
    /// `(1 − r^{d̲}m^d/(r^d m^{d̲}))·C(2d−1,d)·d^d`, `1 ≤ r ≤ m`, `m ≥ d`.
    GeneralRefined,
    /// `m²/(r²(m−2))` for `r ≤ m`, `6m/r²` for `r > m`; cubics, `m ≥ 3`.
    CubicRho,
    /// `(m/r²)·c_d·C(2d−1,d)·d^d`, `m ≥ d`.
    GeneralRho,
}

impl BoundKind {
    pub const ALL: [BoundKind; 11] = [
        BoundKind::KlsQuad,
        BoundKind::KlsGeneral,
        BoundKind::QuadRefined,
        BoundKind::QuadDenom,
        BoundKind::CubicKls,
        BoundKind::SqfreeKls,
        BoundKind::CubicRefined,
        BoundKind::SqfreeRefined,
        BoundKind::GeneralRefined,
        BoundKind::CubicRho,
        BoundKind::GeneralRho,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            BoundKind::KlsQuad => "KLS_QUAD",
            BoundKind::KlsGeneral => "KLS_GENERAL",
            BoundKind::QuadRefined => "QUAD_REFINED",
            BoundKind::QuadDenom => "QUAD_DENOM",
            BoundKind::CubicKls => "CUBIC_KLS",
            BoundKind::SqfreeKls => "SQFREE_KLS",
            BoundKind::CubicRefined => "CUBIC_REFINED",
            BoundKind::SqfreeRefined => "SQFREE_REFINED",
            BoundKind::GeneralRefined => "GENERAL_REFINED",
            BoundKind::CubicRho => "CUBIC_RHO",
            BoundKind::GeneralRho => "GENERAL_RHO",
        }
    }

    pub fn from_tag(tag: &str) -> Option<BoundKind> {
        Self::ALL
            .into_iter()
            .find(|k| k.tag().eq_ignore_ascii_case(tag))
    }

    /// Kinds that only hold for square-free polynomials.
    pub fn requires_square_free(self) -> bool {
        matches!(self, BoundKind::SqfreeKls | BoundKind::SqfreeRefined)
    }

    /// Kinds whose coefficient depends on the denominator `m`.
    pub fn uses_m(self) -> bool {
        !matches!(
            self,
            BoundKind::KlsQuad | BoundKind::KlsGeneral | BoundKind::CubicKls | BoundKind::SqfreeKls
        )
    }

    /// Degree restriction, if any.
    pub fn required_degree(self) -> Option<u32> {
        match self {
            BoundKind::KlsQuad | BoundKind::QuadRefined | BoundKind::QuadDenom => Some(2),
            BoundKind::CubicKls | BoundKind::CubicRefined | BoundKind::CubicRho => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// `k ≥ 1` with `(k−1)m < r ≤ km`.
pub fn multiple_index(r: u64, m: u64) -> u64 {
    assert!(r >= 1 && m >= 1);
    r.div_ceil(m)
}

/// `C(2d−1, d)·d^d`, the Bernstein-range constant.
pub fn bernstein_range_constant(d: u32) -> Rational {
    let d64 = u64::from(d);
    int(binomial_int(2 * d64 - 1, d64) * num::pow(BigInt::from(d), d as usize))
}

/// `r^{d̲}/r^d`
fn falling_ratio(r: u64, d: u32) -> Rational {
    Rational::new(
        falling_int(r, u64::from(d)),
        num::pow(BigInt::from(r), d as usize),
    )
}

/// `1 − r^{d̲}m^d/(r^d m^{d̲})`; requires `m ≥ d`.
pub fn refined_gap(r: u64, m: u64, d: u32) -> Rational {
    assert!(m >= u64::from(d), "refined_gap needs m >= d (m={m}, d={d})");
    Rational::one() - falling_ratio(r, d) / falling_ratio(m, d)
}

/// `c_d = (d−1)·Σ aᵢ`, with `c_1 = 0` (the empty expansion).
pub fn c_d(d: u32) -> Rational {
    if d < 2 {
        return Rational::zero();
    }
    falling_poly_coeffs(d).expect("d >= 2").c_d
}

/// Whether `r ≥ 1 + (m−1)/(√(2m) − 1)`, decided exactly through the
/// equivalent `(r−1)²·2m ≥ (m+r−2)²` (both sides of the original are
/// nonnegative once `r ≥ 1`).
pub fn cubic_threshold_met(r: u64, m: u64) -> bool {
    if r < 1 || m < 1 {
        return false;
    }
    let lhs = BigInt::from(r - 1).pow(2) * BigInt::from(2 * m);
    let rhs = BigInt::from(m + r - 2).pow(2);
    lhs >= rhs
}

/// `φ(r) = (2km−1)r² + (4−6km)r − k²m² + 6km − 4`.
pub fn phi(k: u64, m: u64, r: u64) -> BigInt {
    let km = BigInt::from(k * m);
    let r = BigInt::from(r);
    (&km * 2 - 1) * &r * &r + (BigInt::from(4) - &km * 6) * &r - &km * &km + &km * 6 - 4
}

/// Coefficient of `(f̄ − f̲)` for one bound kind at `(d, r, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub d: u32,
    pub r: u64,
    pub m: Option<u64>,
    /// `k` with `(k−1)m < r ≤ km`, when `m` is known.
    pub k: Option<u64>,
    /// `None` when not applicable.
    pub coefficient: Option<Rational>,
    pub reason: String,
}

impl BoundReport {
    pub fn applicable(&self) -> bool {
        self.coefficient.is_some()
    }

    /// Row for the bound table: `kind,d,r,m,k,coefficient,applicable,reason`.
    pub fn csv_record(&self) -> [String; 8] {
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        [
            self.kind.tag().to_string(),
            self.d.to_string(),
            self.r.to_string(),
            opt(self.m),
            opt(self.k),
            self.coefficient
                .as_ref()
                .map(|c| c.to_string())
                .unwrap_or_default(),
            self.applicable().to_string(),
            self.reason.clone(),
        ]
    }
}

pub const BOUND_CSV_HEADER: [&str; 8] = [
    "kind",
    "d",
    "r",
    "m",
    "k",
    "coefficient",
    "applicable",
    "reason",
];

/// Exact coefficient for `kind`; inapplicability is reported in the result,
/// never as an error.
pub fn bound_coefficient(kind: BoundKind, d: u32, r: u64, m: Option<u64>) -> BoundReport {
    let k = m
        .filter(|&m| m >= 1 && r >= 1)
        .map(|m| multiple_index(r, m));
    let mut report = BoundReport {
        kind,
        d,
        r,
        m,
        k,
        coefficient: None,
        reason: String::new(),
    };
    match coefficient_or_reason(kind, d, r, m) {
        Ok((c, note)) => {
            report.coefficient = Some(c);
            report.reason = note.to_string();
        }
        Err(reason) => report.reason = reason,
    }
    report
}

fn coefficient_or_reason(
    kind: BoundKind,
    d: u32,
    r: u64,
    m: Option<u64>,
) -> std::result::Result<(Rational, &'static str), String> {
    if d == 0 {
        return Err("degree must be >= 1".into());
    }
    if r == 0 {
        return Err("r must be >= 1".into());
    }
    if let Some(req) = kind.required_degree() {
        if d != req {
            return Err(format!("needs degree {req}"));
        }
    }
    let need_m = || -> std::result::Result<u64, String> {
        match m {
            Some(0) => Err("m must be >= 1".into()),
            Some(m) => Ok(m),
            None => Err("needs m".into()),
        }
    };
    let rq = int(r);
    let sf_note = if kind.requires_square_free() {
        "square-free f only"
    } else {
        ""
    };
    let c = match kind {
        BoundKind::KlsQuad => Rational::one() / rq,
        BoundKind::KlsGeneral => {
            (Rational::one() - falling_ratio(r, d)) * bernstein_range_constant(d)
        }
        BoundKind::QuadRefined => {
            let m = need_m()?;
            if r > m {
                return Err("needs r <= m".into());
            }
            if m == 1 {
                Rational::zero()
            } else {
                Rational::new((m - r).into(), (r * (m - 1)).into())
            }
        }
        BoundKind::QuadDenom => {
            let m = need_m()?;
            int(m) / (&rq * &rq)
        }
        BoundKind::CubicKls => {
            if r < 2 {
                return Err("needs r >= 2".into());
            }
            int(4) / &rq - int(4) / (&rq * &rq)
        }
        BoundKind::SqfreeKls => Rational::one() - falling_ratio(r, d),
        BoundKind::CubicRefined => {
            let m = need_m()?;
            if m < 3 {
                return Err("needs m >= 3".into());
            }
            if r > m {
                return Err("needs r <= m".into());
            }
            let num = BigInt::from(m - r) * BigInt::from(4 * m * r - 2 * m - 2 * r);
            let den = BigInt::from(r * r) * BigInt::from((m - 1) * (m - 2));
            Rational::new(num, den)
        }
        BoundKind::SqfreeRefined | BoundKind::GeneralRefined => {
            let m = need_m()?;
            if m < u64::from(d) {
                return Err("needs m >= d".into());
            }
            if r > m {
                return Err("needs r <= m".into());
            }
            let gap = refined_gap(r, m, d);
            if kind == BoundKind::GeneralRefined {
                gap * bernstein_range_constant(d)
            } else {
                gap
            }
        }
        BoundKind::CubicRho => {
            let m = need_m()?;
            if m < 3 {
                return Err("needs m >= 3".into());
            }
            if r <= m {
                int(m * m) / (&rq * &rq * int(m - 2))
            } else {
                int(6 * m) / (&rq * &rq)
            }
        }
        BoundKind::GeneralRho => {
            let m = need_m()?;
            if m < u64::from(d) {
                return Err("needs m >= d".into());
            }
            int(m) / (&rq * &rq) * c_d(d) * bernstein_range_constant(d)
        }
    };
    Ok((c, sf_note))
}

/// All kinds at `(d, r, m)`, in [`BoundKind::ALL`] order.
pub fn bound_table(d: u32, r: u64, m: Option<u64>) -> Vec<BoundReport> {
    BoundKind::ALL
        .into_iter()
        .map(|k| bound_coefficient(k, d, r, m))
        .collect()
}

/// Options for certifying extrema.
#[derive(Debug, Clone, Default)]
pub struct EnclosureParams {
    /// Degree elevation for the Bernstein bounds.
    pub elevation: u32,
    /// Extra grid denominators whose extrema tighten the enclosures.
    pub grids: Vec<u32>,
    /// Trusted exact `f̲`, validated against the certified enclosure.
    pub known_min: Option<Rational>,
    /// Trusted exact `f̄`, validated against the certified enclosure.
    pub known_max: Option<Rational>,
}

/// Certified interval for `ρ_r(f) = (f_Δ(n,r) − f̲)/(f̄ − f̲)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoInterval {
    pub r: u32,
    pub grid_value: Rational,
    pub fmin: Enclosure,
    pub fmax: Enclosure,
    pub lo: Rational,
    pub hi: Rational,
}

impl RhoInterval {
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

/// Certified enclosures of `f̲` and `f̄` from Bernstein bounds, the grid
/// extrema at every denominator in `grids`, and optional known values.
pub fn certified_extrema(
    f: &HomogeneousPolynomial,
    grids: &[u32],
    params: &EnclosureParams,
) -> Result<(Enclosure, Enclosure)> {
    let (mut fmin, mut fmax) = f.bernstein_enclosure(params.elevation);
    for &g in grids.iter().chain(&params.grids) {
        let lo = grid_minimize(f, g).value;
        let hi = grid_maximize(f, g).value;
        fmin = Enclosure::new(fmin.lo.clone(), (&fmin.hi).min(&lo).clone());
        fmax = Enclosure::new((&fmax.lo).max(&hi).clone(), fmax.hi.clone());
    }
    apply_known(fmin, fmax, params)
}

fn apply_known(
    mut fmin: Enclosure,
    mut fmax: Enclosure,
    params: &EnclosureParams,
) -> Result<(Enclosure, Enclosure)> {
    if let Some(v) = &params.known_min {
        if !fmin.contains(v) {
            return Err(Error::params(format!(
                "known minimum {v} lies outside the certified enclosure [{}, {}]",
                fmin.lo, fmin.hi
            )));
        }
        fmin = Enclosure::point(v.clone());
    }
    if let Some(v) = &params.known_max {
        if !fmax.contains(v) {
            return Err(Error::params(format!(
                "known maximum {v} lies outside the certified enclosure [{}, {}]",
                fmax.lo, fmax.hi
            )));
        }
        fmax = Enclosure::point(v.clone());
    }
    Ok((fmin, fmax))
}

/// `ρ` bounds from a grid value and extremum enclosures.
///
/// `(g − a)/(b − a)` is nonincreasing in both `a` and `b` on
/// `a ≤ g ≤ b`, so the extremes sit at opposite corners of the box.
pub fn rho_from_enclosures(
    grid_value: &Rational,
    fmin: &Enclosure,
    fmax: &Enclosure,
) -> Result<(Rational, Rational)> {
    if fmax.lo <= fmin.hi {
        return Err(Error::DegenerateRange);
    }
    let fmin_hi = (&fmin.hi).min(grid_value);
    let lo = (grid_value - fmin_hi) / (&fmax.hi - fmin_hi);
    let hi = (grid_value - &fmin.lo) / (&fmax.lo - &fmin.lo);
    let zero = Rational::zero();
    let one = Rational::one();
    Ok((lo.max(zero), hi.min(one)))
}

pub fn rho_interval(
    f: &HomogeneousPolynomial,
    r: u32,
    params: &EnclosureParams,
) -> Result<RhoInterval> {
    if r == 0 {
        return Err(Error::params("r must be >= 1"));
    }
    let grid_value = grid_minimize(f, r).value;
    let (fmin, fmax) = certified_extrema(f, &[r], params)?;
    let (lo, hi) = rho_from_enclosures(&grid_value, &fmin, &fmax)?;
    Ok(RhoInterval {
        r,
        grid_value,
        fmin,
        fmax,
        lo,
        hi,
    })
}

/// One certified instance of `f_Δ(n,r) − f_Δ(n,m) ≤ c·(f̄ − f̲)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundWitness {
    pub kind: BoundKind,
    pub r: u32,
    pub m: u32,
    pub lhs: Rational,
    /// Certified upper bound on `f̄ − f̲`.
    pub range_upper: Rational,
    /// `c·range_upper`, or `None` when the kind does not apply.
    pub rhs: Option<Rational>,
    pub reason: String,
}

impl BoundWitness {
    pub fn applicable(&self) -> bool {
        self.rhs.is_some()
    }

    /// Vacuously true when the kind does not apply.
    pub fn holds(&self) -> bool {
        self.rhs.as_ref().is_none_or(|rhs| self.lhs <= *rhs)
    }
}

/// Caches grid minima and the certified range bound of one polynomial.
#[derive(Debug, Clone)]
pub struct BoundChecker {
    f: HomogeneousPolynomial,
    square_free: bool,
    range_upper: Rational,
    grid_min: std::collections::BTreeMap<u32, Rational>,
    max_grid: u128,
}

impl BoundChecker {
    /// `max_grid` caps `|Δ(n,r)|` for every grid this checker enumerates.
    pub fn new(f: &HomogeneousPolynomial, elevation: u32, max_grid: u128) -> Self {
        let (fmin, fmax) = f.bernstein_enclosure(elevation);
        BoundChecker {
            square_free: f.is_square_free(),
            range_upper: fmax.hi - fmin.lo,
            f: f.clone(),
            grid_min: Default::default(),
            max_grid,
        }
    }

    pub fn polynomial(&self) -> &HomogeneousPolynomial {
        &self.f
    }

    pub fn range_upper(&self) -> &Rational {
        &self.range_upper
    }

    pub fn grid_value(&mut self, r: u32) -> Result<Rational> {
        if let Some(v) = self.grid_min.get(&r) {
            return Ok(v.clone());
        }
        let size = composition_count(self.f.n(), r);
        if size > self.max_grid {
            return Err(Error::TooLarge {
                size,
                limit: self.max_grid,
            });
        }
        let v = grid_minimize(&self.f, r).value;
        self.grid_min.insert(r, v.clone());
        Ok(v)
    }

    pub fn check(&mut self, kind: BoundKind, r: u32, m: u32) -> Result<BoundWitness> {
        if r == 0 || m == 0 {
            return Err(Error::params("r and m must be >= 1"));
        }
        let lhs = self.grid_value(r)? - self.grid_value(m)?;
        let report = bound_coefficient(kind, self.f.degree(), r.into(), Some(m.into()));
        let (rhs, reason) = if kind.requires_square_free() && !self.square_free {
            (None, "f is not square-free".to_string())
        } else {
            (
                report.coefficient.map(|c| c * &self.range_upper),
                report.reason,
            )
        };
        Ok(BoundWitness {
            kind,
            r,
            m,
            lhs,
            range_upper: self.range_upper.clone(),
            rhs,
            reason,
        })
    }

    /// All kinds at `(r, m)`.
    pub fn check_all(&mut self, r: u32, m: u32) -> Result<Vec<BoundWitness>> {
        BoundKind::ALL
            .into_iter()
            .map(|k| self.check(k, r, m))
            .collect()
    }
}

/// Grid-size limit used by [`check_bound`].
pub const DEFAULT_WITNESS_GRID_LIMIT: u128 = 10_000_000;

/// One-shot witness for `f_Δ(n,r) − f_Δ(n,m) ≤ c·(f̄ − f̲)`, with `f̄ − f̲`
/// bounded above by the Bernstein range at `elevation`.
pub fn check_bound(
    f: &HomogeneousPolynomial,
    kind: BoundKind,
    r: u32,
    m: u32,
    elevation: u32,
) -> Result<BoundWitness> {
    BoundChecker::new(f, elevation, DEFAULT_WITNESS_GRID_LIMIT).check(kind, r, m)
}

/// Random integer-coefficient polynomial with `n ≤ max_n` variables, degree
/// `d ≤ max_d` and coefficients in `[−coef, coef]`. Every fourth draw (when
/// `n ≥ d`) is square-free so that the square-free kinds get exercised.
pub fn random_polynomial<R: Rng + ?Sized>(
    rng: &mut R,
    max_n: usize,
    max_d: u32,
    coef: i64,
) -> HomogeneousPolynomial {
    let n = rng.gen_range(1..=max_n.max(1));
    let d = rng.gen_range(1..=max_d.max(1));
    let square_free = n >= d as usize && rng.gen_ratio(1, 4);
    let mut terms: Vec<(Exponent, Rational)> = Vec::new();
    for beta in Compositions::new(n, d) {
        if square_free && beta.iter().any(|&b| b > 1) {
            continue;
        }
        if rng.gen_bool(0.6) {
            let c = rng.gen_range(-coef..=coef);
            terms.push((Exponent(beta), int(c)));
        }
    }
    if terms.iter().all(|(_, c)| c.is_zero()) {
        let beta: Vec<u32> = if square_free {
            (0..n).map(|i| u32::from(i < d as usize)).collect()
        } else {
            let mut v = vec![0; n];
            v[0] = d;
            v
        };
        let c = if rng.gen_bool(0.5) { coef } else { -coef };
        terms.push((Exponent(beta), int(c.max(1))));
    }
    HomogeneousPolynomial::new(n, d, terms).expect("valid by construction")
}

/// Witnesses for every kind and every `1 ≤ r ≤ m ≤ max_m`, for each
/// polynomial; checked in parallel, returned in input order.
pub fn witness_sweep(
    polys: &[HomogeneousPolynomial],
    max_m: u32,
    elevation: u32,
) -> Result<Vec<BoundWitness>> {
    let per_poly: Vec<Result<Vec<BoundWitness>>> = polys
        .par_iter()
        .map(|f| {
            let mut checker = BoundChecker::new(f, elevation, DEFAULT_WITNESS_GRID_LIMIT);
            let mut out = Vec::new();
            for m in 1..=max_m {
                for r in 1..=m {
                    out.extend(checker.check_all(r, m)?);
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for w in per_poly {
        all.extend(w?);
    }
    Ok(all)
}
