//! Exact verification of the combinatorial identities behind the
//! convergence bounds, on bounded parameter domains.
//!
//! Each check evaluates both sides independently and records whether the
//! stated relation holds. The sweeps in [`run_sweeps`] are what the `verify`
//! front end runs.

use std::fmt;

use num::{BigInt, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::bounds::{c_d, phi, refined_gap};
use crate::combin::{falling_int, multinomial_int, stirling2_int};
use crate::grid::Compositions;
use crate::hypergeom::{scaled_moment, HypergeomParams};
use crate::poly::Exponent;
use crate::rational::{int, Rational};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityName {
    VandermondeChu,
    Multinomial,
    StirlingSum,
    StirlingMulti,
    Kmr,
    Sigma,
    Phi,
    ABetaNonneg,
    ABetaSum,
    MomentDecomposition,
}

impl IdentityName {
    pub const ALL: [IdentityName; 10] = [
        IdentityName::VandermondeChu,
        IdentityName::Multinomial,
        IdentityName::StirlingSum,
        IdentityName::StirlingMulti,
        IdentityName::Kmr,
        IdentityName::Sigma,
        IdentityName::Phi,
        IdentityName::ABetaNonneg,
        IdentityName::ABetaSum,
        IdentityName::MomentDecomposition,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            IdentityName::VandermondeChu => "VANDERMONDE_CHU",
            IdentityName::Multinomial => "MULTINOMIAL",
            IdentityName::StirlingSum => "STIRLING_SUM",
            IdentityName::StirlingMulti => "STIRLING_MULTI",
            IdentityName::Kmr => "KMR",
            IdentityName::Sigma => "SIGMA",
            IdentityName::Phi => "PHI",
            IdentityName::ABetaNonneg => "A_BETA_NONNEG",
            IdentityName::ABetaSum => "A_BETA_SUM",
            IdentityName::MomentDecomposition => "MOMENT_DECOMPOSITION",
        }
    }

    pub fn from_tag(tag: &str) -> Option<IdentityName> {
        Self::ALL
            .into_iter()
            .find(|n| n.tag().eq_ignore_ascii_case(tag))
    }
}

impl fmt::Display for IdentityName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }

    pub fn test(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: IdentityName,
    /// Echoed parameters, `key=value` pairs joined by `;`.
    pub params: String,
    pub lhs: Rational,
    pub rhs: Rational,
    pub relation: Relation,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(
        name: IdentityName,
        params: String,
        lhs: Rational,
        rhs: Rational,
        relation: Relation,
    ) -> Self {
        let holds = relation.test(&lhs, &rhs);
        IdentityCheck {
            name,
            params,
            lhs,
            rhs,
            relation,
            holds,
        }
    }

    /// Row for CSV output: `name,params,lhs,relation,rhs,holds`.
    pub fn csv_record(&self) -> [String; 6] {
        [
            self.name.tag().to_string(),
            self.params.clone(),
            self.lhs.to_string(),
            self.relation.symbol().to_string(),
            self.rhs.to_string(),
            self.holds.to_string(),
        ]
    }
}

pub const IDENTITY_CSV_HEADER: [&str; 6] = ["name", "params", "lhs", "relation", "rhs", "holds"];

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// One identity instance with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identity {
    /// `(Σxᵢ)^{d̲} = Σ_{α∈I(n,d)} (d!/α!) x^{α̲}` for integer `x`.
    VandermondeChu { x: Vec<i64>, d: u32 },
    /// `(Σxᵢ)^d = Σ_{α∈I(n,d)} (d!/α!) x^α`.
    Multinomial { x: Vec<Rational>, d: u32 },
    /// `Σ_{k=1}^{d−1} r^{k̲} S(d,k) = r^d − r^{d̲}`.
    StirlingSum { d: u32, r: u64 },
    /// `S(d,k) = (α!/k!) Σ_{β∈I(n,d)} (d!/β!) Π S(βᵢ,αᵢ)` for `α ∈ I(n,k)`, `d > k`.
    StirlingMulti { alpha: Vec<u32>, d: u32 },
    /// `(km−r)/(km−1) ≤ m/r` for `(k−1)m < r ≤ km`.
    Kmr { k: u64, m: u64, r: u64 },
    /// `1 − r^{d̲}(km)^d/(r^d (km)^{d̲}) ≤ (m/r²)·c_d` for `m ≥ d`, `(k−1)m < r ≤ km`.
    Sigma { d: u32, m: u64, k: u64, r: u64 },
    /// `φ(r) ≥ 0` for `m ≥ 3`, `k ≥ 2`, `(k−1)m < r ≤ km`.
    Phi { k: u64, m: u64, r: u64 },
    /// `A_β ≥ 0`.
    ABetaNonneg {
        beta: Vec<u32>,
        r: u64,
        counts: Vec<u64>,
    },
    /// `Σ_{β∈I(n,d)} (d!/β!) A_β = r^d m^{d̲} − r^{d̲} m^d`.
    ABetaSum { d: u32, r: u64, counts: Vec<u64> },
    /// `E[X^β] = (x*)^β r^{d̲}m^d/(r^d m^{d̲}) + A_β/(r^d m^{d̲})`.
    MomentDecomposition {
        beta: Vec<u32>,
        r: u64,
        counts: Vec<u64>,
    },
}

impl Identity {
    pub fn name(&self) -> IdentityName {
        match self {
            Identity::VandermondeChu { .. } => IdentityName::VandermondeChu,
            Identity::Multinomial { .. } => IdentityName::Multinomial,
            Identity::StirlingSum { .. } => IdentityName::StirlingSum,
            Identity::StirlingMulti { .. } => IdentityName::StirlingMulti,
            Identity::Kmr { .. } => IdentityName::Kmr,
            Identity::Sigma { .. } => IdentityName::Sigma,
            Identity::Phi { .. } => IdentityName::Phi,
            Identity::ABetaNonneg { .. } => IdentityName::ABetaNonneg,
            Identity::ABetaSum { .. } => IdentityName::ABetaSum,
            Identity::MomentDecomposition { .. } => IdentityName::MomentDecomposition,
        }
    }

    fn params(&self) -> String {
        match self {
            Identity::VandermondeChu { x, d } => format!("x={};d={d}", join(x)),
            Identity::Multinomial { x, d } => format!("x={};d={d}", join(x)),
            Identity::StirlingSum { d, r } => format!("d={d};r={r}"),
            Identity::StirlingMulti { alpha, d } => format!("alpha={};d={d}", join(alpha)),
            Identity::Kmr { k, m, r } => format!("k={k};m={m};r={r}"),
            Identity::Sigma { d, m, k, r } => format!("d={d};m={m};k={k};r={r}"),
            Identity::Phi { k, m, r } => format!("k={k};m={m};r={r}"),
            Identity::ABetaNonneg { beta, r, counts }
            | Identity::MomentDecomposition { beta, r, counts } => {
                format!("beta={};r={r};counts={}", join(beta), join(counts))
            }
            Identity::ABetaSum { d, r, counts } => format!("d={d};r={r};counts={}", join(counts)),
        }
    }
}

fn bracket_check(k: u64, m: u64, r: u64) -> Result<()> {
    if k < 1 || m < 1 || r < 1 {
        return Err(Error::params("k, m, r must be >= 1"));
    }
    if !((k - 1) * m < r && r <= k * m) {
        return Err(Error::params(format!(
            "need (k-1)m < r <= km (k={k}, m={m}, r={r})"
        )));
    }
    Ok(())
}

fn check_urn(r: u64, d: u32, counts: &[u64]) -> Result<u64> {
    if counts.is_empty() {
        return Err(Error::params("counts must be nonempty"));
    }
    let m: u64 = counts.iter().sum();
    if d < 1 {
        return Err(Error::params("d must be >= 1"));
    }
    if r < 1 || r > m {
        return Err(Error::params(format!("need 1 <= r <= m (r={r}, m={m})")));
    }
    if m < u64::from(d) {
        return Err(Error::params(format!("need m >= d (m={m}, d={d})")));
    }
    Ok(m)
}

/// Integer-valued `A_β` for `|β| = d`, `1 ≤ r ≤ m`, `m ≥ d`, `m = Σ counts`:
///
/// `A_β = r^{d̲}(Π mᵢ^{βᵢ̲} − Π mᵢ^{βᵢ}) + Σ_{α≤β, α≠β} r^{|α|̲}·(m^{d̲}/m^{|α|̲})·Π mᵢ^{αᵢ̲} S(βᵢ,αᵢ)`
pub fn a_beta_int(beta: &[u32], r: u64, counts: &[u64]) -> Result<BigInt> {
    if beta.len() != counts.len() {
        return Err(Error::DimensionMismatch {
            expected: counts.len(),
            got: beta.len(),
        });
    }
    let d: u32 = beta.iter().sum();
    let m = check_urn(r, d, counts)?;
    let d64 = u64::from(d);

    let falling_prod: BigInt = counts
        .iter()
        .zip(beta)
        .map(|(&mi, &b)| falling_int(mi, u64::from(b)))
        .product();
    let power_prod: BigInt = counts
        .iter()
        .zip(beta)
        .map(|(&mi, &b)| num::pow(BigInt::from(mi), b as usize))
        .product();
    let mut acc = falling_int(r, d64) * (falling_prod - power_prod);

    // S(b,0) = 0 for b > 0, so αᵢ ranges over 1..=βᵢ where βᵢ > 0
    let lo: Vec<u32> = beta.iter().map(|&b| u32::from(b > 0)).collect();
    let mut alpha = lo.clone();
    loop {
        if alpha.as_slice() != beta {
            let k = u64::from(alpha.iter().sum::<u32>());
            // m^{d̲}/m^{k̲} = (m−k)^{(d−k)̲}
            let weight = falling_int(r, k) * falling_int(m - k, d64 - k);
            let term: BigInt = alpha
                .iter()
                .zip(beta)
                .zip(counts)
                .map(|((&a, &b), &mi)| falling_int(mi, u64::from(a)) * stirling2_int(b, a))
                .product();
            acc += weight * term;
        }
        let mut i = 0;
        loop {
            if i == alpha.len() {
                return Ok(acc);
            }
            if alpha[i] < beta[i] {
                alpha[i] += 1;
                break;
            }
            alpha[i] = lo[i];
            i += 1;
        }
    }
}

pub fn a_beta(beta: &[u32], r: u64, counts: &[u64]) -> Result<Rational> {
    a_beta_int(beta, r, counts).map(int)
}

/// `Σ_{β∈I(n,d)} (d!/β!) A_β` against `r^d m^{d̲} − r^{d̲} m^d`.
pub fn a_beta_sum_identity(r: u64, d: u32, counts: &[u64]) -> Result<IdentityCheck> {
    verify_identity(&Identity::ABetaSum {
        d,
        r,
        counts: counts.to_vec(),
    })
}

fn pow_big(base: impl Into<BigInt>, e: u64) -> BigInt {
    num::pow(base.into(), e as usize)
}

/// Evaluates both sides of `identity` exactly.
pub fn verify_identity(identity: &Identity) -> Result<IdentityCheck> {
    let name = identity.name();
    let params = identity.params();
    let check = |lhs: Rational, rhs: Rational, rel: Relation| {
        Ok(IdentityCheck::new(name, params.clone(), lhs, rhs, rel))
    };
    match identity {
        Identity::VandermondeChu { x, d } => {
            if x.is_empty() {
                return Err(Error::params("x must be nonempty"));
            }
            let d64 = u64::from(*d);
            let lhs = falling_int(x.iter().sum::<i64>(), d64);
            let mut rhs = BigInt::zero();
            for alpha in Compositions::new(x.len(), *d) {
                let term: BigInt = x
                    .iter()
                    .zip(&alpha)
                    .map(|(&xi, &a)| falling_int(xi, u64::from(a)))
                    .product();
                rhs += multinomial_int(d64, &alpha)? * term;
            }
            check(int(lhs), int(rhs), Relation::Eq)
        }
        Identity::Multinomial { x, d } => {
            if x.is_empty() {
                return Err(Error::params("x must be nonempty"));
            }
            let lhs = num::pow(x.iter().sum::<Rational>(), *d as usize);
            let mut rhs = Rational::zero();
            for alpha in Compositions::new(x.len(), *d) {
                let mut term = int(multinomial_int(u64::from(*d), &alpha)?);
                for (xi, &a) in x.iter().zip(&alpha) {
                    term *= num::pow(xi.clone(), a as usize);
                }
                rhs += term;
            }
            check(lhs, rhs, Relation::Eq)
        }
        Identity::StirlingSum { d, r } => {
            if *d < 1 || *r < 1 {
                return Err(Error::params("d and r must be >= 1"));
            }
            let lhs: BigInt = (1..*d)
                .map(|k| falling_int(*r, u64::from(k)) * stirling2_int(*d, k))
                .sum();
            let rhs = pow_big(*r, u64::from(*d)) - falling_int(*r, u64::from(*d));
            check(int(lhs), int(rhs), Relation::Eq)
        }
        Identity::StirlingMulti { alpha, d } => {
            let k: u32 = alpha.iter().sum();
            if alpha.is_empty() || *d <= k {
                return Err(Error::params(format!(
                    "need d > |alpha| (d={d}, |alpha|={k})"
                )));
            }
            let lhs = stirling2_int(*d, k);
            let mut sum = BigInt::zero();
            for beta in Compositions::new(alpha.len(), *d) {
                let prod: BigInt = beta
                    .iter()
                    .zip(alpha)
                    .map(|(&b, &a)| stirling2_int(b, a))
                    .product();
                if !prod.is_zero() {
                    sum += multinomial_int(u64::from(*d), &beta)? * prod;
                }
            }
            let alpha_fact = Exponent(alpha.clone()).factorial();
            let k_fact = crate::combin::factorial_int(u64::from(k));
            check(
                int(lhs),
                Rational::new(alpha_fact * sum, k_fact),
                Relation::Eq,
            )
        }
        Identity::Kmr { k, m, r } => {
            bracket_check(*k, *m, *r)?;
            let km = k * m;
            // r = km = 1 makes the left side 0/0; it is 0 whenever r = km
            let lhs = if km == *r {
                Rational::zero()
            } else {
                Rational::new((km - r).into(), (km - 1).into())
            };
            check(lhs, Rational::new((*m).into(), (*r).into()), Relation::Le)
        }
        Identity::Sigma { d, m, k, r } => {
            bracket_check(*k, *m, *r)?;
            if *d < 1 || *m < u64::from(*d) {
                return Err(Error::params("need d >= 1 and m >= d"));
            }
            let lhs = refined_gap(*r, k * m, *d);
            let rhs = Rational::new((*m).into(), (r * r).into()) * c_d(*d);
            check(lhs, rhs, Relation::Le)
        }
        Identity::Phi { k, m, r } => {
            bracket_check(*k, *m, *r)?;
            if *m < 3 || *k < 2 {
                return Err(Error::params("need m >= 3 and k >= 2"));
            }
            check(int(phi(*k, *m, *r)), Rational::zero(), Relation::Ge)
        }
        Identity::ABetaNonneg { beta, r, counts } => {
            check(a_beta(beta, *r, counts)?, Rational::zero(), Relation::Ge)
        }
        Identity::ABetaSum { d, r, counts } => {
            let m = check_urn(*r, *d, counts)?;
            let d64 = u64::from(*d);
            let mut lhs = BigInt::zero();
            for beta in Compositions::new(counts.len(), *d) {
                lhs += multinomial_int(d64, &beta)? * a_beta_int(&beta, *r, counts)?;
            }
            let rhs =
                pow_big(*r, d64) * falling_int(m, d64) - falling_int(*r, d64) * pow_big(m, d64);
            check(int(lhs), int(rhs), Relation::Eq)
        }
        Identity::MomentDecomposition { beta, r, counts } => {
            let d: u32 = beta.iter().sum();
            let m = check_urn(*r, d, counts)?;
            let d64 = u64::from(d);
            let p = HypergeomParams::with_total(m, counts.clone(), *r)?;
            let lhs = scaled_moment(&p, beta)?;
            let scale = pow_big(*r, d64) * falling_int(m, d64);
            let center: Rational = counts
                .iter()
                .zip(beta)
                .map(|(&mi, &b)| num::pow(Rational::new(mi.into(), m.into()), b as usize))
                .product();
            let rhs = center * Rational::new(falling_int(*r, d64) * pow_big(m, d64), scale.clone())
                + Rational::new(a_beta_int(beta, *r, counts)?, scale);
            check(lhs, rhs, Relation::Eq)
        }
    }
}

/// Parameter domains for [`run_sweeps`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    /// Restrict to these identities (all when empty).
    pub only: Vec<IdentityName>,
    pub stirling_sum_max_d: u32,
    pub stirling_sum_max_r: u64,
    pub stirling_multi_max_n: usize,
    pub stirling_multi_max_d: u32,
    /// Random points for the Vandermonde–Chu and multinomial checks.
    pub random_points: usize,
    pub random_max_n: usize,
    pub random_max_d: u32,
    pub seed: u64,
    pub a_beta_max_n: usize,
    pub a_beta_max_d: u32,
    pub a_beta_max_m: u64,
    pub kmr_max: u64,
    pub sigma_max_d: u32,
    pub sigma_max_m: u64,
    pub sigma_max_k: u64,
    pub phi_max_k: u64,
    pub phi_max_m: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            only: Vec::new(),
            stirling_sum_max_d: 6,
            stirling_sum_max_r: 30,
            stirling_multi_max_n: 3,
            stirling_multi_max_d: 5,
            random_points: 200,
            random_max_n: 4,
            random_max_d: 6,
            seed: 0x5eed,
            a_beta_max_n: 3,
            a_beta_max_d: 4,
            a_beta_max_m: 8,
            kmr_max: 40,
            sigma_max_d: 5,
            sigma_max_m: 12,
            sigma_max_k: 4,
            phi_max_k: 5,
            phi_max_m: 10,
        }
    }
}

impl SweepConfig {
    fn wants(&self, name: IdentityName) -> bool {
        self.only.is_empty() || self.only.contains(&name)
    }
}

/// Every identity instance in the configured domains, in a fixed order.
pub fn sweep_instances(cfg: &SweepConfig) -> Vec<Identity> {
    let mut out = Vec::new();
    let mut rng = StdRng::seed_from_u64(cfg.seed);

    if cfg.wants(IdentityName::VandermondeChu) && cfg.random_max_n >= 1 {
        for _ in 0..cfg.random_points {
            let n = rng.gen_range(1..=cfg.random_max_n);
            let d = rng.gen_range(0..=cfg.random_max_d);
            let x = (0..n).map(|_| rng.gen_range(-10..=10)).collect();
            out.push(Identity::VandermondeChu { x, d });
        }
    }
    if cfg.wants(IdentityName::Multinomial) && cfg.random_max_n >= 1 {
        for _ in 0..cfg.random_points {
            let n = rng.gen_range(1..=cfg.random_max_n);
            let d = rng.gen_range(0..=cfg.random_max_d);
            let x = (0..n)
                .map(|_| Rational::new(rng.gen_range(-20..=20).into(), rng.gen_range(1..=9).into()))
                .collect();
            out.push(Identity::Multinomial { x, d });
        }
    }
    if cfg.wants(IdentityName::StirlingSum) {
        for d in 1..=cfg.stirling_sum_max_d {
            for r in 1..=cfg.stirling_sum_max_r {
                out.push(Identity::StirlingSum { d, r });
            }
        }
    }
    if cfg.wants(IdentityName::StirlingMulti) {
        for n in 1..=cfg.stirling_multi_max_n {
            for d in 2..=cfg.stirling_multi_max_d {
                for k in 1..d {
                    for alpha in Compositions::new(n, k) {
                        out.push(Identity::StirlingMulti { alpha, d });
                    }
                }
            }
        }
    }
    if cfg.wants(IdentityName::Kmr) {
        for k in 1..=cfg.kmr_max {
            for m in 1..=cfg.kmr_max {
                for r in ((k - 1) * m + 1)..=(k * m).min(cfg.kmr_max) {
                    out.push(Identity::Kmr { k, m, r });
                }
            }
        }
    }
    if cfg.wants(IdentityName::Sigma) {
        for d in 1..=cfg.sigma_max_d {
            for m in u64::from(d)..=cfg.sigma_max_m {
                for k in 1..=cfg.sigma_max_k {
                    for r in ((k - 1) * m + 1)..=k * m {
                        out.push(Identity::Sigma { d, m, k, r });
                    }
                }
            }
        }
    }
    if cfg.wants(IdentityName::Phi) {
        for k in 2..=cfg.phi_max_k {
            for m in 3..=cfg.phi_max_m {
                for r in ((k - 1) * m + 1)..=k * m {
                    out.push(Identity::Phi { k, m, r });
                }
            }
        }
    }
    let a_beta_names = [
        IdentityName::ABetaNonneg,
        IdentityName::ABetaSum,
        IdentityName::MomentDecomposition,
    ];
    if a_beta_names.iter().any(|&n| cfg.wants(n)) {
        for n in 1..=cfg.a_beta_max_n {
            for d in 1..=cfg.a_beta_max_d {
                for m in u64::from(d)..=cfg.a_beta_max_m {
                    let m32 = u32::try_from(m).expect("small m");
                    for counts in Compositions::new(n, m32) {
                        let counts: Vec<u64> = counts.into_iter().map(u64::from).collect();
                        for r in 1..=m {
                            if cfg.wants(IdentityName::ABetaSum) {
                                out.push(Identity::ABetaSum {
                                    d,
                                    r,
                                    counts: counts.clone(),
                                });
                            }
                            for beta in Compositions::new(n, d) {
                                if cfg.wants(IdentityName::ABetaNonneg) {
                                    out.push(Identity::ABetaNonneg {
                                        beta: beta.clone(),
                                        r,
                                        counts: counts.clone(),
                                    });
                                }
                                if cfg.wants(IdentityName::MomentDecomposition) {
                                    out.push(Identity::MomentDecomposition {
                                        beta,
                                        r,
                                        counts: counts.clone(),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Runs every configured check in parallel; output order is that of
/// [`sweep_instances`] regardless of thread count.
pub fn run_sweeps(cfg: &SweepConfig) -> Result<Vec<IdentityCheck>> {
    sweep_instances(cfg)
        .par_iter()
        .map(verify_identity)
        .collect()
}

/// Whether every check holds; `None` when no checks ran.
pub fn all_hold(checks: &[IdentityCheck]) -> Option<bool> {
    (!checks.is_empty()).then(|| checks.iter().all(|c| c.holds))
}

/// Lower bound on `A_β` over a sweep, for reporting.
pub fn min_a_beta(checks: &[IdentityCheck]) -> Option<Rational> {
    checks
        .iter()
        .filter(|c| c.name == IdentityName::ABetaNonneg)
        .map(|c| c.lhs.clone())
        .min()
}
