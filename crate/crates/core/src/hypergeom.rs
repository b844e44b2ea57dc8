//! The multivariate hypergeometric distribution: draw `r` balls without
//! replacement from an urn holding `mᵢ` balls of colour `i` (`Σ mᵢ = m`),
//! and let `Yᵢ` count colour `i`. `X = Y/r` takes values in `Δ(n,r)`, so
//! `f_Δ(n,r) ≤ E[f(X)]` for every urn with `r` draws.
//!
//! Moments use the Stirling-number formula
//! `E[Y^β] = Σ_{α ≤ β} (r^{|α|̲}/m^{|α|̲}) Π mᵢ^{αᵢ̲} S(βᵢ,αᵢ)`,
//! which has no `mᵢ` in any denominator and so handles empty colours.

use std::collections::BTreeMap;

use num::{BigInt, One, Zero};

use crate::combin::{binomial_int, falling_int, multinomial_int, stirling2_int};
use crate::grid::{composition_count, Compositions};
use crate::poly::{Exponent, HomogeneousPolynomial};
use crate::rational::{int, is_nonnegative, Rational};
use crate::{Error, Result};

/// Urn description `(m; m₁..mₙ; r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypergeomParams {
    m: u64,
    counts: Vec<u64>,
    r: u64,
}

impl HypergeomParams {
    /// `m` is taken as `Σ counts`.
    pub fn new(counts: Vec<u64>, r: u64) -> Result<Self> {
        let m = counts.iter().sum();
        Self::with_total(m, counts, r)
    }

    /// Validates `Σ counts = m`, `1 ≤ r ≤ m` and `n ≥ 1`.
    pub fn with_total(m: u64, counts: Vec<u64>, r: u64) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::params("urn needs at least one colour"));
        }
        let total: u64 = counts.iter().sum();
        if total != m {
            return Err(Error::params(format!(
                "colour counts sum to {total}, expected m = {m}"
            )));
        }
        if r == 0 || r > m {
            return Err(Error::params(format!("need 1 <= r <= m (r={r}, m={m})")));
        }
        Ok(HypergeomParams { m, counts, r })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn n(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Mean point `counts/m`.
    pub fn center(&self) -> Vec<Rational> {
        self.counts
            .iter()
            .map(|&c| Rational::new(c.into(), self.m.into()))
            .collect()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: len,
            });
        }
        Ok(())
    }
}

/// `Pr[Y = α] = Π C(mᵢ, αᵢ) / C(m, r)`.
pub fn pmf(p: &HypergeomParams, alpha: &[u32]) -> Result<Rational> {
    p.check_len(alpha.len())?;
    let total: u64 = alpha.iter().map(|&a| u64::from(a)).sum();
    if total != p.r {
        return Err(Error::params(format!(
            "outcome has {total} balls, expected r = {}",
            p.r
        )));
    }
    let num: BigInt = p
        .counts
        .iter()
        .zip(alpha)
        .map(|(&mi, &ai)| binomial_int(mi, u64::from(ai)))
        .product();
    Ok(Rational::new(num, binomial_int(p.m, p.r)))
}

/// Raw moment `E[Π Yᵢ^{βᵢ}]`.
pub fn moment(p: &HypergeomParams, beta: &[u32]) -> Result<Rational> {
    p.check_len(beta.len())?;
    // S(b, 0) = 0 for b > 0, so only αᵢ ≥ 1 contributes where βᵢ ≥ 1.
    let ranges: Vec<(u32, u32)> = beta
        .iter()
        .map(|&b| if b == 0 { (0, 0) } else { (1, b) })
        .collect();
    let max_k = beta.iter().sum::<u32>() as usize;
    let mut by_size = vec![BigInt::zero(); max_k + 1];
    let mut alpha: Vec<u32> = ranges.iter().map(|r| r.0).collect();
    loop {
        let k: u32 = alpha.iter().sum();
        if u64::from(k) <= p.r {
            let term: BigInt = alpha
                .iter()
                .zip(beta)
                .zip(&p.counts)
                .map(|((&a, &b), &mi)| falling_int(mi, u64::from(a)) * stirling2_int(b, a))
                .product();
            by_size[k as usize] += term;
        }
        // odometer over the box Π [lo_i, hi_i]
        let mut i = 0;
        loop {
            if i == alpha.len() {
                return Ok(finish_moment(p, by_size));
            }
            if alpha[i] < ranges[i].1 {
                alpha[i] += 1;
                break;
            }
            alpha[i] = ranges[i].0;
            i += 1;
        }
    }
}

fn finish_moment(p: &HypergeomParams, by_size: Vec<BigInt>) -> Rational {
    by_size
        .into_iter()
        .enumerate()
        .filter(|(_, t)| !t.is_zero())
        .map(|(k, t)| {
            let k = k as u64;
            Rational::new(falling_int(p.r, k) * t, falling_int(p.m, k))
        })
        .sum()
}

/// Moment of `X = Y/r`: `E[X^β] = E[Y^β] / r^{|β|}`.
pub fn scaled_moment(p: &HypergeomParams, beta: &[u32]) -> Result<Rational> {
    let raw = moment(p, beta)?;
    let deg: u32 = beta.iter().sum();
    Ok(raw / int(num::pow(BigInt::from(p.r), deg as usize)))
}

fn ratio_u(num: u64, den: u64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Closed-form `E[Xᵢ²]` and `E[XᵢXⱼ]`, keyed by `β ∈ I(n,2)`. Needs `m ≥ 2`.
pub fn quadratic_moments_closed(p: &HypergeomParams) -> Result<BTreeMap<Exponent, Rational>> {
    let (m, r) = (p.m, p.r);
    if m < 2 {
        return Err(Error::params("quadratic closed form needs m >= 2"));
    }
    let n = p.n();
    let q = ratio_u(m - r, r * (m - 1));
    let keep = Rational::one() - &q;
    let x = p.center();
    let mut out = BTreeMap::new();
    for beta in Compositions::new(n, 2) {
        let idx: Vec<usize> = (0..n).filter(|&i| beta[i] > 0).collect();
        let value = match *idx.as_slice() {
            [i] => {
                // (mᵢ/m)²(1 − q) + mᵢ(m − r)/(m r (m − 1))
                let mi = p.counts[i];
                &x[i] * &x[i] * &keep + ratio_u(mi * (m - r), m * r * (m - 1))
            }
            [i, j] => &x[i] * &x[j] * &keep,
            _ => unreachable!("|β| = 2"),
        };
        out.insert(Exponent(beta), value);
    }
    Ok(out)
}

/// Closed-form third moments `E[Xᵢ³]`, `E[Xᵢ²Xⱼ]`, `E[XᵢXⱼXₖ]`, keyed by
/// `β ∈ I(n,3)`. Needs `m ≥ 3`.
pub fn cubic_moments_closed(p: &HypergeomParams) -> Result<BTreeMap<Exponent, Rational>> {
    let (m, r) = (p.m, p.r);
    if m < 3 {
        return Err(Error::params("cubic closed form needs m >= 3"));
    }
    let n = p.n();
    let (mq, rq) = (int(m), int(r));
    let denom = &rq * &rq * int(m - 1) * int(m - 2);
    // q = (m − r)(3mr − 2(m + r)) / (r²(m−1)(m−2))
    let q = int(m - r) * (int(3) * &mq * &rq - int(2) * (&mq + &rq)) / &denom;
    let keep = Rational::one() - &q;
    let x = p.center();
    let m3 = &mq * &mq * &mq;
    let mut out = BTreeMap::new();
    for beta in Compositions::new(n, 3) {
        let idx: Vec<usize> = (0..n).filter(|&i| beta[i] > 0).collect();
        let value = match *idx.as_slice() {
            [i] => {
                // (mᵢ/m)³(1 − q) + mᵢ(m−r)(3r mᵢ m² − 3mᵢm² + m³ − 2rm²) / (m³ r²(m−1)(m−2))
                let mi = int(p.counts[i]);
                let m2 = &mq * &mq;
                let inner =
                    int(3) * &rq * &mi * &m2 - int(3) * &mi * &m2 + &m3 - int(2) * &rq * &m2;
                let extra = &mi * int(m - r) * inner / (&m3 * &denom);
                &x[i] * &x[i] * &x[i] * &keep + extra
            }
            [i, j] => {
                // sq is the squared index; (mᵢ²mⱼ/m³)(1 − q) + mᵢmⱼ(m−r)(r−1)/(m r²(m−1)(m−2))
                let (sq, lin) = if beta[i] == 2 { (i, j) } else { (j, i) };
                let extra = int(p.counts[sq] * p.counts[lin] * (m - r) * (r - 1)) / (&mq * &denom);
                &x[sq] * &x[sq] * &x[lin] * &keep + extra
            }
            [i, j, k] => &x[i] * &x[j] * &x[k] * &keep,
            _ => unreachable!("|β| = 3"),
        };
        out.insert(Exponent(beta), value);
    }
    Ok(out)
}

/// `E[f(X)] = Σ_β f_β E[X^β]`.
pub fn expectation(f: &HomogeneousPolynomial, p: &HypergeomParams) -> Result<Rational> {
    if f.n() != p.n() {
        return Err(Error::DimensionMismatch {
            expected: p.n(),
            got: f.n(),
        });
    }
    f.terms()
        .map(|(beta, c)| scaled_moment(p, beta.as_slice()).map(|mm| c * mm))
        .sum()
}

/// Bernstein approximation of order `r` at `x`:
/// `Σ_{α ∈ I(n,r)} f(α/r)·(r!/α!)·x^α`, the expectation of `f` under the
/// multinomial (with-replacement) draw.
pub fn bernstein_approximation(
    f: &HomogeneousPolynomial,
    x: &[Rational],
    r: u32,
) -> Result<Rational> {
    if x.len() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: x.len(),
        });
    }
    if r == 0 {
        return Err(Error::params("order r must be >= 1"));
    }
    if !x.iter().all(is_nonnegative) || x.iter().sum::<Rational>() != Rational::one() {
        return Err(Error::NotOnSimplex);
    }
    let denom = int(r);
    let mut acc = Rational::zero();
    for alpha in Compositions::new(f.n(), r) {
        let weight_base = multinomial_int(u64::from(r), &alpha).expect("|α| = r");
        let mut weight = int(weight_base);
        for (xi, &a) in x.iter().zip(&alpha) {
            if a > 0 {
                weight *= num::pow(xi.clone(), a as usize);
            }
        }
        if weight.is_zero() {
            continue;
        }
        let point: Vec<Rational> = alpha.iter().map(|&a| int(a) / &denom).collect();
        acc += f.evaluate(&point)? * weight;
    }
    Ok(acc)
}

/// Exhaustive summation over all outcomes; the reference the closed formulas
/// are checked against. Refuses distributions with more than
/// [`brute::LIMIT`] outcomes.
pub mod brute {
    use super::*;

    pub const LIMIT: u128 = 10_000;

    /// All outcomes `α ∈ I(n,r)` with their probabilities.
    pub fn outcomes(p: &HypergeomParams) -> Result<Vec<(Vec<u32>, Rational)>> {
        let r = u32::try_from(p.r).map_err(|_| Error::params("r too large"))?;
        let size = composition_count(p.n(), r);
        if size > LIMIT {
            return Err(Error::TooLarge { size, limit: LIMIT });
        }
        Compositions::new(p.n(), r)
            .map(|a| pmf(p, &a).map(|pr| (a, pr)))
            .collect()
    }

    /// `Σ_α pmf(α)`; equals 1.
    pub fn total_probability(p: &HypergeomParams) -> Result<Rational> {
        Ok(outcomes(p)?.into_iter().map(|(_, pr)| pr).sum())
    }

    /// `Σ_α (α/r)^β pmf(α)`.
    pub fn scaled_moment(p: &HypergeomParams, beta: &[u32]) -> Result<Rational> {
        p.check_len(beta.len())?;
        let r = int(p.r);
        let mut acc = Rational::zero();
        for (alpha, pr) in outcomes(p)? {
            let mut term = pr;
            for (&a, &b) in alpha.iter().zip(beta) {
                term *= num::pow(int(a) / &r, b as usize);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// `Σ_α f(α/r) pmf(α)`.
    pub fn expectation(f: &HomogeneousPolynomial, p: &HypergeomParams) -> Result<Rational> {
        p.check_len(f.n())?;
        let r = int(p.r);
        let mut acc = Rational::zero();
        for (alpha, pr) in outcomes(p)? {
            let x: Vec<Rational> = alpha.iter().map(|&a| int(a) / &r).collect();
            acc += f.evaluate(&x)? * pr;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::grid_minimize;
    use crate::rational::ratio;

    fn urn() -> HypergeomParams {
        HypergeomParams::with_total(16, vec![7, 9], 2).unwrap()
    }

    fn paper_quadratic() -> HomogeneousPolynomial {
        HomogeneousPolynomial::from_ints(2, 2, &[(&[2, 0], 2), (&[0, 2], 1), (&[1, 1], -5)])
            .unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(HypergeomParams::with_total(15, vec![7, 9], 2).is_err());
        assert!(HypergeomParams::new(vec![7, 9], 0).is_err());
        assert!(HypergeomParams::new(vec![7, 9], 17).is_err());
        assert!(HypergeomParams::new(vec![], 1).is_err());
        assert_eq!(HypergeomParams::new(vec![0, 3], 3).unwrap().m(), 3);
    }

    #[test]
    fn pmf_examples() {
        let p = urn();
        assert_eq!(pmf(&p, &[1, 1]).unwrap(), ratio(21, 40));
        assert_eq!(pmf(&p, &[2, 0]).unwrap(), ratio(7, 40));
        assert_eq!(pmf(&p, &[0, 2]).unwrap(), ratio(36, 120));
        let q = HypergeomParams::new(vec![1, 5], 3).unwrap();
        assert_eq!(pmf(&q, &[2, 1]).unwrap(), int(0));
        assert!(pmf(&p, &[1, 0]).is_err());
        assert!(pmf(&p, &[1, 1, 0]).is_err());
    }

    #[test]
    fn moment_examples() {
        let p = urn();
        assert_eq!(moment(&p, &[1, 0]).unwrap(), ratio(2 * 7, 16));
        assert_eq!(moment(&p, &[0, 0]).unwrap(), int(1));
        assert_eq!(moment(&p, &[2, 0]).unwrap(), ratio(49, 40));
        assert_eq!(scaled_moment(&p, &[2, 0]).unwrap(), ratio(49, 160));
        assert_eq!(scaled_moment(&p, &[1, 1]).unwrap(), ratio(21, 160));
        assert_eq!(scaled_moment(&p, &[0, 1]).unwrap(), ratio(9, 16));
    }

    #[test]
    fn closed_forms_on_worked_urn() {
        let p = urn();
        let q = quadratic_moments_closed(&p).unwrap();
        assert_eq!(q[&Exponent(vec![2, 0])], ratio(49, 160));
        assert_eq!(q[&Exponent(vec![1, 1])], ratio(21, 160));
        let c = cubic_moments_closed(&p).unwrap();
        for (beta, v) in &c {
            assert_eq!(*v, scaled_moment(&p, beta.as_slice()).unwrap(), "β={beta}");
        }
    }

    #[test]
    fn closed_forms_need_enough_balls() {
        let p = HypergeomParams::new(vec![1], 1).unwrap();
        assert!(quadratic_moments_closed(&p).is_err());
        let p = HypergeomParams::new(vec![1, 1], 2).unwrap();
        assert!(quadratic_moments_closed(&p).is_ok());
        assert!(cubic_moments_closed(&p).is_err());
    }

    #[test]
    fn triple_moment_vanishes_with_empty_colour() {
        let p = HypergeomParams::new(vec![3, 0, 4], 4).unwrap();
        let c = cubic_moments_closed(&p).unwrap();
        assert_eq!(c[&Exponent(vec![1, 1, 1])], int(0));
        assert_eq!(c[&Exponent(vec![0, 3, 0])], int(0));
    }

    #[test]
    fn expectation_worked_example() {
        let f = paper_quadratic();
        let e = expectation(&f, &urn()).unwrap();
        assert_eq!(e, ratio(31, 80));
        assert!(e > grid_minimize(&f, 2).value);
        assert_eq!(brute::expectation(&f, &urn()).unwrap(), e);
    }

    #[test]
    fn expectation_square_free_closed_form() {
        // f = x1x2 + 3x2x3 − 2x1x3 (d = 2), urn (2,3,5), r = 4
        let f = HomogeneousPolynomial::from_ints(
            3,
            2,
            &[(&[1, 1, 0], 1), (&[0, 1, 1], 3), (&[1, 0, 1], -2)],
        )
        .unwrap();
        let p = HypergeomParams::new(vec![2, 3, 5], 4).unwrap();
        let (r, m, d) = (4u64, 10u64, 2u64);
        let factor = Rational::new(falling_int(r, d), num::pow(BigInt::from(r), 2))
            * Rational::new(num::pow(BigInt::from(m), 2), falling_int(m, d));
        let want = factor * f.evaluate(&p.center()).unwrap();
        assert_eq!(expectation(&f, &p).unwrap(), want);
    }

    #[test]
    fn expectation_of_linear_form_is_value_at_center() {
        let f =
            HomogeneousPolynomial::from_ints(3, 1, &[(&[1, 0, 0], 4), (&[0, 0, 1], -7)]).unwrap();
        let p = HypergeomParams::new(vec![2, 3, 5], 4).unwrap();
        assert_eq!(
            expectation(&f, &p).unwrap(),
            f.evaluate(&p.center()).unwrap()
        );
        assert!(expectation(&f, &urn()).is_err());
    }

    #[test]
    fn bernstein_approximation_examples() {
        let sq = HomogeneousPolynomial::from_ints(2, 2, &[(&[2, 0], 1)]).unwrap();
        let half = [ratio(1, 2), ratio(1, 2)];
        assert_eq!(bernstein_approximation(&sq, &half, 2).unwrap(), ratio(3, 8));

        let lin = HomogeneousPolynomial::from_ints(2, 1, &[(&[1, 0], 3), (&[0, 1], -1)]).unwrap();
        let x = [ratio(1, 3), ratio(2, 3)];
        for r in 1..5 {
            assert_eq!(
                bernstein_approximation(&lin, &x, r).unwrap(),
                lin.evaluate(&x).unwrap()
            );
        }

        let f = paper_quadratic();
        let xs = [ratio(7, 16), ratio(9, 16)];
        assert!(bernstein_approximation(&f, &xs, 2).unwrap() >= ratio(-1, 2));

        assert_eq!(
            bernstein_approximation(&f, &[ratio(1, 2), ratio(1, 3)], 2),
            Err(Error::NotOnSimplex)
        );
        assert_eq!(
            bernstein_approximation(&f, &[ratio(3, 2), ratio(-1, 2)], 2),
            Err(Error::NotOnSimplex)
        );
    }

    #[test]
    fn brute_force_is_gated() {
        let p = HypergeomParams::new(vec![20; 10], 30).unwrap();
        assert!(matches!(
            brute::total_probability(&p),
            Err(Error::TooLarge { .. })
        ));
    }
}
