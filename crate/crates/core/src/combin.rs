//! Exact combinatorial primitives.
//!
//! Integer-valued results are returned as [`Rational`] so that callers work
//! in a single numeric type; the `*_int` variants expose the underlying
//! [`BigInt`] for hot loops.

use std::sync::{OnceLock, RwLock};

use num::{BigInt, One, Zero};

use crate::rational::{int, Rational};
use crate::{Error, Result};

/// `n!`
pub fn factorial_int(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn factorial(n: u64) -> Rational {
    int(factorial_int(n))
}

/// `n choose k`, zero when `k > n`.
pub fn binomial_int(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> Rational {
    int(binomial_int(n, k))
}

/// `d! / α!` for `|α| = d`.
pub fn multinomial_int(d: u64, alpha: &[u32]) -> Result<BigInt> {
    let total: u64 = alpha.iter().map(|&a| u64::from(a)).sum();
    if total != d {
        return Err(Error::params(format!(
            "multinomial: |alpha| = {total} but d = {d}"
        )));
    }
    let mut acc = BigInt::one();
    let mut remaining = d;
    for &a in alpha {
        acc *= binomial_int(remaining, u64::from(a));
        remaining -= u64::from(a);
    }
    Ok(acc)
}

pub fn multinomial(d: u64, alpha: &[u32]) -> Result<Rational> {
    multinomial_int(d, alpha).map(int)
}

/// Falling factorial `x(x−1)···(x−d+1)` of an integer; `x^{0̲} = 1`.
pub fn falling_int(x: impl Into<BigInt>, d: u64) -> BigInt {
    let x = x.into();
    let mut acc = BigInt::one();
    for i in 0..d {
        acc *= &x - i;
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// Falling factorial of a rational argument.
pub fn falling(x: &Rational, d: u64) -> Rational {
    let mut acc = Rational::one();
    for i in 0..d {
        acc *= x - int(i);
    }
    acc
}

/// Falling factorial over an exponent tuple: `Π xᵢ^{αᵢ̲}`.
pub fn falling_multi_int(x: &[i64], alpha: &[u32]) -> BigInt {
    x.iter()
        .zip(alpha)
        .map(|(&xi, &ai)| falling_int(xi, u64::from(ai)))
        .product()
}

fn stirling_table() -> &'static RwLock<Vec<Vec<BigInt>>> {
    static TABLE: OnceLock<RwLock<Vec<Vec<BigInt>>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![vec![BigInt::one()]]))
}

/// Stirling number of the second kind `S(a, b)`, memoized in a shared
/// triangular table that grows on demand.
pub fn stirling2_int(a: u32, b: u32) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let (a, b) = (a as usize, b as usize);
    {
        let rows = stirling_table().read().unwrap();
        if let Some(row) = rows.get(a) {
            return row[b].clone();
        }
    }
    let mut rows = stirling_table().write().unwrap();
    while rows.len() <= a {
        let prev = rows.last().unwrap();
        let n = prev.len();
        let mut row = vec![BigInt::zero(); n + 1];
        for k in 1..=n {
            let carry = if k < n { &prev[k] * k } else { BigInt::zero() };
            row[k] = carry + &prev[k - 1];
        }
        rows.push(row);
    }
    rows[a][b].clone()
}

pub fn stirling2(a: u32, b: u32) -> Rational {
    int(stirling2_int(a, b))
}

/// Expansion of `(x−1)(x−2)···(x−d+1) = x^{d−1} + Σᵢ (−1)^{d−1−i} aᵢ xⁱ`
/// with the alternating signs stripped off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FallingPolyCoeffs {
    pub d: u32,
    /// `a₀ … a_{d−2}`, all positive.
    pub a: Vec<BigInt>,
    /// `(d−1)·Σ aᵢ`
    pub c_d: Rational,
}

impl FallingPolyCoeffs {
    /// Evaluates the reconstructed polynomial `x^{d−1} + Σ (−1)^{d−1−i} aᵢ xⁱ`.
    pub fn eval(&self, x: &Rational) -> Rational {
        let top = self.d - 1;
        let mut acc = num::pow(x.clone(), top as usize);
        for (i, a) in self.a.iter().enumerate() {
            let term = int(a.clone()) * num::pow(x.clone(), i);
            if (top as usize - i).is_multiple_of(2) {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }
}

pub fn falling_poly_coeffs(d: u32) -> Result<FallingPolyCoeffs> {
    if d < 2 {
        return Err(Error::params(format!(
            "falling_poly_coeffs needs d >= 2, got {d}"
        )));
    }
    // coefficients of Π_{j=1}^{d-1} (x − j), lowest degree first
    let mut coeffs = vec![BigInt::one()];
    for j in 1..d {
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * j;
        }
        coeffs = next;
    }
    let top = (d - 1) as usize;
    let a: Vec<BigInt> = coeffs[..top]
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if (top - i).is_multiple_of(2) {
                c.clone()
            } else {
                -c
            }
        })
        .collect();
    debug_assert!(a.iter().all(|ai| *ai > BigInt::zero()));
    let sum: BigInt = a.iter().sum();
    Ok(FallingPolyCoeffs {
        d,
        a,
        c_d: int(sum * (d - 1)),
    })
}
