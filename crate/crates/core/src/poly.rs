//! Homogeneous polynomials with exact rational coefficients and their
//! Bernstein-basis analysis.
//!
//! A polynomial `f = Σ_β f_β x^β` of degree `d` has Bernstein coefficients
//! `f_β·β!/d!`. On the simplex `f(x)` is a convex combination of them, so
//! their minimum and maximum enclose `f̲` and `f̄`. Multiplying by
//! `(Σxᵢ)^k` leaves `f` unchanged on the simplex and tightens the enclosure.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One, Signed, Zero};

use crate::combin::{factorial_int, multinomial_int};
use crate::grid::{Compositions, Enclosure};
use crate::rational::{int, Rational};
use crate::{Error, Result};

/// Default upper limit on degree elevation accepted by front ends; the
/// Bernstein table at elevation `k` has `C(n+d+k−1, d+k)` entries.
pub const DEFAULT_ELEVATION_CAP: u32 = 8;

/// Exponent tuple `α ∈ ℕⁿ`. Ordering is lexicographic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    /// `d·eᵢ`
    pub fn unit(n: usize, i: usize, d: u32) -> Self {
        let mut v = vec![0; n];
        v[i] = d;
        Exponent(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|α| = Σ αᵢ`
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_square_free(&self) -> bool {
        self.0.iter().all(|&a| a <= 1)
    }

    /// `α! = Π αᵢ!`
    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .map(|&a| factorial_int(u64::from(a)))
            .product()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl From<Vec<u32>> for Exponent {
    fn from(v: Vec<u32>) -> Self {
        Exponent(v)
    }
}

impl From<&[u32]> for Exponent {
    fn from(v: &[u32]) -> Self {
        Exponent(v.to_vec())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

fn merge_terms<I, E>(n: usize, terms: I) -> Result<BTreeMap<Exponent, Rational>>
where
    I: IntoIterator<Item = (E, Rational)>,
    E: Into<Exponent>,
{
    let mut coeffs: BTreeMap<Exponent, Rational> = BTreeMap::new();
    for (alpha, c) in terms {
        let alpha = alpha.into();
        if alpha.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: alpha.len(),
            });
        }
        *coeffs.entry(alpha).or_insert_with(Rational::zero) += c;
    }
    coeffs.retain(|_, c| !c.is_zero());
    Ok(coeffs)
}

fn eval_terms<'a>(
    n: usize,
    max_deg: u32,
    terms: impl Iterator<Item = (&'a Exponent, &'a Rational)>,
    x: &[Rational],
) -> Result<Rational> {
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let powers: Vec<Vec<Rational>> = x
        .iter()
        .map(|xi| {
            let mut row = Vec::with_capacity(max_deg as usize + 1);
            row.push(Rational::one());
            for e in 1..=max_deg as usize {
                let next = &row[e - 1] * xi;
                row.push(next);
            }
            row
        })
        .collect();
    let mut acc = Rational::zero();
    for (beta, c) in terms {
        let mut term = c.clone();
        for (i, &b) in beta.0.iter().enumerate() {
            if b > 0 {
                term *= &powers[i][b as usize];
            }
        }
        acc += term;
    }
    Ok(acc)
}

/// A possibly non-homogeneous polynomial, used as input to [`homogenize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl Polynomial {
    pub fn new<I, E>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, Rational)>,
        E: Into<Exponent>,
    {
        if n == 0 {
            return Err(Error::params("a polynomial needs at least one variable"));
        }
        Ok(Polynomial {
            n,
            terms: merge_terms(n, terms)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Largest total degree among stored monomials (0 for the zero polynomial).
    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(Exponent::degree).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<Rational> {
        eval_terms(self.n, self.max_degree(), self.terms.iter(), x)
    }
}

/// `f = Σ_{β ∈ I(n,d)} f_β x^β` with exact coefficients; zero coefficients
/// are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousPolynomial {
    n: usize,
    d: u32,
    coeffs: BTreeMap<Exponent, Rational>,
}

impl HomogeneousPolynomial {
    /// Builds a polynomial, merging repeated exponents and dropping zeros.
    pub fn new<I, E>(n: usize, d: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (E, Rational)>,
        E: Into<Exponent>,
    {
        if n == 0 || d == 0 {
            return Err(Error::params(format!(
                "homogeneous polynomials need n >= 1 and d >= 1 (got n={n}, d={d})"
            )));
        }
        let coeffs = merge_terms(n, terms)?;
        for alpha in coeffs.keys() {
            let got = alpha.degree();
            if got != d {
                return Err(Error::NotHomogeneous {
                    exponent: alpha.0.clone(),
                    expected: d,
                    got,
                });
            }
        }
        Ok(HomogeneousPolynomial { n, d, coeffs })
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_ints(n: usize, d: u32, terms: &[(&[u32], i64)]) -> Result<Self> {
        Self::new(
            n,
            d,
            terms.iter().map(|(a, c)| (Exponent::from(*a), int(*c))),
        )
    }

    pub fn zero(n: usize, d: u32) -> Result<Self> {
        Self::new(n, d, std::iter::empty::<(Exponent, Rational)>())
    }

    /// `Σ xᵢ²`
    pub fn sum_of_squares(n: usize) -> Self {
        Self::new(
            n,
            2,
            (0..n).map(|i| (Exponent::unit(n, i, 2), Rational::one())),
        )
        .expect("valid by construction")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, alpha: &Exponent) -> Rational {
        self.coeffs
            .get(alpha)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Stored (nonzero) terms in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// True iff every monomial is square-free (all exponents in {0,1}).
    pub fn is_square_free(&self) -> bool {
        self.coeffs.keys().all(Exponent::is_square_free)
    }

    /// Exact value `Σ f_β x^β`.
    pub fn evaluate(&self, x: &[Rational]) -> Result<Rational> {
        eval_terms(self.n, self.d, self.coeffs.iter(), x)
    }

    /// Value at the vertex `eᵢ`, i.e. the coefficient of `xᵢ^d`.
    pub fn vertex_value(&self, i: usize) -> Rational {
        self.coeff(&Exponent::unit(self.n, i, self.d))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.d).expect("valid dimensions");
        }
        HomogeneousPolynomial {
            n: self.n,
            d: self.d,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, v)| (a.clone(), v * c))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        if self.d != other.d {
            return Err(Error::params(format!(
                "cannot add polynomials of degree {} and {}",
                self.d, other.d
            )));
        }
        Self::new(
            self.n,
            self.d,
            self.terms()
                .chain(other.terms())
                .map(|(a, c)| (a.clone(), c.clone())),
        )
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// `f·(Σxᵢ)^k`, a degree-`d+k` polynomial equal to `f` on the simplex.
    pub fn elevate(&self, k: u32) -> Self {
        let mut coeffs = self.coeffs.clone();
        for _ in 0..k {
            let mut next: BTreeMap<Exponent, Rational> = BTreeMap::new();
            for (alpha, c) in &coeffs {
                for i in 0..self.n {
                    let mut beta = alpha.clone();
                    beta.0[i] += 1;
                    *next.entry(beta).or_insert_with(Rational::zero) += c;
                }
            }
            coeffs = next;
        }
        coeffs.retain(|_, c| !c.is_zero());
        HomogeneousPolynomial {
            n: self.n,
            d: self.d + k,
            coeffs,
        }
    }

    /// Bernstein coefficients `f_β·β!/d!` over all of `I(n,d)`.
    pub fn bernstein_table(&self) -> BernsteinTable {
        let d_fact = factorial_int(u64::from(self.d));
        let mut entries = BTreeMap::new();
        let mut min: Option<Rational> = None;
        let mut max: Option<Rational> = None;
        for beta in Compositions::new(self.n, self.d) {
            let beta = Exponent(beta);
            let value = match self.coeffs.get(&beta) {
                Some(c) => c * Rational::new(beta.factorial(), d_fact.clone()),
                None => Rational::zero(),
            };
            if min.as_ref().is_none_or(|m| value < *m) {
                min = Some(value.clone());
            }
            if max.as_ref().is_none_or(|m| value > *m) {
                max = Some(value.clone());
            }
            entries.insert(beta, value);
        }
        BernsteinTable {
            degree: self.d,
            entries,
            min_coeff: min.expect("I(n,d) is nonempty"),
            max_coeff: max.expect("I(n,d) is nonempty"),
        }
    }

    /// Certified enclosures `(f̲, f̄)` from the Bernstein coefficients of
    /// `f·(Σxᵢ)^k`: `f̲ ∈ [min coeff, min vertex value]` and
    /// `f̄ ∈ [max vertex value, max coeff]`.
    pub fn bernstein_enclosure(&self, k: u32) -> (Enclosure, Enclosure) {
        let table = self.elevate(k).bernstein_table();
        let vertices: Vec<Rational> = (0..self.n).map(|i| self.vertex_value(i)).collect();
        let vmin = vertices.iter().min().expect("n >= 1").clone();
        let vmax = vertices.iter().max().expect("n >= 1").clone();
        (
            Enclosure::new(table.min_coeff, vmin),
            Enclosure::new(vmax, table.max_coeff),
        )
    }

    /// Coefficients scaled to integers: returns `(L, [(β, L·f_β)])` where `L`
    /// is the least common denominator.
    pub fn integer_form(&self) -> (BigInt, Vec<(Exponent, BigInt)>) {
        let l = crate::rational::common_denominator(self.coeffs.values());
        let terms = self
            .coeffs
            .iter()
            .map(|(a, c)| {
                let scaled = c * Rational::from_integer(l.clone());
                (a.clone(), scaled.to_integer())
            })
            .collect();
        (l, terms)
    }
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (idx, (alpha, c)) in self.coeffs.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.abs();
            let mut wrote = false;
            if !abs.is_one() {
                write!(f, "{abs}")?;
                wrote = true;
            }
            for (i, &e) in alpha.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

/// Bernstein coefficients over the full index set `I(n,d)`, zeros included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernsteinTable {
    pub degree: u32,
    pub entries: BTreeMap<Exponent, Rational>,
    pub min_coeff: Rational,
    pub max_coeff: Rational,
}

impl BernsteinTable {
    pub fn get(&self, beta: &Exponent) -> Option<&Rational> {
        self.entries.get(beta)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Multiplies each monomial of degree `e < d` by `(Σxᵢ)^{d−e}`, expanded with
/// the multinomial theorem. The result agrees with `p` on the simplex.
pub fn homogenize(p: &Polynomial, d: u32) -> Result<HomogeneousPolynomial> {
    let n = p.n();
    let mut out: BTreeMap<Exponent, Rational> = BTreeMap::new();
    for (alpha, c) in p.terms() {
        let e = alpha.degree();
        if e > d {
            return Err(Error::DegreeExceeded {
                exponent: alpha.0.clone(),
                target: d,
                got: e,
            });
        }
        let gap = d - e;
        for gamma in Compositions::new(n, gap) {
            let weight = multinomial_int(u64::from(gap), &gamma).expect("|gamma| = gap");
            let beta: Vec<u32> = alpha.0.iter().zip(&gamma).map(|(a, g)| a + g).collect();
            *out.entry(Exponent(beta)).or_insert_with(Rational::zero) += c * int(weight);
        }
    }
    HomogeneousPolynomial::new(n, d, out)
}
