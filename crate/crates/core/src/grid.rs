//! The regular grid `Δ(n,r)` and exact minimization over it.
//!
//! Grid points `α/r` are in bijection with compositions `α ∈ I(n,r)`, which
//! are enumerated in ascending lexicographic order by a constant-memory
//! successor iterator. Parallel scans split the enumeration into contiguous
//! lexicographic chunks via [`unrank`], so the reduction (value, lex-least
//! minimizers, tie count) is independent of how the work was partitioned.

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::poly::{Exponent, HomogeneousPolynomial};
use crate::rational::Rational;
use crate::{Error, Result};

/// Default number of tied minimizers reported.
pub const DEFAULT_TIE_CAP: usize = 16;

/// Default ceiling on the number of grid points a single search may visit.
pub const DEFAULT_GRID_LIMIT: u128 = 100_000_000;

/// `Δ(n,r)`: simplex points with common denominator `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub n: usize,
    pub r: u32,
}

impl GridSpec {
    pub fn new(n: usize, r: u32) -> Result<Self> {
        if n == 0 || r == 0 {
            return Err(Error::params(format!(
                "grid needs n >= 1 and r >= 1 (got n={n}, r={r})"
            )));
        }
        Ok(GridSpec { n, r })
    }

    /// `|Δ(n,r)| = C(n+r−1, r)`, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        composition_count(self.n, self.r)
    }

    /// Fails with [`Error::TooLarge`] when `|Δ(n,r)|` exceeds `limit`.
    pub fn check_size(&self, limit: u128) -> Result<()> {
        let size = self.size();
        if size > limit {
            return Err(Error::TooLarge { size, limit });
        }
        Ok(())
    }

    pub fn iter(&self) -> Compositions {
        Compositions::new(self.n, self.r)
    }
}

/// Number of compositions of `total` into `parts` nonnegative parts.
pub fn composition_count(parts: usize, total: u32) -> u128 {
    if parts == 0 {
        return u128::from(total == 0);
    }
    // C(total + parts - 1, parts - 1), computed with the smaller index
    let k = (parts as u128 - 1).min(u128::from(total));
    let top = u128::from(total) + parts as u128 - 1;
    let mut acc: u128 = 1;
    for i in 0..k {
        let Some(prod) = acc.checked_mul(top - i) else {
            return u128::MAX;
        };
        acc = prod / (i + 1);
    }
    acc
}

/// Compositions of `total` into `parts` nonnegative parts, in ascending
/// lexicographic order: `(0,…,0,total)` first, `(total,0,…,0)` last.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
}

impl Compositions {
    pub fn new(parts: usize, total: u32) -> Self {
        if parts == 0 {
            return Compositions {
                current: (total == 0).then(Vec::new),
            };
        }
        let mut first = vec![0; parts];
        first[parts - 1] = total;
        Compositions {
            current: Some(first),
        }
    }

    /// Starts the enumeration at `start` (which must be a composition).
    pub fn starting_at(start: Vec<u32>) -> Self {
        Compositions {
            current: Some(start),
        }
    }
}

/// Advances `a` to its lexicographic successor; false when `a` was last.
pub fn next_composition(a: &mut [u32]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    if a[n - 1] > 0 {
        a[n - 2] += 1;
        a[n - 1] -= 1;
        return true;
    }
    // rightmost nonzero entry before the tail
    let Some(p) = (0..n - 1).rev().find(|&i| a[i] > 0) else {
        return false;
    };
    if p == 0 {
        return false;
    }
    let moved = a[p];
    a[p - 1] += 1;
    a[p] = 0;
    a[n - 1] = moved - 1;
    true
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let cur = self.current.as_mut()?;
        let out = cur.clone();
        if !next_composition(cur) {
            self.current = None;
        }
        Some(out)
    }
}

/// The composition at 0-based position `index` in lexicographic order.
pub fn unrank(parts: usize, total: u32, mut index: u128) -> Option<Vec<u32>> {
    if index >= composition_count(parts, total) {
        return None;
    }
    let mut out = vec![0u32; parts];
    let mut remaining = total;
    #[allow(clippy::needless_range_loop)]
    for i in 0..parts.saturating_sub(1) {
        let mut v = 0;
        loop {
            let block = composition_count(parts - i - 1, remaining - v);
            if index < block {
                break;
            }
            index -= block;
            v += 1;
        }
        out[i] = v;
        remaining -= v;
    }
    if parts > 0 {
        out[parts - 1] = remaining;
    }
    Some(out)
}

/// Enumerates `Δ(n,r)` as exponent tuples `α` (the point is `α/r`).
pub fn enumerate_grid(spec: GridSpec) -> impl Iterator<Item = Exponent> {
    spec.iter().map(Exponent)
}

/// Certified rational interval `[lo, hi]` containing an unknown quantity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    /// Panics if `lo > hi`: an empty enclosure means a certification bug.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty enclosure [{lo}, {hi}]");
        Enclosure { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        Enclosure {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Intersection with another enclosure of the same quantity.
    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(Enclosure { lo, hi })
    }
}

/// Extremum of `f` over `Δ(n,r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMinResult {
    pub r: u32,
    /// `f_Δ(n,r)` (or the grid maximum for [`grid_maximize`]).
    pub value: Rational,
    /// Lexicographically smallest attaining tuples `α` (point `α/r`), capped.
    pub minimizers: Vec<Exponent>,
    /// Exact number of attaining grid points.
    pub tie_count: u64,
    /// Number of grid points evaluated.
    pub evaluations: u64,
}

impl GridMinResult {
    /// Attaining points as rational coordinates.
    pub fn points(&self) -> Vec<Vec<Rational>> {
        self.minimizers
            .iter()
            .map(|a| {
                a.0.iter()
                    .map(|&v| Rational::new(v.into(), self.r.into()))
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridOptions {
    pub tie_cap: usize,
    pub parallel: bool,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            tie_cap: DEFAULT_TIE_CAP,
            parallel: true,
        }
    }
}

/// Partial reduction state for one lexicographic chunk.
struct Partial<T> {
    best: Option<T>,
    minimizers: Vec<Vec<u32>>,
    ties: u64,
    evaluations: u64,
}

impl<T: Ord> Partial<T> {
    fn empty() -> Self {
        Partial {
            best: None,
            minimizers: Vec::new(),
            ties: 0,
            evaluations: 0,
        }
    }

    fn offer(&mut self, value: T, alpha: &[u32], cap: usize) {
        self.evaluations += 1;
        match self.best.as_ref().map(|b| value.cmp(b)) {
            Some(std::cmp::Ordering::Greater) => {}
            Some(std::cmp::Ordering::Equal) => {
                self.ties += 1;
                if self.minimizers.len() < cap {
                    self.minimizers.push(alpha.to_vec());
                }
            }
            _ => {
                self.best = Some(value);
                self.ties = 1;
                self.minimizers.clear();
                if cap > 0 {
                    self.minimizers.push(alpha.to_vec());
                }
            }
        }
    }

    /// Combines with the chunk immediately following this one.
    fn merge(mut self, later: Partial<T>, cap: usize) -> Self {
        self.evaluations += later.evaluations;
        let Some(later_best) = later.best else {
            return self;
        };
        match self.best.as_ref().map(|b| later_best.cmp(b)) {
            Some(std::cmp::Ordering::Greater) => {}
            Some(std::cmp::Ordering::Equal) => {
                self.ties += later.ties;
                let room = cap.saturating_sub(self.minimizers.len());
                self.minimizers
                    .extend(later.minimizers.into_iter().take(room));
            }
            _ => {
                self.best = Some(later_best);
                self.ties = later.ties;
                self.minimizers = later.minimizers;
            }
        }
        self
    }
}

fn scan_chunk<T, F>(n: usize, r: u32, start: u128, len: u128, cap: usize, eval: &F) -> Partial<T>
where
    T: Ord,
    F: Fn(&[u32]) -> T,
{
    let mut partial = Partial::empty();
    let Some(mut alpha) = unrank(n, r, start) else {
        return partial;
    };
    for step in 0..len {
        partial.offer(eval(&alpha), &alpha, cap);
        if step + 1 < len && !next_composition(&mut alpha) {
            break;
        }
    }
    partial
}

fn scan<T, F>(n: usize, r: u32, opts: GridOptions, eval: F) -> Partial<T>
where
    T: Ord + Send,
    F: Fn(&[u32]) -> T + Sync,
{
    let total = composition_count(n, r);
    const MIN_CHUNK: u128 = 2048;
    let chunks = if opts.parallel {
        let target = (rayon::current_num_threads() * 8) as u128;
        (total / MIN_CHUNK).clamp(1, target.max(1))
    } else {
        1
    };
    let chunk_len = total.div_ceil(chunks);
    let cap = opts.tie_cap;
    if chunks == 1 {
        return scan_chunk(n, r, 0, total, cap, &eval);
    }
    let partials: Vec<Partial<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk_len;
            let len = chunk_len.min(total.saturating_sub(start));
            scan_chunk(n, r, start, len, cap, &eval)
        })
        .collect();
    partials
        .into_iter()
        .fold(Partial::empty(), |acc, p| acc.merge(p, cap))
}

/// Evaluates `N(α) = Σ c_β α^β` for integer coefficients `c_β`, so that
/// `f(α/r) = N(α) / (L·r^d)`.
/// Sparse monomial `(variable, power)` pairs with a coefficient.
type SparseTerm<C> = (Vec<(usize, u32)>, C);

struct IntegerEvaluator {
    terms: Vec<SparseTerm<BigInt>>,
    small: Option<Vec<SparseTerm<i128>>>,
}

impl IntegerEvaluator {
    fn new(terms: &[(Exponent, BigInt)], r: u32, d: u32) -> Self {
        let sparse: Vec<SparseTerm<BigInt>> = terms
            .iter()
            .map(|(beta, c)| {
                let idx = beta
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b > 0)
                    .map(|(i, &b)| (i, b))
                    .collect();
                (idx, c.clone())
            })
            .collect();
        // i128 is exact when Σ|c_β|·r^d stays below 2^120
        let abs_sum: BigInt = sparse.iter().map(|(_, c)| c.abs()).sum();
        let bound = abs_sum * num::pow(BigInt::from(r), d as usize);
        let small = if bound < (BigInt::one() << 120) {
            Some(
                sparse
                    .iter()
                    .map(|(idx, c)| (idx.clone(), c.to_i128().expect("bounded")))
                    .collect(),
            )
        } else {
            None
        };
        IntegerEvaluator {
            terms: sparse,
            small,
        }
    }

    fn eval_small(terms: &[(Vec<(usize, u32)>, i128)], alpha: &[u32]) -> i128 {
        terms
            .iter()
            .map(|(idx, c)| {
                idx.iter()
                    .fold(*c, |acc, &(i, b)| acc * i128::from(alpha[i]).pow(b))
            })
            .sum()
    }

    fn eval_big(&self, alpha: &[u32]) -> BigInt {
        self.terms
            .iter()
            .map(|(idx, c)| {
                idx.iter().fold(c.clone(), |acc, &(i, b)| {
                    acc * num::pow(BigInt::from(alpha[i]), b as usize)
                })
            })
            .sum()
    }
}

fn extremum(f: &HomogeneousPolynomial, r: u32, opts: GridOptions, maximize: bool) -> GridMinResult {
    assert!(r >= 1, "grid denominator must be positive");
    let g = if maximize { f.neg() } else { f.clone() };
    let n = g.n();
    let d = g.degree();
    let (l, terms) = g.integer_form();
    let evaluator = IntegerEvaluator::new(&terms, r, d);
    let (best, minimizers, ties, evaluations) = match &evaluator.small {
        Some(small) => {
            let p = scan(n, r, opts, |a| IntegerEvaluator::eval_small(small, a));
            (
                p.best.map(BigInt::from),
                p.minimizers,
                p.ties,
                p.evaluations,
            )
        }
        None => {
            let p = scan(n, r, opts, |a| evaluator.eval_big(a));
            (p.best, p.minimizers, p.ties, p.evaluations)
        }
    };
    let numer = best.expect("grid is nonempty");
    let denom = l * num::pow(BigInt::from(r), d as usize);
    let mut value = Rational::new(numer, denom);
    if maximize {
        value = -value;
    }
    GridMinResult {
        r,
        value,
        minimizers: minimizers.into_iter().map(Exponent).collect(),
        tie_count: ties,
        evaluations: evaluations.to_u64().unwrap_or(u64::MAX),
    }
}

/// `f_Δ(n,r) = min_{x ∈ Δ(n,r)} f(x)` by exhaustive exact evaluation.
pub fn grid_minimize(f: &HomogeneousPolynomial, r: u32) -> GridMinResult {
    extremum(f, r, GridOptions::default(), false)
}

/// Maximum of `f` over `Δ(n,r)`; `minimizers` holds the maximizers.
pub fn grid_maximize(f: &HomogeneousPolynomial, r: u32) -> GridMinResult {
    extremum(f, r, GridOptions::default(), true)
}

pub fn grid_minimize_with(f: &HomogeneousPolynomial, r: u32, opts: GridOptions) -> GridMinResult {
    extremum(f, r, opts, false)
}

pub fn grid_maximize_with(f: &HomogeneousPolynomial, r: u32, opts: GridOptions) -> GridMinResult {
    extremum(f, r, opts, true)
}

/// Certified enclosures of `(f̲, f̄)`: the Bernstein bounds at elevation `k`
/// combined with the grid extrema on `Δ(n,r)`.
pub fn range_enclosures(f: &HomogeneousPolynomial, r: u32, k: u32) -> (Enclosure, Enclosure) {
    let (lower, upper) = f.bernstein_enclosure(k);
    let gmin = grid_minimize(f, r).value;
    let gmax = grid_maximize(f, r).value;
    let fmin = Enclosure::new(lower.lo, (&lower.hi).min(&gmin).clone());
    let fmax = Enclosure::new((&upper.lo).max(&gmax).clone(), upper.hi);
    (fmin, fmax)
}

/// Brute-force minimum over an explicitly materialized grid; a test oracle
/// independent of the integer fast path and the chunked scan.
pub fn brute_force_grid_min(f: &HomogeneousPolynomial, r: u32) -> Result<Rational> {
    let spec = GridSpec::new(f.n(), r)?;
    let points: Vec<Vec<Rational>> = spec
        .iter()
        .map(|a| {
            a.iter()
                .map(|&v| Rational::new(v.into(), r.into()))
                .collect()
        })
        .collect();
    let mut best: Option<Rational> = None;
    for x in &points {
        let v = f.evaluate(x)?;
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    Ok(best.unwrap_or_else(Rational::zero))
}
