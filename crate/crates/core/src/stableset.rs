//! Stability-number lower bounds from grid minimization of the
//! Motzkin–Straus form `xᵀ(I + A_G)x`, whose simplex minimum is `1/α(G)`.

use std::collections::BTreeSet;
use std::fmt;

use num::{BigInt, Zero};

use crate::grid::{grid_minimize_with, GridOptions, GridSpec, DEFAULT_GRID_LIMIT};
use crate::poly::{Exponent, HomogeneousPolynomial};
use crate::rational::{ceil_to_int, int, Rational};
use crate::{Error, Result};

/// Simple undirected graph on vertices `0..n` (printed 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from 1-indexed edges. Self-loops, duplicates and
    /// out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::params("graph needs at least one vertex"));
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::params(format!("edge {u} {v} out of range 1..={n}")));
            }
            if u == v {
                return Err(Error::params(format!("self-loop at vertex {u}")));
            }
            if !set.insert((u.min(v) - 1, u.max(v) - 1)) {
                return Err(Error::params(format!("duplicate edge {u} {v}")));
            }
        }
        Ok(Graph { n, edges: set })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Graph::new(n, &[])
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..=n)
            .flat_map(|u| ((u + 1)..=n).map(move |v| (u, v)))
            .collect();
        Graph::new(n, &edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::params("cycle needs at least 3 vertices"));
        }
        let edges: Vec<_> = (1..=n).map(|u| (u, u % n + 1)).collect();
        Graph::new(n, &edges)
    }

    /// Outer 5-cycle 1..5, inner pentagram 6..10, spokes i ~ i+5.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i + 1, (i + 1) % 5 + 1));
            edges.push((i + 6, (i + 2) % 5 + 6));
            edges.push((i + 1, i + 6));
        }
        Graph::new(10, &edges).expect("valid Petersen graph")
    }

    /// Parses an edge list: one `u v` pair per line, 1-indexed. DIMACS-style
    /// lines are understood (`c` comments, `p edge N M` header, `e u v`
    /// edges); blank lines and `#` comments are skipped, repeated edges are
    /// merged. Without a header the vertex count is the largest index seen.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut edges = BTreeSet::new();
        let mut max_vertex = 0;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::params(format!("line {}: cannot parse {line:?}", lineno + 1));
            let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
            let pair = match fields.as_slice() {
                ["c", ..] => continue,
                ["p", _, n, ..] => {
                    declared = Some(num(n)?);
                    continue;
                }
                ["e", u, v] | [u, v] => (num(u)?, num(v)?),
                _ => return Err(bad()),
            };
            if pair.0 == pair.1 {
                return Err(Error::params(format!(
                    "line {}: self-loop at vertex {}",
                    lineno + 1,
                    pair.0
                )));
            }
            max_vertex = max_vertex.max(pair.0).max(pair.1);
            edges.insert((pair.0.min(pair.1), pair.0.max(pair.1)));
        }
        let n = declared.unwrap_or(max_vertex);
        let edges: Vec<_> = edges.into_iter().collect();
        Graph::new(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as 1-indexed pairs `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(u, v)| (u + 1, v + 1))
    }

    /// Adjacency test on 1-indexed vertices.
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        u != v && u >= 1 && v >= 1 && self.edges.contains(&(u.min(v) - 1, u.max(v) - 1))
    }

    /// Whether the 1-indexed vertex set is pairwise nonadjacent.
    pub fn is_stable(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| !self.adjacent(u, v)))
    }

    fn neighbour_masks(&self) -> Vec<u64> {
        let mut masks = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            masks[u] |= 1 << v;
            masks[v] |= 1 << u;
        }
        masks
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p edge {} {}", self.n, self.edges.len())?;
        for (u, v) in self.edges() {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

/// `xᵀ(I + A_G)x = Σ xᵢ² + 2 Σ_{ij∈E} xᵢxⱼ`.
pub fn motzkin_straus_form(g: &Graph) -> HomogeneousPolynomial {
    let mut terms: Vec<(Exponent, Rational)> = (0..g.n)
        .map(|i| (Exponent::unit(g.n, i, 2), int(1)))
        .collect();
    for &(u, v) in &g.edges {
        let mut e = vec![0; g.n];
        e[u] = 1;
        e[v] = 1;
        terms.push((Exponent(e), int(2)));
    }
    HomogeneousPolynomial::new(g.n, 2, terms).expect("degree-2 form")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaBound {
    pub r: u32,
    /// `f_Δ(n,r)` for the Motzkin–Straus form.
    pub grid_value: Rational,
    /// `⌈1/f_Δ(n,r)⌉ ≤ α(G)`.
    pub alpha_lb: BigInt,
    pub evaluations: u64,
}

/// Certified lower bound on `α(G)` from `Δ(n,r)`; exact when `α(G)` divides `r`.
pub fn alpha_lower_bound(g: &Graph, r: u32) -> Result<AlphaBound> {
    alpha_lower_bound_with(g, r, DEFAULT_GRID_LIMIT, GridOptions::default())
}

pub fn alpha_lower_bound_with(
    g: &Graph,
    r: u32,
    limit: u128,
    opts: GridOptions,
) -> Result<AlphaBound> {
    GridSpec::new(g.n, r)?.check_size(limit)?;
    let res = grid_minimize_with(&motzkin_straus_form(g), r, opts);
    // the form is at least 1/n on the simplex, so the grid value is positive
    debug_assert!(res.value > Rational::zero());
    let alpha_lb = ceil_to_int(&res.value.recip());
    Ok(AlphaBound {
        r,
        grid_value: res.value,
        alpha_lb,
        evaluations: res.evaluations,
    })
}

/// Exact stability number by branch-and-bound over vertex subsets.
/// Exponential time; intended as a test oracle for `n ≤ 25`.
pub fn brute_force_alpha(g: &Graph) -> Result<usize> {
    if g.n > 25 {
        return Err(Error::params(format!(
            "brute-force stability number supports at most 25 vertices (got {})",
            g.n
        )));
    }
    fn search(candidates: u64, size: usize, best: &mut usize, nbrs: &[u64]) {
        if candidates == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + candidates.count_ones() as usize <= *best {
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        let rest = candidates & !(1 << v);
        search(rest & !nbrs[v], size + 1, best, nbrs);
        search(rest, size, best, nbrs);
    }
    let nbrs = g.neighbour_masks();
    let all = if g.n == 64 {
        u64::MAX
    } else {
        (1u64 << g.n) - 1
    };
    let mut best = 0;
    search(all, 0, &mut best, &nbrs);
    Ok(best)
}

/// Maximal stable set chosen greedily by minimum remaining degree
/// (1-indexed, ascending).
pub fn greedy_stable_set(g: &Graph) -> Vec<usize> {
    let nbrs = g.neighbour_masks();
    let mut alive: u64 = if g.n == 64 {
        u64::MAX
    } else {
        (1u64 << g.n) - 1
    };
    let mut chosen = Vec::new();
    while alive != 0 {
        let v = (0..g.n)
            .filter(|&v| alive & (1 << v) != 0)
            .min_by_key(|&v| (nbrs[v] & alive).count_ones())
            .expect("nonempty");
        chosen.push(v + 1);
        alive &= !(1 << v) & !nbrs[v];
    }
    chosen.sort_unstable();
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn forms_of_small_graphs() {
        assert_eq!(
            motzkin_straus_form(&Graph::empty(3).unwrap()),
            HomogeneousPolynomial::sum_of_squares(3)
        );
        let k2 = motzkin_straus_form(&Graph::new(2, &[(1, 2)]).unwrap());
        let want =
            HomogeneousPolynomial::from_ints(2, 2, &[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)])
                .unwrap();
        assert_eq!(k2, want);
        let k3 = Graph::complete(3).unwrap();
        let b = alpha_lower_bound(&k3, 5).unwrap();
        assert_eq!(b.grid_value, int(1));
        assert_eq!(b.alpha_lb, BigInt::from(1));
    }

    #[test]
    fn petersen_at_r4() {
        let g = Graph::petersen();
        assert_eq!(g.edge_count(), 15);
        assert!(g.edges().all(|(u, v)| {
            (1..=10).filter(|&w| g.adjacent(u, w)).count() == 3 && g.adjacent(v, u)
        }));
        let b = alpha_lower_bound(&g, 4).unwrap();
        assert_eq!(b.grid_value, ratio(1, 4));
        assert_eq!(b.alpha_lb, BigInt::from(4));
        assert_eq!(b.evaluations, 715);
        assert_eq!(brute_force_alpha(&g).unwrap(), 4);
    }

    #[test]
    fn empty_and_complete() {
        let b = alpha_lower_bound(&Graph::empty(4).unwrap(), 4).unwrap();
        assert_eq!((b.grid_value, b.alpha_lb), (ratio(1, 4), BigInt::from(4)));
        for n in 1..=6 {
            for r in 1..=5 {
                let b = alpha_lower_bound(&Graph::complete(n).unwrap(), r).unwrap();
                assert_eq!((b.grid_value, b.alpha_lb), (int(1), BigInt::from(1)));
            }
        }
    }

    #[test]
    fn cycles_brute_force() {
        for n in 3..=12 {
            let g = Graph::cycle(n).unwrap();
            assert_eq!(brute_force_alpha(&g).unwrap(), n / 2);
        }
    }

    #[test]
    fn parser_accepts_dimacs_and_plain() {
        let g = Graph::parse_edge_list(
            "c petersen-ish\np edge 4 3\ne 1 2\ne 2 3\n3 4\n\n# done\n2 1\n",
        )
        .unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 3);
        let h = Graph::parse_edge_list("1 3\n").unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert!(Graph::parse_edge_list("1 1\n").is_err());
        assert!(Graph::parse_edge_list("p edge 2 1\n1 3\n").is_err());
        assert!(Graph::parse_edge_list("1 x\n").is_err());
        assert!(Graph::new(3, &[(1, 2), (2, 1)]).is_err());
        let round = Graph::parse_edge_list(&Graph::petersen().to_string()).unwrap();
        assert_eq!(round, Graph::petersen());
    }

    #[test]
    fn size_guard() {
        let g = Graph::empty(30).unwrap();
        let err = alpha_lower_bound_with(&g, 30, 1000, GridOptions::default()).unwrap_err();
        assert!(matches!(err, Error::TooLarge { .. }));
    }

    #[test]
    fn greedy_is_stable_and_maximal() {
        let g = Graph::petersen();
        let s = greedy_stable_set(&g);
        assert!(g.is_stable(&s));
        assert!((1..=10).all(|v| s.contains(&v) || s.iter().any(|&u| g.adjacent(u, v))));
    }
}
