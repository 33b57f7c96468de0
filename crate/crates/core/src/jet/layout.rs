//! Dense ranked layout of the monomials of total degree `<= D` in `n` variables.
//!
//! Monomials are ranked in graded-colex order: first by total degree, then
//! colexicographically (the last variable is the most significant). Every
//! table needed by the jet kernels (products, partial derivatives) is built
//! once per `(n, D)` and shared through an `Arc`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Exponent vector of a monomial.
pub type MultiIndex = Vec<u32>;

#[derive(Debug)]
pub struct Layout {
    nvars: usize,
    degree: usize,
    exponents: Vec<MultiIndex>,
    degrees: Vec<usize>,
    /// `degree_start[d]` is the rank of the first monomial of total degree `d`;
    /// the last entry is the total size.
    degree_start: Vec<usize>,
    index: HashMap<MultiIndex, usize>,
    /// For every monomial `c`, all ordered pairs `(p, q)` with `p + q = c`.
    splits: Vec<Vec<(u32, u32)>>,
    /// `lower[axis][r]` is the rank of `x^(e - e_axis)` when `e_axis > 0`.
    lower: Vec<Vec<Option<usize>>>,
    /// `raise[axis][r]` is the rank of `x^(e + e_axis)` when it fits in degree `D`.
    raise: Vec<Vec<Option<usize>>>,
}

fn colex_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

fn compositions(nvars: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if prefix.len() + 1 == nvars {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(nvars, total - first, prefix, out);
        prefix.pop();
    }
}

impl Layout {
    fn build(nvars: usize, degree: usize) -> Self {
        let mut exponents: Vec<MultiIndex> = Vec::new();
        let mut degree_start = Vec::with_capacity(degree + 2);
        for d in 0..=degree {
            degree_start.push(exponents.len());
            if nvars == 0 {
                if d == 0 {
                    exponents.push(Vec::new());
                }
                continue;
            }
            let mut block = Vec::new();
            compositions(nvars, d as u32, &mut Vec::with_capacity(nvars), &mut block);
            block.sort_by(|a, b| colex_cmp(a, b));
            exponents.extend(block);
        }
        degree_start.push(exponents.len());

        let index: HashMap<MultiIndex, usize> = exponents
            .iter()
            .enumerate()
            .map(|(r, e)| (e.clone(), r))
            .collect();
        let degrees: Vec<usize> = exponents
            .iter()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .collect();

        let mut lower = vec![vec![None; exponents.len()]; nvars];
        let mut raise = vec![vec![None; exponents.len()]; nvars];
        for (r, e) in exponents.iter().enumerate() {
            for axis in 0..nvars {
                let mut f = e.clone();
                if e[axis] > 0 {
                    f[axis] -= 1;
                    lower[axis][r] = index.get(&f).copied();
                    f[axis] += 1;
                }
                f[axis] += 1;
                raise[axis][r] = index.get(&f).copied();
            }
        }

        let mut splits = vec![Vec::new(); exponents.len()];
        for (p, ep) in exponents.iter().enumerate() {
            for (q, eq) in exponents.iter().enumerate() {
                if degrees[p] + degrees[q] > degree {
                    continue;
                }
                let sum: MultiIndex = ep.iter().zip(eq).map(|(a, b)| a + b).collect();
                let c = index[&sum];
                splits[c].push((p as u32, q as u32));
            }
        }

        Layout {
            nvars,
            degree,
            exponents,
            degrees,
            degree_start,
            index,
            splits,
            lower,
            raise,
        }
    }

    /// Shared layout for `nvars` variables up to total degree `degree`.
    pub fn get(nvars: usize, degree: usize) -> Arc<Layout> {
        type Cache = Mutex<HashMap<(usize, usize), Arc<Layout>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("layout cache poisoned");
        guard
            .entry((nvars, degree))
            .or_insert_with(|| Arc::new(Layout::build(nvars, degree)))
            .clone()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self, rank: usize) -> &[u32] {
        &self.exponents[rank]
    }

    pub fn total_degree(&self, rank: usize) -> usize {
        self.degrees[rank]
    }

    /// Number of monomials of total degree `<= d` (clamped to the layout).
    pub fn len_to_degree(&self, d: usize) -> usize {
        self.degree_start[(d + 1).min(self.degree + 1)]
    }

    /// Rank range of the monomials of total degree exactly `d`.
    pub fn degree_range(&self, d: usize) -> std::ops::Range<usize> {
        self.degree_start[d]..self.degree_start[d + 1]
    }

    pub fn rank(&self, exponents: &[u32]) -> Option<usize> {
        self.index.get(exponents).copied()
    }

    pub(crate) fn splits(&self, rank: usize) -> &[(u32, u32)] {
        &self.splits[rank]
    }

    pub(crate) fn lower(&self, axis: usize, rank: usize) -> Option<usize> {
        self.lower[axis][rank]
    }

    pub(crate) fn raise(&self, axis: usize, rank: usize) -> Option<usize> {
        self.raise[axis][rank]
    }
}

/// `C(n + d, n)`, the dense size of a jet.
pub fn dense_size(nvars: usize, degree: usize) -> usize {
    let mut acc: u128 = 1;
    for k in 1..=nvars as u128 {
        acc = acc * (degree as u128 + k) / k;
    }
    acc as usize
}
