//! Free-data census: which Christoffel symbols or metric components are
//! arbitrary, which are solved for by a Cauchy-Kowalevski system, and which
//! are determined algebraically. Slot ids are one-based.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Construction {
    #[serde(rename = "general")]
    General,
    #[serde(rename = "trace-free-torsion")]
    TraceFreeTorsion,
    #[serde(rename = "torsion-free")]
    TorsionFree,
    #[serde(rename = "metric-2d")]
    Metric2d,
    #[serde(rename = "statistical-2d")]
    Statistical2d,
    #[serde(rename = "trace-free-statistical-2d")]
    TraceFreeStatistical2d,
    #[serde(rename = "statistical")]
    Statistical,
}

impl Construction {
    pub const ALL: [Construction; 7] = [
        Construction::General,
        Construction::TraceFreeTorsion,
        Construction::TorsionFree,
        Construction::Metric2d,
        Construction::Statistical2d,
        Construction::TraceFreeStatistical2d,
        Construction::Statistical,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Construction::General => "general",
            Construction::TraceFreeTorsion => "trace-free-torsion",
            Construction::TorsionFree => "torsion-free",
            Construction::Metric2d => "metric-2d",
            Construction::Statistical2d => "statistical-2d",
            Construction::TraceFreeStatistical2d => "trace-free-statistical-2d",
            Construction::Statistical => "statistical",
        }
    }

    /// Whether the construction outputs a connection with `Γ^k_{ij} = Γ^k_{ji}`
    /// and labels only `i <= j`.
    pub fn symmetric_connection(self) -> bool {
        matches!(self, Construction::TorsionFree | Construction::Statistical)
    }

    /// `Ok` iff the construction is defined in dimension `n`.
    pub fn check_dimension(self, n: usize) -> Result<()> {
        let reason = match self {
            Construction::General | Construction::TorsionFree if n < 2 => "needs n >= 2",
            Construction::TraceFreeTorsion if n < 3 => {
                "for n = 2 a vanishing torsion trace forces vanishing torsion; needs n >= 3"
            }
            Construction::Statistical if n < 3 => "needs n >= 3; use statistical-2d",
            Construction::Metric2d
            | Construction::Statistical2d
            | Construction::TraceFreeStatistical2d
                if n != 2 =>
            {
                "defined for n = 2 only"
            }
            _ => return Ok(()),
        };
        Err(Error::Unsupported {
            tag: self.tag().into(),
            n,
            reason: reason.into(),
        })
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Construction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Construction::ALL
            .into_iter()
            .find(|c| c.tag() == s)
            .ok_or_else(|| Error::Parse(format!("unknown construction {s:?}")))
    }
}

/// Zero-based symbol coordinates `(k, i, j)` for `Γ^k_{ij}`.
pub type Symbol = (usize, usize, usize);

pub fn gamma_label((k, i, j): Symbol) -> String {
    format!("gamma[{};{},{}]", k + 1, i + 1, j + 1)
}

pub fn metric_label(i: usize, j: usize) -> String {
    format!("g[{},{}]", i.min(j) + 1, i.max(j) + 1)
}

fn parse_indices(body: &str, count: usize, seps: &[char]) -> Option<Vec<usize>> {
    let v = body
        .split(|c| seps.contains(&c))
        .map(|t| t.parse::<usize>().ok().filter(|&i| i >= 1).map(|i| i - 1))
        .collect::<Option<Vec<_>>>()?;
    (v.len() == count).then_some(v)
}

/// Inverse of [`metric_label`], 0-based.
pub(crate) fn parse_metric_label(s: &str) -> Option<(usize, usize)> {
    let v = parse_indices(s.strip_prefix("g[")?.strip_suffix(']')?, 2, &[','])?;
    Some((v[0], v[1]))
}

/// Inverse of [`gamma_label`], 0-based.
pub(crate) fn parse_gamma_label(s: &str) -> Option<Symbol> {
    let v = parse_indices(s.strip_prefix("gamma[")?.strip_suffix(']')?, 3, &[';', ','])?;
    // Reject "k,i,j" where "k;i,j" is required.
    s.contains(';').then_some((v[0], v[1], v[2]))
}

pub const GAUGE_SLOT: &str = "phi";
pub const CONFORMAL_SLOT: &str = "h";
pub const CONFORMAL_DERIV_SLOT: &str = "h_1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub construction: Construction,
    pub n: usize,
    pub free_functions: Vec<String>,
    pub initial_slices: Vec<String>,
    pub unknowns: Vec<String>,
    pub determined: Vec<String>,
}

/// Symbols split by role. `free` and `determined` are in canonical order; for
/// symmetric constructions only `i <= j` appears.
#[derive(Clone, Debug)]
pub(crate) struct SymbolRoles {
    pub unknowns: Vec<Symbol>,
    pub determined: Vec<Symbol>,
    pub free: Vec<Symbol>,
}

fn all_symbols(n: usize, symmetric: bool) -> Vec<Symbol> {
    let mut out = Vec::new();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if !symmetric || i <= j {
                    out.push((k, i, j));
                }
            }
        }
    }
    out
}

pub(crate) fn canonical((k, i, j): Symbol) -> Symbol {
    (k, i.min(j), i.max(j))
}

fn roles(unknowns: Vec<Symbol>, determined: Vec<Symbol>, n: usize, symmetric: bool) -> SymbolRoles {
    let free = all_symbols(n, symmetric)
        .into_iter()
        .filter(|s| !unknowns.contains(s) && !determined.contains(s))
        .collect();
    SymbolRoles {
        unknowns,
        determined,
        free,
    }
}

/// Unknowns shared by the general and trace-free builders: `Γⁿ_{nj}` paired
/// with `Ric_{1j}`, then `Γ¹_{ij}` (`i >= 2`) paired with `Ric_{ij}`.
pub(crate) fn general_unknowns(n: usize) -> Vec<Symbol> {
    let last = n - 1;
    let mut out: Vec<Symbol> = (0..n).map(|j| (last, last, j)).collect();
    for i in 1..n {
        for j in 0..n {
            out.push((0, i, j));
        }
    }
    out
}

/// Symbols fixed by the vanishing of the torsion trace: `Γ^{k+1}_{k,k+1}`
/// from `τ_k = 0` and `Γ^{n−1}_{n,n−1}` from `τ_n = 0`.
pub(crate) fn trace_free_determined(n: usize) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = (0..n - 1).map(|k| (k + 1, k, k + 1)).collect();
    out.push((n - 2, n - 1, n - 2));
    out
}

/// `Γ²_{12}`, `Γ¹_{1i}` (`i > 1`), `Γ¹_{ij}` (`1 < i <= j`), in the order of
/// the symmetric Ricci equations `s_{11}`, `s_{1i}`, `s_{ij}`.
pub(crate) fn torsion_free_unknowns(n: usize) -> Vec<Symbol> {
    let mut out = vec![(1, 0, 1)];
    for i in 1..n {
        out.push((0, 0, i));
    }
    for i in 1..n {
        for j in i..n {
            out.push((0, i, j));
        }
    }
    out
}

/// `Γ¹_{11}` and `Γ^k_{kk}` for `k >= 2`, fixed by the divergence form.
pub(crate) fn torsion_free_determined(n: usize) -> Vec<Symbol> {
    (0..n).map(|k| (k, k, k)).collect()
}

/// One algebraic equation of the statistical elimination, written as
/// `(g_{a})_{p} − (g_{b})_{q} + Σ_l g_{x l} Γ^l_{s} − Σ_l g_{y l} Γ^l_{t} = 0`,
/// with the symbol it determines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatisticalEquation {
    pub plus_derivative: ((usize, usize), usize),
    pub minus_derivative: ((usize, usize), usize),
    pub plus_contraction: (usize, (usize, usize)),
    pub minus_contraction: (usize, (usize, usize)),
    pub determines: Symbol,
}

/// The algebraic system in the order of its three families, each family in
/// the inverse-lexicographic order of its index tuples.
pub fn statistical_equations(n: usize) -> Vec<StatisticalEquation> {
    let mut out = Vec::new();
    // (g_1k)_j − (g_1j)_k + Σ g_jl Γ^l_1k − Σ g_kl Γ^l_1j = 0, 1 < k < j.
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 2..n {
        for k in 1..j {
            pairs.push((k, j));
        }
    }
    for (k, j) in pairs {
        out.push(StatisticalEquation {
            plus_derivative: ((0, k), j),
            minus_derivative: ((0, j), k),
            plus_contraction: (j, (0, k)),
            minus_contraction: (k, (0, j)),
            determines: canonical((j, 0, k)),
        });
    }
    // (g_ji)_i − (g_ii)_j − Σ g_jl Γ^l_ii + Σ g_il Γ^l_ji = 0, i, j >= 2, j != i.
    for i in 1..n {
        for j in 1..n {
            if j == i {
                continue;
            }
            out.push(StatisticalEquation {
                plus_derivative: ((j, i), i),
                minus_derivative: ((i, i), j),
                plus_contraction: (i, (j, i)),
                minus_contraction: (j, (i, i)),
                determines: (j, i, i),
            });
        }
    }
    // (g_jk)_i − (g_ik)_j − Σ g_jl Γ^l_ik + Σ g_il Γ^l_jk = 0,
    // 2 <= i < j, k ∉ {i, j}, i < k.
    for i in 1..n {
        for j in i + 1..n {
            for k in i + 1..n {
                if k == j {
                    continue;
                }
                out.push(StatisticalEquation {
                    plus_derivative: ((j, k), i),
                    minus_derivative: ((i, k), j),
                    plus_contraction: (i, (j, k)),
                    minus_contraction: (j, (i, k)),
                    determines: canonical((j, i, k)),
                });
            }
        }
    }
    out
}

/// Metric unknowns `g_{jk}`, `k <= j`, `(j, k) != (1, 1)`, as `(k, j)` pairs
/// ordered by `j` then `k`.
pub(crate) fn metric_unknowns(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 1..n {
        for k in 0..=j {
            out.push((k, j));
        }
    }
    out
}

pub(crate) fn symbol_roles(construction: Construction, n: usize) -> Result<SymbolRoles> {
    construction.check_dimension(n)?;
    let sym = construction.symmetric_connection();
    Ok(match construction {
        Construction::General => roles(general_unknowns(n), Vec::new(), n, sym),
        Construction::TraceFreeTorsion => {
            roles(general_unknowns(n), trace_free_determined(n), n, sym)
        }
        Construction::TorsionFree => {
            roles(torsion_free_unknowns(n), torsion_free_determined(n), n, sym)
        }
        Construction::Statistical => roles(
            Vec::new(),
            statistical_equations(n)
                .iter()
                .map(|e| e.determines)
                .collect(),
            n,
            sym,
        ),
        _ => SymbolRoles {
            unknowns: Vec::new(),
            determined: Vec::new(),
            free: Vec::new(),
        },
    })
}

pub fn census(construction: Construction, n: usize) -> Result<Census> {
    let roles = symbol_roles(construction, n)?;
    let labels = |v: &[Symbol]| v.iter().copied().map(gamma_label).collect::<Vec<_>>();
    let (free_functions, initial_slices, unknowns, determined) = match construction {
        Construction::General | Construction::TraceFreeTorsion => {
            let u = labels(&roles.unknowns);
            (labels(&roles.free), u.clone(), u, labels(&roles.determined))
        }
        Construction::TorsionFree => {
            let mut free = labels(&roles.free);
            free.push(GAUGE_SLOT.into());
            let u = labels(&roles.unknowns);
            (free, u.clone(), u, labels(&roles.determined))
        }
        Construction::Metric2d => (
            Vec::new(),
            vec![CONFORMAL_SLOT.into(), CONFORMAL_DERIV_SLOT.into()],
            vec![CONFORMAL_SLOT.into()],
            Vec::new(),
        ),
        Construction::Statistical2d => {
            let u = vec![metric_label(0, 1), metric_label(1, 1)];
            (vec![metric_label(0, 0)], u.clone(), u, Vec::new())
        }
        Construction::TraceFreeStatistical2d => {
            let u = vec![metric_label(0, 1), metric_label(1, 1)];
            (Vec::new(), u.clone(), u, vec![metric_label(0, 0)])
        }
        Construction::Statistical => {
            let mut free = vec![metric_label(0, 0)];
            free.extend(labels(&roles.free));
            let u: Vec<String> = metric_unknowns(n)
                .into_iter()
                .map(|(k, j)| metric_label(k, j))
                .collect();
            (free, u.clone(), u, labels(&roles.determined))
        }
    };
    Ok(Census {
        construction,
        n,
        free_functions,
        initial_slices,
        unknowns,
        determined,
    })
}
