//! Metrics making a given connection Codazzi (2D), trace-free statistical
//! structures (2D), and statistical structures in dimension `n >= 3`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::census::{
    canonical, census, gamma_label, metric_label, metric_unknowns, parse_gamma_label,
    parse_metric_label, statistical_equations, symbol_roles, Construction, StatisticalEquation,
    Symbol,
};
use super::free_data::FreeData;
use super::report::BuildReport;
use crate::ck::{solve_first_order, FirstOrderSystem};
use crate::error::{Error, Result};
use crate::geometry::{linalg, parallel_volume_2d, Bilinear, Connection, Metric};
use crate::jet::{Jet, SliceJet};

fn require_constant(what: &str, j: &Jet, want_one: bool) -> Result<()> {
    let c = j.constant_term();
    let ok = if want_one { c.is_one() } else { c.is_zero() };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{what} must equal {} at 0",
            if want_one { 1 } else { 0 }
        )))
    }
}

/// Right-hand sides of the two Codazzi equations in 2D, solved for
/// `(g₁₂)₁` and `(g₂₂)₁`. Derived from `(∇g)₁₂₁ = (∇g)₂₁₁` and
/// `(∇g)₁₂₂ = (∇g)₂₁₂` without assuming the connection torsion-free:
///
/// `(g₁₂)₁ = (g₁₁)₂ − 2Γ^l₂₁ g_{l1} + Γ^l₁₂ g_{l1} + Γ^l₁₁ g_{2l}`
/// `(g₂₂)₁ = (g₁₂)₂ + 2Γ^l₁₂ g_{l2} − Γ^l₂₁ g_{l2} − Γ^l₂₂ g_{1l}`
fn codazzi_2d_rhs(c: &Connection, g11: &Jet, g12: &Jet, g22: &Jet) -> Vec<Jet> {
    let g = [[g11, g12], [g12, g22]];
    let contract = |a: usize, b: usize, slot: usize, row_first: bool| -> Jet {
        let mut acc = Jet::zero(2, g11.degree());
        for l in 0..2 {
            let gamma = c.get(l, a, b);
            if gamma.is_zero() {
                continue;
            }
            let m = if row_first { g[l][slot] } else { g[slot][l] };
            acc = &acc + &(gamma * m);
        }
        acc
    };
    let first = &(&(&g11.d(1) - &contract(1, 0, 0, true).scale_int(2)) + &contract(0, 1, 0, true))
        + &contract(0, 0, 1, false);
    let second = &(&(&g12.d(1) + &contract(0, 1, 1, true).scale_int(2)) - &contract(1, 0, 1, true))
        - &contract(1, 1, 0, false);
    vec![first, second]
}

fn check_2d_slices(c: &Connection, init12: &SliceJet, init22: &SliceJet) -> Result<usize> {
    if c.n() != 2 {
        return Err(Error::Unsupported {
            tag: "statistical-2d".into(),
            n: c.n(),
            reason: "defined for n = 2 only".into(),
        });
    }
    let d = c.degree();
    for s in [init12, init22] {
        if s.target_nvars() != 2 || s.degree() != d {
            return Err(Error::Mismatch(
                "initial slices must match the connection".into(),
            ));
        }
    }
    require_constant("g12", init12.jet(), false)?;
    require_constant("g22", init22.jet(), true)?;
    Ok(d)
}

/// A metric `g` with `∇g` totally symmetric for an arbitrary (possibly
/// torsionful) 2D connection, given `g₁₁` and the slices of `g₁₂`, `g₂₂`.
pub fn build_statistical_2d(
    c: &Connection,
    g11: &Jet,
    init12: &SliceJet,
    init22: &SliceJet,
) -> Result<BuildReport> {
    let d = check_2d_slices(c, init12, init22)?;
    if g11.nvars() != 2 || g11.degree() != d {
        return Err(Error::Mismatch("g11 must match the connection".into()));
    }
    require_constant("g11", g11, true)?;
    let sys = FirstOrderSystem {
        labels: vec![metric_label(0, 1), metric_label(1, 1)],
        initial: vec![init12.clone(), init22.clone()],
        rhs: Box::new(|u: &[Jet]| Ok(codazzi_2d_rhs(c, g11, &u[0], &u[1]))),
    };
    let sol = solve_first_order(&sys)?;
    let (g12, g22) = (&sol.values[0], &sol.values[1]);
    let g = Metric::new(Bilinear::from_fn(2, |i, j| match (i, j) {
        (0, 0) => g11.clone(),
        (1, 1) => g22.clone(),
        _ => g12.clone(),
    }))?;
    let fd = FreeData::new()
        .with_function(metric_label(0, 0), g11.clone())
        .with_slice(metric_label(0, 1), init12.clone())
        .with_slice(metric_label(1, 1), init22.clone());
    BuildReport::for_statistical(
        Construction::Statistical2d,
        Some(c.clone()),
        fd,
        None,
        g,
        None,
        sol.iterations,
    )
}

/// [`build_statistical_2d`] with `g₁₁` and the slices read from free data.
pub fn build_statistical_2d_from_free_data(c: &Connection, fd: &FreeData) -> Result<BuildReport> {
    fd.validate(&census(Construction::Statistical2d, c.n())?)?;
    build_statistical_2d(
        c,
        fd.function(&metric_label(0, 0))?,
        fd.slice(&metric_label(0, 1))?,
        fd.slice(&metric_label(1, 1))?,
    )
}

/// [`build_trace_free_statistical_2d`] with the slices read from free data.
pub fn build_trace_free_statistical_2d_from_free_data(
    c: &Connection,
    fd: &FreeData,
) -> Result<BuildReport> {
    fd.validate(&census(Construction::TraceFreeStatistical2d, c.n())?)?;
    build_trace_free_statistical_2d(
        c,
        fd.slice(&metric_label(0, 1))?,
        fd.slice(&metric_label(1, 1))?,
    )
}

/// `g₁₁ = (ν² + g₁₂²) / g₂₂`, so that `det g = ν²`.
fn volume_g11(nu_sq: &Jet, g12: &Jet, g22: &Jet) -> Result<Jet> {
    (nu_sq + &(g12 * g12)).checked_div(g22)
}

/// A trace-free statistical structure `(g, ∇)` for a torsion-free 2D
/// connection with symmetric Ricci tensor: `∇g` symmetric and the metric
/// volume form equal to the `∇`-parallel one normalized at 0.
pub fn build_trace_free_statistical_2d(
    c: &Connection,
    init12: &SliceJet,
    init22: &SliceJet,
) -> Result<BuildReport> {
    check_2d_slices(c, init12, init22)?;
    if !c.is_symmetric() {
        return Err(Error::Precondition("connection has torsion".into()));
    }
    let nu = parallel_volume_2d(c)?;
    let nu_sq = &nu * &nu;
    let sys = FirstOrderSystem {
        labels: vec![metric_label(0, 1), metric_label(1, 1)],
        initial: vec![init12.clone(), init22.clone()],
        rhs: Box::new(|u: &[Jet]| {
            let g11 = volume_g11(&nu_sq, &u[0], &u[1])?;
            Ok(codazzi_2d_rhs(c, &g11, &u[0], &u[1]))
        }),
    };
    let sol = solve_first_order(&sys)?;
    let (g12, g22) = (&sol.values[0], &sol.values[1]);
    let g11 = volume_g11(&nu_sq, g12, g22)?;
    let g = Metric::new(Bilinear::from_fn(2, |i, j| match (i, j) {
        (0, 0) => g11.clone(),
        (1, 1) => g22.clone(),
        _ => g12.clone(),
    }))?;
    let fd = FreeData::new()
        .with_slice(metric_label(0, 1), init12.clone())
        .with_slice(metric_label(1, 1), init22.clone());
    BuildReport::for_statistical(
        Construction::TraceFreeStatistical2d,
        Some(c.clone()),
        fd,
        None,
        g,
        Some(nu),
        sol.iterations,
    )
}

/// Metric matrix from `g₁₁` and the CK unknowns in [`metric_unknowns`] order.
fn assemble_metric(n: usize, g11: &Jet, values: &[Jet], pairs: &[(usize, usize)]) -> Vec<Vec<Jet>> {
    let mut g = vec![vec![Jet::zero(n, g11.degree()); n]; n];
    g[0][0] = g11.clone();
    for (v, &(k, j)) in values.iter().zip(pairs) {
        g[k][j] = v.clone();
        g[j][k] = v.clone();
    }
    g
}

/// Linear system `A γ = b` for the determined symbols, one row per equation.
pub struct EliminationSystem {
    pub matrix: Vec<Vec<Jet>>,
    pub rhs: Vec<Jet>,
}

/// Rows of the algebraic system at metric `g` and free symbols `free`.
pub fn elimination_system(
    g: &[Vec<Jet>],
    free: &BTreeMap<Symbol, Jet>,
    equations: &[StatisticalEquation],
) -> EliminationSystem {
    let n = g.len();
    let degree = g[0][0].degree();
    let column: BTreeMap<Symbol, usize> = equations
        .iter()
        .enumerate()
        .map(|(i, e)| (e.determines, i))
        .collect();
    let mut matrix = vec![vec![Jet::zero(n, degree); equations.len()]; equations.len()];
    let mut rhs = Vec::with_capacity(equations.len());
    for (row, e) in equations.iter().enumerate() {
        let ((pa, pb), paxis) = e.plus_derivative;
        let ((ma, mb), maxis) = e.minus_derivative;
        let mut known = &g[pa][pb].d(paxis) - &g[ma][mb].d(maxis);
        for (sign, (x, (s, t))) in [(1, e.plus_contraction), (-1, e.minus_contraction)] {
            for l in 0..n {
                let coeff = g[x][l].scale_int(sign);
                let sym = canonical((l, s, t));
                match column.get(&sym) {
                    Some(&col) => matrix[row][col] = &matrix[row][col] + &coeff,
                    None => {
                        let v = &free[&sym];
                        if !v.is_zero() {
                            known = &known + &(&coeff * v);
                        }
                    }
                }
            }
        }
        rhs.push(-known);
    }
    EliminationSystem { matrix, rhs }
}

fn solve_determined(
    g: &[Vec<Jet>],
    free: &BTreeMap<Symbol, Jet>,
    equations: &[StatisticalEquation],
) -> Result<BTreeMap<Symbol, Jet>> {
    let sys = elimination_system(g, free, equations);
    let b = sys.rhs.into_iter().map(|v| vec![v]).collect();
    let x = linalg::solve(sys.matrix, b)?;
    Ok(equations
        .iter()
        .zip(x)
        .map(|(e, mut col)| (e.determines, col.pop().expect("one column")))
        .collect())
}

fn symbol_table(n: usize, free: &BTreeMap<Symbol, Jet>, det: &BTreeMap<Symbol, Jet>) -> Connection {
    Connection::symmetric_from_fn(n, |k, i, j| {
        let s = (k, i, j);
        free.get(&s)
            .or_else(|| det.get(&s))
            .expect("every symbol has a role")
            .clone()
    })
}

/// Statistical structure in dimension `n >= 3` from `g₁₁`, the free
/// Christoffel symbols and the initial slices of the other `g_{jk}`.
pub fn build_statistical_nd(n: usize, fd: &FreeData) -> Result<BuildReport> {
    let census = census(Construction::Statistical, n)?;
    fd.validate(&census)?;
    let roles = symbol_roles(Construction::Statistical, n)?;
    let g11 = fd.function(&metric_label(0, 0))?.clone();
    require_constant("g11", &g11, true)?;
    let pairs = metric_unknowns(n);
    let mut slices = Vec::with_capacity(pairs.len());
    for &(k, j) in &pairs {
        let s = fd.slice(&metric_label(k, j))?;
        require_constant(&metric_label(k, j), s.jet(), k == j)?;
        slices.push(s.clone());
    }
    let free: BTreeMap<Symbol, Jet> = roles
        .free
        .iter()
        .map(|&s| Ok((s, fd.function(&gamma_label(s))?.clone())))
        .collect::<Result<_>>()?;
    let equations = statistical_equations(n);

    let rhs = |values: &[Jet]| -> Result<Vec<Jet>> {
        let g = assemble_metric(n, &g11, values, &pairs);
        let det = solve_determined(&g, &free, &equations)?;
        let gamma = |l: usize, i: usize, j: usize| {
            let s = canonical((l, i, j));
            free.get(&s)
                .or_else(|| det.get(&s))
                .expect("every symbol has a role")
        };
        // (g_jk)_1 = (g_1k)_j + Σ_l g_jl Γ^l_1k − Σ_l g_1l Γ^l_jk.
        Ok(pairs
            .iter()
            .map(|&(k, j)| {
                let mut acc = g[0][k].d(j);
                for l in 0..n {
                    let a = gamma(l, 0, k);
                    if !a.is_zero() {
                        acc = &acc + &(&g[j][l] * a);
                    }
                    let b = gamma(l, j, k);
                    if !b.is_zero() {
                        acc = &acc - &(&g[0][l] * b);
                    }
                }
                acc
            })
            .collect())
    };
    let sys = FirstOrderSystem {
        labels: pairs.iter().map(|&(k, j)| metric_label(k, j)).collect(),
        initial: slices,
        rhs: Box::new(rhs),
    };
    let sol = solve_first_order(&sys)?;
    let g = assemble_metric(n, &g11, &sol.values, &pairs);
    let det = solve_determined(&g, &free, &equations)?;
    let conn = symbol_table(n, &free, &det);
    let metric = Metric::new(Bilinear::from_fn(n, |i, j| g[i][j].clone()))?;
    BuildReport::for_statistical(
        Construction::Statistical,
        None,
        fd.clone(),
        Some(conn),
        metric,
        None,
        sol.iterations,
    )
}

/// Free data reproducing a known statistical pair `(g, ∇)` under any of the
/// three statistical constructions.
pub fn free_data_from_statistical(
    construction: Construction,
    g: &Metric,
    conn: &Connection,
) -> Result<FreeData> {
    let census = census(construction, g.n())?;
    let mut fd = FreeData::new();
    for slot in &census.free_functions {
        let f = match parse_metric_label(slot) {
            Some((i, j)) => g.get(i, j),
            None => {
                let (k, i, j) = parse_gamma_label(slot)
                    .ok_or_else(|| Error::SlotMismatch(format!("unexpected slot {slot}")))?;
                conn.get(k, i, j)
            }
        };
        fd = fd.with_function(slot.clone(), f.clone());
    }
    for slot in &census.initial_slices {
        let (i, j) = parse_metric_label(slot)
            .ok_or_else(|| Error::SlotMismatch(format!("unexpected slot {slot}")))?;
        fd = fd.with_slice(slot.clone(), g.get(i, j).restrict_x1());
    }
    fd.validate(&census)?;
    Ok(fd)
}
