//! First- and second-order Cauchy-Kowalevski systems solved at jet level by
//! Picard iteration in the `x¹` direction.
//!
//! A first-order system reads `∂₁Uⁱ = Hⁱ(x, U, ∂ⱼU (j ≥ 2))` with
//! `Uⁱ(0, x², …) = φⁱ`; a second-order one reads `∂₁∂₁Uⁱ = Hⁱ(…)` with the
//! additional data `∂₁Uⁱ(0, x², …) = ψⁱ`, and `H` may also consume `∂₁U` and
//! `∂ⱼ∂ₖU` for `k ≥ 2`.
//!
//! The right-hand side is an opaque closure over the current unknowns. It must
//! never differentiate an unknown along the direction it is solved for; this
//! is not checked statically, the residual check enforces it.

use crate::error::{Error, Result};
use crate::jet::{Jet, SliceJet};

/// Right-hand side: current unknowns (in label order) to the values `Hⁱ`.
pub type Evaluator<'a> = dyn Fn(&[Jet]) -> Result<Vec<Jet>> + 'a;

pub struct FirstOrderSystem<'a> {
    pub labels: Vec<String>,
    pub initial: Vec<SliceJet>,
    pub rhs: Box<Evaluator<'a>>,
}

pub struct SecondOrderSystem<'a> {
    pub labels: Vec<String>,
    pub initial: Vec<SliceJet>,
    pub initial_deriv: Vec<SliceJet>,
    pub rhs: Box<Evaluator<'a>>,
}

#[derive(Clone, Debug)]
pub struct CkSolution {
    pub labels: Vec<String>,
    pub values: Vec<Jet>,
    pub valid_order: usize,
    /// Number of Picard sweeps performed before the iterate became stationary.
    pub iterations: usize,
}

impl CkSolution {
    pub fn get(&self, label: &str) -> Option<&Jet> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.values[i])
    }
}

/// Residual jets per label together with the order they were checked to.
#[derive(Clone, Debug)]
pub struct Residual {
    pub labels: Vec<String>,
    pub jets: Vec<Jet>,
    pub order: usize,
}

impl Residual {
    pub fn vanishes(&self) -> bool {
        self.jets.iter().all(|j| j.is_zero_to(self.order))
    }
}

fn shape_of(labels: &[String], slices: &[&[SliceJet]]) -> Result<(usize, usize)> {
    let first = slices
        .iter()
        .flat_map(|s| s.iter())
        .next()
        .ok_or_else(|| Error::Mismatch("system without unknowns".into()))?;
    let (n, degree) = (first.target_nvars(), first.degree());
    if n == 0 {
        return Err(Error::Mismatch("slices need at least one variable".into()));
    }
    for s in slices {
        if s.len() != labels.len() {
            return Err(Error::Mismatch(format!(
                "{} labels but {} initial slices",
                labels.len(),
                s.len()
            )));
        }
        for j in s.iter() {
            if j.target_nvars() != n || j.degree() != degree {
                return Err(Error::Mismatch(
                    "initial slices disagree in dimension or degree".into(),
                ));
            }
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::Mismatch(format!("duplicate unknown label {l}")));
        }
    }
    Ok((n, degree))
}

fn evaluate(rhs: &Evaluator, values: &[Jet], iteration: usize) -> Result<Vec<Jet>> {
    let out = rhs(values).map_err(|e| Error::Evaluator {
        iteration,
        source: Box::new(e),
    })?;
    if out.len() != values.len() {
        return Err(Error::Evaluator {
            iteration,
            source: Box::new(Error::Mismatch(format!(
                "right-hand side returned {} values for {} unknowns",
                out.len(),
                values.len()
            ))),
        });
    }
    for (h, u) in out.iter().zip(values) {
        if !h.same_shape(u) {
            return Err(Error::Evaluator {
                iteration,
                source: Box::new(Error::Mismatch("right-hand side jet shape".into())),
            });
        }
    }
    Ok(out)
}

fn stationary(a: &[Jet], b: &[Jet]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.agrees_to(y, x.degree()))
}

fn min_valid(values: &[Jet]) -> usize {
    values.iter().map(Jet::valid_order).min().unwrap_or(0)
}

/// One Picard sweep `U ← promote(φ) + ∫ H(U)`.
fn first_order_sweep(
    sys: &FirstOrderSystem,
    base: &[Jet],
    current: &[Jet],
    iteration: usize,
) -> Result<Vec<Jet>> {
    let h = evaluate(&*sys.rhs, current, iteration)?;
    Ok(base
        .iter()
        .zip(&h)
        .map(|(b, h)| b + &h.antiderivative_x1())
        .collect())
}

/// Solves a first-order system. Sweep `t` fixes all monomials of `x¹`-degree
/// `≤ t`, so `D + 1` sweeps reach the full workspace; the loop stops early
/// once an iterate reproduces itself exactly, which is then a fixed point.
pub fn solve_first_order(sys: &FirstOrderSystem) -> Result<CkSolution> {
    let (_, degree) = shape_of(&sys.labels, &[&sys.initial])?;
    let base: Vec<Jet> = sys.initial.iter().map(SliceJet::promote).collect();
    let mut current = base.clone();
    let mut iterations = 0;
    for t in 0..=degree {
        let next = first_order_sweep(sys, &base, &current, t)?;
        iterations = t + 1;
        let done = stationary(&next, &current);
        current = next;
        if done {
            break;
        }
    }
    Ok(CkSolution {
        labels: sys.labels.clone(),
        valid_order: min_valid(&current),
        values: current,
        iterations,
    })
}

/// All Picard iterates `U⁰ = promote(φ), U¹, …, U^count` without early exit.
pub fn first_order_iterates(sys: &FirstOrderSystem, count: usize) -> Result<Vec<Vec<Jet>>> {
    shape_of(&sys.labels, &[&sys.initial])?;
    let base: Vec<Jet> = sys.initial.iter().map(SliceJet::promote).collect();
    let mut out = vec![base.clone()];
    for t in 0..count {
        let next = first_order_sweep(sys, &base, out.last().expect("non-empty"), t)?;
        out.push(next);
    }
    Ok(out)
}

fn second_order_sweep(
    sys: &SecondOrderSystem,
    base: &[Jet],
    current: &[Jet],
    iteration: usize,
) -> Result<Vec<Jet>> {
    let h = evaluate(&*sys.rhs, current, iteration)?;
    Ok(base
        .iter()
        .zip(&h)
        .map(|(b, h)| b + &h.antiderivative_x1().antiderivative_x1())
        .collect())
}

/// Solves a second-order system by `U ← promote(φ) + x¹·promote(ψ) + ∬ H(U)`.
///
/// When `H` depends on `∂₁U` a sweep gains a single `x¹`-degree, so up to
/// `D + 1` sweeps are run, again stopping at the first exact fixed point.
pub fn solve_second_order(sys: &SecondOrderSystem) -> Result<CkSolution> {
    let (_, degree) = shape_of(&sys.labels, &[&sys.initial, &sys.initial_deriv])?;
    let base: Vec<Jet> = sys
        .initial
        .iter()
        .zip(&sys.initial_deriv)
        .map(|(phi, psi)| &phi.promote() + &psi.promote().shift_x1())
        .collect();
    let mut current = base.clone();
    let mut iterations = 0;
    for t in 0..=degree {
        let next = second_order_sweep(sys, &base, &current, t)?;
        iterations = t + 1;
        let done = stationary(&next, &current);
        current = next;
        if done {
            break;
        }
    }
    Ok(CkSolution {
        labels: sys.labels.clone(),
        valid_order: min_valid(&current),
        values: current,
        iterations,
    })
}

/// `∂₁U − H(U)` per label.
pub fn residual_first_order(
    sys: &FirstOrderSystem,
    values: &[Jet],
    order: usize,
) -> Result<Residual> {
    let h = evaluate(&*sys.rhs, values, 0)?;
    let jets = values.iter().zip(&h).map(|(u, h)| &u.d(0) - h).collect();
    Ok(Residual {
        labels: sys.labels.clone(),
        jets,
        order,
    })
}

/// `∂₁∂₁U − H(U)` per label.
pub fn residual_second_order(
    sys: &SecondOrderSystem,
    values: &[Jet],
    order: usize,
) -> Result<Residual> {
    let h = evaluate(&*sys.rhs, values, 0)?;
    let jets = values
        .iter()
        .zip(&h)
        .map(|(u, h)| &u.d(0).d(0) - h)
        .collect();
    Ok(Residual {
        labels: sys.labels.clone(),
        jets,
        order,
    })
}

/// Checks `restrict_x1(U) = φ` exactly (and `restrict_x1(∂₁U) = ψ` when given).
pub fn initial_data_holds(
    values: &[Jet],
    initial: &[SliceJet],
    initial_deriv: Option<&[SliceJet]>,
) -> bool {
    let phi_ok = values
        .iter()
        .zip(initial)
        .all(|(u, phi)| u.restrict_x1().jet().agrees_to(phi.jet(), u.degree()));
    let psi_ok = match initial_deriv {
        None => true,
        Some(psi) => values.iter().zip(psi).all(|(u, psi)| {
            // ∂₁U has no coefficient at degree D; compare below it.
            u.d(0)
                .restrict_x1()
                .jet()
                .agrees_to(psi.jet(), u.degree().saturating_sub(1))
        }),
    };
    phi_ok && psi_ok
}
