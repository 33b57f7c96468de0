//! Two-dimensional metrics with prescribed diagonal Ricci tensor `r`.
//!
//! Any such metric is `g = h r`, and for the Levi-Civita connection of a 2D
//! metric `Ric = f g` with `f` the sectional curvature, so `Ric = r` reduces
//! to `f h = 1`. In `f` the second derivative `(h)_{11}` enters only through
//! `(g_{22})_{11}`, with coefficient `−1/(2 h² r_{11})`; writing `f = f' −
//! (h)_{11} / (2 h² r_{11})` gives `(h)_{11} = 2 h r_{11} (h f' − 1)`.

use num_traits::Zero;

use super::census::{CONFORMAL_DERIV_SLOT, CONFORMAL_SLOT};
use super::free_data::FreeData;
use super::report::BuildReport;
use crate::ck::{solve_second_order, SecondOrderSystem};
use crate::error::{Error, Result};
use crate::geometry::{Bilinear, Metric};
use crate::jet::{int, rat, Jet, SliceJet};

fn check_inputs(r: &Bilinear, phi: &SliceJet, psi: &SliceJet) -> Result<usize> {
    if r.n() != 2 {
        return Err(Error::Unsupported {
            tag: "metric-2d".into(),
            n: r.n(),
            reason: "defined for n = 2 only".into(),
        });
    }
    let d = r.degree();
    for s in [phi, psi] {
        if s.target_nvars() != 2 || s.degree() != d {
            return Err(Error::Mismatch(
                "initial data must be one-variable jets of the same degree as r".into(),
            ));
        }
    }
    if !r.get(0, 1).is_zero() || !r.get(1, 0).is_zero() {
        return Err(Error::Precondition(
            "prescribed tensor is not diagonal".into(),
        ));
    }
    if r.get(0, 0).constant_term().is_zero() || r.get(1, 1).constant_term().is_zero() {
        return Err(Error::Precondition(
            "prescribed tensor is degenerate at 0".into(),
        ));
    }
    if phi.jet().constant_term().is_zero() {
        return Err(Error::Precondition(
            "initial value of h vanishes at 0".into(),
        ));
    }
    Ok(d)
}

/// The right-hand side `(h)_{11} = 2 h r₁₁ (h f' − 1)`.
fn conformal_rhs(h: &Jet, r11: &Jet, r22: &Jet) -> Result<Jet> {
    let e = h * r11;
    let g = h * r22;
    let ie = e.reciprocal()?;
    let ig = g.reciprocal()?;
    let (e1, e2, g1, g2) = (e.d(0), e.d(1), g.d(0), g.d(1));
    let h1 = h.d(0);
    // (g₂₂)₁₁ without its (h)₁₁ r₂₂ term.
    let g11_reduced = &(&h1 * &r22.d(0)).scale_int(2) + &(h * &r22.d(0).d(0));
    let second = &e.d(1).d(1) + &g11_reduced;
    let a = (&ie * &ig * second).scale(&rat(-1, 2));
    let b = (&ie * &ig * &ig * (&(&g2 * &e2) + &(&g1 * &g1))).scale(&rat(1, 4));
    let c = (&ie * &ie * &ig * (&(&e1 * &g1) + &(&e2 * &e2))).scale(&rat(1, 4));
    let f_reduced = a + b + c;
    let inner = (h * &f_reduced).add_constant(&int(-1));
    Ok((h * r11 * inner).scale_int(2))
}

/// Metric `g = h r` with Levi-Civita Ricci tensor `r`, for `h(0, x²) = φ`,
/// `(h)_1(0, x²) = ψ`.
pub fn build_metric_2d_prescribed_ricci(
    r: &Bilinear,
    phi: &SliceJet,
    psi: &SliceJet,
) -> Result<BuildReport> {
    check_inputs(r, phi, psi)?;
    let (r11, r22) = (r.get(0, 0).clone(), r.get(1, 1).clone());
    let sys = SecondOrderSystem {
        labels: vec![CONFORMAL_SLOT.into()],
        initial: vec![phi.clone()],
        initial_deriv: vec![psi.clone()],
        rhs: Box::new(move |u: &[Jet]| Ok(vec![conformal_rhs(&u[0], &r11, &r22)?])),
    };
    let sol = solve_second_order(&sys)?;
    let h = sol.values[0].clone();
    let g = Metric::new(Bilinear::from_fn(2, |i, j| &h * r.get(i, j)))?;
    let fd = FreeData::new()
        .with_slice(CONFORMAL_SLOT, phi.clone())
        .with_slice(CONFORMAL_DERIV_SLOT, psi.clone());
    BuildReport::for_metric_2d(r.clone(), fd, h, g, sol.iterations)
}

/// Same construction with `φ`, `ψ` read from census-keyed free data.
pub fn build_metric_2d_from_free_data(r: &Bilinear, fd: &FreeData) -> Result<BuildReport> {
    let census = super::census::census(super::census::Construction::Metric2d, r.n())?;
    fd.validate(&census)?;
    build_metric_2d_prescribed_ricci(
        r,
        fd.slice(CONFORMAL_SLOT)?,
        fd.slice(CONFORMAL_DERIV_SLOT)?,
    )
}
