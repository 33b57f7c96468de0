//! Closedness tests and Poincaré-lemma primitives, stated through raw
//! coefficient identities so that no exterior-derivative convention leaks in.

use super::tensors::{OneForm, TwoForm};
use crate::error::{Error, Result};
use crate::jet::{rat, Jet};

/// `(a_{ij})_k + (a_{jk})_i + (a_{ki})_j = 0` to total degree `order` for
/// all `i < j < k`.
pub fn two_form_closed(a: &TwoForm, order: usize) -> bool {
    let n = a.n();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = &(&a.get(i, j).d(k) + &a.get(j, k).d(i)) + &a.get(k, i).d(j);
                if !s.is_zero_to(order) {
                    return false;
                }
            }
        }
    }
    true
}

/// `(d_i)_j = (d_j)_i` to total degree `order`.
pub fn one_form_closed(d: &OneForm, order: usize) -> bool {
    let n = d.n();
    (0..n).all(|i| (i + 1..n).all(|j| d.get(i).d(j).agrees_to(&d.get(j).d(i), order)))
}

/// A one-form `α` with `(α_i)_j − (α_j)_i = 2 a_{ij}`, given by the radial
/// homotopy `α_j = Σ_i x^i · 2 a_{ji}^{(m)} / (m + 2)`.
pub fn primitive_of_two_form(a: &TwoForm) -> Result<OneForm> {
    let n = a.n();
    let order = a.valid_order().saturating_sub(1);
    if !two_form_closed(a, order) {
        return Err(Error::NotClosedTwoForm { order });
    }
    let degree = a.get(0, 0).degree();
    let comps = (0..n)
        .map(|j| {
            let mut acc = Jet::zero(n, degree);
            for i in 0..n {
                if i != j {
                    acc = &acc + &a.get(j, i).radial_lift(i, |m| rat(2, m as i64 + 2));
                }
            }
            acc
        })
        .collect();
    Ok(OneForm::new(comps))
}

/// The potential `f` with `f(0) = 0` and `∂_k f = d_k`:
/// `f = Σ_i x^i d_i^{(m)} / (m + 1)`.
pub fn potential_of_one_form(d: &OneForm) -> Result<Jet> {
    let n = d.n();
    let order = d.valid_order().saturating_sub(1);
    if !one_form_closed(d, order) {
        return Err(Error::NotClosedOneForm { order });
    }
    let degree = d.get(0).degree();
    let mut acc = Jet::zero(n, degree);
    for i in 0..n {
        acc = &acc + &d.get(i).radial_lift(i, |m| rat(1, m as i64 + 1));
    }
    Ok(acc)
}
