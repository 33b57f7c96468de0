//! Degree-by-degree coefficient extraction for two nonlinear CK systems in
//! two variables, written against [`Poly`] only. With `U = Σ_k c_k(x²)(x¹)^k`
//! the equations fix each `c_{k+1}` (resp. `c_{k+2}`) from lower ones.
#![allow(dead_code)]

use ckgeom::jet::int;
use ckgeom::Rational;

use super::Poly;

fn assemble(cs: &[Poly], d: usize) -> Poly {
    let mut u = Poly::zero(2);
    for (k, c) in cs.iter().enumerate() {
        u = u.add(&c.lift_x1(k as u32));
    }
    u.truncate(d)
}

/// `(U)₁ = U (U)₂`, `U(0, x²) = φ`: `(k+1) c_{k+1} = Σ_{a+b=k} c_a c_b'`.
pub fn burgers_like(phi: &Poly, d: usize) -> Poly {
    let mut cs = vec![phi.truncate(d)];
    for k in 0..d {
        let mut rhs = Poly::zero(1);
        for a in 0..=k {
            rhs = rhs.add(&cs[a].mul(&cs[k - a].deriv(0)));
        }
        let next = rhs.scale(&(Rational::from_integer(1.into()) / int(k as i64 + 1)));
        cs.push(next.truncate(d - k - 1));
    }
    assemble(&cs, d)
}

/// `(U)₁₁ = U (U)₂₂`, `U(0, x²) = φ`, `(U)₁(0, x²) = ψ`:
/// `(k+2)(k+1) c_{k+2} = Σ_{a+b=k} c_a c_b''`.
pub fn wave_like(phi: &Poly, psi: &Poly, d: usize) -> Poly {
    let mut cs = vec![phi.truncate(d), psi.truncate(d.saturating_sub(1))];
    for k in 0..d.saturating_sub(1) {
        let mut rhs = Poly::zero(1);
        for a in 0..=k {
            rhs = rhs.add(&cs[a].mul(&cs[k - a].deriv(0).deriv(0)));
        }
        let den = int(((k + 2) * (k + 1)) as i64);
        cs.push(rhs.scale(&(int(1) / den)).truncate(d - k - 2));
    }
    assemble(&cs, d)
}
