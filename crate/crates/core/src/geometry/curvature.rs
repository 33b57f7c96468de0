use super::tensors::{Bilinear, Connection, OneForm, Torsion, TwoForm};
use crate::jet::{rat, Jet};

/// `D_j = Σ_k Γ^k_{kj}`.
pub fn divergence_form(c: &Connection) -> OneForm {
    let n = c.n();
    OneForm::new(
        (0..n)
            .map(|j| crate::jet::sum((0..n).map(|k| c.get(k, k, j))).expect("n >= 1"))
            .collect(),
    )
}

/// Linear part of the Ricci tensor, `Σ_k [(Γ^k_{ij})_k − (Γ^k_{kj})_i]`.
pub fn ricci_derivative_part(c: &Connection) -> Bilinear {
    let n = c.n();
    let div = divergence_form(c);
    Bilinear::from_fn(n, |i, j| {
        let first = crate::jet::sum(&(0..n).map(|k| c.get(k, i, j).d(k)).collect::<Vec<_>>())
            .expect("n >= 1");
        &first - &div.get(j).d(i)
    })
}

/// `Λ_{ij} = Σ_{k,l} [Γ^l_{kj} Γ^k_{il} − Γ^l_{ij} Γ^k_{kl}]`, the quadratic
/// terms moved to the right-hand side; `Ric = (derivative part) − Λ`.
pub fn lambda_term(c: &Connection) -> Bilinear {
    let n = c.n();
    let div = divergence_form(c);
    Bilinear::from_fn(n, |i, j| {
        let mut acc = Jet::zero(n, c.degree());
        for k in 0..n {
            for l in 0..n {
                let a = c.get(l, k, j);
                let b = c.get(k, i, l);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
        }
        for l in 0..n {
            let a = c.get(l, i, j);
            if !a.is_zero() {
                acc = &acc - &(a * div.get(l));
            }
        }
        acc
    })
}

/// `Ric_{ij} = Σ_k[(Γ^k_{ij})_k − (Γ^k_{kj})_i] + Σ_{k,l}[Γ^l_{ij}Γ^k_{kl} − Γ^l_{kj}Γ^k_{il}]`.
pub fn ricci(c: &Connection) -> Bilinear {
    let lin = ricci_derivative_part(c);
    let lam = lambda_term(c);
    lin.sub(&lam).expect("same dimension")
}

pub fn torsion(c: &Connection) -> Torsion {
    let n = c.n();
    let mut comps = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                comps.push(c.get(k, i, j) - c.get(k, j, i));
            }
        }
    }
    Torsion::new(n, comps)
}

/// `τ_j = Σ_i (Γ^i_{ij} − Γ^i_{ji})`.
pub fn torsion_trace(c: &Connection) -> OneForm {
    let n = c.n();
    OneForm::new(
        (0..n)
            .map(|j| {
                let mut acc = Jet::zero(n, c.degree());
                for i in 0..n {
                    acc = &acc + &(c.get(i, i, j) - c.get(i, j, i));
                }
                acc
            })
            .collect(),
    )
}

/// Symmetric and antisymmetric parts, `b = s + a`.
pub fn split(b: &Bilinear) -> (Bilinear, TwoForm) {
    let n = b.n();
    let half = rat(1, 2);
    let s = Bilinear::from_fn(n, |i, j| (b.get(i, j) + b.get(j, i)).scale(&half));
    let a = TwoForm::from_upper(n, b.degree(), |i, j| {
        (b.get(i, j) - b.get(j, i)).scale(&half)
    });
    (s, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::int;

    fn random_connection(seed: u64, n: usize, d: usize, symmetric: bool) -> Connection {
        let mut s = seed * 1000;
        let mut next = || {
            s += 1;
            Jet::random_poly(s, n, d, 3.min(d), 3)
        };
        if symmetric {
            Connection::symmetric_from_fn(n, |_, _, _| next())
        } else {
            Connection::from_fn(n, |_, _, _| next())
        }
    }

    #[test]
    fn zero_connection_is_flat() {
        let c = Connection::zero(3, 3);
        assert!(ricci(&c).is_zero_to(3));
        assert!(lambda_term(&c).is_zero_to(3));
        assert!(divergence_form(&c).jets().iter().all(Jet::is_zero));
    }

    #[test]
    fn single_symbol_example() {
        // Γ¹₁₁ = x², n = 2: only Ric₂₁ = −1 survives.
        let d = 3;
        let mut c = Connection::zero(2, d);
        c.set(0, 0, 0, Jet::variable(2, d, 1));
        let r = ricci(&c);
        assert_eq!(
            r.get(1, 0),
            &Jet::constant(2, d, int(-1)).with_valid_order(2)
        );
        assert!(r.get(0, 0).is_zero_to(2));
        assert!(r.get(0, 1).is_zero_to(2));
        assert!(r.get(1, 1).is_zero_to(2));
    }

    #[test]
    fn ricci_recomposes_from_parts() {
        for seed in 0..5 {
            let c = random_connection(seed, 3, 4, false);
            let lin = ricci_derivative_part(&c);
            let lam = lambda_term(&c);
            let r = ricci(&c);
            for i in 0..3 {
                for j in 0..3 {
                    assert!(r.get(i, j).agrees_to(&(lin.get(i, j) - lam.get(i, j)), 3));
                }
            }
        }
    }

    #[test]
    fn lambda_symmetric_for_torsion_free() {
        for seed in 0..5 {
            let c = random_connection(seed, 3, 4, true);
            assert!(lambda_term(&c).is_symmetric());
        }
    }

    #[test]
    fn torsion_examples() {
        let d = 2;
        let c = random_connection(1, 3, d, true);
        assert!(torsion_trace(&c).jets().iter().all(Jet::is_zero));
        assert!(torsion(&c).is_zero());

        let mut c = Connection::zero(2, d);
        c.set(0, 0, 1, Jet::variable(2, d, 0));
        let tau = torsion_trace(&c);
        assert!(tau.get(0).is_zero());
        assert_eq!(tau.get(1), &Jet::variable(2, d, 0));
    }

    #[test]
    fn torsion_trace_is_contraction_of_torsion() {
        for seed in 0..5 {
            let c = random_connection(seed, 3, 3, false);
            let t = torsion(&c);
            let tau = torsion_trace(&c);
            for j in 0..3 {
                let mut acc = Jet::zero(3, 3);
                for i in 0..3 {
                    acc = &acc + t.get(i, i, j);
                }
                assert_eq!(&acc, tau.get(j));
            }
        }
    }

    #[test]
    fn antisymmetric_ricci_of_torsion_free_connection() {
        for seed in 0..5 {
            let c = random_connection(seed, 3, 4, true);
            let (_, a) = split(&ricci(&c));
            let want = divergence_form(&c).antisymmetrized_gradient();
            for i in 0..3 {
                for j in 0..3 {
                    assert!(a.get(i, j).agrees_to(want.get(i, j), 3));
                }
            }
        }
    }

    #[test]
    fn split_recomposes() {
        let c = random_connection(9, 3, 3, false);
        let b = ricci(&c);
        let (s, a) = split(&b);
        assert!(s.is_symmetric());
        for i in 0..3 {
            for j in 0..3 {
                assert!((s.get(i, j) + a.get(i, j)).agrees_to(b.get(i, j), 3));
            }
        }
        let (s2, a2) = split(&s);
        assert_eq!(s2, s);
        assert!(a2.jets().iter().all(Jet::is_zero));
        let (s3, a3) = split(&a.as_bilinear());
        assert!(s3.jets().iter().all(Jet::is_zero));
        assert_eq!(a3, a);
    }
}
