mod common;

use ckgeom::ck::{
    first_order_iterates, initial_data_holds, residual_first_order, residual_second_order,
    solve_first_order, solve_second_order, FirstOrderSystem, SecondOrderSystem,
};
use ckgeom::{Jet, SliceJet};
use common::ck_oracle::{burgers_like, wave_like};
use common::{agrees, Poly};

fn first_order(phi: &Jet) -> FirstOrderSystem<'static> {
    FirstOrderSystem {
        labels: vec!["u".into()],
        initial: vec![SliceJet::new(phi.clone())],
        rhs: Box::new(|u: &[Jet]| Ok(vec![&u[0] * &u[0].d(1)])),
    }
}

fn second_order(phi: &Jet, psi: &Jet) -> SecondOrderSystem<'static> {
    SecondOrderSystem {
        labels: vec!["u".into()],
        initial: vec![SliceJet::new(phi.clone())],
        initial_deriv: vec![SliceJet::new(psi.clone())],
        rhs: Box::new(|u: &[Jet]| Ok(vec![&u[0] * &u[0].d(1).d(1)])),
    }
}

#[test]
fn first_order_matches_extraction_oracle() {
    let d = 6;
    // φ = x² first, then random polynomials.
    let mut phis = vec![Jet::variable(1, d, 0)];
    phis.extend((0..4).map(|s| Jet::random_poly(s, 1, d, 3, 3)));
    for phi in phis {
        let sys = first_order(&phi);
        let sol = solve_first_order(&sys).unwrap();
        let want = burgers_like(&Poly::from_jet(&phi), d);
        assert!(agrees(&sol.values[0], &want, d));
        assert!(residual_first_order(&sys, &sol.values, d - 1)
            .unwrap()
            .vanishes());
        assert!(initial_data_holds(&sol.values, &sys.initial, None));
    }
}

#[test]
fn second_order_matches_extraction_oracle() {
    let d = 6;
    for s in 0..5 {
        let phi = Jet::random_poly(10 + s, 1, d, 3, 3);
        let psi = Jet::random_poly(20 + s, 1, d, 3, 3);
        let sys = second_order(&phi, &psi);
        let sol = solve_second_order(&sys).unwrap();
        let want = wave_like(&Poly::from_jet(&phi), &Poly::from_jet(&psi), d);
        assert!(agrees(&sol.values[0], &want, d), "seed {s}");
        assert!(residual_second_order(&sys, &sol.values, d - 2)
            .unwrap()
            .vanishes());
        assert!(initial_data_holds(
            &sol.values,
            &sys.initial,
            Some(&sys.initial_deriv)
        ));
    }
}

#[test]
fn picard_iterates_stabilize_by_x1_degree() {
    let d = 6;
    let phi = Jet::random_poly(3, 1, d, 3, 2);
    let sys = first_order(&phi);
    let its = first_order_iterates(&sys, d + 1).unwrap();
    for t in 0..its.len() - 1 {
        for k in 0..=t as u32 {
            assert_eq!(
                its[t][0].x1_degree_part(k),
                its[t + 1][0].x1_degree_part(k),
                "iterate {t}, x1-degree {k}"
            );
        }
    }
}

#[test]
fn solving_is_deterministic() {
    let d = 5;
    let phi = Jet::random_poly(8, 1, d, 3, 4);
    let a = solve_first_order(&first_order(&phi)).unwrap();
    let b = solve_first_order(&first_order(&phi)).unwrap();
    assert_eq!(
        serde_json::to_string(&a.values[0]).unwrap(),
        serde_json::to_string(&b.values[0]).unwrap()
    );
}

#[test]
fn hand_written_transport_solution_has_zero_residual() {
    let d = 5;
    // U = (x¹ + x²)³ solves (U)₁ = (U)₂ exactly.
    let s = &Jet::variable(2, d, 0) + &Jet::variable(2, d, 1);
    let u = &(&s * &s) * &s;
    let sys = FirstOrderSystem {
        labels: vec!["u".into()],
        initial: vec![u.restrict_x1()],
        rhs: Box::new(|u: &[Jet]| Ok(vec![u[0].d(1)])),
    };
    // Derivatives of a polynomial of degree < D are exact.
    let u = u.assume_valid_order(d);
    let res = residual_first_order(&sys, std::slice::from_ref(&u), d - 1).unwrap();
    assert!(res.vanishes());
    let mut bumped = u;
    bumped.set_coeff(&[1, 1], bumped.coeff(&[1, 1]) + ckgeom::jet::int(1));
    assert!(!residual_first_order(&sys, &[bumped], d - 1)
        .unwrap()
        .vanishes());
}
