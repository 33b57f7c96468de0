//! Jet arithmetic properties shared by the property tests and the
//! acceptance harness. Inputs are generated as sparse term lists, so the
//! oracle side never touches the dense layout.
#![allow(dead_code)]

use ckgeom::jet::{int, rat};
use ckgeom::{Jet, Rational, SliceJet};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use super::{agrees, Poly};

/// Three random polynomials in `n <= 3` variables with total degree up to
/// `D + 2`, and the workspace degree `D <= 5`.
#[derive(Clone, Debug)]
pub struct Case {
    pub n: usize,
    pub d: usize,
    pub polys: Vec<Poly>,
}

impl Case {
    pub fn jet(&self, i: usize) -> Jet {
        self.polys[i].to_jet(self.d)
    }

    pub fn jet_hi(&self, i: usize) -> Jet {
        self.polys[i].to_jet(self.d + 2)
    }

    fn with_constant(&self, i: usize, c: Rational) -> Poly {
        let mut p = self.polys[i].clone();
        p.terms.remove(&vec![0; self.n]);
        if !num_traits::Zero::is_zero(&c) {
            p.add_term(vec![0; self.n], c);
        }
        p
    }
}

fn poly(n: usize, max_deg: usize) -> impl Strategy<Value = Poly> {
    vec((vec(0u32..=max_deg as u32, n), -7i64..=7, 1i64..=3), 0..10).prop_map(move |ts| {
        let mut p = Poly::zero(n);
        for (e, num, den) in ts {
            if e.iter().map(|&x| x as usize).sum::<usize>() <= max_deg {
                p.add_term(e, rat(num, den));
            }
        }
        p
    })
}

pub fn case(min_n: usize) -> impl Strategy<Value = Case> {
    (min_n..=3usize, 1usize..=5)
        .prop_flat_map(|(n, d)| vec(poly(n, d + 2), 3).prop_map(move |polys| Case { n, d, polys }))
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(TestCaseError::fail(format!($($msg)*)));
        }
    };
}

pub fn add_matches_termwise(c: &Case) -> Result<(), TestCaseError> {
    let s = &c.jet(0) + &c.jet(1);
    ensure!(agrees(&s, &c.polys[0].add(&c.polys[1]), c.d), "sum differs");
    ensure!(s.valid_order() == c.d, "sum lost validity");
    Ok(())
}

pub fn mul_matches_convolution(c: &Case) -> Result<(), TestCaseError> {
    let p = &c.jet(0) * &c.jet(1);
    ensure!(
        agrees(&p, &c.polys[0].mul(&c.polys[1]), c.d),
        "product differs from convolution"
    );
    Ok(())
}

pub fn ring_laws(c: &Case) -> Result<(), TestCaseError> {
    let (a, b, e) = (c.jet(0), c.jet(1), c.jet(2));
    ensure!((&a * &b).agrees_to(&(&b * &a), c.d), "commutativity");
    ensure!(
        (&(&a * &b) * &e).agrees_to(&(&a * &(&b * &e)), c.d),
        "associativity"
    );
    ensure!(
        (&a * &(&b + &e)).agrees_to(&(&(&a * &b) + &(&a * &e)), c.d),
        "distributivity"
    );
    ensure!(
        (&(&a + &b) + &e).agrees_to(&(&a + &(&b + &e)), c.d),
        "additive associativity"
    );
    Ok(())
}

pub fn partials_commute_and_match(c: &Case) -> Result<(), TestCaseError> {
    let a = c.jet(0);
    for i in 0..c.n {
        let di = a.d(i);
        ensure!(di.valid_order() == c.d - 1, "derivative validity");
        ensure!(
            agrees(&di, &c.polys[0].deriv(i), c.d - 1),
            "partial {i} differs"
        );
        for j in 0..c.n {
            if c.d >= 2 {
                ensure!(
                    di.d(j).agrees_to(&a.d(j).d(i), c.d - 2),
                    "partials {i},{j} do not commute"
                );
            }
        }
    }
    Ok(())
}

pub fn antiderivative_round_trip(c: &Case) -> Result<(), TestCaseError> {
    let a = c.jet(0);
    let back = a.antiderivative_x1().d(0);
    let k = a.valid_order().min(c.d - 1);
    ensure!(back.agrees_to(&a, k), "d1 of antiderivative differs");
    ensure!(
        a.antiderivative_x1().restrict_x1().jet().is_zero(),
        "antiderivative nonzero on x1 = 0"
    );
    Ok(())
}

pub fn reciprocal_multiply_back(c: &Case) -> Result<(), TestCaseError> {
    let a = c.with_constant(0, int(1)).to_jet(c.d);
    let r = a
        .reciprocal()
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    ensure!(
        (&a * &r).agrees_to(&Jet::one(c.n, c.d), c.d),
        "a * recip(a) != 1"
    );
    let z = c.with_constant(0, int(0)).to_jet(c.d);
    ensure!(z.reciprocal().is_err(), "reciprocal of non-unit accepted");
    Ok(())
}

pub fn exp_inverse_law(c: &Case) -> Result<(), TestCaseError> {
    let a = c.with_constant(0, int(0)).to_jet(c.d);
    let e1 = a
        .exp_jet()
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    let e2 = (-&a)
        .exp_jet()
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    ensure!(
        (&e1 * &e2).agrees_to(&Jet::one(c.n, c.d), c.d),
        "exp(a) exp(-a) != 1"
    );
    // exp(a + b) = exp(a) exp(b).
    let b = c.with_constant(1, int(0)).to_jet(c.d);
    let lhs = (&a + &b).exp_jet().unwrap();
    ensure!(
        lhs.agrees_to(&(&e1 * &b.exp_jet().unwrap()), c.d),
        "exp not additive"
    );
    Ok(())
}

pub fn restrict_promote_round_trip(c: &Case) -> Result<(), TestCaseError> {
    let a = c.jet(0);
    let s = a.restrict_x1();
    ensure!(
        agrees(s.jet(), &c.polys[0].x1_coeff(0), c.d),
        "restriction differs"
    );
    let p = s.promote();
    ensure!(p.d(0).is_zero(), "promoted slice depends on x1");
    ensure!(
        p.restrict_x1() == s,
        "promote then restrict is not identity"
    );
    if c.n >= 2 {
        let raw = SliceJet::new(c.polys[1].x1_coeff(0).to_jet(c.d));
        ensure!(raw.promote().restrict_x1() == raw, "slice round trip");
    }
    Ok(())
}

/// Every operation, recomputed in a larger workspace and truncated back,
/// reproduces all coefficients up to its advertised valid order.
pub fn validity_propagates(c: &Case) -> Result<(), TestCaseError> {
    let lo: Vec<Jet> = (0..3).map(|i| c.jet(i)).collect();
    let hi: Vec<Jet> = (0..3).map(|i| c.jet_hi(i)).collect();
    let unit = |j: &Jet| j.add_constant(&(int(1) - j.constant_term()));
    let chain = |v: &[Jet]| -> Jet {
        let prod = &v[0] * &v[1];
        let dprod = prod.d(c.n - 1);
        let q = dprod.checked_div(&unit(&v[2])).unwrap();
        let e = q.add_constant(&-q.constant_term()).exp_jet().unwrap();
        &(&e * &v[0].antiderivative_x1()) + &v[2].d(0)
    };
    let a = chain(&lo);
    let b = chain(&hi).resize(c.d);
    ensure!(
        a.valid_order() < c.d,
        "valid order not lowered by a derivative"
    );
    ensure!(
        a.agrees_to(&b, a.valid_order()),
        "coefficients below valid order changed"
    );
    for (x, y) in [
        (lo[0].d(0), hi[0].d(0).resize(c.d)),
        (&lo[0] * &lo[1], (&hi[0] * &hi[1]).resize(c.d)),
    ] {
        ensure!(x.agrees_to(&y, x.valid_order()), "single op lost validity");
    }
    Ok(())
}

pub type Property = fn(&Case) -> Result<(), TestCaseError>;

pub const ALL: &[(&str, Property)] = &[
    ("add-termwise", add_matches_termwise),
    ("mul-convolution", mul_matches_convolution),
    ("ring-laws", ring_laws),
    ("partials", partials_commute_and_match),
    ("antiderivative", antiderivative_round_trip),
    ("reciprocal", reciprocal_multiply_back),
    ("exp", exp_inverse_law),
    ("restrict-promote", restrict_promote_round_trip),
    ("validity", validity_propagates),
];
