//! Sparse polynomials over the rationals, independent of the dense jet
//! layout. Used as brute-force oracles.
#![allow(dead_code)]

pub mod ck_oracle;
pub mod props;

use std::collections::BTreeMap;

use ckgeom::{Jet, Rational};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub n: usize,
    pub terms: BTreeMap<Vec<u32>, Rational>,
}

fn total(e: &[u32]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(n: usize, terms: &[(Vec<u32>, Rational)]) -> Self {
        let mut p = Poly::zero(n);
        for (e, c) in terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        assert_eq!(e.len(), self.n);
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn truncate(&self, d: usize) -> Self {
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total(e) <= d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        let mut out = Poly::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    /// Double-loop convolution.
    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn deriv(&self, axis: usize) -> Poly {
        let mut out = Poly::zero(self.n);
        for (e, c) in &self.terms {
            if e[axis] > 0 {
                let mut f = e.clone();
                f[axis] -= 1;
                out.add_term(f, c * Rational::from_integer(e[axis].into()));
            }
        }
        out
    }

    /// Coefficient of `(x¹)^k` as a polynomial in the remaining variables.
    pub fn x1_coeff(&self, k: u32) -> Poly {
        let mut out = Poly::zero(self.n - 1);
        for (e, c) in &self.terms {
            if e[0] == k {
                out.add_term(e[1..].to_vec(), c.clone());
            }
        }
        out
    }

    /// `p(x²,…) · (x¹)^k` in `n + 1` variables.
    pub fn lift_x1(&self, k: u32) -> Poly {
        let mut out = Poly::zero(self.n + 1);
        for (e, c) in &self.terms {
            let mut f = vec![k];
            f.extend_from_slice(e);
            out.add_term(f, c.clone());
        }
        out
    }

    pub fn to_jet(&self, degree: usize) -> Jet {
        let mut j = Jet::zero(self.n, degree);
        for (e, c) in &self.terms {
            if total(e) <= degree {
                j.set_coeff(e, c.clone());
            }
        }
        j
    }

    pub fn from_jet(j: &Jet) -> Poly {
        let mut p = Poly::zero(j.nvars());
        let layout = j.layout();
        for r in 0..layout.len() {
            let c = j.coeff_at(r);
            if !c.is_zero() {
                p.add_term(layout.exponents(r).to_vec(), c.clone());
            }
        }
        p
    }
}

/// Exact agreement of a jet with a polynomial on total degree `<= k`.
pub fn agrees(j: &Jet, p: &Poly, k: usize) -> bool {
    Poly::from_jet(j).truncate(k) == p.truncate(k)
}
