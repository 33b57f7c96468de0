//! Truncated multivariate power series ("jets") with exact rational
//! coefficients and validity-order tracking.
//!
//! A [`Jet`] in `n` variables lives in a workspace of total degree `D` and
//! stores all `C(n + D, n)` coefficients densely. Its `valid_order` is the
//! total degree up to which the coefficients are known to be correct;
//! coefficients above it are carried along but never compared.
//!
//! Axes are zero-based: axis `0` is the coordinate `x¹`.

mod layout;
mod serial;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use layout::{dense_size, Layout, MultiIndex};
pub use serial::{format_rational, parse_rational};

use crate::error::{Error, Result};

/// Exact coefficient type.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[derive(Clone)]
pub struct Jet {
    layout: Arc<Layout>,
    coeffs: Vec<Rational>,
    valid: usize,
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Jet(n={}, D={}, v={}; {})",
            self.nvars(),
            self.degree(),
            self.valid,
            self
        )
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (r, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_rational(c))?;
            for (axis, &e) in self.layout.exponents(r).iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", axis + 1)?,
                    _ => write!(f, "*x{}^{}", axis + 1, e)?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Equality up to the (common) valid order; garbage above it is ignored.
impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        self.same_shape(other) && self.valid == other.valid && self.agrees_to(other, self.valid)
    }
}

impl Jet {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        let layout = Layout::get(nvars, degree);
        let coeffs = vec![Rational::zero(); layout.len()];
        Jet {
            layout,
            coeffs,
            valid: degree,
        }
    }

    pub fn constant(nvars: usize, degree: usize, c: Rational) -> Self {
        let mut j = Self::zero(nvars, degree);
        j.coeffs[0] = c;
        j
    }

    pub fn one(nvars: usize, degree: usize) -> Self {
        Self::constant(nvars, degree, Rational::one())
    }

    /// The coordinate function `x^(axis+1)`.
    pub fn variable(nvars: usize, degree: usize, axis: usize) -> Self {
        let mut e = vec![0; nvars];
        e[axis] = 1;
        Self::monomial(nvars, degree, &e, Rational::one())
    }

    /// `c * x^e`; truncated to zero if `|e| > degree`.
    pub fn monomial(nvars: usize, degree: usize, exponents: &[u32], c: Rational) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent length");
        let mut j = Self::zero(nvars, degree);
        if let Some(r) = j.layout.rank(exponents) {
            j.coeffs[r] = c;
        }
        j
    }

    /// Builds a jet from `(exponents, coefficient)` pairs; monomials above the
    /// workspace degree are dropped.
    pub fn from_terms<'a, I>(nvars: usize, degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (&'a [u32], Rational)>,
    {
        let mut j = Self::zero(nvars, degree);
        for (e, c) in terms {
            if let Some(r) = j.layout.rank(e) {
                j.coeffs[r] += c;
            }
        }
        j
    }

    pub(crate) fn from_parts(layout: Arc<Layout>, coeffs: Vec<Rational>, valid: usize) -> Self {
        debug_assert_eq!(layout.len(), coeffs.len());
        let valid = valid.min(layout.degree());
        Jet {
            layout,
            coeffs,
            valid,
        }
    }

    pub fn nvars(&self) -> usize {
        self.layout.nvars()
    }

    pub fn degree(&self) -> usize {
        self.layout.degree()
    }

    pub fn valid_order(&self) -> usize {
        self.valid
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Lowers the valid order to `min(current, v)`.
    pub fn with_valid_order(mut self, v: usize) -> Self {
        self.valid = self.valid.min(v);
        self
    }

    /// Overrides the valid order (clamped to the workspace degree). Used when
    /// a caller knows the coefficients are exact, e.g. for polynomial data.
    pub fn assume_valid_order(mut self, v: usize) -> Self {
        self.valid = v.min(self.degree());
        self
    }

    pub fn coeff(&self, exponents: &[u32]) -> Rational {
        self.layout
            .rank(exponents)
            .map(|r| self.coeffs[r].clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn coeff_at(&self, rank: usize) -> &Rational {
        &self.coeffs[rank]
    }

    pub fn set_coeff(&mut self, exponents: &[u32], c: Rational) {
        let r = self
            .layout
            .rank(exponents)
            .expect("monomial outside the jet workspace");
        self.coeffs[r] = c;
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn same_shape(&self, other: &Jet) -> bool {
        Arc::ptr_eq(&self.layout, &other.layout)
            || (self.nvars() == other.nvars() && self.degree() == other.degree())
    }

    fn check_shape(&self, other: &Jet) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Mismatch(format!(
                "jets of shape (n={}, D={}) and (n={}, D={})",
                self.nvars(),
                self.degree(),
                other.nvars(),
                other.degree()
            )))
        }
    }

    /// True iff all coefficients of total degree `<= k` coincide.
    pub fn agrees_to(&self, other: &Jet, k: usize) -> bool {
        if !self.same_shape(other) {
            return false;
        }
        let end = self.layout.len_to_degree(k);
        self.coeffs[..end] == other.coeffs[..end]
    }

    /// True iff all coefficients of total degree `<= k` vanish.
    pub fn is_zero_to(&self, k: usize) -> bool {
        let end = self.layout.len_to_degree(k);
        self.coeffs[..end].iter().all(Zero::is_zero)
    }

    /// True iff every stored coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn checked_add(&self, other: &Jet) -> Result<Jet> {
        self.check_shape(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Jet::from_parts(
            self.layout.clone(),
            coeffs,
            self.valid.min(other.valid),
        ))
    }

    pub fn checked_sub(&self, other: &Jet) -> Result<Jet> {
        self.check_shape(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Jet::from_parts(
            self.layout.clone(),
            coeffs,
            self.valid.min(other.valid),
        ))
    }

    /// Truncated Cauchy product.
    pub fn checked_mul(&self, other: &Jet) -> Result<Jet> {
        self.check_shape(other)?;
        let layout = &self.layout;
        let mut coeffs = vec![Rational::zero(); layout.len()];
        // Skipping zero factors keeps sparse data cheap.
        let nz_a: Vec<bool> = self.coeffs.iter().map(|c| !c.is_zero()).collect();
        let nz_b: Vec<bool> = other.coeffs.iter().map(|c| !c.is_zero()).collect();
        for (c, slot) in coeffs.iter_mut().enumerate() {
            for &(p, q) in layout.splits(c) {
                let (p, q) = (p as usize, q as usize);
                if nz_a[p] && nz_b[q] {
                    *slot += &self.coeffs[p] * &other.coeffs[q];
                }
            }
        }
        Ok(Jet::from_parts(
            layout.clone(),
            coeffs,
            self.valid.min(other.valid),
        ))
    }

    pub fn scale(&self, c: &Rational) -> Jet {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        Jet::from_parts(self.layout.clone(), coeffs, self.valid)
    }

    pub fn scale_int(&self, c: i64) -> Jet {
        self.scale(&int(c))
    }

    /// Adds a constant to the constant term.
    pub fn add_constant(&self, c: &Rational) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Formal partial derivative along `axis` (zero-based).
    pub fn partial(&self, axis: usize) -> Result<Jet> {
        if axis >= self.nvars() {
            return Err(Error::BadAxis {
                axis,
                nvars: self.nvars(),
            });
        }
        let layout = &self.layout;
        let mut coeffs = vec![Rational::zero(); layout.len()];
        for (r, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if let Some(t) = layout.lower(axis, r) {
                let e = layout.exponents(r)[axis];
                coeffs[t] = a * BigInt::from(e);
            }
        }
        Ok(Jet::from_parts(
            layout.clone(),
            coeffs,
            self.valid.saturating_sub(1),
        ))
    }

    /// Shorthand for `partial` with an axis known to be valid.
    pub fn d(&self, axis: usize) -> Jet {
        self.partial(axis).expect("axis in range")
    }

    /// The primitive in `x¹` with vanishing `x¹`-free part.
    pub fn antiderivative_x1(&self) -> Jet {
        let layout = &self.layout;
        let mut coeffs = vec![Rational::zero(); layout.len()];
        if layout.nvars() > 0 {
            for (r, a) in self.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                if let Some(t) = layout.raise(0, r) {
                    let e = layout.exponents(r)[0] + 1;
                    coeffs[t] = a / BigInt::from(e);
                }
            }
        }
        Jet::from_parts(layout.clone(), coeffs, (self.valid + 1).min(self.degree()))
    }

    /// `x^axis · Σ_m w(m) f_m`, where `f_m` is the homogeneous part of degree
    /// `m`. This is the building block of the radial homotopy operator.
    pub(crate) fn radial_lift(&self, axis: usize, weight: impl Fn(usize) -> Rational) -> Jet {
        let layout = &self.layout;
        let mut coeffs = vec![Rational::zero(); layout.len()];
        for (r, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if let Some(t) = layout.raise(axis, r) {
                coeffs[t] = a * weight(layout.total_degree(r));
            }
        }
        Jet::from_parts(layout.clone(), coeffs, (self.valid + 1).min(self.degree()))
    }

    /// Multiplication by the coordinate `x¹`.
    pub fn shift_x1(&self) -> Jet {
        let layout = &self.layout;
        let mut coeffs = vec![Rational::zero(); layout.len()];
        for (r, a) in self.coeffs.iter().enumerate() {
            if let Some(t) = layout.raise(0, r) {
                coeffs[t] = a.clone();
            }
        }
        Jet::from_parts(layout.clone(), coeffs, (self.valid + 1).min(self.degree()))
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Jet> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::Singular(
                "reciprocal of a jet with zero constant term".into(),
            ));
        }
        let inv0 = a0.recip();
        let layout = &self.layout;
        let mut b = vec![Rational::zero(); layout.len()];
        b[0] = inv0.clone();
        for c in 1..layout.len() {
            let mut acc = Rational::zero();
            for &(p, q) in layout.splits(c) {
                let (p, q) = (p as usize, q as usize);
                if p == 0 || self.coeffs[p].is_zero() || b[q].is_zero() {
                    continue;
                }
                acc += &self.coeffs[p] * &b[q];
            }
            b[c] = -(acc * &inv0);
        }
        Ok(Jet::from_parts(layout.clone(), b, self.valid))
    }

    /// `self / denominator`.
    pub fn checked_div(&self, denominator: &Jet) -> Result<Jet> {
        self.checked_mul(&denominator.reciprocal()?)
    }

    /// Composition of the exponential series with a jet vanishing at 0.
    pub fn exp_jet(&self) -> Result<Jet> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant);
        }
        // Euler operator: m E_m = sum_k k a_k E_(m-k) on homogeneous parts.
        let layout = &self.layout;
        let mut e = vec![Rational::zero(); layout.len()];
        e[0] = Rational::one();
        for c in 1..layout.len() {
            let mut acc = Rational::zero();
            for &(p, q) in layout.splits(c) {
                let (p, q) = (p as usize, q as usize);
                if p == 0 || self.coeffs[p].is_zero() || e[q].is_zero() {
                    continue;
                }
                acc += &self.coeffs[p] * &e[q] * BigInt::from(layout.total_degree(p));
            }
            e[c] = acc / BigInt::from(layout.total_degree(c));
        }
        Ok(Jet::from_parts(layout.clone(), e, self.valid))
    }

    /// Sets `x¹ = 0`.
    pub fn restrict_x1(&self) -> SliceJet {
        let n = self.nvars();
        assert!(n >= 1, "restrict_x1 needs at least one variable");
        let target = Layout::get(n - 1, self.degree());
        let mut coeffs = vec![Rational::zero(); target.len()];
        for (r, slot) in coeffs.iter_mut().enumerate() {
            let mut e = Vec::with_capacity(n);
            e.push(0);
            e.extend_from_slice(target.exponents(r));
            let src = self.layout.rank(&e).expect("same degree cap");
            *slot = self.coeffs[src].clone();
        }
        SliceJet {
            jet: Jet::from_parts(target, coeffs, self.valid),
        }
    }

    /// Re-embeds the jet in a workspace of another total degree: truncates
    /// or pads with zeros. Padding keeps the valid order.
    pub fn resize(&self, degree: usize) -> Jet {
        let target = Layout::get(self.nvars(), degree);
        let mut coeffs = vec![Rational::zero(); target.len()];
        let common = target.len().min(self.coeffs.len());
        // Graded ranking is prefix-compatible across degree caps.
        coeffs[..common].clone_from_slice(&self.coeffs[..common]);
        Jet::from_parts(target, coeffs, self.valid.min(degree))
    }

    /// Homogeneous part of total degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> Jet {
        let mut out = Jet::zero(self.nvars(), self.degree());
        for r in self.layout.degree_range(d) {
            out.coeffs[r] = self.coeffs[r].clone();
        }
        out.valid = self.valid;
        out
    }

    /// Part of the jet whose `x¹`-exponent equals `k`.
    pub fn x1_degree_part(&self, k: u32) -> Jet {
        let mut out = Jet::zero(self.nvars(), self.degree());
        for r in 0..self.coeffs.len() {
            if self.layout.exponents(r)[0] == k {
                out.coeffs[r] = self.coeffs[r].clone();
            }
        }
        out.valid = self.valid;
        out
    }

    /// Deterministic random polynomial with integer coefficients in
    /// `[-coeff_bound, coeff_bound]` on all monomials of degree `<= degree_bound`.
    pub fn random_poly(
        seed: u64,
        nvars: usize,
        degree: usize,
        degree_bound: usize,
        coeff_bound: i64,
    ) -> Jet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_poly_with(&mut rng, nvars, degree, degree_bound, coeff_bound)
    }

    pub fn random_poly_with<R: Rng>(
        rng: &mut R,
        nvars: usize,
        degree: usize,
        degree_bound: usize,
        coeff_bound: i64,
    ) -> Jet {
        assert!(
            degree_bound <= degree,
            "degree_bound exceeds workspace degree"
        );
        let mut j = Jet::zero(nvars, degree);
        let bound = coeff_bound.abs();
        for r in 0..j.layout.len_to_degree(degree_bound) {
            let v = if bound == 0 {
                0
            } else {
                rng.gen_range(-bound..=bound)
            };
            j.coeffs[r] = int(v);
        }
        j
    }

    /// Largest absolute numerator among coefficients; handy for diagnostics.
    pub fn max_abs_numerator(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.numer().abs())
            .max()
            .unwrap_or_default()
    }
}

/// A jet in the `n - 1` variables `x², …, xⁿ`: initial data on `{x¹ = 0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceJet {
    jet: Jet,
}

impl SliceJet {
    /// Wraps an `(n - 1)`-variable jet as initial data for dimension `n`.
    pub fn new(jet: Jet) -> Self {
        SliceJet { jet }
    }

    pub fn zero(target_nvars: usize, degree: usize) -> Self {
        SliceJet::new(Jet::zero(target_nvars - 1, degree))
    }

    pub fn constant(target_nvars: usize, degree: usize, c: Rational) -> Self {
        SliceJet::new(Jet::constant(target_nvars - 1, degree, c))
    }

    pub fn jet(&self) -> &Jet {
        &self.jet
    }

    pub fn into_jet(self) -> Jet {
        self.jet
    }

    pub fn target_nvars(&self) -> usize {
        self.jet.nvars() + 1
    }

    pub fn degree(&self) -> usize {
        self.jet.degree()
    }

    /// Embeds the slice as an `x¹`-independent jet in `n` variables.
    pub fn promote(&self) -> Jet {
        let n = self.target_nvars();
        let target = Layout::get(n, self.degree());
        let mut coeffs = vec![Rational::zero(); target.len()];
        let src = self.jet.layout();
        for r in 0..src.len() {
            let mut e = Vec::with_capacity(n);
            e.push(0);
            e.extend_from_slice(src.exponents(r));
            let t = target.rank(&e).expect("same degree cap");
            coeffs[t] = self.jet.coeffs[r].clone();
        }
        Jet::from_parts(target, coeffs, self.jet.valid)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                self.$checked(rhs).expect("jet shape mismatch")
            }
        }
        impl $trait<Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                (&self).$checked(&rhs).expect("jet shape mismatch")
            }
        }
        impl $trait<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                (&self).$checked(rhs).expect("jet shape mismatch")
            }
        }
        impl $trait<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$checked(&rhs).expect("jet shape mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        let coeffs = self.coeffs.iter().map(|a| -a).collect();
        Jet::from_parts(self.layout.clone(), coeffs, self.valid)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

/// Sum of jets of a common shape; `None` for an empty iterator.
pub fn sum<'a, I: IntoIterator<Item = &'a Jet>>(iter: I) -> Option<Jet> {
    let mut it = iter.into_iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, j| &acc + j))
}
