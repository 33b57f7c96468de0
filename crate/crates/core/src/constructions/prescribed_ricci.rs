//! Connections with prescribed Ricci tensor.
//!
//! All three builders share one mechanism. Every Christoffel symbol is an
//! affine expression `constant + Σ c_u U_u` in the CK unknowns `U_u`: a
//! free symbol is its prescribed jet, an unknown is itself, and an
//! algebraically determined symbol is whatever its defining relation says.
//! Each unknown is paired with one combination of Ricci components. The
//! derivative part of that combination is expanded over `(unknown, axis)`
//! pairs; it must contain `∂₁` of its own unknown with a nonzero coefficient
//! and `∂₁` of no other unknown. Everything else, including `Λ`, moves to
//! the right-hand side.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::census::{
    canonical, census, gamma_label, symbol_roles, Construction, Symbol, GAUGE_SLOT,
};
use super::free_data::FreeData;
use super::report::BuildReport;
use crate::ck::{solve_first_order, FirstOrderSystem};
use crate::error::{Error, Result};
use crate::geometry::{
    lambda_term, potential_of_one_form, primitive_of_two_form, split, two_form_closed, Bilinear,
    Connection, OneForm,
};
use crate::jet::{int, rat, Jet, Rational, SliceJet};

#[derive(Clone, Debug)]
struct Affine {
    constant: Jet,
    terms: BTreeMap<usize, Rational>,
}

impl Affine {
    fn known(j: Jet) -> Self {
        Affine {
            constant: j,
            terms: BTreeMap::new(),
        }
    }

    fn unknown(n: usize, degree: usize, u: usize) -> Self {
        Affine {
            constant: Jet::zero(n, degree),
            terms: [(u, int(1))].into_iter().collect(),
        }
    }

    fn add_scaled(&mut self, other: &Affine, c: &Rational) {
        self.constant = &self.constant + &other.constant.scale(c);
        for (u, v) in &other.terms {
            let e = self.terms.entry(*u).or_insert_with(Rational::zero);
            *e += v * c;
            if e.is_zero() {
                self.terms.remove(u);
            }
        }
    }

    fn eval(&self, values: &[Jet]) -> Jet {
        let mut out = self.constant.clone();
        for (u, c) in &self.terms {
            out = &out + &values[*u].scale(c);
        }
        out
    }
}

/// A weighted sum `Σ w · Ric_{ij}` prescribed to equal `target`.
struct RicciEquation {
    combo: Vec<(Rational, usize, usize)>,
    target: Jet,
}

struct CompiledEquation {
    combo: Vec<(Rational, usize, usize)>,
    target: Jet,
    /// Coefficient of `∂₁` of the paired unknown.
    lead: Rational,
    /// Derivatives of the known parts of the symbols.
    known: Jet,
    /// Every other `(unknown, axis, coefficient)` derivative term.
    rest: Vec<(usize, usize, Rational)>,
}

struct Template {
    n: usize,
    degree: usize,
    symmetric: bool,
    /// Dense `(k, i, j)` table.
    symbols: Vec<Affine>,
    unknowns: Vec<Symbol>,
    equations: Vec<RicciEquation>,
}

impl Template {
    fn idx(&self, (k, i, j): Symbol) -> usize {
        (k * self.n + i) * self.n + j
    }

    fn symbol(&self, s: Symbol) -> &Affine {
        &self.symbols[self.idx(s)]
    }

    /// Linear part of `Ric_{ij}`: `Σ_k ∂_k Γ^k_{ij} − Σ_k ∂_i Γ^k_{kj}`.
    fn derivative_terms(&self, i: usize, j: usize) -> Vec<(Rational, Symbol, usize)> {
        let mut out = Vec::with_capacity(2 * self.n);
        for k in 0..self.n {
            out.push((int(1), (k, i, j), k));
            out.push((int(-1), (k, k, j), i));
        }
        out
    }

    fn compile(&self) -> Result<Vec<CompiledEquation>> {
        let mut out = Vec::with_capacity(self.equations.len());
        for (e, eq) in self.equations.iter().enumerate() {
            let mut known = Jet::zero(self.n, self.degree);
            let mut coeffs: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
            for (w, i, j) in &eq.combo {
                for (c, s, axis) in self.derivative_terms(*i, *j) {
                    let c = &c * w;
                    let a = self.symbol(s);
                    if !a.constant.is_zero() {
                        known = &known + &a.constant.d(axis).scale(&c);
                    }
                    for (u, v) in &a.terms {
                        *coeffs.entry((*u, axis)).or_insert_with(Rational::zero) += v * &c;
                    }
                }
            }
            coeffs.retain(|_, v| !v.is_zero());
            let lead = coeffs.remove(&(e, 0)).ok_or_else(|| {
                Error::NotCauchyKowalevski(format!(
                    "equation for {} lacks its x¹-derivative",
                    gamma_label(self.unknowns[e])
                ))
            })?;
            if let Some(((u, _), _)) = coeffs.iter().find(|((_, axis), _)| *axis == 0) {
                return Err(Error::NotCauchyKowalevski(format!(
                    "equation for {} contains the x¹-derivative of {}",
                    gamma_label(self.unknowns[e]),
                    gamma_label(self.unknowns[*u])
                )));
            }
            out.push(CompiledEquation {
                combo: eq.combo.clone(),
                target: eq.target.clone(),
                lead,
                known,
                rest: coeffs.into_iter().map(|((u, a), c)| (u, a, c)).collect(),
            });
        }
        Ok(out)
    }

    fn connection(&self, values: &[Jet]) -> Connection {
        let n = self.n;
        let c = Connection::from_fn(n, |k, i, j| self.symbols[(k * n + i) * n + j].eval(values));
        if self.symmetric {
            c.into_symmetric().expect("symmetric template")
        } else {
            c
        }
    }

    /// Solves the CK system and returns the connection plus the number of
    /// Picard sweeps.
    fn solve(&self, slices: Vec<SliceJet>) -> Result<(Connection, usize)> {
        let compiled = self.compile()?;
        let rhs = |values: &[Jet]| -> Result<Vec<Jet>> {
            let conn = self.connection(values);
            let lam = lambda_term(&conn);
            compiled
                .iter()
                .map(|ce| {
                    let mut acc = &ce.target - &ce.known;
                    for (w, i, j) in &ce.combo {
                        acc = &acc + &lam.get(*i, *j).scale(w);
                    }
                    for (u, axis, c) in &ce.rest {
                        acc = &acc - &values[*u].d(*axis).scale(c);
                    }
                    Ok(acc.scale(&ce.lead.recip()))
                })
                .collect()
        };
        let sys = FirstOrderSystem {
            labels: self.unknowns.iter().copied().map(gamma_label).collect(),
            initial: slices,
            rhs: Box::new(rhs),
        };
        let sol = solve_first_order(&sys)?;
        Ok((self.connection(&sol.values), sol.iterations))
    }
}

fn single(i: usize, j: usize, target: &Bilinear) -> RicciEquation {
    RicciEquation {
        combo: vec![(int(1), i, j)],
        target: target.get(i, j).clone(),
    }
}

fn symmetrized(i: usize, j: usize, target: &Bilinear) -> RicciEquation {
    if i == j {
        return single(i, i, target);
    }
    RicciEquation {
        combo: vec![(rat(1, 2), i, j), (rat(1, 2), j, i)],
        target: target.get(i, j).clone(),
    }
}

fn check_prescribed(r: &Bilinear, n: usize, degree: usize) -> Result<()> {
    if r.n() != n || r.degree() != degree || r.jets().iter().any(|j| j.nvars() != n) {
        return Err(Error::Mismatch(format!(
            "prescribed tensor must have n = {n} and D = {degree}"
        )));
    }
    Ok(())
}

/// Template skeleton: free symbols from `fd`, unknowns as themselves,
/// determined symbols left as zero placeholders.
fn skeleton(
    construction: Construction,
    r: &Bilinear,
    fd: &FreeData,
) -> Result<(Template, Vec<SliceJet>, Vec<Symbol>)> {
    let census = census(construction, r.n())?;
    let degree = fd.validate(&census)?;
    let n = census.n;
    check_prescribed(r, n, degree)?;
    let roles = symbol_roles(construction, n)?;
    let symmetric = construction.symmetric_connection();
    let mut t = Template {
        n,
        degree,
        symmetric,
        symbols: vec![Affine::known(Jet::zero(n, degree)); n * n * n],
        unknowns: roles.unknowns.clone(),
        equations: Vec::new(),
    };
    for &s in &roles.free {
        let f = fd.function(&gamma_label(s))?.clone();
        put(&mut t, s, Affine::known(f));
    }
    let mut slices = Vec::with_capacity(roles.unknowns.len());
    for (u, &s) in roles.unknowns.iter().enumerate() {
        put(&mut t, s, Affine::unknown(n, degree, u));
        slices.push(fd.slice(&gamma_label(s))?.clone());
    }
    Ok((t, slices, roles.determined))
}

fn put(t: &mut Template, s: Symbol, a: Affine) {
    let (k, i, j) = s;
    let idx = t.idx(s);
    if t.symmetric {
        let jdx = t.idx((k, j, i));
        t.symbols[jdx] = a.clone();
    }
    t.symbols[idx] = a;
}

/// Connection with `Ric = r`; the `n³ − n²` non-unknown symbols are free.
pub fn build_prescribed_ricci_general(r: &Bilinear, fd: &FreeData) -> Result<BuildReport> {
    let (mut t, slices, _) = skeleton(Construction::General, r, fd)?;
    t.equations = general_equations(&t, r);
    let (conn, iterations) = t.solve(slices)?;
    BuildReport::for_connection(
        Construction::General,
        r.clone(),
        fd.clone(),
        conn,
        iterations,
    )
}

fn general_equations(t: &Template, r: &Bilinear) -> Vec<RicciEquation> {
    let n = t.n;
    t.unknowns
        .iter()
        .map(|&(k, i, j)| {
            if k == n - 1 && i == n - 1 {
                single(0, j, r)
            } else {
                single(i, j, r)
            }
        })
        .collect()
}

/// Connection with `Ric = r` and vanishing torsion trace, `n >= 3`.
pub fn build_prescribed_ricci_trace_free_torsion(
    r: &Bilinear,
    fd: &FreeData,
) -> Result<BuildReport> {
    let (mut t, slices, determined) = skeleton(Construction::TraceFreeTorsion, r, fd)?;
    let n = t.n;
    // τ_k = Σ_i Γ^i_{ik} − Σ_i Γ^i_{ki} = 0 solved for the symbol in `determined`.
    for &(dk, di, dj) in &determined {
        let k = di;
        let mut a = Affine::known(Jet::zero(n, t.degree));
        for i in 0..n {
            a.add_scaled(&t.symbols[t.idx((i, i, k))].clone(), &int(1));
            if (i, k, i) != (dk, di, dj) {
                a.add_scaled(&t.symbols[t.idx((i, k, i))].clone(), &int(-1));
            }
        }
        put(&mut t, (dk, di, dj), a);
    }
    t.equations = general_equations(&t, r);
    let (conn, iterations) = t.solve(slices)?;
    BuildReport::for_connection(
        Construction::TraceFreeTorsion,
        r.clone(),
        fd.clone(),
        conn,
        iterations,
    )
}

/// The one-form `α = primitive(a) + dφ` that becomes the divergence form of
/// the torsion-free connection.
pub fn divergence_target(r: &Bilinear, gauge: &Jet) -> Result<OneForm> {
    let (_, a) = split(r);
    if !two_form_closed(&a, a.valid_order().saturating_sub(1)) {
        return Err(Error::AntisymmetricPartNotClosed);
    }
    let p = primitive_of_two_form(&a).map_err(|_| Error::AntisymmetricPartNotClosed)?;
    Ok(p.add(&OneForm::gradient(gauge)))
}

/// Torsion-free connection with `Ric = r`. Requires the antisymmetric part of
/// `r` to be closed.
pub fn build_prescribed_ricci_torsion_free(r: &Bilinear, fd: &FreeData) -> Result<BuildReport> {
    let census = census(Construction::TorsionFree, r.n())?;
    fd.validate(&census)?;
    let alpha = divergence_target(r, fd.function(GAUGE_SLOT)?)?;
    let (mut t, slices, _) = skeleton(Construction::TorsionFree, r, fd)?;
    let n = t.n;
    // Γ¹₁₁ = α₁ − Σ_{k≥2} Γ^k_{k1}; Γ^k_{kk} = α_k − Σ_{l≠k} Γ^l_{lk}.
    for k in 0..n {
        let mut a = Affine::known(alpha.get(k).clone());
        for l in 0..n {
            if l != k {
                a.add_scaled(&t.symbols[t.idx((l, l, k))].clone(), &int(-1));
            }
        }
        put(&mut t, (k, k, k), a);
    }
    let (s, _) = split(r);
    t.equations = t
        .unknowns
        .iter()
        .map(|&(k, i, j)| {
            if (k, i, j) == (1, 0, 1) {
                symmetrized(0, 0, &s)
            } else {
                symmetrized(i, j, &s)
            }
        })
        .collect();
    let (conn, iterations) = t.solve(slices)?;
    BuildReport::for_connection(
        Construction::TorsionFree,
        r.clone(),
        fd.clone(),
        conn,
        iterations,
    )
}

/// Free data reproducing a known connection: free slots copied, slices
/// restricted from the unknown symbols. For the torsion-free construction the
/// gauge is recovered as the potential of `D − primitive(a)`.
pub fn free_data_from_connection(
    construction: Construction,
    r: &Bilinear,
    conn: &Connection,
) -> Result<FreeData> {
    let n = conn.n();
    let census = census(construction, n)?;
    let roles = symbol_roles(construction, n)?;
    let mut fd = FreeData::new();
    let get = |s: Symbol| {
        let (k, i, j) = if construction.symmetric_connection() {
            canonical(s)
        } else {
            s
        };
        conn.get(k, i, j).clone()
    };
    for &s in &roles.free {
        fd.free_functions.insert(gamma_label(s), get(s));
    }
    for &s in &roles.unknowns {
        fd.initial_slices
            .insert(gamma_label(s), get(s).restrict_x1());
    }
    if construction == Construction::TorsionFree {
        let base = divergence_target(r, &Jet::zero(n, conn.degree()))?;
        let diff = crate::geometry::divergence_form(conn).sub(&base);
        fd.free_functions
            .insert(GAUGE_SLOT.into(), potential_of_one_form(&diff)?);
    }
    fd.validate(&census)?;
    Ok(fd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ricci, torsion_trace};

    fn zero_fd(c: Construction, n: usize, d: usize) -> FreeData {
        FreeData::zeros(&census(c, n).unwrap(), d)
    }

    #[test]
    fn zero_data_gives_zero_connection() {
        let d = 3;
        for (c, n) in [
            (Construction::General, 2),
            (Construction::General, 3),
            (Construction::TraceFreeTorsion, 3),
            (Construction::TorsionFree, 2),
            (Construction::TorsionFree, 3),
        ] {
            let r = Bilinear::zero(n, d);
            let fd = zero_fd(c, n, d);
            let rep = match c {
                Construction::General => build_prescribed_ricci_general(&r, &fd),
                Construction::TraceFreeTorsion => {
                    build_prescribed_ricci_trace_free_torsion(&r, &fd)
                }
                _ => build_prescribed_ricci_torsion_free(&r, &fd),
            }
            .unwrap();
            let conn = rep.connection.as_ref().unwrap();
            assert!(conn.jets().iter().all(Jet::is_zero), "{c}");
            assert!(rep.checks.iter().all(|c| c.passed));
        }
    }

    #[test]
    fn general_random_data_meets_ricci() {
        let d = 3;
        let n = 2;
        let c = census(Construction::General, n).unwrap();
        let mut fd = FreeData::new();
        for (s, slot) in c.free_functions.iter().enumerate() {
            fd = fd.with_function(slot.clone(), Jet::random_poly(s as u64, n, d, 2, 2));
        }
        for (s, slot) in c.initial_slices.iter().enumerate() {
            fd = fd.with_slice(
                slot.clone(),
                Jet::random_poly(100 + s as u64, n, d, 2, 2).restrict_x1(),
            );
        }
        let r = Bilinear::from_fn(n, |i, j| {
            Jet::random_poly(200 + (i * n + j) as u64, n, d, 2, 2)
        });
        let rep = build_prescribed_ricci_general(&r, &fd).unwrap();
        let conn = rep.connection.unwrap();
        let res = ricci(&conn).sub(&r).unwrap();
        assert!(res.is_zero_to(d - 1));
    }

    #[test]
    fn trace_free_round_trip() {
        let d = 3;
        let n = 3;
        let roles = symbol_roles(Construction::TraceFreeTorsion, n).unwrap();
        let mut s = 0;
        let mut g0 = Connection::from_fn(n, |_, _, _| {
            s += 1;
            Jet::random_poly(s, n, d, 2, 2)
        });
        // Fix the determined symbols so that τ = 0.
        for &(k, i, j) in &roles.determined {
            let tau = torsion_trace(&g0);
            let new = g0.get(k, i, j) + tau.get(i);
            g0.set(k, i, j, new);
        }
        assert!(torsion_trace(&g0).jets().iter().all(Jet::is_zero));
        let r = ricci(&g0);
        let fd = free_data_from_connection(Construction::TraceFreeTorsion, &r, &g0).unwrap();
        let rep = build_prescribed_ricci_trace_free_torsion(&r, &fd).unwrap();
        let conn = rep.connection.as_ref().unwrap();
        for (a, b) in conn.jets().iter().zip(g0.jets()) {
            assert!(a.agrees_to(b, d));
        }
    }

    #[test]
    fn torsion_free_rejects_open_antisymmetric_part() {
        let d = 3;
        let n = 3;
        let x3 = Jet::variable(n, d, 2);
        let r = Bilinear::from_fn(n, |i, j| match (i, j) {
            (0, 1) => x3.clone(),
            (1, 0) => -&x3,
            _ => Jet::zero(n, d),
        });
        let fd = zero_fd(Construction::TorsionFree, n, d);
        assert!(matches!(
            build_prescribed_ricci_torsion_free(&r, &fd),
            Err(Error::AntisymmetricPartNotClosed)
        ));
    }
}
