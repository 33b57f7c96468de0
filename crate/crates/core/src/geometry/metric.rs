use super::exterior::potential_of_one_form;
use super::linalg;
use super::tensors::{Connection, CubicForm, Metric, OneForm};
use crate::error::{Error, Result};
use crate::jet::{rat, Jet};

/// `(∇g)_{ijk} = (g_{jk})_i − Σ_l Γ^l_{ij} g_{lk} − Σ_l Γ^l_{ik} g_{jl}`.
pub fn nabla_g(c: &Connection, g: &Metric) -> CubicForm {
    let n = c.n();
    CubicForm::from_fn(n, |i, j, k| {
        let mut acc = g.get(j, k).d(i);
        for l in 0..n {
            let a = c.get(l, i, j);
            if !a.is_zero() {
                acc = &acc - &(a * g.get(l, k));
            }
            let b = c.get(l, i, k);
            if !b.is_zero() {
                acc = &acc - &(b * g.get(j, l));
            }
        }
        acc
    })
}

/// `(∇g)_{ijk} = (∇g)_{jik}` to degree `order` for `i < j`, `i <= k`. Together
/// with the symmetry of `∇g` in its last two slots this forces total symmetry.
pub fn is_codazzi(c: &Connection, g: &Metric, order: usize) -> bool {
    let n = c.n();
    let t = nabla_g(c, g);
    for i in 0..n {
        for j in i + 1..n {
            for k in i..n {
                if !t.get(i, j, k).agrees_to(t.get(j, i, k), order) {
                    return false;
                }
            }
        }
    }
    true
}

/// `Γ^s_{ij} = ½ Σ_k g^{sk} ((g_{ki})_j + (g_{jk})_i − (g_{ji})_k)`.
pub fn levi_civita(g: &Metric) -> Result<Connection> {
    let n = g.n();
    let rows = (0..n)
        .map(|i| (0..n).map(|j| g.get(i, j).clone()).collect())
        .collect();
    let inv = linalg::inverse(rows)?;
    let half = rat(1, 2);
    // First-kind symbols [ij, k] are shared across s.
    let mut first = vec![Vec::with_capacity(n); n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = &(&g.get(k, i).d(j) + &g.get(j, k).d(i)) - &g.get(j, i).d(k);
                first[i * n + j].push(v.scale(&half));
            }
        }
    }
    Ok(Connection::symmetric_from_fn(n, |s, i, j| {
        let mut acc = Jet::zero(n, g.degree());
        for k in 0..n {
            acc = &acc + &(&inv[s][k] * &first[i * n + j][k]);
        }
        acc
    }))
}

fn require_diagonal_2d(g: &Metric) -> Result<()> {
    if g.n() != 2 {
        return Err(Error::Unsupported {
            tag: "diagonal-metric".into(),
            n: g.n(),
            reason: "two-dimensional metric required".into(),
        });
    }
    if !g.get(0, 1).is_zero() {
        return Err(Error::Precondition("metric is not diagonal".into()));
    }
    Ok(())
}

/// Levi-Civita symbols of a diagonal 2D metric from the closed-form
/// expressions in `g^{11} = 1/g_{11}`, `g^{22} = 1/g_{22}`.
pub fn levi_civita_diagonal_2d(g: &Metric) -> Result<Connection> {
    require_diagonal_2d(g)?;
    let (e, h) = (g.get(0, 0), g.get(1, 1));
    let half = rat(1, 2);
    let ie = e.reciprocal()?.scale(&half);
    let ih = h.reciprocal()?.scale(&half);
    let table = [
        [
            [&ie * &e.d(0), &ie * &e.d(1)],
            [&ie * &e.d(1), -(&ie * &h.d(0))],
        ],
        [
            [-(&ih * &e.d(1)), &ih * &h.d(0)],
            [&ih * &h.d(0), &ih * &h.d(1)],
        ],
    ];
    Ok(Connection::symmetric_from_fn(2, |k, i, j| {
        table[k][i][j].clone()
    }))
}

/// Sectional curvature `f` of a diagonal 2D metric, `Ric = f g`.
pub fn sectional_curvature_2d(g: &Metric) -> Result<Jet> {
    require_diagonal_2d(g)?;
    let (e, h) = (g.get(0, 0), g.get(1, 1));
    let ie = e.reciprocal()?;
    let ih = h.reciprocal()?;
    let (e1, e2, h1, h2) = (e.d(0), e.d(1), h.d(0), h.d(1));
    let second = &e.d(1).d(1) + &h.d(0).d(0);
    let a = (&ie * &ih * second).scale(&rat(-1, 2));
    let b = (&ie * &ih * &ih * (&(&h2 * &e2) + &(&h1 * &h1))).scale(&rat(1, 4));
    let c = (&ie * &ie * &ih * (&(&e1 * &h1) + &(&e2 * &e2))).scale(&rat(1, 4));
    Ok(a + b + c)
}

/// Trace form `t_k = Σ_i Γ^i_{ki}` whose closedness is the integrability
/// condition for a parallel volume form.
pub fn volume_trace_form(c: &Connection) -> OneForm {
    let n = c.n();
    OneForm::new(
        (0..n)
            .map(|k| crate::jet::sum((0..n).map(|i| c.get(i, k, i))).expect("n >= 1"))
            .collect(),
    )
}

/// The component `ν₁₂` of the `∇`-parallel volume form normalized by
/// `ν₁₂(0) = 1`: `ν₁₂ = exp(potential of t)`.
pub fn parallel_volume_2d(c: &Connection) -> Result<Jet> {
    if c.n() != 2 {
        return Err(Error::Unsupported {
            tag: "parallel-volume".into(),
            n: c.n(),
            reason: "two-dimensional connection required".into(),
        });
    }
    let t = volume_trace_form(c);
    let p = potential_of_one_form(&t).map_err(|e| match e {
        Error::NotClosedOneForm { .. } => Error::RicciNotSymmetric,
        other => other,
    })?;
    p.exp_jet()
}
