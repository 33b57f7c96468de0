//! Scenario files: one JSON document naming a construction, its prescribed
//! data and a policy for every free slot. Running a scenario is deterministic
//! in its seed.
//!
//! ```json
//! {
//!   "construction": "torsion-free", "n": 3, "D": 4, "seed": 7,
//!   "prescribed": "random",
//!   "free_data": { "default": "zero", "slots": { "phi": "random" } },
//!   "output": "report.json"
//! }
//! ```

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    build_metric_2d_from_free_data, build_prescribed_ricci_general,
    build_prescribed_ricci_torsion_free, build_prescribed_ricci_trace_free_torsion,
    build_statistical_2d_from_free_data, build_statistical_nd,
    build_trace_free_statistical_2d_from_free_data, census, free_data_from_connection,
    free_data_from_statistical, BuildReport, Census, Construction, FreeData, CONFORMAL_SLOT,
};
use crate::error::{Error, Result};
use crate::geometry::{levi_civita, ricci, torsion_trace, Bilinear, Connection, Metric};
use crate::jet::{int, Jet, SliceJet};

/// Degree and coefficient bounds for random polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomBounds {
    pub degree_bound: usize,
    pub coeff_bound: i64,
}

impl Default for RandomBounds {
    fn default() -> Self {
        RandomBounds {
            degree_bound: 2,
            coeff_bound: 3,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorPolicy<T> {
    #[default]
    Zero,
    Random,
    RandomWith(RandomBounds),
    Inline(T),
}

/// What to put in one free slot. Inline values are a jet in `n` variables
/// for free functions and in `n − 1` variables for initial slices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SlotPolicy {
    Named(SlotKind),
    Inline(Jet),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotKind {
    Zero,
    Random,
}

impl Default for SlotPolicy {
    fn default() -> Self {
        SlotPolicy::Named(SlotKind::Zero)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeDataPolicy {
    #[serde(default)]
    pub default: SlotPolicy,
    #[serde(default)]
    pub slots: BTreeMap<String, SlotPolicy>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub construction: Construction,
    pub n: usize,
    #[serde(rename = "D")]
    pub degree: usize,
    #[serde(default)]
    pub seed: u64,
    /// Bounds used by every "random" policy that does not carry its own.
    #[serde(default)]
    pub random: RandomBounds,
    /// Prescribed Ricci tensor (connection and 2D metric constructions).
    #[serde(default)]
    pub prescribed: TensorPolicy<Bilinear>,
    /// Given connection (2D statistical constructions). Random connections
    /// are symmetric for the trace-free construction.
    #[serde(default)]
    pub connection: TensorPolicy<Connection>,
    #[serde(default)]
    pub free_data: FreeDataPolicy,
    /// Seed a known structure, extract its free data and rebuild it. Replaces
    /// the prescribed, connection and free-data policies.
    #[serde(default)]
    pub round_trip: bool,
    /// Report path, relative to the scenario file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl Scenario {
    pub fn from_json(s: &str) -> Result<Self> {
        let sc: Scenario = serde_json::from_str(s)?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree < 2 {
            return Err(Error::Parse(format!(
                "D must be at least 2, got {}",
                self.degree
            )));
        }
        if self.random.coeff_bound < 0 {
            return Err(Error::Parse("coeff_bound must be non-negative".into()));
        }
        self.construction.check_dimension(self.n)?;
        let cen = census(self.construction, self.n)?;
        for slot in self.free_data.slots.keys() {
            if !cen.free_functions.contains(slot) && !cen.initial_slices.contains(slot) {
                return Err(Error::SlotMismatch(format!(
                    "{slot} is not a free slot of {}",
                    self.construction
                )));
            }
        }
        Ok(())
    }
}

struct Generator {
    rng: ChaCha8Rng,
    n: usize,
    degree: usize,
    bounds: RandomBounds,
}

impl Generator {
    fn poly(&mut self, nvars: usize, bounds: RandomBounds) -> Jet {
        let db = bounds.degree_bound.min(self.degree);
        Jet::random_poly_with(&mut self.rng, nvars, self.degree, db, bounds.coeff_bound)
    }

    fn full(&mut self) -> Jet {
        self.poly(self.n, self.bounds)
    }

    /// Random polynomial with prescribed value at the origin.
    fn anchored(&mut self, nvars: usize, value: i64, bounds: RandomBounds) -> Jet {
        let mut j = self.poly(nvars, bounds);
        j.set_coeff(&vec![0; nvars], int(value));
        j
    }

    fn nonzero_constant(&mut self) -> i64 {
        let b = self.bounds.coeff_bound.max(1);
        let v = self.rng.gen_range(1..=b);
        if self.rng.gen_bool(0.5) {
            v
        } else {
            -v
        }
    }
}

fn check_shape(what: &str, n: usize, degree: usize, got_n: usize, got_d: usize) -> Result<()> {
    if got_n != n || got_d != degree {
        return Err(Error::Mismatch(format!(
            "{what} has n = {got_n}, D = {got_d}; scenario has n = {n}, D = {degree}"
        )));
    }
    Ok(())
}

fn prescribed(sc: &Scenario, gen: &mut Generator) -> Result<Bilinear> {
    let (n, d) = (sc.n, sc.degree);
    let bounds = match &sc.prescribed {
        TensorPolicy::Zero => return Ok(Bilinear::zero(n, d)),
        TensorPolicy::Inline(r) => {
            check_shape("prescribed tensor", n, d, r.n(), r.degree())?;
            return Ok(r.clone());
        }
        TensorPolicy::Random => sc.random,
        TensorPolicy::RandomWith(b) => *b,
    };
    if sc.construction == Construction::Metric2d {
        let a = gen.nonzero_constant();
        let b = gen.nonzero_constant();
        let r11 = gen.anchored(2, a, bounds);
        let r22 = gen.anchored(2, b, bounds);
        return Ok(Bilinear::diagonal(vec![r11, r22]));
    }
    let mut jets: Vec<Jet> = (0..n * n).map(|_| gen.poly(n, bounds)).collect();
    if sc.construction == Construction::TorsionFree {
        // Symmetric part random, antisymmetric part exact: a = dω with ω random.
        let omega: Vec<Jet> = (0..n).map(|_| gen.poly(n, bounds)).collect();
        let base = jets.clone();
        for i in 0..n {
            for j in 0..n {
                let sym = &base[i.min(j) * n + i.max(j)];
                let a = &omega[j].d(i) - &omega[i].d(j);
                jets[i * n + j] = sym + &a.scale(&crate::jet::rat(1, 2));
            }
        }
        jets = jets.into_iter().map(|j| j.assume_valid_order(d)).collect();
    }
    Ok(Bilinear::from_fn(n, |i, j| jets[i * n + j].clone()))
}

fn given_connection(sc: &Scenario, gen: &mut Generator) -> Result<Connection> {
    let (n, d) = (sc.n, sc.degree);
    let symmetric = sc.construction == Construction::TraceFreeStatistical2d;
    let bounds = match &sc.connection {
        TensorPolicy::Zero => return Ok(Connection::zero(n, d)),
        TensorPolicy::Inline(c) => {
            check_shape("connection", n, d, c.n(), c.degree())?;
            return Ok(c.clone());
        }
        TensorPolicy::Random => sc.random,
        TensorPolicy::RandomWith(b) => *b,
    };
    Ok(if symmetric {
        Connection::symmetric_from_fn(n, |_, _, _| gen.poly(n, bounds))
    } else {
        Connection::from_fn(n, |_, _, _| gen.poly(n, bounds))
    })
}

/// Metric slots are pinned to the identity at the origin, under every policy
/// except inline data.
fn metric_anchor(slot: &str) -> Option<i64> {
    crate::constructions::parse_metric_label(slot).map(|(i, j)| i64::from(i == j))
}

fn free_data(sc: &Scenario, cen: &Census, gen: &mut Generator) -> Result<FreeData> {
    let (n, d) = (sc.n, sc.degree);
    let mut fd = FreeData::new();
    let mut fill = |slot: &String, nvars: usize| -> Result<Jet> {
        let policy = sc
            .free_data
            .slots
            .get(slot)
            .unwrap_or(&sc.free_data.default);
        match policy {
            SlotPolicy::Named(SlotKind::Zero) => Ok(match metric_anchor(slot) {
                Some(v) => Jet::constant(nvars, d, int(v)),
                None => Jet::zero(nvars, d),
            }),
            SlotPolicy::Named(SlotKind::Random) => {
                // The conformal factor must not vanish at the origin.
                let anchor = if sc.construction == Construction::Metric2d && slot == CONFORMAL_SLOT
                {
                    Some(gen.nonzero_constant())
                } else {
                    metric_anchor(slot)
                };
                Ok(match anchor {
                    Some(v) => gen.anchored(nvars, v, sc.random),
                    None => gen.poly(nvars, sc.random),
                })
            }
            SlotPolicy::Inline(j) => {
                check_shape(slot, nvars, d, j.nvars(), j.degree())?;
                Ok(j.clone())
            }
        }
    };
    for slot in &cen.free_functions {
        let j = fill(slot, n)?;
        fd.free_functions.insert(slot.clone(), j);
    }
    for slot in &cen.initial_slices {
        let j = fill(slot, n - 1)?;
        fd.initial_slices.insert(slot.clone(), SliceJet::new(j));
    }
    Ok(fd)
}

/// Random connection in the class the construction produces: τ = 0 for the
/// trace-free construction, symmetric for the torsion-free one.
pub fn seeded_connection(
    construction: Construction,
    n: usize,
    degree: usize,
    seed: u64,
    bounds: RandomBounds,
) -> Result<Connection> {
    construction.check_dimension(n)?;
    let mut gen = Generator {
        rng: ChaCha8Rng::seed_from_u64(seed),
        n,
        degree,
        bounds,
    };
    Ok(match construction {
        Construction::General => Connection::from_fn(n, |_, _, _| gen.full()),
        Construction::TorsionFree => Connection::symmetric_from_fn(n, |_, _, _| gen.full()),
        Construction::TraceFreeTorsion => {
            let mut c = Connection::from_fn(n, |_, _, _| gen.full());
            // τ_j = Σ_i (Γ^i_ij − Γ^i_ji); shift Γ^j_{j',j} for j' ≠ j to cancel it.
            for j in 0..n {
                let tau = torsion_trace(&c);
                let i = if j == 0 { 1 } else { 0 };
                let fixed = c.get(i, i, j) - tau.get(j);
                c.set(i, i, j, fixed);
            }
            debug_assert!(torsion_trace(&c).jets().iter().all(Jet::is_zero));
            c
        }
        other => {
            return Err(Error::Unsupported {
                tag: other.tag().into(),
                n,
                reason: "not a connection construction".into(),
            })
        }
    })
}

/// Random metric with `g(0)` the identity.
pub fn seeded_metric(n: usize, degree: usize, seed: u64, bounds: RandomBounds) -> Result<Metric> {
    let mut gen = Generator {
        rng: ChaCha8Rng::seed_from_u64(seed),
        n,
        degree,
        bounds,
    };
    let mut upper = BTreeMap::new();
    for i in 0..n {
        for j in i..n {
            upper.insert((i, j), gen.anchored(n, i64::from(i == j), bounds));
        }
    }
    Metric::new(Bilinear::from_fn(n, |i, j| {
        upper[&(i.min(j), i.max(j))].clone()
    }))
}

/// Round-trip bounds: seeded data stays a polynomial of degree below `D`, so
/// derivatives and the gauge potential are exact through degree `D`.
fn round_trip_bounds(sc: &Scenario) -> RandomBounds {
    RandomBounds {
        degree_bound: sc.random.degree_bound.min(sc.degree - 1),
        coeff_bound: sc.random.coeff_bound,
    }
}

fn run_round_trip(sc: &Scenario) -> Result<BuildReport> {
    let (n, d) = (sc.n, sc.degree);
    let bounds = round_trip_bounds(sc);
    match sc.construction {
        Construction::General | Construction::TraceFreeTorsion | Construction::TorsionFree => {
            let c0 = seeded_connection(sc.construction, n, d, sc.seed, bounds)?;
            let r = ricci(&c0);
            let fd = free_data_from_connection(sc.construction, &r, &c0)?;
            build_connection(sc.construction, &r, &fd)?.with_reference(Some(c0), None)
        }
        Construction::Statistical2d
        | Construction::TraceFreeStatistical2d
        | Construction::Statistical => {
            let g0 = seeded_metric(n, d, sc.seed, bounds)?;
            let c0 = levi_civita(&g0)?;
            let fd = free_data_from_statistical(sc.construction, &g0, &c0)?;
            let rep = match sc.construction {
                Construction::Statistical2d => build_statistical_2d_from_free_data(&c0, &fd)?,
                Construction::TraceFreeStatistical2d => {
                    build_trace_free_statistical_2d_from_free_data(&c0, &fd)?
                }
                _ => build_statistical_nd(n, &fd)?,
            };
            let conn = (sc.construction == Construction::Statistical).then_some(c0);
            rep.with_reference(conn, Some(g0))
        }
        Construction::Metric2d => Err(Error::Unsupported {
            tag: sc.construction.tag().into(),
            n,
            reason: "round trips need a metric with known Ricci tensor".into(),
        }),
    }
}

fn build_connection(c: Construction, r: &Bilinear, fd: &FreeData) -> Result<BuildReport> {
    match c {
        Construction::General => build_prescribed_ricci_general(r, fd),
        Construction::TraceFreeTorsion => build_prescribed_ricci_trace_free_torsion(r, fd),
        _ => build_prescribed_ricci_torsion_free(r, fd),
    }
}

/// Generates the scenario's data and runs its builder.
pub fn run_scenario(sc: &Scenario) -> Result<BuildReport> {
    sc.validate()?;
    if sc.round_trip {
        return run_round_trip(sc);
    }
    let cen = census(sc.construction, sc.n)?;
    let mut gen = Generator {
        rng: ChaCha8Rng::seed_from_u64(sc.seed),
        n: sc.n,
        degree: sc.degree,
        bounds: sc.random,
    };
    match sc.construction {
        Construction::General | Construction::TraceFreeTorsion | Construction::TorsionFree => {
            let r = prescribed(sc, &mut gen)?;
            let fd = free_data(sc, &cen, &mut gen)?;
            build_connection(sc.construction, &r, &fd)
        }
        Construction::Metric2d => {
            let r = prescribed(sc, &mut gen)?;
            let fd = free_data(sc, &cen, &mut gen)?;
            build_metric_2d_from_free_data(&r, &fd)
        }
        Construction::Statistical2d => {
            let c = given_connection(sc, &mut gen)?;
            let fd = free_data(sc, &cen, &mut gen)?;
            build_statistical_2d_from_free_data(&c, &fd)
        }
        Construction::TraceFreeStatistical2d => {
            let c = given_connection(sc, &mut gen)?;
            let fd = free_data(sc, &cen, &mut gen)?;
            build_trace_free_statistical_2d_from_free_data(&c, &fd)
        }
        Construction::Statistical => {
            let fd = free_data(sc, &cen, &mut gen)?;
            build_statistical_nd(sc.n, &fd)
        }
    }
}
