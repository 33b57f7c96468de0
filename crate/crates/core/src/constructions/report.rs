//! Build reports and their verification. Every check is recomputed from the
//! report's inputs and outputs alone, so a report read back from JSON can be
//! verified without access to the builder.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::census::{
    census, gamma_label, metric_label, parse_gamma_label, parse_metric_label, symbol_roles,
    Construction, GAUGE_SLOT,
};
use super::census::{CONFORMAL_DERIV_SLOT, CONFORMAL_SLOT};
use super::free_data::FreeData;
use super::prescribed_ricci::divergence_target;
use crate::error::{Error, Result};
use crate::geometry::{
    divergence_form, is_codazzi, levi_civita, parallel_volume_2d, ricci, torsion_trace, Bilinear,
    Connection, Metric,
};
use crate::jet::{Jet, SliceJet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub zero_to_order: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildReport {
    pub construction: Construction,
    pub n: usize,
    #[serde(rename = "D")]
    pub degree: usize,
    /// Prescribed Ricci tensor, for the connection and 2D metric builders.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prescribed_ricci: Option<Bilinear>,
    /// Given connection, for the 2D statistical builders.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_connection: Option<Connection>,
    pub free_data: FreeData,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<Connection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Metric>,
    /// `h` with `g = h r` (2D metric builder).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conformal_factor: Option<Jet>,
    /// `ν₁₂` of the parallel volume form (trace-free 2D builder).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<Jet>,
    /// Known structure the free data was extracted from, for round trips.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_connection: Option<Connection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_metric: Option<Metric>,
    pub iterations: usize,
    pub checks: Vec<Check>,
}

impl BuildReport {
    fn new(construction: Construction, n: usize, degree: usize, free_data: FreeData) -> Self {
        BuildReport {
            construction,
            n,
            degree,
            prescribed_ricci: None,
            input_connection: None,
            free_data,
            connection: None,
            metric: None,
            conformal_factor: None,
            volume: None,
            reference_connection: None,
            reference_metric: None,
            iterations: 0,
            checks: Vec::new(),
        }
    }

    fn finish(mut self) -> Result<Self> {
        self.checks = run_checks(&self, None)?;
        Ok(self)
    }

    pub(crate) fn for_connection(
        construction: Construction,
        r: Bilinear,
        fd: FreeData,
        conn: Connection,
        iterations: usize,
    ) -> Result<Self> {
        let mut rep = BuildReport::new(construction, conn.n(), conn.degree(), fd);
        rep.prescribed_ricci = Some(r);
        rep.connection = Some(conn);
        rep.iterations = iterations;
        rep.finish()
    }

    pub(crate) fn for_metric_2d(
        r: Bilinear,
        fd: FreeData,
        h: Jet,
        g: Metric,
        iterations: usize,
    ) -> Result<Self> {
        let mut rep = BuildReport::new(Construction::Metric2d, 2, g.degree(), fd);
        rep.prescribed_ricci = Some(r);
        rep.conformal_factor = Some(h);
        rep.metric = Some(g);
        rep.iterations = iterations;
        rep.finish()
    }

    pub(crate) fn for_statistical(
        construction: Construction,
        input: Option<Connection>,
        fd: FreeData,
        output: Option<Connection>,
        g: Metric,
        volume: Option<Jet>,
        iterations: usize,
    ) -> Result<Self> {
        let mut rep = BuildReport::new(construction, g.n(), g.degree(), fd);
        rep.input_connection = input;
        rep.connection = output;
        rep.metric = Some(g);
        rep.volume = volume;
        rep.iterations = iterations;
        rep.finish()
    }

    /// Attaches the structure a round trip started from and recomputes the
    /// checks, which then include exact recovery up to degree `D`.
    pub fn with_reference(
        mut self,
        conn: Option<Connection>,
        metric: Option<Metric>,
    ) -> Result<Self> {
        self.reference_connection = conn;
        self.reference_metric = metric;
        self.finish()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn missing(what: &str) -> Error {
    Error::Parse(format!("report lacks its {what}"))
}

struct Checks {
    order: Option<usize>,
    out: Vec<Check>,
}

impl Checks {
    fn add(&mut self, name: &str, default_order: usize, test: impl FnOnce(usize) -> bool) {
        let k = self.order.unwrap_or(default_order);
        self.out.push(Check {
            name: name.into(),
            zero_to_order: k,
            passed: test(k),
        });
    }
}

fn slice_agrees(j: &Jet, s: &SliceJet, k: usize) -> bool {
    j.restrict_x1().jet().agrees_to(s.jet(), k)
}

fn bilinear_agree(a: &Bilinear, b: &Bilinear, k: usize) -> bool {
    a.jets()
        .iter()
        .zip(b.jets())
        .all(|(x, y)| x.agrees_to(y, k))
}

fn metric_at_zero_is_identity(g: &Metric) -> bool {
    let n = g.n();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let c = g.get(i, j).constant_term();
            if i == j {
                c.is_one()
            } else {
                c.is_zero()
            }
        })
    })
}

/// Recomputes every check of the report. With `order = None` each check runs
/// at its advertised order; otherwise all run at `order`.
pub fn run_checks(rep: &BuildReport, order: Option<usize>) -> Result<Vec<Check>> {
    let d = rep.degree;
    let fd = &rep.free_data;
    let mut c = Checks {
        order,
        out: Vec::new(),
    };
    match rep.construction {
        Construction::General | Construction::TraceFreeTorsion | Construction::TorsionFree => {
            let conn = rep
                .connection
                .as_ref()
                .ok_or_else(|| missing("connection"))?;
            let r = rep
                .prescribed_ricci
                .as_ref()
                .ok_or_else(|| missing("prescribed tensor"))?;
            let roles = symbol_roles(rep.construction, rep.n)?;
            let ric = ricci(conn);
            c.add("ricci-residual", d.saturating_sub(1), |k| {
                bilinear_agree(&ric, r, k)
            });
            c.add("free-slots", d, |k| {
                roles.free.iter().all(|&(a, i, j)| {
                    fd.free_functions
                        .get(&gamma_label((a, i, j)))
                        .is_some_and(|f| conn.get(a, i, j).agrees_to(f, k))
                })
            });
            c.add("initial-data", d, |k| {
                roles.unknowns.iter().all(|&(a, i, j)| {
                    fd.initial_slices
                        .get(&gamma_label((a, i, j)))
                        .is_some_and(|s| slice_agrees(conn.get(a, i, j), s, k))
                })
            });
            match rep.construction {
                Construction::TraceFreeTorsion => {
                    let tau = torsion_trace(conn);
                    c.add("torsion-trace", d, |k| {
                        tau.jets().iter().all(|t| t.is_zero_to(k))
                    });
                }
                Construction::TorsionFree => {
                    c.add("lower-index-symmetry", d, |k| {
                        let n = conn.n();
                        (0..n).all(|a| {
                            (0..n).all(|i| {
                                (0..n).all(|j| conn.get(a, i, j).agrees_to(conn.get(a, j, i), k))
                            })
                        })
                    });
                    let gauge = fd.gauge().ok_or_else(|| missing(GAUGE_SLOT))?;
                    let alpha = divergence_target(r, gauge)?;
                    let div = divergence_form(conn);
                    c.add("divergence-form", d.saturating_sub(1), |k| {
                        div.jets()
                            .iter()
                            .zip(alpha.jets())
                            .all(|(x, y)| x.agrees_to(y, k))
                    });
                }
                _ => {}
            }
        }
        Construction::Metric2d => {
            let g = rep.metric.as_ref().ok_or_else(|| missing("metric"))?;
            let h = rep
                .conformal_factor
                .as_ref()
                .ok_or_else(|| missing("conformal factor"))?;
            let r = rep
                .prescribed_ricci
                .as_ref()
                .ok_or_else(|| missing("prescribed tensor"))?;
            let ric = ricci(&levi_civita(g)?);
            c.add("ricci-residual", d.saturating_sub(2), |k| {
                bilinear_agree(&ric, r, k)
            });
            c.add("conformal-form", d, |k| {
                g.form()
                    .jets()
                    .iter()
                    .zip(r.jets())
                    .all(|(x, y)| x.agrees_to(&(h * y), k))
            });
            let phi = fd.slice(CONFORMAL_SLOT)?;
            let psi = fd.slice(CONFORMAL_DERIV_SLOT)?;
            c.add("initial-data", d, |k| slice_agrees(h, phi, k));
            c.add("initial-derivative", d.saturating_sub(1), |k| {
                slice_agrees(&h.d(0), psi, k)
            });
        }
        Construction::Statistical2d
        | Construction::TraceFreeStatistical2d
        | Construction::Statistical => {
            let g = rep.metric.as_ref().ok_or_else(|| missing("metric"))?;
            let conn = match rep.construction {
                Construction::Statistical => rep.connection.as_ref(),
                _ => rep.input_connection.as_ref(),
            }
            .ok_or_else(|| missing("connection"))?;
            let n = g.n();
            c.add("codazzi", d.saturating_sub(1), |k| is_codazzi(conn, g, k));
            c.add("metric-symmetric", d, |k| g.form().is_symmetric_to(k));
            c.add("normalized-at-zero", 0, |_| metric_at_zero_is_identity(g));
            let cen = census(rep.construction, n)?;
            c.add("initial-data", d, |k| {
                cen.initial_slices.iter().all(|slot| {
                    let Some((i, j)) = parse_metric_label(slot) else {
                        return false;
                    };
                    fd.initial_slices
                        .get(slot)
                        .is_some_and(|s| slice_agrees(g.get(i, j), s, k))
                })
            });
            match rep.construction {
                Construction::TraceFreeStatistical2d => {
                    let nu = parallel_volume_2d(conn)?;
                    let det = &(g.get(0, 0) * g.get(1, 1)) - &(g.get(0, 1) * g.get(0, 1));
                    c.add("volume", d, |k| det.agrees_to(&(&nu * &nu), k));
                }
                _ => {
                    c.add("free-slots", d, |k| {
                        cen.free_functions.iter().all(|slot| {
                            let Some(f) = fd.free_functions.get(slot) else {
                                return false;
                            };
                            if slot == &metric_label(0, 0) {
                                g.get(0, 0).agrees_to(f, k)
                            } else {
                                let Some((a, i, j)) = parse_gamma_label(slot) else {
                                    return false;
                                };
                                conn.get(a, i, j).agrees_to(f, k)
                            }
                        })
                    });
                }
            }
            if rep.construction == Construction::Statistical {
                c.add("lower-index-symmetry", d, |k| {
                    (0..n).all(|a| {
                        (0..n).all(|i| {
                            (0..n).all(|j| conn.get(a, i, j).agrees_to(conn.get(a, j, i), k))
                        })
                    })
                });
            }
        }
    }
    if let Some(want) = &rep.reference_connection {
        let got = rep
            .connection
            .as_ref()
            .ok_or_else(|| missing("connection"))?;
        c.add("round-trip-connection", d, |k| {
            got.n() == want.n()
                && got
                    .jets()
                    .iter()
                    .zip(want.jets())
                    .all(|(a, b)| a.agrees_to(b, k))
        });
    }
    if let Some(want) = &rep.reference_metric {
        let got = rep.metric.as_ref().ok_or_else(|| missing("metric"))?;
        c.add("round-trip-metric", d, |k| {
            got.n() == want.n() && bilinear_agree(got.form(), want.form(), k)
        });
    }
    Ok(c.out)
}

/// Re-runs every check of the report, at `order` when given and otherwise at
/// the advertised orders. True iff the checks match the report's list and all
/// pass. Malformed reports verify as false.
pub fn verify(rep: &BuildReport, order: Option<usize>) -> bool {
    let Ok(checks) = run_checks(rep, order) else {
        return false;
    };
    let names_match = checks.len() == rep.checks.len()
        && checks
            .iter()
            .zip(&rep.checks)
            .all(|(a, b)| a.name == b.name);
    names_match && checks.iter().all(|c| c.passed)
}
