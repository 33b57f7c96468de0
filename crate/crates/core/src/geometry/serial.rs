//! JSON tables for tensors. Keys are one-based: `"k;i,j"` for `Γ^k_{ij}`,
//! `"i,j"` for two-index components. Every component is written, in index
//! order, so that output is canonical.

use std::collections::BTreeMap;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use super::tensors::{Bilinear, Connection, Metric};
use crate::jet::Jet;

pub(crate) fn gamma_key(k: usize, i: usize, j: usize) -> String {
    format!("{};{},{}", k + 1, i + 1, j + 1)
}

pub(crate) fn pair_key(i: usize, j: usize) -> String {
    format!("{},{}", i + 1, j + 1)
}

struct Table<'a>(Vec<(String, &'a Jet)>);

impl Serialize for Table<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

fn take<E: de::Error>(table: &mut BTreeMap<String, Jet>, key: &str) -> Result<Jet, E> {
    table
        .remove(key)
        .ok_or_else(|| E::custom(format!("missing component {key:?}")))
}

fn check_shape<E: de::Error>(jets: &[Jet], n: usize) -> Result<(), E> {
    let Some(first) = jets.first() else {
        return Ok(());
    };
    if jets
        .iter()
        .any(|j| j.nvars() != n || j.degree() != first.degree())
    {
        return Err(E::custom("components have inconsistent shapes"));
    }
    Ok(())
}

fn leftover<E: de::Error>(table: BTreeMap<String, Jet>) -> Result<(), E> {
    match table.into_keys().next() {
        Some(k) => Err(E::custom(format!("unexpected component {k:?}"))),
        None => Ok(()),
    }
}

impl Serialize for Connection {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n = self.n();
        let mut entries = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    entries.push((gamma_key(k, i, j), self.get(k, i, j)));
                }
            }
        }
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("n", &n)?;
        m.serialize_entry("symmetric", &self.symmetric_flag())?;
        m.serialize_entry("gamma", &Table(entries))?;
        m.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConnection {
    n: usize,
    symmetric: bool,
    gamma: BTreeMap<String, Jet>,
}

impl<'de> Deserialize<'de> for Connection {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let RawConnection {
            n,
            symmetric,
            mut gamma,
        } = RawConnection::deserialize(d)?;
        if n == 0 {
            return Err(de::Error::custom("connection dimension must be positive"));
        }
        let mut jets = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    jets.push(take(&mut gamma, &gamma_key(k, i, j))?);
                }
            }
        }
        leftover(gamma)?;
        check_shape(&jets, n)?;
        let c = Connection::from_parts(n, false, jets);
        if symmetric {
            c.into_symmetric().map_err(de::Error::custom)
        } else {
            Ok(c)
        }
    }
}

impl Serialize for Bilinear {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n = self.n();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push((pair_key(i, j), self.get(i, j)));
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("n", &n)?;
        m.serialize_entry("comps", &Table(entries))?;
        m.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBilinear {
    n: usize,
    comps: BTreeMap<String, Jet>,
}

impl<'de> Deserialize<'de> for Bilinear {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let RawBilinear { n, mut comps } = RawBilinear::deserialize(d)?;
        if n == 0 {
            return Err(de::Error::custom("tensor dimension must be positive"));
        }
        let mut jets = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                jets.push(take(&mut comps, &pair_key(i, j))?);
            }
        }
        leftover(comps)?;
        check_shape(&jets, n)?;
        let mut it = jets.into_iter();
        Ok(Bilinear::from_fn(n, |_, _| {
            it.next().expect("n² components")
        }))
    }
}

impl Serialize for Metric {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.form().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Metric {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Metric::new(Bilinear::deserialize(d)?).map_err(de::Error::custom)
    }
}
