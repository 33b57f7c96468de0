use crate::error::{Error, Result};
use crate::jet::Jet;

fn zeros(count: usize, n: usize, degree: usize) -> Vec<Jet> {
    vec![Jet::zero(n, degree); count]
}

fn min_valid<'a>(jets: impl IntoIterator<Item = &'a Jet>) -> usize {
    jets.into_iter().map(Jet::valid_order).min().unwrap_or(0)
}

/// Christoffel symbols `Γ^k_{ij}` of a linear connection, stored as a dense
/// `n³` table indexed `(k, i, j)` with zero-based indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    n: usize,
    symmetric: bool,
    gamma: Vec<Jet>,
}

impl Connection {
    pub fn zero(n: usize, degree: usize) -> Self {
        Connection {
            n,
            symmetric: false,
            gamma: zeros(n * n * n, n, degree),
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> Jet) -> Self {
        let mut gamma = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    gamma.push(f(k, i, j));
                }
            }
        }
        Connection {
            n,
            symmetric: false,
            gamma,
        }
    }

    /// Torsion-free connection; `f` is called for `i <= j` only.
    pub fn symmetric_from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> Jet) -> Self {
        let mut c = Connection {
            n,
            symmetric: true,
            gamma: Vec::new(),
        };
        let mut table: Vec<Option<Jet>> = vec![None; n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let v = f(k, i, j);
                    table[c.idx(k, j, i)] = Some(v.clone());
                    table[c.idx(k, i, j)] = Some(v);
                }
            }
        }
        c.gamma = table.into_iter().map(|v| v.expect("filled")).collect();
        c
    }

    fn idx(&self, k: usize, i: usize, j: usize) -> usize {
        (k * self.n + i) * self.n + j
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.gamma[0].degree()
    }

    pub fn valid_order(&self) -> usize {
        min_valid(&self.gamma)
    }

    pub fn symmetric_flag(&self) -> bool {
        self.symmetric
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> &Jet {
        &self.gamma[self.idx(k, i, j)]
    }

    /// Sets `Γ^k_{ij}`; on a symmetric connection `Γ^k_{ji}` follows.
    pub fn set(&mut self, k: usize, i: usize, j: usize, v: Jet) {
        if self.symmetric {
            let t = self.idx(k, j, i);
            self.gamma[t] = v.clone();
        }
        let s = self.idx(k, i, j);
        self.gamma[s] = v;
    }

    pub fn jets(&self) -> &[Jet] {
        &self.gamma
    }

    /// Exact symmetry of the table in the lower indices, regardless of the flag.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|k| {
            (0..self.n).all(|i| {
                (i + 1..self.n).all(|j| {
                    let (a, b) = (self.get(k, i, j), self.get(k, j, i));
                    a.agrees_to(b, a.degree())
                })
            })
        })
    }

    /// Marks the connection torsion-free after checking the table.
    pub fn into_symmetric(mut self) -> Result<Self> {
        if !self.is_symmetric() {
            return Err(Error::Precondition(
                "connection is not symmetric in its lower indices".into(),
            ));
        }
        self.symmetric = true;
        Ok(self)
    }

    pub(crate) fn from_parts(n: usize, symmetric: bool, gamma: Vec<Jet>) -> Self {
        Connection {
            n,
            symmetric,
            gamma,
        }
    }
}

/// Components `b_{ij}` of a `(0,2)`-tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct Bilinear {
    n: usize,
    comps: Vec<Jet>,
}

impl Bilinear {
    pub fn zero(n: usize, degree: usize) -> Self {
        Bilinear {
            n,
            comps: zeros(n * n, n, degree),
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Jet) -> Self {
        let mut comps = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                comps.push(f(i, j));
            }
        }
        Bilinear { n, comps }
    }

    pub fn diagonal(entries: Vec<Jet>) -> Self {
        let n = entries.len();
        let degree = entries[0].degree();
        Bilinear::from_fn(n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                Jet::zero(n, degree)
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.comps[0].degree()
    }

    pub fn valid_order(&self) -> usize {
        min_valid(&self.comps)
    }

    pub fn get(&self, i: usize, j: usize) -> &Jet {
        &self.comps[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Jet) {
        self.comps[i * self.n + j] = v;
    }

    pub fn jets(&self) -> &[Jet] {
        &self.comps
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| {
            (i + 1..self.n).all(|j| {
                let (a, b) = (self.get(i, j), self.get(j, i));
                a.agrees_to(b, a.degree())
            })
        })
    }

    /// Symmetry up to total degree `order`.
    pub fn is_symmetric_to(&self, order: usize) -> bool {
        (0..self.n)
            .all(|i| (i + 1..self.n).all(|j| self.get(i, j).agrees_to(self.get(j, i), order)))
    }

    pub fn transpose(&self) -> Bilinear {
        Bilinear::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn sub(&self, other: &Bilinear) -> Result<Bilinear> {
        if self.n != other.n {
            return Err(Error::Mismatch(
                "bilinear forms of different dimension".into(),
            ));
        }
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<Result<_>>()?;
        Ok(Bilinear { n: self.n, comps })
    }

    /// True iff every component vanishes to total degree `order`.
    pub fn is_zero_to(&self, order: usize) -> bool {
        self.comps.iter().all(|j| j.is_zero_to(order))
    }
}

/// Symmetric, nondegenerate-at-0 bilinear form.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    form: Bilinear,
    normalized_at_zero: bool,
}

impl Metric {
    pub fn new(form: Bilinear) -> Result<Self> {
        if !form.is_symmetric() {
            return Err(Error::Precondition(
                "metric components are not symmetric".into(),
            ));
        }
        // Invertibility of the constant-term matrix is checked by elimination.
        let n = form.n();
        let constants: Vec<Vec<_>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| form.get(i, j).constant_term().clone())
                    .collect()
            })
            .collect();
        if !super::linalg::rational_matrix_invertible(constants) {
            return Err(Error::Singular("metric is degenerate at 0".into()));
        }
        let normalized_at_zero = (0..n).all(|i| {
            (0..n).all(|j| {
                let c = form.get(i, j).constant_term();
                if i == j {
                    num_traits::One::is_one(c)
                } else {
                    num_traits::Zero::is_zero(c)
                }
            })
        });
        Ok(Metric {
            form,
            normalized_at_zero,
        })
    }

    pub fn form(&self) -> &Bilinear {
        &self.form
    }

    pub fn n(&self) -> usize {
        self.form.n()
    }

    pub fn degree(&self) -> usize {
        self.form.degree()
    }

    pub fn get(&self, i: usize, j: usize) -> &Jet {
        self.form.get(i, j)
    }

    /// `g_{ij}(0) = δ_{ij}`.
    pub fn normalized_at_zero(&self) -> bool {
        self.normalized_at_zero
    }
}

/// Components `ω_i` of a one-form.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm {
    comps: Vec<Jet>,
}

impl OneForm {
    pub fn new(comps: Vec<Jet>) -> Self {
        OneForm { comps }
    }

    pub fn zero(n: usize, degree: usize) -> Self {
        OneForm {
            comps: zeros(n, n, degree),
        }
    }

    pub fn gradient(f: &Jet) -> Self {
        OneForm {
            comps: (0..f.nvars()).map(|i| f.d(i)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.comps.len()
    }

    pub fn get(&self, i: usize) -> &Jet {
        &self.comps[i]
    }

    pub fn jets(&self) -> &[Jet] {
        &self.comps
    }

    pub fn valid_order(&self) -> usize {
        min_valid(&self.comps)
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        OneForm {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &OneForm) -> OneForm {
        OneForm {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// `((ω_i)_j − (ω_j)_i) / 2`.
    pub fn antisymmetrized_gradient(&self) -> TwoForm {
        let n = self.n();
        let half = crate::jet::rat(1, 2);
        TwoForm::from_upper(n, self.comps[0].degree(), |i, j| {
            (&self.comps[i].d(j) - &self.comps[j].d(i)).scale(&half)
        })
    }
}

/// Antisymmetric components `a_{ij} = −a_{ji}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoForm {
    n: usize,
    comps: Vec<Jet>,
}

impl TwoForm {
    /// Builds the form from its strictly upper entries `i < j`.
    pub fn from_upper(n: usize, degree: usize, mut f: impl FnMut(usize, usize) -> Jet) -> Self {
        let mut comps = zeros(n * n, n, degree);
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                comps[j * n + i] = -&v;
                comps[i * n + j] = v;
            }
        }
        TwoForm { n, comps }
    }

    pub fn zero(n: usize, degree: usize) -> Self {
        TwoForm {
            n,
            comps: zeros(n * n, n, degree),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Jet {
        &self.comps[i * self.n + j]
    }

    pub fn jets(&self) -> &[Jet] {
        &self.comps
    }

    pub fn valid_order(&self) -> usize {
        min_valid(&self.comps)
    }

    pub fn as_bilinear(&self) -> Bilinear {
        Bilinear::from_fn(self.n, |i, j| self.get(i, j).clone())
    }
}

/// Components `C_{ijk}` of a `(0,3)`-tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicForm {
    n: usize,
    comps: Vec<Jet>,
}

impl CubicForm {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> Jet) -> Self {
        let mut comps = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    comps.push(f(i, j, k));
                }
            }
        }
        CubicForm { n, comps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Jet {
        &self.comps[(i * self.n + j) * self.n + k]
    }
}

/// Torsion components `T^k_{ij} = Γ^k_{ij} − Γ^k_{ji}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Torsion {
    n: usize,
    comps: Vec<Jet>,
}

impl Torsion {
    pub(crate) fn new(n: usize, comps: Vec<Jet>) -> Self {
        Torsion { n, comps }
    }

    pub fn get(&self, k: usize, i: usize, j: usize) -> &Jet {
        &self.comps[(k * self.n + i) * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Jet::is_zero)
    }
}
