//! Sparse QUBO models and the penalized XOR-chain construction.
//!
//! Each XOR gadget on `(x_i, x_{i+1}, o_i, a_i)` contributes
//!
//! ```text
//! x_i + x_{i+1} + (1 + p_i) o_i + 4 a_i + 2 x_i x_{i+1}
//!   - 2 (x_i + x_{i+1}) o_i - 4 (x_i + x_{i+1}) a_i + 4 o_i a_i
//! ```
//!
//! which vanishes exactly when `o_i = x_i XOR x_{i+1}` and `a_i = x_i AND x_{i+1}`
//! (before the penalty term) and is at least 1 otherwise.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::oracle::{Assignment, OracleSpec};
use crate::penalty::PenaltyConfig;

/// Largest magnitude for which every integer is exactly representable in an `f64`.
const EXACT_INT_LIMIT: f64 = 9_007_199_254_740_992.0;

/// Variable label. Indices are zero-based; the text form is one-based (`x1`, `o1`, `a1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Input(usize),
    Output(usize),
    Ancilla(usize),
}

impl Label {
    /// The fixed order `x_1..x_n, o_1..o_{n-1}, a_1..a_{n-1}`.
    pub fn canonical(spec: &OracleSpec) -> Vec<Label> {
        let g = spec.gadgets();
        (0..spec.n())
            .map(Label::Input)
            .chain((0..g).map(Label::Output))
            .chain((0..g).map(Label::Ancilla))
            .collect()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Label::Input(i) => write!(f, "x{}", i + 1),
            Label::Output(i) => write!(f, "o{}", i + 1),
            Label::Ancilla(i) => write!(f, "a{}", i + 1),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidModel(format!("bad variable label '{s}'"));
        let mut chars = s.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let index: usize = chars.as_str().parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        match kind {
            'x' => Ok(Label::Input(index - 1)),
            'o' => Ok(Label::Output(index - 1)),
            'a' => Ok(Label::Ancilla(index - 1)),
            _ => Err(bad()),
        }
    }
}

/// A quadratic pseudo-Boolean function over labeled binary variables.
///
/// Couplings are stored once per unordered pair as `(i, j, w)` with `i < j`,
/// sorted by `(i, j)`.
#[derive(Debug, Clone)]
pub struct QuboModel {
    labels: Vec<Label>,
    linear: Vec<f64>,
    quadratic: Vec<(usize, usize, f64)>,
    offset: f64,
    integral: bool,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl PartialEq for QuboModel {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
            && self.linear == other.linear
            && self.quadratic == other.quadratic
            && self.offset == other.offset
    }
}

impl QuboModel {
    /// Builds a model, merging duplicate pairs and canonicalizing pair order.
    pub fn new(
        labels: Vec<Label>,
        linear: Vec<f64>,
        quadratic: impl IntoIterator<Item = (usize, usize, f64)>,
        offset: f64,
    ) -> Result<Self> {
        let nv = labels.len();
        if linear.len() != nv {
            return Err(Error::InvalidModel(format!(
                "{} linear coefficients for {nv} variables",
                linear.len()
            )));
        }
        let mut seen = HashMap::with_capacity(nv);
        for (k, l) in labels.iter().enumerate() {
            if seen.insert(*l, k).is_some() {
                return Err(Error::InvalidModel(format!("duplicate label {l}")));
            }
        }
        let mut pairs: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (i, j, w) in quadratic {
            if i >= nv || j >= nv {
                return Err(Error::InvalidModel(format!(
                    "pair ({i}, {j}) out of range for {nv} variables"
                )));
            }
            if i == j {
                return Err(Error::InvalidModel(format!("self-pair on {}", labels[i])));
            }
            *pairs.entry((i.min(j), i.max(j))).or_insert(0.0) += w;
        }
        let quadratic: Vec<_> = pairs.into_iter().map(|((i, j), w)| (i, j, w)).collect();
        let all_coefs = || {
            linear
                .iter()
                .copied()
                .chain(quadratic.iter().map(|t| t.2))
                .chain(std::iter::once(offset))
        };
        if let Some(bad) = all_coefs().find(|v| !v.is_finite()) {
            return Err(Error::InvalidModel(format!("non-finite coefficient {bad}")));
        }
        let integral = all_coefs().all(|v| v.fract() == 0.0)
            && all_coefs().map(f64::abs).sum::<f64>() < EXACT_INT_LIMIT;

        let mut adjacency = vec![Vec::new(); nv];
        for &(i, j, w) in &quadratic {
            adjacency[i].push((j, w));
            adjacency[j].push((i, w));
        }
        Ok(Self {
            labels,
            linear,
            quadratic,
            offset,
            integral,
            adjacency,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn quadratic(&self) -> &[(usize, usize, f64)] {
        &self.quadratic
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// All coefficients are integers small enough for exact accumulation.
    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn neighbors(&self, var: usize) -> &[(usize, f64)] {
        &self.adjacency[var]
    }

    pub fn degree(&self, var: usize) -> usize {
        self.adjacency[var].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn index_of(&self, label: Label) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn linear_coef(&self, label: Label) -> Option<f64> {
        self.index_of(label).map(|k| self.linear[k])
    }

    pub fn coupling(&self, a: Label, b: Label) -> Option<f64> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        let key = (i.min(j), i.max(j));
        self.quadratic
            .binary_search_by_key(&key, |&(i, j, _)| (i, j))
            .ok()
            .map(|k| self.quadratic[k].2)
    }

    /// Energy of an assignment. Integral models accumulate in `i64`.
    pub fn energy(&self, assignment: &Assignment) -> Result<f64> {
        if assignment.len() != self.num_vars() {
            return Err(Error::LengthMismatch {
                expected: self.num_vars(),
                got: assignment.len(),
            });
        }
        let b = assignment.bits();
        if self.integral {
            let mut e = self.offset as i64;
            for (k, &c) in self.linear.iter().enumerate() {
                if b[k] == 1 {
                    e += c as i64;
                }
            }
            for &(i, j, w) in &self.quadratic {
                if b[i] & b[j] == 1 {
                    e += w as i64;
                }
            }
            Ok(e as f64)
        } else {
            let mut e = self.offset;
            for (k, &c) in self.linear.iter().enumerate() {
                if b[k] == 1 {
                    e += c;
                }
            }
            for &(i, j, w) in &self.quadratic {
                if b[i] & b[j] == 1 {
                    e += w;
                }
            }
            Ok(e)
        }
    }

    /// Energy of the state whose bit `k` is variable `k`. Requires at most 64 variables.
    pub fn energy_of_mask(&self, mask: u64) -> f64 {
        debug_assert!(self.num_vars() <= 64);
        let bit = |k: usize| (mask >> k) & 1 == 1;
        let mut e = self.offset;
        for (k, &c) in self.linear.iter().enumerate() {
            if bit(k) {
                e += c;
            }
        }
        for &(i, j, w) in &self.quadratic {
            if bit(i) && bit(j) {
                e += w;
            }
        }
        e
    }

    /// Energies equal at the model's comparison precision: exact for
    /// integral models, absolute 1e-9 otherwise.
    pub fn same_energy(&self, a: f64, b: f64) -> bool {
        if self.integral {
            a == b
        } else {
            (a - b).abs() <= ENERGY_TOLERANCE
        }
    }
}

/// Level-grouping tolerance for models with non-integer coefficients.
pub const ENERGY_TOLERANCE: f64 = 1e-9;

pub fn energy(model: &QuboModel, assignment: &Assignment) -> Result<f64> {
    model.energy(assignment)
}

/// Sums the penalized XOR gadget over every adjacent pair of inputs.
pub fn build_qubo(spec: &OracleSpec, penalties: &PenaltyConfig) -> Result<QuboModel> {
    penalties.check_dims(spec)?;
    let mut linear = vec![0.0; spec.total_vars()];
    let mut quadratic = Vec::with_capacity(8 * spec.gadgets());
    for (i, &p) in penalties.values().iter().enumerate() {
        let (xl, xr) = (spec.input_index(i), spec.input_index(i + 1));
        let (o, a) = (spec.output_index(i), spec.ancilla_index(i));
        linear[xl] += 1.0;
        linear[xr] += 1.0;
        linear[o] += 1.0 + p;
        linear[a] += 4.0;
        quadratic.extend([
            (xl, xr, 2.0),
            (xl, o, -2.0),
            (xr, o, -2.0),
            (xl, a, -4.0),
            (xr, a, -4.0),
            (o, a, 4.0),
        ]);
    }
    QuboModel::new(Label::canonical(spec), linear, quadratic, 0.0)
}

/// JSON number that prints integral values without a fractional part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coef(pub f64);

impl Serialize for Coef {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.fract() == 0.0 && self.0.abs() < EXACT_INT_LIMIT {
            s.serialize_i64(self.0 as i64)
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Coef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        f64::deserialize(d).map(Coef)
    }
}

/// On-disk form of a Simon-family QUBO.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuboDocument {
    pub n: usize,
    pub penalties: Vec<Coef>,
    pub labels: Vec<String>,
    pub linear: IndexMap<String, Coef>,
    pub quadratic: Vec<(String, String, Coef)>,
    pub offset: Coef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

impl QuboDocument {
    pub fn new(spec: &OracleSpec, penalties: &PenaltyConfig, model: &QuboModel) -> Self {
        let names: Vec<String> = model.labels().iter().map(Label::to_string).collect();
        Self {
            n: spec.n(),
            penalties: penalties.values().iter().map(|&p| Coef(p)).collect(),
            linear: names
                .iter()
                .cloned()
                .zip(model.linear().iter().map(|&c| Coef(c)))
                .collect(),
            quadratic: model
                .quadratic()
                .iter()
                .map(|&(i, j, w)| (names[i].clone(), names[j].clone(), Coef(w)))
                .collect(),
            labels: names,
            offset: Coef(model.offset()),
            meta: None,
        }
    }

    pub fn with_meta(mut self, meta: serde_json::Value) -> Self {
        self.meta = Some(meta);
        self
    }

    /// Validates the document and rebuilds the in-memory model.
    pub fn to_parts(&self) -> Result<(OracleSpec, PenaltyConfig, QuboModel)> {
        let spec = OracleSpec::new(self.n)?;
        let penalties =
            PenaltyConfig::explicit(&spec, self.penalties.iter().map(|c| c.0).collect())?;
        let labels = self
            .labels
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<Label>>>()?;
        if labels != Label::canonical(&spec) {
            return Err(Error::InvalidModel(format!(
                "labels must be x1..x{n}, o1..o{g}, a1..a{g} in that order",
                n = spec.n(),
                g = spec.gadgets()
            )));
        }
        let index: HashMap<&str, usize> = self
            .labels
            .iter()
            .enumerate()
            .map(|(k, s)| (s.as_str(), k))
            .collect();
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::InvalidModel(format!("unknown label '{s}'")))
        };
        let mut linear = vec![0.0; labels.len()];
        for (name, c) in &self.linear {
            linear[lookup(name)?] = c.0;
        }
        let quadratic = self
            .quadratic
            .iter()
            .map(|(a, b, w)| Ok((lookup(a)?, lookup(b)?, w.0)))
            .collect::<Result<Vec<_>>>()?;
        let model = QuboModel::new(labels, linear, quadratic, self.offset.0)?;
        Ok((spec, penalties, model))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
