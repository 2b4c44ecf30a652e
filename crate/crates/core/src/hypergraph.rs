//! Weighted hypergraphs on `[n]`, keyed by vertex-set bitmask.
//!
//! Vertices are 0-based in memory and 1-based in JSON files. Weights on `∅` and
//! on singletons are kept but never act: the corresponding averaging operators
//! are the identity.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::random::{coin, draw_weight, rng, WeightLaw};
use crate::scalar::{parse_rational, Mode, Rational, Scalar};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 12;

/// A subset of `[n]` as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(pub u32);

impl VertexSet {
    pub fn from_vertices(vs: &[usize]) -> Self {
        VertexSet(vs.iter().fold(0, |m, &v| m | (1 << v)))
    }

    pub fn full(n: usize) -> Self {
        VertexSet(((1u64 << n) - 1) as u32)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn vertices(self) -> Vec<usize> {
        (0..32).filter(|&v| self.contains(v)).collect()
    }

    pub fn complement(self, n: usize) -> Self {
        VertexSet(!self.0 & VertexSet::full(n).0)
    }

    /// Every subset of `[n]`, ascending by mask.
    pub fn all(n: usize) -> impl Iterator<Item = VertexSet> {
        (0..(1u32 << n)).map(VertexSet)
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vertices().iter().map(|x| (x + 1).to_string()).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hypergraph<S> {
    n: usize,
    weights: BTreeMap<VertexSet, S>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

impl<S: Scalar> Hypergraph<S> {
    pub fn new(n: usize, weights: BTreeMap<VertexSet, S>) -> Result<Self> {
        check_n(n)?;
        if let Some(b) = weights.keys().find(|b| b.0 >> n != 0) {
            return Err(Error::arg(format!("edge mask {:#b} exceeds n = {n}", b.0)));
        }
        Ok(Hypergraph { n, weights })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, BTreeMap::new())
    }

    /// Builds from 0-based vertex lists; duplicate edges are summed.
    pub fn from_edges(n: usize, edges: &[(Vec<usize>, S)]) -> Result<Self> {
        check_n(n)?;
        let mut w: BTreeMap<VertexSet, S> = BTreeMap::new();
        for (vs, x) in edges {
            if let Some(v) = vs.iter().find(|&&v| v >= n) {
                return Err(Error::arg(format!("vertex {} out of range 1..={n}", v + 1)));
            }
            let b = VertexSet::from_vertices(vs);
            if b.len() != vs.len() {
                return Err(Error::arg(format!("edge {vs:?} repeats a vertex")));
            }
            *w.entry(b).or_insert_with(S::zero) += x;
        }
        Self::new(n, w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &BTreeMap<VertexSet, S> {
        &self.weights
    }

    pub fn weight(&self, b: VertexSet) -> S {
        self.weights.get(&b).cloned().unwrap_or_else(S::zero)
    }

    pub fn set_weight(&mut self, b: VertexSet, w: S) {
        self.weights.insert(b, w);
    }

    /// Edges that act nontrivially: `|B| >= 2` and nonzero weight.
    pub fn active_edges(&self) -> impl Iterator<Item = (VertexSet, &S)> {
        self.weights
            .iter()
            .filter(|(b, w)| b.len() >= 2 && !w.is_zero())
            .map(|(b, w)| (*b, w))
    }

    /// Sum of weights over edges that act (`|B| >= 2`).
    pub fn total_weight(&self) -> S {
        let mut s = S::zero();
        for (_, w) in self.active_edges() {
            s += w;
        }
        s
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        for (b, w) in &self.weights {
            if *w < S::zero() {
                r.errors.push(format!("negative weight {} on {b}", w.to_text()));
            }
            if b.len() <= 1 && !w.is_zero() {
                r.notes.push(format!("weight on {b} acts as the identity and is ignored"));
            }
            if *b == VertexSet::full(self.n) && !w.is_zero() {
                r.notes.push(format!(
                    "weight on the full set shifts every nontrivial eigenvalue by {}",
                    w.to_text()
                ));
            }
        }
        r
    }

    pub fn require_valid(&self) -> Result<()> {
        let r = self.validate();
        if r.is_valid() {
            Ok(())
        } else {
            Err(Error::arg(r.errors.join("; ")))
        }
    }

    /// Connectivity of the 2-section of the support.
    pub fn is_connected(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for (b, w) in self.active_edges() {
            if *w <= S::zero() {
                continue;
            }
            let vs = b.vertices();
            for &v in &vs[1..] {
                let a = find(&mut parent, vs[0]);
                let c = find(&mut parent, v);
                parent[a] = c;
            }
        }
        let root = find(&mut parent, 0);
        (1..self.n).all(|v| find(&mut parent, v) == root)
    }

    /// `φ_i = Σ_{B ∋ i, |B| >= 2} w_B`.
    pub fn vertex_loads(&self) -> Vec<S> {
        let mut phi = vec![S::zero(); self.n];
        for (b, w) in self.active_edges() {
            for v in b.vertices() {
                phi[v] += w;
            }
        }
        phi
    }

    /// `φ = min_i φ_i`.
    pub fn phi(&self) -> S {
        self.vertex_loads()
            .into_iter()
            .reduce(|a, b| if b < a { b } else { a })
            .unwrap_or_else(S::zero)
    }

    /// `w_B = c_{|B|}` for coefficients `c_0..c_n`.
    pub fn mean_field(n: usize, c: &[S]) -> Result<Self> {
        check_n(n)?;
        if c.len() != n + 1 {
            return Err(Error::arg(format!("mean field needs {} coefficients c_0..c_n", n + 1)));
        }
        if c.iter().any(|x| *x < S::zero()) {
            return Err(Error::arg("mean-field coefficients must be non-negative"));
        }
        let mut w = BTreeMap::new();
        for b in VertexSet::all(n) {
            let l = b.len();
            if !c[l].is_zero() {
                w.insert(b, c[l].clone());
            }
        }
        Self::new(n, w)
    }

    /// `w_{[n] \ {x}} = c_x`, all other weights zero.
    pub fn codim1(c: &[S]) -> Result<Self> {
        let n = c.len();
        check_n(n)?;
        if n < 2 {
            return Err(Error::arg("codimension-1 hypergraphs need n >= 2"));
        }
        if c.iter().any(|x| *x < S::zero()) {
            return Err(Error::arg("codimension-1 weights must be non-negative"));
        }
        let full = VertexSet::full(n);
        let mut w = BTreeMap::new();
        for (x, cx) in c.iter().enumerate() {
            if !cx.is_zero() {
                w.insert(VertexSet(full.0 & !(1 << x)), cx.clone());
            }
        }
        Self::new(n, w)
    }

    /// Recovers `c_x = w_{[n] \ {x}}` when every acting weight sits on an `(n-1)`-set.
    pub fn codim1_coefficients(&self) -> Option<Vec<S>> {
        if self.active_edges().any(|(b, _)| b.len() != self.n - 1) {
            return None;
        }
        let full = VertexSet::full(self.n);
        Some(
            (0..self.n)
                .map(|x| self.weight(VertexSet(full.0 & !(1 << x))))
                .collect(),
        )
    }

    /// Each subset with `|B| >= 2` is kept with probability `p`; weights follow `law`.
    pub fn random(n: usize, p: f64, law: WeightLaw, seed: u64, stream: u64) -> Result<Self> {
        check_n(n)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::arg("edge probability must lie in [0, 1]"));
        }
        let mut r = rng(seed, stream);
        let mut w = BTreeMap::new();
        for b in VertexSet::all(n).filter(|b| b.len() >= 2) {
            if coin(p, &mut r) {
                w.insert(b, S::from_rational(&draw_weight(law, &mut r)));
            }
        }
        Self::new(n, w)
    }

    /// Image under the vertex relabelling `v -> perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let w = self
            .weights
            .iter()
            .map(|(b, x)| {
                let vs: Vec<usize> = b.vertices().iter().map(|&v| perm[v]).collect();
                (VertexSet::from_vertices(&vs), x.clone())
            })
            .collect();
        Hypergraph { n: self.n, weights: w }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Hypergraph<T> {
        Hypergraph {
            n: self.n,
            weights: self.weights.iter().map(|(b, w)| (*b, f(w))).collect(),
        }
    }

    /// Canonical JSON: edges ascending by mask, 1-based vertices, exact weights as strings.
    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self
            .weights
            .iter()
            .map(|(b, w)| {
                let vs: Vec<usize> = b.vertices().iter().map(|v| v + 1).collect();
                let wv = match S::MODE {
                    Mode::Exact => json!(w.to_text()),
                    Mode::Float => json!(w.to_f64()),
                };
                json!({ "B": vs, "w": wv })
            })
            .collect();
        json!({ "n": self.n, "edges": edges })
    }

    /// First 16 hex digits of SHA-256 over the canonical JSON.
    pub fn digest(&self) -> String {
        let text = self.to_json().to_string();
        let h = Sha256::digest(text.as_bytes());
        h.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::arg("hypergraph needs n >= 1"));
    }
    if n > MAX_VERTICES {
        return Err(Error::Resource {
            what: "vertex count".into(),
            needed: n as u64,
            limit: MAX_VERTICES as u64,
        });
    }
    Ok(())
}

#[derive(Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<RawEdge>,
}

#[derive(Deserialize)]
struct RawEdge {
    #[serde(rename = "B")]
    b: Vec<usize>,
    w: RawWeight,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawWeight {
    Text(String),
    Number(serde_json::Number),
}

impl RawWeight {
    fn exact(&self) -> Option<Rational> {
        match self {
            RawWeight::Text(s) => parse_rational(s),
            RawWeight::Number(n) => n
                .as_i64()
                .map(|i| Rational::from_integer(i.into()))
                .or_else(|| n.as_u64().map(|u| Rational::from_integer(u.into()))),
        }
    }

    fn float(&self) -> Option<f64> {
        match self {
            RawWeight::Text(s) => parse_rational(s).map(|q| q.to_f64()),
            RawWeight::Number(n) => n.as_f64(),
        }
    }
}

/// Parses the JSON edge format. Exact mode accepts `"p/q"` strings, decimal
/// strings and JSON integers, and rejects JSON floats.
pub fn parse_json<S: Scalar>(text: &str) -> Result<Hypergraph<S>> {
    let raw: RawGraph = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut edges = Vec::with_capacity(raw.edges.len());
    for e in &raw.edges {
        if let Some(&v) = e.b.iter().find(|&&v| v == 0 || v > raw.n) {
            return Err(Error::arg(format!("vertex {v} out of range 1..={}", raw.n)));
        }
        let w = match S::MODE {
            Mode::Exact => S::from_rational(&e.w.exact().ok_or_else(|| {
                Error::arg("exact mode requires rational weights (\"p/q\" strings or integers)")
            })?),
            Mode::Float => {
                let f = e.w.float().ok_or_else(|| Error::arg("unreadable weight"))?;
                S::from_rational(&Rational::from_float(f).ok_or_else(|| Error::arg("non-finite weight"))?)
            }
        };
        edges.push((e.b.iter().map(|v| v - 1).collect::<Vec<_>>(), w));
    }
    Hypergraph::from_edges(raw.n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rint};

    fn path() -> Hypergraph<Rational> {
        Hypergraph::from_edges(3, &[(vec![0, 1], rint(1)), (vec![1, 2], rint(1))]).unwrap()
    }

    #[test]
    fn path_basics() {
        let g = path();
        assert!(g.is_connected());
        assert_eq!(g.phi(), rint(1));
        assert_eq!(g.vertex_loads(), vec![rint(1), rint(2), rint(1)]);
        assert!(g.validate().is_valid());
    }

    #[test]
    fn disconnected_and_singletons() {
        let g = Hypergraph::from_edges(
            4,
            &[(vec![0, 1], rint(1)), (vec![2], rint(5)), (vec![2, 3], rint(0))],
        )
        .unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.validate().notes.len(), 1);
    }

    #[test]
    fn json_roundtrip_and_duplicates() {
        let text = r#"{"n":3,"edges":[{"B":[1,2],"w":"1/2"},{"B":[2,1],"w":"1/2"},{"B":[2,3],"w":1}]}"#;
        let g: Hypergraph<Rational> = parse_json(text).unwrap();
        assert_eq!(g, path());
        let again: Hypergraph<Rational> = parse_json(&g.to_json().to_string()).unwrap();
        assert_eq!(again, g);
        assert_eq!(g.digest(), again.digest());
    }

    #[test]
    fn json_mode_rules() {
        let text = r#"{"n":2,"edges":[{"B":[1,2],"w":0.5}]}"#;
        assert!(parse_json::<Rational>(text).is_err());
        assert_eq!(parse_json::<f64>(text).unwrap().weight(VertexSet(3)), 0.5);
        let bad = r#"{"n":2,"edges":[{"B":[1,3],"w":"1"}]}"#;
        assert!(matches!(parse_json::<f64>(bad), Err(Error::Argument(_))));
        let broken = "{\"n\":2,\n\"edges\":[";
        assert!(matches!(parse_json::<f64>(broken), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn negative_weight_fails_validation() {
        let g = Hypergraph::from_edges(2, &[(vec![0, 1], rint(-1))]).unwrap();
        assert!(!g.validate().is_valid());
    }

    #[test]
    fn mean_field_and_codim1() {
        let c = vec![rint(0), rint(0), rint(3), rint(1)];
        let g = Hypergraph::mean_field(3, &c).unwrap();
        assert_eq!(g.weight(VertexSet::from_vertices(&[0, 2])), rint(3));
        assert_eq!(g.phi(), rint(7));
        assert_eq!(g.weight(VertexSet::full(3)), rint(1));
        let h = Hypergraph::codim1(&[rint(1), rint(0), rat(1, 2)]).unwrap();
        assert_eq!(h.codim1_coefficients().unwrap(), vec![rint(1), rint(0), rat(1, 2)]);
        assert!(Hypergraph::<Rational>::codim1(&[rint(1)]).is_err());
    }

    #[test]
    fn random_same_in_both_modes() {
        let a: Hypergraph<Rational> = Hypergraph::random(4, 0.5, WeightLaw::Uniform01, 3, 9).unwrap();
        let b: Hypergraph<f64> = Hypergraph::random(4, 0.5, WeightLaw::Uniform01, 3, 9).unwrap();
        assert_eq!(a.map(|x| x.to_f64()), b);
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            Hypergraph::<f64>::empty(13),
            Err(Error::Resource { .. })
        ));
    }
}
