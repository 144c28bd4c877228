//! Symbolic tensor-category data: degree-one components, Serre ideal
//! generators, center generators, second exterior and symmetric powers of
//! the labels that occur there, and `GL_n` dimensions.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::graph::{Edge, EdgeId, Graph, GraphError, Side, VertexId};
use crate::partition::Bipartition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cannot expand label {label} on edge {edge}")]
    UnsupportedLabel { edge: String, label: String },
    #[error("{label} has more than {n} rows")]
    TooManyRows { n: usize, label: String },
}

pub type Factors = BTreeMap<EdgeId, Bipartition>;
pub type Degree = BTreeMap<VertexId, i64>;

/// `mult · ⨂_e L_{e,(λ,μ)}` in degree `degree`. Trivial factors and zero
/// degree entries are not stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TensorTerm {
    pub factors: Factors,
    pub degree: Degree,
    pub mult: u64,
}

impl TensorTerm {
    pub fn new(factors: Factors, degree: Degree, mult: u64) -> TensorTerm {
        TensorTerm {
            factors: factors.into_iter().filter(|(_, b)| !b.is_trivial()).collect(),
            degree: degree.into_iter().filter(|(_, d)| *d != 0).collect(),
            mult,
        }
    }

    /// The dual object: `λ ↔ μ` on every edge, degree negated.
    pub fn dual(&self) -> TensorTerm {
        TensorTerm {
            factors: self.factors.iter().map(|(e, b)| (e.clone(), b.dual())).collect(),
            degree: self.degree.iter().map(|(v, d)| (v.clone(), -d)).collect(),
            mult: self.mult,
        }
    }

    pub fn total_degree(&self) -> i64 {
        self.degree.values().sum()
    }

    pub fn to_json(&self) -> Value {
        let factors: Map<String, Value> = self
            .factors
            .iter()
            .map(|(e, b)| (e.0.clone(), serde_json::to_value(b).expect("plain data")))
            .collect();
        let degree: Map<String, Value> = self
            .degree
            .iter()
            .map(|(v, d)| (v.0.clone(), json!(d)))
            .collect();
        json!({"factors": factors, "degree": degree, "mult": self.mult})
    }
}

impl fmt::Display for TensorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mult != 1 {
            write!(f, "{}·", self.mult)?;
        }
        if self.factors.is_empty() {
            f.write_str("1")?;
        } else {
            let parts: Vec<String> = self
                .factors
                .iter()
                .map(|(e, b)| format!("L_{{{e},{b}}}"))
                .collect();
            f.write_str(&parts.join(" ⊗ "))?;
        }
        let deg: Vec<String> = self
            .degree
            .iter()
            .map(|(v, d)| match d {
                1 => v.0.clone(),
                -1 => format!("-{v}"),
                _ => format!("{d}{v}"),
            })
            .collect();
        if deg.is_empty() {
            f.write_str("  @ 0")
        } else {
            write!(f, "  @ {}", deg.join("+"))
        }
    }
}

/// A formal sum of [`TensorTerm`]s; equal objects in equal degree merge.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FormalSum {
    terms: BTreeMap<(Factors, Degree), u64>,
}

impl FormalSum {
    pub fn new() -> FormalSum {
        FormalSum::default()
    }

    pub fn unit() -> FormalSum {
        FormalSum::from(TensorTerm::new(Factors::new(), Degree::new(), 1))
    }

    pub fn push(&mut self, t: TensorTerm) {
        if t.mult == 0 {
            return;
        }
        let t = TensorTerm::new(t.factors, t.degree, t.mult);
        *self.terms.entry((t.factors, t.degree)).or_default() += t.mult;
    }

    pub fn extend(&mut self, other: &FormalSum) {
        for t in other.terms() {
            self.push(t);
        }
    }

    pub fn terms(&self) -> Vec<TensorTerm> {
        self.terms
            .iter()
            .map(|((f, d), m)| TensorTerm {
                factors: f.clone(),
                degree: d.clone(),
                mult: *m,
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of multiplicities.
    pub fn count(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn dual(&self) -> FormalSum {
        let mut out = FormalSum::new();
        for t in self.terms() {
            out.push(t.dual());
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.terms().iter().map(TensorTerm::to_json).collect())
    }

    /// Dimension after specializing every edge to `GL_n`.
    pub fn dim(&self, n: usize) -> Result<BigInt, TensorError> {
        let mut total = BigInt::zero();
        for t in self.terms() {
            let mut d = BigInt::from(t.mult);
            for b in t.factors.values() {
                d *= gl_dim(n, b)?;
            }
            total += d;
        }
        Ok(total)
    }
}

impl From<TensorTerm> for FormalSum {
    fn from(t: TensorTerm) -> Self {
        let mut s = FormalSum::new();
        s.push(t);
        s
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        let lines: Vec<String> = self.terms().iter().map(ToString::to_string).collect();
        f.write_str(&lines.join("\n"))
    }
}

fn bp(lambda: &[u64], mu: &[u64]) -> Bipartition {
    Bipartition::new(lambda, mu).expect("literal partitions")
}

fn vect() -> Bipartition {
    bp(&[1], &[])
}

fn covect() -> Bipartition {
    bp(&[], &[1])
}

fn adjoint() -> Bipartition {
    bp(&[1], &[1])
}

/// `⨂_{S_v} V* ⊗ ⨂_{T_v} V ⊗ ⨂_{L_v} L_{[(1),(1)]}` in degree `v`.
pub fn degree_component(graph: &Graph, v: &VertexId) -> Result<TensorTerm, TensorError> {
    let mut factors = Factors::new();
    for slot in graph.slots_at(v)? {
        let label = match (factors.get(&slot.edge), slot.side) {
            (Some(_), _) => adjoint(),
            (None, Side::Source) => covect(),
            (None, Side::Target) => vect(),
        };
        factors.insert(slot.edge.clone(), label);
    }
    Ok(TensorTerm::new(factors, Degree::from([(v.clone(), 1)]), 1))
}

struct Incidence<'a> {
    sources: Vec<&'a Edge>,
    targets: Vec<&'a Edge>,
    loops: Vec<&'a Edge>,
}

fn incidence<'a>(graph: &'a Graph, v: &VertexId) -> Incidence<'a> {
    Incidence {
        sources: graph.outgoing(v),
        targets: graph.incoming(v),
        loops: graph.loops(v),
    }
}

/// Family a)–d) term at `v` with the distinguished edge `e` labelled
/// `special`; the other incident edges carry the highest symmetric labels.
fn quadratic_at(inc: &Incidence, e: &EdgeId, special: Bipartition, v: &VertexId) -> TensorTerm {
    let mut factors = Factors::new();
    for i in &inc.sources {
        factors.insert(i.id.clone(), bp(&[], &[2]));
    }
    for i in &inc.targets {
        factors.insert(i.id.clone(), bp(&[2], &[]));
    }
    for i in &inc.loops {
        factors.insert(i.id.clone(), bp(&[2], &[2]));
    }
    factors.insert(e.clone(), special);
    TensorTerm::new(factors, Degree::from([(v.clone(), 2)]), 1)
}

/// Highest component of the product of the degree-one components at `v`
/// and `w`: an edge seen from both sides becomes `L_{[(1),(1)]}`.
fn joint_component(graph: &Graph, v: &VertexId, w: &VertexId) -> Result<Factors, TensorError> {
    let a = degree_component(graph, v)?;
    let b = degree_component(graph, w)?;
    let mut factors = a.factors;
    for (e, label) in b.factors {
        match factors.get(&e) {
            Some(_) => {
                factors.insert(e, adjoint());
            }
            None => {
                factors.insert(e, label);
            }
        }
    }
    Ok(factors)
}

/// The generators of the Serre ideal, families a) through f).
pub fn serre_generators(graph: &Graph) -> Result<FormalSum, TensorError> {
    let mut out = FormalSum::new();
    for v in graph.vertices() {
        let inc = incidence(graph, v);
        for e in &inc.targets {
            out.push(quadratic_at(&inc, &e.id, bp(&[1, 1], &[]), v));
        }
        for e in &inc.sources {
            out.push(quadratic_at(&inc, &e.id, bp(&[], &[1, 1]), v));
        }
        for e in &inc.loops {
            out.push(quadratic_at(&inc, &e.id, bp(&[2], &[1, 1]), v));
            out.push(quadratic_at(&inc, &e.id, bp(&[1, 1], &[2]), v));
        }
    }
    for e in graph.edges() {
        if let (Some(s), Some(t)) = (&e.source, &e.target) {
            if s != t {
                let factors = joint_component(graph, s, t)?;
                let degree = Degree::from([(s.clone(), 1), (t.clone(), 1)]);
                out.push(TensorTerm::new(factors, degree, 1));
            }
        }
    }
    let vs = graph.vertices();
    for (i, v) in vs.iter().enumerate() {
        for w in &vs[i + 1..] {
            if !graph.adjacent(v, w) {
                let factors = joint_component(graph, v, w)?;
                let degree = Degree::from([(v.clone(), 1), (w.clone(), 1)]);
                out.push(TensorTerm::new(factors, degree, 1));
            }
        }
    }
    Ok(out)
}

/// A map from the unit object whose image is central.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CenterMap {
    /// `(1, coev_{V_e}, −1): 1 → 1_{s(e)} ⊕ V_e⊗V_e* ⊕ 1_{t(e)}`; a missing
    /// endpoint drops its summand.
    Edge {
        edge: EdgeId,
        source: Option<VertexId>,
        target: Option<VertexId>,
    },
    /// `coev_{V_l}: 1 → V_l⊗V_l*`.
    Loop { edge: EdgeId },
    /// `1_v': 1 → 1_v'`.
    Prime { vertex: VertexId },
}

impl fmt::Display for CenterMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CenterMap::Edge {
                edge,
                source,
                target,
            } => {
                let mut coeffs = Vec::new();
                let mut parts = Vec::new();
                if let Some(s) = source {
                    coeffs.push("1".to_string());
                    parts.push(format!("1_{s}"));
                }
                coeffs.push(format!("coev_V_{edge}"));
                parts.push(format!("V_{edge}⊗V_{edge}*"));
                if let Some(t) = target {
                    coeffs.push("-1".to_string());
                    parts.push(format!("1_{t}"));
                }
                write!(f, "({}): 1 -> {}", coeffs.join(", "), parts.join(" ⊕ "))
            }
            CenterMap::Loop { edge } => write!(f, "coev_V_{edge}: 1 -> V_{edge}⊗V_{edge}*"),
            CenterMap::Prime { vertex } => write!(f, "1_{vertex}': 1 -> 1_{vertex}'"),
        }
    }
}

impl CenterMap {
    pub fn to_json(&self) -> Value {
        match self {
            CenterMap::Edge {
                edge,
                source,
                target,
            } => json!({"kind": "edge", "edge": edge.0, "source": source.as_ref().map(|v| &v.0), "target": target.as_ref().map(|v| &v.0)}),
            CenterMap::Loop { edge } => json!({"kind": "loop", "edge": edge.0}),
            CenterMap::Prime { vertex } => json!({"kind": "prime", "vertex": vertex.0}),
        }
    }
}

pub fn center_generators(graph: &Graph) -> Vec<CenterMap> {
    let mut out = Vec::new();
    for e in graph.edges() {
        if e.is_loop() {
            out.push(CenterMap::Loop { edge: e.id.clone() });
        } else {
            out.push(CenterMap::Edge {
                edge: e.id.clone(),
                source: e.source.clone(),
                target: e.target.clone(),
            });
        }
    }
    for v in graph.vertices() {
        out.push(CenterMap::Prime { vertex: v.clone() });
    }
    out
}

/// Center generators after amputating the given leaves.
pub fn center_generators_amputated(
    graph: &Graph,
    leaves: &[VertexId],
) -> Result<Vec<CenterMap>, TensorError> {
    let mut g = graph.clone();
    for v in leaves {
        g = g.amputate(v)?;
    }
    Ok(center_generators(&g))
}

type LabelSum = Vec<(Bipartition, u64)>;

fn unsupported(edge: &EdgeId, b: &Bipartition) -> TensorError {
    TensorError::UnsupportedLabel {
        edge: edge.0.clone(),
        label: b.to_string(),
    }
}

fn exterior_of(edge: &EdgeId, b: &Bipartition) -> Result<LabelSum, TensorError> {
    Ok(if *b == vect() {
        vec![(bp(&[1, 1], &[]), 1)]
    } else if *b == covect() {
        vec![(bp(&[], &[1, 1]), 1)]
    } else if *b == adjoint() {
        vec![(bp(&[1, 1], &[2]), 1), (bp(&[2], &[1, 1]), 1), (adjoint(), 1)]
    } else {
        return Err(unsupported(edge, b));
    })
}

fn symmetric_of(edge: &EdgeId, b: &Bipartition) -> Result<LabelSum, TensorError> {
    Ok(if *b == vect() {
        vec![(bp(&[2], &[]), 1)]
    } else if *b == covect() {
        vec![(bp(&[], &[2]), 1)]
    } else if *b == adjoint() {
        vec![
            (bp(&[2], &[2]), 1),
            (bp(&[1, 1], &[1, 1]), 1),
            (adjoint(), 1),
            (Bipartition::trivial(), 1),
        ]
    } else {
        return Err(unsupported(edge, b));
    })
}

fn product_of(edge: &EdgeId, a: &Bipartition, b: &Bipartition) -> Result<LabelSum, TensorError> {
    if a.is_trivial() {
        return Ok(vec![(b.clone(), 1)]);
    }
    if b.is_trivial() {
        return Ok(vec![(a.clone(), 1)]);
    }
    let (v, w) = (vect(), covect());
    Ok(if *a == v && *b == v {
        vec![(bp(&[2], &[]), 1), (bp(&[1, 1], &[]), 1)]
    } else if *a == w && *b == w {
        vec![(bp(&[], &[2]), 1), (bp(&[], &[1, 1]), 1)]
    } else if (*a == v && *b == w) || (*a == w && *b == v) {
        vec![(adjoint(), 1), (Bipartition::trivial(), 1)]
    } else {
        return Err(TensorError::UnsupportedLabel {
            edge: edge.0.clone(),
            label: format!("{a} ⊗ {b}"),
        });
    })
}

/// Expands `⨂_e (Σ labels)` distributively.
fn distribute(per_edge: Vec<(EdgeId, LabelSum)>, degree: &Degree, mult: u64, out: &mut FormalSum) {
    let mut partial: Vec<(Factors, u64)> = vec![(Factors::new(), mult)];
    for (e, sum) in per_edge {
        let mut next = Vec::new();
        for (f, m) in &partial {
            for (b, k) in &sum {
                let mut f2 = f.clone();
                f2.insert(e.clone(), b.clone());
                next.push((f2, m * k));
            }
        }
        partial = next;
    }
    for (f, m) in partial {
        out.push(TensorTerm::new(f, degree.clone(), m));
    }
}

fn doubled(d: &Degree) -> Degree {
    d.iter().map(|(v, x)| (v.clone(), 2 * x)).collect()
}

/// `Λ²` (odd) or `S²` (even) of a single term with multiplicity one.
fn square_of_term(t: &TensorTerm, odd: bool, out: &mut FormalSum) -> Result<(), TensorError> {
    let edges: Vec<(&EdgeId, &Bipartition)> = t.factors.iter().collect();
    let mut ext = Vec::new();
    let mut sym = Vec::new();
    for (e, b) in &edges {
        ext.push(exterior_of(e, b)?);
        sym.push(symmetric_of(e, b)?);
    }
    let degree = doubled(&t.degree);
    for mask in 0u64..(1u64 << edges.len()) {
        if (mask.count_ones() % 2 == 1) != odd {
            continue;
        }
        let per_edge = edges
            .iter()
            .enumerate()
            .map(|(i, (e, _))| {
                let sum = if mask >> i & 1 == 1 { &ext[i] } else { &sym[i] };
                ((*e).clone(), sum.clone())
            })
            .collect();
        distribute(per_edge, &degree, 1, out);
    }
    Ok(())
}

fn product_into(a: &TensorTerm, b: &TensorTerm, mult: u64, out: &mut FormalSum) -> Result<(), TensorError> {
    let mut edges: Vec<&EdgeId> = a.factors.keys().chain(b.factors.keys()).collect();
    edges.sort();
    edges.dedup();
    let trivial = Bipartition::trivial();
    let mut per_edge = Vec::new();
    for e in edges {
        let x = a.factors.get(e).unwrap_or(&trivial);
        let y = b.factors.get(e).unwrap_or(&trivial);
        per_edge.push((e.clone(), product_of(e, x, y)?));
    }
    let mut degree = a.degree.clone();
    for (v, d) in &b.degree {
        *degree.entry(v.clone()).or_default() += d;
    }
    distribute(per_edge, &degree, mult, out);
    Ok(())
}

fn square(x: &FormalSum, odd: bool) -> Result<FormalSum, TensorError> {
    let terms = x.terms();
    let mut out = FormalSum::new();
    for (k, t) in terms.iter().enumerate() {
        let mut one = FormalSum::new();
        square_of_term(t, odd, &mut one)?;
        for s in one.terms() {
            out.push(TensorTerm { mult: s.mult * t.mult, ..s });
        }
        let pairs = t.mult * (t.mult - 1) / 2;
        if pairs > 0 {
            product_into(t, t, pairs, &mut out)?;
        }
        for u in &terms[k + 1..] {
            product_into(t, u, t.mult * u.mult, &mut out)?;
        }
    }
    Ok(out)
}

/// `Λ²x`, for sums of terms whose factors are `V`, `V*` or `L_{[(1),(1)]}`.
pub fn lambda2(x: &FormalSum) -> Result<FormalSum, TensorError> {
    square(x, true)
}

/// `S²x`, under the same restrictions as [`lambda2`].
pub fn sym2(x: &FormalSum) -> Result<FormalSum, TensorError> {
    square(x, false)
}

/// Dimension of the `GL_n` irreducible with highest weight
/// `(λ_1, …, λ_p, 0, …, 0, −μ_q, …, −μ_1)`, by the Weyl dimension formula.
pub fn gl_dim(n: usize, b: &Bipartition) -> Result<BigInt, TensorError> {
    let (p, q) = (b.lambda.len(), b.mu.len());
    if p + q > n {
        return Err(TensorError::TooManyRows {
            n,
            label: b.to_string(),
        });
    }
    let mut w = vec![0i64; n];
    for (i, &x) in b.lambda.parts().iter().enumerate() {
        w[i] = x as i64;
    }
    for (j, &x) in b.mu.parts().iter().enumerate() {
        w[n - 1 - j] = -(x as i64);
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        for j in i + 1..n {
            let gap = (j - i) as i64;
            num *= w[i] - w[j] + gap;
            den *= gap;
        }
    }
    Ok(num / den)
}

/// The two decompositions of `Λ²` and `S²` of `gl_n = V⊗V*` checked by
/// dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlReport {
    pub n: usize,
    pub lambda2_constituents: BigInt,
    pub lambda2_expected: BigInt,
    pub sym2_constituents: BigInt,
    pub sym2_expected: BigInt,
}

impl GlReport {
    pub fn holds(&self) -> bool {
        self.lambda2_constituents == self.lambda2_expected && self.sym2_constituents == self.sym2_expected
    }
}

impl fmt::Display for GlReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={}: Λ² {} (expected {}), S² {} (expected {})",
            self.n, self.lambda2_constituents, self.lambda2_expected, self.sym2_constituents, self.sym2_expected
        )
    }
}

/// Sums constituent dimensions of `Λ²(V⊗V*)` and `S²(V⊗V*)` and compares
/// them with `n²(n²∓1)/2`.
pub fn verify_gl_sq_decompositions(n: usize) -> Result<GlReport, TensorError> {
    let e = EdgeId::new("e");
    let mut gl = FormalSum::new();
    gl.push(TensorTerm::new(Factors::from([(e, adjoint())]), Degree::new(), 1));
    gl.push(TensorTerm::new(Factors::new(), Degree::new(), 1));
    let d = BigInt::from(n * n);
    Ok(GlReport {
        n,
        lambda2_constituents: lambda2(&gl)?.dim(n)?,
        lambda2_expected: &d * (&d - 1) / 2,
        sym2_constituents: sym2(&gl)?.dim(n)?,
        sym2_expected: &d * (&d + 1) / 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphSpec;
    use crate::testutil::{hub, star3};
    use proptest::prelude::*;

    fn eid(s: &str) -> EdgeId {
        EdgeId::new(s)
    }

    fn term(factors: &[(&str, Bipartition)]) -> TensorTerm {
        TensorTerm::new(
            factors.iter().map(|(e, b)| (eid(e), b.clone())).collect(),
            Degree::new(),
            1,
        )
    }

    fn edgeless(names: &[&str]) -> Graph {
        Graph::new(GraphSpec {
            vertices: names.iter().map(|s| VertexId::new(*s)).collect(),
            edges: vec![],
        })
        .unwrap()
    }

    #[test]
    fn degree_components() {
        let t = degree_component(&star3(), &VertexId::new("v")).unwrap();
        assert_eq!(t.factors.len(), 3);
        assert!(t.factors.values().all(|b| *b == vect()));
        let t = degree_component(&edgeless(&["x"]), &VertexId::new("x")).unwrap();
        assert!(t.factors.is_empty());
        assert_eq!(t.degree, Degree::from([(VertexId::new("x"), 1)]));
        let t = degree_component(&hub(), &VertexId::new("c")).unwrap();
        for e in ["t1", "t2", "t3"] {
            assert_eq!(t.factors[&eid(e)], covect());
        }
        assert_eq!(t.factors[&eid("t4")], adjoint());
    }

    #[test]
    fn star_ideal() {
        let s = serre_generators(&star3()).unwrap();
        let terms = s.terms();
        assert_eq!(terms.len(), 3);
        for t in &terms {
            let special: Vec<_> = t.factors.values().filter(|b| **b == bp(&[1, 1], &[])).collect();
            assert_eq!(special.len(), 1);
            assert_eq!(t.factors.values().filter(|b| **b == bp(&[2], &[])).count(), 2);
            assert_eq!(t.total_degree(), 2);
        }
    }

    #[test]
    fn small_serre_cases() {
        assert!(serre_generators(&edgeless(&["x"])).unwrap().is_empty());
        let s = serre_generators(&edgeless(&["x", "y"])).unwrap();
        let terms = s.terms();
        assert_eq!(terms.len(), 1);
        assert!(terms[0].factors.is_empty());
        assert_eq!(terms[0].degree.len(), 2);
    }

    #[test]
    fn hub_serre_families() {
        let g = hub();
        let s = serre_generators(&g).unwrap();
        // a) at each leaf: 3; b) at c: 3; c), d) for the loop: 2;
        // e) for the three non-loop edges: 3; f) among the leaves: 3
        assert_eq!(s.count(), 14);
        assert!(s.terms().iter().all(|t| t.total_degree() == 2));
        let loop_terms: Vec<_> = s
            .terms()
            .into_iter()
            .filter(|t| t.factors.get(&eid("t4")) == Some(&bp(&[2], &[1, 1])))
            .collect();
        assert_eq!(loop_terms.len(), 1);
        assert_eq!(loop_terms[0].factors[&eid("t1")], bp(&[], &[2]));
    }

    #[test]
    fn multi_edges_merge() {
        let g = Graph::new(GraphSpec {
            vertices: vec![VertexId::new("a"), VertexId::new("b")],
            edges: vec![Edge::new("x", Some("a"), Some("b")), Edge::new("y", Some("a"), Some("b"))],
        })
        .unwrap();
        let s = serre_generators(&g).unwrap();
        let e_terms: Vec<_> = s.terms().into_iter().filter(|t| t.degree.len() == 2).collect();
        assert_eq!(e_terms.len(), 1);
        assert_eq!(e_terms[0].mult, 2);
    }

    #[test]
    fn center() {
        let c = center_generators(&hub());
        assert_eq!(c.iter().filter(|m| matches!(m, CenterMap::Edge { .. })).count(), 3);
        assert_eq!(c.iter().filter(|m| matches!(m, CenterMap::Loop { .. })).count(), 1);
        assert_eq!(c.iter().filter(|m| matches!(m, CenterMap::Prime { .. })).count(), 4);
        assert_eq!(center_generators(&edgeless(&["a", "b", "c"])).len(), 3);
        assert_eq!(center_generators(&star3()).len(), 4);
        let amp = center_generators_amputated(&hub(), &[VertexId::new("a"), VertexId::new("b")]).unwrap();
        assert_eq!(amp.iter().filter(|m| matches!(m, CenterMap::Prime { .. })).count(), 2);
        assert_eq!(
            c[0].to_string(),
            "(1, coev_V_t1, -1): 1 -> 1_c ⊕ V_t1⊗V_t1* ⊕ 1_a"
        );
    }

    #[test]
    fn exterior_square_of_two_vectors() {
        let x = FormalSum::from(term(&[("1", vect()), ("2", vect())]));
        let got = lambda2(&x).unwrap();
        let mut want = FormalSum::new();
        want.push(term(&[("1", bp(&[1, 1], &[])), ("2", bp(&[2], &[]))]));
        want.push(term(&[("1", bp(&[2], &[])), ("2", bp(&[1, 1], &[]))]));
        assert_eq!(got, want);
    }

    #[test]
    fn adjoint_squares() {
        let x = FormalSum::from(term(&[("e", adjoint())]));
        let got = lambda2(&x).unwrap();
        let mut want = FormalSum::new();
        want.push(term(&[("e", bp(&[1, 1], &[2]))]));
        want.push(term(&[("e", bp(&[2], &[1, 1]))]));
        want.push(term(&[("e", adjoint())]));
        assert_eq!(got, want);
        assert_eq!(sym2(&FormalSum::unit()).unwrap(), FormalSum::unit());
        assert!(lambda2(&FormalSum::unit()).unwrap().is_empty());
    }

    #[test]
    fn gl_identities() {
        let mut gl = FormalSum::from(term(&[("e", adjoint())]));
        gl.push(term(&[]));
        let l = lambda2(&gl).unwrap();
        let mut want = FormalSum::new();
        want.push(term(&[("e", bp(&[1, 1], &[2]))]));
        want.push(term(&[("e", bp(&[2], &[1, 1]))]));
        want.push(TensorTerm::new(Factors::from([(eid("e"), adjoint())]), Degree::new(), 2));
        assert_eq!(l, want);
        let s = sym2(&gl).unwrap();
        let mut want = FormalSum::new();
        want.push(term(&[("e", bp(&[2], &[2]))]));
        want.push(term(&[("e", bp(&[1, 1], &[1, 1]))]));
        want.push(TensorTerm::new(Factors::from([(eid("e"), adjoint())]), Degree::new(), 2));
        want.push(TensorTerm::new(Factors::new(), Degree::new(), 2));
        assert_eq!(s, want);
    }

    #[test]
    fn unsupported_labels() {
        let x = FormalSum::from(term(&[("e", bp(&[2], &[]))]));
        assert!(matches!(lambda2(&x), Err(TensorError::UnsupportedLabel { .. })));
        let mut y = FormalSum::from(term(&[("e", adjoint())]));
        y.push(term(&[("e", vect())]));
        assert!(lambda2(&y).is_err());
    }

    #[test]
    fn dimensions() {
        for n in 1..8 {
            assert_eq!(gl_dim(n, &vect()).unwrap(), BigInt::from(n));
            assert_eq!(gl_dim(n, &covect()).unwrap(), BigInt::from(n));
        }
        for n in 2..8 {
            assert_eq!(gl_dim(n, &adjoint()).unwrap(), BigInt::from(n * n - 1));
        }
        let lhs = gl_dim(4, &bp(&[2], &[1, 1])).unwrap() + gl_dim(4, &bp(&[1, 1], &[2])).unwrap() + 2 * 15;
        assert_eq!(lhs, BigInt::from(120));
        assert_eq!(gl_dim(3, &bp(&[2, 1], &[])).unwrap(), BigInt::from(8));
        assert!(gl_dim(2, &bp(&[1, 1], &[1])).is_err());
    }

    #[test]
    fn gl_square_reports() {
        for (n, l, s) in [(4, 120, 136), (5, 300, 325), (6, 630, 666)] {
            let r = verify_gl_sq_decompositions(n).unwrap();
            assert!(r.holds(), "{r}");
            assert_eq!(r.lambda2_expected, BigInt::from(l));
            assert_eq!(r.sym2_constituents, BigInt::from(s));
        }
    }

    #[test]
    fn duality() {
        let t = degree_component(&hub(), &VertexId::new("c")).unwrap();
        let d = t.dual();
        assert_eq!(d.factors[&eid("t1")], vect());
        assert_eq!(d.factors[&eid("t4")], adjoint());
        assert_eq!(d.degree[&VertexId::new("c")], -1);
        assert_eq!(d.dual(), t);
    }

    #[test]
    fn json_shape() {
        let t = degree_component(&star3(), &VertexId::new("v")).unwrap();
        let v = FormalSum::from(t).to_json();
        assert_eq!(v[0]["factors"]["1"]["lambda"], json!([1]));
        assert_eq!(v[0]["degree"]["v"], json!(1));
        assert_eq!(v[0]["mult"], json!(1));
    }

    fn label() -> impl Strategy<Value = Bipartition> {
        prop_oneof![
            Just(Bipartition::trivial()),
            Just(vect()),
            Just(covect()),
            Just(adjoint()),
        ]
    }

    fn sum() -> impl Strategy<Value = FormalSum> {
        proptest::collection::vec(((label(), label()), 1u64..3), 1..4).prop_map(|ts| {
            let mut s = FormalSum::new();
            for ((a, b), m) in ts {
                s.push(TensorTerm::new(
                    Factors::from([(eid("1"), a), (eid("2"), b)]),
                    Degree::new(),
                    m,
                ));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn squares_have_the_right_dimension(x in sum(), n in 4usize..7) {
            let (l, s) = match (lambda2(&x), sym2(&x)) {
                (Ok(l), Ok(s)) => (l, s),
                _ => return Ok(()),
            };
            let d = x.dim(n).unwrap();
            prop_assert_eq!(l.dim(n).unwrap(), &d * (&d - 1) / 2);
            prop_assert_eq!(s.dim(n).unwrap(), &d * (&d + 1) / 2);
        }
    }
}
