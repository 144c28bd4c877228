//! Dominance, Verma labels and the Kac-Weyl character and denominator
//! expansions, truncated at a total word length.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError, Side, Slot, VertexId};
use crate::json::int_to_json;
use crate::orbit::{bfs, xreduced_word, OrbitError};
use crate::partition::{Bipartition, Partition};
use crate::weight::{Coord, SimpleRoot, Weight, WeightError};
use crate::weyl::{dot, format_word, word_to_json, Word, WeylError};

#[derive(Debug, Error)]
pub enum CharacterError {
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("weight is not dominant: {}", join(.0))]
    NotDominant(Vec<Violation>),
    #[error("weight is not X-dominant: {}", join(.0))]
    NotXDominant(Vec<Violation>),
    #[error("label entry {0} does not fit in 64 bits")]
    Overflow(BigInt),
    #[error("term weight depends on the order of the vertex words for {0}")]
    OrderDependent(String),
}

impl From<WeightError> for CharacterError {
    fn from(e: WeightError) -> Self {
        CharacterError::Weyl(e.into())
    }
}

impl From<GraphError> for CharacterError {
    fn from(e: GraphError) -> Self {
        CharacterError::Weyl(e.into())
    }
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// One failed dominance inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A leg coefficient is positive.
    Positive(Coord),
    /// The chain is not weakly increasing away from the vertex at this
    /// depth: `a_{±(depth+1)} < a_{±depth}`.
    Chain { edge: EdgeId, side: Side, depth: u32 },
    /// `a_v' + Σ a_{±1} < (N−2)a_v`.
    Central(VertexId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Positive(c) => write!(f, "{c} is positive"),
            Violation::Chain { edge, side, depth } => {
                write!(f, "chain {edge}:{} decreases after depth {depth}", side.symbol())
            }
            Violation::Central(v) => write!(f, "central inequality fails at {v}"),
        }
    }
}

fn chain_violations(graph: &Graph, phi: &Weight) -> Vec<Violation> {
    let mut out = Vec::new();
    for e in graph.edges() {
        for side in [Side::Source, Side::Target] {
            let slot = Slot {
                edge: e.id.clone(),
                side,
            };
            let chain = phi.chain(&slot);
            for (i, a) in chain.iter().enumerate() {
                let next = chain.get(i + 1).cloned().unwrap_or_default();
                if next < *a {
                    out.push(Violation::Chain {
                        edge: e.id.clone(),
                        side,
                        depth: i as u32 + 1,
                    });
                }
            }
        }
    }
    out
}

/// Every failed inequality of the dominance conditions, in a fixed order.
pub fn dominance_violations(graph: &Graph, phi: &Weight) -> Result<Vec<Violation>, CharacterError> {
    phi.check_against(graph)?;
    let mut out: Vec<Violation> = phi
        .iter()
        .filter(|(c, a)| matches!(c, Coord::Leg(..)) && a.is_positive())
        .map(|(c, _)| Violation::Positive(c.clone()))
        .collect();
    out.extend(chain_violations(graph, phi));
    for v in graph.vertices() {
        let slots = graph.slots_at(v)?;
        let mut lhs = phi.coeff(&Coord::CentralPrime(v.clone()));
        for s in slots {
            lhs += phi.coeff(&Coord::on_chain(s, 1));
        }
        let rhs = BigInt::from(slots.len() as i64 - 2) * phi.coeff(&Coord::Central(v.clone()));
        if lhs < rhs {
            out.push(Violation::Central(v.clone()));
        }
    }
    Ok(out)
}

pub fn is_dominant(graph: &Graph, phi: &Weight) -> Result<bool, CharacterError> {
    Ok(dominance_violations(graph, phi)?.is_empty())
}

/// Per-edge bipartitions and per-vertex grading `(a_v, a_v')` of a weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VermaLabel {
    pub labels: BTreeMap<EdgeId, Bipartition>,
    pub grading: BTreeMap<VertexId, (BigInt, BigInt)>,
}

impl VermaLabel {
    pub fn to_json(&self) -> (Value, Value) {
        let labels: Map<String, Value> = self
            .labels
            .iter()
            .map(|(e, b)| (e.0.clone(), serde_json::to_value(b).expect("plain data")))
            .collect();
        let grading: Map<String, Value> = self
            .grading
            .iter()
            .map(|(v, (a, p))| (v.0.clone(), json!([int_to_json(a), int_to_json(p)])))
            .collect();
        (Value::Object(labels), Value::Object(grading))
    }
}

fn negated_parts(chain: &[BigInt]) -> Result<Partition, CharacterError> {
    let parts = chain
        .iter()
        .map(|a| (-a).to_u64().ok_or_else(|| CharacterError::Overflow(a.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Partition::new(&parts).expect("X-dominant chains give partitions"))
}

/// `λ_j = −a_{−j,e}`, `μ_j = −a_{j,e}`. Fails unless every chain weakly
/// increases away from its vertex (which forces nonpositive entries).
pub fn verma_label(graph: &Graph, phi: &Weight) -> Result<VermaLabel, CharacterError> {
    phi.check_against(graph)?;
    let bad = chain_violations(graph, phi);
    if !bad.is_empty() {
        return Err(CharacterError::NotXDominant(bad));
    }
    let mut labels = BTreeMap::new();
    for e in graph.edges() {
        let side = |side| Slot {
            edge: e.id.clone(),
            side,
        };
        let b = Bipartition {
            lambda: negated_parts(&phi.chain(&side(Side::Source)))?,
            mu: negated_parts(&phi.chain(&side(Side::Target)))?,
        };
        labels.insert(e.id.clone(), b);
    }
    let grading = graph
        .vertices()
        .iter()
        .map(|v| {
            let a = phi.coeff(&Coord::Central(v.clone()));
            let p = phi.coeff(&Coord::CentralPrime(v.clone()));
            (v.clone(), (a, p))
        })
        .collect();
    Ok(VermaLabel { labels, grading })
}

/// One X-reduced word per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tuple {
    pub words: Vec<(VertexId, Word)>,
    pub length: usize,
}

impl Tuple {
    /// The words concatenated in vertex order.
    pub fn concatenated(&self) -> Word {
        self.words.iter().flat_map(|(_, w)| w.iter().cloned()).collect()
    }
}

struct Enumeration {
    tuples: Vec<Tuple>,
    complete: bool,
}

fn enumerate_tuples(graph: &Graph, cutoff: usize) -> Result<Enumeration, CharacterError> {
    let mut per_vertex: Vec<Vec<(Word, usize)>> = Vec::new();
    let mut complete = true;
    for v in graph.vertices() {
        let sg = bfs(graph, v, cutoff + 2)?;
        if sg.max_level() == cutoff + 2 {
            complete = false;
        }
        let mut words = Vec::new();
        for (s, &l) in sg.states.iter().zip(&sg.levels) {
            if l <= cutoff + 1 {
                words.push((xreduced_word(graph, s)?, l - 1));
            }
        }
        per_vertex.push(words);
    }
    let mut tuples = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    extend(graph, &per_vertex, cutoff, &mut current, &mut tuples);
    Ok(Enumeration { tuples, complete })
}

fn extend(
    graph: &Graph,
    per_vertex: &[Vec<(Word, usize)>],
    budget: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Tuple>,
) {
    let k = current.len();
    if k == per_vertex.len() {
        let words: Vec<(VertexId, Word)> = current
            .iter()
            .enumerate()
            .map(|(i, &j)| (graph.vertices()[i].clone(), per_vertex[i][j].0.clone()))
            .collect();
        let length = current.iter().enumerate().map(|(i, &j)| per_vertex[i][j].1).sum();
        out.push(Tuple { words, length });
        return;
    }
    for (j, (_, len)) in per_vertex[k].iter().enumerate() {
        if *len <= budget {
            current.push(j);
            extend(graph, per_vertex, budget - len, current, out);
            current.pop();
        }
    }
}

/// All tuples of per-vertex X-reduced words of total length `≤ cutoff`.
pub fn xreduced_tuples(graph: &Graph, cutoff: usize) -> Result<Vec<Tuple>, CharacterError> {
    Ok(enumerate_tuples(graph, cutoff)?.tuples)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// `ch(L(φ)) = Σ ± ch(M(w·φ))`.
    Character,
    /// `1/ch(M(0)) = Σ ± ch(L(w·0))`.
    Denominator,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VermaTerm {
    pub sign: i8,
    pub weight: Weight,
    pub label: VermaLabel,
    pub length: usize,
    pub words: Vec<(VertexId, Word)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterExpansion {
    pub kind: Kind,
    pub phi: Weight,
    pub cutoff: usize,
    /// Sorted by length, then by weight.
    pub terms: Vec<VermaTerm>,
    /// Whether the sum has no terms beyond the cutoff.
    pub complete: bool,
}

/// Output layout for [`CharacterExpansion::render`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    /// `(a_v;leg;leg;…)` per vertex, legs read away from the vertex.
    Compact { with_prime: bool },
    /// Coordinate keys with values.
    Plain,
}

pub fn character_expansion(
    graph: &Graph,
    phi: &Weight,
    cutoff: usize,
) -> Result<CharacterExpansion, CharacterError> {
    let bad = dominance_violations(graph, phi)?;
    if !bad.is_empty() {
        return Err(CharacterError::NotDominant(bad));
    }
    expand(graph, phi, cutoff, Kind::Character)
}

pub fn denominator_expansion(graph: &Graph, cutoff: usize) -> Result<CharacterExpansion, CharacterError> {
    expand(graph, &Weight::zero(), cutoff, Kind::Denominator)
}

fn expand(graph: &Graph, phi: &Weight, cutoff: usize, kind: Kind) -> Result<CharacterExpansion, CharacterError> {
    let en = enumerate_tuples(graph, cutoff)?;
    let mut terms = Vec::with_capacity(en.tuples.len());
    for t in en.tuples {
        let word = t.concatenated();
        let weight = dot(graph, &word, phi)?;
        let reversed: Word = t.words.iter().rev().flat_map(|(_, w)| w.iter().cloned()).collect();
        if dot(graph, &reversed, phi)? != weight {
            return Err(CharacterError::OrderDependent(format_word(&word)));
        }
        let label = verma_label(graph, &weight)?;
        terms.push(VermaTerm {
            sign: if t.length % 2 == 0 { 1 } else { -1 },
            weight,
            label,
            length: t.length,
            words: t.words,
        });
    }
    terms.sort_by_cached_key(|t| (t.length, word_profile(&t.words), t.weight.clone()));
    Ok(CharacterExpansion {
        kind,
        phi: phi.clone(),
        cutoff,
        terms,
        complete: en.complete,
    })
}

/// Orders terms of one length: words with shallower leg letters first,
/// then legs in decreasing order.
fn word_profile(words: &[(VertexId, Word)]) -> (Vec<usize>, Reverse<Vec<EdgeId>>) {
    let mut levels = Vec::new();
    let mut edges = Vec::new();
    for g in words.iter().flat_map(|(_, w)| w) {
        if let SimpleRoot::Leg { edge, level, .. } = g {
            levels.push(*level as usize);
            edges.push(edge.clone());
        }
    }
    levels.sort();
    edges.sort_by(|a, b| b.cmp(a));
    (levels, Reverse(edges))
}

fn pretty_weight(graph: &Graph, w: &Weight, with_prime: bool) -> String {
    if w.is_zero() {
        return "0".to_string();
    }
    let mut blocks = Vec::new();
    let mut seen: Vec<Coord> = Vec::new();
    for v in graph.vertices() {
        let cv = Coord::Central(v.clone());
        let cp = Coord::CentralPrime(v.clone());
        let mut head = w.coeff(&cv).to_string();
        if with_prime {
            head = format!("{head},{}", w.coeff(&cp));
        }
        seen.push(cv);
        seen.push(cp);
        let mut parts = vec![head];
        for slot in graph.slots_at(v).expect("vertex of this graph") {
            let chain = w.chain(slot);
            let mut entries: Vec<String> = chain.iter().map(ToString::to_string).collect();
            entries.push("0".into());
            entries.push("...".into());
            parts.push(entries.join(","));
            seen.extend((1..=chain.len()).map(|d| Coord::on_chain(slot, d as u32)));
        }
        blocks.push(parts.join(";"));
    }
    let mut out = blocks.join(" | ");
    let extra: Vec<String> = w
        .iter()
        .filter(|(c, _)| !seen.contains(c))
        .filter(|(c, _)| with_prime || !matches!(c, Coord::CentralPrime(_)))
        .map(|(c, a)| format!("{c}={a}"))
        .collect();
    if !extra.is_empty() {
        out = format!("{out} [{}]", extra.join(" "));
    }
    out
}

impl CharacterExpansion {
    pub fn render(&self, graph: &Graph, style: Style) -> String {
        let (outer, inner) = match self.kind {
            Kind::Character => ("L", "M"),
            Kind::Denominator => ("M", "L"),
        };
        let show = |w: &Weight| match style {
            Style::Compact { with_prime } => pretty_weight(graph, w, with_prime),
            Style::Plain => w.to_string(),
        };
        let mut out = match self.kind {
            Kind::Character => format!("ch({outer}({})) =\n", show(&self.phi)),
            Kind::Denominator => "1/ch(M(0)) =\n".to_string(),
        };
        for t in &self.terms {
            let sign = if t.sign > 0 { '+' } else { '-' };
            out.push_str(&format!("{sign} ch({inner}({}))\n", show(&t.weight)));
        }
        if !self.complete {
            out.push_str("+ ...\n");
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|t| {
                    let (labels, grading) = t.label.to_json();
                    let words: Map<String, Value> = t
                        .words
                        .iter()
                        .map(|(v, w)| (v.0.clone(), word_to_json(w)))
                        .collect();
                    json!({
                        "sign": t.sign,
                        "weight": t.weight.to_json(),
                        "labels": labels,
                        "grading": grading,
                        "length": t.length,
                        "words": words,
                    })
                })
                .collect(),
        )
    }
}

/// Coordinates a word at `v` may change: `ε_v`, `ε_v'` and the chains on
/// the slots at `v`.
pub fn in_vicinity(graph: &Graph, v: &VertexId, c: &Coord) -> bool {
    match c {
        Coord::Central(u) | Coord::CentralPrime(u) => u == v,
        Coord::Leg(e, i) => graph.slots_at(v).is_ok_and(|slots| {
            slots
                .iter()
                .any(|s| s.edge == *e && s.sign() == i.get().signum())
        }),
    }
}

/// Whether every nonzero coefficient of `w` lies in the vicinity of `v`.
pub fn all_zero_outside(graph: &Graph, v: &VertexId, w: &Weight) -> bool {
    w.iter().all(|(c, a)| a.is_zero() || in_vicinity(graph, v, c))
}
