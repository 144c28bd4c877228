//! Integer weights on the ε-coordinates, simple roots, coroot pairings and the
//! two families of Weyl-invariant functions.
//!
//! Coordinates are `ε_v` ([`Coord::Central`]), `ε_v'` ([`Coord::CentralPrime`])
//! and `ε_{i,e}` for `i ≠ 0` ([`Coord::Leg`]). Positive `i` runs along the
//! target-side chain of `e`, negative `i` along the source-side chain.
//!
//! The central coroot is the extended one, `1_v' + (2-N)1_v + Σ E^{slot}_{1,1}`,
//! with `ε_v'(1_v') = 1`. Weights with no `ε_v'` component pair exactly as
//! with the non-extended coroot.

use std::collections::BTreeMap;
use std::fmt;
use std::num::NonZeroI64;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError, Side, Slot, VertexId};
use crate::json::{int_from_json, int_to_json, JsonError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("simple root {0} does not exist in this graph")]
    InvalidRoot(String),
    #[error("slot {edge}:{side} is not incident to vertex {vertex}")]
    SlotNotAtVertex {
        vertex: String,
        edge: String,
        side: char,
    },
    #[error("coordinate {0} does not belong to this graph")]
    ForeignCoord(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Central(VertexId),
    CentralPrime(VertexId),
    Leg(EdgeId, NonZeroI64),
}

impl Coord {
    /// `ε_{index,edge}`; `None` for index 0.
    pub fn leg(edge: &EdgeId, index: i64) -> Option<Coord> {
        NonZeroI64::new(index).map(|i| Coord::Leg(edge.clone(), i))
    }

    /// The `depth`-th coordinate (`depth ≥ 1`) on the chain of `slot`.
    pub fn on_chain(slot: &Slot, depth: u32) -> Coord {
        let index = slot.sign() * i64::from(depth);
        Coord::Leg(slot.edge.clone(), NonZeroI64::new(index).expect("depth >= 1"))
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Central(v) => write!(f, "v:{v}"),
            Coord::CentralPrime(v) => write!(f, "v':{v}"),
            Coord::Leg(e, i) => write!(f, "e:{e}:{i}"),
        }
    }
}

impl FromStr for Coord {
    type Err = JsonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || JsonError::Key(s.to_string());
        if let Some(v) = s.strip_prefix("v':") {
            Ok(Coord::CentralPrime(VertexId::new(v)))
        } else if let Some(v) = s.strip_prefix("v:") {
            Ok(Coord::Central(VertexId::new(v)))
        } else if let Some(rest) = s.strip_prefix("e:") {
            let (edge, index) = rest.rsplit_once(':').ok_or_else(bad)?;
            let index: i64 = index.parse().map_err(|_| bad())?;
            Coord::leg(&EdgeId::new(edge), index).ok_or_else(bad)
        } else {
            Err(bad())
        }
    }
}

/// A finitely supported integer combination of ε-symbols. Zero coefficients
/// are never stored, so structural equality is equality of weights.
///
/// The derived order compares the sorted `(coordinate, coefficient)` lists
/// lexicographically.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight {
    coeffs: BTreeMap<Coord, BigInt>,
}

impl Weight {
    pub fn zero() -> Weight {
        Weight::default()
    }

    pub fn basis(coord: Coord) -> Weight {
        let mut w = Weight::zero();
        w.add_to(coord, &BigInt::one());
        w
    }

    pub fn from_terms<I, N>(terms: I) -> Weight
    where
        I: IntoIterator<Item = (Coord, N)>,
        N: Into<BigInt>,
    {
        let mut w = Weight::zero();
        for (c, n) in terms {
            w.add_to(c, &n.into());
        }
        w
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, coord: &Coord) -> BigInt {
        self.coeffs.get(coord).cloned().unwrap_or_default()
    }

    pub fn add_to(&mut self, coord: Coord, delta: &BigInt) {
        if delta.is_zero() {
            return;
        }
        let mut value = self.coeffs.remove(&coord).unwrap_or_default();
        value += delta;
        if !value.is_zero() {
            self.coeffs.insert(coord, value);
        }
    }

    pub fn set(&mut self, coord: Coord, value: BigInt) {
        if value.is_zero() {
            self.coeffs.remove(&coord);
        } else {
            self.coeffs.insert(coord, value);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Coord, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Coord> {
        self.coeffs.keys()
    }

    pub fn scaled(&self, k: &BigInt) -> Weight {
        if k.is_zero() {
            return Weight::zero();
        }
        Weight {
            coeffs: self.coeffs.iter().map(|(c, v)| (c.clone(), v * k)).collect(),
        }
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, other: &Weight, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for (c, v) in &other.coeffs {
            self.add_to(c.clone(), &(v * k));
        }
    }

    /// Coefficients `a_{sign·1}, a_{sign·2}, …` on the chain of `slot`, up to
    /// the last nonzero one.
    pub fn chain(&self, slot: &Slot) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = Vec::new();
        for (c, v) in &self.coeffs {
            if let Coord::Leg(e, i) = c {
                if *e == slot.edge && i.get().signum() == slot.sign() {
                    let depth = i.get().unsigned_abs() as usize;
                    if out.len() < depth {
                        out.resize(depth, BigInt::zero());
                    }
                    out[depth - 1] = v.clone();
                }
            }
        }
        out
    }

    /// Fails if a coordinate names a vertex or edge the graph lacks.
    pub fn check_against(&self, graph: &Graph) -> Result<(), WeightError> {
        for c in self.coeffs.keys() {
            let ok = match c {
                Coord::Central(v) | Coord::CentralPrime(v) => graph.has_vertex(v),
                Coord::Leg(e, _) => graph.edge(e).is_some(),
            };
            if !ok {
                return Err(WeightError::ForeignCoord(c.to_string()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> = self
            .coeffs
            .iter()
            .map(|(c, v)| (c.to_string(), int_to_json(v)))
            .collect();
        Value::Object(map)
    }

    pub fn from_json(value: &Value) -> Result<Weight, JsonError> {
        let obj = value
            .as_object()
            .ok_or_else(|| JsonError::shape("an object of coordinate keys", "$"))?;
        let mut w = Weight::zero();
        for (k, v) in obj {
            let coord: Coord = k.parse()?;
            w.add_to(coord, &int_from_json(v, k)?);
        }
        Ok(w)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(c, v)| format!("{c}={v}")).collect();
        f.write_str(&parts.join(" "))
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::one());
        out
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigInt::one());
        out
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scaled(&-BigInt::one())
    }
}

/// A simple root of `W_D`: a leg root `α_{level}` on one side of an edge, or
/// the central root `α_v`. The same value names the corresponding simple
/// reflection.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SimpleRoot {
    Central(VertexId),
    Leg { edge: EdgeId, side: Side, level: u32 },
}

impl SimpleRoot {
    pub fn central(v: &str) -> SimpleRoot {
        SimpleRoot::Central(VertexId::new(v))
    }

    pub fn leg(edge: &str, side: Side, level: u32) -> SimpleRoot {
        SimpleRoot::Leg {
            edge: EdgeId::new(edge),
            side,
            level,
        }
    }

    /// The vertex whose Weyl group contains this reflection.
    pub fn owner(&self, graph: &Graph) -> Result<VertexId, WeightError> {
        match self {
            SimpleRoot::Central(v) if graph.has_vertex(v) => Ok(v.clone()),
            SimpleRoot::Leg { edge, side, level } if *level >= 1 => graph
                .edge(edge)
                .and_then(|e| e.endpoint(*side))
                .cloned()
                .ok_or_else(|| WeightError::InvalidRoot(self.to_string())),
            _ => Err(WeightError::InvalidRoot(self.to_string())),
        }
    }
}

impl fmt::Display for SimpleRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleRoot::Central(v) => write!(f, "v:{v}"),
            SimpleRoot::Leg { edge, side, level } => {
                write!(f, "leg:{edge}:{}:{level}", side.symbol())
            }
        }
    }
}

impl FromStr for SimpleRoot {
    type Err = JsonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || JsonError::Key(s.to_string());
        if let Some(v) = s.strip_prefix("v:") {
            return Ok(SimpleRoot::Central(VertexId::new(v)));
        }
        let rest = s.strip_prefix("leg:").ok_or_else(bad)?;
        let (rest, level) = rest.rsplit_once(':').ok_or_else(bad)?;
        let (edge, sign) = rest.rsplit_once(':').ok_or_else(bad)?;
        let side = match sign {
            "+" | "+1" | "1" => Side::Target,
            "-" | "-1" => Side::Source,
            _ => return Err(bad()),
        };
        let level: u32 = level.parse().map_err(|_| bad())?;
        if level == 0 {
            return Err(bad());
        }
        Ok(SimpleRoot::Leg {
            edge: EdgeId::new(edge),
            side,
            level,
        })
    }
}

fn leg_coord(edge: &EdgeId, side: Side, depth: u32) -> Coord {
    Coord::on_chain(
        &Slot {
            edge: edge.clone(),
            side,
        },
        depth,
    )
}

/// `α_{i}` on a leg is `ε_{s(i+1)} − ε_{s·i}`; `α_v = ε_v + Σ_slots ε_{±1}`.
pub fn simple_root(graph: &Graph, root: &SimpleRoot) -> Result<Weight, WeightError> {
    let owner = root.owner(graph)?;
    let mut w = Weight::zero();
    match root {
        SimpleRoot::Leg { edge, side, level } => {
            w.add_to(leg_coord(edge, *side, level + 1), &BigInt::one());
            w.add_to(leg_coord(edge, *side, *level), &-BigInt::one());
        }
        SimpleRoot::Central(_) => {
            w.add_to(Coord::Central(owner.clone()), &BigInt::one());
            for slot in graph.slots_at(&owner)? {
                w.add_to(Coord::on_chain(slot, 1), &BigInt::one());
            }
        }
    }
    Ok(w)
}

/// Pairing of `w` with the coroot of `root`.
pub fn pair_coroot(graph: &Graph, w: &Weight, root: &SimpleRoot) -> Result<BigInt, WeightError> {
    let owner = root.owner(graph)?;
    match root {
        SimpleRoot::Leg { edge, side, level } => {
            Ok(w.coeff(&leg_coord(edge, *side, level + 1)) - w.coeff(&leg_coord(edge, *side, *level)))
        }
        SimpleRoot::Central(_) => {
            let slots = graph.slots_at(&owner)?;
            let n = BigInt::from(slots.len());
            let mut p = w.coeff(&Coord::CentralPrime(owner.clone()))
                + (BigInt::from(2) - n) * w.coeff(&Coord::Central(owner.clone()));
            for slot in slots {
                p += w.coeff(&Coord::on_chain(slot, 1));
            }
            Ok(p)
        }
    }
}

/// `−(N−2)a_v² + Σ a_{i,k}²` over the chains of the slots at `v`.
pub fn quad_invariant(graph: &Graph, v: &VertexId, w: &Weight) -> Result<BigInt, WeightError> {
    let slots = graph.slots_at(v)?;
    let a_v = w.coeff(&Coord::Central(v.clone()));
    let n = BigInt::from(slots.len());
    let coef: BigInt = BigInt::from(2) - n;
    let mut q = coef * &a_v * &a_v;
    for slot in slots {
        for a in w.chain(slot) {
            q += &a * &a;
        }
    }
    Ok(q)
}

/// `a_v − Σ_{i≥1} a_{sign·i, edge}` for a slot at `v`.
pub fn lin_invariant(
    graph: &Graph,
    v: &VertexId,
    slot: &Slot,
    w: &Weight,
) -> Result<BigInt, WeightError> {
    if !graph.slots_at(v)?.contains(slot) {
        return Err(WeightError::SlotNotAtVertex {
            vertex: v.0.clone(),
            edge: slot.edge.0.clone(),
            side: slot.side.symbol(),
        });
    }
    let sum: BigInt = w.chain(slot).iter().sum();
    Ok(w.coeff(&Coord::Central(v.clone())) - sum)
}

/// Every simple root the graph carries with leg levels `1..=max_level`.
pub fn simple_roots_at(
    graph: &Graph,
    v: &VertexId,
    max_level: u32,
) -> Result<Vec<SimpleRoot>, WeightError> {
    let mut out = vec![SimpleRoot::Central(v.clone())];
    for slot in graph.slots_at(v)? {
        for level in 1..=max_level {
            out.push(SimpleRoot::Leg {
                edge: slot.edge.clone(),
                side: slot.side,
                level,
            });
        }
    }
    Ok(out)
}
