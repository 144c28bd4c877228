//! The orbit `W_v·ε_v` as a graph of states, the algorithm of descent and
//! word reconstruction.
//!
//! A state records `a_v` and, for every slot at `v` (in [`Graph::slots_at`]
//! order), the chain `(a_1, a_2, …)` with trailing zeros trimmed. For
//! `N = 2` the vector `ε_v` is fixed by `s_v`, so the orbit of
//! `ε_v + ε_v'` is used instead; its `a_v'` is always 1 and is not stored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{GraphError, Slot, VertexId};
use crate::json::{array_from_json, field, int_from_json, int_to_json, str_from_json, JsonError};
use crate::weight::{Coord, SimpleRoot, Weight, WeightError};
use crate::weyl::{root_in_simple_basis, Generator, Word, WeylError};
use crate::Graph;

#[derive(Debug, Error)]
pub enum OrbitError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error("vertex {vertex} has {expected} slots but the state lists {got}")]
    SlotCount {
        vertex: String,
        expected: usize,
        got: usize,
    },
    #[error("generator {0} does not act at this vertex")]
    ForeignGenerator(String),
    #[error("state is not in the orbit: {0}")]
    NotInOrbit(Box<NotInOrbit>),
}

impl From<WeightError> for OrbitError {
    fn from(e: WeightError) -> Self {
        OrbitError::Weyl(e.into())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitState {
    pub vertex: VertexId,
    pub a_v: BigInt,
    pub slots: Vec<Vec<BigInt>>,
}

fn trim(chain: &mut Vec<BigInt>) {
    while chain.last().is_some_and(Zero::is_zero) {
        chain.pop();
    }
}

fn at(chain: &[BigInt], depth: usize) -> BigInt {
    chain.get(depth).cloned().unwrap_or_default()
}

fn set(chain: &mut Vec<BigInt>, depth: usize, value: BigInt) {
    if chain.len() <= depth {
        chain.resize(depth + 1, BigInt::zero());
    }
    chain[depth] = value;
}

impl OrbitState {
    pub fn new<A: Into<BigInt>>(vertex: &str, a_v: A, slots: Vec<Vec<i64>>) -> OrbitState {
        let mut s = OrbitState {
            vertex: VertexId::new(vertex),
            a_v: a_v.into(),
            slots: slots
                .into_iter()
                .map(|c| c.into_iter().map(BigInt::from).collect())
                .collect(),
        };
        s.canonicalize();
        s
    }

    fn canonicalize(&mut self) {
        for c in &mut self.slots {
            trim(c);
        }
    }

    /// Deepest nonzero chain position over all slots.
    pub fn depth(&self) -> usize {
        self.slots.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = &BigInt> {
        std::iter::once(&self.a_v).chain(self.slots.iter().flatten())
    }

    fn check_shape<'g>(&self, graph: &'g Graph) -> Result<&'g [Slot], OrbitError> {
        let slots = graph.slots_at(&self.vertex)?;
        if slots.len() != self.slots.len() {
            return Err(OrbitError::SlotCount {
                vertex: self.vertex.0.clone(),
                expected: slots.len(),
                got: self.slots.len(),
            });
        }
        Ok(slots)
    }

    /// The weight this state stands for, including `ε_v'` when `N = 2`.
    pub fn to_weight(&self, graph: &Graph) -> Result<Weight, OrbitError> {
        let slots = self.check_shape(graph)?;
        let mut w = Weight::zero();
        w.add_to(Coord::Central(self.vertex.clone()), &self.a_v);
        if slots.len() == 2 {
            w.add_to(Coord::CentralPrime(self.vertex.clone()), &BigInt::one());
        }
        for (slot, chain) in slots.iter().zip(&self.slots) {
            for (i, a) in chain.iter().enumerate() {
                w.add_to(Coord::on_chain(slot, i as u32 + 1), a);
            }
        }
        Ok(w)
    }

    /// Reads the coordinates of `w` in the vicinity of `v`.
    pub fn from_weight(graph: &Graph, v: &VertexId, w: &Weight) -> Result<OrbitState, OrbitError> {
        let slots = graph.slots_at(v)?;
        Ok(OrbitState {
            vertex: v.clone(),
            a_v: w.coeff(&Coord::Central(v.clone())),
            slots: slots.iter().map(|s| w.chain(s)).collect(),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertex": self.vertex.0,
            "a_v": int_to_json(&self.a_v),
            "slots": self.slots.iter()
                .map(|c| Value::Array(c.iter().map(int_to_json).collect()))
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<OrbitState, JsonError> {
        let vertex = str_from_json(field(value, "vertex", "$")?, "$.vertex")?;
        let a_v = int_from_json(field(value, "a_v", "$")?, "$.a_v")?;
        let mut slots = Vec::new();
        for (k, c) in array_from_json(field(value, "slots", "$")?, "$.slots")?.iter().enumerate() {
            let path = format!("$.slots[{k}]");
            let chain = array_from_json(c, &path)?
                .iter()
                .enumerate()
                .map(|(i, a)| int_from_json(a, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            slots.push(chain);
        }
        let mut s = OrbitState {
            vertex: VertexId::new(vertex),
            a_v,
            slots,
        };
        s.canonicalize();
        Ok(s)
    }
}

impl fmt::Display for OrbitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.a_v)?;
        for c in &self.slots {
            let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "; ({})", parts.join(","))?;
        }
        f.write_str(")")
    }
}

/// A generator at a vertex, addressed by slot index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Move {
    Central,
    Leg { slot: usize, level: usize },
}

fn to_generator(slots: &[Slot], v: &VertexId, m: Move) -> Generator {
    match m {
        Move::Central => SimpleRoot::Central(v.clone()),
        Move::Leg { slot, level } => SimpleRoot::Leg {
            edge: slots[slot].edge.clone(),
            side: slots[slot].side,
            level: level as u32,
        },
    }
}

fn from_generator(slots: &[Slot], v: &VertexId, g: &Generator) -> Option<Move> {
    match g {
        SimpleRoot::Central(u) if u == v => Some(Move::Central),
        SimpleRoot::Leg { edge, side, level } if *level >= 1 => slots
            .iter()
            .position(|s| s.edge == *edge && s.side == *side)
            .map(|slot| Move::Leg {
                slot,
                level: *level as usize,
            }),
        _ => None,
    }
}

/// `⟨state, α_v^∨⟩`; the hidden `a_v' = 1` contributes when `N = 2`.
fn central_pairing(s: &OrbitState) -> BigInt {
    let n = s.slots.len();
    let mut p = BigInt::from(2 - n as i64) * &s.a_v;
    if n == 2 {
        p += 1;
    }
    for c in &s.slots {
        p += at(c, 0);
    }
    p
}

fn apply(s: &OrbitState, m: Move) -> OrbitState {
    let mut out = s.clone();
    match m {
        Move::Central => {
            let p = central_pairing(s);
            out.a_v -= &p;
            for c in &mut out.slots {
                let a1 = at(c, 0) - &p;
                set(c, 0, a1);
            }
        }
        Move::Leg { slot, level } => {
            let c = &mut out.slots[slot];
            let lo = at(c, level - 1);
            let hi = at(c, level);
            set(c, level - 1, hi);
            set(c, level, lo);
        }
    }
    out.canonicalize();
    out
}

/// Applies a generator of `W_v` to a state.
pub fn apply_generator(graph: &Graph, s: &OrbitState, g: &Generator) -> Result<OrbitState, OrbitError> {
    let slots = s.check_shape(graph)?;
    let m = from_generator(slots, &s.vertex, g)
        .ok_or_else(|| OrbitError::ForeignGenerator(g.to_string()))?;
    Ok(apply(s, m))
}

/// `ε_v` (or `ε_v + ε_v'` for `N = 2`) as a state.
pub fn initial_state(graph: &Graph, v: &VertexId) -> Result<OrbitState, OrbitError> {
    let n = graph.valence(v)?;
    Ok(OrbitState {
        vertex: v.clone(),
        a_v: BigInt::one(),
        slots: vec![Vec::new(); n],
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateEdge {
    pub lower: usize,
    pub upper: usize,
    pub generator: Generator,
}

/// The states of level `≤ max_level` and the generator edges among them.
/// State indices follow level order, sorted within each level.
#[derive(Debug, Clone)]
pub struct StateGraph {
    pub vertex: VertexId,
    pub states: Vec<OrbitState>,
    pub levels: Vec<usize>,
    pub edges: Vec<StateEdge>,
    index: BTreeMap<OrbitState, usize>,
}

impl StateGraph {
    pub fn level_of(&self, s: &OrbitState) -> Option<usize> {
        self.index.get(s).map(|&i| self.levels[i])
    }

    pub fn index_of(&self, s: &OrbitState) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn max_level(&self) -> usize {
        self.levels.last().copied().unwrap_or(0)
    }

    /// States grouped by level; entry 0 is level 1.
    pub fn by_level(&self) -> Vec<Vec<&OrbitState>> {
        let mut out: Vec<Vec<&OrbitState>> = vec![Vec::new(); self.max_level()];
        for (s, &l) in self.states.iter().zip(&self.levels) {
            out[l - 1].push(s);
        }
        out
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_level().iter().map(Vec::len).collect()
    }

    /// Edges whose endpoints share a level.
    pub fn same_level_edges(&self) -> Vec<&StateEdge> {
        self.edges
            .iter()
            .filter(|e| self.levels[e.lower] == self.levels[e.upper])
            .collect()
    }

    /// Follows edges down one level at a time, taking the smallest
    /// generator each time. Returns the generators in the order they were
    /// applied, together with the states visited after each step.
    pub fn path_down(&self, start: usize) -> Option<(Word, Vec<OrbitState>)> {
        let mut word = Vec::new();
        let mut trace = Vec::new();
        let mut cur = start;
        while self.levels[cur] > 1 {
            let want = self.levels[cur] - 1;
            let next = self
                .edges
                .iter()
                .filter_map(|e| {
                    let other = if e.lower == cur {
                        e.upper
                    } else if e.upper == cur {
                        e.lower
                    } else {
                        return None;
                    };
                    (self.levels[other] == want).then_some((&e.generator, other))
                })
                .min()?;
            word.push(next.0.clone());
            cur = next.1;
            trace.push(self.states[cur].clone());
        }
        Some((word, trace))
    }
}

/// Breadth-first enumeration of the orbit up to `max_level`.
pub fn bfs(graph: &Graph, v: &VertexId, max_level: usize) -> Result<StateGraph, OrbitError> {
    bfs_truncated(graph, v, max_level, max_level.saturating_sub(1))
}

/// As [`bfs`], with leg reflections restricted to levels `1..=leg_limit`.
pub fn bfs_truncated(
    graph: &Graph,
    v: &VertexId,
    max_level: usize,
    leg_limit: usize,
) -> Result<StateGraph, OrbitError> {
    let slots = graph.slots_at(v)?;
    let mut moves = vec![Move::Central];
    for slot in 0..slots.len() {
        for level in 1..=leg_limit {
            moves.push(Move::Leg { slot, level });
        }
    }
    let start = initial_state(graph, v)?;
    let mut states = Vec::new();
    let mut levels = Vec::new();
    let mut index = BTreeMap::new();
    if max_level >= 1 {
        index.insert(start.clone(), 0);
        states.push(start);
        levels.push(1);
    }
    let mut edge_set: BTreeSet<(usize, usize, Move)> = BTreeSet::new();
    let mut frontier: Vec<usize> = (0..states.len()).collect();
    let mut level = 1;
    while !frontier.is_empty() {
        let mut fresh: BTreeSet<OrbitState> = BTreeSet::new();
        let mut pending: Vec<(usize, OrbitState, Move)> = Vec::new();
        for &i in &frontier {
            for &m in &moves {
                let image = apply(&states[i], m);
                if image == states[i] {
                    continue;
                }
                if let Some(&j) = index.get(&image) {
                    edge_set.insert((i.min(j), i.max(j), m));
                } else if level < max_level {
                    fresh.insert(image.clone());
                    pending.push((i, image, m));
                }
            }
        }
        let first_new = states.len();
        for s in fresh {
            index.insert(s.clone(), states.len());
            states.push(s);
            levels.push(level + 1);
        }
        for (i, image, m) in pending {
            edge_set.insert((i, index[&image], m));
        }
        frontier = (first_new..states.len()).collect();
        level += 1;
    }
    let edges = edge_set
        .into_iter()
        .map(|(lower, upper, m)| StateEdge {
            lower,
            upper,
            generator: to_generator(slots, v, m),
        })
        .collect();
    Ok(StateGraph {
        vertex: v.clone(),
        states,
        levels,
        edges,
        index,
    })
}

/// Which of the numeric orbit conditions a state violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    /// `a_v − Σ a_i ≠ 1` on this slot.
    Linear { slot: usize },
    /// `−(N−2)a_v² + Σ a² ≠ −(N−2)`.
    Quadratic,
    /// Some entry is negative.
    Negative,
    /// `N − 2` does not divide every leg entry.
    Divisibility,
}

/// The four numeric conditions every orbit state satisfies when `N ≥ 3`.
pub fn check_conditions(s: &OrbitState) -> Vec<Condition> {
    let n = s.slots.len() as i64;
    let mut out = Vec::new();
    for (k, c) in s.slots.iter().enumerate() {
        let sum: BigInt = c.iter().sum();
        if &s.a_v - sum != BigInt::one() {
            out.push(Condition::Linear { slot: k });
        }
    }
    let sq: BigInt = s.slots.iter().flatten().map(|a| a * a).sum();
    let nm2 = BigInt::from(n - 2);
    if -&nm2 * &s.a_v * &s.a_v + sq != -&nm2 {
        out.push(Condition::Quadratic);
    }
    if s.entries().any(Signed::is_negative) {
        out.push(Condition::Negative);
    }
    if n >= 3 && s.slots.iter().flatten().any(|a| !(a % &nm2).is_zero()) {
        out.push(Condition::Divisibility);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    /// The input already fails a numeric orbit condition.
    Conditions(Vec<Condition>),
    /// A descent step produced a negative entry.
    NegativeEntry,
    /// No step lowers the level, yet the state is not `ε_v`.
    Stuck,
    /// `seed − state` is not a nonnegative combination of simple roots.
    OutsideRootCone,
    /// Not found by the bounded search.
    NotReached,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotInOrbit {
    pub reason: Reason,
    pub witness: OrbitState,
    /// Generators applied before the witness was reached, in order.
    pub steps: Word,
}

impl fmt::Display for NotInOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let why = match &self.reason {
            Reason::Conditions(c) => format!("violates {c:?}"),
            Reason::NegativeEntry => "negative entry".to_string(),
            Reason::Stuck => "descent is stuck".to_string(),
            Reason::OutsideRootCone => "outside the positive root cone".to_string(),
            Reason::NotReached => "not reached by search".to_string(),
        };
        write!(f, "{why} at {} after {} steps", self.witness, self.steps.len())
    }
}

/// Result of a successful descent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Descent {
    /// `act(word, start) = ε_v`.
    pub word: Word,
    /// State after each step; the last one is the initial state.
    pub trace: Vec<OrbitState>,
}

impl Descent {
    /// The X-reduced word: `act(xreduced, ε_v) = start`.
    pub fn xreduced(&self) -> Word {
        self.word.iter().rev().cloned().collect()
    }

    pub fn level(&self) -> usize {
        self.word.len() + 1
    }
}

/// Within a slot, the leg move that pulls the largest entry standing right
/// after a smaller one one step towards the centre.
fn leg_move(chain: &[BigInt]) -> Option<usize> {
    let mut best: Option<(usize, &BigInt)> = None;
    for j in 1..chain.len() {
        if chain[j] > chain[j - 1] && best.is_none_or(|(_, b)| chain[j] > *b) {
            best = Some((j, &chain[j]));
        }
    }
    best.map(|(j, _)| j)
}

/// Runs the algorithm of descent. For `N ≤ 2` a bounded search is used
/// instead.
pub fn descend(graph: &Graph, s: &OrbitState) -> Result<Result<Descent, NotInOrbit>, OrbitError> {
    let slots = s.check_shape(graph)?;
    if slots.len() <= 2 {
        return search(graph, s);
    }
    let target = initial_state(graph, &s.vertex)?;
    let conditions = check_conditions(s);
    if !conditions.is_empty() {
        return Ok(Err(NotInOrbit {
            reason: Reason::Conditions(conditions),
            witness: s.clone(),
            steps: Vec::new(),
        }));
    }
    let mut applied: Word = Vec::new();
    let mut trace = Vec::new();
    let mut cur = s.clone();
    while cur != target {
        let m = cur
            .slots
            .iter()
            .enumerate()
            .find_map(|(slot, c)| leg_move(c).map(|j| Move::Leg { slot, level: j }));
        let m = match m {
            Some(m) => m,
            None if central_pairing(&cur).is_positive() => Move::Central,
            None => {
                return Ok(Err(NotInOrbit {
                    reason: Reason::Stuck,
                    witness: cur,
                    steps: applied,
                }))
            }
        };
        cur = apply(&cur, m);
        applied.push(to_generator(slots, &s.vertex, m));
        if cur.entries().any(Signed::is_negative) {
            return Ok(Err(NotInOrbit {
                reason: Reason::NegativeEntry,
                witness: cur,
                steps: applied,
            }));
        }
        trace.push(cur.clone());
    }
    applied.reverse();
    Ok(Ok(Descent {
        word: applied,
        trace,
    }))
}

fn search(graph: &Graph, s: &OrbitState) -> Result<Result<Descent, NotInOrbit>, OrbitError> {
    let seed = initial_state(graph, &s.vertex)?;
    let diff = &seed.to_weight(graph)? - &s.to_weight(graph)?;
    let height = match root_in_simple_basis(graph, &diff)? {
        Some(c) if c.values().all(|x| !x.is_negative()) => c.values().sum::<BigInt>(),
        _ => {
            return Ok(Err(NotInOrbit {
                reason: Reason::OutsideRootCone,
                witness: s.clone(),
                steps: Vec::new(),
            }))
        }
    };
    let height = height.to_usize().unwrap_or(usize::MAX);
    let max_level = height.saturating_add(1);
    let sg = bfs_truncated(graph, &s.vertex, max_level, max_level.max(s.depth()))?;
    match sg.index_of(s).and_then(|i| sg.path_down(i)) {
        Some((mut word, trace)) => {
            word.reverse();
            Ok(Ok(Descent { word, trace }))
        }
        None => Ok(Err(NotInOrbit {
            reason: Reason::NotReached,
            witness: s.clone(),
            steps: Vec::new(),
        })),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    InOrbit(Word),
    NotInOrbit(NotInOrbit),
}

pub fn membership(graph: &Graph, s: &OrbitState) -> Result<Membership, OrbitError> {
    Ok(match descend(graph, s)? {
        Ok(d) => Membership::InOrbit(d.word),
        Err(n) => Membership::NotInOrbit(n),
    })
}

/// The X-reduced word `w` with `w(ε_v) = s`; it ends with `s_v` unless `s`
/// is the initial state.
pub fn xreduced_word(graph: &Graph, s: &OrbitState) -> Result<Word, OrbitError> {
    match descend(graph, s)? {
        Ok(d) => Ok(d.xreduced()),
        Err(n) => Err(OrbitError::NotInOrbit(Box::new(n))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, GraphSpec, Side};
    use crate::testutil::{hub, star3};
    use crate::weyl::{act, is_reduced, reflect};

    fn v() -> VertexId {
        VertexId::new("v")
    }

    fn st(a_v: i64, slots: Vec<Vec<i64>>) -> OrbitState {
        OrbitState::new("v", a_v, slots)
    }

    #[test]
    fn initial_states() {
        let s = initial_state(&star3(), &v()).unwrap();
        assert_eq!(s, st(1, vec![vec![], vec![], vec![]]));
        let c = initial_state(&hub(), &VertexId::new("c")).unwrap();
        assert_eq!(c.slots.len(), 5);
        let sg = bfs(&star3(), &v(), 3).unwrap();
        assert_eq!(sg.level_of(&s), Some(1));
    }

    #[test]
    fn star3_low_levels() {
        let g = star3();
        let sg = bfs(&g, &v(), 1).unwrap();
        assert_eq!(sg.counts(), vec![1]);
        let sg = bfs(&g, &v(), 2).unwrap();
        assert_eq!(sg.counts(), vec![1, 1]);
        assert_eq!(sg.states[1], st(2, vec![vec![1], vec![1], vec![1]]));
        let sg = bfs(&g, &v(), 3).unwrap();
        let level3: Vec<OrbitState> = sg.by_level()[2].iter().map(|s| (*s).clone()).collect();
        let mut expected = vec![
            st(2, vec![vec![0, 1], vec![1], vec![1]]),
            st(2, vec![vec![1], vec![0, 1], vec![1]]),
            st(2, vec![vec![1], vec![1], vec![0, 1]]),
        ];
        expected.sort();
        assert_eq!(level3, expected);
    }

    #[test]
    fn star_counts_match_independent_enumeration() {
        // X-reduced elements per length of stars with legs of three nodes
        let sg = bfs_truncated(&star3(), &v(), 7, 3).unwrap();
        assert_eq!(sg.counts(), vec![1, 1, 3, 6, 13, 22, 42]);
        let g4 = Graph::star(4, Side::Target);
        let sg = bfs_truncated(&g4, &v(), 8, 3).unwrap();
        assert_eq!(sg.counts(), vec![1, 1, 4, 10, 26, 59, 141, 326]);
        let sg = bfs_truncated(&star3(), &v(), 9, 4).unwrap();
        assert_eq!(sg.counts(), vec![1, 1, 3, 6, 13, 25, 48, 88, 164]);
        let sg = bfs(&star3(), &v(), 7).unwrap();
        assert_eq!(sg.counts(), vec![1, 1, 3, 6, 13, 25, 51]);
    }

    #[test]
    fn central_move_agrees_with_reflect() {
        let g = star3();
        let sg = bfs(&g, &v(), 6).unwrap();
        let sv = SimpleRoot::Central(v());
        for s in &sg.states {
            let a = apply_generator(&g, s, &sv).unwrap();
            let b = reflect(&g, &sv, &s.to_weight(&g).unwrap()).unwrap();
            assert_eq!(a.to_weight(&g).unwrap(), b);
        }
    }

    #[test]
    fn bfs_states_satisfy_conditions_and_levels_are_layered() {
        for n in 3..=5 {
            let g = Graph::star(n, Side::Target);
            let sg = bfs(&g, &v(), 6).unwrap();
            for s in &sg.states {
                assert!(check_conditions(s).is_empty(), "{s}");
            }
            assert!(sg.same_level_edges().is_empty());
        }
    }

    #[test]
    fn descent_takes_six_steps() {
        let g = star3();
        let s = st(4, vec![vec![2, 1], vec![2, 1], vec![1, 2]]);
        assert!(check_conditions(&s).is_empty());
        let d = descend(&g, &s).unwrap().unwrap();
        assert_eq!(d.word.len(), 6);
        assert_eq!(d.trace.len(), 6);
        assert_eq!(d.trace.last().unwrap(), &initial_state(&g, &v()).unwrap());
        let eps = initial_state(&g, &v()).unwrap().to_weight(&g).unwrap();
        assert_eq!(act(&g, &d.word, &s.to_weight(&g).unwrap()).unwrap(), eps);
        let xw = d.xreduced();
        assert_eq!(act(&g, &xw, &eps).unwrap(), s.to_weight(&g).unwrap());
        assert!(is_reduced(&g, &xw).unwrap());
        assert_eq!(xw.last(), Some(&SimpleRoot::Central(v())));
    }

    #[test]
    fn trivial_descents() {
        let g = star3();
        let d = descend(&g, &initial_state(&g, &v()).unwrap()).unwrap().unwrap();
        assert!(d.word.is_empty());
        let s = st(2, vec![vec![1], vec![1], vec![1]]);
        assert_eq!(
            membership(&g, &s).unwrap(),
            Membership::InOrbit(vec![SimpleRoot::Central(v())])
        );
        let s = st(2, vec![vec![1], vec![0, 1], vec![1]]);
        assert_eq!(
            xreduced_word(&g, &s).unwrap(),
            vec![SimpleRoot::leg("2", Side::Target, 1), SimpleRoot::Central(v())]
        );
    }

    #[test]
    fn state_meeting_conditions_is_not_in_orbit() {
        let g = star3();
        let s = st(7, vec![vec![4, 1, 1], vec![4, 1, 1], vec![2, 2, 2]]);
        assert!(check_conditions(&s).is_empty());
        match membership(&g, &s).unwrap() {
            Membership::NotInOrbit(n) => {
                assert_eq!(n.reason, Reason::NegativeEntry);
                assert_eq!(n.steps, vec![SimpleRoot::Central(v())]);
                assert_eq!(n.witness.slots[2][0], BigInt::from(-1));
            }
            m => panic!("unexpected {m:?}"),
        }
        assert!(matches!(xreduced_word(&g, &s), Err(OrbitError::NotInOrbit(_))));
    }

    #[test]
    fn conditions_are_checked_first() {
        let g = star3();
        let s = st(2, vec![vec![1], vec![1], vec![2]]);
        match membership(&g, &s).unwrap() {
            Membership::NotInOrbit(n) => assert!(matches!(n.reason, Reason::Conditions(_))),
            m => panic!("unexpected {m:?}"),
        }
    }

    #[test]
    fn wrong_slot_count() {
        let g = star3();
        let s = st(1, vec![vec![]]);
        assert!(matches!(descend(&g, &s), Err(OrbitError::SlotCount { .. })));
    }

    #[test]
    fn descent_lengths_match_levels() {
        for n in [3, 4] {
            let g = Graph::star(n, Side::Target);
            let sg = bfs(&g, &v(), 6).unwrap();
            for (s, &l) in sg.states.iter().zip(&sg.levels) {
                let d = descend(&g, s).unwrap().unwrap();
                assert_eq!(d.level(), l, "{s}");
                for (k, t) in d.trace.iter().enumerate() {
                    assert_eq!(sg.level_of(t), Some(l - k - 1));
                }
            }
        }
    }

    #[test]
    fn small_valence_uses_search() {
        // path a - v - b: N = 2
        let g = Graph::new(GraphSpec {
            vertices: ["a", "v", "b"].iter().map(|s| VertexId::new(*s)).collect(),
            edges: vec![Edge::new("x", Some("a"), Some("v")), Edge::new("y", Some("v"), Some("b"))],
        })
        .unwrap();
        let sg = bfs(&g, &v(), 5).unwrap();
        for (s, &l) in sg.states.iter().zip(&sg.levels) {
            let d = descend(&g, s).unwrap().unwrap();
            assert_eq!(d.level(), l);
            let seed = initial_state(&g, &v()).unwrap().to_weight(&g).unwrap();
            assert_eq!(act(&g, &d.xreduced(), &seed).unwrap(), s.to_weight(&g).unwrap());
        }
        let bogus = st(5, vec![vec![], vec![]]);
        assert!(matches!(membership(&g, &bogus).unwrap(), Membership::NotInOrbit(_)));
        // N = 1 and N = 0
        let g1 = Graph::star(1, Side::Target);
        assert_eq!(bfs(&g1, &v(), 5).unwrap().counts(), vec![1, 1, 1, 1, 1]);
        let g0 = Graph::star(0, Side::Target);
        assert_eq!(bfs(&g0, &v(), 5).unwrap().counts(), vec![1, 1]);
    }

    #[test]
    fn state_json_roundtrip() {
        let s = st(4, vec![vec![2, 1], vec![2, 1, 0], vec![1, 2]]);
        let text = s.to_json().to_string();
        assert_eq!(text, r#"{"a_v":4,"slots":[[2,1],[2,1],[1,2]],"vertex":"v"}"#);
        assert_eq!(OrbitState::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn leg_move_choice() {
        let c = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(leg_move(&c(&[1, 2])), Some(1));
        assert_eq!(leg_move(&c(&[3, 1, 2])), Some(2));
        assert_eq!(leg_move(&c(&[1, 2, 1, 3])), Some(3));
        assert_eq!(leg_move(&c(&[2, 1])), None);
    }
}
