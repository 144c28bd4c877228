//! Simple reflections and words of `W_D = ∏_v W_v`, inversion roots and the
//! dot action.
//!
//! A word `[g_1, …, g_m]` stands for the product `g_1⋯g_m` and acts
//! right-to-left: [`act`] applies `g_m` first.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::Value;
use thiserror::Error;

use crate::graph::{Graph, GraphError, Side, Slot};
use crate::json::{array_from_json, str_from_json, JsonError};
use crate::weight::{pair_coroot, simple_root, Coord, SimpleRoot, Weight, WeightError};

/// A simple reflection, named by the simple root it reflects in.
pub type Generator = SimpleRoot;

pub type Word = Vec<Generator>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("word is not reduced: inversion root {position} is not positive")]
    NotReduced { position: usize },
}

impl From<GraphError> for WeylError {
    fn from(e: GraphError) -> Self {
        WeylError::Weight(e.into())
    }
}

/// Coefficients of a root in the basis of simple roots.
pub type RootCoeffs = BTreeMap<SimpleRoot, BigInt>;

/// `g(w)`, computed from the images of the basis vectors:
/// leg reflections swap two neighbouring chain coefficients, and for `s_v`
///
/// ```text
/// s_v(ε_v)   = (N-1)ε_v + (N-2)Σ ε_{±1}
/// s_v(ε_{±1}) = -ε_v - Σ_{other slots} ε_{±1}
/// s_v(ε_v')  = ε_v' - ε_v - Σ ε_{±1}
/// ```
pub fn reflect(graph: &Graph, g: &Generator, w: &Weight) -> Result<Weight, WeylError> {
    let owner = g.owner(graph)?;
    let mut out = w.clone();
    match g {
        SimpleRoot::Leg { edge, side, level } => {
            let slot = Slot {
                edge: edge.clone(),
                side: *side,
            };
            let lo = Coord::on_chain(&slot, *level);
            let hi = Coord::on_chain(&slot, level + 1);
            out.set(lo.clone(), w.coeff(&hi));
            out.set(hi, w.coeff(&lo));
        }
        SimpleRoot::Central(_) => {
            let slots = graph.slots_at(&owner)?;
            let n = BigInt::from(slots.len());
            let cv = Coord::Central(owner.clone());
            let cp = Coord::CentralPrime(owner.clone());
            let firsts: Vec<Coord> = slots.iter().map(|s| Coord::on_chain(s, 1)).collect();
            let a_v = w.coeff(&cv);
            let a_p = w.coeff(&cp);
            let a1: Vec<BigInt> = firsts.iter().map(|c| w.coeff(c)).collect();
            let total: BigInt = a1.iter().sum();

            // a_v ε_v ↦ a_v((N-1)ε_v + (N-2)Σε), a_k ε_k ↦ a_k(-ε_v - Σ_{j≠k} ε_j),
            // a_p ε_v' ↦ a_p(ε_v' - ε_v - Σε)
            let new_v = (&n - 1) * &a_v - &total - &a_p;
            out.set(cv, new_v);
            for (c, a_k) in firsts.iter().zip(&a1) {
                let others = &total - a_k;
                out.set(c.clone(), (&n - 2) * &a_v - others - &a_p);
            }
        }
    }
    Ok(out)
}

/// `w − ⟨w, α^∨⟩ α`. Same result as [`reflect`] by an independent route.
pub fn reflect_by_coroot(graph: &Graph, g: &Generator, w: &Weight) -> Result<Weight, WeylError> {
    let p = pair_coroot(graph, w, g)?;
    let alpha = simple_root(graph, g)?;
    let mut out = w.clone();
    out.add_scaled(&alpha, &-p);
    Ok(out)
}

pub fn act(graph: &Graph, word: &[Generator], w: &Weight) -> Result<Weight, WeylError> {
    let mut out = w.clone();
    for g in word.iter().rev() {
        out = reflect(graph, g, &out)?;
    }
    Ok(out)
}

/// Writes `w` in the basis of simple roots, or returns `None` if `w` is not
/// in the root lattice.
///
/// `c_{α_v} = a_v`, and along the chain of a slot at `v` the leg coefficients
/// telescope: `c_{α_i} = a_v − Σ_{j≤i} a_{±j}`, which must reach zero.
pub fn root_in_simple_basis(graph: &Graph, w: &Weight) -> Result<Option<RootCoeffs>, WeylError> {
    w.check_against(graph)?;
    let mut out = RootCoeffs::new();
    let mut covered: Vec<Slot> = Vec::new();
    for v in graph.vertices() {
        if !w.coeff(&Coord::CentralPrime(v.clone())).is_zero() {
            return Ok(None);
        }
        let c_v = w.coeff(&Coord::Central(v.clone()));
        if !c_v.is_zero() {
            out.insert(SimpleRoot::Central(v.clone()), c_v.clone());
        }
        for slot in graph.slots_at(v)? {
            covered.push(slot.clone());
            let chain = w.chain(slot);
            let mut c = c_v.clone();
            for (depth, a) in chain.iter().enumerate() {
                c -= a;
                if depth + 1 == chain.len() {
                    break;
                }
                if !c.is_zero() {
                    out.insert(
                        SimpleRoot::Leg {
                            edge: slot.edge.clone(),
                            side: slot.side,
                            level: depth as u32 + 1,
                        },
                        c.clone(),
                    );
                }
            }
            if !c.is_zero() {
                return Ok(None);
            }
        }
    }
    // Chains on a side with no vertex carry no simple roots.
    for c in w.support() {
        if let Coord::Leg(edge, i) = c {
            let side = if i.get() > 0 { Side::Target } else { Side::Source };
            let slot = Slot {
                edge: edge.clone(),
                side,
            };
            if !covered.contains(&slot) {
                return Ok(None);
            }
        }
    }
    Ok(Some(out))
}

fn is_positive(coeffs: &RootCoeffs) -> bool {
    !coeffs.is_empty() && coeffs.values().all(|c| c.is_positive())
}

/// Whether `w` is a positive element of the root lattice.
pub fn is_positive_root(graph: &Graph, w: &Weight) -> Result<bool, WeylError> {
    Ok(root_in_simple_basis(graph, w)?.is_some_and(|c| is_positive(&c)))
}

/// For `w = s_{i_1}⋯s_{i_m}` returns `β_k = s_{i_m}⋯s_{i_{k+1}}(α_{i_k})`,
/// `k = 1..m`. These are the positive roots made negative by `w`.
pub fn inversion_roots(graph: &Graph, word: &[Generator]) -> Result<Vec<Weight>, WeylError> {
    let mut out = Vec::with_capacity(word.len());
    for (k, g) in word.iter().enumerate() {
        let mut beta = simple_root(graph, g)?;
        for h in &word[k + 1..] {
            beta = reflect(graph, h, &beta)?;
        }
        if !is_positive_root(graph, &beta)? {
            return Err(WeylError::NotReduced { position: k });
        }
        out.push(beta);
    }
    Ok(out)
}

pub fn is_reduced(graph: &Graph, word: &[Generator]) -> Result<bool, WeylError> {
    match inversion_roots(graph, word) {
        Ok(_) => Ok(true),
        Err(WeylError::NotReduced { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `−Σ` of the inversion roots of `word`.
pub fn dot_zero(graph: &Graph, word: &[Generator]) -> Result<Weight, WeylError> {
    let mut out = Weight::zero();
    for beta in inversion_roots(graph, word)? {
        out.add_scaled(&beta, &-BigInt::one());
    }
    Ok(out)
}

/// The ρ-shifted action matching [`dot_zero`]: the reflections are applied
/// in the order they are written (`g_1` first), then `dot_zero(word)` is
/// added.
///
/// Applying the word the other way round does not keep dominant weights
/// X-dominant: on the three-leg star `s_{1,1}s_v` sends a weight with
/// `a_v = −2` to one whose first leg reads `(−1, −3)`.
pub fn dot(graph: &Graph, word: &[Generator], phi: &Weight) -> Result<Weight, WeylError> {
    let shift = dot_zero(graph, word)?;
    let mut out = phi.clone();
    for g in word {
        out = reflect(graph, g, &out)?;
    }
    Ok(&out + &shift)
}

pub fn word_to_json(word: &[Generator]) -> Value {
    Value::Array(word.iter().map(|g| Value::String(g.to_string())).collect())
}

pub fn word_from_json(value: &Value) -> Result<Word, JsonError> {
    array_from_json(value, "$")?
        .iter()
        .enumerate()
        .map(|(i, g)| str_from_json(g, &format!("$[{i}]"))?.parse())
        .collect()
}

pub fn format_word(word: &[Generator]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    word.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}
