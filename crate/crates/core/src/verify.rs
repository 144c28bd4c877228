//! Exhaustive invariant checks on star orbits, shared by the test suite and
//! the `verify` command.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::{json, Value};
use thiserror::Error;

use crate::graph::{Graph, Side, VertexId};
use crate::oracle::{survey, OracleError, TruncatedStar};
use crate::orbit::{bfs, check_conditions, descend, OrbitError};
use crate::weight::{simple_root, SimpleRoot};
use crate::weyl::{act, dot_zero, inversion_roots, reflect, root_in_simple_basis, WeylError};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Weight(#[from] crate::weight::WeightError),
}

/// Leg length of the truncated diagram used for the inversion-root support
/// check.
pub const ORACLE_LEG_LENGTH: usize = 3;

/// Element cap for the oracle part of the suite.
pub const ORACLE_CAP: usize = 2_000_000;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvariantReport {
    pub legs: usize,
    pub max_level: usize,
    pub states: usize,
    /// States failing one of the numeric orbit conditions.
    pub conditions: usize,
    pub same_level_edges: usize,
    /// States where descent fails or does not end at `ε_v`.
    pub descent_failures: usize,
    /// States whose descent length is not `level − 1`.
    pub level_mismatches: usize,
    /// Reconstructed words that do not map `ε_v` back to the state.
    pub word_mismatches: usize,
    /// X-reduced words ending in `s_v` whose first inversion root has
    /// non-positive `a_v`.
    pub first_root_failures: usize,
    /// Prefix pairs violating `(w g)·0 = g(w·0) − α_g`.
    pub dot_recursion_failures: usize,
    pub dot_pairs: usize,
    /// Oracle X-reduced words with an inversion root supported on legs only.
    pub support_failures: usize,
    pub oracle_words: usize,
}

impl InvariantReport {
    pub fn violations(&self) -> usize {
        self.conditions
            + self.same_level_edges
            + self.descent_failures
            + self.level_mismatches
            + self.word_mismatches
            + self.first_root_failures
            + self.dot_recursion_failures
            + self.support_failures
    }

    pub fn holds(&self) -> bool {
        self.violations() == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "legs": self.legs,
            "max_level": self.max_level,
            "states": self.states,
            "dot_pairs": self.dot_pairs,
            "oracle_words": self.oracle_words,
            "violations": {
                "conditions": self.conditions,
                "same_level_edges": self.same_level_edges,
                "descent": self.descent_failures,
                "level": self.level_mismatches,
                "word": self.word_mismatches,
                "first_inversion_root": self.first_root_failures,
                "dot_recursion": self.dot_recursion_failures,
                "inversion_root_support": self.support_failures,
            },
            "holds": self.holds(),
        })
    }
}

/// Runs every check on the star with `legs` legs, exhaustively up to orbit
/// level `max_level`.
pub fn invariant_suite(legs: usize, max_level: usize) -> Result<InvariantReport, VerifyError> {
    let graph = Graph::star(legs, Side::Target);
    let v = VertexId::new("v");
    let sg = bfs(&graph, &v, max_level)?;
    let eps = crate::weight::Weight::basis(crate::weight::Coord::Central(v.clone()));
    let mut r = InvariantReport {
        legs,
        max_level,
        states: sg.states.len(),
        same_level_edges: sg.same_level_edges().len(),
        ..InvariantReport::default()
    };
    for (s, &level) in sg.states.iter().zip(&sg.levels) {
        if legs >= 3 && !check_conditions(s).is_empty() {
            r.conditions += 1;
        }
        let d = match descend(&graph, s)? {
            Ok(d) => d,
            Err(_) => {
                r.descent_failures += 1;
                continue;
            }
        };
        if d.level() != level {
            r.level_mismatches += 1;
        }
        let word = d.xreduced();
        if act(&graph, &word, &eps)? != s.to_weight(&graph)? {
            r.word_mismatches += 1;
        }
        if word.last() == Some(&SimpleRoot::Central(v.clone())) {
            let first = &inversion_roots(&graph, &word)?[0];
            let positive = root_in_simple_basis(&graph, first)?
                .and_then(|c| c.get(&SimpleRoot::Central(v.clone())).cloned())
                .is_some_and(|c| c.is_positive());
            if !positive {
                r.first_root_failures += 1;
            }
        }
        for k in 0..word.len() {
            let prefix = &word[..k];
            let g = &word[k];
            let lhs = dot_zero(&graph, &word[..=k])?;
            let mut rhs = reflect(&graph, g, &dot_zero(&graph, prefix)?)?;
            rhs.add_scaled(&simple_root(&graph, g)?, &-BigInt::one());
            r.dot_pairs += 1;
            if lhs != rhs {
                r.dot_recursion_failures += 1;
            }
        }
    }
    if legs >= 3 && max_level >= 1 {
        let t = TruncatedStar::new(legs, ORACLE_LEG_LENGTH)?;
        let (o, images) = survey(&t, max_level - 1, ORACLE_CAP)?;
        r.support_failures = o.support_violations + o.not_a_root;
        r.oracle_words = images.iter().map(Vec::len).sum();
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_levels_hold() {
        for legs in [3, 4, 5] {
            let r = invariant_suite(legs, 5).unwrap();
            assert!(r.holds(), "{}", r.to_json());
            assert!(r.dot_pairs > 0 && r.oracle_words > 0);
        }
    }

    #[test]
    fn level_one_is_trivial() {
        let r = invariant_suite(3, 1).unwrap();
        assert_eq!(r.states, 1);
        assert_eq!(r.dot_pairs, 0);
        assert!(r.holds());
    }
}
