//! Partitions and the bipartitions `(λ, μ)` labelling simple objects of the
//! interpolation categories.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Partition(Vec<u64>);

impl TryFrom<Vec<u64>> for Partition {
    type Error = String;

    fn try_from(parts: Vec<u64>) -> Result<Self, Self::Error> {
        Partition::new(&parts).ok_or_else(|| format!("{parts:?} is not weakly decreasing"))
    }
}

impl From<Partition> for Vec<u64> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl Partition {
    /// `None` unless `parts` is weakly decreasing. Trailing zeros are dropped.
    pub fn new(parts: &[u64]) -> Option<Partition> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        let mut v = parts.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        Some(Partition(v))
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `(λ, μ)`: `λ` is the covariant part, `μ` the contravariant one, so
/// `V = [(1),∅]` and `V* = [∅,(1)]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    pub lambda: Partition,
    pub mu: Partition,
}

impl Bipartition {
    pub fn new(lambda: &[u64], mu: &[u64]) -> Option<Bipartition> {
        Some(Bipartition {
            lambda: Partition::new(lambda)?,
            mu: Partition::new(mu)?,
        })
    }

    /// The unit object `[∅,∅]`.
    pub fn trivial() -> Bipartition {
        Bipartition::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.lambda.is_empty() && self.mu.is_empty()
    }

    pub fn dual(&self) -> Bipartition {
        Bipartition {
            lambda: self.mu.clone(),
            mu: self.lambda.clone(),
        }
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lambda, self.mu)
    }
}
