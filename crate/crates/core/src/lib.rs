//! Weyl orbits, X-reduced words, Kac-Weyl expansions and tensor-structure
//! data for Kac-Moody algebras interpolated over decorated graphs.
//!
//! Every computation is exact. Weights carry arbitrary-precision integer
//! coefficients; the brute-force matrix oracle works with machine integers
//! and checks for overflow.

pub mod characters;
pub mod graph;
pub mod json;
pub mod orbit;
pub mod oracle;
pub mod partition;
pub mod tensor;
pub mod verify;
pub mod weight;
pub mod weyl;

pub use characters::{
    character_expansion, denominator_expansion, is_dominant, verma_label, xreduced_tuples,
    CharacterError, CharacterExpansion, Style, VermaLabel, VermaTerm,
};
pub use graph::{validate, Edge, EdgeId, Graph, GraphError, GraphSpec, Side, Slot, VertexId};
pub use json::JsonError;
pub use orbit::{
    bfs, descend, initial_state, membership, xreduced_word, Descent, Membership, NotInOrbit,
    OrbitError, OrbitState, StateGraph,
};
pub use oracle::{compare_with_orbit, enumerate, survey, OracleError, OracleReport, TruncatedStar};
pub use partition::{Bipartition, Partition};
pub use tensor::{
    center_generators, center_generators_amputated, degree_component, gl_dim, lambda2,
    serre_generators, sym2, verify_gl_sq_decompositions, CenterMap, FormalSum, GlReport,
    TensorError, TensorTerm,
};
pub use verify::{invariant_suite, InvariantReport, VerifyError};
pub use weight::{
    lin_invariant, pair_coroot, quad_invariant, simple_root, Coord, SimpleRoot, Weight,
    WeightError,
};
pub use weyl::{
    act, dot, dot_zero, inversion_roots, is_reduced, reflect, root_in_simple_basis, Generator,
    Word, WeylError,
};

#[cfg(test)]
pub(crate) mod testutil {
    use crate::graph::{Edge, Graph, GraphSpec, Side, VertexId};
    use crate::weight::{Coord, Weight};

    /// Central vertex `c` with edges to three leaves and a loop.
    pub fn hub() -> Graph {
        Graph::new(GraphSpec {
            vertices: ["c", "a", "b", "d"].iter().map(|s| VertexId::new(*s)).collect(),
            edges: vec![
                Edge::new("t1", Some("c"), Some("a")),
                Edge::new("t2", Some("c"), Some("b")),
                Edge::new("t3", Some("c"), Some("d")),
                Edge::new("t4", Some("c"), Some("c")),
            ],
        })
        .unwrap()
    }

    pub fn star3() -> Graph {
        Graph::star(3, Side::Target)
    }

    pub fn eps_v(v: &str) -> Weight {
        Weight::basis(Coord::Central(VertexId::new(v)))
    }

    pub fn eps_leg(edge: &str, i: i64) -> Coord {
        Coord::leg(&crate::graph::EdgeId::new(edge), i).unwrap()
    }
}
