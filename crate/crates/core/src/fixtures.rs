//! Named test graphs. Vertices are written 1-based in documentation and
//! stored 0-based; [`v`] converts.
//!
//! * CHAIN3: 1→2→3
//! * CHAIN4: 1→2→3→4
//! * DIAMOND: 1→2, 1→3, 2→4, 3→4

use crate::graph::{Dag, Vertex};

/// Stored id of the 1-based fixture vertex `k`.
pub const fn v(k: Vertex) -> Vertex {
    k - 1
}

pub fn chain3() -> Dag {
    Dag::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
}

pub fn chain4() -> Dag {
    Dag::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap()
}

pub fn diamond() -> Dag {
    Dag::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
}

/// All three fixtures with their names.
pub fn all() -> Vec<(&'static str, Dag)> {
    vec![
        ("CHAIN3", chain3()),
        ("CHAIN4", chain4()),
        ("DIAMOND", diamond()),
    ]
}
