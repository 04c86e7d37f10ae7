use serde::{Deserialize, Serialize};

/// Size caps for the exponential parts of the library.
///
/// Every operation that enumerates subgroups, automorphisms, graph products or
/// dihedral candidate sets checks its input against one of these caps and
/// fails cleanly instead of running away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest group order accepted by subgroup and automorphism enumeration.
    pub order_cap: usize,
    /// Largest explicit automorphism group that will be materialized.
    pub aut_cap: usize,
    /// Largest vertex count for graph products and isomorphism search.
    pub graph_cap: usize,
    /// Largest `n` accepted by the dihedral 4-valent enumeration.
    pub enumeration_cap: usize,
    /// Largest group order for which every factorization of a decomposition is listed.
    pub all_factorizations_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            order_cap: 128,
            aut_cap: 1_000_000,
            graph_cap: 4096,
            enumeration_cap: 60,
            all_factorizations_cap: 48,
        }
    }
}

impl Limits {
    pub fn with_order_cap(mut self, cap: usize) -> Self {
        self.order_cap = cap;
        self
    }

    pub fn check_order(&self, order: usize) -> crate::Result<()> {
        if order > self.order_cap {
            return Err(crate::Error::OrderCapExceeded {
                order,
                cap: self.order_cap,
            });
        }
        Ok(())
    }
}
