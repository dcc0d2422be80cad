//! Size limits for the brute-force enumerations.

/// Caps on enumeration sizes. Exceeding a cap is reported as an error, never
/// silently truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest matrix group materialized by closure.
    pub max_group_order: usize,
    /// Largest subspace lattice scanned by the module oracle.
    pub max_subspaces: u64,
    /// Largest `n` for which a building is built.
    pub max_building_n: usize,
    /// Largest number of building vertices.
    pub max_building_vertices: u64,
    /// Largest number of candidate matrices in a normalizer scan.
    pub max_scan: u64,
    /// Search-node budget for Levi sphere containment.
    pub max_levi_nodes: u64,
    /// Largest number of simplices handed to the homology engine.
    pub max_simplices: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_group_order: 200_000,
            max_subspaces: 10_000,
            max_building_n: 6,
            max_building_vertices: 1_000,
            max_scan: 1_000_000,
            max_levi_nodes: 1_000_000,
            max_simplices: 20_000,
        }
    }
}
