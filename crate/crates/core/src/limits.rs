//! Size caps shared by the enumerators.

use std::sync::OnceLock;

pub const DEFAULT_MAX_BASES: usize = 1_000_000;
pub const MAX_HULL_VERTICES: usize = 5_000;
pub const MAX_FACES: usize = 200_000;
pub const MAX_POSET_NODES: usize = 200_000;

/// Basis cap; the `LPM_MAX_BASES` environment variable overrides the default.
pub fn max_bases() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("LPM_MAX_BASES")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_BASES)
    })
}
