//! Seed derivation for sweep cells.

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the cell `(q, trial)` of a sweep started with `master`.
pub fn cell_seed(master: u64, q: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ q) ^ trial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn distinct_cells_get_distinct_seeds() {
        let mut seen = HashSet::new();
        for q in [3u64, 5, 7, 9, 25, 49] {
            for t in 0..200 {
                assert!(seen.insert(cell_seed(42, q, t)));
            }
        }
        assert_ne!(cell_seed(1, 7, 0), cell_seed(2, 7, 0));
        assert_eq!(cell_seed(1, 7, 3), cell_seed(1, 7, 3));
    }
}
