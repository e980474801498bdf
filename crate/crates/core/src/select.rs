//! Top-k selection over candidate lists.

use std::cmp::Ordering;

use crate::FacilityId;

/// Ranking used by every top-k answer: heavier first, then smaller id.
pub fn rank<W: Ord>(a: &(FacilityId, W), b: &(FacilityId, W)) -> Ordering {
    b.1.cmp(&a.1).then(a.0.cmp(&b.0))
}

const SORT_CUTOFF: usize = 1024;

/// Keeps the `k` best candidates, sorted best first.
///
/// Small lists are sorted outright; larger ones go through
/// `select_nth_unstable_by` first so only the winners get sorted.
pub fn top_k<W: Ord>(mut cands: Vec<(FacilityId, W)>, k: usize) -> Vec<(FacilityId, W)> {
    if k == 0 {
        return Vec::new();
    }
    if cands.len() > SORT_CUTOFF && k < cands.len() {
        cands.select_nth_unstable_by(k - 1, rank);
        cands.truncate(k);
    }
    cands.sort_by(rank);
    cands.truncate(k);
    cands
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ties_prefer_smaller_ids() {
        let c = vec![(FacilityId(3), 5), (FacilityId(1), 5), (FacilityId(2), 9)];
        assert_eq!(top_k(c, 2), vec![(FacilityId(2), 9), (FacilityId(1), 5)]);
    }

    #[test]
    fn selection_path_matches_sort() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c: Vec<(FacilityId, i64)> = (0..5000)
            .map(|i| (FacilityId(i), rng.gen_range(0..100)))
            .collect();
        let mut sorted = c.clone();
        sorted.sort_by(rank);
        for k in [0, 1, 7, 1500, 5000, 6000] {
            let want: Vec<_> = sorted.iter().take(k).cloned().collect();
            assert_eq!(top_k(c.clone(), k), want);
        }
    }
}
