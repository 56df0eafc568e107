//! Widest droppable slot at or below a given height.
//!
//! For every run of a skyline fragment we find the nearest strictly higher run
//! on each side with two sweeps over an [`OrdTree`] keyed by height (left to
//! right, then right to left), each node aggregating the extreme x coordinate
//! of its subtree. The two bounds give the widest rectangle that rests on that
//! run. A prefix maximum over heights then answers "widest at or below `h`"
//! with one binary search.
//!
//! The fragment edges act as walls, so slots touching them are truncated there.
//! Callers that split a skyline into pieces recover the full width of such slots
//! from the staircases.

use serde::{Deserialize, Serialize};

use crate::geometry::{run_end, Run, Skyline};
use crate::ordtree::OrdTree;

/// A horizontal gap into which a rectangle can be dropped.
///
/// `width == 0` means nothing fits. Otherwise any rectangle no wider than
/// `width`, dropped with its left border at `x`, lands at or below `floor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub x: i64,
    pub width: i64,
    pub floor: i64,
}

impl Slot {
    pub const NONE: Slot = Slot {
        x: 0,
        width: 0,
        floor: 0,
    };

    /// Wider wins; among equally wide slots the leftmost wins.
    #[inline]
    pub fn better_than(&self, other: &Slot) -> bool {
        self.width > other.width || (self.width == other.width && self.x < other.x)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HeightIndex {
    entries: Vec<(i64, Slot)>,
}

impl HeightIndex {
    pub fn build(sky: &Skyline) -> Self {
        Self::from_runs(sky.runs(), sky.board_width())
    }

    /// Index a fragment whose runs end at `end`.
    pub fn from_runs(runs: &[Run], end: i64) -> Self {
        if runs.is_empty() {
            return HeightIndex::default();
        }
        let start = runs[0].start;
        let n = runs.len();

        // Left to right: store each run's end under its height; the largest end
        // among strictly higher keys is where the nearest higher run to the left
        // stops.
        let mut left = vec![start; n];
        let mut tree = OrdTree::new();
        for (i, r) in runs.iter().enumerate() {
            if let Some(x) = tree.max_val_above(r.height) {
                left[i] = x;
            }
            tree.upsert(r.height, run_end(runs, i, end), i64::max);
        }

        // Right to left, storing negated starts so the max aggregate yields the
        // nearest higher run to the right.
        let mut right = vec![end; n];
        tree.clear();
        for i in (0..n).rev() {
            let r = runs[i];
            if let Some(neg) = tree.max_val_above(r.height) {
                right[i] = -neg;
            }
            tree.upsert(r.height, -r.start, i64::max);
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_unstable_by_key(|&i| (runs[i].height, runs[i].start));

        let mut entries: Vec<(i64, Slot)> = Vec::new();
        let mut best = Slot::NONE;
        for i in order {
            let slot = Slot {
                x: left[i],
                width: right[i] - left[i],
                floor: runs[i].height,
            };
            if slot.better_than(&best) {
                best = slot;
            }
            match entries.last_mut() {
                Some((h, s)) if *h == runs[i].height => *s = best,
                _ => entries.push((runs[i].height, best)),
            }
        }
        HeightIndex { entries }
    }

    /// Widest slot whose floor is at or below `h`.
    pub fn widest_at_or_below(&self, h: i64) -> Slot {
        let i = self.entries.partition_point(|(eh, _)| *eh <= h);
        match i {
            0 => Slot::NONE,
            _ => self.entries[i - 1].1,
        }
    }

    pub fn entries(&self) -> &[(i64, Slot)] {
        &self.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sky(w: i64, runs: &[(i64, i64)]) -> Skyline {
        Skyline::from_runs(w, runs.iter().map(|&r| r.into()).collect()).unwrap()
    }

    #[test]
    fn two_towers() {
        let idx = HeightIndex::build(&sky(8, &[(0, 4), (3, 0), (5, 2)]));
        let e = idx.entries();
        assert_eq!(e.len(), 3);
        assert_eq!(e[0], (0, Slot { x: 3, width: 2, floor: 0 }));
        assert_eq!(e[1], (2, Slot { x: 3, width: 5, floor: 2 }));
        assert_eq!(e[2].0, 4);
        assert_eq!((e[2].1.x, e[2].1.width), (0, 8));
        assert!(e[2].1.floor <= 4);

        assert_eq!(idx.widest_at_or_below(1), Slot { x: 3, width: 2, floor: 0 });
        assert_eq!(idx.widest_at_or_below(2), Slot { x: 3, width: 5, floor: 2 });
    }

    #[test]
    fn flat_board() {
        let idx = HeightIndex::build(&Skyline::flat(10).unwrap());
        assert_eq!(idx.entries(), &[(0, Slot { x: 0, width: 10, floor: 0 })]);
        assert_eq!(idx.widest_at_or_below(0), Slot { x: 0, width: 10, floor: 0 });
    }

    #[test]
    fn below_every_surface() {
        let idx = HeightIndex::build(&sky(6, &[(0, 5)]));
        assert_eq!(idx.widest_at_or_below(4).width, 0);
        assert_eq!(idx.widest_at_or_below(5).width, 6);
    }

    #[test]
    fn descending_staircase_blocked_by_taller_left_wall() {
        // heights 5,3,1 over three columns each: the height-3 run is bounded on
        // the left by the height-5 wall and open to the right.
        let idx = HeightIndex::build(&sky(9, &[(0, 5), (3, 3), (6, 1)]));
        assert_eq!(idx.widest_at_or_below(3), Slot { x: 3, width: 6, floor: 3 });
        assert_eq!(idx.widest_at_or_below(2), Slot { x: 6, width: 3, floor: 1 });
    }

    #[test]
    fn floor_run_in_the_middle_of_its_slot() {
        // The widest slot at height 2 rests on the middle run and is bounded by
        // the two height-5 walls; neither bounding wall's foot is at height 2.
        let idx = HeightIndex::build(&sky(5, &[(0, 5), (1, 1), (2, 2), (3, 1), (4, 5)]));
        assert_eq!(idx.widest_at_or_below(2), Slot { x: 1, width: 3, floor: 2 });
        assert_eq!(idx.widest_at_or_below(1), Slot { x: 1, width: 1, floor: 1 });
    }

    #[test]
    fn equal_heights_do_not_block() {
        let idx = HeightIndex::build(&sky(6, &[(0, 2), (2, 0), (4, 2)]));
        assert_eq!(idx.widest_at_or_below(2), Slot { x: 0, width: 6, floor: 2 });
    }

    #[test]
    fn ties_keep_leftmost() {
        let idx = HeightIndex::build(&sky(7, &[(0, 0), (2, 9), (3, 0), (5, 9)]));
        assert_eq!(idx.widest_at_or_below(0), Slot { x: 0, width: 2, floor: 0 });
    }
}
