//! The rectangle dropping data structure.
//!
//! The global skyline is cut into contiguous chunks of at most `2S` runs, where
//! `S = ceil(sqrt(n log2 n))`, and any two neighbouring chunks hold at least `S`
//! runs together. Each chunk carries its own [`HeightIndex`], both staircases
//! and its maximum height. A query for the widest slot at or below `h` asks
//! every chunk's index and then sweeps the chunk list once to pick up slots that
//! straddle chunk boundaries. A greedy query binary searches that over the
//! multiset of current run heights.
//!
//! Updates rebuild only the chunks touching the footprint of the dropped
//! rectangle; chunks it covers entirely are unlinked. Whenever the rectangle
//! count doubles the whole structure is rebuilt with a fresh `S`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    build_skyline, checked_top, push_canonical, run_at, run_end, Rect, Run, Skyline, Staircase,
};
use crate::height_index::{HeightIndex, Slot};
use crate::ordtree::HeightMultiset;

const MIN_CHUNK: usize = 8;
const MIN_REBUILD: usize = 64;

/// Chunk parameter `S` for `n` rectangles.
pub fn chunk_param(n: usize) -> usize {
    let n = n.max(2) as f64;
    ((n * n.log2()).sqrt().ceil() as usize).max(MIN_CHUNK)
}

/// How the chunk parameter is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChunkPolicy {
    /// `S` from the rectangle count, refreshed whenever the count doubles.
    Auto,
    /// A fixed `S`.
    Fixed(usize),
    /// Keep everything in one chunk.
    Single,
}

/// Answer to a greedy query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GreedyMove {
    pub x: i64,
    pub landing: i64,
    pub resulting_max: i64,
}

/// What the most recent update did to the chunk list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UpdateStats {
    /// Chunks constructed from scratch by the local repair.
    pub rebuilt: usize,
    /// Chunks unlinked (covered, rebuilt or absorbed).
    pub removed: usize,
    /// The update triggered a scheduled full rebuild.
    pub full_rebuild: bool,
}

#[derive(Debug, Clone)]
struct Chunk {
    runs: Vec<Run>,
    end: i64,
    index: HeightIndex,
    left: Staircase,
    right: Staircase,
    max_h: i64,
}

impl Chunk {
    fn new(runs: Vec<Run>, end: i64) -> Self {
        debug_assert!(!runs.is_empty());
        let index = HeightIndex::from_runs(&runs, end);
        let left = Staircase::left_of(&runs);
        let right = Staircase::right_of(&runs, end);
        let max_h = left.steps.last().map_or(0, |s| s.height);
        Chunk {
            runs,
            end,
            index,
            left,
            right,
            max_h,
        }
    }

    fn start(&self) -> i64 {
        self.runs[0].start
    }

    fn len(&self) -> usize {
        self.runs.len()
    }

    /// Highest column in `[x0, x1)`, which must lie inside the chunk.
    fn range_max(&self, x0: i64, x1: i64) -> i64 {
        let first = run_at(&self.runs, x0);
        self.runs[first..]
            .iter()
            .take_while(|r| r.start < x1)
            .map(|r| r.height)
            .max()
            .unwrap()
    }

    /// Leftmost slot of at least `width` at or below `h` whose both sides are
    /// walls inside this chunk.
    fn leftmost_interior_fit(&self, h: i64, width: i64) -> Option<i64> {
        let mut open: Option<i64> = None;
        for (i, r) in self.runs.iter().enumerate() {
            if r.height > h {
                if let Some(x) = open {
                    if r.start - x >= width {
                        return Some(x);
                    }
                }
                open = Some(run_end(&self.runs, i, self.end));
            }
        }
        None
    }
}

#[derive(Debug, Clone)]
pub struct Rdds {
    board_width: i64,
    chunks: Vec<Chunk>,
    n_rects: usize,
    global_max: i64,
    heights: HeightMultiset,
    chunk_size: usize,
    policy: ChunkPolicy,
    rebuild_at: usize,
    stats: UpdateStats,
}

impl Rdds {
    /// An empty board.
    pub fn new(board_width: i64) -> Result<Self> {
        Self::with_policy(board_width, ChunkPolicy::Auto)
    }

    pub fn with_policy(board_width: i64, policy: ChunkPolicy) -> Result<Self> {
        Ok(Self::from_skyline(Skyline::flat(board_width)?, 0, policy))
    }

    /// Build from a set of independent rectangles in `O(n log n)`.
    pub fn bulk_build(rects: &[Rect], board_width: i64) -> Result<Self> {
        Self::bulk_build_with(rects, board_width, ChunkPolicy::Auto)
    }

    pub fn bulk_build_with(rects: &[Rect], board_width: i64, policy: ChunkPolicy) -> Result<Self> {
        let sky = build_skyline(rects, board_width)?;
        Ok(Self::from_skyline(sky, rects.len(), policy))
    }

    /// Build over an existing skyline that was produced by `n_rects` rectangles.
    pub fn from_skyline(sky: Skyline, n_rects: usize, policy: ChunkPolicy) -> Self {
        let board_width = sky.board_width();
        let mut rdds = Rdds {
            board_width,
            chunks: Vec::new(),
            n_rects,
            global_max: 0,
            heights: HeightMultiset::new(),
            chunk_size: MIN_CHUNK,
            policy,
            rebuild_at: 0,
            stats: UpdateStats::default(),
        };
        rdds.rebuild_all(sky.into_runs());
        rdds
    }

    fn rebuild_all(&mut self, runs: Vec<Run>) {
        self.chunk_size = match self.policy {
            ChunkPolicy::Auto => chunk_param(self.n_rects),
            ChunkPolicy::Fixed(s) => s.max(1),
            ChunkPolicy::Single => usize::MAX / 4,
        };
        self.rebuild_at = (2 * self.n_rects).max(MIN_REBUILD);
        self.heights = HeightMultiset::new();
        self.heights.insert(0);
        for r in &runs {
            self.heights.insert(r.height);
        }
        self.global_max = runs.iter().map(|r| r.height).max().unwrap_or(0);
        self.chunks = partition(runs, self.board_width, self.chunk_size);
    }

    pub fn board_width(&self) -> i64 {
        self.board_width
    }

    pub fn n_rects(&self) -> usize {
        self.n_rects
    }

    pub fn global_max(&self) -> i64 {
        self.global_max
    }

    /// The current chunk parameter `S`.
    pub fn chunk_size(&self) -> usize {
        self.chunk_size
    }

    pub fn chunk_count(&self) -> usize {
        self.chunks.len()
    }

    /// Run count of every chunk, left to right.
    pub fn chunk_lengths(&self) -> Vec<usize> {
        self.chunks.iter().map(Chunk::len).collect()
    }

    pub fn last_update_stats(&self) -> UpdateStats {
        self.stats
    }

    /// Candidate landing heights with multiplicities: every run height plus one
    /// extra copy of the ground.
    pub fn candidate_heights(&self) -> Vec<(i64, usize)> {
        self.heights.entries()
    }

    /// The global skyline.
    pub fn snapshot(&self) -> Skyline {
        let runs = self
            .chunks
            .iter()
            .flat_map(|c| c.runs.iter().copied())
            .collect();
        Skyline::from_canonical(self.board_width, runs)
    }

    fn chunk_index(&self, x: i64) -> usize {
        self.chunks.partition_point(|c| c.start() <= x) - 1
    }

    /// Widest rectangle that can be dropped to lie at or below `h`.
    pub fn query_by_height(&self, h: i64) -> Slot {
        let mut best = Slot::NONE;
        for c in &self.chunks {
            let s = c.index.widest_at_or_below(h);
            if s.better_than(&best) {
                best = s;
            }
        }

        // Slots crossing chunk boundaries. `open_x` is where the current stretch
        // of columns at or below `h` begins (the left wall to start with) and
        // `open_floor` the highest column seen in it so far.
        let mut open_x = 0;
        let mut open_floor = 0;
        for c in &self.chunks {
            if c.max_h <= h {
                open_floor = open_floor.max(c.max_h);
                continue;
            }
            let (xl, before) = c.left.leftmost_above(h).unwrap();
            let slot = Slot {
                x: open_x,
                width: xl - open_x,
                floor: open_floor.max(before.unwrap_or(0)),
            };
            if slot.width > 0 && slot.better_than(&best) {
                best = slot;
            }
            let (xr, after) = c.right.rightmost_above(h).unwrap();
            open_x = xr;
            open_floor = after.unwrap_or(0);
        }
        let slot = Slot {
            x: open_x,
            width: self.board_width - open_x,
            floor: open_floor,
        };
        if slot.width > 0 && slot.better_than(&best) {
            best = slot;
        }
        best
    }

    /// Leftmost x at which a rectangle of `width` lands at or below `h`.
    fn leftmost_fit(&self, h: i64, width: i64) -> Option<i64> {
        let mut open_x = 0;
        for c in &self.chunks {
            if c.max_h <= h {
                continue;
            }
            let (xl, _) = c.left.leftmost_above(h).unwrap();
            if xl - open_x >= width {
                return Some(open_x);
            }
            if c.index.widest_at_or_below(h).width >= width {
                if let Some(x) = c.leftmost_interior_fit(h, width) {
                    return Some(x);
                }
            }
            open_x = c.right.rightmost_above(h).unwrap().0;
        }
        (self.board_width - open_x >= width).then_some(open_x)
    }

    /// Where to drop a `width` x `height` rectangle so it lands as low as
    /// possible (leftmost among the optimal positions), and the highest point of
    /// the board after that drop. Does not modify the board.
    pub fn query(&self, width: i64, height: i64) -> Result<GreedyMove> {
        if width < 1 || height < 1 {
            return Err(Error::EmptyRect { width, height });
        }
        if width > self.board_width {
            return Err(Error::WidthExceedsBoard {
                width,
                board_width: self.board_width,
            });
        }
        // Feasibility is monotone in h and always holds at the global maximum,
        // which is the largest candidate.
        let (mut lo, mut hi) = (0, self.heights.distinct() - 1);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            let h = self.heights.nth_distinct(mid).unwrap();
            if self.query_by_height(h).width >= width {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let landing = self.heights.nth_distinct(lo).unwrap();
        let x = self
            .leftmost_fit(landing, width)
            .expect("a feasible height always has a fitting slot");
        let top = checked_top(landing, height)?;
        Ok(GreedyMove {
            x,
            landing,
            resulting_max: self.global_max.max(top),
        })
    }

    /// Highest column in `[x0, x1)`.
    fn footprint_max(&self, x0: i64, x1: i64) -> i64 {
        let ci = self.chunk_index(x0);
        let cj = self.chunk_index(x1 - 1);
        if ci == cj {
            return self.chunks[ci].range_max(x0, x1);
        }
        let head = self.chunks[ci].right.suffix_max_after(x0).unwrap();
        let tail = self.chunks[cj].left.prefix_max_before(x1).unwrap();
        self.chunks[ci + 1..cj]
            .iter()
            .map(|c| c.max_h)
            .fold(head.max(tail), i64::max)
    }

    /// End of the footprint `[x, x + width)`, checked against the board.
    fn footprint_end(&self, width: i64, x: i64) -> Result<i64> {
        if width > self.board_width {
            return Err(Error::WidthExceedsBoard {
                width,
                board_width: self.board_width,
            });
        }
        match x.checked_add(width) {
            Some(e) if x >= 0 && e <= self.board_width => Ok(e),
            _ => Err(Error::OutOfBoard {
                x,
                width,
                board_width: self.board_width,
            }),
        }
    }

    /// Height at which a rectangle of `width` dropped at `x` would come to rest.
    pub fn landing_height(&self, width: i64, x: i64) -> Result<i64> {
        if width < 1 {
            return Err(Error::EmptyRect { width, height: 1 });
        }
        let x_end = self.footprint_end(width, x)?;
        Ok(self.footprint_max(x, x_end))
    }

    /// Drop a `width` x `height` rectangle with its left border at `x`. Returns
    /// the highest point of the board afterwards.
    pub fn update(&mut self, width: i64, height: i64, x: i64) -> Result<i64> {
        if width < 1 || height < 1 {
            return Err(Error::EmptyRect { width, height });
        }
        let x_end = self.footprint_end(width, x)?;
        let landing = self.footprint_max(x, x_end);
        let top = checked_top(landing, height)?;

        // The chunks holding the columns just outside the footprint own every
        // run that may merge with the new top, so they bound the repair window.
        let mut lo = self.chunk_index((x - 1).max(0));
        let mut hi = self.chunk_index(x_end.min(self.board_width - 1));

        let mut runs: Vec<Run> = Vec::with_capacity(self.chunks[lo].len() + self.chunks[hi].len() + 2);
        runs.extend(self.chunks[lo].runs.iter().take_while(|r| r.start < x));
        push_canonical(&mut runs, Run::new(x, top));
        if x_end < self.board_width {
            let right = &self.chunks[hi].runs;
            let j = run_at(right, x_end);
            push_canonical(&mut runs, Run::new(x_end, right[j].height));
            for r in &right[j + 1..] {
                push_canonical(&mut runs, *r);
            }
        }

        // Merge with undersized neighbours.
        let s = self.chunk_size;
        loop {
            if lo > 0 && self.chunks[lo - 1].len() + runs.len() < s {
                lo -= 1;
                let mut merged = self.chunks[lo].runs.clone();
                merged.extend_from_slice(&runs);
                runs = merged;
            } else if hi + 1 < self.chunks.len() && self.chunks[hi + 1].len() + runs.len() < s {
                hi += 1;
                runs.extend_from_slice(&self.chunks[hi].runs);
            } else {
                break;
            }
        }

        for c in &self.chunks[lo..=hi] {
            for r in &c.runs {
                self.heights.remove(r.height);
            }
        }
        for r in &runs {
            self.heights.insert(r.height);
        }

        let end = self.chunks[hi].end;
        let pieces = partition(runs, end, s);
        self.stats = UpdateStats {
            rebuilt: pieces.len(),
            removed: hi - lo + 1,
            full_rebuild: false,
        };
        self.chunks.splice(lo..=hi, pieces);

        self.n_rects += 1;
        self.global_max = self.global_max.max(top);
        if self.policy == ChunkPolicy::Auto && self.n_rects >= self.rebuild_at {
            let runs = std::mem::take(&mut self.chunks)
                .into_iter()
                .flat_map(|c| c.runs)
                .collect();
            self.rebuild_all(runs);
            self.stats.full_rebuild = true;
        }
        Ok(self.global_max)
    }

    /// Check the structural invariants: chunk bounds, contiguity, canonical
    /// form, staircase monotonicity, candidate heights and the global maximum.
    pub fn validate(&self) -> std::result::Result<(), String> {
        self.check(false)
    }

    /// [`Rdds::validate`], and also rebuild every chunk's substructures from its
    /// runs and compare.
    pub fn validate_deep(&self) -> std::result::Result<(), String> {
        self.check(true)
    }

    fn check(&self, deep: bool) -> std::result::Result<(), String> {
        let s = self.chunk_size;
        if self.chunks.is_empty() {
            return Err("no chunks".into());
        }
        if self.chunks[0].start() != 0 {
            return Err("first chunk does not start at 0".into());
        }
        if self.chunks.last().unwrap().end != self.board_width {
            return Err("last chunk does not end at the board width".into());
        }
        for (i, c) in self.chunks.iter().enumerate() {
            if c.len() > s.saturating_mul(2) {
                return Err(format!("chunk {i} has {} runs, more than 2S = {}", c.len(), 2 * s));
            }
            if let Some(next) = self.chunks.get(i + 1) {
                if c.end != next.start() {
                    return Err(format!(
                        "chunk {i} ends at {} but chunk {} starts at {}",
                        c.end,
                        i + 1,
                        next.start()
                    ));
                }
                if c.len() + next.len() < s {
                    return Err(format!("chunks {i} and {} hold fewer than S = {s} runs", i + 1));
                }
            }
            if c.max_h != c.runs.iter().map(|r| r.height).max().unwrap() {
                return Err(format!("chunk {i} has a stale maximum"));
            }
            for pair in c.left.steps.windows(2) {
                if !(pair[0].x < pair[1].x && pair[0].height < pair[1].height) {
                    return Err(format!("left staircase of chunk {i} is not increasing"));
                }
            }
            for pair in c.right.steps.windows(2) {
                if !(pair[0].x < pair[1].x && pair[0].height > pair[1].height) {
                    return Err(format!("right staircase of chunk {i} is not decreasing"));
                }
            }
            if deep {
                let fresh = Chunk::new(c.runs.clone(), c.end);
                if fresh.index != c.index || fresh.left != c.left || fresh.right != c.right {
                    return Err(format!("chunk {i} carries stale substructures"));
                }
            }
        }
        let runs: Vec<Run> = self
            .chunks
            .iter()
            .flat_map(|c| c.runs.iter().copied())
            .collect();
        let max = runs.iter().map(|r| r.height).max().unwrap();
        let mut heights: Vec<i64> = runs.iter().map(|r| r.height).collect();
        Skyline::from_runs(self.board_width, runs).map_err(|e| e.to_string())?;
        if max != self.global_max {
            return Err(format!("global max {} but skyline max {max}", self.global_max));
        }
        heights.push(0);
        heights.sort_unstable();
        let mut expect: Vec<(i64, usize)> = Vec::new();
        for h in heights {
            match expect.last_mut() {
                Some((v, c)) if *v == h => *c += 1,
                _ => expect.push((h, 1)),
            }
        }
        if expect != self.heights.entries() {
            return Err("candidate heights disagree with the skyline".into());
        }
        Ok(())
    }
}

/// Cut `runs` into near-equal pieces of at most `2s` runs each. Every piece has
/// at least `s` runs unless there is only one.
fn partition(runs: Vec<Run>, end: i64, s: usize) -> Vec<Chunk> {
    let total = runs.len();
    let k = total.div_ceil(s.saturating_mul(2)).max(1);
    let mut out = Vec::with_capacity(k);
    let mut from = 0;
    for i in 1..=k {
        let to = total * i / k;
        let piece_end = runs.get(to).map_or(end, |r| r.start);
        out.push(Chunk::new(runs[from..to].to_vec(), piece_end));
        from = to;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ColumnBoard;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pairs(s: &Skyline) -> Vec<(i64, i64)> {
        s.runs().iter().map(|&r| r.into()).collect()
    }

    #[test]
    fn fresh_board() {
        let r = Rdds::new(10).unwrap();
        assert_eq!(r.query_by_height(0), Slot { x: 0, width: 10, floor: 0 });
        assert_eq!(r.n_rects(), 0);
        assert_eq!(r.snapshot().runs().len(), 1);
        assert_eq!(pairs(&r.snapshot()), vec![(0, 0)]);
        r.validate().unwrap();
    }

    #[test]
    fn unit_board() {
        let mut r = Rdds::new(1).unwrap();
        assert_eq!(r.update(1, 5, 0).unwrap(), 5);
    }

    #[test]
    fn stacking() {
        let mut r = Rdds::new(10).unwrap();
        assert_eq!(r.update(4, 3, 0).unwrap(), 3);
        assert_eq!(r.update(4, 3, 0).unwrap(), 6);
        assert_eq!(pairs(&r.snapshot()), vec![(0, 6), (4, 0)]);
    }

    #[test]
    fn query_empty() {
        let r = Rdds::new(10).unwrap();
        assert_eq!(
            r.query(3, 2).unwrap(),
            GreedyMove { x: 0, landing: 0, resulting_max: 2 }
        );
        assert!(matches!(r.query(11, 1), Err(Error::WidthExceedsBoard { .. })));
    }

    #[test]
    fn update_rejects_out_of_board() {
        let mut r = Rdds::new(10).unwrap();
        assert!(matches!(r.update(4, 1, 7), Err(Error::OutOfBoard { .. })));
        assert!(matches!(r.update(4, 1, -1), Err(Error::OutOfBoard { .. })));
        assert!(matches!(r.update(0, 1, 0), Err(Error::EmptyRect { .. })));
        assert!(matches!(r.update(11, 1, 0), Err(Error::WidthExceedsBoard { .. })));
        assert!(matches!(r.landing_height(3, 8), Err(Error::OutOfBoard { .. })));
        assert_eq!(r.n_rects(), 0);
    }

    #[test]
    fn bulk_build_empty_matches_new() {
        let a = Rdds::bulk_build(&[], 10).unwrap();
        let b = Rdds::new(10).unwrap();
        assert_eq!(a.snapshot(), b.snapshot());
        assert_eq!(a.chunk_count(), 1);
        assert_eq!(a.candidate_heights(), b.candidate_heights());
    }

    #[test]
    fn bulk_build_rejects_overlap() {
        let rects = [Rect::new(0, 0, 3, 3), Rect::new(1, 1, 1, 1)];
        assert!(matches!(Rdds::bulk_build(&rects, 5), Err(Error::Overlap { .. })));
    }

    #[test]
    fn small_chunks_agree_with_columns() {
        // A tiny S forces many chunks, splits and merges.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40 {
            let w = rng.random_range(1..60);
            let mut r = Rdds::with_policy(w, ChunkPolicy::Fixed(1 + trial % 4)).unwrap();
            let mut b = ColumnBoard::new(w as usize);
            for _ in 0..150 {
                let width = rng.random_range(1..=w.min(6));
                let height = rng.random_range(1..4);
                if rng.random_bool(0.5) {
                    let got = r.query(width, height).unwrap();
                    let (x, landing) = b.best(width).unwrap();
                    assert_eq!((got.x, got.landing), (x, landing));
                } else {
                    let x = rng.random_range(0..=w - width);
                    b.drop_rect(width, height, x).unwrap();
                    r.update(width, height, x).unwrap();
                    assert!(r.last_update_stats().rebuilt <= 4);
                }
                r.validate_deep().unwrap();
            }
            assert_eq!(r.snapshot(), b.to_skyline());
        }
    }

    #[test]
    fn doubling_rebuild_refreshes_chunk_size() {
        let mut r = Rdds::new(4096).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut rebuilds = 0;
        for _ in 0..1000 {
            let w = rng.random_range(1..40);
            let x = rng.random_range(0..=4096 - w);
            r.update(w, 1, x).unwrap();
            if r.last_update_stats().full_rebuild {
                rebuilds += 1;
                assert_eq!(r.chunk_size(), chunk_param(r.n_rects()));
            }
        }
        // 64, 128, 256, 512
        assert_eq!(rebuilds, 4);
        r.validate().unwrap();
    }
}
