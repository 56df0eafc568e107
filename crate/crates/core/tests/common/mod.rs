#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rdds::{ColumnBoard, Rect, Run, Skyline, Slot};

/// Random canonical skyline with at most `max_runs` runs and heights below
/// `max_h`.
pub fn random_skyline(rng: &mut ChaCha8Rng, max_runs: usize, max_h: i64) -> Skyline {
    let n = rng.random_range(1..=max_runs);
    let mut runs: Vec<Run> = Vec::with_capacity(n);
    let mut x = 0;
    for _ in 0..n {
        let mut h = rng.random_range(0..max_h);
        if let Some(prev) = runs.last() {
            if prev.height == h {
                h = (h + 1) % max_h;
            }
            if prev.height == h {
                continue;
            }
        }
        runs.push(Run::new(x, h));
        x += rng.random_range(1..=4);
    }
    Skyline::from_runs(x, runs).unwrap()
}

/// Random pairwise independent rectangles, produced by dropping pieces on a
/// column board (so many rest on each other) and occasionally lifting one to
/// float.
pub fn random_rects(rng: &mut ChaCha8Rng, n: usize, board_width: i64, max_w: i64) -> Vec<Rect> {
    let mut board = ColumnBoard::new(board_width as usize);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let w = rng.random_range(1..=max_w.min(board_width));
        let h = rng.random_range(1..=6);
        let x = rng.random_range(0..=board_width - w);
        let lift = if rng.random_bool(0.2) { rng.random_range(1..5) } else { 0 };
        let y = board.landing(w, x).unwrap() + lift;
        board.drop_rect(w, h + lift, x).unwrap();
        out.push(Rect::new(x, y, w, h));
    }
    out
}

/// Per-column maximum top, then run-length encoded.
pub fn column_scan_skyline(rects: &[Rect], board_width: i64) -> Skyline {
    let mut cols = vec![0i64; board_width as usize];
    for r in rects {
        for c in r.x..r.right() {
            cols[c as usize] = cols[c as usize].max(r.top());
        }
    }
    ColumnBoard::from_heights(cols).to_skyline()
}

/// Widest-slot table by enumerating every contiguous range of runs: each
/// range `[runs[a].start, end of runs[b])` is a slot whose floor is the highest
/// run in it. Returns a query closure answering "widest at or below h" with
/// the leftmost widest slot.
pub struct RangeOracle {
    /// `(floor, best slot with floor <= this)` sorted by floor.
    table: Vec<(i64, Slot)>,
}

impl RangeOracle {
    pub fn new(sky: &Skyline) -> Self {
        let runs = sky.runs();
        let mut all: Vec<Slot> = Vec::with_capacity(runs.len() * (runs.len() + 1) / 2);
        for a in 0..runs.len() {
            let mut floor = 0;
            for b in a..runs.len() {
                floor = floor.max(runs[b].height);
                all.push(Slot {
                    x: runs[a].start,
                    width: sky.run_end(b) - runs[a].start,
                    floor,
                });
            }
        }
        all.sort_unstable_by_key(|s| s.floor);
        let mut table: Vec<(i64, Slot)> = Vec::new();
        let mut best = Slot::NONE;
        for s in all {
            if s.better_than(&best) {
                best = s;
            }
            match table.last_mut() {
                Some((f, b)) if *f == s.floor => *b = best,
                _ => table.push((s.floor, best)),
            }
        }
        RangeOracle { table }
    }

    pub fn widest_at_or_below(&self, h: i64) -> Slot {
        let i = self.table.partition_point(|(f, _)| *f <= h);
        if i == 0 {
            Slot::NONE
        } else {
            self.table[i - 1].1
        }
    }
}

pub type Steps = Vec<(i64, i64)>;

/// Staircases by ray casting: a horizontal ray at level `y` coming from the
/// left (right) hits the first column strictly taller than `y`. Levels run from
/// `-1` (which always hits the outermost column) to the maximum height.
pub fn visibility_oracle(sky: &Skyline) -> (Steps, Steps) {
    let cols = ColumnBoard::from_skyline(sky);
    let cols = cols.heights();
    let max = *cols.iter().max().unwrap();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for y in -1..max {
        if let Some(c) = cols.iter().position(|&h| h > y) {
            left.push((c as i64, cols[c]));
        }
        if let Some(c) = cols.iter().rposition(|&h| h > y) {
            right.push((c as i64 + 1, cols[c]));
        }
    }
    left.sort_unstable();
    left.dedup();
    right.sort_unstable();
    right.dedup();
    (left, right)
}
