//! Skylines of dropped rectangles and the exact drop semantics on them.
//!
//! Heights live on half-open unit columns: column `c` covers `[c, c + 1)` and a
//! rectangle at `x` with width `w` occupies columns `[x, x + w)`. Rectangles that
//! merely touch along an edge never collide.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Height of the virtual walls at `x = 0` and `x = board_width`. Every real
/// height stays strictly below it.
pub const HMAX: i64 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x: i64,
    pub y: i64,
    pub width: i64,
    pub height: i64,
}

impl Rect {
    pub fn new(x: i64, y: i64, width: i64, height: i64) -> Self {
        Rect {
            x,
            y,
            width,
            height,
        }
    }

    pub fn right(&self) -> i64 {
        self.x + self.width
    }

    pub fn top(&self) -> i64 {
        self.y + self.height
    }
}

/// A maximal stretch of columns sharing one height, starting at `start` and
/// extending to the next run's start (or the end of the fragment).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(i64, i64)", into = "(i64, i64)")]
pub struct Run {
    pub start: i64,
    pub height: i64,
}

impl Run {
    pub fn new(start: i64, height: i64) -> Self {
        Run { start, height }
    }
}

impl From<(i64, i64)> for Run {
    fn from((start, height): (i64, i64)) -> Self {
        Run { start, height }
    }
}

impl From<Run> for (i64, i64) {
    fn from(r: Run) -> Self {
        (r.start, r.height)
    }
}

/// End of run `i` within a fragment that stops at `end`.
#[inline]
pub(crate) fn run_end(runs: &[Run], i: usize, end: i64) -> i64 {
    runs.get(i + 1).map_or(end, |r| r.start)
}

/// Index of the run covering column `x`. Requires `runs[0].start <= x`.
#[inline]
pub(crate) fn run_at(runs: &[Run], x: i64) -> usize {
    runs.partition_point(|r| r.start <= x) - 1
}

/// Overwrite columns `[x0, x1)` of the fragment with `height`, keeping the runs
/// canonical. The fragment must cover `[x0, x1)`.
pub(crate) fn overwrite(runs: &[Run], x0: i64, x1: i64, end: i64, height: i64) -> Vec<Run> {
    let first = run_at(runs, x0);
    let mut out = Vec::with_capacity(runs.len() + 2);
    out.extend_from_slice(&runs[..first]);
    if runs[first].start < x0 {
        out.push(runs[first]);
    }
    push_canonical(&mut out, Run::new(x0, height));
    if x1 < end {
        let last = run_at(runs, x1);
        push_canonical(&mut out, Run::new(x1, runs[last].height));
        for r in &runs[last + 1..] {
            push_canonical(&mut out, *r);
        }
    }
    out
}

/// Append a run, merging it into the previous one when the heights agree.
#[inline]
pub(crate) fn push_canonical(out: &mut Vec<Run>, run: Run) {
    match out.last() {
        Some(prev) if prev.height == run.height => {}
        _ => out.push(run),
    }
}

/// Canonical piecewise-constant height function over columns `[0, board_width)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SkylineWire")]
pub struct Skyline {
    board_width: i64,
    runs: Vec<Run>,
}

#[derive(Deserialize)]
struct SkylineWire {
    board_width: i64,
    runs: Vec<Run>,
}

impl TryFrom<SkylineWire> for Skyline {
    type Error = Error;

    fn try_from(w: SkylineWire) -> Result<Self> {
        Skyline::from_runs(w.board_width, w.runs)
    }
}

impl Skyline {
    /// The empty board: a single ground run.
    pub fn flat(board_width: i64) -> Result<Self> {
        if board_width < 1 {
            return Err(Error::BadBoardWidth(board_width));
        }
        Ok(Skyline {
            board_width,
            runs: vec![Run::new(0, 0)],
        })
    }

    /// Validate and wrap a run list.
    pub fn from_runs(board_width: i64, runs: Vec<Run>) -> Result<Self> {
        if board_width < 1 {
            return Err(Error::BadBoardWidth(board_width));
        }
        let malformed = |m: &str| Err(Error::MalformedSkyline(m.to_string()));
        match runs.first() {
            None => return malformed("no runs"),
            Some(r) if r.start != 0 => return malformed("first run must start at 0"),
            _ => {}
        }
        for pair in runs.windows(2) {
            if pair[1].start <= pair[0].start {
                return malformed("run starts must be strictly increasing");
            }
            if pair[1].height == pair[0].height {
                return malformed("adjacent runs share a height");
            }
        }
        if runs.last().unwrap().start >= board_width {
            return malformed("run starts beyond the board");
        }
        if runs.iter().any(|r| r.height < 0 || r.height >= HMAX) {
            return malformed("height out of range");
        }
        Ok(Skyline { board_width, runs })
    }

    /// Trusted constructor for run lists already known to be canonical.
    pub(crate) fn from_canonical(board_width: i64, runs: Vec<Run>) -> Self {
        debug_assert!(Skyline::from_runs(board_width, runs.clone()).is_ok());
        Skyline { board_width, runs }
    }

    pub fn board_width(&self) -> i64 {
        self.board_width
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn into_runs(self) -> Vec<Run> {
        self.runs
    }

    pub fn run_end(&self, i: usize) -> i64 {
        run_end(&self.runs, i, self.board_width)
    }

    /// Height of column `c`.
    pub fn height_at(&self, c: i64) -> i64 {
        self.runs[run_at(&self.runs, c)].height
    }

    pub fn max_height(&self) -> i64 {
        self.runs.iter().map(|r| r.height).max().unwrap_or(0)
    }

    fn check_footprint(&self, x: i64, width: i64) -> Result<()> {
        if width < 1 {
            return Err(Error::EmptyRect { width, height: 1 });
        }
        if width > self.board_width {
            return Err(Error::WidthExceedsBoard {
                width,
                board_width: self.board_width,
            });
        }
        match x.checked_add(width) {
            Some(right) if x >= 0 && right <= self.board_width => Ok(()),
            _ => Err(Error::OutOfBoard {
                x,
                width,
                board_width: self.board_width,
            }),
        }
    }

    /// Height at which a rectangle of `width` dropped at `x` comes to rest:
    /// the maximum column height over its footprint.
    pub fn landing_height(&self, x: i64, width: i64) -> Result<i64> {
        self.check_footprint(x, width)?;
        let right = x + width;
        let first = run_at(&self.runs, x);
        Ok(self.runs[first..]
            .iter()
            .take_while(|r| r.start < right)
            .map(|r| r.height)
            .max()
            .unwrap())
    }

    /// Drop a `width` x `height` rectangle with its left border at `x`. Returns
    /// the new skyline and the landing height.
    pub fn apply_drop(&self, width: i64, height: i64, x: i64) -> Result<(Skyline, i64)> {
        let mut next = self.clone();
        let landing = next.drop_in_place(width, height, x)?;
        Ok((next, landing))
    }

    /// In-place form of [`Skyline::apply_drop`].
    pub fn drop_in_place(&mut self, width: i64, height: i64, x: i64) -> Result<i64> {
        if height < 1 || width < 1 {
            return Err(Error::EmptyRect { width, height });
        }
        let landing = self.landing_height(x, width)?;
        let top = checked_top(landing, height)?;
        self.runs = overwrite(&self.runs, x, x + width, self.board_width, top);
        Ok(landing)
    }

    /// Left and right staircases of the whole skyline.
    pub fn staircases(&self) -> (Staircase, Staircase) {
        (
            Staircase::left_of(&self.runs),
            Staircase::right_of(&self.runs, self.board_width),
        )
    }
}

pub(crate) fn checked_top(landing: i64, height: i64) -> Result<i64> {
    match landing.checked_add(height) {
        Some(top) if top < HMAX => Ok(top),
        _ => Err(Error::HeightOverflow),
    }
}

/// Build the skyline of a set of pairwise independent rectangles with a plane
/// sweep over x, keeping the active rectangles ordered by bottom edge (to detect
/// overlaps) and a multiset of their tops (to read off the current height).
pub fn build_skyline(rects: &[Rect], board_width: i64) -> Result<Skyline> {
    if board_width < 1 {
        return Err(Error::BadBoardWidth(board_width));
    }
    for r in rects {
        if r.width < 1 || r.height < 1 {
            return Err(Error::EmptyRect {
                width: r.width,
                height: r.height,
            });
        }
        let fits = r.x >= 0 && r.y >= 0 && r.x.checked_add(r.width).is_some_and(|e| e <= board_width);
        if !fits {
            return Err(Error::OutOfBoard {
                x: r.x,
                width: r.width,
                board_width,
            });
        }
        if r.y.checked_add(r.height).is_none_or(|t| t >= HMAX) {
            return Err(Error::HeightOverflow);
        }
    }

    // (x, is_insert, rect index); removals sort before insertions at the same x
    // so that rectangles sharing a vertical edge do not collide.
    let mut events: Vec<(i64, bool, usize)> = Vec::with_capacity(2 * rects.len());
    for (i, r) in rects.iter().enumerate() {
        events.push((r.x, true, i));
        events.push((r.right(), false, i));
    }
    events.sort_unstable();

    // bottom -> (top, rect index); intervals in here are pairwise disjoint.
    let mut active: BTreeMap<i64, (i64, usize)> = BTreeMap::new();
    let mut tops: BTreeMap<i64, usize> = BTreeMap::new();
    let mut runs = vec![Run::new(0, 0)];

    let mut e = 0;
    while e < events.len() {
        let x = events[e].0;
        while e < events.len() && events[e].0 == x {
            let (_, insert, i) = events[e];
            let r = &rects[i];
            if insert {
                if let Some((_, &(top, j))) = active.range(..=r.y).next_back() {
                    if top > r.y {
                        return Err(Error::Overlap { first: j, second: i });
                    }
                }
                if let Some((&bottom, &(_, j))) = active.range(r.y + 1..).next() {
                    if bottom < r.top() {
                        return Err(Error::Overlap { first: j, second: i });
                    }
                }
                active.insert(r.y, (r.top(), i));
                *tops.entry(r.top()).or_insert(0) += 1;
            } else {
                active.remove(&r.y);
                let c = tops.get_mut(&r.top()).unwrap();
                *c -= 1;
                if *c == 0 {
                    tops.remove(&r.top());
                }
            }
            e += 1;
        }
        if x >= board_width {
            break;
        }
        let h = tops.keys().next_back().copied().unwrap_or(0);
        let last = runs.last_mut().unwrap();
        if last.height == h {
            continue;
        }
        if last.start == x {
            last.height = h;
            let n = runs.len();
            if n >= 2 && runs[n - 2].height == h {
                runs.pop();
            }
        } else {
            runs.push(Run::new(x, h));
        }
    }
    Ok(Skyline::from_canonical(board_width, runs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// A visible wall: the staircase passes through `(x, height)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub x: i64,
    pub height: i64,
}

/// The walls of a skyline fragment visible from far left or far right.
///
/// A left step sits at the start of a run that is a strict prefix maximum, so
/// both `x` and `height` increase. A right step sits at the end of a run that is
/// a strict suffix maximum; `x` increases while `height` decreases.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Staircase {
    pub side: Side,
    pub steps: Vec<Step>,
}

impl Staircase {
    pub fn left_of(runs: &[Run]) -> Self {
        let mut steps: Vec<Step> = Vec::new();
        for r in runs {
            if steps.last().is_none_or(|s| r.height > s.height) {
                steps.push(Step {
                    x: r.start,
                    height: r.height,
                });
            }
        }
        Staircase {
            side: Side::Left,
            steps,
        }
    }

    pub fn right_of(runs: &[Run], end: i64) -> Self {
        let mut steps: Vec<Step> = Vec::new();
        for i in (0..runs.len()).rev() {
            if steps.last().is_none_or(|s| runs[i].height > s.height) {
                steps.push(Step {
                    x: run_end(runs, i, end),
                    height: runs[i].height,
                });
            }
        }
        steps.reverse();
        Staircase {
            side: Side::Right,
            steps,
        }
    }

    /// Left staircase: x of the leftmost point strictly above `h`, together
    /// with the highest column strictly left of it (`None` when there is none).
    pub(crate) fn leftmost_above(&self, h: i64) -> Option<(i64, Option<i64>)> {
        debug_assert_eq!(self.side, Side::Left);
        let i = self.steps.partition_point(|s| s.height <= h);
        let step = self.steps.get(i)?;
        Some((step.x, i.checked_sub(1).map(|j| self.steps[j].height)))
    }

    /// Right staircase: x just past the rightmost point strictly above `h`,
    /// together with the highest column right of it.
    pub(crate) fn rightmost_above(&self, h: i64) -> Option<(i64, Option<i64>)> {
        debug_assert_eq!(self.side, Side::Right);
        let i = self.steps.partition_point(|s| s.height > h);
        let step = self.steps.get(i.checked_sub(1)?)?;
        Some((step.x, self.steps.get(i).map(|s| s.height)))
    }

    /// Left staircase: highest column among those starting before `x`.
    pub(crate) fn prefix_max_before(&self, x: i64) -> Option<i64> {
        debug_assert_eq!(self.side, Side::Left);
        let i = self.steps.partition_point(|s| s.x < x);
        i.checked_sub(1).map(|j| self.steps[j].height)
    }

    /// Right staircase: highest column among those ending after `x`.
    pub(crate) fn suffix_max_after(&self, x: i64) -> Option<i64> {
        debug_assert_eq!(self.side, Side::Right);
        let i = self.steps.partition_point(|s| s.x <= x);
        self.steps.get(i).map(|s| s.height)
    }
}
