//! Brute-force reference board: one explicit height per column.
//!
//! Everything here is `O(board_width)` per operation and correct by inspection.
//! The equivalence suites compare the chunked structure against it.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::geometry::{Run, Skyline};
use crate::height_index::Slot;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColumnBoard {
    heights: Vec<i64>,
}

impl ColumnBoard {
    pub fn new(board_width: usize) -> Self {
        ColumnBoard {
            heights: vec![0; board_width],
        }
    }

    pub fn from_heights(heights: Vec<i64>) -> Self {
        ColumnBoard { heights }
    }

    pub fn from_skyline(sky: &Skyline) -> Self {
        let mut heights = Vec::with_capacity(sky.board_width() as usize);
        for (i, r) in sky.runs().iter().enumerate() {
            let len = (sky.run_end(i) - r.start) as usize;
            heights.extend(std::iter::repeat_n(r.height, len));
        }
        ColumnBoard { heights }
    }

    /// Run-length encode back into a canonical skyline.
    pub fn to_skyline(&self) -> Skyline {
        let mut runs: Vec<Run> = Vec::new();
        for (c, &h) in self.heights.iter().enumerate() {
            if runs.last().is_none_or(|r| r.height != h) {
                runs.push(Run::new(c as i64, h));
            }
        }
        Skyline::from_canonical(self.heights.len() as i64, runs)
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    pub fn width(&self) -> i64 {
        self.heights.len() as i64
    }

    fn footprint(&self, width: i64, x: i64) -> Result<std::ops::Range<usize>> {
        let w = self.width();
        if width < 1 {
            return Err(Error::EmptyRect { width, height: 1 });
        }
        if x < 0 || x.checked_add(width).is_none_or(|e| e > w) {
            return Err(Error::OutOfBoard {
                x,
                width,
                board_width: w,
            });
        }
        Ok(x as usize..(x + width) as usize)
    }

    pub fn landing(&self, width: i64, x: i64) -> Result<i64> {
        let cols = self.footprint(width, x)?;
        Ok(self.heights[cols].iter().copied().max().unwrap())
    }

    /// Drop a rectangle and return where it lands.
    pub fn drop_rect(&mut self, width: i64, height: i64, x: i64) -> Result<i64> {
        let cols = self.footprint(width, x)?;
        let landing = self.heights[cols.clone()].iter().copied().max().unwrap();
        let top = landing.checked_add(height).ok_or(Error::HeightOverflow)?;
        self.heights[cols].fill(top);
        Ok(landing)
    }

    /// Leftmost position minimising the landing height of a `width`-wide
    /// rectangle, via a sliding-window maximum.
    pub fn best(&self, width: i64) -> Result<(i64, i64)> {
        let w = self.width();
        if width < 1 || width > w {
            return Err(Error::WidthExceedsBoard {
                width,
                board_width: w,
            });
        }
        let width = width as usize;
        let mut window: VecDeque<usize> = VecDeque::new();
        let mut best: Option<(i64, i64)> = None;
        for (c, &h) in self.heights.iter().enumerate() {
            while window.back().is_some_and(|&b| self.heights[b] <= h) {
                window.pop_back();
            }
            window.push_back(c);
            if window[0] + width <= c {
                window.pop_front();
            }
            if c + 1 >= width {
                let landing = self.heights[window[0]];
                if best.is_none_or(|(_, l)| landing < l) {
                    best = Some(((c + 1 - width) as i64, landing));
                }
            }
        }
        Ok(best.unwrap())
    }

    /// Leftmost widest stretch of columns all at or below `h`.
    pub fn widest_at_or_below(&self, h: i64) -> Slot {
        let mut best = Slot::NONE;
        let mut c = 0;
        let n = self.heights.len();
        while c < n {
            if self.heights[c] > h {
                c += 1;
                continue;
            }
            let start = c;
            let mut floor = 0;
            while c < n && self.heights[c] <= h {
                floor = floor.max(self.heights[c]);
                c += 1;
            }
            let slot = Slot {
                x: start as i64,
                width: (c - start) as i64,
                floor,
            };
            if slot.better_than(&best) {
                best = slot;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ColumnBoard {
        ColumnBoard::from_heights(vec![4, 4, 4, 0, 0, 2, 2, 2])
    }

    #[test]
    fn drop_on_flat() {
        let mut b = ColumnBoard::new(5);
        assert_eq!(b.drop_rect(3, 2, 1).unwrap(), 0);
        assert_eq!(b.heights(), &[0, 2, 2, 2, 0]);
    }

    #[test]
    fn drop_into_gap() {
        assert_eq!(sample().drop_rect(2, 1, 3).unwrap(), 0);
        assert!(sample().drop_rect(2, 1, 7).is_err());
    }

    #[test]
    fn best_positions() {
        assert_eq!(ColumnBoard::new(6).best(6).unwrap(), (0, 0));
        assert_eq!(sample().best(2).unwrap(), (3, 0));
        assert_eq!(sample().best(3).unwrap(), (3, 2));
        assert_eq!(sample().best(8).unwrap(), (0, 4));
        assert!(sample().best(9).is_err());
    }

    #[test]
    fn widest_examples() {
        assert_eq!(ColumnBoard::new(6).widest_at_or_below(0), Slot { x: 0, width: 6, floor: 0 });
        assert_eq!(sample().widest_at_or_below(2), Slot { x: 3, width: 5, floor: 2 });
        assert_eq!(sample().widest_at_or_below(1), Slot { x: 3, width: 2, floor: 0 });
        assert_eq!(ColumnBoard::from_heights(vec![5, 5]).widest_at_or_below(4), Slot::NONE);
    }

    #[test]
    fn skyline_round_trip() {
        let b = sample();
        let s = b.to_skyline();
        assert_eq!(s.runs().len(), 3);
        assert_eq!(ColumnBoard::from_skyline(&s), b);
    }
}
