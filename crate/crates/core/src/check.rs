//! Randomised equivalence checking against the column oracle, with greedy
//! shrinking of failing scripts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::Skyline;
use crate::oracle::ColumnBoard;
use crate::rdds::{GreedyMove, Rdds};
use crate::script::Op;

/// Anything that plays the rectangle dropping game.
pub trait DropBoard {
    fn query(&self, width: i64, height: i64) -> Result<GreedyMove>;
    fn update(&mut self, width: i64, height: i64, x: i64) -> Result<i64>;
    fn snapshot(&self) -> Skyline;
}

impl DropBoard for Rdds {
    fn query(&self, width: i64, height: i64) -> Result<GreedyMove> {
        Rdds::query(self, width, height)
    }

    fn update(&mut self, width: i64, height: i64, x: i64) -> Result<i64> {
        Rdds::update(self, width, height, x)
    }

    fn snapshot(&self) -> Skyline {
        Rdds::snapshot(self)
    }
}

/// First disagreement between a board and the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    /// Index of the offending op, or the script length for a final-state
    /// mismatch.
    pub step: usize,
    pub detail: String,
}

/// Random script on a board of `width` columns. Half of the drops go where the
/// oracle's greedy answer says, the rest anywhere.
pub fn random_script(seed: u64, n_ops: usize, width: i64) -> Vec<Op> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut board = ColumnBoard::new(width as usize);
    let wide = (width / 8).max(1);
    let mut ops = Vec::with_capacity(n_ops);
    for _ in 0..n_ops {
        let w = match rng.random_range(0..10) {
            0 => rng.random_range(1..=width),
            1..=4 => rng.random_range(1..=wide),
            _ => rng.random_range(1..=width.min(8)),
        };
        let h = rng.random_range(1..=8);
        let op = match rng.random_range(0..4) {
            0 => Op::Query { width: w, height: h },
            1 => Op::Update {
                width: w,
                height: h,
                x: board.best(w).unwrap().0,
            },
            _ => Op::Update {
                width: w,
                height: h,
                x: rng.random_range(0..=width - w),
            },
        };
        if let Op::Update { width, height, x } = op {
            board.drop_rect(width, height, x).unwrap();
        }
        ops.push(op);
    }
    ops
}

/// Replay `ops` on `subject` and on the oracle side by side.
pub fn check_script<B: DropBoard>(mut subject: B, width: i64, ops: &[Op]) -> std::result::Result<(), Mismatch> {
    let mut board = ColumnBoard::new(width as usize);
    let mut max = 0;
    for (step, op) in ops.iter().enumerate() {
        let fail = |detail: String| Err(Mismatch { step, detail });
        match *op {
            Op::Query { width, height } => {
                let got = match subject.query(width, height) {
                    Ok(m) => m,
                    Err(e) => return fail(format!("{op}: {e}")),
                };
                let (x, landing) = board.best(width).unwrap();
                let want = GreedyMove {
                    x,
                    landing,
                    resulting_max: max.max(landing + height),
                };
                if got != want {
                    return fail(format!("{op}: got {got:?}, oracle says {want:?}"));
                }
            }
            Op::Update { width, height, x } => {
                let got = match subject.update(width, height, x) {
                    Ok(v) => v,
                    Err(e) => return fail(format!("{op}: {e}")),
                };
                let landing = board.drop_rect(width, height, x).unwrap();
                max = max.max(landing + height);
                if got != max {
                    return fail(format!("{op}: resulting max {got}, oracle says {max}"));
                }
            }
        }
    }
    if subject.snapshot() != board.to_skyline() {
        return Err(Mismatch {
            step: ops.len(),
            detail: "final skylines differ".into(),
        });
    }
    Ok(())
}

/// Shrink a failing script: truncate after the first failure, then drop
/// single ops while the script keeps failing.
pub fn minimize<B: DropBoard>(make: impl Fn() -> B, width: i64, ops: &[Op]) -> (Vec<Op>, Mismatch) {
    let mut cur = ops.to_vec();
    let mut failure = match check_script(make(), width, &cur) {
        Ok(()) => panic!("minimize called on a passing script"),
        Err(m) => m,
    };
    cur.truncate((failure.step + 1).min(cur.len()));
    let mut i = 0;
    while i < cur.len() {
        let mut candidate = cur.clone();
        candidate.remove(i);
        match check_script(make(), width, &candidate) {
            Err(m) => {
                cur = candidate;
                failure = m;
            }
            Ok(()) => i += 1,
        }
    }
    (cur, failure)
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub ops: usize,
    /// Minimised failing script and its mismatch.
    pub counterexample: Option<(Vec<Op>, Mismatch)>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Generate a random script and check `make()` against the oracle on it.
pub fn run_check<B: DropBoard>(make: impl Fn() -> B, seed: u64, n_ops: usize, width: i64) -> CheckReport {
    let ops = random_script(seed, n_ops, width);
    let counterexample = match check_script(make(), width, &ops) {
        Ok(()) => None,
        Err(_) => Some(minimize(make, width, &ops)),
    };
    CheckReport {
        ops: ops.len(),
        counterexample,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Forgets every third drop.
    struct Lossy {
        inner: Rdds,
        drops: usize,
    }

    impl DropBoard for Lossy {
        fn query(&self, w: i64, h: i64) -> Result<GreedyMove> {
            self.inner.query(w, h)
        }
        fn update(&mut self, w: i64, h: i64, x: i64) -> Result<i64> {
            self.drops += 1;
            if self.drops.is_multiple_of(3) {
                return Ok(self.inner.global_max());
            }
            self.inner.update(w, h, x)
        }
        fn snapshot(&self) -> Skyline {
            self.inner.snapshot()
        }
    }

    #[test]
    fn empty_script_passes() {
        assert!(run_check(|| Rdds::new(32).unwrap(), 1, 0, 32).passed());
    }

    #[test]
    fn random_scripts_pass() {
        for seed in 0..5 {
            let report = run_check(|| Rdds::new(64).unwrap(), seed, 300, 64);
            assert!(report.passed(), "{:?}", report.counterexample);
        }
    }

    #[test]
    fn corrupted_board_yields_small_counterexample() {
        let make = || Lossy {
            inner: Rdds::new(16).unwrap(),
            drops: 0,
        };
        let report = run_check(make, 9, 200, 16);
        let (ops, mismatch) = report.counterexample.expect("lossy board must fail");
        assert!(ops.len() <= 4, "not minimal: {ops:?}");
        assert!(check_script(make(), 16, &ops).is_err());
        assert!(!mismatch.detail.is_empty());
    }

    #[test]
    fn scripts_are_deterministic() {
        assert_eq!(random_script(5, 100, 40), random_script(5, 100, 40));
    }
}
