//! Scaling benchmarks: per-op timings of the chunked structure and the column
//! oracle on generated boards, reported as CSV.

use std::fmt::Write as _;
use std::hint::black_box;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Zipf};

use crate::geometry::Rect;
use crate::multiphase::build_phase1;
use crate::oracle::ColumnBoard;
use crate::rdds::Rdds;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    /// Uniform widths in `1..=16`, uniform positions.
    Uniform,
    /// Phase-1 funnel boards from random set families.
    Funnel,
    /// Zipf-distributed widths.
    Zipf,
}

impl FromStr for Distribution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(Distribution::Uniform),
            "funnel" => Ok(Distribution::Funnel),
            "zipf" => Ok(Distribution::Zipf),
            other => Err(format!("unknown distribution {other:?} (uniform|funnel|zipf)")),
        }
    }
}

/// A generated board: its width and the rectangles resting on it.
#[derive(Debug, Clone)]
pub struct Workload {
    pub board_width: i64,
    pub rects: Vec<Rect>,
}

/// Roughly `n` independent rectangles on a board of width `Θ(n)`.
pub fn workload(n: usize, dist: Distribution, seed: u64) -> Workload {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match dist {
        Distribution::Uniform => {
            let w = n.max(16) as i64;
            drop_random(&mut rng, w, n, |r| r.random_range(1..=16))
        }
        Distribution::Zipf => {
            let w = n.max(16) as i64;
            let zipf = Zipf::new(w as f64, 1.2).unwrap();
            drop_random(&mut rng, w, n, move |r| zipf.sample(r) as i64)
        }
        Distribution::Funnel => {
            let side = ((n as f64 / 1.5).sqrt().ceil() as usize).max(1);
            let (m, k) = (side, side);
            let mut family: Vec<Vec<usize>> = (0..k)
                .map(|_| (1..=m).filter(|_| rng.random_bool(0.5)).collect())
                .collect();
            for (i, set) in family.iter_mut().enumerate() {
                if set.is_empty() {
                    set.push(1 + i % m);
                }
            }
            family[0].extend(1..=m);
            family[0].sort_unstable();
            family[0].dedup();
            let (board_width, ops) = build_phase1(m, k, &family).unwrap();
            let rects = ops
                .iter()
                .map(|p| Rect::new(p.x, 0, p.width, p.height))
                .collect();
            Workload { board_width, rects }
        }
    }
}

fn drop_random(rng: &mut ChaCha8Rng, w: i64, n: usize, mut width: impl FnMut(&mut ChaCha8Rng) -> i64) -> Workload {
    let mut board = ColumnBoard::new(w as usize);
    let mut rects = Vec::with_capacity(n);
    for _ in 0..n {
        let rw = width(rng).clamp(1, w);
        let rh = rng.random_range(1..=8);
        let x = rng.random_range(0..=w - rw);
        let y = board.drop_rect(rw, rh, x).unwrap();
        rects.push(Rect::new(x, y, rw, rh));
    }
    Workload { board_width: w, rects }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub op: &'static str,
    pub mean_ns: f64,
    pub p99_ns: f64,
    pub chunks: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub const HEADER: &'static str = "n,op,mean_ns,p99_ns,chunks";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(out, "{},{},{:.1},{:.1},{}", r.n, r.op, r.mean_ns, r.p99_ns, r.chunks).unwrap();
        }
        out
    }

    /// `(n, mean_ns)` points of one op kind.
    pub fn series(&self, op: &str) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.op == op)
            .map(|r| (r.n as f64, r.mean_ns))
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    pub seed: u64,
    pub warmup: usize,
    pub queries: usize,
    pub updates: usize,
    pub oracle_queries: usize,
    pub builds: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            seed: 1,
            warmup: 50,
            queries: 400,
            updates: 400,
            oracle_queries: 40,
            builds: 3,
        }
    }
}

fn summarize(n: usize, op: &'static str, mut samples: Vec<f64>, chunks: usize) -> BenchRow {
    samples.sort_unstable_by(f64::total_cmp);
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let p99 = samples[((samples.len() as f64 * 0.99).ceil() as usize).clamp(1, samples.len()) - 1];
    BenchRow {
        n,
        op,
        mean_ns: mean,
        p99_ns: p99,
        chunks,
    }
}

fn time_ns(f: impl FnOnce()) -> f64 {
    let t = Instant::now();
    f();
    t.elapsed().as_nanos() as f64
}

/// Time bulk build, greedy queries, drops and oracle queries at every size.
pub fn run_bench(sizes: &[usize], dist: Distribution, cfg: &BenchConfig) -> BenchReport {
    let mut report = BenchReport::default();
    for &n in sizes {
        let wl = workload(n, dist, cfg.seed ^ n as u64);
        let w = wl.board_width;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(n as u64));
        let piece = |rng: &mut ChaCha8Rng| (rng.random_range(1..=16.min(w)), rng.random_range(1..=8));

        let mut build = Vec::with_capacity(cfg.builds);
        let mut rdds = Rdds::bulk_build(&wl.rects, w).unwrap();
        for _ in 0..cfg.builds {
            build.push(time_ns(|| {
                rdds = black_box(Rdds::bulk_build(&wl.rects, w).unwrap());
            }));
        }
        let chunks = rdds.chunk_count();
        report.rows.push(summarize(n, "build", build, chunks));

        let mut queries = Vec::with_capacity(cfg.queries);
        for i in 0..cfg.warmup + cfg.queries {
            let (pw, ph) = piece(&mut rng);
            let t = time_ns(|| {
                black_box(rdds.query(pw, ph).unwrap());
            });
            if i >= cfg.warmup {
                queries.push(t);
            }
        }
        report.rows.push(summarize(n, "query", queries, chunks));

        let mut board = ColumnBoard::from_skyline(&rdds.snapshot());
        let mut oracle = Vec::with_capacity(cfg.oracle_queries);
        for i in 0..cfg.warmup.min(5) + cfg.oracle_queries {
            let (pw, _) = piece(&mut rng);
            let t = time_ns(|| {
                black_box(board.best(pw).unwrap());
            });
            if i >= cfg.warmup.min(5) {
                oracle.push(t);
            }
        }
        report.rows.push(summarize(n, "oracle_query", oracle, chunks));

        let mut updates = Vec::with_capacity(cfg.updates);
        for i in 0..cfg.warmup + cfg.updates {
            let (pw, ph) = piece(&mut rng);
            let x = rng.random_range(0..=w - pw);
            let t = time_ns(|| {
                black_box(rdds.update(pw, ph, x).unwrap());
            });
            board.drop_rect(pw, ph, x).unwrap();
            if i >= cfg.warmup {
                updates.push(t);
            }
        }
        report
            .rows
            .push(summarize(n, "update", updates, rdds.chunk_count()));
    }
    report
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
