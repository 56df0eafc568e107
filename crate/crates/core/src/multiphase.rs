//! Multiphase set-disjointness answered with a single greedy query.
//!
//! Given a family `F_1..F_k` of subsets of `{1..m}`, phase 1 builds a board of
//! width `m(k+1)` split into `m` regions of width `k` by unit walls of height
//! `k+1`. Region `j` gets a funnel: for each `i` with `j` not in `F_i`, a
//! rectangle of height `k+1-i` is dropped flush against the region's left side
//! (after the previous funnel pieces) with its right border at offset `i`. Phase 2
//! seals every region whose element is not in `J` with a `(k+1) x 1` lid. Phase 3
//! asks where a `(k+1-i) x (k+2)` rectangle should go: it can sink to height
//! `k-i` or lower exactly when some `j` lies in both `J` and `F_i`, and the walls
//! and lids never reach above `k+2 <= 2k+2-i`, so the resulting maximum decides
//! the answer.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rdds::{GreedyMove, Rdds};

/// One rectangle drop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Placement {
    pub width: i64,
    pub height: i64,
    pub x: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiphaseInstance {
    pub m: usize,
    pub k: usize,
    /// `family[i - 1]` is `F_i`.
    pub family: Vec<Vec<usize>>,
    pub query_set: Vec<usize>,
    /// 1-based index into the family.
    pub index: usize,
}

pub fn validate_family(m: usize, k: usize, family: &[Vec<usize>]) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidInstance(m));
    if m == 0 || k == 0 {
        return bad("m and k must be at least 1".into());
    }
    if family.len() != k {
        return bad(format!("expected {k} sets, got {}", family.len()));
    }
    let mut seen = vec![false; m + 1];
    for (i, set) in family.iter().enumerate() {
        if set.is_empty() {
            return bad(format!("F_{} is empty", i + 1));
        }
        for &e in set {
            if e == 0 || e > m {
                return bad(format!("F_{} contains {e}, outside 1..={m}", i + 1));
            }
            seen[e] = true;
        }
    }
    if let Some(e) = (1..=m).find(|&e| !seen[e]) {
        return bad(format!("element {e} appears in no set"));
    }
    Ok(())
}

impl MultiphaseInstance {
    pub fn validate(&self) -> Result<()> {
        validate_family(self.m, self.k, &self.family)?;
        if let Some(&e) = self.query_set.iter().find(|&&e| e == 0 || e > self.m) {
            return Err(Error::InvalidInstance(format!("J contains {e}, outside 1..={}", self.m)));
        }
        if self.index == 0 || self.index > self.k {
            return Err(Error::InvalidInstance(format!(
                "i = {} outside 1..={}",
                self.index, self.k
            )));
        }
        Ok(())
    }
}

/// Phase 1: board width and the wall and funnel drops.
pub fn build_phase1(m: usize, k: usize, family: &[Vec<usize>]) -> Result<(i64, Vec<Placement>)> {
    validate_family(m, k, family)?;
    let span = k as i64 + 1;
    let mut ops = Vec::with_capacity(m * (k + 1));
    for j in 1..=m as i64 {
        ops.push(Placement {
            width: 1,
            height: span,
            x: j * span - 1,
        });
    }
    for j in 1..=m {
        let region = (j as i64 - 1) * span;
        let mut frontier = region;
        for (i, set) in (1..=k as i64).zip(family) {
            if set.contains(&j) {
                continue;
            }
            // Earlier pieces are taller, so sliding left stops at the frontier.
            let right = region + i;
            ops.push(Placement {
                width: right - frontier,
                height: span - i,
                x: frontier,
            });
            frontier = right;
        }
    }
    Ok((m as i64 * span, ops))
}

/// Phase 2: lids over the regions whose element is not in `J`.
pub fn build_phase2(inst: &MultiphaseInstance) -> Vec<Placement> {
    let span = inst.k as i64 + 1;
    (1..=inst.m)
        .filter(|j| !inst.query_set.contains(j))
        .map(|j| Placement {
            width: span,
            height: 1,
            x: (j as i64 - 1) * span,
        })
        .collect()
}

pub fn apply_placements(rdds: &mut Rdds, ops: &[Placement]) -> Result<()> {
    for p in ops {
        rdds.update(p.width, p.height, p.x)?;
    }
    Ok(())
}

/// The phase 3 greedy query.
pub fn phase3_move(rdds: &Rdds, inst: &MultiphaseInstance) -> Result<GreedyMove> {
    let k = inst.k as i64;
    rdds.query(k + 1 - inst.index as i64, k + 2)
}

/// Threshold on the resulting maximum that separates the two answers.
pub fn phase3_threshold(inst: &MultiphaseInstance) -> i64 {
    2 * inst.k as i64 + 2 - inst.index as i64
}

/// Decide whether `J` meets `F_i` from a board that went through phases 1 and 2.
pub fn decide_phase3(rdds: &Rdds, inst: &MultiphaseInstance) -> Result<bool> {
    Ok(phase3_move(rdds, inst)?.resulting_max <= phase3_threshold(inst))
}

/// Ground truth by set intersection.
pub fn multiphase_direct(inst: &MultiphaseInstance) -> bool {
    inst.family[inst.index - 1]
        .iter()
        .any(|e| inst.query_set.contains(e))
}

/// All three phases on a fresh structure. Returns the board and the phase 3
/// move.
pub fn run_reduction(inst: &MultiphaseInstance) -> Result<(Rdds, GreedyMove)> {
    inst.validate()?;
    let (width, phase1) = build_phase1(inst.m, inst.k, &inst.family)?;
    let mut rdds = Rdds::new(width)?;
    apply_placements(&mut rdds, &phase1)?;
    apply_placements(&mut rdds, &build_phase2(inst))?;
    let mv = phase3_move(&rdds, inst)?;
    Ok((rdds, mv))
}

impl fmt::Display for MultiphaseInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &[usize]| s.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(f, "{} {}", self.m, self.k)?;
        for set in &self.family {
            writeln!(f, "{}", join(set))?;
        }
        writeln!(f, "J: {}", join(&self.query_set))?;
        writeln!(f, "i: {}", self.index)
    }
}

impl FromStr for MultiphaseInstance {
    type Err = Error;

    /// `m k`, then `k` lines each listing one set, then `J: ...` and `i: ...`.
    /// Blank lines and `#` comments are skipped.
    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let mut last_line = 0;
        let mut next = |what: &str| -> Result<(usize, &str)> {
            let got = lines.next().ok_or(Error::Parse {
                line: last_line + 1,
                message: format!("missing {what}"),
            })?;
            last_line = got.0;
            Ok(got)
        };
        let ints = |line: usize, s: &str| -> Result<Vec<usize>> {
            s.split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Parse {
                        line,
                        message: format!("expected a non-negative integer, found {t:?}"),
                    })
                })
                .collect()
        };

        let (line, header) = next("`m k` header")?;
        let (m, k) = match ints(line, header)?.as_slice() {
            &[m, k] => (m, k),
            _ => {
                return Err(Error::Parse {
                    line,
                    message: "expected `m k`".into(),
                })
            }
        };
        let mut family = Vec::with_capacity(k);
        for i in 1..=k {
            let (line, body) = next(&format!("set F_{i}"))?;
            let mut set = ints(line, body)?;
            set.sort_unstable();
            set.dedup();
            family.push(set);
        }
        let mut labelled = |label: &str| -> Result<(usize, Vec<usize>)> {
            let (line, body) = next(&format!("`{label}:` line"))?;
            let rest = body.strip_prefix(label).and_then(|r| r.strip_prefix(':'));
            match rest {
                Some(r) => Ok((line, ints(line, r)?)),
                None => Err(Error::Parse {
                    line,
                    message: format!("expected `{label}: ...`"),
                }),
            }
        };
        let (_, mut query_set) = labelled("J")?;
        query_set.sort_unstable();
        query_set.dedup();
        let (line, index) = labelled("i")?;
        let index = match index.as_slice() {
            &[i] => i,
            _ => {
                return Err(Error::Parse {
                    line,
                    message: "expected a single index".into(),
                })
            }
        };
        let inst = MultiphaseInstance {
            m,
            k,
            family,
            query_set,
            index,
        };
        inst.validate()?;
        Ok(inst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ColumnBoard;

    fn small(query_set: Vec<usize>, index: usize) -> MultiphaseInstance {
        MultiphaseInstance {
            m: 2,
            k: 2,
            family: vec![vec![1], vec![1, 2]],
            query_set,
            index,
        }
    }

    #[test]
    fn phase1_small() {
        let (w, ops) = build_phase1(2, 2, &[vec![1], vec![1, 2]]).unwrap();
        assert_eq!(w, 6);
        assert_eq!(
            ops,
            vec![
                Placement { width: 1, height: 3, x: 2 },
                Placement { width: 1, height: 3, x: 5 },
                Placement { width: 1, height: 2, x: 3 },
            ]
        );
        // Replaying on the column oracle gives the expected board.
        let mut b = ColumnBoard::new(6);
        for p in &ops {
            assert_eq!(b.drop_rect(p.width, p.height, p.x).unwrap(), 0);
        }
        assert_eq!(b.heights(), &[0, 0, 3, 2, 0, 3]);
    }

    #[test]
    fn phase1_all_covering_family_has_only_walls() {
        let full: Vec<Vec<usize>> = vec![vec![1, 2, 3]; 4];
        let (w, ops) = build_phase1(3, 4, &full).unwrap();
        assert_eq!(w, 15);
        assert_eq!(ops.len(), 3);
    }

    #[test]
    fn funnel_pieces_slide_to_frontier() {
        // Element 1 missing from F_2 and F_3 only: the F_2 piece spans offsets
        // [0, 2) and the F_3 piece [2, 3).
        let fam = vec![vec![1], vec![2], vec![2]];
        let (_, ops) = build_phase1(2, 3, &fam).unwrap();
        let region1: Vec<_> = ops[2..].iter().filter(|p| p.x < 4).copied().collect();
        assert_eq!(
            region1,
            vec![
                Placement { width: 2, height: 2, x: 0 },
                Placement { width: 1, height: 1, x: 2 },
            ]
        );
    }

    #[test]
    fn phase2_lids() {
        assert!(build_phase2(&small(vec![1, 2], 1)).is_empty());
        assert_eq!(
            build_phase2(&small(vec![2], 1)),
            vec![Placement { width: 3, height: 1, x: 0 }]
        );
        let mut b = ColumnBoard::new(6);
        for p in build_phase1(2, 2, &small(vec![2], 1).family).unwrap().1 {
            b.drop_rect(p.width, p.height, p.x).unwrap();
        }
        assert_eq!(b.drop_rect(3, 1, 0).unwrap(), 3);
    }

    #[test]
    fn small_instance_decisions() {
        let inst = small(vec![2], 1);
        let (rdds, mv) = run_reduction(&inst).unwrap();
        assert_eq!((mv.x, mv.landing, mv.resulting_max), (3, 2, 6));
        assert!(!decide_phase3(&rdds, &inst).unwrap());
        assert!(!multiphase_direct(&inst));

        let inst = small(vec![2], 2);
        let (rdds, mv) = run_reduction(&inst).unwrap();
        assert_eq!((mv.x, mv.landing, mv.resulting_max), (4, 0, 4));
        assert!(decide_phase3(&rdds, &inst).unwrap());
        assert!(multiphase_direct(&inst));
        assert_eq!(rdds.query_by_height(0).width, 1);
        assert_eq!(rdds.query_by_height(0).x, 4);
    }

    #[test]
    fn empty_query_set_is_always_false() {
        for i in 1..=2 {
            let inst = small(vec![], i);
            let (rdds, _) = run_reduction(&inst).unwrap();
            assert!(!decide_phase3(&rdds, &inst).unwrap());
            assert!(!multiphase_direct(&inst));
        }
    }

    #[test]
    fn rejects_invalid_families() {
        assert!(build_phase1(2, 2, &[vec![1], vec![1]]).is_err());
        assert!(build_phase1(2, 2, &[vec![], vec![1, 2]]).is_err());
        assert!(build_phase1(2, 1, &[vec![1, 3]]).is_err());
        assert!(build_phase1(2, 2, &[vec![1, 2]]).is_err());
    }

    #[test]
    fn parse_and_print() {
        let text = "2 2\n1\n1 2\nJ: 2\ni: 2\n";
        let inst: MultiphaseInstance = text.parse().unwrap();
        assert_eq!(inst, small(vec![2], 2));
        assert_eq!(inst.to_string(), text);
        let empty: MultiphaseInstance = "2 2\n1\n1 2\nJ:\ni: 1\n".parse().unwrap();
        assert!(empty.query_set.is_empty());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("2\n".parse::<MultiphaseInstance>(), Err(Error::Parse { line: 1, .. })));
        assert!(matches!("2 2\n1\n".parse::<MultiphaseInstance>(), Err(Error::Parse { .. })));
        assert!(matches!(
            "2 2\n1\n1 2\nK: 2\ni: 1\n".parse::<MultiphaseInstance>(),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            "2 2\n1\n1 2\nJ: 2\ni: 3\n".parse::<MultiphaseInstance>(),
            Err(Error::InvalidInstance(_))
        ));
    }
}
