//! Exact rational linear programming.
//!
//! Two-phase primal simplex with Bland's rule over arbitrary-precision
//! rationals. Every LP in this crate is tiny (tens of rows and columns), so
//! the dense tableau is the right tool: no scaling, no tolerances, no cycling.
//!
//! Solves  max c.x  subject to  A x <= b  with x free.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{QMat, QVec, Rat};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: QVec, value: Rat },
    Infeasible,
    Unbounded,
}

const MAX_PIVOTS: usize = 20_000;

struct Tableau {
    ncols: usize,
    rows: Vec<QVec>,
    rhs: QVec,
    basis: Vec<usize>,
    obj: QVec,
    objval: Rat,
    banned: Vec<bool>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, e: usize) {
        let p = self.rows[r][e].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][e].is_zero() {
                continue;
            }
            let f = self.rows[i][e].clone();
            for j in 0..self.ncols {
                let v = &self.rows[r][j] * &f;
                self.rows[i][j] -= v;
            }
            let v = &self.rhs[r] * &f;
            self.rhs[i] -= v;
        }
        if !self.obj[e].is_zero() {
            let f = self.obj[e].clone();
            for j in 0..self.ncols {
                let v = &self.rows[r][j] * &f;
                self.obj[j] -= v;
            }
            let v = &self.rhs[r] * &f;
            self.objval += v;
        }
        self.basis[r] = e;
    }

    /// Runs simplex to optimality on the current objective.
    /// Returns false when the objective is unbounded above.
    fn optimize(&mut self) -> Result<bool> {
        for _ in 0..MAX_PIVOTS {
            // Bland's rule: smallest improving column index.
            let entering = (0..self.ncols)
                .find(|&j| !self.banned[j] && self.obj[j].is_positive());
            let Some(e) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][e].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            self.pivot(r, e);
        }
        Err(Error::Internal("simplex pivot limit reached".into()))
    }
}

/// Maximizes c.x over { x : a x <= b } with x unrestricted in sign.
pub fn maximize(c: &[Rat], a: &QMat, b: &[Rat]) -> Result<LpOutcome> {
    let (m, n) = (a.rows(), a.cols());
    if c.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: c.len(),
            what: "lp objective",
        });
    }
    if b.len() != m {
        return Err(Error::Dimension {
            expected: m,
            got: b.len(),
            what: "lp right-hand side",
        });
    }
    if m == 0 {
        return Ok(if c.iter().all(Rat::is_zero) {
            LpOutcome::Optimal {
                x: vec![Rat::zero(); n],
                value: Rat::zero(),
            }
        } else {
            LpOutcome::Unbounded
        });
    }

    // Standard form over nonnegative variables: x = u - w, one slack per row.
    // Rows with negative rhs are flipped, which turns their slack coefficient
    // negative and requires an artificial variable for the initial basis.
    let flipped: Vec<bool> = b.iter().map(|bi| bi.is_negative()).collect();
    let art_rows: Vec<usize> = (0..m).filter(|&i| flipped[i]).collect();
    let nart = art_rows.len();
    let ncols = 2 * n + m + nart;

    let mut t = Tableau {
        ncols,
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: vec![0; m],
        obj: vec![Rat::zero(); ncols],
        objval: Rat::zero(),
        banned: vec![false; ncols],
    };
    let mut art_seen = 0;
    for i in 0..m {
        let sgn = if flipped[i] { -Rat::one() } else { Rat::one() };
        let mut row = vec![Rat::zero(); ncols];
        for j in 0..n {
            row[j] = a.at(i, j) * &sgn;
            row[n + j] = -a.at(i, j) * &sgn;
        }
        row[2 * n + i] = sgn.clone();
        if flipped[i] {
            row[2 * n + m + art_seen] = Rat::one();
            t.basis[i] = 2 * n + m + art_seen;
            art_seen += 1;
        } else {
            t.basis[i] = 2 * n + i;
        }
        t.rhs.push(b[i].clone() * &sgn);
        t.rows.push(row);
    }

    if nart > 0 {
        // Phase 1: maximize -(sum of artificials), expressed over nonbasics.
        for &i in &art_rows {
            for j in 0..ncols {
                let v = t.rows[i][j].clone();
                t.obj[j] += v;
            }
            let v = t.rhs[i].clone();
            t.objval -= v;
        }
        for k in 0..nart {
            t.obj[2 * n + m + k] = Rat::zero();
        }
        if !t.optimize()? {
            return Err(Error::Internal("phase-1 objective unbounded".into()));
        }
        if t.objval.is_negative() {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive leftover degenerate artificials out of the basis.
        for i in 0..m {
            if t.basis[i] < 2 * n + m {
                continue;
            }
            let e = (0..2 * n + m).find(|&j| !t.rows[i][j].is_zero());
            if let Some(e) = e {
                t.pivot(i, e);
            }
            // A fully zero row is redundant; its artificial stays basic at 0
            // and the banned flags below keep it from ever moving.
        }
        for k in 0..nart {
            t.banned[2 * n + m + k] = true;
        }
    }

    // Phase 2: reduce the true objective against the current basis.
    t.obj = vec![Rat::zero(); ncols];
    t.objval = Rat::zero();
    for j in 0..n {
        t.obj[j] = c[j].clone();
        t.obj[n + j] = -c[j].clone();
    }
    for i in 0..m {
        let bj = t.basis[i];
        if t.obj[bj].is_zero() {
            continue;
        }
        let f = t.obj[bj].clone();
        for j in 0..ncols {
            let v = &t.rows[i][j] * &f;
            t.obj[j] -= v;
        }
        let v = &t.rhs[i] * &f;
        t.objval += v;
    }
    if !t.optimize()? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut vals = vec![Rat::zero(); ncols];
    for i in 0..m {
        vals[t.basis[i]] = t.rhs[i].clone();
    }
    let x: QVec = (0..n).map(|j| &vals[j] - &vals[n + j]).collect();
    Ok(LpOutcome::Optimal {
        x,
        value: t.objval,
    })
}

/// Minimizes c.x over { x : a x <= b }.
pub fn minimize(c: &[Rat], a: &QMat, b: &[Rat]) -> Result<LpOutcome> {
    let negc: QVec = c.iter().map(|v| -v).collect();
    Ok(match maximize(&negc, a, b)? {
        LpOutcome::Optimal { x, value } => LpOutcome::Optimal { x, value: -value },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qvec_int, rat, rat_int};

    fn box2() -> (QMat, QVec) {
        // [-1,2] x [-1,3]
        let a = QMat::from_rows(vec![
            qvec_int(&[1, 0]),
            qvec_int(&[-1, 0]),
            qvec_int(&[0, 1]),
            qvec_int(&[0, -1]),
        ])
        .unwrap();
        let b = vec![rat_int(2), rat_int(1), rat_int(3), rat_int(1)];
        (a, b)
    }

    #[test]
    fn maximizes_over_a_box() {
        let (a, b) = box2();
        match maximize(&qvec_int(&[1, 1]), &a, &b).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, rat_int(5));
                assert_eq!(x, qvec_int(&[2, 3]));
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn minimizes_over_a_box() {
        let (a, b) = box2();
        match minimize(&qvec_int(&[1, -2]), &a, &b).unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat_int(-7)),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn detects_infeasible() {
        // x <= -1 and -x <= 0, i.e. x <= -1 and x >= 0.
        let a = QMat::from_rows(vec![qvec_int(&[1]), qvec_int(&[-1])]).unwrap();
        let b = vec![rat_int(-1), rat_int(0)];
        assert_eq!(maximize(&qvec_int(&[1]), &a, &b).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn detects_unbounded() {
        let a = QMat::from_rows(vec![qvec_int(&[-1, 0])]).unwrap();
        let b = vec![rat_int(0)];
        assert_eq!(
            maximize(&qvec_int(&[1, 0]), &a, &b).unwrap(),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn feasible_region_not_containing_origin() {
        // 1 <= x <= 3, maximize -x: optimum at x = 1.
        let a = QMat::from_rows(vec![qvec_int(&[1]), qvec_int(&[-1])]).unwrap();
        let b = vec![rat_int(3), rat_int(-1)];
        match maximize(&qvec_int(&[-1]), &a, &b).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![rat_int(1)]);
                assert_eq!(value, rat_int(-1));
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_equality_like_rows() {
        // x1 + x2 <= 1, -(x1 + x2) <= -1 pins the sum to exactly 1.
        let a = QMat::from_rows(vec![
            qvec_int(&[1, 1]),
            qvec_int(&[-1, -1]),
            qvec_int(&[1, 0]),
            qvec_int(&[-1, 0]),
            qvec_int(&[0, 1]),
            qvec_int(&[0, -1]),
        ])
        .unwrap();
        let b = vec![
            rat_int(1),
            rat_int(-1),
            rat_int(1),
            rat_int(0),
            rat_int(1),
            rat_int(0),
        ];
        match maximize(&qvec_int(&[2, 1]), &a, &b).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, rat_int(2));
                assert_eq!(x, qvec_int(&[1, 0]));
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn rational_coefficients() {
        // x <= 7/3, maximize x/2.
        let a = QMat::from_rows(vec![vec![rat(1, 1)]]).unwrap();
        let b = vec![rat(7, 3)];
        match maximize(&[rat(1, 2)], &a, &b).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![rat(7, 3)]);
                assert_eq!(value, rat(7, 6));
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }
}
