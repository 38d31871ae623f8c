//! Dense tableau simplex for `max c·x  s.t.  A x <= b, x >= 0` with `b >= 0`,
//! using Bland's smallest-index rule so degenerate problems terminate.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-12;
const MAX_PIVOTS: usize = 200_000;

pub(crate) struct LpSolution {
    pub value: f64,
    pub x: Vec<f64>,
}

pub(crate) fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpSolution> {
    let n = c.len();
    let m = b.len();
    debug_assert!(a.len() == m && a.iter().all(|r| r.len() == n));
    if b.iter().any(|&v| v < 0.0) {
        return Err(Error::Solver("right-hand side must be nonnegative".into()));
    }
    let width = n + m + 1;
    let rhs = n + m;
    // rows 0..m constraints, row m objective (holding -c)
    let mut t = vec![vec![0.0; width]; m + 1];
    for r in 0..m {
        t[r][..n].copy_from_slice(&a[r]);
        t[r][n + r] = 1.0;
        t[r][rhs] = b[r];
    }
    for j in 0..n {
        t[m][j] = -c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    for _ in 0..MAX_PIVOTS {
        let Some(enter) = (0..n + m).find(|&j| t[m][j] < -PIVOT_TOL) else {
            let mut x = vec![0.0; n];
            for (r, &v) in basis.iter().enumerate() {
                if v < n {
                    x[v] = t[r][rhs];
                }
            }
            return Ok(LpSolution { value: t[m][rhs], x });
        };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..m {
            if t[r][enter] > PIVOT_TOL {
                let ratio = t[r][rhs] / t[r][enter];
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < lratio - PIVOT_TOL || (ratio <= lratio + PIVOT_TOL && basis[r] < basis[lr]) {
                            Some((r, ratio))
                        } else {
                            Some((lr, lratio))
                        }
                    }
                };
            }
        }
        let Some((pr, _)) = leave else {
            return Err(Error::Solver("linear program is unbounded".into()));
        };
        let pivot = t[pr][enter];
        t[pr].iter_mut().for_each(|v| *v /= pivot);
        let prow = t[pr].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r != pr {
                let f = row[enter];
                if f != 0.0 {
                    row.iter_mut().zip(&prow).for_each(|(v, p)| *v -= f * p);
                }
            }
        }
        basis[pr] = enter;
    }
    Err(Error::Solver("simplex pivot limit reached".into()))
}
