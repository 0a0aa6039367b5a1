//! Dense simplex for the small covering programs built by the bound verifier.

use crate::num::Real;

pub(crate) struct Covering<T> {
    pub x: Vec<T>,
    pub value: T,
}

/// Solves `min c.x  s.t.  A x >= 1, x >= 0` for `c >= 0` and non-negative
/// rows `A`, by running the simplex method on the packing dual
/// `max sum y  s.t.  A^T y <= c, y >= 0` from the all-slack basis with
/// Bland's rule. Returns `None` when the dual is unbounded (the covering
/// program is infeasible).
pub(crate) fn solve_covering<T: Real>(cost: &[T], rows: &[Vec<T>]) -> Option<Covering<T>> {
    let n = cost.len();
    let m = rows.len();
    let width = m + n;
    let eps = T::lit(1e-12);

    // tableau rows are the dual constraints, one per primal variable
    let mut tab: Vec<Vec<T>> = (0..n)
        .map(|k| {
            let mut row = vec![T::zero(); width + 1];
            for (j, cut) in rows.iter().enumerate() {
                row[j] = cut[k];
            }
            row[m + k] = T::one();
            row[width] = cost[k];
            row
        })
        .collect();
    // reduced profits; the objective row holds `-profit`
    let mut obj = vec![T::zero(); width + 1];
    for entry in obj.iter_mut().take(m) {
        *entry = -T::one();
    }
    let mut basis: Vec<usize> = (m..width).collect();

    loop {
        let Some(enter) = (0..width).find(|&j| obj[j] < -eps) else { break };
        let mut leave: Option<usize> = None;
        for r in 0..n {
            if tab[r][enter] > eps {
                let ratio = tab[r][width] / tab[r][enter];
                leave = match leave {
                    None => Some(r),
                    Some(l) => {
                        let current = tab[l][width] / tab[l][enter];
                        if ratio < current || (ratio == current && basis[r] < basis[l]) {
                            Some(r)
                        } else {
                            Some(l)
                        }
                    }
                };
            }
        }
        let leave = leave?;
        let pivot = tab[leave][enter];
        for v in tab[leave].iter_mut() {
            *v = *v / pivot;
        }
        let pivot_row = tab[leave].clone();
        for (r, row) in tab.iter_mut().enumerate() {
            if r != leave && row[enter] != T::zero() {
                let f = row[enter];
                for (v, &p) in row.iter_mut().zip(&pivot_row) {
                    *v = *v - f * p;
                }
            }
        }
        let f = obj[enter];
        for (v, &p) in obj.iter_mut().zip(&pivot_row) {
            *v = *v - f * p;
        }
        basis[leave] = enter;
    }

    let x = (0..n).map(|k| obj[m + k].max(T::zero())).collect();
    Some(Covering { x, value: obj[width] })
}
