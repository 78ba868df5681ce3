//! Exact feasibility of `G λ = b, λ ≥ 0` by phase-one simplex over the
//! rationals with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `columns[j]` is the `j`-th column of `G`; all columns have `b.len()` rows.
pub(crate) fn nonnegative_solution_exists(columns: &[Vec<BigRational>], b: &[BigRational]) -> bool {
    let m = b.len();
    let k = columns.len();
    if m == 0 {
        return true;
    }
    // tableau rows: [G | I | b], with rows flipped so b >= 0
    let width = k + m + 1;
    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            let flip = b[i].is_negative();
            let mut row = Vec::with_capacity(width);
            for col in columns {
                row.push(if flip { -&col[i] } else { col[i].clone() });
            }
            for a in 0..m {
                row.push(if a == i { BigRational::one() } else { BigRational::zero() });
            }
            row.push(b[i].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (k..k + m).collect();

    // objective: minimise the sum of artificials; reduced costs for
    // non-artificial columns are -(column sums)
    let mut cost: Vec<BigRational> = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..k {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }

    loop {
        // Bland: lowest index with negative reduced cost
        let Some(enter) = (0..k + m).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // unbounded cannot happen for phase one (objective bounded below by 0)
        let Some((r, _)) = leave else { break };
        let pivot = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v /= &pivot;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &f * p;
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for (v, p) in cost.iter_mut().zip(&pivot_row) {
                *v -= &f * p;
            }
        }
        basis[r] = enter;
    }
    // objective value is -cost[last]
    cost[width - 1].is_zero()
}
