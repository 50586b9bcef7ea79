//! Integer linear systems `A x = b` via column-style Hermite reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// All integer solutions: `particular + Z-span(kernel)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSolution {
    pub particular: Vec<BigInt>,
    pub kernel: Vec<Vec<BigInt>>,
}

fn col_axpy(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let t = &row[src] * q;
        row[dst] -= t;
    }
}

fn col_swap(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn col_neg(m: &mut [Vec<BigInt>], c: usize) {
    for row in m.iter_mut() {
        row[c] = -&row[c];
    }
}

/// Solve `a x = b` over the integers. `a` has `b.len()` rows and
/// `cols` columns. Returns `None` when there is no integer solution.
pub fn solve_integer_system(a: &[Vec<BigInt>], b: &[BigInt], cols: usize) -> Option<IntSolution> {
    let rows = a.len();
    debug_assert_eq!(rows, b.len());
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; rows];
    let mut next = 0usize;
    for r in 0..rows {
        if next == cols {
            break;
        }
        loop {
            let best = (next..cols)
                .filter(|&c| !h[r][c].is_zero())
                .min_by(|&x, &y| h[r][x].abs().cmp(&h[r][y].abs()));
            let Some(best) = best else { break };
            col_swap(&mut h, next, best);
            col_swap(&mut u, next, best);
            let p = h[r][next].clone();
            let mut done = true;
            for c in next + 1..cols {
                if h[r][c].is_zero() {
                    continue;
                }
                let q = h[r][c].div_floor(&p);
                col_axpy(&mut h, c, next, &q);
                col_axpy(&mut u, c, next, &q);
                if !h[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                if h[r][next].is_negative() {
                    col_neg(&mut h, next);
                    col_neg(&mut u, next);
                }
                pivot_of_row[r] = Some(next);
                next += 1;
                break;
            }
        }
    }
    let rank = next;
    let mut y = vec![BigInt::zero(); cols];
    for r in 0..rows {
        let limit = pivot_of_row[r].unwrap_or(rank);
        let mut s = b[r].clone();
        for c in 0..limit {
            s -= &h[r][c] * &y[c];
        }
        match pivot_of_row[r] {
            Some(pc) => {
                let (q, rem) = s.div_rem(&h[r][pc]);
                if !rem.is_zero() {
                    return None;
                }
                y[pc] = q;
            }
            None => {
                if !s.is_zero() {
                    return None;
                }
            }
        }
    }
    let particular = (0..cols)
        .map(|i| (0..cols).map(|j| &u[i][j] * &y[j]).sum())
        .collect();
    let kernel = (rank..cols)
        .map(|j| (0..cols).map(|i| u[i][j].clone()).collect())
        .collect();
    Some(IntSolution { particular, kernel })
}
