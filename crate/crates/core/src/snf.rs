//! Integer matrix normal forms: Smith normal form with column transforms,
//! Hermite normal form for canonical lattice bases, and integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IMat = Vec<Vec<BigInt>>;

pub fn imat_from_i64(rows: &[Vec<i64>]) -> IMat {
    rows.iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect()
}

pub fn imat_identity(n: usize) -> IMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub struct Snf {
    /// Diagonalized matrix U*A*V (U not tracked).
    pub d: IMat,
    pub rank: usize,
    /// Elementary divisors, positive, each dividing the next.
    pub divisors: Vec<BigInt>,
    /// Accumulated column transform.
    pub v: IMat,
    /// Inverse of the column transform.
    pub v_inv: IMat,
}

/// Smith normal form tracking only the column transform and its inverse,
/// which is all the lattice computations need.
pub fn smith_normal_form(a: &IMat) -> Snf {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut d = a.clone();
    let mut v = imat_identity(cols);
    let mut v_inv = imat_identity(cols);

    let swap_cols = |d: &mut IMat, v: &mut IMat, v_inv: &mut IMat, i: usize, j: usize| {
        for row in d.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        v_inv.swap(i, j);
    };
    let add_col = |d: &mut IMat, v: &mut IMat, v_inv: &mut IMat, dst: usize, src: usize, k: &BigInt| {
        // col_dst += k * col_src; inverse acts on v_inv rows: row_src -= k * row_dst
        for row in d.iter_mut() {
            let t = &row[src] * k;
            row[dst] += t;
        }
        for row in v.iter_mut() {
            let t = &row[src] * k;
            row[dst] += t;
        }
        let sub: Vec<BigInt> = v_inv[dst].iter().map(|x| x * k).collect();
        for (x, s) in v_inv[src].iter_mut().zip(sub) {
            *x -= s;
        }
    };
    let swap_rows = |d: &mut IMat, i: usize, j: usize| d.swap(i, j);
    let add_row = |d: &mut IMat, dst: usize, src: usize, k: &BigInt| {
        let add: Vec<BigInt> = d[src].iter().map(|x| x * k).collect();
        for (x, s) in d[dst].iter_mut().zip(add) {
            *x += s;
        }
    };

    let mut t = 0;
    while t < rows.min(cols) {
        // find a nonzero pivot in the remaining block
        let mut pivot = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero() {
                    match pivot {
                        None => pivot = Some((i, j)),
                        Some((pi, pj)) => {
                            if d[i][j].abs() < d[pi][pj].abs() {
                                pivot = Some((i, j));
                            }
                        }
                    }
                }
            }
        }
        let (pi, pj) = match pivot {
            Some(p) => p,
            None => break,
        };
        swap_rows(&mut d, t, pi);
        if pj != t {
            swap_cols(&mut d, &mut v, &mut v_inv, t, pj);
        }
        // clear row and column t by Euclidean steps
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !d[i][t].is_zero() {
                    let q = -(&d[i][t]).div_floor(&d[t][t]);
                    add_row(&mut d, i, t, &q);
                    if !d[i][t].is_zero() {
                        swap_rows(&mut d, t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !d[t][j].is_zero() {
                    let q = -(&d[t][j]).div_floor(&d[t][t]);
                    add_col(&mut d, &mut v, &mut v_inv, j, t, &q);
                    if !d[t][j].is_zero() {
                        swap_cols(&mut d, &mut v, &mut v_inv, t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        t += 1;
    }
    let rank = t;
    // normalize signs
    for i in 0..rank {
        if d[i][i].is_negative() {
            for row in d.iter_mut() {
                row[i] = -row[i].clone();
            }
            for row in v.iter_mut() {
                row[i] = -row[i].clone();
            }
            for x in v_inv[i].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    // enforce d_i | d_{i+1}
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..rank.saturating_sub(1) {
            let (a, b) = (d[i][i].clone(), d[i + 1][i + 1].clone());
            if (&b % &a).is_zero() {
                continue;
            }
            let g = a.gcd(&b);
            let l = &a / &g * &b;
            // standard 2x2 repair: diag(a, b) ~ diag(gcd, lcm)
            d[i][i] = g.clone();
            d[i + 1][i + 1] = l;
            // the transforms mix the two columns; recompute them from scratch
            // is avoided by composing explicit 2x2 unimodular ops
            let (x, y) = bezout(&a, &b);
            // columns i, i+1 of V: [ci, cj] -> [ci*x + cj*y', ...]
            // We apply: col_i' = x*col_i + y*col_j ; col_j' = -(b/g)*col_i + (a/g)*col_j
            let bg = &b / &g;
            let ag = &a / &g;
            apply_two_col(&mut v, i, i + 1, &x, &y, &-&bg, &ag);
            // inverse transform on v_inv rows: inverse of [[x, -b/g], [y, a/g]]
            // is [[a/g, b/g], [-y, x]]
            apply_two_row(&mut v_inv, i, i + 1, &ag, &bg, &-&y, &x);
            changed = true;
        }
    }
    let divisors = (0..rank).map(|i| d[i][i].clone()).collect();
    Snf {
        d,
        rank,
        divisors,
        v,
        v_inv,
    }
}

fn bezout(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.x, e.y)
}

/// cols (i, j) <- (p*col_i + q*col_j, r*col_i + s*col_j)
fn apply_two_col(m: &mut IMat, i: usize, j: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
    for row in m.iter_mut() {
        let ci = row[i].clone();
        let cj = row[j].clone();
        row[i] = p * &ci + q * &cj;
        row[j] = r * &ci + s * &cj;
    }
}

/// rows (i, j) <- (p*row_i + q*row_j, r*row_i + s*row_j)
fn apply_two_row(m: &mut IMat, i: usize, j: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
    let ri = m[i].clone();
    let rj = m[j].clone();
    m[i] = ri.iter().zip(&rj).map(|(a, b)| p * a + q * b).collect();
    m[j] = ri.iter().zip(&rj).map(|(a, b)| r * a + s * b).collect();
}

/// Basis of { m : A m = 0 } as rows, from the zero columns of U A V.
pub fn integer_kernel(a: &IMat) -> Vec<Vec<BigInt>> {
    let cols = a.first().map_or(0, |r| r.len());
    if a.is_empty() || cols == 0 {
        return imat_identity(cols);
    }
    let snf = smith_normal_form(a);
    (snf.rank..cols)
        .map(|j| snf.v.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Row-style Hermite normal form: canonical basis of the row lattice with
/// positive pivots and reduced entries above each pivot. Zero rows dropped.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut pivot_row = 0;
    for col in 0..cols {
        // gcd-reduce the column below pivot_row into one row
        loop {
            let mut idx: Vec<usize> = (pivot_row..m.len())
                .filter(|&i| !m[i][col].is_zero())
                .collect();
            if idx.len() <= 1 {
                break;
            }
            idx.sort_by_key(|&i| m[i][col].abs());
            let (a, b) = (idx[0], idx[1]);
            let q = (&m[b][col]).div_floor(&m[a][col]).clone();
            let sub: Vec<BigInt> = m[a].iter().map(|x| x * &q).collect();
            for (x, s) in m[b].iter_mut().zip(sub) {
                *x -= s;
            }
        }
        if let Some(i) = (pivot_row..m.len()).find(|&i| !m[i][col].is_zero()) {
            m.swap(pivot_row, i);
            if m[pivot_row][col].is_negative() {
                for x in m[pivot_row].iter_mut() {
                    *x = -x.clone();
                }
            }
            // reduce entries above the pivot into [0, pivot)
            let pivot = m[pivot_row][col].clone();
            for r in 0..pivot_row {
                let q = (&m[r][col]).div_floor(&pivot);
                if !q.is_zero() {
                    let sub: Vec<BigInt> = m[pivot_row].iter().map(|x| x * &q).collect();
                    for (x, s) in m[r].iter_mut().zip(sub) {
                        *x -= s;
                    }
                }
            }
            pivot_row += 1;
        }
    }
    m.truncate(pivot_row);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mul(a: &IMat, b: &IMat) -> IMat {
        let n = a.len();
        let k = b.len();
        let m = b[0].len();
        (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| (0..k).map(|t| &a[i][t] * &b[t][j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn snf_diagonal_and_transforms_consistent() {
        let a = imat_from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let snf = smith_normal_form(&a);
        assert_eq!(
            snf.divisors,
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]
        );
        // V * V^{-1} = I
        assert_eq!(mul(&snf.v, &snf.v_inv), imat_identity(3));
        // columns of V past the rank span the kernel (here: none)
        assert_eq!(snf.rank, 3);
    }

    #[test]
    fn snf_divisibility_chain() {
        let a = imat_from_i64(&[vec![2, 0], vec![0, 3]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.divisors, vec![BigInt::one(), BigInt::from(6)]);
        assert_eq!(mul(&snf.v, &snf.v_inv), imat_identity(2));
    }

    #[test]
    fn kernel_of_sum_constraint() {
        // m1 + m2 = 0 in Z^3
        let a = imat_from_i64(&[vec![1, 1, 0]]);
        let k = integer_kernel(&a);
        let hnf = hermite_normal_form(&k);
        assert_eq!(
            hnf,
            imat_from_i64(&[vec![1, -1, 0], vec![0, 0, 1]])
        );
    }

    #[test]
    fn kernel_of_empty_constraints_is_everything() {
        let k = integer_kernel(&vec![vec![BigInt::zero(); 2]]);
        assert_eq!(hermite_normal_form(&k), imat_identity(2));
    }

    #[test]
    fn hnf_is_canonical_under_row_mixes() {
        let b1 = imat_from_i64(&[vec![1, -1, 0], vec![0, 0, 1]]);
        let b2 = imat_from_i64(&[vec![-1, 1, 1], vec![0, 0, 1], vec![1, -1, 0]]);
        assert_eq!(hermite_normal_form(&b1), hermite_normal_form(&b2));
    }
}
