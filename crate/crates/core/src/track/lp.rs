//! Exact simplex over the rationals with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Minimises `c·x` subject to `a x = b`, `x ≥ 0`. Returns `None` when
/// infeasible. `c` must be bounded below on the feasible set (e.g. `c ≥ 0`).
pub(crate) fn minimize(a: &[Vec<BigRational>], b: &[BigRational], c: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = c.len();
    // tableau columns: n originals, m artificials, rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row: Vec<BigRational> = Vec::with_capacity(width);
        for j in 0..n {
            row.push(if flip { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for k in 0..m {
            row.push(if k == i { BigRational::one() } else { BigRational::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut phase1 = vec![BigRational::zero(); n + m];
    for v in phase1.iter_mut().skip(n) {
        *v = BigRational::one();
    }
    run(&mut t, &mut basis, &phase1, n + m);
    let infeas: BigRational = basis
        .iter()
        .enumerate()
        .filter(|(_, &j)| j >= n)
        .map(|(i, _)| t[i][width - 1].clone())
        .sum();
    if !infeas.is_zero() {
        return None;
    }
    // drive artificials out of the basis where possible
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t[i][j].is_zero()) {
                pivot(&mut t, &mut basis, i, j);
            }
        }
    }
    let mut cost = c.to_vec();
    cost.extend(std::iter::repeat_n(BigRational::zero(), m));
    run(&mut t, &mut basis, &cost, n);
    let mut x = vec![BigRational::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<BigRational>], basis: &mut [usize], r: usize, col: usize) {
    let p = t[r][col].clone();
    for v in t[r].iter_mut() {
        *v = &*v / &p;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[col].is_zero() {
            continue;
        }
        let f = row[col].clone();
        for (v, pv) in row.iter_mut().zip(prow.iter()) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
    basis[r] = col;
}

/// Simplex iterations on columns `0..allowed`.
fn run(t: &mut [Vec<BigRational>], basis: &mut [usize], cost: &[BigRational], allowed: usize) {
    let m = t.len();
    let rhs = t.first().map_or(0, |r| r.len() - 1);
    loop {
        // reduced cost c_j − c_B B⁻¹ A_j
        let entering = (0..allowed).find(|&j| {
            if basis.contains(&j) {
                return false;
            }
            let mut r = cost[j].clone();
            for i in 0..m {
                if !t[i][j].is_zero() {
                    r -= &cost[basis[i]] * &t[i][j];
                }
            }
            r.is_negative()
        });
        let Some(col) = entering else { return };
        let mut best: Option<(BigRational, usize, usize)> = None;
        for i in 0..m {
            if t[i][col].is_positive() {
                let ratio = &t[i][rhs] / &t[i][col];
                let better = match &best {
                    None => true,
                    Some((br, _, bj)) => ratio < *br || (ratio == *br && basis[i] < *bj),
                };
                if better {
                    best = Some((ratio, i, basis[i]));
                }
            }
        }
        let Some((_, r, _)) = best else { return };
        pivot(t, basis, r, col);
    }
}

/// A basis of `{x : a x = 0}`.
pub(crate) fn nullspace(a: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = &*v / &pv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(prow.iter()) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); n];
            x[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -m[i][f].clone();
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn small_programs() {
        // x + y = 2, x - y = 0
        let a = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
        let x = minimize(&a, &[int(2), int(0)], &[int(1), int(1)]).unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
        // x + y = -1 has no nonnegative solution
        assert!(minimize(&[vec![int(1), int(1)]], &[int(-1)], &[int(0), int(0)]).is_none());
        // min x subject to x + y + z = 3, y - z = 1
        let a = vec![vec![int(1), int(1), int(1)], vec![int(0), int(1), int(-1)]];
        let x = minimize(&a, &[int(3), int(1)], &[int(1), int(0), int(0)]).unwrap();
        assert_eq!(x[0], int(0));
        assert_eq!(&x[1] - &x[2], int(1));
    }

    #[test]
    fn nullspace_of_a_line() {
        let a = vec![vec![int(1), int(-1), int(-1)]];
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for x in ns {
            assert_eq!(&x[0] - &x[1] - &x[2], int(0));
        }
    }
}
