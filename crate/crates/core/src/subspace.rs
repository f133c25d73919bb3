//! Enumeration of the r-dimensional subspaces of GF(q)^k, each exactly once,
//! through their reduced row echelon generator matrices.

use crate::field::Field;

/// Gaussian binomial `[k choose r]_q`, saturating at `u128::MAX`.
pub fn gaussian_binomial(k: usize, r: usize, q: u32) -> u128 {
    if r > k {
        return 0;
    }
    let q = u128::from(q);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..r {
        let a = q.checked_pow((k - i) as u32).and_then(|x| num.checked_mul(x - 1));
        let b = q.checked_pow((i + 1) as u32).and_then(|x| den.checked_mul(x - 1));
        match (a, b) {
            (Some(a), Some(b)) => {
                num = a;
                den = b;
            }
            _ => return u128::MAX,
        }
    }
    num / den
}

/// Calls `visit` with the rows of every r x k RREF matrix of rank r.
///
/// Pivot sets are visited in lexicographic order; within a pivot set the
/// free entries count up in base q, first free entry fastest.
pub fn for_each_rref<F: Field>(field: &F, k: usize, r: usize, mut visit: impl FnMut(&[Vec<F::Elem>])) {
    if r > k {
        return;
    }
    let elems = field.elements();
    let q = elems.len();
    let mut pivots: Vec<usize> = (0..r).collect();
    loop {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (p + 1..k).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        let mut rows = vec![vec![field.zero(); k]; r];
        for (i, &p) in pivots.iter().enumerate() {
            rows[i][p] = field.one();
        }
        let mut digits = vec![0usize; free.len()];
        loop {
            visit(&rows);
            // increment the base-q counter over the free positions
            let mut pos = 0;
            while pos < free.len() {
                digits[pos] += 1;
                let (i, c) = free[pos];
                if digits[pos] == q {
                    digits[pos] = 0;
                    rows[i][c] = elems[0];
                    pos += 1;
                } else {
                    rows[i][c] = elems[digits[pos]];
                    break;
                }
            }
            if pos == free.len() {
                break;
            }
        }
        // next r-combination of 0..k
        let Some(i) = (0..r).rev().find(|&i| pivots[i] < k - r + i) else {
            return;
        };
        pivots[i] += 1;
        for j in i + 1..r {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
}
