//! Reduced row echelon form over a field, plus a packed `F_2` variant.
//!
//! Both variants pick pivots in column order and set free variables to
//! zero, so a consistent system has one canonical solution and a singular
//! one has one canonical kernel vector (lowest free column set to 1). The
//! two variants return identical vectors on `F_2` input.

use super::field::Field;

/// Returns the pivot columns; `m` is left in reduced row echelon form over
/// its first `ncols` columns (extra columns ride along).
fn rref<F: Field>(f: &F, m: &mut [Vec<F::E>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(i) = (r..m.len()).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, i);
        let inv = f.inv(&m[r][c]);
        for x in m[r].iter_mut() {
            *x = f.mul(x, &inv);
        }
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !f.is_zero(p) {
                    *x = f.sub(x, &f.mul(&factor, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `M y = b` where `m` is `[M | b]` with `ncols` unknowns.
pub(crate) fn solve<F: Field>(f: &F, mut m: Vec<Vec<F::E>>, ncols: usize) -> Option<Vec<F::E>> {
    let pivots = rref(f, &mut m, ncols);
    if m[pivots.len()..].iter().any(|row| !f.is_zero(&row[ncols])) {
        return None;
    }
    let mut y = vec![f.zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        y[c] = m[i][ncols].clone();
    }
    Some(y)
}

/// Canonical nonzero vector of `ker M`, if the kernel is nontrivial.
pub(crate) fn kernel_vector<F: Field>(f: &F, mut m: Vec<Vec<F::E>>, ncols: usize) -> Option<Vec<F::E>> {
    let pivots = rref(f, &mut m, ncols);
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut y = vec![f.zero(); ncols];
    y[free] = f.one();
    for (i, &c) in pivots.iter().enumerate() {
        y[c] = f.neg(&m[i][free]);
    }
    Some(y)
}

/// Bit rows over `F_2`; bit `c` of a row is the entry in column `c`.
pub(crate) type BitRow = Vec<u64>;

pub(crate) fn bit(row: &BitRow, c: usize) -> bool {
    row[c / 64] >> (c % 64) & 1 == 1
}

pub(crate) fn flip(row: &mut BitRow, c: usize) {
    row[c / 64] ^= 1 << (c % 64);
}

fn rref_bits(m: &mut [BitRow], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(i) = (r..m.len()).find(|&i| bit(&m[i], c)) else {
            continue;
        };
        m.swap(r, i);
        let pivot_row = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k != r && bit(row, c) {
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x ^= p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// `F_2` version of [`solve`]; column `ncols` holds the right-hand side.
pub(crate) fn solve_bits(mut m: Vec<BitRow>, ncols: usize) -> Option<Vec<bool>> {
    let pivots = rref_bits(&mut m, ncols);
    if m[pivots.len()..].iter().any(|row| bit(row, ncols)) {
        return None;
    }
    let mut y = vec![false; ncols];
    for (i, &c) in pivots.iter().enumerate() {
        y[c] = bit(&m[i], ncols);
    }
    Some(y)
}

/// `F_2` version of [`kernel_vector`].
pub(crate) fn kernel_vector_bits(mut m: Vec<BitRow>, ncols: usize) -> Option<Vec<bool>> {
    let pivots = rref_bits(&mut m, ncols);
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut y = vec![false; ncols];
    y[free] = true;
    for (i, &c) in pivots.iter().enumerate() {
        y[c] = bit(&m[i], free);
    }
    Some(y)
}
