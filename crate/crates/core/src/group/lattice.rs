use num_integer::Integer;

/// A subgroup of `Z^n` stored by its row-style Hermite normal form: rows are
/// in echelon form, each pivot is positive, and entries above a pivot are
/// reduced into `[0, pivot)`. Two generating sets span the same lattice iff
/// their bases are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn new(dim: usize, generators: &[Vec<i64>]) -> Self {
        let mut rows: Vec<Vec<i64>> = generators
            .iter()
            .filter(|g| g.iter().any(|&x| x != 0))
            .cloned()
            .collect();
        let mut basis: Vec<Vec<i64>> = Vec::new();
        for col in 0..dim {
            // gcd-combine every remaining row into one pivot row for this column
            let mut pivot: Option<Vec<i64>> = None;
            let mut rest = Vec::new();
            for row in rows.drain(..) {
                if row[col] == 0 {
                    rest.push(row);
                    continue;
                }
                match pivot.take() {
                    None => pivot = Some(row),
                    Some(p) => {
                        let (g, s, t) = ext_gcd(p[col], row[col]);
                        let (pa, ra) = (p[col] / g, row[col] / g);
                        let combined: Vec<i64> =
                            p.iter().zip(&row).map(|(x, y)| s * x + t * y).collect();
                        let cleared: Vec<i64> =
                            p.iter().zip(&row).map(|(x, y)| ra * x - pa * y).collect();
                        pivot = Some(combined);
                        if cleared.iter().any(|&x| x != 0) {
                            rest.push(cleared);
                        }
                    }
                }
            }
            rows = rest;
            if let Some(mut p) = pivot {
                if p[col] < 0 {
                    p.iter_mut().for_each(|x| *x = -*x);
                }
                basis.push(p);
            }
        }
        let mut lattice = Lattice { dim, basis };
        lattice.reduce_above();
        lattice
    }

    fn pivot_col(row: &[i64]) -> usize {
        row.iter().position(|&x| x != 0).expect("basis rows are nonzero")
    }

    fn reduce_above(&mut self) {
        for i in 0..self.basis.len() {
            let col = Self::pivot_col(&self.basis[i]);
            let p = self.basis[i][col];
            for k in 0..i {
                let q = Integer::div_floor(&self.basis[k][col], &p);
                if q != 0 {
                    let row = self.basis[i].clone();
                    for (x, y) in self.basis[k].iter_mut().zip(&row) {
                        *x -= q * y;
                    }
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Index in `Z^n` when the lattice has full rank.
    pub fn index(&self) -> Option<u64> {
        if self.rank() != self.dim {
            return None;
        }
        Some(
            self.basis
                .iter()
                .enumerate()
                .map(|(i, row)| row[i].unsigned_abs())
                .product(),
        )
    }

    /// Canonical coset representative of `v + L`: pivot coordinates reduced
    /// into `[0, pivot)`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut out = v.to_vec();
        for row in &self.basis {
            let col = Self::pivot_col(row);
            let q = Integer::div_floor(&out[col], &row[col]);
            if q != 0 {
                for (x, y) in out.iter_mut().zip(row) {
                    *x -= q * y;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_lattice_index() {
        let l = Lattice::new(2, &[vec![2, 0], vec![0, 3]]);
        assert_eq!(l.rank(), 2);
        assert_eq!(l.index(), Some(6));
        assert!(l.contains(&[4, -3]));
        assert!(!l.contains(&[1, 0]));
    }

    #[test]
    fn canonical_basis_is_generator_independent() {
        let a = Lattice::new(2, &[vec![1, 1]]);
        let b = Lattice::new(2, &[vec![-2, -2], vec![3, 3], vec![0, 0]]);
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[vec![1, 1]]);
        let c = Lattice::new(3, &[vec![4, 6, 0], vec![6, 9, 1], vec![2, 3, 5]]);
        let d = Lattice::new(3, &[vec![0, 0, 2], vec![4, 6, 4], vec![2, 3, -1]]);
        assert_eq!(c, d);
    }

    #[test]
    fn reduction_picks_one_representative_per_coset() {
        let l = Lattice::new(2, &[vec![2, 1], vec![0, 3]]);
        assert_eq!(l.index(), Some(6));
        let mut reps = std::collections::HashSet::new();
        for i in -6..6 {
            for j in -6..6 {
                let r = l.reduce(&[i, j]);
                let diff = [i - r[0], j - r[1]];
                assert!(l.contains(&diff));
                reps.insert(r);
            }
        }
        assert_eq!(reps.len(), 6);
    }
}
