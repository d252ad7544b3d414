use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use super::{Backend, GroupElement, GroupError, Lattice};

/// The closed set of subgroup descriptors with exact oracles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubgroupKind {
    Whole,
    Trivial,
    /// `<g>`.
    Cyclic(GroupElement),
    /// Sublattice of `Z^n`.
    Lattice(Lattice),
    /// Explicit finite subgroup of a finite backend.
    Finite(BTreeSet<GroupElement>),
    Center,
    /// `<a>` in the Klein-bottle group.
    KleinFiber,
    /// The rank-3 translation lattice `<x, y, z>` of Promislow's group.
    Translations,
}

/// A subgroup `H <= G` with a membership oracle and, where available, a
/// coset-representative oracle for left cosets `gH`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    backend: Backend,
    kind: SubgroupKind,
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SubgroupKind::Whole => write!(f, "whole"),
            SubgroupKind::Trivial => write!(f, "trivial"),
            SubgroupKind::Cyclic(g) => write!(f, "<{g}>"),
            SubgroupKind::Lattice(l) => {
                let rows: Vec<String> = l
                    .basis()
                    .iter()
                    .map(|r| {
                        let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                        format!("({})", cells.join(","))
                    })
                    .collect();
                write!(f, "lattice[{}]", rows.join(","))
            }
            SubgroupKind::Finite(s) => {
                let items: Vec<String> = s.iter().map(|g| g.to_string()).collect();
                write!(f, "{{{}}}", items.join(","))
            }
            SubgroupKind::Center => write!(f, "center"),
            SubgroupKind::KleinFiber => write!(f, "<a>"),
            SubgroupKind::Translations => write!(f, "translations"),
        }
    }
}

impl Subgroup {
    fn unsupported(kind: &str, backend: Backend) -> GroupError {
        GroupError::UnsupportedSubgroup { kind: kind.to_string(), backend }
    }

    pub fn whole(backend: Backend) -> Self {
        Subgroup { backend, kind: SubgroupKind::Whole }
    }

    pub fn trivial(backend: Backend) -> Self {
        Subgroup { backend, kind: SubgroupKind::Trivial }
    }

    pub fn center(backend: Backend) -> Self {
        Subgroup { backend, kind: SubgroupKind::Center }
    }

    /// `<g>`. Over `Z^n` this is stored as a rank-1 lattice.
    pub fn cyclic(g: GroupElement) -> Self {
        let backend = g.backend();
        match backend {
            Backend::Abelian { .. } => Self::lattice_unchecked(backend, &[g]),
            Backend::Cyclic { .. } | Backend::KleinFour => Self::finite_closure(backend, &[g]),
            _ => Subgroup { backend, kind: SubgroupKind::Cyclic(g) },
        }
    }

    fn lattice_unchecked(backend: Backend, gens: &[GroupElement]) -> Self {
        let Backend::Abelian { rank } = backend else { unreachable!() };
        let vecs: Vec<Vec<i64>> = gens.iter().map(|g| g.as_vector().unwrap()).collect();
        Subgroup { backend, kind: SubgroupKind::Lattice(Lattice::new(rank as usize, &vecs)) }
    }

    fn finite_closure(backend: Backend, gens: &[GroupElement]) -> Self {
        let mut set: BTreeSet<GroupElement> = BTreeSet::from([backend.identity()]);
        loop {
            let mut grew = false;
            let current: Vec<GroupElement> = set.iter().cloned().collect();
            for h in &current {
                for g in gens {
                    if set.insert(h.mul_unchecked(g)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        Subgroup { backend, kind: SubgroupKind::Finite(set) }
    }

    /// The subgroup generated by `gens`, when an exact oracle exists for it:
    /// lattices in `Z^n`, anything in a finite backend, and cyclic subgroups
    /// elsewhere.
    pub fn generated(backend: Backend, gens: &[GroupElement]) -> Result<Self, GroupError> {
        if let Some(g) = gens.iter().find(|g| g.backend() != backend) {
            return Err(GroupError::BackendMismatch(backend, g.backend()));
        }
        let nontrivial: Vec<GroupElement> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        match backend {
            Backend::Abelian { .. } => Ok(Self::lattice_unchecked(backend, &nontrivial)),
            Backend::Cyclic { .. } | Backend::KleinFour => Ok(Self::finite_closure(backend, &nontrivial)),
            _ => match nontrivial.as_slice() {
                [] => Ok(Self::trivial(backend)),
                [g] => Ok(Self::cyclic(g.clone())),
                _ => {
                    let first = &nontrivial[0];
                    // several powers of one element still give a cyclic group we can decide
                    if let Some(root) = common_cyclic_root(first, &nontrivial) {
                        Ok(Self::cyclic(root))
                    } else {
                        Err(Self::unsupported("finitely generated", backend))
                    }
                }
            },
        }
    }

    /// Sublattice of `Z^n` spanned by the given exponent vectors.
    pub fn lattice(backend: Backend, vectors: &[Vec<i64>]) -> Result<Self, GroupError> {
        match backend {
            Backend::Abelian { rank } if vectors.iter().all(|v| v.len() == rank as usize) => Ok(Subgroup {
                backend,
                kind: SubgroupKind::Lattice(Lattice::new(rank as usize, vectors)),
            }),
            _ => Err(Self::unsupported("lattice", backend)),
        }
    }

    pub fn klein_fiber() -> Self {
        Subgroup { backend: Backend::Klein, kind: SubgroupKind::KleinFiber }
    }

    pub fn promislow_translations() -> Self {
        Subgroup { backend: Backend::Promislow, kind: SubgroupKind::Translations }
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn kind(&self) -> &SubgroupKind {
        &self.kind
    }

    pub fn as_lattice(&self) -> Option<&Lattice> {
        match &self.kind {
            SubgroupKind::Lattice(l) => Some(l),
            _ => None,
        }
    }

    /// Exact membership test.
    pub fn contains(&self, g: &GroupElement) -> Result<bool, GroupError> {
        if g.backend() != self.backend {
            return Err(GroupError::BackendMismatch(self.backend, g.backend()));
        }
        let b = self.backend;
        Ok(match &self.kind {
            SubgroupKind::Whole => true,
            SubgroupKind::Trivial => g.is_identity(),
            SubgroupKind::Lattice(l) => l.contains(&g.as_vector().unwrap()),
            SubgroupKind::Finite(s) => s.contains(g),
            SubgroupKind::Cyclic(h) => cyclic_exponent(h, g).is_some(),
            SubgroupKind::Center => match b {
                Backend::Abelian { .. } | Backend::Cyclic { .. } | Backend::KleinFour => true,
                Backend::Free { rank: 1 } => true,
                Backend::Free { .. } | Backend::Promislow => g.is_identity(),
                Backend::Heisenberg => {
                    let [x, y, _] = g.heisenberg_coords().unwrap();
                    x == 0 && y == 0
                }
                Backend::Klein => {
                    let [m, n] = g.klein_coords().unwrap();
                    m == 0 && n.rem_euclid(2) == 0
                }
            },
            SubgroupKind::KleinFiber => g.klein_coords().unwrap()[1] == 0,
            SubgroupKind::Translations => g.affine_parts().unwrap().0 == [1, 1, 1],
        })
    }

    /// Whether the subgroup is known to be normal.
    pub fn is_normal(&self) -> bool {
        match &self.kind {
            SubgroupKind::Whole | SubgroupKind::Trivial | SubgroupKind::Center => true,
            SubgroupKind::KleinFiber | SubgroupKind::Translations => true,
            SubgroupKind::Lattice(_) | SubgroupKind::Finite(_) => true,
            SubgroupKind::Cyclic(h) => self.backend.is_abelian() || h.is_identity(),
        }
    }

    /// Canonical representative of the left coset `gH`: two elements get the
    /// same representative iff they differ by a member of `H` on the right.
    pub fn coset_representative(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        if g.backend() != self.backend {
            return Err(GroupError::BackendMismatch(self.backend, g.backend()));
        }
        let b = self.backend;
        match &self.kind {
            SubgroupKind::Whole => Ok(b.identity()),
            SubgroupKind::Trivial => Ok(g.clone()),
            SubgroupKind::Lattice(l) => Ok(b.vector(&l.reduce(&g.as_vector().unwrap())).unwrap()),
            SubgroupKind::Finite(s) => Ok(s.iter().map(|h| g.mul_unchecked(h)).min().unwrap()),
            SubgroupKind::Center => match b {
                Backend::Abelian { .. } | Backend::Cyclic { .. } | Backend::KleinFour => Ok(b.identity()),
                Backend::Free { rank: 1 } => Ok(b.identity()),
                Backend::Free { .. } | Backend::Promislow => Ok(g.clone()),
                Backend::Heisenberg => {
                    let [x, y, _] = g.heisenberg_coords().unwrap();
                    Ok(heisenberg(x, y, 0))
                }
                Backend::Klein => {
                    let [m, n] = g.klein_coords().unwrap();
                    Ok(klein(m, n.rem_euclid(2)))
                }
            },
            SubgroupKind::KleinFiber => Ok(klein(0, g.klein_coords().unwrap()[1])),
            SubgroupKind::Translations => {
                let (c, _) = g.promislow_coords().unwrap();
                let a = b.symbol('a').unwrap();
                let bb = b.symbol('b').unwrap();
                Ok(match c {
                    0 => b.identity(),
                    1 => a,
                    2 => bb,
                    _ => a.mul_unchecked(&bb),
                })
            }
            SubgroupKind::Cyclic(_) => Err(Self::unsupported("coset oracle for cyclic", b)),
        }
    }

    /// Coordinates of the coset `gH` in the quotient, when the quotient has a
    /// natural coordinate description: the `b`-exponent for `K/<a>`, the
    /// reduced vector for `Z^n/L`, the point-group index for `P/<x,y,z>`.
    pub fn quotient_coordinates(&self, g: &GroupElement) -> Result<Vec<i64>, GroupError> {
        let rep = self.coset_representative(g)?;
        Ok(match &self.kind {
            SubgroupKind::KleinFiber => vec![rep.klein_coords().unwrap()[1]],
            SubgroupKind::Translations => vec![rep.promislow_coords().unwrap().0 as i64],
            SubgroupKind::Center if self.backend == Backend::Heisenberg => {
                let [x, y, _] = rep.heisenberg_coords().unwrap();
                vec![x, y]
            }
            _ => rep.as_vector().unwrap_or_default(),
        })
    }
}

fn heisenberg(x: i64, y: i64, z: i64) -> GroupElement {
    let b = Backend::Heisenberg;
    b.symbol('x')
        .unwrap()
        .pow(x)
        .mul_unchecked(&b.symbol('y').unwrap().pow(y))
        .mul_unchecked(&b.symbol('z').unwrap().pow(z))
}

fn klein(m: i64, n: i64) -> GroupElement {
    let b = Backend::Klein;
    b.symbol('a').unwrap().pow(m).mul_unchecked(&b.symbol('b').unwrap().pow(n))
}

/// `k` with `h^k = g`, if any. The exponent is read off a coordinate that
/// grows linearly in `k`, then confirmed by recomputing `h^k`.
pub(crate) fn cyclic_exponent(h: &GroupElement, g: &GroupElement) -> Option<i64> {
    if h.is_identity() {
        return g.is_identity().then_some(0);
    }
    let solve = |num: i64, den: i64| -> Option<i64> {
        (den != 0 && num % den == 0).then(|| num / den)
    };
    let candidates: Vec<i64> = match h.backend() {
        Backend::Abelian { .. } => {
            let (hv, gv) = (h.as_vector()?, g.as_vector()?);
            let i = hv.iter().position(|&x| x != 0)?;
            solve(gv[i], hv[i]).into_iter().collect()
        }
        Backend::Cyclic { order } => {
            let (hv, gv) = (h.as_vector()?[0], g.as_vector()?[0]);
            (0..order as i64).filter(|k| (k * hv - gv).rem_euclid(order as i64) == 0).take(1).collect()
        }
        Backend::KleinFour => (0..2).collect(),
        Backend::Free { .. } => {
            // |h^k| >= |k| for h != e in a free group
            let n = g.free_word()?.len() as i64;
            (-n..=n).collect()
        }
        Backend::Heisenberg => {
            let [a, b, c] = h.heisenberg_coords()?;
            let [ga, gb, gc] = g.heisenberg_coords()?;
            if a != 0 {
                solve(ga, a).into_iter().collect()
            } else if b != 0 {
                solve(gb, b).into_iter().collect()
            } else {
                solve(gc, c).into_iter().collect()
            }
        }
        Backend::Klein => {
            let [m, n] = h.klein_coords()?;
            let [gm, gn] = g.klein_coords()?;
            if n != 0 {
                solve(gn, n).into_iter().collect()
            } else {
                solve(gm, m).into_iter().collect()
            }
        }
        Backend::Promislow => {
            // h^2 is a nonzero translation whose coordinates grow linearly
            let (_, t) = h.mul_unchecked(h).affine_parts()?;
            let i = t.iter().position(|&x| x != 0)?;
            let mut out = Vec::new();
            for (base, parity) in [(g.clone(), 0), (g.mul_unchecked(&h.inverse()), 1)] {
                let (s, bt) = base.affine_parts()?;
                if s == [1, 1, 1] {
                    if let Some(j) = solve(bt[i], t[i]) {
                        out.push(2 * j + parity);
                    }
                }
            }
            out
        }
    };
    candidates.into_iter().find(|&k| h.pow(k) == *g)
}

/// When every generator is a power of `first`, the generated group is
/// `<first^d>` with `d` the gcd of the exponents.
fn common_cyclic_root(first: &GroupElement, gens: &[GroupElement]) -> Option<GroupElement> {
    let mut d = 0i64;
    for g in gens {
        d = d.gcd(&cyclic_exponent(first, g)?);
    }
    Some(first.pow(d))
}
