//! Exact group arithmetic for a closed set of backends.
//!
//! Every element is stored in a canonical normal form, so structural equality
//! of [`GroupElement`] values is group equality. Each backend has a fixed
//! symmetric generating set, which defines the word metric used by [`ball`].
//!
//! | backend      | generators | normal form                                  |
//! |--------------|------------|----------------------------------------------|
//! | `z`,`z2`,`z3`| t / u,v,w  | exponent vector                              |
//! | `f2`,`f3`    | a,b,c      | freely reduced word                          |
//! | `heisenberg` | x,y        | `x^a y^b z^c` with `z = x^-1 y^-1 x y`        |
//! | `klein`      | a,b        | `a^m b^n`, relation `b a b^-1 = a^-1`         |
//! | `promislow`  | a,b        | affine isometry of R^3, half-integer shift   |
//! | `cN`         | t          | residue mod N                                |
//! | `v4`         | i,j        | pair of bits (`k = i j`)                     |

mod lattice;
mod subgroup;

pub use lattice::Lattice;
pub use subgroup::{Subgroup, SubgroupKind};

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("backend mismatch: {0} vs {1}")]
    BackendMismatch(Backend, Backend),
    #[error("unsupported subgroup {kind} for backend {backend}")]
    UnsupportedSubgroup { kind: String, backend: Backend },
    #[error("unknown backend `{0}`")]
    UnknownBackend(String),
    #[error("backend {0} has no generator named `{1}`")]
    UnknownGenerator(Backend, char),
}

/// The group families the laboratory can compute in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    /// Free abelian group of the given rank (1..=3).
    Abelian { rank: u8 },
    /// Free group of the given rank (1..=4).
    Free { rank: u8 },
    /// Discrete Heisenberg group.
    Heisenberg,
    /// Klein-bottle group `<a, b | b a b^-1 = a^-1>`.
    Klein,
    /// Promislow's group `<a, b | a b^2 a^-1 = b^-2, b a^2 b^-1 = a^-2>`.
    Promislow,
    /// Cyclic group of the given order (torsion control).
    Cyclic { order: u32 },
    /// Klein four-group `C2 x C2`.
    KleinFour,
}

impl Backend {
    pub fn is_finite(self) -> bool {
        matches!(self, Backend::Cyclic { .. } | Backend::KleinFour)
    }

    pub fn is_torsion_free(self) -> bool {
        match self {
            Backend::Cyclic { order } => order == 1,
            Backend::KleinFour => false,
            _ => true,
        }
    }

    pub fn is_abelian(self) -> bool {
        match self {
            Backend::Abelian { .. } | Backend::Cyclic { .. } | Backend::KleinFour => true,
            Backend::Free { rank } => rank <= 1,
            _ => false,
        }
    }

    /// Backends where every pair of finite non-empty subsets has a unique
    /// product (all orderable).
    pub fn is_unique_product(self) -> bool {
        matches!(
            self,
            Backend::Abelian { .. } | Backend::Free { .. } | Backend::Heisenberg | Backend::Klein
        )
    }

    /// Generator letters in order. Inverses are not listed.
    pub fn generator_names(self) -> &'static [char] {
        match self {
            Backend::Abelian { rank: 1 } => &['t'],
            Backend::Abelian { rank: 2 } => &['u', 'v'],
            Backend::Abelian { .. } => &['u', 'v', 'w'],
            Backend::Free { rank } => &['a', 'b', 'c', 'd'][..rank as usize],
            Backend::Heisenberg => &['x', 'y'],
            Backend::Klein | Backend::Promislow => &['a', 'b'],
            Backend::Cyclic { .. } => &['t'],
            Backend::KleinFour => &['i', 'j'],
        }
    }

    pub fn generators(self) -> Vec<GroupElement> {
        self.generator_names()
            .iter()
            .map(|&c| self.symbol(c).expect("generator names resolve"))
            .collect()
    }

    /// Generators together with their inverses, deduplicated.
    pub fn symmetric_generators(self) -> Vec<GroupElement> {
        let mut out: Vec<GroupElement> = Vec::new();
        for g in self.generators() {
            let inv = g.inverse();
            if !out.contains(&g) {
                out.push(g);
            }
            if !out.contains(&inv) {
                out.push(inv);
            }
        }
        out
    }

    /// Resolves a one-letter symbol: a generator or a named derived element
    /// (`z` in the Heisenberg group, `x,y,z` in Promislow's group, `k` in V4).
    pub fn symbol(self, c: char) -> Option<GroupElement> {
        let nf = match (self, c) {
            (Backend::Abelian { rank }, _) => {
                let idx = match (rank, c) {
                    (1, 't') => 0,
                    (r, 'u') if r >= 2 => 0,
                    (r, 'v') if r >= 2 => 1,
                    (3, 'w') => 2,
                    _ => return None,
                };
                let mut v = vec![0; rank as usize];
                v[idx] = 1;
                NormalForm::Vector(v)
            }
            (Backend::Free { rank }, c) => {
                let k = (c as u8).checked_sub(b'a')?;
                if k >= rank {
                    return None;
                }
                NormalForm::Word(vec![2 * k])
            }
            (Backend::Heisenberg, 'x') => NormalForm::Heisenberg([1, 0, 0]),
            (Backend::Heisenberg, 'y') => NormalForm::Heisenberg([0, 1, 0]),
            (Backend::Heisenberg, 'z') => NormalForm::Heisenberg([0, 0, 1]),
            (Backend::Klein, 'a') => NormalForm::Klein([1, 0]),
            (Backend::Klein, 'b') => NormalForm::Klein([0, 1]),
            (Backend::Promislow, 'a') => promislow::A,
            (Backend::Promislow, 'b') => promislow::B,
            (Backend::Promislow, 'x') => promislow::translation([2, 0, 0]),
            (Backend::Promislow, 'y') => promislow::translation([0, 2, 0]),
            (Backend::Promislow, 'z') => promislow::translation([0, 0, -2]),
            (Backend::Cyclic { order }, 't') => NormalForm::Mod(1 % order.max(1)),
            (Backend::KleinFour, 'i') => NormalForm::Four([1, 0]),
            (Backend::KleinFour, 'j') => NormalForm::Four([0, 1]),
            (Backend::KleinFour, 'k') => NormalForm::Four([1, 1]),
            _ => return None,
        };
        Some(GroupElement { backend: self, nf })
    }

    pub fn identity(self) -> GroupElement {
        let nf = match self {
            Backend::Abelian { rank } => NormalForm::Vector(vec![0; rank as usize]),
            Backend::Free { .. } => NormalForm::Word(Vec::new()),
            Backend::Heisenberg => NormalForm::Heisenberg([0; 3]),
            Backend::Klein => NormalForm::Klein([0; 2]),
            Backend::Promislow => promislow::translation([0; 3]),
            Backend::Cyclic { .. } => NormalForm::Mod(0),
            Backend::KleinFour => NormalForm::Four([0; 2]),
        };
        GroupElement { backend: self, nf }
    }

    /// Element of `Z^n` from an exponent vector.
    pub fn vector(self, v: &[i64]) -> Option<GroupElement> {
        match self {
            Backend::Abelian { rank } if rank as usize == v.len() => Some(GroupElement {
                backend: self,
                nf: NormalForm::Vector(v.to_vec()),
            }),
            Backend::Cyclic { order } if v.len() == 1 => Some(GroupElement {
                backend: self,
                nf: NormalForm::Mod(v[0].rem_euclid(order as i64) as u32),
            }),
            _ => None,
        }
    }

    /// All elements of a finite backend, in canonical order.
    pub fn elements(self) -> Option<Vec<GroupElement>> {
        match self {
            Backend::Cyclic { order } => Some(
                (0..order)
                    .map(|r| GroupElement { backend: self, nf: NormalForm::Mod(r) })
                    .collect(),
            ),
            Backend::KleinFour => Some(
                [[0, 0], [1, 0], [0, 1], [1, 1]]
                    .into_iter()
                    .map(|p| GroupElement { backend: self, nf: NormalForm::Four(p) })
                    .collect(),
            ),
            _ => None,
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Abelian { rank: 1 } => write!(f, "z"),
            Backend::Abelian { rank } => write!(f, "z{rank}"),
            Backend::Free { rank } => write!(f, "f{rank}"),
            Backend::Heisenberg => write!(f, "heisenberg"),
            Backend::Klein => write!(f, "klein"),
            Backend::Promislow => write!(f, "promislow"),
            Backend::Cyclic { order } => write!(f, "c{order}"),
            Backend::KleinFour => write!(f, "v4"),
        }
    }
}

impl FromStr for Backend {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let bad = || GroupError::UnknownBackend(s.to_string());
        let b = match lower.as_str() {
            "z" | "z1" => Backend::Abelian { rank: 1 },
            "heisenberg" | "h3" => Backend::Heisenberg,
            "klein" | "kleinbottle" => Backend::Klein,
            "promislow" | "p" => Backend::Promislow,
            "v4" | "kleinfour" | "c2xc2" => Backend::KleinFour,
            _ => {
                let (head, tail) = lower.split_at(1);
                let n: u32 = tail.parse().map_err(|_| bad())?;
                match head {
                    "z" if (1..=3).contains(&n) => Backend::Abelian { rank: n as u8 },
                    "f" if (1..=4).contains(&n) => Backend::Free { rank: n as u8 },
                    "c" if n >= 1 => Backend::Cyclic { order: n },
                    _ => return Err(bad()),
                }
            }
        };
        Ok(b)
    }
}

/// Free-group letters: generator `k` is `2k`, its inverse `2k + 1`.
type Letter = u8;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum NormalForm {
    Vector(Vec<i64>),
    Word(Vec<Letter>),
    Heisenberg([i64; 3]),
    Klein([i64; 2]),
    /// `x -> diag(signs) x + half / 2`.
    Affine { signs: [i8; 3], half: [i64; 3] },
    Mod(u32),
    Four([u8; 2]),
}

mod promislow {
    use super::NormalForm;

    pub const A: NormalForm = NormalForm::Affine { signs: [1, -1, -1], half: [1, 1, 0] };
    pub const B: NormalForm = NormalForm::Affine { signs: [-1, 1, -1], half: [0, 1, 1] };

    pub const fn translation(half: [i64; 3]) -> NormalForm {
        NormalForm::Affine { signs: [1, 1, 1], half }
    }

    /// Coset representatives of the translation lattice: e, a, b, ab.
    pub const COSET_SIGNS: [[i8; 3]; 4] = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];
    pub const COSET_HALF: [[i64; 3]; 4] = [[0, 0, 0], [1, 1, 0], [0, 1, 1], [1, 0, -1]];
    pub const COSET_NAMES: [&str; 4] = ["", "a", "b", "a*b"];

    pub fn coset_index(signs: [i8; 3]) -> usize {
        COSET_SIGNS
            .iter()
            .position(|s| *s == signs)
            .expect("point group is the Klein four-group")
    }

    /// (coset index, exponents of x = a^2, y = b^2, z = (ab)^2) with
    /// g = x^i y^j z^k r.
    pub fn decompose(signs: [i8; 3], half: [i64; 3]) -> (usize, [i64; 3]) {
        let c = coset_index(signs);
        let r = COSET_HALF[c];
        let v: Vec<i64> = (0..3).map(|i| (half[i] - r[i]) / 2).collect();
        (c, [v[0], v[1], -v[2]])
    }
}

/// An element of one of the [`Backend`] groups, in canonical normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    backend: Backend,
    nf: NormalForm,
}

impl GroupElement {
    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn is_identity(&self) -> bool {
        *self == self.backend.identity()
    }

    fn check(&self, other: &GroupElement) -> Result<(), GroupError> {
        if self.backend == other.backend {
            Ok(())
        } else {
            Err(GroupError::BackendMismatch(self.backend, other.backend))
        }
    }

    /// The group law `self * other`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &GroupElement) -> GroupElement {
        use NormalForm::*;
        let nf = match (&self.nf, &other.nf) {
            (Vector(a), Vector(b)) => Vector(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            (Word(a), Word(b)) => {
                let mut w = a.clone();
                for &l in b {
                    if w.last() == Some(&(l ^ 1)) {
                        w.pop();
                    } else {
                        w.push(l);
                    }
                }
                Word(w)
            }
            (Heisenberg([a, b, c]), Heisenberg([a2, b2, c2])) => {
                Heisenberg([a + a2, b + b2, c + c2 - b * a2])
            }
            (Klein([m, n]), Klein([m2, n2])) => {
                let twist = if n.rem_euclid(2) == 0 { *m2 } else { -m2 };
                Klein([m + twist, n + n2])
            }
            (Affine { signs: s1, half: t1 }, Affine { signs: s2, half: t2 }) => {
                let mut signs = [0i8; 3];
                let mut half = [0i64; 3];
                for i in 0..3 {
                    signs[i] = s1[i] * s2[i];
                    half[i] = s1[i] as i64 * t2[i] + t1[i];
                }
                Affine { signs, half }
            }
            (Mod(a), Mod(b)) => {
                let Backend::Cyclic { order } = self.backend else { unreachable!() };
                Mod(((*a as u64 + *b as u64) % order as u64) as u32)
            }
            (Four([a, b]), Four([c, d])) => Four([a ^ c, b ^ d]),
            _ => unreachable!("normal form matches backend"),
        };
        GroupElement { backend: self.backend, nf }
    }

    pub fn inverse(&self) -> GroupElement {
        use NormalForm::*;
        let nf = match &self.nf {
            Vector(v) => Vector(v.iter().map(|x| -x).collect()),
            Word(w) => Word(w.iter().rev().map(|l| l ^ 1).collect()),
            // (x^a y^b z^c)^-1 = x^-a y^-b z^(-c - ab)
            Heisenberg([a, b, c]) => Heisenberg([-a, -b, -c - a * b]),
            Klein([m, n]) => {
                let m2 = if n.rem_euclid(2) == 0 { -m } else { *m };
                Klein([m2, -n])
            }
            Affine { signs, half } => {
                let mut h = [0i64; 3];
                for i in 0..3 {
                    h[i] = -(signs[i] as i64) * half[i];
                }
                Affine { signs: *signs, half: h }
            }
            Mod(a) => {
                let Backend::Cyclic { order } = self.backend else { unreachable!() };
                Mod((order - a) % order)
            }
            Four(p) => Four(*p),
        };
        GroupElement { backend: self.backend, nf }
    }

    pub fn pow(&self, k: i64) -> GroupElement {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.backend.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// `s^-1 g s`.
    pub fn conjugate(&self, s: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(s)?;
        Ok(s.inverse().mul_unchecked(self).mul_unchecked(s))
    }

    /// Exponent vector for `Z^n` and residues for cyclic groups.
    pub fn as_vector(&self) -> Option<Vec<i64>> {
        match &self.nf {
            NormalForm::Vector(v) => Some(v.clone()),
            NormalForm::Mod(r) => Some(vec![*r as i64]),
            NormalForm::Four([a, b]) => Some(vec![*a as i64, *b as i64]),
            _ => None,
        }
    }

    /// `(a, b, c)` for `x^a y^b z^c` in the Heisenberg group.
    pub fn heisenberg_coords(&self) -> Option<[i64; 3]> {
        match self.nf {
            NormalForm::Heisenberg(c) => Some(c),
            _ => None,
        }
    }

    /// `(m, n)` for `a^m b^n` in the Klein-bottle group.
    pub fn klein_coords(&self) -> Option<[i64; 2]> {
        match self.nf {
            NormalForm::Klein(c) => Some(c),
            _ => None,
        }
    }

    /// Point-group signs and doubled translation of a Promislow element.
    pub fn affine_parts(&self) -> Option<([i8; 3], [i64; 3])> {
        match self.nf {
            NormalForm::Affine { signs, half } => Some((signs, half)),
            _ => None,
        }
    }

    /// Coset index in `P / <x, y, z>` (0 = e, 1 = a, 2 = b, 3 = ab) and the
    /// lattice exponents with `g = x^i y^j z^k r`.
    pub fn promislow_coords(&self) -> Option<(usize, [i64; 3])> {
        self.affine_parts().map(|(s, h)| promislow::decompose(s, h))
    }

    pub(crate) fn free_word(&self) -> Option<&[u8]> {
        match &self.nf {
            NormalForm::Word(w) => Some(w),
            _ => None,
        }
    }

    fn order_key(&self) -> OrderKey<'_> {
        match &self.nf {
            NormalForm::Vector(v) => OrderKey::Ints(v.clone()),
            NormalForm::Word(w) => OrderKey::ShortLex(w),
            NormalForm::Heisenberg(c) => OrderKey::Ints(c.to_vec()),
            NormalForm::Klein(c) => OrderKey::Ints(c.to_vec()),
            NormalForm::Affine { signs, half } => {
                let (c, v) = promislow::decompose(*signs, *half);
                OrderKey::Ints(vec![c as i64, v[0], v[1], v[2]])
            }
            NormalForm::Mod(r) => OrderKey::Ints(vec![*r as i64]),
            NormalForm::Four([a, b]) => OrderKey::Ints(vec![(*a + 2 * *b) as i64]),
        }
    }
}

enum OrderKey<'a> {
    Ints(Vec<i64>),
    ShortLex(&'a [u8]),
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex on free words (letter order `a < a^-1 < b < b^-1 ...`), lex on
/// exponent vectors and coordinate tuples elsewhere.
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.backend.cmp(&other.backend).then_with(|| {
            match (self.order_key(), other.order_key()) {
                (OrderKey::Ints(a), OrderKey::Ints(b)) => a.cmp(&b),
                (OrderKey::ShortLex(a), OrderKey::ShortLex(b)) => {
                    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
                }
                _ => unreachable!(),
            }
        })
    }
}

fn write_power(out: &mut Vec<String>, name: &str, e: i64) {
    match e {
        0 => {}
        1 => out.push(name.to_string()),
        _ => {
            if name.len() > 1 {
                out.push(format!("({name})^{e}"))
            } else {
                out.push(format!("{name}^{e}"))
            }
        }
    }
}

/// Canonical word: generator powers joined by `*`, identity printed as `1`.
impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match &self.nf {
            NormalForm::Vector(v) => {
                for (name, e) in self.backend.generator_names().iter().zip(v) {
                    write_power(&mut parts, &name.to_string(), *e);
                }
            }
            NormalForm::Word(w) => {
                let mut i = 0;
                while i < w.len() {
                    let l = w[i];
                    let mut j = i;
                    while j < w.len() && w[j] == l {
                        j += 1;
                    }
                    let name = ((b'a' + l / 2) as char).to_string();
                    let run = (j - i) as i64;
                    write_power(&mut parts, &name, if l & 1 == 1 { -run } else { run });
                    i = j;
                }
            }
            NormalForm::Heisenberg([a, b, c]) => {
                write_power(&mut parts, "x", *a);
                write_power(&mut parts, "y", *b);
                write_power(&mut parts, "z", *c);
            }
            NormalForm::Klein([m, n]) => {
                write_power(&mut parts, "a", *m);
                write_power(&mut parts, "b", *n);
            }
            NormalForm::Affine { signs, half } => {
                let (c, v) = promislow::decompose(*signs, *half);
                write_power(&mut parts, "x", v[0]);
                write_power(&mut parts, "y", v[1]);
                write_power(&mut parts, "z", v[2]);
                let rep = promislow::COSET_NAMES[c];
                if !rep.is_empty() {
                    parts.push(rep.to_string());
                }
            }
            NormalForm::Mod(r) => write_power(&mut parts, "t", *r as i64),
            NormalForm::Four(p) => match p {
                [1, 0] => parts.push("i".into()),
                [0, 1] => parts.push("j".into()),
                [1, 1] => parts.push("k".into()),
                _ => {}
            },
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// All elements of word length at most `radius`, sorted by word length and
/// then by the canonical order. Monotone in `radius`.
pub fn ball(backend: Backend, radius: usize) -> Vec<GroupElement> {
    ball_with_lengths(backend, radius).into_iter().map(|(g, _)| g).collect()
}

/// Like [`ball`], paired with each element's word length.
pub fn ball_with_lengths(backend: Backend, radius: usize) -> Vec<(GroupElement, usize)> {
    let gens = backend.symmetric_generators();
    let e = backend.identity();
    let mut seen: HashSet<GroupElement> = HashSet::from([e.clone()]);
    let mut out = vec![(e.clone(), 0)];
    let mut frontier = vec![e];
    for len in 1..=radius {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &gens {
                let h = g.mul_unchecked(s);
                if seen.insert(h.clone()) {
                    next.push(h);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        out.extend(next.iter().cloned().map(|g| (g, len)));
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(b: Backend, c: char) -> GroupElement {
        b.symbol(c).unwrap()
    }

    #[test]
    fn abelian_compose() {
        let z2 = Backend::Abelian { rank: 2 };
        let g = z2.vector(&[1, 0]).unwrap();
        let h = z2.vector(&[0, 1]).unwrap();
        assert_eq!(g.compose(&h).unwrap(), z2.vector(&[1, 1]).unwrap());
    }

    #[test]
    fn free_reduction() {
        let f2 = Backend::Free { rank: 2 };
        let a = sym(f2, 'a');
        let b = sym(f2, 'b');
        let ab = a.compose(&b).unwrap();
        let binv_a = b.inverse().compose(&a).unwrap();
        assert_eq!(ab.compose(&binv_a).unwrap(), a.pow(2));
        assert_eq!(a.pow(2).to_string(), "a^2");
    }

    #[test]
    fn klein_relation() {
        let k = Backend::Klein;
        let a = sym(k, 'a');
        let b = sym(k, 'b');
        let ba = b.compose(&a).unwrap();
        assert_eq!(ba, a.inverse().compose(&b).unwrap());
        assert_eq!(ba.to_string(), "a^-1*b");
    }

    #[test]
    fn heisenberg_conjugation() {
        let h = Backend::Heisenberg;
        let x = sym(h, 'x');
        let y = sym(h, 'y');
        let z = sym(h, 'z');
        assert_eq!(x.conjugate(&y).unwrap(), x.compose(&z).unwrap());
        assert_eq!(z.conjugate(&y).unwrap(), z);
        assert_eq!(z.conjugate(&x).unwrap(), z);
        // z = [x, y] = x^-1 y^-1 x y
        let comm = x.inverse().compose(&y.inverse()).unwrap().compose(&x).unwrap().compose(&y).unwrap();
        assert_eq!(comm, z);
    }

    #[test]
    fn backend_mismatch_is_an_error() {
        let g = Backend::Klein.identity();
        let h = Backend::Heisenberg.identity();
        assert!(matches!(g.compose(&h), Err(GroupError::BackendMismatch(..))));
        assert!(g.conjugate(&h).is_err());
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(ball(Backend::Abelian { rank: 1 }, 1).len(), 3);
        let f2 = ball(Backend::Free { rank: 2 }, 1);
        assert_eq!(f2.len(), 5);
        // |i| + |j| <= 2 has 1 + 4 + 8 = 13 lattice points.
        let count = (-2i64..=2)
            .flat_map(|i| (-2i64..=2).map(move |j| (i, j)))
            .filter(|(i, j)| i.abs() + j.abs() <= 2)
            .count();
        assert_eq!(ball(Backend::Abelian { rank: 2 }, 2).len(), count);
        assert_eq!(ball(Backend::Cyclic { order: 3 }, 5).len(), 3);
    }

    #[test]
    fn ball_is_monotone_and_duplicate_free() {
        for b in [Backend::Heisenberg, Backend::Klein, Backend::Promislow, Backend::Free { rank: 2 }] {
            let small = ball(b, 2);
            let big = ball(b, 3);
            let set: HashSet<_> = big.iter().cloned().collect();
            assert_eq!(set.len(), big.len());
            assert!(small.iter().all(|g| set.contains(g)));
        }
    }

    #[test]
    fn promislow_relations() {
        let p = Backend::Promislow;
        let a = sym(p, 'a');
        let b = sym(p, 'b');
        // a b^2 a^-1 = b^-2 and b a^2 b^-1 = a^-2
        assert_eq!(a.compose(&b.pow(2)).unwrap().compose(&a.inverse()).unwrap(), b.pow(-2));
        assert_eq!(b.compose(&a.pow(2)).unwrap().compose(&b.inverse()).unwrap(), a.pow(-2));
        assert_eq!(sym(p, 'x'), a.pow(2));
        assert_eq!(sym(p, 'y'), b.pow(2));
        assert_eq!(sym(p, 'z'), a.compose(&b).unwrap().pow(2));
    }

    #[test]
    fn parse_backend_names() {
        assert_eq!("z2".parse::<Backend>().unwrap(), Backend::Abelian { rank: 2 });
        assert_eq!("C3".parse::<Backend>().unwrap(), Backend::Cyclic { order: 3 });
        assert_eq!("f2".parse::<Backend>().unwrap(), Backend::Free { rank: 2 });
        assert!("q7".parse::<Backend>().is_err());
        for b in [Backend::Heisenberg, Backend::Klein, Backend::Promislow, Backend::KleinFour] {
            assert_eq!(b.to_string().parse::<Backend>().unwrap(), b);
        }
    }
}
