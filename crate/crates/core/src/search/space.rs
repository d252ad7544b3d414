//! Indexed product tables and the per-support search kernel.
//!
//! Every group element that can appear (window, partner window, identity,
//! and all products the searches form) gets a dense id. A support is a set
//! of window positions; a candidate is a support plus one nonzero
//! coefficient per position.
//!
//! Support-level certificates ("peeling"): write the equation `x y = r` as a
//! linear system in the coefficients of `y`, one row per product group
//! element. Each row has one entry per factorization `a p` and every entry
//! is a nonzero multiple of `x_a`, so which entries exist depends only on
//! `Supp(x)`. A row with a single unknown and zero right-hand side forces
//! that unknown to vanish; repeating this is valid for every coefficient
//! choice at once. In a unique-product group peeling always clears every
//! column, which is what makes exhaustive windows cheap.

use std::collections::HashMap;
use std::sync::Arc;

use super::field::Field;
use super::linalg::{flip, kernel_vector, kernel_vector_bits, solve, solve_bits, BitRow};
use super::{SearchKind, Witness};
use crate::group::GroupElement;
use crate::ring::{Basis, ModelKind, RingElement, RingModel};
use crate::structure::is_central;

pub(crate) struct Space<F: Field> {
    pub field: F,
    pub model: Arc<RingModel>,
    pub universe: Vec<GroupElement>,
    /// Universe ids of the window, in window order.
    pub window: Vec<usize>,
    pub partner: Vec<usize>,
    pub identity: usize,
    /// `W[i] * P[j]` as `(id, tau)`, row-major.
    wp: Vec<(usize, F::E)>,
    /// `W[i] * W[j]` as `(id, tau)`, row-major.
    ww: Vec<(usize, F::E)>,
    /// Window position of each universe id.
    window_pos: Vec<Option<usize>>,
    /// Grading degree class of each window position.
    degree_class: Vec<usize>,
    /// Per generator `s`: window position of `s^-1 W[i] s`.
    conj: Vec<Vec<Option<usize>>>,
    pub bitset: bool,
}

/// Reusable per-thread buffers sized to the universe.
pub(crate) struct Scratch<E> {
    count: Vec<u32>,
    sum: Vec<u64>,
    touched: Vec<usize>,
    queue: Vec<usize>,
    local: Vec<u32>,
    acc: Vec<E>,
    alive: Vec<bool>,
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub(crate) struct SupportStats {
    pub certified: bool,
    pub coefficient_checks: u64,
    pub linear_solves: u64,
}

impl<F: Field> Space<F> {
    pub fn new(
        field: F,
        model: Arc<RingModel>,
        window: &[GroupElement],
        partner: &[GroupElement],
        bitset: bool,
    ) -> Self {
        let backend = model.backend().expect("group-graded model");
        let mut ids: HashMap<GroupElement, usize> = HashMap::new();
        let mut universe = Vec::new();
        let mut intern = |g: GroupElement, universe: &mut Vec<GroupElement>| -> usize {
            *ids.entry(g.clone()).or_insert_with(|| {
                universe.push(g);
                universe.len() - 1
            })
        };
        let identity = intern(backend.identity(), &mut universe);
        let w: Vec<usize> = window.iter().map(|g| intern(g.clone(), &mut universe)).collect();
        let p: Vec<usize> = partner.iter().map(|g| intern(g.clone(), &mut universe)).collect();
        let tau = |g: &GroupElement, h: &GroupElement| -> F::E {
            match model.kind() {
                ModelKind::Twisted(c) => field.lift(c.value(g, h)),
                _ => field.one(),
            }
        };
        let mut wp = Vec::with_capacity(w.len() * p.len());
        for g in window {
            for h in partner {
                let id = intern(g.mul_unchecked(h), &mut universe);
                wp.push((id, tau(g, h)));
            }
        }
        let mut ww = Vec::with_capacity(w.len() * w.len());
        for g in window {
            for h in window {
                let id = intern(g.mul_unchecked(h), &mut universe);
                ww.push((id, tau(g, h)));
            }
        }
        let mut window_pos = vec![None; universe.len()];
        for (i, &id) in w.iter().enumerate() {
            window_pos[id] = Some(i);
        }
        let mut classes: Vec<GroupElement> = Vec::new();
        let degree_class = window
            .iter()
            .map(|g| {
                let d = model.degree(&Basis::Group(g.clone()));
                match classes.iter().position(|c| *c == d) {
                    Some(i) => i,
                    None => {
                        classes.push(d);
                        classes.len() - 1
                    }
                }
            })
            .collect();
        let conj = backend
            .generators()
            .iter()
            .map(|s| {
                window
                    .iter()
                    .map(|g| {
                        let c = s.inverse().mul_unchecked(g).mul_unchecked(s);
                        ids.get(&c).and_then(|&id| window_pos.get(id).copied().flatten())
                    })
                    .collect()
            })
            .collect();
        Space { field, model, universe, window: w, partner: p, identity, wp, ww, window_pos, degree_class, conj, bitset }
    }

    pub fn scratch(&self) -> Scratch<F::E> {
        let n = self.universe.len();
        Scratch {
            count: vec![0; n],
            sum: vec![0; n],
            touched: Vec::new(),
            queue: Vec::new(),
            local: vec![u32::MAX; n],
            acc: vec![self.field.zero(); n],
            alive: Vec::new(),
        }
    }

    fn wp(&self, i: usize, j: usize) -> &(usize, F::E) {
        &self.wp[i * self.partner.len() + j]
    }

    fn ww(&self, i: usize, j: usize) -> &(usize, F::E) {
        &self.ww[i * self.window.len() + j]
    }

    pub fn is_homogeneous(&self, support: &[usize]) -> bool {
        support.iter().all(|&i| self.degree_class[i] == self.degree_class[support[0]])
    }

    /// Support closed under conjugation by every generator; necessary for
    /// a central element.
    pub fn conjugation_closed(&self, mask: u64) -> bool {
        self.conj.iter().all(|table| {
            (0..self.window.len())
                .filter(|i| mask >> i & 1 == 1)
                .all(|i| table[i].is_some_and(|j| mask >> j & 1 == 1))
        })
    }

    /// Peels columns `0..ncols` of the system with entries at rows
    /// `row(a, c)`; `skip` is a row with nonzero right-hand side. Returns
    /// the columns that survive.
    fn peel(
        &self,
        support: &[usize],
        ncols: usize,
        row: impl Fn(usize, usize) -> usize,
        skip: Option<usize>,
        s: &mut Scratch<F::E>,
    ) -> Vec<usize> {
        for c in 0..ncols {
            for &a in support {
                let r = row(a, c);
                if s.count[r] == 0 {
                    s.touched.push(r);
                }
                s.count[r] += 1;
                s.sum[r] += c as u64;
            }
        }
        s.alive.clear();
        s.alive.resize(ncols, true);
        s.queue.clear();
        s.queue.extend(s.touched.iter().copied().filter(|&r| s.count[r] == 1 && Some(r) != skip));
        while let Some(r) = s.queue.pop() {
            if s.count[r] != 1 {
                continue;
            }
            let c = s.sum[r] as usize;
            s.alive[c] = false;
            for &a in support {
                let r2 = row(a, c);
                s.count[r2] -= 1;
                s.sum[r2] -= c as u64;
                if s.count[r2] == 1 && Some(r2) != skip {
                    s.queue.push(r2);
                }
            }
        }
        for &r in &s.touched {
            s.count[r] = 0;
            s.sum[r] = 0;
        }
        s.touched.clear();
        (0..ncols).filter(|&c| s.alive[c]).collect()
    }

    /// Whether some product in `A A` is unique and lands outside `A`.
    fn unique_square_product_outside(&self, support: &[usize], mask: u64, s: &mut Scratch<F::E>) -> bool {
        for &a in support {
            for &b in support {
                let r = self.ww(a, b).0;
                if s.count[r] == 0 {
                    s.touched.push(r);
                }
                s.count[r] += 1;
            }
        }
        let found = s.touched.iter().any(|&r| {
            s.count[r] == 1 && !self.window_pos[r].is_some_and(|i| mask >> i & 1 == 1)
        });
        for &r in &s.touched {
            s.count[r] = 0;
        }
        s.touched.clear();
        found
    }

    /// Support-level test. `None` means no candidate on this support can be
    /// a witness; otherwise returns the columns that survived peeling.
    pub fn certify(&self, kind: SearchKind, support: &[usize], mask: u64, s: &mut Scratch<F::E>) -> Option<Vec<usize>> {
        match kind {
            SearchKind::Unit => {
                let rest = self.peel(support, self.partner.len(), |a, c| self.wp(a, c).0, Some(self.identity), s);
                let reaches_one = rest.iter().any(|&c| support.iter().any(|&a| self.wp(a, c).0 == self.identity));
                (reaches_one && !rest.is_empty()).then_some(rest)
            }
            SearchKind::ZeroDivisor => {
                let rest = self.peel(support, self.partner.len(), |a, c| self.wp(a, c).0, None, s);
                (!rest.is_empty()).then_some(rest)
            }
            SearchKind::Nilpotent => {
                let rest = self.peel(support, support.len(), |a, c| self.ww(a, support[c]).0, None, s);
                (!rest.is_empty()).then_some(rest)
            }
            SearchKind::Idempotent => {
                if self.unique_square_product_outside(support, mask, s) {
                    return None;
                }
                // u (u - 1) = 0 with Supp(u - 1) in A + {e}; injectivity forces u = 1
                let e_pos = self.window_pos[self.identity].filter(|&i| mask >> i & 1 == 1);
                let ncols = support.len() + usize::from(e_pos.is_none());
                let row = |a: usize, c: usize| {
                    if c < support.len() {
                        self.ww(a, support[c]).0
                    } else {
                        self.window[a]
                    }
                };
                let rest = self.peel(support, ncols, row, None, s);
                (!rest.is_empty()).then_some(rest)
            }
        }
    }

    pub fn element(&self, support: &[usize], coeffs: &[F::E]) -> RingElement {
        let terms = support.iter().zip(coeffs).map(|(&i, c)| {
            (self.universe[self.window[i]].clone(), self.field.lower(c))
        });
        RingElement::from_group_terms(&self.model, terms).expect("window elements belong to the model")
    }

    fn partner_element(&self, cols: &[usize], values: &[F::E]) -> RingElement {
        let terms = cols
            .iter()
            .zip(values)
            .filter(|(_, v)| !self.field.is_zero(v))
            .map(|(&c, v)| (self.universe[self.partner[c]].clone(), self.field.lower(v)));
        RingElement::from_group_terms(&self.model, terms).expect("partner elements belong to the model")
    }

    /// Rows touched by `cols`, numbered in first-touch order.
    fn local_rows(&self, support: &[usize], cols: &[usize], s: &mut Scratch<F::E>) -> usize {
        let mut n = 0;
        for &c in cols {
            for &a in support {
                let r = self.wp(a, c).0;
                if s.local[r] == u32::MAX {
                    s.local[r] = n;
                    s.touched.push(r);
                    n += 1;
                }
            }
        }
        n as usize
    }

    fn clear_local(&self, s: &mut Scratch<F::E>) {
        for &r in &s.touched {
            s.local[r] = u32::MAX;
        }
        s.touched.clear();
    }

    /// Solves `x y = 1` (unit) or finds the canonical `y != 0` with `x y = 0`
    /// (zero-divisor), with `y` supported on partner columns `cols`.
    fn solve_partner(
        &self,
        kind: SearchKind,
        support: &[usize],
        coeffs: &[F::E],
        cols: &[usize],
        s: &mut Scratch<F::E>,
    ) -> Option<Vec<F::E>> {
        let f = &self.field;
        let nrows = self.local_rows(support, cols, s);
        let unit = kind == SearchKind::Unit;
        let one_row = s.local[self.identity];
        if unit && one_row == u32::MAX {
            self.clear_local(s);
            return None;
        }
        let width = cols.len() + usize::from(unit);
        let result = if self.bitset {
            let mut m: Vec<BitRow> = vec![vec![0; width.div_ceil(64)]; nrows];
            for (k, &c) in cols.iter().enumerate() {
                for &a in support {
                    flip(&mut m[s.local[self.wp(a, c).0] as usize], k);
                }
            }
            let bits = if unit {
                flip(&mut m[one_row as usize], cols.len());
                solve_bits(m, cols.len())
            } else {
                kernel_vector_bits(m, cols.len())
            };
            bits.map(|v| v.into_iter().map(|b| if b { f.one() } else { f.zero() }).collect())
        } else {
            let mut m = vec![vec![f.zero(); width]; nrows];
            for (k, &c) in cols.iter().enumerate() {
                for (&a, xa) in support.iter().zip(coeffs) {
                    let (r, t) = self.wp(a, c);
                    let cell = &mut m[s.local[*r] as usize][k];
                    *cell = f.add(cell, &f.mul(xa, t));
                }
            }
            if unit {
                m[one_row as usize][cols.len()] = f.one();
                solve(f, m, cols.len())
            } else {
                kernel_vector(f, m, cols.len())
            }
        };
        self.clear_local(s);
        result
    }

    /// `x^2 = x` (idempotent) or `x^2 = 0` (nilpotent) via the window table.
    fn square_matches(&self, kind: SearchKind, support: &[usize], coeffs: &[F::E], mask: u64, s: &mut Scratch<F::E>) -> bool {
        let f = &self.field;
        let idem = kind == SearchKind::Idempotent;
        if self.bitset {
            let mut acc: BitRow = vec![0; self.universe.len().div_ceil(64)];
            for &a in support {
                for &b in support {
                    flip(&mut acc, self.ww(a, b).0);
                }
            }
            let mut target: BitRow = vec![0; acc.len()];
            if idem {
                for &a in support {
                    flip(&mut target, self.window[a]);
                }
            }
            return acc == target;
        }
        for (&a, xa) in support.iter().zip(coeffs) {
            for (&b, xb) in support.iter().zip(coeffs) {
                let (r, t) = self.ww(a, b);
                if s.count[*r] == 0 {
                    s.count[*r] = 1;
                    s.touched.push(*r);
                }
                s.acc[*r] = f.add(&s.acc[*r], &f.mul(&f.mul(xa, xb), t));
            }
        }
        let mut ok = true;
        for &r in &s.touched {
            let want = match self.window_pos[r] {
                Some(i) if idem && mask >> i & 1 == 1 => {
                    let k = support.iter().position(|&a| a == i).unwrap();
                    coeffs[k].clone()
                }
                _ => f.zero(),
            };
            if s.acc[r] != want {
                ok = false;
            }
        }
        if idem && ok {
            // every support element must have been produced
            ok = support.iter().all(|&a| s.count[self.window[a]] == 1);
        }
        for &r in &s.touched {
            s.count[r] = 0;
            s.acc[r] = f.zero();
        }
        s.touched.clear();
        ok
    }

    /// Coefficient-level check of one candidate whose support survived
    /// [`Space::certify`] with partner columns `cols`.
    pub fn check_candidate(
        &self,
        kind: SearchKind,
        support: &[usize],
        mask: u64,
        coeffs: &[F::E],
        cols: &[usize],
        s: &mut Scratch<F::E>,
    ) -> Option<Witness> {
        match kind {
            SearchKind::Unit | SearchKind::ZeroDivisor => {
                let y = self.solve_partner(kind, support, coeffs, cols, s)?;
                let x = self.element(support, coeffs);
                let y = self.partner_element(cols, &y);
                // one-sided inverses that are not two-sided do not count
                if kind == SearchKind::Unit && !y.mul_unchecked(&x).is_one() {
                    return None;
                }
                Some(Witness { x, y: Some(y) })
            }
            SearchKind::Idempotent | SearchKind::Nilpotent => {
                let f = &self.field;
                let is_one = support.len() == 1
                    && self.window[support[0]] == self.identity
                    && f.is_zero(&f.sub(&coeffs[0], &f.one()));
                (!is_one && self.square_matches(kind, support, coeffs, mask, s))
                    .then(|| Witness { x: self.element(support, coeffs), y: None })
            }
        }
    }

    /// Runs one support through the certificate and, if needed, every
    /// coefficient tuple. Witnesses are appended in coefficient order.
    #[allow(clippy::too_many_arguments)]
    pub fn run_support(
        &self,
        kind: SearchKind,
        central_only: bool,
        support: &[usize],
        mask: u64,
        candidates: &[F::E],
        s: &mut Scratch<F::E>,
        witnesses: &mut Vec<Witness>,
        witness_total: &mut u64,
        max_witnesses: usize,
    ) -> SupportStats {
        let mut stats = SupportStats::default();
        if central_only && !self.conjugation_closed(mask) {
            stats.certified = true;
            return stats;
        }
        let Some(cols) = self.certify(kind, support, mask, s) else {
            stats.certified = true;
            return stats;
        };
        let k = support.len();
        let mut idx = vec![0usize; k];
        loop {
            let coeffs: Vec<F::E> = idx.iter().map(|&i| candidates[i].clone()).collect();
            stats.coefficient_checks += 1;
            if matches!(kind, SearchKind::Unit | SearchKind::ZeroDivisor) {
                stats.linear_solves += 1;
            }
            if let Some(w) = self.check_candidate(kind, support, mask, &coeffs, &cols, s) {
                if !central_only || is_central(&w.x) {
                    *witness_total += 1;
                    if witnesses.len() < max_witnesses {
                        witnesses.push(w);
                    }
                }
            }
            // next coefficient tuple in lex order
            let mut pos = k;
            loop {
                if pos == 0 {
                    return stats;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < candidates.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}
