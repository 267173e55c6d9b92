//! Fully materialized finite permutation groups.
//!
//! Elements are stored sorted by the fixed total order on permutations, so
//! element ids, coset representatives, and every enumeration downstream are
//! deterministic. Groups up to [`TABLE_LIMIT`] elements carry a full
//! multiplication table; larger ones (up to the closure cap) fall back to
//! composing permutations and hashing.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hom::GroupHom;
use crate::perm::Perm;

/// Index of an element within its group's sorted element list.
pub type ElemId = u16;

/// Default cap on closure enumeration (overridable per call and, in the CLI,
/// via the `REVMAP_CAP` environment variable).
pub const DEFAULT_CLOSURE_CAP: usize = 20_000;

/// Largest order for which the full multiplication table is materialized.
pub const TABLE_LIMIT: usize = 4_096;

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, ElemId>,
    gens: Vec<(String, ElemId)>,
    inv: Vec<ElemId>,
    orders: Vec<u32>,
    table: Option<Vec<ElemId>>,
}

impl FiniteGroup {
    /// Closes a labeled generating set under composition.
    ///
    /// The closure is a breadth-first product enumeration; it fails with
    /// [`Error::ClosureCap`] once more than `cap` elements appear
    /// (default [`DEFAULT_CLOSURE_CAP`]).
    pub fn closure_from_generators(
        degree: usize,
        labeled_gens: &[(String, Perm)],
        cap: Option<usize>,
    ) -> Result<FiniteGroup> {
        let cap = cap.unwrap_or(DEFAULT_CLOSURE_CAP);
        for (_, g) in labeled_gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { left: degree, right: g.degree() });
            }
        }
        let identity = Perm::identity(degree);
        let mut seen: HashMap<Perm, ()> = HashMap::new();
        let mut queue: Vec<Perm> = vec![identity.clone()];
        seen.insert(identity, ());
        let mut head = 0;
        while head < queue.len() {
            let current = queue[head].clone();
            head += 1;
            for (_, g) in labeled_gens {
                let next = current.compose(g);
                if !seen.contains_key(&next) {
                    if queue.len() + 1 > cap {
                        return Err(Error::ClosureCap { cap });
                    }
                    seen.insert(next.clone(), ());
                    queue.push(next);
                }
            }
        }
        let mut elements = queue;
        elements.sort();
        let index: HashMap<Perm, ElemId> =
            elements.iter().enumerate().map(|(i, p)| (p.clone(), i as ElemId)).collect();
        let n = elements.len();
        debug_assert!(elements[0].is_identity(), "identity is the lexicographic minimum");

        let mut inv = vec![0 as ElemId; n];
        for (i, p) in elements.iter().enumerate() {
            inv[i] = index[&p.inverse()];
        }
        let orders: Vec<u32> = elements.iter().map(|p| p.order() as u32).collect();
        let table = if n <= TABLE_LIMIT {
            let mut t = vec![0 as ElemId; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = index[&elements[a].compose(&elements[b])];
                }
            }
            Some(t)
        } else {
            None
        };
        let gens = labeled_gens
            .iter()
            .map(|(label, p)| (label.clone(), index[p]))
            .collect();
        Ok(FiniteGroup { degree, elements, index, gens, inv, orders, table })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The identity always sorts first.
    pub fn identity_id(&self) -> ElemId {
        0
    }

    pub fn perm(&self, id: ElemId) -> &Perm {
        &self.elements[id as usize]
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn id_of(&self, p: &Perm) -> Option<ElemId> {
        self.index.get(p).copied()
    }

    pub fn generators(&self) -> &[(String, ElemId)] {
        &self.gens
    }

    pub fn generator_ids(&self) -> Vec<ElemId> {
        self.gens.iter().map(|&(_, id)| id).collect()
    }

    #[inline]
    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        match &self.table {
            Some(t) => t[a as usize * self.elements.len() + b as usize],
            None => self.index[&self.elements[a as usize].compose(&self.elements[b as usize])],
        }
    }

    #[inline]
    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inv[a as usize]
    }

    /// Right conjugation `a^g = g^-1 a g`.
    #[inline]
    pub fn conj(&self, a: ElemId, g: ElemId) -> ElemId {
        self.mul(self.mul(self.inv(g), a), g)
    }

    pub fn commutator(&self, a: ElemId, b: ElemId) -> ElemId {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    #[inline]
    pub fn order_of(&self, a: ElemId) -> u32 {
        self.orders[a as usize]
    }

    pub fn power(&self, a: ElemId, k: i64) -> ElemId {
        let ord = self.orders[a as usize] as i64;
        let mut k = k.rem_euclid(ord);
        let mut acc = self.identity_id();
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Elements of order exactly 2, ascending.
    pub fn involutions(&self) -> Vec<ElemId> {
        (0..self.order() as ElemId).filter(|&e| self.orders[e as usize] == 2).collect()
    }

    pub fn is_abelian(&self) -> bool {
        // Generators pairwise commuting suffices.
        self.gens.iter().all(|&(_, a)| {
            self.gens.iter().all(|&(_, b)| self.mul(a, b) == self.mul(b, a))
        })
    }

    pub fn is_cyclic(&self) -> bool {
        let n = self.order() as u32;
        self.orders.contains(&n)
    }

    /// Smallest closed subset containing `seed` (and the identity).
    pub fn subgroup_generated(&self, seed: &[ElemId]) -> Subgroup {
        let n = self.order();
        for &s in seed {
            debug_assert!((s as usize) < n);
        }
        let mut mask = vec![false; n];
        mask[self.identity_id() as usize] = true;
        let mut queue: Vec<ElemId> = vec![self.identity_id()];
        let mut head = 0;
        while head < queue.len() {
            let e = queue[head];
            head += 1;
            for &s in seed {
                let next = self.mul(e, s);
                if !mask[next as usize] {
                    mask[next as usize] = true;
                    queue.push(next);
                }
            }
        }
        let mut members: Vec<ElemId> = queue;
        members.sort_unstable();
        Subgroup { parent_order: n, members, mask }
    }

    /// Extends subgroup `base` by the extra elements, reusing `base`'s
    /// members as a seed set (used heavily by triple enumeration).
    pub fn subgroup_extended(&self, base: &Subgroup, extra: &[ElemId]) -> Subgroup {
        let n = self.order();
        let mut mask = base.mask.clone();
        let mut queue: Vec<ElemId> = base.members.clone();
        for &e in extra {
            if !mask[e as usize] {
                mask[e as usize] = true;
                queue.push(e);
            }
        }
        // Close under multiplication by the original members plus the new
        // elements; since base is already a subgroup this reaches <base, extra>.
        let mut seed: Vec<ElemId> = base.members.clone();
        seed.extend_from_slice(extra);
        let mut head = 0;
        while head < queue.len() {
            let e = queue[head];
            head += 1;
            for &s in &seed {
                let next = self.mul(e, s);
                if !mask[next as usize] {
                    mask[next as usize] = true;
                    queue.push(next);
                }
            }
        }
        let mut members = queue;
        members.sort_unstable();
        Subgroup { parent_order: n, members, mask }
    }

    pub fn full_subgroup(&self) -> Subgroup {
        let n = self.order();
        Subgroup {
            parent_order: n,
            members: (0..n as ElemId).collect(),
            mask: vec![true; n],
        }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.subgroup_generated(&[])
    }

    fn check_subgroup(&self, h: &Subgroup) -> Result<()> {
        if h.parent_order != self.order() {
            return Err(Error::NotASubgroup(format!(
                "subgroup belongs to a group of order {}, not {}",
                h.parent_order,
                self.order()
            )));
        }
        if !self.order().is_multiple_of(h.order()) {
            return Err(Error::NotASubgroup("order does not divide group order".into()));
        }
        Ok(())
    }

    /// Left cosets `gH`, ordered by their minimal representatives.
    pub fn left_cosets(&self, h: &Subgroup) -> Result<CosetPartition> {
        self.check_subgroup(h)?;
        self.cosets_by(h, |g, s| self.mul(g, s))
    }

    /// Right cosets `Hg`, ordered by their minimal representatives.
    pub fn right_cosets(&self, h: &Subgroup) -> Result<CosetPartition> {
        self.check_subgroup(h)?;
        self.cosets_by(h, |g, s| self.mul(s, g))
    }

    fn cosets_by(
        &self,
        h: &Subgroup,
        product: impl Fn(ElemId, ElemId) -> ElemId,
    ) -> Result<CosetPartition> {
        let n = self.order();
        const UNASSIGNED: u32 = u32::MAX;
        let mut coset_of = vec![UNASSIGNED; n];
        let mut cosets = Vec::with_capacity(n / h.order());
        for g in 0..n as ElemId {
            if coset_of[g as usize] != UNASSIGNED {
                continue;
            }
            let k = cosets.len() as u32;
            let mut members: Vec<ElemId> = h.members.iter().map(|&s| product(g, s)).collect();
            members.sort_unstable();
            if members.iter().any(|&m| coset_of[m as usize] != UNASSIGNED) {
                return Err(Error::NotASubgroup("coset partition is inconsistent".into()));
            }
            for &m in &members {
                coset_of[m as usize] = k;
            }
            // Scanning ids in ascending order makes g minimal in its coset.
            debug_assert_eq!(members[0], g);
            cosets.push(Coset { rep: g, members });
        }
        Ok(CosetPartition { cosets, coset_of, subgroup_order: h.order() })
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.gens.iter().all(|&(_, g)| h.members.iter().all(|&x| h.contains(self.conj(x, g))))
    }

    /// Quotient by a normal subgroup, realized as permutations of the cosets
    /// of `n`, together with the projection homomorphism.
    pub fn quotient_group(&self, n: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
        self.check_subgroup(n)?;
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        // Right multiplication on right cosets is a genuine action under the
        // apply-left-first composition convention.
        let cosets = self.right_cosets(n)?;
        let k = cosets.cosets.len();
        let coset_perm = |e: ElemId| -> Result<Perm> {
            let images: Vec<u16> = cosets
                .cosets
                .iter()
                .map(|c| cosets.coset_of[self.mul(c.rep, e) as usize] as u16)
                .collect();
            Perm::from_images(images)
        };
        let labeled: Vec<(String, Perm)> = self
            .gens
            .iter()
            .map(|(label, id)| Ok((label.clone(), coset_perm(*id)?)))
            .collect::<Result<_>>()?;
        let quotient = FiniteGroup::closure_from_generators(k, &labeled, Some(k + 1))?;
        if quotient.order() != self.order() / n.order() {
            return Err(Error::NotASubgroup("quotient order mismatch".into()));
        }
        let mut map = Vec::with_capacity(self.order());
        for e in 0..self.order() as ElemId {
            let p = coset_perm(e)?;
            map.push(quotient.id_of(&p).ok_or(Error::NotAMember)?);
        }
        let gen_images: Vec<(String, ElemId, ElemId)> = self
            .gens
            .iter()
            .map(|(label, id)| (label.clone(), *id, map[*id as usize]))
            .collect();
        let hom = GroupHom::new(gen_images, map, self.order(), quotient.order());
        Ok((quotient, hom))
    }

    /// Conjugacy class index per element, plus the classes themselves.
    pub fn conjugacy_classes(&self) -> (Vec<u32>, Vec<Vec<ElemId>>) {
        let n = self.order();
        const UNASSIGNED: u32 = u32::MAX;
        let mut class_of = vec![UNASSIGNED; n];
        let mut classes = Vec::new();
        for e in 0..n as ElemId {
            if class_of[e as usize] != UNASSIGNED {
                continue;
            }
            let k = classes.len() as u32;
            let mut orbit = vec![e];
            class_of[e as usize] = k;
            let mut head = 0;
            while head < orbit.len() {
                let x = orbit[head];
                head += 1;
                for &(_, g) in &self.gens {
                    let y = self.conj(x, g);
                    if class_of[y as usize] == UNASSIGNED {
                        class_of[y as usize] = k;
                        orbit.push(y);
                    }
                }
            }
            orbit.sort_unstable();
            classes.push(orbit);
        }
        (class_of, classes)
    }
}

/// A subgroup of a materialized group, stored as a sorted member list plus a
/// membership mask. It records only the parent's order; operations that need
/// the parent take it explicitly and revalidate.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent_order: usize,
    members: Vec<ElemId>,
    mask: Vec<bool>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[ElemId] {
        &self.members
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    #[inline]
    pub fn contains(&self, e: ElemId) -> bool {
        self.mask[e as usize]
    }

    /// Intersection of two subgroups of the same parent.
    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        debug_assert_eq!(self.parent_order, other.parent_order);
        let members: Vec<ElemId> =
            self.members.iter().copied().filter(|&m| other.contains(m)).collect();
        let mut mask = vec![false; self.parent_order];
        for &m in &members {
            mask[m as usize] = true;
        }
        Subgroup { parent_order: self.parent_order, members, mask }
    }

    /// Set equality.
    pub fn same_set(&self, other: &Subgroup) -> bool {
        self.members == other.members
    }
}

/// One left (or right) coset: minimal representative plus sorted members.
#[derive(Clone, Debug)]
pub struct Coset {
    pub rep: ElemId,
    pub members: Vec<ElemId>,
}

/// A full coset partition; `coset_of[e]` is the index into `cosets`.
#[derive(Clone, Debug)]
pub struct CosetPartition {
    pub cosets: Vec<Coset>,
    pub coset_of: Vec<u32>,
    pub subgroup_order: usize,
}

impl CosetPartition {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }
}
