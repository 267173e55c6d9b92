//! Homomorphisms between materialized groups: automorphism enumeration and
//! isomorphism testing by generator-image backtracking.
//!
//! A candidate assignment of images to the source's generators is extended to
//! a total element map by breadth-first word propagation from the identity.
//! Checking `phi(e * g) = phi(e) * phi(g)` for every element `e` and every
//! generator `g` during that propagation is sufficient for multiplicativity:
//! any product decomposes into generator steps, and each step is one of the
//! checked edges.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{ElemId, FiniteGroup};

/// Default cap on the order of groups fed to automorphism and isomorphism
/// searches (overridable per call; the CLI maps `REVMAP_CAP` onto it).
pub const DEFAULT_AUT_CAP: usize = 500;

const UNSET: ElemId = ElemId::MAX;

/// A total homomorphism between two materialized groups, stored as the image
/// of every source element. An automorphism is a bijective `GroupHom` with
/// source and target the same group.
#[derive(Clone)]
pub struct GroupHom {
    /// (label, source element, image) for each source generator.
    gens: Vec<(String, ElemId, ElemId)>,
    map: Vec<ElemId>,
    source_order: usize,
    target_order: usize,
}

impl GroupHom {
    pub(crate) fn new(
        gens: Vec<(String, ElemId, ElemId)>,
        map: Vec<ElemId>,
        source_order: usize,
        target_order: usize,
    ) -> GroupHom {
        GroupHom { gens, map, source_order, target_order }
    }

    #[inline]
    pub fn apply(&self, e: ElemId) -> ElemId {
        self.map[e as usize]
    }

    pub fn map(&self) -> &[ElemId] {
        &self.map
    }

    pub fn generator_images(&self) -> &[(String, ElemId, ElemId)] {
        &self.gens
    }

    pub fn source_order(&self) -> usize {
        self.source_order
    }

    pub fn target_order(&self) -> usize {
        self.target_order
    }

    pub fn is_bijective(&self) -> bool {
        if self.source_order != self.target_order {
            return false;
        }
        let mut seen = vec![false; self.target_order];
        for &t in &self.map {
            if seen[t as usize] {
                return false;
            }
            seen[t as usize] = true;
        }
        true
    }

    /// Checks multiplicativity on all pairs when the source order is at most
    /// `exhaustive_limit`, otherwise on a deterministic pseudorandom sample
    /// of `exhaustive_limit^2` pairs.
    pub fn verify_multiplicative(
        &self,
        src: &FiniteGroup,
        tgt: &FiniteGroup,
        exhaustive_limit: usize,
    ) -> bool {
        let n = self.source_order;
        let ok = |a: ElemId, b: ElemId| {
            self.map[src.mul(a, b) as usize] == tgt.mul(self.map[a as usize], self.map[b as usize])
        };
        if n <= exhaustive_limit {
            (0..n as ElemId).all(|a| (0..n as ElemId).all(|b| ok(a, b)))
        } else {
            let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
            (0..exhaustive_limit * exhaustive_limit).all(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = ((state >> 33) as usize % n) as ElemId;
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let b = ((state >> 33) as usize % n) as ElemId;
                ok(a, b)
            })
        }
    }

    /// `self` followed by `then` (source of `then` = target of `self`).
    pub fn compose(&self, then: &GroupHom) -> GroupHom {
        debug_assert_eq!(self.target_order, then.source_order);
        let map: Vec<ElemId> = self.map.iter().map(|&m| then.map[m as usize]).collect();
        let gens = self
            .gens
            .iter()
            .map(|(l, s, i)| (l.clone(), *s, then.map[*i as usize]))
            .collect();
        GroupHom { gens, map, source_order: self.source_order, target_order: then.target_order }
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Option<GroupHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut map = vec![UNSET; self.source_order];
        for (e, &t) in self.map.iter().enumerate() {
            map[t as usize] = e as ElemId;
        }
        let gens = self
            .gens
            .iter()
            .map(|(l, s, _)| (l.clone(), *s, map[*s as usize]))
            .collect();
        Some(GroupHom {
            gens,
            map,
            source_order: self.target_order,
            target_order: self.source_order,
        })
    }
}

/// Extends generator images to a total map by word propagation; `None` on
/// conflict. The identity of each group has element id 0.
fn extend_by_words(
    src: &FiniteGroup,
    tgt: &FiniteGroup,
    gen_ids: &[ElemId],
    images: &[ElemId],
) -> Option<Vec<ElemId>> {
    let n = src.order();
    let mut map = vec![UNSET; n];
    map[0] = 0;
    let mut queue: Vec<ElemId> = Vec::with_capacity(n);
    queue.push(0);
    let mut head = 0;
    while head < queue.len() {
        let e = queue[head];
        head += 1;
        let me = map[e as usize];
        for (&g, &h) in gen_ids.iter().zip(images) {
            let s = src.mul(e, g);
            let t = tgt.mul(me, h);
            let slot = &mut map[s as usize];
            if *slot == UNSET {
                *slot = t;
                queue.push(s);
            } else if *slot != t {
                return None;
            }
        }
    }
    if queue.len() < n {
        // Generators failed to generate; cannot happen for groups built by
        // closure, but guard anyway.
        return None;
    }
    Some(map)
}

/// Extends images of an explicit generating set of `g` to the full element
/// map of an automorphism. `None` when the assignment is inconsistent with
/// the multiplication table, the given elements do not generate, or the
/// extension is not a bijection.
pub fn automorphism_from_images(
    g: &FiniteGroup,
    assignment: &[(ElemId, ElemId)],
) -> Option<Vec<ElemId>> {
    let gens: Vec<ElemId> = assignment.iter().map(|&(s, _)| s).collect();
    let images: Vec<ElemId> = assignment.iter().map(|&(_, t)| t).collect();
    let map = extend_by_words(g, g, &gens, &images)?;
    let mut seen = vec![false; map.len()];
    for &t in &map {
        if seen[t as usize] {
            return None;
        }
        seen[t as usize] = true;
    }
    Some(map)
}

/// (order, conjugacy class size) per element: preserved by isomorphisms, so
/// it prunes generator-image candidates.
fn signatures(g: &FiniteGroup) -> Vec<(u32, u32)> {
    let (class_of, classes) = g.conjugacy_classes();
    (0..g.order() as ElemId)
        .map(|e| (g.order_of(e), classes[class_of[e as usize] as usize].len() as u32))
        .collect()
}

fn search_homs(
    src: &FiniteGroup,
    tgt: &FiniteGroup,
    find_all: bool,
    out: &mut Vec<GroupHom>,
) {
    let gen_ids = src.generator_ids();
    let labels: Vec<String> =
        src.generators().iter().map(|(l, _)| l.clone()).collect();
    let src_sig = signatures(src);
    let tgt_sig = signatures(tgt);
    let candidates: Vec<Vec<ElemId>> = gen_ids
        .iter()
        .map(|&g| {
            (0..tgt.order() as ElemId)
                .filter(|&h| tgt_sig[h as usize] == src_sig[g as usize])
                .collect()
        })
        .collect();

    let mut chosen: Vec<ElemId> = Vec::with_capacity(gen_ids.len());

    #[allow(clippy::too_many_arguments)]
    fn rec(
        src: &FiniteGroup,
        tgt: &FiniteGroup,
        gen_ids: &[ElemId],
        labels: &[String],
        candidates: &[Vec<ElemId>],
        chosen: &mut Vec<ElemId>,
        find_all: bool,
        out: &mut Vec<GroupHom>,
    ) -> bool {
        let k = chosen.len();
        if k == gen_ids.len() {
            if let Some(map) = extend_by_words(src, tgt, gen_ids, chosen) {
                let hom = GroupHom::new(
                    labels
                        .iter()
                        .zip(gen_ids)
                        .zip(chosen.iter())
                        .map(|((l, &s), &i)| (l.clone(), s, i))
                        .collect(),
                    map,
                    src.order(),
                    tgt.order(),
                );
                if hom.is_bijective() {
                    out.push(hom);
                    if !find_all {
                        return true;
                    }
                }
            }
            return false;
        }
        'cand: for &c in &candidates[k] {
            // Orders of pairwise products must match; cheap and sharp.
            for (j, &prev) in chosen.iter().enumerate() {
                let a = src.order_of(src.mul(gen_ids[j], gen_ids[k]));
                let b = tgt.order_of(tgt.mul(prev, c));
                if a != b {
                    continue 'cand;
                }
            }
            chosen.push(c);
            let done =
                rec(src, tgt, gen_ids, labels, candidates, chosen, find_all, out);
            chosen.pop();
            if done {
                return true;
            }
        }
        false
    }

    rec(src, tgt, &gen_ids, &labels, &candidates, &mut chosen, find_all, out);
}

/// Complete list of automorphisms of `g`, in lexicographic order of their
/// generator-image tuples.
pub fn automorphism_group(g: &FiniteGroup, cap: Option<usize>) -> Result<Vec<GroupHom>> {
    let cap = cap.unwrap_or(DEFAULT_AUT_CAP);
    if g.order() > cap {
        return Err(Error::SearchCap { order: g.order(), cap });
    }
    let mut out = Vec::new();
    search_homs(g, g, true, &mut out);
    Ok(out)
}

/// Isomorphism witness between `g` and `h`, or `None`.
pub fn is_isomorphic(
    g: &FiniteGroup,
    h: &FiniteGroup,
    cap: Option<usize>,
) -> Result<Option<GroupHom>> {
    let cap = cap.unwrap_or(DEFAULT_AUT_CAP);
    if g.order() > cap || h.order() > cap {
        return Err(Error::SearchCap { order: g.order().max(h.order()), cap });
    }
    if g.order() != h.order() {
        return Ok(None);
    }
    // Order statistics and class-size statistics must agree.
    let mut sig_g = signatures(g);
    let mut sig_h = signatures(h);
    sig_g.sort_unstable();
    sig_h.sort_unstable();
    if sig_g != sig_h {
        return Ok(None);
    }
    let mut out = Vec::new();
    search_homs(g, h, false, &mut out);
    Ok(out.into_iter().next())
}

/// Index automorphisms by their full element map, for certificate
/// composition lookups.
pub fn hom_index(autos: &[GroupHom]) -> HashMap<Vec<ElemId>, usize> {
    autos.iter().enumerate().map(|(i, a)| (a.map().to_vec(), i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    fn group(gens: &[(&str, &str)], degree: usize) -> FiniteGroup {
        let labeled: Vec<(String, Perm)> = gens
            .iter()
            .map(|(l, c)| (l.to_string(), Perm::parse_cycles(c, Some(degree)).unwrap()))
            .collect();
        FiniteGroup::closure_from_generators(degree, &labeled, None).unwrap()
    }

    #[test]
    fn klein_four_has_six_automorphisms() {
        let g = group(&[("a", "(0 1)"), ("b", "(2 3)")], 4);
        assert_eq!(g.order(), 4);
        let autos = automorphism_group(&g, None).unwrap();
        assert_eq!(autos.len(), 6);
        for a in &autos {
            assert!(a.is_bijective());
            assert!(a.verify_multiplicative(&g, &g, 200));
        }
    }

    #[test]
    fn cyclic_five_has_four_automorphisms() {
        let g = group(&[("g", "(0 1 2 3 4)")], 5);
        let autos = automorphism_group(&g, None).unwrap();
        assert_eq!(autos.len(), 4);
    }

    #[test]
    fn sym3_has_six_automorphisms_and_matches_itself() {
        let g = group(&[("r", "(0 1 2)"), ("t", "(1 2)")], 3);
        let autos = automorphism_group(&g, None).unwrap();
        assert_eq!(autos.len(), 6);
        let h = group(&[("x", "(0 1)"), ("y", "(0 2)")], 3);
        let w = is_isomorphic(&g, &h, None).unwrap().expect("iso");
        assert!(w.verify_multiplicative(&g, &h, 200));
    }

    #[test]
    fn dihedral8_vs_quaternion_is_refuted_by_statistics() {
        let d8 = group(&[("g", "(0 1 2 3)"), ("h", "(1 3)")], 4);
        let li = Perm::from_images(vec![2, 3, 1, 0, 6, 7, 5, 4]).unwrap();
        let lj = Perm::from_images(vec![4, 5, 7, 6, 1, 0, 2, 3]).unwrap();
        let q8 = FiniteGroup::closure_from_generators(
            8,
            &[("i".into(), li), ("j".into(), lj)],
            None,
        )
        .unwrap();
        assert_eq!(d8.order(), 8);
        assert_eq!(q8.order(), 8);
        assert!(is_isomorphic(&d8, &q8, None).unwrap().is_none());
    }

    #[test]
    fn aut_cap_is_enforced() {
        let g = group(&[("g", "(0 1 2 3 4 5 6)")], 7);
        assert!(matches!(
            automorphism_group(&g, Some(5)),
            Err(Error::SearchCap { order: 7, cap: 5 })
        ));
    }

    #[test]
    fn compose_and_inverse_of_automorphisms() {
        let g = group(&[("a", "(0 1)"), ("b", "(2 3)")], 4);
        let autos = automorphism_group(&g, None).unwrap();
        let idx = hom_index(&autos);
        for a in &autos {
            let inv = a.inverse().expect("bijective");
            let round = a.compose(&inv);
            assert!(idx.contains_key(round.map()));
            assert!((0..g.order() as ElemId).all(|e| round.apply(e) == e));
        }
    }
}
