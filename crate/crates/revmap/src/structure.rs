//! Structural predicates: Sylow subgroups, the largest normal 2-subgroup,
//! cyclic/dihedral/abelian/solvable recognition, and the almost-Sylow-cyclic
//! test (every odd Sylow subgroup cyclic, every Sylow 2-subgroup with an
//! index-2 cyclic subgroup).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{ElemId, FiniteGroup, Subgroup};

/// Shape tag for one Sylow subgroup.
#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "kebab-case")]
pub enum SylowShape {
    Cyclic,
    /// Dihedral in the order-2n sense; the Klein four group counts (order 4).
    Dihedral,
    /// Not cyclic or dihedral, but containing an index-2 cyclic subgroup
    /// (e.g. quaternion or semidihedral 2-groups).
    Index2Cyclic,
    Other,
}

#[derive(Serialize, Clone, Debug)]
pub struct SylowInfo {
    pub p: u64,
    pub order: usize,
    pub shape: SylowShape,
}

#[derive(Serialize, Clone, Debug)]
pub struct StructureReport {
    pub order: usize,
    pub primes: Vec<u64>,
    pub is_cyclic: bool,
    pub is_dihedral: bool,
    pub is_abelian: bool,
    pub is_solvable: bool,
    pub is_almost_sylow_cyclic: bool,
    pub sylow: Vec<SylowInfo>,
    /// Order of the largest normal 2-subgroup.
    pub o2_order: usize,
}

pub fn factorize(mut n: usize) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2usize;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n as u64, 1));
    }
    out
}

fn p_part(order: usize, p: u64) -> usize {
    let mut part = 1usize;
    let mut n = order;
    while n.is_multiple_of(p as usize) {
        n /= p as usize;
        part *= p as usize;
    }
    part
}

fn is_p_power(mut n: usize, p: u64) -> bool {
    while n.is_multiple_of(p as usize) {
        n /= p as usize;
    }
    n == 1
}

/// A Sylow p-subgroup, found by greedy growth: start from a p-element of
/// maximal order and repeatedly adjoin a normalizing p-element (one always
/// exists below full size, since the normalizer of a strict p-subgroup
/// contains a strictly larger p-subgroup). A bounded fallback over single
/// extensions guards the greedy step, and the result is certified by the
/// order check against the p-part of |G|.
///
/// When p does not divide |G| the trivial subgroup is returned.
pub fn sylow_subgroup(g: &FiniteGroup, p: u64) -> Result<Subgroup> {
    let target = p_part(g.order(), p);
    if target == 1 {
        return Ok(g.trivial_subgroup());
    }
    let p_elements: Vec<ElemId> = (1..g.order() as ElemId)
        .filter(|&e| is_p_power(g.order_of(e) as usize, p) && g.order_of(e) > 1)
        .collect();
    let seed = *p_elements
        .iter()
        .max_by_key(|&&e| (g.order_of(e), std::cmp::Reverse(e)))
        .ok_or(Error::SylowSearch { p, reached: 1, wanted: target })?;
    let mut sylow = g.subgroup_generated(&[seed]);
    while sylow.order() < target {
        let normalizing = p_elements.iter().copied().find(|&t| {
            !sylow.contains(t) && sylow.members().iter().all(|&m| sylow.contains(g.conj(m, t)))
        });
        let grown = match normalizing {
            Some(t) => g.subgroup_extended(&sylow, &[t]),
            None => {
                // Fallback: any extension that stays a p-group.
                let candidate = p_elements.iter().copied().find_map(|t| {
                    if sylow.contains(t) {
                        return None;
                    }
                    let ext = g.subgroup_extended(&sylow, &[t]);
                    (is_p_power(ext.order(), p) && ext.order() > sylow.order()).then_some(ext)
                });
                candidate.ok_or(Error::SylowSearch { p, reached: sylow.order(), wanted: target })?
            }
        };
        sylow = grown;
    }
    if sylow.order() != target {
        return Err(Error::SylowSearch { p, reached: sylow.order(), wanted: target });
    }
    Ok(sylow)
}

/// Largest normal 2-subgroup: the intersection of all conjugates of one
/// Sylow 2-subgroup.
pub fn o2_subgroup(g: &FiniteGroup) -> Result<Subgroup> {
    if !g.order().is_multiple_of(2) {
        return Ok(g.trivial_subgroup());
    }
    let sylow = sylow_subgroup(g, 2)?;
    let mut core = sylow.clone();
    for c in 0..g.order() as ElemId {
        if core.order() == 1 {
            break;
        }
        let conjugate_members: Vec<ElemId> =
            sylow.members().iter().map(|&m| g.conj(m, c)).collect();
        let mut mask = vec![false; g.order()];
        for &m in &conjugate_members {
            mask[m as usize] = true;
        }
        let members: Vec<ElemId> =
            core.members().iter().copied().filter(|&m| mask[m as usize]).collect();
        core = g.subgroup_generated(&members);
    }
    Ok(core)
}

pub fn subgroup_is_cyclic(g: &FiniteGroup, sub: &Subgroup) -> bool {
    sub.members().iter().any(|&m| g.order_of(m) as usize == sub.order())
}

/// Dihedral of order 2n: a cyclic subgroup of order n inverted by an outside
/// involution. Matching the order-2n convention, the Klein four group is
/// dihedral (n = 2) and the order-2 group is allowed as the degenerate n = 1.
pub fn subgroup_is_dihedral(g: &FiniteGroup, sub: &Subgroup) -> bool {
    let order = sub.order();
    if !order.is_multiple_of(2) {
        return false;
    }
    let half = order / 2;
    for &c in sub.members() {
        if g.order_of(c) as usize != half {
            continue;
        }
        let cyc = g.subgroup_generated(&[c]);
        let inverted = sub.members().iter().any(|&t| {
            g.order_of(t) <= 2 && t != g.identity_id() && !cyc.contains(t)
                && g.conj(c, t) == g.inv(c)
        });
        if inverted {
            return true;
        }
    }
    false
}

/// Coarse shape tag used when reporting cell stabilizers.
#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "kebab-case")]
pub enum SubgroupShape {
    Trivial,
    Cyclic,
    Dihedral,
    Other,
}

pub fn subgroup_shape(g: &FiniteGroup, sub: &Subgroup) -> SubgroupShape {
    if sub.order() == 1 {
        SubgroupShape::Trivial
    } else if subgroup_is_cyclic(g, sub) {
        SubgroupShape::Cyclic
    } else if subgroup_is_dihedral(g, sub) {
        SubgroupShape::Dihedral
    } else {
        SubgroupShape::Other
    }
}

pub fn subgroup_has_index2_cyclic(g: &FiniteGroup, sub: &Subgroup) -> bool {
    let order = sub.order();
    order.is_multiple_of(2) && sub.members().iter().any(|&m| g.order_of(m) as usize * 2 == order)
}

/// Subgroup generated by all commutators of `sub`.
pub fn derived_subgroup(g: &FiniteGroup, sub: &Subgroup) -> Subgroup {
    let mut seen = vec![false; g.order()];
    let mut seed = Vec::new();
    for &a in sub.members() {
        for &b in sub.members() {
            let c = g.commutator(a, b);
            if !seen[c as usize] {
                seen[c as usize] = true;
                seed.push(c);
            }
        }
    }
    g.subgroup_generated(&seed)
}

/// Solvability via the derived series reaching the trivial subgroup.
pub fn is_solvable(g: &FiniteGroup) -> bool {
    let mut current = g.full_subgroup();
    loop {
        if current.order() == 1 {
            return true;
        }
        let next = derived_subgroup(g, &current);
        if next.order() == current.order() {
            return false;
        }
        current = next;
    }
}

pub fn is_dihedral_group(g: &FiniteGroup) -> bool {
    subgroup_is_dihedral(g, &g.full_subgroup())
}

pub fn structure_report(g: &FiniteGroup) -> Result<StructureReport> {
    let order = g.order();
    let factors = factorize(order);
    let primes: Vec<u64> = factors.iter().map(|&(p, _)| p).collect();
    let mut sylow = Vec::new();
    let mut almost = true;
    for &(p, _) in &factors {
        let s = sylow_subgroup(g, p)?;
        let shape = if subgroup_is_cyclic(g, &s) {
            SylowShape::Cyclic
        } else if subgroup_is_dihedral(g, &s) {
            SylowShape::Dihedral
        } else if subgroup_has_index2_cyclic(g, &s) {
            SylowShape::Index2Cyclic
        } else {
            SylowShape::Other
        };
        if p == 2 {
            // Cyclic, dihedral, and index-2-cyclic 2-groups all contain an
            // index-2 cyclic subgroup (order 2 degenerately so).
            let ok = s.order() == 2 || subgroup_has_index2_cyclic(g, &s);
            almost &= ok;
        } else {
            almost &= shape == SylowShape::Cyclic;
        }
        sylow.push(SylowInfo { p, order: s.order(), shape });
    }
    Ok(StructureReport {
        order,
        primes,
        is_cyclic: g.is_cyclic(),
        is_dihedral: is_dihedral_group(g),
        is_abelian: g.is_abelian(),
        is_solvable: is_solvable(g),
        is_almost_sylow_cyclic: almost,
        sylow,
        o2_order: o2_subgroup(g)?.order(),
    })
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

    fn sym4() -> FiniteGroup {
        group(&[("r", "(0 1 2 3)"), ("t", "(0 1)")], 4)
    }

    #[test]
    fn sylow_orders_are_exact_p_parts() {
        let g = sym4();
        assert_eq!(g.order(), 24);
        assert_eq!(sylow_subgroup(&g, 2).unwrap().order(), 8);
        assert_eq!(sylow_subgroup(&g, 3).unwrap().order(), 3);
        assert_eq!(sylow_subgroup(&g, 5).unwrap().order(), 1);
    }

    #[test]
    fn sylow2_of_sym4_is_dihedral() {
        let g = sym4();
        let s = sylow_subgroup(&g, 2).unwrap();
        assert!(subgroup_is_dihedral(&g, &s));
        assert!(!subgroup_is_cyclic(&g, &s));
        assert!(subgroup_has_index2_cyclic(&g, &s));
    }

    #[test]
    fn o2_of_sym4_is_the_klein_four_group() {
        let g = sym4();
        let core = o2_subgroup(&g).unwrap();
        assert_eq!(core.order(), 4);
        assert!(g.is_normal(&core));
    }

    #[test]
    fn derived_series_of_sym4_is_a4_then_v4_then_trivial() {
        let g = sym4();
        let d1 = derived_subgroup(&g, &g.full_subgroup());
        assert_eq!(d1.order(), 12);
        let d2 = derived_subgroup(&g, &d1);
        assert_eq!(d2.order(), 4);
        let d3 = derived_subgroup(&g, &d2);
        assert_eq!(d3.order(), 1);
        assert!(is_solvable(&g));
    }

    #[test]
    fn elementary_abelian_eight_is_not_almost_sylow_cyclic() {
        let g = group(&[("a", "(0 1)"), ("b", "(2 3)"), ("c", "(4 5)")], 6);
        assert_eq!(g.order(), 8);
        let report = structure_report(&g).unwrap();
        assert!(!report.is_almost_sylow_cyclic);
        assert!(report.is_abelian);
        assert_eq!(report.o2_order, 8);
        assert_eq!(report.sylow[0].shape, SylowShape::Other);
    }

    #[test]
    fn klein_four_counts_as_dihedral() {
        let g = group(&[("a", "(0 1)"), ("b", "(2 3)")], 4);
        assert!(is_dihedral_group(&g));
        let report = structure_report(&g).unwrap();
        assert!(report.is_almost_sylow_cyclic);
        assert_eq!(report.sylow[0].shape, SylowShape::Dihedral);
    }

    #[test]
    fn quaternion_sylow_tag_is_index2_cyclic() {
        let li = Perm::from_images(vec![2, 3, 1, 0, 6, 7, 5, 4]).unwrap();
        let lj = Perm::from_images(vec![4, 5, 7, 6, 1, 0, 2, 3]).unwrap();
        let q8 = FiniteGroup::closure_from_generators(
            8,
            &[("i".into(), li), ("j".into(), lj)],
            None,
        )
        .unwrap();
        let report = structure_report(&q8).unwrap();
        assert_eq!(report.sylow[0].shape, SylowShape::Index2Cyclic);
        assert!(report.is_almost_sylow_cyclic);
        assert!(!report.is_dihedral);
    }

    #[test]
    fn sym4_report() {
        let report = structure_report(&sym4()).unwrap();
        assert_eq!(report.primes, vec![2, 3]);
        assert!(report.is_solvable);
        assert!(!report.is_abelian);
        assert!(!report.is_cyclic);
        assert!(!report.is_dihedral);
        // Sylow 2 is dihedral of order 8, Sylow 3 cyclic: S4 is almost
        // Sylow-cyclic.
        assert!(report.is_almost_sylow_cyclic);
        assert_eq!(report.o2_order, 4);
    }

    #[test]
    fn factorize_small_numbers() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(60), vec![(2, 2), (3, 1), (5, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
    }
}
