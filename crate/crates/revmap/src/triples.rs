//! Enumeration of reversing triples and their equivalence classes. Two
//! triples give isomorphic maps exactly when an automorphism carries one to
//! the other, allowing a swap of the first two entries for the two
//! non-regular kinds; regular map isomorphism requires the exact ordered
//! match, so no swap is allowed there.

use std::collections::HashMap;

use crate::error::Result;
use crate::group::{ElemId, FiniteGroup};
use crate::hom::{automorphism_group, hom_index, GroupHom};
use crate::map::{euler_characteristic, is_coprime_pair, MapKind, ReversingTriple};

/// All valid ordered reversing triples of the given kind, in lexicographic
/// order. Generation checks reuse memoized subgroup closures keyed by the
/// entry set.
pub fn enumerate_reversing_triples(g: &FiniteGroup, kind: MapKind) -> Vec<ReversingTriple> {
    let invs = g.involutions();
    let full = g.order();
    let mut set_generates: HashMap<Vec<ElemId>, bool> = HashMap::new();
    let mut out = Vec::new();
    for &x in &invs {
        for &y in &invs {
            let pair = g.subgroup_generated(&[x, y]);
            let pair_full = pair.order() == full;
            for &z in &invs {
                if x == y && y == z {
                    continue;
                }
                if kind == MapKind::Reg && g.mul(y, z) != g.mul(z, y) {
                    continue;
                }
                let generates = if pair_full {
                    true
                } else if pair.contains(z) {
                    false
                } else {
                    let mut key = vec![x, y, z];
                    key.sort_unstable();
                    key.dedup();
                    *set_generates
                        .entry(key)
                        .or_insert_with(|| g.subgroup_extended(&pair, &[z]).order() == full)
                };
                if generates {
                    out.push(ReversingTriple::new(x, y, z));
                }
            }
        }
    }
    out
}

/// Certificate that a class member maps to its class representative:
/// apply the indexed automorphism, then swap the first two entries if
/// `swapped` is set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TripleCert {
    pub auto_index: usize,
    pub swapped: bool,
}

#[derive(Clone, Debug)]
pub struct EquivalenceClass {
    /// Lexicographically least member.
    pub representative: ReversingTriple,
    /// All members, sorted.
    pub members: Vec<ReversingTriple>,
    /// Parallel to `members`: certificate carrying that member to the
    /// representative.
    pub certificates: Vec<TripleCert>,
}

pub fn apply_auto(auto: &GroupHom, t: ReversingTriple) -> ReversingTriple {
    ReversingTriple::new(auto.apply(t.x), auto.apply(t.y), auto.apply(t.z))
}

pub fn apply_cert(autos: &[GroupHom], cert: TripleCert, t: ReversingTriple) -> ReversingTriple {
    let image = apply_auto(&autos[cert.auto_index], t);
    if cert.swapped {
        image.swapped()
    } else {
        image
    }
}

/// Group the triples into equivalence classes under the automorphism group
/// (and the swap move for non-regular kinds). The input is assumed closed
/// under the action, which holds for any set cut out by invariant
/// conditions (validity, Euler characteristic, the coprime filter).
pub fn equivalence_classes(
    g: &FiniteGroup,
    kind: MapKind,
    triples: &[ReversingTriple],
    cap: Option<usize>,
) -> Result<Vec<EquivalenceClass>> {
    let autos = automorphism_group(g, cap)?;
    let index = hom_index(&autos);
    let inverse_index: Vec<usize> = autos
        .iter()
        .map(|a| index[a.inverse().expect("automorphisms invert").map()])
        .collect();
    let position: HashMap<ReversingTriple, usize> =
        triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let swaps: &[bool] = if kind == MapKind::Reg { &[false] } else { &[false, true] };
    let mut visited = vec![false; triples.len()];
    let mut classes = Vec::new();
    for (i, &rep) in triples.iter().enumerate() {
        if visited[i] {
            continue;
        }
        // The action group is exactly { automorphism x optional swap }, so
        // the whole orbit is the one-step image set of the representative.
        let mut members: Vec<(ReversingTriple, TripleCert)> = Vec::new();
        for (j, auto) in autos.iter().enumerate() {
            let image = apply_auto(auto, rep);
            for &s in swaps {
                let t = if s { image.swapped() } else { image };
                if let Some(&p) = position.get(&t) {
                    if !visited[p] {
                        visited[p] = true;
                        // rep -> t used auto j and swap s; the certificate
                        // stores the inverse direction t -> rep.
                        members.push((t, TripleCert { auto_index: inverse_index[j], swapped: s }));
                    }
                } else {
                    debug_assert!(false, "orbit image {t:?} missing from the input triple set");
                }
            }
        }
        members.sort_by_key(|&(t, _)| t);
        debug_assert_eq!(members[0].0, rep, "scan order makes the start the lex minimum");
        classes.push(EquivalenceClass {
            representative: rep,
            members: members.iter().map(|&(t, _)| t).collect(),
            certificates: members.iter().map(|&(_, c)| c).collect(),
        });
    }
    Ok(classes)
}

/// A certificate mapping `a` to `b` if the two triples are equivalent for
/// this kind, or None.
pub fn equivalent_triples(
    kind: MapKind,
    autos: &[GroupHom],
    a: ReversingTriple,
    b: ReversingTriple,
) -> Option<TripleCert> {
    let swaps: &[bool] = if kind == MapKind::Reg { &[false] } else { &[false, true] };
    for (j, auto) in autos.iter().enumerate() {
        let image = apply_auto(auto, a);
        for &s in swaps {
            let t = if s { image.swapped() } else { image };
            if t == b {
                return Some(TripleCert { auto_index: j, swapped: s });
            }
        }
    }
    None
}

/// Keep the triples whose map passes the coprimality filter on the Euler
/// characteristic and edge count.
pub fn coprime_filter(
    g: &FiniteGroup,
    kind: MapKind,
    triples: &[ReversingTriple],
) -> Result<Vec<ReversingTriple>> {
    let mut out = Vec::new();
    for &t in triples {
        let (chi, edges) = euler_characteristic(g, kind, t)?;
        if is_coprime_pair(chi, edges) {
            out.push(t);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{dihedral, s4_cover};
    use crate::map::make_reversing_triple;

    #[test]
    fn dihedral_triple_count_matches_arithmetic() {
        // In the dihedral group of order 18 the involutions are the nine
        // reflections g^a h; a triple generates exactly when
        // gcd(a - b, b - c, 9) = 1. Counting pairs of differences not both
        // divisible by 3 gives 9 * (81 - 9) = 648.
        let lg = dihedral(9).unwrap();
        let triples = enumerate_reversing_triples(&lg.group, MapKind::Rev);
        assert_eq!(triples.len(), 648);
        let mut sorted = triples.clone();
        sorted.sort_unstable();
        assert_eq!(triples, sorted, "enumeration is lexicographic");
    }

    #[test]
    fn regular_enumeration_respects_commutation() {
        let lg = s4_cover(3).unwrap();
        let triples = enumerate_reversing_triples(&lg.group, MapKind::Reg);
        assert!(!triples.is_empty());
        for t in &triples {
            assert_eq!(
                lg.group.mul(t.y, t.z),
                lg.group.mul(t.z, t.y),
                "regular triples commute in the last two entries"
            );
            assert!(make_reversing_triple(&lg.group, MapKind::Reg, t.x, t.y, t.z).is_ok());
        }
    }

    #[test]
    fn classes_partition_and_certify() {
        let lg = dihedral(9).unwrap();
        let g = &lg.group;
        let triples = enumerate_reversing_triples(g, MapKind::Rev);
        let classes = equivalence_classes(g, MapKind::Rev, &triples, None).unwrap();
        let autos = automorphism_group(g, None).unwrap();
        let total: usize = classes.iter().map(|c| c.members.len()).sum();
        assert_eq!(total, triples.len(), "classes partition the triples");
        for class in &classes {
            assert_eq!(class.representative, *class.members.iter().min().unwrap());
            for (&m, &cert) in class.members.iter().zip(&class.certificates) {
                assert_eq!(
                    apply_cert(&autos, cert, m),
                    class.representative,
                    "certificate rewrites the member to the representative"
                );
            }
        }
    }

    #[test]
    fn swap_joins_classes_for_rev_but_not_reg() {
        let lg = s4_cover(3).unwrap();
        let g = &lg.group;
        let autos = automorphism_group(g, None).unwrap();
        let a = ReversingTriple::new(
            lg.element("v").unwrap(),
            lg.element("hv").unwrap(),
            lg.element("w2").unwrap(),
        );
        let cert = equivalent_triples(MapKind::Rev, &autos, a, a.swapped())
            .expect("swapped triples are equivalent for the reversing kind");
        assert_eq!(apply_cert(&autos, cert, a), a.swapped());
    }

    #[test]
    fn coprime_filter_on_dihedral_examples() {
        let lg = dihedral(9).unwrap();
        let g = &lg.group;
        let pass = ReversingTriple::new(
            lg.element("h").unwrap(),
            lg.element("gh").unwrap(),
            lg.element("g3h").unwrap(),
        );
        let fail = ReversingTriple::new(
            lg.element("h").unwrap(),
            lg.element("gh").unwrap(),
            lg.element("g2h").unwrap(),
        );
        let kept = coprime_filter(g, MapKind::Rev, &[pass, fail]).unwrap();
        assert_eq!(kept, vec![pass], "chi -4 vs 9 edges passes, chi -6 does not");
    }
}
