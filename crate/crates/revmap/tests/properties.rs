//! Randomized properties: map measurements are orbit functions of the
//! equivalence action, certificates and witnesses verify, the dihedral
//! closed forms hold across all parameters, the classifier gates agree
//! with the filter, and flag systems stay well formed off the curated
//! corpus.

use std::sync::OnceLock;

use num_integer::Integer;
use proptest::prelude::*;
use revmap::triples::{apply_auto, apply_cert};
use revmap::{
    automorphism_group, build_map, classify_map, dihedral, dihedral_discriminants,
    enumerate_reversing_triples, equivalent_triples, flag_system, make_reversing_triple,
    map_invariants, match_canonical_form, parse_group_spec, system_orientable, verify_witness,
    CanonicalForm, LabeledGroup, MapClass, MapKind, ReversingTriple,
};

/// Random valid triple of the kind, by rejection over involution picks.
fn pick_triple(
    lg: &LabeledGroup,
    kind: MapKind,
    picks: &[prop::sample::Index; 3],
) -> Option<ReversingTriple> {
    let invs = lg.group.involutions();
    let [x, y, z] = picks.each_ref().map(|p| invs[p.index(invs.len())]);
    make_reversing_triple(&lg.group, kind, x, y, z).ok()
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn rev_triples(spec: &'static str) -> &'static (LabeledGroup, Vec<ReversingTriple>) {
    static PRODUCT: OnceLock<(LabeledGroup, Vec<ReversingTriple>)> = OnceLock::new();
    static COVER: OnceLock<(LabeledGroup, Vec<ReversingTriple>)> = OnceLock::new();
    let cell = match spec {
        "DxD:3,5" => &PRODUCT,
        "S4C:3" => &COVER,
        other => panic!("no fixture for {other}"),
    };
    cell.get_or_init(|| {
        let lg = parse_group_spec(spec).expect("fixture spec parses");
        let triples = enumerate_reversing_triples(&lg.group, MapKind::Rev);
        (lg, triples)
    })
}

fn regular_cover_triples() -> &'static (LabeledGroup, Vec<ReversingTriple>) {
    static REG: OnceLock<(LabeledGroup, Vec<ReversingTriple>)> = OnceLock::new();
    REG.get_or_init(|| {
        let lg = parse_group_spec("S4C:3").expect("fixture spec parses");
        let triples = enumerate_reversing_triples(&lg.group, MapKind::Reg);
        (lg, triples)
    })
}

proptest! {
    /// Applying any automorphism (and, for the non-regular kinds, the
    /// swap of the symmetric slots) preserves every measured invariant.
    #[test]
    fn measurements_are_orbit_functions(
        n in 3usize..=12,
        picks in prop::array::uniform3(any::<prop::sample::Index>()),
        auto_pick in any::<prop::sample::Index>(),
        swap in any::<bool>(),
        birev in any::<bool>(),
    ) {
        let kind = if birev { MapKind::BiRev } else { MapKind::Rev };
        let lg = dihedral(n).unwrap();
        let g = &lg.group;
        let Some(t) = pick_triple(&lg, kind, &picks) else { return Ok(()) };
        let autos = automorphism_group(g, None).unwrap();
        let auto = &autos[auto_pick.index(autos.len())];
        let mut u = apply_auto(auto, t);
        if swap {
            u = u.swapped();
        }
        // The action stays inside the valid triples.
        prop_assert!(make_reversing_triple(g, kind, u.x, u.y, u.z).is_ok());
        let a = map_invariants(g, &build_map(g, kind, t).unwrap());
        let b = map_invariants(g, &build_map(g, kind, u).unwrap());
        prop_assert_eq!(a.chi, b.chi);
        prop_assert_eq!(a.num_vertices, b.num_vertices);
        prop_assert_eq!(a.num_edges, b.num_edges);
        prop_assert_eq!(a.num_faces, b.num_faces);
        prop_assert_eq!(sorted(a.face_class_sizes), sorted(b.face_class_sizes));
        prop_assert_eq!(a.orientable, b.orientable);
        prop_assert_eq!(a.coprime, b.coprime);
    }

    /// The equivalence search finds every constructed equivalent, and the
    /// certificate it returns rewrites one triple onto the other through a
    /// genuine automorphism.
    #[test]
    fn certificates_witness_equivalence(
        n in 3usize..=12,
        picks in prop::array::uniform3(any::<prop::sample::Index>()),
        auto_pick in any::<prop::sample::Index>(),
        swap in any::<bool>(),
    ) {
        let lg = dihedral(n).unwrap();
        let g = &lg.group;
        let Some(t) = pick_triple(&lg, MapKind::Rev, &picks) else { return Ok(()) };
        let autos = automorphism_group(g, None).unwrap();
        let auto = &autos[auto_pick.index(autos.len())];
        let mut u = apply_auto(auto, t);
        if swap {
            u = u.swapped();
        }
        let cert = equivalent_triples(MapKind::Rev, &autos, t, u);
        prop_assert!(cert.is_some(), "constructed equivalent not found");
        let cert = cert.unwrap();
        prop_assert_eq!(apply_cert(&autos, cert, t), u);
        let hom = &autos[cert.auto_index];
        prop_assert!(hom.is_bijective());
        prop_assert!(hom.verify_multiplicative(g, g, 64));
    }

    /// The closed-form cell counts hold for every generating exponent pair,
    /// odd or even order, and the coprimality discriminant agrees with the
    /// built map's filter flag.
    #[test]
    fn dihedral_closed_forms_hold_everywhere(
        (n, i, j) in (3i64..=30).prop_flat_map(|n| (Just(n), 0..n, 0..n)),
    ) {
        prop_assume!(i.gcd(&j).gcd(&n) == 1);
        let lg = dihedral(n as usize).unwrap();
        let g = &lg.group;
        let (rot, h) = (lg.labels["g"], lg.labels["h"]);
        let refl = |e: i64| g.mul(g.power(rot, e), h);
        let forms = dihedral_discriminants(n as u64, i, j);
        let cases = [
            (MapKind::Rev, forms.chi_rev, forms.delta_rev),
            (MapKind::BiRev, forms.chi_birev, forms.delta_birev),
        ];
        for (kind, chi, delta) in cases {
            let t = make_reversing_triple(g, kind, h, refl(i), refl(j)).unwrap();
            let map = build_map(g, kind, t).unwrap();
            prop_assert_eq!(map.chi(), chi);
            prop_assert_eq!(map.num_edges(), n as usize);
            prop_assert_eq!(map_invariants(g, &map).coprime, delta == 1);
        }
    }

    /// Gate order of the classifier: the coprime filter knocks a reversing
    /// map out first, then smallness; everything else on a dihedral group
    /// lands in the dihedral class with all checks green and a verified
    /// witness.
    #[test]
    fn classifier_gates_follow_the_filter(
        n in 3usize..=10,
        picks in prop::array::uniform3(any::<prop::sample::Index>()),
    ) {
        let lg = dihedral(n).unwrap();
        let g = &lg.group;
        let Some(t) = pick_triple(&lg, MapKind::Rev, &picks) else { return Ok(()) };
        let c = classify_map(&lg, MapKind::Rev, t).unwrap();
        let inv = &c.invariants;
        if !inv.coprime {
            prop_assert_eq!(c.class, MapClass::Unmatched);
            prop_assert!(c.reason.as_deref().unwrap_or("").contains("coprime"));
        } else if inv.num_vertices < 3 || inv.num_faces < 3 {
            prop_assert_eq!(c.class, MapClass::Small);
        } else {
            prop_assert_eq!(c.class, MapClass::Dihedral);
            prop_assert!(c.checks.iter().all(|(_, ok)| *ok), "checks: {:?}", c.checks);
            let w = c.tag.witness.as_ref().expect("matched triples carry a witness");
            prop_assert!(verify_witness(g, t, w));
        }
    }

    /// Flag systems built off the curated corpus keep their defining shape:
    /// 4|E| flags, three fixed-point-free partner involutions, orbits
    /// recovering the cell counts, and odd characteristic forcing a
    /// one-sided surface.
    #[test]
    fn flag_systems_stay_well_formed(
        n in 3usize..=12,
        picks in prop::array::uniform3(any::<prop::sample::Index>()),
        birev in any::<bool>(),
    ) {
        let kind = if birev { MapKind::BiRev } else { MapKind::Rev };
        let lg = dihedral(n).unwrap();
        let g = &lg.group;
        let Some(t) = pick_triple(&lg, kind, &picks) else { return Ok(()) };
        let map = build_map(g, kind, t).unwrap();
        let fs = flag_system(g, &map).unwrap();
        prop_assert_eq!(fs.len(), 4 * map.num_edges());
        for sigma in [&fs.sigma_v, &fs.sigma_e, &fs.sigma_f] {
            prop_assert!(sigma.iter().enumerate().all(|(i, &p)| p != i && sigma[p] == i));
        }
        let cells = (map.num_vertices(), map.num_edges(), map.num_faces());
        prop_assert_eq!(fs.cell_orbit_counts(), cells);
        if map.chi() % 2 != 0 {
            prop_assert!(!system_orientable(&fs));
        }
    }

    /// On the product and cover fixtures, every match comes with a witness
    /// that verifies, and unmatched triples never carry one.
    #[test]
    fn family_witnesses_verify(cover in any::<bool>(), pick in any::<prop::sample::Index>()) {
        let (lg, triples) = rev_triples(if cover { "S4C:3" } else { "DxD:3,5" });
        let t = triples[pick.index(triples.len())];
        let tag = match_canonical_form(lg, t).unwrap();
        if tag.form == CanonicalForm::NoMatch {
            prop_assert!(tag.witness.is_none());
        } else {
            let w = tag.witness.as_ref().expect("matched triples carry a witness");
            prop_assert!(verify_witness(&lg.group, t, w));
        }
    }

    /// Duality on regular triples is an involution that swaps vertices with
    /// faces, fixes edges and the characteristic, and preserves the
    /// orientation subgroup.
    #[test]
    fn regular_duality_swaps_cells(pick in any::<prop::sample::Index>()) {
        let (lg, triples) = regular_cover_triples();
        let g = &lg.group;
        let t = triples[pick.index(triples.len())];
        let d = t.dual();
        prop_assert_eq!(d.dual(), t);
        prop_assert!(triples.binary_search(&d).is_ok(), "dual stays in the enumeration");
        let a = build_map(g, MapKind::Reg, t).unwrap();
        let b = build_map(g, MapKind::Reg, d).unwrap();
        prop_assert_eq!(a.num_vertices(), b.num_faces());
        prop_assert_eq!(a.num_faces(), b.num_vertices());
        prop_assert_eq!(a.num_edges(), b.num_edges());
        prop_assert_eq!(a.chi(), b.chi());
        let even = |t: ReversingTriple| {
            g.subgroup_generated(&[g.mul(t.x, t.y), g.mul(t.x, t.z)]).order()
        };
        prop_assert_eq!(even(t), even(d));
    }
}

/// The fixtures the properties sample from are not degenerate.
#[test]
fn fixtures_are_nontrivial() {
    let (_, product) = rev_triples("DxD:3,5");
    let (_, cover) = rev_triples("S4C:3");
    let (_, regular) = regular_cover_triples();
    assert!(product.len() > 100, "product fixture has {} triples", product.len());
    assert!(cover.len() > 100, "cover fixture has {} triples", cover.len());
    assert!(regular.len() >= 10, "regular fixture has {} triples", regular.len());
}
