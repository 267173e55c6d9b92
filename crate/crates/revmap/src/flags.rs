//! Flag systems. A flag of a map is an incident vertex-edge-face corner;
//! every map carries exactly 4|E| of them, acted on by three fixed-point-free
//! partner involutions (change the vertex, the edge, or the face, keeping the
//! other two cells). Because every cell of a coset map is a left coset, flags
//! can be realized directly on group elements, which stays well defined even
//! when two cells meet at more than one corner:
//!
//! * regular kind: flags are the group elements; the partners multiply on the
//!   right by z, x, and y;
//! * vertex-reversing kind: flags are pairs (g, side) with the side picking
//!   one of the two face classes; partners are (gz, side), (gx / gy by side),
//!   and the side flip;
//! * bi-reversing kind: as above except the vertex partner crosses sides,
//!   (g, side) -> (gz, other side), and both sides project into the single
//!   face class (side 1 lands on the face of g z).
//!
//! Coset cells are recovered as orbits: vertices under <sigma_e, sigma_f>,
//! edges under <sigma_v, sigma_f>, faces under <sigma_v, sigma_e>. The map is
//! orientable exactly when the flag graph under all three involutions is
//! bipartite.

use crate::error::{Error, Result};
use crate::group::{ElemId, FiniteGroup};
use crate::map::{CosetMap, MapKind};

#[derive(Debug, Clone)]
pub struct FlagSystem {
    /// (vertex, edge, face) cell ids of each flag, in flag order.
    pub cells: Vec<(u32, u32, u32)>,
    /// Partner flag with the same edge and face.
    pub sigma_v: Vec<usize>,
    /// Partner flag with the same vertex and face.
    pub sigma_e: Vec<usize>,
    /// Partner flag with the same vertex and edge.
    pub sigma_f: Vec<usize>,
}

impl FlagSystem {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Orbit counts under the three partner pairs, in cell order: vertices
    /// from <sigma_e, sigma_f>, edges from <sigma_v, sigma_f>, faces from
    /// <sigma_v, sigma_e>. A well-formed system reproduces the cell counts.
    pub fn cell_orbit_counts(&self) -> (usize, usize, usize) {
        (
            orbit_count(&[&self.sigma_e, &self.sigma_f]),
            orbit_count(&[&self.sigma_v, &self.sigma_f]),
            orbit_count(&[&self.sigma_v, &self.sigma_e]),
        )
    }
}

fn orbit_count(perms: &[&Vec<usize>]) -> usize {
    let n = perms[0].len();
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for p in perms {
                let j = p[i];
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    count
}

/// Build the flag system of a map on group elements. The only ill-formed
/// input is a regular map whose edge subgroup is not the Klein four group
/// (a repeated commuting generator), where the group cannot supply 4|E|
/// flags.
pub fn flag_system(g: &FiniteGroup, map: &CosetMap) -> Result<FlagSystem> {
    let t = map.triple;
    let n = g.order();
    let expected = 4 * map.num_edges();
    let rmul = |gid: usize, s: ElemId| g.mul(gid as ElemId, s) as usize;
    match map.kind {
        MapKind::Reg => {
            if n != expected {
                return Err(Error::IllFormedFlags { expected, found: n });
            }
            let mut cells = Vec::with_capacity(n);
            let mut sigma_v = vec![0usize; n];
            let mut sigma_e = vec![0usize; n];
            let mut sigma_f = vec![0usize; n];
            for gid in 0..n {
                let e = gid as ElemId;
                cells.push((map.vertex_of(e), map.edge_of(e), map.face_of(0, e)));
                sigma_v[gid] = rmul(gid, t.z);
                sigma_e[gid] = rmul(gid, t.x);
                sigma_f[gid] = rmul(gid, t.y);
            }
            Ok(FlagSystem { cells, sigma_v, sigma_e, sigma_f })
        }
        MapKind::Rev | MapKind::BiRev => {
            // Edges are cosets of <z>, so 2|G| = 4|E| holds unconditionally.
            debug_assert_eq!(2 * n, expected);
            let crossing = map.kind == MapKind::BiRev;
            let mut cells = Vec::with_capacity(2 * n);
            let mut sigma_v = vec![0usize; 2 * n];
            let mut sigma_e = vec![0usize; 2 * n];
            let mut sigma_f = vec![0usize; 2 * n];
            // Flag (g, side) has id 2 g + side.
            for gid in 0..n {
                let e = gid as ElemId;
                let gz = rmul(gid, t.z);
                let faces = if crossing {
                    (map.face_of(0, e), map.face_of(0, gz as ElemId))
                } else {
                    (map.face_of(0, e), map.face_of(1, e))
                };
                cells.push((map.vertex_of(e), map.edge_of(e), faces.0));
                cells.push((map.vertex_of(e), map.edge_of(e), faces.1));
                if crossing {
                    sigma_v[2 * gid] = 2 * gz + 1;
                    sigma_v[2 * gid + 1] = 2 * gz;
                } else {
                    sigma_v[2 * gid] = 2 * gz;
                    sigma_v[2 * gid + 1] = 2 * gz + 1;
                }
                sigma_e[2 * gid] = 2 * rmul(gid, t.x);
                sigma_e[2 * gid + 1] = 2 * rmul(gid, t.y) + 1;
                sigma_f[2 * gid] = 2 * gid + 1;
                sigma_f[2 * gid + 1] = 2 * gid;
            }
            Ok(FlagSystem { cells, sigma_v, sigma_e, sigma_f })
        }
    }
}

/// Bipartiteness of the flag graph under the three partner involutions.
pub fn system_orientable(fs: &FlagSystem) -> bool {
    let n = fs.len();
    let mut color = vec![u8::MAX; n];
    for start in 0..n {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in [fs.sigma_v[i], fs.sigma_e[i], fs.sigma_f[i]] {
                if color[j] == u8::MAX {
                    color[j] = 1 - color[i];
                    queue.push_back(j);
                } else if color[j] == color[i] {
                    return false;
                }
            }
        }
    }
    true
}

/// Orientability of a map, or an error when its flag structure is
/// ill-formed (so there is no consistent way to orient it).
pub fn is_orientable(g: &FiniteGroup, map: &CosetMap) -> Result<bool> {
    Ok(system_orientable(&flag_system(g, map)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{dihedral, dihedral_product, s4_cover};
    use crate::map::{build_map, MapKind, ReversingTriple};

    fn well_formed(fs: &FlagSystem, map: &CosetMap) {
        assert_eq!(fs.len(), 4 * map.num_edges());
        for i in 0..fs.len() {
            for sigma in [&fs.sigma_v, &fs.sigma_e, &fs.sigma_f] {
                assert_ne!(sigma[i], i, "partner involutions are fixed-point free");
                assert_eq!(sigma[sigma[i]], i);
            }
            // The vertex and face partners commute: an edge carries 4 flags.
            let vf = fs.sigma_f[fs.sigma_v[i]];
            assert_eq!(fs.sigma_v[fs.sigma_f[i]], vf);
        }
        let (v, e, f) = fs.cell_orbit_counts();
        assert_eq!(v, map.num_vertices());
        assert_eq!(e, map.num_edges());
        assert_eq!(f, map.num_faces());
        // Cell projections are constant on orbits and correct per partner:
        // sigma_v keeps edge and face, sigma_e keeps vertex and face,
        // sigma_f keeps vertex and edge.
        for i in 0..fs.len() {
            let (v0, e0, f0) = fs.cells[i];
            assert_eq!((fs.cells[fs.sigma_v[i]].1, fs.cells[fs.sigma_v[i]].2), (e0, f0));
            assert_eq!((fs.cells[fs.sigma_e[i]].0, fs.cells[fs.sigma_e[i]].2), (v0, f0));
            assert_eq!((fs.cells[fs.sigma_f[i]].0, fs.cells[fs.sigma_f[i]].1), (v0, e0));
        }
    }

    #[test]
    fn tetrahedron_flags() {
        let lg = s4_cover(3).unwrap();
        let t = ReversingTriple::new(
            lg.element("hv").unwrap(),
            lg.element("v").unwrap(),
            lg.element("w2v").unwrap(),
        );
        let map = build_map(&lg.group, MapKind::Reg, t).unwrap();
        let fs = flag_system(&lg.group, &map).unwrap();
        well_formed(&fs, &map);
        assert!(system_orientable(&fs));
        assert!(is_orientable(&lg.group, &map).unwrap());
    }

    #[test]
    fn multi_corner_rev_maps_are_well_formed() {
        // z = u on the product map: two cells can meet at several corners,
        // which the group-element flags resolve.
        let lg = dihedral_product(3, 5).unwrap();
        let g = &lg.group;
        let (u, v, abw) = (
            lg.element("u").unwrap(),
            lg.element("v").unwrap(),
            lg.element("abw").unwrap(),
        );
        for t in [
            ReversingTriple::new(u, v, abw),
            ReversingTriple::new(u, abw, v),
            ReversingTriple::new(v, abw, u),
        ] {
            let map = build_map(g, MapKind::Rev, t).unwrap();
            let fs = flag_system(g, &map).unwrap();
            well_formed(&fs, &map);
            assert!(!system_orientable(&fs), "chi = -7 is odd");
        }
    }

    #[test]
    fn single_vertex_map_flags() {
        // One vertex, nine loop edges: still a well-formed flag system.
        let lg = dihedral(9).unwrap();
        let t = ReversingTriple::new(
            lg.element("h").unwrap(),
            lg.element("gh").unwrap(),
            lg.element("g3h").unwrap(),
        );
        let map = build_map(&lg.group, MapKind::Rev, t).unwrap();
        assert_eq!(map.num_vertices(), 1);
        let fs = flag_system(&lg.group, &map).unwrap();
        well_formed(&fs, &map);
        // All three generators die under the reflection-parity homomorphism
        // D_18 -> Z_2, which 2-colors the flags, so the map is orientable.
        assert!(is_orientable(&lg.group, &map).unwrap());
    }

    #[test]
    fn birev_flags_cross_sides() {
        let lg = dihedral(9).unwrap();
        let g = &lg.group;
        let t = ReversingTriple::new(
            lg.element("h").unwrap(),
            lg.element("gh").unwrap(),
            lg.element("g2h").unwrap(),
        );
        let map = build_map(g, MapKind::BiRev, t).unwrap();
        assert_eq!(map.chi(), -5);
        let fs = flag_system(g, &map).unwrap();
        well_formed(&fs, &map);
        assert!(!system_orientable(&fs), "odd characteristic");
    }

    #[test]
    fn repeated_regular_generator_is_ill_formed() {
        // y = z makes the edge subgroup Z_2, so |G| falls short of 4|E|.
        let lg = dihedral(9).unwrap();
        let gh = lg.element("gh").unwrap();
        let t = ReversingTriple::new(lg.element("h").unwrap(), gh, gh);
        let map = build_map(&lg.group, MapKind::Reg, t).unwrap();
        match flag_system(&lg.group, &map) {
            Err(Error::IllFormedFlags { expected, found }) => {
                assert_eq!((expected, found), (36, 18));
            }
            other => panic!("expected an ill-formed flag error, got {other:?}"),
        }
        assert!(is_orientable(&lg.group, &map).is_err());
    }

    #[test]
    fn odd_characteristic_is_never_orientable() {
        let lg = s4_cover(9).unwrap();
        let t = ReversingTriple::new(
            lg.element("hv").unwrap(),
            lg.element("v").unwrap(),
            lg.element("w2").unwrap(),
        );
        let map = build_map(&lg.group, MapKind::Reg, t).unwrap();
        assert_eq!(map.chi(), -5);
        assert!(!is_orientable(&lg.group, &map).unwrap());
    }

    #[test]
    fn regular_orientability_equals_even_subgroup_index() {
        let lg = s4_cover(3).unwrap();
        let g = &lg.group;
        let (hv, v, w2, w2v) = (
            lg.element("hv").unwrap(),
            lg.element("v").unwrap(),
            lg.element("w2").unwrap(),
            lg.element("w2v").unwrap(),
        );
        for t in [ReversingTriple::new(hv, v, w2v), ReversingTriple::new(hv, v, w2)] {
            let map = build_map(g, MapKind::Reg, t).unwrap();
            let even = g.subgroup_generated(&[g.mul(t.x, t.y), g.mul(t.x, t.z)]);
            let index2 = g.order() / even.order() == 2;
            assert_eq!(is_orientable(g, &map).unwrap(), index2);
        }
    }
}
