//! Maps on surfaces built from triples of involutions. A triple (x, y, z)
//! of involutions generating a finite group G (not all three equal) yields a
//! map whose cells are left cosets of the subgroups below, with incidence
//! given by nonempty intersection:
//!
//! * vertex-reversing kind: vertices G/<x,y>, edges G/<z>, and two face
//!   classes G/<x,z> and G/<y,z>, kept as a tagged disjoint union;
//! * bi-reversing kind: vertices G/<x,y>, edges G/<z>, faces G/<x, zyz>;
//! * regular kind (requires yz = zy): vertices G/<x,y>, edges G/<y,z>,
//!   faces G/<x,z>.
//!
//! Since all cells are cosets, two cells intersect nontrivially exactly when
//! some group element lies in both, so a single pass over G computes the
//! full incidence structure.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flags;
use crate::group::{CosetPartition, ElemId, FiniteGroup, Subgroup};
use crate::structure::{subgroup_shape, SubgroupShape};

#[derive(Serialize, Clone, Copy, PartialEq, Eq, Hash, Debug)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Rev,
    BiRev,
    Reg,
}

impl std::fmt::Display for MapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MapKind::Rev => "rev",
            MapKind::BiRev => "birev",
            MapKind::Reg => "reg",
        })
    }
}

impl FromStr for MapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rev" => Ok(MapKind::Rev),
            "birev" => Ok(MapKind::BiRev),
            "reg" => Ok(MapKind::Reg),
            other => Err(Error::BadMapKind(other.to_string())),
        }
    }
}

/// An ordered triple of involutions generating the group. The first two
/// entries play symmetric roles for the non-regular kinds (swapping them
/// gives an isomorphic map); the third is distinguished.
#[derive(Serialize, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ReversingTriple {
    pub x: ElemId,
    pub y: ElemId,
    pub z: ElemId,
}

impl ReversingTriple {
    pub fn new(x: ElemId, y: ElemId, z: ElemId) -> Self {
        ReversingTriple { x, y, z }
    }

    pub fn swapped(&self) -> Self {
        ReversingTriple { x: self.y, y: self.x, z: self.z }
    }

    /// The dual of a regular triple swaps the roles of edges' and faces'
    /// second generator.
    pub fn dual(&self) -> Self {
        ReversingTriple { x: self.x, y: self.z, z: self.y }
    }

    pub fn entries(&self) -> [ElemId; 3] {
        [self.x, self.y, self.z]
    }

    /// Entries as a sorted set (for set-level classification).
    pub fn entry_set(&self) -> Vec<ElemId> {
        let mut s = vec![self.x, self.y, self.z];
        s.sort_unstable();
        s.dedup();
        s
    }
}

/// Validate a triple for the given map kind: all entries involutions, not
/// all equal, generating the whole group, and for the regular kind the last
/// two commuting.
pub fn make_reversing_triple(
    g: &FiniteGroup,
    kind: MapKind,
    x: ElemId,
    y: ElemId,
    z: ElemId,
) -> Result<ReversingTriple> {
    for e in [x, y, z] {
        if g.order_of(e) != 2 {
            return Err(Error::NotAnInvolution);
        }
    }
    if x == y && y == z {
        return Err(Error::AllEqual);
    }
    if kind == MapKind::Reg && g.mul(y, z) != g.mul(z, y) {
        return Err(Error::NonCommutingRegular);
    }
    if g.subgroup_generated(&[x, y, z]).order() != g.order() {
        return Err(Error::NotGenerating);
    }
    Ok(ReversingTriple { x, y, z })
}

/// One class of faces: all left cosets of a single subgroup, labeled by the
/// generators that define it.
#[derive(Debug, Clone)]
pub struct FaceClass {
    pub tag: String,
    pub cosets: CosetPartition,
}

/// A map built from coset geometry. Face ids are global across classes in
/// class order; `face_offsets[c]` is the first id of class c.
#[derive(Debug, Clone)]
pub struct CosetMap {
    pub kind: MapKind,
    pub triple: ReversingTriple,
    pub group_order: usize,
    pub vertex_subgroup: Subgroup,
    pub edge_subgroup: Subgroup,
    pub face_subgroups: Vec<(String, Subgroup)>,
    pub vertices: CosetPartition,
    pub edges: CosetPartition,
    pub faces: Vec<FaceClass>,
    pub face_offsets: Vec<usize>,
    /// Sorted vertex ids incident to each edge.
    pub edge_vertices: Vec<Vec<u32>>,
    /// Sorted global face ids incident to each edge.
    pub edge_faces: Vec<Vec<u32>>,
    /// Sorted global face ids incident to each vertex.
    pub vertex_faces: Vec<Vec<u32>>,
}

impl CosetMap {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.iter().map(|c| c.cosets.len()).sum()
    }

    pub fn face_class_sizes(&self) -> Vec<usize> {
        self.faces.iter().map(|c| c.cosets.len()).collect()
    }

    pub fn chi(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn vertex_of(&self, g: ElemId) -> u32 {
        self.vertices.coset_of[g as usize]
    }

    pub fn edge_of(&self, g: ElemId) -> u32 {
        self.edges.coset_of[g as usize]
    }

    /// Global face id of the coset of `g` in face class `class`.
    pub fn face_of(&self, class: usize, g: ElemId) -> u32 {
        (self.face_offsets[class] + self.faces[class].cosets.coset_of[g as usize] as usize) as u32
    }

    pub fn vertex_face_incident(&self, v: u32, f: u32) -> bool {
        self.vertex_faces[v as usize].binary_search(&f).is_ok()
    }
}

/// Build the coset map for a validated triple.
pub fn build_map(g: &FiniteGroup, kind: MapKind, triple: ReversingTriple) -> Result<CosetMap> {
    let triple = make_reversing_triple(g, kind, triple.x, triple.y, triple.z)?;
    let (x, y, z) = (triple.x, triple.y, triple.z);
    let vertex_subgroup = g.subgroup_generated(&[x, y]);
    let (edge_subgroup, face_subgroups) = match kind {
        MapKind::Rev => (
            g.subgroup_generated(&[z]),
            vec![
                ("x,z".to_string(), g.subgroup_generated(&[x, z])),
                ("y,z".to_string(), g.subgroup_generated(&[y, z])),
            ],
        ),
        MapKind::BiRev => (
            g.subgroup_generated(&[z]),
            vec![("x,y^z".to_string(), g.subgroup_generated(&[x, g.conj(y, z)]))],
        ),
        MapKind::Reg => (
            g.subgroup_generated(&[y, z]),
            vec![("x,z".to_string(), g.subgroup_generated(&[x, z]))],
        ),
    };
    let vertices = g.left_cosets(&vertex_subgroup)?;
    let edges = g.left_cosets(&edge_subgroup)?;
    let faces: Vec<FaceClass> = face_subgroups
        .iter()
        .map(|(tag, sub)| {
            Ok(FaceClass { tag: tag.clone(), cosets: g.left_cosets(sub)? })
        })
        .collect::<Result<_>>()?;
    let mut face_offsets = vec![0usize];
    for class in &faces {
        face_offsets.push(face_offsets.last().unwrap() + class.cosets.len());
    }

    // One pass over the group: the cells through a common element are
    // pairwise incident, and every incident pair shares some element.
    let mut edge_vertices = vec![Vec::new(); edges.len()];
    let mut edge_faces = vec![Vec::new(); edges.len()];
    let mut vertex_faces = vec![Vec::new(); vertices.len()];
    for gid in 0..g.order() {
        let v = vertices.coset_of[gid];
        let e = edges.coset_of[gid] as usize;
        edge_vertices[e].push(v);
        for (class_index, class) in faces.iter().enumerate() {
            let f = (face_offsets[class_index] + class.cosets.coset_of[gid] as usize) as u32;
            edge_faces[e].push(f);
            vertex_faces[v as usize].push(f);
        }
    }
    for list in edge_vertices
        .iter_mut()
        .chain(edge_faces.iter_mut())
        .chain(vertex_faces.iter_mut())
    {
        list.sort_unstable();
        list.dedup();
    }

    Ok(CosetMap {
        kind,
        triple,
        group_order: g.order(),
        vertex_subgroup,
        edge_subgroup,
        face_subgroups,
        vertices,
        edges,
        faces,
        face_offsets,
        edge_vertices,
        edge_faces,
        vertex_faces,
    })
}

#[derive(Serialize, Clone, Debug)]
pub struct StabilizerInfo {
    pub role: String,
    pub order: usize,
    pub shape: SubgroupShape,
}

#[derive(Serialize, Clone, Debug)]
pub struct MapInvariants {
    pub kind: MapKind,
    pub num_vertices: usize,
    pub num_edges: usize,
    pub num_faces: usize,
    pub face_class_sizes: Vec<usize>,
    pub chi: i64,
    pub stabilizers: Vec<StabilizerInfo>,
    /// None when the flag structure is ill-formed (so orientability is
    /// undefined for this map).
    pub orientable: Option<bool>,
    /// Whether |chi| and the edge count are coprime.
    pub coprime: bool,
}

/// Euler characteristic from cell counts alone (cheap, no incidence pass):
/// used by sweeps that only need the counts.
pub fn euler_characteristic(g: &FiniteGroup, kind: MapKind, triple: ReversingTriple) -> Result<(i64, usize)> {
    let triple = make_reversing_triple(g, kind, triple.x, triple.y, triple.z)?;
    let (x, y, z) = (triple.x, triple.y, triple.z);
    let index = |sub: Subgroup| g.order() / sub.order();
    let v = index(g.subgroup_generated(&[x, y]));
    let (e, f) = match kind {
        MapKind::Rev => (
            index(g.subgroup_generated(&[z])),
            index(g.subgroup_generated(&[x, z])) + index(g.subgroup_generated(&[y, z])),
        ),
        MapKind::BiRev => (
            index(g.subgroup_generated(&[z])),
            index(g.subgroup_generated(&[x, g.conj(y, z)])),
        ),
        MapKind::Reg => (
            index(g.subgroup_generated(&[y, z])),
            index(g.subgroup_generated(&[x, z])),
        ),
    };
    Ok((v as i64 - e as i64 + f as i64, e))
}

pub fn is_coprime_pair(chi: i64, num_edges: usize) -> bool {
    chi.unsigned_abs().gcd(&(num_edges as u64)) == 1
}

pub fn map_invariants(g: &FiniteGroup, map: &CosetMap) -> MapInvariants {
    let mut stabilizers = vec![
        StabilizerInfo {
            role: "vertex".to_string(),
            order: map.vertex_subgroup.order(),
            shape: subgroup_shape(g, &map.vertex_subgroup),
        },
        StabilizerInfo {
            role: "edge".to_string(),
            order: map.edge_subgroup.order(),
            shape: subgroup_shape(g, &map.edge_subgroup),
        },
    ];
    for (tag, sub) in &map.face_subgroups {
        stabilizers.push(StabilizerInfo {
            role: format!("face:{tag}"),
            order: sub.order(),
            shape: subgroup_shape(g, sub),
        });
    }
    let chi = map.chi();
    let orientable = flags::flag_system(g, map).ok().map(|fs| flags::system_orientable(&fs));
    MapInvariants {
        kind: map.kind,
        num_vertices: map.num_vertices(),
        num_edges: map.num_edges(),
        num_faces: map.num_faces(),
        face_class_sizes: map.face_class_sizes(),
        chi,
        stabilizers,
        orientable,
        coprime: is_coprime_pair(chi, map.num_edges()),
    }
}

/// Convenience: invariants keyed for JSON output, including the triple.
pub fn invariants_record(lg_spec: &str, inv: &MapInvariants, triple: &ReversingTriple) -> BTreeMap<String, serde_json::Value> {
    let mut out = BTreeMap::new();
    out.insert("group".into(), serde_json::json!(lg_spec));
    out.insert("kind".into(), serde_json::json!(inv.kind.to_string()));
    out.insert("triple".into(), serde_json::json!([triple.x, triple.y, triple.z]));
    out.insert("vertices".into(), serde_json::json!(inv.num_vertices));
    out.insert("edges".into(), serde_json::json!(inv.num_edges));
    out.insert("faces".into(), serde_json::json!(inv.num_faces));
    out.insert("chi".into(), serde_json::json!(inv.chi));
    out.insert("orientable".into(), serde_json::json!(inv.orientable));
    out.insert("coprime".into(), serde_json::json!(inv.coprime));
    out
}
