//! Finite groups generated by involutions, the maps (cellular surface
//! embeddings) their involution triples induce, and the classification of
//! those maps whose Euler characteristic is coprime to the edge count.
//!
//! The crate is organized bottom-up:
//!
//! - [`perm`] and [`group`]: permutations, finite groups as closed
//!   multiplication structures, subgroups, cosets, quotients.
//! - [`hom`]: homomorphisms, isomorphism testing, automorphism groups.
//! - [`structure`]: Sylow subgroups and their shapes, solvability, the
//!   odd-order core, and the almost-Sylow-cyclic headline report.
//! - [`families`]: labeled constructions of the group families under
//!   study (dihedral groups, products of two dihedral groups, rank-3
//!   cyclic extensions, octahedral covers, metacyclic groups) plus a word
//!   parser so elements can be written as `g3h` or `(0 1)(2 3)`.
//! - [`map`]: coset-based maps built from a triple of involutions, in
//!   three flavors (reversing, bi-reversing, regular), with cell counts,
//!   Euler characteristic, stabilizer data, and the coprimality filter.
//! - [`flags`]: flag systems of a map and orientability via 2-coloring.
//! - [`graph`]: the underlying multigraph of a map and recognition of the
//!   small graph families that occur (cycles, K4, tensors of two cycles).
//! - [`triples`]: enumeration of valid triples and their equivalence
//!   classes under group automorphisms (with the optional swap of the
//!   first two entries where map isomorphism allows it).
//! - [`classify`]: matching triples against the pinned canonical patterns
//!   of each family, closed-form dihedral discriminants, and the census
//!   of regular maps.
//! - [`report`]: named verification suites with deterministic
//!   pass/fail/skip results.

pub mod classify;
pub mod error;
pub mod families;
pub mod flags;
pub mod graph;
pub mod group;
pub mod hom;
pub mod map;
pub mod perm;
pub mod report;
pub mod structure;
pub mod triples;

pub use classify::{
    classify_map, dihedral_discriminants, match_canonical_form, regular_census,
    verify_witness, CanonicalForm, CanonicalTag, DihedralDiscriminants, MapClass,
    MapClassification, MatchWitness, RegularClassRecord,
};
pub use error::{Error, Result};
pub use families::{
    dihedral, dihedral_product, from_perm_file, from_perm_lines, metacyclic, parse_group_spec,
    rank3_cyclic_ext, s4_cover, LabeledGroup,
};
pub use flags::{flag_system, is_orientable, system_orientable, FlagSystem};
pub use graph::{underlying_graph, GraphDescriptor, GraphFamily};
pub use group::{ElemId, FiniteGroup, Subgroup};
pub use hom::{automorphism_group, is_isomorphic, GroupHom};
pub use map::{
    build_map, euler_characteristic, is_coprime_pair, make_reversing_triple, map_invariants,
    CosetMap, MapInvariants, MapKind, ReversingTriple,
};
pub use perm::Perm;
pub use report::{verify_suite, CaseResult, Report, Status, SweepConfig, SUITES};
pub use structure::{structure_report, StructureReport, SylowShape};
pub use triples::{
    coprime_filter, enumerate_reversing_triples, equivalence_classes, equivalent_triples,
    EquivalenceClass, TripleCert,
};
