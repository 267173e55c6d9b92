//! Named verification suites over the map machinery, each producing a
//! deterministic pass/fail/skip report suitable for JSON or text output.
//!
//! The suites cross-check computed map data against closed forms and
//! independent oracles: dihedral cell-count formulas, the canonical triple
//! trichotomy, the regular-map census, coprimality consequences, group
//! structure via element-order censuses, and flag-system sanity.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;
use serde_json::json;

use crate::classify::{
    dihedral_discriminants, match_canonical_form, regular_census, CanonicalForm,
};
use crate::error::{Error, Result};
use crate::families::{from_perm_lines, parse_group_spec, LabeledGroup};
use crate::flags::{flag_system, system_orientable};
use crate::group::{ElemId, FiniteGroup};
use crate::hom::is_isomorphic;
use crate::map::{build_map, map_invariants, MapKind, ReversingTriple};
use crate::structure::{factorize, structure_report, SylowShape};
use crate::triples::enumerate_reversing_triples;

#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Serialize, Clone, Debug)]
pub struct CaseResult {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub record: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repro: Option<String>,
}

impl CaseResult {
    fn pass(name: impl Into<String>) -> Self {
        CaseResult {
            name: name.into(),
            status: Status::Pass,
            reason: None,
            record: None,
            repro: None,
        }
    }

    fn checked(name: impl Into<String>, ok: bool, fail_reason: impl Into<String>) -> Self {
        let mut case = CaseResult::pass(name);
        if !ok {
            case.status = Status::Fail;
            case.reason = Some(fail_reason.into());
        }
        case
    }

    fn skip(name: impl Into<String>, reason: impl Into<String>) -> Self {
        CaseResult {
            name: name.into(),
            status: Status::Skip,
            reason: Some(reason.into()),
            record: None,
            repro: None,
        }
    }

    fn with_record(mut self, record: serde_json::Value) -> Self {
        self.record = Some(record);
        self
    }

    fn with_repro(mut self, repro: String) -> Self {
        self.repro = Some(repro);
        self
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub cases: Vec<CaseResult>,
}

impl Report {
    fn from_cases(suite: &str, cases: Vec<CaseResult>) -> Self {
        let count = |s: Status| cases.iter().filter(|c| c.status == s).count();
        Report {
            suite: suite.to_string(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            skipped: count(Status::Skip),
            cases,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Bounds for the sweeping suites. `max_n` trims the dihedral sweeps,
/// `cap` bounds automorphism-group searches.
#[derive(Clone, Copy, Default, Debug)]
pub struct SweepConfig {
    pub max_n: Option<usize>,
    pub cap: Option<usize>,
}

pub const SUITES: &[&str] = &[
    "families",
    "dihedral-discriminants",
    "dihedral-canonical",
    "regular-table",
    "coprime-consequences",
    "structural",
    "flags-orientability",
    "all",
];

pub fn verify_suite(name: &str, config: &SweepConfig) -> Result<Report> {
    let cases = match name {
        "families" => suite_families()?,
        "dihedral-discriminants" => suite_dihedral_discriminants(config)?,
        "dihedral-canonical" => suite_dihedral_canonical(config)?,
        "regular-table" => suite_regular_table(config)?,
        "coprime-consequences" => suite_coprime_consequences(config)?,
        "structural" => suite_structural(config)?,
        "flags-orientability" => suite_flags()?,
        "all" => {
            let mut cases = Vec::new();
            for sub in SUITES.iter().filter(|s| **s != "all") {
                for mut case in verify_suite(sub, config)?.cases {
                    case.name = format!("{sub}/{}", case.name);
                    cases.push(case);
                }
            }
            cases
        }
        _ => return Err(Error::UnknownSuite(name.to_string())),
    };
    Ok(Report::from_cases(name, cases))
}

fn map_repro(spec: &str, kind: MapKind, words: [&str; 3]) -> String {
    format!(
        "revmap map -g {spec} --kind {kind} --triple {},{},{}",
        words[0], words[1], words[2]
    )
}

fn triple_of(lg: &LabeledGroup, words: [&str; 3]) -> Result<ReversingTriple> {
    Ok(ReversingTriple::new(
        lg.element(words[0])?,
        lg.element(words[1])?,
        lg.element(words[2])?,
    ))
}

/// The pattern maps used as a shared corpus by several suites.
fn pattern_maps() -> Vec<(&'static str, MapKind, [&'static str; 3])> {
    vec![
        ("DxD:3,5", MapKind::Rev, ["u", "v", "abw"]),
        ("DxD:3,5", MapKind::Rev, ["v", "abw", "u"]),
        ("DxD:3,5", MapKind::Rev, ["u", "abw", "v"]),
        ("DxD:3,7", MapKind::Rev, ["u", "v", "abw"]),
        ("DxD:5,7", MapKind::Rev, ["u", "v", "abw"]),
        ("R3:3,5,7", MapKind::Rev, ["u", "cv", "abw"]),
        ("R3:3,5,7", MapKind::Rev, ["abw", "u", "cv"]),
        ("R3:3,5,7", MapKind::Rev, ["cv", "abw", "u"]),
        ("S4C:3", MapKind::Reg, ["hv", "v", "w2"]),
        ("S4C:9", MapKind::Reg, ["hv", "v", "w2"]),
        ("S4C:15", MapKind::Reg, ["h2v", "v", "w2"]),
        ("S4C:9", MapKind::Reg, ["v", "hv", "u"]),
    ]
}

fn suite_families() -> Result<Vec<CaseResult>> {
    let mut cases = Vec::new();
    let specs = [
        ("D:1", 2),
        ("D:2", 4),
        ("D:3", 6),
        ("D:6", 12),
        ("D:9", 18),
        ("D:12", 24),
        ("DxD:3,5", 60),
        ("DxD:3,7", 84),
        ("DxD:5,7", 140),
        ("R3:3,5,7", 420),
        ("S4C:3", 24),
        ("S4C:9", 72),
        ("S4C:15", 120),
        ("MC:9,3,4", 27),
    ];
    for (spec, order) in specs {
        let case = match parse_group_spec(spec) {
            Ok(lg) => CaseResult::checked(
                format!("construct-{spec}"),
                lg.group.order() == order,
                format!("order {} (expected {order})", lg.group.order()),
            )
            .with_record(json!({"order": lg.group.order()}))
            .with_repro(format!("revmap group -g {spec}")),
            Err(e) => CaseResult::checked(format!("construct-{spec}"), false, e.to_string()),
        };
        cases.push(case);
    }
    // The m = 3 cover is the symmetry group of the octahedron's rotations
    // together with a reflection: 24 elements, 9 involutions, elements of
    // order at most 4, trivial center.
    let lg = parse_group_spec("S4C:3")?;
    let g = &lg.group;
    let invs = g.involutions().len();
    let max_order = (0..g.order()).map(|e| g.order_of(e as ElemId)).max().unwrap();
    let center = (0..g.order() as ElemId)
        .filter(|&a| (0..g.order() as ElemId).all(|b| g.mul(a, b) == g.mul(b, a)))
        .count();
    cases.push(
        CaseResult::checked(
            "cover-3-octahedral-profile",
            invs == 9 && max_order == 4 && center == 1,
            format!("involutions {invs}, max order {max_order}, center size {center}"),
        )
        .with_record(json!({"involutions": invs, "max_order": max_order})),
    );
    // Involution census of the covers is 2m + 3.
    for m in [3usize, 9, 15] {
        let lg = parse_group_spec(&format!("S4C:{m}"))?;
        let invs = lg.group.involutions().len();
        cases.push(CaseResult::checked(
            format!("cover-{m}-involution-census"),
            invs == 2 * m + 3,
            format!("found {invs} involutions (expected {})", 2 * m + 3),
        ));
    }
    // Enumeration oracles counted by hand: the triangle group carries 24
    // reversing triples, an odd cyclic group none (no involutions at all),
    // and the (3,5) product exactly 23 involutions.
    let d3 = parse_group_spec("D:3")?;
    let d3_triples = enumerate_reversing_triples(&d3.group, MapKind::Rev).len();
    cases.push(
        CaseResult::checked(
            "triangle-triple-count",
            d3_triples == 24,
            format!("found {d3_triples} reversing triples (expected 24)"),
        )
        .with_repro("revmap triples -g D:3".to_string()),
    );
    let c5 = from_perm_lines("(0 1 2 3 4)", "cyclic-5")?;
    let c5_triples = enumerate_reversing_triples(&c5.group, MapKind::Rev).len();
    cases.push(CaseResult::checked(
        "odd-cyclic-has-no-triples",
        c5_triples == 0,
        format!("found {c5_triples} reversing triples (expected none)"),
    ));
    let dp = parse_group_spec("DxD:3,5")?;
    let dp_invs = dp.group.involutions().len();
    cases.push(CaseResult::checked(
        "product-3-5-involution-census",
        dp_invs == 23,
        format!("found {dp_invs} involutions (expected 23)"),
    ));
    Ok(cases)
}

fn suite_dihedral_discriminants(config: &SweepConfig) -> Result<Vec<CaseResult>> {
    let max_n = config.max_n.unwrap_or(27).max(3);
    let mut cases = Vec::new();
    for n in 3..=max_n {
        let lg = parse_group_spec(&format!("D:{n}"))?;
        let g = &lg.group;
        let h = lg.labels["h"];
        let rot = lg.labels["g"];
        let reflection = |a: usize| g.mul(g.power(rot, a as i64), h);
        let mut pairs = 0usize;
        let mut mismatch = None;
        for i in 1..n {
            for j in 1..n {
                let gcd3 = (i as u64).gcd(&(j as u64)).gcd(&(n as u64));
                if gcd3 != 1 {
                    continue;
                }
                pairs += 1;
                let d = dihedral_discriminants(n as u64, i as i64, j as i64);
                let t = ReversingTriple::new(h, reflection(i), reflection(j));
                let rev = build_map(g, MapKind::Rev, t)?;
                let rev_ok = rev.chi() == d.chi_rev
                    && rev.num_vertices() == (i as u64).gcd(&(n as u64)) as usize
                    && rev.num_edges() == n;
                let birev = build_map(g, MapKind::BiRev, t)?;
                let birev_ok = birev.chi() == d.chi_birev && birev.num_edges() == n;
                if !(rev_ok && birev_ok) && mismatch.is_none() {
                    mismatch = Some((i, j, rev.chi(), d.chi_rev, birev.chi(), d.chi_birev));
                }
            }
        }
        cases.push(
            CaseResult::checked(
                format!("closed-form-n{n}"),
                mismatch.is_none(),
                format!("first mismatch {mismatch:?}"),
            )
            .with_record(json!({"pairs": pairs}))
            .with_repro(format!("revmap verify --suite dihedral-discriminants --max-n {n}")),
        );
    }
    // On odd prime powers, the full hypotheses (gcd(i,j,n) = 1 and
    // gcd(j,n) >= 3) force the reversing cell sum coprime to n.
    for n in [9u64, 25, 27, 49] {
        let mut checked = 0usize;
        let mut bad = None;
        for i in 1..n {
            for j in 1..n {
                let hyp = (i.gcd(&j).gcd(&n)) == 1 && j.gcd(&n) >= 3;
                if !hyp {
                    continue;
                }
                checked += 1;
                let d = dihedral_discriminants(n, i as i64, j as i64);
                if d.delta_rev != 1 && bad.is_none() {
                    bad = Some((i, j, d.delta_rev));
                }
            }
        }
        cases.push(
            CaseResult::checked(
                format!("prime-power-coprime-n{n}"),
                bad.is_none() && checked > 0,
                format!("violation {bad:?}"),
            )
            .with_record(json!({"pairs": checked})),
        );
    }
    // Dropping the gcd(j,n) >= 3 hypothesis admits failures: n = 9,
    // i = 1, j = 2 gives cell sum 3.
    let d = dihedral_discriminants(9, 1, 2);
    cases.push(CaseResult::checked(
        "hypothesis-needed-witness",
        d.delta_rev == 3 && d.cells_rev == 3,
        format!("delta {} cells {}", d.delta_rev, d.cells_rev),
    ));
    Ok(cases)
}

fn suite_dihedral_canonical(config: &SweepConfig) -> Result<Vec<CaseResult>> {
    let max_n = config.max_n.unwrap_or(25).clamp(3, 25);
    let mut cases = Vec::new();
    for n in 3..=max_n {
        let lg = parse_group_spec(&format!("D:{n}"))?;
        let triples = enumerate_reversing_triples(&lg.group, MapKind::Rev);
        let mut counts: std::collections::BTreeMap<&'static str, usize> =
            std::collections::BTreeMap::new();
        let mut unmatched = None;
        for &t in &triples {
            let tag = match_canonical_form(&lg, t)?;
            let key = match tag.form {
                CanonicalForm::DihedralOddForm => "odd-form",
                CanonicalForm::DihedralRedundant => "redundant",
                CanonicalForm::DihedralSplit => "split",
                _ => {
                    if unmatched.is_none() {
                        unmatched = Some(t);
                    }
                    "unmatched"
                }
            };
            *counts.entry(key).or_default() += 1;
        }
        let even_only_ok = n % 2 == 1
            || (counts.contains_key("odd-form")
                && (counts.contains_key("redundant") || counts.contains_key("split")));
        let ok = unmatched.is_none()
            && !triples.is_empty()
            && (n % 2 == 0 || counts.len() == 1)
            && even_only_ok;
        cases.push(
            CaseResult::checked(
                format!("trichotomy-n{n}"),
                ok,
                format!("unmatched triple {unmatched:?}, counts {counts:?}"),
            )
            .with_record(json!({
                "triples": triples.len(),
                "counts": counts.iter().map(|(k, v)| (k.to_string(), *v)).collect::<std::collections::BTreeMap<_, _>>(),
            }))
            .with_repro(format!("revmap verify --suite dihedral-canonical --max-n {n}")),
        );
    }
    // Spot witnesses for each branch.
    let lg9 = parse_group_spec("D:9")?;
    let odd = match_canonical_form(&lg9, triple_of(&lg9, ["h", "gh", "g3h"])?)?;
    let lg10 = parse_group_spec("D:10")?;
    let redundant = match_canonical_form(&lg10, triple_of(&lg10, ["g5", "gh", "h"])?)?;
    let split = match_canonical_form(&lg10, triple_of(&lg10, ["g5", "h", "g2h"])?)?;
    cases.push(CaseResult::checked(
        "branch-witnesses",
        odd.form == CanonicalForm::DihedralOddForm
            && redundant.form == CanonicalForm::DihedralRedundant
            && split.form == CanonicalForm::DihedralSplit,
        format!("{:?} {:?} {:?}", odd.form, redundant.form, split.form),
    ));
    Ok(cases)
}

fn suite_regular_table(config: &SweepConfig) -> Result<Vec<CaseResult>> {
    let mut cases = Vec::new();
    for spec in ["DxD:3,5", "DxD:3,7", "S4C:3", "S4C:9"] {
        let lg = parse_group_spec(spec)?;
        // A cap that is too tight for this group's automorphism search skips
        // the group instead of aborting the sweep.
        let records = match regular_census(&lg, config.cap) {
            Ok(records) => records,
            Err(Error::SearchCap { order, cap }) => {
                cases.push(CaseResult::skip(
                    format!("{spec}-classes-partition"),
                    format!("automorphism search for order {order} exceeds cap {cap}"),
                ));
                continue;
            }
            Err(e) => return Err(e),
        };
        let total: usize = records.iter().map(|r| r.class_size).sum();
        let all = enumerate_reversing_triples(&lg.group, MapKind::Reg).len();
        cases.push(
            CaseResult::checked(
                format!("{spec}-classes-partition"),
                total == all && !records.is_empty(),
                format!("classes cover {total} of {all} triples"),
            )
            .with_record(json!({
                "classes": records.len(),
                "triples": all,
                "graphs": records.iter().map(|r| r.graph.clone()).collect::<BTreeSet<_>>(),
            }))
            .with_repro(format!("revmap classify -g {spec} --kind reg --all")),
        );
        let dual_ok = records.iter().enumerate().all(|(i, r)| {
            r.dual_index
                .and_then(|d| records[d].dual_index)
                .is_some_and(|back| back == i)
        });
        cases.push(CaseResult::checked(
            format!("{spec}-duality-involution"),
            dual_ok,
            "dual pairing does not close",
        ));
        let mut orient_ok = true;
        let mut coprime_ok = true;
        for r in &records {
            if let Some(orientable) = r.orientable {
                if orientable != r.even_subgroup_index2 {
                    orient_ok = false;
                }
                if r.chi % 2 != 0 && orientable {
                    orient_ok = false;
                }
                if r.coprime && !r.small && orientable {
                    coprime_ok = false;
                }
            }
        }
        cases.push(CaseResult::checked(
            format!("{spec}-orientability-cross-check"),
            orient_ok,
            "flag 2-coloring disagrees with the index-2 criterion",
        ));
        cases.push(CaseResult::checked(
            format!("{spec}-coprime-nonsmall-nonorientable"),
            coprime_ok,
            "a coprime regular map of full size is orientable",
        ));
    }
    Ok(cases)
}

fn corpus(config: &SweepConfig) -> Result<Vec<(String, MapKind, ReversingTriple, LabeledGroup)>> {
    let max_n = config.max_n.unwrap_or(15).max(3);
    let mut out = Vec::new();
    for n in 3..=max_n {
        let spec = format!("D:{n}");
        let lg = parse_group_spec(&spec)?;
        let h = lg.labels["h"];
        let rot = lg.labels["g"];
        for i in 1..n {
            for j in 1..n {
                if (i as u64).gcd(&(j as u64)).gcd(&(n as u64)) != 1 {
                    continue;
                }
                let d = dihedral_discriminants(n as u64, i as i64, j as i64);
                let t = ReversingTriple::new(
                    h,
                    lg.group.mul(lg.group.power(rot, i as i64), h),
                    lg.group.mul(lg.group.power(rot, j as i64), h),
                );
                if d.delta_rev == 1 {
                    out.push((spec.clone(), MapKind::Rev, t, parse_group_spec(&spec)?));
                }
                if d.delta_birev == 1 {
                    out.push((spec.clone(), MapKind::BiRev, t, parse_group_spec(&spec)?));
                }
            }
        }
    }
    for (spec, kind, words) in pattern_maps() {
        let lg = parse_group_spec(spec)?;
        let t = triple_of(&lg, words)?;
        out.push((spec.to_string(), kind, t, lg));
    }
    Ok(out)
}

fn suite_coprime_consequences(config: &SweepConfig) -> Result<Vec<CaseResult>> {
    let corpus = corpus(config)?;
    let mut even_ok = true;
    let mut odd_ok = true;
    let mut lcm_ok = true;
    let mut maps = 0usize;
    let mut first_failure = None;
    let mut groups: std::collections::BTreeMap<String, bool> = std::collections::BTreeMap::new();
    for (spec, kind, t, lg) in &corpus {
        let g = &lg.group;
        let map = build_map(g, *kind, *t)?;
        let inv = map_invariants(g, &map);
        if !inv.coprime {
            continue;
        }
        maps += 1;
        let chi_gcd = inv.chi.unsigned_abs().gcd(&(g.order() as u64));
        if inv.num_edges.is_multiple_of(2) {
            if chi_gcd != 1 {
                even_ok = false;
                first_failure.get_or_insert((spec.clone(), *kind, *t, chi_gcd));
            }
        } else if 4 % chi_gcd != 0 {
            odd_ok = false;
            first_failure.get_or_insert((spec.clone(), *kind, *t, chi_gcd));
        }
        let lcm = inv
            .stabilizers
            .iter()
            .fold(1u64, |acc, s| acc.lcm(&(s.order as u64)));
        if lcm != g.order() as u64 {
            lcm_ok = false;
        }
        groups.entry(spec.clone()).or_insert(true);
    }
    let mut sylow_ok = true;
    let mut sylow_detail = String::new();
    for spec in groups.keys() {
        let lg = parse_group_spec(spec)?;
        let report = structure_report(&lg.group)?;
        for info in &report.sylow {
            if !matches!(info.shape, SylowShape::Cyclic | SylowShape::Dihedral) {
                sylow_ok = false;
                sylow_detail = format!("{spec}: p = {} shape {:?}", info.p, info.shape);
            }
        }
    }
    Ok(vec![
        CaseResult::checked(
            "even-edges-chi-coprime-to-order",
            even_ok,
            format!("failure {first_failure:?}"),
        )
        .with_record(json!({"coprime_maps": maps})),
        CaseResult::checked(
            "odd-edges-chi-gcd-divides-4",
            odd_ok,
            format!("failure {first_failure:?}"),
        ),
        CaseResult::checked(
            "sylow-cyclic-or-dihedral",
            sylow_ok,
            sylow_detail,
        )
        .with_record(json!({"groups": groups.keys().collect::<Vec<_>>()})),
        CaseResult::checked(
            "order-is-lcm-of-stabilizers",
            lcm_ok,
            "some coprime map's stabilizer orders do not reach the group order",
        ),
    ])
}

/// Independent oracle: the structure report's headline flag restated as an
/// element-order census. Odd part of the order must be realized prime by
/// prime; the even part needs an element of order at least half the 2-part.
fn asc_element_order_oracle(g: &FiniteGroup) -> bool {
    let orders: BTreeSet<u64> = (0..g.order())
        .map(|e| g.order_of(e as ElemId) as u64)
        .collect();
    for (p, k) in factorize(g.order()) {
        let part = p.pow(k);
        if p == 2 {
            if k >= 2 && !orders.contains(&(part / 2)) {
                return false;
            }
        } else if !orders.contains(&part) {
            return false;
        }
    }
    true
}

fn suite_structural(config: &SweepConfig) -> Result<Vec<CaseResult>> {
    let mut cases = Vec::new();
    let mut groups: Vec<(String, LabeledGroup)> = Vec::new();
    // Twenty-two groups, all of order at most 120, three of which fail the
    // Sylow shape test.
    for spec in [
        "D:3", "D:4", "D:5", "D:6", "D:7", "D:8", "D:9", "D:12", "D:15", "DxD:3,5", "S4C:3",
        "S4C:9", "S4C:15", "MC:9,3,4", "MC:5,4,2",
    ] {
        groups.push((spec.to_string(), parse_group_spec(spec)?));
    }
    for (name, lines) in [
        ("elementary-2-cubed", "(0 1)\n(2 3)\n(4 5)"),
        ("elementary-3-squared", "(0 1 2)\n(3 4 5)"),
        ("cyclic4-times-2", "(0 1 2 3)\n(4 5)"),
        ("quaternion", "(0 2 1 3)(4 6 5 7)\n(0 4 1 5)(2 7 3 6)"),
        ("symmetric-4", "(0 1 2 3)\n(0 1)"),
        ("cyclic-16", "(0 1 2 3 4 5 6 7 8 9 10 11 12 13 14 15)"),
        ("alternating-4", "(0 1 2)\n(0 1)(2 3)"),
    ] {
        groups.push((name.to_string(), from_perm_lines(lines, name)?));
    }
    let max_order = groups.iter().map(|(_, lg)| lg.group.order()).max().unwrap_or(0);
    cases.push(CaseResult::checked(
        "census-has-twenty-small-groups",
        groups.len() >= 20 && max_order <= 120,
        format!("{} groups, largest order {max_order}", groups.len()),
    ));
    for (name, lg) in &groups {
        let report = structure_report(&lg.group)?;
        let oracle = asc_element_order_oracle(&lg.group);
        cases.push(
            CaseResult::checked(
                format!("almost-sylow-cyclic-{name}"),
                report.is_almost_sylow_cyclic == oracle,
                format!(
                    "report says {}, element-order census says {oracle}",
                    report.is_almost_sylow_cyclic
                ),
            )
            .with_record(json!({
                "order": lg.group.order(),
                "almost_sylow_cyclic": report.is_almost_sylow_cyclic,
            }))
            .with_repro(format!("revmap group -g {}", lg.spec)),
        );
    }
    // Negative controls really are negative.
    let negatives = ["elementary-2-cubed", "elementary-3-squared", "MC:9,3,4"];
    for name in negatives {
        let lg = &groups.iter().find(|(n, _)| n == name).unwrap().1;
        let report = structure_report(&lg.group)?;
        cases.push(CaseResult::checked(
            format!("negative-control-{name}"),
            !report.is_almost_sylow_cyclic,
            "expected a group that fails the Sylow shape test",
        ));
    }
    // Collapsing the cube of the rotation in the order-72 cover leaves the
    // order-24 cover.
    let big = parse_group_spec("S4C:9")?;
    let small = parse_group_spec("S4C:3")?;
    let h3 = big.element("h3")?;
    let kernel = big.group.subgroup_generated(&[h3]);
    let (quotient, _) = big.group.quotient_group(&kernel)?;
    let iso = is_isomorphic(&quotient, &small.group, config.cap)?;
    cases.push(CaseResult::checked(
        "cover-quotient-collapses-to-base",
        iso.is_some(),
        "quotient by the cube of the rotation is not the base cover",
    ));
    Ok(cases)
}

fn suite_flags() -> Result<Vec<CaseResult>> {
    let mut cases = Vec::new();
    let mut corpus: Vec<(&str, MapKind, [&str; 3])> = pattern_maps();
    corpus.push(("D:9", MapKind::Rev, ["h", "gh", "g3h"]));
    corpus.push(("D:9", MapKind::Rev, ["h", "g3h", "gh"]));
    corpus.push(("D:9", MapKind::BiRev, ["h", "gh", "g2h"]));
    corpus.push(("S4C:3", MapKind::Reg, ["hv", "v", "w2v"]));
    for (spec, kind, words) in corpus {
        let lg = parse_group_spec(spec)?;
        let t = triple_of(&lg, words)?;
        let map = build_map(&lg.group, kind, t)?;
        let name = format!("{spec}-{kind}-{}", words.join("-"));
        let repro = map_repro(spec, kind, words);
        let fs = flag_system(&lg.group, &map)?;
        let involutive =
            |sigma: &[usize]| sigma.iter().enumerate().all(|(i, &p)| p != i && sigma[p] == i);
        let counts = fs.cell_orbit_counts();
        let ok = fs.len() == 4 * map.num_edges()
            && involutive(&fs.sigma_v)
            && involutive(&fs.sigma_e)
            && involutive(&fs.sigma_f)
            && counts == (map.num_vertices(), map.num_edges(), map.num_faces());
        let orientable = system_orientable(&fs);
        let parity_ok = map.chi() % 2 == 0 || !orientable;
        cases.push(
            CaseResult::checked(
                name,
                ok && parity_ok,
                format!(
                    "flags {} (expected {}), cell orbits {counts:?}, orientable {orientable}, chi {}",
                    fs.len(),
                    4 * map.num_edges(),
                    map.chi()
                ),
            )
            .with_record(json!({
                "flags": fs.len(),
                "orientable": orientable,
                "chi": map.chi(),
            }))
            .with_repro(repro),
        );
    }
    // The tetrahedron shows up as an orientable regular map on the small
    // cover; its mirror data is a genuine positive control.
    let lg = parse_group_spec("S4C:3")?;
    let t = triple_of(&lg, ["hv", "v", "w2v"])?;
    let map = build_map(&lg.group, MapKind::Reg, t)?;
    let fs = flag_system(&lg.group, &map)?;
    cases.push(CaseResult::checked(
        "tetrahedron-orientable",
        map.chi() == 2 && system_orientable(&fs) && map.num_vertices() == 4,
        format!("chi {} vertices {}", map.chi(), map.num_vertices()),
    ));
    // A regular triple with a repeated commuting generator is the one shape
    // whose flag system cannot exist; the error names the shortfall.
    let lg = parse_group_spec("D:9")?;
    let gh = lg.element("gh")?;
    let t = ReversingTriple::new(lg.element("h")?, gh, gh);
    let map = build_map(&lg.group, MapKind::Reg, t)?;
    let err = flag_system(&lg.group, &map);
    cases.push(CaseResult::checked(
        "repeated-regular-generator-rejected",
        matches!(err, Err(Error::IllFormedFlags { expected: 36, found: 18 })),
        format!("got {err:?}"),
    ));
    Ok(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        let err = verify_suite("bogus", &SweepConfig::default()).unwrap_err();
        assert!(matches!(err, Error::UnknownSuite(_)));
    }

    #[test]
    fn families_suite_passes() {
        let report = verify_suite("families", &SweepConfig::default()).unwrap();
        assert!(report.all_passed(), "{:?}", report.cases);
        assert!(report.passed >= 14);
    }

    #[test]
    fn flags_suite_passes() {
        let report = verify_suite("flags-orientability", &SweepConfig::default()).unwrap();
        assert!(report.all_passed(), "{:?}", report.cases);
        assert_eq!(report.skipped, 0, "every corpus map has a flag system");
    }

    #[test]
    fn discriminant_suite_small_sweep() {
        let config = SweepConfig { max_n: Some(10), cap: None };
        let report = verify_suite("dihedral-discriminants", &config).unwrap();
        assert!(report.all_passed(), "{:?}", report.cases);
    }

    #[test]
    fn oracle_rejects_flat_groups() {
        let lg = from_perm_lines("(0 1)\n(2 3)\n(4 5)", "e8").unwrap();
        assert!(!asc_element_order_oracle(&lg.group));
        let lg = from_perm_lines("(0 1 2 3)\n(4 5)", "z4z2").unwrap();
        assert!(asc_element_order_oracle(&lg.group));
    }
}
