//! Constructors for the group families used throughout the crate, each built
//! as a faithful permutation group with named generators. Every constructor
//! verifies its defining relations and the expected group order before
//! returning, so a successful return is a certificate that the permutation
//! model realizes the intended abstract group.
//!
//! A small text language selects groups (`D:9`, `DxD:3,5`, `R3:3,5,7`,
//! `S4C:9`, `MC:9,3,4`, `PERM:<file>`), and [`LabeledGroup::element`] parses
//! words in the generator labels such as `g3h` or `a^-1*w`.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::group::{ElemId, FiniteGroup};
use crate::perm::Perm;

/// A finite group together with its generator labels and the spec string
/// that reconstructs it.
#[derive(Debug, Clone)]
pub struct LabeledGroup {
    pub group: FiniteGroup,
    /// Label to element id, covering generators and a few derived names
    /// (for products of dihedral factors `w = u v`, for the octahedral
    /// double cover also `u` and `w2`).
    pub labels: BTreeMap<String, ElemId>,
    /// Canonical spec text, e.g. `D:9`.
    pub spec: String,
}

impl LabeledGroup {
    /// Resolve a word in the generator labels to an element id.
    ///
    /// Grammar: factors are a label (greedy longest match) with an optional
    /// exponent (`^` optional, sign allowed), separated by optional `*` or
    /// whitespace. `1` denotes the identity. A word starting with `(` is
    /// parsed as a permutation in cycle notation instead.
    pub fn element(&self, word: &str) -> Result<ElemId> {
        let word = word.trim();
        if word.starts_with('(') {
            let p = Perm::parse_cycles(word, Some(self.group.degree()))?;
            return self.group.id_of(&p).ok_or(Error::NotAMember);
        }
        let bad = |reason: &str| Error::BadWord { word: word.into(), reason: reason.into() };
        if word.is_empty() {
            return Err(bad("empty word"));
        }
        let chars: Vec<char> = word.chars().collect();
        let mut pos = 0usize;
        let mut acc = self.group.identity_id();
        while pos < chars.len() {
            let c = chars[pos];
            if c.is_whitespace() || c == '*' {
                pos += 1;
                continue;
            }
            if c == '1' {
                pos += 1;
                continue;
            }
            // Greedy longest label match at this position.
            let rest: String = chars[pos..].iter().collect();
            let hit = self
                .labels
                .iter()
                .filter(|(label, _)| rest.starts_with(label.as_str()))
                .max_by_key(|(label, _)| label.len());
            let (label, &id) = match hit {
                Some(found) => found,
                None => return Err(bad(&format!("no generator label at '{rest}'"))),
            };
            pos += label.chars().count();
            let mut exponent: i64 = 1;
            let mut probe = pos;
            if probe < chars.len() && chars[probe] == '^' {
                probe += 1;
            }
            let sign_at = probe;
            if probe < chars.len() && (chars[probe] == '-' || chars[probe] == '+') {
                probe += 1;
            }
            let digits_start = probe;
            while probe < chars.len() && chars[probe].is_ascii_digit() {
                probe += 1;
            }
            if probe > digits_start {
                let text: String = chars[sign_at..probe].iter().collect();
                exponent = text
                    .parse()
                    .map_err(|_| bad(&format!("bad exponent '{text}'")))?;
                pos = probe;
            } else if sign_at != probe || chars.get(pos) == Some(&'^') {
                return Err(bad("exponent marker without digits"));
            }
            acc = self.group.mul(acc, self.group.power(id, exponent));
        }
        Ok(acc)
    }

    /// Element ids for a comma separated list of words.
    pub fn elements(&self, words: &str) -> Result<Vec<ElemId>> {
        words.split(',').map(|w| self.element(w)).collect()
    }

    pub fn label_of(&self, id: ElemId) -> Option<&str> {
        self.labels
            .iter()
            .find_map(|(label, &e)| (e == id).then_some(label.as_str()))
    }
}

fn perm_pow(p: &Perm, k: u32) -> Perm {
    let mut acc = Perm::identity(p.degree());
    for _ in 0..k {
        acc = acc.compose(p);
    }
    acc
}

/// Check one defining relation: `lhs` must equal `rhs`.
fn relation(family: &'static str, name: &str, lhs: &Perm, rhs: &Perm) -> Result<()> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(Error::RelationFailed { family, relation: name.to_string() })
    }
}

fn close(
    family: &'static str,
    spec: String,
    degree: usize,
    gens: Vec<(String, Perm)>,
    derived: Vec<(String, Perm)>,
    expected_order: usize,
) -> Result<LabeledGroup> {
    let group = FiniteGroup::closure_from_generators(degree, &gens, None)?;
    if group.order() != expected_order {
        return Err(Error::RelationFailed {
            family,
            relation: format!("group order {} (expected {expected_order})", group.order()),
        });
    }
    let mut labels = BTreeMap::new();
    for (label, perm) in gens.iter().chain(derived.iter()) {
        let id = group.id_of(perm).ok_or(Error::NotAMember)?;
        labels.insert(label.clone(), id);
    }
    Ok(LabeledGroup { group, labels, spec })
}

fn cycle_on(degree: usize, start: usize, len: usize) -> Perm {
    let mut images: Vec<u16> = (0..degree as u16).collect();
    for i in 0..len {
        images[start + i] = (start + (i + 1) % len) as u16;
    }
    Perm::from_images(images).expect("rotation block is a bijection")
}

fn negate_on(degree: usize, blocks: &[(usize, usize)]) -> Perm {
    let mut images: Vec<u16> = (0..degree as u16).collect();
    for &(start, len) in blocks {
        for i in 0..len {
            images[start + i] = (start + (len - i) % len) as u16;
        }
    }
    Perm::from_images(images).expect("negation block is a bijection")
}

/// Dihedral group of order 2n, generated by a rotation `g` of order n and a
/// reflection `h`. Degenerate cases: n = 1 gives the order-2 group (with
/// `g` trivial) and n = 2 the Klein four group.
pub fn dihedral(n: usize) -> Result<LabeledGroup> {
    const FAMILY: &str = "dihedral";
    let (degree, g, h) = match n {
        0 => {
            return Err(Error::FamilyParams { family: FAMILY, reason: "n must be >= 1".into() })
        }
        1 => (2, Perm::identity(2), Perm::parse_cycles("(0 1)", Some(2))?),
        2 => (
            4,
            Perm::parse_cycles("(0 1)(2 3)", Some(4))?,
            Perm::parse_cycles("(0 2)(1 3)", Some(4))?,
        ),
        _ => (n, cycle_on(n, 0, n), negate_on(n, &[(0, n)])),
    };
    relation(FAMILY, "g^n = 1", &perm_pow(&g, n as u32), &Perm::identity(degree))?;
    relation(FAMILY, "h^2 = 1", &h.compose(&h), &Perm::identity(degree))?;
    let gh = g.compose(&h);
    relation(FAMILY, "(g h)^2 = 1", &gh.compose(&gh), &Perm::identity(degree))?;
    close(
        FAMILY,
        format!("D:{n}"),
        degree,
        vec![("g".into(), g), ("h".into(), h)],
        vec![],
        2 * n,
    )
}

/// Direct product of two dihedral groups of orders 2m and 2n, acting on
/// disjoint blocks. Generators: rotations `a`, `b` and reflections `u`, `v`;
/// the derived label `w` is the product `u v`.
pub fn dihedral_product(m: usize, n: usize) -> Result<LabeledGroup> {
    const FAMILY: &str = "dihedral-product";
    if m < 3 || n < 3 {
        return Err(Error::FamilyParams {
            family: FAMILY,
            reason: format!("factors must be >= 3, got ({m}, {n})"),
        });
    }
    let degree = m + n;
    let e = Perm::identity(degree);
    let a = cycle_on(degree, 0, m);
    let u = negate_on(degree, &[(0, m)]);
    let b = cycle_on(degree, m, n);
    let v = negate_on(degree, &[(m, n)]);
    let w = u.compose(&v);
    relation(FAMILY, "a^m = 1", &perm_pow(&a, m as u32), &e)?;
    relation(FAMILY, "b^n = 1", &perm_pow(&b, n as u32), &e)?;
    relation(FAMILY, "u^2 = 1", &u.compose(&u), &e)?;
    relation(FAMILY, "v^2 = 1", &v.compose(&v), &e)?;
    let au = a.compose(&u);
    relation(FAMILY, "(a u)^2 = 1", &au.compose(&au), &e)?;
    let bv = b.compose(&v);
    relation(FAMILY, "(b v)^2 = 1", &bv.compose(&bv), &e)?;
    for (name, x, y) in [
        ("a b = b a", &a, &b),
        ("a v = v a", &a, &v),
        ("u b = b u", &u, &b),
        ("u v = v u", &u, &v),
    ] {
        relation(FAMILY, name, &x.compose(y), &y.compose(x))?;
    }
    close(
        FAMILY,
        format!("DxD:{m},{n}"),
        degree,
        vec![("a".into(), a), ("u".into(), u), ("b".into(), b), ("v".into(), v)],
        vec![("w".into(), w)],
        4 * m * n,
    )
}

/// Extension of Z_m x Z_n x Z_l by a Klein four group whose involutions
/// invert the factor pairs (first, third), (second, third), (first, second).
/// Generators: rotations `a`, `b`, `c` and the inverting involutions `u`
/// (first and third blocks) and `v` (second and third); `w = u v` inverts
/// the first and second.
pub fn rank3_cyclic_ext(m: usize, n: usize, l: usize) -> Result<LabeledGroup> {
    const FAMILY: &str = "rank3-cyclic-ext";
    if m < 3 || n < 3 || l < 3 {
        return Err(Error::FamilyParams {
            family: FAMILY,
            reason: format!("factors must be >= 3, got ({m}, {n}, {l})"),
        });
    }
    let degree = m + n + l;
    let e = Perm::identity(degree);
    let a = cycle_on(degree, 0, m);
    let b = cycle_on(degree, m, n);
    let c = cycle_on(degree, m + n, l);
    let u = negate_on(degree, &[(0, m), (m + n, l)]);
    let v = negate_on(degree, &[(m, n), (m + n, l)]);
    let w = u.compose(&v);
    relation(FAMILY, "a^m = 1", &perm_pow(&a, m as u32), &e)?;
    relation(FAMILY, "b^n = 1", &perm_pow(&b, n as u32), &e)?;
    relation(FAMILY, "c^l = 1", &perm_pow(&c, l as u32), &e)?;
    relation(FAMILY, "u^2 = 1", &u.compose(&u), &e)?;
    relation(FAMILY, "v^2 = 1", &v.compose(&v), &e)?;
    relation(FAMILY, "u v = v u", &u.compose(&v), &v.compose(&u))?;
    for (name, x, y) in [("a b = b a", &a, &b), ("a c = c a", &a, &c), ("b c = c b", &b, &c)] {
        relation(FAMILY, name, &x.compose(y), &y.compose(x))?;
    }
    let conj = |x: &Perm, t: &Perm| t.inverse().compose(x).compose(t);
    relation(FAMILY, "u a u = a^-1", &conj(&a, &u), &a.inverse())?;
    relation(FAMILY, "u b u = b", &conj(&b, &u), &b)?;
    relation(FAMILY, "u c u = c^-1", &conj(&c, &u), &c.inverse())?;
    relation(FAMILY, "v a v = a", &conj(&a, &v), &a)?;
    relation(FAMILY, "v b v = b^-1", &conj(&b, &v), &b.inverse())?;
    relation(FAMILY, "v c v = c^-1", &conj(&c, &v), &c.inverse())?;
    close(
        FAMILY,
        format!("R3:{m},{n},{l}"),
        degree,
        vec![
            ("a".into(), a),
            ("b".into(), b),
            ("c".into(), c),
            ("u".into(), u),
            ("v".into(), v),
        ],
        vec![("w".into(), w)],
        4 * m * n * l,
    )
}

/// Order-8m cover of the octahedral family, defined for odd m divisible
/// by 3. The model is a semidirect product of a Klein four group K by the
/// dihedral group of order 2m, realized on 4m points indexed (k, t) with
/// k in 0..4 coding K and t in 0..m coding the rotation power. Generators
/// are `w` (order 4), `v` (reflection) and `h` (rotation of order m);
/// derived labels `u = w v` and `w2 = w^2`. At m = 3 the group is the
/// symmetric group on four letters.
pub fn s4_cover(m: usize) -> Result<LabeledGroup> {
    const FAMILY: &str = "s4-cover";
    if m < 3 || m.is_multiple_of(2) || !m.is_multiple_of(3) {
        return Err(Error::FamilyParams {
            family: FAMILY,
            reason: format!("m must be odd and divisible by 3, got {m}"),
        });
    }
    let degree = 4 * m;
    let point = |k: usize, t: usize| (4 * t + k) as u16;
    let build = |f: &dyn Fn(usize, usize) -> (usize, usize)| {
        let mut images = vec![0u16; degree];
        for t in 0..m {
            for k in 0..4 {
                let (k2, t2) = f(k, t);
                images[4 * t + k] = point(k2, t2);
            }
        }
        Perm::from_images(images).expect("generator is a bijection")
    };
    // k codes the Klein group additively (XOR); e(t) tracks the rotation
    // action on the code of the second Klein generator.
    let e_of = |t: usize| [2usize, 1, 3][t % 3];
    let u = build(&|k, t| (k ^ e_of(t), t));
    let rho_v = [0usize, 1, 3, 2];
    let v = build(&|k, t| (rho_v[k], (m - t) % m));
    let h = build(&|k, t| (k, (t + 1) % m));
    let w = u.compose(&v);
    let w2 = w.compose(&w);
    let e = Perm::identity(degree);
    relation(FAMILY, "v^2 = 1", &v.compose(&v), &e)?;
    relation(FAMILY, "u^2 = 1", &u.compose(&u), &e)?;
    relation(FAMILY, "w^4 = 1", &perm_pow(&w, 4), &e)?;
    relation(FAMILY, "h^m = 1", &perm_pow(&h, m as u32), &e)?;
    let conj = |x: &Perm, t: &Perm| t.inverse().compose(x).compose(t);
    relation(FAMILY, "v h v = h^-1", &conj(&h, &v), &h.inverse())?;
    relation(FAMILY, "h^-1 u h = w^2 u", &conj(&u, &h), &w2.compose(&u))?;
    relation(FAMILY, "h^-1 (w^2 u) h = w^2", &conj(&w2.compose(&u), &h), &w2)?;
    relation(FAMILY, "h^-1 w^2 h = u", &conj(&w2, &h), &u)?;
    close(
        FAMILY,
        format!("S4C:{m}"),
        degree,
        vec![("w".into(), w), ("v".into(), v), ("h".into(), h)],
        vec![("u".into(), u), ("w2".into(), w2)],
        8 * m,
    )
}

/// Metacyclic group Z_n : Z_m with `h^-1 g h = g^lambda`, acting on n + m
/// points. Requires lambda^m = 1 mod n and gcd(lambda, n) = 1.
pub fn metacyclic(n: usize, m: usize, lambda: usize) -> Result<LabeledGroup> {
    const FAMILY: &str = "metacyclic";
    if n < 2 || m < 1 || lambda == 0 || lambda >= n {
        return Err(Error::FamilyParams {
            family: FAMILY,
            reason: format!("need n >= 2, m >= 1, 0 < lambda < n, got ({n}, {m}, {lambda})"),
        });
    }
    if num_integer::gcd(lambda, n) != 1 {
        return Err(Error::FamilyParams {
            family: FAMILY,
            reason: format!("lambda = {lambda} is not invertible mod {n}"),
        });
    }
    let mut pw = 1usize;
    for _ in 0..m {
        pw = pw * lambda % n;
    }
    if pw != 1 {
        return Err(Error::FamilyParams {
            family: FAMILY,
            reason: format!("lambda^m = {pw} mod {n}, expected 1"),
        });
    }
    let degree = n + m;
    let g = cycle_on(degree, 0, n);
    let mut images: Vec<u16> = (0..degree as u16).collect();
    for (x, image) in images.iter_mut().enumerate().take(n) {
        *image = (x * lambda % n) as u16;
    }
    for i in 0..m {
        images[n + i] = (n + (i + 1) % m) as u16;
    }
    let h = Perm::from_images(images).expect("metacyclic generator is a bijection");
    let e = Perm::identity(degree);
    relation(FAMILY, "g^n = 1", &perm_pow(&g, n as u32), &e)?;
    relation(FAMILY, "h^m = 1", &perm_pow(&h, m as u32), &e)?;
    relation(
        FAMILY,
        "h^-1 g h = g^lambda",
        &h.inverse().compose(&g).compose(&h),
        &perm_pow(&g, lambda as u32),
    )?;
    close(
        FAMILY,
        format!("MC:{n},{m},{lambda}"),
        degree,
        vec![("g".into(), g), ("h".into(), h)],
        vec![],
        n * m,
    )
}

/// Group from a file of permutations in cycle notation, one per non-empty
/// non-comment line, labeled g0, g1, ... in file order. The degree is the
/// smallest covering all points.
pub fn from_perm_file(path: &Path) -> Result<LabeledGroup> {
    let text = std::fs::read_to_string(path)?;
    from_perm_lines(&text, &format!("PERM:{}", path.display()))
}

pub fn from_perm_lines(text: &str, spec: &str) -> Result<LabeledGroup> {
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if lines.is_empty() {
        return Err(Error::BadGroupSpec(format!("{spec}: no permutations found")));
    }
    let mut degree = 1usize;
    for line in &lines {
        degree = degree.max(Perm::parse_cycles(line, None)?.degree());
    }
    let gens: Vec<(String, Perm)> = lines
        .iter()
        .enumerate()
        .map(|(i, line)| Ok((format!("g{i}"), Perm::parse_cycles(line, Some(degree))?)))
        .collect::<Result<_>>()?;
    let group = FiniteGroup::closure_from_generators(degree, &gens, None)?;
    let mut labels = BTreeMap::new();
    for (label, perm) in &gens {
        labels.insert(label.clone(), group.id_of(perm).ok_or(Error::NotAMember)?);
    }
    Ok(LabeledGroup { group, labels, spec: spec.to_string() })
}

fn parse_params<const N: usize>(spec: &str, rest: &str) -> Result<[usize; N]> {
    let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(Error::BadGroupSpec(spec.to_string()));
    }
    let mut out = [0usize; N];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part.parse().map_err(|_| Error::BadGroupSpec(spec.to_string()))?;
    }
    Ok(out)
}

/// Parse a group spec: `D:n`, `DxD:m,n`, `R3:m,n,l`, `S4C:m`,
/// `MC:n,m,lambda`, or `PERM:<file>`.
pub fn parse_group_spec(spec: &str) -> Result<LabeledGroup> {
    let spec = spec.trim();
    let (head, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::BadGroupSpec(spec.to_string()))?;
    match head.trim() {
        "D" => {
            let [n] = parse_params::<1>(spec, rest)?;
            dihedral(n)
        }
        "DxD" => {
            let [m, n] = parse_params::<2>(spec, rest)?;
            dihedral_product(m, n)
        }
        "R3" => {
            let [m, n, l] = parse_params::<3>(spec, rest)?;
            rank3_cyclic_ext(m, n, l)
        }
        "S4C" => {
            let [m] = parse_params::<1>(spec, rest)?;
            s4_cover(m)
        }
        "MC" => {
            let [n, m, lambda] = parse_params::<3>(spec, rest)?;
            metacyclic(n, m, lambda)
        }
        "PERM" => from_perm_file(Path::new(rest.trim())),
        _ => Err(Error::BadGroupSpec(spec.to_string())),
    }
}
