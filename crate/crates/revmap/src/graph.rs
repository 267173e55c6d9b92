//! The underlying graph of a coset map: vertices are the map's vertices,
//! and each edge coset with representative r joins the vertices of r and
//! r z. The multigraph is summarized by its simple base graph, a uniform
//! edge multiplicity, and the recognized base family.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::group::FiniteGroup;
use crate::map::CosetMap;

#[derive(Serialize, Clone, PartialEq, Eq, Debug)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum GraphFamily {
    /// One vertex, every edge a loop.
    SingleVertex,
    /// Two vertices joined by a (multiple) edge.
    Complete2,
    /// Connected 2-regular base graph.
    Cycle { len: usize },
    /// Four vertices, all six base edges present.
    Complete4,
    /// Tensor (categorical) product of two cycles: vertices (i, j) with
    /// (i, j) adjacent to (i +- 1, j +- 1).
    TensorOfCycles { m: usize, n: usize },
    /// Anything else, pinned by a deterministic relabeled adjacency form.
    Other { canonical: Vec<Vec<u32>> },
}

#[derive(Serialize, Clone, PartialEq, Eq, Debug)]
pub struct GraphDescriptor {
    pub family: GraphFamily,
    pub num_vertices: usize,
    pub num_edges: usize,
    /// Degree of every vertex in the multigraph (loops count twice).
    pub valency: usize,
    /// Edge count divided by base edge count when uniform over base edges,
    /// 0 when not uniform.
    pub multiplicity: usize,
    /// Order of the intersection of the vertex subgroup with its conjugate
    /// by z (the raw vertex-pair stabilizer overlap).
    pub stabilizer_overlap: usize,
}

impl std::fmt::Display for GraphDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let base = match &self.family {
            GraphFamily::SingleVertex => format!("bouquet({})", self.num_edges),
            GraphFamily::Complete2 => "K2".to_string(),
            GraphFamily::Cycle { len } => format!("C{len}"),
            GraphFamily::Complete4 => "K4".to_string(),
            GraphFamily::TensorOfCycles { m, n } => format!("C{m}xC{n}"),
            GraphFamily::Other { .. } => {
                format!("other(V={},E={})", self.num_vertices, self.num_edges)
            }
        };
        if self.multiplicity > 1 && !matches!(self.family, GraphFamily::SingleVertex) {
            write!(f, "{base}^({})", self.multiplicity)
        } else {
            f.write_str(&base)
        }
    }
}

fn bfs_component(adj: &[Vec<u32>], start: u32, seen: &mut [bool]) -> Vec<u32> {
    let mut order = vec![start];
    seen[start as usize] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u as usize] {
            if !seen[w as usize] {
                seen[w as usize] = true;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    order
}

fn is_connected(adj: &[Vec<u32>]) -> bool {
    if adj.is_empty() {
        return true;
    }
    let mut seen = vec![false; adj.len()];
    bfs_component(adj, 0, &mut seen).len() == adj.len()
}

fn tensor_of_cycles(m: usize, n: usize) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); m * n];
    for i in 0..m {
        for j in 0..n {
            let v = i * n + j;
            for di in [m - 1, 1] {
                for dj in [n - 1, 1] {
                    let w = ((i + di) % m) * n + (j + dj) % n;
                    adj[v].push(w as u32);
                }
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

/// Backtracking graph isomorphism on simple graphs. Vertices of the left
/// graph are assigned in BFS order so each new vertex (after the first of a
/// component) is constrained to neighbors of an already-placed image.
fn isomorphic(left: &[Vec<u32>], right: &[Vec<u32>]) -> bool {
    let n = left.len();
    if n != right.len() {
        return false;
    }
    let mut ldeg: Vec<usize> = left.iter().map(Vec::len).collect();
    let mut rdeg: Vec<usize> = right.iter().map(Vec::len).collect();
    ldeg.sort_unstable();
    rdeg.sort_unstable();
    if ldeg != rdeg {
        return false;
    }
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if !seen[s] {
            order.extend(bfs_component(left, s as u32, &mut seen));
        }
    }
    let radj: Vec<Vec<bool>> = (0..n)
        .map(|v| {
            let mut row = vec![false; n];
            for &w in &right[v] {
                row[w as usize] = true;
            }
            row
        })
        .collect();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn assign(
        pos: usize,
        order: &[u32],
        left: &[Vec<u32>],
        right: &[Vec<u32>],
        radj: &[Vec<bool>],
        image: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos] as usize;
        for cand in 0..right.len() {
            if used[cand] || right[cand].len() != left[v].len() {
                continue;
            }
            let consistent = left[v].iter().all(|&w| {
                let img = image[w as usize];
                img == usize::MAX || radj[cand][img]
            }) && order[..pos].iter().all(|&placed| {
                let p = placed as usize;
                let adjacent = left[v].contains(&(p as u32));
                adjacent == radj[cand][image[p]]
            });
            if !consistent {
                continue;
            }
            image[v] = cand;
            used[cand] = true;
            if assign(pos + 1, order, left, right, radj, image, used) {
                return true;
            }
            image[v] = usize::MAX;
            used[cand] = false;
        }
        false
    }
    assign(0, &order, left, right, &radj, &mut image, &mut used)
}

/// Deterministic relabeled adjacency form: BFS relabeling from every start
/// vertex (neighbors taken in ascending original id), keeping the
/// lexicographically smallest resulting sorted adjacency table.
fn deterministic_form(adj: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = adj.len();
    let mut best: Option<Vec<Vec<u32>>> = None;
    for start in 0..n as u32 {
        let mut label = vec![u32::MAX; n];
        let mut next = 0u32;
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([start]);
        seen[start as usize] = true;
        let component_starts: Vec<u32> = (0..n as u32).filter(|&v| v != start).collect();
        while next < n as u32 {
            while let Some(u) = queue.pop_front() {
                label[u as usize] = next;
                next += 1;
                for &w in &adj[u as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
            if let Some(&s) = component_starts.iter().find(|&&v| !seen[v as usize]) {
                seen[s as usize] = true;
                queue.push_back(s);
            }
        }
        let mut table = vec![Vec::new(); n];
        for v in 0..n {
            for &w in &adj[v] {
                table[label[v] as usize].push(label[w as usize]);
            }
        }
        for row in &mut table {
            row.sort_unstable();
        }
        if best.as_ref().is_none_or(|b| table < *b) {
            best = Some(table);
        }
    }
    best.unwrap_or_default()
}

fn detect_family(adj: &[Vec<u32>]) -> GraphFamily {
    let n = adj.len();
    let edge_count: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    if n == 2 && edge_count == 1 {
        return GraphFamily::Complete2;
    }
    if n >= 3 && adj.iter().all(|l| l.len() == 2) && is_connected(adj) {
        return GraphFamily::Cycle { len: n };
    }
    if n == 4 && edge_count == 6 {
        return GraphFamily::Complete4;
    }
    if adj.iter().all(|l| l.len() == 4) {
        let mut m = 3;
        while m * m <= n {
            if n.is_multiple_of(m) {
                let k = n / m;
                if k >= 3 && isomorphic(adj, &tensor_of_cycles(m, k)) {
                    return GraphFamily::TensorOfCycles { m, n: k };
                }
            }
            m += 1;
        }
    }
    GraphFamily::Other { canonical: deterministic_form(adj) }
}

pub fn underlying_graph(g: &FiniteGroup, map: &CosetMap) -> GraphDescriptor {
    let z = map.triple.z;
    let nv = map.num_vertices();
    let ne = map.num_edges();
    let mut pair_counts: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for coset in &map.edges.cosets {
        let a = map.vertex_of(coset.rep);
        let b = map.vertex_of(g.mul(coset.rep, z));
        *pair_counts.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    let base_edges = pair_counts.len();
    let uniform = pair_counts.values().all(|&c| c == ne / base_edges) && ne.is_multiple_of(base_edges);
    let multiplicity = if uniform { ne / base_edges } else { 0 };

    let overlap = {
        let hv = &map.vertex_subgroup;
        let mut mask = vec![false; g.order()];
        for &m in hv.members() {
            mask[g.conj(m, z) as usize] = true;
        }
        hv.members().iter().filter(|&&m| mask[m as usize]).count()
    };

    let family = if nv == 1 {
        debug_assert!(pair_counts.keys().all(|&(a, b)| a == b), "all edges are loops");
        GraphFamily::SingleVertex
    } else {
        debug_assert!(pair_counts.keys().all(|&(a, b)| a != b), "no loops off one vertex");
        let mut adj = vec![Vec::new(); nv];
        for &(a, b) in pair_counts.keys() {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        debug_assert!(is_connected(&adj), "coset graphs are connected");
        detect_family(&adj)
    };

    GraphDescriptor {
        family,
        num_vertices: nv,
        num_edges: ne,
        valency: 2 * ne / nv,
        multiplicity,
        stabilizer_overlap: overlap,
    }
}
