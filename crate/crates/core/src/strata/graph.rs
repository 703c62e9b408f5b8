//! Stable graphs, their canonical forms, automorphism counts and enumeration.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kappa::KappaMonomial;

/// A connected stable graph. Half-edges are numbered legs first
/// (`0..n`), then `n + 2e` and `n + 2e + 1` for the two ends of edge `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StableGraph {
    genera: Vec<u32>,
    legs: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl StableGraph {
    pub fn new(genera: Vec<u32>, legs: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let g = Self { genera, legs, edges };
        g.validate()?;
        Ok(g)
    }

    /// The single-vertex graph of `M_{g,n}`.
    pub fn smooth(g: u32, n: usize) -> Result<Self> {
        Self::new(vec![g], vec![0; n], Vec::new())
    }

    fn validate(&self) -> Result<()> {
        let nv = self.genera.len();
        if nv == 0 {
            return Err(Error::Domain("a stable graph needs a vertex".into()));
        }
        if self.legs.iter().chain(self.edges.iter().flat_map(|(a, b)| [a, b])).any(|&v| v >= nv) {
            return Err(Error::Domain("half-edge attached to a missing vertex".into()));
        }
        for v in 0..nv {
            if 2 * self.genera[v] + self.valence(v) as u32 <= 2 {
                return Err(Error::Domain(format!("vertex {v} is unstable")));
            }
        }
        if !self.connected() {
            return Err(Error::Domain("graph is disconnected".into()));
        }
        Ok(())
    }

    fn connected(&self) -> bool {
        let nv = self.genera.len();
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.legs.len() + 2 * self.edges.len()
    }

    /// `h^1 = |E| - |V| + 1`.
    pub fn h1(&self) -> u32 {
        (self.edges.len() + 1 - self.genera.len()) as u32
    }

    pub fn genus(&self) -> u32 {
        self.genera.iter().sum::<u32>() + self.h1()
    }

    /// Vertex carrying half-edge `h`.
    pub fn vertex_of(&self, h: usize) -> usize {
        let n = self.legs.len();
        if h < n {
            self.legs[h]
        } else {
            let (a, b) = self.edges[(h - n) / 2];
            if (h - n).is_multiple_of(2) {
                a
            } else {
                b
            }
        }
    }

    /// Half-edges at `v`, in increasing order.
    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        (0..self.num_half_edges()).filter(|&h| self.vertex_of(h) == v).collect()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.legs.iter().filter(|&&x| x == v).count()
            + self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum::<usize>()
    }

    /// Dimension `3g - 3 + n` of the ambient moduli space.
    pub fn ambient_dim(&self) -> u32 {
        3 * self.genus() + self.legs.len() as u32 - 3
    }

    /// Order of the automorphism group acting on vertices and half-edges, legs fixed.
    pub fn automorphism_order(&self) -> u64 {
        let bare = Decoration::trivial(self);
        let base = key_under(self, &bare, &identity(self.num_vertices()));
        let mut stab = 0u64;
        for_each_relabeling(self, &bare, &mut |perm| {
            if key_under(self, &bare, perm) == base {
                stab += 1;
            }
        });
        let nv = self.num_vertices();
        let mut mult = vec![vec![0u64; nv]; nv];
        for &(a, b) in &self.edges {
            let (a, b) = (a.min(b), a.max(b));
            mult[a][b] += 1;
        }
        let fact = |m: u64| (1..=m).product::<u64>();
        let mut out = stab;
        for a in 0..nv {
            for b in a..nv {
                let m = mult[a][b];
                out *= fact(m);
                if a == b {
                    out *= 1 << m;
                }
            }
        }
        out
    }

    pub fn canonical(&self) -> StableGraph {
        canonicalize(self, &Decoration::trivial(self)).0
    }

    pub fn to_json(&self) -> GraphJson {
        let n = self.legs.len();
        GraphJson {
            vertices: self.genera.iter().map(|&genus| VertexJson { genus }).collect(),
            legs: self.legs.clone(),
            edges: self.edges.iter().enumerate().map(|(e, &(a, b))| [[a, n + 2 * e], [b, n + 2 * e + 1]]).collect(),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<Self> {
        Self::new(
            j.vertices.iter().map(|v| v.genus).collect(),
            j.legs.clone(),
            j.edges.iter().map(|e| (e[0][0], e[1][0])).collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub genus: u32,
}

/// `{"vertices":[{"genus":h}], "legs":[v,...], "edges":[[[v,half_edge],[w,half_edge]],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub legs: Vec<usize>,
    pub edges: Vec<[[usize; 2]; 2]>,
}

/// Kappa monomials per vertex and psi exponents per half-edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decoration {
    pub kappa: Vec<KappaMonomial>,
    pub psi: Vec<u32>,
}

impl Decoration {
    pub fn trivial(g: &StableGraph) -> Self {
        Self { kappa: vec![Vec::new(); g.num_vertices()], psi: vec![0; g.num_half_edges()] }
    }

    pub fn degree(&self) -> u32 {
        self.kappa.iter().map(|k| crate::kappa::monomial_degree(k)).sum::<u32>() + self.psi.iter().sum::<u32>()
    }
}

type VertexKey = (u32, KappaMonomial);
type EdgeKey = ((usize, u32), (usize, u32));
type GraphKey = (Vec<VertexKey>, Vec<(usize, u32)>, Vec<EdgeKey>);

fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// The graph key after sending old vertex `v` to new index `perm[v]`.
fn key_under(g: &StableGraph, d: &Decoration, perm: &[usize]) -> GraphKey {
    let nv = g.num_vertices();
    let n = g.num_legs();
    let mut verts = vec![(0, Vec::new()); nv];
    for v in 0..nv {
        verts[perm[v]] = (g.genera[v], d.kappa[v].clone());
    }
    let legs = (0..n).map(|l| (perm[g.legs[l]], d.psi[l])).collect();
    let mut edges: Vec<EdgeKey> = g
        .edges
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| {
            let x = (perm[a], d.psi[n + 2 * e]);
            let y = (perm[b], d.psi[n + 2 * e + 1]);
            if x <= y {
                (x, y)
            } else {
                (y, x)
            }
        })
        .collect();
    edges.sort();
    (verts, legs, edges)
}

/// Calls `f` on every relabeling that sorts the vertex data.
fn for_each_relabeling(g: &StableGraph, d: &Decoration, f: &mut dyn FnMut(&[usize])) {
    let nv = g.num_vertices();
    let data: Vec<VertexKey> = (0..nv).map(|v| (g.genera[v], d.kappa[v].clone())).collect();
    let mut sorted = data.clone();
    sorted.sort();
    let mut perm = vec![usize::MAX; nv];
    let mut used = vec![false; nv];
    fn rec(
        pos: usize,
        data: &[VertexKey],
        sorted: &[VertexKey],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if pos == data.len() {
            f(perm);
            return;
        }
        for v in 0..data.len() {
            if !used[v] && data[v] == sorted[pos] {
                used[v] = true;
                perm[v] = pos;
                rec(pos + 1, data, sorted, perm, used, f);
                used[v] = false;
            }
        }
    }
    rec(0, &data, &sorted, &mut perm, &mut used, f);
}

/// Canonical representative of a decorated graph.
pub fn canonicalize(g: &StableGraph, d: &Decoration) -> (StableGraph, Decoration) {
    let mut best: Option<GraphKey> = None;
    for_each_relabeling(g, d, &mut |perm| {
        let k = key_under(g, d, perm);
        if best.as_ref().is_none_or(|b| k < *b) {
            best = Some(k);
        }
    });
    let (verts, legs, edges) = best.expect("at least one relabeling");
    let graph = StableGraph {
        genera: verts.iter().map(|v| v.0).collect(),
        legs: legs.iter().map(|l| l.0).collect(),
        edges: edges.iter().map(|(x, y)| (x.0, y.0)).collect(),
    };
    let mut psi: Vec<u32> = legs.iter().map(|l| l.1).collect();
    for (x, y) in &edges {
        psi.push(x.1);
        psi.push(y.1);
    }
    let deco = Decoration { kappa: verts.into_iter().map(|v| v.1).collect(), psi };
    (graph, deco)
}

fn check_stable(g: u32, n: usize) -> Result<()> {
    if 2 * g + n as u32 <= 2 {
        return Err(Error::Unstable { g, n: n as u32 });
    }
    Ok(())
}

/// One representative per isomorphism class of stable graphs of genus `g` with `n` legs,
/// sorted by edge count and then by canonical form.
pub fn enumerate_stable_graphs(g: u32, n: usize) -> Result<Vec<StableGraph>> {
    check_stable(g, n)?;
    let mut all: BTreeSet<(usize, StableGraph)> = BTreeSet::new();
    let start = StableGraph::smooth(g, n)?.canonical();
    let mut layer = vec![start.clone()];
    all.insert((0, start));
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for graph in &layer {
            for h in degenerations(graph) {
                let c = h.canonical();
                if all.insert((c.num_edges(), c.clone())) {
                    next.insert(c);
                }
            }
        }
        layer = next.into_iter().collect();
    }
    Ok(all.into_iter().map(|(_, g)| g).collect())
}

/// Graphs with one more edge contracting to `g`.
fn degenerations(g: &StableGraph) -> Vec<StableGraph> {
    let mut out = Vec::new();
    let nv = g.num_vertices();
    for v in 0..nv {
        if g.genera[v] >= 1 {
            let mut h = g.clone();
            h.genera[v] -= 1;
            h.edges.push((v, v));
            if h.validate().is_ok() {
                out.push(h);
            }
        }
        // Split v into v and a new vertex w; each half-edge at v may move to w.
        let hs = g.half_edges_at(v);
        let w = nv;
        for mask in 0u64..(1 << hs.len()) {
            for hw in 0..=g.genera[v] {
                let mut h = g.clone();
                h.genera[v] -= hw;
                h.genera.push(hw);
                let n = g.num_legs();
                let mut moved_loop_ends: Vec<(usize, bool)> = Vec::new();
                for (bit, &he) in hs.iter().enumerate() {
                    if mask >> bit & 1 == 0 {
                        continue;
                    }
                    if he < n {
                        h.legs[he] = w;
                    } else {
                        moved_loop_ends.push(((he - n) / 2, (he - n) % 2 == 1));
                    }
                }
                for (e, second) in moved_loop_ends {
                    if second {
                        h.edges[e].1 = w;
                    } else {
                        h.edges[e].0 = w;
                    }
                }
                h.edges.push((v, w));
                if h.validate().is_ok() {
                    out.push(h);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::census::brute_force_graphs;

    #[test]
    fn census_matches_brute_force_graphs() {
        for (g, n, count) in [(0, 3, 1), (0, 4, 4), (1, 1, 2), (1, 2, 5), (2, 0, 7), (0, 5, 26)] {
            let fast = enumerate_stable_graphs(g, n).unwrap();
            let slow = brute_force_graphs(g, n);
            assert_eq!(fast.len(), slow.len(), "({g},{n})");
            assert_eq!(fast.iter().cloned().collect::<BTreeSet<_>>(), slow);
            assert_eq!(fast.len(), count, "({g},{n})");
            for graph in &fast {
                assert_eq!(graph.genus(), g);
            }
        }
    }

    #[test]
    fn larger_census_agrees() {
        let fast = enumerate_stable_graphs(2, 1).unwrap();
        assert_eq!(fast.iter().cloned().collect::<BTreeSet<_>>(), brute_force_graphs(2, 1));
    }

    #[test]
    fn automorphisms() {
        assert_eq!(StableGraph::smooth(0, 3).unwrap().automorphism_order(), 1);
        let loop2 = StableGraph::new(vec![1], vec![], vec![(0, 0)]).unwrap();
        assert_eq!(loop2.automorphism_order(), 2);
        let theta = StableGraph::new(vec![0, 0], vec![], vec![(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(theta.automorphism_order(), 12);
        let dumbbell = StableGraph::new(vec![0, 0], vec![], vec![(0, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(dumbbell.automorphism_order(), 8);
        let two_loops = StableGraph::new(vec![0], vec![], vec![(0, 0), (0, 0)]).unwrap();
        assert_eq!(two_loops.automorphism_order(), 8);
    }

    #[test]
    fn canonical_is_idempotent_and_relabel_invariant() {
        let a = StableGraph::new(vec![0, 1], vec![0, 1], vec![(0, 1), (0, 0)]).unwrap();
        let b = StableGraph::new(vec![1, 0], vec![1, 0], vec![(0, 1), (1, 1)]).unwrap();
        assert_eq!(a.canonical(), b.canonical());
        assert_eq!(a.canonical().canonical(), a.canonical());
    }

    #[test]
    fn unstable_is_an_error() {
        assert!(matches!(enumerate_stable_graphs(0, 2), Err(Error::Unstable { .. })));
        assert!(enumerate_stable_graphs(1, 0).is_err());
    }

    #[test]
    fn json_round_trip() {
        for graph in enumerate_stable_graphs(1, 2).unwrap() {
            assert_eq!(StableGraph::from_json(&graph.to_json()).unwrap(), graph);
        }
    }
}
