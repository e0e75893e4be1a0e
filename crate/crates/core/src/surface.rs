//! The surface graph obtained by gluing the sides of a polygon labelled by an
//! orientable quadratic word.

use serde::Serialize;

use crate::quadratic::OrientableWord;

/// One traversal of an edge by the circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Traversal {
    pub edge: usize,
    pub forward: bool,
}

impl Traversal {
    fn start(self) -> EdgeEnd {
        EdgeEnd { edge: self.edge, head: !self.forward }
    }

    fn end(self) -> EdgeEnd {
        EdgeEnd { edge: self.edge, head: self.forward }
    }
}

/// An end of an edge, identified by the edge and whether it is the head.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeEnd {
    pub edge: usize,
    pub head: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub label: u8,
    pub tail: usize,
    pub head: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerianCircuit {
    pub traversals: Vec<Traversal>,
    pub regular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceGraph {
    pub vertex_count: usize,
    pub edges: Vec<Edge>,
    /// Cyclic order of edge ends at each vertex, following the circuit.
    pub rotation: Vec<Vec<EdgeEnd>>,
    pub circuit: EulerianCircuit,
}

/// JSON summary of a surface graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceSummary {
    pub v: usize,
    pub e: usize,
    pub genus: i64,
    /// Edge `k` traversed forwards is `k + 1`, backwards `-(k + 1)`.
    pub circuit: Vec<i64>,
    pub regular: bool,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Glues the polygon labelled by `w`: corner `i` sits between sides `i - 1`
/// and `i`, and gluing the two sides of a letter identifies their corners.
pub fn build_surface_graph(w: &OrientableWord) -> SurfaceGraph {
    let n = w.len();
    if n == 0 {
        return SurfaceGraph {
            vertex_count: 1,
            edges: Vec::new(),
            rotation: vec![Vec::new()],
            circuit: EulerianCircuit { traversals: Vec::new(), regular: true },
        };
    }
    let mut uf = UnionFind::new(n);
    for p in 0..n {
        uf.union(p, w.sigma(p));
    }
    let mut vertex_of_root = vec![usize::MAX; n];
    let mut v = 0;
    let corner_vertex: Vec<usize> = (0..n)
        .map(|c| {
            let r = uf.find(c);
            if vertex_of_root[r] == usize::MAX {
                vertex_of_root[r] = v;
                v += 1;
            }
            vertex_of_root[r]
        })
        .collect();
    let gens: Vec<u8> = w.letter_index().keys().copied().collect();
    let edges = w
        .letter_index()
        .iter()
        .map(|(&g, &(p, _))| Edge { label: g, tail: corner_vertex[p], head: corner_vertex[(p + 1) % n] })
        .collect();
    let traversals = w
        .word()
        .letters()
        .iter()
        .map(|l| Traversal {
            edge: gens.binary_search(&l.generator()).expect("letter indexed"),
            forward: l.is_positive(),
        })
        .collect();
    SurfaceGraph::from_parts(v, edges, traversals)
}

impl SurfaceGraph {
    /// Assembles a graph from explicit data; regularity and rotation are
    /// derived from the circuit.
    pub fn from_parts(vertex_count: usize, edges: Vec<Edge>, traversals: Vec<Traversal>) -> Self {
        let mut g = SurfaceGraph {
            vertex_count,
            edges,
            rotation: vec![Vec::new(); vertex_count],
            circuit: EulerianCircuit { traversals, regular: false },
        };
        match g.passage_cycles() {
            Some(cycles) => {
                g.circuit.regular = cycles.iter().all(|c| c.len() == 1);
                for (v, c) in cycles.into_iter().enumerate() {
                    g.rotation[v] = c.into_iter().flatten().collect();
                }
            }
            None => g.circuit.regular = false,
        }
        g
    }

    fn end_vertex(&self, e: EdgeEnd) -> usize {
        let edge = self.edges[e.edge];
        if e.head {
            edge.head
        } else {
            edge.tail
        }
    }

    /// Cycles of the passage permutation at each vertex, or `None` if the
    /// circuit is not an Eulerian circuit in the two-direction sense.
    fn passage_cycles(&self) -> Option<Vec<Vec<Vec<EdgeEnd>>>> {
        let t = &self.circuit.traversals;
        let mut count = vec![[0u8; 2]; self.edges.len()];
        for tr in t {
            if tr.edge >= self.edges.len() {
                return None;
            }
            count[tr.edge][tr.forward as usize] += 1;
        }
        if count.iter().any(|c| *c != [1, 1]) {
            return None;
        }
        let mut next = std::collections::BTreeMap::new();
        for i in 0..t.len() {
            let inc = t[i].end();
            let out = t[(i + 1) % t.len()].start();
            if self.end_vertex(inc) != self.end_vertex(out) {
                return None;
            }
            next.insert(inc, out);
        }
        let mut cycles = vec![Vec::new(); self.vertex_count];
        let mut seen = std::collections::BTreeSet::new();
        for &start in next.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut cyc = Vec::new();
            let mut c = start;
            while seen.insert(c) {
                cyc.push(c);
                c = next[&c];
            }
            cycles[self.end_vertex(start)].push(cyc);
        }
        Some(cycles)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.tail == v) as usize + (e.head == v) as usize).sum()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.vertex_count).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// `(1 - v + e) / 2`; `None` when the numerator is odd or negative.
    pub fn genus(&self) -> Option<usize> {
        let num = 1 + self.edges.len() as i64 - self.vertex_count as i64;
        (num >= 0 && num % 2 == 0).then_some((num / 2) as usize)
    }

    pub fn summary(&self) -> SurfaceSummary {
        SurfaceSummary {
            v: self.vertex_count,
            e: self.edges.len(),
            genus: (1 + self.edges.len() as i64 - self.vertex_count as i64) / 2,
            circuit: self
                .circuit
                .traversals
                .iter()
                .map(|t| if t.forward { t.edge as i64 + 1 } else { -(t.edge as i64 + 1) })
                .collect(),
            regular: self.circuit.regular,
        }
    }

    /// Circuit label over the edge labels.
    pub fn circuit_label(&self) -> crate::word::Word {
        crate::word::Word::new(
            self.circuit
                .traversals
                .iter()
                .map(|t| crate::word::Letter::new(self.edges[t.edge].label, t.forward))
                .collect(),
        )
    }
}

pub fn has_regular_eulerian_circuit(g: &SurfaceGraph) -> bool {
    g.circuit.regular
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    fn graph(s: &str) -> SurfaceGraph {
        build_surface_graph(&OrientableWord::parse(s).unwrap())
    }

    #[test]
    fn genus_examples() {
        for (s, v, e, g) in [("aA", 2, 1, 0), ("abAB", 1, 2, 1), ("abcABC", 2, 3, 1), ("abABcdCD", 1, 4, 2)] {
            let gr = graph(s);
            assert_eq!((gr.vertex_count, gr.edge_count(), gr.genus()), (v, e, Some(g)), "{s}");
        }
    }

    #[test]
    fn regular_examples() {
        assert!(has_regular_eulerian_circuit(&graph("abcABC")));
        assert!(has_regular_eulerian_circuit(&graph("abAB")));
        assert_eq!(graph("abcABC").circuit_label(), w("abcABC"));
    }

    #[test]
    fn merged_vertices_break_regularity() {
        let g = graph("abcABC");
        let edges = g.edges.iter().map(|e| Edge { label: e.label, tail: 0, head: 0 }).collect();
        let merged = SurfaceGraph::from_parts(1, edges, g.circuit.traversals.clone());
        assert!(!has_regular_eulerian_circuit(&merged));
    }

    #[test]
    fn permuted_circuit_at_degree_four_vertex_is_irregular() {
        let g = graph("abAB");
        let t = &g.circuit.traversals;
        let permuted = vec![t[0], t[2], t[1], t[3]];
        let h = SurfaceGraph::from_parts(1, g.edges.clone(), permuted);
        assert!(!has_regular_eulerian_circuit(&h));
    }

    #[test]
    fn summary_json() {
        let s = serde_json::to_value(graph("abAB").summary()).unwrap();
        assert_eq!(s, serde_json::json!({"v":1,"e":2,"genus":1,"circuit":[1,2,-1,-2],"regular":true}));
    }
}
