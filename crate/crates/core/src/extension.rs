//! Extensions of orientable words over a group: edge doubling, vertex
//! extension by cyclic words, and edge-pair labelling.
//!
//! Corner `c` of a base word sits between positions `c - 1` and `c`. The
//! segment attached at corner `c` runs to corner `sigma(c)` around the same
//! vertex. For a letter with positive position `p` and negative position `q`
//! the label pair satisfies `h1 = seg(p) h2 seg(q)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::check::{all_passed, Clause};
use crate::error::{Error, Result};
use crate::genus::{free_genus, verify_genus_witness, GenusWitness};
use crate::group::{Backend, BoundConstants, GroupOracle};
use crate::quadratic::OrientableWord;
use crate::word::{Letter, Word};

/// Input data of an extension. Vertex ids index
/// [`OrientableWord::vertex_orbits`]; the segments of a vertex word follow
/// the orbit order of its corners.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionPlan {
    pub base: Word,
    pub partition: Vec<Vec<usize>>,
    pub vertex_words: BTreeMap<usize, Vec<Word>>,
    pub genus_targets: Vec<usize>,
    pub witnesses: Vec<GenusWitness>,
    #[serde(default)]
    pub edge_h2: BTreeMap<char, Word>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub edge_h1: BTreeMap<char, Word>,
}

impl ExtensionPlan {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Input(format!("plan: {e}")))
    }

    pub fn orientable(&self) -> Result<OrientableWord> {
        OrientableWord::new(self.base.clone())
    }

    /// The full word attached to vertex `v`.
    pub fn vertex_word(&self, v: usize) -> Word {
        self.vertex_words.get(&v).map(Word::join).unwrap_or_default()
    }

    /// `sum |w_v|`.
    pub fn total_length(&self) -> usize {
        self.vertex_words.values().flatten().map(Word::len).sum()
    }

    pub fn genus_sum(&self) -> usize {
        self.genus_targets.iter().sum()
    }
}

/// Copy `1` or `2` of a base edge, read forwards or backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubledLetter {
    pub generator: u8,
    pub copy: u8,
    pub positive: bool,
}

impl fmt::Display for DoubledLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", Letter::new(self.generator, self.positive), self.copy)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendedVertex {
    pub base_vertex: usize,
    pub corners: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub from: usize,
    pub to: usize,
    pub word: Word,
    pub is_loop: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeLabel {
    pub h1: Word,
    pub h2: Word,
    pub x: Word,
    pub y: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendedGraph {
    pub base: OrientableWord,
    pub hamiltonian: Vec<DoubledLetter>,
    pub vertices: Vec<ExtendedVertex>,
    pub segments: Vec<Segment>,
    pub labels: BTreeMap<char, EdgeLabel>,
}

impl ExtendedGraph {
    /// The circuit `U'`, e.g. `a1b1A2B2`.
    pub fn hamiltonian_string(&self) -> String {
        self.hamiltonian.iter().map(ToString::to_string).collect()
    }

    pub fn is_extended(&self) -> bool {
        !self.segments.is_empty() || self.base.is_empty()
    }

    /// True when `U'` passes through every vertex exactly once.
    pub fn is_hamiltonian(&self) -> bool {
        let n = self.base.len();
        let mut owner = vec![usize::MAX; n];
        for (i, v) in self.vertices.iter().enumerate() {
            for &c in &v.corners {
                if c >= n || owner[c] != usize::MAX {
                    return false;
                }
                owner[c] = i;
            }
        }
        let mut hits = vec![0usize; self.vertices.len()];
        for c in 0..n {
            match owner.get(c) {
                Some(&v) if v != usize::MAX => hits[v] += 1,
                _ => return false,
            }
        }
        hits.iter().all(|&h| h == 1)
    }

    fn segment_at(&self, corner: usize) -> Option<&Word> {
        self.segments.iter().find(|s| s.from == corner).map(|s| &s.word)
    }

    /// Label of `U'`: `h1` where the base reads a letter, `h2^-1` where it
    /// reads its inverse. Not reduced.
    pub fn hamiltonian_label(&self) -> Result<Word> {
        let mut parts = Vec::with_capacity(self.hamiltonian.len());
        for d in &self.hamiltonian {
            let key = Letter::new(d.generator, true).to_char();
            let lab = self.labels.get(&key).ok_or_else(|| Error::Precondition(format!("edge {key} is unlabelled")))?;
            parts.push(if d.positive { lab.h1.clone() } else { lab.h2.inverse() });
        }
        Ok(Word::join(&parts))
    }
}

/// Replaces every edge by a parallel pair; `U'` reads `e1` for `e` and
/// `e2^-1` for `e^-1`.
pub fn double_edges(u: &OrientableWord) -> ExtendedGraph {
    let hamiltonian = u
        .word()
        .letters()
        .iter()
        .map(|l| DoubledLetter {
            generator: l.generator(),
            copy: if l.is_positive() { 1 } else { 2 },
            positive: l.is_positive(),
        })
        .collect();
    let vertices = u
        .vertex_orbits()
        .into_iter()
        .enumerate()
        .map(|(i, corners)| ExtendedVertex { base_vertex: i, corners })
        .collect();
    ExtendedGraph { base: u.clone(), hamiltonian, vertices, segments: Vec::new(), labels: BTreeMap::new() }
}

/// Splits each vertex into one vertex per corner, joined by the segments of
/// its word; a degree-one vertex keeps its word as a loop.
pub fn extend_vertices(g: &ExtendedGraph, plan: &ExtensionPlan) -> Result<ExtendedGraph> {
    if plan.base != *g.base.word() {
        return Err(Error::Precondition(format!("plan base {} differs from graph base {}", plan.base, g.base)));
    }
    if g.is_extended() && !g.base.is_empty() {
        return Err(Error::Precondition("graph is already extended".into()));
    }
    if let Some(v) = plan.vertex_words.keys().find(|&&v| v >= g.vertices.len()) {
        return Err(Error::constraint("structure", format!("vertex {v} does not exist")));
    }
    let mut vertices = Vec::new();
    let mut segments = Vec::new();
    for v in &g.vertices {
        let words = plan
            .vertex_words
            .get(&v.base_vertex)
            .ok_or_else(|| Error::constraint("structure", format!("vertex {} has no word", v.base_vertex)))?;
        let d = v.corners.len();
        if words.len() != d {
            return Err(Error::constraint(
                "structure",
                format!("vertex {} has degree {d} but its word has {} segments", v.base_vertex, words.len()),
            ));
        }
        for (j, &c) in v.corners.iter().enumerate() {
            let to = v.corners[(j + 1) % d];
            segments.push(Segment { from: c, to, word: words[j].clone(), is_loop: d == 1 });
            vertices.push(ExtendedVertex { base_vertex: v.base_vertex, corners: vec![c] });
        }
    }
    Ok(ExtendedGraph {
        base: g.base.clone(),
        hamiltonian: g.hamiltonian.clone(),
        vertices,
        segments,
        labels: BTreeMap::new(),
    })
}

/// Labels each edge pair with `h2` (default `"1"`) and
/// `h1 = NF(x h2 y)`, where `x`, `y` are the segments at the tail corner of
/// `e1` and the head corner of `e2`.
pub fn label_edge_pairs(g: &ExtendedGraph, o: &GroupOracle, h2: &BTreeMap<char, Word>) -> Result<ExtendedGraph> {
    if !g.is_extended() {
        return Err(Error::Precondition("vertices must be extended before labelling".into()));
    }
    let mut labels = BTreeMap::new();
    for (&gen, &(p, q)) in g.base.letter_index() {
        let key = Letter::new(gen, true).to_char();
        let h2 = h2.get(&key).cloned().unwrap_or_default();
        o.check_word(&h2)?;
        let x = g.segment_at(p).cloned().unwrap_or_default();
        let y = g.segment_at(q).cloned().unwrap_or_default();
        let h1 = o.normal_form(&Word::join([&x, &h2, &y]))?;
        let h2 = o.normal_form(&h2)?;
        labels.insert(key, EdgeLabel { h1, h2, x, y });
    }
    Ok(ExtendedGraph { labels, ..g.clone() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    #[serde(rename = "F")]
    pub f: Word,
    pub length: usize,
    pub genus: usize,
    pub k: usize,
    pub n: usize,
    pub hamiltonian: String,
}

pub fn extension_report(plan: &ExtensionPlan, g: &ExtendedGraph) -> Result<ExtensionReport> {
    let genus = plan.genus_sum();
    let k = g.base.genus();
    Ok(ExtensionReport {
        f: g.hamiltonian_label()?,
        length: plan.total_length(),
        genus,
        k,
        n: genus + k,
        hamiltonian: g.hamiltonian_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionVerdict {
    pub accepted: bool,
    pub clauses: Vec<Clause>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<ExtensionReport>,
    pub length_cap: u64,
    pub constants: BoundConstants,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<ExtendedGraph>,
}

/// Builds the extended graph of `plan` and checks the clauses `structure`,
/// `witnesses`, `degree`, `edge-labels`, `length` and `genus-sum` against
/// `c.n`.
pub fn verify_extension(plan: &ExtensionPlan, o: &GroupOracle, c: &BoundConstants) -> Result<ExtensionVerdict> {
    let cap = c.extension_length_cap();
    let reject = |clauses: Vec<Clause>| ExtensionVerdict {
        accepted: false,
        clauses,
        report: None,
        length_cap: cap,
        constants: *c,
        graph: None,
    };
    let u = match plan.orientable() {
        Ok(u) => u,
        Err(e) => return Ok(reject(vec![Clause::fail("structure", e.to_string())])),
    };
    if let Err(d) = check_structure(plan, &u, o) {
        return Ok(reject(vec![Clause::fail("structure", d)]));
    }
    let g = match extend_vertices(&double_edges(&u), plan) {
        Ok(g) if g.is_hamiltonian() => g,
        Ok(_) => return Ok(reject(vec![Clause::fail("structure", "U' is not a Hamiltonian cycle")])),
        Err(e) => return Ok(reject(vec![Clause::fail("structure", e.to_string())])),
    };
    let g = label_edge_pairs(&g, o, &plan.edge_h2)?;
    let report = extension_report(plan, &g)?;
    let orbits = u.vertex_orbits();
    let clauses = vec![
        Clause::pass("structure"),
        Clause::from_result("witnesses", check_witnesses(plan, o)?),
        Clause::from_result("degree", check_degrees(plan, &orbits)),
        Clause::from_result("edge-labels", check_labels(plan, &g, o)?),
        Clause::from_result(
            "length",
            if report.length as u64 <= cap {
                Ok(())
            } else {
                Err(format!("total vertex-word length {} exceeds {cap}", report.length))
            },
        ),
        Clause::from_result(
            "genus-sum",
            if report.n == c.n { Ok(()) } else { Err(format!("{} + {} != {}", report.genus, report.k, c.n)) },
        ),
    ];
    Ok(ExtensionVerdict {
        accepted: all_passed(&clauses),
        clauses,
        report: Some(report),
        length_cap: cap,
        constants: *c,
        graph: Some(g),
    })
}

fn check_structure(plan: &ExtensionPlan, u: &OrientableWord, o: &GroupOracle) -> std::result::Result<(), String> {
    let v = u.vertex_orbits().len();
    let mut seen = vec![false; v];
    for &x in plan.partition.iter().flatten() {
        if x >= v {
            return Err(format!("vertex {x} does not exist"));
        }
        if std::mem::replace(&mut seen[x], true) {
            return Err(format!("vertex {x} appears twice in the partition"));
        }
    }
    if let Some(x) = seen.iter().position(|s| !s) {
        return Err(format!("vertex {x} is not covered by the partition"));
    }
    if plan.partition.iter().any(Vec::is_empty) {
        return Err("empty partition class".into());
    }
    let p = plan.partition.len();
    if plan.genus_targets.len() != p || plan.witnesses.len() != p {
        return Err(format!(
            "{p} partition classes but {} genus targets and {} witnesses",
            plan.genus_targets.len(),
            plan.witnesses.len()
        ));
    }
    for (i, class) in plan.partition.iter().enumerate() {
        if plan.genus_targets[i] + 1 < class.len() {
            return Err(format!("class {i} has genus target {} below {}", plan.genus_targets[i], class.len() - 1));
        }
    }
    let gens: Vec<char> = u.letter_index().keys().map(|&g| Letter::new(g, true).to_char()).collect();
    for key in plan.edge_h2.keys().chain(plan.edge_h1.keys()) {
        if !gens.contains(key) {
            return Err(format!("edge {key} is not a letter of the base"));
        }
    }
    for w in plan.vertex_words.values().flatten().chain(plan.edge_h2.values()).chain(plan.edge_h1.values()) {
        o.check_word(w).map_err(|e| e.to_string())?;
    }
    Ok(())
}

type Check = Result<std::result::Result<(), String>>;

fn check_witnesses(plan: &ExtensionPlan, o: &GroupOracle) -> Check {
    for (i, class) in plan.partition.iter().enumerate() {
        let tuple: Vec<Word> = class.iter().map(|&v| plan.vertex_word(v)).collect();
        let want = plan.genus_targets[i] + 1 - class.len();
        let wit = &plan.witnesses[i];
        if wit.k() != want {
            return Ok(Err(format!("class {i}: witness has {} commutators, expected {want}", wit.k())));
        }
        if !verify_genus_witness(o, &tuple, wit)? {
            return Ok(Err(format!("class {i}: witness does not verify")));
        }
        if o.backend() == Backend::Free {
            let (exact, _) = free_genus(&tuple, 50_000_000)?;
            if exact != want {
                return Ok(Err(format!("class {i}: tuple genus is {exact}, expected {want}")));
            }
        }
    }
    Ok(Ok(()))
}

fn check_degrees(plan: &ExtensionPlan, orbits: &[Vec<usize>]) -> std::result::Result<(), String> {
    for (i, class) in plan.partition.iter().enumerate() {
        if let [v] = class[..] {
            let d = orbits[v].len();
            if plan.genus_targets[i] == 0 && d < 3 {
                return Err(format!("class {i} is a genus-0 singleton on vertex {v} of degree {d}"));
            }
        }
    }
    Ok(())
}

fn check_labels(plan: &ExtensionPlan, g: &ExtendedGraph, o: &GroupOracle) -> Check {
    for (key, lab) in &g.labels {
        let given = plan.edge_h2.get(key).cloned().unwrap_or_default();
        if !o.is_minimal(&given)? {
            return Ok(Err(format!("h2 of edge {key} is not minimal")));
        }
        let h1 = plan.edge_h1.get(key).unwrap_or(&lab.h1);
        if !o.is_minimal(h1)? {
            return Ok(Err(format!("h1 of edge {key} is not minimal")));
        }
        if !o.equal(h1, &Word::join([&lab.x, &given, &lab.y])) {
            return Ok(Err(format!("h1 of edge {key} differs from x h2 y")));
        }
    }
    Ok(Ok(()))
}

/// An instance of the genus-three extension on `abcCBA` over `F(a, b)`:
/// `w1 w2 = [ab, ba]` on the first two vertices and `z1 z2 = 1` on the last
/// two.
pub fn example_plan_abc() -> ExtensionPlan {
    let w = |s: &str| s.parse::<Word>().expect("literal");
    ExtensionPlan {
        base: w("abcCBA"),
        partition: vec![vec![0, 1], vec![2, 3]],
        vertex_words: BTreeMap::from([
            (0, vec![w("abb")]),
            (1, vec![w("aB"), w("AAB")]),
            (2, vec![w("a"), w("b")]),
            (3, vec![w("BA")]),
        ]),
        genus_targets: vec![2, 1],
        witnesses: vec![
            GenusWitness { conjugators: vec![Word::empty(), Word::empty()], pairs: vec![(w("ab"), w("ba"))] },
            GenusWitness { conjugators: vec![Word::empty(), Word::empty()], pairs: vec![] },
        ],
        edge_h2: BTreeMap::new(),
        edge_h1: BTreeMap::new(),
    }
}
