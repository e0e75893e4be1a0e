//! Binary subdivision of a geodesic polygon into triangles and the
//! companion vertices found by walking thin projections through it.

use serde::ser::SerializeTuple;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{companion_bound, GroupOracle};
use crate::word::Word;

/// A vertex of the polygon path, given by side index and offset along it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
#[serde(from = "(usize, usize)")]
pub struct Position {
    pub side: usize,
    pub offset: usize,
}

impl From<(usize, usize)> for Position {
    fn from((side, offset): (usize, usize)) -> Self {
        Position { side, offset }
    }
}

impl Serialize for Position {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.side)?;
        t.serialize_element(&self.offset)?;
        t.end()
    }
}

/// Closed path `gamma_0 gamma_1 ... gamma_n` of minimal words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicPolygon {
    sides: Vec<Word>,
}

impl GeodesicPolygon {
    pub fn new(o: &GroupOracle, sides: Vec<Word>) -> Result<Self> {
        if sides.len() < 2 {
            return Err(Error::Precondition("a polygon needs gamma_0 and at least one more side".into()));
        }
        for s in &sides {
            o.check_word(s)?;
            if !o.is_minimal(s)? {
                return Err(Error::Precondition(format!("side {s} is not minimal")));
            }
        }
        if !o.is_trivial(&Word::join(&sides)) {
            return Err(Error::Precondition("sides do not close up".into()));
        }
        Ok(GeodesicPolygon { sides })
    }

    pub fn sides(&self) -> &[Word] {
        &self.sides
    }

    /// Number of sides after `gamma_0`.
    pub fn n(&self) -> usize {
        self.sides.len() - 1
    }

    /// Distance along `q` from the start of `gamma_0`.
    pub fn d_q(&self, p: Position) -> usize {
        self.sides[..p.side].iter().map(Word::len).sum::<usize>() + p.offset
    }

    /// Path word from the start of `gamma_0` to `p`.
    pub fn point(&self, p: Position) -> Word {
        let mut w = Word::join(&self.sides[..p.side]);
        for &l in &self.sides[p.side].letters()[..p.offset] {
            w.push(l);
        }
        w
    }

    fn check_position(&self, p: Position) -> Result<()> {
        match self.sides.get(p.side) {
            Some(s) if p.offset <= s.len() => Ok(()),
            _ => Err(Error::Input(format!("position ({}, {}) is not on the polygon", p.side, p.offset))),
        }
    }

    /// Positions strictly inside `gamma_0`.
    pub fn base_interior(&self) -> Vec<Position> {
        (1..self.sides[0].len()).map(|offset| Position { side: 0, offset }).collect()
    }
}

/// `b_1 2^(k-1) + ... + b_m 2^(k-m) + 2^(k-m-1)`.
pub fn r_index(b: &str, k: usize) -> Result<usize> {
    let m = b.len();
    if m + 1 > k {
        return Err(Error::Precondition(format!("|b| = {m} must be at most k - 1 = {}", k.saturating_sub(1))));
    }
    let mut r = 1usize << (k - m - 1);
    for (i, c) in b.chars().enumerate() {
        match c {
            '0' => {}
            '1' => r += 1 << (k - i - 1),
            _ => return Err(Error::Parse(format!("binary string {b:?}"))),
        }
    }
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct Node {
    pub b: String,
    pub label: Word,
    /// First and last leaf covered.
    pub leaves: (usize, usize),
}

/// Triangles `q_b, q_b0, q_b1` with `q_""` the reverse of `gamma_0` and the
/// depth-`k` nodes the sides `gamma_1 ... gamma_n` padded to `2^k`.
#[derive(Clone, Debug, Serialize)]
pub struct Subdivision {
    pub k: usize,
    pub pads: usize,
    pub nodes: Vec<Node>,
}

impl Subdivision {
    fn index(&self, b: &str) -> usize {
        let depth = b.len();
        let mut i = (1usize << depth) - 1;
        for (j, c) in b.chars().enumerate() {
            if c == '1' {
                i += 1 << (depth - j - 1);
            }
        }
        i
    }

    pub fn node(&self, b: &str) -> &Node {
        &self.nodes[self.index(b)]
    }

    fn len(&self, b: &str) -> usize {
        self.node(b).label.len()
    }

    /// Leaves in tree order.
    pub fn leaves(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(move |n| n.b.len() == self.k)
    }
}

/// Builds the subdivision, padding `n` up to `2^k` with empty sides.
pub fn build_subdivision(o: &GroupOracle, p: &GeodesicPolygon) -> Result<Subdivision> {
    let n = p.n();
    let k = n.next_power_of_two().trailing_zeros().max(1) as usize;
    let leaves = 1usize << k;
    let mut vertex = vec![p.sides[0].clone()];
    for j in 1..=leaves {
        let side = p.sides.get(j).cloned().unwrap_or_default();
        vertex.push(vertex[j - 1].concat(&side));
    }
    let mut nodes = Vec::with_capacity(2 * leaves - 1);
    for depth in 0..=k {
        for idx in 0..(1usize << depth) {
            let b: String = (0..depth).map(|j| if idx >> (depth - j - 1) & 1 == 1 { '1' } else { '0' }).collect();
            let span = 1usize << (k - depth);
            let lo = idx * span + 1;
            let hi = lo + span - 1;
            let label = if depth == 0 {
                p.sides[0].inverse()
            } else if depth == k {
                p.sides.get(lo).cloned().unwrap_or_default()
            } else {
                o.normal_form(&vertex[lo - 1].inverse().concat(&vertex[hi]))?
            };
            nodes.push(Node { b, label, leaves: (lo, hi) });
        }
    }
    Ok(Subdivision { k, pads: leaves - n, nodes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Companion {
    pub zeta: Position,
    pub eta: Position,
    pub dist: usize,
}

fn child(b: &str, c: char) -> String {
    let mut s = b.to_string();
    s.push(c);
    s
}

/// Moves a point at distance `t` from the start of `q_b` to the child side
/// given by the tripod of the triangle `q_b, q_b0, q_b1`.
fn down(s: &Subdivision, b: &str, t: usize) -> (String, usize) {
    let (b0, b1) = (child(b, '0'), child(b, '1'));
    let (lb, l0, l1) = (s.len(b), s.len(&b0), s.len(&b1));
    if 2 * t + l1 <= l0 + lb {
        (b0, t)
    } else {
        (b1, l1 + t - lb)
    }
}

enum Up {
    Parent(String, usize),
    Sibling(String, usize),
}

/// Moves a point at distance `t` from the start of `q_c` to the parent or the
/// sibling side of its triangle. Tripod centres go to the parent.
fn up(s: &Subdivision, c: &str, t: usize) -> Up {
    let b = &c[..c.len() - 1];
    let (b0, b1) = (child(b, '0'), child(b, '1'));
    let (lb, l0, l1) = (s.len(b), s.len(&b0), s.len(&b1));
    if c.ends_with('0') {
        if 2 * t + l1 <= l0 + lb {
            Up::Parent(b.to_string(), t)
        } else {
            Up::Sibling(b1, l0 - t)
        }
    } else if 2 * t + lb < l0 + l1 {
        Up::Sibling(b0, l0 - t)
    } else {
        Up::Parent(b.to_string(), lb + t - l1)
    }
}

fn descend(s: &Subdivision, mut b: String, mut t: usize) -> (String, usize) {
    while b.len() < s.k {
        (b, t) = down(s, &b, t);
    }
    (b, t)
}

fn leaf_position(p: &GeodesicPolygon, s: &Subdivision, b: &str, t: usize) -> Position {
    let leaf = s.node(b).leaves.0;
    if leaf <= p.n() {
        Position { side: leaf, offset: t }
    } else {
        Position { side: p.n(), offset: p.sides[p.n()].len() }
    }
}

fn companion(o: &GroupOracle, p: &GeodesicPolygon, zeta: Position, eta: Position) -> Result<Companion> {
    let dist = o.geodesic_length(&p.point(zeta).inverse().concat(&p.point(eta)))?;
    Ok(Companion { zeta, eta, dist })
}

/// Companion on `gamma_1 ... gamma_n` of an interior vertex of `gamma_0`.
pub fn project_base(o: &GroupOracle, p: &GeodesicPolygon, s: &Subdivision, zeta: Position) -> Result<Companion> {
    p.check_position(zeta)?;
    if zeta.side != 0 || zeta.offset == 0 || zeta.offset >= p.sides[0].len() {
        return Err(Error::Precondition("zeta must be interior to gamma_0".into()));
    }
    let (b, t) = descend(s, String::new(), p.sides[0].len() - zeta.offset);
    companion(o, p, zeta, leaf_position(p, s, &b, t))
}

/// Companions `eta_1, eta_2` of interior vertices `zeta_1, zeta_2` of
/// `gamma_0`, with `zeta_1` nearer the start.
pub fn find_companions(
    o: &GroupOracle,
    p: &GeodesicPolygon,
    s: &Subdivision,
    z1: Position,
    z2: Position,
) -> Result<(Companion, Companion)> {
    if z1.side != 0 || z2.side != 0 || z1.offset >= z2.offset {
        return Err(Error::Precondition("need zeta_1 before zeta_2 on gamma_0".into()));
    }
    Ok((project_base(o, p, s, z1)?, project_base(o, p, s, z2)?))
}

/// Companion `eta_3` of a vertex `zeta_3` lying between `zeta_1` and its
/// companion `eta_1` along `q`.
pub fn find_inner_companion(
    o: &GroupOracle,
    p: &GeodesicPolygon,
    s: &Subdivision,
    eta1: &Companion,
    z3: Position,
) -> Result<Companion> {
    p.check_position(z3)?;
    let d3 = p.d_q(z3);
    if !(p.d_q(eta1.zeta) < d3 && d3 < p.d_q(eta1.eta)) {
        return Err(Error::Precondition("zeta_3 must lie between zeta_1 and eta_1".into()));
    }
    if z3.side == 0 {
        return project_base(o, p, s, z3);
    }
    if z3.offset == 0 || z3.offset >= p.sides[z3.side].len() {
        return Err(Error::Precondition("zeta_3 must not be a side endpoint".into()));
    }
    let leaf = z3.side - 1;
    let mut b: String = (0..s.k).map(|j| if leaf >> (s.k - j - 1) & 1 == 1 { '1' } else { '0' }).collect();
    let mut t = z3.offset;
    loop {
        match up(s, &b, t) {
            Up::Parent(pb, pt) if pb.is_empty() => {
                let eta = Position { side: 0, offset: p.sides[0].len() - pt };
                return companion(o, p, z3, eta);
            }
            Up::Parent(pb, pt) => (b, t) = (pb, pt),
            Up::Sibling(sb, st) => {
                let (lb, lt) = descend(s, sb, st);
                return companion(o, p, z3, leaf_position(p, s, &lb, lt));
            }
        }
    }
}

/// Outcome of checking every companion of one polygon against the bounds.
#[derive(Clone, Debug, Serialize)]
pub struct CompanionReport {
    pub k: usize,
    pub pads: usize,
    pub companions: Vec<Companion>,
    pub inner: Vec<Companion>,
    pub max_dist: usize,
    pub max_inner_dist: usize,
    pub bound: f64,
    pub inner_bound: f64,
    /// Every check of distance, ordering and gap passed.
    pub holds: bool,
    pub violations: Vec<String>,
}

/// Runs both constructions over every admissible choice of vertices and
/// checks them against `delta (log2 n + 1)` and twice that.
pub fn companion_report(o: &GroupOracle, p: &GeodesicPolygon, delta: u32) -> Result<CompanionReport> {
    let s = build_subdivision(o, p)?;
    let bound = companion_bound(delta, p.n());
    let inner_bound = 2.0 * bound;
    let mut violations = Vec::new();
    let companions: Vec<Companion> =
        p.base_interior().into_iter().map(|z| project_base(o, p, &s, z)).collect::<Result<_>>()?;
    for c in &companions {
        if c.dist as f64 > bound + 1e-9 {
            violations.push(format!("distance {} from {:?} exceeds {bound:.3}", c.dist, c.zeta));
        }
        if c.eta.side == 0 {
            violations.push(format!("companion of {:?} lies on gamma_0", c.zeta));
        }
    }
    for (i, c1) in companions.iter().enumerate() {
        for c2 in &companions[i + 1..] {
            if p.d_q(c1.eta) <= p.d_q(c2.eta) {
                violations.push(format!("order of companions of {:?} and {:?}", c1.zeta, c2.zeta));
            }
            if c1.eta.side == c2.eta.side && c1.eta.offset.abs_diff(c2.eta.offset) != c2.zeta.offset - c1.zeta.offset {
                violations.push(format!("gap of companions of {:?} and {:?}", c1.zeta, c2.zeta));
            }
        }
    }
    let mut inner = Vec::new();
    for c1 in &companions {
        let (lo, hi) = (p.d_q(c1.zeta), p.d_q(c1.eta));
        for (side, w) in p.sides.iter().enumerate() {
            for offset in 0..=w.len() {
                let z3 = Position { side, offset };
                let d = p.d_q(z3);
                let endpoint = side > 0 && (offset == 0 || offset == w.len());
                let base_end = side == 0 && (offset == 0 || offset == w.len());
                if d <= lo || d >= hi || endpoint || base_end {
                    continue;
                }
                let c3 = find_inner_companion(o, p, &s, c1, z3)?;
                if c3.dist as f64 > inner_bound + 1e-9 {
                    violations.push(format!("distance {} from {:?} exceeds {inner_bound:.3}", c3.dist, z3));
                }
                if c3.eta == z3 || p.d_q(c3.eta) >= hi {
                    violations.push(format!("inner companion of {z3:?} for {:?}", c1.zeta));
                }
                inner.push(c3);
            }
        }
    }
    Ok(CompanionReport {
        k: s.k,
        pads: s.pads,
        max_dist: companions.iter().map(|c| c.dist).max().unwrap_or(0),
        max_inner_dist: inner.iter().map(|c| c.dist).max().unwrap_or(0),
        companions,
        inner,
        bound,
        inner_bound,
        holds: violations.is_empty(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    fn polygon(o: &GroupOracle, sides: &[&str]) -> GeodesicPolygon {
        GeodesicPolygon::new(o, sides.iter().map(|s| w(s)).collect()).unwrap()
    }

    #[test]
    fn r_examples() {
        assert_eq!(r_index("", 3).unwrap(), 4);
        assert_eq!(r_index("01", 3).unwrap(), 3);
        assert_eq!(r_index("11", 3).unwrap(), 7);
        assert_eq!(r_index("00", 3).unwrap(), 1);
        assert!(r_index("000", 3).is_err());
    }

    #[test]
    fn children_of_last_level_are_sides() {
        let o = GroupOracle::free(2);
        let p = polygon(&o, &["aab", "B", "a", "B", "b", "A", "A", "A", "1"]);
        let s = build_subdivision(&o, &p).unwrap();
        assert_eq!((s.k, s.pads, s.nodes.len()), (3, 0, 15));
        for b in ["00", "01", "10", "11"] {
            let r = r_index(b, 3).unwrap();
            assert_eq!(s.node(&child(b, '0')).leaves.0, r);
            assert_eq!(s.node(&child(b, '1')).leaves.0, r + 1);
        }
        assert_eq!(s.leaves().filter(|n| n.b.len() == 3).count(), 8);
        assert_eq!(s.nodes.iter().filter(|n| (1..3).contains(&n.b.len())).count(), 6);
    }

    #[test]
    fn padding() {
        let o = GroupOracle::free(2);
        let p = polygon(&o, &["ab", "B", "A"]);
        let s = build_subdivision(&o, &p).unwrap();
        assert_eq!((s.k, s.pads), (1, 0));
        let p = polygon(&o, &["abb", "B", "B", "A"]);
        let s = build_subdivision(&o, &p).unwrap();
        assert_eq!((s.k, s.pads), (2, 1));
        let joined = Word::join(s.leaves().map(|n| &n.label));
        assert!(o.equal(&joined, &w("BBA")));
    }

    #[test]
    fn tree_companions() {
        let o = GroupOracle::free(2);
        let p = polygon(&o, &["aab", "B", "AA"]);
        let s = build_subdivision(&o, &p).unwrap();
        let (c1, c2) = find_companions(&o, &p, &s, (0, 1).into(), (0, 2).into()).unwrap();
        assert_eq!((c1.dist, c2.dist), (0, 0));
        assert_eq!(c1.eta, Position { side: 2, offset: 1 });
        assert_eq!(c2.eta, Position { side: 1, offset: 1 });
        assert!(p.d_q(c1.eta) > p.d_q(c2.eta));
        let r = companion_report(&o, &p, 0).unwrap();
        assert!(r.holds, "{:?}", r.violations);
    }

    #[test]
    fn inner_companion_in_tree() {
        let o = GroupOracle::free(2);
        let p = polygon(&o, &["abab", "B", "AB", "A"]);
        let r = companion_report(&o, &p, 0).unwrap();
        assert!(r.holds, "{:?}", r.violations);
        assert!(!r.inner.is_empty());
        assert!(r.inner.iter().all(|c| c.dist == 0));
    }

    #[test]
    fn rejects_endpoints_and_open_paths() {
        let o = GroupOracle::free(2);
        assert!(GeodesicPolygon::new(&o, vec![w("ab"), w("B")]).is_err());
        assert!(GeodesicPolygon::new(&o, vec![w("aA"), w("1")]).is_err());
        let p = polygon(&o, &["abab", "B", "AB", "A"]);
        let s = build_subdivision(&o, &p).unwrap();
        let c1 = project_base(&o, &p, &s, (0, 1).into()).unwrap();
        assert!(find_inner_companion(&o, &p, &s, &c1, (2, 0).into()).is_err());
        assert!(project_base(&o, &p, &s, (0, 0).into()).is_err());
    }

    #[test]
    fn surface_pentagon() {
        let o = GroupOracle::surface(2);
        let p = polygon(&o, &["abAB", "c", "d", "C", "D"]);
        let r = companion_report(&o, &p, 4).unwrap();
        assert!(r.holds, "{:?}", r.violations);
    }
}
