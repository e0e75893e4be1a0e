use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use super::bounds::conjugator_length_bound;
use super::dehn::DehnReducer;
use super::lattice::Lattice;
use super::presentation::{Backend, Presentation};
use super::rewrite::Rewriting;
use crate::error::{Error, Result};
use crate::word::{cyclic_reduce, Letter, Word};

/// Resource limits. Exceeding any of them is an error, never a truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub radius: usize,
    pub ball_size: usize,
    /// Longest rule left side kept by completion.
    pub truncation: usize,
    /// Radius up to which rewriting normal forms are checked against the
    /// Dehn ball before use.
    pub validation_radius: usize,
    pub rule_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { radius: 8, ball_size: 1_000_000, truncation: 48, validation_radius: 3, rule_cap: 2000 }
    }
}

#[derive(Clone, Debug)]
enum Engine {
    Free,
    Rewriting(Rewriting),
    Table,
}

/// Ball built by breadth-first search with Dehn equality tests.
#[derive(Default)]
struct Table {
    reps: Vec<Word>,
    spheres: Vec<(usize, usize)>,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
    complete: bool,
}

/// Word problem, geodesics and balls for a presented group.
pub struct GroupOracle {
    pres: Presentation,
    alphabet: Vec<Letter>,
    columns: [Option<usize>; 32],
    caps: Caps,
    dehn: DehnReducer,
    lattice: Lattice,
    even: bool,
    engine: Engine,
    validated: bool,
    table: Mutex<Table>,
    layers: Mutex<Vec<Arc<Vec<Word>>>>,
}

impl std::fmt::Debug for GroupOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupOracle").field("presentation", &self.pres).field("caps", &self.caps).finish()
    }
}

impl GroupOracle {
    pub fn new(pres: Presentation) -> Result<Self> {
        GroupOracle::with_caps(pres, Caps::default())
    }

    pub fn free(rank: usize) -> Self {
        GroupOracle::new(Presentation::free(rank)).expect("free presentation is valid")
    }

    pub fn surface(genus: usize) -> Self {
        GroupOracle::new(Presentation::surface(genus)).expect("surface presentation is valid")
    }

    pub fn with_caps(pres: Presentation, caps: Caps) -> Result<Self> {
        pres.validate()?;
        let gens = pres.generator_letters();
        let mut columns = [None; 32];
        for (i, g) in gens.iter().enumerate() {
            columns[g.generator() as usize] = Some(i);
        }
        let mut oracle = GroupOracle {
            alphabet: pres.alphabet(),
            columns,
            caps,
            dehn: DehnReducer::new(&pres.relators),
            lattice: Lattice::default(),
            even: pres.relators.iter().all(|r| r.len() % 2 == 0),
            engine: Engine::Free,
            validated: true,
            table: Mutex::new(Table::default()),
            layers: Mutex::new(Vec::new()),
            pres,
        };
        let vectors: Vec<Vec<i64>> = oracle.pres.relators.iter().map(|r| oracle.exponents(r)).collect();
        oracle.lattice = Lattice::new(&vectors, gens.len());
        if oracle.pres.backend == Backend::Dehn {
            oracle.engine = Engine::Table;
            oracle.validated = false;
            if let Some(rw) = Rewriting::complete(&gens, &oracle.pres.relators, caps.truncation, caps.rule_cap) {
                let candidate = Engine::Rewriting(rw);
                if oracle.agrees_with_table(&candidate)? {
                    oracle.engine = candidate;
                    oracle.validated = true;
                }
            }
        }
        Ok(oracle)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn backend(&self) -> Backend {
        self.pres.backend
    }

    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.pres.rank()
    }

    /// Soundness assumptions in force for results from this oracle.
    pub fn assumptions(&self) -> Vec<String> {
        match (&self.engine, self.pres.backend) {
            (_, Backend::Free) => vec!["free-group-exact".into()],
            (Engine::Rewriting(rw), _) => vec![
                "dehn-presentation-soundness".into(),
                format!(
                    "geodesics-by-shortlex-rewriting-truncated-at={} (checked against Dehn ball radius {})",
                    rw.truncation(),
                    self.caps.validation_radius
                ),
            ],
            _ => vec!["dehn-presentation-soundness".into(), "geodesics-by-ball-search".into()],
        }
    }

    /// Rewriting rules in use, if any.
    pub fn rewriting(&self) -> Option<&Rewriting> {
        match &self.engine {
            Engine::Rewriting(rw) => Some(rw),
            _ => None,
        }
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        self.pres.check_word(w)
    }

    fn exponents(&self, w: &Word) -> Vec<i64> {
        let mut v = vec![0i64; self.pres.rank()];
        for l in w.letters() {
            if let Some(c) = self.columns.get(l.generator() as usize).copied().flatten() {
                v[c] += l.sign() as i64;
            }
        }
        v
    }

    /// Image in the abelianisation, canonical modulo the relator lattice.
    pub fn abelian_image(&self, w: &Word) -> Vec<i64> {
        self.lattice.reduce(self.exponents(w))
    }

    /// True if `w` lies in the kernel of the abelianisation.
    pub fn abelian_trivial(&self, w: &Word) -> bool {
        self.abelian_image(w).iter().all(|&x| x == 0)
    }

    /// Conjugation-invariant key used to bucket elements.
    fn key(&self, w: &Word) -> Vec<i64> {
        let mut k = self.abelian_image(w);
        if self.even {
            k.push((w.len() % 2) as i64);
        }
        k
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        match self.pres.backend {
            Backend::Free => w.free_reduce().is_empty(),
            Backend::Dehn => self.dehn.is_trivial(w),
        }
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        self.is_trivial(&u.concat(&v.inverse()))
    }

    /// Dehn reduction of `w` (free reduction for the free backend).
    pub fn dehn_reduce(&self, w: &Word) -> Word {
        match self.pres.backend {
            Backend::Free => w.free_reduce(),
            Backend::Dehn => self.dehn.reduce(w),
        }
    }

    /// Shortlex-least word equal to `w`; it is a geodesic.
    pub fn normal_form(&self, w: &Word) -> Result<Word> {
        match &self.engine {
            Engine::Free => Ok(w.free_reduce()),
            Engine::Rewriting(rw) => {
                let r = rw.reduce(w.letters());
                if r.len() > rw.truncation() {
                    return Err(Error::limit("normal form length", rw.truncation()));
                }
                Ok(Word::new(r))
            }
            Engine::Table => self.table_lookup(w),
        }
    }

    pub fn geodesic_length(&self, w: &Word) -> Result<usize> {
        Ok(self.normal_form(w)?.len())
    }

    pub fn is_minimal(&self, w: &Word) -> Result<bool> {
        Ok(self.geodesic_length(w)? == w.len())
    }

    fn grow_table(&self, t: &mut Table, radius: usize) -> Result<()> {
        if t.spheres.is_empty() {
            t.reps.push(Word::empty());
            t.spheres.push((0, 1));
            t.buckets.entry(self.key(&Word::empty())).or_default().push(0);
        }
        while t.spheres.len() <= radius && !t.complete {
            let (s, e) = *t.spheres.last().expect("nonempty");
            let start = t.reps.len();
            for i in s..e {
                for &x in &self.alphabet {
                    let rep = &t.reps[i];
                    if rep.letters().last() == Some(&x.inverse()) {
                        continue;
                    }
                    let mut cand = rep.clone();
                    cand.push(x);
                    let key = self.key(&cand);
                    let known = t
                        .buckets
                        .get(&key)
                        .is_some_and(|b| b.iter().any(|&j| self.dehn.is_trivial(&cand.concat(&t.reps[j].inverse()))));
                    if !known {
                        if t.reps.len() >= self.caps.ball_size {
                            return Err(Error::limit("ball size", self.caps.ball_size));
                        }
                        t.buckets.entry(key).or_default().push(t.reps.len());
                        t.reps.push(cand);
                    }
                }
            }
            let end = t.reps.len();
            if start == end {
                t.complete = true;
            } else {
                t.spheres.push((start, end));
            }
        }
        Ok(())
    }

    fn table_lookup(&self, w: &Word) -> Result<Word> {
        let w = self.dehn.reduce(w);
        let mut t = self.table.lock().expect("table lock");
        let target = w.len().min(self.caps.radius);
        self.grow_table(&mut t, target)?;
        let key = self.key(&w);
        if let Some(b) = t.buckets.get(&key) {
            if let Some(&j) = b.iter().find(|&&j| self.dehn.is_trivial(&w.concat(&t.reps[j].inverse()))) {
                return Ok(t.reps[j].clone());
            }
        }
        if t.complete || w.len() <= self.caps.radius {
            return Err(Error::Construction(format!("element {w} missing from a complete ball")));
        }
        Err(Error::limit("ball radius", self.caps.radius))
    }

    /// Shortlex representatives of the ball of radius `r`, found by
    /// breadth-first search with Dehn equality tests.
    pub fn ball_by_search(&self, r: usize) -> Result<Vec<Word>> {
        if r > self.caps.radius {
            return Err(Error::limit("ball radius", self.caps.radius));
        }
        let mut t = self.table.lock().expect("table lock");
        self.grow_table(&mut t, r)?;
        let end = t.spheres.get(r).or(t.spheres.last()).map(|s| s.1).unwrap_or(0);
        Ok(t.reps[..end].to_vec())
    }

    fn agrees_with_table(&self, engine: &Engine) -> Result<bool> {
        let r = self.caps.validation_radius.min(self.caps.radius);
        let searched = self.ball_by_search(r)?;
        let Engine::Rewriting(rw) = engine else { return Ok(true) };
        let mut layer = vec![Vec::<Letter>::new()];
        let mut all = vec![Word::empty()];
        for _ in 0..r {
            let mut next = Vec::new();
            for u in &layer {
                for &x in &self.alphabet {
                    let mut v = u.clone();
                    v.push(x);
                    if rw.extends_irreducibly(&v) {
                        next.push(v);
                    }
                }
            }
            all.extend(next.iter().cloned().map(Word::new));
            layer = next;
        }
        Ok(all == searched && searched.iter().all(|w| rw.reduce(w.letters()) == w.letters()))
    }

    fn extends(&self, v: &[Letter]) -> bool {
        match &self.engine {
            Engine::Free => v.len() < 2 || v[v.len() - 1] != v[v.len() - 2].inverse(),
            Engine::Rewriting(rw) => rw.extends_irreducibly(v),
            Engine::Table => unreachable!("table engine enumerates spheres directly"),
        }
    }

    /// Sphere of radius `r`, shortlex ordered.
    pub fn sphere(&self, r: usize) -> Result<Arc<Vec<Word>>> {
        if r > self.caps.radius {
            return Err(Error::limit("ball radius", self.caps.radius));
        }
        if let Engine::Table = self.engine {
            let mut t = self.table.lock().expect("table lock");
            self.grow_table(&mut t, r)?;
            let s = t.spheres.get(r).map(|&(s, e)| t.reps[s..e].to_vec()).unwrap_or_default();
            return Ok(Arc::new(s));
        }
        let mut layers = self.layers.lock().expect("layer lock");
        if layers.is_empty() {
            layers.push(Arc::new(vec![Word::empty()]));
        }
        let mut total: usize = layers.iter().map(|l| l.len()).sum();
        while layers.len() <= r {
            let prev = layers.last().expect("nonempty").clone();
            let mut next = Vec::new();
            for u in prev.iter() {
                for &x in &self.alphabet {
                    let mut v = u.letters().to_vec();
                    v.push(x);
                    if self.extends(&v) {
                        next.push(Word::new(v));
                    }
                }
            }
            total += next.len();
            if total > self.caps.ball_size {
                return Err(Error::limit("ball size", self.caps.ball_size));
            }
            layers.push(Arc::new(next));
        }
        Ok(layers[r].clone())
    }

    /// One shortlex-minimal representative per element of length at most `r`.
    pub fn ball(&self, r: usize) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        for k in 0..=r {
            out.extend(self.sphere(k)?.iter().cloned());
        }
        Ok(out)
    }

    /// Number of elements of length at most `r`, counted without
    /// materialising the ball when a normal-form automaton is available.
    pub fn count_ball(&self, r: usize) -> Result<u64> {
        match &self.engine {
            Engine::Free => {
                let k = 2 * self.rank() as u128;
                let mut total = 1u128;
                let mut s = k;
                for _ in 0..r {
                    total += s;
                    s *= k.saturating_sub(1);
                }
                u64::try_from(total).map_err(|_| Error::limit("ball count", u64::MAX as usize))
            }
            Engine::Rewriting(rw) => {
                if r > rw.truncation() {
                    return Err(Error::limit("counting radius", rw.truncation()));
                }
                let total: u128 = rw.count_irreducible(&self.alphabet, r).iter().sum();
                u64::try_from(total).map_err(|_| Error::limit("ball count", u64::MAX as usize))
            }
            Engine::Table => Ok(self.ball(r)?.len() as u64),
        }
    }

    /// All geodesic words of length at most `r`.
    pub fn geodesic_words(&self, r: usize) -> Result<Vec<Word>> {
        if r > self.caps.radius {
            return Err(Error::limit("ball radius", self.caps.radius));
        }
        let mut layer = vec![Word::empty()];
        let mut out = layer.clone();
        for _ in 0..r {
            let mut next = Vec::new();
            for u in &layer {
                for &x in &self.alphabet {
                    if u.letters().last() == Some(&x.inverse()) {
                        continue;
                    }
                    let mut v = u.clone();
                    v.push(x);
                    if self.geodesic_length(&v)? == v.len() {
                        next.push(v);
                    }
                }
            }
            if out.len() + next.len() > self.caps.ball_size {
                return Err(Error::limit("ball size", self.caps.ball_size));
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        Ok(out)
    }

    /// Checks `|w2 z1|_H <= delta` for every split with
    /// `|w2| = |z1| <= (|w| + |z| - |wz|_H) / 2`.
    pub fn check_delta_thin(&self, w: &Word, z: &Word, delta: u32) -> Result<bool> {
        if !self.is_minimal(w)? || !self.is_minimal(z)? {
            return Err(Error::Precondition("check_delta_thin needs minimal words".into()));
        }
        let wz = self.geodesic_length(&w.concat(z))?;
        let k = (w.len() + z.len() - wz) / 2;
        for j in 1..=k.min(w.len()).min(z.len()) {
            let piece = w.slice(w.len() - j, w.len()).concat(&z.slice(0, j));
            if self.geodesic_length(&piece)? > delta as usize {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Least `delta` for which every pair of minimal words of length at most
    /// `r` passes [`Self::check_delta_thin`]. A lower bound for any valid
    /// global constant.
    pub fn estimate_delta(&self, r: usize) -> Result<u32> {
        let ball = self.ball(r)?;
        let index: HashMap<&Word, usize> = ball.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let geo = self.geodesic_words(r)?;
        let mut prefixes: Vec<Vec<BTreeSet<Word>>> = vec![vec![BTreeSet::new(); r + 1]; ball.len()];
        let mut suffixes = prefixes.clone();
        for g in &geo {
            let e = index[&self.normal_form(g)?];
            for j in 1..=g.len() {
                prefixes[e][j].insert(self.normal_form(&g.slice(0, j))?);
                suffixes[e][j].insert(self.normal_form(&g.slice(g.len() - j, g.len()))?);
            }
        }
        let best = (0..ball.len())
            .into_par_iter()
            .map(|a| -> Result<usize> {
                let mut m = 0;
                for b in 0..ball.len() {
                    let (wa, wb) = (&ball[a], &ball[b]);
                    let k = (wa.len() + wb.len() - self.geodesic_length(&wa.concat(wb))?) / 2;
                    for j in 1..=k {
                        for s in &suffixes[a][j] {
                            for p in &prefixes[b][j] {
                                m = m.max(self.geodesic_length(&s.concat(p))?);
                            }
                        }
                    }
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(best.into_iter().max().unwrap_or(0) as u32)
    }

    /// `|ball(4 delta)|`.
    pub fn compute_m(&self, delta: u32) -> Result<u64> {
        self.count_ball(4 * delta as usize)
    }

    /// A conjugator `w` with `h1 = w h2 w^-1` and
    /// `|w| <= floor((|h1| + |h2|) / 2) + M + 1`, searched in shortlex order.
    /// `None` means no such word exists within the bound.
    pub fn conjugacy_search(&self, h1: &Word, h2: &Word, m: u64) -> Result<Option<Word>> {
        self.check_word(h1)?;
        self.check_word(h2)?;
        let bound = conjugator_length_bound(h1.len(), h2.len(), m);
        if self.key(h1) != self.key(h2) {
            return Ok(None);
        }
        let free_witness = if self.pres.backend == Backend::Free {
            match free_conjugator(h1, h2) {
                Some(c) => Some(c),
                None => return Ok(None),
            }
        } else {
            None
        };
        let reach = (bound as usize).min(self.caps.radius);
        for r in 0..=reach {
            let sphere = self.sphere(r)?;
            let hit = sphere.par_iter().position_first(|u| self.equal(h1, &Word::join([u, h2, &u.inverse()])));
            if let Some(i) = hit {
                return Ok(Some(sphere[i].clone()));
            }
        }
        if reach as u64 >= bound {
            return Ok(None);
        }
        match free_witness {
            Some(c) if c.len() as u64 <= bound => Ok(Some(c)),
            Some(_) => Ok(None),
            None => Err(Error::limit("conjugator search radius", self.caps.radius)),
        }
    }
}

/// A shortest conjugator between two words of a free group, if conjugate.
pub fn free_conjugator(h1: &Word, h2: &Word) -> Option<Word> {
    let (c1, k1) = cyclic_reduce(h1);
    let (c2, k2) = cyclic_reduce(h2);
    if c1.len() != c2.len() {
        return None;
    }
    let n = c1.len().max(1);
    (0..n)
        .filter(|&i| c2.rotate(i) == c1)
        .flat_map(|i| {
            let a = c2.slice(0, i.min(c2.len())).inverse();
            [c1.inverse(), Word::empty(), c1.clone()].map(|p| Word::join([&k1, &p, &a, &k2.inverse()]).free_reduce())
        })
        .min_by(|x, y| x.cmp(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{all_words, w};

    #[test]
    fn equality_examples() {
        let f = GroupOracle::free(2);
        assert!(f.equal(&w("aBbA"), &w("1")));
        assert!(!f.equal(&w("ab"), &w("ba")));
        let s = GroupOracle::surface(2);
        assert!(s.equal(&w("abABcdCD"), &w("1")));
    }

    #[test]
    fn geodesic_examples() {
        let f = GroupOracle::free(2);
        assert_eq!(f.geodesic_length(&w("aBbc")).unwrap(), 2);
        let s = GroupOracle::surface(2);
        assert_eq!(s.geodesic_length(&w("abABcdCD")).unwrap(), 0);
        assert_eq!(s.geodesic_length(&w("abAB")).unwrap(), 4);
        assert!(s.assumptions()[1].starts_with("geodesics-by-shortlex-rewriting"));
    }

    #[test]
    fn ball_examples() {
        let f = GroupOracle::free(2);
        assert_eq!(f.ball(1).unwrap(), vec![w("1"), w("a"), w("A"), w("b"), w("B")]);
        assert_eq!(f.ball(2).unwrap().len(), 17);
        assert_eq!(f.count_ball(2).unwrap(), 17);
        let c5 = GroupOracle::new(Presentation::dehn(&["a"], &["aaaaa"]).unwrap()).unwrap();
        assert_eq!(c5.ball(3).unwrap().len(), 5);
        assert_eq!(c5.count_ball(3).unwrap(), 5);
    }

    #[test]
    fn free_geodesics_agree_with_reduction() {
        let f = GroupOracle::free(2);
        for n in 0..=6 {
            for u in all_words(2, n) {
                assert_eq!(f.geodesic_length(&u).unwrap(), u.free_reduce().len());
            }
        }
    }

    #[test]
    fn surface_rewriting_matches_search() {
        let s = GroupOracle::surface(2);
        let searched = s.ball_by_search(4).unwrap();
        assert_eq!(searched, s.ball(4).unwrap());
        assert_eq!(searched.len(), 1 + 8 + 56 + 392 + 2736);
    }

    #[test]
    fn thin_examples() {
        let f = GroupOracle::free(4);
        assert!(f.check_delta_thin(&w("ab"), &w("BA"), 0).unwrap());
        assert!(f.check_delta_thin(&w("ab"), &w("cd"), 0).unwrap());
        assert_eq!(f.estimate_delta(4).unwrap(), 0);
        let z = GroupOracle::free(1);
        assert_eq!(z.estimate_delta(6).unwrap(), 0);
    }

    #[test]
    fn m_examples() {
        assert_eq!(GroupOracle::free(2).compute_m(0).unwrap(), 1);
        assert_eq!(GroupOracle::free(1).compute_m(0).unwrap(), 1);
        assert_eq!(GroupOracle::free(2).compute_m(1).unwrap(), 161);
    }

    #[test]
    fn conjugacy_examples() {
        let f = GroupOracle::free(2);
        assert_eq!(f.conjugacy_search(&w("ab"), &w("ba"), 1).unwrap(), Some(w("a")));
        assert_eq!(f.conjugacy_search(&w("ab"), &w("ab"), 1).unwrap(), Some(w("1")));
        assert_eq!(f.conjugacy_search(&w("a"), &w("b"), 1).unwrap(), None);
        let s = GroupOracle::surface(2);
        assert_eq!(s.conjugacy_search(&w("ab"), &w("ba"), 1).unwrap(), Some(w("a")));
    }

    #[test]
    fn free_conjugator_examples() {
        assert_eq!(free_conjugator(&w("ab"), &w("ba")), Some(w("a")));
        assert_eq!(free_conjugator(&w("cabC"), &w("ab")), Some(w("c")));
        assert_eq!(free_conjugator(&w("a"), &w("b")), None);
    }
}
