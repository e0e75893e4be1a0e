//! Genus of tuples of group elements.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{free_conjugator, Backend, GroupOracle};
use crate::quadratic::OrientableWord;
use crate::word::{cyclic_reduce, Letter, Word};

/// Conjugators `h_1 ... h_t` and pairs `(x_i, y_i)` with
/// `h_1 g_1 h_1^-1 ... h_t g_t h_t^-1 = [x_1, y_1] ... [x_k, y_k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusWitness {
    pub conjugators: Vec<Word>,
    pub pairs: Vec<(Word, Word)>,
}

impl GenusWitness {
    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    /// Sum of the lengths of all words in the witness.
    pub fn total_len(&self) -> usize {
        self.conjugators.iter().map(Word::len).sum::<usize>()
            + self.pairs.iter().map(|(x, y)| x.len() + y.len()).sum::<usize>()
    }

    /// `prod h_i g_i h_i^-1`.
    pub fn conjugated_product(&self, tuple: &[Word]) -> Word {
        let parts: Vec<Word> =
            tuple.iter().zip(&self.conjugators).map(|(g, h)| Word::join([h, g, &h.inverse()])).collect();
        Word::join(&parts)
    }

    pub fn commutator_product(&self) -> Word {
        let parts: Vec<Word> = self.pairs.iter().map(|(x, y)| Word::commutator(x, y)).collect();
        Word::join(&parts)
    }
}

pub fn verify_genus_witness(o: &GroupOracle, tuple: &[Word], w: &GenusWitness) -> Result<bool> {
    if w.conjugators.len() != tuple.len() {
        return Ok(false);
    }
    for x in tuple.iter().chain(&w.conjugators).chain(w.pairs.iter().flat_map(|(x, y)| [x, y])) {
        o.check_word(x)?;
    }
    Ok(o.equal(&w.conjugated_product(tuple), &w.commutator_product()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusCaps {
    pub max_k: usize,
    /// Longest conjugator tried; derived from the input when absent.
    pub conjugator_len: Option<usize>,
    /// Longest commutator entry tried.
    pub word_len: usize,
    pub node_cap: u64,
}

impl Default for GenusCaps {
    fn default() -> Self {
        GenusCaps { max_k: 3, conjugator_len: None, word_len: 2, node_cap: 50_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenusStatus {
    Exact,
    UnknownBeyondCaps,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusOutcome {
    pub k: Option<usize>,
    pub witness: Option<GenusWitness>,
    pub caps: GenusCaps,
    pub status: GenusStatus,
}

impl GenusOutcome {
    fn unknown(caps: GenusCaps) -> Self {
        GenusOutcome { k: None, witness: None, caps, status: GenusStatus::UnknownBeyondCaps }
    }
}

/// Least `k` admitting a witness. Free groups are searched exactly by
/// surface pairings; other backends by enumeration within `caps`.
pub fn brute_force_genus(o: &GroupOracle, tuple: &[Word], caps: GenusCaps) -> Result<GenusOutcome> {
    for g in tuple {
        o.check_word(g)?;
    }
    if tuple.is_empty() {
        return Err(Error::Precondition("empty tuple".into()));
    }
    if !o.abelian_trivial(&Word::join(tuple)) {
        return Ok(GenusOutcome::unknown(caps));
    }
    match o.backend() {
        Backend::Free => {
            let (k, witness) = free_genus(tuple, caps.node_cap)?;
            if !verify_genus_witness(o, tuple, &witness)? || witness.k() != k {
                return Err(Error::Construction("assembled genus witness does not verify".into()));
            }
            Ok(GenusOutcome { k: Some(k), witness: Some(witness), caps, status: GenusStatus::Exact })
        }
        Backend::Dehn => naive_genus(o, tuple, caps),
    }
}

/// `floor(max |g| / 2) + M + 1`, the default conjugator radius.
pub fn default_conjugator_len(tuple: &[Word], m: u64) -> usize {
    let longest = tuple.iter().map(Word::len).max().unwrap_or(0);
    (longest / 2) as u64 as usize + m.min(usize::MAX as u64 / 2) as usize + 1
}

/// Enumeration over conjugators and commutator entries taken from balls,
/// in order of increasing `k`.
pub fn naive_genus(o: &GroupOracle, tuple: &[Word], caps: GenusCaps) -> Result<GenusOutcome> {
    let conj_len = caps.conjugator_len.unwrap_or(2);
    let caps = GenusCaps { conjugator_len: Some(conj_len), ..caps };
    let conj_ball = o.ball(conj_len)?;
    let entries = o.ball(caps.word_len)?;
    let mut nodes = 0u64;
    let mut tick = |n: u64| -> Result<()> {
        nodes += n;
        if nodes > caps.node_cap {
            return Err(Error::limit("genus search nodes", caps.node_cap as usize));
        }
        Ok(())
    };
    let mut commutators: Vec<(Word, (Word, Word))> = Vec::new();
    let mut by_value: HashMap<Word, usize> = HashMap::new();
    let mut candidates: Vec<(Word, Word)> =
        entries.iter().flat_map(|x| entries.iter().map(move |y| (x.clone(), y.clone()))).collect();
    candidates.sort_by(|a, b| (a.0.len() + a.1.len(), a).cmp(&(b.0.len() + b.1.len(), b)));
    tick(candidates.len() as u64)?;
    for (x, y) in candidates {
        let c = o.normal_form(&Word::commutator(&x, &y))?;
        if c.is_empty() || by_value.contains_key(&c) {
            continue;
        }
        by_value.insert(c.clone(), commutators.len());
        commutators.push((c, (x, y)));
    }
    let t = tuple.len();
    let mut conj_choices: Vec<Vec<Word>> = vec![vec![Word::empty()]];
    for _ in 1..t {
        let mut next = Vec::new();
        for prefix in &conj_choices {
            for h in &conj_ball {
                let mut p = prefix.clone();
                p.push(h.clone());
                next.push(p);
            }
        }
        tick(next.len() as u64)?;
        conj_choices = next;
    }
    for k in 0..=caps.max_k {
        for hs in &conj_choices {
            let w = GenusWitness { conjugators: hs.clone(), pairs: Vec::new() };
            let target = o.normal_form(&w.conjugated_product(tuple))?;
            tick(1)?;
            if k == 0 {
                if target.is_empty() {
                    return Ok(GenusOutcome { k: Some(0), witness: Some(w), caps, status: GenusStatus::Exact });
                }
                continue;
            }
            let mut chosen = Vec::new();
            if let Some(pairs) = complete(o, &commutators, &by_value, &target, k, &mut chosen, &mut tick)? {
                let witness = GenusWitness { conjugators: hs.clone(), pairs };
                return Ok(GenusOutcome { k: Some(k), witness: Some(witness), caps, status: GenusStatus::Exact });
            }
        }
    }
    Ok(GenusOutcome::unknown(caps))
}

type Commutators = [(Word, (Word, Word))];

/// Chooses `k` commutators from the list whose product is `target`.
fn complete(
    o: &GroupOracle,
    list: &Commutators,
    by_value: &HashMap<Word, usize>,
    target: &Word,
    k: usize,
    chosen: &mut Vec<usize>,
    tick: &mut impl FnMut(u64) -> Result<()>,
) -> Result<Option<Vec<(Word, Word)>>> {
    if k == 1 {
        tick(1)?;
        return Ok(by_value.get(target).map(|&i| chosen.iter().chain([&i]).map(|&j| list[j].1.clone()).collect()));
    }
    for (i, (c, _)) in list.iter().enumerate() {
        tick(1)?;
        let rest = o.normal_form(&c.inverse().concat(target))?;
        chosen.push(i);
        let found = complete(o, list, by_value, &rest, k - 1, chosen, tick)?;
        chosen.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Exact genus of an orientable quadratic word in the free group on its
/// letters.
pub fn quadratic_genus_free(w: &OrientableWord) -> usize {
    w.genus()
}

/// Letters of all cyclic cores laid end to end, with the successor map
/// that closes each core into a cycle.
struct Layout {
    letters: Vec<Letter>,
    next: Vec<usize>,
    word_of: Vec<usize>,
    words: usize,
}

impl Layout {
    fn new(cores: &[Word]) -> Self {
        let (mut letters, mut next, mut word_of) = (Vec::new(), Vec::new(), Vec::new());
        for (i, c) in cores.iter().enumerate() {
            let start = letters.len();
            for (j, &l) in c.letters().iter().enumerate() {
                letters.push(l);
                next.push(start + (j + 1) % c.len());
                word_of.push(i);
            }
        }
        Layout { letters, next, word_of, words: cores.len() }
    }
}

const FREE: usize = usize::MAX;

struct PairSearch<'a> {
    lay: &'a Layout,
    partner: Vec<usize>,
    closed: usize,
    best_k: usize,
    best: Option<Vec<usize>>,
    nodes: u64,
    cap: u64,
}

impl PairSearch<'_> {
    /// Follows sigma from `p`; true if it returns to `p`.
    fn closes(&self, p: usize) -> bool {
        let mut x = p;
        loop {
            let q = self.partner[x];
            if q == FREE {
                return false;
            }
            x = self.lay.next[q];
            if x == p {
                return true;
            }
        }
    }

    fn in_cycle_of(&self, p: usize, target: usize) -> bool {
        let mut x = p;
        loop {
            x = self.lay.next[self.partner[x]];
            if x == target {
                return true;
            }
            if x == p {
                return false;
            }
        }
    }

    /// Cycles of the permutation sending a free position to the free end of
    /// the chain starting at its successor.
    fn free_cycles(&self) -> usize {
        let n = self.partner.len();
        let mut f = vec![FREE; n];
        for p in (0..n).filter(|&p| self.partner[p] == FREE) {
            let mut x = self.lay.next[p];
            while self.partner[x] != FREE {
                x = self.lay.next[self.partner[x]];
            }
            f[p] = x;
        }
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for p in 0..n {
            if f[p] == FREE || seen[p] {
                continue;
            }
            cycles += 1;
            let mut x = p;
            while !seen[x] {
                seen[x] = true;
                x = f[x];
            }
        }
        cycles
    }

    fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.lay.words).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for (p, &q) in self.partner.iter().enumerate() {
            let (a, b) = (find(&mut parent, self.lay.word_of[p]), find(&mut parent, self.lay.word_of[q]));
            parent[a] = b;
        }
        (0..self.lay.words).filter(|&i| find(&mut parent, i) == i).count()
    }

    /// `2c - v + e - t`, twice the genus, for given vertex and component
    /// counts.
    fn twice_genus(&self, v: usize, c: usize) -> isize {
        2 * c as isize - v as isize + (self.partner.len() / 2) as isize - self.lay.words as isize
    }

    fn run(&mut self, free: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::limit("genus pairing nodes", self.cap as usize));
        }
        if free == 0 {
            let g = self.twice_genus(self.closed, self.components());
            let k = (g / 2) as usize;
            if k < self.best_k {
                self.best_k = k;
                self.best = Some(self.partner.clone());
            }
            return Ok(());
        }
        let v_max = self.closed + self.free_cycles() + free / 2;
        let lower = self.twice_genus(v_max, 1).max(0);
        if (lower as usize).div_ceil(2) >= self.best_k {
            return Ok(());
        }
        let p = self.partner.iter().position(|&q| q == FREE).expect("a free position");
        let want = self.lay.letters[p].inverse();
        for q in p + 1..self.partner.len() {
            if self.partner[q] != FREE || self.lay.letters[q] != want {
                continue;
            }
            self.partner[p] = q;
            self.partner[q] = p;
            let mut gained = 0;
            if self.closes(p) {
                gained += 1;
            }
            if self.closes(q) && !self.in_cycle_of(q, p) {
                gained += 1;
            }
            self.closed += gained;
            self.run(free - 2)?;
            self.closed -= gained;
            self.partner[p] = FREE;
            self.partner[q] = FREE;
            if self.best_k == 0 {
                break;
            }
        }
        Ok(())
    }
}

/// Genus of a tuple in a free group, by minimising over all ways of gluing
/// the boundary polygons of the cyclic cores along inverse letters.
pub fn free_genus(tuple: &[Word], node_cap: u64) -> Result<(usize, GenusWitness)> {
    let reduced: Vec<(Word, Word)> = tuple.iter().map(|g| cyclic_reduce(&g.free_reduce())).collect();
    let live: Vec<usize> = (0..tuple.len()).filter(|&i| !reduced[i].0.is_empty()).collect();
    let cores: Vec<Word> = live.iter().map(|&i| reduced[i].0.clone()).collect();
    if let [i, j] = live[..] {
        if let Some(c) = free_conjugator(&tuple[i], &tuple[j].inverse()) {
            let mut conjugators = vec![Word::empty(); tuple.len()];
            conjugators[j] = c;
            return Ok((0, GenusWitness { conjugators, pairs: Vec::new() }));
        }
    }
    let lay = Layout::new(&cores);
    let mut balance: HashMap<u8, i64> = HashMap::new();
    for l in &lay.letters {
        *balance.entry(l.generator()).or_default() += l.sign() as i64;
    }
    if balance.values().any(|&b| b != 0) {
        return Err(Error::Precondition("tuple product is not in the commutator subgroup".into()));
    }
    let mut search = PairSearch {
        lay: &lay,
        partner: vec![FREE; lay.letters.len()],
        closed: 0,
        best_k: usize::MAX,
        best: None,
        nodes: 0,
        cap: node_cap,
    };
    search.run(lay.letters.len())?;
    let (k, partner) = match search.best {
        Some(p) => (search.best_k, p),
        None if cores.is_empty() => (0, Vec::new()),
        None => return Err(Error::Construction("no pairing found".into())),
    };
    let pieces: Vec<Piece> = live
        .iter()
        .zip(&cores)
        .scan(0usize, |start, (&i, core)| {
            let s = *start;
            *start += core.len();
            Some(Piece {
                letters: core.letters().iter().enumerate().map(|(j, &l)| (l, s + j)).collect(),
                members: vec![(i, reduced[i].1.inverse())],
                pairs: Vec::new(),
            })
        })
        .collect();
    let mut sequence = Vec::new();
    let mut pairs = Vec::new();
    for mut piece in merge_pieces(pieces, &partner) {
        piece.decompose(&partner);
        sequence.extend(piece.members);
        pairs.extend(piece.pairs);
    }
    let conjugators = order_members(sequence, tuple);
    Ok((k, GenusWitness { conjugators, pairs }))
}

/// A cyclic word with position labels, and the members whose conjugates
/// multiply to `[a_1, b_1] ... [a_j, b_j]` times the word.
struct Piece {
    letters: Vec<(Letter, usize)>,
    members: Vec<(usize, Word)>,
    pairs: Vec<(Word, Word)>,
}

impl Piece {
    fn segment(&self, from: usize, to: usize) -> Word {
        Word::new(self.letters[from..to].iter().map(|&(l, _)| l).collect())
    }

    /// Replaces the word by `u^-1 W u` with `u` its first `j` letters.
    fn rotate(&mut self, j: usize) {
        let u = self.segment(0, j);
        let ui = u.inverse();
        self.letters.rotate_left(j);
        for (_, m) in &mut self.members {
            *m = ui.concat(m).free_reduce();
        }
        for (a, b) in &mut self.pairs {
            *a = Word::join([&ui, a, &u]).free_reduce();
            *b = Word::join([&ui, b, &u]).free_reduce();
        }
    }

    fn index_of(&self, pos: usize) -> Option<usize> {
        self.letters.iter().position(|&(_, p)| p == pos)
    }

    fn genus(&self, partner: &[usize]) -> usize {
        let n = self.letters.len();
        if n == 0 {
            return 0;
        }
        let idx: HashMap<usize, usize> = self.letters.iter().enumerate().map(|(i, &(_, p))| (p, i)).collect();
        let mut seen = vec![false; n];
        let mut v = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            v += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = (idx[&partner[self.letters[x].1]] + 1) % n;
            }
        }
        (1 + n / 2 - v) / 2
    }

    fn decompose(&mut self, partner: &[usize]) {
        while !self.letters.is_empty() {
            let n = self.letters.len();
            let partner_idx =
                |s: &Piece, i: usize| s.index_of(partner[s.letters[i].1]).expect("partner in the same piece");
            if let Some(i) = (0..n - 1).find(|&i| partner_idx(self, i) == i + 1) {
                self.letters.drain(i..i + 2);
                continue;
            }
            if partner_idx(self, 0) == n - 1 {
                self.rotate(1);
                continue;
            }
            let g = self.genus(partner);
            let mut fallback = None;
            let mut chosen = None;
            'search: for i in 0..n {
                let k = partner_idx(self, i);
                if k < i {
                    continue;
                }
                for j in i + 1..k {
                    let l = partner_idx(self, j);
                    if l <= k {
                        continue;
                    }
                    fallback.get_or_insert((i, j));
                    let mut trial = Piece { letters: self.letters.clone(), members: Vec::new(), pairs: Vec::new() };
                    trial.rotate(i);
                    trial.extract(j - i, k - i, l - i);
                    if trial.genus(partner) + 1 == g {
                        chosen = Some((i, j));
                        break 'search;
                    }
                }
            }
            let (i, j) = chosen.or(fallback).expect("a crossing pair exists in positive genus");
            let (k, l) = (partner_idx(self, i), partner_idx(self, j));
            self.rotate(i);
            self.extract(j - i, k - i, l - i);
        }
    }

    /// With `W = x P y Q X R Y S` and `y, X, Y` at `j, k, l`, records
    /// `[x Q^-1 R^-1, R Q P y R^-1]` and leaves `R Q P S`.
    fn extract(&mut self, j: usize, k: usize, l: usize) {
        let x = self.segment(0, 1);
        let p = self.segment(1, j);
        let y = self.segment(j, j + 1);
        let q = self.segment(j + 1, k);
        let r = self.segment(k + 1, l);
        let a = Word::join([&x, &q.inverse(), &r.inverse()]).free_reduce();
        let b = Word::join([&r, &q, &p, &y, &r.inverse()]).free_reduce();
        self.pairs.push((a, b));
        let mut rest = Vec::with_capacity(self.letters.len() - 4);
        rest.extend_from_slice(&self.letters[k + 1..l]);
        rest.extend_from_slice(&self.letters[j + 1..k]);
        rest.extend_from_slice(&self.letters[1..j]);
        rest.extend_from_slice(&self.letters[l + 1..]);
        self.letters = rest;
    }
}

fn merge_pieces(mut pieces: Vec<Piece>, partner: &[usize]) -> Vec<Piece> {
    loop {
        let home: HashMap<usize, usize> =
            pieces.iter().enumerate().flat_map(|(i, pc)| pc.letters.iter().map(move |&(_, p)| (p, i))).collect();
        let cross = pieces.iter().enumerate().find_map(|(i, pc)| {
            pc.letters.iter().enumerate().find_map(|(a, &(_, p))| {
                let j = home[&partner[p]];
                (j != i).then(|| (i, a, j, pieces[j].index_of(partner[p]).expect("indexed")))
            })
        });
        let Some((i, a, j, b)) = cross else { return pieces };
        let (lo, hi) = (i.min(j), i.max(j));
        let mut second = pieces.remove(hi);
        let mut first = pieces.remove(lo);
        let (fa, sb) = if i < j { (a, b) } else { (b, a) };
        first.rotate(fa + 1);
        second.rotate(sb);
        first.letters.extend(second.letters);
        first.members.extend(second.members);
        pieces.insert(lo, first);
    }
}

/// Reorders `(index, m)` entries, whose conjugates `m g m^-1` multiply in
/// sequence order, into tuple order while keeping the product.
fn order_members(mut seq: Vec<(usize, Word)>, tuple: &[Word]) -> Vec<Word> {
    let q = |(i, m): &(usize, Word)| Word::join([m, &tuple[*i], &m.inverse()]).free_reduce();
    for i in 1..seq.len() {
        let mut j = i;
        while j > 0 && seq[j - 1].0 > seq[j].0 {
            let qb = q(&seq[j]);
            let moved = (seq[j - 1].0, qb.inverse().concat(&seq[j - 1].1).free_reduce());
            seq[j - 1] = std::mem::replace(&mut seq[j], moved);
            j -= 1;
        }
    }
    let mut conj: Vec<Word> = vec![Word::empty(); tuple.len()];
    for (i, m) in seq {
        conj[i] = m;
    }
    conj
}
