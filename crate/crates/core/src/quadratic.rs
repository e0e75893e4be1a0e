//! Orientable quadratic words, redundancy and Wicks-form recognition.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::word::{canonical_cyclic, CyclicWord, Letter, Word};

/// A word in which every letter occurs exactly twice, once with each sign.
///
/// Positions refer to the word as given; the cyclic class is available via
/// [`OrientableWord::canonical`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrientableWord {
    word: Word,
    letter_index: BTreeMap<u8, (usize, usize)>,
    partner: Vec<usize>,
}

impl OrientableWord {
    pub fn new(word: Word) -> Result<Self> {
        let mut seen: BTreeMap<u8, (Option<usize>, Option<usize>)> = BTreeMap::new();
        for (i, l) in word.letters().iter().enumerate() {
            let slot = seen.entry(l.generator()).or_default();
            let target = if l.is_positive() { &mut slot.0 } else { &mut slot.1 };
            if target.replace(i).is_some() {
                return Err(Error::Precondition(format!("{word} is not orientable quadratic")));
            }
        }
        let mut letter_index = BTreeMap::new();
        let mut partner = vec![0; word.len()];
        for (g, (p, n)) in seen {
            match (p, n) {
                (Some(p), Some(n)) => {
                    letter_index.insert(g, (p, n));
                    partner[p] = n;
                    partner[n] = p;
                }
                _ => return Err(Error::Precondition(format!("{word} is not orientable quadratic"))),
            }
        }
        Ok(OrientableWord { word, letter_index, partner })
    }

    pub fn parse(s: &str) -> Result<Self> {
        OrientableWord::new(s.parse()?)
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn letter_at(&self, p: usize) -> Letter {
        self.word.letters()[p]
    }

    /// Position of the other occurrence of the letter at `p`.
    pub fn partner(&self, p: usize) -> usize {
        self.partner[p]
    }

    /// Generators in increasing order with their (positive, negative) positions.
    pub fn letter_index(&self) -> &BTreeMap<u8, (usize, usize)> {
        &self.letter_index
    }

    /// Corner successor around a vertex: corner `p` is glued to corner
    /// `partner(p) + 1`.
    pub fn sigma(&self, p: usize) -> usize {
        (self.partner[p] + 1) % self.len()
    }

    /// Corner classes, each listed from its least corner in `sigma` order,
    /// ordered by least corner.
    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut c = start;
            while !seen[c] {
                seen[c] = true;
                orbit.push(c);
                c = self.sigma(c);
            }
            orbits.push(orbit);
        }
        orbits
    }

    pub fn edge_count(&self) -> usize {
        self.letter_index.len()
    }

    pub fn vertex_count(&self) -> usize {
        if self.is_empty() {
            1
        } else {
            self.vertex_orbits().len()
        }
    }

    /// Graph genus `(1 - v + e) / 2`.
    pub fn genus(&self) -> usize {
        (1 + self.edge_count() - self.vertex_count()) / 2
    }

    pub fn min_degree(&self) -> usize {
        self.vertex_orbits().iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn canonical(&self) -> CyclicWord {
        canonical_cyclic(&self.word)
    }
}

impl fmt::Display for OrientableWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

impl fmt::Debug for OrientableWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

impl Serialize for OrientableWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.word.serialize(s)
    }
}

pub fn is_orientable_quadratic(w: &Word) -> bool {
    OrientableWord::new(w.clone()).is_ok()
}

/// True iff some pair `x, y` of letters with distinct generators occurs only
/// inside cyclic subwords `xy` and `y^-1 x^-1`.
pub fn is_redundant(w: &OrientableWord) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    let letters = w.word().letters();
    let pos = |l: Letter| -> usize {
        let (p, q) = w.letter_index()[&l.generator()];
        if l.is_positive() {
            p
        } else {
            q
        }
    };
    for i in 0..n {
        let x = letters[i];
        let y = letters[(i + 1) % n];
        if x.generator() == y.generator() {
            continue;
        }
        if (pos(y.inverse()) + 1) % n == pos(x.inverse()) {
            return true;
        }
    }
    false
}

pub fn is_wicks_form(w: &Word) -> bool {
    if w.is_empty() || !w.is_cyclically_reduced() {
        return false;
    }
    match OrientableWord::new(w.clone()) {
        Ok(o) => !is_redundant(&o),
        Err(_) => false,
    }
}

/// Every orientable quadratic word on `edges` letters whose generators first
/// appear in alphabetical order.
pub fn orientable_words(edges: usize) -> Vec<Word> {
    fn go(edges: usize, used: &mut [u8], cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if cur.len() == 2 * edges {
            out.push(Word::new(cur.clone()));
            return;
        }
        let fresh = used.iter().position(|&u| u == 0);
        for g in 0..edges {
            let next_sign = match used[g] {
                0 if Some(g) == fresh => [true, false].to_vec(),
                0 => continue,
                1 => vec![!cur.iter().any(|l| l.generator() == g as u8 && l.is_positive())],
                _ => continue,
            };
            for positive in next_sign {
                used[g] += 1;
                cur.push(Letter::new(g as u8, positive));
                go(edges, used, cur, out);
                cur.pop();
                used[g] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    go(edges, &mut vec![0; edges], &mut Vec::new(), &mut out);
    out
}

/// A Wicks form with its genus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WicksForm {
    pub base: OrientableWord,
    pub genus: usize,
}

impl WicksForm {
    pub fn new(w: &Word) -> Result<Self> {
        if !is_wicks_form(w) {
            return Err(Error::Precondition(format!("{w} is not a Wicks form")));
        }
        let base = OrientableWord::new(w.clone())?;
        let genus = base.genus();
        Ok(WicksForm { base, genus })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    #[test]
    fn orientable_examples() {
        assert!(is_orientable_quadratic(&w("abAB")));
        assert!(!is_orientable_quadratic(&w("abab")));
        assert!(is_orientable_quadratic(&w("abcABC")));
        assert!(!is_orientable_quadratic(&w("abA")));
    }

    #[test]
    fn redundancy_examples() {
        assert!(!is_redundant(&OrientableWord::parse("abAB").unwrap()));
        assert!(is_redundant(&OrientableWord::parse("xyzYXZ").unwrap()));
        assert!(!is_redundant(&OrientableWord::parse("abcABC").unwrap()));
    }

    #[test]
    fn wicks_examples() {
        assert!(is_wicks_form(&w("abcABC")));
        assert!(!is_wicks_form(&w("aAbB")));
        assert!(!is_wicks_form(&w("xyzYXZ")));
        assert!(is_wicks_form(&w("abAB")));
    }

    #[test]
    fn orbits_and_genus() {
        let cases = [("aA", 2, 1, 0), ("abAB", 1, 2, 1), ("abcABC", 2, 3, 1), ("abABcdCD", 1, 4, 2)];
        for (s, v, e, g) in cases {
            let o = OrientableWord::parse(s).unwrap();
            assert_eq!((o.vertex_count(), o.edge_count(), o.genus()), (v, e, g), "{s}");
        }
        let o = OrientableWord::parse("abcCBA").unwrap();
        assert_eq!(o.vertex_orbits(), vec![vec![0], vec![1, 5], vec![2, 4], vec![3]]);
    }

    #[test]
    fn orientable_word_counts() {
        assert_eq!(orientable_words(1), vec![w("aA"), w("Aa")]);
        for e in 1..=4 {
            let ws = orientable_words(e);
            assert!(ws.iter().all(is_orientable_quadratic));
            let expected: usize = (e + 1..=2 * e).product();
            assert_eq!(ws.len(), expected);
        }
    }

    #[test]
    fn redundancy_matches_degree_two() {
        for s in ["abAB", "abcABC", "xyzYXZ", "abcCBA", "abABcdCD", "abcdABCD"] {
            let o = OrientableWord::parse(s).unwrap();
            let deg2 = o.vertex_orbits().iter().any(|c| c.len() == 2);
            assert_eq!(is_redundant(&o), deg2, "{s}");
        }
    }
}
