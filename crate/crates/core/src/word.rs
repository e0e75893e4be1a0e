//! Words over a signed alphabet.
//!
//! Lowercase ASCII letters are generators, uppercase letters their inverses,
//! and `"1"` is the empty word. The alphabet is ordered `a < A < b < B < ...`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A generator or its inverse, packed as `2 * generator + inverted`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub const fn new(generator: u8, positive: bool) -> Letter {
        Letter(generator << 1 | if positive { 0 } else { 1 })
    }

    pub const fn from_code(code: u8) -> Letter {
        Letter(code)
    }

    pub const fn code(self) -> u8 {
        self.0
    }

    pub const fn generator(self) -> u8 {
        self.0 >> 1
    }

    pub const fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub const fn sign(self) -> i8 {
        if self.is_positive() {
            1
        } else {
            -1
        }
    }

    pub const fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    pub fn from_char(c: char) -> Option<Letter> {
        if c.is_ascii_lowercase() {
            Some(Letter::new(c as u8 - b'a', true))
        } else if c.is_ascii_uppercase() {
            Some(Letter::new(c as u8 - b'A', false))
        } else {
            None
        }
    }

    pub fn to_char(self) -> char {
        let base = if self.is_positive() { b'a' } else { b'A' };
        (base + self.generator()) as char
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A finite sequence of letters. Ordered shortlex: length first, then
/// lexicographically in the alphabet order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Literal concatenation, no cancellation.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Literal concatenation of several words.
    pub fn join<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut v = Vec::new();
        for p in parts {
            v.extend_from_slice(&p.0);
        }
        Word(v)
    }

    /// Literal commutator `x y x^-1 y^-1`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        Word::join([x, y, &x.inverse(), &y.inverse()])
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.0.first(), self.0.last()) {
                (Some(f), Some(l)) if self.len() > 1 => *f != l.inverse(),
                _ => true,
            }
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Rotation `w[k..] w[..k]`, with `k` taken modulo the length.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = k % self.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Exponent sum of each of the first `rank` generators.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0i64; rank];
        for l in &self.0 {
            let g = l.generator() as usize;
            if g < rank {
                v[g] += l.sign() as i64;
            }
        }
        v
    }

    /// Largest generator index used, plus one.
    pub fn rank(&self) -> usize {
        self.0.iter().map(|l| l.generator() as usize + 1).max().unwrap_or(0)
    }

    pub fn starts_with(&self, prefix: &[Letter]) -> bool {
        self.0.starts_with(prefix)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        if s == "1" {
            return Ok(Word::empty());
        }
        if s.is_empty() {
            return Err(Error::Parse(s.to_string()));
        }
        s.chars()
            .map(Letter::from_char)
            .collect::<Option<Vec<_>>>()
            .map(Word)
            .ok_or_else(|| Error::Parse(s.to_string()))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a word, panicking on malformed input. Intended for literals.
pub fn w(s: &str) -> Word {
    s.parse().unwrap_or_else(|e| panic!("{e}"))
}

pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}

/// Returns `(core, conjugator)` with `w = conjugator * core * conjugator^-1`
/// after free reduction and `core` cyclically reduced.
pub fn cyclic_reduce(w: &Word) -> (Word, Word) {
    let r = w.free_reduce();
    let l = r.letters();
    let mut i = 0;
    let mut j = l.len();
    while j >= i + 2 && l[i] == l[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    (Word(l[i..j].to_vec()), Word(l[..i].to_vec()))
}

/// A word up to rotation, stored as its least rotation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct CyclicWord {
    pub representative: Word,
    pub cyclically_reduced: bool,
}

impl CyclicWord {
    pub fn len(&self) -> usize {
        self.representative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representative.is_empty()
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.representative)
    }
}

/// Index of the least rotation of `l` in lexicographic order.
pub fn least_rotation<T: Ord>(l: &[T]) -> usize {
    let n = l.len();
    let mut best = 0;
    for k in 1..n {
        let cmp = (0..n)
            .map(|i| l[(k + i) % n].cmp(&l[(best + i) % n]))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal);
        if cmp == Ordering::Less {
            best = k;
        }
    }
    best
}

pub fn canonical_cyclic(w: &Word) -> CyclicWord {
    let k = least_rotation(w.letters());
    let representative = w.rotate(k);
    let cyclically_reduced = representative.is_cyclically_reduced();
    CyclicWord { representative, cyclically_reduced }
}

/// A homomorphism from abstract letters to words, determined by the images
/// of positive letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabellingFunction {
    pub assignments: BTreeMap<char, Word>,
}

impl LabellingFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, letter: char, image: Word) -> Self {
        self.assignments.insert(letter.to_ascii_lowercase(), image);
        self
    }

    pub fn image(&self, l: Letter) -> Result<Word> {
        let key = Letter::new(l.generator(), true).to_char();
        let img = self.assignments.get(&key).ok_or(Error::Domain(key))?;
        Ok(if l.is_positive() { img.clone() } else { img.inverse() })
    }

    /// Image of `w` without free reduction.
    pub fn apply_literal(&self, w: &Word) -> Result<Word> {
        let mut out = Vec::new();
        for &l in w.letters() {
            out.extend_from_slice(self.image(l)?.letters());
        }
        Ok(Word::new(out))
    }
}

pub fn apply_labelling(theta: &LabellingFunction, w: &Word) -> Result<Word> {
    Ok(theta.apply_literal(w)?.free_reduce())
}

/// All reduced words of length exactly `len` over the first `rank` generators,
/// in shortlex order.
pub fn reduced_words(rank: usize, len: usize) -> Vec<Word> {
    let mut layer = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(layer.len() * 2 * rank);
        for w in &layer {
            for code in 0..(2 * rank) as u8 {
                let l = Letter::from_code(code);
                if w.letters().last() == Some(&l.inverse()) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        layer = next;
    }
    layer
}

/// All words (not necessarily reduced) of length exactly `len`.
pub fn all_words(rank: usize, len: usize) -> Vec<Word> {
    let mut layer = vec![Word::empty()];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..(2 * rank) as u8).map(move |c| {
                    let mut v = w.clone();
                    v.push(Letter::from_code(c));
                    v
                })
            })
            .collect();
    }
    layer
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(w("1").len(), 0);
        assert_eq!(w("abAB").to_string(), "abAB");
        assert_eq!(Word::empty().to_string(), "1");
        assert!("".parse::<Word>().is_err());
        assert!("a b".parse::<Word>().is_err());
        assert!("a1".parse::<Word>().is_err());
    }

    #[test]
    fn letter_order() {
        let a = Letter::from_char('a').unwrap();
        let big_a = Letter::from_char('A').unwrap();
        let b = Letter::from_char('b').unwrap();
        assert!(a < big_a && big_a < b);
        assert_eq!(a.inverse(), big_a);
        assert_eq!(a.inverse().inverse(), a);
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(w("aA").free_reduce(), w("1"));
        assert_eq!(w("aBbc").free_reduce(), w("ac"));
        assert_eq!(w("abAB").free_reduce(), w("abAB"));
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(cyclic_reduce(&w("Abca")), (w("bc"), w("A")));
        assert_eq!(cyclic_reduce(&w("abAB")), (w("abAB"), w("1")));
        assert_eq!(cyclic_reduce(&w("1")), (w("1"), w("1")));
        assert_eq!(cyclic_reduce(&w("aA")), (w("1"), w("1")));
    }

    #[test]
    fn canonical_cyclic_examples() {
        assert_eq!(canonical_cyclic(&w("bca")).representative, w("abc"));
        assert_eq!(canonical_cyclic(&w("abAB")), canonical_cyclic(&w("ABab")));
        assert_eq!(canonical_cyclic(&w("ab")), canonical_cyclic(&w("ba")));
        assert!(!canonical_cyclic(&w("abA")).cyclically_reduced);
    }

    #[test]
    fn labelling_examples() {
        let t = LabellingFunction::new().with('a', w("a")).with('b', w("b"));
        assert_eq!(apply_labelling(&t, &w("abaB")).unwrap(), w("abaB"));
        let t = LabellingFunction::new().with('a', w("ab"));
        assert_eq!(apply_labelling(&t, &w("aA")).unwrap(), w("1"));
        let t = LabellingFunction::new().with('a', w("a")).with('b', w("A"));
        assert_eq!(apply_labelling(&t, &w("ab")).unwrap(), w("1"));
        assert_eq!(apply_labelling(&t, &w("c")), Err(Error::Domain('c')));
    }

    #[test]
    fn shortlex_order() {
        let mut v = vec![w("b"), w("aa"), w("A"), w("1"), w("a")];
        v.sort();
        assert_eq!(v, vec![w("1"), w("a"), w("A"), w("b"), w("aa")]);
    }

    #[test]
    fn reduced_word_counts() {
        assert_eq!(reduced_words(2, 3).len(), 4 * 3 * 3);
        assert_eq!(all_words(2, 3).len(), 64);
    }
}
