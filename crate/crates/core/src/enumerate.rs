//! Enumeration of Wicks forms of a given genus up to relabelling and rotation.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quadratic::{is_wicks_form, OrientableWord, WicksForm};
use crate::word::{Letter, Word};

/// Default node budget for one enumeration.
pub const DEFAULT_NODE_CAP: u64 = 2_000_000_000;

/// Relabels letters in order of first appearance, first occurrence positive.
pub fn relabel(letters: &[Letter]) -> Vec<Letter> {
    let mut map = [u8::MAX; 128];
    let mut next = 0u8;
    letters
        .iter()
        .map(|l| {
            let g = l.generator() as usize;
            if map[g] == u8::MAX {
                map[g] = next << 1 | (l.code() & 1);
                next += 1;
            }
            Letter::from_code(map[g] ^ (l.code() & 1))
        })
        .collect()
}

/// Canonical representative under relabelling and rotation.
pub fn canonical_form(w: &Word) -> Word {
    let l = w.letters();
    (0..l.len().max(1))
        .map(|k| {
            let rot: Vec<Letter> = l[k.min(l.len())..].iter().chain(&l[..k.min(l.len())]).copied().collect();
            relabel(&rot)
        })
        .min()
        .map(Word::new)
        .unwrap_or_default()
}

struct Search {
    len: usize,
    edges: usize,
    target_vertices: usize,
    word: Vec<Letter>,
    partner: Vec<usize>,
    open: Vec<u8>,
    nodes: u64,
    cap: u64,
    found: BTreeSet<Word>,
}

impl Search {
    fn sigma(&self, c: usize) -> Option<usize> {
        let p = self.partner[c];
        (p != usize::MAX).then(|| (p + 1) % self.len)
    }

    /// True if the corner orbit through `c` is closed and shorter than three.
    fn short_orbit(&self, c: usize) -> bool {
        let mut x = c;
        for step in 1..=2 {
            match self.sigma(x) {
                Some(y) if y == c => return step < 3,
                Some(y) => x = y,
                None => return false,
            }
        }
        false
    }

    fn leaf(&mut self) {
        let n = self.len;
        let mut seen = vec![false; n];
        let mut v = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            v += 1;
            let mut c = s;
            let mut size = 0;
            while !seen[c] {
                seen[c] = true;
                size += 1;
                c = (self.partner[c] + 1) % n;
            }
            if size < 3 || v > self.target_vertices {
                return;
            }
        }
        if v == self.target_vertices {
            self.found.insert(canonical_form(&Word::new(self.word.clone())));
        }
    }

    fn go(&mut self, pos: usize, introduced: u8) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::limit("enumeration nodes", self.cap as usize));
        }
        if pos == self.len {
            self.leaf();
            return Ok(());
        }
        let remaining = self.len - pos;
        if (introduced as usize) < self.edges && self.open.len() + 1 < remaining {
            let l = Letter::new(introduced, true);
            self.word.push(l);
            self.open.push(introduced);
            self.go(pos + 1, introduced + 1)?;
            self.open.pop();
            self.word.pop();
        }
        for i in 0..self.open.len() {
            let g = self.open[i];
            let l = Letter::new(g, false);
            if self.word.last() == Some(&l.inverse()) {
                continue;
            }
            if pos == self.len - 1 && self.word[0] == l.inverse() {
                continue;
            }
            let p = self.word.iter().position(|x| *x == l.inverse()).expect("open letter placed");
            self.word.push(l);
            self.partner[p] = pos;
            self.partner[pos] = p;
            if !(self.short_orbit(p)
                || self.short_orbit(pos)
                || self.short_orbit((p + 1) % self.len)
                || self.short_orbit((pos + 1) % self.len))
            {
                self.open.remove(i);
                self.go(pos + 1, introduced)?;
                self.open.insert(i, g);
            }
            self.partner[p] = usize::MAX;
            self.partner[pos] = usize::MAX;
            self.word.pop();
        }
        Ok(())
    }
}

/// All Wicks forms of graph genus `n` and length at most `max_len`
/// (default `12n - 6`), one per relabelling-and-rotation class, ordered by
/// length then canonical word.
pub fn enumerate_wicks_forms(n: usize, max_len: Option<usize>) -> Result<Vec<WicksForm>> {
    enumerate_wicks_forms_capped(n, max_len, DEFAULT_NODE_CAP)
}

pub fn enumerate_wicks_forms_capped(n: usize, max_len: Option<usize>, cap: u64) -> Result<Vec<WicksForm>> {
    if n == 0 {
        return Err(Error::Precondition("genus must be at least 1".into()));
    }
    let max_len = max_len.unwrap_or(12 * n - 6);
    if !max_len.is_multiple_of(2) {
        return Err(Error::Precondition("max_len must be even".into()));
    }
    let results: Vec<Result<BTreeSet<Word>>> = (2 * n..=max_len / 2)
        .into_par_iter()
        .map(|edges| {
            let len = 2 * edges;
            let mut s = Search {
                len,
                edges,
                target_vertices: 1 + edges - 2 * n,
                word: Vec::with_capacity(len),
                partner: vec![usize::MAX; len],
                open: Vec::new(),
                nodes: 0,
                cap,
                found: BTreeSet::new(),
            };
            s.go(0, 0)?;
            Ok(s.found)
        })
        .collect();
    let mut all = BTreeSet::new();
    for r in results {
        all.extend(r?);
    }
    all.into_iter()
        .map(|w| {
            debug_assert!(is_wicks_form(&w));
            let base = OrientableWord::new(w)?;
            let genus = base.genus();
            Ok(WicksForm { base, genus })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    #[test]
    fn relabel_first_appearance() {
        assert_eq!(Word::new(relabel(w("BAba").letters())), w("abAB"));
        assert_eq!(canonical_form(&w("ABab")), w("abAB"));
        assert_eq!(canonical_form(&w("cbaCBA")), w("abcABC"));
    }

    #[test]
    fn genus_one() {
        let forms = enumerate_wicks_forms(1, None).unwrap();
        let words: Vec<String> = forms.iter().map(|f| f.base.to_string()).collect();
        assert_eq!(words, vec!["abAB", "abcABC"]);
    }

    #[test]
    fn genus_one_beyond_bound() {
        let forms = enumerate_wicks_forms(1, Some(8)).unwrap();
        assert_eq!(forms.len(), 2);
        assert!(forms.iter().all(|f| f.base.len() <= 6));
    }

    #[test]
    fn odd_length_rejected() {
        assert!(enumerate_wicks_forms(1, Some(7)).is_err());
    }

    #[test]
    fn tiny_cap_is_reported() {
        assert!(matches!(enumerate_wicks_forms_capped(2, None, 10), Err(Error::Limit { .. })));
    }
}
