//! Dehn's algorithm over the symmetric closure of a relator set.

use std::collections::HashMap;

use crate::word::{Letter, Word};

#[derive(Clone, Debug)]
pub struct DehnReducer {
    pieces: HashMap<Vec<Letter>, Vec<Letter>>,
    lengths: Vec<usize>,
}

impl DehnReducer {
    pub fn new(relators: &[Word]) -> Self {
        let mut pieces = HashMap::new();
        for r in relators {
            let n = r.len();
            for base in [r.clone(), r.inverse()] {
                for k in 0..n {
                    let rho = base.rotate(k);
                    let l = rho.letters();
                    for cut in (n / 2 + 1)..=n {
                        let rest = Word::new(l[cut..].to_vec()).inverse();
                        pieces.entry(l[..cut].to_vec()).or_insert_with(|| rest.into_letters());
                    }
                }
            }
        }
        let mut lengths: Vec<usize> = pieces.keys().map(Vec::len).collect();
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths.dedup();
        DehnReducer { pieces, lengths }
    }

    /// Repeatedly replaces a subword longer than half a relator by the inverse
    /// of the remainder, with free reduction in between.
    pub fn reduce(&self, w: &Word) -> Word {
        let mut cur = w.free_reduce().into_letters();
        'outer: loop {
            for i in 0..cur.len() {
                for &k in &self.lengths {
                    if i + k > cur.len() {
                        continue;
                    }
                    if let Some(rep) = self.pieces.get(&cur[i..i + k]) {
                        let mut next = Vec::with_capacity(cur.len() - k + rep.len());
                        next.extend_from_slice(&cur[..i]);
                        next.extend_from_slice(rep);
                        next.extend_from_slice(&cur[i + k..]);
                        cur = Word::new(next).free_reduce().into_letters();
                        continue 'outer;
                    }
                }
            }
            return Word::new(cur);
        }
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.reduce(w).is_empty()
    }
}
