//! Shortlex Knuth-Bendix completion truncated at a maximal left-hand side
//! length.

use crate::word::{Letter, Word};

type Rule = (Vec<Letter>, Vec<Letter>);

fn shortlex_gt(u: &[Letter], v: &[Letter]) -> bool {
    (u.len(), u) > (v.len(), v)
}

fn find(hay: &[Letter], needle: &[Letter]) -> Option<usize> {
    if needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| &hay[i..i + needle.len()] == needle)
}

fn naive_reduce(rules: &[Rule], w: &[Letter]) -> Vec<Letter> {
    let mut cur = w.to_vec();
    'outer: loop {
        for (l, r) in rules {
            if let Some(i) = find(&cur, l) {
                let mut next = cur[..i].to_vec();
                next.extend_from_slice(r);
                next.extend_from_slice(&cur[i + l.len()..]);
                cur = next;
                continue 'outer;
            }
        }
        return cur;
    }
}

/// A length-reducing rewriting system with shortlex-oriented rules.
#[derive(Clone, Debug)]
pub struct Rewriting {
    rules: Vec<Rule>,
    by_last: Vec<Vec<usize>>,
    truncation: usize,
}

impl Rewriting {
    /// Runs completion keeping only rules whose left side has length at most
    /// `truncation`. Returns `None` if more than `rule_cap` rules appear.
    pub fn complete(generators: &[Letter], relators: &[Word], truncation: usize, rule_cap: usize) -> Option<Rewriting> {
        let mut rules: Vec<Rule> = Vec::new();
        let add = |rules: &mut Vec<Rule>, u: &[Letter], v: &[Letter]| -> bool {
            let u = naive_reduce(rules, u);
            let v = naive_reduce(rules, v);
            if u == v {
                return false;
            }
            let (l, r) = if shortlex_gt(&u, &v) { (u, v) } else { (v, u) };
            if l.len() > truncation {
                return false;
            }
            rules.push((l, r));
            true
        };
        for &g in generators {
            rules.push((vec![g, g.inverse()], vec![]));
            rules.push((vec![g.inverse(), g], vec![]));
        }
        for rel in relators {
            for base in [rel.clone(), rel.inverse()] {
                for i in 0..base.len() {
                    let rot = base.rotate(i);
                    let l = rot.letters();
                    for k in 0..=l.len() {
                        let rhs = Word::new(l[k..].to_vec()).inverse();
                        add(&mut rules, &l[..k], rhs.letters());
                    }
                }
            }
        }
        loop {
            interreduce(&mut rules, truncation);
            if rules.len() > rule_cap {
                return None;
            }
            let snapshot = rules.clone();
            let mut new = false;
            for (l1, r1) in &snapshot {
                for (l2, r2) in &snapshot {
                    for k in 1..l1.len().min(l2.len()) {
                        if l1[l1.len() - k..] != l2[..k] {
                            continue;
                        }
                        let mut a = r1.clone();
                        a.extend_from_slice(&l2[k..]);
                        let mut b = l1[..l1.len() - k].to_vec();
                        b.extend_from_slice(r2);
                        if add(&mut rules, &a, &b) {
                            new = true;
                        }
                    }
                }
            }
            if !new {
                break;
            }
        }
        interreduce(&mut rules, truncation);
        rules.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        let mut by_last = vec![Vec::new(); 64];
        for (i, (l, _)) in rules.iter().enumerate() {
            by_last[l[l.len() - 1].code() as usize].push(i);
        }
        Some(Rewriting { rules, by_last, truncation })
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn rules(&self) -> impl Iterator<Item = (Word, Word)> + '_ {
        self.rules.iter().map(|(l, r)| (Word::new(l.clone()), Word::new(r.clone())))
    }

    /// Index of a rule whose left side is a suffix of `w`.
    fn suffix_rule(&self, w: &[Letter]) -> Option<usize> {
        let last = *w.last()?;
        self.by_last[last.code() as usize].iter().copied().find(|&i| w.ends_with(&self.rules[i].0))
    }

    /// Irreducible form of `w`.
    pub fn reduce(&self, w: &[Letter]) -> Vec<Letter> {
        let mut out: Vec<Letter> = Vec::with_capacity(w.len());
        let mut input: Vec<Letter> = w.iter().rev().copied().collect();
        while let Some(x) = input.pop() {
            out.push(x);
            if let Some(i) = self.suffix_rule(&out) {
                let (l, r) = &self.rules[i];
                out.truncate(out.len() - l.len());
                input.extend(r.iter().rev());
            }
        }
        out
    }

    /// Number of irreducible words of each length `0..=r` over `alphabet`,
    /// counted on the pattern-matching automaton of the left sides.
    pub fn count_irreducible(&self, alphabet: &[Letter], r: usize) -> Vec<u128> {
        let k = alphabet.len();
        let col = |x: Letter| alphabet.iter().position(|&y| y == x).expect("letter in alphabet");
        let mut next: Vec<Vec<usize>> = vec![vec![usize::MAX; k]];
        let mut dead = vec![false];
        for (l, _) in &self.rules {
            let mut s = 0;
            for &x in l {
                let c = col(x);
                if next[s][c] == usize::MAX {
                    next[s][c] = next.len();
                    next.push(vec![usize::MAX; k]);
                    dead.push(false);
                }
                s = next[s][c];
            }
            dead[s] = true;
        }
        let mut fail = vec![0usize; next.len()];
        let mut queue = std::collections::VecDeque::new();
        for slot in next[0].iter_mut() {
            match *slot {
                usize::MAX => *slot = 0,
                t => queue.push_back(t),
            }
        }
        while let Some(s) = queue.pop_front() {
            dead[s] |= dead[fail[s]];
            #[allow(clippy::needless_range_loop)]
            for c in 0..k {
                let t = next[s][c];
                if t == usize::MAX {
                    next[s][c] = next[fail[s]][c];
                } else {
                    fail[t] = next[fail[s]][c];
                    queue.push_back(t);
                }
            }
        }
        let mut counts = vec![0u128; next.len()];
        counts[0] = 1;
        let mut out = vec![1u128];
        for _ in 0..r {
            let mut step = vec![0u128; next.len()];
            for (s, &n) in counts.iter().enumerate() {
                if n == 0 {
                    continue;
                }
                for &t in &next[s] {
                    if !dead[t] {
                        step[t] += n;
                    }
                }
            }
            out.push(step.iter().sum());
            counts = step;
        }
        out
    }

    /// True if `w` is irreducible given that `w` without its last letter is.
    pub fn extends_irreducibly(&self, w: &[Letter]) -> bool {
        self.suffix_rule(w).is_none()
    }
}

fn interreduce(rules: &mut Vec<Rule>, truncation: usize) {
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < rules.len() {
            let (l, r) = rules.remove(i);
            let l2 = naive_reduce(rules, &l);
            let r2 = naive_reduce(rules, &r);
            if l2 != l || r2 != r {
                changed = true;
            }
            if l2 != r2 {
                let (a, b) = if shortlex_gt(&l2, &r2) { (l2, r2) } else { (r2, l2) };
                if a.len() <= truncation {
                    rules.insert(i, (a, b));
                    i += 1;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    fn gens(n: u8) -> Vec<Letter> {
        (0..n).map(|g| Letter::new(g, true)).collect()
    }

    #[test]
    fn free_group_rules() {
        let rw = Rewriting::complete(&gens(2), &[], 10, 100).unwrap();
        assert_eq!(rw.rule_count(), 4);
        assert_eq!(Word::new(rw.reduce(w("aBbAb").letters())), w("b"));
    }

    #[test]
    fn cyclic_five() {
        let rw = Rewriting::complete(&gens(1), &[w("aaaaa")], 10, 100).unwrap();
        assert_eq!(Word::new(rw.reduce(w("aaaa").letters())), w("A"));
        assert_eq!(Word::new(rw.reduce(w("AAA").letters())), w("aa"));
    }

    #[test]
    fn surface_group_sphere_counts() {
        let rw = Rewriting::complete(&gens(4), &[w("abABcdCD")], 20, 1000).unwrap();
        let alphabet: Vec<Letter> = (0..8).map(Letter::from_code).collect();
        let mut layer = vec![Vec::<Letter>::new()];
        let mut counts = vec![1usize];
        for _ in 0..4 {
            let mut next = Vec::new();
            for u in &layer {
                for &x in &alphabet {
                    let mut v = u.clone();
                    v.push(x);
                    if rw.extends_irreducibly(&v) {
                        next.push(v);
                    }
                }
            }
            counts.push(next.len());
            layer = next;
        }
        assert_eq!(counts, vec![1, 8, 56, 392, 2736]);
        let dp: Vec<usize> = rw.count_irreducible(&alphabet, 6).into_iter().map(|c| c as usize).collect();
        assert_eq!(dp, vec![1, 8, 56, 392, 2736, 19096, 133288]);
    }
}
