//! The four shapes of a commutator in a hyperbolic group: synthesis,
//! verification, matching, and the minimality inequalities of a labelled
//! Wicks form.

use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{all_passed, Clause};
use crate::error::{Error, Result};
use crate::extension::ExtensionPlan;
use crate::genus::GenusWitness;
use crate::group::{free_conjugator, Backend, BoundConstants, GroupOracle};
use crate::quadratic::WicksForm;
use crate::word::{cyclic_reduce, LabellingFunction, Word};

/// Component names of each variant, in display order.
pub fn variant_keys(variant: u8) -> Result<&'static [&'static str]> {
    Ok(match variant {
        1 => &["X", "Y", "Z"],
        2 => &["A1", "A2", "xi1", "xi2"],
        3 => &["A1", "B1", "A2", "B2", "xi1", "xi2", "xi3", "xi4"],
        4 => &["A1", "B1", "C1", "A2", "B2", "C2", "xi1", "xi2", "xi3", "rho1", "rho2", "rho3"],
        v => return Err(Error::Input(format!("variant {v} is not one of 1, 2, 3, 4"))),
    })
}

/// Seed names accepted by [`synthesize`].
pub fn seed_keys(variant: u8) -> Result<&'static [&'static str]> {
    Ok(match variant {
        1 => &["X", "Y", "Z", "R"],
        2 => &["xi1", "u", "A2", "R"],
        3 => &["xi1", "xi2", "xi3", "A2", "B2", "R"],
        4 => &["xi1", "xi2", "rho1", "rho2", "A2", "B2", "C2", "R"],
        v => return Err(Error::Input(format!("variant {v} is not one of 1, 2, 3, 4"))),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorForm {
    pub variant: u8,
    pub components: BTreeMap<String, Word>,
    #[serde(rename = "F")]
    pub f: Word,
    #[serde(rename = "R")]
    pub r: Word,
    pub h: Word,
    pub constants: BoundConstants,
}

impl CommutatorForm {
    pub fn get(&self, key: &str) -> Result<&Word> {
        self.components.get(key).ok_or_else(|| Error::constraint("shape", format!("component {key} is missing")))
    }

    /// `XYZX^-1Y^-1Z^-1`, `A1A2^-1`, `A1B1A2^-1B2^-1` or
    /// `A1B1C1A2^-1B2^-1C2^-1`, unreduced.
    pub fn pattern(&self) -> Result<Word> {
        let g = |k: &str| self.get(k).cloned();
        let (firsts, seconds): (Vec<&str>, Vec<&str>) = match self.variant {
            1 => (vec!["X", "Y", "Z"], vec!["X", "Y", "Z"]),
            2 => (vec!["A1"], vec!["A2"]),
            3 => (vec!["A1", "B1"], vec!["A2", "B2"]),
            4 => (vec!["A1", "B1", "C1"], vec!["A2", "B2", "C2"]),
            v => return Err(Error::Input(format!("variant {v} is not one of 1, 2, 3, 4"))),
        };
        let mut parts = Vec::new();
        for k in firsts {
            parts.push(g(k)?);
        }
        for k in seconds {
            parts.push(g(k)?.inverse());
        }
        Ok(Word::join(&parts))
    }

    /// Sum of the lengths of the `xi` and `rho` components.
    pub fn connector_length(&self) -> usize {
        self.components.iter().filter(|(k, _)| k.starts_with("xi") || k.starts_with("rho")).map(|(_, w)| w.len()).sum()
    }
}

/// How the conjugacy clause of the second form is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjugacyReading {
    /// `xi1` conjugate to `xi2`.
    #[default]
    Literal,
    /// `xi1` conjugate to `xi2^-1`.
    Inverse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormVerdict {
    pub verified: bool,
    pub clauses: Vec<Clause>,
}

pub fn verify_form(form: &CommutatorForm, o: &GroupOracle) -> Result<FormVerdict> {
    verify_form_with(form, o, ConjugacyReading::Literal)
}

/// Checks the clauses `shape`, `relation`, `length`, `conjugacy` (second
/// form only), `minimality`, `conjugate` and `R-bound`.
pub fn verify_form_with(form: &CommutatorForm, o: &GroupOracle, reading: ConjugacyReading) -> Result<FormVerdict> {
    let keys = variant_keys(form.variant)?;
    if let Some(k) = keys.iter().find(|k| !form.components.contains_key(**k)) {
        return Ok(FormVerdict {
            verified: false,
            clauses: vec![Clause::fail("shape", format!("component {k} is missing"))],
        });
    }
    if let Some(k) = form.components.keys().find(|k| !keys.contains(&k.as_str())) {
        return Ok(FormVerdict {
            verified: false,
            clauses: vec![Clause::fail("shape", format!("unexpected component {k}"))],
        });
    }
    for w in form.components.values().chain([&form.f, &form.r, &form.h]) {
        o.check_word(w)?;
    }
    let c = &form.constants;
    let cap = c.edge_cap();
    let g = |k: &str| form.components[k].clone();
    let mut clauses = vec![Clause::pass("shape")];

    let pattern = form.pattern()?;
    let relation = if form.variant == 1 {
        if o.equal(&form.f, &pattern) {
            Ok(())
        } else {
            Err("F differs from XYZX^-1Y^-1Z^-1".to_string())
        }
    } else {
        relation_clause(form, o, &pattern)?
    };
    clauses.push(Clause::from_result("relation", relation));

    let length = if form.variant == 1 {
        let over: Vec<&str> = ["X", "Y", "Z"].into_iter().filter(|k| g(k).len() as u64 > cap).collect();
        if !over.is_empty() {
            Err(format!("{} longer than {cap}", over.join(", ")))
        } else if form.f.len() as u64 > 6 * cap {
            Err(format!("|F| = {} exceeds {}", form.f.len(), 6 * cap))
        } else {
            Ok(())
        }
    } else if form.connector_length() as u64 > 12 * cap {
        Err(format!("connector length {} exceeds {}", form.connector_length(), 12 * cap))
    } else {
        Ok(())
    };
    clauses.push(Clause::from_result("length", length));

    if form.variant == 2 {
        let (x1, x2) = (g("xi1"), g("xi2"));
        let target = match reading {
            ConjugacyReading::Literal => x2,
            ConjugacyReading::Inverse => x2.inverse(),
        };
        let conj = match o.conjugacy_search(&x1, &target, c.m)? {
            Some(_) => Ok(()),
            None => Err(format!("{x1} is not conjugate to {target}")),
        };
        clauses.push(Clause::from_result("conjugacy", conj));
    }

    let minimal = if o.is_minimal(&form.f)? { Ok(()) } else { Err(format!("F = {} is not minimal", form.f)) };
    clauses.push(Clause::from_result("minimality", minimal));

    let conj = Word::join([&form.r, &form.f, &form.r.inverse()]);
    let conjugate = if o.equal(&form.h, &conj) { Ok(()) } else { Err("h differs from R F R^-1".to_string()) };
    clauses.push(Clause::from_result("conjugate", conjugate));

    let hg = o.geodesic_length(&form.h)?;
    let bound = if c.conjugator_bound_ok(form.r.len(), hg) {
        Ok(())
    } else {
        Err(format!("2|R| = {} exceeds {}", 2 * form.r.len(), c.twice_conjugator_bound(hg)))
    };
    clauses.push(Clause::from_result("R-bound", bound));

    Ok(FormVerdict { verified: all_passed(&clauses), clauses })
}

fn relation_clause(form: &CommutatorForm, o: &GroupOracle, pattern: &Word) -> Result<std::result::Result<(), String>> {
    let g = |k: &str| form.components[k].clone();
    let plen: usize = match form.variant {
        2 => g("A1").len() + g("A2").len(),
        3 => ["A1", "B1", "A2", "B2"].iter().map(|k| g(k).len()).sum(),
        _ => ["A1", "B1", "C1", "A2", "B2", "C2"].iter().map(|k| g(k).len()).sum(),
    };
    if form.f.len() != plen || !o.equal(&form.f, pattern) {
        return Ok(Err("F is not the product of its pieces".into()));
    }
    let eq = |lhs: &str, parts: [Word; 3]| o.equal(&g(lhs), &Word::join(&parts));
    let ok = match form.variant {
        2 => eq("A1", [g("xi1").inverse(), g("A2"), g("xi2")]),
        3 => {
            eq("A1", [g("xi1"), g("A2"), g("xi3")])
                && eq("B1", [g("xi4"), g("B2"), g("xi2")])
                && o.is_trivial(&Word::join([&g("xi1"), &g("xi2"), &g("xi3"), &g("xi4")]))
        }
        _ => {
            eq("A1", [g("xi1"), g("A2"), g("rho1")])
                && eq("B1", [g("rho2"), g("B2"), g("xi2")])
                && eq("C1", [g("xi3"), g("C2"), g("rho3")])
                && o.is_trivial(&Word::join([&g("xi1"), &g("xi2"), &g("xi3")]))
                && o.is_trivial(&Word::join([&g("rho1"), &g("rho2"), &g("rho3")]))
        }
    };
    Ok(if ok { Ok(()) } else { Err("a defining equation fails".into()) })
}

fn nf(o: &GroupOracle, parts: &[&Word]) -> Result<Word> {
    o.normal_form(&Word::join(parts.iter().copied()))
}

/// Builds an instance of `variant` from seeds and checks it. Missing seeds
/// default to the empty word.
pub fn synthesize(
    variant: u8,
    seeds: &BTreeMap<String, Word>,
    o: &GroupOracle,
    c: &BoundConstants,
) -> Result<(Word, CommutatorForm)> {
    let allowed = seed_keys(variant)?;
    if let Some(k) = seeds.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::Input(format!("seed {k} does not apply to variant {variant}")));
    }
    for w in seeds.values() {
        o.check_word(w)?;
    }
    let s = |k: &str| seeds.get(k).cloned().unwrap_or_default();
    let mut comp: BTreeMap<String, Word> = BTreeMap::new();
    let mut put = |k: &str, w: Word| {
        comp.insert(k.to_string(), w);
    };
    match variant {
        1 => {
            for k in ["X", "Y", "Z"] {
                put(k, o.normal_form(&s(k))?);
            }
        }
        2 => {
            let (x1, u, a2) = (o.normal_form(&s("xi1"))?, s("u"), o.normal_form(&s("A2"))?);
            let x2 = nf(o, &[&u.inverse(), &x1, &u])?;
            put("A1", nf(o, &[&x1.inverse(), &a2, &x2])?);
            put("A2", a2);
            put("xi1", x1);
            put("xi2", x2);
        }
        3 => {
            let x: Vec<Word> = ["xi1", "xi2", "xi3"].iter().map(|k| o.normal_form(&s(k))).collect::<Result<_>>()?;
            let x4 = nf(o, &[&Word::join(&x).inverse()])?;
            let (a2, b2) = (o.normal_form(&s("A2"))?, o.normal_form(&s("B2"))?);
            put("A1", nf(o, &[&x[0], &a2, &x[2]])?);
            put("B1", nf(o, &[&x4, &b2, &x[1]])?);
            put("A2", a2);
            put("B2", b2);
            for (k, w) in ["xi1", "xi2", "xi3"].iter().zip(x) {
                put(k, w);
            }
            put("xi4", x4);
        }
        4 => {
            let (x1, x2) = (o.normal_form(&s("xi1"))?, o.normal_form(&s("xi2"))?);
            let (r1, r2) = (o.normal_form(&s("rho1"))?, o.normal_form(&s("rho2"))?);
            let x3 = nf(o, &[&Word::join([&x1, &x2]).inverse()])?;
            let r3 = nf(o, &[&Word::join([&r1, &r2]).inverse()])?;
            let (a2, b2, c2) = (o.normal_form(&s("A2"))?, o.normal_form(&s("B2"))?, o.normal_form(&s("C2"))?);
            put("A1", nf(o, &[&x1, &a2, &r1])?);
            put("B1", nf(o, &[&r2, &b2, &x2])?);
            put("C1", nf(o, &[&x3, &c2, &r3])?);
            put("A2", a2);
            put("B2", b2);
            put("C2", c2);
            put("xi1", x1);
            put("xi2", x2);
            put("xi3", x3);
            put("rho1", r1);
            put("rho2", r2);
            put("rho3", r3);
        }
        _ => unreachable!("checked by seed_keys"),
    }
    let mut form =
        CommutatorForm { variant, components: comp, f: Word::empty(), r: s("R"), h: Word::empty(), constants: *c };
    let pattern = form.pattern()?;
    form.f = if variant == 1 { o.normal_form(&pattern)? } else { pattern };
    form.h = Word::join([&form.r, &form.f, &form.r.inverse()]).free_reduce();
    let verdict = verify_form(&form, o)?;
    if let Some(bad) = verdict.clauses.iter().find(|c| !c.passed) {
        return Err(Error::constraint(bad.name.clone(), bad.detail.clone().unwrap_or_default()));
    }
    Ok((form.h.clone(), form))
}

/// A literal factorisation `h = R X Y Z X^-1 Y^-1 Z^-1 R^-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WicksMatch {
    #[serde(rename = "X")]
    pub x: Word,
    #[serde(rename = "Y")]
    pub y: Word,
    #[serde(rename = "Z")]
    pub z: Word,
    #[serde(rename = "R")]
    pub r: Word,
}

/// Splits of `f` as `XYZX^-1Y^-1Z^-1` with at most one empty factor,
/// longest `X` first, then longest `Y`.
pub fn literal_splits(f: &Word) -> Vec<(Word, Word, Word)> {
    let n = f.len();
    if n == 0 || n % 2 == 1 {
        return Vec::new();
    }
    let half = n / 2;
    let tail = f.slice(half, n);
    let mut out = Vec::new();
    for x in (0..=half).rev() {
        for y in (0..=half - x).rev() {
            let z = half - x - y;
            if [x, y, z].iter().filter(|&&k| k == 0).count() > 1 {
                continue;
            }
            let (xw, yw, zw) = (f.slice(0, x), f.slice(x, x + y), f.slice(x + y, half));
            if Word::join([&xw.inverse(), &yw.inverse(), &zw.inverse()]) == tail {
                out.push((xw, yw, zw));
            }
        }
    }
    out
}

/// Rotations of the cyclic core of `h` with the conjugator that produces
/// each: `h = R F R^-1` after free reduction.
pub fn free_rotations(h: &Word) -> Vec<(Word, Word)> {
    let (core, k) = cyclic_reduce(h);
    (0..core.len().max(1))
        .map(|i| {
            let u = core.slice(0, i.min(core.len()));
            (k.concat(&u).free_reduce(), core.rotate(i))
        })
        .collect()
}

/// All literal factorisations of rotations of the cyclic reduction of `h`.
pub fn wicks_matches_free(h: &Word) -> Vec<WicksMatch> {
    free_rotations(h)
        .into_iter()
        .flat_map(|(r, f)| literal_splits(&f).into_iter().map(move |(x, y, z)| WicksMatch { x, y, z, r: r.clone() }))
        .collect()
}

/// The first literal factorisation of `h` in a free group; present exactly
/// when `h` is a non-trivial commutator.
pub fn wicks_match_free(h: &Word) -> Option<WicksMatch> {
    wicks_matches_free(h).into_iter().next()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchOptions {
    /// Radius of the conjugators `R` tried on non-free backends.
    pub r_radius: usize,
    /// Radius of the connecting words tried for forms 2 to 4.
    pub xi_radius: usize,
    pub budget: u64,
    pub reading: ConjugacyReading,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions { r_radius: 2, xi_radius: 6, budget: 20_000_000, reading: ConjugacyReading::Literal }
    }
}

impl MatchOptions {
    /// Defaults, with connecting words up to length 2 on non-free backends.
    pub fn for_oracle(o: &GroupOracle) -> Self {
        match o.backend() {
            Backend::Free => MatchOptions::default(),
            Backend::Dehn => MatchOptions { xi_radius: 2, ..MatchOptions::default() },
        }
    }
}

struct Budget<'a> {
    used: &'a AtomicU64,
    cap: u64,
}

impl Budget<'_> {
    fn spend(&self, n: u64) -> Result<()> {
        if self.used.fetch_add(n, Ordering::Relaxed) + n > self.cap {
            return Err(Error::limit("form search steps", self.cap as usize));
        }
        Ok(())
    }
}

/// Minimal conjugates `F` of `h` with their conjugators, shortest `F`
/// first, then ordered by `R`.
fn candidates(h: &Word, o: &GroupOracle, c: &BoundConstants, opts: &MatchOptions) -> Result<Vec<(Word, Word)>> {
    let hg = o.geodesic_length(h)?;
    let mut out: Vec<(Word, Word)> = if o.backend() == Backend::Free {
        free_rotations(h)
    } else {
        let mut seen = HashSet::new();
        let mut v = Vec::new();
        for r in o.ball(opts.r_radius)? {
            let f0 = nf(o, &[&r.inverse(), h, &r])?;
            for i in 0..f0.len().max(1) {
                let f = o.normal_form(&f0.rotate(i))?;
                let rr = o.normal_form(&r.concat(&f0.slice(0, i.min(f0.len()))))?;
                if seen.insert(f.clone()) {
                    v.push((rr, f));
                }
            }
        }
        v
    };
    out.retain(|(r, _)| c.conjugator_bound_ok(r.len(), hg));
    out.sort_by(|a, b| (a.1.len(), a.0.len(), &a.0, &a.1).cmp(&(b.1.len(), b.0.len(), &b.0, &b.1)));
    out.dedup();
    Ok(out)
}

fn form_of(variant: u8, parts: &[(&str, &Word)], f: &Word, r: &Word, h: &Word, c: &BoundConstants) -> CommutatorForm {
    CommutatorForm {
        variant,
        components: parts.iter().map(|(k, w)| (k.to_string(), (*w).clone())).collect(),
        f: f.clone(),
        r: r.clone(),
        h: h.clone(),
        constants: *c,
    }
}

/// Finds a verified form of the commutator `h`, trying the variants in
/// order and, within a variant, shorter conjugates first.
pub fn match_commutator(h: &Word, o: &GroupOracle, c: &BoundConstants) -> Result<CommutatorForm> {
    match_commutator_with(h, o, c, &MatchOptions::for_oracle(o))
}

pub fn match_commutator_with(
    h: &Word,
    o: &GroupOracle,
    c: &BoundConstants,
    opts: &MatchOptions,
) -> Result<CommutatorForm> {
    o.check_word(h)?;
    let cands = candidates(h, o, c, opts)?;
    let used = AtomicU64::new(0);
    let budget = Budget { used: &used, cap: opts.budget };
    let xi_ball = o.ball(opts.xi_radius)?;
    let cap = c.edge_cap();
    let verified = |form: CommutatorForm| -> Result<Option<CommutatorForm>> {
        Ok(verify_form_with(&form, o, opts.reading)?.verified.then_some(form))
    };
    let first =
        |search: &(dyn Fn(&Word, &Word) -> Result<Option<CommutatorForm>> + Sync)| -> Result<Option<CommutatorForm>> {
            cands
                .par_iter()
                .map(|(r, f)| search(r, f))
                .find_map_first(|res| match res {
                    Ok(None) => None,
                    other => Some(other),
                })
                .unwrap_or(Ok(None))
        };

    let v1 = |r: &Word, f: &Word| -> Result<Option<CommutatorForm>> {
        for (x, y, z) in literal_splits(f) {
            budget.spend(1)?;
            if [&x, &y, &z].iter().any(|w| w.len() as u64 > cap) {
                continue;
            }
            if let Some(form) = verified(form_of(1, &[("X", &x), ("Y", &y), ("Z", &z)], f, r, h, c))? {
                return Ok(Some(form));
            }
        }
        Ok(None)
    };
    if let Some(form) = first(&v1)? {
        return Ok(form);
    }

    let conj_sets: Vec<HashSet<Word>> = if o.backend() == Backend::Free {
        Vec::new()
    } else {
        xi_ball
            .iter()
            .map(|x| xi_ball.iter().map(|g| nf(o, &[&g.inverse(), x, g])).collect::<Result<HashSet<_>>>())
            .collect::<Result<_>>()?
    };
    let conjugate = |i: usize, t: &Word| -> bool {
        let t = match opts.reading {
            ConjugacyReading::Literal => t.clone(),
            ConjugacyReading::Inverse => t.inverse(),
        };
        if o.backend() == Backend::Free {
            free_conjugator(&xi_ball[i], &t).is_some()
        } else {
            conj_sets[i].contains(&t)
        }
    };
    let v2 = |r: &Word, f: &Word| -> Result<Option<CommutatorForm>> {
        for cut in 0..=f.len() {
            let a1 = f.slice(0, cut);
            let a2 = f.slice(cut, f.len()).inverse();
            for (i, x1) in xi_ball.iter().enumerate() {
                budget.spend(1)?;
                let x2 = nf(o, &[&a2.inverse(), x1, &a1])?;
                if (x1.len() + x2.len()) as u64 > 12 * cap || !conjugate(i, &x2) {
                    continue;
                }
                let parts = [("A1", &a1), ("A2", &a2), ("xi1", x1), ("xi2", &x2)];
                if let Some(form) = verified(form_of(2, &parts, f, r, h, c))? {
                    return Ok(Some(form));
                }
            }
        }
        Ok(None)
    };
    if let Some(form) = first(&v2)? {
        return Ok(form);
    }

    let v3 = |r: &Word, f: &Word| -> Result<Option<CommutatorForm>> {
        let n = f.len();
        for i in 0..=n {
            for j in i..=n {
                for k in j..=n {
                    let (a1, b1) = (f.slice(0, i), f.slice(i, j));
                    let (a2, b2) = (f.slice(j, k).inverse(), f.slice(k, n).inverse());
                    let x3s: Vec<Word> =
                        xi_ball.iter().map(|x1| nf(o, &[&a2.inverse(), &x1.inverse(), &a1])).collect::<Result<_>>()?;
                    let x4s: Vec<Word> =
                        xi_ball.iter().map(|x2| nf(o, &[&b1, &x2.inverse(), &b2.inverse()])).collect::<Result<_>>()?;
                    for (x1, x3) in xi_ball.iter().zip(&x3s) {
                        budget.spend(xi_ball.len() as u64)?;
                        for (x2, x4) in xi_ball.iter().zip(&x4s) {
                            if (x1.len() + x2.len() + x3.len() + x4.len()) as u64 > 12 * cap
                                || !o.is_trivial(&Word::join([x1, x2, x3, x4]))
                            {
                                continue;
                            }
                            let parts = [
                                ("A1", &a1),
                                ("B1", &b1),
                                ("A2", &a2),
                                ("B2", &b2),
                                ("xi1", x1),
                                ("xi2", x2),
                                ("xi3", x3),
                                ("xi4", x4),
                            ];
                            if let Some(form) = verified(form_of(3, &parts, f, r, h, c))? {
                                return Ok(Some(form));
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    };
    if let Some(form) = first(&v3)? {
        return Ok(form);
    }

    let v4 = |r: &Word, f: &Word| -> Result<Option<CommutatorForm>> {
        let n = f.len();
        let mut cuts = [0usize; 5];
        loop {
            let p: Vec<Word> = (0..6)
                .map(|s| {
                    let lo = if s == 0 { 0 } else { cuts[s - 1] };
                    let hi = if s == 5 { n } else { cuts[s] };
                    f.slice(lo, hi)
                })
                .collect();
            let (a1, b1, c1) = (&p[0], &p[1], &p[2]);
            let (a2, b2, c2) = (p[3].inverse(), p[4].inverse(), p[5].inverse());
            for x1 in &xi_ball {
                let r1 = nf(o, &[&a2.inverse(), &x1.inverse(), a1])?;
                budget.spend(xi_ball.len() as u64)?;
                for r2 in &xi_ball {
                    let x2 = nf(o, &[&b2.inverse(), &r2.inverse(), b1])?;
                    let x3 = nf(o, &[&Word::join([x1, &x2]).inverse()])?;
                    let r3 = nf(o, &[&Word::join([&r1, r2]).inverse()])?;
                    let total = [x1, &x2, &x3, &r1, r2, &r3].iter().map(|w| w.len()).sum::<usize>();
                    if total as u64 > 12 * cap || !o.equal(c1, &Word::join([&x3, &c2, &r3])) {
                        continue;
                    }
                    let parts = [
                        ("A1", a1),
                        ("B1", b1),
                        ("C1", c1),
                        ("A2", &a2),
                        ("B2", &b2),
                        ("C2", &c2),
                        ("xi1", x1),
                        ("xi2", &x2),
                        ("xi3", &x3),
                        ("rho1", &r1),
                        ("rho2", r2),
                        ("rho3", &r3),
                    ];
                    if let Some(form) = verified(form_of(4, &parts, f, r, h, c))? {
                        return Ok(Some(form));
                    }
                }
            }
            let mut s = 5;
            loop {
                if s == 0 {
                    return Ok(None);
                }
                s -= 1;
                if cuts[s] < n {
                    cuts[s] += 1;
                    for t in s + 1..5 {
                        cuts[t] = cuts[s];
                    }
                    break;
                }
            }
        }
    };
    if let Some(form) = first(&v4)? {
        return Ok(form);
    }
    Err(Error::NotFound(format!("{h} matches none of the four forms within the search radii")))
}

type PlanParts<'a> =
    (&'a str, Vec<Vec<usize>>, Vec<Vec<Word>>, Vec<usize>, Vec<GenusWitness>, Vec<(char, &'a str, &'a str)>);

/// The extension data behind a form of variant 2, 3 or 4, on the base
/// words `aA`, `abAB` and `abcABC`.
pub fn form_to_plan(form: &CommutatorForm, o: &GroupOracle) -> Result<ExtensionPlan> {
    let g = |k: &str| form.get(k).cloned();
    let one = || GenusWitness { conjugators: vec![Word::empty()], pairs: Vec::new() };
    let (base, partition, words, targets, witnesses, labels): PlanParts = match form.variant {
        2 => {
            let (x1, x2) = (g("xi1")?, g("xi2")?);
            let c = o
                .conjugacy_search(&x1, &x2, form.constants.m)?
                .ok_or_else(|| Error::constraint("conjugacy", format!("{x1} is not conjugate to {x2}")))?;
            let wit = GenusWitness { conjugators: vec![Word::empty(), c], pairs: Vec::new() };
            ("aA", vec![vec![0, 1]], vec![vec![x1.inverse()], vec![x2]], vec![1], vec![wit], vec![('a', "A1", "A2")])
        }
        3 => (
            "abAB",
            vec![vec![0]],
            vec![vec![g("xi1")?, g("xi2")?, g("xi3")?, g("xi4")?]],
            vec![0],
            vec![one()],
            vec![('a', "A1", "A2"), ('b', "B1", "B2")],
        ),
        4 => (
            "abcABC",
            vec![vec![0], vec![1]],
            vec![vec![g("xi1")?, g("xi2")?, g("xi3")?], vec![g("rho2")?, g("rho3")?, g("rho1")?]],
            vec![0, 0],
            vec![one(), one()],
            vec![('a', "A1", "A2"), ('b', "B1", "B2"), ('c', "C1", "C2")],
        ),
        v => return Err(Error::Input(format!("variant {v} has no extension plan"))),
    };
    let mut edge_h1 = BTreeMap::new();
    let mut edge_h2 = BTreeMap::new();
    for (e, k1, k2) in labels {
        edge_h1.insert(e, g(k1)?);
        edge_h2.insert(e, g(k2)?);
    }
    Ok(ExtensionPlan {
        base: base.parse()?,
        partition,
        vertex_words: words.into_iter().enumerate().collect(),
        genus_targets: targets,
        witnesses,
        edge_h2,
        edge_h1,
    })
}

/// A failing instance of the minimality inequalities: the letter at
/// `position` plays `A`, `other` is the letter whose image is split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityViolation {
    pub clause: &'static str,
    pub position: usize,
    pub other: usize,
    pub a_split: usize,
    pub e_split: usize,
    pub path: Word,
}

/// True when every split of every letter image satisfies the three
/// inequalities against every other letter of the cyclic word.
pub fn check_minimality_inequalities(w: &WicksForm, theta: &LabellingFunction, o: &GroupOracle) -> Result<bool> {
    Ok(minimality_violation(w, theta, o)?.is_none())
}

pub fn minimality_violation(
    w: &WicksForm,
    theta: &LabellingFunction,
    o: &GroupOracle,
) -> Result<Option<MinimalityViolation>> {
    let u = &w.base;
    let n = u.len();
    let images: Vec<Word> = u.word().letters().iter().map(|&l| theta.image(l)).collect::<Result<_>>()?;
    for img in &images {
        o.check_word(img)?;
        if !o.is_minimal(img)? {
            return Err(Error::Precondition(format!("label {img} is not minimal")));
        }
    }
    let span = |from: usize, to: usize| -> Word {
        let mut parts = Vec::new();
        let mut i = from;
        while i != to {
            parts.push(images[i].clone());
            i = (i + 1) % n;
        }
        Word::join(&parts)
    };
    for p in 0..n {
        let q = u.partner(p);
        let a = &images[p];
        let gap: Vec<usize> = (1..n).map(|d| (q + d) % n).take_while(|&i| i != p).collect();
        let mid: Vec<usize> = (1..n).map(|d| (p + d) % n).take_while(|&i| i != q).collect();
        let around = span((p + 1) % n, (q + 1) % n);
        for cut in 0..=a.len() {
            let (a1, a2) = (a.slice(0, cut), a.slice(cut, a.len()));
            for &i in &gap {
                let e = &images[i];
                let between = span((i + 1) % n, p);
                for s in 0..=e.len() {
                    let path = Word::join([&e.slice(s, e.len()), &between, &a1]);
                    if a1.len() > o.geodesic_length(&path)? {
                        return Ok(Some(MinimalityViolation {
                            clause: "i",
                            position: p,
                            other: i,
                            a_split: cut,
                            e_split: s,
                            path,
                        }));
                    }
                }
                let before = span((q + 1) % n, i);
                for s in 0..=e.len() {
                    let path = Word::join([&a2, &around, &before, &e.slice(0, s)]);
                    if a1.len() > o.geodesic_length(&path)? {
                        return Ok(Some(MinimalityViolation {
                            clause: "iii",
                            position: p,
                            other: i,
                            a_split: cut,
                            e_split: s,
                            path,
                        }));
                    }
                }
            }
            for &j in &mid {
                let e = &images[j];
                let between = span((p + 1) % n, j);
                for s in 0..=e.len() {
                    let path = Word::join([&a2, &between, &e.slice(0, s)]);
                    if a2.len() > o.geodesic_length(&path)? {
                        return Ok(Some(MinimalityViolation {
                            clause: "ii",
                            position: p,
                            other: j,
                            a_split: cut,
                            e_split: s,
                            path,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::failures;
    use crate::genus::{brute_force_genus, GenusCaps};
    use crate::word::w;

    fn seeds(pairs: &[(&str, &str)]) -> BTreeMap<String, Word> {
        pairs.iter().map(|(k, v)| (k.to_string(), w(v))).collect()
    }

    #[test]
    fn wicks_match_examples() {
        let m = wicks_match_free(&w("abAB")).unwrap();
        assert_eq!((m.x, m.y, m.z, m.r), (w("a"), w("b"), w("1"), w("1")));
        assert!(wicks_match_free(&w("aabb")).is_none());
        let m = wicks_match_free(&w("cabABC")).unwrap();
        assert_eq!((m.x, m.y, m.z, m.r), (w("a"), w("b"), w("1"), w("c")));
        assert!(wicks_match_free(&w("1")).is_none());
        let m = wicks_match_free(&w("abcABC")).unwrap();
        assert_eq!((m.x, m.y, m.z), (w("a"), w("b"), w("c")));
    }

    #[test]
    fn synthesize_second_form() {
        let o = GroupOracle::free(2);
        let c = BoundConstants::free(1);
        let (h, form) = synthesize(2, &seeds(&[("xi1", "a"), ("u", "b"), ("A2", "ba")]), &o, &c).unwrap();
        assert_eq!(form.components["xi2"], w("Bab"));
        assert_eq!(form.components["A1"], w("AbaBab"));
        assert_eq!(form.f, w("AbaBabAB"));
        assert_eq!(h, Word::commutator(&w("A"), &w("baB")));
        assert!(verify_form(&form, &o).unwrap().verified);
    }

    #[test]
    fn synthesize_first_form() {
        let o = GroupOracle::free(2);
        let (h, form) = synthesize(1, &seeds(&[("X", "a"), ("Y", "b")]), &o, &BoundConstants::free(1)).unwrap();
        assert_eq!((h, form.f), (w("abAB"), w("abAB")));
    }

    #[test]
    fn synthesize_third_form() {
        let o = GroupOracle::free(2);
        let s = seeds(&[("xi1", "a"), ("xi2", "A"), ("xi3", "b"), ("A2", "1"), ("B2", "1")]);
        assert!(
            matches!(synthesize(3, &s, &o, &BoundConstants::free(1)), Err(Error::Constraint { clause, .. }) if clause == "minimality")
        );
        let s = seeds(&[("xi1", "a"), ("xi2", "a"), ("xi3", "A"), ("A2", "A"), ("B2", "B")]);
        let (h, form) = synthesize(3, &s, &o, &BoundConstants::free(1)).unwrap();
        assert_eq!(form.components["xi4"], w("A"));
        assert_eq!(form.f, w("AABaab"));
        let g = brute_force_genus(&o, &[h], GenusCaps::default()).unwrap();
        assert_eq!(g.k, Some(1));
    }

    #[test]
    fn synthesize_fourth_form() {
        let o = GroupOracle::free(2);
        let s = seeds(&[("xi1", "a"), ("rho1", "a"), ("B2", "b")]);
        let (h, form) = synthesize(4, &s, &o, &BoundConstants::free(1)).unwrap();
        assert_eq!(form.f, w("aabAAB"));
        assert!(verify_form(&form, &o).unwrap().verified);
        let g = brute_force_genus(&o, &[h], GenusCaps::default()).unwrap();
        assert_eq!(g.k, Some(1));
    }

    #[test]
    fn verify_rejections() {
        let o = GroupOracle::free(2);
        let c = BoundConstants::free(1);
        let (_, mut form) = synthesize(2, &seeds(&[("xi1", "a"), ("u", "b"), ("A2", "ba")]), &o, &c).unwrap();
        form.components.insert("xi1".into(), w("a"));
        form.components.insert("xi2".into(), w("b"));
        let v = verify_form(&form, &o).unwrap();
        assert!(failures(&v.clauses).contains(&"conjugacy"));
        let (_, mut form) = synthesize(1, &seeds(&[("X", "a"), ("Y", "b")]), &o, &c).unwrap();
        form.components.insert("X".into(), w("aaaaaa"));
        form.f = o.normal_form(&form.pattern().unwrap()).unwrap();
        form.h = form.f.clone();
        assert_eq!(failures(&verify_form(&form, &o).unwrap().clauses), vec!["length"]);
    }

    #[test]
    fn inverse_reading_toggles_conjugacy() {
        let o = GroupOracle::free(2);
        let (_, form) =
            synthesize(2, &seeds(&[("xi1", "a"), ("u", "b"), ("A2", "ba")]), &o, &BoundConstants::free(1)).unwrap();
        let v = verify_form_with(&form, &o, ConjugacyReading::Inverse).unwrap();
        assert_eq!(failures(&v.clauses), vec!["conjugacy"]);
    }

    #[test]
    fn match_examples() {
        let o = GroupOracle::free(2);
        let c = BoundConstants::free(1);
        let m = match_commutator(&w("abAB"), &o, &c).unwrap();
        assert_eq!((m.variant, m.r.clone()), (1, w("1")));
        assert_eq!(
            (m.components["X"].clone(), m.components["Y"].clone(), m.components["Z"].clone()),
            (w("a"), w("b"), w("1"))
        );
        let m = match_commutator(&w("cabABC"), &GroupOracle::free(3), &c).unwrap();
        assert_eq!((m.variant, m.r), (1, w("c")));
        let m = match_commutator(&w("AbaBabAB"), &o, &c).unwrap();
        assert_eq!(m.variant, 1);
        assert_eq!(
            (m.components["X"].clone(), m.components["Y"].clone(), m.components["Z"].clone()),
            (w("A"), w("baB"), w("1"))
        );
    }

    #[test]
    fn long_commutator_falls_to_second_form() {
        let o = GroupOracle::free(2);
        let c = BoundConstants::free(1);
        let h = Word::commutator(&w("aaaaaa"), &w("bbbbbb"));
        let m = match_commutator(&h, &o, &c).unwrap();
        assert_eq!(m.variant, 2);
        let plan = form_to_plan(&m, &o).unwrap();
        let v = crate::extension::verify_extension(&plan, &o, &c).unwrap();
        assert!(v.accepted, "{:?}", v.clauses);
        assert_eq!(v.report.unwrap().f, m.f);
    }

    #[test]
    fn plans_from_forms_verify() {
        let o = GroupOracle::free(2);
        let c = BoundConstants::free(1);
        let s3 = seeds(&[("xi1", "a"), ("xi2", "a"), ("xi3", "A"), ("A2", "A"), ("B2", "B")]);
        let s4 = seeds(&[("xi1", "a"), ("rho1", "a"), ("B2", "b"), ("C2", "a")]);
        for (v, s) in [(3, s3), (4, s4)] {
            let (_, form) = synthesize(v, &s, &o, &c).unwrap();
            let ext = crate::extension::verify_extension(&form_to_plan(&form, &o).unwrap(), &o, &c).unwrap();
            assert!(ext.accepted, "{v}: {:?}", ext.clauses);
            assert_eq!(ext.report.unwrap().f, form.f);
        }
    }

    #[test]
    fn minimality_examples() {
        let o = GroupOracle::free(2);
        let wf = WicksForm::new(&w("abAB")).unwrap();
        let theta = LabellingFunction::new().with('a', w("a")).with('b', w("b"));
        assert!(check_minimality_inequalities(&wf, &theta, &o).unwrap());
        let theta = LabellingFunction::new().with('a', w("ab")).with('b', w("b"));
        let v = minimality_violation(&wf, &theta, &o).unwrap().unwrap();
        assert!(v.path.free_reduce().len() < v.a_split.max(1));
        let theta = LabellingFunction::new().with('a', w("aA")).with('b', w("b"));
        assert!(matches!(check_minimality_inequalities(&wf, &theta, &o), Err(Error::Precondition(_))));
    }
}
