use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Free,
    Dehn,
}

/// A finite presentation. Generators are single lowercase letters declared
/// in alphabetical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<Word>,
    pub backend: Backend,
    #[serde(default, rename = "delta", skip_serializing_if = "Option::is_none")]
    pub declared_delta: Option<u32>,
}

impl Presentation {
    pub fn free(rank: usize) -> Self {
        Presentation {
            generators: (0..rank).map(|i| ((b'a' + i as u8) as char).to_string()).collect(),
            relators: Vec::new(),
            backend: Backend::Free,
            declared_delta: None,
        }
    }

    /// Fundamental group of the closed orientable surface of genus `g`.
    pub fn surface(g: usize) -> Self {
        let rel: String = (0..g)
            .map(|i| {
                let x = (b'a' + 2 * i as u8) as char;
                let y = (b'a' + 2 * i as u8 + 1) as char;
                format!("{x}{y}{}{}", x.to_ascii_uppercase(), y.to_ascii_uppercase())
            })
            .collect();
        Presentation {
            generators: (0..2 * g).map(|i| ((b'a' + i as u8) as char).to_string()).collect(),
            relators: vec![rel.parse().expect("valid relator")],
            backend: Backend::Dehn,
            declared_delta: None,
        }
    }

    pub fn dehn(generators: &[&str], relators: &[&str]) -> Result<Self> {
        let p = Presentation {
            generators: generators.iter().map(|s| s.to_string()).collect(),
            relators: relators.iter().map(|s| s.parse()).collect::<Result<_>>()?,
            backend: Backend::Dehn,
            declared_delta: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: Presentation = serde_json::from_str(s).map_err(|e| Error::Presentation(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    /// Positive generator letters in declaration order.
    pub fn generator_letters(&self) -> Vec<Letter> {
        self.generators.iter().map(|s| Letter::from_char(s.chars().next().unwrap_or('?')).expect("validated")).collect()
    }

    /// All letters in alphabet order.
    pub fn alphabet(&self) -> Vec<Letter> {
        self.generator_letters().into_iter().flat_map(|g| [g, g.inverse()]).collect()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn validate(&self) -> Result<()> {
        let mut prev: Option<char> = None;
        for g in &self.generators {
            let mut cs = g.chars();
            let c = match (cs.next(), cs.next()) {
                (Some(c), None) if c.is_ascii_lowercase() => c,
                _ => return Err(Error::Presentation(format!("generator {g:?} is not a lowercase letter"))),
            };
            if prev.is_some_and(|p| p >= c) {
                return Err(Error::Presentation("generators must be distinct and in alphabetical order".into()));
            }
            prev = Some(c);
        }
        for r in &self.relators {
            self.check_word(r)?;
            if r.is_empty() || !r.is_cyclically_reduced() {
                return Err(Error::Presentation(format!("relator {r} is not cyclically reduced")));
            }
        }
        if self.backend == Backend::Free && !self.relators.is_empty() {
            return Err(Error::Presentation("free backend takes no relators".into()));
        }
        Ok(())
    }

    /// Fails if `w` uses a letter outside the generators.
    pub fn check_word(&self, w: &Word) -> Result<()> {
        let gens = self.generator_letters();
        for l in w.letters() {
            if !gens.iter().any(|g| g.generator() == l.generator()) {
                return Err(Error::Input(format!("letter {l} of {w} is not a generator")));
            }
        }
        Ok(())
    }
}
