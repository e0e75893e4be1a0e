//! Command-line driver: argument parsing, file input and certificates.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cert::Certificate;
use crate::error::{Error, Result};
use crate::extension::{verify_extension, ExtensionPlan};
use crate::forms::{
    match_commutator_with, synthesize, verify_form_with, CommutatorForm, ConjugacyReading, MatchOptions,
};
use crate::genus::{brute_force_genus, GenusCaps};
use crate::group::{conjugator_length_bound, Backend, BoundConstants, GroupOracle, Presentation};
use crate::quadratic::{is_wicks_form, OrientableWord};
use crate::surface::build_surface_graph;
use crate::thin::{companion_report, GeodesicPolygon};
use crate::word::Word;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;

const DELTA_RADIUS: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "wicks", version, about = "Wicks forms, extensions and commutator forms over hyperbolic groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Recognise or enumerate Wicks forms.
    Wicks {
        #[command(subcommand)]
        action: WicksAction,
    },
    /// Surface graph of an orientable quadratic word.
    Surface { word: String },
    /// Genus of a tuple of words.
    Genus {
        #[arg(long)]
        group: PathBuf,
        #[arg(required = true)]
        words: Vec<String>,
        #[arg(long, default_value_t = 3)]
        max_k: usize,
        #[arg(long)]
        conjugator_len: Option<usize>,
        #[arg(long, default_value_t = 2)]
        word_len: usize,
        #[arg(long, default_value_t = 50_000_000)]
        node_cap: u64,
    },
    /// Bounded conjugacy search: a `w` with `h1 = w h2 w^-1`.
    Conjugate {
        #[arg(long)]
        group: PathBuf,
        h1: String,
        h2: String,
        #[arg(long)]
        delta: Option<u32>,
    },
    /// Thinness estimate and the derived constants.
    Delta {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, default_value_t = DELTA_RADIUS)]
        radius: usize,
    },
    /// Companion distances of a geodesic polygon; the first side is the base.
    Subdivide {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        delta: Option<u32>,
        #[arg(required = true, num_args = 2..)]
        sides: Vec<String>,
    },
    /// Verify an extension plan.
    Extend {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: Option<u32>,
    },
    /// The four forms of a commutator.
    Forms {
        #[command(subcommand)]
        action: FormsAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum WicksAction {
    Check {
        word: String,
    },
    Enumerate {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        max_len: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Reading {
    Literal,
    Inverse,
}

impl From<Reading> for ConjugacyReading {
    fn from(r: Reading) -> Self {
        match r {
            Reading::Literal => ConjugacyReading::Literal,
            Reading::Inverse => ConjugacyReading::Inverse,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum FormsAction {
    Match {
        #[arg(long)]
        group: PathBuf,
        h: String,
        #[arg(long)]
        delta: Option<u32>,
        #[arg(long, value_enum, default_value_t = Reading::Literal)]
        reading: Reading,
    },
    Synth {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        variant: u8,
        /// Comma-separated `name=word` pairs.
        #[arg(long, default_value = "")]
        seed: String,
        #[arg(long)]
        delta: Option<u32>,
    },
    Verify {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        form: PathBuf,
        #[arg(long, value_enum, default_value_t = Reading::Literal)]
        reading: Reading,
    },
}

/// Exit code and the text for standard output and standard error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(cli.command) {
        Ok((cert, accepted)) => Outcome {
            code: if accepted { EXIT_OK } else { EXIT_REJECTED },
            stdout: cert.to_json() + "\n",
            stderr: String::new(),
        },
        Err(e) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn parse_word(s: &str) -> Result<Word> {
    s.parse()
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn load_group(path: &Path) -> Result<GroupOracle> {
    GroupOracle::new(Presentation::from_json(&read(path)?)?)
}

/// Parses `k=v,k=v` into named words.
pub fn parse_seeds(s: &str) -> Result<BTreeMap<String, Word>> {
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::Input(format!("seed {item:?} is not name=word")))?;
        out.insert(k.trim().to_string(), parse_word(v.trim())?);
    }
    Ok(out)
}

/// `delta`, `M` and `l` for `n`: zero and one on free groups, otherwise the
/// given or declared `delta`, else the estimate at radius four.
pub fn constants(
    o: &GroupOracle,
    delta: Option<u32>,
    n: usize,
    assumptions: &mut Vec<String>,
) -> Result<BoundConstants> {
    if o.backend() == Backend::Free {
        return Ok(BoundConstants::free(n));
    }
    let d = match delta.or(o.presentation().declared_delta) {
        Some(d) => {
            assumptions.push(format!("delta-declared={d}"));
            d
        }
        None => {
            assumptions.push(format!("delta-estimate-radius={DELTA_RADIUS}"));
            o.estimate_delta(DELTA_RADIUS)?
        }
    };
    assumptions.push("M-by-normal-form-count".into());
    Ok(BoundConstants::new(d, o.compute_m(d)?, n))
}

fn bounds_json(c: &BoundConstants) -> Value {
    json!({"l": c.l, "M": c.m, "delta": c.delta})
}

fn execute(cmd: Command) -> Result<(Certificate, bool)> {
    match cmd {
        Command::Wicks { action: WicksAction::Check { word } } => {
            let w = parse_word(&word)?;
            let ok = is_wicks_form(&w);
            let shape = OrientableWord::new(w.clone()).ok();
            let result = json!({
                "is_wicks_form": ok,
                "genus": shape.as_ref().map(|s| s.genus()),
                "v": shape.as_ref().map(|s| s.vertex_count()),
                "e": shape.as_ref().map(|s| s.edge_count()),
            });
            Ok((Certificate::new("wicks check", json!({"word": w}), result, Vec::new()), ok))
        }
        Command::Wicks { action: WicksAction::Enumerate { genus, max_len } } => {
            let forms = crate::enumerate::enumerate_wicks_forms(genus, max_len)?;
            let words: Vec<String> = forms.iter().map(|f| f.base.to_string()).collect();
            let result = json!({"count": words.len(), "forms": words});
            let inputs = json!({"genus": genus, "max_len": max_len.unwrap_or(12 * genus.max(1) - 6)});
            Ok((Certificate::new("wicks enumerate", inputs, result, Vec::new()), true))
        }
        Command::Surface { word } => {
            let u = OrientableWord::parse(&word)?;
            let g = build_surface_graph(&u);
            let result = serde_json::to_value(g.summary()).expect("serialisable");
            Ok((Certificate::new("surface", json!({"word": u}), result, Vec::new()), true))
        }
        Command::Genus { group, words, max_k, conjugator_len, word_len, node_cap } => {
            let o = load_group(&group)?;
            let tuple: Vec<Word> = words.iter().map(|s| parse_word(s)).collect::<Result<_>>()?;
            let caps = GenusCaps { max_k, conjugator_len, word_len, node_cap };
            let out = brute_force_genus(&o, &tuple, caps)?;
            let inputs = json!({"group": o.presentation(), "words": tuple});
            let result = serde_json::to_value(&out).expect("serialisable");
            Ok((Certificate::new("genus", inputs, result, o.assumptions()), true))
        }
        Command::Conjugate { group, h1, h2, delta } => {
            let o = load_group(&group)?;
            let (a, b) = (parse_word(&h1)?, parse_word(&h2)?);
            let mut assumptions = o.assumptions();
            let c = constants(&o, delta, 1, &mut assumptions)?;
            let found = o.conjugacy_search(&a, &b, c.m)?;
            let bound = conjugator_length_bound(a.len(), b.len(), c.m);
            let result = json!({"conjugate": found.is_some(), "conjugator": found, "bound": bound, "M": c.m});
            let inputs = json!({"group": o.presentation(), "h1": a, "h2": b});
            Ok((Certificate::new("conjugate", inputs, result, assumptions), found.is_some()))
        }
        Command::Delta { group, radius } => {
            let o = load_group(&group)?;
            let d = o.estimate_delta(radius)?;
            let m = o.compute_m(d)?;
            let result = json!({"delta": d, "radius": radius, "M": m, "l": BoundConstants::new(d, m, 1).l});
            let mut assumptions = o.assumptions();
            assumptions.push(format!("delta-estimate-radius={radius}"));
            Ok((
                Certificate::new("delta", json!({"group": o.presentation(), "radius": radius}), result, assumptions),
                true,
            ))
        }
        Command::Subdivide { group, delta, sides } => {
            let o = load_group(&group)?;
            let sides: Vec<Word> = sides.iter().map(|s| parse_word(s)).collect::<Result<_>>()?;
            let mut assumptions = o.assumptions();
            let d = if o.backend() == Backend::Free { 0 } else { constants(&o, delta, 1, &mut assumptions)?.delta };
            let p = GeodesicPolygon::new(&o, sides.clone())?;
            let report = companion_report(&o, &p, d)?;
            let holds = report.holds;
            let inputs = json!({"group": o.presentation(), "sides": sides, "delta": d});
            let result = serde_json::to_value(&report).expect("serialisable");
            Ok((Certificate::new("subdivide", inputs, result, assumptions), holds))
        }
        Command::Extend { group, plan, n, delta } => {
            let o = load_group(&group)?;
            let plan = ExtensionPlan::from_json(&read(&plan)?)?;
            let mut assumptions = o.assumptions();
            let c = constants(&o, delta, n, &mut assumptions)?;
            let verdict = verify_extension(&plan, &o, &c)?;
            let accepted = verdict.accepted;
            let inputs = json!({"group": o.presentation(), "plan": plan, "n": n});
            let result = serde_json::to_value(&verdict).expect("serialisable");
            Ok((Certificate::new("extend", inputs, result, assumptions), accepted))
        }
        Command::Forms { action: FormsAction::Match { group, h, delta, reading } } => {
            let o = load_group(&group)?;
            let h = parse_word(&h)?;
            let mut assumptions = o.assumptions();
            let c = constants(&o, delta, 1, &mut assumptions)?;
            let opts = MatchOptions { reading: reading.into(), ..MatchOptions::for_oracle(&o) };
            let form = match_commutator_with(&h, &o, &c, &opts)?;
            let verdict = verify_form_with(&form, &o, opts.reading)?;
            let inputs = json!({"group": o.presentation(), "h": h});
            Ok((Certificate::new("forms match", inputs, form_json(&form, &verdict), assumptions), verdict.verified))
        }
        Command::Forms { action: FormsAction::Synth { group, variant, seed, delta } } => {
            let o = load_group(&group)?;
            let seeds = parse_seeds(&seed)?;
            let mut assumptions = o.assumptions();
            let c = constants(&o, delta, 1, &mut assumptions)?;
            let (h, form) = synthesize(variant, &seeds, &o, &c)?;
            let verdict = verify_form_with(&form, &o, ConjugacyReading::Literal)?;
            let mut result = form_json(&form, &verdict);
            result["h"] = json!(h);
            let inputs = json!({"group": o.presentation(), "variant": variant, "seeds": seeds});
            Ok((Certificate::new("forms synth", inputs, result, assumptions), verdict.verified))
        }
        Command::Forms { action: FormsAction::Verify { group, form, reading } } => {
            let o = load_group(&group)?;
            let text = read(&form)?;
            let form: CommutatorForm = serde_json::from_str(&text).map_err(|e| Error::Input(format!("form: {e}")))?;
            let verdict = verify_form_with(&form, &o, reading.into())?;
            let inputs = json!({"group": o.presentation(), "form": form});
            Ok((
                Certificate::new("forms verify", inputs, form_json(&form, &verdict), o.assumptions()),
                verdict.verified,
            ))
        }
    }
}

fn form_json(form: &CommutatorForm, verdict: &crate::forms::FormVerdict) -> Value {
    json!({
        "variant": form.variant,
        "components": form.components,
        "F": form.f,
        "R": form.r,
        "h": form.h,
        "bounds": bounds_json(&form.constants),
        "verified": verdict.verified,
        "clauses": verdict.clauses,
        "form": form,
    })
}
