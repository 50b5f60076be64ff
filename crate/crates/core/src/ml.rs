//! Matrix-language generators.
//!
//! The matrix tree is walked breadth first. At every node the walk either
//! keeps the node in its current language and queues its children, or
//! replaces it by its counterpart in the other language. ML0 never looks
//! inside a replaced subtree. ML1 queues the counterpart's children, so they
//! may switch back, at any depth. ML2 keeps the ML1 sentences whose
//! monolingual runs all occur in the source sentences.

use std::collections::BTreeSet;
use std::str::FromStr;

use thiserror::Error;

use crate::config::ModelConfig;
use crate::frame::{CsSentence, Derivation, Frame, FrameId, Model, SentenceSet, UnitChoice};
use crate::tree::Lang;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MlError {
    #[error("unit for slot {slot} does not belong to this pair")]
    ForeignUnit { slot: usize },
}

/// Which tree acts as the matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixChoice {
    L1,
    L2,
    Both,
}

impl MatrixChoice {
    pub fn langs(self) -> &'static [Lang] {
        match self {
            MatrixChoice::L1 => &[Lang::L1],
            MatrixChoice::L2 => &[Lang::L2],
            MatrixChoice::Both => &[Lang::L1, Lang::L2],
        }
    }
}

impl From<Lang> for MatrixChoice {
    fn from(l: Lang) -> MatrixChoice {
        match l {
            Lang::L1 => MatrixChoice::L1,
            Lang::L2 => MatrixChoice::L2,
        }
    }
}

impl FromStr for MatrixChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<MatrixChoice, String> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(MatrixChoice::L1),
            "l2" => Ok(MatrixChoice::L2),
            "both" => Ok(MatrixChoice::Both),
            _ => Err(format!("unknown matrix {s:?} (expected l1, l2 or both)")),
        }
    }
}

/// Whether a preterminal counts as functional when leaving `from`.
pub fn leaf_denied(frame: &Frame, cfg: &ModelConfig, slot: usize, from: Lang) -> bool {
    let node = frame.node(frame.leaf(slot));
    cfg.deny_from(from).contains(&node.category) || cfg.is_aux(from, frame.tokens(slot, from))
}

/// Whether `node`, currently in language `from`, may be replaced by its
/// counterpart. `single_level` applies the ML0-only auxiliary lock.
pub fn switchable(frame: &Frame, cfg: &ModelConfig, node: FrameId, from: Lang, single_level: bool) -> bool {
    if node == frame.root() {
        return false;
    }
    let n = frame.node(node);
    if let Some(slot) = n.slot {
        return !leaf_denied(frame, cfg, slot, from);
    }
    if cfg.deny_from(from).contains(&n.category) {
        return false;
    }
    if cfg.deny_composite_functional && n.slots.iter().all(|&s| leaf_denied(frame, cfg, s, from)) {
        return false;
    }
    if single_level && cfg.lock_aux_phrases && n.slots.iter().any(|&s| cfg.is_aux(from, frame.tokens(s, from))) {
        return false;
    }
    true
}

/// Renders a derivation: the language of a node flips at every switch site.
pub fn render(frame: &Frame, matrix: Lang, sites: &[FrameId]) -> Vec<UnitChoice> {
    let sites: BTreeSet<FrameId> = sites.iter().copied().collect();
    let mut out = Vec::with_capacity(frame.slot_count());
    render_at(frame, frame.root(), matrix, &sites, &mut out);
    out
}

fn render_at(frame: &Frame, node: FrameId, lang: Lang, sites: &BTreeSet<FrameId>, out: &mut Vec<UnitChoice>) {
    let lang = if sites.contains(&node) { lang.other() } else { lang };
    match frame.node(node).slot {
        Some(slot) => out.push(UnitChoice { slot, lang }),
        None => {
            for &c in frame.children(node, lang) {
                render_at(frame, c, lang, sites, out);
            }
        }
    }
}

struct Walk<'a> {
    frame: &'a Frame,
    cfg: &'a ModelConfig,
    nested: bool,
    out: Vec<Vec<FrameId>>,
}

impl Walk<'_> {
    fn step(&mut self, queue: &[(FrameId, Lang)], sites: &mut Vec<FrameId>) {
        let Some((&(node, lang), rest)) = queue.split_first() else {
            self.out.push(sites.clone());
            return;
        };
        let mut keep = rest.to_vec();
        keep.extend(self.frame.children(node, lang).iter().map(|&c| (c, lang)));
        self.step(&keep, sites);

        if switchable(self.frame, self.cfg, node, lang, !self.nested) {
            let mut swapped = rest.to_vec();
            if self.nested {
                let other = lang.other();
                swapped.extend(self.frame.children(node, other).iter().map(|&c| (c, other)));
            }
            sites.push(node);
            self.step(&swapped, sites);
            sites.pop();
        }
    }
}

/// Switch-site sets reachable from one matrix, in walk order.
pub fn switch_site_sets(frame: &Frame, cfg: &ModelConfig, matrix: Lang, nested: bool) -> Vec<Vec<FrameId>> {
    let mut walk = Walk { frame, cfg, nested, out: Vec::new() };
    walk.step(&[(frame.root(), matrix)], &mut Vec::new());
    walk.out
}

fn generate(frame: &Frame, matrix: MatrixChoice, cfg: &ModelConfig, nested: bool, model: Model) -> SentenceSet {
    let mut sentences = Vec::new();
    for &m in matrix.langs() {
        for mut sites in switch_site_sets(frame, cfg, m, nested) {
            if sites.is_empty() && !cfg.include_monolingual {
                continue;
            }
            let units = render(frame, m, &sites);
            sites.sort_unstable();
            sentences.push(CsSentence { units, derivation: Some(Derivation::Switches { matrix: m, sites }) });
        }
    }
    SentenceSet::new(frame, model, sentences)
}

/// Single-level switching: replaced subtrees are embedded wholesale.
pub fn generate_ml0(frame: &Frame, matrix: MatrixChoice, cfg: &ModelConfig) -> SentenceSet {
    generate(frame, matrix, cfg, false, Model::Ml0)
}

/// Nested switching: replaced subtrees may switch back at any depth.
pub fn generate_ml1(frame: &Frame, matrix: MatrixChoice, cfg: &ModelConfig) -> SentenceSet {
    generate(frame, matrix, cfg, true, Model::Ml1)
}

/// ML1 restricted to sentences with well-formed monolingual runs.
pub fn generate_ml2(frame: &Frame, matrix: MatrixChoice, cfg: &ModelConfig) -> SentenceSet {
    let ml1 = generate_ml1(frame, matrix, cfg);
    let kept = ml1.sentences.into_iter().filter(|s| check_well_formed(&s.units, frame).unwrap_or(false)).collect();
    SentenceSet::new(frame, Model::Ml2, kept)
}

/// True iff every maximal monolingual run is a contiguous, in-order stretch
/// of its own source sentence.
pub fn check_well_formed(units: &[UnitChoice], frame: &Frame) -> Result<bool, MlError> {
    if let Some(u) = units.iter().find(|u| u.slot >= frame.slot_count()) {
        return Err(MlError::ForeignUnit { slot: u.slot });
    }
    let mut start = 0;
    while start < units.len() {
        let lang = units[start].lang;
        let mut end = start + 1;
        while end < units.len() && units[end].lang == lang {
            end += 1;
        }
        let first = frame.rank(lang, units[start].slot);
        for (k, u) in units[start..end].iter().enumerate() {
            if frame.rank(lang, u.slot) != first + k {
                return Ok(false);
            }
        }
        start = end;
    }
    Ok(true)
}
