//! The shared skeleton of a congruent pair, and generated sentences.
//!
//! A [`Frame`] merges two congruent trees into one: each node stands for a
//! pair of congruent nodes and keeps both child orders. Leaves are alignment
//! slots. Slot `k` is unit `k` of the first sentence.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::config::Dedup;
use crate::grammar::{check_congruence, Violation};
use crate::pair::AlignedPair;
use crate::tree::{Lang, NodeId, NULL_TOKEN};

pub type FrameId = usize;

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("pair has no node congruence; project it first")]
    NoCongruence,
    #[error("pair is not congruent: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    NotCongruent(Vec<Violation>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameNode {
    pub category: String,
    /// Child order in each language.
    pub children: [Vec<FrameId>; 2],
    pub parent: Option<FrameId>,
    /// Set for preterminals.
    pub slot: Option<usize>,
    /// Slots dominated, ascending.
    pub slots: Vec<usize>,
    /// The underlying tree node on each side.
    pub tree_nodes: [NodeId; 2],
}

impl FrameNode {
    pub fn is_leaf(&self) -> bool {
        self.slot.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub id: String,
    nodes: Vec<FrameNode>,
    root: FrameId,
    /// Unit tokens per side, indexed by slot.
    tokens: [Vec<Vec<String>>; 2],
    /// Slots in sentence order per side.
    order: [Vec<usize>; 2],
    /// Position of each slot in the sentence order per side.
    rank: [Vec<usize>; 2],
    leaf_of: Vec<FrameId>,
}

/// One unit of a generated sentence: a slot realised in a language.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitChoice {
    pub slot: usize,
    pub lang: Lang,
}

impl Frame {
    /// Builds the frame of a congruent pair.
    pub fn from_pair(pair: &AlignedPair) -> Result<Frame, FrameError> {
        let map = pair.congruence.as_ref().ok_or(FrameError::NoCongruence)?;
        let report = check_congruence(pair);
        if !report.is_congruent() {
            return Err(FrameError::NotCongruent(report.violations));
        }
        let t1 = &pair.trees[0];
        let t2 = &pair.trees[1];
        let n = pair.slot_count();
        let mut frame = Frame {
            id: pair.id.clone(),
            nodes: Vec::new(),
            root: 0,
            tokens: [
                pair.units[0].iter().map(|u| u.tokens.clone()).collect(),
                (0..n).map(|k| pair.units[1][pair.units[0][k].partner].tokens.clone()).collect(),
            ],
            order: [(0..n).collect(), pair.units[1].iter().map(|u| u.partner).collect()],
            rank: [(0..n).collect(), pair.units[0].iter().map(|u| u.partner).collect()],
            leaf_of: vec![0; n],
        };
        let mut of_tree1 = vec![usize::MAX; t1.len()];
        frame.root = frame.add(pair, t1.root(), None, &mut of_tree1);
        for f in 0..frame.nodes.len() {
            let w = frame.nodes[f].tree_nodes[1];
            let kids: Vec<FrameId> =
                t2.node(w).children.iter().filter_map(|&c| map.f21[c].map(|v| of_tree1[v])).collect();
            if !frame.nodes[f].is_leaf() {
                frame.nodes[f].children[1] = kids;
            }
        }
        Ok(frame)
    }

    fn add(&mut self, pair: &AlignedPair, v: NodeId, parent: Option<FrameId>, of_tree1: &mut [usize]) -> FrameId {
        let t1 = &pair.trees[0];
        let map = pair.congruence.as_ref().expect("checked");
        let id = self.nodes.len();
        of_tree1[v] = id;
        let slot = if t1.is_preterminal(v) { pair.unit_at(Lang::L1, t1.node(v).span.0) } else { None };
        self.nodes.push(FrameNode {
            category: t1.category(v).map(|c| c.to_string()).unwrap_or_default(),
            children: [Vec::new(), Vec::new()],
            parent,
            slot,
            slots: Vec::new(),
            tree_nodes: [v, map.f12[v].expect("checked")],
        });
        if let Some(s) = slot {
            self.leaf_of[s] = id;
            self.nodes[id].slots = vec![s];
            return id;
        }
        let mut kids = Vec::new();
        let mut slots = Vec::new();
        for &c in &t1.node(v).children {
            let k = self.add(pair, c, Some(id), of_tree1);
            slots.extend(self.nodes[k].slots.iter().copied());
            kids.push(k);
        }
        slots.sort_unstable();
        self.nodes[id].children[0] = kids;
        self.nodes[id].slots = slots;
        id
    }

    pub fn root(&self) -> FrameId {
        self.root
    }

    pub fn node(&self, id: FrameId) -> &FrameNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn ids(&self) -> std::ops::Range<FrameId> {
        0..self.nodes.len()
    }

    pub fn slot_count(&self) -> usize {
        self.leaf_of.len()
    }

    pub fn children(&self, id: FrameId, lang: Lang) -> &[FrameId] {
        &self.nodes[id].children[lang.index()]
    }

    pub fn leaf(&self, slot: usize) -> FrameId {
        self.leaf_of[slot]
    }

    pub fn tokens(&self, slot: usize, lang: Lang) -> &[String] {
        &self.tokens[lang.index()][slot]
    }

    pub fn is_null(&self, slot: usize, lang: Lang) -> bool {
        self.tokens(slot, lang).iter().all(|t| t == NULL_TOKEN)
    }

    /// Unit text as written, null morphemes included.
    pub fn unit_text(&self, slot: usize, lang: Lang) -> String {
        self.tokens(slot, lang).join(" ")
    }

    /// Slots in the order of the given sentence.
    pub fn order(&self, lang: Lang) -> &[usize] {
        &self.order[lang.index()]
    }

    /// Position of a slot in the given sentence.
    pub fn rank(&self, lang: Lang, slot: usize) -> usize {
        self.rank[lang.index()][slot]
    }

    /// Proper ancestors of a node, nearest first.
    pub fn ancestors(&self, id: FrameId) -> impl Iterator<Item = FrameId> + '_ {
        std::iter::successors(self.nodes[id].parent, move |&p| self.nodes[p].parent)
    }

    pub fn is_ancestor(&self, a: FrameId, b: FrameId) -> bool {
        self.ancestors(b).any(|x| x == a)
    }

    /// Slots under a node, in the order of the given sentence.
    pub fn yield_in(&self, id: FrameId, lang: Lang) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            match self.nodes[x].slot {
                Some(s) => out.push(s),
                None => stack.extend(self.children(x, lang).iter().rev()),
            }
        }
        out
    }

    /// One of the two input sentences.
    pub fn monolingual(&self, lang: Lang) -> Vec<UnitChoice> {
        self.order(lang).iter().map(|&slot| UnitChoice { slot, lang }).collect()
    }

    /// Canonical surface form: tokens joined by single spaces, nulls dropped.
    pub fn surface(&self, units: &[UnitChoice]) -> String {
        let mut out = String::new();
        for u in units {
            for t in self.tokens(u.slot, u.lang) {
                if t == NULL_TOKEN {
                    continue;
                }
                if !out.is_empty() {
                    out.push(' ');
                }
                out.push_str(t);
            }
        }
        out
    }

    /// Preterminals plus internal nodes.
    pub fn category_count(&self) -> usize {
        self.nodes.len()
    }
}

/// How a sentence was derived.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    /// Matrix-language derivation: nodes replaced by their counterparts.
    Switches { matrix: Lang, sites: Vec<FrameId> },
    /// Equivalence-constraint derivation.
    Mixed(crate::ec::MixedTree),
}

/// A generated code-switched sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsSentence {
    pub units: Vec<UnitChoice>,
    pub derivation: Option<Derivation>,
}

impl CsSentence {
    pub fn new(units: Vec<UnitChoice>) -> CsSentence {
        CsSentence { units, derivation: None }
    }

    /// Junctions `i` where unit `i` and unit `i + 1` differ in language.
    pub fn switch_points(&self) -> Vec<usize> {
        self.units.windows(2).enumerate().filter(|(_, w)| w[0].lang != w[1].lang).map(|(i, _)| i).collect()
    }

    /// Exactly one unit per slot.
    pub fn covers_each_slot_once(&self, slots: usize) -> bool {
        let mut seen = vec![false; slots];
        for u in &self.units {
            if u.slot >= slots || seen[u.slot] {
                return false;
            }
            seen[u.slot] = true;
        }
        seen.iter().all(|&b| b)
    }
}

/// The five generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Model {
    Ml0,
    Ml1,
    Ml2,
    Ec0,
    Ec1,
}

impl Model {
    pub const ALL: [Model; 5] = [Model::Ec0, Model::Ec1, Model::Ml0, Model::Ml1, Model::Ml2];

    pub fn is_ml(self) -> bool {
        matches!(self, Model::Ml0 | Model::Ml1 | Model::Ml2)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Ml0 => "ml0",
            Model::Ml1 => "ml1",
            Model::Ml2 => "ml2",
            Model::Ec0 => "ec0",
            Model::Ec1 => "ec1",
        })
    }
}

impl std::str::FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Model, String> {
        match s.to_ascii_lowercase().as_str() {
            "ml0" => Ok(Model::Ml0),
            "ml1" => Ok(Model::Ml1),
            "ml2" => Ok(Model::Ml2),
            "ec0" => Ok(Model::Ec0),
            "ec1" => Ok(Model::Ec1),
            _ => Err(format!("unknown model {s:?} (expected ml0, ml1, ml2, ec0 or ec1)")),
        }
    }
}

/// Output of one generator run on one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentenceSet {
    pub pair_id: String,
    pub model: Model,
    /// Distinct derivations, in generation order.
    pub sentences: Vec<CsSentence>,
    /// Canonical surface strings.
    pub strings: BTreeSet<String>,
}

impl SentenceSet {
    pub fn new(frame: &Frame, model: Model, sentences: Vec<CsSentence>) -> SentenceSet {
        let strings = sentences.iter().map(|s| frame.surface(&s.units)).collect();
        SentenceSet { pair_id: frame.id.clone(), model, sentences, strings }
    }

    /// Size under the given counting mode.
    pub fn count(&self, dedup: Dedup) -> usize {
        match dedup {
            Dedup::Strings => self.strings.len(),
            Dedup::Trees => self.sentences.len(),
        }
    }

    pub fn contains(&self, sentence: &str) -> bool {
        self.strings.contains(&normalize(sentence))
    }
}

/// Collapses runs of whitespace so user input matches canonical strings.
pub fn normalize(sentence: &str) -> String {
    sentence.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl fmt::Display for UnitChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.slot, self.lang)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::parse_pair_file;
    use crate::projection::prepare;

    fn pair_one() -> Frame {
        let p = parse_pair_file(
            "TREE1: (S (NP (NNP Saturday)) (VP (VBZ is) (VBG boring) (PP (IN from) (NP (DT that) (NN perspective)))))\n\
             TREE2: (S (NP (NNP Shanivar)) (VP (VBG neeras) (VBZ hai) (PP (NP (DT uss) (NN nazariye)) (IN se))))\n\
             ALIGN: 0-0 1-2 2-1 3-5 4-3 5-4\n",
        )
        .unwrap();
        Frame::from_pair(&prepare(&p).unwrap()).unwrap()
    }

    #[test]
    fn orders_and_monolingual_sentences() {
        let f = pair_one();
        assert_eq!(f.slot_count(), 6);
        assert_eq!(f.order(Lang::L2), &[0, 2, 1, 4, 5, 3]);
        assert_eq!(f.surface(&f.monolingual(Lang::L1)), "Saturday is boring from that perspective");
        assert_eq!(f.surface(&f.monolingual(Lang::L2)), "Shanivar neeras hai uss nazariye se");
        assert_eq!(f.category_count(), 11);
    }

    #[test]
    fn yields_follow_each_order() {
        let f = pair_one();
        assert_eq!(f.yield_in(f.root(), Lang::L1), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(f.yield_in(f.root(), Lang::L2), vec![0, 2, 1, 4, 5, 3]);
        for s in 0..6 {
            assert_eq!(f.order(Lang::L2)[f.rank(Lang::L2, s)], s);
        }
    }

    #[test]
    fn switch_points() {
        let s = CsSentence::new(vec![
            UnitChoice { slot: 0, lang: Lang::L1 },
            UnitChoice { slot: 1, lang: Lang::L2 },
            UnitChoice { slot: 2, lang: Lang::L2 },
            UnitChoice { slot: 3, lang: Lang::L1 },
        ]);
        assert_eq!(s.switch_points(), vec![0, 2]);
        assert!(s.covers_each_slot_once(4));
        assert!(!s.covers_each_slot_once(5));
    }

    #[test]
    fn unprojected_pair_is_refused() {
        let p = parse_pair_file("TREE1: (S (A a))\nTREE2: (S (A b))\nALIGN: 0-0\n").unwrap();
        assert!(matches!(Frame::from_pair(&p), Err(FrameError::NoCongruence)));
    }
}
