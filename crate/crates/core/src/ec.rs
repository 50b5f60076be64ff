//! Equivalence-constraint generators.
//!
//! Candidates are produced slot by slot under three rules: one unit per
//! slot, monolingual runs must occur in their source sentence, and a
//! constituent once entered is finished before anything outside it. Each
//! candidate is then checked on its mixed tree: languages are assigned
//! bottom up, every child must sit where the rule of its language puts it,
//! and at each switch between siblings the prefixes before the switch must
//! hold the same constituents in both languages.

use std::collections::BTreeSet;
use std::fmt;

use crate::config::ModelConfig;
use crate::frame::{CsSentence, Derivation, Frame, FrameId, Model, SentenceSet, UnitChoice};
use crate::ml::check_well_formed;
use crate::tree::{Label, Lang};

/// Point at which a sentence is rejected, in pipeline order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Rule1,
    Rule2,
    Rule3,
    PositionClash,
    EquivalenceConstraint,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Rule1 => "production rule 1",
            Stage::Rule2 => "production rule 2",
            Stage::Rule3 => "production rule 3",
            Stage::PositionClash => "position clash",
            Stage::EquivalenceConstraint => "equivalence constraint",
        })
    }
}

/// Mixed tree of a unit sequence over the shared frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedTree {
    /// Language chosen for each slot.
    pub choice: Vec<Lang>,
    /// Position of each slot in the sentence.
    pub position: Vec<usize>,
    /// Language label of each frame node.
    pub labels: Vec<Label>,
    /// Children of each frame node in generated order.
    pub order: Vec<Vec<FrameId>>,
}

impl MixedTree {
    /// Builds the tree of a sequence that uses every slot once.
    pub fn new(frame: &Frame, units: &[UnitChoice]) -> MixedTree {
        let n = frame.slot_count();
        let mut choice = vec![Lang::L1; n];
        let mut position = vec![0; n];
        for (i, u) in units.iter().enumerate() {
            choice[u.slot] = u.lang;
            position[u.slot] = i;
        }
        let first = |id: FrameId| frame.node(id).slots.iter().map(|&s| position[s]).min().unwrap_or(0);
        let order = frame
            .ids()
            .map(|id| {
                let mut kids = frame.children(id, Lang::L1).to_vec();
                kids.sort_by_key(|&k| first(k));
                kids
            })
            .collect();
        MixedTree { choice, position, labels: vec![Label::X; frame.len()], order }
    }
}

/// Post-order language assignment. With a substitutable set, matching
/// preterminals become `Either`, which joins whichever language its
/// siblings have.
pub fn assign_languages(frame: &Frame, tree: &mut MixedTree, substitutable: Option<&BTreeSet<String>>) {
    assign_at(frame, tree, frame.root(), substitutable);
}

fn assign_at(frame: &Frame, tree: &mut MixedTree, id: FrameId, subst: Option<&BTreeSet<String>>) -> Label {
    let node = frame.node(id);
    let label = match node.slot {
        Some(slot) => {
            if subst.is_some_and(|s| s.contains(&node.category)) {
                Label::Either
            } else {
                tree.choice[slot].into()
            }
        }
        None => {
            let kids: Vec<Label> =
                frame.children(id, Lang::L1).iter().map(|&c| assign_at(frame, tree, c, subst)).collect();
            let all = |ok: &[Label]| kids.iter().all(|l| ok.contains(l));
            if all(&[Label::Either]) {
                Label::Either
            } else if all(&[Label::L1, Label::Either]) {
                Label::L1
            } else if all(&[Label::L2, Label::Either]) {
                Label::L2
            } else {
                Label::X
            }
        }
    };
    tree.labels[id] = label;
    label
}

fn rule_position(frame: &Frame, parent: FrameId, child: FrameId, lang: Lang) -> usize {
    frame.children(parent, lang).iter().position(|&c| c == child).expect("child of its parent")
}

/// Checks each child against the position its language's rule requires.
/// Mixed and wildcard children take the language whose position they fit;
/// fitting both leaves them unresolved, fitting neither rejects.
pub fn verify_positions(frame: &Frame, tree: &mut MixedTree) -> Result<(), Stage> {
    for id in frame.ids() {
        if frame.node(id).is_leaf() {
            continue;
        }
        for i in 0..tree.order[id].len() {
            let c = tree.order[id][i];
            let p1 = rule_position(frame, id, c, Lang::L1) == i;
            let p2 = rule_position(frame, id, c, Lang::L2) == i;
            tree.labels[c] = match tree.labels[c] {
                Label::L1 if p1 => Label::L1,
                Label::L2 if p2 => Label::L2,
                Label::L1 | Label::L2 => return Err(Stage::PositionClash),
                l @ (Label::X | Label::Either) => match (p1, p2) {
                    (true, true) => l,
                    (true, false) => Label::L1,
                    (false, true) => Label::L2,
                    (false, false) => return Err(Stage::PositionClash),
                },
            };
        }
    }
    Ok(())
}

/// At every junction between siblings of different languages, the
/// constituents before the junction must be the same under both rules.
pub fn check_equivalence_constraint(frame: &Frame, tree: &MixedTree) -> Result<(), Stage> {
    for id in frame.ids() {
        let kids = &tree.order[id];
        for i in 0..kids.len().saturating_sub(1) {
            let (a, b) = (tree.labels[kids[i]].lang(), tree.labels[kids[i + 1]].lang());
            let (Some(a), Some(b)) = (a, b) else { continue };
            if a == b {
                continue;
            }
            let prefix = |lang: Lang| -> BTreeSet<FrameId> {
                kids.iter().copied().filter(|&c| rule_position(frame, id, c, lang) <= i).collect()
            };
            if prefix(Lang::L1) != prefix(Lang::L2) {
                return Err(Stage::EquivalenceConstraint);
            }
        }
    }
    Ok(())
}

/// Verification stages on a sequence that already satisfies rules 1 to 3.
pub fn verify(
    frame: &Frame,
    units: &[UnitChoice],
    substitutable: Option<&BTreeSet<String>>,
) -> Result<MixedTree, Stage> {
    let mut tree = MixedTree::new(frame, units);
    assign_languages(frame, &mut tree, substitutable);
    verify_positions(frame, &mut tree)?;
    check_equivalence_constraint(frame, &tree)?;
    Ok(tree)
}

/// Every constituent's slots form one contiguous block of the sequence.
pub fn is_constituent_block(frame: &Frame, units: &[UnitChoice]) -> bool {
    let mut position = vec![usize::MAX; frame.slot_count()];
    for (i, u) in units.iter().enumerate() {
        position[u.slot] = i;
    }
    frame.ids().all(|id| {
        let slots = &frame.node(id).slots;
        let lo = slots.iter().map(|&s| position[s]).min().unwrap_or(0);
        let hi = slots.iter().map(|&s| position[s]).max().unwrap_or(0);
        hi - lo + 1 == slots.len()
    })
}

/// Runs the full pipeline on one sequence and reports the failing stage.
pub fn check_sequence(
    frame: &Frame,
    units: &[UnitChoice],
    substitutable: Option<&BTreeSet<String>>,
) -> Result<MixedTree, Stage> {
    let cs = CsSentence::new(units.to_vec());
    if !cs.covers_each_slot_once(frame.slot_count()) {
        return Err(Stage::Rule1);
    }
    if !check_well_formed(units, frame).unwrap_or(false) {
        return Err(Stage::Rule2);
    }
    if !is_constituent_block(frame, units) {
        return Err(Stage::Rule3);
    }
    verify(frame, units, substitutable)
}

/// Incremental producer of candidate sequences.
pub struct GenerationState<'f> {
    frame: &'f Frame,
    emitted: Vec<bool>,
    /// Emitted slots per frame node.
    count: Vec<usize>,
    seq: Vec<UnitChoice>,
    out: Vec<Vec<UnitChoice>>,
}

impl<'f> GenerationState<'f> {
    pub fn new(frame: &'f Frame) -> GenerationState<'f> {
        GenerationState {
            frame,
            emitted: vec![false; frame.slot_count()],
            count: vec![0; frame.len()],
            seq: Vec::with_capacity(frame.slot_count()),
            out: Vec::new(),
        }
    }

    /// Deepest constituent entered but not yet finished.
    fn open_scope(&self) -> FrameId {
        let Some(last) = self.seq.last() else { return self.frame.root() };
        let leaf = self.frame.leaf(last.slot);
        self.frame
            .ancestors(leaf)
            .find(|&a| self.count[a] < self.frame.node(a).slots.len())
            .unwrap_or(self.frame.root())
    }

    fn mark(&mut self, slot: usize, delta: isize) {
        self.emitted[slot] = delta > 0;
        let leaf = self.frame.leaf(slot);
        for id in std::iter::once(leaf).chain(self.frame.ancestors(leaf)).collect::<Vec<_>>() {
            self.count[id] = self.count[id].wrapping_add_signed(delta);
        }
    }

    fn run(&mut self) {
        if self.seq.len() == self.frame.slot_count() {
            self.out.push(self.seq.clone());
            return;
        }
        let scope = self.open_scope();
        let slots = self.frame.node(scope).slots.clone();
        for s in slots {
            if self.emitted[s] {
                continue;
            }
            for lang in [Lang::L1, Lang::L2] {
                if let Some(last) = self.seq.last() {
                    if last.lang == lang && self.frame.rank(lang, s) != self.frame.rank(lang, last.slot) + 1 {
                        continue;
                    }
                }
                self.mark(s, 1);
                self.seq.push(UnitChoice { slot: s, lang });
                self.run();
                self.seq.pop();
                self.mark(s, -1);
            }
        }
    }

    /// All sequences satisfying rules 1 to 3.
    pub fn candidates(mut self) -> Vec<Vec<UnitChoice>> {
        self.run();
        self.out
    }
}

/// Candidate sequences under the three production rules.
pub fn generate_candidates(frame: &Frame) -> Vec<CsSentence> {
    GenerationState::new(frame).candidates().into_iter().map(CsSentence::new).collect()
}

fn accepted(frame: &Frame, model: Model, subst: Option<&BTreeSet<String>>) -> SentenceSet {
    let mut kept = Vec::new();
    for units in GenerationState::new(frame).candidates() {
        let tree = verify(frame, &units, None).or_else(|e| match subst {
            Some(s) if !s.is_empty() => verify(frame, &units, Some(s)),
            _ => Err(e),
        });
        if let Ok(tree) = tree {
            kept.push(CsSentence { units, derivation: Some(Derivation::Mixed(tree)) });
        }
    }
    SentenceSet::new(frame, model, kept)
}

/// Candidates that pass strict verification.
pub fn generate_ec0(frame: &Frame) -> SentenceSet {
    accepted(frame, Model::Ec0, None)
}

/// EC0 plus candidates accepted once substitutable preterminals are
/// treated as wildcards.
pub fn generate_ec1(frame: &Frame, cfg: &ModelConfig) -> SentenceSet {
    accepted(frame, Model::Ec1, Some(&cfg.substitutable))
}
