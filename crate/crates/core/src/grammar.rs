//! Grammar rules, node congruence and the congruence checker.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::pair::AlignedPair;
use crate::tree::{Lang, NodeId, ParseTree};

/// A production `lhs -> rhs`, by category name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GrammarRule {
    pub lhs: String,
    pub rhs: Vec<String>,
}

impl fmt::Display for GrammarRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs.join(" "))
    }
}

/// Rule applied at a phrase node that is not a preterminal.
pub fn rule_at(tree: &ParseTree, id: NodeId) -> Option<GrammarRule> {
    if tree.node(id).is_token() || tree.is_preterminal(id) {
        return None;
    }
    let n = tree.node(id);
    Some(GrammarRule {
        lhs: n.category()?.to_string(),
        rhs: n.children.iter().map(|&c| tree.category(c).map(|c| c.to_string()).unwrap_or_default()).collect(),
    })
}

/// All branching rules of a tree. Lexical productions are left out.
pub fn extract_rules(tree: &ParseTree) -> BTreeSet<GrammarRule> {
    tree.phrases().filter_map(|id| rule_at(tree, id)).collect()
}

/// Node-level congruence between the phrase nodes of two trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeMap {
    /// Indexed by tree-1 node id.
    pub f12: Vec<Option<NodeId>>,
    /// Indexed by tree-2 node id.
    pub f21: Vec<Option<NodeId>>,
}

impl NodeMap {
    pub fn inverse(&self) -> NodeMap {
        NodeMap { f12: self.f21.clone(), f21: self.f12.clone() }
    }

    /// Partner of a node of the given side.
    pub fn partner(&self, side: Lang, id: NodeId) -> Option<NodeId> {
        match side {
            Lang::L1 => self.f12.get(id).copied().flatten(),
            Lang::L2 => self.f21.get(id).copied().flatten(),
        }
    }
}

/// Slot set of every node: slot k is tree-1 unit k.
pub fn slot_sets(pair: &AlignedPair, side: Lang) -> Vec<BTreeSet<usize>> {
    let tree = pair.tree(side);
    let mut sets = vec![BTreeSet::new(); tree.len()];
    for tok in 0..tree.token_count() {
        let Some(u) = pair.unit_at(side, tok) else { continue };
        let slot = match side {
            Lang::L1 => u,
            Lang::L2 => pair.units[1][u].partner,
        };
        let mut cur = Some(tree.token_node(tok));
        while let Some(id) = cur {
            sets[id].insert(slot);
            cur = tree.node(id).parent;
        }
    }
    sets
}

/// Matches phrase nodes that cover the same slots. Within a unary chain the
/// k-th node from the top on one side matches the k-th on the other.
pub fn match_by_slots(pair: &AlignedPair) -> NodeMap {
    let keys = |side: Lang| -> Vec<Option<(Vec<usize>, usize)>> {
        let tree = pair.tree(side);
        let sets = slot_sets(pair, side);
        tree.ids()
            .map(|id| {
                if tree.node(id).is_token() || sets[id].is_empty() {
                    return None;
                }
                let mut depth = 0;
                let mut up = tree.node(id).parent;
                while let Some(p) = up {
                    if sets[p] == sets[id] {
                        depth += 1;
                    }
                    up = tree.node(p).parent;
                }
                Some((sets[id].iter().copied().collect(), depth))
            })
            .collect()
    };
    let k1 = keys(Lang::L1);
    let k2 = keys(Lang::L2);
    let mut index: HashMap<&(Vec<usize>, usize), Vec<NodeId>> = HashMap::new();
    for (id, k) in k2.iter().enumerate() {
        if let Some(k) = k {
            index.entry(k).or_default().push(id);
        }
    }
    let mut f12 = vec![None; k1.len()];
    let mut f21 = vec![None; k2.len()];
    for (id, k) in k1.iter().enumerate() {
        if let Some(k) = k {
            if let Some([only]) = index.get(k).map(Vec::as_slice) {
                f12[id] = Some(*only);
                f21[*only] = Some(id);
            }
        }
    }
    NodeMap { f12, f21 }
}

/// Links the rule at a tree-1 node with the rule at its partner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleLink {
    pub node1: NodeId,
    pub node2: NodeId,
    pub rule1: GrammarRule,
    pub rule2: GrammarRule,
    /// `permutation[i]` is the position in `rule2` of the image of child `i`.
    pub permutation: Vec<usize>,
}

/// Rule congruence for every branching node that has a consistent partner.
pub fn rule_links(pair: &AlignedPair) -> Vec<RuleLink> {
    let Some(map) = &pair.congruence else { return Vec::new() };
    let (t1, t2) = (&pair.trees[0], &pair.trees[1]);
    let mut out = Vec::new();
    for v in t1.phrases() {
        let (Some(rule1), Some(w)) = (rule_at(t1, v), map.f12[v]) else { continue };
        let Some(rule2) = rule_at(t2, w) else { continue };
        let kids2 = &t2.node(w).children;
        let perm: Option<Vec<usize>> = t1
            .node(v)
            .children
            .iter()
            .map(|&c| map.f12[c].and_then(|img| kids2.iter().position(|&k| k == img)))
            .collect();
        if let Some(permutation) = perm {
            if permutation.len() == kids2.len() {
                out.push(RuleLink { node1: v, node2: w, rule1, rule2, permutation });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoNodeMap,
    OrphanToken { side: Lang, index: usize, token: String },
    Unmapped { side: Lang, node: NodeId, category: String },
    NotMutual { side: Lang, node: NodeId },
    CategoryMismatch { node1: NodeId, node2: NodeId, cat1: String, cat2: String },
    RuleMismatch { node1: NodeId, rule1: String, rule2: String },
    UnitMismatch { node1: NodeId, category: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoNodeMap => write!(f, "node congruence has not been computed"),
            Violation::OrphanToken { side, index, token } => {
                write!(f, "{side} token {index} ({token}) has no aligned partner")
            }
            Violation::Unmapped { side, node, category } => {
                write!(f, "{side} node {node} ({category}) has no congruent node")
            }
            Violation::NotMutual { side, node } => write!(f, "{side} node {node} maps one way only"),
            Violation::CategoryMismatch { node1, node2, cat1, cat2 } => {
                write!(f, "node {node1} ({cat1}) is linked to node {node2} ({cat2})")
            }
            Violation::RuleMismatch { node1, rule1, rule2 } => {
                write!(f, "rule {rule1} at node {node1} has no permuted image (partner rule {rule2})")
            }
            Violation::UnitMismatch { node1, category } => {
                write!(f, "preterminal {node1} ({category}) does not hold exactly one aligned unit")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CongruenceReport {
    pub violations: Vec<Violation>,
}

impl CongruenceReport {
    pub fn is_congruent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks categorical, lexical and grammatical congruence of a pair.
pub fn check_congruence(pair: &AlignedPair) -> CongruenceReport {
    let mut v = Vec::new();
    for side in [Lang::L1, Lang::L2] {
        let leaves = pair.tree(side).leaves();
        for &i in &pair.unaligned[side.index()] {
            v.push(Violation::OrphanToken { side, index: i, token: leaves[i].to_string() });
        }
    }
    let Some(map) = &pair.congruence else {
        v.push(Violation::NoNodeMap);
        return CongruenceReport { violations: v };
    };
    let trees = &pair.trees;
    for side in [Lang::L1, Lang::L2] {
        let tree = &trees[side.index()];
        for id in tree.phrases() {
            let cat = tree.category(id).map(|c| c.to_string()).unwrap_or_default();
            match map.partner(side, id) {
                None => v.push(Violation::Unmapped { side, node: id, category: cat }),
                Some(w) if map.partner(side.other(), w) != Some(id) => v.push(Violation::NotMutual { side, node: id }),
                _ => {}
            }
        }
    }
    let (t1, t2) = (&trees[0], &trees[1]);
    let links = rule_links(pair);
    for a in t1.phrases() {
        let Some(b) = map.f12[a] else { continue };
        let (c1, c2) = (t1.category(a), t2.category(b));
        if c1 != c2 {
            v.push(Violation::CategoryMismatch {
                node1: a,
                node2: b,
                cat1: c1.map(|c| c.to_string()).unwrap_or_default(),
                cat2: c2.map(|c| c.to_string()).unwrap_or_default(),
            });
        }
        if let Some(rule1) = rule_at(t1, a) {
            if !links.iter().any(|l| l.node1 == a) {
                let rule2 = rule_at(t2, b).map(|r| r.to_string()).unwrap_or_else(|| "(none)".into());
                v.push(Violation::RuleMismatch { node1: a, rule1: rule1.to_string(), rule2 });
            }
        } else if !preterminal_units_agree(pair, a, b) {
            v.push(Violation::UnitMismatch { node1: a, category: c1.map(|c| c.to_string()).unwrap_or_default() });
        }
    }
    CongruenceReport { violations: v }
}

/// A preterminal and its partner must each hold exactly one unit, and those
/// units must be aligned to each other.
fn preterminal_units_agree(pair: &AlignedPair, a: NodeId, b: NodeId) -> bool {
    let (t1, t2) = (&pair.trees[0], &pair.trees[1]);
    if !t2.is_preterminal(b) {
        return false;
    }
    let unit_of = |tree: &ParseTree, side: Lang, id: NodeId| -> Option<usize> {
        let (s, e) = tree.node(id).span;
        let u = pair.unit_at(side, s)?;
        let unit = &pair.units[side.index()][u];
        (unit.start == s && unit.end() == e).then_some(u)
    };
    match (unit_of(t1, Lang::L1, a), unit_of(t2, Lang::L2, b)) {
        (Some(u), Some(w)) => pair.units[0][u].partner == w,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::parse_pair_file;

    fn pair(t1: &str, t2: &str, align: &str) -> AlignedPair {
        let mut p = parse_pair_file(&format!("TREE1: {t1}\nTREE2: {t2}\nALIGN: {align}\n")).unwrap();
        p.congruence = Some(match_by_slots(&p));
        p
    }

    #[test]
    fn rules_of_pair_one_english() {
        let t = ParseTree::parse(
            "(S (NP (NNP Saturday)) (VP (VBZ is) (VBG boring) (PP (IN from) (NP (DT that) (NN perspective)))))",
        )
        .unwrap();
        let rules: Vec<String> = extract_rules(&t).iter().map(|r| r.to_string()).collect();
        for want in ["S -> NP VP", "NP -> NNP", "VP -> VBZ VBG PP", "PP -> IN NP", "NP -> DT NN"] {
            assert!(rules.contains(&want.to_string()), "{want} missing from {rules:?}");
        }
        assert_eq!(rules.len(), 5);
    }

    #[test]
    fn single_preterminal_has_no_rules() {
        let t = ParseTree::parse("(NN word)").unwrap();
        assert!(extract_rules(&t).is_empty());
    }

    #[test]
    fn rule_count_bounded_by_internal_nodes() {
        let t = ParseTree::parse("(S (NP (DT a) (NN b)) (VP (VB c) (NP (DT a) (NN b))))").unwrap();
        let internal = t.phrases().filter(|&i| !t.is_preterminal(i)).count();
        assert!(extract_rules(&t).len() <= internal);
        assert_eq!(extract_rules(&t).len(), 3);
    }

    #[test]
    fn congruent_pair_passes() {
        let p = pair(
            "(S (NP (NNP Saturday)) (VP (VBZ is) (VBG boring) (PP (IN from) (NP (DT that) (NN perspective)))))",
            "(S (NP (NNP Shanivar)) (VP (VBG neeras) (VBZ hai) (PP (NP (DT uss) (NN nazariye)) (IN se))))",
            "0-0 1-2 2-1 3-5 4-3 5-4",
        );
        let report = check_congruence(&p);
        assert!(report.is_congruent(), "{:?}", report.violations);
        let links = rule_links(&p);
        let pp = links.iter().find(|l| l.rule1.lhs == "PP").unwrap();
        assert_eq!(pp.rule2.rhs, ["NP", "IN"]);
        assert_eq!(pp.permutation, [1, 0]);
    }

    #[test]
    fn orphan_leaf_is_reported() {
        let p = pair("(S (A a) (B b))", "(S (A x) (B y) (C z))", "0-0 1-1");
        let report = check_congruence(&p);
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::OrphanToken { side: Lang::L2, index: 2, token } if token == "z"
        )));
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::Unmapped { side: Lang::L2, category, .. } if category == "C"
        )));
    }

    #[test]
    fn missing_map_is_reported() {
        let p = parse_pair_file("TREE1: (S (A a))\nTREE2: (S (A b))\nALIGN: 0-0\n").unwrap();
        assert_eq!(check_congruence(&p).violations, vec![Violation::NoNodeMap]);
    }

    #[test]
    fn structural_mismatch_is_reported() {
        // The tree-2 grouping crosses the tree-1 constituents.
        let p = pair("(S (X (A a) (B b)) (C c))", "(S (A x) (Y (B y) (C z)))", "0-0 1-1 2-2");
        assert!(!check_congruence(&p).is_congruent());
    }

    #[test]
    fn inverse_is_involution() {
        let p = pair("(S (NP (A a)) (B b))", "(S (B y) (NP (A x)))", "0-1 1-0");
        let m = p.congruence.clone().unwrap();
        assert_eq!(m.inverse().inverse(), m);
        for (a, b) in m.f12.iter().enumerate() {
            if let Some(b) = b {
                assert_eq!(m.f21[*b], Some(a));
            }
        }
    }
}
