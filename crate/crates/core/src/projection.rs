//! Builds the target-language tree from the source tree and the alignment.
//!
//! Works bottom up. A source node whose units land on a contiguous stretch
//! of the target sentence gets a target counterpart with the same category.
//! Otherwise the node is dropped from the source tree and its children are
//! spliced into the parent, so both trees end up with the same shape. The
//! root is always kept.

use thiserror::Error;

use crate::grammar::{match_by_slots, NodeMap};
use crate::pair::{AlignedPair, LexicalUnit};
use crate::tree::{Bracket, Lang, NodeId, ParseTree, TreeError};

#[derive(Debug, Error)]
pub enum ProjectionError {
    #[error("{side} token {index} ({token}) is not aligned")]
    Unaligned { side: Lang, index: usize, token: String },
    #[error("preterminal {category} over tokens {start}..{end} does not hold exactly one unit")]
    UnitNotPreterminal { category: String, start: usize, end: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionResult {
    pub source: Lang,
    pub modified_source: ParseTree,
    pub projected_target: ParseTree,
    /// Source node to target node, for every phrase node.
    pub node_map: Vec<(NodeId, NodeId)>,
}

struct Item {
    src: Bracket,
    tgt: Bracket,
    lo: usize,
    hi: usize,
    n: usize,
}

/// Projects `source` onto the target order given by the unit alignment.
pub fn project(
    source: &ParseTree,
    src_units: &[LexicalUnit],
    tgt_units: &[LexicalUnit],
) -> Result<(ParseTree, ParseTree), ProjectionError> {
    let mut items = build(source, source.root(), src_units, tgt_units)?;
    debug_assert_eq!(items.len(), 1, "root is always kept");
    let root = items.remove(0);
    Ok((ParseTree::from_bracket(&root.src)?, ParseTree::from_bracket(&root.tgt)?))
}

fn build(
    tree: &ParseTree,
    id: NodeId,
    src_units: &[LexicalUnit],
    tgt_units: &[LexicalUnit],
) -> Result<Vec<Item>, ProjectionError> {
    let node = tree.node(id);
    let cat = node.category().cloned().expect("phrase node");
    if tree.is_preterminal(id) {
        let (s, e) = node.span;
        let u = src_units
            .iter()
            .position(|u| u.start == s && u.end() == e)
            .ok_or_else(|| ProjectionError::UnitNotPreterminal { category: cat.to_string(), start: s, end: e })?;
        let rank = src_units[u].partner;
        let words = |toks: &[String]| toks.iter().cloned().map(Bracket::Token).collect();
        return Ok(vec![Item {
            src: Bracket::Phrase(cat.clone(), words(&src_units[u].tokens)),
            tgt: Bracket::Phrase(cat, words(&tgt_units[rank].tokens)),
            lo: rank,
            hi: rank,
            n: 1,
        }]);
    }
    let mut kids = Vec::new();
    for &c in &node.children {
        kids.extend(build(tree, c, src_units, tgt_units)?);
    }
    let lo = kids.iter().map(|k| k.lo).min().unwrap_or(0);
    let hi = kids.iter().map(|k| k.hi).max().unwrap_or(0);
    let n: usize = kids.iter().map(|k| k.n).sum();
    if hi - lo + 1 != n && node.parent.is_some() {
        // Deferred: the parent adopts the children.
        return Ok(kids);
    }
    let mut src = Vec::with_capacity(kids.len());
    let mut tgt: Vec<(usize, Bracket)> = Vec::with_capacity(kids.len());
    for k in kids {
        src.push(k.src);
        tgt.push((k.lo, k.tgt));
    }
    tgt.sort_by_key(|(lo, _)| *lo);
    Ok(vec![Item {
        src: Bracket::Phrase(cat.clone(), src),
        tgt: Bracket::Phrase(cat, tgt.into_iter().map(|(_, b)| b).collect()),
        lo,
        hi,
        n,
    }])
}

/// Projects one side of a pair onto the other and returns the result with
/// node congruence filled in.
pub fn project_pair(pair: &AlignedPair, source: Lang) -> Result<ProjectionResult, ProjectionError> {
    for side in [source, source.other()] {
        if let Some(&i) = pair.unaligned[side.index()].first() {
            let token = pair.tree(side).leaves()[i].to_string();
            return Err(ProjectionError::Unaligned { side, index: i, token });
        }
    }
    let (modified, projected) = project(pair.tree(source), pair.units_of(source), pair.units_of(source.other()))?;
    let mut result =
        ProjectionResult { source, modified_source: modified, projected_target: projected, node_map: Vec::new() };
    let joined = attach_congruence(&result, pair);
    let map = joined.congruence.as_ref().expect("just attached");
    result.node_map =
        result.modified_source.phrases().filter_map(|id| map.partner(source, id).map(|w| (id, w))).collect();
    Ok(result)
}

/// Replaces the pair's trees by the projected ones and links their nodes.
pub fn attach_congruence(result: &ProjectionResult, pair: &AlignedPair) -> AlignedPair {
    let mut out = pair.clone();
    out.trees[result.source.index()] = result.modified_source.clone();
    out.trees[result.source.other().index()] = result.projected_target.clone();
    let map: NodeMap = match_by_slots(&out);
    out.congruence = Some(map);
    out
}

/// Projection from tree 1 followed by congruence attachment.
pub fn prepare(pair: &AlignedPair) -> Result<AlignedPair, ProjectionError> {
    let result = project_pair(pair, Lang::L1)?;
    Ok(attach_congruence(&result, pair))
}
