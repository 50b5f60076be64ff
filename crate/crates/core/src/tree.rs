//! Constituency trees in Penn bracket notation.
//!
//! Trees live in an arena indexed by [`NodeId`]. Nodes are stored in preorder,
//! so two trees built from the same bracketing compare equal with `==`.

use std::fmt;

use thiserror::Error;

/// Reserved token for null morphemes. Kept in trees, dropped at rendering.
pub const NULL_TOKEN: &str = "-NULL-";

pub type NodeId = usize;

/// One of the two input languages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Lang {
    L1,
    L2,
}

impl Lang {
    pub fn other(self) -> Lang {
        match self {
            Lang::L1 => Lang::L2,
            Lang::L2 => Lang::L1,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Lang::L1 => 0,
            Lang::L2 => 1,
        }
    }

    pub fn from_index(i: usize) -> Lang {
        if i == 0 {
            Lang::L1
        } else {
            Lang::L2
        }
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lang::L1 => "l1",
            Lang::L2 => "l2",
        })
    }
}

/// Language label of a node in a mixed tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    L1,
    L2,
    /// Mixed: children come from both languages.
    X,
    /// Wildcard produced by lexical substitution; matches either language.
    Either,
}

impl From<Lang> for Label {
    fn from(l: Lang) -> Label {
        match l {
            Lang::L1 => Label::L1,
            Lang::L2 => Label::L2,
        }
    }
}

impl Label {
    pub fn lang(self) -> Option<Lang> {
        match self {
            Label::L1 => Some(Lang::L1),
            Label::L2 => Some(Lang::L2),
            _ => None,
        }
    }
}

/// A syntactic category name such as `NP` or `VBZ`.
///
/// Equality is by name only; the language a node belongs to is tracked
/// separately (see [`Label`]).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Category(String);

impl Category {
    pub fn new(name: &str) -> Result<Category, TreeError> {
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '(' || c == ')') {
            return Err(TreeError::BadCategory(name.to_string()));
        }
        Ok(Category(name.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("invalid category name {0:?}")]
    BadCategory(String),
    #[error("unexpected end of input in bracketed tree")]
    UnexpectedEnd,
    #[error("expected '(' at token {0}, found {1:?}")]
    ExpectedOpen(usize, String),
    #[error("missing category label at token {0}")]
    MissingLabel(usize),
    #[error("trailing input after tree at token {0}")]
    Trailing(usize),
    #[error("node {0} mixes tokens and phrases among its children")]
    MixedChildren(String),
    #[error("node {0} has no children")]
    EmptyNode(String),
}

/// Recursive form used while building or rewriting trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bracket {
    Phrase(Category, Vec<Bracket>),
    Token(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Phrase(Category),
    Token(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub kind: NodeKind,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
    /// Half-open range of token indices covered by the node.
    pub span: (usize, usize),
}

impl TreeNode {
    pub fn category(&self) -> Option<&Category> {
        match &self.kind {
            NodeKind::Phrase(c) => Some(c),
            NodeKind::Token(_) => None,
        }
    }

    pub fn token(&self) -> Option<&str> {
        match &self.kind {
            NodeKind::Token(t) => Some(t),
            NodeKind::Phrase(_) => None,
        }
    }

    pub fn is_token(&self) -> bool {
        matches!(self.kind, NodeKind::Token(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseTree {
    nodes: Vec<TreeNode>,
    root: NodeId,
    tokens: Vec<NodeId>,
}

impl ParseTree {
    pub fn parse(text: &str) -> Result<ParseTree, TreeError> {
        let b = parse_bracket(text)?;
        ParseTree::from_bracket(&b)
    }

    pub fn from_bracket(b: &Bracket) -> Result<ParseTree, TreeError> {
        let mut t = ParseTree { nodes: Vec::new(), root: 0, tokens: Vec::new() };
        t.push(b, None)?;
        Ok(t)
    }

    fn push(&mut self, b: &Bracket, parent: Option<NodeId>) -> Result<NodeId, TreeError> {
        let id = self.nodes.len();
        let start = self.tokens.len();
        match b {
            Bracket::Token(tok) => {
                self.nodes.push(TreeNode {
                    kind: NodeKind::Token(tok.clone()),
                    children: Vec::new(),
                    parent,
                    span: (start, start + 1),
                });
                self.tokens.push(id);
            }
            Bracket::Phrase(cat, kids) => {
                if kids.is_empty() {
                    return Err(TreeError::EmptyNode(cat.to_string()));
                }
                let toks = kids.iter().filter(|k| matches!(k, Bracket::Token(_))).count();
                if toks != 0 && toks != kids.len() {
                    return Err(TreeError::MixedChildren(cat.to_string()));
                }
                self.nodes.push(TreeNode {
                    kind: NodeKind::Phrase(cat.clone()),
                    children: Vec::new(),
                    parent,
                    span: (start, start),
                });
                let mut ch = Vec::with_capacity(kids.len());
                for k in kids {
                    ch.push(self.push(k, Some(id))?);
                }
                let end = self.tokens.len();
                let n = &mut self.nodes[id];
                n.children = ch;
                n.span = (start, end);
            }
        }
        Ok(id)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids in preorder.
    pub fn ids(&self) -> impl Iterator<Item = NodeId> {
        0..self.nodes.len()
    }

    /// Phrase (non-token) node ids in preorder.
    pub fn phrases(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.ids().filter(|&i| !self.nodes[i].is_token())
    }

    pub fn category(&self, id: NodeId) -> Option<&Category> {
        self.nodes[id].category()
    }

    /// A phrase whose children are all tokens.
    pub fn is_preterminal(&self, id: NodeId) -> bool {
        let n = &self.nodes[id];
        !n.is_token() && n.children.iter().all(|&c| self.nodes[c].is_token())
    }

    /// Surface tokens, including null morphemes.
    pub fn leaves(&self) -> Vec<&str> {
        self.tokens.iter().map(|&i| self.nodes[i].token().unwrap_or("")).collect()
    }

    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    /// Node id of the token at a position.
    pub fn token_node(&self, index: usize) -> NodeId {
        self.tokens[index]
    }

    /// Preterminal dominating the token at a position.
    pub fn preterminal_of(&self, index: usize) -> NodeId {
        self.nodes[self.tokens[index]].parent.expect("token without parent")
    }

    pub fn preterminals(&self) -> Vec<NodeId> {
        self.phrases().filter(|&i| self.is_preterminal(i)).collect()
    }

    /// Edges from the root to the deepest preterminal.
    pub fn depth(&self) -> usize {
        let mut best = 0;
        for p in self.preterminals() {
            let mut d = 0;
            let mut cur = p;
            while let Some(up) = self.nodes[cur].parent {
                d += 1;
                cur = up;
            }
            best = best.max(d);
        }
        best
    }

    /// Largest child count over phrases that are not preterminals.
    pub fn max_branching(&self) -> usize {
        self.phrases().filter(|&i| !self.is_preterminal(i)).map(|i| self.nodes[i].children.len()).max().unwrap_or(0)
    }

    pub fn to_bracket(&self) -> Bracket {
        self.bracket_at(self.root)
    }

    fn bracket_at(&self, id: NodeId) -> Bracket {
        match &self.nodes[id].kind {
            NodeKind::Token(t) => Bracket::Token(t.clone()),
            NodeKind::Phrase(c) => {
                Bracket::Phrase(c.clone(), self.nodes[id].children.iter().map(|&k| self.bracket_at(k)).collect())
            }
        }
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bracket::Token(t) => f.write_str(t),
            Bracket::Phrase(c, kids) => {
                write!(f, "({c}")?;
                for k in kids {
                    write!(f, " {k}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bracket())
    }
}

fn lex(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !ch.is_whitespace() {
                out.push(ch.to_string());
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Parses `(TAG child ...)` notation. A label-less outer wrapper such as
/// `( (S ...) )` is unwrapped.
pub fn parse_bracket(text: &str) -> Result<Bracket, TreeError> {
    let toks = lex(text);
    let mut pos = 0;
    let b = parse_at(&toks, &mut pos)?;
    if pos != toks.len() {
        return Err(TreeError::Trailing(pos));
    }
    Ok(b)
}

fn parse_at(toks: &[String], pos: &mut usize) -> Result<Bracket, TreeError> {
    match toks.get(*pos) {
        None => return Err(TreeError::UnexpectedEnd),
        Some(t) if t != "(" => return Err(TreeError::ExpectedOpen(*pos, t.clone())),
        _ => {}
    }
    *pos += 1;
    let label = match toks.get(*pos) {
        None => return Err(TreeError::UnexpectedEnd),
        Some(t) if t == "(" => {
            // Unlabelled wrapper around a single tree.
            let inner = parse_at(toks, pos)?;
            match toks.get(*pos) {
                Some(t) if t == ")" => {
                    *pos += 1;
                    return Ok(inner);
                }
                Some(_) => return Err(TreeError::MissingLabel(*pos)),
                None => return Err(TreeError::UnexpectedEnd),
            }
        }
        Some(t) if t == ")" => return Err(TreeError::MissingLabel(*pos)),
        Some(t) => Category::new(t)?,
    };
    *pos += 1;
    let mut kids = Vec::new();
    loop {
        match toks.get(*pos) {
            None => return Err(TreeError::UnexpectedEnd),
            Some(t) if t == ")" => {
                *pos += 1;
                break;
            }
            Some(t) if t == "(" => kids.push(parse_at(toks, pos)?),
            Some(t) => {
                kids.push(Bracket::Token(t.clone()));
                *pos += 1;
            }
        }
    }
    if kids.is_empty() {
        return Err(TreeError::EmptyNode(label.to_string()));
    }
    Ok(Bracket::Phrase(label, kids))
}

#[cfg(test)]
mod tests {
    use super::*;

    const T1E: &str =
        "(S (NP (NNP Saturday)) (VP (VBZ is) (VBG boring) (PP (IN from) (NP (DT that) (NN perspective)))))";

    #[test]
    fn round_trips_through_display() {
        let t = ParseTree::parse(T1E).unwrap();
        assert_eq!(t.to_string(), T1E);
        assert_eq!(ParseTree::parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn spans_cover_children() {
        let t = ParseTree::parse(T1E).unwrap();
        for id in t.phrases() {
            let n = t.node(id);
            let first = t.node(n.children[0]).span.0;
            let last = t.node(*n.children.last().unwrap()).span.1;
            assert_eq!((first, last), n.span);
            for w in n.children.windows(2) {
                assert_eq!(t.node(w[0]).span.1, t.node(w[1]).span.0);
            }
        }
        assert_eq!(t.node(t.root()).span, (0, 6));
    }

    #[test]
    fn shape_metrics() {
        let t = ParseTree::parse(T1E).unwrap();
        assert_eq!(t.phrases().count(), 11);
        assert_eq!(t.depth(), 4);
        assert_eq!(t.max_branching(), 3);
        assert_eq!(t.leaves(), vec!["Saturday", "is", "boring", "from", "that", "perspective"]);
    }

    #[test]
    fn unwraps_unlabelled_outer_bracket() {
        let t = ParseTree::parse("( (S (NN a)) )").unwrap();
        assert_eq!(t.to_string(), "(S (NN a))");
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(ParseTree::parse("(S (NN a)"), Err(TreeError::UnexpectedEnd));
        assert!(matches!(ParseTree::parse("(S (NN a)))"), Err(TreeError::Trailing(_))));
        assert!(matches!(ParseTree::parse("S"), Err(TreeError::ExpectedOpen(0, _))));
        assert!(matches!(ParseTree::parse("(S)"), Err(TreeError::EmptyNode(_))));
        assert!(matches!(ParseTree::parse("(S a (NN b))"), Err(TreeError::MixedChildren(_))));
    }

    #[test]
    fn category_names_are_validated() {
        assert!(Category::new("NP").is_ok());
        assert!(Category::new("").is_err());
        assert!(Category::new("N P").is_err());
        assert!(Category::new("N(").is_err());
    }

    #[test]
    fn multiword_preterminal() {
        let t = ParseTree::parse("(S (VBP barbaad karte hain))").unwrap();
        assert_eq!(t.token_count(), 3);
        assert!(t.is_preterminal(1));
        assert_eq!(t.preterminal_of(2), 1);
        assert_eq!(t.depth(), 1);
    }
}
