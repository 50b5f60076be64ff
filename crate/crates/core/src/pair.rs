//! Aligned sentence pairs and the pair-file format.
//!
//! ```text
//! #L1: en
//! #L2: hi
//! TREE1: (S (NP (NNP Saturday)) ...)
//! TREE2: (S (NP (NNP Shanivar)) ...)
//! ALIGN: 0-0 1-2 2-1 ...
//! ```
//!
//! Alignment links are grouped into lexical units: every connected group of
//! links becomes one unit pair, provided its tokens are contiguous on both
//! sides.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::grammar::NodeMap;
use crate::tree::{Lang, ParseTree, TreeError, NULL_TOKEN};

#[derive(Debug, Error)]
pub enum PairError {
    #[error("line {line}: {source}")]
    Tree {
        line: usize,
        #[source]
        source: TreeError,
    },
    #[error("line {line}: unrecognised line {text:?}")]
    UnknownLine { line: usize, text: String },
    #[error("line {line}: duplicate {key} line")]
    Duplicate { line: usize, key: &'static str },
    #[error("missing {0} line")]
    Missing(&'static str),
    #[error("line {line}: malformed alignment link {link:?}")]
    BadLink { line: usize, link: String },
    #[error("alignment index {index} out of range for TREE{side} with {len} leaves")]
    OutOfRange { side: usize, index: usize, len: usize },
    #[error("alignment group is not contiguous: TREE1 tokens {left:?}, TREE2 tokens {right:?}")]
    NonContiguous { left: Vec<usize>, right: Vec<usize> },
}

/// A contiguous token group treated as one alignment slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexicalUnit {
    pub tokens: Vec<String>,
    pub lang: Lang,
    /// First token index in its own sentence.
    pub start: usize,
    /// Index of the aligned unit in the other side's unit list.
    pub partner: usize,
}

impl LexicalUnit {
    pub fn is_null(&self) -> bool {
        self.tokens.iter().all(|t| t == NULL_TOKEN)
    }

    pub fn end(&self) -> usize {
        self.start + self.tokens.len()
    }

    /// Surface text with null morphemes removed.
    pub fn surface(&self) -> String {
        self.tokens.iter().filter(|t| *t != NULL_TOKEN).cloned().collect::<Vec<_>>().join(" ")
    }
}

#[derive(Clone, Debug)]
pub struct AlignedPair {
    pub id: String,
    pub lang_tags: [String; 2],
    pub trees: [ParseTree; 2],
    /// Units per side, in sentence order.
    pub units: [Vec<LexicalUnit>; 2],
    /// Token indices not covered by any link.
    pub unaligned: [Vec<usize>; 2],
    /// Node congruence, absent until projection or matching.
    pub congruence: Option<NodeMap>,
}

impl PartialEq for AlignedPair {
    /// Structural equality; the identifier is not compared.
    fn eq(&self, other: &Self) -> bool {
        self.lang_tags == other.lang_tags
            && self.trees == other.trees
            && self.units == other.units
            && self.unaligned == other.unaligned
            && self.congruence == other.congruence
    }
}

impl AlignedPair {
    pub fn tree(&self, lang: Lang) -> &ParseTree {
        &self.trees[lang.index()]
    }

    pub fn units_of(&self, lang: Lang) -> &[LexicalUnit] {
        &self.units[lang.index()]
    }

    pub fn slot_count(&self) -> usize {
        self.units[0].len()
    }

    /// Unit index covering a token, if any.
    pub fn unit_at(&self, lang: Lang, token: usize) -> Option<usize> {
        self.units[lang.index()].iter().position(|u| u.start <= token && token < u.end())
    }

    /// Pair with the two sides exchanged.
    pub fn swapped(&self) -> AlignedPair {
        let [t1, t2] = self.trees.clone();
        let [u1, u2] = self.units.clone();
        let flip = |us: Vec<LexicalUnit>| {
            us.into_iter()
                .map(|mut u| {
                    u.lang = u.lang.other();
                    u
                })
                .collect()
        };
        let [a1, a2] = self.unaligned.clone();
        AlignedPair {
            id: self.id.clone(),
            lang_tags: [self.lang_tags[1].clone(), self.lang_tags[0].clone()],
            trees: [t2, t1],
            units: [flip(u2), flip(u1)],
            unaligned: [a2, a1],
            congruence: self.congruence.as_ref().map(NodeMap::inverse),
        }
    }

    /// Canonical pair-file text.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "#L1: {}", self.lang_tags[0]);
        let _ = writeln!(out, "#L2: {}", self.lang_tags[1]);
        let _ = writeln!(out, "TREE1: {}", self.trees[0]);
        let _ = writeln!(out, "TREE2: {}", self.trees[1]);
        let mut links = BTreeSet::new();
        for u in &self.units[0] {
            let v = &self.units[1][u.partner];
            for i in u.start..u.end() {
                for j in v.start..v.end() {
                    links.insert((i, j));
                }
            }
        }
        let links: Vec<String> = links.iter().map(|(i, j)| format!("{i}-{j}")).collect();
        let _ = writeln!(out, "ALIGN: {}", links.join(" "));
        out
    }
}

/// Parses a pair file. The returned pair has no node congruence yet.
pub fn parse_pair_file(text: &str) -> Result<AlignedPair, PairError> {
    let mut tags: [Option<String>; 2] = [None, None];
    let mut trees: [Option<ParseTree>; 2] = [None, None];
    let mut align: Option<Vec<(usize, usize)>> = None;

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix('#') {
            let rest = rest.trim_start();
            for (side, key) in [(0, "L1:"), (1, "L2:")] {
                if let Some(v) = rest.strip_prefix(key) {
                    if tags[side].is_some() {
                        return Err(PairError::Duplicate { line, key: ["#L1", "#L2"][side] });
                    }
                    tags[side] = Some(v.trim().to_string());
                }
            }
            continue;
        }
        if let Some((key, value)) = l.split_once(':') {
            match key.trim() {
                k @ ("TREE1" | "TREE2") => {
                    let side = usize::from(k == "TREE2");
                    if trees[side].is_some() {
                        return Err(PairError::Duplicate { line, key: ["TREE1", "TREE2"][side] });
                    }
                    let t = ParseTree::parse(value).map_err(|source| PairError::Tree { line, source })?;
                    trees[side] = Some(t);
                    continue;
                }
                "ALIGN" => {
                    if align.is_some() {
                        return Err(PairError::Duplicate { line, key: "ALIGN" });
                    }
                    let mut links = Vec::new();
                    for item in value.split_whitespace() {
                        let parsed = item.split_once('-').and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)));
                        match parsed {
                            Some(p) => links.push(p),
                            None => return Err(PairError::BadLink { line, link: item.to_string() }),
                        }
                    }
                    align = Some(links);
                    continue;
                }
                _ => {}
            }
        }
        return Err(PairError::UnknownLine { line, text: l.to_string() });
    }

    let [t1, t2] = trees;
    let t1 = t1.ok_or(PairError::Missing("TREE1"))?;
    let t2 = t2.ok_or(PairError::Missing("TREE2"))?;
    let links = align.ok_or(PairError::Missing("ALIGN"))?;
    let [g1, g2] = tags;
    let (units, unaligned) = group_units(&t1, &t2, &links)?;
    Ok(AlignedPair {
        id: String::new(),
        lang_tags: [g1.unwrap_or_else(|| "l1".into()), g2.unwrap_or_else(|| "l2".into())],
        trees: [t1, t2],
        units,
        unaligned,
        congruence: None,
    })
}

type Grouped = ([Vec<LexicalUnit>; 2], [Vec<usize>; 2]);

fn group_units(t1: &ParseTree, t2: &ParseTree, links: &[(usize, usize)]) -> Result<Grouped, PairError> {
    let n1 = t1.token_count();
    let n2 = t2.token_count();
    for &(i, j) in links {
        if i >= n1 {
            return Err(PairError::OutOfRange { side: 1, index: i, len: n1 });
        }
        if j >= n2 {
            return Err(PairError::OutOfRange { side: 2, index: j, len: n2 });
        }
    }
    // Union-find over tokens of both sides; side-2 token j is node n1 + j.
    let mut parent: Vec<usize> = (0..n1 + n2).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(i, j) in links {
        let a = find(&mut parent, i);
        let b = find(&mut parent, n1 + j);
        parent[a] = b;
    }
    let mut linked = vec![false; n1 + n2];
    for &(i, j) in links {
        linked[i] = true;
        linked[n1 + j] = true;
    }
    let mut groups: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> = Default::default();
    for x in (0..n1 + n2).filter(|&x| linked[x]) {
        let r = find(&mut parent, x);
        let g = groups.entry(r).or_default();
        if x < n1 {
            g.0.push(x);
        } else {
            g.1.push(x - n1);
        }
    }
    let contiguous = |v: &[usize]| v.windows(2).all(|w| w[1] == w[0] + 1);
    let mut pairs: Vec<(Vec<usize>, Vec<usize>)> = groups.into_values().collect();
    for (l, r) in &pairs {
        if !contiguous(l) || !contiguous(r) {
            return Err(PairError::NonContiguous { left: l.clone(), right: r.clone() });
        }
    }
    pairs.sort();
    let leaves1 = t1.leaves();
    let leaves2 = t2.leaves();
    let mut right_order: Vec<usize> = (0..pairs.len()).collect();
    right_order.sort_by_key(|&k| pairs[k].1[0]);
    let mut rank2 = vec![0; pairs.len()];
    for (r, &k) in right_order.iter().enumerate() {
        rank2[k] = r;
    }
    let units1 = pairs
        .iter()
        .enumerate()
        .map(|(k, (l, _))| LexicalUnit {
            tokens: l.iter().map(|&i| leaves1[i].to_string()).collect(),
            lang: Lang::L1,
            start: l[0],
            partner: rank2[k],
        })
        .collect();
    let units2 = right_order
        .iter()
        .map(|&k| {
            let r = &pairs[k].1;
            LexicalUnit {
                tokens: r.iter().map(|&j| leaves2[j].to_string()).collect(),
                lang: Lang::L2,
                start: r[0],
                partner: k,
            }
        })
        .collect();
    let unaligned = [(0..n1).filter(|&i| !linked[i]).collect(), (0..n2).filter(|&j| !linked[n1 + j]).collect()];
    Ok(([units1, units2], unaligned))
}
