//! Model comparison, table rows, sentence validation and the brute-force
//! oracle.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::config::{Dedup, ModelConfig};
use crate::ec::{self, Stage};
use crate::frame::{Frame, FrameError, FrameId, Model, SentenceSet, UnitChoice};
use crate::ml::{self, MatrixChoice};
use crate::pair::AlignedPair;
use crate::tree::Lang;

/// Header written above report rows.
pub const REPORT_HEADER: &str = "\
# categories: internal nodes plus preterminals of the projected first tree
# depth: edges from the root to the deepest preterminal; bf: most children under a non-preterminal
# ML columns: count(count shared with EC1), first tree as matrix
# pair\tlength\tcategories\tdepth\tbf\tEC0\tEC1\tML0\tML1\tML2";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("cannot compare sets from different pairs ({0} and {1})")]
    DifferentPairs(String, String),
    #[error("instance too large for exhaustive search: {what} is {size}, limit {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },
}

/// Largest slot count the EC oracle accepts.
pub const ORACLE_MAX_SLOTS: usize = 10;
/// Largest candidate switch-site pool the ML oracle accepts.
pub const ORACLE_MAX_SITES: usize = 16;

/// Runs one generator.
pub fn generate(frame: &Frame, model: Model, matrix: MatrixChoice, cfg: &ModelConfig) -> SentenceSet {
    match model {
        Model::Ml0 => ml::generate_ml0(frame, matrix, cfg),
        Model::Ml1 => ml::generate_ml1(frame, matrix, cfg),
        Model::Ml2 => ml::generate_ml2(frame, matrix, cfg),
        Model::Ec0 => ec::generate_ec0(frame),
        Model::Ec1 => ec::generate_ec1(frame, cfg),
    }
}

/// Set relations between two generated sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub pair_id: String,
    pub models: (Model, Model),
    pub counts: (usize, usize),
    pub intersection: BTreeSet<String>,
    pub only_a: BTreeSet<String>,
    pub only_b: BTreeSet<String>,
}

impl Comparison {
    pub fn a_subsumed_by_b(&self) -> bool {
        self.only_a.is_empty()
    }
}

/// Intersection and both differences, as canonical strings.
pub fn compare(a: &SentenceSet, b: &SentenceSet) -> Result<Comparison, AnalysisError> {
    if a.pair_id != b.pair_id {
        return Err(AnalysisError::DifferentPairs(a.pair_id.clone(), b.pair_id.clone()));
    }
    Ok(Comparison {
        pair_id: a.pair_id.clone(),
        models: (a.model, b.model),
        counts: (a.strings.len(), b.strings.len()),
        intersection: a.strings.intersection(&b.strings).cloned().collect(),
        only_a: a.strings.difference(&b.strings).cloned().collect(),
        only_b: b.strings.difference(&a.strings).cloned().collect(),
    })
}

/// One line of the generation table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportRow {
    pub pair_id: String,
    pub length: usize,
    pub categories: usize,
    pub depth: usize,
    pub branching: usize,
    pub ec0: usize,
    pub ec1: usize,
    /// ML0, ML1 and ML2 as (count, count shared with EC1).
    pub ml: [(usize, usize); 3],
}

impl fmt::Display for ReportRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.pair_id, self.length, self.categories, self.depth, self.branching, self.ec0, self.ec1
        )?;
        for (n, shared) in self.ml {
            write!(f, "\t{n}({shared})")?;
        }
        Ok(())
    }
}

/// Size of an ML set and how much of it EC1 also generates.
fn ml_counts(set: &SentenceSet, ec1: &BTreeSet<String>, frame: &Frame, dedup: Dedup) -> (usize, usize) {
    match dedup {
        Dedup::Strings => (set.strings.len(), set.strings.intersection(ec1).count()),
        Dedup::Trees => {
            (set.sentences.len(), set.sentences.iter().filter(|s| ec1.contains(&frame.surface(&s.units))).count())
        }
    }
}

/// Table row for a congruent pair.
pub fn report_row(pair: &AlignedPair, cfg: &ModelConfig, matrix: MatrixChoice) -> Result<ReportRow, FrameError> {
    let frame = Frame::from_pair(pair)?;
    let tree = &pair.trees[0];
    let ec0 = ec::generate_ec0(&frame);
    let ec1 = ec::generate_ec1(&frame, cfg);
    let ml = [Model::Ml0, Model::Ml1, Model::Ml2]
        .map(|m| ml_counts(&generate(&frame, m, matrix, cfg), &ec1.strings, &frame, cfg.dedup));
    Ok(ReportRow {
        pair_id: pair.id.clone(),
        length: frame.surface(&frame.monolingual(Lang::L1)).split_whitespace().count(),
        categories: tree.phrases().count(),
        depth: tree.depth(),
        branching: tree.max_branching(),
        ec0: ec0.strings.len(),
        ec1: ec1.strings.len(),
        ml,
    })
}

/// Header plus one row per pair, in the given order.
pub fn format_report(rows: &[ReportRow]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

/// Why a sentence was not accepted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    /// The EC pipeline stage that failed.
    Stage(Stage),
    /// The sentence is not in the ML model's output.
    NotGenerated(Model),
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::Stage(s) => write!(f, "{s}"),
            Rejection::NotGenerated(m) => write!(f, "not generated by {m}"),
        }
    }
}

/// Readings of a sentence as unit sequences covering every slot once.
/// Null units may sit anywhere, so a sentence can have several readings.
pub fn readings(frame: &Frame, sentence: &str) -> Vec<Vec<UnitChoice>> {
    const LIMIT: usize = 10_000;
    let words: Vec<&str> = sentence.split_whitespace().collect();
    let mut out = Vec::new();
    let mut used = vec![false; frame.slot_count()];
    let mut seq = Vec::new();
    fn walk(
        frame: &Frame,
        words: &[&str],
        pos: usize,
        used: &mut [bool],
        seq: &mut Vec<UnitChoice>,
        out: &mut Vec<Vec<UnitChoice>>,
    ) {
        if out.len() >= LIMIT {
            return;
        }
        if seq.len() == used.len() {
            if pos == words.len() {
                out.push(seq.clone());
            }
            return;
        }
        for slot in 0..used.len() {
            if used[slot] {
                continue;
            }
            for lang in [Lang::L1, Lang::L2] {
                let toks: Vec<&str> = frame
                    .tokens(slot, lang)
                    .iter()
                    .map(String::as_str)
                    .filter(|t| *t != crate::tree::NULL_TOKEN)
                    .collect();
                if words.len() - pos < toks.len() || words[pos..pos + toks.len()] != toks[..] {
                    continue;
                }
                used[slot] = true;
                seq.push(UnitChoice { slot, lang });
                walk(frame, words, pos + toks.len(), used, seq, out);
                seq.pop();
                used[slot] = false;
            }
        }
    }
    walk(frame, &words, 0, &mut used, &mut seq, &mut out);
    out
}

/// Accepts or rejects one sentence under a model.
pub fn validate(
    frame: &Frame,
    model: Model,
    matrix: MatrixChoice,
    cfg: &ModelConfig,
    sentence: &str,
) -> Result<(), Rejection> {
    if model.is_ml() {
        let set = generate(frame, model, matrix, cfg);
        return if set.contains(sentence) { Ok(()) } else { Err(Rejection::NotGenerated(model)) };
    }
    let subst = (model == Model::Ec1 && !cfg.substitutable.is_empty()).then_some(&cfg.substitutable);
    let mut furthest = Stage::Rule1;
    for units in readings(frame, sentence) {
        let strict = ec::check_sequence(frame, &units, None);
        let result = match (strict, subst) {
            (Err(_), Some(s)) => ec::check_sequence(frame, &units, Some(s)),
            (r, _) => r,
        };
        match result {
            Ok(_) => return Ok(()),
            Err(stage) => furthest = furthest.max(stage),
        }
    }
    Err(Rejection::Stage(furthest))
}

/// Exhaustive enumeration of a model's search space, filtered by the
/// constraints stated directly rather than through the generators.
pub fn brute_force(
    frame: &Frame,
    model: Model,
    matrix: MatrixChoice,
    cfg: &ModelConfig,
) -> Result<BTreeSet<String>, AnalysisError> {
    match model {
        Model::Ec0 => brute_ec(frame, None),
        Model::Ec1 => brute_ec(frame, Some(&cfg.substitutable)),
        _ => brute_ml(frame, model, matrix, cfg),
    }
}

/// Each maximal run of one language is a slice of that language's sentence.
fn runs_are_slices(frame: &Frame, units: &[UnitChoice]) -> bool {
    units.chunk_by(|a, b| a.lang == b.lang).all(|run| {
        let lang = run[0].lang;
        let slots: Vec<usize> = run.iter().map(|u| u.slot).collect();
        frame.order(lang).windows(slots.len()).any(|w| w == slots.as_slice())
    })
}

/// For every node, its slots occupy consecutive positions.
fn blocks_contiguous(frame: &Frame, perm: &[usize]) -> bool {
    let mut pos = vec![0; perm.len()];
    for (i, &s) in perm.iter().enumerate() {
        pos[s] = i;
    }
    frame.ids().all(|id| {
        let slots = &frame.node(id).slots;
        let mut p: Vec<usize> = slots.iter().map(|&s| pos[s]).collect();
        p.sort_unstable();
        p.windows(2).all(|w| w[1] == w[0] + 1)
    })
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else { return false };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn brute_ec(frame: &Frame, subst: Option<&BTreeSet<String>>) -> Result<BTreeSet<String>, AnalysisError> {
    let n = frame.slot_count();
    if n > ORACLE_MAX_SLOTS {
        return Err(AnalysisError::TooLarge { what: "slot count", size: n, limit: ORACLE_MAX_SLOTS });
    }
    let mut out = BTreeSet::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if blocks_contiguous(frame, &perm) {
            for mask in 0u32..(1 << n) {
                let units: Vec<UnitChoice> = perm
                    .iter()
                    .enumerate()
                    .map(|(i, &slot)| UnitChoice { slot, lang: Lang::from_index(((mask >> i) & 1) as usize) })
                    .collect();
                if !runs_are_slices(frame, &units) {
                    continue;
                }
                let ok = ec::verify(frame, &units, None).is_ok()
                    || subst.is_some_and(|s| !s.is_empty() && ec::verify(frame, &units, Some(s)).is_ok());
                if ok {
                    out.insert(frame.surface(&units));
                }
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(out)
}

/// Language of a node: the matrix, flipped once per site on the path from
/// the root down to and including the node.
fn lang_at(frame: &Frame, matrix: Lang, sites: &BTreeSet<FrameId>, node: FrameId) -> Lang {
    let flips = std::iter::once(node).chain(frame.ancestors(node)).filter(|x| sites.contains(x)).count();
    if flips % 2 == 0 {
        matrix
    } else {
        matrix.other()
    }
}

fn spell(frame: &Frame, matrix: Lang, sites: &BTreeSet<FrameId>, node: FrameId, out: &mut Vec<UnitChoice>) {
    let lang = lang_at(frame, matrix, sites, node);
    match frame.node(node).slot {
        Some(slot) => out.push(UnitChoice { slot, lang }),
        None => {
            for &c in frame.children(node, lang) {
                spell(frame, matrix, sites, c, out);
            }
        }
    }
}

fn brute_ml(
    frame: &Frame,
    model: Model,
    matrix: MatrixChoice,
    cfg: &ModelConfig,
) -> Result<BTreeSet<String>, AnalysisError> {
    let single = model == Model::Ml0;
    let pool: Vec<FrameId> = frame
        .ids()
        .filter(|&x| [Lang::L1, Lang::L2].iter().any(|&l| ml::switchable(frame, cfg, x, l, single)))
        .collect();
    if pool.len() > ORACLE_MAX_SITES {
        return Err(AnalysisError::TooLarge { what: "switch-site pool", size: pool.len(), limit: ORACLE_MAX_SITES });
    }
    let mut out = BTreeSet::new();
    for &m in matrix.langs() {
        for mask in 0u32..(1 << pool.len()) {
            let sites: BTreeSet<FrameId> =
                pool.iter().enumerate().filter(|(i, _)| (mask >> i) & 1 == 1).map(|(_, &x)| x).collect();
            if sites.is_empty() && !cfg.include_monolingual {
                continue;
            }
            let valid = sites.iter().all(|&x| {
                let context = match frame.node(x).parent {
                    Some(p) => lang_at(frame, m, &sites, p),
                    None => m,
                };
                let nested_ok = !single || !frame.ancestors(x).any(|a| sites.contains(&a));
                nested_ok && ml::switchable(frame, cfg, x, context, single)
            });
            if !valid {
                continue;
            }
            let mut units = Vec::new();
            spell(frame, m, &sites, frame.root(), &mut units);
            if model == Model::Ml2 && !runs_are_slices(frame, &units) {
                continue;
            }
            out.insert(frame.surface(&units));
        }
    }
    Ok(out)
}
