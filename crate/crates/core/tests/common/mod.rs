//! Random congruent pairs and a random configuration, shared by the
//! integration suites.

#![allow(dead_code)]

use std::collections::BTreeSet;

use csgen_core::config::{Dedup, ModelConfig};
use csgen_core::projection::prepare;
use csgen_core::{parse_pair_file, AlignedPair, Frame};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub const PHRASES: [&str; 3] = ["XP", "YP", "ZP"];
pub const TAGS: [&str; 4] = ["A", "B", "C", "D"];

enum Shape {
    Leaf { slot: usize, tag: &'static str },
    Node { cat: &'static str, kids: Vec<Shape> },
}

fn shape(rng: &mut StdRng, first: usize, n: usize) -> Shape {
    if n == 1 {
        let leaf = Shape::Leaf { slot: first, tag: TAGS[rng.gen_range(0..TAGS.len())] };
        return if rng.gen_bool(0.2) {
            Shape::Node { cat: PHRASES[rng.gen_range(0..PHRASES.len())], kids: vec![leaf] }
        } else {
            leaf
        };
    }
    let parts = if n >= 3 && rng.gen_bool(0.5) { 3 } else { 2 };
    let mut cuts: Vec<usize> = (1..n).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(n);
    let kids = bounds.windows(2).map(|w| shape(rng, first + w[0], w[1] - w[0])).collect();
    Shape::Node { cat: PHRASES[rng.gen_range(0..PHRASES.len())], kids }
}

/// Per-slot second-language tokens: usually one, sometimes two or a null.
fn l2_words(rng: &mut StdRng, n: usize) -> Vec<Vec<String>> {
    (0..n)
        .map(|k| match rng.gen_range(0..10) {
            0 => vec![format!("v{k}a"), format!("v{k}b")],
            1 if n > 1 => vec!["-NULL-".to_string()],
            _ => vec![format!("v{k}")],
        })
        .collect()
}

fn write(
    s: &Shape,
    side: usize,
    perms: &mut dyn FnMut(usize) -> Vec<usize>,
    l2: &[Vec<String>],
    out: &mut String,
    order: &mut Vec<usize>,
) {
    match s {
        Shape::Leaf { slot, tag } => {
            order.push(*slot);
            let words = if side == 0 { format!("w{slot}") } else { l2[*slot].join(" ") };
            out.push_str(&format!("({tag} {words})"));
        }
        Shape::Node { cat, kids } => {
            out.push_str(&format!("({cat}"));
            let idx: Vec<usize> = if side == 0 { (0..kids.len()).collect() } else { perms(kids.len()) };
            for i in idx {
                out.push(' ');
                write(&kids[i], side, perms, l2, out, order);
            }
            out.push(')');
        }
    }
}

/// Pair-file text for a random congruent pair with `n` slots.
pub fn random_pair_text(rng: &mut StdRng, n: usize) -> String {
    let root = match shape(rng, 0, n) {
        s @ Shape::Node { .. } => s,
        leaf => Shape::Node { cat: "XP", kids: vec![leaf] },
    };
    let l2 = l2_words(rng, n);
    let (mut t1, mut t2) = (String::from("(S"), String::from("(S"));
    let (mut o1, mut o2) = (Vec::new(), Vec::new());
    let mut ident = |k: usize| (0..k).collect::<Vec<_>>();
    write(&root, 0, &mut ident, &l2, &mut t1, &mut o1);
    let mut perm_rng = StdRng::seed_from_u64(rng.gen());
    let mut shuffle = |k: usize| {
        let mut v: Vec<usize> = (0..k).collect();
        v.shuffle(&mut perm_rng);
        v
    };
    write(&root, 1, &mut shuffle, &l2, &mut t2, &mut o2);
    t1.push(')');
    t2.push(')');
    let mut start2 = vec![0; n];
    let mut pos = 0;
    for &slot in &o2 {
        start2[slot] = pos;
        pos += l2[slot].len();
    }
    let mut links = Vec::new();
    for (i, &slot) in o1.iter().enumerate() {
        for j in 0..l2[slot].len() {
            links.push(format!("{i}-{}", start2[slot] + j));
        }
    }
    format!("TREE1: {t1}\nTREE2: {t2}\nALIGN: {}\n", links.join(" "))
}

pub fn random_pair(rng: &mut StdRng, n: usize, id: &str) -> AlignedPair {
    let text = random_pair_text(rng, n);
    let mut p = parse_pair_file(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    p.id = id.to_string();
    p
}

pub fn random_frame(rng: &mut StdRng, n: usize) -> Frame {
    let p = random_pair(rng, n, "random");
    Frame::from_pair(&prepare(&p).unwrap()).unwrap()
}

fn subset(rng: &mut StdRng, items: &[&str], p: f64) -> BTreeSet<String> {
    items.iter().filter(|_| rng.gen_bool(p)).map(|s| s.to_string()).collect()
}

/// Random deny sets, lexicons and switches.
pub fn random_config(rng: &mut StdRng) -> ModelConfig {
    let cats: Vec<&str> = PHRASES.iter().chain(TAGS.iter()).copied().collect();
    let w: Vec<String> = (0..8).map(|k| format!("w{k}")).collect();
    let v: Vec<String> = (0..8).map(|k| format!("v{k}")).collect();
    ModelConfig {
        deny_l1_to_l2: subset(rng, &cats, 0.25),
        deny_l2_to_l1: subset(rng, &cats, 0.25),
        aux_lexicon: [
            subset(rng, &w.iter().map(String::as_str).collect::<Vec<_>>(), 0.1),
            subset(rng, &v.iter().map(String::as_str).collect::<Vec<_>>(), 0.1),
        ],
        substitutable: subset(rng, &TAGS, 0.4),
        deny_composite_functional: rng.gen_bool(0.5),
        lock_aux_phrases: rng.gen_bool(0.5),
        include_monolingual: rng.gen_bool(0.8),
        dedup: Dedup::Strings,
    }
}

/// A random first tree with an arbitrary word order on the second side and
/// a flat second tree. Projection has to restructure these.
pub fn random_crossing_pair(rng: &mut StdRng, n: usize) -> AlignedPair {
    let root = match shape(rng, 0, n) {
        s @ Shape::Node { .. } => s,
        leaf => Shape::Node { cat: "XP", kids: vec![leaf] },
    };
    let l2 = l2_words(rng, n);
    let mut t1 = String::from("(S");
    let mut o1 = Vec::new();
    let mut ident = |k: usize| (0..k).collect::<Vec<_>>();
    write(&root, 0, &mut ident, &l2, &mut t1, &mut o1);
    t1.push(')');
    let mut o2: Vec<usize> = (0..n).collect();
    o2.shuffle(rng);
    let leaves: Vec<String> = o2.iter().map(|&s| format!("(A {})", l2[s].join(" "))).collect();
    let t2 = format!("(S {})", leaves.join(" "));
    let mut start2 = vec![0; n];
    let mut pos = 0;
    for &slot in &o2 {
        start2[slot] = pos;
        pos += l2[slot].len();
    }
    let links: Vec<String> = o1
        .iter()
        .enumerate()
        .flat_map(|(i, &slot)| (0..l2[slot].len()).map(move |j| (i, j)))
        .map(|(i, j)| format!("{i}-{}", start2[o1[i]] + j))
        .collect();
    let text = format!("TREE1: {t1}\nTREE2: {t2}\nALIGN: {}\n", links.join(" "));
    parse_pair_file(&text).unwrap_or_else(|e| panic!("{e}\n{text}"))
}

use csgen_core::analysis::{brute_force, generate, AnalysisError};
use csgen_core::ec;
use csgen_core::frame::Derivation;
use csgen_core::ml::{self, MatrixChoice};
use csgen_core::{Lang, Model};

/// Generator output equals the exhaustive oracle for every model. Instances
/// too large for the oracle are skipped.
pub fn check_oracle(frame: &Frame, cfg: &ModelConfig, matrix: MatrixChoice) -> Result<(), String> {
    for model in Model::ALL {
        let got = generate(frame, model, matrix, cfg).strings;
        match brute_force(frame, model, matrix, cfg) {
            Ok(want) if want == got => {}
            Ok(want) => {
                return Err(format!(
                    "{model}: generator only {:?}, oracle only {:?}",
                    got.difference(&want).collect::<Vec<_>>(),
                    want.difference(&got).collect::<Vec<_>>()
                ))
            }
            Err(AnalysisError::TooLarge { .. }) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(())
}

/// Set chains and per-sentence invariants.
pub fn check_invariants(frame: &Frame, cfg: &ModelConfig, matrix: MatrixChoice) -> Result<(), String> {
    let n = frame.slot_count();
    let ec0 = ec::generate_ec0(frame);
    let ec1 = ec::generate_ec1(frame, cfg);
    let ml0 = ml::generate_ml0(frame, matrix, cfg);
    let ml1 = ml::generate_ml1(frame, matrix, cfg);
    let ml2 = ml::generate_ml2(frame, matrix, cfg);
    if !ec0.strings.is_subset(&ec1.strings) {
        return Err("EC0 not within EC1".into());
    }
    if !ml0.strings.is_subset(&ml1.strings) {
        return Err("ML0 not within ML1".into());
    }
    let filtered: BTreeSet<String> = ml1
        .sentences
        .iter()
        .filter(|s| ml::check_well_formed(&s.units, frame).unwrap())
        .map(|s| frame.surface(&s.units))
        .collect();
    if filtered != ml2.strings {
        return Err("ML2 differs from filtered ML1".into());
    }
    for set in [&ec0, &ec1, &ml0, &ml1, &ml2] {
        for s in &set.sentences {
            if !s.covers_each_slot_once(n) {
                return Err(format!("{}: {:?} does not cover each slot once", set.model, s.units));
            }
        }
    }
    for set in [&ec0, &ec1] {
        for s in &set.sentences {
            if !ec::is_constituent_block(frame, &s.units) {
                return Err(format!("{}: {} breaks a constituent", set.model, frame.surface(&s.units)));
            }
        }
        for lang in [Lang::L1, Lang::L2] {
            if !set.strings.contains(&frame.surface(&frame.monolingual(lang))) {
                return Err(format!("{}: monolingual {lang} sentence missing", set.model));
            }
        }
    }
    for set in [&ml0, &ml1, &ml2] {
        for s in &set.sentences {
            if let Some(Derivation::Switches { sites, .. }) = &s.derivation {
                if sites.contains(&frame.root()) {
                    return Err(format!("{}: root switched", set.model));
                }
            }
        }
    }
    Ok(())
}
