//! Model configuration and its line-oriented file format.
//!
//! ```text
//! # comment
//! deny: DT, IN, PRP
//! aux_lexicon_l1: is, are
//! substitutable: NN, JJ
//! include_monolingual: true
//! dedup: strings
//! ```
//!
//! List values are separated by commas.

use std::collections::BTreeSet;
use std::str::FromStr;

use thiserror::Error;

use crate::tree::Lang;

/// The configuration shipped with the crate.
pub const SHIPPED_CONFIG: &str = include_str!("../data/default.conf");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected `key: value`, found {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: {key} expects true or false, found {value:?}")]
    BadBool { line: usize, key: String, value: String },
    #[error("line {line}: dedup expects strings or trees, found {value:?}")]
    BadDedup { line: usize, value: String },
}

/// What counts as one generated sentence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dedup {
    Strings,
    Trees,
}

impl FromStr for Dedup {
    type Err = ();

    fn from_str(s: &str) -> Result<Dedup, ()> {
        match s.to_ascii_lowercase().as_str() {
            "strings" => Ok(Dedup::Strings),
            "trees" => Ok(Dedup::Trees),
            _ => Err(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelConfig {
    /// Categories that may not switch from the first language to the second.
    pub deny_l1_to_l2: BTreeSet<String>,
    /// Categories that may not switch from the second language to the first.
    pub deny_l2_to_l1: BTreeSet<String>,
    /// Auxiliary units per language, by unit text.
    pub aux_lexicon: [BTreeSet<String>; 2],
    /// Preterminal categories open to lexical substitution.
    pub substitutable: BTreeSet<String>,
    /// A phrase whose preterminals are all denied is itself denied.
    pub deny_composite_functional: bool,
    /// In the single-level model, phrases containing an auxiliary unit stay
    /// in the matrix language.
    pub lock_aux_phrases: bool,
    pub include_monolingual: bool,
    pub dedup: Dedup,
}

impl Default for ModelConfig {
    /// Permissive settings: nothing denied, no substitution.
    fn default() -> ModelConfig {
        ModelConfig {
            deny_l1_to_l2: BTreeSet::new(),
            deny_l2_to_l1: BTreeSet::new(),
            aux_lexicon: [BTreeSet::new(), BTreeSet::new()],
            substitutable: BTreeSet::new(),
            deny_composite_functional: false,
            lock_aux_phrases: false,
            include_monolingual: true,
            dedup: Dedup::Strings,
        }
    }
}

fn list(value: &str) -> BTreeSet<String> {
    value.split(',').map(|s| s.split_whitespace().collect::<Vec<_>>().join(" ")).filter(|s| !s.is_empty()).collect()
}

impl ModelConfig {
    /// The calibrated configuration shipped with the crate.
    pub fn shipped() -> ModelConfig {
        ModelConfig::parse(SHIPPED_CONFIG).expect("shipped config parses")
    }

    /// Parses a config file. Keys not mentioned keep their default values.
    pub fn parse(text: &str) -> Result<ModelConfig, ConfigError> {
        let mut cfg = ModelConfig::default();
        let mut deny_both: Option<BTreeSet<String>> = None;
        let mut deny12 = None;
        let mut deny21 = None;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let Some((key, value)) = l.split_once(':') else {
                return Err(ConfigError::Syntax { line, text: l.to_string() });
            };
            let key = key.trim();
            let value = value.trim();
            let flag = |v: &str| match v.to_ascii_lowercase().as_str() {
                "true" | "yes" | "on" | "1" => Ok(true),
                "false" | "no" | "off" | "0" => Ok(false),
                _ => Err(ConfigError::BadBool { line, key: key.to_string(), value: v.to_string() }),
            };
            match key {
                "deny" => deny_both = Some(list(value)),
                "deny_l1_to_l2" => deny12 = Some(list(value)),
                "deny_l2_to_l1" => deny21 = Some(list(value)),
                "aux_lexicon_l1" => cfg.aux_lexicon[0] = list(value),
                "aux_lexicon_l2" => cfg.aux_lexicon[1] = list(value),
                "substitutable" => cfg.substitutable = list(value),
                "include_monolingual" => cfg.include_monolingual = flag(value)?,
                "composite_functional" => cfg.deny_composite_functional = flag(value)?,
                "lock_aux_phrases" => cfg.lock_aux_phrases = flag(value)?,
                "dedup" => {
                    cfg.dedup = value.parse().map_err(|_| ConfigError::BadDedup { line, value: value.to_string() })?
                }
                _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
            }
        }
        let both = deny_both.unwrap_or_default();
        cfg.deny_l1_to_l2 = deny12.unwrap_or_else(|| both.clone());
        cfg.deny_l2_to_l1 = deny21.unwrap_or(both);
        Ok(cfg)
    }

    /// Deny set for switching away from `from`.
    pub fn deny_from(&self, from: Lang) -> &BTreeSet<String> {
        match from {
            Lang::L1 => &self.deny_l1_to_l2,
            Lang::L2 => &self.deny_l2_to_l1,
        }
    }

    /// A unit is auxiliary if its whole text, or any one of its tokens, is
    /// in the lexicon of its language.
    pub fn is_aux(&self, lang: Lang, tokens: &[String]) -> bool {
        let lex = &self.aux_lexicon[lang.index()];
        lex.contains(&tokens.join(" ")) || tokens.iter().any(|t| lex.contains(t))
    }

    /// Denies every category in both directions.
    pub fn deny_all(mut self, cats: impl IntoIterator<Item = String>) -> ModelConfig {
        for c in cats {
            self.deny_l1_to_l2.insert(c.clone());
            self.deny_l2_to_l1.insert(c);
        }
        self
    }
}
