//! Generation and validation of code-switched sentences from a pair of
//! word-aligned, congruent parse trees.
//!
//! Typical use: parse a pair file, project the first tree onto the second
//! sentence, build a [`Frame`] and run a generator.
//!
//! ```
//! use csgen_core::{ec, fixtures, parse_pair_file, projection, Frame};
//!
//! let pair = parse_pair_file(fixtures::source("pair1").unwrap()).unwrap();
//! let pair = projection::prepare(&pair).unwrap();
//! let frame = Frame::from_pair(&pair).unwrap();
//! assert_eq!(ec::generate_ec0(&frame).strings.len(), 22);
//! ```

pub mod analysis;
pub mod config;
pub mod ec;
pub mod fixtures;
pub mod frame;
pub mod grammar;
pub mod ml;
pub mod pair;
pub mod projection;
pub mod tree;

pub use config::{Dedup, ModelConfig};
pub use frame::{CsSentence, Frame, Model, SentenceSet, UnitChoice};
pub use ml::MatrixChoice;
pub use pair::{parse_pair_file, AlignedPair, LexicalUnit};
pub use tree::{Lang, ParseTree};
