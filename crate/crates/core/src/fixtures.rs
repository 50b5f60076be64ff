//! English-Hindi pairs bundled with the crate.

use crate::pair::{parse_pair_file, AlignedPair};
use crate::projection::prepare;

const SOURCES: [(&str, &str); 8] = [
    ("pair1", include_str!("../data/fixtures/pair1.pair")),
    ("pair2", include_str!("../data/fixtures/pair2.pair")),
    ("pair3", include_str!("../data/fixtures/pair3.pair")),
    ("pair4", include_str!("../data/fixtures/pair4.pair")),
    ("pair5", include_str!("../data/fixtures/pair5.pair")),
    ("pair6", include_str!("../data/fixtures/pair6.pair")),
    ("pair7", include_str!("../data/fixtures/pair7.pair")),
    ("pair8", include_str!("../data/fixtures/pair8.pair")),
];

/// Fixture ids in table order.
pub fn ids() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(id, _)| *id)
}

/// Raw file text of a fixture.
pub fn source(id: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(i, _)| *i == id).map(|(_, s)| *s)
}

/// All fixtures as parsed, before projection.
pub fn load_fixtures() -> Vec<AlignedPair> {
    SOURCES
        .iter()
        .map(|(id, text)| {
            let mut p = parse_pair_file(text).unwrap_or_else(|e| panic!("fixture {id}: {e}"));
            p.id = id.to_string();
            p
        })
        .collect()
}

/// A fixture projected from the first tree, with congruence attached.
///
/// Panics on an unknown id.
pub fn prepared(id: &str) -> AlignedPair {
    let pair = load_fixtures().into_iter().find(|p| p.id == id).unwrap_or_else(|| panic!("no fixture named {id}"));
    prepare(&pair).unwrap_or_else(|e| panic!("fixture {id}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_prepare() {
        for id in ids() {
            let p = prepared(id);
            assert_eq!(p.id, id);
            assert!(p.congruence.is_some());
        }
    }
}
