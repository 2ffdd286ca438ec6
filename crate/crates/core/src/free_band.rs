//! The free band on a few generators.
//!
//! Two words are equal in the free band iff they have the same content, the
//! same longest prefix missing one letter of the content (recursively, as
//! free-band elements), the same letter completing that prefix, and the mirror
//! data on the suffix side. [`CanonicalKey`] records exactly that data, so
//! equal keys mean equal elements.

use std::collections::{BTreeMap, HashMap};

use crate::band::Band;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CanonicalKey {
    Letter(u8),
    Node {
        content: u32,
        prefix: Box<CanonicalKey>,
        prefix_letter: u8,
        suffix_letter: u8,
        suffix: Box<CanonicalKey>,
    },
}

fn content(word: &[u8]) -> u32 {
    word.iter().fold(0, |acc, &c| acc | 1 << c)
}

/// Canonical key of a nonempty word.
pub fn canonical_key(word: &[u8]) -> CanonicalKey {
    assert!(!word.is_empty(), "empty word");
    let c = content(word);
    let distinct = c.count_ones();
    if distinct == 1 {
        return CanonicalKey::Letter(word[0]);
    }
    let mut seen = 0u32;
    let mut p = 0;
    for (i, &x) in word.iter().enumerate() {
        seen |= 1 << x;
        if seen == c {
            p = i;
            break;
        }
    }
    let mut seen = 0u32;
    let mut s = 0;
    for (i, &x) in word.iter().enumerate().rev() {
        seen |= 1 << x;
        if seen == c {
            s = i;
            break;
        }
    }
    CanonicalKey::Node {
        content: c,
        prefix: Box::new(canonical_key(&word[..p])),
        prefix_letter: word[p],
        suffix_letter: word[s],
        suffix: Box::new(canonical_key(&word[s + 1..])),
    }
}

fn render(word: &[u8]) -> String {
    word.iter().map(|&c| (b'a' + c) as char).collect()
}

pub(crate) fn free_band(k: usize) -> Result<Band> {
    if !(1..=3).contains(&k) {
        return Err(Error::ParameterOutOfRange { what: "k", value: k, range: "1..=3" });
    }
    // Closure of the generators under multiplication.
    let mut reps: BTreeMap<CanonicalKey, Vec<u8>> = BTreeMap::new();
    let mut frontier: Vec<Vec<u8>> = (0..k as u8).map(|g| vec![g]).collect();
    for w in &frontier {
        reps.insert(canonical_key(w), w.clone());
    }
    while !frontier.is_empty() {
        let known: Vec<Vec<u8>> = reps.values().cloned().collect();
        let mut next = Vec::new();
        for u in &frontier {
            for v in &known {
                for w in [[u.as_slice(), v].concat(), [v.as_slice(), u].concat()] {
                    let key = canonical_key(&w);
                    if let std::collections::btree_map::Entry::Vacant(e) = reps.entry(key) {
                        e.insert(w.clone());
                        next.push(w);
                    }
                }
            }
        }
        frontier = next;
    }
    let size = reps.len();

    // Label each element by its shortest, then lexicographically least, word.
    // A prefix of such a word is itself such a word, so only labels are extended.
    let mut labels: HashMap<CanonicalKey, Vec<u8>> = HashMap::new();
    let mut words: Vec<Vec<u8>> = vec![vec![]];
    while labels.len() < size {
        let mut longer = Vec::new();
        for w in &words {
            for g in 0..k as u8 {
                let mut x = w.clone();
                x.push(g);
                let key = canonical_key(&x);
                if let std::collections::hash_map::Entry::Vacant(e) = labels.entry(key) {
                    e.insert(x.clone());
                    longer.push(x);
                }
            }
        }
        if longer.is_empty() {
            return Err(Error::Internal("free band labelling did not reach every element".into()));
        }
        words = longer;
    }
    let mut elements: Vec<(Vec<u8>, CanonicalKey)> = labels.into_iter().map(|(key, w)| (w, key)).collect();
    elements.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    let index: HashMap<&CanonicalKey, usize> = elements.iter().enumerate().map(|(i, (_, key))| (key, i)).collect();

    let mut table = Vec::with_capacity(size * size);
    for (u, _) in &elements {
        for (v, _) in &elements {
            let key = canonical_key(&[u.as_slice(), v].concat());
            table.push(index[&key]);
        }
    }
    let names = elements.iter().map(|(w, _)| render(w)).collect();
    Ok(Band::from_trusted(size, table, Some(names)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> Vec<u8> {
        s.bytes().map(|c| c - b'a').collect()
    }

    #[test]
    fn squares_collapse() {
        for w in ["ab", "aba", "abcab", "cab"] {
            let w = word(w);
            let sq = [w.as_slice(), &w].concat();
            assert_eq!(canonical_key(&sq), canonical_key(&w));
        }
    }

    #[test]
    fn distinct_two_letter_elements() {
        let keys: Vec<_> = ["a", "b", "ab", "ba", "aba", "bab"].iter().map(|w| canonical_key(&word(w))).collect();
        for i in 0..keys.len() {
            for j in 0..i {
                assert_ne!(keys[i], keys[j]);
            }
        }
        assert_eq!(canonical_key(&word("abba")), canonical_key(&word("aba")));
    }

    #[test]
    fn rejects_unsupported_rank() {
        assert!(free_band(0).is_err());
        assert!(free_band(4).is_err());
    }
}
