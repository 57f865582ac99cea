//! LZ78 dictionaries and the Lempel–Ziv Jaccard distance.
//!
//! The 1978 Lempel–Ziv parse walks the input taking, at each step, the
//! longest prefix of the remaining input that is already a phrase and
//! extending it by one symbol. The resulting phrase set is the dictionary;
//! the LZJD between two sequences is the Jaccard distance between their
//! dictionaries.
//!
//! Inputs are raw byte strings, which keeps dictionaries bit-exact across
//! text encodings. The trailing incomplete match at end of input is kept
//! (it always duplicates an existing phrase, so the set is unchanged);
//! parse variants differ here and the choice is part of this crate's
//! contract.

use std::fmt;

use crate::measures::jaccard;
use crate::rational::Rat;
use crate::set::FiniteSet;

/// The set of phrases produced by the LZ78 parse of one sequence.
///
/// Prefix-closed up to the final phrase: every phrase of length ≥ 2 has its
/// longest proper prefix in the dictionary. The dictionary of the empty
/// sequence is empty.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct LzDictionary {
    phrases: FiniteSet<Vec<u8>>,
}

impl LzDictionary {
    pub fn phrases(&self) -> &FiniteSet<Vec<u8>> {
        &self.phrases
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    /// Sorted phrase list, one escaped phrase per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for phrase in self.phrases.iter() {
            out.push_str(&escape_phrase(phrase));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for LzDictionary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, phrase) in self.phrases.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", escape_phrase(phrase))?;
        }
        write!(f, "}}")
    }
}

/// Printable ASCII stays literal; backslash doubles; everything else is \xNN.
fn escape_phrase(phrase: &[u8]) -> String {
    let mut out = String::new();
    for &b in phrase {
        match b {
            b'\\' => out.push_str("\\\\"),
            0x20..=0x7e => out.push(b as char),
            other => out.push_str(&format!("\\x{other:02x}")),
        }
    }
    out
}

/// LZ78 parse of a byte sequence.
pub fn lz78_dictionary(input: &[u8]) -> LzDictionary {
    let mut phrases: FiniteSet<Vec<u8>> = FiniteSet::new();
    let mut current = Vec::new();
    for &b in input {
        current.push(b);
        if !phrases.contains(&current) {
            phrases.insert(std::mem::take(&mut current));
        }
    }
    // Trailing incomplete match: already a phrase, so inserting is a no-op,
    // but it keeps the parse total.
    if !current.is_empty() {
        phrases.insert(current);
    }
    LzDictionary { phrases }
}

/// Lempel–Ziv Jaccard distance between two byte sequences.
///
/// A pseudometric on sequences: distinct sequences can share a dictionary
/// (`"a"` and `"aa"` both parse to `{a}`), so identity of indiscernibles
/// holds on dictionaries, not on raw strings.
pub fn lzjd(a: &[u8], b: &[u8]) -> Rat {
    let da = lz78_dictionary(a);
    let db = lz78_dictionary(b);
    jaccard(da.phrases(), db.phrases())
}
