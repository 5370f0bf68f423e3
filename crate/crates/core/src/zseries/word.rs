use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A finite, ordered alphabet of single-character letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = char>) -> Result<Self> {
        let letters: Vec<char> = letters.into_iter().collect();
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        for (i, c) in letters.iter().enumerate() {
            if letters[..i].contains(c) {
                return Err(Error::InvalidAlphabet(format!("duplicate letter '{c}'")));
            }
        }
        Ok(Alphabet { letters })
    }

    /// The one-letter alphabet `{a}`.
    pub fn unary() -> Self {
        Alphabet { letters: vec!['a'] }
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_unary(&self) -> bool {
        self.letters.len() == 1
    }

    pub fn index_of(&self, letter: char) -> Option<usize> {
        self.letters.iter().position(|&c| c == letter)
    }

    pub fn contains(&self, letter: char) -> bool {
        self.index_of(letter).is_some()
    }

    /// Checks that every symbol of `word` belongs to this alphabet.
    pub fn check(&self, word: &Word) -> Result<()> {
        match word.symbols().iter().find(|c| !self.contains(**c)) {
            Some(&letter) => Err(Error::UnknownLetter {
                letter,
                alphabet: self.to_string(),
            }),
            None => Ok(()),
        }
    }

    pub fn ensure_same(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }

    /// All words of length exactly `len`, in lexicographic order.
    pub fn words_of_length(&self, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            out = out
                .iter()
                .flat_map(|w| self.letters.iter().map(move |&c| w.append(c)))
                .collect();
        }
        out
    }

    /// All words of length at most `max_len`, in shortlex order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(|l| self.words_of_length(l)).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// A finite word. Ordered shortlex: by length first, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<char>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(symbols: Vec<char>) -> Self {
        Word(symbols)
    }

    /// `letter` repeated `n` times.
    pub fn power(letter: char, n: usize) -> Self {
        Word(vec![letter; n])
    }

    pub fn symbols(&self) -> &[char] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of occurrences of `letter`.
    pub fn count(&self, letter: char) -> usize {
        self.0.iter().filter(|&&c| c == letter).count()
    }

    /// The prefix of length `i` (clamped).
    pub fn prefix(&self, i: usize) -> Word {
        Word(self.0[..i.min(self.len())].to_vec())
    }

    /// The suffix starting after position `i` (clamped).
    pub fn suffix(&self, i: usize) -> Word {
        Word(self.0[i.min(self.len())..].to_vec())
    }

    /// All prefixes, from ε up to the word itself.
    pub fn prefixes(&self) -> impl DoubleEndedIterator<Item = Word> + '_ {
        (0..=self.len()).map(|i| self.prefix(i))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn append(&self, letter: char) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    pub fn repeat(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    /// Prefix order: `self ⪯ other`.
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// The word as a plain string; ε is the empty string.
    pub fn as_string(&self) -> String {
        self.0.iter().collect()
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word(s.chars().collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "ε")
        } else {
            write!(f, "{}", self.as_string())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_rejects_duplicates_and_empty() {
        assert!(Alphabet::new(Vec::new()).is_err());
        assert!(Alphabet::new("aba".chars()).is_err());
        assert!(Alphabet::new("ab".chars()).is_ok());
    }

    #[test]
    fn shortlex_order() {
        let mut ws: Vec<Word> = ["b", "", "ab", "a", "ba"].iter().map(|s| Word::from(*s)).collect();
        ws.sort();
        let got: Vec<String> = ws.iter().map(|w| w.as_string()).collect();
        assert_eq!(got, ["", "a", "b", "ab", "ba"]);
    }

    #[test]
    fn words_up_to_counts() {
        let ab = Alphabet::new("ab".chars()).unwrap();
        assert_eq!(ab.words_up_to(8).len(), 511);
        assert_eq!(Alphabet::unary().words_up_to(5).len(), 6);
    }

    #[test]
    fn prefixes_and_check() {
        let w = Word::from("abb");
        let ps: Vec<String> = w.prefixes().map(|p| p.as_string()).collect();
        assert_eq!(ps, ["", "a", "ab", "abb"]);
        assert!(Word::from("ab").is_prefix_of(&w));
        assert!(!Word::from("b").is_prefix_of(&w));
        assert_eq!(w.count('b'), 2);
        let ab = Alphabet::new("ab".chars()).unwrap();
        assert!(ab.check(&w).is_ok());
        assert!(ab.check(&Word::from("ac")).is_err());
    }
}
