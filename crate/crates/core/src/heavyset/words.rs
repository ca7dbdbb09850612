use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Word over `{+1, −1}`, written with `A` for `+1` and `B` for `−1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SignedWord {
    pub letters: Vec<i8>,
}

impl SignedWord {
    pub fn new(letters: Vec<i8>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| l != 1 && l != -1) {
            return Err(Error::InvalidArgument(format!("letter {bad} is not ±1")));
        }
        Ok(SignedWord { letters })
    }

    /// Word of length `len` whose bit `i` of `bits` set means `+1`.
    pub fn from_bits(bits: u64, len: usize) -> Self {
        SignedWord {
            letters: (0..len)
                .map(|i| if bits >> i & 1 == 1 { 1 } else { -1 })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Every prefix sum is `≥ 0`.
    pub fn is_prefix_nonnegative(&self) -> bool {
        let mut s = 0i64;
        self.letters.iter().all(|&l| {
            s += l as i64;
            s >= 0
        })
    }
}

impl FromStr for SignedWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'A' | 'a' | '+' => Ok(1),
                'B' | 'b' | '-' => Ok(-1),
                other => Err(Error::Parse(format!("bad letter '{other}'"))),
            })
            .collect::<Result<Vec<i8>>>()
            .map(|letters| SignedWord { letters })
    }
}

impl fmt::Display for SignedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            f.write_str(if l > 0 { "A" } else { "B" })?;
        }
        Ok(())
    }
}

/// Delete adjacent `AB` pairs until none remain. The result is `B…BA…A`, and
/// it has no `B` exactly when the input is prefix-nonnegative.
pub fn word_reduce(w: &SignedWord) -> SignedWord {
    let mut stack: Vec<i8> = Vec::with_capacity(w.len());
    for &l in &w.letters {
        if l < 0 && stack.last() == Some(&1) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    SignedWord { letters: stack }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> SignedWord {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(word_reduce(&w("AABAABBA")), w("AA"));
        assert_eq!(word_reduce(&w("ABAB")), w(""));
        assert_eq!(word_reduce(&w("")), w(""));
        assert_eq!(word_reduce(&w("BAAB")), w("BA"));
    }

    #[test]
    fn display_round_trip() {
        assert_eq!(w("AABAB").to_string(), "AABAB");
        assert!("AXB".parse::<SignedWord>().is_err());
        assert!(SignedWord::new(vec![1, 0]).is_err());
    }
}
