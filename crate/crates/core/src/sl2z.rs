//! Exact arithmetic in SL(2, Z) for monodromy words of torus bundles.
//!
//! The two generators are the right-handed Dehn twists
//!
//! ```text
//! a = [[1, 1],      b = [[ 1, 0],
//!      [0, 1]]           [-1, 1]]
//! ```
//!
//! which satisfy `aba = bab` and `(ab)^6 = 1`. All arithmetic is checked;
//! an overflowing product is reported as [`Error::Overflow`] instead of
//! wrapping.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 2×2 integer matrix of determinant 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[[i64; 2]; 2]", into = "[[i64; 2]; 2]")]
pub struct GroupElement {
    m: [[i64; 2]; 2],
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { m: [[1, 0], [0, 1]] };

    pub const NEG_IDENTITY: GroupElement = GroupElement { m: [[-1, 0], [0, -1]] };

    pub fn new(m11: i64, m12: i64, m21: i64, m22: i64) -> Result<Self> {
        let det = (m11 as i128) * (m22 as i128) - (m12 as i128) * (m21 as i128);
        if det != 1 {
            return Err(Error::NotUnimodular(m11, m12, m21, m22));
        }
        Ok(GroupElement {
            m: [[m11, m12], [m21, m22]],
        })
    }

    pub fn generator(letter: Letter) -> Self {
        match letter {
            Letter::A => GroupElement { m: [[1, 1], [0, 1]] },
            Letter::B => GroupElement { m: [[1, 0], [-1, 1]] },
        }
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        self.m
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        let (a, b) = (&self.m, &other.m);
        let entry = |i: usize, j: usize| -> Result<i64> {
            let x = a[i][0]
                .checked_mul(b[0][j])
                .ok_or(Error::Overflow("multiplying SL(2,Z) matrices"))?;
            let y = a[i][1]
                .checked_mul(b[1][j])
                .ok_or(Error::Overflow("multiplying SL(2,Z) matrices"))?;
            x.checked_add(y).ok_or(Error::Overflow("multiplying SL(2,Z) matrices"))
        };
        Ok(GroupElement {
            m: [[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]],
        })
    }

    /// The inverse `[[d, -b], [-c, a]]`.
    pub fn inverse(&self) -> Result<GroupElement> {
        let [[p, q], [r, s]] = self.m;
        let neg = |x: i64| x.checked_neg().ok_or(Error::Overflow("inverting a matrix"));
        Ok(GroupElement {
            m: [[s, neg(q)?], [neg(r)?, p]],
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn is_central(&self) -> bool {
        *self == Self::IDENTITY || *self == Self::NEG_IDENTITY
    }
}

impl Default for GroupElement {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl TryFrom<[[i64; 2]; 2]> for GroupElement {
    type Error = Error;

    fn try_from(m: [[i64; 2]; 2]) -> Result<Self> {
        GroupElement::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

impl From<GroupElement> for [[i64; 2]; 2] {
    fn from(g: GroupElement) -> Self {
        g.m
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[p, q], [r, s]] = self.m;
        write!(f, "[[{p}, {q}], [{r}, {s}]]")
    }
}

/// One positive Dehn twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }
}

impl TryFrom<char> for Letter {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c {
            'a' | 'A' => Ok(Letter::A),
            'b' | 'B' => Ok(Letter::B),
            other => Err(Error::InvalidLetter(other)),
        }
    }
}

/// A positive word in the generators; serializes as a plain string such as
/// `"ababab"`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct MonodromyWord {
    letters: Vec<Letter>,
}

impl MonodromyWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        MonodromyWord { letters }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The word `(ab)^k`.
    pub fn ab_power(k: usize) -> Self {
        let mut letters = Vec::with_capacity(2 * k);
        for _ in 0..k {
            letters.push(Letter::A);
            letters.push(Letter::B);
        }
        MonodromyWord { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &MonodromyWord) -> MonodromyWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        MonodromyWord { letters }
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    pub fn extend(&mut self, other: &MonodromyWord) {
        self.letters.extend_from_slice(&other.letters);
    }

    /// Left-to-right product of the generator matrices; the empty word is
    /// the identity.
    pub fn to_matrix(&self) -> Result<GroupElement> {
        self.letters.iter().try_fold(GroupElement::IDENTITY, |acc, &l| {
            acc.compose(&GroupElement::generator(l))
        })
    }

    /// If the word is literally `(ab)^k`, returns `k`.
    pub fn as_ab_power(&self) -> Option<usize> {
        if !self.letters.len().is_multiple_of(2) {
            return None;
        }
        self.letters
            .chunks(2)
            .all(|c| c == [Letter::A, Letter::B])
            .then_some(self.letters.len() / 2)
    }
}

pub fn word_to_matrix(w: &MonodromyWord) -> Result<GroupElement> {
    w.to_matrix()
}

impl FromStr for MonodromyWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(Letter::try_from)
            .collect::<Result<Vec<_>>>()?;
        Ok(MonodromyWord { letters })
    }
}

impl TryFrom<String> for MonodromyWord {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<MonodromyWord> for String {
    fn from(w: MonodromyWord) -> Self {
        w.to_string()
    }
}

impl fmt::Display for MonodromyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}
