//! Words in the Artin braid group `B_n`.
//!
//! A word is an unnormalized sequence of generators `σ_i^{±1}`. Nothing here
//! applies the braid relations: free reduction is explicit and equality in the
//! group is decided by [`crate::artin`].

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single generator `σ_i` or its inverse, encoded as a nonzero signed index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter(i8);

impl Letter {
    pub fn new(index: usize, positive: bool) -> Self {
        debug_assert!(index >= 1 && index < i8::MAX as usize);
        let k = index as i8;
        Letter(if positive { k } else { -k })
    }

    pub fn pos(index: usize) -> Self {
        Letter::new(index, true)
    }

    pub fn neg(index: usize) -> Self {
        Letter::new(index, false)
    }

    /// Generator index, 1-based.
    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn sign(self) -> i8 {
        self.0.signum()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    pub fn signed(self) -> i32 {
        self.0 as i32
    }
}

// σ1 < σ1⁻¹ < σ2 < σ2⁻¹ < ...
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.index(), self.0 < 0).cmp(&(other.index(), other.0 < 0))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A braid word on a fixed number of strands.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WordJson", into = "WordJson")]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

#[derive(Serialize, Deserialize)]
struct WordJson {
    n: usize,
    word: Vec<i32>,
}

impl TryFrom<WordJson> for BraidWord {
    type Error = Error;

    fn try_from(value: WordJson) -> Result<Self> {
        BraidWord::new(value.n, &value.word)
    }
}

impl From<BraidWord> for WordJson {
    fn from(w: BraidWord) -> Self {
        WordJson {
            n: w.strands,
            word: w.to_signed(),
        }
    }
}

impl BraidWord {
    /// Builds a word from signed generator indices (`k` is `σ_k`, `-k` is `σ_k⁻¹`).
    pub fn new(strands: usize, signed: &[i32]) -> Result<Self> {
        if strands < 2 {
            return Err(Error::TooFewStrands(strands));
        }
        let letters = signed
            .iter()
            .map(|&k| {
                let index = k.unsigned_abs() as usize;
                if k == 0 || index >= strands || strands > i8::MAX as usize {
                    Err(Error::IndexOutOfRange {
                        index: k as i64,
                        strands,
                    })
                } else {
                    Ok(Letter::new(index, k > 0))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        assert!(strands >= 2, "braid words need at least 2 strands");
        BraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    /// Builds a word from letters that are already known to be in range.
    pub fn from_letters(strands: usize, letters: Vec<Letter>) -> Result<Self> {
        if strands < 2 {
            return Err(Error::TooFewStrands(strands));
        }
        if let Some(bad) = letters.iter().find(|l| l.index() >= strands) {
            return Err(Error::IndexOutOfRange {
                index: bad.signed() as i64,
                strands,
            });
        }
        Ok(BraidWord { strands, letters })
    }

    /// The generator `σ_i`.
    pub fn generator(strands: usize, index: usize) -> Result<Self> {
        BraidWord::new(strands, &[index as i32])
    }

    /// Parses whitespace-separated signed integers, e.g. `"1 2 2 1"`.
    pub fn parse(strands: usize, text: &str) -> Result<Self> {
        let signed = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i32>()
                    .map_err(|_| Error::Parse(format!("bad braid letter {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        BraidWord::new(strands, &signed)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_signed(&self) -> Vec<i32> {
        self.letters.iter().map(|l| l.signed()).collect()
    }

    fn check_same(&self, other: &BraidWord) -> Result<()> {
        if self.strands != other.strands {
            return Err(Error::StrandCountMismatch {
                left: self.strands,
                right: other.strands,
            });
        }
        Ok(())
    }

    /// Stacks `other` below `self`: the letters of `self` come first.
    pub fn compose(&self, other: &BraidWord) -> Result<BraidWord> {
        self.check_same(other)?;
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    /// Composes a sequence of words on the same strand count.
    pub fn product<'a>(
        strands: usize,
        words: impl IntoIterator<Item = &'a BraidWord>,
    ) -> Result<BraidWord> {
        words
            .into_iter()
            .try_fold(BraidWord::identity(strands), |acc, w| acc.compose(w))
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `self^k` for any integer `k`, negative powers going through the inverse.
    pub fn pow(&self, k: i32) -> BraidWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let reps = k.unsigned_abs() as usize;
        BraidWord {
            strands: self.strands,
            letters: base.letters.repeat(reps),
        }
    }

    /// Cancels adjacent inverse pairs until none remain. The braid relation is
    /// not applied.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord {
            strands: self.strands,
            letters: out,
        }
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.sign() as i64).sum()
    }

    /// Image under the permutation homomorphism. Letters act left to right on
    /// the tuple `(1, …, n)`, each `σ_i^{±1}` swapping positions `i` and `i+1`.
    pub fn permutation(&self) -> Permutation {
        let mut images: Vec<usize> = (1..=self.strands).collect();
        for l in &self.letters {
            let i = l.index();
            images.swap(i - 1, i);
        }
        Permutation { images }
    }

    pub fn is_pure(&self) -> bool {
        self.permutation().is_identity()
    }

    /// Reverses letter order without inverting (the braid read upside down).
    pub fn reversed(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().copied().collect(),
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.letters {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{}", l.signed())?;
            first = false;
        }
        Ok(())
    }
}

/// A permutation of `{1, …, n}` stored as the tuple it produces from `(1, …, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::Parse(format!("{images:?} is not a permutation")));
            }
            seen[x - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    /// 0 for even, 1 for odd.
    pub fn parity(&self) -> u8 {
        let mut inversions = 0usize;
        for i in 0..self.images.len() {
            for j in i + 1..self.images.len() {
                if self.images[i] > self.images[j] {
                    inversions += 1;
                }
            }
        }
        (inversions % 2) as u8
    }

    /// The permutation obtained by first applying `self` then `other`, matching
    /// `permutation(a·b) = permutation(a).then(permutation(b))`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        // `other` rearranges positions of whatever tuple it is applied to.
        let images = other.images.iter().map(|&k| self.images[k - 1]).collect();
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, x) in self.images.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// The pure braid generator `a_ij` twisting strands `i` and `j` once.
///
/// For three strands this is `a12 = σ1²`, `a13 = σ2 σ1² σ2⁻¹`, `a23 = σ2²`; in
/// general `(σ_{j-1} ⋯ σ_{i+1}) σ_i² (σ_{i+1}⁻¹ ⋯ σ_{j-1}⁻¹)`.
pub fn pure_generator(i: usize, j: usize, n: usize) -> Result<BraidWord> {
    if n < 2 || i < 1 || i >= j || j > n {
        return Err(Error::InvalidPair { i, j, n });
    }
    let mut letters = Vec::with_capacity(2 * (j - i));
    for k in (i + 1..j).rev() {
        letters.push(Letter::pos(k));
    }
    letters.push(Letter::pos(i));
    letters.push(Letter::pos(i));
    for k in i + 1..j {
        letters.push(Letter::neg(k));
    }
    BraidWord::from_letters(n, letters)
}
