//! Word problem for `B_n` through Artin's faithful action on the free group
//! `F_n = ⟨x_1, …, x_n⟩`.
//!
//! `σ_i` acts by `x_i ↦ x_i x_{i+1} x_i⁻¹`, `x_{i+1} ↦ x_i`, fixing the other
//! generators. Two braid words are equal in `B_n` exactly when their
//! automorphisms agree on every generator. Images can grow exponentially with
//! word length; words of a few dozen letters are comfortable.

use std::fmt;

use crate::braid::{BraidWord, Letter};
use crate::error::{Error, Result};

/// A freely reduced word in the free group. Letters are signed 1-based
/// generator indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FreeWord(Vec<i32>);

impl FreeWord {
    pub fn generator(k: usize) -> Self {
        FreeWord(vec![k as i32])
    }

    pub fn from_letters(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut w = FreeWord::default();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn push(&mut self, l: i32) {
        if self.0.last() == Some(&-l) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    fn extend(&mut self, other: &FreeWord) {
        for &l in &other.0 {
            self.push(l);
        }
    }

    fn extend_inverse(&mut self, other: &FreeWord) {
        for &l in other.0.iter().rev() {
            self.push(-l);
        }
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    /// Substitutes `images[k-1]` for every occurrence of `x_k`.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        let mut out = FreeWord::default();
        for &l in &self.0 {
            let img = &images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                out.extend(img);
            } else {
                out.extend_inverse(img);
            }
        }
        out
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, &l) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if l > 0 {
                write!(f, "x{l}")?;
            } else {
                write!(f, "x{}^-1", -l)?;
            }
        }
        Ok(())
    }
}

/// An automorphism of `F_n` given by generator images, together with the
/// images of its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAutomorphism {
    images: Vec<FreeWord>,
    inverse_images: Vec<FreeWord>,
}

impl FreeAutomorphism {
    pub fn identity(rank: usize) -> Self {
        let images: Vec<FreeWord> = (1..=rank).map(FreeWord::generator).collect();
        FreeAutomorphism {
            inverse_images: images.clone(),
            images,
        }
    }

    /// Action of one braid generator.
    pub fn of_letter(rank: usize, letter: Letter) -> Self {
        let mut fwd = FreeAutomorphism::identity(rank).images;
        let mut inv = fwd.clone();
        let i = letter.index() as i32;
        let (a, b) = ((i - 1) as usize, i as usize);
        let sigma = [
            FreeWord::from_letters([i, i + 1, -i]),
            FreeWord::generator(i as usize),
        ];
        let sigma_inv = [
            FreeWord::generator(i as usize + 1),
            FreeWord::from_letters([-(i + 1), i, i + 1]),
        ];
        let (f, g) = if letter.is_positive() {
            (sigma, sigma_inv)
        } else {
            (sigma_inv, sigma)
        };
        [fwd[a], fwd[b]] = f;
        [inv[a], inv[b]] = g;
        FreeAutomorphism {
            images: fwd,
            inverse_images: inv,
        }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[FreeWord] {
        &self.inverse_images
    }

    /// Applies the automorphism to a free word.
    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        w.substitute(&self.images)
    }

    /// `self` followed by `next`: `x ↦ next(self(x))`.
    pub fn then(&self, next: &FreeAutomorphism) -> FreeAutomorphism {
        assert_eq!(self.rank(), next.rank());
        FreeAutomorphism {
            images: self.images.iter().map(|w| next.apply(w)).collect(),
            inverse_images: next
                .inverse_images
                .iter()
                .map(|w| w.substitute(&self.inverse_images))
                .collect(),
        }
    }

    pub fn inverse(&self) -> FreeAutomorphism {
        FreeAutomorphism {
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    /// Checks that the stored inverse really inverts the map on every generator.
    pub fn is_consistent(&self) -> bool {
        let id = FreeAutomorphism::identity(self.rank());
        self.images
            .iter()
            .map(|w| w.substitute(&self.inverse_images))
            .eq(id.images.iter().cloned())
            && self
                .inverse_images
                .iter()
                .map(|w| w.substitute(&self.images))
                .eq(id.images.iter().cloned())
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(k, w)| w.letters() == [(k + 1) as i32])
    }
}

/// The automorphism of `F_n` induced by a braid word, letters applied in word
/// order.
pub fn artin_action(w: &BraidWord) -> FreeAutomorphism {
    let rank = w.strands();
    let mut images: Vec<FreeWord> = (1..=rank).map(FreeWord::generator).collect();
    let mut inverse_images = images.clone();
    for &l in w.letters() {
        let step = FreeAutomorphism::of_letter(rank, l);
        // Letter-by-letter substitution into the running images.
        images = images.iter().map(|img| step.apply(img)).collect();
        inverse_images = step
            .inverse_images
            .iter()
            .map(|img| img.substitute(&inverse_images))
            .collect();
    }
    FreeAutomorphism {
        images,
        inverse_images,
    }
}

/// Decides whether two braid words represent the same element of `B_n`.
pub fn equal_in_group(a: &BraidWord, b: &BraidWord) -> Result<bool> {
    if a.strands() != b.strands() {
        return Err(Error::StrandCountMismatch {
            left: a.strands(),
            right: b.strands(),
        });
    }
    Ok(artin_action(a).images == artin_action(b).images)
}

/// Whether `w` is the identity of `B_n`.
pub fn is_trivial(w: &BraidWord) -> bool {
    artin_action(w).is_identity()
}
