//! The flips `r_i`, the subgroup `R` they generate, and the quotient `B_3/R`.
//!
//! `B_3/R` has twelve elements. The pair (permutation, exponent sum mod 4) is a
//! complete invariant for it: the exponent sum descends to `Z_4` because every
//! flip has exponent sum 4 and the braid relation is balanced, and the pure
//! part `P_3/R` is `Z_2` with `σ1²` as its nontrivial element. Completeness is
//! also checked constructively by [`crate::certificate`], which rewrites every
//! word to the canonical representative of its class.

use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::artin::equal_in_group;
use crate::braid::{BraidWord, Letter, Permutation};
use crate::error::{Error, Result};

/// The flip word `r_i` on `n` strands: strand `i` passed over and around the
/// ball. Exponent sum `2n - 2`.
pub fn flip(i: usize, n: usize) -> Result<BraidWord> {
    if n < 3 || i < 1 || i > n {
        return Err(Error::InvalidIndex { i, n });
    }
    // σ_{i-1} ⋯ σ2 σ1² σ2 ⋯ σ_{n-1}² ⋯ σ_i; for i = 1 the descending prefix
    // is empty and for i = n the tail is.
    let mut letters = Vec::with_capacity(2 * n - 2);
    letters.extend((1..i).rev().map(Letter::pos));
    letters.extend((1..n).map(Letter::pos));
    letters.extend((i..n).rev().map(Letter::pos));
    BraidWord::from_letters(n, letters)
}

/// All flips `r_1, …, r_n`.
pub fn flips(n: usize) -> Result<Vec<BraidWord>> {
    (1..=n).map(|i| flip(i, n)).collect()
}

/// The full twist `(σ_{n-1} ⋯ σ1)^n`.
pub fn full_twist(n: usize) -> Result<BraidWord> {
    if n < 2 {
        return Err(Error::TooFewStrands(n));
    }
    let cycle: Vec<Letter> = (1..n).rev().map(Letter::pos).collect();
    BraidWord::from_letters(n, cycle.repeat(n))
}

/// One of the two homotopy classes of closed paths in SO(3), as an element of
/// `Z_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HomotopyClass {
    Trivial,
    Nontrivial,
}

impl HomotopyClass {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            HomotopyClass::Nontrivial
        } else {
            HomotopyClass::Trivial
        }
    }

    pub fn is_trivial(self) -> bool {
        self == HomotopyClass::Trivial
    }
}

impl Add for HomotopyClass {
    type Output = HomotopyClass;

    fn add(self, rhs: Self) -> Self {
        HomotopyClass::from_parity(
            (self == HomotopyClass::Nontrivial) ^ (rhs == HomotopyClass::Nontrivial),
        )
    }
}

impl fmt::Display for HomotopyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HomotopyClass::Trivial => "trivial",
            HomotopyClass::Nontrivial => "nontrivial",
        })
    }
}

/// An element of `B_3/R`, identified by its complete invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SphereBraidClass {
    pub perm: Permutation,
    pub esum_mod4: u8,
}

impl SphereBraidClass {
    pub fn new(perm: Permutation, esum_mod4: u8) -> Result<Self> {
        let parity = perm.parity();
        if perm.len() != 3 || esum_mod4 > 3 || esum_mod4 % 2 != parity {
            return Err(Error::InvalidClass {
                parity,
                esum: esum_mod4,
            });
        }
        Ok(SphereBraidClass { perm, esum_mod4 })
    }

    pub fn is_pure(&self) -> bool {
        self.perm.is_identity()
    }

    /// All twelve classes of `B_3/R`.
    pub fn all() -> Vec<SphereBraidClass> {
        let perms = [
            [1, 2, 3],
            [2, 1, 3],
            [1, 3, 2],
            [3, 2, 1],
            [2, 3, 1],
            [3, 1, 2],
        ];
        let mut out = Vec::with_capacity(12);
        for p in perms {
            let perm = Permutation::from_images(p.to_vec()).expect("valid permutation");
            let parity = perm.parity();
            for e in [parity, parity + 2] {
                out.push(SphereBraidClass {
                    perm: perm.clone(),
                    esum_mod4: e,
                });
            }
        }
        out
    }
}

impl fmt::Display for SphereBraidClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.perm, self.esum_mod4)
    }
}

fn require_three(w: &BraidWord) -> Result<()> {
    if w.strands() != 3 {
        return Err(Error::UnsupportedStrandCount {
            got: w.strands(),
            supported: "3",
        });
    }
    Ok(())
}

/// The class of `w` in `B_3/R`.
pub fn sphere_class(w: &BraidWord) -> Result<SphereBraidClass> {
    require_three(w)?;
    Ok(SphereBraidClass {
        perm: w.permutation(),
        esum_mod4: w.exponent_sum().rem_euclid(4) as u8,
    })
}

/// The `Z_2` class of a pure three-strand braid in `P_3/R`.
pub fn z2_class(w: &BraidWord) -> Result<HomotopyClass> {
    require_three(w)?;
    if !w.is_pure() {
        return Err(Error::NotPure);
    }
    match w.exponent_sum().rem_euclid(4) {
        0 => Ok(HomotopyClass::Trivial),
        2 => Ok(HomotopyClass::Nontrivial),
        // a pure word has even exponent sum
        r => unreachable!("pure word with exponent sum {r} mod 4"),
    }
}

/// The shortest word of a class, ties broken lexicographically with
/// `σ1 < σ1⁻¹ < σ2 < σ2⁻¹`. Pure classes map to the empty word and `σ1²`.
pub fn canonical_rep(c: &SphereBraidClass) -> Result<BraidWord> {
    let c = SphereBraidClass::new(c.perm.clone(), c.esum_mod4)?;
    let alphabet = [
        Letter::pos(1),
        Letter::neg(1),
        Letter::pos(2),
        Letter::neg(2),
    ];
    // every class has a representative of length at most 3
    for len in 0..=3u32 {
        for code in 0..4usize.pow(len) {
            let mut letters = Vec::with_capacity(len as usize);
            let mut rest = code;
            for _ in 0..len {
                letters.push(alphabet[rest % 4]);
                rest /= 4;
            }
            letters.reverse();
            let w = BraidWord::from_letters(3, letters)?;
            if sphere_class(&w)? == c {
                return Ok(w);
            }
        }
    }
    unreachable!("every class of B3/R has a representative of length <= 3")
}

/// One row of a conjugation table: every expression must be equal in `B_n`.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub label: String,
    pub expressions: Vec<BraidWord>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub n: usize,
    pub entries: Vec<IdentityCheck>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.holds)
    }

    pub fn count_passed(&self) -> usize {
        self.entries.iter().filter(|e| e.holds).count()
    }
}

/// A tiny expression language over `s1, S1 (= s1⁻¹), r2, R2 (= r2⁻¹)` used to
/// write the conjugation tables legibly.
fn expr(n: usize, text: &str) -> BraidWord {
    let mut out = BraidWord::identity(n);
    for tok in text.split_whitespace() {
        let (kind, rest) = tok.split_at(1);
        let k: usize = rest.parse().expect("index in table expression");
        let w = match kind {
            "s" => BraidWord::generator(n, k).unwrap(),
            "S" => BraidWord::generator(n, k).unwrap().inverse(),
            "r" => flip(k, n).unwrap(),
            "R" => flip(k, n).unwrap().inverse(),
            _ => panic!("bad token {tok}"),
        };
        out = out.compose(&w).unwrap();
    }
    out
}

fn check(n: usize, label: String, exprs: &[String]) -> IdentityCheck {
    let expressions: Vec<BraidWord> = exprs.iter().map(|e| expr(n, e)).collect();
    let holds = expressions
        .windows(2)
        .all(|p| equal_in_group(&p[0], &p[1]).unwrap_or(false));
    IdentityCheck {
        label,
        expressions,
        holds,
    }
}

/// The ten cells of the three-strand conjugation table.
fn three_strand_table() -> Vec<IdentityCheck> {
    let rows: [&[&str]; 10] = [
        &["s1 r1 S1", "r2"],
        &["s2 r1 S2", "S2 r1 s2", "r1"],
        &["s1 r2 S1", "r2 r1 R2"],
        &["s2 r2 S2", "r3"],
        &["s1 r3 S1", "S1 r3 s1", "r3"],
        &["s2 r3 S2", "R1 r2 r1", "r3 r2 R3"],
        &["S1 r1 s1", "R1 r2 r1"],
        &["S1 r2 s1", "r1"],
        &["S2 r2 s2", "r1 r3 R1", "R2 r3 r2"],
        &["S2 r3 s2", "r2"],
    ];
    rows.iter()
        .map(|row| {
            let exprs: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            check(3, pretty(&exprs), &exprs)
        })
        .collect()
}

fn pretty(exprs: &[String]) -> String {
    exprs
        .iter()
        .map(|e| {
            e.split_whitespace()
                .map(|tok| {
                    let (kind, k) = tok.split_at(1);
                    match kind {
                        "s" => format!("σ{k}"),
                        "S" => format!("σ{k}⁻¹"),
                        "r" => format!("r{k}"),
                        _ => format!("r{k}⁻¹"),
                    }
                })
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join(" = ")
}

/// The five conjugation families for general `n`.
fn general_table(n: usize) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    let mut push = |exprs: Vec<String>| {
        let label = pretty(&exprs);
        out.push(check(n, label, &exprs));
    };
    for i in 1..=n {
        for j in 1..n {
            if i as i64 - j as i64 > 1 || j > i {
                push(vec![
                    format!("s{j} r{i} S{j}"),
                    format!("S{j} r{i} s{j}"),
                    format!("r{i}"),
                ]);
            }
        }
        if i >= 2 {
            let h = i - 1;
            push(vec![format!("s{h} r{i} S{h}"), format!("r{i} r{h} R{i}")]);
            push(vec![format!("S{h} r{i} s{h}"), format!("r{h}")]);
        }
        if i < n {
            let k = i + 1;
            push(vec![format!("s{i} r{i} S{i}"), format!("r{k}")]);
            push(vec![format!("S{i} r{i} s{i}"), format!("R{i} r{k} r{i}")]);
        }
    }
    out
}

/// Checks the conjugation identities showing that `R` is normal in `B_n`.
/// For `n = 3` this is the ten-cell table; for larger `n` the five general
/// families instantiated at every admissible index.
pub fn verify_lemma1(n: usize) -> Result<LemmaReport> {
    if !(3..=7).contains(&n) {
        return Err(Error::UnsupportedStrandCount {
            got: n,
            supported: "3..=7",
        });
    }
    let entries = if n == 3 {
        three_strand_table()
    } else {
        general_table(n)
    };
    Ok(LemmaReport { n, entries })
}

/// The general families evaluated at any `n` in `3..=7`, including `n = 3`.
pub fn verify_lemma1_general(n: usize) -> Result<LemmaReport> {
    if !(3..=7).contains(&n) {
        return Err(Error::UnsupportedStrandCount {
            got: n,
            supported: "3..=7",
        });
    }
    Ok(LemmaReport {
        n,
        entries: general_table(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[i32]) -> BraidWord {
        BraidWord::new(3, s).unwrap()
    }

    #[test]
    fn flip_examples() {
        assert_eq!(flip(1, 3).unwrap(), w(&[1, 2, 2, 1]));
        assert_eq!(flip(2, 3).unwrap(), w(&[1, 1, 2, 2]));
        assert_eq!(flip(3, 3).unwrap(), w(&[2, 1, 1, 2]));
        assert_eq!(
            flip(4, 4).unwrap(),
            BraidWord::new(4, &[3, 2, 1, 1, 2, 3]).unwrap()
        );
        assert_eq!(
            flip(1, 4).unwrap(),
            BraidWord::new(4, &[1, 2, 3, 3, 2, 1]).unwrap()
        );
        assert_eq!(
            flip(2, 4).unwrap(),
            BraidWord::new(4, &[1, 1, 2, 3, 3, 2]).unwrap()
        );
        assert_eq!(
            flip(3, 4).unwrap(),
            BraidWord::new(4, &[2, 1, 1, 2, 3, 3]).unwrap()
        );
        assert!(matches!(flip(0, 3), Err(Error::InvalidIndex { .. })));
        assert!(matches!(flip(4, 3), Err(Error::InvalidIndex { .. })));
        assert!(flip(1, 2).is_err());
    }

    #[test]
    fn flips_are_pure_with_sum_2n_minus_2() {
        for n in 3..=7 {
            for i in 1..=n {
                let r = flip(i, n).unwrap();
                assert!(r.is_pure(), "r{i} at n={n}");
                assert_eq!(r.exponent_sum(), 2 * n as i64 - 2);
            }
        }
    }

    #[test]
    fn full_twist_examples() {
        assert_eq!(full_twist(3).unwrap(), w(&[2, 1, 2, 1, 2, 1]));
        assert_eq!(full_twist(2).unwrap(), BraidWord::new(2, &[1, 1]).unwrap());
        assert_eq!(full_twist(4).unwrap().exponent_sum(), 12);
        for n in 2..=7 {
            let d = full_twist(n).unwrap();
            assert!(d.is_pure());
            assert_eq!(d.exponent_sum(), (n * (n - 1)) as i64);
        }
    }

    #[test]
    fn sphere_class_examples() {
        let id = Permutation::identity(3);
        assert_eq!(
            sphere_class(&w(&[1, 2, 2, 1])).unwrap(),
            SphereBraidClass::new(id.clone(), 0).unwrap()
        );
        assert_eq!(
            sphere_class(&w(&[1, 1])).unwrap(),
            SphereBraidClass::new(id.clone(), 2).unwrap()
        );
        assert_eq!(
            sphere_class(&full_twist(3).unwrap()).unwrap(),
            SphereBraidClass::new(id, 2).unwrap()
        );
        assert!(matches!(
            sphere_class(&BraidWord::new(4, &[1]).unwrap()),
            Err(Error::UnsupportedStrandCount { got: 4, .. })
        ));
    }

    #[test]
    fn z2_examples() {
        assert_eq!(z2_class(&w(&[1, 1, 1, 1])).unwrap(), HomotopyClass::Trivial);
        assert_eq!(
            z2_class(&w(&[2, 1, 1, -2])).unwrap(),
            HomotopyClass::Nontrivial
        );
        assert_eq!(z2_class(&w(&[])).unwrap(), HomotopyClass::Trivial);
        assert!(matches!(z2_class(&w(&[1])), Err(Error::NotPure)));
        assert!(z2_class(&BraidWord::new(4, &[]).unwrap()).is_err());
    }

    #[test]
    fn z2_group_law() {
        use HomotopyClass::*;
        assert_eq!(Trivial + Trivial, Trivial);
        assert_eq!(Trivial + Nontrivial, Nontrivial);
        assert_eq!(Nontrivial + Nontrivial, Trivial);
    }

    #[test]
    fn canonical_rep_examples() {
        let id = Permutation::identity(3);
        assert_eq!(
            canonical_rep(&SphereBraidClass::new(id.clone(), 0).unwrap()).unwrap(),
            w(&[])
        );
        assert_eq!(
            canonical_rep(&SphereBraidClass::new(id.clone(), 2).unwrap()).unwrap(),
            w(&[1, 1])
        );
        let swap = Permutation::from_images(vec![2, 1, 3]).unwrap();
        assert_eq!(
            canonical_rep(&SphereBraidClass::new(swap.clone(), 1).unwrap()).unwrap(),
            w(&[1])
        );
        let bad = SphereBraidClass {
            perm: swap,
            esum_mod4: 2,
        };
        assert!(matches!(
            canonical_rep(&bad),
            Err(Error::InvalidClass { .. })
        ));
        let bad = SphereBraidClass {
            perm: id,
            esum_mod4: 1,
        };
        assert!(canonical_rep(&bad).is_err());
    }

    #[test]
    fn canonical_reps_cover_all_twelve_classes() {
        let all = SphereBraidClass::all();
        assert_eq!(all.len(), 12);
        for c in &all {
            let rep = canonical_rep(c).unwrap();
            assert_eq!(&sphere_class(&rep).unwrap(), c);
            assert!(rep.len() <= 3);
        }
    }

    /// Brute force: the length-≤2 words realize exactly the classes whose
    /// canonical representative has length ≤ 2, with the same shortest word.
    #[test]
    fn canonical_rep_matches_enumeration() {
        let alphabet = [1, -1, 2, -2];
        let mut words = vec![vec![]];
        for a in alphabet {
            words.push(vec![a]);
        }
        for a in alphabet {
            for b in alphabet {
                words.push(vec![a, b]);
            }
        }
        for c in SphereBraidClass::all() {
            let first = words
                .iter()
                .map(|s| w(s))
                .find(|x| sphere_class(x).unwrap() == c);
            let rep = canonical_rep(&c).unwrap();
            match first {
                Some(x) => assert_eq!(x, rep),
                None => assert_eq!(rep.len(), 3),
            }
        }
    }

    #[test]
    fn three_strand_table_holds() {
        let report = verify_lemma1(3).unwrap();
        assert_eq!(report.entries.len(), 10);
        for e in &report.entries {
            assert!(e.holds, "{}", e.label);
        }
        assert_eq!(report.entries[2].label, "σ1r2σ1⁻¹ = r2r1r2⁻¹");
    }

    #[test]
    fn general_families_hold() {
        for n in 3..=5 {
            let report = verify_lemma1(n).unwrap();
            assert!(report.passed(), "n = {n}");
        }
        assert!(verify_lemma1(2).is_err());
        assert!(verify_lemma1(8).is_err());
    }

    #[test]
    fn wrong_identity_is_rejected() {
        let bad = check(3, "bad".into(), &["s1 r1 S1".into(), "r1".into()]);
        assert!(!bad.holds);
    }
}
