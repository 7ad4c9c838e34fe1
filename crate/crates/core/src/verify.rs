//! Verification suites: conjugation tables checked exactly, and rewriting
//! identities in `B_n/R` checked by certificate search.

use serde::Serialize;

use crate::braid::BraidWord;
use crate::certificate::{Certificate, Certifier, Move, SearchBudget, SearchOutcome};
use crate::error::{Error, Result};
use crate::quotient::{flip, full_twist, verify_lemma1, LemmaReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Failed,
    Certified,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteEntry {
    pub label: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expressions: Option<Vec<Vec<i32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub target: String,
    pub n: usize,
    pub passed: usize,
    pub total: usize,
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    fn new(target: &str, n: usize, entries: Vec<SuiteEntry>) -> Self {
        let passed = entries
            .iter()
            .filter(|e| matches!(e.status, Status::Verified | Status::Certified))
            .count();
        SuiteReport {
            target: target.into(),
            n,
            passed,
            total: entries.len(),
            entries,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }

    /// True when nothing failed outright but some search gave up.
    pub fn is_inconclusive(&self) -> bool {
        !self.entries.iter().any(|e| e.status == Status::Failed)
            && self
                .entries
                .iter()
                .any(|e| e.status == Status::Inconclusive)
    }
}

impl From<LemmaReport> for SuiteReport {
    fn from(r: LemmaReport) -> Self {
        let entries = r
            .entries
            .into_iter()
            .map(|e| SuiteEntry {
                label: e.label,
                status: if e.holds {
                    Status::Verified
                } else {
                    Status::Failed
                },
                expressions: Some(e.expressions.iter().map(BraidWord::to_signed).collect()),
                certificate: None,
                detail: None,
            })
            .collect();
        SuiteReport::new("lemma1", r.n, entries)
    }
}

/// The three-strand conjugation table.
pub fn lemma1() -> Result<SuiteReport> {
    Ok(SuiteReport::from(verify_lemma1(3)?))
}

/// The general conjugation families at `n` strands.
pub fn lemma1_general(n: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::from(crate::quotient::verify_lemma1_general(n)?);
    r.target = "lemma1p".into();
    Ok(r)
}

fn certified_entry(label: String, outcome: SearchOutcome) -> SuiteEntry {
    match outcome {
        SearchOutcome::Certified(c) => SuiteEntry {
            label,
            status: Status::Certified,
            expressions: None,
            detail: Some(format!("{} moves", c.len())),
            certificate: Some(c),
        },
        SearchOutcome::Inconclusive { explored, reason } => SuiteEntry {
            label,
            status: Status::Inconclusive,
            expressions: None,
            certificate: None,
            detail: Some(format!("{reason} ({explored} states)")),
        },
    }
}

fn w3(letters: &[i32]) -> BraidWord {
    BraidWord::new(3, letters).expect("three-strand literal")
}

/// Identities that hold in `P_3/R` (and around it in `B_3/R`): `σ1⁴` and
/// `σ2⁴` are trivial and all four squares coincide.
pub fn prop1(budget: SearchBudget) -> Result<SuiteReport> {
    let pairs: [(&str, &[i32], &[i32]); 9] = [
        ("σ1σ2² = σ1⁻¹", &[1, 2, 2], &[-1]),
        ("σ1⁻¹ = σ2²σ1", &[-1], &[2, 2, 1]),
        ("σ2σ1² = σ2⁻¹", &[2, 1, 1], &[-2]),
        ("σ2⁻¹ = σ1²σ2", &[-2], &[1, 1, 2]),
        ("σ1⁴ = 1", &[1, 1, 1, 1], &[]),
        ("σ2⁴ = 1", &[2, 2, 2, 2], &[]),
        ("σ1² = σ1⁻²", &[1, 1], &[-1, -1]),
        ("σ1⁻² = σ2²", &[-1, -1], &[2, 2]),
        ("σ2² = σ2⁻²", &[2, 2], &[-2, -2]),
    ];
    let mut certifier = Certifier::new(3, budget)?;
    let mut entries = Vec::new();
    for (label, a, b) in pairs {
        let outcome = certifier.certify_equal(&w3(a), &w3(b))?;
        entries.push(certified_entry(label.to_string(), outcome));
    }
    Ok(SuiteReport::new("prop1", 3, entries))
}

/// Membership of the squared full twist in `R`.
pub fn prop1_general(n: usize, budget: SearchBudget) -> Result<SuiteReport> {
    if !(3..=4).contains(&n) {
        return Err(Error::UnsupportedStrandCount {
            got: n,
            supported: "3 or 4",
        });
    }
    let outcome = twist_square_in_r(n, budget)?;
    Ok(SuiteReport::new(
        "prop1p",
        n,
        vec![certified_entry("d² ∈ R".into(), outcome)],
    ))
}

/// `(σ_hi ⋯ σ_lo)^(hi - lo + 2)`: the full twist of strands `lo..=hi+1`.
fn partial_twist(n: usize, lo: usize, hi: usize) -> Result<BraidWord> {
    let cycle: Vec<i32> = (lo..=hi).rev().map(|k| k as i32).collect();
    BraidWord::new(n, &cycle.repeat(hi - lo + 2))
}

/// Certificate search for `d² ∈ R`.
///
/// Beyond three strands a blind search is hopeless at this length, so the
/// word is split first. With `D` the twist of strands `1..n-1` and `E` that
/// of `2..n`, one has `d = D·r_n = r_1·E` by braid relations alone. Then
/// `d² → D r_n r_1 E → D E`, and only the much shorter `D E` is left to the
/// search. Each piece is found by search and the result is replayed whole.
pub fn twist_square_in_r(n: usize, budget: SearchBudget) -> Result<SearchOutcome> {
    let d = full_twist(n)?;
    let d2 = d.pow(2);
    if n == 3 {
        return Certifier::new(n, budget)?.certify_in_r(&d2);
    }
    let head = partial_twist(n, 1, n - 2)?;
    let tail = partial_twist(n, 2, n - 1)?;
    let r_first = flip(1, n)?;
    let r_last = flip(n, n)?;
    let exact = SearchBudget {
        length_slack: 0,
        ..budget
    };
    let mut positive = Certifier::new(n, exact)?;
    let left = head.compose(&r_last)?;
    let right = r_first.compose(&tail)?;
    let mut moves = Vec::new();
    for (k, target) in [&left, &right].into_iter().enumerate() {
        match positive.certify_equal(&d, target)? {
            SearchOutcome::Certified(c) => {
                moves.extend(c.moves.iter().map(|m| m.shifted(k * d.len())))
            }
            inconclusive => return Ok(inconclusive),
        }
    }
    let at = head.len();
    moves.push(Move::FlipDelete {
        pos: at,
        flip: n,
        sign: 1,
    });
    moves.push(Move::FlipDelete {
        pos: at,
        flip: 1,
        sign: 1,
    });
    let rest = head.compose(&tail)?;
    match Certifier::new(n, budget)?.certify_in_r(&rest)? {
        SearchOutcome::Certified(c) => moves.extend(c.moves),
        inconclusive => return Ok(inconclusive),
    }
    let cert = Certificate::new(d2, moves)?;
    if !cert.replay()?.is_empty() {
        return Err(Error::EndMismatch {
            got: cert.replay()?.to_string(),
            expected: String::new(),
        });
    }
    Ok(SearchOutcome::Certified(cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_suite() {
        let r = lemma1().unwrap();
        assert_eq!((r.passed, r.total), (10, 10));
        assert!(r.all_passed());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["entries"][0]["status"], "verified");
        assert_eq!(lemma1_general(5).unwrap().target, "lemma1p");
    }

    #[test]
    fn prop1_suite() {
        let r = prop1(SearchBudget::default()).unwrap();
        assert!(r.all_passed(), "{r:?}");
        for e in &r.entries {
            assert!(e.certificate.as_ref().unwrap().replay().is_ok());
        }
    }

    #[test]
    fn prop1p_three_strands() {
        let r = prop1_general(3, SearchBudget::default()).unwrap();
        assert!(r.all_passed());
        assert!(prop1_general(5, SearchBudget::default()).is_err());
    }

    #[test]
    fn prop1p_four_strands() {
        let r = prop1_general(4, SearchBudget::default()).unwrap();
        assert!(r.all_passed(), "{r:?}");
        let cert = r.entries[0].certificate.as_ref().unwrap();
        assert_eq!(cert.start, full_twist(4).unwrap().pow(2));
        assert!(cert.replay().unwrap().is_empty());
    }

    #[test]
    fn partial_twists() {
        assert_eq!(
            partial_twist(4, 1, 2).unwrap().to_signed(),
            [2, 1, 2, 1, 2, 1]
        );
        assert_eq!(
            partial_twist(4, 2, 3).unwrap().to_signed(),
            [3, 2, 3, 2, 3, 2]
        );
    }
}
