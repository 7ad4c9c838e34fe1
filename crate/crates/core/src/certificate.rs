//! Machine-checkable rewriting certificates for equality modulo the flips.
//!
//! A certificate is a start word plus a list of elementary moves. Each move is
//! a free insertion or cancellation, one application of the braid relation, or
//! the insertion/deletion of a flip `r_i^{±1}`. Replaying the moves is the
//! only thing a checker needs to trust.
//!
//! The search works in two layers. A bidirectional breadth-first search over
//! the move graph finds short certificates between small words. For three
//! strands, long words are rewritten window by window: every four-letter
//! prefix is replaced by the canonical representative of its class using a
//! cached search result, which shrinks the word until it is canonical. Two
//! words are then joined through their common canonical form.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::braid::{BraidWord, Letter};
use crate::error::{Error, Result};
use crate::quotient::{canonical_rep, flip, sphere_class};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArtinDir {
    /// `σ_{i+1} σ_i σ_{i+1} → σ_i σ_{i+1} σ_i`
    LtoR,
    /// `σ_i σ_{i+1} σ_i → σ_{i+1} σ_i σ_{i+1}`
    RtoL,
}

impl ArtinDir {
    pub fn reversed(self) -> Self {
        match self {
            ArtinDir::LtoR => ArtinDir::RtoL,
            ArtinDir::RtoL => ArtinDir::LtoR,
        }
    }
}

/// One elementary rewriting step. Positions are 0-based letter offsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum Move {
    /// Insert `σ_index^sign σ_index^-sign` before position `pos`.
    FreeInsert { pos: usize, index: usize, sign: i8 },
    /// Remove the inverse pair at `pos, pos+1`.
    FreeCancel { pos: usize },
    /// Apply the braid relation to the three letters starting at `pos`. All
    /// three letters share a sign.
    ArtinReplace { pos: usize, dir: ArtinDir },
    /// Insert `r_flip^sign` before position `pos`.
    FlipInsert { pos: usize, flip: usize, sign: i8 },
    /// Remove an occurrence of `r_flip^sign` starting at `pos`.
    FlipDelete { pos: usize, flip: usize, sign: i8 },
    /// Swap two far-apart generators (`|i - j| ≥ 2`); only exists for `n ≥ 4`.
    Commute { pos: usize },
}

impl Move {
    pub fn shifted(self, offset: usize) -> Move {
        match self {
            Move::FreeInsert { pos, index, sign } => Move::FreeInsert {
                pos: pos + offset,
                index,
                sign,
            },
            Move::FreeCancel { pos } => Move::FreeCancel { pos: pos + offset },
            Move::ArtinReplace { pos, dir } => Move::ArtinReplace {
                pos: pos + offset,
                dir,
            },
            Move::FlipInsert { pos, flip, sign } => Move::FlipInsert {
                pos: pos + offset,
                flip,
                sign,
            },
            Move::FlipDelete { pos, flip, sign } => Move::FlipDelete {
                pos: pos + offset,
                flip,
                sign,
            },
            Move::Commute { pos } => Move::Commute { pos: pos + offset },
        }
    }

    /// The move undoing `self`, given the word `self` was applied to.
    pub fn inverse_on(self, before: &[Letter]) -> Move {
        match self {
            Move::FreeInsert { pos, .. } => Move::FreeCancel { pos },
            Move::FreeCancel { pos } => Move::FreeInsert {
                pos,
                index: before[pos].index(),
                sign: before[pos].sign(),
            },
            Move::ArtinReplace { pos, dir } => Move::ArtinReplace {
                pos,
                dir: dir.reversed(),
            },
            Move::FlipInsert { pos, flip, sign } => Move::FlipDelete { pos, flip, sign },
            Move::FlipDelete { pos, flip, sign } => Move::FlipInsert { pos, flip, sign },
            Move::Commute { pos } => Move::Commute { pos },
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::FreeInsert { pos, index, sign } => {
                write!(f, "FreeInsert@{pos} σ{index}^{sign:+}")
            }
            Move::FreeCancel { pos } => write!(f, "FreeCancel@{pos}"),
            Move::ArtinReplace { pos, dir } => write!(f, "ArtinReplace@{pos} {dir:?}"),
            Move::FlipInsert { pos, flip, sign } => write!(f, "FlipInsert@{pos} r{flip}^{sign:+}"),
            Move::FlipDelete { pos, flip, sign } => write!(f, "FlipDelete@{pos} r{flip}^{sign:+}"),
            Move::Commute { pos } => write!(f, "Commute@{pos}"),
        }
    }
}

/// Flip words `r_i^{±1}` for a fixed strand count, indexed by `(i, sign)`.
#[derive(Clone, Debug)]
pub struct FlipTable {
    strands: usize,
    positive: Vec<Vec<Letter>>,
    negative: Vec<Vec<Letter>>,
}

impl FlipTable {
    pub fn new(strands: usize) -> Result<Self> {
        let mut positive = Vec::with_capacity(strands);
        let mut negative = Vec::with_capacity(strands);
        for i in 1..=strands {
            let r = flip(i, strands)?;
            negative.push(r.inverse().into_letters());
            positive.push(r.into_letters());
        }
        Ok(FlipTable {
            strands,
            positive,
            negative,
        })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    fn word(&self, i: usize, sign: i8) -> Option<&[Letter]> {
        if i == 0 || i > self.strands {
            return None;
        }
        match sign {
            1 => Some(&self.positive[i - 1]),
            -1 => Some(&self.negative[i - 1]),
            _ => None,
        }
    }

    fn flip_len(&self) -> usize {
        2 * self.strands - 2
    }
}

/// Applies one move in place, or explains why it is illegal.
pub fn apply_move(
    word: &mut Vec<Letter>,
    mv: Move,
    flips: &FlipTable,
) -> std::result::Result<(), String> {
    let n = flips.strands();
    let len = word.len();
    match mv {
        Move::FreeInsert { pos, index, sign } => {
            if pos > len {
                return Err(format!("position {pos} beyond word length {len}"));
            }
            if index == 0 || index >= n || (sign != 1 && sign != -1) {
                return Err(format!("bad generator σ{index}^{sign}"));
            }
            let l = Letter::new(index, sign > 0);
            word.splice(pos..pos, [l, l.inverse()]);
        }
        Move::FreeCancel { pos } => {
            if pos + 2 > len {
                return Err(format!("no letter pair at {pos}"));
            }
            if word[pos] != word[pos + 1].inverse() {
                return Err(format!("letters at {pos} are not an inverse pair"));
            }
            word.drain(pos..pos + 2);
        }
        Move::ArtinReplace { pos, dir } => {
            if pos + 3 > len {
                return Err(format!("no letter triple at {pos}"));
            }
            let (a, b, c) = (word[pos], word[pos + 1], word[pos + 2]);
            if a != c || a.sign() != b.sign() {
                return Err(format!(
                    "letters at {pos} do not form a braid relation side"
                ));
            }
            let ok = match dir {
                ArtinDir::LtoR => a.index() == b.index() + 1,
                ArtinDir::RtoL => a.index() + 1 == b.index(),
            };
            if !ok {
                return Err(format!("letters at {pos} do not match direction {dir:?}"));
            }
            word[pos] = b;
            word[pos + 1] = a;
            word[pos + 2] = b;
        }
        Move::FlipInsert { pos, flip, sign } => {
            if pos > len {
                return Err(format!("position {pos} beyond word length {len}"));
            }
            let r = flips
                .word(flip, sign)
                .ok_or_else(|| format!("no flip r{flip}^{sign} on {n} strands"))?;
            word.splice(pos..pos, r.iter().copied());
        }
        Move::FlipDelete { pos, flip, sign } => {
            let r = flips
                .word(flip, sign)
                .ok_or_else(|| format!("no flip r{flip}^{sign} on {n} strands"))?;
            if pos + r.len() > len || word[pos..pos + r.len()] != *r {
                return Err(format!("no r{flip}^{sign} at position {pos}"));
            }
            word.drain(pos..pos + r.len());
        }
        Move::Commute { pos } => {
            if pos + 2 > len {
                return Err(format!("no letter pair at {pos}"));
            }
            if word[pos].index().abs_diff(word[pos + 1].index()) < 2 {
                return Err(format!("letters at {pos} do not commute"));
            }
            word.swap(pos, pos + 1);
        }
    }
    Ok(())
}

/// Every legal move on `word` whose result has at most `max_len` letters,
/// length-decreasing moves first.
pub fn legal_moves(word: &[Letter], flips: &FlipTable, max_len: usize) -> Vec<Move> {
    let n = flips.strands();
    let len = word.len();
    let mut out = Vec::new();

    for pos in 0..len {
        for i in 1..=n {
            for sign in [1i8, -1] {
                let r = flips.word(i, sign).expect("flip in table");
                if word[pos..].starts_with(r) {
                    out.push(Move::FlipDelete { pos, flip: i, sign });
                }
            }
        }
    }
    for pos in 0..len.saturating_sub(1) {
        if word[pos] == word[pos + 1].inverse() {
            out.push(Move::FreeCancel { pos });
        }
    }
    for pos in 0..len.saturating_sub(2) {
        let (a, b, c) = (word[pos], word[pos + 1], word[pos + 2]);
        if a == c && a.sign() == b.sign() {
            if a.index() == b.index() + 1 {
                out.push(Move::ArtinReplace {
                    pos,
                    dir: ArtinDir::LtoR,
                });
            } else if a.index() + 1 == b.index() {
                out.push(Move::ArtinReplace {
                    pos,
                    dir: ArtinDir::RtoL,
                });
            }
        }
    }
    if n >= 4 {
        for pos in 0..len.saturating_sub(1) {
            if word[pos].index().abs_diff(word[pos + 1].index()) >= 2 {
                out.push(Move::Commute { pos });
            }
        }
    }
    if len + 2 <= max_len {
        for pos in 0..=len {
            for index in 1..n {
                for sign in [1i8, -1] {
                    out.push(Move::FreeInsert { pos, index, sign });
                }
            }
        }
    }
    if len + flips.flip_len() <= max_len {
        for pos in 0..=len {
            for flip in 1..=n {
                for sign in [1i8, -1] {
                    out.push(Move::FlipInsert { pos, flip, sign });
                }
            }
        }
    }
    out
}

/// A replayable witness that `start` and the replay result are equal modulo
/// the flips.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub start: BraidWord,
    pub moves: Vec<Move>,
    /// Claimed end word; checked on replay when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<BraidWord>,
}

impl Certificate {
    pub fn new(start: BraidWord, moves: Vec<Move>) -> Result<Self> {
        let mut cert = Certificate {
            start,
            moves,
            end: None,
        };
        cert.end = Some(cert.replay()?);
        Ok(cert)
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Every intermediate word, starting with `start`.
    pub fn trace(&self) -> Result<Vec<BraidWord>> {
        let n = self.start.strands();
        let flips = FlipTable::new(n)?;
        let mut word = self.start.letters().to_vec();
        let mut out = vec![self.start.clone()];
        for (step, &mv) in self.moves.iter().enumerate() {
            apply_move(&mut word, mv, &flips)
                .map_err(|reason| Error::IllegalMove { step, reason })?;
            out.push(BraidWord::from_letters(n, word.clone())?);
        }
        if let Some(end) = &self.end {
            let got = out.last().expect("nonempty trace");
            if got != end {
                return Err(Error::EndMismatch {
                    got: got.to_string(),
                    expected: end.to_string(),
                });
            }
        }
        Ok(out)
    }

    /// Replays the moves and returns the final word.
    pub fn replay(&self) -> Result<BraidWord> {
        Ok(self.trace()?.pop().expect("nonempty trace"))
    }

    /// Checks that the certificate transforms `from` into `to`, letter-exact.
    pub fn proves(&self, from: &BraidWord, to: &BraidWord) -> bool {
        &self.start == from && self.replay().is_ok_and(|end| &end == to)
    }

    /// The certificate running backwards, from the end word to `start`.
    pub fn reversed(&self) -> Result<Certificate> {
        let trace = self.trace()?;
        let moves = self
            .moves
            .iter()
            .zip(&trace)
            .rev()
            .map(|(mv, before)| mv.inverse_on(before.letters()))
            .collect();
        Certificate::new(trace.last().expect("nonempty trace").clone(), moves)
    }

    /// Appends `next`, which must start where `self` ends.
    pub fn then(&self, next: &Certificate) -> Result<Certificate> {
        let end = self.replay()?;
        if end != next.start {
            return Err(Error::EndMismatch {
                got: end.to_string(),
                expected: next.start.to_string(),
            });
        }
        let mut moves = self.moves.clone();
        moves.extend_from_slice(&next.moves);
        Certificate::new(self.start.clone(), moves)
    }
}

/// Limits for a certificate search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Total number of distinct words the search may store.
    pub max_states: usize,
    /// Words explored during a search may exceed the longer endpoint by this
    /// many letters.
    pub length_slack: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_states: 2_000_000,
            length_slack: 8,
        }
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Certified(Certificate),
    /// The search gave up. This never means the words are unequal.
    Inconclusive {
        explored: usize,
        reason: String,
    },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            SearchOutcome::Certified(c) => Some(c),
            SearchOutcome::Inconclusive { .. } => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, SearchOutcome::Certified(_))
    }
}

struct Node {
    parent: usize,
    mv: Option<Move>,
}

struct Side {
    words: Vec<Vec<Letter>>,
    nodes: Vec<Node>,
    index: HashMap<Vec<Letter>, usize>,
    frontier: Vec<usize>,
}

impl Side {
    fn new(root: Vec<Letter>) -> Self {
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        Side {
            words: vec![root],
            nodes: vec![Node {
                parent: 0,
                mv: None,
            }],
            index,
            frontier: vec![0],
        }
    }

    /// Moves leading from the root to node `id`.
    fn path_from_root(&self, mut id: usize) -> Vec<Move> {
        let mut moves = Vec::new();
        while let Some(mv) = self.nodes[id].mv {
            moves.push(mv);
            id = self.nodes[id].parent;
        }
        moves.reverse();
        moves
    }

    /// Moves leading from node `id` back to the root.
    fn path_to_root(&self, mut id: usize) -> Vec<Move> {
        let mut moves = Vec::new();
        while let Some(mv) = self.nodes[id].mv {
            let parent = self.nodes[id].parent;
            moves.push(mv.inverse_on(&self.words[parent]));
            id = parent;
        }
        moves
    }
}

/// Bidirectional breadth-first search between two words on the same strand
/// count. Returns the moves from `from` to `to`, or `None` when the state
/// budget runs out or the length-bounded graph is exhausted. `explored` is
/// increased by the number of stored states.
pub fn bidirectional_search(
    from: &[Letter],
    to: &[Letter],
    flips: &FlipTable,
    budget: SearchBudget,
    explored: &mut usize,
) -> Option<Vec<Move>> {
    if from == to {
        return Some(Vec::new());
    }
    let max_len = from.len().max(to.len()) + budget.length_slack;
    let mut sides = [Side::new(from.to_vec()), Side::new(to.to_vec())];
    *explored += 2;

    loop {
        if sides[0].frontier.is_empty() || sides[1].frontier.is_empty() {
            return None;
        }
        // grow the smaller frontier by one full layer
        let s = if sides[0].frontier.len() <= sides[1].frontier.len() {
            0
        } else {
            1
        };
        let (grow, other) = if s == 0 {
            let (a, b) = sides.split_at_mut(1);
            (&mut a[0], &b[0])
        } else {
            let (a, b) = sides.split_at_mut(1);
            (&mut b[0], &a[0])
        };
        let layer = std::mem::take(&mut grow.frontier);
        let mut next = Vec::new();
        for id in layer {
            let word = grow.words[id].clone();
            for mv in legal_moves(&word, flips, max_len) {
                let mut w = word.clone();
                apply_move(&mut w, mv, flips).expect("enumerated move is legal");
                if grow.index.contains_key(&w) {
                    continue;
                }
                let new_id = grow.words.len();
                grow.nodes.push(Node {
                    parent: id,
                    mv: Some(mv),
                });
                grow.words.push(w.clone());
                *explored += 1;
                if let Some(&meet) = other.index.get(&w) {
                    let (fwd, bwd) = if s == 0 {
                        (grow.path_from_root(new_id), other.path_to_root(meet))
                    } else {
                        (other.path_from_root(meet), grow.path_to_root(new_id))
                    };
                    let mut moves = fwd;
                    moves.extend(bwd);
                    return Some(moves);
                }
                grow.index.insert(w, new_id);
                next.push(new_id);
                if *explored >= budget.max_states {
                    return None;
                }
            }
        }
        grow.frontier = next;
    }
}

/// Certificate search with a per-instance cache of window rewrites. Reuse one
/// `Certifier` across many searches on the same strand count to amortize the
/// cache.
pub struct Certifier {
    strands: usize,
    flips: FlipTable,
    budget: SearchBudget,
    explored: usize,
    windows: HashMap<Vec<Letter>, Vec<Move>>,
}

const WINDOW: usize = 4;

impl Certifier {
    pub fn new(strands: usize, budget: SearchBudget) -> Result<Self> {
        if strands < 3 {
            return Err(Error::UnsupportedStrandCount {
                got: strands,
                supported: ">= 3",
            });
        }
        Ok(Certifier {
            strands,
            flips: FlipTable::new(strands)?,
            budget,
            explored: 0,
            windows: HashMap::new(),
        })
    }

    /// States stored by all searches so far.
    pub fn explored(&self) -> usize {
        self.explored
    }

    fn inconclusive(&self, reason: impl Into<String>) -> SearchOutcome {
        SearchOutcome::Inconclusive {
            explored: self.explored,
            reason: reason.into(),
        }
    }

    fn check(&self, w: &BraidWord) -> Result<()> {
        if w.strands() != self.strands {
            return Err(Error::StrandCountMismatch {
                left: self.strands,
                right: w.strands(),
            });
        }
        Ok(())
    }

    /// Rewrite moves taking a short three-strand word to its canonical
    /// representative.
    fn window_moves(&mut self, window: &[Letter]) -> Option<Vec<Move>> {
        if let Some(moves) = self.windows.get(window) {
            return Some(moves.clone());
        }
        let word = BraidWord::from_letters(3, window.to_vec()).ok()?;
        let target = canonical_rep(&sphere_class(&word).ok()?).ok()?;
        let mut explored = 0;
        let moves = bidirectional_search(
            window,
            target.letters(),
            &self.flips,
            self.budget,
            &mut explored,
        );
        self.explored += explored;
        let moves = moves?;
        self.windows.insert(window.to_vec(), moves.clone());
        Some(moves)
    }

    /// Moves rewriting a three-strand word to its canonical representative.
    fn rewrite_to_canonical(&mut self, w: &BraidWord) -> std::result::Result<Vec<Move>, String> {
        let mut word = w.letters().to_vec();
        let mut moves = Vec::new();
        let push = |word: &mut Vec<Letter>, moves: &mut Vec<Move>, mv: Move, flips: &FlipTable| {
            apply_move(word, mv, flips).expect("rewrite move is legal");
            moves.push(mv);
        };
        loop {
            if let Some(pos) =
                (0..word.len().saturating_sub(1)).find(|&p| word[p] == word[p + 1].inverse())
            {
                push(&mut word, &mut moves, Move::FreeCancel { pos }, &self.flips);
                continue;
            }
            let take = word.len().min(WINDOW);
            if word.len() <= 3 {
                let current =
                    BraidWord::from_letters(3, word.clone()).map_err(|e| e.to_string())?;
                let target = canonical_rep(&sphere_class(&current).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                if current == target {
                    return Ok(moves);
                }
            }
            let window = word[..take].to_vec();
            let local = self.window_moves(&window).ok_or_else(|| {
                format!("budget exhausted rewriting window {:?}", signed(&window))
            })?;
            for mv in local {
                push(&mut word, &mut moves, mv, &self.flips);
            }
        }
    }

    /// Searches for a certificate rewriting `a` into `b` modulo the flips.
    pub fn certify_equal(&mut self, a: &BraidWord, b: &BraidWord) -> Result<SearchOutcome> {
        self.check(a)?;
        self.check(b)?;
        if self.strands == 3 {
            if sphere_class(a)? != sphere_class(b)? {
                return Ok(self.inconclusive("words lie in different classes of B3/R"));
            }
            let to_a = match self.rewrite_to_canonical(a) {
                Ok(m) => m,
                Err(reason) => return Ok(self.inconclusive(reason)),
            };
            let to_b = match self.rewrite_to_canonical(b) {
                Ok(m) => m,
                Err(reason) => return Ok(self.inconclusive(reason)),
            };
            let down = Certificate::new(a.clone(), to_a)?;
            let up = Certificate::new(b.clone(), to_b)?.reversed()?;
            let cert = down.then(&up)?;
            debug_assert!(cert.proves(a, b));
            return Ok(SearchOutcome::Certified(cert));
        }

        // No complete invariant beyond three strands: check the necessary
        // conditions, then search directly.
        let modulus = 2 * self.strands as i64 - 2;
        if a.permutation() != b.permutation()
            || (a.exponent_sum() - b.exponent_sum()) % modulus != 0
        {
            return Ok(
                self.inconclusive(format!("permutation or exponent sum mod {modulus} differ"))
            );
        }
        let mut explored = 0;
        let found = bidirectional_search(
            a.letters(),
            b.letters(),
            &self.flips,
            self.budget,
            &mut explored,
        );
        self.explored += explored;
        match found {
            Some(moves) => Ok(SearchOutcome::Certified(Certificate::new(
                a.clone(),
                moves,
            )?)),
            None => Ok(self.inconclusive("search budget exhausted")),
        }
    }

    pub fn certify_in_r(&mut self, w: &BraidWord) -> Result<SearchOutcome> {
        self.certify_equal(w, &BraidWord::identity(w.strands()))
    }
}

fn signed(letters: &[Letter]) -> Vec<i32> {
    letters.iter().map(|l| l.signed()).collect()
}

/// Searches for a certificate that `a` and `b` are equal modulo the flips.
/// `Inconclusive` never certifies inequality; words in different classes of
/// `B3/R` are always reported inconclusive.
pub fn certify_equal_mod_r(
    a: &BraidWord,
    b: &BraidWord,
    budget: SearchBudget,
) -> Result<SearchOutcome> {
    if a.strands() != b.strands() {
        return Err(Error::StrandCountMismatch {
            left: a.strands(),
            right: b.strands(),
        });
    }
    Certifier::new(a.strands(), budget)?.certify_equal(a, b)
}

/// Searches for a certificate that `w` lies in the flip subgroup.
pub fn certify_in_r(w: &BraidWord, budget: SearchBudget) -> Result<SearchOutcome> {
    certify_equal_mod_r(w, &BraidWord::identity(w.strands()), budget)
}
