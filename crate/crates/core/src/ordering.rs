//! Admissible orders on words.

use std::cmp::Ordering;

use thiserror::Error;

use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("precedence is not a permutation of the {0} alphabet indices")]
    NotAPermutation(usize),
    #[error("cannot take the maximum of an empty list")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    /// Left graded lexicographic: shorter words first, then the first
    /// differing letter decides.
    GradedLex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleOrder {
    kind: OrderKind,
    /// Letters from largest to smallest.
    precedence: Vec<Letter>,
    /// `rank[letter]`; larger rank means larger letter.
    rank: Vec<u16>,
}

impl AdmissibleOrder {
    /// Graded-lex order from a precedence list, largest variable first.
    pub fn graded_lex(precedence: Vec<Letter>) -> Result<Self, OrderError> {
        let n = precedence.len();
        let mut rank = vec![u16::MAX; n];
        for (pos, &l) in precedence.iter().enumerate() {
            let slot = rank.get_mut(l as usize).ok_or(OrderError::NotAPermutation(n))?;
            if *slot != u16::MAX {
                return Err(OrderError::NotAPermutation(n));
            }
            *slot = (n - 1 - pos) as u16;
        }
        Ok(AdmissibleOrder {
            kind: OrderKind::GradedLex,
            precedence,
            rank,
        })
    }

    /// Graded-lex where alphabet index 0 is the largest letter.
    pub fn graded_lex_natural(n: usize) -> Self {
        Self::graded_lex((0..n as Letter).collect()).expect("identity permutation")
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn precedence(&self) -> &[Letter] {
        &self.precedence
    }

    pub fn compare(&self, p: &Word, q: &Word) -> Ordering {
        match self.kind {
            OrderKind::GradedLex => p.len().cmp(&q.len()).then_with(|| {
                p.letters()
                    .iter()
                    .zip(q.letters())
                    .find(|(a, b)| a != b)
                    .map(|(&a, &b)| self.rank[a as usize].cmp(&self.rank[b as usize]))
                    .unwrap_or(Ordering::Equal)
            }),
        }
    }

    pub fn max_word<'a>(&self, ws: &'a [Word]) -> Result<&'a Word, OrderError> {
        ws.iter().max_by(|a, b| self.compare(a, b)).ok_or(OrderError::Empty)
    }
}
