//! Bounded membership by exact linear algebra.
//!
//! The ideal generated by `gens`, cut down to words of length at most `L`,
//! contains the span of the sandwich products `u·g·v` whose words all fit in
//! the bound. Deciding whether `f` lies in that span is a linear system over
//! the coefficient ring, solved here with an echelon form that pivots by
//! extended gcd and, over `Z/n`, also inserts annihilator multiples of each
//! pivot row so that leading entries behave as in a Howell form.
//!
//! A positive answer comes with an explicit witness. A negative answer only
//! means no combination exists within the bound.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::buchberger::{closure_failures, open_disjoint_families, BuchbergerError, GroebnerBasis};
use crate::coeff::{Coeff, RingSpec};
use crate::division::{self, DivisionError, DivisionMode};
use crate::par::Exec;
use crate::poly::{NcPoly, PolyRing};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("polynomial has a word of length {0}, beyond the bound {1}")]
    BeyondBound(usize, usize),
    #[error(transparent)]
    Division(#[from] DivisionError),
    #[error(transparent)]
    Buchberger(#[from] BuchbergerError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTerm {
    pub generator: usize,
    pub u: Word,
    pub v: Word,
    pub coeff: Coeff,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member(Vec<WitnessTerm>),
    UnknownAtBound,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// `Σ coeff·u·g·v` over a witness.
pub fn recombine(pr: &PolyRing, gens: &[NcPoly], witness: &[WitnessTerm]) -> NcPoly {
    witness.iter().fold(pr.zero(), |acc, t| {
        pr.add(&acc, &pr.scaled_sandwich(&t.coeff, &t.u, &gens[t.generator], &t.v))
    })
}

type SVec = Vec<(u32, Coeff)>;

/// `s·a + t·b` for sorted sparse vectors.
fn lin2(r: &RingSpec, s: &Coeff, a: &SVec, t: &Coeff, b: &SVec) -> SVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let push = |out: &mut SVec, k: u32, c: Coeff| {
        if !c.is_zero() {
            out.push((k, c));
        }
    };
    while i < a.len() || j < b.len() {
        let ka = a.get(i).map(|e| e.0);
        let kb = b.get(j).map(|e| e.0);
        match (ka, kb) {
            (Some(x), Some(y)) if x == y => {
                push(&mut out, x, r.add(&r.mul(s, &a[i].1), &r.mul(t, &b[j].1)));
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                push(&mut out, x, r.mul(s, &a[i].1));
                i += 1;
            }
            (Some(x), None) => {
                push(&mut out, x, r.mul(s, &a[i].1));
                i += 1;
            }
            (_, Some(y)) => {
                push(&mut out, y, r.mul(t, &b[j].1));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn scale_vec(r: &RingSpec, c: &Coeff, a: &SVec) -> SVec {
    a.iter()
        .filter_map(|(k, x)| {
            let y = r.mul(c, x);
            (!y.is_zero()).then_some((*k, y))
        })
        .collect()
}

#[derive(Debug, Clone)]
struct Row {
    vec: SVec,
    comb: SVec,
}

impl Row {
    fn lin2(r: &RingSpec, s: &Coeff, a: &Row, t: &Coeff, b: &Row) -> Row {
        Row {
            vec: lin2(r, s, &a.vec, t, &b.vec),
            comb: lin2(r, s, &a.comb, t, &b.comb),
        }
    }

    fn scale(r: &RingSpec, c: &Coeff, a: &Row) -> Row {
        Row {
            vec: scale_vec(r, c, &a.vec),
            comb: scale_vec(r, c, &a.comb),
        }
    }
}

/// Echelon form with at most one row per leading index.
struct Echelon<'a> {
    ring: &'a RingSpec,
    pivots: Vec<Option<Row>>,
}

impl<'a> Echelon<'a> {
    fn new(ring: &'a RingSpec, n: usize) -> Self {
        Echelon {
            ring,
            pivots: vec![None; n],
        }
    }

    fn insert(&mut self, row: Row) {
        let r = self.ring;
        let one = Coeff::one();
        let mut work = vec![row];
        while let Some(mut row) = work.pop() {
            while let Some((lead, b)) = row.vec.first().cloned() {
                let slot = lead as usize;
                match self.pivots[slot].take() {
                    None => {
                        if let Some(ann) = r.annihilator(&b) {
                            let extra = Row::scale(r, &ann, &row);
                            if !extra.vec.is_empty() {
                                work.push(extra);
                            }
                        }
                        self.pivots[slot] = Some(row);
                        break;
                    }
                    Some(p) => {
                        let a = p.vec[0].1.clone();
                        if let Some(c) = r.divides(&a, &b).expect("nonzero pivot") {
                            row = Row::lin2(r, &one, &row, &r.neg(&c), &p);
                            self.pivots[slot] = Some(p);
                        } else {
                            let (g, s, t, ua, vb) = r.xgcd(&a, &b);
                            let np = Row::lin2(r, &s, &p, &t, &row);
                            let other = Row::lin2(r, &ua, &row, &r.neg(&vb), &p);
                            if let Some(ann) = r.annihilator(&g) {
                                let extra = Row::scale(r, &ann, &np);
                                if !extra.vec.is_empty() {
                                    work.push(extra);
                                }
                            }
                            self.pivots[slot] = Some(np);
                            row = other;
                        }
                    }
                }
            }
        }
    }

    /// Combination of inserted rows equal to `target`, if the greedy
    /// reduction reaches zero.
    fn solve(&self, target: SVec) -> Option<SVec> {
        let r = self.ring;
        let one = Coeff::one();
        let mut t = target;
        let mut comb: SVec = Vec::new();
        while let Some((lead, b)) = t.first().cloned() {
            let p = self.pivots[lead as usize].as_ref()?;
            let c = r.divides(&p.vec[0].1, &b).expect("nonzero pivot")?;
            t = lin2(r, &one, &t, &r.neg(&c), &p.vec);
            comb = lin2(r, &one, &comb, &c, &p.comb);
        }
        Some(comb)
    }
}

/// All `(u, v)` with `w = u·p·v`, the empty pattern included.
fn splits(p: &Word, w: &Word) -> Vec<(Word, Word)> {
    if p.len() > w.len() {
        return Vec::new();
    }
    (0..=w.len() - p.len())
        .filter(|&i| w.letters()[i..i + p.len()] == *p.letters())
        .map(|i| (w.prefix(i), w.suffix_from(i + p.len())))
        .collect()
}

/// Columns `(g, u, v)` reachable from the words of `f`, and the words they
/// touch, found by breadth-first search on the word/column incidence graph.
fn component(f: &NcPoly, gens: &[NcPoly], bound: usize) -> (Vec<(usize, Word, Word)>, Vec<Word>) {
    let mut seen_words: HashSet<Word> = HashSet::new();
    let mut seen_cols: HashSet<(usize, Word, Word)> = HashSet::new();
    let mut cols = Vec::new();
    let mut queue: VecDeque<Word> = VecDeque::new();
    for t in f.terms() {
        if seen_words.insert(t.word.clone()) {
            queue.push_back(t.word.clone());
        }
    }
    let maxlens: Vec<usize> = gens.iter().map(NcPoly::max_word_len).collect();
    while let Some(w) = queue.pop_front() {
        for (gi, g) in gens.iter().enumerate() {
            if g.is_zero() || maxlens[gi] > bound {
                continue;
            }
            for t in g.terms() {
                for (u, v) in splits(&t.word, &w) {
                    if u.len() + maxlens[gi] + v.len() > bound {
                        continue;
                    }
                    let key = (gi, u, v);
                    if seen_cols.contains(&key) {
                        continue;
                    }
                    for s in g.terms() {
                        let nw = s.word.sandwich(&key.1, &key.2);
                        if seen_words.insert(nw.clone()) {
                            queue.push_back(nw);
                        }
                    }
                    seen_cols.insert(key.clone());
                    cols.push(key);
                }
            }
        }
    }
    (cols, seen_words.into_iter().collect())
}

/// Decides whether `f` lies in the span of the sandwich products of `gens`
/// whose words have length at most `bound`.
pub fn module_membership(pr: &PolyRing, f: &NcPoly, gens: &[NcPoly], bound: usize) -> Result<Membership, OracleError> {
    if f.max_word_len() > bound {
        return Err(OracleError::BeyondBound(f.max_word_len(), bound));
    }
    if f.is_zero() {
        return Ok(Membership::Member(Vec::new()));
    }
    let (cols, mut words) = component(f, gens, bound);
    words.sort_by(|a, b| pr.order.compare(b, a));
    let index: HashMap<&Word, u32> = words.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
    let to_svec = |p: &NcPoly| -> SVec {
        let mut v: SVec = p.terms().iter().map(|t| (index[&t.word], t.coeff.clone())).collect();
        v.sort_by_key(|e| e.0);
        v
    };
    let mut ech = Echelon::new(&pr.ring, words.len());
    for (ci, (g, u, v)) in cols.iter().enumerate() {
        let col = pr.sandwich(u, &gens[*g], v);
        ech.insert(Row {
            vec: to_svec(&col),
            comb: vec![(ci as u32, Coeff::one())],
        });
    }
    Ok(match ech.solve(to_svec(f)) {
        Some(comb) => Membership::Member(
            comb.into_iter()
                .map(|(ci, c)| {
                    let (g, u, v) = &cols[ci as usize];
                    WitnessTerm {
                        generator: *g,
                        u: u.clone(),
                        v: v.clone(),
                        coeff: c,
                    }
                })
                .collect(),
        ),
        None => Membership::UnknownAtBound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementCheck {
    pub index: usize,
    pub poly: String,
    /// `member`, `unknown_at_bound` or `beyond_bound`.
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorCheck {
    pub index: usize,
    pub remainder: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub relation: String,
    pub remainder: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub bound: usize,
    pub elements_in_ideal: Vec<ElementCheck>,
    pub generators_reduce: Vec<GeneratorCheck>,
    pub relation_failures: Vec<RelationFailure>,
    /// Disjoint families not certified for every gap.
    pub open_disjoint: Vec<RelationFailure>,
    pub verified: bool,
}

/// Checks that (i) every basis element is in the span of `gens` at the
/// bound, (ii) every generator reduces to zero by the basis, and (iii) every
/// relation of the basis reduces to zero by the basis, with no disjoint
/// family left open.
pub fn verify_basis(
    pr: &PolyRing,
    basis: &GroebnerBasis,
    gens: &[NcPoly],
    bound: usize,
    exec: Exec,
) -> Result<VerifyReport, OracleError> {
    let elems = &basis.elements;
    let checks = exec.map(elems, |g| -> Result<&'static str, OracleError> {
        if g.max_word_len() > bound {
            return Ok("beyond_bound");
        }
        Ok(match module_membership(pr, g, gens, bound)? {
            Membership::Member(_) => "member",
            Membership::UnknownAtBound => "unknown_at_bound",
        })
    });
    let mut elements_in_ideal = Vec::with_capacity(elems.len());
    for (i, (g, c)) in elems.iter().zip(checks).enumerate() {
        elements_in_ideal.push(ElementCheck {
            index: i,
            poly: pr.format(g),
            verdict: c?.to_string(),
        });
    }
    let rems = exec.map(gens, |f| division::remainder(pr, f, elems, DivisionMode::Plain));
    let mut generators_reduce = Vec::with_capacity(gens.len());
    for (i, r) in rems.into_iter().enumerate() {
        let r = r?;
        generators_reduce.push(GeneratorCheck {
            index: i,
            remainder: pr.format(&r),
            ok: r.is_zero(),
        });
    }
    let relation_failures: Vec<RelationFailure> = closure_failures(pr, elems, exec)?
        .into_iter()
        .map(|(rel, rem)| RelationFailure {
            relation: rel.describe(pr),
            remainder: pr.format(&rem),
        })
        .collect();
    let open_disjoint: Vec<RelationFailure> = open_disjoint_families(pr, elems)
        .into_iter()
        .map(|(rel, rem)| RelationFailure {
            relation: rel.describe(pr),
            remainder: pr.format(&rem),
        })
        .collect();
    let verified = elements_in_ideal.iter().all(|c| c.verdict == "member")
        && generators_reduce.iter().all(|c| c.ok)
        && relation_failures.is_empty()
        && open_disjoint.is_empty();
    Ok(VerifyReport {
        bound,
        elements_in_ideal,
        generators_reduce,
        relation_failures,
        open_disjoint,
        verified,
    })
}
