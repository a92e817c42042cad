//! Completion of a generating set to a Gröbner basis over `Z/p^k`, overlap
//! relations, minimal term sets and reduced bases.
//!
//! The engine here is shared with the dynamical module, which runs it over
//! localizations of Z and splits the ring whenever two leading coefficients
//! turn out to be incomparable.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::coeff::{Coeff, CoeffError, RingSpec};
use crate::division::{self, find_reducer, DivisionError, DivisionMode};
use crate::ordering::AdmissibleOrder;
use crate::par::Exec;
use crate::poly::{NcPoly, PolyError, PolyRing, Term};
use crate::words::{factorizations, overlaps, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuchbergerError {
    #[error("completion needs a valuation ring Z/p^k, got {0}")]
    NotValuation(String),
    #[error("limits must be positive")]
    InvalidLimits,
    #[error("element {0} is the zero polynomial")]
    ZeroElement(usize),
    #[error("{0} does not satisfy LM(f)·p = q·LM(g) with the non-divisibility conditions")]
    InvalidOverlap(String),
    #[error("leading coefficients {0} and {1} are incomparable")]
    Incomparable(Coeff, Coeff),
    #[error("basis must be complete and verified")]
    Unverified,
    #[error("reduced bases are only defined over Z/p^k")]
    ReducedNeedsValuation,
    #[error("empty term list")]
    EmptyTerms,
    #[error(transparent)]
    Division(#[from] DivisionError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub max_word_length: usize,
    pub max_basis_size: usize,
    pub max_iterations: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_word_length: 12,
            max_basis_size: 200,
            max_iterations: 10_000,
        }
    }
}

impl Limits {
    pub fn validate(&self) -> Result<(), BuchbergerError> {
        if self.max_word_length == 0 || self.max_basis_size == 0 || self.max_iterations == 0 {
            return Err(BuchbergerError::InvalidLimits);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Complete,
    Truncated,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub processed: usize,
    pub adjoined: usize,
    pub absorbed: usize,
    pub skipped_long: usize,
    pub rescans: usize,
    pub open_disjoint: usize,
    /// Depends on the batch width, so left out of serialized output.
    #[serde(skip)]
    pub speculative_hits: usize,
    #[serde(skip)]
    pub speculative_misses: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub elements: Vec<NcPoly>,
    pub ring: RingSpec,
    pub order: AdmissibleOrder,
    pub status: Status,
    pub verified: bool,
    pub stats: Stats,
}

impl GroebnerBasis {
    /// Wraps an element list as-is, marking it verified if its relations
    /// close and no disjoint family is open.
    pub fn from_elements(pr: &PolyRing, elements: Vec<NcPoly>, exec: Exec) -> Result<Self, BuchbergerError> {
        if let Some(i) = elements.iter().position(NcPoly::is_zero) {
            return Err(BuchbergerError::ZeroElement(i));
        }
        let verified =
            closure_failures(pr, &elements, exec)?.is_empty() && open_disjoint_families(pr, &elements).is_empty();
        Ok(GroebnerBasis {
            elements,
            ring: pr.ring.clone(),
            order: pr.order.clone(),
            status: Status::Complete,
            verified,
            stats: Stats::default(),
        })
    }

    pub fn leading_terms(&self) -> Vec<Term> {
        self.elements.iter().filter_map(|e| e.lt().cloned()).collect()
    }
}

/// A relation between basis elements, indices refer to the element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    /// `ann(LC(f))·f`.
    Annihilator { f: usize },
    /// `O(f, g, p, q)` with `LM(f)·p = q·LM(g)`.
    Overlap { f: usize, g: usize, p: Word, q: Word },
    /// `LM(big) = u·LM(small)·v`, cancelled by scaling whichever leading
    /// coefficient is the multiple of the other.
    Containment { small: usize, big: usize, u: Word, v: Word },
    /// `α·LM(f)·w·g − β·f·w·LM(g)`. With `w` absent it stands for the whole
    /// family over all gaps, which only appears in closure reports.
    Disjoint { f: usize, g: usize, w: Option<Word> },
}

impl Relation {
    fn ids(&self) -> [usize; 2] {
        match *self {
            Relation::Annihilator { f } => [f, f],
            Relation::Overlap { f, g, .. } => [f, g],
            Relation::Containment { small, big, .. } => [small, big],
            Relation::Disjoint { f, g, .. } => [f, g],
        }
    }

    /// Word cancelled by the relation.
    fn cancelled_len<'a>(&self, lookup: &impl Fn(usize) -> Option<&'a NcPoly>) -> usize {
        match self {
            Relation::Annihilator { f } => lookup(*f).map_or(0, NcPoly::max_word_len),
            Relation::Overlap { f, p, .. } => lookup(*f).and_then(NcPoly::lm).map_or(0, |m| m.len() + p.len()),
            Relation::Containment { big, .. } => lookup(*big).and_then(NcPoly::lm).map_or(0, Word::len),
            Relation::Disjoint { f, g, w } => {
                let len = |i: usize| lookup(i).and_then(NcPoly::lm).map_or(0, Word::len);
                len(*f) + len(*g) + w.as_ref().map_or(0, Word::len)
            }
        }
    }

    pub fn describe(&self, pr: &PolyRing) -> String {
        let w = |x: &Word| pr.alphabet.format_word(x);
        match self {
            Relation::Annihilator { f } => format!("ann(g{f})"),
            Relation::Overlap { f, g, p, q } => format!("O(g{f}, g{g}, {}, {})", w(p), w(q)),
            Relation::Containment { small, big, u, v } => format!("C(g{small} in g{big}, {}, {})", w(u), w(v)),
            Relation::Disjoint { f, g, w: Some(gap) } => format!("D(g{f}, g{g}, {})", w(gap)),
            Relation::Disjoint { f, g, w: None } => format!("D(g{f}, g{g}, *)"),
        }
    }
}

/// Incomparable leading coefficients met while completing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub a: Coeff,
    pub b: Coeff,
}

impl From<Split> for BuchbergerError {
    fn from(s: Split) -> Self {
        BuchbergerError::Incomparable(s.a, s.b)
    }
}

fn split_of(e: DivisionError) -> Result<Split, BuchbergerError> {
    match e {
        DivisionError::Incomparable {
            lc_divisor, lc_target, ..
        } => Ok(Split {
            a: lc_divisor,
            b: lc_target,
        }),
        other => Err(other.into()),
    }
}

/// `O(f, g, p, q)`: `(LC(g)/LC(f))·f·p − q·g` when `LC(f) | LC(g)`, otherwise
/// `f·p − (LC(f)/LC(g))·q·g`.
pub fn overlap_relation(pr: &PolyRing, f: &NcPoly, g: &NcPoly, p: &Word, q: &Word) -> Result<NcPoly, BuchbergerError> {
    let (mf, _, _) = pr.leading(f)?;
    let (mg, _, _) = pr.leading(g)?;
    let valid = !p.is_empty()
        && !q.is_empty()
        && mf.concat(p) == q.concat(mg)
        && !mf.divides(q)
        && !mg.divides(p)
        && q.len() < mf.len();
    if !valid {
        return Err(BuchbergerError::InvalidOverlap(format!(
            "({}, {})",
            pr.alphabet.format_word(p),
            pr.alphabet.format_word(q)
        )));
    }
    overlap_unchecked(pr, f, g, p, q).map_err(Into::into)
}

fn overlap_unchecked(pr: &PolyRing, f: &NcPoly, g: &NcPoly, p: &Word, q: &Word) -> Result<NcPoly, Split> {
    let (cf, cg) = (f.lc().expect("nonzero"), g.lc().expect("nonzero"));
    let e = Word::empty();
    let one = Coeff::one();
    if let Some(c) = pr.ring.divides(cf, cg).expect("nonzero") {
        Ok(pr.sub(&pr.scaled_sandwich(&c, &e, f, p), &pr.scaled_sandwich(&one, q, g, &e)))
    } else if let Some(c) = pr.ring.divides(cg, cf).expect("nonzero") {
        Ok(pr.sub(&pr.scaled_sandwich(&one, &e, f, p), &pr.scaled_sandwich(&c, q, g, &e)))
    } else {
        Err(Split {
            a: cf.clone(),
            b: cg.clone(),
        })
    }
}

fn containment_unchecked(pr: &PolyRing, small: &NcPoly, big: &NcPoly, u: &Word, v: &Word) -> Result<NcPoly, Split> {
    let (cs, cb) = (small.lc().expect("nonzero"), big.lc().expect("nonzero"));
    let one = Coeff::one();
    let e = Word::empty();
    if let Some(c) = pr.ring.divides(cs, cb).expect("nonzero") {
        Ok(pr.sub(big, &pr.scaled_sandwich(&c, u, small, v)))
    } else if let Some(c) = pr.ring.divides(cb, cs).expect("nonzero") {
        Ok(pr.sub(
            &pr.scaled_sandwich(&c, &e, big, &e),
            &pr.scaled_sandwich(&one, u, small, v),
        ))
    } else {
        Err(Split {
            a: cs.clone(),
            b: cb.clone(),
        })
    }
}

/// `(α, β)` with `α·LC(g) = β·LC(f)`, one of them 1.
fn cross_multipliers(pr: &PolyRing, f: &NcPoly, g: &NcPoly) -> Result<(Coeff, Coeff), Split> {
    let (cf, cg) = (f.lc().expect("nonzero"), g.lc().expect("nonzero"));
    if let Some(c) = pr.ring.divides(cf, cg).expect("nonzero") {
        Ok((Coeff::one(), c))
    } else if let Some(c) = pr.ring.divides(cg, cf).expect("nonzero") {
        Ok((c, Coeff::one()))
    } else {
        Err(Split {
            a: cf.clone(),
            b: cg.clone(),
        })
    }
}

fn disjoint_unchecked(pr: &PolyRing, f: &NcPoly, g: &NcPoly, w: &Word) -> Result<NcPoly, Split> {
    let (alpha, beta) = cross_multipliers(pr, f, g)?;
    let (mf, mg) = (f.lm().expect("nonzero"), g.lm().expect("nonzero"));
    let e = Word::empty();
    Ok(pr.sub(
        &pr.scaled_sandwich(&alpha, &mf.concat(w), g, &e),
        &pr.scaled_sandwich(&beta, &e, f, &w.concat(mg)),
    ))
}

fn tail(f: &NcPoly) -> NcPoly {
    NcPoly::from_sorted(f.terms()[1..].to_vec())
}

/// Whether the disjoint family of `(f, g)` can be nonzero at all. It
/// vanishes into a standard representation when the smaller leading
/// coefficient divides every tail coefficient of both, which covers units.
fn disjoint_needed(pr: &PolyRing, f: &NcPoly, g: &NcPoly) -> bool {
    let (cf, cg) = (f.lc().expect("nonzero"), g.lc().expect("nonzero"));
    let d = match pr.ring.divides(cf, cg).expect("nonzero") {
        Some(_) => cf,
        None if pr.ring.divides(cg, cf).expect("nonzero").is_some() => cg,
        None => return true,
    };
    let divisible = |p: &NcPoly| {
        p.terms()[1..]
            .iter()
            .all(|t| pr.ring.divides(d, &t.coeff).expect("nonzero").is_some())
    };
    !(divisible(f) && divisible(g))
}

/// For a needed pair, the parts `α·tail(g)` and `β·tail(f)` of the family
/// that fail to reduce to zero by `elements`. Both vanishing gives every
/// member of the family a standard representation, whatever the gap.
fn disjoint_residue(pr: &PolyRing, f: &NcPoly, g: &NcPoly, elements: &[NcPoly], mode: DivisionMode) -> Option<NcPoly> {
    let Ok((alpha, beta)) = cross_multipliers(pr, f, g) else {
        return Some(pr.sub(f, g));
    };
    for part in [pr.scale(&alpha, &tail(g)), pr.scale(&beta, &tail(f))] {
        match division::remainder(pr, &part, elements, mode) {
            Ok(r) if r.is_zero() => {}
            Ok(r) => return Some(r),
            Err(_) => return Some(part),
        }
    }
    None
}

/// Needed disjoint pairs of `elements` (ordered, a pair may repeat an
/// element) whose family is not closed, with a residue.
fn open_disjoint(pr: &PolyRing, elements: &[NcPoly], mode: DivisionMode) -> Vec<(usize, usize, NcPoly)> {
    let mut out = Vec::new();
    for (i, f) in elements.iter().enumerate() {
        for (j, g) in elements.iter().enumerate() {
            if disjoint_needed(pr, f, g) {
                if let Some(r) = disjoint_residue(pr, f, g, elements, mode) {
                    out.push((i, j, r));
                }
            }
        }
    }
    out
}

/// Cap on the gaps enumerated for one open pair. An open pair truncates
/// the run whatever the enumeration finds, so this only limits how much of
/// the family a truncated basis accounts for.
const GAP_BUDGET: usize = 1024;

/// Words of length at most `max` over `letters` letters, shortest first,
/// whole lengths only while within the budget.
fn gaps(letters: usize, max: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max {
        if out.len() + layer.len() * letters > GAP_BUDGET {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|w| (0..letters).map(move |l| w.concat(&Word::from(vec![l as Letter]))))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// The polynomial of a relation, `None` when it refers to a missing element
/// or is trivially zero.
fn relation_poly<'a>(
    pr: &PolyRing,
    rel: &Relation,
    lookup: impl Fn(usize) -> Option<&'a NcPoly>,
) -> Result<Option<NcPoly>, Split> {
    let [a, b] = rel.ids();
    let (Some(fa), Some(fb)) = (lookup(a), lookup(b)) else {
        return Ok(None);
    };
    Ok(Some(match rel {
        Relation::Annihilator { .. } => match pr.ring.annihilator(fa.lc().expect("nonzero")) {
            Some(c) => pr.scale(&c, fa),
            None => return Ok(None),
        },
        Relation::Overlap { p, q, .. } => overlap_unchecked(pr, fa, fb, p, q)?,
        Relation::Containment { u, v, .. } => containment_unchecked(pr, fa, fb, u, v)?,
        Relation::Disjoint { w: Some(w), .. } => disjoint_unchecked(pr, fa, fb, w)?,
        Relation::Disjoint { w: None, .. } => return Ok(None),
    }))
}

/// Relations contributed by a new element `h` against the elements `earlier`
/// (id, poly), in the scheduling order: annihilator, pairs with each earlier
/// element, self-overlaps.
fn relations_for(pr: &PolyRing, h_id: usize, h: &NcPoly, earlier: &[(usize, &NcPoly)]) -> Vec<Relation> {
    let mut out = Vec::new();
    let mh = h.lm().expect("nonzero");
    if pr.ring.annihilator(h.lc().expect("nonzero")).is_some() {
        out.push(Relation::Annihilator { f: h_id });
    }
    for &(e_id, e) in earlier {
        let me = e.lm().expect("nonzero");
        if !me.is_empty() && !mh.is_empty() {
            for (p, q) in overlaps(me, mh).expect("non-empty words") {
                out.push(Relation::Overlap { f: e_id, g: h_id, p, q });
            }
            for (p, q) in overlaps(mh, me).expect("non-empty words") {
                out.push(Relation::Overlap { f: h_id, g: e_id, p, q });
            }
        }
        let (small, big, sw, bw) = if me.divides(mh) {
            (e_id, h_id, me, mh)
        } else if mh.divides(me) {
            (h_id, e_id, mh, me)
        } else {
            continue;
        };
        for (u, v) in occurrences(sw, bw) {
            out.push(Relation::Containment { small, big, u, v });
        }
    }
    if !mh.is_empty() {
        for (p, q) in overlaps(mh, mh).expect("non-empty") {
            out.push(Relation::Overlap { f: h_id, g: h_id, p, q });
        }
    }
    out
}

/// All `(u, v)` with `q = u·p·v`, including the empty pattern.
fn occurrences(p: &Word, q: &Word) -> Vec<(Word, Word)> {
    if p.is_empty() {
        (0..=q.len()).map(|i| (q.prefix(i), q.suffix_from(i))).collect()
    } else {
        factorizations(p, q).expect("non-empty pattern")
    }
}

/// Every relation of an element list, indices as ids.
pub fn all_relations(pr: &PolyRing, elements: &[NcPoly]) -> Vec<Relation> {
    let mut out = Vec::new();
    for (i, h) in elements.iter().enumerate() {
        let earlier: Vec<(usize, &NcPoly)> = elements[..i].iter().enumerate().collect();
        out.extend(relations_for(pr, i, h, &earlier));
    }
    out
}

/// Relations of `elements` whose remainder by `elements` is nonzero, with
/// those remainders. Empty means the set is closed under annihilator,
/// overlap and containment relations.
pub fn closure_failures(
    pr: &PolyRing,
    elements: &[NcPoly],
    exec: Exec,
) -> Result<Vec<(Relation, NcPoly)>, BuchbergerError> {
    let rels = all_relations(pr, elements);
    let results = exec.map(&rels, |r| -> Result<Option<NcPoly>, BuchbergerError> {
        let Some(poly) = relation_poly(pr, r, |i| elements.get(i))? else {
            return Ok(None);
        };
        let rem = division::remainder(pr, &poly, elements, DivisionMode::Plain)?;
        Ok((!rem.is_zero()).then_some(rem))
    });
    let mut out = Vec::new();
    for (r, res) in rels.into_iter().zip(results) {
        if let Some(rem) = res? {
            out.push((r, rem));
        }
    }
    Ok(out)
}

/// Disjoint families of `elements` that cannot be certified to vanish for
/// every gap, each with a part that does not reduce to zero. Only pairs
/// whose leading coefficients are both non-units can appear.
pub fn open_disjoint_families(pr: &PolyRing, elements: &[NcPoly]) -> Vec<(Relation, NcPoly)> {
    open_disjoint(pr, elements, DivisionMode::Plain)
        .into_iter()
        .map(|(f, g, rem)| (Relation::Disjoint { f, g, w: None }, rem))
        .collect()
}

#[derive(Debug, Clone)]
enum Item {
    Input(NcPoly),
    Reinsert(NcPoly),
    Rel(Relation),
}

enum Eval {
    Skip,
    TooLong,
    Poly(NcPoly),
}

/// Resumable completion state. Cloned when the dynamical module forks.
#[derive(Debug, Clone)]
pub(crate) struct Completion {
    pub pr: PolyRing,
    elems: Vec<NcPoly>,
    ids: Vec<usize>,
    next_id: usize,
    queue: VecDeque<Item>,
    mode: DivisionMode,
    check_lcs: bool,
    lim: Limits,
    truncated: bool,
    dirty: bool,
    generation: u64,
    removals: u64,
    gaps_queued: Option<u64>,
    pub stats: Stats,
}

impl Completion {
    pub fn new(pr: PolyRing, inputs: &[NcPoly], lim: Limits, dynamical: bool) -> Self {
        Completion {
            pr,
            elems: Vec::new(),
            ids: Vec::new(),
            next_id: 0,
            queue: inputs
                .iter()
                .filter(|f| !f.is_zero())
                .cloned()
                .map(Item::Input)
                .collect(),
            mode: if dynamical {
                DivisionMode::Branching
            } else {
                DivisionMode::Plain
            },
            check_lcs: dynamical,
            lim,
            truncated: false,
            dirty: true,
            generation: 0,
            removals: 0,
            gaps_queued: None,
            stats: Stats::default(),
        }
    }

    /// Moves the state into another coefficient ring (a localization of the
    /// current one). Stored coefficients are unchanged.
    pub fn rebase(&mut self, ring: RingSpec) {
        self.pr = self.pr.with_ring(ring);
        self.generation += 1;
        self.removals += 1;
    }

    fn lookup(&self, id: usize) -> Option<&NcPoly> {
        self.ids.binary_search(&id).ok().map(|i| &self.elems[i])
    }

    fn evaluate(&self, item: &Item) -> Result<Eval, Split> {
        let run = |f: &NcPoly| -> Result<NcPoly, Split> {
            division::remainder(&self.pr, f, &self.elems, self.mode)
                .map_err(|e| split_of(e).expect("only incomparability can fail"))
        };
        match item {
            Item::Input(f) => {
                let lt = f.lt().expect("nonzero input");
                let reducible = find_reducer(&self.pr, lt, &self.elems, self.mode)
                    .map_err(|e| split_of(e).expect("only incomparability can fail"))?
                    .is_some();
                Ok(Eval::Poly(if reducible { run(f)? } else { f.clone() }))
            }
            Item::Reinsert(f) => Ok(Eval::Poly(run(f)?)),
            Item::Rel(rel) => {
                if rel.cancelled_len(&|i| self.lookup(i)) > self.lim.max_word_length {
                    return Ok(Eval::TooLong);
                }
                match relation_poly(&self.pr, rel, |i| self.lookup(i))? {
                    None => Ok(Eval::Skip),
                    Some(p) => Ok(Eval::Poly(run(&p)?)),
                }
            }
        }
    }

    /// Fails with the incomparable pair if `h` cannot be adjoined in the
    /// current ring.
    fn check_adjoin(&self, h: &NcPoly) -> Result<(), Split> {
        if !self.check_lcs {
            return Ok(());
        }
        let ch = h.lc().expect("nonzero");
        for e in &self.elems {
            let ce = e.lc().expect("nonzero");
            if !self.pr.ring.is_comparable(ce, ch).expect("nonzero") {
                return Err(Split {
                    a: ce.clone(),
                    b: ch.clone(),
                });
            }
        }
        Ok(())
    }

    fn adjoin(&mut self, h: NcPoly) {
        let (mh, ch) = (h.lm().expect("nonzero").clone(), h.lc().expect("nonzero").clone());
        let mut absorbed = Vec::new();
        let mut i = 0;
        while i < self.elems.len() {
            let e = &self.elems[i];
            let absorb = mh.divides(e.lm().expect("nonzero"))
                && self
                    .pr
                    .ring
                    .divides(&ch, e.lc().expect("nonzero"))
                    .expect("nonzero")
                    .is_some();
            if absorb {
                absorbed.push(self.elems.remove(i));
                self.ids.remove(i);
            } else {
                i += 1;
            }
        }
        if !absorbed.is_empty() {
            self.removals += 1;
            self.stats.absorbed += absorbed.len();
        }
        for e in absorbed.into_iter().rev() {
            self.queue.push_front(Item::Reinsert(e));
        }
        if mh.len() > self.lim.max_word_length {
            self.truncated = true;
        }
        let id = self.next_id;
        self.next_id += 1;
        let earlier: Vec<(usize, &NcPoly)> = self.ids.iter().copied().zip(self.elems.iter()).collect();
        let rels = relations_for(&self.pr, id, &h, &earlier);
        self.queue.extend(rels.into_iter().map(Item::Rel));
        self.elems.push(h);
        self.ids.push(id);
        self.generation += 1;
        self.dirty = true;
        self.stats.adjoined += 1;
    }

    fn limits_hit(&self) -> bool {
        self.stats.processed >= self.lim.max_iterations || self.elems.len() > self.lim.max_basis_size
    }

    /// Keeps pending inputs in the basis when stopping early, so the
    /// element set still generates the ideal.
    fn flush_pending(&mut self) {
        let pending: Vec<NcPoly> = self
            .queue
            .drain(..)
            .filter_map(|it| match it {
                Item::Input(f) | Item::Reinsert(f) => Some(f),
                Item::Rel(_) => None,
            })
            .collect();
        for f in pending {
            let id = self.next_id;
            self.next_id += 1;
            self.elems.push(f);
            self.ids.push(id);
        }
    }

    /// Stops without finishing: pending inputs are kept and the state is
    /// marked truncated.
    pub fn abandon(&mut self) {
        self.truncated = true;
        self.flush_pending();
    }

    fn commit(&mut self, ev: Eval) -> Result<(), Split> {
        match ev {
            Eval::Skip => {}
            Eval::TooLong => {
                self.truncated = true;
                self.stats.skipped_long += 1;
            }
            Eval::Poly(h) => {
                if !h.is_zero() {
                    self.check_adjoin(&h)?;
                    self.adjoin(h);
                }
            }
        }
        self.stats.processed += 1;
        Ok(())
    }

    /// Runs until the queue is exhausted and the basis passes a full
    /// re-scan, a limit trips, or incomparable coefficients appear. On a
    /// split, the offending item stays at the front of the queue.
    pub fn run(&mut self, exec: Exec) -> Result<Status, Split> {
        loop {
            if self.limits_hit() {
                self.truncated = true;
                self.flush_pending();
                return Ok(Status::Truncated);
            }
            if self.queue.is_empty() {
                if self.truncated {
                    return Ok(Status::Truncated);
                }
                if !self.dirty {
                    let open = open_disjoint(&self.pr, &self.elems, self.mode);
                    self.stats.open_disjoint = open.len();
                    if open.is_empty() {
                        return Ok(Status::Complete);
                    }
                    if self.check_lcs || self.gaps_queued == Some(self.generation) {
                        self.truncated = true;
                        return Ok(Status::Truncated);
                    }
                    self.queue_gaps(&open);
                    continue;
                }
                self.rescan(exec)?;
                continue;
            }
            let n = exec.batch_size().min(self.queue.len());
            if n <= 1 {
                let item = self.queue.pop_front().expect("non-empty");
                match self.evaluate(&item).and_then(|ev| self.commit(ev)) {
                    Ok(()) => {}
                    Err(s) => {
                        self.queue.push_front(item);
                        return Err(s);
                    }
                }
                continue;
            }
            let batch: Vec<Item> = self.queue.iter().take(n).cloned().collect();
            let (gen0, rem0) = (self.generation, self.removals);
            let spec = exec.map(&batch, |it| self.evaluate(it));
            for (item, res) in batch.into_iter().zip(spec) {
                if self.limits_hit() {
                    break;
                }
                let accept = self.generation == gen0
                    || (self.removals == rem0 && matches!(&res, Ok(Eval::Poly(h)) if h.is_zero()))
                    || (self.removals == rem0 && matches!(&res, Ok(Eval::Skip)));
                let res = if accept {
                    self.stats.speculative_hits += 1;
                    res
                } else {
                    self.stats.speculative_misses += 1;
                    self.evaluate(&item)
                };
                self.queue.pop_front();
                if let Err(s) = res.and_then(|ev| self.commit(ev)) {
                    self.queue.push_front(item);
                    return Err(s);
                }
                if self.removals != rem0 {
                    // Absorbed elements were queued ahead of the batch.
                    break;
                }
            }
        }
    }

    /// Disjoint relations of the open pairs, for every gap keeping the
    /// cancelled word within the length limit.
    fn queue_gaps(&mut self, open: &[(usize, usize, NcPoly)]) {
        self.gaps_queued = Some(self.generation);
        for &(i, j, _) in open {
            let used = self.elems[i].lm().expect("nonzero").len() + self.elems[j].lm().expect("nonzero").len();
            let Some(room) = self.lim.max_word_length.checked_sub(used) else {
                continue;
            };
            let (f, g) = (self.ids[i], self.ids[j]);
            for w in gaps(self.pr.alphabet.len(), room) {
                self.queue.push_back(Item::Rel(Relation::Disjoint { f, g, w: Some(w) }));
            }
        }
    }

    /// Reduces every relation of the current basis against it; queues the
    /// ones that do not vanish.
    fn rescan(&mut self, exec: Exec) -> Result<(), Split> {
        self.stats.rescans += 1;
        self.dirty = false;
        let mut rels = Vec::new();
        for (k, (&id, h)) in self.ids.iter().zip(&self.elems).enumerate() {
            let earlier: Vec<(usize, &NcPoly)> = self.ids[..k].iter().copied().zip(self.elems.iter()).collect();
            rels.extend(relations_for(&self.pr, id, h, &earlier).into_iter().map(Item::Rel));
        }
        let results = exec.map(&rels, |it| self.evaluate(it));
        for (it, res) in rels.into_iter().zip(results) {
            match res? {
                Eval::Skip => {}
                Eval::TooLong => self.queue.push_back(it),
                Eval::Poly(h) if h.is_zero() => {}
                Eval::Poly(_) => self.queue.push_back(it),
            }
        }
        Ok(())
    }

    pub fn finish(&self, status: Status) -> GroebnerBasis {
        GroebnerBasis {
            elements: self.elems.clone(),
            ring: self.pr.ring.clone(),
            order: self.pr.order.clone(),
            status,
            verified: status == Status::Complete,
            stats: self.stats.clone(),
        }
    }
}

/// Completes `inputs` to a Gröbner basis over `Z/p^k`.
pub fn buchberger(pr: &PolyRing, inputs: &[NcPoly], lim: Limits, exec: Exec) -> Result<GroebnerBasis, BuchbergerError> {
    lim.validate()?;
    if !pr.ring.is_valuation() {
        return Err(BuchbergerError::NotValuation(pr.ring.to_string()));
    }
    let mut c = Completion::new(pr.clone(), inputs, lim, false);
    let status = c.run(exec)?;
    Ok(c.finish(status))
}

/// True iff no element's leading word is a subword of another's.
pub fn is_lm_reduced(elements: &[NcPoly]) -> Result<bool, BuchbergerError> {
    let lms: Vec<&Word> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| e.lm().ok_or(BuchbergerError::ZeroElement(i)))
        .collect::<Result<_, _>>()?;
    Ok(lms
        .iter()
        .enumerate()
        .all(|(i, a)| lms.iter().enumerate().all(|(j, b)| i == j || !a.divides(b))))
}

/// Unit multiples collapse to 1; over Z the sign is dropped.
fn normalize_coeff(r: &RingSpec, c: &Coeff) -> Coeff {
    if r.is_unit(c) {
        Coeff::one()
    } else if let RingSpec::Integers = r {
        r.from_int(r.ideal_generator(c))
    } else {
        c.clone()
    }
}

/// Irredundant subset of a term list: a term is dropped when another term
/// divides it with a different word or a non-associate coefficient, and
/// associate duplicates on one word are merged.
pub fn minimal_term_set(r: &RingSpec, terms: &[Term]) -> Result<Vec<Term>, BuchbergerError> {
    if terms.is_empty() {
        return Err(BuchbergerError::EmptyTerms);
    }
    if terms.iter().any(|t| t.coeff.is_zero()) {
        return Err(BuchbergerError::Coeff(CoeffError::ZeroInput));
    }
    let norm: Vec<Term> = terms
        .iter()
        .map(|t| Term {
            coeff: normalize_coeff(r, &t.coeff),
            word: t.word.clone(),
        })
        .collect();
    let divides = |b: &Term, a: &Term| -> bool {
        b.word.divides(&a.word) && r.divides(&b.coeff, &a.coeff).expect("nonzero").is_some()
    };
    let strictly = |b: &Term, a: &Term| -> bool {
        divides(b, a) && (b.word != a.word || r.ideal_generator(&b.coeff) != r.ideal_generator(&a.coeff))
    };
    let mut out: Vec<Term> = Vec::new();
    for (i, a) in norm.iter().enumerate() {
        if norm.iter().enumerate().any(|(j, b)| i != j && strictly(b, a)) {
            continue;
        }
        let class = r.ideal_generator(&a.coeff);
        match out
            .iter_mut()
            .find(|t| t.word == a.word && r.ideal_generator(&t.coeff) == class)
        {
            Some(t) => {
                if a.coeff.numer() < t.coeff.numer() {
                    t.coeff = a.coeff.clone();
                }
            }
            None => out.push(a.clone()),
        }
    }
    Ok(out)
}

/// `{t − N(t) : t ∈ minimal_term_set(LT(G))}`.
pub fn reduced_basis(pr: &PolyRing, g: &GroebnerBasis, exec: Exec) -> Result<GroebnerBasis, BuchbergerError> {
    if !g.verified || g.status != Status::Complete {
        return Err(BuchbergerError::Unverified);
    }
    if !pr.ring.is_valuation() {
        return Err(BuchbergerError::ReducedNeedsValuation);
    }
    if g.elements.is_empty() {
        return Ok(g.clone());
    }
    let t = minimal_term_set(&pr.ring, &g.leading_terms())?;
    let elements = exec.map(&t, |t| -> Result<NcPoly, BuchbergerError> {
        let tp = pr.monomial(t.coeff.clone(), t.word.clone());
        let nf = division::normal_form(pr, &tp, g)?;
        Ok(pr.sub(&tp, &nf))
    });
    let elements: Vec<NcPoly> = elements.into_iter().collect::<Result<_, _>>()?;
    let mut out = GroebnerBasis::from_elements(pr, elements, exec)?;
    out.stats = g.stats.clone();
    Ok(out)
}
