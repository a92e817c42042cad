//! Terms and noncommutative polynomials.
//!
//! An [`NcPoly`] is a list of terms kept sorted by the active order, largest
//! word first, with no zero coefficients and no repeated words. All
//! operations go through a [`PolyRing`], which carries the coefficient ring,
//! the order and the alphabet.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::coeff::{Coeff, CoeffError, RingSpec};
use crate::ordering::AdmissibleOrder;
use crate::words::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("leading data of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: Coeff,
    pub word: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NcPoly {
    terms: Vec<Term>,
}

impl NcPoly {
    /// Wraps terms that are already strictly descending with nonzero
    /// coefficients.
    pub(crate) fn from_sorted(terms: Vec<Term>) -> NcPoly {
        NcPoly { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> Option<&Word> {
        self.terms.first().map(|t| &t.word)
    }

    pub fn lc(&self) -> Option<&Coeff> {
        self.terms.first().map(|t| &t.coeff)
    }

    pub fn lt(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Longest word among the terms; 0 for the zero polynomial.
    pub fn max_word_len(&self) -> usize {
        self.terms.iter().map(|t| t.word.len()).max().unwrap_or(0)
    }

    pub fn coeff_of(&self, w: &Word) -> Option<&Coeff> {
        self.terms.iter().find(|t| &t.word == w).map(|t| &t.coeff)
    }
}

/// Polynomial arithmetic context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    pub ring: RingSpec,
    pub order: AdmissibleOrder,
    pub alphabet: Alphabet,
}

impl PolyRing {
    pub fn new(ring: RingSpec, order: AdmissibleOrder, alphabet: Alphabet) -> Self {
        PolyRing { ring, order, alphabet }
    }

    /// Same order and alphabet over another coefficient ring.
    pub fn with_ring(&self, ring: RingSpec) -> Self {
        PolyRing {
            ring,
            order: self.order.clone(),
            alphabet: self.alphabet.clone(),
        }
    }

    pub fn zero(&self) -> NcPoly {
        NcPoly::default()
    }

    pub fn monomial(&self, c: Coeff, w: Word) -> NcPoly {
        if c.is_zero() {
            NcPoly::default()
        } else {
            NcPoly {
                terms: vec![Term { coeff: c, word: w }],
            }
        }
    }

    /// Builds a polynomial from arbitrary terms, merging repeated words.
    /// Coefficients must already be valid ring elements.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Coeff, Word)>) -> NcPoly {
        let mut acc: HashMap<Word, Coeff> = HashMap::new();
        for (c, w) in terms {
            let e = acc.entry(w).or_insert_with(Coeff::zero);
            *e = self.ring.add(e, &c);
        }
        let mut terms: Vec<Term> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(word, coeff)| Term { coeff, word })
            .collect();
        terms.sort_by(|a, b| self.order.compare(&b.word, &a.word));
        NcPoly { terms }
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_ints(&self, terms: &[(i64, &Word)]) -> NcPoly {
        self.from_terms(terms.iter().map(|(c, w)| (self.ring.from_int(*c), (*w).clone())))
    }

    pub fn add(&self, f: &NcPoly, g: &NcPoly) -> NcPoly {
        self.combine(f, g, |c| c.clone())
    }

    pub fn sub(&self, f: &NcPoly, g: &NcPoly) -> NcPoly {
        self.combine(f, g, |c| self.ring.neg(c))
    }

    /// Merge of two sorted term lists, `g`'s coefficients mapped by `map`.
    fn combine(&self, f: &NcPoly, g: &NcPoly, map: impl Fn(&Coeff) -> Coeff) -> NcPoly {
        let (a, b) = (&f.terms, &g.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match self.order.compare(&a[i].word, &b[j].word) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term {
                        coeff: map(&b[j].coeff),
                        word: b[j].word.clone(),
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = self.ring.add(&a[i].coeff, &map(&b[j].coeff));
                    if !c.is_zero() {
                        out.push(Term {
                            coeff: c,
                            word: a[i].word.clone(),
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|t| Term {
            coeff: map(&t.coeff),
            word: t.word.clone(),
        }));
        NcPoly { terms: out }
    }

    /// `f` without its leading term.
    pub fn drop_leading(&self, mut f: NcPoly) -> NcPoly {
        if !f.terms.is_empty() {
            f.terms.remove(0);
        }
        f
    }

    pub fn neg(&self, f: &NcPoly) -> NcPoly {
        NcPoly {
            terms: f
                .terms
                .iter()
                .map(|t| Term {
                    coeff: self.ring.neg(&t.coeff),
                    word: t.word.clone(),
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &Coeff, f: &NcPoly) -> NcPoly {
        self.scaled_sandwich(c, &Word::empty(), f, &Word::empty())
    }

    /// `u·f·v`. The order is admissible, so the term order is preserved.
    pub fn sandwich(&self, u: &Word, f: &NcPoly, v: &Word) -> NcPoly {
        NcPoly {
            terms: f
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.clone(),
                    word: t.word.sandwich(u, v),
                })
                .collect(),
        }
    }

    /// `c·u·f·v`, dropping terms annihilated by `c`.
    pub fn scaled_sandwich(&self, c: &Coeff, u: &Word, f: &NcPoly, v: &Word) -> NcPoly {
        NcPoly {
            terms: f
                .terms
                .iter()
                .filter_map(|t| {
                    let coeff = self.ring.mul(c, &t.coeff);
                    (!coeff.is_zero()).then(|| Term {
                        coeff,
                        word: t.word.sandwich(u, v),
                    })
                })
                .collect(),
        }
    }

    /// `h - c·u·f·v`.
    pub fn sub_scaled_sandwich(&self, h: &NcPoly, c: &Coeff, u: &Word, f: &NcPoly, v: &Word) -> NcPoly {
        let prod = self.scaled_sandwich(c, u, f, v);
        self.sub(h, &prod)
    }

    pub fn mul(&self, f: &NcPoly, g: &NcPoly) -> NcPoly {
        let mut terms = Vec::with_capacity(f.len() * g.len());
        for a in &f.terms {
            for b in &g.terms {
                terms.push((self.ring.mul(&a.coeff, &b.coeff), a.word.concat(&b.word)));
            }
        }
        self.from_terms(terms)
    }

    /// `(LM, LC, LT)` of a nonzero polynomial.
    pub fn leading<'a>(&self, f: &'a NcPoly) -> Result<(&'a Word, &'a Coeff, &'a Term), PolyError> {
        let t = f.terms.first().ok_or(PolyError::ZeroPolynomial)?;
        Ok((&t.word, &t.coeff, t))
    }

    /// Re-expresses a polynomial from another ring in this one (see
    /// [`RingSpec::project`]), dropping vanished terms.
    pub fn project(&self, f: &NcPoly, from: &RingSpec) -> Result<NcPoly, PolyError> {
        let mut terms = Vec::with_capacity(f.len());
        for t in &f.terms {
            let c = self.ring.project(&t.coeff, from)?;
            if !c.is_zero() {
                terms.push(Term {
                    coeff: c,
                    word: t.word.clone(),
                });
            }
        }
        Ok(NcPoly { terms })
    }

    /// Checks the structural invariants: sorted strictly descending, no zero
    /// or invalid coefficients.
    pub fn is_canonical(&self, f: &NcPoly) -> bool {
        f.terms
            .iter()
            .all(|t| !t.coeff.is_zero() && self.ring.contains(&t.coeff))
            && f.terms
                .windows(2)
                .all(|w| self.order.compare(&w[0].word, &w[1].word) == Ordering::Greater)
    }

    /// Canonical text form: `4*x^3 - 2*x*y`, `15/2*y*z - 2`, `0`.
    pub fn format(&self, f: &NcPoly) -> String {
        if f.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, t) in f.terms.iter().enumerate() {
            let v = self.ring.signed_value(&t.coeff);
            let neg = v.is_negative();
            let mag = v.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let word = self.alphabet.format_word(&t.word);
            if t.word.is_empty() {
                out.push_str(&Coeff::raw(mag).to_string());
            } else if mag.is_one() {
                out.push_str(&word);
            } else {
                out.push_str(&Coeff::raw(mag).to_string());
                out.push('*');
                out.push_str(&word);
            }
        }
        out
    }

    pub fn format_term(&self, t: &Term) -> String {
        self.format(&self.monomial(t.coeff.clone(), t.word.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn ring(r: RingSpec, names: &[&str]) -> PolyRing {
        let a = Alphabet::new(names.iter().copied()).unwrap();
        PolyRing::new(r, AdmissibleOrder::graded_lex_natural(a.len()), a)
    }

    fn w(p: &PolyRing, s: &str) -> Word {
        p.alphabet.word(s).unwrap()
    }

    #[test]
    fn add_scale_examples() {
        let p = ring(RingSpec::modular(4).unwrap(), &["x", "y"]);
        let f = p.from_ints(&[(3, &w(&p, "xyx")), (-2, &w(&p, "xy"))]);
        assert!(p.add(&f, &p.neg(&f)).is_zero());
        let g = p.from_ints(&[(2, &w(&p, "xy"))]);
        assert!(p.scale(&p.ring.from_int(2), &g).is_zero());
        assert_eq!(p.add(&f, &g), p.from_ints(&[(3, &w(&p, "xyx"))]));
    }

    #[test]
    fn sandwich_examples() {
        let p = ring(RingSpec::integers(), &["x", "y", "z"]);
        let f = p.from_ints(&[(5, &w(&p, "xy")), (-1, &w(&p, "x"))]);
        let s = p.sandwich(&w(&p, "x"), &f, &w(&p, "x"));
        assert_eq!(s, p.from_ints(&[(5, &w(&p, "xxyx")), (-1, &w(&p, "xxx"))]));
        assert_eq!(p.sandwich(&Word::empty(), &f, &Word::empty()), f);
        let f2 = p.from_ints(&[(3, &w(&p, "xx")), (-1, &w(&p, "xz"))]);
        assert_eq!(
            p.sandwich(&w(&p, "z"), &f2, &w(&p, "yx")),
            p.from_ints(&[(3, &w(&p, "zxxyx")), (-1, &w(&p, "zxzyx"))])
        );
    }

    #[test]
    fn leading_examples() {
        let p = ring(RingSpec::modular(16).unwrap(), &["x", "y"]);
        let f = p.from_ints(&[(4, &w(&p, "xyxy")), (-2, &w(&p, "xy"))]);
        let (lm, lc, _) = p.leading(&f).unwrap();
        assert_eq!((lm, lc), (&w(&p, "xyxy"), &p.ring.from_int(4)));
        let q = ring(RingSpec::modular(9).unwrap(), &["x", "y", "z", "w"]);
        let g = q.from_ints(&[(3, &w(&q, "yzwx")), (-2, &w(&q, "yx"))]);
        assert_eq!(q.leading(&g).unwrap().0, &w(&q, "yzwx"));
        assert_eq!(p.leading(&p.zero()).unwrap_err(), PolyError::ZeroPolynomial);
    }

    #[test]
    fn formatting() {
        let p = ring(RingSpec::modular(16).unwrap(), &["x", "y"]);
        let f = p.from_ints(&[(4, &w(&p, "xxx")), (14, &w(&p, "xy"))]);
        assert_eq!(p.format(&f), "4*x^3 - 2*x*y");
        assert_eq!(p.format(&p.zero()), "0");
        let q = ring(RingSpec::localized(vec![BigInt::from(2)]).unwrap(), &["x", "y"]);
        let g = q.from_terms([
            (
                q.ring.from_ratio(BigInt::from(-9), BigInt::from(2)).unwrap(),
                w(&q, "yxx"),
            ),
            (q.ring.from_int(1), w(&q, "y")),
            (q.ring.from_int(-1), Word::empty()),
        ]);
        assert_eq!(q.format(&g), "-9/2*y*x^2 + y - 1");
    }

    fn rings() -> Vec<PolyRing> {
        vec![
            ring(RingSpec::integers(), &["x", "y", "z"]),
            ring(RingSpec::modular(16).unwrap(), &["x", "y", "z"]),
            ring(RingSpec::modular(24).unwrap(), &["x", "y", "z"]),
            ring(RingSpec::localized(vec![BigInt::from(3)]).unwrap(), &["x", "y", "z"]),
        ]
    }

    fn poly_strategy() -> impl Strategy<Value = Vec<(i64, Vec<u16>)>> {
        prop::collection::vec((-20i64..20, prop::collection::vec(0u16..3, 0..5)), 0..6)
    }

    fn build(p: &PolyRing, raw: &[(i64, Vec<u16>)]) -> NcPoly {
        p.from_terms(raw.iter().map(|(c, l)| (p.ring.from_int(*c), Word::from(l.clone()))))
    }

    proptest! {
        #[test]
        fn module_axioms(ri in 0usize..4, a in poly_strategy(), b in poly_strategy(), c in poly_strategy(), k in -9i64..9) {
            let p = &rings()[ri];
            let (f, g, h) = (build(p, &a), build(p, &b), build(p, &c));
            prop_assert!(p.is_canonical(&f));
            prop_assert_eq!(p.add(&f, &g), p.add(&g, &f));
            prop_assert_eq!(p.add(&p.add(&f, &g), &h), p.add(&f, &p.add(&g, &h)));
            let k = p.ring.from_int(k);
            prop_assert_eq!(p.scale(&k, &p.add(&f, &g)), p.add(&p.scale(&k, &f), &p.scale(&k, &g)));
            prop_assert!(p.is_canonical(&p.sub(&f, &g)));
            prop_assert_eq!(p.sub(&f, &g), p.add(&f, &p.neg(&g)));
        }

        #[test]
        fn sandwich_composes(ri in 0usize..4, a in poly_strategy(),
                             u in prop::collection::vec(0u16..3, 0..3), u2 in prop::collection::vec(0u16..3, 0..3),
                             v in prop::collection::vec(0u16..3, 0..3), v2 in prop::collection::vec(0u16..3, 0..3)) {
            let p = &rings()[ri];
            let f = build(p, &a);
            let (u, u2, v, v2) = (Word::from(u), Word::from(u2), Word::from(v), Word::from(v2));
            let lhs = p.sandwich(&u, &p.sandwich(&u2, &f, &v2), &v);
            prop_assert_eq!(&lhs, &p.sandwich(&u.concat(&u2), &f, &v2.concat(&v)));
            prop_assert!(p.is_canonical(&lhs));
            if !f.is_zero() {
                prop_assert_eq!(lhs.lm().unwrap(), &f.lm().unwrap().sandwich(&u.concat(&u2), &v2.concat(&v)));
            }
        }

        #[test]
        fn mul_matches_sandwich_on_monomials(ri in 0usize..4, a in poly_strategy(), u in prop::collection::vec(0u16..3, 0..3)) {
            let p = &rings()[ri];
            let f = build(p, &a);
            let u = Word::from(u);
            let m = p.monomial(p.ring.from_int(1), u.clone());
            prop_assert_eq!(p.mul(&m, &f), p.sandwich(&u, &f, &Word::empty()));
            prop_assert_eq!(p.mul(&f, &m), p.sandwich(&Word::empty(), &f, &u));
        }
    }
}
