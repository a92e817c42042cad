//! Words of the free monoid over a finite alphabet.
//!
//! A word is stored as a sequence of letter indices into an [`Alphabet`].
//! Multiplication is concatenation, the empty word is the identity, and
//! divisibility is subword containment `q = u·p·v`.

use std::fmt;

use thiserror::Error;

/// Index of a variable in its alphabet.
pub type Letter = u16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("alphabet must contain at least one variable")]
    EmptyAlphabet,
    #[error("variable name must be non-empty")]
    EmptyName,
    #[error("duplicate variable `{0}`")]
    DuplicateName(String),
    #[error("alphabet too large ({0} variables)")]
    TooLarge(usize),
    #[error("empty word has no well-defined occurrences")]
    EmptyPattern,
}

/// Ordered list of variable names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, WordError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        if names.len() > Letter::MAX as usize {
            return Err(WordError::TooLarge(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(WordError::EmptyName);
            }
            if names[..i].contains(n) {
                return Err(WordError::DuplicateName(n.clone()));
            }
        }
        Ok(Alphabet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|n| n == name).map(|i| i as Letter)
    }

    pub fn name(&self, letter: Letter) -> &str {
        &self.names[letter as usize]
    }

    /// Parses a compact word where every variable is a single character,
    /// e.g. `"xyyx"`. Intended for tests and examples.
    pub fn word(&self, compact: &str) -> Option<Word> {
        compact
            .chars()
            .map(|c| self.index_of(&c.to_string()))
            .collect::<Option<Vec<_>>>()
            .map(Word::from)
    }

    /// Formats a word with `*` separators, collapsing runs as powers:
    /// `x*y^2*x`. The empty word prints as `1`.
    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let mut j = i + 1;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            let run = j - i;
            if run == 1 {
                parts.push(self.name(letters[i]).to_string());
            } else {
                parts.push(format!("{}^{}", self.name(letters[i]), run));
            }
            i = j;
        }
        parts.join("*")
    }
}

/// Element of the free monoid: a finite sequence of letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `u · self · v`.
    pub fn sandwich(&self, u: &Word, v: &Word) -> Word {
        let mut out = Vec::with_capacity(u.len() + self.len() + v.len());
        out.extend_from_slice(&u.0);
        out.extend_from_slice(&self.0);
        out.extend_from_slice(&v.0);
        Word(out)
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    pub fn suffix_from(&self, n: usize) -> Word {
        Word(self.0[n..].to_vec())
    }

    /// Start positions of every occurrence of `pattern`, leftmost first.
    pub fn occurrences(&self, pattern: &Word) -> impl Iterator<Item = usize> + '_ {
        let (m, n) = (pattern.len(), self.len());
        let pat = pattern.0.clone();
        (0..(n + 1).saturating_sub(m)).filter(move |&i| self.0[i..i + m] == pat[..])
    }

    /// Leftmost occurrence of `pattern`, if any.
    pub fn find(&self, pattern: &Word) -> Option<usize> {
        let m = pattern.len();
        if m > self.len() {
            return None;
        }
        (0..=self.len() - m).find(|&i| self.0[i..i + m] == pattern.0[..])
    }

    /// True if `self` is a subword of `other` (`other = u·self·v`).
    pub fn divides(&self, other: &Word) -> bool {
        other.find(self).is_some()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let s: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// All pairs `(u, v)` with `q = u·p·v`, ordered by increasing `|u|`.
pub fn factorizations(p: &Word, q: &Word) -> Result<Vec<(Word, Word)>, WordError> {
    if p.is_empty() {
        return Err(WordError::EmptyPattern);
    }
    Ok(q.occurrences(p)
        .map(|i| (q.prefix(i), q.suffix_from(i + p.len())))
        .collect())
}

/// Overlaps of `m1` with `m2`: pairs `(p, q)` with `m1·p = q·m2` where a
/// proper suffix of `m1` equals a proper prefix of `m2`, and neither leading
/// word divides the opposite cofactor. Widest overlap first.
pub fn overlaps(m1: &Word, m2: &Word) -> Result<Vec<(Word, Word)>, WordError> {
    if m1.is_empty() || m2.is_empty() {
        return Err(WordError::EmptyPattern);
    }
    let (a, b) = (m1.letters(), m2.letters());
    let max_k = a.len().min(b.len()) - 1;
    let mut out = Vec::new();
    for k in (1..=max_k).rev() {
        if a[a.len() - k..] == b[..k] {
            let p = m2.suffix_from(k);
            let q = m1.prefix(a.len() - k);
            if !m1.divides(&q) && !m2.divides(&p) {
                out.push((p, q));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xyzw() -> Alphabet {
        Alphabet::new(["x", "y", "z", "w"]).unwrap()
    }

    #[test]
    fn concat_examples() {
        let a = xyzw();
        let w = |s| a.word(s).unwrap();
        assert_eq!(w("xy").concat(&w("x")), w("xyx"));
        assert_eq!(Word::empty().concat(&w("zy")), w("zy"));
        assert_eq!(w("yzw").concat(&w("x")), w("yzwx"));
        assert_eq!(Word::empty().len(), 0);
        assert_eq!(w("xyx").len(), 3);
        assert_eq!(w("yzwx").len(), 4);
    }

    #[test]
    fn factorization_examples() {
        let a = xyzw();
        let w = |s| a.word(s).unwrap();
        assert_eq!(
            factorizations(&w("xy"), &w("xyxy")).unwrap(),
            vec![(Word::empty(), w("xy")), (w("xy"), Word::empty())]
        );
        assert_eq!(factorizations(&w("yx"), &w("xyxy")).unwrap(), vec![(w("x"), w("y"))]);
        assert!(factorizations(&w("xx"), &w("xyx")).unwrap().is_empty());
        assert_eq!(factorizations(&Word::empty(), &w("x")), Err(WordError::EmptyPattern));
    }

    #[test]
    fn overlap_examples() {
        let a = xyzw();
        let w = |s| a.word(s).unwrap();
        assert!(overlaps(&w("xyx"), &w("xyx")).unwrap().contains(&(w("yx"), w("xy"))));
        assert_eq!(overlaps(&w("yzwx"), &w("xy")).unwrap(), vec![(w("y"), w("yzw"))]);
        assert_eq!(overlaps(&w("xy"), &w("yx")).unwrap(), vec![(w("x"), w("x"))]);
        // full containment is not an overlap
        assert!(overlaps(&w("xy"), &w("xy")).unwrap().is_empty());
        assert!(overlaps(&Word::empty(), &w("x")).is_err());
    }

    #[test]
    fn alphabet_validation() {
        assert_eq!(Alphabet::new(Vec::<String>::new()), Err(WordError::EmptyAlphabet));
        assert_eq!(Alphabet::new(["x", "x"]), Err(WordError::DuplicateName("x".into())));
        assert_eq!(Alphabet::new(["x", ""]), Err(WordError::EmptyName));
        let a = xyzw();
        assert_eq!(a.format_word(&a.word("xyyx").unwrap()), "x*y^2*x");
        assert_eq!(a.format_word(&Word::empty()), "1");
    }

    fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(0u16..3, 0..=max).prop_map(Word::from)
    }

    /// Every (p, q) with m1·p = q·m2, |p|,|q| < |m1|+|m2| over a 3-letter
    /// alphabet, filtered by the non-divisibility conditions and restricted
    /// to genuine overlaps (|q| < |m1|, |p| < |m2|, shared part non-empty).
    fn brute_overlaps(m1: &Word, m2: &Word) -> Vec<(Word, Word)> {
        let mut out = Vec::new();
        let total = m1.len() + m2.len();
        for q_len in 1..m1.len() {
            let k = m1.len() - q_len;
            if k == 0 || k >= m2.len() {
                continue;
            }
            let p_len = m2.len() - k;
            if p_len + q_len >= total {
                continue;
            }
            // Enumerate candidate p of this length over the alphabet.
            let count = 3usize.pow(p_len as u32);
            for code in 0..count {
                let mut c = code;
                let p: Word = (0..p_len)
                    .map(|_| {
                        let l = (c % 3) as u16;
                        c /= 3;
                        l
                    })
                    .collect::<Vec<_>>()
                    .into();
                let q = m1.prefix(q_len);
                if m1.concat(&p) == q.concat(m2) && !m1.divides(&q) && !m2.divides(&p) {
                    out.push((p, q));
                }
            }
        }
        out.sort_by_key(|(_, q)| q.len());
        out
    }

    proptest! {
        #[test]
        fn concat_associative(a in word_strategy(8), b in word_strategy(8), c in word_strategy(8)) {
            prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
            prop_assert_eq!(Word::empty().concat(&a), a.clone());
            prop_assert_eq!(a.concat(&Word::empty()), a.clone());
            prop_assert_eq!(a.concat(&b).len(), a.len() + b.len());
        }

        #[test]
        fn factorizations_reconstruct(p in word_strategy(3), q in word_strategy(8)) {
            prop_assume!(!p.is_empty());
            let fs = factorizations(&p, &q).unwrap();
            for (u, v) in &fs {
                prop_assert_eq!(&u.concat(&p.concat(v)), &q);
            }
            let lens: Vec<usize> = fs.iter().map(|(u, _)| u.len()).collect();
            prop_assert!(lens.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn overlaps_match_brute_force(m1 in word_strategy(5), m2 in word_strategy(5)) {
            prop_assume!(!m1.is_empty() && !m2.is_empty());
            let got = overlaps(&m1, &m2).unwrap();
            for (p, q) in &got {
                prop_assert_eq!(m1.concat(p), q.concat(&m2));
                prop_assert!(factorizations(&m1, q).unwrap().is_empty());
                prop_assert!(factorizations(&m2, p).unwrap().is_empty());
            }
            let mut sorted = got.clone();
            sorted.sort_by_key(|(_, q)| q.len());
            prop_assert_eq!(sorted, brute_overlaps(&m1, &m2));
        }
    }
}
