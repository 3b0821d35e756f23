//! Words in the adjacent transpositions, reduced expressions, support and
//! Bruhat order.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Evaluates an arbitrary word `s_{a_1} ⋯ s_{a_k}` by right multiplication
/// from the identity of rank `rank`.
pub fn evaluate(rank: usize, letters: &[usize]) -> Result<Permutation> {
    let mut w = Permutation::identity(rank).as_bytes().to_vec();
    for &i in letters {
        check_letter(rank, i)?;
        w.swap(i - 1, i);
    }
    Ok(Permutation::from_bytes_unchecked(w))
}

fn check_letter(rank: usize, i: usize) -> Result<()> {
    if i == 0 || i >= rank {
        Err(Error::LetterOutOfRange { letter: i, rank })
    } else {
        Ok(())
    }
}

/// True when every letter is in range and each right multiplication
/// increases length.
pub fn is_reduced(rank: usize, letters: &[usize]) -> bool {
    let mut w = Permutation::identity(rank).as_bytes().to_vec();
    for &i in letters {
        if i == 0 || i >= rank || w[i - 1] > w[i] {
            return false;
        }
        w.swap(i - 1, i);
    }
    true
}

/// Parses comma-separated generator indices such as `"2,3,1,2"`.
pub fn parse_letters(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidWord(format!("'{}' is not a generator index", tok.trim())))
        })
        .collect()
}

pub fn format_letters(letters: &[usize]) -> String {
    letters.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

/// A reduced expression for a permutation of a fixed rank.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedWord {
    rank: usize,
    letters: Vec<usize>,
}

impl ReducedWord {
    pub fn new(rank: usize, letters: Vec<usize>) -> Result<Self> {
        for &i in &letters {
            check_letter(rank, i)?;
        }
        if !is_reduced(rank, &letters) {
            return Err(Error::NotReduced(format_letters(&letters)));
        }
        Ok(ReducedWord { rank, letters })
    }

    pub(crate) fn new_unchecked(rank: usize, letters: Vec<usize>) -> Self {
        ReducedWord { rank, letters }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn evaluate(&self) -> Permutation {
        evaluate(self.rank, &self.letters).expect("letters validated on construction")
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.letters))
    }
}

impl fmt::Debug for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReducedWord({})", self)
    }
}

/// Canonical reduced word: repeatedly strip the smallest right descent.
pub fn some_reduced_word(w: &Permutation) -> ReducedWord {
    let mut u = w.clone();
    let mut stripped = Vec::with_capacity(w.length());
    while let Some(&i) = u.right_descents().first() {
        stripped.push(i);
        u = u.times_generator(i);
    }
    stripped.reverse();
    ReducedWord::new_unchecked(w.rank(), stripped)
}

/// Generators appearing in reduced words of `w`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Support {
    pub generators: BTreeSet<usize>,
    /// The generators form an interval of the Coxeter path graph.
    pub connected: bool,
}

impl Support {
    pub fn from_letters(letters: &[usize]) -> Self {
        let generators: BTreeSet<usize> = letters.iter().copied().collect();
        let connected = match (generators.first(), generators.last()) {
            (Some(&lo), Some(&hi)) => hi - lo + 1 == generators.len(),
            _ => true,
        };
        Support { generators, connected }
    }
}

/// `s_i ∈ supp(w)` exactly when `w` does not stabilize `{1, …, i}`.
pub fn support(w: &Permutation) -> Support {
    let mut max_prefix = 0;
    let letters: Vec<usize> = (1..w.rank())
        .filter(|&i| {
            max_prefix = max_prefix.max(w.get(i));
            max_prefix > i
        })
        .collect();
    Support::from_letters(&letters)
}

/// Bruhat comparison `x ≤ w`, by peeling the letters of one fixed reduced
/// word for `w` from the right: when `s` is a right descent of `w`,
/// `x ≤ w ⟺ min(x, xs) ≤ ws`.
pub fn bruhat_leq(x: &Permutation, w: &Permutation) -> Result<bool> {
    if x.rank() != w.rank() {
        return Err(Error::RankMismatch {
            left: x.rank(),
            right: w.rank(),
        });
    }
    if x.length() > w.length() {
        return Ok(false);
    }
    let word = some_reduced_word(w);
    let mut u = x.clone();
    for &s in word.letters().iter().rev() {
        if u.has_right_descent(s) {
            u = u.times_generator(s);
        }
    }
    Ok(u.is_identity())
}

/// Every `x ≤ w`, sorted by length and then 1-line notation. Uses that the
/// lower interval is the set of products of subwords of a reduced word.
pub fn bruhat_interval(w: &Permutation) -> Vec<Permutation> {
    let word = some_reduced_word(w);
    let mut set: BTreeSet<Permutation> = BTreeSet::new();
    set.insert(Permutation::identity(w.rank()));
    for &s in word.letters() {
        let extra: Vec<Permutation> = set.iter().map(|x| x.times_generator(s)).collect();
        set.extend(extra);
    }
    let mut out: Vec<Permutation> = set.into_iter().collect();
    sort_by_length(&mut out);
    out
}

/// Sorts by Coxeter length, then lexicographically by 1-line notation.
pub fn sort_by_length(perms: &mut [Permutation]) {
    perms.sort_by_cached_key(|p| (p.length(), p.clone()));
}

/// Every reduced word of `w`, or `CapExceeded` past `cap` words.
pub fn all_reduced_words(w: &Permutation, cap: usize) -> Result<Vec<ReducedWord>> {
    fn go(u: &Permutation, suffix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, cap: usize) -> Result<()> {
        if u.is_identity() {
            if out.len() >= cap {
                return Err(Error::CapExceeded {
                    what: "reduced word count".into(),
                    cap,
                });
            }
            out.push(suffix.iter().rev().copied().collect());
            return Ok(());
        }
        for i in u.right_descents() {
            suffix.push(i);
            go(&u.times_generator(i), suffix, out, cap)?;
            suffix.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(w, &mut Vec::new(), &mut out, cap)?;
    out.sort();
    Ok(out
        .into_iter()
        .map(|letters| ReducedWord::new_unchecked(w.rank(), letters))
        .collect())
}
