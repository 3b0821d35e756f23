//! Upper sets under heap containment, ideal patterns, and the comparison
//! of heap avoidance with 1-line pattern avoidance.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heap::{commutativity_classes, heap_contains_among, Heap, DEFAULT_CLASS_CAP};
use crate::perm::{patterns, Permutation, FB_PATTERNS, MC_PATTERNS};

/// Largest rank searched by this module.
pub const IDEAL_RANK_CAP: usize = 8;

/// A class of permutations defined by avoiding 1-line patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternClass {
    /// Maximally clustered.
    Mc,
    /// Freely braided.
    Fb,
    /// Every permutation.
    All,
}

impl PatternClass {
    pub fn name(&self) -> &'static str {
        match self {
            PatternClass::Mc => "mc",
            PatternClass::Fb => "fb",
            PatternClass::All => "all",
        }
    }

    /// The defining pattern set.
    pub fn patterns(&self) -> Vec<Permutation> {
        match self {
            PatternClass::Mc => patterns(&MC_PATTERNS),
            PatternClass::Fb => patterns(&FB_PATTERNS),
            PatternClass::All => Vec::new(),
        }
    }

    pub fn contains(&self, w: &Permutation) -> bool {
        w.avoids_all(&self.patterns())
    }

    /// Members of rank `n`, in lexicographic order.
    pub fn members(&self, n: usize) -> Vec<Permutation> {
        let pats = self.patterns();
        Permutation::all(n).filter(|w| w.avoids_all(&pats)).collect()
    }
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PatternClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mc" => Ok(PatternClass::Mc),
            "fb" => Ok(PatternClass::Fb),
            "all" => Ok(PatternClass::All),
            other => Err(Error::InvalidWord(format!("unknown pattern class '{other}'"))),
        }
    }
}

/// Members of a class at rank `r(h)` that heap-contain `h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpperSet {
    pub h: Permutation,
    pub class: PatternClass,
    pub members: Vec<Permutation>,
}

fn check_rank(rank: usize) -> Result<()> {
    if rank > IDEAL_RANK_CAP {
        Err(Error::RankCapExceeded {
            rank,
            cap: IDEAL_RANK_CAP,
        })
    } else {
        Ok(())
    }
}

/// Heap containment against fixed class lists of `h`.
fn contains_with(w: &Permutation, h_heaps: &[Heap], h: &Permutation) -> Result<bool> {
    if h.length() > w.length() || h.rank() > w.rank() {
        return Ok(false);
    }
    let w_heaps = commutativity_classes(w, DEFAULT_CLASS_CAP)?;
    Ok(heap_contains_among(&w_heaps, h_heaps, w.rank(), h.rank()))
}

pub fn upper_set(h: &Permutation, class: PatternClass) -> Result<UpperSet> {
    check_rank(h.rank())?;
    let h_heaps = commutativity_classes(h, DEFAULT_CLASS_CAP)?;
    let candidates = class.members(h.rank());
    let flags = candidates
        .par_iter()
        .map(|w| contains_with(w, &h_heaps, h))
        .collect::<Result<Vec<bool>>>()?;
    let members = candidates
        .into_iter()
        .zip(flags)
        .filter_map(|(w, keep)| keep.then_some(w))
        .collect();
    Ok(UpperSet {
        h: h.clone(),
        class,
        members,
    })
}

/// Every permutation of rank `r(p) + 1` containing `p` as a 1-line pattern,
/// obtained by inserting one new value at one position.
pub fn one_point_extensions(p: &Permutation) -> Vec<Permutation> {
    let r = p.rank();
    let mut out = BTreeSet::new();
    for pos in 0..=r {
        for value in 1..=r + 1 {
            let mut line: Vec<usize> = p.to_vec().into_iter().map(|x| if x >= value { x + 1 } else { x }).collect();
            line.insert(pos, value);
            out.insert(Permutation::new(line).expect("insertion keeps a bijection"));
        }
    }
    out.into_iter().collect()
}

/// Every member of the class at rank `r(p) + 1` that contains `p` as a
/// 1-line pattern also heap-contains `p`.
pub fn is_ideal_pattern(p: &Permutation, class: PatternClass) -> Result<bool> {
    Ok(ideal_pattern_failures(p, class)?.is_empty())
}

/// The witnesses against [`is_ideal_pattern`].
pub fn ideal_pattern_failures(p: &Permutation, class: PatternClass) -> Result<Vec<Permutation>> {
    if !class.contains(p) {
        return Err(Error::NotInClass(format!("{p} in class {class}")));
    }
    check_rank(p.rank())?;
    let p_heaps = commutativity_classes(p, DEFAULT_CLASS_CAP)?;
    let candidates: Vec<Permutation> = one_point_extensions(p).into_iter().filter(|q| class.contains(q)).collect();
    let flags = candidates
        .par_iter()
        .map(|q| contains_with(q, &p_heaps, p))
        .collect::<Result<Vec<bool>>>()?;
    Ok(candidates
        .into_iter()
        .zip(flags)
        .filter_map(|(q, ok)| (!ok).then_some(q))
        .collect())
}

/// Outcome of [`characterization_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterizationReport {
    pub class: PatternClass,
    pub n: usize,
    /// `P'`, the union of the upper sets of the forbidden heaps.
    pub extra_patterns: Vec<Permutation>,
    pub class_size: usize,
    pub heap_avoiding: usize,
    pub pattern_avoiding: usize,
    /// Elements on which the two descriptions disagree.
    pub counterexamples: Vec<Permutation>,
    pub equal: bool,
}

/// Compares heap avoidance of every `h ∈ forbidden` with 1-line avoidance of
/// the class patterns together with the upper sets of `forbidden`, over
/// the class at rank `n`.
pub fn characterization_check(class: PatternClass, forbidden: &[Permutation], n: usize) -> Result<CharacterizationReport> {
    check_rank(n)?;
    for h in forbidden {
        check_rank(h.rank())?;
    }
    let mut extra = BTreeSet::new();
    let mut h_heaps = Vec::with_capacity(forbidden.len());
    for h in forbidden {
        extra.extend(upper_set(h, class)?.members);
        h_heaps.push(commutativity_classes(h, DEFAULT_CLASS_CAP)?);
    }
    let extra_patterns: Vec<Permutation> = extra.into_iter().collect();
    let members = class.members(n);
    let verdicts = members
        .par_iter()
        .map(|w| -> Result<(bool, bool)> {
            let by_pattern = w.avoids_all(&extra_patterns);
            let mut by_heap = true;
            for (h, heaps) in forbidden.iter().zip(&h_heaps) {
                if h.rank() <= w.rank() && contains_with(w, heaps, h)? {
                    by_heap = false;
                    break;
                }
            }
            Ok((by_heap, by_pattern))
        })
        .collect::<Result<Vec<_>>>()?;
    let heap_avoiding = verdicts.iter().filter(|v| v.0).count();
    let pattern_avoiding = verdicts.iter().filter(|v| v.1).count();
    let counterexamples: Vec<Permutation> = members
        .iter()
        .zip(&verdicts)
        .filter(|(_, v)| v.0 != v.1)
        .map(|(w, _)| w.clone())
        .collect();
    Ok(CharacterizationReport {
        class,
        n,
        extra_patterns,
        class_size: members.len(),
        heap_avoiding,
        pattern_avoiding,
        equal: counterexamples.is_empty(),
        counterexamples,
    })
}

/// `{w : w ≥ h}` in two-sided weak order at rank `r(h)`: everything reached
/// from `h` by length-increasing multiplication by generators on either side.
pub fn two_sided_weak_upper_ideal(h: &Permutation) -> Vec<Permutation> {
    let n = h.rank();
    let mut seen = BTreeSet::from([h.clone()]);
    let mut queue = VecDeque::from([h.clone()]);
    while let Some(u) = queue.pop_front() {
        for i in 1..n {
            let candidates = [
                (!u.has_right_descent(i)).then(|| u.times_generator(i)),
                (!u.has_left_descent(i)).then(|| u.generator_times(i)),
            ];
            for next in candidates.into_iter().flatten() {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heap::heap_contains;
    use crate::perm::HEXAGON_PATTERNS;
    use crate::words::support;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn class_membership() {
        assert!(PatternClass::Mc.contains(&p("4231")));
        assert!(!PatternClass::Fb.contains(&p("4231")));
        assert!(!PatternClass::Mc.contains(&p("4321")));
        assert!(PatternClass::All.contains(&p("4321")));
        assert_eq!(PatternClass::Mc.members(4).len(), 21);
        assert_eq!("fb".parse::<PatternClass>().unwrap(), PatternClass::Fb);
        assert!("xx".parse::<PatternClass>().is_err());
    }

    #[test]
    fn upper_set_examples() {
        let u = upper_set(&p("321"), PatternClass::All).unwrap();
        assert_eq!(u.members, vec![p("321")]);
        let u = upper_set(&p("1"), PatternClass::Mc).unwrap();
        assert_eq!(u.members, vec![p("1")]);
        assert_eq!(upper_set(&Permutation::identity(9), PatternClass::All).unwrap_err().kind(), "RankCapExceeded");
        let json = serde_json::to_string(&upper_set(&p("21"), PatternClass::All).unwrap()).unwrap();
        assert_eq!(json, r#"{"h":"21","class":"all","members":["21"]}"#);
    }

    #[test]
    fn upper_set_of_the_hexagon() {
        let u = upper_set(&p("46718235"), PatternClass::Mc).unwrap();
        assert_eq!(u.members, patterns(&HEXAGON_PATTERNS));
    }

    #[test]
    fn extensions_are_exactly_the_containing_permutations() {
        for pat in Permutation::all(4) {
            let listed = one_point_extensions(&pat);
            let brute: Vec<Permutation> = Permutation::all(5).filter(|q| !q.avoids(&pat)).collect();
            assert_eq!(listed, brute, "pattern {pat}");
        }
    }

    #[test]
    fn ideal_examples() {
        assert!(is_ideal_pattern(&p("21"), PatternClass::All).unwrap());
        assert_eq!(is_ideal_pattern(&p("4321"), PatternClass::Mc).unwrap_err().kind(), "NotInClass");
        let failures = ideal_pattern_failures(&p("321"), PatternClass::All).unwrap();
        for q in &failures {
            assert!(!heap_contains(q, &p("321"), DEFAULT_CLASS_CAP).unwrap());
        }
    }

    #[test]
    fn empty_forbidden_set_is_trivial() {
        for n in 1..=5 {
            for class in [PatternClass::Mc, PatternClass::Fb, PatternClass::All] {
                let r = characterization_check(class, &[], n).unwrap();
                assert!(r.equal);
                assert_eq!(r.heap_avoiding, r.class_size);
            }
        }
    }

    #[test]
    fn hexagon_needs_rank_eight() {
        let r = characterization_check(PatternClass::Fb, &[p("46718235")], 7).unwrap();
        assert!(r.equal);
        assert_eq!(r.heap_avoiding, r.class_size);
        assert_eq!(r.extra_patterns, patterns(&HEXAGON_PATTERNS));
    }

    #[test]
    fn connected_support_upper_set_is_a_weak_ideal() {
        for h in [p("321"), p("231"), p("3412"), p("4231")] {
            assert!(support(&h).connected);
            let u = upper_set(&h, PatternClass::All).unwrap();
            assert_eq!(u.members, two_sided_weak_upper_ideal(&h), "h = {h}");
        }
    }
}
