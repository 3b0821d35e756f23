//! Heaps of reduced words: labeled posets of commutativity classes, their
//! lattice-point drawings, string diagrams, and heap containment.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::{defect_stats, Mask};
use crate::perm::{patterns, Permutation, HEXAGON, HEXAGON_PATTERNS};
use crate::words::{format_letters, is_reduced, some_reduced_word, ReducedWord};

/// Default cap on the number of commutativity classes enumerated.
pub const DEFAULT_CLASS_CAP: usize = 10_000;

/// Longest word whose commutativity classes are enumerated.
pub const MAX_CLASS_WORD_LENGTH: usize = 24;

const MAX_HEAP_SIZE: usize = 64;

/// Lattice point of a heap entry: column is the generator index, level the
/// length of the longest chain below the entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeapEntry {
    pub column: usize,
    pub level: usize,
}

/// The heap poset of a word, indexed by word position.
#[derive(Debug, Clone)]
pub struct Heap {
    rank: usize,
    letters: Vec<usize>,
    below: Vec<u64>,
    above: Vec<u64>,
    entries: Vec<HeapEntry>,
    covers: Vec<(usize, usize)>,
}

/// A chain `a ⋖ b ⋖ c` labeled `s_i s_{i±1} s_i` whose interval is exactly
/// `{a, b, c}`, so some linear extension has it as a consecutive factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BraidSite {
    pub bottom: usize,
    pub middle: usize,
    pub top: usize,
}

fn bits(mut set: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let i = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(i)
        }
    })
}

impl Heap {
    /// Poset on the positions of `letters`: transitive closure of `i ⋖ j`
    /// for `i < j` with non-commuting letters.
    pub fn from_letters(rank: usize, letters: &[usize]) -> Heap {
        assert!(letters.len() <= MAX_HEAP_SIZE, "heap larger than {MAX_HEAP_SIZE} entries");
        let len = letters.len();
        let mut below = vec![0u64; len];
        for j in 0..len {
            for i in 0..j {
                if letters[i].abs_diff(letters[j]) <= 1 {
                    below[j] |= below[i] | (1 << i);
                }
            }
        }
        let mut above = vec![0u64; len];
        for (j, &b) in below.iter().enumerate() {
            for i in bits(b) {
                above[i] |= 1 << j;
            }
        }
        let mut covers = Vec::new();
        let mut entries = Vec::with_capacity(len);
        for j in 0..len {
            let mut level = 0;
            for i in bits(below[j]) {
                let blocked = bits(below[j]).any(|k| below[k] >> i & 1 == 1);
                if !blocked {
                    covers.push((i, j));
                }
                level = level.max(entries.get(i).map_or(0, |e: &HeapEntry| e.level) + 1);
            }
            entries.push(HeapEntry {
                column: letters[j],
                level,
            });
        }
        Heap {
            rank,
            letters: letters.to_vec(),
            below,
            above,
            entries,
            covers,
        }
    }

    pub fn from_word(word: &ReducedWord) -> Heap {
        Heap::from_letters(word.rank(), word.letters())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The word this heap was built from.
    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn label(&self, entry: usize) -> usize {
        self.letters[entry]
    }

    pub fn entries(&self) -> &[HeapEntry] {
        &self.entries
    }

    /// Hasse diagram edges `(lower, upper)`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn is_less(&self, a: usize, b: usize) -> bool {
        self.below[b] >> a & 1 == 1
    }

    /// Lexicographically smallest linear extension, read as a word. Two heaps
    /// of words are isomorphic labeled posets exactly when these agree.
    pub fn normal_form(&self) -> Vec<usize> {
        let len = self.len();
        let mut remaining: u64 = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        let mut out = Vec::with_capacity(len);
        while remaining != 0 {
            let next = bits(remaining)
                .filter(|&j| self.below[j] & remaining == 0)
                .min_by_key(|&j| self.letters[j])
                .expect("a finite poset has a minimal element");
            out.push(self.letters[next]);
            remaining &= !(1 << next);
        }
        out
    }

    pub fn is_isomorphic(&self, other: &Heap) -> bool {
        self.rank == other.rank && self.normal_form() == other.normal_form()
    }

    /// Convex chains labeled `s_i s_{i±1} s_i`.
    pub fn braid_sites(&self) -> Vec<BraidSite> {
        let mut out = Vec::new();
        for &(a, b) in &self.covers {
            for &(b2, c) in &self.covers {
                if b2 != b || self.letters[a] != self.letters[c] {
                    continue;
                }
                let between = self.above[a] & self.below[c];
                if between == 1 << b {
                    out.push(BraidSite {
                        bottom: a,
                        middle: b,
                        top: c,
                    });
                }
            }
        }
        out
    }

    /// A word in the commutativity class obtained by applying the braid
    /// relation at `site`.
    pub fn braid_move(&self, site: BraidSite) -> Vec<usize> {
        let trio = (1u64 << site.bottom) | (1 << site.middle) | (1 << site.top);
        let lower = self.below[site.top] & !trio;
        let mut word: Vec<usize> = bits(lower).map(|j| self.letters[j]).collect();
        let (i, j) = (self.letters[site.bottom], self.letters[site.middle]);
        word.extend([j, i, j]);
        let len = self.len();
        word.extend((0..len).filter(|&x| lower >> x & 1 == 0 && trio >> x & 1 == 0).map(|x| self.letters[x]));
        word
    }

    /// The heap with every label shifted by `offset` inside rank `rank`.
    pub fn shifted(&self, offset: usize, rank: usize) -> Heap {
        let letters: Vec<usize> = self.letters.iter().map(|l| l + offset).collect();
        Heap::from_letters(rank, &letters)
    }

    fn column_chain(&self, column: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.letters[j] == column).collect()
    }
}

/// The heap of a reduced word.
pub fn heap_of(rank: usize, letters: &[usize]) -> Result<Heap> {
    if let Some(&bad) = letters.iter().find(|&&i| i == 0 || i >= rank) {
        return Err(Error::LetterOutOfRange { letter: bad, rank });
    }
    if !is_reduced(rank, letters) {
        return Err(Error::NotReduced(format_letters(letters)));
    }
    if letters.len() > MAX_HEAP_SIZE {
        return Err(Error::CapExceeded {
            what: "heap size".into(),
            cap: MAX_HEAP_SIZE,
        });
    }
    Ok(Heap::from_letters(rank, letters))
}

/// All heaps of `w`, one per commutativity class, sorted by normal form.
/// Classes are explored by braid moves between heaps.
pub fn commutativity_classes(w: &Permutation, cap: usize) -> Result<Vec<Heap>> {
    let length = w.length();
    if length > MAX_CLASS_WORD_LENGTH {
        return Err(Error::CapExceeded {
            what: format!("length {length} of {w}"),
            cap: MAX_CLASS_WORD_LENGTH,
        });
    }
    let start = Heap::from_word(&some_reduced_word(w));
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(start.normal_form());
    let mut queue = VecDeque::from([start]);
    let mut out = Vec::new();
    while let Some(heap) = queue.pop_front() {
        for site in heap.braid_sites() {
            let next = Heap::from_letters(w.rank(), &heap.braid_move(site));
            if seen.insert(next.normal_form()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded {
                        what: format!("commutativity classes of {w}"),
                        cap,
                    });
                }
                queue.push_back(next);
            }
        }
        out.push(heap);
    }
    out.sort_by_cached_key(|h| h.normal_form());
    Ok(out)
}

/// Finds a convex labeled subposet of `big` isomorphic to `small`, where
/// `small` already carries `big`'s labels. Label-preserving embeddings send
/// each column chain to a consecutive run of the same column.
fn convex_embedding(big: &Heap, small: &Heap) -> Option<Vec<usize>> {
    let columns: Vec<usize> = small.letters.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let small_chains: Vec<Vec<usize>> = columns.iter().map(|&c| small.column_chain(c)).collect();
    let big_chains: Vec<Vec<usize>> = columns.iter().map(|&c| big.column_chain(c)).collect();
    if small_chains.iter().zip(&big_chains).any(|(s, b)| s.len() > b.len()) {
        return None;
    }
    let mut image = vec![usize::MAX; small.len()];
    if place_columns(big, small, &small_chains, &big_chains, 0, &mut image) {
        Some(image)
    } else {
        None
    }
}

fn place_columns(
    big: &Heap,
    small: &Heap,
    small_chains: &[Vec<usize>],
    big_chains: &[Vec<usize>],
    col: usize,
    image: &mut Vec<usize>,
) -> bool {
    if col == small_chains.len() {
        return is_convex_image(big, image);
    }
    let (s, b) = (&small_chains[col], &big_chains[col]);
    for start in 0..=b.len() - s.len() {
        for (t, &entry) in s.iter().enumerate() {
            image[entry] = b[start + t];
        }
        let consistent = s.iter().all(|&x| {
            (0..small.len())
                .filter(|&y| image[y] != usize::MAX)
                .all(|y| small.is_less(x, y) == big.is_less(image[x], image[y]) && small.is_less(y, x) == big.is_less(image[y], image[x]))
        });
        if consistent && place_columns(big, small, small_chains, big_chains, col + 1, image) {
            return true;
        }
    }
    for &entry in s {
        image[entry] = usize::MAX;
    }
    false
}

fn is_convex_image(big: &Heap, image: &[usize]) -> bool {
    let set: u64 = image.iter().fold(0, |acc, &i| acc | (1 << i));
    (0..big.len())
        .filter(|&y| set >> y & 1 == 0)
        .all(|y| big.below[y] & set == 0 || big.above[y] & set == 0)
}

/// Some heap of `w` contains a shifted heap of some class of `h` as a
/// convex labeled subposet.
pub fn heap_contains(w: &Permutation, h: &Permutation, cap: usize) -> Result<bool> {
    if h.rank() > w.rank() || h.length() > w.length() {
        return Ok(false);
    }
    let w_heaps = commutativity_classes(w, cap)?;
    let h_heaps = commutativity_classes(h, cap)?;
    Ok(heap_contains_among(&w_heaps, &h_heaps, w.rank(), h.rank()))
}

/// Containment test over precomputed class lists.
pub fn heap_contains_among(w_heaps: &[Heap], h_heaps: &[Heap], w_rank: usize, h_rank: usize) -> bool {
    if h_rank > w_rank {
        return false;
    }
    for offset in 0..=w_rank - h_rank {
        for hh in h_heaps {
            let shifted = hh.shifted(offset, w_rank);
            if w_heaps.iter().any(|hw| convex_embedding(hw, &shifted).is_some()) {
                return true;
            }
        }
    }
    false
}

fn hexagon() -> Permutation {
    Permutation::from_slice(HEXAGON).expect("constant")
}

/// Negation of `heap_contains(w, hexagon)`; maximally-clustered `w` take
/// the four-pattern shortcut.
pub fn heap_avoids_hexagon(w: &Permutation, cap: usize) -> Result<bool> {
    if w.rank() < 8 {
        return Ok(true);
    }
    if crate::perm::is_maximally_clustered(w) {
        return Ok(w.avoids_all(&patterns(&HEXAGON_PATTERNS)));
    }
    heap_avoids_hexagon_direct(w, cap)
}

/// Hexagon avoidance by direct convex-subposet search.
pub fn heap_avoids_hexagon_direct(w: &Permutation, cap: usize) -> Result<bool> {
    if w.rank() < 8 {
        return Ok(true);
    }
    Ok(!heap_contains(w, &hexagon(), cap)?)
}

/// One entry's effect on the strings passing through it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringEvent {
    pub entry: usize,
    pub column: usize,
    /// String labels meeting at the entry, left then right.
    pub strings: (usize, usize),
    pub crossed: bool,
}

/// Strings drawn bottom to top through a heap, crossing at entries with
/// mask value 1 and bouncing elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringDiagram {
    pub rank: usize,
    /// String label at each position along the top, left to right.
    pub top: Vec<usize>,
    pub events: Vec<StringEvent>,
}

impl StringDiagram {
    pub fn top_permutation(&self) -> Permutation {
        Permutation::new(self.top.clone()).expect("strings are a permutation")
    }
}

pub fn string_diagram(heap: &Heap, mask: Option<&Mask>) -> Result<StringDiagram> {
    if let Some(m) = mask {
        if m.len() != heap.len() {
            return Err(Error::MaskLengthMismatch {
                mask: m.len(),
                word: heap.len(),
            });
        }
    }
    let mut strings: Vec<usize> = (1..=heap.rank).collect();
    let mut events = Vec::with_capacity(heap.len());
    for (entry, &col) in heap.letters.iter().enumerate() {
        let crossed = mask.is_none_or(|m| m.bit(entry));
        events.push(StringEvent {
            entry,
            column: col,
            strings: (strings[col - 1], strings[col]),
            crossed,
        });
        if crossed {
            strings.swap(col - 1, col);
        }
    }
    Ok(StringDiagram {
        rank: heap.rank,
        top: strings,
        events,
    })
}

/// ASCII lattice drawing, top level first. With a mask, entries are
/// decorated: `#` mask value 1, `o` plain zero, `x` zero-defect.
pub fn render_heap(heap: &Heap, mask: Option<&Mask>) -> Result<String> {
    let marks: Vec<char> = match mask {
        None => vec!['#'; heap.len()],
        Some(m) => {
            let word = ReducedWord::new(heap.rank, heap.letters.clone())?;
            let stats = defect_stats(&word, m)?;
            (0..heap.len())
                .map(|j| {
                    if m.bit(j) {
                        '#'
                    } else if stats.defect_positions.contains(&(j + 1)) {
                        'x'
                    } else {
                        'o'
                    }
                })
                .collect()
        }
    };
    let cols = heap.rank.saturating_sub(1);
    let top = heap.entries.iter().map(|e| e.level).max();
    let mut out = String::new();
    if let Some(top) = top {
        for level in (0..=top).rev() {
            let mut line = String::new();
            for c in 1..=cols {
                let mark = heap
                    .entries
                    .iter()
                    .position(|e| e.level == level && e.column == c)
                    .map_or(' ', |j| marks[j]);
                let _ = write!(line, " {mark} ");
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
    }
    let axis: Vec<String> = (1..=cols).map(|c| format!("{:<3}", format!("s{c}"))).collect();
    out.push_str(axis.concat().trim_end());
    out.push('\n');
    if mask.is_some() {
        out.push_str("# mask 1   o plain zero   x zero-defect\n");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{all_reduced_words, evaluate};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn w(letters: &[usize], rank: usize) -> Permutation {
        evaluate(rank, letters).unwrap()
    }

    #[test]
    fn example_heap_structure() {
        let heap = heap_of(5, &[2, 3, 1, 2, 4]).unwrap();
        let mut covers = heap.covers().to_vec();
        covers.sort();
        // bottom s2 is covered by s1 and s3; the top s2 covers both; s4 covers s3
        assert_eq!(covers, vec![(0, 1), (0, 2), (1, 3), (1, 4), (2, 3)]);
        let levels: Vec<usize> = heap.entries().iter().map(|e| e.level).collect();
        assert_eq!(levels, vec![0, 1, 1, 2, 2]);
        assert_eq!(heap_of(2, &[1]).unwrap().len(), 1);
        let two = heap_of(4, &[1, 3]).unwrap();
        assert!(!two.is_less(0, 1) && !two.is_less(1, 0));
        assert!(matches!(heap_of(3, &[1, 1]), Err(Error::NotReduced(_))));
    }

    #[test]
    fn covers_only_between_adjacent_columns() {
        for x in Permutation::all(5) {
            let heap = Heap::from_word(&some_reduced_word(&x));
            for &(a, b) in heap.covers() {
                assert_eq!(heap.label(a).abs_diff(heap.label(b)), 1);
                assert!(heap.entries()[b].level > heap.entries()[a].level);
            }
        }
    }

    #[test]
    fn commuting_words_give_isomorphic_heaps() {
        for x in Permutation::all(5) {
            let words = all_reduced_words(&x, 10_000).unwrap();
            for a in &words {
                for b in &words {
                    let ha = Heap::from_word(a);
                    let hb = Heap::from_word(b);
                    let same_class = ha.normal_form() == hb.normal_form();
                    // commutation moves preserve the heap; braid moves change it
                    assert_eq!(same_class, commutation_equivalent(a.letters(), b.letters()), "{a} {b}");
                }
            }
        }
    }

    fn commutation_equivalent(a: &[usize], b: &[usize]) -> bool {
        let mut seen = BTreeSet::from([a.to_vec()]);
        let mut queue = VecDeque::from([a.to_vec()]);
        while let Some(word) = queue.pop_front() {
            if word == b {
                return true;
            }
            for i in 0..word.len().saturating_sub(1) {
                if word[i].abs_diff(word[i + 1]) >= 2 {
                    let mut next = word.clone();
                    next.swap(i, i + 1);
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        false
    }

    #[test]
    fn class_counts() {
        assert_eq!(commutativity_classes(&p("3412"), 100).unwrap().len(), 1);
        assert_eq!(commutativity_classes(&p("3214"), 100).unwrap().len(), 2);
        // oracle: all reduced words of [4231] quotiented by commutation
        let words = all_reduced_words(&p("4231"), 10_000).unwrap();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for word in &words {
            if !classes.iter().any(|c| commutation_equivalent(c, word.letters())) {
                classes.push(word.letters().to_vec());
            }
        }
        assert_eq!(commutativity_classes(&p("4231"), 100).unwrap().len(), classes.len());
        assert!(matches!(commutativity_classes(&p("4321"), 2), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn class_counts_match_brute_force() {
        for x in Permutation::all(5) {
            let words = all_reduced_words(&x, 10_000).unwrap();
            let forms: BTreeSet<Vec<usize>> = words.iter().map(|wd| Heap::from_word(wd).normal_form()).collect();
            assert_eq!(commutativity_classes(&x, 10_000).unwrap().len(), forms.len());
        }
    }

    #[test]
    fn containment_examples() {
        let big = w(&[2, 3, 1, 2, 4], 5);
        assert!(heap_contains(&big, &w(&[1, 2, 3], 4), 100).unwrap());
        assert!(!heap_contains(&big, &w(&[1, 2, 1], 3), 100).unwrap());
        assert!(heap_contains(&big, &big, 100).unwrap());
    }

    #[test]
    fn hexagon_examples() {
        assert!(!heap_avoids_hexagon(&p("46718235"), 100).unwrap());
        assert!(!heap_avoids_hexagon_direct(&p("46718235"), 100).unwrap());
        assert!(heap_avoids_hexagon(&p("4321"), 100).unwrap());
        assert!(heap_avoids_hexagon(&p("7654321"), 100).unwrap());
        assert!(!heap_avoids_hexagon_direct(&p("56781234"), 100).unwrap());
        assert!(heap_avoids_hexagon_direct(&p("12345678"), 100).unwrap());
    }

    #[test]
    fn hexagon_word_matches_element() {
        assert_eq!(w(&[5, 6, 7, 3, 4, 5, 6, 2, 3, 4, 5, 1, 2, 3], 8), p("46718235"));
    }

    #[test]
    fn string_diagrams() {
        let heap = heap_of(4, &[2, 3, 1, 2]).unwrap();
        let all = Mask::ones(4);
        assert_eq!(string_diagram(&heap, Some(&all)).unwrap().top_permutation(), p("3412"));
        assert_eq!(string_diagram(&heap, None).unwrap().top_permutation(), p("3412"));
        let heap = heap_of(3, &[1, 2, 1]).unwrap();
        let m: Mask = "101".parse().unwrap();
        assert_eq!(string_diagram(&heap, Some(&m)).unwrap().top_permutation(), Permutation::identity(3));
        for class in commutativity_classes(&p("3214"), 10).unwrap() {
            assert_eq!(string_diagram(&class, None).unwrap().top_permutation(), p("3214"));
        }
        assert!(matches!(
            string_diagram(&heap, Some(&Mask::ones(2))),
            Err(Error::MaskLengthMismatch { .. })
        ));
    }

    #[test]
    fn linear_extensions_evaluate_alike() {
        let heap = heap_of(5, &[2, 3, 1, 2, 4]).unwrap();
        let target = p("34152");
        assert_eq!(w(heap.letters(), 5), target);
        // every permutation of positions that respects the order is a linear extension
        let n = heap.len();
        let mut order: Vec<usize> = (0..n).collect();
        let mut count = 0;
        permute(&mut order, 0, &mut |ord| {
            let ok = (0..n).all(|a| (a + 1..n).all(|b| !heap.is_less(ord[b], ord[a])));
            if ok {
                count += 1;
                let word: Vec<usize> = ord.iter().map(|&j| heap.label(j)).collect();
                assert_eq!(w(&word, 5), target);
            }
        });
        assert!(count > 1);
    }

    fn permute(v: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, f);
            v.swap(k, i);
        }
    }

    #[test]
    fn rendering() {
        let heap = heap_of(5, &[2, 3, 1, 2, 4]).unwrap();
        let text = render_heap(&heap, None).unwrap();
        assert_eq!(text, "    #     #\n #     #\n    #\ns1 s2 s3 s4\n");
        let m: Mask = "10010".parse().unwrap();
        let text = render_heap(&heap, Some(&m)).unwrap();
        assert!(text.contains('x') || text.contains('o'));
        assert!(text.ends_with("x zero-defect\n"));
    }
}
