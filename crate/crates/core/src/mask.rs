//! Masks on a fixed reduced word: subexpressions, defects, the Deodhar
//! bound, `10*`-avoidance, and the collapse map on `10*` instances.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cluster::{BraidCluster, ClusterDecomposition};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::words::{some_reduced_word, ReducedWord};

/// Longest word whose masks are enumerated exhaustively (`2^24` masks).
pub const MASK_LENGTH_CAP: usize = 24;

/// A binary vector aligned with the letters of a word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mask {
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(bits: Vec<bool>) -> Self {
        Mask { bits }
    }

    pub fn ones(len: usize) -> Self {
        Mask { bits: vec![true; len] }
    }

    pub fn zeros(len: usize) -> Self {
        Mask { bits: vec![false; len] }
    }

    /// Mask of length `len` whose binary value is `value`, position 1 being
    /// the most significant bit.
    pub fn from_value(len: usize, value: u64) -> Self {
        Mask {
            bits: (0..len).map(|j| value >> (len - 1 - j) & 1 == 1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bit at 0-based position `j`.
    pub fn bit(&self, j: usize) -> bool {
        self.bits[j]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Not all ones.
    pub fn is_proper(&self) -> bool {
        self.bits.iter().any(|&b| !b)
    }

    /// The mask with its last bit flipped.
    pub fn flip_last(&self) -> Mask {
        let mut bits = self.bits.clone();
        if let Some(b) = bits.last_mut() {
            *b = !*b;
        }
        Mask { bits }
    }
}

impl fmt::Display for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mask({self})")
    }
}

impl FromStr for Mask {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        text.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidMask(format!("unexpected character '{other}'"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(Mask::new)
    }
}

impl Serialize for Mask {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Mask {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Defect statistics of a mask.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskStats {
    /// 1-based positions `j` with `l(w^{σ[j-1]} w_j) < l(w^{σ[j-1]})`.
    pub defect_positions: Vec<usize>,
    pub zero_defects: usize,
    pub plain_zeros: usize,
    /// `d(σ)`, the number of defects.
    pub d: usize,
}

fn check_len(word_len: usize, mask: &Mask) -> Result<()> {
    if mask.len() != word_len {
        Err(Error::MaskLengthMismatch {
            mask: mask.len(),
            word: word_len,
        })
    } else {
        Ok(())
    }
}

/// The product `w^σ` of the letters selected by the mask.
pub fn subword_eval(word: &ReducedWord, mask: &Mask) -> Result<Permutation> {
    check_len(word.len(), mask)?;
    let mut u = Permutation::identity(word.rank()).as_bytes().to_vec();
    for (&i, &b) in word.letters().iter().zip(mask.bits()) {
        if b {
            u.swap(i - 1, i);
        }
    }
    Ok(Permutation::from_bytes_unchecked(u))
}

pub fn defect_stats(word: &ReducedWord, mask: &Mask) -> Result<MaskStats> {
    check_len(word.len(), mask)?;
    let mut u = Permutation::identity(word.rank()).as_bytes().to_vec();
    let mut stats = MaskStats {
        defect_positions: Vec::new(),
        zero_defects: 0,
        plain_zeros: 0,
        d: 0,
    };
    for (j, (&i, &b)) in word.letters().iter().zip(mask.bits()).enumerate() {
        let defect = u[i - 1] > u[i];
        if defect {
            stats.defect_positions.push(j + 1);
            stats.d += 1;
        }
        if b {
            u.swap(i - 1, i);
        } else if defect {
            stats.zero_defects += 1;
        } else {
            stats.plain_zeros += 1;
        }
    }
    Ok(stats)
}

/// For proper masks, zero-defects are strictly fewer than plain zeros; the
/// full mask is exempt.
pub fn deodhar_bound_holds(stats: &MaskStats, proper: bool) -> bool {
    !proper || stats.zero_defects < stats.plain_zeros
}

/// 0-based central-braid start positions where the mask reads `1, 0`.
pub fn ten_star_instances(d: &ClusterDecomposition, mask: &Mask) -> Result<Vec<usize>> {
    check_len(d.len(), mask)?;
    Ok(d.central_positions()
        .into_iter()
        .filter(|&p| mask.bit(p) && !mask.bit(p + 1))
        .collect())
}

pub fn is_10star_avoiding(d: &ClusterDecomposition, mask: &Mask) -> Result<bool> {
    Ok(ten_star_instances(d, mask)?.is_empty())
}

/// Which masks to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MaskFilter {
    All,
    TenStarAvoiding,
}

/// Masks on `d`'s word in binary-counter order (position 1 most significant).
pub fn enumerate_masks(d: &ClusterDecomposition, filter: MaskFilter) -> impl Iterator<Item = Mask> + '_ {
    let len = d.len();
    assert!(len < 64, "mask enumeration needs a word shorter than 64 letters");
    let centrals = d.central_positions();
    (0..1u64 << len).map(move |v| Mask::from_value(len, v)).filter(move |m| {
        filter == MaskFilter::All || centrals.iter().all(|&p| !(m.bit(p) && !m.bit(p + 1)))
    })
}

/// A mask reached by [`visit_masks`] together with its statistics.
pub struct MaskLeaf<'a> {
    pub bits: &'a [bool],
    /// 1-line notation of `w^σ`.
    pub product: &'a [u8],
    pub defects: usize,
    pub zero_defects: usize,
    pub plain_zeros: usize,
}

impl MaskLeaf<'_> {
    pub fn is_proper(&self) -> bool {
        self.bits.iter().any(|&b| !b)
    }
}

struct Walker<'a, F> {
    word: &'a [usize],
    central_start: Vec<bool>,
    filter: MaskFilter,
    product: Vec<u8>,
    bits: Vec<bool>,
    visit: F,
}

impl<F: FnMut(&MaskLeaf) -> ControlFlow<()>> Walker<'_, F> {
    fn go(&mut self, j: usize, defects: usize, zero_defects: usize, plain_zeros: usize) -> ControlFlow<()> {
        if j == self.word.len() {
            let leaf = MaskLeaf {
                bits: &self.bits,
                product: &self.product,
                defects,
                zero_defects,
                plain_zeros,
            };
            return (self.visit)(&leaf);
        }
        let i = self.word[j];
        let defect = self.product[i - 1] > self.product[i];
        let d = defects + defect as usize;
        let zero_allowed = self.filter == MaskFilter::All || j == 0 || !(self.central_start[j - 1] && self.bits[j - 1]);
        if zero_allowed {
            self.bits.push(false);
            let (zd, pz) = if defect { (zero_defects + 1, plain_zeros) } else { (zero_defects, plain_zeros + 1) };
            let flow = self.go(j + 1, d, zd, pz);
            self.bits.pop();
            flow?;
        }
        self.bits.push(true);
        self.product.swap(i - 1, i);
        let flow = self.go(j + 1, d, zero_defects, plain_zeros);
        self.product.swap(i - 1, i);
        self.bits.pop();
        flow
    }
}

/// Depth-first walk over the masks of `d`'s word with incremental defect
/// bookkeeping, in the same order as [`enumerate_masks`].
pub fn visit_masks<F>(d: &ClusterDecomposition, filter: MaskFilter, visit: F)
where
    F: FnMut(&MaskLeaf) -> ControlFlow<()>,
{
    let mut central_start = vec![false; d.len()];
    for p in d.central_positions() {
        central_start[p] = true;
    }
    let mut walker = Walker {
        word: d.word(),
        central_start,
        filter,
        product: Permutation::identity(d.rank()).as_bytes().to_vec(),
        bits: Vec::with_capacity(d.len()),
        visit,
    };
    let _ = walker.go(0, 0, 0, 0);
}

/// Every proper mask on the canonical reduced word of `w` satisfies the
/// Deodhar bound.
pub fn is_deodhar_element(w: &Permutation) -> Result<bool> {
    let word = some_reduced_word(w);
    if word.len() > MASK_LENGTH_CAP {
        return Err(Error::LengthCapExceeded {
            length: word.len(),
            cap: MASK_LENGTH_CAP,
        });
    }
    let d = ClusterDecomposition::without_clusters(w.rank(), word.letters().to_vec());
    let mut bounded = true;
    visit_masks(&d, MaskFilter::All, |leaf| {
        if leaf.is_proper() && leaf.zero_defects >= leaf.plain_zeros {
            bounded = false;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(bounded)
}

/// Where a collapse happened, enough to undo it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseSite {
    /// 0-based index of the cluster that was collapsed.
    pub cluster: usize,
    /// The cluster before the collapse.
    pub original: BraidCluster,
    /// 0-based position of the surviving entry.
    pub position: usize,
    /// Half-width `k` of the collapsed symmetric segment.
    pub width: usize,
}

/// Output of [`phi_collapse`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collapse {
    pub decomposition: ClusterDecomposition,
    pub mask: Mask,
    pub site: CollapseSite,
}

fn assemble(rank: usize, word: Vec<usize>, placed: Vec<(BraidCluster, usize)>) -> ClusterDecomposition {
    let mut boundaries = vec![0];
    let mut clusters = Vec::with_capacity(placed.len());
    for (c, start) in placed {
        boundaries.push(start);
        boundaries.push(start + c.len());
        clusters.push(c);
    }
    boundaries.push(word.len());
    ClusterDecomposition::from_parts(rank, word, boundaries, clusters)
}

fn placed_clusters(d: &ClusterDecomposition) -> Vec<(BraidCluster, usize)> {
    d.clusters()
        .iter()
        .enumerate()
        .map(|(j, &c)| (c, d.cluster_range(j).start))
        .collect()
}

/// Collapses the rightmost `10*` instance. Around the central braid at
/// positions `b, b+1, b+2` the mask reads `1⋯1 0 1⋯1 *` on the maximal
/// symmetric segment `b-k+1 ..= b+k+1` inside the cluster; the segment is
/// replaced by its first letter carrying the bit `1 - *`.
pub fn phi_collapse(d: &ClusterDecomposition, mask: &Mask) -> Result<Collapse> {
    let instances = ten_star_instances(d, mask)?;
    let b = *instances.iter().max().ok_or(Error::No10StarInstance)?;
    let j = d
        .central_positions()
        .iter()
        .position(|&p| p == b)
        .expect("instance sits on a central braid");
    let cluster = d.clusters()[j];
    let mut k = 1;
    while k < cluster.k && mask.bit(b - k) && mask.bit(b + k + 1) {
        k += 1;
    }
    let first = b + 1 - k;
    let terminal = b + k + 1;

    let mut word = d.word()[..=first].to_vec();
    word.extend_from_slice(&d.word()[terminal + 1..]);
    let mut bits = mask.bits()[..first].to_vec();
    bits.push(!mask.bit(terminal));
    bits.extend_from_slice(&mask.bits()[terminal + 1..]);

    let mut placed = Vec::with_capacity(d.num_clusters());
    for (idx, (c, start)) in placed_clusters(d).into_iter().enumerate() {
        match idx.cmp(&j) {
            std::cmp::Ordering::Less => placed.push((c, start)),
            std::cmp::Ordering::Equal => {
                if c.k > k {
                    placed.push((BraidCluster { m: c.m, k: c.k - k }, start));
                }
            }
            std::cmp::Ordering::Greater => placed.push((c, start - 2 * k)),
        }
    }
    Ok(Collapse {
        decomposition: assemble(d.rank(), word, placed),
        mask: Mask::new(bits),
        site: CollapseSite {
            cluster: j,
            original: cluster,
            position: first,
            width: k,
        },
    })
}

/// Inverse of [`phi_collapse`].
pub fn phi_expand(d: &ClusterDecomposition, mask: &Mask, site: &CollapseSite) -> Result<(ClusterDecomposition, Mask)> {
    check_len(d.len(), mask)?;
    let k = site.width;
    let pos = site.position;
    if pos >= d.len() || k == 0 || k > site.original.k {
        return Err(Error::InvalidMask("collapse site does not fit the decomposition".into()));
    }
    let kept = site.original.k > k;
    let placed_now = placed_clusters(d);
    let cluster_start = if kept {
        placed_now
            .get(site.cluster)
            .map(|&(_, s)| s)
            .ok_or_else(|| Error::InvalidMask("collapse site does not fit the decomposition".into()))?
    } else {
        pos
    };
    let offset = pos - cluster_start;
    let letters = site.original.letters();
    let segment = &letters[offset..=offset + 2 * k];

    let mut word = d.word()[..pos].to_vec();
    word.extend_from_slice(segment);
    word.extend_from_slice(&d.word()[pos + 1..]);

    let mut bits = mask.bits()[..pos].to_vec();
    bits.extend(std::iter::repeat_n(true, k));
    bits.push(false);
    bits.extend(std::iter::repeat_n(true, k - 1));
    bits.push(!mask.bit(pos));
    bits.extend_from_slice(&mask.bits()[pos + 1..]);

    let mut placed: Vec<(BraidCluster, usize)> = Vec::with_capacity(placed_now.len() + 1);
    let mut rest = placed_now.into_iter();
    placed.extend(rest.by_ref().take(site.cluster));
    if kept {
        rest.next();
    }
    placed.push((site.original, cluster_start));
    placed.extend(rest.map(|(c, s)| (c, s + 2 * k)));
    Ok((assemble(d.rank(), word, placed), Mask::new(bits)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::contract;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn m(s: &str) -> Mask {
        s.parse().unwrap()
    }

    fn word(rank: usize, letters: &[usize]) -> ReducedWord {
        ReducedWord::new(rank, letters.to_vec()).unwrap()
    }

    #[test]
    fn subword_examples() {
        let w = word(4, &[2, 3, 1, 2]);
        assert_eq!(subword_eval(&w, &Mask::ones(4)).unwrap(), p("3412"));
        assert_eq!(subword_eval(&w, &Mask::zeros(4)).unwrap(), Permutation::identity(4));
        assert_eq!(subword_eval(&word(3, &[1, 2, 1]), &m("101")).unwrap(), Permutation::identity(3));
        assert!(subword_eval(&w, &m("10")).is_err());
    }

    #[test]
    fn defect_examples() {
        let s = defect_stats(&word(3, &[1, 2, 1]), &m("100")).unwrap();
        assert_eq!(s.defect_positions, vec![3]);
        assert_eq!((s.zero_defects, s.plain_zeros, s.d), (1, 1, 1));
        assert!(!deodhar_bound_holds(&s, true));

        let s = defect_stats(&word(4, &[2, 3, 1, 2]), &Mask::ones(4)).unwrap();
        assert_eq!(s.d, 0);

        let w = word(4, &[2, 3, 1, 2]);
        let s = defect_stats(&w, &m("1001")).unwrap();
        assert_eq!(s.defect_positions, vec![4]);
        assert_eq!((s.zero_defects, s.plain_zeros, s.d), (0, 2, 1));
        assert_eq!(subword_eval(&w, &m("1001")).unwrap(), Permutation::identity(4));
        assert!(deodhar_bound_holds(&s, true));

        let s = defect_stats(&word(3, &[1, 2, 1]), &Mask::zeros(3)).unwrap();
        assert!(deodhar_bound_holds(&s, true));
    }

    #[test]
    fn defect_status_ignores_own_bit() {
        let words = [vec![1, 2, 1], vec![2, 3, 1, 2], vec![1, 2, 3, 2, 1], vec![2, 1, 3, 2, 4, 3, 5, 4, 1, 2, 3, 1]];
        for letters in words {
            let rank = letters.iter().max().unwrap() + 1;
            let Ok(w) = ReducedWord::new(rank, letters.clone()) else { continue };
            let len = w.len();
            for v in 0..1u64 << len {
                let mask = Mask::from_value(len, v);
                let stats = defect_stats(&w, &mask).unwrap();
                for j in 0..len {
                    let mut bits = mask.bits().to_vec();
                    bits[j] = !bits[j];
                    let flipped = defect_stats(&w, &Mask::new(bits)).unwrap();
                    assert_eq!(
                        stats.defect_positions.contains(&(j + 1)),
                        flipped.defect_positions.contains(&(j + 1))
                    );
                }
            }
        }
    }

    #[test]
    fn ten_star_examples() {
        let d = contract(&p("321")).unwrap();
        assert!(!is_10star_avoiding(&d, &m("100")).unwrap());
        assert!(is_10star_avoiding(&d, &Mask::ones(3)).unwrap());
        let d = contract(&p("4231")).unwrap();
        assert!(!is_10star_avoiding(&d, &m("01010")).unwrap());
        assert!(is_10star_avoiding(&d, &m("10001")).unwrap());
        assert!(is_10star_avoiding(&d, &m("10")).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let d = contract(&p("321")).unwrap();
        let avoiding: Vec<String> = enumerate_masks(&d, MaskFilter::TenStarAvoiding).map(|x| x.to_string()).collect();
        assert_eq!(avoiding, vec!["000", "001", "010", "011", "110", "111"]);
        assert_eq!(enumerate_masks(&d, MaskFilter::All).count(), 8);
        let fc = contract(&p("3412")).unwrap();
        assert_eq!(enumerate_masks(&fc, MaskFilter::TenStarAvoiding).count(), 16);
    }

    #[test]
    fn walker_agrees_with_enumeration() {
        for w in [p("321"), p("4231"), p("3412"), p("25314"), p("53412")] {
            let Ok(d) = contract(&w) else { continue };
            for filter in [MaskFilter::All, MaskFilter::TenStarAvoiding] {
                let listed: Vec<Mask> = enumerate_masks(&d, filter).collect();
                let mut walked = Vec::new();
                visit_masks(&d, filter, |leaf| {
                    let mask = Mask::new(leaf.bits.to_vec());
                    let rw = ReducedWord::new(d.rank(), d.word().to_vec()).unwrap();
                    let stats = defect_stats(&rw, &mask).unwrap();
                    assert_eq!(leaf.defects, stats.d);
                    assert_eq!(leaf.zero_defects, stats.zero_defects);
                    assert_eq!(leaf.plain_zeros, stats.plain_zeros);
                    assert_eq!(leaf.product, subword_eval(&rw, &mask).unwrap().as_bytes());
                    walked.push(mask);
                    ControlFlow::Continue(())
                });
                assert_eq!(walked, listed);
            }
        }
    }

    #[test]
    fn deodhar_examples() {
        assert!(!is_deodhar_element(&p("321")).unwrap());
        assert!(is_deodhar_element(&p("3412")).unwrap());
        assert!(!is_deodhar_element(&p("46718235")).unwrap());
    }

    #[test]
    fn collapse_examples() {
        let d = contract(&p("321")).unwrap();
        let c = phi_collapse(&d, &m("101")).unwrap();
        assert_eq!(c.decomposition.word(), &[1]);
        assert_eq!(c.mask, m("0"));
        assert_eq!(c.decomposition.num_clusters(), 0);

        let c = phi_collapse(&d, &m("100")).unwrap();
        assert_eq!(c.decomposition.word(), &[1]);
        assert_eq!(c.mask, m("1"));
        assert_eq!(c.decomposition.evaluate().unwrap(), p("213"));

        assert_eq!(phi_collapse(&d, &Mask::ones(3)), Err(Error::No10StarInstance));
    }

    #[test]
    fn collapse_keeps_a_smaller_cluster() {
        // [4231] = 1,2,3,2,1 with central braid at positions 2..4
        let d = contract(&p("4231")).unwrap();
        let c = phi_collapse(&d, &m("01011")).unwrap();
        assert_eq!(c.site.width, 1);
        assert_eq!(c.decomposition.word(), &[1, 2, 1]);
        assert_eq!(c.mask, m("001"));
        assert_eq!(c.decomposition.clusters(), &[BraidCluster { m: 0, k: 1 }]);
        let (back, mask) = phi_expand(&c.decomposition, &c.mask, &c.site).unwrap();
        assert_eq!(back, d);
        assert_eq!(mask, m("01011"));

        let c = phi_collapse(&d, &m("11010")).unwrap();
        assert_eq!(c.site.width, 2);
        assert_eq!(c.decomposition.word(), &[1]);
        assert_eq!(c.mask, m("1"));
        let (back, mask) = phi_expand(&c.decomposition, &c.mask, &c.site).unwrap();
        assert_eq!(back, d);
        assert_eq!(mask, m("11010"));
    }

    #[test]
    fn mask_text_round_trip() {
        let mask = m("10010");
        assert_eq!(mask.to_string(), "10010");
        assert!("10a".parse::<Mask>().is_err());
        assert_eq!(Mask::from_value(3, 0b100), m("100"));
        assert_eq!(m("101").flip_last(), m("100"));
    }
}
