//! Braid clusters and contracted reduced expressions
//! `a_0 c_1 a_1 ⋯ c_M a_M` of maximally-clustered permutations.

use std::collections::HashSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heap::Heap;
use crate::perm::{is_maximally_clustered, Permutation};
use crate::words::{evaluate, format_letters, is_reduced};

/// The canonical braid cluster `s_{m+1} ⋯ s_{m+k} s_{m+k+1} s_{m+k} ⋯ s_{m+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidCluster {
    pub m: usize,
    pub k: usize,
}

impl BraidCluster {
    pub fn letters(&self) -> Vec<usize> {
        (self.m + 1..=self.m + self.k + 1)
            .chain((self.m + 1..=self.m + self.k).rev())
            .collect()
    }

    pub fn len(&self) -> usize {
        2 * self.k + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Offset of the central braid `s_{m+k} s_{m+k+1} s_{m+k}` inside the cluster.
    pub fn central_offset(&self) -> usize {
        self.k - 1
    }

    /// Generators used by the cluster.
    pub fn support(&self) -> Range<usize> {
        self.m + 1..self.m + self.k + 2
    }
}

/// Rewrites a braid cluster into its canonical form.
pub fn canonicalize_cluster(letters: &[usize]) -> Result<BraidCluster> {
    let bad = |why: &str| Error::NotABraidCluster(format!("{} ({why})", format_letters(letters)));
    let len = letters.len();
    if len < 3 || len.is_multiple_of(2) {
        return Err(bad("length must be odd and at least 3"));
    }
    let k = len / 2;
    if (0..k).any(|p| letters[p] != letters[len - 1 - p]) {
        return Err(bad("not a palindrome"));
    }
    let head = &letters[..=k];
    if head.contains(&0) {
        return Err(bad("generator indices start at 1"));
    }
    for p in 0..k {
        let partners = head[p + 1..]
            .iter()
            .filter(|&&q| q.abs_diff(head[p]) == 1)
            .count();
        if partners != 1 {
            return Err(bad("a letter lacks a unique non-commuting partner"));
        }
    }
    let distinct: HashSet<usize> = head.iter().copied().collect();
    let lo = *head.iter().min().unwrap();
    let hi = *head.iter().max().unwrap();
    if distinct.len() != k + 1 || hi - lo != k {
        return Err(bad("generators do not form a path"));
    }
    let cluster = BraidCluster { m: lo - 1, k };
    let rank = hi + 1;
    if evaluate(rank, letters)? != evaluate(rank, &cluster.letters())? {
        return Err(bad("not equal to the canonical cluster"));
    }
    Ok(cluster)
}

/// A reduced word split as `a_0 c_1 a_1 ⋯ c_M a_M`.
///
/// `boundaries` has `2M + 2` entries; segment `j` occupies
/// `word[boundaries[j]..boundaries[j + 1]]`, with even segments filler and
/// odd segments clusters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "DecompositionRepr", from = "DecompositionRepr")]
pub struct ClusterDecomposition {
    rank: usize,
    word: Vec<usize>,
    boundaries: Vec<usize>,
    clusters: Vec<BraidCluster>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionRepr {
    rank: usize,
    word: Vec<usize>,
    boundaries: Vec<usize>,
    clusters: Vec<BraidCluster>,
    /// 1-based positions of each central braid; informational only.
    #[serde(default, skip_deserializing)]
    central_braids: Vec<[usize; 3]>,
}

impl From<ClusterDecomposition> for DecompositionRepr {
    fn from(d: ClusterDecomposition) -> Self {
        let central_braids = d.central_positions().into_iter().map(|p| [p + 1, p + 2, p + 3]).collect();
        DecompositionRepr {
            rank: d.rank,
            word: d.word,
            boundaries: d.boundaries,
            clusters: d.clusters,
            central_braids,
        }
    }
}

impl From<DecompositionRepr> for ClusterDecomposition {
    fn from(r: DecompositionRepr) -> Self {
        ClusterDecomposition {
            rank: r.rank,
            word: r.word,
            boundaries: r.boundaries,
            clusters: r.clusters,
        }
    }
}

/// One segment of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Filler(Range<usize>),
    Cluster(BraidCluster, Range<usize>),
}

impl ClusterDecomposition {
    /// Assembles a decomposition without checking it; see [`verify_decomposition`].
    pub fn from_parts(rank: usize, word: Vec<usize>, boundaries: Vec<usize>, clusters: Vec<BraidCluster>) -> Self {
        ClusterDecomposition {
            rank,
            word,
            boundaries,
            clusters,
        }
    }

    /// A decomposition with no clusters.
    pub fn without_clusters(rank: usize, word: Vec<usize>) -> Self {
        let len = word.len();
        Self::from_parts(rank, word, vec![0, len], Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn clusters(&self) -> &[BraidCluster] {
        &self.clusters
    }

    /// `M`, the number of braid clusters.
    pub fn num_clusters(&self) -> usize {
        self.clusters.len()
    }

    /// Positions (0-based) occupied by cluster `j` (0-based).
    pub fn cluster_range(&self, j: usize) -> Range<usize> {
        self.boundaries[2 * j + 1]..self.boundaries[2 * j + 2]
    }

    /// Positions occupied by filler `a_j`.
    pub fn filler_range(&self, j: usize) -> Range<usize> {
        self.boundaries[2 * j]..self.boundaries[2 * j + 1]
    }

    pub fn segments(&self) -> Vec<Segment> {
        let mut out = Vec::with_capacity(2 * self.clusters.len() + 1);
        for j in 0..=self.clusters.len() {
            out.push(Segment::Filler(self.filler_range(j)));
            if j < self.clusters.len() {
                out.push(Segment::Cluster(self.clusters[j], self.cluster_range(j)));
            }
        }
        out
    }

    /// 0-based position of the first letter of each central braid.
    pub fn central_positions(&self) -> Vec<usize> {
        self.clusters
            .iter()
            .enumerate()
            .map(|(j, c)| self.boundaries[2 * j + 1] + c.central_offset())
            .collect()
    }

    /// Sum of the cluster half-lengths `k_j`.
    pub fn total_k(&self) -> usize {
        self.clusters.iter().map(|c| c.k).sum()
    }

    pub fn evaluate(&self) -> Result<Permutation> {
        evaluate(self.rank, &self.word)
    }
}

/// Result of [`verify_decomposition`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    pub ok: bool,
    pub reasons: Vec<String>,
}

/// Checks every structural invariant of a contracted expression.
pub fn verify_decomposition(d: &ClusterDecomposition) -> DecompositionCheck {
    let mut reasons = Vec::new();
    let len = d.word.len();
    let m = d.clusters.len();
    if d.boundaries.len() != 2 * m + 2 {
        reasons.push(format!("expected {} boundaries, found {}", 2 * m + 2, d.boundaries.len()));
        return DecompositionCheck { ok: false, reasons };
    }
    if d.boundaries[0] != 0 || *d.boundaries.last().unwrap() != len || d.boundaries.windows(2).any(|b| b[0] > b[1]) {
        reasons.push("segment boundaries do not tile the word".into());
        return DecompositionCheck { ok: false, reasons };
    }
    if let Some(&bad) = d.word.iter().find(|&&i| i == 0 || i >= d.rank) {
        reasons.push(format!("letter {bad} out of range for rank {}", d.rank));
        return DecompositionCheck { ok: false, reasons };
    }
    if !is_reduced(d.rank, &d.word) {
        reasons.push(format!("word {} is not reduced", format_letters(&d.word)));
    }
    for (j, c) in d.clusters.iter().enumerate() {
        let seg = &d.word[d.cluster_range(j)];
        if c.k == 0 || seg != c.letters().as_slice() {
            reasons.push(format!(
                "cluster {} is {} but (m={}, k={}) requires {}",
                j + 1,
                format_letters(seg),
                c.m,
                c.k,
                format_letters(&c.letters())
            ));
            continue;
        }
        for g in c.support() {
            let outside = d
                .word
                .iter()
                .enumerate()
                .filter(|&(pos, &l)| l == g && !d.cluster_range(j).contains(&pos))
                .count();
            if outside > 0 {
                reasons.push(format!("generator s_{g} of cluster {} appears outside it", j + 1));
            }
        }
    }
    for j in 0..=m {
        let seg = &d.word[d.filler_range(j)];
        if !Heap::from_letters(d.rank, seg).braid_sites().is_empty() {
            reasons.push(format!("filler a_{j} = {} contains a short braid", format_letters(seg)));
        }
    }
    if reasons.is_empty() {
        let n321 = d.evaluate().expect("letters checked").count_321();
        if d.total_k() != n321 {
            reasons.push(format!("cluster half-lengths sum to {} but N(w) = {n321}", d.total_k()));
        }
    }
    DecompositionCheck {
        ok: reasons.is_empty(),
        reasons,
    }
}

#[derive(Debug, Clone, Copy)]
enum Move {
    Simple(usize),
    Cluster(BraidCluster),
}

fn count_321(u: &[u8]) -> usize {
    Permutation::from_bytes_unchecked(u.to_vec()).count_321()
}

/// Consecutive `[(k+2) 2 3 ⋯ (k+1) 1]` occurrence starting at 0-based `p`,
/// returned as its half-length `k`.
fn consecutive_cluster_at(u: &[u8], p: usize) -> Option<usize> {
    let n = u.len();
    if p + 2 >= n || u[p] < u[p + 1] {
        return None;
    }
    let mut e = p + 1;
    while e + 1 < n && u[e + 1] > u[e] {
        e += 1;
    }
    let q = e + 1;
    if q < n && u[q] < u[p + 1] && u[p] > u[e] {
        Some(e - p)
    } else {
        None
    }
}

/// Length-decreasing moves available at `u` that keep the expression
/// contracted: a simple transposition that destroys no `[321]` instance, or
/// a cluster over a consecutive `[(k+2) 2 ⋯ (k+1) 1]` that destroys exactly `k`.
fn candidate_moves(u: &[u8]) -> Vec<(Move, Vec<u8>)> {
    let n = u.len();
    let base = count_321(u);
    let mut out = Vec::new();
    for p in 0..n {
        if let Some(k) = consecutive_cluster_at(u, p) {
            let mut next = u.to_vec();
            next.swap(p, p + k + 1);
            if base - count_321(&next) == k {
                out.push((Move::Cluster(BraidCluster { m: p, k }), next));
            }
        }
    }
    for i in 0..n.saturating_sub(1) {
        if u[i] > u[i + 1] {
            let above = u[..i].iter().filter(|&&x| x > u[i]).count();
            let below = u[i + 2..].iter().filter(|&&y| y < u[i + 1]).count();
            if above + below == 0 {
                let mut next = u.to_vec();
                next.swap(i, i + 1);
                out.push((Move::Simple(i + 1), next));
            }
        }
    }
    out
}

fn search(u: Vec<u8>, moves: &mut Vec<Move>, dead: &mut HashSet<Vec<u8>>) -> bool {
    if u.iter().enumerate().all(|(i, &v)| v as usize == i + 1) {
        return true;
    }
    if dead.contains(&u) {
        return false;
    }
    for (mv, next) in candidate_moves(&u) {
        moves.push(mv);
        if search(next, moves, dead) {
            return true;
        }
        moves.pop();
    }
    dead.insert(u);
    false
}

/// Produces a contracted reduced expression for a maximally-clustered `w`.
///
/// The 1-line notation is reduced to the identity by length-decreasing
/// moves, each either a transposition of adjacent entries that removes no
/// `[321]` instance or a braid cluster undoing a consecutive
/// `[(k+2) 2 ⋯ (k+1) 1]` instance; moves are tried leftmost first, clusters
/// before transpositions. Reading the recorded moves backwards gives the word.
pub fn contract(w: &Permutation) -> Result<ClusterDecomposition> {
    if !is_maximally_clustered(w) {
        return Err(Error::NotMaximallyClustered(w.to_string()));
    }
    let mut moves = Vec::new();
    let mut dead = HashSet::new();
    if !search(w.as_bytes().to_vec(), &mut moves, &mut dead) {
        return Err(Error::NotMaximallyClustered(w.to_string()));
    }
    let mut word = Vec::with_capacity(w.length());
    let mut boundaries = vec![0];
    let mut clusters = Vec::new();
    for mv in moves.iter().rev() {
        match *mv {
            Move::Simple(i) => word.push(i),
            Move::Cluster(c) => {
                boundaries.push(word.len());
                word.extend(c.letters());
                boundaries.push(word.len());
                clusters.push(c);
            }
        }
    }
    boundaries.push(word.len());
    Ok(ClusterDecomposition {
        rank: w.rank(),
        word,
        boundaries,
        clusters,
    })
}

/// Removes the last `k` letters of the final cluster `c_M`; the remaining
/// `k + 1` letters join the surrounding filler.
pub fn truncate_last_cluster(d: &ClusterDecomposition) -> Result<ClusterDecomposition> {
    let last = d.clusters.len().checked_sub(1).ok_or(Error::NoClusters)?;
    let c = d.clusters[last];
    let range = d.cluster_range(last);
    let cut = range.end - c.k..range.end;
    let mut word = d.word.clone();
    word.drain(cut);
    let mut boundaries: Vec<usize> = d.boundaries[..2 * last + 1].to_vec();
    boundaries.push(word.len());
    let mut clusters = d.clusters.clone();
    clusters.pop();
    Ok(ClusterDecomposition {
        rank: d.rank,
        word,
        boundaries,
        clusters,
    })
}
