//! Permutations in 1-line notation, classical pattern containment and the
//! pattern-defined classes (fully commutative, maximally clustered, freely
//! braided, hexagon-avoiding).
//!
//! Right multiplication by the generator `s_i` swaps the entries in positions
//! `i` and `i + 1`; `i` is a right descent of `w` exactly when `w(i) > w(i+1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest rank accepted by [`Permutation::new`].
pub const MAX_RANK: usize = 12;

/// A permutation of `{1, …, n}` stored in 1-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    oneline: Vec<u8>,
}

/// Positions `(i_1 < … < i_k)` (1-based) of an occurrence of a pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternInstance {
    pub positions: Vec<usize>,
}

/// The classical patterns forbidden in maximally-clustered permutations.
pub const MC_PATTERNS: [&[u8]; 3] = [&[3, 4, 2, 1], &[4, 3, 1, 2], &[4, 3, 2, 1]];

/// The patterns forbidden in freely-braided permutations.
pub const FB_PATTERNS: [&[u8]; 4] = [&[4, 2, 3, 1], &[3, 4, 2, 1], &[4, 3, 1, 2], &[4, 3, 2, 1]];

/// The four rank-8 patterns whose avoidance characterizes hexagon avoidance
/// inside the maximally-clustered and freely-braided classes.
pub const HEXAGON_PATTERNS: [&[u8]; 4] = [
    &[4, 6, 7, 1, 8, 2, 3, 5],
    &[4, 6, 7, 8, 1, 2, 3, 5],
    &[5, 6, 7, 1, 8, 2, 3, 4],
    &[5, 6, 7, 8, 1, 2, 3, 4],
];

/// The hexagon element `s_5 s_6 s_7 s_3 s_4 s_5 s_6 s_2 s_3 s_4 s_5 s_1 s_2 s_3`.
pub const HEXAGON: &[u8] = &[4, 6, 7, 1, 8, 2, 3, 5];

/// Turns a list of constant patterns into permutations.
pub fn patterns(list: &[&[u8]]) -> Vec<Permutation> {
    list.iter()
        .map(|p| Permutation::from_slice(p).expect("constant pattern is a permutation"))
        .collect()
}

/// Flags computed by [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub fully_commutative: bool,
    pub maximally_clustered: bool,
    pub freely_braided: bool,
    /// Avoids the four rank-8 hexagon patterns.
    pub hexagon_pattern_free: bool,
    /// Avoids all seven patterns `{3421, 4312, 4321}` ∪ hexagon patterns.
    pub mc_hexagon_avoiding: bool,
    /// Number of `[321]` instances.
    pub n321: usize,
}

impl Permutation {
    /// Builds a permutation from its 1-line notation.
    pub fn new(oneline: Vec<usize>) -> Result<Self> {
        let n = oneline.len();
        if n == 0 {
            return Err(Error::InvalidPermutation {
                position: 0,
                reason: "empty permutation".into(),
            });
        }
        if n > MAX_RANK {
            return Err(Error::RankTooLarge { rank: n, max: MAX_RANK });
        }
        let mut seen = [false; MAX_RANK + 1];
        for (pos, &v) in oneline.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation {
                    position: pos + 1,
                    reason: format!("value {v} is outside 1..={n}"),
                });
            }
            if seen[v] {
                return Err(Error::InvalidPermutation {
                    position: pos + 1,
                    reason: format!("value {v} is repeated"),
                });
            }
            seen[v] = true;
        }
        Ok(Permutation {
            oneline: oneline.into_iter().map(|v| v as u8).collect(),
        })
    }

    pub fn from_slice(oneline: &[u8]) -> Result<Self> {
        Self::new(oneline.iter().map(|&v| v as usize).collect())
    }

    pub(crate) fn from_bytes_unchecked(oneline: Vec<u8>) -> Self {
        Permutation { oneline }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            oneline: (1..=n as u8).collect(),
        }
    }

    /// The adjacent transposition `s_i` in `S_n`.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::LetterOutOfRange { letter: i, rank: n });
        }
        let mut w = Self::identity(n);
        w.oneline.swap(i - 1, i);
        Ok(w)
    }

    pub fn rank(&self) -> usize {
        self.oneline.len()
    }

    /// `w(i)` for 1-based `i`.
    pub fn get(&self, i: usize) -> usize {
        self.oneline[i - 1] as usize
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.oneline
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.oneline.iter().map(|&v| v as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.oneline.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        Ok(Permutation {
            oneline: other
                .oneline
                .iter()
                .map(|&j| self.oneline[j as usize - 1])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.rank()];
        for (i, &v) in self.oneline.iter().enumerate() {
            inv[v as usize - 1] = (i + 1) as u8;
        }
        Permutation { oneline: inv }
    }

    /// `w · s_i`: swaps positions `i` and `i + 1`.
    pub fn times_generator(&self, i: usize) -> Permutation {
        let mut w = self.clone();
        w.oneline.swap(i - 1, i);
        w
    }

    /// `s_i · w`: swaps the values `i` and `i + 1`.
    pub fn generator_times(&self, i: usize) -> Permutation {
        let oneline = self
            .oneline
            .iter()
            .map(|&v| match v as usize {
                x if x == i => (i + 1) as u8,
                x if x == i + 1 => i as u8,
                _ => v,
            })
            .collect();
        Permutation { oneline }
    }

    /// Coxeter length, i.e. the number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.oneline;
        let mut inv = 0;
        for a in 0..w.len() {
            for b in a + 1..w.len() {
                if w[a] > w[b] {
                    inv += 1;
                }
            }
        }
        inv
    }

    pub fn has_right_descent(&self, i: usize) -> bool {
        self.oneline[i - 1] > self.oneline[i]
    }

    pub fn has_left_descent(&self, i: usize) -> bool {
        self.inverse().has_right_descent(i)
    }

    /// Generator indices `i` with `w(i) > w(i+1)`, ascending.
    pub fn right_descents(&self) -> Vec<usize> {
        (1..self.rank()).filter(|&i| self.has_right_descent(i)).collect()
    }

    pub fn left_descents(&self) -> Vec<usize> {
        self.inverse().right_descents()
    }

    /// Number of strictly decreasing triples of 1-line entries.
    pub fn count_321(&self) -> usize {
        let w = &self.oneline;
        let n = w.len();
        (0..n)
            .map(|j| {
                let left = w[..j].iter().filter(|&&a| a > w[j]).count();
                let right = w[j + 1..].iter().filter(|&&c| c < w[j]).count();
                left * right
            })
            .sum()
    }

    /// Lexicographically smallest occurrence of `pattern`, if any.
    pub fn contains_pattern(&self, pattern: &Permutation) -> Option<PatternInstance> {
        let k = pattern.rank();
        if k > self.rank() {
            return None;
        }
        let mut chosen = Vec::with_capacity(k);
        if extend_instance(&self.oneline, &pattern.oneline, 0, &mut chosen) {
            Some(PatternInstance {
                positions: chosen.into_iter().map(|p| p + 1).collect(),
            })
        } else {
            None
        }
    }

    pub fn avoids(&self, pattern: &Permutation) -> bool {
        self.contains_pattern(pattern).is_none()
    }

    pub fn avoids_all(&self, patterns: &[Permutation]) -> bool {
        patterns.iter().all(|p| self.avoids(p))
    }

    /// All permutations of rank `n` in lexicographic order.
    pub fn all(n: usize) -> AllPermutations {
        AllPermutations {
            next: Some(Self::identity(n).oneline),
        }
    }

    fn write_compact(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank() <= 9 {
            for v in &self.oneline {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.oneline.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

fn extend_instance(w: &[u8], p: &[u8], start: usize, chosen: &mut Vec<usize>) -> bool {
    let depth = chosen.len();
    if depth == p.len() {
        return true;
    }
    let remaining = p.len() - depth;
    for pos in start..=w.len() - remaining {
        let fits = chosen
            .iter()
            .enumerate()
            .all(|(a, &q)| (w[q] < w[pos]) == (p[a] < p[depth]));
        if fits {
            chosen.push(pos);
            if extend_instance(w, p, pos + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

/// Iterator over `S_n` in lexicographic order.
pub struct AllPermutations {
    next: Option<Vec<u8>>,
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // standard next-permutation step
        let n = succ.len();
        if n > 1 {
            let mut i = n - 1;
            while i > 0 && succ[i - 1] >= succ[i] {
                i -= 1;
            }
            if i > 0 {
                let mut j = n - 1;
                while succ[j] <= succ[i - 1] {
                    j -= 1;
                }
                succ.swap(i - 1, j);
                succ[i..].reverse();
                self.next = Some(succ);
            }
        }
        Some(Permutation { oneline: current })
    }
}

/// Computes every classification flag by 1-line pattern avoidance.
pub fn classify(w: &Permutation) -> Classification {
    let n321 = w.count_321();
    let mc = w.avoids_all(&patterns(&MC_PATTERNS));
    let fb = mc && w.avoids(&Permutation::from_slice(&[4, 2, 3, 1]).unwrap());
    let hex_free = w.avoids_all(&patterns(&HEXAGON_PATTERNS));
    Classification {
        fully_commutative: n321 == 0,
        maximally_clustered: mc,
        freely_braided: fb,
        hexagon_pattern_free: hex_free,
        mc_hexagon_avoiding: mc && hex_free,
        n321,
    }
}

pub fn is_maximally_clustered(w: &Permutation) -> bool {
    w.avoids_all(&patterns(&MC_PATTERNS))
}

/// Avoids `{3421, 4312, 4321}` and the four hexagon patterns.
pub fn is_mc_hexagon_avoiding(w: &Permutation) -> bool {
    is_maximally_clustered(w) && w.avoids_all(&patterns(&HEXAGON_PATTERNS))
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_compact(f)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        self.write_compact(f)?;
        write!(f, "]")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `"3,4,1,2"` (optionally bracketed) and, for rank at most 9,
    /// the compact form `"3412"`.
    fn from_str(text: &str) -> Result<Self> {
        let trimmed = text.trim().trim_start_matches('[').trim_end_matches(']').trim();
        if trimmed.is_empty() {
            return Err(Error::InvalidPermutation {
                position: 0,
                reason: "empty input".into(),
            });
        }
        let values: Vec<usize> = if trimmed.contains(',') {
            trimmed
                .split(',')
                .enumerate()
                .map(|(i, tok)| {
                    tok.trim().parse::<usize>().map_err(|_| Error::InvalidPermutation {
                        position: i + 1,
                        reason: format!("'{}' is not a positive integer", tok.trim()),
                    })
                })
                .collect::<Result<_>>()?
        } else {
            trimmed
                .chars()
                .enumerate()
                .map(|(i, c)| match c.to_digit(10) {
                    Some(d) if d > 0 => Ok(d as usize),
                    _ => Err(Error::InvalidPermutation {
                        position: i + 1,
                        reason: format!("'{c}' is not a digit 1-9"),
                    }),
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
