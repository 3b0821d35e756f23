//! Kazhdan–Lusztig polynomials from `10*`-avoiding masks, with the
//! classical descent recursion as an independent check.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cluster::{contract, ClusterDecomposition};
use crate::error::{Error, Result};
use crate::hecke::LaurentPoly;
use crate::mask::{visit_masks, MaskFilter};
use crate::perm::{is_mc_hexagon_avoiding, Permutation};
use crate::words::{bruhat_interval, some_reduced_word};

/// Longest `w` accepted by the recursion.
pub const RECURSION_LENGTH_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Masks,
    Recursion,
}

fn check_ranks(x: &Permutation, w: &Permutation) -> Result<()> {
    if x.rank() != w.rank() {
        return Err(Error::RankMismatch {
            left: x.rank(),
            right: w.rank(),
        });
    }
    Ok(())
}

fn check_domain(w: &Permutation) -> Result<()> {
    if is_mc_hexagon_avoiding(w) {
        Ok(())
    } else {
        Err(Error::NotMCHexagonAvoiding(w.to_string()))
    }
}

/// `Σ q^{d(σ)}` over the masks passing `filter`, grouped by `w^σ`.
pub fn mask_sums(d: &ClusterDecomposition, filter: MaskFilter) -> HashMap<Permutation, LaurentPoly> {
    let mut raw: HashMap<Vec<u8>, Vec<i64>> = HashMap::new();
    visit_masks(d, filter, |leaf| {
        let slot = raw.entry(leaf.product.to_vec()).or_default();
        if slot.len() <= leaf.defects {
            slot.resize(leaf.defects + 1, 0);
        }
        slot[leaf.defects] += 1;
        ControlFlow::Continue(())
    });
    raw.into_iter()
        .map(|(x, c)| (Permutation::from_bytes_unchecked(x), LaurentPoly::from_q_coeffs(&c)))
        .collect()
}

/// `P_{x,w}` as a sum over `10*`-avoiding masks on the contracted
/// expression of `w`.
pub fn kl_masks(x: &Permutation, w: &Permutation) -> Result<LaurentPoly> {
    check_ranks(x, w)?;
    Ok(kl_masks_column(w)?.remove(x).unwrap_or_default())
}

/// Every nonzero `P_{x,w}` from the mask formula.
pub fn kl_masks_column(w: &Permutation) -> Result<HashMap<Permutation, LaurentPoly>> {
    check_domain(w)?;
    Ok(mask_sums(&contract(w)?, MaskFilter::TenStarAvoiding))
}

/// `Σ q^{d(σ)}` over all masks of a fixed reduced word of `w`. Agrees with
/// `P_{x,w}` when `w` is fully commutative and hexagon-avoiding.
pub fn full_mask_column(w: &Permutation) -> HashMap<Permutation, LaurentPoly> {
    let word = some_reduced_word(w);
    let d = ClusterDecomposition::without_clusters(w.rank(), word.letters().to_vec());
    mask_sums(&d, MaskFilter::All)
}

type Key = u64;

fn key(bytes: &[u8]) -> Key {
    bytes.iter().fold(0, |acc, &b| acc << 4 | b as u64)
}

fn key_swap(k: Key, rank: usize, i: usize) -> Key {
    // positions i and i+1 (1-based) hold nibbles at shifts 4(rank-i) and 4(rank-i-1)
    let hi = 4 * (rank - i);
    let lo = hi - 4;
    let a = k >> hi & 0xf;
    let b = k >> lo & 0xf;
    k & !(0xf << hi) & !(0xf << lo) | b << hi | a << lo
}

fn key_descent(k: Key, rank: usize, i: usize) -> bool {
    let hi = 4 * (rank - i);
    (k >> hi & 0xf) > (k >> (hi - 4) & 0xf)
}

/// Polynomial in `q` as ascending coefficients without trailing zeros.
type QPoly = Vec<i64>;

fn qpoly_add_shifted(acc: &mut QPoly, p: &[i64], shift: usize, sign: i64) {
    if p.is_empty() {
        return;
    }
    if acc.len() < p.len() + shift {
        acc.resize(p.len() + shift, 0);
    }
    for (k, &c) in p.iter().enumerate() {
        acc[k + shift] += sign * c;
    }
}

fn qpoly_trim(p: &mut QPoly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

struct Column {
    polys: HashMap<Key, QPoly>,
    /// `(z, μ(z, w))` for `z < w` with `μ ≠ 0`.
    mu: Vec<(Key, usize, i64)>,
}

/// Memoized KL recursion for one rank. Uses, for a right descent `s` of
/// `w = vs`,
/// `P_{x,w} = q^{1-c} P_{xs,v} + q^c P_{x,v} - Σ_{z<v, zs<z} μ(z,v) q^{(l(w)-l(z))/2} P_{x,z}`
/// with `c = 1` if `xs < x` and `c = 0` otherwise.
pub struct KlRecursion {
    rank: usize,
    columns: HashMap<Key, Arc<Column>>,
}

impl KlRecursion {
    pub fn new(rank: usize) -> Self {
        KlRecursion {
            rank,
            columns: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of memoized columns.
    pub fn memo_size(&self) -> usize {
        self.columns.len()
    }

    pub fn clear(&mut self) {
        self.columns.clear();
    }

    fn check(&self, w: &Permutation) -> Result<()> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch {
                left: w.rank(),
                right: self.rank,
            });
        }
        if w.length() > RECURSION_LENGTH_CAP {
            return Err(Error::CapExceeded {
                what: format!("length {} of {w} in the KL recursion", w.length()),
                cap: RECURSION_LENGTH_CAP,
            });
        }
        Ok(())
    }

    pub fn poly(&mut self, x: &Permutation, w: &Permutation) -> Result<LaurentPoly> {
        self.check(w)?;
        check_ranks(x, w)?;
        let col = self.column(w);
        Ok(col
            .polys
            .get(&key(x.as_bytes()))
            .map(|c| LaurentPoly::from_q_coeffs(c))
            .unwrap_or_default())
    }

    /// Every `P_{x,w}` for `x ≤ w`.
    pub fn column_of(&mut self, w: &Permutation) -> Result<HashMap<Permutation, LaurentPoly>> {
        self.check(w)?;
        let col = self.column(w);
        Ok(bruhat_interval(w)
            .into_iter()
            .map(|x| {
                let p = col.polys.get(&key(x.as_bytes())).cloned().unwrap_or_default();
                (x, LaurentPoly::from_q_coeffs(&p))
            })
            .collect())
    }

    fn column(&mut self, w: &Permutation) -> Arc<Column> {
        let wk = key(w.as_bytes());
        if let Some(c) = self.columns.get(&wk) {
            return c.clone();
        }
        let col = Arc::new(self.build(w));
        self.columns.insert(wk, col.clone());
        col
    }

    fn build(&mut self, w: &Permutation) -> Column {
        let rank = self.rank;
        let lw = w.length();
        let interval = bruhat_interval(w);
        let Some(&s) = w.right_descents().first() else {
            let mut polys = HashMap::new();
            polys.insert(key(w.as_bytes()), vec![1]);
            return Column { polys, mu: Vec::new() };
        };
        let v = w.times_generator(s);
        let v_col = self.column(&v);
        let mut corrections: Vec<(Arc<Column>, usize, i64)> = Vec::new();
        for &(z, lz, mu) in &v_col.mu {
            if key_descent(z, rank, s) {
                let zp = Permutation::from_bytes_unchecked(unpack(z, rank));
                corrections.push((self.column(&zp), (lw - lz) / 2, mu));
            }
        }
        let mut polys: HashMap<Key, QPoly> = HashMap::with_capacity(interval.len());
        for x in &interval {
            let xk = key(x.as_bytes());
            let xs = key_swap(xk, rank, s);
            let c = key_descent(xk, rank, s) as usize;
            let mut p: QPoly = Vec::new();
            if let Some(a) = v_col.polys.get(&xs) {
                qpoly_add_shifted(&mut p, a, 1 - c, 1);
            }
            if let Some(b) = v_col.polys.get(&xk) {
                qpoly_add_shifted(&mut p, b, c, 1);
            }
            for (z_col, shift, mu) in &corrections {
                if let Some(pz) = z_col.polys.get(&xk) {
                    qpoly_add_shifted(&mut p, pz, *shift, -*mu);
                }
            }
            qpoly_trim(&mut p);
            if !p.is_empty() {
                polys.insert(xk, p);
            }
        }
        let mut mu = Vec::new();
        for x in &interval {
            let lx = x.length();
            if lx >= lw || (lw - lx).is_multiple_of(2) {
                continue;
            }
            let xk = key(x.as_bytes());
            let top = (lw - lx - 1) / 2;
            if let Some(c) = polys.get(&xk).and_then(|p| p.get(top)).copied() {
                if c != 0 {
                    mu.push((xk, lx, c));
                }
            }
        }
        Column { polys, mu }
    }
}

fn unpack(k: Key, rank: usize) -> Vec<u8> {
    (0..rank).map(|j| (k >> (4 * (rank - 1 - j)) & 0xf) as u8).collect()
}

/// `P_{x,w}` from a fresh recursion.
pub fn kl_recursion(x: &Permutation, w: &Permutation) -> Result<LaurentPoly> {
    check_ranks(x, w)?;
    KlRecursion::new(w.rank()).poly(x, w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlRow {
    pub x: Permutation,
    pub p: LaurentPoly,
}

/// `P_{x,w}` for every `x ≤ w`, ordered by length and then 1-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KLTable {
    pub w: Permutation,
    pub method: Method,
    pub rows: Vec<KlRow>,
}

impl KLTable {
    pub fn get(&self, x: &Permutation) -> Option<&LaurentPoly> {
        self.rows.iter().find(|r| &r.x == x).map(|r| &r.p)
    }

    /// One `x<TAB>P` line per row.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("x\tP\n");
        for row in &self.rows {
            let _ = writeln!(out, "{}\t{}", row.x, row.p);
        }
        out
    }
}

fn table_from(w: &Permutation, method: Method, mut column: HashMap<Permutation, LaurentPoly>) -> KLTable {
    let rows = bruhat_interval(w)
        .into_iter()
        .map(|x| {
            let p = column.remove(&x).unwrap_or_default();
            KlRow { x, p }
        })
        .collect();
    KLTable {
        w: w.clone(),
        method,
        rows,
    }
}

pub fn kl_table(w: &Permutation, method: Method) -> Result<KLTable> {
    let column = match method {
        Method::Masks => kl_masks_column(w)?,
        Method::Recursion => KlRecursion::new(w.rank()).column_of(w)?,
    };
    Ok(table_from(w, method, column))
}

/// [`kl_table`] with the recursion method and a shared memo.
pub fn kl_table_with(rec: &mut KlRecursion, w: &Permutation) -> Result<KLTable> {
    let column = rec.column_of(w)?;
    Ok(table_from(w, Method::Recursion, column))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub x: Permutation,
    pub masks: LaurentPoly,
    pub recursion: LaurentPoly,
}

/// Outcome of [`verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub w: Permutation,
    pub pairs_checked: usize,
    pub mismatches: Vec<Mismatch>,
    /// Rows that are not polynomials in `q` with nonnegative coefficients
    /// and constant term 1.
    pub malformed: Vec<Permutation>,
    pub degree_violations: Vec<Permutation>,
    /// Masks producing some `x` outside the Bruhat interval.
    pub stray: Vec<Permutation>,
    pub ok: bool,
}

/// Compares the mask formula with the recursion on every `x ≤ w`.
pub fn verify(w: &Permutation) -> Result<VerifyReport> {
    verify_with(&mut KlRecursion::new(w.rank()), w)
}

pub fn verify_with(rec: &mut KlRecursion, w: &Permutation) -> Result<VerifyReport> {
    let masks = kl_masks_column(w)?;
    verify_report(rec, w, masks)
}

/// [`verify_with`] on a precomputed mask column.
pub fn verify_report(rec: &mut KlRecursion, w: &Permutation, mut masks: HashMap<Permutation, LaurentPoly>) -> Result<VerifyReport> {
    let rec_column = rec.column_of(w)?;
    let lw = w.length() as i32;
    let mut report = VerifyReport {
        w: w.clone(),
        pairs_checked: 0,
        mismatches: Vec::new(),
        malformed: Vec::new(),
        degree_violations: Vec::new(),
        stray: Vec::new(),
        ok: true,
    };
    for x in bruhat_interval(w) {
        let m = masks.remove(&x).unwrap_or_default();
        let r = rec_column.get(&x).cloned().unwrap_or_default();
        report.pairs_checked += 1;
        if m.q_coeff(0) != 1 || !m.is_q_polynomial() || m.terms().any(|(_, c)| c < 0) {
            report.malformed.push(x.clone());
        }
        if x != *w {
            let bound = (lw - x.length() as i32 - 1) / 2;
            if m.q_degree().is_some_and(|d| d > bound) {
                report.degree_violations.push(x.clone());
            }
        } else if m != LaurentPoly::one() {
            report.malformed.push(x.clone());
        }
        if m != r {
            report.mismatches.push(Mismatch {
                x,
                masks: m,
                recursion: r,
            });
        }
    }
    let mut stray: Vec<Permutation> = masks.into_keys().collect();
    stray.sort();
    report.stray = stray;
    report.ok = report.mismatches.is_empty()
        && report.malformed.is_empty()
        && report.degree_violations.is_empty()
        && report.stray.is_empty();
    Ok(report)
}
