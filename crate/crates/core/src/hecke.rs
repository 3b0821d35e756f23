//! Laurent polynomials in `v = q^{1/2}` and the Hecke algebra of the
//! symmetric group in its `T`-basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::cluster::{contract, ClusterDecomposition};
use crate::error::{Error, Result};
use crate::mask::{visit_masks, Mask, MaskFilter};
use crate::perm::{is_mc_hexagon_avoiding, Permutation};
use crate::words::{evaluate, some_reduced_word, ReducedWord};
use crate::mask::defect_stats;

/// Integer Laurent polynomial in `v`, stored as exponent → coefficient.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "BTreeMap<i32, i64>", into = "BTreeMap<i32, i64>")]
pub struct LaurentPoly {
    terms: BTreeMap<i32, i64>,
}

impl From<BTreeMap<i32, i64>> for LaurentPoly {
    fn from(mut terms: BTreeMap<i32, i64>) -> Self {
        terms.retain(|_, c| *c != 0);
        LaurentPoly { terms }
    }
}

impl From<LaurentPoly> for BTreeMap<i32, i64> {
    fn from(p: LaurentPoly) -> Self {
        p.terms
    }
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `coeff · v^exp`.
    pub fn monomial(exp: i32, coeff: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// `q^k = v^{2k}`.
    pub fn q_pow(k: i32) -> Self {
        Self::monomial(2 * k, 1)
    }

    /// `Σ coeffs[k] q^k`.
    pub fn from_q_coeffs(coeffs: &[i64]) -> Self {
        let mut p = Self::zero();
        for (k, &c) in coeffs.iter().enumerate() {
            p.add_term(2 * k as i32, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.terms.entry(exp).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `v^exp`.
    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// Coefficient of `q^k`.
    pub fn q_coeff(&self, k: i32) -> i64 {
        self.coeff(2 * k)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Only even, nonnegative powers of `v`.
    pub fn is_q_polynomial(&self) -> bool {
        self.terms.keys().all(|&e| e >= 0 && e % 2 == 0)
    }

    /// Degree in `q` of a polynomial in `q` (`None` for zero).
    pub fn q_degree(&self) -> Option<i32> {
        self.max_exp().map(|e| e / 2)
    }

    /// Multiplies by `v^by`.
    pub fn shift(&self, by: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, &c)| (e + by, c)).collect(),
        }
    }

    /// `v ↦ v^{-1}`.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::zero();
        for (&e, &x) in &self.terms {
            out.add_term(e, x * c);
        }
        out
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (&e, &c) in &rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, &c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&a, &x) in &self.terms {
            for (&b, &y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

fn fmt_q_power(f: &mut fmt::Formatter<'_>, v_exp: i32) -> fmt::Result {
    if v_exp % 2 == 0 {
        match v_exp / 2 {
            1 => f.write_str("q"),
            k if k >= 0 => write!(f, "q^{k}"),
            k => write!(f, "q^{{{k}}}"),
        }
    } else {
        write!(f, "q^{{{v_exp}/2}}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (&e, &c)) in self.terms.iter().enumerate() {
            let magnitude = c.unsigned_abs();
            if idx == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            if e == 0 {
                write!(f, "{magnitude}")?;
            } else {
                if magnitude != 1 {
                    write!(f, "{magnitude}")?;
                }
                fmt_q_power(f, e)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// An element `Σ a_x T_x` of the Hecke algebra of `S_n`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeElement {
    rank: usize,
    terms: BTreeMap<Permutation, LaurentPoly>,
}

impl HeckeElement {
    pub fn zero(rank: usize) -> Self {
        HeckeElement {
            rank,
            terms: BTreeMap::new(),
        }
    }

    /// `T_1`.
    pub fn one(rank: usize) -> Self {
        Self::basis(Permutation::identity(rank))
    }

    /// `T_x`.
    pub fn basis(x: Permutation) -> Self {
        let mut h = Self::zero(x.rank());
        h.add_term(x, &LaurentPoly::one());
        h
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `T_x`.
    pub fn coeff(&self, x: &Permutation) -> LaurentPoly {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, x: Permutation, p: &LaurentPoly) {
        assert_eq!(x.rank(), self.rank, "Hecke element rank");
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(x).or_default();
        *slot += p;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&self, other: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        for (x, p) in &other.terms {
            out.add_term(x.clone(), p);
        }
        out
    }

    /// Multiplies every coefficient by `p`.
    pub fn scale(&self, p: &LaurentPoly) -> HeckeElement {
        let mut out = HeckeElement::zero(self.rank);
        for (x, c) in &self.terms {
            out.add_term(x.clone(), &(c * p));
        }
        out
    }

    /// `h · T_{s_i}`.
    pub fn t_multiply_right(&self, i: usize) -> Result<HeckeElement> {
        if i == 0 || i >= self.rank {
            return Err(Error::LetterOutOfRange { letter: i, rank: self.rank });
        }
        let q_minus_one = &LaurentPoly::q_pow(1) - &LaurentPoly::one();
        let mut out = HeckeElement::zero(self.rank);
        for (x, c) in &self.terms {
            let xs = x.times_generator(i);
            if x.has_right_descent(i) {
                out.add_term(x.clone(), &(c * &q_minus_one));
                out.add_term(xs, &c.shift(2));
            } else {
                out.add_term(xs, c);
            }
        }
        Ok(out)
    }

    /// `h · T_{s_{i_1}} ⋯ T_{s_{i_k}}`.
    pub fn t_multiply_word(&self, letters: &[usize]) -> Result<HeckeElement> {
        letters.iter().try_fold(self.clone(), |h, &i| h.t_multiply_right(i))
    }

    /// `h · T_{s_i}^{-1}`, with `T_s^{-1} = q^{-1} T_s + (q^{-1} - 1) T_1`.
    pub fn t_inverse_multiply_right(&self, i: usize) -> Result<HeckeElement> {
        let ts = self.t_multiply_right(i)?.scale(&LaurentPoly::q_pow(-1));
        let rest = self.scale(&(&LaurentPoly::q_pow(-1) - &LaurentPoly::one()));
        Ok(ts.add(&rest))
    }

    /// `h · C'_{s_i}`, with `C'_s = q^{-1/2}(T_1 + T_s)`.
    pub fn cprime_multiply_right(&self, i: usize) -> Result<HeckeElement> {
        Ok(self.add(&self.t_multiply_right(i)?).scale(&LaurentPoly::monomial(-1, 1)))
    }

    /// General product, composed along reduced words of the right factor.
    pub fn multiply(&self, other: &HeckeElement) -> Result<HeckeElement> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        let mut out = HeckeElement::zero(self.rank);
        for (y, c) in &other.terms {
            let word = some_reduced_word(y);
            out = out.add(&self.t_multiply_word(word.letters())?.scale(c));
        }
        Ok(out)
    }

    pub fn bar(&self, cache: &mut BarCache) -> HeckeElement {
        let mut out = HeckeElement::zero(self.rank);
        for (x, c) in &self.terms {
            out = out.add(&cache.bar_basis(x).scale(&c.bar()));
        }
        out
    }

    pub fn is_bar_invariant(&self, cache: &mut BarCache) -> bool {
        &self.bar(cache) == self
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (x, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c}) T[{x}]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HeckeElement({self})")
    }
}

/// Memo of `bar(T_x)`, valid for one rank.
#[derive(Debug, Default)]
pub struct BarCache {
    memo: HashMap<Permutation, HeckeElement>,
}

impl BarCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `bar(T_x) = bar(T_{xs}) · T_s^{-1}` for a right descent `s` of `x`.
    pub fn bar_basis(&mut self, x: &Permutation) -> HeckeElement {
        if let Some(h) = self.memo.get(x) {
            return h.clone();
        }
        let h = match x.right_descents().last() {
            None => HeckeElement::one(x.rank()),
            Some(&i) => self
                .bar_basis(&x.times_generator(i))
                .t_inverse_multiply_right(i)
                .expect("descent is in range"),
        };
        self.memo.insert(x.clone(), h.clone());
        h
    }
}

/// `C'_{s_i}`.
pub fn cprime_generator(rank: usize, i: usize) -> Result<HeckeElement> {
    HeckeElement::one(rank).cprime_multiply_right(i)
}

/// `C'_{s_{i_1}} ⋯ C'_{s_{i_k}}`.
pub fn cprime_product(rank: usize, letters: &[usize]) -> Result<HeckeElement> {
    letters
        .iter()
        .try_fold(HeckeElement::one(rank), |h, &i| h.cprime_multiply_right(i))
}

/// `h(E) = q^{-l(w)/2} Σ_{σ∈E} q^{d(σ)} T_{w^σ}` for masks on `d`'s word.
pub fn h_of_masks<I>(d: &ClusterDecomposition, masks: I) -> Result<HeckeElement>
where
    I: IntoIterator<Item = Mask>,
{
    let word = ReducedWord::new(d.rank(), d.word().to_vec())?;
    let mut sums: BTreeMap<Permutation, LaurentPoly> = BTreeMap::new();
    for mask in masks {
        let stats = defect_stats(&word, &mask)?;
        let x = crate::mask::subword_eval(&word, &mask)?;
        sums.entry(x).or_default().add_term(2 * stats.d as i32 - word.len() as i32, 1);
    }
    let mut out = HeckeElement::zero(d.rank());
    for (x, p) in sums {
        out.add_term(x, &p);
    }
    Ok(out)
}

/// [`h_of_masks`] over every mask passing `filter`.
pub fn h_of_mask_set(d: &ClusterDecomposition, filter: MaskFilter) -> HeckeElement {
    let len = d.len() as i32;
    let mut sums: HashMap<Vec<u8>, LaurentPoly> = HashMap::new();
    visit_masks(d, filter, |leaf| {
        sums.entry(leaf.product.to_vec())
            .or_default()
            .add_term(2 * leaf.defects as i32 - len, 1);
        ControlFlow::Continue(())
    });
    let mut out = HeckeElement::zero(d.rank());
    for (x, p) in sums {
        out.add_term(Permutation::from_bytes_unchecked(x), &p);
    }
    out
}

/// `C'_w = h(E_w)` on the contracted expression of `w`.
pub fn cprime(w: &Permutation) -> Result<HeckeElement> {
    if !is_mc_hexagon_avoiding(w) {
        return Err(Error::NotMCHexagonAvoiding(w.to_string()));
    }
    let d = contract(w)?;
    Ok(h_of_mask_set(&d, MaskFilter::TenStarAvoiding))
}

/// Evaluates a word and checks it is reduced; handy for building
/// `C'`-products from user input.
pub fn reduced_product(rank: usize, letters: &[usize]) -> Result<(Permutation, HeckeElement)> {
    let w = evaluate(rank, letters)?;
    ReducedWord::new(rank, letters.to_vec())?;
    Ok((w, cprime_product(rank, letters)?))
}
