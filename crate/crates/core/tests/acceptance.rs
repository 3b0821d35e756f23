//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails.

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::time::Instant;

use deodhar::census::{seeded_sample, verify_sweep};
use deodhar::cluster::{contract, verify_decomposition, ClusterDecomposition};
use deodhar::hecke::{h_of_masks, BarCache, LaurentPoly};
use deodhar::heap::{heap_avoids_hexagon_direct, DEFAULT_CLASS_CAP};
use deodhar::ideals::{is_ideal_pattern, PatternClass};
use deodhar::kl::{kl_masks, kl_recursion};
use deodhar::mask::{
    defect_stats, enumerate_masks, is_10star_avoiding, is_deodhar_element, phi_collapse, phi_expand, subword_eval,
    ten_star_instances, visit_masks, Mask, MaskFilter,
};
use deodhar::words::ReducedWord;
use deodhar::Permutation;
use rayon::prelude::*;

const SEED: u64 = 20_240_601;

// ---- independent oracles -------------------------------------------------

fn all_perms(n: usize) -> Vec<Vec<u8>> {
    fn go(n: usize, cur: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                cur.push(v as u8);
                go(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n + 1], &mut out);
    out
}

/// Every position set of `w` order-isomorphic to `pat`.
fn instances(w: &[u8], pat: &[u8]) -> Vec<Vec<usize>> {
    fn go(w: &[u8], pat: &[u8], start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == pat.len() {
            out.push(cur.clone());
            return;
        }
        for i in start..w.len() {
            let k = cur.len();
            if cur.iter().enumerate().all(|(j, &c)| (w[c] < w[i]) == (pat[j] < pat[k])) {
                cur.push(i);
                go(w, pat, i + 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(w, pat, 0, &mut Vec::new(), &mut out);
    out
}

fn contains(w: &[u8], pat: &[u8]) -> bool {
    !instances(w, pat).is_empty()
}

const MC: [&[u8]; 3] = [&[3, 4, 2, 1], &[4, 3, 1, 2], &[4, 3, 2, 1]];
const HEX: [&[u8]; 4] = [
    &[4, 6, 7, 1, 8, 2, 3, 5],
    &[4, 6, 7, 8, 1, 2, 3, 5],
    &[5, 6, 7, 1, 8, 2, 3, 4],
    &[5, 6, 7, 8, 1, 2, 3, 4],
];

fn oracle_mc(w: &[u8]) -> bool {
    MC.iter().all(|p| !contains(w, p))
}

fn oracle_mc_hex(w: &[u8]) -> bool {
    oracle_mc(w) && HEX.iter().all(|p| !contains(w, p))
}

fn inversions(w: &[u8]) -> usize {
    (0..w.len()).flat_map(|i| (i + 1..w.len()).map(move |j| (i, j))).filter(|&(i, j)| w[i] > w[j]).count()
}

fn eval(rank: usize, letters: &[usize]) -> Vec<u8> {
    let mut u: Vec<u8> = (1..=rank as u8).collect();
    for &i in letters {
        u.swap(i - 1, i);
    }
    u
}

fn perm(bytes: &[u8]) -> Permutation {
    Permutation::from_slice(bytes).unwrap()
}

fn mc_hex_members(n: usize) -> Vec<Permutation> {
    all_perms(n).into_iter().filter(|w| oracle_mc_hex(w)).map(|w| perm(&w)).collect()
}

/// `[(m+2) 2 3 ⋯ (m+1) 1]`.
fn cluster_pattern(m: usize) -> Vec<u8> {
    let mut p = vec![(m + 2) as u8];
    p.extend(2..=(m + 1) as u8);
    p.push(1);
    p
}

/// Instances of some `[(m+2) 2 ⋯ (m+1) 1]` not inside an instance of the
/// next longer pattern.
fn maximal_cluster_instances(w: &[u8]) -> usize {
    let mut total = 0;
    for m in 1..w.len() {
        let here = instances(w, &cluster_pattern(m));
        if here.is_empty() {
            break;
        }
        let longer: Vec<BTreeSet<usize>> = if m + 2 < w.len() + 1 {
            instances(w, &cluster_pattern(m + 1)).into_iter().map(|v| v.into_iter().collect()).collect()
        } else {
            Vec::new()
        };
        total += here.iter().filter(|inst| !longer.iter().any(|big| inst.iter().all(|i| big.contains(i)))).count();
    }
    total
}

fn one_plus_q() -> LaurentPoly {
    LaurentPoly::from_q_coeffs(&[1, 1])
}

fn word_of(d: &ClusterDecomposition) -> ReducedWord {
    ReducedWord::new(d.rank(), d.word().to_vec()).unwrap()
}

// ---- criteria ------------------------------------------------------------

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn theorem_sweep(n: usize, elements: &[Permutation]) -> Result<usize, String> {
    let report = verify_sweep(n, elements).map_err(|e| e.to_string())?;
    if !report.ok {
        let f = &report.failures[0];
        return Err(format!("n={n}: {} failing elements, first {} ({:?})", report.failures.len(), f.w, f));
    }
    Ok(report.pairs_checked)
}

fn c1_theorem() -> Outcome {
    let mut summary = Vec::new();
    for n in 1..=6 {
        let els = mc_hex_members(n);
        let pairs = theorem_sweep(n, &els)?;
        summary.push(format!("n={n}: {} w, {pairs} pairs", els.len()));
    }
    let pop = mc_hex_members(7);
    let picked = seeded_sample(&pop, 200, SEED);
    let pairs = theorem_sweep(7, &picked)?;
    summary.push(format!("n=7: {} sampled w, {pairs} pairs", picked.len()));
    Ok(summary.join("; "))
}

fn c2_spot_values() -> Outcome {
    let e4 = Permutation::identity(4);
    for w in ["3412", "4231"] {
        let w: Permutation = w.parse().unwrap();
        let m = kl_masks(&e4, &w).map_err(|e| e.to_string())?;
        let r = kl_recursion(&e4, &w).map_err(|e| e.to_string())?;
        if m != one_plus_q() || r != one_plus_q() {
            return Err(format!("P_(e,{w}): masks {m}, recursion {r}"));
        }
    }
    let s3: Vec<Permutation> = all_perms(3).iter().map(|w| perm(w)).collect();
    let mut pairs = 0;
    for w in &s3 {
        for x in &s3 {
            let leq = x.length() <= w.length() && deodhar::words::bruhat_leq(x, w).unwrap();
            if !leq {
                continue;
            }
            pairs += 1;
            let m = kl_masks(x, w).map_err(|e| e.to_string())?;
            let r = kl_recursion(x, w).map_err(|e| e.to_string())?;
            if m != LaurentPoly::one() || r != LaurentPoly::one() {
                return Err(format!("P_({x},{w}) = {m} / {r}"));
            }
        }
    }
    Ok(format!("P_(e,3412) = P_(e,4231) = 1 + q; {pairs} S_3 pairs equal 1"))
}

fn c3_boundedness() -> Outcome {
    let mut masks = 0usize;
    for n in 1..=6 {
        for w in mc_hex_members(n) {
            let d = contract(&w).map_err(|e| e.to_string())?;
            let mut bad = None;
            visit_masks(&d, MaskFilter::TenStarAvoiding, |leaf| {
                masks += 1;
                if leaf.is_proper() && leaf.zero_defects >= leaf.plain_zeros {
                    bad = Some(Mask::new(leaf.bits.to_vec()));
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
            if let Some(m) = bad {
                return Err(format!("w = {w}, mask {m} violates the bound"));
            }
        }
    }
    Ok(format!("{masks} proper-or-full 10*-avoiding masks, no violations"))
}

fn bar_invariant(w: &Permutation, cache: &mut BarCache) -> Result<bool, String> {
    let d = contract(w).map_err(|e| e.to_string())?;
    let h = h_of_masks(&d, enumerate_masks(&d, MaskFilter::TenStarAvoiding)).map_err(|e| e.to_string())?;
    Ok(h.is_bar_invariant(cache))
}

fn c4_admissibility() -> Outcome {
    let mut checked = 0;
    let mut cache = BarCache::new();
    for w in mc_hex_members(4) {
        checked += 1;
        if !bar_invariant(&w, &mut cache)? {
            return Err(format!("h(E_w) not bar-invariant for {w}"));
        }
    }
    for (n, seed) in [(5, SEED), (6, SEED + 1)] {
        let mut cache = BarCache::new();
        for w in seeded_sample(&mc_hex_members(n), 50, seed) {
            checked += 1;
            if !bar_invariant(&w, &mut cache)? {
                return Err(format!("h(E_w) not bar-invariant for {w}"));
            }
        }
    }
    let mut closure = 0;
    for n in 1..=6 {
        for w in mc_hex_members(n) {
            let d = contract(&w).map_err(|e| e.to_string())?;
            if !is_10star_avoiding(&d, &Mask::ones(d.len())).unwrap() {
                return Err(format!("all-ones mask not in E_w for {w}"));
            }
            if d.is_empty() {
                continue;
            }
            for m in enumerate_masks(&d, MaskFilter::TenStarAvoiding) {
                closure += 1;
                if !is_10star_avoiding(&d, &m.flip_last()).unwrap() {
                    return Err(format!("E_w not closed under last-bit flip: w = {w}, mask {m}"));
                }
            }
        }
    }
    Ok(format!("{checked} bar-invariant h(E_w); {closure} masks closed under last-bit flip"))
}

fn c5_deodhar_dichotomy() -> Outcome {
    let fc: Vec<Vec<u8>> = all_perms(8).into_iter().filter(|w| !contains(w, &[3, 2, 1])).collect();
    if fc.len() != 1430 {
        return Err(format!("found {} fully-commutative elements", fc.len()));
    }
    let failing: BTreeSet<Vec<u8>> = fc
        .par_iter()
        .filter(|w| !is_deodhar_element(&perm(w)).unwrap())
        .cloned()
        .collect();
    let expected: BTreeSet<Vec<u8>> = HEX.iter().map(|p| p.to_vec()).collect();
    if failing != expected {
        return Err(format!("non-Deodhar set {:?}", failing));
    }
    Ok("1430 fully-commutative elements; bound fails exactly on the 4 hexagon patterns".into())
}

fn c6_dual_computation() -> Outcome {
    let mc: Vec<Vec<u8>> = all_perms(8).into_par_iter().filter(|w| oracle_mc(w)).collect();
    let disagreements: Vec<String> = mc
        .par_iter()
        .filter_map(|w| {
            let by_heap = match heap_avoids_hexagon_direct(&perm(w), DEFAULT_CLASS_CAP) {
                Ok(b) => b,
                Err(e) => return Some(format!("{}: {e}", perm(w))),
            };
            let by_pattern = oracle_mc_hex(w);
            (by_heap != by_pattern).then(|| format!("{}: heap {by_heap}, patterns {by_pattern}", perm(w)))
        })
        .collect();
    if !disagreements.is_empty() {
        return Err(format!("{} disagreements, first {}", disagreements.len(), disagreements[0]));
    }
    let avoiding = mc.iter().filter(|w| oracle_mc_hex(w)).count();
    Ok(format!("{} mc elements of S_8, {avoiding} heap-avoid the hexagon, matching the seven patterns", mc.len()))
}

fn c7_ideal_patterns() -> Outcome {
    for class in [PatternClass::Mc, PatternClass::Fb] {
        for p in HEX {
            let p = perm(p);
            if !is_ideal_pattern(&p, class).map_err(|e| e.to_string())? {
                return Err(format!("{p} is not ideal in {class}"));
            }
        }
    }
    Ok("all 4 hexagon patterns ideal in mc and fb".into())
}

fn c8_contract() -> Outcome {
    let mut count = 0;
    for n in 1..=7 {
        let mc: Vec<Vec<u8>> = all_perms(n).into_iter().filter(|w| oracle_mc(w)).collect();
        let problems: Vec<String> = mc
            .par_iter()
            .filter_map(|w| {
                let d = match contract(&perm(w)) {
                    Ok(d) => d,
                    Err(e) => return Some(format!("{}: {e}", perm(w))),
                };
                let check = verify_decomposition(&d);
                let evaluated = eval(n, d.word());
                let n321 = instances(w, &[3, 2, 1]).len();
                let supports: Vec<BTreeSet<usize>> = d.clusters().iter().map(|c| c.support().collect()).collect();
                let disjoint = supports
                    .iter()
                    .enumerate()
                    .all(|(i, a)| supports[i + 1..].iter().all(|b| a.is_disjoint(b)));
                let ok = check.ok
                    && evaluated == *w
                    && d.len() == inversions(w)
                    && d.total_k() == n321
                    && disjoint
                    && d.num_clusters() == maximal_cluster_instances(w);
                (!ok).then(|| format!("{}: {:?}", perm(w), check.reasons))
            })
            .collect();
        if let Some(first) = problems.first() {
            return Err(format!("{} failures, first {first}", problems.len()));
        }
        count += mc.len();
    }
    Ok(format!("{count} maximally-clustered elements with n <= 7 contracted correctly"))
}

fn c9_phi() -> Outcome {
    let mut pairs = 0;
    for n in 1..=5 {
        for w in all_perms(n).into_iter().filter(|w| oracle_mc(w)) {
            let w = perm(&w);
            let d = contract(&w).map_err(|e| e.to_string())?;
            let word = word_of(&d);
            for m in enumerate_masks(&d, MaskFilter::All) {
                let before = ten_star_instances(&d, &m).unwrap();
                if before.is_empty() {
                    continue;
                }
                pairs += 1;
                let c = phi_collapse(&d, &m).map_err(|e| e.to_string())?;
                let fail = |what: &str| Err(format!("w = {w}, mask {m}: {what}"));
                let new_word = ReducedWord::new(n, c.decomposition.word().to_vec()).map_err(|e| e.to_string())?;
                if subword_eval(&word, &m).unwrap() != subword_eval(&new_word, &c.mask).unwrap() {
                    return fail("evaluation changed");
                }
                let d0 = defect_stats(&word, &m).unwrap().d;
                let d1 = defect_stats(&new_word, &c.mask).unwrap().d;
                if d0 != d1 + c.site.width {
                    return fail("defect count did not drop by k");
                }
                let after = ten_star_instances(&c.decomposition, &c.mask).unwrap();
                if after.len() + 1 != before.len() {
                    return fail("10* instance count did not drop by one");
                }
                let site = *before.iter().max().unwrap();
                let survivors: Vec<usize> = before.iter().copied().filter(|&b| b != site).collect();
                let shifted: Vec<usize> = survivors
                    .iter()
                    .map(|&b| if b > site { b - 2 * c.site.width } else { b })
                    .collect();
                if shifted != after {
                    return fail("10* instances moved or were created");
                }
                let (back, mask) = phi_expand(&c.decomposition, &c.mask, &c.site).map_err(|e| e.to_string())?;
                if back != d || mask != m {
                    return fail("inverse did not recover the input");
                }
            }
        }
    }
    Ok(format!("{pairs} (word, mask) pairs with a 10* instance"))
}

fn c10_census() -> Outcome {
    let catalan = [(4, 14), (5, 42), (6, 132)];
    let mut parts = Vec::new();
    for (n, expected) in catalan {
        let brute = all_perms(n).iter().filter(|w| !contains(w, &[3, 2, 1])).count();
        let lib = Permutation::all(n).filter(|w| deodhar::perm::classify(w).fully_commutative).count();
        if brute != expected || lib != expected {
            return Err(format!("n={n}: fully commutative {lib}, brute {brute}, expected {expected}"));
        }
    }
    for n in 4..=7 {
        let brute = all_perms(n).iter().filter(|w| oracle_mc(w)).count();
        let lib = Permutation::all(n).filter(deodhar::perm::is_maximally_clustered).count();
        if brute != lib {
            return Err(format!("n={n}: maximally clustered {lib}, brute {brute}"));
        }
        parts.push(format!("mc(S_{n}) = {lib}"));
    }
    Ok(format!("Catalan 14/42/132; {}", parts.join(", ")))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 theorem: masks = recursion", c1_theorem),
        ("2 spot values", c2_spot_values),
        ("3 boundedness", c3_boundedness),
        ("4 admissibility", c4_admissibility),
        ("5 Deodhar dichotomy in S_8", c5_deodhar_dichotomy),
        ("6 heap avoidance vs patterns in S_8", c6_dual_computation),
        ("7 ideal hexagon patterns", c7_ideal_patterns),
        ("8 contracted expressions", c8_contract),
        ("9 collapse map", c9_phi),
        ("10 census counts", c10_census),
    ];
    let only: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (name, run) in criteria {
        if let Some(filter) = &only {
            if !name.starts_with(&format!("{filter} ")) {
                continue;
            }
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} [{secs:.1}s]: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
