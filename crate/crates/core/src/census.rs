//! Parallel sweeps over `S_n`: class censuses, seeded samples, and the
//! mask-versus-recursion verification.

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kl::{kl_masks_column, verify_report, KlRecursion, VerifyReport};
use crate::perm::{classify, Permutation};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "DEODHAR_THREADS";

/// Runs `f` on a pool sized by `threads`, then `DEODHAR_THREADS`, then the
/// rayon default.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    let wanted = threads.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok()));
    match wanted {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

/// One line of a census: how many elements of `S_n` carry `label`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub n: usize,
    pub label: String,
    pub count: usize,
}

/// Class counts for `S_n`, sorted by label.
pub fn census(n: usize) -> Vec<CensusRow> {
    let flags: Vec<_> = Permutation::all(n).collect::<Vec<_>>().par_iter().map(classify).collect();
    let count = |f: &dyn Fn(&crate::perm::Classification) -> bool| flags.iter().filter(|c| f(c)).count();
    let mut rows = vec![
        ("total", flags.len()),
        ("fully_commutative", count(&|c| c.fully_commutative)),
        ("fc_hexagon_avoiding", count(&|c| c.fully_commutative && c.hexagon_pattern_free)),
        ("maximally_clustered", count(&|c| c.maximally_clustered)),
        ("freely_braided", count(&|c| c.freely_braided)),
        ("mc_hexagon_avoiding", count(&|c| c.mc_hexagon_avoiding)),
    ];
    rows.sort();
    rows.into_iter()
        .map(|(label, count)| CensusRow {
            n,
            label: label.to_string(),
            count,
        })
        .collect()
}

/// Elements of `S_n` passing `keep`, in lexicographic order.
pub fn members(n: usize, keep: impl Fn(&Permutation) -> bool + Sync) -> Vec<Permutation> {
    let all: Vec<Permutation> = Permutation::all(n).collect();
    all.into_par_iter().filter(|w| keep(w)).collect()
}

/// `count` distinct elements drawn from `population` with a seeded
/// generator, returned in population order. Takes everything when
/// `count` is at least the population size.
pub fn seeded_sample(population: &[Permutation], count: usize, seed: u64) -> Vec<Permutation> {
    if count >= population.len() {
        return population.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample(&mut rng, population.len(), count).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| population[i].clone()).collect()
}

/// Totals of a verification sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n: usize,
    pub elements: usize,
    pub pairs_checked: usize,
    pub failures: Vec<VerifyReport>,
    pub ok: bool,
}

/// Verifies the mask formula on every listed element. Mask sums run in
/// parallel; the recursion shares one memo.
pub fn verify_sweep(n: usize, elements: &[Permutation]) -> Result<SweepReport> {
    let columns = elements
        .par_iter()
        .map(kl_masks_column)
        .collect::<Result<Vec<HashMap<Permutation, _>>>>()?;
    let mut rec = KlRecursion::new(n);
    let mut report = SweepReport {
        n,
        elements: elements.len(),
        pairs_checked: 0,
        failures: Vec::new(),
        ok: true,
    };
    for (w, masks) in elements.iter().zip(columns) {
        let r = verify_report(&mut rec, w, masks)?;
        report.pairs_checked += r.pairs_checked;
        if !r.ok {
            report.failures.push(r);
        }
    }
    report.ok = report.failures.is_empty();
    Ok(report)
}
