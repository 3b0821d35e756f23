use std::fmt::Write as _;

use deodhar::census::{census, members, seeded_sample, verify_sweep};
use deodhar::cluster::{contract, ClusterDecomposition, Segment};
use deodhar::hecke::cprime;
use deodhar::heap::{commutativity_classes, heap_of, render_heap, string_diagram};
use deodhar::ideals::{ideal_pattern_failures, upper_set, PatternClass};
use deodhar::kl::{kl_table, verify, KLTable, Method};
use deodhar::mask::{defect_stats, enumerate_masks, subword_eval, Mask, MaskFilter};
use deodhar::perm::{classify, is_maximally_clustered, is_mc_hexagon_avoiding};
use deodhar::words::{bruhat_interval, format_letters, parse_letters, some_reduced_word, support, ReducedWord};
use deodhar::Permutation;
use serde::Serialize;

use crate::report::*;
use crate::{ClassArg, Cli, Command, FilterArg, MethodArg, Target};

/// Largest rank accepted by `verify --n`.
const VERIFY_RANK_CAP: usize = 8;
/// Largest rank accepted by `census`.
const CENSUS_RANK_CAP: usize = 10;

/// Rendered output and exit code.
pub type Outcome = Result<(String, u8), CliError>;

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn ok(text: String) -> Outcome {
    Ok((text, 0))
}

fn perm(text: &str) -> Result<Permutation, CliError> {
    Ok(text.parse()?)
}

/// The permutation and word a [`Target`] names. For `--w` the word is the
/// contracted expression when `w` is maximally clustered.
fn resolve(target: &Target) -> Result<(Permutation, Vec<usize>), CliError> {
    match (&target.w, &target.word) {
        (Some(w), None) => {
            let w = perm(w)?;
            let word = if is_maximally_clustered(&w) {
                contract(&w)?.word().to_vec()
            } else {
                some_reduced_word(&w).letters().to_vec()
            };
            Ok((w, word))
        }
        (None, Some(word)) => {
            let letters = parse_letters(word)?;
            let rank = target.n.unwrap_or_else(|| letters.iter().max().map_or(1, |m| m + 1));
            let reduced = ReducedWord::new(rank, letters)?;
            Ok((reduced.evaluate(), reduced.letters().to_vec()))
        }
        _ => Err(CliError::Usage("give exactly one of --w and --word".into())),
    }
}

pub fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Classify { perm: p } => classify_cmd(cli, &perm(p)?),
        Command::Contract { target } => contract_cmd(cli, target),
        Command::Heap { target, mask, classes, cap } => heap_cmd(cli, target, mask.as_deref(), *classes, *cap),
        Command::Kl { w, x, method } => kl_cmd(cli, &perm(w)?, x.as_deref().map(perm).transpose()?, *method),
        Command::Cbasis { w } => cbasis_cmd(cli, &perm(w)?),
        Command::Masks { w, filter } => masks_cmd(cli, &perm(w)?, *filter),
        Command::Verify { w, n, sample, seed } => verify_cmd(cli, w.as_deref(), *n, *sample, *seed),
        Command::Census { n } => census_cmd(cli, *n),
        Command::Ideal { w, class } => ideal_cmd(cli, &perm(w)?, *class),
    }
}

fn classify_cmd(cli: &Cli, w: &Permutation) -> Outcome {
    let sup = support(w);
    let report = ClassifyReport {
        w: w.clone(),
        length: w.length(),
        reduced_word: some_reduced_word(w).letters().to_vec(),
        support: sup.generators.iter().copied().collect(),
        support_connected: sup.connected,
        classification: classify(w),
    };
    if cli.json {
        return ok(json(&report));
    }
    let c = &report.classification;
    let mut out = String::new();
    let _ = writeln!(out, "w = {}", report.w);
    let _ = writeln!(out, "length = {}", report.length);
    let _ = writeln!(out, "reduced_word = {}", format_letters(&report.reduced_word));
    let _ = writeln!(
        out,
        "support = {} ({})",
        format_letters(&report.support),
        if report.support_connected { "connected" } else { "disconnected" }
    );
    let _ = writeln!(out, "n321 = {}", c.n321);
    for (name, flag) in [
        ("fully_commutative", c.fully_commutative),
        ("maximally_clustered", c.maximally_clustered),
        ("freely_braided", c.freely_braided),
        ("hexagon_pattern_free", c.hexagon_pattern_free),
        ("mc_hexagon_avoiding", c.mc_hexagon_avoiding),
    ] {
        let _ = writeln!(out, "{name} = {flag}");
    }
    ok(out)
}

fn render_decomposition(d: &ClusterDecomposition) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "word = {}", format_letters(d.word()));
    let (mut a, mut c) = (0, 1);
    for seg in d.segments() {
        match seg {
            Segment::Filler(r) => {
                let text = if r.is_empty() { "(empty)".to_string() } else { format_letters(&d.word()[r]) };
                let _ = writeln!(out, "a_{a} = {text}");
                a += 1;
            }
            Segment::Cluster(cl, r) => {
                let _ = writeln!(out, "c_{c} = {} (m={}, k={})", format_letters(&d.word()[r]), cl.m, cl.k);
                c += 1;
            }
        }
    }
    let _ = writeln!(out, "M = {}, N = {}", d.num_clusters(), d.total_k());
    out
}

fn contract_cmd(cli: &Cli, target: &Target) -> Outcome {
    let (w, _) = resolve(target)?;
    let d = contract(&w)?;
    if cli.json {
        return ok(json(&d));
    }
    ok(format!("w = {w}\n{}", render_decomposition(&d)))
}

fn heap_cmd(cli: &Cli, target: &Target, mask: Option<&str>, classes: bool, cap: usize) -> Outcome {
    let (w, letters) = resolve(target)?;
    if classes {
        let heaps = commutativity_classes(&w, cap)?;
        let report = ClassesReport {
            w: w.clone(),
            classes: heaps.iter().map(|h| h.normal_form()).collect(),
        };
        if cli.json {
            return ok(json(&report));
        }
        let mut out = format!("w = {w}: {} commutativity classes\n", report.classes.len());
        for (word, h) in report.classes.iter().zip(&heaps) {
            let _ = writeln!(out, "\n{}", format_letters(word));
            out.push_str(&render_heap(h, None)?);
        }
        return ok(out);
    }
    let heap = heap_of(w.rank(), &letters)?;
    let mask: Option<Mask> = mask.map(str::parse).transpose()?;
    let picture = render_heap(&heap, mask.as_ref())?;
    let strings = string_diagram(&heap, mask.as_ref())?;
    if cli.json {
        let report = HeapReport {
            rank: heap.rank(),
            letters: heap.letters().to_vec(),
            entries: heap.entries().to_vec(),
            covers: heap.covers().to_vec(),
            normal_form: heap.normal_form(),
            mask,
            strings,
        };
        return ok(json(&report));
    }
    let mut out = format!("w = {w}\nword = {}\n", format_letters(&letters));
    if let Some(m) = &mask {
        let product = subword_eval(&ReducedWord::new(w.rank(), letters.clone())?, m)?;
        let _ = writeln!(out, "mask = {m}, w^mask = {product}");
    }
    out.push('\n');
    out.push_str(&picture);
    ok(out)
}

fn method_name(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Masks => "masks",
        MethodArg::Recursion => "recursion",
        MethodArg::Both => "both",
    }
}

/// The table for `method`; `Both` computes both and insists they agree.
fn table(w: &Permutation, method: MethodArg) -> Result<KLTable, CliError> {
    match method {
        MethodArg::Masks => Ok(kl_table(w, Method::Masks)?),
        MethodArg::Recursion => Ok(kl_table(w, Method::Recursion)?),
        MethodArg::Both => {
            let masks = kl_table(w, Method::Masks)?;
            let rec = kl_table(w, Method::Recursion)?;
            if let Some((a, b)) = masks.rows.iter().zip(&rec.rows).find(|(a, b)| a.p != b.p) {
                return Err(CliError::Mismatch(format!(
                    "P_({},{w}): masks give {}, recursion gives {}",
                    a.x, a.p, b.p
                )));
            }
            Ok(masks)
        }
    }
}

fn kl_cmd(cli: &Cli, w: &Permutation, x: Option<Permutation>, method: MethodArg) -> Outcome {
    if let Some(x) = &x {
        if x.rank() != w.rank() {
            return Err(deodhar::Error::RankMismatch { left: x.rank(), right: w.rank() }.into());
        }
    }
    let t = table(w, method)?;
    match x {
        Some(x) => {
            let p = t.get(&x).cloned().unwrap_or_default();
            if cli.json {
                return ok(json(&KlValue {
                    w: w.clone(),
                    x,
                    method: method_name(method).into(),
                    p,
                }));
            }
            ok(format!("P = {p}\n"))
        }
        None if cli.json => ok(json(&t)),
        None if cli.tsv => ok(t.to_tsv()),
        None => {
            let width = t.rows.iter().map(|r| r.x.to_string().len()).max().unwrap_or(1);
            let mut out = format!("P_(x,{w}) by {}\n", method_name(method));
            for row in &t.rows {
                let _ = writeln!(out, "{:<width$}  {}", row.x.to_string(), row.p);
            }
            ok(out)
        }
    }
}

fn cbasis_cmd(cli: &Cli, w: &Permutation) -> Outcome {
    let c = cprime(w)?;
    let terms: Vec<CbasisTerm> = bruhat_interval(w)
        .into_iter()
        .filter_map(|x| {
            let coeff = c.coeff(&x);
            (!coeff.is_zero()).then_some(CbasisTerm { x, coeff })
        })
        .collect();
    let report = CbasisReport { w: w.clone(), terms };
    if cli.json {
        return ok(json(&report));
    }
    if cli.tsv {
        let mut out = String::from("x\tcoefficient\n");
        for t in &report.terms {
            let _ = writeln!(out, "{}\t{}", t.x, t.coeff);
        }
        return ok(out);
    }
    let width = report.terms.iter().map(|t| t.x.to_string().len()).max().unwrap_or(1);
    let mut out = format!("C'_{w} = sum over x of coefficient * T_x\n");
    for t in &report.terms {
        let _ = writeln!(out, "T_{:<width$}  {}", t.x.to_string(), t.coeff);
    }
    ok(out)
}

fn masks_cmd(cli: &Cli, w: &Permutation, filter: FilterArg) -> Outcome {
    let d = if filter == FilterArg::TenStar && !is_mc_hexagon_avoiding(w) {
        return Err(deodhar::Error::NotMCHexagonAvoiding(w.to_string()).into());
    } else if is_maximally_clustered(w) {
        contract(w)?
    } else {
        ClusterDecomposition::without_clusters(w.rank(), some_reduced_word(w).letters().to_vec())
    };
    if d.len() > deodhar::mask::MASK_LENGTH_CAP {
        return Err(deodhar::Error::LengthCapExceeded {
            length: d.len(),
            cap: deodhar::mask::MASK_LENGTH_CAP,
        }
        .into());
    }
    let word = ReducedWord::new(d.rank(), d.word().to_vec())?;
    let lib_filter = match filter {
        FilterArg::TenStar => MaskFilter::TenStarAvoiding,
        FilterArg::All => MaskFilter::All,
    };
    let mut records = Vec::new();
    for mask in enumerate_masks(&d, lib_filter) {
        let stats = defect_stats(&word, &mask)?;
        records.push(MaskRecord {
            product: subword_eval(&word, &mask)?,
            mask,
            d: stats.d,
            zero_defects: stats.zero_defects,
            plain_zeros: stats.plain_zeros,
            defect_positions: stats.defect_positions,
        });
    }
    let report = MasksReport {
        w: w.clone(),
        word: d.word().to_vec(),
        filter: match filter {
            FilterArg::TenStar => "10star".into(),
            FilterArg::All => "all".into(),
        },
        masks: records,
    };
    if cli.json {
        return ok(json(&report));
    }
    let sep = if cli.tsv { "\t" } else { "  " };
    let mut out = String::new();
    if !cli.tsv {
        let _ = writeln!(out, "w = {w}, word = {}, filter = {}", format_letters(&report.word), report.filter);
    }
    let _ = writeln!(out, "{}", ["mask", "w^mask", "d", "zd", "pz", "defects"].join(sep));
    for r in &report.masks {
        let defects = if r.defect_positions.is_empty() { "-".to_string() } else { format_letters(&r.defect_positions) };
        let fields = [
            r.mask.to_string(),
            r.product.to_string(),
            r.d.to_string(),
            r.zero_defects.to_string(),
            r.plain_zeros.to_string(),
            defects,
        ];
        let _ = writeln!(out, "{}", fields.join(sep));
    }
    ok(out)
}

fn verify_cmd(cli: &Cli, w: Option<&str>, n: Option<usize>, sample: Option<usize>, seed: u64) -> Outcome {
    if let Some(w) = w {
        let report = verify(&perm(w)?)?;
        let code = if report.ok { 0 } else { 1 };
        if cli.json {
            return Ok((json(&report), code));
        }
        let mut out = format!(
            "w = {}: {} (w, x) pairs checked, {}\n",
            report.w,
            report.pairs_checked,
            if report.ok { "ok" } else { "FAILED" }
        );
        for m in &report.mismatches {
            let _ = writeln!(out, "mismatch at x = {}: masks {}, recursion {}", m.x, m.masks, m.recursion);
        }
        return Ok((out, code));
    }
    let Some(n) = n else {
        return Err(CliError::Usage("verify needs --w or --n".into()));
    };
    if n == 0 || n > VERIFY_RANK_CAP {
        return Err(deodhar::Error::RankCapExceeded { rank: n, cap: VERIFY_RANK_CAP }.into());
    }
    let all = members(n, is_mc_hexagon_avoiding);
    let elements = match sample {
        Some(k) => seeded_sample(&all, k, seed),
        None => all,
    };
    let report = verify_sweep(n, &elements)?;
    let code = if report.ok { 0 } else { 1 };
    if cli.json {
        return Ok((json(&report), code));
    }
    let mut out = format!(
        "n = {n}: {} elements, {} (w, x) pairs checked, {} failures\n",
        report.elements,
        report.pairs_checked,
        report.failures.len()
    );
    for f in &report.failures {
        let _ = writeln!(out, "failed: w = {}", f.w);
    }
    Ok((out, code))
}

fn census_cmd(cli: &Cli, n: usize) -> Outcome {
    if n == 0 || n > CENSUS_RANK_CAP {
        return Err(deodhar::Error::RankCapExceeded { rank: n, cap: CENSUS_RANK_CAP }.into());
    }
    let rows: Vec<_> = (1..=n).flat_map(census).collect();
    if cli.json {
        return ok(json(&rows));
    }
    let mut out = String::from("n\tlabel\tcount\n");
    for r in &rows {
        let _ = writeln!(out, "{}\t{}\t{}", r.n, r.label, r.count);
    }
    ok(out)
}

fn ideal_cmd(cli: &Cli, p: &Permutation, class: ClassArg) -> Outcome {
    let class = match class {
        ClassArg::Mc => PatternClass::Mc,
        ClassArg::Fb => PatternClass::Fb,
        ClassArg::All => PatternClass::All,
    };
    let failures = ideal_pattern_failures(p, class)?;
    let upper = upper_set(p, class)?;
    let report = IdealReport {
        p: p.clone(),
        class,
        ideal: failures.is_empty(),
        failures,
        upper_set: upper.members,
    };
    if cli.json {
        return ok(json(&report));
    }
    let list = |v: &[Permutation]| {
        if v.is_empty() {
            "(none)".to_string()
        } else {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        }
    };
    let mut out = String::new();
    let _ = writeln!(out, "p = {p}, class = {class}");
    let _ = writeln!(out, "ideal = {}", report.ideal);
    let _ = writeln!(out, "upper set = {}", list(&report.upper_set));
    if !report.ideal {
        let _ = writeln!(out, "pattern without heap containment = {}", list(&report.failures));
    }
    ok(out)
}
