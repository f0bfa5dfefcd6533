use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;
use vtm_core::cyclic::{
    embed, search_cyclic_squarefree, CyclicUniformMorphism, MorphismRecord, SearchMode, SearchOutcome, CROSS_CHECK_LEN,
};
use vtm_core::dfao::{check_doubling, check_power_of_two, vtm_dfao};
use vtm_core::logic::{parse_predicate, Compiler, Sequences};
use vtm_core::progressions::{occurrence_residues, subsequence_ap, theorem1_evidence_in};
use vtm_core::{find_square, Dfao, Morphism, Word};

use crate::cache::cached_vtm_prefix;
use crate::report::{Outcome, RunReport};
use crate::{CheckArgs, DfaoArgs, GenerateArgs, MorphismArgs, PredicateArgs};

fn read_word(path: &Path) -> Result<Word> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.trim()
        .parse()
        .with_context(|| format!("parsing word in {}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

/// `None` when the word went to stdout.
pub fn generate(args: &GenerateArgs, echo: &str) -> Result<Option<RunReport>> {
    let start = Instant::now();
    let morphism = match &args.morphism {
        Some(spec) => spec
            .parse::<Morphism>()
            .with_context(|| format!("bad morphism spec {spec:?}"))?,
        None => Morphism::vtm(),
    };
    let word = morphism.fixed_point_prefix(0, args.length)?;
    let Some(out) = &args.out else {
        print!("{}", word.to_line());
        return Ok(None);
    };
    write_file(out, &word.to_line())?;
    let mut r = RunReport::new(echo);
    r.param("morphism", morphism.to_string())
        .param("length", args.length)
        .evidence("out", path_str(out));
    r.timing("total", start);
    Ok(Some(r))
}

pub fn check(args: &CheckArgs, echo: &str) -> Result<RunReport> {
    let start = Instant::now();
    let mut r = RunReport::new(echo);
    if let Some(path) = &args.squarefree {
        let w = read_word(path)?;
        r.param("file", path_str(path)).evidence("length", w.len());
        match find_square(&w) {
            None => {
                r.outcome = Outcome::Confirmed;
                r.evidence("squarefree", true);
            }
            Some(sq) => {
                r.outcome = Outcome::Refuted;
                let square = w.factor(sq.position, sq.position + 2 * sq.period);
                r.evidence("squarefree", false)
                    .evidence("witness", json!({"position": sq.position, "period": sq.period}))
                    .evidence("square", square.to_string());
            }
        }
    } else if args.theorem1 {
        let range = args.k_range.as_deref().unwrap_or_default();
        let (lo, hi) = parse_range(range)?;
        if lo < 2 {
            bail!("k must be at least 2");
        }
        r.param("k_range", format!("{lo}..{hi}")).param("prefix", args.prefix);
        let vtm = cached_vtm_prefix(args.prefix);
        r.timing("prefix", start);
        let mut confirmed = Vec::new();
        let mut inconclusive = Vec::new();
        for k in lo..=hi {
            match theorem1_evidence_in(vtm.letters(), k) {
                Some(e) => confirmed.push(json!({"k": k, "n": e.n, "letter": e.letter})),
                None => inconclusive.push(json!(k)),
            }
        }
        r.outcome = if inconclusive.is_empty() {
            Outcome::Confirmed
        } else {
            Outcome::Inconclusive
        };
        r.evidence("confirmed", confirmed)
            .evidence("inconclusive", inconclusive);
    } else {
        let k = args.k.ok_or_else(|| anyhow!("--residues needs --k"))?;
        let factor_text = args.factor.as_deref().unwrap_or_default();
        let factor: Word = factor_text.parse().context("bad --factor")?;
        let w = match &args.word {
            Some(path) => {
                r.param("word", path_str(path));
                read_word(path)?
            }
            None => {
                r.param("prefix", args.prefix);
                cached_vtm_prefix(args.prefix)
            }
        };
        r.param("k", k).param("factor", factor_text);
        let residues = occurrence_residues(&w, &factor, k)?;
        let missing: Vec<usize> = (0..k).filter(|i| !residues.contains(i)).collect();
        r.outcome = if missing.is_empty() {
            Outcome::Confirmed
        } else {
            Outcome::Inconclusive
        };
        r.evidence("residues", residues.into_iter().collect::<Vec<_>>())
            .evidence("missing", missing);
    }
    r.timing("total", start);
    Ok(r)
}

/// `A..B` or `A..=B`, both inclusive.
fn parse_range(text: &str) -> Result<(usize, usize)> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| anyhow!("expected a range A..B, got {text:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let lo: usize = a.trim().parse().with_context(|| format!("bad range start {a:?}"))?;
    let hi: usize = b.trim().parse().with_context(|| format!("bad range end {b:?}"))?;
    if lo > hi {
        bail!("empty range {text:?}");
    }
    Ok((lo, hi))
}

pub fn predicate(args: &PredicateArgs, echo: &str) -> Result<RunReport> {
    let start = Instant::now();
    let mut r = RunReport::new(echo);
    r.param("formula", args.eval.as_str());
    let formula = parse_predicate(&args.eval)?;

    let mut sequences = Sequences::new();
    for binding in &args.seq {
        let (name, path) = binding
            .split_once('=')
            .ok_or_else(|| anyhow!("expected NAME=FILE, got {binding:?}"))?;
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let d: Dfao = text.parse().with_context(|| format!("parsing DFAO in {path}"))?;
        sequences.insert(name.to_string(), d);
    }
    if formula.sequences().contains("VTM") && !sequences.contains_key("VTM") {
        sequences.insert("VTM".to_string(), vtm_dfao());
        r.timing("dfao", start);
    }
    let names: Vec<String> = sequences.keys().cloned().collect();
    r.param("sequences", names);

    let compile_start = Instant::now();
    let automaton = Compiler::new(&sequences).with_ceiling(args.ceiling).compile(&formula)?;
    r.timing("compile", compile_start);
    r.evidence("tracks", automaton.tracks().to_vec())
        .evidence("states", automaton.state_count());
    if let Some(out) = &args.out {
        write_file(out, &automaton.to_text())?;
        r.evidence("automaton", path_str(out));
    }
    if let Some(dot) = &args.dot {
        write_file(dot, &automaton.to_dot())?;
        r.evidence("dot", path_str(dot));
    }

    r.outcome = Outcome::Confirmed;
    if automaton.arity() == 0 {
        let value = automaton.decide()?;
        r.evidence("value", value);
        if !value {
            r.outcome = Outcome::Refuted;
        }
    }
    if !args.member.is_empty() {
        let mut answers = Vec::new();
        for query in &args.member {
            let assignment = parse_assignment(query)?;
            let named: Vec<(&str, u64)> = assignment.iter().map(|(k, v)| (k.as_str(), *v)).collect();
            let accepted = automaton.accepts_named(&named)?;
            answers.push(json!(format!("{query} -> {accepted}")));
            if !accepted {
                r.outcome = Outcome::Refuted;
            }
        }
        r.evidence("member", answers);
    }
    if let Some(limit) = args.enumerate {
        let tracks = automaton.tracks();
        let listed: Vec<String> = automaton
            .enumerate(limit)
            .iter()
            .map(|tuple| {
                tracks
                    .iter()
                    .zip(tuple)
                    .map(|(t, v)| format!("{t}={v}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        r.evidence("enumerate", listed);
    }
    r.timing("total", start);
    Ok(r)
}

fn parse_assignment(text: &str) -> Result<BTreeMap<String, u64>> {
    let mut out = BTreeMap::new();
    for part in text.split(',') {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| anyhow!("expected VAR=VALUE, got {part:?}"))?;
        let value: u64 = value.trim().parse().with_context(|| format!("bad value in {part:?}"))?;
        if out.insert(name.trim().to_string(), value).is_some() {
            bail!("variable {name:?} assigned twice");
        }
    }
    Ok(out)
}

pub fn morphism(args: &MorphismArgs, echo: &str) -> Result<RunReport> {
    let start = Instant::now();
    let mut r = RunReport::new(echo);
    if args.search {
        let k = args.k.ok_or_else(|| anyhow!("--search needs --k"))?;
        r.param("k", k);
        let mode = if args.exhaustive {
            SearchMode::Exhaustive
        } else {
            r.param("budget", args.budget);
            SearchMode::First {
                node_budget: args.budget,
            }
        };
        match search_cyclic_squarefree(k, mode, args.threads.max(1))? {
            SearchOutcome::Found(c) => {
                let record = certify(&mut r, c)?;
                if let Some(out) = &args.out {
                    write_file(out, &record.to_string())?;
                    r.evidence("out", path_str(out));
                }
            }
            SearchOutcome::All(all) => {
                if all.is_empty() {
                    r.outcome = Outcome::Refuted;
                    r.evidence("exhaustive", "none");
                } else {
                    r.evidence("exhaustive", all.len());
                    r.evidence("image0", all.iter().map(|c| c.to_string()).collect::<Vec<_>>());
                    if let Some(out) = &args.out {
                        let text: String = all
                            .into_iter()
                            .map(|c| MorphismRecord::certify(c).to_string())
                            .collect();
                        write_file(out, &text)?;
                        r.evidence("out", path_str(out));
                    }
                }
            }
            SearchOutcome::BudgetExhausted { nodes } => {
                r.outcome = Outcome::Inconclusive;
                r.evidence("budget exhausted", format!("{nodes} nodes visited"));
            }
        }
    } else {
        let (word_path, morphism_path) = match (&args.word, &args.morphism) {
            (Some(w), Some(m)) => (w, m),
            _ => bail!("--embed needs --word and --morphism"),
        };
        r.param("word", path_str(word_path))
            .param("morphism", path_str(morphism_path));
        let w = read_word(word_path)?;
        let text = fs::read_to_string(morphism_path).with_context(|| format!("reading {}", morphism_path.display()))?;
        let record: MorphismRecord = text
            .parse()
            .with_context(|| format!("parsing morphism in {}", morphism_path.display()))?;
        if !record.certified {
            bail!("morphism {} is marked uncertified", record.morphism);
        }
        let v = embed(&w, &record.morphism)?;
        let k = record.morphism.k();
        if let Some(sq) = find_square(&v) {
            bail!("embedding has a square at {} with period {}", sq.position, sq.period);
        }
        if subsequence_ap(&v, k, 0)? != w {
            bail!("embedding does not carry the input at multiples of {k}");
        }
        r.evidence("length", v.len())
            .evidence("squarefree", true)
            .evidence("subsequence identity", true);
        match &args.out {
            Some(out) => {
                write_file(out, &v.to_line())?;
                r.evidence("out", path_str(out));
            }
            None => {
                r.evidence("word", v.to_string());
            }
        }
    }
    r.timing("total", start);
    Ok(r)
}

fn certify(r: &mut RunReport, c: CyclicUniformMorphism) -> Result<MorphismRecord> {
    let record = MorphismRecord::certify(c);
    let cross = record.morphism.cross_check(CROSS_CHECK_LEN);
    if !record.certified || !cross {
        bail!("search returned {} which fails certification", record.morphism);
    }
    let lines: Vec<String> = record.to_string().lines().map(str::to_string).collect();
    r.evidence("morphism", lines).evidence(
        "cross check",
        format!("squarefree words of length <= {CROSS_CHECK_LEN}: passed"),
    );
    Ok(record)
}

pub fn dfao(args: &DfaoArgs, echo: &str) -> Result<RunReport> {
    let start = Instant::now();
    let mut r = RunReport::new(echo);
    r.param("doubling_bound", args.doubling_bound)
        .param("power_exp", args.power_exp);
    let d = vtm_dfao();
    r.timing("reconstruct", start);
    r.evidence("states", d.state_count())
        .evidence("verified below", 1u64 << 20);
    if let Some(out) = &args.out {
        write_file(out, &d.to_text())?;
        r.evidence("out", path_str(out));
    }
    if let Some(dot) = &args.dot {
        write_file(dot, &d.to_dot())?;
        r.evidence("dot", path_str(dot));
    }
    let doubling = check_doubling(&d, args.doubling_bound);
    let powers = check_power_of_two(&d, args.power_exp);
    r.evidence("doubling", doubling).evidence("powers of two", powers);
    r.outcome = if doubling && powers {
        Outcome::Confirmed
    } else {
        Outcome::Refuted
    };
    r.timing("total", start);
    Ok(r)
}
