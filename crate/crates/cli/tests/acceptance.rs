//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fs;
use std::panic;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use serde_json::Value;
use vtm_core::cyclic::{is_squarefree_morphism, MorphismRecord};
use vtm_core::dfao::{check_doubling, check_power_of_two, vtm_dfao};
use vtm_core::logic::{compile, parse_predicate, Sequences, TrackAutomaton, SAME_FIRST_LAST};
use vtm_core::oracles::{
    all_squarefree_words, naive_is_squarefree, naive_occurrences, predicate_cases, shortest_square_prefix,
};
use vtm_core::progressions::{occurrence_residues, subsequence_ap};
use vtm_core::squares::find_square_in;
use vtm_core::{find_square, vtm_prefix, Letter, Word};

type Check = fn(&Path) -> Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_cli(dir: &Path, args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_vtm"))
        .args(args)
        .env("VTM_CACHE_DIR", dir.join("cache"))
        .current_dir(dir)
        .output()
        .expect("binary runs");
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap_or(-1))
}

fn run_json(dir: &Path, args: &[&str]) -> Result<(Value, i32), String> {
    let mut all = args.to_vec();
    all.push("--json");
    let (out, code) = run_cli(dir, &all);
    let v = serde_json::from_str(&out).map_err(|e| format!("{e}: {out}"))?;
    Ok((v, code))
}

fn vtm_sequences() -> Sequences {
    Sequences::from([("VTM".to_string(), vtm_dfao())])
}

fn golden_prefix(dir: &Path) -> Result<(), String> {
    let (out, code) = run_cli(dir, &["generate", "--vtm", "--length", "15"]);
    ensure(code == 0 && out == "012021012102012\n", || {
        format!("got {out:?}, exit {code}")
    })
}

fn squarefree_prefix(_: &Path) -> Result<(), String> {
    let v = vtm_prefix(1_000_000);
    ensure(find_square(&v).is_none(), || "square in the 10^6 prefix".into())?;
    let short = &v.letters()[..10_000];
    // every prefix of a squarefree word is squarefree, so one naive scan
    // decides all 10^4 prefixes
    let naive = shortest_square_prefix(short);
    for len in 1..=short.len() {
        let fast = find_square_in(&short[..len]).is_some();
        let expected = naive.is_some_and(|m| m <= len);
        ensure(fast == expected, || {
            format!("prefix {len}: fast {fast}, naive {expected}")
        })?;
    }
    Ok(())
}

fn theorem1(dir: &Path) -> Result<(), String> {
    let (r, code) = run_json(
        dir,
        &["check", "--theorem1", "--k-range", "2..1000", "--prefix", "10000000"],
    )?;
    ensure(code == 0 && r["outcome"] == "confirmed", || {
        format!("outcome {}", r["outcome"])
    })?;
    let inconclusive = r["evidence"]["inconclusive"].as_array().unwrap();
    ensure(inconclusive.is_empty(), || format!("inconclusive: {inconclusive:?}"))?;
    let confirmed = r["evidence"]["confirmed"].as_array().unwrap();
    ensure(confirmed.len() == 999, || format!("{} entries", confirmed.len()))?;
    let v = vtm_prefix(10_000_000);
    let ks: BTreeSet<u64> = confirmed.iter().map(|e| e["k"].as_u64().unwrap()).collect();
    ensure(ks == (2..=1000).collect(), || "k set differs from 2..=1000".into())?;
    for e in confirmed {
        let (k, n) = (e["k"].as_u64().unwrap() as usize, e["n"].as_u64().unwrap() as usize);
        let (a, b) = (v[k * n], v[k * (n + 1)]);
        ensure(a == b && a != 1, || format!("k={k} n={n}: {a} {b}"))?;
    }
    Ok(())
}

fn dfao_fidelity(_: &Path) -> Result<(), String> {
    let d = vtm_dfao();
    let v = vtm_prefix(1 << 20);
    for n in 0..1u64 << 20 {
        ensure(d.run(n) == v[n as usize], || format!("run({n})"))?;
    }
    for n in 0..1u64 << 14 {
        let bits = 64 - n.leading_zeros();
        let digits: Vec<u8> = (0..bits).rev().map(|i| ((n >> i) & 1) as u8).collect();
        for pad in 0..=4 {
            let mut padded = vec![0u8; pad];
            padded.extend_from_slice(&digits);
            ensure(d.run_digits(&padded) == v[n as usize], || {
                format!("n={n} with {pad} leading zeros")
            })?;
        }
    }
    Ok(())
}

fn doubling(_: &Path) -> Result<(), String> {
    let d = vtm_dfao();
    ensure(check_doubling(&d, 1_000_000), || "check_doubling(10^6) is false".into())?;
    ensure(check_power_of_two(&d, 19), || "check_power_of_two(19) is false".into())
}

fn same_first_last(_: &Path) -> Result<(), String> {
    let a = compile(
        &parse_predicate(SAME_FIRST_LAST).map_err(|e| e.to_string())?,
        &vtm_sequences(),
    )
    .map_err(|e| e.to_string())?;
    ensure(a.tracks() == ["k"], || format!("tracks {:?}", a.tracks()))?;
    for k in 1..=1u64 << 16 {
        let got = a.accepts(&[k]).unwrap();
        ensure(got == (k >= 2), || format!("k={k}: {got}"))?;
    }
    let v = vtm_prefix(1 << 14);
    for k in 0..1usize << 7 {
        let brute = (0..v.len() - k).any(|i| v[i] == v[i + k] && v[i] != 1);
        ensure(a.accepts(&[k as u64]).unwrap() == brute, || {
            format!("k={k} disagrees with the scan")
        })?;
    }
    Ok(())
}

fn compiler_oracles(_: &Path) -> Result<(), String> {
    let seqs = vtm_sequences();
    let v = vtm_prefix(1 << 14);
    let cases = predicate_cases();
    ensure(cases.len() >= 20, || format!("only {} formulas", cases.len()))?;
    for case in &cases {
        ensure(case.vars.len() <= 3, || format!("{}: too many variables", case.formula))?;
        let f = parse_predicate(case.formula).map_err(|e| e.to_string())?;
        let a = compile(&f, &seqs).map_err(|e| format!("{}: {e}", case.formula))?;
        ensure(a.tracks() == case.vars, || {
            format!("{}: tracks {:?}", case.formula, a.tracks())
        })?;
        let mut x = vec![0u64; case.vars.len()];
        loop {
            let got = a.accepts(&x).unwrap();
            ensure(got == (case.eval)(v.letters(), &x), || {
                format!("{} at {x:?}", case.formula)
            })?;
            let Some(j) = (0..x.len()).find(|&j| x[j] + 1 < 1 << 7) else {
                break;
            };
            x[j] += 1;
            x[..j].iter_mut().for_each(|y| *y = 0);
        }
    }
    Ok(())
}

fn residues(_: &Path) -> Result<(), String> {
    let v = vtm_prefix(1_000_000);
    let letters = v.letters();
    let mut factors: BTreeSet<&[Letter]> = BTreeSet::new();
    for len in 1..=6 {
        factors.extend(letters.windows(len));
    }
    for factor in factors {
        let positions = naive_occurrences(letters, factor);
        let fw = Word::new(factor.to_vec(), 3).unwrap();
        for k in (3..=25).step_by(2) {
            let scanned: BTreeSet<usize> = positions.iter().map(|p| p % k).collect();
            let got = occurrence_residues(&v, &fw, k).map_err(|e| e.to_string())?;
            ensure(got == scanned, || format!("{fw} mod {k}: library and scan differ"))?;
            ensure(got.len() == k, || format!("{fw} mod {k}: residues {got:?}"))?;
        }
    }
    Ok(())
}

fn load_record(dir: &Path, k: usize) -> Result<MorphismRecord, String> {
    let file = format!("m{k}.txt");
    let (r, code) = run_json(dir, &["morphism", "--search", "--k", &k.to_string(), "--out", &file])?;
    ensure(code == 0 && r["outcome"] == "confirmed", || {
        format!("k={k}: {}", r["outcome"])
    })?;
    let text = fs::read_to_string(dir.join(file)).map_err(|e| e.to_string())?;
    text.parse().map_err(|e: vtm_core::cyclic::MorphismError| e.to_string())
}

fn cyclic_search(dir: &Path) -> Result<(), String> {
    let short: Vec<Vec<Letter>> = (0..=8).flat_map(|n| all_squarefree_words(3, n)).collect();
    for k in [23, 24, 25] {
        let start = Instant::now();
        let record = load_record(dir, k)?;
        let m = record.morphism.as_morphism();
        ensure(record.certified && record.morphism.k() == k, || {
            format!("k={k}: {record}")
        })?;
        ensure((0..3).all(|i| m.image(i).len() == k && m.image(i)[0] == i), || {
            format!("k={k}: not cyclic")
        })?;
        ensure(is_squarefree_morphism(&m).unwrap(), || {
            format!("k={k}: finite criterion fails")
        })?;
        for w in &short {
            let image: Vec<Letter> = w.iter().flat_map(|&a| m.image(a).letters().to_vec()).collect();
            ensure(naive_is_squarefree(&image), || {
                format!("k={k}: image of {w:?} has a square")
            })?;
        }
        ensure(start.elapsed() < Duration::from_secs(300), || {
            format!("k={k} took {:?}", start.elapsed())
        })?;
    }
    Ok(())
}

fn embedding(dir: &Path) -> Result<(), String> {
    let record = load_record(dir, 23)?;
    let w = vtm_prefix(10_000);
    fs::write(dir.join("w.txt"), w.to_line()).unwrap();
    let (r, code) = run_json(
        dir,
        &[
            "morphism",
            "--embed",
            "--word",
            "w.txt",
            "--morphism",
            "m23.txt",
            "--out",
            "v.txt",
        ],
    )?;
    ensure(code == 0 && r["outcome"] == "confirmed", || format!("{r}"))?;
    let v: Word = fs::read_to_string(dir.join("v.txt")).unwrap().trim().parse().unwrap();
    ensure(v == record.morphism.as_morphism().apply(&w).unwrap(), || {
        "file differs from h(w)".into()
    })?;
    ensure(v.len() == 230_000, || format!("length {}", v.len()))?;
    ensure(find_square(&v).is_none(), || "embedding has a square".into())?;
    ensure(subsequence_ap(&v, 23, 0).unwrap() == w, || {
        "subsequence differs from w".into()
    })
}

/// Simultaneous breadth-first walk; succeeds iff the reachable parts are
/// isomorphic with matching initial states.
fn bfs_isomorphic(a: &TrackAutomaton, b: &TrackAutomaton) -> bool {
    if a.tracks() != b.tracks() || a.state_count() != b.state_count() {
        return false;
    }
    let mut map = HashMap::from([(a.initial(), b.initial())]);
    let mut queue = VecDeque::from([(a.initial(), b.initial())]);
    while let Some((p, q)) = queue.pop_front() {
        if a.is_accepting(p) != b.is_accepting(q) {
            return false;
        }
        for s in 0..a.alphabet() {
            let (p2, q2) = (a.step(p, s), b.step(q, s));
            match map.get(&p2) {
                Some(&m) if m != q2 => return false,
                Some(_) => {}
                None => {
                    map.insert(p2, q2);
                    queue.push_back((p2, q2));
                }
            }
        }
    }
    let images: BTreeSet<u32> = map.values().copied().collect();
    images.len() == map.len()
}

fn canonical_minimization(_: &Path) -> Result<(), String> {
    let seqs = vtm_sequences();
    let d = vtm_dfao();
    ensure(d.minimize() == d.minimize().minimize(), || {
        "DFAO minimization not idempotent".into()
    })?;
    let build = |text: &str| compile(&parse_predicate(text).unwrap(), &seqs).unwrap();
    for case in predicate_cases().iter().take(12) {
        let a = build(case.formula);
        ensure(a.minimize() == a, || {
            format!("{}: compiled automaton not minimal", case.formula)
        })?;
        ensure(a.minimize().minimize() == a.minimize(), || {
            format!("{}: not idempotent", case.formula)
        })?;
    }
    let sfl = build(SAME_FIRST_LAST);
    let variants = [
        format!("~~({SAME_FIRST_LAST})"),
        "~(Ai ~((VTM[i]=@0 & VTM[i+k]=@0)|(VTM[i]=@2 & VTM[i+k]=@2)))".to_string(),
        "Ei (VTM[i+k]=@2 & VTM[i]=@2)|(VTM[i+k]=@0 & VTM[i]=@0)".to_string(),
    ];
    for text in &variants {
        let other = build(text);
        ensure(bfs_isomorphic(&sfl, &other), || format!("{text} not isomorphic"))?;
        ensure(sfl.is_isomorphic(&other), || format!("{text}: is_isomorphic disagrees"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, u64); 11] = [
        ("golden prefix", golden_prefix, 1),
        ("vtm squarefree, fast finder vs naive", squarefree_prefix, 30),
        ("equal letters 0/2 along every progression, k <= 1000", theorem1, 120),
        ("DFAO fidelity and leading zeros", dfao_fidelity, 60),
        ("doubling and powers of two", doubling, 60),
        ("same_first_last accepts exactly k >= 2", same_first_last, 60),
        ("compiler vs brute force", compiler_oracles, 600),
        ("occurrence residues for odd k", residues, 120),
        ("cyclic squarefree morphisms k = 23, 24, 25", cyclic_search, 900),
        ("embedding identity", embedding, 60),
        ("canonical minimization", canonical_minimization, 600),
    ];
    let dir = tempfile::tempdir().expect("temp dir");
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(|| check(dir.path())).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        let result =
            result.and_then(|()| ensure(secs < *limit as f64, || format!("took {secs:.1} s, limit {limit} s")));
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.2} s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2} s): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
