//! Acceptance gate. Prints one line per criterion with its timing and
//! limit, and exits non-zero if any criterion fails.

use std::cell::RefCell;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use fraisse_core::classes::{Builtin, ClassSpec};
use fraisse_core::expansions::{locally_invariant_orderings, reversal, LinearOrdering};
use fraisse_core::flows::{
    fix_set, lo_flow, natural_flow, regular_flow, stabilizer, subgroups_up_to_conjugacy, FiniteFlow, Perm, PermGroup,
    DEFAULT_POINT_CAP, DEFAULT_SUBGROUP_CAP,
};
use fraisse_core::ramsey::{
    replay_ramsey_certificate, replay_relative_certificate, verify_ramsey_witness, ColoringCertificate, DEFAULT_BUDGET,
};
use fraisse_core::report::Verdict;
use fraisse_core::structures::builders::{chain, graph, pure_set};
use fraisse_core::structures::{canonical_form, embeds, is_embedding, EmbeddingMap, Structure};
use itertools::Itertools;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use serde_json::{json, Value};

const FIXTURE_GROUPS: [&str; 10] = [
    "cyclic:2", "cyclic:3", "cyclic:4", "cyclic:5", "cyclic:6", "cyclic:7", "cyclic:8", "symmetric:3", "dihedral:4",
    "alternating:4",
];
const PROPERTY_TRIALS: u32 = 1000;

struct Run {
    code: i32,
    report: Value,
}

struct Harness {
    bin: PathBuf,
    dir: tempfile::TempDir,
    log: RefCell<Vec<Vec<String>>>,
}

impl Harness {
    fn invoke(&self, extra: &[&str], args: &[String]) -> (i32, String, String) {
        let out = Command::new(&self.bin)
            .args(["--format", "machine", "--no-cache"])
            .args(extra)
            .args(args)
            .output()
            .expect("binary runs");
        (
            out.status.code().unwrap_or(-1),
            String::from_utf8_lossy(&out.stdout).into_owned(),
            String::from_utf8_lossy(&out.stderr).into_owned(),
        )
    }

    fn run(&self, args: &[&str]) -> Result<Run, String> {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        self.log.borrow_mut().push(args.clone());
        let (code, stdout, stderr) = self.invoke(&[], &args);
        let report = serde_json::from_str(&stdout)
            .map_err(|e| format!("`{}` gave no report (exit {code}): {e}; {stderr}", args.join(" ")))?;
        Ok(Run { code, report })
    }

    fn write(&self, name: &str, value: &impl serde::Serialize) -> String {
        let path = self.dir.path().join(name);
        std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
        path.to_string_lossy().into_owned()
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn verdict(r: &Run) -> &str {
    r.report["verdict"].as_str().unwrap_or("")
}

// Criterion 1 oracle: every ordering checked against every isomorphism
// between induced substructures.
fn partial_automorphisms(d: &Structure) -> Vec<Vec<(usize, usize)>> {
    let n = d.size();
    let mut out = Vec::new();
    for k in 2..=n {
        for dom in (0..n).combinations(k) {
            let sub = d.induced_substructure(&dom).unwrap();
            for img in (0..n).permutations(k) {
                if is_embedding(&EmbeddingMap { source: &sub, target: d, map: img.clone() }).unwrap() {
                    out.push(dom.iter().copied().zip(img).collect());
                }
            }
        }
    }
    out
}

fn oracle_invariant(d: &Structure) -> Vec<Vec<usize>> {
    let partials = partial_automorphisms(d);
    LinearOrdering::all(d.size())
        .filter(|o| {
            let r = o.ranks();
            partials
                .iter()
                .all(|p| p.iter().tuple_combinations().all(|(&(a, fa), &(b, fb))| (r[a] < r[b]) == (r[fa] < r[fb])))
        })
        .map(|o| o.sequence().to_vec())
        .collect()
}

fn orderings_of(r: &Run) -> Vec<Vec<usize>> {
    serde_json::from_value(r.report["result"]["orderings"].clone()).unwrap_or_default()
}

fn fix_lemma(h: &Harness) -> Result<String, String> {
    for n in 2..=7 {
        let c = h.run(&["invariant-orderings", "--structure", &h.write(&format!("chain{n}.json"), &chain(n))])?;
        let got = orderings_of(&c);
        let natural: Vec<usize> = (0..n).collect();
        let reversed: Vec<usize> = (0..n).rev().collect();
        ensure(c.code == 0 && got == vec![natural, reversed], || format!("chain {n}: {got:?}"))?;
        ensure(oracle_invariant(&chain(n)) == got, || format!("chain {n}: oracle disagrees"))?;

        let p = h.run(&["invariant-orderings", "--structure", &h.write(&format!("set{n}.json"), &pure_set(n))])?;
        let got = orderings_of(&p);
        ensure(p.code == 0 && got.is_empty(), || format!("pure set {n}: {got:?}"))?;
        ensure(oracle_invariant(&pure_set(n)).is_empty(), || format!("pure set {n}: oracle disagrees"))?;
    }
    Ok("chains give {<, <*}, pure sets give none, n = 2..7, oracle agrees".into())
}

fn no_mono_triple(copies: &[Vec<usize>], colors: &[usize], size: usize) -> bool {
    (0..size).tuple_combinations().all(|(a, b, c)| {
        let col = |x: usize, y: usize| colors[copies.iter().position(|p| *p == [x, y]).unwrap()];
        !(col(a, b) == col(a, c) && col(a, c) == col(b, c))
    })
}

fn classical_ramsey(h: &Harness) -> Result<String, String> {
    let r = h.run(&["ramsey", "search", "--class", "linear-orders", "--a", "2", "--b", "3", "--k", "2", "--max", "7"])?;
    ensure(r.code == 0 && verdict(&r) == "TRUE", || format!("verdict {}", verdict(&r)))?;
    let witness: Structure = serde_json::from_value(r.report["witness"].clone()).map_err(|e| e.to_string())?;
    ensure(witness.size() == 6, || format!("witness size {}", witness.size()))?;
    let refuted = r.report["result"]["refuted"].as_array().cloned().unwrap_or_default();
    let mut sizes = Vec::new();
    for entry in &refuted {
        let cand: Structure = serde_json::from_value(entry["candidate"].clone()).map_err(|e| e.to_string())?;
        let cert: ColoringCertificate =
            serde_json::from_value(entry["certificate"].clone()).map_err(|e| e.to_string())?;
        ensure(replay_ramsey_certificate(&chain(2), &chain(3), &cand, &cert).unwrap(), || "replay failed".into())?;
        let pairs = cand.size() * (cand.size() - 1) / 2;
        ensure(cert.copies.len() == pairs, || "certificate misses a pair".into())?;
        ensure(no_mono_triple(&cert.copies, &cert.colors, cand.size()), || "certificate has a mono triple".into())?;
        sizes.push(cand.size());
    }
    ensure(sizes == [3, 4, 5], || format!("refuted sizes {sizes:?}"))?;
    Ok(format!("witness size 6; sizes {sizes:?} refuted by replayed colorings"))
}

fn pigeonhole(h: &Harness) -> Result<String, String> {
    let args = |c: &'static str| {
        ["relative-ramsey", "verify", "--class", "linear-orders", "--base", "pure-sets", "--a", "1", "--b", "2", "--k", "2", "--c", c]
    };
    let yes = h.run(&args("3"))?;
    ensure(yes.code == 0 && verdict(&yes) == "TRUE", || format!("C0 = 3: {}", verdict(&yes)))?;
    let no = h.run(&args("2"))?;
    ensure(no.code == 1 && verdict(&no) == "FALSE", || format!("C0 = 2: {}", verdict(&no)))?;
    let cert: ColoringCertificate =
        serde_json::from_value(no.report["counterexample"].clone()).map_err(|e| e.to_string())?;
    ensure(cert.colors.len() == 2 && cert.colors[0] != cert.colors[1], || format!("colors {:?}", cert.colors))?;
    let k0 = ClassSpec::builtin(Builtin::PureSets);
    ensure(replay_relative_certificate(&k0, &pure_set(1), &chain(2), &pure_set(2), &cert).unwrap(), || {
        "replay failed".into()
    })?;
    Ok(format!("TRUE at 3 points; FALSE at 2 with coloring {:?}, replayed", cert.colors))
}

fn rel_ea(h: &Harness) -> Result<String, String> {
    let mut checked = 0;
    for spec in FIXTURE_GROUPS {
        let g = PermGroup::from_spec(spec).unwrap();
        for sub in subgroups_up_to_conjugacy(&g, DEFAULT_SUBGROUP_CAP).unwrap() {
            let gens = serde_json::to_string(&sub.generators).unwrap();
            let r = h.run(&["flow", "rel-ea", "--group", spec, "--h", &gens])?;
            ensure(r.report["result"].is_object(), || format!("{spec} {gens}: audit mismatch"))?;
            let regular = r.report["result"]["regular_fixed_point"].is_number();
            let cosets = r.report["result"]["per_class"].as_array().unwrap().iter().all(|c| c["fixed_point"].is_number());
            ensure(regular == cosets, || format!("{spec} {gens}: criteria disagree"))?;
            let trivial = sub.order() == 1;
            let expect = if trivial { (0, "TRUE") } else { (1, "FALSE") };
            ensure((r.code, verdict(&r)) == expect, || format!("{spec} {gens}: {}", verdict(&r)))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (G, H) pairs, 0 mismatches, TRUE exactly for trivial H"))
}

fn minimality(h: &Harness) -> Result<String, String> {
    let mut flows: Vec<String> = (2..=4).map(|n| format!("lo:{n}")).collect();
    flows.extend(FIXTURE_GROUPS.iter().map(|g| format!("regular:{g}")));
    for f in &flows {
        let r = h.run(&["flow", "audit-minimality", "--flow", f])?;
        let res = &r.report["result"];
        ensure(r.code == 0 && res["pass"] == json!(true), || format!("{f}: {}", verdict(&r)))?;
        ensure(res["minimal"] == json!(true) && res["universal"] == json!(true), || format!("{f}: {res}"))?;
    }
    Ok(format!("{} flows pass", flows.len()))
}

fn maximal_fix(h: &Harness) -> Result<String, String> {
    for n in [3usize, 4] {
        let r = h.run(&["flow", "maximal-fix", "--flow", &format!("lo:{n}")])?;
        ensure(r.code == 0 && r.report["result"]["outcome"]["status"] == json!("MAXIMAL"), || {
            format!("lo:{n}: {}", r.report["result"])
        })?;
        let total: usize = (1..=n).product();
        ensure(r.report["result"]["elements_scanned"] == json!(total - 1), || "scan was not exhaustive".into())?;
        for g in PermGroup::symmetric(n).elements().unwrap().iter().filter(|g| !g.is_identity()) {
            for o in LinearOrdering::all(n) {
                let moved: Vec<usize> = o.sequence().iter().map(|&p| g.apply(p)).collect();
                ensure(moved != o.sequence(), || format!("{g:?} fixes {o:?}"))?;
            }
        }
    }
    Ok("MAXIMAL on lo:3 and lo:4; no non-identity permutation fixes an ordering".into())
}

fn relation(s: &Value, sym: &str) -> Vec<Vec<usize>> {
    serde_json::from_value(s["relations"][sym].clone()).unwrap_or_default()
}

fn fraisse_axioms(h: &Harness) -> Result<String, String> {
    for class in ["graphs", "k3-free-graphs"] {
        for axiom in ["hp", "jep", "ap"] {
            let r = h.run(&["class", "check", axiom, "--class", class, "--n", "3", "--cap", "6"])?;
            ensure(r.code == 0 && verdict(&r) == "TRUE", || format!("{class} {axiom}: {}", verdict(&r)))?;
        }
    }

    let sig = json!([{"name": "<", "arity": 2}, {"name": "P", "arity": 1}]);
    let two = json!({"signature": sig, "order_symbol": "<", "size": 2,
        "relations": {"<": [[0, 1]], "P": [[0], [1]]}});
    let spec = json!({"signature": sig, "order_symbol": "<", "mode": "forbidden", "forbidden": [two]});
    let path = h.write("two_p.json", &spec);
    let r = h.run(&["class", "check", "ap", "--spec", &path, "--n", "3", "--cap", "6"])?;
    ensure(r.code == 1 && verdict(&r) == "FALSE", || format!("fixture ap: {}", verdict(&r)))?;
    let ce = &r.report["counterexample"];
    let (a, b, c) = (&ce["a"], &ce["b"], &ce["c"]);
    let f: Vec<usize> = serde_json::from_value(ce["f"].clone()).unwrap();
    let g: Vec<usize> = serde_json::from_value(ce["g"].clone()).unwrap();
    ensure(a["size"] == json!(1) && relation(a, "P").is_empty(), || format!("A = {a}"))?;
    ensure(b["size"] == json!(2) && c["size"] == json!(2), || "B and C should have two points".into())?;
    let (pb, pc) = (1 - f[0], 1 - g[0]);
    ensure(relation(b, "P") == [vec![pb]] && relation(b, "<").contains(&vec![pb, f[0]]), || {
        format!("B should add a P point below a: {b}")
    })?;
    ensure(relation(c, "P") == [vec![pc]] && relation(c, "<").contains(&vec![g[0], pc]), || {
        format!("C should add a P point above a: {c}")
    })?;

    let l = h.run(&["limit", "build", "--class", "graphs", "--level", "2", "--cap", "12"])?;
    ensure(l.code == 0 && verdict(&l) == "TRUE", || format!("graph limit: {}", verdict(&l)))?;
    let carrier: Structure = serde_json::from_value(l.report["witness"]["carrier"].clone()).map_err(|e| e.to_string())?;
    let n = carrier.size();
    let ok = n > 0
        && (0..n).all(|v| {
            (0..n).any(|w| w != v && carrier.holds(0, &[v, w])) && (0..n).any(|w| w != v && !carrier.holds(0, &[v, w]))
        });
    ensure(ok, || "graph carrier fails the independent 2-extension audit".into())?;
    Ok(format!("6 axiom checks pass; fixture AP counterexample exact; graph carrier of size {n} audited"))
}

fn wop_audit(h: &Harness) -> Result<String, String> {
    let cases: [(&str, &str, &str, &str); 2] =
        [("linear-orders", "pure-sets", "3", "4"), ("ordered-graphs", "graphs", "2", "2")];
    let mut notes = Vec::new();
    for (k, k0, n, level) in cases {
        let r = h.run(&["audit", "wop-op", "--class", k, "--base", k0, "--n", n, "--level", level])?;
        ensure(r.code == 0 && verdict(&r) == "TRUE", || format!("{k}: {}", verdict(&r)))?;
        ensure(r.report["counterexample"].is_null(), || format!("{k}: counterexample reported"))?;
        let entries = r.report["result"]["entries"].as_array().cloned().unwrap_or_default();
        ensure(entries.iter().all(|e| e["status"] != json!("INCONCLUSIVE")), || format!("{k}: inconclusive entry"))?;
        let substantive = entries.iter().filter(|e| e["status"] == json!("TRUE")).count();
        notes.push(format!("{k}: {substantive}/{} entries with witnesses", entries.len()));
    }
    Ok(notes.join("; "))
}

fn flows() -> &'static [FiniteFlow] {
    static FLOWS: OnceLock<Vec<FiniteFlow>> = OnceLock::new();
    FLOWS.get_or_init(|| {
        let mut v = vec![lo_flow(3, DEFAULT_POINT_CAP).unwrap(), lo_flow(4, DEFAULT_POINT_CAP).unwrap()];
        v.extend(FIXTURE_GROUPS.iter().map(|g| regular_flow(&PermGroup::from_spec(g).unwrap()).unwrap()));
        v.push(natural_flow(&PermGroup::symmetric(4)).unwrap());
        v
    })
}

fn small_graph(max: usize) -> impl Strategy<Value = Structure> {
    (0usize..=max, prop::collection::vec(any::<bool>(), 15)).prop_map(|(n, bits)| {
        let edges: Vec<(usize, usize)> =
            (0..n).tuple_combinations().zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
        graph(n, &edges)
    })
}

fn runner() -> TestRunner {
    TestRunner::new(Config { cases: PROPERTY_TRIALS, failure_persistence: None, ..Config::default() })
}

fn property_suites(_: &Harness) -> Result<String, String> {
    let nflows = flows().len();
    let index = any::<prop::sample::Index>();

    runner()
        .run(&(0..nflows, prop::collection::vec(index.clone(), 0..3), prop::collection::vec(index.clone(), 0..3)), |(f, h, extra)| {
            let flow = &flows()[f];
            let els = flow.group().elements().unwrap();
            let small: Vec<Perm> = h.iter().map(|i| i.get(els).clone()).collect();
            let mut big = small.clone();
            big.extend(extra.iter().map(|i| i.get(els).clone()));
            let (fs, fb) = (fix_set(flow, &small).unwrap(), fix_set(flow, &big).unwrap());
            prop_assert!(fb.iter().all(|x| fs.contains(x)));
            Ok(())
        })
        .map_err(|e| format!("fix antitonicity: {e}"))?;

    runner()
        .run(&(0..nflows, index.clone(), index.clone()), |(f, g, x)| {
            let flow = &flows()[f];
            let g = g.get(flow.group().elements().unwrap());
            let x = x.index(flow.points());
            let mut lhs = stabilizer(flow, flow.act(g, x).unwrap()).unwrap();
            let mut rhs: Vec<Perm> =
                stabilizer(flow, x).unwrap().iter().map(|s| g.compose(s).compose(&g.inverse())).collect();
            lhs.sort();
            rhs.sort();
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .map_err(|e| format!("stabilizer conjugation: {e}"))?;

    let graphs = ClassSpec::builtin(Builtin::Graphs);
    runner()
        .run(
            &(small_graph(2), small_graph(3), small_graph(4), prop::collection::vec(any::<bool>(), 4), 1usize..=3),
            |(a, b, c, extra, k)| {
                let check = |c: &Structure, k| verify_ramsey_witness(&graphs, &a, &b, k, c, DEFAULT_BUDGET).unwrap().verdict;
                let here = check(&c, k);
                prop_assert_ne!(here, Verdict::Inconclusive);
                prop_assert_eq!(check(&c, 1).holds(), embeds(&b, &c).unwrap());
                if here == Verdict::True {
                    if k > 1 {
                        prop_assert_eq!(check(&c, k - 1), Verdict::True);
                    }
                    let n = c.size();
                    let mut edges: Vec<(usize, usize)> =
                        (0..n).tuple_combinations().filter(|&(x, y)| c.holds(0, &[x, y])).collect();
                    edges.extend((0..n).filter(|&v| extra[v]).map(|v| (v, n)));
                    prop_assert_eq!(check(&graph(n + 1, &edges), k), Verdict::True);
                }
                Ok(())
            },
        )
        .map_err(|e| format!("Ramsey monotonicity: {e}"))?;

    runner()
        .run(&small_graph(6).prop_flat_map(|g| { let n = g.size(); (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle()) }), |(g, p)| {
            prop_assert_eq!(canonical_form(&g.permuted(&p).unwrap()), canonical_form(&g));
            Ok(())
        })
        .map_err(|e| format!("canonical relabeling: {e}"))?;

    runner()
        .run(&small_graph(6), |g| {
            let set = locally_invariant_orderings(&g).unwrap();
            prop_assert!(set.orderings.iter().all(|o| set.contains(&reversal(o))));
            Ok(())
        })
        .map_err(|e| format!("reversal closure: {e}"))?;

    Ok(format!("5 suites x {PROPERTY_TRIALS} trials"))
}

fn determinism(h: &Harness) -> Result<String, String> {
    let commands = h.log.borrow().clone();
    for args in &commands {
        let (_, one, _) = h.invoke(&["--jobs", "1"], args);
        let (_, eight, _) = h.invoke(&["--jobs", "8"], args);
        ensure(one == eight, || format!("`{}` differs between 1 and 8 workers", args.join(" ")))?;
        let (_, again, _) = h.invoke(&["--jobs", "8"], args);
        ensure(eight == again, || format!("`{}` differs between runs", args.join(" ")))?;
    }
    let cached = h.dir.path().join("cache");
    let cache_args = ["--cache-dir", cached.to_str().unwrap()];
    let probe: Vec<String> = ["ramsey", "search", "--class", "linear-orders", "--a", "2", "--b", "3", "--k", "2", "--max", "7"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let cold = Command::new(&h.bin).args(["--format", "machine"]).args(cache_args).args(&probe).output().unwrap();
    let warm = Command::new(&h.bin).args(["--format", "machine"]).args(cache_args).args(&probe).output().unwrap();
    ensure(cold.stdout == warm.stdout, || "cached report differs from the computed one".into())?;
    Ok(format!("{} commands byte-identical at 1 and 8 workers; cache hit identical", commands.len()))
}

type Criterion = (&'static str, Duration, fn(&Harness) -> Result<String, String>);

fn main() {
    let harness = Harness {
        bin: PathBuf::from(env!("CARGO_BIN_EXE_fraisse")),
        dir: tempfile::tempdir().unwrap(),
        log: RefCell::new(Vec::new()),
    };
    assert!(Path::new(&harness.bin).exists());
    let criteria: [Criterion; 10] = [
        ("fix-lemma finite analog", Duration::from_secs(60), fix_lemma),
        ("classical Ramsey recomputation", Duration::from_secs(60), classical_ramsey),
        ("pigeonhole relative Ramsey", Duration::from_secs(1), pigeonhole),
        ("finite relative extreme amenability audit", Duration::from_secs(120), rel_ea),
        ("universality/minimality biconditional", Duration::from_secs(60), minimality),
        ("maximality echo", Duration::from_secs(10), maximal_fix),
        ("Fraisse axioms", Duration::from_secs(120), fraisse_axioms),
        ("weak ordering implies ordering audit", Duration::from_secs(300), wop_audit),
        ("property suites", Duration::from_secs(300), property_suites),
        ("determinism", Duration::from_secs(600), determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check(&harness);
        let took = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if took <= *limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over time limit")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "{status} [{:>2}] {name}: {detail} ({:.2}s, limit {}s)",
            i + 1,
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
