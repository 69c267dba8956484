//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use pfister_core::certifier::enumerate_quotient;
use pfister_core::involution::build_involution_algebra;
use pfister_core::oracle::{self, SearchBudget};
use pfister_core::quadform::{self, hilbert, PfisterForm, QuadraticForm};
use pfister_core::{Element, Field, TriState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value as Json;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfister-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(o: &Output) -> Result<Json, String> {
    serde_json::from_slice(&o.stdout).map_err(|e| format!("stdout is not JSON: {e}"))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pfister-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir.join(name)
}

// ----------------------------------------------------------------- 1, 2, 3

fn example_cert(p: u64) -> Result<(Json, Vec<u8>, Duration), String> {
    let t = Instant::now();
    let o = bin(&["example", "--p", &p.to_string(), "--json"]);
    let dt = t.elapsed();
    ensure(
        o.status.code() == Some(0),
        format!("p = {p}: exit {:?}", o.status.code()),
    )?;
    Ok((json_of(&o)?, o.stdout, dt))
}

fn criterion_1() -> Outcome {
    let mut times = Vec::new();
    for p in [3u64, 5, 7] {
        let (v, _, dt) = example_cert(p)?;
        let u = v["example"]["u"].as_i64().ok_or("missing u")?;
        let pt = format!("-{p}*t");
        ensure(
            v["conclusion"] == "CertifiedNontrivial",
            format!("p = {p}: {}", v["conclusion"]),
        )?;
        ensure(
            v["witness"] == pt.as_str(),
            format!("p = {p}: witness {}", v["witness"]),
        )?;
        ensure(
            v["example"]["pfister_anisotropic"]["verdict"] == "yes",
            format!("p = {p}: (i) <<p,u,t>>"),
        )?;
        let target = serde_json::json!([u.to_string(), p.to_string(), pt]);
        let chain = v["example"]["slot_chain"]["children"]
            .as_array()
            .ok_or("missing slot chain")?;
        ensure(
            chain.iter().any(|s| s["data"]["to"] == target),
            format!("p = {p}: (ii) chain misses <<u,p,-pt>>"),
        )?;
        ensure(
            v["memberships"]["in_N"]["verdict"] == "yes",
            format!("p = {p}: (iii) -pt in N*"),
        )?;
        ensure(
            v["example"]["norm_witness"].is_object(),
            format!("p = {p}: (iii) norm witness"),
        )?;
        let fz = &v["example"]["factorization"];
        ensure(
            fz["n1"] == format!("-{p}").as_str() && fz["n2"] == "t",
            format!("p = {p}: (iii) factorization {fz}"),
        )?;
        ensure(
            v["memberships"]["in_NrdProduct"]["verdict"] == "yes",
            format!("p = {p}: product membership"),
        )?;
        ensure(
            v["memberships"]["not_in_Nrd1"]["verdict"] == "no",
            format!("p = {p}: (iv) -pt in Nrd*(u,p)"),
        )?;
        ensure(
            dt < Duration::from_secs(1),
            format!("p = {p}: {dt:?} exceeds 1 s"),
        )?;
        times.push(format!("p={p} {:.0} ms", dt.as_secs_f64() * 1e3));
    }
    Ok(format!(
        "witness -Pt for P = 3, 5, 7 ({})",
        times.join(", ")
    ))
}

const TOWER_ARGS: [&str; 10] = [
    "enumerate",
    "--field",
    "Fq-tower:q=3,vars=s,t",
    "--a",
    "-1",
    "--b",
    "s",
    "--c",
    "t",
    "--json",
];

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let o = bin(&[&TOWER_ARGS[..], &["--audit"]].concat());
    let dt = t.elapsed();
    ensure(
        o.status.code() == Some(0),
        format!("exit {:?}", o.status.code()),
    )?;
    ensure(
        String::from_utf8_lossy(&o.stderr).contains("audit: passed"),
        "audit did not pass",
    )?;
    let v = json_of(&o)?;
    ensure(
        v["class_count"] == 8,
        format!("class count {}", v["class_count"]),
    )?;
    ensure(v["h_subset_gplus"] == true, "H not inside G+")?;
    ensure(v["k_independent"] == true, "N ∩ Nrd1 != N ∩ Nrd2")?;
    ensure(
        v["c_class"] == "t" && v["c_in_gplus_minus_h"] == true,
        "t not in G+ \\ H",
    )?;
    let order = v["quotient_order"].as_u64().ok_or("missing order")?;
    ensure(
        order >= 2 && order.is_power_of_two(),
        format!("order {order}"),
    )?;
    let again = bin(&TOWER_ARGS);
    ensure(json_of(&again)? == v, "second run differs")?;
    ensure(dt < Duration::from_secs(1), format!("{dt:?} exceeds 1 s"))?;
    Ok(format!(
        "|G+| = {}, |H| = {}, |G+/H| = {order}, audit confirms every row ({:.0} ms)",
        v["G_plus"]["elements"].as_array().map_or(0, |a| a.len()),
        v["H"]["elements"].as_array().map_or(0, |a| a.len()),
        dt.as_secs_f64() * 1e3
    ))
}

const QT_ARGS: [&str; 10] = [
    "certify", "--field", "Q(t)", "--a", "5", "--b", "2", "--c", "t", "--json",
];

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let o = bin(&QT_ARGS);
    let dt = t.elapsed();
    ensure(
        o.status.code() == Some(0),
        format!("exit {:?}", o.status.code()),
    )?;
    let v = json_of(&o)?;
    ensure(
        v["conclusion"] == "CertifiedNontrivial",
        format!("{}", v["conclusion"]),
    )?;
    ensure(dt < Duration::from_secs(1), format!("{dt:?} exceeds 1 s"))?;
    Ok(format!(
        "(5, 2, t) over Q(t) certified ({:.0} ms)",
        dt.as_secs_f64() * 1e3
    ))
}

// ----------------------------------------------------------------------- 4

fn criterion_4() -> Outcome {
    let o = bin(&["search", "--field", "Q", "--bound", "30", "--all"]);
    ensure(
        o.status.code() == Some(0),
        format!("exit {:?}", o.status.code()),
    )?;
    let (mut n, mut i, mut ii) = (0usize, 0usize, 0usize);
    for line in String::from_utf8_lossy(&o.stdout).lines() {
        let r: Json = serde_json::from_str(line).map_err(|e| e.to_string())?;
        n += 1;
        ensure(
            r["conclusion"] != "CertifiedNontrivial",
            format!("certified {line}"),
        )?;
        let reason = r["reason"].as_str().unwrap_or("");
        match (r["conclusion"].as_str(), reason) {
            (Some("HypothesisFailed"), s) if s.starts_with("(i) ") => i += 1,
            (Some("HypothesisFailed"), s) if s.starts_with("(ii) ") => ii += 1,
            _ => return Err(format!("unattributed failure {line}")),
        }
    }
    // 19 squarefree integers in 1..=30, both signs
    ensure(n == 38 * 38 * 38, format!("{n} records"))?;
    Ok(format!(
        "{n} triples, 0 certified, {i} fail (i), {ii} fail (ii)"
    ))
}

// ----------------------------------------------------------------------- 5

fn rand_rat(rng: &mut ChaCha8Rng, num: i64, den: i64) -> BigRational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-num..=num);
    }
    BigRational::new(BigInt::from(n), BigInt::from(rng.gen_range(1..=den)))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t = Instant::now();
    let mut places = 0;
    for k in 0..1000 {
        let (a, b) = (
            rand_rat(&mut rng, 100_000, 1000),
            rand_rat(&mut rng, 100_000, 1000),
        );
        let vs = hilbert::relevant_places(&[a.clone(), b.clone()]).map_err(|e| e.to_string())?;
        places += vs.len();
        let mut prod = 1i8;
        for v in &vs {
            prod *= quadform::hilbert_symbol(&a, &b, v).map_err(|e| e.to_string())?;
        }
        ensure(
            prod == 1,
            format!("pair {k}: ({a}, {b}) has product {prod}"),
        )?;
    }
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(5), format!("{dt:?} exceeds 5 s"))?;
    Ok(format!(
        "1000 pairs, {places} local symbols, 0 failures ({:.0} ms)",
        dt.as_secs_f64() * 1e3
    ))
}

// ----------------------------------------------------------------------- 6

fn rand_form(rng: &mut ChaCha8Rng, dim: usize, bound: i64) -> Vec<BigRational> {
    (0..dim).map(|_| rand_rat(rng, bound, 1)).collect()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let f = Field::rationals();
    let (mut yes, mut found, mut two_sided) = (0, 0, 0);
    for k in 0..300 {
        let small = k % 2 == 0;
        let dim = if small {
            rng.gen_range(1..=3)
        } else {
            rng.gen_range(1..=5)
        };
        let coeffs = rand_form(&mut rng, dim, if small { 20 } else { 50 });
        let q = QuadraticForm::new(
            &f,
            coeffs
                .iter()
                .map(|c| f.rational(c).expect("nonzero"))
                .collect(),
        )
        .map_err(|e| e.to_string())?;
        let verdict = quadform::isotropy(&q).map_err(|e| e.to_string())?;
        if let TriState::Yes { witness } = &verdict {
            yes += 1;
            let ok = quadform::check_isotropy_witness(&f, q.coeffs(), witness)
                .map_err(|e| e.to_string())?;
            ensure(ok, format!("form {k} {q}: witness does not replay"))?;
        }
        ensure(!verdict.is_unknown(), format!("form {k} {q}: unknown"))?;
        let height = if small { 200 } else { 12 };
        let zero = oracle::brute_isotropy_rational(&coeffs, &SearchBudget::with_height(height));
        if zero.is_some() {
            found += 1;
            ensure(
                verdict.is_yes(),
                format!("form {k} {q}: oracle zero {zero:?} but decider says anisotropic"),
            )?;
        }
        if small {
            two_sided += 1;
            ensure(
                verdict.is_yes() == zero.is_some(),
                format!("form {k} {q}: no zero up to height 200"),
            )?;
        }
    }
    Ok(format!("300 forms, {yes} isotropic, {found} oracle zeros, {two_sided} two-sided checks, 0 contradictions"))
}

// ----------------------------------------------------------------------- 7

fn criterion_7() -> Outcome {
    let mut builds = 0;
    let mut tried = 0;
    for q in [3u64, 5, 7, 9] {
        let f = Field::finite_tower(q, &["s", "t"]).map_err(|e| e.to_string())?;
        let classes = f.enumerate_square_classes().map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(q);
        let mut here = 0;
        while here < 14 {
            tried += 1;
            let pick = |rng: &mut ChaCha8Rng| classes[rng.gen_range(0..classes.len())].rep.clone();
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let Ok(alg) = build_involution_algebra(&a, &b, &c, &f) else {
                continue;
            };
            let rep = enumerate_quotient(&alg).map_err(|e| format!("q = {q}: {e}"))?;
            ensure(
                rep.k_independent,
                format!("q = {q}: N ∩ Nrd1 != N ∩ Nrd2 for {:?}", rep.inputs),
            )?;
            // oracle recomputation of both intersections
            let n1 = alg.q1.norm_form().expand();
            let n2 = alg.q2.norm_form().expand();
            for x in &classes {
                let in_n = oracle::tower_represents(&f, &[f.one(), c.clone()], &x.rep)
                    .map_err(|e| e.to_string())?;
                let r1 =
                    oracle::tower_represents(&f, n1.coeffs(), &x.rep).map_err(|e| e.to_string())?;
                let r2 =
                    oracle::tower_represents(&f, n2.coeffs(), &x.rep).map_err(|e| e.to_string())?;
                ensure(
                    !in_n || r1 == r2,
                    format!("q = {q}: oracle finds {} in one H only", x.label),
                )?;
                ensure(
                    rep.h.contains(&x.label) == (in_n && r1),
                    format!("q = {q}: H row {}", x.label),
                )?;
            }
            here += 1;
            builds += 1;
        }
    }
    ensure(builds >= 50, format!("{builds} builds"))?;
    Ok(format!(
        "{builds} builds over q = 3, 5, 7, 9 ({tried} triples drawn), 0 discrepancies"
    ))
}

// ----------------------------------------------------------------------- 8

struct Backend {
    field: Field,
    slot: fn(&Field, &mut ChaCha8Rng) -> Element,
    entry: fn(&Field, &mut ChaCha8Rng) -> Element,
    /// Whether sampled products are decided: the function-field decider
    /// looks only at the t-adic and degree places, so products of general
    /// polynomial values over Q(t) come back unknown.
    closure: bool,
}

fn small_int(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-bound..=bound);
    }
    n
}

fn rat_slot(f: &Field, rng: &mut ChaCha8Rng) -> Element {
    f.int(small_int(rng, 12))
}

fn rat_entry(f: &Field, rng: &mut ChaCha8Rng) -> Element {
    f.rational(&rand_rat(rng, 9, 4)).expect("nonzero")
}

fn fn_slot(f: &Field, rng: &mut ChaCha8Rng) -> Element {
    let c = f.int(small_int(rng, 7));
    if rng.gen_bool(0.4) {
        f.mul(&c, &f.parse_element("t").expect("t"))
    } else {
        c
    }
}

fn fn_entry(f: &Field, rng: &mut ChaCha8Rng) -> Element {
    let src = format!("{}+{}*t", small_int(rng, 5), rng.gen_range(0..=3));
    f.parse_nonzero(&src).unwrap_or_else(|_| f.one())
}

fn tower_elem(f: &Field, rng: &mut ChaCha8Rng) -> Element {
    let Some((_, vars)) = f.tower_parts() else {
        unreachable!()
    };
    let mut x = f.int(small_int(rng, 4));
    if f.is_zero(&x) {
        x = f.one();
    }
    for v in vars {
        let e = rng.gen_range(-2..=2);
        let m = f
            .pow(&f.parse_element(v).expect("var"), e)
            .expect("nonzero");
        x = f.mul(&x, &m);
    }
    x
}

fn backends() -> Vec<Backend> {
    let spec = |s: &str| Field::parse_spec(s).expect("spec");
    vec![
        Backend {
            field: spec("Q"),
            slot: rat_slot,
            entry: rat_entry,
            closure: true,
        },
        Backend {
            field: spec("Qp:p=3"),
            slot: rat_slot,
            entry: rat_entry,
            closure: true,
        },
        Backend {
            field: spec("Qp:p=5"),
            slot: rat_slot,
            entry: rat_entry,
            closure: true,
        },
        Backend {
            field: spec("Q(t)"),
            slot: fn_slot,
            entry: fn_entry,
            closure: false,
        },
        Backend {
            field: spec("Fq-tower:q=3,vars=s,t"),
            slot: tower_elem,
            entry: tower_elem,
            closure: true,
        },
        Backend {
            field: spec("Fq-tower:q=5,vars=s,t"),
            slot: tower_elem,
            entry: tower_elem,
            closure: true,
        },
        Backend {
            field: spec("Q-tower:vars=t"),
            slot: tower_elem,
            entry: tower_elem,
            closure: true,
        },
    ]
}

fn value_at(f: &Field, q: &QuadraticForm, b: &Backend, rng: &mut ChaCha8Rng) -> Element {
    loop {
        let v: Vec<_> = (0..q.dim())
            .map(|_| {
                if rng.gen_bool(0.3) {
                    f.v_zero()
                } else {
                    f.value_of(&(b.entry)(f, rng))
                }
            })
            .collect();
        if let Ok(x) = f.element_of_value(&f.eval_diagonal(q.coeffs(), &v)) {
            return x;
        }
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let bs = backends();
    let (mut aniso, mut iso, mut pairs, mut targets) = (0usize, 0usize, 0usize, 0usize);
    let mut per_backend = vec![(0usize, 0usize); bs.len()];
    let mut draws = 0;
    while (aniso < 100 || iso < 50) && draws < 20_000 {
        draws += 1;
        let k = draws % bs.len();
        let b = &bs[k];
        let f = &b.field;
        let n = rng.gen_range(1..=3);
        let slots: Vec<Element> = (0..n).map(|_| (b.slot)(f, &mut rng)).collect();
        let p = PfisterForm::new(f, slots).map_err(|e| e.to_string())?;
        let q = p.expand();
        match quadform::isotropy(&q).map_err(|e| e.to_string())? {
            TriState::No { .. } if aniso < 100 && b.closure => {
                for j in 0..200 {
                    let (x, y) = (value_at(f, &q, b, &mut rng), value_at(f, &q, b, &mut rng));
                    let xy = f.mul(&x, &y);
                    let r = quadform::represents(&q, &xy).map_err(|e| e.to_string())?;
                    let TriState::Yes { witness } = r else {
                        return Err(format!(
                            "{p} over {}: pair {j}: {} not shown in D ({})",
                            f.spec(),
                            f.fmt_element(&xy),
                            r.label("yes", "no")
                        ));
                    };
                    let ok = quadform::check_representation_witness(f, q.coeffs(), &xy, &witness)
                        .map_err(|e| e.to_string())?;
                    ensure(
                        ok,
                        format!(
                            "{p} over {}: witness for {} does not replay",
                            f.spec(),
                            f.fmt_element(&xy)
                        ),
                    )?;
                    pairs += 1;
                }
                aniso += 1;
                per_backend[k].0 += 1;
            }
            TriState::Yes { .. } if iso < 50 => {
                for j in 0..50 {
                    let x = (b.entry)(f, &mut rng);
                    let r = quadform::represents(&q, &x).map_err(|e| e.to_string())?;
                    let TriState::Yes { witness } = r else {
                        return Err(format!(
                            "{p} over {}: target {j} {} not represented",
                            f.spec(),
                            f.fmt_element(&x)
                        ));
                    };
                    let ok = quadform::check_representation_witness(f, q.coeffs(), &x, &witness)
                        .map_err(|e| e.to_string())?;
                    ensure(
                        ok,
                        format!(
                            "{p} over {}: witness for {} does not replay",
                            f.spec(),
                            f.fmt_element(&x)
                        ),
                    )?;
                    targets += 1;
                }
                iso += 1;
                per_backend[k].1 += 1;
            }
            _ => {}
        }
    }
    ensure(
        aniso >= 100 && iso >= 50,
        format!("only {aniso} anisotropic and {iso} isotropic forms drawn"),
    )?;
    let spread: Vec<String> = bs
        .iter()
        .zip(&per_backend)
        .map(|(b, (a, i))| format!("{} {a}/{i}", b.field.spec()))
        .collect();
    Ok(format!(
        "{aniso} anisotropic ({pairs} pairs), {iso} isotropic ({targets} targets); {}",
        spread.join(", ")
    ))
}

// ----------------------------------------------------------------------- 9

fn verify_file(path: &Path, audit: bool) -> Result<(), String> {
    let mut args = vec!["verify", path.to_str().expect("utf-8 path")];
    if audit {
        args.push("--audit");
    }
    let o = bin(&args);
    ensure(
        o.status.code() == Some(0),
        format!(
            "{} rejected (audit = {audit}):\n{}",
            path.display(),
            String::from_utf8_lossy(&o.stdout)
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut files = Vec::new();
    for p in [3u64, 5, 7] {
        let (_, bytes, _) = example_cert(p)?;
        let path = scratch(&format!("example-{p}.json"));
        std::fs::write(&path, bytes).map_err(|e| e.to_string())?;
        files.push(path);
    }
    for (name, args) in [("tower.json", &TOWER_ARGS[..]), ("qt.json", &QT_ARGS[..])] {
        let o = bin(args);
        ensure(
            o.status.code() == Some(0),
            format!("{name}: exit {:?}", o.status.code()),
        )?;
        let path = scratch(name);
        std::fs::write(&path, &o.stdout).map_err(|e| e.to_string())?;
        files.push(path);
    }
    for f in &files {
        verify_file(f, false)?;
        verify_file(f, true)?;
    }
    Ok(format!(
        "{} certificates pass verify and verify --audit",
        files.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("example over Q_p(t) for p = 3, 5, 7", criterion_1),
        ("exhaustive quotient over F_3((s))((t))", criterion_2),
        ("(5, 2, t) over Q(t)", criterion_3),
        ("negative control over Q", criterion_4),
        ("Hilbert product formula", criterion_5),
        ("decider against oracle over Q", criterion_6),
        ("independence of k", criterion_7),
        ("Pfister value groups and universality", criterion_8),
        ("certificate round trip", criterion_9),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.is_some_and(|k| k != n) {
            continue;
        }
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or(e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(d) => println!("criterion {n} PASS  {name}: {d} [{secs:.2} s]"),
            Err(d) => {
                failed += 1;
                println!("criterion {n} FAIL  {name}: {d} [{secs:.2} s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
