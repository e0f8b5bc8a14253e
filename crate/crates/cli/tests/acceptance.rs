//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use etale_core::factor::splitting_extension;
use etale_core::moduli::{
    ideal_system_from_subalgebra, in_u, lagrange_idempotents, phi, psi, PsiConfig,
};
use etale_core::oracle::{
    enum_all_etale_subalgebras, enum_etale_subalgebras, enum_generators, verify_moduli_count,
    DEFAULT_BUDGET,
};
use etale_core::plucker::{
    line_quadric_intersect, pair_to_line, plucker_embed, plucker_inverse, wedge2_matrix,
    wedge_form, PairKind, QuadraticSpace,
};
use etale_core::{Algebra, Element, Error, Field, Matrix, Partition, Scalar, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn gf(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let t = start.elapsed();
    if t > limit {
        Err(format!("{detail}; took {:.1}s, limit {}s", t.as_secs_f64(), limit.as_secs()))
    } else {
        Ok(format!("{detail}; {:.1}s", t.as_secs_f64()))
    }
}

/// Sum e_i = 1, e_i e_j = delta_ij e_i, a = sum r_i e_i, checked by direct
/// multiplication.
fn lagrange_laws(a: &Element) -> Result<(), String> {
    let (k, roots) = splitting_extension(&a.min_poly()).map_err(|e| e.to_string())?;
    let alg = a.algebra().base_change(&k).map_err(|e| e.to_string())?;
    let ak = a.base_change(&alg).map_err(|e| e.to_string())?;
    let es = lagrange_idempotents(&ak, &roots).map_err(|e| e.to_string())?;
    let mut total = alg.zero();
    let mut recon = alg.zero();
    for (i, e) in es.iter().enumerate() {
        for (j, g) in es.iter().enumerate() {
            let prod = e * g;
            let want = if i == j { e.clone() } else { alg.zero() };
            ensure!(prod == want, "e_{i} e_{j} wrong for {a:?}");
        }
        total = &total + e;
        recon = &recon + &e.scale(&roots[i]);
    }
    ensure!(total == alg.one(), "idempotents of {a:?} do not sum to 1");
    ensure!(recon == ak, "sum r_i e_i differs from {a:?}");
    Ok(())
}

fn unipotent_inverse(x: &Element, n: usize) -> Element {
    // (1 + X)^-1 = sum_k (-X)^k for nilpotent X
    let alg = x.algebra();
    let minus_x = x.scale(&alg.field().from_i64(-1));
    let mut term = alg.one();
    let mut acc = alg.one();
    for _ in 1..n {
        term = &term * &minus_x;
        acc = &acc + &term;
    }
    acc
}

/// A conjugate of a diagonal or block-companion matrix, so its minimal
/// polynomial splits over Q or one quadratic field.
fn rational_sample(rng: &mut ChaCha8Rng, n: usize) -> Element {
    let q = Field::rationals();
    let alg = Algebra::matrix(n, &q).unwrap();
    let mut core = vec![0i64; n * n];
    let mut distinct = BTreeSet::new();
    while distinct.len() < n {
        distinct.insert(rng.random_range(-6i64..=6));
    }
    let diag: Vec<i64> = distinct.into_iter().collect();
    for i in 0..n {
        core[i * n + i] = diag[i];
    }
    if rng.random_bool(0.5) {
        // companion of x^2 - d in the top-left block
        let d = [-1i64, 2, 3, -3, 5, 6, -2, 7][rng.random_range(0..8)];
        core[0] = 0;
        core[1] = d;
        core[n] = 1;
        core[n + 1] = 0;
    }
    let d = alg.element_from_i64s(&core).unwrap();
    let mut upper = vec![0i64; n * n];
    let mut lower = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            if i < j {
                upper[i * n + j] = rng.random_range(-3i64..=3);
            } else if i > j {
                lower[i * n + j] = rng.random_range(-3i64..=3);
            }
        }
    }
    let xu = alg.element_from_i64s(&upper).unwrap();
    let xl = alg.element_from_i64s(&lower).unwrap();
    let p = &(&alg.one() + &xu) * &(&alg.one() + &xl);
    let pinv = &unipotent_inverse(&xl, n) * &unipotent_inverse(&xu, n);
    assert_eq!(&p * &pinv, alg.one());
    &(&p * &d) * &pinv
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let cases = [(2, 3), (2, 5), (2, 7), (3, 3), (3, 5), (3, 7)];
    let mut finite = 0;
    let mut tries = 0;
    while finite < 200 {
        let (n, p) = cases[finite % cases.len()];
        let alg = Algebra::matrix(n, &gf(p)).unwrap();
        let vals: Vec<i64> = (0..n * n).map(|_| rng.random_range(0..p as i64)).collect();
        let a = alg.element_from_i64s(&vals).unwrap();
        tries += 1;
        if !in_u(&a).unwrap() {
            continue;
        }
        lagrange_laws(&a)?;
        finite += 1;
    }
    let mut rational = 0;
    let mut quadratic = 0;
    while rational < 50 {
        let n = 2 + rational % 2;
        let a = rational_sample(&mut rng, n);
        ensure!(in_u(&a).unwrap(), "rational sample {a:?} is not in U");
        let (k, _) = splitting_extension(&a.min_poly()).map_err(|e| e.to_string())?;
        if !k.is_rationals() {
            quadratic += 1;
        }
        lagrange_laws(&a)?;
        rational += 1;
    }
    within(
        Duration::from_secs(30),
        start,
        format!("{finite} elements over F_q ({tries} drawn), {rational} over Q ({quadratic} needing a quadratic field)"),
    )
}

fn criterion_2_and_5() -> (Outcome, Outcome) {
    let mut total = 0;
    let mut fields = 0;
    let mut type_problem = None;
    let mut lemma_problem = None;
    for (n, p) in [(2, 2), (2, 3), (3, 2)] {
        let all = match enum_all_etale_subalgebras(&Algebra::matrix(n, &gf(p)).unwrap(), DEFAULT_BUDGET) {
            Ok(v) => v,
            Err(e) => return (Err(e.to_string()), Err(e.to_string())),
        };
        for e in &all {
            total += 1;
            let t = e.type_of().unwrap();
            if t.total() != n || t.len() != e.dim() {
                type_problem.get_or_insert(format!("type {t} for {e:?} in M_{n}(F_{p})"));
            }
            if e.is_subfield().unwrap() {
                fields += 1;
                if t.n_distinct() != 1 {
                    lemma_problem.get_or_insert(format!("subfield {e:?} has type {t}"));
                }
            }
        }
    }
    let c2 = match type_problem {
        Some(p) => Err(p),
        None => Ok(format!("{total} subalgebras of M2(F2), M2(F3), M3(F2); every type sums to n with length dim E")),
    };
    let c5 = match lemma_problem {
        Some(p) => Err(p),
        None => Ok(format!("{fields} subfields among {total} subalgebras, all with a single distinct rank")),
    };
    (c2, c5)
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    // closed forms: maximal tori of GL_n number q^(n^2 - n), split or not,
    // so q^2 in M2 and 64 in M3(F2); type [2,1] is a line plus a
    // complementary plane in F2^3, (q^2 + q + 1) q^2 = 28
    let cases: Vec<(usize, u64, Vec<usize>, usize)> = vec![
        (2, 2, vec![1, 1], 4),
        (2, 3, vec![1, 1], 9),
        (2, 5, vec![1, 1], 25),
        (2, 2, vec![2], 1),
        (2, 3, vec![2], 1),
        (2, 5, vec![2], 1),
        (3, 2, vec![1, 1, 1], 64),
        (3, 2, vec![2, 1], 28),
        (3, 2, vec![3], 1),
    ];
    let mut summary = Vec::new();
    for (n, p, rho, expected) in cases {
        let alg = Algebra::matrix(n, &gf(p)).unwrap();
        let rho = Partition::new(rho).unwrap();
        let r = verify_moduli_count(&alg, &rho, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure!(
            r.count_subalgebras == expected && r.count_systems == expected && r.counts_match && r.bijective,
            "M{n}(F{p}) {rho}: subalgebras {}, systems {}, expected {expected}, bijective {}",
            r.count_subalgebras,
            r.count_systems,
            r.bijective
        );
        summary.push(format!("M{n}(F{p}){rho}={expected}"));
    }
    within(Duration::from_secs(300), start, format!("counts and bijections: {}", summary.join(" ")))
}

fn criterion_4() -> Outcome {
    let mut reached = 0;
    for p in [3, 5] {
        let alg = Algebra::matrix(2, &gf(p)).unwrap();
        let gens = enum_generators(&alg, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        for e in enum_etale_subalgebras(&alg, 2, DEFAULT_BUDGET).map_err(|e| e.to_string())? {
            let hit = gens.iter().any(|b| e.contains(b) && psi(b).unwrap() == e);
            let t = e.type_of().unwrap();
            ensure!(t.total() == 2 && t.len() == 2, "psi image {e:?} has type {t}");
            ensure!(hit, "{e:?} over F{p} is not psi of any generator");
            reached += 1;
        }
    }
    let f3 = gf(3);
    let alg = Algebra::matrix(2, &f3).unwrap();
    let a = alg.element_from_i64s(&[1, 0, 0, 2]).unwrap();
    let cfg = PsiConfig::standard(psi(&a).unwrap(), a.clone()).unwrap();
    let (mut transverse, mut blocked) = (0, 0);
    for e in enum_etale_subalgebras(&alg, 2, DEFAULT_BUDGET).map_err(|e| e.to_string())? {
        let meets_l = e.space().intersection_dim(cfg.complement()) > 0;
        match phi(&e, &cfg) {
            Ok(b) => {
                ensure!(!meets_l, "phi succeeded on non-transverse {e:?}");
                ensure!(cfg.in_affine_slice(&b) && e.contains(&b), "phi({e:?}) is off the slice");
                ensure!(psi(&b).unwrap() == e, "psi(phi(E')) != E' for {e:?}");
                transverse += 1;
            }
            Err(Error::Transversality(_)) => {
                ensure!(meets_l, "transversality error on transverse {e:?}");
                blocked += 1;
            }
            Err(other) => return Err(format!("phi({e:?}) failed: {other}")),
        }
    }
    let mut slice = 0;
    for l0 in f3.elements() {
        for l1 in f3.elements() {
            let b = &a + &alg.element(vec![f3.zero(), l0.clone(), l1, f3.zero()]).unwrap();
            if in_u(&b).unwrap() {
                ensure!(phi(&psi(&b).unwrap(), &cfg).unwrap() == b, "phi(psi(b)) != b for {b:?}");
                slice += 1;
            }
        }
    }
    Ok(format!(
        "{reached} maximal subalgebras over F3, F5 all reached by psi; over F3 {transverse} transverse round trips, {blocked} non-transverse rejected, {slice} slice points recovered"
    ))
}

fn random_rational_plane(rng: &mut ChaCha8Rng, q: &Field) -> Subspace {
    loop {
        let rows: Vec<Vec<Scalar>> =
            (0..2).map(|_| (0..4).map(|_| q.from_i64(rng.random_range(-9i64..=9))).collect()).collect();
        let w = Subspace::span(q, 4, &rows);
        if w.dim() == 2 {
            return w;
        }
    }
}

fn all_planes(f: &Field) -> Vec<Subspace> {
    let vectors: Vec<Vec<Scalar>> = (0..f.order().unwrap().pow(4))
        .map(|i| (0..4).map(|k| f.element_from_index((i / f.order().unwrap().pow(k)) % f.order().unwrap())).collect())
        .collect();
    let mut planes = BTreeSet::new();
    for u in &vectors {
        for v in &vectors {
            let w = Subspace::span(f, 4, &[u.clone(), v.clone()]);
            if w.dim() == 2 {
                planes.insert(w);
            }
        }
    }
    planes.into_iter().collect()
}

fn criterion_6() -> Outcome {
    let q = Field::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut planes: Vec<Subspace> = (0..500).map(|_| random_rational_plane(&mut rng, &q)).collect();
    let f3_planes = all_planes(&gf(3));
    ensure!(f3_planes.len() == 130, "expected 130 planes in F3^4, found {}", f3_planes.len());
    planes.extend(f3_planes);
    for w in &planes {
        let p = plucker_embed(w).map_err(|e| e.to_string())?;
        ensure!(p.is_decomposable(), "relation fails for {w:?}");
        ensure!(plucker_inverse(&p).map_err(|e| e.to_string())? == *w, "inverse fails for {w:?}");
    }
    let mut scaled = 0;
    while scaled < 20 {
        let g = Matrix::from_i64s(&q, 4, 4, &(0..16).map(|_| rng.random_range(-4i64..=4)).collect::<Vec<_>>());
        let det = g.det();
        if q.is_zero(&det) {
            continue;
        }
        let h = wedge2_matrix(&g).unwrap();
        let w: Vec<Scalar> = (0..6).map(|_| q.from_i64(rng.random_range(-5i64..=5))).collect();
        let before = wedge_form(&q, &w, &w).unwrap();
        let hw = h.mul_vec(&w);
        let after = wedge_form(&q, &hw, &hw).unwrap();
        ensure!(after == q.mul(&det, &before), "quadric value does not scale by det for {g:?}");
        scaled += 1;
    }
    Ok(format!("{} planes (500 over Q, 130 over F3) embed and invert; {scaled} basis changes scale the quadric by det", planes.len()))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut tallies = Vec::new();
    for p in [5u64, 7] {
        let f = gf(p);
        let qs = QuadraticSpace::split4(&f).unwrap();
        let (mut secant, mut tangent, mut contained) = (0, 0, 0);
        for w in all_planes(&f) {
            let pp = line_quadric_intersect(&w, &qs).map_err(|e| e.to_string())?;
            let (w1, w2) = (&w.basis()[0], &w.basis()[1]);
            let vanishes = f.is_zero(&qs.value(w1)) && f.is_zero(&qs.value(w2)) && f.is_zero(&qs.bilinear(w1, w2));
            match pp.kind() {
                PairKind::Secant => {
                    ensure!(!vanishes, "secant flag on a contained line {w:?}");
                    let (k, pts) = pp.points().map_err(|e| e.to_string())?;
                    ensure!(pts.len() == 2, "secant line {w:?} has {} points", pts.len());
                    let qk = qs.base_change(&k).unwrap();
                    let wk = w.base_change(&k).unwrap();
                    for pt in &pts {
                        ensure!(k.is_zero(&qk.value(pt)) && wk.contains(pt), "bad point on {w:?}");
                    }
                    ensure!(pair_to_line(&pp).map_err(|e| e.to_string())? == w, "round trip fails for {w:?}");
                    secant += 1;
                }
                PairKind::Tangent => {
                    ensure!(!vanishes, "tangent flag on a contained line {w:?}");
                    ensure!(matches!(pair_to_line(&pp), Err(Error::Boundary(_))), "tangent {w:?} not rejected");
                    tangent += 1;
                }
                PairKind::Contained => {
                    ensure!(vanishes, "contained flag on {w:?} where q does not vanish");
                    ensure!(matches!(pair_to_line(&pp), Err(Error::Boundary(_))), "contained {w:?} not rejected");
                    contained += 1;
                }
            }
        }
        // a smooth split quadric surface carries two rulings of q + 1 lines
        ensure!(contained == 2 * (p + 1) as usize, "F{p}: {contained} contained lines, expected {}", 2 * (p + 1));
        tallies.push(format!("F{p}: {secant} secant, {tangent} tangent, {contained} contained"));
    }
    within(Duration::from_secs(60), start, tallies.join("; "))
}

fn criterion_8() -> Outcome {
    let q = Field::rationals();
    let h = Algebra::quaternion(&q.from_i64(-1), &q.from_i64(-1), &q).unwrap();
    let gens = [("i", h.basis_element(1)), ("j", h.basis_element(2)), ("i+j", &h.basis_element(1) + &h.basis_element(2))];
    for (name, x) in gens {
        let e = psi(&x).map_err(|e| format!("psi({name}): {e}"))?;
        ensure!(e.type_of().unwrap() == Partition::ones(2), "psi({name}) has type {}", e.type_of().unwrap());
        ensure!(e.is_subfield().unwrap(), "psi({name}) is not a field");
        let sys = ideal_system_from_subalgebra(&e).map_err(|e| e.to_string())?;
        ensure!(sys.len() == 2 && sys.ranks() == vec![1, 1], "psi({name}) gives ranks {:?}", sys.ranks());
        let k = sys.field().clone();
        let conj = |i: usize| -> Subspace {
            sys.ideals()[i].space().map_entries(&k, |c| k.galois_generator(c, &q)).unwrap()
        };
        let (i0, i1) = (sys.ideals()[0].space(), sys.ideals()[1].space());
        ensure!(i0 != i1 && conj(0) == *i1 && conj(1) == *i0, "conjugation does not swap the ideals of psi({name})");
    }
    Ok("psi(i), psi(j), psi(i+j): type [1,1], subfields, ideals swapped by conjugation".into())
}

/// The CLI script used for the determinism check.
fn cli_script() -> Vec<Vec<String>> {
    let m2q = r#"{"kind":"matrix","n":2,"field":"Q"}"#;
    let m2f3 = r#"{"kind":"matrix","n":2,"field":"GF(3)"}"#;
    let h = r#"{"kind":"quaternion","a":-1,"b":-1,"field":"Q"}"#;
    let mut script: Vec<Vec<&str>> = vec![
        vec!["minpoly", "--algebra", m2q, "--input", "[[1,2],[3,4]]"],
        vec!["idempotents", "--algebra", m2q, "--input", "[[0,1],[1,0]]"],
        vec!["idempotents", "--algebra", h, "--input", "[0,1,0,0]"],
        vec!["psi", "--algebra", m2q, "--input", "[[1,0],[0,2]]"],
        vec!["psi", "--algebra", m2q, "--input", "[[1,0],[0,1]]"],
        vec!["phi", "--algebra", m2q, "--input", r#"{"generator":[[1,0],[0,2]],"subalgebra":[[1,0,0,1],[1,1,0,3]]}"#],
        vec!["phi", "--algebra", m2q, "--input", r#"{"generator":[[1,0],[0,2]],"subalgebra":[[1,0,0,1],[0,1,1,0]]}"#],
        vec!["type", "--algebra", h, "--input", "[[1,0,0,0],[0,1,1,0]]"],
        vec!["is-subfield", "--algebra", m2f3, "--input", "[[1,0,0,1],[0,1,2,0]]"],
        vec!["ideal-system", "--algebra", h, "--input", "[[1,0,0,0],[0,1,0,0]]"],
        vec!["from-ideal-system", "--algebra", m2q, "--input", r#"{"idempotents":[[[1,0],[0,0]],[[0,0],[0,1]]]}"#],
        vec!["plucker", "--input", r#"{"plane":[[1,0,1,0],[0,1,0,1]]}"#],
        vec!["plucker-inv", "--input", r#"{"point":[1,0,0,0,0,1]}"#],
        vec!["intersect", "--input", r#"{"form":"sum_of_squares","plane":[[1,0,0,0],[0,1,0,0]]}"#],
        vec!["pair-to-line", "--input", r#"{"form":"split","points":[[1,0,0,0],[0,0,0,1]]}"#],
        vec!["enumerate", "--algebra", m2f3],
        vec!["verify-moduli", "--algebra", m2f3, "--rho", "1,1", "--budget", "3"],
        vec!["verify-moduli", "--algebra", "not json"],
    ];
    let owned: Vec<(String, String)> = vec![
        ("2", "2"), ("2", "3"), ("2", "5"), ("3", "2"),
    ]
    .into_iter()
    .map(|(n, p)| (n.to_string(), format!(r#"{{"kind":"matrix","n":{n},"field":"GF({p})"}}"#)))
    .collect();
    let mut out: Vec<Vec<String>> = script.drain(..).map(|c| c.into_iter().map(String::from).collect()).collect();
    for (n, alg) in owned {
        let rhos: &[&str] = if n == "2" { &["1,1", "2"] } else { &["1,1,1", "2,1", "3"] };
        for rho in rhos {
            out.push(vec!["verify-moduli".into(), "--algebra".into(), alg.clone(), "--rho".into(), rho.to_string()]);
        }
    }
    out
}

fn run_script() -> Vec<u8> {
    let mut transcript = Vec::new();
    for args in cli_script() {
        let out = Command::new(env!("CARGO_BIN_EXE_etale")).args(&args).output().expect("run etale");
        transcript.extend(format!("$ etale {}\nexit {}\n", args.join(" "), out.status.code().unwrap_or(-1)).bytes());
        transcript.extend(out.stdout);
        transcript.extend(out.stderr);
    }
    transcript
}

fn criterion_9() -> Outcome {
    let first = run_script();
    let second = run_script();
    ensure!(first == second, "CLI transcripts differ between runs");
    let text = String::from_utf8_lossy(&first);
    // spot-check the documented behaviour
    ensure!(text.contains("$ etale psi --algebra {\"kind\":\"matrix\",\"n\":2,\"field\":\"Q\"} --input [[1,0],[0,2]]\nexit 0"), "psi example did not exit 0");
    ensure!(text.contains("--input [[1,0],[0,1]]\nexit 2\nerror: not in U"), "not-in-U example did not exit 2");
    ensure!(text.contains("--rho 1,1 --budget 3\nexit 3"), "budget example did not exit 3");
    ensure!(text.contains("not json\nexit 1"), "malformed example did not exit 1");
    ensure!(!text.contains("panicked"), "a CLI invocation panicked");
    Ok(format!("{} invocations, {} bytes, identical across two runs", cli_script().len(), first.len()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let guard = |f: &dyn Fn() -> Outcome| -> Outcome {
        catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        })
    };
    let (c2, c5) = catch_unwind(criterion_2_and_5).unwrap_or_else(|_| (Err("panic".into()), Err("panic".into())));
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "Lagrange idempotents", guard(&criterion_1)),
        (2, "type invariant", c2),
        (3, "moduli point bijection", guard(&criterion_3)),
        (4, "psi surjectivity and phi round trip", guard(&criterion_4)),
        (5, "subfield lemma", c5),
        (6, "Plücker suite", guard(&criterion_6)),
        (7, "line-quadric birationality", guard(&criterion_7)),
        (8, "quaternion path", guard(&criterion_8)),
        (9, "CLI determinism", guard(&criterion_9)),
    ];
    let mut failed = 0;
    for (n, name, r) in &results {
        match r {
            Ok(detail) => println!("PASS criterion {n} ({name}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n} ({name}): {why}");
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1}s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
