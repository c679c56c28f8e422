//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{brute_counts, oracle_corpus, random_kernel_element, soundness_corpus, spec, Counts};
use hloc_core::cohomology::{torsion_isomorphism_check, Cohomology};
use hloc_core::counterexample::{build, verify};
use hloc_core::criteria::{corollary12_check, theorem2_check};
use hloc_core::grouptheory::{decompose_generators, element_order, repunit_gcd};
use hloc_core::ringmat::{gcd, is_prime};
use hloc_core::symplectic::{eigenvalue_pairing_check, gsp4_order, gsp_generators, SymplecticSpace};
use hloc_core::{Error, GModule, Mat, MatGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x6c6f_6361_6c31;
const COUNTEREXAMPLE_LIMIT: Duration = Duration::from_secs(10);
const GSP4_LIMIT: Duration = Duration::from_secs(60);
const PAIRING_SAMPLES: usize = 1000;
const ORACLE_MIN: usize = 20;
const SOUNDNESS_PER_PRIME: usize = 60;
const DECOMPOSITION_MIN: usize = 50;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn counterexample() -> Outcome {
    let mut detail = Vec::new();
    for p in [5u64, 11] {
        let start = Instant::now();
        let inst = build(p).map_err(|e| format!("p = {p}: {e}"))?;
        let rep = verify(&inst).map_err(|e| format!("p = {p}: {e}"))?;
        let elapsed = start.elapsed();
        for c in &rep.checks {
            ensure(c.passed, || format!("p = {p}: check '{}' failed: {}", c.name, c.detail))?;
        }
        ensure(!rep.h1_loc.is_trivial(), || format!("p = {p}: H1_loc trivial"))?;
        ensure(rep.class_order == p as u128, || format!("p = {p}: class order {}", rep.class_order))?;
        for w in &rep.witnesses {
            let got: Vec<u64> = w.witness.iter().map(|x| x % p).collect();
            ensure(w.unique_mod_p && got == w.expected_mod_p, || {
                format!("p = {p}: witness at h({},{}) is {:?}", w.a, w.b, w.witness)
            })?;
        }
        ensure(elapsed < COUNTEREXAMPLE_LIMIT, || format!("p = {p}: took {elapsed:?}"))?;
        detail.push(format!("p={p}: |G2|={}, H1_loc={:?} in {:.2?}", inst.g2.order(), rep.h1_loc.invariant_factors(), elapsed));
    }
    Ok(detail.join("; "))
}

fn gsp4_closure() -> Outcome {
    let start = Instant::now();
    let space = SymplecticSpace::new(spec(3, 1, 4)).map_err(|e| e.to_string())?;
    let g = MatGroup::close(space.spec(), &gsp_generators(&space), 200_000).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let expected = gsp4_order(3).map_err(|e| e.to_string())?;
    ensure(g.order() as u128 == expected && expected == 103_680, || {
        format!("order {} vs formula {expected}", g.order())
    })?;
    ensure(elapsed < GSP4_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("order {} in {elapsed:.2?}", g.order()))
}

fn eigenvalue_pairing() -> Outcome {
    let space = SymplecticSpace::new(spec(3, 1, 4)).map_err(|e| e.to_string())?;
    let g = MatGroup::close(space.spec(), &gsp_generators(&space), 200_000).map_err(|e| e.to_string())?;
    for x in g.elements() {
        ensure(eigenvalue_pairing_check(x, &space) == Ok(true), || format!("fails at {x:?}"))?;
    }
    let space5 = SymplecticSpace::new(spec(5, 1, 4)).map_err(|e| e.to_string())?;
    let ring = space5.ring();
    let gens = gsp_generators(&space5);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..PAIRING_SAMPLES {
        let mut x = Mat::identity(4);
        for _ in 0..40 {
            x = gens[rng.gen_range(0..gens.len())].mul(&x, &ring);
        }
        ensure(eigenvalue_pairing_check(&x, &space5) == Ok(true), || format!("fails at {x:?} mod 5"))?;
    }
    Ok(format!("{} elements mod 3, {PAIRING_SAMPLES} samples mod 5", g.order()))
}

fn oracle() -> Outcome {
    let corpus = oracle_corpus();
    ensure(corpus.len() >= ORACLE_MIN, || format!("only {} groups", corpus.len()))?;
    let mut primes = HashSet::new();
    let mut levels = HashSet::new();
    for g in &corpus {
        ensure(g.order() <= 30 && g.spec().size().unwrap() <= 625, || "corpus bounds".into())?;
        primes.insert(g.spec().p);
        levels.insert(g.spec().n);
        let m = GModule::natural(g);
        let c = Cohomology::new(&m).map_err(|e| e.to_string())?;
        let p = g.spec().p as u128;
        let fast = Counts {
            z1: p.pow(c.z1_log_order()),
            b1: p.pow(c.b1_log_order()),
            h1: c.h1().map_err(|e| e.to_string())?.order(),
            h1_loc: c.h1_loc().map_err(|e| e.to_string())?.order(),
        };
        let slow = brute_counts(g);
        ensure(fast == slow, || format!("{:?}: linear {fast:?}, enumeration {slow:?}", g.generators()))?;
    }
    ensure(primes.len() == 3 && levels.len() == 2, || "corpus does not span p, n".into())?;
    Ok(format!("{} groups, exact match", corpus.len()))
}

fn soundness(corpus: &[MatGroup]) -> Outcome {
    let mut certified = 0;
    let mut witness_of_necessity = false;
    let mut add_counter = Vec::new();
    let p5 = build(5).map_err(|e| e.to_string())?;
    add_counter.push(p5.g2.clone());
    for g in corpus.iter().chain(&add_counter) {
        let p = g.spec().p;
        let g1 = g.reduce(1).map_err(|e| e.to_string())?;
        let reports = [
            corollary12_check(g).map_err(|e| e.to_string())?,
            theorem2_check(&g1, Some(g)).map_err(|e| e.to_string())?,
        ];
        for r in &reports {
            ensure(r.is_consistent(), || format!("false certification by {} on {:?}", r.criterion, g.generators()))?;
            certified += r.is_certified() as usize;
        }
        let loc = reports[0].cross_check.as_ref().expect("cross-checked");
        let top = &g.generators()[0];
        let ord = element_order(&top.reduce_to(&g1.spec().ring()), &g1.spec().ring());
        if (p - 1) % ord != 0 && !loc.is_trivial() {
            witness_of_necessity = true;
        }
    }
    ensure(corpus.len() >= 100, || format!("corpus has {} groups", corpus.len()))?;
    ensure(witness_of_necessity, || "no nonvanishing member with order not dividing p - 1".into())?;
    Ok(format!("{} groups, {certified} certified verdicts, 0 false", corpus.len() + add_counter.len()))
}

fn decomposition_instances(rng: &mut ChaCha8Rng) -> Vec<(Mat, MatGroup)> {
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < 60 && attempts < 1000 {
        attempts += 1;
        let (s, upper) = match attempts % 3 {
            0 => (spec([5, 7][rng.gen_range(0..2)], 2, 2), false),
            1 => (spec([3, 5, 7][rng.gen_range(0..3)], 1, 3), true),
            _ => (spec(5, 2, 3), false),
        };
        let ring = s.ring();
        let p = s.p;
        let d: Vec<i64> = (0..s.rank).map(|_| rng.gen_range(1..p as i64)).collect();
        let mut g = Mat::diag(&ring, &d).pow(s.modulus() / p, &ring);
        let mut seeds: Vec<Mat> = (0..rng.gen_range(1..=2))
            .map(|_| {
                if upper {
                    let mut x = Mat::identity(s.rank);
                    for i in 0..s.rank {
                        for j in i + 1..s.rank {
                            x.set(i, j, rng.gen_range(0..p));
                        }
                    }
                    x
                } else {
                    random_kernel_element(rng, s)
                }
            })
            .collect();
        // conjugate everything by a random invertible matrix
        let c = Mat::from_fn(s.rank, s.rank, |_, _| rng.gen_range(0..s.modulus()));
        if let Some(ci) = c.inverse(&ring) {
            g = c.mul(&g, &ring).mul(&ci, &ring);
            seeds = seeds.iter().map(|x| c.mul(x, &ring).mul(&ci, &ring)).collect();
        }
        let gi = g.inverse(&ring).unwrap();
        let ord = element_order(&g, &ring);
        let mut gens = Vec::new();
        for x in &seeds {
            let mut y = x.clone();
            for _ in 0..ord {
                gens.push(y.clone());
                y = g.mul(&y, &ring).mul(&gi, &ring);
            }
        }
        if let Ok(h) = MatGroup::close(s, &gens, 20_000) {
            if h.order() > 1 {
                out.push((g, h));
            }
        }
    }
    out
}

fn decomposition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let instances = decomposition_instances(&mut rng);
    ensure(instances.len() >= DECOMPOSITION_MIN, || format!("only {} instances", instances.len()))?;
    for (g, h) in &instances {
        let ring = *h.ring();
        let dec = decompose_generators(g, h).map_err(|e| format!("{e} on |H| = {}", h.order()))?;
        let gens: Vec<Mat> = dec.pairs.iter().map(|(x, _)| x.clone()).collect();
        let regen = h.subgroup(&gens).map_err(|e| e.to_string())?;
        ensure(regen.order() == h.order(), || "does not regenerate H".into())?;
        let gi = g.inverse(&ring).unwrap();
        for (x, l) in &dec.pairs {
            ensure(g.mul(x, &ring).mul(&gi, &ring) == x.pow(*l, &ring), || "conjugation identity".into())?;
        }
    }
    // order hypothesis violated: the order-3 element at p = 5 and 11, and
    // unipotent elements of order p
    let mut violations = 0;
    for p in [5u64, 11] {
        let inst = build(p).map_err(|e| e.to_string())?;
        let res = decompose_generators(&inst.g, &inst.h2);
        ensure(matches!(&res, Err(Error::Precondition(m)) if m.contains("does not divide")), || {
            format!("p = {p}: expected a precondition error, got {res:?}")
        })?;
        violations += 1;
    }
    for p in [3u64, 5] {
        let s = spec(p, 1, 3);
        let ring = s.ring();
        let u = Mat::from_rows(&ring, &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let v = Mat::from_rows(&ring, &[vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let h = MatGroup::close(s, &[u.clone(), v], 1000).unwrap();
        let res = decompose_generators(&u, &h);
        ensure(matches!(&res, Err(Error::Precondition(m)) if m.contains("does not divide")), || {
            format!("unipotent mod {p}: got {res:?}")
        })?;
        violations += 1;
    }
    Ok(format!("{} instances certified, {violations} violations reported", instances.len()))
}

fn torsion(corpus: &[MatGroup]) -> Outcome {
    let mut checked = 0;
    for g in corpus {
        let ring = *g.ring();
        let Some(delta) = g
            .elements()
            .iter()
            .find(|x| ring.is_unit(x.minus_identity(&ring).det(&ring)))
        else {
            continue;
        };
        let rep = torsion_isomorphism_check(g, delta).map_err(|e| e.to_string())?;
        let p = g.spec().p as u128;
        let torsion = vec![p; rep.h1.rank()];
        ensure(rep.injective && rep.h1_mod_p.invariant_factors() == torsion, || {
            format!(
                "{:?}: H1(M[p]) = {:?}, H1(M)[p] = {torsion:?}",
                g.generators(),
                rep.h1_mod_p.invariant_factors()
            )
        })?;
        checked += 1;
    }
    ensure(checked > 0, || "no group with a fixed-point-free delta".into())?;
    Ok(format!("{checked} groups with such a delta"))
}

fn cyclic_and_inclusion(corpus: &[MatGroup]) -> Outcome {
    let mut cyclic = 0;
    for g in corpus {
        let ring = *g.ring();
        let m = GModule::natural(g);
        let c = Cohomology::new(&m).map_err(|e| e.to_string())?;
        let h1 = c.h1().map_err(|e| e.to_string())?;
        let loc = c.h1_loc().map_err(|e| e.to_string())?;
        ensure(loc.structure.log_order() <= h1.structure.log_order(), || "H1_loc larger than H1".into())?;
        for (rep, factor) in loc.representatives.iter().zip(loc.structure.invariant_factors()) {
            ensure(c.is_cocycle(rep), || "H1_loc representative is not a cocycle".into())?;
            ensure(c.satisfies_local_conditions(rep).map_err(|e| e.to_string())?.holds, || {
                "representative violates the local conditions".into()
            })?;
            ensure(c.class_order(rep).map_err(|e| e.to_string())? == factor, || {
                "representative has the wrong order in H1".into()
            })?;
        }
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for x in g.elements() {
            let mut key = Vec::new();
            let mut y = Mat::identity(x.rows());
            loop {
                key.push(g.index_of(&y).unwrap());
                y = y.mul(x, &ring);
                if y.is_identity() {
                    break;
                }
            }
            key.sort_unstable();
            if !seen.insert(key) {
                continue;
            }
            let sub = g.subgroup(std::slice::from_ref(x)).map_err(|e| e.to_string())?;
            let ms = GModule::natural(&sub);
            let cs = Cohomology::new(&ms).map_err(|e| e.to_string())?;
            ensure(cs.h1_loc().map_err(|e| e.to_string())?.is_trivial(), || {
                format!("H1_loc of <{x:?}> is nontrivial")
            })?;
            cyclic += 1;
        }
    }
    Ok(format!("{} groups, {cyclic} cyclic subgroups", corpus.len()))
}

fn gcd_identity() -> Outcome {
    let mut n = 0;
    for p in (2..=50).filter(|&p| is_prime(p)) {
        for l in 1..=8u32 {
            ensure(repunit_gcd(p, l) == gcd(l as u64, p - 1), || format!("p = {p}, l = {l}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} pairs"))
}

fn run(label: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let t = start.elapsed();
    match &res {
        Ok(d) => println!("PASS  {label}: {d} [{t:.2?}]"),
        Err(d) => println!("FAIL  {label}: {d} [{t:.2?}]"),
    }
    res.is_ok()
}

fn main() {
    let corpus = soundness_corpus(SEED, SOUNDNESS_PER_PRIME);
    let mut groups: Vec<MatGroup> = oracle_corpus();
    groups.extend(corpus.iter().cloned());

    let results = [
        run("1 counterexample at p = 5, 11", counterexample),
        run("2 GSp4(F3) closure", gsp4_closure),
        run("3 eigenvalue pairing", eigenvalue_pairing),
        run("4 brute-force oracle", oracle),
        run("5 criterion soundness", || soundness(&corpus)),
        run("6 constructive decomposition", decomposition),
        run("7 torsion isomorphism", || torsion(&groups)),
        run("8 cyclic vanishing and inclusion", || cyclic_and_inclusion(&groups)),
        run("9 gcd identity", gcd_identity),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
