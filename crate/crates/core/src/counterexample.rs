//! The group `G_2 = <g, H_2>` acting on `(Z/p^2)^2`, for `p = 2 mod 3`, whose
//! first local cohomology does not vanish.
//!
//! `H_2` consists of `h(a, b) = Id + p N(a, b)` with
//! `N(a, b) = [[a - 2b, 3(b - a)], [-b, -(a - 2b)]]` and `g = [[1, -3], [1, -2]]`
//! has order 3. The cocycle `Z` vanishes on `g` and sends `h(a, b)` to
//! `(p(a - 2b), p(a - b))`.

use serde::Serialize;

use crate::cohomology::{restrict, Cocycle, Cohomology, GModule};
use crate::error::{Error, Result};
use crate::grouptheory::{element_order, MatGroup};
use crate::ringmat::{is_prime, kernel, AbelianStructure, Howell, Mat, ModuleSpec, Vector, Zmod};

/// `Id + p N(a, b)` modulo `p^2`.
pub fn h_matrix(p: u64, a: i64, b: i64) -> Mat {
    let ring = Zmod::new(p, 2).expect("valid prime");
    let p = p as i64;
    let c = a - 2 * b;
    Mat::from_rows(
        &ring,
        &[vec![1 + p * c, 3 * p * (b - a)], vec![-p * b, 1 - p * c]],
    )
    .expect("2x2")
}

/// `det N(a, b)`, which is `-(a^2 + b^2 - ab)`.
fn n_det(a: i64, b: i64) -> i64 {
    let c = a - 2 * b;
    -c * c + 3 * b * (b - a)
}

fn delta(a: i64, b: i64) -> i64 {
    a * a + b * b - a * b
}

/// Value of `Z` on `h(a, b)`.
pub fn z_on_h(p: u64, a: i64, b: i64) -> Vector {
    let ring = Zmod::new(p, 2).expect("valid prime");
    let p = p as i64;
    vec![ring.reduce(p * (a - 2 * b)), ring.reduce(p * (a - b))]
}

#[derive(Clone, Debug)]
pub struct CounterexampleInstance {
    pub p: u64,
    pub spec: ModuleSpec,
    pub g2: MatGroup,
    pub h2: MatGroup,
    pub g: Mat,
    pub z: Cocycle,
}

fn invariant(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::internal(format!("construction invariant failed: {what}")))
    }
}

pub fn build(p: u64) -> Result<CounterexampleInstance> {
    if !is_prime(p) || p < 5 || p % 3 != 2 {
        return Err(Error::input(format!("p = {p} must be a prime with p = 2 mod 3 and p >= 5")));
    }
    let spec = ModuleSpec::new(p, 2, 2)?;
    let ring = spec.ring();
    let g = Mat::from_rows(&ring, &[vec![1, -3], vec![1, -2]])?;
    let gens = [g.clone(), h_matrix(p, 1, 0), h_matrix(p, 0, 1)];
    let g2 = MatGroup::close(spec, &gens, 3 * (p * p) as usize)?;
    let h2 = g2.subgroup(&gens[1..])?;

    invariant(g.pow(3, &ring).is_identity(), "g^3 = Id")?;
    invariant(h2.order() as u64 == p * p, "|H_2| = p^2")?;
    invariant(h2.is_normal_in(&g2), "H_2 normal in G_2")?;
    invariant(g2.order() as u64 == 3 * p * p, "|G_2| = 3p^2")?;
    let gi = g2.inverse(&g);
    let g2i = gi.mul(&gi, &ring);
    let gsq = g.mul(&g, &ring);
    for a in 0..p as i64 {
        for b in 0..p as i64 {
            let h = h_matrix(p, a, b);
            invariant(
                g.mul(&h, &ring).mul(&gi, &ring) == h_matrix(p, -b, a - b),
                "g h(a,b) g^-1 = h(-b, a-b)",
            )?;
            invariant(
                gsq.mul(&h, &ring).mul(&g2i, &ring) == h_matrix(p, b - a, -a),
                "g^2 h(a,b) g^-2 = h(b-a, -a)",
            )?;
        }
    }

    let module = GModule::natural(&g2);
    let coh = Cohomology::new(&module)?;
    let mut zgen = vec![0, 0];
    zgen.extend(z_on_h(p, 1, 0));
    zgen.extend(z_on_h(p, 0, 1));
    invariant(coh.is_cocycle_vector(&zgen), "generator values satisfy the relations")?;
    let z = coh.cocycle_from(&zgen);
    invariant(coh.is_cocycle_exhaustive(&z), "cocycle identity on all pairs")?;
    for a in 0..p as i64 {
        for b in 0..p as i64 {
            let e = g2.index_of(&h_matrix(p, a, b)).expect("in G_2");
            invariant(z.value(e) == z_on_h(p, a, b).as_slice(), "Z on h(a,b)")?;
        }
    }
    Ok(CounterexampleInstance {
        p,
        spec,
        g2,
        h2,
        g,
        z,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Witness of the local condition at one `h(a, b)`.
#[derive(Clone, Debug, Serialize)]
pub struct LocalWitness {
    pub a: i64,
    pub b: i64,
    /// Some `m` with `Z_h = h m - m`, modulo `p^2`.
    pub witness: Vector,
    pub expected_mod_p: Vector,
    /// The kernel of `h - Id` is `pM`, so the witness is unique mod `p`.
    pub unique_mod_p: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub p: u64,
    pub checks: Vec<Check>,
    pub witnesses: Vec<LocalWitness>,
    pub h1_loc: AbelianStructure,
    pub class_order: u128,
    /// Order of the group of `<g>`-equivariant maps `H_2 -> pM/p^2M`.
    pub hom_group_order: u128,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn mod_p(v: &[u64], p: u64) -> Vector {
    v.iter().map(|x| x % p).collect()
}

/// `Phi` with `Phi C = g Phi` over `F_p`, as row-major vectors of length 4.
fn equivariant_maps(c: &Mat, gbar: &Mat, fp: &Zmod) -> Vec<Vector> {
    let k = Mat::from_fn(4, 4, |r, s| {
        let (i, j) = (r / 2, r % 2);
        let (u, v) = (s / 2, s % 2);
        let mut x = 0;
        if u == i {
            x = fp.add(x, c.get(v, j));
        }
        if v == j {
            x = fp.sub(x, gbar.get(i, u));
        }
        x
    });
    kernel(&k, fp)
}

pub fn verify(inst: &CounterexampleInstance) -> Result<VerificationReport> {
    let p = inst.p;
    let pi = p as i64;
    let ring = inst.spec.ring();
    let fp = ring.with_exponent(1)?;
    let mut checks = Vec::new();

    // (i)
    let mut nonzero = true;
    let mut sign = true;
    for a in 0..pi {
        for b in 0..pi {
            if (a, b) == (0, 0) {
                continue;
            }
            nonzero &= delta(a, b).rem_euclid(pi) != 0;
            sign &= (n_det(a, b) + delta(a, b)).rem_euclid(pi) == 0;
        }
    }
    checks.push(check(
        "delta nonzero",
        nonzero,
        "a^2 + b^2 - ab != 0 mod p for (a, b) != (0, 0)".into(),
    ));
    checks.push(check("det N(a,b) = -delta", sign, "checked for all (a, b) mod p".into()));

    // (ii)
    let module = GModule::natural(&inst.g2);
    let coh = Cohomology::new(&module)?;
    let local = coh.satisfies_local_conditions(&inst.z)?;
    checks.push(check(
        "local conditions",
        local.holds,
        format!("Z_sigma in Im(sigma - Id) for all {} elements", inst.g2.order()),
    ));

    // (iii)
    let mut witnesses = Vec::new();
    let pm = Howell::new(&ring, 2, vec![vec![p, 0], vec![0, p]]);
    for (a, b, expected) in [(1, 1, [1i64, 1]), (2, 1, [-1, 0])] {
        let h = h_matrix(p, a, b);
        let e = inst.g2.index_of(&h).expect("in G_2");
        let ker = Howell::new(&ring, 2, kernel(&h.minus_identity(&ring), &ring));
        let witness = local.witnesses[e].clone().unwrap_or_default();
        witnesses.push(LocalWitness {
            a,
            b,
            witness,
            expected_mod_p: expected.iter().map(|&x| fp.reduce(x)).collect(),
            unique_mod_p: ker.rows() == pm.rows(),
        });
    }
    let witnesses_ok = witnesses.iter().all(|w| {
        w.unique_mod_p && w.witness.len() == 2 && mod_p(&w.witness, p) == w.expected_mod_p
    });
    checks.push(check(
        "local witnesses",
        witnesses_ok,
        format!(
            "h(1,1): {:?}, h(2,1): {:?}",
            witnesses[0].witness, witnesses[1].witness
        ),
    ));
    let cob = coh.is_coboundary(&inst.z)?;
    let incompatible = mod_p(&witnesses[0].witness, p) != mod_p(&witnesses[1].witness, p);
    checks.push(check(
        "not a coboundary",
        cob.is_none() && incompatible,
        "witnesses disagree mod p, so no single m works".into(),
    ));

    // (iv)
    let loc = coh.h1_loc()?;
    let class_order = coh.class_order(&inst.z)?;
    let reps: Vec<Vector> = loc
        .representatives
        .iter()
        .map(|r| coh.generator_values(r))
        .collect();
    let in_loc = coh.in_span_mod_b1(&coh.generator_values(&inst.z), &reps);
    checks.push(check(
        "H1_loc nontrivial",
        !loc.is_trivial() && in_loc && class_order == p as u128,
        format!(
            "H1_loc = {:?}, class of Z has order {class_order}",
            loc.structure.invariant_factors()
        ),
    ));

    // restriction to every cyclic subgroup is a coboundary
    let mut cyclic_ok = true;
    for x in inst.g2.elements() {
        let c = inst.g2.subgroup(std::slice::from_ref(x))?;
        let zr = restrict(&inst.z, &inst.g2, &c)?;
        let mc = GModule::natural(&c);
        cyclic_ok &= Cohomology::new(&mc)?.is_coboundary(&zr)?.is_some();
    }
    checks.push(check(
        "cyclic restrictions vanish",
        cyclic_ok,
        "restriction of Z to <sigma> is a coboundary for every sigma".into(),
    ));

    // (v)
    let cmat = Mat::from_rows(&fp, &[vec![0, -1], vec![1, -1]])?;
    let gbar = inst.g.reduce_to(&fp);
    let homs = Howell::new(&fp, 4, equivariant_maps(&cmat, &gbar, &fp));
    let phi_z = Mat::from_rows(&fp, &[vec![1, -2], vec![1, -1]])?;
    let gphi = gbar.mul(&phi_z, &fp);
    let generated = Howell::new(&fp, 4, vec![phi_z.entries().to_vec(), gphi.entries().to_vec()]);
    let hom_log = homs.log_order();
    checks.push(check(
        "Z generates the equivariant homomorphisms",
        homs.contains(phi_z.entries()) && generated.log_order() == hom_log,
        format!("group of order p^{hom_log}, generated by Z|H_2 as a module over F_p[<g>]"),
    ));

    Ok(VerificationReport {
        p,
        checks,
        witnesses,
        h1_loc: loc.structure,
        class_order,
        hom_group_order: (p as u128).pow(hom_log),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub label: String,
    /// Order of the top element modulo `p`.
    pub top_order_mod_p: u64,
    pub divides_p_minus_1: bool,
    pub group_order: usize,
    pub h1_loc: AbelianStructure,
    pub vanishes: bool,
}

/// `H^1_loc` of `<g^j, H_2>` for `j = 0, 1, 2`, and of `<delta, H_2>` with
/// `delta` the order-dividing-`p - 1` lift of `diag(2, 3)`.
pub fn scan_orders(p: u64) -> Result<Vec<ScanRow>> {
    let inst = build(p)?;
    let ring = inst.spec.ring();
    let fp = ring.with_exponent(1)?;
    let hgens = inst.h2.generators().to_vec();
    let mut tops: Vec<(String, Mat)> = (0..3)
        .map(|j| (format!("<g^{j}, H_2>"), inst.g.pow(j, &ring)))
        .collect();
    let delta = Mat::diag(&ring, &[2, 3]).pow(p, &ring);
    tops.push(("<diag(2,3)^p, H_2>".into(), delta));
    let mut rows = Vec::new();
    for (label, top) in tops {
        let mut gens = vec![top.clone()];
        gens.extend(hgens.iter().cloned());
        let grp = MatGroup::close(inst.spec, &gens, 100_000)?;
        let module = GModule::natural(&grp);
        let loc = Cohomology::new(&module)?.h1_loc()?;
        let ord = element_order(&top.reduce_to(&fp), &fp);
        rows.push(ScanRow {
            label,
            top_order_mod_p: ord,
            divides_p_minus_1: (p - 1) % ord == 0,
            group_order: grp.order(),
            vanishes: loc.is_trivial(),
            h1_loc: loc.structure,
        });
    }
    Ok(rows)
}
