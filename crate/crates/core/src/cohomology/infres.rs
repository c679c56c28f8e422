use serde::Serialize;

use super::{Cocycle, Cohomology, GModule};
use crate::error::{Error, Result};
use crate::grouptheory::{FiniteGroup, MatGroup, QuotientGroup};
use crate::ringmat::{kernel, AbelianStructure, Howell, Mat, Vector};

/// Restriction of a cocycle on `G` to the subgroup `H`, reindexed to `H`.
pub fn restrict(z: &Cocycle, g: &MatGroup, h: &MatGroup) -> Result<Cocycle> {
    if !h.is_subgroup_of(g) {
        return Err(Error::input("H is not a subgroup of G"));
    }
    if z.values().len() != g.order() {
        return Err(Error::input("cocycle is not defined on G"));
    }
    let values = h
        .elements()
        .iter()
        .map(|x| z.value(g.index_of(x).expect("subgroup")).to_vec())
        .collect();
    Cocycle::new(z.spec(), values)
}

/// Pulls a cocycle on `G / N` back to `G`.
pub fn inflate(zq: &Cocycle, q: &QuotientGroup, g: &MatGroup) -> Result<Cocycle> {
    if zq.values().len() != q.order() {
        return Err(Error::input("cocycle is not defined on the quotient"));
    }
    let values = (0..g.order())
        .map(|e| zq.value(q.coset_of(e)).to_vec())
        .collect();
    Cocycle::new(zq.spec(), values)
}

/// Middle-term exactness of
/// `0 -> H^1(G/N, M[p]) -> H^1(G, M[p]) -> H^1(N, M[p])` with `N` the
/// kernel of reduction mod `p`.
#[derive(Clone, Debug, Serialize)]
pub struct InfResReport {
    pub quotient_order: usize,
    pub kernel_order: usize,
    pub h1_quotient: AbelianStructure,
    pub h1_group: AbelianStructure,
    pub h1_kernel: AbelianStructure,
    pub inflation_injective: bool,
    /// Restriction after inflation is a coboundary.
    pub composite_zero: bool,
    /// `ker(res) = im(inf)` as subgroups of `H^1(G, M[p])`.
    pub exact: bool,
    /// Classes enumerated one by one (0 when there were too many).
    pub classes_checked: usize,
}

const EXHAUSTIVE_CLASSES: u128 = 4096;

pub fn inflation_restriction_check(g: &MatGroup) -> Result<InfResReport> {
    let n = g.congruence_kernel(1)?;
    let q = QuotientGroup::new(g, &n)?;
    let mp = GModule::reduced(g, 1)?;
    let mq = GModule::on_quotient(&q, g, 1)?;
    let mn = GModule::reduced(&n, 1)?;
    let cg = Cohomology::new(&mp)?;
    let cq = Cohomology::new(&mq)?;
    let cn = Cohomology::new(&mn)?;
    let ring = mp.ring();
    let width = cg.width();
    let m = mp.spec().rank;

    let h1g = cg.h1()?;
    let h1q = cq.h1()?;
    let h1n = cn.h1()?;

    // image of inflation, as generator-value vectors on G
    let inflated: Vec<Vector> = cq
        .z1_generators()
        .iter()
        .map(|zq| cg.generator_values(&inflate(&cq.cocycle_from(zq), &q, g).expect("shape")))
        .collect();
    let mut rows = cg.b1_generators().to_vec();
    rows.extend(inflated.iter().cloned());
    let im_inf = Howell::new(&ring, width, rows);
    let inflation_injective = im_inf.log_order() == cg.b1_log_order() + h1q.structure.log_order();

    // kernel of restriction: z in Z^1(G) with L_h z = (h - 1) m on the
    // generators of N, solved jointly in (z, m)
    let mut sys: Vec<Vector> = Vec::new();
    let zero_m = vec![0; m];
    {
        let constraints = kernel_rows(&cg);
        for row in constraints {
            let mut r = row;
            r.extend(&zero_m);
            sys.push(r);
        }
    }
    for x in n.generators() {
        let e = g.index_of(x).expect("subgroup");
        let l = cg.value_map(e);
        let d = mp.action(e).minus_identity(&ring);
        for i in 0..m {
            let mut r = l.row(i).to_vec();
            r.extend(d.row(i).iter().map(|&c| ring.neg(c)));
            sys.push(r);
        }
    }
    let sol = kernel(&Mat::from_row_vecs(width + m, &sys), &ring);
    let mut rows = cg.b1_generators().to_vec();
    rows.extend(sol.iter().map(|v| v[..width].to_vec()));
    let ker_res = Howell::new(&ring, width, rows);

    let composite_zero = ker_res.contains_all(&inflated);
    let exact = composite_zero && im_inf.contains_all(ker_res.rows());

    // enumerate classes when feasible
    let mut classes_checked = 0;
    if h1g.order() <= EXHAUSTIVE_CLASSES {
        let reps = &h1g.structure.generators;
        let p = ring.p();
        for idx in 0..h1g.order() as u64 {
            let mut z = vec![0; width];
            let mut t = idx;
            for r in reps {
                crate::ringmat::vecops::axpy(&mut z, t % p, r, &ring);
                t /= p;
            }
            let coc = cg.cocycle_from(&z);
            let res = restrict(&coc, g, &n)?;
            let in_ker = cn.is_coboundary(&res)?.is_some();
            if in_ker != im_inf.contains(&z) {
                return Err(Error::internal(
                    "class-by-class restriction disagrees with the linear computation",
                ));
            }
            classes_checked += 1;
        }
    }
    Ok(InfResReport {
        quotient_order: q.order(),
        kernel_order: n.order(),
        h1_quotient: h1q.structure,
        h1_group: h1g.structure,
        h1_kernel: h1n.structure,
        inflation_injective,
        composite_zero,
        exact,
        classes_checked,
    })
}

/// Rows whose kernel is `Z^1`.
fn kernel_rows(c: &Cohomology) -> Vec<Vector> {
    c.constraints.rows().to_vec()
}
