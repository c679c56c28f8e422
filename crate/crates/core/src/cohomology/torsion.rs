use std::collections::HashSet;

use serde::Serialize;

use super::{Cohomology, GModule};
use crate::error::{Error, Result};
use crate::grouptheory::{element_order, MatGroup};
use crate::ringmat::{eigenvalues_in_ext, AbelianStructure, ExtElem, Howell, Mat, Vector, Zmod, EXT_FIELD_CAP};

/// Comparison of `H^1(G, M[p])` with the p-torsion of `H^1(G, M)`.
#[derive(Clone, Debug, Serialize)]
pub struct TorsionReport {
    pub h1_mod_p: AbelianStructure,
    pub h1: AbelianStructure,
    /// Rank of `H^1(G, M)[p]`, the number of cyclic factors.
    pub torsion_rank: usize,
    /// The map induced by `M[p] -> M` is injective.
    pub injective: bool,
    pub isomorphic: bool,
}

fn delta_minus_one_bijective(delta: &Mat, ring: &Zmod) -> bool {
    ring.is_unit(delta.minus_identity(ring).det(ring))
}

pub fn torsion_isomorphism_check(g: &MatGroup, delta: &Mat) -> Result<TorsionReport> {
    let ring = *g.ring();
    if !g.contains(delta) {
        return Err(Error::input("delta is not an element of G"));
    }
    if !delta_minus_one_bijective(delta, &ring) {
        return Err(Error::precondition("delta - Id is not bijective"));
    }
    let mp = GModule::reduced(g, 1)?;
    let cp = Cohomology::new(&mp)?;
    let h1p = cp.h1()?;
    let m = GModule::natural(g);
    let c = Cohomology::new(&m)?;
    let h1 = c.h1()?;

    // M[p] = p^{n-1} M
    let scale = ring.p_pow(ring.n() - 1);
    let images: Vec<Vector> = h1p
        .structure
        .generators
        .iter()
        .map(|z| z.iter().map(|&x| ring.mul(x, scale)).collect())
        .collect();
    if !images.iter().all(|z| c.is_cocycle_vector(z)) {
        return Err(Error::internal("image of a mod-p cocycle is not a cocycle"));
    }
    let mut rows = c.b1_generators().to_vec();
    rows.extend(images);
    let span = Howell::new(&ring, c.width(), rows);
    let injective = span.log_order() == c.b1_log_order() + h1p.structure.rank() as u32;
    let torsion_rank = h1.structure.rank();
    Ok(TorsionReport {
        isomorphic: injective && torsion_rank == h1p.structure.rank(),
        h1_mod_p: h1p.structure,
        h1: h1.structure,
        torsion_rank,
        injective,
    })
}

/// Outcome of the eigenvalue-ratio test on one element.
#[derive(Clone, Debug, Serialize)]
pub struct RatioOutcome {
    /// No quotient of two eigenvalues is itself an eigenvalue.
    pub holds: bool,
    /// Degree of the field containing the eigenvalues.
    pub degree: usize,
    /// Eigenvalues with multiplicity, as coefficient vectors over `F_p`.
    pub eigenvalues: Vec<(ExtElem, usize)>,
}

fn multiplicative_order_mod(p: u64, m: u64) -> usize {
    if m == 1 {
        return 1;
    }
    let mut k = 1;
    let mut x = p % m;
    while x != 1 {
        x = x * p % m;
        k += 1;
    }
    k
}

/// Tests whether some ratio `lambda_i / lambda_j` of eigenvalues of
/// `delta mod p` is again an eigenvalue, after replacing `delta` by a
/// power of order prime to `p`.
pub fn ratio_condition(delta: &Mat, ring: &Zmod) -> Result<RatioOutcome> {
    let fp = ring.with_exponent(1)?;
    let p = ring.p();
    let mut d = delta.reduce_to(&fp);
    if !d.is_invertible(&fp) {
        return Err(Error::input("delta is not invertible mod p"));
    }
    let mut ord = element_order(&d, &fp);
    while ord % p == 0 {
        d = d.pow(p, &fp);
        ord /= p;
    }
    let degree = multiplicative_order_mod(p, ord);
    if (p as u128).pow(degree as u32) > EXT_FIELD_CAP as u128 {
        return Err(Error::CapExceeded {
            cap: EXT_FIELD_CAP as usize,
        });
    }
    let (field, eigenvalues) = eigenvalues_in_ext(&d, &fp, degree)?;
    let total: usize = eigenvalues.iter().map(|e| e.1).sum();
    if total != d.rows() {
        return Err(Error::internal("eigenvalues do not split in the expected field"));
    }
    let roots: HashSet<&ExtElem> = eigenvalues.iter().map(|e| &e.0).collect();
    let holds = eigenvalues.iter().all(|(a, _)| {
        eigenvalues.iter().all(|(b, _)| {
            let r = field.div(a, b).expect("eigenvalues of an invertible matrix");
            !roots.contains(&r)
        })
    });
    Ok(RatioOutcome {
        holds,
        degree,
        eigenvalues,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Prop23Verdict {
    /// The sufficient conditions hold and `H^1(G, M) = 0` was confirmed.
    Certified { delta: Mat, degree: usize },
    HypothesisFails { reason: String },
    Inconclusive { reason: String },
}

/// Checks the sufficient condition for `H^1(G, M) = 0`: some `delta` with
/// `delta - Id` bijective whose eigenvalue ratios avoid its eigenvalues, and
/// `H^1(G mod p, M[p]) = 0`. A positive verdict is cross-checked directly.
pub fn proposition23_check(g: &MatGroup) -> Result<Prop23Verdict> {
    let ring = *g.ring();
    let candidates: Vec<&Mat> = g
        .elements()
        .iter()
        .filter(|x| delta_minus_one_bijective(x, &ring))
        .collect();
    if candidates.is_empty() {
        return Ok(Prop23Verdict::Inconclusive {
            reason: "no element delta with delta - Id bijective".into(),
        });
    }
    let bar = g.reduce(1)?;
    let mbar = GModule::natural(&bar);
    if !Cohomology::new(&mbar)?.h1()?.is_trivial() {
        return Ok(Prop23Verdict::HypothesisFails {
            reason: "H^1(G mod p, M[p]) is nonzero".into(),
        });
    }
    let fp = ring.with_exponent(1)?;
    let mut seen = HashSet::new();
    let mut capped = false;
    for delta in candidates {
        if !seen.insert(delta.reduce_to(&fp)) {
            continue;
        }
        match ratio_condition(delta, &ring) {
            Ok(out) if out.holds => {
                if !super::h1(g)?.is_trivial() {
                    return Err(Error::internal(
                        "sufficient condition holds but H^1(G, M) is nonzero",
                    ));
                }
                return Ok(Prop23Verdict::Certified {
                    delta: delta.clone(),
                    degree: out.degree,
                });
            }
            Ok(_) => {}
            Err(Error::CapExceeded { .. }) => capped = true,
            Err(e) => return Err(e),
        }
    }
    if capped {
        return Ok(Prop23Verdict::Inconclusive {
            reason: "eigenvalue field exceeds the enumeration cap".into(),
        });
    }
    Ok(Prop23Verdict::HypothesisFails {
        reason: "every qualifying delta has a ratio of eigenvalues that is an eigenvalue".into(),
    })
}
