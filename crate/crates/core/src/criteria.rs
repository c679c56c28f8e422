//! Hypothesis checkers for vanishing of `H^1_loc`, each cross-checked
//! against the direct computation.

use serde::Serialize;

use crate::cohomology::{h1, h1_loc};
use crate::error::{Error, Result};
use crate::grouptheory::{
    corollary14_element_from, element_order, lift_normalizer, normalizer, p_part, p_sylow,
    quotient_generators, MatGroup,
};
use crate::ringmat::{kernel, AbelianStructure, Howell, Mat, Zmod};
use crate::symplectic::{multiplier_image_and_kernel, SymplecticSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemStatus {
    Satisfied,
    Failed,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct HypothesisItem {
    pub name: String,
    pub status: ItemStatus,
    pub witness: Option<String>,
}

impl HypothesisItem {
    fn new(name: &str, ok: bool, witness: Option<String>) -> Self {
        HypothesisItem {
            name: name.to_string(),
            status: if ok {
                ItemStatus::Satisfied
            } else {
                ItemStatus::Failed
            },
            witness,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    Certified,
    NotApplicable,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub hypotheses: Vec<HypothesisItem>,
    pub conclusion: Conclusion,
    /// Directly computed `H^1_loc` of the group the conclusion is about.
    pub cross_check: Option<AbelianStructure>,
}

impl CriterionReport {
    fn assemble(criterion: &str, hypotheses: Vec<HypothesisItem>, cross_check: Option<AbelianStructure>) -> Self {
        let conclusion = if hypotheses.iter().all(|h| h.status == ItemStatus::Satisfied) {
            Conclusion::Certified
        } else if hypotheses.iter().any(|h| h.status == ItemStatus::Failed) {
            Conclusion::NotApplicable
        } else {
            Conclusion::Inconclusive
        };
        CriterionReport {
            criterion: criterion.to_string(),
            hypotheses,
            conclusion,
            cross_check,
        }
    }

    pub fn is_certified(&self) -> bool {
        self.conclusion == Conclusion::Certified
    }

    /// A certified report must come with a trivial direct computation.
    pub fn is_consistent(&self) -> bool {
        match (&self.conclusion, &self.cross_check) {
            (Conclusion::Certified, Some(c)) => c.is_trivial(),
            _ => true,
        }
    }
}

fn fixed_point_free(a: &Mat, ring: &Zmod) -> bool {
    ring.is_unit(a.minus_identity(ring).det(ring))
}

fn divides(a: u64, b: u64) -> bool {
    b % a == 0
}

/// Elements in increasing order of their order, ties by element index.
fn by_order<'a>(elems: &'a [Mat], ring: &Zmod) -> Vec<(&'a Mat, u64)> {
    let mut v: Vec<(&Mat, u64)> = elems.iter().map(|x| (x, element_order(x, ring))).collect();
    v.sort_by_key(|&(_, o)| o);
    v
}

/// First element of order dividing `p - 1` with `g - Id` bijective.
fn qualifying_element(elems: &[Mat], ring: &Zmod) -> Option<(Mat, u64)> {
    let p = ring.p();
    by_order(elems, ring)
        .into_iter()
        .find(|&(x, o)| divides(o, p - 1) && fixed_point_free(x, ring))
        .map(|(x, o)| (x.clone(), o))
}

/// Criterion on the mod-`p` image: some `g` of order dividing `p - 1`
/// fixing no nonzero vector, and `H^1(G_1, M) = 0`. When `gn` is given the
/// conclusion concerns `H^1_loc(G_n)`, otherwise `H^1_loc(G_1)`.
pub fn theorem2_check(g1: &MatGroup, gn: Option<&MatGroup>) -> Result<CriterionReport> {
    if g1.spec().n != 1 {
        return Err(Error::input("G_1 must act on (Z/p)^m"));
    }
    let ring = *g1.ring();
    let mut items = Vec::new();
    if let Some(gn) = gn {
        let ok = gn.spec().p == g1.spec().p
            && gn.spec().rank == g1.spec().rank
            && gn.reduce(1).map(|r| r.same_elements(g1)).unwrap_or(false);
        items.push(HypothesisItem::new("G_n reduces onto G_1", ok, None));
    }
    let found = qualifying_element(g1.elements(), &ring);
    items.push(HypothesisItem::new(
        "g in G_1 of order dividing p-1 fixing no nonzero vector",
        found.is_some(),
        found.as_ref().map(|(x, o)| format!("{x:?} of order {o}")),
    ));
    let h1_trivial = h1(g1)?.is_trivial();
    items.push(HypothesisItem::new("H^1(G_1, M[p]) = 0", h1_trivial, None));
    let target = gn.unwrap_or(g1);
    let cross = h1_loc(target)?.structure;
    Ok(CriterionReport::assemble("theorem2", items, Some(cross)))
}

/// Criterion on the group itself: the normalizer of a Sylow p-subgroup
/// contains `g` of order dividing `p - 1` with `g - Id` bijective.
pub fn corollary12_check(g: &MatGroup) -> Result<CriterionReport> {
    let ring = *g.ring();
    let h = p_sylow(g)?;
    let norm = normalizer(g, &h)?;
    let mut items = vec![HypothesisItem::new(
        "Sylow p-subgroup H",
        true,
        Some(format!("order {}, normalizer order {}", h.order(), norm.order())),
    )];
    let found = qualifying_element(norm.elements(), &ring);
    items.push(HypothesisItem::new(
        "g in N(H) of order dividing p-1 with g - Id bijective",
        found.is_some(),
        found.as_ref().map(|(x, o)| format!("{x:?} of order {o}")),
    ));
    let cross = h1_loc(g)?.structure;
    Ok(CriterionReport::assemble("corollary12", items, Some(cross)))
}

fn reduction_of(g: &MatGroup, x: &Mat, fp: &Zmod) -> Option<Mat> {
    g.elements().iter().find(|y| y.reduce_to(fp) == *x).cloned()
}

/// Lifts `g1` in `G mod p`, normalizing a Sylow subgroup there with order
/// dividing `p - 1` and `g1 - Id` bijective, to `g` in `G` with the same
/// three properties mod `p^n`.
pub fn remark11_lift(g: &MatGroup, g1: &Mat) -> Result<Mat> {
    let ring = *g.ring();
    let p = ring.p();
    let fp = ring.with_exponent(1)?;
    let g1 = g1.reduce_to(&fp);
    let gbar = g.reduce(1)?;
    if !gbar.contains(&g1) {
        return Err(Error::precondition("g1 is not in the image of G mod p"));
    }
    if !divides(element_order(&g1, &fp), p - 1) {
        return Err(Error::precondition("order of g1 does not divide p - 1"));
    }
    if !fixed_point_free(&g1, &fp) {
        return Err(Error::precondition("g1 - Id is not bijective"));
    }
    // a Sylow of G mod p normalized by g1
    let sbar = p_sylow(&gbar)?;
    let conj = gbar
        .elements()
        .iter()
        .find(|x| {
            let xi = gbar.inverse(x);
            let xs: Vec<Mat> = sbar.generators().iter().map(|s| x.mul(s, &fp).mul(&xi, &fp)).collect();
            let c = gbar.subgroup(&xs).expect("inside");
            gbar.normalizes(&g1, &c)
        })
        .ok_or_else(|| Error::precondition("g1 normalizes no Sylow p-subgroup of G mod p"))?
        .clone();
    if ring.n() == 1 {
        return Ok(g1);
    }

    let n = g.congruence_kernel(1)?;
    let h = p_sylow(g)?;
    // conjugate H so that its image is conj * sbar * conj^{-1}; the image of
    // H is itself a Sylow of G mod p, so first align it with sbar
    let hbar = h.reduce(1)?;
    let to_sbar = gbar
        .elements()
        .iter()
        .find(|x| {
            let xi = gbar.inverse(x);
            hbar.generators()
                .iter()
                .all(|s| sbar.contains(&x.mul(s, &fp).mul(&xi, &fp)))
        })
        .ok_or_else(|| Error::internal("images of Sylow subgroups are not conjugate"))?;
    let ybar = conj.mul(to_sbar, &fp);
    let y = reduction_of(g, &ybar, &fp).ok_or_else(|| Error::internal("no lift of conjugator"))?;
    let yi = g.inverse(&y);
    let hy_gens: Vec<Mat> = h.generators().iter().map(|s| y.mul(s, &ring).mul(&yi, &ring)).collect();
    let hy = g.subgroup(&hy_gens)?;

    let lift = reduction_of(g, &g1, &fp).ok_or_else(|| Error::internal("no lift of g1"))?;
    let hmat = lift_normalizer(g, &n, &hy, &lift)?;
    let ord = element_order(&hmat, &ring);
    let (_, pa) = p_part(ord as usize, p);
    let out = hmat.pow(pa as u64, &ring);
    let ok = divides(element_order(&out, &ring), p - 1)
        && g.normalizes(&out, &hy)
        && fixed_point_free(&out, &ring)
        && out.reduce_to(&fp) == g1;
    if !ok {
        return Err(Error::internal("lifted element fails its certificate"));
    }
    Ok(out)
}

/// For `G_1` of symplectic similitudes mod `p` with surjective multiplier:
/// build an element of order `p - 1` normalizing a Sylow subgroup and test
/// whether it fixes a nonzero vector.
pub fn theorem5_group_check(g1: &MatGroup) -> Result<CriterionReport> {
    let spec = g1.spec();
    if spec.n != 1 {
        return Err(Error::input("G_1 must act on (Z/p)^2d"));
    }
    let ring = *g1.ring();
    let p = spec.p;
    let space = SymplecticSpace::new(spec)?;
    let (image, kernel_nu) = match multiplier_image_and_kernel(g1, &space) {
        Ok(v) => v,
        Err(Error::Input(msg)) => {
            let items = vec![HypothesisItem::new("G_1 consists of similitudes", false, Some(msg))];
            return Ok(CriterionReport::assemble("theorem5", items, None));
        }
        Err(e) => return Err(e),
    };
    let surjective = image.len() as u64 == p - 1;
    let mut items = vec![HypothesisItem::new(
        "multiplier surjective onto units",
        surjective,
        Some(format!("image of size {}", image.len())),
    )];
    if !surjective {
        let cross = h1_loc(g1)?.structure;
        return Ok(CriterionReport::assemble("theorem5", items, Some(cross)));
    }
    let h = p_sylow(g1)?;
    let mut first: Option<(Mat, u64)> = None;
    let mut found: Option<(Mat, u64)> = None;
    for x in quotient_generators(g1, &kernel_nu) {
        let (g, rep) = corollary14_element_from(g1, &kernel_nu, &h, x)?;
        if first.is_none() {
            first = Some((g.clone(), rep.i));
        }
        if fixed_point_free(&g, &ring) {
            found = Some((g, rep.i));
            break;
        }
    }
    let (g, i) = found
        .clone()
        .or(first)
        .ok_or_else(|| Error::internal("no generator of G/N"))?;
    items.push(HypothesisItem::new(
        "constructed g of order p-1 in N(H)",
        true,
        Some(format!("{g:?}, i = {i}")),
    ));
    items.push(HypothesisItem::new(
        "g fixes no nonzero vector",
        found.is_some(),
        None,
    ));
    let cross = h1_loc(g1)?.structure;
    Ok(CriterionReport::assemble("theorem5", items, Some(cross)))
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPointSpectrum {
    /// `dim ker(sigma - Id)` per element, in element order.
    pub dims: Vec<usize>,
    pub all_have_eigenvalue_one: bool,
}

pub fn fixed_point_spectrum(g: &MatGroup) -> Result<FixedPointSpectrum> {
    if g.spec().n != 1 {
        return Err(Error::precondition("fixed-point spectrum needs n = 1"));
    }
    let ring = *g.ring();
    let m = g.spec().rank;
    let dims: Vec<usize> = g
        .elements()
        .iter()
        .map(|x| Howell::new(&ring, m, kernel(&x.minus_identity(&ring), &ring)).rows().len())
        .collect();
    Ok(FixedPointSpectrum {
        all_have_eigenvalue_one: dims.iter().all(|&d| d > 0),
        dims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringmat::ModuleSpec;

    fn spec(p: u64, n: u32, m: usize) -> ModuleSpec {
        ModuleSpec::new(p, n, m).unwrap()
    }

    #[test]
    fn theorem2_diagonal_certified() {
        let s = spec(5, 1, 2);
        let r = s.ring();
        let g = MatGroup::close(s, &[Mat::diag(&r, &[2, 3])], 10).unwrap();
        let rep = theorem2_check(&g, None).unwrap();
        assert!(rep.is_certified());
        assert!(rep.is_consistent());
    }

    #[test]
    fn theorem2_order_three_fails() {
        let s = spec(5, 1, 2);
        let r = s.ring();
        let g = Mat::from_rows(&r, &[vec![1, -3], vec![1, -2]]).unwrap();
        let grp = MatGroup::close(s, &[g], 10).unwrap();
        let rep = theorem2_check(&grp, None).unwrap();
        assert_eq!(rep.conclusion, Conclusion::NotApplicable);
        assert_eq!(rep.hypotheses[0].status, ItemStatus::Failed);
    }

    #[test]
    fn theorem2_trivial_group_fails() {
        let g = MatGroup::trivial(spec(5, 1, 2));
        let rep = theorem2_check(&g, None).unwrap();
        assert_eq!(rep.conclusion, Conclusion::NotApplicable);
    }

    #[test]
    fn corollary12_examples() {
        let s = spec(5, 2, 2);
        let r = s.ring();
        let u = Mat::from_rows(&r, &[vec![1, 5], vec![0, 1]]).unwrap();
        let g = MatGroup::close(s, &[Mat::diag(&r, &[2, 3]), u.clone()], 1000).unwrap();
        let rep = corollary12_check(&g).unwrap();
        assert!(rep.is_certified());
        assert!(rep.cross_check.unwrap().is_trivial());

        let cyc = MatGroup::close(s, &[u], 10).unwrap();
        let rep = corollary12_check(&cyc).unwrap();
        assert_eq!(rep.conclusion, Conclusion::NotApplicable);
        assert!(rep.cross_check.unwrap().is_trivial());
    }

    #[test]
    fn remark11_examples() {
        let s = spec(5, 2, 2);
        let r = s.ring();
        let u = Mat::from_rows(&r, &[vec![1, 5], vec![0, 1]]).unwrap();
        let g = MatGroup::close(s, &[Mat::diag(&r, &[2, 3]), u], 1000).unwrap();
        let fp = r.with_exponent(1).unwrap();
        let g1 = Mat::diag(&fp, &[2, 3]);
        let out = remark11_lift(&g, &g1).unwrap();
        assert_eq!(element_order(&out, &r), 4);
        assert_eq!(out.reduce_to(&fp), g1);

        let s1 = spec(5, 1, 2);
        let g = MatGroup::close(s1, &[Mat::diag(&fp, &[2, 3])], 10).unwrap();
        assert_eq!(remark11_lift(&g, &g1).unwrap(), g1);
    }

    #[test]
    fn remark11_rejects_fixed_vector() {
        let s = spec(5, 2, 2);
        let r = s.ring();
        let g = MatGroup::close(s, &[Mat::diag(&r, &[7, 1])], 100).unwrap();
        let fp = r.with_exponent(1).unwrap();
        assert!(matches!(
            remark11_lift(&g, &Mat::diag(&fp, &[2, 1])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn theorem5_gl2_f5() {
        let s = spec(5, 1, 2);
        let r = s.ring();
        let u = Mat::from_rows(&r, &[vec![1, 1], vec![0, 1]]).unwrap();
        let w = Mat::from_rows(&r, &[vec![0, 1], vec![1, 0]]).unwrap();
        let g = MatGroup::close(s, &[u, w, Mat::diag(&r, &[2, 1])], 1000).unwrap();
        let rep = theorem5_group_check(&g).unwrap();
        assert!(rep.is_certified(), "{rep:?}");
        assert!(rep.is_consistent());
    }

    #[test]
    fn theorem5_diag_not_certified() {
        let s = spec(5, 1, 2);
        let r = s.ring();
        let g = MatGroup::close(s, &[Mat::diag(&r, &[2, 1])], 10).unwrap();
        let rep = theorem5_group_check(&g).unwrap();
        assert!(!rep.is_certified());
    }

    #[test]
    fn spectra() {
        let s = spec(5, 1, 2);
        let r = s.ring();
        let t = fixed_point_spectrum(&MatGroup::trivial(s)).unwrap();
        assert_eq!(t.dims, vec![2]);
        let u = Mat::from_rows(&r, &[vec![1, 1], vec![0, 1]]).unwrap();
        let g = MatGroup::close(s, &[u], 10).unwrap();
        assert!(fixed_point_spectrum(&g).unwrap().all_have_eigenvalue_one);
        let m = MatGroup::close(s, &[Mat::scalar(2, 4)], 10).unwrap();
        assert!(!fixed_point_spectrum(&m).unwrap().all_have_eigenvalue_one);
    }
}
