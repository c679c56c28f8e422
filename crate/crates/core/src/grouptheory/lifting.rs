use serde::Serialize;

use super::{element_order, p_part, p_sylow, MatGroup};
use crate::error::{Error, Result};
use crate::ringmat::{gcd, Mat};

/// `gcd((p^l - 1) / (p - 1), p - 1)`, which always equals `gcd(l, p - 1)`.
pub fn repunit_gcd(p: u64, l: u32) -> u64 {
    let pl = (p as u128).pow(l);
    let repunit = (pl - 1) / (p as u128 - 1);
    gcd((repunit % (p as u128 - 1)) as u64, p - 1)
}

/// `gcd(k!, m)`, without forming `k!`.
pub fn factorial_gcd(k: u64, m: u64) -> u64 {
    let mut rest = m;
    let mut out = 1;
    for j in 2..=k {
        let g = gcd(j, rest);
        out *= g;
        rest /= g;
    }
    out
}

/// Returns `g' = n^{-1} g` in the coset `gN` that normalizes the Sylow
/// subgroup `H`.
///
/// `gHg^{-1}` and `H` are Sylow subgroups of `HN`, so some `x = nh` in `HN`
/// conjugates one to the other.
pub fn lift_normalizer(g_grp: &MatGroup, n: &MatGroup, h: &MatGroup, g: &Mat) -> Result<Mat> {
    let ring = *g_grp.ring();
    if !g_grp.contains(g) {
        return Err(Error::precondition("g is not an element of G"));
    }
    if !n.is_normal_in(g_grp) {
        return Err(Error::precondition("N is not a normal subgroup of G"));
    }
    let (_, sylow_order) = p_part(g_grp.order(), g_grp.spec().p);
    if !h.is_subgroup_of(g_grp) || !h.is_p_group() || h.order() != sylow_order {
        return Err(Error::precondition("H is not a Sylow p-subgroup of G"));
    }
    let mut hn_gens = h.generators().to_vec();
    hn_gens.extend(n.generators().iter().cloned());
    let hn = g_grp.subgroup(&hn_gens)?;
    let gi = g_grp.inverse(g);
    let target: Vec<Mat> = h
        .generators()
        .iter()
        .map(|y| g.mul(y, &ring).mul(&gi, &ring))
        .collect();
    if !target.iter().all(|y| hn.contains(y)) {
        return Err(Error::precondition("the class of g does not normalize HN/N"));
    }
    let conj_h = hn.subgroup(&target)?;
    let x = hn
        .elements()
        .iter()
        .find(|x| hn.normalizes_onto(x, h, &conj_h))
        .ok_or_else(|| Error::internal("no element of HN conjugates H to gHg^{-1}"))?;
    // x = n h with n in N, h in H
    let nn = h
        .elements()
        .iter()
        .map(|y| x.mul(&g_grp.inverse(y), &ring))
        .find(|c| n.contains(c))
        .ok_or_else(|| Error::internal("element of HN does not split as nh"))?;
    let lifted = g_grp.inverse(&nn).mul(g, &ring);
    debug_assert!(g_grp.normalizes(&lifted, h));
    Ok(lifted)
}

impl MatGroup {
    /// Whether `x A x^{-1} = B` for subgroups of equal order.
    fn normalizes_onto(&self, x: &Mat, a: &MatGroup, b: &MatGroup) -> bool {
        let r = self.ring();
        let xi = self.inverse(x);
        a.order() == b.order()
            && a.generators()
                .iter()
                .all(|y| b.contains(&x.mul(y, r).mul(&xi, r)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Corollary14Report {
    /// `gcd((2d)!, p - 1)`.
    pub i: u64,
    /// Order of the constructed element.
    pub element_order: u64,
    /// Order of its class in `G / N`.
    pub class_order: u64,
    /// The exponent `r` with `order(lift) = (p - 1) r`.
    pub r: u64,
}

fn check_cyclic_quotient(g_grp: &MatGroup, n: &MatGroup) -> Result<()> {
    if g_grp.spec().rank % 2 != 0 {
        return Err(Error::precondition("module rank must be even"));
    }
    if !n.is_normal_in(g_grp) {
        return Err(Error::precondition("N is not a normal subgroup of G"));
    }
    if g_grp.order() != n.order() * (g_grp.spec().p as usize - 1) {
        return Err(Error::precondition("G/N does not have order p - 1"));
    }
    Ok(())
}

fn class_order(x: &Mat, n: &MatGroup) -> u64 {
    let ring = n.ring();
    let mut k = 1;
    let mut cur = x.clone();
    while !n.contains(&cur) {
        cur = cur.mul(x, ring);
        k += 1;
    }
    k
}

/// Elements of `G` whose class generates `G / N`, in element order.
pub fn quotient_generators<'a>(g_grp: &'a MatGroup, n: &'a MatGroup) -> impl Iterator<Item = &'a Mat> {
    let p = g_grp.spec().p;
    g_grp
        .elements()
        .iter()
        .filter(move |x| class_order(x, n) == p - 1)
}

/// An element of order `p - 1` normalizing a Sylow p-subgroup of `G`, whose
/// class in `G / N` has order divisible by `(p - 1) / i`.
pub fn corollary14_element(g_grp: &MatGroup, n: &MatGroup) -> Result<(Mat, Corollary14Report)> {
    check_cyclic_quotient(g_grp, n)?;
    let g = quotient_generators(g_grp, n)
        .next()
        .ok_or_else(|| Error::precondition("G/N is not cyclic of order p - 1"))?
        .clone();
    let h = p_sylow(g_grp)?;
    corollary14_element_from(g_grp, n, &h, &g)
}

/// The construction started from a given `g` whose class generates `G / N`
/// and a given Sylow subgroup `h`.
pub fn corollary14_element_from(
    g_grp: &MatGroup,
    n: &MatGroup,
    h: &MatGroup,
    g: &Mat,
) -> Result<(Mat, Corollary14Report)> {
    check_cyclic_quotient(g_grp, n)?;
    let spec = g_grp.spec();
    let p = spec.p;
    let ring = *g_grp.ring();
    if class_order(g, n) != p - 1 {
        return Err(Error::precondition("class of g does not generate G/N"));
    }
    let lifted = lift_normalizer(g_grp, n, h, g)?;
    let ord = element_order(&lifted, &ring);
    if ord % (p - 1) != 0 {
        return Err(Error::internal("lift order is not a multiple of p - 1"));
    }
    let r = ord / (p - 1);
    let out = lifted.pow(r, &ring);
    let report = Corollary14Report {
        i: factorial_gcd(spec.rank as u64, p - 1),
        element_order: element_order(&out, &ring),
        class_order: class_order(&out, n),
        r,
    };
    if report.element_order != p - 1
        || report.class_order % ((p - 1) / report.i) != 0
        || !g_grp.normalizes(&out, h)
    {
        return Err(Error::internal("constructed element fails its certificate"));
    }
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringmat::ModuleSpec;

    #[test]
    fn gcd_values() {
        assert_eq!(factorial_gcd(2, 6), 2);
        assert_eq!(factorial_gcd(4, 12), 12);
        assert_eq!(factorial_gcd(4, 4), 4);
        assert_eq!(repunit_gcd(7, 3), 3);
        for p in [3u64, 5, 7, 11, 13] {
            for l in 1..6 {
                assert_eq!(repunit_gcd(p, l), gcd(l as u64, p - 1));
            }
        }
    }

    #[test]
    fn normal_sylow_returns_g() {
        let s = ModuleSpec::new(5, 1, 2).unwrap();
        let r = s.ring();
        let u = Mat::from_rows(&r, &[vec![1, 1], vec![0, 1]]).unwrap();
        let d = Mat::diag(&r, &[2, 1]);
        let g = MatGroup::close(s, &[u, d.clone()], 1000).unwrap();
        let h = p_sylow(&g).unwrap();
        let n = MatGroup::trivial(s);
        assert_eq!(lift_normalizer(&g, &n, &h, &d).unwrap(), d);
    }

    #[test]
    fn swapped_sylows_brute_force() {
        // GL2(F3): the lower unipotent w u w^{-1} moves the upper Sylow
        let s = ModuleSpec::new(3, 1, 2).unwrap();
        let r = s.ring();
        let u = Mat::from_rows(&r, &[vec![1, 1], vec![0, 1]]).unwrap();
        let w = Mat::from_rows(&r, &[vec![0, 1], vec![1, 0]]).unwrap();
        let g = MatGroup::close(s, &[u.clone(), w.clone()], 1000).unwrap();
        // N = SL2(F3), normal with quotient of order 2
        let n = g.subgroup_where(|x| x.det(&r) == 1);
        assert_eq!(g.order(), 48);
        assert_eq!(n.order(), 24);
        let h = p_sylow(&g).unwrap();
        for x in g.elements() {
            let lifted = lift_normalizer(&g, &n, &h, x).unwrap();
            assert!(g.normalizes(&lifted, &h));
            assert!(n.contains(&g.inverse(x).mul(&lifted, &r)));
            let brute = n
                .elements()
                .iter()
                .any(|m| g.normalizes(&x.mul(m, &r), &h));
            assert!(brute);
        }
    }

    #[test]
    fn corollary_on_gl2_f5() {
        let s = ModuleSpec::new(5, 1, 2).unwrap();
        let r = s.ring();
        let u = Mat::from_rows(&r, &[vec![1, 1], vec![0, 1]]).unwrap();
        let w = Mat::from_rows(&r, &[vec![0, 1], vec![1, 0]]).unwrap();
        let g = MatGroup::close(s, &[u, w, Mat::diag(&r, &[2, 1])], 1000).unwrap();
        assert_eq!(g.order(), 480);
        // N = kernel of the similitude character, here det
        let n = g.subgroup_where(|x| x.det(&r) == 1);
        let (x, rep) = corollary14_element(&g, &n).unwrap();
        assert_eq!(rep.i, 2);
        assert_eq!(rep.element_order, 4);
        assert_eq!(element_order(&x, &r), 4);
        assert_eq!(rep.class_order % 2, 0);
    }

    #[test]
    fn wrong_quotient_order_rejected() {
        let s = ModuleSpec::new(5, 1, 2).unwrap();
        let r = s.ring();
        let g = MatGroup::close(s, &[Mat::diag(&r, &[4, 1])], 10).unwrap();
        let n = MatGroup::trivial(s);
        assert!(matches!(corollary14_element(&g, &n), Err(Error::Precondition(_))));
    }
}
