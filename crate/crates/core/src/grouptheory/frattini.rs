use super::MatGroup;
use crate::error::{Error, Result};
use crate::ringmat::Mat;

fn commutator(g: &MatGroup, a: &Mat, b: &Mat) -> Mat {
    let r = g.ring();
    a.mul(b, r).mul(&g.inverse(a), r).mul(&g.inverse(b), r)
}

/// Frattini subgroup of a p-group, computed as `H^p [H, H]`.
///
/// The generating set is all p-th powers plus commutators of generators,
/// closed up to its normal closure in `H`.
pub fn frattini(h: &MatGroup) -> Result<MatGroup> {
    if !h.is_p_group() {
        return Err(Error::precondition("H is not a p-group"));
    }
    let p = h.spec().p;
    let r = *h.ring();
    let mut gens: Vec<Mat> = Vec::new();
    let mut sub = MatGroup::trivial(h.spec());
    let add = |x: Mat, sub: &mut MatGroup, gens: &mut Vec<Mat>| {
        if !sub.contains(&x) {
            gens.push(x);
            *sub = h.subgroup(gens).expect("inside H");
        }
    };
    for x in h.elements() {
        add(x.pow(p, &r), &mut sub, &mut gens);
    }
    let hg = h.generators();
    for (i, a) in hg.iter().enumerate() {
        for b in &hg[i + 1..] {
            add(commutator(h, a, b), &mut sub, &mut gens);
        }
    }
    // normal closure under conjugation by the generators of H
    loop {
        let mut grew = false;
        for x in hg {
            for w in sub.generators().to_vec() {
                let c = h.conjugate(x, &w);
                if !sub.contains(&c) {
                    add(c, &mut sub, &mut gens);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    // H / Phi must be elementary abelian
    let elementary = hg.iter().all(|x| sub.contains(&x.pow(p, &r)))
        && hg.iter().all(|a| hg.iter().all(|b| sub.contains(&commutator(h, a, b))));
    if !elementary {
        return Err(Error::internal("H / Phi(H) is not elementary abelian"));
    }
    Ok(sub)
}

/// Frattini subgroup as the intersection of all maximal subgroups, found by
/// enumerating subgroups generated by at most two elements. Exact for
/// p-groups whose maximal subgroups are 2-generated (all orders up to `p^3`).
pub fn frattini_by_maximal_subgroups(h: &MatGroup) -> Result<MatGroup> {
    if !h.is_p_group() {
        return Err(Error::precondition("H is not a p-group"));
    }
    if h.order() == 1 {
        return Ok(h.clone());
    }
    let elems = h.elements();
    let mut proper: Vec<MatGroup> = Vec::new();
    for i in 0..elems.len() {
        for j in i..elems.len() {
            let s = h.subgroup(&[elems[i].clone(), elems[j].clone()])?;
            if s.order() < h.order() && !proper.iter().any(|t| t.same_elements(&s)) {
                proper.push(s);
            }
        }
    }
    let maximal: Vec<&MatGroup> = proper
        .iter()
        .filter(|s| {
            !proper
                .iter()
                .any(|t| t.order() > s.order() && s.is_subgroup_of(t))
        })
        .collect();
    Ok(h.subgroup_where(|x| maximal.iter().all(|m| m.contains(x))))
}
