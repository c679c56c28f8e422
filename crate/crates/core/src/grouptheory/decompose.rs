use std::collections::HashMap;

use serde::Serialize;

use super::{element_order, frattini, MatGroup};
use crate::error::{Error, Result};
use crate::ringmat::{kernel, Mat, Vector, Zmod};

/// Generators `h_i` of a p-group `H` with exponents `lambda_i` such that
/// `g h_i g^{-1} = h_i^{lambda_i}`.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub pairs: Vec<(Mat, u64)>,
}

/// Splits `H` into generators on which conjugation by `g` acts as a power
/// map.
///
/// Requires `order(g) | p - 1`, `H` a p-group and `g H g^{-1} = H`. The
/// construction diagonalises conjugation on `H / Phi(H)` (semisimple since
/// the order of `g` is prime to `p` and divides `p - 1`), lifts an eigenbasis
/// `v_1, ..., v_k`, and recurses on `<v_1, Phi(H)>` and `<v_2, ..., v_k, Phi(H)>`
/// until the pieces are cyclic.
pub fn decompose_generators(g: &Mat, h: &MatGroup) -> Result<Decomposition> {
    let spec = h.spec();
    let ring = *h.ring();
    let p = spec.p;
    if g.rows() != spec.rank || !g.is_invertible(&ring) {
        return Err(Error::input("g must be an invertible matrix of the group's rank"));
    }
    let ord = element_order(g, &ring);
    if (p - 1) % ord != 0 {
        return Err(Error::precondition(format!(
            "order of g is {ord}, which does not divide p - 1 = {}",
            p - 1
        )));
    }
    if !h.is_p_group() {
        return Err(Error::precondition("H is not a p-group"));
    }
    let gi = g.inverse(&ring).expect("invertible");
    let conj = |x: &Mat| g.mul(x, &ring).mul(&gi, &ring);
    if !h.generators().iter().all(|x| h.contains(&conj(x))) {
        return Err(Error::precondition("H is not normalized by g"));
    }

    let mut pairs = Vec::new();
    split(g, &gi, h, &mut pairs)?;

    // certify the output
    let gens: Vec<Mat> = pairs.iter().map(|(x, _)| x.clone()).collect();
    let regenerated = h.subgroup(&gens)?;
    if regenerated.order() != h.order() {
        return Err(Error::internal("decomposition does not regenerate H"));
    }
    for (x, lambda) in &pairs {
        if conj(x) != x.pow(*lambda, &ring) {
            return Err(Error::internal("conjugation identity fails"));
        }
    }
    Ok(Decomposition { pairs })
}

fn split(g: &Mat, gi: &Mat, h: &MatGroup, out: &mut Vec<(Mat, u64)>) -> Result<()> {
    if h.order() == 1 {
        return Ok(());
    }
    let ring = *h.ring();
    let p = h.spec().p;
    let fp = Zmod::new(p, 1)?;
    let phi = frattini(h)?;

    // basis of H / Phi(H)
    let mut basis: Vec<Mat> = Vec::new();
    let mut span = phi.clone();
    for x in h.generators().iter().chain(h.elements()) {
        if span.order() == h.order() {
            break;
        }
        if !span.contains(x) {
            basis.push(x.clone());
            let mut gens = span.generators().to_vec();
            gens.push(x.clone());
            span = h.subgroup(&gens)?;
        }
    }
    let k = basis.len();

    // coordinates of every element of H modulo Phi(H)
    let mut coords: HashMap<Mat, Vector> = HashMap::with_capacity(h.order());
    let total = p.pow(k as u32);
    for idx in 0..total {
        let mut c = vec![0; k];
        let mut t = idx;
        for slot in c.iter_mut() {
            *slot = t % p;
            t /= p;
        }
        let word = word(&basis, &c, &ring);
        for f in phi.elements() {
            coords.insert(word.mul(f, &ring), c.clone());
        }
    }
    if coords.len() != h.order() {
        return Err(Error::internal("coordinates on H / Phi(H) are not a bijection"));
    }

    // conjugation action on H / Phi(H); column j = coords(g b_j g^{-1})
    let cols: Vec<&Vector> = basis
        .iter()
        .map(|b| &coords[&g.mul(b, &ring).mul(gi, &ring)])
        .collect();
    let action = Mat::from_fn(k, k, |r, c| cols[c][r]);

    let mut eigen: Vec<Vector> = Vec::new();
    for lambda in 1..p {
        let shifted = action.sub(&Mat::scalar(k, lambda), &fp);
        eigen.extend(kernel(&shifted, &fp));
    }
    if eigen.len() != k {
        return Err(Error::internal("conjugation on H / Phi(H) is not diagonalizable"));
    }
    let lifts: Vec<Mat> = eigen.iter().map(|v| word(&basis, v, &ring)).collect();

    if k == 1 {
        let w = &lifts[0];
        let target = g.mul(w, &ring).mul(gi, &ring);
        let mut pw = Mat::identity(w.rows());
        let mut lambda = 0;
        while pw != target {
            pw = pw.mul(w, &ring);
            lambda += 1;
            if pw.is_identity() {
                return Err(Error::internal("g w g^{-1} is not a power of w"));
            }
        }
        out.push((w.clone(), lambda));
        return Ok(());
    }

    let mut first = phi.generators().to_vec();
    first.push(lifts[0].clone());
    let mut rest = phi.generators().to_vec();
    rest.extend(lifts[1..].iter().cloned());
    split(g, gi, &h.subgroup(&first)?, out)?;
    split(g, gi, &h.subgroup(&rest)?, out)?;
    Ok(())
}

fn word(basis: &[Mat], exps: &[u64], ring: &Zmod) -> Mat {
    let m = basis[0].rows();
    basis
        .iter()
        .zip(exps)
        .fold(Mat::identity(m), |acc, (b, &e)| acc.mul(&b.pow(e, ring), ring))
}
