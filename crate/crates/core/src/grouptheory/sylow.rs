use super::MatGroup;
use crate::error::{Error, Result};

/// Splits `order = p^a * m` with `p` not dividing `m`; returns `(a, p^a)`.
pub fn p_part(order: usize, p: u64) -> (u32, usize) {
    let p = p as usize;
    let (mut a, mut pa, mut rest) = (0, 1, order);
    while rest % p == 0 {
        rest /= p;
        pa *= p;
        a += 1;
    }
    (a, pa)
}

/// `{x in G : x H x^{-1} = H}`.
pub fn normalizer(g: &MatGroup, h: &MatGroup) -> Result<MatGroup> {
    if !h.is_subgroup_of(g) {
        return Err(Error::input("H is not a subgroup of G"));
    }
    Ok(g.subgroup_where(|x| g.normalizes(x, h)))
}

fn is_p_power(mut k: u64, p: u64) -> bool {
    while k % p == 0 {
        k /= p;
    }
    k == 1
}

/// A Sylow p-subgroup by normalizer ascent.
///
/// Starts from a p-element of largest order and, while the subgroup `P` is
/// short of the full p-part, adjoins the first `y` in `N_G(P)` with `y` not
/// in `P` and `y^p` in `P`. Such a `y` exists because `p` divides
/// `[N_G(P) : P]` whenever `P` is not Sylow.
pub fn p_sylow(g: &MatGroup) -> Result<MatGroup> {
    let p = g.spec().p;
    let (_, target) = p_part(g.order(), p);
    if target == 1 {
        return Ok(MatGroup::trivial(g.spec()));
    }
    let orders = g.element_orders();
    let start = orders
        .iter()
        .enumerate()
        .filter(|(_, &o)| o > 1 && is_p_power(o, p))
        .max_by_key(|(i, &o)| (o, std::cmp::Reverse(*i)))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::internal("p divides |G| but no p-element found"))?;
    let mut sylow = g.subgroup(&[g.element(start).clone()])?;
    let ring = *g.ring();
    while sylow.order() < target {
        let norm = normalizer(g, &sylow)?;
        let y = norm
            .elements()
            .iter()
            .filter(|y| !sylow.contains(y))
            .find(|y| sylow.contains(&y.pow(p, &ring)))
            .cloned()
            .ok_or_else(|| Error::internal("normalizer ascent stalled"))?;
        let mut gens = sylow.generators().to_vec();
        gens.push(y);
        sylow = g.subgroup(&gens)?;
    }
    if sylow.order() != target {
        return Err(Error::internal("Sylow subgroup has the wrong order"));
    }
    Ok(sylow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringmat::{Mat, ModuleSpec};

    #[test]
    fn p_part_examples() {
        assert_eq!(p_part(75, 5), (2, 25));
        assert_eq!(p_part(3, 5), (0, 1));
        assert_eq!(p_part(480, 2), (5, 32));
    }

    #[test]
    fn cyclic_of_order_three_has_trivial_5_sylow() {
        let s = ModuleSpec::new(5, 2, 2).unwrap();
        let r = s.ring();
        let g = Mat::from_rows(&r, &[vec![1, -3], vec![1, -2]]).unwrap();
        let grp = MatGroup::close(s, &[g], 10).unwrap();
        assert_eq!(p_sylow(&grp).unwrap().order(), 1);
    }

    #[test]
    fn borel_mod_5() {
        let s = ModuleSpec::new(5, 1, 2).unwrap();
        let r = s.ring();
        let u = Mat::from_rows(&r, &[vec![1, 1], vec![0, 1]]).unwrap();
        let grp = MatGroup::close(s, &[u, Mat::diag(&r, &[2, 1])], 1000).unwrap();
        assert_eq!(grp.order(), 20);
        let syl = p_sylow(&grp).unwrap();
        assert_eq!(syl.order(), 5);
        assert!(syl.is_subgroup_of(&grp));
    }

    #[test]
    fn normalizer_brute_force_in_gl2_f3() {
        let s = ModuleSpec::new(3, 1, 2).unwrap();
        let r = s.ring();
        let u = Mat::from_rows(&r, &[vec![1, 1], vec![0, 1]]).unwrap();
        let w = Mat::from_rows(&r, &[vec![0, 1], vec![1, 0]]).unwrap();
        let g = MatGroup::close(s, &[u.clone(), w], 1000).unwrap();
        let h = g.subgroup(&[u]).unwrap();
        let n = normalizer(&g, &h).unwrap();
        let brute: Vec<&Mat> = g
            .elements()
            .iter()
            .filter(|x| {
                h.elements()
                    .iter()
                    .all(|y| h.contains(&g.conjugate(x, y)))
            })
            .collect();
        assert_eq!(n.order(), brute.len());
        assert!(brute.iter().all(|x| n.contains(x)));
    }

    #[test]
    fn normalizer_of_whole_group() {
        let s = ModuleSpec::new(3, 1, 2).unwrap();
        let r = s.ring();
        let u = Mat::from_rows(&r, &[vec![1, 1], vec![0, 1]]).unwrap();
        let g = MatGroup::close(s, &[u, Mat::diag(&r, &[2, 1])], 100).unwrap();
        assert_eq!(normalizer(&g, &g).unwrap().order(), g.order());
    }

    #[test]
    fn normalizer_rejects_non_subgroup() {
        let s = ModuleSpec::new(3, 1, 2).unwrap();
        let r = s.ring();
        let g = MatGroup::close(s, &[Mat::diag(&r, &[2, 1])], 100).unwrap();
        let h = MatGroup::close(s, &[Mat::diag(&r, &[1, 2])], 100).unwrap();
        assert!(normalizer(&g, &h).is_err());
    }
}
