//! Finite matrix groups over `Z/p^n`: closure, orders, Sylow subgroups,
//! normalizers, Frattini subgroups and the constructive lemmas built on them.

mod decompose;
mod frattini;
mod lifting;
mod quotient;
mod sylow;

pub use decompose::{decompose_generators, Decomposition};
pub use frattini::{frattini, frattini_by_maximal_subgroups};
pub use lifting::{
    corollary14_element, corollary14_element_from, factorial_gcd, lift_normalizer,
    quotient_generators, repunit_gcd, Corollary14Report,
};
pub use quotient::QuotientGroup;
pub use sylow::{normalizer, p_part, p_sylow};

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::ringmat::{Mat, ModuleSpec, Zmod};

/// Default bound on the number of elements a closure may produce.
pub const DEFAULT_CAP: usize = 500_000;

/// Index-level view of a finite group, enough for cohomology computations.
pub trait FiniteGroup {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    /// Element indices of the generators.
    fn generator_indices(&self) -> &[usize];
    /// Index of `generators[gen] * elements[elem]`.
    fn left_gen(&self, gen: usize, elem: usize) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
}

/// Finite subgroup of `GL_rank(Z/p^n)` with its full element list.
///
/// Elements are ordered breadth-first from the identity by left
/// multiplication with the generators, each layer sorted lexicographically.
#[derive(Clone, Debug)]
pub struct MatGroup {
    spec: ModuleSpec,
    ring: Zmod,
    generators: Vec<Mat>,
    elements: Vec<Mat>,
    index: HashMap<Mat, usize>,
    gen_index: Vec<usize>,
    left: Vec<Vec<usize>>,
}

/// Multiplicative order of an invertible matrix.
pub fn element_order(a: &Mat, ring: &Zmod) -> u64 {
    assert!(a.is_square());
    let mut k = 1;
    let mut cur = a.clone();
    while !cur.is_identity() {
        cur = cur.mul(a, ring);
        k += 1;
    }
    k
}

impl MatGroup {
    /// Closes `generators` under multiplication, failing once more than `cap`
    /// elements appear.
    pub fn close(spec: ModuleSpec, generators: &[Mat], cap: usize) -> Result<MatGroup> {
        let ring = spec.ring();
        let m = spec.rank;
        let mut gens = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.rows() != m || g.cols() != m {
                return Err(Error::dims(
                    format!("{m}x{m} generator"),
                    format!("{}x{} for generator {}", g.rows(), g.cols(), i + 1),
                ));
            }
            let g = g.reduce_to(&ring);
            if !g.is_invertible(&ring) {
                return Err(Error::input(format!("generator {} not invertible", i + 1)));
            }
            gens.push(g);
        }

        let id = Mat::identity(m);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut left: Vec<Vec<usize>> = Vec::new();
        let mut layer: Vec<usize> = vec![0];
        while !layer.is_empty() {
            let mut fresh = BTreeSet::new();
            let mut products: Vec<Vec<Mat>> = Vec::with_capacity(layer.len());
            for &e in &layer {
                let row: Vec<Mat> = gens.iter().map(|s| s.mul(&elements[e], &ring)).collect();
                for t in &row {
                    if !index.contains_key(t) {
                        fresh.insert(t.clone());
                    }
                }
                products.push(row);
            }
            if elements.len() + fresh.len() > cap {
                return Err(Error::CapExceeded { cap });
            }
            let start = elements.len();
            for t in fresh {
                index.insert(t.clone(), elements.len());
                elements.push(t);
            }
            for (&e, row) in layer.iter().zip(products) {
                debug_assert_eq!(left.len(), e);
                left.push(row.iter().map(|t| index[t]).collect());
            }
            layer = (start..elements.len()).collect();
        }
        let gen_index = gens.iter().map(|g| index[g]).collect();
        Ok(MatGroup {
            spec,
            ring,
            generators: gens,
            elements,
            index,
            gen_index,
            left,
        })
    }

    pub fn trivial(spec: ModuleSpec) -> MatGroup {
        MatGroup::close(spec, &[], 1).expect("trivial group closes")
    }

    /// Subgroup generated by `generators`, which must lie in `self`.
    pub fn subgroup(&self, generators: &[Mat]) -> Result<MatGroup> {
        if let Some(i) = generators.iter().position(|g| !self.contains(g)) {
            return Err(Error::input(format!(
                "generator {} is not an element of the ambient group",
                i + 1
            )));
        }
        MatGroup::close(self.spec, generators, self.order())
    }

    /// Subgroup generated by the elements satisfying `pred`. The caller
    /// guarantees those elements form a subgroup when that matters.
    pub fn subgroup_where(&self, mut pred: impl FnMut(&Mat) -> bool) -> MatGroup {
        let mut sub = MatGroup::trivial(self.spec);
        for x in &self.elements {
            if pred(x) && !sub.contains(x) {
                let mut gens = sub.generators.clone();
                gens.push(x.clone());
                sub = MatGroup::close(self.spec, &gens, self.order()).expect("inside ambient group");
            }
        }
        sub
    }

    pub fn spec(&self) -> ModuleSpec {
        self.spec
    }

    pub fn ring(&self) -> &Zmod {
        &self.ring
    }

    pub fn generators(&self) -> &[Mat] {
        &self.generators
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Mat {
        &self.elements[i]
    }

    pub fn index_of(&self, a: &Mat) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn contains(&self, a: &Mat) -> bool {
        self.index.contains_key(a)
    }

    pub fn is_subgroup_of(&self, other: &MatGroup) -> bool {
        self.spec == other.spec && self.generators.iter().all(|g| other.contains(g))
    }

    /// Same element set.
    pub fn same_elements(&self, other: &MatGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    pub fn inverse(&self, a: &Mat) -> Mat {
        a.inverse(&self.ring).expect("group elements are invertible")
    }

    pub fn conjugate(&self, x: &Mat, h: &Mat) -> Mat {
        x.mul(h, &self.ring).mul(&self.inverse(x), &self.ring)
    }

    /// Whether `x H x^{-1} = H` for the subgroup `h`.
    pub fn normalizes(&self, x: &Mat, h: &MatGroup) -> bool {
        let xi = self.inverse(x);
        h.generators()
            .iter()
            .all(|g| h.contains(&x.mul(g, &self.ring).mul(&xi, &self.ring)))
    }

    pub fn is_normal_in(&self, g: &MatGroup) -> bool {
        self.is_subgroup_of(g) && g.generators().iter().all(|x| g.normalizes(x, self))
    }

    pub fn element_order(&self, a: &Mat) -> u64 {
        element_order(a, &self.ring)
    }

    /// Orders of all elements, in element order.
    pub fn element_orders(&self) -> Vec<u64> {
        self.elements.iter().map(|e| self.element_order(e)).collect()
    }

    pub fn is_p_group(&self) -> bool {
        let mut o = self.order();
        while o % self.spec.p as usize == 0 {
            o /= self.spec.p as usize;
        }
        o == 1
    }

    pub fn is_abelian(&self) -> bool {
        let r = &self.ring;
        self.generators.iter().all(|a| {
            self.generators
                .iter()
                .all(|b| a.mul(b, r) == b.mul(a, r))
        })
    }

    /// Image under reduction to `Z/p^level`.
    pub fn reduce(&self, level: u32) -> Result<MatGroup> {
        let spec = self.spec.with_exponent(level)?;
        let ring = spec.ring();
        let gens: Vec<Mat> = self.generators.iter().map(|g| g.reduce_to(&ring)).collect();
        MatGroup::close(spec, &gens, self.order())
    }

    /// Kernel of reduction to `Z/p^level`: elements congruent to the identity.
    pub fn congruence_kernel(&self, level: u32) -> Result<MatGroup> {
        let ring = self.spec.with_exponent(level)?.ring();
        Ok(self.subgroup_where(|x| x.reduce_to(&ring).is_identity()))
    }
}

impl FiniteGroup for MatGroup {
    fn order(&self) -> usize {
        self.elements.len()
    }

    fn identity(&self) -> usize {
        0
    }

    fn generator_indices(&self) -> &[usize] {
        &self.gen_index
    }

    fn left_gen(&self, gen: usize, elem: usize) -> usize {
        self.left[elem][gen]
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let prod = self.elements[a].mul(&self.elements[b], &self.ring);
        self.index[&prod]
    }
}

impl MatGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: u64, n: u32, rank: usize) -> ModuleSpec {
        ModuleSpec::new(p, n, rank).unwrap()
    }

    #[test]
    fn identity_generates_trivial_group() {
        let s = spec(5, 2, 2);
        let g = MatGroup::close(s, &[Mat::identity(2)], 10).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn order_three_generator_mod_25() {
        let s = spec(5, 2, 2);
        let r = s.ring();
        let g = Mat::from_rows(&r, &[vec![1, -3], vec![1, -2]]).unwrap();
        assert_eq!(element_order(&g, &r), 3);
        assert_eq!(MatGroup::close(s, &[g], 10).unwrap().order(), 3);
    }

    #[test]
    fn element_orders() {
        let r = Zmod::new(5, 1).unwrap();
        assert_eq!(element_order(&Mat::identity(2), &r), 1);
        assert_eq!(element_order(&Mat::diag(&r, &[2, 1]), &r), 4);
    }

    #[test]
    fn cap_is_enforced() {
        let s = spec(5, 1, 2);
        let r = s.ring();
        let u = Mat::from_rows(&r, &[vec![1, 1], vec![0, 1]]).unwrap();
        let err = MatGroup::close(s, &[u, Mat::diag(&r, &[2, 1])], 10).unwrap_err();
        assert_eq!(err, Error::CapExceeded { cap: 10 });
    }

    #[test]
    fn non_invertible_generator_rejected() {
        let s = spec(5, 2, 2);
        let r = s.ring();
        let bad = Mat::diag(&r, &[5, 1]);
        let err = MatGroup::close(s, &[Mat::identity(2), bad], 10).unwrap_err();
        assert_eq!(err, Error::Input("generator 2 not invertible".into()));
    }

    #[test]
    fn left_table_agrees_with_products() {
        let s = spec(3, 1, 2);
        let r = s.ring();
        let a = Mat::from_rows(&r, &[vec![1, 1], vec![0, 1]]).unwrap();
        let b = Mat::from_rows(&r, &[vec![0, 1], vec![1, 0]]).unwrap();
        let g = MatGroup::close(s, &[a, b], 100).unwrap();
        for e in 0..g.order() {
            for (k, gi) in g.generator_indices().iter().enumerate() {
                assert_eq!(g.left_gen(k, e), FiniteGroup::mul(&g, *gi, e));
            }
        }
        assert_eq!(g.element(0), &Mat::identity(2));
    }
}
