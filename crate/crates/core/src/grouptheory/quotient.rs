use super::{FiniteGroup, MatGroup};
use crate::error::{Error, Result};
use crate::ringmat::Mat;

/// `G / N` for a normal subgroup `N`, with a materialized Cayley table.
///
/// Cosets are numbered in order of their first element in `G`, which is
/// also the coset representative. Coset 0 is `N`.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    reps: Vec<usize>,
    coset_of: Vec<usize>,
    table: Vec<usize>,
    gen_index: Vec<usize>,
}

impl QuotientGroup {
    pub fn new(g: &MatGroup, n: &MatGroup) -> Result<Self> {
        if !n.is_normal_in(g) {
            return Err(Error::precondition("N is not a normal subgroup of G"));
        }
        let r = g.ring();
        let mut coset_of = vec![usize::MAX; g.order()];
        let mut reps = Vec::with_capacity(g.order() / n.order());
        for (i, x) in g.elements().iter().enumerate() {
            if coset_of[i] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(i);
            for y in n.elements() {
                let j = g.index_of(&x.mul(y, r)).expect("closed");
                coset_of[j] = c;
            }
        }
        let k = reps.len();
        let mut table = Vec::with_capacity(k * k);
        for &a in &reps {
            for &b in &reps {
                let prod = g.element(a).mul(g.element(b), r);
                table.push(coset_of[g.index_of(&prod).expect("closed")]);
            }
        }
        let gen_index = g
            .generators()
            .iter()
            .map(|s| coset_of[g.index_of(s).expect("generator")])
            .collect();
        Ok(QuotientGroup {
            reps,
            coset_of,
            table,
            gen_index,
        })
    }

    /// Index in `G` of the representative of coset `c`.
    pub fn representative(&self, c: usize) -> usize {
        self.reps[c]
    }

    /// Coset containing the element of `G` with index `elem`.
    pub fn coset_of(&self, elem: usize) -> usize {
        self.coset_of[elem]
    }

    pub fn representative_mat<'a>(&self, g: &'a MatGroup, c: usize) -> &'a Mat {
        g.element(self.reps[c])
    }

    /// Order of coset `c` in the quotient.
    pub fn element_order(&self, c: usize) -> usize {
        let mut k = 1;
        let mut cur = c;
        while cur != 0 {
            cur = self.mul(cur, c);
            k += 1;
        }
        k
    }
}

impl FiniteGroup for QuotientGroup {
    fn order(&self) -> usize {
        self.reps.len()
    }

    fn identity(&self) -> usize {
        0
    }

    fn generator_indices(&self) -> &[usize] {
        &self.gen_index
    }

    fn left_gen(&self, gen: usize, elem: usize) -> usize {
        self.mul(self.gen_index[gen], elem)
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.reps.len() + b]
    }
}
