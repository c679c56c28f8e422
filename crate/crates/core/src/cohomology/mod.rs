//! First cohomology and first local cohomology of a finite group acting on
//! `(Z/p^n)^m`.
//!
//! A cocycle is determined by its values on the generators. Walking the
//! group breadth-first expresses every value `Z_e` as `L_e z`, where `z`
//! stacks the generator values; each edge that closes a cycle contributes the
//! rows of `L_{se} - (E_s + A_s L_e)` to the constraint system, whose kernel
//! is `Z^1`.

mod infres;
mod torsion;

pub use infres::{inflate, inflation_restriction_check, restrict, InfResReport};
pub use torsion::{
    proposition23_check, ratio_condition, torsion_isomorphism_check, Prop23Verdict,
    TorsionReport,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grouptheory::{FiniteGroup, MatGroup, QuotientGroup};
use crate::ringmat::{
    kernel, quotient_structure, solve, vecops, AbelianStructure, Howell, Mat, ModuleSpec, RowSpan,
    Vector, Zmod,
};

/// A finite group together with a linear action on `(Z/p^n)^rank`, given as
/// one matrix per element index.
pub struct GModule<'g> {
    group: &'g dyn FiniteGroup,
    spec: ModuleSpec,
    action: Vec<Mat>,
}

impl<'g> GModule<'g> {
    /// `M = (Z/p^n)^rank` with `G` acting through its own matrices.
    pub fn natural(g: &'g MatGroup) -> Self {
        GModule {
            group: g,
            spec: g.spec(),
            action: g.elements().to_vec(),
        }
    }

    /// `(Z/p^level)^rank` with `G` acting through reduction. For `level = 1`
    /// this is `M[p]`.
    pub fn reduced(g: &'g MatGroup, level: u32) -> Result<Self> {
        let spec = g.spec().with_exponent(level)?;
        let ring = spec.ring();
        Ok(GModule {
            group: g,
            spec,
            action: g.elements().iter().map(|x| x.reduce_to(&ring)).collect(),
        })
    }

    /// The quotient `G / N` acting on `(Z/p^level)^rank` through coset
    /// representatives; `N` must act trivially at that level.
    pub fn on_quotient(q: &'g QuotientGroup, g: &MatGroup, level: u32) -> Result<Self> {
        let spec = g.spec().with_exponent(level)?;
        let ring = spec.ring();
        let action: Vec<Mat> = (0..q.order())
            .map(|c| q.representative_mat(g, c).reduce_to(&ring))
            .collect();
        for (i, x) in g.elements().iter().enumerate() {
            if x.reduce_to(&ring) != action[q.coset_of(i)] {
                return Err(Error::precondition(
                    "the normal subgroup does not act trivially on the module",
                ));
            }
        }
        Ok(GModule {
            group: q,
            spec,
            action,
        })
    }

    /// Arbitrary action, checked to be a homomorphism on generators.
    pub fn with_action(group: &'g dyn FiniteGroup, spec: ModuleSpec, action: Vec<Mat>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::dims(format!("{} action matrices", group.order()), action.len()));
        }
        let ring = spec.ring();
        for a in &action {
            if a.rows() != spec.rank || a.cols() != spec.rank {
                return Err(Error::dims(
                    format!("{0}x{0} action matrix", spec.rank),
                    format!("{}x{}", a.rows(), a.cols()),
                ));
            }
        }
        if !action[group.identity()].is_identity() {
            return Err(Error::input("identity does not act trivially"));
        }
        for (s, &gi) in group.generator_indices().iter().enumerate() {
            for e in 0..group.order() {
                if action[group.left_gen(s, e)] != action[gi].mul(&action[e], &ring) {
                    return Err(Error::input("action is not a homomorphism"));
                }
            }
        }
        Ok(GModule { group, spec, action })
    }

    pub fn group(&self) -> &'g dyn FiniteGroup {
        self.group
    }

    pub fn spec(&self) -> ModuleSpec {
        self.spec
    }

    pub fn ring(&self) -> Zmod {
        self.spec.ring()
    }

    pub fn action(&self, elem: usize) -> &Mat {
        &self.action[elem]
    }
}

/// A 1-cocycle stored by its value on every group element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cocycle {
    spec: ModuleSpec,
    values: Vec<Vector>,
}

impl Cocycle {
    pub fn new(spec: ModuleSpec, values: Vec<Vector>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| v.len() != spec.rank) {
            return Err(Error::dims(format!("values of length {}", spec.rank), v.len()));
        }
        let q = spec.modulus();
        if values.iter().flatten().any(|&x| x >= q) {
            return Err(Error::input("cocycle values must be reduced"));
        }
        Ok(Cocycle { spec, values })
    }

    pub fn zero(spec: ModuleSpec, order: usize) -> Self {
        Cocycle {
            spec,
            values: vec![vec![0; spec.rank]; order],
        }
    }

    pub fn spec(&self) -> ModuleSpec {
        self.spec
    }

    pub fn values(&self) -> &[Vector] {
        &self.values
    }

    pub fn value(&self, elem: usize) -> &[u64] {
        &self.values[elem]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| vecops::is_zero(v))
    }

    pub fn scale(&self, c: u64) -> Cocycle {
        let r = self.spec.ring();
        Cocycle {
            spec: self.spec,
            values: self.values.iter().map(|v| vecops::scale(v, c, &r)).collect(),
        }
    }
}

/// `H^1` or `H^1_loc` with one representative cocycle per invariant factor.
#[derive(Clone, Debug, Serialize)]
pub struct CohomGroup {
    pub structure: AbelianStructure,
    pub representatives: Vec<Cocycle>,
}

impl CohomGroup {
    pub fn is_trivial(&self) -> bool {
        self.structure.is_trivial()
    }

    pub fn order(&self) -> u128 {
        self.structure.order()
    }
}

/// Per-element outcome of the local conditions.
#[derive(Clone, Debug, Serialize)]
pub struct LocalCheck {
    pub holds: bool,
    /// `m_sigma` with `Z_sigma = sigma m_sigma - m_sigma`, when one exists.
    pub witnesses: Vec<Option<Vector>>,
}

/// Linear-algebra model of `Z^1(G, M)` for one module.
pub struct Cohomology<'m, 'g> {
    module: &'m GModule<'g>,
    width: usize,
    maps: Vec<Mat>,
    constraints: Howell,
    z1: Vec<Vector>,
    b1: Vec<Vector>,
    b1_span: Howell,
}

impl<'m, 'g> Cohomology<'m, 'g> {
    pub fn new(module: &'m GModule<'g>) -> Result<Self> {
        let grp = module.group;
        let ring = module.ring();
        let m = module.spec.rank;
        let gens = grp.generator_indices();
        let k = gens.len();
        let width = k * m;

        let mut maps: Vec<Option<Mat>> = vec![None; grp.order()];
        maps[grp.identity()] = Some(Mat::zeros(m, width));
        let mut queue = std::collections::VecDeque::from([grp.identity()]);
        let mut span = RowSpan::new(&ring, width);
        while let Some(e) = queue.pop_front() {
            let le = maps[e].clone().expect("visited");
            for (s, &gi) in gens.iter().enumerate() {
                let t = grp.left_gen(s, e);
                let mut cand = module.action[gi].mul(&le, &ring);
                for i in 0..m {
                    let c = s * m + i;
                    cand.set(i, c, ring.add(cand.get(i, c), 1));
                }
                match &maps[t] {
                    None => {
                        maps[t] = Some(cand);
                        queue.push_back(t);
                    }
                    Some(lt) => {
                        let diff = lt.sub(&cand, &ring);
                        for row in diff.row_vecs() {
                            span.push(row);
                        }
                    }
                }
            }
        }
        let maps: Vec<Mat> = maps
            .into_iter()
            .map(|l| l.ok_or_else(|| Error::internal("group is not generated by its generators")))
            .collect::<Result<_>>()?;
        let constraints = span.finish();
        let z1 = kernel(&Mat::from_row_vecs(width, constraints.rows()), &ring);

        let mut b1 = Vec::with_capacity(m);
        for j in 0..m {
            let mut v = Vec::with_capacity(width);
            for &gi in gens {
                v.extend(module.action[gi].minus_identity(&ring).col(j));
            }
            b1.push(v);
        }
        let b1_span = Howell::new(&ring, width, b1.clone());
        Ok(Cohomology {
            module,
            width,
            maps,
            constraints,
            z1,
            b1,
            b1_span,
        })
    }

    pub fn module(&self) -> &GModule<'g> {
        self.module
    }

    /// Length of a generator-value vector.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Generators of `Z^1` as generator-value vectors.
    pub fn z1_generators(&self) -> &[Vector] {
        &self.z1
    }

    /// Generators of `B^1` as generator-value vectors.
    pub fn b1_generators(&self) -> &[Vector] {
        &self.b1
    }

    /// Linear map from generator values to the value at `elem`.
    pub fn value_map(&self, elem: usize) -> &Mat {
        &self.maps[elem]
    }

    pub fn z1_log_order(&self) -> u32 {
        Howell::new(&self.module.ring(), self.width, self.z1.clone()).log_order()
    }

    pub fn b1_log_order(&self) -> u32 {
        self.b1_span.log_order()
    }

    /// Whether a generator-value vector extends to a cocycle.
    pub fn is_cocycle_vector(&self, z: &[u64]) -> bool {
        let ring = self.module.ring();
        self.constraints
            .rows()
            .iter()
            .all(|row| row.iter().zip(z).fold(0, |acc, (&a, &b)| ring.add(acc, ring.mul(a, b))) == 0)
    }

    pub fn generator_values(&self, z: &Cocycle) -> Vector {
        self.module
            .group
            .generator_indices()
            .iter()
            .flat_map(|&g| z.value(g).to_vec())
            .collect()
    }

    /// The cocycle with the given generator values. The vector must satisfy
    /// the constraints for the result to be a cocycle.
    pub fn cocycle_from(&self, z: &[u64]) -> Cocycle {
        let ring = self.module.ring();
        Cocycle {
            spec: self.module.spec,
            values: self.maps.iter().map(|l| l.mul_vec(z, &ring)).collect(),
        }
    }

    /// `sigma -> sigma m - m`.
    pub fn coboundary(&self, m: &[u64]) -> Cocycle {
        let ring = self.module.ring();
        Cocycle {
            spec: self.module.spec,
            values: self
                .module
                .action
                .iter()
                .map(|a| a.minus_identity(&ring).mul_vec(m, &ring))
                .collect(),
        }
    }

    pub fn cocycle_space(&self) -> Vec<Cocycle> {
        self.z1.iter().map(|z| self.cocycle_from(z)).collect()
    }

    pub fn coboundaries(&self) -> Vec<Cocycle> {
        self.b1.iter().map(|z| self.cocycle_from(z)).collect()
    }

    pub fn h1(&self) -> Result<CohomGroup> {
        self.quotient_by_b1(&self.z1)
    }

    /// Generators of the cocycles satisfying the local conditions.
    ///
    /// `Z_sigma` lies in `Im(sigma - 1)` exactly when every `phi` with
    /// `phi (sigma - 1) = 0` kills it (double annihilators over `Z/p^n`), so
    /// each element adds the rows `phi L_sigma` to the constraints.
    pub fn z1_loc_generators(&self) -> Vec<Vector> {
        let ring = self.module.ring();
        let mut span = RowSpan::from_howell(self.constraints.clone());
        for (e, l) in self.maps.iter().enumerate() {
            let d = self.module.action[e].minus_identity(&ring);
            for phi in kernel(&d.transpose(), &ring) {
                span.push(l.transpose().mul_vec(&phi, &ring));
            }
        }
        let rows = span.finish();
        kernel(&Mat::from_row_vecs(self.width, rows.rows()), &ring)
    }

    pub fn h1_loc(&self) -> Result<CohomGroup> {
        let loc = self.z1_loc_generators();
        let ring = self.module.ring();
        let loc_span = Howell::new(&ring, self.width, loc.clone());
        if !loc_span.contains_all(&self.b1) {
            return Err(Error::internal("coboundaries fail the local conditions"));
        }
        let z1_span = Howell::new(&ring, self.width, self.z1.clone());
        if !z1_span.contains_all(&loc) {
            return Err(Error::internal("local cocycles outside Z^1"));
        }
        self.quotient_by_b1(&loc)
    }

    fn quotient_by_b1(&self, ambient: &[Vector]) -> Result<CohomGroup> {
        let ring = self.module.ring();
        let structure = quotient_structure(ambient, &self.b1, self.width, &ring)?;
        let representatives = structure
            .generators
            .iter()
            .map(|z| self.cocycle_from(z))
            .collect();
        Ok(CohomGroup {
            structure,
            representatives,
        })
    }

    fn check_shape(&self, z: &Cocycle) -> Result<()> {
        if z.spec != self.module.spec || z.values.len() != self.maps.len() {
            return Err(Error::input("cocycle does not match the module"));
        }
        Ok(())
    }

    /// Checks `Z_1 = 0` and `Z_{s tau} = Z_s + s Z_tau` for generators `s`
    /// and all `tau`, which implies the identity for all pairs.
    pub fn is_cocycle(&self, z: &Cocycle) -> bool {
        if self.check_shape(z).is_err() {
            return false;
        }
        let grp = self.module.group;
        let ring = self.module.ring();
        if !vecops::is_zero(z.value(grp.identity())) {
            return false;
        }
        grp.generator_indices().iter().enumerate().all(|(s, &gi)| {
            (0..grp.order()).all(|t| {
                let rhs = vecops::add(
                    z.value(gi),
                    &self.module.action[gi].mul_vec(z.value(t), &ring),
                    &ring,
                );
                z.value(grp.left_gen(s, t)) == rhs.as_slice()
            })
        })
    }

    /// The cocycle identity over all pairs.
    pub fn is_cocycle_exhaustive(&self, z: &Cocycle) -> bool {
        if self.check_shape(z).is_err() {
            return false;
        }
        let grp = self.module.group;
        let ring = self.module.ring();
        (0..grp.order()).all(|a| {
            (0..grp.order()).all(|b| {
                let rhs = vecops::add(
                    z.value(a),
                    &self.module.action[a].mul_vec(z.value(b), &ring),
                    &ring,
                );
                z.value(grp.mul(a, b)) == rhs.as_slice()
            })
        })
    }

    /// Some `m` with `Z_sigma = sigma m - m` for all `sigma`.
    pub fn is_coboundary(&self, z: &Cocycle) -> Result<Option<Vector>> {
        if !self.is_cocycle(z) {
            return Err(Error::input("not a cocycle"));
        }
        let ring = self.module.ring();
        let m = self.module.spec.rank;
        let gens = self.module.group.generator_indices();
        let mut rows = Vec::with_capacity(gens.len() * m);
        for &gi in gens {
            rows.extend(self.module.action[gi].minus_identity(&ring).row_vecs());
        }
        if rows.is_empty() {
            return Ok(Some(vec![0; m]));
        }
        let stacked = Mat::from_row_vecs(m, &rows);
        solve(&stacked, &self.generator_values(z), &ring)
    }

    pub fn satisfies_local_conditions(&self, z: &Cocycle) -> Result<LocalCheck> {
        if !self.is_cocycle(z) {
            return Err(Error::input("not a cocycle"));
        }
        let ring = self.module.ring();
        let witnesses = self
            .module
            .action
            .iter()
            .zip(&z.values)
            .map(|(a, v)| solve(&a.minus_identity(&ring), v, &ring))
            .collect::<Result<Vec<_>>>()?;
        Ok(LocalCheck {
            holds: witnesses.iter().all(Option::is_some),
            witnesses,
        })
    }

    /// Order of the class of `z` in `H^1`.
    pub fn class_order(&self, z: &Cocycle) -> Result<u128> {
        if !self.is_cocycle(z) {
            return Err(Error::input("not a cocycle"));
        }
        let ring = self.module.ring();
        let mut v = self.generator_values(z);
        let mut order = 1u128;
        while !self.b1_span.contains(&v) {
            v = vecops::scale(&v, ring.p(), &ring);
            order *= ring.p() as u128;
        }
        Ok(order)
    }

    /// Whether the class of `z` lies in the span of `classes` plus `B^1`.
    pub fn in_span_mod_b1(&self, z: &[u64], classes: &[Vector]) -> bool {
        let mut rows = self.b1.clone();
        rows.extend(classes.iter().cloned());
        Howell::new(&self.module.ring(), self.width, rows).contains(z)
    }
}

/// Generators of `Z^1(G, M)` for the natural module.
pub fn cocycle_space(g: &MatGroup) -> Result<Vec<Cocycle>> {
    let m = GModule::natural(g);
    Ok(Cohomology::new(&m)?.cocycle_space())
}

/// Generators of `B^1(G, M)` for the natural module.
pub fn coboundaries(g: &MatGroup) -> Result<Vec<Cocycle>> {
    let m = GModule::natural(g);
    Ok(Cohomology::new(&m)?.coboundaries())
}

/// `H^1(G, M)` for the natural module.
pub fn h1(g: &MatGroup) -> Result<CohomGroup> {
    let m = GModule::natural(g);
    Cohomology::new(&m)?.h1()
}

/// `H^1_loc(G, M)` for the natural module.
pub fn h1_loc(g: &MatGroup) -> Result<CohomGroup> {
    let m = GModule::natural(g);
    Cohomology::new(&m)?.h1_loc()
}
