//! Symplectic similitudes for the standard form `J = [[0, I], [-I, 0]]`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grouptheory::MatGroup;
use crate::ringmat::{char_poly, is_prime, kernel, Howell, Mat, ModuleSpec, Vector, Zmod};

/// Largest number of subspaces [`invariant_subspaces`] will enumerate.
pub const SUBSPACE_CAP: u128 = 5000;

/// `(Z/p^n)^{2d}` with the standard alternating form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymplecticSpace {
    spec: ModuleSpec,
    form: Mat,
}

impl SymplecticSpace {
    pub fn new(spec: ModuleSpec) -> Result<Self> {
        if spec.rank == 0 || spec.rank % 2 != 0 {
            return Err(Error::input(format!(
                "symplectic rank must be positive and even, got {}",
                spec.rank
            )));
        }
        let d = spec.rank / 2;
        let minus_one = spec.ring().neg(1);
        let form = Mat::from_fn(spec.rank, spec.rank, |r, c| {
            if c == r + d {
                1
            } else if r == c + d {
                minus_one
            } else {
                0
            }
        });
        Ok(SymplecticSpace { spec, form })
    }

    pub fn spec(&self) -> ModuleSpec {
        self.spec
    }

    pub fn ring(&self) -> Zmod {
        self.spec.ring()
    }

    /// Half the rank.
    pub fn d(&self) -> usize {
        self.spec.rank / 2
    }

    pub fn form(&self) -> &Mat {
        &self.form
    }

    /// `<x, y> = x^T J y`.
    pub fn pairing(&self, x: &[u64], y: &[u64]) -> u64 {
        let r = self.ring();
        let jy = self.form.mul_vec(y, &r);
        x.iter().zip(&jy).fold(0, |acc, (&a, &b)| r.add(acc, r.mul(a, b)))
    }
}

/// A similitude together with its multiplier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimilitudeWitness {
    pub element: Mat,
    pub multiplier: u64,
}

impl SimilitudeWitness {
    pub fn new(a: &Mat, space: &SymplecticSpace) -> Option<Self> {
        similitude_multiplier(a, space).map(|multiplier| SimilitudeWitness {
            element: a.clone(),
            multiplier,
        })
    }
}

/// `nu` with `A^T J A = nu J`, if `A` is a similitude.
pub fn similitude_multiplier(a: &Mat, space: &SymplecticSpace) -> Option<u64> {
    let r = space.ring();
    let m = space.spec.rank;
    if a.rows() != m || a.cols() != m {
        return None;
    }
    let g = a.transpose().mul(&space.form, &r).mul(a, &r);
    let nu = g.get(0, space.d());
    if !r.is_unit(nu) || g != space.form.scale(nu, &r) {
        return None;
    }
    assert_eq!(
        a.det(&r),
        r.pow(nu, space.d() as u64),
        "determinant of a similitude must be nu^d"
    );
    Some(nu)
}

/// `p^4 (p-1)^3 (p+1)^2 (p^2+1)`.
pub fn gsp4_order(p: u64) -> Result<u128> {
    if p < 3 || !is_prime(p) {
        return Err(Error::input(format!("p must be an odd prime, got {p}")));
    }
    let p = p as u128;
    Ok(p.pow(4) * (p - 1).pow(3) * (p + 1).pow(2) * (p * p + 1))
}

/// Least primitive root modulo an odd prime.
pub fn primitive_root(p: u64) -> u64 {
    let r = Zmod::new(p, 1).expect("prime");
    let mut factors = Vec::new();
    let mut t = p - 1;
    let mut f = 2;
    while f * f <= t {
        if t % f == 0 {
            factors.push(f);
            while t % f == 0 {
                t /= f;
            }
        }
        f += 1;
    }
    if t > 1 {
        factors.push(t);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| r.pow(g, (p - 1) / q) != 1))
        .unwrap_or(1)
}

/// `x -> x + <x, v> v`.
pub fn transvection(v: &[u64], space: &SymplecticSpace) -> Mat {
    let r = space.ring();
    let jv = space.form.mul_vec(v, &r);
    let m = space.spec.rank;
    Mat::from_fn(m, m, |i, j| {
        let id = u64::from(i == j);
        r.add(id, r.mul(v[i], jv[j]))
    })
}

/// Transvections along `e_i` and `e_i + e_j`, plus `diag(nu, .., nu, 1, .., 1)`
/// with `nu` a primitive root mod `p`.
pub fn gsp_generators(space: &SymplecticSpace) -> Vec<Mat> {
    let m = space.spec.rank;
    let mut gens = Vec::new();
    for i in 0..m {
        let mut v = vec![0; m];
        v[i] = 1;
        gens.push(transvection(&v, space));
        for j in i + 1..m {
            let mut w = v.clone();
            w[j] = 1;
            gens.push(transvection(&w, space));
        }
    }
    let nu = primitive_root(space.spec.p) as i64;
    let d = space.d();
    let diag: Vec<i64> = (0..m).map(|i| if i < d { nu } else { 1 }).collect();
    gens.push(Mat::diag(&space.ring(), &diag));
    gens
}

/// Checks `c0 = nu^2` and `c1 = nu c3` for the characteristic polynomial
/// `x^4 + c3 x^3 + c2 x^2 + c1 x + c0`, which encode the pairing of
/// eigenvalues `lambda <-> nu / lambda`.
pub fn eigenvalue_pairing_check(a: &Mat, space: &SymplecticSpace) -> Result<bool> {
    if space.spec.rank != 4 {
        return Err(Error::precondition("pairing check needs rank 4"));
    }
    let nu = similitude_multiplier(a, space)
        .ok_or_else(|| Error::precondition("matrix is not a symplectic similitude"))?;
    let r = space.ring();
    let cp = char_poly(a, &r)?;
    let (c3, c1, c0) = (cp[1], cp[3], cp[4]);
    Ok(c0 == r.mul(nu, nu) && c1 == r.mul(nu, c3))
}

/// A subspace of `F_p^m` given by its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Subspace {
    pub basis: Vec<Vector>,
}

impl Subspace {
    /// Span of `vectors` over `F_p`.
    pub fn span(vectors: &[Vector], width: usize, field: &Zmod) -> Self {
        Subspace {
            basis: Howell::new(field, width, vectors.to_vec()).into_rows(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[u64], field: &Zmod) -> bool {
        let width = v.len();
        Howell::new(field, width, self.basis.clone()).contains(v)
    }
}

fn binomial_q(m: usize, k: usize, p: u128) -> u128 {
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= p.pow((m - i) as u32) - 1;
        den *= p.pow((i + 1) as u32) - 1;
    }
    num / den
}

fn field_of(spec: ModuleSpec) -> Result<Zmod> {
    if spec.n != 1 {
        return Err(Error::precondition("subspace computations need n = 1"));
    }
    Ok(spec.ring())
}

/// All `dim`-dimensional subspaces stable under every generator of `g`.
pub fn invariant_subspaces(g: &MatGroup, dim: usize) -> Result<Vec<Subspace>> {
    let spec = g.spec();
    let field = field_of(spec)?;
    let m = spec.rank;
    if dim == 0 || dim >= m {
        return Err(Error::input(format!("dimension must lie in 1..{m}")));
    }
    let count = binomial_q(m, dim, spec.p as u128);
    if count > SUBSPACE_CAP {
        return Err(Error::CapExceeded {
            cap: SUBSPACE_CAP as usize,
        });
    }
    let mut out = Vec::new();
    for pivots in combinations(m, dim) {
        // free positions: right of the row's pivot, outside pivot columns
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| {
                (c + 1..m)
                    .filter(|j| !pivots.contains(j))
                    .map(move |j| (i, j))
            })
            .collect();
        let total = spec.p.pow(free.len() as u32);
        for idx in 0..total {
            let mut basis: Vec<Vector> = pivots
                .iter()
                .map(|&c| {
                    let mut v = vec![0; m];
                    v[c] = 1;
                    v
                })
                .collect();
            let mut t = idx;
            for &(i, j) in &free {
                basis[i][j] = t % spec.p;
                t /= spec.p;
            }
            let howell = Howell::new(&field, m, basis.clone());
            let stable = g.generators().iter().all(|a| {
                basis
                    .iter()
                    .all(|v| howell.contains(&a.mul_vec(v, &field)))
            });
            if stable {
                out.push(Subspace { basis });
            }
        }
    }
    Ok(out)
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// `{w : <v, w> = 0 for all v in V}`.
pub fn perp(v: &Subspace, space: &SymplecticSpace) -> Result<Subspace> {
    let field = field_of(space.spec)?;
    let m = space.spec.rank;
    if v.basis.is_empty() {
        let id: Vec<Vector> = Mat::identity(m).row_vecs();
        return Ok(Subspace::span(&id, m, &field));
    }
    let b = Mat::from_row_vecs(m, &v.basis);
    let gens = kernel(&b.mul(&space.form, &field), &field);
    let w = Subspace::span(&gens, m, &field);
    if w.dim() + v.dim() != m {
        return Err(Error::internal("perp has the wrong dimension"));
    }
    Ok(w)
}

/// Whether `perp(V)` is stable under `g` (expected whenever `V` is).
pub fn perp_is_stable(v: &Subspace, g: &MatGroup, space: &SymplecticSpace) -> Result<bool> {
    let field = field_of(space.spec)?;
    let w = perp(v, space)?;
    Ok(g.generators()
        .iter()
        .all(|a| w.basis.iter().all(|x| w.contains(&a.mul_vec(x, &field), &field))))
}

/// `|G / (G ∩ scalars)|`.
pub fn projective_order(g: &MatGroup) -> usize {
    let scalars = g.elements().iter().filter(|x| x.as_scalar().is_some()).count();
    g.order() / scalars
}

/// Multipliers of every generator, or an error if one is not a similitude.
pub fn generator_multipliers(g: &MatGroup, space: &SymplecticSpace) -> Result<Vec<u64>> {
    g.generators()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            similitude_multiplier(a, space).ok_or_else(|| {
                Error::input(format!("generator {} is not a symplectic similitude", i + 1))
            })
        })
        .collect()
}

/// The multiplier image as a set of units, and the kernel of the
/// multiplier character.
pub fn multiplier_image_and_kernel(
    g: &MatGroup,
    space: &SymplecticSpace,
) -> Result<(BTreeSet<u64>, MatGroup)> {
    generator_multipliers(g, space)?;
    let mut image = BTreeSet::new();
    for x in g.elements() {
        image.insert(similitude_multiplier(x, space).expect("closed under products"));
    }
    let kernel = g.subgroup_where(|x| similitude_multiplier(x, space) == Some(1));
    Ok((image, kernel))
}
