use serde::Serialize;

use super::howell::{kernel, solve, Howell};
use super::{vecops, Mat, Vector, Zmod};
use crate::error::{Error, Result};

/// Finite abelian p-group presented by invariant factors, with one generator
/// per factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianStructure {
    pub p: u64,
    /// Exponents `e_i` of the factors `p^{e_i}`, non-increasing.
    pub exponents: Vec<u32>,
    pub generators: Vec<Vector>,
}

impl AbelianStructure {
    pub fn trivial(p: u64) -> Self {
        AbelianStructure {
            p,
            exponents: Vec::new(),
            generators: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn invariant_factors(&self) -> Vec<u128> {
        self.exponents
            .iter()
            .map(|&e| (self.p as u128).pow(e))
            .collect()
    }

    pub fn log_order(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.log_order())
    }

    /// Number of cyclic factors, i.e. the rank of the p-torsion subgroup.
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }
}

/// `log_p` of the size of the span of `gens`.
pub fn span_log_order(gens: &[Vector], width: usize, ring: &Zmod) -> u32 {
    Howell::new(ring, width, gens.to_vec()).log_order()
}

/// Structure of `span(ambient) / span(sub)`.
///
/// The ambient span is presented as a quotient of a free module on its Howell
/// rows; adding the coordinates of `sub` to the relations and diagonalising
/// gives the invariant factors together with lifts of their generators.
pub fn quotient_structure(
    ambient: &[Vector],
    sub: &[Vector],
    width: usize,
    ring: &Zmod,
) -> Result<AbelianStructure> {
    for v in ambient.iter().chain(sub) {
        if v.len() != width {
            return Err(Error::dims(format!("vectors of length {width}"), v.len()));
        }
    }
    let amb = Howell::new(ring, width, ambient.to_vec());
    if let Some(i) = sub.iter().position(|s| !amb.contains(s)) {
        return Err(Error::input(format!(
            "subgroup generator {i} is not in the ambient span"
        )));
    }
    let basis = amb.rows();
    let r = basis.len();
    if r == 0 {
        return Ok(AbelianStructure::trivial(ring.p()));
    }
    // columns of `m` are the ambient basis vectors
    let m = Mat::from_fn(width, r, |i, j| basis[j][i]);
    let mut relations = kernel(&m, ring);
    for s in sub {
        let coords = solve(&m, s, ring)?
            .ok_or_else(|| Error::internal("membership and solve disagree"))?;
        relations.push(coords);
    }
    let (diag, vinv) = smith_diagonal(&relations, r, ring);

    let mut factors: Vec<(u32, Vector)> = Vec::new();
    for (k, d) in diag.iter().enumerate() {
        let e = ring.valuation(*d);
        if e == 0 {
            continue;
        }
        let mut g = vec![0; width];
        for (j, &c) in vinv[k].iter().enumerate() {
            vecops::axpy(&mut g, c, &basis[j], ring);
        }
        factors.push((e, g));
    }
    factors.sort_by_key(|f| std::cmp::Reverse(f.0));
    Ok(AbelianStructure {
        p: ring.p(),
        exponents: factors.iter().map(|f| f.0).collect(),
        generators: factors.into_iter().map(|f| f.1).collect(),
    })
}

/// Diagonalises the relation rows (each of length `r`) by row and column
/// operations. Returns the `r` diagonal entries (zero past the rank) and the
/// inverse column transform, whose rows are the new free basis.
fn smith_diagonal(relations: &[Vector], r: usize, ring: &Zmod) -> (Vec<u64>, Vec<Vector>) {
    let mut a: Vec<Vector> = relations.to_vec();
    let rows = a.len();
    let mut vinv: Vec<Vector> = (0..r)
        .map(|i| {
            let mut e = vec![0; r];
            e[i] = 1;
            e
        })
        .collect();
    let mut diag = vec![0; r];

    for k in 0..r.min(rows) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, &x) in row.iter().enumerate().skip(k) {
                if x != 0 {
                    let v = ring.valuation(x);
                    if best.map_or(true, |b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        a.swap(k, pi);
        if pj != k {
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            vinv.swap(k, pj);
        }
        let (_, uinv) = ring.split_unit(a[k][k]);
        let u = ring.inv(uinv).expect("unit");
        for row in a.iter_mut() {
            row[k] = ring.mul(row[k], uinv);
        }
        vinv[k] = vecops::scale(&vinv[k], u, ring);
        let pv = ring.p_pow(v);
        let pivot_row = a[k].clone();
        for row in a.iter_mut().skip(k + 1) {
            let f = row[k] / pv;
            if f != 0 {
                vecops::axpy(row, ring.neg(f), &pivot_row, ring);
            }
        }
        for j in k + 1..r {
            let f = a[k][j] / pv;
            if f != 0 {
                // column j -= f * column k, tracked as row k += f * row j of V^{-1}
                for row in a.iter_mut() {
                    row[j] = ring.sub(row[j], ring.mul(f, row[k]));
                }
                let vj = vinv[j].clone();
                vecops::axpy(&mut vinv[k], f, &vj, ring);
            }
        }
        diag[k] = a[k][k];
    }
    (diag, vinv)
}
