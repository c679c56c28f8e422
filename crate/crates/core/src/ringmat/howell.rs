//! Howell normal form over `Z/p^n` and the kernel/solve routines built on it.
//!
//! Plain row echelon form is not enough over a ring with zero divisors: the
//! span of `[2 1]` mod 4 contains `[0 2]`, which no echelon row with a later
//! pivot exhibits. The Howell form adds those annihilator multiples so that
//! span membership reduces to back-substitution.

use super::{vecops, Mat, Vector, Zmod};
use crate::error::{Error, Result};

/// Rows of a Howell form together with their pivot positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Howell {
    ring: Zmod,
    width: usize,
    rows: Vec<Vector>,
    /// `(column, valuation)` of each row's pivot; the pivot entry is `p^valuation`.
    pivots: Vec<(usize, u32)>,
}

/// Output of [`normal_form`]: `t * a == h`, and the row spans of `a` and `h`
/// coincide.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub h: Mat,
    pub t: Mat,
}

struct Work {
    row: Vector,
    coeff: Option<Vector>,
}

fn howell_core(
    ring: &Zmod,
    width: usize,
    input: Vec<Vector>,
    track: bool,
) -> (Howell, Option<Vec<Vector>>) {
    let nrows = input.len();
    let mut work: Vec<Work> = input
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            debug_assert_eq!(row.len(), width);
            let coeff = track.then(|| {
                let mut e = vec![0; nrows];
                e[i] = 1;
                e
            });
            Work { row, coeff }
        })
        .filter(|w| !vecops::is_zero(&w.row))
        .collect();

    let mut out: Vec<Work> = Vec::new();
    let mut pivots = Vec::new();

    for c in 0..width {
        if work.is_empty() {
            break;
        }
        // Minimal valuation wins; ties go to the earliest row.
        let best = work
            .iter()
            .enumerate()
            .filter(|(_, w)| w.row[c] != 0)
            .min_by_key(|(i, w)| (ring.valuation(w.row[c]), *i))
            .map(|(i, _)| i);
        let Some(bi) = best else { continue };
        let mut piv = work.remove(bi);
        let (v, uinv) = ring.split_unit(piv.row[c]);
        if uinv != 1 {
            piv.row = vecops::scale(&piv.row, uinv, ring);
            if let Some(co) = piv.coeff.as_mut() {
                *co = vecops::scale(co, uinv, ring);
            }
        }
        let pv = ring.p_pow(v);
        for w in work.iter_mut() {
            let e = w.row[c];
            if e != 0 {
                let f = ring.neg(e / pv);
                vecops::axpy(&mut w.row, f, &piv.row, ring);
                if let (Some(co), Some(pco)) = (w.coeff.as_mut(), piv.coeff.as_ref()) {
                    vecops::axpy(co, f, pco, ring);
                }
            }
        }
        if v > 0 {
            let ann = ring.p_pow(ring.n() - v);
            let row = vecops::scale(&piv.row, ann, ring);
            if !vecops::is_zero(&row) {
                let coeff = piv.coeff.as_ref().map(|co| vecops::scale(co, ann, ring));
                work.push(Work { row, coeff });
            }
        }
        work.retain(|w| !vecops::is_zero(&w.row));
        pivots.push((c, v));
        out.push(piv);
    }
    debug_assert!(work.iter().all(|w| vecops::is_zero(&w.row)));

    // Reduce entries above each pivot into [0, p^v).
    for i in 0..out.len() {
        let (c, v) = pivots[i];
        let pv = ring.p_pow(v);
        let (head, tail) = out.split_at_mut(i);
        let piv = &tail[0];
        for w in head.iter_mut() {
            let f = w.row[c] / pv;
            if f != 0 {
                let nf = ring.neg(f);
                vecops::axpy(&mut w.row, nf, &piv.row, ring);
                if let (Some(co), Some(pco)) = (w.coeff.as_mut(), piv.coeff.as_ref()) {
                    vecops::axpy(co, nf, pco, ring);
                }
            }
        }
    }

    let mut rows = Vec::with_capacity(out.len());
    let mut coeffs = track.then(Vec::new);
    for w in out {
        rows.push(w.row);
        if let (Some(cs), Some(co)) = (coeffs.as_mut(), w.coeff) {
            cs.push(co);
        }
    }
    (
        Howell {
            ring: *ring,
            width,
            rows,
            pivots,
        },
        coeffs,
    )
}

impl Howell {
    pub fn new(ring: &Zmod, width: usize, rows: Vec<Vector>) -> Self {
        howell_core(ring, width, rows, false).0
    }

    pub fn of_mat(a: &Mat, ring: &Zmod) -> Self {
        Howell::new(ring, a.cols(), a.row_vecs())
    }

    pub fn ring(&self) -> &Zmod {
        &self.ring
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Nonzero rows in echelon order.
    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    pub fn into_rows(self) -> Vec<Vector> {
        self.rows
    }

    /// `log_p` of the number of elements in the row span.
    pub fn log_order(&self) -> u32 {
        self.pivots.iter().map(|&(_, v)| self.ring.n() - v).sum()
    }

    /// Reduces `v` against the rows, returning the remainder (zero iff `v`
    /// lies in the span) and the coefficients used.
    pub fn reduce(&self, v: &[u64]) -> (Vector, Vector) {
        let mut r = v.to_vec();
        let mut coeffs = vec![0; self.rows.len()];
        for (i, (&(c, val), row)) in self.pivots.iter().zip(&self.rows).enumerate() {
            let pv = self.ring.p_pow(val);
            let f = r[c] / pv;
            if f != 0 {
                vecops::axpy(&mut r, self.ring.neg(f), row, &self.ring);
                coeffs[i] = f;
            }
        }
        (r, coeffs)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        vecops::is_zero(&self.reduce(v).0)
    }

    pub fn contains_all(&self, vs: &[Vector]) -> bool {
        vs.iter().all(|v| self.contains(v))
    }
}

/// Howell-style normal form of `a` with a transform `t` such that `t * a == h`.
///
/// `h` has the nonzero Howell rows first, then zero rows up to `a.rows()`.
pub fn normal_form(a: &Mat, ring: &Zmod) -> NormalForm {
    let (howell, coeffs) = howell_core(ring, a.cols(), a.row_vecs(), true);
    let mut coeffs = coeffs.expect("tracked");
    let mut hrows = howell.rows;
    let total = hrows.len().max(a.rows());
    while hrows.len() < total {
        hrows.push(vec![0; a.cols()]);
        coeffs.push(vec![0; a.rows()]);
    }
    NormalForm {
        h: Mat::from_row_vecs(a.cols(), &hrows),
        t: Mat::from_row_vecs(a.rows(), &coeffs),
    }
}

/// Augmented Howell form of `[A^T | I]`; rows with zero left part span the
/// kernel of `A`, the others give column-span membership with certificates.
fn augmented(a: &Mat, ring: &Zmod) -> Howell {
    let (r, c) = (a.rows(), a.cols());
    let rows = (0..c)
        .map(|j| {
            let mut row = a.col(j);
            row.resize(r + c, 0);
            row[r + j] = 1;
            row
        })
        .collect();
    Howell::new(ring, r + c, rows)
}

/// Generators of `{x : a x = 0}`.
pub fn kernel(a: &Mat, ring: &Zmod) -> Vec<Vector> {
    let r = a.rows();
    let aug = augmented(a, ring);
    aug.rows
        .iter()
        .zip(&aug.pivots)
        .filter(|(_, &(c, _))| c >= r)
        .map(|(row, _)| row[r..].to_vec())
        .collect()
}

/// Some `x` with `a x == b`, or `None` when the system is inconsistent.
pub fn solve(a: &Mat, b: &[u64], ring: &Zmod) -> Result<Option<Vector>> {
    let (r, c) = (a.rows(), a.cols());
    if b.len() != r {
        return Err(Error::dims(format!("right-hand side of length {r}"), b.len()));
    }
    let aug = augmented(a, ring);
    let mut cur = b.to_vec();
    cur.resize(r + c, 0);
    let mut piv = aug.pivots.iter().zip(&aug.rows).peekable();
    for col in 0..r {
        match piv.peek() {
            Some((&(pc, val), row)) if pc == col => {
                let pv = ring.p_pow(val);
                if cur[col] % pv != 0 {
                    return Ok(None);
                }
                let f = cur[col] / pv;
                vecops::axpy(&mut cur, ring.neg(f), row, ring);
                piv.next();
            }
            _ => {
                if cur[col] != 0 {
                    return Ok(None);
                }
            }
        }
    }
    // cur = (b, 0) - sum f_i (A w_i, w_i), so x = -(right part)
    let x: Vector = cur[r..].iter().map(|&e| ring.neg(e)).collect();
    if a.mul_vec(&x, ring) != b {
        return Err(Error::internal("solve produced a non-solution"));
    }
    Ok(Some(x))
}

/// Accumulates rows and keeps their span in Howell form, merging in batches.
/// Rows already in the current span are dropped on arrival.
#[derive(Clone, Debug)]
pub struct RowSpan {
    current: Howell,
    pending: Vec<Vector>,
    batch: usize,
}

impl RowSpan {
    pub fn new(ring: &Zmod, width: usize) -> Self {
        RowSpan {
            current: Howell::new(ring, width, Vec::new()),
            pending: Vec::new(),
            batch: (4 * width).max(32),
        }
    }

    /// Starts from the span of an existing Howell form.
    pub fn from_howell(h: Howell) -> Self {
        let batch = (4 * h.width).max(32);
        RowSpan {
            current: h,
            pending: Vec::new(),
            batch,
        }
    }

    pub fn push(&mut self, row: Vector) {
        debug_assert_eq!(row.len(), self.current.width);
        let (rem, _) = self.current.reduce(&row);
        if !vecops::is_zero(&rem) {
            self.pending.push(rem);
            if self.pending.len() >= self.batch {
                self.flush();
            }
        }
    }

    fn flush(&mut self) {
        if self.pending.is_empty() {
            return;
        }
        let mut rows = std::mem::take(&mut self.current.rows);
        rows.append(&mut self.pending);
        self.current = Howell::new(&self.current.ring, self.current.width, rows);
    }

    pub fn finish(mut self) -> Howell {
        self.flush();
        self.current
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, n: u32) -> Zmod {
        Zmod::new(p, n).unwrap()
    }

    /// Brute-force row span of a matrix over a small ring.
    fn brute_span(a: &Mat, r: &Zmod) -> std::collections::BTreeSet<Vector> {
        let q = r.modulus();
        let mut span = std::collections::BTreeSet::new();
        let n = a.rows();
        let total = q.pow(n as u32);
        for mut idx in 0..total {
            let mut v = vec![0; a.cols()];
            for i in 0..n {
                let c = idx % q;
                idx /= q;
                vecops::axpy(&mut v, c, a.row(i), r);
            }
            span.insert(v);
        }
        span
    }

    #[test]
    fn identity_is_its_own_normal_form() {
        let r = ring(5, 2);
        let nf = normal_form(&Mat::identity(2), &r);
        assert!(nf.h.is_identity());
        assert!(nf.t.is_identity());
    }

    #[test]
    fn one_by_one_mod_9() {
        let r = ring(3, 2);
        let a = Mat::from_rows(&r, &[vec![3]]).unwrap();
        let nf = normal_form(&a, &r);
        assert_eq!(nf.h.entries(), &[3]);
        let h = Howell::of_mat(&a, &r);
        assert!(h.contains(&[6]));
        assert!(!h.contains(&[1]));
        assert_eq!(h.log_order(), 1);
    }

    #[test]
    fn annihilator_row_mod_8() {
        let r = ring(2, 3);
        let a = Mat::from_rows(&r, &[vec![2, 4], vec![0, 0]]).unwrap();
        assert_eq!(brute_span(&a, &r).len(), 4);
        let nf = normal_form(&a, &r);
        let nonzero = nf.h.row_vecs().into_iter().filter(|v| !vecops::is_zero(v)).count();
        assert_eq!(nonzero, 1);
        assert_eq!(Howell::of_mat(&a, &r).log_order(), 2);
    }

    #[test]
    fn howell_property_needs_extra_row() {
        // span of [2 1] mod 4 contains [0 2]
        let r = ring(2, 2);
        let a = Mat::from_rows(&r, &[vec![2, 1]]).unwrap();
        let h = Howell::of_mat(&a, &r);
        assert!(h.contains(&[0, 2]));
        assert!(!h.contains(&[0, 1]));
        let nf = normal_form(&a, &r);
        assert_eq!(nf.t.mul(&a, &r), nf.h);
    }

    #[test]
    fn kernel_examples() {
        let r = ring(5, 2);
        assert!(kernel(&Mat::identity(2), &r).is_empty());

        let r9 = ring(3, 2);
        let a = Mat::from_rows(&r9, &[vec![3]]).unwrap();
        assert_eq!(kernel(&a, &r9), vec![vec![3]]);

        let r5 = ring(5, 1);
        let k = kernel(&Mat::zeros(2, 2), &r5);
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn solve_examples() {
        let r = ring(5, 2);
        let b = vec![7, 19];
        assert_eq!(solve(&Mat::identity(2), &b, &r).unwrap(), Some(b));

        let r9 = ring(3, 2);
        let a = Mat::from_rows(&r9, &[vec![3]]).unwrap();
        assert_eq!(solve(&a, &[1], &r9).unwrap(), None);
        assert!(solve(&a, &[1, 2], &r9).is_err());
    }
}
