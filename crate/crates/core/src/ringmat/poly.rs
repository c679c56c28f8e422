use super::{Mat, Vector, Zmod};
use crate::error::{Error, Result};

/// Characteristic polynomial `det(x Id - a)`, coefficients from the leading
/// `1` down to the constant term.
///
/// Uses Berkowitz's division-free recurrence, so it is exact over `Z/p^n`
/// as well as over a field.
pub fn char_poly(a: &Mat, ring: &Zmod) -> Result<Vector> {
    if !a.is_square() {
        return Err(Error::dims("square matrix", format!("{}x{}", a.rows(), a.cols())));
    }
    let m = a.rows();
    let mut poly: Vector = vec![1];
    for k in 0..m {
        // A_{k+1} = [[A_k, c], [r, d]]
        let d = a.get(k, k);
        let c: Vector = (0..k).map(|i| a.get(i, k)).collect();
        let r: Vector = (0..k).map(|j| a.get(k, j)).collect();
        let mut toeplitz = Vec::with_capacity(k + 2);
        toeplitz.push(1);
        toeplitz.push(ring.neg(d));
        let mut power_c = c;
        for _ in 0..k {
            let rc = r
                .iter()
                .zip(&power_c)
                .fold(0, |acc, (&x, &y)| ring.add(acc, ring.mul(x, y)));
            toeplitz.push(ring.neg(rc));
            power_c = (0..k)
                .map(|i| {
                    (0..k).fold(0, |acc, j| ring.add(acc, ring.mul(a.get(i, j), power_c[j])))
                })
                .collect();
        }
        let mut next = vec![0; k + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, &pc) in poly.iter().enumerate() {
                if i >= j {
                    *slot = ring.add(*slot, ring.mul(toeplitz[i - j], pc));
                }
            }
        }
        poly = next;
    }
    Ok(poly)
}
