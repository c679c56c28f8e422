use super::{char_poly, Mat, Zmod};
use crate::error::{Error, Result};

/// Element of `F_{p^k}`: coefficients of a polynomial of degree `< k` in the
/// generator, constant term first.
pub type ExtElem = Vec<u64>;

/// Largest field that root search will enumerate.
pub const EXT_FIELD_CAP: u64 = 2_000_000;

/// `F_{p^k}` realised as `F_p[x] / (f)`, where `f` is the least monic
/// irreducible of degree `k` when polynomials are read as base-`p` numerals
/// with the leading coefficients most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtField {
    p: u64,
    k: usize,
    /// Monic modulus, constant term first, length `k + 1`.
    modulus: Vec<u64>,
}

fn poly_rem(num: &[u64], den: &[u64], p: u64) -> Vec<u64> {
    // den monic
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &d) in den.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - lead * d % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn digits(mut idx: u64, p: u64, k: usize) -> Vec<u64> {
    let mut out = vec![0; k];
    for slot in out.iter_mut() {
        *slot = idx % p;
        idx /= p;
    }
    out
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    for deg in 1..=k / 2 {
        for idx in 0..p.pow(deg as u32) {
            let mut g = digits(idx, p, deg);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl ExtField {
    pub fn new(p: u64, k: usize) -> Result<Self> {
        if !super::is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::input("extension degree must be positive"));
        }
        let size = p
            .checked_pow(k as u32)
            .ok_or_else(|| Error::input("extension field too large"))?;
        for idx in 0..size {
            let mut f = digits(idx, p, k);
            f.push(1);
            if is_irreducible(&f, p) {
                return Ok(ExtField { p, k, modulus: f });
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> ExtElem {
        vec![0; self.k]
    }

    pub fn from_base(&self, c: u64) -> ExtElem {
        let mut e = self.zero();
        e[0] = c % self.p;
        e
    }

    pub fn is_zero(&self, a: &ExtElem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a.iter().zip(b).map(|(&x, &y)| (x + self.p - y) % self.p).collect()
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let mut prod = vec![0; 2 * self.k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.k, 0);
        r
    }

    pub fn pow(&self, a: &ExtElem, mut e: u64) -> ExtElem {
        let mut acc = self.from_base(1);
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &ExtElem) -> Option<ExtElem> {
        (!self.is_zero(a)).then(|| self.pow(a, self.size() - 2))
    }

    pub fn div(&self, a: &ExtElem, b: &ExtElem) -> Option<ExtElem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        (0..self.size()).map(|i| digits(i, self.p, self.k))
    }

    /// Evaluates a polynomial with base-field coefficients given leading
    /// coefficient first.
    pub fn eval_base_poly(&self, coeffs: &[u64], x: &ExtElem) -> ExtElem {
        let mut acc = self.zero();
        for &c in coeffs {
            acc = self.add(&self.mul(&acc, x), &self.from_base(c));
        }
        acc
    }
}

/// Roots of the characteristic polynomial of `a` (entries read mod `p`) that
/// lie in `F_{p^k}`, with multiplicities.
pub fn eigenvalues_in_ext(a: &Mat, ring: &Zmod, k: usize) -> Result<(ExtField, Vec<(ExtElem, usize)>)> {
    if !a.is_square() {
        return Err(Error::dims("square matrix", format!("{}x{}", a.rows(), a.cols())));
    }
    let fp = ring.with_exponent(1)?;
    let cp = char_poly(&a.reduce_to(&fp), &fp)?;
    let field = ExtField::new(ring.p(), k)?;
    if field.size() > EXT_FIELD_CAP {
        return Err(Error::CapExceeded {
            cap: EXT_FIELD_CAP as usize,
        });
    }
    let mut out = Vec::new();
    for x in field.elements() {
        if !field.is_zero(&field.eval_base_poly(&cp, &x)) {
            continue;
        }
        // multiplicity by repeated synthetic division
        let mut poly: Vec<ExtElem> = cp.iter().map(|&c| field.from_base(c)).collect();
        let mut mult = 0;
        loop {
            let mut quot = Vec::with_capacity(poly.len() - 1);
            let mut acc = field.zero();
            for c in &poly {
                acc = field.add(&field.mul(&acc, &x), c);
                quot.push(acc.clone());
            }
            let rem = quot.pop().expect("nonempty");
            if !field.is_zero(&rem) || quot.is_empty() {
                break;
            }
            mult += 1;
            poly = quot;
            if poly.len() == 1 {
                break;
            }
        }
        out.push((x, mult));
    }
    Ok((field, out))
}
