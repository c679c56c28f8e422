//! Exact arithmetic and linear algebra over the chain ring `Z/p^n`.
//!
//! Every value is stored as its canonical representative in `[0, p^n)`, so
//! matrices compare and hash entrywise.

mod abelian;
mod ext;
mod howell;
mod poly;

pub use abelian::{quotient_structure, span_log_order, AbelianStructure};
pub use ext::{eigenvalues_in_ext, ExtElem, ExtField, EXT_FIELD_CAP};
pub use howell::{kernel, normal_form, solve, Howell, NormalForm, RowSpan};
pub use poly::char_poly;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Column vector over `Z/p^n`, canonical representatives.
pub type Vector = Vec<u64>;

/// Largest modulus accepted; keeps every product of two residues inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The ring `Z/p^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Zmod {
    p: u64,
    n: u32,
    q: u64,
}

impl Zmod {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::input(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(Error::input("exponent n must be at least 1"));
        }
        let q = p
            .checked_pow(n)
            .filter(|&q| q < MAX_MODULUS)
            .ok_or_else(|| Error::input(format!("modulus {p}^{n} is too large")))?;
        Ok(Zmod { p, n, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// `p^k` as an integer; `k` must not exceed `n`.
    pub fn p_pow(&self, k: u32) -> u64 {
        debug_assert!(k <= self.n);
        self.p.pow(k)
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.q;
        base %= self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// p-adic valuation of a residue; zero has valuation `n`.
    pub fn valuation(&self, mut a: u64) -> u32 {
        if a == 0 {
            return self.n;
        }
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        // extended Euclid on (a, q)
        let (mut r0, mut r1) = (self.q as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        Some(self.reduce(t0))
    }

    /// Splits a nonzero `a` as `p^v * u` and returns `(v, u^{-1})`.
    pub(crate) fn split_unit(&self, a: u64) -> (u32, u64) {
        let v = self.valuation(a);
        let u = a / self.p_pow(v);
        (v, self.inv(u).expect("unit part is invertible"))
    }

    /// Ring of the same prime with a smaller exponent.
    pub fn with_exponent(&self, n: u32) -> Result<Zmod> {
        Zmod::new(self.p, n)
    }
}

/// The acted-on module `(Z/p^n)^rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ModuleSpec {
    pub p: u64,
    pub n: u32,
    pub rank: usize,
}

impl ModuleSpec {
    pub fn new(p: u64, n: u32, rank: usize) -> Result<Self> {
        Zmod::new(p, n)?;
        if rank == 0 {
            return Err(Error::input("rank must be at least 1"));
        }
        Ok(ModuleSpec { p, n, rank })
    }

    pub fn ring(&self) -> Zmod {
        Zmod::new(self.p, self.n).expect("validated at construction")
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.n)
    }

    pub fn with_exponent(&self, n: u32) -> Result<Self> {
        ModuleSpec::new(self.p, n, self.rank)
    }

    /// Number of elements of the module, if it fits in `u128`.
    pub fn size(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.n * self.rank as u32)
    }

    /// Iterates over every vector of the module in lexicographic order.
    pub fn vectors(&self) -> impl Iterator<Item = Vector> {
        let q = self.modulus();
        let rank = self.rank;
        let total = self.size().expect("module too large to enumerate") as u64;
        (0..total).map(move |mut idx| {
            let mut v = vec![0; rank];
            for slot in v.iter_mut().rev() {
                *slot = idx % q;
                idx /= q;
            }
            v
        })
    }
}

/// Dense matrix over `Z/p^n` with canonical entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(u64::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for Mat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_vecs().serialize(s)
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Mat::zeros(size, size);
        for i in 0..size {
            m.data[i * size + i] = 1;
        }
        m
    }

    pub fn scalar(size: usize, c: u64) -> Self {
        let mut m = Mat::zeros(size, size);
        for i in 0..size {
            m.data[i * size + i] = c;
        }
        m
    }

    pub fn diag(ring: &Zmod, entries: &[i64]) -> Self {
        let size = entries.len();
        let mut m = Mat::zeros(size, size);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * size + i] = ring.reduce(e);
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing every entry.
    pub fn from_rows(ring: &Zmod, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::input("matrix must be non-empty"));
        }
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::dims(format!("{c} columns"), format!("{} columns", row.len())));
            }
            data.extend(row.iter().map(|&x| ring.reduce(x)));
        }
        Ok(Mat { rows: r, cols: c, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    /// Column matrix of a vector.
    pub fn column(v: &[u64]) -> Self {
        Mat {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn from_row_vecs(cols: usize, rows: &[Vector]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Mat {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| self.get(r, c) == u64::from(r == c))
            })
    }

    /// Scalar matrix test: `Some(c)` when the matrix is `c * Id`.
    pub fn as_scalar(&self) -> Option<u64> {
        if !self.is_square() {
            return None;
        }
        let c = self.get(0, 0);
        let ok = (0..self.rows)
            .all(|r| (0..self.cols).all(|k| self.get(r, k) == if r == k { c } else { 0 }));
        ok.then_some(c)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn mul(&self, other: &Mat, ring: &Zmod) -> Mat {
        assert_eq!(self.cols, other.rows, "incompatible shapes");
        let q = ring.modulus();
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let base = r * other.cols;
                for (c, &b) in orow.iter().enumerate() {
                    out.data[base + c] = (out.data[base + c] + a * b) % q;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64], ring: &Zmod) -> Vector {
        assert_eq!(self.cols, v.len(), "incompatible shapes");
        let q = ring.modulus();
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| (acc + a * b) % q)
            })
            .collect()
    }

    pub fn add(&self, other: &Mat, ring: &Zmod) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| ring.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat, ring: &Zmod) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| ring.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u64, ring: &Zmod) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| ring.mul(a, c)).collect(),
        }
    }

    /// `self - Id`.
    pub fn minus_identity(&self, ring: &Zmod) -> Mat {
        assert!(self.is_square());
        self.sub(&Mat::identity(self.rows), ring)
    }

    pub fn pow(&self, mut exp: u64, ring: &Zmod) -> Mat {
        assert!(self.is_square());
        let mut acc = Mat::identity(self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base, ring);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base, ring);
            }
        }
        acc
    }

    /// Reduces every entry modulo a smaller power of the same prime.
    pub fn reduce_to(&self, ring: &Zmod) -> Mat {
        let q = ring.modulus();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a % q).collect(),
        }
    }

    /// Determinant, computed division-free so it is exact even for singular
    /// matrices over a ring with zero divisors.
    pub fn det(&self, ring: &Zmod) -> u64 {
        assert!(self.is_square());
        let cp = char_poly(self, ring).expect("square");
        // char poly is det(x I - A); its constant term is (-1)^m det(A)
        let c0 = cp[cp.len() - 1];
        if self.rows % 2 == 0 {
            c0
        } else {
            ring.neg(c0)
        }
    }

    pub fn is_invertible(&self, ring: &Zmod) -> bool {
        self.is_square() && ring.is_unit(self.det(ring))
    }

    /// Gauss-Jordan inverse; over a local ring an invertible matrix always has
    /// a unit pivot available in each column.
    pub fn inverse(&self, ring: &Zmod) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let m = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(m);
        for c in 0..m {
            let pr = (c..m).find(|&r| ring.is_unit(a.get(r, c)))?;
            a.swap_rows(pr, c);
            inv.swap_rows(pr, c);
            let u = ring.inv(a.get(c, c)).expect("unit");
            a.scale_row(c, u, ring);
            inv.scale_row(c, u, ring);
            for r in 0..m {
                if r != c {
                    let f = a.get(r, c);
                    if f != 0 {
                        a.axpy_row(r, c, ring.neg(f), ring);
                        inv.axpy_row(r, c, ring.neg(f), ring);
                    }
                }
            }
        }
        Some(inv)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, f: u64, ring: &Zmod) {
        for c in 0..self.cols {
            let i = r * self.cols + c;
            self.data[i] = ring.mul(self.data[i], f);
        }
    }

    /// `row[dst] += f * row[src]`
    pub(crate) fn axpy_row(&mut self, dst: usize, src: usize, f: u64, ring: &Zmod) {
        for c in 0..self.cols {
            let s = self.data[src * self.cols + c];
            let i = dst * self.cols + c;
            self.data[i] = ring.add(self.data[i], ring.mul(f, s));
        }
    }
}

pub(crate) mod vecops {
    use super::{Vector, Zmod};

    pub fn is_zero(v: &[u64]) -> bool {
        v.iter().all(|&x| x == 0)
    }

    pub fn add(a: &[u64], b: &[u64], ring: &Zmod) -> Vector {
        a.iter().zip(b).map(|(&x, &y)| ring.add(x, y)).collect()
    }

    pub fn scale(a: &[u64], f: u64, ring: &Zmod) -> Vector {
        a.iter().map(|&x| ring.mul(x, f)).collect()
    }

    /// `a += f * b`
    pub fn axpy(a: &mut [u64], f: u64, b: &[u64], ring: &Zmod) {
        if f == 0 {
            return;
        }
        for (x, &y) in a.iter_mut().zip(b) {
            *x = ring.add(*x, ring.mul(f, y));
        }
    }
}
