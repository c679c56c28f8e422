//! Fixtures shared by the benchmarks.

use hloc_core::symplectic::{gsp_generators, SymplecticSpace};
use hloc_core::{Mat, MatGroup, ModuleSpec};

/// `<diag(7, 18), [[1, 5], [0, 1]], [[1, 0], [5, 1]]>` modulo 25.
pub fn borel_mod_25() -> MatGroup {
    let s = ModuleSpec::new(5, 2, 2).unwrap();
    let r = s.ring();
    let gens = [
        Mat::diag(&r, &[7, 18]),
        Mat::from_rows(&r, &[vec![1, 5], vec![0, 1]]).unwrap(),
        Mat::from_rows(&r, &[vec![1, 0], vec![5, 1]]).unwrap(),
    ];
    MatGroup::close(s, &gens, 10_000).unwrap()
}

pub fn gsp4_generators(p: u64) -> (ModuleSpec, Vec<Mat>) {
    let space = SymplecticSpace::new(ModuleSpec::new(p, 1, 4).unwrap()).unwrap();
    (space.spec(), gsp_generators(&space))
}

/// Deterministic pseudo-random square matrix with entries below `q`.
pub fn scrambled(size: usize, q: u64, seed: u64) -> Mat {
    let mut x = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    Mat::from_fn(size, size, |_, _| {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        x % q
    })
}
