#![allow(dead_code)]

use std::collections::HashSet;

use hloc_core::{Error, Mat, MatGroup, ModuleSpec, Vector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn spec(p: u64, n: u32, m: usize) -> ModuleSpec {
    ModuleSpec::new(p, n, m).unwrap()
}

pub fn mat(s: ModuleSpec, rows: &[&[i64]]) -> Mat {
    let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
    Mat::from_rows(&s.ring(), &rows).unwrap()
}

pub fn group(s: ModuleSpec, gens: &[Mat]) -> MatGroup {
    MatGroup::close(s, gens, 100_000).unwrap()
}

fn perm(s: ModuleSpec, images: &[usize]) -> Mat {
    Mat::from_fn(images.len(), images.len(), |i, j| u64::from(images[j] == i)).reduce_to(&s.ring())
}

fn diag(s: ModuleSpec, d: &[i64]) -> Mat {
    Mat::diag(&s.ring(), d)
}

/// Small groups for the exhaustive oracle: `|G| <= 30`, `|M| <= 625`.
pub fn oracle_corpus() -> Vec<MatGroup> {
    let mut out = Vec::new();
    let mut add = |s: ModuleSpec, gens: Vec<Mat>| out.push(group(s, &gens));

    let s = spec(2, 1, 2);
    add(s, vec![mat(s, &[&[1, 1], &[0, 1]])]);
    add(s, vec![mat(s, &[&[1, 1], &[0, 1]]), mat(s, &[&[0, 1], &[1, 0]])]);
    let s = spec(2, 2, 2);
    add(s, vec![mat(s, &[&[1, 1], &[0, 1]])]);
    add(s, vec![diag(s, &[-1, -1])]);
    add(s, vec![mat(s, &[&[0, 1], &[1, 0]]), diag(s, &[-1, -1])]);
    add(s, vec![mat(s, &[&[1, 2], &[0, 1]]), mat(s, &[&[0, 1], &[1, 0]])]);
    add(s, vec![diag(s, &[-1, 1])]);
    let s = spec(2, 1, 3);
    add(s, vec![perm(s, &[1, 2, 0])]);
    add(s, vec![perm(s, &[1, 2, 0]), perm(s, &[1, 0, 2])]);
    let s = spec(2, 1, 4);
    add(s, vec![perm(s, &[1, 2, 3, 0])]);

    let s = spec(3, 1, 2);
    add(s, vec![diag(s, &[-1, -1])]);
    add(s, vec![mat(s, &[&[1, 1], &[0, 1]])]);
    add(s, vec![mat(s, &[&[1, 1], &[0, 1]]), diag(s, &[-1, -1])]);
    add(s, vec![mat(s, &[&[0, -1], &[1, 0]])]);
    add(s, vec![mat(s, &[&[0, -1], &[1, 0]]), mat(s, &[&[1, 1], &[1, -1]])]);
    add(s, vec![mat(s, &[&[1, 1], &[0, 1]]), diag(s, &[-1, 1])]);
    let s = spec(3, 2, 2);
    add(s, vec![mat(s, &[&[1, 3], &[0, 1]])]);
    add(s, vec![mat(s, &[&[1, 1], &[0, 1]])]);
    add(s, vec![diag(s, &[2, 1])]);
    add(s, vec![mat(s, &[&[1, 3], &[0, 1]]), diag(s, &[-1, 1])]);
    let s = spec(3, 1, 3);
    add(s, vec![perm(s, &[1, 2, 0])]);

    let s = spec(5, 1, 2);
    add(s, vec![mat(s, &[&[1, 1], &[0, 1]])]);
    add(s, vec![diag(s, &[2, 3])]);
    add(s, vec![mat(s, &[&[1, 1], &[0, 1]]), diag(s, &[2, 1])]);
    add(s, vec![mat(s, &[&[0, -1], &[1, 0]])]);
    let s = spec(5, 2, 2);
    add(s, vec![mat(s, &[&[1, 5], &[0, 1]])]);
    add(s, vec![diag(s, &[7, 18])]);
    add(s, vec![mat(s, &[&[1, 5], &[0, 1]]), diag(s, &[7, 1])]);
    add(s, vec![mat(s, &[&[1, 1], &[0, 1]])]);
    add(s, vec![mat(s, &[&[1, 5], &[0, 1]]), mat(s, &[&[1, 0], &[5, 1]])]);
    let s = spec(5, 1, 4);
    add(s, vec![perm(s, &[1, 2, 3, 0])]);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counts {
    pub z1: u128,
    pub b1: u128,
    pub h1: u128,
    pub h1_loc: u128,
}

/// Counts cocycles by trying every assignment of values to the generators,
/// propagating along `Z_{s x} = Z_s + s Z_x` and testing the identity on all
/// pairs. Uses nothing from the linear-algebra layer.
pub fn brute_counts(g: &MatGroup) -> Counts {
    let s = g.spec();
    let ring = s.ring();
    let elems = g.elements();
    let ord = elems.len();
    let idx = |x: &Mat| g.index_of(x).unwrap();
    let mul: Vec<Vec<usize>> = elems
        .iter()
        .map(|a| elems.iter().map(|b| idx(&a.mul(b, &ring))).collect())
        .collect();
    let gens: Vec<usize> = g.generators().iter().map(idx).collect();
    let module: Vec<Vector> = s.vectors().collect();
    let act = |e: usize, v: &[u64]| elems[e].mul_vec(v, &ring);
    let add = |a: &[u64], b: &[u64]| -> Vector { a.iter().zip(b).map(|(&x, &y)| ring.add(x, y)).collect() };
    let images: Vec<HashSet<Vector>> = (0..ord)
        .map(|e| {
            module
                .iter()
                .map(|m| {
                    let sm = act(e, m);
                    sm.iter().zip(m).map(|(&x, &y)| ring.sub(x, y)).collect()
                })
                .collect()
        })
        .collect();

    let k = gens.len();
    let total = module.len().pow(k as u32);
    let (mut z1, mut loc) = (0u128, 0u128);
    let zero = vec![0u64; s.rank];
    'tuples: for t in 0..total {
        let mut z: Vec<Option<Vector>> = vec![None; ord];
        z[0] = Some(zero.clone());
        let mut rest = t;
        let mut gval = Vec::with_capacity(k);
        for _ in 0..k {
            gval.push(module[rest % module.len()].clone());
            rest /= module.len();
        }
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            let zx = z[x].clone().unwrap();
            for (gi, &sgen) in gens.iter().enumerate() {
                let y = mul[sgen][x];
                let v = add(&gval[gi], &act(sgen, &zx));
                match &z[y] {
                    Some(w) if *w != v => continue 'tuples,
                    Some(_) => {}
                    None => {
                        z[y] = Some(v);
                        queue.push(y);
                    }
                }
            }
        }
        let z: Vec<Vector> = z.into_iter().map(Option::unwrap).collect();
        for a in 0..ord {
            for b in 0..ord {
                if z[mul[a][b]] != add(&z[a], &act(a, &z[b])) {
                    continue 'tuples;
                }
            }
        }
        z1 += 1;
        if (0..ord).all(|e| images[e].contains(&z[e])) {
            loc += 1;
        }
    }
    let b1: HashSet<Vec<Vector>> = module
        .iter()
        .map(|m| {
            (0..ord)
                .map(|e| act(e, m).iter().zip(m).map(|(&x, &y)| ring.sub(x, y)).collect())
                .collect()
        })
        .collect();
    let b1 = b1.len() as u128;
    Counts {
        z1,
        b1,
        h1: z1 / b1,
        h1_loc: loc / b1,
    }
}

fn random_mat(rng: &mut ChaCha8Rng, s: ModuleSpec) -> Mat {
    let q = s.modulus();
    Mat::from_fn(s.rank, s.rank, |_, _| rng.gen_range(0..q))
}

/// `Id + p X` with `X` random modulo `p`.
pub fn random_kernel_element(rng: &mut ChaCha8Rng, s: ModuleSpec) -> Mat {
    let ring = s.ring();
    let p = s.p;
    let x = Mat::from_fn(s.rank, s.rank, |_, _| rng.gen_range(0..p));
    Mat::identity(s.rank).add(&x.scale(p, &ring), &ring)
}

/// Groups `<g, H>` modulo `p^2` on rank 2 with `H` inside the congruence
/// kernel and `g` of assorted orders.
pub fn soundness_corpus(seed: u64, per_prime: usize) -> Vec<MatGroup> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for p in [5u64, 7] {
        let s = spec(p, 2, 2);
        let ring = s.ring();
        let mut made = 0;
        let mut attempt = 0;
        while made < per_prime {
            attempt += 1;
            let g = match attempt % 6 {
                0 => mat(s, &[&[1, -3], &[1, -2]]),
                1 => {
                    let a = rng.gen_range(1..p as i64);
                    let b = rng.gen_range(1..p as i64);
                    diag(s, &[a, b]).pow(p, &ring)
                }
                2 => mat(s, &[&[0, -1], &[1, 0]]),
                3 => mat(s, &[&[1, 1], &[0, 1]]),
                4 => {
                    let a = rng.gen_range(1..p as i64);
                    diag(s, &[a, 1])
                }
                _ => random_mat(&mut rng, s),
            };
            if !g.is_invertible(&ring) {
                continue;
            }
            let mut gens = vec![g];
            for _ in 0..rng.gen_range(1..=2) {
                gens.push(random_kernel_element(&mut rng, s));
            }
            match MatGroup::close(s, &gens, 6000) {
                Ok(grp) => {
                    out.push(grp);
                    made += 1;
                }
                Err(Error::CapExceeded { .. }) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
    out
}
