#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use bhht_core::engine::Instance;
use bhht_core::invertible::{diagonal_symmetry_group, grading_operator, ExponentMatrix};
use bhht_core::symmetry::{act, CyclicPermGroup, Permutation};
use bhht_core::torsion::{FiniteSubgroup, TorsionVector};

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_n: usize,
    pub max_order: u64,
    pub even: bool,
    pub trivial_symmetry: bool,
}

pub const SUITE: Limits = Limits {
    max_n: 8,
    max_order: 5000,
    even: true,
    trivial_symmetry: false,
};

struct Orbit {
    loop_type: bool,
    exponents: Vec<u32>,
    copies: usize,
    /// Extra rotation applied when the last copy wraps to the first.
    rotation: usize,
}

fn exponent<R: Rng>(rng: &mut R) -> u32 {
    rng.gen_range(2..=5)
}

fn random_orbit<R: Rng>(rng: &mut R, budget: usize, symmetric: bool) -> Orbit {
    let loop_type = budget >= 2 && rng.gen_bool(0.4);
    let m = if loop_type {
        rng.gen_range(2..=budget.min(4))
    } else {
        rng.gen_range(1..=budget.min(3))
    };
    let max_copies = if symmetric {
        (budget / m).clamp(1, 3)
    } else {
        1
    };
    let copies = rng.gen_range(1..=max_copies);
    let (exponents, rotation) = if loop_type && symmetric && rng.gen_bool(0.5) {
        let divisors: Vec<usize> = (1..m).filter(|d| m % d == 0).collect();
        let ell = *divisors.choose(rng).unwrap();
        let pattern: Vec<u32> = (0..ell).map(|_| exponent(rng)).collect();
        let k = m / ell;
        let s = (1..k).filter(|s| gcd(*s, k) == 1).collect::<Vec<_>>();
        let s = *s.choose(rng).unwrap();
        ((0..m).map(|i| pattern[i % ell]).collect(), s * ell)
    } else {
        ((0..m).map(|_| exponent(rng)).collect(), 0)
    };
    Orbit {
        loop_type,
        exponents,
        copies,
        rotation,
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Rows and the symmetry generator of a disjoint union of atom orbits.
fn assemble(orbits: &[Orbit]) -> (Vec<Vec<u32>>, Vec<usize>) {
    let n: usize = orbits.iter().map(|o| o.exponents.len() * o.copies).sum();
    let mut rows = Vec::new();
    let mut images = vec![0; n];
    let mut base = 0;
    for o in orbits {
        let m = o.exponents.len();
        for c in 0..o.copies {
            let var = |i: usize| base + c * m + i;
            for (k, &p) in o.exponents.iter().enumerate() {
                let mut row = vec![0; n];
                row[var(k)] = p;
                if o.loop_type {
                    row[var((k + 1) % m)] += 1;
                } else if k + 1 < m {
                    row[var(k + 1)] = 1;
                }
                rows.push(row);
            }
            for i in 0..m {
                images[var(i)] = if c + 1 < o.copies {
                    base + (c + 1) * m + i
                } else {
                    base + (i + o.rotation) % m
                };
            }
        }
        base += m * o.copies;
    }
    (rows, images)
}

fn relabel<R: Rng>(
    rng: &mut R,
    rows: Vec<Vec<u32>>,
    images: Vec<usize>,
) -> (Vec<Vec<u32>>, Vec<usize>) {
    let n = images.len();
    let mut pi: Vec<usize> = (0..n).collect();
    pi.shuffle(rng);
    let mut new_rows = vec![Vec::new(); n];
    for (i, r) in rows.into_iter().enumerate() {
        let mut out = vec![0; n];
        for (j, e) in r.into_iter().enumerate() {
            out[pi[j]] = e;
        }
        new_rows[pi[i]] = out;
    }
    let mut new_images = vec![0; n];
    for j in 0..n {
        new_images[pi[j]] = pi[images[j]];
    }
    (new_rows, new_images)
}

fn orbit_span<R: Rng>(
    rng: &mut R,
    g_f: &FiniteSubgroup,
    s: &CyclicPermGroup,
    count: usize,
) -> Vec<TorsionVector> {
    let mut gens = Vec::new();
    for _ in 0..count {
        let a = g_f.elements().choose(rng).unwrap().clone();
        for sigma in s.elements() {
            gens.push(act(sigma, &a).unwrap());
        }
    }
    gens
}

/// A random instance within `limits`; retries until all constraints hold.
pub fn random_instance<R: Rng>(rng: &mut R, limits: Limits, name: String) -> Instance {
    loop {
        let target_n = rng.gen_range(1..=limits.max_n);
        let mut orbits = Vec::new();
        let mut used = 0;
        while used < target_n {
            let o = random_orbit(rng, target_n - used, !limits.trivial_symmetry);
            used += o.exponents.len() * o.copies;
            orbits.push(o);
        }
        let (rows, images) = assemble(&orbits);
        let (rows, images) = relabel(rng, rows, images);
        let n = images.len();
        let Ok(matrix) = ExponentMatrix::new(rows) else {
            continue;
        };
        if matrix.det_abs() > limits.max_order {
            continue;
        }
        let generator = if limits.trivial_symmetry {
            Permutation::identity(n)
        } else {
            Permutation::new(images).unwrap()
        };
        if limits.even && generator.sign() != 1 {
            continue;
        }
        let g_f = diagonal_symmetry_group(&matrix);
        let s = CyclicPermGroup::new(generator.clone());
        let gens = match rng.gen_range(0..5) {
            0 => Vec::new(),
            1 => vec![grading_operator(&matrix)],
            2 => g_f.generators().to_vec(),
            3 => orbit_span(rng, &g_f, &s, 1),
            _ => {
                let mut g = orbit_span(rng, &g_f, &s, 1);
                g.push(grading_operator(&matrix));
                g
            }
        };
        let group = FiniteSubgroup::span(n, &gens).unwrap();
        match Instance::new(name.clone(), matrix, group, generator) {
            Ok(inst) => return inst,
            Err(e) => panic!("generated instance {name} failed validation: {e}"),
        }
    }
}

/// A random instance with `|G⋊S| ≤ cap`.
pub fn random_small_instance<R: Rng>(rng: &mut R, cap: usize, name: String) -> Instance {
    let limits = Limits {
        max_n: 6,
        max_order: 1000,
        even: true,
        trivial_symmetry: false,
    };
    loop {
        let inst = random_instance(rng, limits, name.clone());
        if inst.total_order() <= cap {
            return inst;
        }
    }
}

/// `N` copies of the chain with exponents `p`, cyclically shifted.
pub fn chain_swap(p: &[u32], copies: usize) -> Instance {
    let orbit = Orbit {
        loop_type: false,
        exponents: p.to_vec(),
        copies,
        rotation: 0,
    };
    from_orbit(orbit)
}

/// One loop with `ℓ`-periodic exponents `pattern`, rotated by `s·ℓ`.
pub fn loop_rotation(pattern: &[u32], k: usize, s: usize) -> Instance {
    let ell = pattern.len();
    let orbit = Orbit {
        loop_type: true,
        exponents: (0..ell * k).map(|i| pattern[i % ell]).collect(),
        copies: 1,
        rotation: s * ell,
    };
    from_orbit(orbit)
}

fn from_orbit(orbit: Orbit) -> Instance {
    let (rows, images) = assemble(&[orbit]);
    let n = images.len();
    let matrix = ExponentMatrix::new(rows).unwrap();
    Instance::new(
        "constructed",
        matrix,
        FiniteSubgroup::trivial(n),
        Permutation::new(images).unwrap(),
    )
    .unwrap()
}
