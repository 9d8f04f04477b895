use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A permutation of the variable indices, `σ(j) = images[j]` (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
    cycles: Vec<Vec<usize>>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Permutation(format!(
                    "{images:?} is not a bijection of 0..{n}"
                )));
            }
            seen[x] = true;
        }
        let cycles = cycles_of(&images);
        Ok(Permutation { images, cycles })
    }

    pub fn identity(n: usize) -> Self {
        Self::new((0..n).collect()).expect("identity is a bijection")
    }

    /// Parses disjoint cycle notation with 1-based indices, e.g. `"(1 3)(2 4)"`.
    /// An empty string or `"()"` is the identity.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body_start = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Permutation(format!("expected '(' at {rest:?}")))?;
            let close = body_start
                .find(')')
                .ok_or_else(|| Error::Permutation(format!("unclosed cycle in {text:?}")))?;
            let body = &body_start[..close];
            if body.contains('(') {
                return Err(Error::Permutation(format!("nested '(' in {text:?}")));
            }
            let cycle = body
                .split_whitespace()
                .map(|tok| {
                    let k: usize = tok.parse().map_err(|_| {
                        Error::Permutation(format!("{tok:?} is not a positive integer"))
                    })?;
                    if k == 0 || k > n {
                        return Err(Error::Permutation(format!(
                            "index {k} out of range 1..={n}"
                        )));
                    }
                    Ok(k - 1)
                })
                .collect::<Result<Vec<usize>>>()?;
            for &j in &cycle {
                if used[j] {
                    return Err(Error::Permutation(format!("repeated index {}", j + 1)));
                }
                used[j] = true;
            }
            for (k, &j) in cycle.iter().enumerate() {
                images[j] = cycle[(k + 1) % cycle.len()];
            }
            rest = body_start[close + 1..].trim_start();
        }
        Self::new(images)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, j: usize) -> usize {
        self.images[j]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// All cycles including fixed points, each starting at its smallest
    /// element, ordered by that element.
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(j, &x)| j == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (j, &x) in self.images.iter().enumerate() {
            inv[x] = j;
        }
        Self::new(inv).expect("inverse of a bijection")
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.n(), other.n(), "permutation size mismatch");
        let images = other.images.iter().map(|&x| self.images[x]).collect();
        Self::new(images).expect("composition of bijections")
    }

    pub fn pow(&self, k: usize) -> Self {
        let images = (0..self.n())
            .map(|j| {
                let cyc = self.cycles.iter().find(|c| c.contains(&j)).unwrap();
                let pos = cyc.iter().position(|&x| x == j).unwrap();
                cyc[(pos + k) % cyc.len()]
            })
            .collect();
        Self::new(images).expect("power of a bijection")
    }

    pub fn order(&self) -> usize {
        self.cycles.iter().fold(1, |acc, c| acc.lcm(&c.len()))
    }

    /// `(−1)^(n − #cycles)`.
    pub fn sign(&self) -> i32 {
        if (self.n() - self.cycle_count()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

fn cycles_of(images: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; images.len()];
    let mut cycles = Vec::new();
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut j = images[start];
        while j != start {
            seen[j] = true;
            cycle.push(j);
            j = images[j];
        }
        cycles.push(cycle);
    }
    cycles
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for c in self.cycles.iter().filter(|c| c.len() > 1) {
            let items: Vec<String> = c.iter().map(|j| (j + 1).to_string()).collect();
            write!(f, "({})", items.join(" "))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// The cyclic group `⟨s⟩`, with `elements[m] = s^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicPermGroup {
    generator: Permutation,
    elements: Vec<Permutation>,
}

impl CyclicPermGroup {
    pub fn new(generator: Permutation) -> Self {
        let q = generator.order();
        let elements = (0..q).map(|m| generator.pow(m)).collect();
        CyclicPermGroup {
            generator,
            elements,
        }
    }

    pub fn trivial(n: usize) -> Self {
        Self::new(Permutation::identity(n))
    }

    pub fn generator(&self) -> &Permutation {
        &self.generator
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn n(&self) -> usize {
        self.generator.n()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, power: usize) -> &Permutation {
        &self.elements[power % self.order()]
    }

    /// `m` with `s^m = sigma`, if `sigma` belongs to the group.
    pub fn power_of(&self, sigma: &Permutation) -> Option<usize> {
        self.elements.iter().position(|p| p == sigma)
    }

    /// The generator `s^m` of the same group that is smallest by image list.
    pub fn canonical_generator(&self) -> &Permutation {
        let q = self.order();
        (0..q)
            .filter(|m| m.gcd(&q) == 1)
            .map(|m| &self.elements[m])
            .min()
            .expect("a cyclic group has a generator")
    }
}
