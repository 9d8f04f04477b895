//! Elements and finite subgroups of the torsion group (Q/Z)^n.
//!
//! A diagonal symmetry `diag(exp(2πi a_1), …, exp(2πi a_n))` is stored
//! additively as the vector `a` with every coordinate reduced into `[0, 1)`.
//! Vectors keep a single common denominator, normalized so that the
//! denominator is the exact order of the element.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TorsionVector {
    den: u64,
    num: Vec<u64>,
}

impl TorsionVector {
    pub fn zero(dim: usize) -> Self {
        TorsionVector {
            den: 1,
            num: vec![0; dim],
        }
    }

    /// Builds `(1/den)·num mod Z^n`. Numerators may be negative or exceed `den`.
    pub fn new(den: u64, num: &[i64]) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse("denominator must be positive".into()));
        }
        let d = den as i128;
        let num = num
            .iter()
            .map(|&x| (x as i128).rem_euclid(d) as u64)
            .collect();
        Ok(Self::normalized(den, num))
    }

    pub fn from_rationals(coords: &[Ratio<i64>]) -> Self {
        let den = coords
            .iter()
            .fold(1u64, |acc, q| acc.lcm(&(q.denom().unsigned_abs())));
        let num = coords
            .iter()
            .map(|q| {
                let scale = (den / q.denom().unsigned_abs()) as i128;
                let signed = *q.numer() as i128 * scale * q.denom().signum() as i128;
                signed.rem_euclid(den as i128) as u64
            })
            .collect();
        Self::normalized(den, num)
    }

    /// From numerators already reduced into `[0, den)`.
    pub(crate) fn from_reduced(den: u64, num: Vec<u64>) -> Self {
        debug_assert!(num.iter().all(|&x| x < den));
        Self::normalized(den, num)
    }

    fn normalized(den: u64, mut num: Vec<u64>) -> Self {
        let g = num.iter().fold(den, |acc, &x| acc.gcd(&x));
        let den = den / g;
        for x in &mut num {
            *x /= g;
        }
        TorsionVector { den, num }
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    /// Common denominator; equals the additive order of the element.
    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn numerators(&self) -> &[u64] {
        &self.num
    }

    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.den == 1
    }

    pub fn coord(&self, j: usize) -> Ratio<i64> {
        Ratio::new(self.num[j] as i64, self.den as i64)
    }

    pub fn coords(&self) -> Vec<Ratio<i64>> {
        (0..self.dim()).map(|j| self.coord(j)).collect()
    }

    pub fn coord_is_zero(&self, j: usize) -> bool {
        self.num[j] == 0
    }

    /// Reduced `(numerator, denominator)` of coordinate `j`.
    fn coord_pair(&self, j: usize) -> (u64, u64) {
        let g = self.num[j].gcd(&self.den);
        (self.num[j] / g, self.den / g)
    }

    pub fn scale(&self, k: i64) -> Self {
        let d = self.den as i128;
        let num = self
            .num
            .iter()
            .map(|&x| (x as i128 * k as i128).rem_euclid(d) as u64)
            .collect();
        Self::normalized(self.den, num)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self.combine_with(other, false))
    }

    fn combine_with(&self, other: &Self, subtract: bool) -> Self {
        let l = self.den.lcm(&other.den);
        let (sa, sb) = ((l / self.den) as u128, (l / other.den) as u128);
        let l128 = l as u128;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(&a, &b)| {
                let a = a as u128 * sa;
                let b = b as u128 * sb;
                if subtract {
                    ((a + l128 - b) % l128) as u64
                } else {
                    ((a + b) % l128) as u64
                }
            })
            .collect();
        Self::normalized(l, num)
    }

    /// Pairs `(den, numerators)` as used by the instance file format.
    pub fn to_den_num(&self) -> (u64, Vec<u64>) {
        (self.den, self.num.clone())
    }
}

impl Add for &TorsionVector {
    type Output = TorsionVector;
    fn add(self, rhs: &TorsionVector) -> TorsionVector {
        assert_eq!(self.dim(), rhs.dim(), "torsion vector dimension mismatch");
        self.combine_with(rhs, false)
    }
}

impl Sub for &TorsionVector {
    type Output = TorsionVector;
    fn sub(self, rhs: &TorsionVector) -> TorsionVector {
        assert_eq!(self.dim(), rhs.dim(), "torsion vector dimension mismatch");
        self.combine_with(rhs, true)
    }
}

impl Neg for &TorsionVector {
    type Output = TorsionVector;
    fn neg(self) -> TorsionVector {
        self.scale(-1)
    }
}

impl Ord for TorsionVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim().cmp(&other.dim()).then_with(|| {
            (0..self.dim())
                .map(|j| self.coord_pair(j).cmp(&other.coord_pair(j)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for TorsionVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TorsionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            return write!(f, "0");
        }
        let nums: Vec<String> = self.num.iter().map(|x| x.to_string()).collect();
        write!(f, "1/{}({})", self.den, nums.join(","))
    }
}

/// Incremental subgroup closure: adds generators one at a time, extending
/// the enumerated set by whole cosets.
#[derive(Clone, Debug)]
struct Closure {
    dim: usize,
    set: HashSet<TorsionVector>,
    elements: Vec<TorsionVector>,
}

impl Closure {
    fn new(dim: usize) -> Self {
        let zero = TorsionVector::zero(dim);
        Closure {
            dim,
            set: HashSet::from([zero.clone()]),
            elements: vec![zero],
        }
    }

    /// Returns false when `g` was already a member.
    fn add_generator(&mut self, g: &TorsionVector) -> bool {
        debug_assert_eq!(g.dim(), self.dim);
        if self.set.contains(g) {
            return false;
        }
        let base = self.elements.clone();
        let mut shift = g.clone();
        while !self.set.contains(&shift) {
            for e in &base {
                let x = e + &shift;
                self.set.insert(x.clone());
                self.elements.push(x);
            }
            shift = &shift + g;
        }
        true
    }

    fn contains(&self, g: &TorsionVector) -> bool {
        self.set.contains(g)
    }

    fn into_sorted(mut self) -> Vec<TorsionVector> {
        self.elements.sort();
        self.elements
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    Sum,
    Intersection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapMode {
    Image,
    Kernel,
}

/// A finite subgroup of (Q/Z)^n, materialized by full enumeration.
#[derive(Clone, Debug)]
pub struct FiniteSubgroup {
    dim: usize,
    generators: Vec<TorsionVector>,
    elements: Vec<TorsionVector>,
}

impl PartialEq for FiniteSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.elements == other.elements
    }
}

impl Eq for FiniteSubgroup {}

impl FiniteSubgroup {
    pub fn trivial(dim: usize) -> Self {
        FiniteSubgroup {
            dim,
            generators: Vec::new(),
            elements: vec![TorsionVector::zero(dim)],
        }
    }

    /// Smallest subgroup containing `generators`.
    pub fn span(dim: usize, generators: &[TorsionVector]) -> Result<Self> {
        let mut closure = Closure::new(dim);
        for g in generators {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.dim(),
                });
            }
            closure.add_generator(g);
        }
        Ok(FiniteSubgroup {
            dim,
            generators: generators.to_vec(),
            elements: closure.into_sorted(),
        })
    }

    /// Wraps a set already known to be a subgroup and picks a canonical
    /// generating set: greedily, the smallest element not yet generated.
    pub(crate) fn from_subgroup_elements(dim: usize, mut elements: Vec<TorsionVector>) -> Self {
        elements.sort();
        elements.dedup();
        let mut closure = Closure::new(dim);
        let mut generators = Vec::new();
        for x in &elements {
            if !closure.contains(x) {
                closure.add_generator(x);
                generators.push(x.clone());
            }
        }
        debug_assert_eq!(closure.elements.len(), elements.len(), "not a subgroup");
        FiniteSubgroup {
            dim,
            generators,
            elements,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[TorsionVector] {
        &self.generators
    }

    pub fn elements(&self) -> &[TorsionVector] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &TorsionVector) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &FiniteSubgroup) -> bool {
        self.dim == other.dim && self.elements.iter().all(|g| other.contains(g))
    }

    /// Same subgroup with the canonical generating set.
    pub fn canonical(&self) -> Self {
        Self::from_subgroup_elements(self.dim, self.elements.clone())
    }

    /// Elements satisfying `keep`. The predicate must cut out a subgroup.
    pub fn filter<F: Fn(&TorsionVector) -> bool>(&self, keep: F) -> Self {
        let elements = self.elements.iter().filter(|g| keep(g)).cloned().collect();
        Self::from_subgroup_elements(self.dim, elements)
    }

    pub fn combine(&self, other: &FiniteSubgroup, mode: Combine) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        match mode {
            Combine::Sum => {
                let gens: Vec<_> = self
                    .generators
                    .iter()
                    .chain(&other.generators)
                    .cloned()
                    .collect();
                Self::span(self.dim, &gens)
            }
            Combine::Intersection => {
                let (small, large) = if self.order() <= other.order() {
                    (self, other)
                } else {
                    (other, self)
                };
                Ok(small.filter(|g| large.contains(g)))
            }
        }
    }

    pub fn sum(&self, other: &FiniteSubgroup) -> Self {
        self.combine(other, Combine::Sum)
            .expect("subgroup sum dimension mismatch")
    }

    pub fn intersection(&self, other: &FiniteSubgroup) -> Self {
        self.combine(other, Combine::Intersection)
            .expect("subgroup intersection dimension mismatch")
    }

    /// Image or kernel of an endomorphism of (Q/Z)^n restricted to `self`.
    ///
    /// `phi` is checked for `phi(0) = 0` and additivity on all pairs of
    /// generators before use.
    pub fn map_subgroup<F>(&self, phi: F, mode: MapMode) -> Result<Self>
    where
        F: Fn(&TorsionVector) -> TorsionVector,
    {
        let zero = TorsionVector::zero(self.dim);
        let phi_zero = phi(&zero);
        if phi_zero.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: phi_zero.dim(),
            });
        }
        if !phi_zero.is_zero() {
            return Err(Error::NotHomomorphism("φ(0) ≠ 0".into()));
        }
        let images: Vec<TorsionVector> = self.generators.iter().map(&phi).collect();
        for (i, a) in self.generators.iter().enumerate() {
            for (j, b) in self.generators.iter().enumerate().skip(i) {
                if phi(&(a + b)) != &images[i] + &images[j] {
                    return Err(Error::NotHomomorphism(format!(
                        "φ({a} + {b}) ≠ φ({a}) + φ({b})"
                    )));
                }
            }
        }
        match mode {
            MapMode::Image => Ok(Self::span(self.dim, &images)?.canonical()),
            MapMode::Kernel => Ok(self.filter(|g| phi(g).is_zero())),
        }
    }
}

impl fmt::Display for FiniteSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}> (order {})", gens.join(", "), self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(den: u64, num: &[i64]) -> TorsionVector {
        TorsionVector::new(den, num).unwrap()
    }

    #[test]
    fn normalization_reduces_common_denominator() {
        let v = tv(6, &[2, 4]);
        assert_eq!(v.den(), 3);
        assert_eq!(v.numerators(), &[1, 2]);
        assert!(tv(4, &[4, -8]).is_zero());
        assert_eq!(tv(5, &[-1]), tv(5, &[4]));
    }

    #[test]
    fn arithmetic() {
        let a = tv(2, &[1, 0]);
        let b = tv(3, &[1, 1]);
        assert_eq!(&a + &b, tv(6, &[5, 2]));
        assert_eq!(&a - &a, TorsionVector::zero(2));
        assert_eq!(-&b, tv(3, &[2, 2]));
        assert_eq!(b.scale(3), TorsionVector::zero(2));
        assert!(a.checked_add(&tv(2, &[1])).is_err());
    }

    #[test]
    fn ordering_compares_reduced_pairs() {
        // (1,2) < (1,3) as (numerator, denominator) pairs
        assert!(tv(2, &[1]) < tv(3, &[1]));
        assert!(tv(3, &[1]) < tv(3, &[2]));
        assert!(TorsionVector::zero(1) < tv(7, &[1]));
    }

    #[test]
    fn span_examples() {
        let g = FiniteSubgroup::span(1, &[]).unwrap();
        assert_eq!(g.order(), 1);
        let g = FiniteSubgroup::span(1, &[tv(3, &[1])]).unwrap();
        assert_eq!(g.elements(), &[tv(1, &[0]), tv(3, &[1]), tv(3, &[2])]);
        let g = FiniteSubgroup::span(2, &[tv(2, &[1, 1])]).unwrap();
        assert_eq!(g.elements(), &[TorsionVector::zero(2), tv(2, &[1, 1])]);
        assert!(FiniteSubgroup::span(2, &[tv(2, &[1])]).is_err());
    }

    #[test]
    fn combine_examples() {
        let a = FiniteSubgroup::span(1, &[tv(2, &[1])]).unwrap();
        let b = FiniteSubgroup::span(1, &[tv(3, &[1])]).unwrap();
        let s = a.combine(&b, Combine::Sum).unwrap();
        assert_eq!(s.order(), 6);
        assert!(s.contains(&tv(6, &[1])));
        let i = a.combine(&b, Combine::Intersection).unwrap();
        assert_eq!(i.order(), 1);
        assert_eq!(a.sum(&a), a);
        let c = FiniteSubgroup::span(2, &[]).unwrap();
        assert!(a.combine(&c, Combine::Sum).is_err());
    }

    #[test]
    fn map_subgroup_examples() {
        let z4 = FiniteSubgroup::span(1, &[tv(4, &[1])]).unwrap();
        let ker = z4.map_subgroup(|a| a.clone(), MapMode::Kernel).unwrap();
        assert_eq!(ker.order(), 1);
        let img = z4.map_subgroup(|a| a.scale(2), MapMode::Image).unwrap();
        assert_eq!(img.elements(), &[tv(1, &[0]), tv(2, &[1])]);
        let bad = z4.map_subgroup(|a| &a.scale(2) + &tv(4, &[1]), MapMode::Image);
        assert!(matches!(bad, Err(Error::NotHomomorphism(_))));
    }

    #[test]
    fn canonical_generators_depend_only_on_elements() {
        let a = FiniteSubgroup::span(2, &[tv(3, &[1, 2]), tv(2, &[1, 1])]).unwrap();
        let b = FiniteSubgroup::span(2, &[tv(6, &[5, 1])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.canonical().generators(), b.canonical().generators());
    }
}
