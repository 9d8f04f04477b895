//! Direct evaluation of the orbifold Euler characteristic from its
//! definition as a sum over commuting pairs.

use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::fixed::{
    commute_by_shift, fixed_space, fixed_space_within, open_torus_euler, restrict_to_fixed,
    torus_euler, FixedSpace, SymElement,
};
use super::instance::Instance;
use super::pipeline::Rational;
use crate::coords::CoordSet;
use crate::error::{Error, Result};
use crate::symmetry::apply_to_set;
use crate::symmetry::Permutation;

pub const DEFAULT_ORACLE_CAP: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteForce {
    pub reduced: i64,
    pub unreduced: i64,
    pub point_term: i64,
    pub commuting_pairs: u64,
}

fn annotate(err: Error, g: &SymElement, h: &SymElement) -> Error {
    match err {
        Error::OracleInapplicable(msg) => Error::OracleInapplicable(format!(
            "{msg} (pair ({}, {}), ({}, {}))",
            g.diag, g.perm, h.diag, h.perm
        )),
        other => other,
    }
}

/// All elements of `G⋊S`, ordered by permutation power, then by `λ`.
pub fn semidirect_elements(inst: &Instance) -> Vec<SymElement> {
    inst.symmetry()
        .elements()
        .iter()
        .flat_map(|sigma| {
            inst.group()
                .elements()
                .iter()
                .map(move |l| SymElement::new(l.clone(), sigma.clone()))
        })
        .collect()
}

/// Reduced orbifold Euler characteristic by enumeration of all commuting
/// pairs in `G⋊S`.
pub fn orbifold_euler_bruteforce(inst: &Instance, cap: usize) -> Result<BruteForce> {
    let order = inst.total_order();
    if order > cap {
        return Err(Error::OracleCapExceeded { order, cap });
    }
    let elements = semidirect_elements(inst);
    let matrix = inst.matrix();
    let (sum, pairs) = elements
        .par_iter()
        .map_init(HashMap::<FixedSpace, i64>::new, |memo, g| {
            let mut sum = 0i128;
            let mut pairs = 0u64;
            for h in &elements {
                if !g.commutes_with(h) {
                    continue;
                }
                pairs += 1;
                let fs = fixed_space(&[g.clone(), h.clone()]).map_err(|e| annotate(e, g, h))?;
                let chi = match memo.get(&fs) {
                    Some(&v) => v,
                    None => {
                        let v = torus_euler(&restrict_to_fixed(matrix, &fs))
                            .map_err(|e| annotate(e, g, h))?;
                        memo.insert(fs, v);
                        v
                    }
                };
                sum += chi as i128;
            }
            Ok((sum, pairs))
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    let order = order as i128;
    if sum % order != 0 || pairs as i128 % order != 0 {
        return Err(Error::Internal(format!(
            "brute-force sums {sum} and {pairs} are not divisible by |G⋊S| = {order}"
        )));
    }
    let unreduced = (sum / order) as i64;
    let point_term = (pairs as i128 / order) as i64;
    Ok(BruteForce {
        reduced: unreduced - point_term,
        unreduced,
        point_term,
        commuting_pairs: pairs,
    })
}

/// `χ^I(σ, σ′)` by summing Euler characteristics of fixed loci in
/// `V_f ∩ (C*)^I` over all `(λ, λ′) ∈ G²` giving commuting pairs.
pub fn chi_i_pair_definitional(
    inst: &Instance,
    support: CoordSet,
    sigma: &Permutation,
    sigma_prime: &Permutation,
) -> Result<Rational> {
    for p in [sigma, sigma_prime] {
        if inst.symmetry().power_of(p).is_none() || apply_to_set(p, support) != support {
            return Err(Error::ContractViolation(format!(
                "{p} is not in the isotropy group of {support}"
            )));
        }
    }
    let group = inst.group();
    let mut total = 0i128;
    let mut memo: HashMap<FixedSpace, i64> = HashMap::new();
    for l in group.elements() {
        let g = SymElement::new(l.clone(), sigma.clone());
        for l2 in group.elements() {
            let h = SymElement::new(l2.clone(), sigma_prime.clone());
            if !commute_by_shift(&g, &h) {
                continue;
            }
            if support.is_empty() {
                total -= 1;
                continue;
            }
            let fs = fixed_space_within(&[g.clone(), h.clone()], support)?;
            if fs.covered() != support {
                continue;
            }
            let chi = match memo.get(&fs) {
                Some(&v) => v,
                None => {
                    let v = open_torus_euler(&restrict_to_fixed(inst.matrix(), &fs))
                        .map_err(|e| annotate(e, &g, &h))?;
                    memo.insert(fs, v);
                    v
                }
            };
            total += chi as i128;
        }
    }
    let r = Rational::new(total, group.order() as i128);
    debug_assert!(group.order() > 0 || r.is_zero());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invertible::ExponentMatrix;
    use crate::torsion::{FiniteSubgroup, TorsionVector};

    fn x_squared(group: FiniteSubgroup) -> Instance {
        let m = ExponentMatrix::new(vec![vec![2]]).unwrap();
        Instance::new("x^2", m, group, Permutation::identity(1)).unwrap()
    }

    #[test]
    fn fermat_quadric() {
        let trivial = x_squared(FiniteSubgroup::trivial(1));
        assert_eq!(orbifold_euler_bruteforce(&trivial, 500).unwrap().reduced, 1);
        let z2 = FiniteSubgroup::span(1, &[TorsionVector::new(2, &[1]).unwrap()]).unwrap();
        let full = x_squared(z2);
        let bf = orbifold_euler_bruteforce(&full, 500).unwrap();
        assert_eq!(bf.reduced, -1);
        assert_eq!(bf.point_term, 2);
        assert!(matches!(
            orbifold_euler_bruteforce(&full, 1),
            Err(Error::OracleCapExceeded { order: 2, cap: 1 })
        ));
    }

    #[test]
    fn definitional_empty_set() {
        let z2 = FiniteSubgroup::span(1, &[TorsionVector::new(2, &[1]).unwrap()]).unwrap();
        let inst = x_squared(z2);
        let id = Permutation::identity(1);
        let v = chi_i_pair_definitional(&inst, CoordSet::EMPTY, &id, &id).unwrap();
        assert_eq!(v, Rational::from_integer(-2));
    }
}
