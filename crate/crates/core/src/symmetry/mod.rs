//! Permutation symmetries of invertible polynomials and their interaction
//! with diagonal symmetries.
//!
//! Conventions: `(σ·x)_j = x_{σ⁻¹(j)}`, and a pair `(a, σ)` with `a` a
//! torsion vector acts by `x ↦ diag(exp(2πi a))·σ(x)`.

mod blocks;
mod permutation;

pub use blocks::{classify_block_actions, BlockAction, BlockActionKind, BlockActions};
pub use permutation::{CyclicPermGroup, Permutation};

use num_rational::Ratio;

use crate::coords::CoordSet;
use crate::error::{Error, Result};
use crate::invertible::ExponentMatrix;
use crate::torsion::{FiniteSubgroup, TorsionVector};

pub fn parse_permutation(text: &str, n: usize) -> Result<Permutation> {
    Permutation::parse(text, n)
}

fn check_dim(sigma: &Permutation, a: &TorsionVector) -> Result<()> {
    if sigma.n() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.n(),
            found: a.dim(),
        });
    }
    Ok(())
}

/// The monomial permutation `τ` induced by `σ`: `E[τ(i)][k] = E[i][σ(k)]`.
pub fn check_preserves(matrix: &ExponentMatrix, sigma: &Permutation) -> Result<Permutation> {
    let n = matrix.n();
    if sigma.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: sigma.n(),
        });
    }
    let mut taken = vec![false; n];
    let mut tau = Vec::with_capacity(n);
    for i in 0..n {
        let moved: Vec<u32> = (0..n).map(|k| matrix.entry(i, sigma.apply(k))).collect();
        let target = (0..n)
            .find(|&r| !taken[r] && matrix.rows()[r] == moved)
            .ok_or_else(|| {
                Error::NotPreserved(format!("{sigma} sends monomial {} outside f", i + 1))
            })?;
        taken[target] = true;
        tau.push(target);
    }
    Permutation::new(tau)
}

/// `σ(a)` with `σ(a)_j = a_{σ⁻¹(j)}`.
pub fn act(sigma: &Permutation, a: &TorsionVector) -> Result<TorsionVector> {
    check_dim(sigma, a)?;
    Ok(act_unchecked(sigma, a))
}

pub(crate) fn act_unchecked(sigma: &Permutation, a: &TorsionVector) -> TorsionVector {
    let src = a.numerators();
    let mut num = vec![0u64; src.len()];
    for (j, &x) in src.iter().enumerate() {
        num[sigma.apply(j)] = x;
    }
    TorsionVector::from_reduced(a.den(), num)
}

/// `σ(G) = G`.
pub fn is_invariant_subgroup(sigma: &Permutation, group: &FiniteSubgroup) -> bool {
    sigma.n() == group.dim()
        && group
            .generators()
            .iter()
            .all(|g| group.contains(&act_unchecked(sigma, g)))
}

/// Sum of `a` over each cycle of `σ` (the additive cycle products), mod 1.
pub fn cycle_map(sigma: &Permutation, a: &TorsionVector) -> Result<Vec<Ratio<i64>>> {
    check_dim(sigma, a)?;
    let den = a.den();
    Ok(sigma
        .cycles()
        .iter()
        .map(|c| {
            let s: u64 = c.iter().map(|&j| a.numerators()[j]).sum::<u64>() % den;
            Ratio::new(s as i64, den as i64)
        })
        .collect())
}

pub(crate) fn in_cycle_kernel(sigma: &Permutation, a: &TorsionVector) -> bool {
    let den = a.den();
    sigma
        .cycles()
        .iter()
        .all(|c| c.iter().map(|&j| a.numerators()[j]).sum::<u64>() % den == 0)
}

/// `A_σ(a) = a − σ(a)`.
pub fn shift_map(sigma: &Permutation, a: &TorsionVector) -> Result<TorsionVector> {
    check_dim(sigma, a)?;
    Ok(shift_unchecked(sigma, a))
}

pub(crate) fn shift_unchecked(sigma: &Permutation, a: &TorsionVector) -> TorsionVector {
    a - &act_unchecked(sigma, a)
}

/// For every subgroup `T` of the cyclic group, `dim (Cⁿ)^T ≡ n (mod 2)`.
///
/// Checked over all subgroups `⟨s^d⟩`, `d | q`, and cross-checked against
/// the equivalent criterion that the generator is an even permutation.
pub fn parity_condition(group: &CyclicPermGroup, n: usize) -> bool {
    assert_eq!(group.n(), n, "permutation group acts on a different n");
    let q = group.order();
    let all_divisors = (1..=q)
        .filter(|d| q.is_multiple_of(*d))
        .all(|d| group.element(d).cycle_count() % 2 == n % 2);
    let shortcut = group.generator().sign() == 1;
    assert_eq!(
        all_divisors,
        shortcut,
        "orbit-count and sign criteria disagree for {}",
        group.generator()
    );
    all_divisors
}

pub fn apply_to_set(sigma: &Permutation, set: CoordSet) -> CoordSet {
    CoordSet::from_indices(set.iter().map(|j| sigma.apply(j)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetOrbit {
    pub representative: CoordSet,
    /// `S^I`, generated by `s^{orbit_size}`.
    pub isotropy: CyclicPermGroup,
    pub orbit_size: usize,
}

fn lex_key(set: CoordSet) -> Vec<usize> {
    set.indices()
}

/// Orbits of the cyclic group on all `2ⁿ` coordinate subsets.
///
/// Representatives are the lexicographically smallest member (as sorted
/// index lists); orbits are listed in representative order.
pub fn subset_orbits(group: &CyclicPermGroup, n: usize) -> Vec<SubsetOrbit> {
    assert_eq!(group.n(), n, "permutation group acts on a different n");
    let s = group.generator();
    let q = group.order();
    let mut seen = vec![false; 1usize << n];
    let mut orbits = Vec::new();
    for set in CoordSet::all(n) {
        if seen[set.bits() as usize] {
            continue;
        }
        let mut members = vec![set];
        let mut next = apply_to_set(s, set);
        while next != set {
            members.push(next);
            next = apply_to_set(s, next);
        }
        for m in &members {
            seen[m.bits() as usize] = true;
        }
        let orbit_size = members.len();
        debug_assert_eq!(q % orbit_size, 0);
        let complement_size = {
            let c = set.complement(n);
            (1..=q)
                .find(|&m| apply_to_set(group.element(m), c) == c)
                .unwrap()
        };
        assert_eq!(
            complement_size, orbit_size,
            "S^I must equal S^(complement of I)"
        );
        let representative = members
            .into_iter()
            .min_by_key(|m| lex_key(*m))
            .expect("orbit is non-empty");
        orbits.push(SubsetOrbit {
            representative,
            isotropy: CyclicPermGroup::new(group.element(orbit_size).clone()),
            orbit_size,
        });
    }
    orbits.sort_by_key(|o| lex_key(o.representative));
    orbits
}

/// Cycles of `σ` lying inside `set`; `set` must be `σ`-stable.
pub fn cycles_within(sigma: &Permutation, set: CoordSet) -> usize {
    sigma.cycles().iter().filter(|c| set.contains(c[0])).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invertible::{diagonal_symmetry_group, grading_operator};

    fn tv(den: u64, num: &[i64]) -> TorsionVector {
        TorsionVector::new(den, num).unwrap()
    }

    fn perm(text: &str, n: usize) -> Permutation {
        Permutation::parse(text, n).unwrap()
    }

    fn example_matrix() -> ExponentMatrix {
        ExponentMatrix::new(vec![
            vec![4, 1, 0, 0, 0],
            vec![1, 4, 0, 0, 0],
            vec![0, 0, 4, 1, 0],
            vec![0, 0, 1, 4, 0],
            vec![0, 0, 0, 0, 5],
        ])
        .unwrap()
    }

    #[test]
    fn check_preserves_examples() {
        let e = example_matrix();
        let tau = check_preserves(&e, &perm("(1 3)(2 4)", 5)).unwrap();
        assert_eq!(tau, perm("(1 3)(2 4)", 5));
        assert!(check_preserves(&e, &Permutation::identity(5))
            .unwrap()
            .is_identity());
        let f = ExponentMatrix::new(vec![vec![2, 0], vec![0, 3]]).unwrap();
        assert!(matches!(
            check_preserves(&f, &perm("(1 2)", 2)),
            Err(Error::NotPreserved(_))
        ));
        // the swap inside a 2-loop exchanges the two monomials
        let tau = check_preserves(&e, &perm("(1 2)(3 4)", 5)).unwrap();
        assert_eq!(tau, perm("(1 2)(3 4)", 5));
    }

    #[test]
    fn act_examples() {
        let s = perm("(1 2 3)", 3);
        let a = tv(5, &[1, 2, 3]);
        assert_eq!(act(&s, &a).unwrap(), tv(5, &[3, 1, 2]));
        assert_eq!(act(&Permutation::identity(3), &a).unwrap(), a);
        assert_eq!(act(&s, &act(&s.inverse(), &a).unwrap()).unwrap(), a);
        let t = perm("(1 2)", 3);
        assert_eq!(
            act(&s.compose(&t), &a).unwrap(),
            act(&s, &act(&t, &a).unwrap()).unwrap()
        );
        assert!(act(&s, &tv(5, &[1])).is_err());
    }

    #[test]
    fn invariance_examples() {
        let e = example_matrix();
        let j = grading_operator(&e);
        let gj = FiniteSubgroup::span(5, std::slice::from_ref(&j)).unwrap();
        assert!(is_invariant_subgroup(&perm("(1 3)(2 4)", 5), &gj));
        let g = FiniteSubgroup::span(5, &[tv(3, &[1, 2, 0, 0, 0]), tv(3, &[0, 0, 1, 2, 0]), j])
            .unwrap();
        assert!(is_invariant_subgroup(&perm("(1 3)(2 4)", 5), &g));
        let asym = FiniteSubgroup::span(2, &[tv(3, &[1, 0])]).unwrap();
        assert!(!is_invariant_subgroup(&perm("(1 2)", 2), &asym));
    }

    #[test]
    fn cycle_and_shift_examples() {
        let r = |a, b| Ratio::new(a, b);
        assert_eq!(
            cycle_map(&perm("(1 2)", 2), &tv(3, &[1, 2])).unwrap(),
            vec![r(0, 1)]
        );
        assert_eq!(
            cycle_map(&Permutation::identity(2), &tv(3, &[1, 2])).unwrap(),
            vec![r(1, 3), r(2, 3)]
        );
        assert_eq!(
            cycle_map(&perm("(1 2)", 3), &tv(4, &[1, 1, 2])).unwrap(),
            vec![r(1, 2), r(1, 2)]
        );
        assert!(shift_map(&Permutation::identity(2), &tv(3, &[1, 2]))
            .unwrap()
            .is_zero());
        assert_eq!(
            shift_map(&perm("(1 2 3)", 3), &tv(5, &[1, 2, 3])).unwrap(),
            tv(5, &[3, 1, 1])
        );
    }

    #[test]
    fn commutation_criterion_matches_group_law() {
        // (a,σ)(b,τ) = (a + σ(b), στ)
        let e = example_matrix();
        let g_f = diagonal_symmetry_group(&e);
        let s = perm("(1 3)(2 4)", 5);
        let t = perm("(1 2)(3 4)", 5);
        let elems: Vec<_> = g_f.elements().iter().step_by(37).cloned().collect();
        for a in &elems {
            for b in &elems {
                for (x, y) in [(&s, &t), (&s, &s), (&t, &Permutation::identity(5))] {
                    let lhs = (a + &act_unchecked(x, b), x.compose(y));
                    let rhs = (b + &act_unchecked(y, a), y.compose(x));
                    let criterion = x.compose(y) == y.compose(x)
                        && shift_unchecked(y, a) == shift_unchecked(x, b);
                    assert_eq!(lhs == rhs, criterion);
                }
            }
        }
    }

    #[test]
    fn parity_examples() {
        let g = CyclicPermGroup::new(perm("(1 3)(2 4)", 5));
        assert!(parity_condition(&g, 5));
        assert!(!parity_condition(
            &CyclicPermGroup::new(perm("(1 2)", 2)),
            2
        ));
        assert!(parity_condition(&CyclicPermGroup::trivial(4), 4));
        assert!(parity_condition(
            &CyclicPermGroup::new(perm("(1 2 3 4)(5 6)", 6)),
            6
        ));
        assert!(!parity_condition(
            &CyclicPermGroup::new(perm("(1 2 3 4)", 6)),
            6
        ));
    }

    #[test]
    fn subset_orbit_examples() {
        let orbits = subset_orbits(&CyclicPermGroup::trivial(2), 2);
        assert_eq!(orbits.len(), 4);
        assert!(orbits.iter().all(|o| o.orbit_size == 1));

        let orbits = subset_orbits(&CyclicPermGroup::new(perm("(1 2)", 2)), 2);
        let summary: Vec<(Vec<usize>, usize)> = orbits
            .iter()
            .map(|o| (o.representative.indices(), o.isotropy.order()))
            .collect();
        assert_eq!(summary, vec![(vec![], 2), (vec![0], 1), (vec![0, 1], 2)]);
    }

    #[test]
    fn subset_orbit_count_matches_direct_enumeration() {
        // oracle: count distinct orbit sets by brute force over the group
        let g = CyclicPermGroup::new(perm("(1 3)(2 4)", 5));
        let mut orbit_sets = std::collections::BTreeSet::new();
        for set in CoordSet::all(5) {
            let orbit: std::collections::BTreeSet<u64> = g
                .elements()
                .iter()
                .map(|p| apply_to_set(p, set).bits())
                .collect();
            orbit_sets.insert(orbit);
        }
        let orbits = subset_orbits(&g, 5);
        assert_eq!(orbits.len(), orbit_sets.len());
        assert_eq!(orbits.len(), 20);
        for o in &orbits {
            assert_eq!(o.orbit_size * o.isotropy.order(), g.order());
        }
        let covered: usize = orbits.iter().map(|o| o.orbit_size).sum();
        assert_eq!(covered, 32);
    }
}
