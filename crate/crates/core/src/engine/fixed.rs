//! Fixed subspaces of commuting elements of `G⋊S`, restriction of `f` to
//! them, and Euler characteristics of the restricted Milnor fibres.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;

use super::cyclotomic::Cyclotomic;
use crate::coords::CoordSet;
use crate::error::{Error, Result};
use crate::invertible::{determinant, ExponentMatrix};
use crate::symmetry::{act_unchecked, apply_to_set, shift_unchecked, Permutation};
use crate::torsion::TorsionVector;

/// An element `(a, σ)` of `G⋊S`, acting by `x ↦ diag(exp(2πi a))·σ(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymElement {
    pub diag: TorsionVector,
    pub perm: Permutation,
}

impl SymElement {
    pub fn new(diag: TorsionVector, perm: Permutation) -> Self {
        assert_eq!(diag.dim(), perm.n(), "element dimension mismatch");
        SymElement { diag, perm }
    }

    /// `(a, σ)(b, τ) = (a + σ(b), στ)`.
    pub fn mul(&self, other: &SymElement) -> SymElement {
        SymElement {
            diag: &self.diag + &act_unchecked(&self.perm, &other.diag),
            perm: self.perm.compose(&other.perm),
        }
    }

    pub fn commutes_with(&self, other: &SymElement) -> bool {
        self.mul(other) == other.mul(self)
    }
}

/// `σσ′ = σ′σ` and `A_{σ′}(λ) = A_σ(λ′)`.
pub fn commute_by_shift(g: &SymElement, h: &SymElement) -> bool {
    g.perm.compose(&h.perm) == h.perm.compose(&g.perm)
        && shift_unchecked(&h.perm, &g.diag) == shift_unchecked(&g.perm, &h.diag)
}

fn frac(r: Ratio<i64>) -> Ratio<i64> {
    r - r.floor()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FixedComponent {
    pub support: CoordSet,
    pub anchor: usize,
    /// `x_j = exp(2πi·phases[j])·t` on this component.
    pub phases: BTreeMap<usize, Ratio<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixedSpace {
    pub n: usize,
    pub components: Vec<FixedComponent>,
}

impl FixedSpace {
    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn covered(&self) -> CoordSet {
        CoordSet::from_indices(self.components.iter().flat_map(|c| c.support.iter()))
    }
}

impl fmt::Display for FixedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                let ph: Vec<String> = c
                    .phases
                    .iter()
                    .map(|(j, p)| format!("x{}:{}", j + 1, p))
                    .collect();
                format!("[{}]", ph.join(" "))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Common fixed subspace of pairwise commuting elements.
pub fn fixed_space(elements: &[SymElement]) -> Result<FixedSpace> {
    let n = elements.first().map_or(0, |e| e.perm.n());
    fixed_space_within(elements, CoordSet::full(n))
}

/// As [`fixed_space`], inside the coordinate subspace `C^support`, which
/// every element must preserve.
pub fn fixed_space_within(elements: &[SymElement], support: CoordSet) -> Result<FixedSpace> {
    let n = elements.first().map_or(support.len(), |e| e.perm.n());
    for (i, g) in elements.iter().enumerate() {
        if g.perm.n() != n || g.diag.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.perm.n(),
            });
        }
        if apply_to_set(&g.perm, support) != support {
            return Err(Error::ContractViolation(format!(
                "{} does not preserve the support {support}",
                g.perm
            )));
        }
        for h in &elements[i + 1..] {
            if !commute_by_shift(g, h) {
                return Err(Error::ContractViolation(format!(
                    "({}, {}) and ({}, {}) do not commute",
                    g.diag, g.perm, h.diag, h.perm
                )));
            }
        }
    }
    Ok(build_fixed_space(n, elements, support))
}

fn build_fixed_space(n: usize, elements: &[SymElement], support: CoordSet) -> FixedSpace {
    // x_{σ(j)} = exp(2πi a_{σ(j)})·x_j for every element (a, σ)
    let mut edges: Vec<Vec<(usize, Ratio<i64>)>> = vec![Vec::new(); n];
    for g in elements {
        for j in support.iter() {
            let k = g.perm.apply(j);
            let phase = g.diag.coord(k);
            edges[j].push((k, phase));
            edges[k].push((j, -phase));
        }
    }
    let mut phase: Vec<Option<Ratio<i64>>> = vec![None; n];
    let mut components = Vec::new();
    for start in support.iter() {
        if phase[start].is_some() {
            continue;
        }
        phase[start] = Some(Ratio::zero());
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        let mut consistent = true;
        while let Some(j) = queue.pop_front() {
            let pj = phase[j].unwrap();
            for &(k, d) in &edges[j] {
                let expected = frac(pj + d);
                match phase[k] {
                    None => {
                        phase[k] = Some(expected);
                        members.push(k);
                        queue.push_back(k);
                    }
                    Some(pk) => consistent &= pk == expected,
                }
            }
        }
        if consistent {
            members.sort_unstable();
            components.push(FixedComponent {
                support: CoordSet::from_indices(members.iter().copied()),
                anchor: start,
                phases: members.iter().map(|&j| (j, phase[j].unwrap())).collect(),
            });
        }
    }
    FixedSpace { n, components }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedTerm {
    pub exponents: Vec<u32>,
    pub coefficient: Cyclotomic,
}

/// `f` restricted to a fixed subspace, in the component coordinates `t_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedPolynomial {
    pub t_dim: usize,
    pub terms: Vec<RestrictedTerm>,
}

impl fmt::Display for RestrictedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let mono: Vec<String> = t
                    .exponents
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(c, &e)| format!("t{}^{e}", c + 1))
                    .collect();
                format!("({})·{}", t.coefficient, mono.join("*"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn restrict_to_fixed(matrix: &ExponentMatrix, fs: &FixedSpace) -> RestrictedPolynomial {
    let n = matrix.n();
    assert_eq!(fs.n, n, "fixed space built for a different n");
    let mut comp_of: Vec<Option<(usize, Ratio<i64>)>> = vec![None; n];
    for (c, comp) in fs.components.iter().enumerate() {
        for (&j, &p) in &comp.phases {
            comp_of[j] = Some((c, p));
        }
    }
    let mut collected: BTreeMap<Vec<u32>, Vec<Ratio<i64>>> = BTreeMap::new();
    'rows: for row in matrix.rows() {
        let mut exponents = vec![0u32; fs.dimension()];
        let mut phase = Ratio::zero();
        for (j, &e) in row.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let Some((c, p)) = comp_of[j] else {
                continue 'rows;
            };
            exponents[c] += e;
            phase = frac(phase + p * e as i64);
        }
        collected.entry(exponents).or_default().push(phase);
    }
    let terms = collected
        .into_iter()
        .map(|(exponents, phases)| RestrictedTerm {
            exponents,
            coefficient: Cyclotomic::from_phases(&phases),
        })
        .filter(|t| !t.coefficient.is_zero())
        .collect();
    RestrictedPolynomial {
        t_dim: fs.dimension(),
        terms,
    }
}

/// Euler characteristic of `{g = 1}` on the torus stratum where exactly the
/// coordinates in `stratum` are nonzero.
pub fn stratum_euler(rp: &RestrictedPolynomial, stratum: CoordSet) -> Result<i64> {
    let cols = stratum.indices();
    let terms: Vec<&RestrictedTerm> = rp
        .terms
        .iter()
        .filter(|t| {
            t.exponents
                .iter()
                .enumerate()
                .all(|(c, &e)| e == 0 || stratum.contains(c))
        })
        .collect();
    let k = cols.len();
    if terms.len() < k || k == 0 {
        return Ok(0);
    }
    if terms.len() > k {
        return Err(Error::OracleInapplicable(format!(
            "{} terms on a {k}-dimensional torus stratum in {rp}",
            terms.len()
        )));
    }
    let sub: Vec<Vec<i128>> = terms
        .iter()
        .map(|t| cols.iter().map(|&c| t.exponents[c] as i128).collect())
        .collect();
    let det = determinant(&sub);
    if det == 0 {
        return Err(Error::OracleInapplicable(format!(
            "singular exponent matrix on stratum {stratum} in {rp}"
        )));
    }
    let sign = if k % 2 == 1 { 1 } else { -1 };
    Ok(sign * det.abs() as i64)
}

/// `χ({g = 1})` summed over all torus strata.
pub fn torus_euler(rp: &RestrictedPolynomial) -> Result<i64> {
    CoordSet::all(rp.t_dim)
        .filter(|j| !j.is_empty())
        .map(|j| stratum_euler(rp, j))
        .sum()
}

/// `χ({g = 1})` on the open torus `(C*)^{t_dim}` only.
pub fn open_torus_euler(rp: &RestrictedPolynomial) -> Result<i64> {
    stratum_euler(rp, CoordSet::full(rp.t_dim))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(den: u64, num: &[i64]) -> TorsionVector {
        TorsionVector::new(den, num).unwrap()
    }

    fn el(den: u64, num: &[i64], perm: &str) -> SymElement {
        SymElement::new(tv(den, num), Permutation::parse(perm, num.len()).unwrap())
    }

    #[test]
    fn identity_fixes_everything() {
        let fs = fixed_space(&[el(1, &[0, 0, 0], "")]).unwrap();
        assert_eq!(fs.dimension(), 3);
        assert!(fs
            .components
            .iter()
            .all(|c| c.support.len() == 1 && c.phases.values().all(|p| p.is_zero())));
    }

    #[test]
    fn swap_with_half_phases() {
        let fs = fixed_space(&[el(2, &[1, 1], "(1 2)")]).unwrap();
        assert_eq!(fs.dimension(), 1);
        let c = &fs.components[0];
        assert_eq!(c.support, CoordSet::from_indices([0, 1]));
        assert_eq!(c.phases[&1], Ratio::new(1, 2));
        // x = (t, −t) is fixed: x_2 = −x_1 and x_1 = −x_2
        let fs = fixed_space(&[el(3, &[1, 0], "(1 2)")]).unwrap();
        assert_eq!(fs.dimension(), 0);
    }

    #[test]
    fn non_commuting_input_is_rejected() {
        let err = fixed_space(&[el(3, &[1, 0], ""), el(1, &[0, 0], "(1 2)")]).unwrap_err();
        assert!(matches!(err, Error::ContractViolation(_)));
    }

    #[test]
    fn swapped_chains_restrict_with_multiplicity() {
        let e = ExponentMatrix::new(vec![
            vec![2, 1, 0, 0],
            vec![0, 3, 0, 0],
            vec![0, 0, 2, 1],
            vec![0, 0, 0, 3],
        ])
        .unwrap();
        let fs = fixed_space(&[el(1, &[0, 0, 0, 0], "(1 3)(2 4)")]).unwrap();
        let rp = restrict_to_fixed(&e, &fs);
        assert_eq!(rp.t_dim, 2);
        assert_eq!(rp.terms.len(), 2);
        assert_eq!(rp.terms[0].exponents, vec![0, 3]);
        assert_eq!(rp.terms[1].exponents, vec![2, 1]);
        for t in &rp.terms {
            assert_eq!(t.coefficient.reduced_coefficients(), vec![2]);
        }
    }

    #[test]
    fn rotated_loop_collapses_to_one_term() {
        let e = ExponentMatrix::new(vec![vec![2, 1, 0], vec![0, 2, 1], vec![1, 0, 2]]).unwrap();
        let fs = fixed_space(&[el(1, &[0, 0, 0], "(1 2 3)")]).unwrap();
        let rp = restrict_to_fixed(&e, &fs);
        assert_eq!(rp.terms.len(), 1);
        assert_eq!(rp.terms[0].exponents, vec![3]);
        assert_eq!(rp.terms[0].coefficient.reduced_coefficients(), vec![3]);
        assert_eq!(torus_euler(&rp).unwrap(), 3);
    }

    #[test]
    fn euler_of_atoms() {
        let full = |e: &ExponentMatrix| {
            let n = e.n();
            let fs = fixed_space(&[SymElement::new(
                TorsionVector::zero(n),
                Permutation::identity(n),
            )])
            .unwrap();
            restrict_to_fixed(e, &fs)
        };
        // t^5 = 1: five points
        let fermat = ExponentMatrix::new(vec![vec![5]]).unwrap();
        assert_eq!(torus_euler(&full(&fermat)).unwrap(), 5);
        // chain y1^2 y2 + y2^3 on the open torus: −2·3
        let chain = ExponentMatrix::new(vec![vec![2, 1], vec![0, 3]]).unwrap();
        assert_eq!(open_torus_euler(&full(&chain)).unwrap(), -6);
        // loop: ±(P − (−1)^ℓ) with P = 2·3
        let lp = ExponentMatrix::new(vec![vec![2, 1], vec![1, 3]]).unwrap();
        assert_eq!(open_torus_euler(&full(&lp)).unwrap(), -5);
        // reduced Milnor fibre Euler characteristics are μ·(−1)^{n−1} + 1 − 1:
        // χ(V_f) = 1 + (−1)^{n−1} μ with μ = ∏ (1/w_i − 1)
        assert_eq!(torus_euler(&full(&chain)).unwrap(), 1 - 4);
        assert_eq!(torus_euler(&full(&lp)).unwrap(), 1 - 6);
    }

    #[test]
    fn cancelling_coefficients_are_dropped() {
        // x1^2 + x2^2 on the line x2 = i·x1 restricts to 0
        let e = ExponentMatrix::new(vec![vec![2, 0], vec![0, 2]]).unwrap();
        let fs = FixedSpace {
            n: 2,
            components: vec![FixedComponent {
                support: CoordSet::from_indices([0, 1]),
                anchor: 0,
                phases: BTreeMap::from([(0, Ratio::zero()), (1, Ratio::new(1, 4))]),
            }],
        };
        let rp = restrict_to_fixed(&e, &fs);
        assert!(rp.terms.is_empty());
        assert_eq!(torus_euler(&rp).unwrap(), 0);
    }
}
