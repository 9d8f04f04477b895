//! Exponent matrices of invertible polynomials.
//!
//! Row `i` of the matrix holds the exponents of monomial `i`, column `j`
//! belongs to variable `x_j`. All coefficients are taken to be 1.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::coords::{CoordSet, MAX_VARIABLES};
use crate::error::{Error, Result};
use crate::torsion::{FiniteSubgroup, TorsionVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentMatrix {
    rows: Vec<Vec<u32>>,
    det: i128,
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub(crate) fn determinant(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

impl ExponentMatrix {
    /// Square, non-negative, non-singular. Chain/loop structure is checked
    /// separately by [`validate_and_decompose`].
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Parse("exponent matrix must be non-empty".into()));
        }
        if n > MAX_VARIABLES {
            return Err(Error::Parse(format!(
                "at most {MAX_VARIABLES} variables are supported"
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        let wide: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let det = determinant(&wide);
        if det == 0 {
            return Err(Error::NotInvertible);
        }
        Ok(ExponentMatrix { rows, det })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn entry(&self, monomial: usize, variable: usize) -> u32 {
        self.rows[monomial][variable]
    }

    pub fn det(&self) -> i128 {
        self.det
    }

    pub fn det_abs(&self) -> u64 {
        self.det.unsigned_abs() as u64
    }

    pub fn transpose(&self) -> ExponentMatrix {
        let n = self.n();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| self.rows[j][i]).collect())
            .collect();
        ExponentMatrix {
            rows,
            det: self.det,
        }
    }

    /// Integer matrix `det(E)·E⁻¹`.
    fn adjugate(&self) -> Vec<Vec<i128>> {
        let n = self.n();
        let mut a: Vec<Vec<Ratio<i128>>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| Ratio::from_integer(x as i128)).collect())
            .collect();
        let mut inv: Vec<Vec<Ratio<i128>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Ratio::one() } else { Ratio::zero() })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .expect("non-singular matrix has a pivot");
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col];
            for j in 0..n {
                a[col][j] /= p;
                inv[col][j] /= p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col];
                    for j in 0..n {
                        let (x, y) = (a[col][j], inv[col][j]);
                        a[r][j] -= factor * x;
                        inv[r][j] -= factor * y;
                    }
                }
            }
        }
        let det = Ratio::from_integer(self.det);
        inv.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| {
                        let v = x * det;
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect()
    }

    /// `frac(bᵀ E a)`, the pairing between diagonal symmetries of the
    /// transpose (`b`) and of this matrix (`a`); returns true when it is 0.
    pub fn pairing_vanishes(&self, b: &TorsionVector, a: &TorsionVector) -> bool {
        let modulus = b.den() as u128 * a.den() as u128;
        let (bn, an) = (b.numerators(), a.numerators());
        let mut acc: u128 = 0;
        for (i, row) in self.rows.iter().enumerate() {
            if bn[i] == 0 {
                continue;
            }
            let inner: u128 = row
                .iter()
                .zip(an)
                .map(|(&e, &x)| e as u128 * x as u128)
                .sum::<u128>()
                % modulus;
            acc = (acc + bn[i] as u128 * inner) % modulus;
        }
        acc == 0
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .rows
            .iter()
            .map(|row| {
                let factors: Vec<String> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| match e {
                        1 => format!("x{}", j + 1),
                        _ => format!("x{}^{}", j + 1, e),
                    })
                    .collect();
                factors.join("*")
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockKind {
    Chain,
    Loop,
}

/// One atomic summand. `variables[k]` is raised to `exponents[k]` in
/// monomial `monomials[k]`, whose second factor (if any) is
/// `variables[k + 1]` (cyclically for loops).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AtomicBlock {
    pub kind: BlockKind,
    pub variables: Vec<usize>,
    pub monomials: Vec<usize>,
    pub exponents: Vec<u32>,
}

impl AtomicBlock {
    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn determinant(&self) -> u64 {
        let product: i128 = self.exponents.iter().map(|&p| p as i128).product();
        match self.kind {
            BlockKind::Chain => product as u64,
            BlockKind::Loop => {
                let sign = if self.len().is_multiple_of(2) { 1 } else { -1 };
                (product - sign).unsigned_abs() as u64
            }
        }
    }

    pub fn variable_set(&self) -> CoordSet {
        CoordSet::from_indices(self.variables.iter().copied())
    }

    pub fn position_of(&self, variable: usize) -> Option<usize> {
        self.variables.iter().position(|&v| v == variable)
    }
}

impl fmt::Display for AtomicBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            BlockKind::Chain => "Chain",
            BlockKind::Loop => "Loop",
        };
        let exps: Vec<String> = self.exponents.iter().map(|p| p.to_string()).collect();
        let vars: Vec<String> = self
            .variables
            .iter()
            .map(|v| format!("x{}", v + 1))
            .collect();
        write!(f, "{kind}[{}] on ({})", exps.join(","), vars.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicDecomposition {
    pub matrix: ExponentMatrix,
    pub blocks: Vec<AtomicBlock>,
}

impl AtomicDecomposition {
    /// Index of the block containing `variable`.
    pub fn block_of(&self, variable: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.variables.contains(&variable))
            .expect("decomposition partitions the variables")
    }
}

impl fmt::Display for AtomicDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

#[derive(Clone, Copy)]
struct HeadChoice {
    head: usize,
    tail: Option<usize>,
}

fn head_candidates(row: &[u32], i: usize) -> Result<Vec<HeadChoice>> {
    let support: Vec<usize> = (0..row.len()).filter(|&j| row[j] > 0).collect();
    match support[..] {
        [a] => Ok(vec![HeadChoice {
            head: a,
            tail: None,
        }]),
        [a, b] => {
            let mut out = Vec::new();
            if row[b] == 1 {
                out.push(HeadChoice {
                    head: a,
                    tail: Some(b),
                });
            }
            if row[a] == 1 {
                out.push(HeadChoice {
                    head: b,
                    tail: Some(a),
                });
            }
            if out.is_empty() {
                return Err(Error::Degenerate(format!(
                    "monomial {} is not of the form x_i^p x_j",
                    i + 1
                )));
            }
            Ok(out)
        }
        [] => Err(Error::Degenerate(format!("monomial {} is constant", i + 1))),
        _ => Err(Error::Degenerate(format!(
            "monomial {} has more than two variables",
            i + 1
        ))),
    }
}

fn assign_heads(
    candidates: &[Vec<HeadChoice>],
    row: usize,
    head_used: &mut [bool],
    tail_used: &mut [bool],
    choice: &mut Vec<HeadChoice>,
) -> bool {
    if row == candidates.len() {
        return true;
    }
    for c in &candidates[row] {
        if head_used[c.head] || c.tail.is_some_and(|t| tail_used[t]) {
            continue;
        }
        head_used[c.head] = true;
        if let Some(t) = c.tail {
            tail_used[t] = true;
        }
        choice.push(*c);
        if assign_heads(candidates, row + 1, head_used, tail_used, choice) {
            return true;
        }
        choice.pop();
        head_used[c.head] = false;
        if let Some(t) = c.tail {
            tail_used[t] = false;
        }
    }
    false
}

/// Splits `E` into chain and loop atoms.
///
/// Each monomial is matched to a "head" variable it contains with exponent
/// `p`; a second variable, if present, must appear with exponent 1 and is the
/// monomial's tail. Heads must be distinct and each variable may be the tail
/// of at most one monomial; the resulting head→tail graph is a disjoint union
/// of paths (chains, ending in a pure power) and cycles (loops). Among valid
/// matchings the first in row order with lower head index preferred is used.
pub fn validate_and_decompose(matrix: &ExponentMatrix) -> Result<AtomicDecomposition> {
    let n = matrix.n();
    let candidates = matrix
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| head_candidates(r, i))
        .collect::<Result<Vec<_>>>()?;
    let mut choice = Vec::with_capacity(n);
    let (mut head_used, mut tail_used) = (vec![false; n], vec![false; n]);
    if !assign_heads(&candidates, 0, &mut head_used, &mut tail_used, &mut choice) {
        return Err(Error::Degenerate(
            "monomials do not decompose into chains and loops".into(),
        ));
    }
    let mut monomial_of = vec![0usize; n];
    let mut next: Vec<Option<usize>> = vec![None; n];
    let mut has_pred = vec![false; n];
    for (i, c) in choice.iter().enumerate() {
        monomial_of[c.head] = i;
        next[c.head] = c.tail;
        if let Some(t) = c.tail {
            has_pred[t] = true;
        }
    }

    let mut visited = vec![false; n];
    let mut blocks = Vec::new();
    let make_block = |kind, vars: Vec<usize>| {
        let monomials: Vec<usize> = vars.iter().map(|&v| monomial_of[v]).collect();
        let exponents = vars
            .iter()
            .map(|&v| matrix.entry(monomial_of[v], v))
            .collect();
        AtomicBlock {
            kind,
            variables: vars,
            monomials,
            exponents,
        }
    };
    for start in 0..n {
        if has_pred[start] || visited[start] {
            continue;
        }
        let mut vars = Vec::new();
        let mut v = Some(start);
        while let Some(x) = v {
            visited[x] = true;
            vars.push(x);
            v = next[x];
        }
        blocks.push(make_block(BlockKind::Chain, vars));
    }
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut vars = vec![start];
        visited[start] = true;
        let mut v = next[start].expect("loop variables have tails");
        while v != start {
            visited[v] = true;
            vars.push(v);
            v = next[v].expect("loop variables have tails");
        }
        blocks.push(make_block(BlockKind::Loop, vars));
    }
    blocks.sort_by_key(|b| *b.variables.iter().min().unwrap());

    let product: u128 = blocks.iter().map(|b| b.determinant() as u128).product();
    if product != matrix.det_abs() as u128 {
        return Err(Error::Internal(format!(
            "block determinants multiply to {product}, |det E| = {}",
            matrix.det_abs()
        )));
    }
    Ok(AtomicDecomposition {
        matrix: matrix.clone(),
        blocks,
    })
}

pub fn transpose(matrix: &ExponentMatrix) -> ExponentMatrix {
    matrix.transpose()
}

/// `G_f = E⁻¹Zⁿ / Zⁿ`, spanned by the columns of `E⁻¹`.
pub fn diagonal_symmetry_group(matrix: &ExponentMatrix) -> FiniteSubgroup {
    let n = matrix.n();
    let adj = matrix.adjugate();
    let sign = matrix.det().signum();
    let den = matrix.det_abs();
    let columns: Vec<TorsionVector> = (0..n)
        .map(|j| {
            let num: Vec<i64> = (0..n).map(|i| (sign * adj[i][j]) as i64).collect();
            TorsionVector::new(den, &num).expect("positive determinant")
        })
        .collect();
    let group = FiniteSubgroup::span(n, &columns).expect("columns have dimension n");
    assert_eq!(group.order() as u64, den, "|G_f| must equal |det E|");
    group.canonical()
}

/// The exponential grading operator `J = E⁻¹·(1, …, 1)`.
pub fn grading_operator(matrix: &ExponentMatrix) -> TorsionVector {
    let n = matrix.n();
    let adj = matrix.adjugate();
    let sign = matrix.det().signum();
    let num: Vec<i64> = (0..n)
        .map(|i| (sign * adj[i].iter().sum::<i128>()) as i64)
        .collect();
    TorsionVector::new(matrix.det_abs(), &num).expect("positive determinant")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedSupport {
    pub admissible: bool,
    /// `E_I` on (surviving monomials, columns of `I`), present when admissible.
    pub sub_matrix: Option<Vec<Vec<u32>>>,
    pub surviving_monomials: Vec<usize>,
}

/// Restriction of `f` to the coordinate subspace `C^I`.
pub fn restrict_support(matrix: &ExponentMatrix, support: CoordSet) -> RestrictedSupport {
    let surviving: Vec<usize> = matrix
        .rows()
        .iter()
        .enumerate()
        .filter(|(_, row)| {
            row.iter()
                .enumerate()
                .all(|(j, &e)| e == 0 || support.contains(j))
        })
        .map(|(i, _)| i)
        .collect();
    let admissible = surviving.len() == support.len();
    let sub_matrix = admissible.then(|| {
        let cols = support.indices();
        surviving
            .iter()
            .map(|&i| cols.iter().map(|&j| matrix.entry(i, j)).collect())
            .collect()
    });
    RestrictedSupport {
        admissible,
        sub_matrix,
        surviving_monomials: surviving,
    }
}

/// `G_f^I`: the elements acting trivially on the torus `(C*)^I`.
pub fn isotropy_subgroup(group: &FiniteSubgroup, support: CoordSet) -> FiniteSubgroup {
    group.filter(|a| support.iter().all(|j| a.coord_is_zero(j)))
}

/// The subgroup of `G_f̃` of characters vanishing on `group ⊆ G_f`.
pub fn dual_subgroup(matrix: &ExponentMatrix, group: &FiniteSubgroup) -> Result<FiniteSubgroup> {
    let g_f = diagonal_symmetry_group(matrix);
    if !group.is_subgroup_of(&g_f) {
        return Err(Error::NotSubgroup);
    }
    let g_ft = diagonal_symmetry_group(&matrix.transpose());
    let gens = group.canonical();
    let dual = g_ft.filter(|b| {
        gens.generators()
            .iter()
            .all(|a| matrix.pairing_vanishes(b, a))
    });
    if dual.order() * group.order() != g_f.order() {
        return Err(Error::Internal(format!(
            "|G̃|·|G| = {}·{} ≠ |G_f| = {}",
            dual.order(),
            group.order(),
            g_f.order()
        )));
    }
    Ok(dual)
}
