use std::fmt;

use crate::error::{Error, Result};
use crate::invertible::{
    diagonal_symmetry_group, dual_subgroup, validate_and_decompose, AtomicDecomposition,
    ExponentMatrix,
};
use crate::symmetry::{
    classify_block_actions, is_invariant_subgroup, parity_condition, BlockActions, CyclicPermGroup,
    Permutation,
};
use crate::torsion::{FiniteSubgroup, TorsionVector};

/// A validated pair `(f, G⋊S)` with `S` cyclic.
#[derive(Clone, Debug)]
pub struct Instance {
    name: String,
    matrix: ExponentMatrix,
    decomposition: AtomicDecomposition,
    group: FiniteSubgroup,
    symmetry: CyclicPermGroup,
    full_group: FiniteSubgroup,
    block_actions: BlockActions,
}

impl Instance {
    pub fn new(
        name: impl Into<String>,
        matrix: ExponentMatrix,
        group: FiniteSubgroup,
        generator: Permutation,
    ) -> Result<Self> {
        let n = matrix.n();
        if group.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: group.dim(),
            });
        }
        if generator.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: generator.n(),
            });
        }
        let decomposition = validate_and_decompose(&matrix)?;
        let full_group = diagonal_symmetry_group(&matrix);
        if !group.is_subgroup_of(&full_group) {
            return Err(Error::NotSubgroup);
        }
        let symmetry = CyclicPermGroup::new(generator);
        let block_actions = classify_block_actions(&decomposition, &symmetry)?;
        if !is_invariant_subgroup(symmetry.generator(), &group) {
            return Err(Error::NotInvariant(symmetry.generator().to_string()));
        }
        Ok(Instance {
            name: name.into(),
            matrix,
            decomposition,
            group: group.canonical(),
            symmetry,
            full_group,
            block_actions,
        })
    }

    /// Builds the instance from generators of `G` and several permutations,
    /// which must generate a cyclic group.
    pub fn from_generators(
        name: impl Into<String>,
        matrix: ExponentMatrix,
        group_generators: &[TorsionVector],
        permutations: &[Permutation],
    ) -> Result<Self> {
        let n = matrix.n();
        let group = FiniteSubgroup::span(n, group_generators)?;
        let generator = cyclic_generator(n, permutations)?;
        Self::new(name, matrix, group, generator)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn matrix(&self) -> &ExponentMatrix {
        &self.matrix
    }

    pub fn decomposition(&self) -> &AtomicDecomposition {
        &self.decomposition
    }

    pub fn group(&self) -> &FiniteSubgroup {
        &self.group
    }

    pub fn symmetry(&self) -> &CyclicPermGroup {
        &self.symmetry
    }

    /// `G_f`.
    pub fn full_group(&self) -> &FiniteSubgroup {
        &self.full_group
    }

    pub fn block_actions(&self) -> &BlockActions {
        &self.block_actions
    }

    pub fn pc_holds(&self) -> bool {
        parity_condition(&self.symmetry, self.n())
    }

    /// `|G⋊S|`.
    pub fn total_order(&self) -> usize {
        self.group.order() * self.symmetry.order()
    }

    /// The BHHT dual `(f̃, G̃⋊S)`.
    pub fn bhht_dual(&self) -> Result<Instance> {
        let dual_group = dual_subgroup(&self.matrix, &self.group)?;
        Instance::new(
            dual_name(&self.name),
            self.matrix.transpose(),
            dual_group,
            self.symmetry.generator().clone(),
        )
        .map_err(|e| match e {
            Error::NotPreserved(m) => Error::NotPreserved(format!(
                "on the transpose ({m}); list monomial i with head variable x_i"
            )),
            Error::NotInvariant(m) => Error::NotInvariant(format!("{m} (dual group)")),
            other => Error::Internal(format!("dual instance failed validation: {other}")),
        })
    }

    /// Same matrix, group and symmetry group, ignoring names and the choice
    /// of generators.
    pub fn same_canonical_form(&self, other: &Instance) -> bool {
        self.matrix == other.matrix
            && self.group == other.group
            && self.symmetry.canonical_generator() == other.symmetry.canonical_generator()
    }
}

fn dual_name(name: &str) -> String {
    match name.strip_suffix("~") {
        Some(original) => original.to_string(),
        None => format!("{name}~"),
    }
}

fn closure(n: usize, permutations: &[Permutation]) -> Vec<Permutation> {
    let mut elements = vec![Permutation::identity(n)];
    let mut frontier = elements.clone();
    while let Some(x) = frontier.pop() {
        for p in permutations {
            let y = p.compose(&x);
            if !elements.contains(&y) {
                elements.push(y.clone());
                frontier.push(y);
            }
        }
    }
    elements
}

/// A single generator of the group generated by `permutations`.
pub fn cyclic_generator(n: usize, permutations: &[Permutation]) -> Result<Permutation> {
    for p in permutations {
        if p.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.n(),
            });
        }
    }
    match permutations {
        [] => Ok(Permutation::identity(n)),
        [p] => Ok(p.clone()),
        _ => {
            let elements = closure(n, permutations);
            elements
                .iter()
                .filter(|p| p.order() == elements.len())
                .min()
                .cloned()
                .ok_or_else(|| {
                    Error::OutOfScope(format!(
                        "the permutation group of order {} is not cyclic",
                        elements.len()
                    ))
                })
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: f = {}, G = {}, S = <{}>",
            self.name,
            self.matrix,
            self.group,
            self.symmetry.generator()
        )
    }
}
