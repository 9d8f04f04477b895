use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::Instance;
use crate::error::{Error, Result};
use crate::invertible::{grading_operator, ExponentMatrix};
use crate::symmetry::Permutation;
use crate::torsion::{FiniteSubgroup, TorsionVector};

/// One generator of `G`: an explicit vector `(1/den)·num` or the token `"J"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorDoc {
    Vector { den: i64, num: Vec<i64> },
    Token(String),
}

impl GeneratorDoc {
    pub fn from_vector(v: &TorsionVector) -> Self {
        let (den, num) = v.to_den_num();
        GeneratorDoc::Vector {
            den: den as i64,
            num: num.into_iter().map(|x| x as i64).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    #[serde(default)]
    pub generators: Vec<GeneratorDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PermutationDoc {
    One(String),
    Many(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub name: String,
    pub n: usize,
    pub monomials: Vec<Vec<u32>>,
    #[serde(default)]
    pub group: GroupDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<PermutationDoc>,
}

fn at(field: impl std::fmt::Display, e: Error) -> Error {
    match e {
        Error::Parse(msg) => Error::Parse(format!("{field}: {msg}")),
        other => other,
    }
}

impl InstanceDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    pub fn matrix(&self) -> Result<ExponentMatrix> {
        if self.monomials.len() != self.n {
            return Err(Error::Parse(format!(
                "monomials: expected {} rows, found {}",
                self.n,
                self.monomials.len()
            )));
        }
        for (i, row) in self.monomials.iter().enumerate() {
            if row.len() != self.n {
                return Err(Error::Parse(format!(
                    "monomials[{i}]: expected {} exponents, found {}",
                    self.n,
                    row.len()
                )));
            }
        }
        ExponentMatrix::new(self.monomials.clone())
    }

    pub fn group_generators(&self, matrix: &ExponentMatrix) -> Result<Vec<TorsionVector>> {
        self.group
            .generators
            .iter()
            .enumerate()
            .map(|(k, g)| match g {
                GeneratorDoc::Token(t) if t == "J" => Ok(grading_operator(matrix)),
                GeneratorDoc::Token(t) => Err(Error::Parse(format!(
                    "group.generators[{k}]: unknown token {t:?} (expected \"J\")"
                ))),
                GeneratorDoc::Vector { den, num } => {
                    if num.len() != self.n {
                        return Err(Error::Parse(format!(
                            "group.generators[{k}]: expected {} numerators, found {}",
                            self.n,
                            num.len()
                        )));
                    }
                    if *den <= 0 {
                        return Err(Error::Parse(format!(
                            "group.generators[{k}]: denominator must be positive"
                        )));
                    }
                    TorsionVector::new(*den as u64, num)
                        .map_err(|e| at(format!("group.generators[{k}]"), e))
                }
            })
            .collect()
    }

    pub fn permutations(&self) -> Result<Vec<Permutation>> {
        let texts: Vec<&str> = match &self.permutation {
            None => Vec::new(),
            Some(PermutationDoc::One(t)) => vec![t.as_str()],
            Some(PermutationDoc::Many(ts)) => ts.iter().map(|t| t.as_str()).collect(),
        };
        texts
            .iter()
            .enumerate()
            .map(|(k, t)| {
                Permutation::parse(t, self.n).map_err(|e| match e {
                    Error::Permutation(msg) => {
                        Error::Permutation(format!("permutation[{k}]: {msg}"))
                    }
                    other => other,
                })
            })
            .collect()
    }

    pub fn to_instance(&self) -> Result<Instance> {
        let matrix = self.matrix()?;
        let gens = self.group_generators(&matrix)?;
        let perms = self.permutations()?;
        Instance::from_generators(self.name.clone(), matrix, &gens, &perms)
    }

    /// Document for a validated instance, with canonical generators.
    pub fn from_instance(inst: &Instance) -> Self {
        let generator = inst.symmetry().generator();
        InstanceDocument {
            name: inst.name().to_string(),
            n: inst.n(),
            monomials: inst.matrix().rows().to_vec(),
            group: GroupDoc {
                generators: inst
                    .group()
                    .canonical()
                    .generators()
                    .iter()
                    .map(GeneratorDoc::from_vector)
                    .collect(),
            },
            permutation: (!generator.is_identity())
                .then(|| PermutationDoc::One(generator.to_string())),
        }
    }
}

/// SHA-256 over the sorted monomial rows, the canonical generators of `G`
/// and the smallest generator of `S`. The name does not enter.
pub fn canonical_hash(inst: &Instance) -> String {
    let mut rows = inst.matrix().rows().to_vec();
    rows.sort();
    let group = FiniteSubgroup::canonical(inst.group());
    let gens: Vec<(u64, Vec<u64>)> = group.generators().iter().map(|g| g.to_den_num()).collect();
    let perm = inst.symmetry().canonical_generator().images().to_vec();
    let canonical = serde_json::json!({
        "n": inst.n(),
        "monomials": rows,
        "generators": gens,
        "permutation": perm,
    });
    let digest = Sha256::digest(canonical.to_string().as_bytes());
    hex::encode(digest)
}
