use num_integer::Integer;

use super::{check_preserves, CyclicPermGroup, Permutation};
use crate::error::{Error, Result};
use crate::invertible::{AtomicDecomposition, BlockKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockActionKind {
    Trivial,
    /// Sends the block variable at position `i` to position `i + s·ℓ`
    /// (mod `k·ℓ`); the exponents are `ℓ`-periodic and `gcd(s, k) = 1`.
    Rotation {
        ell: usize,
        s: usize,
        k: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockAction {
    pub block: usize,
    /// Smallest power of the generator sending the block to itself.
    pub return_power: usize,
    pub action: BlockActionKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockActions {
    /// One entry per block for the generator of the group.
    pub generator: Vec<BlockAction>,
}

fn block_self_map(
    dec: &AtomicDecomposition,
    sigma: &Permutation,
    block: usize,
    power_label: usize,
) -> Result<BlockAction> {
    let b = &dec.blocks[block];
    let vars = b.variable_set();
    let mut rho = sigma.clone();
    let mut n_ret = 1;
    loop {
        let image = super::apply_to_set(&rho, vars);
        if image == vars {
            break;
        }
        let lands_on_block = dec.blocks.iter().any(|c| c.variable_set() == image);
        if !lands_on_block {
            return Err(Error::NotPreserved(format!(
                "{sigma} does not map atomic blocks onto atomic blocks"
            )));
        }
        rho = rho.compose(sigma);
        n_ret += 1;
    }
    let m = b.len();
    let pi: Vec<usize> = b
        .variables
        .iter()
        .map(|&v| b.position_of(rho.apply(v)).expect("block is stable"))
        .collect();
    if pi.iter().enumerate().all(|(i, &p)| i == p) {
        return Ok(BlockAction {
            block,
            return_power: n_ret,
            action: BlockActionKind::Trivial,
        });
    }
    if b.kind == BlockKind::Chain {
        return Err(Error::Internal(format!(
            "nontrivial self-map of chain block {}",
            block + 1
        )));
    }
    let shift = pi[0];
    if pi.iter().enumerate().all(|(i, &p)| p == (i + shift) % m) {
        let ell = shift.gcd(&m);
        let periodic = (0..m).all(|i| b.exponents[i] == b.exponents[(i + ell) % m]);
        if !periodic {
            return Err(Error::Internal(format!(
                "rotation of block {} without periodic exponents",
                block + 1
            )));
        }
        return Ok(BlockAction {
            block,
            return_power: n_ret,
            action: BlockActionKind::Rotation {
                ell,
                s: shift / ell,
                k: m / ell,
            },
        });
    }
    let q = pi[0];
    if pi.iter().enumerate().all(|(i, &p)| p == (q + m - i) % m) {
        return Err(Error::Flip {
            block: block + 1,
            power: power_label,
        });
    }
    Err(Error::Internal(format!(
        "self-map of loop block {} is neither a rotation nor a flip",
        block + 1
    )))
}

/// Classifies how each element of the group acts on the atomic blocks.
///
/// Every element `s^m` is checked (a power of the generator may induce a
/// flip even when the generator does not); flips are rejected. The report
/// lists the generator's action.
pub fn classify_block_actions(
    dec: &AtomicDecomposition,
    group: &CyclicPermGroup,
) -> Result<BlockActions> {
    for sigma in group.elements() {
        check_preserves(&dec.matrix, sigma)?;
    }
    let mut generator = Vec::new();
    for (power, sigma) in group.elements().iter().enumerate() {
        for block in 0..dec.blocks.len() {
            let action = block_self_map(dec, sigma, block, power)?;
            if power == 1 % group.order() {
                generator.push(action);
            }
        }
    }
    if group.order() == 1 {
        generator = (0..dec.blocks.len())
            .map(|block| BlockAction {
                block,
                return_power: 1,
                action: BlockActionKind::Trivial,
            })
            .collect();
    }
    Ok(BlockActions { generator })
}
