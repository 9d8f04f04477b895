//! Enumeration checks of the structural identities behind the closed form.

use std::collections::HashMap;

use super::fixed::{fixed_space_within, open_torus_euler, restrict_to_fixed, SymElement};
use super::instance::Instance;
use super::pipeline::ClosedForm;
use crate::coords::CoordSet;
use crate::error::Result;
use crate::invertible::{
    diagonal_symmetry_group, dual_subgroup, isotropy_subgroup, restrict_support,
};
use crate::symmetry::{apply_to_set, cycles_within, in_cycle_kernel, shift_unchecked};
use crate::torsion::{FiniteSubgroup, MapMode, TorsionVector};

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PropositionCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, failures: Vec<String>, cases: usize) -> PropositionCheck {
    PropositionCheck {
        name,
        passed: failures.is_empty(),
        detail: match failures.first() {
            None => format!("{cases} cases"),
            Some(first) => format!("{} of {cases} cases failed; first: {first}", failures.len()),
        },
    }
}

fn admissible(inst_matrix: &crate::invertible::ExponentMatrix, support: CoordSet) -> bool {
    support.is_empty() || restrict_support(inst_matrix, support).admissible
}

/// Runs every check on `inst` and reports each one.
pub fn proposition_checks(inst: &Instance) -> Result<Vec<PropositionCheck>> {
    let n = inst.n();
    let e = inst.matrix();
    let et = e.transpose();
    let g_f = inst.full_group();
    let g_ft = diagonal_symmetry_group(&et);
    let closed = ClosedForm::new(inst);
    let sigmas = inst.symmetry().elements();
    let mut out = Vec::new();

    let mut failures = Vec::new();
    for sigma in sigmas {
        let ker_c = g_f.filter(|a| in_cycle_kernel(sigma, a));
        let (_, im) = closed.kernel_image(sigma);
        if ker_c != im {
            failures.push(format!(
                "σ = {sigma}: |Ker C| = {}, |Im A| = {}",
                ker_c.order(),
                im.order()
            ));
        }
    }
    out.push(check("Ker C_σ = Im A_σ", failures, sigmas.len()));

    let mut crit_failures = Vec::new();
    let mut value_failures = Vec::new();
    let mut cases = 0;
    for support in CoordSet::all(n).filter(|s| !s.is_empty() && admissible(e, *s)) {
        let iso = closed.isotropy(support);
        for sigma in sigmas
            .iter()
            .filter(|s| apply_to_set(s, support) == support)
        {
            let (ker, im) = closed.kernel_image(sigma);
            let target = im.sum(&iso);
            let ker_iso = ker.elements().iter().filter(|a| iso.contains(a)).count();
            let d = cycles_within(sigma, support);
            let sign = if d % 2 == 1 { 1 } else { -1 };
            let expected = sign * (ker.order() / ker_iso) as i64;
            if ker.order() % ker_iso != 0 {
                value_failures.push(format!(
                    "|Ker A| not divisible by |Ker A ∩ G_f^I| at {support}"
                ));
            }
            let mut memo: HashMap<Vec<num_rational::Ratio<i64>>, Option<i64>> = HashMap::new();
            for a in g_f.elements() {
                cases += 1;
                let key: Vec<_> = support.iter().map(|j| a.coord(j)).collect();
                let fibre = match memo.get(&key) {
                    Some(v) => *v,
                    None => {
                        let fs = fixed_space_within(
                            &[SymElement::new(a.clone(), sigma.clone())],
                            support,
                        )?;
                        let v = if fs.covered() == support {
                            Some(open_torus_euler(&restrict_to_fixed(e, &fs))?)
                        } else {
                            None
                        };
                        memo.insert(key, v);
                        v
                    }
                };
                if fibre.is_some() != target.contains(a) {
                    crit_failures.push(format!(
                        "I = {support}, σ = {sigma}, λ = {a}: fixed torus {}, criterion {}",
                        fibre.is_some(),
                        target.contains(a)
                    ));
                }
                if let Some(v) = fibre {
                    if v != expected {
                        value_failures.push(format!(
                            "I = {support}, σ = {sigma}, λ = {a}: χ = {v}, expected {expected}"
                        ));
                    }
                }
            }
        }
    }
    out.push(check(
        "fixed-point criterion λ ∈ Ker C_σ + G_f^I",
        crit_failures,
        cases,
    ));
    out.push(check("fixed-fibre Euler value", value_failures, cases));

    let mut order_failures = Vec::new();
    let mut dual_failures = Vec::new();
    for sigma in sigmas {
        let (ker, im) = closed.kernel_image(sigma);
        let phi = |a: &TorsionVector| shift_unchecked(sigma, a);
        let ker_t = g_ft.map_subgroup(phi, MapMode::Kernel)?;
        let im_t = g_ft.map_subgroup(phi, MapMode::Image)?;
        if ker.order() != ker_t.order() {
            order_failures.push(format!("σ = {sigma}: {} vs {}", ker.order(), ker_t.order()));
        }
        if dual_subgroup(e, &ker)? != im_t || dual_subgroup(e, &im)? != ker_t {
            dual_failures.push(format!("σ = {sigma}"));
        }
    }
    out.push(check(
        "|Ker A_σ| = |Ker A*_σ|",
        order_failures,
        sigmas.len(),
    ));
    out.push(check(
        "dual of Ker A_σ / Im A_σ",
        dual_failures,
        sigmas.len(),
    ));

    let mut iso_failures = Vec::new();
    let mut adm_failures = Vec::new();
    let mut iso_cases = 0;
    for support in CoordSet::all(n) {
        let complement = support.complement(n);
        let adm = admissible(e, support);
        if adm != admissible(&et, complement) {
            adm_failures.push(format!("I = {support}"));
        }
        if !adm {
            continue;
        }
        iso_cases += 1;
        let iso = isotropy_subgroup(g_f, support);
        if dual_subgroup(e, &iso)? != isotropy_subgroup(&g_ft, complement) {
            iso_failures.push(format!("I = {support}"));
        }
    }
    out.push(check(
        "dual of G_f^I is G_f̃^Ī (admissible I)",
        iso_failures,
        iso_cases,
    ));
    out.push(check("admissibility duality I ↔ Ī", adm_failures, 1 << n));

    let dual = dual_subgroup(e, inst.group())?;
    let order_ok = dual.order() * inst.group().order() == g_f.order();
    out.push(check(
        "|G̃| = |G_f|/|G|",
        if order_ok {
            Vec::new()
        } else {
            vec![format!(
                "{}·{} ≠ {}",
                dual.order(),
                inst.group().order(),
                g_f.order()
            )]
        },
        1,
    ));
    Ok(out)
}

/// `|Ker C_σ|` on `G_f`.
pub fn cycle_kernel(
    group: &FiniteSubgroup,
    sigma: &crate::symmetry::Permutation,
) -> FiniteSubgroup {
    group.filter(|a| in_cycle_kernel(sigma, a))
}
