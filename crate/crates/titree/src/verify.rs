//! Cross-check of generator output against the brute-force oracle.

use std::io;

use thiserror::Error;
use titree_core::oracle::{self, AdjacencyTree, OracleError, ORACLE_MAX_ORDER};
use titree_core::{GenerationPlan, WtiTree};

use crate::parallel::{generate_lines, RunOptions};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("verification is limited to orders up to {ORACLE_MAX_ORDER}, got {0}")]
    OrderTooLarge(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Agreement for one order: sorted canonical forms from each side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderReport {
    pub order: usize,
    pub generated: usize,
    pub oracle: usize,
    pub agree: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub orders: Vec<OrderReport>,
}

impl VerifyReport {
    pub fn all_agree(&self) -> bool {
        self.orders.iter().all(|o| o.agree)
    }
}

/// Free-tree canonical form of a generated tree, computed by the oracle
/// from the parent array alone.
pub fn generated_form(tree: &WtiTree) -> Vec<u8> {
    oracle::canonical_form(&AdjacencyTree::from_parents(tree.parents()))
        .as_bytes()
        .to_vec()
}

/// Runs the generator for `plan` and compares, order by order, the multiset
/// of canonical forms it emits with the oracle's TI filter over all free
/// trees of that order.
pub fn verify_against_oracle(
    plan: &GenerationPlan,
    options: &RunOptions,
) -> Result<VerifyReport, VerifyError> {
    let n = plan.max_order();
    if n > ORACLE_MAX_ORDER {
        return Err(VerifyError::OrderTooLarge(n));
    }
    let line = |tree: &WtiTree, buf: &mut Vec<u8>| {
        buf.extend_from_slice(&generated_form(tree));
        buf.push(b'\n');
    };
    let mut out = Vec::new();
    generate_lines(plan, Some(&line), options, &mut out)?;

    // A form has two bytes per vertex.
    let mut generated: Vec<Vec<&[u8]>> = vec![Vec::new(); n + 1];
    for form in out.split(|&b| b == b'\n').filter(|l| !l.is_empty()) {
        generated[form.len() / 2].push(form);
    }

    let degree_cap = Some(plan.max_degree()).filter(|&m| m < n.saturating_sub(1));
    let mut report = VerifyReport::default();
    for (k, mut mine) in generated.into_iter().enumerate().skip(1) {
        mine.sort_unstable();
        let theirs = oracle::ti_free_tree_forms(k, degree_cap)?;
        let agree =
            mine.len() == theirs.len() && mine.iter().zip(&theirs).all(|(a, b)| *a == b.as_bytes());
        report.orders.push(OrderReport {
            order: k,
            generated: mine.len(),
            oracle: theirs.len(),
            agree,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_through_twelve() {
        let plan = GenerationPlan::new(12, None).unwrap();
        let report = verify_against_oracle(&plan, &RunOptions::default()).unwrap();
        assert_eq!(report.orders.len(), 12);
        assert!(report.all_agree(), "{report:?}");
        assert_eq!(report.orders[10].generated, 6);
    }

    #[test]
    fn agrees_with_degree_cap() {
        let plan = GenerationPlan::new(14, Some(3)).unwrap();
        let report = verify_against_oracle(&plan, &RunOptions::default()).unwrap();
        assert!(report.all_agree(), "{report:?}");
    }

    #[test]
    fn refuses_large_orders() {
        let plan = GenerationPlan::new(23, None).unwrap();
        assert!(matches!(
            verify_against_oracle(&plan, &RunOptions::default()),
            Err(VerifyError::OrderTooLarge(23))
        ));
    }
}
