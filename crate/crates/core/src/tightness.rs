//! When does the mutual-dependence bound meet the secret-key capacity?
//!
//! Two independent deciders are provided: [`check_bound`] computes both
//! sides and compares them, while [`witness_by_partition_search`] looks for
//! an admissible partition whose block complements can all be made tight
//! Slepian-Wolf constraints at once. For the all-active case,
//! [`construct_partition_from_dual`] builds such a partition directly from
//! the dual optimum and machine-checks each step of the argument.

use num_traits::Signed;

use crate::capacity::{self, sw_gap, ConstraintFamily, RateVector};
use crate::dependence::{mutual_dependence_bound, partition_dependence};
use crate::error::{Error, Result};
use crate::lp::{minimize_free, FreeLp, LpError, LpSolution};
use crate::oracle::EntropyOracle;
use crate::partition::{enumerate_admissible, Partition};
use crate::rational::{self, Rational};
use crate::subset::SubsetMask;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub partition: Partition,
    /// A rate vector in the region with `SW(R, C_i^c) = 0` for every block.
    pub rates: RateVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightnessVerdict {
    pub tight: bool,
    pub witness: Option<Witness>,
    /// `I(A) - C_SK(A)` when both sides were computed.
    pub gap: Option<Rational>,
    pub c_sk: Option<Rational>,
    pub i_a: Option<Rational>,
}

/// Compares `C_SK(A)` against `I(A)` computed by partition enumeration.
///
/// When the gap is zero, the first minimizing partition together with the
/// LP optimum is returned as witness; every block complement must then be
/// tight at that optimum.
pub fn check_bound(oracle: &EntropyOracle, active: SubsetMask) -> Result<TightnessVerdict> {
    let family = ConstraintFamily::build(oracle.m(), active)?;
    let report = capacity::r_co_with_family(oracle, &family)?;
    let bound = mutual_dependence_bound(oracle, active)?;
    let gap = &bound.value - &report.c_sk;
    let tight = oracle.approx_eq(&gap, &rational::zero());
    let witness = if tight {
        let partition = bound.minimizers[0].clone();
        for b in partition.blocks() {
            let g = sw_gap(&report.rates, b.complement(), &family, oracle)?;
            if !oracle.approx_eq(&g, &rational::zero()) {
                return Err(Error::Contract(format!(
                    "bound is tight but {} is slack at the optimum",
                    b.complement()
                )));
            }
        }
        Some(Witness {
            partition,
            rates: report.rates.clone(),
        })
    } else {
        None
    };
    Ok(TightnessVerdict {
        tight,
        witness,
        gap: Some(gap),
        c_sk: Some(report.c_sk),
        i_a: Some(bound.value),
    })
}

/// Scans admissible partitions in canonical order and returns the first for
/// which `{R ∈ R(A) : SW(R, C_i^c) = 0 ∀i}` is nonempty.
pub fn witness_by_partition_search(
    oracle: &EntropyOracle,
    active: SubsetMask,
) -> Result<TightnessVerdict> {
    let family = ConstraintFamily::build(oracle.m(), active)?;
    let system = family.system(oracle)?;
    let m = oracle.m();
    let indicator = |b: SubsetMask| -> Vec<Rational> {
        (1..=m)
            .map(|t| {
                if b.contains(t) {
                    rational::one()
                } else {
                    rational::zero()
                }
            })
            .collect()
    };
    let ge_rows: Vec<(Vec<Rational>, Rational)> = system
        .rows()
        .iter()
        .zip(system.b())
        .map(|(r, b)| (indicator(*r), b.clone()))
        .collect();
    for partition in enumerate_admissible(m, active)? {
        let eq_rows = partition
            .blocks()
            .iter()
            .map(|c| {
                let comp = c.complement();
                (indicator(comp), oracle.h_bits(comp.bits()))
            })
            .collect();
        let lp = FreeLp {
            n: m,
            cost: vec![rational::zero(); m],
            ge_rows: ge_rows.clone(),
            eq_rows,
        };
        match minimize_free(&lp) {
            Ok(opt) => {
                return Ok(TightnessVerdict {
                    tight: true,
                    witness: Some(Witness {
                        partition,
                        rates: RateVector(opt.x),
                    }),
                    gap: None,
                    c_sk: None,
                    i_a: None,
                })
            }
            Err(LpError::Infeasible) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(TightnessVerdict {
        tight: false,
        witness: None,
        gap: None,
        c_sk: None,
        i_a: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureVerdict {
    /// Precondition failures; empty when all preconditions hold.
    pub precondition_failures: Vec<String>,
    pub gap_b1: Rational,
    pub gap_b2: Rational,
    pub gap_union: Rational,
    /// `None` when `B1 ∩ B2 = ∅`.
    pub gap_intersection: Option<Rational>,
    /// Union (and nonempty intersection) are tight.
    pub holds: bool,
}

/// Checks that two tight constraints stay tight under union and
/// intersection at `rates`. Violated preconditions are reported rather than
/// asserted.
pub fn verify_closure(
    oracle: &EntropyOracle,
    active: SubsetMask,
    rates: &RateVector,
    b1: SubsetMask,
    b2: SubsetMask,
) -> Result<ClosureVerdict> {
    let family = ConstraintFamily::build(oracle.m(), active)?;
    if rates.0.len() != oracle.m() {
        return Err(Error::InvalidInput(
            "rate vector has the wrong length".into(),
        ));
    }
    let gap = |b: SubsetMask| rates.sum_over(b) - oracle.h_bits(b.bits());
    let zero = rational::zero();
    let mut failures = Vec::new();
    let (inside, violated) = capacity::region_contains(rates, &family, oracle)?;
    if !inside {
        failures.push(format!(
            "rates are outside the region (first violation at {})",
            violated.expect("violation mask is reported")
        ));
    }
    let union = b1.union(b2);
    if !family.contains(union) {
        failures.push(format!("{union} is not a Slepian-Wolf constraint"));
    }
    for b in [b1, b2] {
        if b.is_empty() {
            failures.push("constraints must be nonempty".into());
        } else if !oracle.approx_eq(&gap(b), &zero) {
            failures.push(format!("{b} is not tight"));
        }
    }
    let inter = b1.intersection(b2);
    let gap_union = gap(union);
    let gap_intersection = (!inter.is_empty()).then(|| gap(inter));
    let holds = oracle.approx_eq(&gap_union, &zero)
        && gap_intersection
            .as_ref()
            .is_none_or(|g| oracle.approx_eq(g, &zero));
    Ok(ClosureVerdict {
        precondition_failures: failures,
        gap_b1: gap(b1),
        gap_b2: gap(b2),
        gap_union,
        gap_intersection,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructedPartition {
    pub partition: Partition,
    /// Rows with positive dual weight, in row order.
    pub retained: Vec<SubsetMask>,
    /// Class vectors: the shared column of each block over the retained rows.
    pub classes: Vec<Vec<bool>>,
    /// `I(C_1, .., C_k)` of the constructed partition.
    pub dependence: Rational,
}

/// Groups identical columns of the dual-supported rows into blocks.
///
/// Every step is checked: at least two retained rows, at least two classes,
/// each block complement equal to the union of retained rows that miss the
/// block, each complement tight at the primal optimum, and the dependence
/// of the partition equal to the capacity.
pub fn construct_partition_from_dual(
    oracle: &EntropyOracle,
    family: &ConstraintFamily,
    solution: &LpSolution,
) -> Result<ConstructedPartition> {
    let m = family.m();
    if !family.active().is_full() {
        return Err(Error::InvalidInput(
            "the dual construction needs every terminal active".into(),
        ));
    }
    if solution.y.len() != family.len() || solution.x.len() != m {
        return Err(Error::InvalidInput(
            "solution does not belong to this family".into(),
        ));
    }
    let contract = |msg: String| Err(Error::Contract(msg));

    let retained: Vec<SubsetMask> = solution
        .y
        .iter()
        .zip(family.masks())
        .filter(|(y, _)| y.is_positive())
        .map(|(_, b)| *b)
        .collect();
    if retained.len() < 2 {
        return contract(format!(
            "dual support has {} rows, need at least 2",
            retained.len()
        ));
    }
    if retained.iter().any(|b| b.is_empty() || b.is_full()) {
        return contract("a retained row is all zeros or all ones".into());
    }

    let column = |j: usize| -> Vec<bool> { retained.iter().map(|b| b.contains(j)).collect() };
    let mut classes: Vec<Vec<bool>> = Vec::new();
    let mut blocks: Vec<u32> = Vec::new();
    for j in 1..=m {
        let col = column(j);
        match classes.iter().position(|c| *c == col) {
            Some(i) => blocks[i] |= 1 << (j - 1),
            None => {
                classes.push(col);
                blocks.push(1 << (j - 1));
            }
        }
    }
    let k = classes.len();
    if k < 2 {
        return contract("all columns of the retained rows coincide".into());
    }

    // for i != i' some retained row contains class i but not class i'
    for (i, si) in classes.iter().enumerate() {
        for (ip, sip) in classes.iter().enumerate() {
            if i != ip && !si.iter().zip(sip).any(|(&a, &b)| a && !b) {
                return contract(format!(
                    "class {} is contained in class {} over the retained rows",
                    i + 1,
                    ip + 1
                ));
            }
        }
    }

    let masks: Vec<SubsetMask> = blocks
        .iter()
        .map(|&b| SubsetMask::new(b, m))
        .collect::<Result<_>>()?;
    let rates = RateVector(solution.x.clone());
    for (class, block) in classes.iter().zip(&masks) {
        let union = retained
            .iter()
            .zip(class)
            .filter(|(_, &inside)| !inside)
            .fold(SubsetMask::empty(m), |acc, (b, _)| acc.union(*b));
        if union != block.complement() {
            return contract(format!(
                "union of retained rows missing {block} is {union}, not its complement"
            ));
        }
        let g = sw_gap(&rates, block.complement(), family, oracle)?;
        if !oracle.approx_eq(&g, &rational::zero()) {
            return contract(format!(
                "{} is not tight at the optimum",
                block.complement()
            ));
        }
    }

    let partition = Partition::new(m, masks)?;
    if !partition.is_admissible(family.active()) {
        return contract(format!("{partition} is not admissible"));
    }
    let dependence = partition_dependence(oracle, &partition)?.value;
    let c_sk = oracle.h_full() - &solution.objective;
    if !oracle.approx_eq(&dependence, &c_sk) {
        return contract(format!(
            "constructed partition has dependence {dependence}, capacity is {c_sk}"
        ));
    }
    Ok(ConstructedPartition {
        partition,
        retained,
        classes,
        dependence,
    })
}
