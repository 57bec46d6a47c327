//! Multiterminal mutual dependence `I(C_1, .., C_k)` and its minimum `I(A)`
//! over admissible partitions.

use std::env;

use crate::error::{Error, Result};
use crate::oracle::EntropyOracle;
use crate::partition::{enumerate_admissible, Partition};
use crate::rational::{self, Rational};
use crate::subset::SubsetMask;

/// Default terminal cap for the exhaustive partition search.
pub const DEFAULT_MAX_M: usize = 12;

/// Environment variable overriding [`DEFAULT_MAX_M`].
pub const MAX_M_ENV: &str = "OMNISCIO_MAX_M";

/// The enumeration cap in effect: `OMNISCIO_MAX_M` if set and valid.
pub fn enumeration_cap() -> usize {
    env::var(MAX_M_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_M)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependenceValue {
    pub partition: Partition,
    pub value: Rational,
    /// Entropy-sum and complement forms were both evaluated and agree.
    pub cross_checked: bool,
}

/// `(Σ_i H(X_{C_i}) - H(X_M)) / (k - 1)`, cross-checked against
/// `h(M) - Σ_i h(C_i^c) / (k - 1)`.
pub fn partition_dependence(
    oracle: &EntropyOracle,
    partition: &Partition,
) -> Result<DependenceValue> {
    if partition.m() != oracle.m() {
        return Err(Error::InvalidInput(
            "partition and oracle disagree on m".into(),
        ));
    }
    let k = partition.k();
    if k < 2 {
        return Err(Error::InvalidInput(
            "partition needs at least two blocks".into(),
        ));
    }
    let norm = rational::int(k as i64 - 1);
    let h_full = oracle.h_full();
    let block_sum = partition
        .blocks()
        .iter()
        .fold(rational::zero(), |acc, b| acc + oracle.joint_bits(b.bits()));
    let sum_form = (block_sum - &h_full) / &norm;
    let complement_sum = partition.blocks().iter().fold(rational::zero(), |acc, b| {
        acc + oracle.h_bits(b.complement().bits())
    });
    let complement_form = &h_full - complement_sum / &norm;
    if !oracle.approx_eq(&sum_form, &complement_form) {
        return Err(Error::Contract(format!(
            "dependence forms disagree on {partition}: {sum_form} vs {complement_form}"
        )));
    }
    Ok(DependenceValue {
        partition: partition.clone(),
        value: sum_form,
        cross_checked: true,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependenceBound {
    pub value: Rational,
    /// Every minimizing partition, `k` ascending then enumeration order.
    pub minimizers: Vec<Partition>,
    pub partitions_examined: usize,
}

/// `I(A)`: the minimum of [`partition_dependence`] over all admissible
/// partitions, with every minimizer.
///
/// Inexact oracles collect as minimizers all partitions within the oracle
/// tolerance of the minimum.
pub fn mutual_dependence_bound(
    oracle: &EntropyOracle,
    active: SubsetMask,
) -> Result<DependenceBound> {
    mutual_dependence_bound_capped(oracle, active, enumeration_cap())
}

pub fn mutual_dependence_bound_capped(
    oracle: &EntropyOracle,
    active: SubsetMask,
    max_m: usize,
) -> Result<DependenceBound> {
    let m = oracle.m();
    if m > max_m {
        return Err(Error::InvalidInput(format!(
            "m = {m} exceeds the partition enumeration cap {max_m} (set {MAX_M_ENV} to raise it)"
        )));
    }
    if active.m() != m {
        return Err(Error::InvalidInput(
            "active set and oracle disagree on m".into(),
        ));
    }
    let mut values = Vec::new();
    for p in enumerate_admissible(m, active)? {
        let v = partition_dependence(oracle, &p)?;
        values.push(v);
    }
    let count = values.len();
    let best = values
        .iter()
        .map(|v| &v.value)
        .min()
        .cloned()
        .ok_or_else(|| Error::Contract("no admissible partition".into()))?;
    let minimizers = values
        .into_iter()
        .filter(|v| oracle.approx_eq(&v.value, &best))
        .map(|v| v.partition)
        .collect();
    Ok(DependenceBound {
        value: best,
        minimizers,
        partitions_examined: count,
    })
}
