//! Slepian-Wolf constraint families, the smallest omniscience rate `R_CO(A)`
//! and the secret-key capacity `C_SK(A) = h(M) - R_CO(A)`.

use crate::error::{Error, Result};
use crate::lp::{self, ConstraintSystem, LpSolution, UniquenessCertificate, Verdict};
use crate::oracle::EntropyOracle;
use crate::rational::{self, Rational};
use crate::subset::{check_m, SubsetMask};

/// The constraint family `{B : ∅ ≠ B ⊊ M, B ⊉ A}` in increasing mask order.
///
/// Only masks are stored, so one family can be priced under several oracles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintFamily {
    m: usize,
    active: SubsetMask,
    masks: Vec<SubsetMask>,
}

impl ConstraintFamily {
    pub fn build(m: usize, active: SubsetMask) -> Result<Self> {
        check_m(m)?;
        if active.m() != m {
            return Err(Error::InvalidInput(format!(
                "active set {active} is not over m = {m}"
            )));
        }
        if active.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "active set {active} needs at least two terminals"
            )));
        }
        let masks = SubsetMask::all(m)
            .filter(|b| !b.is_empty() && !b.is_full() && !b.is_superset_of(active))
            .collect();
        Ok(ConstraintFamily { m, active, masks })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn active(&self) -> SubsetMask {
        self.active
    }

    pub fn masks(&self) -> &[SubsetMask] {
        &self.masks
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn contains(&self, b: SubsetMask) -> bool {
        b.m() == self.m && !b.is_empty() && !b.is_full() && !b.is_superset_of(self.active)
    }

    /// Row index of `b`, if it is a member.
    pub fn index_of(&self, b: SubsetMask) -> Option<usize> {
        self.masks.binary_search(&b).ok()
    }

    /// `2^m - 2^(m - |A|) - 1`.
    pub fn expected_len(m: usize, active_len: usize) -> usize {
        (1usize << m) - (1usize << (m - active_len)) - 1
    }

    /// LP data with `b_B = h(B)` read from `oracle`.
    pub fn system(&self, oracle: &EntropyOracle) -> Result<ConstraintSystem> {
        self.check_oracle(oracle)?;
        let b = self.masks.iter().map(|s| oracle.h_bits(s.bits())).collect();
        Ok(ConstraintSystem::new(self.m, self.masks.clone(), b)?)
    }

    fn check_oracle(&self, oracle: &EntropyOracle) -> Result<()> {
        if oracle.m() != self.m {
            return Err(Error::InvalidInput(format!(
                "oracle has m = {} but the family has m = {}",
                oracle.m(),
                self.m
            )));
        }
        Ok(())
    }
}

/// Rates `R_1..R_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateVector(pub Vec<Rational>);

impl RateVector {
    pub fn zeros(m: usize) -> Self {
        RateVector(vec![rational::zero(); m])
    }

    /// `r(B) = Σ_{j∈B} R_j`.
    pub fn sum_over(&self, b: SubsetMask) -> Rational {
        lp::mask_dot(b, &self.0)
    }

    pub fn total(&self) -> Rational {
        self.0.iter().fold(rational::zero(), |a, v| a + v)
    }
}

/// `SW(R, B) = Σ_{j∈B} R_j - h(B)`; the constraint is satisfied, tight or
/// slack as this is `>= 0`, `= 0` or `> 0`.
pub fn sw_gap(
    rates: &RateVector,
    b: SubsetMask,
    family: &ConstraintFamily,
    oracle: &EntropyOracle,
) -> Result<Rational> {
    if !family.contains(b) {
        return Err(Error::InvalidInput(format!(
            "{b} is not a Slepian-Wolf constraint for active set {}",
            family.active()
        )));
    }
    family.check_oracle(oracle)?;
    if rates.0.len() != family.m() {
        return Err(Error::InvalidInput(
            "rate vector has the wrong length".into(),
        ));
    }
    Ok(rates.sum_over(b) - oracle.h_bits(b.bits()))
}

/// Whether `rates` meets every constraint; on failure, the smallest
/// violated mask.
pub fn region_contains(
    rates: &RateVector,
    family: &ConstraintFamily,
    oracle: &EntropyOracle,
) -> Result<(bool, Option<SubsetMask>)> {
    for &b in family.masks() {
        let gap = sw_gap(rates, b, family, oracle)?;
        if gap < rational::zero() && !oracle.approx_eq(&gap, &rational::zero()) {
            return Ok((false, Some(b)));
        }
    }
    Ok((true, None))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapacityReport {
    pub active: SubsetMask,
    pub h_full: Rational,
    pub r_co: Rational,
    pub c_sk: Rational,
    pub rates: RateVector,
    /// Dual optimum over the family rows.
    pub dual: Vec<Rational>,
    pub tight: Vec<SubsetMask>,
    /// Rows with a positive dual weight.
    pub dual_support: Vec<SubsetMask>,
    pub uniqueness: UniquenessCertificate,
    pub exact: bool,
    /// Family rows, indexed like `dual`.
    pub rows: Vec<SubsetMask>,
    pub solution: LpSolution,
}

impl CapacityReport {
    pub fn row(&self, i: usize) -> SubsetMask {
        self.rows[i]
    }

    pub fn is_unique(&self) -> bool {
        self.uniqueness.verdict == Verdict::Unique
    }
}

/// Solves for `R_CO(A)` and `C_SK(A)`, including the uniqueness verdict.
pub fn r_co(oracle: &EntropyOracle, active: SubsetMask) -> Result<CapacityReport> {
    let family = ConstraintFamily::build(oracle.m(), active)?;
    r_co_with_family(oracle, &family)
}

pub fn r_co_with_family(
    oracle: &EntropyOracle,
    family: &ConstraintFamily,
) -> Result<CapacityReport> {
    let system = family.system(oracle)?;
    let solution = lp::solve(&system)?;
    let uniqueness = lp::uniqueness_test(&system, &solution)?;
    let h_full = oracle.h_full();
    let c_sk = &h_full - &solution.objective;
    let tight = lp::tight_rows(&solution, &system)
        .into_iter()
        .map(|(_, b)| b)
        .collect();
    let dual_support = solution
        .support()
        .into_iter()
        .map(|i| family.masks()[i])
        .collect();
    Ok(CapacityReport {
        active: family.active(),
        h_full,
        r_co: solution.objective.clone(),
        c_sk,
        rates: RateVector(solution.x.clone()),
        dual: solution.y.clone(),
        tight,
        dual_support,
        uniqueness,
        exact: oracle.is_exact(),
        rows: family.masks().to_vec(),
        solution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::source::{quoted_cardinality_table, LinearGF2Source};

    fn mask(m: usize, ts: &[usize]) -> SubsetMask {
        SubsetMask::from_terminals(m, ts.iter().copied()).unwrap()
    }

    fn table_oracle() -> EntropyOracle {
        EntropyOracle::from_vector(quoted_cardinality_table(), false).unwrap()
    }

    fn table_rates() -> RateVector {
        RateVector(vec![
            frac(1, 4),
            frac(1, 4),
            frac(1, 4),
            frac(1, 2),
            frac(1, 2),
            frac(1, 2),
        ])
    }

    #[test]
    fn family_sizes() {
        let f = ConstraintFamily::build(6, mask(6, &[1, 2, 3])).unwrap();
        assert_eq!(f.len(), 55);
        assert_eq!(ConstraintFamily::expected_len(6, 3), 55);
        let f = ConstraintFamily::build(2, SubsetMask::full(2)).unwrap();
        assert_eq!(f.masks(), &[mask(2, &[1]), mask(2, &[2])]);
        let f = ConstraintFamily::build(3, SubsetMask::full(3)).unwrap();
        assert_eq!(f.len(), 6);
        assert!(ConstraintFamily::build(3, mask(3, &[1])).is_err());
    }

    #[test]
    fn family_membership_rule() {
        let a = mask(6, &[1, 2, 3]);
        let f = ConstraintFamily::build(6, a).unwrap();
        for b in SubsetMask::all(6) {
            let expected = !b.is_empty() && !b.is_full() && !a.is_subset_of(b);
            assert_eq!(f.contains(b), expected);
            assert_eq!(f.index_of(b).is_some(), expected);
        }
    }

    #[test]
    fn gaps_at_the_quoted_rates() {
        let o = table_oracle();
        let f = ConstraintFamily::build(6, mask(6, &[1, 2, 3])).unwrap();
        let x = table_rates();
        assert_eq!(sw_gap(&x, mask(6, &[1, 3, 4]), &f, &o).unwrap(), int(0));
        assert_eq!(sw_gap(&x, mask(6, &[4, 5, 6]), &f, &o).unwrap(), frac(1, 2));
        assert!(sw_gap(&x, mask(6, &[1, 2, 3]), &f, &o).is_err());
        let zero = RateVector::zeros(6);
        assert_eq!(sw_gap(&zero, mask(6, &[1, 2]), &f, &o).unwrap(), int(0));
    }

    #[test]
    fn region_membership() {
        let o = table_oracle();
        let f = ConstraintFamily::build(6, mask(6, &[1, 2, 3])).unwrap();
        assert_eq!(
            region_contains(&table_rates(), &f, &o).unwrap(),
            (true, None)
        );
        // the smallest mask with positive h is the first 3-set in the family
        let (ok, first) = region_contains(&RateVector::zeros(6), &f, &o).unwrap();
        assert!(!ok);
        let expected = f
            .masks()
            .iter()
            .copied()
            .find(|b| o.cond_entropy_h(*b).unwrap() > int(0))
            .unwrap();
        assert_eq!(first, Some(expected));
        assert_eq!(expected, mask(6, &[1, 2, 4]));
        let big = RateVector(vec![o.h_full(); 6]);
        assert!(region_contains(&big, &f, &o).unwrap().0);
    }

    #[test]
    fn cardinality_table_capacity() {
        let rep = r_co(&table_oracle(), mask(6, &[1, 2, 3])).unwrap();
        assert_eq!(rep.r_co, frac(9, 4));
        assert_eq!(rep.c_sk, frac(7, 4));
        assert_eq!(rep.rates, table_rates());
        assert!(rep.is_unique());
    }

    #[test]
    fn shared_bit_three_terminals() {
        let src = LinearGF2Source::new(1, vec![vec![1]; 3]).unwrap();
        let o = EntropyOracle::from_linear(src);
        let rep = r_co(&o, SubsetMask::full(3)).unwrap();
        assert_eq!(rep.r_co, int(0));
        assert_eq!(rep.c_sk, int(1));
    }

    #[test]
    fn two_terminals_give_mutual_information() {
        // X1 = (Y1, Y2), X2 = (Y2, Y3): I(X1; X2) = 1
        let src = LinearGF2Source::new(3, vec![vec![0b001, 0b010], vec![0b010, 0b100]]).unwrap();
        let o = EntropyOracle::from_linear(src);
        let rep = r_co(&o, SubsetMask::full(2)).unwrap();
        let h1 = o.cond_entropy_h(mask(2, &[1])).unwrap();
        let h2 = o.cond_entropy_h(mask(2, &[2])).unwrap();
        assert_eq!(rep.r_co, h1 + h2);
        assert_eq!(rep.c_sk, int(1));
    }
}
