//! Exact conditional-entropy oracle `h(B) = H(X_B | X_{B^c})`.
//!
//! All `2^m` joint entropies are computed once at construction; every later
//! query is a table lookup.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::source::{EntropyVector, LinearGF2Source, Source, TabularSource};
use crate::subset::{full_bits, SubsetMask};

/// Default tolerance for tabular sources, whose entropies are irrational.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Tightest tolerance that `f64` entropy evaluation can honour.
pub const MIN_TOLERANCE: f64 = 1e-12;

/// Terminal count above which pairwise supermodularity is checked only on
/// elemental pairs `(B + i, B + j)`.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 10;

#[derive(Clone, Debug)]
pub struct EntropyOracle {
    source: Source,
    joint: Vec<Rational>,
    exact: bool,
    tolerance: Rational,
}

impl EntropyOracle {
    pub fn from_linear(source: LinearGF2Source) -> Self {
        let m = source.m();
        let joint = SubsetMask::all(m)
            .map(|s| rational::int(source.joint_entropy_rank(s) as i64))
            .collect();
        EntropyOracle {
            source: Source::Linear(source),
            joint,
            exact: true,
            tolerance: rational::zero(),
        }
    }

    /// Entropies are rounded to a decimal grid a thousand times finer than
    /// `tolerance`; the oracle is flagged inexact.
    pub fn from_tabular(source: TabularSource, tolerance: f64) -> Result<Self> {
        if tolerance.is_nan() || tolerance < MIN_TOLERANCE || !tolerance.is_finite() {
            return Err(Error::PrecisionUnachievable(format!("{tolerance:e}")));
        }
        let digits = ((-tolerance.log10()).ceil() as u32 + 3).min(15);
        let m = source.m();
        let joint = SubsetMask::all(m)
            .map(|s| rational::from_f64_rounded(source.joint_entropy_f64(s), digits))
            .collect();
        let tol = rational::from_f64_rounded(tolerance, digits.max(12));
        Ok(EntropyOracle {
            source: Source::Tabular(source),
            joint,
            exact: false,
            tolerance: tol,
        })
    }

    /// With `validate`, rejects vectors that are not normalized, monotone
    /// and submodular in the joint entropies.
    pub fn from_vector(vector: EntropyVector, validate: bool) -> Result<Self> {
        let oracle = EntropyOracle {
            joint: vector.values().to_vec(),
            source: Source::Vector(vector),
            exact: true,
            tolerance: rational::zero(),
        };
        if validate {
            let report = oracle.check_validity();
            if !report.is_valid() {
                return Err(Error::Validation(report.first_violation(None)));
            }
        }
        Ok(oracle)
    }

    pub fn from_source(source: Source, validate: bool) -> Result<Self> {
        match source {
            Source::Linear(s) => Ok(EntropyOracle::from_linear(s)),
            Source::Tabular(s) => {
                let oracle = EntropyOracle::from_tabular(s, DEFAULT_TOLERANCE)?;
                if validate {
                    let report = oracle.check_validity();
                    if !report.is_valid() {
                        return Err(Error::Validation(report.first_violation(None)));
                    }
                }
                Ok(oracle)
            }
            Source::Vector(v) => EntropyOracle::from_vector(v, validate),
        }
    }

    pub fn m(&self) -> usize {
        self.source.m()
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Zero for exact oracles.
    pub fn tolerance(&self) -> &Rational {
        &self.tolerance
    }

    /// `a == b` for exact oracles, `|a - b| <= tolerance` otherwise.
    pub fn approx_eq(&self, a: &Rational, b: &Rational) -> bool {
        if self.exact {
            a == b
        } else {
            rational::abs_diff(a, b) <= self.tolerance
        }
    }

    /// `a <= b` up to the oracle tolerance.
    pub fn approx_le(&self, a: &Rational, b: &Rational) -> bool {
        if self.exact {
            a <= b
        } else {
            *a <= b + &self.tolerance
        }
    }

    fn check(&self, s: SubsetMask) -> Result<()> {
        if s.m() != self.m() {
            return Err(Error::InvalidInput(format!(
                "subset {s} is over m = {} but the oracle has m = {}",
                s.m(),
                self.m()
            )));
        }
        Ok(())
    }

    /// `H(X_S)`.
    pub fn joint_entropy(&self, s: SubsetMask) -> Result<Rational> {
        self.check(s)?;
        Ok(self.joint[s.bits() as usize].clone())
    }

    /// `h(B) = H(X_M) - H(X_{B^c})`.
    pub fn cond_entropy_h(&self, b: SubsetMask) -> Result<Rational> {
        self.check(b)?;
        Ok(self.h_bits(b.bits()))
    }

    pub(crate) fn joint_bits(&self, bits: u32) -> &Rational {
        &self.joint[bits as usize]
    }

    pub(crate) fn h_bits(&self, bits: u32) -> Rational {
        let full = full_bits(self.m());
        &self.joint[full as usize] - &self.joint[(!bits & full) as usize]
    }

    /// `h(M) = H(X_M)`.
    pub fn h_full(&self) -> Rational {
        self.joint[full_bits(self.m()) as usize].clone()
    }

    /// Scans normalization, monotonicity and supermodularity of `h`.
    pub fn check_validity(&self) -> ValidityReport {
        let m = self.m();
        let full = full_bits(m);
        let normalized = self.approx_eq(self.joint_bits(0), &rational::zero());

        let mut monotonicity = Vec::new();
        for b in 0..=full {
            for j in 0..m {
                if b & (1 << j) != 0 {
                    continue;
                }
                let lo = self.h_bits(b);
                let hi = self.h_bits(b | 1 << j);
                if !self.approx_le(&lo, &hi) {
                    monotonicity.push((
                        SubsetMask::from_bits_unchecked(b, m),
                        SubsetMask::from_bits_unchecked(b | 1 << j, m),
                    ));
                }
            }
        }

        let exhaustive = m <= EXHAUSTIVE_PAIR_LIMIT;
        let h: Vec<Rational> = (0..=full).map(|b| self.h_bits(b)).collect();
        let mut supermodularity = Vec::new();
        let mut test = |b1: u32, b2: u32| {
            let lhs = &h[b1 as usize] + &h[b2 as usize];
            let rhs = &h[(b1 | b2) as usize] + &h[(b1 & b2) as usize];
            if !self.approx_le(&lhs, &rhs) {
                supermodularity.push(SupermodularityViolation {
                    b1: SubsetMask::from_bits_unchecked(b1, m),
                    b2: SubsetMask::from_bits_unchecked(b2, m),
                    lhs,
                    rhs,
                });
            }
        };
        if exhaustive {
            for b1 in 0..=full {
                for b2 in (b1 + 1)..=full {
                    // comparable pairs satisfy the inequality with equality
                    if b1 & b2 == b1 || b1 & b2 == b2 {
                        continue;
                    }
                    test(b1, b2);
                }
            }
        } else {
            for base in 0..=full {
                for i in 0..m {
                    for j in (i + 1)..m {
                        if base & (1 << i | 1 << j) != 0 {
                            continue;
                        }
                        test(base | 1 << i, base | 1 << j);
                    }
                }
            }
        }

        ValidityReport {
            m,
            normalized,
            monotonicity,
            supermodularity,
            exhaustive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupermodularityViolation {
    pub b1: SubsetMask,
    pub b2: SubsetMask,
    /// `h(B1) + h(B2)`
    pub lhs: Rational,
    /// `h(B1 ∪ B2) + h(B1 ∩ B2)`
    pub rhs: Rational,
}

impl fmt::Display for SupermodularityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "h({}) + h({}) = {} > {} = h({}) + h({})",
            self.b1,
            self.b2,
            self.lhs,
            self.rhs,
            self.b1.union(self.b2),
            self.b1.intersection(self.b2)
        )
    }
}

#[derive(Clone, Debug)]
pub struct ValidityReport {
    pub m: usize,
    /// `H(X_∅) = 0`.
    pub normalized: bool,
    /// Elemental pairs `(B, B + j)` with `h(B) > h(B + j)`.
    pub monotonicity: Vec<(SubsetMask, SubsetMask)>,
    pub supermodularity: Vec<SupermodularityViolation>,
    /// All incomparable pairs were scanned (otherwise only elemental pairs).
    pub exhaustive: bool,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.normalized && self.monotonicity.is_empty() && self.supermodularity.is_empty()
    }

    /// First supermodularity violation among pairs of Slepian-Wolf
    /// constraints of `active` whose union is also a constraint; these are
    /// the pairs the tight-constraint closure argument relies on.
    pub fn first_family_violation(&self, active: SubsetMask) -> Option<&SupermodularityViolation> {
        let in_family = |b: SubsetMask| !b.is_empty() && !b.is_full() && !b.is_superset_of(active);
        self.supermodularity
            .iter()
            .find(|v| in_family(v.b1) && in_family(v.b2) && in_family(v.b1.union(v.b2)))
    }

    /// One-line description of the most relevant violation.
    pub fn first_violation(&self, active: Option<SubsetMask>) -> String {
        if !self.normalized {
            return "H(X_∅) is not 0".into();
        }
        if let Some((lo, hi)) = self.monotonicity.first() {
            return format!("monotonicity fails: h({lo}) > h({hi})");
        }
        let chosen = active
            .and_then(|a| self.first_family_violation(a))
            .or_else(|| self.supermodularity.first());
        match chosen {
            Some(v) => format!(
                "supermodularity fails: {v} ({} violating pairs in total)",
                self.supermodularity.len()
            ),
            None => "no violations".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::source::{make_counterexample, quoted_cardinality_table, random_linear_source};

    fn mask(m: usize, ts: &[usize]) -> SubsetMask {
        SubsetMask::from_terminals(m, ts.iter().copied()).unwrap()
    }

    #[test]
    fn counterexample_h_values() {
        let (src, _) = make_counterexample();
        let o = EntropyOracle::from_linear(src);
        assert_eq!(o.h_full(), rational::int(3));
        assert_eq!(
            o.cond_entropy_h(SubsetMask::empty(6)).unwrap(),
            rational::int(0)
        );
        for b in SubsetMask::all(6).filter(|b| b.len() == 5) {
            assert_eq!(o.cond_entropy_h(b).unwrap(), rational::int(2));
        }
        // X1 = X3 ^ X5 ^ X6, so X_{1,2,4} is determined by X_{3,5,6}.
        assert_eq!(
            o.cond_entropy_h(mask(6, &[1, 2, 4])).unwrap(),
            rational::int(0)
        );
        assert_eq!(
            o.cond_entropy_h(mask(6, &[1, 3, 4])).unwrap(),
            rational::int(1)
        );
    }

    #[test]
    fn subset_over_wrong_m_is_rejected() {
        let (src, _) = make_counterexample();
        let o = EntropyOracle::from_linear(src);
        assert!(o.joint_entropy(SubsetMask::full(5)).is_err());
    }

    #[test]
    fn linear_oracles_are_valid() {
        for seed in 0..20 {
            let src = random_linear_source(5, 4, 1 + seed as usize % 2, seed).unwrap();
            let report = EntropyOracle::from_linear(src).check_validity();
            assert!(
                report.is_valid(),
                "seed {seed}: {}",
                report.first_violation(None)
            );
        }
        let shared = crate::source::LinearGF2Source::new(1, vec![vec![1], vec![1]]).unwrap();
        assert!(EntropyOracle::from_linear(shared)
            .check_validity()
            .is_valid());
    }

    #[test]
    fn cardinality_table_is_not_supermodular() {
        let o = EntropyOracle::from_vector(quoted_cardinality_table(), false).unwrap();
        let report = o.check_validity();
        assert!(report.normalized);
        assert!(report.monotonicity.is_empty());
        let target = report
            .supermodularity
            .iter()
            .find(|v| v.b1 == mask(6, &[1, 2, 4]) && v.b2 == mask(6, &[1, 2, 5]))
            .expect("the ({1,2,4},{1,2,5}) pair is violated");
        assert_eq!(target.lhs, rational::int(2));
        assert_eq!(target.rhs, rational::int(1));
        let first = report.first_family_violation(mask(6, &[1, 2, 3])).unwrap();
        assert_eq!(
            (first.b1, first.b2),
            (mask(6, &[1, 2, 4]), mask(6, &[1, 2, 5]))
        );
        assert!(EntropyOracle::from_vector(quoted_cardinality_table(), true).is_err());
    }

    #[test]
    fn vector_normalization_and_monotonicity() {
        let v = EntropyVector::from_fn(2, |s| rational::int(s.len() as i64 + 1)).unwrap();
        let r = EntropyOracle::from_vector(v, false)
            .unwrap()
            .check_validity();
        assert!(!r.normalized);
        // H: {}=0, {1}=2, {2}=1, {1,2}=1  gives h({2}) = 1 - 2 < 0
        let v = EntropyVector::new(
            2,
            vec![
                rational::int(0),
                rational::int(2),
                rational::int(1),
                rational::int(1),
            ],
        )
        .unwrap();
        let r = EntropyOracle::from_vector(v, false)
            .unwrap()
            .check_validity();
        assert!(!r.monotonicity.is_empty());
    }

    #[test]
    fn tabular_matches_direct_conditional_entropy() {
        // X1 uniform on {0,1,2}, X2 = X1 mod 2, X3 independent fair bit
        let third = rational::frac(1, 6);
        let mut pmf = Vec::new();
        for x1 in 0..3 {
            for x3 in 0..2 {
                pmf.push((vec![x1, x1 % 2, x3], third.clone()));
            }
        }
        let src = TabularSource::new(vec![3, 2, 2], pmf).unwrap();
        let o = EntropyOracle::from_tabular(src.clone(), DEFAULT_TOLERANCE).unwrap();
        assert!(!o.is_exact());
        for b in SubsetMask::all(3) {
            // H(X_B | X_{B^c}) = -sum p(x) log p(x) / p(x_{B^c})
            let comp = src.marginal(b.complement());
            let idx: Vec<usize> = b.complement().terminals().iter().map(|t| t - 1).collect();
            let direct: f64 = src
                .pmf()
                .iter()
                .map(|(sym, p)| {
                    let key: Vec<usize> = idx.iter().map(|&i| sym[i]).collect();
                    let p = rational::to_f64(p);
                    let q = rational::to_f64(&comp[&key]);
                    -p * (p / q).log2()
                })
                .sum();
            let got = rational::to_f64(&o.cond_entropy_h(b).unwrap());
            assert!((got - direct).abs() < 1e-9, "B = {b}: {got} vs {direct}");
        }
        assert!(o.check_validity().is_valid());
    }

    #[test]
    fn tabular_precision_limit() {
        let src = TabularSource::new(vec![2, 2], vec![(vec![0, 0], rational::one())]).unwrap();
        assert!(matches!(
            EntropyOracle::from_tabular(src, 1e-14),
            Err(Error::PrecisionUnachievable(_))
        ));
    }
}
