//! Discrete multiterminal sources: linear GF(2) sources, tabular joint
//! distributions and raw entropy vectors, plus the constructors used
//! throughout the examples and tests.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rational::{self, Rational};
use crate::subset::{check_m, SubsetMask};

/// Base-bit cap for linear sources: rows are packed in a `u128`.
pub const MAX_BASE_BITS: usize = 128;

/// Base-bit cap for the brute-force enumeration cross-check.
pub const MAX_ENUMERATION_BITS: usize = 20;

/// Rank over GF(2) of a set of bit vectors, by elimination on an XOR basis
/// indexed by leading bit.
pub fn gf2_rank<I: IntoIterator<Item = u128>>(rows: I) -> usize {
    let mut basis = [0u128; 128];
    let mut rank = 0;
    for mut v in rows {
        while v != 0 {
            let lead = 127 - v.leading_zeros() as usize;
            if basis[lead] == 0 {
                basis[lead] = v;
                rank += 1;
                break;
            }
            v ^= basis[lead];
        }
    }
    rank
}

/// Terminal `j` observes XOR combinations of iid uniform bits `Y_1..Y_n`.
///
/// Row bit `i` (least significant first) is the coefficient of `Y_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearGF2Source {
    m: usize,
    n: usize,
    rows: Vec<Vec<u128>>,
}

impl LinearGF2Source {
    pub fn new(n: usize, rows: Vec<Vec<u128>>) -> Result<Self> {
        let m = rows.len();
        check_m(m)?;
        if n == 0 || n > MAX_BASE_BITS {
            return Err(Error::InvalidInput(format!(
                "base bit count {n} outside 1..={MAX_BASE_BITS}"
            )));
        }
        for (j, terminal) in rows.iter().enumerate() {
            for &r in terminal {
                if n < 128 && r >> n != 0 {
                    return Err(Error::InvalidInput(format!(
                        "terminal {} has a row wider than {n} bits",
                        j + 1
                    )));
                }
            }
        }
        Ok(LinearGF2Source { m, n, rows })
    }

    /// Rows as bit strings; the first character is the coefficient of `Y_1`.
    pub fn from_bit_strings<S: AsRef<str>>(n: usize, terminals: &[Vec<S>]) -> Result<Self> {
        let mut rows = Vec::with_capacity(terminals.len());
        for (j, terminal) in terminals.iter().enumerate() {
            let mut parsed = Vec::new();
            for s in terminal {
                let s = s.as_ref();
                if s.len() != n {
                    return Err(Error::Parse(format!(
                        "terminal {} row {s:?} does not have {n} bits",
                        j + 1
                    )));
                }
                parsed.push(parse_row(s)?);
            }
            rows.push(parsed);
        }
        LinearGF2Source::new(n, rows)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn base_bits(&self) -> usize {
        self.n
    }

    /// Rows of terminal `j` (1-based).
    pub fn rows(&self, terminal: usize) -> &[u128] {
        &self.rows[terminal - 1]
    }

    pub fn row_string(&self, row: u128) -> String {
        (0..self.n)
            .map(|i| if row >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn rows_as_strings(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|t| t.iter().map(|&r| self.row_string(r)).collect())
            .collect()
    }

    /// `H(X_S)` in bits: the GF(2) rank of the stacked rows of `S`.
    pub fn joint_entropy_rank(&self, subset: SubsetMask) -> usize {
        gf2_rank(
            subset
                .terminals()
                .into_iter()
                .flat_map(|t| self.rows[t - 1].iter().copied()),
        )
    }

    /// `H(X_S)` by enumerating all `2^n` base-bit assignments and computing
    /// the Shannon entropy of the observed histogram.
    ///
    /// The histogram of a linear image of uniform bits is uniform on a
    /// subgroup, so the entropy is an integer; anything else is a contract
    /// violation.
    pub fn joint_entropy_enumerated(&self, subset: SubsetMask) -> Result<usize> {
        if self.n > MAX_ENUMERATION_BITS {
            return Err(Error::InvalidInput(format!(
                "enumeration needs n <= {MAX_ENUMERATION_BITS}, got {}",
                self.n
            )));
        }
        let rows: Vec<u128> = subset
            .terminals()
            .into_iter()
            .flat_map(|t| self.rows[t - 1].iter().copied())
            .collect();
        let mut counts: HashMap<Vec<bool>, u64> = HashMap::new();
        let total = 1u64 << self.n;
        for y in 0..total {
            let y = y as u128;
            let obs: Vec<bool> = rows
                .iter()
                .map(|&r| (r & y).count_ones() % 2 == 1)
                .collect();
            *counts.entry(obs).or_default() += 1;
        }
        let first = *counts.values().next().unwrap_or(&total);
        if counts.values().any(|&c| c != first) || !(total / first).is_power_of_two() {
            return Err(Error::Contract(
                "linear source histogram is not uniform".into(),
            ));
        }
        Ok((total / first).trailing_zeros() as usize)
    }
}

fn parse_row(s: &str) -> Result<u128> {
    let mut row = 0u128;
    for (i, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => row |= 1 << i,
            _ => return Err(Error::Parse(format!("row {s:?} is not a bit string"))),
        }
    }
    Ok(row)
}

/// A finite joint distribution given as a list of symbol tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabularSource {
    alphabets: Vec<usize>,
    pmf: Vec<(Vec<usize>, Rational)>,
}

impl TabularSource {
    pub fn new(alphabets: Vec<usize>, pmf: Vec<(Vec<usize>, Rational)>) -> Result<Self> {
        let m = alphabets.len();
        check_m(m)?;
        if alphabets.contains(&0) {
            return Err(Error::InvalidInput(
                "alphabet sizes must be positive".into(),
            ));
        }
        let mut seen = HashSet::new();
        let mut total = rational::zero();
        for (symbols, p) in &pmf {
            if symbols.len() != m {
                return Err(Error::InvalidInput(format!(
                    "pmf entry {symbols:?} does not have {m} symbols"
                )));
            }
            if symbols.iter().zip(&alphabets).any(|(s, a)| s >= a) {
                return Err(Error::InvalidInput(format!(
                    "pmf entry {symbols:?} is outside the alphabets"
                )));
            }
            if *p < rational::zero() {
                return Err(Error::InvalidInput(format!(
                    "negative probability for {symbols:?}"
                )));
            }
            if !seen.insert(symbols.clone()) {
                return Err(Error::InvalidInput(format!(
                    "duplicate pmf entry {symbols:?}"
                )));
            }
            total += p;
        }
        if total != rational::one() {
            return Err(Error::InvalidInput(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(TabularSource { alphabets, pmf })
    }

    pub fn m(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabets(&self) -> &[usize] {
        &self.alphabets
    }

    pub fn pmf(&self) -> &[(Vec<usize>, Rational)] {
        &self.pmf
    }

    /// Exact marginal on `subset`, keyed by the projected tuple.
    pub fn marginal(&self, subset: SubsetMask) -> BTreeMap<Vec<usize>, Rational> {
        let idx: Vec<usize> = subset.terminals().into_iter().map(|t| t - 1).collect();
        let mut out: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (symbols, p) in &self.pmf {
            let key: Vec<usize> = idx.iter().map(|&i| symbols[i]).collect();
            *out.entry(key).or_insert_with(rational::zero) += p;
        }
        out
    }

    /// `H(X_S)` in bits, as a float.
    pub fn joint_entropy_f64(&self, subset: SubsetMask) -> f64 {
        self.marginal(subset)
            .values()
            .map(rational::to_f64)
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.log2())
            .sum()
    }
}

/// Joint entropies `H(X_S)` for every subset, indexed by mask bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropyVector {
    m: usize,
    values: Vec<Rational>,
}

impl EntropyVector {
    /// `values[bits]` is the joint entropy of the subset with mask `bits`.
    pub fn new(m: usize, values: Vec<Rational>) -> Result<Self> {
        check_m(m)?;
        if values.len() != 1 << m {
            return Err(Error::InvalidInput(format!(
                "entropy vector needs {} entries, got {}",
                1usize << m,
                values.len()
            )));
        }
        Ok(EntropyVector { m, values })
    }

    pub fn from_fn<F: FnMut(SubsetMask) -> Rational>(m: usize, f: F) -> Result<Self> {
        check_m(m)?;
        EntropyVector::new(m, SubsetMask::all(m).map(f).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, subset: SubsetMask) -> &Rational {
        &self.values[subset.bits() as usize]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

/// Any of the supported source descriptions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Linear(LinearGF2Source),
    Tabular(TabularSource),
    Vector(EntropyVector),
}

impl Source {
    pub fn m(&self) -> usize {
        match self {
            Source::Linear(s) => s.m(),
            Source::Tabular(s) => s.m(),
            Source::Vector(s) => s.m(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Source::Linear(_) => "linear_gf2",
            Source::Tabular(_) => "tabular",
            Source::Vector(_) => "entropy_vector",
        }
    }
}

impl From<LinearGF2Source> for Source {
    fn from(s: LinearGF2Source) -> Self {
        Source::Linear(s)
    }
}

impl From<TabularSource> for Source {
    fn from(s: TabularSource) -> Self {
        Source::Tabular(s)
    }
}

impl From<EntropyVector> for Source {
    fn from(s: EntropyVector) -> Self {
        Source::Vector(s)
    }
}

/// Lets every member of block `C_i` see `X_{C_i}`: the result has one
/// terminal per block.
pub fn merge_terminals(source: &Source, partition: &Partition) -> Result<Source> {
    if partition.m() != source.m() {
        return Err(Error::InvalidInput(format!(
            "partition is over m = {} but the source has m = {}",
            partition.m(),
            source.m()
        )));
    }
    let k = partition.k();
    check_m(k)?;
    let blocks = partition.blocks();
    Ok(match source {
        Source::Linear(s) => {
            let rows = blocks
                .iter()
                .map(|b| {
                    b.terminals()
                        .iter()
                        .flat_map(|&t| s.rows(t).to_vec())
                        .collect()
                })
                .collect();
            Source::Linear(LinearGF2Source::new(s.base_bits(), rows)?)
        }
        Source::Tabular(s) => {
            let mut alphabets = Vec::with_capacity(k);
            for b in blocks {
                let size = b
                    .terminals()
                    .iter()
                    .try_fold(1usize, |acc, &t| acc.checked_mul(s.alphabets()[t - 1]))
                    .ok_or_else(|| Error::InvalidInput("merged alphabet overflows".into()))?;
                alphabets.push(size);
            }
            let pmf = s
                .pmf()
                .iter()
                .map(|(symbols, p)| {
                    let merged = blocks
                        .iter()
                        .map(|b| {
                            b.terminals().iter().fold(0usize, |acc, &t| {
                                acc * s.alphabets()[t - 1] + symbols[t - 1]
                            })
                        })
                        .collect();
                    (merged, p.clone())
                })
                .collect();
            Source::Tabular(TabularSource::new(alphabets, pmf)?)
        }
        Source::Vector(v) => {
            let merged = EntropyVector::from_fn(k, |t| {
                let bits = t
                    .terminals()
                    .iter()
                    .fold(0u32, |acc, &i| acc | blocks[i - 1].bits());
                v.get(SubsetMask::from_bits_unchecked(bits, v.m())).clone()
            })?;
            Source::Vector(merged)
        }
    })
}

/// Six terminals observing the XOR of every distinct pair of four uniform
/// bits, with terminals 1, 2, 3 active.
pub fn make_counterexample() -> (LinearGF2Source, SubsetMask) {
    const ROWS: [&str; 6] = ["1010", "1001", "0011", "0110", "0101", "1100"];
    let terminals: Vec<Vec<&str>> = ROWS.iter().map(|r| vec![*r]).collect();
    let source = LinearGF2Source::from_bit_strings(4, &terminals).expect("builtin rows are valid");
    let active = SubsetMask::from_terminals(6, [1, 2, 3]).expect("builtin active set");
    (source, active)
}

/// The cardinality-only conditional entropy table quoted for the six-terminal
/// example: `h(B) = 0, 1, 2` for `|B|` in `{1,2}`, `{3,4}`, `{5}`, with
/// `h(M) = 4`. Stored as joint entropies `H(X_S) = h(M) - h(S^c)`.
///
/// This table is not a genuine entropy function (it is not supermodular) and
/// must be loaded with validation disabled.
pub fn quoted_cardinality_table() -> EntropyVector {
    fn h_of_size(size: usize) -> i64 {
        match size {
            0..=2 => 0,
            3 | 4 => 1,
            5 => 2,
            _ => 4,
        }
    }
    EntropyVector::from_fn(6, |s| rational::int(4 - h_of_size(6 - s.len())))
        .expect("m = 6 is in range")
}

/// `X_i = (Y, Z_i)`: a shared core of `core_bits` uniform bits plus
/// `petal_bits` private uniform bits per terminal.
pub fn make_sunflower(m: usize, core_bits: usize, petal_bits: usize) -> Result<LinearGF2Source> {
    check_m(m)?;
    let n = core_bits + m * petal_bits;
    if n == 0 {
        // A single constant-zero base bit keeps the source well formed.
        return LinearGF2Source::new(1, vec![Vec::new(); m]);
    }
    let rows = (0..m)
        .map(|i| {
            let core = (0..core_bits).map(|b| 1u128 << b);
            let petal = (0..petal_bits).map(move |b| 1u128 << (core_bits + i * petal_bits + b));
            core.chain(petal).collect()
        })
        .collect();
    LinearGF2Source::new(n, rows)
}

/// Deterministic random linear source: each terminal gets `rows_per_terminal`
/// rows drawn uniformly from the nonzero `n`-bit vectors.
pub fn random_linear_source(
    m: usize,
    n: usize,
    rows_per_terminal: usize,
    seed: u64,
) -> Result<LinearGF2Source> {
    check_m(m)?;
    if n == 0 || n > 64 || rows_per_terminal == 0 {
        return Err(Error::InvalidInput(
            "random sources need 1 <= n <= 64 and at least one row per terminal".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top: u128 = 1u128 << n;
    let rows = (0..m)
        .map(|_| {
            (0..rows_per_terminal)
                .map(|_| rng.gen_range(1..top))
                .collect()
        })
        .collect();
    LinearGF2Source::new(n, rows)
}
