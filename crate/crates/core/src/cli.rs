//! Source files, command execution and report rendering behind the
//! `omniscio` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::capacity::{self, CapacityReport, ConstraintFamily};
use crate::dependence::{mutual_dependence_bound, DependenceBound};
use crate::error::{Error, Result};
use crate::lp::Verdict;
use crate::oracle::{EntropyOracle, ValidityReport};
use crate::partition::Partition;
use crate::rational::{self, Rational};
use crate::source::{
    make_counterexample, quoted_cardinality_table, EntropyVector, LinearGF2Source, Source,
    TabularSource,
};
use crate::subset::SubsetMask;
use crate::tightness::{check_bound, construct_partition_from_dual, witness_by_partition_search};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rows of the six-terminal example that the published computation lists as
/// tight at its optimum, each with dual weight 1/4.
pub const QUOTED_TIGHT_ROWS: [&[usize]; 6] = [
    &[1, 3, 4],
    &[2, 3, 5],
    &[1, 2, 6],
    &[1, 2, 4, 5, 6],
    &[1, 3, 4, 5, 6],
    &[2, 3, 4, 5, 6],
];

// ---------------------------------------------------------------------------
// source files

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SourceFile {
    pub m: usize,
    /// 1-based active terminals.
    pub active: Vec<usize>,
    pub source: SourceSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SourceSpec {
    LinearGf2 {
        base_bits: usize,
        /// Per terminal, rows as bit strings; the first character is `Y_1`.
        terminals: Vec<Vec<String>>,
    },
    Tabular {
        alphabets: Vec<usize>,
        pmf: Vec<PmfEntry>,
    },
    EntropyVector {
        /// Subset key `"1,3,4"` to joint entropy `"p/q"`; `""` is optional.
        entropies: BTreeMap<String, String>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PmfEntry {
    pub symbols: Vec<usize>,
    pub p: String,
}

impl SourceFile {
    pub fn from_source(source: &Source, active: SubsetMask) -> Self {
        let spec = match source {
            Source::Linear(s) => SourceSpec::LinearGf2 {
                base_bits: s.base_bits(),
                terminals: s.rows_as_strings(),
            },
            Source::Tabular(s) => SourceSpec::Tabular {
                alphabets: s.alphabets().to_vec(),
                pmf: s
                    .pmf()
                    .iter()
                    .map(|(symbols, p)| PmfEntry {
                        symbols: symbols.clone(),
                        p: p.to_string(),
                    })
                    .collect(),
            },
            Source::Vector(v) => SourceSpec::EntropyVector {
                entropies: SubsetMask::all(v.m())
                    .filter(|s| !s.is_empty())
                    .map(|s| (s.key(), v.get(s).to_string()))
                    .collect(),
            },
        };
        SourceFile {
            m: source.m(),
            active: active.terminals(),
            source: spec,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("source files always serialize")
    }

    pub fn into_source(self) -> Result<(Source, SubsetMask)> {
        let m = self.m;
        let active = SubsetMask::from_terminals(m, self.active.iter().copied())?;
        let source = match self.source {
            SourceSpec::LinearGf2 {
                base_bits,
                terminals,
            } => {
                if terminals.len() != m {
                    return Err(Error::Parse(format!(
                        "expected {m} terminals, got {}",
                        terminals.len()
                    )));
                }
                Source::Linear(LinearGF2Source::from_bit_strings(base_bits, &terminals)?)
            }
            SourceSpec::Tabular { alphabets, pmf } => {
                if alphabets.len() != m {
                    return Err(Error::Parse(format!(
                        "expected {m} alphabets, got {}",
                        alphabets.len()
                    )));
                }
                let pmf = pmf
                    .into_iter()
                    .map(|e| Ok((e.symbols, rational::parse(&e.p)?)))
                    .collect::<Result<Vec<_>>>()?;
                Source::Tabular(TabularSource::new(alphabets, pmf)?)
            }
            SourceSpec::EntropyVector { entropies } => {
                let mut values: Vec<Option<Rational>> = vec![None; 1 << m];
                values[0] = Some(rational::zero());
                for (key, text) in &entropies {
                    let s = SubsetMask::parse_key(m, key)?;
                    values[s.bits() as usize] = Some(rational::parse(text)?);
                }
                let values = values
                    .into_iter()
                    .enumerate()
                    .map(|(bits, v)| {
                        v.ok_or_else(|| {
                            Error::Parse(format!(
                                "entropy vector is missing subset {}",
                                SubsetMask::new(bits as u32, m)
                                    .map(|s| s.to_string())
                                    .unwrap_or_default()
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Source::Vector(EntropyVector::new(m, values)?)
            }
        };
        Ok((source, active))
    }
}

/// Reads a source file and builds its oracle, validating unless told not to.
///
/// Validation failures name the first violated instance, preferring pairs of
/// constraints of the file's active set.
pub fn parse_source_file(path: &Path, validate: bool) -> Result<(EntropyOracle, SubsetMask)> {
    let text = std::fs::read_to_string(path)?;
    parse_source_str(&text, validate)
}

pub fn parse_source_str(text: &str, validate: bool) -> Result<(EntropyOracle, SubsetMask)> {
    let file: SourceFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("malformed source file: {e}")))?;
    let (source, active) = file.into_source()?;
    let oracle = EntropyOracle::from_source(source, false)?;
    if validate {
        let report = oracle.check_validity();
        if !report.is_valid() {
            return Err(Error::Validation(report.first_violation(Some(active))));
        }
    }
    Ok((oracle, active))
}

// ---------------------------------------------------------------------------
// commands

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CounterexampleMode {
    /// The quoted cardinality table, loaded without validation.
    PaperH,
    /// The XOR source itself, through the rank oracle.
    Generative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verb {
    Solve,
    Mdb,
    Tight { constructive: bool },
    Counterexample(CounterexampleMode),
    Audit,
    Validate,
}

impl Verb {
    fn name(&self) -> String {
        match self {
            Verb::Solve => "solve".into(),
            Verb::Mdb => "mdb".into(),
            Verb::Tight {
                constructive: false,
            } => "tight".into(),
            Verb::Tight { constructive: true } => "tight --constructive".into(),
            Verb::Counterexample(CounterexampleMode::PaperH) => {
                "counterexample --mode paper-h".into()
            }
            Verb::Counterexample(CounterexampleMode::Generative) => {
                "counterexample --mode generative".into()
            }
            Verb::Audit => "audit".into(),
            Verb::Validate => "validate".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Command {
    pub verb: Verb,
    pub input: Option<PathBuf>,
    pub no_validate: bool,
}

impl Command {
    pub fn new(verb: Verb, input: Option<PathBuf>) -> Self {
        Command {
            verb,
            input,
            no_validate: false,
        }
    }
}

// ---------------------------------------------------------------------------
// reports

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InputEcho {
    pub source: String,
    pub kind: String,
    pub m: usize,
    pub active: Vec<usize>,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DualEntry {
    pub row: Vec<usize>,
    #[serde(with = "rational::serde_str")]
    pub y: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CapacitySection {
    #[serde(with = "rational::serde_str")]
    pub h_full: Rational,
    #[serde(with = "rational::serde_str")]
    pub r_co: Rational,
    #[serde(with = "rational::serde_str")]
    pub c_sk: Rational,
    #[serde(with = "rational::serde_vec")]
    pub rates: Vec<Rational>,
    /// Nonzero dual entries only.
    pub dual: Vec<DualEntry>,
    pub tight_rows: Vec<Vec<usize>>,
    pub uniqueness: Verdict,
    #[serde(with = "rational::serde_str")]
    pub auxiliary_objective: Rational,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "rational::serde_opt_vec"
    )]
    pub alternative_vertex: Option<Vec<Rational>>,
}

impl CapacitySection {
    fn from_report(rep: &CapacityReport) -> Self {
        let dual = rep
            .dual
            .iter()
            .enumerate()
            .filter(|(_, y)| **y != rational::zero())
            .map(|(i, y)| DualEntry {
                row: rep.row(i).terminals(),
                y: y.clone(),
            })
            .collect();
        CapacitySection {
            h_full: rep.h_full.clone(),
            r_co: rep.r_co.clone(),
            c_sk: rep.c_sk.clone(),
            rates: rep.rates.0.clone(),
            dual,
            tight_rows: rep.tight.iter().map(|b| b.terminals()).collect(),
            uniqueness: rep.uniqueness.verdict,
            auxiliary_objective: rep.uniqueness.auxiliary_objective.clone(),
            alternative_vertex: rep.uniqueness.alternative.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DependenceSection {
    #[serde(with = "rational::serde_str")]
    pub i_a: Rational,
    pub minimizers: Vec<Vec<Vec<usize>>>,
    pub partitions_examined: usize,
}

impl From<&DependenceBound> for DependenceSection {
    fn from(b: &DependenceBound) -> Self {
        DependenceSection {
            i_a: b.value.clone(),
            minimizers: b.minimizers.iter().map(Partition::to_terminals).collect(),
            partitions_examined: b.partitions_examined,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WitnessSection {
    pub partition: Vec<Vec<usize>>,
    #[serde(with = "rational::serde_vec")]
    pub rates: Vec<Rational>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TightnessSection {
    pub tight: bool,
    #[serde(with = "rational::serde_str")]
    pub gap: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSection>,
    /// Verdict of the partition-search decider, when run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_tight: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_witness: Option<WitnessSection>,
    /// Partition built from the dual support, all-active case only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_partition: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ValiditySection {
    pub valid: bool,
    pub normalized: bool,
    pub monotonicity_violations: usize,
    pub supermodularity_violations: usize,
    pub exhaustive: bool,
    pub first_violation: String,
}

impl ValiditySection {
    fn new(report: &ValidityReport, active: Option<SubsetMask>) -> Self {
        ValiditySection {
            valid: report.is_valid(),
            normalized: report.normalized,
            monotonicity_violations: report.monotonicity.len(),
            supermodularity_violations: report.supermodularity.len(),
            exhaustive: report.exhaustive,
            first_violation: report.first_violation(active),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AuditRow {
    pub subset: Vec<usize>,
    #[serde(with = "rational::serde_str")]
    pub h_quoted: Rational,
    #[serde(with = "rational::serde_str")]
    pub h_generative: Rational,
    pub differs: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AuditSide {
    pub label: String,
    pub validity: ValiditySection,
    pub capacity: CapacitySection,
    pub dependence: DependenceSection,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AuditSection {
    /// Every constraint mask of the family, then the full set.
    pub rows: Vec<AuditRow>,
    pub differing: usize,
    pub quoted: AuditSide,
    pub generative: AuditSide,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub input: InputEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<CapacitySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dependence: Option<DependenceSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tightness: Option<TightnessSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validity: Option<ValiditySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
}

impl Report {
    fn new(verb: &Verb, input: InputEcho) -> Self {
        Report {
            command: verb.name(),
            version: VERSION.to_string(),
            input,
            capacity: None,
            dependence: None,
            tightness: None,
            validity: None,
            audit: None,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, expected: impl ToString, observed: impl ToString, pass: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            expected: expected.to_string(),
            observed: observed.to_string(),
            pass,
        });
    }

    fn check_eq(&mut self, name: &str, expected: &Rational, observed: &Rational) {
        self.check(name, expected, observed, expected == observed);
    }

    /// 0 success, 1 a check failed, 2 the validated input is invalid.
    pub fn exit_code(&self) -> i32 {
        if self.validity.as_ref().is_some_and(|v| !v.valid) && self.command == "validate" {
            2
        } else if self.checks.iter().any(|c| !c.pass) {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("malformed report: {e}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

// ---------------------------------------------------------------------------
// execution

fn echo(label: &str, oracle: &EntropyOracle, active: SubsetMask) -> InputEcho {
    InputEcho {
        source: label.to_string(),
        kind: oracle.source().kind().to_string(),
        m: oracle.m(),
        active: active.terminals(),
        exact: oracle.is_exact(),
    }
}

fn load(cmd: &Command) -> Result<(EntropyOracle, SubsetMask, String)> {
    let path = cmd
        .input
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("this command needs an input file".into()))?;
    let (oracle, active) = parse_source_file(path, !cmd.no_validate)?;
    Ok((oracle, active, path.display().to_string()))
}

/// Quoted cardinality table with terminals 1, 2, 3 active.
pub fn quoted_table_oracle() -> (EntropyOracle, SubsetMask) {
    let oracle = EntropyOracle::from_vector(quoted_cardinality_table(), false)
        .expect("builtin table has the right shape");
    let (_, active) = make_counterexample();
    (oracle, active)
}

/// The XOR source with terminals 1, 2, 3 active.
pub fn generative_oracle() -> (EntropyOracle, SubsetMask) {
    let (source, active) = make_counterexample();
    (EntropyOracle::from_linear(source), active)
}

pub fn execute(cmd: &Command) -> Result<Report> {
    match &cmd.verb {
        Verb::Solve => {
            let (oracle, active, label) = load(cmd)?;
            let mut report = Report::new(&cmd.verb, echo(&label, &oracle, active));
            let rep = capacity::r_co(&oracle, active)?;
            report.capacity = Some(CapacitySection::from_report(&rep));
            Ok(report)
        }
        Verb::Mdb => {
            let (oracle, active, label) = load(cmd)?;
            let mut report = Report::new(&cmd.verb, echo(&label, &oracle, active));
            let bound = mutual_dependence_bound(&oracle, active)?;
            report.dependence = Some((&bound).into());
            Ok(report)
        }
        Verb::Tight { constructive } => {
            let (oracle, active, label) = load(cmd)?;
            let mut report = Report::new(&cmd.verb, echo(&label, &oracle, active));
            tightness_into(&mut report, &oracle, active, *constructive)?;
            Ok(report)
        }
        Verb::Validate => {
            let path = cmd
                .input
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("validate needs an input file".into()))?;
            let (oracle, active) = parse_source_file(path, false)?;
            let mut report = Report::new(
                &cmd.verb,
                echo(&path.display().to_string(), &oracle, active),
            );
            report.validity = Some(ValiditySection::new(&oracle.check_validity(), Some(active)));
            Ok(report)
        }
        Verb::Counterexample(mode) => counterexample(&cmd.verb, *mode),
        Verb::Audit => audit(&cmd.verb),
    }
}

fn witness_section(w: &crate::tightness::Witness) -> WitnessSection {
    WitnessSection {
        partition: w.partition.to_terminals(),
        rates: w.rates.0.clone(),
    }
}

fn tightness_into(
    report: &mut Report,
    oracle: &EntropyOracle,
    active: SubsetMask,
    constructive: bool,
) -> Result<()> {
    let family = ConstraintFamily::build(oracle.m(), active)?;
    let cap = capacity::r_co_with_family(oracle, &family)?;
    let bound = mutual_dependence_bound(oracle, active)?;
    let direct = check_bound(oracle, active)?;
    let mut section = TightnessSection {
        tight: direct.tight,
        gap: direct.gap.clone().expect("direct form computes the gap"),
        witness: direct.witness.as_ref().map(witness_section),
        search_tight: None,
        search_witness: None,
        dual_partition: None,
    };
    if constructive {
        let search = witness_by_partition_search(oracle, active)?;
        section.search_tight = Some(search.tight);
        section.search_witness = search.witness.as_ref().map(witness_section);
        let word = |t: bool| if t { "tight" } else { "loose" };
        report.check(
            "direct and partition-search deciders agree",
            format!("direct {}", word(direct.tight)),
            format!("search {}", word(search.tight)),
            direct.tight == search.tight,
        );
        if active.is_full() {
            let built = construct_partition_from_dual(oracle, &family, &cap.solution)?;
            section.dual_partition = Some(built.partition.to_terminals());
        }
    }
    report.capacity = Some(CapacitySection::from_report(&cap));
    report.dependence = Some((&bound).into());
    report.tightness = Some(section);
    Ok(())
}

fn quoted_rows() -> Vec<Vec<usize>> {
    QUOTED_TIGHT_ROWS.iter().map(|r| r.to_vec()).collect()
}

fn fmt_rows(rows: &[Vec<usize>]) -> String {
    rows.iter()
        .map(|r| {
            format!(
                "{{{}}}",
                r.iter()
                    .map(|t| t.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn fmt_vec(v: &[Rational]) -> String {
    format!(
        "({})",
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

/// Checks shared by both counterexample modes: the optimum, its uniqueness
/// and the published tight rows with their dual weights.
fn counterexample_checks(report: &mut Report, cap: &CapacityReport) {
    let quarter = rational::frac(1, 4);
    let half = rational::frac(1, 2);
    let x = vec![
        quarter.clone(),
        quarter.clone(),
        quarter.clone(),
        half.clone(),
        half.clone(),
        half,
    ];
    report.check_eq("R_CO(A)", &rational::frac(9, 4), &cap.r_co);
    report.check(
        "optimal rates",
        fmt_vec(&x),
        fmt_vec(&cap.rates.0),
        cap.rates.0 == x,
    );
    report.check(
        "uniqueness verdict",
        "Unique",
        format!("{:?}", cap.uniqueness.verdict),
        cap.is_unique(),
    );
    let tight: Vec<Vec<usize>> = cap.tight.iter().map(|b| b.terminals()).collect();
    let expected = quoted_rows();
    report.check(
        "tight rows",
        fmt_rows(&expected),
        fmt_rows(&tight),
        tight == expected,
    );
    let support: Vec<Vec<usize>> = cap.dual_support.iter().map(|b| b.terminals()).collect();
    let weights_ok = cap
        .dual
        .iter()
        .filter(|y| **y != rational::zero())
        .all(|y| *y == quarter);
    let observed = cap
        .dual
        .iter()
        .enumerate()
        .filter(|(_, y)| **y != rational::zero())
        .map(|(i, y)| format!("{}:{}", cap.row(i), y))
        .collect::<Vec<_>>()
        .join(" ");
    report.check(
        "dual weights 1/4 on the quoted rows",
        fmt_rows(&expected) + " all 1/4",
        observed,
        support == expected && weights_ok,
    );
}

fn counterexample(verb: &Verb, mode: CounterexampleMode) -> Result<Report> {
    match mode {
        CounterexampleMode::PaperH => {
            let (oracle, active) = quoted_table_oracle();
            let mut report = Report::new(verb, echo("builtin:cardinality-table", &oracle, active));
            let cap = capacity::r_co(&oracle, active)?;
            let bound = mutual_dependence_bound(&oracle, active)?;
            report.check_eq("h(M)", &rational::int(4), &cap.h_full);
            counterexample_checks(&mut report, &cap);
            report.check_eq("C_SK(A)", &rational::frac(7, 4), &cap.c_sk);
            report.check_eq("I(A)", &rational::int(2), &bound.value);
            report.check(
                "strict gap C_SK(A) < I(A)",
                "true",
                cap.c_sk < bound.value,
                cap.c_sk < bound.value,
            );
            report.validity = Some(ValiditySection::new(&oracle.check_validity(), Some(active)));
            report.capacity = Some(CapacitySection::from_report(&cap));
            report.dependence = Some((&bound).into());
            Ok(report)
        }
        CounterexampleMode::Generative => {
            let (source, active) = make_counterexample();
            let oracle = EntropyOracle::from_linear(source.clone());
            let mut report = Report::new(verb, echo("builtin:xor-pairs", &oracle, active));
            let mut mismatches = 0;
            for s in SubsetMask::all(oracle.m()) {
                let enumerated = source.joint_entropy_enumerated(s)?;
                if rational::int(enumerated as i64) != oracle.joint_entropy(s)? {
                    mismatches += 1;
                }
            }
            report.check(
                "rank oracle matches 2^4-point enumeration",
                0,
                mismatches,
                mismatches == 0,
            );
            let cap = capacity::r_co(&oracle, active)?;
            let bound = mutual_dependence_bound(&oracle, active)?;
            report.check_eq("h(M)", &rational::int(3), &cap.h_full);
            counterexample_checks(&mut report, &cap);
            report.check_eq("C_SK(A)", &rational::frac(3, 4), &cap.c_sk);
            report.check_eq("I(A)", &rational::int(1), &bound.value);
            report.check(
                "strict gap C_SK(A) < I(A)",
                "true",
                cap.c_sk < bound.value,
                cap.c_sk < bound.value,
            );
            report.validity = Some(ValiditySection::new(&oracle.check_validity(), Some(active)));
            report.capacity = Some(CapacitySection::from_report(&cap));
            report.dependence = Some((&bound).into());
            Ok(report)
        }
    }
}

fn audit_side(label: &str, oracle: &EntropyOracle, active: SubsetMask) -> Result<AuditSide> {
    let cap = capacity::r_co(oracle, active)?;
    let bound = mutual_dependence_bound(oracle, active)?;
    Ok(AuditSide {
        label: label.to_string(),
        validity: ValiditySection::new(&oracle.check_validity(), Some(active)),
        capacity: CapacitySection::from_report(&cap),
        dependence: (&bound).into(),
    })
}

/// Both descriptions of the six-terminal example side by side. Neither side
/// is adjusted.
pub fn audit_section() -> Result<AuditSection> {
    let (quoted, active) = quoted_table_oracle();
    let (generative, _) = generative_oracle();
    let family = ConstraintFamily::build(6, active)?;
    let mut rows = Vec::new();
    let subsets = family.masks().iter().copied().chain([SubsetMask::full(6)]);
    for s in subsets {
        let hq = quoted.cond_entropy_h(s)?;
        let hg = generative.cond_entropy_h(s)?;
        rows.push(AuditRow {
            subset: s.terminals(),
            differs: hq != hg,
            h_quoted: hq,
            h_generative: hg,
        });
    }
    let differing = rows.iter().filter(|r| r.differs).count();
    Ok(AuditSection {
        rows,
        differing,
        quoted: audit_side("cardinality table", &quoted, active)?,
        generative: audit_side("xor source", &generative, active)?,
    })
}

fn audit(verb: &Verb) -> Result<Report> {
    let (generative, active) = generative_oracle();
    let mut report = Report::new(
        verb,
        echo("builtin:cardinality-table+xor-pairs", &generative, active),
    );
    report.audit = Some(audit_section()?);
    Ok(report)
}

// ---------------------------------------------------------------------------
// rendering

pub fn render_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => render_text(report),
    }
}

fn set(terms: &[usize]) -> String {
    format!(
        "{{{}}}",
        terms
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

fn partition_text(blocks: &[Vec<usize>]) -> String {
    format!(
        "({})",
        blocks.iter().map(|b| set(b)).collect::<Vec<_>>().join(",")
    )
}

fn capacity_text(out: &mut String, c: &CapacitySection) {
    let _ = writeln!(out, "h(M) = {}", rational::pretty(&c.h_full));
    let _ = writeln!(out, "R_CO = {}", rational::pretty(&c.r_co));
    let _ = writeln!(out, "C_SK = {}", rational::pretty(&c.c_sk));
    let _ = writeln!(out, "optimal rates = {}", fmt_vec(&c.rates));
    let _ = writeln!(
        out,
        "uniqueness = {:?} (auxiliary objective {})",
        c.uniqueness, c.auxiliary_objective
    );
    if let Some(alt) = &c.alternative_vertex {
        let _ = writeln!(out, "alternative optimal vertex = {}", fmt_vec(alt));
    }
    let _ = writeln!(
        out,
        "tight rows ({}): {}",
        c.tight_rows.len(),
        fmt_rows(&c.tight_rows)
    );
    let _ = writeln!(out, "dual support ({}):", c.dual.len());
    for d in &c.dual {
        let _ = writeln!(out, "  y{} = {}", set(&d.row), d.y);
    }
}

fn dependence_text(out: &mut String, d: &DependenceSection) {
    let _ = writeln!(out, "I(A) = {}", rational::pretty(&d.i_a));
    let _ = writeln!(
        out,
        "minimizing partitions ({} of {} examined):",
        d.minimizers.len(),
        d.partitions_examined
    );
    for p in &d.minimizers {
        let _ = writeln!(out, "  {}", partition_text(p));
    }
}

fn validity_text(out: &mut String, v: &ValiditySection) {
    let _ = writeln!(
        out,
        "validity: {} (normalized {}, {} monotonicity and {} supermodularity violations{})",
        if v.valid { "valid" } else { "INVALID" },
        v.normalized,
        v.monotonicity_violations,
        v.supermodularity_violations,
        if v.exhaustive {
            ""
        } else {
            ", elemental pairs only"
        }
    );
    if !v.valid {
        let _ = writeln!(out, "  {}", v.first_violation);
    }
}

fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "omniscio {} {}", report.version, report.command);
    let i = &report.input;
    let _ = writeln!(
        out,
        "input: {} ({}, m = {}, active = {}, {})",
        i.source,
        i.kind,
        i.m,
        set(&i.active),
        if i.exact { "exact" } else { "approximate" }
    );
    if let Some(v) = &report.validity {
        validity_text(&mut out, v);
    }
    if let Some(c) = &report.capacity {
        capacity_text(&mut out, c);
    }
    if let Some(d) = &report.dependence {
        dependence_text(&mut out, d);
    }
    if let Some(t) = &report.tightness {
        let _ = writeln!(out, "gap I(A) - C_SK = {}", rational::pretty(&t.gap));
        let _ = writeln!(out, "bound is {}", if t.tight { "tight" } else { "loose" });
        if let Some(w) = &t.witness {
            let _ = writeln!(
                out,
                "witness: {} at {}",
                partition_text(&w.partition),
                fmt_vec(&w.rates)
            );
        }
        if let Some(s) = t.search_tight {
            let _ = writeln!(
                out,
                "partition search: {}",
                if s { "tight" } else { "loose" }
            );
        }
        if let Some(w) = &t.search_witness {
            let _ = writeln!(
                out,
                "search witness: {} at {}",
                partition_text(&w.partition),
                fmt_vec(&w.rates)
            );
        }
        if let Some(p) = &t.dual_partition {
            let _ = writeln!(out, "partition from dual support: {}", partition_text(p));
        }
    }
    if let Some(a) = &report.audit {
        let _ = writeln!(
            out,
            "{:<16} {:>9} {:>12}  differs",
            "subset", "h quoted", "h generative"
        );
        for r in &a.rows {
            let _ = writeln!(
                out,
                "{:<16} {:>9} {:>12}  {}",
                set(&r.subset),
                r.h_quoted.to_string(),
                r.h_generative.to_string(),
                if r.differs { "*" } else { "" }
            );
        }
        let _ = writeln!(out, "{} of {} entries differ", a.differing, a.rows.len());
        for side in [&a.quoted, &a.generative] {
            let _ = writeln!(out, "-- {} --", side.label);
            validity_text(&mut out, &side.validity);
            let _ = writeln!(
                out,
                "R_CO = {}, C_SK = {}, I(A) = {}, uniqueness = {:?}",
                side.capacity.r_co,
                side.capacity.c_sk,
                side.dependence.i_a,
                side.capacity.uniqueness
            );
            let _ = writeln!(
                out,
                "tight rows ({}): {}",
                side.capacity.tight_rows.len(),
                fmt_rows(&side.capacity.tight_rows)
            );
        }
    }
    if !report.checks.is_empty() {
        let _ = writeln!(out, "checks:");
        for c in &report.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            if c.pass {
                let _ = writeln!(out, "  [{mark}] {}: {}", c.name, c.observed);
            } else {
                let _ = writeln!(
                    out,
                    "  [{mark}] {}: expected {}, observed {}",
                    c.name, c.expected, c.observed
                );
            }
        }
    }
    out
}
