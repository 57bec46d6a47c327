//! Exact rational simplex for `min c·x  s.t.  A x >= b` with a 0/1
//! incidence matrix `A`, plus the vertex-uniqueness test.
//!
//! The solver works on the dual `max y·b  s.t.  y A = c, y >= 0`, which has
//! only `m` equality rows however many constraints there are. Pivoting uses
//! Bland's least-index rule in both phases, so runs are deterministic and
//! terminate on degenerate vertices. The primal vertex is read off the final
//! basis as the simplex multipliers.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{self, Rational};
use crate::subset::{check_m, SubsetMask};

/// Hard cap on the number of constraint rows.
pub const MAX_ROWS: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("malformed constraint system: {0}")]
    Malformed(String),
    #[error("solution is not optimal for this system: {0}")]
    NotOptimal(String),
    #[error("solver contract violated: {0}")]
    Contract(String),
}

/// Rows `B` of the system `Σ_{j∈B} x_j >= b_B`, objective `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    m: usize,
    rows: Vec<SubsetMask>,
    b: Vec<Rational>,
    c: Vec<Rational>,
}

impl ConstraintSystem {
    /// Objective defaults to all ones.
    pub fn new(m: usize, rows: Vec<SubsetMask>, b: Vec<Rational>) -> Result<Self, LpError> {
        let c = vec![rational::one(); m];
        ConstraintSystem::with_objective(m, rows, b, c)
    }

    pub fn with_objective(
        m: usize,
        rows: Vec<SubsetMask>,
        b: Vec<Rational>,
        c: Vec<Rational>,
    ) -> Result<Self, LpError> {
        check_m(m).map_err(|e| LpError::Malformed(e.to_string()))?;
        if rows.len() != b.len() {
            return Err(LpError::Malformed(format!(
                "{} rows but {} right-hand sides",
                rows.len(),
                b.len()
            )));
        }
        if c.len() != m {
            return Err(LpError::Malformed(format!(
                "objective has {} entries, not {m}",
                c.len()
            )));
        }
        if rows.len() > MAX_ROWS {
            return Err(LpError::Malformed(format!("more than {MAX_ROWS} rows")));
        }
        let mut covered = 0u32;
        for r in &rows {
            if r.m() != m {
                return Err(LpError::Malformed(format!("row {r} is not over m = {m}")));
            }
            if r.is_empty() || r.is_full() {
                return Err(LpError::Malformed(format!(
                    "row {r} is all zeros or all ones"
                )));
            }
            covered |= r.bits();
        }
        if covered != SubsetMask::full(m).bits() {
            return Err(LpError::Malformed(
                "some column is not covered by any row".into(),
            ));
        }
        Ok(ConstraintSystem { m, rows, b, c })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Row count `l`.
    pub fn l(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SubsetMask] {
        &self.rows
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn c(&self) -> &[Rational] {
        &self.c
    }

    /// `A_{i·} x`.
    pub fn row_dot(&self, i: usize, x: &[Rational]) -> Rational {
        mask_dot(self.rows[i], x)
    }

    fn dense_rows(&self) -> Vec<(Vec<Rational>, Rational)> {
        self.rows
            .iter()
            .zip(&self.b)
            .map(|(r, b)| (indicator(*r), b.clone()))
            .collect()
    }
}

pub(crate) fn mask_dot(mask: SubsetMask, x: &[Rational]) -> Rational {
    mask.terminals()
        .into_iter()
        .fold(rational::zero(), |acc, t| acc + &x[t - 1])
}

fn indicator(mask: SubsetMask) -> Vec<Rational> {
    (1..=mask.m())
        .map(|t| {
            if mask.contains(t) {
                rational::one()
            } else {
                rational::zero()
            }
        })
        .collect()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(rational::zero(), |acc, (x, y)| acc + x * y)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub objective: Rational,
    /// Vertex primal optimum.
    pub x: Vec<Rational>,
    /// Dual optimum, one entry per row.
    pub y: Vec<Rational>,
    /// Rows with `A_{i·} x = b_i`, ascending.
    pub tight_rows: Vec<usize>,
}

impl LpSolution {
    /// Number of strictly positive dual entries.
    pub fn support_size(&self) -> usize {
        self.y.iter().filter(|v| v.is_positive()).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.y.len())
            .filter(|&i| self.y[i].is_positive())
            .collect()
    }
}

/// Solves the system and checks strong duality, both feasibilities and
/// complementary slackness exactly before returning.
pub fn solve(system: &ConstraintSystem) -> Result<LpSolution, LpError> {
    let lp = FreeLp {
        n: system.m,
        cost: system.c.clone(),
        ge_rows: system.dense_rows(),
        eq_rows: Vec::new(),
    };
    let opt = minimize_free(&lp)?;
    let tight = (0..system.l())
        .filter(|&i| system.row_dot(i, &opt.x) == system.b[i])
        .collect();
    let solution = LpSolution {
        objective: opt.objective,
        x: opt.x,
        y: opt.ge_duals,
        tight_rows: tight,
    };
    check_optimality(system, &solution)?;
    Ok(solution)
}

/// Verifies every optimality condition of `solution` exactly.
pub fn check_optimality(system: &ConstraintSystem, solution: &LpSolution) -> Result<(), LpError> {
    let fail = |what: &str| Err(LpError::Contract(what.to_string()));
    if solution.x.len() != system.m || solution.y.len() != system.l() {
        return fail("solution dimensions do not match the system");
    }
    if dot(&system.c, &solution.x) != solution.objective {
        return fail("objective differs from c·x");
    }
    let dual_value = dot(&solution.y, &system.b);
    if dual_value != solution.objective {
        return fail("strong duality c·x = y·b fails");
    }
    if solution.y.iter().any(|v| v.is_negative()) {
        return fail("dual has a negative entry");
    }
    for j in 0..system.m {
        let col: Rational = system
            .rows
            .iter()
            .zip(&solution.y)
            .filter(|(r, _)| r.contains(j + 1))
            .fold(rational::zero(), |acc, (_, y)| acc + y);
        if col != system.c[j] {
            return fail("dual feasibility y·A = c fails");
        }
    }
    for i in 0..system.l() {
        let lhs = system.row_dot(i, &solution.x);
        if lhs < system.b[i] {
            return fail("primal feasibility A x >= b fails");
        }
        if solution.y[i].is_positive() && lhs != system.b[i] {
            return fail("complementary slackness fails");
        }
    }
    Ok(())
}

/// Rows tight at the solution's primal point, with their subsets.
pub fn tight_rows(solution: &LpSolution, system: &ConstraintSystem) -> Vec<(usize, SubsetMask)> {
    (0..system.l())
        .filter(|&i| system.row_dot(i, &solution.x) == system.b[i])
        .map(|i| (i, system.rows[i]))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Verdict {
    Unique,
    NotUnique,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniquenessCertificate {
    pub verdict: Verdict,
    /// Optimum of the auxiliary program; zero exactly when unique.
    pub auxiliary_objective: Rational,
    /// Coordinates of `(x; x_s)` that vanish at the tested vertex.
    pub zero_coordinates: usize,
    /// A different optimal vertex `x`, present iff not unique.
    pub alternative: Option<Vec<Rational>>,
    /// Its slack vector `A x - b`.
    pub alternative_slack: Option<Vec<Rational>>,
}

/// Decides whether `solution.x` is the only optimal point.
///
/// With slacks `x_s = A x - b` the program reads `[A | -I](x; x_s) = b`,
/// `(x; x_s) >= 0`. Let `d` mark the zero coordinates of the tested vertex
/// and maximize `d·(x; x_s)` over the optimal face (`c·x` fixed at the
/// optimum). The maximum is zero iff the vertex is the unique optimum;
/// otherwise the maximizer is another optimal vertex. Slacks are substituted
/// out, so the program is solved over `x` alone.
pub fn uniqueness_test(
    system: &ConstraintSystem,
    solution: &LpSolution,
) -> Result<UniquenessCertificate, LpError> {
    let m = system.m;
    if solution.x.len() != m || solution.y.len() != system.l() {
        return Err(LpError::NotOptimal("dimensions do not match".into()));
    }
    // optimality certificate: x feasible, y dual feasible, equal objectives
    let cx = dot(&system.c, &solution.x);
    if cx != solution.objective {
        return Err(LpError::NotOptimal(format!(
            "c·x = {cx} but the reported objective is {}",
            solution.objective
        )));
    }
    if let Err(e) = check_optimality(system, solution) {
        return Err(LpError::NotOptimal(e.to_string()));
    }
    if solution.x.iter().any(|v| v.is_negative()) {
        return Err(LpError::NotOptimal("equational form needs x >= 0".into()));
    }

    let zero_x: Vec<usize> = (0..m).filter(|&j| solution.x[j].is_zero()).collect();
    let zero_s: Vec<usize> = (0..system.l())
        .filter(|&i| system.row_dot(i, &solution.x) == system.b[i])
        .collect();

    let mut gain = vec![rational::zero(); m];
    let mut offset = rational::zero();
    for &j in &zero_x {
        gain[j] += rational::one();
    }
    for &i in &zero_s {
        for t in system.rows[i].terminals() {
            gain[t - 1] += rational::one();
        }
        offset += &system.b[i];
    }

    let mut ge_rows = system.dense_rows();
    for j in 0..m {
        let mut e = vec![rational::zero(); m];
        e[j] = rational::one();
        ge_rows.push((e, rational::zero()));
    }
    let lp = FreeLp {
        n: m,
        cost: gain.iter().map(|g| -g).collect(),
        ge_rows,
        eq_rows: vec![(system.c.clone(), solution.objective.clone())],
    };
    let opt = minimize_free(&lp)?;
    let value = dot(&gain, &opt.x) - offset;
    if value.is_negative() {
        return Err(LpError::Contract("auxiliary objective is negative".into()));
    }
    let zero_coordinates = zero_x.len() + zero_s.len();
    if value.is_zero() {
        Ok(UniquenessCertificate {
            verdict: Verdict::Unique,
            auxiliary_objective: value,
            zero_coordinates,
            alternative: None,
            alternative_slack: None,
        })
    } else {
        let slack = (0..system.l())
            .map(|i| system.row_dot(i, &opt.x) - &system.b[i])
            .collect();
        Ok(UniquenessCertificate {
            verdict: Verdict::NotUnique,
            auxiliary_objective: value,
            zero_coordinates,
            alternative: Some(opt.x),
            alternative_slack: Some(slack),
        })
    }
}

/// `min cost·x` over free `x` subject to `g·x >= rhs` and `e·x = rhs` rows.
pub(crate) struct FreeLp {
    pub n: usize,
    pub cost: Vec<Rational>,
    pub ge_rows: Vec<(Vec<Rational>, Rational)>,
    pub eq_rows: Vec<(Vec<Rational>, Rational)>,
}

pub(crate) struct FreeLpOptimum {
    pub x: Vec<Rational>,
    pub objective: Rational,
    pub ge_duals: Vec<Rational>,
}

/// Dual columns: one per `>=` row, then `+e` and `-e` per equality row.
pub(crate) fn minimize_free(lp: &FreeLp) -> Result<FreeLpOptimum, LpError> {
    let n = lp.n;
    let mut columns: Vec<(&[Rational], Rational)> = Vec::new();
    for (row, rhs) in &lp.ge_rows {
        columns.push((row, rhs.clone()));
    }
    let negated: Vec<(Vec<Rational>, Rational)> = lp
        .eq_rows
        .iter()
        .map(|(row, rhs)| (row.iter().map(|v| -v).collect(), -rhs))
        .collect();
    for ((row, rhs), (neg_row, neg_rhs)) in lp.eq_rows.iter().zip(&negated) {
        columns.push((row, rhs.clone()));
        columns.push((neg_row, neg_rhs.clone()));
    }
    let mut tab = Tableau::new(n, &columns, &lp.cost);
    tab.phase_one()?;
    tab.phase_two()?;
    let duals = tab.structural_values();
    let x = tab.multipliers();
    let objective = tab.objective_value();
    Ok(FreeLpOptimum {
        x,
        objective,
        ge_duals: duals[..lp.ge_rows.len()].to_vec(),
    })
}

/// Dense tableau for `max profit·z  s.t.  M z = r, z >= 0` with one
/// artificial column per equation.
struct Tableau {
    rows: usize,
    structural: usize,
    /// `rows` rows of `structural + rows` coefficients followed by the rhs.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs over all columns; last entry is minus the objective.
    obj: Vec<Rational>,
    profit: Vec<Rational>,
    /// `-1` where an equation was negated to make its rhs nonnegative.
    sign: Vec<bool>,
}

impl Tableau {
    fn new(rows: usize, columns: &[(&[Rational], Rational)], rhs: &[Rational]) -> Self {
        let structural = columns.len();
        let width = structural + rows + 1;
        let mut t = vec![vec![rational::zero(); width]; rows];
        let mut sign = vec![false; rows];
        for j in 0..rows {
            let flip = rhs[j].is_negative();
            sign[j] = flip;
            for (c, (col, _)) in columns.iter().enumerate() {
                let v = &col[j];
                if !v.is_zero() {
                    t[j][c] = if flip { -v } else { v.clone() };
                }
            }
            t[j][structural + j] = rational::one();
            t[j][width - 1] = if flip { -&rhs[j] } else { rhs[j].clone() };
        }
        let profit = columns.iter().map(|(_, p)| p.clone()).collect();
        Tableau {
            rows,
            structural,
            t,
            basis: (structural..structural + rows).collect(),
            obj: Vec::new(),
            profit,
            sign,
        }
    }

    fn width(&self) -> usize {
        self.structural + self.rows + 1
    }

    fn cost_of(&self, col: usize, phase_one: bool) -> Rational {
        match (phase_one, col < self.structural) {
            (true, true) => rational::zero(),
            (true, false) => -rational::one(),
            (false, true) => self.profit[col].clone(),
            (false, false) => rational::zero(),
        }
    }

    fn price(&mut self, phase_one: bool) {
        let w = self.width();
        let mut obj: Vec<Rational> = (0..w - 1).map(|c| self.cost_of(c, phase_one)).collect();
        obj.push(rational::zero());
        for r in 0..self.rows {
            let cb = self.cost_of(self.basis[r], phase_one);
            if cb.is_zero() {
                continue;
            }
            for (c, v) in self.t[r].iter().enumerate() {
                if !v.is_zero() {
                    obj[c] -= &cb * v;
                }
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width();
        let p = self.t[row][col].clone();
        for v in self.t[row].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        let nz: Vec<usize> = (0..w).filter(|&c| !self.t[row][c].is_zero()).collect();
        let pivot_row = self.t[row].clone();
        for r in 0..self.rows {
            if r == row || self.t[r][col].is_zero() {
                continue;
            }
            let f = self.t[r][col].clone();
            for &c in &nz {
                let delta = &f * &pivot_row[c];
                self.t[r][c] -= delta;
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for &c in &nz {
                let delta = &f * &pivot_row[c];
                self.obj[c] -= delta;
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule: least entering index, least basic index among ties.
    fn run(&mut self, allow_artificial: bool) -> Result<(), LpError> {
        let w = self.width();
        let limit = if allow_artificial {
            w - 1
        } else {
            self.structural
        };
        loop {
            let Some(enter) = (0..limit).find(|&c| self.obj[c].is_positive()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows {
                let a = &self.t[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.t[r][w - 1] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return Err(LpError::Unbounded),
            }
        }
    }

    fn phase_one(&mut self) -> Result<(), LpError> {
        self.price(true);
        self.run(true)
            .map_err(|_| LpError::Contract("phase one cannot be unbounded".into()))?;
        let w = self.width();
        let infeasibility: Rational = (0..self.rows)
            .filter(|&r| self.basis[r] >= self.structural)
            .fold(rational::zero(), |acc, r| acc + &self.t[r][w - 1]);
        if infeasibility.is_positive() {
            // dual infeasible: the free-variable primal is unbounded
            // (or infeasible, which nonnegative 0/1 rows rule out)
            return Err(LpError::Unbounded);
        }
        // drive zero-valued artificials out of the basis where possible
        for r in 0..self.rows {
            if self.basis[r] < self.structural {
                continue;
            }
            if let Some(c) = (0..self.structural).find(|&c| !self.t[r][c].is_zero()) {
                self.pivot(r, c);
            }
        }
        Ok(())
    }

    fn phase_two(&mut self) -> Result<(), LpError> {
        self.price(false);
        // an unbounded dual means the primal has no feasible point
        self.run(false).map_err(|_| LpError::Infeasible)
    }

    fn structural_values(&self) -> Vec<Rational> {
        let w = self.width();
        let mut z = vec![rational::zero(); self.structural];
        for r in 0..self.rows {
            if self.basis[r] < self.structural {
                z[self.basis[r]] = self.t[r][w - 1].clone();
            }
        }
        z
    }

    /// Simplex multipliers `c_B B^{-1}`, mapped back through row negations.
    fn multipliers(&self) -> Vec<Rational> {
        (0..self.rows)
            .map(|j| {
                let col = self.structural + j;
                let v = (0..self.rows)
                    .filter(|&r| self.basis[r] < self.structural)
                    .fold(rational::zero(), |acc, r| {
                        acc + &self.profit[self.basis[r]] * &self.t[r][col]
                    });
                if self.sign[j] {
                    -v
                } else {
                    v
                }
            })
            .collect()
    }

    fn objective_value(&self) -> Rational {
        let w = self.width();
        (0..self.rows)
            .filter(|&r| self.basis[r] < self.structural)
            .fold(rational::zero(), |acc, r| {
                acc + &self.profit[self.basis[r]] * &self.t[r][w - 1]
            })
    }
}
