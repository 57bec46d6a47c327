//! Reference computations that share no code with the library: entropies by
//! counting images, partitions by recursive insertion, LP optima by vertex
//! enumeration, and optimality by certificate checking.

#![allow(dead_code)]

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Joint entropy in bits of the terminals in `subset` (bit i = terminal i+1)
/// of a uniform linear source: log2 of the number of distinct observations.
pub fn count_entropy(rows: &[Vec<u128>], n: usize, subset: u32) -> usize {
    let selected: Vec<u128> = rows
        .iter()
        .enumerate()
        .filter(|(i, _)| subset >> i & 1 == 1)
        .flat_map(|(_, r)| r.iter().copied())
        .collect();
    let mut seen = HashSet::new();
    for y in 0u128..(1u128 << n) {
        let obs: Vec<bool> = selected
            .iter()
            .map(|r| (r & y).count_ones() % 2 == 1)
            .collect();
        seen.insert(obs);
    }
    let size = seen.len();
    assert!(size.is_power_of_two());
    size.trailing_zeros() as usize
}

/// `joint[S]` for every subset bitmask `S`.
pub fn joint_table(rows: &[Vec<u128>], n: usize) -> Vec<Q> {
    let m = rows.len();
    (0..1u32 << m)
        .map(|s| q(count_entropy(rows, n, s) as i64))
        .collect()
}

/// `h(B) = H(M) - H(B^c)`.
pub fn h_of(joint: &[Q], b: u32) -> Q {
    let full = joint.len() as u32 - 1;
    &joint[full as usize] - &joint[(full & !b) as usize]
}

pub fn terminals(bits: u32) -> Vec<usize> {
    (0..32)
        .filter(|i| bits >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

pub fn bits_of(ts: &[usize]) -> u32 {
    ts.iter().map(|t| 1u32 << (t - 1)).sum()
}

/// All set partitions of `{0..m-1}` as lists of block bitmasks.
pub fn all_partitions(m: usize) -> Vec<Vec<u32>> {
    fn go(i: usize, m: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == m {
            out.push(cur.clone());
            return;
        }
        for j in 0..cur.len() {
            cur[j] |= 1 << i;
            go(i + 1, m, cur, out);
            cur[j] &= !(1 << i);
        }
        cur.push(1 << i);
        go(i + 1, m, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(0, m, &mut Vec::new(), &mut out);
    out
}

pub fn admissible(blocks: &[u32], active: u32) -> bool {
    let k = blocks.len();
    k >= 2 && k <= active.count_ones() as usize && blocks.iter().all(|b| b & active != 0)
}

pub fn dependence(joint: &[Q], blocks: &[u32]) -> Q {
    let full = joint.len() - 1;
    let sum = blocks
        .iter()
        .fold(Q::zero(), |a, b| a + &joint[*b as usize]);
    (sum - &joint[full]) / q(blocks.len() as i64 - 1)
}

/// Minimum dependence over admissible partitions, with the minimizers as
/// sorted block lists.
pub fn min_dependence(joint: &[Q], m: usize, active: u32) -> (Q, Vec<Vec<u32>>) {
    let mut best: Option<Q> = None;
    let mut arg = Vec::new();
    for mut p in all_partitions(m)
        .into_iter()
        .filter(|p| admissible(p, active))
    {
        p.sort_by_key(|b| b.trailing_zeros());
        let v = dependence(joint, &p);
        match &best {
            Some(b) if v > *b => {}
            Some(b) if v == *b => arg.push(p),
            _ => {
                best = Some(v);
                arg = vec![p];
            }
        }
    }
    (best.expect("at least one admissible partition"), arg)
}

/// Rows `B` with `∅ ≠ B ⊊ M` and `A ⊄ B`, ascending.
pub fn family(m: usize, active: u32) -> Vec<u32> {
    let full = (1u32 << m) - 1;
    (1..full).filter(|b| b & active != active).collect()
}

/// Solves the square system `M x = r` exactly; `None` if singular.
pub fn solve_square(mat: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let n = mat.len();
    let mut a: Vec<Vec<Q>> = mat
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut row = row.clone();
            row.push(r.clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (c, v) in a[r].iter_mut().enumerate().skip(col) {
                    *v = &*v - &f * &pivot_row[c];
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n].clone()).collect())
}

fn combinations(l: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, l: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..l {
            cur.push(i);
            go(i + 1, l, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, l, k, &mut Vec::new(), &mut out);
    out
}

fn row_vec(b: u32, m: usize) -> Vec<Q> {
    (0..m)
        .map(|j| if b >> j & 1 == 1 { Q::one() } else { Q::zero() })
        .collect()
}

/// `min Σ x` over `Σ_{j∈B_i} x_j >= b_i`, by enumerating every basic point.
/// Assumes the rows span and the program is bounded.
pub fn brute_force_lp(m: usize, rows: &[u32], b: &[Q]) -> Option<(Q, Vec<Vec<Q>>)> {
    let mut best: Option<Q> = None;
    let mut vertices = Vec::new();
    for pick in combinations(rows.len(), m) {
        let mat: Vec<Vec<Q>> = pick.iter().map(|&i| row_vec(rows[i], m)).collect();
        let rhs: Vec<Q> = pick.iter().map(|&i| b[i].clone()).collect();
        let Some(x) = solve_square(&mat, &rhs) else {
            continue;
        };
        let feasible = rows.iter().zip(b).all(|(r, bi)| mask_sum(*r, &x) >= *bi);
        if !feasible {
            continue;
        }
        let obj = x.iter().fold(Q::zero(), |a, v| a + v);
        match &best {
            Some(v) if obj > *v => {}
            Some(v) if obj == *v => {
                if !vertices.contains(&x) {
                    vertices.push(x)
                }
            }
            _ => {
                best = Some(obj);
                vertices = vec![x];
            }
        }
    }
    best.map(|v| (v, vertices))
}

pub fn mask_sum(b: u32, x: &[Q]) -> Q {
    x.iter()
        .enumerate()
        .filter(|(j, _)| b >> j & 1 == 1)
        .fold(Q::zero(), |a, (_, v)| a + v)
}

/// Exact optimality certificate for `min Σ x` subject to the rows: primal
/// feasibility, dual feasibility (`y >= 0`, `yA = 1`), equal objectives and
/// complementary slackness. Returns the first failure.
pub fn certificate_failure(m: usize, rows: &[u32], b: &[Q], x: &[Q], y: &[Q]) -> Option<String> {
    if x.len() != m || y.len() != rows.len() {
        return Some("dimension mismatch".into());
    }
    for (r, bi) in rows.iter().zip(b) {
        if mask_sum(*r, x) < *bi {
            return Some(format!("row {:?} violated", terminals(*r)));
        }
    }
    if y.iter().any(|v| v.is_negative()) {
        return Some("negative dual entry".into());
    }
    for j in 0..m {
        let col = rows
            .iter()
            .zip(y)
            .filter(|(r, _)| *r >> j & 1 == 1)
            .fold(Q::zero(), |a, (_, v)| a + v);
        if !col.is_one() {
            return Some(format!("dual column {} sums to {col}", j + 1));
        }
    }
    let primal = x.iter().fold(Q::zero(), |a, v| a + v);
    let dual = y.iter().zip(b).fold(Q::zero(), |a, (v, bi)| a + v * bi);
    if primal != dual {
        return Some(format!("objectives differ: {primal} vs {dual}"));
    }
    for ((r, bi), v) in rows.iter().zip(b).zip(y) {
        if !v.is_zero() && mask_sum(*r, x) != *bi {
            return Some(format!("slackness fails on {:?}", terminals(*r)));
        }
    }
    None
}

/// Bell numbers `B_0..`.
pub fn bell(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    row[0]
}
