//! Abelian invariants by Smith normal form, and bounded Todd–Coxeter coset
//! enumeration (HLT strategy, no lookahead).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};

use crate::presentation::{GroupPresentation, Word};
use crate::{Error, Result};

/// `Z^free_rank × Z/d₁ × … × Z/dₖ` with `d₁ | d₂ | … | dₖ`, all `dᵢ > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianInvariants {
    pub torsion: Vec<BigUint>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    /// Product of the torsion coefficients.
    pub fn torsion_order(&self) -> BigUint {
        self.torsion.iter().product()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(alloc::string::String::from("Z")),
            r => parts.push(alloc::format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| alloc::format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" x "))
        }
    }
}

/// Relator-by-generator matrix of exponent sums.
pub fn relation_matrix(p: &GroupPresentation) -> Vec<Vec<BigInt>> {
    p.relators()
        .iter()
        .map(|r| (0..p.generators().len()).map(|g| BigInt::from(r.exponent_sum(g))).collect())
        .collect()
}

/// Diagonal of the Smith normal form (length `min(rows, cols)`, nonnegative,
/// each entry dividing the next nonzero one).
///
/// The pivot is always the entry of smallest nonzero absolute value in the
/// remaining block, ties broken by row-major position.
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>, cols: usize) -> Vec<BigInt> {
    let rows = a.len();
    let zero = BigInt::from(0);
    let mut diagonal = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != zero && pivot.is_none_or(|(pi, pj)| a[i][j].magnitude() < a[pi][pj].magnitude()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                diagonal.resize(rows.min(cols), zero.clone());
                return diagonal;
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t] != zero {
                    let factor = &a[i][t] / &p;
                    let (top, bottom) = a.split_at_mut(i);
                    for (x, pivot) in bottom[0][t..cols].iter_mut().zip(&top[t][t..cols]) {
                        *x -= &factor * pivot;
                    }
                    clean &= a[i][t] == zero;
                }
            }
            for j in t + 1..cols {
                if a[t][j] != zero {
                    let factor = &a[t][j] / &p;
                    for row in a.iter_mut().skip(t) {
                        let delta = &factor * &row[t];
                        row[j] -= delta;
                    }
                    clean &= a[t][j] == zero;
                }
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| &a[i][j] % &p != zero));
            match offender {
                Some(i) => {
                    let moved = a[i].clone();
                    for (dst, src) in a[t].iter_mut().zip(moved) {
                        *dst += src;
                    }
                }
                None => break,
            }
        }
        let d = core::mem::take(&mut a[t][t]);
        diagonal.push(if d.sign() == Sign::Minus { -d } else { d });
    }
    diagonal
}

pub fn abelianization(p: &GroupPresentation) -> AbelianInvariants {
    let cols = p.generators().len();
    let diagonal = smith_diagonal(relation_matrix(p), cols);
    let rank = diagonal.iter().filter(|d| d.sign() != Sign::NoSign).count();
    let torsion = diagonal
        .into_iter()
        .filter_map(|d| d.to_biguint())
        .filter(|d| *d > BigUint::from(1u32))
        .collect();
    AbelianInvariants { torsion, free_rank: cols - rank }
}

pub const DEFAULT_MAX_COSETS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetStatus {
    Complete { index: usize },
    /// More than `limit` cosets would have been defined.
    Exceeded { limit: usize },
}

/// Result of a coset enumeration. For a complete run, `table[c][2g]` is
/// `c·g` and `table[c][2g + 1]` is `c·g⁻¹`, with coset 0 the subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    pub status: CosetStatus,
    pub table: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn index(&self) -> Option<usize> {
        match self.status {
            CosetStatus::Complete { index } => Some(index),
            CosetStatus::Exceeded { .. } => None,
        }
    }
}

impl fmt::Display for CosetStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetStatus::Complete { index } => write!(f, "complete index={index}"),
            CosetStatus::Exceeded { limit } => write!(f, "exceeded limit={limit}"),
        }
    }
}

const NONE: usize = usize::MAX;

struct Enumeration {
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    columns: usize,
    limit: usize,
    queue: Vec<usize>,
}

struct LimitHit;

impl Enumeration {
    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> core::result::Result<(), LimitHit> {
        if self.table.len() >= self.limit {
            return Err(LimitHit);
        }
        let d = self.table.len();
        self.table.push(vec![NONE; self.columns]);
        self.parent.push(d);
        self.table[c][x] = d;
        self.table[d][x ^ 1] = c;
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = c;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (keep, kill) = (a.min(b), a.max(b));
            self.parent[kill] = keep;
            self.queue.push(kill);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let dead = self.queue[i];
            i += 1;
            for x in 0..self.columns {
                let d = self.table[dead][x];
                if d == NONE {
                    continue;
                }
                self.table[d][x ^ 1] = NONE;
                let (mu, nu) = (self.rep(dead), self.rep(d));
                if self.table[mu][x] != NONE {
                    let target = self.table[mu][x];
                    self.merge(nu, target);
                } else if self.table[nu][x ^ 1] != NONE {
                    let target = self.table[nu][x ^ 1];
                    self.merge(mu, target);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][x ^ 1] = mu;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> core::result::Result<(), LimitHit> {
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0isize, w.len() as isize - 1);
        loop {
            while i <= j && self.table[f][w[i as usize]] != NONE {
                f = self.table[f][w[i as usize]];
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.table[b][w[j as usize] ^ 1] != NONE {
                b = self.table[b][w[j as usize] ^ 1];
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let x = w[i as usize];
                self.table[f][x] = b;
                self.table[b][x ^ 1] = f;
                return Ok(());
            }
            self.define(f, w[i as usize])?;
        }
    }
}

fn columns_of(w: &Word) -> Vec<usize> {
    w.letters().map(|(g, e)| 2 * g + usize::from(e < 0)).collect()
}

/// Enumerates the cosets of the subgroup generated by `subgroup`, defining at
/// most `max_cosets` cosets in total.
pub fn coset_enumerate(p: &GroupPresentation, subgroup: &[Word], max_cosets: usize) -> Result<CosetTable> {
    let n = p.generators().len();
    if max_cosets == 0 {
        return Err(Error::PreconditionViolated("max_cosets must be at least 1".into()));
    }
    if subgroup.iter().any(|w| w.max_generator().is_some_and(|g| g >= n)) {
        return Err(Error::PreconditionViolated("subgroup word uses an undeclared generator".into()));
    }
    let relators: Vec<Vec<usize>> = p.relators().iter().map(columns_of).collect();
    let mut e = Enumeration {
        table: vec![vec![NONE; 2 * n]],
        parent: vec![0],
        columns: 2 * n,
        limit: max_cosets,
        queue: Vec::new(),
    };
    let exceeded = CosetTable { status: CosetStatus::Exceeded { limit: max_cosets }, table: Vec::new() };
    for w in subgroup {
        if e.scan_and_fill(0, &columns_of(w)).is_err() {
            return Ok(exceeded);
        }
    }
    let mut alpha = 0;
    while alpha < e.table.len() {
        for r in &relators {
            if !e.live(alpha) {
                break;
            }
            if e.scan_and_fill(alpha, r).is_err() {
                return Ok(exceeded);
            }
        }
        for x in 0..e.columns {
            if e.live(alpha) && e.table[alpha][x] == NONE && e.define(alpha, x).is_err() {
                return Ok(exceeded);
            }
        }
        alpha += 1;
    }
    let live: Vec<usize> = (0..e.table.len()).filter(|&c| e.live(c)).collect();
    let mut renumber = vec![NONE; e.table.len()];
    for (i, &c) in live.iter().enumerate() {
        renumber[c] = i;
    }
    let table = live
        .iter()
        .map(|&c| e.table[c].iter().map(|&d| renumber[d]).collect())
        .collect();
    Ok(CosetTable { status: CosetStatus::Complete { index: live.len() }, table })
}
