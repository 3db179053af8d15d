//! Coxeter matrices with `m_st ∈ {2, 3, ∞}`, gluing matrices over their
//! defining graphs, the Singer graph `W_M` assembled from cyclic Singer
//! polygons, and recovery of a gluing matrix from such a graph.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::diffset::{plane_modulus, verify_difference_set, BasedDifferenceSet, DiffSetReport};
use crate::polygon::{normalize_polygon, quotient_digon, quotient_triangle, suite_isomorphism};
use crate::polygon::{Gallery, SingerPolygon};
use crate::{Error, Result};

/// A Coxeter matrix stored as its defining graph: every declared edge has
/// `m ∈ {2, 3}`, every other pair of distinct vertices has `m = ∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterMatrix {
    vertices: Vec<String>,
    edges: Vec<(usize, usize, u32)>,
}

impl CoxeterMatrix {
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Result<Self> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(Error::InvalidCoxeter("no vertices".into()));
        }
        let distinct: BTreeSet<&String> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::InvalidCoxeter("repeated vertex name".into()));
        }
        Ok(CoxeterMatrix { vertices, edges: Vec::new() })
    }

    pub fn add_edge(&mut self, a: &str, b: &str, m: u32) -> Result<()> {
        let (i, j) = (self.require(a)?, self.require(b)?);
        if i == j {
            return Err(Error::InvalidCoxeter(format!("loop at {a}")));
        }
        if !(2..=3).contains(&m) {
            return Err(Error::InvalidCoxeter(format!("m({a},{b}) = {m} is not 2 or 3")));
        }
        if self.edge_index(i, j).is_some() {
            return Err(Error::InvalidCoxeter(format!("edge {a} {b} declared twice")));
        }
        self.edges.push((i, j, m));
        Ok(())
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.vertex_index(name)
            .ok_or_else(|| Error::InvalidCoxeter(format!("unknown vertex {name}")))
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// Edges `(a, b, m)` in declaration order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, u32)> {
        self.edges
            .iter()
            .map(|&(i, j, m)| (self.vertices[i].as_str(), self.vertices[j].as_str(), m))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        self.edges
            .iter()
            .position(|&(a, b, _)| (a, b) == (i, j) || (a, b) == (j, i))
    }

    /// `m_ab`: 1 on the diagonal, `None` for ∞ (or unknown names).
    pub fn m(&self, a: &str, b: &str) -> Option<u32> {
        let (i, j) = (self.vertex_index(a)?, self.vertex_index(b)?);
        if i == j {
            return Some(1);
        }
        self.edge_index(i, j).map(|e| self.edges[e].2)
    }

    fn neighbours(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b, _)| match v {
                _ if a == v => Some(b),
                _ if b == v => Some(a),
                _ => None,
            })
            .collect();
        out.sort_by(|&x, &y| self.vertices[x].cmp(&self.vertices[y]));
        out
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbours(v) {
                if !core::mem::replace(&mut seen[w], true) {
                    queue.push_back(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Fundamental cycles of a breadth-first spanning tree of the defining graph,
/// rooted at the smallest vertex name with neighbours visited by name.
///
/// Each cycle is closed (`first == last`), starts at its smallest vertex and
/// runs in the direction whose second vertex is smaller. Cycles are sorted.
pub fn cycle_basis(l: &CoxeterMatrix) -> Vec<Vec<String>> {
    let n = l.vertices.len();
    let root = (0..n).min_by(|&a, &b| l.vertices[a].cmp(&l.vertices[b])).unwrap();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree = BTreeSet::new();
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for w in l.neighbours(v) {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                tree.insert((v.min(w), v.max(w)));
                queue.push_back(w);
            }
        }
    }
    let mut cycles = Vec::new();
    for &(a, b, _) in &l.edges {
        if tree.contains(&(a.min(b), a.max(b))) || depth[a] == usize::MAX {
            continue;
        }
        // Path a → junction ← b, then close with the edge b–a.
        let (mut x, mut y) = (a, b);
        let (mut left, mut right) = (vec![x], vec![y]);
        while x != y {
            if depth[x] >= depth[y] {
                x = parent[x];
                left.push(x);
            } else {
                y = parent[y];
                right.push(y);
            }
        }
        right.pop();
        left.extend(right.into_iter().rev());
        cycles.push(normalize_cycle(l, &left));
    }
    cycles.sort();
    cycles
}

fn normalize_cycle(l: &CoxeterMatrix, open: &[usize]) -> Vec<String> {
    let names: Vec<&String> = open.iter().map(|&v| &l.vertices[v]).collect();
    let len = names.len();
    let start = (0..len).min_by(|&a, &b| names[a].cmp(names[b])).unwrap();
    let forward: Vec<&String> = (0..len).map(|i| names[(start + i) % len]).collect();
    let backward: Vec<&String> = (0..len).map(|i| names[(start + len - i) % len]).collect();
    let pick = if backward[1] < forward[1] { backward } else { forward };
    let mut cycle: Vec<String> = pick.into_iter().cloned().collect();
    cycle.push(cycle[0].clone());
    cycle
}

/// Column `n ↦ n(ab)` for the oriented edge `(a, b)`, `n = 1..=q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedEdge {
    pub from: String,
    pub to: String,
    pub column: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingMatrix {
    pub coxeter: CoxeterMatrix,
    pub q: u32,
    /// One column per finite edge; its (from, to) is the orientation.
    pub columns: Vec<GluedEdge>,
}

impl GluingMatrix {
    /// The column on edge `{a, b}` and whether it is oriented `(a, b)`.
    pub fn column(&self, a: &str, b: &str) -> Option<(&GluedEdge, bool)> {
        self.columns.iter().find_map(|c| {
            if c.from == a && c.to == b {
                Some((c, true))
            } else if c.from == b && c.to == a {
                Some((c, false))
            } else {
                None
            }
        })
    }

    /// Columns in the declaration order of the Coxeter edges. Panics on a
    /// matrix that does not validate.
    pub fn oriented_edges(&self) -> Vec<(&GluedEdge, u32)> {
        self.coxeter
            .edges()
            .map(|(a, b, m)| (self.column(a, b).expect("validated gluing").0, m))
            .collect()
    }
}

/// First problem found by [`validate_gluing`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GluingDefect {
    Disconnected,
    OrderTooSmall(u32),
    OrderTooLarge(u32),
    ColumnOffEdge { from: String, to: String },
    MissingColumn { a: String, b: String },
    DuplicateColumn { a: String, b: String },
    ColumnLength { from: String, to: String, expected: usize, found: usize },
    NotAPermutation { from: String, to: String },
    NotADifferenceSet { from: String, to: String, report: DiffSetReport },
}

impl fmt::Display for GluingDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GluingDefect::Disconnected => f.write_str("defining graph is disconnected"),
            GluingDefect::OrderTooSmall(q) => write!(f, "order {q} is below 2"),
            GluingDefect::OrderTooLarge(q) => write!(f, "order {q} is too large"),
            GluingDefect::ColumnOffEdge { from, to } => {
                write!(f, "column {from} {to} is not on an edge of the defining graph")
            }
            GluingDefect::MissingColumn { a, b } => write!(f, "edge {a} {b} has no column"),
            GluingDefect::DuplicateColumn { a, b } => write!(f, "edge {a} {b} has more than one column"),
            GluingDefect::ColumnLength { from, to, expected, found } => {
                write!(f, "column {from} {to} has {found} entries, expected {expected}")
            }
            GluingDefect::NotAPermutation { from, to } => {
                write!(f, "column {from} {to} is not a permutation of 1..q")
            }
            GluingDefect::NotADifferenceSet { from, to, report } => {
                write!(f, "column {from} {to} with 0 is not a difference set ({report})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingReport {
    pub defect: Option<GluingDefect>,
}

impl GluingReport {
    pub fn is_valid(&self) -> bool {
        self.defect.is_none()
    }
}

impl fmt::Display for GluingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.defect {
            None => f.write_str("valid"),
            Some(d) => write!(f, "invalid: {d}"),
        }
    }
}

/// δ(st): `q + 1` for digon edges, `q² + q + 1` for triangle edges.
pub fn edge_modulus(m: u32, q: u32) -> u32 {
    if m == 2 {
        q + 1
    } else {
        plane_modulus(q)
    }
}

/// Largest order accepted for gluing matrices.
pub const MAX_GLUING_ORDER: u32 = 64;

pub fn validate_gluing(g: &GluingMatrix) -> GluingReport {
    let defect = gluing_defect(g);
    GluingReport { defect }
}

fn gluing_defect(g: &GluingMatrix) -> Option<GluingDefect> {
    if !g.coxeter.is_connected() {
        return Some(GluingDefect::Disconnected);
    }
    if g.q < 2 {
        return Some(GluingDefect::OrderTooSmall(g.q));
    }
    if g.q > MAX_GLUING_ORDER {
        return Some(GluingDefect::OrderTooLarge(g.q));
    }
    for c in &g.columns {
        if g.coxeter.m(&c.from, &c.to).is_none_or(|m| m < 2) {
            return Some(GluingDefect::ColumnOffEdge { from: c.from.clone(), to: c.to.clone() });
        }
    }
    for (a, b, _) in g.coxeter.edges() {
        let count = g
            .columns
            .iter()
            .filter(|c| (c.from == a && c.to == b) || (c.from == b && c.to == a))
            .count();
        let (a, b) = (String::from(a), String::from(b));
        match count {
            0 => return Some(GluingDefect::MissingColumn { a, b }),
            1 => {}
            _ => return Some(GluingDefect::DuplicateColumn { a, b }),
        }
    }
    for c in &g.columns {
        let (from, to) = (c.from.clone(), c.to.clone());
        if c.column.len() != g.q as usize {
            return Some(GluingDefect::ColumnLength { from, to, expected: g.q as usize, found: c.column.len() });
        }
        match g.coxeter.m(&c.from, &c.to) {
            Some(2) => {
                let mut sorted = c.column.clone();
                sorted.sort_unstable();
                if !sorted.iter().copied().eq(1..=g.q) {
                    return Some(GluingDefect::NotAPermutation { from, to });
                }
            }
            _ => {
                let mut set = vec![0];
                set.extend(&c.column);
                let report = verify_difference_set(&set, plane_modulus(g.q));
                if !report.is_valid() {
                    return Some(GluingDefect::NotADifferenceSet { from, to, report });
                }
            }
        }
    }
    None
}

/// The rank-2 residue of `W_M` on one edge, with its defining suites on the
/// chambers `0..=q`. Labels `s` and `t` of the suites stand for `from` and `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylResidue {
    pub from: String,
    pub to: String,
    pub m: u32,
    /// `Ω(x)` for `x = 0..=q` when the data was built from a gluing matrix.
    pub omega: Option<Vec<u32>>,
    pub suites: Vec<Gallery>,
}

/// A Singer graph of type `M`: chambers `Z/kZ`, one panel per label holding
/// every chamber, and one residue per edge of the defining graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylGraphData {
    pub q: u32,
    pub coxeter: CoxeterMatrix,
    pub residues: Vec<WeylResidue>,
}

impl WeylGraphData {
    pub fn chambers(&self) -> Vec<u32> {
        (0..=self.q).collect()
    }

    pub fn suite_count(&self) -> usize {
        self.residues.iter().map(|r| r.suites.len()).sum()
    }

    /// The oriented edges the residues are stored under.
    pub fn orientation(&self) -> Vec<(String, String)> {
        self.residues.iter().map(|r| (r.from.clone(), r.to.clone())).collect()
    }
}

/// Pulls the defining suites of `k\D(q)` or `δ\T(𝒟)` back through
/// `Ω_st : 0 ↦ 0, n ↦ n(st)`.
pub fn build_weyl_graph(g: &GluingMatrix) -> Result<WeylGraphData> {
    if let Some(defect) = validate_gluing(g).defect {
        return Err(Error::InvalidGluing(defect));
    }
    let residues = g
        .oriented_edges()
        .into_iter()
        .map(|(edge, m)| {
            let mut omega = vec![0];
            omega.extend(&edge.column);
            let target = if m == 2 {
                quotient_digon(g.q)?
            } else {
                quotient_triangle(&BasedDifferenceSet::new(&omega, plane_modulus(g.q))?)
            };
            let inverse: BTreeMap<u32, u32> = omega.iter().enumerate().map(|(x, &o)| (o, x as u32)).collect();
            let suites = target.suites().iter().map(|s| s.map_chambers(|c| inverse[&c])).collect();
            Ok(WeylResidue { from: edge.from.clone(), to: edge.to.clone(), m, omega: Some(omega), suites })
        })
        .collect::<Result<_>>()?;
    Ok(WeylGraphData { q: g.q, coxeter: g.coxeter.clone(), residues })
}

/// The residue on edge `{a, b}`, with `s` standing for `a`. Suites stored
/// under the opposite orientation are read backwards with labels swapped.
pub fn residue(w: &WeylGraphData, a: &str, b: &str) -> Result<SingerPolygon> {
    let (r, forward) = w
        .residues
        .iter()
        .find_map(|r| {
            if r.from == a && r.to == b {
                Some((r, true))
            } else if r.from == b && r.to == a {
                Some((r, false))
            } else {
                None
            }
        })
        .ok_or_else(|| Error::NoSuchEdge(a.into(), b.into()))?;
    let suites = if forward {
        r.suites.clone()
    } else {
        r.suites.iter().map(Gallery::reversed_swapped).collect()
    };
    SingerPolygon::residue(r.m, w.q, w.chambers(), suites)
}

/// Reads a gluing matrix off `w` for the given orientation: each residue is
/// normalized at chamber 0 and the chamber bijection restricted to `1..=q`
/// becomes the column.
pub fn extract_gluing_matrix(w: &WeylGraphData, orientation: &[(String, String)]) -> Result<GluingMatrix> {
    let mut columns = Vec::with_capacity(orientation.len());
    for (a, b) in orientation {
        let polygon = residue(w, a, b)?;
        let normalized = normalize_polygon(&polygon, 0).map_err(|e| match e {
            Error::NotSingerCyclic(msg) => Error::NotSingerCyclic(format!("residue {a} {b}: {msg}")),
            other => other,
        })?;
        let column = (1..=w.q)
            .map(|n| normalized.image(n).expect("normalization is total"))
            .collect();
        columns.push(GluedEdge { from: a.clone(), to: b.clone(), column });
    }
    let g = GluingMatrix { coxeter: w.coxeter.clone(), q: w.q, columns };
    match validate_gluing(&g).defect {
        None => Ok(g),
        Some(defect) => Err(Error::InvalidGluing(defect)),
    }
}

/// Whether every residue of `a` is isomorphic to the residue of `b` on the
/// same edge by a suite-preserving chamber bijection fixing 0.
pub fn edgewise_isomorphic(a: &WeylGraphData, b: &WeylGraphData) -> Result<bool> {
    if a.q != b.q || a.coxeter.edge_count() != b.coxeter.edge_count() {
        return Ok(false);
    }
    for r in &a.residues {
        let left = residue(a, &r.from, &r.to)?;
        let right = residue(b, &r.from, &r.to)?;
        if left.gonality() != right.gonality() || suite_isomorphism(&left, &right).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
