//! Generalized digons and triangles as explicit chamber systems, their
//! panel-regular cyclic actions, and the cyclic Singer quotients
//! `k\D(q)` and `δ\T(D)` described by flowers and defining suites.
//!
//! Chambers of a [`ChamberSystem`] are dense indices with a coordinate
//! dictionary `(x, y)`: the s-panel of a chamber is indexed by `x` and its
//! t-panel by `y`. Chambers of a [`SingerPolygon`] are residues (elements of
//! `Z/kZ` for digons, of the based difference set for triangles).

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::diffset::{based_class_members, enumerate_difference_sets, singer_difference_set};
use crate::diffset::{BasedDifferenceSet, DifferenceSet, MAX_ENUMERATION_ORDER};
use crate::{modulo, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    S,
    T,
}

impl Label {
    pub const BOTH: [Label; 2] = [Label::S, Label::T];

    pub fn index(self) -> usize {
        match self {
            Label::S => 0,
            Label::T => 1,
        }
    }

    pub fn other(self) -> Label {
        match self {
            Label::S => Label::T,
            Label::T => Label::S,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::S => "s",
            Label::T => "t",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realization {
    /// `Z/k₁Z × Z/k₂Z`, `kᵢ = qᵢ + 1`.
    Digon { q1: u32, q2: u32 },
    /// `{(x, x + d)}` over `Z/δZ`.
    Triangle(BasedDifferenceSet),
}

/// A rank-2 chamber system with labels `{s, t}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberSystem {
    realization: Realization,
    coords: Vec<(u32, u32)>,
    index: BTreeMap<(u32, u32), usize>,
    panel_of: [Vec<usize>; 2],
    panels: [Vec<Vec<usize>>; 2],
}

impl ChamberSystem {
    fn from_coords(realization: Realization, coords: Vec<(u32, u32)>, sizes: (u32, u32)) -> Self {
        let mut panels = [vec![Vec::new(); sizes.0 as usize], vec![Vec::new(); sizes.1 as usize]];
        let mut panel_of = [Vec::with_capacity(coords.len()), Vec::with_capacity(coords.len())];
        for (c, &(x, y)) in coords.iter().enumerate() {
            panels[0][x as usize].push(c);
            panels[1][y as usize].push(c);
            panel_of[0].push(x as usize);
            panel_of[1].push(y as usize);
        }
        let index = coords.iter().enumerate().map(|(c, &xy)| (xy, c)).collect();
        ChamberSystem { realization, coords, index, panel_of, panels }
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    pub fn chamber_count(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self, chamber: usize) -> (u32, u32) {
        self.coords[chamber]
    }

    pub fn chamber_at(&self, x: u32, y: u32) -> Option<usize> {
        self.index.get(&(x, y)).copied()
    }

    pub fn panel_of(&self, label: Label, chamber: usize) -> usize {
        self.panel_of[label.index()][chamber]
    }

    pub fn panel(&self, label: Label, panel: usize) -> &[usize] {
        &self.panels[label.index()][panel]
    }

    pub fn panel_count(&self, label: Label) -> usize {
        self.panels[label.index()].len()
    }

    /// Whether a chamber permutation maps every panel onto a panel of the same label.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if !is_permutation(perm, self.chamber_count()) {
            return false;
        }
        Label::BOTH.iter().all(|&label| {
            self.panels[label.index()].iter().all(|panel| {
                let target = self.panel_of(label, perm[panel[0]]);
                panel.iter().all(|&c| self.panel_of(label, perm[c]) == target)
            })
        })
    }

    /// Orbit label of a chamber under the standard action: `y - x` reduced
    /// modulo `k` (digons with `q₁ = q₂`) or `δ` (triangles).
    pub fn quotient_label(&self, chamber: usize) -> Option<u32> {
        let modulus = self.standard_modulus()?;
        let (x, y) = self.coords[chamber];
        Some(modulo(i64::from(y) - i64::from(x), modulus))
    }

    fn standard_modulus(&self) -> Option<u32> {
        match &self.realization {
            Realization::Digon { q1, q2 } if q1 == q2 => Some(q1 + 1),
            Realization::Digon { .. } => None,
            Realization::Triangle(d) => Some(d.delta()),
        }
    }
}

/// `Z/k₁Z × Z/k₂Z` with `(x, y) ∼_s (x', y)` … rows and columns of a grid.
pub fn build_digon(q1: u32, q2: u32) -> Result<ChamberSystem> {
    if q1 == 0 || q2 == 0 {
        return Err(Error::PreconditionViolated("digon orders must be at least 1".into()));
    }
    let (k1, k2) = (q1 + 1, q2 + 1);
    let coords = (0..k1).flat_map(|x| (0..k2).map(move |y| (x, y))).collect();
    Ok(ChamberSystem::from_coords(Realization::Digon { q1, q2 }, coords, (k1, k2)))
}

/// Chambers `(x, x + d)` for `x ∈ Z/δZ`, `d ∈ D`.
pub fn build_triangle(d: &BasedDifferenceSet) -> ChamberSystem {
    let delta = d.delta();
    let coords = (0..delta)
        .flat_map(|x| d.elements().iter().map(move |&e| (x, (x + e) % delta)))
        .collect();
    ChamberSystem::from_coords(Realization::Triangle(d.clone()), coords, (delta, delta))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolygonDefect {
    NotBipartite,
    Disconnected,
    Diameter { expected: u32, found: u32 },
    /// `found` is `None` for an acyclic incidence graph.
    Girth { expected: u32, found: Option<u32> },
    Thin { label: Label, panel: usize, size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonReport {
    pub m: u32,
    pub bipartite: bool,
    pub diameter: Option<u32>,
    pub girth: Option<u32>,
    pub min_thickness: usize,
    pub defect: Option<PolygonDefect>,
}

impl PolygonReport {
    pub fn passed(&self) -> bool {
        self.defect.is_none()
    }
}

impl fmt::Display for PolygonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<u32>| v.map_or_else(|| "inf".to_string(), |v| v.to_string());
        write!(
            f,
            "m={} bipartite={} diameter={} girth={} thickness={} : ",
            self.m,
            self.bipartite,
            show(self.diameter),
            show(self.girth),
            self.min_thickness
        )?;
        match self.defect {
            None => f.write_str("pass"),
            Some(PolygonDefect::NotBipartite) => f.write_str("fail (not bipartite)"),
            Some(PolygonDefect::Disconnected) => f.write_str("fail (disconnected)"),
            Some(PolygonDefect::Diameter { expected, found }) => {
                write!(f, "fail (diameter {found} != {expected})")
            }
            Some(PolygonDefect::Girth { expected, found }) => {
                write!(f, "fail (girth {} != {expected})", show(found))
            }
            Some(PolygonDefect::Thin { label, panel, size }) => {
                write!(f, "fail ({label}-panel {panel} has {size} chambers)")
            }
        }
    }
}

/// Checks the generalized m-gon axioms on the panel incidence graph:
/// bipartite, diameter `m`, girth `2m`, every panel with at least 2 chambers.
pub fn verify_generalized_polygon(c: &ChamberSystem, m: u32) -> PolygonReport {
    let ns = c.panel_count(Label::S);
    let n = ns + c.panel_count(Label::T);
    // Edge e joins s-panel and t-panel of chamber e.
    let ends: Vec<(usize, usize)> = (0..c.chamber_count())
        .map(|ch| (c.panel_of(Label::S, ch), ns + c.panel_of(Label::T, ch)))
        .collect();
    let mut adj = vec![Vec::new(); n];
    for (e, &(u, v)) in ends.iter().enumerate() {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }

    let mut bipartite = true;
    let mut colour = vec![None; n];
    for root in 0..n {
        if colour[root].is_some() {
            continue;
        }
        colour[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].unwrap();
            for &(v, _) in &adj[u] {
                match colour[v] {
                    None => {
                        colour[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => bipartite = false,
                    _ => {}
                }
            }
        }
    }

    let mut diameter = Some(0u32);
    let mut girth: Option<u32> = None;
    for root in 0..n {
        let mut dist = vec![u32::MAX; n];
        let mut via = vec![usize::MAX; n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(v, e) in &adj[u] {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    via[v] = e;
                    queue.push_back(v);
                } else if e != via[u] {
                    let len = dist[u] + dist[v] + 1;
                    girth = Some(girth.map_or(len, |g| g.min(len)));
                }
            }
        }
        let far = dist.iter().copied().max().unwrap_or(0);
        diameter = match diameter {
            Some(d) if far != u32::MAX => Some(d.max(far)),
            _ => None,
        };
    }

    let mut thin = None;
    let mut min_thickness = usize::MAX;
    for label in Label::BOTH {
        for panel in 0..c.panel_count(label) {
            let size = c.panel(label, panel).len();
            min_thickness = min_thickness.min(size);
            if size < 2 && thin.is_none() {
                thin = Some(PolygonDefect::Thin { label, panel, size });
            }
        }
    }
    if min_thickness == usize::MAX {
        min_thickness = 0;
    }

    let defect = if !bipartite {
        Some(PolygonDefect::NotBipartite)
    } else if diameter.is_none() {
        Some(PolygonDefect::Disconnected)
    } else if diameter != Some(m) {
        Some(PolygonDefect::Diameter { expected: m, found: diameter.unwrap() })
    } else if girth != Some(2 * m) {
        Some(PolygonDefect::Girth { expected: 2 * m, found: girth })
    } else {
        thin
    };
    PolygonReport { m, bipartite, diameter, girth, min_thickness, defect }
}

fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    perm.iter().all(|&i| i < n && !core::mem::replace(&mut seen[i], true))
}

/// A cyclic group of known order acting through a generating permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicAction {
    order: u32,
    generator: Vec<usize>,
}

impl CyclicAction {
    /// Requires `generator` to be a permutation with `generator^order = id`.
    pub fn new(order: u32, generator: Vec<usize>) -> Result<Self> {
        if order == 0 || !is_permutation(&generator, generator.len()) {
            return Err(Error::PreconditionViolated("generator is not a permutation".into()));
        }
        let action = CyclicAction { order, generator };
        let cycles_back = |c: usize| (0..order).fold(c, |x, _| action.generator[x]) == c;
        if !(0..action.generator.len()).all(cycles_back) {
            return Err(Error::PreconditionViolated(format!("generator^{order} is not the identity")));
        }
        Ok(action)
    }

    pub fn identity(chambers: usize) -> Self {
        CyclicAction { order: 1, generator: (0..chambers).collect() }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn generator(&self) -> &[usize] {
        &self.generator
    }

    /// `g^power · chamber`.
    pub fn apply(&self, mut chamber: usize, power: u32) -> usize {
        for _ in 0..power % self.order {
            chamber = self.generator[chamber];
        }
        chamber
    }
}

/// `(x, y) ↦ (x + 1, y + 1)` on `D(q, q)` (order `k`) or `T(D)` (order `δ`).
pub fn standard_action(c: &ChamberSystem) -> Result<CyclicAction> {
    let modulus = c.standard_modulus().ok_or(Error::UnsupportedChamberSystem)?;
    let generator = c
        .coords
        .iter()
        .map(|&(x, y)| c.chamber_at((x + 1) % modulus, (y + 1) % modulus).expect("translation-invariant"))
        .collect();
    CyclicAction::new(modulus, generator)
}

/// True iff the action permutes the s-panels and the t-panels freely and
/// transitively.
pub fn verify_panel_regular(c: &ChamberSystem, a: &CyclicAction) -> bool {
    if a.generator.len() != c.chamber_count() || !c.is_automorphism(&a.generator) {
        return false;
    }
    Label::BOTH.iter().all(|&label| {
        let count = c.panel_count(label);
        let induced: Vec<usize> = (0..count)
            .map(|p| c.panel_of(label, a.generator[c.panel(label, p)[0]]))
            .collect();
        let mut orbit = 1usize;
        let mut p = induced[0];
        while p != 0 && orbit <= count {
            p = induced[p];
            orbit += 1;
        }
        orbit == count && orbit == a.order as usize
    })
}

/// A gallery `start →σ₁ c₁ →σ₂ c₂ …`, stored unreduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gallery {
    start: u32,
    steps: Vec<(Label, u32)>,
}

impl Gallery {
    pub fn new(start: u32, steps: Vec<(Label, u32)>) -> Self {
        Gallery { start, steps }
    }

    /// Alternating labels beginning with `first`.
    pub fn alternating(first: Label, chambers: &[u32]) -> Self {
        let mut label = first;
        let steps = chambers[1..]
            .iter()
            .map(|&c| {
                let step = (label, c);
                label = label.other();
                step
            })
            .collect();
        Gallery { start: chambers[0], steps }
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn end(&self) -> u32 {
        self.steps.last().map_or(self.start, |&(_, c)| c)
    }

    pub fn steps(&self) -> &[(Label, u32)] {
        &self.steps
    }

    pub fn steps_mut(&mut self) -> &mut Vec<(Label, u32)> {
        &mut self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.end() == self.start
    }

    pub fn chambers(&self) -> Vec<u32> {
        core::iter::once(self.start).chain(self.steps.iter().map(|&(_, c)| c)).collect()
    }

    /// Labels alternate starting with `s`, and no step stays put.
    pub fn is_alternating_from_s(&self) -> bool {
        let mut expected = Label::S;
        let mut prev = self.start;
        for &(label, c) in &self.steps {
            if label != expected || c == prev {
                return false;
            }
            expected = expected.other();
            prev = c;
        }
        true
    }

    pub fn map_chambers(&self, f: impl Fn(u32) -> u32) -> Gallery {
        Gallery { start: f(self.start), steps: self.steps.iter().map(|&(l, c)| (l, f(c))).collect() }
    }

    /// The same closed walk read backwards with `s` and `t` exchanged.
    pub fn reversed_swapped(&self) -> Gallery {
        let chambers = self.chambers();
        let steps = self
            .steps
            .iter()
            .rev()
            .zip(chambers.iter().rev().skip(1))
            .map(|(&(l, _), &c)| (l.other(), c))
            .collect();
        Gallery { start: self.end(), steps }
    }
}

impl fmt::Display for Gallery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for (label, c) in &self.steps {
            write!(f, " {label} {c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolygonForm {
    /// Chambers `Z/kZ` with the flowers of `k\D(q)`.
    Digon,
    /// Chambers `D` with the flowers of `δ\T(D)`.
    Triangle(BasedDifferenceSet),
    /// Only the defining suites at the base chamber are known.
    Residue,
}

/// A cyclic Singer polygon given by its chambers and defining suites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingerPolygon {
    m: u32,
    q: u32,
    form: PolygonForm,
    chambers: Vec<u32>,
    base: u32,
    suites: Vec<Gallery>,
}

/// Two half-galleries from the same base with the same endpoint, one starting
/// with `s` and one with `t`, which are homotopic in the polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Petal {
    pub st: Gallery,
    pub ts: Gallery,
}

impl Petal {
    /// The closed gallery `st` followed by `ts` reversed.
    pub fn suite(&self) -> Gallery {
        let mut chambers = self.st.chambers();
        chambers.extend(self.ts.chambers().iter().rev().skip(1));
        Gallery::alternating(Label::S, &chambers)
    }
}

impl SingerPolygon {
    /// A polygon known only through its defining suites at chamber 0.
    pub fn residue(m: u32, q: u32, chambers: Vec<u32>, suites: Vec<Gallery>) -> Result<Self> {
        if !(2..=3).contains(&m) {
            return Err(Error::PreconditionViolated(format!("gonality {m} is not 2 or 3")));
        }
        let mut chambers = chambers;
        chambers.sort_unstable();
        chambers.dedup();
        if chambers.first() != Some(&0) {
            return Err(Error::ChamberNotFound(0));
        }
        Ok(SingerPolygon { m, q, form: PolygonForm::Residue, chambers, base: 0, suites })
    }

    pub fn gonality(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn form(&self) -> &PolygonForm {
        &self.form
    }

    pub fn chambers(&self) -> &[u32] {
        &self.chambers
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn suites(&self) -> &[Gallery] {
        &self.suites
    }

    /// Mutable access to the suites, e.g. for mutation tests.
    pub fn suites_mut(&mut self) -> &mut Vec<Gallery> {
        &mut self.suites
    }

    pub fn contains(&self, chamber: u32) -> bool {
        self.chambers.binary_search(&chamber).is_ok()
    }

    /// Modulus of the chamber arithmetic for realized forms.
    fn modulus(&self) -> Option<u32> {
        match &self.form {
            PolygonForm::Digon => Some(self.q + 1),
            PolygonForm::Triangle(d) => Some(d.delta()),
            PolygonForm::Residue => None,
        }
    }

    /// Every `t`-first half-gallery from `base` ending where `st` ends that
    /// satisfies the flower equation of a realized polygon.
    pub fn petal_partners(&self, st: &[u32]) -> Result<Vec<Vec<u32>>> {
        let modulus = self
            .modulus()
            .ok_or_else(|| Error::PreconditionViolated("flower equations need a realized polygon".into()))?;
        if st.len() != self.m as usize + 1 || st.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::PreconditionViolated("malformed half-gallery".into()));
        }
        if let Some(&bad) = st.iter().find(|&&c| !self.contains(c)) {
            return Err(Error::ChamberNotFound(bad));
        }
        let v = |c: u32| i64::from(c);
        let mut out = Vec::new();
        match self.m {
            2 => {
                // [x s y t z] ∼ [x t y' s z] with y' = x − y + z.
                let (x, y, z) = (st[0], st[1], st[2]);
                for &y2 in &self.chambers {
                    if y2 != x && y2 != z && y2 == modulo(v(x) - v(y) + v(z), modulus) {
                        out.push(vec![x, y2, z]);
                    }
                }
            }
            _ => {
                // [C s x t y s z] ∼ [C t x' s y' t z] with x' − y' = C − x + y − z.
                let (c, x, y, z) = (st[0], st[1], st[2], st[3]);
                let target = modulo(v(c) - v(x) + v(y) - v(z), modulus);
                for &x2 in &self.chambers {
                    for &y2 in &self.chambers {
                        let ok = x2 != c && y2 != x2 && z != y2;
                        if ok && modulo(v(x2) - v(y2), modulus) == target {
                            out.push(vec![c, x2, y2, z]);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Whether `g` is a closed alternating gallery of length `2m` whose halves
    /// form a petal of the flower at its start.
    pub fn is_flower_cycle(&self, g: &Gallery) -> bool {
        let m = self.m as usize;
        if g.len() != 2 * m || !g.is_closed() || !g.is_alternating_from_s() {
            return false;
        }
        let chambers = g.chambers();
        let st = &chambers[..=m];
        let ts: Vec<u32> = chambers[m..].iter().rev().copied().collect();
        matches!(self.petal_partners(st), Ok(partners) if partners == [ts])
    }
}

impl fmt::Display for SingerPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "polygon m={} q={}", self.m, self.q)?;
        for suite in &self.suites {
            writeln!(f, "suite: {suite}")?;
        }
        Ok(())
    }
}

/// The petals of the flower based at `base`, one per `s`-first half-gallery,
/// in lexicographic order of that half. Each partner is checked to be unique.
pub fn flower(p: &SingerPolygon, base: u32) -> Result<Vec<Petal>> {
    if !p.contains(base) {
        return Err(Error::ChamberNotFound(base));
    }
    if p.form == PolygonForm::Residue {
        if base != p.base {
            return Err(Error::PreconditionViolated(
                "a residue only knows the flower at its base chamber".into(),
            ));
        }
        let m = p.m as usize;
        return Ok(p
            .suites
            .iter()
            .map(|s| {
                let chambers = s.chambers();
                let ts: Vec<u32> = chambers[m..].iter().rev().copied().collect();
                Petal {
                    st: Gallery::alternating(Label::S, &chambers[..=m]),
                    ts: Gallery::alternating(Label::T, &ts),
                }
            })
            .collect());
    }
    let mut halves: Vec<Vec<u32>> = vec![vec![base]];
    for _ in 0..p.m {
        halves = halves
            .into_iter()
            .flat_map(|h| {
                let last = *h.last().unwrap();
                p.chambers.iter().filter(move |&&c| c != last).map(move |&c| {
                    let mut next = h.clone();
                    next.push(c);
                    next
                })
            })
            .collect();
    }
    halves
        .into_iter()
        .map(|st| {
            let partners = p.petal_partners(&st)?;
            match partners.as_slice() {
                [ts] => Ok(Petal {
                    st: Gallery::alternating(Label::S, &st),
                    ts: Gallery::alternating(Label::T, ts),
                }),
                _ => Err(Error::NotSingerCyclic(format!(
                    "{} partners for half-gallery {st:?}",
                    partners.len()
                ))),
            }
        })
        .collect()
}

fn suites_from_flower(mut p: SingerPolygon) -> Result<SingerPolygon> {
    p.suites = flower(&p, 0)?.iter().map(Petal::suite).collect();
    Ok(p)
}

/// `k\D(q)` on chambers `Z/kZ` with the `q²` suites `[0 s y t z s (z−y) t 0]`.
pub fn quotient_digon(q: u32) -> Result<SingerPolygon> {
    if q == 0 {
        return Err(Error::PreconditionViolated("digon order must be at least 1".into()));
    }
    suites_from_flower(SingerPolygon {
        m: 2,
        q,
        form: PolygonForm::Digon,
        chambers: (0..=q).collect(),
        base: 0,
        suites: Vec::new(),
    })
}

/// `δ\T(D)` on chambers `D` with the `q³` suites
/// `[0 s x t y s z t y' s x' t 0]`, `y' − x' = x − y + z`.
pub fn quotient_triangle(d: &BasedDifferenceSet) -> SingerPolygon {
    suites_from_flower(SingerPolygon {
        m: 3,
        q: d.order(),
        form: PolygonForm::Triangle(d.clone()),
        chambers: d.elements().to_vec(),
        base: 0,
        suites: Vec::new(),
    })
    .expect("difference sets give unique flower partners")
}

/// Checks that `quotient` is the quotient of `total` by `a`: orbits match the
/// quotient chambers panel by panel, and every defining suite lifts to a
/// closed gallery from every chamber over the base.
pub fn verify_covering(total: &ChamberSystem, a: &CyclicAction, quotient: &SingerPolygon) -> Result<bool> {
    if !verify_panel_regular(total, a) {
        return Err(Error::PreconditionViolated("action is not panel-regular".into()));
    }
    if quotient.chambers.len() * a.order as usize != total.chamber_count() {
        return Err(Error::PreconditionViolated("chamber counts do not match the action order".into()));
    }
    let labels: Vec<u32> = match (0..total.chamber_count()).map(|c| total.quotient_label(c)).collect() {
        Some(labels) => labels,
        None => return Err(Error::PreconditionViolated("no orbit labelling for this chamber system".into())),
    };

    // (i) orbit map: constant on orbits, one orbit per quotient chamber, and
    // bijective on every panel.
    if (0..total.chamber_count()).any(|c| labels[a.generator[c]] != labels[c]) {
        return Ok(false);
    }
    let mut orbit_of = vec![usize::MAX; total.chamber_count()];
    let mut orbit_labels = Vec::new();
    for c in 0..total.chamber_count() {
        if orbit_of[c] == usize::MAX {
            let id = orbit_labels.len();
            let mut x = c;
            while orbit_of[x] == usize::MAX {
                orbit_of[x] = id;
                x = a.generator[x];
            }
            orbit_labels.push(labels[c]);
        }
    }
    let distinct: BTreeSet<u32> = orbit_labels.iter().copied().collect();
    if orbit_labels.len() != quotient.chambers.len() || !distinct.iter().copied().eq(quotient.chambers.iter().copied()) {
        return Ok(false);
    }
    for label in Label::BOTH {
        for p in 0..total.panel_count(label) {
            let mut seen: Vec<u32> = total.panel(label, p).iter().map(|&c| labels[c]).collect();
            seen.sort_unstable();
            if seen != quotient.chambers {
                return Ok(false);
            }
        }
    }

    // (ii) suite lifting.
    let fiber: Vec<usize> = (0..total.chamber_count()).filter(|&c| labels[c] == quotient.base).collect();
    for suite in &quotient.suites {
        if suite.start != quotient.base {
            return Ok(false);
        }
        for &start in &fiber {
            let mut here = start;
            for &(label, target) in &suite.steps {
                let mut next = total
                    .panel(label, total.panel_of(label, here))
                    .iter()
                    .copied()
                    .filter(|&c| c != here && labels[c] == target);
                match (next.next(), next.next()) {
                    (Some(c), None) => here = c,
                    _ => return Ok(false),
                }
            }
            if here != start {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `{ d : P ∩ g^d·L ≠ ∅ }` for an s-panel `P` and a t-panel `L` of a
/// generalized triangle with a panel-regular cyclic action.
pub fn difference_set_from_action(
    t: &ChamberSystem,
    a: &CyclicAction,
    s_panel: usize,
    t_panel: usize,
) -> Result<DifferenceSet> {
    if !verify_generalized_polygon(t, 3).passed() {
        return Err(Error::PreconditionViolated("not a generalized triangle".into()));
    }
    if !verify_panel_regular(t, a) {
        return Err(Error::PreconditionViolated("action is not panel-regular".into()));
    }
    if s_panel >= t.panel_count(Label::S) || t_panel >= t.panel_count(Label::T) {
        return Err(Error::PreconditionViolated("panel index out of range".into()));
    }
    let witness = t.panel(Label::T, t_panel)[0];
    let elements: Vec<u32> = (0..a.order)
        .filter(|&d| {
            let moved = t.panel_of(Label::T, a.apply(witness, d));
            t.panel(Label::S, s_panel).iter().any(|&c| t.panel_of(Label::T, c) == moved)
        })
        .collect();
    DifferenceSet::new(&elements, a.order)
}

/// The rotation `x ↦ x + r` of `k\D(q)`, as a map indexed by chamber.
/// Fails if some defining suite is not carried to a flower cycle.
pub fn rotation_automorphism(p: &SingerPolygon, r: u32) -> Result<Vec<u32>> {
    if p.form != PolygonForm::Digon {
        return Err(Error::PreconditionViolated("rotations are defined on k\\D(q)".into()));
    }
    let k = p.q + 1;
    let map: Vec<u32> = (0..k).map(|x| (x + r) % k).collect();
    for suite in &p.suites {
        let image = suite.map_chambers(|c| map[c as usize]);
        if !p.is_flower_cycle(&image) {
            return Err(Error::NotSingerCyclic(format!("rotation by {r} breaks suite {suite}")));
        }
    }
    Ok(map)
}

/// An isomorphism onto a canonical polygon sending a chosen chamber to 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub polygon: SingerPolygon,
    /// `(source chamber, target chamber)` sorted by source.
    pub map: Vec<(u32, u32)>,
}

impl Normalization {
    pub fn image(&self, chamber: u32) -> Option<u32> {
        self.map.iter().find(|&&(c, _)| c == chamber).map(|&(_, t)| t)
    }
}

/// Finds `k\D(q)` or `δ\T(D)` (D based) isomorphic to `p` with `c ↦ 0`.
///
/// Realized digons are rotated; realized triangles try every `d ↦ r(d − c)`
/// and keep the lexicographically smallest target set. Residues are matched
/// against every based difference set of order `q` by a suite-preserving
/// chamber bijection, and only `c = base` is supported for them.
pub fn normalize_polygon(p: &SingerPolygon, c: u32) -> Result<Normalization> {
    if !p.contains(c) {
        return Err(Error::ChamberNotFound(c));
    }
    let candidate = match &p.form {
        PolygonForm::Digon => {
            let k = p.q + 1;
            let map = p.chambers.iter().map(|&x| (x, (x + k - c) % k)).collect();
            Normalization { polygon: quotient_digon(p.q)?, map }
        }
        PolygonForm::Triangle(d) => {
            let delta = d.delta();
            let shifted = |r: u32, x: u32| ((u64::from(r) * u64::from(x + delta - c)) % u64::from(delta)) as u32;
            let (r, target) = (1..delta)
                .filter(|&r| num_integer::Integer::gcd(&r, &delta) == 1)
                .map(|r| {
                    let mut elements: Vec<u32> = d.elements().iter().map(|&x| shifted(r, x)).collect();
                    elements.sort_unstable();
                    (r, elements)
                })
                .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
                .expect("1 is a unit");
            let target = BasedDifferenceSet::new(&target, delta)?;
            let map = p.chambers.iter().map(|&x| (x, shifted(r, x))).collect();
            Normalization { polygon: quotient_triangle(&target), map }
        }
        PolygonForm::Residue => {
            if c != p.base {
                return Err(Error::PreconditionViolated(
                    "a residue can only be normalized at its base chamber".into(),
                ));
            }
            return normalize_residue(p);
        }
    };
    for suite in &p.suites {
        let image = suite.map_chambers(|x| candidate.image(x).expect("total map"));
        if !candidate.polygon.is_flower_cycle(&image) {
            return Err(Error::NotSingerCyclic(format!("suite {suite} is not carried to a flower cycle")));
        }
    }
    Ok(candidate)
}

/// Canonical polygons of order `q` and gonality `m`, in search order.
pub fn canonical_targets(m: u32, q: u32) -> Result<Vec<SingerPolygon>> {
    match m {
        2 => Ok(vec![quotient_digon(q)?]),
        3 => {
            let reps: Vec<DifferenceSet> = if q <= MAX_ENUMERATION_ORDER {
                enumerate_difference_sets(q)?.classes
            } else {
                vec![singer_difference_set(q)?.into_inner()]
            };
            let mut members: Vec<BasedDifferenceSet> = reps.iter().flat_map(based_class_members).collect();
            members.sort();
            Ok(members.iter().map(quotient_triangle).collect())
        }
        _ => Err(Error::PreconditionViolated(format!("gonality {m} is not 2 or 3"))),
    }
}

fn normalize_residue(p: &SingerPolygon) -> Result<Normalization> {
    for target in canonical_targets(p.m, p.q)? {
        if let Some(map) = suite_isomorphism(p, &target) {
            return Ok(Normalization { polygon: target, map });
        }
    }
    Err(Error::NotSingerCyclic("no canonical polygon matches the defining suites".into()))
}

/// A chamber bijection `src → dst` with `base ↦ base` carrying the set of
/// defining suites of `src` exactly onto that of `dst`, found by
/// backtracking (targets tried in ascending order).
pub fn suite_isomorphism(src: &SingerPolygon, dst: &SingerPolygon) -> Option<Vec<(u32, u32)>> {
    let src_suites: BTreeSet<&Gallery> = src.suites.iter().collect();
    let dst_suites: BTreeSet<&Gallery> = dst.suites.iter().collect();
    if src.chambers.len() != dst.chambers.len() || src_suites.len() != dst_suites.len() {
        return None;
    }
    // Assign chambers in order of first appearance so suites complete early.
    let mut order: Vec<u32> = Vec::new();
    for suite in &src_suites {
        for c in suite.chambers() {
            if c != src.base && !order.contains(&c) {
                order.push(c);
            }
        }
    }
    for &c in &src.chambers {
        if c != src.base && !order.contains(&c) {
            order.push(c);
        }
    }
    let rank: BTreeMap<u32, usize> = order.iter().enumerate().map(|(i, &c)| (c, i + 1)).collect();
    let mut complete_at: Vec<Vec<&Gallery>> = vec![Vec::new(); order.len() + 1];
    for suite in &src_suites {
        let at = suite.chambers().iter().map(|c| rank.get(c).copied().unwrap_or(0)).max().unwrap_or(0);
        complete_at[at].push(suite);
    }

    struct Search<'a> {
        order: &'a [u32],
        complete_at: &'a [Vec<&'a Gallery>],
        dst_chambers: Vec<u32>,
        dst_suites: &'a BTreeSet<&'a Gallery>,
        map: BTreeMap<u32, u32>,
        used: BTreeSet<u32>,
    }

    impl Search<'_> {
        fn consistent(&self, level: usize) -> bool {
            self.complete_at[level].iter().all(|suite| {
                let image = suite.map_chambers(|c| self.map[&c]);
                self.dst_suites.contains(&image)
            })
        }

        fn run(&mut self, level: usize) -> bool {
            if !self.consistent(level) {
                return false;
            }
            if level == self.order.len() {
                return true;
            }
            let c = self.order[level];
            for t in self.dst_chambers.clone() {
                if self.used.contains(&t) {
                    continue;
                }
                self.map.insert(c, t);
                self.used.insert(t);
                if self.run(level + 1) {
                    return true;
                }
                self.used.remove(&t);
                self.map.remove(&c);
            }
            false
        }
    }

    let mut search = Search {
        order: &order,
        complete_at: &complete_at,
        dst_chambers: dst.chambers.clone(),
        dst_suites: &dst_suites,
        map: BTreeMap::from([(src.base, dst.base)]),
        used: BTreeSet::from([dst.base]),
    };
    search.run(0).then(|| search.map.into_iter().collect())
}
