//! Finite presentations: universal and fundamental groups of cyclic Singer
//! polygons, the universal group of a Singer graph, the lattice presentation
//! read off a gluing matrix, and Tietze simplification.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::polygon::{normalize_polygon, PolygonForm, SingerPolygon};
use crate::weyl::{cycle_basis, edge_modulus, validate_gluing, GluingMatrix, WeylGraphData};
use crate::{Error, Result};

/// A freely reduced word: `(generator, exponent)` syllables with nonzero
/// exponents and no two neighbours on the same generator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<(usize, i64)>);

impl Word {
    pub fn new(syllables: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (g, e) in syllables {
            match out.last_mut() {
                Some((h, f)) if *h == g => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ if e != 0 => out.push((g, e)),
                _ => {}
            }
        }
        Word(out)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.0.iter().chain(&other.0).copied())
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..e.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Conjugates away matching ends so the word is cyclically reduced.
    pub fn cyclically_reduced(&self) -> Word {
        let mut s = self.0.clone();
        loop {
            if s.len() >= 2 && s[0].0 == s[s.len() - 1].0 {
                let (_, e) = s.pop().unwrap();
                s[0].1 += e;
                if s[0].1 == 0 {
                    s.remove(0);
                }
            } else {
                return Word(s);
            }
        }
    }

    /// Letters as `(generator, ±1)`.
    pub fn letters(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.0
            .iter()
            .flat_map(|&(g, e)| core::iter::repeat_n((g, e.signum()), e.unsigned_abs() as usize))
    }

    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.0.iter().filter(|s| s.0 == generator).map(|s| s.1).sum()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|s| s.0).max()
    }

    /// Replaces every occurrence of `generator` by `replacement`.
    pub fn substitute(&self, generator: usize, replacement: &Word) -> Word {
        let mut out = Word::empty();
        for &(g, e) in &self.0 {
            let piece = if g == generator { replacement.pow(e) } else { Word(alloc::vec![(g, e)]) };
            out = out.concat(&piece);
        }
        out
    }

    fn renumber(&self, f: impl Fn(usize) -> usize) -> Word {
        Word::new(self.0.iter().map(|&(g, e)| (f(g), e)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let distinct: BTreeSet<&String> = generators.iter().collect();
        if distinct.len() != generators.len() {
            return Err(Error::PreconditionViolated("repeated generator name".into()));
        }
        if relators.iter().any(|r| r.max_generator().is_some_and(|g| g >= generators.len())) {
            return Err(Error::PreconditionViolated("relator uses an undeclared generator".into()));
        }
        Ok(GroupPresentation { generators, relators })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Adds the relations `g = 1` for the named generators and drops them.
    pub fn kill_generators(&self, names: &[&str]) -> GroupPresentation {
        let dead: BTreeSet<usize> = names.iter().filter_map(|n| self.generator_index(n)).collect();
        let shift = |g: usize| g - dead.range(..g).count();
        let generators = self
            .generators
            .iter()
            .enumerate()
            .filter(|(i, _)| !dead.contains(i))
            .map(|(_, g)| g.clone())
            .collect();
        let relators = self
            .relators
            .iter()
            .map(|r| Word::new(r.0.iter().filter(|s| !dead.contains(&s.0)).map(|&(g, e)| (shift(g), e))))
            .filter(|r| !r.is_empty())
            .collect();
        GroupPresentation { generators, relators }
    }

    /// Renders a word with generator names, e.g. `a_s_t^3 a_t_u^-1`.
    pub fn format_word(&self, w: &Word) -> String {
        let parts: Vec<String> = w.0.iter().map(|&(g, e)| format!("{}^{e}", self.generators[g])).collect();
        parts.join(" ")
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.generators {
            writeln!(f, "gen {g}")?;
        }
        for r in &self.relators {
            if r.is_empty() {
                writeln!(f, "rel")?;
            } else {
                writeln!(f, "rel {}", self.format_word(r))?;
            }
        }
        Ok(())
    }
}

fn realized(p: &SingerPolygon) -> Result<SingerPolygon> {
    match p.form() {
        PolygonForm::Residue => Ok(normalize_polygon(p, p.base())?.polygon),
        _ => Ok(p.clone()),
    }
}

/// `⟨a, g_(n,s), g_(n,t) | a^k, a^n g_(n,t) g_(n,s)⁻¹⟩` with `n` running over
/// the nonzero chambers (`1..=q` for digons, `𝒟*` for triangles) and `k` the
/// chamber modulus. Residues are normalized first.
pub fn universal_presentation_polygon(p: &SingerPolygon) -> Result<GroupPresentation> {
    let p = realized(p)?;
    let k = match p.form() {
        PolygonForm::Triangle(d) => d.delta(),
        _ => p.order() + 1,
    };
    let mut generators = alloc::vec![String::from("a")];
    let mut relators = alloc::vec![Word::new([(0, i64::from(k))])];
    for &n in p.chambers().iter().filter(|&&n| n != 0) {
        let gs = generators.len();
        generators.push(format!("g_{n}_s"));
        generators.push(format!("g_{n}_t"));
        relators.push(Word::new([(0, i64::from(n)), (gs + 1, 1), (gs, -1)]));
    }
    GroupPresentation::new(generators, relators)
}

/// The universal group modulo the tree `{g_(n,t)}`, simplified: `⟨a | a^k⟩`.
pub fn fundamental_presentation_polygon(p: &SingerPolygon) -> Result<GroupPresentation> {
    let universal = universal_presentation_polygon(p)?;
    let tree: Vec<String> = universal.generators.iter().filter(|g| g.ends_with("_t")).cloned().collect();
    let tree: Vec<&str> = tree.iter().map(String::as_str).collect();
    Ok(simplify(&universal.kill_generators(&tree)))
}

/// Generators `g_<n>_<σ>` (n-major) then `a_<s>_<t>` per edge; relators
/// `(a_st)^δ(st)` then `(a_st)^n(st) g_(n,t) g_(n,s)⁻¹` per edge and `n`.
pub fn universal_presentation_weyl(w: &WeylGraphData) -> Result<GroupPresentation> {
    let vertices = w.coxeter.vertices();
    let mut generators = Vec::new();
    for n in 1..=w.q {
        for v in vertices {
            generators.push(format!("g_{n}_{v}"));
        }
    }
    let g_index = |n: u32, v: &str| (n as usize - 1) * vertices.len() + vertices.iter().position(|x| x == v).unwrap();
    let a_base = generators.len();
    let mut relators = Vec::new();
    let mut per_n = Vec::new();
    for (e, r) in w.residues.iter().enumerate() {
        let omega = r
            .omega
            .as_ref()
            .ok_or_else(|| Error::PreconditionViolated("Weyl data carries no gluing maps".into()))?;
        generators.push(format!("a_{}_{}", r.from, r.to));
        relators.push(Word::new([(a_base + e, i64::from(edge_modulus(r.m, w.q)))]));
        for n in 1..=w.q {
            per_n.push(Word::new([
                (a_base + e, i64::from(omega[n as usize])),
                (g_index(n, &r.to), 1),
                (g_index(n, &r.from), -1),
            ]));
        }
    }
    relators.extend(per_n);
    GroupPresentation::new(generators, relators)
}

/// One step of a cycle relator: the edge's generator index, the exponent it
/// contributes for `n`, and whether the step runs along the orientation.
fn cycle_syllables(g: &GluingMatrix, cycle: &[String], n: u32) -> Result<Vec<(usize, i64, bool)>> {
    let edges = g.oriented_edges();
    cycle
        .windows(2)
        .map(|pair| {
            let (a, b) = (&pair[0], &pair[1]);
            let index = edges
                .iter()
                .position(|(e, _)| (&e.from == a && &e.to == b) || (&e.from == b && &e.to == a))
                .ok_or_else(|| Error::NoSuchEdge(a.clone(), b.clone()))?;
            let edge = edges[index].0;
            let forward = &edge.from == a;
            let e = i64::from(edge.column[n as usize - 1]);
            Ok((index, if forward { e } else { -e }, forward))
        })
        .collect()
}

/// The Singer lattice presentation: one generator `a_<s>_<t>` per oriented
/// edge, the powers `(a_st)^δ(st)`, and for every basis cycle of the defining
/// graph and every `n` the product of `(a_σᵢσᵢ₊₁)^±n(σᵢσᵢ₊₁)` along it.
pub fn lattice_presentation(g: &GluingMatrix) -> Result<GroupPresentation> {
    if let Some(defect) = validate_gluing(g).defect {
        return Err(Error::InvalidGluing(defect));
    }
    let edges = g.oriented_edges();
    let generators = edges.iter().map(|(e, _)| format!("a_{}_{}", e.from, e.to)).collect();
    let mut relators: Vec<Word> = edges
        .iter()
        .enumerate()
        .map(|(i, &(_, m))| Word::new([(i, i64::from(edge_modulus(m, g.q)))]))
        .collect();
    for cycle in cycle_basis(&g.coxeter) {
        for n in 1..=g.q {
            let word = cycle_relator(g, &cycle, n)?;
            if !word.is_empty() && !relators.contains(&word) {
                relators.push(word);
            }
        }
    }
    GroupPresentation::new(generators, relators)
}

/// `Π (a_σᵢσᵢ₊₁)^±n(σᵢσᵢ₊₁)` along a closed vertex sequence, in the
/// generators of [`lattice_presentation`]. The gluing matrix must validate.
pub fn cycle_relator(g: &GluingMatrix, cycle: &[String], n: u32) -> Result<Word> {
    Ok(Word::new(cycle_syllables(g, cycle, n)?.into_iter().map(|(i, e, _)| (i, e))))
}

/// Substitutes `(a_st)^n(st) = g_(n,s) g_(n,t)⁻¹` into the cycle relator for
/// `cycle` and `n`, in the generators of [`universal_presentation_weyl`].
/// The result is empty exactly when the relator telescopes.
pub fn telescoped_cycle_relator(g: &GluingMatrix, cycle: &[String], n: u32) -> Result<Word> {
    let vertices = g.coxeter.vertices();
    let g_index = |v: &str| {
        vertices
            .iter()
            .position(|x| x == v)
            .map(|i| (n as usize - 1) * vertices.len() + i)
            .ok_or_else(|| Error::NoSuchEdge(v.into(), v.into()))
    };
    let edges = g.oriented_edges();
    let mut out = Word::empty();
    for (index, _, forward) in cycle_syllables(g, cycle, n)? {
        let edge = edges[index].0;
        let (s, t) = (g_index(&edge.from)?, g_index(&edge.to)?);
        let block = Word::new([(s, 1), (t, -1)]);
        out = out.concat(&if forward { block } else { block.inverse() });
    }
    Ok(out)
}

/// Free and cyclic reduction, removal of trivial and repeated relators, and
/// Tietze elimination of generators that occur exactly once (exponent ±1) in
/// some relator, repeated to a fixed point.
///
/// The eliminated generator is the highest-numbered eligible one in the first
/// relator that has any.
pub fn simplify(p: &GroupPresentation) -> GroupPresentation {
    let mut generators = p.generators.clone();
    let mut relators: Vec<Word> = p.relators.clone();
    loop {
        let mut cleaned: Vec<Word> = Vec::new();
        for r in relators {
            let r = r.cyclically_reduced();
            if !r.is_empty() && !cleaned.contains(&r) {
                cleaned.push(r);
            }
        }
        relators = cleaned;

        let found = relators.iter().enumerate().find_map(|(i, r)| {
            r.0.iter()
                .enumerate()
                .filter(|&(_, &(g, e))| e.abs() == 1 && r.0.iter().filter(|s| s.0 == g).count() == 1)
                .max_by_key(|&(_, &(g, _))| g)
                .map(|(pos, &(g, e))| (i, pos, g, e))
        });
        let Some((i, pos, g, e)) = found else {
            return GroupPresentation { generators, relators };
        };
        let r = relators.remove(i);
        let u = Word(r.0[..pos].to_vec());
        let v = Word(r.0[pos + 1..].to_vec());
        // u g v = 1 gives g = u⁻¹ v⁻¹; u g⁻¹ v = 1 gives g = v u.
        let replacement = if e == 1 { u.inverse().concat(&v.inverse()) } else { v.concat(&u) };
        relators = relators
            .iter()
            .map(|w| w.substitute(g, &replacement).renumber(|h| if h > g { h - 1 } else { h }))
            .collect();
        generators.remove(g);
    }
}
