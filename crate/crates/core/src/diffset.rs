//! Cyclic planar difference sets: verification, the Singer construction,
//! the `r·D + x` action, and exhaustive classification at small order.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use num_integer::Integer;

use crate::field::{prime_power, FieldElem, FieldSpec};
use crate::{modulo, Error, Result};

/// Largest order accepted by [`singer_difference_set`].
pub const MAX_SINGER_ORDER: u32 = 64;
/// Largest order accepted by [`enumerate_difference_sets`].
pub const MAX_ENUMERATION_ORDER: u32 = 5;

/// `q² + q + 1`.
pub fn plane_modulus(q: u32) -> u32 {
    q * q + q + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffSetDefect {
    ZeroModulus,
    OutOfRange(u32),
    RepeatedElement(u32),
    DuplicatedDifference(u32),
    MissingDifference(u32),
}

/// Outcome of [`verify_difference_set`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffSetReport {
    pub delta: u32,
    /// `|D| - 1` when valid.
    pub order: Option<u32>,
    pub defect: Option<DiffSetDefect>,
}

impl DiffSetReport {
    pub fn is_valid(&self) -> bool {
        self.defect.is_none()
    }
}

impl fmt::Display for DiffSetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.defect, self.order) {
            (None, Some(q)) => write!(f, "valid order={q}"),
            (None, None) => f.write_str("valid"),
            (Some(defect), _) => match defect {
                DiffSetDefect::ZeroModulus => f.write_str("invalid modulus=0"),
                DiffSetDefect::OutOfRange(d) => write!(f, "invalid element {d} out of range mod {}", self.delta),
                DiffSetDefect::RepeatedElement(d) => write!(f, "invalid element {d} repeated"),
                DiffSetDefect::DuplicatedDifference(n) => write!(f, "invalid difference {n} duplicated"),
                DiffSetDefect::MissingDifference(n) => write!(f, "invalid difference {n} missing"),
            },
        }
    }
}

/// Checks that every nonzero residue mod `delta` arises exactly once as `d - d'`.
///
/// A failing report names the smallest residue that is hit zero times or more
/// than once.
pub fn verify_difference_set(elements: &[u32], delta: u32) -> DiffSetReport {
    let report = |defect| DiffSetReport { delta, order: None, defect: Some(defect) };
    if delta == 0 {
        return report(DiffSetDefect::ZeroModulus);
    }
    let mut seen = vec![false; delta as usize];
    for &d in elements {
        if d >= delta {
            return report(DiffSetDefect::OutOfRange(d));
        }
        if core::mem::replace(&mut seen[d as usize], true) {
            return report(DiffSetDefect::RepeatedElement(d));
        }
    }
    let mut hits = vec![0u32; delta as usize];
    for &a in elements {
        for &b in elements {
            if a != b {
                hits[modulo(i64::from(a) - i64::from(b), delta) as usize] += 1;
            }
        }
    }
    if let Some(n) = (1..delta).find(|&n| hits[n as usize] != 1) {
        let defect = if hits[n as usize] == 0 {
            DiffSetDefect::MissingDifference(n)
        } else {
            DiffSetDefect::DuplicatedDifference(n)
        };
        return report(defect);
    }
    DiffSetReport { delta, order: Some(elements.len().saturating_sub(1) as u32), defect: None }
}

/// A verified cyclic difference set of order `q` in `Z/δZ`, `δ = q² + q + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DifferenceSet {
    q: u32,
    delta: u32,
    elements: Vec<u32>,
}

impl DifferenceSet {
    pub fn new(elements: &[u32], delta: u32) -> Result<Self> {
        let report = verify_difference_set(elements, delta);
        match report.order {
            Some(q) if report.is_valid() && plane_modulus(q) == delta => {
                let mut elements = elements.to_vec();
                elements.sort_unstable();
                Ok(DifferenceSet { q, delta, elements })
            }
            _ => Err(Error::NotADifferenceSet(report)),
        }
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    /// Ascending residues.
    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn contains(&self, d: u32) -> bool {
        self.elements.binary_search(&d).is_ok()
    }

    /// The unique `(d, d')` in the set with `d - d' ≡ n`, for `n ≢ 0`.
    pub fn pair_with_difference(&self, n: i64) -> Option<(u32, u32)> {
        let n = modulo(n, self.delta);
        if n == 0 {
            return None;
        }
        self.elements.iter().find_map(|&d2| {
            let d1 = (d2 + n) % self.delta;
            self.contains(d1).then_some((d1, d2))
        })
    }

    /// `r·D + x`.
    pub fn translate_scale(&self, r: u32, x: u32) -> Result<DifferenceSet> {
        let r = r % self.delta;
        if r.gcd(&self.delta) != 1 {
            return Err(Error::NotAUnit { r, modulus: self.delta });
        }
        let mut elements: Vec<u32> = self
            .elements
            .iter()
            .map(|&d| ((u64::from(r) * u64::from(d) + u64::from(x)) % u64::from(self.delta)) as u32)
            .collect();
        elements.sort_unstable();
        DifferenceSet::new(&elements, self.delta)
    }

    /// `D - min(D)`.
    pub fn rebase(&self) -> BasedDifferenceSet {
        let m = self.elements[0];
        let shifted = self
            .translate_scale(1, self.delta - m)
            .expect("translation preserves the difference property");
        BasedDifferenceSet(shifted)
    }

    /// Views the set as based, if it contains 0.
    pub fn as_based(&self) -> Option<BasedDifferenceSet> {
        self.contains(0).then(|| BasedDifferenceSet(self.clone()))
    }
}

impl fmt::Display for DifferenceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "diffset q={} delta={} :", self.q, self.delta)?;
        for d in &self.elements {
            write!(f, " {d}")?;
        }
        Ok(())
    }
}

/// A difference set containing 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasedDifferenceSet(DifferenceSet);

impl BasedDifferenceSet {
    pub fn new(elements: &[u32], delta: u32) -> Result<Self> {
        let set = DifferenceSet::new(elements, delta)?;
        set.as_based()
            .ok_or_else(|| Error::PreconditionViolated(alloc::format!("{set} does not contain 0")))
    }

    /// `D* = D \ {0}`, ascending.
    pub fn nonzero(&self) -> &[u32] {
        &self.0.elements[1..]
    }

    pub fn into_inner(self) -> DifferenceSet {
        self.0
    }
}

impl Deref for BasedDifferenceSet {
    type Target = DifferenceSet;

    fn deref(&self) -> &DifferenceSet {
        &self.0
    }
}

impl fmt::Display for BasedDifferenceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Searches `(r, x)` with `d2 = r·d1 + x`, translations `x` ascending, then units `r` ascending.
pub fn are_equivalent(d1: &DifferenceSet, d2: &DifferenceSet) -> Result<Option<(u32, u32)>> {
    if d1.delta != d2.delta {
        return Err(Error::ModulusMismatch(d1.delta, d2.delta));
    }
    let delta = d1.delta;
    for x in 0..delta {
        for r in (1..delta.max(2)).filter(|r| r.gcd(&delta) == 1) {
            if d1.translate_scale(r, x)?.elements == d2.elements {
                return Ok(Some((r, x)));
            }
        }
    }
    Ok(None)
}

/// Every based difference set equivalent to `d`, in lexicographic order.
pub fn based_class_members(d: &DifferenceSet) -> Vec<BasedDifferenceSet> {
    let delta = d.delta;
    let mut out = BTreeSet::new();
    for r in (1..delta.max(2)).filter(|r| r.gcd(&delta) == 1) {
        let scaled = d.translate_scale(r, 0).expect("unit");
        for &m in scaled.elements() {
            out.insert(scaled.translate_scale(1, delta - m).expect("unit").elements.clone());
        }
    }
    out.into_iter()
        .map(|elements| BasedDifferenceSet(DifferenceSet { q: d.q, delta, elements }))
        .collect()
}

/// The Singer difference set of order `q`: exponents `i mod δ` for which `θ^i`
/// has zero trace from GF(q³) down to GF(q), `θ` the primitive element of
/// GF(q³). Rebased to contain 0 if needed.
pub fn singer_difference_set(q: u32) -> Result<BasedDifferenceSet> {
    let (p, e) = prime_power(u64::from(q)).ok_or(Error::NotPrimePower(q))?;
    if q > MAX_SINGER_ORDER {
        return Err(Error::TooLarge(q));
    }
    let field = FieldSpec::new(p, 3 * e)?;
    let theta = field.primitive_element();
    let q64 = u64::from(q);
    let trace = |a: &FieldElem| {
        let a_q = field.pow(a, q64);
        let a_qq = field.pow(&a_q, q64);
        field.add(&field.add(a, &a_q), &a_qq)
    };
    let delta = plane_modulus(q);
    let mut elements = Vec::new();
    let mut power = field.one();
    for i in 0..delta {
        if trace(&power).is_zero() {
            elements.push(i);
        }
        power = field.mul(&power, &theta);
    }
    Ok(DifferenceSet::new(&elements, delta)?.rebase())
}

/// Result of an exhaustive scan of all `(q+1)`-subsets of `Z/δZ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub q: u32,
    pub subsets_scanned: u64,
    pub valid_sets: u64,
    /// One lexicographically smallest representative per equivalence class.
    pub classes: Vec<DifferenceSet>,
}

pub fn enumerate_difference_sets(q: u32) -> Result<Census> {
    if q == 0 {
        return Err(Error::PreconditionViolated("order must be at least 1".into()));
    }
    if q > MAX_ENUMERATION_ORDER {
        return Err(Error::TooLarge(q));
    }
    let delta = plane_modulus(q);
    let k = (q + 1) as usize;
    let mut census = Census { q, subsets_scanned: 0, valid_sets: 0, classes: Vec::new() };
    let mut combo: Vec<u32> = (0..k as u32).collect();
    loop {
        census.subsets_scanned += 1;
        if verify_difference_set(&combo, delta).is_valid() {
            census.valid_sets += 1;
            let set = DifferenceSet { q, delta, elements: combo.clone() };
            let known = census
                .classes
                .iter()
                .any(|rep| matches!(are_equivalent(rep, &set), Ok(Some(_))));
            if !known {
                census.classes.push(set);
            }
        }
        if !next_combination(&mut combo, delta) {
            break;
        }
    }
    Ok(census)
}

/// Advances to the next k-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [u32], n: u32) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - (k - i) as u32 {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(elements: &[u32], delta: u32) -> DifferenceSet {
        DifferenceSet::new(elements, delta).unwrap()
    }

    #[test]
    fn verify_examples() {
        let r = verify_difference_set(&[0, 1, 3], 7);
        assert!(r.is_valid());
        assert_eq!(r.order, Some(2));
        let r = verify_difference_set(&[0, 1], 3);
        assert_eq!(r.order, Some(1));
        let r = verify_difference_set(&[0, 1, 2], 7);
        assert_eq!(r.defect, Some(DiffSetDefect::DuplicatedDifference(1)));
        assert_eq!(alloc::format!("{r}"), "invalid difference 1 duplicated");
    }

    #[test]
    fn verify_structural_defects() {
        assert_eq!(verify_difference_set(&[0, 7], 7).defect, Some(DiffSetDefect::OutOfRange(7)));
        assert_eq!(verify_difference_set(&[0, 0, 1], 7).defect, Some(DiffSetDefect::RepeatedElement(0)));
        assert_eq!(verify_difference_set(&[0, 1], 7).defect, Some(DiffSetDefect::MissingDifference(2)));
        assert_eq!(verify_difference_set(&[], 0).defect, Some(DiffSetDefect::ZeroModulus));
    }

    #[test]
    fn translate_scale_examples() {
        let d = set(&[0, 1, 3], 7);
        assert_eq!(d.translate_scale(1, 0).unwrap().elements(), &[0, 1, 3]);
        assert_eq!(d.translate_scale(2, 0).unwrap().elements(), &[0, 2, 6]);
        assert_eq!(d.translate_scale(1, 4).unwrap().elements(), &[0, 4, 5]);
        assert_eq!(d.translate_scale(7, 0), Err(Error::NotAUnit { r: 0, modulus: 7 }));
        let d13 = set(&[0, 1, 3, 9], 13);
        assert_eq!(d13.translate_scale(13 + 13, 1), Err(Error::NotAUnit { r: 0, modulus: 13 }));
    }

    #[test]
    fn non_unit_in_composite_modulus() {
        let d = set(&[0, 1, 3, 9], 13);
        assert!(d.translate_scale(5, 0).is_ok());
        let d21 = set(&[0, 1, 4, 14, 16], 21);
        assert_eq!(d21.translate_scale(3, 0), Err(Error::NotAUnit { r: 3, modulus: 21 }));
        assert_eq!(d21.translate_scale(7, 0), Err(Error::NotAUnit { r: 7, modulus: 21 }));
    }

    #[test]
    fn rebase_examples() {
        assert_eq!(set(&[0, 1, 3], 7).rebase().elements(), &[0, 1, 3]);
        assert_eq!(set(&[2, 3, 5], 7).rebase().elements(), &[0, 1, 3]);
        assert_eq!(set(&[1, 2, 4], 7).rebase().elements(), &[0, 1, 3]);
    }

    #[test]
    fn equivalence_examples() {
        let d = set(&[0, 1, 3], 7);
        assert_eq!(are_equivalent(&d, &d).unwrap(), Some((1, 0)));
        assert_eq!(are_equivalent(&d, &set(&[0, 2, 6], 7)).unwrap(), Some((2, 0)));
        assert_eq!(are_equivalent(&d, &set(&[0, 1, 5], 7)).unwrap(), Some((5, 0)));
        let other = set(&[0, 1], 3);
        assert_eq!(are_equivalent(&d, &other), Err(Error::ModulusMismatch(7, 3)));
    }

    #[test]
    fn pair_lookup() {
        let d = set(&[0, 1, 3], 7);
        assert_eq!(d.pair_with_difference(2), Some((3, 1)));
        assert_eq!(d.pair_with_difference(-2), Some((1, 3)));
        assert_eq!(d.pair_with_difference(0), None);
    }

    #[test]
    fn singer_rejects_non_prime_powers() {
        assert_eq!(singer_difference_set(6), Err(Error::NotPrimePower(6)));
        assert_eq!(singer_difference_set(1), Err(Error::NotPrimePower(1)));
        assert_eq!(singer_difference_set(128), Err(Error::TooLarge(128)));
    }

    #[test]
    fn singer_q2_is_013() {
        assert_eq!(singer_difference_set(2).unwrap().elements(), &[0, 1, 3]);
    }

    #[test]
    fn enumeration_limits() {
        assert_eq!(enumerate_difference_sets(6), Err(Error::TooLarge(6)));
        assert!(enumerate_difference_sets(0).is_err());
        let census = enumerate_difference_sets(1).unwrap();
        assert_eq!(census.classes.len(), 1);
        assert_eq!(census.classes[0].elements(), &[0, 1]);
        assert_eq!(census.subsets_scanned, 3);
    }

    #[test]
    fn class_members_are_based_and_equivalent() {
        let d = set(&[0, 1, 3], 7);
        let members = based_class_members(&d);
        assert!(members.iter().all(|m| m.contains(0)));
        assert!(members.iter().any(|m| m.elements() == [0, 1, 5]));
        for m in &members {
            assert!(are_equivalent(&d, m).unwrap().is_some());
        }
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
