//! Acceptance run: one timed PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use singer::formats::parse_gluing;
use singer_core::analysis::{abelianization, coset_enumerate, relation_matrix, CosetStatus};
use singer_core::diffset::{
    are_equivalent, based_class_members, enumerate_difference_sets, singer_difference_set, verify_difference_set,
    BasedDifferenceSet, DifferenceSet,
};
use singer_core::polygon::{
    build_digon, build_triangle, flower, quotient_digon, quotient_triangle, rotation_automorphism, standard_action,
    verify_covering, verify_generalized_polygon, ChamberSystem, Gallery, Label, SingerPolygon,
};
use singer_core::presentation::{
    cycle_relator, fundamental_presentation_polygon, lattice_presentation, telescoped_cycle_relator,
    GroupPresentation,
};
use singer_core::weyl::{build_weyl_graph, cycle_basis, edgewise_isomorphic, extract_gluing_matrix, GluingMatrix};

type Check = Result<(), String>;

/// Name, check and time budget.
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

const EXAMPLES: [&str; 6] =
    ["a2tilde_1", "a2tilde_2", "hyperbolic_square", "hyperbolic_mixed", "wild_exx1", "wild_exx2"];

fn example(name: &str) -> GluingMatrix {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", &format!("{name}.gluing")].iter().collect();
    parse_gluing(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

fn all_based(q: u32) -> Vec<BasedDifferenceSet> {
    if q == 1 {
        return vec![BasedDifferenceSet::new(&[0, 1], 3).unwrap()];
    }
    based_class_members(&singer_difference_set(q).unwrap().into_inner())
}

fn c1() -> Check {
    let good = verify_difference_set(&[0, 1, 3], 7);
    ensure(good.is_valid() && good.order == Some(2), || format!("{{0,1,3}}: {good}"))?;
    let bad = verify_difference_set(&[0, 1, 2], 7);
    ensure(!bad.is_valid(), || format!("{{0,1,2}}: {bad}"))
}

fn c2() -> Check {
    for (q, subsets) in [(2, 35), (3, 715), (4, 20349)] {
        let census = enumerate_difference_sets(q).map_err(|e| e.to_string())?;
        ensure(census.subsets_scanned == subsets, || format!("q={q}: scanned {}", census.subsets_scanned))?;
        ensure(census.classes.len() == 1, || format!("q={q}: {} classes", census.classes.len()))?;
        let singer = singer_difference_set(q).unwrap();
        let found = are_equivalent(&singer, &census.classes[0]).unwrap();
        ensure(found.is_some(), || format!("q={q}: Singer set {} outside the class", *singer))?;
    }
    Ok(())
}

fn suite(chambers: &[u32]) -> Gallery {
    Gallery::alternating(Label::S, chambers)
}

fn c3() -> Check {
    let digon: BTreeSet<Gallery> =
        [[0, 1, 0, 2, 0], [0, 1, 2, 1, 0], [0, 2, 0, 1, 0], [0, 2, 1, 2, 0]].iter().map(|c| suite(c)).collect();
    let got: BTreeSet<Gallery> = quotient_digon(2).unwrap().suites().iter().cloned().collect();
    ensure(got == digon, || format!("digon suites {got:?}"))?;

    // (x, y, z) -> (x', y') for the suite [0 s x t y s z t y' s x' t 0].
    let table = [
        ((1, 0, 1), (1, 3)),
        ((1, 0, 3), (3, 0)),
        ((1, 3, 0), (3, 1)),
        ((1, 3, 1), (1, 0)),
        ((3, 0, 1), (3, 0)),
        ((3, 0, 3), (1, 0)),
        ((3, 1, 0), (1, 3)),
        ((3, 1, 3), (3, 1)),
    ];
    let triangle: BTreeSet<Gallery> =
        table.iter().map(|&((x, y, z), (x2, y2))| suite(&[0, x, y, z, y2, x2, 0])).collect();
    let p = quotient_triangle(&BasedDifferenceSet::new(&[0, 1, 3], 7).unwrap());
    let got: BTreeSet<Gallery> = p.suites().iter().cloned().collect();
    ensure(got == triangle, || format!("triangle suites {got:?}"))?;
    ensure(p.suites().iter().all(|s| p.is_flower_cycle(s)), || "suite outside the flower".into())?;

    for q in 1..=4u32 {
        let n = quotient_digon(q).unwrap().suites().len();
        ensure(n == (q * q) as usize, || format!("digon q={q}: {n} suites"))?;
        for d in all_based(q) {
            let n = quotient_triangle(&d).suites().len();
            ensure(n == (q * q * q) as usize, || format!("triangle {d}: {n} suites"))?;
        }
    }
    Ok(())
}

fn c4() -> Check {
    for q in 1..=5 {
        let report = verify_generalized_polygon(&build_digon(q, q).unwrap(), 2);
        ensure(report.passed(), || format!("D({q}): {report}"))?;
    }
    for q in 1..=4 {
        for d in all_based(q) {
            let report = verify_generalized_polygon(&build_triangle(&d), 3);
            let shape = (report.diameter, report.girth) == (Some(3), Some(6));
            ensure(report.passed() && shape, || format!("T({d}): {report}"))?;
        }
    }
    Ok(())
}

/// The covering holds, and moving any one chamber of any one suite breaks it.
fn covering_and_mutants(total: &ChamberSystem, p: &SingerPolygon) -> Check {
    let a = standard_action(total).map_err(|e| e.to_string())?;
    ensure(verify_covering(total, &a, p) == Ok(true), || format!("covering fails for {p}"))?;
    for s in 0..p.suites().len() {
        for pos in 0..p.suites()[s].len() {
            let original = p.suites()[s].steps()[pos].1;
            for &c in p.chambers().iter().filter(|&&c| c != original) {
                let mut mutant = p.clone();
                mutant.suites_mut()[s].steps_mut()[pos].1 = c;
                ensure(verify_covering(total, &a, &mutant) == Ok(false), || {
                    format!("mutant of suite {s} at step {pos} to {c} still covers")
                })?;
            }
        }
    }
    Ok(())
}

fn c5() -> Check {
    for q in 1..=4 {
        covering_and_mutants(&build_digon(q, q).unwrap(), &quotient_digon(q).unwrap())?;
    }
    for q in 1..=3 {
        for d in all_based(q) {
            covering_and_mutants(&build_triangle(&d), &quotient_triangle(&d))?;
        }
    }
    Ok(())
}

fn relators(p: &GroupPresentation) -> Vec<String> {
    p.relators().iter().map(|w| p.format_word(w)).collect()
}

fn word(names: &[&str], exponents: &[i64]) -> String {
    names.iter().zip(exponents).map(|(n, e)| format!("{n}^{e}")).collect::<Vec<_>>().join(" ")
}

fn powers(names: &[&str], k: &[i64]) -> Vec<String> {
    names.iter().zip(k).map(|(n, k)| format!("{n}^{k}")).collect()
}

fn c6() -> Check {
    let tri = ["a_s_t", "a_t_u", "a_u_s"];
    let tail = ["a_s_t", "a_t_u", "a_u_s", "a_u_v"];
    let sq = ["a_s_t", "a_t_u", "a_u_v", "a_v_s"];
    let six = ["a_s_t", "a_t_u", "a_u_s", "a_u_v", "a_v_w", "a_w_x", "a_x_u"];
    let four = ["a_u_v", "a_v_w", "a_w_x", "a_x_u"];
    let expected: [(&str, Vec<String>, Vec<String>); 6] = [
        ("a2tilde_1", powers(&tri, &[7; 3]), vec![word(&tri, &[1; 3]), word(&tri, &[3; 3])]),
        ("a2tilde_2", powers(&tri, &[7; 3]), vec![word(&tri, &[1; 3]), word(&tri, &[3, 3, 5])]),
        (
            "hyperbolic_square",
            powers(&sq, &[13; 4]),
            vec![word(&sq, &[1; 4]), word(&sq, &[3; 4]), word(&sq, &[9; 4])],
        ),
        (
            "hyperbolic_mixed",
            powers(&sq, &[4, 13, 13, 4]),
            vec![word(&sq, &[1; 4]), word(&sq, &[2, 3, 3, 2]), word(&sq, &[3, 9, 9, 3])],
        ),
        ("wild_exx1", powers(&tail, &[7; 4]), vec![word(&tri, &[1; 3]), word(&tri, &[5, 3, 3])]),
        (
            "wild_exx2",
            powers(&six, &[7; 7]),
            vec![word(&tri, &[1; 3]), word(&tri, &[3; 3]), word(&four, &[1; 4]), word(&four, &[5; 4])],
        ),
    ];
    for (name, mut want, cycles) in expected {
        want.extend(cycles);
        let got = relators(&lattice_presentation(&example(name)).map_err(|e| e.to_string())?);
        ensure(got == want, || format!("{name}: got {got:?}"))?;
    }
    Ok(())
}

fn index(p: &GroupPresentation) -> Result<usize, String> {
    let table = coset_enumerate(p, &[], 10_000).map_err(|e| e.to_string())?;
    match table.status {
        CosetStatus::Complete { index } => Ok(index),
        other => Err(other.to_string()),
    }
}

fn c7() -> Check {
    let digon = fundamental_presentation_polygon(&quotient_digon(2).unwrap()).map_err(|e| e.to_string())?;
    ensure(digon.generators().len() == 1, || format!("digon group:\n{digon}"))?;
    let n = index(&digon)?;
    ensure(n == 3, || format!("digon index {n}"))?;
    let edge = parse_gluing("vertices s t\nedge s t 3\norder 2\ncolumn s t : 1 3\n").unwrap();
    let n = index(&lattice_presentation(&edge).map_err(|e| e.to_string())?)?;
    ensure(n == 7, || format!("edge lattice index {n}"))
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn det(m: &[Vec<i128>]) -> i128 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &v)| v).collect())
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Nontrivial invariant factors from determinantal divisors (gcd of all k×k minors).
fn oracle_invariants(m: &[Vec<i128>], cols: usize) -> Vec<i128> {
    let mut divisors = vec![1i128];
    for k in 1..=m.len().min(cols) {
        let mut g = 0;
        for rows in subsets(m.len(), k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i128>> = rows.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                g = gcd(g, det(&sub));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| w[1] / w[0]).filter(|&f| f != 1).collect()
}

fn c8() -> Check {
    let mut seen = Vec::new();
    for (name, want) in [("a2tilde_1", vec![7, 7]), ("a2tilde_2", vec![7])] {
        let p = lattice_presentation(&example(name)).map_err(|e| e.to_string())?;
        let matrix: Vec<Vec<i128>> = relation_matrix(&p)
            .iter()
            .map(|row| row.iter().map(|v| i128::try_from(v).unwrap()).collect())
            .collect();
        let oracle = oracle_invariants(&matrix, p.generators().len());
        ensure(oracle == want, || format!("{name}: oracle torsion {oracle:?}"))?;
        let ab = abelianization(&p);
        let torsion: Vec<i128> = ab.torsion.iter().map(|t| i128::try_from(t).unwrap()).collect();
        ensure(torsion == want && ab.free_rank == 0, || format!("{name}: abelianization {ab}"))?;
        seen.push(ab);
    }
    ensure(seen[0] != seen[1], || "abelianizations agree".into())
}

fn c9() -> Check {
    for name in EXAMPLES {
        let g = example(name);
        if g.q > 3 {
            continue;
        }
        let w = build_weyl_graph(&g).map_err(|e| format!("{name}: {e}"))?;
        let back = extract_gluing_matrix(&w, &w.orientation()).map_err(|e| format!("{name}: {e}"))?;
        let rebuilt = build_weyl_graph(&back).map_err(|e| format!("{name}: {e}"))?;
        let iso = edgewise_isomorphic(&w, &rebuilt).map_err(|e| format!("{name}: {e}"))?;
        ensure(iso, || format!("{name}: rebuilt residues are not isomorphic"))?;
    }
    Ok(())
}

fn c10() -> Check {
    for q in 1..=4 {
        let mut polygons = vec![quotient_digon(q).unwrap()];
        polygons.extend(all_based(q).iter().map(quotient_triangle));
        for p in &polygons {
            for &base in p.chambers() {
                for petal in flower(p, base).map_err(|e| e.to_string())? {
                    let partners = p.petal_partners(&petal.st.chambers()).map_err(|e| e.to_string())?;
                    ensure(partners == [petal.ts.chambers()], || format!("petal {} in {p}", petal.st))?;
                }
            }
        }
        let p = &polygons[0];
        for r in 0..=q {
            let map = rotation_automorphism(p, r).map_err(|e| e.to_string())?;
            let images: BTreeSet<Gallery> = p.suites().iter().map(|s| s.map_chambers(|c| map[c as usize])).collect();
            let at_r: BTreeSet<Gallery> = flower(p, r).unwrap().iter().map(|pt| pt.suite()).collect();
            ensure(images == at_r, || format!("rotation by {r} on the q={q} digon"))?;
        }
    }
    for q in [2, 3] {
        let d: DifferenceSet = singer_difference_set(q).unwrap().into_inner();
        let delta = d.delta();
        for r in (1..delta).filter(|&r| gcd(r.into(), delta.into()) == 1) {
            for x in 0..delta {
                let image = d.translate_scale(r, x).map_err(|e| e.to_string())?;
                ensure(verify_difference_set(image.elements(), delta).is_valid(), || format!("{r}D+{x}"))?;
            }
        }
    }
    for name in EXAMPLES {
        let g = example(name);
        for cycle in cycle_basis(&g.coxeter) {
            for n in 1..=g.q {
                let rest = telescoped_cycle_relator(&g, &cycle, n).map_err(|e| e.to_string())?;
                ensure(rest.is_empty(), || format!("{name}: cycle {cycle:?} n={n} leaves {rest:?}"))?;
                ensure(!cycle_relator(&g, &cycle, n).unwrap().is_empty(), || format!("{name}: empty relator"))?;
            }
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("difference-set golden", c1, Duration::from_millis(1)),
        ("unique class for q = 2, 3, 4", c2, Duration::from_secs(10)),
        ("suite goldens and counts", c3, Duration::from_secs(1)),
        ("polygon axioms", c4, Duration::from_secs(5)),
        ("coverings and mutants", c5, Duration::from_secs(5)),
        ("presentation goldens", c6, Duration::from_secs(1)),
        ("fundamental group orders", c7, Duration::from_secs(1)),
        ("non-isomorphic order-2 lattices", c8, Duration::from_secs(1)),
        ("gluing round trip", c9, Duration::from_secs(10)),
        ("property suites", c10, Duration::from_secs(30)),
    ];
    let mut failures = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let verdict = match &result {
            Ok(()) if elapsed <= budget => "PASS".to_string(),
            Ok(()) => format!("FAIL (over budget {budget:?})"),
            Err(e) => format!("FAIL ({e})"),
        };
        if !verdict.starts_with("PASS") {
            failures += 1;
        }
        println!("criterion {:>2} {name}: {verdict} in {elapsed:.3?}", i + 1);
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
