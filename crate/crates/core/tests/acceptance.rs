//! Acceptance suite: runs every exit criterion in sequence and prints one
//! PASS/FAIL line per criterion. Run with `--nocapture` to see the lines on
//! success.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use medial_core::abelian::AbelianGroup;
use medial_core::enumerate::{all_quasigroups, count_column_major, count_quasigroups, EnumerationSpec, Mode};
use medial_core::equations::{catalog_entry, pair_catalog, satisfies, single_catalog, CatalogEntry, Classification};
use medial_core::linearize::{
    classification_mismatches, derive_group, linearize_pair, linearize_single, relation_table_self_test,
    verify_relations, Convention,
};
use medial_core::{Automorphism, Exec, Limits, Mapping, QuasigroupTable};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn run(id: &'static str, budget: Option<Duration>, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = f();
    let elapsed = start.elapsed();
    let in_time = budget.is_none_or(|b| elapsed <= b);
    let detail = if in_time {
        detail
    } else {
        format!("{detail}; over time budget {budget:?}")
    };
    Outcome {
        id,
        pass: ok && in_time,
        detail,
        elapsed,
    }
}

/// Every bijection of `{0..n-1}`, lexicographic.
fn all_bijections(n: usize) -> Vec<Mapping> {
    use itertools::Itertools;
    (0..n).permutations(n).map(|p| Mapping::new(p).unwrap()).collect()
}

/// Automorphisms by scanning every bijection; independent of the basis search.
fn brute_force_automorphisms(g: &AbelianGroup) -> Vec<Mapping> {
    let n = g.order();
    all_bijections(n)
        .into_iter()
        .filter(|m| (0..n).all(|x| (0..n).all(|y| m.apply(g.add(x, y)) == g.add(m.apply(x), m.apply(y)))))
        .collect()
}

fn affine_maps(g: &AbelianGroup, auts: &[Mapping]) -> BTreeSet<Vec<usize>> {
    let n = g.order();
    auts.iter()
        .flat_map(|a| (0..n).map(move |k| (0..n).map(|x| g.add(a.apply(x), k)).collect::<Vec<_>>()))
        .collect()
}

fn groups_up_to(n: usize) -> Vec<AbelianGroup> {
    (1..=n).flat_map(AbelianGroup::all_of_order).collect()
}

/// Row-vector times 2×2 matrix over GF(2), on the labelling (0,0),(1,0),(0,1),(1,1) = 0..3.
fn gf2_matrix(m: [[usize; 2]; 2]) -> impl Fn(usize) -> usize {
    move |i| {
        let (x1, x2) = (i & 1, i >> 1);
        let y1 = (x1 * m[0][0] + x2 * m[1][0]) % 2;
        let y2 = (x1 * m[0][1] + x2 * m[1][1]) % 2;
        y1 | (y2 << 1)
    }
}

const EPS: [[usize; 2]; 2] = [[1, 0], [0, 1]];
const PHI2: [[usize; 2]; 2] = [[1, 0], [1, 1]];
const PHI3: [[usize; 2]; 2] = [[1, 1], [0, 1]];
const PHI4: [[usize; 2]; 2] = [[0, 1], [1, 0]];
const PHI5: [[usize; 2]; 2] = [[1, 1], [1, 0]];
const PHI6: [[usize; 2]; 2] = [[0, 1], [1, 1]];

fn example_op(a: [[usize; 2]; 2], b: [[usize; 2]; 2], c: usize) -> QuasigroupTable {
    let (fa, fb) = (gf2_matrix(a), gf2_matrix(b));
    QuasigroupTable::from_fn(4, |x, y| fa(x) ^ fb(y) ^ c).unwrap()
}

fn holds(label: &str, f: &QuasigroupTable, g: &QuasigroupTable) -> bool {
    let e = catalog_entry(label).unwrap();
    satisfies(&e.equation, &[("f", f), ("g", g)]).unwrap().holds()
}

fn criterion_1() -> (bool, String) {
    let single = single_catalog();
    let pair = pair_catalog();
    let computed = |c: &[CatalogEntry]| -> BTreeSet<String> {
        c.iter()
            .filter(|e| e.equation.is_belousov())
            .map(|e| e.label.clone())
            .collect()
    };
    let want_single: BTreeSet<String> = ["1-0", "1-00", "1-05", "1-06", "1-013", "1-014", "1-015", "1-016"]
        .map(String::from)
        .into();
    let want_pair: BTreeSet<String> = ["2-0", "2-00", "2-05", "2-06", "2-013", "2-014", "2-015", "2-016"]
        .map(String::from)
        .into();
    let ok = single.len() == 24
        && pair.len() == 24
        && computed(&single) == want_single
        && computed(&pair) == want_pair
        && single
            .iter()
            .chain(&pair)
            .all(|e| e.belousov == e.equation.is_belousov());
    (
        ok,
        format!(
            "{} + {} entries, Belousov sets {:?} / {:?}",
            single.len(),
            pair.len(),
            computed(&single),
            computed(&pair)
        ),
    )
}

fn criterion_2() -> (bool, String) {
    let f1 = example_op(PHI2, PHI3, 0);
    let f2 = example_op(PHI3, PHI2, 0);
    let f3 = example_op(EPS, PHI5, 0);
    let f4 = example_op(EPS, PHI6, 0);
    let para = holds("2-16", &f1, &f2) && !holds("2-1", &f1, &f2);
    let med = holds("2-1", &f3, &f4) && !holds("2-16", &f3, &f4);
    // the six listed matrices are exactly Aut(Z2×Z2)
    let v4 = AbelianGroup::product(&[2, 2]);
    let listed: BTreeSet<Vec<usize>> = [EPS, PHI2, PHI3, PHI4, PHI5, PHI6]
        .iter()
        .map(|&m| (0..4).map(gf2_matrix(m)).collect())
        .collect();
    let enumerated: BTreeSet<Vec<usize>> = v4
        .automorphisms()
        .unwrap()
        .iter()
        .map(|a| a.mapping().images().to_vec())
        .collect();
    let ok = para && med && listed == enumerated;
    (
        ok,
        format!(
            "(f1,f2) paramedial-not-medial={para}, (f3,f4) medial-not-paramedial={med}, Aut listing matches={}",
            listed == enumerated
        ),
    )
}

fn criterion_3() -> (bool, String) {
    let mut tables = all_quasigroups(3);
    let n3 = tables.len();
    tables.extend(all_quasigroups(4));
    let mismatches = classification_mismatches(&tables, Exec::default());
    (
        mismatches.is_empty() && n3 == 12 && tables.len() == 588,
        format!(
            "{} quasigroups x 24 entries, {} mismatches {:?}",
            tables.len(),
            mismatches.len(),
            mismatches.iter().take(5).collect::<Vec<_>>()
        ),
    )
}

/// Returns the pass flag, detail, and for each entry the conventions that held
/// on every satisfying instance.
fn criterion_4() -> (bool, String, Vec<(String, Vec<Convention>)>) {
    let tables = all_quasigroups(3);
    let entries: Vec<CatalogEntry> = pair_catalog()
        .into_iter()
        .filter(|e| matches!(e.classification, Classification::LinearPair(_)))
        .collect();
    let mut violations = 0;
    let mut satisfied_total = 0;
    let mut consistent = Vec::new();
    for entry in &entries {
        let rels = entry.classification.relations().unwrap();
        let mut common: BTreeSet<_> = [0usize, 1].into();
        for f in &tables {
            for g in &tables {
                if !satisfies(&entry.equation, &[("f", f), ("g", g)]).unwrap().holds() {
                    continue;
                }
                satisfied_total += 1;
                match linearize_pair(f, g, 0) {
                    Ok(pair) => {
                        let check = verify_relations(&pair, rels);
                        let held: BTreeSet<usize> = Convention::BOTH
                            .iter()
                            .enumerate()
                            .filter(|(_, &c)| check.holds(c))
                            .map(|(i, _)| i)
                            .collect();
                        if held.is_empty() {
                            violations += 1;
                        }
                        common = common.intersection(&held).copied().collect();
                    }
                    Err(_) => violations += 1,
                }
            }
        }
        if common.is_empty() {
            violations += 1;
        }
        consistent.push((
            entry.label.clone(),
            common.iter().map(|&i| Convention::BOTH[i]).collect(),
        ));
    }
    let ok = violations == 0 && entries.len() == 14;
    (
        ok,
        format!(
            "{} entries, {satisfied_total} satisfying pairs, {violations} violations",
            entries.len()
        ),
        consistent,
    )
}

/// Same check over affine pairs on Z2×Z2, where automorphisms do not commute,
/// so only the correct reading of the relation tables survives.
fn criterion_4_noncommuting_aut() -> Vec<(String, Vec<Convention>)> {
    let v4 = AbelianGroup::product(&[2, 2]);
    let auts = v4.automorphisms().unwrap();
    let mut ops = Vec::new();
    for a in &auts {
        for b in &auts {
            for c in [0, 3] {
                ops.push(QuasigroupTable::from_fn(4, |x, y| v4.add(v4.add(a.apply(x), b.apply(y)), c)).unwrap());
            }
        }
    }
    let entries: Vec<CatalogEntry> = pair_catalog()
        .into_iter()
        .filter(|e| e.classification.relations().is_some())
        .collect();
    let pairs: Vec<(usize, usize)> = (0..ops.len())
        .flat_map(|i| (0..ops.len()).map(move |j| (i, j)))
        .collect();
    Exec::default().map(&entries, |entry| {
        let rels = entry.classification.relations().unwrap();
        let mut held = [true, true];
        for &(i, j) in &pairs {
            if !satisfies(&entry.equation, &[("f", &ops[i]), ("g", &ops[j])])
                .unwrap()
                .holds()
            {
                continue;
            }
            let check = verify_relations(&linearize_pair(&ops[i], &ops[j], 0).unwrap(), rels);
            for (k, c) in Convention::BOTH.iter().enumerate() {
                held[k] &= check.holds(*c);
            }
        }
        let convs = Convention::BOTH
            .iter()
            .zip(held)
            .filter(|(_, h)| *h)
            .map(|(c, _)| *c)
            .collect();
        (entry.label.clone(), convs)
    })
}

/// Over every automorphism quadruple on Z2×Z2 with zero constants, counts how
/// often "equation holds" and "relations hold" disagree, per convention.
fn relation_equivalence_quadruples() -> Vec<(String, [usize; 2])> {
    let v4 = AbelianGroup::product(&[2, 2]);
    let auts = v4.automorphisms().unwrap();
    let op = |a: &Automorphism, b: &Automorphism| {
        QuasigroupTable::from_fn(4, |x, y| v4.add(a.apply(x), b.apply(y))).unwrap()
    };
    let mut quads = Vec::new();
    for a in &auts {
        for b in &auts {
            for c in &auts {
                for d in &auts {
                    quads.push((op(a, b), op(c, d)));
                }
            }
        }
    }
    let entries: Vec<CatalogEntry> = pair_catalog()
        .into_iter()
        .filter(|e| e.classification.relations().is_some())
        .collect();
    Exec::default().map(&entries, |entry| {
        let rels = entry.classification.relations().unwrap();
        let mut disagreements = [0usize; 2];
        for (f, g) in &quads {
            let eq = satisfies(&entry.equation, &[("f", f), ("g", g)]).unwrap().holds();
            let check = verify_relations(&linearize_pair(f, g, 0).unwrap(), rels);
            for (k, c) in Convention::BOTH.iter().enumerate() {
                disagreements[k] += usize::from(eq != check.holds(*c));
            }
        }
        (entry.label.clone(), disagreements)
    })
}

/// Searches Aut(Z2^3)^4 for quadruples where the two readings of an entry's
/// relation set disagree, and records which reading the equation follows.
/// Returns per label: (witnesses found, witnesses agreeing with right-to-left).
fn discriminating_witnesses() -> Vec<(String, usize, usize)> {
    use medial_core::linearize::Slot;
    let z = AbelianGroup::product(&[2, 2, 2]);
    let auts = z.automorphisms().unwrap();
    let entries: Vec<CatalogEntry> = pair_catalog()
        .into_iter()
        .filter(|e| e.classification.relations().is_some())
        .collect();
    Exec::default().map(&entries, |entry| {
        let rels = entry.classification.relations().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
        let (mut found, mut agree) = (0, 0);
        for _ in 0..3000 {
            if found >= 20 {
                break;
            }
            let pick = |r: &mut ChaCha8Rng| &auts[r.random_range(0..auts.len())];
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            for d in &auts {
                let slot = |s: Slot| match s {
                    Slot::Phi1 => a,
                    Slot::Psi1 => b,
                    Slot::Phi2 => c,
                    Slot::Psi2 => d,
                };
                // composite applied as word[0](word[1](x)) or word[1](word[0](x))
                let word = |w: [Slot; 2], rtl: bool, x: usize| {
                    let (outer, inner) = if rtl { (w[0], w[1]) } else { (w[1], w[0]) };
                    slot(outer).apply(slot(inner).apply(x))
                };
                let reading = |rtl: bool| {
                    rels.relations()
                        .iter()
                        .all(|r| (0..8).all(|x| word(r.lhs, rtl, x) == word(r.rhs, rtl, x)))
                };
                let (rtl, ltr) = (reading(true), reading(false));
                if rtl == ltr {
                    continue;
                }
                let f = QuasigroupTable::from_fn(8, |x, y| z.add(a.apply(x), b.apply(y))).unwrap();
                let g = QuasigroupTable::from_fn(8, |x, y| z.add(c.apply(x), d.apply(y))).unwrap();
                let eq = satisfies(&entry.equation, &[("f", &f), ("g", &g)]).unwrap().holds();
                found += 1;
                agree += usize::from(eq == rtl);
            }
        }
        (entry.label.clone(), found, agree)
    })
}

fn criterion_5() -> (bool, String) {
    let mut violations = 0usize;
    let mut checked = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut hol_v4 = None;
    for g in groups_up_to(8) {
        let n = g.order();
        let auts = brute_force_automorphisms(&g);
        let affine = affine_maps(&g, &auts);
        let enumerated: BTreeSet<Vec<usize>> = g
            .automorphisms()
            .unwrap()
            .iter()
            .map(|a| a.mapping().images().to_vec())
            .collect();
        let brute: BTreeSet<Vec<usize>> = auts.iter().map(|a| a.images().to_vec()).collect();
        violations += usize::from(enumerated != brute);

        let mut check_alpha = |alpha: &Mapping| {
            checked += 1;
            let hol = g.is_holomorphism(alpha);
            let is_affine = affine.contains(alpha.images());
            if hol != is_affine {
                return 1;
            }
            if hol {
                let d = g.decompose_holomorphism(alpha).unwrap();
                let ok = brute.contains(d.phi.mapping().images()) && (0..n).all(|x| d.apply(&g, x) == alpha.apply(x));
                return usize::from(!ok);
            }
            0
        };
        if n <= 4 {
            let bij = all_bijections(n);
            let mut hol_count = 0;
            for alpha in &bij {
                violations += check_alpha(alpha);
                hol_count += usize::from(g.is_holomorphism(alpha));
            }
            if g.canonical_form() == [2, 2] {
                hol_v4 = Some(hol_count);
            }
            // split identity over every bijection triple
            let mut split = 0;
            for a1 in &bij {
                for a2 in &bij {
                    for a3 in &bij {
                        if g.split_affine_identity(a1, a2, a3) {
                            split += 1;
                            if ![a1, a2, a3].iter().all(|a| g.is_holomorphism(a)) {
                                violations += 1;
                            }
                        }
                    }
                }
            }
            violations += usize::from(split != auts.len() * n * n);
        } else {
            let mut images: Vec<usize> = (0..n).collect();
            for _ in 0..10_000 {
                images.shuffle(&mut rng);
                violations += check_alpha(&Mapping::new(images.clone()).unwrap());
            }
            for a in &affine {
                violations += check_alpha(&Mapping::new(a.clone()).unwrap());
            }
            for _ in 0..500 {
                let phi = &auts[rng.random_range(0..auts.len())];
                let (k2, k3) = (rng.random_range(0..n), rng.random_range(0..n));
                let a2 = Mapping::from_fn(n, |x| g.add(phi.apply(x), k2)).unwrap();
                let a3 = Mapping::from_fn(n, |x| g.add(phi.apply(x), k3)).unwrap();
                let a1 = Mapping::from_fn(n, |x| g.add(phi.apply(x), g.add(k2, k3))).unwrap();
                if !g.split_affine_identity(&a1, &a2, &a3) || ![&a1, &a2, &a3].iter().all(|a| g.is_holomorphism(a)) {
                    violations += 1;
                }
                images.shuffle(&mut rng);
                let r = Mapping::new(images.clone()).unwrap();
                if g.split_affine_identity(&r, &a2, &a3) && !g.is_holomorphism(&r) {
                    violations += 1;
                }
            }
        }
    }
    let ok = violations == 0 && hol_v4 == Some(24);
    (
        ok,
        format!("{checked} bijections checked, {violations} violations, |Hol(Z2xZ2)| = {hol_v4:?}"),
    )
}

fn criterion_6() -> (bool, String) {
    let groups = groups_up_to(8);
    let mut failures = 0;
    let mut built = 0;
    for g in &groups {
        let auts = g.automorphisms().unwrap();
        let n = g.order();
        let cs: Vec<usize> = if n > 1 {
            vec![g.identity(), (g.identity() + 1) % n]
        } else {
            vec![g.identity()]
        };
        let cs = &cs;
        let combos: Vec<(&Automorphism, &Automorphism, usize)> = auts
            .iter()
            .flat_map(|p| auts.iter().flat_map(move |s| cs.iter().map(move |&c| (p, s, c))))
            .collect();
        built += combos.len();
        failures += Exec::default()
            .map(&combos, |&(p, s, c)| {
                let q = QuasigroupTable::from_fn(n, |x, y| g.add(g.add(p.apply(x), s.apply(y)), c)).unwrap();
                match linearize_single(&q, 0) {
                    Ok(rep) => usize::from(rep.to_table() != q),
                    Err(_) => 1,
                }
            })
            .into_iter()
            .sum::<usize>();
    }
    (
        failures == 0,
        format!(
            "{built} affine tables over {} groups, {failures} failures",
            groups.len()
        ),
    )
}

fn criterion_7() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut violations = 0;
    let mut runs = 0;
    for _ in 0..50 {
        let n = rng.random_range(4..=8);
        let candidates = AbelianGroup::all_of_order(n);
        let g = &candidates[rng.random_range(0..candidates.len())];
        let auts = g.automorphisms().unwrap();
        let p = &auts[rng.random_range(0..auts.len())];
        let s = &auts[rng.random_range(0..auts.len())];
        let c = rng.random_range(0..n);
        let q = QuasigroupTable::from_fn(n, |x, y| g.add(g.add(p.apply(x), s.apply(y)), c)).unwrap();
        for e in 0..n {
            runs += 1;
            match derive_group(&q, e) {
                Ok(h) if h.canonical_form() == g.canonical_form() => {}
                _ => violations += 1,
            }
        }
    }
    (
        violations == 0,
        format!("50 T-quasigroups, {runs} base points, {violations} violations"),
    )
}

fn criterion_8() -> (bool, String, Duration) {
    let expected = [1u64, 2, 12, 576, 161280];
    let mut rows = Vec::new();
    let mut cols = Vec::new();
    let mut order5 = Duration::ZERO;
    for n in 1..=5 {
        let start = Instant::now();
        rows.push(
            count_quasigroups(
                &EnumerationSpec::new(n, Mode::Count),
                &Limits::default(),
                Exec::default(),
            )
            .unwrap(),
        );
        if n == 5 {
            order5 = start.elapsed();
        }
        cols.push(count_column_major(n));
    }
    let ok = rows == expected && cols == expected && order5 < Duration::from_secs(30);
    (
        ok,
        format!("row-major {rows:?}, column-major {cols:?}, order-5 row-major run {order5:?}"),
        order5,
    )
}

fn criterion_9(identified: &[(String, Vec<Convention>)]) -> (bool, String) {
    let table = relation_table_self_test();
    let mut bad = Vec::new();
    for row in &table {
        let conv = identified
            .iter()
            .find(|(l, _)| *l == row.label)
            .map(|(_, c)| c.clone())
            .unwrap_or_default();
        let agree = row.matches.iter().any(|c| conv.contains(c));
        if !agree || !row.matches.contains(&Convention::RightToLeft) {
            bad.push(row.label.clone());
        }
    }
    let required = table.iter().filter(|r| r.label != "2-1" && r.label != "2-16").count();
    (
        bad.is_empty() && required == 14,
        format!("{} relation sets re-derived, disagreements {:?}", table.len(), bad),
    )
}

#[test]
fn acceptance() {
    let mut results = Vec::new();
    results.push(run("1 catalog fidelity", Some(Duration::from_secs(1)), criterion_1));
    results.push(run(
        "2 Z2xZ2 example reproduction",
        Some(Duration::from_secs(1)),
        criterion_2,
    ));
    results.push(run(
        "3 classification equivalence sweep",
        Some(Duration::from_secs(60)),
        criterion_3,
    ));

    let mut identified = Vec::new();
    results.push(run(
        "4 pair relation sets (order 3)",
        Some(Duration::from_secs(120)),
        || {
            let (ok, detail, conv) = criterion_4();
            identified = conv;
            (ok, detail)
        },
    ));
    // narrow the identified conventions with pairs whose automorphisms do not commute
    let strict = criterion_4_noncommuting_aut();
    let strict_ok = strict.iter().all(|(_, c)| !c.is_empty());
    for (label, convs) in identified.iter_mut() {
        if let Some((_, s)) = strict.iter().find(|(l, _)| l == label) {
            convs.retain(|c| s.contains(c));
        }
    }
    // medial and paramedial pairs are checked against the same data in criterion 9
    identified.extend(strict.iter().filter(|(l, _)| l == "2-1" || l == "2-16").cloned());
    println!("conventions consistent with every satisfying instance: {identified:?}");

    results.push(run("5 holomorphisms are affine maps", None, criterion_5));
    results.push(run("6 round-trip linearization", None, criterion_6));
    results.push(run("7 isotopic groups are isomorphic", None, criterion_7));
    results.push(run("8 enumeration oracle", None, || {
        let (ok, d, _) = criterion_8();
        (ok, d)
    }));
    let equivalence = relation_equivalence_quadruples();
    println!("equation vs relations disagreements [right-to-left, left-to-right] over Aut(Z2xZ2)^4: {equivalence:?}");
    let witnesses = discriminating_witnesses();
    println!("discriminating witnesses over Aut(Z2^3)^4 (label, found, agreeing with right-to-left): {witnesses:?}");
    let witnesses_ok =
        witnesses.iter().all(|(_, found, agree)| found == agree) && witnesses.iter().any(|(_, found, _)| *found > 0);
    let equivalence_ok = witnesses_ok && equivalence.iter().all(|(_, d)| d[0] == 0);
    results.push(run("9 relation table self-test", None, || {
        let (ok, d) = criterion_9(&identified);
        (ok && strict_ok && equivalence_ok, format!("{d}; equation follows the right-to-left reading on all Aut(Z2xZ2)^4 quadruples and Aut(Z2^3) witnesses: {equivalence_ok}"))
    }));

    for r in &results {
        println!(
            "[{}] criterion {} ({:.2?}): {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.elapsed,
            r.detail
        );
    }
    let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
