//! Acceptance suite: one test per shipped criterion, each ending in a
//! `criterion NN: PASS` line (run with `cargo test --test acceptance --
//! --nocapture` to see them). Expected values come from independent
//! oracles kept in this file: full sign-vector scans, per-subset closing
//! checks, pairwise line intersections, and closed-form counts.

use std::collections::HashSet;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::Vector3;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use polyspace::polygon::DEFAULT_CLOSURE_TOL;
use polyspace::{
    cobordism, enumerate_admissible, enumerate_admissible_threaded, is_admissible, polytope,
    Error, FixedPointKind, IndexSet, LengthVector, Pivot, Polygon, Rational,
};

fn lv(strs: &[&str]) -> LengthVector {
    LengthVector::from_strs(strs).unwrap()
}

fn rat(s: &str) -> Rational {
    Rational::from_str(s).unwrap()
}

/// Random positive rational with small numerator and denominator.
fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(1..=48), rng.gen_range(1..=6))
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> LengthVector {
    LengthVector::new((0..n).map(|_| random_rational(rng)).collect()).unwrap()
}

/// Random vector that is smooth, nonempty and has a bending pair.
fn random_smooth_nonempty(rng: &mut ChaCha8Rng, n: usize) -> LengthVector {
    loop {
        let r = random_vector(rng, n);
        if r.is_smooth() && r.is_nonempty() && r.first_unequal_pair().is_some() {
            return r;
        }
    }
}

// ---------------------------------------------------------------------------
// Independent oracles.
// ---------------------------------------------------------------------------

/// Full scan over all 2^n sign vectors, summing lcm-cleared weights from
/// scratch for every mask.
fn naive_is_smooth(r: &LengthVector) -> bool {
    let lcm = r
        .entries()
        .iter()
        .fold(BigInt::from(1), |acc, e| acc.lcm(e.denominator()));
    let weights: Vec<i128> = r
        .entries()
        .iter()
        .map(|e| {
            (e.numerator() * (&lcm / e.denominator()))
                .to_i128()
                .expect("oracle weights fit i128")
        })
        .collect();
    let n = weights.len();
    for mask in 0u64..(1 << n) {
        let mut sum = 0i128;
        for (i, w) in weights.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum += w;
            } else {
                sum -= w;
            }
        }
        if sum == 0 {
            return false;
        }
    }
    true
}

/// Per-subset evaluation of the three closing inequalities in plain rational
/// arithmetic.
fn naive_admissible_masks(r: &LengthVector) -> Vec<u32> {
    let n = r.n();
    let mut out = Vec::new();
    for mask in 0u32..(1 << (n - 2)) {
        let set = IndexSet::from_mask(mask, n).unwrap();
        let mut signed = Rational::zero();
        for i in 1..=n - 2 {
            if set.contains(i) {
                signed = signed + r.get(i);
            } else {
                signed = signed - r.get(i);
            }
        }
        let a = r.get(n - 1);
        let b = r.get(n);
        let c1 = (&signed + a) - b;
        let c2 = (&signed - a) + b;
        let c3 = (a + b) - &signed;
        if c1.is_positive() && c2.is_positive() && c3.is_positive() {
            out.push(mask);
        }
    }
    out
}

fn binomial(n: u64, k: u64) -> i64 {
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (1..=n).collect(), &mut out);
    out
}

fn max_edge_distance(p: &Polygon, q: &Polygon) -> f64 {
    p.edges()
        .iter()
        .zip(q.edges())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// A generic (bent, usually non-planar) polygon with the given lengths.
fn random_polygon(rng: &mut ChaCha8Rng, r: &LengthVector) -> Polygon {
    let mut p = Polygon::planar_fan(r).unwrap();
    let n = p.n();
    for _ in 0..3 {
        let k = rng.gen_range(1..=n - 3);
        let theta = rng.gen_range(0.3..std::f64::consts::TAU - 0.3);
        if p.diagonals()[k - 1].1 > 0.1 {
            p = p.bend_action(k, theta).unwrap();
        }
    }
    p
}

// ---------------------------------------------------------------------------
// Criteria.
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_golden_pentagon_suite() {
    let start = Instant::now();
    let cases: [(&[&str], i64); 7] = [
        (&["1", "1.5", "4", "1", "2"], 1),
        (&["0.5", "2", "4", "1", "2"], 0),
        (&["2", "0.5", "4", "0.5", "2.5"], -1),
        (&["2", "3.5", "4", "1", "2"], -2),
        (&["2", "3.5", "4", "3.5", "2.5"], -3),
        (&["5", "1", "4", "5", "1"], 0),
        (&["1", "1.5", "3.5", "3", "3.5"], 0),
    ];
    for (strs, expected) in cases {
        let class = cobordism::cobordism_class(&lv(strs), None).unwrap();
        assert_eq!(class.coefficient, expected, "r = {strs:?}");
        assert_eq!(class.complex_dimension, 2);
    }

    let empty = cobordism::cobordism_class(&lv(&["5", "1", "4", "5", "1"]), None).unwrap();
    assert_eq!(empty.family_size(), 0);
    assert!(empty.is_null);

    let mixed = cobordism::cobordism_class(&lv(&["1", "1.5", "3.5", "3", "3.5"]), None).unwrap();
    let hist: Vec<(u32, u64)> = mixed.summand_histogram.into_iter().collect();
    assert_eq!(hist, vec![(1, 1), (2, 2), (3, 1)]);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "golden suite took {elapsed:?}");
    println!("criterion 01 (golden pentagon suite, {elapsed:?}): PASS");
}

#[test]
fn criterion_02_equilateral_limit() {
    let eps = rat("1/1000");
    for m in 1u64..=10 {
        let n = (2 * m + 1) as usize;
        let expected = if (m + 1) % 2 == 0 {
            binomial(2 * m - 1, m)
        } else {
            -binomial(2 * m - 1, m)
        };
        let start = Instant::now();
        let class = cobordism::perturbed_equilateral_check(n, &eps).unwrap();
        let elapsed = start.elapsed();
        assert_eq!(class.coefficient, expected, "n = {n}");
        assert_eq!(
            class.coefficient,
            cobordism::equilateral_class(n).unwrap().coefficient
        );
        if n == 21 {
            assert!(elapsed.as_secs_f64() < 5.0, "n = 21 took {elapsed:?}");
        }
    }
    println!("criterion 02 (equilateral limit, m = 1..10): PASS");
}

#[test]
fn criterion_03_even_n_vanishing() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..100 {
        let n = [4, 6, 8][trial % 3];
        let r = random_smooth_nonempty(&mut rng, n);
        let class = cobordism::cobordism_class(&r, None).unwrap();
        assert!(class.is_null, "even n = {n} not null for r = {r}");
    }
    println!("criterion 03 (even-n vanishing, 100 vectors): PASS");
}

#[test]
fn criterion_04_permutation_and_pivot_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);

    // n = 5: all 120 permutations, all valid pivots.
    let perms5 = permutations(5);
    for _ in 0..20 {
        let r = random_smooth_nonempty(&mut rng, 5);
        let reference = cobordism::cobordism_class(&r, None).unwrap().coefficient;
        for perm in &perms5 {
            let shuffled = r.permuted(perm).unwrap();
            assert_eq!(
                cobordism::cobordism_class(&shuffled, None).unwrap().coefficient,
                reference,
                "r = {r}, perm = {perm:?}"
            );
            for i in 1..=5 {
                for j in i + 1..=5 {
                    if shuffled.get(i) != shuffled.get(j) {
                        let pivot = Pivot::new(i, j).unwrap();
                        let got = cobordism::cobordism_class(&shuffled, Some(pivot))
                            .unwrap()
                            .coefficient;
                        assert_eq!(got, reference, "r = {shuffled}, pivot = ({i}, {j})");
                    }
                }
            }
        }
    }

    // n = 7 and 9: 50 sampled permutations each.
    for n in [7usize, 9] {
        for _ in 0..10 {
            let r = random_smooth_nonempty(&mut rng, n);
            let reference = cobordism::cobordism_class(&r, None).unwrap().coefficient;
            for _ in 0..50 {
                let mut perm: Vec<usize> = (1..=n).collect();
                perm.shuffle(&mut rng);
                let shuffled = r.permuted(&perm).unwrap();
                assert_eq!(
                    cobordism::cobordism_class(&shuffled, None).unwrap().coefficient,
                    reference,
                    "n = {n}, perm = {perm:?}"
                );
            }
        }
    }
    println!("criterion 04 (permutation/pivot invariance at n = 5, 7, 9): PASS");
}

#[test]
fn criterion_05_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    // Gray-code family vs per-subset closing checks, n <= 12.
    for trial in 0..50 {
        let n = 5 + trial % 8; // 5..=12
        let r = random_vector(&mut rng, n);
        let family = enumerate_admissible(&r).unwrap();
        let masks: Vec<u32> = family.sets.iter().map(|s| s.mask()).collect();
        assert_eq!(masks, naive_admissible_masks(&r), "r = {r}");
    }

    // Meet-in-the-middle smoothness vs the full 2^n scan, n <= 18.
    for trial in 0..50 {
        let n = 6 + trial % 13; // 6..=18
        let r = if trial % 2 == 0 {
            random_vector(&mut rng, n)
        } else {
            // Force a wall: the last side balances a random signed sum.
            loop {
                let head = random_vector(&mut rng, n - 1);
                let mut sum = Rational::zero();
                for e in head.entries() {
                    if rng.gen_bool(0.5) {
                        sum = sum + e;
                    } else {
                        sum = sum - e;
                    }
                }
                if !sum.is_zero() {
                    let mut entries = head.entries().to_vec();
                    entries.push(sum.abs());
                    break LengthVector::new(entries).unwrap();
                }
            }
        };
        assert_eq!(r.is_smooth(), naive_is_smooth(&r), "r = {r}");
    }
    println!("criterion 05 (oracle equivalence: enumeration and smoothness): PASS");
}

#[test]
fn criterion_06_bending_dynamics() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..100 {
        let n = if trial % 2 == 0 { 5 } else { 6 };
        let r = random_smooth_nonempty(&mut rng, n);
        let p = random_polygon(&mut rng, &r);
        // A diagonal long enough for a well-conditioned period.
        let k = {
            let candidates: Vec<usize> = (1..=n - 3)
                .filter(|&k| p.diagonals()[k - 1].1 > 0.1)
                .collect();
            if candidates.is_empty() {
                continue;
            }
            candidates[rng.gen_range(0..candidates.len())]
        };
        let len = p.diagonals()[k - 1].1;
        let period = std::f64::consts::TAU / len;

        let looped = p.bend_flow(k, period).unwrap();
        assert!(
            max_edge_distance(&p, &looped) <= 1e-9,
            "period residual too large for r = {r}, k = {k}"
        );

        let sides = p.side_lengths().to_vec();
        let diags = p.diagonal_lengths();
        for step in 0..64 {
            let t = period * step as f64 / 64.0;
            let q = p.bend_flow(k, t).unwrap();
            assert!(q.closure_residual() <= 1e-9);
            for (a, b) in sides.iter().zip(q.side_lengths()) {
                assert!((a - b).abs() <= 1e-9);
            }
            for (a, b) in diags.iter().zip(q.diagonal_lengths()) {
                assert!((a - b).abs() <= 1e-9, "diagonal drift at t = {t}");
            }
            assert!(q.check_gc(), "closing inequalities fail at t = {t}");
        }
    }
    println!("criterion 06 (bending dynamics on 100 random polygons): PASS");
}

#[test]
fn criterion_07_fixed_points() {
    let golden: [&[&str]; 7] = [
        &["1", "1.5", "4", "1", "2"],
        &["0.5", "2", "4", "1", "2"],
        &["2", "0.5", "4", "0.5", "2.5"],
        &["2", "3.5", "4", "1", "2"],
        &["2", "3.5", "4", "3.5", "2.5"],
        &["5", "1", "4", "5", "1"],
        &["1", "1.5", "3.5", "3", "3.5"],
    ];
    for strs in golden {
        let r = lv(strs);
        let n = r.n();
        let family = enumerate_admissible(&r).unwrap();

        // Isolated fixed points: model construction round-trips.
        for &set in &family.sets {
            let p = Polygon::type1_model(&r, set).unwrap();
            match p.classify_fixed(1e-9) {
                FixedPointKind::TypeI { forward } => assert_eq!(forward, set.indices()),
                other => panic!("expected type I for I = {set}, got {other:?}"),
            }
            let moved = p.bend_action(n - 3, 1.234).unwrap();
            assert!(
                max_edge_distance(&p, &moved) <= 1e-12,
                "type I model moved under bending, I = {set}"
            );
        }

        // Fixed submanifolds: collinear-pair polygons move only by a global
        // rotation.
        let pivot = Pivot::new(4, 5).unwrap();
        let a = r.get(4).to_f64();
        let b = r.get(5).to_f64();
        for reduced in cobordism::type2_submanifolds(&r, pivot).unwrap() {
            let c = reduced.get(reduced.n()).to_f64();
            let base = Polygon::planar_fan(&reduced).unwrap();
            let w = *base.edges().last().unwrap();
            let (x, y) = if (c - (a + b)).abs() < 1e-12 {
                (a / c, b / c)
            } else if (c - (a - b)).abs() < 1e-12 {
                (a / c, -b / c)
            } else {
                (-a / c, b / c)
            };
            let mut edges: Vec<Vector3<f64>> = base.edges()[..base.n() - 1].to_vec();
            edges.push(x * w);
            edges.push(y * w);
            let p = Polygon::new(edges, DEFAULT_CLOSURE_TOL).unwrap();
            assert_eq!(p.classify_fixed(1e-9), FixedPointKind::TypeII);
            for theta in [std::f64::consts::PI / 7.0, 1.0, 3.0] {
                let moved = p.bend_action(n - 3, theta).unwrap();
                assert!(
                    p.so3_equivalent(&moved, 1e-9).unwrap(),
                    "type II class moved, r = {r}, theta = {theta}"
                );
            }
        }
    }
    println!("criterion 07 (fixed points of the golden examples): PASS");
}

#[test]
fn criterion_08_symplectic_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let r = random_smooth_nonempty(&mut rng, 5);
        let p = random_polygon(&mut rng, &r);
        let raw = |rng: &mut ChaCha8Rng| -> Vec<Vector3<f64>> {
            (0..5)
                .map(|_| {
                    Vector3::new(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    )
                })
                .collect()
        };
        let u = p.project_tangent(&raw(&mut rng));
        let v = p.project_tangent(&raw(&mut rng));
        assert!(p.tangent_check(&u, 1e-9));
        assert!(p.tangent_check(&v, 1e-9));

        let jju = p.j_op(&p.j_op(&u));
        for j in 0..5 {
            assert!((jju[j] + u[j]).norm() <= 1e-9, "J^2 residual at slot {j}");
        }
        assert!((p.omega(&u, &v) + p.omega(&v, &u)).abs() <= 1e-9);
        assert!((p.omega(&u, &v) - p.inner(&u, &p.j_op(&v))).abs() <= 1e-9);
    }
    println!("criterion 08 (symplectic identities on 100 tangent pairs): PASS");
}

#[test]
fn criterion_09_polytope_vertices() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    // Independent oracle: pairwise line intersections filtered by
    // feasibility must reproduce the clipper's vertex set exactly.
    fn pairwise_vertices(planes: &[polytope::HalfPlane; 7]) -> HashSet<(Rational, Rational)> {
        let mut out = HashSet::new();
        for i in 0..planes.len() {
            for j in i + 1..planes.len() {
                if let Some(p) = planes[i].line_intersection(&planes[j]) {
                    if planes.iter().all(|hp| hp.contains(&p)) {
                        out.insert(p);
                    }
                }
            }
        }
        out
    }

    type Expectation = (&'static [&'static str], &'static [(&'static str, &'static str)]);
    let expectations: [Expectation; 2] = [
        (
            &["1", "1.5", "4", "1", "2"],
            &[("1", "3"), ("5/2", "3/2"), ("5/2", "3")],
        ),
        (
            &["2", "0.5", "4", "0.5", "2.5"],
            &[
                ("3/2", "5/2"),
                ("2", "2"),
                ("5/2", "2"),
                ("5/2", "3"),
                ("3/2", "3"),
            ],
        ),
    ];

    for (strs, expected) in expectations {
        let r = lv(strs);
        let planes = polytope::halfplanes(&r).unwrap();
        let poly = polytope::intersect(&planes).unwrap();
        let expected: Vec<(Rational, Rational)> =
            expected.iter().map(|(x, y)| (rat(x), rat(y))).collect();
        assert_eq!(poly.vertices, expected, "canonical order for r = {r}");

        let oracle = pairwise_vertices(&planes);
        let got: HashSet<(Rational, Rational)> = poly.vertices.iter().cloned().collect();
        assert_eq!(got, oracle, "pairwise oracle mismatch for r = {r}");

        // 1000 random interior points: rational convex combinations of the
        // vertices satisfy all seven constraints exactly.
        let m = poly.vertices.len();
        for _ in 0..1000 {
            let weights: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=100)).collect();
            let total: i64 = weights.iter().sum();
            let total = Rational::from_integer(total);
            let mut x = Rational::zero();
            let mut y = Rational::zero();
            for (w, (vx, vy)) in weights.iter().zip(&poly.vertices) {
                let w = Rational::from_integer(*w);
                x = x + &w * vx;
                y = y + &w * vy;
            }
            let p = (&x / &total, &y / &total);
            for (i, hp) in planes.iter().enumerate() {
                assert!(hp.contains(&p), "interior point violates plane {i}");
            }
        }
    }
    println!("criterion 09 (polytope vertices, oracle + 1000 interior points each): PASS");
}

#[test]
fn criterion_10_performance_at_n_30() {
    // (32/31, 33/31, ..., 61/31): odd integer total after clearing
    // denominators, hence smooth; far from empty.
    let entries: Vec<Rational> = (1..=30).map(|i| Rational::new(31 + i, 31)).collect();
    let r = LengthVector::new(entries).unwrap();
    assert!(r.is_smooth() && r.is_nonempty());

    let start = Instant::now();
    let single = cobordism::cobordism_class_threaded(&r, None, 1).unwrap();
    let single_time = start.elapsed();
    assert!(
        single_time.as_secs_f64() < 10.0,
        "single-threaded sweep took {single_time:?}"
    );

    let start = Instant::now();
    let parallel = cobordism::cobordism_class_threaded(&r, None, 8).unwrap();
    let parallel_time = start.elapsed();
    assert!(
        parallel_time.as_secs_f64() < 3.0,
        "8-way sweep took {parallel_time:?}"
    );

    assert_eq!(single, parallel, "thread count changed the class");
    // The family itself is thread-count independent as well.
    let fam1 = enumerate_admissible_threaded(&r, 1).unwrap();
    let fam8 = enumerate_admissible_threaded(&r, 8).unwrap();
    assert_eq!(fam1, fam8);
    println!(
        "criterion 10 (n = 30 sweep: single {single_time:?}, 8-way {parallel_time:?}): PASS"
    );
}

// ---------------------------------------------------------------------------
// Cross-checks tying the golden examples to single-set evaluation.
// ---------------------------------------------------------------------------

#[test]
fn golden_single_set_checks() {
    let r = lv(&["1", "1.5", "4", "1", "2"]);
    assert!(is_admissible(&r, IndexSet::from_indices(&[3], 5).unwrap()).unwrap());
    assert!(!is_admissible(&r, IndexSet::from_indices(&[1, 2], 5).unwrap()).unwrap());

    let r = lv(&["5", "1", "4", "5", "1"]);
    assert!(!is_admissible(&r, IndexSet::from_indices(&[2, 3], 5).unwrap()).unwrap());

    // Wall errors carry the witness partition.
    match cobordism::cobordism_class(&lv(&["1", "1", "1", "1"]), None) {
        Err(Error::NotSmooth(partition)) => assert!(partition.contains(&1)),
        other => panic!("expected a wall error, got {other:?}"),
    }
}
