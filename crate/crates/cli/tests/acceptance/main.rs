//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Exact series identities are integer equalities at the stated order;
//! only the floating-point duality checks carry a tolerance (1e-9).
//! Run with `cargo test -p tindex-cli --test acceptance -- --nocapture`.

mod oracle;

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tindex_core::indexer::{
    check_quotient_relations, dgg_index, index_monomial, SummationOptions,
};
use tindex_core::pachner::{build_move_map, verify_index_compatibility, MoveDescriptor};
use tindex_core::qtorus::{omega, ExponentVector, TorusElement};
use tindex_core::tetindex::{
    j_degree, j_index, pentagon_sum, quadratic_sum, tet_index, tet_index_numeric, Charges, Triple,
};
use tindex_core::triangulation::ValidationError;
use tindex_core::{expr, HalfExp, QSeries, Triangulation};

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn fig8() -> Triangulation {
    let text = std::fs::read_to_string(fixture("fig8.json")).unwrap();
    Triangulation::load_and_validate(&text).unwrap()
}

fn fig8_json() -> String {
    std::fs::read_to_string(fixture("fig8.json")).unwrap()
}

fn run_binary(args: &[&str]) -> (String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_tindex"))
        .args(args)
        .output()
        .expect("binary runs");
    let elapsed = start.elapsed();
    assert!(
        out.status.success(),
        "tindex {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    (String::from_utf8(out.stdout).unwrap(), elapsed)
}

fn series_after(output: &str, label: &str) -> QSeries {
    let line = output
        .lines()
        .find(|l| l.starts_with(label))
        .unwrap_or_else(|| panic!("no line starting with {label:?} in {output}"));
    QSeries::parse(line.split(" = ").nth(1).unwrap()).unwrap()
}

fn assert_even_coeffs(s: &QSeries, expected: &[(i64, i64)], below: HalfExp) {
    for h in -below..below {
        let want = expected.iter().find(|&&(e, _)| 2 * e == h).map_or(0, |&(_, c)| c);
        let got = s.coeff(h).expect("within order");
        assert_eq!(
            i64::try_from(&got).unwrap(),
            want,
            "coefficient of q^({h}/2)"
        );
    }
}

const KB: &str = "-q^(-1/2)*Z1^-1*Zpp2 - q^(-1/2)*Zpp1*Z2^-1 - q^(-1/2)*Zpp1*Zpp2";

#[test]
fn criterion_01_fig8_kb_series() {
    let (out, elapsed) = run_binary(&["example", "fig8-kb", "--order", "18"]);
    let s = series_after(&out, "-q^(1/2)*I(K_b)");
    assert_even_coeffs(
        &s,
        &[(1, -3), (2, -1), (3, 7), (4, 15), (5, 22), (6, 11), (7, -11), (8, -60)],
        18,
    );
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!("ACCEPTANCE 1 (4_1 K_b series, exact through q^8): PASS in {elapsed:?}");
}

#[test]
fn criterion_02_fig8_chirality_series() {
    let (out, elapsed) = run_binary(&["example", "fig8-kb", "--order", "18"]);
    let s = series_after(&out, "-q^(-1/2)*I(iota K_b)");
    assert_even_coeffs(
        &s,
        &[(0, 1), (1, -3), (2, -6), (3, -1), (4, 9), (5, 28), (6, 39), (7, 45), (8, 20)],
        18,
    );
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!("ACCEPTANCE 2 (4_1 chirality series, exact through q^8): PASS in {elapsed:?}");
}

#[test]
fn criterion_03_j_identity_suite() {
    let start = Instant::now();
    let order: HalfExp = 16; // q^8

    // S3 symmetry
    for a in -3..=3i64 {
        for b in -3..=3i64 {
            for c in -3..=3i64 {
                let base = j_index(Triple::new(a, b, c), order);
                let perms =
                    [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)];
                for (x, y, z) in perms {
                    let p = j_index(Triple::new(x, y, z), order);
                    assert!(
                        base.eq_to_order(&p, order).unwrap(),
                        "S3 failure at ({a},{b},{c}) vs ({x},{y},{z})"
                    );
                }
            }
        }
    }

    // translation J(a-s,b-s,c-s) = (-q^{1/2})^s J(a,b,c)
    for s in -2..=2i64 {
        for a in -3..=3i64 {
            for b in -3..=3i64 {
                for c in -3..=3i64 {
                    let lhs = j_index(Triple::new(a - s, b - s, c - s), order);
                    let mut rhs = j_index(Triple::new(a, b, c), order - s).shift(s);
                    if s.rem_euclid(2) == 1 {
                        rhs = rhs.neg();
                    }
                    assert!(
                        lhs.eq_to_order(&rhs, order).unwrap(),
                        "translation failure at ({a},{b},{c}), s={s}"
                    );
                }
            }
        }
    }

    // q-difference q^{(a-b)/2} J(a,b,c-1) + q^{(c-b)/2} J(a+1,b,c) = J(a,b,c)
    for a in -3..=3i64 {
        for b in -3..=3i64 {
            for c in -3..=3i64 {
                let t1 = j_index(Triple::new(a, b, c - 1), order - (a - b)).shift(a - b);
                let t2 = j_index(Triple::new(a + 1, b, c), order - (c - b)).shift(c - b);
                let rhs = j_index(Triple::new(a, b, c), order);
                assert!(
                    t1.add(&t2).eq_to_order(&rhs, order).unwrap(),
                    "q-difference failure at ({a},{b},{c})"
                );
            }
        }
    }

    // pentagon, 20 seeded tuples in {-1,0,1}^6
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..20 {
        let v: Vec<i64> = (0..6).map(|_| rng.gen_range(-1..=1)).collect();
        let (a, b, c, d, e, f) = (v[0], v[1], v[2], v[3], v[4], v[5]);
        let lhs = pentagon_sum(a, b, c, d, e, f, order);
        let rhs = j_index(Triple::new(a, b, c), order + 4)
            .mul(&j_index(Triple::new(d, e, f), order + 4));
        assert!(
            lhs.eq_to_order(&rhs.truncate(order), order).unwrap(),
            "pentagon failure at ({a},{b},{c},{d},{e},{f})"
        );
    }

    // quadratic: q^{-a} delta_{a,b}
    for a in -2..=2i64 {
        for b in -2..=2i64 {
            for c in -2..=2i64 {
                for d in -2..=2i64 {
                    let got = quadratic_sum(a, b, c, d, order);
                    let want = if a == b {
                        QSeries::monomial(1.into(), -2 * a, order)
                    } else {
                        QSeries::zero(order)
                    };
                    assert!(
                        got.eq_to_order(&want, order).unwrap(),
                        "quadratic failure at ({a},{b},{c},{d})"
                    );
                }
            }
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("ACCEPTANCE 3 (J identity suite to q^8): PASS in {elapsed:?}");
}

#[test]
fn criterion_04_degree_formula() {
    for a in -4..=4i64 {
        for b in -4..=4i64 {
            for c in -4..=4i64 {
                let t = Triple::new(a, b, c);
                let d = j_degree(t);
                let s = j_index(t, d + 2);
                assert_eq!(s.min_exp(), Some(d), "degree failure at ({a},{b},{c})");
            }
        }
    }
    println!("ACCEPTANCE 4 (degree formula, |a|,|b|,|c| <= 4): PASS");
}

#[test]
fn criterion_05_duality() {
    for m in -2..=2i64 {
        for e in -2..=2i64 {
            let lhs = tet_index_numeric(Charges { m, e }, 2.5, 1e-12).unwrap();
            let series = tet_index(Charges { m: -m, e: -e }, 90);
            let rhs = series.eval_sqrt_q(0.4f64.sqrt());
            assert!(
                (lhs - rhs).abs() < 1e-9,
                "duality failure at ({m},{e}): {lhs} vs {rhs}"
            );
        }
    }
    println!("ACCEPTANCE 5 (duality at q=2.5 vs q=0.4, tol 1e-9): PASS");
}

#[test]
fn criterion_06_quotient_relations() {
    let t = fig8();
    let opts = SummationOptions::with_order(12); // q^6
    let report = check_quotient_relations(&t, &ExponentVector::zeros(2), &opts).unwrap();
    assert!(report.all_pass(), "S0 = 0: {:?}", report.checks);

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for trial in 0..10 {
        let s0 = ExponentVector::new((0..6).map(|_| rng.gen_range(-2..=2)).collect());
        let report = check_quotient_relations(&t, &s0, &opts).unwrap();
        assert!(report.all_pass(), "trial {trial} S0 = {s0:?}: {:?}", report.checks);
    }

    // negative control: corrupt the dependent edge row; the Lagrangian and
    // central relations still hold but the edge relation must fail
    let bad = Triangulation::from_parts_unchecked(
        "fig8-corrupt".into(),
        2,
        1,
        vec![vec![2, 1, 0, 2, 1, 0], vec![0, 1, 2, 0, 2, 1]],
        vec![vec![1, 0, 0, -1, 0, 0]],
        vec![vec![0, 0, 1, 0, 0, -1]],
        vec![0],
    );
    let report = check_quotient_relations(&bad, &ExponentVector::zeros(2), &opts).unwrap();
    let edge_fail = report.checks.iter().any(|c| c.label.starts_with("edge") && !c.pass);
    let lagr_ok = report
        .checks
        .iter()
        .filter(|c| c.label.starts_with("lagrangian"))
        .all(|c| c.pass);
    assert!(edge_fail, "corrupted edge row must fail the edge relation");
    assert!(lagr_ok, "Lagrangian relations are insensitive to edge data");
    println!("ACCEPTANCE 6 (quotient relations at q^6, with negative control): PASS");
}

#[test]
fn criterion_07_validation_and_corruptions() {
    let clean = fig8_json();
    assert!(Triangulation::load_and_validate(&clean).is_ok());

    let parsed: serde_json::Value = serde_json::from_str(&clean).unwrap();

    // every single-entry corruption of an edge row is caught, with
    // NegativeQuadCount taking precedence when the entry goes negative
    for row in 0..2 {
        for col in 0..6 {
            for delta in [-1i64, 1] {
                let mut doc = parsed.clone();
                let entry = &mut doc["edge_rows"][row][col];
                let old = entry.as_i64().unwrap();
                *entry = serde_json::Value::from(old + delta);
                let err = Triangulation::load_and_validate(&doc.to_string())
                    .expect_err("corruption must be caught");
                match err {
                    ValidationError::NegativeQuadCount { .. } => {
                        assert!(old + delta < 0, "negative report only for negative entries")
                    }
                    ValidationError::SymplecticViolation { .. } => {}
                    other => panic!("edge corruption ({row},{col},{delta}): unexpected {other}"),
                }
            }
        }
    }

    // every single-entry corruption of a peripheral row breaks a pairing
    for key in ["meridian_rows", "longitude_rows"] {
        for col in 0..6 {
            for delta in [-1i64, 1] {
                let mut doc = parsed.clone();
                let entry = &mut doc[key][0][col];
                let old = entry.as_i64().unwrap();
                *entry = serde_json::Value::from(old + delta);
                let err = Triangulation::load_and_validate(&doc.to_string())
                    .expect_err("corruption must be caught");
                assert!(
                    matches!(err, ValidationError::SymplecticViolation { .. }),
                    "{key}[{col}]{delta:+}: unexpected {err}"
                );
            }
        }
    }

    // targeted multi-entry corruptions for the remaining error names
    let doubled = clean
        .replace("[2, 1, 0, 2, 1, 0]", "[4, 2, 0, 4, 2, 0]")
        .replace("[0, 1, 2, 0, 1, 2]", "[0, 2, 4, 0, 2, 4]");
    assert!(matches!(
        Triangulation::load_and_validate(&doubled),
        Err(ValidationError::ColumnSumViolation { .. })
    ));
    let flat = clean
        .replace("[2, 1, 0, 2, 1, 0]", "[1, 1, 1, 1, 1, 1]")
        .replace("[0, 1, 2, 0, 1, 2]", "[1, 1, 1, 1, 1, 1]")
        .replace("\"independent_edges\": [0],", "");
    assert!(matches!(
        Triangulation::load_and_validate(&flat),
        Err(ValidationError::RankDeficient { .. })
    ));
    assert!(matches!(
        Triangulation::load_and_validate(""),
        Err(ValidationError::ParseError(_))
    ));

    println!("ACCEPTANCE 7 (fixture validation and corruption detection): PASS");
}

#[test]
fn criterion_08_independent_edge_invariance() {
    let order: HalfExp = 16; // q^8
    let opts = SummationOptions::with_order(order);
    let clean = fig8_json();

    let probes = [
        ExponentVector::zeros(2),
        ExponentVector::new(vec![0, 0, 1, 0, 0, 1]),
        ExponentVector::new(vec![-1, 0, 0, 0, 0, 1]),
    ];
    let with_edges = |idx: &str| -> Triangulation {
        let doc = clean.replace("\"independent_edges\": [0],", &format!(
            "\"independent_edges\": [{idx}],"
        ));
        Triangulation::load_and_validate(&doc).unwrap()
    };
    let t0 = with_edges("0");
    let t1 = with_edges("1");
    for s0 in &probes {
        let a = index_monomial(&t0, s0, &opts).unwrap().series;
        let b = index_monomial(&t1, s0, &opts).unwrap().series;
        assert!(a.eq_to_order(&b, order).unwrap(), "2-tet reselection at {s0:?}");
    }

    // the 3-tetrahedron partner offers genuine permutations and reselections
    let text = std::fs::read_to_string(fixture("fig8_3tet.json")).unwrap();
    let base = Triangulation::load_and_validate(&text).unwrap();
    let probe = ExponentVector::zeros(3);
    let reference = index_monomial(&base, &probe, &opts).unwrap().series;
    for choice in ["[1, 0]", "[0, 2]", "[2, 0]", "[1, 2]", "[2, 1]"] {
        let doc = text.replace("\"independent_edges\": [0, 1],", &format!(
            "\"independent_edges\": {choice},"
        ));
        let t = Triangulation::load_and_validate(&doc).unwrap();
        let s = index_monomial(&t, &probe, &opts).unwrap().series;
        assert!(s.eq_to_order(&reference, order).unwrap(), "3-tet choice {choice}");
    }
    println!("ACCEPTANCE 8 (independent-edge invariance to q^8): PASS");
}

#[test]
fn criterion_09_pachner_compatibility() {
    let start = Instant::now();
    let desc = MoveDescriptor::from_file(fixture("fig8_move.json").as_ref()).unwrap();
    let map = build_move_map(&desc).unwrap();

    // omega preservation on all 36 generator pairs of the move region
    for i in 0..6usize {
        let ui = ExponentVector::unit(2, i / 3, i % 3);
        for j in 0..6usize {
            let uj = ExponentVector::unit(2, j / 3, j % 3);
            assert_eq!(
                omega(&map.apply_vector(&ui).unwrap(), &map.apply_vector(&uj).unwrap()).unwrap(),
                omega(&ui, &uj).unwrap(),
                "omega pair ({i},{j})"
            );
        }
    }

    let samples = vec![
        ("unit".to_string(), TorusElement::unit(2)),
        ("qtr(K_b)".to_string(), expr::parse_element(KB, 2).unwrap()),
    ];
    let opts = SummationOptions::with_order(10); // q^5
    let report = verify_index_compatibility(&desc, &map, &samples, &opts).unwrap();
    assert!(report.all_pass(), "{:?}", report.checks);

    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!("ACCEPTANCE 9 (3-2 move compatibility at q^5): PASS in {elapsed:?}");
}

#[test]
fn criterion_10_oracle_agreement() {
    let order: HalfExp = 14; // through q^6

    // tetrahedron index against the direct-summation oracle
    let engine = tet_index(Charges { m: 0, e: 0 }, order);
    let reference = oracle::tet_index(0, 0, order as i128);
    for h in 0..order {
        assert_eq!(
            i128::try_from(&engine.coeff(h).unwrap()).unwrap(),
            reference.coeff(h as i128),
            "tet(0,0) at q^({h}/2)"
        );
    }

    // dgg(0,0) and dgg(0,1) against the brute-force double sum; the k
    // window is validated by saturation (a wider window changes nothing)
    let t = fig8();
    let opts = SummationOptions::with_order(order);
    let cases: [(i64, [i128; 6]); 2] = [
        (0, [0, 0, 0, 0, 0, 0]),
        (1, [1, 0, 0, -1, 0, 0]), // e = 1: S0 = M
    ];
    for (e, s0_arr) in cases {
        let engine = dgg_index(&t, 0, 0, e, &opts).unwrap().series;
        let reference = oracle::fig8_index(&s0_arr, order as i128, 10);
        let wider = oracle::fig8_index(&s0_arr, order as i128, 14);
        for h in -4..order {
            assert_eq!(
                reference.coeff(h as i128),
                wider.coeff(h as i128),
                "oracle window not saturated at q^({h}/2)"
            );
            assert_eq!(
                i128::try_from(&engine.coeff(h).unwrap()).unwrap(),
                reference.coeff(h as i128),
                "dgg(0,{e}) at q^({h}/2)"
            );
        }
    }
    println!("ACCEPTANCE 10 (brute-force oracle agreement through q^6): PASS");
}
