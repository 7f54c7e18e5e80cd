use ballspec::hamming::{oracle_spectrum, InducedGraph, Limits};
use ballspec::spectrum::{compare_with_oracle, full_spectrum, verify_against_oracle, VERIFY_TOL};
use ballspec::Error;

fn shells(n: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..=n / 2).flat_map(|r2| (0..=r2).map(move |r1| (r1, r2)))
}

#[test]
fn trace_and_edge_identities() {
    let lim = Limits::default();
    for n in 0..=10 {
        for (r1, r2) in shells(n) {
            let g = InducedGraph::build(n, r1, r2, &lim).unwrap();
            let o = oracle_spectrum(&g, false, &lim).unwrap();
            let tr: f64 = o.eigenvalues.iter().sum();
            let sq: f64 = o.eigenvalues.iter().map(|x| x * x).sum();
            assert!(tr.abs() <= o.tolerance, "B({n},{r1},{r2}): trace {tr}");
            assert!(
                (sq - 2.0 * g.edge_count() as f64).abs() <= o.tolerance * sq.max(1.0),
                "B({n},{r1},{r2}): {sq} vs {}",
                2 * g.edge_count()
            );
        }
    }
}

#[test]
fn adjacent_spheres_have_symmetric_spectra() {
    let lim = Limits::default();
    for n in 2..=11 {
        for r in 1..=n / 2 {
            let g = InducedGraph::build(n, r - 1, r, &lim).unwrap();
            let ev = oracle_spectrum(&g, false, &lim).unwrap().eigenvalues;
            for (a, b) in ev.iter().zip(ev.iter().rev()) {
                assert!((a + b).abs() <= 1e-8, "n={n} r={r}");
            }
        }
    }
}

#[test]
fn balls_have_a_simple_one_signed_top_eigenvector() {
    let lim = Limits::default();
    for n in 1..=9 {
        for r in 0..=n / 2 {
            let g = InducedGraph::build(n, 0, r, &lim).unwrap();
            let o = oracle_spectrum(&g, true, &lim).unwrap();
            let m = o.eigenvalues.len();
            if m > 1 {
                assert!(
                    o.eigenvalues[m - 1] - o.eigenvalues[m - 2] > 1e-6,
                    "n={n} r={r}: not simple"
                );
            }
            let v = o.eigenvectors.unwrap();
            let top = v.column(m - 1);
            let sign = top[0].signum();
            assert!(
                top.iter().all(|x| x * sign > 0.0),
                "n={n} r={r}: not one-signed"
            );
        }
    }
}

fn sweep(n: u32, r1_only: Option<u32>) {
    let lim = Limits::default();
    for (r1, r2) in shells(n).filter(|(r1, _)| r1_only.is_none_or(|x| x == *r1)) {
        let rep = verify_against_oracle(n, r1, r2, VERIFY_TOL, &lim).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}

#[test]
fn oracle_equivalence_up_to_ten() {
    for n in 0..=10 {
        sweep(n, None);
    }
}

#[test]
fn oracle_equivalence_eleven() {
    sweep(11, None);
}

#[test]
fn oracle_equivalence_twelve_inner_radius_0_to_2() {
    for r1 in 0..=2 {
        sweep(12, Some(r1));
    }
}

#[test]
fn oracle_equivalence_twelve_inner_radius_3_to_6() {
    for r1 in 3..=6 {
        sweep(12, Some(r1));
    }
}

#[test]
fn budget_is_enforced() {
    let lim = Limits {
        dense_limit: 100,
        ..Limits::default()
    };
    assert!(
        verify_against_oracle(8, 0, 3, VERIFY_TOL, &lim)
            .unwrap()
            .pass
    );
    assert!(matches!(
        verify_against_oracle(8, 0, 4, VERIFY_TOL, &lim),
        Err(Error::BudgetExceeded {
            vertex_count: 163,
            limit: 100
        })
    ));
}

#[test]
fn perturbed_prediction_fails() {
    let lim = Limits::default();
    let g = InducedGraph::build(6, 0, 2, &lim).unwrap();
    let observed = oracle_spectrum(&g, false, &lim).unwrap().eigenvalues;
    let mut table = full_spectrum(6, 0, 2).unwrap();
    assert!(compare_with_oracle(&table, &observed, VERIFY_TOL).pass);
    table.lines[0].value += 1e-6;
    assert!(!compare_with_oracle(&table, &observed, VERIFY_TOL).pass);
}
