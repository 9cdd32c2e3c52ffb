//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::time::{Duration, Instant};

use qcoinv::cli::checks::{generators, run_suite, CheckOptions, Suite, SuiteReport};
use qcoinv::coact::{CoactionKind, Kind};
use qcoinv::coinv::{hilbert_prefix, spanning_check};
use qcoinv::hopf::{self, GLElem, Slot};
use qcoinv::qmatrix::{pbw_basis, sigma, tau, AlgElem};
use qcoinv::rform::{solve_generator_table, RForm};

/// Partitions of `d` into at most `k` parts, by direct enumeration of
/// non-increasing sequences.
fn partitions(d: usize, k: usize) -> usize {
    fn go(rest: usize, max_part: usize, parts_left: usize) -> usize {
        if rest == 0 {
            return 1;
        }
        if parts_left == 0 {
            return 0;
        }
        (1..=max_part.min(rest)).map(|p| go(rest - p, p, parts_left - 1)).sum()
    }
    go(d, d, k)
}

/// Multisets of size `d` from `k` letters, by the recurrence on the last letter.
fn multisets(k: usize, d: usize) -> usize {
    let mut row = vec![1usize; d + 1];
    row[1..].iter_mut().for_each(|x| *x = 0);
    for _ in 0..k {
        for j in 1..=d {
            row[j] += row[j - 1];
        }
    }
    row[d]
}

fn report_ok(r: &SuiteReport, notes: &mut Vec<String>) -> bool {
    for c in r.cases.iter().filter(|c| !c.passed) {
        notes.push(format!("n={} {}/{} failed", r.n, r.suite, c.name));
    }
    r.passed
}

fn suite(s: Suite, n: usize, notes: &mut Vec<String>) -> bool {
    let mut o = CheckOptions::new(n);
    o.seed = 2024;
    match run_suite(s, &o) {
        Ok(r) => report_ok(&r, notes),
        Err(e) => {
            notes.push(format!("n={} {}: {}", n, s.name(), e));
            false
        }
    }
}

struct Outcome {
    passed: bool,
    notes: Vec<String>,
}

fn criterion(id: usize, title: &str, limit: Option<Duration>, f: impl FnOnce(&mut Vec<String>) -> bool) -> bool {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut out = Outcome { passed: f(&mut notes), notes: Vec::new() };
    let took = start.elapsed();
    if let Some(l) = limit {
        if took > l {
            out.passed = false;
            notes.push(format!("took {:.1?}, limit {:?}", took, l));
        }
    }
    out.notes = notes;
    let mark = if out.passed { "PASS" } else { "FAIL" };
    println!("criterion {}: {} {} ({:.2?})", id, mark, title, took);
    for n in &out.notes {
        println!("    {}", n);
    }
    out.passed
}

fn main() {
    let alpha = CoactionKind::new(Kind::Alpha, Slot::Sl);
    let beta = CoactionKind::new(Kind::Beta, Slot::Sl);
    let ranges = [(2usize, 5usize), (3, 4)];
    let mut all = true;

    all &= criterion(1, "confluence and PBW dimensions, N = 2, 3", Some(Duration::from_secs(10)), |notes| {
        let mut ok = true;
        for n in [2, 3] {
            ok &= suite(Suite::Relations, n, notes);
            for d in 0..=4 {
                let got = pbw_basis(n, d).len();
                if got != multisets(n * n, d) {
                    notes.push(format!("n={} d={}: {} PBW words", n, d, got));
                    ok = false;
                }
            }
        }
        ok
    });

    all &= criterion(2, "det_q is central, N = 2, 3", None, |notes| {
        let mut ok = true;
        for n in [2, 3] {
            let det = GLElem::det(n);
            for g in generators(n) {
                if det.mul(&g) != g.mul(&det) {
                    notes.push(format!("n={}: det_q does not commute with {}", n, g));
                    ok = false;
                }
            }
        }
        ok
    });

    all &= criterion(3, "Hopf axioms on generators and det_q^-1, N = 2, 3", None, |notes| {
        let mut ok = true;
        for n in [2, 3] {
            ok &= suite(Suite::Hopf, n, notes);
        }
        ok
    });

    all &= criterion(4, "coaction axioms and weak multiplicativity, N = 2, 3", None, |notes| {
        let mut ok = true;
        for n in [2, 3] {
            ok &= suite(Suite::Coact, n, notes);
        }
        ok
    });

    all &= criterion(5, "SL coinvariant dimensions and spanning", Some(Duration::from_secs(300)), |notes| {
        let expected = [vec![1, 1, 2, 2, 3, 3], vec![1, 1, 2, 3, 4]];
        let mut ok = true;
        for ((n, max_d), exp) in ranges.iter().zip(&expected) {
            let parts: Vec<usize> = (0..=*max_d).map(|d| partitions(d, *n)).collect();
            assert_eq!(&parts, exp, "partition oracle");
            for ck in [alpha, beta] {
                let h = hilbert_prefix(ck, *n, *max_d);
                if &h != exp {
                    notes.push(format!("n={} {}: {:?}, expected {:?}", n, ck, h, exp));
                    ok = false;
                }
            }
            let sig: Vec<AlgElem> = (1..=*n).map(|i| sigma(*n, i).unwrap()).collect();
            let ta: Vec<AlgElem> = (1..=*n).map(|i| tau(*n, i).unwrap()).collect();
            for (name, ck, gens) in [("sigma", alpha, &sig), ("tau", beta, &ta)] {
                if spanning_check(ck, *n, gens, *max_d) != Ok(true) {
                    notes.push(format!("n={}: {} products do not span", n, name));
                    ok = false;
                }
            }
        }
        ok
    });

    all &= criterion(6, "sigma and tau commute; alpha and beta Hilbert prefixes agree", None, |notes| {
        let mut ok = true;
        for (n, max_d) in ranges {
            for (name, g) in [("sigma", sigma as fn(usize, usize) -> _), ("tau", tau)] {
                let gs: Vec<AlgElem> = (1..=n).map(|i| g(n, i).unwrap()).collect();
                for (i, x) in gs.iter().enumerate() {
                    for (j, y) in gs.iter().enumerate() {
                        if x.mul(y) != y.mul(x) {
                            notes.push(format!("n={}: {}_{} and {}_{} do not commute", n, name, i + 1, name, j + 1));
                            ok = false;
                        }
                    }
                }
            }
            if hilbert_prefix(alpha, n, max_d) != hilbert_prefix(beta, n, max_d) {
                notes.push(format!("n={}: Hilbert prefixes differ", n));
                ok = false;
            }
        }
        ok
    });

    all &= criterion(7, "r-form laws and the intertwiner", None, |notes| {
        let mut ok = true;
        for n in [2, 3] {
            if let Err(e) = solve_generator_table(n).and_then(|_| RForm::solve(n)) {
                notes.push(format!("n={}: {}", n, e));
                ok = false;
            }
            // at N = 2 the suite also checks intertwining on degrees 0..=3
            ok &= suite(Suite::Rform, n, notes);
        }
        ok
    });

    all &= criterion(8, "embedding into O_q(SL_N) (x) k[z, z^-1]", None, |notes| {
        let mut ok = suite(Suite::Embed, 2, notes);
        for n in [2, 3] {
            if !hopf::sl_is_zero(&GLElem::det(n).sub(&GLElem::one(n))) {
                notes.push(format!("n={}: det_q - 1 survives", n));
                ok = false;
            }
        }
        ok
    });

    all &=
        criterion(9, "coinvariance agrees with cocommutativity, N = 2", None, |notes| suite(Suite::Cocomm, 2, notes));

    if !all {
        std::process::exit(1);
    }
}
