//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};

use chebconv::convexity::{cross_mode_agreement, identity_fid1_check, identity_fid_check};
use chebconv::determinant::{is_positive_chebyshev, phi, sylvester_check, Matrix, Verdict};
use chebconv::divdiff::{classical_divdiff, complete_homogeneous};
use chebconv::domain::{Domain, Interval};
use chebconv::function::FunctionSpec;
use chebconv::induced::{build_induced, identity_id, verify_sign_formula, verify_theorem1};
use chebconv::sampling::CheckConfig;
use chebconv::scalar::{rat, Field, Rational, Scalar};
use chebconv::system::{ChebyshevSystem, FunctionSystem};
use chebconv::systems::{catalog_entry, polynomial_system, trig_odd_system};
use chebconv::tuple::PointTuple;
use chebconv::variation::{check_theorem3, estimate_variation, variation_bound, variation_sum, Partition, Refinement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(20240611);
    r.set_stream(stream);
    r
}

/// `p/q` with `|p/q| <= span` and `q <= max_den`.
fn random_rational(rng: &mut ChaCha8Rng, span: i64, max_den: i64) -> Rational {
    let q = rng.random_range(1..=max_den);
    rat(rng.random_range(-span * q..=span * q), q)
}

fn distinct_rationals(rng: &mut ChaCha8Rng, m: usize, span: i64, max_den: i64) -> Vec<Rational> {
    let mut v: Vec<Rational> = Vec::new();
    while v.len() < m {
        let x = random_rational(rng, span, max_den);
        if !v.contains(&x) {
            v.push(x);
        }
    }
    v
}

/// Uniform floats in `(lo, hi)` at least `gap` apart, sorted.
fn spaced_floats(rng: &mut ChaCha8Rng, m: usize, lo: f64, hi: f64, gap: f64) -> Vec<f64> {
    let mut v: Vec<f64> = Vec::new();
    while v.len() < m {
        let x = rng.random_range(lo..hi);
        if x > lo && v.iter().all(|y| (x - y).abs() >= gap) {
            v.push(x);
        }
    }
    v.sort_by(f64::total_cmp);
    v
}

/// Cofactor expansion along the first row; independent of the library's
/// elimination routines.
fn laplace_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Rational::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Rational>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect()).collect();
        let term = m[0][j].clone() * laplace_det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `det [ det A|{1..k,i}x{1..k,j} ]_{i,j>k}` by cofactor expansion.
fn sylvester_lhs_oracle(a: &[Vec<Rational>], k: usize) -> Rational {
    let n = a.len();
    let minor = |i: usize, j: usize| -> Rational {
        let rows: Vec<usize> = (0..k).chain([i]).collect();
        let cols: Vec<usize> = (0..k).chain([j]).collect();
        laplace_det(&rows.iter().map(|&r| cols.iter().map(|&c| a[r][c].clone()).collect()).collect::<Vec<_>>())
    };
    let b: Vec<Vec<Rational>> = (k..n).map(|i| (k..n).map(|j| minor(i, j)).collect()).collect();
    laplace_det(&b)
}

fn criterion_1() -> Outcome {
    let mut r = rng(1);
    let mut exact_checks = 0;
    let mut oracle_checks = 0;
    for trial in 0..1000 {
        let n = 2 + trial % 7;
        let rows: Vec<Vec<Rational>> = (0..n).map(|_| (0..n).map(|_| random_rational(&mut r, 9, 4)).collect()).collect();
        let a = Matrix::from_rows(rows.clone()).map_err(|e| e.to_string())?;
        for k in 1..n {
            let rep = sylvester_check(&a, k).map_err(|e| e.to_string())?;
            ensure(rep.residual.is_zero(), || format!("trial {trial}: n={n} k={k} residual {}", rep.residual))?;
            exact_checks += 1;
            if n <= 5 {
                let lhs = sylvester_lhs_oracle(&rows, k);
                let rhs = laplace_det(&rows[..k].iter().map(|r| r[..k].to_vec()).collect::<Vec<_>>()).powi((n - k - 1) as u32)
                    * laplace_det(&rows);
                ensure(lhs == rep.lhs && rhs == rep.rhs && lhs == rhs, || format!("trial {trial}: oracle disagrees at n={n} k={k}"))?;
                oracle_checks += 1;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for trial in 0..1000 {
        let n = 2 + trial % 5;
        let data: Vec<f64> = (0..n * n).map(|_| r.random_range(-1.0..=1.0)).collect();
        let a = Matrix::new(n, n, data).map_err(|e| e.to_string())?;
        for k in 1..n {
            worst = worst.max(sylvester_check(&a, k).map_err(|e| e.to_string())?.relative_residual());
        }
    }
    ensure(worst <= 1e-9, || format!("float relative residual {worst:e} > 1e-9"))?;
    Ok(format!("{exact_checks} exact checks with zero residual ({oracle_checks} cofactor-oracle matches); float max rel {worst:.2e}"))
}

/// Sum of all degree-`ell` monomials, enumerated by exponent vectors.
fn homogeneous_oracle(ell: usize, xs: &[Rational]) -> Rational {
    fn go(ell: usize, xs: &[Rational], acc: Rational) -> Rational {
        match xs.split_first() {
            None => {
                if ell == 0 {
                    acc
                } else {
                    Rational::zero()
                }
            }
            Some((x, rest)) => {
                let mut total = Rational::zero();
                let mut pw = Rational::one();
                for e in 0..=ell {
                    total += go(ell - e, rest, acc.clone() * pw.clone());
                    pw *= x.clone();
                }
                total
            }
        }
    }
    go(ell, xs, Rational::one())
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let mut checks = 0;
    for n in 0..=8u32 {
        for k in 1..=6usize.min(n as usize + 1) {
            for _ in 0..200 {
                let pts = distinct_rationals(&mut r, k, 4, 6);
                let t = PointTuple::distinct(pts.clone()).map_err(|e| e.to_string())?;
                let dd = classical_divdiff(&FunctionSpec::power(n), &t).map_err(|e| e.to_string())?;
                let ell = n as usize + 1 - k;
                let lib = complete_homogeneous(ell, &pts);
                ensure(dd == lib, || format!("n={n} k={k}: divided difference {dd} != P = {lib}"))?;
                ensure(lib == homogeneous_oracle(ell, &pts), || format!("n={n} k={k}: P disagrees with monomial enumeration"))?;
                checks += 1;
            }
        }
    }
    let spot = classical_divdiff(&FunctionSpec::power(3), &PointTuple::increasing(vec![rat(1, 1), rat(2, 1), rat(3, 1)]).unwrap())
        .map_err(|e| e.to_string())?;
    // (27 - 2*8 + 1) / 2
    ensure(spot == rat(6, 1), || format!("[1,2,3; x^3] = {spot}"))?;
    Ok(format!("{checks} exact tuple checks; [1,2,3; x^3] = {spot}"))
}

fn trig3() -> ChebyshevSystem {
    trig_odd_system(1, Interval::open(-PI, 0.0)).unwrap()
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let mut exact = 0;
    for cfg in 0..200 {
        let n = 2 + cfg % 4;
        let sys = polynomial_system(n).map_err(|e| e.to_string())?;
        let f = FunctionSpec::affine([
            (Scalar::Exact(random_rational(&mut r, 5, 3)), FunctionSpec::power(r.random_range(0..=n as u32 + 2))),
            (Scalar::Exact(random_rational(&mut r, 5, 3)), FunctionSpec::power(r.random_range(0..=n as u32 + 2))),
        ]);
        let pts = PointTuple::distinct(distinct_rationals(&mut r, n + 1, 5, 6)).unwrap();
        let head = PointTuple::distinct(pts[..n].to_vec()).unwrap();
        for k in 1..n {
            let id = identity_id(&sys, k, &head).map_err(|e| e.to_string())?;
            let fid = identity_fid_check(&sys, k, &f, &pts).map_err(|e| e.to_string())?;
            ensure(id.is_exact() && fid.is_exact(), || format!("config {cfg}: n={n} k={k} nonzero residual"))?;
            exact += 2;
        }
        let fid1 = identity_fid1_check(&sys, &f, &pts).map_err(|e| e.to_string())?;
        ensure(fid1.is_exact(), || format!("config {cfg}: fid1 residual {}", fid1.residual))?;
        exact += 1;
    }
    let sys = trig3();
    let fs = [FunctionSpec::Exp, FunctionSpec::power(2), FunctionSpec::Exp.plus(FunctionSpec::Cos { freq: 1 })];
    let mut worst: f64 = 0.0;
    for cfg in 0..200 {
        let pts = spaced_floats(&mut r, 4, -PI, 0.0, 0.05);
        let f = &fs[cfg % fs.len()];
        let all = PointTuple::distinct(pts.clone()).unwrap();
        let head = PointTuple::distinct(pts[..3].to_vec()).unwrap();
        for k in 1..3 {
            worst = worst.max(identity_id(&sys, k, &head).map_err(|e| e.to_string())?.relative());
            worst = worst.max(identity_fid_check(&sys, k, f, &all).map_err(|e| e.to_string())?.relative());
        }
        worst = worst.max(identity_fid1_check(&sys, f, &all).map_err(|e| e.to_string())?.relative());
    }
    ensure(worst <= 1e-8, || format!("trig relative residual {worst:e} > 1e-8"))?;
    Ok(format!("{exact} exact identity checks; trig max rel {worst:.2e}"))
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let cfg = CheckConfig::default();
    let poly = polynomial_system(5).unwrap();
    let trig = trig3();
    let mut checked = 0;
    for m in 2..=8usize {
        let grid = distinct_rationals(&mut r, m, 4, 5);
        for k in 1..=4usize.min(m - 1) {
            let rep = verify_sign_formula(&poly, k, &grid, &cfg).map_err(|e| e.to_string())?;
            ensure(rep.exhaustive && rep.mismatches == 0 && rep.indeterminate == 0, || format!("poly m={m} k={k}: {rep:?}"))?;
            checked += rep.checked;
        }
        let grid = spaced_floats(&mut r, m, -PI, 0.0, 0.05);
        // the prefixes (1, cos) and (1, cos, sin) are the Chebyshev ones here
        for k in 1..=2usize.min(m - 1) {
            let rep = verify_sign_formula(&trig, k, &grid, &cfg).map_err(|e| e.to_string())?;
            ensure(rep.exhaustive && rep.mismatches == 0 && rep.indeterminate == 0, || format!("trig m={m} k={k}: {rep:?}"))?;
            checked += rep.checked;
        }
    }
    Ok(format!("{checked} (base, point) pairs, all signs as predicted"))
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let cfg = CheckConfig::default();
    let mut summary = Vec::new();
    for n in 2..=5usize {
        let sys = polynomial_system(n).unwrap();
        let mut bases = 0;
        for b in 0..60 {
            let k = 1 + b % (n - 1);
            let pts = distinct_rationals(&mut r, k + 10, 4, 4);
            let mut base = pts[..k].to_vec();
            base.sort();
            let base = PointTuple::increasing(base).unwrap();
            let rep = verify_theorem1(&sys, &base, &pts[k..], &cfg).map_err(|e| e.to_string())?;
            ensure(rep.passed(0.0), || format!("poly n={n} base {:?}: {:?}", rep.base, rep.induced.verdict))?;
            ensure(rep.induced.tuples_checked > 0, || "no tuples checked".into())?;
            bases += 1;
        }
        summary.push(format!("poly{n}:{bases}"));
    }
    let sys = trig3();
    let mut bases = 0;
    for b in 0..60 {
        let k = 1 + b % 2;
        let pts = spaced_floats(&mut r, k + 10, -PI, 0.0, 0.05);
        let mut idx: Vec<usize> = (0..pts.len()).collect();
        for i in 0..k {
            let j = r.random_range(i..idx.len());
            idx.swap(i, j);
        }
        let mut base: Vec<f64> = idx[..k].iter().map(|&i| pts[i]).collect();
        base.sort_by(f64::total_cmp);
        let grid: Vec<f64> = idx[k..].iter().map(|&i| pts[i]).collect();
        let base = PointTuple::increasing(base).unwrap();
        let rep = verify_theorem1(&sys, &base, &grid, &cfg).map_err(|e| e.to_string())?;
        ensure(rep.passed(1e-8), || format!("trig base {:?}: {:?} rel {:e}", rep.base, rep.induced.verdict, rep.identity.max_relative_residual))?;
        bases += 1;
    }
    summary.push(format!("trig3:{bases}"));
    Ok(format!("induced systems positive on 10-point punctured grids, bases per parent {}", summary.join(" ")))
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let cfg = CheckConfig::default();
    let (mut convex, mut violated, mut undecided) = (0, 0, 0);
    for trial in 0..50 {
        let n = 2 + trial % 3;
        let sys = polynomial_system(n).unwrap();
        let ks: Vec<usize> = (1..n).collect();
        let grid = distinct_rationals(&mut r, 8, 3, 4);
        let report = match trial % 3 {
            0 => {
                // rational combination of powers
                let f = FunctionSpec::affine((0..3).map(|_| {
                    (Scalar::Exact(random_rational(&mut r, 3, 2)), FunctionSpec::power(r.random_range(0..=n as u32 + 2)))
                }));
                cross_mode_agreement(&sys, &f, &grid, &ks, &cfg)
            }
            1 => {
                let f = FunctionSpec::Exp.scaled(Scalar::Float(r.random_range(-1.0..1.0))).plus(FunctionSpec::power(n as u32));
                let g: Vec<f64> = grid.iter().map(Field::to_f64).collect();
                cross_mode_agreement(&sys, &f, &g, &ks, &cfg)
            }
            _ => {
                // a convex power plus sampled noise
                let mut sorted = grid.clone();
                sorted.sort();
                let values: Vec<Scalar> = sorted
                    .iter()
                    .map(|x| {
                        let base = x.powi(n as u32);
                        Scalar::Exact(base + rat(r.random_range(-20..=20), 100))
                    })
                    .collect();
                let f = FunctionSpec::sampled(sorted.iter().cloned().map(Scalar::Exact).collect(), values).unwrap();
                cross_mode_agreement(&sys, &f, &sorted, &ks, &cfg)
            }
        }
        .map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(report.agrees(), || format!("trial {trial}: disagreements {:?}", report.disagreements))?;
        match report.consensus.as_deref() {
            Some("convex_on_sample") => convex += 1,
            Some(_) => violated += 1,
            None => undecided += 1,
        }
    }
    let sys = trig3();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let pts = spaced_floats(&mut r, 2, -PI, 0.0, 0.05);
        let x1 = pts[r.random_range(0..2)];
        let x = pts.iter().copied().find(|p| *p != x1).unwrap();
        let induced = build_induced(&sys, &PointTuple::increasing(vec![x1]).unwrap()).map_err(|e| e.to_string())?;
        let generic = induced.eval_basis(1, &x).map_err(|e| e.to_string())?;
        let closed = -1.0 / ((x1 + x) / 2.0).tan();
        worst = worst.max((generic - closed).abs() / generic.abs().max(closed.abs()));
    }
    ensure(worst <= 1e-12, || format!("closed-form induced basis off by rel {worst:e}"))?;
    Ok(format!("50 functions, no disagreements ({convex} convex, {violated} violated, {undecided} undecided); cot basis max rel {worst:.2e}"))
}

fn criterion_7() -> Outcome {
    let dom = Domain::interval(Interval::open(-2i64, 2i64));
    let entry = catalog_entry("one-xsq", None, Some(dom), true).map_err(|e| e.to_string())?;
    let pts = [rat(-1, 1), rat(1, 1)];
    let value = phi(&entry.system, 2, &pts).map_err(|e| e.to_string())?;
    // 1 * x2^2 - 1 * x1^2
    let oracle = pts[1].clone() * pts[1].clone() - pts[0].clone() * pts[0].clone();
    ensure(value.is_zero() && oracle.is_zero(), || format!("phi(-1, 1) = {value}"))?;
    let grid = [rat(-1, 1), rat(0, 1), rat(1, 1)];
    let rep = is_positive_chebyshev(&entry.system, 2, &grid, &CheckConfig::default()).map_err(|e| e.to_string())?;
    let want = vec![Scalar::int(-1), Scalar::int(1)];
    match &rep.verdict {
        Verdict::Violated { witness, value } if *witness == want && *value == Scalar::int(0) => {}
        other => return Err(format!("unexpected verdict {other:?}")),
    }
    Ok("phi(-1, 1) = 0 exactly; grid {-1, 0, 1} violated with witness (-1, 1)".into())
}

fn criterion_8() -> Outcome {
    let sys = polynomial_system(2).unwrap();
    let sq = FunctionSpec::power(2);
    for m in [10i64, 20, 40] {
        let part = Partition::uniform(&rat(0, 1), &rat(1, 1), m as usize).map_err(|e| e.to_string())?;
        let s = variation_sum(&sys, &sq, &part).map_err(|e| e.to_string())?;
        ensure(s == rat(2 * m - 2, m), || format!("m={m}: sum {s}"))?;
    }
    let refinement = Refinement { m0: 10, max_m: 320, perturb_rounds: 3, seed: 8 };
    let est = estimate_variation(&sys, &sq, &rat(0, 1), &rat(1, 1), &refinement).map_err(|e| e.to_string())?;
    let bests: Vec<Rational> = est.partial_sums.iter().map(|r| r.best.to_exact().unwrap()).collect();
    ensure(bests.windows(2).all(|w| w[0] <= w[1]), || "estimates decrease".into())?;
    let uniform: Vec<Rational> = est.partial_sums.iter().filter(|r| !r.perturbed).map(|r| r.sum.to_exact().unwrap()).collect();
    ensure(uniform.windows(2).all(|w| w[0] <= w[1]), || "uniform sums decrease".into())?;
    let a_anchor = [rat(-1, 2), rat(0, 1)];
    let b_anchor = [rat(1, 1), rat(3, 2)];
    let zero = FunctionSpec::constant(Scalar::int(0));
    let bound = variation_bound(&sys, &sq, &zero, &a_anchor, &b_anchor).map_err(|e| e.to_string())?;
    // slopes of x^2: (1 + 3/2) - (-1/2 + 0)
    ensure(bound == rat(3, 1), || format!("bound {bound}"))?;
    ensure(bests.iter().all(|b| *b <= bound), || "an estimate exceeds the bound".into())?;
    let rep = check_theorem3(
        &sys,
        &sys.domain,
        &sq,
        &zero,
        &rat(0, 1),
        &rat(1, 1),
        Some((a_anchor.to_vec(), b_anchor.to_vec())),
        &refinement,
    )
    .map_err(|e| e.to_string())?;
    ensure(rep.margin.to_exact().unwrap() >= <Rational as Field>::zero(), || "negative margin".into())?;

    let mut r = rng(8);
    let mut min_margin = f64::INFINITY;
    for trial in 0..100u64 {
        let quadratic = trial % 2 == 0;
        let (sys, g, h) = if quadratic {
            // (1, x)-convex: affine part plus nonnegative even powers and exp
            let mk = |r: &mut ChaCha8Rng| {
                FunctionSpec::affine([
                    (Scalar::Float(r.random_range(-2.0..2.0)), FunctionSpec::power(1)),
                    (Scalar::Float(r.random_range(0.0..2.0)), FunctionSpec::power(2)),
                    (Scalar::Float(r.random_range(0.0..0.5)), FunctionSpec::power(4)),
                    (Scalar::Float(r.random_range(0.0..1.0)), FunctionSpec::Exp),
                ])
            };
            (polynomial_system(2).unwrap(), mk(&mut r), mk(&mut r))
        } else {
            // (1, x, x^2)-convex: positive third derivative
            let mk = |r: &mut ChaCha8Rng| {
                FunctionSpec::affine([
                    (Scalar::Float(r.random_range(-2.0..2.0)), FunctionSpec::power(2)),
                    (Scalar::Float(r.random_range(0.0..2.0)), FunctionSpec::power(3)),
                    (Scalar::Float(r.random_range(0.0..1.0)), FunctionSpec::Exp),
                ])
            };
            (polynomial_system(3).unwrap(), mk(&mut r), mk(&mut r))
        };
        let a = r.random_range(-2.0..0.5);
        let b = a + r.random_range(0.5..2.0);
        let refinement = Refinement { m0: 8, max_m: 64, perturb_rounds: 1, seed: trial };
        let rep = check_theorem3(&sys, &sys.domain, &g, &h, &a, &b, None, &refinement).map_err(|e| format!("trial {trial}: {e}"))?;
        let margin = rep.margin.to_f64();
        ensure(margin >= 0.0, || format!("trial {trial}: margin {margin}"))?;
        min_margin = min_margin.min(margin);
    }
    Ok(format!("2 - 2/m exact for m = 10, 20, 40; bound 3 dominates; 100 random trials, min margin {min_margin:.3e}"))
}

fn run_cli(args: &[&str]) -> Result<(String, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_chebconv")).args(args).output().map_err(|e| e.to_string())?;
    Ok((String::from_utf8_lossy(&out.stdout).into_owned(), out.status.code().unwrap_or(-1)))
}

fn without_timing(report: &str) -> Result<String, String> {
    let mut v: serde_json::Value = serde_json::from_str(report).map_err(|e| format!("bad JSON: {e}"))?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timing");
    }
    serde_json::to_string(&v).map_err(|e| e.to_string())
}

fn criterion_9() -> Outcome {
    let runs: &[&[&str]] = &[
        &["chebcheck", "--system", "poly:4", "--grid", "interior:-1,1,30", "--budget", "500", "--seed", "11"],
        &["chebcheck", "--system", "one-xsq", "--domain=-2,2", "--unsafe-domain-override", "--grid=-1,0,1"],
        &["divdiff", "--system", "trig-odd", "--function", "exp", "--points=-2,-1,-1/2"],
        &["convexity", "--system", "poly:3", "--function", "exp", "--grid", "interior:-1,1,14", "--mode", "all", "--budget", "100", "--base-budget", "20", "--seed", "5"],
        &["identities", "--suite", "all", "--trials", "30", "--seed", "7"],
        &["identities", "--suite", "fid", "--trials", "30", "--seed", "7", "--backend", "float"],
        &["variation", "--system", "poly:2", "--g", "power:2", "--a", "0", "--b", "1", "--max-m", "80", "--perturb-rounds", "2", "--seed", "3"],
    ];
    for args in runs {
        let (first, c1) = run_cli(args)?;
        let (second, c2) = run_cli(args)?;
        ensure(c1 == c2 && (c1 == 0 || c1 == 1), || format!("{args:?}: exit codes {c1} / {c2}"))?;
        ensure(without_timing(&first)? == without_timing(&second)?, || format!("{args:?}: reports differ"))?;
        ensure(first.contains("\"timing\""), || format!("{args:?}: no timing field"))?;
    }
    Ok(format!("{} commands reproduced byte-for-byte apart from timing", runs.len()))
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("sylvester identity", criterion_1),
        ("divided differences of powers", criterion_2),
        ("bordered identities", criterion_3),
        ("sign formula", criterion_4),
        ("induced systems", criterion_5),
        ("convexity criteria agree", criterion_6),
        ("counterexample (1, x^2)", criterion_7),
        ("variation bound", criterion_8),
        ("cli determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let started = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

