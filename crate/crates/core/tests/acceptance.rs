//! One line per acceptance criterion, then a single assertion over all.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use returnset::arith::{Field, QuadElem};
use returnset::orbit::{solve, solve_linear_diophantine, solve_mixed, verify_solution_set, Certificate};
use returnset::padic::{pexp, plog, PadicNum};
use returnset::torus::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn mat(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn c1_line_family() -> Outcome {
    let (maps, alpha, target) = line_example();
    let t = Instant::now();
    let got = return_set_enumerate(&maps, &alpha, &target, &[200, 200]).map_err(|e| e.to_string())?;
    let took = t.elapsed();
    let mut want = BTreeSet::new();
    for k in 0..=9u64 {
        let m = 3 * k * k;
        for n in [3 * (k * k + k) / 2, 3 * (k * k - k) / 2] {
            if m <= 200 && n <= 200 {
                want.insert(vec![m, n]);
            }
        }
    }
    ensure(got == want, format!("got {got:?}"))?;
    ensure(took < Duration::from_secs(10), format!("took {took:?}"))?;
    Ok(format!("{} tuples in {took:.2?}", got.len()))
}

fn c2_noninvertible_family() -> Outcome {
    let (maps, alpha, target) = noninvertible_example();
    let got = return_set_enumerate(&maps, &alpha, &target, &[200, 200]).map_err(|e| e.to_string())?;
    let mut want = BTreeSet::new();
    for k in 0..=6u64 {
        let n = 6 * k * k;
        for m in [12 * k * k + 6 * k, 12 * k * k - 6 * k] {
            if m <= 200 && n <= 200 {
                want.insert(vec![m, n]);
            }
        }
    }
    ensure(got == want, format!("got {got:?}"))?;
    let mut roots = BTreeSet::new();
    common::for_each_point(&[200, 200], |t| {
        if condition_polynomial_62(t[0], t[1]) == 0 {
            roots.insert(common::as_u64(t));
        }
    });
    ensure(roots == want, format!("polynomial roots {roots:?}"))?;
    Ok(format!("{} tuples, polynomial roots agree", got.len()))
}

fn c3_jacobians() -> Outcome {
    let (maps, _, _) = line_example();
    ensure(log_jacobian(&maps[0]) == mat(&[vec![1, -1, 0], vec![0, 1, -2], vec![0, 0, 1]]), "Φ")?;
    ensure(log_jacobian(&maps[1]) == mat(&[vec![1, 2, 0], vec![0, 1, 4], vec![0, 0, 1]]), "Ψ")?;
    Ok("both matrices exact".into())
}

fn c4_expansion() -> Outcome {
    let (line, _, _) = line_example();
    let (nonin, _, _) = noninvertible_example();
    ensure(expanding_check(&nonin[0]), "non-automorphism Φ should expand")?;
    ensure(!expanding_check(&line[0]), "unipotent Φ should not expand")?;
    Ok("true for the doubling map, false for the unipotent one".into())
}

fn c5_classc() -> Outcome {
    let mut rng = common::rng(2024);
    for i in 0..500 {
        common::classc_instance(&mut rng, 1 + i % 4, 30).map_err(|e| format!("instance {i}: {e}"))?;
    }
    Ok("500 instances on box 0..30".into())
}

fn c6_hilbert() -> Outcome {
    let mut rng = common::rng(6);
    for i in 0..200 {
        common::hilbert_instance(&mut rng, 1 + i % 4, 20).map_err(|e| format!("lattice {i}: {e}"))?;
    }
    Ok("200 lattices on box 0..20".into())
}

fn c7_solver() -> Outcome {
    let mut exact = 0;
    let mut rechecked = 0;
    for (k, (name, gen)) in common::PATHS.iter().enumerate() {
        let mut rng = common::rng(7000 + k as u64);
        for i in 0..100 {
            let p = gen(&mut rng);
            let s = solve(&p).map_err(|e| format!("{name} #{i}: {e}"))?;
            let b30 = vec![30; p.r()];
            let rep = verify_solution_set(&p, &s.answer, &b30).map_err(|e| e.to_string())?;
            ensure(rep.ok(), format!("{name} #{i}: {}", rep.describe()))?;
            let claimed = s.answer.box_enumerate(&b30).map_err(|e| e.to_string())?;
            ensure(claimed == common::brute_hits(&p, &b30), format!("{name} #{i}: differs from brute force"))?;
            if s.certificate == Certificate::Exact {
                exact += 1;
                if i % 10 == 0 {
                    rechecked += 1;
                    let b60 = vec![60; p.r()];
                    let rep = verify_solution_set(&p, &s.answer, &b60).map_err(|e| e.to_string())?;
                    ensure(rep.ok(), format!("{name} #{i} on 0..60: {}", rep.describe()))?;
                }
            }
        }
    }
    Ok(format!("400 problems, {exact} exact, {rechecked} re-verified on 0..60"))
}

fn c8_equations() -> Outcome {
    let q = |x| QuadElem::from_int(Field::Rational, x);
    let mixed = solve_mixed(&[q(2)], &[q(1)], &q(0), &q(2)).map_err(|e| e.to_string())?;
    let got = mixed.box_enumerate(&[10_000]).map_err(|e| e.to_string())?;
    let mut want = BTreeSet::new();
    let mut pow = BigInt::from(1);
    for n in 0..=10_000u64 {
        if &pow * BigInt::from(n) == BigInt::from(2) {
            want.insert(vec![n]);
        }
        pow *= 2;
    }
    ensure(want == BTreeSet::from([vec![1]]) && got == want, format!("mixed gave {got:?}"))?;
    let lin = solve_linear_diophantine(&[q(1), q(2)], &q(3)).map_err(|e| e.to_string())?;
    let got = lin.box_enumerate(&[10_000, 10_000]).map_err(|e| e.to_string())?;
    let mut want = BTreeSet::new();
    for a in 0..=10_000u64 {
        for b in 0..=10_000u64 {
            if a + 2 * b == 3 {
                want.insert(vec![a, b]);
            }
        }
    }
    ensure(want == BTreeSet::from([vec![3, 0], vec![1, 1]]) && got == want, format!("linear gave {got:?}"))?;
    Ok("{1} and {(3,0), (1,1)} up to 10^4".into())
}

fn c9_padic() -> Outcome {
    const N: u32 = 12;
    let mut rng = common::rng(9);
    let e = |x: returnset::Error| x.to_string();
    for p in [3u64, 5, 7] {
        let pi = p as i64;
        let unit = |rng: &mut rand_chacha::ChaCha8Rng| {
            let b = loop {
                let b = rng.gen_range(1..60i64);
                if b % pi != 0 {
                    break b;
                }
            };
            BigRational::new(BigInt::from(pi * rng.gen_range(-400..400i64)), BigInt::from(b))
        };
        let one = BigRational::from_integer(BigInt::from(1));
        for i in 0..200 {
            let x = PadicNum::from_rational(p, N, &(&one + unit(&mut rng))).map_err(e)?;
            let y = PadicNum::from_rational(p, N, &(&one + unit(&mut rng))).map_err(e)?;
            let s = PadicNum::from_rational(p, N, &unit(&mut rng)).map_err(e)?;
            let t = PadicNum::from_rational(p, N, &unit(&mut rng)).map_err(e)?;
            let tag = format!("p = {p}, input {i}");
            ensure(pexp(&plog(&x).map_err(e)?).map_err(e)?.eq_at_precision(&x), format!("{tag}: exp(log x)"))?;
            ensure(plog(&pexp(&s).map_err(e)?).map_err(e)?.eq_at_precision(&s), format!("{tag}: log(exp s)"))?;
            let lhs = plog(&x.mul(&y).map_err(e)?).map_err(e)?;
            let rhs = plog(&x).map_err(e)?.add(&plog(&y).map_err(e)?).map_err(e)?;
            ensure(lhs.eq_at_precision(&rhs), format!("{tag}: log(xy)"))?;
            let lhs = pexp(&s.add(&t).map_err(e)?).map_err(e)?;
            let rhs = pexp(&s).map_err(e)?.mul(&pexp(&t).map_err(e)?).map_err(e)?;
            ensure(lhs.eq_at_precision(&rhs), format!("{tag}: exp(s + t)"))?;
        }
    }
    let l = plog(&PadicNum::from_int(5, N, &BigInt::from(6))).map_err(e)?;
    let r = l.residue().ok_or("log 6 is not integral")? % BigInt::from(125);
    ensure(r == BigInt::from(55), format!("log_5(6) ≡ {r} mod 125"))?;
    Ok("600 inputs at N = 12, log_5(6) ≡ 55 mod 125".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("1 line example family on box 200", c1_line_family),
        ("2 non-automorphism family on box 200", c2_noninvertible_family),
        ("3 log-Jacobian matrices", c3_jacobians),
        ("4 expansion check", c4_expansion),
        ("5 class-C algebra suite", c5_classc),
        ("6 Hilbert basis oracle", c6_hilbert),
        ("7 solver oracle per path", c7_solver),
        ("8 equation solver fixtures", c8_equations),
        ("9 p-adic suite", c9_padic),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match out {
            Ok(msg) => println!("PASS  criterion {name}: {msg} [{:.1?}]", t.elapsed()),
            Err(msg) => {
                println!("FAIL  criterion {name}: {msg} [{:.1?}]", t.elapsed());
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
