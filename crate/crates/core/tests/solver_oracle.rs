mod common;

use returnset::orbit::{solve, verify_solution_set, Certificate, OrbitProblem};

const PER_PATH: usize = 25;

fn check(name: &str, i: usize, p: &OrbitProblem, bound: u64) -> Certificate {
    let s = solve(p).unwrap_or_else(|e| panic!("{name} #{i}: {e}"));
    assert!(!matches!(s.certificate, Certificate::Partial(_)), "{name} #{i}: {:?}", s.certificate);
    let bounds = vec![bound; p.r()];
    let got = s.answer.box_enumerate(&bounds).unwrap();
    assert_eq!(got, common::brute_hits(p, &bounds), "{name} #{i}");
    assert!(verify_solution_set(p, &s.answer, &bounds).unwrap().ok(), "{name} #{i}");
    s.certificate
}

#[test]
fn every_path_matches_brute_force() {
    for (k, (name, gen)) in common::PATHS.iter().enumerate() {
        let mut rng = common::rng(100 + k as u64);
        for i in 0..PER_PATH {
            let p = gen(&mut rng);
            if check(name, i, &p, 30) == Certificate::Exact && i % 5 == 0 {
                check(name, i, &p, 60);
            }
        }
    }
}

#[test]
fn answers_survive_conjugation() {
    for (k, (name, gen)) in common::PATHS.iter().enumerate() {
        let mut rng = common::rng(200 + k as u64);
        for i in 0..10 {
            let p = gen(&mut rng);
            let q = common::unimodular(&mut rng, p.g);
            let moved = common::conjugate(&p, &q);
            let bounds = vec![25; p.r()];
            let a = solve(&p).unwrap().answer.box_enumerate(&bounds).unwrap();
            let b = solve(&moved).unwrap().answer.box_enumerate(&bounds).unwrap();
            assert_eq!(a, b, "{name} #{i}");
        }
    }
}

#[test]
fn exact_answers_do_not_depend_on_the_box() {
    let mut rng = common::rng(300);
    let mut seen = 0;
    while seen < 8 {
        let p = common::diagonalizable(&mut rng);
        let s = solve(&p).unwrap();
        if s.certificate != Certificate::Exact {
            continue;
        }
        seen += 1;
        for b in [5, 17, 45] {
            let bounds = vec![b; p.r()];
            assert_eq!(s.answer.box_enumerate(&bounds).unwrap(), common::brute_hits(&p, &bounds));
        }
    }
}

#[test]
fn answers_on_harder_instances_are_never_wrong() {
    // Unipotent 3x3 maps and a plane target; Partial is allowed, a wrong claim is not.
    let j = vec![vec![vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]], vec![vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]]];
    let p = OrbitProblem::from_i64(&j, &[0, 0, 1], &[3, 0, 0], &[vec![0, 1, 0]]).unwrap();
    let s = solve(&p).unwrap();
    let bounds = vec![12, 12];
    match s.certificate {
        Certificate::Partial(_) => {}
        _ => assert_eq!(s.answer.box_enumerate(&bounds).unwrap(), common::brute_hits(&p, &bounds)),
    }
}
