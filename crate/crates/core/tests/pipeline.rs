use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use phinewton::certifier::{certify, certify_with, CertifyOptions, Remark, SchurInput, Verdict};
use phinewton::oracle::{bounded_factor_search, FactorSearchBudget, SearchOutcome};
use phinewton::primes::primes_up_to;
use phinewton::{Certificate, IntPoly};

fn ip(c: &[i64]) -> IntPoly {
    IntPoly::from_i64s(c)
}

fn schur(phi: IntPoly, a_n: i64, a: Vec<Vec<i64>>) -> Option<SchurInput> {
    let a: Vec<IntPoly> = a.into_iter().map(IntPoly::from).collect();
    SchurInput::new(phi, a.len(), BigInt::from(a_n), a).ok()
}

fn content_ok(input: &SchurInput) -> bool {
    let c = input.a[0].content().unwrap() * &input.a_n;
    primes_up_to(input.n as u64 + 1).iter().all(|&q| !(&c % q).is_zero())
}

#[test]
fn reducible_fixtures_are_never_certified() {
    let phi = ip(&[7, -1, 0, 1]);
    let f1 = schur(phi.clone(), 1, vec![vec![-1], vec![], vec![1]]).unwrap();
    let f2 = schur(phi, 1, vec![vec![120], vec![], vec![12], vec![]]).unwrap();
    for (input, oracle) in [(&f1, false), (&f1, true), (&f2, false), (&f2, true)] {
        let c = certify_with(input, &CertifyOptions { oracle, ..Default::default() }).unwrap();
        assert_ne!(c.verdict, Verdict::Irreducible);
        c.validate().unwrap();
    }
}

#[test]
fn n_equals_8_gap_is_closed_by_the_oracle() {
    let phi = ip(&[11, 1, 1]);
    let input = schur(
        phi,
        1,
        vec![vec![1, 1], vec![1], vec![0, 1], vec![], vec![2], vec![], vec![], vec![1, -1]],
    )
    .unwrap();
    let open = certify(&input).unwrap();
    assert_eq!(open.verdict, Verdict::RemarkCaseOpen);
    assert_eq!(open.remark, Some(Remark::NEquals8));
    assert_eq!(open.residual_interval, Some((4, 6)));

    let closed = certify_with(&input, &CertifyOptions { oracle: true, ..Default::default() }).unwrap();
    assert_eq!(closed.verdict, Verdict::Irreducible);
    closed.validate().unwrap();
    assert!(closed.excluded_intervals.contains(&(4, 6)));
}

#[test]
fn refused_search_keeps_the_gap_open() {
    let input = schur(ip(&[7, -1, 0, 1]), 1, vec![vec![1], vec![], vec![1]]).unwrap();
    let c = certify_with(&input, &CertifyOptions { oracle: true, candidate_cap: 1 }).unwrap();
    assert_eq!(c.verdict, Verdict::RemarkCaseOpen);
    let check = c.checks.iter().find(|c| c.name.starts_with("oracle")).unwrap();
    assert!(!check.pass && check.detail.contains("refused"));
    c.validate().unwrap();
}

#[test]
fn certify_is_deterministic() {
    let input = schur(ip(&[-1, -1, 0, 0, 1]), 3, vec![vec![5, 0, 1], vec![1, 1, 1, 1], vec![-9], vec![], vec![0, 2]])
        .unwrap();
    let a = certify(&input).unwrap().to_json(false);
    let b = certify(&input.clone()).unwrap().to_json(false);
    assert_eq!(a, b);
}

#[test]
fn schur_classical_case() {
    // φ = x: the classical Σ a_j x^j/(j+1)! with |a_0| = |a_n| = 1
    for n in [1usize, 2, 4, 5, 6, 9, 10, 11, 12] {
        let mut a = vec![IntPoly::one()];
        a.extend((1..n).map(|j| IntPoly::constant(BigInt::from(j as i64 * 3 - 7))));
        let input = SchurInput::new(IntPoly::x(), n, BigInt::one(), a).unwrap();
        let c = certify(&input).unwrap();
        assert_eq!(c.verdict, Verdict::Irreducible, "n = {n}");
        assert_eq!(c.witnesses.len(), n / 2);
    }
}

fn small_input() -> impl Strategy<Value = SchurInput> {
    let shape = prop_oneof![
        (Just(ip(&[1, 1])), prop::sample::select(vec![1usize, 2, 4, 5, 6])),
        (Just(ip(&[11, 1, 1])), prop::sample::select(vec![1usize, 2, 4])),
        (Just(ip(&[1, 0, 1])), Just(2usize)),
    ];
    shape
        .prop_flat_map(|(phi, n)| {
            let d = phi.degree().unwrap();
            (
                Just(phi),
                prop::sample::select(vec![1i64, -1, 5, 7, -11, 13]),
                prop::collection::vec(prop::collection::vec(-9i64..=9, d), n),
            )
        })
        .prop_filter_map("valid and content-coprime", |(phi, a_n, a)| {
            schur(phi, a_n, a).filter(content_ok)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn certificates_round_trip(input in small_input()) {
        let c = certify(&input).unwrap();
        c.validate().unwrap();
        let back = Certificate::from_json(&c.to_json(true)).unwrap();
        prop_assert_eq!(&back, &c);
        back.validate().unwrap();
    }

    #[test]
    fn certified_instances_have_no_small_factor(input in small_input()) {
        let c = certify(&input).unwrap();
        prop_assume!(c.verdict == Verdict::Irreducible);
        let big_f = input.scaled_polynomial();
        let n = big_f.degree().unwrap();
        let got = bounded_factor_search(&big_f, &FactorSearchBudget::new(n / 2)).unwrap();
        prop_assert!(
            matches!(got, SearchOutcome::NoneFound | SearchOutcome::Refused { .. }),
            "found {:?} in certified F = {}", got, big_f
        );
    }
}
