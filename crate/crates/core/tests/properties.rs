use num_bigint::BigInt;
use proptest::prelude::*;

use plab_core::codes::{
    decode_path, enumerate_bj, from_strict_partition, involution, polarity, termination_predicates,
    to_strict_partition, valuation, PathClassification, PathCode,
};
use plab_core::coefficients::{euler_e, integrated_f, pentagonal_index};
use plab_core::dag::extract_coefficients;
use plab_core::engines::{p_euler, p_integral};
use plab_core::oracle::{count_constrained, Constraint, Family};
use plab_core::rewrite::{eval_atom, maxpart_system, minpart_system, Atom, Memo};

fn code() -> impl Strategy<Value = PathCode> {
    proptest::collection::vec(any::<bool>(), 1..=14).prop_map(PathCode::from_bits)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn integral_equals_pentagonal(n in 0usize..600) {
        prop_assert_eq!(p_integral(n).unwrap(), p_euler(n).unwrap());
    }

    #[test]
    fn f_steps_are_euler(n in 1usize..500) {
        let f = integrated_f(n);
        prop_assert_eq!(f[n] - f[n - 1], euler_e(n as u64));
    }

    #[test]
    fn pentagonal_index_inverts(k in -200i64..200) {
        let n = ((3 * k * k - k) / 2) as u64;
        prop_assert_eq!(pentagonal_index(n).map(|p| p.0), Some(k));
    }

    #[test]
    fn predicates_on_dag_paths(b in code(), n in 0u64..40) {
        if b.k0().is_some() {
            let c = decode_path(n, &b).unwrap().classification;
            if c != PathClassification::EntersRegionEarly {
                let l = termination_predicates(n, &b).unwrap();
                prop_assert!(l.agrees_with(c));
                prop_assert!(l.implications_hold(&b));
            }
        }
    }

    #[test]
    fn strict_partition_bijection(b in code()) {
        let mut bits = b.bits().to_vec();
        bits[0] = true;
        let b = PathCode::from_bits(bits);
        let sp = to_strict_partition(&b).unwrap();
        prop_assert_eq!(sp.total(), valuation(&b));
        prop_assert_eq!(from_strict_partition(&sp).unwrap(), b);
    }

    #[test]
    fn involution_is_sign_reversing_pairing(j in 2u64..36, pick in any::<prop::sample::Index>()) {
        let mut domain = enumerate_bj(j);
        domain.extend(enumerate_bj(j - 1));
        let b = pick.get(&domain);
        let step = involution(j, b).unwrap();
        prop_assert_eq!(&involution(j, &step.output).unwrap().output, b);
        if !step.is_fixed() {
            // the signed count with B_{j-1} negated is preserved with opposite sign
            let w = |c: &PathCode| polarity(c).unwrap() * if valuation(c) == j { 1 } else { -1 };
            prop_assert_eq!(w(b), -w(&step.output));
        }
    }

    #[test]
    fn maxpart_rewrite_counts_partitions(n in 2i64..40, k in 2i64..40) {
        prop_assume!(k <= n);
        let mut memo = Memo::new();
        let v = eval_atom(&maxpart_system(false), Atom::Auxiliary(n, k), &mut memo).unwrap();
        let truth = count_constrained(n as u64, Family::P, Constraint::Max(k as u64)).unwrap();
        prop_assert_eq!(v, BigInt::from(truth));
    }

    #[test]
    fn minpart_rewrite_counts_partitions(n in 1i64..40, k in 1i64..40) {
        let mut memo = Memo::new();
        let v = eval_atom(&minpart_system(), Atom::Auxiliary(n, k), &mut memo).unwrap();
        let truth = count_constrained(n as u64, Family::P, Constraint::Min(k as u64)).unwrap();
        prop_assert_eq!(v, BigInt::from(truth));
    }
}

#[test]
fn extraction_is_stable_in_n() {
    let sys = maxpart_system(false);
    let a = extract_coefficients(&sys, 25).unwrap();
    let b = extract_coefficients(&sys, 26).unwrap();
    for j in 1..25 {
        assert_eq!(a.coeff(j), b.coeff(j));
    }
}
