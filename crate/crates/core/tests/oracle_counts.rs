use etale_core::oracle::{verify_moduli_count, DEFAULT_BUDGET};
use etale_core::{Algebra, Field, Partition};

fn check(n: usize, p: u64, rho: &[usize], expected: usize) {
    let a = Algebra::matrix(n, &Field::prime(p).unwrap()).unwrap();
    let rho = Partition::new(rho.to_vec()).unwrap();
    let r = verify_moduli_count(&a, &rho, DEFAULT_BUDGET).unwrap();
    assert_eq!(r.count_subalgebras, expected, "{r:?}");
    assert_eq!(r.count_systems, expected, "{r:?}");
    assert!(r.counts_match && r.bijective, "{r:?}");
}

#[test]
fn m2_over_f5() {
    check(2, 5, &[1, 1], 25);
    check(2, 5, &[2], 1);
}

#[test]
fn m2_over_f3() {
    check(2, 3, &[1, 1], 9);
    check(2, 3, &[2], 1);
}

// q^(n(n-1)) maximal tori for [1,1,1]; (q^2+q+1) q^2 rank-one idempotents
// for [2,1]
#[test]
fn m3_over_f2() {
    check(3, 2, &[1, 1, 1], 64);
    check(3, 2, &[2, 1], 28);
    check(3, 2, &[3], 1);
}
