use etale_core::factor::{find_roots, splitting_extension, squarefree_test};
use etale_core::linalg::{solve_affine, AffineSolution};
use etale_core::moduli::{
    in_u, lagrange_idempotents, phi, psi, subalgebra_from_ideal_system, IdealSystem, PsiConfig,
};
use etale_core::plucker::{plucker_embed, plucker_inverse, wedge2_matrix, wedge_form};
use etale_core::{Algebra, Element, Field, Matrix, Poly, Scalar, Subspace};
use num_rational::BigRational;
use proptest::prelude::*;

fn gf(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11])
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..20, 1i64..6).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn matrix_element(f: &Field, n: usize, vals: &[i64]) -> Element {
    Algebra::matrix(n, f).unwrap().element_from_i64s(&vals[..n * n]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn prime_field_axioms(p in small_prime(), a in 0u64..100, b in 0u64..100, c in 0u64..100) {
        let f = gf(p);
        let (a, b, c) = (f.from_i64(a as i64), f.from_i64(b as i64), f.from_i64(c as i64));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.add(&a, &f.neg(&a)), f.zero());
        if !f.is_zero(&a) {
            prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        }
    }

    #[test]
    fn extension_field_axioms(i in 0u128..81, j in 0u128..81, k in 0u128..81) {
        let f = Field::finite_extension(&gf(3), 4, "w").unwrap();
        let (a, b, c) = (f.element_from_index(i), f.element_from_index(j), f.element_from_index(k));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        if !f.is_zero(&a) {
            prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        }
        // Frobenius over F3 is additive and multiplicative
        let fr = |x: &Scalar| f.galois_generator(x, &gf(3)).unwrap();
        prop_assert_eq!(fr(&f.add(&a, &b)), f.add(&fr(&a), &fr(&b)));
        prop_assert_eq!(fr(&f.mul(&a, &b)), f.mul(&fr(&a), &fr(&b)));
    }

    #[test]
    fn rational_division(a in rational(), b in rational()) {
        let q = Field::rationals();
        let (x, y) = (q.from_rational(&a).unwrap(), q.from_rational(&b).unwrap());
        if !q.is_zero(&y) {
            prop_assert_eq!(q.mul(&q.div(&x, &y).unwrap(), &y), x);
        }
    }

    #[test]
    fn division_with_remainder(p in small_prime(), a in prop::collection::vec(0i64..50, 0..8), b in prop::collection::vec(0i64..50, 1..5)) {
        let f = gf(p);
        let a = Poly::from_i64s(&f, &a);
        let b = Poly::from_i64s(&f, &b);
        prop_assume!(!b.is_zero());
        let (q, r) = a.divrem(&b);
        prop_assert_eq!(q.mul(&b).add(&r), a.clone());
        prop_assert!(r.is_zero() || r.degree() < b.degree());
        let g = a.gcd(&b);
        prop_assert!(a.divisible_by(&g) && b.divisible_by(&g));
    }

    #[test]
    fn roots_divide(p in prop::sample::select(vec![3u64, 5, 7]), roots in prop::collection::vec(0i64..7, 1..5), extra in prop::collection::vec(0i64..7, 0..3)) {
        let f = gf(p);
        let rs: Vec<Scalar> = roots.iter().map(|&r| f.from_i64(r)).collect();
        let mut poly = Poly::from_roots(&f, &f.one(), &rs);
        if !extra.is_empty() {
            let mut e = extra.clone();
            e.push(1);
            poly = poly.mul(&Poly::from_i64s(&f, &e));
        }
        let found = find_roots(&poly, &f).unwrap();
        for r in &found {
            prop_assert!(f.is_zero(&poly.eval(r)));
        }
        prop_assert!(poly.divisible_by(&Poly::from_roots(&f, &f.one(), &found)));
        // every planted root is found, with at least its planted multiplicity
        for r in &rs {
            let planted = rs.iter().filter(|x| *x == r).count();
            prop_assert!(found.iter().filter(|x| *x == r).count() >= planted);
        }
    }

    #[test]
    fn splitting_fields_split(p in prop::sample::select(vec![2u64, 3, 5]), cs in prop::collection::vec(0i64..5, 2..5)) {
        let f = gf(p);
        let mut cs = cs;
        cs.push(1);
        let poly = Poly::from_i64s(&f, &cs);
        prop_assume!(squarefree_test(&poly).unwrap());
        let (k, roots) = splitting_extension(&poly).unwrap();
        prop_assert_eq!(Some(roots.len()), poly.degree());
        prop_assert_eq!(Poly::from_roots(&k, &k.one(), &roots), poly.embed(&k).unwrap());
    }

    #[test]
    fn affine_solutions_solve(p in small_prime(), vals in prop::collection::vec(0i64..11, 12), rhs in prop::collection::vec(0i64..11, 3)) {
        let f = gf(p);
        let m = Matrix::from_i64s(&f, 3, 4, &vals);
        let b: Vec<Scalar> = rhs.iter().map(|&x| f.from_i64(x)).collect();
        match solve_affine(&m, &b).unwrap() {
            AffineSolution::Unique(x) => prop_assert_eq!(m.mul_vec(&x), b),
            AffineSolution::Family { particular, kernel } => {
                prop_assert_eq!(m.mul_vec(&particular), b);
                for k in kernel {
                    prop_assert!(m.mul_vec(&k).iter().all(|x| f.is_zero(x)));
                }
            }
            AffineSolution::Inconsistent => prop_assert!(m.rank() < 3),
        }
    }

    #[test]
    fn subspaces_are_canonical(p in small_prime(), vals in prop::collection::vec(0i64..11, 8), mix in prop::collection::vec(0i64..11, 4)) {
        let f = gf(p);
        let rows: Vec<Vec<Scalar>> = vals.chunks(4).map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
        let w = Subspace::span(&f, 4, &rows);
        // an invertible change of basis of the spanning set gives the same RREF
        let (a, b, c, d) = (f.from_i64(mix[0]), f.from_i64(mix[1]), f.from_i64(mix[2]), f.from_i64(mix[3]));
        let det = f.sub(&f.mul(&a, &d), &f.mul(&b, &c));
        prop_assume!(!f.is_zero(&det));
        let comb = |x: &Scalar, y: &Scalar| -> Vec<Scalar> {
            (0..4).map(|i| f.add(&f.mul(x, &rows[0][i]), &f.mul(y, &rows[1][i]))).collect()
        };
        prop_assert_eq!(Subspace::span(&f, 4, &[comb(&a, &b), comb(&c, &d)]), w);
    }

    #[test]
    fn min_poly_annihilates_and_divides_charpoly(p in small_prime(), vals in prop::collection::vec(0i64..11, 9)) {
        let f = gf(p);
        let a = matrix_element(&f, 3, &vals);
        let mp = a.min_poly();
        prop_assert!(a.eval_poly(&mp).is_zero());
        let cp = Matrix::from_i64s(&f, 3, 3, &vals).charpoly();
        prop_assert!(cp.divisible_by(&mp));
    }

    #[test]
    fn lagrange_laws(p in prop::sample::select(vec![3u64, 5, 7]), vals in prop::collection::vec(0i64..7, 9), n in 2usize..4) {
        let f = gf(p);
        let a = matrix_element(&f, n, &vals);
        prop_assume!(in_u(&a).unwrap());
        let (k, roots) = splitting_extension(&a.min_poly()).unwrap();
        let ak = a.base_change(&a.algebra().base_change(&k).unwrap()).unwrap();
        let es = lagrange_idempotents(&ak, &roots).unwrap();
        let alg = ak.algebra();
        let mut total = alg.zero();
        let mut recon = alg.zero();
        for (i, e) in es.iter().enumerate() {
            for (j, g) in es.iter().enumerate() {
                let prod = e * g;
                if i == j { prop_assert_eq!(&prod, e); } else { prop_assert!(prod.is_zero()); }
            }
            total = &total + e;
            recon = &recon + &e.scale(&roots[i]);
        }
        prop_assert_eq!(total, alg.one());
        prop_assert_eq!(recon, ak);
    }

    #[test]
    fn plucker_round_trip(p in prop::sample::select(vec![0u64, 3, 7]), vals in prop::collection::vec(-9i64..9, 8)) {
        let f = if p == 0 { Field::rationals() } else { gf(p) };
        let rows: Vec<Vec<Scalar>> = vals.chunks(4).map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
        let w = Subspace::span(&f, 4, &rows);
        prop_assume!(w.dim() == 2);
        let pt = plucker_embed(&w).unwrap();
        prop_assert!(pt.is_decomposable());
        prop_assert_eq!(plucker_inverse(&pt).unwrap(), w);
    }

    #[test]
    fn wedge_form_scales_by_determinant(g in prop::collection::vec(-5i64..5, 16), x in prop::collection::vec(-5i64..5, 6), y in prop::collection::vec(-5i64..5, 6)) {
        let f = Field::rationals();
        let g = Matrix::from_i64s(&f, 4, 4, &g);
        let h = wedge2_matrix(&g).unwrap();
        let x: Vec<Scalar> = x.iter().map(|&v| f.from_i64(v)).collect();
        let y: Vec<Scalar> = y.iter().map(|&v| f.from_i64(v)).collect();
        let lhs = wedge_form(&f, &h.mul_vec(&x), &h.mul_vec(&y)).unwrap();
        prop_assert_eq!(lhs, f.mul(&g.det(), &wedge_form(&f, &x, &y).unwrap()));
    }

    #[test]
    fn psi_phi_round_trip(l in prop::collection::vec(-6i64..6, 2)) {
        // b = a + l with a = diag(1, 2) and l off-diagonal
        let f = Field::rationals();
        let a = matrix_element(&f, 2, &[1, 0, 0, 2]);
        let cfg = PsiConfig::standard(psi(&a).unwrap(), a.clone()).unwrap();
        let b = matrix_element(&f, 2, &[1, l[0], l[1], 2]);
        prop_assert!(cfg.in_affine_slice(&b));
        prop_assert!(in_u(&b).unwrap());
        prop_assert_eq!(phi(&psi(&b).unwrap(), &cfg).unwrap(), b);
    }

    #[test]
    fn systems_ignore_the_order_of_idempotents(vals in prop::collection::vec(-4i64..4, 9), shift in 0usize..3) {
        let f = Field::rationals();
        let m3 = Algebra::matrix(3, &f).unwrap();
        // conjugate the coordinate idempotents by a unipotent matrix
        let u = m3.element_from_i64s(&[1, vals[0], vals[1], 0, 1, vals[2], 0, 0, 1]).unwrap();
        let uinv = m3.element_from_i64s(&[1, -vals[0], vals[0] * vals[2] - vals[1], 0, 1, -vals[2], 0, 0, 1]).unwrap();
        prop_assert_eq!(&u * &uinv, m3.one());
        let mut es: Vec<Element> = (0..3)
            .map(|i| {
                let mut v = vec![0; 9];
                v[i * 3 + i] = 1;
                &(&u * &m3.element_from_i64s(&v).unwrap()) * &uinv
            })
            .collect();
        let a = IdealSystem::from_idempotents(&m3, es.clone()).unwrap();
        es.rotate_left(shift);
        let b = IdealSystem::from_idempotents(&m3, es).unwrap();
        prop_assert_eq!(&a, &b);
        let e = subalgebra_from_ideal_system(&a).unwrap();
        prop_assert_eq!(e, subalgebra_from_ideal_system(&b).unwrap());
    }
}
