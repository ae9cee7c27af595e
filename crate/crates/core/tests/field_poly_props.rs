use proptest::prelude::*;

use kf_core::gf::{arith, field_make, ArithOp, FieldElement, FieldSpec};
use kf_core::poly::{distinct_projective_roots, p1_points, BinaryForm, MultiPoly};

fn f(p: u8, k: u32) -> FieldSpec {
    field_make(p, k).unwrap()
}

const SMALL: [(u8, u32); 7] = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 4)];

#[test]
fn fermat_and_inverses_by_enumeration() {
    for (p, k) in SMALL {
        let field = f(p, k);
        let q = field.order();
        for a in field.units() {
            assert!(a.pow(q - 1).is_one(), "{a} in GF({p}^{k})");
            assert!((&a * &a.inv().unwrap()).is_one());
        }
        assert!(field.zero().inv().is_err());
    }
}

#[test]
fn frobenius_is_a_ring_map() {
    for (p, k) in SMALL {
        let field = f(p, k);
        let els: Vec<FieldElement> = field.elements().collect();
        for a in &els {
            for b in &els {
                assert_eq!((a + b).frobenius(), &a.frobenius() + &b.frobenius());
                assert_eq!((a * b).frobenius(), &a.frobenius() * &b.frobenius());
                assert_eq!((a + b).pow(p as u64), &a.pow(p as u64) + &b.pow(p as u64));
            }
            assert_eq!(a.frobenius().pth_root(), *a);
        }
    }
}

#[test]
fn embeddings_are_injective_ring_maps() {
    for (p, m, k) in [(2, 1, 2), (2, 2, 4), (2, 2, 8), (2, 4, 8), (2, 2, 6), (3, 1, 2), (3, 2, 4)] {
        let (src, dst) = (f(p, m), f(p, k));
        let els: Vec<FieldElement> = src.elements().collect();
        let images: Vec<FieldElement> = els.iter().map(|a| a.embed(&dst).unwrap()).collect();
        let distinct: std::collections::HashSet<_> = images.iter().collect();
        assert_eq!(distinct.len(), els.len(), "GF({p}^{m}) -> GF({p}^{k})");
        for (a, ea) in els.iter().zip(&images) {
            assert!(ea.in_subfield(m).unwrap());
            for (b, eb) in els.iter().zip(&images) {
                for op in [ArithOp::Add, ArithOp::Sub, ArithOp::Mul] {
                    let lhs = arith(a, Some(b), op).unwrap().embed(&dst).unwrap();
                    assert_eq!(lhs, arith(ea, Some(eb), op).unwrap());
                }
            }
        }
    }
    assert!(f(2, 4).generator().embed(&f(2, 6)).is_err());
}

#[test]
fn canonical_moduli() {
    assert_eq!(f(2, 2).modulus(), &[1, 1, 1]);
    assert_eq!(f(2, 4).modulus(), &[1, 1, 0, 0, 1]);
    assert_eq!(f(2, 8).modulus(), &[1, 0, 1, 1, 1, 0, 0, 0, 1]);
    assert_eq!(f(2, 2).zeta().unwrap().to_string(), "01");
}

fn random_multipoly(field: &FieldSpec, terms: &[(u64, [u32; 3])]) -> MultiPoly {
    let ring = MultiPoly::zero(field, &["x", "y", "z"]);
    terms.iter().fold(ring.zero_like(), |acc, (c, e)| {
        &acc + &ring.monomial_like(field.from_index(c % field.order()), e.to_vec())
    })
}

fn terms() -> impl Strategy<Value = Vec<(u64, [u32; 3])>> {
    prop::collection::vec((0u64..81, [0u32..4, 0u32..4, 0u32..4]), 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multipoly_frobenius(ta in terms(), tb in terms(), p in prop::sample::select(vec![2u8, 3])) {
        let field = f(p, 2);
        let (a, b) = (random_multipoly(&field, &ta), random_multipoly(&field, &tb));
        let lhs = (&a - &b).pow(p as u32);
        let rhs = &a.pow(p as u32) - &b.pow(p as u32);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn root_counts_against_enumeration(coeffs in prop::collection::vec(0u64..4, 2..=5)) {
        let f4 = f(2, 2);
        let h = BinaryForm::new(&f4, coeffs.iter().map(|&c| f4.from_index(c)).collect()).unwrap();
        prop_assume!(!h.is_zero());
        // Irreducible factors over F4 have degree <= 4, so every root lies in
        // GF(2^8) or GF(2^6); the two meet in F4.
        let roots_in = |k: u32| {
            let big = f(2, k);
            let e = h.embed(&big).unwrap();
            p1_points(&big)
                .into_iter()
                .filter(|[t0, t1]| e.eval(t0, t1).unwrap().is_zero())
                .count()
        };
        let union = roots_in(8) + roots_in(6) - roots_in(2);
        let count = distinct_projective_roots(&h).unwrap();
        prop_assert_eq!(count, union);
        prop_assert!(count <= h.degree());
    }

    #[test]
    fn root_counts_add_on_coprime_products(
        ab in (2usize..=4).prop_flat_map(|n| {
            (prop::collection::vec(0u64..16, n), prop::collection::vec(0u64..16, n))
        }),
    ) {
        let (a, b) = ab;
        let f16 = f(2, 4);
        let form = |c: &[u64]| BinaryForm::new(&f16, c.iter().map(|&x| f16.from_index(x)).collect()).unwrap();
        let (h1, h2) = (form(&a), form(&b));
        prop_assume!(!h1.is_zero() && !h2.is_zero());
        prop_assume!(kf_core::poly::common_zero_free(&h1, &h2).unwrap());
        let prod = h1.try_mul(&h2).unwrap();
        prop_assert_eq!(
            distinct_projective_roots(&prod).unwrap(),
            distinct_projective_roots(&h1).unwrap() + distinct_projective_roots(&h2).unwrap()
        );
    }

    #[test]
    fn squarefree_iff_full_count(a in prop::collection::vec(0u64..4, 2..=3)) {
        let f4 = f(2, 2);
        let h = BinaryForm::new(&f4, a.iter().map(|&x| f4.from_index(x)).collect()).unwrap();
        prop_assume!(!h.is_zero());
        let sq = h.try_mul(&h).unwrap();
        prop_assert_eq!(distinct_projective_roots(&sq).unwrap(), distinct_projective_roots(&h).unwrap());
        if h.degree() > 0 {
            prop_assert!(distinct_projective_roots(&sq).unwrap() < sq.degree());
        }
    }
}

#[test]
fn root_count_examples() {
    let f2 = f(2, 1);
    let count = |s: &str| distinct_projective_roots(&BinaryForm::parse(&f2, s).unwrap()).unwrap();
    assert_eq!(count("1,0,0"), 1);
    assert_eq!(count("1,1,0"), 2);
    assert_eq!(count("1,1,1"), 2);
}
