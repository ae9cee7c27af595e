use proptest::prelude::*;

use kf_core::ellcurve::{
    apply_aut, ec_add, endo_degree, fixed_points, graph_intersection, points, EllipticPoint,
    EndoElement,
};
use kf_core::gf::field_make;

#[test]
fn group_law_on_f16() {
    let f16 = field_make(2, 4).unwrap();
    let pts = points(&f16).unwrap();
    for p in &pts {
        for q in &pts {
            let pq = ec_add(p, q).unwrap();
            assert_eq!(pq, ec_add(q, p).unwrap());
            assert_eq!(
                apply_aut(&pq, 1).unwrap(),
                ec_add(&apply_aut(p, 1).unwrap(), &apply_aut(q, 1).unwrap()).unwrap()
            );
            for r in &pts {
                assert_eq!(
                    ec_add(&pq, r).unwrap(),
                    ec_add(p, &ec_add(q, r).unwrap()).unwrap()
                );
            }
        }
        assert_eq!(apply_aut(p, 3).unwrap(), *p);
        assert_eq!(p.scalar_mul(pts.len() as i64), EllipticPoint::Infinity);
    }
}

#[test]
fn three_fixed_points_over_even_degree_fields() {
    for k in [2, 4, 6] {
        let field = field_make(2, k).unwrap();
        assert_eq!(fixed_points(&field).unwrap().len(), 3, "GF(2^{k})");
    }
    assert!(fixed_points(&field_make(2, 3).unwrap()).is_err());
}

#[test]
fn endomorphisms_act_compatibly() {
    let f16 = field_make(2, 4).unwrap();
    let pts = points(&f16).unwrap();
    let es = [EndoElement::new(2, -1), EndoElement::new(1, 1), EndoElement::PHI.pow(2)];
    for e in es {
        for g in es {
            for p in &pts {
                let lhs = (e * g).apply(p).unwrap();
                assert_eq!(lhs, e.apply(&g.apply(p).unwrap()).unwrap());
                let sum = (e + g).apply(p).unwrap();
                assert_eq!(sum, ec_add(&e.apply(p).unwrap(), &g.apply(p).unwrap()).unwrap());
            }
        }
    }
}

proptest! {
    #[test]
    fn degree_is_multiplicative(a in -60i64..60, b in -60i64..60, c in -60i64..60, d in -60i64..60) {
        let (e, f) = (EndoElement::new(a, b), EndoElement::new(c, d));
        prop_assert_eq!(endo_degree(e * f), endo_degree(e) * endo_degree(f));
        prop_assert!(endo_degree(e) >= 0);
        prop_assert_eq!(endo_degree(e) == 0, e == EndoElement::ZERO);
        if e != f {
            prop_assert_eq!(graph_intersection(e, f).unwrap(), endo_degree(e - f));
        }
    }
}

#[test]
fn phi_satisfies_its_minimal_polynomial() {
    let phi = EndoElement::PHI;
    assert_eq!(phi * phi + phi + EndoElement::ONE, EndoElement::ZERO);
    assert_eq!(phi.pow(3), EndoElement::ONE);
    assert_eq!(endo_degree(EndoElement::ONE - phi), 3);
}
