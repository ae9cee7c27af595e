//! The curve y^2 + y = x^3 over GF(2^k), its order-3 automorphism and the
//! endomorphism ring Z[phi] with phi^2 = -1 - phi.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum EllipticPoint {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

fn on_curve(x: &FieldElement, y: &FieldElement) -> bool {
    y * y + y == x * x * x
}

impl EllipticPoint {
    pub fn affine(x: FieldElement, y: FieldElement) -> Result<Self> {
        if x.spec() != y.spec() {
            return Err(Error::FieldMismatch);
        }
        if x.spec().p() != 2 {
            return Err(Error::UnsupportedField("curve is defined in characteristic 2".into()));
        }
        if !on_curve(&x, &y) {
            return Err(Error::NotOnCurve);
        }
        Ok(EllipticPoint::Affine { x, y })
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, EllipticPoint::Infinity)
    }

    pub fn spec(&self) -> Option<&FieldSpec> {
        match self {
            EllipticPoint::Infinity => None,
            EllipticPoint::Affine { x, .. } => Some(x.spec()),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            EllipticPoint::Infinity => EllipticPoint::Infinity,
            EllipticPoint::Affine { x, y } => EllipticPoint::Affine {
                x: x.clone(),
                y: y + &y.spec().one(),
            },
        }
    }

    /// `n * P` by double-and-add; negative `n` uses the inverse.
    pub fn scalar_mul(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.neg() } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = EllipticPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = ec_add(&acc, &base).expect("same field");
            }
            base = ec_add(&base, &base).expect("same field");
            k >>= 1;
        }
        acc
    }
}

impl fmt::Display for EllipticPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EllipticPoint::Infinity => write!(f, "inf"),
            EllipticPoint::Affine { x, y } => write!(f, "({x},{y})"),
        }
    }
}

pub fn ec_add(p: &EllipticPoint, q: &EllipticPoint) -> Result<EllipticPoint> {
    let (x1, y1, x2, y2) = match (p, q) {
        (EllipticPoint::Infinity, _) => return Ok(q.clone()),
        (_, EllipticPoint::Infinity) => return Ok(p.clone()),
        (EllipticPoint::Affine { x: x1, y: y1 }, EllipticPoint::Affine { x: x2, y: y2 }) => {
            (x1, y1, x2, y2)
        }
    };
    if x1.spec() != x2.spec() {
        return Err(Error::FieldMismatch);
    }
    let one = x1.spec().one();
    let lambda = if x1 != x2 {
        (y1 + y2) / (x1 + x2)
    } else if y2 == &(y1 + &one) {
        return Ok(EllipticPoint::Infinity);
    } else {
        x1 * x1
    };
    let x3 = &lambda * &lambda + x1 + x2;
    let y3 = lambda * (x1 + &x3) + y1 + one;
    Ok(EllipticPoint::Affine { x: x3, y: y3 })
}

/// `(x, y) -> (zeta^power x, y)`.
pub fn apply_aut(p: &EllipticPoint, power: u32) -> Result<EllipticPoint> {
    match p {
        EllipticPoint::Infinity => Ok(EllipticPoint::Infinity),
        EllipticPoint::Affine { x, y } => {
            let zeta = x.spec().zeta()?;
            Ok(EllipticPoint::Affine {
                x: zeta.pow(power as u64) * x,
                y: y.clone(),
            })
        }
    }
}

/// All points of E over the field, infinity first.
pub fn points(spec: &FieldSpec) -> Result<Vec<EllipticPoint>> {
    if spec.p() != 2 {
        return Err(Error::UnsupportedField("curve is defined in characteristic 2".into()));
    }
    let mut artin_schreier: HashMap<FieldElement, Vec<FieldElement>> = HashMap::new();
    for y in spec.elements() {
        artin_schreier.entry(&y * &y + &y).or_default().push(y);
    }
    let mut pts = vec![EllipticPoint::Infinity];
    for x in spec.elements() {
        let c = &x * &x * &x;
        if let Some(ys) = artin_schreier.get(&c) {
            for y in ys {
                pts.push(EllipticPoint::Affine {
                    x: x.clone(),
                    y: y.clone(),
                });
            }
        }
    }
    Ok(pts)
}

pub fn count_points(spec: &FieldSpec) -> Result<u64> {
    Ok(points(spec)?.len() as u64)
}

pub fn fixed_points(spec: &FieldSpec) -> Result<Vec<EllipticPoint>> {
    spec.zeta()?;
    let mut out = Vec::new();
    for pt in points(spec)? {
        if apply_aut(&pt, 1)? == pt {
            out.push(pt);
        }
    }
    Ok(out)
}

/// `a + b phi` in Z[phi], phi^2 = -1 - phi.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct EndoElement {
    pub a: i64,
    pub b: i64,
}

impl EndoElement {
    pub const ZERO: EndoElement = EndoElement { a: 0, b: 0 };
    pub const ONE: EndoElement = EndoElement { a: 1, b: 0 };
    pub const PHI: EndoElement = EndoElement { a: 0, b: 1 };

    pub fn new(a: i64, b: i64) -> Self {
        EndoElement { a, b }
    }

    pub fn pow(self, n: u32) -> Self {
        (0..n).fold(Self::ONE, |acc, _| acc * self)
    }

    /// Action on a point: `a P + b phi(P)`.
    pub fn apply(&self, p: &EllipticPoint) -> Result<EllipticPoint> {
        let phi_p = apply_aut(p, 1)?;
        ec_add(&p.scalar_mul(self.a), &phi_p.scalar_mul(self.b))
    }
}

impl Add for EndoElement {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        EndoElement::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for EndoElement {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        EndoElement::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for EndoElement {
    type Output = Self;
    fn neg(self) -> Self {
        EndoElement::new(-self.a, -self.b)
    }
}

impl Mul for EndoElement {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        // (a + b phi)(c + d phi) = ac + (ad + bc) phi + bd phi^2
        let bd = self.b * o.b;
        EndoElement::new(self.a * o.a - bd, self.a * o.b + self.b * o.a - bd)
    }
}

impl fmt::Display for EndoElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}phi", self.a, self.b)
    }
}

/// Norm `a^2 - ab + b^2`.
pub fn endo_degree(e: EndoElement) -> i64 {
    e.a * e.a - e.a * e.b + e.b * e.b
}

/// Intersection number of the graphs of two distinct endomorphisms.
pub fn graph_intersection(e: EndoElement, f: EndoElement) -> Result<i64> {
    if e == f {
        return Err(Error::InvalidArgument("graphs coincide".into()));
    }
    Ok(endo_degree(e - f))
}

/// Intersection of a graph with the vertical fiber `0 x E`.
pub fn graph_dot_vertical(_e: EndoElement) -> i64 {
    1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_make;

    fn pt(spec: &FieldSpec, x: &str, y: &str) -> EllipticPoint {
        EllipticPoint::affine(spec.parse_element(x).unwrap(), spec.parse_element(y).unwrap())
            .unwrap()
    }

    #[test]
    fn small_group_law() {
        let f2 = field_make(2, 1).unwrap();
        let p = pt(&f2, "0", "0");
        let q = pt(&f2, "0", "1");
        assert_eq!(ec_add(&p, &EllipticPoint::Infinity).unwrap(), p);
        assert!(ec_add(&p, &q).unwrap().is_infinity());
        assert_eq!(ec_add(&p, &p).unwrap(), q);
        assert!(p.scalar_mul(3).is_infinity());
    }

    #[test]
    fn rejects_off_curve_and_mixed_fields() {
        let f2 = field_make(2, 1).unwrap();
        let f4 = field_make(2, 2).unwrap();
        assert_eq!(
            EllipticPoint::affine(f2.one(), f2.zero()),
            Err(Error::NotOnCurve)
        );
        let p = pt(&f2, "0", "0");
        let q = pt(&f4, "0", "0");
        assert_eq!(ec_add(&p, &q), Err(Error::FieldMismatch));
    }

    #[test]
    fn counts() {
        assert_eq!(count_points(&field_make(2, 1).unwrap()).unwrap(), 3);
        assert_eq!(count_points(&field_make(2, 2).unwrap()).unwrap(), 9);
        assert!(count_points(&field_make(3, 1).unwrap()).is_err());
    }

    #[test]
    fn automorphism_fixed_points() {
        let f4 = field_make(2, 2).unwrap();
        let fixed = fixed_points(&f4).unwrap();
        assert_eq!(fixed.len(), 3);
        assert!(fixed.contains(&EllipticPoint::Infinity));
        assert!(fixed.contains(&pt(&f4, "0", "0")));
        assert!(fixed.contains(&pt(&f4, "0", "1")));
        assert_eq!(fixed_points(&field_make(2, 3).unwrap()), Err(Error::NoCubeRootOfUnity));
    }

    #[test]
    fn endomorphism_degrees() {
        let phi = EndoElement::PHI;
        assert_eq!(phi * phi, EndoElement::new(-1, -1));
        assert_eq!(phi.pow(3), EndoElement::ONE);
        assert_eq!(endo_degree(phi - EndoElement::ONE), 3);
        assert_eq!(endo_degree(EndoElement::ONE), 1);
        assert_eq!(endo_degree(EndoElement::new(-1, -2)), 3);
        assert_eq!(graph_intersection(EndoElement::ONE, phi).unwrap(), 3);
        assert_eq!(graph_intersection(phi * phi, phi).unwrap(), 3);
        assert_eq!(graph_intersection(EndoElement::ONE, EndoElement::ZERO).unwrap(), 1);
        assert!(graph_intersection(phi, phi).is_err());
    }

    #[test]
    fn endo_action_matches_ring() {
        let f16 = field_make(2, 4).unwrap();
        let pts = points(&f16).unwrap();
        let e = EndoElement::new(2, -1);
        let f = EndoElement::new(1, 3);
        for p in &pts {
            let lhs = (e * f).apply(p).unwrap();
            let rhs = e.apply(&f.apply(p).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
