//! Divisor classes on E x E spanned by the curves C1 = E x 0, C2 = 0 x E,
//! C3 = diagonal, C4 = graph of phi; alpha_2 positions and the sublattice
//! V_B they cut out.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::ellcurve::{endo_degree, EndoElement};
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::lattice::{
    a2_block, gram_det, hyperbolic_plane, row_basis, sublattice_disc, IntLattice, IntMatrix,
    Sublattice,
};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Basis {
    /// C1, C2, C3, C4
    C,
    /// C1, C2, C3 - C1 - C2, C4 - C1 - C2
    Primed,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct DivisorClass {
    pub coeffs: [i64; 4],
    pub basis: Basis,
}

impl DivisorClass {
    pub fn c(coeffs: [i64; 4]) -> Self {
        DivisorClass {
            coeffs,
            basis: Basis::C,
        }
    }

    pub fn primed(coeffs: [i64; 4]) -> Self {
        DivisorClass {
            coeffs,
            basis: Basis::Primed,
        }
    }

    /// The curve C_j for j in 1..=4.
    pub fn curve(j: usize) -> Result<Self> {
        if !(1..=4).contains(&j) {
            return Err(Error::InvalidArgument(format!("no basis curve C{j}")));
        }
        let mut coeffs = [0; 4];
        coeffs[j - 1] = 1;
        Ok(Self::c(coeffs))
    }

    pub fn to_c(self) -> Self {
        match self.basis {
            Basis::C => self,
            Basis::Primed => {
                let [m1, m2, m3, m4] = self.coeffs;
                Self::c([m1 - m3 - m4, m2 - m3 - m4, m3, m4])
            }
        }
    }

    pub fn to_primed(self) -> Self {
        match self.basis {
            Basis::Primed => self,
            Basis::C => {
                let [n1, n2, n3, n4] = self.coeffs;
                Self::primed([n1 + n3 + n4, n2 + n3 + n4, n3, n4])
            }
        }
    }

    pub fn add(self, other: Self) -> Self {
        let (a, b) = (self.to_c().coeffs, other.to_c().coeffs);
        Self::c([a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]])
    }

    pub fn scale(self, k: i64) -> Self {
        let a = self.coeffs;
        DivisorClass {
            coeffs: [k * a[0], k * a[1], k * a[2], k * a[3]],
            basis: self.basis,
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.basis {
            Basis::C => "C",
            Basis::Primed => "C'",
        };
        let [a, b, c, d] = self.coeffs;
        write!(f, "{name}({a},{b},{c},{d})")
    }
}

/// Gram matrix in the primed basis: hyperbolic plane plus an A2 block.
pub fn gram_primed() -> IntMatrix {
    IntMatrix::block_diagonal(&[hyperbolic_plane(), a2_block()])
}

/// Gram matrix in the C basis.
pub fn gram_c() -> IntMatrix {
    IntMatrix::from_i64(&[
        vec![0, 1, 1, 1],
        vec![1, 0, 1, 1],
        vec![1, 1, 0, 3],
        vec![1, 1, 3, 0],
    ])
}

/// V_A in the C basis.
pub fn va_lattice() -> IntLattice {
    IntLattice::new(gram_c())
        .and_then(|l| l.with_labels(vec!["C1".into(), "C2".into(), "C3".into(), "C4".into()]))
        .expect("fixed Gram matrix is symmetric")
}

pub fn intersect(d1: DivisorClass, d2: DivisorClass) -> i64 {
    let (a, b) = (d1.to_primed().coeffs, d2.to_primed().coeffs);
    let g = gram_primed();
    let mut acc = BigInt::zero();
    for i in 0..4 {
        for j in 0..4 {
            acc += g.get(i, j) * a[i] * b[j];
        }
    }
    acc.to_i64().expect("small intersection number")
}

/// Intersection numbers of the graph of `e` with C1..C4.
pub fn graph_pairings(e: EndoElement) -> [i64; 4] {
    [
        endo_degree(e),
        1,
        endo_degree(e - EndoElement::ONE),
        endo_degree(e - EndoElement::PHI),
    ]
}

/// Class of the graph of `e`, determined by its pairings with C1..C4.
pub fn class_of_graph(e: EndoElement) -> Result<DivisorClass> {
    let rhs = graph_pairings(e);
    let g = gram_c();
    let det = g.determinant();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let mut x = [0i64; 4];
    for (col, xi) in x.iter_mut().enumerate() {
        let mut m = g.clone();
        for (row, &r) in rhs.iter().enumerate() {
            m.set(row, col, BigInt::from(r));
        }
        let num = m.determinant();
        if !(&num % &det).is_zero() {
            return Err(Error::NonIntegral(format!("coordinate {num}/{det} for {e}")));
        }
        *xi = (num / &det).to_i64().expect("small coordinate");
    }
    Ok(DivisorClass::c(x))
}

/// The class of C_j for j in 1..=5; C5 is the graph of phi^2.
pub fn curve_class(j: usize) -> Result<DivisorClass> {
    match j {
        1..=4 => DivisorClass::curve(j),
        5 => class_of_graph(EndoElement::PHI * EndoElement::PHI),
        _ => Err(Error::InvalidArgument(format!("no curve C{j}"))),
    }
}

/// `D^2 / 2`.
pub fn euler_char(d: DivisorClass) -> i64 {
    let sq = intersect(d, d);
    debug_assert!(sq % 2 == 0, "odd self-intersection");
    sq / 2
}

/// Nonzero 0/1 primed vectors with even Euler characteristic.
pub fn even_chi_vectors() -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for mask in 1u32..16 {
        let v: [i64; 4] = std::array::from_fn(|i| ((mask >> (3 - i)) & 1) as i64);
        if euler_char(DivisorClass::primed(v)) % 2 == 0 {
            out.push(v);
        }
    }
    out
}

/// A point `(i:j)` of P^1, stored as `(1:j/i)` or `(0:1)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AlphaPosition {
    i: FieldElement,
    j: FieldElement,
}

impl AlphaPosition {
    pub fn new(i: FieldElement, j: FieldElement) -> Result<Self> {
        if i.spec() != j.spec() {
            return Err(Error::FieldMismatch);
        }
        let spec = i.spec().clone();
        if i.is_zero() {
            if j.is_zero() {
                return Err(Error::InvalidArgument("(0:0) is not a point".into()));
            }
            return Ok(AlphaPosition {
                i: spec.zero(),
                j: spec.one(),
            });
        }
        let j = &j / &i;
        Ok(AlphaPosition { i: spec.one(), j })
    }

    pub fn i(&self) -> &FieldElement {
        &self.i
    }

    pub fn j(&self) -> &FieldElement {
        &self.j
    }

    pub fn spec(&self) -> &FieldSpec {
        self.i.spec()
    }

    /// All points of P^1 over the field.
    pub fn all(spec: &FieldSpec) -> Vec<AlphaPosition> {
        crate::poly::p1_points(spec)
            .into_iter()
            .map(|[i, j]| AlphaPosition { i, j })
            .collect()
    }

    /// Whether the point is defined over F4.
    pub fn in_p1_f4(&self) -> Result<bool> {
        if !self.spec().contains_f4() {
            return Err(Error::NoCubeRootOfUnity);
        }
        Ok(self.i.in_subfield(2)? && self.j.in_subfield(2)?)
    }
}

impl fmt::Display for AlphaPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.i, self.j)
    }
}

/// Tangent direction of C_j at the origin.
pub fn curve_direction(j: usize, spec: &FieldSpec) -> Result<AlphaPosition> {
    let zeta = spec.zeta()?;
    let (a, b) = match j {
        1 => (spec.one(), spec.zero()),
        2 => (spec.zero(), spec.one()),
        3 => (spec.one(), spec.one()),
        4 => (spec.one(), zeta),
        5 => (spec.one(), &zeta * &zeta),
        _ => return Err(Error::InvalidArgument(format!("no curve C{j}"))),
    };
    AlphaPosition::new(a, b)
}

/// The curve C_j whose tangent direction is `pos`, if any.
pub fn containing_curve(pos: &AlphaPosition) -> Result<Option<usize>> {
    for j in 1..=5 {
        if &curve_direction(j, pos.spec())? == pos {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// V_B inside V_A (C basis): 2V_A plus the class of the curve containing
/// the subgroup, if one does.
pub fn v_b_lattice(pos: &AlphaPosition) -> Result<Sublattice> {
    let mut gens: Vec<Vec<i64>> = (0..4)
        .map(|i| {
            let mut v = vec![0; 4];
            v[i] = 2;
            v
        })
        .collect();
    if let Some(j) = containing_curve(pos)? {
        gens.push(curve_class(j)?.to_c().coeffs.to_vec());
    }
    let basis = row_basis(&IntMatrix::from_i64(&gens));
    Sublattice::new(va_lattice(), basis.transpose())
}

/// `dim_F2 V_A / V_B`, from the Smith form of the inclusion. Checked against
/// the rule "3 on P^1(F4), 4 elsewhere".
pub fn compute_v(pos: &AlphaPosition) -> Result<u32> {
    let vb = v_b_lattice(pos)?;
    let invariants = vb.quotient_invariants();
    if invariants.iter().any(|d| d != &BigInt::from(2)) {
        return Err(Error::Verification(format!(
            "V_A/V_B is not killed by 2: {invariants:?}"
        )));
    }
    let v = invariants.len() as u32;
    let rule = if pos.in_p1_f4()? { 3 } else { 4 };
    if v != rule {
        return Err(Error::Verification(format!(
            "structural v = {v} disagrees with the F4 rule {rule} at {pos}"
        )));
    }
    Ok(v)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PositionReport {
    pub v: u32,
    pub vb_disc: BigInt,
    pub in_p1_f4: bool,
    pub containing_curve: Option<usize>,
}

pub fn classify_position(pos: &AlphaPosition) -> Result<PositionReport> {
    let v = compute_v(pos)?;
    let vb = v_b_lattice(pos)?;
    let vb_disc = sublattice_disc(&vb)?;
    let expected = gram_det(&va_lattice()) * (BigInt::one() << (2 * v));
    if vb_disc != expected {
        return Err(Error::Verification(format!(
            "disc(V_B) = {vb_disc}, expected {expected}"
        )));
    }
    Ok(PositionReport {
        v,
        vb_disc,
        in_p1_f4: pos.in_p1_f4()?,
        containing_curve: containing_curve(pos)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_make;

    #[test]
    fn gram_bases_agree() {
        for a in 1..=4 {
            for b in 1..=4 {
                let ca = DivisorClass::curve(a).unwrap();
                let cb = DivisorClass::curve(b).unwrap();
                assert_eq!(
                    BigInt::from(intersect(ca, cb)),
                    gram_c().get(a - 1, b - 1).clone()
                );
            }
        }
        assert_eq!(gram_c().determinant(), BigInt::from(-3));
        let c3 = DivisorClass::curve(3).unwrap();
        let c4 = DivisorClass::curve(4).unwrap();
        assert_eq!(intersect(c3, c4), 3);
        assert_eq!(
            intersect(DivisorClass::primed([0, 0, 1, 0]), DivisorClass::primed([0, 0, 0, 1])),
            1
        );
    }

    #[test]
    fn basis_round_trip() {
        let d = DivisorClass::c([3, -2, 5, 7]);
        assert_eq!(d.to_primed().to_c(), d);
        let e = DivisorClass::primed([1, 1, -1, -1]);
        assert_eq!(e.to_c().to_primed(), e);
    }

    #[test]
    fn graph_classes() {
        let phi = EndoElement::PHI;
        assert_eq!(class_of_graph(phi).unwrap(), DivisorClass::c([0, 0, 0, 1]));
        assert_eq!(class_of_graph(EndoElement::ONE).unwrap(), DivisorClass::c([0, 0, 1, 0]));
        assert_eq!(class_of_graph(EndoElement::ZERO).unwrap(), DivisorClass::c([1, 0, 0, 0]));
        let c5 = class_of_graph(phi * phi).unwrap();
        assert_eq!(c5, DivisorClass::c([3, 3, -1, -1]));
        assert_eq!(c5.to_primed(), DivisorClass::primed([1, 1, -1, -1]));
        assert_eq!(intersect(c5, c5), 0);
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(euler_char(DivisorClass::primed([1, 1, 1, 0])), 0);
        assert_eq!(euler_char(DivisorClass::primed([0, 0, 1, 0])), -1);
        assert_eq!(euler_char(DivisorClass::primed([1, 1, 1, 1])), 0);
        let even = even_chi_vectors();
        assert_eq!(even.len(), 5);
        assert!(!even.contains(&[0, 0, 1, 1]));
    }

    #[test]
    fn directions_exhaust_p1_f4() {
        let f4 = field_make(2, 2).unwrap();
        let dirs: Vec<_> = (1..=5).map(|j| curve_direction(j, &f4).unwrap()).collect();
        let all = AlphaPosition::all(&f4);
        assert_eq!(all.len(), 5);
        for d in &all {
            assert_eq!(dirs.iter().filter(|x| *x == d).count(), 1);
        }
        assert!(curve_direction(6, &f4).is_err());
        assert!(curve_direction(1, &field_make(2, 3).unwrap()).is_err());
    }

    #[test]
    fn v_values() {
        let f16 = field_make(2, 4).unwrap();
        let one = f16.one();
        let p10 = AlphaPosition::new(one.clone(), f16.zero()).unwrap();
        assert_eq!(compute_v(&p10).unwrap(), 3);
        let pz = AlphaPosition::new(one.clone(), f16.zeta().unwrap()).unwrap();
        assert_eq!(compute_v(&pz).unwrap(), 3);
        let pw = AlphaPosition::new(one.clone(), f16.generator()).unwrap();
        assert_eq!(compute_v(&pw).unwrap(), 4);
        let r = classify_position(&AlphaPosition::new(one.clone(), one).unwrap()).unwrap();
        assert_eq!(r.vb_disc, BigInt::from(-192));
        assert_eq!(r.containing_curve, Some(3));
        assert_eq!(classify_position(&pw).unwrap().vb_disc, BigInt::from(-768));
    }

    #[test]
    fn normalization() {
        let f16 = field_make(2, 4).unwrap();
        let w = f16.generator();
        let zeta = f16.zeta().unwrap();
        let a = AlphaPosition::new(w.clone(), &w * &w).unwrap();
        let b = AlphaPosition::new(&w * &zeta, &(&w * &w) * &zeta).unwrap();
        assert_eq!(a, b);
        assert!(AlphaPosition::new(f16.zero(), f16.zero()).is_err());
    }
}
