//! Finite fields GF(p^k) for p in {2, 3}.
//!
//! Elements are coefficient vectors over F_p in the power basis of a root of
//! the field's modulus, stored little-endian. The canonical modulus for each
//! `(p, k)` is the least primitive polynomial when coefficient vectors are
//! read as base-p integers (coefficient of `x^0` least significant).

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 16;

// Little-endian coefficient lists, constant term first, monic.
const MODULI_P2: [&[u8]; 16] = [
    &[1, 1],
    &[1, 1, 1],
    &[1, 1, 0, 1],
    &[1, 1, 0, 0, 1],
    &[1, 0, 1, 0, 0, 1],
    &[1, 1, 0, 0, 0, 0, 1],
    &[1, 1, 0, 0, 0, 0, 0, 1],
    &[1, 0, 1, 1, 1, 0, 0, 0, 1],
    &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1],
    &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1],
    &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    &[1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1],
    &[1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    &[1, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    &[1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
];

const MODULI_P3: [&[u8]; 16] = [
    &[1, 1],
    &[2, 1, 1],
    &[1, 2, 0, 1],
    &[2, 1, 0, 0, 1],
    &[1, 2, 0, 0, 0, 1],
    &[2, 1, 0, 0, 0, 0, 1],
    &[1, 2, 1, 0, 0, 0, 0, 1],
    &[2, 0, 0, 1, 0, 0, 0, 0, 1],
    &[1, 0, 1, 2, 0, 0, 0, 0, 0, 1],
    &[2, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1],
    &[1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    &[2, 2, 2, 1, 2, 0, 0, 0, 0, 0, 0, 0, 1],
    &[1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    &[2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    &[1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    &[2, 2, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
];

#[derive(Debug, PartialEq, Eq, Hash)]
struct SpecData {
    p: u8,
    k: u32,
    modulus: Vec<u8>,
}

/// A finite field GF(p^k) given by a monic irreducible modulus.
///
/// Cloning is cheap; canonical specs are shared through a process-wide cache.
#[derive(Clone)]
pub struct FieldSpec(Arc<SpecData>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for FieldSpec {}

impl Hash for FieldSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.k)
    }
}

fn check_p(p: u8) -> Result<()> {
    if p == 2 || p == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedField(format!("characteristic {p}")))
    }
}

fn check_k(k: u32) -> Result<()> {
    if (1..=MAX_DEGREE).contains(&k) {
        Ok(())
    } else {
        Err(Error::UnsupportedField(format!("degree {k}")))
    }
}

/// The canonical field GF(p^k).
pub fn field_make(p: u8, k: u32) -> Result<FieldSpec> {
    check_p(p)?;
    check_k(k)?;
    static CANON: OnceLock<Mutex<HashMap<(u8, u32), FieldSpec>>> = OnceLock::new();
    let cache = CANON.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(spec) = cache.lock().unwrap().get(&(p, k)) {
        return Ok(spec.clone());
    }
    let table = if p == 2 { &MODULI_P2 } else { &MODULI_P3 };
    let spec = FieldSpec::with_modulus(p, table[(k - 1) as usize].to_vec())?;
    cache.lock().unwrap().insert((p, k), spec.clone());
    Ok(spec)
}

impl FieldSpec {
    /// Field with an explicit modulus (little-endian, monic). Irreducibility
    /// is checked by trial division.
    pub fn with_modulus(p: u8, modulus: Vec<u8>) -> Result<Self> {
        check_p(p)?;
        if modulus.len() < 2 {
            return Err(Error::UnsupportedField("modulus of degree 0".into()));
        }
        let k = (modulus.len() - 1) as u32;
        check_k(k)?;
        if modulus.iter().any(|&c| c >= p) || *modulus.last().unwrap() != 1 {
            return Err(Error::UnsupportedField(format!(
                "modulus {modulus:?} is not a monic polynomial over F_{p}"
            )));
        }
        if !fp_is_irreducible(&modulus, p) {
            return Err(Error::Reducible {
                p,
                modulus: fp_display(&modulus),
            });
        }
        Ok(FieldSpec(Arc::new(SpecData { p, k, modulus })))
    }

    pub fn p(&self) -> u8 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn modulus(&self) -> &[u8] {
        &self.0.modulus
    }

    /// Number of elements, p^k.
    pub fn order(&self) -> u64 {
        (self.0.p as u64).pow(self.0.k)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            spec: self.clone(),
            coeffs: vec![0; self.0.k as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = n.rem_euclid(self.0.p as i64) as u8;
        e
    }

    /// The class of `x` modulo the field's modulus.
    pub fn generator(&self) -> FieldElement {
        let mut e = self.zero();
        if self.0.k == 1 {
            let c0 = self.0.modulus[0];
            e.coeffs[0] = (self.0.p - c0) % self.0.p;
        } else {
            e.coeffs[1] = 1;
        }
        e
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<u8>) -> Result<FieldElement> {
        let k = self.0.k as usize;
        if coeffs.len() > k || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::Parse(format!(
                "coefficients {coeffs:?} do not describe an element of {self:?}"
            )));
        }
        coeffs.resize(k, 0);
        Ok(FieldElement {
            spec: self.clone(),
            coeffs,
        })
    }

    /// The element whose base-p digits (constant coefficient least
    /// significant) spell `index`.
    pub fn from_index(&self, mut index: u64) -> FieldElement {
        let p = self.0.p as u64;
        let mut e = self.zero();
        for c in e.coeffs.iter_mut() {
            *c = (index % p) as u8;
            index /= p;
        }
        e
    }

    /// All p^k elements: zero first, then in increasing `index` order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    /// Nonzero elements in enumeration order.
    pub fn units(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.order()).map(move |i| self.from_index(i))
    }

    pub fn contains_f4(&self) -> bool {
        self.0.p == 2 && self.0.k.is_multiple_of(2)
    }

    /// The primitive cube root of unity: the canonical image of the
    /// generator of F4.
    pub fn zeta(&self) -> Result<FieldElement> {
        if !self.contains_f4() {
            return Err(Error::NoCubeRootOfUnity);
        }
        let f4 = field_make(2, 2)?;
        f4.generator().embed(self)
    }

    /// A primitive m-th root of unity, `g^((q-1)/m)`.
    pub fn root_of_unity(&self, m: u64) -> Result<FieldElement> {
        let q1 = self.order() - 1;
        if m == 0 || !q1.is_multiple_of(m) {
            return Err(Error::InvalidArgument(format!(
                "{self:?} has no primitive {m}-th root of unity"
            )));
        }
        Ok(self.generator().pow(q1 / m))
    }

    /// Parses an element. Accepted forms: a little-endian digit string
    /// (`"01"` is the generator), `g`, `w` or `z` for the generator, `zeta`
    /// for the cube root of unity, each optionally followed by `^n`.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let text = text.trim();
        let (base, exp) = match text.split_once('^') {
            Some((b, e)) => {
                let e: u64 = e
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {text:?}")))?;
                (b.trim(), Some(e))
            }
            None => (text, None),
        };
        let value = match base {
            "g" | "w" | "z" | "x" => self.generator(),
            "zeta" => self.zeta()?,
            digits if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) => {
                let coeffs = digits
                    .chars()
                    .map(|c| c.to_digit(10).unwrap() as u8)
                    .collect::<Vec<_>>();
                self.from_coeffs(coeffs)?
            }
            _ => return Err(Error::Parse(format!("cannot parse field element {text:?}"))),
        };
        Ok(match exp {
            Some(e) => value.pow(e),
            None => value,
        })
    }
}

/// All elements of the field, in enumeration order.
pub fn enumerate(spec: &FieldSpec) -> Vec<FieldElement> {
    spec.elements().collect()
}

/// An element of GF(p^k).
#[derive(Clone)]
pub struct FieldElement {
    spec: FieldSpec,
    coeffs: Vec<u8>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.spec == other.spec
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.spec.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.coeffs {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub fn index(&self) -> u64 {
        let p = self.spec.0.p as u64;
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c as u64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn add_raw(&self, other: &Self) -> Self {
        let p = self.spec.0.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % p)
            .collect();
        FieldElement {
            spec: self.spec.clone(),
            coeffs,
        }
    }

    fn neg_raw(&self) -> Self {
        let p = self.spec.0.p;
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FieldElement {
            spec: self.spec.clone(),
            coeffs,
        }
    }

    fn mul_raw(&self, other: &Self) -> Self {
        let p = self.spec.0.p as u32;
        let k = self.spec.0.k as usize;
        let modulus = &self.spec.0.modulus;
        let mut acc = vec![0u32; 2 * k - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] += a as u32 * b as u32;
            }
        }
        for d in (k..acc.len()).rev() {
            let c = acc[d] % p;
            if c != 0 {
                for t in 0..k {
                    acc[d - k + t] += c * (p - modulus[t] as u32);
                }
            }
        }
        let coeffs = acc[..k].iter().map(|&c| (c % p) as u8).collect();
        FieldElement {
            spec: self.spec.clone(),
            coeffs,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.add_raw(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.add_raw(&other.neg_raw()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.mul_raw(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.mul_raw(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = self.spec.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_raw(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_raw(&base);
            }
        }
        result
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.spec.order() - 2))
    }

    /// `a^p`.
    pub fn frobenius(&self) -> Self {
        self.pow(self.spec.0.p as u64)
    }

    /// The unique p-th root (Frobenius is bijective on a finite field).
    pub fn pth_root(&self) -> Self {
        self.pow(self.spec.order() / self.spec.0.p as u64)
    }

    /// Multiplicative order; `None` for zero.
    pub fn multiplicative_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let n = self.spec.order() - 1;
        let mut order = n;
        for q in prime_factors(n) {
            while order.is_multiple_of(q) && self.pow(order / q).is_one() {
                order /= q;
            }
        }
        Some(order)
    }

    /// Canonical embedding into a field of the same characteristic whose
    /// degree is a multiple of this one.
    pub fn embed(&self, target: &FieldSpec) -> Result<Self> {
        if self.spec == *target {
            return Ok(self.clone());
        }
        let image = embedding_image(&self.spec, target)?;
        let mut acc = target.zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul_raw(&image).add_raw(&target.from_int(c as i64));
        }
        Ok(acc)
    }

    /// Whether the element lies in the subfield GF(p^m).
    pub fn in_subfield(&self, m: u32) -> Result<bool> {
        let k = self.spec.0.k;
        if m == 0 || !k.is_multiple_of(m) {
            return Err(Error::NotDivisible { sub: m, sup: k });
        }
        Ok(self.pow((self.spec.0.p as u64).pow(m)) == *self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect(concat!("field ", stringify!($method)))
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl $tr<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_raw()
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_raw()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow(u64),
    Inv,
    Frobenius,
}

/// Applies `op`; binary operations require `b`.
pub fn arith(a: &FieldElement, b: Option<&FieldElement>, op: ArithOp) -> Result<FieldElement> {
    let need_b = || b.ok_or_else(|| Error::InvalidArgument("missing second operand".into()));
    match op {
        ArithOp::Add => a.checked_add(need_b()?),
        ArithOp::Sub => a.checked_sub(need_b()?),
        ArithOp::Mul => a.checked_mul(need_b()?),
        ArithOp::Div => a.checked_div(need_b()?),
        ArithOp::Pow(n) => Ok(a.pow(n)),
        ArithOp::Inv => a.inv(),
        ArithOp::Frobenius => Ok(a.frobenius()),
    }
}

fn embedding_image(source: &FieldSpec, target: &FieldSpec) -> Result<FieldElement> {
    if source.p() != target.p() {
        return Err(Error::FieldMismatch);
    }
    if !target.k().is_multiple_of(source.k()) {
        return Err(Error::NotDivisible {
            sub: source.k(),
            sup: target.k(),
        });
    }
    type Key = (u8, Vec<u8>, Vec<u8>);
    static IMAGES: OnceLock<Mutex<HashMap<Key, Vec<u8>>>> = OnceLock::new();
    let cache = IMAGES.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (
        source.p(),
        source.modulus().to_vec(),
        target.modulus().to_vec(),
    );
    if let Some(coeffs) = cache.lock().unwrap().get(&key) {
        return target.from_coeffs(coeffs.clone());
    }
    let is_root = |x: &FieldElement| {
        let mut acc = target.zero();
        for &c in source.modulus().iter().rev() {
            acc = acc.mul_raw(x).add_raw(&target.from_int(c as i64));
        }
        acc.is_zero()
    };
    let exponent = (target.order() - 1) / (source.order() - 1);
    let mut image = target.generator().pow(exponent);
    if !is_root(&image) {
        image = target
            .elements()
            .find(|x| is_root(x))
            .ok_or_else(|| Error::Verification("source modulus has no root in target".into()))?;
    }
    cache.lock().unwrap().insert(key, image.coeffs.clone());
    Ok(image)
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn fp_trim(a: &mut Vec<u8>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `b` over F_p.
fn fp_rem(a: &[u8], b: &[u8], p: u8) -> Vec<u8> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (t, &bt) in b.iter().enumerate() {
            r[shift + t] = (r[shift + t] + (p - lead) * bt % p) % p;
        }
        fp_trim(&mut r);
    }
    r
}

/// Trial division by all monic polynomials of degree at most half.
fn fp_is_irreducible(f: &[u8], p: u8) -> bool {
    let k = f.len() - 1;
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut i = idx;
            for _ in 0..d {
                g.push((i % p as u64) as u8);
                i /= p as u64;
            }
            g.push(1);
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn fp_display(f: &[u8]) -> String {
    f.iter().map(|c| c.to_string()).collect()
}

/// Whether a monic irreducible polynomial is primitive, i.e. its root
/// generates the multiplicative group.
pub fn is_primitive_modulus(p: u8, modulus: &[u8]) -> Result<bool> {
    let spec = FieldSpec::with_modulus(p, modulus.to_vec())?;
    Ok(spec.generator().multiplicative_order() == Some(spec.order() - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u8, k: u32) -> FieldSpec {
        field_make(p, k).unwrap()
    }

    #[test]
    fn prime_field_f2() {
        let f2 = f(2, 1);
        assert_eq!(f2.modulus(), &[1, 1]);
        let elems: Vec<String> = f2.elements().map(|e| e.to_string()).collect();
        assert_eq!(elems, ["0", "1"]);
    }

    #[test]
    fn f4_generator_is_cube_root_of_unity() {
        let f4 = f(2, 2);
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let z = f4.generator();
        // repeated reduction: z^2 = z + 1, z^3 = z^2 + z = 1
        let z2 = &z * &z;
        assert_eq!(z2.to_string(), "11");
        assert!((&z2 * &z).is_one());
        assert_eq!(z.to_string(), "01");
    }

    #[test]
    fn f16_generator_has_order_15() {
        let f16 = f(2, 4);
        assert_eq!(f16.modulus(), &[1, 1, 0, 0, 1]);
        let w = f16.generator();
        let mut x = w.clone();
        let mut n = 1;
        while !x.is_one() {
            x = &x * &w;
            n += 1;
        }
        assert_eq!(n, 15);
    }

    #[test]
    fn f256_modulus_matches_table() {
        assert_eq!(f(2, 8).modulus(), &[1, 0, 1, 1, 1, 0, 0, 0, 1]);
    }

    #[test]
    fn f4_arith_examples() {
        let f4 = f(2, 2);
        let z = f4.generator();
        let z2 = z.pow(2);
        assert!((&z * &z2).is_one());
        assert!((&z + &z2).is_one());
        assert_eq!(z.frobenius(), z2);
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        let f4 = f(2, 2);
        let f16 = f(2, 4);
        assert_eq!(f4.zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(
            arith(&f4.one(), Some(&f4.zero()), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
        assert_eq!(
            arith(&f4.one(), Some(&f16.one()), ArithOp::Add),
            Err(Error::FieldMismatch)
        );
    }

    #[test]
    fn unsupported_fields() {
        assert!(field_make(5, 1).is_err());
        assert!(field_make(2, 0).is_err());
        assert!(field_make(3, 17).is_err());
        assert!(matches!(
            FieldSpec::with_modulus(2, vec![1, 0, 1]),
            Err(Error::Reducible { .. })
        ));
    }

    #[test]
    fn f16_elements_satisfy_x16_eq_x() {
        let f16 = f(2, 4);
        let all = enumerate(&f16);
        assert_eq!(all.len(), 16);
        assert!(all[0].is_zero());
        for x in &all {
            assert_eq!(x.pow(16), *x);
        }
        assert_eq!(enumerate(&f(2, 2)).len(), 4);
    }

    #[test]
    fn fermat_little_theorem_small_fields() {
        for (p, k) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (3, 4)] {
            let spec = f(p, k);
            let q = spec.order();
            for a in spec.units() {
                assert!(a.pow(q - 1).is_one(), "{a} in {spec:?}");
                assert!((&a * &a.inv().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn frobenius_is_ring_homomorphism() {
        for (p, k) in [(2, 4), (3, 2)] {
            let spec = f(p, k);
            for a in spec.elements() {
                for b in spec.elements() {
                    assert_eq!((&a + &b).frobenius(), a.frobenius() + b.frobenius());
                    assert_eq!((&a * &b).frobenius(), a.frobenius() * b.frobenius());
                }
            }
        }
    }

    #[test]
    fn embed_f4_into_f16() {
        let f4 = f(2, 2);
        let f16 = f(2, 4);
        let w = f16.generator();
        assert!(f4.one().embed(&f16).unwrap().is_one());
        assert!(f4.zero().embed(&f16).unwrap().is_zero());
        let zeta = f4.generator().embed(&f16).unwrap();
        assert_eq!(zeta, w.pow(5));
        assert!((&zeta * &zeta + &zeta + f16.one()).is_zero());
        assert_eq!(f16.zeta().unwrap(), w.pow(5));
    }

    #[test]
    fn embed_rejects_non_dividing_degree() {
        let f8 = f(2, 3);
        let f16 = f(2, 4);
        assert_eq!(
            f8.one().embed(&f16),
            Err(Error::NotDivisible { sub: 3, sup: 4 })
        );
        assert_eq!(f(3, 1).one().embed(&f16), Err(Error::FieldMismatch));
    }

    #[test]
    fn embeddings_are_injective_homomorphisms() {
        for (p, m, k) in [(2, 2, 4), (2, 4, 8), (2, 2, 8), (2, 1, 4), (3, 1, 2), (3, 2, 4)] {
            let src = f(p, m);
            let tgt = f(p, k);
            let mut seen = std::collections::HashSet::new();
            for a in src.elements() {
                let ea = a.embed(&tgt).unwrap();
                assert!(seen.insert(ea.clone()));
                for b in src.elements() {
                    let eb = b.embed(&tgt).unwrap();
                    assert_eq!((&a * &b).embed(&tgt).unwrap(), &ea * &eb);
                    assert_eq!((&a + &b).embed(&tgt).unwrap(), &ea + &eb);
                }
            }
        }
    }

    #[test]
    fn subfield_membership() {
        let f16 = f(2, 4);
        let w = f16.generator();
        assert!(w.pow(5).in_subfield(2).unwrap());
        assert!(!w.in_subfield(2).unwrap());
        assert!(f16.one().in_subfield(1).unwrap());
        assert!(f16.one().in_subfield(2).unwrap());
        assert!(f16.one().in_subfield(4).unwrap());
        assert_eq!(w.in_subfield(3), Err(Error::NotDivisible { sub: 3, sup: 4 }));
        let in_f4 = f16.elements().filter(|x| x.in_subfield(2).unwrap()).count();
        assert_eq!(in_f4, 4);
    }

    #[test]
    fn canonical_moduli_are_minimal_primitive() {
        for p in [2u8, 3] {
            for k in 1..=MAX_DEGREE {
                let spec = f(p, k);
                assert!(is_primitive_modulus(p, spec.modulus()).unwrap());
                // no smaller monic candidate is primitive
                let target = spec.modulus()[..k as usize]
                    .iter()
                    .rev()
                    .fold(0u64, |acc, &c| acc * p as u64 + c as u64);
                if k > 10 {
                    continue;
                }
                for idx in 0..target {
                    let mut cand: Vec<u8> = (0..k)
                        .map(|i| ((idx / (p as u64).pow(i)) % p as u64) as u8)
                        .collect();
                    cand.push(1);
                    if let Ok(true) = is_primitive_modulus(p, &cand) {
                        panic!("{cand:?} precedes table entry for ({p},{k})");
                    }
                }
            }
        }
    }

    #[test]
    fn parse_forms() {
        let f16 = f(2, 4);
        assert_eq!(f16.parse_element("w").unwrap(), f16.generator());
        assert_eq!(f16.parse_element("w^5").unwrap(), f16.zeta().unwrap());
        assert_eq!(f16.parse_element("zeta^2").unwrap(), f16.generator().pow(10));
        assert_eq!(f16.parse_element("01").unwrap(), f16.generator());
        assert_eq!(f16.parse_element("1").unwrap(), f16.one());
        assert!(f16.parse_element("2").is_err());
        assert!(f16.parse_element("00000").is_err());
        assert!(f16.parse_element("q").is_err());
    }

    #[test]
    fn enumeration_order_is_by_index() {
        let f9 = f(3, 2);
        let idx: Vec<u64> = f9.elements().map(|e| e.index()).collect();
        assert_eq!(idx, (0..9).collect::<Vec<_>>());
        assert_eq!(f9.from_index(5).to_string(), "21");
    }
}
