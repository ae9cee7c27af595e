//! Polynomials over GF(p^k): sparse multivariate polynomials, dense
//! univariate polynomials for gcd and root counting, and binary forms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::FieldMatrix;

/// Sparse multivariate polynomial. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    spec: FieldSpec,
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

/// Graded-lexicographic comparison key.
fn grlex_key(e: &[u32]) -> (u32, &[u32]) {
    (e.iter().sum(), e)
}

impl MultiPoly {
    pub fn zero(spec: &FieldSpec, vars: &[&str]) -> Self {
        MultiPoly {
            spec: spec.clone(),
            vars: Arc::new(vars.iter().map(|s| s.to_string()).collect()),
            terms: BTreeMap::new(),
        }
    }

    /// A polynomial with the same field and variables as `self`.
    pub fn zero_like(&self) -> Self {
        MultiPoly {
            spec: self.spec.clone(),
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant_like(&self, c: FieldElement) -> Self {
        self.monomial_like(c, vec![0; self.vars.len()])
    }

    pub fn monomial_like(&self, c: FieldElement, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), self.vars.len());
        let mut p = self.zero_like();
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The i-th variable.
    pub fn var(spec: &FieldSpec, vars: &[&str], i: usize) -> Self {
        let z = Self::zero(spec, vars);
        let mut exps = vec![0; vars.len()];
        exps[i] = 1;
        z.monomial_like(spec.one(), exps)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[u32]) -> FieldElement {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| self.spec.zero())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch);
        }
        if self.vars != other.vars {
            return Err(Error::VariableMismatch);
        }
        Ok(())
    }

    fn add_term(&mut self, exps: Vec<u32>, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.zero_like();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        let mut out = self.zero_like();
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut result = self.constant_like(self.spec.one());
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Value at a point given in the polynomial's own field.
    pub fn eval(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.vars.len() {
            return Err(Error::VariableMismatch);
        }
        if point.iter().any(|x| x.spec() != &self.spec) {
            return Err(Error::FieldMismatch);
        }
        let mut acc = self.spec.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = t * x.pow(k as u64);
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Replaces variable `var` by `value`.
    pub fn substitute(&self, var: usize, value: &Self) -> Result<Self> {
        self.compatible(value)?;
        if var >= self.vars.len() {
            return Err(Error::VariableMismatch);
        }
        let mut out = self.zero_like();
        let mut powers: BTreeMap<u32, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[var];
            let mut rest = e.clone();
            rest[var] = 0;
            let base = self.monomial_like(c.clone(), rest);
            let pw = powers.entry(k).or_insert_with(|| value.pow(k)).clone();
            out = &out + &(&base * &pw);
        }
        Ok(out)
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[var] -= 1;
            out.add_term(d, c * &self.spec.from_int(e[var] as i64));
        }
        out
    }

    /// Coefficients mapped into an extension field.
    pub fn embed(&self, target: &FieldSpec) -> Result<Self> {
        let mut out = MultiPoly {
            spec: target.clone(),
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.embed(target)?);
        }
        Ok(out)
    }

    /// Terms in descending graded-lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Vec<u32>, &FieldElement)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| grlex_key(b.0).cmp(&grlex_key(a.0)));
        t
    }

    /// The single variable index this polynomial involves, if any.
    fn univariate_index(&self) -> Result<Option<usize>> {
        let mut found = None;
        for e in self.terms.keys() {
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    match found {
                        None => found = Some(i),
                        Some(j) if j == i => {}
                        Some(_) => {
                            return Err(Error::InvalidArgument(
                                "polynomial is not univariate".into(),
                            ))
                        }
                    }
                }
            }
        }
        Ok(found)
    }

    fn to_uni(&self, var: usize) -> UniPoly {
        let deg = self.terms.keys().map(|e| e[var]).max().unwrap_or(0) as usize;
        let mut coeffs = vec![self.spec.zero(); deg + 1];
        for (e, c) in &self.terms {
            coeffs[e[var] as usize] = c.clone();
        }
        UniPoly::new(&self.spec, coeffs)
    }

    fn from_uni(template: &Self, var: usize, u: &UniPoly) -> Self {
        let mut out = template.zero_like();
        for (i, c) in u.coeffs.iter().enumerate() {
            let mut e = vec![0; template.vars.len()];
            e[var] = i as u32;
            out.add_term(e, c.clone());
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(e, c)| {
                let mut s = c.to_string();
                for (v, &k) in self.vars.iter().zip(e) {
                    match k {
                        0 => {}
                        1 => s.push_str(&format!("*{v}")),
                        _ => s.push_str(&format!("*{v}^{k}")),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("incompatible polynomials")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("incompatible polynomials")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("incompatible polynomials")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c);
        }
        out
    }
}

/// Monic gcd of two univariate polynomials in the same variable.
pub fn gcd_univariate(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    f.compatible(g)?;
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let var = match (f.univariate_index()?, g.univariate_index()?) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::InvalidArgument(
                "polynomials are in different variables".into(),
            ))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => 0,
    };
    if f.vars.is_empty() {
        return Err(Error::VariableMismatch);
    }
    let d = f.to_uni(var).gcd(&g.to_uni(var));
    Ok(MultiPoly::from_uni(f, var, &d))
}

/// Dense univariate polynomial, coefficients from the constant term up.
/// Trailing zeros are trimmed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    spec: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn new(spec: &FieldSpec, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly {
            spec: spec.clone(),
            coeffs,
        }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.inv().expect("nonzero leading coefficient");
                UniPoly::new(&self.spec, self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.spec.from_int(i as i64))
            .collect();
        UniPoly::new(&self.spec, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::new(&self.spec, vec![]);
        }
        let mut out = vec![self.spec.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(&self.spec, out)
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        let db = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor.coeffs[db].inv().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.spec.zero(); self.coeffs.len().saturating_sub(db).max(1)];
        while rem.len() > db && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] * &lead_inv;
            let shift = top - db;
            for (t, b) in divisor.coeffs.iter().enumerate() {
                rem[shift + t] = &rem[shift + t] - &(&c * b);
            }
            quot[shift] = c;
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (UniPoly::new(&self.spec, quot), UniPoly::new(&self.spec, rem))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// For `f = g(x^p)^p`-shaped input (zero derivative), returns the
    /// polynomial whose p-th power is `f`.
    pub fn pth_root(&self) -> Self {
        let p = self.spec.p() as usize;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, c)| {
                if i % p == 0 {
                    Some(c.pth_root())
                } else {
                    assert!(c.is_zero(), "not a p-th power");
                    None
                }
            })
            .collect();
        UniPoly::new(&self.spec, coeffs)
    }

    /// Degree of the radical, i.e. the number of distinct roots in the
    /// algebraic closure. Factors whose multiplicity is divisible by p
    /// are recovered through p-th roots.
    pub fn radical_degree(&self) -> usize {
        match self.degree() {
            None | Some(0) => return 0,
            _ => {}
        }
        let d = self.derivative();
        if d.is_zero() {
            return self.pth_root().radical_degree();
        }
        let c = self.gcd(&d);
        let u = self.divrem(&c).0;
        let mut w = c;
        loop {
            let g = w.gcd(&u);
            if g.degree() == Some(0) {
                break;
            }
            w = w.divrem(&g).0;
        }
        let u_deg = u.degree().unwrap_or(0);
        if w.degree().unwrap_or(0) > 0 {
            u_deg + w.pth_root().radical_degree()
        } else {
            u_deg
        }
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(x.spec().zero(), |acc, c| acc * x + c)
    }
}

/// A binary form `sum_i c_i t0^(n-i) t1^i` of degree n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryForm {
    spec: FieldSpec,
    coeffs: Vec<FieldElement>,
}

impl BinaryForm {
    pub fn new(spec: &FieldSpec, coeffs: Vec<FieldElement>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("binary form needs n+1 coefficients".into()));
        }
        if coeffs.iter().any(|c| c.spec() != spec) {
            return Err(Error::FieldMismatch);
        }
        Ok(BinaryForm {
            spec: spec.clone(),
            coeffs,
        })
    }

    /// `t0^a t1^b` with coefficient one.
    pub fn monomial(spec: &FieldSpec, a: usize, b: usize) -> Self {
        let mut coeffs = vec![spec.zero(); a + b + 1];
        coeffs[b] = spec.one();
        BinaryForm {
            spec: spec.clone(),
            coeffs,
        }
    }

    /// Comma-separated element strings, highest power of t0 first.
    pub fn parse(spec: &FieldSpec, text: &str) -> Result<Self> {
        let coeffs = text
            .split(',')
            .map(|s| spec.parse_element(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, coeffs)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn embed(&self, target: &FieldSpec) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.embed(target))
            .collect::<Result<Vec<_>>>()?;
        Self::new(target, coeffs)
    }

    /// Value at `(t0, t1)`; the point may lie in an extension field.
    pub fn eval(&self, t0: &FieldElement, t1: &FieldElement) -> Result<FieldElement> {
        let target = t0.spec();
        if t1.spec() != target {
            return Err(Error::FieldMismatch);
        }
        let n = self.degree() as u64;
        let mut acc = target.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let c = c.embed(target)?;
            acc = acc + c * t0.pow(n - i as u64) * t1.pow(i as u64);
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        BinaryForm {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch);
        }
        if self.degree() != other.degree() {
            return Err(Error::InvalidArgument("forms of different degree".into()));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Self::new(&self.spec, coeffs)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch);
        }
        let mut coeffs = vec![self.spec.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Self::new(&self.spec, coeffs)
    }

    /// `h(x, 1)` as a polynomial in x.
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::new(&self.spec, self.coeffs.iter().rev().cloned().collect())
    }

    /// The form as a polynomial in the variables `t0_var`, `t1_var` of `ring`.
    pub fn to_multipoly(&self, ring: &MultiPoly, t0_var: usize, t1_var: usize) -> MultiPoly {
        let n = self.degree() as u32;
        let mut out = ring.zero_like();
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut e = vec![0; ring.vars().len()];
            e[t0_var] += n - i as u32;
            e[t1_var] += i as u32;
            out.add_term(e, c.clone());
        }
        out
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Number of distinct points of P^1 over the algebraic closure where `h`
/// vanishes.
pub fn distinct_projective_roots(h: &BinaryForm) -> Result<usize> {
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let at_infinity = usize::from(h.coeffs[0].is_zero());
    Ok(h.dehomogenize().radical_degree() + at_infinity)
}

/// Sylvester matrix of two forms of the same degree.
fn sylvester(r: &BinaryForm, s: &BinaryForm) -> FieldMatrix {
    let n = r.degree();
    let size = 2 * n;
    let mut m = FieldMatrix::zeros(&r.spec, size, size);
    for j in 0..n {
        for (i, c) in r.coeffs.iter().enumerate() {
            m.set(j, j + i, c.clone());
        }
        for (i, c) in s.coeffs.iter().enumerate() {
            m.set(n + j, j + i, c.clone());
        }
    }
    m
}

/// Homogeneous resultant of two forms of equal degree.
pub fn resultant(r: &BinaryForm, s: &BinaryForm) -> Result<FieldElement> {
    if r.spec != s.spec {
        return Err(Error::FieldMismatch);
    }
    if r.degree() != s.degree() {
        return Err(Error::InvalidArgument("forms of different degree".into()));
    }
    Ok(sylvester(r, s).determinant())
}

/// True iff `r` and `s` have no common zero on P^1.
pub fn common_zero_free(r: &BinaryForm, s: &BinaryForm) -> Result<bool> {
    if r.is_zero() || s.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(!resultant(r, s)?.is_zero())
}

/// All points of P^1 over `spec`, normalized as `(1:y)` or `(0:1)`.
pub fn p1_points(spec: &FieldSpec) -> Vec<[FieldElement; 2]> {
    let mut pts: Vec<[FieldElement; 2]> = spec.elements().map(|y| [spec.one(), y]).collect();
    pts.push([spec.zero(), spec.one()]);
    pts
}
