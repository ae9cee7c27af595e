//! Truncated power series over GF(p^k), automorphisms of the formal disc
//! given by them, linearization of finite-order automorphisms, and the
//! invariant monomials of a diagonal cyclic action.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg::FieldMatrix;

/// Power series in `d` variables modulo terms of total degree >= `order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    spec: FieldSpec,
    nvars: usize,
    order: u32,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl TruncatedSeries {
    pub fn zero(spec: &FieldSpec, nvars: usize, order: u32) -> Self {
        TruncatedSeries {
            spec: spec.clone(),
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(&self.spec, self.nvars, self.order)
    }

    pub fn constant(spec: &FieldSpec, nvars: usize, order: u32, c: FieldElement) -> Self {
        let mut s = Self::zero(spec, nvars, order);
        s.add_term(vec![0; nvars], c);
        s
    }

    pub fn var(spec: &FieldSpec, nvars: usize, order: u32, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut s = Self::zero(spec, nvars, order);
        s.add_term(e, spec.one());
        s
    }

    pub fn monomial(spec: &FieldSpec, order: u32, c: FieldElement, exps: Vec<u32>) -> Self {
        let mut s = Self::zero(spec, exps.len(), order);
        s.add_term(exps, c);
        s
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> FieldElement {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| self.spec.zero())
    }

    /// Adds `c * u^exps`, dropping it if its degree reaches the order.
    pub fn add_term(&mut self, exps: Vec<u32>, c: FieldElement) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() || exps.iter().sum::<u32>() >= self.order {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(x) => {
                let sum = &*x + &c;
                if sum.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *x = sum;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch);
        }
        if self.nvars != other.nvars || self.order != other.order {
            return Err(Error::InvalidArgument(
                "series differ in variables or truncation order".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-self.spec.one()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.zero_like();
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            for (eb, cb) in &other.terms {
                if da + eb.iter().sum::<u32>() >= self.order {
                    continue;
                }
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

    /// Homogeneous part of total degree `deg`.
    pub fn part(&self, deg: u32) -> Self {
        let mut out = self.zero_like();
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == deg {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    /// `self(g_1, ..., g_d)`; the `g_i` must have no constant term.
    pub fn substitute(&self, g: &[TruncatedSeries]) -> Result<Self> {
        if g.len() != self.nvars {
            return Err(Error::InvalidArgument("wrong number of substitutions".into()));
        }
        let target = &g[0];
        for gi in g {
            target.compatible(gi)?;
            if !gi.coefficient(&vec![0; gi.nvars]).is_zero() {
                return Err(Error::InvalidArgument("substituted series has a constant term".into()));
            }
        }
        if self.spec != target.spec || self.order != target.order {
            return Err(Error::InvalidArgument("series differ in field or order".into()));
        }
        // powers[i][k] = g_i^k
        let max_exp = self.terms.keys().flatten().copied().max().unwrap_or(0) as usize;
        let one = Self::constant(&target.spec, target.nvars, target.order, target.spec.one());
        let mut powers: Vec<Vec<TruncatedSeries>> = Vec::with_capacity(g.len());
        for gi in g {
            let mut row = vec![one.clone()];
            for k in 1..=max_exp {
                let next = row[k - 1].mul(gi)?;
                row.push(next);
            }
            powers.push(row);
        }
        let mut out = target.zero_like();
        for (e, c) in &self.terms {
            let mut term = Self::constant(&target.spec, target.nvars, target.order, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&powers[i][k as usize])?;
                }
                if term.is_zero() {
                    break;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

impl fmt::Display for TruncatedSeries {
    /// The series-file line format: `coeff:e1,e2 + ...`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0:{}", vec!["0"; self.nvars].join(","));
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), std::cmp::Reverse((*e).clone())));
        let parts: Vec<String> = terms
            .into_iter()
            .map(|(e, c)| {
                let e: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                format!("{c}:{}", e.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A tuple of series with no constant terms and invertible linear part.
/// Composition is substitution: `compose(f, g)_i = f_i(g)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeriesAutomorphism {
    comps: Vec<TruncatedSeries>,
}

impl SeriesAutomorphism {
    /// Validates the components; when `m` is given also checks
    /// `f^m = id` modulo the truncation order.
    pub fn new(comps: Vec<TruncatedSeries>, m: Option<u32>) -> Result<Self> {
        let Some(first) = comps.first() else {
            return Err(Error::InvalidArgument("no components".into()));
        };
        if comps.len() != first.nvars {
            return Err(Error::InvalidArgument(format!(
                "{} components in {} variables",
                comps.len(),
                first.nvars
            )));
        }
        for c in &comps {
            first.compatible(c)?;
            if !c.coefficient(&vec![0; c.nvars]).is_zero() {
                return Err(Error::InvalidArgument("component has a constant term".into()));
            }
        }
        let f = SeriesAutomorphism { comps };
        if f.linear_part().determinant().is_zero() {
            return Err(Error::InvalidArgument("linear part is singular".into()));
        }
        if let Some(m) = m {
            if m == 0 {
                return Err(Error::InvalidArgument("order must be positive".into()));
            }
            if f.power(m)? != Self::identity(f.spec(), f.nvars(), f.order()) {
                return Err(Error::InvalidArgument(format!(
                    "f^{m} is not the identity modulo degree {}",
                    f.order()
                )));
            }
        }
        Ok(f)
    }

    pub fn identity(spec: &FieldSpec, nvars: usize, order: u32) -> Self {
        SeriesAutomorphism {
            comps: (0..nvars)
                .map(|i| TruncatedSeries::var(spec, nvars, order, i))
                .collect(),
        }
    }

    /// `u_i -> lambda_i u_i`.
    pub fn diagonal(spec: &FieldSpec, order: u32, lambdas: &[FieldElement]) -> Self {
        let n = lambdas.len();
        SeriesAutomorphism {
            comps: lambdas
                .iter()
                .enumerate()
                .map(|(i, l)| TruncatedSeries::var(spec, n, order, i).scale(l))
                .collect(),
        }
    }

    /// The linear map with matrix `m`, `u_i -> sum_j m[i][j] u_j`.
    pub fn linear(spec: &FieldSpec, order: u32, m: &FieldMatrix) -> Self {
        let n = m.rows();
        let comps = (0..n)
            .map(|i| {
                let mut s = TruncatedSeries::zero(spec, n, order);
                for j in 0..n {
                    let mut e = vec![0; n];
                    e[j] = 1;
                    s.add_term(e, m.get(i, j).clone());
                }
                s
            })
            .collect();
        SeriesAutomorphism { comps }
    }

    pub fn comps(&self) -> &[TruncatedSeries] {
        &self.comps
    }

    pub fn spec(&self) -> &FieldSpec {
        self.comps[0].spec()
    }

    pub fn nvars(&self) -> usize {
        self.comps.len()
    }

    pub fn order(&self) -> u32 {
        self.comps[0].order()
    }

    pub fn linear_part(&self) -> FieldMatrix {
        let n = self.nvars();
        let mut m = FieldMatrix::zeros(self.spec(), n, n);
        for i in 0..n {
            for j in 0..n {
                let mut e = vec![0; n];
                e[j] = 1;
                m.set(i, j, self.comps[i].coefficient(&e));
            }
        }
        m
    }

    pub fn power(&self, m: u32) -> Result<Self> {
        let mut acc = Self::identity(self.spec(), self.nvars(), self.order());
        for _ in 0..m {
            acc = compose(&acc, self)?;
        }
        Ok(acc)
    }

    /// Compositional inverse by fixed-point iteration
    /// `k = L^-1 (u - H(k))`, where `self = L + H`.
    pub fn inverse(&self) -> Result<Self> {
        let (spec, n, order) = (self.spec().clone(), self.nvars(), self.order());
        let lin = self.linear_part();
        let lin_inv = lin.inverse().ok_or(Error::Singular)?;
        let higher: Vec<TruncatedSeries> = self
            .comps
            .iter()
            .map(|c| {
                let mut h = c.clone();
                for d in 0..2 {
                    h = h.sub(&c.part(d)).expect("same ring");
                }
                h
            })
            .collect();
        let ident = Self::identity(&spec, n, order);
        let mut k = Self::linear(&spec, order, &lin_inv);
        for _ in 1..order {
            let rhs: Vec<TruncatedSeries> = (0..n)
                .map(|i| ident.comps[i].sub(&higher[i].substitute(&k.comps)?))
                .collect::<Result<_>>()?;
            let next = (0..n)
                .map(|i| {
                    let mut acc = TruncatedSeries::zero(&spec, n, order);
                    for (j, r) in rhs.iter().enumerate() {
                        acc = acc.add(&r.scale(lin_inv.get(i, j)))?;
                    }
                    Ok(acc)
                })
                .collect::<Result<Vec<_>>>()?;
            k = SeriesAutomorphism { comps: next };
        }
        Ok(k)
    }

    /// Parses the series-file format: one line per component, terms
    /// `coeff:e1,e2,...` separated by whitespace or `+`. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn parse(spec: &FieldSpec, order: u32, text: &str) -> Result<Self> {
        let mut comps = Vec::new();
        let mut nvars: Option<usize> = None;
        let mut rows: Vec<Vec<(FieldElement, Vec<u32>)>> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut row = Vec::new();
            for tok in line.split(|c: char| c.is_whitespace() || c == '+').filter(|t| !t.is_empty()) {
                let (c, e) = tok
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("term {tok:?} lacks ':'")))?;
                let exps = e
                    .split(',')
                    .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                match nvars {
                    None => nvars = Some(exps.len()),
                    Some(d) if d != exps.len() => {
                        return Err(Error::Parse(format!("term {tok:?} has {} exponents, expected {d}", exps.len())))
                    }
                    _ => {}
                }
                row.push((spec.parse_element(c)?, exps));
            }
            rows.push(row);
        }
        let d = nvars.ok_or_else(|| Error::Parse("empty series file".into()))?;
        for row in rows {
            let mut s = TruncatedSeries::zero(spec, d, order);
            for (c, e) in row {
                s.add_term(e, c);
            }
            comps.push(s);
        }
        Self::new(comps, None)
    }
}

impl fmt::Display for SeriesAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", lines.join("\n"))
    }
}

pub fn compose(f: &SeriesAutomorphism, g: &SeriesAutomorphism) -> Result<SeriesAutomorphism> {
    if f.nvars() != g.nvars() {
        return Err(Error::InvalidArgument("automorphisms in different dimensions".into()));
    }
    let comps = f
        .comps
        .iter()
        .map(|c| c.substitute(&g.comps))
        .collect::<Result<Vec<_>>>()?;
    Ok(SeriesAutomorphism { comps })
}

#[derive(Clone, Debug)]
pub struct Linearization {
    /// New parameters `u'_i = change_i(u)`.
    pub change: SeriesAutomorphism,
    /// `f(u'_i) = zeta^{n_i} u'_i`.
    pub weights: Vec<u32>,
}

/// Left eigenvectors of the linear part, ordered as rows of the linear
/// change of parameters.
fn diagonalize_linear(l: &FieldMatrix, zeta: &FieldElement, m: u32) -> Result<(FieldMatrix, Vec<u32>)> {
    let spec = l.spec();
    let n = l.rows();
    let lt = l.transpose();
    let mut found: Vec<(usize, u32, Vec<FieldElement>)> = Vec::new();
    for t in 0..m {
        let lambda = zeta.pow(t as u64);
        let mut shifted = lt.clone();
        for i in 0..n {
            let v = shifted.get(i, i) - &lambda;
            shifted.set(i, i, v);
        }
        for v in shifted.nullspace() {
            let pivot = v.iter().position(|x| !x.is_zero()).expect("nonzero eigenvector");
            let inv = v[pivot].inv()?;
            found.push((pivot, t, v.iter().map(|x| x * &inv).collect()));
        }
    }
    if found.len() != n {
        return Err(Error::InvalidArgument(
            "linear part is not diagonalizable with eigenvalues powers of zeta".into(),
        ));
    }
    let mut pivots: Vec<usize> = found.iter().map(|f| f.0).collect();
    pivots.sort_unstable();
    pivots.dedup();
    if pivots.len() == n {
        found.sort_by_key(|f| f.0);
    } else {
        found.sort_by_key(|f| (f.1, f.0));
    }
    let weights = found.iter().map(|f| f.1).collect();
    let p = FieldMatrix::from_rows(spec, found.into_iter().map(|f| f.2).collect());
    Ok((p, weights))
}

/// Exponent vectors of total degree `deg` in `n` variables, lexicographically
/// descending.
fn exponents_of_degree(n: usize, deg: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![deg]];
    }
    let mut out = Vec::new();
    for first in (0..=deg).rev() {
        for mut rest in exponents_of_degree(n - 1, deg - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Parameters in which a finite-order automorphism acts diagonally.
pub fn linearize(f: &SeriesAutomorphism, m: u32, zeta: &FieldElement, order: u32) -> Result<Linearization> {
    let spec = f.spec().clone();
    if zeta.spec() != &spec {
        return Err(Error::FieldMismatch);
    }
    if order != f.order() {
        return Err(Error::InvalidArgument(format!(
            "automorphism is truncated at {}, not {order}",
            f.order()
        )));
    }
    if m == 0 || m.is_multiple_of(spec.p() as u32) {
        return Err(Error::InvalidArgument(format!("order {m} is not prime to p")));
    }
    if zeta.multiplicative_order() != Some(m as u64) {
        return Err(Error::InvalidArgument(format!("{zeta} is not a primitive {m}-th root of unity")));
    }
    let n = f.nvars();
    if f.power(m)? != SeriesAutomorphism::identity(&spec, n, order) {
        return Err(Error::InvalidArgument(format!("f^{m} is not the identity modulo degree {order}")));
    }
    let (p, weights) = diagonalize_linear(&f.linear_part(), zeta, m)?;
    let mut change = SeriesAutomorphism::linear(&spec, order, &p);
    let mut g = compose(&compose(&change, f)?, &change.inverse()?)?;
    let eig: Vec<FieldElement> = weights.iter().map(|&w| zeta.pow(w as u64)).collect();
    for deg in 2..order {
        let mut h = SeriesAutomorphism::identity(&spec, n, order);
        let mut touched = false;
        for i in 0..n {
            for l in exponents_of_degree(n, deg) {
                let y = g.comps[i].coefficient(&l);
                if y.is_zero() {
                    continue;
                }
                let e: u32 = l.iter().zip(&weights).map(|(a, w)| a * w).sum();
                if e % m == weights[i] % m {
                    return Err(Error::Verification(format!(
                        "resonant coefficient {y} at u^{l:?} in component {i} does not vanish"
                    )));
                }
                let x = &y / &(&eig[i] - &zeta.pow(e as u64));
                h.comps[i].add_term(l, x);
                touched = true;
            }
        }
        if touched {
            g = compose(&compose(&h, &g)?, &h.inverse()?)?;
            change = compose(&h, &change)?;
        }
    }
    let diag = SeriesAutomorphism::diagonal(&spec, order, &eig);
    if compose(&change, f)? != compose(&diag, &change)? {
        return Err(Error::Verification("linearized automorphism is not diagonal".into()));
    }
    Ok(Linearization { change, weights })
}

/// Factors `x^a y^b` as `(x^3)^i (xy)^j (y^3)^k`, taking as many `xy` as
/// possible.
pub fn factor_a2(a: u32, b: u32) -> Option<[u32; 3]> {
    let t = a.min(b);
    let (ra, rb) = (a - t, b - t);
    if ra % 3 != 0 || rb % 3 != 0 {
        return None;
    }
    Some([ra / 3, t, rb / 3])
}

pub const MAX_INVARIANT_DEGREE: u32 = 12;

/// Nonconstant monomials `x^a y^b` with `a + b <= max_degree` fixed by
/// `(x, y) -> (zeta^w0 x, zeta^w1 y)`. For the weights (2,1) or (1,2) with
/// m = 3 each is checked to factor through x^3, xy, y^3.
pub fn invariant_monomials(weights: [u32; 2], m: u32, max_degree: u32) -> Result<Vec<[u32; 2]>> {
    if max_degree > MAX_INVARIANT_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "degree {max_degree} exceeds {MAX_INVARIANT_DEGREE}"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    let mut out = Vec::new();
    for deg in 1..=max_degree {
        for a in (0..=deg).rev() {
            let b = deg - a;
            if (weights[0] * a + weights[1] * b).is_multiple_of(m) {
                out.push([a, b]);
            }
        }
    }
    let a2 = m == 3 && (weights == [2, 1] || weights == [1, 2]);
    if a2 {
        if let Some([a, b]) = out.iter().find(|[a, b]| factor_a2(*a, *b).is_none()) {
            return Err(Error::Verification(format!(
                "x^{a} y^{b} does not factor through x^3, xy, y^3"
            )));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::field_make;

    fn f4_example(order: u32) -> (FieldSpec, SeriesAutomorphism) {
        let f4 = field_make(2, 2).unwrap();
        let text = "zeta^2:1,0 + 1:0,3\nzeta:0,1\n";
        (f4.clone(), SeriesAutomorphism::parse(&f4, order, text).unwrap())
    }

    #[test]
    fn worked_example() {
        let (f4, f) = f4_example(6);
        assert_eq!(f.power(3).unwrap(), SeriesAutomorphism::identity(&f4, 2, 6));
        let zeta = f4.zeta().unwrap();
        let lin = linearize(&f, 3, &zeta, 6).unwrap();
        assert_eq!(lin.weights, vec![2, 1]);
        let expected = SeriesAutomorphism::parse(&f4, 6, "1:1,0 + zeta^2:0,3\n1:0,1").unwrap();
        assert_eq!(lin.change, expected);
    }

    #[test]
    fn thrice_is_identity_at_order_5() {
        let (f4, f) = f4_example(5);
        let f3 = compose(&f, &compose(&f, &f).unwrap()).unwrap();
        assert_eq!(f3, SeriesAutomorphism::identity(&f4, 2, 5));
        assert!(SeriesAutomorphism::new(f.comps().to_vec(), Some(3)).is_ok());
        assert!(SeriesAutomorphism::new(f.comps().to_vec(), Some(2)).is_err());
    }

    #[test]
    fn diagonal_and_identity_cases() {
        let f4 = field_make(2, 2).unwrap();
        let zeta = f4.zeta().unwrap();
        let d = SeriesAutomorphism::diagonal(&f4, 6, &[zeta.pow(2), zeta.clone()]);
        let lin = linearize(&d, 3, &zeta, 6).unwrap();
        assert_eq!(lin.change, SeriesAutomorphism::identity(&f4, 2, 6));
        assert_eq!(lin.weights, vec![2, 1]);
        let id = SeriesAutomorphism::identity(&f4, 2, 6);
        let lin = linearize(&id, 1, &f4.one(), 6).unwrap();
        assert_eq!(lin.change, id);
        assert_eq!(lin.weights, vec![0, 0]);
    }

    #[test]
    fn inverse_round_trip() {
        let (f4, f) = f4_example(7);
        let inv = f.inverse().unwrap();
        assert_eq!(compose(&f, &inv).unwrap(), SeriesAutomorphism::identity(&f4, 2, 7));
        assert_eq!(compose(&inv, &f).unwrap(), SeriesAutomorphism::identity(&f4, 2, 7));
    }

    #[test]
    fn rejects_bad_input() {
        let f4 = field_make(2, 2).unwrap();
        assert!(SeriesAutomorphism::parse(&f4, 5, "1:1,0\n1:1,0").is_err());
        assert!(SeriesAutomorphism::parse(&f4, 5, "1:1,0\n1:0,1,0").is_err());
        assert!(SeriesAutomorphism::parse(&f4, 5, "1:0,0 + 1:1,0\n1:0,1").is_err());
        let (_, f) = f4_example(6);
        let zeta = f4.zeta().unwrap();
        assert!(linearize(&f, 2, &zeta, 6).is_err());
        assert!(linearize(&f, 3, &zeta, 7).is_err());
    }

    #[test]
    fn invariants_for_a2() {
        let inv = invariant_monomials([2, 1], 3, 3).unwrap();
        assert_eq!(inv, vec![[1, 1], [3, 0], [0, 3]]);
        assert!(inv.iter().all(|[a, b]| a + b != 1));
        assert_eq!(factor_a2(3, 3), Some([0, 3, 0]));
        assert_eq!(factor_a2(4, 1), Some([1, 1, 0]));
        assert_eq!(factor_a2(2, 0), None);
        assert!(invariant_monomials([2, 1], 3, 13).is_err());
    }
}
