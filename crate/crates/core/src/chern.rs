//! Integer classes in `h`, `lambda` and the Chern classes `c_1..c_n` of `X`,
//! the classes of `C` and `R`, and the degree of `R`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Exponents of `h`, `lambda`, `c_1`, .., `c_n`.
pub type ClassMonomial = Vec<u32>;

/// A finite integer combination of monomials `h^a lambda^b c_1^e_1 .. c_n^e_n`
/// graded by `a + b + sum i e_i`. Terms above the cap are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedClass {
    n: usize,
    cap: Option<u32>,
    terms: BTreeMap<ClassMonomial, BigInt>,
}

impl GradedClass {
    pub fn zero(n: usize) -> Self {
        GradedClass { n, cap: None, terms: BTreeMap::new() }
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = Some(cap);
        self.terms.retain(|m, _| grading(m) <= cap);
        self
    }

    pub fn constant(n: usize, c: impl Into<BigInt>) -> Self {
        let mut g = Self::zero(n);
        g.add_term(vec![0; n + 2], c.into());
        g
    }

    fn generator(n: usize, slot: usize) -> Self {
        let mut e = vec![0; n + 2];
        e[slot] = 1;
        let mut g = Self::zero(n);
        g.add_term(e, BigInt::one());
        g
    }

    pub fn h(n: usize) -> Self {
        Self::generator(n, 0)
    }

    pub fn lambda(n: usize) -> Self {
        Self::generator(n, 1)
    }

    /// `c_i`, with `c_0 = 1` and `c_i = 0` for `i > n`.
    pub fn c(n: usize, i: usize) -> Self {
        match i {
            0 => Self::constant(n, 1),
            i if i > n => Self::zero(n),
            i => Self::generator(n, i + 1),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ClassMonomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: ClassMonomial, c: BigInt) {
        if self.cap.is_some_and(|cap| grading(&m) > cap) || c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.n, other.n, "classes over different n");
    }

    fn join_cap(&self, other: &Self) -> Option<u32> {
        match (self.cap, other.cap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let mut r = self.clone();
        r.cap = self.join_cap(other);
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = -c.clone();
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        let mut r = Self { n: self.n, cap: self.cap, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c * &k);
        }
        r
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let mut r = Self { n: self.n, cap: self.join_cap(other), terms: BTreeMap::new() };
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let m: Vec<u32> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                r.add_term(m, x * y);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.n, 1), |acc, _| acc.mul(self))
    }

    /// The coefficient of `h^k` as a class without `h`.
    pub fn coeff_of_h(&self, k: u32) -> Self {
        let mut r = Self { n: self.n, cap: None, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            if m[0] == k {
                let mut e = m.clone();
                e[0] = 0;
                r.add_term(e, c.clone());
            }
        }
        r
    }

    /// The coefficient of `lambda^k`.
    pub fn coeff_of_lambda(&self, k: u32) -> Self {
        let mut r = Self { n: self.n, cap: None, terms: BTreeMap::new() };
        for (m, c) in &self.terms {
            if m[1] == k {
                let mut e = m.clone();
                e[1] = 0;
                r.add_term(e, c.clone());
            }
        }
        r
    }

    /// Parse sums like `6*lambda^2 - 6*c1*lambda + c1^2 + c2`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let mut r = Self::zero(n);
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "0" {
            return Ok(r);
        }
        let mut start = 0;
        let bytes = compact.as_bytes();
        let mut pieces = Vec::new();
        for i in 1..=bytes.len() {
            if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^') {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        for p in pieces {
            let (neg, body) = match p.as_bytes()[0] {
                b'-' => (true, &p[1..]),
                b'+' => (false, &p[1..]),
                _ => (false, p),
            };
            let (mut coef, m) = parse_term(n, body)?;
            if neg {
                coef = -coef;
            }
            r.add_term(m, coef);
        }
        Ok(r)
    }
}

fn grading(m: &[u32]) -> u32 {
    m[0] + m[1] + m[2..].iter().enumerate().map(|(i, e)| (i as u32 + 1) * e).sum::<u32>()
}

/// A product of factors `k`, `h`, `lambda`, `c<i>`, each with an optional `^e`.
fn parse_term(n: usize, s: &str) -> Result<(BigInt, ClassMonomial)> {
    let bad = |msg: String| Error::Invalid(format!("bad class term `{s}`: {msg}"));
    let mut coef = BigInt::one();
    let mut m = vec![0u32; n + 2];
    for f in s.split('*') {
        let (base, exp) = match f.split_once('^') {
            Some((b, e)) => (b, e.parse::<u32>().map_err(|e| bad(e.to_string()))?),
            None => (f, 1),
        };
        if let Ok(k) = base.parse::<BigInt>() {
            coef *= num_traits::pow(k, exp as usize);
            continue;
        }
        let slot = match base {
            "h" => 0,
            "lambda" => 1,
            c if c.starts_with('c') => {
                let i: usize = c[1..].parse().map_err(|_| bad(format!("unknown factor `{c}`")))?;
                if i == 0 {
                    continue;
                }
                if i > n {
                    return Ok((BigInt::zero(), m));
                }
                i + 1
            }
            other => return Err(bad(format!("unknown factor `{other}`"))),
        };
        m[slot] += exp;
    }
    Ok((coef, m))
}

fn fmt_monomial(m: &[u32]) -> String {
    let mut parts = Vec::new();
    let mut push = |name: String, e: u32| match e {
        0 => {}
        1 => parts.push(name),
        e => parts.push(format!("{name}^{e}")),
    };
    // Chern classes first, then lambda, then h
    for (i, &e) in m[2..].iter().enumerate() {
        push(format!("c{}", i + 1), e);
    }
    push("lambda".into(), m[1]);
    push("h".into(), m[0]);
    parts.join("*")
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest powers of h, then of lambda, first
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(a, _), (b, _)| (b[0], b[1], b).cmp(&(a[0], a[1], a)));
        for (k, (m, c)) in ts.into_iter().enumerate() {
            let mono = fmt_monomial(m);
            let a = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{a}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for GradedClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `(lambda + h) sum_i (-1)^i c_i (lambda + h)^(n - i)`.
pub fn class_of_c(n: usize) -> Result<GradedClass> {
    if n == 0 {
        return Err(Error::Invalid("n must be positive".into()));
    }
    let u = GradedClass::lambda(n).add(&GradedClass::h(n));
    let mut sum = GradedClass::zero(n);
    for i in 0..=n {
        let t = GradedClass::c(n, i).mul(&u.pow((n - i) as u32));
        sum = if i % 2 == 0 { sum.add(&t) } else { sum.sub(&t) };
    }
    Ok(u.mul(&sum))
}

/// `G = (n/2 (h + lambda) - c_1) [C]`.
pub fn class_of_r(n: usize) -> Result<GradedClass> {
    if n % 2 == 1 || n == 0 {
        return Err(Error::OddSize(n));
    }
    let u = GradedClass::lambda(n).add(&GradedClass::h(n));
    let factor = u.scale(n as u64 / 2).sub(&GradedClass::c(n, 1));
    Ok(factor.mul(&class_of_c(n)?))
}

/// The class whose integral over `X` is `deg R`.
pub fn degree_class(n: usize) -> Result<GradedClass> {
    Ok(class_of_r(n)?.coeff_of_h(2))
}

/// Integrals over `X` of monomials in `lambda`, `H` and the `c_i`.
///
/// Keys are products such as `c1^2`, `c2`, `c1*lambda`, `H^2`, `c1*H`. With a
/// value for `lambda`, a missing `lambda`-monomial is read as `d^b` times the
/// integral of the same monomial with `lambda` replaced by the hyperplane
/// class `H`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegralTable {
    /// `(lambda or H exponent, c exponents, uses H)` to the integral.
    entries: BTreeMap<(u32, Vec<u32>, bool), BigInt>,
    n: usize,
}

impl IntegralTable {
    pub fn new(n: usize) -> Self {
        IntegralTable { entries: BTreeMap::new(), n }
    }

    pub fn from_map<'a>(n: usize, map: impl IntoIterator<Item = (&'a str, BigInt)>) -> Result<Self> {
        let mut t = Self::new(n);
        for (k, v) in map {
            t.insert(k, v)?;
        }
        Ok(t)
    }

    pub fn from_json(n: usize, src: &str) -> Result<Self> {
        let map: BTreeMap<String, i64> =
            serde_json::from_str(src).map_err(|e| Error::Invalid(format!("integrals file: {e}")))?;
        Self::from_map(n, map.iter().map(|(k, v)| (k.as_str(), BigInt::from(*v))))
    }

    pub fn insert(&mut self, key: &str, value: impl Into<BigInt>) -> Result<()> {
        let key_s: String = key.chars().filter(|c| !c.is_whitespace()).collect();
        let mut b = 0;
        let mut uses_h = false;
        let mut cs = vec![0u32; self.n];
        for f in key_s.split('*') {
            let (base, exp) = match f.split_once('^') {
                Some((b, e)) => (b, e.parse::<u32>().map_err(|_| Error::Invalid(format!("bad key `{key}`")))?),
                None => (f, 1),
            };
            match base {
                "lambda" => b += exp,
                "H" => {
                    b += exp;
                    uses_h = true;
                }
                c if c.starts_with('c') => {
                    let i: usize = c[1..].parse().map_err(|_| Error::Invalid(format!("bad key `{key}`")))?;
                    if i == 0 || i > self.n {
                        return Err(Error::Invalid(format!("bad key `{key}`: c{i} out of range")));
                    }
                    cs[i - 1] += exp;
                }
                _ => return Err(Error::Invalid(format!("bad key `{key}`"))),
            }
        }
        if key_s.contains("lambda") && uses_h {
            return Err(Error::Invalid(format!("bad key `{key}`: both lambda and H")));
        }
        self.entries.insert((b, cs, uses_h), value.into());
        Ok(())
    }

    fn lookup(&self, b: u32, cs: &[u32], lambda: Option<i64>) -> Result<BigInt> {
        if let Some(v) = self.entries.get(&(b, cs.to_vec(), false)) {
            return Ok(v.clone());
        }
        if b == 0 {
            if let Some(v) = self.entries.get(&(0, cs.to_vec(), true)) {
                return Ok(v.clone());
            }
        }
        if let (Some(d), Some(v)) = (lambda, self.entries.get(&(b, cs.to_vec(), true))) {
            return Ok(num_traits::pow(BigInt::from(d), b as usize) * v);
        }
        let mut m = vec![0, b];
        m.extend_from_slice(cs);
        Err(Error::MissingIntegral(fmt_monomial(&m)))
    }

    /// `int_X` of a class without `h`, keeping only the terms of grading `n`.
    pub fn integrate(&self, g: &GradedClass, lambda: Option<i64>) -> Result<BigInt> {
        let mut total = BigInt::zero();
        for (m, c) in g.terms() {
            if m[0] != 0 {
                return Err(Error::Invalid("cannot integrate a class containing h".into()));
            }
            if grading(m) as usize != self.n {
                continue;
            }
            total += c * self.lookup(m[1], &m[2..], lambda)?;
        }
        Ok(total)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub n: usize,
    pub lambda: Option<i64>,
    pub class: GradedClass,
    #[serde(serialize_with = "ser_int")]
    pub degree: BigInt,
    pub divisible_by_4: bool,
    /// `lambda >= 4`, the range where `L` is a fourth power of an ample bundle
    /// for hyperplane-type inputs.
    pub in_regime: bool,
}

pub fn deg_r(n: usize, table: &IntegralTable, lambda: Option<i64>) -> Result<DegreeReport> {
    let class = degree_class(n)?;
    let degree = table.integrate(&class, lambda)?;
    Ok(DegreeReport {
        n,
        lambda,
        divisible_by_4: degree.is_multiple_of(&BigInt::from(4)),
        in_regime: lambda.is_some_and(|d| d >= 4),
        class,
        degree,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Divisibility {
    #[serde(serialize_with = "ser_int")]
    pub value: BigInt,
    pub divisible_by_4: bool,
}

/// `int (n/2 c_n + c_1 c_(n-1))` and its residue mod 4.
pub fn divisibility_check(n: usize, table: &IntegralTable) -> Result<Divisibility> {
    if n % 2 == 1 || n == 0 {
        return Err(Error::OddSize(n));
    }
    let g = GradedClass::c(n, n)
        .scale(n as u64 / 2)
        .add(&GradedClass::c(n, 1).mul(&GradedClass::c(n, n - 1)));
    let value = table.integrate(&g, None)?;
    Ok(Divisibility {
        divisible_by_4: value.is_multiple_of(&BigInt::from(4)),
        value,
    })
}

/// As a JSON number when it fits in `i64`, otherwise as a string.
fn ser_int<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

/// Standard integral tables.
pub mod examples {
    use super::IntegralTable;

    fn table(n: usize, entries: &[(&str, i64)]) -> IntegralTable {
        IntegralTable::from_map(n, entries.iter().map(|(k, v)| (*k, (*v).into()))).expect("valid keys")
    }

    /// `P^2` with `c = (1 + H)^3`.
    pub fn p2() -> IntegralTable {
        table(2, &[("c1^2", 9), ("c2", 3), ("c1*H", 3), ("H^2", 1)])
    }

    /// `P^1 x P^1` with `H` of bidegree `(1, 1)`.
    pub fn quadric_surface() -> IntegralTable {
        table(2, &[("c1^2", 8), ("c2", 4), ("c1*H", 4), ("H^2", 2)])
    }

    /// A quartic K3 surface.
    pub fn k3() -> IntegralTable {
        table(2, &[("c1^2", 0), ("c2", 24), ("c1*H", 0), ("H^2", 4)])
    }

    /// A principally polarized abelian surface.
    pub fn abelian_surface() -> IntegralTable {
        table(2, &[("c1^2", 0), ("c2", 0), ("c1*H", 0), ("H^2", 2)])
    }

    /// `P^4` with `c = (1 + H)^5`.
    pub fn p4() -> IntegralTable {
        let binom = [1i64, 5, 10, 10, 5, 1];
        let mut t = IntegralTable::new(4);
        // every monomial H^b c_1^e1 .. c_4^e4 of degree 4
        for e1 in 0..=4u32 {
            for e2 in 0..=2u32 {
                for e3 in 0..=1u32 {
                    for e4 in 0..=1u32 {
                        let deg = e1 + 2 * e2 + 3 * e3 + 4 * e4;
                        if deg > 4 {
                            continue;
                        }
                        let b = 4 - deg;
                        let v = binom[1].pow(e1) * binom[2].pow(e2) * binom[3].pow(e3) * binom[4].pow(e4);
                        let mut parts = Vec::new();
                        for (i, e) in [e1, e2, e3, e4].into_iter().enumerate() {
                            if e > 0 {
                                parts.push(format!("c{}^{e}", i + 1));
                            }
                        }
                        if b > 0 {
                            parts.push(format!("H^{b}"));
                        }
                        t.insert(&parts.join("*"), v).expect("valid key");
                    }
                }
            }
        }
        t
    }

    pub fn all() -> Vec<(&'static str, IntegralTable)> {
        vec![
            ("P2", p2()),
            ("quadric surface", quadric_surface()),
            ("K3", k3()),
            ("abelian surface", abelian_surface()),
            ("P4", p4()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u32, k: u32) -> i64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
    }

    /// `h^2` coefficient of `G` from `[h^2] (lambda + h)^k = C(k, 2) lambda^(k-2)`.
    fn h2_oracle(n: usize) -> GradedClass {
        let mut r = GradedClass::zero(n);
        let lam = |k: u32| GradedClass::lambda(n).pow(k);
        // G = sum_i (-1)^i c_i (n/2 u^(n+2-i) - c_1 u^(n+1-i))
        for i in 0..=n {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            let k1 = (n + 2 - i) as u32;
            if k1 >= 2 {
                let t = GradedClass::c(n, i).mul(&lam(k1 - 2)).scale(sign * binom(k1, 2) * n as i64 / 2);
                r = r.add(&t);
            }
            let k2 = (n + 1 - i) as u32;
            if k2 >= 2 {
                let t = GradedClass::c(n, i).mul(&GradedClass::c(n, 1)).mul(&lam(k2 - 2)).scale(-sign * binom(k2, 2));
                r = r.add(&t);
            }
        }
        r
    }

    #[test]
    fn small_classes() {
        let u = GradedClass::lambda(1).add(&GradedClass::h(1));
        assert_eq!(class_of_c(1).unwrap(), u.mul(&u.sub(&GradedClass::c(1, 1))));
        let c2 = class_of_c(2).unwrap();
        assert_eq!(
            c2,
            GradedClass::parse(
                2,
                "h^3 + 3*lambda*h^2 + 3*lambda^2*h + lambda^3 - c1*h^2 - 2*c1*lambda*h - c1*lambda^2 + c2*h + c2*lambda"
            )
            .unwrap()
        );
        let g = degree_class(2).unwrap();
        assert_eq!(g, GradedClass::parse(2, "6*lambda^2 - 6*c1*lambda + c1^2 + c2").unwrap());
        assert_eq!(g.to_string(), "6*lambda^2 - 6*c1*lambda + c1^2 + c2");
        assert!(class_of_r(3).is_err());
    }

    #[test]
    fn h2_coefficient_matches_binomial_expansion() {
        for n in [2, 4, 6] {
            assert_eq!(degree_class(n).unwrap(), h2_oracle(n), "n = {n}");
        }
    }

    #[test]
    fn distributivity_and_constant_term() {
        for n in [2, 4, 6] {
            let c = class_of_c(n).unwrap();
            let u = GradedClass::lambda(n).add(&GradedClass::h(n));
            let split = u.scale(n as u64 / 2).mul(&c).sub(&GradedClass::c(n, 1).mul(&c));
            assert_eq!(class_of_r(n).unwrap(), split);
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let expect = GradedClass::c(n, n)
                .scale(n as u64 / 2)
                .add(&GradedClass::c(n, 1).mul(&GradedClass::c(n, n - 1)))
                .scale(sign);
            assert_eq!(degree_class(n).unwrap().coeff_of_lambda(0), expect);
        }
    }

    #[test]
    fn caps_truncate() {
        let u = GradedClass::lambda(2).add(&GradedClass::h(2)).with_cap(2);
        assert!(u.pow(3).is_zero());
        assert_eq!(u.pow(2).terms().count(), 3);
    }

    #[test]
    fn plane_degrees() {
        let t = examples::p2();
        for (d, want) in [(2, 0), (3, 12), (4, 36), (5, 72), (6, 120)] {
            let r = deg_r(2, &t, Some(d)).unwrap();
            assert_eq!(r.degree, BigInt::from(want));
            assert_eq!(r.degree, BigInt::from(6 * d * d - 18 * d + 12));
        }
        assert!(!deg_r(2, &t, Some(2)).unwrap().in_regime);
        assert!(matches!(deg_r(2, &t, None), Err(Error::MissingIntegral(_))));
    }

    #[test]
    fn divisibility_examples() {
        let want = [12, 12, 24, 0, 60];
        for ((name, t), w) in examples::all().into_iter().zip(want) {
            let n = if name == "P4" { 4 } else { 2 };
            let r = divisibility_check(n, &t).unwrap();
            assert_eq!(r.value, BigInt::from(w), "{name}");
            assert!(r.divisible_by_4);
            for d in [4, 5, 6] {
                let r = deg_r(n, &t, Some(d)).unwrap();
                assert!(r.divisible_by_4, "{name} at lambda = {d}: {}", r.degree);
            }
        }
    }

    #[test]
    fn json_tables() {
        let t = IntegralTable::from_json(2, r#"{"c1^2": 9, "c2": 3, "c1*lambda": 12, "lambda^2": 16}"#).unwrap();
        assert_eq!(deg_r(2, &t, None).unwrap().degree, BigInt::from(36));
        assert!(IntegralTable::from_json(2, r#"{"c7": 1}"#).is_err());
    }
}
