use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::monomial::{Exp, Monomial, Vars};
use super::ring::{Field, Ring, SquareRoot};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial. Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<R: Ring> {
    ring: R,
    vars: Vars,
    terms: BTreeMap<Monomial, R::Elem>,
}

impl<R: Ring> MultiPoly<R> {
    pub fn zero(ring: &R, vars: &Vars) -> Self {
        MultiPoly {
            ring: ring.clone(),
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &R, vars: &Vars, c: R::Elem) -> Self {
        Self::term(ring, vars, Monomial::one(vars.len()), c)
    }

    pub fn one(ring: &R, vars: &Vars) -> Self {
        Self::constant(ring, vars, ring.one())
    }

    pub fn term(ring: &R, vars: &Vars, m: Monomial, c: R::Elem) -> Self {
        assert_eq!(m.nvars(), vars.len(), "monomial length");
        let mut p = Self::zero(ring, vars);
        if !ring.is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }

    /// The `i`-th variable.
    pub fn var(ring: &R, vars: &Vars, i: usize) -> Self {
        Self::term(ring, vars, Monomial::var(vars.len(), i), ring.one())
    }

    pub fn var_named(ring: &R, vars: &Vars, name: &str) -> Result<Self> {
        Ok(Self::var(ring, vars, vars.index(name)?))
    }

    pub fn from_terms<I>(ring: &R, vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, R::Elem)>,
    {
        let mut p = Self::zero(ring, vars);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R::Elem)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, R::Elem> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> R::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Coefficient of the monomial with the given exponents.
    pub fn coeff_of(&self, exps: &[Exp]) -> R::Elem {
        self.coeff(&Monomial::from_exps(exps))
    }

    pub fn constant_term(&self) -> R::Elem {
        self.coeff(&Monomial::one(self.nvars()))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// Largest total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Smallest total degree of a term, `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.get(i) as u32).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: &R::Elem) {
        if self.ring.is_zero(c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.ring.add(e.get(), c);
                if self.ring.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_compat(&self, other: &Self) {
        assert!(
            self.vars == other.vars,
            "variable lists differ: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compat(other);
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.check_compat(other);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.ring.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_truncated(other, None)
    }

    /// Product with every term of degree above `order` discarded.
    pub fn mul_truncated(&self, other: &Self, order: Option<u32>) -> Self {
        self.check_compat(other);
        let mut out = Self::zero(&self.ring, &self.vars);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        let lim = order.unwrap_or(u32::MAX);
        let rhs: Vec<_> = other.terms.iter().map(|(m, c)| (m, m.degree(), c)).collect();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > lim {
                break;
            }
            for &(mb, db, cb) in &rhs {
                if da + db > lim {
                    // rhs is sorted by degree first
                    break;
                }
                let c = self.ring.mul(ca, cb);
                out.add_term(ma.mul(mb), &c);
            }
        }
        out
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        if self.ring.is_zero(c) {
            return Self::zero(&self.ring, &self.vars);
        }
        Self::from_terms(
            &self.ring,
            &self.vars,
            self.terms.iter().map(|(m, a)| (m.clone(), self.ring.mul(a, c))),
        )
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &R::Elem) -> Self {
        Self::from_terms(
            &self.ring,
            &self.vars,
            self.terms.iter().map(|(t, a)| (t.mul(m), self.ring.mul(a, c))),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        self.pow_truncated(e, None)
    }

    pub fn pow_truncated(&self, mut e: u32, order: Option<u32>) -> Self {
        let mut acc = Self::one(&self.ring, &self.vars).truncate_opt(order);
        let mut base = self.truncate_opt(order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_truncated(&base, order);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_truncated(&base, order);
            }
        }
        acc
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        self.filter(|m| m.degree() == d)
    }

    /// Terms of total degree at most `d`.
    pub fn truncate(&self, d: u32) -> Self {
        self.filter(|m| m.degree() <= d)
    }

    fn truncate_opt(&self, d: Option<u32>) -> Self {
        match d {
            Some(d) => self.truncate(d),
            None => self.clone(),
        }
    }

    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Self {
        MultiPoly {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to the `i`-th variable.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.ring, &self.vars);
        for (m, c) in &self.terms {
            let e = m.get(i);
            if e == 0 {
                continue;
            }
            let k = self.ring.mul(&self.ring.from_int(e as i64), c);
            let mut m2 = m.clone();
            m2.exps_mut()[i] -= 1;
            out.add_term(m2, &k);
        }
        out
    }

    pub fn partial_derivative(&self, var: &str) -> Result<Self> {
        Ok(self.derivative(self.vars.index(var)?))
    }

    /// Value at a point given as one scalar per variable.
    pub fn eval(&self, point: &[R::Elem]) -> R::Elem {
        assert_eq!(point.len(), self.nvars());
        let ring = &self.ring;
        let mut powers: Vec<Vec<R::Elem>> = point.iter().map(|x| vec![ring.one(), x.clone()]).collect();
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = ring.mul(pw.last().unwrap(), &point[i]);
                    pw.push(next);
                }
                t = ring.mul(&t, &pw[e as usize]);
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }

    /// Replace the `i`-th variable by `images[i]`; all images share one
    /// target variable list. With `order` set, everything above that degree
    /// is dropped along the way.
    pub fn substitute(&self, images: &[MultiPoly<R>], order: Option<u32>) -> MultiPoly<R> {
        assert_eq!(images.len(), self.nvars(), "one image per variable");
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => self.vars.clone(),
        };
        let mut cache: Vec<Vec<MultiPoly<R>>> = images
            .iter()
            .map(|p| vec![MultiPoly::one(&self.ring, &target), p.truncate_opt(order)])
            .collect();
        let mut out = MultiPoly::zero(&self.ring, &target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&self.ring, &target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut cache[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap().mul_truncated(&pw[1], order);
                    pw.push(next);
                }
                t = t.mul_truncated(&pw[e as usize], order);
                if t.is_zero() {
                    break;
                }
            }
            out.add_assign(&t);
        }
        out
    }

    /// Re-express over another variable list containing every variable that
    /// actually occurs here.
    pub fn embed(&self, target: &Vars) -> Result<Self> {
        let map: Vec<Option<usize>> = self
            .vars
            .names()
            .iter()
            .map(|v| target.index(v).ok())
            .collect();
        let mut out = Self::zero(&self.ring, target);
        for (m, c) in &self.terms {
            let mut e = vec![0 as Exp; target.len()];
            for (i, &k) in m.exps().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let j = map[i].ok_or_else(|| Error::UnknownVariable(self.vars.name(i).to_string()))?;
                e[j] += k;
            }
            out.add_term(Monomial::from_exps(&e), c);
        }
        Ok(out)
    }

    /// Coefficients in another domain.
    pub fn map_coeffs<S: Ring, F: Fn(&R::Elem) -> S::Elem>(&self, ring: &S, f: F) -> MultiPoly<S> {
        MultiPoly::from_terms(
            ring,
            &self.vars,
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))),
        )
    }

    /// Variables that occur with a positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars())
            .filter(|&i| self.terms.keys().any(|m| m.get(i) > 0))
            .collect()
    }
}

impl<R: Field> MultiPoly<R> {
    /// Divide every coefficient by `c`.
    pub fn div_scalar(&self, c: &R::Elem) -> Option<Self> {
        let ic = self.ring.inv(c)?;
        Some(self.scale(&ic))
    }
}

impl<R: SquareRoot> MultiPoly<R> {
    /// Exact square root of a polynomial whose exponents are all even and
    /// whose coefficients are squares. Over a field of characteristic 2 that
    /// is every square.
    pub fn sqrt(&self) -> Result<Self> {
        let mut out = Self::zero(&self.ring, &self.vars);
        for (m, c) in &self.terms {
            if m.exps().iter().any(|e| e % 2 != 0) {
                return Err(Error::NotASquare);
            }
            let half: Vec<Exp> = m.exps().iter().map(|e| e / 2).collect();
            out.add_term(Monomial::from_exps(&half), &self.ring.sqrt(c)?);
        }
        Ok(out)
    }
}

impl<R: Ring> MultiPoly<R> {
    fn write_terms<F>(&self, f: &mut fmt::Formatter<'_>, coeff: F) -> fmt::Result
    where
        F: Fn(&R::Elem) -> String,
    {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            if !self.ring.is_one(c) || m.is_one() {
                factors.push(coeff(c));
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.vars.name(i), e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for MultiPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_terms(f, |c| format!("{c:?}"))
    }
}

/// Highest terms first: `c*x^2*y + x + 1`.
impl<R: Ring> fmt::Display for MultiPoly<R>
where
    R::Elem: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_terms(f, |c| c.to_string())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl<R: Ring> $tr for &MultiPoly<R> {
            type Output = MultiPoly<R>;
            fn $m(self, rhs: &MultiPoly<R>) -> MultiPoly<R> {
                MultiPoly::$m(self, rhs)
            }
        }
        impl<R: Ring> $tr for MultiPoly<R> {
            type Output = MultiPoly<R>;
            fn $m(self, rhs: MultiPoly<R>) -> MultiPoly<R> {
                MultiPoly::$m(&self, &rhs)
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl<R: Ring> Neg for &MultiPoly<R> {
    type Output = MultiPoly<R>;
    fn neg(self) -> MultiPoly<R> {
        MultiPoly::neg(self)
    }
}

/// Polynomials over `R` in a fixed variable list, as a ring in their own
/// right (used for symbolic matrix entries).
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<R: Ring> {
    pub base: R,
    pub vars: Vars,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R, vars: Vars) -> Self {
        PolyRing { base, vars }
    }

    pub fn var(&self, i: usize) -> MultiPoly<R> {
        MultiPoly::var(&self.base, &self.vars, i)
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = MultiPoly<R>;

    fn zero(&self) -> MultiPoly<R> {
        MultiPoly::zero(&self.base, &self.vars)
    }
    fn one(&self) -> MultiPoly<R> {
        MultiPoly::one(&self.base, &self.vars)
    }
    fn is_zero(&self, a: &MultiPoly<R>) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &MultiPoly<R>, b: &MultiPoly<R>) -> MultiPoly<R> {
        a.add(b)
    }
    fn neg(&self, a: &MultiPoly<R>) -> MultiPoly<R> {
        a.neg()
    }
    fn mul(&self, a: &MultiPoly<R>, b: &MultiPoly<R>) -> MultiPoly<R> {
        a.mul(b)
    }
    fn from_int(&self, n: i64) -> MultiPoly<R> {
        MultiPoly::constant(&self.base, &self.vars, self.base.from_int(n))
    }
}

impl<R: SquareRoot> SquareRoot for PolyRing<R> {
    fn sqrt(&self, a: &MultiPoly<R>) -> Result<MultiPoly<R>> {
        a.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{GfElem, Gf2k};

    fn xy() -> (Gf2k, Vars, MultiPoly<Gf2k>, MultiPoly<Gf2k>) {
        let f = Gf2k::default();
        let v = Vars::new(["x", "y"]);
        let x = MultiPoly::var(&f, &v, 0);
        let y = MultiPoly::var(&f, &v, 1);
        (f, v, x, y)
    }

    #[test]
    fn homogeneous_parts() {
        let (_, _, x, y) = xy();
        let p = &(&x.pow(2) + &(&x * &y)) + &y.pow(3);
        assert_eq!(p.homogeneous_part(2), &x.pow(2) + &(&x * &y));
        assert!(p.homogeneous_part(1).is_zero());
        assert_eq!(p.truncate(2), p.homogeneous_part(2));
    }

    #[test]
    fn derivatives_in_char_two() {
        let (_, _, x, y) = xy();
        assert_eq!(x.pow(3).partial_derivative("x").unwrap(), x.pow(2));
        assert!(x.pow(2).partial_derivative("x").unwrap().is_zero());
        assert_eq!((&x * &y).partial_derivative("x").unwrap(), y);
        assert_eq!(
            x.partial_derivative("q"),
            Err(Error::UnknownVariable("q".into()))
        );
    }

    #[test]
    fn substitution_and_eval() {
        let (f, v, x, y) = xy();
        let p = &x.pow(2) + &(&x * &y);
        // x -> x + y, y -> y
        let q = p.substitute(&[&x + &y, y.clone()], None);
        assert_eq!(q, &x.pow(2) + &(&x * &y));
        let pt = [f.elem(3).unwrap(), f.elem(5).unwrap()];
        let want = f.add(&f.mul(&pt[0], &pt[0]), &f.mul(&pt[0], &pt[1]));
        assert_eq!(p.eval(&pt), want);
        let _ = v;
    }

    #[test]
    fn sqrt_halves_exponents() {
        let (f, _, x, y) = xy();
        let c = f.elem(0x1234).unwrap();
        let p = &x.scale(&c) + &y.pow(2);
        let sq = p.pow(2);
        assert_eq!(sq.sqrt().unwrap(), p);
        assert_eq!((&x * &y).sqrt(), Err(Error::NotASquare));
        let _ = GfElem::ONE;
    }

    #[test]
    fn embed_reorders() {
        let (f, _, x, y) = xy();
        let w = Vars::new(["y", "z", "x"]);
        let p = (&x * &y.pow(2)).embed(&w).unwrap();
        assert_eq!(p.coeff_of(&[2, 0, 1]), f.one());
        assert!((&x * &y).embed(&Vars::new(["x"])).is_err());
    }
}
