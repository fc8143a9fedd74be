use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Exp = u16;

/// Exponent vector. The derived storage order is graded-lexicographic:
/// total degree first, then the exponent of the first variable, and so on.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[Exp; 12]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exps(exps: &[Exp]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn exps(&self) -> &[Exp] {
        &self.0
    }

    pub fn exps_mut(&mut self) -> &mut [Exp] {
        &mut self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> Exp {
        self.0[i]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Every monomial in `nvars` variables of total degree exactly `d`,
    /// in descending lexicographic order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, i: usize, left: u32, cur: &mut Vec<Exp>, out: &mut Vec<Monomial>) {
            if i + 1 == nvars {
                cur.push(left as Exp);
                out.push(Monomial::from_exps(cur));
                cur.pop();
                return;
            }
            for e in (0..=left).rev() {
                cur.push(e as Exp);
                rec(nvars, i + 1, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial::one(0));
            }
            return out;
        }
        rec(nvars, 0, d, &mut Vec::with_capacity(nvars), &mut out);
        out
    }

    /// Every monomial of total degree `<= d`, grouped by increasing degree.
    pub fn all_up_to_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        (0..=d)
            .flat_map(|e| Self::all_of_degree(nvars, e))
            .collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An ordered list of variable names shared between polynomials.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Vars(names.into_iter().map(Into::into).collect())
    }

    /// `prefix1, ..., prefixN`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        Vars::new((1..=n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn concat(&self, other: &Vars) -> Vars {
        Vars::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    /// The variables not listed in `drop`, in their original order.
    pub fn without(&self, drop: &[usize]) -> Vars {
        Vars::new(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, v)| v.clone()),
        )
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.join(","))
    }
}

impl fmt::Display for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_storage_order() {
        let a = Monomial::from_exps(&[2, 0]);
        let b = Monomial::from_exps(&[1, 1]);
        let c = Monomial::from_exps(&[0, 3]);
        assert!(a > b);
        assert!(c > a);
    }

    #[test]
    fn enumerates_monomials() {
        assert_eq!(Monomial::all_of_degree(2, 3).len(), 4);
        assert_eq!(Monomial::all_up_to_degree(4, 4).len(), 70);
        assert_eq!(Monomial::all_of_degree(3, 0), vec![Monomial::one(3)]);
    }

    #[test]
    fn lcm_and_division() {
        let a = Monomial::from_exps(&[2, 1, 0]);
        let b = Monomial::from_exps(&[1, 3, 0]);
        let l = a.lcm(&b);
        assert_eq!(l.exps(), &[2, 3, 0]);
        assert!(a.divides(&l));
        assert_eq!(a.quotient_of(&l).exps(), &[0, 2, 0]);
        assert!(!a.is_coprime(&b));
    }
}
