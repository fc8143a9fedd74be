//! Ideals of the power-series ring, seen through a truncation: the span of
//! all `monomial * generator` modulo degree `d + 1` is exactly
//! `(I + m^{d+1}) / m^{d+1}`, so membership and colength questions become
//! linear algebra on a Macaulay matrix.

use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::{Field, Jet, Monomial, MultiPoly, Vars};
use crate::error::{Error, Result};

/// `dim_k k[[x]]/I`, or a lower bound when the truncation could not see the
/// whole quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuotientDim {
    Exact(usize),
    AtLeast(usize),
}

impl QuotientDim {
    pub fn is_at_most(self, k: usize) -> bool {
        matches!(self, QuotientDim::Exact(d) if d <= k)
    }
}

impl fmt::Display for QuotientDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientDim::Exact(d) => write!(f, "{d}"),
            QuotientDim::AtLeast(d) => write!(f, ">={d}"),
        }
    }
}

impl Serialize for QuotientDim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            QuotientDim::Exact(d) => s.serialize_u64(*d as u64),
            QuotientDim::AtLeast(d) => s.serialize_str(&format!(">={d}")),
        }
    }
}

/// Row echelon form of the truncated ideal. Columns are monomials of
/// degree `<= d` in increasing degree, and every stored row has its pivot at
/// its lowest nonzero column.
pub struct LocalIdeal<R: Field> {
    ring: R,
    vars: Vars,
    d: u32,
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    rows: HashMap<usize, Vec<R::Elem>>,
}

impl<R: Field> LocalIdeal<R> {
    pub fn new(gens: &[Jet<R>], d: u32) -> Result<Self> {
        let first = gens.first().ok_or_else(|| Error::Dimension("no generators".into()))?;
        let ring = first.ring().clone();
        let vars = first.vars().clone();
        let monos = Monomial::all_up_to_degree(vars.len(), d);
        let index = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut li = LocalIdeal {
            ring,
            vars,
            d,
            monos,
            index,
            rows: HashMap::new(),
        };
        for g in gens {
            if g.vars() != &li.vars {
                return Err(Error::VariableMismatch {
                    left: li.vars.to_string(),
                    right: g.vars().to_string(),
                });
            }
            if g.order() < d {
                return Err(Error::OrderTooLow { order: g.order(), needed: d });
            }
            let low = g.poly().order().unwrap_or(d + 1);
            if low > d {
                continue;
            }
            for m in Monomial::all_up_to_degree(li.vars.len(), d - low) {
                let row = li.dense(g.poly().terms().map(|(t, c)| (t.mul(&m), c.clone())));
                li.insert(row);
            }
        }
        Ok(li)
    }

    fn dense<I: Iterator<Item = (Monomial, R::Elem)>>(&self, terms: I) -> Vec<R::Elem> {
        let mut v = vec![self.ring.zero(); self.monos.len()];
        for (m, c) in terms {
            if let Some(&i) = self.index.get(&m) {
                v[i] = self.ring.add(&v[i], &c);
            }
        }
        v
    }

    fn insert(&mut self, mut v: Vec<R::Elem>) {
        if let Some(p) = self.reduce_for_insert(&mut v) {
            let inv = self.ring.inv(&v[p]).expect("nonzero pivot");
            for x in v.iter_mut() {
                *x = self.ring.mul(x, &inv);
            }
            self.rows.insert(p, v);
        }
    }

    /// Reduce `v` by the stored rows; the first column that could not be
    /// cleared is the new pivot.
    fn reduce_for_insert(&self, v: &mut [R::Elem]) -> Option<usize> {
        let r = &self.ring;
        for col in 0..v.len() {
            if r.is_zero(&v[col]) {
                continue;
            }
            match self.rows.get(&col) {
                None => return Some(col),
                Some(row) => {
                    let f = v[col].clone();
                    for (k, a) in row.iter().enumerate().skip(col) {
                        if !r.is_zero(a) {
                            v[k] = r.sub(&v[k], &r.mul(&f, a));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `f` lies in `I + m^{d+1}`.
    pub fn contains(&self, f: &Jet<R>) -> bool {
        let mut v = self.dense(f.poly().terms().map(|(m, c)| (m.clone(), c.clone())));
        self.reduce_for_insert(&mut v).is_none()
    }

    /// Monomials of degree `<= d` that are not pivots; they span the
    /// truncated quotient.
    pub fn standard_monomials(&self) -> Vec<Monomial> {
        (0..self.monos.len())
            .filter(|i| !self.rows.contains_key(i))
            .map(|i| self.monos[i].clone())
            .collect()
    }

    /// Exact when some full degree `e <= d` consists of pivots: then
    /// `m^e` lies in `I + m^{e+1}`, hence in `I` by Nakayama.
    pub fn quotient_dim(&self) -> QuotientDim {
        let n = self.vars.len();
        let dim = self.monos.len() - self.rank();
        for e in 0..=self.d {
            let all = Monomial::all_of_degree(n, e)
                .iter()
                .all(|m| self.rows.contains_key(&self.index[m]));
            if all {
                return QuotientDim::Exact(dim);
            }
        }
        QuotientDim::AtLeast(dim)
    }
}

/// `f` lies in the ideal generated by `gens` modulo terms of degree `> d`.
pub fn jet_membership<R: Field>(f: &Jet<R>, gens: &[Jet<R>], d: u32) -> Result<bool> {
    Ok(LocalIdeal::new(gens, d)?.contains(f))
}

/// Colength of an ideal of `k[[x_1..x_n]]`.
pub fn local_quotient_dim<R: Field>(gens: &[Jet<R>], d: u32) -> Result<QuotientDim> {
    Ok(LocalIdeal::new(gens, d)?.quotient_dim())
}

/// Colength of an ideal of `k[[s, t]]`, with the spanning monomials.
pub fn quotient_dim_truncated<R: Field>(gens: &[Jet<R>], d: u32) -> Result<(QuotientDim, Vec<Monomial>)> {
    let first = gens.first().ok_or_else(|| Error::Dimension("no generators".into()))?;
    if first.vars().len() != 2 {
        return Err(Error::Dimension(format!(
            "expected 2 variables, got {}",
            first.vars().len()
        )));
    }
    let li = LocalIdeal::new(gens, d)?;
    Ok((li.quotient_dim(), li.standard_monomials()))
}

/// The ideal of `k[[s, t]]` generated by `gens` is exactly `(s^2, t^2)`.
/// Needs `d >= 3` so that `st` is visible as a non-member.
pub fn is_s2_t2<R: Field>(gens: &[Jet<R>], d: u32) -> Result<bool> {
    quotient_dim_truncated(gens, d)?;
    let li = LocalIdeal::new(gens, d)?;
    let (ring, vars) = (gens[0].ring(), gens[0].vars());
    let s2 = Jet::new(MultiPoly::var(ring, vars, 0).pow(2), d);
    let t2 = Jet::new(MultiPoly::var(ring, vars, 1).pow(2), d);
    Ok(li.contains(&s2) && li.contains(&t2) && li.quotient_dim() == QuotientDim::Exact(4))
}

/// Colength exactly 4 with `x_i^2` in the ideal for every variable. In
/// characteristic 2 squaring is additive, so this says the quotient is
/// `k[s, t]/(s^2, t^2)` in suitable coordinates, whatever the number of
/// variables.
pub fn is_square_fat_point<R: Field>(gens: &[Jet<R>], d: u32) -> Result<bool> {
    let li = LocalIdeal::new(gens, d)?;
    if li.quotient_dim() != QuotientDim::Exact(4) {
        return Ok(false);
    }
    let (ring, vars) = (gens[0].ring(), gens[0].vars());
    Ok((0..vars.len()).all(|i| li.contains(&Jet::new(MultiPoly::var(ring, vars, i).pow(2), d))))
}
