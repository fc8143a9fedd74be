use super::matrix::Matrix;
use super::monomial::{Monomial, Vars};
use super::poly::MultiPoly;
use super::ring::{Field, Ring, SquareRoot};
use crate::error::{Error, Result};

/// A power series known up to total degree `order`. Stored terms never
/// exceed that degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<R: Ring> {
    poly: MultiPoly<R>,
    order: u32,
}

impl<R: Ring> Jet<R> {
    pub fn new(poly: MultiPoly<R>, order: u32) -> Self {
        Jet {
            poly: poly.truncate(order),
            order,
        }
    }

    pub fn zero(ring: &R, vars: &Vars, order: u32) -> Self {
        Jet::new(MultiPoly::zero(ring, vars), order)
    }

    pub fn var(ring: &R, vars: &Vars, i: usize, order: u32) -> Self {
        Jet::new(MultiPoly::var(ring, vars, i), order)
    }

    pub fn poly(&self) -> &MultiPoly<R> {
        &self.poly
    }

    pub fn into_poly(self) -> MultiPoly<R> {
        self.poly
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn vars(&self) -> &Vars {
        self.poly.vars()
    }

    pub fn ring(&self) -> &R {
        self.poly.ring()
    }

    /// Known to zero up to its order (not the same as the series being 0).
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn homogeneous_part(&self, d: u32) -> MultiPoly<R> {
        self.poly.homogeneous_part(d)
    }

    pub fn truncate(&self, order: u32) -> Self {
        Jet::new(self.poly.clone(), order.min(self.order))
    }

    /// Treat the stored polynomial as exact and carry it to a higher order.
    pub fn lift(&self, order: u32) -> Self {
        Jet::new(self.poly.clone(), order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        Jet::new(self.poly.add(&other.poly), order)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        Jet::new(self.poly.sub(&other.poly), order)
    }

    pub fn neg(&self) -> Self {
        Jet {
            poly: self.poly.neg(),
            order: self.order,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        Jet {
            poly: self.poly.mul_truncated(&other.poly, Some(order)),
            order,
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        Jet {
            poly: self.poly.scale(c),
            order: self.order,
        }
    }

    /// A partial derivative is only known one degree lower.
    pub fn derivative(&self, i: usize) -> Self {
        Jet::new(self.poly.derivative(i), self.order.saturating_sub(1))
    }

    /// `self(images)`. The images must have zero constant term; the result
    /// is known to the smaller of the two orders.
    pub fn compose(&self, images: &[Jet<R>]) -> Jet<R> {
        let order = images
            .iter()
            .map(|j| j.order)
            .min()
            .unwrap_or(self.order)
            .min(self.order);
        debug_assert!(images.iter().all(|j| j.ring().is_zero(&j.poly.constant_term())));
        let polys: Vec<_> = images.iter().map(|j| j.poly.clone()).collect();
        Jet::new(self.poly.substitute(&polys, Some(order)), order)
    }

    pub fn embed(&self, vars: &Vars) -> Result<Self> {
        Ok(Jet {
            poly: self.poly.embed(vars)?,
            order: self.order,
        })
    }
}

impl<R: SquareRoot> Jet<R> {
    /// Square root of a square jet; known to half the order.
    pub fn sqrt(&self) -> Result<Self> {
        Ok(Jet::new(self.poly.sqrt()?, self.order / 2))
    }
}

/// Jets of a fixed order in a fixed variable list, as a ring.
#[derive(Clone, Debug, PartialEq)]
pub struct JetRing<R: Ring> {
    pub base: R,
    pub vars: Vars,
    pub order: u32,
}

impl<R: Ring> JetRing<R> {
    pub fn new(base: R, vars: Vars, order: u32) -> Self {
        JetRing { base, vars, order }
    }

    pub fn var(&self, i: usize) -> Jet<R> {
        Jet::var(&self.base, &self.vars, i, self.order)
    }

    pub fn lift(&self, p: &MultiPoly<R>) -> Jet<R> {
        Jet::new(p.clone(), self.order)
    }
}

impl<R: Ring> Ring for JetRing<R> {
    type Elem = Jet<R>;

    fn zero(&self) -> Jet<R> {
        Jet::zero(&self.base, &self.vars, self.order)
    }
    fn one(&self) -> Jet<R> {
        Jet::new(MultiPoly::one(&self.base, &self.vars), self.order)
    }
    fn is_zero(&self, a: &Jet<R>) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Jet<R>, b: &Jet<R>) -> Jet<R> {
        a.add(b)
    }
    fn neg(&self, a: &Jet<R>) -> Jet<R> {
        a.neg()
    }
    fn mul(&self, a: &Jet<R>, b: &Jet<R>) -> Jet<R> {
        a.mul(b)
    }
    fn from_int(&self, n: i64) -> Jet<R> {
        Jet::new(
            MultiPoly::constant(&self.base, &self.vars, self.base.from_int(n)),
            self.order,
        )
    }
}

/// Solve `F_e(u, p) = 0` for the unknowns `u` (indices into the common
/// variable list) as jets in the remaining variables `p`, with `u(0) = 0`.
///
/// Writing `F = M u + N(u, p)` with `M` the linear part in `u`, the map
/// `u -> -M^{-1} N(u, p)` gains one degree per step, so `order` steps give
/// the unique solution modulo degree `order + 1`.
pub fn jet_solve<R: Field>(
    equations: &[Jet<R>],
    unknowns: &[usize],
    order: u32,
) -> Result<(Vars, Vec<Jet<R>>)> {
    if equations.len() != unknowns.len() {
        return Err(Error::Dimension(format!(
            "{} equations for {} unknowns",
            equations.len(),
            unknowns.len()
        )));
    }
    let Some(first) = equations.first() else {
        return Err(Error::Dimension("empty system".into()));
    };
    let ring = first.ring().clone();
    let vars = first.vars().clone();
    let n = unknowns.len();
    for e in equations {
        if e.vars() != &vars {
            return Err(Error::VariableMismatch {
                left: vars.to_string(),
                right: e.vars().to_string(),
            });
        }
        if !ring.is_zero(&e.poly().constant_term()) {
            return Err(Error::Invalid(
                "equation does not vanish at the origin".into(),
            ));
        }
    }
    let params = vars.without(unknowns);
    let lin = Matrix::from_fn(&ring, n, n, |r, c| {
        equations[r]
            .poly()
            .coeff(&Monomial::var(vars.len(), unknowns[c]))
    });
    let minv = lin.inverse().ok_or(Error::SingularLinearPart)?;

    let mut images: Vec<MultiPoly<R>> = Vec::with_capacity(vars.len());
    let mut p = 0;
    for i in 0..vars.len() {
        if unknowns.contains(&i) {
            images.push(MultiPoly::zero(&ring, &params));
        } else {
            images.push(MultiPoly::var(&ring, &params, p));
            p += 1;
        }
    }
    let eqs: Vec<MultiPoly<R>> = equations.iter().map(|e| e.poly().clone()).collect();
    let mut sol: Vec<MultiPoly<R>> = vec![MultiPoly::zero(&ring, &params); n];
    for _ in 0..order {
        for (k, &u) in unknowns.iter().enumerate() {
            images[u] = sol[k].clone();
        }
        let resid: Vec<MultiPoly<R>> = eqs
            .iter()
            .map(|e| e.substitute(&images, Some(order)))
            .collect();
        let next: Vec<MultiPoly<R>> = (0..n)
            .map(|r| {
                let mut acc = sol[r].clone();
                for (c, res) in resid.iter().enumerate() {
                    acc.add_assign(&res.scale(&ring.neg(minv.get(r, c))));
                }
                acc.truncate(order)
            })
            .collect();
        if next == sol {
            break;
        }
        sol = next;
    }
    Ok((params, sol.into_iter().map(|p| Jet::new(p, order)).collect()))
}
