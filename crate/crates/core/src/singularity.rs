//! Corank-two hypersurface singularities in characteristic 2.
//!
//! A singular point is given by a jet `phi` in `n` variables (`n` even) with
//! no constant or linear part. In admissible coordinates the Hessian is
//! `J_{n-2,n}`, the first `n-2` variables are called `x` and the last two
//! `xi1, xi2`; the types (A), (C) and (R) are rank conditions on a few
//! coefficients of `phi` in those coordinates.

use serde::Serialize;

use crate::algebra::{jet_solve, Gf2k, GfElem, Jet, JetRing, Matrix, Monomial, MultiPoly, Poly, Ring, Vars};
use crate::error::{Error, Result};
use crate::groebner::{is_square_fat_point, local_quotient_dim, quotient_dim_truncated, QuotientDim};
use crate::pfaffian::{alt_normal_form, alt_rank, pfaffian, tau, AlternatingMatrix};

/// Working order of the local-ring oracle.
pub const ORACLE_ORDER: u32 = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct SingularJet {
    phi: Jet<Gf2k>,
}

impl SingularJet {
    pub fn new(phi: Jet<Gf2k>) -> Result<Self> {
        let n = phi.vars().len();
        if n == 0 || n % 2 == 1 {
            return Err(Error::Invalid(format!("dimension {n} must be even and positive")));
        }
        if phi.poly().order().is_some_and(|o| o < 2) {
            return Err(Error::NotSingular);
        }
        Ok(SingularJet { phi })
    }

    pub fn from_poly(p: Poly, order: u32) -> Result<Self> {
        Self::new(Jet::new(p, order))
    }

    pub fn phi(&self) -> &Jet<Gf2k> {
        &self.phi
    }

    pub fn n(&self) -> usize {
        self.phi.vars().len()
    }

    pub fn order(&self) -> u32 {
        self.phi.order()
    }

    pub fn field(&self) -> &Gf2k {
        self.phi.ring()
    }

    pub fn vars(&self) -> &Vars {
        self.phi.vars()
    }
}

/// Substitute `x_i -> sum_k t_ik x_k`.
pub fn linear_change(p: &Poly, t: &Matrix<Gf2k>) -> Poly {
    let f = p.ring();
    let vars = p.vars();
    let images: Vec<Poly> = (0..vars.len())
        .map(|i| {
            MultiPoly::from_terms(
                f,
                vars,
                (0..vars.len()).map(|k| (Monomial::var(vars.len(), k), *t.get(i, k))),
            )
        })
        .collect();
    p.substitute(&images, p.degree())
}

/// The alternating matrix of cross quadratic coefficients, i.e. the second
/// partials at the origin. Its diagonal vanishes because `d^2/dx^2` kills
/// every term in characteristic 2.
pub fn hessian(j: &SingularJet) -> AlternatingMatrix<Gf2k> {
    let n = j.n();
    let q = j.phi.homogeneous_part(2);
    AlternatingMatrix::from_fn(j.field(), n, |a, b| {
        let mut e = vec![0u16; n];
        e[a] = 1;
        e[b] = 1;
        q.coeff_of(&e)
    })
}

/// `phi o T` with Hessian `J_{2r,n}`.
pub fn admissible_transform(j: &SingularJet) -> (Matrix<Gf2k>, SingularJet) {
    let (t, _) = alt_normal_form(&hessian(j));
    let phi = Jet::new(linear_change(j.phi.poly(), &t), j.order());
    (t, SingularJet { phi })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientTable {
    pub a: Vec<GfElem>,
    pub b: Vec<GfElem>,
    pub c: Vec<GfElem>,
    pub d: Vec<GfElem>,
    pub alpha1: GfElem,
    pub alpha2: GfElem,
    pub beta1: GfElem,
    pub beta2: GfElem,
    pub gamma1: GfElem,
    pub gamma2: GfElem,
    pub f40: GfElem,
    pub f31: GfElem,
    pub f22: GfElem,
    pub f13: GfElem,
    pub f04: GfElem,
    pub e: Vec<GfElem>,
    pub t1: GfElem,
    pub t2: GfElem,
}

impl CoefficientTable {
    pub fn recompute_t(&self, f: &Gf2k) -> (GfElem, GfElem) {
        let mut t1 = self.f31;
        let mut t2 = self.f13;
        for i in 0..self.d.len() {
            t1 = f.add(&t1, &f.mul(&self.d[i], &self.b[tau(i)]));
            t2 = f.add(&t2, &f.mul(&self.d[i], &self.c[tau(i)]));
        }
        (t1, t2)
    }

    /// `[[a1, b1, b2], [a2, g1, g2]]`.
    pub fn rank1_matrix(&self, f: &Gf2k) -> Matrix<Gf2k> {
        Matrix::from_rows(
            f,
            vec![
                vec![self.alpha1, self.beta1, self.beta2],
                vec![self.alpha2, self.gamma1, self.gamma2],
            ],
        )
        .expect("rectangular")
    }

    /// The same with the column `(T1, T2)` appended.
    pub fn rank2_matrix(&self, f: &Gf2k) -> Matrix<Gf2k> {
        Matrix::from_rows(
            f,
            vec![
                vec![self.alpha1, self.beta1, self.beta2, self.t1],
                vec![self.alpha2, self.gamma1, self.gamma2, self.t2],
            ],
        )
        .expect("rectangular")
    }

    pub fn any_abc(&self) -> bool {
        [self.alpha1, self.alpha2, self.beta1, self.beta2, self.gamma1, self.gamma2]
            .iter()
            .any(|c| c.bits() != 0)
    }
}

fn coeff(p: &Poly, pairs: &[(usize, u16)]) -> GfElem {
    let mut e = vec![0u16; p.nvars()];
    for &(i, k) in pairs {
        e[i] += k;
    }
    p.coeff_of(&e)
}

/// Read the named coefficients off an admissible jet of Hessian rank
/// `n - 2`. `aux` are the auxiliary series `phi_j`, already in the same
/// coordinates.
pub fn extract_table(j: &SingularJet, aux: &[Jet<Gf2k>]) -> Result<CoefficientTable> {
    let f = j.field().clone();
    let n = j.n();
    let h = hessian(j);
    if h != AlternatingMatrix::j_form(&f, (n - 2) / 2, n) {
        let rank = alt_rank(&h);
        if rank != n - 2 {
            return Err(Error::HessianRank { rank, expected: n - 2 });
        }
        return Err(Error::Invalid("jet is not in admissible coordinates".into()));
    }
    let p = j.phi.poly();
    let (x1, x2) = (n - 2, n - 1);
    let m = n - 2;
    let mut t = CoefficientTable {
        a: (0..m).map(|i| coeff(p, &[(i, 2)])).collect(),
        b: (0..m).map(|i| coeff(p, &[(i, 1), (x1, 2)])).collect(),
        c: (0..m).map(|i| coeff(p, &[(i, 1), (x2, 2)])).collect(),
        d: (0..m).map(|i| coeff(p, &[(i, 1), (x1, 1), (x2, 1)])).collect(),
        alpha1: coeff(p, &[(x1, 2)]),
        alpha2: coeff(p, &[(x2, 2)]),
        beta1: coeff(p, &[(x1, 3)]),
        beta2: coeff(p, &[(x1, 2), (x2, 1)]),
        gamma1: coeff(p, &[(x1, 1), (x2, 2)]),
        gamma2: coeff(p, &[(x2, 3)]),
        f40: coeff(p, &[(x1, 4)]),
        f31: coeff(p, &[(x1, 3), (x2, 1)]),
        f22: coeff(p, &[(x1, 2), (x2, 2)]),
        f13: coeff(p, &[(x1, 1), (x2, 3)]),
        f04: coeff(p, &[(x2, 4)]),
        e: aux.iter().map(|g| coeff(g.poly(), &[(x1, 1), (x2, 1)])).collect(),
        t1: GfElem::ZERO,
        t2: GfElem::ZERO,
    };
    let (t1, t2) = t.recompute_t(&f);
    t.t1 = t1;
    t.t2 = t2;
    Ok(t)
}

/// `rho`: the Pfaffian of the matrix of second partials, as a jet known to
/// two degrees less than `phi`.
pub fn rho(j: &SingularJet) -> Jet<Gf2k> {
    let n = j.n();
    let order = j.order().saturating_sub(2);
    let jr = JetRing::new(j.field().clone(), j.vars().clone(), order);
    let firsts: Vec<Jet<Gf2k>> = (0..n).map(|i| j.phi.derivative(i)).collect();
    let m = AlternatingMatrix::from_fn(&jr, n, |a, b| firsts[a].derivative(b).truncate(order));
    pfaffian(&m).expect("even size")
}

/// `{phi, d1 phi, ..., dn phi}` and the same with `rho` appended.
pub fn scheme_ideals(j: &SingularJet) -> (Vec<Jet<Gf2k>>, Vec<Jet<Gf2k>>) {
    let mut c = vec![j.phi.clone()];
    c.extend((0..j.n()).map(|i| j.phi.derivative(i)));
    let mut r = c.clone();
    r.push(rho(j));
    (c, r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub hessian_rank: usize,
    /// Columns of `T`: the admissible coordinates in terms of the input ones.
    pub transform: Vec<Vec<GfElem>>,
    #[serde(rename = "typeA")]
    pub type_a: bool,
    #[serde(rename = "typeC")]
    pub type_c: bool,
    #[serde(rename = "typeR")]
    pub type_r: bool,
    pub rank1_matrix: Option<Vec<Vec<GfElem>>>,
    pub rank2_matrix: Option<Vec<Vec<GfElem>>>,
    pub table: Option<CoefficientTable>,
    pub oracle_dim_c: QuotientDim,
    pub oracle_dim_r: QuotientDim,
}

fn rows_of(m: &Matrix<Gf2k>) -> Vec<Vec<GfElem>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// Types (A), (C), (R) from the coefficient table, with the local-ring
/// oracle run alongside. `aux` are the optional series `phi_j` in the input
/// coordinates.
pub fn classify(j: &SingularJet, aux: &[Jet<Gf2k>]) -> Result<ClassificationReport> {
    if j.order() < 4 {
        return Err(Error::OrderTooLow { order: j.order(), needed: 4 });
    }
    let f = j.field().clone();
    let n = j.n();
    let rank = alt_rank(&hessian(j));
    let (oc, or) = classify_oracle(j)?;
    if rank < n - 2 {
        return Ok(ClassificationReport {
            n,
            hessian_rank: rank,
            transform: rows_of(&Matrix::identity(&f, n)),
            type_a: false,
            type_c: false,
            type_r: false,
            rank1_matrix: None,
            rank2_matrix: None,
            table: None,
            oracle_dim_c: oc,
            oracle_dim_r: or,
        });
    }
    let (t, adm) = admissible_transform(j);
    let aux2: Vec<Jet<Gf2k>> = aux
        .iter()
        .map(|g| Jet::new(linear_change(g.poly(), &t), g.order()))
        .collect();
    let table = extract_table(&adm, &aux2)?;
    let m1 = table.rank1_matrix(&f);
    let m2 = table.rank2_matrix(&f);
    Ok(ClassificationReport {
        n,
        hessian_rank: rank,
        transform: rows_of(&t.transpose()),
        type_a: table.any_abc(),
        type_c: m1.rank() == 2,
        type_r: m2.rank() == 2,
        rank1_matrix: Some(rows_of(&m1)),
        rank2_matrix: Some(rows_of(&m2)),
        table: Some(table),
        oracle_dim_c: oc,
        oracle_dim_r: or,
    })
}

/// The reduction `x_i = x_i(s, t)` from `d phi / d x_i = 0` (`i <= n-2`) in
/// admissible coordinates, treating the stored polynomial as exact.
/// Returns the `(s, t)` variable list and the images of all `n` coordinates.
pub fn reduce_to_plane(adm: &SingularJet, order: u32) -> Result<(Vars, Vec<Poly>)> {
    let n = adm.n();
    let phi = adm.phi.lift(order + 1);
    let eqs: Vec<Jet<Gf2k>> = (0..n - 2).map(|i| phi.derivative(i)).collect();
    let f = adm.field();
    if n == 2 {
        let st = adm.vars().clone();
        let images = (0..2).map(|i| MultiPoly::var(f, &st, i)).collect();
        return Ok((st, images));
    }
    let unknowns: Vec<usize> = (0..n - 2).collect();
    let (st, sol) = jet_solve(&eqs, &unknowns, order)?;
    let mut images: Vec<Poly> = sol.into_iter().map(Jet::into_poly).collect();
    images.push(MultiPoly::var(f, &st, 0));
    images.push(MultiPoly::var(f, &st, 1));
    Ok((st, images))
}

/// The generators `g1..g4` of the reduced local rings in `k[[s, t]]`.
pub fn plane_generators(adm: &SingularJet, order: u32) -> Result<Vec<Jet<Gf2k>>> {
    let n = adm.n();
    let (_, images) = reduce_to_plane(adm, order)?;
    let lifted = SingularJet {
        phi: adm.phi.lift(order + 2),
    };
    let sub = |p: &Jet<Gf2k>| Jet::new(p.poly().substitute(&images, Some(order)), order);
    let phi = &lifted.phi;
    Ok(vec![
        sub(phi),
        sub(&phi.derivative(n - 2)),
        sub(&phi.derivative(n - 1)),
        sub(&rho(&lifted)),
    ])
}

fn more_than_four() -> QuotientDim {
    QuotientDim::AtLeast(5)
}

/// Colengths of the local rings of `C(D,p)` and `R(D,p)` computed through
/// the plane reduction. Hessian rank below `n - 2` forces both above 4.
pub fn classify_oracle(j: &SingularJet) -> Result<(QuotientDim, QuotientDim)> {
    let n = j.n();
    if alt_rank(&hessian(j)) < n - 2 {
        return Ok((more_than_four(), more_than_four()));
    }
    let (_, adm) = admissible_transform(j);
    let g = plane_generators(&adm, ORACLE_ORDER)?;
    let (dc, _) = quotient_dim_truncated(&g[..3], ORACLE_ORDER)?;
    let (dr, _) = quotient_dim_truncated(&g, ORACLE_ORDER)?;
    Ok((dc, dr))
}

/// The same colengths straight from the `n`-variable ideals, without any
/// coordinate change.
pub fn classify_oracle_direct(j: &SingularJet, order: u32) -> Result<(QuotientDim, QuotientDim)> {
    let lifted = SingularJet {
        phi: j.phi.lift(order + 2),
    };
    let (c, r) = scheme_ideals(&lifted);
    let cut = |v: Vec<Jet<Gf2k>>| v.into_iter().map(|g| g.truncate(order)).collect::<Vec<_>>();
    Ok((
        local_quotient_dim(&cut(c), order)?,
        local_quotient_dim(&cut(r), order)?,
    ))
}

/// Colengths of `C(D,p)` and `R(D,p)` from the `n`-variable ideals together
/// with the verdict "length 4 and isomorphic to `k[s,t]/(s^2,t^2)`".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub dim_c: QuotientDim,
    pub dim_r: QuotientDim,
    #[serde(rename = "typeC")]
    pub type_c: bool,
    #[serde(rename = "typeR")]
    pub type_r: bool,
}

pub fn oracle_verdict(j: &SingularJet, order: u32) -> Result<OracleVerdict> {
    let lifted = SingularJet {
        phi: j.phi.lift(order + 2),
    };
    let (c, r) = scheme_ideals(&lifted);
    let cut = |v: Vec<Jet<Gf2k>>| v.into_iter().map(|g| g.truncate(order)).collect::<Vec<_>>();
    let (c, r) = (cut(c), cut(r));
    Ok(OracleVerdict {
        dim_c: local_quotient_dim(&c, order)?,
        dim_r: local_quotient_dim(&r, order)?,
        type_c: is_square_fat_point(&c, order)?,
        type_r: is_square_fat_point(&r, order)?,
    })
}

pub mod sample {
    //! Random jets with prescribed type, for tests and the self-test driver.

    use rand::Rng;

    use super::*;

    #[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
    pub enum Family {
        /// All coefficients random.
        Generic,
        /// Rank-one `[[a1,b1,b2],[a2,g1,g2]]`, `T` off its row space.
        NotCButR,
        /// Rank-one `[[a1,b1,b2],[a2,g1,g2]]`, `T` on its row space.
        NeitherCNorR,
        /// All of `a1..g2` zero.
        NotA,
    }

    fn put(p: &mut Poly, pairs: &[(usize, u16)], c: GfElem) {
        let mut e = vec![0u16; p.nvars()];
        for &(i, k) in pairs {
            e[i] += k;
        }
        p.add_term(Monomial::from_exps(&e), &c);
    }

    /// An admissible jet of order 4 with Hessian `J_{n-2,n}` in variables
    /// `x1..x_{n-2}, xi1, xi2`.
    pub fn admissible_jet<G: Rng + ?Sized>(f: &Gf2k, n: usize, family: Family, rng: &mut G) -> SingularJet {
        let names: Vec<String> = (1..=n - 2)
            .map(|i| format!("x{i}"))
            .chain(["xi1".to_string(), "xi2".to_string()])
            .collect();
        let vars = Vars::new(names);
        let (x1, x2) = (n - 2, n - 1);
        let mut p = MultiPoly::zero(f, &vars);
        for i in (0..n - 2).step_by(2) {
            put(&mut p, &[(i, 1), (i + 1, 1)], f.one());
        }
        // squares are invisible to the Hessian
        for i in 0..n {
            put(&mut p, &[(i, 2)], f.random(rng));
        }
        for d in 3..=4 {
            for m in Monomial::all_of_degree(n, d) {
                p.add_term(m, &f.random(rng));
            }
        }
        let table = |p: &Poly| extract_table(&SingularJet::from_poly(p.clone(), 4).unwrap(), &[]).unwrap();
        match family {
            Family::Generic => {}
            Family::NotA => {
                for pairs in [
                    vec![(x1, 2)],
                    vec![(x2, 2)],
                    vec![(x1, 3)],
                    vec![(x1, 2), (x2, 1)],
                    vec![(x1, 1), (x2, 2)],
                    vec![(x2, 3)],
                ] {
                    let t = table(&p);
                    let cur = match pairs.as_slice() {
                        [(_, 2)] if pairs[0].0 == x1 => t.alpha1,
                        [(_, 2)] => t.alpha2,
                        [(_, 3)] if pairs[0].0 == x1 => t.beta1,
                        [(_, 3)] => t.gamma2,
                        [(_, 2), _] => t.beta2,
                        _ => t.gamma1,
                    };
                    put(&mut p, &pairs, cur);
                }
            }
            Family::NotCButR | Family::NeitherCNorR => {
                let t = table(&p);
                let lambda = f.random_nonzero(rng);
                // second row := lambda * first row
                put(&mut p, &[(x2, 2)], f.add(&t.alpha2, &f.mul(&lambda, &t.alpha1)));
                put(&mut p, &[(x1, 1), (x2, 2)], f.add(&t.gamma1, &f.mul(&lambda, &t.beta1)));
                put(&mut p, &[(x2, 3)], f.add(&t.gamma2, &f.mul(&lambda, &t.beta2)));
                let t = table(&p);
                let delta = if family == Family::NotCButR {
                    f.random_nonzero(rng)
                } else {
                    f.zero()
                };
                let want_t2 = f.add(&f.mul(&lambda, &t.t1), &delta);
                put(&mut p, &[(x1, 1), (x2, 3)], f.add(&t.t2, &want_t2));
            }
        }
        SingularJet::from_poly(p, 4).expect("singular")
    }

    /// A random invertible matrix.
    pub fn invertible<G: Rng + ?Sized>(f: &Gf2k, n: usize, rng: &mut G) -> Matrix<Gf2k> {
        loop {
            let m = Matrix::from_fn(f, n, n, |_, _| f.random(rng));
            if m.inverse().is_some() {
                return m;
            }
        }
    }

    /// A random linear change of coordinates applied to `j`.
    pub fn scrambled<G: Rng + ?Sized>(j: &SingularJet, rng: &mut G) -> SingularJet {
        let t = invertible(j.field(), j.n(), rng);
        SingularJet::from_poly(linear_change(j.phi().poly(), &t), j.order()).expect("still singular")
    }

    /// A random symplectic matrix for `J_{m,m}`.
    pub fn symplectic<G: Rng + ?Sized>(f: &Gf2k, m: usize, rng: &mut G) -> Matrix<Gf2k> {
        let j = AlternatingMatrix::j_form(f, m / 2, m);
        let a = invertible(f, m, rng);
        let (t, _) = alt_normal_form(&j.congruence(&a).expect("square"));
        a.mul(&t).expect("square")
    }

    /// A random change of admissible coordinates: linear part
    /// `[[A, 0], [*, B]]` with `A` symplectic, plus random terms of degree
    /// 2 and 3 in each coordinate.
    pub fn admissible_change<G: Rng + ?Sized>(j: &SingularJet, rng: &mut G) -> SingularJet {
        let f = j.field().clone();
        let n = j.n();
        let vars = j.vars().clone();
        let a = symplectic(&f, n - 2, rng);
        let b = invertible(&f, 2, rng);
        let images: Vec<Poly> = (0..n)
            .map(|i| {
                let mut p = MultiPoly::zero(&f, &vars);
                for k in 0..n {
                    let c = if i < n - 2 {
                        if k < n - 2 { *a.get(i, k) } else { f.zero() }
                    } else if k < n - 2 {
                        f.random(rng)
                    } else {
                        *b.get(i - (n - 2), k - (n - 2))
                    };
                    p.add_term(Monomial::var(n, k), &c);
                }
                for d in 2..=3 {
                    for m in Monomial::all_of_degree(n, d) {
                        if rng.random_bool(0.3) {
                            p.add_term(m, &f.random(rng));
                        }
                    }
                }
                p
            })
            .collect();
        let phi = j.phi().poly().substitute(&images, Some(j.order()));
        SingularJet::from_poly(phi, j.order()).expect("still singular")
    }
}
