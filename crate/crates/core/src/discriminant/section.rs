use rand::Rng;
use serde::Serialize;

use super::{free_indices, place, DiscriminantData};
use crate::algebra::{jet_solve, Gf2k, GfElem, Jet, MultiPoly, Poly, Ring, Vars};
use crate::error::{Error, Result};
use crate::singularity::CoefficientTable;

/// A general plane `L` through `[f]`, `y_i = A_i u + B_i v + C_i w` for the
/// free indices `i`, and a line `Lambda` in it, `D u + E v + F w = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionConfig {
    /// The free indices, 1-based, in the order of `a`, `b`, `c`.
    pub indices: Vec<usize>,
    pub a: Vec<GfElem>,
    pub b: Vec<GfElem>,
    pub c: Vec<GfElem>,
    pub d: GfElem,
    pub e: GfElem,
    pub f: GfElem,
}

impl SectionConfig {
    pub fn random<G: Rng + ?Sized>(field: &Gf2k, n: usize, m: usize, rng: &mut G) -> Self {
        let indices = free_indices(n, m);
        let k = indices.len();
        let mut draw = |k: usize| (0..k).map(|_| field.random(rng)).collect::<Vec<_>>();
        let a = draw(k);
        let b = draw(k);
        let c = draw(k);
        let def = draw(3);
        SectionConfig {
            indices,
            a,
            b,
            c,
            d: def[0],
            e: def[1],
            f: def[2],
        }
    }

    /// `(A_i, B_i, C_i)` for a free index `i`.
    pub fn abc(&self, i: usize) -> (GfElem, GfElem, GfElem) {
        let k = self.indices.iter().position(|&j| j == i).expect("free index");
        (self.a[k], self.b[k], self.c[k])
    }
}

/// The expansions of `x_i, u, v, w` along `SL` in the parameters `s, t`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionData {
    pub st: Vars,
    pub x: Vec<Jet<Gf2k>>,
    pub u: Jet<Gf2k>,
    pub v: Jet<Gf2k>,
    pub w: Jet<Gf2k>,
    /// Read off `U^[3] = t (Q_s s^2 + Q_t t^2)`.
    pub q_s: GfElem,
    pub q_t: GfElem,
}

/// Solve `Phi_L = (D_1 Phi)_L = .. = (D_n Phi)_L = 0` for
/// `x_1..x_{n-2}, u, v, w` in `k[[s, t]]`. The stored jets are treated as
/// exact polynomials.
pub fn solve_section(data: &DiscriminantData, cfg: &SectionConfig, order: u32) -> Result<SectionData> {
    let n = data.n();
    let m = data.m();
    if data.hessian_rank() + 2 != n {
        return Err(Error::HessianRank {
            rank: data.hessian_rank(),
            expected: n - 2,
        });
    }
    if order < 3 {
        return Err(Error::OrderTooLow { order, needed: 3 });
    }
    let fld = data.field();
    let names: Vec<String> = (1..=n - 2)
        .map(|i| format!("x{i}"))
        .chain(["s", "t", "u", "v", "w"].iter().map(|s| s.to_string()))
        .collect();
    let vars = Vars::new(names);
    let xs: Vec<usize> = (0..n).collect();
    let (iu, iv, iw) = (n, n + 1, n + 2);
    let var = |i: usize| MultiPoly::var(fld, &vars, i);
    let y = |i: usize| -> Poly {
        if i == n - 1 {
            var(iu)
        } else if i == n {
            var(iv)
        } else if i == m {
            var(iw)
        } else {
            let (a, b, c) = cfg.abc(i);
            &(&var(iu).scale(&a) + &var(iv).scale(&b)) + &var(iw).scale(&c)
        }
    };
    let phi0 = place(data.phi0().phi().poly(), &vars, &xs);
    let aux: Vec<Poly> = data.aux().iter().map(|g| place(g.poly(), &vars, &xs)).collect();

    let mut big = phi0.clone();
    for i in 1..=n {
        big.add_assign(&(&y(i) * &var(i - 1)));
    }
    for (k, g) in aux.iter().enumerate() {
        big.add_assign(&(&y(n + 1 + k) * g));
    }
    big.add_assign(&var(iw));
    let mut eqs = vec![Jet::new(big, order)];
    for i in 1..=n {
        let mut e = phi0.derivative(i - 1);
        e.add_assign(&y(i));
        for (k, g) in aux.iter().enumerate() {
            e.add_assign(&(&y(n + 1 + k) * &g.derivative(i - 1)));
        }
        eqs.push(Jet::new(e, order));
    }
    let unknowns: Vec<usize> = (0..n - 2).chain([iu, iv, iw]).collect();
    let (st, mut sol) = jet_solve(&eqs, &unknowns, order)?;
    let w = sol.pop().expect("w");
    let v = sol.pop().expect("v");
    let u = sol.pop().expect("u");
    let u3 = u.homogeneous_part(3);
    let q_s = u3.coeff_of(&[2, 1]);
    let q_t = u3.coeff_of(&[0, 3]);
    Ok(SectionData {
        st,
        x: sol,
        u,
        v,
        w,
        q_s,
        q_t,
    })
}

/// `Gamma = D U + E V + F W`, the local equation of `C_Lambda` in `SL`.
pub fn curve_at_p(sd: &SectionData, cfg: &SectionConfig) -> Jet<Gf2k> {
    sd.u.scale(&cfg.d).add(&sd.v.scale(&cfg.e)).add(&sd.w.scale(&cfg.f))
}

/// `Q_s, Q_t` from the coefficient table and the plane.
pub fn q_closed_form(f: &Gf2k, t: &CoefficientTable, cfg: &SectionConfig, n: usize, m: usize) -> (GfElem, GfElem) {
    let mut qs = t.f31;
    let mut qt = t.f13;
    let mut acc = |i: usize, weight: GfElem, bs: GfElem, cs: GfElem| {
        let (a, b, c) = cfg.abc(i);
        let s = f.sum([bs, f.mul(&a, &t.beta1), f.mul(&b, &t.beta2), f.mul(&c, &t.alpha1)].iter());
        let u = f.sum([cs, f.mul(&a, &t.gamma1), f.mul(&b, &t.gamma2), f.mul(&c, &t.alpha2)].iter());
        qs = f.add(&qs, &f.mul(&s, &weight));
        qt = f.add(&qt, &f.mul(&u, &weight));
    };
    for i in 0..n - 2 {
        let ti = crate::pfaffian::tau(i);
        acc(ti + 1, t.d[i], t.b[ti], t.c[ti]);
    }
    for j in n + 1..m {
        acc(j, t.e[j - n - 1], GfElem::ZERO, GfElem::ZERO);
    }
    (qs, qt)
}

/// Vanishes when `l` is proportional to `D t + E s`.
pub fn ell1(f: &Gf2k, t: &CoefficientTable, cfg: &SectionConfig) -> GfElem {
    let (p1, p2) = gamma2_coeffs(f, t, cfg);
    f.add(&f.mul(&f.mul(&cfg.d, &cfg.d), &p1), &f.mul(&f.mul(&cfg.e, &cfg.e), &p2))
}

/// Vanishes when `l` is proportional to `sqrt(Q_s) s + sqrt(Q_t) t`.
pub fn ell2(f: &Gf2k, t: &CoefficientTable, cfg: &SectionConfig, qs: GfElem, qt: GfElem) -> GfElem {
    let (p1, p2) = gamma2_coeffs(f, t, cfg);
    f.add(&f.mul(&qt, &p1), &f.mul(&qs, &p2))
}

/// The `s^2` and `t^2` coefficients of `Gamma^[2]`.
pub(crate) fn gamma2_coeffs(f: &Gf2k, t: &CoefficientTable, cfg: &SectionConfig) -> (GfElem, GfElem) {
    let p1 = f.sum([f.mul(&cfg.d, &t.beta1), f.mul(&cfg.e, &t.beta2), f.mul(&cfg.f, &t.alpha1)].iter());
    let p2 = f.sum([f.mul(&cfg.d, &t.gamma1), f.mul(&cfg.e, &t.gamma2), f.mul(&cfg.f, &t.alpha2)].iter());
    (p1, p2)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use super::*;
    use crate::singularity::sample::Family;

    #[test]
    fn low_degree_closed_forms() {
        let f = Gf2k::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            let data = DiscriminantData::random(&f, 4, 7, Family::Generic, &mut rng);
            let cfg = SectionConfig::random(&f, 4, 7, &mut rng);
            let sd = solve_section(&data, &cfg, 4).unwrap();
            let t = data.table().unwrap();
            let st = &sd.st;
            let form = |a: GfElem, b: GfElem| {
                MultiPoly::from_terms(
                    &f,
                    st,
                    [(crate::algebra::Monomial::from_exps(&[2, 0]), a), (crate::algebra::Monomial::from_exps(&[0, 2]), b)],
                )
            };
            assert_eq!(sd.u.homogeneous_part(1), MultiPoly::zero(&f, st));
            assert_eq!(sd.u.homogeneous_part(2), form(t.beta1, t.gamma1));
            assert_eq!(sd.v.homogeneous_part(2), form(t.beta2, t.gamma2));
            assert_eq!(sd.w.homogeneous_part(2), form(t.alpha1, t.alpha2));
            assert!(sd.w.homogeneous_part(3).is_zero());
            let q = form(sd.q_s, sd.q_t);
            let s_ = MultiPoly::var(&f, st, 0);
            let t_ = MultiPoly::var(&f, st, 1);
            assert_eq!(sd.u.homogeneous_part(3), &t_ * &q);
            assert_eq!(sd.v.homogeneous_part(3), &s_ * &q);
            assert_eq!((sd.q_s, sd.q_t), q_closed_form(&f, &t, &cfg, 4, 7));
            let g = curve_at_p(&sd, &cfg);
            assert!(g.homogeneous_part(0).is_zero() && g.homogeneous_part(1).is_zero());
        }
    }
}
