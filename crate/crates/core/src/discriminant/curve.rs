//! Singular points of plane curve germs `f(s, t) = 0` in characteristic 2.

use serde::Serialize;

use super::SectionData;
use crate::algebra::{jet_solve, Field, Gf2k, GfElem, Jet, Monomial, MultiPoly, Poly, SquareRoot, Vars};
use crate::error::{Error, Result};

fn check_plane(f: &Jet<Gf2k>) {
    assert_eq!(f.vars().len(), 2, "plane curve germs have two variables");
}

/// `f^[0] = f^[1] = 0` and `f^[2]` is the square of a linear form, which in
/// characteristic 2 means it has no `st` term.
pub fn is_degenerate(f: &Jet<Gf2k>) -> bool {
    check_plane(f);
    f.order() >= 2
        && f.homogeneous_part(0).is_zero()
        && f.homogeneous_part(1).is_zero()
        && f.homogeneous_part(2).coeff_of(&[1, 1]).bits() == 0
}

/// `(a, b)` with `f^[2] = (a s + b t)^2`.
fn root_form(f: &Jet<Gf2k>) -> (GfElem, GfElem) {
    let q = f.homogeneous_part(2);
    let k = f.ring();
    (
        k.sqrt(&q.coeff_of(&[2, 0])).expect("every element is a square"),
        k.sqrt(&q.coeff_of(&[0, 2])).expect("every element is a square"),
    )
}

/// Degenerate, `l = sqrt(f^[2]) != 0`, and `l` does not divide `f^[3]`.
pub fn is_ordinary_cusp(f: &Jet<Gf2k>) -> bool {
    if !is_degenerate(f) || f.order() < 3 {
        return false;
    }
    let (a, b) = root_form(f);
    if a.bits() == 0 && b.bits() == 0 {
        return false;
    }
    // a s + b t divides a binary form g iff g(b, a) = 0
    f.homogeneous_part(3).eval(&[b, a]).bits() != 0
}

/// `s(z), t(z)` parametrizing a cusp branch.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchParam {
    pub s: Jet<Gf2k>,
    pub t: Jet<Gf2k>,
    pub a: GfElem,
    pub b: GfElem,
    pub c: GfElem,
    pub d: GfElem,
}

#[derive(Serialize)]
struct Coeffs {
    a: GfElem,
    b: GfElem,
    c: GfElem,
    d: GfElem,
}

impl Serialize for BranchParam {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Coeffs {
            a: self.a,
            b: self.b,
            c: self.c,
            d: self.d,
        }
        .serialize(s)
    }
}

/// Solve `f(s(z), t(z)) = 0` for an ordinary cusp.
///
/// With `sigma = l` and `tau` a complementary coordinate, `f` becomes
/// `sigma^2 + kappa tau^3 + ...` with `kappa != 0`. Putting `sigma = z tau`
/// and dividing by `tau^2` leaves `z^2 + kappa tau + ...`, which determines
/// `tau(z) = z^2 / kappa + ...` implicitly; then `sigma = z tau(z)`.
pub fn normalize_branch(f: &Jet<Gf2k>, order: u32) -> Result<BranchParam> {
    if !is_ordinary_cusp(f) {
        return Err(Error::AnsatzUnsolvable("not an ordinary cusp".into()));
    }
    let k = f.ring().clone();
    let (a, b) = root_form(f);
    let st = f.vars().clone();
    // (s, t) in terms of (sigma, tau)
    let sigma = MultiPoly::var(&k, &st, 0);
    let tau = MultiPoly::var(&k, &st, 1);
    let (s_of, t_of) = if a.bits() != 0 {
        let ia = k.inv(&a).expect("nonzero");
        ((&sigma + &tau.scale(&b)).scale(&ia), tau.clone())
    } else {
        (tau.clone(), sigma.scale(&k.inv(&b).expect("nonzero")))
    };
    let g = f.poly().substitute(&[s_of.clone(), t_of.clone()], None);

    let zt = Vars::new(["z", "tau"]);
    let mut h = MultiPoly::zero(&k, &zt);
    for (m, c) in g.terms() {
        let (i, j) = (m.get(0), m.get(1));
        if i + j < 2 {
            return Err(Error::AnsatzUnsolvable("curve is not singular".into()));
        }
        h.add_term(Monomial::from_exps(&[i, i + j - 2]), c);
    }
    let (zv, mut sol) = jet_solve(&[Jet::new(h, order)], &[1], order)
        .map_err(|_| Error::AnsatzUnsolvable("no tau^3 term after normalization".into()))?;
    let tau_z = sol.pop().expect("one unknown").into_poly();
    let z = MultiPoly::var(&k, &zv, 0);
    let sigma_z = (&z * &tau_z).truncate(order);
    let s = Jet::new(s_of.substitute(&[sigma_z.clone(), tau_z.clone()], Some(order)), order);
    let t = Jet::new(t_of.substitute(&[sigma_z, tau_z], Some(order)), order);
    let c2 = |p: &Jet<Gf2k>, e: u16| p.poly().coeff_of(&[e]);
    Ok(BranchParam {
        a: c2(&s, 2),
        b: c2(&s, 3),
        c: c2(&t, 2),
        d: c2(&t, 3),
        s,
        t,
    })
}

/// `f(s(z), t(z))` to the order of the branch.
pub fn branch_residual(f: &Jet<Gf2k>, bp: &BranchParam) -> Jet<Gf2k> {
    let order = bp.s.order();
    Jet::new(
        f.poly().substitute(&[bp.s.poly().clone(), bp.t.poly().clone()], Some(order)),
        order,
    )
}

/// No `z^1, z^2, z^3, z^5` terms.
pub fn in_subring_t(g: &Poly) -> bool {
    [1u16, 2, 3, 5].iter().all(|&e| g.coeff_of(&[e]).bits() == 0)
}

/// `U` and `V` along the branch, and the given combinations `p U + q V`,
/// all lie in the subring `T`.
pub fn subring_t_check(sd: &SectionData, bp: &BranchParam, combos: &[(GfElem, GfElem)]) -> bool {
    let images = [bp.s.poly().clone(), bp.t.poly().clone()];
    let order = Some(bp.s.order().max(5));
    let u = sd.u.poly().substitute(&images, order);
    let v = sd.v.poly().substitute(&images, order);
    in_subring_t(&u)
        && in_subring_t(&v)
        && combos
            .iter()
            .all(|(p, q)| in_subring_t(&(&u.scale(p) + &v.scale(q))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::parse_system;

    fn plane(src: &str, order: u32) -> Jet<Gf2k> {
        let f = Gf2k::default();
        let (_, ps) = parse_system(&format!("vars: s,t\n{src}\n"), &f).unwrap();
        Jet::new(ps[0].clone(), order)
    }

    #[test]
    fn degeneracy_and_cusps() {
        assert!(is_degenerate(&plane("s^2 + t^3", 4)));
        assert!(!is_degenerate(&plane("s*t", 4)));
        assert!(is_ordinary_cusp(&plane("s^2 + t^3", 4)));
        assert!(!is_ordinary_cusp(&plane("s^2 + s^3", 4)));
        assert!(!is_ordinary_cusp(&plane("s^2 + s^2*t", 4)));
        assert!(is_ordinary_cusp(&plane("s^2 + t^2 + s^3", 4)));
        assert!(!is_ordinary_cusp(&plane("s^2 + t^2 + s^3 + t^3", 4)));
        assert!(!is_ordinary_cusp(&plane("t^3", 4)));
    }

    #[test]
    fn classical_parametrizations() {
        let bp = normalize_branch(&plane("s^2 + t^3", 6), 6).unwrap();
        assert_eq!(bp.t.poly().to_string(), "z^2");
        assert_eq!(bp.s.poly().to_string(), "z^3");
        let bp = normalize_branch(&plane("t^2 + s^3", 6), 6).unwrap();
        assert_eq!(bp.s.poly().to_string(), "z^2");
        assert_eq!(bp.t.poly().to_string(), "z^3");
        let g = plane("s^2 + t^2 + s^3 + s*t^3 + t^5", 6);
        let bp = normalize_branch(&g, 6).unwrap();
        assert!(branch_residual(&g, &bp).is_zero());
        assert!(normalize_branch(&plane("s^2 + s^3", 6), 6).is_err());
    }

    #[test]
    fn subring_membership() {
        let f = Gf2k::default();
        let (_, ps) = parse_system("vars: z\nz^3\nz^4 + z^6 + z^7\nz^4 + z^5\n", &f).unwrap();
        assert!(!in_subring_t(&ps[0]));
        assert!(in_subring_t(&ps[1]));
        assert!(!in_subring_t(&ps[2]));
    }
}
