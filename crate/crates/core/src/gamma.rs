//! The model scheme Gamma: the image of
//! `gamma(x1, x2, z) = (x1^2, x1 z, x2^2, x2 z, x1 x2 z, z)` in the
//! coordinates `(u1, v1, u2, v2, w, y)`, optionally times extra parameters
//! `t1..tK` that pass through unchanged.

use rand::Rng;
use serde::Serialize;

use crate::algebra::{Field, Gf2k, Jet, Matrix, MultiPoly, Poly, Ring, Vars};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, MonomialOrder, OrderKind};

pub const SOURCE: [&str; 3] = ["x1", "x2", "z"];
/// Target coordinates in elimination priority order.
pub const TARGET: [&str; 6] = ["w", "v2", "v1", "y", "u2", "u1"];

fn params(extra: usize) -> Vec<String> {
    (1..=extra).map(|i| format!("t{i}")).collect()
}

/// `x1, x2, z, w, v2, v1, y, u2, u1, t1..`: the graph ideal lives here and
/// pure lex in this order eliminates the first three.
pub fn graph_vars(extra: usize) -> Vars {
    Vars::new(SOURCE.iter().chain(TARGET.iter()).map(|s| s.to_string()).chain(params(extra)))
}

pub fn target_vars(extra: usize) -> Vars {
    Vars::new(TARGET.iter().map(|s| s.to_string()).chain(params(extra)))
}

pub fn source_vars(extra: usize) -> Vars {
    Vars::new(SOURCE.iter().map(|s| s.to_string()).chain(params(extra)))
}

fn is_param(name: &str) -> bool {
    name.strip_prefix('t')
        .is_some_and(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
}

/// The image of a target coordinate under `gamma^*`.
fn image<R: Ring>(ring: &R, src: &Vars, name: &str) -> Result<MultiPoly<R>> {
    let x1 = MultiPoly::var_named(ring, src, "x1")?;
    let x2 = MultiPoly::var_named(ring, src, "x2")?;
    let z = MultiPoly::var_named(ring, src, "z")?;
    Ok(match name {
        "u1" => x1.pow(2),
        "v1" => &x1 * &z,
        "u2" => x2.pow(2),
        "v2" => &x2 * &z,
        "w" => &(&x1 * &x2) * &z,
        "y" => z,
        _ if is_param(name) => MultiPoly::var_named(ring, src, name)?,
        _ => return Err(Error::UnknownVariable(name.to_string())),
    })
}

/// `gamma^* f`, over `x1, x2, z` followed by whatever parameters `f` uses.
pub fn gamma_pullback<R: Ring>(f: &MultiPoly<R>) -> Result<MultiPoly<R>> {
    let extra: Vec<String> = f.vars().names().iter().filter(|n| is_param(n)).cloned().collect();
    let src = Vars::new(SOURCE.iter().map(|s| s.to_string()).chain(extra));
    let images = f
        .vars()
        .names()
        .iter()
        .map(|n| image(f.ring(), &src, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(f.substitute(&images, None))
}

/// The graph ideal `(u1 - x1^2, v1 - x1 z, ...)` over `field`.
pub fn graph_ideal(field: &Gf2k, extra: usize) -> Result<Vec<Poly>> {
    let vars = graph_vars(extra);
    TARGET
        .iter()
        .map(|t| {
            let lhs = MultiPoly::var_named(field, &vars, t)?;
            let rhs = image(field, &Vars::new(SOURCE), t)?.embed(&vars)?;
            Ok(lhs.sub(&rhs))
        })
        .collect()
}

pub fn elimination_order(extra: usize) -> MonomialOrder {
    MonomialOrder::natural(OrderKind::Lex, 9 + extra)
}

/// Reduced lex Groebner basis of the graph ideal, computed over GF(2).
pub fn graph_basis(extra: usize) -> Result<Vec<MultiPoly<Gf2k>>> {
    buchberger(&graph_ideal(&Gf2k::prime(), extra)?, &elimination_order(extra))
}

/// Generators of the kernel of `gamma^*` over GF(2): the basis elements
/// free of `x1, x2, z`, written over `w, v2, v1, y, u2, u1, t..`.
pub fn gamma_ideal(extra: usize) -> Result<(Vars, Vec<MultiPoly<Gf2k>>)> {
    let target = target_vars(extra);
    let gens = graph_basis(extra)?
        .into_iter()
        .filter(|g| g.support_vars().iter().all(|&i| i >= 3))
        .map(|g| g.embed(&target))
        .collect::<Result<Vec<_>>>()?;
    Ok((target, gens))
}

/// Move a GF(2) polynomial into a larger field of characteristic 2.
pub fn lift_to(field: &Gf2k, p: &MultiPoly<Gf2k>) -> MultiPoly<Gf2k> {
    p.map_coeffs(field, |c| field.elem(c.bits()).expect("0 or 1"))
}

/// Jacobian of `gens` with respect to the six target coordinates at `pt`
/// (values of `w, v2, v1, y, u2, u1, t..` in that order).
pub fn jacobian_rank(gens: &[Poly], pt: &[<Gf2k as Ring>::Elem]) -> usize {
    let Some(first) = gens.first() else { return 0 };
    let field = first.ring().clone();
    let m = Matrix::from_fn(&field, gens.len(), TARGET.len(), |i, j| gens[i].derivative(j).eval(pt));
    m.rank()
}

/// The point `gamma(x1, x2, z)` in target coordinates.
pub fn gamma_point<F: Field>(f: &F, x1: &F::Elem, x2: &F::Elem, z: &F::Elem) -> Vec<F::Elem> {
    let w = f.mul(&f.mul(x1, x2), z);
    vec![
        w,
        f.mul(x2, z),
        f.mul(x1, z),
        z.clone(),
        f.mul(x2, x2),
        f.mul(x1, x1),
    ]
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SingularLocusReport {
    pub plane_points: usize,
    pub plane_max_rank: usize,
    pub off_plane_points: usize,
    pub off_plane_min_rank: usize,
    pub off_plane_max_rank: usize,
    pub holds: bool,
}

/// Jacobian sampling: rank at most 2 at random points of the plane
/// `v1 = v2 = w = y = 0`, rank 3 at random points `gamma(x1, x2, z)` with
/// `z != 0`.
pub fn singular_locus_check<G: Rng + ?Sized>(
    gens: &[Poly],
    samples: usize,
    rng: &mut G,
) -> SingularLocusReport {
    let field = gens[0].ring().clone();
    let zero = field.zero();
    let extra = gens[0].nvars() - TARGET.len();
    let mut plane_max = 0;
    for _ in 0..samples {
        let mut pt = vec![zero; TARGET.len()];
        pt[4] = field.random(rng);
        pt[5] = field.random(rng);
        pt.extend((0..extra).map(|_| field.random(rng)));
        plane_max = plane_max.max(jacobian_rank(gens, &pt));
    }
    let (mut off_min, mut off_max) = (usize::MAX, 0);
    for _ in 0..samples {
        let z = field.random_nonzero(rng);
        let mut pt = gamma_point(&field, &field.random(rng), &field.random(rng), &z);
        pt.extend((0..extra).map(|_| field.random(rng)));
        let r = jacobian_rank(gens, &pt);
        off_min = off_min.min(r);
        off_max = off_max.max(r);
    }
    SingularLocusReport {
        plane_points: samples,
        plane_max_rank: plane_max,
        off_plane_points: samples,
        off_plane_min_rank: off_min,
        off_plane_max_rank: off_max,
        holds: samples > 0 && plane_max <= 2 && off_min == 3 && off_max == 3,
    }
}

/// Every jet `f` over the source coordinates has `df/dx1` and `df/dx2`
/// divisible by `z` as far as it is known. `x1`, `x2`, `z` are variable
/// indices.
pub fn factors_through_gamma<R: Ring>(jets: &[Jet<R>], x1: usize, x2: usize, z: usize) -> bool {
    jets.iter().all(|f| {
        [x1, x2].iter().all(|&x| {
            f.derivative(x)
                .poly()
                .terms()
                .all(|(m, _)| m.get(z) > 0)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::parse_system;

    #[test]
    fn pullbacks_cancel() {
        let f = Gf2k::default();
        let (_, ps) = parse_system("vars: u1,v1,u2,v2,w,y\nv1*v2 + w*y\nw^2 + u1*u2*y^2\nu1*y^2 + v1^2\nv1\n", &f).unwrap();
        assert!(gamma_pullback(&ps[0]).unwrap().is_zero());
        assert!(gamma_pullback(&ps[1]).unwrap().is_zero());
        assert!(gamma_pullback(&ps[2]).unwrap().is_zero());
        assert!(!gamma_pullback(&ps[3]).unwrap().is_zero());
        let (_, bad) = parse_system("vars: q\nq\n", &f).unwrap();
        assert!(gamma_pullback(&bad[0]).is_err());
    }

    #[test]
    fn subring_criterion() {
        let f = Gf2k::default();
        let v = source_vars(0);
        let x1 = MultiPoly::var(&f, &v, 0);
        let z = MultiPoly::var(&f, &v, 2);
        let ok = [Jet::new(x1.pow(2), 4), Jet::new(&z * &x1, 4)];
        assert!(factors_through_gamma(&ok, 0, 1, 2));
        assert!(!factors_through_gamma(&[Jet::new(x1, 4)], 0, 1, 2));
    }

    #[test]
    fn elimination_yields_kernel() {
        let (vars, gens) = gamma_ideal(0).unwrap();
        assert_eq!(vars, target_vars(0));
        for g in &gens {
            assert!(gamma_pullback(g).unwrap().is_zero(), "{g}");
        }
        assert_eq!(gens.len(), 6, "{gens:?}");
    }
}
