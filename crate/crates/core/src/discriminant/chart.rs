//! Tangent hyperplane sections of projective hypersurfaces as local jets.

use rand::Rng;

use crate::algebra::{jet_solve, Field, Gf2k, GfElem, Jet, Monomial, MultiPoly, Poly, Ring, Vars};
use crate::error::{Error, Result};
use crate::singularity::SingularJet;

/// The section of `{F = 0}` by its tangent hyperplane at `point`, as a jet
/// of order `order` in local coordinates of the hypersurface.
pub fn hypersurface_chart(big_f: &Poly, point: &[GfElem], order: u32) -> Result<SingularJet> {
    let k = big_f.ring().clone();
    let nv = big_f.nvars();
    if point.len() != nv {
        return Err(Error::Dimension(format!("point has {} coordinates for {nv} variables", point.len())));
    }
    let Some(a) = point.iter().position(|c| c.bits() != 0) else {
        return Err(Error::Invalid("the zero vector is not a projective point".into()));
    };
    let ia = k.inv(&point[a]).expect("nonzero");
    let p: Vec<GfElem> = point.iter().map(|c| k.mul(c, &ia)).collect();
    if big_f.eval(&p).bits() != 0 {
        return Err(Error::PointNotOnHypersurface);
    }
    let grad: Vec<GfElem> = (0..nv).map(|i| big_f.derivative(i).eval(&p)).collect();
    if grad.iter().all(|g| g.bits() == 0) {
        return Err(Error::SingularPoint);
    }
    // affine coordinates x'_i = x_i - p_i for i != a, with x_a = 1
    let names: Vec<String> = (0..nv).filter(|&i| i != a).map(|i| big_f.vars().name(i).to_string()).collect();
    let aff = Vars::new(names);
    let mut images = Vec::with_capacity(nv);
    let mut col = 0;
    for (i, pi) in p.iter().enumerate() {
        if i == a {
            images.push(MultiPoly::one(&k, &aff));
        } else {
            images.push(&MultiPoly::var(&k, &aff, col) + &MultiPoly::constant(&k, &aff, *pi));
            col += 1;
        }
    }
    let f = big_f.substitute(&images, None);
    let b = (0..aff.len())
        .find(|&j| f.derivative(j).constant_term().bits() != 0)
        .expect("some affine partial is nonzero by the Euler relation");
    let (local, mut sol) = jet_solve(&[Jet::new(f, order)], &[b], order)?;
    let xb = sol.pop().expect("one unknown").into_poly();
    let mut tangent = MultiPoly::zero(&k, &aff);
    let mut col = 0;
    for (i, g) in grad.iter().enumerate() {
        if i != a {
            tangent.add_term(Monomial::var(aff.len(), col), g);
            col += 1;
        }
    }
    let restrict: Vec<Poly> = (0..aff.len())
        .map(|j| match j.cmp(&b) {
            std::cmp::Ordering::Equal => xb.clone(),
            std::cmp::Ordering::Less => MultiPoly::var(&k, &local, j),
            std::cmp::Ordering::Greater => MultiPoly::var(&k, &local, j - 1),
        })
        .collect();
    SingularJet::from_poly(tangent.substitute(&restrict, Some(order)), order)
}

/// `x_0^d + .. + x_N^d` with `d = 2^nu + 1`.
pub fn fermat(k: &Gf2k, nvars: usize, nu: u32) -> Poly {
    let d = (1u16 << nu) + 1;
    let vars = Vars::numbered("x", nvars);
    let mut p = MultiPoly::zero(k, &vars);
    for i in 0..nvars {
        let mut e = vec![0; nvars];
        e[i] = d;
        p.add_term(Monomial::from_exps(&e), &k.one());
    }
    p
}

/// A random point of the Fermat cubic, or `None` when the cube root needed
/// for the first coordinate does not exist.
pub fn fermat_point<G: Rng + ?Sized>(k: &Gf2k, nvars: usize, rng: &mut G) -> Option<Vec<GfElem>> {
    let rest: Vec<GfElem> = (1..nvars).map(|_| k.random(rng)).collect();
    let c = k.sum(rest.iter().map(|x| k.pow(x, 3)).collect::<Vec<_>>().iter());
    let x0 = k.cube_root(&c)?;
    let mut p = vec![x0];
    p.extend(rest);
    if p.iter().all(|x| x.bits() == 0) {
        return None;
    }
    Some(p)
}

/// A random cubic form vanishing at `point`.
pub fn random_cubic_through<G: Rng + ?Sized>(k: &Gf2k, point: &[GfElem], rng: &mut G) -> Poly {
    let nv = point.len();
    let vars = Vars::numbered("x", nv);
    let mut p = MultiPoly::zero(k, &vars);
    for m in Monomial::all_of_degree(nv, 3) {
        p.add_term(m, &k.random(rng));
    }
    let a = point.iter().position(|c| c.bits() != 0).expect("nonzero point");
    let fix = k.div(&p.eval(point), &k.pow(&point[a], 3)).expect("nonzero");
    let mut e = vec![0; nv];
    e[a] = 3;
    p.add_term(Monomial::from_exps(&e), &fix);
    p
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use super::*;
    use crate::algebra::text::parse_system;
    use crate::pfaffian::alt_rank;
    use crate::singularity::hessian;

    #[test]
    fn quadric_gives_a_node() {
        let k = Gf2k::default();
        let (_, ps) = parse_system("vars: x0,x1,x2,x3\nx0*x1 + x2*x3\n", &k).unwrap();
        let one = k.one();
        let pt = [one, GfElem::ZERO, one, GfElem::ZERO];
        let j = hypersurface_chart(&ps[0], &pt, 4).unwrap();
        assert_eq!(j.n(), 2);
        assert_eq!(alt_rank(&hessian(&j)), 2);
        assert_eq!(hypersurface_chart(&ps[0], &[one, one, GfElem::ZERO, GfElem::ZERO], 4), Err(Error::PointNotOnHypersurface));
        let (_, cone) = parse_system("vars: x0,x1,x2,x3\nx0*x1^2 + x2^3\n", &k).unwrap();
        assert_eq!(hypersurface_chart(&cone[0], &[one, GfElem::ZERO, GfElem::ZERO, GfElem::ZERO], 4), Err(Error::SingularPoint));
    }

    #[test]
    fn fermat_sections_have_zero_hessian() {
        let k = Gf2k::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let f = fermat(&k, 4, 1);
        let mut done = 0;
        while done < 5 {
            let Some(p) = fermat_point(&k, 4, &mut rng) else { continue };
            let j = hypersurface_chart(&f, &p, 4).unwrap();
            assert_eq!(alt_rank(&hessian(&j)), 0);
            done += 1;
        }
        let p = [k.one(), k.random(&mut rng), k.random(&mut rng), k.random(&mut rng)];
        let g = random_cubic_through(&k, &p, &mut rng);
        assert_eq!(g.eval(&p), GfElem::ZERO);
        assert_eq!(alt_rank(&hessian(&hypersurface_chart(&g, &p, 4).unwrap())), 2);
    }
}
