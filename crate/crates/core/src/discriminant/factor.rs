//! The factorization of `pi_2` through `Gamma` near a smooth point of `R`.
//!
//! Near `P`, `C` is the graph of `(x, t) -> y` with `t = (y_{n+1}..y_{m-1})`:
//! `y_i = dPsi/dx_i` for `i <= n`, `y_j = t_j`, `y_m = Psi + sum x_i dPsi/dx_i`
//! where `Psi = phi0 + sum t_j phi_j`. `R` is the Pfaffian of the
//! `x`-Hessian of `Psi`. In coordinates `(xi1, xi2, R, g_4, ..)`, where the
//! `g_k` are pullbacks of coordinates of `P^m`, the vertical directions along
//! `R = 0` are `d/dxi1, d/dxi2`, and the factorization criterion asks for
//! every pullback `f` to have `df/dxi1, df/dxi2` divisible by `R`.

use serde::Serialize;

use super::{place, DiscriminantData};
use crate::algebra::{jet_solve, Gf2k, Jet, JetRing, Matrix, Monomial, MultiPoly, Poly, Vars};
use crate::error::{Error, Result};
use crate::gamma::factors_through_gamma;
use crate::pfaffian::{pfaffian, AlternatingMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorReport {
    pub holds: bool,
    /// Names of the pullbacks used as the remaining coordinates.
    pub coordinates: Vec<String>,
    pub order: u32,
}

struct Chart {
    vars: Vars,
    /// `y_1..y_m` as functions on `C`.
    pullbacks: Vec<Poly>,
    r: Poly,
}

fn chart(data: &DiscriminantData, order: u32) -> Chart {
    let (n, m) = (data.n(), data.m());
    let k = data.field();
    let names: Vec<String> = (1..=n)
        .map(|i| format!("x{i}"))
        .chain((n + 1..m).map(|j| format!("y{j}")))
        .collect();
    let vars = Vars::new(names);
    let xs: Vec<usize> = (0..n).collect();
    let mut psi = place(data.phi0().phi().poly(), &vars, &xs);
    for (i, g) in data.aux().iter().enumerate() {
        psi.add_assign(&(&MultiPoly::var(k, &vars, n + i) * &place(g.poly(), &vars, &xs)));
    }
    let grads: Vec<Poly> = (0..n).map(|i| psi.derivative(i)).collect();
    let mut ym = psi.clone();
    for (i, g) in grads.iter().enumerate() {
        ym.add_assign(&(&MultiPoly::var(k, &vars, i) * g));
    }
    let mut pullbacks = grads.clone();
    pullbacks.extend((n..m - 1).map(|i| MultiPoly::var(k, &vars, i)));
    pullbacks.push(ym);
    let jr = JetRing::new(k.clone(), vars.clone(), order + 1);
    let h = AlternatingMatrix::from_fn(&jr, n, |a, b| Jet::new(grads[a].derivative(b), order + 1));
    let r = pfaffian(&h).expect("n is even").into_poly();
    Chart { vars, pullbacks, r }
}

fn linear_row(p: &Poly, nv: usize) -> Vec<crate::algebra::GfElem> {
    (0..nv).map(|c| p.coeff(&Monomial::var(nv, c))).collect()
}

/// Express `pullbacks` in the coordinates `coords` (functions of the chart
/// variables, independent linear parts) and test the criterion with
/// `coords[0], coords[1]` as the vertical coordinates and `coords[2]` as
/// the equation of the divisor.
pub fn check_in_coordinates(pullbacks: &[Poly], coords: &[Poly], order: u32) -> Result<bool> {
    let first = coords.first().ok_or_else(|| Error::Dimension("no coordinates".into()))?;
    let k = first.ring().clone();
    let old = first.vars().clone();
    let nv = old.len();
    if coords.len() != nv {
        return Err(Error::Dimension(format!("{} coordinates for {nv} variables", coords.len())));
    }
    let new = Vars::numbered("w", nv);
    let both = old.concat(&new);
    let all: Vec<usize> = (0..nv).collect();
    let eqs: Vec<Jet<Gf2k>> = coords
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut e = place(c, &both, &all);
            e.add_assign(&MultiPoly::var(&k, &both, nv + i));
            Jet::new(e, order)
        })
        .collect();
    let (_, inv) = jet_solve(&eqs, &all, order)?;
    let images: Vec<Poly> = inv.into_iter().map(Jet::into_poly).collect();
    let jets: Vec<Jet<Gf2k>> = pullbacks
        .iter()
        .map(|p| Jet::new(p.substitute(&images, Some(order)), order))
        .collect();
    Ok(factors_through_gamma(&jets, 0, 1, 2))
}

/// Run the criterion at a smooth point of `R`.
pub fn gamma_factorization(data: &DiscriminantData, order: u32) -> Result<FactorReport> {
    let (n, m) = (data.n(), data.m());
    if m < 4 {
        return Err(Error::Invalid("need m >= 4".into()));
    }
    let ch = chart(data, order);
    let nv = ch.vars.len();
    let k = data.field();
    let mut coords = vec![
        MultiPoly::var(k, &ch.vars, n - 2),
        MultiPoly::var(k, &ch.vars, n - 1),
        ch.r.truncate(order),
    ];
    let mut rows: Vec<Vec<_>> = coords.iter().map(|c| linear_row(c, nv)).collect();
    if Matrix::from_rows(k, rows.clone())?.rank() != 3 {
        return Err(Error::Invalid("not a smooth point of R".into()));
    }
    let mut chosen = Vec::new();
    let candidates = (0..n - 2).chain(n..m - 1);
    for i in candidates {
        if coords.len() == nv {
            break;
        }
        let row = linear_row(&ch.pullbacks[i], nv);
        rows.push(row);
        if Matrix::from_rows(k, rows.clone())?.rank() == rows.len() {
            coords.push(ch.pullbacks[i].clone());
            chosen.push(format!("y{}", i + 1));
        } else {
            rows.pop();
        }
    }
    if coords.len() != nv {
        return Err(Error::Invalid("pullbacks do not complete a coordinate system".into()));
    }
    let holds = check_in_coordinates(&ch.pullbacks, &coords, order)?;
    Ok(FactorReport {
        holds,
        coordinates: chosen,
        order,
    })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use super::*;
    use crate::singularity::sample::Family;

    #[test]
    fn holds_at_smooth_points_only_for_r() {
        let f = Gf2k::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let data = DiscriminantData::random(&f, 4, 7, Family::Generic, &mut rng);
        let rep = gamma_factorization(&data, 4).unwrap();
        assert!(rep.holds, "{rep:?}");
        assert_eq!(rep.coordinates.len(), 3);

        // the same coordinates with a wrong divisor fail
        let ch = chart(&data, 4);
        let v = &ch.vars;
        let mut coords = vec![MultiPoly::var(&f, v, 2), MultiPoly::var(&f, v, 3), MultiPoly::var(&f, v, 0)];
        coords.extend((1..2).map(|i| MultiPoly::var(&f, v, i)));
        coords.extend((4..6).map(|i| MultiPoly::var(&f, v, i)));
        assert!(!check_in_coordinates(&ch.pullbacks, &coords, 4).unwrap());
    }
}
