//! Local analysis of the discriminant at a point `P = (p, [f])`.
//!
//! Everything is expressed through local data: the jet `phi0` of the
//! singular member at `p` in admissible coordinates, and the jets
//! `phi_{n+1} .. phi_{m-1}` of the other singular members through `p`.
//! The affine coordinates of the linear system are `y1..ym`.

mod chart;
mod curve;
mod factor;
mod section;
mod trial;

pub use chart::{fermat, fermat_point, hypersurface_chart, random_cubic_through};
pub use curve::{
    branch_residual, in_subring_t, is_degenerate, is_ordinary_cusp, normalize_branch, subring_t_check,
    BranchParam,
};
pub use factor::{check_in_coordinates, gamma_factorization, FactorReport};
pub use section::{curve_at_p, ell1, ell2, q_closed_form, solve_section, SectionConfig, SectionData};
pub use trial::{closed_forms_hold, cusp_criterion, run_trial, TrialOptions, TrialRecord, MAX_RESAMPLES};

use serde::{Deserialize, Serialize};

use crate::algebra::text::{parse_poly, parse_vars_header};
use crate::algebra::{Gf2k, GfElem, Jet, JetRing, Matrix, Monomial, MultiPoly, Poly, Vars};
use crate::error::{Error, Result};
use crate::pfaffian::{alt_rank, pfaffian, AlternatingMatrix};
use crate::singularity::{
    admissible_transform, extract_table, hessian, linear_change, sample, CoefficientTable, SingularJet,
};

/// Re-express `p` over `target`, sending variable `i` to `target[pos[i]]`.
pub(crate) fn place(p: &Poly, target: &Vars, pos: &[usize]) -> Poly {
    let f = p.ring();
    let images: Vec<Poly> = pos.iter().map(|&k| MultiPoly::var(f, target, k)).collect();
    p.substitute(&images, None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscriminantData {
    m: usize,
    phi0: SingularJet,
    aux: Vec<Jet<Gf2k>>,
}

impl DiscriminantData {
    /// `phi0` must already be admissible; `aux` holds `phi_{n+1}..phi_{m-1}`
    /// over the same variables.
    pub fn new(phi0: SingularJet, m: usize, aux: Vec<Jet<Gf2k>>) -> Result<Self> {
        let n = phi0.n();
        if m <= n {
            return Err(Error::Invalid(format!("m = {m} must exceed n = {n}")));
        }
        if aux.len() != m - n - 1 {
            return Err(Error::Dimension(format!(
                "expected {} auxiliary series, got {}",
                m - n - 1,
                aux.len()
            )));
        }
        for g in &aux {
            if g.vars() != phi0.vars() {
                return Err(Error::VariableMismatch {
                    left: phi0.vars().to_string(),
                    right: g.vars().to_string(),
                });
            }
            if g.poly().order().is_some_and(|o| o < 2) {
                return Err(Error::NotSingular);
            }
        }
        let h = hessian(&phi0);
        let r = alt_rank(&h);
        if h != AlternatingMatrix::j_form(phi0.field(), r / 2, n) {
            return Err(Error::Invalid("phi0 is not in admissible coordinates".into()));
        }
        Ok(DiscriminantData { m, phi0, aux })
    }

    /// Move `phi0` to admissible coordinates first, carrying `aux` along.
    pub fn normalized(phi0: SingularJet, m: usize, aux: Vec<Jet<Gf2k>>) -> Result<Self> {
        let (t, adm) = admissible_transform(&phi0);
        let aux = aux
            .iter()
            .map(|g| Jet::new(linear_change(g.poly(), &t), g.order()))
            .collect();
        Self::new(adm, m, aux)
    }

    /// `phi0` of the given family and random `phi_j` of order 4.
    pub fn random<G: rand::Rng + ?Sized>(f: &Gf2k, n: usize, m: usize, family: sample::Family, rng: &mut G) -> Self {
        let phi0 = sample::admissible_jet(f, n, family, rng);
        let vars = phi0.vars().clone();
        let aux = (n + 1..m)
            .map(|_| {
                let mut p = MultiPoly::zero(f, &vars);
                for d in 2..=4 {
                    for mono in Monomial::all_of_degree(n, d) {
                        p.add_term(mono, &f.random(rng));
                    }
                }
                Jet::new(p, 4)
            })
            .collect();
        Self::new(phi0, m, aux).expect("sampled data is admissible")
    }

    pub fn n(&self) -> usize {
        self.phi0.n()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn phi0(&self) -> &SingularJet {
        &self.phi0
    }

    pub fn aux(&self) -> &[Jet<Gf2k>] {
        &self.aux
    }

    pub fn field(&self) -> &Gf2k {
        self.phi0.field()
    }

    pub fn hessian_rank(&self) -> usize {
        alt_rank(&hessian(&self.phi0))
    }

    pub fn table(&self) -> Result<CoefficientTable> {
        extract_table(&self.phi0, &self.aux)
    }

    /// Indices `i` (1-based) of the `y_i` that the plane `L` expresses
    /// through `u = y_{n-1}`, `v = y_n`, `w = y_m`.
    pub fn free_indices(&self) -> Vec<usize> {
        free_indices(self.n(), self.m)
    }
}

pub fn free_indices(n: usize, m: usize) -> Vec<usize> {
    (1..=n.saturating_sub(2)).chain(n + 1..m).collect()
}

/// Input file layout for the `section` command.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DataFile {
    pub n: usize,
    pub m: usize,
    /// Comma-separated variable names; `x1..x{n-2},xi1,xi2` when absent.
    #[serde(default)]
    pub vars: Option<String>,
    pub phi0: String,
    #[serde(default)]
    pub aux: Vec<String>,
    #[serde(default)]
    pub order: Option<u32>,
}

impl DataFile {
    pub fn to_data(&self, f: &Gf2k) -> Result<DiscriminantData> {
        if self.n < 2 || self.n % 2 == 1 {
            return Err(Error::Invalid(format!("n = {} must be even and at least 2", self.n)));
        }
        let vars = match &self.vars {
            Some(v) => parse_vars_header(&format!("vars: {v}"), 1)?,
            None => Vars::new(
                (1..=self.n - 2)
                    .map(|i| format!("x{i}"))
                    .chain(["xi1".to_string(), "xi2".to_string()]),
            ),
        };
        if vars.len() != self.n {
            return Err(Error::Dimension(format!("{} variables for n = {}", vars.len(), self.n)));
        }
        let order = self.order.unwrap_or(4);
        let phi0 = SingularJet::from_poly(parse_poly(&self.phi0, f, &vars)?, order)?;
        let aux = self
            .aux
            .iter()
            .map(|s| Ok(Jet::new(parse_poly(s, f, &vars)?, order)))
            .collect::<Result<Vec<_>>>()?;
        DiscriminantData::normalized(phi0, self.m, aux)
    }
}

/// `Phi = phi0 + y1 x1 + ... + yn xn + y_{n+1} phi_{n+1} + ... + ym` over
/// `x1..xn, y1..ym`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalJet {
    pub n: usize,
    pub m: usize,
    pub phi: Jet<Gf2k>,
}

impl UniversalJet {
    pub fn vars(&self) -> &Vars {
        self.phi.vars()
    }

    pub fn x(&self, i: usize) -> usize {
        i - 1
    }

    pub fn y(&self, i: usize) -> usize {
        self.n + i - 1
    }
}

pub fn universal_vars(n: usize, m: usize) -> Vars {
    Vars::numbered("x", n).concat(&Vars::numbered("y", m))
}

pub fn build_phi(data: &DiscriminantData) -> UniversalJet {
    let (n, m) = (data.n(), data.m());
    let f = data.field();
    let vars = universal_vars(n, m);
    let xs: Vec<usize> = (0..n).collect();
    let y = |i: usize| MultiPoly::var(f, &vars, n + i - 1);
    let x = |i: usize| MultiPoly::var(f, &vars, i - 1);
    let mut p = place(data.phi0.phi().poly(), &vars, &xs);
    let mut order = data.phi0.order();
    for i in 1..=n {
        p.add_assign(&(&y(i) * &x(i)));
    }
    for (k, g) in data.aux.iter().enumerate() {
        p.add_assign(&(&y(n + 1 + k) * &place(g.poly(), &vars, &xs)));
        order = order.min(g.order() + 1);
    }
    p.add_assign(&y(m));
    UniversalJet {
        n,
        m,
        phi: Jet::new(p, order),
    }
}

/// `R`: the Pfaffian of the second `x`-partials of `Phi`.
pub fn universal_r(u: &UniversalJet) -> Jet<Gf2k> {
    let order = u.phi.order().saturating_sub(2);
    let jr = JetRing::new(u.phi.ring().clone(), u.vars().clone(), order);
    let firsts: Vec<Jet<Gf2k>> = (0..u.n).map(|i| u.phi.derivative(i)).collect();
    let h = AlternatingMatrix::from_fn(&jr, u.n, |a, b| firsts[a].derivative(b).truncate(order));
    pfaffian(&h).expect("n is even")
}

/// `{Phi, D1 Phi, .., Dn Phi}` and the same with `R` appended.
pub fn local_equations(u: &UniversalJet) -> (Vec<Jet<Gf2k>>, Vec<Jet<Gf2k>>) {
    let mut c = vec![u.phi.clone()];
    c.extend((0..u.n).map(|i| u.phi.derivative(i)));
    let mut r = c.clone();
    r.push(universal_r(u));
    (c, r)
}

/// Restrict equations to the fiber `y = 0`, over the variables of `phi0`.
pub fn fiber_over_origin(u: &UniversalJet, eqs: &[Jet<Gf2k>], xvars: &Vars) -> Vec<Jet<Gf2k>> {
    let f = u.phi.ring();
    let images: Vec<Poly> = (0..u.n + u.m)
        .map(|i| {
            if i < u.n {
                MultiPoly::var(f, xvars, i)
            } else {
                MultiPoly::zero(f, xvars)
            }
        })
        .collect();
    eqs.iter()
        .map(|e| Jet::new(e.poly().substitute(&images, None), e.order()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RsmReport {
    pub rsm: bool,
    pub hessian_rank: usize,
    pub d: Vec<GfElem>,
    pub e: Vec<GfElem>,
    /// Rank of the Jacobian of the equations of `R` at `P`.
    pub jacobian_rank: usize,
    /// Dimension of the kernel of that Jacobian in the `x`-directions.
    pub x_kernel_dim: usize,
}

impl RsmReport {
    /// `R` is smooth of dimension `m - 2` exactly when the criterion says
    /// so, and then the vertical tangent directions form a plane.
    pub fn consistent(&self, n: usize) -> bool {
        let smooth = self.jacobian_rank == n + 2;
        smooth == self.rsm && (!self.rsm || self.x_kernel_dim == 2)
    }
}

/// The smoothness criterion for `R` at `P`: Hessian rank `n - 2` and one of
/// `d_1..d_{n-2}, e_{n+1}..e_{m-1}` nonzero.
pub fn rsm_test(data: &DiscriminantData) -> Result<RsmReport> {
    let n = data.n();
    let f = data.field();
    let rank = data.hessian_rank();
    let (d, e) = if rank + 2 == n {
        let t = data.table()?;
        (t.d, t.e)
    } else {
        (Vec::new(), Vec::new())
    };
    let rsm = rank + 2 == n && d.iter().chain(&e).any(|c| c.bits() != 0);
    let u = build_phi(data);
    let (_, eqs) = local_equations(&u);
    let nv = u.vars().len();
    let jac = Matrix::from_fn(f, eqs.len(), nv, |r, c| eqs[r].poly().coeff(&Monomial::var(nv, c)));
    let jx = Matrix::from_fn(f, eqs.len(), n, |r, c| *jac.get(r, c));
    Ok(RsmReport {
        rsm,
        hessian_rank: rank,
        d,
        e,
        jacobian_rank: jac.rank(),
        x_kernel_dim: n - jx.rank(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::parse_system;
    use crate::singularity::scheme_ideals;

    fn jet(src: &str) -> SingularJet {
        let f = Gf2k::default();
        let (_, ps) = parse_system(src, &f).unwrap();
        SingularJet::from_poly(ps[0].clone(), 4).unwrap()
    }

    #[test]
    fn phi_small_case() {
        let data = DiscriminantData::new(jet("vars: x1,x2\nx1*x2\n"), 3, vec![]).unwrap();
        let u = build_phi(&data);
        assert_eq!(u.phi.poly().to_string(), "x1*x2 + x1*y1 + x2*y2 + y3");
        assert_eq!(u.phi.homogeneous_part(1).to_string(), "y3");
    }

    #[test]
    fn linear_parts() {
        use rand::SeedableRng;
        let f = Gf2k::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let data = DiscriminantData::random(&f, 4, 7, sample::Family::Generic, &mut rng);
        let u = build_phi(&data);
        let (c, r) = local_equations(&u);
        let v = u.vars().clone();
        let var = |i| MultiPoly::var(&f, &v, i);
        assert_eq!(c[0].homogeneous_part(1), var(u.y(7)));
        assert_eq!(c[1].homogeneous_part(1), &var(u.x(2)) + &var(u.y(1)));
        assert_eq!(c[2].homogeneous_part(1), &var(u.x(1)) + &var(u.y(2)));
        assert_eq!(c[3].homogeneous_part(1), var(u.y(3)));
        let t = data.table().unwrap();
        let mut want = MultiPoly::zero(&f, &v);
        for i in 0..2 {
            want.add_assign(&var(u.x(i + 1)).scale(&t.d[i]));
        }
        for j in 0..2 {
            want.add_assign(&var(u.y(5 + j)).scale(&t.e[j]));
        }
        assert_eq!(r[5].homogeneous_part(1), want);
        let fib = fiber_over_origin(&u, &r, data.phi0().vars());
        let (_, sr) = scheme_ideals(data.phi0());
        for (a, b) in fib.iter().zip(&sr) {
            let k = a.order().min(b.order());
            assert_eq!(a.truncate(k), b.truncate(k));
        }
    }

    #[test]
    fn rsm_examples() {
        let x = |s: &str| DiscriminantData::new(jet(s), 5, vec![]).unwrap();
        let r = rsm_test(&x("vars: x1,x2,xi1,xi2\nx1*x2 + x1*xi1*xi2 + xi1^3 + xi2^3\n")).unwrap();
        assert!(r.rsm && r.consistent(4));
        let r = rsm_test(&x("vars: x1,x2,xi1,xi2\nx1*x2 + xi1^3 + xi2^3\n")).unwrap();
        assert!(!r.rsm && r.consistent(4));
        let r = rsm_test(&x("vars: x1,x2,xi1,xi2\nxi1^3 + x1^2*x2\n")).unwrap();
        assert!(!r.rsm && r.consistent(4));
        assert_eq!(r.hessian_rank, 0);
        let small = DiscriminantData::new(jet("vars: s,t\ns^3 + t^3\n"), 3, vec![]).unwrap();
        let r = rsm_test(&small).unwrap();
        assert!(!r.rsm && r.d.is_empty() && r.e.is_empty());
    }

    #[test]
    fn data_file_round_trip() {
        let f = Gf2k::default();
        let df: DataFile = serde_json::from_str(
            r#"{"n":4,"m":5,"vars":"a,b,c,d","phi0":"a*c + b*d + b^3"}"#,
        )
        .unwrap();
        let data = df.to_data(&f).unwrap();
        assert_eq!(data.hessian_rank(), 4);
        let bad: DataFile = serde_json::from_str(r#"{"n":4,"m":5,"phi0":"a*c"}"#).unwrap();
        assert!(bad.to_data(&f).is_err());
    }
}
