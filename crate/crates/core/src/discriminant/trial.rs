//! One randomized pass through the whole local picture at a point of `R`.

use rand::Rng;
use serde::Serialize;

use super::curve::{branch_residual, is_degenerate, is_ordinary_cusp, normalize_branch, subring_t_check};
use super::factor::gamma_factorization;
use super::section::{curve_at_p, ell1, ell2, q_closed_form, solve_section, SectionConfig, SectionData};
use super::{build_phi, fiber_over_origin, local_equations, rsm_test, DiscriminantData};
use crate::algebra::{Gf2k, GfElem, Jet, Monomial, MultiPoly};
use crate::error::{Error, Result};
use crate::groebner::{is_square_fat_point, local_quotient_dim, QuotientDim};
use crate::singularity::{classify, CoefficientTable};

pub const MAX_RESAMPLES: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialOptions {
    /// Order of the section expansions.
    pub order: u32,
    /// Order of the coordinate change in the factorization check.
    pub factor_order: u32,
    /// Degree bound for the fiber colength computation.
    pub fiber_degree: u32,
}

impl Default for TrialOptions {
    fn default() -> Self {
        TrialOptions {
            order: 6,
            factor_order: 4,
            fiber_degree: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub index: usize,
    pub hessian_rank: usize,
    #[serde(rename = "typeA")]
    pub type_a: bool,
    #[serde(rename = "typeC")]
    pub type_c: bool,
    #[serde(rename = "typeR")]
    pub type_r: bool,
    pub rsm: bool,
    pub degenerate: Option<bool>,
    pub multiplicity_two: Option<bool>,
    pub cusp: Option<bool>,
    #[serde(rename = "subringT")]
    pub subring_t: Option<bool>,
    pub branch_residual_zero: Option<bool>,
    #[serde(rename = "gammaFactor")]
    pub gamma_factor: Option<bool>,
    pub fiber_c: QuotientDim,
    pub fiber_r: QuotientDim,
    pub fiber_c_is_s2_t2: bool,
    pub fiber_r_is_s2_t2: bool,
    pub closed_forms: Option<bool>,
    pub resamples: usize,
    pub u2: Option<[GfElem; 2]>,
    pub v2: Option<[GfElem; 2]>,
    pub w2: Option<[GfElem; 2]>,
    pub q: Option<[GfElem; 2]>,
    pub violations: Vec<String>,
}

fn sq(p: &MultiPoly<Gf2k>) -> [GfElem; 2] {
    [p.coeff_of(&[2, 0]), p.coeff_of(&[0, 2])]
}

/// The degree-2 and degree-3 identities of the section expansions.
pub fn closed_forms_hold(f: &Gf2k, sd: &SectionData, t: &CoefficientTable, cfg: &SectionConfig, n: usize, m: usize) -> bool {
    let st = &sd.st;
    let form = |a: GfElem, b: GfElem| {
        MultiPoly::from_terms(f, st, [(Monomial::from_exps(&[2, 0]), a), (Monomial::from_exps(&[0, 2]), b)])
    };
    let q = form(sd.q_s, sd.q_t);
    let s = MultiPoly::var(f, st, 0);
    let tt = MultiPoly::var(f, st, 1);
    [&sd.u, &sd.v, &sd.w].iter().all(|j| j.homogeneous_part(1).is_zero())
        && sd.u.homogeneous_part(2) == form(t.beta1, t.gamma1)
        && sd.v.homogeneous_part(2) == form(t.beta2, t.gamma2)
        && sd.w.homogeneous_part(2) == form(t.alpha1, t.alpha2)
        && sd.w.homogeneous_part(3).is_zero()
        && sd.u.homogeneous_part(3) == &tt * &q
        && sd.v.homogeneous_part(3) == &s * &q
        && (sd.q_s, sd.q_t) == q_closed_form(f, t, cfg, n, m)
}

/// Colength of the fiber ideal and whether it is `(s^2, t^2)` up to
/// coordinates.
fn fiber_length(eqs: &[Jet<Gf2k>], d: u32) -> Result<(QuotientDim, bool)> {
    let lifted: Vec<Jet<Gf2k>> = eqs.iter().map(|e| Jet::new(e.poly().clone(), d)).collect();
    Ok((local_quotient_dim(&lifted, d)?, is_square_fat_point(&lifted, d)?))
}

pub fn run_trial<G: Rng + ?Sized>(
    index: usize,
    data: &DiscriminantData,
    rng: &mut G,
    opts: &TrialOptions,
) -> Result<TrialRecord> {
    let f = data.field().clone();
    let (n, m) = (data.n(), data.m());
    let mut violations = Vec::new();
    let rep = classify(data.phi0(), data.aux())?;
    let rsm = rsm_test(data)?;
    if !rsm.consistent(n) {
        violations.push("smoothness criterion disagrees with the Jacobian of R".to_string());
    }

    let u = build_phi(data);
    let (ec, er) = local_equations(&u);
    let fc = fiber_over_origin(&u, &ec, data.phi0().vars());
    let fr = fiber_over_origin(&u, &er, data.phi0().vars());
    let (fiber_c, fiber_c_is_s2_t2) = fiber_length(&fc, opts.fiber_degree)?;
    let (fiber_r, fiber_r_is_s2_t2) = fiber_length(&fr, opts.fiber_degree)?;
    if rep.type_c && !fiber_c_is_s2_t2 {
        violations.push(format!("type (C) but the fiber of pi_2 has colength {fiber_c}"));
    }
    if rep.type_r && !fiber_r_is_s2_t2 {
        violations.push(format!("type (R) but the fiber of varpi_2 has colength {fiber_r}"));
    }
    if !rep.type_c && fiber_c.is_at_most(4) {
        violations.push(format!("not type (C) but the fiber of pi_2 has colength {fiber_c}"));
    }
    if !rep.type_r && fiber_r.is_at_most(4) {
        violations.push(format!("not type (R) but the fiber of varpi_2 has colength {fiber_r}"));
    }

    let mut rec = TrialRecord {
        index,
        hessian_rank: rep.hessian_rank,
        type_a: rep.type_a,
        type_c: rep.type_c,
        type_r: rep.type_r,
        rsm: rsm.rsm,
        degenerate: None,
        multiplicity_two: None,
        cusp: None,
        subring_t: None,
        branch_residual_zero: None,
        gamma_factor: None,
        fiber_c,
        fiber_r,
        fiber_c_is_s2_t2,
        fiber_r_is_s2_t2,
        closed_forms: None,
        resamples: 0,
        u2: None,
        v2: None,
        w2: None,
        q: None,
        violations: Vec::new(),
    };

    if rep.hessian_rank + 2 == n {
        let table = rep.table.clone().expect("rank n - 2");
        let mut attempt = 0;
        let (sd, cfg, gamma) = loop {
            if attempt > MAX_RESAMPLES {
                return Err(Error::GenericityExhausted(MAX_RESAMPLES));
            }
            let cfg = SectionConfig::random(&f, n, m, rng);
            let sd = solve_section(data, &cfg, opts.order)?;
            let gamma = curve_at_p(&sd, &cfg);
            let accidental = if rep.type_a {
                let e1 = ell1(&f, &table, &cfg);
                let e2 = ell2(&f, &table, &cfg, sd.q_s, sd.q_t);
                e1.bits() == 0 || (rsm.rsm && rep.type_r && e2.bits() == 0)
            } else {
                false
            };
            if !accidental {
                break (sd, cfg, gamma);
            }
            attempt += 1;
        };
        rec.resamples = attempt;
        let cf = closed_forms_hold(&f, &sd, &table, &cfg, n, m);
        if !cf {
            violations.push("section expansions differ from the closed forms".to_string());
        }
        rec.closed_forms = Some(cf);
        rec.u2 = Some(sq(&sd.u.homogeneous_part(2)));
        rec.v2 = Some(sq(&sd.v.homogeneous_part(2)));
        rec.w2 = Some(sq(&sd.w.homogeneous_part(2)));
        rec.q = Some([sd.q_s, sd.q_t]);

        let low_zero = gamma.homogeneous_part(0).is_zero() && gamma.homogeneous_part(1).is_zero();
        let degenerate = is_degenerate(&gamma);
        let mult2 = !gamma.homogeneous_part(2).is_zero();
        if !low_zero || !degenerate {
            violations.push("Gamma is not a degenerate singularity".to_string());
        }
        if mult2 != rep.type_a {
            violations.push(format!("multiplicity two is {mult2} but type (A) is {}", rep.type_a));
        }
        rec.degenerate = Some(degenerate);
        rec.multiplicity_two = Some(mult2);

        if rsm.rsm {
            let cusp = is_ordinary_cusp(&gamma);
            rec.cusp = Some(cusp);
            if cusp != rep.type_r {
                violations.push(format!("ordinary cusp is {cusp} but type (R) is {}", rep.type_r));
            }
            if cusp {
                let bp = normalize_branch(&gamma, opts.order)?;
                let res = branch_residual(&gamma, &bp).is_zero();
                let combos = [(f.random(rng), f.random(rng)), (f.random(rng), f.random(rng))];
                let ok = subring_t_check(&sd, &bp, &combos);
                if !res {
                    violations.push("branch parametrization leaves a residual".to_string());
                }
                if !ok {
                    violations.push("U, V along the branch leave the subring T".to_string());
                }
                rec.branch_residual_zero = Some(res);
                rec.subring_t = Some(ok);
            }
        }
    }

    if rsm.rsm {
        let fr = gamma_factorization(data, opts.factor_order)?;
        if !fr.holds {
            violations.push("pullbacks fail the factorization criterion".to_string());
        }
        rec.gamma_factor = Some(fr.holds);
    }
    rec.violations = violations;
    Ok(rec)
}

/// Whether `P` is an ordinary cusp of `C_Lambda` for one choice of `L` and
/// `Lambda`.
pub fn cusp_criterion(data: &DiscriminantData, cfg: &SectionConfig, order: u32) -> Result<bool> {
    let sd = solve_section(data, cfg, order)?;
    Ok(is_ordinary_cusp(&curve_at_p(&sd, cfg)))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use super::*;
    use crate::singularity::sample::Family;

    #[test]
    fn families_run_clean() {
        let f = Gf2k::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for (i, fam) in [Family::Generic, Family::NotCButR, Family::NeitherCNorR, Family::NotA].into_iter().enumerate() {
            let data = DiscriminantData::random(&f, 4, 7, fam, &mut rng);
            let rec = run_trial(i, &data, &mut rng, &TrialOptions::default()).unwrap();
            assert!(rec.violations.is_empty(), "{fam:?}: {:?}", rec.violations);
            assert!(rec.rsm);
            assert_eq!(rec.cusp, Some(rec.type_r));
        }
    }
}
