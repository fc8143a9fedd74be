use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use char2::algebra::text::parse_poly;
use char2::algebra::{jet_solve, Field, Gf2k, GfElem, Jet, Matrix, Monomial, MultiPoly, Ring, SquareRoot, Vars};
use char2::chern::{class_of_c, class_of_r, GradedClass};
use char2::pfaffian::{alt_normal_form, alt_rank, pfaffian, AlternatingMatrix};
use char2::singularity::sample::{admissible_change, admissible_jet, scrambled, Family};
use char2::singularity::classify;

fn field() -> Gf2k {
    Gf2k::default()
}

fn elem() -> impl Strategy<Value = GfElem> {
    any::<u16>().prop_map(|b| field().elem(b as u64).unwrap())
}

fn poly(vars: usize, max_deg: u16) -> impl Strategy<Value = MultiPoly<Gf2k>> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, vars), any::<u16>()), 0..6).prop_map(move |terms| {
        let f = field();
        let v = Vars::numbered("x", vars);
        let mut p = MultiPoly::zero(&f, &v);
        for (e, c) in terms {
            p.add_term(Monomial::from_exps(&e), &f.elem(c as u64).unwrap());
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in elem(), b in elem(), c in elem()) {
        let f = field();
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.add(&a, &a), f.zero());
        prop_assert_eq!(f.neg(&a), a);
        if a != f.zero() {
            prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        }
    }

    #[test]
    fn frobenius_and_roots(a in elem(), b in elem()) {
        let f = field();
        let sq = |x: &GfElem| f.mul(x, x);
        prop_assert_eq!(sq(&f.add(&a, &b)), f.add(&sq(&a), &sq(&b)));
        let r = f.sqrt(&a).unwrap();
        prop_assert_eq!(sq(&r), a);
    }

    #[test]
    fn polynomial_ring_laws(p in poly(3, 3), q in poly(3, 3), r in poly(3, 3)) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!((&p + &q).pow(2), &p.pow(2) + &q.pow(2));
        prop_assert_eq!(p.pow(2).sqrt().unwrap(), p.clone());
        for i in 0..3 {
            prop_assert!(p.derivative(i).derivative(i).is_zero());
        }
    }

    #[test]
    fn text_round_trip(p in poly(3, 4)) {
        let s = p.to_string();
        prop_assert_eq!(parse_poly(&s, &field(), p.vars()).unwrap(), p);
    }

    #[test]
    fn jet_solve_is_stable_in_the_order(coeffs in prop::collection::vec(any::<u16>(), 8), lin in 1u16..) {
        // u*lin + v + sum c_k (monomials of degree 2..3 in u, v, s, t) = 0, and a second equation
        let f = field();
        let vars = Vars::new(["u", "v", "s", "t"]);
        let c = |k: usize| f.elem(coeffs[k] as u64).unwrap();
        let m = |e: &[u16]| Monomial::from_exps(e);
        let e1 = MultiPoly::from_terms(&f, &vars, [
            (m(&[1, 0, 0, 0]), f.elem(lin as u64).unwrap()),
            (m(&[0, 1, 0, 0]), f.one()),
            (m(&[0, 0, 2, 0]), c(0)),
            (m(&[1, 0, 1, 0]), c(1)),
            (m(&[0, 1, 0, 2]), c(2)),
            (m(&[0, 0, 1, 2]), c(3)),
        ]);
        let e2 = MultiPoly::from_terms(&f, &vars, [
            (m(&[0, 1, 0, 0]), f.one()),
            (m(&[0, 0, 1, 1]), c(4)),
            (m(&[2, 0, 0, 0]), c(5)),
            (m(&[0, 0, 3, 0]), c(6)),
            (m(&[1, 1, 1, 0]), c(7)),
        ]);
        let solve = |d: u32| jet_solve(&[Jet::new(e1.clone(), d), Jet::new(e2.clone(), d)], &[0, 1], d).unwrap();
        let (_, low) = solve(4);
        let (params, high) = solve(5);
        for (a, b) in low.iter().zip(&high) {
            prop_assert_eq!(a.poly(), &b.truncate(4).poly().clone());
        }
        // substituting back leaves nothing below degree 6
        let images = [high[0].poly().clone(), high[1].poly().clone(), MultiPoly::var(&f, &params, 0), MultiPoly::var(&f, &params, 1)];
        prop_assert!(e1.substitute(&images, Some(5)).is_zero());
        prop_assert!(e2.substitute(&images, Some(5)).is_zero());
    }

    #[test]
    fn pfaffian_squares_to_determinant(seed in any::<u64>(), half in 1usize..=5) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = AlternatingMatrix::from_fn(&f, 2 * half, |_, _| f.random(&mut rng));
        let pf = pfaffian(&a).unwrap();
        prop_assert_eq!(a.to_matrix().det().unwrap(), f.mul(&pf, &pf));
    }

    #[test]
    fn normal_form_is_exact(seed in any::<u64>(), n in 1usize..=10) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = AlternatingMatrix::from_fn(&f, n, |_, _| f.random(&mut rng));
        let (t, r) = alt_normal_form(&a);
        prop_assert!(t.inverse().is_some());
        prop_assert_eq!(a.congruence(&t).unwrap(), AlternatingMatrix::j_form(&f, r, n));
        prop_assert_eq!(alt_rank(&a), 2 * r);
        // rank is a congruence invariant
        let b = Matrix::from_fn(&f, n, n, |_, _| f.random(&mut rng));
        if b.inverse().is_some() {
            prop_assert_eq!(alt_rank(&a.congruence(&b).unwrap()), alt_rank(&a));
        }
    }

    #[test]
    fn classification_is_coordinate_free(seed in any::<u64>(), fam in 0usize..4) {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let family = [Family::Generic, Family::NotCButR, Family::NeitherCNorR, Family::NotA][fam];
        let j = admissible_jet(&f, 4, family, &mut rng);
        let base = classify(&j, &[]).unwrap();
        for moved in [scrambled(&j, &mut rng), admissible_change(&j, &mut rng)] {
            let r = classify(&moved, &[]).unwrap();
            prop_assert_eq!((r.type_a, r.type_c, r.type_r), (base.type_a, base.type_c, base.type_r));
        }
    }

    #[test]
    fn class_of_r_distributes(half in 1usize..=3) {
        let n = 2 * half;
        let c = class_of_c(n).unwrap();
        let u = GradedClass::lambda(n).add(&GradedClass::h(n));
        let rhs = u.scale(half as u64).mul(&c).sub(&GradedClass::c(n, 1).mul(&c));
        prop_assert_eq!(class_of_r(n).unwrap(), rhs);
        let g = class_of_r(n).unwrap();
        prop_assert_eq!(GradedClass::parse(n, &g.to_string()).unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pipeline_trials_have_no_violations(seed in any::<u64>(), m in 5usize..=8, fam in 0usize..4) {
        use char2::discriminant::{run_trial, DiscriminantData, TrialOptions};
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let family = [Family::Generic, Family::NotCButR, Family::NeitherCNorR, Family::NotA][fam];
        let data = DiscriminantData::random(&f, 4, m, family, &mut rng);
        let rec = run_trial(0, &data, &mut rng, &TrialOptions::default()).unwrap();
        prop_assert!(rec.violations.is_empty(), "{:?}", rec.violations);
        prop_assert_eq!(rec.closed_forms, Some(true));
    }
}

#[test]
fn pipeline_in_six_variables() {
    use char2::discriminant::{run_trial, DiscriminantData, TrialOptions};
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for fam in [Family::Generic, Family::NeitherCNorR] {
        let data = DiscriminantData::random(&f, 6, 8, fam, &mut rng);
        let opts = TrialOptions { fiber_degree: 4, ..TrialOptions::default() };
        let rec = run_trial(0, &data, &mut rng, &opts).unwrap();
        assert!(rec.violations.is_empty(), "{:?}", rec.violations);
        assert_eq!(rec.cusp, Some(fam == Family::Generic));
    }
}

fn random_poly(f: &Gf2k, vars: &Vars, degs: std::ops::RangeInclusive<u32>, rng: &mut ChaCha8Rng) -> MultiPoly<Gf2k> {
    use rand::Rng;
    let mut p = MultiPoly::zero(f, vars);
    for d in degs {
        for m in Monomial::all_of_degree(vars.len(), d) {
            if rng.random_bool(0.5) {
                p.add_term(m, &f.random(rng));
            }
        }
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pfaffian_is_covariant(seed in any::<u64>(), half in 1usize..=4) {
        let f = field();
        let n = 2 * half;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = AlternatingMatrix::from_fn(&f, n, |_, _| f.random(&mut rng));
        let t = Matrix::from_fn(&f, n, n, |_, _| f.random(&mut rng));
        let lhs = pfaffian(&a.congruence(&t).unwrap()).unwrap();
        prop_assert_eq!(lhs, f.mul(&t.det().unwrap(), &pfaffian(&a).unwrap()));
    }

    #[test]
    fn g_expansion_squares_to_the_determinant(seed in any::<u64>(), half in 2usize..=3, r in 0usize..=3) {
        use char2::algebra::JetRing;
        use char2::pfaffian::g_expansion;
        let f = field();
        let n = 2 * half;
        let r = r.min(half);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vars = Vars::new(["p", "q"]);
        let jr = JetRing::new(f.clone(), vars.clone(), 3);
        let a = AlternatingMatrix::from_fn(&jr, n, |_, _| jr.lift(&random_poly(&f, &vars, 1..=3, &mut rng)));
        // g_expansion itself refuses results whose square is not det(J + A)
        let g = g_expansion(&a, r).unwrap();
        if 2 * r + 4 <= n {
            prop_assert_eq!(g.poly().truncate(1), MultiPoly::zero(&f, &vars));
        }
        if r == half {
            prop_assert_eq!(g.poly().constant_term(), f.one());
        }
    }

    #[test]
    fn groebner_basis_ignores_generator_order(seed in any::<u64>(), k in 2usize..=3) {
        use char2::groebner::{buchberger, MonomialOrder, OrderKind};
        let f = field();
        let vars = Vars::new(["x", "y", "z"]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens: Vec<_> = (0..k).map(|_| random_poly(&f, &vars, 1..=2, &mut rng)).collect();
        let mut rev = gens.clone();
        rev.reverse();
        for kind in [OrderKind::Grevlex, OrderKind::Grlex] {
            let ord = MonomialOrder::natural(kind, 3);
            prop_assert_eq!(buchberger(&gens, &ord).unwrap(), buchberger(&rev, &ord).unwrap());
        }
    }

    #[test]
    fn degenerate_plane_ideals_three_ways(seed in any::<u64>(), l in 1usize..=4, rank_one in any::<bool>()) {
        use char2::groebner::{is_s2_t2, quotient_dim_truncated};
        let f = field();
        let vars = Vars::new(["s", "t"]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a0, b0) = (f.random(&mut rng), f.random(&mut rng));
        let gens: Vec<Jet<Gf2k>> = (0..l)
            .map(|_| {
                let (a, b) = if rank_one {
                    let k = f.random(&mut rng);
                    (f.mul(&k, &a0), f.mul(&k, &b0))
                } else {
                    (f.random(&mut rng), f.random(&mut rng))
                };
                let mut p = random_poly(&f, &vars, 3..=4, &mut rng);
                p.add_term(Monomial::from_exps(&[2, 0]), &a);
                p.add_term(Monomial::from_exps(&[0, 2]), &b);
                Jet::new(p, 6)
            })
            .collect();
        let coeffs = Matrix::from_fn(&f, 2, l, |i, j| gens[j].poly().coeff_of(if i == 0 { &[2, 0] } else { &[0, 2] }));
        let (dim, _) = quotient_dim_truncated(&gens, 6).unwrap();
        let by_rank = coeffs.rank() == 2;
        prop_assert_eq!(dim.is_at_most(4), by_rank);
        prop_assert_eq!(is_s2_t2(&gens, 6).unwrap(), by_rank);
    }
}
