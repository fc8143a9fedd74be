use std::collections::BTreeMap;

use super::order::{MonomialOrder, OrderKind, SortKey};
use crate::algebra::{Field, Monomial, MultiPoly, Vars};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest total degree of an S-pair lcm.
    pub degree_cap: u32,
    /// Largest number of polynomials ever added to the basis.
    pub basis_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            degree_cap: 20,
            basis_cap: 10_000,
        }
    }
}

pub fn leading<R: Field>(p: &MultiPoly<R>, ord: &MonomialOrder) -> Option<(Monomial, R::Elem)> {
    p.terms()
        .max_by(|a, b| ord.cmp(a.0, b.0))
        .map(|(m, c)| (m.clone(), c.clone()))
}

struct Elem<R: Field> {
    poly: MultiPoly<R>,
    lm: Monomial,
    lc: R::Elem,
}

impl<R: Field> Elem<R> {
    fn new(poly: MultiPoly<R>, ord: &MonomialOrder) -> Option<Self> {
        let (lm, lc) = leading(&poly, ord)?;
        Some(Elem { poly, lm, lc })
    }
}

type Work<R> = BTreeMap<SortKey, (Monomial, <R as crate::algebra::Ring>::Elem)>;

fn work_add<R: Field>(ring: &R, w: &mut Work<R>, ord: &MonomialOrder, m: Monomial, c: R::Elem) {
    use std::collections::btree_map::Entry;
    match w.entry(ord.key(&m)) {
        Entry::Vacant(e) => {
            e.insert((m, c));
        }
        Entry::Occupied(mut e) => {
            let s = ring.add(&e.get().1, &c);
            if ring.is_zero(&s) {
                e.remove();
            } else {
                e.get_mut().1 = s;
            }
        }
    }
}

/// Full reduction of `f` modulo the given basis elements.
fn reduce<R: Field>(f: &MultiPoly<R>, basis: &[&Elem<R>], ord: &MonomialOrder) -> MultiPoly<R> {
    let ring = f.ring().clone();
    let mut work: Work<R> = f
        .terms()
        .map(|(m, c)| (ord.key(m), (m.clone(), c.clone())))
        .collect();
    let mut rem = MultiPoly::zero(&ring, f.vars());
    while let Some((_, (m, c))) = work.pop_last() {
        let Some(g) = basis.iter().find(|g| g.lm.divides(&m)) else {
            rem.add_term(m, &c);
            continue;
        };
        let q = g.lm.quotient_of(&m);
        let k = ring.neg(&ring.div(&c, &g.lc).expect("monic leading coefficient"));
        for (t, a) in g.poly.terms() {
            if *t == g.lm {
                continue;
            }
            work_add(&ring, &mut work, ord, t.mul(&q), ring.mul(a, &k));
        }
    }
    rem
}

fn monic<R: Field>(p: &MultiPoly<R>, ord: &MonomialOrder) -> MultiPoly<R> {
    match leading(p, ord) {
        Some((_, lc)) => p.div_scalar(&lc).expect("nonzero"),
        None => p.clone(),
    }
}

pub fn s_polynomial<R: Field>(f: &MultiPoly<R>, g: &MultiPoly<R>, ord: &MonomialOrder) -> MultiPoly<R> {
    let (fm, fc) = leading(f, ord).expect("nonzero");
    let (gm, gc) = leading(g, ord).expect("nonzero");
    let l = fm.lcm(&gm);
    let r = f.ring();
    let a = f.mul_monomial(&fm.quotient_of(&l), &r.inv(&fc).unwrap());
    let b = g.mul_monomial(&gm.quotient_of(&l), &r.inv(&gc).unwrap());
    a.sub(&b)
}

/// Remainder of `f` on division by `basis` (fully reduced).
pub fn normal_form<R: Field>(f: &MultiPoly<R>, basis: &[MultiPoly<R>], ord: &MonomialOrder) -> MultiPoly<R> {
    let elems: Vec<Elem<R>> = basis.iter().filter_map(|g| Elem::new(g.clone(), ord)).collect();
    let refs: Vec<&Elem<R>> = elems.iter().collect();
    reduce(f, &refs, ord)
}

/// Pair bookkeeping of Gebauer and Moller: drop pairs whose S-polynomial is
/// known to reduce to zero by the product and chain criteria.
fn update<R: Field>(
    polys: &[Elem<R>],
    active: &mut Vec<usize>,
    pairs: &mut Vec<(usize, usize)>,
    h: usize,
) {
    let lh = &polys[h].lm;
    let mut c: Vec<usize> = active.clone();
    let mut d: Vec<usize> = Vec::new();
    while let Some(g1) = c.first().copied() {
        c.remove(0);
        let l1 = lh.lcm(&polys[g1].lm);
        let coprime = lh.is_coprime(&polys[g1].lm);
        let dominated = c
            .iter()
            .chain(d.iter())
            .any(|&g2| lh.lcm(&polys[g2].lm).divides(&l1));
        if coprime || !dominated {
            d.push(g1);
        }
    }
    let e: Vec<(usize, usize)> = d
        .into_iter()
        .filter(|&g| !lh.is_coprime(&polys[g].lm))
        .map(|g| (g, h))
        .collect();
    pairs.retain(|&(g1, g2)| {
        let l = polys[g1].lm.lcm(&polys[g2].lm);
        !lh.divides(&l) || lh.lcm(&polys[g1].lm) == l || lh.lcm(&polys[g2].lm) == l
    });
    pairs.extend(e);
    active.retain(|&g| !lh.divides(&polys[g].lm));
    active.push(h);
}

/// The reduced Groebner basis, monic, sorted by decreasing leading monomial.
pub fn buchberger<R: Field>(gens: &[MultiPoly<R>], ord: &MonomialOrder) -> Result<Vec<MultiPoly<R>>> {
    buchberger_with(gens, ord, Limits::default())
}

pub fn buchberger_with<R: Field>(
    gens: &[MultiPoly<R>],
    ord: &MonomialOrder,
    limits: Limits,
) -> Result<Vec<MultiPoly<R>>> {
    if let Some(first) = gens.first() {
        if ord.priority().len() != first.nvars() {
            return Err(Error::Dimension("order and variable list differ in length".into()));
        }
        for g in gens {
            if g.vars() != first.vars() {
                return Err(Error::VariableMismatch {
                    left: first.vars().to_string(),
                    right: g.vars().to_string(),
                });
            }
        }
    }
    let mut polys: Vec<Elem<R>> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for g in gens {
        if let Some(e) = Elem::new(monic(g, ord), ord) {
            polys.push(e);
            update(&polys, &mut active, &mut pairs, polys.len() - 1);
        }
    }
    while !pairs.is_empty() {
        let (best, _) = pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, &(i, j))| (polys[i].lm.lcm(&polys[j].lm).degree(), i.min(j), i.max(j)))
            .expect("nonempty");
        let (i, j) = pairs.swap_remove(best);
        let deg = polys[i].lm.lcm(&polys[j].lm).degree();
        if deg > limits.degree_cap {
            return Err(Error::ResourceCap(format!(
                "S-pair of degree {deg} exceeds the cap {}",
                limits.degree_cap
            )));
        }
        let s = s_polynomial(&polys[i].poly, &polys[j].poly, ord);
        let basis: Vec<&Elem<R>> = active.iter().map(|&k| &polys[k]).collect();
        let r = reduce(&s, &basis, ord);
        if r.is_zero() {
            continue;
        }
        if polys.len() >= limits.basis_cap {
            return Err(Error::ResourceCap(format!("more than {} basis elements", limits.basis_cap)));
        }
        polys.push(Elem::new(monic(&r, ord), ord).expect("nonzero"));
        update(&polys, &mut active, &mut pairs, polys.len() - 1);
    }
    Ok(interreduce(active.iter().map(|&k| &polys[k]).collect(), ord))
}

fn interreduce<R: Field>(mut g: Vec<&Elem<R>>, ord: &MonomialOrder) -> Vec<MultiPoly<R>> {
    g.sort_by(|a, b| ord.cmp(&a.lm, &b.lm));
    let mut minimal: Vec<&Elem<R>> = Vec::new();
    for e in g {
        if !minimal.iter().any(|m| m.lm.divides(&e.lm)) {
            minimal.push(e);
        }
    }
    let mut out: Vec<MultiPoly<R>> = (0..minimal.len())
        .map(|k| {
            let others: Vec<&Elem<R>> = minimal
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, e)| *e)
                .collect();
            monic(&reduce(&minimal[k].poly, &others, ord), ord)
        })
        .collect();
    out.sort_by(|a, b| {
        let la = leading(a, ord).unwrap().0;
        let lb = leading(b, ord).unwrap().0;
        ord.cmp(&lb, &la)
    });
    out
}

/// Every S-polynomial of `basis` reduces to zero.
pub fn is_groebner<R: Field>(basis: &[MultiPoly<R>], ord: &MonomialOrder) -> bool {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let s = s_polynomial(&basis[i], &basis[j], ord);
            if !normal_form(&s, basis, ord).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Membership of each of `fs` in the ideal with Groebner basis `gb`.
pub fn contains_all<R: Field>(gb: &[MultiPoly<R>], fs: &[MultiPoly<R>], ord: &MonomialOrder) -> bool {
    fs.iter().all(|f| normal_form(f, gb, ord).is_zero())
}

/// Equality of the ideals generated by `a` and `b`, decided by comparing
/// reduced Groebner bases.
pub fn ideals_equal<R: Field>(a: &[MultiPoly<R>], b: &[MultiPoly<R>], ord: &MonomialOrder) -> Result<bool> {
    Ok(buchberger(a, ord)? == buchberger(b, ord)?)
}

/// Generators of `I` intersected with the polynomial ring in the variables
/// not listed in `drop`, expressed over those variables. Uses pure lex with
/// the dropped variables first and the rest in their list order.
pub fn eliminate<R: Field>(gens: &[MultiPoly<R>], drop: &[usize]) -> Result<(Vars, Vec<MultiPoly<R>>)> {
    let Some(first) = gens.first() else {
        return Err(Error::Dimension("empty ideal".into()));
    };
    let vars = first.vars().clone();
    let mut priority: Vec<usize> = drop.to_vec();
    priority.extend((0..vars.len()).filter(|i| !drop.contains(i)));
    let ord = MonomialOrder::new(OrderKind::Lex, priority)?;
    let gb = buchberger(gens, &ord)?;
    let kept = vars.without(drop);
    let out = gb
        .into_iter()
        .filter(|g| g.support_vars().iter().all(|v| !drop.contains(v)))
        .map(|g| g.embed(&kept))
        .collect::<Result<Vec<_>>>()?;
    Ok((kept, out))
}

/// Krull dimension of `k[x]/I` from a Groebner basis: the largest set of
/// variables containing no leading monomial.
pub fn krull_dimension<R: Field>(gb: &[MultiPoly<R>], ord: &MonomialOrder) -> Option<usize> {
    let first = gb.first()?;
    let n = first.nvars();
    let leads: Vec<Monomial> = gb.iter().filter_map(|g| leading(g, ord)).map(|l| l.0).collect();
    if leads.iter().any(|m| m.is_one()) {
        return None;
    }
    let mut best = 0;
    for set in 0u64..(1u64 << n) {
        let size = set.count_ones() as usize;
        if size <= best {
            continue;
        }
        let independent = leads
            .iter()
            .all(|m| m.exps().iter().enumerate().any(|(i, &e)| e > 0 && set & (1 << i) == 0));
        if independent {
            best = size;
        }
    }
    Some(best)
}
