//! Alternating matrices: Pfaffian, rank, congruence normal form.

use std::collections::HashMap;

use crate::algebra::{Field, Jet, JetRing, Matrix, Ring, SquareRoot};
use crate::error::{Error, Result};

/// Square matrix with zero diagonal and `a_ji = -a_ij`. Only the strict
/// upper triangle is stored.
#[derive(Clone, Debug, PartialEq)]
pub struct AlternatingMatrix<R: Ring> {
    ring: R,
    n: usize,
    upper: Vec<R::Elem>,
}

fn tri_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// The index involution swapping `2j` and `2j+1` (0-based).
pub fn tau(i: usize) -> usize {
    i ^ 1
}

impl<R: Ring> AlternatingMatrix<R> {
    pub fn zeros(ring: &R, n: usize) -> Self {
        AlternatingMatrix {
            ring: ring.clone(),
            n,
            upper: vec![ring.zero(); n * n.saturating_sub(1) / 2],
        }
    }

    /// Entries `f(i, j)` for `i < j`.
    pub fn from_fn<F: FnMut(usize, usize) -> R::Elem>(ring: &R, n: usize, mut f: F) -> Self {
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                upper.push(f(i, j));
            }
        }
        AlternatingMatrix {
            ring: ring.clone(),
            n,
            upper,
        }
    }

    /// `rows[i][k]` is the entry at `(i, i + 1 + k)`.
    pub fn from_upper_rows(ring: &R, rows: Vec<Vec<R::Elem>>) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len() + 1);
        for (i, r) in rows.iter().enumerate() {
            if r.len() + 1 + i != n {
                return Err(Error::Dimension(format!("row {i} has {} entries", r.len())));
            }
        }
        Ok(AlternatingMatrix {
            ring: ring.clone(),
            n,
            upper: rows.into_iter().flatten().collect(),
        })
    }

    /// Checks that `m` is square with zero diagonal and `m_ji = -m_ij`.
    pub fn from_matrix(m: &Matrix<R>) -> Result<Self> {
        let r = m.ring();
        if m.rows() != m.cols() {
            return Err(Error::Dimension("not square".into()));
        }
        for i in 0..m.rows() {
            if !r.is_zero(m.get(i, i)) {
                return Err(Error::Invalid(format!("nonzero diagonal entry at {i}")));
            }
            for j in i + 1..m.rows() {
                if r.add(m.get(i, j), m.get(j, i)) != r.zero() {
                    return Err(Error::Invalid(format!("entries ({i},{j}) and ({j},{i}) are not opposite")));
                }
            }
        }
        Ok(Self::from_fn(r, m.rows(), |i, j| m.get(i, j).clone()))
    }

    /// `J_{2r,n}`: ones at `(2k, 2k+1)` for `k < r`, zero elsewhere above
    /// the diagonal.
    pub fn j_form(ring: &R, r: usize, n: usize) -> Self {
        assert!(2 * r <= n);
        Self::from_fn(ring, n, |i, j| {
            if j == i + 1 && i % 2 == 0 && i < 2 * r {
                ring.one()
            } else {
                ring.zero()
            }
        })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> R::Elem {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => self.ring.zero(),
            std::cmp::Ordering::Less => self.upper[tri_index(self.n, i, j)].clone(),
            std::cmp::Ordering::Greater => self.ring.neg(&self.upper[tri_index(self.n, j, i)]),
        }
    }

    /// Sets `(i, j)` and, implicitly, `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        assert_ne!(i, j, "diagonal is fixed at zero");
        if i < j {
            self.upper[tri_index(self.n, i, j)] = v;
        } else {
            self.upper[tri_index(self.n, j, i)] = self.ring.neg(&v);
        }
    }

    pub fn to_matrix(&self) -> Matrix<R> {
        Matrix::from_fn(&self.ring, self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        AlternatingMatrix {
            ring: self.ring.clone(),
            n: self.n,
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| self.ring.add(a, b))
                .collect(),
        }
    }

    pub fn map<S: Ring, F: Fn(&R::Elem) -> S::Elem>(&self, ring: &S, f: F) -> AlternatingMatrix<S> {
        AlternatingMatrix {
            ring: ring.clone(),
            n: self.n,
            upper: self.upper.iter().map(f).collect(),
        }
    }

    /// `T^t A T`, which is again alternating.
    pub fn congruence(&self, t: &Matrix<R>) -> Result<Self> {
        let a = self.to_matrix();
        let m = t.transpose().mul(&a)?.mul(t)?;
        // diagonal terms of T^t A T are sums a_ij(t_i t_j - t_j t_i) = 0
        Ok(Self::from_fn(&self.ring, m.rows(), |i, j| m.get(i, j).clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(|x| self.ring.is_zero(x))
    }
}

/// Sum over perfect matchings with signs, expanded along the first
/// remaining index and memoized on the set of remaining indices.
pub fn pfaffian<R: Ring>(a: &AlternatingMatrix<R>) -> Result<R::Elem> {
    let n = a.size();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    if n > 30 {
        return Err(Error::Dimension(format!("size {n} is too large")));
    }
    let mut memo = HashMap::new();
    Ok(pf_rec(a, (1u32 << n) - 1, &mut memo))
}

fn pf_rec<R: Ring>(a: &AlternatingMatrix<R>, set: u32, memo: &mut HashMap<u32, R::Elem>) -> R::Elem {
    let r = a.ring();
    if set == 0 {
        return r.one();
    }
    if let Some(v) = memo.get(&set) {
        return v.clone();
    }
    let i = set.trailing_zeros() as usize;
    let rest = set & !(1 << i);
    let mut acc = r.zero();
    let mut plus = true;
    let mut bits = rest;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let aij = a.get(i, j);
        if !r.is_zero(&aij) {
            let sub = pf_rec(a, rest & !(1 << j), memo);
            let t = r.mul(&aij, &sub);
            acc = if plus { r.add(&acc, &t) } else { r.sub(&acc, &t) };
        }
        plus = !plus;
    }
    memo.insert(set, acc.clone());
    acc
}

/// Rank over a field. Always even.
pub fn alt_rank<R: Field>(a: &AlternatingMatrix<R>) -> usize {
    a.to_matrix().rank()
}

fn bilinear<R: Field>(a: &Matrix<R>, u: &[R::Elem], v: &[R::Elem]) -> R::Elem {
    let r = a.ring();
    let mut acc = r.zero();
    for (i, ui) in u.iter().enumerate() {
        if r.is_zero(ui) {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            if i == j || r.is_zero(vj) {
                continue;
            }
            acc = r.add(&acc, &r.mul(&r.mul(ui, a.get(i, j)), vj));
        }
    }
    acc
}

/// `T` with `T^t A T = J_{2r,n}`, found by symplectic Gram-Schmidt: take a
/// pair with `B(u, v) = 1`, project it out of the remaining vectors, repeat;
/// whatever is left spans the radical and goes last.
pub fn alt_normal_form<R: Field>(a: &AlternatingMatrix<R>) -> (Matrix<R>, usize) {
    let ring = a.ring().clone();
    let n = a.size();
    let am = a.to_matrix();
    let mut pending: Vec<Vec<R::Elem>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
        .collect();
    let mut cols: Vec<Vec<R::Elem>> = Vec::with_capacity(n);
    let mut r = 0;
    loop {
        let mut found = None;
        'search: for x in 0..pending.len() {
            for y in x + 1..pending.len() {
                let b = bilinear(&am, &pending[x], &pending[y]);
                if !ring.is_zero(&b) {
                    found = Some((x, y, b));
                    break 'search;
                }
            }
        }
        let Some((x, y, b)) = found else { break };
        let binv = ring.inv(&b).expect("nonzero");
        let v: Vec<_> = pending[y].iter().map(|c| ring.mul(c, &binv)).collect();
        let u = pending[x].clone();
        pending.remove(y);
        pending.remove(x);
        for w in pending.iter_mut() {
            let bwv = bilinear(&am, w, &v);
            let bwu = bilinear(&am, w, &u);
            for k in 0..n {
                let t = ring.add(&ring.sub(&w[k], &ring.mul(&bwv, &u[k])), &ring.mul(&bwu, &v[k]));
                w[k] = t;
            }
        }
        cols.push(u);
        cols.push(v);
        r += 1;
    }
    cols.extend(pending);
    let t = Matrix::from_fn(&ring, n, n, |i, j| cols[j][i].clone());
    (t, r)
}

/// `g_A`, the square root of `det(J_{2r,2m} + A)` for an alternating
/// matrix of jets vanishing at the origin. Computed as the Pfaffian of
/// `J + A` and checked against the determinant.
pub fn g_expansion<R: Field + SquareRoot>(a: &AlternatingMatrix<JetRing<R>>, r: usize) -> Result<Jet<R>> {
    let jr = a.ring().clone();
    let n = a.size();
    if n % 2 == 1 {
        return Err(Error::OddSize(n));
    }
    let m = AlternatingMatrix::j_form(&jr, r, n).add(a);
    let g = pfaffian(&m)?;
    let det = m.to_matrix().det_expansion()?;
    if jr.mul(&g, &g) != det {
        return Err(Error::NotASquare);
    }
    // the Frobenius root of det agrees with g as far as it is defined
    if det.sqrt()? != g.truncate(jr.order / 2) {
        return Err(Error::NotASquare);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Gf2k, Integers, MultiPoly, PolyRing, Vars};
    use num_bigint::BigInt;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn symbolic(n: usize) -> (PolyRing<Integers>, AlternatingMatrix<PolyRing<Integers>>) {
        let names: Vec<String> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| format!("x{}{}", i + 1, j + 1)))
            .collect();
        let pr = PolyRing::new(Integers, Vars::new(names));
        let mut k = 0;
        let a = AlternatingMatrix::from_fn(&pr, n, |_, _| {
            k += 1;
            pr.var(k - 1)
        });
        (pr, a)
    }

    #[test]
    fn two_by_two() {
        let (pr, a) = symbolic(2);
        assert_eq!(pfaffian(&a).unwrap(), pr.var(0));
    }

    #[test]
    fn four_by_four_formula() {
        let (pr, a) = symbolic(4);
        // vars: x12 x13 x14 x23 x24 x34
        let v = |i| pr.var(i);
        let want = &(&(&v(0) * &v(5)) - &(&v(1) * &v(4))) + &(&v(2) * &v(3));
        assert_eq!(pfaffian(&a).unwrap(), want);
        let det = a.to_matrix().det_expansion().unwrap();
        assert_eq!(det, &want * &want);
    }

    #[test]
    fn odd_size_rejected() {
        let f = Gf2k::default();
        let a = AlternatingMatrix::zeros(&f, 3);
        assert_eq!(pfaffian(&a), Err(Error::OddSize(3)));
    }

    #[test]
    fn j_form_has_pfaffian_one() {
        let z = Integers;
        for m in 1..5 {
            let j = AlternatingMatrix::j_form(&z, m, 2 * m);
            assert_eq!(pfaffian(&j).unwrap(), BigInt::from(1));
        }
    }

    #[test]
    fn normal_form_identity_on_j() {
        let f = Gf2k::default();
        let j = AlternatingMatrix::j_form(&f, 1, 4);
        let (t, r) = alt_normal_form(&j);
        assert_eq!(r, 1);
        assert_eq!(t, Matrix::identity(&f, 4));
        let (t, r) = alt_normal_form(&AlternatingMatrix::zeros(&f, 5));
        assert_eq!(r, 0);
        assert_eq!(t, Matrix::identity(&f, 5));
    }

    #[test]
    fn normal_form_random() {
        let f = Gf2k::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..9 {
            let a = AlternatingMatrix::from_fn(&f, n, |_, _| f.random(&mut rng));
            let (t, r) = alt_normal_form(&a);
            assert_eq!(a.congruence(&t).unwrap(), AlternatingMatrix::j_form(&f, r, n));
            assert_eq!(alt_rank(&a), 2 * r);
        }
    }

    #[test]
    fn g_of_zero_is_one() {
        let f = Gf2k::default();
        let v = Vars::new(["x"]);
        let jr = JetRing::new(f.clone(), v.clone(), 3);
        let g = g_expansion(&AlternatingMatrix::zeros(&jr, 4), 2).unwrap();
        assert_eq!(g.poly(), &MultiPoly::one(&f, &v));
    }

    #[test]
    fn g_linear_part_corank_two() {
        let f = Gf2k::default();
        let names: Vec<String> = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| format!("x{}{}", i + 1, j + 1)))
            .collect();
        let v = Vars::new(names);
        let jr = JetRing::new(f.clone(), v.clone(), 4);
        let mut k = 0;
        let a = AlternatingMatrix::from_fn(&jr, 4, |_, _| {
            k += 1;
            jr.var(k - 1)
        });
        let g = g_expansion(&a, 1).unwrap();
        assert_eq!(g.homogeneous_part(1), MultiPoly::var(&f, &v, 5));
        assert!(g.poly().constant_term() == f.zero());
    }

    #[test]
    fn g_has_no_low_terms_in_corank_four() {
        let f = Gf2k::default();
        let names: Vec<String> = (0..15).map(|i| format!("a{i}")).collect();
        let v = Vars::new(names);
        let jr = JetRing::new(f.clone(), v.clone(), 3);
        let mut k = 0;
        let a = AlternatingMatrix::from_fn(&jr, 6, |_, _| {
            k += 1;
            jr.var(k - 1)
        });
        let g = g_expansion(&a, 1).unwrap();
        assert_eq!(g.poly().order(), Some(2));
    }
}
