//! The finite field GF(2^k) in a polynomial basis.
//!
//! An element is a bitstring of length `k`; bit `i` is the coefficient of
//! `t^i`. The field descriptor holds the defining irreducible polynomial
//! (with its leading `t^k` bit set) and, for `k <= 16`, log/antilog tables.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ring::{Field, Ring, SquareRoot};
use crate::error::{Error, Result};

/// `t^16 + t^5 + t^3 + t^2 + 1`, a primitive polynomial over GF(2).
pub const DEFAULT_MODULUS: u64 = 0x1_002d;
/// `t^4 + t + 1`.
pub const GF16_MODULUS: u64 = 0x13;

const TABLE_MAX_DEGREE: u32 = 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GfElem(u64);

impl GfElem {
    pub const ZERO: GfElem = GfElem(0);
    pub const ONE: GfElem = GfElem(1);

    pub fn bits(self) -> u64 {
        self.0
    }
}

impl fmt::Display for GfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 | 1 => write!(f, "{}", self.0),
            b => write!(f, "0x{b:x}"),
        }
    }
}

#[derive(Debug)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Clone)]
pub struct Gf2k {
    k: u32,
    modulus: u64,
    tables: Option<Arc<Tables>>,
}

impl fmt::Debug for Gf2k {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod 0x{:x}", self.k, self.modulus)
    }
}

impl PartialEq for Gf2k {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}
impl Eq for Gf2k {}

impl Default for Gf2k {
    fn default() -> Self {
        static DEFAULT: OnceLock<Gf2k> = OnceLock::new();
        DEFAULT
            .get_or_init(|| Gf2k::new(DEFAULT_MODULUS).expect("default modulus is irreducible"))
            .clone()
    }
}

fn degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let a = a as u128;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn poly_mod(mut a: u128, m: u64) -> u64 {
    let dm = degree(m);
    let m = m as u128;
    while a != 0 {
        let da = 127 - a.leading_zeros();
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a as u64
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_mod(a as u128, b);
        a = b;
        b = r;
    }
    a
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a binary polynomial of degree `k`.
pub fn is_irreducible(modulus: u64) -> bool {
    if modulus < 2 {
        return false;
    }
    let k = degree(modulus);
    if k == 0 {
        return false;
    }
    // x^(2^j) mod f
    let frob = |j: u32| {
        let mut x = poly_mod(2, modulus);
        for _ in 0..j {
            x = poly_mod(clmul(x, x), modulus);
        }
        x
    };
    if frob(k) != poly_mod(2, modulus) {
        return false;
    }
    for p in prime_factors(k as u64) {
        let h = frob(k / p as u32) ^ poly_mod(2, modulus);
        if poly_gcd(modulus, h) != 1 {
            return false;
        }
    }
    true
}

impl Gf2k {
    pub fn new(modulus: u64) -> Result<Self> {
        let k = if modulus < 2 { 0 } else { degree(modulus) };
        if !(1..=32).contains(&k) {
            return Err(Error::FieldDegree(k));
        }
        if !is_irreducible(modulus) {
            return Err(Error::ReducibleModulus(modulus));
        }
        let mut field = Gf2k {
            k,
            modulus,
            tables: None,
        };
        if k <= TABLE_MAX_DEGREE {
            field.tables = Some(Arc::new(field.build_tables()));
        }
        Ok(field)
    }

    /// GF(2) itself, with modulus `t + 1`.
    pub fn prime() -> Self {
        Gf2k::new(0b11).expect("t + 1 is irreducible")
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        1u64 << self.k
    }

    fn mask(&self) -> u64 {
        if self.k == 64 {
            u64::MAX
        } else {
            (1u64 << self.k) - 1
        }
    }

    /// Element with the given bit pattern, rejecting patterns wider than `k`.
    pub fn elem(&self, bits: u64) -> Result<GfElem> {
        if bits & !self.mask() != 0 {
            return Err(Error::Invalid(format!(
                "0x{bits:x} does not fit in GF(2^{})",
                self.k
            )));
        }
        Ok(GfElem(bits))
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        poly_mod(clmul(a, b), self.modulus)
    }

    fn build_tables(&self) -> Tables {
        let q1 = self.order() - 1;
        let factors = prime_factors(q1);
        let pow = |mut base: u64, mut e: u64| {
            let mut acc = 1u64;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.mul_slow(acc, base);
                }
                base = self.mul_slow(base, base);
                e >>= 1;
            }
            acc
        };
        let generator = (2..self.order())
            .find(|&g| factors.iter().all(|&p| pow(g, q1 / p) != 1))
            .unwrap_or(1);
        let n = self.order() as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; n];
        let mut x = 1u64;
        for i in 0..q1 as usize {
            exp[i] = x as u32;
            log[x as usize] = i as u32;
            x = self.mul_slow(x, generator);
        }
        for i in q1 as usize..2 * n {
            exp[i] = exp[i - q1 as usize];
        }
        Tables { exp, log }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> GfElem {
        GfElem(rng.random::<u64>() & self.mask())
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> GfElem {
        loop {
            let x = self.random(rng);
            if x.0 != 0 {
                return x;
            }
        }
    }

    /// Some `y` with `y^3 = a`, if one exists.
    pub fn cube_root(&self, a: &GfElem) -> Option<GfElem> {
        if a.0 == 0 {
            return Some(GfElem::ZERO);
        }
        let q1 = self.order() - 1;
        let candidate = if q1 % 3 != 0 {
            inverse_mod(3, q1).map(|e| self.pow(a, e))
        } else if (q1 / 3) % 3 != 0 {
            if self.pow(a, q1 / 3) != GfElem::ONE {
                return None;
            }
            inverse_mod(3, q1 / 3).map(|e| self.pow(a, e))
        } else if self.k <= 20 {
            (1..self.order())
                .map(GfElem)
                .find(|y| self.pow(y, 3) == *a)
        } else {
            None
        };
        candidate.filter(|y| self.pow(y, 3) == *a)
    }
}

fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

impl Ring for Gf2k {
    type Elem = GfElem;

    fn zero(&self) -> GfElem {
        GfElem::ZERO
    }
    fn one(&self) -> GfElem {
        GfElem::ONE
    }
    fn is_zero(&self, a: &GfElem) -> bool {
        a.0 == 0
    }
    fn add(&self, a: &GfElem, b: &GfElem) -> GfElem {
        GfElem(a.0 ^ b.0)
    }
    fn neg(&self, a: &GfElem) -> GfElem {
        *a
    }
    fn sub(&self, a: &GfElem, b: &GfElem) -> GfElem {
        GfElem(a.0 ^ b.0)
    }
    fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        if a.0 == 0 || b.0 == 0 {
            return GfElem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize] + t.log[b.0 as usize];
                GfElem(t.exp[l as usize] as u64)
            }
            None => GfElem(self.mul_slow(a.0, b.0)),
        }
    }
    fn from_int(&self, n: i64) -> GfElem {
        GfElem((n & 1) as u64)
    }
}

impl Field for Gf2k {
    fn inv(&self, a: &GfElem) -> Option<GfElem> {
        if a.0 == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => {
                let q1 = (self.order() - 1) as u32;
                let l = (q1 - t.log[a.0 as usize]) % q1;
                Some(GfElem(t.exp[l as usize] as u64))
            }
            None => Some(self.pow(a, self.order() - 2)),
        }
    }
}

impl SquareRoot for Gf2k {
    /// `x^(2^(k-1))`, the inverse of the Frobenius map.
    fn sqrt(&self, a: &GfElem) -> Result<GfElem> {
        let mut x = *a;
        for _ in 1..self.k {
            x = self.mul(&x, &x);
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn default_modulus_is_irreducible_and_primitive() {
        assert!(is_irreducible(DEFAULT_MODULUS));
        assert!(is_irreducible(GF16_MODULUS));
        assert!(!is_irreducible(0b101)); // t^2 + 1 = (t+1)^2
        assert!(!is_irreducible(0x1_0001)); // t^16 + 1
        // t generates the multiplicative group
        let f = Gf2k::default();
        let t = GfElem(2);
        let q1 = f.order() - 1;
        assert_eq!(f.pow(&t, q1), GfElem::ONE);
        for p in [3u64, 5, 17, 257] {
            assert_ne!(f.pow(&t, q1 / p), GfElem::ONE);
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(matches!(Gf2k::new(0b101), Err(Error::ReducibleModulus(0b101))));
        assert!(matches!(Gf2k::new(1), Err(Error::FieldDegree(0))));
    }

    #[test]
    fn sqrt_trivial_cases() {
        let f = Gf2k::default();
        assert_eq!(f.sqrt(&GfElem::ZERO).unwrap(), GfElem::ZERO);
        assert_eq!(f.sqrt(&GfElem::ONE).unwrap(), GfElem::ONE);
    }

    #[test]
    fn sqrt_in_gf16_checked_by_squaring() {
        let f = Gf2k::new(GF16_MODULUS).unwrap();
        for bits in 0..16 {
            let g = f.elem(bits).unwrap();
            let r = f.sqrt(&g).unwrap();
            assert_eq!(f.mul(&r, &r), g);
        }
    }

    #[test]
    fn table_and_schoolbook_multiplication_agree() {
        let f = Gf2k::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let a = f.random(&mut rng);
            let b = f.random(&mut rng);
            assert_eq!(f.mul(&a, &b).0, f.mul_slow(a.0, b.0));
        }
    }

    #[test]
    fn inverses() {
        let f = Gf2k::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let a = f.random_nonzero(&mut rng);
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), GfElem::ONE);
        }
        // t^32 + t^22 + t^2 + t + 1, beyond the table range
        let big = Gf2k::new(0x1_0040_0007).unwrap();
        let a = big.random_nonzero(&mut rng);
        assert_eq!(big.mul(&a, &big.inv(&a).unwrap()), GfElem::ONE);
    }

    #[test]
    fn cube_roots_when_they_exist() {
        let f = Gf2k::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let y = f.random(&mut rng);
            let c = f.pow(&y, 3);
            let r = f.cube_root(&c).expect("a cube has a cube root");
            assert_eq!(f.pow(&r, 3), c);
        }
        let g = Gf2k::new(GF16_MODULUS).unwrap();
        let cubes: std::collections::BTreeSet<u64> =
            (0..16).map(|b| g.pow(&GfElem(b), 3).0).collect();
        for b in 0..16 {
            assert_eq!(g.cube_root(&GfElem(b)).is_some(), cubes.contains(&b));
        }
    }

    #[test]
    fn prime_field() {
        let f = Gf2k::prime();
        assert_eq!(f.order(), 2);
        assert_eq!(f.mul(&GfElem::ONE, &GfElem::ONE), GfElem::ONE);
        assert_eq!(f.add(&GfElem::ONE, &GfElem::ONE), GfElem::ZERO);
    }
}
