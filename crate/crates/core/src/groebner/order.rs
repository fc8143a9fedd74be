use std::cmp::Ordering;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::algebra::{Monomial, Vars};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Lex,
    Grlex,
    Grevlex,
}

impl FromStr for OrderKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lex" => Ok(OrderKind::Lex),
            "grlex" => Ok(OrderKind::Grlex),
            "grevlex" => Ok(OrderKind::Grevlex),
            _ => Err(Error::Invalid(format!("unknown monomial order `{s}`"))),
        }
    }
}

pub type SortKey = SmallVec<[i32; 16]>;

/// A monomial order together with a variable priority: `priority[0]` is the
/// index of the most significant variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, priority: Vec<usize>) -> Result<Self> {
        let n = priority.len();
        let mut seen = vec![false; n];
        for &p in &priority {
            if p >= n || seen[p] {
                return Err(Error::Invalid("priority is not a permutation".into()));
            }
            seen[p] = true;
        }
        Ok(MonomialOrder { kind, priority })
    }

    /// Priority in variable-list order.
    pub fn natural(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder {
            kind,
            priority: (0..nvars).collect(),
        }
    }

    /// Priority given by names; unnamed variables follow in list order.
    pub fn with_names(kind: OrderKind, vars: &Vars, names: &[&str]) -> Result<Self> {
        let mut priority = Vec::with_capacity(vars.len());
        for name in names {
            let i = vars.index(name)?;
            if priority.contains(&i) {
                return Err(Error::Invalid(format!("`{name}` listed twice in priority")));
            }
            priority.push(i);
        }
        for i in 0..vars.len() {
            if !priority.contains(&i) {
                priority.push(i);
            }
        }
        Self::new(kind, priority)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    /// A vector whose lexicographic order is this monomial order.
    pub fn key(&self, m: &Monomial) -> SortKey {
        let e = m.exps();
        let mut k = SortKey::new();
        match self.kind {
            OrderKind::Lex => k.extend(self.priority.iter().map(|&i| e[i] as i32)),
            OrderKind::Grlex => {
                k.push(m.degree() as i32);
                k.extend(self.priority.iter().map(|&i| e[i] as i32));
            }
            OrderKind::Grevlex => {
                k.push(m.degree() as i32);
                k.extend(self.priority.iter().rev().map(|&i| -(e[i] as i32)));
            }
        }
        k
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Monomial {
        Monomial::from_exps(e)
    }

    #[test]
    fn textbook_comparisons() {
        let lex = MonomialOrder::natural(OrderKind::Lex, 3);
        let grlex = MonomialOrder::natural(OrderKind::Grlex, 3);
        let grevlex = MonomialOrder::natural(OrderKind::Grevlex, 3);
        // x y^2 z^0 vs x^0 y^0 z^4
        assert_eq!(lex.cmp(&m(&[1, 2, 0]), &m(&[0, 0, 4])), Ordering::Greater);
        assert_eq!(grlex.cmp(&m(&[1, 2, 0]), &m(&[0, 0, 4])), Ordering::Less);
        // x^1 y^2 z^1 vs x^2 y^0 z^2: equal degree
        assert_eq!(grlex.cmp(&m(&[1, 2, 1]), &m(&[2, 0, 2])), Ordering::Less);
        assert_eq!(grevlex.cmp(&m(&[1, 2, 1]), &m(&[2, 0, 2])), Ordering::Greater);
    }

    #[test]
    fn priority_reorders() {
        let vars = Vars::new(["a", "b"]);
        let o = MonomialOrder::with_names(OrderKind::Lex, &vars, &["b"]).unwrap();
        assert_eq!(o.priority(), &[1, 0]);
        assert_eq!(o.cmp(&m(&[0, 1]), &m(&[5, 0])), Ordering::Greater);
        assert!(MonomialOrder::new(OrderKind::Lex, vec![0, 0]).is_err());
    }
}
