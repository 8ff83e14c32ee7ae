use std::cmp::Ordering;
use std::fmt;

/// Variable registry. The derived order is the registry order used for
/// canonical printing: `D`, `κ`, `c_k`, `t_k`, `a_k`, `s_ij`.
///
/// Line indices are zero-based internally and printed one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    D,
    Kappa,
    C(u16),
    T(u16),
    A(u16),
    /// External invariant `k_i · k_j`, stored with `i <= j`.
    S(u16, u16),
}

impl Var {
    pub fn s(i: u16, j: u16) -> Var {
        Var::S(i.min(j), i.max(j))
    }

    /// Parses the plain-text name (`D`, `kappa`, `c1`, `t1`, `a1`, `s1_2`).
    pub fn parse(name: &str) -> Option<Var> {
        let index = |s: &str| -> Option<u16> {
            let k: u16 = s.parse().ok()?;
            k.checked_sub(1)
        };
        match name {
            "D" => Some(Var::D),
            "kappa" | "κ" => Some(Var::Kappa),
            _ => {
                let (head, rest) = name.split_at(name.char_indices().nth(1)?.0);
                match head {
                    "c" => Some(Var::C(index(rest)?)),
                    "t" => Some(Var::T(index(rest)?)),
                    "a" => Some(Var::A(index(rest)?)),
                    "s" => {
                        let (i, j) = rest.split_once('_')?;
                        Some(Var::s(index(i)?, index(j)?))
                    }
                    _ => None,
                }
            }
        }
    }

    pub fn latex(&self) -> String {
        match *self {
            Var::D => "D".into(),
            Var::Kappa => "\\kappa".into(),
            Var::C(k) => format!("c_{{{}}}", k + 1),
            Var::T(k) => format!("t_{{{}}}", k + 1),
            Var::A(k) => format!("a_{{{}}}", k + 1),
            Var::S(i, j) => format!("s_{{{}{}}}", i + 1, j + 1),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::D => write!(f, "D"),
            Var::Kappa => write!(f, "kappa"),
            Var::C(k) => write!(f, "c{}", k + 1),
            Var::T(k) => write!(f, "t{}", k + 1),
            Var::A(k) => write!(f, "a{}", k + 1),
            Var::S(i, j) => write!(f, "s{}_{}", i + 1, j + 1),
        }
    }
}

/// Power product of registry variables, sorted by variable, no zero exponents.
///
/// Ordered graded-lexicographically: total degree first, then the exponent of
/// the earliest registry variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial::pow(v, 1)
    }

    pub fn pow(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial { factors: vec![(v, e)] }
        }
    }

    pub fn from_factors(iter: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut factors: Vec<(Var, u32)> = Vec::new();
        for (v, e) in iter {
            if e == 0 {
                continue;
            }
            match factors.iter_mut().find(|(w, _)| *w == v) {
                Some(slot) => slot.1 += e,
                None => factors.push((v, e)),
            }
        }
        factors.sort_by_key(|&(v, _)| v);
        Monomial { factors }
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.factors
            .iter()
            .find(|&&(w, _)| w == v)
            .map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { factors: out }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut j = 0;
        for &(v, e) in &self.factors {
            let mut d = 0;
            if j < other.factors.len() && other.factors[j].0 == v {
                d = other.factors[j].1;
                j += 1;
            } else if j < other.factors.len() && other.factors[j].0 < v {
                return None;
            }
            match e.cmp(&d) {
                Ordering::Less => return None,
                Ordering::Equal => {}
                Ordering::Greater => out.push((v, e - d)),
            }
        }
        if j < other.factors.len() {
            return None;
        }
        Some(Monomial { factors: out })
    }

    /// Splits off the factors whose variable satisfies `pred`.
    pub fn split(&self, pred: impl Fn(Var) -> bool) -> (Monomial, Monomial) {
        let (hit, rest): (Vec<_>, Vec<_>) = self.factors.iter().partition(|&&(v, _)| pred(v));
        (Monomial { factors: hit }, Monomial { factors: rest })
    }

    pub fn without(&self, v: Var) -> Monomial {
        self.split(|w| w == v).1
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (x, y) in self.factors.iter().zip(&other.factors) {
                if x.0 != y.0 {
                    // The monomial containing the earlier variable is larger.
                    return if x.0 < y.0 {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    };
                }
                if x.1 != y.1 {
                    return x.1.cmp(&y.1);
                }
            }
            self.factors.len().cmp(&other.factors.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}
