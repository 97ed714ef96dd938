//! Sparse polynomials over the rationals or a prime field, ordered by
//! degree reverse lexicographic order with variable 0 the smallest.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Maximum number of variables a monomial can carry.
pub const MAX_VARS: usize = 20;

/// Arithmetic in a coefficient field. The context carries parameters such
/// as the modulus so elements can stay plain values.
pub trait Coefficients: Clone + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn render(&self, a: &Self::Elem) -> String;
}

/// Integers modulo an odd prime below `2^32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!(
            p > 2 && p < 1 << 32,
            "modulus must be an odd prime below 2^32"
        );
        Fp { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Coefficients for Fp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        let (mut b, mut e, mut r) = (*a, self.p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }
    fn render(&self, a: &u64) -> String {
        // symmetric representative reads better
        if *a > self.p / 2 {
            format!("-{}", self.p - a)
        } else {
            a.to_string()
        }
    }
}

/// The rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Qq;

impl Coefficients for Qq {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

/// An exponent vector with cached total degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    deg: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            exps: [0; MAX_VARS],
            deg: 0,
        }
    }

    pub fn var(v: usize) -> Self {
        Self::from_exponents(&[(v, 1)])
    }

    /// Panics on a variable index at or beyond [`MAX_VARS`].
    pub fn from_exponents(pairs: &[(usize, u16)]) -> Self {
        let mut m = Self::one();
        for &(v, e) in pairs {
            assert!(v < MAX_VARS, "variable {v} out of range");
            m.exps[v] += e;
            m.deg += e as u32;
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exponent(&self, v: usize) -> u16 {
        self.exps[v]
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for v in 0..MAX_VARS {
            m.exps[v] += other.exps[v];
        }
        m.deg += other.deg;
        m
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && (0..MAX_VARS).all(|v| self.exps[v] <= other.exps[v])
    }

    /// `other / self`; assumes divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut m = *other;
        for v in 0..MAX_VARS {
            m.exps[v] -= self.exps[v];
        }
        m.deg -= self.deg;
        m
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut m = Self::one();
        for v in 0..MAX_VARS {
            m.exps[v] = self.exps[v].max(other.exps[v]);
            m.deg += m.exps[v] as u32;
        }
        m
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|v| self.exps[v] == 0 || other.exps[v] == 0)
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".into();
        }
        (0..MAX_VARS)
            .filter(|&v| self.exps[v] > 0)
            .map(|v| {
                let name = names.get(v).cloned().unwrap_or_else(|| format!("v{v}"));
                if self.exps[v] == 1 {
                    name
                } else {
                    format!("{name}^{}", self.exps[v])
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Ord for Monomial {
    /// Degree first; ties go to the monomial with the smaller exponent at
    /// the lowest-index variable where they differ.
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            for v in 0..MAX_VARS {
                if self.exps[v] != other.exps[v] {
                    return other.exps[v].cmp(&self.exps[v]);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Terms strictly decreasing in the monomial order, no zero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<E> {
    terms: Vec<(Monomial, E)>,
}

impl<E: Clone + PartialEq + fmt::Debug> Polynomial<E> {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn from_terms<F: Coefficients<Elem = E>>(
        f: &F,
        terms: impl IntoIterator<Item = (Monomial, E)>,
    ) -> Self {
        let mut v: Vec<(Monomial, E)> = terms.into_iter().collect();
        v.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, E)> = Vec::with_capacity(v.len());
        for (m, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = f.add(&last.1, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| !f.is_zero(&t.1));
        Polynomial { terms: out }
    }

    pub fn constant<F: Coefficients<Elem = E>>(f: &F, c: E) -> Self {
        Self::from_terms(f, [(Monomial::one(), c)])
    }

    pub fn terms(&self) -> &[(Monomial, E)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coefficient(&self) -> Option<&E> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Remove and return the leading term.
    pub fn pop_lead(&mut self) -> Option<(Monomial, E)> {
        if self.terms.is_empty() {
            None
        } else {
            Some(self.terms.remove(0))
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monic<F: Coefficients<Elem = E>>(&self, f: &F) -> Self {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) => {
                let inv = f.inv(lc);
                Polynomial {
                    terms: self
                        .terms
                        .iter()
                        .map(|(m, c)| (*m, f.mul(c, &inv)))
                        .collect(),
                }
            }
        }
    }

    pub fn add<F: Coefficients<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        self.sub_scaled(f, &f.neg(&f.one()), &Monomial::one(), other)
    }

    /// `self - c * m * other`.
    pub fn sub_scaled<F: Coefficients<Elem = E>>(
        &self,
        f: &F,
        c: &E,
        m: &Monomial,
        other: &Self,
    ) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (0, 0);
        let shifted = |k: usize| other.terms[k].0.mul(m);
        while a < self.terms.len() || b < other.terms.len() {
            let ord = match (self.terms.get(a), b < other.terms.len()) {
                (Some(t), true) => t.0.cmp(&shifted(b)),
                (Some(_), false) => Ordering::Greater,
                (None, _) => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[a].clone());
                    a += 1;
                }
                Ordering::Less => {
                    out.push((shifted(b), f.neg(&f.mul(c, &other.terms[b].1))));
                    b += 1;
                }
                Ordering::Equal => {
                    let v = f.sub(&self.terms[a].1, &f.mul(c, &other.terms[b].1));
                    if !f.is_zero(&v) {
                        out.push((self.terms[a].0, v));
                    }
                    a += 1;
                    b += 1;
                }
            }
        }
        Polynomial { terms: out }
    }

    pub fn mul_term<F: Coefficients<Elem = E>>(&self, f: &F, c: &E, m: &Monomial) -> Self {
        if f.is_zero(c) {
            return Self::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(t, d)| (t.mul(m), f.mul(c, d)))
                .collect(),
        }
    }

    pub fn mul<F: Coefficients<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut acc = Self::zero();
        for (m, c) in &other.terms {
            acc = acc.sub_scaled(f, &f.neg(c), m, self);
        }
        acc
    }

    /// Largest variable index used, plus one.
    pub fn var_span(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|(m, _)| (0..MAX_VARS).filter(move |&v| m.exponent(v) > 0))
            .max()
            .map_or(0, |v| v + 1)
    }

    pub fn render<F: Coefficients<Elem = E>>(&self, f: &F, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let one = f.one();
        let minus_one = f.neg(&one);
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if *c == minus_one && !m.is_one() {
                (true, None)
            } else if *c == one && !m.is_one() {
                (false, None)
            } else {
                let s = f.render(c);
                match s.strip_prefix('-') {
                    Some(rest) => (true, Some(rest.to_string())),
                    None => (false, Some(s)),
                }
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mag, m.is_one()) {
                (Some(s), true) => out.push_str(&s),
                (Some(s), false) => out.push_str(&format!("{s}*{}", m.render(names))),
                (None, _) => out.push_str(&m.render(names)),
            }
        }
        out
    }
}
