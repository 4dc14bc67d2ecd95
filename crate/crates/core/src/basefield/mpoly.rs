//! Sparse multivariate polynomials, used for homogeneous forms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use super::poly::Ring;
use crate::error::Result;

/// Exponent vectors map to nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<R: Ring> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, R>,
    zero: R,
}

impl<R: Ring> MPoly<R> {
    pub fn zero(nvars: usize, zero: R) -> Self {
        MPoly { nvars, terms: BTreeMap::new(), zero }
    }

    pub fn from_terms(nvars: usize, zero: R, terms: impl IntoIterator<Item = (Vec<u32>, R)>) -> Self {
        let mut p = Self::zero(nvars, zero);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn constant(nvars: usize, c: R) -> Self {
        let zero = c.zero_like();
        Self::from_terms(nvars, zero, [(vec![0; nvars], c)])
    }

    pub fn var(nvars: usize, i: usize, zero: R) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        let one = zero.one_like();
        Self::from_terms(nvars, zero, [(m, one)])
    }

    fn add_term(&mut self, m: Vec<u32>, c: R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(prev) => {
                let s = prev.add_ref(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *prev = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeff_zero(&self) -> &R {
        &self.zero
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &R)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> R {
        self.terms.get(m).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Degree in the variables `range`, if every term has the same one.
    pub fn homogeneous_degree_in(&self, range: std::ops::Range<usize>) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m[range.clone()].iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg_ref())).collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero(self.nvars, self.zero.clone());
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                let m = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                p.add_term(m, a.mul_ref(b));
            }
        }
        p
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::from_terms(self.nvars, self.zero.clone(), self.terms.iter().map(|(m, a)| (m.clone(), a.mul_ref(c))))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, self.zero.one_like());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn map<S: Ring>(&self, zero: S, f: impl Fn(&R) -> S) -> MPoly<S> {
        MPoly::from_terms(self.nvars, zero, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn try_map<S: Ring>(&self, zero: S, f: impl Fn(&R) -> Result<S>) -> Result<MPoly<S>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), f(c)?));
        }
        Ok(MPoly::from_terms(self.nvars, zero, terms))
    }

    /// Substitute `subs[i]` for variable `i`.
    pub fn compose(&self, subs: &[MPoly<R>]) -> MPoly<R> {
        assert_eq!(subs.len(), self.nvars, "substitution arity");
        let nv = subs.first().map_or(0, |s| s.nvars);
        let mut out = MPoly::zero(nv, self.zero.clone());
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(nv, c.clone());
            for (s, &k) in subs.iter().zip(m) {
                t = t.mul(&s.pow(k));
            }
            out = out.add(&t);
        }
        out
    }

    /// Evaluate in any algebra `S` into which the coefficients embed.
    pub fn eval<S>(&self, point: &[S], zero: S, embed: impl Fn(&R) -> S) -> S
    where
        S: Clone,
        for<'a> &'a S: Add<&'a S, Output = S> + Mul<&'a S, Output = S>,
    {
        assert_eq!(point.len(), self.nvars, "point arity");
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut t = embed(c);
            for (x, &k) in point.iter().zip(m) {
                for _ in 0..k {
                    t = &t * x;
                }
            }
            acc = &acc + &t;
        }
        acc
    }
}

impl<R: Ring + fmt::Display> MPoly<R> {
    /// Text in the shared grammar with the given variable names.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // highest total degree first, then lexicographically largest
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (i, m) in keys.into_iter().enumerate() {
            let c = &self.terms[m];
            let mono: Vec<String> = m
                .iter()
                .zip(names)
                .filter(|(k, _)| **k > 0)
                .map(|(k, n)| if *k == 1 { n.to_string() } else { format!("{n}^{k}") })
                .collect();
            let mut ctext = c.to_string();
            let compound = ctext[1..].contains([' ', '+']) || ctext[1..].contains(" - ");
            let negative = !compound && ctext.starts_with('-');
            if negative {
                ctext.remove(0);
            }
            if compound {
                ctext = format!("({ctext})");
            }
            let body = match (mono.is_empty(), ctext.as_str()) {
                (true, _) => ctext.clone(),
                (false, "1") => mono.join("*"),
                (false, _) => format!("{ctext}*{}", mono.join("*")),
            };
            match (i, negative) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(&body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        out
    }
}
