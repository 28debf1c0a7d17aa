//! Dense univariate polynomials over a [`Field`], low degree first.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    c: Vec<Fe>,
}

impl Poly {
    pub fn new(field: Field, mut c: Vec<Fe>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { field, c }
    }

    pub fn from_ints(field: &Field, c: &[i64]) -> Poly {
        let c = c.iter().map(|&v| field.from_int(v)).collect();
        Poly::new(field.clone(), c)
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), c: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Fe::ONE)
    }

    pub fn constant(field: &Field, v: Fe) -> Poly {
        Poly::new(field.clone(), vec![v])
    }

    pub fn x(field: &Field) -> Poly {
        Poly::new(field.clone(), vec![Fe::ZERO, Fe::ONE])
    }

    /// `x - a`.
    pub fn linear(field: &Field, a: Fe) -> Poly {
        Poly::new(field.clone(), vec![field.neg(a), Fe::ONE])
    }

    pub fn monomial(field: &Field, c: Fe, n: usize) -> Poly {
        let mut v = vec![Fe::ZERO; n + 1];
        v[n] = c;
        Poly::new(field.clone(), v)
    }

    pub fn from_roots(field: &Field, roots: &[Fe]) -> Poly {
        roots.iter().fold(Poly::one(field), |acc, &r| acc.mul(&Poly::linear(field, r)))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0] == Fe::ONE
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with `-1` for zero.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> Fe {
        self.c.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == Fe::ONE
    }

    /// Lowest index with a nonzero coefficient, i.e. the order of vanishing at 0.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    fn with(&self, c: Vec<Fe>) -> Poly {
        Poly::new(self.field.clone(), c)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        self.with((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        self.with((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Poly {
        self.with(self.c.iter().map(|&x| self.field.neg(x)).collect())
    }

    pub fn scale(&self, s: Fe) -> Poly {
        self.with(self.c.iter().map(|&x| self.field.mul(x, s)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![Fe::ZERO; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        self.with(out)
    }

    /// Multiplication by `x^n`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Fe::ZERO; n];
        v.extend_from_slice(&self.c);
        self.with(v)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut r = Poly::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        if self.c.len() < d.c.len() {
            return Ok((Poly::zero(f), self.clone()));
        }
        let dd = d.c.len() - 1;
        let inv = f.inv(d.lc())?;
        let mut r = self.c.clone();
        let mut q = vec![Fe::ZERO; self.c.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = r[top];
            if c.is_zero() {
                continue;
            }
            let t = f.mul(c, inv);
            q[top - dd] = t;
            for i in 0..=dd {
                let idx = top - dd + i;
                r[idx] = f.sub(r[idx], f.mul(t, d.c[i]));
            }
        }
        r.truncate(dd);
        Ok((self.with(q), self.with(r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    /// Quotient of a division known to be exact.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::InvariantViolation("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, n: &Poly) -> bool {
        !self.is_zero() && n.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.field.inv(self.lc()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g` monic.
    pub fn xgcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            r0 = r1;
            r1 = r;
            let s = s0.sub(&q.mul(&s1));
            s0 = s1;
            s1 = s;
            let t = t0.sub(&q.mul(&t1));
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lc()).expect("nonzero");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// Inverse modulo `m`, when it exists.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).ok()?.xgcd(m);
        g.is_one().then(|| s.rem(m).expect("nonzero modulus"))
    }

    pub fn mulmod(&self, o: &Poly, m: &Poly) -> Poly {
        self.mul(o).rem(m).expect("nonzero modulus")
    }

    pub fn powmod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut r = Poly::one(&self.field).rem(m).expect("nonzero modulus");
        let mut b = self.rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                r = r.mulmod(&b, m);
            }
            e >>= 1;
            if e > 0 {
                b = b.mulmod(&b, m);
            }
        }
        r
    }

    pub fn eval(&self, x: Fe) -> Fe {
        let f = &self.field;
        self.c.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Evaluation at a point of an extension field with the same characteristic;
    /// coefficients must lie in the prime field unless the fields coincide.
    pub fn eval_in(&self, ext: &Field, x: Fe) -> Fe {
        if *ext == self.field {
            return self.eval(x);
        }
        self.c.iter().rev().fold(Fe::ZERO, |acc, &c| ext.add(ext.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        self.with(self.c.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.from_int(i as i64), c)).collect())
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.c.iter().rev().fold(Poly::zero(&self.field), |acc, &c| acc.mul(inner).add(&Poly::constant(&self.field, c)))
    }

    /// `x^deg · self(1/x)`, padded to formal degree `n`.
    pub fn reverse(&self, n: usize) -> Poly {
        let mut v = self.c.clone();
        v.resize(n + 1, Fe::ZERO);
        v.reverse();
        self.with(v)
    }

    /// Same coefficients read in another field of the same characteristic.
    pub fn lift(&self, ext: &Field) -> Result<Poly> {
        if *ext == self.field {
            return Ok(self.clone());
        }
        if !self.field.same_characteristic(ext)
            || !(self.field.is_prime_field() || self.c.iter().all(|c| self.field.to_prime(*c).is_some()))
        {
            return Err(Error::FieldMismatch(format!("{} -> {}", self.field, ext)));
        }
        if !ext.is_prime_field() || self.c.iter().all(|c| c.code() < ext.characteristic()) {
            return Ok(Poly::new(ext.clone(), self.c.clone()));
        }
        Err(Error::FieldMismatch(format!("{} -> {}", self.field, ext)))
    }

    /// The polynomial over the prime field, if all coefficients lie there.
    pub fn to_prime(&self) -> Result<Poly> {
        self.lift(&self.field.prime_field())
    }

    /// Coefficient-wise `p`-th root of a polynomial in `x^p`.
    fn pth_root(&self) -> Poly {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let e = f.order() / f.characteristic();
        let v = self.c.iter().step_by(p).map(|&c| f.pow(c, e)).collect();
        self.with(v)
    }

    fn frob_power(&self, m: &Poly) -> Poly {
        Poly::x(&self.field).powmod(self.field.order(), m)
    }

    /// Distinct roots in the coefficient field, sorted by code.
    pub fn roots(&self) -> Vec<Fe> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let f = self.monic();
        let xq = f.frob_power(&f);
        let g = f.gcd(&xq.sub(&Poly::x(&self.field)));
        let mut out: Vec<Fe> = equal_degree(&g, 1).into_iter().map(|l| self.field.neg(l.coeff(0))).collect();
        out.sort();
        out
    }

    /// Roots with multiplicities, sorted by root.
    pub fn roots_with_multiplicity(&self) -> Vec<(Fe, usize)> {
        let mut out = Vec::new();
        for r in self.roots() {
            let lin = Poly::linear(&self.field, r);
            let mut m = 0;
            let mut cur = self.clone();
            while let Ok((q, rem)) = cur.divrem(&lin) {
                if !rem.is_zero() {
                    break;
                }
                cur = q;
                m += 1;
            }
            out.push((r, m));
        }
        out
    }

    /// Roots by exhaustive evaluation; an oracle for small fields.
    pub fn roots_exhaustive(&self) -> Vec<Fe> {
        self.field.elements().filter(|&x| self.eval(x).is_zero()).collect()
    }

    /// Monic irreducible factors with multiplicities, sorted.
    pub fn factor(&self) -> Vec<(Poly, usize)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let mut irr = distinct_irreducibles(&self.monic());
        irr.sort();
        irr.dedup();
        irr.into_iter()
            .map(|pf| {
                let mut m = 0;
                let mut cur = self.clone();
                loop {
                    let (q, r) = cur.divrem(&pf).expect("nonzero");
                    if !r.is_zero() {
                        break;
                    }
                    cur = q;
                    m += 1;
                }
                (pf, m)
            })
            .collect()
    }

    pub fn is_irreducible(&self) -> bool {
        let fs = self.factor();
        fs.len() == 1 && fs[0].1 == 1
    }

    pub fn is_squarefree(&self) -> bool {
        self.factor().iter().all(|(_, m)| *m == 1)
    }

    /// Minimal polynomial over the prime field of `beta ∈ ext`.
    pub fn minimal_poly(ext: &Field, beta: Fe) -> Poly {
        let mut orbit = vec![beta];
        let mut cur = ext.frobenius(beta);
        while cur != beta {
            orbit.push(cur);
            cur = ext.frobenius(cur);
        }
        let prod = Poly::from_roots(ext, &orbit);
        prod.to_prime().expect("Frobenius-stable product has prime-field coefficients")
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = match f.signed(c) {
                Some(v) => v.to_string(),
                None => f.fmt_elem(c),
            };
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{}^{}", var, i),
            };
            let t = if i == 0 {
                cs
            } else if cs == "1" {
                mono
            } else if cs == "-1" {
                format!("-{}", mono)
            } else {
                format!("{}*{}", cs, mono)
            };
            terms.push(t);
        }
        let mut s = terms[0].clone();
        for t in &terms[1..] {
            if let Some(rest) = t.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(t);
            }
        }
        s
    }
}

/// Irreducible factors of `f` (monic), possibly with repeats.
fn distinct_irreducibles(f: &Poly) -> Vec<Poly> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let d = f.derivative();
    if d.is_zero() {
        return distinct_irreducibles(&f.pth_root().monic());
    }
    let g = f.gcd(&d);
    let s = f.div_exact(&g).expect("gcd divides");
    let mut out = distinct_degree(&s);
    out.extend(distinct_irreducibles(&g));
    out
}

/// Distinct-degree plus equal-degree factorization of a squarefree monic polynomial.
fn distinct_degree(s: &Poly) -> Vec<Poly> {
    let field = s.field().clone();
    let x = Poly::x(&field);
    let mut rest = s.clone();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 1usize;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.powmod(field.order(), &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree().unwrap_or(0) > 0 {
            out.extend(equal_degree(&g, d));
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest).expect("nonzero");
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(rest.monic());
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree `d`.
fn equal_degree(g: &Poly, d: usize) -> Vec<Poly> {
    let n = g.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![g.monic()];
    }
    let field = g.field().clone();
    let q = field.order();
    let half = (q - 1) / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
    let mut stack = vec![g.monic()];
    let mut out = Vec::new();
    while let Some(cur) = stack.pop() {
        let m = cur.degree().unwrap_or(0);
        if m == d {
            out.push(cur);
            continue;
        }
        loop {
            let len = (2 * d).min(m);
            let coeffs: Vec<Fe> = (0..len).map(|_| Fe(rng.gen_range(0..q))).collect();
            let t = Poly::new(field.clone(), coeffs);
            if t.is_constant() {
                continue;
            }
            // t^((q^d - 1)/2) = (t · t^q ··· t^(q^(d-1)))^((q-1)/2)
            let mut norm = t.rem(&cur).expect("nonzero");
            let mut conj = norm.clone();
            for _ in 1..d {
                conj = conj.powmod(q, &cur);
                norm = norm.mulmod(&conj, &cur);
            }
            let w = norm.powmod(half, &cur).sub(&Poly::one(&field));
            let s = cur.gcd(&w);
            let sd = s.degree().unwrap_or(0);
            if sd > 0 && sd < m {
                let other = cur.div_exact(&s).expect("gcd divides");
                stack.push(s);
                stack.push(other.monic());
                break;
            }
        }
    }
    out
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.len().cmp(&other.c.len()).then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("x"))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f7() -> Field {
        Field::prime(7).unwrap()
    }

    fn p(f: &Field, c: &[i64]) -> Poly {
        Poly::from_ints(f, c)
    }

    #[test]
    fn degree_of_product() {
        let f = f7();
        let a = p(&f, &[1, 2, 3]);
        let b = p(&f, &[4, 0, 0, 5]);
        assert_eq!(a.mul(&b).degree(), Some(5));
        assert!(Poly::zero(&f).degree().is_none());
    }

    #[test]
    fn deuring_roots_mod_7() {
        let f = f7();
        let phi = p(&f, &[1, 2, 2, 1]);
        let r: Vec<u64> = phi.roots().iter().map(|x| x.code()).collect();
        assert_eq!(r, vec![2, 4, 6]);
        assert_eq!(phi.roots(), phi.roots_exhaustive());
    }

    #[test]
    fn factor_over_f7() {
        let f = f7();
        // (x^2+1)^2 (x-3)^7 (x+1)
        let a = p(&f, &[1, 0, 1]).pow(2).mul(&p(&f, &[-3, 1]).pow(7)).mul(&p(&f, &[1, 1]));
        let fs = a.factor();
        assert_eq!(fs.len(), 3);
        assert!(fs.contains(&(p(&f, &[1, 0, 1]), 2)));
        assert!(fs.contains(&(p(&f, &[4, 1]), 7)));
        assert!(fs.contains(&(p(&f, &[1, 1]), 1)));
    }

    #[test]
    fn roots_in_extension() {
        let f49 = Field::new(7, 2).unwrap();
        let a = p(&f49, &[1, 0, 1]);
        let r = a.roots();
        assert_eq!(r.len(), 2);
        assert_eq!(r, a.roots_exhaustive());
    }

    #[test]
    fn minimal_polynomial_of_i() {
        let f49 = Field::new(7, 2).unwrap();
        let i = f49.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(Poly::minimal_poly(&f49, i), p(&f7(), &[1, 0, 1]));
        assert_eq!(Poly::minimal_poly(&f49, Fe(3)), p(&f7(), &[-3, 1]));
    }

    #[test]
    fn compose_and_derivative() {
        let f = f7();
        let a = p(&f, &[0, 0, 1]);
        let b = p(&f, &[1, 1]);
        assert_eq!(a.compose(&b), p(&f, &[1, 2, 1]));
        assert_eq!(p(&f, &[0, 0, 0, 0, 0, 0, 0, 1]).derivative(), Poly::zero(&f));
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(0i64..11, 0..=max_deg + 1)
    }

    proptest! {
        #[test]
        fn divrem_identity(a in arb_poly(8), b in arb_poly(5)) {
            let f = Field::prime(11).unwrap();
            let a = p(&f, &a);
            let b = p(&f, &b);
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b).unwrap();
            prop_assert_eq!(q.mul(&b).add(&r), a);
            prop_assert!(r.deg() < b.deg());
        }

        #[test]
        fn roots_match_exhaustive(a in arb_poly(9)) {
            let f = Field::new(5, 2).unwrap();
            let a = p(&f, &a);
            prop_assume!(!a.is_zero());
            prop_assert_eq!(a.roots(), a.roots_exhaustive());
        }

        #[test]
        fn factorization_multiplies_back(a in arb_poly(10)) {
            let f = Field::prime(3).unwrap();
            let a = p(&f, &a);
            prop_assume!(a.deg() > 0);
            let prod = a.factor().iter().fold(Poly::one(&f), |acc, (q, m)| acc.mul(&q.pow(*m as u64)));
            prop_assert_eq!(prod, a.monic());
            for (q, _) in a.factor() {
                prop_assert!(q.roots().is_empty() || q.deg() == 1);
            }
        }

        #[test]
        fn gcd_divides_both(a in arb_poly(6), b in arb_poly(6), c in arb_poly(3)) {
            let f = Field::prime(7).unwrap();
            let c = p(&f, &c);
            let a = p(&f, &a).mul(&c);
            let b = p(&f, &b).mul(&c);
            let g = a.gcd(&b);
            prop_assume!(!g.is_zero());
            prop_assert!(g.divides(&a) && g.divides(&b));
            if !c.is_zero() { prop_assert!(c.monic().divides(&g)); }
        }
    }
}
