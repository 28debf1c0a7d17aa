//! Reduced rational functions, doubling as self-maps of the projective line.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::place::{Divisor, Place};
use crate::poly::Poly;

/// A point of `P^1` over some field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Point {
    Finite(Fe),
    Infinity,
}

impl Point {
    pub fn is_infinite(self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn finite(self) -> Option<Fe> {
        match self {
            Point::Finite(a) => Some(a),
            Point::Infinity => None,
        }
    }

    pub fn display(self, field: &Field) -> String {
        match self {
            Point::Infinity => "inf".into(),
            Point::Finite(a) => match field.signed(a) {
                Some(v) => v.to_string(),
                None => field.fmt_elem(a),
            },
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.field() != den.field() {
            return Err(Error::FieldMismatch("numerator and denominator".into()));
        }
        let field = num.field().clone();
        if num.is_zero() {
            return Ok(RatFunc { num, den: Poly::one(&field) });
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let inv = field.inv(den.lc())?;
        Ok(RatFunc { num: num.scale(inv), den: den.scale(inv) })
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let one = Poly::one(p.field());
        RatFunc { num: p, den: one }
    }

    pub fn from_ints(field: &Field, num: &[i64], den: &[i64]) -> Result<RatFunc> {
        RatFunc::new(Poly::from_ints(field, num), Poly::from_ints(field, den))
    }

    pub fn zero(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::zero(field))
    }

    pub fn one(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::one(field))
    }

    pub fn constant(field: &Field, c: Fe) -> RatFunc {
        RatFunc::from_poly(Poly::constant(field, c))
    }

    pub fn int(field: &Field, c: i64) -> RatFunc {
        RatFunc::constant(field, field.from_int(c))
    }

    /// The identity map `x`.
    pub fn x(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::x(field))
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// Degree as a map of `P^1`.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone()).expect("nonzero");
        }
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        RatFunc::new(n, self.den.mul(&o.den)).expect("nonzero")
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero")
    }

    pub fn scale(&self, c: Fe) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone()).expect("nonzero")
    }

    pub fn scale_int(&self, c: i64) -> RatFunc {
        self.scale(self.field().from_int(c))
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(RatFunc { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn derivative(&self) -> RatFunc {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        RatFunc::new(n, self.den.mul(&self.den)).expect("nonzero")
    }

    /// `self ∘ inner`; panics only when a constant `inner` lands on a pole of `self`.
    pub fn compose(&self, inner: &RatFunc) -> RatFunc {
        self.try_compose(inner).expect("composition with a constant landing on a pole")
    }

    /// `self ∘ inner`, computed by homogenizing numerator and denominator to the map degree.
    pub fn try_compose(&self, inner: &RatFunc) -> Result<RatFunc> {
        let d = self.degree();
        let f = self.field();
        let (u, v) = (&inner.num, &inner.den);
        let mut upow = vec![Poly::one(f)];
        let mut vpow = vec![Poly::one(f)];
        for i in 1..=d {
            upow.push(upow[i - 1].mul(u));
            vpow.push(vpow[i - 1].mul(v));
        }
        let homog = |p: &Poly| {
            p.coeffs().iter().enumerate().fold(Poly::zero(f), |acc, (i, &c)| {
                if c.is_zero() {
                    acc
                } else {
                    acc.add(&upow[i].mul(&vpow[d - i]).scale(c))
                }
            })
        };
        let den = homog(&self.den);
        if den.is_zero() {
            return Err(Error::Degenerate(format!("{} composed with the constant {} is infinite", self, inner)));
        }
        RatFunc::new(homog(&self.num), den)
    }

    pub fn compose_poly(&self, inner: &Poly) -> RatFunc {
        self.compose(&RatFunc::from_poly(inner.clone()))
    }

    /// `self(1/x)`.
    pub fn at_reciprocal(&self) -> RatFunc {
        let f = self.field();
        let inv = RatFunc::new(Poly::one(f), Poly::x(f)).expect("nonzero");
        self.compose(&inv)
    }

    pub fn eval(&self, pt: Point) -> Point {
        self.eval_in(self.field(), pt)
    }

    /// Evaluation at a point of a same-characteristic extension (prime-field coefficients).
    pub fn eval_in(&self, ext: &Field, pt: Point) -> Point {
        match pt {
            Point::Finite(a) => {
                let d = self.den.eval_in(ext, a);
                if d.is_zero() {
                    Point::Infinity
                } else {
                    let n = self.num.eval_in(ext, a);
                    Point::Finite(ext.div(n, d).expect("nonzero"))
                }
            }
            Point::Infinity => {
                let (dn, dd) = (self.num.deg(), self.den.deg());
                if self.num.is_zero() || dn < dd {
                    Point::Finite(Fe::ZERO)
                } else if dn > dd {
                    Point::Infinity
                } else {
                    Point::Finite(ext.div(self.num.lc(), self.den.lc()).expect("nonzero"))
                }
            }
        }
    }

    pub fn lift(&self, ext: &Field) -> Result<RatFunc> {
        Ok(RatFunc { num: self.num.lift(ext)?, den: self.den.lift(ext)? })
    }

    pub fn ord_at(&self, place: &Place) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(match place {
            Place::Infinity => self.den.deg() - self.num.deg(),
            Place::Finite(pi) => valuation(&self.num, pi) as i64 - valuation(&self.den, pi) as i64,
        })
    }

    pub fn divisor(&self) -> Result<Divisor> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let mut d = Divisor::zero();
        for (pi, m) in self.num.factor() {
            d.add_at(Place::Finite(pi), m as i64);
        }
        for (pi, m) in self.den.factor() {
            d.add_at(Place::Finite(pi), -(m as i64));
        }
        d.add_at(Place::Infinity, self.den.deg() - self.num.deg());
        Ok(d)
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.fmt_var(var);
        }
        let wrap = |p: &Poly| {
            let s = p.fmt_var(var);
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({})", s)
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

/// Multiplicity of the irreducible `pi` in `a` (zero for `a = 0`).
pub fn valuation(a: &Poly, pi: &Poly) -> usize {
    if a.is_zero() {
        return 0;
    }
    let mut m = 0;
    let mut cur = a.clone();
    loop {
        let (q, r) = cur.divrem(pi).expect("nonzero place");
        if !r.is_zero() {
            return m;
        }
        cur = q;
        m += 1;
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("x"))
    }
}

impl fmt::Display for RatFunc {
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

    fn rf(f: &Field, n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::from_ints(f, n, d).unwrap()
    }

    #[test]
    fn reduced_with_monic_denominator() {
        let f = f7();
        let r = rf(&f, &[2, 2], &[3, 6, 3]);
        assert_eq!(r.den(), &Poly::from_ints(&f, &[1, 1]));
        assert_eq!(r.num(), &Poly::from_ints(&f, &[3]));
        assert!(RatFunc::from_ints(&f, &[1], &[0]).is_err());
    }

    #[test]
    fn compose_with_identity() {
        let f = f7();
        let g = rf(&f, &[0, 4], &[1, 2, 1]);
        assert_eq!(RatFunc::x(&f).compose(&g), g);
        assert_eq!(g.compose(&RatFunc::x(&f)), g);
    }

    #[test]
    fn atkin_lehner_composition() {
        for p in [5u64, 7, 11, 13] {
            let f = Field::prime(p).unwrap();
            let s6 = rf(&f, &[8, -8], &[8, 1]);
            let s18 = rf(&f, &[2, -2], &[2, 1]);
            let g = rf(&f, &[0, 0, 0, 1], &[1]);
            let h = s6.compose(&g).compose(&s18);
            assert_eq!(h, rf(&f, &[0, 4, -2, 1], &[1, 1, 1]), "p = {}", p);
            assert_eq!(s18.compose(&s18), RatFunc::x(&f));
            assert_eq!(h.degree(), 3);
        }
    }

    #[test]
    fn orders_and_divisor_of_g() {
        let f = f7();
        let g = rf(&f, &[0, 4], &[1, 2, 1]);
        let t = Place::Finite(Poly::x(&f));
        let tp1 = Place::Finite(Poly::from_ints(&f, &[1, 1]));
        assert_eq!(g.ord_at(&t).unwrap(), 1);
        assert_eq!(g.ord_at(&tp1).unwrap(), -2);
        assert_eq!(g.ord_at(&Place::Infinity).unwrap(), 1);
        assert_eq!(g.divisor().unwrap().degree(), 0);
        assert!(RatFunc::zero(&f).divisor().is_err());
    }

    #[test]
    fn divisor_of_deuring_mod_7() {
        let f = f7();
        let phi = rf(&f, &[1, 2, 2, 1], &[1]);
        let d = phi.divisor().unwrap();
        for a in [2, 4, 6] {
            assert_eq!(d.get(&Place::rational(&f, f.from_int(a))), 1);
        }
        assert_eq!(d.get(&Place::Infinity), -3);
        assert_eq!(d.support().len(), 4);
    }

    #[test]
    fn evaluation_at_infinity() {
        let f = f7();
        let g = rf(&f, &[0, 4], &[1, 2, 1]);
        assert_eq!(g.eval(Point::Infinity), Point::Finite(Fe::ZERO));
        assert_eq!(g.eval(Point::Finite(f.from_int(-1))), Point::Infinity);
        let h = rf(&f, &[0, 0, 1], &[1]);
        assert_eq!(h.eval(Point::Infinity), Point::Infinity);
        let m = rf(&f, &[1, 3], &[2, 1]);
        assert_eq!(m.eval(Point::Infinity), Point::Finite(f.from_int(3)));
    }

    fn arb_rf() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
        (prop::collection::vec(0i64..11, 1..4), prop::collection::vec(0i64..11, 1..4))
    }

    proptest! {
        #[test]
        fn compose_is_associative(a in arb_rf(), b in arb_rf(), c in arb_rf()) {
            let f = Field::prime(11).unwrap();
            let mk = |(n, d): (Vec<i64>, Vec<i64>)| RatFunc::from_ints(&f, &n, &d);
            let (a, b, c) = match (mk(a), mk(b), mk(c)) {
                (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                _ => return Ok(()),
            };
            prop_assume!(!b.is_constant() && !c.is_constant());
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
            if !a.is_constant() && !b.is_constant() {
                prop_assert_eq!(a.compose(&b).degree(), a.degree() * b.degree());
            }
        }

        #[test]
        fn divisor_degree_is_zero(n in prop::collection::vec(0i64..7, 1..7), d in prop::collection::vec(0i64..7, 1..7)) {
            let f = Field::prime(7).unwrap();
            let r = match RatFunc::from_ints(&f, &n, &d) { Ok(r) => r, Err(_) => return Ok(()) };
            prop_assume!(!r.is_zero());
            prop_assert_eq!(r.divisor().unwrap().degree(), 0);
        }

        #[test]
        fn derivative_is_a_derivation(a in arb_rf(), b in arb_rf()) {
            let f = Field::prime(11).unwrap();
            let (a, b) = match (RatFunc::from_ints(&f, &a.0, &a.1), RatFunc::from_ints(&f, &b.0, &b.1)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => return Ok(()),
            };
            let lhs = a.mul(&b).derivative();
            let rhs = a.derivative().mul(&b).add(&a.mul(&b.derivative()));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
