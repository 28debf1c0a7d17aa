//! Bivariate polynomials in `a, b`, resultants and curves of correspondence.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::maps::check_map;
use crate::poly::Poly;
use crate::ratfunc::{Point, RatFunc};

/// `Σ rows[i](b) · a^i`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    field: Field,
    rows: Vec<Poly>,
}

impl BiPoly {
    pub fn new(field: &Field, mut rows: Vec<Poly>) -> BiPoly {
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        BiPoly { field: field.clone(), rows }
    }

    pub fn zero(field: &Field) -> BiPoly {
        BiPoly::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> BiPoly {
        BiPoly::new(field, vec![Poly::one(field)])
    }

    pub fn var_a(field: &Field) -> BiPoly {
        BiPoly::new(field, vec![Poly::zero(field), Poly::one(field)])
    }

    pub fn var_b(field: &Field) -> BiPoly {
        BiPoly::new(field, vec![Poly::x(field)])
    }

    /// A polynomial in `a` alone.
    pub fn from_poly_a(p: &Poly) -> BiPoly {
        let f = p.field();
        BiPoly::new(f, p.coeffs().iter().map(|&c| Poly::constant(f, c)).collect())
    }

    /// A polynomial in `b` alone.
    pub fn from_poly_b(p: &Poly) -> BiPoly {
        BiPoly::new(p.field(), vec![p.clone()])
    }

    /// Terms `(i, j, c)` meaning `c · a^i b^j`.
    pub fn from_terms(field: &Field, terms: &[(usize, usize, i64)]) -> BiPoly {
        let mut out = BiPoly::zero(field);
        for &(i, j, c) in terms {
            let row = Poly::monomial(field, field.from_int(c), j);
            let mut rows = vec![Poly::zero(field); i + 1];
            rows[i] = row;
            out = out.add(&BiPoly::new(field, rows));
        }
        out
    }

    /// Nested coefficient lists: `rows[i][j]` is the coefficient of `a^i b^j`.
    pub fn from_nested(field: &Field, rows: &[Vec<i64>]) -> BiPoly {
        BiPoly::new(field, rows.iter().map(|r| Poly::from_ints(field, r)).collect())
    }

    pub fn to_nested(&self) -> Vec<Vec<u64>> {
        self.rows.iter().map(|r| r.coeffs().iter().map(|c| c.code()).collect()).collect()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> &[Poly] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn coeff(&self, i: usize, j: usize) -> Fe {
        self.rows.get(i).map(|r| r.coeff(j)).unwrap_or(Fe::ZERO)
    }

    pub fn deg_a(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn deg_b(&self) -> Option<usize> {
        self.rows.iter().filter_map(|r| r.degree()).max()
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.rows.iter().enumerate().filter_map(|(i, r)| r.degree().map(|d| d + i)).max()
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let n = self.rows.len().max(o.rows.len());
        let z = Poly::zero(&self.field);
        let rows = (0..n).map(|i| self.rows.get(i).unwrap_or(&z).add(o.rows.get(i).unwrap_or(&z))).collect();
        BiPoly::new(&self.field, rows)
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly::new(&self.field, self.rows.iter().map(|r| r.neg()).collect())
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: Fe) -> BiPoly {
        BiPoly::new(&self.field, self.rows.iter().map(|r| r.scale(c)).collect())
    }

    /// Multiplication by a polynomial in `b`.
    pub fn mul_b(&self, p: &Poly) -> BiPoly {
        BiPoly::new(&self.field, self.rows.iter().map(|r| r.mul(p)).collect())
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        if self.is_zero() || o.is_zero() {
            return BiPoly::zero(&self.field);
        }
        let mut rows = vec![Poly::zero(&self.field); self.rows.len() + o.rows.len() - 1];
        for (i, x) in self.rows.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.rows.iter().enumerate() {
                rows[i + j] = rows[i + j].add(&x.mul(y));
            }
        }
        BiPoly::new(&self.field, rows)
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        (0..e).fold(BiPoly::one(&self.field), |acc, _| acc.mul(self))
    }

    pub fn partial_a(&self) -> BiPoly {
        let f = &self.field;
        let rows = self.rows.iter().enumerate().skip(1).map(|(i, r)| r.scale(f.from_int(i as i64))).collect();
        BiPoly::new(f, rows)
    }

    pub fn partial_b(&self) -> BiPoly {
        BiPoly::new(&self.field, self.rows.iter().map(|r| r.derivative()).collect())
    }

    /// Exchange the roles of `a` and `b`.
    pub fn swap(&self) -> BiPoly {
        let f = &self.field;
        let db = self.deg_b().map_or(0, |d| d + 1);
        let rows =
            (0..db).map(|j| Poly::new(f.clone(), (0..self.rows.len()).map(|i| self.coeff(i, j)).collect())).collect();
        BiPoly::new(f, rows)
    }

    pub fn eval_in(&self, ext: &Field, a: Fe, b: Fe) -> Fe {
        self.rows.iter().rev().fold(Fe::ZERO, |acc, r| ext.add(ext.mul(acc, a), r.eval_in(ext, b)))
    }

    /// `C(a0, b)` as a polynomial in `b` over `ext`.
    pub fn eval_a(&self, ext: &Field, a0: Fe) -> Poly {
        let db = self.deg_b().map_or(0, |d| d + 1);
        let mut coeffs = vec![Fe::ZERO; db];
        let mut pw = Fe::ONE;
        for r in &self.rows {
            for (j, &c) in r.coeffs().iter().enumerate() {
                coeffs[j] = ext.add(coeffs[j], ext.mul(c, pw));
            }
            pw = ext.mul(pw, a0);
        }
        Poly::new(ext.clone(), coeffs)
    }

    /// `a^da · C(1/a, b)`.
    pub fn reverse_a(&self) -> BiPoly {
        let mut rows = self.rows.clone();
        rows.reverse();
        BiPoly::new(&self.field, rows)
    }

    /// `b^db · C(a, 1/b)`.
    pub fn reverse_b(&self) -> BiPoly {
        let db = self.deg_b().unwrap_or(0);
        BiPoly::new(&self.field, self.rows.iter().map(|r| r.reverse(db)).collect())
    }

    pub fn lift(&self, ext: &Field) -> Result<BiPoly> {
        let rows = self.rows.iter().map(|r| r.lift(ext)).collect::<Result<Vec<_>>>()?;
        Ok(BiPoly::new(ext, rows))
    }

    /// Leading monomial in lex order with `a` first.
    pub fn leading(&self) -> Option<(usize, usize)> {
        let i = self.deg_a()?;
        Some((i, self.rows[i].degree().expect("trimmed")))
    }

    /// Scaled so the leading monomial has coefficient 1.
    pub fn normalize(&self) -> BiPoly {
        match self.leading() {
            None => self.clone(),
            Some((i, j)) => self.scale(self.field.inv(self.coeff(i, j)).expect("nonzero")),
        }
    }

    /// Exact quotient in `F[a, b]`, if `d` divides `self`.
    pub fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        let (di, dj) = d.leading()?;
        let f = &self.field;
        let dinv = f.inv(d.coeff(di, dj)).ok()?;
        let mut r = self.clone();
        let mut q = BiPoly::zero(f);
        while let Some((ri, rj)) = r.leading() {
            if ri < di || rj < dj {
                return None;
            }
            let c = f.mul(r.coeff(ri, rj), dinv);
            let t = BiPoly::from_monomial(f, ri - di, rj - dj, c);
            q = q.add(&t);
            r = r.sub(&t.mul(d));
        }
        Some(q)
    }

    fn from_monomial(f: &Field, i: usize, j: usize, c: Fe) -> BiPoly {
        let mut rows = vec![Poly::zero(f); i + 1];
        rows[i] = Poly::monomial(f, c, j);
        BiPoly::new(f, rows)
    }

    /// Whether `self` divides `n` in `F[a, b]`.
    pub fn divides(&self, n: &BiPoly) -> bool {
        !self.is_zero() && n.div_exact(self).is_some()
    }

    /// Gcd of the coefficients in `F[b]` of the polynomial in `a`.
    pub fn content_a(&self) -> Poly {
        self.rows.iter().fold(Poly::zero(&self.field), |g, r| g.gcd(r))
    }

    pub fn primitive_a(&self) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_a();
        BiPoly::new(&self.field, self.rows.iter().map(|r| r.div_exact(&c).expect("content divides")).collect())
    }

    /// Pseudo-remainder as polynomials in `a` over `F[b]`.
    fn prem_a(&self, d: &BiPoly) -> BiPoly {
        let dd = d.rows.len() - 1;
        let lc = d.rows[dd].clone();
        let mut r = self.clone();
        while !r.is_zero() && r.rows.len() > dd {
            let top = r.rows.len() - 1;
            let c = r.rows[top].clone();
            let shifted = BiPoly::new(
                &self.field,
                (0..top - dd).map(|_| Poly::zero(&self.field)).chain(d.rows.iter().map(|x| x.mul(&c))).collect(),
            );
            r = r.mul_b(&lc).sub(&shifted);
        }
        r
    }

    /// Gcd in `F[a, b]` up to a scalar, by primitive remainder sequences.
    pub fn gcd(&self, o: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return o.normalize();
        }
        if o.is_zero() {
            return self.normalize();
        }
        let cont = self.content_a().gcd(&o.content_a());
        let (mut x, mut y) = (self.primitive_a(), o.primitive_a());
        if x.rows.len() < y.rows.len() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            if y.rows.len() == 1 {
                x = BiPoly::one(&self.field);
                break;
            }
            let r = x.prem_a(&y);
            x = y;
            y = r.primitive_a();
        }
        x.primitive_a().mul_b(&cont).normalize()
    }

    /// Numerator of `C(f1(A), f2(B))`, homogenized to the partial degrees of `C`.
    pub fn compose_maps(&self, f1: &RatFunc, f2: &RatFunc) -> BiPoly {
        let field = &self.field;
        let da = self.deg_a().unwrap_or(0);
        let db = self.deg_b().unwrap_or(0);
        let homog = |r: &RatFunc, deg: usize| -> Vec<Poly> {
            (0..=deg).map(|i| r.num().pow(i as u64).mul(&r.den().pow((deg - i) as u64))).collect()
        };
        let ha = homog(f1, da);
        let hb = homog(f2, db);
        let mut out = BiPoly::zero(field);
        for (i, row) in self.rows.iter().enumerate() {
            let inner =
                row.coeffs().iter().enumerate().fold(Poly::zero(field), |acc, (j, &c)| acc.add(&hb[j].scale(c)));
            out = out.add(&BiPoly::from_poly_a(&ha[i]).mul_b(&inner));
        }
        out
    }

    pub fn fmt_vars(&self, a: &str, b: &str) -> String {
        let f = &self.field;
        let mut terms = Vec::new();
        for i in (0..self.rows.len()).rev() {
            for (j, &c) in self.rows[i].coeffs().iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let mono: Vec<String> = [(a, i), (b, j)]
                    .iter()
                    .filter(|(_, e)| *e > 0)
                    .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{}^{}", v, e) })
                    .collect();
                let cs = f.signed(c).map(|v| v.to_string()).unwrap_or_else(|| f.fmt_elem(c));
                terms.push(match (mono.is_empty(), cs.as_str()) {
                    (true, _) => cs.clone(),
                    (false, "1") => mono.join("*"),
                    (false, "-1") => format!("-{}", mono.join("*")),
                    _ => format!("{}*{}", cs, mono.join("*")),
                });
            }
        }
        if terms.is_empty() {
            return "0".into();
        }
        let mut s = terms[0].clone();
        for t in &terms[1..] {
            match t.strip_prefix('-') {
                Some(rest) => {
                    s.push_str(" - ");
                    s.push_str(rest);
                }
                None => {
                    s.push_str(" + ");
                    s.push_str(t);
                }
            }
        }
        s
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_vars("a", "b"))
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_vars("a", "b"))
    }
}

/// Determinant over `F[a, b]` by fraction-free (Bareiss) elimination.
pub fn determinant(mut m: Vec<Vec<BiPoly>>, field: &Field) -> BiPoly {
    let n = m.len();
    if n == 0 {
        return BiPoly::one(field);
    }
    let mut sign = false;
    let mut prev = BiPoly::one(field);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return BiPoly::zero(field),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev).unwrap_or_else(|| {
                    if num.is_zero() {
                        BiPoly::zero(field)
                    } else {
                        panic!("Bareiss division is exact")
                    }
                });
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

/// Resultant in `t` of two polynomials given by their coefficients (low first) in `F[a, b]`.
pub fn resultant(p: &[BiPoly], q: &[BiPoly], field: &Field) -> BiPoly {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    let z = BiPoly::zero(field);
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![z.clone(); size];
        for (k, c) in p.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![z.clone(); size];
        for (k, c) in q.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    determinant(rows, field)
}

#[derive(Clone, Debug)]
pub struct Implicitization {
    /// Normalized squarefree defining polynomial of the curve.
    pub curve: BiPoly,
    /// The raw resultant.
    pub resultant: BiPoly,
    /// Degree of `t ↦ (g(t), h(t))` onto the curve; values above 1 mean a shared subcover.
    pub cover_degree: usize,
}

impl Implicitization {
    pub fn degenerate(&self) -> bool {
        self.cover_degree > 1
    }
}

/// The curve of `t ↦ (g(t), h(t))` as the squarefree part of `Res_t(N_g − a D_g, N_h − b D_h)`.
pub fn implicitize(g: &RatFunc, h: &RatFunc) -> Result<Implicitization> {
    check_map(g)?;
    check_map(h)?;
    let field = g.field().clone();
    let dg = g.degree();
    let dh = h.degree();
    let pa: Vec<BiPoly> = (0..=dg)
        .map(|i| {
            BiPoly::new(
                &field,
                vec![Poly::constant(&field, g.num().coeff(i)), Poly::constant(&field, field.neg(g.den().coeff(i)))],
            )
        })
        .collect();
    let pb: Vec<BiPoly> = (0..=dh)
        .map(|i| {
            BiPoly::new(&field, vec![Poly::new(field.clone(), vec![h.num().coeff(i), field.neg(h.den().coeff(i))])])
        })
        .collect();
    let res = resultant(&pa, &pb, &field);
    if res.is_zero() {
        return Err(Error::Degenerate("vanishing resultant".into()));
    }
    let g1 = res.gcd(&res.partial_a()).gcd(&res.partial_b());
    let curve = res.div_exact(&g1).ok_or_else(|| Error::InvariantViolation("squarefree part".into()))?.normalize();
    let cover_degree = match (res.deg_a(), curve.deg_a()) {
        (Some(r), Some(c)) if c > 0 => r / c,
        _ => 1,
    };
    Ok(Implicitization { curve, resultant: res.normalize(), cover_degree })
}

/// Points of `P^1 × P^1` rational over `ext` where `C` and both partials vanish.
pub fn singular_points(c: &BiPoly, ext: &Field, guard: u64) -> Result<Vec<(Point, Point)>> {
    if ext.order() > guard {
        return Err(Error::guard("singular point search field size", ext.order(), guard));
    }
    let c = c.lift(ext)?;
    let mut out = Vec::new();
    let charts = [
        (c.clone(), false, false),
        (c.reverse_a(), true, false),
        (c.reverse_b(), false, true),
        (c.reverse_a().reverse_b(), true, true),
    ];
    for (chart, a_inf, b_inf) in charts {
        let (ca, cb) = (chart.partial_a(), chart.partial_b());
        let a_values: Vec<Fe> = if a_inf { vec![Fe::ZERO] } else { ext.elements().collect() };
        for a0 in a_values {
            let g = chart.eval_a(ext, a0).gcd(&ca.eval_a(ext, a0)).gcd(&cb.eval_a(ext, a0));
            let bs: Vec<Fe> = if g.is_zero() {
                ext.elements().collect()
            } else if b_inf {
                if g.eval(Fe::ZERO).is_zero() {
                    vec![Fe::ZERO]
                } else {
                    vec![]
                }
            } else {
                g.roots()
            };
            for b0 in bs {
                if b_inf && !b0.is_zero() {
                    continue;
                }
                let pa = if a_inf { Point::Infinity } else { Point::Finite(a0) };
                let pb = if b_inf { Point::Infinity } else { Point::Finite(b0) };
                out.push((pa, pb));
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Whether `(pa, pb)` is a singular point of `C` (or not on `C` at all, reported as `None`).
pub fn is_singular_at(c: &BiPoly, ext: &Field, pa: Point, pb: Point) -> Result<Option<bool>> {
    let mut chart = c.lift(ext)?;
    let a = match pa {
        Point::Finite(x) => x,
        Point::Infinity => {
            chart = chart.reverse_a();
            Fe::ZERO
        }
    };
    let b = match pb {
        Point::Finite(x) => x,
        Point::Infinity => {
            chart = chart.reverse_b();
            Fe::ZERO
        }
    };
    if !chart.eval_in(ext, a, b).is_zero() {
        return Ok(None);
    }
    Ok(Some(chart.partial_a().eval_in(ext, a, b).is_zero() && chart.partial_b().eval_in(ext, a, b).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(f: &Field, n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::from_ints(f, n, d).unwrap()
    }

    /// `4a(b−2)² − (a+1)²b²`
    fn ceq(f: &Field) -> BiPoly {
        BiPoly::from_terms(f, &[(1, 2, 4), (1, 1, -16), (1, 0, 16), (2, 2, -1), (1, 2, -2), (0, 2, -1)])
    }

    #[test]
    fn diagonal() {
        let f = Field::prime(7).unwrap();
        let x = RatFunc::x(&f);
        let imp = implicitize(&x, &x).unwrap();
        assert_eq!(imp.curve, BiPoly::from_terms(&f, &[(1, 0, 1), (0, 1, -1)]));
        assert!(!imp.degenerate());
    }

    #[test]
    fn goodexa_curve_in_both_coordinate_orders() {
        for p in [5u64, 7, 11, 13] {
            let f = Field::prime(p).unwrap();
            let g = rf(&f, &[0, 4], &[1, 2, 1]);
            let h = rf(&f, &[0, 0, 1], &[1]);
            let imp = implicitize(&g, &h).unwrap();
            assert_eq!(imp.curve, ceq(&f).swap().normalize(), "p = {}", p);
            assert_eq!(implicitize(&h, &g).unwrap().curve, ceq(&f).normalize(), "p = {}", p);
        }
    }

    #[test]
    fn shared_subcover_is_flagged() {
        let f = Field::prime(7).unwrap();
        let g = rf(&f, &[0, 0, 1], &[1]);
        let h = rf(&f, &[1, 0, 1], &[1]);
        let imp = implicitize(&g, &h).unwrap();
        assert_eq!(imp.cover_degree, 2);
        assert!(imp.degenerate());
    }

    #[test]
    fn singular_point_of_ceq() {
        let f = Field::prime(7).unwrap();
        let sing = singular_points(&ceq(&f), &f, 1 << 20).unwrap();
        assert!(sing.contains(&(Point::Finite(f.from_int(-1)), Point::Finite(f.from_int(2)))));
        assert_eq!(
            is_singular_at(&ceq(&f), &f, Point::Finite(f.from_int(-1)), Point::Finite(f.from_int(2))).unwrap(),
            Some(true)
        );
        for (pa, pb) in &sing {
            assert_eq!(is_singular_at(&ceq(&f), &f, *pa, *pb).unwrap(), Some(true));
        }
    }

    #[test]
    fn exact_division() {
        let f = Field::prime(7).unwrap();
        let c = ceq(&f);
        assert!(c.divides(&c));
        let d = BiPoly::from_terms(&f, &[(1, 1, 1), (0, 0, 3)]);
        assert_eq!(c.mul(&d).div_exact(&d), Some(c.clone()));
        assert!(!d.divides(&c));
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let f = Field::prime(11).unwrap();
        let x = BiPoly::from_terms(&f, &[(2, 1, 1), (0, 0, 1)]);
        let y = BiPoly::from_terms(&f, &[(1, 0, 1), (0, 2, 3)]);
        let z = BiPoly::from_terms(&f, &[(1, 1, 1), (0, 0, 5)]);
        assert_eq!(x.mul(&z).gcd(&y.mul(&z)), z.normalize());
        assert_eq!(x.gcd(&y), BiPoly::one(&f));
    }

    #[test]
    fn parametrization_satisfies_curve() {
        let f = Field::prime(7).unwrap();
        let f49 = Field::new(7, 2).unwrap();
        let g = rf(&f, &[0, 0, 0, 1], &[1]);
        let h = rf(&f, &[0, 4, -2, 1], &[1, 1, 1]);
        let imp = implicitize(&g, &h).unwrap();
        let mut checked = 0;
        for z in f49.elements().step_by(2) {
            let (ga, hb) = (g.eval_in(&f49, Point::Finite(z)), h.eval_in(&f49, Point::Finite(z)));
            if let (Point::Finite(a), Point::Finite(b)) = (ga, hb) {
                assert!(imp.curve.eval_in(&f49, a, b).is_zero());
                checked += 1;
            }
        }
        assert!(checked >= 20);
        assert_eq!(imp.curve.deg_a(), Some(3));
        assert_eq!(imp.curve.deg_b(), Some(3));
    }
}
