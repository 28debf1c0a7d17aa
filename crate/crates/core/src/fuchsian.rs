//! Second-order operators `u'' + a1 u' + a2 u` with rational coefficients.

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::maps::check_map;
use crate::place::{Divisor, Place};
use crate::poly::Poly;
use crate::ratfunc::{Point, RatFunc};

/// A monic operator `L(u) = u'' + a1 u' + a2 u`.
#[derive(Clone, PartialEq, Eq)]
pub struct FuchsianOperator {
    a1: RatFunc,
    a2: RatFunc,
}

/// Local data of an operator at a place.
#[derive(Clone, Debug)]
pub struct SingularPointData {
    pub place: Place,
    /// Field holding the indicial coefficients and exponents.
    pub field: Field,
    pub c1: Fe,
    pub c2: Fe,
    pub exponents: (Fe, Fe),
    pub ord_a1: i64,
    pub ord_a2: i64,
    pub singular: bool,
}

impl SingularPointData {
    /// Exponents `{0, 1}`.
    pub fn apparent(&self) -> bool {
        self.exponents == (Fe::ZERO, Fe::ONE)
    }

    pub fn equal_exponents(&self) -> bool {
        self.exponents.0 == self.exponents.1
    }

    pub fn exponent_labels(&self) -> (String, String) {
        (exponent_label(&self.field, self.exponents.0), exponent_label(&self.field, self.exponents.1))
    }
}

/// A small fraction `c/d` (`d ≤ 12`) congruent to a prime-field element; display only.
pub fn rational_lift(field: &Field, x: Fe) -> Option<(i64, i64)> {
    let v = field.to_prime(x)? as i64;
    let p = field.characteristic() as i64;
    let mut best: Option<(i64, i64)> = None;
    for d in 1..=12i64 {
        if d % p == 0 {
            continue;
        }
        let mut c = (v * d).rem_euclid(p);
        if c > p / 2 {
            c -= p;
        }
        if num_integer::gcd(c, d) != 1 {
            continue;
        }
        let better = match best {
            None => true,
            Some((bc, bd)) => c.abs().max(d) < bc.abs().max(bd),
        };
        if better {
            best = Some((c, d));
        }
    }
    best
}

/// Field element, with its small-fraction lift when one exists: `4 (1/2)`.
pub fn exponent_label(field: &Field, x: Fe) -> String {
    let base = match field.to_prime(x) {
        Some(v) => v.to_string(),
        None => field.fmt_elem(x),
    };
    match rational_lift(field, x) {
        Some((c, 1)) if c.to_string() == base => base,
        Some((c, 1)) => format!("{} ({})", base, c),
        Some((c, d)) => format!("{} ({}/{})", base, c, d),
        None => base,
    }
}

pub fn ratio_to_fe(field: &Field, r: Ratio<i64>) -> Result<Fe> {
    let d = field.from_int(*r.denom());
    field.div(field.from_int(*r.numer()), d)
}

impl FuchsianOperator {
    pub fn new(a1: RatFunc, a2: RatFunc) -> Result<FuchsianOperator> {
        if a1.field() != a2.field() {
            return Err(Error::FieldMismatch("operator coefficients".into()));
        }
        Ok(FuchsianOperator { a1, a2 })
    }

    /// Normalizes `p2 u'' + p1 u' + p0 u`.
    pub fn from_nonmonic(p2: &RatFunc, p1: &RatFunc, p0: &RatFunc) -> Result<FuchsianOperator> {
        FuchsianOperator::new(p1.div(p2)?, p0.div(p2)?)
    }

    /// Gauss' hypergeometric operator `λ(λ−1)u'' + (2λ−1)u' + u/4`, made monic.
    pub fn gauss(field: &Field) -> Result<FuchsianOperator> {
        let den = RatFunc::from_ints(field, &[0, -1, 1], &[1])?;
        FuchsianOperator::from_nonmonic(
            &den,
            &RatFunc::from_ints(field, &[-1, 2], &[1])?,
            &RatFunc::from_ints(field, &[1], &[4])?,
        )
    }

    /// The Riemann–Papperitz operator with singularities `0, 1, ∞` and the given exponents.
    pub fn riemann(
        field: &Field,
        e0: (Ratio<i64>, Ratio<i64>),
        e1: (Ratio<i64>, Ratio<i64>),
        einf: (Ratio<i64>, Ratio<i64>),
    ) -> Result<FuchsianOperator> {
        let total = e0.0 + e0.1 + e1.0 + e1.1 + einf.0 + einf.1;
        if total != Ratio::from_integer(1) {
            return Err(Error::Degenerate(format!("exponents sum to {} instead of 1", total)));
        }
        let c = |r: Ratio<i64>| -> Result<RatFunc> { Ok(RatFunc::constant(field, ratio_to_fe(field, r)?)) };
        let one = Ratio::from_integer(1);
        let x = RatFunc::x(field);
        let xm1 = RatFunc::from_ints(field, &[-1, 1], &[1])?;
        let a1 = c(one - e0.0 - e0.1)?.div(&x)?.add(&c(one - e1.0 - e1.1)?.div(&xm1)?);
        let x2 = x.mul(&x);
        let xm12 = xm1.mul(&xm1);
        let a2 = c(-(e0.0 * e0.1))?
            .div(&x2.mul(&xm1))?
            .add(&c(e1.0 * e1.1)?.div(&x.mul(&xm12))?)
            .add(&c(einf.0 * einf.1)?.div(&x.mul(&xm1))?);
        FuchsianOperator::new(a1, a2)
    }

    pub fn field(&self) -> &Field {
        self.a1.field()
    }

    pub fn a1(&self) -> &RatFunc {
        &self.a1
    }

    pub fn a2(&self) -> &RatFunc {
        &self.a2
    }

    pub fn apply(&self, u: &RatFunc) -> RatFunc {
        let d1 = u.derivative();
        let d2 = d1.derivative();
        d2.add(&self.a1.mul(&d1)).add(&self.a2.mul(u))
    }

    pub fn annihilates(&self, u: &RatFunc) -> bool {
        self.apply(u).is_zero()
    }

    /// The operator rewritten in the coordinate `t = 1/x`.
    pub fn at_infinity(&self) -> FuchsianOperator {
        let f = self.field();
        let t = RatFunc::x(f);
        let t2 = t.mul(&t);
        let b1 = RatFunc::int(f, 2).div(&t).expect("nonzero").sub(&self.a1.at_reciprocal().div(&t2).expect("nonzero"));
        let b2 = self.a2.at_reciprocal().div(&t2.mul(&t2)).expect("nonzero");
        FuchsianOperator { a1: b1, a2: b2 }
    }

    /// Places where `a1` or `a2` has a pole, `∞` included.
    pub fn singular_places(&self) -> Vec<Place> {
        let mut out: Vec<Place> =
            self.a1.den().factor().into_iter().chain(self.a2.den().factor()).map(|(pi, _)| Place::Finite(pi)).collect();
        let inf = self.at_infinity();
        let t = Place::Finite(Poly::x(self.field()));
        if inf.a1.ord_at(&t).is_ok_and(|o| o < 0) || inf.a2.ord_at(&t).is_ok_and(|o| o < 0) {
            out.push(Place::Infinity);
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn is_singular_at(&self, place: &Place) -> bool {
        self.singular_places().contains(place)
    }

    /// Indicial coefficients and exponents at a place, in `F_{p^{2 deg P}}`.
    pub fn local_data(&self, place: &Place) -> Result<SingularPointData> {
        let (op, pi) = match place {
            Place::Infinity => (self.at_infinity(), Poly::x(self.field())),
            Place::Finite(pi) => (self.clone(), pi.clone()),
        };
        let local = Place::Finite(pi.clone());
        let ord1 = if op.a1.is_zero() { i64::MAX } else { op.a1.ord_at(&local)? };
        let ord2 = if op.a2.is_zero() { i64::MAX } else { op.a2.ord_at(&local)? };
        if ord1 < -1 || ord2 < -2 {
            return Err(Error::IrregularSingularity { place: place.label(), ord_a1: ord1, ord_a2: ord2 });
        }
        let base = self.field();
        if !base.is_prime_field() && pi.degree() != Some(1) {
            return Err(Error::NotPrimeField);
        }
        let r = pi.degree().unwrap_or(1) as u32;
        let ext = Field::new(base.characteristic(), 2 * r * base.degree())?;
        let alpha = pi.lift(&ext)?.roots()[0];
        let pr = RatFunc::from_poly(pi.clone()).div(&RatFunc::from_poly(pi.derivative()))?;
        let value = |f: &RatFunc| -> Result<Fe> {
            match f.lift(&ext)?.eval(Point::Finite(alpha)) {
                Point::Finite(v) => Ok(v),
                Point::Infinity => Err(Error::InvariantViolation("indicial coefficient has a pole".into())),
            }
        };
        let c1 = value(&pr.mul(&op.a1))?;
        let c2 = value(&pr.mul(&pr).mul(&op.a2))?;
        let exponents = indicial_roots(&ext, c1, c2)?;
        Ok(SingularPointData {
            place: place.clone(),
            field: ext,
            c1,
            c2,
            exponents,
            ord_a1: ord1,
            ord_a2: ord2,
            singular: ord1 < 0 || ord2 < 0,
        })
    }

    pub fn local_exponents(&self, place: &Place) -> Result<(Fe, Fe)> {
        Ok(self.local_data(place)?.exponents)
    }

    /// Local data at every singular place.
    pub fn singular_points(&self) -> Result<Vec<SingularPointData>> {
        self.singular_places().iter().map(|p| self.local_data(p)).collect()
    }

    /// `a1∘f·f' − f''/f'` and `a2∘f·f'^2`.
    pub fn pullback(&self, f: &RatFunc) -> Result<FuchsianOperator> {
        check_map(f)?;
        let d1 = f.derivative();
        let d2 = d1.derivative();
        let a1 = self.a1.compose(f).mul(&d1).sub(&d2.div(&d1)?);
        let a2 = self.a2.compose(f).mul(&d1).mul(&d1);
        FuchsianOperator::new(a1, a2)
    }

    /// `y'' + (a1 − 2B)y' + (−B' − B a1 + a2 + B^2)y`.
    pub fn twist(&self, b: &RatFunc) -> FuchsianOperator {
        let a1 = self.a1.sub(&b.scale_int(2));
        let a2 = b.derivative().neg().sub(&b.mul(&self.a1)).add(&self.a2).add(&b.mul(b));
        FuchsianOperator { a1, a2 }
    }

    /// `B` with `twist(self, B) = other` whose poles lie among the singularities of `self`.
    pub fn find_twist(&self, other: &FuchsianOperator) -> Option<RatFunc> {
        let inv2 = self.field().inv(self.field().from_int(2)).ok()?;
        let b = self.a1.sub(&other.a1).scale(inv2);
        if self.twist(&b) != *other {
            return None;
        }
        if b.is_zero() {
            return Some(b);
        }
        let sing = self.singular_places();
        for (pi, _) in b.den().factor() {
            if !sing.contains(&Place::Finite(pi)) {
                return None;
            }
        }
        if b.ord_at(&Place::Infinity).ok()? <= 1 && !sing.contains(&Place::Infinity) {
            return None;
        }
        Some(b)
    }

    /// `Dn·L` as `(Dn, A1, A2)` with polynomial entries.
    fn cleared(&self) -> (Poly, Poly, Poly) {
        let d1 = self.a1.den();
        let d2 = self.a2.den();
        let g = d1.gcd(d2);
        let dn = d1.mul(&d2.div_exact(&g).expect("gcd divides"));
        let a1 = self.a1.num().mul(&dn.div_exact(d1).expect("divides"));
        let a2 = self.a2.num().mul(&dn.div_exact(d2).expect("divides"));
        (dn, a1, a2)
    }

    /// Basis of polynomial solutions of degree at most `bound`, reduced echelon form by degree.
    pub fn polynomial_solutions(&self, bound: usize, guard: usize) -> Result<Vec<Poly>> {
        if bound > guard {
            return Err(Error::guard("polynomial solution degree", bound as u64, guard as u64));
        }
        let field = self.field().clone();
        let (dn, a1, a2) = self.cleared();
        let cols: Vec<Poly> = (0..=bound)
            .map(|i| {
                let u = Poly::monomial(&field, Fe::ONE, i);
                let d1 = u.derivative();
                dn.mul(&d1.derivative()).add(&a1.mul(&d1)).add(&a2.mul(&u))
            })
            .collect();
        let nrows = cols.iter().map(|c| c.coeffs().len()).max().unwrap_or(0);
        let matrix: Vec<Vec<Fe>> = (0..nrows).map(|r| cols.iter().map(|c| c.coeff(r)).collect()).collect();
        let null = nullspace(&field, matrix, bound + 1);
        Ok(null.into_iter().map(|v| Poly::new(field.clone(), v)).collect())
    }

    /// Degrees `d ≤ bound` with `−d` congruent to an exponent at `∞`.
    pub fn admissible_degrees(&self, bound: usize) -> Result<Vec<usize>> {
        let data = self.local_data(&Place::Infinity)?;
        let f = &data.field;
        Ok((0..=bound)
            .filter(|&d| {
                let md = f.from_int(-(d as i64));
                md == data.exponents.0 || md == data.exponents.1
            })
            .collect())
    }

    /// A nonzero solution `ψ·Q` in `F_p(x)`, where `ψ = ∏ π^r` runs over lifts `0 ≤ r < p`
    /// of the exponents at the finite singular places and `Q` is a polynomial of degree
    /// at most `bound`. Prefers the smallest `deg Q`, then the first exponent choice.
    pub fn rational_solution(&self, bound: usize, guard: usize) -> Result<Option<RatFunc>> {
        let field = self.field().clone();
        let mut choices: Vec<Vec<(Poly, u64)>> = vec![Vec::new()];
        for data in self.singular_points()? {
            let Place::Finite(pi) = &data.place else { continue };
            let mut opts: Vec<u64> =
                [data.exponents.0, data.exponents.1].iter().filter_map(|&e| data.field.to_prime(e)).collect();
            opts.dedup();
            if opts.is_empty() {
                return Ok(None);
            }
            choices = choices
                .into_iter()
                .flat_map(|c| {
                    opts.iter().map(move |&r| {
                        let mut c = c.clone();
                        c.push((pi.clone(), r));
                        c
                    })
                })
                .collect();
        }
        let mut best: Option<(usize, RatFunc)> = None;
        for choice in choices {
            let psi = choice.iter().fold(Poly::one(&field), |acc, (pi, r)| acc.mul(&pi.pow(*r)));
            let psi = RatFunc::from_poly(psi);
            let b = psi.derivative().div(&psi)?.neg();
            let sols = self.twist(&b).polynomial_solutions(bound, guard)?;
            if let Some(q) = sols.into_iter().next() {
                let d = q.degree().unwrap_or(0);
                if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                    best = Some((d, psi.mul(&RatFunc::from_poly(q))));
                }
            }
        }
        Ok(best.map(|(_, u)| u))
    }

    pub fn fmt_var(&self, var: &str) -> String {
        format!("u'' + ({})u' + ({})u", self.a1.fmt_var(var), self.a2.fmt_var(var))
    }
}

impl fmt::Debug for FuchsianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("x"))
    }
}

impl fmt::Display for FuchsianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("x"))
    }
}

/// Roots of `X^2 + (c1 − 1)X + c2`, sorted by code.
fn indicial_roots(ext: &Field, c1: Fe, c2: Fe) -> Result<(Fe, Fe)> {
    let b = ext.sub(c1, Fe::ONE);
    let disc = ext.sub(ext.mul(b, b), ext.mul(ext.from_int(4), c2));
    let s = ext.sqrt(disc).ok_or_else(|| Error::InvariantViolation("indicial discriminant is not a square".into()))?;
    let inv2 = ext.inv(ext.from_int(2))?;
    let r1 = ext.mul(ext.sub(s, b), inv2);
    let r2 = ext.mul(ext.sub(ext.neg(s), b), inv2);
    Ok(if r1 <= r2 { (r1, r2) } else { (r2, r1) })
}

/// Reduced basis of `{v : M v = 0}`; each vector is monic in its top entry and
/// vanishes at the top entries of the others. Sorted by top index.
pub fn nullspace(field: &Field, mut m: Vec<Vec<Fe>>, ncols: usize) -> Vec<Vec<Fe>> {
    // Eliminate from the highest column down so pivots free the low-degree columns last.
    let order: Vec<usize> = (0..ncols).rev().collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for &col in &order {
        let Some(pr) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = field.inv(m[row][col]).expect("nonzero pivot");
        for x in m[row].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col];
                let pivot_row = m[row].clone();
                for (x, &v) in m[r].iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(factor, v));
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis: Vec<Vec<Fe>> = free
        .iter()
        .map(|&fc| {
            let mut v = vec![Fe::ZERO; ncols];
            v[fc] = Fe::ONE;
            for &(r, pc) in &pivots {
                v[pc] = field.neg(m[r][fc]);
            }
            v
        })
        .collect();
    // Echelon by top degree: make each vector's top entry a pivot.
    basis.sort_by_key(|v| v.iter().rposition(|x| !x.is_zero()));
    let n = basis.len();
    for i in 0..n {
        let top = basis[i].iter().rposition(|x| !x.is_zero()).expect("nonzero basis vector");
        let inv = field.inv(basis[i][top]).expect("nonzero");
        basis[i] = basis[i].iter().map(|&x| field.mul(x, inv)).collect();
        for j in 0..n {
            if j != i && !basis[j][top].is_zero() {
                let factor = basis[j][top];
                basis[j] = (0..ncols).map(|c| field.sub(basis[j][c], field.mul(factor, basis[i][c]))).collect();
            }
        }
    }
    basis.sort_by_key(|v| v.iter().rposition(|x| !x.is_zero()));
    basis
}

#[derive(Clone, Debug)]
pub struct DivisorCongruence {
    pub order_class_matches: bool,
    pub congruent: bool,
    /// `div(u1) − div(u2)` with coefficients reduced mod `p`.
    pub difference: Divisor,
}

fn require_solution(l: &FuchsianOperator, u: &RatFunc) -> Result<()> {
    if u.is_zero() || !l.annihilates(u) {
        return Err(Error::NotASolution(u.to_string()));
    }
    Ok(())
}

/// Whether `ord_P(u)` is congruent mod `p` to a local exponent at `P`.
pub fn order_exponent_congruence(l: &FuchsianOperator, u: &RatFunc, place: &Place) -> Result<bool> {
    require_solution(l, u)?;
    let data = l.local_data(place)?;
    let ord = data.field.from_int(u.ord_at(place)?);
    Ok(ord == data.exponents.0 || ord == data.exponents.1)
}

pub fn divisor_congruence(
    l: &FuchsianOperator,
    u1: &RatFunc,
    u2: &RatFunc,
    place: &Place,
) -> Result<DivisorCongruence> {
    require_solution(l, u1)?;
    require_solution(l, u2)?;
    let p = l.field().characteristic() as i64;
    let order_class_matches = (u1.ord_at(place)? - u2.ord_at(place)?).rem_euclid(p) == 0;
    let difference = u1.divisor()?.sub(&u2.divisor()?).reduce_mod(p);
    Ok(DivisorCongruence { order_class_matches, congruent: difference.is_zero(), difference })
}

#[derive(Clone, Debug)]
pub struct AdaptedReport {
    pub adapted: bool,
    pub twist: Option<RatFunc>,
}

/// Whether the pullbacks of `l` along `g` and `h` differ by a twist.
pub fn check_adapted(g: &RatFunc, h: &RatFunc, l: &FuchsianOperator) -> Result<AdaptedReport> {
    let lg = l.pullback(g)?;
    let lh = l.pullback(h)?;
    let twist = lg.find_twist(&lh);
    Ok(AdaptedReport { adapted: twist.is_some(), twist })
}

#[derive(Clone, Debug)]
pub struct FepropReport {
    /// Some singularity of the operator has equal exponents.
    pub hypothesis: bool,
    pub holds: bool,
    /// `div(Φ∘g) − div(Φ∘h)` reduced mod `p`.
    pub d: Divisor,
    /// Places of `d` outside the allowed set.
    pub stray: Vec<Place>,
}

pub fn check_feprop(
    g: &RatFunc,
    h: &RatFunc,
    l: &FuchsianOperator,
    phi: &RatFunc,
    s_frak: &[Place],
) -> Result<FepropReport> {
    require_solution(l, phi)?;
    let hypothesis = l.singular_points()?.iter().any(|d| d.equal_exponents());
    let p = l.field().characteristic() as i64;
    let d = phi.compose(g).divisor()?.sub(&phi.compose(h).divisor()?).reduce_mod(p);
    let stray: Vec<Place> = d.support().into_iter().filter(|pl| !s_frak.contains(pl)).cloned().collect();
    Ok(FepropReport { hypothesis, holds: hypothesis && stray.is_empty(), d, stray })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    fn deuring7(f: &Field) -> RatFunc {
        RatFunc::from_ints(f, &[1, 2, 2, 1], &[1]).unwrap()
    }

    #[test]
    fn gauss_annihilates_deuring_mod_7() {
        let f = Field::prime(7).unwrap();
        let l = FuchsianOperator::gauss(&f).unwrap();
        assert!(l.apply(&RatFunc::zero(&f)).is_zero());
        assert!(l.annihilates(&deuring7(&f)));
        let lam7 = RatFunc::from_poly(Poly::monomial(&f, Fe::ONE, 7));
        assert!(l.annihilates(&lam7.mul(&deuring7(&f))));
    }

    #[test]
    fn gauss_is_riemann_operator() {
        let f = Field::prime(11).unwrap();
        let z = r(0, 1);
        let g = FuchsianOperator::riemann(&f, (z, z), (z, z), (r(1, 2), r(1, 2))).unwrap();
        assert_eq!(g, FuchsianOperator::gauss(&f).unwrap());
    }

    #[test]
    fn gauss_exponents_mod_7() {
        let f = Field::prime(7).unwrap();
        let l = FuchsianOperator::gauss(&f).unwrap();
        let sp = l.singular_points().unwrap();
        let labels: Vec<String> = sp.iter().map(|d| d.place.label()).collect();
        assert_eq!(labels, vec!["0", "1", "inf"]);
        let four = Fe(4);
        assert_eq!(sp[0].exponents, (Fe::ZERO, Fe::ZERO));
        assert_eq!(sp[1].exponents, (Fe::ZERO, Fe::ZERO));
        assert_eq!(sp[2].exponents, (four, four));
        assert_eq!(exponent_label(&sp[2].field, four), "4 (1/2)");
        let ns = l.local_data(&Place::rational(&f, Fe(3))).unwrap();
        assert!(!ns.singular && ns.apparent());
    }

    #[test]
    fn x1_operator_exponents() {
        for p in [5u64, 7, 11, 13] {
            let f = Field::prime(p).unwrap();
            let z = r(0, 1);
            let base = FuchsianOperator::riemann(&f, (z, r(1, 3)), (z, r(1, 2)), (r(1, 12), r(1, 12))).unwrap();
            let scale = RatFunc::from_ints(&f, &[0, 1], &[1728]).unwrap();
            let l = base.pullback(&scale).unwrap();
            let pl = [Place::rational(&f, Fe::ZERO), Place::rational(&f, f.from_int(1728)), Place::Infinity];
            let expect = [(z, r(1, 3)), (z, r(1, 2)), (r(1, 12), r(1, 12))];
            assert_eq!(l.singular_places().len(), 3);
            for (place, (x, y)) in pl.iter().zip(expect) {
                let d = l.local_data(place).unwrap();
                let mut e = vec![ratio_to_fe(&d.field, x).unwrap(), ratio_to_fe(&d.field, y).unwrap()];
                e.sort();
                assert_eq!(vec![d.exponents.0, d.exponents.1], e, "p = {} at {}", p, place);
            }
        }
    }

    #[test]
    fn irregular_singularity_is_reported() {
        let f = Field::prime(7).unwrap();
        let l = FuchsianOperator::new(RatFunc::from_ints(&f, &[1], &[0, 0, 1]).unwrap(), RatFunc::zero(&f)).unwrap();
        match l.local_data(&Place::rational(&f, Fe::ZERO)) {
            Err(Error::IrregularSingularity { ord_a1, .. }) => assert_eq!(ord_a1, -2),
            other => panic!("{:?}", other.map(|d| d.exponents)),
        }
    }

    #[test]
    fn polynomial_solutions_small() {
        let f = Field::prime(7).unwrap();
        let trivial = FuchsianOperator::new(RatFunc::zero(&f), RatFunc::zero(&f)).unwrap();
        let b = trivial.polynomial_solutions(1, 5000).unwrap();
        assert_eq!(b, vec![Poly::one(&f), Poly::x(&f)]);
        let l = FuchsianOperator::gauss(&f).unwrap();
        let b = l.polynomial_solutions(3, 5000).unwrap();
        assert_eq!(b, vec![Poly::from_ints(&f, &[1, 2, 2, 1])]);
        assert_eq!(l.admissible_degrees(10).unwrap(), vec![3, 10]);
        assert!(l.polynomial_solutions(6000, 5000).is_err());
    }

    #[test]
    fn pullback_along_square_map() {
        let f = Field::prime(7).unwrap();
        let l = FuchsianOperator::gauss(&f).unwrap();
        let h = RatFunc::from_ints(&f, &[0, 0, 1], &[1]).unwrap();
        let lh = l.pullback(&h).unwrap();
        assert!(lh.annihilates(&deuring7(&f).compose(&h)));
        assert_eq!(l.pullback(&RatFunc::x(&f)).unwrap(), l);
        // exponents at 0 double: (0,0) stays, at ∞ (1/2,1/2) becomes (1,1)
        let d = lh.local_data(&Place::Infinity).unwrap();
        assert_eq!(d.exponents, (Fe::ONE, Fe::ONE));
    }

    #[test]
    fn adaptedness_examples() {
        let f = Field::prime(7).unwrap();
        let l = FuchsianOperator::gauss(&f).unwrap();
        let g = RatFunc::from_ints(&f, &[0, 4], &[1, 2, 1]).unwrap();
        let h = RatFunc::from_ints(&f, &[0, 0, 1], &[1]).unwrap();
        let rep = check_adapted(&g, &h, &l).unwrap();
        assert!(rep.adapted);
        assert_eq!(rep.twist.unwrap(), RatFunc::from_ints(&f, &[-1], &[1, 1]).unwrap());
        let x = RatFunc::x(&f);
        let id = check_adapted(&x, &x, &l).unwrap();
        assert_eq!(id.twist, Some(RatFunc::zero(&f)));
        let cube = RatFunc::from_ints(&f, &[0, 0, 0, 1], &[1]).unwrap();
        assert!(!check_adapted(&h, &cube, &l).unwrap().adapted);
    }

    #[test]
    fn exponent_congruences_for_deuring() {
        let f = Field::prime(7).unwrap();
        let l = FuchsianOperator::gauss(&f).unwrap();
        let phi = deuring7(&f);
        assert_eq!(phi.ord_at(&Place::Infinity).unwrap(), -3);
        assert!(order_exponent_congruence(&l, &phi, &Place::Infinity).unwrap());
        for place in [Place::rational(&f, Fe(2)), Place::rational(&f, Fe(3)), Place::rational(&f, Fe::ZERO)] {
            assert!(order_exponent_congruence(&l, &phi, &place).unwrap());
        }
        let lam7 = RatFunc::from_poly(Poly::monomial(&f, Fe::ONE, 7)).mul(&phi);
        let dc = divisor_congruence(&l, &phi, &lam7, &Place::Infinity).unwrap();
        assert!(dc.congruent && dc.order_class_matches);
        let bad = RatFunc::x(&f);
        assert!(matches!(order_exponent_congruence(&l, &bad, &Place::Infinity), Err(Error::NotASolution(_))));
    }

    #[test]
    fn feprop_goodexa_mod_7() {
        let f = Field::prime(7).unwrap();
        let l = FuchsianOperator::gauss(&f).unwrap();
        let g = RatFunc::from_ints(&f, &[0, 4], &[1, 2, 1]).unwrap();
        let h = RatFunc::from_ints(&f, &[0, 0, 1], &[1]).unwrap();
        let s: Vec<Place> =
            [0, 1, -1].iter().map(|&a| Place::rational(&f, f.from_int(a))).chain([Place::Infinity]).collect();
        let rep = check_feprop(&g, &h, &l, &deuring7(&f), &s).unwrap();
        assert!(rep.hypothesis && rep.holds, "{:?}", rep);
        let same = check_feprop(&g, &g, &l, &deuring7(&f), &s).unwrap();
        assert!(same.holds && same.d.is_zero());
    }

    #[test]
    fn pullback_along_f() {
        for p in [7u64, 11] {
            let f = Field::prime(p).unwrap();
            let l = FuchsianOperator::gauss(&f).unwrap();
            let m = RatFunc::from_ints(&f, &[0, 0, 16], &[1, -4, 6, -4, 1]).unwrap();
            let lf = l.pullback(&m).unwrap();
            let q = Poly::from_ints(&f, &[1, -6, 1]);
            let s = Poly::x(&f);
            let a1_den = s.mul(&Poly::from_ints(&f, &[-1, 0, 1])).mul(&q);
            let a1 = RatFunc::new(Poly::from_ints(&f, &[-1, 8, 20, -4, 1]), a1_den).unwrap();
            assert_eq!(lf.a1(), &a1);
            let a2 = RatFunc::new(Poly::from_ints(&f, &[-16]), Poly::from_ints(&f, &[1, -2, 1]).mul(&q)).unwrap();
            assert_eq!(lf.a2(), &a2);
            assert!(lf.annihilates(&RatFunc::from_ints(&f, &[1, 2, 2, 1], &[1]).unwrap().compose(&m)) || p != 7);
        }
    }

    fn small_rf() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
        (prop::collection::vec(0i64..11, 2..4), prop::collection::vec(0i64..11, 1..3))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn twist_roundtrip_and_solution_transport((bn, bd) in small_rf(), (pn, pd) in small_rf()) {
            let f = Field::prime(11).unwrap();
            let l = FuchsianOperator::gauss(&f).unwrap();
            let Ok(b) = RatFunc::from_ints(&f, &bn, &bd) else { return Ok(()) };
            prop_assert_eq!(l.twist(&b).twist(&b.neg()), l.clone());
            let Ok(psi) = RatFunc::from_ints(&f, &pn, &pd) else { return Ok(()) };
            prop_assume!(!psi.is_zero());
            let bpsi = psi.derivative().div(&psi).unwrap();
            let phi = RatFunc::from_ints(&f, &[1, 5, 3, 5, 1], &[1]).unwrap();
            prop_assume!(l.annihilates(&phi));
            prop_assert!(l.twist(&bpsi).annihilates(&psi.mul(&phi)));
        }

        #[test]
        fn pullback_is_functorial((an, ad) in small_rf(), (bn, bd) in small_rf()) {
            let f = Field::prime(11).unwrap();
            let l = FuchsianOperator::gauss(&f).unwrap();
            let (Ok(a), Ok(b)) = (RatFunc::from_ints(&f, &an, &ad), RatFunc::from_ints(&f, &bn, &bd)) else { return Ok(()) };
            prop_assume!(check_map(&a).is_ok() && check_map(&b).is_ok());
            let lhs = l.pullback(&a).unwrap().pullback(&b).unwrap();
            let rhs = l.pullback(&a.compose(&b)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn exponents_scale_under_pullback(n in 2usize..5) {
            let f = Field::prime(13).unwrap();
            let l = FuchsianOperator::gauss(&f).unwrap();
            let m = RatFunc::from_poly(Poly::monomial(&f, Fe::ONE, n));
            let lm = l.pullback(&m).unwrap();
            let d = lm.local_data(&Place::Infinity).unwrap();
            let e = d.field.mul(d.field.from_int(n as i64), ratio_to_fe(&d.field, Ratio::new(1, 2)).unwrap());
            prop_assert_eq!(d.exponents, (e, e));
        }
    }
}
