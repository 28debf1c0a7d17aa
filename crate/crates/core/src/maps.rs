//! Fibers and ramification of rational maps `P^1 → P^1`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::place::Place;
use crate::poly::Poly;
use crate::ratfunc::{valuation, Point, RatFunc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPoint {
    pub place: Place,
    pub image: Place,
    pub e: u32,
}

impl FiberPoint {
    pub fn is_wild(&self, p: u64) -> bool {
        (self.e as u64).is_multiple_of(p)
    }
}

#[derive(Clone, Debug)]
pub struct Ramification {
    /// Places with `e ≥ 2`.
    pub points: Vec<FiberPoint>,
    /// `Σ deg(P)(e_P − 1)`.
    pub hurwitz_sum: i64,
    /// `2 deg f − 2`.
    pub hurwitz_expected: i64,
    pub ext_bound: usize,
    pub p: u64,
}

impl Ramification {
    pub fn wild(&self) -> Vec<&FiberPoint> {
        self.points.iter().filter(|pt| pt.is_wild(self.p)).collect()
    }

    pub fn is_tame(&self) -> bool {
        self.wild().is_empty()
    }
}

/// Rejects constant and inseparable maps.
pub fn check_map(f: &RatFunc) -> Result<()> {
    if f.is_constant() {
        return Err(Error::ConstantMap(f.to_string()));
    }
    if f.derivative().is_zero() {
        return Err(Error::Inseparable(f.to_string()));
    }
    Ok(())
}

/// `f(P)` as a place of the target line.
pub fn image_place(f: &RatFunc, place: &Place) -> Result<Place> {
    let field = f.field();
    let pi = match place {
        Place::Infinity => return Ok(Place::from_point(field, f.eval(Point::Infinity))),
        Place::Finite(pi) => pi,
    };
    if valuation(f.den(), pi) > 0 {
        return Ok(Place::Infinity);
    }
    if let Some(Point::Finite(a)) = place.rational_point() {
        return Ok(Place::from_point(field, f.eval(Point::Finite(a))));
    }
    if !field.is_prime_field() {
        return Err(Error::NotPrimeField);
    }
    let residue = Field::with_modulus(field.characteristic(), &codes(pi))?;
    let dinv = f.den().inv_mod(pi).ok_or(Error::DivisionByZero)?;
    let beta = f.num().mulmod(&dinv, pi);
    let beta = residue.from_coeffs(&codes(&beta))?;
    Ok(Place::Finite(Poly::minimal_poly(&residue, beta)))
}

fn codes(p: &Poly) -> Vec<u64> {
    p.coeffs().iter().map(|c| c.code()).collect()
}

/// `D^r ρ(N/D)` for a finite target place `ρ`, and `D` for `∞`.
pub fn fiber_poly(f: &RatFunc, target: &Place) -> Poly {
    match target {
        Place::Infinity => f.den().clone(),
        Place::Finite(rho) => {
            let r = rho.degree().unwrap_or(0);
            let mut acc = Poly::zero(f.field());
            let mut npow = Poly::one(f.field());
            let dpows: Vec<Poly> = (0..=r).map(|i| f.den().pow(i as u64)).collect();
            for i in 0..=r {
                acc = acc.add(&npow.mul(&dpows[r - i]).scale(rho.coeff(i)));
                npow = npow.mul(f.num());
            }
            acc
        }
    }
}

pub fn ramification_index(f: &RatFunc, place: &Place) -> Result<u32> {
    match place {
        Place::Infinity => {
            let g = f.at_reciprocal();
            ramification_index(&g, &Place::Finite(Poly::x(f.field())))
        }
        Place::Finite(pi) => {
            let q = image_place(f, place)?;
            Ok(valuation(&fiber_poly(f, &q), pi) as u32)
        }
    }
}

/// All places over `target`, with ramification indices.
pub fn fiber(f: &RatFunc, target: &Place) -> Result<Vec<FiberPoint>> {
    check_map(f)?;
    let mut out: Vec<FiberPoint> = fiber_poly(f, target)
        .factor()
        .into_iter()
        .map(|(pi, e)| FiberPoint { place: Place::Finite(pi), image: target.clone(), e: e as u32 })
        .collect();
    if image_place(f, &Place::Infinity)? == *target {
        out.push(FiberPoint {
            place: Place::Infinity,
            image: target.clone(),
            e: ramification_index(f, &Place::Infinity)?,
        });
    }
    let total: usize = out.iter().map(|pt| pt.e as usize * pt.place.degree()).sum();
    if total != f.degree() * target.degree() {
        return Err(Error::InvariantViolation(format!(
            "fiber of {} over {} has size {} instead of {}",
            f,
            target,
            total,
            f.degree() * target.degree()
        )));
    }
    Ok(out)
}

/// Ramification points of `f` found through the Wronskian `N'D − ND'`, the poles and `∞`.
pub fn ramification_data(f: &RatFunc, ext_bound: usize) -> Result<Ramification> {
    check_map(f)?;
    let w = f.num().derivative().mul(f.den()).sub(&f.num().mul(&f.den().derivative()));
    let mut candidates: Vec<Place> = w.factor().into_iter().map(|(pi, _)| Place::Finite(pi)).collect();
    candidates.extend(f.den().factor().into_iter().map(|(pi, _)| Place::Finite(pi)));
    candidates.push(Place::Infinity);
    candidates.sort();
    candidates.dedup();
    let mut points = Vec::new();
    for pl in candidates {
        let e = ramification_index(f, &pl)?;
        if e >= 2 {
            if pl.degree() > ext_bound {
                return Err(Error::ExtensionBound { degree: pl.degree() as u32, bound: ext_bound as u32 });
            }
            let image = image_place(f, &pl)?;
            points.push(FiberPoint { place: pl, image, e });
        }
    }
    let hurwitz_sum = points.iter().map(|pt| pt.place.degree() as i64 * (pt.e as i64 - 1)).sum();
    Ok(Ramification {
        points,
        hurwitz_sum,
        hurwitz_expected: 2 * f.degree() as i64 - 2,
        ext_bound,
        p: f.field().characteristic(),
    })
}

/// Places mapping into `targets`; every fiber is counted with multiplicity.
pub fn preimage_places(f: &RatFunc, targets: &[Place], ext_bound: usize) -> Result<Vec<FiberPoint>> {
    let mut out = Vec::new();
    for t in targets {
        for pt in fiber(f, t)? {
            if pt.place.degree() > ext_bound {
                return Err(Error::ExtensionBound { degree: pt.place.degree() as u32, bound: ext_bound as u32 });
            }
            out.push(pt);
        }
    }
    out.sort_by(|a, b| a.place.cmp(&b.place));
    Ok(out)
}

/// Distinct places of a set of fiber points.
pub fn places_of(points: &[FiberPoint]) -> Vec<Place> {
    let mut v: Vec<Place> = points.iter().map(|p| p.place.clone()).collect();
    v.sort();
    v.dedup();
    v
}

/// The rational points over `ext` of a set of places.
pub fn points_over(places: &[Place], ext: &Field) -> Vec<Point> {
    let mut v: Vec<Point> = places.iter().flat_map(|pl| pl.points_in(ext)).collect();
    v.sort();
    v.dedup();
    v
}

/// `Σ deg P` over a set of places; the number of geometric points.
pub fn geometric_count(places: &[Place]) -> usize {
    places.iter().map(|p| p.degree()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(f: &Field, n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::from_ints(f, n, d).unwrap()
    }

    fn labels(pts: &[FiberPoint]) -> Vec<(String, u32)> {
        pts.iter().map(|p| (p.place.label(), p.e)).collect()
    }

    #[test]
    fn square_map_ramifies_at_zero_and_infinity() {
        let f = Field::prime(7).unwrap();
        let h = rf(&f, &[0, 0, 1], &[1]);
        let r = ramification_data(&h, 4).unwrap();
        assert_eq!(labels(&r.points), vec![("0".into(), 2), ("inf".into(), 2)]);
        assert_eq!(r.hurwitz_sum, r.hurwitz_expected);
    }

    #[test]
    fn g_ramifies_above_one_and_infinity() {
        let f = Field::prime(7).unwrap();
        let g = rf(&f, &[0, 4], &[1, 2, 1]);
        let r = ramification_data(&g, 4).unwrap();
        let got: Vec<(String, String, u32)> =
            r.points.iter().map(|p| (p.place.label(), p.image.label(), p.e)).collect();
        assert_eq!(got, vec![("1".into(), "1".into(), 2), ("-1".into(), "inf".into(), 2)]);
    }

    #[test]
    fn f_is_unbranched_outside_three_points() {
        let f = Field::prime(7).unwrap();
        let m = rf(&f, &[0, 0, 16], &[1, -4, 6, -4, 1]);
        let r = ramification_data(&m, 8).unwrap();
        let base = [Place::rational(&f, f.from_int(0)), Place::rational(&f, f.from_int(1)), Place::Infinity];
        for pt in &r.points {
            assert!(base.contains(&pt.image), "{:?}", pt);
        }
        assert_eq!(r.hurwitz_sum, r.hurwitz_expected);
        let pre = preimage_places(&m, &base, 8).unwrap();
        let pts: Vec<String> = points_over(&places_of(&pre), &f).iter().map(|p| p.display(&f)).collect();
        assert_eq!(pts, vec!["0", "1", "2", "-3", "-1", "inf"]);
    }

    #[test]
    fn preimages_of_three_points_under_g() {
        let f = Field::prime(7).unwrap();
        let g = rf(&f, &[0, 4], &[1, 2, 1]);
        let base = [Place::rational(&f, f.from_int(0)), Place::rational(&f, f.from_int(1)), Place::Infinity];
        let pre = preimage_places(&g, &base, 4).unwrap();
        let pl = places_of(&pre);
        assert_eq!(pl.iter().map(|p| p.label()).collect::<Vec<_>>(), vec!["0", "1", "-1", "inf"]);
        let id = RatFunc::x(&f);
        let inf = preimage_places(&id, &[Place::Infinity], 1).unwrap();
        assert_eq!(places_of(&inf), vec![Place::Infinity]);
    }

    #[test]
    fn non_rational_image_place() {
        let f = Field::prime(7).unwrap();
        // x ↦ x^2 sends the place x^2 - 3 to x - 3
        let h = rf(&f, &[0, 0, 1], &[1]);
        let pl = Place::Finite(Poly::from_ints(&f, &[-3, 0, 1]));
        assert_eq!(image_place(&h, &pl).unwrap(), Place::rational(&f, f.from_int(3)));
        // x ↦ x + 1 sends x^2 + 1 to x^2 - 2x + 2
        let t = rf(&f, &[1, 1], &[1]);
        let pl = Place::Finite(Poly::from_ints(&f, &[1, 0, 1]));
        assert_eq!(image_place(&t, &pl).unwrap(), Place::Finite(Poly::from_ints(&f, &[2, -2, 1])));
    }

    #[test]
    fn rejects_constant_and_inseparable() {
        let f = Field::prime(7).unwrap();
        assert!(matches!(check_map(&rf(&f, &[3], &[1])), Err(Error::ConstantMap(_))));
        let frob = rf(&f, &[0, 0, 0, 0, 0, 0, 0, 1], &[1]);
        assert!(matches!(ramification_data(&frob, 4), Err(Error::Inseparable(_))));
    }

    #[test]
    fn wild_ramification_is_flagged() {
        let f = Field::prime(3).unwrap();
        // x^3 + x has a pole of order 3 at infinity
        let m = rf(&f, &[0, 1, 0, 1], &[1]);
        let r = ramification_data(&m, 4).unwrap();
        assert!(!r.is_tame());
    }
}
