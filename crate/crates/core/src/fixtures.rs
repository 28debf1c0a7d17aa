//! Built-in operators and tower definitions.

use num_rational::Ratio;

use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::fuchsian::FuchsianOperator;
use crate::modular::deuring_poly;
use crate::place::Place;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;

pub const TOWER_FIXTURES: [&str; 3] = ["x0-2m", "exaprop", "x0-2-3m"];
pub const OPERATOR_FIXTURES: [&str; 5] = ["gauss", "x1", "x0-3", "x0-6", "gauss-f"];

/// Guard on the degree of the polynomial part searched for a rational solution.
pub const SOLUTION_GUARD: usize = 5000;

/// Pulls a correspondence back along `f` (`f(A) = a`, `f(B) = b`).
#[derive(Clone, Debug)]
pub struct PullbackData {
    pub f: RatFunc,
    /// Component of the pulled-back curve of correspondence, in `(g, h)` coordinates.
    pub component: BiPoly,
    pub g_tilde: RatFunc,
    pub h_tilde: RatFunc,
    pub phi_map: RatFunc,
}

/// Unvalidated tower input: a base correspondence, optionally pulled back.
#[derive(Clone, Debug)]
pub struct TowerDefinition {
    pub name: String,
    pub p: u64,
    /// Extension degree used when none is requested.
    pub k: u32,
    pub g: RatFunc,
    pub h: RatFunc,
    pub s: Vec<Place>,
    pub operator: FuchsianOperator,
    pub phi: RatFunc,
    pub pullback: Option<PullbackData>,
    /// Level `ℓ` of the modular curve `X_{−1} = X_0(ℓ)`, if any.
    pub modular_level: Option<u64>,
}

fn rf(f: &Field, n: &[i64], d: &[i64]) -> RatFunc {
    RatFunc::from_ints(f, n, d).expect("nonzero denominator")
}

fn odd_prime_field(p: u64, min: u64) -> Result<Field> {
    let f = Field::prime(p)?;
    if p < min {
        return Err(Error::InvalidCharacteristic { p, reason: if min > 3 { "need p ≥ 5" } else { "need p odd" } });
    }
    Ok(f)
}

fn r(n: i64, d: i64) -> Ratio<i64> {
    Ratio::new(n, d)
}

pub fn gauss_operator(p: u64) -> Result<FuchsianOperator> {
    FuchsianOperator::gauss(&odd_prime_field(p, 3)?)
}

/// The operator on the `j`-line with exponents `0, 1/3; 0, 1/2; 1/12, 1/12` at `0, 1728, ∞`.
pub fn x1_operator(p: u64) -> Result<FuchsianOperator> {
    let f = odd_prime_field(p, 5)?;
    let z = r(0, 1);
    let base = FuchsianOperator::riemann(&f, (z, r(1, 3)), (z, r(1, 2)), (r(1, 12), r(1, 12)))?;
    base.pullback(&rf(&f, &[0, 1], &[1728]))
}

/// The operator on `X_0(3)` with cusps at `0, 1` and the elliptic point at `∞`.
pub fn x0_3_operator(p: u64) -> Result<FuchsianOperator> {
    let f = odd_prime_field(p, 5)?;
    FuchsianOperator::riemann(&f, (r(1, 12), r(1, 12)), (r(1, 4), r(1, 4)), (r(0, 1), r(1, 3)))
}

/// The cover `X_0(6) → X_0(3)`, `x = −27y^2/(y−4)^3`.
pub fn x0_6_to_3(f: &Field) -> RatFunc {
    rf(f, &[0, 0, -27], &[-64, 48, -12, 1])
}

pub fn x0_6_operator(p: u64) -> Result<FuchsianOperator> {
    let f = odd_prime_field(p, 5)?;
    x0_3_operator(p)?.pullback(&x0_6_to_3(&f))
}

/// `16s^2/(s−1)^4`.
pub fn f_map(f: &Field) -> RatFunc {
    rf(f, &[0, 0, 16], &[1, -4, 6, -4, 1])
}

pub fn gauss_f_operator(p: u64) -> Result<FuchsianOperator> {
    let f = odd_prime_field(p, 3)?;
    FuchsianOperator::gauss(&f)?.pullback(&f_map(&f))
}

pub fn operator_fixture(name: &str, p: u64) -> Result<FuchsianOperator> {
    match name {
        "gauss" => gauss_operator(p),
        "x1" => x1_operator(p),
        "x0-3" => x0_3_operator(p),
        "x0-6" => x0_6_operator(p),
        "gauss-f" => gauss_f_operator(p),
        _ => Err(Error::Parse(format!("unknown operator fixture `{}`", name))),
    }
}

/// `−n (n/(n−1))^{n−1} (s^n − s^{n−1})`, unbranched outside `{0, 1, ∞}`.
pub fn f_n(n: u32, field: &Field) -> Result<RatFunc> {
    if n < 2 {
        return Err(Error::InvalidDegree);
    }
    let n64 = n as i64;
    let ratio = field.div(field.from_int(n64), field.from_int(n64 - 1))?;
    let c = field.neg(field.mul(field.from_int(n64), field.pow(ratio, (n - 1) as u64)));
    let mut coeffs = vec![field.zero(); n as usize + 1];
    coeffs[n as usize] = c;
    coeffs[n as usize - 1] = field.neg(c);
    Ok(RatFunc::from_poly(Poly::new(field.clone(), coeffs)))
}

pub fn sigma6(f: &Field) -> RatFunc {
    rf(f, &[8, -8], &[8, 1])
}

pub fn sigma18(f: &Field) -> RatFunc {
    rf(f, &[2, -2], &[2, 1])
}

fn three_points(f: &Field) -> Vec<Place> {
    vec![Place::rational(f, f.zero()), Place::rational(f, f.one()), Place::Infinity]
}

/// `(4t/(t+1)^2, t^2)` with the Gauss operator and the Deuring polynomial.
pub fn x0_2m(p: u64) -> Result<TowerDefinition> {
    let f = odd_prime_field(p, 3)?;
    Ok(TowerDefinition {
        name: "x0-2m".into(),
        p,
        k: 2,
        g: rf(&f, &[0, 4], &[1, 2, 1]),
        h: rf(&f, &[0, 0, 1], &[1]),
        s: three_points(&f),
        operator: FuchsianOperator::gauss(&f)?,
        phi: RatFunc::from_poly(deuring_poly(p)?),
        pullback: None,
        modular_level: Some(2),
    })
}

/// The pullback of `x0-2m` along `16s^2/(s−1)^4`: `(−y(y−1)/(y+1), y^2)`.
pub fn exaprop(p: u64) -> Result<TowerDefinition> {
    let mut def = x0_2m(p)?;
    let f = def.g.field().clone();
    // −A + A^2 + 4AB + B^2 − AB^2 with A ↔ B, so that (g̃, h̃) lies on it
    let component = BiPoly::from_terms(&f, &[(0, 1, -1), (0, 2, 1), (1, 1, 4), (2, 0, 1), (2, 1, -1)]);
    def.name = "exaprop".into();
    def.modular_level = None;
    def.pullback = Some(PullbackData {
        f: f_map(&f),
        component,
        g_tilde: rf(&f, &[0, 1, -1], &[1, 1]),
        h_tilde: rf(&f, &[0, 0, 1], &[1]),
        phi_map: rf(&f, &[0, 0, 4], &[1, 0, -2, 0, 1]),
    });
    Ok(def)
}

/// `X_0(18) ⇉ X_0(6)`: `g = z^3`, `h = σ_6∘g∘σ_18`, with the operator pulled back from `X_0(3)`.
pub fn x0_2_3m(p: u64) -> Result<TowerDefinition> {
    let f = odd_prime_field(p, 5)?;
    let g = rf(&f, &[0, 0, 0, 1], &[1]);
    let h = sigma6(&f).compose(&g).compose(&sigma18(&f));
    let operator = x0_6_operator(p)?;
    let phi = operator
        .rational_solution(p as usize, SOLUTION_GUARD)?
        .ok_or_else(|| Error::InvariantViolation(format!("no rational solution of the X_0(6) operator mod {}", p)))?;
    let s = vec![
        Place::rational(&f, f.zero()),
        Place::rational(&f, f.one()),
        Place::rational(&f, f.from_int(-8)),
        Place::Infinity,
    ];
    Ok(TowerDefinition {
        name: "x0-2-3m".into(),
        p,
        k: 2,
        g,
        h,
        s,
        operator,
        phi,
        pullback: None,
        modular_level: Some(6),
    })
}

pub fn tower_fixture(name: &str, p: u64) -> Result<TowerDefinition> {
    match name {
        "x0-2m" | "goodexa" => x0_2m(p),
        "exaprop" => exaprop(p),
        "x0-2-3m" => x0_2_3m(p),
        _ => Err(Error::Parse(format!("unknown tower fixture `{}`", name))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::ramification_data;

    #[test]
    fn atkin_lehner_maps() {
        for p in [5u64, 7, 11, 13, 17] {
            let f = Field::prime(p).unwrap();
            let x = RatFunc::x(&f);
            assert_eq!(sigma6(&f).compose(&sigma6(&f)), x);
            assert_eq!(sigma18(&f).compose(&sigma18(&f)), x);
            let def = x0_2_3m(p).unwrap();
            assert_eq!(def.h, rf(&f, &[0, 4, -2, 1], &[1, 1, 1]));
        }
    }

    #[test]
    fn x0_6_operator_singularities() {
        let f = Field::prime(7).unwrap();
        let l = x0_6_operator(7).unwrap();
        let labels: Vec<String> = l.singular_places().iter().map(|p| p.label()).collect();
        assert_eq!(labels, vec!["0", "1", "-1", "inf"]);
        assert_eq!(f.from_int(-8), f.from_int(-1));
        // widths 2, 3, 6, 1 give exponents w/12
        for (a, w) in [(0i64, 2i64), (1, 3), (-8, 6)] {
            let d = l.local_data(&Place::rational(&f, f.from_int(a))).unwrap();
            let e = crate::fuchsian::ratio_to_fe(&d.field, r(w, 12)).unwrap();
            assert_eq!(d.exponents, (e, e));
        }
        let four = l.local_data(&Place::rational(&f, f.from_int(4))).unwrap();
        assert!(!four.singular);
    }

    #[test]
    fn x0_2_3m_solution() {
        for p in [5u64, 7, 11, 13] {
            let def = x0_2_3m(p).unwrap();
            assert!(def.operator.annihilates(&def.phi));
        }
    }

    #[test]
    fn f_n_is_unbranched_outside_three_points() {
        let f = Field::prime(7).unwrap();
        for n in [2u32, 3, 4] {
            let m = f_n(n, &f).unwrap();
            let r = ramification_data(&m, 8).unwrap();
            for pt in &r.points {
                assert!(three_points(&f).contains(&pt.image), "n = {} {:?}", n, pt);
            }
        }
    }
}
