//! Closed points of the projective line and divisors supported on them.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::field::{Fe, Field};
use crate::poly::Poly;
use crate::ratfunc::Point;

/// `∞` or a monic irreducible polynomial over the base field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    /// The degree-one place `x = a`.
    pub fn rational(field: &Field, a: Fe) -> Place {
        Place::Finite(Poly::linear(field, a))
    }

    pub fn from_point(field: &Field, pt: Point) -> Place {
        match pt {
            Point::Infinity => Place::Infinity,
            Point::Finite(a) => Place::rational(field, a),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Infinity => 1,
            Place::Finite(p) => p.degree().unwrap_or(0),
        }
    }

    /// The coordinate of a degree-one place.
    pub fn rational_point(&self) -> Option<Point> {
        match self {
            Place::Infinity => Some(Point::Infinity),
            Place::Finite(p) if p.degree() == Some(1) => Some(Point::Finite(p.field().neg(p.coeff(0)))),
            _ => None,
        }
    }

    /// Whether the point (over a same-characteristic field `ext`) lies on this place.
    pub fn contains(&self, ext: &Field, pt: Point) -> bool {
        match (self, pt) {
            (Place::Infinity, Point::Infinity) => true,
            (Place::Finite(p), Point::Finite(a)) => p.eval_in(ext, a).is_zero(),
            _ => false,
        }
    }

    /// Points of this place rational over `ext`.
    pub fn points_in(&self, ext: &Field) -> Vec<Point> {
        match self {
            Place::Infinity => vec![Point::Infinity],
            Place::Finite(p) => {
                if !(ext.degree() as usize).is_multiple_of(p.degree().unwrap_or(1)) {
                    return Vec::new();
                }
                match p.lift(ext) {
                    Ok(l) => l.roots().into_iter().map(Point::Finite).collect(),
                    Err(_) => Vec::new(),
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Place::Infinity => "inf".into(),
            Place::Finite(p) => match self.rational_point() {
                Some(pt) => pt.display(p.field()),
                None => format!("[{}]", p.fmt_var("x")),
            },
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite places by degree (rational ones by coordinate code), then `∞`.
impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
            (Place::Infinity, _) => Ordering::Greater,
            (_, Place::Infinity) => Ordering::Less,
            (Place::Finite(a), Place::Finite(b)) => {
                let key = |p: &Poly| match p.degree() {
                    Some(1) => Some(p.field().neg(p.coeff(0))),
                    _ => None,
                };
                a.degree().cmp(&b.degree()).then_with(|| match (key(a), key(b)) {
                    (Some(x), Some(y)) => x.cmp(&y),
                    _ => a.cmp(b),
                })
            }
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A finite formal sum of places; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Divisor {
    terms: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn add_at(&mut self, place: Place, n: i64) {
        if n == 0 {
            return;
        }
        let e = self.terms.entry(place.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(&place);
        }
    }

    pub fn get(&self, place: &Place) -> i64 {
        self.terms.get(place).copied().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<&Place> {
        self.terms.keys().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.terms.iter().map(|(p, &n)| (p, n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ n_P · deg P`.
    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(p, n)| n * p.degree() as i64).sum()
    }

    pub fn add(&self, o: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, n) in o.iter() {
            out.add_at(p.clone(), n);
        }
        out
    }

    pub fn sub(&self, o: &Divisor) -> Divisor {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Divisor {
        let mut out = Divisor::zero();
        for (p, n) in self.iter() {
            out.add_at(p.clone(), n * k);
        }
        out
    }

    /// Coefficients reduced into `(-m/2, m/2]`, dropping multiples of `m`.
    pub fn reduce_mod(&self, m: i64) -> Divisor {
        let mut out = Divisor::zero();
        for (p, n) in self.iter() {
            let mut r = n.rem_euclid(m);
            if r > m / 2 {
                r -= m;
            }
            out.add_at(p.clone(), r);
        }
        out
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, n)| format!("{}*({})", n, p)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
