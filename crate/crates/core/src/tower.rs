//! Recursive towers `h(x_i) = g(x_{i−1})` built from correspondences.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bipoly::{implicitize, is_singular_at, BiPoly};
use crate::error::{Error, PullbackFailure, Result, Violation};
use crate::field::{Fe, Field};
use crate::fixtures::{PullbackData, TowerDefinition};
use crate::fuchsian::{check_adapted, FuchsianOperator};
use crate::maps::{check_map, fiber_poly, geometric_count, image_place, places_of, preimage_places, ramification_data};
use crate::place::Place;
use crate::poly::Poly;
use crate::ratfunc::{Point, RatFunc};

pub const DEFAULT_EXT_BOUND: usize = 12;
pub const DEFAULT_ENUMERATION_GUARD: u64 = 50_000_000;
pub const DEFAULT_SEED: u64 = 0x5eed;
/// Largest `p^3` for which the Möbius subcover search runs.
pub const MOBIUS_SEARCH_GUARD: u64 = 120_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Disjointness {
    /// A Möbius `μ` over `F_p` with `h = g∘μ` was searched for and not found.
    NoCommonFactorFound,
    /// The search was skipped because `p^3` exceeds the guard.
    NotSearched,
}

/// A validated correspondence `(g, h): X_0 ⇉ X_{−1}` together with its operator data.
#[derive(Clone, Debug)]
pub struct Correspondence {
    pub g: RatFunc,
    pub h: RatFunc,
    pub s: Vec<Place>,
    pub operator: FuchsianOperator,
    pub phi: RatFunc,
    /// `g^{−1}(S) = h^{−1}(S)`.
    pub s_frak: Vec<Place>,
    pub delta: usize,
    /// Twist relating the pullbacks of the operator along `g` and `h`.
    pub twist: RatFunc,
    pub disjointness: Disjointness,
    pub ext_bound: usize,
}

impl Correspondence {
    pub fn field(&self) -> &Field {
        self.g.field()
    }

    pub fn p(&self) -> u64 {
        self.field().characteristic()
    }
}

fn labels(places: &[Place]) -> Vec<String> {
    places.iter().map(|p| p.label()).collect()
}

fn mobius_search(g: &RatFunc, h: &RatFunc) -> Option<RatFunc> {
    let f = g.field();
    let els: Vec<Fe> = f.elements().collect();
    for &a in &els {
        for &b in &els {
            for &c in &els {
                for &d in &els {
                    // normalize: first nonzero of (c, d) is 1
                    let lead = if c.is_zero() { d } else { c };
                    if lead != Fe::ONE || f.sub(f.mul(a, d), f.mul(b, c)).is_zero() {
                        continue;
                    }
                    let mu = RatFunc::new(Poly::new(f.clone(), vec![b, a]), Poly::new(f.clone(), vec![d, c]))
                        .expect("nonzero denominator");
                    if g.compose(&mu) == *h {
                        return Some(mu);
                    }
                }
            }
        }
    }
    None
}

/// Checks the standing assumptions; every failed one is reported.
pub fn validate_correspondence(
    g: &RatFunc,
    h: &RatFunc,
    s: &[Place],
    operator: &FuchsianOperator,
    phi: &RatFunc,
    ext_bound: usize,
) -> Result<Correspondence> {
    if g.field() != h.field() || g.field() != operator.field() || g.field() != phi.field() {
        return Err(Error::Assumptions(vec![Violation::FieldMismatch]));
    }
    let mut violations = Vec::new();
    let (dg, dh) = (g.degree(), h.degree());
    if dg != dh {
        violations.push(Violation::DegreeMismatch { deg_g: dg, deg_h: dh });
    }
    for (name, m) in [("g", g), ("h", h)] {
        if check_map(m).is_err() {
            violations.push(Violation::NotSeparable { map: name });
        }
    }
    if !violations.is_empty() {
        return Err(Error::Assumptions(violations));
    }
    for (name, m) in [("g", g), ("h", h)] {
        for pt in ramification_data(m, ext_bound)?.wild() {
            violations.push(Violation::Wild { map: name, place: pt.place.label(), e: pt.e });
        }
    }
    let g_pre = places_of(&preimage_places(g, s, ext_bound)?);
    let h_pre = places_of(&preimage_places(h, s, ext_bound)?);
    if g_pre != h_pre {
        violations.push(Violation::PreimageMismatch { g_pre: labels(&g_pre), h_pre: labels(&h_pre) });
    }
    if phi.is_zero() || !operator.annihilates(phi) {
        violations.push(Violation::NotASolution);
    }
    let adapted = check_adapted(g, h, operator)?;
    if !adapted.adapted {
        violations.push(Violation::NotAdapted);
    }
    let p = g.field().characteristic();
    let disjointness = if dg > 1 && g.field().is_prime_field() && p.pow(3) <= MOBIUS_SEARCH_GUARD {
        match mobius_search(g, h) {
            Some(mu) => {
                violations.push(Violation::NotDisjoint { mobius: mu.to_string() });
                Disjointness::NoCommonFactorFound
            }
            None => Disjointness::NoCommonFactorFound,
        }
    } else if dg == 1 {
        Disjointness::NoCommonFactorFound
    } else {
        Disjointness::NotSearched
    };
    if !violations.is_empty() {
        return Err(Error::Assumptions(violations));
    }
    Ok(Correspondence {
        g: g.clone(),
        h: h.clone(),
        s: s.to_vec(),
        operator: operator.clone(),
        phi: phi.clone(),
        s_frak: g_pre,
        delta: dg,
        twist: adapted.twist.expect("adapted"),
        disjointness,
        ext_bound,
    })
}

/// Places of `X_0` totally ramified under `h` whose forward orbit stays totally ramified.
#[derive(Clone, Debug)]
pub struct Witness {
    /// `δ = 1`: every point is a witness.
    pub vacuous: bool,
    pub places: Vec<Place>,
    pub depth: usize,
}

impl Witness {
    pub fn found(&self) -> bool {
        self.vacuous || !self.places.is_empty()
    }
}

pub fn totally_branched_witness(c: &Correspondence, depth: usize) -> Result<Witness> {
    if c.delta == 1 {
        return Ok(Witness { vacuous: true, places: Vec::new(), depth });
    }
    let rh = ramification_data(&c.h, c.ext_bound)?;
    let rg = ramification_data(&c.g, c.ext_bound)?;
    let total: Vec<(Place, Place)> =
        rh.points.iter().filter(|pt| pt.e as usize == c.delta).map(|pt| (pt.place.clone(), pt.image.clone())).collect();
    let g_ramified = |pl: &Place| rg.points.iter().any(|pt| &pt.place == pl);
    let mut places = Vec::new();
    'outer: for (start, _) in &total {
        let mut x = start.clone();
        for _ in 0..depth {
            if g_ramified(&x) {
                continue 'outer;
            }
            let y = image_place(&c.g, &x)?;
            match total.iter().find(|(_, img)| *img == y) {
                Some((next, _)) => x = next.clone(),
                None => continue 'outer,
            }
        }
        places.push(start.clone());
    }
    places.sort();
    Ok(Witness { vacuous: false, places, depth })
}

/// `𝔗` and `T = g(𝔗)`.
#[derive(Clone, Debug)]
pub struct SplittingSet {
    pub t_frak: Vec<Place>,
    pub t: Vec<Place>,
    /// `#𝔗` over the algebraic closure.
    pub count: usize,
}

fn zero_set_mod_p(u: &RatFunc, exclude: &[Place], p: u64) -> Result<Vec<Place>> {
    let mut out: Vec<Place> = u
        .divisor()?
        .iter()
        .filter(|(pl, n)| n.rem_euclid(p as i64) != 0 && !exclude.contains(pl))
        .map(|(pl, _)| pl.clone())
        .collect();
    out.sort();
    Ok(out)
}

pub fn splitting_set(c: &Correspondence) -> Result<SplittingSet> {
    let p = c.p();
    let g_form = zero_set_mod_p(&c.phi.compose(&c.g), &c.s_frak, p)?;
    let h_form = zero_set_mod_p(&c.phi.compose(&c.h), &c.s_frak, p)?;
    if g_form != h_form {
        return Err(Error::InvariantViolation(format!(
            "splitting set differs between the g-form {:?} and the h-form {:?}",
            labels(&g_form),
            labels(&h_form)
        )));
    }
    for pl in &g_form {
        if pl.degree() > c.ext_bound {
            return Err(Error::ExtensionBound { degree: pl.degree() as u32, bound: c.ext_bound as u32 });
        }
    }
    let mut tg: Vec<Place> = g_form.iter().map(|pl| image_place(&c.g, pl)).collect::<Result<_>>()?;
    let mut th: Vec<Place> = g_form.iter().map(|pl| image_place(&c.h, pl)).collect::<Result<_>>()?;
    tg.sort();
    tg.dedup();
    th.sort();
    th.dedup();
    if tg != th {
        return Err(Error::InvariantViolation(format!(
            "g(𝔗) = {:?} differs from h(𝔗) = {:?}",
            labels(&tg),
            labels(&th)
        )));
    }
    Ok(SplittingSet { count: geometric_count(&g_form), t_frak: g_form, t: tg })
}

/// `g(X_0) + (#𝔖 − 2)/2` with `X_0 = P^1`.
pub fn genus_bound(c: &Correspondence) -> Ratio<i64> {
    Ratio::new(geometric_count(&c.s_frak) as i64 - 2, 2)
}

/// Genus of `X_1: y^2 = g(x)` for `h = x^2`.
pub fn level1_kummer_genus(c: &Correspondence) -> Result<i64> {
    let f = c.field();
    if c.h != RatFunc::from_ints(f, &[0, 0, 1], &[1])? || c.p() == 2 {
        return Err(Error::Unsupported("level-one genus needs h = x^2 in odd characteristic".into()));
    }
    let odd: usize = c.g.divisor()?.iter().filter(|(_, n)| n % 2 != 0).map(|(pl, _)| pl.degree()).sum();
    Ok((odd as i64 - 2) / 2)
}

fn point_index(q: usize, pt: Point) -> usize {
    match pt {
        Point::Finite(x) => x.code() as usize,
        Point::Infinity => q,
    }
}

fn index_point(q: usize, i: usize) -> Point {
    if i == q {
        Point::Infinity
    } else {
        Point::Finite(Fe(i as u64))
    }
}

/// The recursion evaluated on `P^1(F_{p^k})`.
struct Tables {
    q: usize,
    gval: Vec<usize>,
    hfib: Vec<Vec<usize>>,
    in_s: Vec<bool>,
    in_t: Vec<bool>,
    h_branch: Vec<bool>,
}

fn tables(c: &Correspondence, split: &SplittingSet, k: u32) -> Result<Tables> {
    let ext = Field::new(c.p(), k)?;
    let q = ext.order() as usize;
    let g = c.g.lift(&ext)?;
    let h = c.h.lift(&ext)?;
    let pts: Vec<Point> = (0..=q).map(|i| index_point(q, i)).collect();
    let gval: Vec<usize> = pts.par_iter().map(|&x| point_index(q, g.eval(x))).collect();
    let hval: Vec<usize> = pts.par_iter().map(|&x| point_index(q, h.eval(x))).collect();
    let mut hfib = vec![Vec::new(); q + 1];
    for (x, &y) in hval.iter().enumerate() {
        hfib[y].push(x);
    }
    let member = |set: &[Place]| -> Vec<bool> {
        let mut v = vec![false; q + 1];
        for pl in set {
            for pt in pl.points_in(&ext) {
                v[point_index(q, pt)] = true;
            }
        }
        v
    };
    let branch: Vec<Place> = ramification_data(&c.h, c.ext_bound)?.points.into_iter().map(|pt| pt.image).collect();
    Ok(Tables { q, gval, hfib, in_s: member(&c.s_frak), in_t: member(&split.t_frak), h_branch: member(&branch) })
}

/// Edge properties of the recursion, checked on every pair `h(x') = g(x)` over `F_{p^k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeInvariants {
    /// `x ∈ 𝔖 ⇔ x' ∈ 𝔖`.
    pub s_closure: bool,
    /// `x ∈ 𝔗 ⇔ x' ∈ 𝔗`.
    pub t_closure: bool,
    /// Outside `𝔖`, `g(x)` is not a branch value of `h` and the fiber has at most `δ` points.
    pub branch_confined: bool,
}

impl EdgeInvariants {
    pub fn holds(&self) -> bool {
        self.s_closure && self.t_closure && self.branch_confined
    }
}

fn edge_invariants(t: &Tables, delta: usize) -> EdgeInvariants {
    let mut inv = EdgeInvariants { s_closure: true, t_closure: true, branch_confined: true };
    for x in 0..=t.q {
        let y = t.gval[x];
        let fib = &t.hfib[y];
        if !t.in_s[x] && (t.h_branch[y] || fib.len() > delta) {
            inv.branch_confined = false;
        }
        for &x1 in fib {
            inv.s_closure &= t.in_s[x] == t.in_s[x1];
            inv.t_closure &= t.in_t[x] == t.in_t[x1];
        }
    }
    inv
}

#[derive(Clone, Debug)]
pub struct LevelData {
    pub m: usize,
    pub k: u32,
    pub q: u64,
    /// Tuples `(x_0, …, x_m)` over `P^1(F_q)`.
    pub count: u64,
    /// Tuples with `x_0 ∈ 𝔗`.
    pub split_count: u64,
    /// Tuples with `x_0 ∈ 𝔖`, possibly singular on the affine model.
    pub above_s: u64,
    /// Every point above `𝔗` met along the way had `δ` rational successors.
    pub split_fibers_full: bool,
    pub invariants: EdgeInvariants,
}

#[derive(Clone, Copy, Debug, Default)]
struct Counts {
    total: u64,
    short_split_fiber: bool,
}

fn dfs(t: &Tables, x: usize, depth: usize, delta: usize) -> Counts {
    if depth == 0 {
        return Counts { total: 1, short_split_fiber: false };
    }
    let fib = &t.hfib[t.gval[x]];
    let mut acc = Counts { total: 0, short_split_fiber: t.in_t[x] && fib.len() != delta };
    for &x1 in fib {
        let c = dfs(t, x1, depth - 1, delta);
        acc.total += c.total;
        acc.short_split_fiber |= c.short_split_fiber;
    }
    acc
}

/// Counts level `m` over `F_{p^k}` by depth-first search from every `x_0`.
pub fn enumerate_level(c: &Correspondence, split: &SplittingSet, m: usize, k: u32, guard: u64) -> Result<LevelData> {
    let q = c.field().characteristic().checked_pow(k).ok_or_else(|| Error::guard("field order", u64::MAX, guard))?;
    let needed = (q + 1).saturating_mul((c.delta as u64).saturating_pow(m as u32));
    if needed > guard {
        return Err(Error::guard(format!("level {} over F_{}", m, q), needed, guard));
    }
    let t = tables(c, split, k)?;
    let per_root: Vec<(usize, Counts)> = (0..=t.q).into_par_iter().map(|x| (x, dfs(&t, x, m, c.delta))).collect();
    let mut data = LevelData {
        m,
        k,
        q,
        count: 0,
        split_count: 0,
        above_s: 0,
        split_fibers_full: true,
        invariants: edge_invariants(&t, c.delta),
    };
    for (x, cnt) in per_root {
        data.count += cnt.total;
        if t.in_t[x] {
            data.split_count += cnt.total;
            data.split_fibers_full &= !cnt.short_split_fiber;
        }
        if t.in_s[x] {
            data.above_s += cnt.total;
        }
    }
    Ok(data)
}

/// Points of level 1 over `x_0`: roots of `h(x) = g(x_0)` in `ext`, with `∞` if it lies over it.
fn level1_fiber(c: &Correspondence, ext: &Field, x0: Point) -> Result<Vec<Point>> {
    let g = c.g.lift(ext)?;
    let h = c.h.lift(ext)?;
    let y = g.eval(x0);
    let target = match y {
        Point::Infinity => Place::Infinity,
        Point::Finite(v) => Place::rational(ext, v),
    };
    let mut pts: Vec<Point> = fiber_poly(&h, &target).roots().into_iter().map(Point::Finite).collect();
    if h.eval(Point::Infinity) == y {
        pts.push(Point::Infinity);
    }
    Ok(pts)
}

#[derive(Clone, Debug)]
pub struct DegreeOneCheck {
    pub partial_degrees_match: bool,
    /// Sampled points of `X_0(F_{p^k})` whose image on `C` has a single preimage.
    pub samples: usize,
    pub sample_failures: usize,
    pub seed: u64,
}

impl DegreeOneCheck {
    pub fn holds(&self) -> bool {
        self.partial_degrees_match && self.sample_failures == 0
    }
}

/// Compares `deg_a C, deg_b C` with `deg h, deg g` and samples fiber sizes of `X_0 → C`.
pub fn check_degree_one(
    c: &Correspondence,
    curve: &BiPoly,
    k: u32,
    samples: usize,
    seed: u64,
) -> Result<DegreeOneCheck> {
    let partial_degrees_match = curve.deg_a() == Some(c.h.degree()) && curve.deg_b() == Some(c.g.degree());
    let ext = Field::new(c.p(), k)?;
    let g = c.g.lift(&ext)?;
    let h = c.h.lift(&ext)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut taken = 0;
    for _ in 0..samples * 4 {
        if taken == samples {
            break;
        }
        let x = Fe(rng.gen_range(0..ext.order()));
        let (Point::Finite(a), Point::Finite(b)) = (g.eval(Point::Finite(x)), h.eval(Point::Finite(x))) else {
            continue;
        };
        if is_singular_at(curve, &ext, Point::Finite(a), Point::Finite(b))? != Some(false) {
            continue;
        }
        taken += 1;
        let fa = g.num().sub(&g.den().scale(a));
        let fb = h.num().sub(&h.den().scale(b));
        if fa.gcd(&fb).degree() != Some(1) {
            failures += 1;
        }
    }
    Ok(DegreeOneCheck { partial_degrees_match, samples: taken, sample_failures: failures, seed })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplittingDegree {
    Exact(u32),
    /// Not reached within the bound.
    Above(u32),
}

#[derive(Clone, Debug)]
pub struct MinimalSplitting {
    pub degree: SplittingDegree,
    /// `lcm` of the degrees of the places of `T`, when the degree-one certificate applies.
    pub certificate: Option<u32>,
    pub degree_one: Option<DegreeOneCheck>,
}

fn lcm(a: u32, b: u32) -> u32 {
    num_integer::lcm(a, b)
}

/// Smallest `k ≤ k_max` over which `𝔗` and every level-one point above it is rational.
pub fn minimal_splitting_field(
    c: &Correspondence,
    split: &SplittingSet,
    k_max: u32,
    seed: u64,
) -> Result<MinimalSplitting> {
    if split.t_frak.is_empty() {
        return Ok(MinimalSplitting { degree: SplittingDegree::Exact(1), certificate: None, degree_one: None });
    }
    let base = split.t_frak.iter().fold(1u32, |acc, pl| lcm(acc, pl.degree() as u32));
    let mut degree = SplittingDegree::Above(k_max);
    let mut k = base;
    while k <= k_max {
        let ext = Field::new(c.p(), k)?;
        let mut ok = true;
        'places: for pl in &split.t_frak {
            for x0 in pl.points_in(&ext) {
                if level1_fiber(c, &ext, x0)?.len() != c.delta {
                    ok = false;
                    break 'places;
                }
            }
        }
        if ok {
            degree = SplittingDegree::Exact(k);
            break;
        }
        k += base;
    }
    let (certificate, degree_one) = zieve_certificate(c, split, seed)?;
    if let (Some(cert), SplittingDegree::Exact(d)) = (certificate, &degree) {
        if cert != *d {
            return Err(Error::InvariantViolation(format!(
                "degree-one certificate gives k = {} but enumeration gives k = {}",
                cert, d
            )));
        }
    }
    Ok(MinimalSplitting { degree, certificate, degree_one })
}

fn zieve_certificate(
    c: &Correspondence,
    split: &SplittingSet,
    seed: u64,
) -> Result<(Option<u32>, Option<DegreeOneCheck>)> {
    let imp = implicitize(&c.g, &c.h)?;
    let k_t = split.t.iter().fold(1u32, |acc, pl| lcm(acc, pl.degree() as u32));
    let k_sample = k_t.max(2);
    let check = check_degree_one(c, &imp.curve, k_sample, 16, seed)?;
    if !check.holds() || imp.degenerate() {
        return Ok((None, Some(check)));
    }
    let ext = Field::new(c.p(), split.t_frak.iter().fold(k_t, |acc, pl| lcm(acc, pl.degree() as u32)))?;
    let g = c.g.lift(&ext)?;
    let h = c.h.lift(&ext)?;
    for pl in &split.t_frak {
        for alpha in pl.points_in(&ext) {
            if is_singular_at(&imp.curve, &ext, g.eval(alpha), h.eval(alpha))? != Some(false) {
                return Ok((None, Some(check)));
            }
        }
    }
    Ok((Some(k_t), Some(check)))
}

#[derive(Clone, Debug)]
pub struct OptimalityReport {
    pub good: bool,
    /// Some `P ∉ S` has `ord_P(Φ) ≢ 0 mod p`.
    pub good_hypothesis: bool,
    pub optimal: bool,
    pub q: Option<u64>,
    pub t_count: usize,
    pub s_count: usize,
    pub genus_bound: Ratio<i64>,
    /// `#𝔗`, a lower bound for the splitting rate.
    pub nu_lower: u64,
    /// `#𝔗 / genus_bound`.
    pub lambda_lower: Option<Ratio<i64>>,
}

fn isqrt_exact(q: u64) -> Option<u64> {
    let r = (q as f64).sqrt().round() as u64;
    (r * r == q).then_some(r)
}

pub fn optimality_report(
    c: &Correspondence,
    split: &SplittingSet,
    minimal: &MinimalSplitting,
) -> Result<OptimalityReport> {
    let p = c.p();
    let good_hypothesis = zero_set_mod_p(&c.phi, &c.s, p)?.iter().any(|pl| !c.s.contains(pl));
    let t_count = split.count;
    let s_count = geometric_count(&c.s_frak);
    let gb = genus_bound(c);
    let q = match minimal.degree {
        SplittingDegree::Exact(k) => Some(p.pow(k)),
        SplittingDegree::Above(_) => None,
    };
    let optimal = match q.and_then(isqrt_exact) {
        Some(r) if t_count > 0 => 2 * t_count as i64 == (r as i64 - 1) * (s_count as i64 - 2),
        _ => false,
    };
    let lambda_lower = (gb > Ratio::from_integer(0)).then(|| Ratio::from_integer(t_count as i64) / gb);
    Ok(OptimalityReport {
        good: t_count > 0,
        good_hypothesis,
        optimal,
        q,
        t_count,
        s_count,
        genus_bound: gb,
        nu_lower: t_count as u64,
        lambda_lower,
    })
}

/// `D(r1, r2)` for rational functions `r1, r2`.
pub fn bipoly_at(d: &BiPoly, r1: &RatFunc, r2: &RatFunc) -> RatFunc {
    let f = d.field();
    let mut acc = RatFunc::zero(f);
    let mut pow = RatFunc::one(f);
    for row in d.rows() {
        acc = acc.add(&RatFunc::from_poly(row.clone()).compose(r2).mul(&pow));
        pow = pow.mul(r1);
    }
    acc
}

#[derive(Clone, Debug)]
pub struct PullbackReport {
    pub component_divides: bool,
    pub component_vanishes: bool,
    pub diagram_commutes: bool,
    pub adapted: bool,
    pub twist: Option<RatFunc>,
    pub correspondence: Correspondence,
}

/// Verifies the pullback of `base` along `f` and validates the pulled-back correspondence.
pub fn verify_pullback_correspondence(base: &Correspondence, data: &PullbackData) -> Result<PullbackReport> {
    let f = &data.f;
    check_map(f)?;
    let curve = implicitize(&base.g, &base.h)?.curve;
    let pulled = curve.compose_maps(f, f);
    if !data.component.divides(&pulled) {
        return Err(Error::Pullback(PullbackFailure::ComponentNotFactor));
    }
    if !bipoly_at(&data.component, &data.g_tilde, &data.h_tilde).is_zero() {
        return Err(Error::Pullback(PullbackFailure::ComponentNotVanishing));
    }
    if base.g.compose(&data.phi_map) != f.compose(&data.g_tilde) {
        return Err(Error::Pullback(PullbackFailure::DiagramNotCommuting("g∘φ ≠ f∘g~")));
    }
    if base.h.compose(&data.phi_map) != f.compose(&data.h_tilde) {
        return Err(Error::Pullback(PullbackFailure::DiagramNotCommuting("h∘φ ≠ f∘h~")));
    }
    let lf = base.operator.pullback(f)?;
    let adapted = check_adapted(&data.g_tilde, &data.h_tilde, &lf)?;
    if !adapted.adapted {
        return Err(Error::Pullback(PullbackFailure::NotAdapted));
    }
    let s_f = places_of(&preimage_places(f, &base.s, base.ext_bound)?);
    let phi_f = base.phi.compose(f);
    let correspondence = validate_correspondence(&data.g_tilde, &data.h_tilde, &s_f, &lf, &phi_f, base.ext_bound)?;
    Ok(PullbackReport {
        component_divides: true,
        component_vanishes: true,
        diagram_commutes: true,
        adapted: true,
        twist: adapted.twist,
        correspondence,
    })
}

/// The correspondence a definition describes, after its pullback if it has one.
pub fn resolve(def: &TowerDefinition, ext_bound: usize) -> Result<(Correspondence, Option<PullbackReport>)> {
    let base = validate_correspondence(&def.g, &def.h, &def.s, &def.operator, &def.phi, ext_bound)?;
    match &def.pullback {
        None => Ok((base, None)),
        Some(data) => {
            let rep = verify_pullback_correspondence(&base, data)?;
            Ok((rep.correspondence.clone(), Some(rep)))
        }
    }
}

/// Every divisor in sight has degree zero.
pub fn divisor_degrees_vanish(c: &Correspondence) -> Result<bool> {
    let fns = [c.g.clone(), c.h.clone(), c.phi.clone(), c.phi.compose(&c.g), c.phi.compose(&c.h)];
    for u in &fns {
        if u.divisor()?.degree() != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{exaprop, x0_2_3m, x0_2m};

    fn goodexa(p: u64) -> Correspondence {
        resolve(&x0_2m(p).unwrap(), DEFAULT_EXT_BOUND).unwrap().0
    }

    fn brute_force(c: &Correspondence, m: usize, k: u32) -> u64 {
        let ext = Field::new(c.p(), k).unwrap();
        let g = c.g.lift(&ext).unwrap();
        let h = c.h.lift(&ext).unwrap();
        let pts: Vec<Point> = ext.elements().map(Point::Finite).chain([Point::Infinity]).collect();
        let mut count = 0;
        let mut idx = vec![0usize; m + 1];
        loop {
            if (1..=m).all(|i| h.eval(pts[idx[i]]) == g.eval(pts[idx[i - 1]])) {
                count += 1;
            }
            let mut j = 0;
            loop {
                if j > m {
                    return count;
                }
                idx[j] += 1;
                if idx[j] < pts.len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }

    #[test]
    fn goodexa_validates() {
        let c = goodexa(7);
        assert_eq!(c.delta, 2);
        assert_eq!(labels(&c.s_frak), vec!["0", "1", "-1", "inf"]);
        assert_eq!(genus_bound(&c), Ratio::from_integer(1));
        assert_eq!(level1_kummer_genus(&c).unwrap(), 0);
        assert_eq!(c.twist, RatFunc::from_ints(c.field(), &[-1], &[1, 1]).unwrap());
        let w = totally_branched_witness(&c, 8).unwrap();
        assert!(w.places.contains(&Place::rational(c.field(), Fe::ZERO)));
    }

    #[test]
    fn rejects_degree_mismatch() {
        let d = x0_2m(7).unwrap();
        let cube = RatFunc::from_ints(d.g.field(), &[0, 0, 0, 1], &[1]).unwrap();
        match validate_correspondence(&d.g, &cube, &d.s, &d.operator, &d.phi, 8) {
            Err(Error::Assumptions(v)) => assert!(matches!(v[0], Violation::DegreeMismatch { deg_g: 2, deg_h: 3 })),
            other => panic!("{:?}", other.map(|c| c.delta)),
        }
    }

    #[test]
    fn rejects_common_left_factor() {
        let d = x0_2m(7).unwrap();
        let f = d.g.field();
        let mu = RatFunc::from_ints(f, &[1, 2], &[3, 1]).unwrap();
        let h = d.g.compose(&mu);
        let err = validate_correspondence(&d.g, &h, &d.s, &d.operator, &d.phi, 8).unwrap_err();
        let Error::Assumptions(v) = err else { panic!() };
        assert!(v.iter().any(|x| matches!(x, Violation::NotDisjoint { .. })), "{:?}", v);
    }

    #[test]
    fn goodexa_splitting() {
        let c = goodexa(7);
        let s = splitting_set(&c).unwrap();
        assert_eq!(s.count, 6);
        assert_eq!(labels(&s.t), vec!["2", "-3", "-1"]);
        let ms = minimal_splitting_field(&c, &s, 6, DEFAULT_SEED).unwrap();
        assert_eq!(ms.degree, SplittingDegree::Exact(2));
        let rep = optimality_report(&c, &s, &ms).unwrap();
        assert!(rep.good && rep.optimal && rep.good_hypothesis);
        assert_eq!(rep.lambda_lower, Some(Ratio::from_integer(6)));
    }

    #[test]
    fn level_zero_counts_projective_line() {
        let c = goodexa(5);
        let s = splitting_set(&c).unwrap();
        for k in 1..=2 {
            let l = enumerate_level(&c, &s, 0, k, DEFAULT_ENUMERATION_GUARD).unwrap();
            assert_eq!(l.count, 5u64.pow(k) + 1);
        }
        assert!(enumerate_level(&c, &s, 30, 2, 1000).is_err());
    }

    #[test]
    fn dfs_matches_brute_force() {
        for (def, k) in
            [(x0_2m(5).unwrap(), 1), (x0_2m(7).unwrap(), 2), (x0_2_3m(7).unwrap(), 1), (exaprop(5).unwrap(), 1)]
        {
            let (c, _) = resolve(&def, DEFAULT_EXT_BOUND).unwrap();
            let s = splitting_set(&c).unwrap();
            for m in 0..=2 {
                let l = enumerate_level(&c, &s, m, k, DEFAULT_ENUMERATION_GUARD).unwrap();
                assert_eq!(l.count, brute_force(&c, m, k), "{} m = {}", def.name, m);
                assert!(l.invariants.holds());
            }
        }
    }

    #[test]
    fn exaprop_pullback() {
        let def = exaprop(7).unwrap();
        let (c, rep) = resolve(&def, DEFAULT_EXT_BOUND).unwrap();
        assert!(rep.is_some());
        assert_eq!(level1_kummer_genus(&c).unwrap(), 1);
        let w = totally_branched_witness(&c, 8).unwrap();
        assert!(w.places.contains(&Place::Infinity));
        let s = splitting_set(&c).unwrap();
        let ms = minimal_splitting_field(&c, &s, 6, DEFAULT_SEED).unwrap();
        assert_eq!(ms.degree, SplittingDegree::Exact(2));
        assert!(optimality_report(&c, &s, &ms).unwrap().optimal);
        for m in 1..=3 {
            let l = enumerate_level(&c, &s, m, 2, DEFAULT_ENUMERATION_GUARD).unwrap();
            assert_eq!(l.split_count, s.count as u64 * 2u64.pow(m as u32));
            assert!(l.split_fibers_full);
        }
    }

    #[test]
    fn x0_2_3m_tower() {
        let def = x0_2_3m(7).unwrap();
        let (c, _) = resolve(&def, DEFAULT_EXT_BOUND).unwrap();
        assert_eq!(c.delta, 3);
        assert_eq!(geometric_count(&c.s_frak), 8);
        let s = splitting_set(&c).unwrap();
        assert_eq!(s.count, 18);
        let ms = minimal_splitting_field(&c, &s, 6, DEFAULT_SEED).unwrap();
        assert_eq!(ms.degree, SplittingDegree::Exact(2));
        assert!(optimality_report(&c, &s, &ms).unwrap().optimal);
        assert!(totally_branched_witness(&c, 8).unwrap().found());
        assert!(divisor_degrees_vanish(&c).unwrap());
    }

    #[test]
    fn identity_pullback_passes() {
        let c = goodexa(7);
        let f = c.field();
        let x = RatFunc::x(f);
        let data = PullbackData {
            f: x.clone(),
            component: implicitize(&c.g, &c.h).unwrap().curve,
            g_tilde: c.g.clone(),
            h_tilde: c.h.clone(),
            phi_map: x,
        };
        assert!(verify_pullback_correspondence(&c, &data).is_ok());
        let mut bad = data.clone();
        bad.h_tilde = c.g.clone();
        assert!(matches!(verify_pullback_correspondence(&c, &bad), Err(Error::Pullback(_))));
    }
}
