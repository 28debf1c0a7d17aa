//! Deuring and supersingular polynomials, and classical invariants of `X_0(N)`.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::field::{is_prime, prime_factors, Fe, Field};
use crate::poly::Poly;

fn require_odd_prime(p: u64, min: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidCharacteristic { p, reason: "not prime" });
    }
    if p < min {
        return Err(Error::InvalidCharacteristic { p, reason: if min > 3 { "need p ≥ 5" } else { "need p odd" } });
    }
    Ok(())
}

/// `Σ binom((p−1)/2, i)^2 λ^i` over `F_p`.
pub fn deuring_poly(p: u64) -> Result<Poly> {
    require_odd_prime(p, 3)?;
    let f = Field::prime(p)?;
    let m = (p - 1) / 2;
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    let mut binom = f.one();
    for i in 0..=m {
        coeffs.push(f.mul(binom, binom));
        // binom(m, i+1) = binom(m, i) (m − i)/(i + 1)
        binom = f.div(f.mul(binom, f.from_int((m - i) as i64)), f.from_int(i as i64 + 1))?;
    }
    Ok(Poly::new(f, coeffs))
}

#[derive(Clone, Debug)]
pub struct SupersingularData {
    pub p: u64,
    /// The Deuring polynomial.
    pub phi: Poly,
    /// Supersingular `j`-invariants in `F_{p^2}`, sorted by code.
    pub j_invariants: Vec<Fe>,
    pub fp2: Field,
    pub phi1: Poly,
    pub phi1_tilde: Poly,
    pub alpha: u64,
    pub delta: u32,
    pub epsilon: u32,
}

/// Coefficient of `x^{p−1}` in `(x^3 + a x + b)^{(p−1)/2}`.
fn hasse_invariant(e: &Field, a: Fe, b: Fe) -> Fe {
    let p = e.characteristic();
    let m = (p - 1) / 2;
    if b.is_zero() {
        let cubic = Poly::new(e.clone(), vec![b, a, Fe::ZERO, Fe::ONE]);
        return cubic.pow(m).coeff((p - 1) as usize);
    }
    // Miller's recurrence for the coefficients of a power: n f0 g_n = Σ (k(m+1) − n) f_k g_{n−k}.
    let f = [b, a, Fe::ZERO, Fe::ONE];
    let mut g = vec![e.pow(b, m)];
    let inv_b = e.inv(b).expect("b is nonzero");
    for n in 1..p as usize {
        let mut acc = Fe::ZERO;
        for k in 1..=n.min(3) {
            let w = e.from_int((k as i64) * (m as i64 + 1) - n as i64);
            acc = e.add(acc, e.mul(w, e.mul(f[k], g[n - k])));
        }
        let ninv = e.inv(e.from_int(n as i64)).expect("n < p");
        g.push(e.mul(acc, e.mul(ninv, inv_b)));
    }
    g[(p - 1) as usize]
}

/// Whether the curve with invariant `j` (in `F_{p^2}`) is supersingular.
pub fn is_supersingular_j(e: &Field, j: Fe) -> bool {
    let k1728 = e.from_int(1728);
    let (a, b) = if j.is_zero() {
        (Fe::ZERO, Fe::ONE)
    } else if j == k1728 {
        (Fe::ONE, Fe::ZERO)
    } else {
        let k = e.sub(k1728, j);
        let a = e.mul(e.from_int(3), e.mul(j, k));
        let b = e.mul(e.from_int(2), e.mul(j, e.mul(k, k)));
        (a, b)
    };
    hasse_invariant(e, a, b).is_zero()
}

pub fn supersingular_poly(p: u64) -> Result<SupersingularData> {
    require_odd_prime(p, 5)?;
    let fp = Field::prime(p)?;
    let e = Field::new(p, 2)?;
    let j_invariants: Vec<Fe> = e.elements().filter(|&j| is_supersingular_j(&e, j)).collect();
    let prod = Poly::from_roots(&e, &j_invariants);
    let phi1 = prod.to_prime()?;
    let delta = u32::from(p % 3 == 2);
    let epsilon = u32::from(p % 4 == 3);
    let alpha = p / 12;
    let shape = Poly::x(&fp).pow(delta as u64).mul(&Poly::linear(&fp, fp.from_int(1728)).pow(epsilon as u64));
    let (phi1_tilde, r) = phi1.divrem(&shape)?;
    if !r.is_zero() || phi1_tilde.degree() != Some(alpha as usize) {
        return Err(Error::InvariantViolation(format!(
            "supersingular polynomial mod {} is not j^{}(j-1728)^{} times a degree {} factor",
            p, delta, epsilon, alpha
        )));
    }
    Ok(SupersingularData { p, phi: deuring_poly(p)?, j_invariants, fp2: e, phi1, phi1_tilde, alpha, delta, epsilon })
}

#[derive(Clone, Debug)]
pub struct RationalityReport {
    pub p: u64,
    pub fp2: Field,
    pub deuring_roots: Vec<Fe>,
    pub deuring_split: bool,
    pub phi1_split: bool,
    pub fourth_powers: bool,
}

impl RationalityReport {
    pub fn holds(&self) -> bool {
        self.deuring_split && self.phi1_split && self.fourth_powers
    }
}

fn splits_simply(f: &Poly, e: &Field) -> Result<(bool, Vec<Fe>)> {
    let lifted = f.lift(e)?;
    let roots = lifted.roots();
    Ok((roots.len() == f.degree().unwrap_or(0), roots))
}

pub fn rationality_checks(p: u64) -> Result<RationalityReport> {
    let ss = supersingular_poly(p)?;
    let e = ss.fp2.clone();
    let (deuring_split, deuring_roots) = splits_simply(&ss.phi, &e)?;
    let (phi1_split, _) = splits_simply(&ss.phi1_tilde, &e)?;
    let mut fourth_powers = true;
    for &r in &deuring_roots {
        fourth_powers &= e.is_nth_power(r, 4)?;
    }
    Ok(RationalityReport { p, fp2: e, deuring_roots, deuring_split, phi1_split, fourth_powers })
}

#[derive(Clone, Debug)]
pub struct LambdaOutcome {
    pub lambda: Fe,
    pub exceptional: bool,
    /// `μ + 1` is a square for both square roots `μ` of `λ`.
    pub passes: bool,
}

#[derive(Clone, Debug)]
pub struct Mod8Report {
    pub p: u64,
    pub fp2: Field,
    /// The square-free part of `Φ` with the exceptional factors removed.
    pub phi_tilde: Poly,
    pub outcomes: Vec<LambdaOutcome>,
    /// Every non-exceptional root passes.
    pub holds: bool,
    /// Every root passes, exceptional ones included.
    pub holds_all: bool,
}

fn is_exceptional(e: &Field, l: Fe) -> bool {
    let half = e.inv(e.from_int(2)).expect("p odd");
    let sixth = e.add(e.sub(e.mul(l, l), l), Fe::ONE);
    l == e.from_int(-1) || l == e.from_int(2) || l == half || sixth.is_zero()
}

pub fn splitting_criterion_mod8(p: u64) -> Result<Mod8Report> {
    require_odd_prime(p, 5)?;
    let e = Field::new(p, 2)?;
    let fp = Field::prime(p)?;
    let phi = deuring_poly(p)?;
    let exceptional = Poly::from_ints(&fp, &[1, 1])
        .mul(&Poly::from_ints(&fp, &[-2, 1]))
        .mul(&Poly::from_ints(&fp, &[-1, 2]))
        .mul(&Poly::from_ints(&fp, &[1, -1, 1]));
    let sqfree = phi.factor().into_iter().fold(Poly::one(&fp), |acc, (q, _)| acc.mul(&q));
    let phi_tilde = sqfree.div_exact(&sqfree.gcd(&exceptional))?.monic();
    let mut outcomes = Vec::new();
    for lambda in phi.lift(&e)?.roots() {
        let passes = match e.sqrt(lambda) {
            None => false,
            Some(mu) => [mu, e.neg(mu)].iter().all(|&m| e.is_square(e.add(m, Fe::ONE))),
        };
        outcomes.push(LambdaOutcome { lambda, exceptional: is_exceptional(&e, lambda), passes });
    }
    let holds = outcomes.iter().filter(|o| !o.exceptional).all(|o| o.passes);
    let holds_all = outcomes.iter().all(|o| o.passes);
    Ok(Mod8Report { p, fp2: e, phi_tilde, outcomes, holds, holds_all })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct X0Invariants {
    pub n: u64,
    pub mu: u64,
    pub nu2: u64,
    pub nu3: u64,
    pub nu_inf: u64,
    pub genus: u64,
}

fn euler_phi(n: u64) -> u64 {
    prime_factors(n).into_iter().fold(n, |acc, l| acc / l * (l - 1))
}

/// Index, elliptic points, cusps and genus of `X_0(N)`.
pub fn x0_invariants(n: u64) -> Result<X0Invariants> {
    if n == 0 {
        return Err(Error::InvalidDegree);
    }
    let primes = prime_factors(n);
    let mu = primes.iter().fold(n, |acc, &l| acc / l * (l + 1));
    let kron_m1 = |l: u64| -> i64 {
        match l {
            2 => 0,
            _ if l % 4 == 1 => 1,
            _ => -1,
        }
    };
    let kron_m3 = |l: u64| -> i64 {
        match l {
            3 => 0,
            _ if l % 3 == 1 => 1,
            _ => -1,
        }
    };
    let nu2 = if n.is_multiple_of(4) { 0 } else { primes.iter().map(|&l| 1 + kron_m1(l)).product::<i64>() as u64 };
    let nu3 = if n.is_multiple_of(9) { 0 } else { primes.iter().map(|&l| 1 + kron_m3(l)).product::<i64>() as u64 };
    let nu_inf: u64 = (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| euler_phi(num_integer::gcd(d, n / d))).sum();
    let g = Ratio::from_integer(1) + Ratio::new(mu as i64, 12)
        - Ratio::new(nu2 as i64, 4)
        - Ratio::new(nu3 as i64, 3)
        - Ratio::new(nu_inf as i64, 2);
    if !g.is_integer() || g < Ratio::from_integer(0) {
        return Err(Error::InvariantViolation(format!("genus of X_0({}) computed as {}", n, g)));
    }
    Ok(X0Invariants { n, mu, nu2, nu3, nu_inf, genus: g.to_integer() as u64 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModularLimits {
    pub l: u64,
    pub p: u64,
    pub mu: u64,
    /// `μ(ℓ)/12`.
    pub genus_limit: Ratio<i64>,
    /// `(p − 1) μ(ℓ)/12`.
    pub split_bound: Ratio<i64>,
    /// `split_bound / genus_limit`.
    pub lambda_bound: Ratio<i64>,
    /// `λ` equals `√(p^2) − 1`.
    pub meets_dv_bound: bool,
}

pub fn modular_limits(l: u64, p: u64) -> Result<ModularLimits> {
    if num_integer::gcd(l, p) != 1 {
        return Err(Error::InvalidCharacteristic { p, reason: "divides the level" });
    }
    let mu = x0_invariants(l)?.mu;
    let genus_limit = Ratio::new(mu as i64, 12);
    let split_bound = genus_limit * Ratio::from_integer(p as i64 - 1);
    let lambda_bound = split_bound / genus_limit;
    Ok(ModularLimits {
        l,
        p,
        mu,
        genus_limit,
        split_bound,
        lambda_bound,
        meets_dv_bound: lambda_bound == Ratio::from_integer(p as i64 - 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::FuchsianOperator;
    use crate::ratfunc::RatFunc;

    #[test]
    fn deuring_small_primes() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(deuring_poly(3).unwrap(), Poly::from_ints(&f3, &[1, 1]));
        let f7 = Field::prime(7).unwrap();
        assert_eq!(deuring_poly(7).unwrap(), Poly::from_ints(&f7, &[1, 2, 2, 1]));
        assert!(deuring_poly(2).is_err());
        assert!(deuring_poly(9).is_err());
    }

    #[test]
    fn deuring_degree_and_gauss() {
        for p in (3..=101).filter(|&p| is_prime(p)) {
            let phi = deuring_poly(p).unwrap();
            let d = phi.degree().unwrap() as u64;
            assert_eq!(d, (p - 1) / 2);
            assert_eq!((2 * d + 1) % p, 0);
            let l = FuchsianOperator::gauss(phi.field()).unwrap();
            assert!(l.annihilates(&RatFunc::from_poly(phi)));
        }
    }

    /// Supersingular curves over `F_{p^2}` counted by brute force: `#E(F_{p^2}) = (p ± 1)^2`.
    fn supersingular_by_count(e: &Field, j: Fe) -> bool {
        let k1728 = e.from_int(1728);
        let (a, b) = if j.is_zero() {
            (Fe::ZERO, Fe::ONE)
        } else if j == k1728 {
            (Fe::ONE, Fe::ZERO)
        } else {
            let k = e.sub(k1728, j);
            (e.mul(e.from_int(3), e.mul(j, k)), e.mul(e.from_int(2), e.mul(j, e.mul(k, k))))
        };
        let q = e.order() as i64;
        let mut count = 1i64;
        for x in e.elements() {
            let r = e.add(e.add(e.pow(x, 3), e.mul(a, x)), b);
            count += if r.is_zero() {
                1
            } else if e.is_square(r) {
                2
            } else {
                0
            };
        }
        let p = e.characteristic() as i64;
        // supersingular iff the trace of Frobenius over F_{p^2} is divisible by p
        (q + 1 - count) % p == 0
    }

    #[test]
    fn supersingular_small_primes() {
        let s5 = supersingular_poly(5).unwrap();
        assert_eq!((s5.delta, s5.epsilon, s5.alpha), (1, 0, 0));
        assert_eq!(s5.phi1, Poly::x(&Field::prime(5).unwrap()));
        let s7 = supersingular_poly(7).unwrap();
        let f7 = Field::prime(7).unwrap();
        assert_eq!((s7.delta, s7.epsilon, s7.alpha), (0, 1, 0));
        assert_eq!(s7.phi1, Poly::linear(&f7, f7.from_int(1728)));
        let s13 = supersingular_poly(13).unwrap();
        assert_eq!((s13.delta, s13.epsilon, s13.alpha), (0, 0, 1));
        assert_eq!(s13.phi1.degree(), Some(1));
        assert!(supersingular_poly(3).is_err());
        for p in [5u64, 7, 11, 13] {
            let s = supersingular_poly(p).unwrap();
            let oracle: Vec<Fe> = s.fp2.elements().filter(|&j| supersingular_by_count(&s.fp2, j)).collect();
            assert_eq!(s.j_invariants, oracle, "p = {}", p);
        }
    }

    #[test]
    fn supersingular_properties_up_to_101() {
        for p in (5..=101).filter(|&p| is_prime(p)) {
            let s = supersingular_poly(p).unwrap();
            assert!(s.phi1_tilde.is_squarefree() || s.phi1_tilde.is_constant());
            let mut frob: Vec<Fe> = s.j_invariants.iter().map(|&j| s.fp2.frobenius(j)).collect();
            frob.sort();
            assert_eq!(frob, s.j_invariants);
        }
    }

    #[test]
    fn rationality() {
        let r7 = rationality_checks(7).unwrap();
        assert_eq!(r7.deuring_roots, vec![Fe(2), Fe(4), Fe(6)]);
        assert!(r7.holds());
        let r5 = rationality_checks(5).unwrap();
        assert!(r5.holds());
        assert!(r5.deuring_roots.iter().all(|&r| r5.fp2.to_prime(r).is_none()));
        for p in (11..=101).filter(|&p| is_prime(p)) {
            assert!(rationality_checks(p).unwrap().holds(), "p = {}", p);
        }
    }

    #[test]
    fn mod8_criterion() {
        for p in [7u64, 17, 23, 31, 41, 47] {
            assert!(splitting_criterion_mod8(p).unwrap().holds, "p = {}", p);
        }
        let r7 = splitting_criterion_mod8(7).unwrap();
        // every root of Φ mod 7 is one of −1, 2, 1/2
        assert!(r7.outcomes.iter().all(|o| o.exceptional));
        assert!(r7.phi_tilde.is_one());
    }

    #[test]
    fn x0_examples() {
        let one = x0_invariants(1).unwrap();
        assert_eq!((one.mu, one.genus), (1, 0));
        assert_eq!(x0_invariants(18).unwrap().genus, 0);
        let e11 = x0_invariants(11).unwrap();
        assert_eq!((e11.mu, e11.nu2, e11.nu3, e11.nu_inf, e11.genus), (12, 0, 0, 2, 1));
        for n in 1..=1000 {
            x0_invariants(n).unwrap();
        }
        // genus 0 levels
        let g0: Vec<u64> = (1..=50).filter(|&n| x0_invariants(n).unwrap().genus == 0).collect();
        assert_eq!(g0, vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25]);
    }

    #[test]
    fn limits() {
        let l2 = modular_limits(2, 7).unwrap();
        assert_eq!(l2.mu, 3);
        assert_eq!(l2.genus_limit, Ratio::new(1, 4));
        assert_eq!(l2.split_bound, Ratio::new(6, 4));
        assert_eq!(modular_limits(6, 5).unwrap().genus_limit, Ratio::from_integer(1));
        for l in [2u64, 3, 6] {
            for p in [5u64, 7, 11] {
                let m = modular_limits(l, p).unwrap();
                assert!(m.meets_dv_bound);
                assert_eq!(m.lambda_bound, Ratio::from_integer(p as i64 - 1));
            }
        }
        assert!(modular_limits(6, 3).is_err());
    }
}
