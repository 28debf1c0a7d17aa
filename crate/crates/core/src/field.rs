//! Finite fields `F_{p^k}` for odd primes `p`.
//!
//! Elements are stored as [`Fe`] codes: the integer `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! built from the coordinates of the element in the power basis of the modulus. The
//! prime subfield therefore occupies the codes `0..p` in every extension, so objects
//! defined over `F_p` can be evaluated in any `F_{p^k}` without an explicit embedding.
//!
//! All arithmetic goes through the owning [`Field`] (`field.mul(a, b)`), which keeps
//! elements `Copy` and cheap to store in polynomials.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::poly::Poly;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 62;
/// Fields up to this order get discrete-log tables for multiplication.
const TABLE_ORDER: u64 = 1 << 22;
const MAX_DEGREE: usize = 64;

/// An element code relative to some [`Field`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Fe(pub(crate) u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    /// The integer code; elements of the prime field have codes `0..p`.
    pub fn code(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u64,
    k: usize,
    q: u64,
    /// Monic modulus, low degree first, length `k + 1`.
    modulus: Vec<u64>,
    tables: OnceLock<Option<Tables>>,
}

/// Descriptor of `F_{p^k}`; cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.k, self.0.modulus)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.k)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_order(p: u64, k: usize) -> Result<u64> {
    let mut q: u64 = 1;
    for _ in 0..k {
        q = q.checked_mul(p).filter(|&v| v <= MAX_ORDER).ok_or(Error::FieldTooLarge { p, k: k as u32 })?;
    }
    Ok(q)
}

fn validate_characteristic(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::InvalidCharacteristic { p, reason: "characteristic 2 is not supported" });
    }
    if !is_prime(p) {
        return Err(Error::InvalidCharacteristic { p, reason: "not a prime" });
    }
    if p >= 1 << 31 {
        return Err(Error::InvalidCharacteristic { p, reason: "prime too large" });
    }
    Ok(())
}

// Minimal dense F_p polynomial helpers used only for modulus selection.
mod fp {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }

    pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1u64;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        r
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lc_inv = inv(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * lc_inv % p;
            for (i, &mi) in m.iter().enumerate() {
                let idx = top - dm + i;
                r[idx] = (r[idx] + p - c * mi % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(&r, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }
}

/// Irreducibility of a monic polynomial over `F_p`: no factor of degree `j <= k/2`,
/// tested through `gcd(f, x^{p^j} - x)`.
pub(crate) fn is_irreducible_fp(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=k / 2 {
        xp = fp::powmod(&xp, p, f, p);
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        fp::trim(&mut diff);
        let g = fp::gcd(f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

impl Field {
    /// `F_{p^k}` with the lexicographically smallest monic irreducible modulus, where
    /// lower coefficients are compared as the base-`p` integer `c_0 + c_1 p + ...`.
    pub fn new(p: u64, k: u32) -> Result<Field> {
        validate_characteristic(p)?;
        if k == 0 {
            return Err(Error::InvalidDegree);
        }
        let k = k as usize;
        if k > MAX_DEGREE {
            return Err(Error::FieldTooLarge { p, k: k as u32 });
        }
        let q = checked_order(p, k)?;
        if k == 1 {
            return Ok(Self::build(p, vec![0, 1], q));
        }
        let lower_count = q;
        for code in 0..lower_count {
            let mut m = Vec::with_capacity(k + 1);
            let mut c = code;
            for _ in 0..k {
                m.push(c % p);
                c /= p;
            }
            m.push(1);
            if m[0] != 0 && is_irreducible_fp(&m, p) {
                return Ok(Self::build(p, m, q));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn prime(p: u64) -> Result<Field> {
        Self::new(p, 1)
    }

    /// `F_p[x]/(modulus)` for a caller-chosen monic irreducible modulus.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Field> {
        validate_characteristic(p)?;
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::ReducibleModulus { p });
        }
        if modulus.iter().any(|&c| c >= p) || !is_irreducible_fp(modulus, p) {
            return Err(Error::ReducibleModulus { p });
        }
        let k = modulus.len() - 1;
        let q = checked_order(p, k)?;
        Ok(Self::build(p, modulus.to_vec(), q))
    }

    fn build(p: u64, modulus: Vec<u64>, q: u64) -> Field {
        let k = modulus.len() - 1;
        Field(Arc::new(Inner { p, k, q, modulus, tables: OnceLock::new() }))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.k as u32
    }

    pub fn order(&self) -> u64 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }

    /// The prime field `F_p` underneath this field.
    pub fn prime_field(&self) -> Field {
        if self.is_prime_field() {
            self.clone()
        } else {
            Field::build(self.0.p, vec![0, 1], self.0.p)
        }
    }

    /// Same characteristic; used to decide whether prime-field codes transfer.
    pub fn same_characteristic(&self, other: &Field) -> bool {
        self.0.p == other.0.p
    }

    pub fn zero(&self) -> Fe {
        Fe(0)
    }

    pub fn one(&self) -> Fe {
        Fe(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        let p = self.0.p as i64;
        Fe(v.rem_euclid(p) as u64)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fe> {
        if coeffs.len() > self.0.k || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::Parse(format!("{:?} is not an element of {}", coeffs, self)));
        }
        Ok(self.encode(coeffs))
    }

    pub fn from_code(&self, code: u64) -> Result<Fe> {
        if code >= self.0.q {
            return Err(Error::Parse(format!("code {} out of range for {}", code, self)));
        }
        Ok(Fe(code))
    }

    /// Power-basis coordinates, `k` entries.
    pub fn coeffs(&self, x: Fe) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.0.k);
        let mut c = x.0;
        for _ in 0..self.0.k {
            out.push(c % self.0.p);
            c /= self.0.p;
        }
        out
    }

    /// `Some(v)` when `x` lies in the prime subfield.
    pub fn to_prime(&self, x: Fe) -> Option<u64> {
        (x.0 < self.0.p).then_some(x.0)
    }

    fn encode(&self, digits: &[u64]) -> Fe {
        let mut code = 0u64;
        for &d in digits.iter().rev() {
            code = code * self.0.p + d;
        }
        Fe(code)
    }

    fn decode(&self, x: Fe, out: &mut [u64; MAX_DEGREE]) {
        let mut c = x.0;
        for slot in out.iter_mut().take(self.0.k) {
            *slot = c % self.0.p;
            c /= self.0.p;
        }
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        if self.0.k == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= p { s - p } else { s });
        }
        let (mut da, mut db) = ([0u64; MAX_DEGREE], [0u64; MAX_DEGREE]);
        self.decode(a, &mut da);
        self.decode(b, &mut db);
        for i in 0..self.0.k {
            let s = da[i] + db[i];
            da[i] = if s >= p { s - p } else { s };
        }
        self.encode(&da[..self.0.k])
    }

    pub fn neg(&self, a: Fe) -> Fe {
        let p = self.0.p;
        if self.0.k == 1 {
            return Fe(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut da = [0u64; MAX_DEGREE];
        self.decode(a, &mut da);
        for d in da.iter_mut().take(self.0.k) {
            if *d != 0 {
                *d = p - *d;
            }
        }
        self.encode(&da[..self.0.k])
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    fn tables(&self) -> Option<&Tables> {
        self.0
            .tables
            .get_or_init(|| {
                if self.0.k == 1 || self.0.q > TABLE_ORDER {
                    return None;
                }
                let g = self.primitive_element_slow();
                let m = (self.0.q - 1) as usize;
                let mut exp = Vec::with_capacity(m);
                let mut log = vec![0u32; self.0.q as usize];
                let mut cur = Fe(1);
                for i in 0..m {
                    exp.push(cur.0 as u32);
                    log[cur.0 as usize] = i as u32;
                    cur = self.mul_slow(cur, g);
                }
                Some(Tables { exp, log })
            })
            .as_ref()
    }

    fn primitive_element_slow(&self) -> Fe {
        let m = self.0.q - 1;
        let factors = prime_factors(m);
        (1..self.0.q)
            .map(Fe)
            .find(|&g| factors.iter().all(|&r| self.pow_slow(g, m / r) != Fe(1)))
            .expect("multiplicative group is cyclic")
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let p = self.0.p;
        let k = self.0.k;
        if k == 1 {
            return Fe(((a.0 as u128 * b.0 as u128) % p as u128) as u64);
        }
        let (mut da, mut db) = ([0u64; MAX_DEGREE], [0u64; MAX_DEGREE]);
        self.decode(a, &mut da);
        self.decode(b, &mut db);
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let m = &self.0.modulus;
        for top in (k..2 * k - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &mi) in m.iter().take(k).enumerate() {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + (p - c) * mi) % p;
            }
        }
        self.encode(&prod[..k])
    }

    fn pow_slow(&self, a: Fe, mut e: u64) -> Fe {
        let mut r = Fe(1);
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_slow(r, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        r
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe(0);
        }
        if self.0.k == 1 {
            return Fe(a.0 * b.0 % self.0.p);
        }
        if let Some(t) = self.tables() {
            let m = t.exp.len();
            let s = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
            return Fe(t.exp[if s >= m { s - m } else { s }] as u64);
        }
        self.mul_slow(a, b)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        if e == 0 {
            return Fe(1);
        }
        if a.0 == 0 {
            return Fe(0);
        }
        if let Some(t) = self.tables() {
            let m = t.exp.len() as u128;
            let l = (t.log[a.0 as usize] as u128 * (e as u128 % m)) % m;
            return Fe(t.exp[l as usize] as u64);
        }
        let mut r = Fe(1);
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.0.k == 1 {
            return Ok(Fe(fp::inv(a.0, self.0.p)));
        }
        Ok(self.pow(a, self.0.q - 2))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `x ↦ x^p`.
    pub fn frobenius(&self, x: Fe) -> Fe {
        if self.0.k == 1 {
            return x;
        }
        self.pow(x, self.0.p)
    }

    /// Whether `x` lies in the subfield `F_{p^j}` (requires `j | k`).
    pub fn in_subfield(&self, x: Fe, j: u32) -> bool {
        let j = j as usize;
        if j == 0 || !self.0.k.is_multiple_of(j) {
            return false;
        }
        let mut y = x;
        for _ in 0..j {
            y = self.frobenius(y);
        }
        y == x
    }

    pub fn is_nth_power(&self, x: Fe, n: u64) -> Result<bool> {
        if n == 0 {
            return Err(Error::ZeroExponent);
        }
        if x.0 == 0 {
            return Ok(true);
        }
        let m = self.0.q - 1;
        let d = num_integer::gcd(n, m);
        Ok(self.pow(x, m / d) == Fe(1))
    }

    pub fn is_square(&self, x: Fe) -> bool {
        self.is_nth_power(x, 2).expect("n = 2")
    }

    /// The smallest (by code) `y` with `y^n = x`, if any.
    pub fn nth_root(&self, x: Fe, n: u64) -> Result<Option<Fe>> {
        if !self.is_nth_power(x, n)? {
            return Ok(None);
        }
        if x.0 == 0 {
            return Ok(Some(Fe(0)));
        }
        let mut coeffs = vec![Fe(0); n as usize + 1];
        coeffs[0] = self.neg(x);
        coeffs[n as usize] = Fe(1);
        let f = Poly::new(self.clone(), coeffs);
        Ok(f.roots().into_iter().min())
    }

    pub fn sqrt(&self, x: Fe) -> Option<Fe> {
        self.nth_root(x, 2).expect("n = 2")
    }

    /// All `p^k` elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Send + '_ {
        (0..self.0.q).map(Fe)
    }

    pub fn element(&self, x: Fe) -> FieldElement {
        FieldElement { field: self.clone(), value: x }
    }

    pub fn fmt_elem(&self, x: Fe) -> String {
        if self.0.k == 1 {
            x.0.to_string()
        } else {
            let c = self.coeffs(x);
            let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            format!("({})", parts.join(","))
        }
    }

    /// Prime-field element as a signed representative in `(-p/2, p/2]`.
    pub fn signed(&self, x: Fe) -> Option<i64> {
        let v = self.to_prime(x)? as i64;
        let p = self.0.p as i64;
        Some(if v > p / 2 { v - p } else { v })
    }
}

/// An element bundled with its field, for the public surface where ownership matters.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    pub field: Field,
    pub value: Fe,
}

impl FieldElement {
    pub fn coeffs(&self) -> Vec<u64> {
        self.field.coeffs(self.value)
    }

    pub fn frobenius(&self) -> FieldElement {
        self.field.element(self.field.frobenius(self.value))
    }

    pub fn is_nth_power(&self, n: u64) -> Result<bool> {
        self.field.is_nth_power(self.value, n)
    }

    pub fn nth_root(&self, n: u64) -> Result<Option<FieldElement>> {
        Ok(self.field.nth_root(self.value, n)?.map(|v| self.field.element(v)))
    }

    pub fn in_prime_field(&self) -> Option<u64> {
        self.field.to_prime(self.value)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.fmt_elem(self.value))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.fmt_elem(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, k: u32) -> Field {
        Field::new(p, k).unwrap()
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f7 = f(7, 1);
        assert_eq!(f7.modulus(), &[0, 1]);
        assert_eq!(f7.order(), 7);
    }

    #[test]
    fn f49_modulus_is_x2_plus_1() {
        let f49 = f(7, 2);
        assert_eq!(f49.modulus(), &[1, 0, 1]);
        // squares mod 7 are {1, 2, 4}; -1 = 6 is not among them
        let squares: Vec<u64> = (1..7).map(|a| a * a % 7).collect();
        assert!(!squares.contains(&6));
    }

    #[test]
    fn f25_modulus_has_no_root_in_f5() {
        let f25 = f(5, 2);
        let m = f25.modulus();
        assert_eq!(m.len(), 3);
        for x in 0..5u64 {
            assert_ne!((m[0] + m[1] * x + m[2] * x * x) % 5, 0);
        }
        assert_eq!(m, &[2, 0, 1]);
    }

    #[test]
    fn rejects_bad_characteristics() {
        assert!(matches!(Field::new(2, 1), Err(Error::InvalidCharacteristic { .. })));
        assert!(matches!(Field::new(9, 1), Err(Error::InvalidCharacteristic { .. })));
        assert!(matches!(Field::new(1, 1), Err(Error::InvalidCharacteristic { .. })));
        assert!(matches!(Field::new(7, 0), Err(Error::InvalidDegree)));
        assert!(Field::new(3, 2).is_ok());
    }

    #[test]
    fn deterministic_modulus() {
        assert_eq!(f(11, 3).modulus(), f(11, 3).modulus());
    }

    #[test]
    fn frobenius_of_i_is_minus_i() {
        let f49 = f(7, 2);
        let i = f49.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f49.mul(i, i), f49.from_int(-1));
        assert_eq!(f49.frobenius(i), f49.neg(i));
        for x in f49.elements() {
            assert_eq!(f49.frobenius(f49.frobenius(x)), x);
        }
        for x in 0..7 {
            assert_eq!(f49.frobenius(Fe(x)), Fe(x));
        }
    }

    #[test]
    fn frobenius_fixes_exactly_prime_field() {
        let f125 = f(5, 3);
        let fixed: Vec<Fe> = f125.elements().filter(|&x| f125.frobenius(x) == x).collect();
        assert_eq!(fixed, (0..5).map(Fe).collect::<Vec<_>>());
    }

    #[test]
    fn group_order() {
        for (p, k) in [(3, 1), (7, 2), (5, 3), (3, 4)] {
            let fq = f(p, k);
            for x in fq.elements().skip(1) {
                assert_eq!(fq.pow(x, fq.order() - 1), Fe(1));
            }
        }
    }

    #[test]
    fn table_and_slow_multiplication_agree() {
        let f49 = f(7, 2);
        for a in f49.elements() {
            for b in f49.elements().step_by(5) {
                assert_eq!(f49.mul(a, b), f49.mul_slow(a, b));
            }
        }
    }

    #[test]
    fn nth_powers_in_f7() {
        let f7 = f(7, 1);
        assert!(f7.is_nth_power(Fe(2), 2).unwrap());
        assert!(!f7.is_nth_power(Fe(3), 2).unwrap());
        assert_eq!(f7.nth_root(Fe(2), 2).unwrap(), Some(Fe(3)));
        for n in 1..6 {
            assert!(f7.is_nth_power(Fe(0), n).unwrap());
        }
        let squares: Vec<Fe> = f7.elements().filter(|&x| f7.is_square(x)).collect();
        let fourth: Vec<Fe> = f7.elements().filter(|&x| f7.is_nth_power(x, 4).unwrap()).collect();
        let brute: Vec<Fe> = {
            let mut v: Vec<Fe> = f7.elements().map(|y| f7.pow(y, 4)).collect();
            v.sort();
            v.dedup();
            v
        };
        assert_eq!(squares, fourth);
        assert_eq!(fourth, brute);
        assert!(matches!(f7.is_nth_power(Fe(1), 0), Err(Error::ZeroExponent)));
    }

    #[test]
    fn nth_root_is_minimal() {
        let f49 = f(7, 2);
        for x in f49.elements() {
            for n in [2u64, 3, 4, 8] {
                let brute = f49.elements().find(|&y| f49.pow(y, n) == x);
                assert_eq!(f49.nth_root(x, n).unwrap(), brute, "x={:?} n={}", x, n);
            }
        }
    }

    #[test]
    fn counting() {
        assert_eq!(f(7, 1).elements().count(), 7);
        let f49 = f(7, 2);
        assert_eq!(f49.elements().filter(|x| !x.is_zero()).count(), 48);
        let f25 = f(5, 2);
        let sq = f25.elements().skip(1).filter(|&x| f25.is_square(x)).count();
        assert_eq!(sq, 12);
    }

    #[test]
    fn subfield_membership() {
        let f7_4 = f(7, 4);
        let in_f49 = f7_4.elements().filter(|&x| f7_4.in_subfield(x, 2)).count();
        assert_eq!(in_f49, 49);
        assert!(!f7_4.in_subfield(Fe(1), 3));
    }

    #[test]
    fn with_modulus_checks_irreducibility() {
        assert!(Field::with_modulus(7, &[1, 0, 1]).is_ok());
        assert!(matches!(Field::with_modulus(7, &[6, 0, 1]), Err(Error::ReducibleModulus { .. })));
    }
}
