//! Exact arithmetic in small finite fields GF(p^k).
//!
//! Elements are stored in two interchangeable forms: a coefficient vector
//! over GF(p) ([`FieldElement`]) and a dense integer encoding
//! `sum coeffs[i] * p^i` used for table lookups. Multiplication goes through
//! eagerly built log/antilog tables, so every field is fully enumerated at
//! construction time and all later operations are table lookups plus
//! digit-wise addition.
//!
//! [`CubicExtension`] layers GF(q^3) on top of a base field GF(q), keeping
//! elements as coordinate triples over GF(q). That triple view is the
//! 3-dimensional vector space needed to build projective planes and their
//! rotational Hamilton cycles.

use crate::error::Error;

/// Default cap on the field size p^k.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

/// A prime power q = p^k with the factorization pinned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePower {
    p: u64,
    k: u32,
    q: u64,
}

impl PrimePower {
    pub fn new(p: u64, k: u32) -> Result<Self, Error> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::ZeroExponent);
        }
        let mut q: u64 = 1;
        for _ in 0..k {
            q = q
                .checked_mul(p)
                .ok_or(Error::FieldTooLarge { q: u64::MAX, cap: DEFAULT_FIELD_CAP })?;
        }
        Ok(PrimePower { p, k, q })
    }

    /// Factors q as p^k if q is a prime power.
    pub fn factor(q: u64) -> Option<Self> {
        if q < 2 {
            return None;
        }
        let mut p = q;
        for d in 2.. {
            if d * d > q {
                break;
            }
            if q % d == 0 {
                p = d;
                break;
            }
        }
        let mut rest = q;
        let mut k = 0;
        while rest > 1 {
            if rest % p != 0 {
                return None;
            }
            rest /= p;
            k += 1;
        }
        Some(PrimePower { p, k, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

/// An element of GF(p^k) as a coefficient vector over GF(p).
///
/// `coeffs[i]` multiplies the i-th power of the field generator; the vector
/// always has length exactly k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// GF(p^k) with a fixed primitive element and full discrete-log tables.
///
/// The modulus is the first primitive monic polynomial of degree k over
/// GF(p) in increasing order of the integer encoding of its non-leading
/// coefficients, and alpha is the residue class of the generator. Both
/// choices are deterministic, so labelings derived downstream are
/// reproducible run to run.
#[derive(Clone, Debug)]
pub struct FieldTable {
    prime_power: PrimePower,
    modulus: Vec<u64>,
    alpha: u64,
    pow_table: Vec<u64>,
    log_table: Vec<u64>,
}

const NO_LOG: u64 = u64::MAX;

impl FieldTable {
    pub fn build(p: u64, k: u32) -> Result<Self, Error> {
        Self::build_with_cap(p, k, DEFAULT_FIELD_CAP)
    }

    pub fn build_with_cap(p: u64, k: u32, cap: u64) -> Result<Self, Error> {
        let pp = PrimePower::new(p, k)?;
        Self::new_with_cap(pp, cap)
    }

    pub fn new(prime_power: PrimePower) -> Result<Self, Error> {
        Self::new_with_cap(prime_power, DEFAULT_FIELD_CAP)
    }

    pub fn new_with_cap(prime_power: PrimePower, cap: u64) -> Result<Self, Error> {
        let (p, k, q) = (prime_power.p, prime_power.k, prime_power.q);
        if q > cap {
            return Err(Error::FieldTooLarge { q, cap });
        }
        let modulus = first_primitive_modulus(p, k, q);
        let alpha = if k == 1 {
            // x = -c0 in GF(p)[x]/(x + c0)
            (p - modulus[0]) % p
        } else {
            p // encoding of the bare generator x
        };

        // Enumerate all powers of alpha once; this both fills the tables and
        // re-verifies that alpha has full multiplicative order q - 1.
        let mut pow_table = Vec::with_capacity((q - 1) as usize);
        let mut log_table = vec![NO_LOG; q as usize];
        let alpha_poly = decode_digits(alpha, p, k);
        let mut cur = decode_digits(1, p, k);
        for i in 0..q - 1 {
            let enc = encode_digits(&cur, p);
            assert_eq!(log_table[enc as usize], NO_LOG, "alpha order below q-1");
            log_table[enc as usize] = i;
            pow_table.push(enc);
            cur = poly_mul_mod(&cur, &alpha_poly, &modulus, p);
        }
        assert_eq!(encode_digits(&cur, p), 1, "alpha order exceeds q-1");

        Ok(FieldTable { prime_power, modulus, alpha, pow_table, log_table })
    }

    pub fn prime_power(&self) -> PrimePower {
        self.prime_power
    }

    pub fn order(&self) -> u64 {
        self.prime_power.q
    }

    /// Modulus polynomial coefficients, lowest degree first, including the
    /// leading 1.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Encoding of the primitive element.
    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn decode(&self, enc: u64) -> FieldElement {
        debug_assert!(enc < self.order());
        FieldElement { coeffs: decode_digits(enc, self.prime_power.p, self.prime_power.k) }
    }

    pub fn encode(&self, e: &FieldElement) -> u64 {
        encode_digits(&e.coeffs, self.prime_power.p)
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement, Error> {
        if coeffs.len() != self.prime_power.k as usize {
            return Err(Error::InvalidElement(format!(
                "expected {} coefficients, got {}",
                self.prime_power.k,
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.prime_power.p) {
            return Err(Error::InvalidElement(format!(
                "coefficient {c} is out of range for p = {}",
                self.prime_power.p
            )));
        }
        Ok(FieldElement { coeffs: coeffs.to_vec() })
    }

    // -- arithmetic on encodings --------------------------------------------

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let p = self.prime_power.p;
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += (a % p + b % p) % p * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        let p = self.prime_power.p;
        if p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += (p - a % p) % p * place;
            place *= p;
            a /= p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let span = self.order() - 1;
        self.pow_table[((self.log_table[a as usize] + self.log_table[b as usize]) % span) as usize]
    }

    pub fn inv(&self, a: u64) -> Result<u64, Error> {
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        let span = self.order() - 1;
        Ok(self.pow_table[((span - self.log_table[a as usize]) % span) as usize])
    }

    /// alpha^i as an encoding; negative exponents reduce modulo q - 1.
    pub fn alpha_pow(&self, i: i64) -> u64 {
        let span = (self.order() - 1) as i64;
        self.pow_table[i.rem_euclid(span) as usize]
    }

    /// alpha^i as a coefficient vector. Total on all integers.
    pub fn power(&self, i: i64) -> FieldElement {
        self.decode(self.alpha_pow(i))
    }

    /// Least t >= 1 with e^t = 1; errors on the zero element.
    pub fn element_order(&self, e: &FieldElement) -> Result<u64, Error> {
        self.order_of_encoding(self.encode(e))
    }

    pub fn order_of_encoding(&self, enc: u64) -> Result<u64, Error> {
        if enc == 0 {
            return Err(Error::ZeroElement);
        }
        let span = self.order() - 1;
        let log = self.log_table[enc as usize];
        Ok(span / gcd(span, log))
    }

    /// Checks the stored modulus for irreducibility directly: no roots in
    /// GF(p), and no monic factor of degree up to k/2 found by trial
    /// division.
    pub fn modulus_is_irreducible(&self) -> bool {
        let (p, k) = (self.prime_power.p, self.prime_power.k);
        for a in 0..p {
            if poly_eval(&self.modulus, a, p) == 0 {
                return false;
            }
        }
        for d in 2..=k / 2 {
            let count = p.pow(d);
            for v in 0..count {
                let mut g = decode_digits(v, p, d);
                g.push(1);
                if poly_divides(&g, &self.modulus, p) {
                    return false;
                }
            }
        }
        true
    }
}

/// GF(q^3) as a 3-dimensional vector space over a base field GF(q).
///
/// Elements are coordinate triples over GF(q) in the basis (1, y, y^2)
/// where y is the residue class of the generator; y is primitive, and the
/// modulus is the first primitive monic cubic over GF(q) in lexicographic
/// order of its non-leading coefficient encodings, lowest degree first.
#[derive(Clone, Debug)]
pub struct CubicExtension {
    base: FieldTable,
    modulus: [u64; 4],
    pow_table: Vec<[u64; 3]>,
}

impl CubicExtension {
    pub fn new(base: FieldTable) -> Result<Self, Error> {
        let q = base.order();
        let cubed = q
            .checked_mul(q)
            .and_then(|s| s.checked_mul(q))
            .filter(|&c| c <= DEFAULT_FIELD_CAP)
            .ok_or(Error::FieldTooLarge { q: u64::MAX, cap: DEFAULT_FIELD_CAP })?;
        let span = cubed - 1;
        let factors = prime_factors(span);

        let mut modulus = None;
        'search: for c0 in 0..q {
            for c1 in 0..q {
                for c2 in 0..q {
                    if c0 == 0 {
                        continue; // y would divide the modulus
                    }
                    let g = [c0, c1, c2, 1];
                    if generator_has_order(&base, &g, span, &factors) {
                        modulus = Some(g);
                        break 'search;
                    }
                }
            }
        }
        let modulus = modulus.expect("every finite field has a primitive cubic extension");

        let mut pow_table = Vec::with_capacity(span as usize);
        let mut cur = [1, 0, 0];
        for _ in 0..span {
            pow_table.push(cur);
            cur = mul_by_y(&base, &modulus, cur);
        }
        assert_eq!(cur, [1, 0, 0], "generator order is not q^3 - 1");

        Ok(CubicExtension { base, modulus, pow_table })
    }

    pub fn base(&self) -> &FieldTable {
        &self.base
    }

    pub fn order(&self) -> u64 {
        self.pow_table.len() as u64 + 1
    }

    /// Modulus coefficients over GF(q), lowest degree first, monic.
    pub fn modulus(&self) -> [u64; 4] {
        self.modulus
    }

    /// alpha^i as a coordinate triple over GF(q); exponents reduce modulo
    /// q^3 - 1.
    pub fn alpha_power(&self, i: i64) -> [u64; 3] {
        let span = self.pow_table.len() as i64;
        self.pow_table[i.rem_euclid(span) as usize]
    }

    pub fn mul(&self, a: [u64; 3], b: [u64; 3]) -> [u64; 3] {
        ext_mul(&self.base, &self.modulus, a, b)
    }
}

// -- polynomial helpers over GF(p) -------------------------------------------

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn decode_digits(mut v: u64, p: u64, k: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(v % p);
        v /= p;
    }
    out
}

fn encode_digits(coeffs: &[u64], p: u64) -> u64 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn poly_eval(poly: &[u64], x: u64, p: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

/// Schoolbook product of two residues, reduced by the monic `modulus`.
fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    for i in (k..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (j, &mj) in modulus.iter().take(k).enumerate() {
            prod[i - k + j] = (prod[i - k + j] + (p - c % p) * mj) % p;
        }
    }
    prod.truncate(k);
    prod.resize(k, 0);
    prod
}

/// Does g divide f over GF(p)? Plain long division remainder check.
fn poly_divides(g: &[u64], f: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = f.to_vec();
    let dg = g.len() - 1;
    debug_assert_eq!(g[dg], 1, "divisor must be monic");
    while rem.len() > dg {
        let lead = *rem.last().unwrap();
        let top = rem.len() - 1;
        if lead != 0 {
            for (j, &gj) in g.iter().enumerate() {
                let idx = top - dg + j;
                rem[idx] = (rem[idx] + (p - lead) * gj) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

/// First monic degree-k polynomial over GF(p) whose generator class has
/// multiplicative order exactly q - 1, scanning candidates in increasing
/// order of the integer encoding of the non-leading coefficients.
fn first_primitive_modulus(p: u64, k: u32, q: u64) -> Vec<u64> {
    let span = q - 1;
    let factors = prime_factors(span);
    for v in 0..q {
        let mut f = decode_digits(v, p, k);
        f.push(1);
        if f[0] == 0 {
            continue; // x divides f, so x is not a unit
        }
        if x_has_order(&f, p, k, span, &factors) {
            return f;
        }
    }
    unreachable!("every finite field has a primitive polynomial");
}

fn x_has_order(f: &[u64], p: u64, k: u32, span: u64, factors: &[u64]) -> bool {
    let x = decode_digits(if k == 1 { (p - f[0]) % p } else { p }, p, k);
    let one = decode_digits(1, p, k);
    if poly_pow_mod(&x, span, f, p) != one {
        return false;
    }
    factors.iter().all(|&r| poly_pow_mod(&x, span / r, f, p) != one)
}

fn poly_pow_mod(base: &[u64], mut e: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len() - 1;
    let mut result = decode_digits(1, p, k as u32);
    let mut acc = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul_mod(&result, &acc, modulus, p);
        }
        acc = poly_mul_mod(&acc, &acc, modulus, p);
        e >>= 1;
    }
    result
}

// -- cubic extension internals ------------------------------------------------

fn ext_mul(base: &FieldTable, modulus: &[u64; 4], a: [u64; 3], b: [u64; 3]) -> [u64; 3] {
    let mut prod = [0u64; 5];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = base.add(prod[i + j], base.mul(ai, bj));
        }
    }
    for i in (3..5).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..3 {
            prod[i - 3 + j] = base.sub(prod[i - 3 + j], base.mul(c, modulus[j]));
        }
    }
    [prod[0], prod[1], prod[2]]
}

fn mul_by_y(base: &FieldTable, modulus: &[u64; 4], a: [u64; 3]) -> [u64; 3] {
    // y * (a0 + a1 y + a2 y^2) with y^3 = -(g0 + g1 y + g2 y^2)
    [
        base.sub(0, base.mul(a[2], modulus[0])),
        base.sub(a[0], base.mul(a[2], modulus[1])),
        base.sub(a[1], base.mul(a[2], modulus[2])),
    ]
}

fn generator_has_order(base: &FieldTable, g: &[u64; 4], span: u64, factors: &[u64]) -> bool {
    let y = [0, 1, 0];
    if ext_pow(base, g, y, span) != [1, 0, 0] {
        return false;
    }
    factors.iter().all(|&r| ext_pow(base, g, y, span / r) != [1, 0, 0])
}

fn ext_pow(base: &FieldTable, modulus: &[u64; 4], b: [u64; 3], mut e: u64) -> [u64; 3] {
    let mut result = [1, 0, 0];
    let mut acc = b;
    while e > 0 {
        if e & 1 == 1 {
            result = ext_mul(base, modulus, result, acc);
        }
        acc = ext_mul(base, modulus, acc, acc);
        e >>= 1;
    }
    result
}
