//! Exact arithmetic in `F_{p^n}`.
//!
//! Elements are stored by their canonical index: the coefficient vector
//! `(c_0, ..., c_{n-1})` in the power basis of the modulus, read as base-`p`
//! digits with `c_0` least significant. Index 0 is zero, index 1 is one and the
//! first `p` indices are the prime subfield. Multiplication and addition go
//! through discrete-log and Zech-log tables built once per field.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order constructed unless the caller passes a different cap.
pub const DEFAULT_SIZE_CAP: u64 = 3_000_000;

const NO_LOG: u32 = u32::MAX;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Canonical index in `[0, q)`.
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    /// Monic modulus, ascending coefficients, length `n + 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n
    }
}
impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds `F_{p^n}` without consulting the shared cache.
    pub fn new(p: u64, n: u32, cap: u64) -> Result<FieldCtx> {
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
        }
        let q = checked_order(p, n, cap)?;
        let p = p as u32;
        let q = q as u32;
        let modulus = first_irreducible(p, n);

        let neg: Vec<u32> = (0..q)
            .map(|i| {
                let d = digits(i, p, n);
                let nd: Vec<u32> = d.iter().map(|&c| (p - c) % p).collect();
                from_digits(&nd, p)
            })
            .collect();

        let order = q - 1;
        let g = find_generator(p, n, q, &modulus);
        let gd = digits(g, p, n);
        let mut exp = vec![0u32; order.max(1) as usize];
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = digits(1, p, n);
        for k in 0..order {
            let idx = from_digits(&cur, p);
            exp[k as usize] = idx;
            log[idx as usize] = k;
            cur = polymul_mod(&cur, &gd, &modulus, p);
        }
        let zech: Vec<u32> = (0..order)
            .map(|k| {
                let e = exp[k as usize];
                let c0 = e % p;
                let plus_one = if c0 + 1 == p { e - c0 } else { e + 1 };
                if plus_one == 0 {
                    NO_LOG
                } else {
                    log[plus_one as usize]
                }
            })
            .collect();

        Ok(FieldCtx { p, n, q, modulus, exp, log, zech, neg })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }
    /// Field order `p^n`.
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }
    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }
    /// Ascending coefficients of the defining polynomial.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p as u64, n: self.n }
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }
    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Element with canonical index `i`, or `None` when `i >= q`.
    pub fn element(&self, i: u32) -> Option<FieldElement> {
        (i < self.q).then_some(FieldElement(i))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> FieldElement {
        FieldElement(v.rem_euclid(self.p as i64) as u32)
    }

    /// Power-basis coordinates of `x`.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        digits(x.0, self.p, self.n)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.n as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidArgument(format!(
                "coefficient vector {coeffs:?} is not an element of F_{}^{}",
                self.p, self.n
            )));
        }
        Ok(FieldElement(from_digits(coeffs, self.p)))
    }

    /// All `q` elements in canonical order.
    pub fn enumerate(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.n == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let order = self.q - 1;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let d = if lb >= la { lb - la } else { lb + order - la };
        let z = self.zech[d as usize];
        if z == NO_LOG {
            return FieldElement::ZERO;
        }
        let e = la + z;
        FieldElement(self.exp[(if e >= order { e - order } else { e }) as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let order = self.q - 1;
        let e = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[(if e >= order { e - order } else { e }) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply exponentiation; `pow(0, 0) = 1`.
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `k * a` for an integer multiplier.
    pub fn scale_int(&self, a: FieldElement, k: u64) -> FieldElement {
        self.mul(a, self.from_int((k % self.p as u64) as i64))
    }

    /// Unique `b` with `b^p = a`.
    pub fn pth_root(&self, a: FieldElement) -> FieldElement {
        self.pow(a, (self.q / self.p) as u64)
    }

    /// Frobenius of the subfield of order `r`, i.e. `a -> a^r`.
    pub fn frobenius(&self, a: FieldElement, r: u64) -> FieldElement {
        self.pow(a, r)
    }

    /// Discrete log with respect to the table generator; `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    /// `g^k` for the table generator `g`.
    pub fn exp(&self, k: u64) -> FieldElement {
        let order = (self.q - 1) as u64;
        FieldElement(self.exp[(k % order) as usize])
    }

    pub fn is_same(&self, other: &FieldCtx) -> bool {
        self == other
    }
}

/// A field described as `p^n`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub n: u32,
}

impl FieldSpec {
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.n)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.n)
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `"p^n"` or a bare prime power such as `"49"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid field specification `{s}` (expected p^n)"));
        if let Some((p, n)) = s.split_once('^') {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let n: u32 = n.trim().parse().map_err(|_| bad())?;
            if !is_prime(p) {
                return Err(Error::NonPrime(p));
            }
            if n == 0 {
                return Err(bad());
            }
            return Ok(FieldSpec { p, n });
        }
        let q: u64 = s.parse().map_err(|_| bad())?;
        let p = smallest_prime_factor(q).ok_or_else(bad)?;
        let mut rest = q;
        let mut n = 0;
        while rest % p == 0 {
            rest /= p;
            n += 1;
        }
        if rest != 1 {
            return Err(Error::Parse(format!("{q} is not a prime power")));
        }
        Ok(FieldSpec { p, n })
    }
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), Arc<FieldCtx>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<FieldCtx>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared, cached `F_{p^n}` with the default size cap.
pub fn make_field(p: u64, n: u32) -> Result<Arc<FieldCtx>> {
    make_field_capped(p, n, DEFAULT_SIZE_CAP)
}

pub fn make_field_capped(p: u64, n: u32, cap: u64) -> Result<Arc<FieldCtx>> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
    }
    checked_order(p, n, cap)?;
    let key = (p as u32, n);
    if let Some(ctx) = cache().lock().unwrap().get(&key) {
        return Ok(ctx.clone());
    }
    let ctx = Arc::new(FieldCtx::new(p, n, cap)?);
    Ok(cache().lock().unwrap().entry(key).or_insert(ctx).clone())
}

pub fn make_field_from_spec(spec: FieldSpec) -> Result<Arc<FieldCtx>> {
    make_field(spec.p, spec.n)
}

fn checked_order(p: u64, n: u32, cap: u64) -> Result<u64> {
    let q = (p as u128).checked_pow(n).unwrap_or(u128::MAX);
    if q > cap as u128 || q > u32::MAX as u128 {
        return Err(Error::SizeCapExceeded { what: "field order", value: q, cap: cap as u128 });
    }
    Ok(q as u64)
}

/// Injective ring homomorphism `F_q -> F_{q^m}`.
pub struct Embedding {
    source: Arc<FieldCtx>,
    target: Arc<FieldCtx>,
    image: Vec<FieldElement>,
    preimage: HashMap<FieldElement, FieldElement>,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding({} -> {})", self.source.spec(), self.target.spec())
    }
}

impl Embedding {
    fn from_image(source: Arc<FieldCtx>, target: Arc<FieldCtx>, image: Vec<FieldElement>) -> Self {
        let preimage = image
            .iter()
            .enumerate()
            .map(|(i, &y)| (y, FieldElement(i as u32)))
            .collect();
        Embedding { source, target, image, preimage }
    }

    pub fn source(&self) -> &Arc<FieldCtx> {
        &self.source
    }
    pub fn target(&self) -> &Arc<FieldCtx> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: FieldElement) -> FieldElement {
        self.image[x.0 as usize]
    }

    /// Inverse image of `y`, when `y` lies in the embedded subfield.
    pub fn preimage(&self, y: FieldElement) -> Option<FieldElement> {
        self.preimage.get(&y).copied()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Embedding) -> Result<Embedding> {
        if !next.source.is_same(&self.target) {
            return Err(Error::MixedFields);
        }
        let image = self.image.iter().map(|&y| next.apply(y)).collect();
        Ok(Embedding::from_image(self.source.clone(), next.target.clone(), image))
    }
}

/// An extension field together with the embedding of its base.
#[derive(Clone, Debug)]
pub struct Extension {
    pub field: Arc<FieldCtx>,
    pub embedding: Arc<Embedding>,
}

fn ext_cache() -> &'static Mutex<HashMap<(u32, u32, u32), Extension>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32, u32), Extension>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds `F_{q^m}` and embeds `ctx` into it by sending the power-basis
/// generator to the first root (in canonical order) of `ctx`'s modulus.
pub fn extend(ctx: &Arc<FieldCtx>, m: u32) -> Result<Extension> {
    extend_capped(ctx, m, DEFAULT_SIZE_CAP)
}

pub fn extend_capped(ctx: &Arc<FieldCtx>, m: u32, cap: u64) -> Result<Extension> {
    if m == 0 {
        return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
    }
    let key = (ctx.p, ctx.n, m);
    if let Some(ext) = ext_cache().lock().unwrap().get(&key) {
        return Ok(ext.clone());
    }
    let target = make_field_capped(ctx.p as u64, ctx.n * m, cap)?;
    let root = first_root_of_modulus(ctx, &target);
    // Powers of the root give the images of the power basis.
    let mut basis = Vec::with_capacity(ctx.n as usize);
    let mut acc = target.one();
    for _ in 0..ctx.n {
        basis.push(acc);
        acc = target.mul(acc, root);
    }
    let image = ctx
        .enumerate()
        .map(|x| {
            ctx.coeffs(x)
                .iter()
                .zip(&basis)
                .fold(target.zero(), |s, (&c, &b)| target.add(s, target.scale_int(b, c as u64)))
        })
        .collect();
    let ext = Extension {
        field: target.clone(),
        embedding: Arc::new(Embedding::from_image(ctx.clone(), target, image)),
    };
    Ok(ext_cache().lock().unwrap().entry(key).or_insert(ext).clone())
}

fn first_root_of_modulus(ctx: &FieldCtx, target: &FieldCtx) -> FieldElement {
    // Roots of the degree-n modulus lie in the order-q subfield, which is
    // {0} together with the powers of g^((Q-1)/(q-1)).
    let eval = |x: FieldElement| {
        ctx.modulus.iter().rev().fold(target.zero(), |acc, &c| {
            target.add(target.mul(acc, x), FieldElement(c))
        })
    };
    let big = (target.q - 1) as u64;
    let small = (ctx.q - 1) as u64;
    let step = big / small;
    let mut best: Option<FieldElement> = None;
    let candidates = std::iter::once(target.zero()).chain((0..small).map(|k| target.exp(k * step)));
    for x in candidates {
        if eval(x).is_zero() && best.map_or(true, |b| x < b) {
            best = Some(x);
        }
    }
    best.expect("an irreducible polynomial of degree n splits in F_{p^{nm}}")
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn smallest_prime_factor(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return Some(d);
        }
        d += 1;
    }
    Some(n)
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
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

fn digits(mut i: u32, p: u32, n: u32) -> Vec<u32> {
    let mut d = vec![0u32; n as usize];
    for slot in d.iter_mut() {
        *slot = i % p;
        i /= p;
    }
    d
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

/// Product of two residues (length n) modulo the monic `modulus` over F_p.
fn polymul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let n = modulus.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
            }
        }
    }
    for k in (n..2 * n).rev() {
        let c = prod[k] % p64;
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (j, &m) in modulus[..n].iter().enumerate() {
            let sub = c * m as u64 % p64;
            prod[k - n + j] = (prod[k - n + j] + p64 - sub) % p64;
        }
    }
    prod.truncate(n);
    prod.into_iter().map(|c| (c % p64) as u32).collect()
}

fn polypow_mod(a: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let n = modulus.len() - 1;
    let mut acc = vec![0u32; n];
    acc[0] = 1;
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = polymul_mod(&acc, &base, modulus, p);
        }
        base = polymul_mod(&base, &base, modulus, p);
        e >>= 1;
    }
    acc
}

fn find_generator(p: u32, n: u32, q: u32, modulus: &[u32]) -> u32 {
    if q == 2 {
        return 1;
    }
    let order = (q - 1) as u64;
    let factors = prime_factors(order);
    let one = digits(1, p, n);
    (1..q)
        .find(|&g| {
            let gd = digits(g, p, n);
            factors
                .iter()
                .all(|&r| polypow_mod(&gd, order / r, modulus, p) != one)
        })
        .expect("the multiplicative group of a finite field is cyclic")
}

/// Remainder of `f` modulo the monic `g` over F_p (ascending coefficients).
fn rem_fp(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    let p64 = p as u64;
    for k in (dg..r.len()).rev() {
        let c = r[k] % p64;
        if c == 0 {
            continue;
        }
        for j in 0..=dg {
            let idx = k - dg + j;
            r[idx] = (r[idx] + p64 * p64 - c * g[j] as u64) % p64;
        }
    }
    r.truncate(dg);
    r.into_iter().map(|c| c as u32).collect()
}

/// Irreducibility over F_p by trial division against every monic polynomial
/// of degree at most `deg / 2`.
pub fn is_irreducible_over_prime_field(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for i in 0..count {
            let mut g = digits(i as u32, p, d as u32);
            g.push(1);
            if rem_fp(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible polynomial of degree `n` over F_p, ordering the
/// lower coefficients as base-`p` digits with the constant term least
/// significant.
pub fn first_irreducible(p: u32, n: u32) -> Vec<u32> {
    let count = (p as u64).pow(n);
    for i in 0..count {
        let mut f = digits(i as u32, p, n);
        f.push(1);
        if is_irreducible_over_prime_field(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
