//! Dense univariate polynomials over a [`FieldCtx`], with factorization
//! (square-free, distinct-degree, Cantor–Zassenhaus).

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Embedding, FieldCtx, FieldElement};

#[derive(Clone)]
pub struct UniPoly {
    ctx: Arc<FieldCtx>,
    /// Ascending coefficients; no trailing zeros.
    coeffs: Vec<FieldElement>,
}

impl PartialEq for UniPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.is_same(&other.ctx) && self.coeffs == other.coeffs
    }
}
impl Eq for UniPoly {}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly{:?}", self.coeffs.iter().map(|c| c.index()).collect::<Vec<_>>())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = format_coeff(&self.ctx, *c);
            match (i, cs.as_str()) {
                (0, _) => write!(f, "{cs}")?,
                (1, "1") => write!(f, "x")?,
                (1, _) => write!(f, "{cs}*x")?,
                (_, "1") => write!(f, "x^{i}")?,
                _ => write!(f, "{cs}*x^{i}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn format_coeff(ctx: &FieldCtx, c: FieldElement) -> String {
    if ctx.n() == 1 {
        c.index().to_string()
    } else {
        format!("#{}", c.index())
    }
}

impl UniPoly {
    pub fn new(ctx: Arc<FieldCtx>, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { ctx, coeffs }
    }

    /// Builds from integer coefficients reduced into the prime subfield.
    pub fn from_ints(ctx: &Arc<FieldCtx>, coeffs: &[i64]) -> Self {
        Self::new(ctx.clone(), coeffs.iter().map(|&c| ctx.from_int(c)).collect())
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        UniPoly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn constant(ctx: &Arc<FieldCtx>, c: FieldElement) -> Self {
        Self::new(ctx.clone(), vec![c])
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        Self::constant(ctx, ctx.one())
    }

    /// `c * x^k`.
    pub fn monomial(ctx: &Arc<FieldCtx>, c: FieldElement, k: usize) -> Self {
        let mut coeffs = vec![ctx.zero(); k + 1];
        coeffs[k] = c;
        Self::new(ctx.clone(), coeffs)
    }

    pub fn x(ctx: &Arc<FieldCtx>) -> Self {
        Self::monomial(ctx, ctx.one(), 1)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == FieldElement::ONE
    }

    pub fn lead(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or(FieldElement::ZERO)
    }

    fn check(&self, other: &UniPoly) -> Result<()> {
        if self.ctx.is_same(&other.ctx) {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, other: &UniPoly) -> Result<UniPoly> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &UniPoly) -> Result<UniPoly> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn mul(&self, other: &UniPoly) -> Result<UniPoly> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &UniPoly) -> UniPoly {
        let f = &self.ctx;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        UniPoly::new(self.ctx.clone(), coeffs)
    }

    pub(crate) fn sub_unchecked(&self, other: &UniPoly) -> UniPoly {
        let f = &self.ctx;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        UniPoly::new(self.ctx.clone(), coeffs)
    }

    pub(crate) fn mul_unchecked(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.ctx);
        }
        let f = &self.ctx;
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UniPoly::new(self.ctx.clone(), out)
    }

    pub fn neg(&self) -> UniPoly {
        let coeffs = self.coeffs.iter().map(|&c| self.ctx.neg(c)).collect();
        UniPoly::new(self.ctx.clone(), coeffs)
    }

    pub fn scale(&self, c: FieldElement) -> UniPoly {
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.mul(a, c)).collect();
        UniPoly::new(self.ctx.clone(), coeffs)
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.ctx.inv(self.lead()).expect("nonzero lead");
        self.scale(inv)
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut acc = UniPoly::one(&self.ctx);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = &self.ctx;
        self.coeffs.iter().rev().fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> UniPoly {
        let f = &self.ctx;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.scale_int(c, i as u64))
            .collect();
        UniPoly::new(self.ctx.clone(), coeffs)
    }

    /// Quotient and remainder of Euclidean division.
    pub fn divrem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        self.check(d)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.ctx;
        let mut r = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        if r.len() <= dd {
            return Ok((UniPoly::zero(f), self.clone()));
        }
        let inv = f.inv(d.lead())?;
        let mut quot = vec![f.zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = f.mul(r[k], inv);
            if c.is_zero() {
                continue;
            }
            quot[k - dd] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[k - dd + j] = f.sub(r[k - dd + j], f.mul(c, dc));
            }
        }
        r.truncate(dd);
        Ok((UniPoly::new(f.clone(), quot), UniPoly::new(f.clone(), r)))
    }

    pub fn rem(&self, d: &UniPoly) -> Result<UniPoly> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Monic gcd `g` with Bezout cofactors: `s*self + t*other = g`.
    pub fn xgcd(&self, other: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let ctx = &self.ctx;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UniPoly::one(ctx), UniPoly::zero(ctx));
        let (mut t0, mut t1) = (UniPoly::zero(ctx), UniPoly::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            let s = s0.sub_unchecked(&q.mul_unchecked(&s1));
            let t = t0.sub_unchecked(&q.mul_unchecked(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = ctx.inv(r0.lead()).expect("nonzero lead");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &UniPoly) -> UniPoly {
        let mut base = self.rem(m).expect("nonzero modulus");
        let mut acc = UniPoly::one(&self.ctx).rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base).rem(m).unwrap();
            }
            base = base.mul_unchecked(&base).rem(m).unwrap();
            e >>= 1;
        }
        acc
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &UniPoly) -> Result<UniPoly> {
        self.check(inner)?;
        let mut acc = UniPoly::zero(&self.ctx);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul_unchecked(inner).add_unchecked(&UniPoly::constant(&self.ctx, c));
        }
        Ok(acc)
    }

    pub fn lift(&self, emb: &Embedding) -> Result<UniPoly> {
        if !emb.source().is_same(&self.ctx) {
            return Err(Error::MixedFields);
        }
        let coeffs = self.coeffs.iter().map(|&c| emb.apply(c)).collect();
        Ok(UniPoly::new(emb.target().clone(), coeffs))
    }

    /// Roots in the coefficient field, ascending, without multiplicity.
    pub fn roots(&self) -> Vec<FieldElement> {
        let mut r: Vec<FieldElement> = self
            .factor()
            .1
            .into_iter()
            .filter(|(g, _)| g.degree() == 1)
            .map(|(g, _)| self.ctx.neg(g.coeff(0)))
            .collect();
        r.sort();
        r
    }

    pub fn is_irreducible(&self) -> bool {
        if self.degree() < 1 {
            return false;
        }
        let (_, fs) = self.factor();
        fs.len() == 1 && fs[0].1 == 1
    }

    /// Leading coefficient and sorted monic irreducible factors with
    /// multiplicities. The zero polynomial yields `(0, [])`.
    pub fn factor(&self) -> (FieldElement, Vec<(UniPoly, u32)>) {
        if self.is_zero() {
            return (FieldElement::ZERO, Vec::new());
        }
        let unit = self.lead();
        let mut out = Vec::new();
        for (g, m) in squarefree_decomposition(&self.monic()) {
            for (h, d) in distinct_degree(&g) {
                for irr in equal_degree(&h, d) {
                    out.push((irr, m));
                }
            }
        }
        out.sort_by(|a, b| cmp_poly(&a.0, &b.0).then(a.1.cmp(&b.1)));
        (unit, out)
    }
}

/// Orders by degree, then by coefficients from the top down.
pub(crate) fn cmp_poly(a: &UniPoly, b: &UniPoly) -> Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
}

fn pth_root(f: &UniPoly) -> UniPoly {
    let ctx = f.ctx();
    let p = ctx.p() as usize;
    let coeffs = f.coeffs.iter().step_by(p).map(|&c| ctx.pth_root(c)).collect();
    UniPoly::new(ctx.clone(), coeffs)
}

/// Square-free decomposition of a monic polynomial: pairs `(g, m)` with
/// `f = prod g^m` and every `g` square-free.
fn squarefree_decomposition(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    if f.degree() < 1 {
        return out;
    }
    let p = f.ctx().p();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).expect("gcd divides");
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w).expect("gcd divides");
        i += 1;
    }
    if !c.is_one() {
        for (g, m) in squarefree_decomposition(&pth_root(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a square-free monic polynomial into products of irreducibles of
/// equal degree.
fn distinct_degree(f: &UniPoly) -> Vec<(UniPoly, usize)> {
    let ctx = f.ctx().clone();
    let q = ctx.q() as u64;
    let x = UniPoly::x(&ctx);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest).unwrap();
    let mut i = 1usize;
    while rest.degree() >= 2 * i as i64 {
        h = h.pow_mod(q, &rest);
        let g = rest.gcd(&h.sub_unchecked(&x));
        if !g.is_one() {
            rest = rest.div_exact(&g).unwrap();
            h = h.rem(&rest).unwrap();
            out.push((g, i));
        }
        i += 1;
    }
    if rest.degree() >= 1 {
        let d = rest.degree() as usize;
        out.push((rest, d));
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of distinct monic irreducibles
/// of degree `d`.
fn equal_degree(f: &UniPoly, d: usize) -> Vec<UniPoly> {
    let n = f.degree() as usize;
    if n == d {
        return vec![f.clone()];
    }
    let ctx = f.ctx().clone();
    let q = ctx.q() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (n as u64) << 8 ^ q);
    loop {
        let coeffs: Vec<FieldElement> = (0..n)
            .map(|_| ctx.element(rng.gen_range(0..ctx.q())).unwrap())
            .collect();
        let a = UniPoly::new(ctx.clone(), coeffs);
        if a.degree() < 1 {
            continue;
        }
        let b = if q % 2 == 1 {
            // a^((q^d - 1)/2) = (a^(1 + q + ... + q^(d-1)))^((q-1)/2)
            let mut t = a.rem(f).unwrap();
            let mut frob = t.clone();
            for _ in 1..d {
                frob = frob.pow_mod(q, f);
                t = t.mul_unchecked(&frob).rem(f).unwrap();
            }
            t.pow_mod((q - 1) / 2, f).sub_unchecked(&UniPoly::one(&ctx))
        } else {
            // Absolute trace to F_2: sum of a^(2^i) for i < k*d where q = 2^k.
            let k = ctx.n() as usize;
            let mut t = a.rem(f).unwrap();
            let mut acc = t.clone();
            for _ in 1..k * d {
                t = t.mul_unchecked(&t).rem(f).unwrap();
                acc = acc.add_unchecked(&t);
            }
            acc
        };
        let g = f.gcd(&b);
        if g.degree() > 0 && g.degree() < f.degree() {
            let mut out = equal_degree(&g, d);
            out.extend(equal_degree(&f.div_exact(&g).unwrap(), d));
            return out;
        }
    }
}
