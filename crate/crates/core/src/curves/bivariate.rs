//! Dense bivariate polynomials `K[x][y]` and their factorization over a
//! finite field: square-free splitting, a good fiber, Hensel lifting and
//! subset recombination, with a detour through an extension field when the
//! base field is too small to supply a good fiber.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{extend, prime_factors, Embedding, FieldCtx, FieldElement};
use crate::poly::{MultiPoly, UniPoly};

pub const DEFAULT_DEGREE_CAP: i64 = 12;

/// `sum_j c[j](x) y^j`, trimmed so the top coefficient is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct BiPoly {
    ctx: Arc<FieldCtx>,
    c: Vec<UniPoly>,
}

impl BiPoly {
    fn new(ctx: Arc<FieldCtx>, mut c: Vec<UniPoly>) -> Self {
        while c.last().is_some_and(|u| u.is_zero()) {
            c.pop();
        }
        BiPoly { ctx, c }
    }

    fn zero(ctx: &Arc<FieldCtx>) -> Self {
        BiPoly { ctx: ctx.clone(), c: Vec::new() }
    }

    pub(crate) fn from_multi(f: &MultiPoly) -> Result<Self> {
        if f.vars().len() != 2 {
            return Err(Error::NotBivariate(f.vars().to_vec()));
        }
        let ctx = f.ctx().clone();
        let dy = f.terms().map(|(e, _)| e[1] as usize).max().unwrap_or(0);
        let dx = f.terms().map(|(e, _)| e[0] as usize).max().unwrap_or(0);
        let mut grid = vec![vec![ctx.zero(); dx + 1]; dy + 1];
        for (e, &c) in f.terms() {
            grid[e[1] as usize][e[0] as usize] = c;
        }
        Ok(BiPoly::new(ctx.clone(), grid.into_iter().map(|row| UniPoly::new(ctx.clone(), row)).collect()))
    }

    pub(crate) fn to_multi(&self, vars: &[String]) -> MultiPoly {
        let terms = self.c.iter().enumerate().flat_map(|(j, u)| {
            u.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(i, &c)| (vec![i as u32, j as u32], c))
        });
        MultiPoly::from_terms_with(&self.ctx, vars, terms).expect("well-formed terms")
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn deg_y(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    fn deg_x(&self) -> i64 {
        self.c.iter().map(|u| u.degree()).max().unwrap_or(-1)
    }

    fn total_degree(&self) -> i64 {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, u)| !u.is_zero())
            .map(|(j, u)| u.degree() + j as i64)
            .max()
            .unwrap_or(-1)
    }

    fn coeff(&self, i: usize, j: usize) -> FieldElement {
        self.c.get(j).map_or(FieldElement::ZERO, |u| u.coeff(i))
    }

    fn lead_y(&self) -> &UniPoly {
        self.c.last().expect("nonzero polynomial")
    }

    fn add(&self, o: &BiPoly) -> BiPoly {
        let n = self.c.len().max(o.c.len());
        let z = UniPoly::zero(&self.ctx);
        let c = (0..n)
            .map(|j| self.c.get(j).unwrap_or(&z).add_unchecked(o.c.get(j).unwrap_or(&z)))
            .collect();
        BiPoly::new(self.ctx.clone(), c)
    }

    fn sub(&self, o: &BiPoly) -> BiPoly {
        let n = self.c.len().max(o.c.len());
        let z = UniPoly::zero(&self.ctx);
        let c = (0..n)
            .map(|j| self.c.get(j).unwrap_or(&z).sub_unchecked(o.c.get(j).unwrap_or(&z)))
            .collect();
        BiPoly::new(self.ctx.clone(), c)
    }

    fn mul(&self, o: &BiPoly) -> BiPoly {
        if self.is_zero() || o.is_zero() {
            return BiPoly::zero(&self.ctx);
        }
        let mut c = vec![UniPoly::zero(&self.ctx); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].add_unchecked(&a.mul_unchecked(b));
            }
        }
        BiPoly::new(self.ctx.clone(), c)
    }

    fn mul_uni(&self, u: &UniPoly) -> BiPoly {
        BiPoly::new(self.ctx.clone(), self.c.iter().map(|a| a.mul_unchecked(u)).collect())
    }

    fn scale(&self, k: FieldElement) -> BiPoly {
        BiPoly::new(self.ctx.clone(), self.c.iter().map(|a| a.scale(k)).collect())
    }

    fn shift_y(&self, d: usize) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![UniPoly::zero(&self.ctx); d];
        c.extend(self.c.iter().cloned());
        BiPoly::new(self.ctx.clone(), c)
    }

    fn derivative_x(&self) -> BiPoly {
        BiPoly::new(self.ctx.clone(), self.c.iter().map(|u| u.derivative()).collect())
    }

    fn derivative_y(&self) -> BiPoly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, u)| u.scale(self.ctx.from_int(j as i64)))
            .collect();
        BiPoly::new(self.ctx.clone(), c)
    }

    /// Exchanges the roles of `x` and `y`.
    fn swap(&self) -> BiPoly {
        let dx = self.deg_x();
        if dx < 0 {
            return self.clone();
        }
        let c = (0..=dx as usize)
            .map(|i| UniPoly::new(self.ctx.clone(), self.c.iter().map(|u| u.coeff(i)).collect()))
            .collect();
        BiPoly::new(self.ctx.clone(), c)
    }

    /// `self(s, y)`.
    fn eval_x(&self, s: FieldElement) -> UniPoly {
        UniPoly::new(self.ctx.clone(), self.c.iter().map(|u| u.eval(s)).collect())
    }

    /// `self(x + s + c*y, y)`.
    fn shift_linear(&self, s: FieldElement, c: FieldElement) -> BiPoly {
        let ctx = &self.ctx;
        let x_image = BiPoly::new(
            ctx.clone(),
            vec![UniPoly::new(ctx.clone(), vec![s, ctx.one()]), UniPoly::constant(ctx, c)],
        );
        let dx = self.deg_x();
        let mut acc = BiPoly::zero(ctx);
        for i in (0..=dx.max(0) as usize).rev() {
            let column = BiPoly::new(
                ctx.clone(),
                self.c.iter().map(|u| UniPoly::constant(ctx, u.coeff(i))).collect(),
            );
            acc = acc.mul(&x_image).add(&column);
        }
        acc
    }

    /// Coefficient of `y^D` in `self(x + c*y, y)`, where `D` is the total
    /// degree: the top homogeneous part evaluated at `(c, 1)`.
    fn top_at(&self, c: FieldElement) -> FieldElement {
        let f = &self.ctx;
        let d = self.total_degree();
        let mut acc = f.zero();
        for j in 0..=d.max(0) as usize {
            let i = d as usize - j;
            let a = self.coeff(i, j);
            if !a.is_zero() {
                acc = f.add(acc, f.mul(a, f.pow(c, i as u64)));
            }
        }
        acc
    }

    /// Monic gcd of the `y`-coefficients.
    fn content(&self) -> UniPoly {
        self.c.iter().fold(UniPoly::zero(&self.ctx), |g, u| g.gcd(u))
    }

    fn primitive_part(&self) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.content();
        BiPoly::new(self.ctx.clone(), self.c.iter().map(|u| u.div_exact(&g).expect("content divides")).collect())
    }

    /// Pseudo-remainder with respect to `y`.
    fn prem(&self, b: &BiPoly) -> BiPoly {
        let db = b.deg_y();
        let lb = b.lead_y().clone();
        let mut r = self.clone();
        while !r.is_zero() && r.deg_y() >= db {
            let d = (r.deg_y() - db) as usize;
            let lr = r.lead_y().clone();
            r = r.mul_uni(&lb).sub(&b.mul_uni(&lr).shift_y(d));
        }
        r
    }

    /// Exact quotient in `K[x, y]`, or `None` if `b` does not divide.
    fn div_exact(&self, b: &BiPoly) -> Option<BiPoly> {
        if b.is_zero() {
            return None;
        }
        let mut r = self.clone();
        let mut q = vec![UniPoly::zero(&self.ctx); (self.deg_y() - b.deg_y()).max(0) as usize + 1];
        while !r.is_zero() {
            if r.deg_y() < b.deg_y() {
                return None;
            }
            let d = (r.deg_y() - b.deg_y()) as usize;
            let t = r.lead_y().div_exact(b.lead_y())?;
            r = r.sub(&b.mul_uni(&t).shift_y(d));
            q[d] = t;
        }
        Some(BiPoly::new(self.ctx.clone(), q))
    }

    /// Greatest common divisor via a primitive pseudo-remainder sequence.
    fn gcd(&self, o: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let cg = self.content().gcd(&o.content());
        let (mut u, mut v) = (self.primitive_part(), o.primitive_part());
        if u.deg_y() < v.deg_y() {
            std::mem::swap(&mut u, &mut v);
        }
        while !v.is_zero() {
            let r = u.prem(&v);
            u = v;
            v = r.primitive_part();
        }
        u.primitive_part().mul_uni(&cg)
    }

    /// `g` with `g^p = self`, when every exponent is a multiple of `p`.
    fn pth_root(&self) -> Option<BiPoly> {
        let f = &self.ctx;
        let p = f.characteristic() as usize;
        let mut c = Vec::new();
        for (j, u) in self.c.iter().enumerate() {
            if u.is_zero() {
                continue;
            }
            if j % p != 0 {
                return None;
            }
            let mut row = Vec::new();
            for (i, &a) in u.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                if i % p != 0 {
                    return None;
                }
                if row.len() <= i / p {
                    row.resize(i / p + 1, f.zero());
                }
                row[i / p] = f.pth_root(a);
            }
            if c.len() <= j / p {
                c.resize(j / p + 1, UniPoly::zero(f));
            }
            c[j / p] = UniPoly::new(f.clone(), row);
        }
        Some(BiPoly::new(f.clone(), c))
    }

    fn map_coeffs(&self, ctx: &Arc<FieldCtx>, g: impl Fn(FieldElement) -> FieldElement) -> BiPoly {
        let c = self
            .c
            .iter()
            .map(|u| UniPoly::new(ctx.clone(), u.coeffs().iter().map(|&a| g(a)).collect()))
            .collect();
        BiPoly::new(ctx.clone(), c)
    }

    fn lift(&self, emb: &Embedding) -> BiPoly {
        self.map_coeffs(emb.target(), |a| emb.apply(a))
    }

    /// Leading coefficient under graded order (total degree, then `x`-degree).
    fn lead_graded(&self) -> FieldElement {
        let d = self.total_degree();
        if d < 0 {
            return FieldElement::ZERO;
        }
        (0..=d as usize)
            .map(|j| self.coeff(d as usize - j, j))
            .find(|a| !a.is_zero())
            .expect("top homogeneous part is nonzero")
    }

    fn normalized(&self) -> BiPoly {
        let l = self.lead_graded();
        if l.is_zero() {
            return self.clone();
        }
        self.scale(self.ctx.inv(l).unwrap())
    }

    /// `x`-major coefficient list: entry `i` is the coefficient of `x^i` as a
    /// polynomial in `y`.
    fn to_series(&self, len: usize) -> Vec<UniPoly> {
        let mut s: Vec<UniPoly> = self.swap().c;
        s.resize(len.max(s.len()), UniPoly::zero(&self.ctx));
        s
    }

    fn from_series(ctx: &Arc<FieldCtx>, s: &[UniPoly]) -> BiPoly {
        BiPoly::new(ctx.clone(), s.to_vec()).swap()
    }

    fn cmp_canonical(&self, o: &BiPoly) -> Ordering {
        self.total_degree().cmp(&o.total_degree()).then_with(|| {
            let key = |b: &BiPoly| -> Vec<Vec<u32>> {
                b.c.iter().map(|u| u.coeffs().iter().map(|c| c.index()).collect()).collect()
            };
            key(self).cmp(&key(o))
        })
    }
}

/// Truncated product of two `x`-series of `y`-polynomials.
fn series_mul(a: &[UniPoly], b: &[UniPoly], n: usize) -> Vec<UniPoly> {
    let ctx = a[0].ctx().clone();
    let mut out = vec![UniPoly::zero(&ctx); n];
    for (i, u) in a.iter().enumerate().take(n) {
        if u.is_zero() {
            continue;
        }
        for (j, v) in b.iter().enumerate().take(n - i) {
            out[i + j] = out[i + j].add_unchecked(&u.mul_unchecked(v));
        }
    }
    out
}

/// Lifts `target(0, y) = a0 * b0` (coprime, `a0` monic) to a factorization
/// modulo `x^n` with both factors monic in `y`.
fn hensel_two(target: &[UniPoly], a0: &UniPoly, b0: &UniPoly, n: usize) -> (Vec<UniPoly>, Vec<UniPoly>) {
    let ctx = a0.ctx().clone();
    let (_, _, t) = a0.xgcd(b0);
    let mut a = vec![UniPoly::zero(&ctx); n];
    let mut b = vec![UniPoly::zero(&ctx); n];
    a[0] = a0.clone();
    b[0] = b0.clone();
    for k in 1..n {
        let mut e = target[k].clone();
        for i in 0..=k {
            if !a[i].is_zero() && !b[k - i].is_zero() {
                e = e.sub_unchecked(&a[i].mul_unchecked(&b[k - i]));
            }
        }
        if e.is_zero() {
            continue;
        }
        let alpha = t.mul_unchecked(&e).rem(a0).unwrap();
        let beta = e
            .sub_unchecked(&alpha.mul_unchecked(b0))
            .div_exact(a0)
            .expect("Bezout identity makes this exact");
        a[k] = alpha;
        b[k] = beta;
    }
    (a, b)
}

/// Factors `h`, monic in `y` up to a constant, with square-free fiber at
/// `x = 0`.
fn factor_at_good_fiber(h: &BiPoly) -> Vec<BiPoly> {
    let ctx = &h.ctx;
    let h = h.scale(ctx.inv(h.lead_y().coeff(0)).expect("constant leading coefficient"));
    let (_, fiber_factors) = h.eval_x(ctx.zero()).factor();
    if fiber_factors.len() <= 1 {
        return vec![h];
    }
    let n = h.deg_x() as usize + 1;
    let mut lifted: Vec<Vec<UniPoly>> = Vec::new();
    let mut target = h.to_series(n);
    for k in 0..fiber_factors.len() - 1 {
        let a0 = &fiber_factors[k].0;
        let b0 = fiber_factors[k + 1..]
            .iter()
            .fold(UniPoly::one(ctx), |acc, (g, _)| acc.mul_unchecked(g));
        let (a, b) = hensel_two(&target, a0, &b0, n);
        lifted.push(a);
        target = b;
    }
    lifted.push(target);

    let mut out = Vec::new();
    let mut cur = h.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = None;
        for subset in Combinations::new(lifted.len(), size) {
            let prod = subset[1..]
                .iter()
                .fold(lifted[subset[0]].clone(), |acc, &i| series_mul(&acc, &lifted[i], n));
            let cand = BiPoly::from_series(ctx, &prod);
            if let Some(q) = cur.div_exact(&cand) {
                found = Some((subset, cand, q));
                break;
            }
        }
        match found {
            Some((subset, cand, q)) => {
                out.push(cand);
                cur = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if cur.total_degree() > 0 {
        out.push(cur);
    }
    out
}

/// Index subsets of a fixed size in lexicographic order.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), done: k > n || k == 0 }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Tries every direction and fiber over the coefficient field itself.
fn factor_squarefree_here(r: &BiPoly) -> Option<Vec<BiPoly>> {
    let ctx = &r.ctx;
    let d = r.total_degree();
    for swapped in [false, true] {
        let base = if swapped { r.swap() } else { r.clone() };
        let directions: Vec<FieldElement> =
            if swapped { vec![ctx.zero()] } else { ctx.enumerate().collect() };
        for c in directions {
            if base.top_at(c).is_zero() {
                continue;
            }
            let g = base.shift_linear(ctx.zero(), c);
            for s in ctx.enumerate() {
                let fiber = g.eval_x(s);
                debug_assert_eq!(fiber.degree(), d);
                if fiber.gcd(&fiber.derivative()).degree() != 0 {
                    continue;
                }
                let h = g.shift_linear(s, ctx.zero());
                let back = |f: &BiPoly| {
                    let f = f.shift_linear(ctx.neg(s), ctx.neg(c));
                    if swapped { f.swap() } else { f }.normalized()
                };
                return Some(factor_at_good_fiber(&h).iter().map(back).collect());
            }
        }
    }
    None
}

/// Irreducible factors of a square-free polynomial, normalized.
fn factor_squarefree(r: &BiPoly) -> Result<Vec<BiPoly>> {
    let d = r.total_degree();
    if d <= 0 {
        return Ok(Vec::new());
    }
    if d == 1 {
        return Ok(vec![r.normalized()]);
    }
    if let Some(fs) = factor_squarefree_here(r) {
        return Ok(fs);
    }
    let ctx = &r.ctx;
    let q = ctx.q() as u64;
    for k in 2u32.. {
        let ext = extend(ctx, k)?;
        let big = &ext.field;
        let Some(over_ext) = factor_squarefree_here(&r.lift(&ext.embedding)) else {
            continue;
        };
        // Products over Frobenius orbits descend to the base field.
        let frob = |f: &BiPoly| f.map_coeffs(big, |a| big.pow(a, q));
        let mut seen = vec![false; over_ext.len()];
        let mut out = Vec::new();
        for i in 0..over_ext.len() {
            if seen[i] {
                continue;
            }
            seen[i] = true;
            let mut prod = over_ext[i].clone();
            let mut g = frob(&over_ext[i]);
            while g != over_ext[i] {
                let j = over_ext.iter().position(|h| *h == g).expect("Frobenius permutes the factors");
                seen[j] = true;
                prod = prod.mul(&g);
                g = frob(&g);
            }
            let down = prod.map_coeffs(ctx, |a| ext.embedding.preimage(a).expect("Frobenius-fixed coefficient"));
            out.push(down.normalized());
        }
        return Ok(out);
    }
    unreachable!()
}

/// Normalized irreducible factors with multiplicities.
fn factor_full(f: &BiPoly) -> Result<Vec<(BiPoly, u32)>> {
    if f.total_degree() <= 0 {
        return Ok(Vec::new());
    }
    let g = f.gcd(&f.derivative_x()).gcd(&f.derivative_y());
    let r = f.div_exact(&g).expect("gcd divides");
    let mut rest = f.clone();
    let mut out = Vec::new();
    for h in factor_squarefree(&r)? {
        let mut e = 0;
        while let Some(q) = rest.div_exact(&h) {
            rest = q;
            e += 1;
        }
        out.push((h, e));
    }
    if rest.total_degree() > 0 {
        let root = rest.pth_root().expect("remaining part is a p-th power");
        let p = f.ctx.characteristic();
        for (h, e) in factor_full(&root)? {
            out.push((h, e * p));
        }
    }
    Ok(out)
}

/// Factorization `unit * prod f_i^{e_i}` with each `f_i` normalized so its
/// leading coefficient (graded order: total degree, then degree in the
/// first variable) is one.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub unit: FieldElement,
    pub factors: Vec<(MultiPoly, u32)>,
}

impl Factorization {
    /// Number of irreducible factors counted with multiplicity.
    pub fn count(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn expand(&self, ctx: &Arc<FieldCtx>, vars: &[String]) -> MultiPoly {
        self.factors.iter().fold(MultiPoly::constant_with(ctx, vars, self.unit), |acc, (f, e)| {
            acc.mul(&f.pow(*e)).expect("same ring")
        })
    }
}

fn prepare(f: &MultiPoly, cap: i64) -> Result<BiPoly> {
    let b = BiPoly::from_multi(f)?;
    if b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = b.total_degree();
    if d > cap {
        return Err(Error::DegreeCapExceeded { deg: d, cap });
    }
    Ok(b)
}

/// Factors a bivariate polynomial over its coefficient field.
pub fn factor_bivariate(f: &MultiPoly) -> Result<Factorization> {
    factor_bivariate_capped(f, DEFAULT_DEGREE_CAP)
}

pub fn factor_bivariate_capped(f: &MultiPoly, cap: i64) -> Result<Factorization> {
    let b = prepare(f, cap)?;
    let mut fs = factor_full(&b)?;
    fs.sort_by(|x, y| x.0.cmp_canonical(&y.0).then(x.1.cmp(&y.1)));
    Ok(Factorization {
        unit: b.lead_graded(),
        factors: fs.into_iter().map(|(g, e)| (g.to_multi(f.vars()), e)).collect(),
    })
}

pub fn is_irreducible_bivariate(f: &MultiPoly) -> Result<bool> {
    Ok(factor_bivariate(f)?.count() == 1)
}

/// Irreducibility over every finite extension of the coefficient field.
///
/// A polynomial irreducible over `F_q` splits over the algebraic closure into
/// `r` conjugate factors of equal degree, defined over `F_{q^r}`, with `r`
/// dividing the total degree `D`; over `F_{q^m}` it then has `gcd(m, r)`
/// factors. Irreducibility over `F_{q^l}` for each prime `l | D` therefore
/// implies irreducibility over `F_{q^m}` for all `m <= D`.
pub fn is_absolutely_irreducible(f: &MultiPoly) -> Result<bool> {
    is_absolutely_irreducible_capped(f, DEFAULT_DEGREE_CAP)
}

pub fn is_absolutely_irreducible_capped(f: &MultiPoly, cap: i64) -> Result<bool> {
    let b = prepare(f, cap)?;
    let d = b.total_degree();
    if d <= 0 {
        return Ok(false);
    }
    if d == 1 {
        return Ok(true);
    }
    let g = b.gcd(&b.derivative_x()).gcd(&b.derivative_y());
    if g.total_degree() > 0 {
        return Ok(false);
    }
    if factor_squarefree(&b)?.len() != 1 {
        return Ok(false);
    }
    for l in prime_factors(d as u64) {
        let ext = extend(&b.ctx, l as u32)?;
        if factor_squarefree(&b.lift(&ext.embedding))?.len() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Point count helper: number of `(x, y)` in the coefficient field with
/// `f(x, y) = 0`.
pub(crate) fn count_zeros(f: &MultiPoly) -> Result<u64> {
    let b = BiPoly::from_multi(f)?;
    let ctx = &b.ctx;
    let q = ctx.q() as u64;
    let by_x = b.swap();
    let mut n = 0u64;
    for x in ctx.enumerate() {
        let u = by_x.eval_x(x);
        if u.is_zero() {
            n += q;
            continue;
        }
        n += ctx.enumerate().filter(|&y| u.eval(y).is_zero()).count() as u64;
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn bp(ctx: &Arc<FieldCtx>, s: &str) -> BiPoly {
        BiPoly::from_multi(&MultiPoly::parse_with_vars(ctx, s, &["x", "y"]).unwrap()).unwrap()
    }

    #[test]
    fn gcd_and_exact_division() {
        let f5 = make_field(5, 1).unwrap();
        let a = bp(&f5, "(x + y + 1)*(x*y + 2)");
        let b = bp(&f5, "(x + y + 1)*(x^2 + y)");
        let g = a.gcd(&b);
        assert_eq!(g.normalized(), bp(&f5, "x + y + 1"));
        assert!(a.div_exact(&bp(&f5, "x*y + 2")).is_some());
        assert!(a.div_exact(&bp(&f5, "x*y + 3")).is_none());
        let c = bp(&f5, "x*(x+1)*y + x*(x+1)");
        assert_eq!(c.content(), UniPoly::from_ints(&f5, &[0, 1, 1]));
    }

    #[test]
    fn shift_round_trip() {
        let f7 = make_field(7, 1).unwrap();
        let a = bp(&f7, "x^3*y + 2*x*y^2 + 5*y + 1");
        let (s, c) = (f7.from_int(3), f7.from_int(5));
        let b = a.shift_linear(s, c);
        assert_eq!(b.shift_linear(f7.neg(s), f7.neg(c)), a);
        assert_eq!(a.swap().swap(), a);
        assert_eq!(BiPoly::from_series(&f7, &a.to_series(6)), a);
    }

    #[test]
    fn hensel_two_reproduces_target() {
        let f5 = make_field(5, 1).unwrap();
        let h = bp(&f5, "(y^2 + x*y + 2)*(y + x^2 + 1)");
        let n = 5;
        let series = h.to_series(n);
        let (_, fs) = h.eval_x(f5.zero()).factor();
        assert_eq!(fs.len(), 2);
        let (a, b) = hensel_two(&series, &fs[0].0, &fs[1].0, n);
        assert_eq!(series_mul(&a, &b, n), series);
    }

    #[test]
    fn combinations_enumerate_binomially() {
        assert_eq!(Combinations::new(5, 2).count(), 10);
        assert_eq!(Combinations::new(4, 4).count(), 1);
        assert_eq!(Combinations::new(3, 0).count(), 0);
    }

    #[test]
    fn small_examples() {
        let f3 = make_field(3, 1).unwrap();
        let xy = MultiPoly::parse_with_vars(&f3, "x1*x2", &["x1", "x2"]).unwrap();
        let fs = factor_bivariate(&xy).unwrap();
        assert_eq!(fs.factors.len(), 2);
        assert!(!is_absolutely_irreducible(&xy).unwrap());
        let hyp = MultiPoly::parse_with_vars(&f3, "x1*x2 + 1", &["x1", "x2"]).unwrap();
        assert!(is_absolutely_irreducible(&hyp).unwrap());
        let circ = MultiPoly::parse_with_vars(&f3, "x1^2 + x2^2", &["x1", "x2"]).unwrap();
        assert!(is_irreducible_bivariate(&circ).unwrap());
        assert!(!is_absolutely_irreducible(&circ).unwrap());
    }

    #[test]
    fn inseparable_powers() {
        let f3 = make_field(3, 1).unwrap();
        let vars = ["x".to_string(), "y".to_string()];
        let f = MultiPoly::parse_with_vars(&f3, "2*(x + y^2)^3 * (x*y + 1)^4 * y^2", &["x", "y"]).unwrap();
        let fs = factor_bivariate_capped(&f, 20).unwrap();
        assert_eq!(fs.expand(&f3, &vars), f);
        let mults: Vec<u32> = fs.factors.iter().map(|(_, e)| *e).collect();
        assert_eq!(mults.iter().sum::<u32>(), 9);
        assert_eq!(fs.unit, f3.from_int(2));
    }

    #[test]
    fn degree_cap_and_zero() {
        let f5 = make_field(5, 1).unwrap();
        let big = MultiPoly::parse_with_vars(&f5, "x^13 + y", &["x", "y"]).unwrap();
        assert_eq!(
            factor_bivariate(&big).unwrap_err(),
            Error::DegreeCapExceeded { deg: 13, cap: 12 }
        );
        let zero = MultiPoly::zero(&f5, &["x", "y"]);
        assert_eq!(factor_bivariate(&zero).unwrap_err(), Error::ZeroPolynomial);
    }
}
