//! Independent oracles shared by the integration tests and the acceptance
//! suite. They use the library's field arithmetic but none of its
//! polynomial algorithms.
#![allow(dead_code)]

use std::sync::Arc;

use ffexpand::{extend, FieldCtx, FieldElement, MultiPoly};
use rand::Rng;

/// `g[i][j]` is the coefficient of `x^i y^j`; always square of side `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub ctx: Arc<FieldCtx>,
    pub c: Vec<Vec<FieldElement>>,
}

impl Grid {
    pub fn zero(ctx: &Arc<FieldCtx>, n: usize) -> Self {
        Grid { ctx: ctx.clone(), c: vec![vec![ctx.zero(); n]; n] }
    }

    pub fn from_multi(f: &MultiPoly, n: usize) -> Self {
        let mut g = Grid::zero(f.ctx(), n);
        for (e, &c) in f.terms() {
            g.c[e[0] as usize][e[1] as usize] = c;
        }
        g
    }

    pub fn to_multi(&self, vars: &[&str]) -> MultiPoly {
        let mut terms = Vec::new();
        for (i, row) in self.c.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                terms.push((vec![i as u32, j as u32], c));
            }
        }
        MultiPoly::from_terms(&self.ctx, vars, terms).unwrap()
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn degree(&self) -> i64 {
        let mut d = -1;
        for (i, row) in self.c.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    d = d.max((i + j) as i64);
                }
            }
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.degree() < 0
    }

    /// Leading term in graded order: largest total degree, then largest
    /// `y`-exponent.
    fn lead(&self) -> Option<(usize, usize)> {
        let n = self.n();
        for s in (0..2 * n).rev() {
            for j in (0..n).rev() {
                if s >= j && s - j < n && !self.c[s - j][j].is_zero() {
                    return Some((s - j, j));
                }
            }
        }
        None
    }

    /// Exact quotient by multivariate division with one divisor.
    pub fn div_exact(&self, g: &Grid) -> Option<Grid> {
        let f = &self.ctx;
        let (gi, gj) = g.lead()?;
        let ginv = f.inv(g.c[gi][gj]).unwrap();
        let mut r = self.clone();
        let mut q = Grid::zero(f, self.n());
        while let Some((ri, rj)) = r.lead() {
            if ri < gi || rj < gj {
                return None;
            }
            let (di, dj) = (ri - gi, rj - gj);
            let t = f.mul(r.c[ri][rj], ginv);
            q.c[di][dj] = t;
            for i in 0..g.n() {
                for j in 0..g.n() {
                    let a = g.c[i][j];
                    if !a.is_zero() {
                        let cell = &mut r.c[i + di][j + dj];
                        *cell = f.sub(*cell, f.mul(t, a));
                    }
                }
            }
        }
        Some(q)
    }

    pub fn mul(&self, o: &Grid) -> Grid {
        let f = &self.ctx;
        let n = self.n().max(o.n());
        let mut out = Grid::zero(f, n);
        for i in 0..self.n() {
            for j in 0..self.n() {
                let a = self.c[i][j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.n() {
                    for l in 0..o.n() {
                        let b = o.c[k][l];
                        if b.is_zero() {
                            continue;
                        }
                        assert!(i + k < n && j + l < n, "grid too small for product");
                        out.c[i + k][j + l] = f.add(out.c[i + k][j + l], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn map(&self, ctx: &Arc<FieldCtx>, g: impl Fn(FieldElement) -> FieldElement) -> Grid {
        Grid { ctx: ctx.clone(), c: self.c.iter().map(|row| row.iter().map(|&a| g(a)).collect()).collect() }
    }
}

/// Whether a line `x = u` or `y = t x + u` with `t, u` in the coefficient
/// field divides `f`.
pub fn has_line_factor(f: &Grid) -> bool {
    let k = &f.ctx;
    let d = f.degree();
    if d < 1 {
        return false;
    }
    let d = d as usize;
    let n = f.n();
    // Vertical lines.
    for u in k.enumerate() {
        let vanishes = (0..n).all(|j| {
            let mut acc = k.zero();
            for i in 0..n {
                acc = k.add(acc, k.mul(f.c[i][j], k.pow(u, i as u64)));
            }
            acc.is_zero()
        });
        if vanishes {
            return true;
        }
    }
    for t in k.enumerate() {
        let mut top = k.zero();
        for j in 0..=d {
            if d - j < n && j < n {
                top = k.add(top, k.mul(f.c[d - j][j], k.pow(t, j as u64)));
            }
        }
        if !top.is_zero() {
            continue;
        }
        for u in k.enumerate() {
            // powers[j] = coefficients of (t x + u)^j
            let mut powers: Vec<Vec<FieldElement>> = vec![vec![k.one()]];
            for j in 1..n {
                let prev = &powers[j - 1];
                let mut next = vec![k.zero(); prev.len() + 1];
                for (e, &c) in prev.iter().enumerate() {
                    next[e] = k.add(next[e], k.mul(c, u));
                    next[e + 1] = k.add(next[e + 1], k.mul(c, t));
                }
                powers.push(next);
            }
            let mut g = vec![k.zero(); 2 * n + 1];
            for i in 0..n {
                for j in 0..n {
                    let a = f.c[i][j];
                    if a.is_zero() {
                        continue;
                    }
                    for (e, &c) in powers[j].iter().enumerate() {
                        g[i + e] = k.add(g[i + e], k.mul(a, c));
                    }
                }
            }
            if g.iter().all(|c| c.is_zero()) {
                return true;
            }
        }
    }
    false
}

/// Whether `f` (total degree 4) is a product of two conics over its
/// coefficient field.
pub fn has_conic_factor(f: &Grid) -> bool {
    let k = &f.ctx;
    let n = f.n();
    let mut top = Grid::zero(k, n);
    for i in 0..n {
        for j in 0..n {
            if i + j == 4 {
                top.c[i][j] = f.c[i][j];
            }
        }
    }
    let elems: Vec<FieldElement> = k.enumerate().collect();
    // Quadratic forms normalized by their lex-leading coefficient.
    let mut forms = Vec::new();
    for &a in &elems {
        for &b in &elems {
            // y^2 coefficient 1
            forms.push([a, b, k.one()]);
            // y^2 coefficient 0, xy coefficient 1
            if b.is_zero() {
                forms.push([a, k.one(), k.zero()]);
            }
        }
    }
    forms.push([k.one(), k.zero(), k.zero()]);
    forms.dedup();
    for [x2, xy, y2] in forms {
        let mut g2 = Grid::zero(k, n);
        g2.c[2][0] = x2;
        g2.c[1][1] = xy;
        g2.c[0][2] = y2;
        if top.div_exact(&g2).is_none() {
            continue;
        }
        for &b1 in &elems {
            for &b2 in &elems {
                for &b0 in &elems {
                    let mut g = g2.clone();
                    g.c[1][0] = b1;
                    g.c[0][1] = b2;
                    g.c[0][0] = b0;
                    if f.div_exact(&g).is_some() {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Absolute irreducibility for total degree at most 4, decided by searching
/// for lines over `F_{q^r}` (`r <= D`) and, in degree 4, for conics over
/// `F_{q^2}`.
pub fn abs_irreducible_oracle(f: &MultiPoly) -> bool {
    let d = f.total_degree();
    assert!(d <= 4, "oracle covers degree at most 4");
    if d <= 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let n = d as usize + 1;
    for r in 1..=d as u32 {
        let ext = extend(f.ctx(), r).unwrap();
        let g = Grid::from_multi(&f.lift(&ext.embedding).unwrap(), n);
        if has_line_factor(&g) {
            return false;
        }
    }
    if d == 4 {
        let ext = extend(f.ctx(), 2).unwrap();
        let g = Grid::from_multi(&f.lift(&ext.embedding).unwrap(), n);
        if has_conic_factor(&g) {
            return false;
        }
    }
    true
}

/// Irreducibility over the coefficient field by trying every normalized
/// candidate factor of degree at most `D/2`.
pub fn irreducible_oracle(f: &MultiPoly) -> bool {
    let d = f.total_degree();
    if d <= 0 {
        return false;
    }
    let k = f.ctx().clone();
    let n = d as usize + 1;
    let fg = Grid::from_multi(f, n);
    let q = k.q() as u64;
    for e in 1..=(d as usize / 2) {
        let monos: Vec<(usize, usize)> =
            (0..=e).flat_map(|s| (0..=s).map(move |j| (s - j, j))).collect();
        let count = q.pow(monos.len() as u32);
        for mut idx in 0..count {
            let mut g = Grid::zero(&k, n);
            for &(i, j) in &monos {
                g.c[i][j] = k.element((idx % q) as u32).unwrap();
                idx /= q;
            }
            if g.degree() != e as i64 {
                continue;
            }
            if fg.div_exact(&g).is_some() {
                return false;
            }
        }
    }
    true
}

/// Every polynomial in `x, y` of total degree at most `d` over `ctx`, in
/// index order.
pub fn all_bivariate(ctx: &Arc<FieldCtx>, d: usize) -> impl Iterator<Item = MultiPoly> + '_ {
    let monos: Vec<(u32, u32)> = (0..=d as u32).flat_map(|s| (0..=s).map(move |j| (s - j, j))).collect();
    let q = ctx.q() as u64;
    let count = q.pow(monos.len() as u32);
    (0..count).map(move |mut idx| {
        let terms: Vec<_> = monos
            .iter()
            .map(|&(i, j)| {
                let c = ctx.element((idx % q) as u32).unwrap();
                idx /= q;
                (vec![i, j], c)
            })
            .collect();
        MultiPoly::from_terms(ctx, &["x", "y"], terms).unwrap()
    })
}

pub fn random_bivariate(ctx: &Arc<FieldCtx>, deg: usize, rng: &mut impl Rng) -> MultiPoly {
    loop {
        let mut terms = Vec::new();
        for s in 0..=deg as u32 {
            for j in 0..=s {
                terms.push((vec![s - j, j], ctx.element(rng.gen_range(0..ctx.q())).unwrap()));
            }
        }
        let f = MultiPoly::from_terms(ctx, &["x", "y"], terms).unwrap();
        if f.total_degree() == deg as i64 {
            return f;
        }
    }
}

fn sparse_bivariate(ctx: &Arc<FieldCtx>, deg: usize, rng: &mut impl Rng) -> MultiPoly {
    loop {
        let k = rng.gen_range(2..=4);
        let terms: Vec<_> = (0..k)
            .map(|_| {
                let s = rng.gen_range(0..=deg as u32);
                let j = rng.gen_range(0..=s);
                (vec![s - j, j], ctx.element(rng.gen_range(1..ctx.q())).unwrap())
            })
            .collect();
        let f = MultiPoly::from_terms(ctx, &["x", "y"], terms).unwrap();
        if f.total_degree() == deg as i64 {
            return f;
        }
    }
}

/// `g * frob(g)` for random `g` over `F_{q^2}`, pulled back to `F_q`.
fn norm_product(ctx: &Arc<FieldCtx>, deg: usize, rng: &mut impl Rng) -> MultiPoly {
    let ext = extend(ctx, 2).unwrap();
    let big = ext.field.clone();
    let q = ctx.q() as u64;
    let g = random_bivariate(&big, deg, rng);
    let conj = g.map_coeffs(|a| big.pow(a, q));
    let prod = g.mul(&conj).unwrap();
    let terms: Vec<_> = prod
        .terms()
        .map(|(e, &c)| (e.clone(), ext.embedding.preimage(c).expect("norm has base coefficients")))
        .collect();
    MultiPoly::from_terms(ctx, &["x", "y"], terms).unwrap()
}

/// A mix of random, product, norm and sparse polynomials of degree at most
/// `max_deg`, so that both verdicts occur often.
pub fn mixed_sample(ctx: &Arc<FieldCtx>, max_deg: usize, k: usize, rng: &mut impl Rng) -> MultiPoly {
    match k % 4 {
        0 => random_bivariate(ctx, rng.gen_range(1..=max_deg), rng),
        1 => {
            let d1 = rng.gen_range(1..max_deg);
            let d2 = rng.gen_range(1..=max_deg - d1);
            let a = random_bivariate(ctx, d1, rng);
            let b = if rng.gen_bool(0.25) && d2 == d1 { a.clone() } else { random_bivariate(ctx, d2, rng) };
            a.mul(&b).unwrap()
        }
        2 => norm_product(ctx, rng.gen_range(1..=max_deg / 2), rng),
        _ => sparse_bivariate(ctx, rng.gen_range(1..=max_deg), rng),
    }
}
