//! Sparse multivariate polynomials over a finite field, and the kernel
//! predicates (symmetry, non-diagonality, degree below the characteristic).

mod parse;
pub mod univariate;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Embedding, FieldCtx, FieldElement};
use univariate::format_coeff;

pub use univariate::UniPoly;

/// Exponent vector, one entry per variable of the owning polynomial.
pub type Exponents = Vec<u32>;

#[derive(Clone)]
pub struct MultiPoly {
    ctx: Arc<FieldCtx>,
    vars: Vec<String>,
    terms: BTreeMap<Exponents, FieldElement>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.is_same(&other.ctx) && self.vars == other.vars && self.terms == other.terms
    }
}
impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.vars.join(","), self)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest total degree first.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (k, (exps, c)) in terms.into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = exps
                .iter()
                .zip(&self.vars)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            let cs = format_coeff(&self.ctx, *c);
            if mono.is_empty() {
                write!(f, "{cs}")?;
            } else if cs == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{cs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// One serialized term: exponents in variable order and the coefficient's
/// canonical field index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    pub coefficient: u32,
}

/// Right-hand side of a single-variable substitution.
pub enum Substitution<'a> {
    Value(FieldElement),
    Poly(&'a MultiPoly),
}

fn owned_vars(vars: &[&str]) -> Vec<String> {
    vars.iter().map(|s| s.to_string()).collect()
}

impl MultiPoly {
    pub fn zero(ctx: &Arc<FieldCtx>, vars: &[&str]) -> Self {
        MultiPoly { ctx: ctx.clone(), vars: owned_vars(vars), terms: BTreeMap::new() }
    }

    pub(crate) fn zero_with(ctx: &Arc<FieldCtx>, vars: &[String]) -> Self {
        MultiPoly { ctx: ctx.clone(), vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(ctx: &Arc<FieldCtx>, vars: &[&str], c: FieldElement) -> Self {
        Self::constant_with(ctx, &owned_vars(vars), c)
    }

    pub(crate) fn constant_with(ctx: &Arc<FieldCtx>, vars: &[String], c: FieldElement) -> Self {
        let mut p = Self::zero_with(ctx, vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    /// The polynomial consisting of variable `name`.
    pub fn var(ctx: &Arc<FieldCtx>, vars: &[&str], name: &str) -> Result<Self> {
        Self::var_with(ctx, &owned_vars(vars), name)
    }

    pub(crate) fn var_with(ctx: &Arc<FieldCtx>, vars: &[String], name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Self::zero_with(ctx, vars);
        p.terms.insert(e, ctx.one());
        Ok(p)
    }

    /// Sums coefficients of repeated exponent vectors and drops zeros.
    pub fn from_terms<I>(ctx: &Arc<FieldCtx>, vars: &[&str], terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, FieldElement)>,
    {
        Self::from_terms_with(ctx, &owned_vars(vars), terms)
    }

    pub(crate) fn from_terms_with<I>(ctx: &Arc<FieldCtx>, vars: &[String], terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, FieldElement)>,
    {
        let mut p = Self::zero_with(ctx, vars);
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(Error::InvalidArgument(format!(
                    "exponent vector {e:?} does not match variables {vars:?}"
                )));
            }
            if c.index() >= ctx.q() {
                return Err(Error::InvalidArgument(format!("coefficient {c} outside field")));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let f = &self.ctx;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> FieldElement {
        self.terms.get(e).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coeff(&vec![0; self.vars.len()])
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as i64).sum::<i64>())
            .max()
            .unwrap_or(-1)
    }

    /// Degree in one variable; `-1` for the zero polynomial.
    pub fn degree_in(&self, var: &str) -> Result<i64> {
        let i = self.var_index(var).ok_or_else(|| Error::UnknownVariable(var.into()))?;
        Ok(self.terms.keys().map(|e| e[i] as i64).max().unwrap_or(-1))
    }

    fn check(&self, other: &MultiPoly) -> Result<()> {
        if !self.ctx.is_same(&other.ctx) {
            return Err(Error::MixedFields);
        }
        if self.vars != other.vars {
            return Err(Error::MixedVariables(self.vars.clone(), other.vars.clone()));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        let f = &self.ctx;
        MultiPoly {
            ctx: self.ctx.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), f.neg(c))).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check(other)?;
        let f = &self.ctx;
        let mut out = Self::zero_with(&self.ctx, &self.vars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: FieldElement) -> MultiPoly {
        let f = &self.ctx;
        let mut out = Self::zero_with(&self.ctx, &self.vars);
        for (e, &a) in &self.terms {
            out.add_term(e.clone(), f.mul(a, c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = Self::constant_with(&self.ctx, &self.vars, self.ctx.one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Evaluation at a point given positionally, in variable order.
    pub fn eval_at(&self, point: &[FieldElement]) -> FieldElement {
        assert_eq!(point.len(), self.vars.len(), "point dimension mismatch");
        let f = &self.ctx;
        let mut acc = f.zero();
        for (e, &c) in &self.terms {
            let mut t = c;
            for (&x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = f.mul(t, f.pow(x, k as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Evaluation at named values; every variable must be assigned.
    pub fn evaluate(&self, assignment: &[(&str, FieldElement)]) -> Result<FieldElement> {
        let point = self
            .vars
            .iter()
            .map(|v| {
                assignment
                    .iter()
                    .find(|(name, _)| name == v)
                    .map(|&(_, x)| x)
                    .ok_or_else(|| Error::MissingVariable(v.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.eval_at(&point))
    }

    /// Replaces one variable by a value or by a polynomial over the same
    /// variable list. The variable list itself is unchanged.
    pub fn substitute(&self, var: &str, by: Substitution<'_>) -> Result<MultiPoly> {
        let i = self.var_index(var).ok_or_else(|| Error::UnknownVariable(var.into()))?;
        let f = &self.ctx;
        match by {
            Substitution::Value(x) => {
                let mut out = Self::zero_with(&self.ctx, &self.vars);
                for (e, &c) in &self.terms {
                    let mut e2 = e.clone();
                    let k = std::mem::replace(&mut e2[i], 0);
                    out.add_term(e2, f.mul(c, f.pow(x, k as u64)));
                }
                Ok(out)
            }
            Substitution::Poly(g) => {
                self.check(g)?;
                let images: Vec<MultiPoly> = (0..self.vars.len())
                    .map(|j| {
                        if j == i {
                            g.clone()
                        } else {
                            Self::var_with(&self.ctx, &self.vars, &self.vars[j]).unwrap()
                        }
                    })
                    .collect();
                self.compose(&self.vars, &images)
            }
        }
    }

    /// Simultaneous substitution of every variable `vars[i]` by `images[i]`,
    /// all of which live over `target_vars`.
    pub fn compose<S: AsRef<str>>(&self, target_vars: &[S], images: &[MultiPoly]) -> Result<MultiPoly> {
        let target: Vec<String> = target_vars.iter().map(|s| s.as_ref().to_string()).collect();
        if images.len() != self.vars.len() {
            return Err(Error::InvalidArgument(format!(
                "{} images supplied for {} variables",
                images.len(),
                self.vars.len()
            )));
        }
        for g in images {
            if !g.ctx.is_same(&self.ctx) {
                return Err(Error::MixedFields);
            }
            if g.vars != target {
                return Err(Error::MixedVariables(g.vars.clone(), target.clone()));
            }
        }
        // Cache powers per variable.
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|_| vec![Self::constant_with(&self.ctx, &target, self.ctx.one())])
            .collect();
        let mut out = Self::zero_with(&self.ctx, &target);
        for (e, &c) in &self.terms {
            let mut t = Self::constant_with(&self.ctx, &target, c);
            for (j, &k) in e.iter().enumerate() {
                while powers[j].len() <= k as usize {
                    let next = powers[j].last().unwrap().mul(&images[j])?;
                    powers[j].push(next);
                }
                if k > 0 {
                    t = t.mul(&powers[j][k as usize])?;
                }
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Re-expresses the polynomial over another variable list that contains
    /// every variable actually used.
    pub fn with_vars<S: AsRef<str>>(&self, new_vars: &[S]) -> Result<MultiPoly> {
        let new: Vec<String> = new_vars.iter().map(|s| s.as_ref().to_string()).collect();
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let pos = new.iter().position(|w| w == v);
            if pos.is_none() && self.terms.keys().any(|e| e[i] > 0) {
                return Err(Error::UnknownVariable(v.clone()));
            }
            map.push(pos);
        }
        let mut out = Self::zero_with(&self.ctx, &new);
        for (e, &c) in &self.terms {
            let mut e2 = vec![0; new.len()];
            for (i, &k) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    e2[j] += k;
                }
            }
            out.add_term(e2, c);
        }
        Ok(out)
    }

    /// Coefficient-wise image under a field embedding.
    pub fn lift(&self, emb: &Embedding) -> Result<MultiPoly> {
        if !emb.source().is_same(&self.ctx) {
            return Err(Error::MixedFields);
        }
        Ok(MultiPoly {
            ctx: emb.target().clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), emb.apply(c))).collect(),
        })
    }

    /// Applies `c -> c^r` to every coefficient.
    pub fn map_coeffs(&self, mut g: impl FnMut(FieldElement) -> FieldElement) -> MultiPoly {
        let mut out = Self::zero_with(&self.ctx, &self.vars);
        for (e, &c) in &self.terms {
            out.add_term(e.clone(), g(c));
        }
        out
    }

    fn require_bivariate(&self) -> Result<()> {
        if self.vars.len() == 2 {
            Ok(())
        } else {
            Err(Error::NotBivariate(self.vars.clone()))
        }
    }

    /// Swaps the two variables' exponents.
    pub fn transpose(&self) -> Result<MultiPoly> {
        self.require_bivariate()?;
        Ok(MultiPoly {
            ctx: self.ctx.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, &c)| (vec![e[1], e[0]], c)).collect(),
        })
    }

    /// Whether the coefficient of `u^i v^j` equals that of `u^j v^i` for all
    /// `(i, j)`.
    pub fn is_symmetric(&self) -> Result<bool> {
        self.require_bivariate()?;
        Ok(self.terms.iter().all(|(e, &c)| self.coeff(&[e[1], e[0]]) == c))
    }

    /// Whether every monomial involves at most one variable.
    pub fn is_diagonal(&self) -> Result<bool> {
        self.require_bivariate()?;
        Ok(self.terms.keys().all(|e| e[0] == 0 || e[1] == 0))
    }

    /// Checks the kernel hypotheses: symmetric, non-diagonal and of degree
    /// below the characteristic.
    pub fn validate_kernel(&self) -> Result<SymmetricKernel> {
        self.require_bivariate()?;
        if !self.is_symmetric()? {
            return Err(Error::NotSymmetric);
        }
        let deg = self.total_degree();
        let p = self.ctx.characteristic() as i64;
        if deg >= p {
            return Err(Error::DegreeTooLarge { deg, char: p as u64 });
        }
        if self.is_diagonal()? {
            return Err(Error::Diagonal);
        }
        Ok(SymmetricKernel { f: self.clone(), degree: deg })
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(e, c)| TermRecord { exponents: e.clone(), coefficient: c.index() })
            .collect()
    }

    pub fn from_records(ctx: &Arc<FieldCtx>, vars: &[&str], records: &[TermRecord]) -> Result<Self> {
        let terms = records
            .iter()
            .map(|r| {
                let c = ctx.element(r.coefficient).ok_or_else(|| {
                    Error::InvalidArgument(format!("coefficient index {} outside field", r.coefficient))
                })?;
                Ok((r.exponents.clone(), c))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(ctx, vars, terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_records()).expect("records serialize")
    }

    pub fn from_json(ctx: &Arc<FieldCtx>, vars: &[&str], json: &str) -> Result<Self> {
        let records: Vec<TermRecord> =
            serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_records(ctx, vars, &records)
    }

    /// Parses a polynomial; variables are ordered by first appearance.
    pub fn parse(ctx: &Arc<FieldCtx>, src: &str) -> Result<Self> {
        parse::parse(ctx, src, None)
    }

    /// Parses over a fixed variable list; other identifiers are rejected.
    pub fn parse_with_vars(ctx: &Arc<FieldCtx>, src: &str, vars: &[&str]) -> Result<Self> {
        parse::parse(ctx, src, Some(&owned_vars(vars)))
    }
}

/// A validated kernel `F(u, v)`: symmetric, non-diagonal, `deg F < char`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricKernel {
    f: MultiPoly,
    degree: i64,
}

impl SymmetricKernel {
    /// Parses and validates a kernel written in any two variable names.
    pub fn parse(ctx: &Arc<FieldCtx>, src: &str) -> Result<SymmetricKernel> {
        MultiPoly::parse(ctx, src)?.validate_kernel()
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.f
    }
    pub fn degree(&self) -> i64 {
        self.degree
    }
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.f.ctx()
    }

    #[inline]
    pub fn eval(&self, u: FieldElement, v: FieldElement) -> FieldElement {
        self.f.eval_at(&[u, v])
    }

    /// All values `F(u, v)`, row-major by canonical index of `u`.
    pub fn table(&self) -> KernelTable {
        let ctx = self.ctx();
        let q = ctx.q() as usize;
        let mut values = vec![FieldElement::ZERO; q * q];
        for u in ctx.enumerate() {
            for v in ctx.enumerate() {
                values[u.index() as usize * q + v.index() as usize] = self.eval(u, v);
            }
        }
        KernelTable { q, values }
    }

    /// Re-expresses `F` over two new variable names (same coefficient table).
    pub fn renamed(&self, u: &str, v: &str) -> MultiPoly {
        MultiPoly {
            ctx: self.f.ctx.clone(),
            vars: vec![u.to_string(), v.to_string()],
            terms: self.f.terms.clone(),
        }
    }

    pub fn lift(&self, emb: &Embedding) -> Result<SymmetricKernel> {
        Ok(SymmetricKernel { f: self.f.lift(emb)?, degree: self.degree })
    }
}

/// Dense table of kernel values.
#[derive(Clone, Debug)]
pub struct KernelTable {
    q: usize,
    values: Vec<FieldElement>,
}

impl KernelTable {
    #[inline]
    pub fn get(&self, u: FieldElement, v: FieldElement) -> FieldElement {
        self.values[u.index() as usize * self.q + v.index() as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{extend, make_field};
    use proptest::prelude::*;

    fn parse(ctx: &Arc<FieldCtx>, s: &str) -> MultiPoly {
        MultiPoly::parse(ctx, s).unwrap()
    }

    #[test]
    fn substitution_examples() {
        let f7 = make_field(7, 1).unwrap();
        let f = parse(&f7, "(a+x)^2");
        let g = f.substitute("a", Substitution::Value(f7.zero())).unwrap();
        assert_eq!(g, MultiPoly::parse_with_vars(&f7, "x^2", &["a", "x"]).unwrap());
        assert!(f.mul(&MultiPoly::zero(&f7, &["a", "x"])).unwrap().is_zero());

        let f5 = make_field(5, 1).unwrap();
        let h = parse(&f5, "x^2+y^2");
        let y = MultiPoly::var(&f5, &["x", "y"], "y").unwrap();
        let s = h.substitute("x", Substitution::Poly(&y)).unwrap();
        assert_eq!(s, MultiPoly::parse_with_vars(&f5, "2*y^2", &["x", "y"]).unwrap());
        let f2 = make_field(2, 1).unwrap();
        let h2 = parse(&f2, "x^2+y^2");
        let y2 = MultiPoly::var(&f2, &["x", "y"], "y").unwrap();
        assert!(h2.substitute("x", Substitution::Poly(&y2)).unwrap().is_zero());
    }

    #[test]
    fn evaluation_examples() {
        let f7 = make_field(7, 1).unwrap();
        let f = parse(&f7, "(a+x)^2");
        let v = f.evaluate(&[("a", f7.from_int(1)), ("x", f7.from_int(2))]).unwrap();
        assert_eq!(v, f7.from_int(2));
        assert_eq!(
            f.evaluate(&[("a", f7.one())]).unwrap_err(),
            Error::MissingVariable("x".into())
        );
        let c = MultiPoly::constant(&f7, &[], f7.from_int(3));
        assert_eq!(c.evaluate(&[]).unwrap(), f7.from_int(3));
    }

    #[test]
    fn symmetry_and_diagonality() {
        let f11 = make_field(11, 1).unwrap();
        assert!(parse(&f11, "(u+v)^2").is_symmetric().unwrap());
        assert!(parse(&f11, "u^2*v + u*v^2").is_symmetric().unwrap());
        assert!(!MultiPoly::parse_with_vars(&f11, "u^2*v", &["u", "v"]).unwrap().is_symmetric().unwrap());
        assert!(parse(&f11, "u*v + 3*u + 3*v + 7").is_symmetric().unwrap());
        assert!(parse(&f11, "u^3 + v^3 + 5").is_diagonal().unwrap());
        assert!(!parse(&f11, "(u+v)^2").is_diagonal().unwrap());
        let f2 = make_field(2, 1).unwrap();
        assert!(parse(&f2, "(u+v)^2").is_diagonal().unwrap());
        assert!(matches!(parse(&f11, "u+v+w").is_symmetric(), Err(Error::NotBivariate(_))));
    }

    #[test]
    fn kernel_validation() {
        let f7 = make_field(7, 1).unwrap();
        let k = parse(&f7, "(a+x)^2").validate_kernel().unwrap();
        assert_eq!(k.degree(), 2);
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(
            parse(&f2, "(a+x)^2").validate_kernel().unwrap_err(),
            Error::DegreeTooLarge { deg: 2, char: 2 }
        );
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(
            parse(&f3, "(a+x)^3 + a*x").validate_kernel().unwrap_err(),
            Error::DegreeTooLarge { deg: 3, char: 3 }
        );
        assert_eq!(parse(&f7, "a^3 + x^3").validate_kernel().unwrap_err(), Error::Diagonal);
        assert_eq!(
            MultiPoly::parse_with_vars(&f7, "a^2*x", &["a", "x"]).unwrap().validate_kernel().unwrap_err(),
            Error::NotSymmetric
        );
    }

    #[test]
    fn binomial_kernels_accepted_below_characteristic() {
        for p in [3u64, 5, 7, 11, 13] {
            let ctx = make_field(p, 1).unwrap();
            for k in 2..=p + 1 {
                let res = parse(&ctx, &format!("(a+x)^{k}")).validate_kernel();
                if (k as u64) < p {
                    assert!(res.is_ok(), "(a+x)^{k} rejected over F_{p}");
                } else {
                    assert!(res.is_err(), "(a+x)^{k} accepted over F_{p}");
                }
            }
        }
    }

    #[test]
    fn lift_factors_over_f9() {
        let f3 = make_field(3, 1).unwrap();
        let ext = extend(&f3, 2).unwrap();
        let f = parse(&f3, "x^2+1");
        let lifted = f.lift(&ext.embedding).unwrap();
        assert_eq!(lifted.total_degree(), 2);
        let f9 = &ext.field;
        let roots: Vec<_> = f9.enumerate().filter(|&t| lifted.eval_at(&[t]).is_zero()).collect();
        assert_eq!(roots.len(), 2);
        // x^2 + 1 = (x - t)(x + t)
        let t = roots[0];
        let xt = MultiPoly::from_terms(f9, &["x"], [(vec![1], f9.one()), (vec![0], f9.neg(t))]).unwrap();
        let xpt = MultiPoly::from_terms(f9, &["x"], [(vec![1], f9.one()), (vec![0], t)]).unwrap();
        assert_eq!(xt.mul(&xpt).unwrap(), lifted);
        assert!(MultiPoly::zero(&f3, &["x"]).lift(&ext.embedding).unwrap().is_zero());
        assert_eq!(MultiPoly::zero(&f3, &["x"]).total_degree(), -1);
    }

    #[test]
    fn mixed_fields_rejected() {
        let f3 = make_field(3, 1).unwrap();
        let f5 = make_field(5, 1).unwrap();
        let a = parse(&f3, "x");
        let b = parse(&f5, "x");
        assert_eq!(a.add(&b).unwrap_err(), Error::MixedFields);
    }

    fn arb_poly(ctx: Arc<FieldCtx>) -> impl Strategy<Value = MultiPoly> {
        let q = ctx.q();
        prop::collection::vec(((0u32..5, 0u32..5), 0..q), 0..8).prop_map(move |ts| {
            MultiPoly::from_terms(
                &ctx,
                &["u", "v"],
                ts.into_iter().map(|((i, j), c)| (vec![i, j], ctx.element(c).unwrap())),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn json_round_trip(f in arb_poly(make_field(3, 2).unwrap())) {
            let ctx = f.ctx().clone();
            let back = MultiPoly::from_json(&ctx, &["u", "v"], &f.to_json()).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn display_parse_round_trip(f in arb_poly(make_field(7, 1).unwrap())) {
            let back = MultiPoly::parse_with_vars(f.ctx(), &f.to_string(), &["u", "v"]).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn evaluation_is_a_ring_map(
            f in arb_poly(make_field(5, 2).unwrap()),
            g in arb_poly(make_field(5, 2).unwrap()),
            x in 0u32..25, y in 0u32..25,
        ) {
            let ctx = f.ctx().clone();
            let pt = [ctx.element(x).unwrap(), ctx.element(y).unwrap()];
            prop_assert_eq!(f.add(&g).unwrap().eval_at(&pt), ctx.add(f.eval_at(&pt), g.eval_at(&pt)));
            prop_assert_eq!(f.mul(&g).unwrap().eval_at(&pt), ctx.mul(f.eval_at(&pt), g.eval_at(&pt)));
            // Oracle: substitute each variable, then read the constant.
            let s = f.substitute("u", Substitution::Value(pt[0])).unwrap()
                .substitute("v", Substitution::Value(pt[1])).unwrap();
            prop_assert!(s.is_constant());
            prop_assert_eq!(s.constant_term(), f.eval_at(&pt));
        }

        #[test]
        fn symmetry_is_transpose_invariant(f in arb_poly(make_field(7, 1).unwrap())) {
            let t = f.transpose().unwrap();
            prop_assert_eq!(f.is_symmetric().unwrap(), t == f);
            prop_assert_eq!(t.is_symmetric().unwrap(), f.is_symmetric().unwrap());
            let sym = f.add(&t).unwrap();
            prop_assert!(sym.is_symmetric().unwrap());
        }

        #[test]
        fn lift_preserves_degree(f in arb_poly(make_field(5, 1).unwrap())) {
            let ext = extend(f.ctx(), 2).unwrap();
            prop_assert_eq!(f.lift(&ext.embedding).unwrap().total_degree(), f.total_degree());
        }
    }
}
