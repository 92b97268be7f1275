//! Free graded-commutative algebra with exact Q(i) coefficients.
//!
//! Generators carry a cohomological degree (whose parity drives the Koszul
//! sign rule), a non-negative filtration weight, and a role class. Monomials
//! are kept in a fixed canonical order (strictly increasing generator index);
//! reordering odd generators during canonicalization contributes one sign per
//! transposition, and odd squares vanish.
//!
//! Sign convention, frozen here once for the whole crate: the Koszul rule is
//! applied by counting transpositions of odd generators while sorting a
//! product into canonical order. Elements optionally carry a weight cutoff;
//! every operation discards monomials above the cutoff (and above the
//! context's polynomial-degree cap for capped generators), so truncated
//! arithmetic is arithmetic in the quotient by the span of discarded
//! monomials.

use crate::scalar::Scalar;
use crate::Error;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Role of a generator inside a model. `Form` generators are the ones counted
/// by the form-degree truncation (Dolbeault (0,1) directions and the
/// universal deformation coefficients).
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenClass {
    /// Even base coordinate (y-type), polynomial with an optional degree cap.
    Base,
    /// Even fiber coordinate (t-type), eliminated by the critical-point solve.
    Fiber,
    /// Odd form direction or universal deformation coefficient.
    Form,
    /// Odd polyvector direction (theta-type).
    Polyvector,
    /// Auxiliary parameter (xi, nu, eps_i, ...).
    Param,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub weight: u32,
    pub class: GenClass,
    /// Counted against the context's polynomial-degree cap.
    pub capped: bool,
}

impl Generator {
    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// Index of a generator within its context.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GenId(pub u32);

#[derive(PartialEq, Eq, Debug)]
pub struct ContextData {
    gens: Vec<Generator>,
    by_name: BTreeMap<String, u32>,
    /// Maximum total exponent of `capped` generators in any stored monomial.
    pub degree_cap: Option<u32>,
}

/// Shared, immutable generator table. Cheap to clone; elements compare
/// contexts structurally, so independently loaded copies of the same table
/// are compatible.
#[derive(Clone, Debug)]
pub struct Context(Arc<ContextData>);

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for Context {}

pub struct ContextBuilder {
    gens: Vec<Generator>,
    degree_cap: Option<u32>,
}

impl ContextBuilder {
    pub fn new() -> Self {
        ContextBuilder {
            gens: Vec::new(),
            degree_cap: None,
        }
    }

    /// Add a generator; returns its id. Names must be unique.
    pub fn gen(&mut self, name: &str, degree: i64, weight: u32, class: GenClass) -> GenId {
        self.gens.push(Generator {
            name: name.to_string(),
            degree,
            weight,
            class,
            capped: false,
        });
        GenId(self.gens.len() as u32 - 1)
    }

    /// Like `gen`, but counted against the polynomial-degree cap.
    pub fn gen_capped(&mut self, name: &str, degree: i64, weight: u32, class: GenClass) -> GenId {
        let id = self.gen(name, degree, weight, class);
        self.gens[id.0 as usize].capped = true;
        id
    }

    pub fn degree_cap(&mut self, cap: u32) -> &mut Self {
        self.degree_cap = Some(cap);
        self
    }

    pub fn build(self) -> Result<Context, Error> {
        let mut by_name = BTreeMap::new();
        for (i, g) in self.gens.iter().enumerate() {
            if by_name.insert(g.name.clone(), i as u32).is_some() {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(Context(Arc::new(ContextData {
            gens: self.gens,
            by_name,
            degree_cap: self.degree_cap,
        })))
    }
}

impl Default for ContextBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl Context {
    pub fn gens(&self) -> &[Generator] {
        &self.0.gens
    }

    pub fn generator(&self, id: GenId) -> &Generator {
        &self.0.gens[id.0 as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<GenId> {
        self.0.by_name.get(name).copied().map(GenId)
    }

    pub fn degree_cap(&self) -> Option<u32> {
        self.0.degree_cap
    }

    /// Extend with additional generators; existing `GenId`s stay valid and
    /// elements of `self` embed into the result via `Element::into_context`.
    pub fn extend(&self, extra: Vec<Generator>, degree_cap: Option<u32>) -> Result<Context, Error> {
        let mut gens = self.0.gens.clone();
        gens.extend(extra);
        let mut by_name = BTreeMap::new();
        for (i, g) in gens.iter().enumerate() {
            if by_name.insert(g.name.clone(), i as u32).is_some() {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(Context(Arc::new(ContextData {
            gens,
            by_name,
            degree_cap: degree_cap.or(self.0.degree_cap),
        })))
    }

    fn is_prefix_of(&self, other: &Context) -> bool {
        let a = &self.0.gens;
        let b = &other.0.gens;
        a.len() <= b.len() && a[..] == b[..a.len()]
    }
}

/// Exponent vector in canonical order: strictly increasing generator index,
/// odd generators with exponent exactly 1, all exponents positive.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(pub Vec<(u32, u32)>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self, ctx: &Context) -> u32 {
        self.0
            .iter()
            .map(|&(g, e)| ctx.gens()[g as usize].weight * e)
            .sum()
    }

    pub fn degree(&self, ctx: &Context) -> i64 {
        self.0
            .iter()
            .map(|&(g, e)| ctx.gens()[g as usize].degree * e as i64)
            .sum()
    }

    /// 0 for even, 1 for odd.
    pub fn parity(&self, ctx: &Context) -> u8 {
        (self.degree(ctx).rem_euclid(2)) as u8
    }

    pub fn exponent_of(&self, id: GenId) -> u32 {
        self.0
            .iter()
            .find(|&&(g, _)| g == id.0)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    /// Total exponent over generators of the given class.
    pub fn class_count(&self, ctx: &Context, class: GenClass) -> u32 {
        self.0
            .iter()
            .filter(|&&(g, _)| ctx.gens()[g as usize].class == class)
            .map(|&(_, e)| e)
            .sum()
    }

    fn capped_degree(&self, ctx: &Context) -> u32 {
        self.0
            .iter()
            .filter(|&&(g, _)| ctx.gens()[g as usize].capped)
            .map(|&(_, e)| e)
            .sum()
    }

    fn odd_indices(&self, ctx: &Context) -> Vec<u32> {
        self.0
            .iter()
            .filter(|&&(g, _)| ctx.gens()[g as usize].is_odd())
            .map(|&(g, _)| g)
            .collect()
    }

    /// Graded-commutative product of two canonical monomials. `None` when an
    /// odd generator would square to zero; otherwise the merged monomial and
    /// the Koszul sign (+1/-1) from sorting the concatenation.
    pub fn mul(&self, other: &Monomial, ctx: &Context) -> Option<(Monomial, i32)> {
        let o1 = self.odd_indices(ctx);
        let o2 = other.odd_indices(ctx);
        // Sign: each odd factor of `other` transposes past every odd factor
        // of `self` with a strictly larger index. Shared odd factors kill
        // the product.
        let mut sign_exp: u64 = 0;
        {
            let mut i = 0;
            for &b in &o2 {
                while i < o1.len() && o1[i] <= b {
                    if o1[i] == b {
                        return None;
                    }
                    i += 1;
                }
                sign_exp += (o1.len() - i) as u64;
            }
        }
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let take_left = match (self.0.get(i), other.0.get(j)) {
                (Some(&(g1, _)), Some(&(g2, _))) => {
                    if g1 == g2 {
                        let e = self.0[i].1 + other.0[j].1;
                        merged.push((g1, e));
                        i += 1;
                        j += 1;
                        continue;
                    }
                    g1 < g2
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            if take_left {
                merged.push(self.0[i]);
                i += 1;
            } else {
                merged.push(other.0[j]);
                j += 1;
            }
        }
        let sign = if sign_exp % 2 == 0 { 1 } else { -1 };
        Some((Monomial(merged), sign))
    }

    /// Signed left partial derivative data: `(cofactor, rational_factor, sign)`
    /// or `None` when the generator is absent.
    fn partial_left(&self, id: GenId, ctx: &Context) -> Option<(Monomial, u32, i32)> {
        let pos = self.0.iter().position(|&(g, _)| g == id.0)?;
        let gen = &ctx.gens()[id.0 as usize];
        let mut factors = self.0.clone();
        if gen.is_odd() {
            // Move the odd factor to the front: one sign per odd factor
            // standing before it.
            let before_odd = self.0[..pos]
                .iter()
                .filter(|&&(g, _)| ctx.gens()[g as usize].is_odd())
                .count();
            factors.remove(pos);
            let sign = if before_odd % 2 == 0 { 1 } else { -1 };
            Some((Monomial(factors), 1, sign))
        } else {
            let e = factors[pos].1;
            if e == 1 {
                factors.remove(pos);
            } else {
                factors[pos].1 = e - 1;
            }
            Some((Monomial(factors), e, 1))
        }
    }

    /// Factor an odd generator out to the right: `m = cofactor * gen` with
    /// the sign from commuting `gen` past the odd factors after it.
    fn extract_right(&self, id: GenId, ctx: &Context) -> Option<(Monomial, i32)> {
        let pos = self.0.iter().position(|&(g, _)| g == id.0)?;
        debug_assert!(ctx.gens()[id.0 as usize].is_odd());
        let after_odd = self.0[pos + 1..]
            .iter()
            .filter(|&&(g, _)| ctx.gens()[g as usize].is_odd())
            .count();
        let mut factors = self.0.clone();
        factors.remove(pos);
        let sign = if after_odd % 2 == 0 { 1 } else { -1 };
        Some((Monomial(factors), sign))
    }

    pub fn display(&self, ctx: &Context) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&(g, e)| {
                let name = &ctx.gens()[g as usize].name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Finite Q(i)-combination of canonical monomials, with optional weight
/// cutoff. Zero coefficients are never stored; every stored monomial
/// respects the cutoff and the context's degree cap.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Element {
    ctx: Context,
    terms: BTreeMap<Monomial, Scalar>,
    cutoff: Option<u32>,
}

fn min_cutoff(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl Element {
    pub fn zero(ctx: &Context) -> Self {
        Element {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
            cutoff: None,
        }
    }

    pub fn scalar(ctx: &Context, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(), c);
        }
        Element {
            ctx: ctx.clone(),
            terms,
            cutoff: None,
        }
    }

    pub fn one(ctx: &Context) -> Self {
        Self::scalar(ctx, Scalar::one())
    }

    pub fn from_int(ctx: &Context, n: i64) -> Self {
        Self::scalar(ctx, Scalar::from_int(n))
    }

    pub fn from_ratio(ctx: &Context, num: i64, den: i64) -> Self {
        Self::scalar(ctx, Scalar::from_ratio(num, den))
    }

    pub fn generator(ctx: &Context, id: GenId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![(id.0, 1)]), Scalar::one());
        Element {
            ctx: ctx.clone(),
            terms,
            cutoff: None,
        }
        .normalized()
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn cutoff(&self) -> Option<u32> {
        self.cutoff
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient_of(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Coefficient of the monomial described by `(name, exp)` pairs.
    pub fn coefficient_of_named(&self, factors: &[(&str, u32)]) -> Result<Scalar, Error> {
        let mut v = Vec::new();
        for &(name, e) in factors {
            let id = self
                .ctx
                .lookup(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            v.push((id.0, e));
        }
        v.sort();
        Ok(self.coefficient_of(&Monomial(v)))
    }

    fn drop_over_bounds(&mut self) {
        let ctx = self.ctx.clone();
        let cutoff = self.cutoff;
        let cap = ctx.degree_cap();
        self.terms.retain(|m, c| {
            if c.is_zero() {
                return false;
            }
            if let Some(w) = cutoff {
                if m.weight(&ctx) > w {
                    return false;
                }
            }
            if let Some(cap) = cap {
                if m.capped_degree(&ctx) > cap {
                    return false;
                }
            }
            true
        });
    }

    fn normalized(mut self) -> Self {
        self.drop_over_bounds();
        self
    }

    pub fn with_cutoff(mut self, w: Option<u32>) -> Self {
        self.cutoff = min_cutoff(self.cutoff, w);
        self.drop_over_bounds();
        self
    }

    /// Remove all monomials of weight above `w`; the result carries cutoff
    /// `w` (never looser than the input's own cutoff).
    pub fn truncate(&self, w: u32) -> Self {
        self.clone().with_cutoff(Some(w))
    }

    fn check_ctx(&self, other: &Element) -> Result<(), Error> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element, Error> {
        self.check_ctx(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Scalar::zero);
            *entry += c;
        }
        Ok(Element {
            ctx: self.ctx.clone(),
            terms,
            cutoff: min_cutoff(self.cutoff, other.cutoff),
        }
        .normalized())
    }

    pub fn sub(&self, other: &Element) -> Result<Element, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Element {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.clone().neg()))
            .collect();
        Element {
            ctx: self.ctx.clone(),
            terms,
            cutoff: self.cutoff,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element {
                ctx: self.ctx.clone(),
                terms: BTreeMap::new(),
                cutoff: self.cutoff,
            };
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, x)| (m.clone(), x * c))
            .collect();
        Element {
            ctx: self.ctx.clone(),
            terms,
            cutoff: self.cutoff,
        }
    }

    /// Graded-commutative product. Result cutoff is the min of the operands'.
    pub fn mul(&self, other: &Element) -> Result<Element, Error> {
        self.check_ctx(other)?;
        let cutoff = min_cutoff(self.cutoff, other.cutoff);
        let cap = self.ctx.degree_cap();
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, sign)) = m1.mul(m2, &self.ctx) {
                    if let Some(w) = cutoff {
                        if m.weight(&self.ctx) > w {
                            continue;
                        }
                    }
                    if let Some(cap) = cap {
                        if m.capped_degree(&self.ctx) > cap {
                            continue;
                        }
                    }
                    let mut c = c1 * c2;
                    if sign < 0 {
                        c = c.neg();
                    }
                    let entry = terms.entry(m).or_insert_with(Scalar::zero);
                    *entry += &c;
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Element {
            ctx: self.ctx.clone(),
            terms,
            cutoff,
        })
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, e: u32) -> Result<Element, Error> {
        let mut acc = Element::one(&self.ctx).with_cutoff(self.cutoff);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Homomorphic evaluation: each assigned generator is replaced by its
    /// value, unassigned generators map to themselves. Values must be
    /// parity-homogeneous of the generator's parity. When no cutoff is in
    /// force, assigning a value whose minimal weight is below the
    /// generator's weight is rejected (the filtration could otherwise
    /// decrease indefinitely under iteration).
    pub fn substitute(&self, assignments: &BTreeMap<GenId, Element>) -> Result<Element, Error> {
        let mut cutoff = self.cutoff;
        for (&id, v) in assignments {
            if v.ctx != self.ctx {
                return Err(Error::ContextMismatch);
            }
            let gen = &self.ctx.gens()[id.0 as usize];
            let want = if gen.is_odd() { 1 } else { 0 };
            for (m, _) in v.terms() {
                if m.parity(&self.ctx) != want {
                    return Err(Error::ParityMismatch(gen.name.clone()));
                }
            }
            cutoff = min_cutoff(cutoff, v.cutoff);
        }
        if cutoff.is_none() {
            for (&id, v) in assignments {
                let gw = self.ctx.gens()[id.0 as usize].weight;
                let vmin = v.min_weight();
                if let Some(vmin) = vmin {
                    if vmin < gw {
                        return Err(Error::Divergence(
                            self.ctx.gens()[id.0 as usize].name.clone(),
                        ));
                    }
                }
            }
        }
        let mut acc = Element::zero(&self.ctx).with_cutoff(cutoff);
        for (m, c) in &self.terms {
            let mut term = Element::scalar(&self.ctx, c.clone()).with_cutoff(cutoff);
            for &(g, e) in &m.0 {
                let id = GenId(g);
                let factor = match assignments.get(&id) {
                    Some(v) => v.clone(),
                    None => Element::generator(&self.ctx, id),
                };
                for _ in 0..e {
                    term = term.mul(&factor)?;
                    if term.is_zero() {
                        break;
                    }
                }
                if term.is_zero() {
                    break;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Signed left partial derivative with respect to one generator.
    /// Odd case: `d/dg (u g v) = (-1)^{|u|} u v`; even case: the usual
    /// polynomial derivative.
    pub fn partial_left(&self, id: GenId) -> Element {
        let mut terms: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some((cof, factor, sign)) = m.partial_left(id, &self.ctx) {
                let mut coef = c * &Scalar::from_int(factor as i64);
                if sign < 0 {
                    coef = coef.neg();
                }
                let entry = terms.entry(cof).or_insert_with(Scalar::zero);
                *entry += &coef;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Element {
            ctx: self.ctx.clone(),
            terms,
            cutoff: self.cutoff,
        }
    }

    /// Split `e = a + b*g` for an odd generator `g` (g-free part and the
    /// right cofactor of `g`). Presentation convention: the cofactor stands
    /// to the left of `g`.
    pub fn split_right(&self, id: GenId) -> (Element, Element) {
        let mut free: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        let mut cof: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in &self.terms {
            match m.extract_right(id, &self.ctx) {
                Some((rest, sign)) => {
                    let coef = if sign < 0 { c.clone().neg() } else { c.clone() };
                    cof.insert(rest, coef);
                }
                None => {
                    free.insert(m.clone(), c.clone());
                }
            }
        }
        (
            Element {
                ctx: self.ctx.clone(),
                terms: free,
                cutoff: self.cutoff,
            },
            Element {
                ctx: self.ctx.clone(),
                terms: cof,
                cutoff: self.cutoff,
            },
        )
    }

    /// Minimal weight of any stored monomial.
    pub fn min_weight(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.weight(&self.ctx)).min()
    }

    /// `Some(0|1)` when all monomials share one parity (zero counts as both;
    /// reported as even).
    pub fn homogeneous_parity(&self) -> Option<u8> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m.parity(&self.ctx),
            None => return Some(0),
        };
        for m in it {
            if m.parity(&self.ctx) != first {
                return None;
            }
        }
        Some(first)
    }

    pub fn is_even(&self) -> bool {
        self.homogeneous_parity() == Some(0)
    }

    /// Parity-homogeneous components `(even, odd)`.
    pub fn parity_split(&self) -> (Element, Element) {
        let mut even: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        let mut odd: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.parity(&self.ctx) == 0 {
                even.insert(m.clone(), c.clone());
            } else {
                odd.insert(m.clone(), c.clone());
            }
        }
        (
            Element {
                ctx: self.ctx.clone(),
                terms: even,
                cutoff: self.cutoff,
            },
            Element {
                ctx: self.ctx.clone(),
                terms: odd,
                cutoff: self.cutoff,
            },
        )
    }

    /// Keep only monomials selected by the predicate.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Element {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| keep(m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Element {
            ctx: self.ctx.clone(),
            terms,
            cutoff: self.cutoff,
        }
    }

    /// Re-home into a context of which `self.ctx` is a prefix.
    pub fn into_context(&self, bigger: &Context) -> Result<Element, Error> {
        if !self.ctx.is_prefix_of(bigger) {
            return Err(Error::ContextMismatch);
        }
        Ok(Element {
            ctx: bigger.clone(),
            terms: self.terms.clone(),
            cutoff: self.cutoff,
        }
        .normalized())
    }

    /// Build from one explicitly listed monomial, canonicalizing order and
    /// signs. The boolean reports a square-zero collapse of an odd generator.
    pub fn from_raw_monomial(
        ctx: &Context,
        coeff: Scalar,
        factors: &[(GenId, u32)],
    ) -> (Element, bool) {
        let mut acc = Element::scalar(ctx, coeff.clone());
        for &(id, e) in factors {
            let g = Element::generator(ctx, id);
            for _ in 0..e {
                acc = acc.mul(&g).expect("same context");
            }
        }
        let collapsed = !coeff.is_zero() && acc.is_zero();
        (acc, collapsed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: Vec<serde_json::Value> = m
                    .0
                    .iter()
                    .map(|&(g, e)| {
                        serde_json::json!([self.ctx.gens()[g as usize].name.clone(), e])
                    })
                    .collect();
                serde_json::json!({ "coeff": c.to_json(), "mono": mono })
            })
            .collect();
        match self.cutoff {
            Some(w) => serde_json::json!({ "terms": terms, "cutoff": w }),
            None => serde_json::json!({ "terms": terms }),
        }
    }

    pub fn from_json(ctx: &Context, v: &serde_json::Value) -> Result<Element, Error> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Input("element: expected object".into()))?;
        let cutoff = match obj.get("cutoff") {
            Some(serde_json::Value::Number(n)) => Some(
                n.as_u64()
                    .ok_or_else(|| Error::Input("element: bad cutoff".into()))?
                    as u32,
            ),
            Some(serde_json::Value::Null) | None => None,
            _ => return Err(Error::Input("element: bad cutoff".into())),
        };
        let terms = obj
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| Error::Input("element: missing terms".into()))?;
        let mut acc = Element::zero(ctx).with_cutoff(cutoff);
        for t in terms {
            let coeff = t
                .get("coeff")
                .and_then(Scalar::from_json)
                .ok_or_else(|| Error::Input("element: bad coeff".into()))?;
            let mono = t
                .get("mono")
                .and_then(|m| m.as_array())
                .ok_or_else(|| Error::Input("element: bad mono".into()))?;
            let mut factors = Vec::new();
            for f in mono {
                let pair = f
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::Input("element: bad factor".into()))?;
                let name = pair[0]
                    .as_str()
                    .ok_or_else(|| Error::Input("element: bad factor name".into()))?;
                let e = pair[1]
                    .as_u64()
                    .ok_or_else(|| Error::Input("element: bad exponent".into()))?
                    as u32;
                let id = ctx
                    .lookup(name)
                    .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
                factors.push((id, e));
            }
            let (term, _) = Element::from_raw_monomial(ctx, coeff, &factors);
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let (lead, coef) = if !first && c.is_real() && c.re < num::BigRational::from_integer(0.into()) {
                (" - ", c.clone().neg())
            } else if first {
                ("", c.clone())
            } else {
                (" + ", c.clone())
            };
            write!(f, "{lead}")?;
            if m.is_unit() {
                write!(f, "{coef}")?;
            } else if coef.is_one() {
                write!(f, "{}", m.display(&self.ctx))?;
            } else if coef.is_real() && (coef.clone().neg()).is_one() {
                write!(f, "-{}", m.display(&self.ctx))?;
            } else {
                write!(f, "{}*{}", coef, m.display(&self.ctx))?;
            }
            first = false;
        }
        Ok(())
    }
}

/// All canonical monomials of weight at most `w` (respecting the degree
/// cap). Errors when the count is not finite, i.e. some even generator has
/// weight zero and no cap applies to it.
pub fn enumerate_monomials(ctx: &Context, w: u32) -> Result<Vec<Monomial>, Error> {
    for g in ctx.gens() {
        if !g.is_odd() && g.weight == 0 && !(g.capped && ctx.degree_cap().is_some()) {
            return Err(Error::Bound(format!(
                "cannot enumerate: even generator `{}` has weight 0 and no degree cap",
                g.name
            )));
        }
    }
    let mut out = Vec::new();
    let mut cur: Vec<(u32, u32)> = Vec::new();
    fn rec(
        ctx: &Context,
        idx: usize,
        w_left: u32,
        cap_left: Option<u32>,
        cur: &mut Vec<(u32, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if idx == ctx.gens().len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        let g = &ctx.gens()[idx];
        let max_e_weight = if g.weight == 0 {
            u32::MAX
        } else {
            w_left / g.weight
        };
        let max_e_cap = if g.capped {
            cap_left.unwrap_or(u32::MAX)
        } else {
            u32::MAX
        };
        let max_e_parity = if g.is_odd() { 1 } else { u32::MAX };
        let max_e = max_e_weight.min(max_e_cap).min(max_e_parity);
        for e in 0..=max_e {
            if e > 0 {
                cur.push((idx as u32, e));
            }
            let new_cap = if g.capped {
                cap_left.map(|c| c - e)
            } else {
                cap_left
            };
            rec(ctx, idx + 1, w_left - e * g.weight, new_cap, cur, out);
            if e > 0 {
                cur.pop();
            }
            if e == max_e {
                break;
            }
        }
    }
    rec(ctx, 0, w, ctx.degree_cap(), &mut cur, &mut out);
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> (Context, GenId, GenId, GenId, GenId) {
        let mut b = ContextBuilder::new();
        let z1 = b.gen("z1", 1, 1, GenClass::Form);
        let z2 = b.gen("z2", 1, 1, GenClass::Form);
        let p1 = b.gen("phi1", 2, 2, GenClass::Form);
        let p2 = b.gen("phi2", 2, 2, GenClass::Form);
        (b.build().unwrap(), z1, z2, p1, p2)
    }

    #[test]
    fn odd_square_vanishes() {
        let (ctx, z1, _, _, _) = toy();
        let z = Element::generator(&ctx, z1);
        assert!(z.mul(&z).unwrap().is_zero());
    }

    #[test]
    fn odd_odd_anticommute() {
        let (ctx, z1, z2, _, _) = toy();
        let a = Element::generator(&ctx, z1);
        let b = Element::generator(&ctx, z2);
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        assert_eq!(ab.neg(), ba);
        assert!(!ab.is_zero());
    }

    #[test]
    fn even_commute() {
        let (ctx, _, _, p1, p2) = toy();
        let a = Element::generator(&ctx, p1);
        let b = Element::generator(&ctx, p2);
        let s = a.add(&b).unwrap();
        let prod = s.mul(&a).unwrap();
        // (phi1 + phi2) * phi1 = phi1^2 + phi1*phi2
        let expect = a
            .mul(&a)
            .unwrap()
            .add(&a.mul(&b).unwrap())
            .unwrap();
        assert_eq!(prod, expect);
        assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn truncate_by_weight() {
        let (ctx, _, _, p1, p2) = toy();
        let a = Element::generator(&ctx, p1);
        let ab = a.mul(&Element::generator(&ctx, p2)).unwrap();
        let x = a.add(&ab).unwrap();
        let t = x.truncate(2);
        assert_eq!(t, a.truncate(2));
        // identity case
        assert_eq!(x.truncate(10).terms.len(), 2);
    }

    #[test]
    fn substitute_sign_and_parity() {
        let mut b = ContextBuilder::new();
        let t = b.gen("t", 0, 1, GenClass::Fiber);
        let p1 = b.gen("phi1", 2, 2, GenClass::Form);
        let p2 = b.gen("phi2", 2, 2, GenClass::Form);
        let ctx = b.build().unwrap();
        let te = Element::generator(&ctx, t);
        let p1e = Element::generator(&ctx, p1);
        let p2e = Element::generator(&ctx, p2);
        // substitute(t^2, t -> -phi1) = phi1^2
        let t2 = te.mul(&te).unwrap();
        let mut map = BTreeMap::new();
        map.insert(t, p1e.neg());
        assert_eq!(
            t2.substitute(&map).unwrap(),
            p1e.mul(&p1e).unwrap()
        );
        // substitute(phi1*t, t -> -phi1 + 2 phi1 phi2) = -phi1^2 + 2 phi1^2 phi2
        let val = p1e
            .neg()
            .add(&p1e.mul(&p2e).unwrap().scale(&Scalar::from_int(2)))
            .unwrap();
        let mut map = BTreeMap::new();
        map.insert(t, val);
        let got = p1e.mul(&te).unwrap().substitute(&map).unwrap();
        let expect = p1e
            .mul(&p1e)
            .unwrap()
            .neg()
            .add(
                &p1e.mul(&p1e)
                    .unwrap()
                    .mul(&p2e)
                    .unwrap()
                    .scale(&Scalar::from_int(2)),
            )
            .unwrap();
        assert_eq!(got, expect);
        // parity mismatch is refused
        let mut b2 = ContextBuilder::new();
        let z = b2.gen("z", 1, 1, GenClass::Form);
        let y = b2.gen("y", 0, 1, GenClass::Base);
        let ctx2 = b2.build().unwrap();
        let mut bad = BTreeMap::new();
        bad.insert(y, Element::generator(&ctx2, z));
        let ye = Element::generator(&ctx2, y);
        assert!(matches!(
            ye.substitute(&bad),
            Err(Error::ParityMismatch(_))
        ));
    }

    #[test]
    fn divergence_guard() {
        let mut b = ContextBuilder::new();
        let p = b.gen("p", 0, 2, GenClass::Param);
        let q = b.gen("q", 0, 0, GenClass::Param);
        let ctx = b.build().unwrap();
        let pe = Element::generator(&ctx, p);
        let mut map = BTreeMap::new();
        map.insert(p, Element::generator(&ctx, q));
        // weight can drop 2 -> 0 with no cutoff: refused
        assert!(matches!(pe.substitute(&map), Err(Error::Divergence(_))));
        // with a cutoff it is fine
        let pe_cut = pe.truncate(4);
        let mut map = BTreeMap::new();
        map.insert(p, Element::generator(&ctx, q));
        assert!(pe_cut.substitute(&map).is_ok());
    }

    #[test]
    fn partial_left_signs() {
        let (ctx, z1, z2, _, _) = toy();
        let a = Element::generator(&ctx, z1);
        let b = Element::generator(&ctx, z2);
        let ab = a.mul(&b).unwrap();
        // d/dz1 (z1 z2) = z2 ; d/dz2 (z1 z2) = -z1
        assert_eq!(ab.partial_left(z1), b);
        assert_eq!(ab.partial_left(z2), a.neg());
    }

    #[test]
    fn enumerate_small() {
        let mut b = ContextBuilder::new();
        b.gen("z", 1, 1, GenClass::Form);
        b.gen("p", 2, 2, GenClass::Form);
        let ctx = b.build().unwrap();
        let ms = enumerate_monomials(&ctx, 3).unwrap();
        // 1, z, p, z*p
        assert_eq!(ms.len(), 4);
    }
}
