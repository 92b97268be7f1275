//! Shifted cotangent bundle models: Schouten bracket, differential,
//! Maurer-Cartan residuals, twisted differentials, and the local Koszul
//! resolution of the critical locus.
//!
//! Bracket convention, frozen here: the pairing on generators is
//! `{theta_i, q_i} = +1` for each declared (odd, even) pair, hence
//! `{q_i, theta_i} = -1`, and the bracket extends as a biderivation of
//! degree -1 with graded antisymmetry
//! `{a,b} = -(-1)^((|a|-1)(|b|-1)) {b,a}`. Concretely, for
//! parity-homogeneous `a`:
//!
//! ```text
//! {a,b} = sum_i  (-1)^(|a|+1) (d_L a / d theta_i)(d_L b / d q_i)
//!                 -           (d_L a / d q_i)(d_L b / d theta_i)
//! ```
//!
//! with signed left derivatives. Every convention-sensitive identity
//! downstream is stated relative to this choice; with it the Hamiltonian
//! differential of `W = t^2/2` sends `theta_t` to `-t`.

use crate::algebra::{Context, Element, GenClass, GenId, Monomial};
use crate::linalg::{homology, Matrix};
use crate::scalar::Scalar;
use crate::Error;
use std::collections::BTreeMap;

/// A finitely generated model of functions on a shifted cotangent bundle:
/// generator table, bracket pairing, and a differential given on generators.
///
/// Construction validates that the differential has degree +1, does not
/// lower weight, squares to zero, and is a derivation of the bracket; models
/// failing any of these are rejected.
#[derive(Clone, Debug)]
pub struct GerstenhaberModel {
    ctx: Context,
    /// `(theta, partner)` with `{theta, partner} = +1`.
    pairs: Vec<(GenId, GenId)>,
    diff: BTreeMap<GenId, Element>,
}

impl GerstenhaberModel {
    pub fn new(
        ctx: Context,
        pairs: Vec<(GenId, GenId)>,
        diff: BTreeMap<GenId, Element>,
    ) -> Result<Self, Error> {
        let mut seen = std::collections::BTreeSet::new();
        for &(th, q) in &pairs {
            if !ctx.generator(th).is_odd() || ctx.generator(q).is_odd() {
                return Err(Error::Model(format!(
                    "pair ({}, {}) must be (odd, even)",
                    ctx.generator(th).name,
                    ctx.generator(q).name
                )));
            }
            if !seen.insert(th) || !seen.insert(q) {
                return Err(Error::Model("generator appears in two pairs".into()));
            }
        }
        for (&g, v) in &diff {
            if v.context() != &ctx {
                return Err(Error::ContextMismatch);
            }
            let gen = ctx.generator(g);
            for (m, _) in v.terms() {
                if m.degree(&ctx) != gen.degree + 1 {
                    return Err(Error::Model(format!(
                        "differential of `{}` is not homogeneous of degree {}",
                        gen.name,
                        gen.degree + 1
                    )));
                }
                if m.weight(&ctx) < gen.weight {
                    return Err(Error::Model(format!(
                        "differential of `{}` lowers the filtration weight",
                        gen.name
                    )));
                }
            }
        }
        let model = GerstenhaberModel { ctx, pairs, diff };
        // D compose D = 0 on generators; a derivation vanishing on
        // generators vanishes everywhere.
        for i in 0..model.ctx.gens().len() {
            let g = Element::generator(&model.ctx, GenId(i as u32));
            let dd = model.d(&model.d(&g)?)?;
            if !dd.is_zero() {
                return Err(Error::Model(format!(
                    "differential does not square to zero on `{}`",
                    model.ctx.gens()[i].name
                )));
            }
        }
        // D must be a derivation of the bracket; on generator pairs the
        // bracket is constant, so {Dg, h} +- {g, Dh} must vanish.
        for i in 0..model.ctx.gens().len() {
            for j in 0..model.ctx.gens().len() {
                let gi = GenId(i as u32);
                let gj = GenId(j as u32);
                let a = Element::generator(&model.ctx, gi);
                let b = Element::generator(&model.ctx, gj);
                let lhs = model.schouten(&model.d(&a)?, &b)?;
                let inner = model.schouten(&a, &model.d(&b)?)?;
                let signed = if model.ctx.generator(gi).is_odd() {
                    inner
                } else {
                    inner.neg()
                };
                let total = lhs.add(&signed)?;
                if !total.is_zero() {
                    return Err(Error::Model(format!(
                        "differential is not a bracket derivation on ({}, {})",
                        model.ctx.gens()[i].name, model.ctx.gens()[j].name
                    )));
                }
            }
        }
        Ok(model)
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn pairs(&self) -> &[(GenId, GenId)] {
        &self.pairs
    }

    /// Index of the pairing that owns this generator (as theta or partner).
    pub fn pair_of(&self, g: GenId) -> Option<usize> {
        self.pairs.iter().position(|&(t, q)| t == g || q == g)
    }

    /// The differential, extended from generators as an odd derivation.
    pub fn d(&self, x: &Element) -> Result<Element, Error> {
        if x.context() != &self.ctx {
            return Err(Error::ContextMismatch);
        }
        let mut acc = Element::zero(&self.ctx).with_cutoff(x.cutoff());
        for (m, c) in x.terms() {
            let factors = &m.0;
            let mut prefix_parity = 0u8;
            for (j, &(g, e)) in factors.iter().enumerate() {
                let id = GenId(g);
                if let Some(dg) = self.diff.get(&id) {
                    if !dg.is_zero() {
                        let gen = &self.ctx.gens()[g as usize];
                        let mut coef = c.clone();
                        if prefix_parity == 1 {
                            coef = coef.neg();
                        }
                        if !gen.is_odd() {
                            coef = &coef * &Scalar::from_int(e as i64);
                        }
                        let mut term = Element::scalar(&self.ctx, coef).with_cutoff(x.cutoff());
                        let prefix = Monomial(factors[..j].to_vec());
                        term = term.mul(&monomial_elem(&self.ctx, prefix))?;
                        term = term.mul(dg)?;
                        if !gen.is_odd() && e > 1 {
                            let ge = Element::generator(&self.ctx, id).pow(e - 1)?;
                            term = term.mul(&ge)?;
                        }
                        let suffix = Monomial(factors[j + 1..].to_vec());
                        term = term.mul(&monomial_elem(&self.ctx, suffix))?;
                        acc = acc.add(&term)?;
                    }
                }
                let gen = &self.ctx.gens()[g as usize];
                if gen.is_odd() && e % 2 == 1 {
                    prefix_parity ^= 1;
                }
            }
        }
        Ok(acc)
    }

    /// The Schouten bracket over all declared pairings.
    pub fn schouten(&self, a: &Element, b: &Element) -> Result<Element, Error> {
        let all: Vec<usize> = (0..self.pairs.len()).collect();
        self.schouten_over(a, b, &all)
    }

    /// The Schouten bracket restricted to a subset of the pairings (used to
    /// bracket over the base while treating fiber directions as inert).
    pub fn schouten_over(
        &self,
        a: &Element,
        b: &Element,
        pair_indices: &[usize],
    ) -> Result<Element, Error> {
        if a.context() != &self.ctx || b.context() != &self.ctx {
            return Err(Error::ContextMismatch);
        }
        let (a_even, a_odd) = a.parity_split();
        let mut acc = Element::zero(&self.ctx)
            .with_cutoff(a.cutoff())
            .with_cutoff(b.cutoff());
        for (part, parity) in [(a_even, 0u8), (a_odd, 1u8)] {
            if part.is_zero() {
                continue;
            }
            for &pi in pair_indices {
                let (theta, q) = self.pairs[pi];
                // (-1)^(|a|+1) (da/dtheta)(db/dq)
                let t1 = part.partial_left(theta).mul(&b.partial_left(q))?;
                let t1 = if parity == 1 { t1 } else { t1.neg() };
                // -(da/dq)(db/dtheta)
                let t2 = part.partial_left(q).mul(&b.partial_left(theta))?.neg();
                acc = acc.add(&t1)?.add(&t2)?;
            }
        }
        Ok(acc)
    }

    /// Maurer-Cartan residual `D(phi) + (1/2){phi, phi}`. The caller asserts
    /// zero to certify `phi`.
    pub fn mc_check(&self, phi: &Element) -> Result<Element, Error> {
        if !phi.is_even() {
            return Err(Error::Input(
                "maurer-cartan check requires an even element".into(),
            ));
        }
        let bracket = self.schouten(phi, phi)?;
        self.d(phi)?.add(&bracket.scale(&Scalar::from_ratio(1, 2)))
    }

    /// Certify an element as Maurer-Cartan (residual zero within its
    /// cutoff); the only way to obtain an [`MCElement`].
    pub fn verify_mc(&self, phi: &Element) -> Result<MCElement, Error> {
        let residual = self.mc_check(phi)?;
        if !residual.is_zero() {
            return Err(Error::NotMaurerCartan(residual.to_string()));
        }
        Ok(MCElement { value: phi.clone() })
    }
}

fn monomial_elem(ctx: &Context, m: Monomial) -> Element {
    let factors: Vec<(GenId, u32)> = m.0.iter().map(|&(g, e)| (GenId(g), e)).collect();
    Element::from_raw_monomial(ctx, Scalar::one(), &factors).0
}

/// An even element whose Maurer-Cartan residual has been verified to vanish
/// within its cutoff.
#[derive(Clone, Debug)]
pub struct MCElement {
    value: Element,
}

impl MCElement {
    pub fn value(&self) -> &Element {
        &self.value
    }
}

/// The twisted differential `x -> D(x) + {Phi, x}` of a verified
/// Maurer-Cartan element; squares to zero within the cutoff.
pub struct TwistedDifferential<'a> {
    model: &'a GerstenhaberModel,
    phi: &'a MCElement,
}

impl GerstenhaberModel {
    pub fn twisted_differential<'a>(&'a self, phi: &'a MCElement) -> TwistedDifferential<'a> {
        TwistedDifferential { model: self, phi }
    }
}

impl TwistedDifferential<'_> {
    pub fn apply(&self, x: &Element) -> Result<Element, Error> {
        let bracket = self.model.schouten(self.phi.value(), x)?;
        self.model.d(x)?.add(&bracket)
    }
}

/// One stratum of a homology table.
#[derive(Clone, Debug, serde::Serialize)]
pub struct HomologyStratum {
    /// Cohomological degree of the stratum.
    pub degree: i64,
    /// Secondary grading (polynomial degree or weight, per computation).
    pub aux: u32,
    pub dim: usize,
    /// Printable representatives of a homology basis.
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct HomologyReport {
    pub strata: Vec<HomologyStratum>,
    pub total_dim: usize,
}

impl HomologyReport {
    pub fn dim_at(&self, degree: i64, aux: u32) -> usize {
        self.strata
            .iter()
            .find(|s| s.degree == degree && s.aux == aux)
            .map(|s| s.dim)
            .unwrap_or(0)
    }
}

/// Matrix of a linear operator with respect to explicit monomial bases.
/// Panics if an image leaves the span of the target basis (that would be a
/// grading bug in the caller).
pub fn operator_matrix(images: &[Element], target: &[Monomial]) -> Matrix {
    let index: BTreeMap<&Monomial, usize> = target.iter().zip(0..).collect();
    let cols = images
        .iter()
        .map(|im| {
            let mut col = vec![Scalar::zero(); target.len()];
            for (m, c) in im.terms() {
                let i = *index
                    .get(m)
                    .unwrap_or_else(|| panic!("image monomial outside target stratum"));
                col[i] = c.clone();
            }
            col
        })
        .collect();
    Matrix::from_columns(target.len(), cols)
}

pub(crate) fn basis_string(ctx: &Context, basis: &[Monomial], coords: &[Scalar]) -> String {
    let mut acc = Element::zero(ctx);
    for (m, c) in basis.iter().zip(coords) {
        if !c.is_zero() {
            let factors: Vec<(GenId, u32)> = m.0.iter().map(|&(g, e)| (GenId(g), e)).collect();
            let (term, _) = Element::from_raw_monomial(ctx, c.clone(), &factors);
            acc = acc.add(&term).expect("same context");
        }
    }
    acc.to_string()
}

/// Cohomology of `(K[t_1..t_m] (x) Lambda[theta_1..theta_m], {W, .})` with
/// `W = (1/2) sum t_i^2`, truncated at polynomial degree `d` (computed with
/// one internal degree of padding so reported strata are exact). The
/// expected picture is a one-dimensional homology spanned by the class of 1:
/// the Koszul resolution of the skyscraper at `t = 0`.
pub fn koszul_critical_resolution(m: usize, d: u32) -> Result<HomologyReport, Error> {
    if m > 3 || d > 6 {
        return Err(Error::Bound(
            "koszul resolution is desk-scale: rank <= 3, degree <= 6".into(),
        ));
    }
    let mut b = crate::algebra::ContextBuilder::new();
    let mut ts = Vec::new();
    let mut ths = Vec::new();
    for i in 1..=m {
        ts.push(b.gen(&format!("t{i}"), 0, 1, GenClass::Fiber));
    }
    for i in 1..=m {
        ths.push(b.gen(&format!("tht{i}"), 1, 1, GenClass::Polyvector));
    }
    let ctx = b.build()?;
    let pairs: Vec<(GenId, GenId)> = ths.iter().copied().zip(ts.iter().copied()).collect();
    let model = GerstenhaberModel::new(ctx.clone(), pairs, BTreeMap::new())?;
    let mut w = Element::zero(&ctx);
    for &t in &ts {
        let te = Element::generator(&ctx, t);
        w = w.add(&te.mul(&te)?.scale(&Scalar::from_ratio(1, 2)))?;
    }

    // Strata indexed by (theta count, polynomial degree); d maps
    // (j, k) -> (j - 1, k + 1).
    let pad = d + 1;
    let all = crate::algebra::enumerate_monomials(&ctx, pad + m as u32)?;
    let mut strata: BTreeMap<(u32, u32), Vec<Monomial>> = BTreeMap::new();
    for mono in all {
        let j = mono.class_count(&ctx, GenClass::Polyvector);
        let k = mono.class_count(&ctx, GenClass::Fiber);
        if k <= pad {
            strata.entry((j, k)).or_default().push(mono);
        }
    }
    let empty: Vec<Monomial> = Vec::new();
    let get = |j: i64, k: i64| -> &Vec<Monomial> {
        if j < 0 || k < 0 {
            return &empty;
        }
        strata.get(&(j as u32, k as u32)).unwrap_or(&empty)
    };
    let diff = |basis: &[Monomial]| -> Result<Vec<Element>, Error> {
        basis
            .iter()
            .map(|mono| model.schouten(&w, &monomial_elem(&ctx, mono.clone())))
            .collect()
    };

    let mut out = Vec::new();
    let mut total = 0;
    for (&(j, k), basis) in &strata {
        if k > d {
            continue;
        }
        let target = get(j as i64 - 1, k as i64 + 1);
        let source = get(j as i64 + 1, k as i64 - 1);
        let d_out = operator_matrix(&diff(basis)?, target);
        let d_in = operator_matrix(&diff(source)?, basis);
        let (dim, reps) = homology(&d_out, &d_in);
        total += dim;
        out.push(HomologyStratum {
            degree: j as i64,
            aux: k,
            dim,
            basis: reps
                .iter()
                .map(|v| basis_string(&ctx, basis, v))
                .collect(),
        });
    }
    Ok(HomologyReport {
        strata: out,
        total_dim: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ContextBuilder;

    pub(crate) fn base_model() -> (GerstenhaberModel, BTreeMap<String, GenId>) {
        // Two base coordinates with forms and polyvectors plus one fiber
        // direction; no differential.
        let mut b = ContextBuilder::new();
        let mut ids = BTreeMap::new();
        for (name, deg, w, class) in [
            ("y1", 0, 0, GenClass::Base),
            ("y2", 0, 0, GenClass::Base),
            ("z1", 1, 1, GenClass::Form),
            ("z2", 1, 1, GenClass::Form),
            ("th1", 1, 1, GenClass::Polyvector),
            ("th2", 1, 1, GenClass::Polyvector),
            ("t", 0, 0, GenClass::Fiber),
            ("tht", 1, 0, GenClass::Polyvector),
        ] {
            let id = if name.starts_with('y') {
                b.gen_capped(name, deg, w, class)
            } else {
                b.gen(name, deg, w, class)
            };
            ids.insert(name.to_string(), id);
        }
        b.degree_cap(12);
        let ctx = b.build().unwrap();
        let pairs = vec![
            (ids["th1"], ids["y1"]),
            (ids["th2"], ids["y2"]),
            (ids["tht"], ids["t"]),
        ];
        (
            GerstenhaberModel::new(ctx, pairs, BTreeMap::new()).unwrap(),
            ids,
        )
    }

    #[test]
    fn pairing_normalization() {
        let (model, ids) = base_model();
        let ctx = model.context().clone();
        let th = Element::generator(&ctx, ids["th1"]);
        let y = Element::generator(&ctx, ids["y1"]);
        assert_eq!(model.schouten(&th, &y).unwrap(), Element::one(&ctx));
        assert_eq!(
            model.schouten(&y, &th).unwrap(),
            Element::one(&ctx).neg()
        );
        // off-diagonal pairs vanish
        let y2 = Element::generator(&ctx, ids["y2"]);
        assert!(model.schouten(&th, &y2).unwrap().is_zero());
    }

    #[test]
    fn hamiltonian_of_quadratic_potential() {
        let (model, ids) = base_model();
        let ctx = model.context().clone();
        let t = Element::generator(&ctx, ids["t"]);
        let tht = Element::generator(&ctx, ids["tht"]);
        let w = t.mul(&t).unwrap().scale(&Scalar::from_ratio(1, 2));
        // {t^2/2, theta_t} = -t under the frozen convention
        assert_eq!(model.schouten(&w, &tht).unwrap(), t.neg());
        // forced by Leibniz from {theta_t, t} = 1
        assert_eq!(model.schouten(&tht, &t).unwrap(), Element::one(&ctx));
    }

    #[test]
    fn schouten_vanishes_for_y_free_entries() {
        // {phi, phi} = 0 for phi = z * g(t) * theta with g independent of y
        let (model, ids) = base_model();
        let ctx = model.context().clone();
        let z = Element::generator(&ctx, ids["z1"]);
        let t = Element::generator(&ctx, ids["t"]);
        let th = Element::generator(&ctx, ids["th1"]);
        let g = Element::one(&ctx)
            .add(&t.mul(&t).unwrap().scale(&Scalar::from_int(3)))
            .unwrap();
        let phi = z.mul(&g).unwrap().mul(&th).unwrap();
        assert!(model.schouten(&phi, &phi).unwrap().is_zero());
    }

    #[test]
    fn mc_check_examples() {
        let (model, ids) = base_model();
        let ctx = model.context().clone();
        // phi = 0
        assert!(model.mc_check(&Element::zero(&ctx)).unwrap().is_zero());
        // phi = a z1 th1 + b z2 th2 with constant coefficients
        let phi = Element::generator(&ctx, ids["z1"])
            .mul(&Element::generator(&ctx, ids["th1"]))
            .unwrap()
            .scale(&Scalar::from_ratio(2, 3))
            .add(
                &Element::generator(&ctx, ids["z2"])
                    .mul(&Element::generator(&ctx, ids["th2"]))
                    .unwrap()
                    .scale(&Scalar::from_int(5)),
            )
            .unwrap();
        assert!(model.mc_check(&phi).unwrap().is_zero());
        assert!(model.verify_mc(&phi).is_ok());
        // negative control: phi = y1 z1 th1 + z2 th2-ish with y-dependence
        // breaking the bracket term
        let bad = Element::generator(&ctx, ids["y1"])
            .mul(&Element::generator(&ctx, ids["z1"]))
            .unwrap()
            .mul(&Element::generator(&ctx, ids["th1"]))
            .unwrap()
            .add(
                &Element::generator(&ctx, ids["z2"])
                    .mul(&Element::generator(&ctx, ids["th1"]))
                    .unwrap(),
            )
            .unwrap();
        let res = model.mc_check(&bad).unwrap();
        assert!(!res.is_zero());
        assert!(model.verify_mc(&bad).is_err());
        // odd input refused
        assert!(model
            .mc_check(&Element::generator(&ctx, ids["z1"]))
            .is_err());
    }

    #[test]
    fn twisted_differential_of_potential() {
        let (model, ids) = base_model();
        let ctx = model.context().clone();
        let t = Element::generator(&ctx, ids["t"]);
        let tht = Element::generator(&ctx, ids["tht"]);
        let w = t.mul(&t).unwrap().scale(&Scalar::from_ratio(1, 2));
        let mc = model.verify_mc(&w).unwrap();
        let dw = model.twisted_differential(&mc);
        assert_eq!(dw.apply(&tht).unwrap(), t.neg());
        // Phi = 0 gives back the bare differential (zero here)
        let zero = model.verify_mc(&Element::zero(&ctx)).unwrap();
        let d0 = model.twisted_differential(&zero);
        assert!(d0.apply(&tht).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_square_zero_differential() {
        let mut b = ContextBuilder::new();
        let a = b.gen("a", 0, 1, GenClass::Param);
        let c = b.gen("c", 1, 1, GenClass::Param);
        let e = b.gen("e", 2, 1, GenClass::Param);
        let ctx = b.build().unwrap();
        let mut diff = BTreeMap::new();
        diff.insert(a, Element::generator(&ctx, c));
        diff.insert(c, Element::generator(&ctx, e));
        assert!(matches!(
            GerstenhaberModel::new(ctx, vec![], diff),
            Err(Error::Model(_))
        ));
    }

    #[test]
    fn koszul_resolution_ranks() {
        // m = 0: ground field
        let r0 = koszul_critical_resolution(0, 2).unwrap();
        assert_eq!(r0.total_dim, 1);
        // m = 1, d = 4: spanned by the class of 1
        let r1 = koszul_critical_resolution(1, 4).unwrap();
        assert_eq!(r1.total_dim, 1);
        assert_eq!(r1.dim_at(0, 0), 1);
        assert_eq!(r1.strata.iter().map(|s| s.dim).sum::<usize>(), 1);
        // m = 2, d = 4: still one-dimensional
        let r2 = koszul_critical_resolution(2, 4).unwrap();
        assert_eq!(r2.total_dim, 1);
        assert_eq!(r2.dim_at(0, 0), 1);
        assert!(koszul_critical_resolution(4, 2).is_err());
    }
}
