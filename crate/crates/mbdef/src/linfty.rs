//! L-infinity structure fields, the critical-value morphism `chi`, and the
//! small Hochschild / skyscraper computations.
//!
//! The two controlling structures are square-zero degree-one vector fields:
//! on the fiber side the field value at an even point `eta` is
//! `D(eta) + {W, eta} + (1/2){eta, eta}` (the Maurer-Cartan residual of
//! `W + eta` relative to the base point `W`), on the base side it is
//! `D(x) + (1/2){x, x}`. The morphism `chi` sends `eta = phi(t) + psi(t)
//! theta_t` to the critical value of `W + phi`; its differential evaluates
//! variations at the critical point and annihilates every pure-`psi`
//! variation.

use crate::algebra::{
    enumerate_monomials, Context, ContextBuilder, Element, GenClass, GenId, Monomial,
};
use crate::critical::{solve_critical, DeformationPath};
use crate::gerstenhaber::{
    basis_string, operator_matrix, GerstenhaberModel, HomologyReport, HomologyStratum,
};
use crate::linalg::{homology, Matrix};
use crate::scalar::Scalar;
use crate::Error;
use std::collections::BTreeMap;

/// A degree-one formal vector field given by its Taylor components: an
/// optional linear Hamiltonian shift `{W, .}` on top of the model
/// differential, and the quadratic Schouten component `(1/2){x, x}`.
/// Everything in scope is captured by these two plus the special n-ary
/// bracket of [`TruncatedA1`].
#[derive(Clone, Debug)]
pub struct LinftyStructure {
    model: GerstenhaberModel,
    potential: Option<Element>,
    quadratic: bool,
}

impl LinftyStructure {
    /// The base-side structure: `B(x) = D(x) + (1/2){x, x}`.
    pub fn schouten_type(model: GerstenhaberModel) -> Self {
        LinftyStructure {
            model,
            potential: None,
            quadratic: true,
        }
    }

    /// The fiber-side structure translated at the quadratic potential:
    /// `B(x) = D(x) + {W, x} + (1/2){x, x}`.
    pub fn with_potential(model: GerstenhaberModel, w: Element) -> Self {
        LinftyStructure {
            model,
            potential: Some(w),
            quadratic: true,
        }
    }

    pub fn model(&self) -> &GerstenhaberModel {
        &self.model
    }

    /// Value of the structure field at an even point valued in a nilpotent
    /// extension. `B(0) = 0` by construction.
    pub fn field_value(&self, point: &Element) -> Result<Element, Error> {
        if !point.is_even() {
            return Err(Error::Input("structure field takes even points".into()));
        }
        if point.cutoff().is_none() && point.min_weight() == Some(0) {
            return Err(Error::Input(
                "structure field point must be nilpotent or carry a cutoff".into(),
            ));
        }
        let mut acc = self.model.d(point)?;
        if let Some(w) = &self.potential {
            acc = acc.add(&self.model.schouten(w, point)?)?;
        }
        if self.quadratic {
            let br = self.model.schouten(point, point)?;
            acc = acc.add(&br.scale(&Scalar::from_ratio(1, 2)))?;
        }
        Ok(acc)
    }
}

/// The single-fiber setting for `chi`: a Gerstenhaber model containing the
/// fiber coordinate `t`, its polyvector partner `theta_t`, and the base
/// directions. The model differential must annihilate both fiber
/// generators (Morse coordinates are holomorphic).
#[derive(Clone, Debug)]
pub struct ChiSetup {
    model: GerstenhaberModel,
    t: GenId,
    theta_t: GenId,
}

impl ChiSetup {
    pub fn new(model: GerstenhaberModel, t: GenId, theta_t: GenId) -> Result<Self, Error> {
        let ctx = model.context();
        if ctx.generator(t).is_odd() || !ctx.generator(theta_t).is_odd() {
            return Err(Error::Model("fiber pair must be (even t, odd theta)".into()));
        }
        if !model.pairs().contains(&(theta_t, t)) {
            return Err(Error::Model("(theta_t, t) must be a declared pairing".into()));
        }
        let te = Element::generator(ctx, t);
        let the = Element::generator(ctx, theta_t);
        if !model.d(&te)?.is_zero() || !model.d(&the)?.is_zero() {
            return Err(Error::Model(
                "the differential must vanish on the fiber coordinates".into(),
            ));
        }
        Ok(ChiSetup { model, t, theta_t })
    }

    pub fn model(&self) -> &GerstenhaberModel {
        &self.model
    }

    pub fn fiber(&self) -> GenId {
        self.t
    }

    pub fn theta_fiber(&self) -> GenId {
        self.theta_t
    }

    /// The quadratic potential `W = t^2 / 2`.
    pub fn potential(&self) -> Result<Element, Error> {
        let te = Element::generator(self.model.context(), self.t);
        Ok(te.mul(&te)?.scale(&Scalar::from_ratio(1, 2)))
    }

    /// The fiber-side structure whose zero locus picks out Maurer-Cartan
    /// points of `W + eta`.
    pub fn domain_structure(&self) -> Result<LinftyStructure, Error> {
        Ok(LinftyStructure::with_potential(
            self.model.clone(),
            self.potential()?,
        ))
    }

    /// Split an even point as `eta = phi(t) + psi(t) * theta_t` (the psi
    /// factor standing to the left of `theta_t`). In a single-fiber model
    /// every even element has this shape; shapes the critical-value map
    /// cannot consume (a coefficient of zero weight, say) surface as
    /// unsupported-shape errors from `chi`.
    pub fn decompose(&self, eta: &Element) -> Result<(Element, Element), Error> {
        if !eta.is_even() {
            return Err(Error::Input("chi takes even elements".into()));
        }
        let (phi, psi) = eta.split_right(self.theta_t);
        Ok((phi, psi))
    }

    fn path_of(&self, phi: &Element, cutoff: u32) -> Result<DeformationPath, Error> {
        DeformationPath::new(
            self.model.context().clone(),
            vec![self.t],
            phi.truncate(cutoff),
        )
        .map_err(|e| match e {
            Error::Input(m) => Error::UnsupportedShape(m),
            other => other,
        })
    }

    /// `chi(eta)`: restrict to the base Lagrangian (drop `psi`), then take
    /// the critical value of `W + phi`.
    pub fn chi(&self, eta: &Element, cutoff: u32) -> Result<Element, Error> {
        let (phi, _psi) = self.decompose(eta)?;
        let path = self.path_of(&phi, cutoff)?;
        Ok(solve_critical(&path, cutoff)?.phi_c)
    }

    /// Differential of `chi` at `eta`: `(delta_phi, delta_psi) -> delta_phi(t_c)`.
    /// The `delta_psi` argument is ignored by construction.
    pub fn dchi(
        &self,
        eta: &Element,
        delta_phi: &Element,
        _delta_psi: &Element,
        cutoff: u32,
    ) -> Result<Element, Error> {
        let (phi, _) = self.decompose(eta)?;
        let path = self.path_of(&phi, cutoff)?;
        let t_c = solve_critical(&path, cutoff)?.t_c[0].clone();
        let mut map = BTreeMap::new();
        map.insert(self.t, t_c);
        delta_phi.truncate(cutoff).substitute(&map)
    }

    /// The chain-map (L-infinity morphism) condition at the point `eta`:
    /// `dchi_eta(B_domain(eta)) = B_target(chi(eta))`, exactly within the
    /// cutoff.
    pub fn chain_check(&self, eta: &Element, cutoff: u32) -> Result<ChainCheckReport, Error> {
        let eta = eta.truncate(cutoff);
        let (phi, _psi) = self.decompose(&eta)?;
        let path = self.path_of(&phi, cutoff)?;
        let solved = solve_critical(&path, cutoff)?;
        let t_c = solved.t_c[0].clone();

        let b_eta = self.domain_structure()?.field_value(&eta)?;
        let (tangent_phi, tangent_psi) = b_eta.split_right(self.theta_t);
        let mut map = BTreeMap::new();
        map.insert(self.t, t_c);
        let lhs = tangent_phi.substitute(&map)?;

        let rhs = self.model.mc_check(&solved.phi_c)?;
        Ok(ChainCheckReport {
            lhs,
            rhs,
            psi_component_of_field: tangent_psi,
        })
    }
}

#[derive(Clone, Debug)]
pub struct ChainCheckReport {
    /// `dchi` applied to the domain structure field at `eta`.
    pub lhs: Element,
    /// Structure field of the target at `chi(eta)`.
    pub rhs: Element,
    /// The `theta_t`-component of the field (killed by `dchi`).
    pub psi_component_of_field: Element,
}

impl ChainCheckReport {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// A ready-made chi setup over two base coordinates with two odd
/// parameters: generators `y1 y2` (even base, capped), `z1 z2` (odd forms),
/// `th1 th2` (odd polyvectors), `e1 e2` (odd parameters), fiber `t` and
/// `tht`. With `with_differential`, `D(y_i) = z_i`.
pub fn standard_chi_setup(with_differential: bool) -> Result<ChiSetup, Error> {
    let mut b = ContextBuilder::new();
    let y1 = b.gen_capped("y1", 0, 0, GenClass::Base);
    let y2 = b.gen_capped("y2", 0, 0, GenClass::Base);
    let z1 = b.gen("z1", 1, 1, GenClass::Form);
    let z2 = b.gen("z2", 1, 1, GenClass::Form);
    let th1 = b.gen("th1", 1, 1, GenClass::Polyvector);
    let th2 = b.gen("th2", 1, 1, GenClass::Polyvector);
    b.gen("e1", 1, 1, GenClass::Param);
    b.gen("e2", 1, 1, GenClass::Param);
    let t = b.gen("t", 0, 0, GenClass::Fiber);
    let tht = b.gen("tht", 1, 0, GenClass::Polyvector);
    b.degree_cap(10);
    let ctx = b.build()?;
    let mut diff = BTreeMap::new();
    if with_differential {
        diff.insert(y1, Element::generator(&ctx, z1));
        diff.insert(y2, Element::generator(&ctx, z2));
    }
    let model = GerstenhaberModel::new(ctx, vec![(th1, y1), (th2, y2), (tht, t)], diff)?;
    ChiSetup::new(model, t, tht)
}

/// Deterministic random element for seeded checks: `terms` monomials of the
/// requested parity with weight in `1..=max_weight`, small rational
/// coefficients.
pub fn random_element(
    ctx: &Context,
    rng: &mut impl rand::Rng,
    parity: u8,
    max_weight: u32,
    terms: usize,
) -> Result<Element, Error> {
    let pool: Vec<Monomial> = enumerate_monomials(ctx, max_weight)?
        .into_iter()
        .filter(|m| m.parity(ctx) == parity && m.weight(ctx) >= 1)
        .collect();
    if pool.is_empty() {
        return Err(Error::Input("no monomials available for sampling".into()));
    }
    let mut acc = Element::zero(ctx);
    for _ in 0..terms {
        let m = &pool[rng.gen_range(0..pool.len())];
        let num = rng.gen_range(-6i64..=6);
        let den = rng.gen_range(1i64..=4);
        let factors: Vec<(GenId, u32)> = m.0.iter().map(|&(g, e)| (GenId(g), e)).collect();
        let (term, _) = Element::from_raw_monomial(ctx, Scalar::from_ratio(num, den), &factors);
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Minimal presentation of the n-truncated one-parameter algebra: linear
/// generators in degrees 1 and 2 with a single n-ary bracket sending n
/// copies of the degree-1 generator to the degree-2 one. Its Chevalley
/// complex is `(K[T] (x) Lambda[U], dU = T^n)` in the shifted coordinates.
#[derive(Clone, Copy, Debug)]
pub struct TruncatedA1 {
    pub n: u32,
}

impl TruncatedA1 {
    pub fn new(n: u32) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::Input("truncation order must be >= 1".into()));
        }
        Ok(TruncatedA1 { n })
    }

    /// Cohomology table of the Chevalley complex, stratified by weight.
    /// Degree 0 carries `{1, T, ..., T^(n-1)}`; everything else dies.
    pub fn chevalley_cohomology(&self, max_weight: u32) -> Result<HomologyReport, Error> {
        let n = self.n;
        let mut b = ContextBuilder::new();
        let tt = b.gen("T", 0, 1, GenClass::Param);
        let uu = b.gen("U", -1, n, GenClass::Param);
        let ctx = b.build()?;
        let mut diff = BTreeMap::new();
        diff.insert(uu, Element::generator(&ctx, tt).pow(n)?);
        let model = GerstenhaberModel::new(ctx.clone(), vec![], diff)?;
        stratified_cohomology(&model, max_weight)
    }
}

/// Per-(degree, weight) cohomology of a weight-preserving generator-table
/// differential, over all monomials of weight at most `max_weight`.
fn stratified_cohomology(
    model: &GerstenhaberModel,
    max_weight: u32,
) -> Result<HomologyReport, Error> {
    let ctx = model.context().clone();
    let all = enumerate_monomials(&ctx, max_weight)?;
    let mut strata: BTreeMap<(i64, u32), Vec<Monomial>> = BTreeMap::new();
    for m in all {
        strata
            .entry((m.degree(&ctx), m.weight(&ctx)))
            .or_default()
            .push(m);
    }
    let empty: Vec<Monomial> = Vec::new();
    let get = |k: (i64, u32)| strata.get(&k).unwrap_or(&empty);
    let images = |src: &Vec<Monomial>| -> Result<Vec<Element>, Error> {
        src.iter()
            .map(|m| {
                let factors: Vec<(GenId, u32)> =
                    m.0.iter().map(|&(g, e)| (GenId(g), e)).collect();
                let (e, _) = Element::from_raw_monomial(&ctx, Scalar::one(), &factors);
                model.d(&e)
            })
            .collect()
    };
    let mut out = Vec::new();
    let mut total = 0;
    for (&(deg, w), basis) in &strata {
        let d_out = operator_matrix(&images(basis)?, get((deg + 1, w)));
        let d_in = operator_matrix(&images(get((deg - 1, w)))?, basis);
        let (dim, reps) = homology(&d_out, &d_in);
        total += dim;
        out.push(HomologyStratum {
            degree: deg,
            aux: w,
            dim,
            basis: reps.iter().map(|v| basis_string(&ctx, basis, v)).collect(),
        });
    }
    Ok(HomologyReport {
        strata: out,
        total_dim: total,
    })
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct HhReport {
    pub n: u32,
    pub max_weight: u32,
    /// Basis of the degree-0 cohomology across all weights; expected
    /// `{1, t, ..., t^(n-1)}`.
    pub degree0_basis: Vec<String>,
    pub table: HomologyReport,
}

/// Hochschild cohomology of the enveloping algebra of [`TruncatedA1`]: the
/// four-generator complex with `eps` odd of degree 1, `eta` even of degree
/// 2, `t` even of degree 0, `u` odd of degree -1, and differential
/// `d(u) = t^n`, `d(eps) = n eta t^(n-1)`. Weights are chosen so the
/// differential preserves them (`w(t) = w(eta) = 1`, `w(u) = w(eps) = n`),
/// making every (degree, weight) stratum exact.
pub fn hh_ua1(n: u32, max_weight: u32) -> Result<HhReport, Error> {
    if n == 0 {
        return Err(Error::Input("hh-ua1 needs n >= 1".into()));
    }
    if max_weight > 40 {
        return Err(Error::Bound("hh-ua1 is desk-scale: max_weight <= 40".into()));
    }
    let mut b = ContextBuilder::new();
    let eps = b.gen("eps", 1, n, GenClass::Param);
    let eta = b.gen("eta", 2, 1, GenClass::Param);
    let t = b.gen("t", 0, 1, GenClass::Param);
    let u = b.gen("u", -1, n, GenClass::Param);
    let ctx = b.build()?;
    let te = Element::generator(&ctx, t);
    let mut diff = BTreeMap::new();
    diff.insert(u, te.pow(n)?);
    diff.insert(
        eps,
        Element::generator(&ctx, eta)
            .mul(&te.pow(n - 1)?)?
            .scale(&Scalar::from_int(n as i64)),
    );
    let model = GerstenhaberModel::new(ctx.clone(), vec![], diff)?;
    let table = stratified_cohomology(&model, max_weight)?;
    let degree0_basis: Vec<String> = table
        .strata
        .iter()
        .filter(|s| s.degree == 0)
        .flat_map(|s| s.basis.iter().cloned())
        .collect();
    Ok(HhReport {
        n,
        max_weight,
        degree0_basis,
        table,
    })
}

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct SkyscraperReport {
    pub even_dim: usize,
    pub odd_dim: usize,
}

impl SkyscraperReport {
    pub fn rank(&self) -> usize {
        self.even_dim + self.odd_dim
    }
}

/// Rank of the 2-periodic cohomology of the one-odd-generator complex with
/// differential `e -> w`: 0 iff `w` is invertible, 2 iff `w = 0`, and the
/// exact kernel/image count for nilpotent `w`.
pub fn curved_skyscraper_check(w: &Element, max_weight: u32) -> Result<SkyscraperReport, Error> {
    if !w.is_even() {
        return Err(Error::Input("curving must be even".into()));
    }
    let ctx = w.context().clone();
    let basis = enumerate_monomials(&ctx, max_weight)?;
    // The complex is spanned by `m` and `m e`; d(m) = 0 and
    // d(m e) = (-1)^{|m|} m w, truncated at max_weight.
    let d_of_me = |m: &Monomial| -> Result<Element, Error> {
        let factors: Vec<(GenId, u32)> = m.0.iter().map(|&(g, e)| (GenId(g), e)).collect();
        let (me, _) = Element::from_raw_monomial(&ctx, Scalar::one(), &factors);
        let v = me.mul(w)?.truncate(max_weight);
        Ok(if m.parity(&ctx) == 1 { v.neg() } else { v })
    };
    let (even_ms, odd_ms): (Vec<_>, Vec<_>) =
        basis.iter().cloned().partition(|m| m.parity(&ctx) == 0);
    let images_into = |ms: &Vec<Monomial>, target: &Vec<Monomial>| -> Result<Matrix, Error> {
        let imgs: Vec<Element> = ms.iter().map(&d_of_me).collect::<Result<_, _>>()?;
        Ok(operator_matrix(&imgs, target))
    };
    // Even part of the complex: even monomials plus (odd monomial) e;
    // d maps the latter into odd monomials. Odd part symmetric.
    let d_even = images_into(&odd_ms, &odd_ms)?;
    let d_odd = images_into(&even_ms, &even_ms)?;
    let even_total = even_ms.len() + odd_ms.len();
    let odd_total = odd_ms.len() + even_ms.len();
    let h_even = (even_total - d_even.rank()) - d_odd.rank();
    let h_odd = (odd_total - d_odd.rank()) - d_even.rank();
    Ok(SkyscraperReport {
        even_dim: h_even,
        odd_dim: h_odd,
    })
}

/// Context with a single nilpotent even parameter (`a^(cap+1) = 0` via the
/// degree cap), for skyscraper checks over nilpotent curvings.
pub fn nilpotent_parameter_context(cap: u32) -> Result<(Context, GenId), Error> {
    let mut b = ContextBuilder::new();
    let a = b.gen_capped("a", 0, 1, GenClass::Param);
    b.degree_cap(cap);
    let ctx = b.build()?;
    Ok((ctx, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_value_at_zero_and_mc_points() {
        let setup = standard_chi_setup(false).unwrap();
        let ctx = setup.model().context().clone();
        let b = setup.domain_structure().unwrap();
        assert!(b.field_value(&Element::zero(&ctx)).unwrap().is_zero());
        // phi = z1 th1 t is Maurer-Cartan relative to W: y-free and linear
        let phi = Element::generator(&ctx, ctx.lookup("z1").unwrap())
            .mul(&Element::generator(&ctx, ctx.lookup("th1").unwrap()))
            .unwrap()
            .mul(&Element::generator(&ctx, ctx.lookup("t").unwrap()))
            .unwrap()
            .truncate(8);
        let v = b.field_value(&phi).unwrap();
        assert!(v.is_zero(), "structure field should vanish at MC points");
    }

    #[test]
    fn chi_basics() {
        let setup = standard_chi_setup(false).unwrap();
        let ctx = setup.model().context().clone();
        // chi(0) = 0
        assert!(setup.chi(&Element::zero(&ctx), 8).unwrap().is_zero());
        // psi alone does not affect the critical value
        let psi_eta = Element::generator(&ctx, ctx.lookup("e1").unwrap())
            .mul(&Element::generator(&ctx, ctx.lookup("tht").unwrap()))
            .unwrap()
            .mul(&Element::generator(&ctx, ctx.lookup("t").unwrap()))
            .unwrap();
        assert!(setup.chi(&psi_eta, 8).unwrap().is_zero());
        // dchi kills pure-psi variations
        let dpsi = Element::generator(&ctx, ctx.lookup("e2").unwrap());
        let out = setup
            .dchi(&psi_eta, &Element::zero(&ctx), &dpsi, 8)
            .unwrap();
        assert!(out.is_zero());
        // dchi at eta = 0 evaluates at t = 0
        let dphi = Element::generator(&ctx, ctx.lookup("z1").unwrap())
            .mul(&Element::generator(&ctx, ctx.lookup("th1").unwrap()))
            .unwrap();
        let out = setup
            .dchi(&Element::zero(&ctx), &dphi, &Element::zero(&ctx), 8)
            .unwrap();
        assert_eq!(out, dphi.truncate(8));
    }

    #[test]
    fn chain_check_trivial_points() {
        let setup = standard_chi_setup(true).unwrap();
        let ctx = setup.model().context().clone();
        let rep = setup.chain_check(&Element::zero(&ctx), 8).unwrap();
        assert!(rep.lhs.is_zero());
        assert!(rep.rhs.is_zero());
        assert!(rep.holds());
    }

    #[test]
    fn hh_ua1_degree_zero() {
        for n in 1..=4u32 {
            let rep = hh_ua1(n, 8).unwrap();
            assert_eq!(rep.degree0_basis.len() as u32, n, "n = {n}");
            let mut expect: Vec<String> = vec!["1".into()];
            if n > 1 {
                expect.push("t".into());
            }
            for k in 2..n {
                expect.push(format!("t^{k}"));
            }
            assert_eq!(rep.degree0_basis, expect, "n = {n}");
        }
    }

    #[test]
    fn chevalley_of_truncated_a1() {
        for n in 1..=4u32 {
            let rep = TruncatedA1::new(n)
                .unwrap()
                .chevalley_cohomology(8)
                .unwrap();
            let deg0: usize = rep
                .strata
                .iter()
                .filter(|s| s.degree == 0)
                .map(|s| s.dim)
                .sum();
            assert_eq!(deg0 as u32, n);
            let rest: usize = rep
                .strata
                .iter()
                .filter(|s| s.degree != 0)
                .map(|s| s.dim)
                .sum();
            assert_eq!(rest, 0);
        }
    }

    #[test]
    fn skyscraper_ranks() {
        let ctx = ContextBuilder::new().build().unwrap();
        let zero = Element::zero(&ctx);
        assert_eq!(curved_skyscraper_check(&zero, 0).unwrap().rank(), 2);
        let five = Element::from_int(&ctx, 5);
        assert_eq!(curved_skyscraper_check(&five, 0).unwrap().rank(), 0);
        // nilpotent: a with a^2 = 0
        let (nctx, a) = nilpotent_parameter_context(1).unwrap();
        let ae = Element::generator(&nctx, a);
        let rep = curved_skyscraper_check(&ae, 1).unwrap();
        assert_eq!(rep.even_dim, 1);
        assert_eq!(rep.odd_dim, 1);
    }
}
