//! Degree-by-degree critical-point extraction for Morse superpotentials.
//!
//! For `Phi(t) = (1/2) sum t_i^2 + phi(t)` with nilpotent (positive-weight)
//! coefficients, the critical equation `t + grad phi(t) = 0` is solved by a
//! plain fixed-point iteration `t <- -grad phi(t)`; the weight filtration
//! stabilizes one stratum per pass, so at most `cutoff` passes are needed.
//! The critical value `Phi_c = W(t_c) + phi(t_c)` is the deformation class
//! the rest of the crate consumes.
//!
//! A second, independent route to the same series (closed-form root of the
//! derivative, expanded with geometric-series inversion and the binomial
//! square root) lives in [`closed_form_root_series`]; reports compare the
//! two so a regression in either route is caught by the other.

use crate::algebra::{Context, ContextBuilder, Element, GenClass, GenId, Generator};
use crate::gerstenhaber::GerstenhaberModel;
use crate::scalar::Scalar;
use crate::Error;
use num::bigint::BigInt;
use num::rational::BigRational;
use std::collections::BTreeMap;

/// A deformation path `phi(t)`: a polynomial in the fiber coordinates whose
/// coefficients all have positive filtration weight, attached to the fixed
/// Morse potential `W = (1/2) sum t_i^2`.
#[derive(Clone, Debug)]
pub struct DeformationPath {
    ctx: Context,
    fiber: Vec<GenId>,
    phi: Element,
}

impl DeformationPath {
    pub fn new(ctx: Context, fiber: Vec<GenId>, phi: Element) -> Result<Self, Error> {
        if phi.context() != &ctx {
            return Err(Error::ContextMismatch);
        }
        if !phi.is_even() {
            return Err(Error::Input("deformation path must be even".into()));
        }
        for &t in &fiber {
            if ctx.generator(t).is_odd() {
                return Err(Error::Input("fiber coordinates must be even".into()));
            }
        }
        for (m, _) in phi.terms() {
            let coeff_weight: u32 = m
                .0
                .iter()
                .filter(|&&(g, _)| !fiber.contains(&GenId(g)))
                .map(|&(g, e)| ctx.generator(GenId(g)).weight * e)
                .sum();
            if coeff_weight == 0 {
                return Err(Error::Input(
                    "every coefficient of the path must have positive weight".into(),
                ));
            }
        }
        Ok(DeformationPath { ctx, fiber, phi })
    }

    /// Single-fiber path `phi(t) = sum coeffs[k] t^(k+1)`.
    pub fn from_series(
        ctx: Context,
        t: GenId,
        coeffs: &[Element],
    ) -> Result<Self, Error> {
        let te = Element::generator(&ctx, t);
        let mut phi = Element::zero(&ctx);
        for (k, c) in coeffs.iter().enumerate() {
            phi = phi.add(&c.mul(&te.pow(k as u32 + 1)?)?)?;
        }
        DeformationPath::new(ctx, vec![t], phi)
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn fiber(&self) -> &[GenId] {
        &self.fiber
    }

    pub fn phi(&self) -> &Element {
        &self.phi
    }

    /// Coefficient of `t^n` for a single-fiber path.
    pub fn series_coefficient(&self, n: u32) -> Result<Element, Error> {
        if self.fiber.len() != 1 {
            return Err(Error::Input("series coefficients need a single fiber".into()));
        }
        let t = self.fiber[0];
        let picked = self.phi.filter_terms(|m| m.exponent_of(t) == n);
        let mut map = BTreeMap::new();
        map.insert(t, Element::one(&self.ctx));
        picked.substitute(&map)
    }

    /// The potential `W = (1/2) sum t_i^2`.
    pub fn potential(&self) -> Result<Element, Error> {
        let mut w = Element::zero(&self.ctx);
        for &t in &self.fiber {
            let te = Element::generator(&self.ctx, t);
            w = w.add(&te.mul(&te)?.scale(&Scalar::from_ratio(1, 2)))?;
        }
        Ok(w)
    }
}

/// Output of the critical solve: per-fiber critical point, critical value,
/// and the gradient residual (identically zero within the cutoff for every
/// valid input). `phi_c` contains no fiber variables.
#[derive(Clone, Debug)]
pub struct CriticalData {
    pub t_c: Vec<Element>,
    pub phi_c: Element,
    pub residual: Vec<Element>,
    pub cutoff: u32,
}

impl CriticalData {
    pub fn residual_is_zero(&self) -> bool {
        self.residual.iter().all(|r| r.is_zero())
    }
}

/// Solve `t_i + d phi/d t_i = 0` by fixed-point iteration under the weight
/// filtration and evaluate the critical value.
pub fn solve_critical(path: &DeformationPath, cutoff: u32) -> Result<CriticalData, Error> {
    if cutoff < 2 {
        return Err(Error::Input("critical solve needs cutoff >= 2".into()));
    }
    let ctx = path.context().clone();
    let grads: Vec<Element> = path
        .fiber()
        .iter()
        .map(|&t| path.phi().truncate(cutoff).partial_left(t))
        .collect();
    let mut cur: Vec<Element> = path
        .fiber()
        .iter()
        .map(|_| Element::zero(&ctx).with_cutoff(Some(cutoff)))
        .collect();
    let mut stable = false;
    for _ in 0..=cutoff + 1 {
        let map: BTreeMap<GenId, Element> = path
            .fiber()
            .iter()
            .copied()
            .zip(cur.iter().cloned())
            .collect();
        let next: Vec<Element> = grads
            .iter()
            .map(|g| g.substitute(&map).map(|v| v.neg()))
            .collect::<Result<_, _>>()?;
        if next == cur {
            stable = true;
            break;
        }
        cur = next;
    }
    if !stable {
        return Err(Error::Unstable);
    }
    let map: BTreeMap<GenId, Element> = path
        .fiber()
        .iter()
        .copied()
        .zip(cur.iter().cloned())
        .collect();
    let phi_at = path.phi().truncate(cutoff).substitute(&map)?;
    let w_at = path.potential()?.truncate(cutoff).substitute(&map)?;
    let phi_c = w_at.add(&phi_at)?;
    debug_assert!(phi_c
        .terms()
        .all(|(m, _)| path.fiber().iter().all(|&t| m.exponent_of(t) == 0)));
    let residual: Vec<Element> = path
        .fiber()
        .iter()
        .zip(&grads)
        .map(|(&t, g)| {
            let tv = cur[path.fiber().iter().position(|&x| x == t).unwrap()].clone();
            Ok(tv.add(&g.substitute(&map)?)?)
        })
        .collect::<Result<_, Error>>()?;
    Ok(CriticalData {
        t_c: cur,
        phi_c,
        residual,
        cutoff,
    })
}

/// The universal single-fiber setting: free commuting generators
/// `phi1..phiN` of degree 2 and weight 2, a fiber coordinate `t`, and its
/// polyvector partner `tht`.
pub struct UniversalSetting {
    pub ctx: Context,
    pub t: GenId,
    pub theta_t: GenId,
    pub phis: Vec<GenId>,
}

pub fn universal_setting(n: usize) -> Result<UniversalSetting, Error> {
    let mut b = ContextBuilder::new();
    let mut phis = Vec::new();
    for k in 1..=n {
        phis.push(b.gen(&format!("phi{k}"), 2, 2, GenClass::Form));
    }
    let t = b.gen("t", 0, 0, GenClass::Fiber);
    let theta_t = b.gen("tht", 1, 0, GenClass::Polyvector);
    Ok(UniversalSetting {
        ctx: b.build()?,
        t,
        theta_t,
        phis,
    })
}

pub fn universal_path(setting: &UniversalSetting) -> Result<DeformationPath, Error> {
    let coeffs: Vec<Element> = setting
        .phis
        .iter()
        .map(|&p| Element::generator(&setting.ctx, p))
        .collect();
    DeformationPath::from_series(setting.ctx.clone(), setting.t, &coeffs)
}

/// Universal critical value `Phi_c` in `phi1..phiN`, exact coefficients.
pub fn universal_phi_c(n: usize, cutoff: u32) -> Result<Element, Error> {
    if n < 1 || cutoff < 4 {
        return Err(Error::Input("universal Phi_c needs N >= 1, cutoff >= 4".into()));
    }
    let setting = universal_setting(n)?;
    let path = universal_path(&setting)?;
    Ok(solve_critical(&path, cutoff)?.phi_c)
}

/// Universal critical point `t_c` as a series in `phi1..phiN`.
pub fn universal_t_c(n: usize, cutoff: u32) -> Result<Element, Error> {
    let setting = universal_setting(n)?;
    let path = universal_path(&setting)?;
    Ok(solve_critical(&path, cutoff)?.t_c[0].clone())
}

/// Delete monomials whose form-factor count (the (0,p) form degree p)
/// exceeds `dim_y`: on a fixed base of that dimension higher terms vanish.
pub fn dimension_truncate(phi_c: &Element, dim_y: u32) -> Element {
    let ctx = phi_c.context().clone();
    phi_c.filter_terms(|m| m.class_count(&ctx, GenClass::Form) <= dim_y)
}

/// Maurer-Cartan residual of the critical value of a path living in a
/// Gerstenhaber model. The path itself is checked first; a path that is not
/// Maurer-Cartan is refused with its residual attached.
pub fn mc_residual_of_phi_c(
    model: &GerstenhaberModel,
    path: &DeformationPath,
    cutoff: u32,
) -> Result<Element, Error> {
    let path_residual = model.mc_check(&path.phi().truncate(cutoff))?;
    if !path_residual.is_zero() {
        return Err(Error::NotMaurerCartan(path_residual.to_string()));
    }
    let data = solve_critical(path, cutoff)?;
    model.mc_check(&data.phi_c)
}

/// Report of the two Proposition-style closure identities at the critical
/// point: the gradient vanishes through the bracket route, and the twisted
/// differential of `t - t_c` (times the fiber Hessian) falls back into the
/// ideal `(t - t_c)`.
#[derive(Clone, Debug)]
pub struct IdealClosureReport {
    pub gradient_bracket_at_tc: Element,
    pub gradient_vanishes: bool,
    pub hessian_invertible: bool,
    pub membership_remainder: Element,
    pub membership_holds: bool,
}

impl IdealClosureReport {
    pub fn pass(&self) -> bool {
        self.gradient_vanishes && self.hessian_invertible && self.membership_holds
    }
}

/// Run the closure check, optionally at a caller-supplied (e.g. deliberately
/// perturbed) critical point.
pub fn ideal_closure_check(
    model: &GerstenhaberModel,
    path: &DeformationPath,
    cutoff: u32,
    override_tc: Option<Element>,
) -> Result<IdealClosureReport, Error> {
    if path.fiber().len() != 1 {
        return Err(Error::Input("ideal closure check uses a single fiber".into()));
    }
    let ctx = path.context().clone();
    let t = path.fiber()[0];
    let theta_t = model
        .pairs()
        .iter()
        .find(|&&(_, q)| q == t)
        .map(|&(th, _)| th)
        .ok_or_else(|| Error::Model("fiber coordinate has no polyvector partner".into()))?;
    let t_c = match override_tc {
        Some(v) => v.truncate(cutoff),
        None => solve_critical(path, cutoff)?.t_c[0].clone(),
    };
    let phi_full = path
        .potential()?
        .add(path.phi())?
        .truncate(cutoff);
    let sub_tc = |x: &Element| -> Result<Element, Error> {
        let mut map = BTreeMap::new();
        map.insert(t, t_c.clone());
        x.substitute(&map)
    };

    // (i) {theta_t, Phi(t)} at t = t_c: the gradient through the bracket.
    let grad_bracket = sub_tc(&model.schouten(&Element::generator(&ctx, theta_t), &phi_full)?)?;

    // Hessian at the critical point; filtered invertibility means unit
    // constant term.
    let hessian = phi_full.partial_left(t).partial_left(t);
    let hessian_at = sub_tc(&hessian)?;
    let hessian_invertible = hessian_at
        .coefficient_of(&crate::algebra::Monomial::unit())
        .is_one();

    // (ii) (D(t - t_c) + {Phi(t), t - t_c}) * Phi''(t_c) in (t - t_c):
    // substitute t = s + t_c and take the s-constant remainder of the
    // division by s.
    let t_elem = Element::generator(&ctx, t);
    let t_minus_tc = t_elem.sub(&t_c)?;
    let closed = model
        .d(&t_minus_tc)?
        .add(&model.schouten(&phi_full, &t_minus_tc)?)?;
    let elem = closed.mul(&hessian_at)?;
    let s_ctx = ctx.extend(
        vec![Generator {
            name: "_s".into(),
            degree: 0,
            weight: 0,
            class: GenClass::Fiber,
            capped: false,
        }],
        None,
    )?;
    let s = s_ctx.lookup("_s").unwrap();
    let shift = Element::generator(&s_ctx, s).add(&t_c.into_context(&s_ctx)?)?;
    let mut map = BTreeMap::new();
    map.insert(t, shift);
    let shifted = elem.into_context(&s_ctx)?.substitute(&map)?;
    let remainder = shifted.filter_terms(|m| m.exponent_of(s) == 0);

    Ok(IdealClosureReport {
        gradient_vanishes: grad_bracket.is_zero(),
        gradient_bracket_at_tc: grad_bracket,
        hessian_invertible,
        membership_holds: remainder.is_zero(),
        membership_remainder: remainder,
    })
}

/// Scaling-family diagnostics for the universal path: forming
/// `Phi_xi = xi^{-2} W(xi t) + phi(xi t)` (net effect `phi_n -> xi^n phi_n`),
/// the report verifies the specialization at `xi = 1`, the substitution form
/// of `Phi_{c,xi}`, and the envelope identity
/// `d/dxi Phi_{c,xi} = (d Phi_xi / d xi)(c_xi)`.
#[derive(Clone, Debug)]
pub struct ScalingReport {
    pub phi_c_xi: Element,
    pub xi_one_matches: bool,
    pub substitution_matches: bool,
    pub footnote_lhs: Element,
    pub footnote_rhs: Element,
}

impl ScalingReport {
    pub fn footnote_holds(&self) -> bool {
        self.footnote_lhs == self.footnote_rhs
    }

    pub fn pass(&self) -> bool {
        self.xi_one_matches && self.substitution_matches && self.footnote_holds()
    }
}

pub fn scaling_family(n: usize, cutoff: u32) -> Result<ScalingReport, Error> {
    let mut b = ContextBuilder::new();
    let mut phis = Vec::new();
    for k in 1..=n {
        phis.push(b.gen(&format!("phi{k}"), 2, 2, GenClass::Form));
    }
    let t = b.gen("t", 0, 0, GenClass::Fiber);
    let _tht = b.gen("tht", 1, 0, GenClass::Polyvector);
    let xi = b.gen_capped("xi", 0, 0, GenClass::Param);
    b.degree_cap(n as u32 * cutoff);
    let ctx = b.build()?;

    let te = Element::generator(&ctx, t);
    let xie = Element::generator(&ctx, xi);
    let mut phi_plain = Element::zero(&ctx);
    let mut phi_scaled = Element::zero(&ctx);
    for (k, &p) in phis.iter().enumerate() {
        let nn = k as u32 + 1;
        let pe = Element::generator(&ctx, p);
        phi_plain = phi_plain.add(&pe.mul(&te.pow(nn)?)?)?;
        phi_scaled = phi_scaled.add(&pe.mul(&xie.pow(nn)?)?.mul(&te.pow(nn)?)?)?;
    }
    let path_plain = DeformationPath::new(ctx.clone(), vec![t], phi_plain.clone())?;
    let path_scaled = DeformationPath::new(ctx.clone(), vec![t], phi_scaled.clone())?;
    let plain = solve_critical(&path_plain, cutoff)?;
    let scaled = solve_critical(&path_scaled, cutoff)?;

    // xi = 1 specialization returns the unscaled critical value.
    let mut at_one = BTreeMap::new();
    at_one.insert(xi, Element::one(&ctx));
    let xi_one_matches = scaled.phi_c.substitute(&at_one)? == plain.phi_c;

    // Phi_{c,xi} equals Phi_c under phi_n -> xi^n phi_n.
    let mut scale_map = BTreeMap::new();
    for (k, &p) in phis.iter().enumerate() {
        let nn = k as u32 + 1;
        scale_map.insert(
            p,
            Element::generator(&ctx, p).mul(&xie.pow(nn)?)?,
        );
    }
    let substitution_matches = plain.phi_c.substitute(&scale_map)? == scaled.phi_c;

    // Envelope identity.
    let footnote_lhs = scaled.phi_c.partial_left(xi);
    let phi_xi_total = path_scaled.potential()?.add(&phi_scaled)?.truncate(cutoff);
    let phi_xi_dot = phi_xi_total.partial_left(xi);
    let mut at_cxi = BTreeMap::new();
    at_cxi.insert(t, scaled.t_c[0].clone());
    let footnote_rhs = phi_xi_dot.substitute(&at_cxi)?;

    Ok(ScalingReport {
        phi_c_xi: scaled.phi_c,
        xi_one_matches,
        substitution_matches,
        footnote_lhs,
        footnote_rhs,
    })
}

/// Geometric-series inverse of an element with invertible scalar constant
/// term and nilpotent (positive-weight) remainder; needs a cutoff in force.
pub fn series_inv(e: &Element) -> Result<Element, Error> {
    let ctx = e.context().clone();
    let c0 = e.coefficient_of(&crate::algebra::Monomial::unit());
    let c0_inv = c0
        .inv()
        .ok_or_else(|| Error::Input("series inverse needs a unit constant term".into()))?;
    let v = e.scale(&c0_inv).sub(&Element::one(&ctx))?;
    if !v.is_zero() && v.min_weight() == Some(0) {
        return Err(Error::Input("series inverse: remainder is not nilpotent".into()));
    }
    if e.cutoff().is_none() && !v.is_zero() {
        return Err(Error::Input("series inverse needs a cutoff".into()));
    }
    let mut acc = Element::one(&ctx).with_cutoff(e.cutoff());
    let mut pow = Element::one(&ctx).with_cutoff(e.cutoff());
    loop {
        pow = pow.mul(&v.neg())?;
        if pow.is_zero() {
            break;
        }
        acc = acc.add(&pow)?;
    }
    Ok(acc.scale(&c0_inv))
}

/// Binomial series `sqrt(1 + v)` for nilpotent `v` under a cutoff.
pub fn series_sqrt_one_plus(v: &Element) -> Result<Element, Error> {
    let ctx = v.context().clone();
    if !v.is_zero() && v.min_weight() == Some(0) {
        return Err(Error::Input("series sqrt: argument is not nilpotent".into()));
    }
    if v.cutoff().is_none() && !v.is_zero() {
        return Err(Error::Input("series sqrt needs a cutoff".into()));
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut acc = Element::one(&ctx).with_cutoff(v.cutoff());
    let mut pow = Element::one(&ctx).with_cutoff(v.cutoff());
    let mut k = 1u32;
    loop {
        pow = pow.mul(v)?;
        if pow.is_zero() {
            break;
        }
        let c = Scalar::from_rational(Scalar::rational_binomial(&half, k));
        acc = acc.add(&pow.scale(&c))?;
        k += 1;
    }
    Ok(acc)
}

/// Independent closed-form route to the critical point of
/// `(1/2)t^2 + c1 t + c2 t^2 + c3 t^3`: the root of
/// `3 c3 x^2 + (1 + 2 c2) x + c1 = 0` tending to `-c1`, expanded as a series
/// with [`series_inv`] and [`series_sqrt_one_plus`]. Exercises none of the
/// fixed-point machinery.
pub fn closed_form_root_series(
    c1: &Element,
    c2: &Element,
    c3: &Element,
    cutoff: u32,
) -> Result<Element, Error> {
    let ctx = c1.context().clone();
    let one = Element::one(&ctx).with_cutoff(Some(cutoff));
    let b = one.add(&c2.truncate(cutoff).scale(&Scalar::from_int(2)))?;
    let b_inv = series_inv(&b)?;
    // u = 12 c1 c3 / b^2
    let u = c1
        .truncate(cutoff)
        .mul(&c3.truncate(cutoff))?
        .scale(&Scalar::from_int(12))
        .mul(&b_inv.mul(&b_inv)?)?;
    let s = series_sqrt_one_plus(&u.neg())?;
    // root = -2 c1 / (b (1 + s))
    let denom = b.mul(&one.add(&s)?)?;
    let root = c1
        .truncate(cutoff)
        .scale(&Scalar::from_int(-2))
        .mul(&series_inv(&denom)?)?;
    Ok(root)
}

/// Critical value along the closed-form root: `W + phi` evaluated at
/// [`closed_form_root_series`].
pub fn closed_form_phi_c_series(
    c1: &Element,
    c2: &Element,
    c3: &Element,
    cutoff: u32,
) -> Result<Element, Error> {
    let root = closed_form_root_series(c1, c2, c3, cutoff)?;
    let r2 = root.mul(&root)?;
    let r3 = r2.mul(&root)?;
    let mut acc = r2.scale(&Scalar::from_ratio(1, 2));
    acc = acc.add(&c1.truncate(cutoff).mul(&root)?)?;
    acc = acc.add(&c2.truncate(cutoff).mul(&r2)?)?;
    acc = acc.add(&c3.truncate(cutoff).mul(&r3)?)?;
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_path_is_trivial() {
        let s = universal_setting(2).unwrap();
        let path =
            DeformationPath::new(s.ctx.clone(), vec![s.t], Element::zero(&s.ctx)).unwrap();
        let data = solve_critical(&path, 6).unwrap();
        assert!(data.t_c[0].is_zero());
        assert!(data.phi_c.is_zero());
        assert!(data.residual_is_zero());
    }

    #[test]
    fn universal_tc_matches_expansion() {
        // t_c = -phi1 + 2 phi1 phi2 - 4 phi1 phi2^2 - 3 phi1^2 phi3 at
        // weight <= 6
        let tc = universal_t_c(3, 6).unwrap();
        assert_eq!(
            tc.coefficient_of_named(&[("phi1", 1)]).unwrap(),
            Scalar::from_int(-1)
        );
        assert_eq!(
            tc.coefficient_of_named(&[("phi1", 1), ("phi2", 1)]).unwrap(),
            Scalar::from_int(2)
        );
        assert_eq!(
            tc.coefficient_of_named(&[("phi1", 1), ("phi2", 2)]).unwrap(),
            Scalar::from_int(-4)
        );
        assert_eq!(
            tc.coefficient_of_named(&[("phi1", 2), ("phi3", 1)]).unwrap(),
            Scalar::from_int(-3)
        );
        assert_eq!(tc.num_terms(), 4);
    }

    #[test]
    fn universal_phi_c_low_order() {
        let pc = universal_phi_c(2, 8).unwrap();
        assert_eq!(
            pc.coefficient_of_named(&[("phi1", 2)]).unwrap(),
            Scalar::from_ratio(-1, 2)
        );
        assert_eq!(
            pc.coefficient_of_named(&[("phi1", 2), ("phi2", 1)]).unwrap(),
            Scalar::from_int(1)
        );
        assert_eq!(
            pc.coefficient_of_named(&[("phi1", 2), ("phi2", 2)]).unwrap(),
            Scalar::from_int(-2)
        );
        // N = 1: phi' is constant, so t_c = -phi1 exactly and
        // Phi_c = -phi1^2/2 with no higher corrections.
        let p1 = universal_phi_c(1, 8).unwrap();
        assert_eq!(p1.num_terms(), 1);
        assert_eq!(
            p1.coefficient_of_named(&[("phi1", 2)]).unwrap(),
            Scalar::from_ratio(-1, 2)
        );
    }

    #[test]
    fn dimension_truncation() {
        let pc = universal_phi_c(3, 8).unwrap();
        assert!(dimension_truncate(&pc, 1).is_zero());
        let surf = dimension_truncate(&pc, 2);
        assert_eq!(surf.num_terms(), 1);
        assert_eq!(
            surf.coefficient_of_named(&[("phi1", 2)]).unwrap(),
            Scalar::from_ratio(-1, 2)
        );
        // dimY large enough: identity on the computed truncation
        assert_eq!(dimension_truncate(&pc, 4), pc);
    }

    #[test]
    fn oracle_agrees_with_solver() {
        let s = universal_setting(3).unwrap();
        let path = universal_path(&s).unwrap();
        let data = solve_critical(&path, 8).unwrap();
        let c1 = Element::generator(&s.ctx, s.phis[0]);
        let c2 = Element::generator(&s.ctx, s.phis[1]);
        let c3 = Element::generator(&s.ctx, s.phis[2]);
        let root = closed_form_root_series(&c1, &c2, &c3, 8).unwrap();
        assert_eq!(root, data.t_c[0]);
        let oracle_pc = closed_form_phi_c_series(&c1, &c2, &c3, 8).unwrap();
        assert_eq!(oracle_pc, data.phi_c);
        // The phi1^3 phi3 coefficient pinned by the oracle.
        assert_eq!(
            oracle_pc
                .coefficient_of_named(&[("phi1", 3), ("phi3", 1)])
                .unwrap(),
            Scalar::from_int(-1)
        );
    }

    #[test]
    fn series_helpers() {
        let s = universal_setting(1).unwrap();
        let p = Element::generator(&s.ctx, s.phis[0]).truncate(8);
        let one = Element::one(&s.ctx).truncate(8);
        let e = one.add(&p).unwrap();
        let inv = series_inv(&e).unwrap();
        assert_eq!(e.mul(&inv).unwrap(), one);
        let r = series_sqrt_one_plus(&p).unwrap();
        assert_eq!(r.mul(&r).unwrap(), e);
    }
}
