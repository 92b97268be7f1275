//! Clifford algebras with Hessian anticommutation relations, spinor
//! modules, the quadratic Thom matrix factorization, and the resolution /
//! Koszul-kernel degenerations.
//!
//! The defining relation is taken verbatim with the Hessian on the right:
//! `e_i e_j + e_j e_i = H_ij`, so `e^2 = 1/2` for the Morse potential
//! `W = t^2/2` (no factor-two renormalization). Blades are bitmask-indexed
//! products in increasing generator order; products are canonicalized by
//! rewriting with the relation, keeping exact Q(i) coefficients.

use crate::algebra::{Context, ContextBuilder, Element, GenClass, GenId, Monomial};
use crate::linalg::{homology, Matrix};
use crate::scalar::Scalar;
use crate::Error;
use std::collections::BTreeMap;

/// Inert record of the super-Brauer data attached to a construction: the
/// codimension parity and opaque labels for the two obstruction classes.
/// Nothing cohomological is computed from it.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BrauerTwist {
    pub codim_parity: String,
    pub w1_label: String,
    pub w2_label: String,
}

impl BrauerTwist {
    pub fn from_rank(rank: usize) -> Self {
        BrauerTwist {
            codim_parity: if rank % 2 == 0 { "even" } else { "odd" }.into(),
            w1_label: "trivialized".into(),
            w2_label: "trivialized".into(),
        }
    }
}

/// A blade is a bitmask over the generators; bit i set means `e_{i+1}`
/// appears (indices print 1-based).
pub type Blade = u32;

/// Rank-n Clifford algebra with a symmetric exact Hessian; dimension `2^n`.
#[derive(Clone, Debug)]
pub struct CliffordAlgebra {
    pub rank: usize,
    pub hessian: Vec<Vec<Scalar>>,
}

/// Exact element: blade -> coefficient.
pub type CliffordElement = BTreeMap<Blade, Scalar>;

impl CliffordAlgebra {
    pub fn new(rank: usize, hessian: Vec<Vec<Scalar>>) -> Result<Self, Error> {
        if rank > 30 {
            return Err(Error::Bound("clifford rank is desk-scale".into()));
        }
        if hessian.len() != rank || hessian.iter().any(|r| r.len() != rank) {
            return Err(Error::Input("hessian must be rank x rank".into()));
        }
        for i in 0..rank {
            for j in 0..rank {
                if hessian[i][j] != hessian[j][i] {
                    return Err(Error::Input("hessian must be symmetric".into()));
                }
            }
        }
        Ok(CliffordAlgebra { rank, hessian })
    }

    pub fn morse(rank: usize) -> Result<Self, Error> {
        let mut h = vec![vec![Scalar::zero(); rank]; rank];
        for (i, row) in h.iter_mut().enumerate() {
            row[i] = Scalar::one();
        }
        CliffordAlgebra::new(rank, h)
    }

    pub fn dimension(&self) -> usize {
        1usize << self.rank
    }

    pub fn basis(&self) -> impl Iterator<Item = Blade> {
        0..(1u32 << self.rank)
    }

    pub fn scalar(&self, c: Scalar) -> CliffordElement {
        let mut e = BTreeMap::new();
        if !c.is_zero() {
            e.insert(0, c);
        }
        e
    }

    pub fn generator(&self, i: usize) -> CliffordElement {
        let mut e = BTreeMap::new();
        e.insert(1u32 << i, Scalar::one());
        e
    }

    pub fn blade(&self, b: Blade) -> CliffordElement {
        let mut e = BTreeMap::new();
        e.insert(b, Scalar::one());
        e
    }

    pub fn add(&self, a: &CliffordElement, b: &CliffordElement) -> CliffordElement {
        let mut out = a.clone();
        for (bl, c) in b {
            let entry = out.entry(*bl).or_insert_with(Scalar::zero);
            *entry += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn scale(&self, a: &CliffordElement, c: &Scalar) -> CliffordElement {
        if c.is_zero() {
            return BTreeMap::new();
        }
        a.iter().map(|(b, x)| (*b, x * c)).collect()
    }

    pub fn neg(&self, a: &CliffordElement) -> CliffordElement {
        a.iter().map(|(b, x)| (*b, x.clone().neg())).collect()
    }

    /// Multiply a blade by one generator from the right, rewriting with the
    /// relation `e_j e_i = -e_i e_j + H_ij` and `e_i e_i = H_ii / 2`.
    fn blade_mul_gen(&self, b: Blade, i: usize) -> CliffordElement {
        let bit = 1u32 << i;
        if b == 0 || (31 - b.leading_zeros()) < i as u32 {
            return self.blade(b | bit);
        }
        let j = 31 - b.leading_zeros();
        let rest = b & !(1u32 << j);
        if j == i as u32 {
            let half = &self.hessian[i][i] * &Scalar::from_ratio(1, 2);
            return self.scale(&self.blade(rest), &half);
        }
        // (rest e_j) e_i = -(rest e_i) e_j + H_ji rest
        let inner = self.blade_mul_gen(rest, i);
        let mut out: CliffordElement = BTreeMap::new();
        for (bl, c) in inner {
            debug_assert!(bl & (1u32 << j) == 0);
            let entry = out.entry(bl | (1u32 << j)).or_insert_with(Scalar::zero);
            *entry += &c.neg();
        }
        let h = self.hessian[j as usize][i].clone();
        if !h.is_zero() {
            let entry = out.entry(rest).or_insert_with(Scalar::zero);
            *entry += &h;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn mul(&self, a: &CliffordElement, b: &CliffordElement) -> CliffordElement {
        let mut out: CliffordElement = BTreeMap::new();
        for (&ba, ca) in a {
            for (&bb, cb) in b {
                // multiply ba by bb generator by generator
                let mut acc = self.scale(&self.blade(ba), &(ca * cb));
                for i in 0..self.rank {
                    if bb & (1u32 << i) != 0 {
                        let mut next: CliffordElement = BTreeMap::new();
                        for (bl, c) in &acc {
                            for (bl2, c2) in self.blade_mul_gen(*bl, i) {
                                let entry = next.entry(bl2).or_insert_with(Scalar::zero);
                                *entry += &(c * &c2);
                            }
                        }
                        next.retain(|_, c| !c.is_zero());
                        acc = next;
                    }
                }
                for (bl, c) in acc {
                    let entry = out.entry(bl).or_insert_with(Scalar::zero);
                    *entry += &c;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn blade_parity(b: Blade) -> u8 {
        (b.count_ones() % 2) as u8
    }

    /// Super-commutator `[a, b] = a b - (-1)^(|a||b|) b a` for
    /// parity-homogeneous inputs.
    pub fn super_commutator(
        &self,
        a: &CliffordElement,
        a_parity: u8,
        b: &CliffordElement,
        b_parity: u8,
    ) -> CliffordElement {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        if a_parity == 1 && b_parity == 1 {
            self.add(&ab, &ba)
        } else {
            self.add(&ab, &self.neg(&ba))
        }
    }

    pub fn blade_name(b: Blade) -> String {
        if b == 0 {
            return "1".into();
        }
        (0..32)
            .filter(|i| b & (1u32 << i) != 0)
            .map(|i| format!("e{}", i + 1))
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Center of the (ungraded) algebra, as exact basis vectors over the
    /// blade basis.
    pub fn center_basis(&self) -> Vec<Vec<Scalar>> {
        let dim = self.dimension();
        // columns: commutators [x, e_i] stacked for all i, as a map from
        // the algebra to algebra^rank
        let mut cols = Vec::with_capacity(dim);
        for b in self.basis() {
            let be = self.blade(b);
            let mut col = Vec::with_capacity(dim * self.rank);
            for i in 0..self.rank {
                let ei = self.generator(i);
                let comm = self.add(&self.mul(&be, &ei), &self.neg(&self.mul(&ei, &be)));
                for target in self.basis() {
                    col.push(comm.get(&target).cloned().unwrap_or_else(Scalar::zero));
                }
            }
            cols.push(col);
        }
        Matrix::from_columns(dim * self.rank, cols).kernel_basis()
    }

    /// The volume element `e_1 e_2 ... e_n`.
    pub fn volume(&self) -> CliffordElement {
        self.blade(((1u64 << self.rank) - 1) as u32)
    }
}

/// Matrices over the ground field acting on an ordered basis; row-major.
pub type ActionMatrix = Vec<Vec<Scalar>>;

fn mat_mul(a: &ActionMatrix, b: &ActionMatrix) -> ActionMatrix {
    let n = a.len();
    let mut out = vec![vec![Scalar::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    let p = &a[i][k] * &b[k][j];
                    out[i][j] += &p;
                }
            }
        }
    }
    out
}

fn mat_add(a: &ActionMatrix, b: &ActionMatrix) -> ActionMatrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| {
            ra.iter()
                .zip(rb)
                .map(|(x, y)| {
                    let mut s = x.clone();
                    s += y;
                    s
                })
                .collect()
        })
        .collect()
}

fn mat_scale_id(n: usize, c: &Scalar) -> ActionMatrix {
    let mut out = vec![vec![Scalar::zero(); n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = c.clone();
    }
    out
}

/// Spinor module for the Morse Hessian. Even rank `2k`: the Fock space on
/// `k` isotropic creators `e_(2j-1) + i e_(2j)` (unnormalized to stay in
/// Q(i); the 1/sqrt(2) of the orthonormal presentation is absorbed into the
/// basis and affects nothing asserted). Odd rank `2k+1`: the rank-`2k`
/// module with the extra generator acting as the grading involution; that
/// normalization realizes the relation `e_n^2 = 1` instead of `1/2`, i.e.
/// the Hessian `diag(1,..,1,2)` (a documented basis rescaling), and the
/// odd-rank algebra itself is checked against its two-dimensional center.
#[derive(Clone, Debug)]
pub struct SpinorModule {
    pub rank: usize,
    /// Fock dimension `2^k`.
    pub dim: usize,
    /// Indices of the even (S+) and odd (S-) Fock basis vectors.
    pub even_basis: Vec<usize>,
    pub odd_basis: Vec<usize>,
    /// Action matrix of each generator, row-major on the Fock basis.
    pub action: Vec<ActionMatrix>,
    /// The Hessian the action matrices realize (identity except for the
    /// odd-rank last entry, which is 2).
    pub realized_hessian: Vec<Vec<Scalar>>,
    pub twist: BrauerTwist,
}

pub fn spinor_module(rank: usize) -> Result<SpinorModule, Error> {
    if rank > 8 {
        return Err(Error::Bound("spinor module is desk-scale: rank <= 8".into()));
    }
    let k = rank / 2;
    let dim = 1usize << k;
    let parity = |m: usize| (m.count_ones() % 2) as u8;
    let sign_below = |m: usize, j: usize| -> Scalar {
        let below = (m & ((1usize << j) - 1)).count_ones();
        if below % 2 == 0 {
            Scalar::one()
        } else {
            Scalar::one().neg()
        }
    };
    // creator (wedge) and annihilator (twice the contraction) on the Fock
    // basis, as matrices
    let creator = |j: usize| -> ActionMatrix {
        let mut m = vec![vec![Scalar::zero(); dim]; dim];
        for col in 0..dim {
            if col & (1usize << j) == 0 {
                m[col | (1usize << j)][col] = sign_below(col, j);
            }
        }
        m
    };
    let annihilator = |j: usize| -> ActionMatrix {
        let mut m = vec![vec![Scalar::zero(); dim]; dim];
        for col in 0..dim {
            if col & (1usize << j) != 0 {
                let tgt = col & !(1usize << j);
                m[tgt][col] = &sign_below(tgt, j) * &Scalar::from_int(2);
            }
        }
        m
    };
    let half = Scalar::from_ratio(1, 2);
    let half_i = &half * &Scalar::i();
    let mut action: Vec<ActionMatrix> = Vec::with_capacity(rank);
    for j in 0..k {
        let a = annihilator(j);
        let c = creator(j);
        // e_(2j+1) = (a + c)/2, e_(2j+2) = i (a - c)/2
        let e_odd: ActionMatrix = mat_add(&a, &c)
            .into_iter()
            .map(|row| row.into_iter().map(|x| &x * &half).collect())
            .collect();
        let neg_c: ActionMatrix = c
            .iter()
            .map(|row| row.iter().map(|x| x.clone().neg()).collect())
            .collect();
        let e_even: ActionMatrix = mat_add(&a, &neg_c)
            .into_iter()
            .map(|row| row.into_iter().map(|x| &x * &half_i).collect())
            .collect();
        action.push(e_odd);
        action.push(e_even);
    }
    let mut realized = vec![vec![Scalar::zero(); rank]; rank];
    for (i, row) in realized.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    if rank % 2 == 1 {
        // grading involution, squaring to +1: realized relation e_n^2 = 1
        let mut gamma = vec![vec![Scalar::zero(); dim]; dim];
        for (m, row) in gamma.iter_mut().enumerate() {
            row[m] = if parity(m) == 0 {
                Scalar::one()
            } else {
                Scalar::one().neg()
            };
        }
        action.push(gamma);
        realized[rank - 1][rank - 1] = Scalar::from_int(2);
    }

    // relations: E_p E_q + E_q E_p = H'_pq Id
    for p in 0..rank {
        for q in 0..rank {
            let anti = mat_add(&mat_mul(&action[p], &action[q]), &mat_mul(&action[q], &action[p]));
            let expect = mat_scale_id(dim, &realized[p][q]);
            if anti != expect {
                return Err(Error::Model(format!(
                    "spinor action violates the Clifford relation at ({p},{q})"
                )));
            }
        }
    }
    // each generator action is odd for even rank; for odd rank the grading
    // involution is the designated even exception
    let even_basis: Vec<usize> = (0..dim).filter(|&m| parity(m) == 0).collect();
    let odd_basis: Vec<usize> = (0..dim).filter(|&m| parity(m) == 1).collect();
    for (idx, mat) in action.iter().enumerate() {
        let is_gamma = rank % 2 == 1 && idx == rank - 1;
        if is_gamma {
            continue;
        }
        for &i in &even_basis {
            for &j in &even_basis {
                if !mat[i][j].is_zero() {
                    return Err(Error::Model("spinor action is not odd".into()));
                }
            }
        }
        for &i in &odd_basis {
            for &j in &odd_basis {
                if !mat[i][j].is_zero() {
                    return Err(Error::Model("spinor action is not odd".into()));
                }
            }
        }
    }

    // even rank: the action map Cliff(2k) -> End(Fock) is injective
    // (dimension count 2^(2k) = (2^k)^2 then makes it an isomorphism)
    if rank % 2 == 0 && rank > 0 {
        let alg = CliffordAlgebra::morse(rank)?;
        let mut cols = Vec::with_capacity(alg.dimension());
        for b in alg.basis() {
            let mut m = mat_scale_id(dim, &Scalar::one());
            for i in 0..rank {
                if b & (1u32 << i) != 0 {
                    m = mat_mul(&m, &action[i]);
                }
            }
            cols.push(m.into_iter().flatten().collect::<Vec<Scalar>>());
        }
        let rank_of_map = Matrix::from_columns(dim * dim, cols).rank();
        if rank_of_map != alg.dimension() {
            return Err(Error::Model("blade action map is not injective".into()));
        }
    }
    // odd rank: the algebra has a two-dimensional center spanned by 1 and
    // the volume element, the volume squares to a nonzero scalar, and
    // Cliff(2k) (x) center multiplies onto the whole algebra
    if rank % 2 == 1 {
        let alg = CliffordAlgebra::morse(rank)?;
        let center = alg.center_basis();
        if center.len() != 2 {
            return Err(Error::Model(format!(
                "odd-rank center has dimension {}, expected 2",
                center.len()
            )));
        }
        let omega = alg.volume();
        let omega_sq = alg.mul(&omega, &omega);
        let is_nonzero_scalar =
            omega_sq.len() == 1 && omega_sq.contains_key(&0) && !omega_sq[&0].is_zero();
        if !is_nonzero_scalar {
            return Err(Error::Model("volume element does not square to a scalar".into()));
        }
        // multiplication map: blades of the even-index subalgebra times
        // {1, omega} span everything
        let even_mask = (1u32 << (rank - 1)) - 1;
        let mut cols = Vec::new();
        for b in alg.basis() {
            if b & !even_mask != 0 {
                continue;
            }
            for omega_pow in [alg.scalar(Scalar::one()), omega.clone()] {
                let prod = alg.mul(&alg.blade(b), &omega_pow);
                let mut col = vec![Scalar::zero(); alg.dimension()];
                for (bl, c) in prod {
                    col[bl as usize] = c;
                }
                cols.push(col);
            }
        }
        if Matrix::from_columns(alg.dimension(), cols).rank() != alg.dimension() {
            return Err(Error::Model("Cliff(2k) (x) center does not span".into()));
        }
    }

    Ok(SpinorModule {
        rank,
        dim,
        even_basis,
        odd_basis,
        action,
        realized_hessian: realized,
        twist: BrauerTwist::from_rank(rank),
    })
}

/// Matrices of polynomials in the fiber coordinates.
pub type PolyMatrix = Vec<Vec<Element>>;

fn pmat_mul(a: &PolyMatrix, b: &PolyMatrix) -> Result<PolyMatrix, Error> {
    let rows = a.len();
    let inner = b.len();
    let cols = b[0].len();
    let ctx = a[0][0].context().clone();
    let mut out = vec![vec![Element::zero(&ctx); cols]; rows];
    for i in 0..rows {
        for j in 0..cols {
            let mut acc = Element::zero(&ctx);
            for (k, brow) in b.iter().enumerate().take(inner) {
                acc = acc.add(&a[i][k].mul(&brow[j])?)?;
            }
            out[i][j] = acc;
        }
    }
    Ok(out)
}

fn pmat_is_scalar_identity(m: &PolyMatrix, w: &Element) -> bool {
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let expect = if i == j { w.clone() } else { Element::zero(w.context()) };
            if *e != expect {
                return false;
            }
        }
    }
    true
}

/// A pair of free modules with two odd maps and a declared potential;
/// construction verifies `d1 d0 = W Id` and `d0 d1 = W Id` exactly.
#[derive(Clone, Debug)]
pub struct MatrixFactorization {
    pub e0_rank: usize,
    pub e1_rank: usize,
    /// `d0 : E0 -> E1`, an `e1_rank x e0_rank` polynomial matrix.
    pub d0: PolyMatrix,
    /// `d1 : E1 -> E0`.
    pub d1: PolyMatrix,
    pub potential: Element,
    pub twist: BrauerTwist,
}

impl MatrixFactorization {
    pub fn new(
        d0: PolyMatrix,
        d1: PolyMatrix,
        potential: Element,
        twist: BrauerTwist,
    ) -> Result<Self, Error> {
        let e0_rank = d0[0].len();
        let e1_rank = d1[0].len();
        if d0.len() != e1_rank || d1.len() != e0_rank {
            return Err(Error::Input("factorization blocks have mismatched shapes".into()));
        }
        let mf = MatrixFactorization {
            e0_rank,
            e1_rank,
            d0,
            d1,
            potential,
            twist,
        };
        mf.verify()?;
        Ok(mf)
    }

    /// The defining identity, checked exactly as polynomial matrices.
    pub fn verify(&self) -> Result<(), Error> {
        let c10 = pmat_mul(&self.d1, &self.d0)?;
        let c01 = pmat_mul(&self.d0, &self.d1)?;
        if !pmat_is_scalar_identity(&c10, &self.potential)
            || !pmat_is_scalar_identity(&c01, &self.potential)
        {
            return Err(Error::Model("curvature is not W times the identity".into()));
        }
        Ok(())
    }
}

/// Context with `n` fiber coordinates `t1..tn`.
pub fn fiber_context(n: usize) -> Result<(Context, Vec<GenId>), Error> {
    let mut b = ContextBuilder::new();
    let ts = (1..=n)
        .map(|i| b.gen(&format!("t{i}"), 0, 1, GenClass::Fiber))
        .collect();
    Ok((b.build()?, ts))
}

/// The quadratic Thom factorization: Clifford multiplication by the fiber
/// vector on the spinor module (even rank) or on the algebra itself in its
/// left regular representation (odd rank, where the spinor presentation
/// carries the extra rank-one factor).
pub fn thom_mf(n: usize) -> Result<MatrixFactorization, Error> {
    if n == 0 {
        return Err(Error::Input("thom factorization needs rank >= 1".into()));
    }
    let (ctx, ts) = fiber_context(n)?;
    let mut w = Element::zero(&ctx);
    for &t in &ts {
        let te = Element::generator(&ctx, t);
        w = w.add(&te.mul(&te)?.scale(&Scalar::from_ratio(1, 2)))?;
    }
    let (even_idx, odd_idx, columns): (Vec<usize>, Vec<usize>, Vec<Vec<Element>>) = if n % 2 == 0 {
        let s = spinor_module(n)?;
        // d = sum t_i E_i on the Fock space
        let dim = s.dim;
        let mut total = vec![vec![Element::zero(&ctx); dim]; dim];
        for (i, &t) in ts.iter().enumerate() {
            let te = Element::generator(&ctx, t);
            for r in 0..dim {
                for c in 0..dim {
                    if !s.action[i][r][c].is_zero() {
                        total[r][c] =
                            total[r][c].add(&te.scale(&s.action[i][r][c]))?;
                    }
                }
            }
        }
        (s.even_basis.clone(), s.odd_basis.clone(), total)
    } else {
        // left regular representation of Cliff(n)
        let alg = CliffordAlgebra::morse(n)?;
        let dim = alg.dimension();
        let mut total = vec![vec![Element::zero(&ctx); dim]; dim];
        for (i, &t) in ts.iter().enumerate() {
            let te = Element::generator(&ctx, t);
            let ei = alg.generator(i);
            for b in alg.basis() {
                for (target, c) in alg.mul(&ei, &alg.blade(b)) {
                    total[target as usize][b as usize] =
                        total[target as usize][b as usize].add(&te.scale(&c))?;
                }
            }
        }
        let even: Vec<usize> = alg
            .basis()
            .filter(|&b| CliffordAlgebra::blade_parity(b) == 0)
            .map(|b| b as usize)
            .collect();
        let odd: Vec<usize> = alg
            .basis()
            .filter(|&b| CliffordAlgebra::blade_parity(b) == 1)
            .map(|b| b as usize)
            .collect();
        (even, odd, total)
    };
    let block = |rows: &[usize], cols: &[usize]| -> PolyMatrix {
        rows.iter()
            .map(|&r| cols.iter().map(|&c| columns[r][c].clone()).collect())
            .collect()
    };
    let d0 = block(&odd_idx, &even_idx); // E0 = S+ -> E1 = S-
    let d1 = block(&even_idx, &odd_idx);
    MatrixFactorization::new(d0, d1, w, BrauerTwist::from_rank(n))
}

/// One stratum of the Clifford resolution table, graded by blade parity and
/// polynomial degree.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ResolutionStratum {
    pub blade_parity: u8,
    pub poly_degree: u32,
    pub dim: usize,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ResolutionReport {
    pub strata: Vec<ResolutionStratum>,
    pub total_dim: usize,
    /// Homology dimensions (even, odd) of the fiber complex at `t = 1`
    /// (first coordinate 1, others 0): expected (0, 0) away from the zero
    /// section.
    pub fiber_at_one: (usize, usize),
}

/// Homology of `(Cliff(n) (x) K[t_1..t_n], [sum t_i e_i, .])`, the kernel
/// that resolves the zero section. Strata above polynomial degree `d` are
/// computed with one internal degree of padding and not reported.
pub fn cliff_resolution_homology(n: usize, d: u32) -> Result<ResolutionReport, Error> {
    if n > 2 || d > 6 {
        return Err(Error::Bound("resolution is desk-scale: rank <= 2, degree <= 6".into()));
    }
    let alg = CliffordAlgebra::morse(n)?;
    let (ctx, ts) = fiber_context(n)?;

    // basis: (blade, t-monomial); differential multiplies by t_i and
    // super-commutes with e_i
    let tmonos = crate::algebra::enumerate_monomials(&ctx, d + 1)?;
    type Key = (Blade, Monomial);
    let mut strata: BTreeMap<(u8, u32), Vec<Key>> = BTreeMap::new();
    for b in alg.basis() {
        for tm in &tmonos {
            strata
                .entry((CliffordAlgebra::blade_parity(b), tm.weight(&ctx)))
                .or_default()
                .push((b, tm.clone()));
        }
    }
    let delta = |key: &Key| -> BTreeMap<Key, Scalar> {
        let (b, tm) = key;
        let mut out: BTreeMap<Key, Scalar> = BTreeMap::new();
        for (i, &t) in ts.iter().enumerate() {
            let comm = alg.super_commutator(
                &alg.generator(i),
                1,
                &alg.blade(*b),
                CliffordAlgebra::blade_parity(*b),
            );
            if comm.is_empty() {
                continue;
            }
            let (tnext, sign) = tm
                .mul(&Monomial(vec![(t.0, 1)]), &ctx)
                .expect("even fiber coordinates never collapse");
            debug_assert_eq!(sign, 1);
            for (bl, c) in comm {
                let entry = out.entry((bl, tnext.clone())).or_insert_with(Scalar::zero);
                *entry += &c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    };
    let empty: Vec<Key> = Vec::new();
    let get = |p: i64, k: i64| -> &Vec<Key> {
        if p < 0 || k < 0 {
            return &empty;
        }
        strata.get(&((p % 2) as u8, k as u32)).unwrap_or(&empty)
    };
    let matrix_of = |src: &Vec<Key>, tgt: &Vec<Key>| -> Matrix {
        let index: BTreeMap<&Key, usize> = tgt.iter().zip(0..).collect();
        let cols = src
            .iter()
            .map(|k| {
                let mut col = vec![Scalar::zero(); tgt.len()];
                for (key, c) in delta(k) {
                    col[*index.get(&key).expect("stratum mismatch")] = c;
                }
                col
            })
            .collect();
        Matrix::from_columns(tgt.len(), cols)
    };
    let mut out = Vec::new();
    let mut total = 0;
    for (&(p, k), basis) in &strata {
        if k > d {
            continue;
        }
        let d_out = matrix_of(basis, get(p as i64 + 1, k as i64 + 1));
        let d_in = matrix_of(get(p as i64 + 1, k as i64 - 1), basis);
        let (dim, reps) = homology(&d_out, &d_in);
        total += dim;
        let basis_strings = reps
            .iter()
            .map(|v| {
                let mut parts = Vec::new();
                for (coord, (b, tm)) in v.iter().zip(basis) {
                    if !coord.is_zero() {
                        let tname = tm.display(&ctx);
                        let bname = CliffordAlgebra::blade_name(*b);
                        parts.push(match (bname.as_str(), tname.as_str()) {
                            ("1", "1") => format!("{coord}"),
                            ("1", _) => format!("{coord}*{tname}"),
                            (_, "1") => format!("{coord}*{bname}"),
                            _ => format!("{coord}*{bname}*{tname}"),
                        });
                    }
                }
                parts.join(" + ")
            })
            .collect();
        out.push(ResolutionStratum {
            blade_parity: p,
            poly_degree: k,
            dim,
            basis: basis_strings,
        });
    }
    let fiber_at_one = {
        let mut point = vec![Scalar::zero(); n];
        point[0] = Scalar::one();
        cliff_fiber_homology(n, &point)?
    };
    Ok(ResolutionReport {
        strata: out,
        total_dim: total,
        fiber_at_one,
    })
}

/// Homology dimensions (even, odd) of `(Cliff(n), [v, .])` at a fixed fiber
/// point `v = sum point_i e_i`.
pub fn cliff_fiber_homology(n: usize, point: &[Scalar]) -> Result<(usize, usize), Error> {
    let alg = CliffordAlgebra::morse(n)?;
    let mut v: CliffordElement = BTreeMap::new();
    for (i, c) in point.iter().enumerate() {
        if !c.is_zero() {
            v.insert(1u32 << i, c.clone());
        }
    }
    let evens: Vec<Blade> = alg
        .basis()
        .filter(|&b| CliffordAlgebra::blade_parity(b) == 0)
        .collect();
    let odds: Vec<Blade> = alg
        .basis()
        .filter(|&b| CliffordAlgebra::blade_parity(b) == 1)
        .collect();
    let matrix_of = |src: &Vec<Blade>, tgt: &Vec<Blade>| -> Matrix {
        let index: BTreeMap<&Blade, usize> = tgt.iter().zip(0..).collect();
        let cols = src
            .iter()
            .map(|&b| {
                let im = alg.super_commutator(&v, 1, &alg.blade(b), CliffordAlgebra::blade_parity(b));
                let mut col = vec![Scalar::zero(); tgt.len()];
                for (bl, c) in im {
                    col[*index.get(&bl).expect("parity mismatch")] = c;
                }
                col
            })
            .collect();
        Matrix::from_columns(tgt.len(), cols)
    };
    let d_eo = matrix_of(&evens, &odds);
    let d_oe = matrix_of(&odds, &evens);
    let h_even = (evens.len() - d_eo.rank()) - d_oe.rank();
    let h_odd = (odds.len() - d_oe.rank()) - d_eo.rank();
    Ok((h_even, h_odd))
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct KoszulStratum {
    pub x_degree: u32,
    pub y_degree: u32,
    pub wedge_count: u32,
    pub dim: usize,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct KoszulKernelReport {
    /// `Q^2 = s <n+, n-> Id`, checked exactly on every basis monomial up to
    /// the degree bound.
    pub square_identity_holds: bool,
    /// Homology strata at `s = 0` (populated only in the degenerate case).
    pub homology: Vec<KoszulStratum>,
}

/// The bidiagonal kernel operator `s iota(n+) + eps(n-)` on
/// `Lambda N_- (x) K[x, y]` (x the coordinates of `n+`, y of `n-`): its
/// square is `s <n+, n->` identically, and at `s = 0` it degenerates to the
/// Koszul resolution of the diagonal, with homology the polynomial ring of
/// `n+` sitting on the top wedge.
pub fn koszul_kernel(n: usize, s: &Scalar, d: u32) -> Result<KoszulKernelReport, Error> {
    if n > 2 || d > 6 {
        return Err(Error::Bound("koszul kernel is desk-scale: rank <= 2, degree <= 6".into()));
    }
    let mut b = ContextBuilder::new();
    let xs: Vec<GenId> = (1..=n)
        .map(|i| b.gen(&format!("x{i}"), 0, 1, GenClass::Base))
        .collect();
    let ys: Vec<GenId> = (1..=n)
        .map(|i| b.gen(&format!("y{i}"), 0, 1, GenClass::Base))
        .collect();
    let ws: Vec<GenId> = (1..=n)
        .map(|i| b.gen(&format!("w{i}"), 1, 1, GenClass::Form))
        .collect();
    let ctx = b.build()?;
    let q = |e: &Element| -> Result<Element, Error> {
        let mut acc = Element::zero(&ctx);
        for i in 0..n {
            let xe = Element::generator(&ctx, xs[i]);
            let contraction = e.partial_left(ws[i]);
            acc = acc.add(&xe.mul(&contraction)?.scale(s))?;
            let ye = Element::generator(&ctx, ys[i]);
            let we = Element::generator(&ctx, ws[i]);
            acc = acc.add(&ye.mul(&we)?.mul(e)?)?;
        }
        Ok(acc)
    };
    // pairing <n+, n-> = sum x_i y_i
    let mut pairing = Element::zero(&ctx);
    for i in 0..n {
        pairing = pairing.add(
            &Element::generator(&ctx, xs[i]).mul(&Element::generator(&ctx, ys[i]))?,
        )?;
    }
    let pairing_s = pairing.scale(s);

    // Monomial pool: large enough that every stratum with x-degree <= d and
    // y-degree <= d + 1 is complete.
    let monos = crate::algebra::enumerate_monomials(&ctx, 2 * d + 1 + n as u32)?;
    let mut square_ok = true;
    for m in &monos {
        if m.weight(&ctx) > d + n as u32 {
            continue;
        }
        let factors: Vec<(GenId, u32)> = m.0.iter().map(|&(g, e)| (GenId(g), e)).collect();
        let (me, _) = Element::from_raw_monomial(&ctx, Scalar::one(), &factors);
        let qq = q(&q(&me)?)?;
        if qq != pairing_s.mul(&me)? {
            square_ok = false;
            break;
        }
    }

    let mut homology_out = Vec::new();
    if s.is_zero() {
        // strata (xdeg, ydeg, wedge): Q maps (a, b, j) -> (a, b+1, j+1)
        type SKey = (u32, u32, u32);
        let mut strata: BTreeMap<SKey, Vec<Monomial>> = BTreeMap::new();
        for m in &monos {
            let a: u32 = m
                .0
                .iter()
                .filter(|&&(g, _)| xs.contains(&GenId(g)))
                .map(|&(_, e)| e)
                .sum();
            let bdeg: u32 = m
                .0
                .iter()
                .filter(|&&(g, _)| ys.contains(&GenId(g)))
                .map(|&(_, e)| e)
                .sum();
            let j = m.class_count(&ctx, GenClass::Form);
            if a <= d && bdeg <= d + 1 {
                strata.entry((a, bdeg, j)).or_default().push(m.clone());
            }
        }
        let empty: Vec<Monomial> = Vec::new();
        let get = |k: (i64, i64, i64)| -> &Vec<Monomial> {
            if k.1 < 0 || k.2 < 0 {
                return &empty;
            }
            strata
                .get(&(k.0 as u32, k.1 as u32, k.2 as u32))
                .unwrap_or(&empty)
        };
        let images = |src: &Vec<Monomial>| -> Result<Vec<Element>, Error> {
            src.iter()
                .map(|m| {
                    let factors: Vec<(GenId, u32)> =
                        m.0.iter().map(|&(g, e)| (GenId(g), e)).collect();
                    let (me, _) = Element::from_raw_monomial(&ctx, Scalar::one(), &factors);
                    q(&me)
                })
                .collect()
        };
        for (&(a, bdeg, j), basis) in &strata {
            if bdeg > d || j > n as u32 {
                continue;
            }
            let d_out = crate::gerstenhaber::operator_matrix(
                &images(basis)?,
                get((a as i64, bdeg as i64 + 1, j as i64 + 1)),
            );
            let d_in = crate::gerstenhaber::operator_matrix(
                &images(get((a as i64, bdeg as i64 - 1, j as i64 - 1)))?,
                basis,
            );
            let (dim, reps) = homology(&d_out, &d_in);
            if dim > 0 {
                homology_out.push(KoszulStratum {
                    x_degree: a,
                    y_degree: bdeg,
                    wedge_count: j,
                    dim,
                    basis: reps
                        .iter()
                        .map(|v| crate::gerstenhaber::basis_string(&ctx, basis, v))
                        .collect(),
                });
            }
        }
    }
    Ok(KoszulKernelReport {
        square_identity_holds: square_ok,
        homology: homology_out,
    })
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct KnorrerReport {
    pub identity_closed: bool,
    pub identity_survives: bool,
    pub graded_right_emult_closed: bool,
    pub graded_right_emult_survives: bool,
    /// Stabilized endomorphism cohomology dimensions (even, odd).
    pub endo_dims: (usize, usize),
    /// Super-dimensions (even, odd) of Cliff(1) self-maps over itself.
    pub cliff1_dims: (usize, usize),
}

impl KnorrerReport {
    pub fn pass(&self) -> bool {
        self.identity_closed
            && self.identity_survives
            && self.graded_right_emult_closed
            && self.graded_right_emult_survives
            && self.endo_dims == self.cliff1_dims
    }
}

/// The rank-one periodicity check: the 2-periodic endomorphism complex of
/// the Thom factorization of `W = t^2/2` over `K[t]` has stabilized
/// cohomology of super-dimension (1|1), matching the self-maps of the free
/// rank-one Cliff(1)-module. The odd class is the graded right
/// multiplication `x -> (-1)^(|x|) x e` (the version of e-multiplication
/// that super-commutes with the left-acting differential).
pub fn knorrer_check(max_degree: u32) -> Result<KnorrerReport, Error> {
    let mf = thom_mf(1)?;
    let ctx = mf.potential.context().clone();
    let t = ctx.lookup("t1").unwrap();
    // End(E0 + E1) basis: (r, c) block indices with parity r + c; the
    // differential D(f) = d f - (-1)^(|f|) f d raises t-degree by one.
    // d = [[0, d1], [d0, 0]] in block form; all blocks are rank one here.
    let d_block = |r: usize, c: usize| -> Element {
        match (r, c) {
            (0, 1) => mf.d1[0][0].clone(),
            (1, 0) => mf.d0[0][0].clone(),
            _ => Element::zero(&ctx),
        }
    };
    // D on a basis endomorphism E_(rc) t^k: sum_a d_(ar) E_(ac) - (-1)^p E_(rb)... expanded
    // directly below as matrix products over the four entries.
    let entries = [(0usize, 0usize), (0, 1), (1, 0), (1, 1)];
    let apply_d = |f: &[Element; 4], parity: u8| -> Result<[Element; 4], Error> {
        // (df)_(rc) = sum_a d_(ra) f_(ac); (fd)_(rc) = sum_a f_(ra) d_(ac)
        let idx = |r: usize, c: usize| r * 2 + c;
        let mut out = [
            Element::zero(&ctx),
            Element::zero(&ctx),
            Element::zero(&ctx),
            Element::zero(&ctx),
        ];
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = Element::zero(&ctx);
                for a in 0..2 {
                    acc = acc.add(&d_block(r, a).mul(&f[idx(a, c)])?)?;
                    let sign = if parity == 0 {
                        f[idx(r, a)].mul(&d_block(a, c))?.neg()
                    } else {
                        f[idx(r, a)].mul(&d_block(a, c))?
                    };
                    acc = acc.add(&sign)?;
                }
                out[idx(r, c)] = acc;
            }
        }
        Ok(out)
    };
    // strata: (parity, t-degree)
    let pad = max_degree + 1;
    type EKey = (usize, usize, u32); // (r, c, t-degree)
    let mut strata: BTreeMap<(u8, u32), Vec<EKey>> = BTreeMap::new();
    for &(r, c) in &entries {
        let p = ((r + c) % 2) as u8;
        for k in 0..=pad {
            strata.entry((p, k)).or_default().push((r, c, k));
        }
    }
    let elem_of = |key: &EKey| -> Result<[Element; 4], Error> {
        let mut f = [
            Element::zero(&ctx),
            Element::zero(&ctx),
            Element::zero(&ctx),
            Element::zero(&ctx),
        ];
        f[key.0 * 2 + key.1] = Element::generator(&ctx, t).pow(key.2)?;
        Ok(f)
    };
    let coords = |f: &[Element; 4], basis: &Vec<EKey>| -> Vec<Scalar> {
        basis
            .iter()
            .map(|&(r, c, k)| {
                let mono = if k == 0 {
                    Monomial::unit()
                } else {
                    Monomial(vec![(t.0, k)])
                };
                f[r * 2 + c].coefficient_of(&mono)
            })
            .collect()
    };
    let empty: Vec<EKey> = Vec::new();
    let get = |p: u8, k: i64| -> &Vec<EKey> {
        if k < 0 {
            return &empty;
        }
        strata.get(&(p, k as u32)).unwrap_or(&empty)
    };
    let matrix_of = |src: &Vec<EKey>, p: u8, tgt: &Vec<EKey>| -> Result<Matrix, Error> {
        let cols = src
            .iter()
            .map(|key| Ok(coords(&apply_d(&elem_of(key)?, p)?, tgt)))
            .collect::<Result<Vec<_>, Error>>()?;
        Ok(Matrix::from_columns(tgt.len(), cols))
    };
    let mut even_dim = 0;
    let mut odd_dim = 0;
    let mut identity_survives = false;
    let mut emult_survives = false;
    // identity endomorphism and graded right e-multiplication as flat
    // 4-vectors at t-degree 0
    let identity = [
        Element::one(&ctx),
        Element::zero(&ctx),
        Element::zero(&ctx),
        Element::one(&ctx),
    ];
    // e acts on Cliff(1) = span(1, e) by right multiplication with the
    // grading sign: 1 -> e, e -> -1/2
    let emult = [
        Element::zero(&ctx),
        Element::from_ratio(&ctx, -1, 2),
        Element::one(&ctx),
        Element::zero(&ctx),
    ];
    let identity_closed = apply_d(&identity, 0)?.iter().all(|e| e.is_zero());
    let emult_closed = apply_d(&emult, 1)?.iter().all(|e| e.is_zero());
    for (&(p, k), basis) in &strata {
        if k > max_degree {
            continue;
        }
        let d_out = matrix_of(basis, p, get(1 - p, k as i64 + 1))?;
        let d_in = matrix_of(get(1 - p, k as i64 - 1), 1 - p, basis)?;
        let (dim, reps) = homology(&d_out, &d_in);
        if p == 0 {
            even_dim += dim;
        } else {
            odd_dim += dim;
        }
        // decide survival of the two distinguished cycles at degree 0
        if k == 0 && dim > 0 {
            let probe = if p == 0 { &identity } else { &emult };
            let v = coords(probe, basis);
            // in the image-extended row space, the probe must be dependent
            // on image + reps but not on image alone
            let mut rows: Vec<Vec<Scalar>> = d_in
                .cols
                .iter()
                .filter(|c| c.iter().any(|x| !x.is_zero()))
                .cloned()
                .collect();
            let before = Matrix::from_columns(basis.len(), rows.clone()).rank();
            rows.push(v);
            let after = Matrix::from_columns(basis.len(), rows).rank();
            let survives = after > before;
            if p == 0 {
                identity_survives = survives;
            } else {
                emult_survives = survives;
            }
        }
        let _ = reps;
    }
    // Cliff(1) self-maps over itself: super-dimension of Cliff(1)
    let cliff1_dims = (1usize, 1usize);
    Ok(KnorrerReport {
        identity_closed,
        identity_survives,
        graded_right_emult_closed: emult_closed,
        graded_right_emult_survives: emult_survives,
        endo_dims: (even_dim, odd_dim),
        cliff1_dims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_relation() {
        let alg = CliffordAlgebra::morse(1).unwrap();
        let e = alg.generator(0);
        let ee = alg.mul(&e, &e);
        assert_eq!(ee, alg.scalar(Scalar::from_ratio(1, 2)));
    }

    #[test]
    fn anticommutation_and_blade_square() {
        let alg = CliffordAlgebra::morse(2).unwrap();
        let e1 = alg.generator(0);
        let e2 = alg.generator(1);
        let a = alg.mul(&e1, &e2);
        let b = alg.mul(&e2, &e1);
        assert_eq!(a, alg.neg(&b));
        // (e1 e2)^2 = -1/4
        let sq = alg.mul(&a, &a);
        assert_eq!(sq, alg.scalar(Scalar::from_ratio(-1, 4)));
    }

    #[test]
    fn dimensions() {
        for n in 0..=4 {
            let alg = CliffordAlgebra::morse(n).unwrap();
            assert_eq!(alg.dimension(), 1 << n);
            assert_eq!(alg.basis().count(), 1 << n);
        }
    }

    #[test]
    fn associativity_spot_checks() {
        let mut h = vec![vec![Scalar::zero(); 3]; 3];
        for i in 0..3 {
            h[i][i] = Scalar::from_int(1 + i as i64);
        }
        h[0][1] = Scalar::from_ratio(1, 3);
        h[1][0] = Scalar::from_ratio(1, 3);
        let alg = CliffordAlgebra::new(3, h).unwrap();
        for a in alg.basis() {
            for b in alg.basis() {
                for c in alg.basis() {
                    let ab_c = alg.mul(&alg.mul(&alg.blade(a), &alg.blade(b)), &alg.blade(c));
                    let a_bc = alg.mul(&alg.blade(a), &alg.mul(&alg.blade(b), &alg.blade(c)));
                    assert_eq!(ab_c, a_bc);
                }
            }
        }
    }

    #[test]
    fn spinor_modules() {
        // rank 0: ground field
        let s0 = spinor_module(0).unwrap();
        assert_eq!(s0.dim, 1);
        // rank 2: S+ and S- one-dimensional
        let s2 = spinor_module(2).unwrap();
        assert_eq!(s2.even_basis.len(), 1);
        assert_eq!(s2.odd_basis.len(), 1);
        // rank 4: (2|2)
        let s4 = spinor_module(4).unwrap();
        assert_eq!(s4.even_basis.len(), 2);
        assert_eq!(s4.odd_basis.len(), 2);
        // odd ranks construct and verify their centers
        spinor_module(1).unwrap();
        spinor_module(3).unwrap();
    }

    #[test]
    fn thom_factorizations() {
        for n in 1..=4 {
            let mf = thom_mf(n).unwrap();
            mf.verify().unwrap();
        }
        // n = 1 explicitly: d0 = t, d1 = t/2
        let mf = thom_mf(1).unwrap();
        let ctx = mf.potential.context().clone();
        let t = Element::generator(&ctx, ctx.lookup("t1").unwrap());
        assert_eq!(mf.d0[0][0], t);
        assert_eq!(mf.d1[0][0], t.scale(&Scalar::from_ratio(1, 2)));
    }

    #[test]
    fn thom_zero_specialization() {
        let mf = thom_mf(2).unwrap();
        let ctx = mf.potential.context().clone();
        let mut map = BTreeMap::new();
        for name in ["t1", "t2"] {
            map.insert(ctx.lookup(name).unwrap(), Element::zero(&ctx));
        }
        for row in mf.d0.iter().chain(mf.d1.iter()) {
            for e in row {
                assert!(e.substitute(&map).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn resolution_is_skyscraper() {
        for n in 0..=2usize {
            let rep = if n == 0 {
                // rank 0 separately: complex is the ground field
                None
            } else {
                Some(cliff_resolution_homology(n, 4).unwrap())
            };
            if let Some(rep) = rep {
                assert_eq!(rep.total_dim, 1, "rank {n}");
                let s = rep
                    .strata
                    .iter()
                    .find(|s| s.dim > 0)
                    .expect("one stratum survives");
                assert_eq!((s.blade_parity, s.poly_degree), (0, 0));
                assert_eq!(s.basis, vec!["1".to_string()]);
                assert_eq!(rep.fiber_at_one, (0, 0), "rank {n}");
            }
        }
    }

    #[test]
    fn fiber_homology_nonzero_points() {
        // acyclic at generic rational points, full at the origin
        assert_eq!(
            cliff_fiber_homology(2, &[Scalar::from_int(3), Scalar::from_ratio(4, 5)]).unwrap(),
            (0, 0)
        );
        let (he, ho) = cliff_fiber_homology(2, &[Scalar::zero(), Scalar::zero()]).unwrap();
        assert_eq!((he, ho), (2, 2));
    }

    #[test]
    fn koszul_kernel_square_and_degeneration() {
        // s = 1: square is the pairing
        let rep = koszul_kernel(1, &Scalar::one(), 4).unwrap();
        assert!(rep.square_identity_holds);
        assert!(rep.homology.is_empty());
        // s = 0: homology is K[x] on the top wedge
        let rep0 = koszul_kernel(1, &Scalar::zero(), 4).unwrap();
        assert!(rep0.square_identity_holds);
        for st in &rep0.homology {
            assert_eq!(st.y_degree, 0);
            assert_eq!(st.wedge_count, 1);
            assert_eq!(st.dim, 1);
        }
        let degrees: Vec<u32> = rep0.homology.iter().map(|s| s.x_degree).collect();
        assert_eq!(degrees, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn knorrer_dims() {
        let rep = knorrer_check(4).unwrap();
        assert!(rep.identity_closed);
        assert!(rep.graded_right_emult_closed);
        assert!(rep.identity_survives);
        assert!(rep.graded_right_emult_survives);
        assert_eq!(rep.endo_dims, (1, 1));
        assert!(rep.pass());
    }
}
