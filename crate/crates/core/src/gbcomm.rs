//! Commutative Groebner engine over Q: Buchberger with the Gebauer-Moeller
//! pair criteria, normal forms, elimination, Krull dimension of quotients,
//! syzygy presentations, signed maximal minors and bigraded Hilbert slice
//! counting.
//!
//! The engine works uniformly over free-module monomials (component + mono);
//! ideals are the one-component case. Basis elements are kept monic and the
//! output is always a reduced Groebner basis, so results are deterministic.

use crate::corepoly::{monomials_of_bidegree, BiDeg, Mono, MonoOrder, Poly, Rat, Ring};
use crate::error::{Error, Result};
use crate::RunCtl;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeSet;

// ---------------------------------------------------------------------------
// Module monomials and ordered vector-polynomials
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ModMono {
    pub comp: u32,
    pub mono: Mono,
}

/// Position-over-term order: components ranked by `rank` (lower rank wins),
/// ties broken by `inner` on the monomial part.
#[derive(Clone, Debug)]
pub(crate) struct ModOrder {
    pub inner: MonoOrder,
    /// rank[comp] = priority; smaller rank means the component is larger.
    pub rank: Vec<u32>,
}

impl ModOrder {
    pub fn ring(inner: MonoOrder) -> Self {
        ModOrder {
            inner,
            rank: vec![0],
        }
    }

    pub fn cmp(&self, a: &ModMono, b: &ModMono) -> Ordering {
        if a.comp != b.comp {
            // smaller rank = higher priority = larger
            return self.rank[b.comp as usize].cmp(&self.rank[a.comp as usize]);
        }
        self.inner.compare(&a.mono, &b.mono)
    }
}

/// Vector polynomial with terms sorted descending under the active order.
#[derive(Clone, Debug)]
pub(crate) struct VPoly {
    pub terms: Vec<(ModMono, Rat)>,
}

impl VPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &(ModMono, Rat) {
        &self.terms[0]
    }

    pub fn sort(&mut self, ord: &ModOrder) {
        self.terms.sort_by(|(a, _), (b, _)| ord.cmp(b, a));
    }

    pub fn make_monic(&mut self) {
        if let Some((_, lc)) = self.terms.first() {
            if !lc.is_one() {
                let inv = lc.recip();
                for (_, c) in self.terms.iter_mut() {
                    *c *= &inv;
                }
            }
        }
    }

    /// self -= c * q * g, merging sorted term lists.
    pub fn sub_scaled(&mut self, c: &Rat, q: &Mono, g: &VPoly, ord: &ModOrder) {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut j = 0;
        while i < self.terms.len() && j < g.terms.len() {
            let gm = ModMono {
                comp: g.terms[j].0.comp,
                mono: g.terms[j].0.mono.mul(q),
            };
            match ord.cmp(&self.terms[i].0, &gm) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((gm, -(c * &g.terms[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = &self.terms[i].1 - c * &g.terms[j].1;
                    if !v.is_zero() {
                        out.push((gm, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        for (gm, gc) in &g.terms[j..] {
            out.push((
                ModMono {
                    comp: gm.comp,
                    mono: gm.mono.mul(q),
                },
                -(c * gc),
            ));
        }
        self.terms = out;
    }
}

/// Full normal form of `f` against `basis` (every term reduced). Basis
/// elements must be monic and sorted under `ord`.
pub(crate) fn vp_normal_form(
    f: &VPoly,
    basis: &[VPoly],
    ord: &ModOrder,
    skip: Option<usize>,
) -> VPoly {
    let mut work = f.clone();
    let mut rem: Vec<(ModMono, Rat)> = Vec::new();
    'outer: while !work.is_zero() {
        let (lm, lc) = work.lead().clone();
        for (k, g) in basis.iter().enumerate() {
            if Some(k) == skip || g.is_zero() {
                continue;
            }
            let gl = g.lead();
            if gl.0.comp == lm.comp {
                if let Some(q) = lm.mono.try_div(&gl.0.mono) {
                    work.sub_scaled(&lc, &q, g, ord);
                    continue 'outer;
                }
            }
        }
        rem.push(work.terms.remove(0));
    }
    VPoly { terms: rem }
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct GbOpts {
    /// For homogeneous input only: discard S-pairs of degree above this
    /// bound, producing a basis valid for all queries of degree <= bound.
    pub max_degree: Option<u32>,
    pub ctl: RunCtl,
}

/// Buchberger with Gebauer-Moeller criteria over free-module monomials.
/// Returns a reduced (auto-reduced, monic) basis, deterministically ordered.
pub(crate) fn vp_buchberger(
    gens: Vec<VPoly>,
    ord: &ModOrder,
    opts: &GbOpts,
) -> Result<Vec<VPoly>> {
    let single_component = ord.rank.len() == 1;
    let mut basis: Vec<VPoly> = Vec::new();
    for mut g in gens {
        g.sort(ord);
        if !g.is_zero() {
            g.make_monic();
            basis.push(g);
        }
    }
    // deterministic starting order
    basis.sort_by(|a, b| ord.cmp(&a.lead().0, &b.lead().0));

    // pair key: (lcm degree, component, lcm exponents, i, j) - deterministic
    type PairKey = (u32, u32, Vec<u32>, u32, u32);
    let mut pairs: BTreeSet<PairKey> = BTreeSet::new();
    let lcm_of = |a: &VPoly, b: &VPoly| -> Option<Mono> {
        let (la, lb) = (a.lead(), b.lead());
        if la.0.comp != lb.0.comp {
            return None;
        }
        Some(la.0.mono.lcm(&lb.0.mono))
    };
    let add_pairs_for = |basis: &[VPoly], t: usize, pairs: &mut BTreeSet<PairKey>| {
        // candidate new pairs (i, t)
        let mut cand: Vec<(usize, Mono)> = Vec::new();
        for i in 0..t {
            if let Some(l) = lcm_of(&basis[i], &basis[t]) {
                cand.push((i, l));
            }
        }
        // Gebauer-Moeller M criterion: drop (i,t) when another (j,t) has a
        // strictly smaller lcm dividing it
        let mut keep = vec![true; cand.len()];
        for (ci, (_, li)) in cand.iter().enumerate() {
            for (cj, (_, lj)) in cand.iter().enumerate() {
                if ci != cj && keep[cj] && lj.divides(li) && lj != li {
                    keep[ci] = false;
                    break;
                }
            }
        }
        // F criterion: among equal lcms keep the first
        for ci in 0..cand.len() {
            if !keep[ci] {
                continue;
            }
            for cj in (ci + 1)..cand.len() {
                if keep[cj] && cand[ci].1 == cand[cj].1 {
                    keep[cj] = false;
                }
            }
        }
        // B (product) criterion, valid for the ring case only
        for (ci, (i, l)) in cand.iter().enumerate() {
            if keep[ci]
                && single_component
                && basis[*i].lead().0.mono.gcd_is_one(&basis[t].lead().0.mono)
            {
                // coprime leads: S-pair reduces to zero; also discard any
                // pair with the same lcm
                debug_assert_eq!(*l, basis[*i].lead().0.mono.mul(&basis[t].lead().0.mono));
                keep[ci] = false;
            }
        }
        // prune old pairs via the chain criterion with the new lead
        let lt = &basis[t].lead().0;
        let old: Vec<PairKey> = pairs.iter().cloned().collect();
        for key in old {
            let (_, comp, lcm_e, i, j) = &key;
            if *comp != lt.comp {
                continue;
            }
            let lcm_m = Mono(lcm_e.clone());
            if lt.mono.divides(&lcm_m) {
                let li = lcm_of(&basis[*i as usize], &basis[t]);
                let lj = lcm_of(&basis[*j as usize], &basis[t]);
                if li.as_ref() != Some(&lcm_m) && lj.as_ref() != Some(&lcm_m) {
                    pairs.remove(&key);
                }
            }
        }
        for (ci, (i, l)) in cand.into_iter().enumerate() {
            if keep[ci] {
                pairs.insert((
                    l.total_degree(),
                    basis[t].lead().0.comp,
                    l.0.clone(),
                    i as u32,
                    t as u32,
                ));
            }
        }
    };

    for t in 0..basis.len() {
        add_pairs_for(&basis, t, &mut pairs);
    }

    let mut iter = 0usize;
    while let Some(key) = pairs.iter().next().cloned() {
        pairs.remove(&key);
        let (deg, comp, lcm_e, i, j) = key;
        iter += 1;
        if iter.is_multiple_of(32) {
            opts.ctl.check("groebner")?;
        }
        if let Some(maxd) = opts.max_degree {
            if deg > maxd {
                continue;
            }
        }
        let lcm = Mono(lcm_e);
        let (fi, fj) = (&basis[i as usize], &basis[j as usize]);
        let qi = lcm.try_div(&fi.lead().0.mono).unwrap();
        let qj = lcm.try_div(&fj.lead().0.mono).unwrap();
        // S = qi*fi - qj*fj (both monic)
        let mut s = VPoly {
            terms: fi
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        ModMono {
                            comp: m.comp,
                            mono: m.mono.mul(&qi),
                        },
                        c.clone(),
                    )
                })
                .collect(),
        };
        s.sub_scaled(&Rat::one(), &qj, fj, ord);
        debug_assert!(s.is_zero() || ord.cmp(&s.lead().0, &ModMono { comp, mono: lcm }) == Ordering::Less);
        let nf = vp_normal_form(&s, &basis, ord, None);
        if !nf.is_zero() {
            let mut nf = nf;
            nf.make_monic();
            basis.push(nf);
            let t = basis.len() - 1;
            add_pairs_for(&basis, t, &mut pairs);
        }
    }

    // minimalize: drop elements whose lead is divisible by another lead
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        for j in 0..basis.len() {
            if i != j && keep[j] {
                let (li, lj) = (basis[i].lead(), basis[j].lead());
                if li.0.comp == lj.0.comp
                    && lj.0.mono.divides(&li.0.mono)
                    && !(li.0.mono == lj.0.mono && j > i)
                {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    let kept: Vec<VPoly> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();
    // inter-reduce tails
    let mut reduced: Vec<VPoly> = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let mut nf = vp_normal_form(&kept[i], &kept, ord, Some(i));
        if !nf.is_zero() {
            nf.make_monic();
            reduced.push(nf);
        }
    }
    reduced.sort_by(|a, b| ord.cmp(&b.lead().0, &a.lead().0));
    Ok(reduced)
}

// ---------------------------------------------------------------------------
// Ideal-level interface
// ---------------------------------------------------------------------------

/// Reduced Groebner basis of an ideal, with cached leading monomials.
#[derive(Clone, Debug)]
pub struct IdealGB {
    ring: Ring,
    order: MonoOrder,
    basis: Vec<Poly>,
    lms: Vec<Mono>,
}

impl IdealGB {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> &MonoOrder {
        &self.order
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn leading_monomials(&self) -> &[Mono] {
        &self.lms
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis.len() == 1 && self.lms[0].is_one()
    }

    pub fn contains(&self, f: &Poly) -> Result<bool> {
        Ok(normal_form(f, self)?.is_zero())
    }
}

pub(crate) fn poly_to_vp(p: &Poly, ord: &ModOrder) -> VPoly {
    let mut v = VPoly {
        terms: p
            .terms()
            .map(|(m, c)| {
                (
                    ModMono {
                        comp: 0,
                        mono: m.clone(),
                    },
                    c.clone(),
                )
            })
            .collect(),
    };
    v.sort(ord);
    v
}

pub(crate) fn vp_to_poly(v: &VPoly, ring: &Ring) -> Poly {
    Poly::from_terms(
        ring,
        v.terms.iter().map(|(m, c)| (m.mono.clone(), c.clone())),
    )
}

/// Reduced Groebner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[Poly], order: MonoOrder) -> Result<IdealGB> {
    buchberger_ctl(gens, order, &RunCtl::unlimited())
}

pub fn buchberger_ctl(gens: &[Poly], order: MonoOrder, ctl: &RunCtl) -> Result<IdealGB> {
    let ring = gens
        .first()
        .map(|g| g.ring().clone())
        .ok_or_else(|| Error::InvalidInput("buchberger: no generators".into()))?;
    for g in gens {
        if g.ring() != &ring {
            return Err(Error::RingMismatch("buchberger: mixed rings".into()));
        }
    }
    let ord = ModOrder::ring(order.clone());
    let vps: Vec<VPoly> = gens.iter().map(|g| poly_to_vp(g, &ord)).collect();
    let gb = vp_buchberger(
        vps,
        &ord,
        &GbOpts {
            max_degree: None,
            ctl: *ctl,
        },
    )?;
    let basis: Vec<Poly> = gb.iter().map(|v| vp_to_poly(v, &ring)).collect();
    let lms: Vec<Mono> = gb.iter().map(|v| v.lead().0.mono.clone()).collect();
    Ok(IdealGB {
        ring,
        order,
        basis,
        lms,
    })
}

/// Remainder of `f` on division by the basis: no term of the result is
/// divisible by a leading monomial, and f - result lies in the ideal.
pub fn normal_form(f: &Poly, gb: &IdealGB) -> Result<Poly> {
    if f.ring() != &gb.ring {
        return Err(Error::RingMismatch("normal_form: ring mismatch".into()));
    }
    let ord = ModOrder::ring(gb.order.clone());
    let basis: Vec<VPoly> = gb.basis.iter().map(|g| poly_to_vp(g, &ord)).collect();
    let nf = vp_normal_form(&poly_to_vp(f, &ord), &basis, &ord, None);
    Ok(vp_to_poly(&nf, &gb.ring))
}

/// Generators of the elimination ideal: recomputes a Groebner basis in an
/// order whose leading block is `drop_vars`, then keeps the basis elements
/// free of those variables.
pub fn eliminate(gb: &IdealGB, drop_vars: &[usize]) -> Result<Vec<Poly>> {
    eliminate_ctl(gb, drop_vars, &RunCtl::unlimited())
}

pub fn eliminate_ctl(gb: &IdealGB, drop_vars: &[usize], ctl: &RunCtl) -> Result<Vec<Poly>> {
    let mut block = drop_vars.to_vec();
    block.sort_unstable();
    block.dedup();
    let already_good = match &gb.order {
        MonoOrder::Elimination { block: b, .. } => *b == block,
        _ => false,
    };
    let egb = if already_good || gb.basis.is_empty() {
        gb.clone()
    } else {
        buchberger_ctl(&gb.basis, MonoOrder::elim(block.clone()), ctl)?
    };
    Ok(egb
        .basis
        .iter()
        .filter(|p| {
            p.terms()
                .all(|(m, _)| block.iter().all(|&i| m.0[i] == 0))
        })
        .cloned()
        .collect())
}

/// Krull dimension of the quotient ring, via maximal independent variable
/// sets against the leading-monomial ideal; -1 for the unit ideal.
pub fn dimension(gb: &IdealGB) -> i64 {
    if gb.is_unit_ideal() {
        return -1;
    }
    let n = gb.ring.nvars();
    let supports: Vec<Vec<usize>> = gb
        .lms
        .iter()
        .map(|m| {
            (0..n)
                .filter(|&i| m.0[i] > 0)
                .collect()
        })
        .collect();
    let mut best = 0i64;
    for mask in 0u64..(1u64 << n) {
        let size = mask.count_ones() as i64;
        if size <= best {
            continue;
        }
        let independent = supports
            .iter()
            .all(|supp| !supp.iter().all(|&i| mask & (1 << i) != 0));
        if independent {
            best = size;
        }
    }
    best
}

/// Height of a proper ideal in a polynomial ring: nvars minus quotient
/// dimension (the ring is Cohen-Macaulay). Zero ideal has height 0.
pub fn height(gb: &IdealGB) -> i64 {
    if gb.basis.is_empty() {
        return 0;
    }
    gb.ring.nvars() as i64 - dimension(gb)
}

/// Two generator lists span the same ideal (mutual normal-form membership).
pub fn ideal_equal(a: &[Poly], b: &[Poly], order: MonoOrder) -> Result<bool> {
    if a.is_empty() && b.is_empty() {
        return Ok(true);
    }
    let nonzero_a: Vec<&Poly> = a.iter().filter(|p| !p.is_zero()).collect();
    let nonzero_b: Vec<&Poly> = b.iter().filter(|p| !p.is_zero()).collect();
    if nonzero_a.is_empty() || nonzero_b.is_empty() {
        return Ok(nonzero_a.is_empty() && nonzero_b.is_empty());
    }
    let ga = buchberger(a, order.clone())?;
    for p in &nonzero_b {
        if !ga.contains(p)? {
            return Ok(false);
        }
    }
    let gbb = buchberger(b, order)?;
    for p in &nonzero_a {
        if !gbb.contains(p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Presentation matrices, syzygies, minors
// ---------------------------------------------------------------------------

/// Rectangular matrix of polynomials presenting an ideal: rows index the
/// generators, columns the (first) syzygies. For the theorem class this is
/// the Hilbert-Burch matrix, (d+1) x d with homogeneous columns.
#[derive(Clone, Debug)]
pub struct PresMatrix {
    pub ring: Ring,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Poly>, // row-major
}

impl PresMatrix {
    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Poly>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        let c = rows[0].len();
        if c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged or empty matrix rows".into()));
        }
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            for e in row {
                if e.ring() != ring {
                    return Err(Error::RingMismatch("matrix entry in wrong ring".into()));
                }
                entries.push(e);
            }
        }
        Ok(PresMatrix {
            ring: ring.clone(),
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<&Poly> {
        (0..self.rows).map(|i| self.entry(i, j)).collect()
    }

    /// Common degree of each column; errors when a column is zero, mixes
    /// degrees or has an inhomogeneous entry.
    pub fn column_degrees(&self) -> Result<Vec<u32>> {
        let mut degs = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            let mut deg: Option<u32> = None;
            for i in 0..self.rows {
                let e = self.entry(i, j);
                if e.is_zero() {
                    continue;
                }
                let d = e.homogeneous_degree().ok_or_else(|| {
                    Error::InvalidInput(format!("matrix entry ({i},{j}) is not homogeneous"))
                })?;
                match deg {
                    None => deg = Some(d),
                    Some(d0) if d0 == d => {}
                    Some(d0) => {
                        return Err(Error::InvalidInput(format!(
                            "column {j} mixes degrees {d0} and {d}"
                        )))
                    }
                }
            }
            degs.push(deg.ok_or_else(|| {
                Error::InvalidInput(format!("column {j} of the presentation matrix is zero"))
            })?);
        }
        Ok(degs)
    }
}

/// Determinant by cofactor expansion along the row with the most zeros.
pub fn determinant(ring: &Ring, n: usize, get: &dyn Fn(usize, usize) -> Poly) -> Poly {
    fn det_rec(ring: &Ring, rows: &[usize], cols: &[usize], get: &dyn Fn(usize, usize) -> Poly) -> Poly {
        let n = rows.len();
        if n == 0 {
            return Poly::one(ring);
        }
        if n == 1 {
            return get(rows[0], cols[0]);
        }
        // pick the row with the most zero entries
        let mut best_r = 0;
        let mut best_zeros = usize::MAX;
        for (ri, &r) in rows.iter().enumerate() {
            let zeros = cols.iter().filter(|&&c| get(r, c).is_zero()).count();
            let nonzeros = n - zeros;
            if nonzeros < best_zeros {
                best_zeros = nonzeros;
                best_r = ri;
            }
        }
        let r = rows[best_r];
        let sub_rows: Vec<usize> = rows
            .iter()
            .copied()
            .filter(|&x| x != r)
            .collect();
        let mut acc = Poly::zero(ring);
        for (ci, &c) in cols.iter().enumerate() {
            let e = get(r, c);
            if e.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = det_rec(ring, &sub_rows, &sub_cols, get);
            let term = &e * &minor;
            if (best_r + ci) % 2 == 0 {
                acc = &acc + &term;
            } else {
                acc = &acc - &term;
            }
        }
        acc
    }
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    det_rec(ring, &rows, &cols, get)
}

/// The signed maximal minors of an n x (n-1) matrix: delete row i, sign
/// (-1)^i. The result is a syzygy vector of the matrix columns, so
/// `[f_0..f_{n-1}] * phi = 0`.
pub fn maximal_minors(phi: &PresMatrix) -> Result<Vec<Poly>> {
    if phi.rows != phi.cols + 1 {
        return Err(Error::InvalidInput(format!(
            "maximal_minors wants (n+1) x n, got {} x {}",
            phi.rows, phi.cols
        )));
    }
    let n = phi.cols;
    let mut out = Vec::with_capacity(phi.rows);
    for i in 0..phi.rows {
        let rows: Vec<usize> = (0..phi.rows).filter(|&r| r != i).collect();
        let det = determinant(&phi.ring, n, &|r, c| phi.entry(rows[r], c).clone());
        out.push(if i.is_multiple_of(2) { det } else { -&det });
    }
    Ok(out)
}

/// Minimal graded presentation matrix of the ideal generated by homogeneous
/// polynomials of one common degree.
///
/// The first syzygy module is computed by a module Groebner basis with the
/// relation component eliminated; unit (degree-0) entries are split off by
/// row/column reduction, then a minimal generating set of the syzygies is
/// selected degree by degree.
pub fn syzygy_presentation(gens: &[Poly]) -> Result<PresMatrix> {
    let ring = gens
        .first()
        .map(|g| g.ring().clone())
        .ok_or_else(|| Error::InvalidInput("syzygy_presentation: no generators".into()))?;
    let n = gens.len();
    let mut nu: Option<u32> = None;
    for g in gens {
        let d = g
            .homogeneous_degree()
            .ok_or_else(|| Error::InvalidInput("generators must be homogeneous".into()))?;
        match nu {
            None => nu = Some(d),
            Some(d0) if d0 == d => {}
            _ => {
                return Err(Error::InvalidInput(
                    "generators must share one degree".into(),
                ))
            }
        }
    }
    // module over components 0..=n: component 0 carries the generator values
    // and is eliminated (highest priority); components 1..=n track the
    // coefficients.
    let mut rank: Vec<u32> = vec![0];
    rank.extend(1..=n as u32);
    let ord = ModOrder {
        inner: MonoOrder::GrevLex,
        rank,
    };
    let nv = ring.nvars();
    let mut vps = Vec::with_capacity(n);
    for (i, g) in gens.iter().enumerate() {
        let mut terms: Vec<(ModMono, Rat)> = g
            .terms()
            .map(|(m, c)| {
                (
                    ModMono {
                        comp: 0,
                        mono: m.clone(),
                    },
                    c.clone(),
                )
            })
            .collect();
        terms.push((
            ModMono {
                comp: (i + 1) as u32,
                mono: Mono::one(nv),
            },
            Rat::one(),
        ));
        let mut v = VPoly { terms };
        v.sort(&ord);
        vps.push(v);
    }
    let gb = vp_buchberger(vps, &ord, &GbOpts::default())?;
    // syzygies: basis elements with no component-0 term
    let mut syz: Vec<Vec<Poly>> = Vec::new();
    for v in &gb {
        if v.terms.iter().all(|(m, _)| m.comp != 0) {
            let mut cols = vec![Poly::zero(&ring); n];
            for (m, c) in &v.terms {
                let idx = (m.comp - 1) as usize;
                let mut add = Poly::zero(&ring);
                add.add_term(m.mono.clone(), c.clone());
                cols[idx] = &cols[idx] + &add;
            }
            syz.push(cols);
        }
    }
    // split off unit entries (a constant entry means a redundant generator,
    // which puts the input outside the theorem class)
    for v in &syz {
        for (i, e) in v.iter().enumerate() {
            if !e.is_zero() && e.homogeneous_degree() == Some(0) {
                return Err(Error::NonMinimalShape {
                    expected: n.saturating_sub(1),
                    detail: format!(
                        "generator {i} is redundant (constant syzygy entry); \
                         the input generators are not minimal"
                    ),
                });
            }
        }
    }
    // each syzygy must be homogeneous for the column degrees to make sense
    let mut graded: Vec<(u32, Vec<Poly>)> = Vec::new();
    for v in &syz {
        let mut deg: Option<u32> = None;
        for e in v {
            if e.is_zero() {
                continue;
            }
            let d = e.homogeneous_degree().ok_or_else(|| {
                Error::InvalidInput("minimal presentation has a non-homogeneous column".into())
            })?;
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 == d => {}
                _ => {
                    return Err(Error::InvalidInput(
                        "minimal presentation has a non-homogeneous column".into(),
                    ))
                }
            }
        }
        if let Some(d) = deg {
            graded.push((d, v.clone()));
        }
    }
    graded.sort_by_key(|(d, _)| *d);
    // minimal generating set, degree by degree (graded Nakayama)
    let syz_ord = ModOrder {
        inner: MonoOrder::GrevLex,
        rank: (0..n as u32).collect(),
    };
    let mut chosen: Vec<Vec<Poly>> = Vec::new();
    let mut chosen_vp: Vec<VPoly> = Vec::new();
    for (_, v) in graded {
        let vp = syzvec_to_vp(&v, &syz_ord);
        if chosen_vp.is_empty() {
            chosen.push(v);
            chosen_vp = recompute_gb(&chosen, &syz_ord)?;
            continue;
        }
        let nf = vp_normal_form(&vp, &chosen_vp, &syz_ord, None);
        if !nf.is_zero() {
            chosen.push(v);
            chosen_vp = recompute_gb(&chosen, &syz_ord)?;
        }
    }
    if chosen.len() != n.saturating_sub(1) {
        return Err(Error::NonMinimalShape {
            expected: n.saturating_sub(1),
            detail: format!(
                "minimal first syzygy module has {} generators for {} input generators",
                chosen.len(),
                n
            ),
        });
    }
    // assemble rows x cols
    let rows: Vec<Vec<Poly>> = (0..n)
        .map(|i| chosen.iter().map(|col| col[i].clone()).collect())
        .collect();
    PresMatrix::from_rows(&ring, rows)
}

fn syzvec_to_vp(v: &[Poly], ord: &ModOrder) -> VPoly {
    let mut terms: Vec<(ModMono, Rat)> = Vec::new();
    for (i, e) in v.iter().enumerate() {
        for (m, c) in e.terms() {
            terms.push((
                ModMono {
                    comp: i as u32,
                    mono: m.clone(),
                },
                c.clone(),
            ));
        }
    }
    let mut vp = VPoly { terms };
    vp.sort(ord);
    vp
}

fn recompute_gb(chosen: &[Vec<Poly>], ord: &ModOrder) -> Result<Vec<VPoly>> {
    let vps: Vec<VPoly> = chosen.iter().map(|v| syzvec_to_vp(v, ord)).collect();
    vp_buchberger(vps, ord, &GbOpts::default())
}

// ---------------------------------------------------------------------------
// Bigraded Hilbert slices
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceMode {
    Ideal,
    Quotient,
}

/// Number of bidegree-(p,u) monomials inside (Ideal) or outside (Quotient)
/// the leading-term ideal; for a bihomogeneous ideal this is the k-dimension
/// of the corresponding slice.
pub fn bigraded_slice_dim(gb: &IdealGB, bd: BiDeg, mode: SliceMode) -> usize {
    if bd.p < 0 || bd.q < 0 {
        return 0;
    }
    let monos = monomials_of_bidegree(&gb.ring, bd);
    let total = monos.len();
    let in_lt = monos
        .iter()
        .filter(|m| gb.lms.iter().any(|lm| lm.divides(m)))
        .count();
    match mode {
        SliceMode::Ideal => in_lt,
        SliceMode::Quotient => total - in_lt,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corepoly::parse_poly;

    fn ring2() -> Ring {
        Ring::poly_ring(&["x", "y"])
    }

    fn ring3() -> Ring {
        Ring::poly_ring(&["x", "y", "z"])
    }

    fn pp(s: &str, r: &Ring) -> Poly {
        parse_poly(s, r).unwrap()
    }

    #[test]
    fn buchberger_lex_example() {
        let r = ring2();
        let gb = buchberger(&[pp("x^2 - y", &r), pp("y", &r)], MonoOrder::Lex).unwrap();
        let lead_strings: Vec<String> = gb.basis().iter().map(|p| p.to_string()).collect();
        assert_eq!(lead_strings, vec!["x^2", "y"]);
    }

    #[test]
    fn buchberger_already_gb() {
        let r = ring2();
        let gb = buchberger(&[pp("x", &r), pp("y", &r)], MonoOrder::GrevLex).unwrap();
        assert_eq!(gb.basis().len(), 2);
        assert!(gb.contains(&pp("x^2", &r)).unwrap());
        assert!(!gb.contains(&pp("y + 1", &r)).unwrap());
    }

    #[test]
    fn normal_form_examples() {
        let r = ring2();
        let gb = buchberger(&[pp("x", &r)], MonoOrder::GrevLex).unwrap();
        assert!(normal_form(&pp("x^2", &r), &gb).unwrap().is_zero());
        assert_eq!(normal_form(&pp("y", &r), &gb).unwrap(), pp("y", &r));
    }

    #[test]
    fn eliminate_examples() {
        let r = Ring::poly_ring(&["t", "x", "y"]);
        let gb = buchberger(
            &[pp("t - x", &r), pp("t^2 - y", &r)],
            MonoOrder::elim(vec![0]),
        )
        .unwrap();
        let el = eliminate(&gb, &[0]).unwrap();
        assert_eq!(el.len(), 1);
        assert_eq!(el[0], pp("x^2 - y", &r));

        let gb2 = buchberger(&[pp("x", &r)], MonoOrder::GrevLex).unwrap();
        let el2 = eliminate(&gb2, &[0]).unwrap();
        assert_eq!(el2.len(), 1);
        assert_eq!(el2[0], pp("x", &r));
    }

    #[test]
    fn dimension_examples() {
        let r = ring3();
        let gb = buchberger(
            &[pp("x", &r), pp("y", &r), pp("z", &r)],
            MonoOrder::GrevLex,
        )
        .unwrap();
        assert_eq!(dimension(&gb), 0);
        let gb2 = buchberger(&[pp("x", &r)], MonoOrder::GrevLex).unwrap();
        assert_eq!(dimension(&gb2), 2);
        let gb3 = buchberger(&[pp("x - 1", &r), pp("x", &r)], MonoOrder::GrevLex).unwrap();
        assert!(gb3.is_unit_ideal());
        assert_eq!(dimension(&gb3), -1);
    }

    #[test]
    fn koszul_syzygy_of_two_variables() {
        let r = ring2();
        let phi = syzygy_presentation(&[pp("x", &r), pp("y", &r)]).unwrap();
        assert_eq!((phi.rows, phi.cols), (2, 1));
        assert_eq!(phi.column_degrees().unwrap(), vec![1]);
        // the column is (±y, ∓x) up to scale
        let minors = maximal_minors(&phi).unwrap();
        assert!(ideal_equal(
            &minors,
            &[pp("x", &r), pp("y", &r)],
            MonoOrder::GrevLex
        )
        .unwrap());
    }

    #[test]
    fn syzygy_of_degree_two_powers() {
        let r = ring2();
        let gens = [pp("x^2", &r), pp("x*y", &r), pp("y^2", &r)];
        let phi = syzygy_presentation(&gens).unwrap();
        assert_eq!((phi.rows, phi.cols), (3, 2));
        assert_eq!(phi.column_degrees().unwrap(), vec![1, 1]);
        let minors = maximal_minors(&phi).unwrap();
        assert!(ideal_equal(&minors, &gens, MonoOrder::GrevLex).unwrap());
        // syzygy identity: [f] * phi = 0
        for j in 0..phi.cols {
            let mut acc = Poly::zero(&r);
            for (i, g) in gens.iter().enumerate() {
                acc = &acc + &(g * phi.entry(i, j));
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn nonminimal_generators_rejected() {
        let r = ring2();
        let gens = [pp("x^2", &r), pp("x*y", &r), pp("x^2 + x*y", &r)];
        match syzygy_presentation(&gens) {
            Err(Error::NonMinimalShape { .. }) => {}
            other => panic!("expected NonMinimalShape, got {other:?}"),
        }
    }

    #[test]
    fn maximal_minors_small() {
        let r = ring2();
        let phi = PresMatrix::from_rows(
            &r,
            vec![vec![pp("x", &r)], vec![pp("y", &r)]],
        )
        .unwrap();
        let m = maximal_minors(&phi).unwrap();
        assert_eq!(m[0], pp("y", &r));
        assert_eq!(m[1], pp("-x", &r));
    }

    #[test]
    fn slice_dims() {
        let r = Ring::bigraded(
            &["x".into(), "y".into(), "z".into()],
            &["T1".into(), "T2".into(), "T3".into(), "T4".into()],
        );
        // unit ideal: quotient slice is 0
        let unit = buchberger(&[Poly::one(&r)], MonoOrder::GrevLex).unwrap();
        assert_eq!(
            bigraded_slice_dim(&unit, BiDeg::new(1, 1), SliceMode::Quotient),
            0
        );
        // zero ideal: quotient (1,1) slice has 4*3 = 12 monomials
        let zero = IdealGB {
            ring: r.clone(),
            order: MonoOrder::GrevLex,
            basis: vec![],
            lms: vec![],
        };
        assert_eq!(
            bigraded_slice_dim(&zero, BiDeg::new(1, 1), SliceMode::Quotient),
            12
        );
        assert_eq!(
            bigraded_slice_dim(&zero, BiDeg::new(-1, 0), SliceMode::Quotient),
            0
        );
    }

    #[test]
    fn eliminate_membership_cross_check() {
        // membership in the elimination ideal agrees with membership in the
        // original ideal for subring elements, on random small instances
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(40);
        let r = Ring::poly_ring(&["t", "x", "y"]);
        let rand_poly = |rng: &mut rand_chacha::ChaCha8Rng, with_t: bool| {
            let mut p = Poly::zero(&r);
            for _ in 0..rng.gen_range(1..=3) {
                let e = vec![
                    if with_t { rng.gen_range(0..=2) } else { 0 },
                    rng.gen_range(0..=2u32),
                    rng.gen_range(0..=2u32),
                ];
                let c = rng.gen_range(-3i64..=3);
                if c != 0 {
                    p.add_term(Mono(e), crate::corepoly::rat(c));
                }
            }
            p
        };
        for _ in 0..25 {
            let gens: Vec<Poly> = (0..2)
                .map(|_| rand_poly(&mut rng, true))
                .filter(|p| !p.is_zero())
                .collect();
            if gens.is_empty() {
                continue;
            }
            let full = buchberger(&gens, MonoOrder::elim(vec![0])).unwrap();
            let elim_gens = eliminate(&full, &[0]).unwrap();
            for _ in 0..8 {
                let f = rand_poly(&mut rng, false);
                let in_full = full.contains(&f).unwrap();
                let in_elim = if elim_gens.is_empty() {
                    f.is_zero()
                } else {
                    let egb = buchberger(&elim_gens, MonoOrder::GrevLex).unwrap();
                    egb.contains(&f).unwrap()
                };
                assert_eq!(in_full, in_elim, "f = {f}");
            }
        }
    }

    #[test]
    fn dimension_matches_brute_force_on_monomial_ideals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for nv in 2..=4usize {
            let names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
            let refs: Vec<&str> = names.iter().map(|x| x.as_str()).collect();
            let ring = Ring::poly_ring(&refs);
            for _ in 0..20 {
                let monos: Vec<Mono> = (0..rng.gen_range(1..=4))
                    .map(|_| {
                        let mut e = vec![0u32; nv];
                        for slot in e.iter_mut() {
                            *slot = rng.gen_range(0..=2);
                        }
                        Mono(e)
                    })
                    .filter(|m| !m.is_one())
                    .collect();
                if monos.is_empty() {
                    continue;
                }
                let gens: Vec<Poly> = monos
                    .iter()
                    .map(|m| Poly::from_terms(&ring, [(m.clone(), Rat::one())]))
                    .collect();
                let gb = buchberger(&gens, MonoOrder::GrevLex).unwrap();
                // brute force directly on the generating monomials
                let mut best = 0i64;
                for mask in 0u32..(1 << nv) {
                    let indep = monos.iter().all(|m| {
                        !(0..nv)
                            .filter(|&i| m.0[i] > 0)
                            .all(|i| mask & (1 << i) != 0)
                    });
                    if indep {
                        best = best.max(mask.count_ones() as i64);
                    }
                }
                assert_eq!(dimension(&gb), best);
            }
        }
    }

    #[test]
    fn slice_dim_matches_linear_algebra_spans() {
        // dim of an ideal slice equals the rank of the coefficient matrix of
        // the spanning set { m * g : bideg(m g) = (p,u) }
        let r = Ring::bigraded(
            &["x".into(), "y".into(), "z".into()],
            &["a".into(), "b".into(), "c".into(), "d".into()],
        );
        let gens = [
            crate::corepoly::parse_poly("a*x + b*y + c*z", &r).unwrap(),
            crate::corepoly::parse_poly("b*x + c*y + d*z", &r).unwrap(),
            crate::corepoly::parse_poly("c*x^2 + d*z^2", &r).unwrap(),
        ];
        let gb = buchberger(&gens, MonoOrder::GrevLex).unwrap();
        for p in 1..=2i64 {
            for u in 0..=4i64 {
                let by_gb = bigraded_slice_dim(&gb, BiDeg::new(p, u), SliceMode::Ideal);
                // spanning set via multiplication
                let slice = monomials_of_bidegree(&r, BiDeg::new(p, u));
                let idx: std::collections::BTreeMap<&Mono, usize> =
                    slice.iter().enumerate().map(|(i, m)| (m, i)).collect();
                let mut rows: Vec<Vec<Rat>> = Vec::new();
                for g in &gens {
                    let BiDeg { p: gp, q: gq } = g.bidegree().unwrap();
                    let ms =
                        monomials_of_bidegree(&r, BiDeg::new(p - gp, u - gq));
                    for m in ms {
                        let prod = g.mul_mono(&m);
                        let mut row = vec![Rat::zero(); slice.len()];
                        for (mm, c) in prod.terms() {
                            row[idx[mm]] = c.clone();
                        }
                        rows.push(row);
                    }
                }
                let by_rank = crate::oracle::rank(rows);
                assert_eq!(by_gb, by_rank, "(p,u) = ({p},{u})");
            }
        }
    }

    #[test]
    fn gb_spairs_reduce_to_zero() {
        // classic: x^2+y^2-1, xy over grevlex
        let r = ring2();
        let gens = [pp("x^2 + y^2 - 1", &r), pp("x*y", &r)];
        let gb = buchberger(&gens, MonoOrder::GrevLex).unwrap();
        for g in &gens {
            assert!(gb.contains(g).unwrap());
        }
        // every S-pair of the reduced basis reduces to zero
        let ord = ModOrder::ring(MonoOrder::GrevLex);
        let vps: Vec<VPoly> = gb.basis().iter().map(|g| poly_to_vp(g, &ord)).collect();
        for i in 0..vps.len() {
            for j in (i + 1)..vps.len() {
                let lcm = vps[i].lead().0.mono.lcm(&vps[j].lead().0.mono);
                let qi = lcm.try_div(&vps[i].lead().0.mono).unwrap();
                let qj = lcm.try_div(&vps[j].lead().0.mono).unwrap();
                let mut s = VPoly {
                    terms: vps[i]
                        .terms
                        .iter()
                        .map(|(m, c)| {
                            (
                                ModMono {
                                    comp: 0,
                                    mono: m.mono.mul(&qi),
                                },
                                c.clone(),
                            )
                        })
                        .collect(),
                };
                s.sub_scaled(&Rat::one(), &qj, &vps[j], &ord);
                assert!(vp_normal_form(&s, &vps, &ord, None).is_zero());
            }
        }
    }
}
