//! Groebner machinery in the Weyl algebra: left-ideal bases under term
//! orders, bases adapted to the non-term (-w,w) weight order via the
//! homogenized Weyl algebra, initial forms, submodule bases of D^m under
//! position-over-term orders, and the component intersections J_i.
//!
//! For term orders leading monomials multiply commutatively, so Buchberger
//! lifts; the product criterion is never used here (it is unsound in D), only
//! chain-style pair pruning.

use crate::corepoly::{Mono, MonoOrder, Rat};
#[cfg(test)]
use crate::corepoly::Ring;
use crate::error::{Error, Result};
use crate::gbcomm::{GbOpts, ModMono, ModOrder, VPoly};
use crate::weyl::WeylOp;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

/// Rectangular matrix over the Weyl algebra; the rows generate a left
/// submodule N of D^(1 x cols).
#[derive(Clone, Debug)]
pub struct DMatrix {
    d: usize,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<WeylOp>, // row-major
}

impl DMatrix {
    pub fn from_rows(d: usize, rows: Vec<Vec<WeylOp>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged DMatrix".into()));
        }
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            for e in row {
                if e.d() != d {
                    return Err(Error::DimensionMismatch("DMatrix entry".into()));
                }
                entries.push(e);
            }
        }
        Ok(DMatrix {
            d,
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> &WeylOp {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vec<WeylOp> {
        (0..self.cols).map(|j| self.entry(i, j).clone()).collect()
    }

    /// True when every entry is a polynomial in the derivations only and
    /// every row is homogeneous of a single derivation degree (the shape the
    /// Fourier transform of a graded presentation always has).
    pub fn rows_diff_homogeneous(&self) -> bool {
        for i in 0..self.rows {
            let mut deg: Option<u32> = None;
            for j in 0..self.cols {
                let e = self.entry(i, j);
                if e.is_zero() {
                    continue;
                }
                if !e.is_pure_diff() {
                    return false;
                }
                for (m, _) in e.terms() {
                    let dd: u32 = m.0[self.d..].iter().sum();
                    match deg {
                        None => deg = Some(dd),
                        Some(d0) if d0 == dd => {}
                        _ => return false,
                    }
                }
            }
        }
        true
    }
}

/// Order descriptor carried by a [`WeylGB`].
#[derive(Clone, Debug)]
pub enum WeylOrderDesc {
    /// Genuine term order on (x, d)-monomials.
    Term(MonoOrder),
    /// Weight-adapted basis obtained through the homogenized Weyl algebra.
    Weight { w: Vec<i64> },
    /// Position-over-term with the given component ranks.
    Module { rank: Vec<u32>, inner: MonoOrder },
}

/// Groebner basis of a left ideal or left submodule of D^m.
#[derive(Clone, Debug)]
pub struct WeylGB {
    d: usize,
    ncomps: usize,
    pub order: WeylOrderDesc,
    vectors: Vec<Vec<WeylOp>>,
}

impl WeylGB {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ncomps(&self) -> usize {
        self.ncomps
    }

    pub fn vectors(&self) -> &[Vec<WeylOp>] {
        &self.vectors
    }

    /// Basis of a rank-one (ideal) Groebner basis.
    pub fn ops(&self) -> Vec<WeylOp> {
        assert_eq!(self.ncomps, 1, "ops() requires an ideal basis");
        self.vectors.iter().map(|v| v[0].clone()).collect()
    }
}

// ---------------------------------------------------------------------------
// Engine: Buchberger over D (optionally homogenized) and D^m
// ---------------------------------------------------------------------------

/// Ambient multiplication data: d x/d pairs, optionally one central h with
/// the relation d_i x_i = x_i d_i + h^2.
#[derive(Clone, Copy)]
struct WAlg {
    d: usize,
    homog: bool,
}

impl WAlg {
    fn nvars(&self) -> usize {
        2 * self.d + usize::from(self.homog)
    }

    /// Normal-ordered product of two monomials, accumulated into `acc`.
    fn mono_mul(&self, a: &Mono, b: &Mono, coeff: &Rat, acc: &mut BTreeMap<Mono, Rat>) {
        let d = self.d;
        let (ax, rest_a) = a.0.split_at(d);
        let (ad, ah) = rest_a.split_at(d);
        let (bx, rest_b) = b.0.split_at(d);
        let (bd, bh) = rest_b.split_at(d);
        let caps: Vec<u32> = (0..d).map(|i| ad[i].min(bx[i])).collect();
        let mut mu = vec![0u32; d];
        loop {
            let mut c = BigInt::one();
            for i in 0..d {
                for k in 0..mu[i] {
                    // binom(ad,mu)*binom(bx,mu)*mu! accumulated incrementally:
                    // falling factorials (ad-k)(bx-k)/(k+1) * (k+1) = (ad-k)(bx-k)
                    c *= BigInt::from((ad[i] - k) as u64) * BigInt::from((bx[i] - k) as u64);
                }
                if mu[i] > 1 {
                    let mut f = BigInt::one();
                    for k in 2..=mu[i] {
                        f *= BigInt::from(k as u64);
                    }
                    c /= f;
                }
            }
            let msum: u32 = mu.iter().sum();
            let mut e = vec![0u32; self.nvars()];
            for i in 0..d {
                e[i] = ax[i] + bx[i] - mu[i];
                e[d + i] = ad[i] + bd[i] - mu[i];
            }
            if self.homog {
                e[2 * d] = ah.first().copied().unwrap_or(0)
                    + bh.first().copied().unwrap_or(0)
                    + 2 * msum;
            }
            let add = coeff * Rat::from_integer(c);
            if !add.is_zero() {
                let key = Mono(e);
                let cur = acc.remove(&key).unwrap_or_else(Rat::zero);
                let s = cur + add;
                if !s.is_zero() {
                    acc.insert(key, s);
                }
            }
            let mut k = 0;
            loop {
                if k == d {
                    return;
                }
                if mu[k] < caps[k] {
                    mu[k] += 1;
                    break;
                }
                mu[k] = 0;
                k += 1;
            }
        }
    }

    /// Left-multiply a sorted vector by c * m.
    fn left_mul(&self, c: &Rat, m: &Mono, v: &VPoly, ord: &ModOrder) -> VPoly {
        let mut acc: BTreeMap<(u32, Mono), Rat> = BTreeMap::new();
        let mut tmp: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (t, tc) in &v.terms {
            tmp.clear();
            self.mono_mul(m, &t.mono, &(c * tc), &mut tmp);
            for (mm, cc) in tmp.iter() {
                let key = (t.comp, mm.clone());
                let cur = acc.remove(&key).unwrap_or_else(Rat::zero);
                let s = cur + cc;
                if !s.is_zero() {
                    acc.insert(key, s);
                }
            }
        }
        let mut out = VPoly {
            terms: acc
                .into_iter()
                .map(|((comp, mono), c)| (ModMono { comp, mono }, c))
                .collect(),
        };
        out.sort(ord);
        out
    }

    fn sub(&self, a: &VPoly, b: &VPoly, ord: &ModOrder) -> VPoly {
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let mut i = 0;
        let mut j = 0;
        while i < a.terms.len() && j < b.terms.len() {
            match ord.cmp(&a.terms[i].0, &b.terms[j].0) {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.terms[j].0.clone(), -b.terms[j].1.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = &a.terms[i].1 - &b.terms[j].1;
                    if !v.is_zero() {
                        out.push((a.terms[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a.terms[i..]);
        for (m, c) in &b.terms[j..] {
            out.push((m.clone(), -c.clone()));
        }
        VPoly { terms: out }
    }

    /// Full normal form against monic basis elements.
    fn normal_form(
        &self,
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
                        let prod = self.left_mul(&lc, &q, g, ord);
                        work = self.sub(&work, &prod, ord);
                        continue 'outer;
                    }
                }
            }
            rem.push(work.terms.remove(0));
        }
        VPoly { terms: rem }
    }

    /// Buchberger over D^m: chain criterion only, reduced monic output.
    fn buchberger(
        &self,
        gens: Vec<VPoly>,
        ord: &ModOrder,
        opts: &GbOpts,
    ) -> Result<Vec<VPoly>> {
        let mut basis: Vec<VPoly> = Vec::new();
        for mut g in gens {
            g.sort(ord);
            if !g.is_zero() {
                g.make_monic();
                basis.push(g);
            }
        }
        basis.sort_by(|a, b| ord.cmp(&a.lead().0, &b.lead().0));

        type PairKey = (u32, u32, Vec<u32>, u32, u32);
        let mut pairs: BTreeSet<PairKey> = BTreeSet::new();
        let lcm_of = |a: &VPoly, b: &VPoly| -> Option<Mono> {
            let (la, lb) = (a.lead(), b.lead());
            (la.0.comp == lb.0.comp).then(|| la.0.mono.lcm(&lb.0.mono))
        };
        let add_pairs_for = |basis: &[VPoly], t: usize, pairs: &mut BTreeSet<PairKey>| {
            let mut cand: Vec<(usize, Mono)> = Vec::new();
            for i in 0..t {
                if let Some(l) = lcm_of(&basis[i], &basis[t]) {
                    cand.push((i, l));
                }
            }
            let mut keep = vec![true; cand.len()];
            for (ci, (_, li)) in cand.iter().enumerate() {
                for (cj, (_, lj)) in cand.iter().enumerate() {
                    if ci != cj && keep[cj] && lj.divides(li) && lj != li {
                        keep[ci] = false;
                        break;
                    }
                }
            }
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
            let lt = basis[t].lead().0.clone();
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
                    pairs.insert((l.total_degree(), lt.comp, l.0.clone(), i as u32, t as u32));
                }
            }
        };

        for t in 0..basis.len() {
            add_pairs_for(&basis, t, &mut pairs);
        }

        let mut iter = 0usize;
        while let Some(key) = pairs.iter().next().cloned() {
            pairs.remove(&key);
            let (deg, _comp, lcm_e, i, j) = key;
            iter += 1;
            if iter.is_multiple_of(16) {
                opts.ctl.check("weyl groebner")?;
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
            let pi = self.left_mul(&Rat::one(), &qi, fi, ord);
            let pj = self.left_mul(&Rat::one(), &qj, fj, ord);
            let s = self.sub(&pi, &pj, ord);
            let nf = self.normal_form(&s, &basis, ord, None);
            if !nf.is_zero() {
                let mut nf = nf;
                nf.make_monic();
                basis.push(nf);
                let t = basis.len() - 1;
                add_pairs_for(&basis, t, &mut pairs);
            }
        }

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
        let mut reduced: Vec<VPoly> = Vec::with_capacity(kept.len());
        for i in 0..kept.len() {
            let mut nf = self.normal_form(&kept[i], &kept, ord, Some(i));
            if !nf.is_zero() {
                nf.make_monic();
                reduced.push(nf);
            }
        }
        reduced.sort_by(|a, b| ord.cmp(&b.lead().0, &a.lead().0));
        Ok(reduced)
    }
}

fn op_to_vp(op: &WeylOp, comp: u32, extra_h: bool, ord: &ModOrder) -> VPoly {
    let mut terms: Vec<(ModMono, Rat)> = Vec::new();
    for (m, c) in op.terms() {
        let mut e = m.0.clone();
        if extra_h {
            e.push(0);
        }
        terms.push((
            ModMono {
                comp,
                mono: Mono(e),
            },
            c.clone(),
        ));
    }
    let mut v = VPoly { terms };
    v.sort(ord);
    v
}

fn vp_to_ops(v: &VPoly, d: usize, ncomps: usize) -> Vec<WeylOp> {
    let mut out = vec![WeylOp::zero(d); ncomps];
    for (m, c) in &v.terms {
        out[m.comp as usize].add_term(Mono(m.mono.0[..2 * d].to_vec()), c.clone());
    }
    out
}

/// Left-ideal Groebner basis under a genuine term order.
pub fn weyl_buchberger(gens: &[WeylOp], order: MonoOrder) -> Result<WeylGB> {
    weyl_buchberger_opts(gens, order, &GbOpts::default())
}

pub(crate) fn weyl_buchberger_opts(
    gens: &[WeylOp],
    order: MonoOrder,
    opts: &GbOpts,
) -> Result<WeylGB> {
    let d = gens
        .first()
        .map(|g| g.d())
        .ok_or_else(|| Error::InvalidInput("weyl_buchberger: no generators".into()))?;
    if gens.iter().any(|g| g.d() != d) {
        return Err(Error::DimensionMismatch("weyl_buchberger".into()));
    }
    let alg = WAlg { d, homog: false };
    let ord = ModOrder::ring(order.clone());
    let vps: Vec<VPoly> = gens.iter().map(|g| op_to_vp(g, 0, false, &ord)).collect();
    let gb = alg.buchberger(vps, &ord, opts)?;
    Ok(WeylGB {
        d,
        ncomps: 1,
        order: WeylOrderDesc::Term(order),
        vectors: gb.iter().map(|v| vp_to_ops(v, d, 1)).collect(),
    })
}

/// Membership of `op` in the left ideal with Groebner basis `gb` (term order).
pub fn weyl_ideal_member(op: &WeylOp, gb: &WeylGB) -> Result<bool> {
    let order = match &gb.order {
        WeylOrderDesc::Term(o) => o.clone(),
        _ => {
            return Err(Error::InvalidInput(
                "weyl_ideal_member requires a term-order basis".into(),
            ))
        }
    };
    if gb.vectors.is_empty() {
        return Ok(op.is_zero());
    }
    let d = gb.d;
    let alg = WAlg { d, homog: false };
    let ord = ModOrder::ring(order);
    let basis: Vec<VPoly> = gb
        .vectors
        .iter()
        .map(|v| op_to_vp(&v[0], 0, false, &ord))
        .collect();
    let nf = alg.normal_form(&op_to_vp(op, 0, false, &ord), &basis, &ord, None);
    Ok(nf.is_zero())
}

// ---------------------------------------------------------------------------
// Weight-order bases via the homogenized Weyl algebra
// ---------------------------------------------------------------------------

/// Order on homogenized monomials [x | d | h]: first the (-w,w)-weight
/// (h weightless), then fewer h is larger, then grevlex.
fn homog_weight_order(d: usize, w: &[i64]) -> MonoOrder {
    let mut wv1 = vec![0i64; 2 * d + 1];
    for (i, &wi) in w.iter().enumerate() {
        wv1[i] = -wi;
        wv1[d + i] = wi;
    }
    let mut wv2 = vec![0i64; 2 * d + 1];
    wv2[2 * d] = -1;
    MonoOrder::Weighted {
        weights: wv1,
        tiebreak: Box::new(MonoOrder::Weighted {
            weights: wv2,
            tiebreak: Box::new(MonoOrder::GrevLex),
        }),
    }
}

fn homogenize(op: &WeylOp) -> Result<VPoly> {
    let maxdeg = op
        .terms()
        .map(|(m, _)| m.total_degree())
        .max()
        .unwrap_or(0);
    let terms = op
        .terms()
        .map(|(m, c)| {
            let mut e = m.0.clone();
            e.push(maxdeg - m.total_degree());
            (
                ModMono {
                    comp: 0,
                    mono: Mono(e),
                },
                c.clone(),
            )
        })
        .collect();
    Ok(VPoly { terms })
}

fn strip_h(v: &mut VPoly, hpos: usize) -> bool {
    let minh = v.terms.iter().map(|(m, _)| m.mono.0[hpos]).min().unwrap_or(0);
    if minh == 0 {
        return false;
    }
    for (m, _) in v.terms.iter_mut() {
        m.mono.0[hpos] -= minh;
    }
    true
}

/// Generating set whose initial forms generate in_{(-w,w)} of the ideal.
///
/// Computed in the homogenized Weyl algebra (central h, d_i x_i = x_i d_i +
/// h^2) under the weight-refining order, with h-saturation, then
/// dehomogenized.
pub fn weyl_gb_weight(gens: &[WeylOp], w: &[i64]) -> Result<WeylGB> {
    weyl_gb_weight_opts(gens, w, &GbOpts::default())
}

pub(crate) fn weyl_gb_weight_opts(
    gens: &[WeylOp],
    w: &[i64],
    opts: &GbOpts,
) -> Result<WeylGB> {
    let d = gens
        .first()
        .map(|g| g.d())
        .ok_or_else(|| Error::InvalidInput("weyl_gb_weight: no generators".into()))?;
    if w.len() != d {
        return Err(Error::DimensionMismatch("weight vector length".into()));
    }
    let alg = WAlg { d, homog: true };
    let ord = ModOrder::ring(homog_weight_order(d, w));
    let hpos = 2 * d;
    let mut current: Vec<VPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(homogenize)
        .collect::<Result<_>>()?;
    // saturate with respect to h so the dehomogenized initial forms are a
    // genuine (-w,w)-basis
    loop {
        let mut gb = alg.buchberger(current.clone(), &ord, opts)?;
        let mut stripped = false;
        for v in gb.iter_mut() {
            stripped |= strip_h(v, hpos);
        }
        if !stripped {
            current = gb;
            break;
        }
        current = gb;
    }
    let vectors: Vec<Vec<WeylOp>> = current
        .iter()
        .map(|v| {
            let mut op = WeylOp::zero(d);
            for (m, c) in &v.terms {
                op.add_term(Mono(m.mono.0[..2 * d].to_vec()), c.clone());
            }
            vec![op]
        })
        .collect();
    Ok(WeylGB {
        d,
        ncomps: 1,
        order: WeylOrderDesc::Weight { w: w.to_vec() },
        vectors,
    })
}

/// Generators of in_{(-w,w)}(J) from a weight-adapted basis; each output is
/// weight-homogeneous.
pub fn initial_forms(gb: &WeylGB, w: &[i64]) -> Vec<WeylOp> {
    gb.vectors
        .iter()
        .map(|v| v[0].initial_form(w))
        .filter(|op| !op.is_zero())
        .collect()
}

// ---------------------------------------------------------------------------
// Module bases and component intersection
// ---------------------------------------------------------------------------

fn rank_with_smallest(m: usize, smallest: Option<usize>) -> Vec<u32> {
    match smallest {
        None => (0..m as u32).collect(),
        Some(i) => {
            let mut rank = vec![0u32; m];
            let mut next = 0u32;
            for (j, slot) in rank.iter_mut().enumerate() {
                if j != i {
                    *slot = next;
                    next += 1;
                }
            }
            rank[i] = next;
            rank
        }
    }
}

/// Groebner basis of the left submodule of D^(1 x cols) generated by the
/// rows of `h`, under position-over-term with the given component ranks.
pub fn module_gb(h: &DMatrix, smallest: Option<usize>, inner: MonoOrder) -> Result<WeylGB> {
    module_gb_opts(h, smallest, inner, &GbOpts::default())
}

pub(crate) fn module_gb_opts(
    h: &DMatrix,
    smallest: Option<usize>,
    inner: MonoOrder,
    opts: &GbOpts,
) -> Result<WeylGB> {
    let d = h.d;
    let rank = rank_with_smallest(h.cols, smallest);
    let ord = ModOrder {
        inner: inner.clone(),
        rank: rank.clone(),
    };
    let alg = WAlg { d, homog: false };
    let mut vps = Vec::with_capacity(h.rows);
    for i in 0..h.rows {
        let mut terms: Vec<(ModMono, Rat)> = Vec::new();
        for j in 0..h.cols {
            for (m, c) in h.entry(i, j).terms() {
                terms.push((
                    ModMono {
                        comp: j as u32,
                        mono: m.clone(),
                    },
                    c.clone(),
                ));
            }
        }
        if !terms.is_empty() {
            let mut v = VPoly { terms };
            v.sort(&ord);
            vps.push(v);
        }
    }
    let gb = alg.buchberger(vps, &ord, opts)?;
    Ok(WeylGB {
        d,
        ncomps: h.cols,
        order: WeylOrderDesc::Module { rank, inner },
        vectors: gb.iter().map(|v| vp_to_ops(v, d, h.cols)).collect(),
    })
}

/// Generators of J_i = pi_i(N intersect D e_i): the basis elements supported
/// only in component i, projected. Recomputes the module basis when the
/// stored order does not make component i strictly smallest.
pub fn component_intersect(n_gb: &WeylGB, i: usize) -> Result<Vec<WeylOp>> {
    component_intersect_opts(n_gb, i, &GbOpts::default())
}

pub(crate) fn component_intersect_opts(
    n_gb: &WeylGB,
    i: usize,
    opts: &GbOpts,
) -> Result<Vec<WeylOp>> {
    if i >= n_gb.ncomps {
        return Err(Error::InvalidInput(format!(
            "component {i} out of range for rank {}",
            n_gb.ncomps
        )));
    }
    let good = match &n_gb.order {
        WeylOrderDesc::Module { rank, .. } => rank
            .iter()
            .enumerate()
            .all(|(j, &r)| (j == i) == (r == (n_gb.ncomps as u32 - 1))),
        _ => false,
    };
    let gb = if good && n_gb.ncomps >= 1 {
        n_gb.clone()
    } else {
        let rows: Vec<Vec<WeylOp>> = n_gb.vectors.clone();
        let h = DMatrix::from_rows(n_gb.d, rows)?;
        module_gb_opts(&h, Some(i), MonoOrder::GrevLex, opts)?
    };
    Ok(gb
        .vectors
        .iter()
        .filter(|v| {
            v.iter()
                .enumerate()
                .all(|(j, op)| j == i || op.is_zero())
        })
        .map(|v| v[i].clone())
        .filter(|op| !op.is_zero())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{expand_s_polynomial, parse_weyl_op, weyl_product, SPoly};

    fn r2() -> Ring {
        Ring::poly_ring(&["x1", "x2"])
    }

    fn op(s: &str, r: &Ring) -> WeylOp {
        parse_weyl_op(s, r).unwrap()
    }

    #[test]
    fn unit_ideal_from_x_and_dx() {
        let r = r2();
        let gb = weyl_buchberger(&[op("x1", &r), op("d1", &r)], MonoOrder::GrevLex).unwrap();
        assert_eq!(gb.vectors().len(), 1);
        assert!(weyl_ideal_member(&WeylOp::one(2), &gb).unwrap());
    }

    #[test]
    fn commuting_generators_stay() {
        let r = r2();
        let gb = weyl_buchberger(&[op("d1", &r), op("d2", &r)], MonoOrder::GrevLex).unwrap();
        assert_eq!(gb.vectors().len(), 2);
        let gbx = weyl_buchberger(&[op("x1", &r), op("x2", &r)], MonoOrder::GrevLex).unwrap();
        assert_eq!(gbx.vectors().len(), 2);
    }

    #[test]
    fn member_examples() {
        let r = r2();
        let gb = weyl_buchberger(&[op("d1", &r)], MonoOrder::GrevLex).unwrap();
        assert!(weyl_ideal_member(&op("x1*d1", &r), &gb).unwrap());
        assert!(!weyl_ideal_member(&op("x1", &r), &gb).unwrap());
        // s = sum (-x_i) d_i lies in D(d_1, d_2)
        let gbd = weyl_buchberger(&[op("d1", &r), op("d2", &r)], MonoOrder::GrevLex).unwrap();
        let s = expand_s_polynomial(&SPoly::s(), 2);
        assert!(weyl_ideal_member(&s, &gbd).unwrap());
    }

    #[test]
    fn leading_terms_multiply() {
        // lt(ab) = lt(a) lt(b) for a genuine term order
        let r = r2();
        let cases = [
            ("x1^2*d2 + d1", "x2*d1^2 - 3"),
            ("x1*d1 + 1", "x1*d1 - 1"),
            ("d1^2 + x2", "x1^3 + d2"),
        ];
        let ord = MonoOrder::GrevLex;
        for (a, b) in cases {
            let (pa, pb) = (op(a, &r), op(b, &r));
            let prod = weyl_product(&pa, &pb).unwrap();
            let lt = |p: &WeylOp| {
                p.terms()
                    .map(|(m, _)| m.clone())
                    .max_by(|x, y| ord.compare(x, y))
                    .unwrap()
            };
            assert_eq!(lt(&prod), lt(&pa).mul(&lt(&pb)));
        }
    }

    #[test]
    fn weight_gb_examples() {
        let r = r2();
        let w = vec![-1i64, -1];
        // single monomial generator
        let gb = weyl_gb_weight(&[op("d1", &r)], &w).unwrap();
        assert_eq!(initial_forms(&gb, &w), vec![op("d1", &r)]);
        // weight-homogeneous input is its own initial form
        let e = op("x1*d1 + 1", &r);
        let gb2 = weyl_gb_weight(std::slice::from_ref(&e), &w).unwrap();
        assert_eq!(initial_forms(&gb2, &w), vec![e]);
        // d1 + x1: initial form x1
        let gb3 = weyl_gb_weight(&[op("d1 + x1", &r)], &w).unwrap();
        let inf = initial_forms(&gb3, &w);
        assert!(inf.contains(&op("x1", &r)), "got {inf:?}");
    }

    #[test]
    fn weight_gb_nonhomogeneous_known_initial_ideal() {
        // J = D(d1 + x1^2) over d = 1: the initial ideal is D x1^2
        let r = Ring::poly_ring(&["x1"]);
        let gen = parse_weyl_op("d1 + x1^2", &r).unwrap();
        let w = vec![-1i64];
        let gb = weyl_gb_weight(std::slice::from_ref(&gen), &w).unwrap();
        let infs = initial_forms(&gb, &w);
        let x2 = parse_weyl_op("x1^2", &r).unwrap();
        let g_in = weyl_buchberger(&infs, MonoOrder::GrevLex).unwrap();
        assert!(weyl_ideal_member(&x2, &g_in).unwrap());
        let g_x2 = weyl_buchberger(std::slice::from_ref(&x2), MonoOrder::GrevLex).unwrap();
        for f in &infs {
            assert!(weyl_ideal_member(f, &g_x2).unwrap(), "{f:?} outside D x1^2");
        }
    }

    #[test]
    fn weight_gb_unit_initial_ideal() {
        // J = D(d1 - 1): the constant term dominates, so in(J) = D
        let r = Ring::poly_ring(&["x1"]);
        let gen = parse_weyl_op("d1 - 1", &r).unwrap();
        let w = vec![-1i64];
        let gb = weyl_gb_weight(std::slice::from_ref(&gen), &w).unwrap();
        let infs = initial_forms(&gb, &w);
        let g_in = weyl_buchberger(&infs, MonoOrder::GrevLex).unwrap();
        assert!(weyl_ideal_member(&WeylOp::one(1), &g_in).unwrap());
    }

    #[test]
    fn weight_gb_idempotent_on_homogeneous_ideal() {
        let r = r2();
        let w = vec![-1i64, -1];
        // in(J) of a weight-graded ideal equals J: generators {x1 d1 + 2, x2 d2}
        let gens = [op("x1*d1 + 2", &r), op("x2*d2", &r)];
        let gb = weyl_gb_weight(&gens, &w).unwrap();
        let infs = initial_forms(&gb, &w);
        // both generator sets give the same term-order ideal
        let g1 = weyl_buchberger(&infs, MonoOrder::GrevLex).unwrap();
        for g in &gens {
            assert!(weyl_ideal_member(g, &g1).unwrap());
        }
        let g2 = weyl_buchberger(&gens, MonoOrder::GrevLex).unwrap();
        for f in &infs {
            assert!(weyl_ideal_member(f, &g2).unwrap());
        }
    }

    #[test]
    fn module_gb_identity_pattern() {
        let d = 2;
        let rows = vec![
            vec![WeylOp::one(d), WeylOp::zero(d)],
            vec![WeylOp::zero(d), WeylOp::one(d)],
        ];
        let h = DMatrix::from_rows(d, rows).unwrap();
        let gb = module_gb(&h, None, MonoOrder::GrevLex).unwrap();
        assert_eq!(gb.vectors().len(), 2);
        for v in gb.vectors() {
            let nz: Vec<_> = v.iter().filter(|o| !o.is_zero()).collect();
            assert_eq!(nz.len(), 1);
            assert_eq!(nz[0].num_terms(), 1);
        }
    }

    #[test]
    fn module_single_row_stays() {
        let r = r2();
        let h = DMatrix::from_rows(2, vec![vec![op("x1", &r), WeylOp::zero(2)]]).unwrap();
        let gb = module_gb(&h, None, MonoOrder::GrevLex).unwrap();
        assert_eq!(gb.vectors().len(), 1);
    }

    #[test]
    fn component_intersect_split_rows() {
        let r = r2();
        // N = D(x1, 0) + D(0, d1): component 2 gives {d1}
        let h = DMatrix::from_rows(
            2,
            vec![
                vec![op("x1", &r), WeylOp::zero(2)],
                vec![WeylOp::zero(2), op("d1", &r)],
            ],
        )
        .unwrap();
        let gb = module_gb(&h, Some(1), MonoOrder::GrevLex).unwrap();
        let j2 = component_intersect(&gb, 1).unwrap();
        assert_eq!(j2, vec![op("d1", &r)]);
    }

    #[test]
    fn component_intersect_free_row() {
        let r = r2();
        // single row (x1, x2): no nonzero element of N has second coord 0
        let h = DMatrix::from_rows(2, vec![vec![op("x1", &r), op("x2", &r)]]).unwrap();
        let gb = module_gb(&h, Some(0), MonoOrder::GrevLex).unwrap();
        let j1 = component_intersect(&gb, 0).unwrap();
        assert!(j1.is_empty());
    }

    #[test]
    fn component_elements_lie_in_module() {
        let r = r2();
        let h = DMatrix::from_rows(
            2,
            vec![
                vec![op("d1", &r), op("d2", &r)],
                vec![op("d2", &r), op("d1", &r)],
            ],
        )
        .unwrap();
        let gb = module_gb(&h, Some(1), MonoOrder::GrevLex).unwrap();
        let j2 = component_intersect(&gb, 1).unwrap();
        // re-embedded elements reduce to zero against the module basis
        let alg = WAlg { d: 2, homog: false };
        let ord = ModOrder {
            inner: MonoOrder::GrevLex,
            rank: rank_with_smallest(2, Some(1)),
        };
        let basis: Vec<VPoly> = gb
            .vectors()
            .iter()
            .map(|v| {
                let mut terms = Vec::new();
                for (j, o) in v.iter().enumerate() {
                    for (m, c) in o.terms() {
                        terms.push((
                            ModMono {
                                comp: j as u32,
                                mono: m.clone(),
                            },
                            c.clone(),
                        ));
                    }
                }
                let mut vp = VPoly { terms };
                vp.sort(&ord);
                vp
            })
            .collect();
        for el in &j2 {
            let vp = op_to_vp(el, 1, false, &ord);
            assert!(alg.normal_form(&vp, &basis, &ord, None).is_zero());
        }
    }

    #[test]
    fn s_products_lie_in_derivation_powers() {
        // s(s+1)...(s+k) lies in D(d_1..d_d)^{k+1}
        for d in 2..=3usize {
            for k in 0..=2u32 {
                let roots: Vec<Rat> = (0..=k).map(|r| crate::corepoly::rat(-(r as i64))).collect();
                let e = expand_s_polynomial(&SPoly::from_roots(&roots), d);
                let degs = crate::corepoly::compositions(k + 1, d);
                let gens: Vec<WeylOp> = degs
                    .iter()
                    .map(|z| {
                        let mut m = vec![0u32; 2 * d];
                        m[d..].copy_from_slice(z);
                        WeylOp::from_term(d, Mono(m), Rat::one())
                    })
                    .collect();
                let gb = weyl_buchberger(&gens, MonoOrder::GrevLex).unwrap();
                assert!(weyl_ideal_member(&e, &gb).unwrap(), "d={d} k={k}");
            }
        }
    }
}
