//! The Weyl algebra A_d(Q) and its extension by commuting T-variables:
//! normal ordering, products, the action on polynomials, the Fourier
//! transform, the standard transposition, and expansion of polynomials in
//! s = -sum x_i d_i.
//!
//! Normal order (all x's left of all d's) is the sole internal
//! representation; products use the closed commutation formula for
//! d^beta * x^gamma rather than repeated single swaps.

use crate::corepoly::{parse_poly, Mono, Poly, Rat, Ring, VarKind};
#[cfg(test)]
use crate::corepoly::rat;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Element of A_d(Q) in normal order. Term keys hold 2d exponents:
/// `[x_1..x_d | d_1..d_d]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylOp {
    d: usize,
    terms: BTreeMap<Mono, Rat>,
}

fn binom_big(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn factorial_big(n: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 2..=n {
        r *= BigInt::from(i);
    }
    r
}

impl WeylOp {
    pub fn zero(d: usize) -> Self {
        WeylOp {
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(d: usize) -> Self {
        WeylOp::constant(d, Rat::one())
    }

    pub fn constant(d: usize, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::one(2 * d), c);
        }
        WeylOp { d, terms }
    }

    /// The multiplication operator x_i.
    pub fn x(d: usize, i: usize) -> Self {
        assert!(i < d);
        WeylOp::from_term(d, Mono::var(2 * d, i), Rat::one())
    }

    /// The derivation d_i.
    pub fn dx(d: usize, i: usize) -> Self {
        assert!(i < d);
        WeylOp::from_term(d, Mono::var(2 * d, d + i), Rat::one())
    }

    pub fn from_term(d: usize, m: Mono, c: Rat) -> Self {
        let mut op = WeylOp::zero(d);
        op.add_term(m, c);
        op
    }

    /// Interpret a polynomial in x-variables as a multiplication operator.
    pub fn from_x_poly(p: &Poly) -> Self {
        let d = p.ring().nvars();
        let mut op = WeylOp::zero(d);
        for (m, c) in p.terms() {
            let mut e = vec![0u32; 2 * d];
            e[..d].copy_from_slice(&m.0);
            op.add_term(Mono(e), c.clone());
        }
        op
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        debug_assert_eq!(m.0.len(), 2 * self.d);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> WeylOp {
        if c.is_zero() {
            return WeylOp::zero(self.d);
        }
        WeylOp {
            d: self.d,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn add(&self, other: &WeylOp) -> WeylOp {
        assert_eq!(self.d, other.d);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &WeylOp) -> WeylOp {
        self.add(&other.scale(&-Rat::one()))
    }

    /// True when no x-variable occurs (a polynomial purely in the d_i).
    pub fn is_pure_diff(&self) -> bool {
        self.terms.keys().all(|m| m.0[..self.d].iter().all(|&e| e == 0))
    }

    /// Total order in the derivations (max |beta|).
    pub fn diff_order(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.0[self.d..].iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// (-w,w)-weight of a term: sum_i (beta_i - alpha_i) * w_i.
    fn term_weight(&self, m: &Mono, w: &[i64]) -> i64 {
        w.iter()
            .enumerate()
            .map(|(i, &wi)| (m.0[self.d + i] as i64 - m.0[i] as i64) * wi)
            .sum()
    }

    /// Highest-weight part with respect to the (-w,w) weight.
    pub fn initial_form(&self, w: &[i64]) -> WeylOp {
        assert_eq!(w.len(), self.d);
        let Some(top) = self.terms.keys().map(|m| self.term_weight(m, w)).max() else {
            return WeylOp::zero(self.d);
        };
        let mut out = WeylOp::zero(self.d);
        for (m, c) in &self.terms {
            if self.term_weight(m, w) == top {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// True when all terms share the same (-w,w)-weight.
    pub fn is_weight_homogeneous(&self, w: &[i64]) -> bool {
        let mut it = self.terms.keys().map(|m| self.term_weight(m, w));
        match it.next() {
            None => true,
            Some(first) => it.all(|v| v == first),
        }
    }
}

/// Normal-ordered product of two monomial operators:
/// x^a d^b * x^g d^e = sum_mu prod_i C(b_i,mu_i) C(g_i,mu_i) mu_i!
/// x^(a+g-mu) d^(b+e-mu).
fn mono_product(d: usize, lhs: &Mono, rhs: &Mono, c: &Rat, out: &mut WeylOp) {
    let (a, b) = lhs.0.split_at(d);
    let (g, e) = rhs.0.split_at(d);
    let caps: Vec<u32> = (0..d).map(|i| b[i].min(g[i])).collect();
    let mut mu = vec![0u32; d];
    loop {
        let mut coeff = BigInt::one();
        for i in 0..d {
            if mu[i] > 0 {
                coeff *= binom_big(b[i], mu[i]) * binom_big(g[i], mu[i]) * factorial_big(mu[i]);
            }
        }
        let mut m = vec![0u32; 2 * d];
        for i in 0..d {
            m[i] = a[i] + g[i] - mu[i];
            m[d + i] = b[i] + e[i] - mu[i];
        }
        out.add_term(Mono(m), c * Rat::from_integer(coeff));
        // odometer over mu <= caps
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

/// Product in A_d(Q); agrees with composition of differential operators.
pub fn weyl_product(a: &WeylOp, b: &WeylOp) -> Result<WeylOp> {
    if a.d != b.d {
        return Err(Error::DimensionMismatch(format!(
            "weyl_product: d = {} vs {}",
            a.d, b.d
        )));
    }
    let mut out = WeylOp::zero(a.d);
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            mono_product(a.d, ma, mb, &(ca * cb), &mut out);
        }
    }
    Ok(out)
}

/// Apply an operator to a polynomial in the x-variables:
/// x^a d^b acts as multiply-after-differentiate.
pub fn weyl_apply(op: &WeylOp, f: &Poly) -> Result<Poly> {
    let d = op.d;
    if f.ring().nvars() != d {
        return Err(Error::DimensionMismatch(format!(
            "weyl_apply: operator d = {} vs polynomial in {} variables",
            d,
            f.ring().nvars()
        )));
    }
    let mut out = Poly::zero(f.ring());
    for (m, c) in &op.terms {
        let (alpha, beta) = m.0.split_at(d);
        for (fm, fc) in f.terms() {
            // d^beta on x^fm: falling factorials
            let mut coef = fc * c;
            let mut ok = true;
            let mut e = vec![0u32; d];
            for i in 0..d {
                if fm.0[i] < beta[i] {
                    ok = false;
                    break;
                }
                let mut ff = BigInt::one();
                for j in 0..beta[i] {
                    ff *= BigInt::from(fm.0[i] - j);
                }
                coef *= Rat::from_integer(ff);
                e[i] = fm.0[i] - beta[i] + alpha[i];
            }
            if ok {
                out.add_term(Mono(e), coef);
            }
        }
    }
    Ok(out)
}

/// Fourier transform on A_d(Q): x_i -> d_i, d_i -> -x_i (normal-ordered).
pub fn fourier_op(op: &WeylOp) -> WeylOp {
    let d = op.d;
    let mut out = WeylOp::zero(d);
    for (m, c) in &op.terms {
        let (alpha, beta) = m.0.split_at(d);
        // F(x^a d^b) = d^a (-x)^b: multiply d^a * x^b and normal-order
        let mut lhs = vec![0u32; 2 * d];
        lhs[d..].copy_from_slice(alpha);
        let mut rhs = vec![0u32; 2 * d];
        rhs[..d].copy_from_slice(beta);
        let sign = if beta.iter().sum::<u32>().is_multiple_of(2) {
            c.clone()
        } else {
            -c.clone()
        };
        mono_product(d, &Mono(lhs), &Mono(rhs), &sign, &mut out);
    }
    out
}

/// Standard transposition tau: x^a d^b -> (-1)^|b| d^b x^a (normal-ordered).
/// Anti-automorphism with tau^2 = id.
pub fn transpose_tau(op: &WeylOp) -> WeylOp {
    let d = op.d;
    let mut out = WeylOp::zero(d);
    for (m, c) in &op.terms {
        let (alpha, beta) = m.0.split_at(d);
        let mut lhs = vec![0u32; 2 * d];
        lhs[d..].copy_from_slice(beta);
        let mut rhs = vec![0u32; 2 * d];
        rhs[..d].copy_from_slice(alpha);
        let sign = if beta.iter().sum::<u32>().is_multiple_of(2) {
            c.clone()
        } else {
            -c.clone()
        };
        mono_product(d, &Mono(lhs), &Mono(rhs), &sign, &mut out);
    }
    out
}

/// The operator s = -sum_i x_i d_i.
pub fn s_operator(d: usize) -> WeylOp {
    let mut out = WeylOp::zero(d);
    for i in 0..d {
        let mut e = vec![0u32; 2 * d];
        e[i] = 1;
        e[d + i] = 1;
        out.add_term(Mono(e), -Rat::one());
    }
    out
}

/// Univariate polynomial in the formal symbol s, coefficients ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SPoly(pub Vec<Rat>);

impl SPoly {
    pub fn one() -> Self {
        SPoly(vec![Rat::one()])
    }

    pub fn s() -> Self {
        SPoly(vec![Rat::zero(), Rat::one()])
    }

    /// Monic product of (s - r) over the given roots.
    pub fn from_roots(roots: &[Rat]) -> Self {
        let mut coeffs = vec![Rat::one()];
        for r in roots {
            // multiply by (s - r)
            let mut next = vec![Rat::zero(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            coeffs = next;
        }
        SPoly(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, v: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * v + c;
        }
        acc
    }
}

/// Substitute s = -sum x_i d_i into b(s) and normal-order (Horner scheme).
pub fn expand_s_polynomial(b: &SPoly, d: usize) -> WeylOp {
    assert!(d >= 1);
    let s = s_operator(d);
    let mut acc = WeylOp::zero(d);
    for c in b.0.iter().rev() {
        acc = weyl_product(&acc, &s).expect("same d");
        acc.add_term(Mono::one(2 * d), c.clone());
    }
    acc
}

// ---------------------------------------------------------------------------
// TElem: elements of A_d(Q)[T_1..T_{nt}] with central T-variables
// ---------------------------------------------------------------------------

/// Element of the T-extension of the Weyl algebra. T-variables commute with
/// everything, so this is a thin layer: a map from T-monomials to operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TElem {
    d: usize,
    nt: usize,
    terms: BTreeMap<Mono, WeylOp>,
}

impl TElem {
    pub fn zero(d: usize, nt: usize) -> Self {
        TElem {
            d,
            nt,
            terms: BTreeMap::new(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn num_tvars(&self) -> usize {
        self.nt
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &WeylOp)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, tmono: Mono, op: WeylOp) {
        debug_assert_eq!(tmono.0.len(), self.nt);
        debug_assert_eq!(op.d(), self.d);
        if op.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(tmono) {
            Entry::Vacant(e) => {
                e.insert(op);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&op);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Coefficient operator of the T-monomial, zero when absent.
    pub fn coeff(&self, tmono: &Mono) -> WeylOp {
        self.terms
            .get(tmono)
            .cloned()
            .unwrap_or_else(|| WeylOp::zero(self.d))
    }

    pub fn add(&self, other: &TElem) -> TElem {
        assert_eq!((self.d, self.nt), (other.d, other.nt));
        let mut out = self.clone();
        for (m, op) in &other.terms {
            out.add_term(m.clone(), op.clone());
        }
        out
    }

    pub fn product(&self, other: &TElem) -> Result<TElem> {
        if (self.d, self.nt) != (other.d, other.nt) {
            return Err(Error::DimensionMismatch("TElem product".into()));
        }
        let mut out = TElem::zero(self.d, self.nt);
        for (ma, opa) in &self.terms {
            for (mb, opb) in &other.terms {
                out.add_term(ma.mul(mb), weyl_product(opa, opb)?);
            }
        }
        Ok(out)
    }
}

/// Fourier transform on the T-extension: T-variables are fixed.
pub fn fourier(e: &TElem) -> TElem {
    let mut out = TElem::zero(e.d, e.nt);
    for (m, op) in &e.terms {
        out.add_term(m.clone(), fourier_op(op));
    }
    out
}

// ---------------------------------------------------------------------------
// Printing and parsing through the commutative scaffold ring
// [x_1..x_d, d1..dd, T-part]; the textual form is the normal order.
// ---------------------------------------------------------------------------

/// Commutative scaffold ring for printing/parsing operators: the x-names of
/// `xring` followed by `d1..dd`.
pub fn scaffold_ring(xring: &Ring) -> Ring {
    let d = xring.nvars();
    let mut names: Vec<String> = (0..d).map(|i| xring.name(i).to_string()).collect();
    for i in 0..d {
        names.push(format!("d{}", i + 1));
    }
    Ring::new(names, vec![VarKind::X; 2 * d])
}

impl WeylOp {
    pub fn to_scaffold_poly(&self, xring: &Ring) -> Poly {
        assert_eq!(xring.nvars(), self.d);
        let ring = scaffold_ring(xring);
        Poly::from_terms(
            &ring,
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn from_scaffold_poly(p: &Poly) -> WeylOp {
        let n = p.ring().nvars();
        assert!(n.is_multiple_of(2), "scaffold ring must have 2d variables");
        let mut op = WeylOp::zero(n / 2);
        for (m, c) in p.terms() {
            op.add_term(m.clone(), c.clone());
        }
        op
    }

    pub fn display<'a>(&'a self, xring: &'a Ring) -> impl fmt::Display + 'a {
        struct D<'b>(&'b WeylOp, &'b Ring);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0.to_scaffold_poly(self.1))
            }
        }
        D(self, xring)
    }
}

/// Parse a normally ordered operator in the corepoly grammar extended with
/// d-symbols (`d1`, `d2`, ...).
pub fn parse_weyl_op(text: &str, xring: &Ring) -> Result<WeylOp> {
    let ring = scaffold_ring(xring);
    Ok(WeylOp::from_scaffold_poly(&parse_poly(text, &ring)?))
}

impl TElem {
    /// Printing convention: x-part, then d-symbols, then T-part.
    pub fn display_string(&self, xring: &Ring, tnames: &[String]) -> String {
        assert_eq!(tnames.len(), self.nt);
        let d = self.d;
        let mut names: Vec<String> = (0..d).map(|i| xring.name(i).to_string()).collect();
        for i in 0..d {
            names.push(format!("d{}", i + 1));
        }
        names.extend_from_slice(tnames);
        let ring = Ring::new(names, vec![VarKind::X; 2 * d + self.nt]);
        let mut p = Poly::zero(&ring);
        for (tm, op) in &self.terms {
            for (m, c) in op.terms() {
                let mut e = m.0.clone();
                e.extend_from_slice(&tm.0);
                p.add_term(Mono(e), c.clone());
            }
        }
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corepoly::frac;

    fn op(text: &str, xring: &Ring) -> WeylOp {
        parse_weyl_op(text, xring).unwrap()
    }

    fn r2() -> Ring {
        Ring::poly_ring(&["x1", "x2"])
    }

    fn r3() -> Ring {
        Ring::poly_ring(&["x1", "x2", "x3"])
    }

    #[test]
    fn defining_relation() {
        let r = r2();
        let p = weyl_product(&op("d1", &r), &op("x1", &r)).unwrap();
        assert_eq!(p, op("x1*d1 + 1", &r));
    }

    #[test]
    fn leibniz_second_order() {
        let r = r2();
        // d1^2 * x1 = x1 d1^2 + 2 d1; cross-check by acting on x1^3
        let p = weyl_product(&op("d1^2", &r), &op("x1", &r)).unwrap();
        assert_eq!(p, op("x1*d1^2 + 2*d1", &r));
        let f = parse_poly("x1^3", &r).unwrap();
        let lhs = weyl_apply(&p, &f).unwrap();
        let rhs = weyl_apply(&op("d1^2", &r), &weyl_apply(&op("x1", &r), &f).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mixed_product() {
        let r = r2();
        // x1 d2 * x2 d1 = x1 x2 d1 d2 + x1 d1
        let p = weyl_product(&op("x1*d2", &r), &op("x2*d1", &r)).unwrap();
        assert_eq!(p, op("x1*x2*d1*d2 + x1*d1", &r));
        let f = parse_poly("x1^2*x2^2", &r).unwrap();
        let lhs = weyl_apply(&p, &f).unwrap();
        let rhs = weyl_apply(
            &op("x1*d2", &r),
            &weyl_apply(&op("x2*d1", &r), &f).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn apply_basics() {
        let r = r2();
        let f = parse_poly("x1^3", &r).unwrap();
        assert_eq!(
            weyl_apply(&op("d1", &r), &f).unwrap(),
            parse_poly("3*x1^2", &r).unwrap()
        );
        // Euler operator eigenvalue on x1^k
        for k in 1..=4 {
            let fk = parse_poly(&format!("x1^{k}"), &r).unwrap();
            let res = weyl_apply(&op("x1*d1", &r), &fk).unwrap();
            assert_eq!(res, fk.scale(&rat(k)));
        }
        // s acts by minus the degree
        let s = s_operator(2);
        let g = parse_poly("x1*x2", &r).unwrap();
        assert_eq!(weyl_apply(&s, &g).unwrap(), g.scale(&rat(-2)));
    }

    #[test]
    fn fourier_basics() {
        let r = r2();
        assert_eq!(fourier_op(&op("x1", &r)), op("d1", &r));
        assert_eq!(fourier_op(&op("d1", &r)), op("-x1", &r));
        assert_eq!(fourier_op(&op("x1*d1", &r)), op("-x1*d1 - 1", &r));
    }

    #[test]
    fn fourier_is_multiplicative_and_order_four() {
        let r = r2();
        let a = op("x1*d2 + 3*x2", &r);
        let b = op("d1*d2 - x1", &r);
        let fab = fourier_op(&weyl_product(&a, &b).unwrap());
        let fa_fb = weyl_product(&fourier_op(&a), &fourier_op(&b)).unwrap();
        assert_eq!(fab, fa_fb);
        let mut c = a.clone();
        for _ in 0..4 {
            c = fourier_op(&c);
        }
        assert_eq!(c, a);
    }

    #[test]
    fn tau_basics() {
        let r = r2();
        assert_eq!(transpose_tau(&op("x1", &r)), op("x1", &r));
        assert_eq!(transpose_tau(&op("d1", &r)), op("-d1", &r));
        assert_eq!(transpose_tau(&op("x1*d1", &r)), op("-x1*d1 - 1", &r));
        // anti-multiplicative + involutive
        let a = op("x1*d1 + d2", &r);
        let b = op("x2^2*d1 - 5", &r);
        let t_ab = transpose_tau(&weyl_product(&a, &b).unwrap());
        let tb_ta = weyl_product(&transpose_tau(&b), &transpose_tau(&a)).unwrap();
        assert_eq!(t_ab, tb_ta);
        assert_eq!(transpose_tau(&transpose_tau(&a)), a);
    }

    #[test]
    fn expand_s_basics() {
        let r = r2();
        assert_eq!(expand_s_polynomial(&SPoly::s(), 2), op("-x1*d1 - x2*d2", &r));
        assert_eq!(expand_s_polynomial(&SPoly::one(), 2), WeylOp::one(2));
        // s(s+1) for d=2
        let b = SPoly::from_roots(&[rat(0), rat(-1)]);
        let e = expand_s_polynomial(&b, 2);
        assert_eq!(e, op("x1^2*d1^2 + 2*x1*x2*d1*d2 + x2^2*d2^2", &r));
    }

    #[test]
    fn s_product_multinomial_identity() {
        // s(s+1)...(s+k) = (-1)^(k+1) sum_{|a|=k+1} (k+1)!/a! x^a d^a
        for d in 2..=4usize {
            for k in 0..=4u32 {
                let roots: Vec<Rat> = (0..=k).map(|r| rat(-(r as i64))).collect();
                let lhs = expand_s_polynomial(&SPoly::from_roots(&roots), d);
                let mut rhs = WeylOp::zero(d);
                let sign = if (k + 1) % 2 == 0 { rat(1) } else { rat(-1) };
                for alpha in crate::corepoly::compositions(k + 1, d) {
                    let mut denom = BigInt::one();
                    for &a in &alpha {
                        denom *= factorial_big(a);
                    }
                    let coef = Rat::new(factorial_big(k + 1), denom) * &sign;
                    let mut e = vec![0u32; 2 * d];
                    e[..d].copy_from_slice(&alpha);
                    e[d..].copy_from_slice(&alpha);
                    rhs.add_term(Mono(e), coef);
                }
                assert_eq!(lhs, rhs, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn telem_fourier_matches_spec_example() {
        // g1 = x*T1 + y*T2 + z*T3 -> L1 = d1*T1 + d2*T2 + d3*T3
        let r = r3();
        let mut g = TElem::zero(3, 4);
        let xs = ["x1", "x2", "x3"];
        for (i, xv) in xs.iter().enumerate() {
            g.add_term(Mono::var(4, i), op(xv, &r));
        }
        let l = fourier(&g);
        let mut expect = TElem::zero(3, 4);
        for i in 0..3 {
            expect.add_term(Mono::var(4, i), op(&format!("d{}", i + 1), &r));
        }
        assert_eq!(l, expect);
    }

    #[test]
    fn initial_form_weights() {
        let r = r2();
        let w = vec![-1i64, -1];
        // d1 + x1: weights -1 and +1 under w=(-1,..) -> initial form x1
        assert_eq!(op("d1 + x1", &r).initial_form(&w), op("x1", &r));
        // weight-homogeneous element is its own initial form
        let s2 = op("-x1*d1 - x2*d2 - 2", &r);
        assert_eq!(s2.initial_form(&w), s2);
        assert!(s2.is_weight_homogeneous(&w));
    }

    #[test]
    fn spoly_eval_and_roots() {
        let b = SPoly::from_roots(&[rat(0), rat(-1), frac(1, 2)]);
        assert!(b.eval(&rat(0)).is_zero());
        assert!(b.eval(&rat(-1)).is_zero());
        assert!(b.eval(&frac(1, 2)).is_zero());
        assert!(!b.eval(&rat(1)).is_zero());
        assert_eq!(b.degree(), 3);
    }

    #[test]
    fn telem_display_convention() {
        // x-part, then d-symbols, then T-part
        let r = r2();
        let mut e = TElem::zero(2, 3);
        e.add_term(Mono::var(3, 0), op("x1*d2", &r));
        e.add_term(Mono::var(3, 2), op("-d1", &r));
        let names = vec!["T1".to_string(), "T2".into(), "T3".into()];
        assert_eq!(e.display_string(&r, &names), "x1*d2*T1 - d1*T3");
    }

    #[test]
    fn operator_print_parse_round_trip() {
        let r = r2();
        let a = op("x1^2*d1*d2 - 1/3*x2 + 7", &r);
        let s = a.display(&r).to_string();
        assert_eq!(op(&s, &r), a);
    }
}
