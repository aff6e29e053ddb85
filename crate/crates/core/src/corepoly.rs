//! Exact rational arithmetic, monomials, commutative polynomials, monomial
//! orders and bigraded bookkeeping shared by every other module.
//!
//! Coefficients are [`Rat`] (arbitrary-precision rationals, always reduced,
//! positive denominator) and never floating point. Term maps are kept in a
//! canonical order so all iteration and printing is reproducible.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Exact rational number: reduced, denominator positive.
pub type Rat = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational n/d.
pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Bidegree tag per variable: x-type has bideg (0,1), T-type has bideg (1,0).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    X,
    T,
}

/// Bidegree (p, q): p counts T-degree, q counts x-degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BiDeg {
    pub p: i64,
    pub q: i64,
}

impl BiDeg {
    pub fn new(p: i64, q: i64) -> Self {
        Self { p, q }
    }
}

impl std::ops::Add for BiDeg {
    type Output = BiDeg;
    fn add(self, rhs: BiDeg) -> BiDeg {
        BiDeg::new(self.p + rhs.p, self.q + rhs.q)
    }
}

#[derive(Debug, PartialEq, Eq)]
struct RingData {
    names: Vec<String>,
    kinds: Vec<VarKind>,
}

/// Ring descriptor: an ordered variable list with per-variable bidegree tags.
///
/// Cheap to clone (shared); equality is by content so rings built twice from
/// the same data are interchangeable.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Ring {}

impl Ring {
    pub fn new(names: Vec<String>, kinds: Vec<VarKind>) -> Self {
        assert_eq!(names.len(), kinds.len());
        Ring(Arc::new(RingData { names, kinds }))
    }

    /// Plain polynomial ring in x-type variables.
    pub fn poly_ring(names: &[&str]) -> Self {
        Ring::new(
            names.iter().map(|s| s.to_string()).collect(),
            vec![VarKind::X; names.len()],
        )
    }

    /// Bigraded ring: x-block first, then T-block.
    pub fn bigraded(xnames: &[String], tnames: &[String]) -> Self {
        let mut names = xnames.to_vec();
        names.extend_from_slice(tnames);
        let mut kinds = vec![VarKind::X; xnames.len()];
        kinds.extend(vec![VarKind::T; tnames.len()]);
        Ring::new(names, kinds)
    }

    /// New ring with one extra variable prepended (used for elimination).
    pub fn prepend(&self, name: &str, kind: VarKind) -> Self {
        let mut names = vec![name.to_string()];
        names.extend(self.0.names.iter().cloned());
        let mut kinds = vec![kind];
        kinds.extend(self.0.kinds.iter().cloned());
        Ring::new(names, kinds)
    }

    pub fn nvars(&self) -> usize {
        self.0.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0.names[i]
    }

    pub fn kind(&self, i: usize) -> VarKind {
        self.0.kinds[i]
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn indices_of_kind(&self, kind: VarKind) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.kind(i) == kind).collect()
    }

    pub fn bidegree_of(&self, m: &Mono) -> BiDeg {
        let mut p = 0i64;
        let mut q = 0i64;
        for (i, &e) in m.0.iter().enumerate() {
            match self.kind(i) {
                VarKind::T => p += e as i64,
                VarKind::X => q += e as i64,
            }
        }
        BiDeg::new(p, q)
    }
}

/// Monomial: fixed-length exponent vector, one slot per ring variable.
///
/// The derived `Ord` (lexicographic on the exponent vector) is only the
/// canonical storage order for term maps; comparisons that matter
/// mathematically go through [`MonoOrder`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(nvars: usize) -> Self {
        Mono(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Mono(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise quotient, or None when not divisible.
    pub fn try_div(&self, other: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Mono(out))
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn gcd_is_one(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

/// Monomial orders. All kinds used as term orders are total and
/// multiplicative; `Elimination` puts its block strictly above the rest.
#[derive(Clone, Debug)]
pub enum MonoOrder {
    Lex,
    GrevLex,
    Weighted {
        weights: Vec<i64>,
        tiebreak: Box<MonoOrder>,
    },
    /// Compare the block-restricted exponents first (by `inner_block`), then
    /// the remaining exponents (by `inner_rest`).
    Elimination {
        block: Vec<usize>,
        inner_block: Box<MonoOrder>,
        inner_rest: Box<MonoOrder>,
    },
}

impl MonoOrder {
    pub fn elim(block: Vec<usize>) -> Self {
        MonoOrder::Elimination {
            block,
            inner_block: Box::new(MonoOrder::GrevLex),
            inner_rest: Box::new(MonoOrder::GrevLex),
        }
    }

    /// Compare two monomials of equal length.
    pub fn compare(&self, a: &Mono, b: &Mono) -> Ordering {
        debug_assert_eq!(a.0.len(), b.0.len());
        self.cmp_slices(&a.0, &b.0)
    }

    fn cmp_slices(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonoOrder::Lex => {
                for (x, y) in a.iter().zip(b) {
                    match x.cmp(y) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            MonoOrder::GrevLex => {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                match da.cmp(&db) {
                    Ordering::Equal => {}
                    o => return o,
                }
                // last variable in which they differ: smaller exponent wins
                for (x, y) in a.iter().zip(b).rev() {
                    match x.cmp(y) {
                        Ordering::Equal => {}
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }
            MonoOrder::Weighted { weights, tiebreak } => {
                let wa: i64 = a.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum();
                let wb: i64 = b.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum();
                match wa.cmp(&wb) {
                    Ordering::Equal => tiebreak.cmp_slices(a, b),
                    o => o,
                }
            }
            MonoOrder::Elimination {
                block,
                inner_block,
                inner_rest,
            } => {
                let pa: Vec<u32> = block.iter().map(|&i| a[i]).collect();
                let pb: Vec<u32> = block.iter().map(|&i| b[i]).collect();
                match inner_block.cmp_slices(&pa, &pb) {
                    Ordering::Equal => {}
                    o => return o,
                }
                let ra: Vec<u32> = (0..a.len()).filter(|i| !block.contains(i)).map(|i| a[i]).collect();
                let rb: Vec<u32> = (0..b.len()).filter(|i| !block.contains(i)).map(|i| b[i]).collect();
                inner_rest.cmp_slices(&ra, &rb)
            }
        }
    }
}

/// Commutative multivariate polynomial over [`Rat`].
///
/// No zero coefficients are stored; the term map is keyed canonically so
/// iteration order is deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    ring: Ring,
    terms: BTreeMap<Mono, Rat>,
}

impl Poly {
    pub fn zero(ring: &Ring) -> Self {
        Poly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Poly::constant(ring, Rat::one())
    }

    pub fn constant(ring: &Ring, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::one(ring.nvars()), c);
        }
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Mono::var(ring.nvars(), i), Rat::one());
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_terms(ring: &Ring, iter: impl IntoIterator<Item = (Mono, Rat)>) -> Self {
        let mut p = Poly::zero(ring);
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
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

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Common total degree of all terms, or None if inhomogeneous or zero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.total_degree();
        if it.all(|m| m.total_degree() == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Common bidegree of all terms, or None if not bihomogeneous or zero.
    pub fn bidegree(&self) -> Option<BiDeg> {
        let mut it = self.terms.keys();
        let bd = self.ring.bidegree_of(it.next()?);
        if it.all(|m| self.ring.bidegree_of(m) == bd) {
            Some(bd)
        } else {
            None
        }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[i] = e - 1;
                out.add_term(m2, c * rat(e as i64));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one(&self.ring);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Map this polynomial into a target ring containing all its variables
    /// (matched by name).
    pub fn lift(&self, target: &Ring) -> Result<Poly> {
        if self.ring == *target {
            return Ok(self.clone());
        }
        let map: Vec<usize> = (0..self.ring.nvars())
            .map(|i| {
                target.find(self.ring.name(i)).ok_or_else(|| {
                    Error::RingMismatch(format!(
                        "variable `{}` missing from target ring",
                        self.ring.name(i)
                    ))
                })
            })
            .collect::<Result<_>>()?;
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.nvars()];
            for (i, &ei) in m.0.iter().enumerate() {
                e[map[i]] += ei;
            }
            out.add_term(Mono(e), c.clone());
        }
        Ok(out)
    }

    /// Map into a ring containing every variable that actually occurs
    /// (matched by name); inverse companion of [`Poly::lift`].
    pub fn restrict_to(&self, target: &Ring) -> Result<Poly> {
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.nvars()];
            for (i, &ei) in m.0.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                let j = target.find(self.ring.name(i)).ok_or_else(|| {
                    Error::RingMismatch(format!(
                        "variable `{}` survives restriction",
                        self.ring.name(i)
                    ))
                })?;
                e[j] += ei;
            }
            out.add_term(Mono(e), c.clone());
        }
        Ok(out)
    }

    /// Clear denominators and divide by the integer content; sign chosen so
    /// the display-leading coefficient is positive.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = num_integer::lcm(den_lcm, c.denom().clone());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * &den_lcm / c.denom();
            num_gcd = num_integer::gcd(num_gcd, n);
        }
        if num_gcd.is_zero() {
            num_gcd = BigInt::one();
        }
        let mut out = self.scale(&Rat::new(den_lcm, num_gcd));
        let lead = display_order_terms(&out)
            .first()
            .map(|(_, c)| (*c).clone())
            .unwrap_or_else(Rat::one);
        if lead.is_negative() {
            out = out.scale(&-Rat::one());
        }
        out
    }

    fn require_same_ring(&self, other: &Poly) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(
                "polynomials live in different rings".into(),
            ))
        }
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.require_same_ring(rhs).expect("ring mismatch in +");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.require_same_ring(rhs).expect("ring mismatch in -");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rat::one())
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        poly_product(self, rhs).expect("ring mismatch in *")
    }
}

/// Distributive product; bidegrees add for bihomogeneous inputs.
pub fn poly_product(a: &Poly, b: &Poly) -> Result<Poly> {
    a.require_same_ring(b)?;
    let mut out = Poly::zero(&a.ring);
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            out.add_term(ma.mul(mb), ca * cb);
        }
    }
    Ok(out)
}

/// Terms in canonical display order: total degree descending, then
/// exponent-vector lex descending.
pub fn display_order_terms(p: &Poly) -> Vec<(&Mono, &Rat)> {
    let mut v: Vec<(&Mono, &Rat)> = p.terms.iter().collect();
    v.sort_by(|(a, _), (b, _)| {
        b.total_degree()
            .cmp(&a.total_degree())
            .then_with(|| b.0.cmp(&a.0))
    });
    v
}

fn fmt_coeff_mono(
    f: &mut fmt::Formatter<'_>,
    c: &Rat,
    mono_str: &str,
    first: bool,
) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if mono_str.is_empty() {
        write!(f, "{abs}")
    } else if abs.is_one() {
        write!(f, "{mono_str}")
    } else {
        write!(f, "{abs}*{mono_str}")
    }
}

pub(crate) fn mono_string(ring: &Ring, m: &Mono) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 1 {
            parts.push(ring.name(i).to_string());
        } else if e > 1 {
            parts.push(format!("{}^{}", ring.name(i), e));
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in display_order_terms(self).iter().enumerate() {
            fmt_coeff_mono(f, c, &mono_string(&self.ring, m), i == 0)?;
        }
        Ok(())
    }
}

/// All monomials of the given bidegree, x-block and T-block each enumerated
/// in lex-descending order (earlier variable larger). Counts match the usual
/// binomial formulas.
pub fn monomials_of_bidegree(ring: &Ring, bd: BiDeg) -> Vec<Mono> {
    if bd.p < 0 || bd.q < 0 {
        return Vec::new();
    }
    let xs = ring.indices_of_kind(VarKind::X);
    let ts = ring.indices_of_kind(VarKind::T);
    if (bd.q > 0 && xs.is_empty()) || (bd.p > 0 && ts.is_empty()) {
        return Vec::new();
    }
    let xparts = compositions(bd.q as u32, xs.len().max(1));
    let tparts = compositions(bd.p as u32, ts.len().max(1));
    let mut out = Vec::with_capacity(xparts.len() * tparts.len());
    for tp in &tparts {
        for xp in &xparts {
            let mut e = vec![0u32; ring.nvars()];
            for (k, &i) in xs.iter().enumerate() {
                e[i] = xp[k];
            }
            for (k, &i) in ts.iter().enumerate() {
                e[i] = tp[k];
            }
            out.push(Mono(e));
        }
    }
    out
}

/// Exponent vectors of total degree `deg` in `n` slots, lex descending.
pub fn compositions(deg: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, pos: usize, rem: u32, n: usize) {
        if pos == n - 1 {
            cur[pos] = rem;
            out.push(cur.clone());
            return;
        }
        for e in (0..=rem).rev() {
            cur[pos] = e;
            rec(out, cur, pos + 1, rem - e, n);
        }
    }
    if n == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(&mut out, &mut cur, 0, deg, n);
    out
}

// ---------------------------------------------------------------------------
// Parser
//
// expr   := term (('+'|'-') term)*
// term   := coeff ('*'? factor)* | factor ('*'? factor)*
// factor := var ('^' uint)?
// coeff  := int ('/' uint)?
// Whitespace is insignificant; '*' is optional between factors.
// ---------------------------------------------------------------------------

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn parse_uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }

    fn parse_ident(&mut self) -> Result<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() || !self.src[self.pos].is_ascii_alphabetic() {
            return Err(self.err("expected an identifier"));
        }
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        Ok((
            std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .to_string(),
            start,
        ))
    }

    fn parse_factor(&mut self, ring: &Ring) -> Result<(usize, u32)> {
        let (name, at) = self.parse_ident()?;
        let idx = ring
            .find(&name)
            .ok_or(Error::UnknownVariable { name, pos: at })?;
        let mut exp = 1u32;
        if self.peek() == Some(b'^') {
            self.bump();
            let e = self.parse_uint()?;
            exp = u32::try_from(&e).map_err(|_| self.err("exponent too large"))?;
        }
        Ok((idx, exp))
    }

    fn parse_term(&mut self, ring: &Ring, sign: bool) -> Result<(Mono, Rat)> {
        let mut coeff = Rat::one();
        let mut mono = Mono::one(ring.nvars());
        let mut saw_any = false;
        if let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                let n = self.parse_uint()?;
                let mut q = Rat::from_integer(n);
                if self.peek() == Some(b'/') {
                    self.bump();
                    let d = self.parse_uint()?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    q /= Rat::from_integer(d);
                }
                coeff = q;
                saw_any = true;
            }
        }
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    let (idx, e) = self.parse_factor(ring)?;
                    mono.0[idx] += e;
                    saw_any = true;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let (idx, e) = self.parse_factor(ring)?;
                    mono.0[idx] += e;
                    saw_any = true;
                }
                _ => break,
            }
        }
        if !saw_any {
            return Err(self.err("expected a term"));
        }
        if sign {
            coeff = -coeff;
        }
        Ok((mono, coeff))
    }

    fn parse_expr(&mut self, ring: &Ring) -> Result<Poly> {
        let mut out = Poly::zero(ring);
        let mut sign = false;
        match self.peek() {
            Some(b'-') => {
                self.bump();
                sign = true;
            }
            Some(b'+') => {
                self.bump();
            }
            _ => {}
        }
        let (m, c) = self.parse_term(ring, sign)?;
        out.add_term(m, c);
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    let (m, c) = self.parse_term(ring, false)?;
                    out.add_term(m, c);
                }
                Some(b'-') => {
                    self.bump();
                    let (m, c) = self.parse_term(ring, true)?;
                    out.add_term(m, c);
                }
                Some(_) => return Err(self.err("unexpected character")),
                None => break,
            }
        }
        Ok(out)
    }
}

/// Parse a polynomial in the text grammar over the given ring.
///
/// Parsing a printed polynomial is a fixed point of print-then-parse.
pub fn parse_poly(text: &str, ring: &Ring) -> Result<Poly> {
    let mut p = Parser::new(text);
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(p.err("empty input"));
    }
    p.parse_expr(ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xyz() -> Ring {
        Ring::poly_ring(&["x", "y", "z"])
    }

    #[test]
    fn parse_single_monomial() {
        let r = xyz();
        let p = parse_poly("x^4", &r).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.to_string(), "x^4");
    }

    #[test]
    fn parse_ex1_generator() {
        let r = xyz();
        let p = parse_poly("-x^3*z + x*y*z^2", &r).unwrap();
        assert_eq!(p.num_terms(), 2);
        let q = parse_poly(&p.to_string(), &r).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parse_cancellation_gives_zero() {
        let r = xyz();
        let p = parse_poly("1/2*x - 1/2*x", &r).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn parse_errors_carry_position() {
        let r = xyz();
        match parse_poly("x + w", &r) {
            Err(Error::UnknownVariable { name, pos }) => {
                assert_eq!(name, "w");
                assert_eq!(pos, 4);
            }
            other => panic!("expected unknown variable, got {other:?}"),
        }
        assert!(matches!(parse_poly("x + ", &r), Err(Error::Syntax { .. })));
    }

    #[test]
    fn product_and_identity() {
        let r = xyz();
        let x = Poly::var(&r, 0);
        let y = Poly::var(&r, 1);
        let p = &(&x + &y) * &(&x - &y);
        let expect = parse_poly("x^2 - y^2", &r).unwrap();
        assert_eq!(p, expect);
        let one = Poly::one(&r);
        assert_eq!(&p * &one, p);
    }

    #[test]
    fn bidegree_additivity() {
        let r = Ring::bigraded(
            &["x".into(), "z".into()],
            &["T1".into(), "T2".into()],
        );
        let a = parse_poly("x*T1", &r).unwrap();
        let b = parse_poly("z*T2", &r).unwrap();
        assert_eq!(a.bidegree(), Some(BiDeg::new(1, 1)));
        let prod = &a * &b;
        assert_eq!(prod.bidegree(), Some(BiDeg::new(2, 2)));
        assert_eq!(prod.to_string(), "x*z*T1*T2");
    }

    #[test]
    fn monomials_of_bidegree_counts() {
        let r = Ring::bigraded(
            &["x".into(), "y".into(), "z".into()],
            &["T1".into(), "T2".into(), "T3".into(), "T4".into()],
        );
        let deg1 = monomials_of_bidegree(&r, BiDeg::new(1, 0));
        assert_eq!(deg1.len(), 4);
        assert_eq!(mono_string(&r, &deg1[0]), "T1");
        assert_eq!(mono_string(&r, &deg1[3]), "T4");
        let deg0 = monomials_of_bidegree(&r, BiDeg::new(0, 0));
        assert_eq!(deg0.len(), 1);
        assert!(deg0[0].is_one());
        let deg2 = monomials_of_bidegree(&r, BiDeg::new(2, 0));
        assert_eq!(deg2.len(), 10);
        assert_eq!(mono_string(&r, &deg2[0]), "T1^2");
        assert_eq!(mono_string(&r, &deg2[1]), "T1*T2");
        assert_eq!(mono_string(&r, &deg2[9]), "T4^2");
    }

    #[test]
    fn binomial_count_formula() {
        // monomials of degree q in n variables: C(q+n-1, n-1), q,n <= 5
        fn binom(n: u64, k: u64) -> u64 {
            if k > n {
                return 0;
            }
            let mut r = 1u64;
            for i in 0..k {
                r = r * (n - i) / (i + 1);
            }
            r
        }
        for n in 1..=5usize {
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let ring = Ring::poly_ring(&refs);
            for q in 0..=5u32 {
                let ms = monomials_of_bidegree(&ring, BiDeg::new(0, q as i64));
                assert_eq!(
                    ms.len() as u64,
                    binom(q as u64 + n as u64 - 1, n as u64 - 1),
                    "q={q} n={n}"
                );
            }
        }
    }

    #[test]
    fn order_comparisons() {
        let m = |e: &[u32]| Mono(e.to_vec());
        // lex: x^2 y > x y^2
        assert_eq!(
            MonoOrder::Lex.compare(&m(&[2, 1]), &m(&[1, 2])),
            Ordering::Greater
        );
        // grevlex: x > y
        assert_eq!(
            MonoOrder::GrevLex.compare(&m(&[1, 0]), &m(&[0, 1])),
            Ordering::Greater
        );
        // weighted (1,1) with lex tiebreak: x^2 > x y
        let w = MonoOrder::Weighted {
            weights: vec![1, 1],
            tiebreak: Box::new(MonoOrder::Lex),
        };
        assert_eq!(w.compare(&m(&[2, 0]), &m(&[1, 1])), Ordering::Greater);
        // grevlex in 3 vars: x*z < y^2 (same degree, z-exponent decides)
        assert_eq!(
            MonoOrder::GrevLex.compare(&m(&[1, 0, 1]), &m(&[0, 2, 0])),
            Ordering::Less
        );
    }

    #[test]
    fn elimination_order_blocks_dominate() {
        // block {0}: any monomial containing var 0 beats any without
        let ord = MonoOrder::elim(vec![0]);
        let m = |e: &[u32]| Mono(e.to_vec());
        assert_eq!(m(&[1, 0, 0]).total_degree(), 1);
        assert_eq!(ord.compare(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
        assert_eq!(ord.compare(&m(&[0, 2, 0]), &m(&[0, 0, 3])), Ordering::Less);
    }

    #[test]
    fn primitive_part_normalizes() {
        let r = xyz();
        let p = parse_poly("2/3*x - 4/3*y", &r).unwrap();
        let pp = p.primitive_part();
        assert_eq!(pp.to_string(), "x - 2*y");
        let q = parse_poly("-x + 2*y", &r).unwrap();
        assert_eq!(q.primitive_part().to_string(), "x - 2*y");
    }
}
