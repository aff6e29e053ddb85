//! b-functions of holonomic left ideals and of quotient modules D^m/N,
//! computed by finitely many exact membership tests against the initial
//! ideal in_{(-w,w)}(J).
//!
//! Inside the theorem class every root lies in a known integer interval and
//! the b-function is squarefree, so the hard elimination `in(J) ∩ k[s]`
//! reduces to: test the full product P(s) = prod_{r in range} (s - r), then
//! drop one factor at a time; the factors whose removal breaks membership
//! are exactly the roots.

use crate::corepoly::{rat, MonoOrder, Rat};
use crate::error::{Error, Result};
use crate::gbcomm::GbOpts;
use crate::gbweyl::{
    component_intersect_opts, initial_forms, module_gb_opts, weyl_buchberger_opts,
    weyl_gb_weight_opts, DMatrix,
};
use crate::weyl::{expand_s_polynomial, SPoly, WeylOp};
use crate::RunCtl;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use std::fmt;

/// Monic univariate polynomial b(s) represented by the multiset of its
/// exact rational roots (integers in normal operation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BFunction {
    roots: Vec<Rat>, // sorted descending
}

impl BFunction {
    pub fn one() -> Self {
        BFunction { roots: Vec::new() }
    }

    pub fn from_roots(mut roots: Vec<Rat>) -> Self {
        roots.sort_by(|a, b| b.cmp(a));
        BFunction { roots }
    }

    pub fn from_integer_roots(roots: &[i64]) -> Self {
        BFunction::from_roots(roots.iter().map(|&r| rat(r)).collect())
    }

    pub fn roots(&self) -> &[Rat] {
        &self.roots
    }

    pub fn integer_roots(&self) -> Vec<i64> {
        self.roots
            .iter()
            .filter(|r| r.is_integer())
            .map(|r| {
                let n = r.to_integer();
                i64::try_from(&n).expect("root fits in i64")
            })
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn is_one(&self) -> bool {
        self.roots.is_empty()
    }

    /// The product over roots as a polynomial in s.
    pub fn to_spoly(&self) -> SPoly {
        SPoly::from_roots(&self.roots)
    }

    /// Least common multiple: maximum multiplicity of each root.
    pub fn lcm(&self, other: &BFunction) -> BFunction {
        let mut all: Vec<Rat> = Vec::new();
        let count = |roots: &[Rat], r: &Rat| roots.iter().filter(|x| *x == r).count();
        let mut seen: Vec<Rat> = Vec::new();
        for r in self.roots.iter().chain(&other.roots) {
            if !seen.contains(r) {
                seen.push(r.clone());
            }
        }
        for r in &seen {
            let m = count(&self.roots, r).max(count(&other.roots, r));
            for _ in 0..m {
                all.push(r.clone());
            }
        }
        BFunction::from_roots(all)
    }
}

impl fmt::Display for BFunction {
    /// Factored form in the transcript style: `(s)(s + 1)(s + 2)`, or `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.roots.is_empty() {
            return write!(f, "1");
        }
        for r in &self.roots {
            if r.is_zero() {
                write!(f, "(s)")?;
            } else if r.is_negative() {
                write!(f, "(s + {})", -r)?;
            } else {
                write!(f, "(s - {r})")?;
            }
        }
        Ok(())
    }
}

fn spoly_for_range(lo: i64, hi: i64, skip: Option<i64>) -> SPoly {
    let roots: Vec<Rat> = (lo..=hi)
        .filter(|r| Some(*r) != skip)
        .map(rat)
        .collect();
    SPoly::from_roots(&roots)
}

/// The monic generator of `in_{(-w,w)}(J) ∩ k[s]`, provided all of its roots
/// lie in `lo..=hi` and it is squarefree there.
///
/// Steps: (1) a (-w,w)-adapted basis and its initial forms give in(J);
/// (2) a term-order basis of in(J) decides membership; (3) 1 in in(J) means
/// b = 1; (4) the full product over the range must belong, otherwise the
/// range is exhausted; (5) a factor (s - r) is a root exactly when its
/// removal breaks membership.
pub fn b_function_ideal(
    gens: &[WeylOp],
    w: &[i64],
    lo: i64,
    hi: i64,
    ctl: &RunCtl,
) -> Result<BFunction> {
    b_function_ideal_inner(gens, w, lo, hi, ctl, 0)
}

fn b_function_ideal_inner(
    gens: &[WeylOp],
    w: &[i64],
    lo: i64,
    hi: i64,
    ctl: &RunCtl,
    component: usize,
) -> Result<BFunction> {
    if lo > hi {
        return Err(Error::InvalidInput("empty root range".into()));
    }
    let gens: Vec<WeylOp> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.is_empty() {
        // the zero ideal is not holonomic and has no b-function
        return Err(Error::RangeExhausted {
            component,
            lo,
            hi,
        });
    }
    let d = gens[0].d();
    let query_deg = (hi - lo + 1) as u32;
    // Pure-derivation weight-homogeneous generators are their own initial
    // forms and generate a graded ideal, so the term-order basis may be
    // truncated at the query degree.
    let graded = gens
        .iter()
        .all(|g| g.is_pure_diff() && g.is_weight_homogeneous(w));
    let infs = if graded {
        gens.to_vec()
    } else {
        let wgb = weyl_gb_weight_opts(
            &gens,
            w,
            &GbOpts {
                max_degree: None,
                ctl: *ctl,
            },
        )?;
        initial_forms(&wgb, w)
    };
    let opts = GbOpts {
        max_degree: graded.then_some(query_deg),
        ctl: *ctl,
    };
    let term_gb = weyl_buchberger_opts(&infs, MonoOrder::GrevLex, &opts)?;
    let member = |b: &SPoly| -> Result<bool> {
        let e = expand_s_polynomial(b, d);
        crate::gbweyl::weyl_ideal_member(&e, &term_gb)
    };
    if member(&SPoly::one())? {
        return Ok(BFunction::one());
    }
    if !member(&spoly_for_range(lo, hi, None))? {
        return Err(Error::RangeExhausted {
            component,
            lo,
            hi,
        });
    }
    let mut roots = Vec::new();
    for r in lo..=hi {
        ctl.check("b-function root test")?;
        if !member(&spoly_for_range(lo, hi, Some(r)))? {
            roots.push(r);
        }
    }
    Ok(BFunction::from_integer_roots(&roots))
}

/// b-function of the module D^m/N presented by the rows of `h`: the least
/// common multiple of the b-functions of the component ideals
/// J_i = pi_i(N ∩ D e_i). Component computations run in parallel.
pub fn b_function_module(
    h: &DMatrix,
    w: &[i64],
    lo: i64,
    hi: i64,
    ctl: &RunCtl,
) -> Result<BFunction> {
    if h.cols == 0 {
        return Err(Error::InvalidInput("module of rank zero".into()));
    }
    let query_deg = (hi - lo + 1) as u32;
    // Rows that are pure in the derivations and homogeneous generate a
    // graded submodule; a degree-truncated basis then answers every
    // membership query exactly.
    let graded = h.rows_diff_homogeneous();
    let opts = GbOpts {
        max_degree: graded.then_some(query_deg),
        ctl: *ctl,
    };
    let results: Result<Vec<BFunction>> = (0..h.cols)
        .into_par_iter()
        .map(|i| {
            let ngb = module_gb_opts(h, Some(i), MonoOrder::GrevLex, &opts)?;
            let ji = component_intersect_opts(&ngb, i, &opts)?;
            b_function_ideal_inner(&ji, w, lo, hi, ctl, i)
        })
        .collect();
    let mut b = BFunction::one();
    for bi in results? {
        b = b.lcm(&bi);
    }
    Ok(b)
}
