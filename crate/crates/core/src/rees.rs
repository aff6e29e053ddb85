//! End-to-end pipeline: validate the input class, build the symmetric
//! relations g_j and their Fourier transforms L_j, assemble the stacked
//! coefficient matrix H for each T-degree p, compute b_p, translate its
//! roots into the bigraded support of K = ker(Sym(I) -> R(I)), and derive
//! the special-fiber invariants.

use crate::bfun::{b_function_module, BFunction};
use crate::corepoly::{BiDeg, Mono, MonoOrder, Poly, Ring, VarKind};
use crate::error::{Error, Result};
use crate::gbcomm::{
    buchberger, height, ideal_equal, maximal_minors, syzygy_presentation, PresMatrix,
};
use crate::gbweyl::DMatrix;
use crate::weyl::{fourier, TElem, WeylOp};
use crate::RunCtl;
use std::collections::{BTreeMap, BTreeSet};

/// Validated pipeline input: the dimension d, the presentation matrix, the
/// derived generators (signed maximal minors) and the degree data.
#[derive(Clone, Debug)]
pub struct ReesInput {
    xring: Ring,
    tnames: Vec<String>,
    phi: PresMatrix,
    given_gens: Option<Vec<Poly>>,
    derived: Option<Derived>,
}

#[derive(Clone, Debug)]
struct Derived {
    gens: Vec<Poly>,
    nu: u32,
    nus: Vec<u32>,
}

impl ReesInput {
    /// Build from a presentation matrix given as rows of polynomials over
    /// the x-ring. Shape and homogeneity defects are reported by
    /// [`validate_input`], not here.
    pub fn from_matrix(xring: &Ring, tnames: &[String], rows: Vec<Vec<Poly>>) -> Result<Self> {
        let phi = PresMatrix::from_rows(xring, rows)?;
        if tnames.len() != phi.rows {
            return Err(Error::InvalidInput(format!(
                "{} T-variable names for {} matrix rows",
                tnames.len(),
                phi.rows
            )));
        }
        let mut input = ReesInput {
            xring: xring.clone(),
            tnames: tnames.to_vec(),
            phi,
            given_gens: None,
            derived: None,
        };
        input.derive();
        Ok(input)
    }

    /// Build from d+1 generators of equal degree; the presentation matrix is
    /// the minimal first syzygy matrix.
    pub fn from_gens(xring: &Ring, tnames: &[String], gens: Vec<Poly>) -> Result<Self> {
        let phi = syzygy_presentation(&gens)?;
        if tnames.len() != phi.rows {
            return Err(Error::InvalidInput(format!(
                "{} T-variable names for {} generators",
                tnames.len(),
                phi.rows
            )));
        }
        let mut input = ReesInput {
            xring: xring.clone(),
            tnames: tnames.to_vec(),
            phi,
            given_gens: Some(gens),
            derived: None,
        };
        input.derive();
        Ok(input)
    }

    fn derive(&mut self) {
        let d = self.d();
        if self.phi.rows != d + 1 || self.phi.cols != d {
            return;
        }
        let Ok(nus) = self.phi.column_degrees() else {
            return;
        };
        let nu: u32 = nus.iter().sum();
        let Ok(gens) = maximal_minors(&self.phi) else {
            return;
        };
        if gens.iter().any(|g| g.is_zero()) {
            return;
        }
        self.derived = Some(Derived { gens, nu, nus });
    }

    pub fn d(&self) -> usize {
        self.xring.nvars()
    }

    pub fn xring(&self) -> &Ring {
        &self.xring
    }

    pub fn tnames(&self) -> &[String] {
        &self.tnames
    }

    pub fn phi(&self) -> &PresMatrix {
        &self.phi
    }

    /// The bigraded ring S = Q[x-block, T-block].
    pub fn bigraded_ring(&self) -> Ring {
        let xnames: Vec<String> = (0..self.d())
            .map(|i| self.xring.name(i).to_string())
            .collect();
        Ring::bigraded(&xnames, &self.tnames)
    }

    fn need_derived(&self) -> Result<&Derived> {
        self.derived.as_ref().ok_or_else(|| {
            Error::ValidationFailed(
                "input is not a (d+1) x d matrix with nonzero homogeneous columns".into(),
            )
        })
    }

    /// Signed maximal minors of phi, in row order.
    pub fn gens(&self) -> Result<&[Poly]> {
        Ok(&self.need_derived()?.gens)
    }

    /// Common generator degree nu = sum of column degrees.
    pub fn nu(&self) -> Result<u32> {
        Ok(self.need_derived()?.nu)
    }

    /// Column degrees nu_1..nu_d.
    pub fn nus(&self) -> Result<&[u32]> {
        Ok(&self.need_derived()?.nus)
    }

    /// Default root search range {-(nu-d), .., 0}.
    pub fn default_root_range(&self) -> Result<(i64, i64)> {
        let nu = self.nu()? as i64;
        let d = self.d() as i64;
        Ok((-(nu - d), 0))
    }

    /// Default p range d .. d + 2(nu-d) + 2.
    pub fn default_p_range(&self) -> Result<(i64, i64)> {
        let nu = self.nu()? as i64;
        let d = self.d() as i64;
        Ok((d, d + 2 * (nu - d) + 2))
    }
}

/// One validation check: name, verdict, supporting detail.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Verdicts for every hypothesis of the theorem class.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail,
        });
    }
}

/// Run every hypothesis check: shape, homogeneity, equal generator degree,
/// ht I = 2, Hilbert-Burch equality, and the G_d Fitting heights.
pub fn validate_input(input: &ReesInput) -> Result<ValidationReport> {
    let d = input.d();
    let mut rep = ValidationReport { checks: Vec::new() };
    let shape_ok = input.phi.rows == d + 1 && input.phi.cols == d && d >= 3;
    rep.push(
        "shape",
        shape_ok,
        format!(
            "matrix is {} x {} over {} variables (want (d+1) x d, d >= 3)",
            input.phi.rows,
            input.phi.cols,
            d
        ),
    );
    let homog = input.phi.column_degrees();
    match &homog {
        Ok(nus) => rep.push("homogeneity", true, format!("column degrees {nus:?}")),
        Err(e) => rep.push("homogeneity", false, e.to_string()),
    }
    if !shape_ok || homog.is_err() || input.derived.is_none() {
        let detail = if shape_ok && homog.is_ok() {
            "a maximal minor vanishes; the minors do not minimally generate a theorem-class ideal"
        } else {
            "skipped: earlier check failed"
        };
        for name in [
            "equal generator degree",
            "height of I",
            "Hilbert-Burch equality",
            "height of I_1(phi)",
            "G_d Fitting heights",
        ] {
            rep.push(name, false, detail.into());
        }
        return Ok(rep);
    }
    let der = input.need_derived()?;
    let equal_deg = der
        .gens
        .iter()
        .all(|g| g.homogeneous_degree() == Some(der.nu));
    rep.push(
        "equal generator degree",
        equal_deg,
        format!("nu = {}", der.nu),
    );

    let gb = buchberger(&der.gens, MonoOrder::GrevLex)?;
    let ht = height(&gb);
    rep.push("height of I", ht == 2, format!("ht I = {ht}"));

    let hb = match &input.given_gens {
        None => Check {
            name: "Hilbert-Burch equality".into(),
            pass: true,
            detail: "generators taken as the signed maximal minors of phi".into(),
        },
        Some(gens) => {
            let eq = ideal_equal(gens, &der.gens, MonoOrder::GrevLex)?;
            Check {
                name: "Hilbert-Burch equality".into(),
                pass: eq,
                detail: if eq {
                    "ideal of given generators equals I_d(phi)".into()
                } else {
                    "given generators do not span I_d(phi)".into()
                },
            }
        }
    };
    rep.checks.push(hb);

    let h1 = fitting_height(input, 1)?;
    rep.push(
        "height of I_1(phi)",
        h1 == d as i64,
        format!("ht I_1(phi) = {h1}, want {d}"),
    );

    let mut gd_ok = true;
    let mut gd_detail = Vec::new();
    for t in 2..=d {
        let ht_t = fitting_height(input, t)?;
        let want = (d + 1 - t) as i64;
        gd_detail.push(format!("ht I_{t}(phi) = {ht_t} (> {want}?)"));
        if ht_t <= want {
            gd_ok = false;
        }
    }
    rep.push("G_d Fitting heights", gd_ok, gd_detail.join("; "));
    Ok(rep)
}

/// Height of the ideal of t x t minors of phi.
pub fn fitting_height(input: &ReesInput, t: usize) -> Result<i64> {
    let phi = &input.phi;
    let mut minors = Vec::new();
    let rows: Vec<usize> = (0..phi.rows).collect();
    let cols: Vec<usize> = (0..phi.cols).collect();
    for rsel in combinations(&rows, t) {
        for csel in combinations(&cols, t) {
            let det = crate::gbcomm::determinant(&input.xring, t, &|r, c| {
                phi.entry(rsel[r], csel[c]).clone()
            });
            if !det.is_zero() {
                minors.push(det);
            }
        }
    }
    if minors.is_empty() {
        return Ok(0);
    }
    let gb = buchberger(&minors, MonoOrder::GrevLex)?;
    Ok(height(&gb))
}

fn combinations<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let n = items.len();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The linear forms `g_j = sum_i phi[i][j] T_i` of Sym(I), as elements of the
/// bigraded ring S.
pub fn symmetric_ideal_gens(input: &ReesInput) -> Result<Vec<Poly>> {
    let s = input.bigraded_ring();
    let d = input.d();
    let mut out = Vec::with_capacity(d);
    for j in 0..input.phi.cols {
        let mut g = Poly::zero(&s);
        for i in 0..input.phi.rows {
            let a = input.phi.entry(i, j).lift(&s)?;
            let ti = Poly::var(&s, s.find(&input.tnames[i]).unwrap());
            g = &g + &(&a * &ti);
        }
        out.push(g);
    }
    Ok(out)
}

/// The g_j as elements of the Weyl T-extension, and their Fourier images
/// L_j. Each g_j has bidegree (1, nu_j); L_j replaces x-coefficients by the
/// corresponding constant-coefficient operators in the derivations.
pub fn symmetric_relations(input: &ReesInput) -> Result<(Vec<TElem>, Vec<TElem>)> {
    let d = input.d();
    let nt = input.tnames.len();
    input.need_derived()?;
    let mut gs = Vec::with_capacity(input.phi.cols);
    for j in 0..input.phi.cols {
        let mut g = TElem::zero(d, nt);
        for i in 0..input.phi.rows {
            let a = input.phi.entry(i, j);
            if !a.is_zero() {
                g.add_term(Mono::var(nt, i), WeylOp::from_x_poly(a));
            }
        }
        gs.push(g);
    }
    let ls: Vec<TElem> = gs.iter().map(fourier).collect();
    Ok((gs, ls))
}

/// The stacked coefficient matrix H: for each operator L_i the block
/// `[L_i]` maps the degree-(p-d) T-monomials (columns) to the degree-(p-d+1)
/// T-monomials (rows), both in lex order; entry (gamma, beta) is the
/// coefficient operator of T_r in L_i when gamma = beta + e_r.
pub fn build_h(ls: &[TElem], p: i64) -> Result<DMatrix> {
    let d = ls
        .first()
        .map(|l| l.d())
        .ok_or_else(|| Error::InvalidInput("build_h: no operators".into()))?;
    if p < d as i64 {
        return Err(Error::InvalidInput(format!("build_h: p = {p} < d = {d}")));
    }
    let nt = ls[0].num_tvars();
    let k = (p - d as i64) as u32;
    let cols = crate::corepoly::compositions(k, nt);
    let rows = crate::corepoly::compositions(k + 1, nt);
    let m = cols.len();
    let n = rows.len();
    debug_assert_eq!(m as u64, binom(p as u64, d as u64));
    debug_assert_eq!(n as u64, binom(p as u64 + 1, d as u64));
    let mut hrows: Vec<Vec<WeylOp>> = Vec::with_capacity(d * n);
    for l in ls {
        if l.d() != d || l.num_tvars() != nt {
            return Err(Error::DimensionMismatch("build_h: mixed operators".into()));
        }
        for gamma in &rows {
            let mut row = vec![WeylOp::zero(d); m];
            for (bi, beta) in cols.iter().enumerate() {
                // gamma = beta + e_r for exactly one r, if any
                let mut r = None;
                let mut ok = true;
                for t in 0..nt {
                    match gamma[t] as i64 - beta[t] as i64 {
                        0 => {}
                        1 if r.is_none() => r = Some(t),
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    if let Some(r) = r {
                        row[bi] = l.coeff(&Mono::var(nt, r));
                    }
                }
            }
            hrows.push(row);
        }
    }
    DMatrix::from_rows(d, hrows)
}

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

/// The b-function b_p of the module D^m/N at T-degree p, over the default
/// or overridden root range.
pub fn b_p(
    input: &ReesInput,
    p: i64,
    root_range: Option<(i64, i64)>,
    ctl: &RunCtl,
) -> Result<BFunction> {
    let (_, ls) = symmetric_relations(input)?;
    let h = build_h(&ls, p)?;
    let (lo, hi) = match root_range {
        Some(r) => r,
        None => input.default_root_range()?,
    };
    let w = vec![-1i64; input.d()];
    b_function_module(&h, &w, lo, hi, ctl)
}

/// Bigraded support of K read off the roots of b_p: K_{p,u} != 0 exactly
/// when b_p(-nu + d + u) = 0, that is u = root + nu - d.
pub fn k_support_from_b(b: &BFunction, p: i64, nu: u32, d: usize) -> Vec<(i64, i64)> {
    b.integer_roots()
        .iter()
        .map(|root| (p, root + nu as i64 - d as i64))
        .collect()
}

/// Set of bidegrees (p, u) with K_{p,u} != 0, with dimensions attached when
/// an oracle computed them.
#[derive(Clone, Debug, Default)]
pub struct KSupport {
    pub entries: BTreeSet<(i64, i64)>,
    pub dims: BTreeMap<(i64, i64), usize>,
}

impl KSupport {
    pub fn from_bfunctions(bs: &[(i64, BFunction)], nu: u32, d: usize) -> Self {
        let mut out = KSupport::default();
        for (p, b) in bs {
            for e in k_support_from_b(b, *p, nu, d) {
                out.entries.insert(e);
            }
        }
        out
    }

    /// Attach an oracle-computed dimension to a supported bidegree.
    pub fn attach_dim(&mut self, p: i64, u: i64, dim: usize) {
        if self.entries.contains(&(p, u)) {
            self.dims.insert((p, u), dim);
        }
    }
}

/// Special-fiber invariants: the fiber ideal is principal with generator of
/// T-degree p0, which pins relation type, regularity, multiplicity and
/// reduction number.
#[derive(Clone, Debug)]
pub struct FiberInvariants {
    pub p0: i64,
    pub reltype: i64,
    pub reg: i64,
    pub multiplicity: i64,
    pub reduction_number: i64,
    pub fiber_equation: Poly,
}

/// Compute the fiber ideal I_{*,0} by eliminating the x-variables from the
/// Rees ideal, verify it is principal, and derive the invariants of the
/// hypersurface fiber ring.
pub fn fiber_invariants(input: &ReesInput, ctl: &RunCtl) -> Result<FiberInvariants> {
    let rgb = crate::oracle::rees_ideal(input, ctl)?;
    let s = rgb.gb.ring().clone();
    let xidx: Vec<usize> = s.indices_of_kind(VarKind::X);
    let fiber_gens_s = crate::gbcomm::eliminate_ctl(&rgb.gb, &xidx, ctl)?;
    // move to U = Q[T] and take the reduced basis there
    let uring = Ring::new(
        input.tnames.clone(),
        vec![VarKind::T; input.tnames.len()],
    );
    let restricted: Vec<Poly> = fiber_gens_s
        .iter()
        .map(|g| g.restrict_to(&uring))
        .collect::<Result<_>>()?;
    if restricted.is_empty() {
        return Err(Error::NotPrincipal("fiber ideal is zero".into()));
    }
    let ugb = buchberger(&restricted, MonoOrder::GrevLex)?;
    if ugb.basis().len() != 1 {
        return Err(Error::NotPrincipal(format!(
            "reduced basis of the fiber ideal has {} elements",
            ugb.basis().len()
        )));
    }
    let gen = ugb.basis()[0].primitive_part();
    let p0 = gen
        .homogeneous_degree()
        .ok_or_else(|| Error::NotPrincipal("fiber generator is not homogeneous".into()))?
        as i64;
    Ok(FiberInvariants {
        p0,
        reltype: p0,
        reg: p0 - 1,
        multiplicity: p0,
        reduction_number: p0 - 1,
        fiber_equation: gen,
    })
}

/// Heuristic reading of candidate generator degrees: emit (p, u_min(p))
/// at every p where the minimal supported x-degree strictly drops; the
/// largest emitted p is a lower bound for the relation type of R(I).
///
/// The output is a heuristic observation, not a certified generator list.
pub fn infer_generator_degrees(
    bs: &[(i64, BFunction)],
    nu: u32,
    d: usize,
) -> Result<(Vec<BiDeg>, i64)> {
    if bs.is_empty() {
        return Err(Error::InvalidInput("no b-functions given".into()));
    }
    for (k, (p, _)) in bs.iter().enumerate() {
        if *p != d as i64 + k as i64 {
            return Err(Error::InvalidInput(
                "b-functions must cover consecutive p starting at d".into(),
            ));
        }
    }
    let mut out = Vec::new();
    let mut cur_min: Option<i64> = None;
    for (p, b) in bs {
        let Some(min_root) = b.integer_roots().into_iter().min() else {
            continue;
        };
        let u_min = nu as i64 - d as i64 + min_root;
        if cur_min.is_none_or(|m| u_min < m) {
            out.push(BiDeg::new(*p, u_min));
            cur_min = Some(u_min);
        }
    }
    let reltype_lb = out.iter().map(|bd| bd.p).max().unwrap_or(d as i64);
    Ok((out, reltype_lb))
}

/// Construct the ring `Q[x,y,z]` with T-names a,b,c,d (used by
/// tests and examples throughout).
pub fn example_ring() -> (Ring, Vec<String>) {
    (
        Ring::poly_ring(&["x", "y", "z"]),
        vec!["a".into(), "b".into(), "c".into(), "d".into()],
    )
}

/// Test-support constructors for the worked examples.
#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use crate::corepoly::parse_poly;

    pub fn parse_or_zero(s: &str, r: &Ring) -> Poly {
        if s == "0" {
            Poly::zero(r)
        } else {
            parse_poly(s, r).unwrap()
        }
    }

    pub fn input_from_strs(rows: &[[&str; 3]]) -> ReesInput {
        let (xring, tnames) = example_ring();
        let rows: Vec<Vec<Poly>> = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_or_zero(s, &xring)).collect())
            .collect();
        ReesInput::from_matrix(&xring, &tnames, rows).unwrap()
    }

    pub fn ex1_input() -> ReesInput {
        input_from_strs(&[
            ["x", "0", "0"],
            ["y", "x", "0"],
            ["z", "y", "x^2"],
            ["0", "z", "z^2"],
        ])
    }

    pub fn ex2_input() -> ReesInput {
        input_from_strs(&[
            ["x", "0", "0"],
            ["y", "x", "0"],
            ["z", "y", "x^5"],
            ["0", "z", "z^5"],
        ])
    }
}
