//! Discrete geometry over `(Z/p)^n`: boxes and oriented chains, modular
//! line integrals, differential forms and the wedge derivative, span
//! functions, geometry derivation, relative chains and subspaces.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{self, add_mod, mul_mod, sub_mod};
use crate::calculus::{self, clean_derivative_poly, pairing_table, CalcFn, IntegralKernel};
use crate::digital::{independence_check, square_invert, SquareGroup};
use crate::error::{Error, Result};
use crate::linalg::det_mod_prime;
use crate::poly::{grid_index, grid_points, Poly};

/// Axis-aligned box `Π [a_i, b_i]` in integer track coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridBox {
    pub intervals: Vec<(i128, i128)>,
}

impl GridBox {
    pub fn new(intervals: Vec<(i128, i128)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidArgument("box needs dimension >= 1".into()));
        }
        if intervals.iter().any(|(a, b)| a > b) {
            return Err(Error::InvalidArgument("box interval with a > b".into()));
        }
        Ok(GridBox { intervals })
    }

    pub fn dim(&self) -> usize {
        self.intervals.len()
    }

    /// True when some interval is longer than one period of `p`.
    pub fn wraps(&self, p: u64) -> bool {
        self.intervals.iter().any(|(a, b)| b - a >= p as i128)
    }

    pub fn cell(&self) -> Cell {
        Cell { axes: self.intervals.iter().map(|&(a, b)| Axis::Free(a, b)).collect() }
    }

    /// Lattice points of `Π (a_i, b_i]`, reduced mod `p`.
    pub fn half_open_points(&self, p: u64) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = vec![vec![]];
        for &(a, b) in &self.intervals {
            let mut next = Vec::new();
            for prefix in &out {
                for x in (a + 1)..=b {
                    let mut v = prefix.clone();
                    v.push(arith::reduce_i128(x, p));
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    Fixed(i128),
    Free(i128, i128),
}

/// A box with some coordinates frozen.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub axes: Vec<Axis>,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.axes.iter().filter(|a| matches!(a, Axis::Free(..))).count()
    }

    /// Faces with sign `(-1)^j` for the `j`-th free axis: `+` at `b`, `-` at `a`.
    pub fn faces(&self) -> Vec<(i64, Cell)> {
        let mut out = Vec::new();
        let mut j = 0;
        for (i, axis) in self.axes.iter().enumerate() {
            if let Axis::Free(a, b) = *axis {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let mut hi = self.clone();
                hi.axes[i] = Axis::Fixed(b);
                let mut lo = self.clone();
                lo.axes[i] = Axis::Fixed(a);
                out.push((sign, hi));
                out.push((-sign, lo));
                j += 1;
            }
        }
        out
    }
}

/// Formal integer combination of cells.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub terms: BTreeMap<Cell, i64>,
}

impl Chain {
    pub fn from_cell(c: Cell) -> Self {
        let mut ch = Chain::default();
        ch.add(c, 1);
        ch
    }

    pub fn add(&mut self, c: Cell, k: i64) {
        let e = self.terms.entry(c.clone()).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.remove(&c);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn boundary(&self) -> Chain {
        let mut out = Chain::default();
        for (c, &k) in &self.terms {
            for (s, f) in c.faces() {
                out.add(f, s * k);
            }
        }
        out
    }
}

pub fn boundary(b: &GridBox) -> Chain {
    Chain::from_cell(b.cell()).boundary()
}

/// Staircase path `l = Σ l_i` from `start` to `end`: segment `i` moves
/// `x_i` with earlier coordinates at their end values and later ones at
/// their start values.
pub fn staircase_path(start: &[i128], end: &[i128]) -> Result<Chain> {
    if start.len() != end.len() {
        return Err(Error::InvalidArgument("endpoint dimensions differ".into()));
    }
    let n = start.len();
    let mut ch = Chain::default();
    for i in 0..n {
        let (a, b) = (start[i], end[i]);
        if a == b {
            continue;
        }
        let axes = (0..n)
            .map(|j| match j.cmp(&i) {
                std::cmp::Ordering::Less => Axis::Fixed(end[j]),
                std::cmp::Ordering::Greater => Axis::Fixed(start[j]),
                std::cmp::Ordering::Equal => Axis::Free(a.min(b), a.max(b)),
            })
            .collect();
        ch.add(Cell { axes }, if a < b { 1 } else { -1 });
    }
    Ok(ch)
}

/// Differential form or tensor over `n` variables modulo `p`. Antisymmetric
/// forms store strictly increasing index tuples only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffForm {
    pub nvars: usize,
    pub p: u64,
    pub degree: usize,
    pub antisymmetric: bool,
    components: BTreeMap<Vec<usize>, Poly>,
}

impl DiffForm {
    pub fn zero(nvars: usize, p: u64, degree: usize, antisymmetric: bool) -> Self {
        DiffForm { nvars, p, degree, antisymmetric, components: BTreeMap::new() }
    }

    /// `Σ_i f_i Dx_i`.
    pub fn one_form(coeffs: Vec<Poly>, p: u64) -> Result<Self> {
        let n = coeffs.len();
        let mut f = Self::zero(n, p, 1, true);
        for (i, c) in coeffs.into_iter().enumerate() {
            if c.nvars() != n || c.modulus() != p {
                return Err(Error::InvalidArgument("coefficient arity or modulus mismatch".into()));
            }
            f.add_component(vec![i], &c)?;
        }
        Ok(f)
    }

    /// Adds `c Dx_{idx[0]} ∧ ...` (or `⊗` for tensors), normalizing order.
    pub fn add_component(&mut self, idx: Vec<usize>, c: &Poly) -> Result<()> {
        if idx.len() != self.degree || idx.iter().any(|&i| i >= self.nvars) {
            return Err(Error::InvalidArgument("component index out of shape".into()));
        }
        let (key, coeff) = if self.antisymmetric {
            match sort_with_sign(&idx) {
                None => return Ok(()),
                Some((sorted, neg)) => (sorted, if neg { c.neg() } else { c.clone() }),
            }
        } else {
            (idx, c.clone())
        };
        let coeff = coeff.clean(self.p);
        let sum = match self.components.remove(&key) {
            Some(old) => old.add(&coeff),
            None => coeff,
        };
        if !sum.is_zero() {
            self.components.insert(key, sum);
        }
        Ok(())
    }

    pub fn component(&self, idx: &[usize]) -> Poly {
        self.components.get(idx).cloned().unwrap_or_else(|| Poly::zero(self.nvars, self.p))
    }

    pub fn components(&self) -> &BTreeMap<Vec<usize>, Poly> {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }
}

fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut neg = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                neg = !neg;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, neg))
}

/// `DF = Σ_i (DF/Dx_i) Dx_i` with clean partial derivations.
pub fn differential(f: &CalcFn) -> DiffForm {
    let n = f.nvars();
    let coeffs = (0..n).map(|i| clean_derivative_poly(f.poly(), i, f.p())).collect();
    DiffForm::one_form(coeffs, f.p()).expect("shape matches")
}

/// `D^∧(K Dx_I) = Σ_j (DK/Dx_j) Dx_j ∧ Dx_I`.
pub fn wedge_derivative(form: &DiffForm) -> Result<DiffForm> {
    if !form.antisymmetric {
        return Err(Error::Precondition("wedge derivative needs an antisymmetric form".into()));
    }
    let mut out = DiffForm::zero(form.nvars, form.p, form.degree + 1, true);
    for (idx, k) in &form.components {
        for j in 0..form.nvars {
            if idx.contains(&j) {
                continue;
            }
            let dk = clean_derivative_poly(k, j, form.p);
            let mut full = vec![j];
            full.extend_from_slice(idx);
            out.add_component(full, &dk)?;
        }
    }
    Ok(out)
}

fn restrict_table(f: &Poly, axis: usize, fixed: &[u64], p: u64) -> Vec<u64> {
    (0..p)
        .map(|y| {
            let mut pt = fixed.to_vec();
            pt[axis] = y;
            f.eval(&pt)
        })
        .collect()
}

/// `∫_l Σ_i f_i Dx_i` over a chain of axis-aligned edges: each edge pairs
/// its own coefficient along the free axis, other axes frozen.
pub fn line_integral(form: &DiffForm, chain: &Chain, k: &IntegralKernel) -> Result<u64> {
    if form.degree != 1 {
        return Err(Error::InvalidArgument("line integral needs a 1-form".into()));
    }
    let p = form.p;
    let mut acc = 0u64;
    for (cell, &mult) in &chain.terms {
        if cell.dim() != 1 || cell.axes.len() != form.nvars {
            return Err(Error::InvalidArgument("chain cell is not an edge of the ambient space".into()));
        }
        let (axis, a, b) = cell
            .axes
            .iter()
            .enumerate()
            .find_map(|(i, ax)| match ax {
                Axis::Free(a, b) => Some((i, *a, *b)),
                Axis::Fixed(_) => None,
            })
            .expect("one free axis");
        let fixed: Vec<u64> = cell
            .axes
            .iter()
            .map(|ax| match ax {
                Axis::Fixed(c) => arith::reduce_i128(*c, p),
                Axis::Free(..) => 0,
            })
            .collect();
        let table = restrict_table(&form.component(&[axis]), axis, &fixed, p);
        let mut edge = 0u64;
        for x in (a + 1)..=b {
            edge = add_mod(edge, pairing_table(&table, arith::reduce_i128(x, p), k), p);
        }
        acc = add_mod(acc, mul_mod(arith::reduce_i128(mult as i128, p), edge, p), p);
    }
    Ok(acc)
}

/// Both sides of `∫_D D^∧F = ∫_{∂D} F` on a 2-D box.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StokesOutcome {
    pub area_side: u64,
    pub boundary_side: u64,
    pub holds: bool,
    pub convention: String,
}

pub const STOKES_CONVENTION: &str =
    "area points (a,b]x(c,d]; boundary edges integrate over (lo,hi] with the other coordinate frozen at the face value; orientation +[x=b] -[x=a] -[y=d] +[y=c]";

pub fn stokes_check(form: &DiffForm, bx: &GridBox, k: &IntegralKernel) -> Result<StokesOutcome> {
    if form.degree != 1 || form.nvars != 2 || bx.dim() != 2 {
        return Err(Error::InvalidArgument("Stokes check needs a 1-form and a box in two variables".into()));
    }
    let dw = wedge_derivative(form)?;
    let g = CalcFn::new(dw.component(&[0, 1]))?;
    let area_side = calculus::area_integral(&g, &bx.half_open_points(form.p), k)?;
    let boundary_side = line_integral(form, &boundary(bx), k)?;
    Ok(StokesOutcome {
        area_side,
        boundary_side,
        holds: area_side == boundary_side,
        convention: STOKES_CONVENTION.into(),
    })
}

/// Polynomial in originals `x_0..x_{n-1}` followed by differences
/// `Δx_0..Δx_{n-1}`, clean modulo `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanFn {
    pub n: usize,
    pub poly: Poly,
}

impl SpanFn {
    pub fn new(n: usize, poly: Poly) -> Result<Self> {
        if poly.nvars() != 2 * n {
            return Err(Error::InvalidArgument("span function needs 2n variables".into()));
        }
        let p = poly.modulus();
        Ok(SpanFn { n, poly: poly.clean(p) })
    }

    /// Embeds a function of the originals.
    pub fn from_fn(f: &CalcFn) -> Self {
        let n = f.nvars();
        SpanFn { n, poly: f.poly().remap(&(0..n).collect::<Vec<_>>(), 2 * n) }
    }

    pub fn p(&self) -> u64 {
        self.poly.modulus()
    }

    pub fn eval(&self, x: &[u64], dx: &[u64]) -> u64 {
        let mut pt = x.to_vec();
        pt.extend_from_slice(dx);
        self.poly.eval(&pt)
    }

    /// Lowest total degree in the `Δ` variables.
    pub fn delta_degree(&self) -> Option<u32> {
        self.poly.terms().map(|(e, _)| e[self.n..].iter().sum()).min()
    }
}

fn shift_subs(n: usize, p: u64) -> Vec<Poly> {
    (0..n).map(|i| Poly::var(i, 2 * n, p).add(&Poly::var(n + i, 2 * n, p))).collect()
}

/// `Δf = f(x + Δx) - f(x)`, cleaned.
pub fn span_difference(f: &CalcFn) -> SpanFn {
    let n = f.nvars();
    let p = f.p();
    let shifted = f.poly().compose(&shift_subs(n, p));
    let base = f.poly().remap(&(0..n).collect::<Vec<_>>(), 2 * n);
    SpanFn { n, poly: shifted.sub(&base).clean(p) }
}

/// `Σ_{n≥1} (Σ_i Δx_i D/Dx_i)^n / n!` read with divided powers:
/// `Σ_{|α|≥1} Π_i Δx_i^{α_i} H^{α_i}_i f`.
pub fn operator_series(f: &CalcFn) -> SpanFn {
    let n = f.nvars();
    let p = f.p();
    let mut out = Poly::zero(2 * n, p);
    for (e, c) in f.poly().terms() {
        // expand each monomial Π x_i^{e_i} through Σ_{α ≤ e} Π C(e_i, α_i) x^{e-α} Δx^α
        let mut partial: Vec<(Vec<u32>, u64)> = vec![(vec![0; 2 * n], c)];
        for i in 0..n {
            let mut next = Vec::new();
            for (mono, coeff) in &partial {
                for a in 0..=e[i] {
                    let b = arith::binomial_mod(e[i] as u64, a as u64, p);
                    if b == 0 {
                        continue;
                    }
                    let mut m = mono.clone();
                    m[i] = e[i] - a;
                    m[n + i] = a;
                    next.push((m, mul_mod(*coeff, b, p)));
                }
            }
            partial = next;
        }
        for (m, coeff) in partial {
            if m[n..].iter().any(|&a| a > 0) {
                out.add_term(m, coeff);
            }
        }
    }
    SpanFn { n, poly: out.clean(p) }
}

/// Literal operator series with clean derivations, for `n < p` (the plain
/// factorial is not invertible beyond). `None` when `f` needs more terms.
pub fn operator_series_clean(f: &CalcFn) -> Option<SpanFn> {
    let n = f.nvars();
    let p = f.p();
    let total: u32 = f.poly().total_degree().unwrap_or(0);
    if total as u64 >= p {
        return None;
    }
    let lift = |g: &Poly| g.remap(&(0..n).collect::<Vec<_>>(), 2 * n);
    let mut term = lift(f.poly());
    let mut out = Poly::zero(2 * n, p);
    let mut fact = 1u64;
    for k in 1..=total as u64 {
        // apply Σ_i Δx_i D/Dx_i once more
        let mut next = Poly::zero(2 * n, p);
        for i in 0..n {
            let d = clean_derivative_poly(&term, i, p);
            next = next.add(&d.mul(&Poly::var(n + i, 2 * n, p)));
        }
        term = next;
        fact = mul_mod(fact, k % p, p);
        let inv = arith::inv_mod(fact, p)?;
        out = out.add(&term.scale(inv));
    }
    Some(SpanFn { n, poly: out.clean(p) })
}

/// Terms of minimal total degree in the `Δ` variables.
pub fn ld_extract(s: &SpanFn) -> SpanFn {
    let Some(d) = s.delta_degree() else {
        return s.clone();
    };
    let mut out = Poly::zero(2 * s.n, s.p());
    for (e, c) in s.poly.terms() {
        if e[s.n..].iter().sum::<u32>() == d {
            out.add_term(e.clone(), c);
        }
    }
    SpanFn { n: s.n, poly: out }
}

/// Symmetric differential tensor: polynomial in `x` and formal `Dx`
/// symbols (`D_k^2 x = Dx·Dx`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffTensor {
    pub n: usize,
    pub poly: Poly,
}

/// `TC: Δx_i → Dx_i`.
pub fn tc(s: &SpanFn) -> DiffTensor {
    DiffTensor { n: s.n, poly: s.poly.clone() }
}

/// `SC: Dx_i → Δx_i`.
pub fn sc(t: &DiffTensor) -> SpanFn {
    SpanFn { n: t.n, poly: t.poly.clone() }
}

/// Jacobian of clean partials `[D f_i / D x_j]` at a point.
pub fn jacobian(fs: &SquareGroup, point: &[u64]) -> Vec<Vec<u64>> {
    let n = fs.dim();
    fs.funcs
        .iter()
        .map(|f| (0..n).map(|j| clean_derivative_poly(f, j, fs.p).eval(point)).collect())
        .collect()
}

/// `G = det [D f_i / D x_j]` at `point`.
pub fn geometry_derivation(fs: &SquareGroup, point: &[u64]) -> u64 {
    det_mod_prime(&jacobian(fs, point), fs.p)
}

/// Jacobian from value tables via `D_j f(P) = -Σ_t f(P|x_j=t)(t - P_j)^(p-2)`.
pub fn jacobian_from_tables(tables: &[Vec<u64>], p: u64, point: &[u64]) -> Vec<Vec<u64>> {
    let n = point.len();
    tables
        .iter()
        .map(|tab| {
            (0..n)
                .map(|j| {
                    let mut acc = 0u64;
                    for t in 0..p {
                        let mut q = point.to_vec();
                        q[j] = t;
                        let w = arith::pow_mod(sub_mod(t, point[j], p), p - 2, p);
                        acc = sub_mod(acc, mul_mod(tab[grid_index(&q, p)], w, p), p);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Points `Q` such that changing some `f_j(Q)` changes `G` at `P`.
pub fn relative_chain(fs: &SquareGroup, point: &[u64]) -> Vec<Vec<u64>> {
    let p = fs.p;
    let n = fs.dim();
    let tables = fs.tables();
    let base = det_mod_prime(&jacobian_from_tables(&tables, p, point), p);
    let mut out = Vec::new();
    for q in grid_points(p, n) {
        let idx = grid_index(&q, p);
        let hit = (0..n).any(|j| {
            (1..p).any(|dv| {
                let mut t = tables.clone();
                t[j][idx] = add_mod(t[j][idx], dv, p);
                det_mod_prime(&jacobian_from_tables(&t, p, point), p) != base
            })
        });
        if hit {
            out.push(q);
        }
    }
    out
}

/// All square minors of size `>= 2`, keyed by (rows, cols).
pub fn minors(m: &[Vec<u64>], p: u64) -> Vec<((Vec<usize>, Vec<usize>), u64)> {
    let n = m.len();
    let mut out = Vec::new();
    for size in 2..=n {
        for rows in subsets(n, size) {
            for cols in subsets(n, size) {
                let sub: Vec<Vec<u64>> = rows.iter().map(|&r| cols.iter().map(|&c| m[r][c]).collect()).collect();
                out.push(((rows.clone(), cols.clone()), det_mod_prime(&sub, p)));
            }
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = subsets(n - 1, k - 1);
    for s in with.iter_mut() {
        s.push(n - 1);
    }
    let mut out = subsets(n - 1, k);
    out.extend(with);
    out.sort();
    out
}

/// The subspace `{f_A = 0}` in coordinates `s = S(x)`, where `S` completes
/// the generators with coordinate functions into a bijective square group.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub p: u64,
    pub n: usize,
    pub n_generators: usize,
    /// Coordinates added to the generators, in order.
    pub completion: Vec<usize>,
    pub group: SquareGroup,
    pub inverse: SquareGroup,
}

impl Subspace {
    pub fn new(generators: &[CalcFn]) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidArgument("subspace needs a generator".into()))?;
        let p = first.p();
        let n = first.nvars();
        let a = generators.len();
        if a > n || generators.iter().any(|g| g.nvars() != n || g.p() != p) {
            return Err(Error::InvalidArgument("generators must share arity and prime".into()));
        }
        for completion in subsets(n, n - a) {
            let mut funcs: Vec<Poly> = generators.iter().map(|g| g.poly().clone()).collect();
            funcs.extend(completion.iter().map(|&j| Poly::var(j, n, p)));
            let mut group = SquareGroup::new(funcs, p)?;
            if independence_check(&mut group) {
                let inverse = square_invert(&group)?;
                return Ok(Subspace { p, n, n_generators: a, completion, group, inverse });
            }
        }
        Err(Error::Precondition("generators do not extend to an invertible square group".into()))
    }

    pub fn dim(&self) -> usize {
        self.n - self.n_generators
    }

    /// `x = h(0_A, s)` as polynomials in the subspace coordinates; the
    /// polynomials live in `vars` variables, `s` occupying the first `dim`.
    fn lift_in(&self, vars: usize, offset: usize) -> Vec<Poly> {
        let d = self.dim();
        let mut subs: Vec<Poly> = vec![Poly::zero(vars, self.p); self.n_generators];
        subs.extend((0..d).map(|k| Poly::var(offset + k, vars, self.p)));
        self.inverse.funcs.iter().map(|h| h.compose(&subs).clean(self.p)).collect()
    }

    pub fn lift(&self) -> Vec<Poly> {
        self.lift_in(self.dim(), 0)
    }

    /// `F(h(0_A, s))`.
    pub fn intrinsic(&self, f: &CalcFn) -> Poly {
        f.poly().compose(&self.lift()).clean(self.p)
    }

    /// `F(h(0, s), h(0, s + Δs) - h(0, s))` in variables `(s, Δs)`.
    pub fn intrinsic_span(&self, f: &SpanFn) -> Poly {
        let d = self.dim();
        let vars = 2 * d;
        let at_s = self.lift_in(vars, 0);
        let shifted_s: Vec<Poly> = (0..d)
            .map(|k| Poly::var(k, vars, self.p).add(&Poly::var(d + k, vars, self.p)))
            .collect();
        let lift = self.lift();
        let mut subs = at_s.clone();
        for (i, h) in lift.iter().enumerate() {
            subs.push(h.compose(&shifted_s).sub(&at_s[i]));
        }
        f.poly.compose(&subs).clean(self.p)
    }

    /// Pullback of a symmetric tensor: `Dx_i = Σ_k (D h_i / D s_k) Ds_k`.
    pub fn pullback(&self, t: &DiffTensor) -> Poly {
        let d = self.dim();
        let vars = 2 * d;
        let at_s = self.lift_in(vars, 0);
        let mut subs = at_s.clone();
        for h in &at_s {
            let mut dx = Poly::zero(vars, self.p);
            for k in 0..d {
                dx = dx.add(&clean_derivative_poly(h, k, self.p).mul(&Poly::var(d + k, vars, self.p)));
            }
            subs.push(dx);
        }
        t.poly.compose(&subs).clean(self.p)
    }

    /// Normal form of `F` modulo the generators, back in `x`:
    /// `F(h(0_A, S_rest(x)))`.
    pub fn reduce(&self, f: &CalcFn) -> CalcFn {
        let rest: Vec<Poly> = self.group.funcs[self.n_generators..].to_vec();
        let g = if rest.is_empty() {
            Poly::constant(f.poly().compose(&self.lift_in(0, 0)).eval(&[]) as i128, self.n, self.p)
        } else {
            self.intrinsic(f).compose(&rest)
        };
        CalcFn::cleaned(g).expect("modulus is prime")
    }
}

/// `F` reduced modulo the ideal of `generators` by substitution `f_A → 0`.
pub fn subspace_reduce(f: &CalcFn, generators: &[CalcFn]) -> Result<CalcFn> {
    Ok(Subspace::new(generators)?.reduce(f))
}

/// Intrinsic difference `F̃(s + Δ's, Δs) - F̃(s, Δs)` of a polynomial in
/// `(s, Δs)` with `d` coordinates; adds `d` trailing `Δ's` variables.
pub fn intrinsic_difference(f: &Poly, d: usize) -> Poly {
    let p = f.modulus();
    let vars = 3 * d;
    let mut subs: Vec<Poly> = (0..d)
        .map(|k| Poly::var(k, vars, p).add(&Poly::var(2 * d + k, vars, p)))
        .collect();
    subs.extend((0..d).map(|k| Poly::var(d + k, vars, p)));
    let base = f.remap(&(0..2 * d).collect::<Vec<_>>(), vars);
    f.compose(&subs).sub(&base).clean(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::kernel_i;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn var(i: usize, n: usize, p: u64) -> Poly {
        Poly::var(i, n, p)
    }

    #[test]
    fn boundaries() {
        let b = boundary(&GridBox::new(vec![(2, 5)]).unwrap());
        assert_eq!(b.terms.get(&Cell { axes: vec![Axis::Fixed(5)] }), Some(&1));
        assert_eq!(b.terms.get(&Cell { axes: vec![Axis::Fixed(2)] }), Some(&-1));
        let sq = boundary(&GridBox::new(vec![(0, 1), (0, 1)]).unwrap());
        assert_eq!(sq.terms.len(), 4);
        for d in 1..=3usize {
            let bx = GridBox::new((0..d).map(|i| (i as i128, 2 + i as i128)).collect()).unwrap();
            assert!(Chain::from_cell(bx.cell()).boundary().boundary().is_empty());
        }
    }

    #[test]
    fn line_integral_examples() {
        let k = kernel_i(3).unwrap();
        let zero = DiffForm::zero(2, 3, 1, true);
        let sq = GridBox::new(vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(line_integral(&zero, &boundary(&sq), &k).unwrap(), 0);
        let f = CalcFn::new(var(0, 2, 3).add(&var(1, 2, 3))).unwrap();
        assert_eq!(line_integral(&differential(&f), &boundary(&sq), &k).unwrap(), 0);
        // one-dimensional δ(x)Dx over (0, x] agrees with the interval integral
        let delta = CalcFn::from_table(&[1, 0, 0], 3, 1).unwrap();
        let form = DiffForm::one_form(vec![delta.poly().clone()], 3).unwrap();
        for x in 0..6 {
            let path = staircase_path(&[0], &[x]).unwrap();
            assert_eq!(
                line_integral(&form, &path, &k).unwrap(),
                calculus::interval_integral(&delta, 0, x, &k).unwrap()
            );
        }
    }

    #[test]
    fn differential_examples() {
        let p = 5;
        let f = CalcFn::new(var(0, 2, p).mul(&var(1, 2, p))).unwrap();
        let d = differential(&f);
        assert_eq!(d.component(&[0]), var(1, 2, p));
        assert_eq!(d.component(&[1]), var(0, 2, p));
        assert!(differential(&CalcFn::new(Poly::constant(3, 2, p)).unwrap()).is_zero());
    }

    #[test]
    fn wedge_examples() {
        let p = 5;
        let f = var(0, 2, p).mul(&var(1, 2, p)).mul(&var(1, 2, p));
        let g = var(0, 2, p).pow(3);
        let form = DiffForm::one_form(vec![f.clone(), g.clone()], p).unwrap();
        let w = wedge_derivative(&form).unwrap();
        let want = clean_derivative_poly(&g, 0, p).sub(&clean_derivative_poly(&f, 1, p));
        assert_eq!(w.component(&[0, 1]), want);
        // exact forms are closed: mixed clean partials commute, all 2-var clean f at p = 3
        for idx in 0..3usize.pow(9) {
            let mut t = vec![0u64; 9];
            let mut r = idx;
            for v in t.iter_mut() {
                *v = (r % 3) as u64;
                r /= 3;
            }
            let h = CalcFn::from_table(&t, 3, 2).unwrap();
            assert!(wedge_derivative(&differential(&h)).unwrap().is_zero());
        }
    }

    #[test]
    fn span_examples() {
        let p = 5;
        let x2 = CalcFn::univariate(&[0, 0, 1], p).unwrap();
        let d = span_difference(&x2);
        // 2xΔx + Δx²
        let mut want = Poly::zero(2, p);
        want.add_term(vec![1, 1], 2);
        want.add_term(vec![0, 2], 1);
        assert_eq!(d.poly, want);
        assert!(span_difference(&CalcFn::univariate(&[4], p).unwrap()).poly.is_zero());
        assert_eq!(operator_series(&x2), d);
        let ld = ld_extract(&d);
        let mut lw = Poly::zero(2, p);
        lw.add_term(vec![1, 1], 2);
        assert_eq!(ld.poly, lw);
    }

    #[test]
    fn product_rule_and_additivity() {
        let p = 5;
        let f = CalcFn::univariate(&[0, 1], p).unwrap();
        let g = CalcFn::univariate(&[0, 0, 1], p).unwrap();
        let fg = CalcFn::cleaned(f.poly().mul(g.poly())).unwrap();
        let (df, dg) = (span_difference(&f), span_difference(&g));
        let lift = |h: &CalcFn| SpanFn::from_fn(h).poly;
        let rhs = lift(&g).mul(&df.poly).add(&lift(&f).mul(&dg.poly)).add(&df.poly.mul(&dg.poly)).clean(p);
        assert_eq!(span_difference(&fg).poly, rhs);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let a: Vec<u64> = (0..9).map(|_| rng.gen_range(0..3)).collect();
            let b: Vec<u64> = (0..9).map(|_| rng.gen_range(0..3)).collect();
            let fa = CalcFn::from_table(&a, 3, 2).unwrap();
            let fb = CalcFn::from_table(&b, 3, 2).unwrap();
            let sum = CalcFn::new(fa.poly().add(fb.poly())).unwrap();
            assert_eq!(span_difference(&sum).poly, span_difference(&fa).poly.add(&span_difference(&fb).poly));
        }
    }

    #[test]
    fn correspondence_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let mut poly = Poly::zero(4, 3);
            for _ in 0..5 {
                poly.add_term((0..4).map(|_| rng.gen_range(0..3)).collect(), rng.gen_range(0..3));
            }
            let s = SpanFn::new(2, poly).unwrap();
            assert_eq!(sc(&tc(&s)), s);
        }
    }

    #[test]
    fn geometry_derivation_linear() {
        let p = 5;
        let id = SquareGroup::identity(2, p);
        assert_eq!(geometry_derivation(&id, &[1, 2]), 1);
        let lin = |m: [[i128; 2]; 2]| {
            SquareGroup::new(
                (0..2)
                    .map(|i| {
                        Poly::constant(m[i][0], 2, p)
                            .mul(&var(0, 2, p))
                            .add(&Poly::constant(m[i][1], 2, p).mul(&var(1, 2, p)))
                    })
                    .collect(),
                p,
            )
            .unwrap()
        };
        let a = lin([[1, 2], [3, 4]]);
        assert_eq!(geometry_derivation(&a, &[0, 0]), 3); // -2 mod 5
        assert_eq!(geometry_derivation(&lin([[1, 2], [2, 4]]), &[3, 3]), 0);
        let b = lin([[2, 1], [1, 1]]);
        assert_eq!(geometry_derivation(&a.compose(&b).unwrap(), &[1, 1]), mul_mod(3, 1, p));
    }

    #[test]
    fn table_jacobian_matches_symbolic() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let mut perm: Vec<usize> = (0..9).collect();
            perm.shuffle(&mut rng);
            let g = SquareGroup::from_permutation(&perm, 3, 2).unwrap();
            for pt in grid_points(3, 2) {
                assert_eq!(jacobian_from_tables(&g.tables(), 3, &pt), jacobian(&g, &pt));
            }
        }
    }

    #[test]
    fn relative_chain_examples() {
        let p = 3;
        let id = SquareGroup::identity(1, p);
        let chain = relative_chain(&id, &[0]);
        // D f(0) = -Σ_t f(t) t: points 1 and 2 matter, 0 does not
        assert_eq!(chain, vec![vec![1], vec![2]]);
        let cst = SquareGroup::new(vec![Poly::constant(1, 2, p), Poly::constant(2, 2, p)], p).unwrap();
        assert!(relative_chain(&cst, &[0, 0]).is_empty());
        let id2 = SquareGroup::identity(2, p);
        let chain = relative_chain(&id2, &[1, 1]);
        for q in &chain {
            assert!(q[0] == 1 || q[1] == 1);
        }
        assert!(chain.contains(&vec![0, 1]) && chain.contains(&vec![1, 0]));
    }

    #[test]
    fn subspace_examples() {
        let p = 3;
        let n = 2;
        let g = CalcFn::new(var(0, n, p).add(&var(1, n, p).pow(2))).unwrap();
        let r = subspace_reduce(&g, std::slice::from_ref(&g)).unwrap();
        assert!(r.poly().is_zero());
        let y = CalcFn::new(var(1, n, p)).unwrap();
        assert_eq!(subspace_reduce(&y, std::slice::from_ref(&g)).unwrap(), y);
        let bad = CalcFn::new(Poly::constant(0, n, p)).unwrap();
        assert!(Subspace::new(&[bad]).is_err());
    }
}
