//! The connection `z d/dz` on `Sym^k Kl_2` in the basis `z^r eta_a`, and
//! exact linear algebra on its degree truncations.
//!
//! `deg(z^r eta_a) = 2r + a`. The connection splits as `D_0 + D_1` where
//! `D_0(z^r eta_a) = r z^r eta_a` keeps the degree and
//! `D_1(z^r eta_a) = (k - a) z^r eta_{a+1} + a z^{r+1} eta_{a-1}` raises it by one.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hodge::{dims, hodge_numbers, HodgeVariant};
use crate::moments::binomial;

/// A finite `Q`-linear combination of `z^r eta_a`, keyed by `(r, a)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedElement {
    pub terms: BTreeMap<(u32, u32), BigRational>,
}

impl GradedElement {
    pub fn monomial(r: u32, a: u32) -> Self {
        Self::term(r, a, BigRational::one())
    }

    pub fn term(r: u32, a: u32, c: BigRational) -> Self {
        let mut e = GradedElement::default();
        e.add_term(r, a, c);
        e
    }

    pub fn add_term(&mut self, r: u32, a: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((r, a)).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(r, a));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(r, a), c) in &other.terms {
            out.add_term(r, a, c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degrees `2r + a` occurring.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|&(r, a)| 2 * r + a).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    /// Multiplication by `z^s`.
    pub fn shift(&self, s: u32) -> Self {
        GradedElement {
            terms: self.terms.iter().map(|(&(r, a), c)| ((r + s, a), c.clone())).collect(),
        }
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `z d/dz` applied to `x`.
pub fn connection_apply(x: &GradedElement, k: u32) -> GradedElement {
    euler_part(x).add(&matrix_part(x, k))
}

/// `D_0`, the degree-preserving part.
pub fn euler_part(x: &GradedElement) -> GradedElement {
    let mut out = GradedElement::default();
    for (&(r, a), c) in &x.terms {
        out.add_term(r, a, c * int(r as i64));
    }
    out
}

/// `D_1`, the degree-raising part.
pub fn matrix_part(x: &GradedElement, k: u32) -> GradedElement {
    let mut out = GradedElement::default();
    for (&(r, a), c) in &x.terms {
        assert!(a <= k, "basis index out of range");
        if a < k {
            out.add_term(r, a + 1, c * int((k - a) as i64));
        }
        if a > 0 {
            out.add_term(r + 1, a - 1, c * int(a as i64));
        }
    }
    out
}

/// Integer row echelon form over a fixed column order; rows are kept
/// primitive, so everything is exact over `Q`.
struct Echelon {
    rows: BTreeMap<usize, Vec<BigInt>>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        for (&piv, row) in &self.rows {
            if v[piv].is_zero() {
                continue;
            }
            let g = v[piv].gcd(&row[piv]);
            let (a, b) = (&row[piv] / &g, &v[piv] / &g);
            for (x, y) in v.iter_mut().zip(row) {
                *x = &*x * &a - y * &b;
            }
            make_primitive(&mut v);
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    fn insert(&mut self, v: Vec<BigInt>) -> bool {
        let v = self.reduce(v);
        match v.iter().position(|x| !x.is_zero()) {
            Some(piv) => {
                self.rows.insert(piv, v);
                true
            }
            None => false,
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Monomials `(r, a)` of degree `<= d`, highest degree first.
fn monomials(k: u32, d: u32) -> Vec<(u32, u32)> {
    let mut m: Vec<(u32, u32)> = (0..=k)
        .flat_map(|a| (0..).take_while(move |r| 2 * r + a <= d).map(move |r| (r, a)))
        .collect();
    m.sort_by_key(|&(r, a)| (std::cmp::Reverse(2 * r + a), std::cmp::Reverse(a)));
    m
}

struct Truncation {
    columns: Vec<(u32, u32)>,
    index: BTreeMap<(u32, u32), usize>,
    image: Echelon,
    domain_dim: usize,
}

impl Truncation {
    /// `D(V_bound)` inside `V_{bound+1}`.
    fn build(k: u32, bound: u32) -> Self {
        let columns = monomials(k, bound + 1);
        let index: BTreeMap<(u32, u32), usize> =
            columns.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let domain = monomials(k, bound);
        let mut t = Truncation {
            columns,
            index,
            image: Echelon::new(),
            domain_dim: domain.len(),
        };
        for (r, a) in domain {
            let v = t.vector(&connection_apply(&GradedElement::monomial(r, a), k));
            t.image.insert(v);
        }
        t
    }

    fn vector(&self, x: &GradedElement) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.columns.len()];
        let denom = x
            .terms
            .values()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        for (m, c) in &x.terms {
            let i = self.index[m];
            v[i] = c.numer() * (&denom / c.denom());
        }
        v
    }

    /// `dim V_d / (Im D cap V_d)`.
    fn quotient_dim(&self, d: u32) -> usize {
        let in_vd = |col: usize| {
            let (r, a) = self.columns[col];
            2 * r + a <= d
        };
        let total = self.columns.iter().filter(|&&(r, a)| 2 * r + a <= d).count();
        let pivots = self.image.rows.keys().filter(|&&c| in_vd(c)).count();
        total - pivots
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cohomology {
    pub k: u32,
    pub bound: u32,
    /// Always empty: `z d/dz` has no kernel.
    pub h0: Vec<GradedElement>,
    /// Classes `z^j eta_0`, `0 <= j < floor((k+1)/2)`.
    pub h1: Vec<GradedElement>,
    /// `dim V_d / (Im cap V_d)` for `d = 0..=bound-2`.
    pub quotient_dims: Vec<usize>,
}

pub fn default_bound(k: u32) -> u32 {
    2 * k + 6
}

/// Kernel and cokernel of `z d/dz` on `bigoplus C[z] eta_a`, certified on
/// the truncation of degree `bound` and compared against `bound + 2`.
pub fn cohomology(k: u32, bound: u32) -> Result<Cohomology> {
    if bound < 2 * k + 4 {
        return Err(Error::InvalidArgument(format!(
            "degree bound {bound} below 2k+4 = {}",
            2 * k + 4
        )));
    }
    let t = Truncation::build(k, bound);
    if t.image.rank() != t.domain_dim {
        return Err(Error::check(
            "h0",
            format!("z d/dz has a kernel on V_{bound} for k={k}"),
        ));
    }
    let wider = Truncation::build(k, bound + 2);
    let top = bound - 2;
    let quotient_dims: Vec<usize> = (0..=top).map(|d| t.quotient_dim(d)).collect();
    let wider_dims: Vec<usize> = (0..=top).map(|d| wider.quotient_dim(d)).collect();
    if quotient_dims != wider_dims {
        return Err(Error::StabilizationFailure {
            bound: bound as usize,
        });
    }
    let h = dims(k).h1;
    let classes: Vec<GradedElement> = (0..h as u32).map(|j| GradedElement::monomial(j, 0)).collect();
    let mut span = Echelon::new();
    for c in &classes {
        let reduced = t.image.reduce(t.vector(c));
        if !span.insert(reduced) {
            return Err(Error::check("h1-basis", format!("z^j eta_0 dependent for k={k}")));
        }
    }
    if quotient_dims[top as usize] != h {
        return Err(Error::check(
            "h1-span",
            format!("quotient of V_{top} has dimension {}, expected {h}", quotient_dims[top as usize]),
        ));
    }
    // the classes also span: every monomial of V_top reduces into their span
    for &(r, a) in t.columns.iter().filter(|&&(r, a)| 2 * r + a <= top) {
        let reduced = span.reduce(t.image.reduce(t.vector(&GradedElement::monomial(r, a))));
        if reduced.iter().any(|x| !x.is_zero()) {
            return Err(Error::check("h1-span", format!("z^{r} eta_{a} not spanned for k={k}")));
        }
    }
    Ok(Cohomology {
        k,
        bound,
        h0: Vec::new(),
        h1: classes,
        quotient_dims,
    })
}

/// `sigma = sum_i (-1)^i C(k/2, i) z^i eta_{k-2i}` for even `k`, certified
/// to be killed by `D_1`.
pub fn graded_kernel_generator(k: u32) -> Result<GradedElement> {
    if k % 2 == 1 {
        return Err(Error::InvalidArgument("k must be even".into()));
    }
    let mut sigma = GradedElement::default();
    for i in 0..=k / 2 {
        let mut c = BigRational::from_integer(binomial(k / 2, i));
        if i % 2 == 1 {
            c = -c;
        }
        sigma.add_term(i, k - 2 * i, c);
    }
    if !matrix_part(&sigma, k).is_zero() {
        return Err(Error::check("kernel-generator", format!("D_1 sigma != 0 for k={k}")));
    }
    Ok(sigma)
}

/// Whether `D_0(z^r sigma)` lies outside `D_1` of the degree below, i.e.
/// survives in the graded cokernel.
pub fn kernel_generator_positivity(k: u32, r: u32) -> Result<bool> {
    let sigma = graded_kernel_generator(k)?;
    let target = euler_part(&sigma.shift(r));
    let deg = 2 * r + k;
    let cols: Vec<(u32, u32)> = monomials(k, deg)
        .into_iter()
        .filter(|&(rr, a)| 2 * rr + a == deg)
        .collect();
    let index: BTreeMap<(u32, u32), usize> = cols.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let to_vec = |x: &GradedElement| {
        let denom = x.terms.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let mut v = vec![BigInt::zero(); cols.len()];
        for (m, c) in &x.terms {
            v[index[m]] = c.numer() * (&denom / c.denom());
        }
        v
    };
    let mut image = Echelon::new();
    for (rr, a) in monomials(k, deg - 1).into_iter().filter(|&(rr, a)| 2 * rr + a + 1 == deg) {
        image.insert(to_vec(&matrix_part(&GradedElement::monomial(rr, a), k)));
    }
    Ok(image.reduce(to_vec(&target)).iter().any(|x| !x.is_zero()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationJumps {
    pub k: u32,
    /// Jumps `k + 1 - 2j` of the classes `z^j eta_0` inside the validity range.
    pub computed: Vec<u32>,
    /// For even `k`, the remaining jumps `p <= k/2`, taken from the Hodge numbers.
    pub from_hodge_numbers: Vec<u32>,
}

/// Hodge filtration jumps of `H^1`, checked against the Hodge numbers on the
/// range where the filtration is known explicitly.
pub fn filtration_jumps(k: u32) -> Result<FiltrationJumps> {
    let h = dims(k).h1 as u32;
    let valid = |p: u32| k % 2 == 1 || 2 * p > k;
    let mut computed: Vec<u32> = (0..h).map(|j| k + 1 - 2 * j).filter(|&p| valid(p)).collect();
    computed.sort_unstable();
    let theorem = hodge_numbers(k, HodgeVariant::H1).p_values();
    let (on_range, rest): (Vec<u32>, Vec<u32>) = theorem.into_iter().partition(|&p| valid(p));
    if on_range != computed {
        return Err(Error::MismatchWithTheorem(format!(
            "k={k}: jumps {computed:?}, Hodge numbers give {on_range:?}"
        )));
    }
    Ok(FiltrationJumps {
        k,
        computed,
        from_hodge_numbers: rest,
    })
}

/// The double-cover basis `t^j`, `0 <= j < 2 floor((k+1)/2)`, has the tilde dimension.
pub fn tilde_dimension_consistent(k: u32) -> bool {
    2 * dims(k).h1 == dims(k).h1_tilde
}

/// Signed integer coefficients of `sigma` in increasing `i`.
pub fn kernel_generator_coefficients(k: u32) -> Result<Vec<BigInt>> {
    let s = graded_kernel_generator(k)?;
    Ok((0..=k / 2)
        .map(|i| {
            s.terms
                .get(&(i, k - 2 * i))
                .map(|c| c.to_integer())
                .unwrap_or_default()
        })
        .collect())
}
