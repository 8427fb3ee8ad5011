//! Homogeneous polynomials in several variables over an exact field.
//!
//! The general type stores sparse terms keyed by exponent vector; binary
//! forms (two variables) additionally support gcd, exact division and
//! ground-field root extraction, which drive the `d = 1` symbolic
//! global-regularity certificate.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldConfig, Scalar};

/// All exponent vectors of total degree `degree` in `num_vars` variables,
/// in descending lexicographic order (earlier variables dominate).
pub fn monomials(num_vars: usize, degree: usize) -> Vec<Vec<u32>> {
    fn rec(vars_left: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if vars_left == 1 {
            let mut m = prefix.clone();
            m.push(degree);
            out.push(m);
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e);
            rec(vars_left - 1, degree - e, prefix, out);
            prefix.pop();
        }
    }
    assert!(num_vars >= 1);
    let mut out = Vec::new();
    rec(num_vars, degree as u32, &mut Vec::new(), &mut out);
    out
}

/// Number of monomials of degree `degree` in `num_vars` variables.
pub fn monomial_count(num_vars: usize, degree: i64) -> usize {
    if degree < 0 {
        return 0;
    }
    // C(degree + num_vars - 1, num_vars - 1)
    let n = degree as u128 + num_vars as u128 - 1;
    let k = num_vars as u128 - 1;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc as usize
}

/// Homogeneous polynomial: every stored monomial has the declared total
/// degree, and stored coefficients are nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogPoly {
    num_vars: usize,
    degree: usize,
    field: FieldConfig,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl HomogPoly {
    pub fn zero(num_vars: usize, degree: usize, field: FieldConfig) -> Self {
        HomogPoly {
            num_vars,
            degree,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(num_vars: usize, exps: &[u32], coeff: Scalar) -> Self {
        assert_eq!(exps.len(), num_vars);
        let degree = exps.iter().sum::<u32>() as usize;
        let mut terms = BTreeMap::new();
        let field = coeff.field();
        if !coeff.is_zero() {
            terms.insert(exps.to_vec(), coeff);
        }
        HomogPoly {
            num_vars,
            degree,
            field,
            terms,
        }
    }

    /// The variable `x_i` as a degree-1 form.
    pub fn variable(num_vars: usize, i: usize, field: FieldConfig) -> Self {
        let mut exps = vec![0u32; num_vars];
        exps[i] = 1;
        Self::monomial(num_vars, &exps, field.one())
    }

    /// Linear form with the given coefficients, one per variable.
    pub fn linear_form(field: FieldConfig, coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        let mut p = HomogPoly::zero(n, 1, field);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0u32; n];
                exps[i] = 1;
                p.terms.insert(exps, c.clone());
            }
        }
        p
    }

    pub fn constant(num_vars: usize, c: Scalar) -> Self {
        Self::monomial(num_vars, &vec![0; num_vars], c)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Scalar {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, rhs: &HomogPoly) -> HomogPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        assert_eq!(self.degree, rhs.degree, "inhomogeneous sum");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            let cur = out.coefficient(e).add(c);
            if cur.is_zero() {
                out.terms.remove(e);
            } else {
                out.terms.insert(e.clone(), cur);
            }
        }
        out
    }

    pub fn neg(&self) -> HomogPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, rhs: &HomogPoly) -> HomogPoly {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, s: &Scalar) -> HomogPoly {
        if s.is_zero() {
            return HomogPoly::zero(self.num_vars, self.degree, self.field);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.mul(s);
        }
        out
    }

    pub fn mul(&self, rhs: &HomogPoly) -> HomogPoly {
        assert_eq!(self.num_vars, rhs.num_vars, "variable count mismatch");
        let mut out = HomogPoly::zero(self.num_vars, self.degree + rhs.degree, self.field);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let cur = out.coefficient(&e).add(&ca.mul(cb));
                if cur.is_zero() {
                    out.terms.remove(&e);
                } else {
                    out.terms.insert(e, cur);
                }
            }
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.num_vars);
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term = term.mul(&point[i]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Leading coefficient in descending lex order (highest power of the
    /// first variable wins).
    pub fn leading_coefficient(&self) -> Option<&Scalar> {
        self.terms.iter().next_back().map(|(_, c)| c)
    }

    /// Scales so the lex-leading coefficient is 1.
    pub fn monic(&self) -> HomogPoly {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(c) => self.scale(&c.inv().expect("leading coefficient is nonzero")),
        }
    }

    pub fn map_to_field(&self, target: FieldConfig) -> Result<HomogPoly> {
        let mut out = HomogPoly::zero(self.num_vars, self.degree, target);
        for (e, c) in &self.terms {
            let c = c.to_field(target)?;
            if !c.is_zero() {
                out.terms.insert(e.clone(), c);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names: Vec<String> = (0..self.num_vars)
            .map(|i| {
                if self.num_vars <= 4 {
                    ["z0", "z1", "x", "y"][i].to_string()
                } else {
                    format!("t{i}")
                }
            })
            .collect();
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut s = String::new();
            let coeff = c.canonical_string();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &exp)| exp > 0)
                .map(|(i, &exp)| {
                    if exp == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{}", names[i], exp)
                    }
                })
                .collect();
            if vars.is_empty() {
                s.push_str(&coeff);
            } else if coeff == "1" {
                s.push_str(&vars.join("*"));
            } else if coeff == "-1" {
                s.push('-');
                s.push_str(&vars.join("*"));
            } else {
                s.push_str(&coeff);
                s.push('*');
                s.push_str(&vars.join("*"));
            }
            parts.push(s);
        }
        write!(f, "{}", parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// Binary forms: gcd, division, roots
// ---------------------------------------------------------------------------

/// Dense univariate polynomial, little-endian coefficients, used internally
/// for binary-form arithmetic.
#[derive(Debug, Clone, PartialEq)]
struct UniPoly {
    field: FieldConfig,
    coeffs: Vec<Scalar>, // no trailing zeros
}

impl UniPoly {
    fn new(field: FieldConfig, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn degree(&self) -> usize {
        assert!(!self.is_zero());
        self.coeffs.len() - 1
    }

    fn leading(&self) -> &Scalar {
        self.coeffs.last().expect("nonzero polynomial")
    }

    fn monic(&self) -> UniPoly {
        let inv = self.leading().inv().expect("leading nonzero");
        UniPoly::new(
            self.field,
            self.coeffs.iter().map(|c| c.mul(&inv)).collect(),
        )
    }

    fn rem(&self, divisor: &UniPoly) -> UniPoly {
        assert!(!divisor.is_zero());
        let mut r = self.coeffs.clone();
        let dd = divisor.degree();
        let dlead_inv = divisor.leading().inv().expect("leading nonzero");
        while r.len() > dd {
            let k = r.len() - 1;
            let factor = r[k].mul(&dlead_inv);
            if !factor.is_zero() {
                for (i, dc) in divisor.coeffs.iter().enumerate() {
                    let idx = k - dd + i;
                    r[idx] = r[idx].sub(&factor.mul(dc));
                }
            }
            r.pop();
        }
        UniPoly::new(self.field, r)
    }

    fn div_exact(&self, divisor: &UniPoly) -> Option<UniPoly> {
        assert!(!divisor.is_zero());
        if self.is_zero() {
            return Some(UniPoly::new(self.field, vec![]));
        }
        if self.degree() < divisor.degree() {
            return None;
        }
        let mut r = self.coeffs.clone();
        let dd = divisor.degree();
        let dlead_inv = divisor.leading().inv().expect("leading nonzero");
        let mut q = vec![self.field.zero(); r.len() - dd];
        while r.len() > dd {
            let k = r.len() - 1;
            let factor = r[k].mul(&dlead_inv);
            q[k - dd] = factor.clone();
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = r[idx].sub(&factor.mul(dc));
            }
            r.pop();
        }
        if r.iter().all(Scalar::is_zero) {
            Some(UniPoly::new(self.field, q))
        } else {
            None
        }
    }

    fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }
}

/// Decomposition of a nonzero binary form `f(z0, z1)` as
/// `z0^ord0 * z1^ord1 * core`, with the core divisible by neither variable,
/// dehomogenized at `z1 = 1`.
fn binary_split(f: &HomogPoly) -> (usize, usize, UniPoly) {
    assert_eq!(f.num_vars(), 2, "binary form expected");
    assert!(!f.is_zero());
    let d = f.degree();
    let mut by_z0: Vec<Scalar> = vec![f.field().zero(); d + 1];
    for (e, c) in f.terms() {
        by_z0[e[0] as usize] = c.clone();
    }
    let min = by_z0.iter().position(|c| !c.is_zero()).unwrap();
    let max = by_z0.iter().rposition(|c| !c.is_zero()).unwrap();
    let ord0 = min;
    let ord1 = d - max;
    let core = UniPoly::new(f.field(), by_z0[min..=max].to_vec());
    (ord0, ord1, core)
}

/// Rebuilds `z0^ord0 * z1^ord1 * homogenization(core)`.
fn binary_join(field: FieldConfig, ord0: usize, ord1: usize, core: &UniPoly) -> HomogPoly {
    assert!(!core.is_zero());
    let cd = core.degree();
    let degree = ord0 + ord1 + cd;
    let mut out = HomogPoly::zero(2, degree, field);
    for (i, c) in core.coeffs.iter().enumerate() {
        if !c.is_zero() {
            let e0 = (ord0 + i) as u32;
            let e1 = (degree - ord0 - i) as u32;
            out.terms.insert(vec![e0, e1], c.clone());
        }
    }
    out
}

/// Greatest common divisor of two binary homogeneous forms, normalized so
/// the lex-leading coefficient is 1. A degree-0 result means coprime.
pub fn univariate_gcd(f: &HomogPoly, g: &HomogPoly) -> Result<HomogPoly> {
    assert_eq!(f.num_vars(), 2, "binary form expected");
    assert_eq!(g.num_vars(), 2, "binary form expected");
    if f.is_zero() && g.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    if f.is_zero() {
        return Ok(g.monic());
    }
    if g.is_zero() {
        return Ok(f.monic());
    }
    let (f0, f1, fc) = binary_split(f);
    let (g0, g1, gc) = binary_split(g);
    let core = fc.gcd(&gc);
    let core = if core.is_zero() {
        UniPoly::new(f.field(), vec![f.field().one()])
    } else {
        core
    };
    Ok(binary_join(f.field(), f0.min(g0), f1.min(g1), &core).monic())
}

/// Exact quotient `f / g` of binary forms, when `g` divides `f`.
pub fn binary_div_exact(f: &HomogPoly, g: &HomogPoly) -> Option<HomogPoly> {
    assert!(!g.is_zero(), "division by the zero form");
    if f.is_zero() {
        return Some(HomogPoly::zero(2, f.degree().saturating_sub(g.degree()), f.field()));
    }
    let (f0, f1, fc) = binary_split(f);
    let (g0, g1, gc) = binary_split(g);
    if g0 > f0 || g1 > f1 {
        return None;
    }
    let qc = fc.div_exact(&gc)?;
    Some(binary_join(f.field(), f0 - g0, f1 - g1, &qc))
}

/// A projective point of `ℙ^1` found as a root, as a coordinate pair.
pub type BinaryRoot = (Scalar, Scalar);

/// Splits off the ground-field linear factors of a nonzero binary form.
///
/// Returns the projective roots (with multiplicity) and the leftover factor
/// with no ground-field roots — degree 0 when the form splits completely.
/// Over `F_p` with large `p`, root scanning is skipped and the core is
/// returned unfactored.
pub fn binary_form_roots(f: &HomogPoly) -> (Vec<BinaryRoot>, HomogPoly) {
    assert_eq!(f.num_vars(), 2);
    assert!(!f.is_zero(), "roots of the zero form");
    let field = f.field();
    let (ord0, ord1, mut core) = binary_split(f);
    let mut roots: Vec<BinaryRoot> = Vec::new();
    for _ in 0..ord0 {
        roots.push((field.zero(), field.one())); // z0 | f: root [0:1]
    }
    for _ in 0..ord1 {
        roots.push((field.one(), field.zero())); // z1 | f: root [1:0]
    }
    let candidates = root_candidates(&core);
    for x in candidates {
        loop {
            if core.is_zero() || core.degree() == 0 {
                break;
            }
            if core.eval(&x).is_zero() {
                let lin = UniPoly::new(field, vec![x.neg(), field.one()]);
                core = core.div_exact(&lin).expect("verified root divides");
                roots.push((x.clone(), field.one()));
            } else {
                break;
            }
        }
    }
    let remaining = binary_join(field, 0, 0, &core).monic();
    (roots, remaining)
}

/// Candidate ground-field roots of a dehomogenized core polynomial.
fn root_candidates(core: &UniPoly) -> Vec<Scalar> {
    if core.is_zero() || core.degree() == 0 {
        return vec![];
    }
    match core.field {
        FieldConfig::Fp(p) if p <= 1 << 16 => (0..p)
            .map(|v| Scalar::Fp { v, p })
            .collect(),
        FieldConfig::Fp(_) => vec![], // large prime: no scan, leave unfactored
        FieldConfig::Rational => {
            // rational root theorem on the primitive integer model
            let mut denom_lcm = BigInt::one();
            for c in &core.coeffs {
                let q = c.as_rational().unwrap();
                denom_lcm = denom_lcm.lcm(q.denom());
            }
            let ints: Vec<BigInt> = core
                .coeffs
                .iter()
                .map(|c| {
                    let q = c.as_rational().unwrap();
                    q.numer() * (&denom_lcm / q.denom())
                })
                .collect();
            let a0 = ints.first().unwrap().clone();
            let an = ints.last().unwrap().clone();
            // core has nonzero constant term by construction
            let ps = small_divisors(&a0.abs());
            let qs = small_divisors(&an.abs());
            let mut out = Vec::new();
            for p in &ps {
                for q in &qs {
                    if p.gcd(q).is_one() {
                        let r = BigRational::new(p.clone(), q.clone());
                        out.push(Scalar::Rat(r.clone()));
                        out.push(Scalar::Rat(-r));
                    }
                }
            }
            out.sort_by_key(|s| s.canonical_string());
            out.dedup();
            out
        }
    }
}

/// Divisors of |n| by trial division; gives up past a fixed bound (callers
/// then simply miss huge-coefficient roots and report the factor intact).
fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    const TRIAL_BOUND: u64 = 1_000_000;
    let mut divs = vec![BigInt::one()];
    if n.is_zero() {
        return divs;
    }
    let mut m = n.clone();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2u32);
    let bound = BigInt::from(TRIAL_BOUND);
    while &(&d * &d) <= &m && d <= bound {
        let mut e = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1;
    }
    if !m.is_one() {
        primes.push((m, 1));
    }
    for (p, e) in primes {
        let mut grown = Vec::new();
        for base in &divs {
            let mut acc = base.clone();
            for _ in 0..e {
                acc = &acc * &p;
                grown.push(acc.clone());
            }
        }
        divs.extend(grown);
    }
    divs.sort();
    divs.dedup();
    divs
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldConfig = FieldConfig::Rational;

    fn z(i: usize) -> HomogPoly {
        HomogPoly::variable(2, i, Q)
    }

    #[test]
    fn monomial_enumeration() {
        let m = monomials(2, 2);
        assert_eq!(m, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials(4, 1).len(), 4);
        assert_eq!(monomial_count(4, 3), 20); // C(6,3)
        assert_eq!(monomial_count(4, -1), 0);
    }

    #[test]
    fn arithmetic_and_eval() {
        let f = z(0).mul(&z(0)).sub(&z(1).mul(&z(1))); // z0^2 - z1^2
        let two = Q.from_i64(2);
        let one = Q.from_i64(1);
        assert_eq!(f.eval(&[two.clone(), one.clone()]), Q.from_i64(3));
        assert_eq!(f.eval(&[one.clone(), one]), Q.from_i64(0));
        assert_eq!(f.degree(), 2);
    }

    #[test]
    fn gcd_examples() {
        // distinct linear forms are coprime
        let g = univariate_gcd(&z(0), &z(1)).unwrap();
        assert_eq!(g.degree(), 0);

        // gcd(z0^2, z0 z1) = z0
        let g = univariate_gcd(&z(0).mul(&z(0)), &z(0).mul(&z(1))).unwrap();
        assert_eq!(g, z(0));

        // gcd(z0^2 - z1^2, z0 - z1) = z0 - z1 (factor by hand)
        let f = z(0).mul(&z(0)).sub(&z(1).mul(&z(1)));
        let h = z(0).sub(&z(1));
        let g = univariate_gcd(&f, &h).unwrap();
        assert_eq!(g, h);

        assert!(univariate_gcd(
            &HomogPoly::zero(2, 1, Q),
            &HomogPoly::zero(2, 3, Q)
        )
        .is_err());
    }

    #[test]
    fn gcd_divides_both() {
        let f = z(0).mul(&z(0)).sub(&z(1).mul(&z(1)));
        let h = z(0).sub(&z(1));
        let g = univariate_gcd(&f, &h).unwrap();
        let qf = binary_div_exact(&f, &g).unwrap();
        assert_eq!(qf.mul(&g), f);
        assert!(binary_div_exact(&h, &g).is_some());
        assert!(binary_div_exact(&h, &f).is_none());
    }

    #[test]
    fn root_extraction() {
        // z0 * (z0 - 2 z1): roots [0:1] and [2:1]
        let f = z(0).mul(&z(0).sub(&z(1).scale(&Q.from_i64(2))));
        let (roots, rest) = binary_form_roots(&f);
        assert_eq!(rest.degree(), 0);
        assert_eq!(roots.len(), 2);
        for (a, b) in &roots {
            assert!(f.eval(&[a.clone(), b.clone()]).is_zero());
        }

        // z1^2 * (z0^2 + z1^2): [1:0] twice, irreducible quadratic remains
        let sum_sq = z(0).mul(&z(0)).add(&z(1).mul(&z(1)));
        let g = z(1).mul(&z(1)).mul(&sum_sq);
        let (roots, rest) = binary_form_roots(&g);
        assert_eq!(roots.len(), 2);
        assert_eq!(rest.degree(), 2);
        assert_eq!(rest, sum_sq);
    }

    #[test]
    fn gcd_scaling_invariance() {
        let f = z(0).mul(&z(0)).sub(&z(1).mul(&z(1)));
        let h = z(0).sub(&z(1));
        let g1 = univariate_gcd(&f, &h).unwrap();
        let g2 = univariate_gcd(&f.scale(&Q.from_i64(-7)), &h.scale(&Q.from_i64(3))).unwrap();
        assert_eq!(g1, g2); // monic normalization kills the scaling
    }
}
