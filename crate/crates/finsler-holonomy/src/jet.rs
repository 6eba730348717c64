//! Forward-mode derivative towers: truncated multivariate Taylor jets.
//!
//! A [`Jet`] carries the value of a smooth scalar function together with all
//! mixed partial derivatives up to a fixed total order, over up to four
//! variables. Arithmetic and the elementary functions needed by Finsler norms
//! (`sqrt`, `sin`, `cos`, division) propagate the whole tower, so derivatives
//! of compositions are exact to round-off.
//!
//! Coefficients are stored densely in graded order (total degree, then lex),
//! as Taylor coefficients `∂^α f / α!`. The graded layout makes truncation to
//! a lower order a prefix copy, and lets [`Jet::derivative`] extract the
//! tower of a partial derivative by index shifting.

use crate::error::{Error, Result};
use smallvec::SmallVec;
use std::collections::HashMap;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

/// Hard cap on the tower order; deep chains go through the projective
/// shortcut instead of higher towers.
pub const MAX_ORDER: usize = 6;
/// Coordinates are (x¹, x², y¹, y²) at most.
pub const MAX_VARS: usize = 4;

type Coeffs = SmallVec<[f64; 8]>;
type Exp = [u8; MAX_VARS];

/// Index tables for one (nvars, order) truncation universe. Interned and
/// shared; jets hold a `&'static` reference.
pub struct JetSpace {
    nvars: usize,
    order: usize,
    exps: Vec<Exp>,
    rank: HashMap<Exp, usize>,
    /// rank of exps[i] + exps[j], flattened i*len+j; u32::MAX when the sum
    /// exceeds `order`.
    prod: Vec<u32>,
    /// rank of exps[i] + e_v in this space, u32::MAX when out of range.
    bump: Vec<[u32; MAX_VARS]>,
    /// α! per rank.
    fact: Vec<f64>,
    /// first rank of each total degree (len order+2, last = exps.len()).
    degree_start: Vec<usize>,
}

fn enumerate_exps(nvars: usize, order: usize) -> Vec<Exp> {
    let mut exps = Vec::new();
    for deg in 0..=order {
        let mut stack: Vec<(Exp, usize, usize)> = vec![([0; MAX_VARS], 0, deg)];
        let mut level = Vec::new();
        while let Some((e, var, rem)) = stack.pop() {
            if var == nvars {
                if rem == 0 {
                    level.push(e);
                }
                continue;
            }
            // push in reverse so lowest exponent for this var pops last
            for k in (0..=rem).rev() {
                let mut e2 = e;
                e2[var] = k as u8;
                stack.push((e2, var + 1, rem - k));
            }
        }
        level.sort();
        exps.extend(level);
    }
    exps
}

impl JetSpace {
    fn build(nvars: usize, order: usize) -> JetSpace {
        let exps = enumerate_exps(nvars, order);
        let n = exps.len();
        let rank: HashMap<Exp, usize> = exps.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let total = |e: &Exp| e.iter().map(|&k| k as usize).sum::<usize>();
        let mut prod = vec![u32::MAX; n * n];
        for i in 0..n {
            for j in 0..n {
                if total(&exps[i]) + total(&exps[j]) <= order {
                    let mut s = [0u8; MAX_VARS];
                    for v in 0..MAX_VARS {
                        s[v] = exps[i][v] + exps[j][v];
                    }
                    prod[i * n + j] = rank[&s] as u32;
                }
            }
        }
        let mut bump = vec![[u32::MAX; MAX_VARS]; n];
        for i in 0..n {
            for v in 0..nvars {
                if total(&exps[i]) < order {
                    let mut s = exps[i];
                    s[v] += 1;
                    bump[i][v] = rank[&s] as u32;
                }
            }
        }
        let fact = exps
            .iter()
            .map(|e| {
                e.iter()
                    .map(|&k| (1..=k as u64).product::<u64>() as f64)
                    .product()
            })
            .collect();
        let mut degree_start = vec![0usize; order + 2];
        for (i, e) in exps.iter().enumerate() {
            let d = total(e);
            for ds in degree_start.iter_mut().skip(d + 1) {
                *ds = i + 1;
            }
        }
        degree_start[order + 1] = n;
        JetSpace {
            nvars,
            order,
            exps,
            rank,
            prod,
            bump,
            fact,
            degree_start,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Interned lookup of a jet space. Spaces are small and few; they are leaked
/// once and shared for the process lifetime.
pub fn jet_space(nvars: usize, order: usize) -> Result<&'static JetSpace> {
    if nvars == 0 || nvars > MAX_VARS {
        return Err(Error::BadJetRequest(format!(
            "nvars must be in 1..={MAX_VARS}, got {nvars}"
        )));
    }
    if order > MAX_ORDER {
        return Err(Error::OrderTooHigh {
            requested: order,
            max: MAX_ORDER,
        });
    }
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), &'static JetSpace>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("jet space cache poisoned");
    Ok(guard
        .entry((nvars, order))
        .or_insert_with(|| Box::leak(Box::new(JetSpace::build(nvars, order)))))
}

/// Truncated derivative tower of a scalar quantity at a point.
#[derive(Clone)]
pub struct Jet {
    space: &'static JetSpace,
    c: Coeffs,
}

impl std::fmt::Debug for Jet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Jet")
            .field("nvars", &self.space.nvars)
            .field("order", &self.space.order)
            .field("value", &self.value())
            .finish()
    }
}

impl Jet {
    pub fn constant(space: &'static JetSpace, v: f64) -> Jet {
        let mut c = Coeffs::from_elem(0.0, space.len());
        c[0] = v;
        Jet { space, c }
    }

    /// Seed for coordinate `var`: value `v`, unit first derivative.
    pub fn variable(space: &'static JetSpace, v: f64, var: usize) -> Jet {
        assert!(var < space.nvars, "variable index out of range");
        let mut c = Coeffs::from_elem(0.0, space.len());
        c[0] = v;
        if space.order >= 1 {
            let mut e = [0u8; MAX_VARS];
            e[var] = 1;
            c[space.rank[&e]] = 1.0;
        }
        Jet { space, c }
    }

    pub fn space(&self) -> &'static JetSpace {
        self.space
    }

    pub fn order(&self) -> usize {
        self.space.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Mixed partial ∂^α f for a multi-index `alpha` (one entry per variable).
    pub fn partial(&self, alpha: &[usize]) -> f64 {
        let mut e = [0u8; MAX_VARS];
        for (v, &k) in alpha.iter().enumerate() {
            e[v] = k as u8;
        }
        match self.space.rank.get(&e) {
            Some(&r) => self.c[r] * self.space.fact[r],
            None => panic!(
                "partial {alpha:?} not stored (nvars={}, order={})",
                self.space.nvars, self.space.order
            ),
        }
    }

    /// All stored (multi-index, partial) pairs in graded order.
    pub fn partials(&self) -> impl Iterator<Item = ([u8; MAX_VARS], f64)> + '_ {
        self.space
            .exps
            .iter()
            .zip(self.c.iter())
            .zip(self.space.fact.iter())
            .map(|((e, c), f)| (*e, c * f))
    }

    /// Tower of ∂f/∂(var), one order shallower.
    pub fn derivative(&self, var: usize) -> Jet {
        assert!(self.space.order >= 1, "cannot differentiate an order-0 jet");
        let small = jet_space(self.space.nvars, self.space.order - 1)
            .expect("shallower space always exists");
        let mut c = Coeffs::from_elem(0.0, small.len());
        for (r, slot) in c.iter_mut().enumerate() {
            // graded layout: ranks of the shallower space prefix this one
            let up = self.space.bump[r][var];
            debug_assert_ne!(up, u32::MAX);
            let e = self.space.exps[r];
            *slot = self.c[up as usize] * (e[var] as f64 + 1.0);
        }
        Jet { space: small, c }
    }

    /// Drop coefficients above `order` (prefix copy in the graded layout).
    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.space.order {
            return self.clone();
        }
        let small = jet_space(self.space.nvars, order).expect("shallower space always exists");
        Jet {
            space: small,
            c: SmallVec::from_slice(&self.c[..small.len()]),
        }
    }

    fn aligned(a: &Jet, b: &Jet) -> (Jet, Jet) {
        assert_eq!(
            a.space.nvars, b.space.nvars,
            "jets over different variable sets cannot be combined"
        );
        if std::ptr::eq(a.space, b.space) {
            (a.clone(), b.clone())
        } else if a.space.order < b.space.order {
            (a.clone(), b.truncate(a.space.order))
        } else {
            (a.truncate(b.space.order), b.clone())
        }
    }

    /// Composition with a univariate Taylor series `outer[m] = f⁽ᵐ⁾(c₀)/m!`
    /// around this jet's value (Horner over the nilpotent part).
    fn compose(&self, outer: &[f64]) -> Jet {
        let mut nil = self.clone();
        nil.c[0] = 0.0;
        let k = self.space.order;
        let mut r = Jet::constant(self.space, outer[k]);
        for m in (0..k).rev() {
            r = &r * &nil;
            r.c[0] += outer[m];
        }
        r
    }

    pub fn recip(&self) -> Jet {
        let v = self.value();
        assert!(v != 0.0, "division by a jet with zero value");
        let k = self.space.order;
        let mut outer = vec![0.0; k + 1];
        let mut d = 1.0 / v;
        for o in outer.iter_mut() {
            *o = d;
            d *= -1.0 / v;
        }
        self.compose(&outer)
    }

    pub fn sqrt(&self) -> Jet {
        let v = self.value();
        assert!(v > 0.0, "sqrt of a jet with non-positive value");
        let k = self.space.order;
        let mut outer = vec![0.0; k + 1];
        let mut d = v.sqrt();
        for (m, o) in outer.iter_mut().enumerate() {
            *o = d;
            d *= (0.5 - m as f64) / ((m as f64 + 1.0) * v);
        }
        self.compose(&outer)
    }

    pub fn sin(&self) -> Jet {
        let v = self.value();
        let k = self.space.order;
        let cycle = [v.sin(), v.cos(), -v.sin(), -v.cos()];
        let mut fact = 1.0;
        let mut outer = vec![0.0; k + 1];
        for (m, o) in outer.iter_mut().enumerate() {
            if m > 0 {
                fact *= m as f64;
            }
            *o = cycle[m % 4] / fact;
        }
        self.compose(&outer)
    }

    pub fn cos(&self) -> Jet {
        let v = self.value();
        let k = self.space.order;
        let cycle = [v.cos(), -v.sin(), -v.cos(), v.sin()];
        let mut fact = 1.0;
        let mut outer = vec![0.0; k + 1];
        for (m, o) in outer.iter_mut().enumerate() {
            if m > 0 {
                fact *= m as f64;
            }
            *o = cycle[m % 4] / fact;
        }
        self.compose(&outer)
    }

    pub fn powi(&self, n: u32) -> Jet {
        match n {
            0 => Jet::constant(self.space, 1.0),
            _ => {
                let mut r = self.clone();
                for _ in 1..n {
                    r = &r * self;
                }
                r
            }
        }
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let (mut a, b) = Jet::aligned(self, rhs);
        for (x, y) in a.c.iter_mut().zip(b.c.iter()) {
            *x += y;
        }
        a
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let (mut a, b) = Jet::aligned(self, rhs);
        for (x, y) in a.c.iter_mut().zip(b.c.iter()) {
            *x -= y;
        }
        a
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let (a, b) = Jet::aligned(self, rhs);
        let sp = a.space;
        let n = sp.len();
        let mut c = Coeffs::from_elem(0.0, n);
        for i in 0..n {
            let ai = a.c[i];
            if ai == 0.0 {
                continue;
            }
            let deg_i = sp.exps[i].iter().map(|&k| k as usize).sum::<usize>();
            let jmax = sp.degree_start[sp.order - deg_i + 1];
            let row = &sp.prod[i * n..i * n + jmax];
            for (j, &r) in row.iter().enumerate() {
                if r != u32::MAX {
                    c[r as usize] += ai * b.c[j];
                }
            }
        }
        Jet { space: sp, c }
    }
}

impl Div for &Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Jet) -> Jet {
        self * &rhs.recip()
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        let mut a = self.clone();
        for x in a.c.iter_mut() {
            *x = -*x;
        }
        a
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, s: f64) -> Jet {
        let mut a = self.clone();
        for x in a.c.iter_mut() {
            *x *= s;
        }
        a
    }
}

impl Add<f64> for &Jet {
    type Output = Jet;
    fn add(self, s: f64) -> Jet {
        let mut a = self.clone();
        a.c[0] += s;
        a
    }
}

impl Sub<&Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let mut a = -rhs;
        a.c[0] += self;
        a
    }
}

/// Variable-set declaration for [`lift`]: how many coordinates and to what
/// total order the tower is carried.
#[derive(Clone, Copy, Debug)]
pub struct DerivativeRequest {
    pub nvars: usize,
    pub order: usize,
}

impl DerivativeRequest {
    pub fn new(nvars: usize, order: usize) -> DerivativeRequest {
        DerivativeRequest { nvars, order }
    }
}

/// Run a jet-generic function on variable seeds at `point`, returning the
/// full derivative tower of the composition.
pub fn lift<F>(f: F, point: &[f64], req: DerivativeRequest) -> Result<Jet>
where
    F: Fn(&[Jet]) -> Result<Jet>,
{
    if point.len() != req.nvars {
        return Err(Error::BadJetRequest(format!(
            "point has {} coordinates, request declares {}",
            point.len(),
            req.nvars
        )));
    }
    let space = jet_space(req.nvars, req.order)?;
    let seeds: Vec<Jet> = point
        .iter()
        .enumerate()
        .map(|(v, &p)| Jet::variable(space, p, v))
        .collect();
    f(&seeds)
}

/// Plain central finite difference of ∂^α f at `point` with step `h`
/// (recursive over the multi-index; total order ≤ 4).
pub fn fd_partial<F>(f: &F, point: &[f64], alpha: &[usize], h: f64) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    match alpha.iter().position(|&k| k > 0) {
        None => f(point),
        Some(v) => {
            let mut a2: Vec<usize> = alpha.to_vec();
            a2[v] -= 1;
            let mut p_hi = point.to_vec();
            let mut p_lo = point.to_vec();
            p_hi[v] += h;
            p_lo[v] -= h;
            (fd_partial(f, &p_hi, &a2, h) - fd_partial(f, &p_lo, &a2, h)) / (2.0 * h)
        }
    }
}

/// Finite-difference oracle: central differences Richardson-extrapolated over
/// steps `h` and `h/2`, error O(h⁴). Test-side cross-check for [`lift`].
pub fn fd_check<F>(f: F, point: &[f64], alpha: &[usize], h: f64) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    assert!(h > 0.0, "finite-difference step must be positive");
    let total: usize = alpha.iter().sum();
    assert!(total <= 4, "finite-difference oracle limited to order 4");
    let coarse = fd_partial(&f, point, alpha, h);
    let fine = fd_partial(&f, point, alpha, h / 2.0);
    (4.0 * fine - coarse) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn square_univariate() {
        let sp = jet_space(1, 2).unwrap();
        let u = Jet::variable(sp, 3.0, 0);
        let f = &u * &u;
        assert_eq!(f.value(), 9.0);
        assert_eq!(f.partial(&[1]), 6.0);
        assert_eq!(f.partial(&[2]), 2.0);
    }

    #[test]
    fn bilinear_mixed_partial() {
        let sp = jet_space(2, 2).unwrap();
        let u = Jet::variable(sp, 2.0, 0);
        let v = Jet::variable(sp, 5.0, 1);
        let f = &u * &v;
        assert_eq!(f.value(), 10.0);
        assert_eq!(f.partial(&[1, 1]), 1.0);
        assert_eq!(f.partial(&[2, 0]), 0.0);
    }

    #[test]
    fn polynomial_exact_to_order() {
        // f(u, v) = u³v + 2uv² − 7, all partials exact
        let sp = jet_space(2, 4).unwrap();
        let u = Jet::variable(sp, 1.3, 0);
        let v = Jet::variable(sp, -0.7, 1);
        let f = &(&u.powi(3) * &v) + &(&(&(&u * &v) * &v) * 2.0);
        let (uv, vv) = (1.3f64, -0.7f64);
        assert_relative_eq!(
            f.value(),
            uv.powi(3) * vv + 2.0 * uv * vv * vv,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            f.partial(&[1, 0]),
            3.0 * uv * uv * vv + 2.0 * vv * vv,
            epsilon = 1e-13
        );
        assert_relative_eq!(f.partial(&[2, 1]), 6.0 * uv, epsilon = 1e-13);
        assert_relative_eq!(f.partial(&[0, 2]), 4.0 * uv, epsilon = 1e-13);
        assert_relative_eq!(f.partial(&[3, 1]), 6.0, epsilon = 1e-13);
    }

    #[test]
    fn schwarz_symmetry_of_extraction() {
        let sp = jet_space(2, 4).unwrap();
        let u = Jet::variable(sp, 0.4, 0);
        let v = Jet::variable(sp, 1.1, 1);
        let f = &(&u * &v).sin() * &(&u + &v).sqrt();
        let duv = f.derivative(0).derivative(1);
        let dvu = f.derivative(1).derivative(0);
        for (a, b) in duv.c.iter().zip(dvu.c.iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-14, max_relative = 1e-14);
        }
    }

    #[test]
    fn leibniz_rule_on_towers() {
        // derivative of a product versus the product rule, all coefficients
        let sp = jet_space(2, 4).unwrap();
        let u = Jet::variable(sp, 0.9, 0);
        let v = Jet::variable(sp, 0.3, 1);
        let f = &u.sin() + &(&v * &v);
        let g = &(&u * &v) + 1.5;
        let lhs = (&f * &g).derivative(0);
        let rhs = &(&f.derivative(0) * &g) + &(&f * &g.derivative(0));
        for (a, b) in lhs.c.iter().zip(rhs.c.iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-14, max_relative = 1e-13);
        }
    }

    #[test]
    fn division_and_sqrt_against_closed_forms() {
        let sp = jet_space(1, 4).unwrap();
        let u = Jet::variable(sp, 2.0, 0);
        let f = &Jet::constant(sp, 1.0) / &u; // 1/u
        assert_relative_eq!(f.partial(&[1]), -0.25, epsilon = 1e-14);
        assert_relative_eq!(f.partial(&[2]), 0.25, epsilon = 1e-14);
        assert_relative_eq!(f.partial(&[3]), -6.0 / 16.0, epsilon = 1e-14);
        let s = u.sqrt();
        assert_relative_eq!(s.partial(&[1]), 0.5 / 2.0f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(s.partial(&[2]), -0.25 * 2.0f64.powf(-1.5), epsilon = 1e-14);
    }

    #[test]
    fn fd_oracle_sin_first_order() {
        let d = fd_check(|p: &[f64]| p[0].sin(), &[0.0], &[1], 1e-5);
        assert!((d - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fd_oracle_cubic_second_order() {
        let d = fd_check(|p: &[f64]| p[0].powi(3), &[2.0], &[2], 1e-4);
        assert!((d - 12.0).abs() < 1e-4);
    }

    #[test]
    fn lift_matches_fd_for_transcendental() {
        let f = |p: &[f64]| (p[0] * p[1]).sin() / (1.0 + p[0] * p[0]);
        let jf = |s: &[Jet]| Ok(&(&s[0] * &s[1]).sin() / &(&(&s[0] * &s[0]) + 1.0));
        let point = [0.7, -0.4];
        let jet = lift(jf, &point, DerivativeRequest::new(2, 3)).unwrap();
        for alpha in [[1, 0], [0, 1], [1, 1], [2, 0], [2, 1], [0, 3]] {
            let fd = fd_check(f, &point, &alpha, 1e-3);
            let ad = jet.partial(&alpha);
            assert_relative_eq!(ad, fd, max_relative = 1e-6, epsilon = 1e-8);
        }
    }

    #[test]
    fn order_cap_enforced() {
        assert!(matches!(
            jet_space(2, MAX_ORDER + 1),
            Err(Error::OrderTooHigh { .. })
        ));
    }

    #[test]
    fn truncation_is_prefix() {
        let sp = jet_space(3, 4).unwrap();
        let u = Jet::variable(sp, 0.5, 0);
        let v = Jet::variable(sp, 0.25, 2);
        let f = &u.cos() * &v.sqrt();
        let t = f.truncate(2);
        assert_eq!(t.order(), 2);
        assert_eq!(t.value(), f.value());
        assert_eq!(t.partial(&[1, 0, 1]), f.partial(&[1, 0, 1]));
    }
}
