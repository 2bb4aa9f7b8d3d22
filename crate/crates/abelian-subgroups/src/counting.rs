//! Integer-valued subgroup counting over arbitrary moduli.
//!
//! Cyclic counts work for every rank; totals and order-restricted counts
//! have dedicated identities for rank <= 4 plus a general route through the
//! primary decomposition and the symbolic p-group counts. Everything is
//! multiplicative over coprime parts, which the tests exploit heavily.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::arith::{self, factorize, Factorization, Natural};
use crate::enumerate::IsoType;
use crate::error::{Error, Result};
use crate::pgroup::{self, IntPoly, Partition};

/// The group Z_{n1} x ... x Z_{nk}, given by its moduli.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupSpec {
    moduli: Vec<Natural>,
}

impl GroupSpec {
    /// Non-empty moduli, all >= 1.
    pub fn new(moduli: Vec<Natural>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidArgument("at least one modulus required".into()));
        }
        if moduli.iter().any(Zero::is_zero) {
            return Err(Error::ZeroArgument);
        }
        Ok(GroupSpec { moduli })
    }

    pub fn from_u64s(moduli: &[u64]) -> Result<Self> {
        GroupSpec::new(moduli.iter().map(|&m| Natural::from(m)).collect())
    }

    pub fn moduli(&self) -> &[Natural] {
        &self.moduli
    }

    pub fn arity(&self) -> usize {
        self.moduli.len()
    }

    /// prod n_i.
    pub fn order(&self) -> Natural {
        self.moduli.iter().product()
    }

    pub fn moduli_u64(&self) -> Result<Vec<u64>> {
        self.moduli
            .iter()
            .map(|m| arith::to_u64(m, "modulus"))
            .collect()
    }

    /// Primary decomposition: for each prime dividing the order, the type
    /// partition (non-increasing exponents of the p-parts of the moduli).
    pub fn primary_types(&self) -> Vec<(Natural, Partition)> {
        let mut per_prime: BTreeMap<Natural, Vec<u32>> = BTreeMap::new();
        for m in &self.moduli {
            let f = factorize(m).expect("moduli are nonzero");
            for (p, e) in f.pairs() {
                per_prime.entry(p.clone()).or_default().push(*e);
            }
        }
        per_prime
            .into_iter()
            .map(|(p, exps)| (p, Partition::new(exps)))
            .collect()
    }
}

/// Merged prime-exponent view of a list of moduli.
struct PrimeView {
    primes: Vec<Natural>,
    /// exps[i][j] = exponent of primes[i] in moduli[j].
    exps: Vec<Vec<u32>>,
}

fn prime_view(moduli: &[&Natural]) -> Result<PrimeView> {
    let facts: Vec<Factorization> = moduli
        .iter()
        .map(|m| factorize(m))
        .collect::<Result<_>>()?;
    let mut primes: Vec<Natural> = facts
        .iter()
        .flat_map(|f| f.pairs().iter().map(|(p, _)| p.clone()))
        .collect();
    primes.sort();
    primes.dedup();
    let exps = primes
        .iter()
        .map(|p| facts.iter().map(|f| f.exponent_of(p)).collect())
        .collect();
    let primes_out = primes;
    Ok(PrimeView {
        primes: primes_out,
        exps,
    })
}

/// Number of cyclic subgroups of Z_{n1} x ... x Z_{nk}, for any k:
/// sum over divisor tuples of phi(d_1)...phi(d_k)/phi(lcm), evaluated per
/// prime with the summands grouped by the lcm value so that each division
/// happens once per group and stays in integers.
pub fn cyclic_count(g: &GroupSpec) -> Natural {
    let view = prime_view(&g.moduli.iter().collect::<Vec<_>>()).expect("moduli are nonzero");
    let mut total = Natural::one();
    for (p, exps) in view.primes.iter().zip(&view.exps) {
        total *= cyclic_count_local(p, exps);
    }
    total
}

/// Local factor at p for exponent vector e: 1 + sum over m >= 1 of
/// p^{A_{m-1}-(m-1)} (1 + p + ... + p^{D-1}) with A_t = sum_i min(t, e_i)
/// and D = A_m - A_{m-1}.
fn cyclic_count_local(p: &Natural, exps: &[u32]) -> Natural {
    let emax = exps.iter().copied().max().unwrap_or(0);
    let mut local = Natural::one();
    let mut a_prev: u32 = 0;
    for m in 1..=emax {
        let a_m: u32 = exps.iter().map(|&e| e.min(m)).sum();
        let delta = a_m - a_prev;
        let mut geo = Natural::zero();
        let mut pk = Natural::one();
        for _ in 0..delta {
            geo += &pk;
            pk *= p;
        }
        local += p.pow(a_prev - (m - 1)) * geo;
        a_prev = a_m;
    }
    local
}

/// Number of cyclic subgroups of order delta:
/// (1/phi(delta)) sum_{e | delta} gcd(e,n_1)...gcd(e,n_k) mu(delta/e).
/// Zero when delta does not divide lcm(n_1,...,n_k).
pub fn cyclic_count_of_order(g: &GroupSpec, delta: &Natural) -> Natural {
    if delta.is_zero() {
        return Natural::zero();
    }
    let lcm = g
        .moduli
        .iter()
        .fold(Natural::one(), |acc, m| acc.lcm(m));
    if !(&lcm % delta).is_zero() {
        return Natural::zero();
    }
    let fd = factorize(delta).expect("delta is nonzero");
    let mut sum = BigInt::zero();
    for e in fd.divisors() {
        let quotient = delta / &e;
        let mu = arith::mobius(&quotient).expect("quotient is nonzero");
        if mu == 0 {
            continue;
        }
        let mut term = BigInt::one();
        for m in &g.moduli {
            term *= BigInt::from(e.gcd(m));
        }
        if mu < 0 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    let phi = arith::euler_phi(delta).expect("delta is nonzero");
    let (q, r) = sum.div_rem(&BigInt::from(phi));
    assert!(
        r.is_zero() && !q.is_negative(),
        "cyclic order count must divide exactly; got remainder for delta={delta}"
    );
    q.to_biguint().unwrap()
}

use num_traits::Signed;

/// Number of cyclic subgroups of Z_n^k: c_k(n) = sum_{d|n} phi_k(d)/phi(d),
/// evaluated multiplicatively.
pub fn cyclic_count_power(k: u32, n: &Natural) -> Result<Natural> {
    if k == 0 {
        return Err(Error::InvalidArgument("rank k must be >= 1".into()));
    }
    let f = factorize(n)?;
    let mut total = Natural::one();
    for (p, e) in f.pairs() {
        // phi_k(p^v)/phi(p^v) = p^{(v-1)(k-1)} (1 + p + ... + p^{k-1})
        let mut geo = Natural::zero();
        let mut pk = Natural::one();
        for _ in 0..k {
            geo += &pk;
            pk *= p;
        }
        let mut local = Natural::one();
        for v in 1..=*e {
            local += p.pow((v - 1) * (k - 1)) * &geo;
        }
        total *= local;
    }
    Ok(total)
}

/// Number of sublattices of Z^k of index n:
/// f_k(n) = sum_{d_1 ... d_k = n} d_2 d_3^2 ... d_k^{k-1}.
pub fn sublattice_count(k: u32, n: &Natural) -> Result<Natural> {
    if k == 0 {
        return Err(Error::InvalidArgument("rank k must be >= 1".into()));
    }
    let f = factorize(n)?;
    let mut total = Natural::one();
    for (p, e) in f.pairs() {
        // g_j(e) = sum_{i <= e} g_{j-1}(i) p^{(j-1)(e-i)}, g_1 = 1
        let e = *e as usize;
        let mut g = vec![Natural::one(); e + 1];
        for j in 2..=k {
            let mut next = Vec::with_capacity(e + 1);
            for top in 0..=e {
                let mut acc = Natural::zero();
                for (i, gi) in g.iter().enumerate().take(top + 1) {
                    acc += gi * p.pow((j - 1) * (top - i) as u32);
                }
                next.push(acc);
            }
            g = next;
        }
        total *= g[e].clone();
    }
    Ok(total)
}

/// Shared machinery for sigma_t(m, n) = sum_{d | gcd(m,n)} phi(d) d^t
/// sigma_t(m/d) sigma_t(n/d); t = 0 is the plain subgroup count.
fn sigma2_impl(t: u32, m: &Natural, n: &Natural) -> Result<Natural> {
    let view = prime_view(&[m, n])?;
    // Per prime power tables sigma_t(p^i) for i up to the larger exponent.
    let tables: Vec<Vec<Natural>> = view
        .primes
        .iter()
        .zip(&view.exps)
        .map(|(p, e)| {
            let top = e[0].max(e[1]);
            let mut tab = Vec::with_capacity(top as usize + 1);
            let mut acc = Natural::one();
            let mut pk = Natural::one();
            tab.push(Natural::one());
            for _ in 1..=top {
                pk *= p.pow(t);
                acc += &pk;
                tab.push(acc.clone());
            }
            tab
        })
        .collect();

    fn rec(
        i: usize,
        view: &PrimeView,
        tables: &[Vec<Natural>],
        t: u32,
        acc: Natural,
        out: &mut Natural,
    ) {
        if i == view.primes.len() {
            *out += acc;
            return;
        }
        let p = &view.primes[i];
        let (em, en) = (view.exps[i][0], view.exps[i][1]);
        let shared = em.min(en);
        for a in 0..=shared {
            // phi(p^a) p^{a t} for the d-part, sigma_t of the quotients.
            let dpart = if a == 0 {
                Natural::one()
            } else {
                p.pow(a - 1) * (p - 1u32) * p.pow(a * t)
            };
            let term = &acc
                * dpart
                * &tables[i][(em - a) as usize]
                * &tables[i][(en - a) as usize];
            rec(i + 1, view, tables, t, term, out);
        }
    }

    let mut out = Natural::zero();
    rec(0, &view, &tables, t, Natural::one(), &mut out);
    Ok(out)
}

/// Total number of subgroups of Z_m x Z_n:
/// s(m, n) = sum_{d | gcd(m,n)} phi(d) tau(m/d) tau(n/d).
pub fn total_count_2(m: &Natural, n: &Natural) -> Result<Natural> {
    sigma2_impl(0, m, n)
}

/// The other displayed identity s(m, n) = sum_{i|m, j|n} gcd(i, j); kept as
/// an independent route for the dual-route tests.
pub fn total_count_2_divisor_form(m: &Natural, n: &Natural) -> Result<Natural> {
    let dm = factorize(m)?.divisors();
    let dn = factorize(n)?.divisors();
    let mut acc = Natural::zero();
    for i in &dm {
        for j in &dn {
            acc += i.gcd(j);
        }
    }
    Ok(acc)
}

/// Sum of t-th powers of subgroup orders of Z_m x Z_n.
pub fn sigma_t_2(t: u32, m: &Natural, n: &Natural) -> Result<Natural> {
    sigma2_impl(t, m, n)
}

/// The lcm-form identity sigma_t(m, n) = sum_{i|m, j|n} lcm(i,j)^t
/// (id_t * phi)(gcd(i,j)); independent route for the dual-route tests.
pub fn sigma_t_2_lcm_form(t: u32, m: &Natural, n: &Natural) -> Result<Natural> {
    let dm = factorize(m)?.divisors();
    let dn = factorize(n)?.divisors();
    let mut conv_cache: BTreeMap<Natural, Natural> = BTreeMap::new();
    let mut acc = Natural::zero();
    for i in &dm {
        for j in &dn {
            let g = i.gcd(j);
            let l = i.lcm(j);
            let conv = conv_cache
                .entry(g.clone())
                .or_insert_with(|| {
                    // (id_t * phi)(g) = sum_{e|g} e^t phi(g/e)
                    let fg = factorize(&g).expect("gcd nonzero");
                    let mut s = Natural::zero();
                    for e in fg.divisors() {
                        let q = &g / &e;
                        s += e.pow(t) * arith::euler_phi(&q).expect("nonzero");
                    }
                    s
                })
                .clone();
            acc += l.pow(t) * conv;
        }
    }
    Ok(acc)
}

/// Number of subgroups of Z_m x Z_n of order delta:
/// sum_{d | gcd(m,n,delta)} phi(d) N(m/d, n/d, delta/d) with N(a,b,c) the
/// number of solutions of xy = a, zt = b, xz = c, counted in closed form as
/// #{x : x | gcd(a,c), (c/x) | b}. Zero when delta does not divide mn.
pub fn count_order_2(m: &Natural, n: &Natural, delta: &Natural) -> Result<Natural> {
    if m.is_zero() || n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if delta.is_zero() || !(&(m * n) % delta).is_zero() {
        return Ok(Natural::zero());
    }
    let g3 = m.gcd(n).gcd(delta);
    let mut acc = Natural::zero();
    for (d, phi_d) in factorize(&g3)?.divisors_with_phi() {
        acc += phi_d * solution_count(&(m / &d), &(n / &d), &(delta / &d))?;
    }
    Ok(acc)
}

/// N(a, b, c) = #{(x,y,z,t) : xy = a, zt = b, xz = c}
///            = #{x : x | gcd(a,c), (c/x) | b}.
fn solution_count(a: &Natural, b: &Natural, c: &Natural) -> Result<Natural> {
    let g = a.gcd(c);
    let mut count: u64 = 0;
    for x in factorize(&g)?.divisors() {
        if (b % (c / &x)).is_zero() {
            count += 1;
        }
    }
    Ok(Natural::from(count))
}

/// The first displayed identity for the order count:
/// sum over i | gcd(m,delta), j | gcd(n,delta) with delta | ij of
/// phi(ij/delta). Independent route for the dual-route tests.
pub fn count_order_2_direct(m: &Natural, n: &Natural, delta: &Natural) -> Result<Natural> {
    if m.is_zero() || n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if delta.is_zero() || !(&(m * n) % delta).is_zero() {
        return Ok(Natural::zero());
    }
    let di = factorize(&m.gcd(delta))?.divisors();
    let dj = factorize(&n.gcd(delta))?.divisors();
    let mut acc = Natural::zero();
    for i in &di {
        for j in &dj {
            let ij = i * j;
            if (&ij % delta).is_zero() {
                acc += arith::euler_phi(&(ij / delta))?;
            }
        }
    }
    Ok(acc)
}

/// Number of subgroups of Z_m x Z_n isomorphic to Z_A x Z_B:
/// sum over i|m, j|n with AB | ij and lcm(i,j) = B of phi(ij/(AB)).
/// Zero unless A | B and A | gcd(m, n).
pub fn count_isotype_2(m: &Natural, n: &Natural, a: &Natural, b: &Natural) -> Result<Natural> {
    if m.is_zero() || n.is_zero() || a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if !(b % a).is_zero() || !m.gcd(n).gcd(a).eq(a) {
        return Ok(Natural::zero());
    }
    let ab = a * b;
    let mut acc = Natural::zero();
    for i in factorize(m)?.divisors() {
        for j in factorize(n)?.divisors() {
            let ij = &i * &j;
            if i.lcm(&j) == *b && (&ij % &ab).is_zero() {
                acc += arith::euler_phi(&(ij / &ab))?;
            }
        }
    }
    Ok(acc)
}

/// Total number of subgroups of Z_m x Z_n x Z_r:
/// sum over a|m, b|n, c|r of (ABC/X^2) P(X) with A = gcd(a, n/b),
/// B = gcd(b, r/c), C = gcd(a, r/c), X = ABC/gcd(a(r/c), ABC) and P the
/// gcd-sum function. Every summand is integral.
pub fn total_count_3(m: &Natural, n: &Natural, r: &Natural) -> Result<Natural> {
    count3_filtered(m, n, r, None)
}

/// Number of subgroups of Z_m x Z_n x Z_r of order delta: the same sum
/// restricted to abc = mnr/delta. Zero when delta does not divide mnr.
pub fn count_order_3(m: &Natural, n: &Natural, r: &Natural, delta: &Natural) -> Result<Natural> {
    if m.is_zero() || n.is_zero() || r.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let order = &(m * n) * r;
    if delta.is_zero() || !(&order % delta).is_zero() {
        return Ok(Natural::zero());
    }
    count3_filtered(m, n, r, Some(order / delta))
}

fn count3_filtered(
    m: &Natural,
    n: &Natural,
    r: &Natural,
    abc_target: Option<Natural>,
) -> Result<Natural> {
    let da = factorize(m)?.divisors();
    let db = factorize(n)?.divisors();
    let dc = factorize(r)?.divisors();
    let mut gcd_sum_cache: BTreeMap<Natural, Natural> = BTreeMap::new();
    let mut acc = Natural::zero();
    for a in &da {
        for b in &db {
            let nb = n / b;
            let ab_part = a.gcd(&nb);
            for c in &dc {
                if let Some(target) = &abc_target {
                    if &(&(a * b) * c) != target {
                        continue;
                    }
                }
                let rc = r / c;
                let cap_a = &ab_part;
                let cap_b = b.gcd(&rc);
                let cap_c = a.gcd(&rc);
                let abc = cap_a * &cap_b * &cap_c;
                let x = &abc / (a * &rc).gcd(&abc);
                let p_x = gcd_sum_cache
                    .entry(x.clone())
                    .or_insert_with(|| arith::gcd_sum(&x).expect("X >= 1"))
                    .clone();
                let num = abc * p_x;
                let x2 = &x * &x;
                let (q, rem) = num.div_rem(&x2);
                if !rem.is_zero() {
                    return Err(Error::Internal(format!(
                        "rank-3 summand (ABC/X^2)P(X) not integral at (a,b,c)=({a},{b},{c})"
                    )));
                }
                acc += q;
            }
        }
    }
    Ok(acc)
}

static N4_CACHE: Lazy<Mutex<HashMap<[u32; 4], IntPoly>>> = Lazy::new(Default::default);
static N4_ORDER_CACHE: Lazy<Mutex<HashMap<([u32; 4], u32), IntPoly>>> =
    Lazy::new(Default::default);

fn n4_poly_cached(mut exps: [u32; 4]) -> IntPoly {
    exps.sort_unstable();
    if let Some(p) = N4_CACHE.lock().unwrap().get(&exps) {
        return p.clone();
    }
    let poly = pgroup::n4_poly(exps[0], exps[1], exps[2], exps[3]);
    N4_CACHE.lock().unwrap().insert(exps, poly.clone());
    poly
}

fn n4_order_poly_cached(mut exps: [u32; 4], k: u32) -> IntPoly {
    exps.sort_unstable();
    if let Some(p) = N4_ORDER_CACHE.lock().unwrap().get(&(exps, k)) {
        return p.clone();
    }
    let poly = pgroup::n4_order_poly(exps[0], exps[1], exps[2], exps[3], k);
    N4_ORDER_CACHE.lock().unwrap().insert((exps, k), poly.clone());
    poly
}

/// Total number of subgroups of Z_m x Z_n x Z_r x Z_s, by multiplicative
/// reduction: the rank-4 polynomial of each primary component evaluated at
/// its prime.
pub fn total_count_4(m: &Natural, n: &Natural, r: &Natural, s: &Natural) -> Result<Natural> {
    let view = prime_view(&[m, n, r, s])?;
    let mut total = Natural::one();
    for (p, e) in view.primes.iter().zip(&view.exps) {
        let poly = n4_poly_cached([e[0], e[1], e[2], e[3]]);
        total *= poly.eval_natural(p)?;
    }
    Ok(total)
}

/// Number of subgroups of order k of Z_m x Z_n x Z_r x Z_s, by
/// multiplicative reduction with the exponent of k split per prime.
/// Zero when k does not divide mnrs.
pub fn count_order_4(
    m: &Natural,
    n: &Natural,
    r: &Natural,
    s: &Natural,
    k: &Natural,
) -> Result<Natural> {
    let order = &(&(m * n) * r) * s;
    if k.is_zero() || !(&order % k).is_zero() {
        return Ok(Natural::zero());
    }
    let fk = factorize(k)?;
    let view = prime_view(&[m, n, r, s])?;
    let mut total = Natural::one();
    for (p, e) in view.primes.iter().zip(&view.exps) {
        let kp = fk.exponent_of(p);
        let poly = n4_order_poly_cached([e[0], e[1], e[2], e[3]], kp);
        total *= poly.eval_natural(p)?;
    }
    Ok(total)
}

/// The rank-4 theorem evaluated directly on composite moduli, without the
/// multiplicative reduction: the sum of phi(x3)phi(y3)phi(z3)phi(t3)F(u,v)
/// over all twenty-variable tuples. Exponentially slower; kept as the
/// verification route for the reduction.
pub fn total_count_4_direct(
    m: &Natural,
    n: &Natural,
    r: &Natural,
    s: &Natural,
) -> Result<Natural> {
    let left = goursat_half_direct(m, n, DirectOrderPart::Projection)?;
    let right = goursat_half_direct(r, s, DirectOrderPart::Kernel)?;
    join_halves(&collapse_direct(left), &collapse_direct(right))
}

/// Direct-evaluation variant of the order-restricted rank-4 count.
pub fn count_order_4_direct(
    m: &Natural,
    n: &Natural,
    r: &Natural,
    s: &Natural,
    k: &Natural,
) -> Result<Natural> {
    let order = &(&(m * n) * r) * s;
    if k.is_zero() || !(&order % k).is_zero() {
        return Ok(Natural::zero());
    }
    let left = goursat_half_direct(m, n, DirectOrderPart::Projection)?;
    let right = goursat_half_direct(r, s, DirectOrderPart::Kernel)?;
    let mut acc = Natural::zero();
    for ((u, v, kl), lw) in &left {
        if !(k % kl).is_zero() {
            continue;
        }
        let kr = k / kl;
        if let Some(rw) = right.get(&(u.clone(), v.clone(), kr)) {
            acc += &(lw * rw) * aut_count(u, v)?;
        }
    }
    Ok(acc)
}

type DirectHalf = BTreeMap<(Natural, Natural, Natural), Natural>;

/// Which order the half feeds into the joint constraint |A||D| = k:
/// the (m,n) half enters through the projection order x1 x3 x4, the (r,s)
/// half through the kernel order t1 t3 t4 of its second-level tuple.
#[derive(Clone, Copy)]
enum DirectOrderPart {
    Projection,
    Kernel,
}

/// One half of the direct rank-4 sum over a pair of composite moduli:
/// tuples (x1..x5, y1..y5) with x1x2x3 = m, x3x4x5 = n,
/// y1y2y3 = gcd(x1,x4), y3y4y5 = x3 lcm(x1,x4), keyed by
/// (u, v, order part) = (gcd(y2,y5), y3 lcm(y2,y5), selected order),
/// each key accumulating phi(x3) phi(y3).
fn goursat_half_direct(m: &Natural, n: &Natural, part: DirectOrderPart) -> Result<DirectHalf> {
    let mut map: DirectHalf = BTreeMap::new();
    for x1 in factorize(m)?.divisors() {
        for x3 in factorize(&(m / &x1))?.divisors() {
            if !(n % &x3).is_zero() {
                continue;
            }
            let phi_x3 = arith::euler_phi(&x3)?;
            for x4 in factorize(&(n / &x3))?.divisors() {
                let g1 = x1.gcd(&x4);
                let top = &x3 * x1.lcm(&x4);
                let proj_order = &(&x1 * &x3) * &x4;
                for y1 in factorize(&g1)?.divisors() {
                    for y3 in factorize(&(&g1 / &y1))?.divisors() {
                        let y2 = &g1 / (&y1 * &y3);
                        let phi_y3 = arith::euler_phi(&y3)?;
                        debug_assert!((&top % &y3).is_zero());
                        for y4 in factorize(&(&top / &y3))?.divisors() {
                            let y5 = &top / (&y3 * &y4);
                            let u = y2.gcd(&y5);
                            let v = &y3 * y2.lcm(&y5);
                            let korder = match part {
                                DirectOrderPart::Projection => proj_order.clone(),
                                DirectOrderPart::Kernel => &(&y1 * &y3) * &y4,
                            };
                            let w = &phi_x3 * &phi_y3;
                            map.entry((u, v, korder))
                                .and_modify(|acc| *acc += &w)
                                .or_insert(w);
                        }
                    }
                }
            }
        }
    }
    Ok(map)
}

fn collapse_direct(half: DirectHalf) -> BTreeMap<(Natural, Natural), Natural> {
    let mut out: BTreeMap<(Natural, Natural), Natural> = BTreeMap::new();
    for ((u, v, _), w) in half {
        out.entry((u, v)).and_modify(|acc| *acc += &w).or_insert(w);
    }
    out
}

fn join_halves(
    left: &BTreeMap<(Natural, Natural), Natural>,
    right: &BTreeMap<(Natural, Natural), Natural>,
) -> Result<Natural> {
    let mut acc = Natural::zero();
    for ((u, v), lw) in left {
        if let Some(rw) = right.get(&(u.clone(), v.clone())) {
            acc += &(lw * rw) * aut_count(u, v)?;
        }
    }
    Ok(acc)
}

/// Number of automorphisms of Z_m x Z_n, multiplicative over primes with
/// the prime-power polynomial evaluated at each prime.
pub fn aut_count(m: &Natural, n: &Natural) -> Result<Natural> {
    let view = prime_view(&[m, n])?;
    let mut total = Natural::one();
    for (p, e) in view.primes.iter().zip(&view.exps) {
        total *= pgroup::aut_count_poly(e[0], e[1]).eval_natural(p)?;
    }
    Ok(total)
}

/// Total number of subgroups for any rank, through the primary
/// decomposition: the product over primes of the type-sum polynomial
/// evaluated at the prime.
pub fn total_count_general(g: &GroupSpec) -> Natural {
    let mut total = Natural::one();
    for (p, lambda) in g.primary_types() {
        total *= pgroup::total_subgroups_poly(&lambda)
            .eval_natural(&p)
            .expect("subgroup counts are non-negative");
    }
    total
}

/// Sum of the exponents of all subgroups of Z_m x Z_n: sigma(m) sigma(n).
pub fn exponent_sum_2(m: &Natural, n: &Natural) -> Result<Natural> {
    Ok(arith::divisor_family(1, m)? * arith::divisor_family(1, n)?)
}

/// Census of subgroups by isomorphism type for any rank, through the
/// per-prime type counts: the number of subgroups of type T is the product
/// over primes of s_{T_p}(lambda_p) evaluated at p.
pub fn isotype_census(g: &GroupSpec) -> BTreeMap<IsoType, Natural> {
    let types = g.primary_types();
    // Per prime: all subtypes with their counts.
    let per_prime: Vec<(Natural, Vec<(Partition, Natural)>)> = types
        .iter()
        .map(|(p, lambda)| {
            let subs = lambda
                .subpartitions()
                .into_iter()
                .map(|mu| {
                    let count = pgroup::subgroups_of_type(lambda, &mu)
                        .eval_natural(p)
                        .expect("type counts are non-negative");
                    (mu, count)
                })
                .collect();
            (p.clone(), subs)
        })
        .collect();

    let mut out: BTreeMap<IsoType, Natural> = BTreeMap::new();
    let mut choice: Vec<usize> = vec![0; per_prime.len()];
    loop {
        let mut count = Natural::one();
        let mut parts: Vec<(Natural, Vec<u32>)> = Vec::new();
        for (i, (p, subs)) in per_prime.iter().enumerate() {
            let (mu, c) = &subs[choice[i]];
            count *= c;
            parts.push((p.clone(), mu.parts().to_vec()));
        }
        if !count.is_zero() {
            let iso = IsoType::from_prime_partitions(parts);
            out.entry(iso)
                .and_modify(|acc| *acc += &count)
                .or_insert(count);
        }
        // advance the mixed-radix choice vector
        let mut i = 0;
        loop {
            if i == per_prime.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < per_prime[i].1.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(x: u64) -> Natural {
        Natural::from(x)
    }

    fn spec(moduli: &[u64]) -> GroupSpec {
        GroupSpec::from_u64s(moduli).unwrap()
    }

    #[test]
    fn cyclic_counts() {
        assert_eq!(cyclic_count(&spec(&[2, 2])), nat(4));
        assert_eq!(cyclic_count(&spec(&[4, 6])), nat(12));
        assert_eq!(cyclic_count(&spec(&[1, 1, 1])), nat(1));
        // c(p^a, p^b) = 2(1 + p + ... + p^{a-1}) + (b-a+1) p^a
        for (p, a, b) in [(2u64, 1u32, 1u32), (2, 1, 3), (3, 2, 2), (5, 1, 2), (2, 3, 3)] {
            let expected: u64 =
                2 * (0..a).map(|i| p.pow(i)).sum::<u64>() + (b - a + 1) as u64 * p.pow(a);
            assert_eq!(
                cyclic_count(&spec(&[p.pow(a), p.pow(b)])),
                nat(expected),
                "c({p}^{a},{p}^{b})"
            );
        }
    }

    #[test]
    fn cyclic_count_of_order_values() {
        assert_eq!(cyclic_count_of_order(&spec(&[2, 2]), &nat(2)), nat(3));
        assert_eq!(cyclic_count_of_order(&spec(&[2, 2]), &nat(1)), nat(1));
        assert_eq!(cyclic_count_of_order(&spec(&[4, 6]), &nat(4)), nat(2));
        // delta must divide the lcm
        assert_eq!(cyclic_count_of_order(&spec(&[4, 6]), &nat(8)), nat(0));
        assert_eq!(cyclic_count_of_order(&spec(&[4, 6]), &nat(0)), nat(0));
    }

    #[test]
    fn cyclic_order_counts_sum_to_total() {
        for moduli in [vec![4u64, 6], vec![12, 18], vec![2, 2, 4], vec![8, 3]] {
            let g = spec(&moduli);
            let lcm = moduli.iter().fold(1u64, |a, &b| num_integer::lcm(a, b));
            let mut sum = Natural::zero();
            for d in crate::arith::small::divisors_u64(lcm) {
                sum += cyclic_count_of_order(&g, &nat(d));
            }
            assert_eq!(sum, cyclic_count(&g), "at {moduli:?}");
        }
    }

    #[test]
    fn second_cyclic_order_identity_agrees() {
        // c_delta = (1/phi(delta)) sum over divisor tuples with lcm = delta
        // of the phi product.
        for moduli in [vec![4u64, 6], vec![2, 2, 4], vec![12, 18]] {
            let g = spec(&moduli);
            let lcm = moduli.iter().fold(1u64, |a, &b| num_integer::lcm(a, b));
            for delta in crate::arith::small::divisors_u64(lcm) {
                let mut tuples = vec![vec![]];
                for &m in &moduli {
                    let divs = crate::arith::small::divisors_u64(m);
                    tuples = tuples
                        .into_iter()
                        .flat_map(|t: Vec<u64>| {
                            divs.iter().map(move |&d| {
                                let mut t2 = t.clone();
                                t2.push(d);
                                t2
                            })
                        })
                        .collect();
                }
                let mut sum = 0u64;
                for t in &tuples {
                    let l = t.iter().fold(1u64, |a, &b| num_integer::lcm(a, b));
                    if l == delta {
                        let prod: u64 = t
                            .iter()
                            .map(|&d| {
                                use num_traits::ToPrimitive;
                                arith::euler_phi(&nat(d)).unwrap().to_u64().unwrap()
                            })
                            .product();
                        sum += prod;
                    }
                }
                use num_traits::ToPrimitive;
                let phi = arith::euler_phi(&nat(delta)).unwrap().to_u64().unwrap();
                assert_eq!(sum % phi, 0);
                assert_eq!(
                    cyclic_count_of_order(&g, &nat(delta)),
                    nat(sum / phi),
                    "delta={delta} in {moduli:?}"
                );
            }
        }
    }

    #[test]
    fn cyclic_power_matches_general() {
        assert_eq!(cyclic_count_power(2, &nat(6)).unwrap(), nat(20));
        assert_eq!(cyclic_count_power(2, &nat(2)).unwrap(), nat(4));
        assert_eq!(cyclic_count_power(3, &nat(1)).unwrap(), nat(1));
        assert!(cyclic_count_power(0, &nat(5)).is_err());
        for k in 1..=4u32 {
            for n in [1u64, 2, 6, 12, 30] {
                let g = spec(&vec![n; k as usize]);
                assert_eq!(
                    cyclic_count_power(k, &nat(n)).unwrap(),
                    cyclic_count(&g),
                    "c_{k}({n})"
                );
            }
        }
    }

    #[test]
    fn sublattice_counts() {
        assert_eq!(sublattice_count(2, &nat(6)).unwrap(), nat(12));
        assert_eq!(sublattice_count(3, &nat(2)).unwrap(), nat(7));
        assert_eq!(sublattice_count(3, &nat(1)).unwrap(), nat(1));
        // f_1 = 1, f_2 = sigma
        for n in 1..=60u64 {
            assert_eq!(sublattice_count(1, &nat(n)).unwrap(), nat(1));
            assert_eq!(
                sublattice_count(2, &nat(n)).unwrap(),
                arith::divisor_family(1, &nat(n)).unwrap()
            );
        }
        // f_k(n) = sum_{d|n} f_{k-1}(d) (n/d)^{k-1}
        for k in 2..=4u32 {
            for n in [12u64, 36, 100] {
                let mut conv = Natural::zero();
                for d in crate::arith::small::divisors_u64(n) {
                    conv += sublattice_count(k - 1, &nat(d)).unwrap() * nat(n / d).pow(k - 1);
                }
                assert_eq!(sublattice_count(k, &nat(n)).unwrap(), conv, "f_{k}({n})");
            }
        }
    }

    #[test]
    fn total_counts_2() {
        assert_eq!(total_count_2(&nat(2), &nat(2)).unwrap(), nat(5));
        assert_eq!(total_count_2(&nat(4), &nat(6)).unwrap(), nat(16));
        assert_eq!(total_count_2(&nat(1), &nat(12)).unwrap(), nat(6));
        assert_eq!(total_count_2(&nat(12), &nat(18)).unwrap(), nat(80));
        assert!(total_count_2(&nat(0), &nat(2)).is_err());
    }

    #[test]
    fn both_total_identities_agree() {
        for m in 1..=40u64 {
            for n in 1..=40u64 {
                assert_eq!(
                    total_count_2(&nat(m), &nat(n)).unwrap(),
                    total_count_2_divisor_form(&nat(m), &nat(n)).unwrap(),
                    "s({m},{n})"
                );
            }
        }
    }

    #[test]
    fn order_counts_2() {
        assert_eq!(count_order_2(&nat(2), &nat(2), &nat(2)).unwrap(), nat(3));
        assert_eq!(count_order_2(&nat(4), &nat(6), &nat(2)).unwrap(), nat(3));
        assert_eq!(count_order_2(&nat(7), &nat(11), &nat(1)).unwrap(), nat(1));
        assert_eq!(count_order_2(&nat(4), &nat(6), &nat(5)).unwrap(), nat(0));
        // both identities agree and the order counts partition the total
        for (m, n) in [(4u64, 6u64), (12, 18), (8, 8), (9, 15)] {
            let mut sum = Natural::zero();
            for delta in crate::arith::small::divisors_u64(m * n) {
                let by_closed = count_order_2(&nat(m), &nat(n), &nat(delta)).unwrap();
                let by_direct = count_order_2_direct(&nat(m), &nat(n), &nat(delta)).unwrap();
                assert_eq!(by_closed, by_direct, "s_delta({m},{n}) at {delta}");
                sum += by_closed;
            }
            assert_eq!(sum, total_count_2(&nat(m), &nat(n)).unwrap());
        }
    }

    #[test]
    fn solution_count_matches_enumeration() {
        for a in 1..=20u64 {
            for b in 1..=20u64 {
                for c in 1..=20u64 {
                    let mut brute = 0u64;
                    for x in crate::arith::small::divisors_u64(a) {
                        for z in crate::arith::small::divisors_u64(b) {
                            if x * z == c {
                                brute += 1;
                            }
                        }
                    }
                    assert_eq!(
                        solution_count(&nat(a), &nat(b), &nat(c)).unwrap(),
                        nat(brute),
                        "N({a},{b},{c})"
                    );
                }
            }
        }
    }

    #[test]
    fn isotype_counts_2() {
        assert_eq!(
            count_isotype_2(&nat(2), &nat(2), &nat(1), &nat(2)).unwrap(),
            nat(3)
        );
        assert_eq!(
            count_isotype_2(&nat(2), &nat(2), &nat(2), &nat(2)).unwrap(),
            nat(1)
        );
        assert_eq!(
            count_isotype_2(&nat(2), &nat(2), &nat(2), &nat(4)).unwrap(),
            nat(0)
        );
        // isotype counts partition the total
        for (m, n) in [(4u64, 6u64), (12, 18), (8, 4)] {
            let mut sum = Natural::zero();
            for a in crate::arith::small::divisors_u64(m * n) {
                for b in crate::arith::small::divisors_u64(m * n) {
                    if b % a == 0 {
                        sum += count_isotype_2(&nat(m), &nat(n), &nat(a), &nat(b)).unwrap();
                    }
                }
            }
            assert_eq!(sum, total_count_2(&nat(m), &nat(n)).unwrap(), "({m},{n})");
        }
        // cyclic subgroups are exactly the A = 1 column
        for (m, n) in [(4u64, 6u64), (12, 18)] {
            let mut sum = Natural::zero();
            for b in crate::arith::small::divisors_u64(m * n) {
                sum += count_isotype_2(&nat(m), &nat(n), &nat(1), &nat(b)).unwrap();
            }
            assert_eq!(sum, cyclic_count(&spec(&[m, n])));
        }
    }

    #[test]
    fn sigma_t_values() {
        assert_eq!(sigma_t_2(0, &nat(4), &nat(6)).unwrap(), nat(16));
        assert_eq!(sigma_t_2(1, &nat(2), &nat(2)).unwrap(), nat(11));
        assert_eq!(sigma_t_2(1, &nat(1), &nat(6)).unwrap(), nat(12));
        for (m, n) in [(4u64, 6u64), (12, 18), (8, 8)] {
            for t in 0..=2u32 {
                assert_eq!(
                    sigma_t_2(t, &nat(m), &nat(n)).unwrap(),
                    sigma_t_2_lcm_form(t, &nat(m), &nat(n)).unwrap(),
                    "sigma_{t}({m},{n})"
                );
            }
        }
    }

    #[test]
    fn total_counts_3() {
        assert_eq!(total_count_3(&nat(2), &nat(2), &nat(2)).unwrap(), nat(16));
        assert_eq!(total_count_3(&nat(1), &nat(4), &nat(6)).unwrap(), nat(16));
        assert_eq!(total_count_3(&nat(2), &nat(2), &nat(4)).unwrap(), nat(27));
        // reduces to the rank-2 count when any modulus is 1
        for (m, n) in [(4u64, 6u64), (12, 18), (9, 15)] {
            let expect = total_count_2(&nat(m), &nat(n)).unwrap();
            assert_eq!(total_count_3(&nat(1), &nat(m), &nat(n)).unwrap(), expect);
            assert_eq!(total_count_3(&nat(m), &nat(1), &nat(n)).unwrap(), expect);
            assert_eq!(total_count_3(&nat(m), &nat(n), &nat(1)).unwrap(), expect);
        }
    }

    #[test]
    fn order_counts_3() {
        assert_eq!(count_order_3(&nat(2), &nat(2), &nat(2), &nat(2)).unwrap(), nat(7));
        assert_eq!(count_order_3(&nat(2), &nat(2), &nat(2), &nat(8)).unwrap(), nat(1));
        assert_eq!(count_order_3(&nat(2), &nat(2), &nat(2), &nat(4)).unwrap(), nat(7));
        assert_eq!(count_order_3(&nat(2), &nat(2), &nat(2), &nat(3)).unwrap(), nat(0));
        for (m, n, r) in [(2u64, 2u64, 4u64), (4, 6, 1), (2, 6, 6)] {
            let mut sum = Natural::zero();
            for delta in crate::arith::small::divisors_u64(m * n * r) {
                sum += count_order_3(&nat(m), &nat(n), &nat(r), &nat(delta)).unwrap();
            }
            assert_eq!(sum, total_count_3(&nat(m), &nat(n), &nat(r)).unwrap());
        }
    }

    #[test]
    fn total_counts_4() {
        assert_eq!(total_count_4(&nat(2), &nat(2), &nat(2), &nat(2)).unwrap(), nat(67));
        assert_eq!(total_count_4(&nat(3), &nat(3), &nat(3), &nat(3)).unwrap(), nat(212));
        assert_eq!(
            total_count_4(&nat(30), &nat(30), &nat(30), &nat(30)).unwrap(),
            nat(15_908_480)
        );
    }

    #[test]
    fn order_counts_4() {
        assert_eq!(
            count_order_4(&nat(2), &nat(2), &nat(2), &nat(2), &nat(2)).unwrap(),
            nat(15)
        );
        assert_eq!(
            count_order_4(&nat(2), &nat(2), &nat(2), &nat(2), &nat(1)).unwrap(),
            nat(1)
        );
        assert_eq!(
            count_order_4(&nat(2), &nat(2), &nat(2), &nat(2), &nat(4)).unwrap(),
            nat(35)
        );
        assert_eq!(
            count_order_4(&nat(2), &nat(2), &nat(2), &nat(2), &nat(3)).unwrap(),
            nat(0)
        );
        for (m, n, r, s) in [(2u64, 2, 2, 2), (2, 4, 3, 6), (2, 2, 2, 4)] {
            let mut sum = Natural::zero();
            for k in crate::arith::small::divisors_u64(m * n * r * s) {
                sum += count_order_4(&nat(m), &nat(n), &nat(r), &nat(s), &nat(k)).unwrap();
            }
            assert_eq!(
                sum,
                total_count_4(&nat(m), &nat(n), &nat(r), &nat(s)).unwrap(),
                "({m},{n},{r},{s})"
            );
        }
    }

    #[test]
    fn direct_rank4_route_agrees() {
        for (m, n, r, s) in [
            (1u64, 1, 1, 1),
            (2, 2, 2, 2),
            (2, 4, 3, 6),
            (6, 2, 2, 3),
            (4, 4, 2, 2),
            (5, 2, 10, 1),
        ] {
            assert_eq!(
                total_count_4_direct(&nat(m), &nat(n), &nat(r), &nat(s)).unwrap(),
                total_count_4(&nat(m), &nat(n), &nat(r), &nat(s)).unwrap(),
                "direct N({m},{n},{r},{s})"
            );
            for k in crate::arith::small::divisors_u64(m * n * r * s) {
                assert_eq!(
                    count_order_4_direct(&nat(m), &nat(n), &nat(r), &nat(s), &nat(k)).unwrap(),
                    count_order_4(&nat(m), &nat(n), &nat(r), &nat(s), &nat(k)).unwrap(),
                    "direct N({m},{n},{r},{s};{k})"
                );
            }
        }
    }

    #[test]
    fn aut_counts() {
        assert_eq!(aut_count(&nat(2), &nat(2)).unwrap(), nat(6));
        assert_eq!(aut_count(&nat(1), &nat(6)).unwrap(), nat(2));
        assert_eq!(aut_count(&nat(2), &nat(4)).unwrap(), nat(8));
        assert_eq!(aut_count(&nat(1), &nat(1)).unwrap(), nat(1));
    }

    #[test]
    fn general_route_agrees_across_arities() {
        assert_eq!(total_count_general(&spec(&[4, 6])), nat(16));
        assert_eq!(total_count_general(&spec(&[2, 2, 2, 2, 2])), nat(374));
        assert_eq!(total_count_general(&spec(&[12])), nat(6));
        for (m, n) in [(4u64, 6u64), (12, 18), (9, 27)] {
            assert_eq!(
                total_count_general(&spec(&[m, n])),
                total_count_2(&nat(m), &nat(n)).unwrap()
            );
        }
        for (m, n, r) in [(2u64, 2, 4), (4, 6, 10), (3, 9, 3)] {
            assert_eq!(
                total_count_general(&spec(&[m, n, r])),
                total_count_3(&nat(m), &nat(n), &nat(r)).unwrap()
            );
        }
        for (m, n, r, s) in [(2u64, 2, 2, 2), (2, 4, 3, 6)] {
            assert_eq!(
                total_count_general(&spec(&[m, n, r, s])),
                total_count_4(&nat(m), &nat(n), &nat(r), &nat(s)).unwrap()
            );
        }
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(exponent_sum_2(&nat(2), &nat(2)).unwrap(), nat(9));
        assert_eq!(exponent_sum_2(&nat(1), &nat(6)).unwrap(), nat(12));
        assert_eq!(exponent_sum_2(&nat(4), &nat(6)).unwrap(), nat(84));
        // enumeration-based cross-check
        for (m, n) in [(2u64, 2u64), (4, 6), (12, 18)] {
            let by_keys: u64 = crate::enumerate::list_subgroups_2(&nat(m), &nat(n))
                .unwrap()
                .map(|k| k.exponent())
                .sum();
            assert_eq!(exponent_sum_2(&nat(m), &nat(n)).unwrap(), nat(by_keys));
        }
    }

    #[test]
    fn census_partitions_total() {
        for moduli in [vec![4u64, 6], vec![2, 2, 4], vec![2, 2, 2, 2], vec![12, 18]] {
            let g = spec(&moduli);
            let census = isotype_census(&g);
            let total: Natural = census.values().sum();
            assert_eq!(total, total_count_general(&g), "census total at {moduli:?}");
            // every key is a valid chain whose order divides the group order
            for (iso, _) in &census {
                let o = iso.order();
                assert!((g.order() % o).is_zero());
            }
            // the rank-2 isotype formula agrees with the census
            if moduli.len() == 2 {
                for (iso, count) in &census {
                    let fs = iso.factors();
                    let (a, b) = match fs.len() {
                        0 => (nat(1), nat(1)),
                        1 => (nat(1), fs[0].clone()),
                        _ => (fs[0].clone(), fs[1].clone()),
                    };
                    assert_eq!(
                        count_isotype_2(&nat(moduli[0]), &nat(moduli[1]), &a, &b).unwrap(),
                        *count,
                        "isotype {iso}"
                    );
                }
            }
        }
    }

    #[test]
    fn joint_multiplicativity() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut checked = 0;
        while checked < 40 {
            let k = (next() % 3 + 2) as usize;
            let g1: Vec<u64> = (0..k).map(|_| next() % 12 + 1).collect();
            let g2: Vec<u64> = (0..k).map(|_| next() % 12 + 1).collect();
            let o1: u64 = g1.iter().product();
            let o2: u64 = g2.iter().product();
            if num_integer::gcd(o1, o2) != 1 || o1 * o2 > 10_000 {
                continue;
            }
            checked += 1;
            let prod: Vec<u64> = g1.iter().zip(&g2).map(|(a, b)| a * b).collect();
            let (sp, s1, s2) = (spec(&prod), spec(&g1), spec(&g2));
            assert_eq!(
                cyclic_count(&sp),
                cyclic_count(&s1) * cyclic_count(&s2),
                "cyclic at {g1:?} x {g2:?}"
            );
            assert_eq!(
                total_count_general(&sp),
                total_count_general(&s1) * total_count_general(&s2),
                "total at {g1:?} x {g2:?}"
            );
            if k == 2 {
                for t in 0..=2 {
                    assert_eq!(
                        sigma_t_2(t, &nat(prod[0]), &nat(prod[1])).unwrap(),
                        sigma_t_2(t, &nat(g1[0]), &nat(g1[1])).unwrap()
                            * sigma_t_2(t, &nat(g2[0]), &nat(g2[1])).unwrap(),
                        "sigma_{t} at {g1:?} x {g2:?}"
                    );
                }
                assert_eq!(
                    aut_count(&nat(prod[0]), &nat(prod[1])).unwrap(),
                    aut_count(&nat(g1[0]), &nat(g1[1])).unwrap()
                        * aut_count(&nat(g2[0]), &nat(g2[1])).unwrap()
                );
            }
        }
    }
}
