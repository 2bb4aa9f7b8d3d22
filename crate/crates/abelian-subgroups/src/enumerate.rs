//! Explicit subgroup representations.
//!
//! Rank 2: every subgroup of Z_m x Z_n is K_{a,b,c,d,l} =
//! {(i m/a, i l n/c + j n/d)} for exactly one 5-tuple with a|m, b|a, c|n,
//! d|c, a/b = c/d and l <= a/b coprime to a/b. The key determines order,
//! exponent, cyclicity, isomorphism type and quotient type by closed forms.
//!
//! Rank 3: every subgroup of Z_m x Z_n x Z_r arises once from a 6-tuple
//! (a,b,c,t,w,z) via the generator triple (a,0,0), (s,b,0), (u,v,c).
//!
//! Enumeration works with machine-word moduli; the counting functions in
//! [`crate::counting`] stay arbitrary-precision.

use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::arith::{small, Natural};
use crate::error::{Error, Result};

/// Largest element-set size `elements()` will materialize.
const MATERIALIZE_BUDGET: u128 = 1 << 22;

/// Invariant-factor sequence d_1 | d_2 | ... | d_r with every d_i >= 2;
/// empty for the trivial group. The canonical isomorphism label of a finite
/// abelian group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IsoType {
    factors: Vec<Natural>,
}

impl IsoType {
    /// Validates the divisibility chain and the >= 2 constraint.
    pub fn new(factors: Vec<Natural>) -> Result<Self> {
        for w in factors.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(Error::InvalidArgument(format!(
                    "invariant factors must form a divisibility chain: {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        if factors.iter().any(|f| f < &Natural::from(2u32)) {
            return Err(Error::InvalidArgument(
                "invariant factors must be >= 2".into(),
            ));
        }
        Ok(IsoType { factors })
    }

    pub fn trivial() -> Self {
        IsoType::default()
    }

    /// The isomorphism type of Z_{m1} x ... x Z_{mk}: assembles invariant
    /// factors from the per-prime exponent partitions.
    pub fn of_moduli(moduli: &[u64]) -> Self {
        let mut per_prime: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
        for &m in moduli {
            for (p, e) in small::factor_u64(m) {
                per_prime.entry(p).or_default().push(e);
            }
        }
        for exps in per_prime.values_mut() {
            exps.sort_unstable_by(|a, b| b.cmp(a));
        }
        IsoType::from_prime_partitions(
            per_prime
                .into_iter()
                .map(|(p, exps)| (Natural::from(p), exps)),
        )
    }

    /// Assembles invariant factors from (prime, non-increasing exponent
    /// list) pairs: the j-th largest factor is prod_p p^{e_{p,j}}.
    pub fn from_prime_partitions<I>(parts: I) -> Self
    where
        I: IntoIterator<Item = (Natural, Vec<u32>)>,
    {
        let parts: Vec<(Natural, Vec<u32>)> = parts.into_iter().collect();
        let rank = parts.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors = Vec::with_capacity(rank);
        for j in 0..rank {
            let mut d = Natural::from(1u32);
            for (p, exps) in &parts {
                if let Some(&e) = exps.get(j) {
                    if e > 0 {
                        d *= p.pow(e);
                    }
                }
            }
            factors.push(d);
        }
        factors.reverse();
        factors.retain(|f| f >= &Natural::from(2u32));
        IsoType { factors }
    }

    /// Type of Z_u x Z_v given u | v, dropping unit factors.
    fn of_pair(u: u64, v: u64) -> Self {
        debug_assert!(u == 0 || v % u == 0);
        let factors = [u, v]
            .into_iter()
            .filter(|&x| x >= 2)
            .map(Natural::from)
            .collect();
        IsoType { factors }
    }

    pub fn factors(&self) -> &[Natural] {
        &self.factors
    }

    /// Minimal number of generators; 0 for the trivial group.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> Natural {
        self.factors.iter().product()
    }

    /// Least e with e.x = 0 for all x: the largest invariant factor.
    pub fn exponent(&self) -> Natural {
        self.factors
            .last()
            .cloned()
            .unwrap_or_else(|| Natural::from(1u32))
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }
}

impl fmt::Display for IsoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z_1");
        }
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "Z_{d}")?;
        }
        Ok(())
    }
}

/// Classification of one subgroup: order, exponent, cyclicity, type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub order: u64,
    pub exponent: u64,
    pub is_cyclic: bool,
    pub isotype: IsoType,
}

/// The Goursat 5-tuple (a,b,c,d,l) identifying one subgroup of Z_m x Z_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subgroup2Key {
    m: u64,
    n: u64,
    a: u64,
    b: u64,
    c: u64,
    d: u64,
    l: u64,
}

impl Subgroup2Key {
    /// Validates membership in J_{m,n}.
    pub fn new(m: u64, n: u64, a: u64, b: u64, c: u64, d: u64, l: u64) -> Result<Self> {
        if [m, n, a, b, c, d, l].contains(&0) {
            return Err(Error::ZeroArgument);
        }
        let bad = |msg: String| Err(Error::InvalidKey(msg));
        if m % a != 0 || a % b != 0 {
            return bad(format!("need a|m and b|a, got a={a}, b={b}, m={m}"));
        }
        if n % c != 0 || c % d != 0 {
            return bad(format!("need c|n and d|c, got c={c}, d={d}, n={n}"));
        }
        if a / b != c / d {
            return bad(format!("need a/b = c/d, got {}/{}", a / b, c / d));
        }
        let e = a / b;
        if l > e || small::gcd(l, e) != 1 {
            return bad(format!("need l <= {e} coprime to it, got l={l}"));
        }
        Ok(Subgroup2Key { m, n, a, b, c, d, l })
    }

    pub fn ambient(&self) -> (u64, u64) {
        (self.m, self.n)
    }

    /// The tuple (a, b, c, d, l).
    pub fn tuple(&self) -> (u64, u64, u64, u64, u64) {
        (self.a, self.b, self.c, self.d, self.l)
    }

    /// |K| = a d.
    pub fn order(&self) -> u64 {
        self.a * self.d
    }

    /// exponent = lcm(a, c).
    pub fn exponent(&self) -> u64 {
        small::lcm(self.a, self.c)
    }

    /// Cyclic iff gcd(b, d) = 1.
    pub fn is_cyclic(&self) -> bool {
        small::gcd(self.b, self.d) == 1
    }

    /// K is isomorphic to Z_gcd(b,d) x Z_lcm(a,c).
    pub fn isotype(&self) -> IsoType {
        IsoType::of_pair(small::gcd(self.b, self.d), small::lcm(self.a, self.c))
    }

    /// Order, exponent, cyclicity and type in one bundle.
    pub fn classify(&self) -> Classification {
        Classification {
            order: self.order(),
            exponent: self.exponent(),
            is_cyclic: self.is_cyclic(),
            isotype: self.isotype(),
        }
    }

    /// (Z_m x Z_n)/K is isomorphic to Z_gcd(m/a,n/c) x Z_lcm(m/b,n/d).
    pub fn quotient_isotype(&self) -> IsoType {
        IsoType::of_pair(
            small::gcd(self.m / self.a, self.n / self.c),
            small::lcm(self.m / self.b, self.n / self.d),
        )
    }

    /// The element set {(i m/a, i l n/c + j n/d) : i < a, j < d}, sorted.
    pub fn elements(&self) -> Result<Vec<(u64, u64)>> {
        let size = self.a as u128 * self.d as u128;
        if size > MATERIALIZE_BUDGET {
            return Err(Error::BudgetExceeded(format!(
                "subgroup of order {size} exceeds the materialization budget"
            )));
        }
        let (xstep, ystep1, ystep2) = (self.m / self.a, self.n / self.c, self.n / self.d);
        let mut out = Vec::with_capacity(size as usize);
        for i in 0..self.a {
            let x = i * xstep;
            let base = (i as u128 * self.l as u128 * ystep1 as u128 % self.n as u128) as u64;
            for j in 0..self.d {
                let y = (base + j * ystep2) % self.n;
                out.push((x, y));
            }
        }
        out.sort_unstable();
        out.dedup();
        if out.len() as u128 != size {
            return Err(Error::Internal(format!(
                "K_{{{},{},{},{},{}}} produced {} distinct elements, expected {size}",
                self.a,
                self.b,
                self.c,
                self.d,
                self.l,
                out.len()
            )));
        }
        Ok(out)
    }
}

impl fmt::Display for Subgroup2Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.a, self.b, self.c, self.d, self.l)
    }
}

fn to_machine(v: &Natural, what: &str) -> Result<u64> {
    let x = v
        .to_u64()
        .ok_or_else(|| Error::BudgetExceeded(format!("{what} = {v} too large for enumeration")))?;
    if x == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(x)
}

/// Streams every subgroup key of Z_m x Z_n exactly once, lexicographically
/// by (a, b, c, d, l). The stream length is `total_count_2(m, n)`.
pub fn list_subgroups_2(m: &Natural, n: &Natural) -> Result<impl Iterator<Item = Subgroup2Key>> {
    let m = to_machine(m, "modulus")?;
    let n = to_machine(n, "modulus")?;
    let divs_n = small::divisors_u64(n);
    let it = small::divisors_u64(m).into_iter().flat_map(move |a| {
        let divs_n = divs_n.clone();
        small::divisors_u64(a).into_iter().flat_map(move |b| {
            let e = a / b;
            divs_n
                .clone()
                .into_iter()
                .filter(move |&c| c % e == 0)
                .flat_map(move |c| {
                    (1..=e)
                        .filter(move |&l| small::gcd(l, e) == 1)
                        .map(move |l| Subgroup2Key {
                            m,
                            n,
                            a,
                            b,
                            c,
                            d: c / e,
                            l,
                        })
                })
        })
    });
    Ok(it)
}

/// The 6-tuple (a,b,c,t,w,z) identifying one subgroup of Z_m x Z_n x Z_r,
/// with the derived generator data cached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subgroup3Key {
    m: u64,
    n: u64,
    r: u64,
    a: u64,
    b: u64,
    c: u64,
    t: u64,
    w: u64,
    z: u64,
    /// Generator offsets: the subgroup is <(a,0,0), (s,b,0), (u,v,c)>.
    s: u64,
    v: u64,
    u: u64,
}

impl Subgroup3Key {
    /// Rebuilds the derived data for a tuple and validates every range.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        m: u64,
        n: u64,
        r: u64,
        a: u64,
        b: u64,
        c: u64,
        t: u64,
        w: u64,
        z: u64,
    ) -> Result<Self> {
        if [m, n, r, a, b, c].contains(&0) {
            return Err(Error::ZeroArgument);
        }
        if m % a != 0 || n % b != 0 || r % c != 0 {
            return Err(Error::InvalidKey(format!(
                "need a|m, b|n, c|r; got ({a},{b},{c}) in ({m},{n},{r})"
            )));
        }
        let der = Derived3::compute(m, n, r, a, b, c)?;
        if t >= der.cap_a {
            return Err(Error::InvalidKey(format!(
                "t={t} out of range 0..{}",
                der.cap_a
            )));
        }
        let wcount = der.w_count(t)?;
        if w >= wcount {
            return Err(Error::InvalidKey(format!("w={w} out of range 0..{wcount}")));
        }
        if z >= der.cap_c {
            return Err(Error::InvalidKey(format!(
                "z={z} out of range 0..{}",
                der.cap_c
            )));
        }
        der.key(m, n, r, a, b, c, t, w, z)
    }

    pub fn ambient(&self) -> (u64, u64, u64) {
        (self.m, self.n, self.r)
    }

    /// The tuple (a, b, c, t, w, z).
    pub fn tuple(&self) -> (u64, u64, u64, u64, u64, u64) {
        (self.a, self.b, self.c, self.t, self.w, self.z)
    }

    /// Generator rows (a,0,0), (s,b,0), (u,v,c).
    pub fn generators(&self) -> [(u64, u64, u64); 3] {
        [
            (self.a, 0, 0),
            (self.s, self.b, 0),
            (self.u, self.v, self.c),
        ]
    }

    /// |U| = mnr/(abc).
    pub fn order(&self) -> u128 {
        (self.m / self.a) as u128 * (self.n / self.b) as u128 * (self.r / self.c) as u128
    }

    /// {(i a + j s + k u, j b + k v, k c)} over i < m/a, j < n/b, k < r/c,
    /// sorted.
    pub fn elements(&self) -> Result<Vec<(u64, u64, u64)>> {
        let size = self.order();
        if size > MATERIALIZE_BUDGET {
            return Err(Error::BudgetExceeded(format!(
                "subgroup of order {size} exceeds the materialization budget"
            )));
        }
        let mut out = Vec::with_capacity(size as usize);
        for i in 0..self.m / self.a {
            for j in 0..self.n / self.b {
                for k in 0..self.r / self.c {
                    let x = ((i as u128 * self.a as u128
                        + j as u128 * self.s as u128
                        + k as u128 * self.u as u128)
                        % self.m as u128) as u64;
                    let y = ((j as u128 * self.b as u128 + k as u128 * self.v as u128)
                        % self.n as u128) as u64;
                    let zc = (k * self.c) % self.r;
                    out.push((x, y, zc));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        if out.len() as u128 != size {
            return Err(Error::Internal(format!(
                "U_{{{},{},{},{},{},{}}} produced {} distinct elements, expected {size}",
                self.a,
                self.b,
                self.c,
                self.t,
                self.w,
                self.z,
                out.len()
            )));
        }
        Ok(out)
    }
}

impl fmt::Display for Subgroup3Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{},{},{})",
            self.a, self.b, self.c, self.t, self.w, self.z
        )
    }
}

/// Derived quantities of steps (ii)-(iii) for one divisor triple.
struct Derived3 {
    cap_a: u64,
    cap_b: u64,
    cap_c: u64,
    x: u64,
}

impl Derived3 {
    fn compute(_m: u64, n: u64, r: u64, a: u64, b: u64, c: u64) -> Result<Derived3> {
        let cap_a = small::gcd(a, n / b);
        let cap_b = small::gcd(b, r / c);
        let cap_c = small::gcd(a, r / c);
        let abc = cap_a as u128 * cap_b as u128 * cap_c as u128;
        let arc = a as u128 * (r / c) as u128;
        let g = gcd_u128(arc, abc);
        let x = abc / g;
        let x = u64::try_from(x).map_err(|_| {
            Error::BudgetExceeded(format!("step (iii) value X = {x} exceeds 64 bits"))
        })?;
        Ok(Derived3 {
            cap_a,
            cap_b,
            cap_c,
            x,
        })
    }

    /// Number of valid w for a given t: B gcd(t, X) / X. The divisibility
    /// X | B gcd(t, X) is asserted, not floored.
    fn w_count(&self, t: u64) -> Result<u64> {
        let gt = if t == 0 { self.x } else { small::gcd(t, self.x) };
        let num = self.cap_b as u128 * gt as u128;
        if num % self.x as u128 != 0 {
            return Err(Error::Internal(format!(
                "step (v) range B*gcd(t,X)/X = {num}/{} is not integral",
                self.x
            )));
        }
        Ok((num / self.x as u128) as u64)
    }

    #[allow(clippy::too_many_arguments)]
    fn key(
        &self,
        m: u64,
        n: u64,
        r: u64,
        a: u64,
        b: u64,
        c: u64,
        t: u64,
        w: u64,
        z: u64,
    ) -> Result<Subgroup3Key> {
        // (iv) s = a t / A
        debug_assert_eq!(a as u128 * t as u128 % self.cap_a as u128, 0);
        let s = (a as u128 * t as u128 / self.cap_a as u128) as u64;
        // (v) v = (b X / (B gcd(t,X))) w = (b/B)(X/gcd(t,X)) w
        let gt = if t == 0 { self.x } else { small::gcd(t, self.x) };
        let v128 = (b / self.cap_b) as u128 * (self.x / gt) as u128 * w as u128;
        let v = (v128 % n as u128) as u64;
        // (vi) solve (r/c) u == r v s/(b c)  (mod a)
        let num = (r / c) as u128 * v128 * s as u128;
        if num % b as u128 != 0 {
            return Err(Error::Internal(format!(
                "step (vi) right-hand side r v s/(b c) = {num}/{b} is not integral"
            )));
        }
        let beta = ((num / b as u128) % a as u128) as u64;
        let alpha = (r / c) % a;
        let u0 = solve_congruence(alpha, beta, a, self.cap_c)?;
        // (vii) u = u0 + a z / C
        let u = u0 + (a / self.cap_c) * z;
        Ok(Subgroup3Key {
            m,
            n,
            r,
            a,
            b,
            c,
            t,
            w,
            z,
            s,
            v,
            u,
        })
    }
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Least non-negative solution of alpha u == beta (mod modulus) via the
/// extended Euclid method; `expected_gcd` is the solution spacing the
/// construction predicts.
fn solve_congruence(alpha: u64, beta: u64, modulus: u64, expected_gcd: u64) -> Result<u64> {
    if modulus == 1 {
        return Ok(0);
    }
    let g = small::gcd(alpha, modulus);
    if g != expected_gcd {
        return Err(Error::Internal(format!(
            "step (vi) congruence has gcd {g}, construction predicts {expected_gcd}"
        )));
    }
    if beta % g != 0 {
        return Err(Error::Internal(format!(
            "step (vi) congruence {alpha} u == {beta} (mod {modulus}) has no solution"
        )));
    }
    let m2 = modulus / g;
    if m2 == 1 {
        return Ok(0);
    }
    let inv = mod_inverse(alpha / g % m2, m2).ok_or_else(|| {
        Error::Internal("step (vi) inverse does not exist after gcd reduction".into())
    })?;
    Ok(((beta / g) as u128 * inv as u128 % m2 as u128) as u64)
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Streams every subgroup key of Z_m x Z_n x Z_r exactly once, ordered by
/// (a, b, c, t, w, z) with divisors ascending. The stream length is
/// `total_count_3(m, n, r)`. Integrality violations in steps (v)/(vi) are
/// reported as items, never floored.
pub fn list_subgroups_3(
    m: &Natural,
    n: &Natural,
    r: &Natural,
) -> Result<impl Iterator<Item = Result<Subgroup3Key>>> {
    let m = to_machine(m, "modulus")?;
    let n = to_machine(n, "modulus")?;
    let r = to_machine(r, "modulus")?;
    let divs_n = small::divisors_u64(n);
    let divs_r = small::divisors_u64(r);
    let it = small::divisors_u64(m).into_iter().flat_map(move |a| {
        let divs_r = divs_r.clone();
        divs_n.clone().into_iter().flat_map(move |b| {
            divs_r.clone().into_iter().flat_map(move |c| {
                let block: Vec<Result<Subgroup3Key>> = match subgroup3_block(m, n, r, a, b, c) {
                    Ok(keys) => keys.into_iter().map(Ok).collect(),
                    Err(e) => vec![Err(e)],
                };
                block.into_iter()
            })
        })
    });
    Ok(it)
}

/// All keys for one divisor triple (a, b, c), ordered by (t, w, z).
fn subgroup3_block(m: u64, n: u64, r: u64, a: u64, b: u64, c: u64) -> Result<Vec<Subgroup3Key>> {
    let der = Derived3::compute(m, n, r, a, b, c)?;
    let mut out = Vec::new();
    for t in 0..der.cap_a {
        let wcount = der.w_count(t)?;
        for w in 0..wcount {
            for z in 0..der.cap_c {
                out.push(der.key(m, n, r, a, b, c, t, w, z)?);
            }
        }
    }
    Ok(out)
}

/// Renders one element per line: `(x,y)` for rank 2.
pub fn render_elements_2(elements: &[(u64, u64)]) -> String {
    let mut s = String::new();
    for (x, y) in elements {
        s.push_str(&format!("({x},{y})\n"));
    }
    s
}

/// Renders one element per line: `(x,y,z)` for rank 3.
pub fn render_elements_3(elements: &[(u64, u64, u64)]) -> String {
    let mut s = String::new();
    for (x, y, z) in elements {
        s.push_str(&format!("({x},{y},{z})\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(x: u64) -> Natural {
        Natural::from(x)
    }

    #[test]
    fn count_small_groups() {
        assert_eq!(list_subgroups_2(&nat(2), &nat(2)).unwrap().count(), 5);
        assert_eq!(list_subgroups_2(&nat(1), &nat(1)).unwrap().count(), 1);
        assert_eq!(list_subgroups_2(&nat(12), &nat(18)).unwrap().count(), 80);
        assert_eq!(list_subgroups_2(&nat(4), &nat(6)).unwrap().count(), 16);
    }

    #[test]
    fn keys_are_lexicographic_and_unique() {
        let keys: Vec<_> = list_subgroups_2(&nat(12), &nat(18)).unwrap().collect();
        let tuples: Vec<_> = keys.iter().map(|k| k.tuple()).collect();
        let mut sorted = tuples.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(tuples, sorted);
    }

    #[test]
    fn figure_subgroup_of_z12_z18() {
        let key = Subgroup2Key::new(12, 18, 6, 2, 18, 6, 1).unwrap();
        assert_eq!(key.order(), 36);
        assert_eq!(key.isotype().to_string(), "Z_2 x Z_18");
        let els = key.elements().unwrap();
        assert_eq!(els.len(), 36);
        // spot-check a few bullets of the lattice picture
        for e in [(0, 0), (0, 3), (2, 1), (4, 17), (10, 2), (6, 15)] {
            assert!(els.contains(&e), "missing {e:?}");
        }
        assert!(!els.contains(&(1, 0)));
        // quotient has order 216/36 = 6 and collapses to Z_6
        let q = key.quotient_isotype();
        assert_eq!(q.to_string(), "Z_6");
        assert_eq!(q.order(), nat(6));
    }

    #[test]
    fn trivial_and_full_keys() {
        let trivial = Subgroup2Key::new(2, 2, 1, 1, 1, 1, 1).unwrap();
        assert_eq!(trivial.elements().unwrap(), vec![(0, 0)]);
        assert_eq!(trivial.classify().isotype, IsoType::trivial());
        assert_eq!(trivial.quotient_isotype().to_string(), "Z_2 x Z_2");

        let full = Subgroup2Key::new(2, 2, 2, 2, 2, 2, 1).unwrap();
        assert_eq!(full.order(), 4);
        assert_eq!(full.quotient_isotype(), IsoType::trivial());

        let diag = Subgroup2Key::new(2, 2, 2, 1, 2, 1, 1).unwrap();
        assert_eq!(diag.elements().unwrap(), vec![(0, 0), (1, 1)]);
        assert!(diag.is_cyclic());
        assert_eq!(diag.classify().order, 2);
    }

    #[test]
    fn invalid_keys_rejected() {
        assert!(Subgroup2Key::new(12, 18, 5, 1, 1, 1, 1).is_err()); // a does not divide m
        assert!(Subgroup2Key::new(12, 18, 6, 2, 18, 3, 1).is_err()); // a/b != c/d
        assert!(Subgroup2Key::new(12, 18, 6, 2, 18, 6, 3).is_err()); // gcd(l, e) != 1
        assert!(Subgroup2Key::new(12, 18, 6, 2, 18, 6, 4).is_err()); // l > e
        assert!(Subgroup2Key::new(12, 18, 0, 1, 1, 1, 1).is_err()); // zero
    }

    #[test]
    fn rank3_counts() {
        let count = |m: u64, n: u64, r: u64| {
            list_subgroups_3(&nat(m), &nat(n), &nat(r))
                .unwrap()
                .map(|k| k.unwrap())
                .count()
        };
        assert_eq!(count(2, 2, 2), 16);
        assert_eq!(count(1, 4, 6), 16);
        assert_eq!(count(2, 2, 4), 27);
    }

    #[test]
    fn rank3_keys_unique_and_sized() {
        let mut seen = std::collections::HashSet::new();
        for key in list_subgroups_3(&nat(2), &nat(2), &nat(4)).unwrap() {
            let key = key.unwrap();
            let els = key.elements().unwrap();
            assert_eq!(els.len() as u128, key.order());
            assert!(seen.insert(els), "duplicate subgroup from {key}");
        }
        assert_eq!(seen.len(), 27);
    }

    #[test]
    fn rank3_trivial_and_full() {
        // a=m, b=n, c=r forces t=w=z=0 and the zero subgroup.
        let key = Subgroup3Key::new(2, 2, 4, 2, 2, 4, 0, 0, 0).unwrap();
        assert_eq!(key.elements().unwrap(), vec![(0, 0, 0)]);
        // a=b=c=1 gives the full group.
        let key = Subgroup3Key::new(2, 2, 4, 1, 1, 1, 0, 0, 0).unwrap();
        assert_eq!(key.order(), 16);
        assert_eq!(key.elements().unwrap().len(), 16);
    }

    #[test]
    fn isotype_assembly() {
        assert_eq!(IsoType::of_moduli(&[4, 6]).to_string(), "Z_2 x Z_12");
        assert_eq!(IsoType::of_moduli(&[1]).to_string(), "Z_1");
        assert_eq!(IsoType::of_moduli(&[2, 2]).to_string(), "Z_2 x Z_2");
        assert_eq!(IsoType::of_moduli(&[12, 18]).to_string(), "Z_6 x Z_36");
        let t = IsoType::of_moduli(&[4, 6]);
        assert_eq!(t.order(), nat(24));
        assert_eq!(t.exponent(), nat(12));
        assert!(!t.is_cyclic());
        assert!(IsoType::new(vec![nat(2), nat(3)]).is_err()); // 2 does not divide 3
        assert!(IsoType::new(vec![nat(1)]).is_err());
        assert!(IsoType::new(vec![nat(2), nat(4)]).is_ok());
    }

    #[test]
    fn render_formats() {
        assert_eq!(render_elements_2(&[(0, 0), (1, 2)]), "(0,0)\n(1,2)\n");
        assert_eq!(render_elements_3(&[(0, 1, 2)]), "(0,1,2)\n");
    }
}
