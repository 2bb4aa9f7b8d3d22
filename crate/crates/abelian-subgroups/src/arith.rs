//! Number-theoretic kernel: factorization, divisor iteration, the classical
//! multiplicative functions (Euler and Jordan totients, Dedekind psi, divisor
//! sums, gcd-sum, Moebius) and sieved batch evaluation.
//!
//! All public values are arbitrary precision. Machine-word sieves backing the
//! summation engines live in [`small`] and agree pointwise with the public
//! operations.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Arbitrary-precision non-negative integer; the value type of every count.
pub type Natural = BigUint;

/// Primes below this bound are used for trial division before switching to
/// Pollard rho.
const TRIAL_BOUND: u64 = 1_000_000;

/// Upper bound on the number of entries a single sieve call may allocate.
const SIEVE_BUDGET: u64 = 1 << 27;

static TRIAL_PRIMES: Lazy<Vec<u64>> = Lazy::new(|| small::primes_upto(TRIAL_BOUND));

/// The factorization n = prod p^e with primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(Natural, u32)>,
}

impl Factorization {
    /// (prime, exponent) pairs, primes strictly increasing, exponents >= 1.
    pub fn pairs(&self) -> &[(Natural, u32)] {
        &self.pairs
    }

    /// Reconstructs the factored integer.
    pub fn value(&self) -> Natural {
        let mut v = Natural::one();
        for (p, e) in &self.pairs {
            v *= p.pow(*e);
        }
        v
    }

    /// Exponent of `p` in the factorization (0 when `p` does not divide).
    pub fn exponent_of(&self, p: &Natural) -> u32 {
        self.pairs
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// All divisors, sorted ascending.
    pub fn divisors(&self) -> Vec<Natural> {
        let mut divs = vec![Natural::one()];
        for (p, e) in &self.pairs {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            let mut pk = Natural::one();
            for _ in 0..=*e {
                for d in &divs {
                    next.push(d * &pk);
                }
                pk *= p;
            }
            divs = next;
        }
        divs.sort();
        divs
    }

    /// All divisors paired with their Euler totient, sorted ascending by the
    /// divisor. Saves refactoring each divisor in the counting formulas.
    pub fn divisors_with_phi(&self) -> Vec<(Natural, Natural)> {
        let mut divs = vec![(Natural::one(), Natural::one())];
        for (p, e) in &self.pairs {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            for (d, ph) in &divs {
                next.push((d.clone(), ph.clone()));
                let mut pk = Natural::one();
                let mut phk = p - 1u32;
                for _ in 1..=*e {
                    pk *= p;
                    next.push((d * &pk, ph * &phk));
                    phk *= p;
                }
            }
            divs = next;
        }
        divs.sort();
        divs
    }

    /// Number of divisors.
    pub fn tau(&self) -> Natural {
        let mut t = Natural::one();
        for (_, e) in &self.pairs {
            t *= Natural::from(*e as u64 + 1);
        }
        t
    }
}

/// Factors `n >= 1` into prime powers; `factorize(1)` is the empty product.
///
/// Trial division by sieved primes up to 10^6, then deterministic
/// Miller-Rabin witnesses with Pollard-rho (Brent) splitting for whatever
/// remains.
pub fn factorize(n: &Natural) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let mut pairs: Vec<(Natural, u32)> = Vec::new();
    let mut rest = n.clone();
    for &p in TRIAL_PRIMES.iter() {
        if rest.is_one() {
            break;
        }
        let pb = Natural::from(p);
        if (&pb * &pb) > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            pairs.push((pb, e));
        }
    }
    if !rest.is_one() {
        // rest has no prime factor below 10^6; split recursively.
        let mut stack = vec![rest];
        let mut extra: Vec<Natural> = Vec::new();
        while let Some(m) = stack.pop() {
            if is_prime(&m) {
                extra.push(m);
            } else {
                let d = pollard_rho(&m);
                stack.push(&m / &d);
                stack.push(d);
            }
        }
        extra.sort();
        let mut i = 0;
        while i < extra.len() {
            let mut j = i;
            while j < extra.len() && extra[j] == extra[i] {
                j += 1;
            }
            pairs.push((extra[i].clone(), (j - i) as u32));
            i = j;
        }
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { pairs })
}

/// Miller-Rabin with the deterministic witness set for inputs below 3.3e24;
/// the same witnesses act as a strong probabilistic test beyond.
pub fn is_prime(n: &Natural) -> bool {
    if *n < Natural::from(2u32) {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let pb = Natural::from(p);
        if *n == pb {
            return true;
        }
        if (n % &pb).is_zero() {
            return false;
        }
    }
    let one = Natural::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = Natural::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Finds a nontrivial factor of an odd composite via Brent's cycle variant.
fn pollard_rho(n: &Natural) -> Natural {
    if n.is_even() {
        return Natural::from(2u32);
    }
    let one = Natural::one();
    let mut c = Natural::one();
    loop {
        let mut x = Natural::from(2u32);
        let mut y = Natural::from(2u32);
        let mut d = Natural::one();
        let f = |v: &Natural| (v * v + &c) % n;
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if !d.is_one() && d != *n {
            return d;
        }
        c += &one;
    }
}

/// Selector for [`totient_family`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Totient {
    /// Euler's function, the Jordan totient of order 1.
    Euler,
    /// Jordan totient of order k: n^k prod_{p|n} (1 - 1/p^k).
    Jordan(u32),
    /// Dedekind psi: n prod_{p|n} (1 + 1/p).
    Dedekind,
}

/// Evaluates phi, phi_k or psi exactly from the factorization of `n >= 1`.
pub fn totient_family(which: Totient, n: &Natural) -> Result<Natural> {
    let f = factorize(n)?;
    Ok(totient_of_factorization(which, &f)?)
}

fn totient_of_factorization(which: Totient, f: &Factorization) -> Result<Natural> {
    let mut v = Natural::one();
    for (p, e) in f.pairs() {
        match which {
            Totient::Euler => {
                v *= p.pow(e - 1) * (p - 1u32);
            }
            Totient::Jordan(k) => {
                if k == 0 {
                    return Err(Error::InvalidArgument("jordan order k must be >= 1".into()));
                }
                let pk = p.pow(k);
                v *= pk.pow(e - 1) * (&pk - 1u32);
            }
            Totient::Dedekind => {
                v *= p.pow(e - 1) * (p + 1u32);
            }
        }
    }
    Ok(v)
}

/// Euler's totient of `n >= 1`.
pub fn euler_phi(n: &Natural) -> Result<Natural> {
    totient_family(Totient::Euler, n)
}

/// sigma_t(n) = sum of t-th powers of the divisors of `n >= 1`.
pub fn divisor_family(t: u32, n: &Natural) -> Result<Natural> {
    let f = factorize(n)?;
    let mut v = Natural::one();
    for (p, e) in f.pairs() {
        if t == 0 {
            v *= Natural::from(*e as u64 + 1);
        } else {
            // (p^{t(e+1)} - 1) / (p^t - 1), computed by the geometric sum to
            // stay in integers.
            let pt = p.pow(t);
            let mut s = Natural::one();
            let mut acc = Natural::one();
            for _ in 1..=*e {
                acc *= &pt;
                s += &acc;
            }
            v *= s;
        }
    }
    Ok(v)
}

/// Gcd-sum function P(n) = sum_{k=1..n} gcd(k,n), evaluated multiplicatively
/// from P(p^e) = (e+1)p^e - e p^{e-1}.
pub fn gcd_sum(n: &Natural) -> Result<Natural> {
    let f = factorize(n)?;
    let mut v = Natural::one();
    for (p, e) in f.pairs() {
        let pe = p.pow(*e);
        let pe1 = p.pow(e - 1);
        v *= pe * Natural::from(*e as u64 + 1) - pe1 * Natural::from(*e as u64);
    }
    Ok(v)
}

/// Moebius function; 0 iff `n` is not squarefree.
pub fn mobius(n: &Natural) -> Result<i8> {
    let f = factorize(n)?;
    for (_, e) in f.pairs() {
        if *e > 1 {
            return Ok(0);
        }
    }
    Ok(if f.pairs().len() % 2 == 0 { 1 } else { -1 })
}

/// Function selector for [`sieve_range`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SieveFunction {
    Euler,
    Jordan(u32),
    Dedekind,
    /// sigma_t; t = 0 is the divisor-count tau.
    Sigma(u32),
    Mobius,
    GcdSum,
}

/// Batch evaluation of a multiplicative function on 1..=x.
///
/// Index i-1 holds f(i). Values are signed to accommodate the Moebius
/// function; every other supported function is non-negative.
pub fn sieve_range(which: SieveFunction, x: u64) -> Result<Vec<BigInt>> {
    if x == 0 {
        return Err(Error::ZeroArgument);
    }
    if x > SIEVE_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "sieve of {x} entries exceeds the budget of {SIEVE_BUDGET}"
        )));
    }
    if let SieveFunction::Jordan(0) = which {
        return Err(Error::InvalidArgument("jordan order k must be >= 1".into()));
    }
    let spf = small::spf_sieve(x);
    let mut out = Vec::with_capacity(x as usize);
    if let SieveFunction::Mobius = which {
        let mu = small::mobius_sieve_from_spf(&spf);
        out.extend(mu.iter().skip(1).map(|&m| BigInt::from(m)));
        return Ok(out);
    }
    let vals = small::sieve_multiplicative_big(&spf, |p, e| {
        let pb = Natural::from(p);
        match which {
            SieveFunction::Euler => pb.pow(e - 1) * (&pb - 1u32),
            SieveFunction::Jordan(k) => {
                let pk = pb.pow(k);
                pk.pow(e - 1) * (&pk - 1u32)
            }
            SieveFunction::Dedekind => pb.pow(e - 1) * (&pb + 1u32),
            SieveFunction::Sigma(t) => {
                if t == 0 {
                    Natural::from(e as u64 + 1)
                } else {
                    let pt = pb.pow(t);
                    let mut s = Natural::one();
                    let mut acc = Natural::one();
                    for _ in 1..=e {
                        acc *= &pt;
                        s += &acc;
                    }
                    s
                }
            }
            SieveFunction::GcdSum => {
                pb.pow(e) * Natural::from(e as u64 + 1) - pb.pow(e - 1) * Natural::from(e as u64)
            }
            SieveFunction::Mobius => unreachable!(),
        }
    });
    out.extend(vals.into_iter().skip(1).map(BigInt::from));
    Ok(out)
}

/// Converts a `Natural` known to fit in a machine word.
pub(crate) fn to_u64(n: &Natural, what: &str) -> Result<u64> {
    n.to_u64()
        .ok_or_else(|| Error::BudgetExceeded(format!("{what} does not fit in 64 bits: {n}")))
}

/// Machine-word sieves and helpers backing the oracle, the enumeration and
/// the partial-sum engines.
pub(crate) mod small {
    use num_bigint::BigUint;
    use num_traits::One;

    /// Primes up to and including `bound` by Eratosthenes.
    pub fn primes_upto(bound: u64) -> Vec<u64> {
        if bound < 2 {
            return Vec::new();
        }
        let n = bound as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    }

    /// Smallest-prime-factor table for 0..=x (entries 0 and 1 are 0).
    pub fn spf_sieve(x: u64) -> Vec<u32> {
        let n = x as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                let ip = i * p as usize;
                if p > spf[i] || ip > n {
                    break;
                }
                spf[ip] = p;
            }
        }
        spf
    }

    /// Factors `n` using a precomputed spf table covering it.
    pub fn factor_with_spf(mut n: u64, spf: &[u32]) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let p = spf[n as usize] as u64;
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    /// Factors a machine word by trial division (fine for n up to ~10^12
    /// with a small prime table; callers stay far below that).
    pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2u64;
        while p * p <= n {
            if n % p == 0 {
                let mut e = 0;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                out.push((p, e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    /// Sorted divisors of a machine word.
    pub fn divisors_u64(n: u64) -> Vec<u64> {
        let mut divs = vec![1u64];
        for (p, e) in factor_u64(n) {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Fills f(0)=0, f(1)=1 and f(n) for a multiplicative f given its value
    /// on prime powers.
    pub fn sieve_multiplicative<F: Fn(u64, u32) -> u64>(spf: &[u32], f_pp: F) -> Vec<u64> {
        let n = spf.len().saturating_sub(1);
        let mut f = vec![0u64; n + 1];
        if n >= 1 {
            f[1] = 1;
        }
        for i in 2..=n {
            let p = spf[i] as u64;
            let mut m = i as u64;
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            f[i] = f[m as usize] * f_pp(p, e);
        }
        f
    }

    /// Arbitrary-precision variant of [`sieve_multiplicative`].
    pub fn sieve_multiplicative_big<F: Fn(u64, u32) -> BigUint>(
        spf: &[u32],
        f_pp: F,
    ) -> Vec<BigUint> {
        let n = spf.len().saturating_sub(1);
        let mut f = vec![BigUint::default(); n + 1];
        if n >= 1 {
            f[1] = BigUint::one();
        }
        for i in 2..=n {
            let p = spf[i] as u64;
            let mut m = i as u64;
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            f[i] = &f[m as usize] * f_pp(p, e);
        }
        f
    }

    pub fn mobius_sieve_from_spf(spf: &[u32]) -> Vec<i8> {
        let n = spf.len().saturating_sub(1);
        let mut mu = vec![0i8; n + 1];
        if n >= 1 {
            mu[1] = 1;
        }
        for i in 2..=n {
            let p = spf[i] as u64;
            let m = i as u64 / p;
            mu[i] = if m % p == 0 { 0 } else { -mu[m as usize] };
        }
        mu
    }

    /// phi as u64 values for 0..=x.
    pub fn phi_sieve(x: u64) -> Vec<u64> {
        let spf = spf_sieve(x);
        sieve_multiplicative(&spf, |p, e| p.pow(e - 1) * (p - 1))
    }

    /// Dedekind psi as u64 values for 0..=x.
    pub fn psi_sieve(x: u64) -> Vec<u64> {
        let spf = spf_sieve(x);
        sieve_multiplicative(&spf, |p, e| p.pow(e - 1) * (p + 1))
    }

    /// tau for 0..=x.
    pub fn tau_sieve(x: u64) -> Vec<u64> {
        let spf = spf_sieve(x);
        sieve_multiplicative(&spf, |_, e| e as u64 + 1)
    }

    /// sigma for 0..=x.
    pub fn sigma_sieve(x: u64) -> Vec<u64> {
        let spf = spf_sieve(x);
        sieve_multiplicative(&spf, |p, e| (p.pow(e + 1) - 1) / (p - 1))
    }

    /// (mu * phi) for 0..=x; non-negative since the prime-power values are
    /// phi(p^e) - phi(p^{e-1}).
    pub fn mu_phi_sieve(x: u64) -> Vec<u64> {
        let spf = spf_sieve(x);
        sieve_multiplicative(&spf, |p, e| {
            if e == 1 {
                p - 2
            } else {
                p.pow(e - 2) * (p - 1) * (p - 1)
            }
        })
    }

    pub fn gcd(a: u64, b: u64) -> u64 {
        num_integer::gcd(a, b)
    }

    pub fn lcm(a: u64, b: u64) -> u64 {
        num_integer::lcm(a, b)
    }
}
