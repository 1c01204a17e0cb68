//! Machine-word number theory used by the ideal layer: primality, integer
//! factorization, Kronecker symbols and square roots modulo primes.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. Returns a nontrivial factor of the odd
/// composite `n`, or `None` when the iteration budget runs out.
fn pollard_brent(n: u64, budget: &mut u64) -> Option<u64> {
    for c in 1..64u64 {
        let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        const BLOCK: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = BLOCK.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                if *budget < steps {
                    return None;
                }
                *budget -= steps;
                g = q.gcd(&n);
                k += steps;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

/// Factorization of a `u64` as sorted `(prime, exponent)` pairs. `None`
/// means the Pollard rho budget was exhausted.
pub fn factor_u64(n: u64, rho_budget: u64) -> Option<Vec<(u64, u32)>> {
    let mut out: Vec<u64> = Vec::new();
    let mut n = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
    }
    let mut budget = rho_budget;
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            out.push(m);
            continue;
        }
        let d = pollard_brent(m, &mut budget)?;
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    Some(collect_powers(&out))
}

fn collect_powers(sorted: &[u64]) -> Vec<(u64, u32)> {
    let mut res: Vec<(u64, u32)> = Vec::new();
    for &p in sorted {
        match res.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => res.push((p, 1)),
        }
    }
    res
}

/// Budget for rational-integer factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial division runs over all integers below this bound.
    pub trial_bound: u64,
    /// Maximum number of Pollard rho iterations on the remaining cofactor.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { trial_bound: 1 << 16, rho_iterations: 1 << 24 }
    }
}

/// Factor an arbitrary-precision integer `n >= 1`. Trial division strips
/// small primes; a cofactor that fits in a `u64` goes to Pollard rho. Larger
/// composite cofactors are refused.
pub fn factor_biguint(n: &BigUint, budget: FactorBudget) -> Option<Vec<(u64, u32)>> {
    assert!(!n.is_zero(), "cannot factor zero");
    if let Some(small) = n.to_u64() {
        return factor_u64(small, budget.rho_iterations);
    }
    let mut n = n.clone();
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut p: u64 = 2;
    while p < budget.trial_bound {
        let bp = BigUint::from(p);
        let mut e = 0;
        loop {
            let (q, r) = n.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        if n.is_one() {
            return Some(out);
        }
        if let Some(rest) = n.to_u64() {
            let tail = factor_u64(rest, budget.rho_iterations)?;
            out.extend(tail);
            out.sort_unstable();
            return Some(out);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    None
}

/// Kronecker symbol `(a / n)` for `n >= 1`.
pub fn kronecker(a: i64, n: u64) -> i32 {
    assert!(n >= 1);
    let mut n = n;
    let mut sign = 1;
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        let r = a.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            sign = -sign;
        }
        n >>= twos;
    }
    sign * jacobi(a.rem_euclid(n as i64) as u64, n)
}

/// Jacobi symbol `(a / n)` for odd `n`.
pub fn jacobi(a: u64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// A square root of `a` modulo the odd prime `p` (Tonelli-Shanks), if one exists.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// All primes `<= n` (plain Eratosthenes, desk scale).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut k = i * i;
            while k <= n {
                composite[k] = true;
                k += i;
            }
        }
    }
    out
}

/// `true` when no prime square divides `d` (|d| must be factorable).
pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    match factor_u64(d.unsigned_abs(), u64::MAX) {
        Some(f) => f.iter().all(|&(_, e)| e == 1),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_agrees_with_sieve() {
        let sieve = primes_up_to(5000);
        for n in 0..5000u64 {
            assert_eq!(is_prime_u64(n), sieve.binary_search(&n).is_ok(), "n = {n}");
        }
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(3215031751));
    }

    #[test]
    fn factorization_reconstructs() {
        for n in [1u64, 2, 12, 360, 1 << 40, 600851475143, 999999000001, 18446744073709551557] {
            let f = factor_u64(n, 1 << 30).unwrap();
            let back: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n);
            assert!(f.iter().all(|&(p, _)| is_prime_u64(p)));
        }
        let big = BigUint::from(2u32).pow(300) * BigUint::from(3u32);
        assert_eq!(factor_biguint(&big, FactorBudget::default()).unwrap(), vec![(2, 300), (3, 1)]);
    }

    #[test]
    fn kronecker_small_table() {
        // (-4/p): 0 at 2, +1 for p = 1 mod 4, -1 for p = 3 mod 4
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-4, 3), -1);
        // (5/2) = -1 since 5 = 5 mod 8, (5/11) = 1
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(5, 11), 1);
        assert_eq!(kronecker(8, 7), 1);
        for p in primes_up_to(200).into_iter().skip(1) {
            for a in -30i64..30 {
                let euler = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
                let expect = if a.rem_euclid(p as i64) == 0 { 0 } else if euler == 1 { 1 } else { -1 };
                assert_eq!(kronecker(a, p), expect);
            }
        }
    }

    #[test]
    fn tonelli_shanks_roots() {
        for p in primes_up_to(400).into_iter().skip(1) {
            for a in 0..p {
                if let Some(r) = sqrt_mod(a, p) {
                    assert_eq!(mul_mod(r, r, p), a);
                } else {
                    assert_eq!(jacobi(a, p), -1);
                }
            }
        }
    }

    #[test]
    fn squarefree_detection() {
        assert!(is_squarefree(-1));
        assert!(is_squarefree(5));
        assert!(is_squarefree(-5));
        assert!(!is_squarefree(12));
        assert!(!is_squarefree(0));
    }
}
