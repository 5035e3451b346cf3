//! Modular arithmetic on `u64`, deterministic primality testing and integer
//! factorisation.  These are the number-theoretic primitives behind field
//! construction (finding primitive elements requires factoring `q - 1`) and
//! the prime searches of the bound computations.

/// `(a + b) mod m` without overflow.
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    (((a as u128) + (b as u128)) % (m as u128)) as u64
}

/// `(a * b) mod m` without overflow.
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (((a as u128) * (b as u128)) % (m as u128)) as u64
}

/// `a^e mod m` by square-and-multiply.  `0^0` is taken to be `1`.
pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Deterministic Miller-Rabin for `u64`.  The witness set below is known to be
/// exact for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

/// Smallest prime strictly greater than `n`.
pub fn next_prime_above(n: u64) -> u64 {
    let mut c = n.checked_add(1).expect("prime search overflow");
    loop {
        if is_prime(c) {
            return c;
        }
        c += 1;
    }
}

fn pollard_rho(n: u64) -> u64 {
    // Brent's cycle-finding variant; `n` must be odd, composite and > 1.
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorisation of `n` as sorted `(prime, exponent)` pairs.
pub fn factor(n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut stack = vec![n];
    let mut primes: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if m < 2 {
            continue;
        }
        if is_prime(m) {
            primes.push(m);
            continue;
        }
        // Strip small factors first so Pollard only sees hard composites.
        let mut m = m;
        let mut reduced = false;
        for p in [2u64, 3, 5, 7, 11, 13] {
            while m % p == 0 {
                primes.push(p);
                m /= p;
                reduced = true;
            }
        }
        if reduced {
            stack.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    primes.sort_unstable();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Distinct prime divisors of `n`.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

/// Calls `f` with each `t`-subset of `0..m` in lexicographic order until `f`
/// returns `true`; returns whether any call did.
pub fn any_combination(m: usize, t: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if t > m {
        return false;
    }
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        if f(&idx) {
            return true;
        }
        // Advance to the next combination.
        let mut i = t;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < m - (t - i) {
                idx[i] += 1;
                for j in i + 1..t {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Visits every `t`-subset of `0..m` in lexicographic order.
pub fn for_each_combination(m: usize, t: usize, mut f: impl FnMut(&[usize])) {
    any_combination(m, t, |c| {
        f(c);
        false
    });
}
