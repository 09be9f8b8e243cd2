//! Binomial coefficients modulo a prime via Lucas' theorem.

use super::fp::Fp;

/// Base-p digits of `n`, least significant first.
pub fn digits(mut n: u64, p: u32) -> Vec<u32> {
    let mut out = Vec::new();
    while n > 0 {
        out.push((n % p as u64) as u32);
        n /= p as u64;
    }
    out
}

/// Small binomial C(n, k) mod p for n, k < p.
fn small_binomial(n: u32, k: u32, p: u32) -> u32 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u64 = 1;
    let mut den: u64 = 1;
    for i in 0..k {
        num = num * ((n - i) as u64) % p as u64;
        den = den * ((i + 1) as u64) % p as u64;
    }
    let inv = Fp::new(den as i64, p);
    let inv = crate::algebra::Field::inv(&inv);
    (num as u32 * inv.value()) % p
}

/// C(n, k) mod p, computed digit by digit in base p.
pub fn binomial_mod_p(n: u64, k: u64, p: u32) -> Fp {
    if k > n {
        return Fp::new(0, p);
    }
    let (mut n, mut k) = (n, k);
    let mut acc: u32 = 1 % p;
    while k > 0 || n > 0 {
        let (nd, kd) = ((n % p as u64) as u32, (k % p as u64) as u32);
        if kd > nd {
            return Fp::new(0, p);
        }
        acc = acc * small_binomial(nd, kd, p) % p;
        n /= p as u64;
        k /= p as u64;
    }
    Fp::new(acc as i64, p)
}

/// C(alpha, k) mod p for a p-adic integer alpha given by its first digits.
///
/// Only digits below the length of `k`'s expansion matter; missing digits
/// of `alpha` are treated as zero.
pub fn padic_binomial(alpha_digits: &[u32], k: u64, p: u32) -> Fp {
    let kd = digits(k, p);
    let mut acc = 1 % p;
    for (i, &d) in kd.iter().enumerate() {
        let a = alpha_digits.get(i).copied().unwrap_or(0);
        acc = acc * small_binomial(a, d, p) % p;
    }
    Fp::new(acc as i64, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Pascal's triangle mod p, the independent reference.
    fn pascal(limit: usize, p: u32) -> Vec<Vec<u32>> {
        let mut rows = vec![vec![1 % p]];
        for n in 1..=limit {
            let prev = &rows[n - 1];
            let mut row = vec![1 % p; n + 1];
            for k in 1..n {
                row[k] = (prev[k - 1] + prev[k]) % p;
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn examples() {
        assert_eq!(binomial_mod_p(4, 2, 2).value(), 0);
        assert_eq!(binomial_mod_p(17, 0, 5).value(), 1);
        for m in 0..4u32 {
            for l in 0..4u32 {
                let v = binomial_mod_p(3u64.pow(m), 3u64.pow(l), 3).value();
                assert_eq!(v, u32::from(m == l), "m={m} l={l}");
            }
        }
    }

    #[test]
    fn agrees_with_pascal_up_to_64() {
        for p in [2, 3, 5, 7, 97] {
            let tri = pascal(64, p);
            for n in 0..=64 {
                for k in 0..=n {
                    assert_eq!(binomial_mod_p(n as u64, k as u64, p).value(), tri[n][k]);
                }
            }
        }
    }

    #[test]
    fn padic_matches_integer_case() {
        let p = 3;
        for n in 0..81u64 {
            let d = digits(n, p);
            for k in 0..81u64 {
                assert_eq!(padic_binomial(&d, k, p), binomial_mod_p(n, k, p));
            }
        }
    }
}
