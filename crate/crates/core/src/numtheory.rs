//! Small integer helpers used by the dihedral arithmetic and the builders.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a as u64, b as u64) as usize * b
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Product of the distinct prime divisors.
pub fn radical(n: u64) -> u64 {
    prime_factors(n).into_iter().product()
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n).into_iter().fold(n, |acc, p| acc / p * (p - 1))
}

/// Units of `Z_n` in increasing order.
pub fn units(n: u64) -> Vec<u64> {
    (1..n.max(2)).filter(|&k| gcd(k, n) == 1).collect()
}

/// Whether `p` is a prime of the form `2^r - 1`.
pub fn is_mersenne_prime(p: u64) -> bool {
    is_prime(p) && (p + 1).is_power_of_two()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(lcm(4, 6), 12);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(radical(12), 6);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(units(8), vec![1, 3, 5, 7]);
        assert!(is_prime(97) && !is_prime(91) && !is_prime(1));
        assert!(is_mersenne_prime(7) && is_mersenne_prime(31) && is_mersenne_prime(3));
        assert!(!is_mersenne_prime(5) && !is_mersenne_prime(15) && !is_mersenne_prime(11));
    }

    #[test]
    fn phi_counts_units() {
        for n in 2..200 {
            assert_eq!(euler_phi(n), units(n).len() as u64, "n = {n}");
        }
    }
}
