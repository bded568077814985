use num_bigint::BigInt;

use super::elem::CoeffElem;

/// `T_k(x)` for the first-kind Chebyshev polynomials normalized by
/// `T_0 = 2`, `T_1 = x`, `T_{k+1} = x T_k - T_{k-1}`, over any carrier that
/// supplies its own arithmetic. With `normalized`, `T_0` is replaced by `1`.
pub fn chebyshev_with<T, M, S>(k: u32, x: &T, one: &T, normalized: bool, mut mul: M, mut sub: S) -> T
where
    T: Clone,
    M: FnMut(&T, &T) -> T,
    S: FnMut(&T, &T) -> T,
{
    let two = {
        // 2 = 1 - (0 - 1) without needing an `add` closure
        let zero = sub(one, one);
        let neg_one = sub(&zero, one);
        sub(one, &neg_one)
    };
    match k {
        0 if normalized => one.clone(),
        0 => two,
        1 => x.clone(),
        _ => {
            let mut prev = two;
            let mut cur = x.clone();
            for _ in 1..k {
                let next = sub(&mul(x, &cur), &prev);
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Chebyshev polynomial of a scalar.
pub fn chebyshev(k: u32, x: &CoeffElem, normalized: bool) -> CoeffElem {
    chebyshev_with(k, x, &CoeffElem::one(), normalized, |a, b| a * b, |a, b| a - b)
}

/// Integer coefficients `c_j` with `T_k(t) = sum_j c_j t^j`.
pub fn chebyshev_coefficients(k: u32, normalized: bool) -> Vec<BigInt> {
    if k == 0 {
        return vec![BigInt::from(if normalized { 1 } else { 2 })];
    }
    let mut prev = vec![BigInt::from(2)];
    let mut cur = vec![BigInt::from(0), BigInt::from(1)];
    for _ in 1..k {
        let mut next = vec![BigInt::from(0); cur.len() + 1];
        for (j, c) in cur.iter().enumerate() {
            next[j + 1] += c;
        }
        for (j, c) in prev.iter().enumerate() {
            next[j] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Numeric `T_k(z)`.
pub fn chebyshev_complex(k: u32, z: num_complex::Complex64) -> num_complex::Complex64 {
    use num_complex::Complex64;
    chebyshev_with(k, &z, &Complex64::new(1.0, 0.0), false, |a, b| a * b, |a, b| a - b)
}
