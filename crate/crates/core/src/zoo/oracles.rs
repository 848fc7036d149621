//! Brute-force membership predicates over symbol names. None of these touch
//! the rational arithmetic used by the simulators.

use std::collections::HashSet;

use num_bigint::BigUint;

fn unary_len(w: &[&str]) -> Option<usize> {
    w.iter().all(|s| *s == "a").then_some(w.len())
}

/// `n` is in 1, 2, 3, 5, 8, ...
pub fn fibonacci(w: &[&str]) -> bool {
    let Some(n) = unary_len(w) else { return false };
    let (mut a, mut b) = (1usize, 2usize);
    while a < n {
        (a, b) = (b, a + b);
    }
    a == n
}

/// `n = m² + m` for some `m ≥ 0`.
pub fn gauss(w: &[&str]) -> bool {
    let Some(n) = unary_len(w) else { return false };
    (0..)
        .map(|m: usize| m * m + m)
        .take_while(|&x| x <= n)
        .any(|x| x == n)
}

/// `n = k + 2^k` for some `k ≥ 1`.
pub fn pow(w: &[&str]) -> bool {
    let Some(n) = unary_len(w) else { return false };
    (1..usize::BITS as usize - 1)
        .map(|k| k + (1usize << k))
        .take_while(|&x| x <= n)
        .any(|x| x == n)
}

pub fn empty_unary(w: &[&str]) -> bool {
    w.is_empty()
}

pub fn unary_multiple_of_three(w: &[&str]) -> bool {
    unary_len(w).is_some_and(|n| n % 3 == 0)
}

pub fn unary_not_multiple(k: usize) -> impl Fn(&[&str]) -> bool {
    move |w| unary_len(w).is_some_and(|n| n % k != 0)
}

/// Equal numbers of each of `a0, ..., ak`.
pub fn equal_counts(k: usize) -> impl Fn(&[&str]) -> bool {
    move |w| {
        let mut counts = vec![0usize; k + 1];
        for s in w {
            match s.strip_prefix('a').and_then(|i| i.parse::<usize>().ok()) {
                Some(i) if i <= k => counts[i] += 1,
                _ => return false,
            }
        }
        counts.iter().all(|&c| c == counts[0])
    }
}

/// Concatenations of blocks `a^m b^n` with `m ≥ n ≥ 1`.
pub fn geq_star(w: &[&str]) -> bool {
    let mut i = 0;
    while i < w.len() {
        let a = w[i..].iter().take_while(|s| **s == "a").count();
        let b = w[i + a..].iter().take_while(|s| **s == "b").count();
        if a == 0 || b == 0 || b > a {
            return false;
        }
        i += a + b;
    }
    true
}

/// `u c reverse(u)` with `u` over `{a, b}`.
pub fn marked_palindrome(w: &[&str]) -> bool {
    let cs: Vec<usize> = w
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == "c")
        .map(|(i, _)| i)
        .collect();
    let [mid] = cs[..] else { return false };
    let (u, v) = (&w[..mid], &w[mid + 1..]);
    u.len() == v.len()
        && u.iter().all(|s| *s == "a" || *s == "b")
        && u.iter().zip(v.iter().rev()).all(|(x, y)| x == y)
}

/// `a^n b^{2n}`.
pub fn a_n_b_2n(w: &[&str]) -> bool {
    let a = w.iter().take_while(|s| **s == "a").count();
    let rest = &w[a..];
    rest.iter().all(|s| *s == "b") && rest.len() == 2 * a
}

/// Parses `t#a1#...#an#` with binary numbers and `n ≥ 1`.
pub fn parse_subset_sum(w: &[&str]) -> Option<(BigUint, Vec<BigUint>)> {
    if w.last() != Some(&"#") {
        return None;
    }
    let mut numbers = Vec::new();
    let mut current: Option<BigUint> = None;
    for s in w {
        match *s {
            "0" | "1" => {
                let bit = u32::from(*s == "1");
                current = Some(current.unwrap_or_default() * 2u32 + bit);
            }
            "#" => numbers.push(current.take()?),
            _ => return None,
        }
    }
    if numbers.len() < 2 {
        return None;
    }
    let t = numbers.remove(0);
    Some((t, numbers))
}

/// Some subset of the `a_i` (possibly empty) sums to `t`.
pub fn subset_sum(w: &[&str]) -> bool {
    let Some((t, items)) = parse_subset_sum(w) else {
        return false;
    };
    let mut reachable: HashSet<BigUint> = HashSet::from([BigUint::default()]);
    for x in &items {
        let shifted: Vec<BigUint> = reachable.iter().map(|s| s + x).filter(|s| *s <= t).collect();
        reachable.extend(shifted);
    }
    reachable.contains(&t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<&str> {
        s.split("").filter(|x| !x.is_empty()).collect()
    }

    fn unary(n: usize) -> Vec<&'static str> {
        vec!["a"; n]
    }

    #[test]
    fn arithmetic_oracles() {
        let fib: Vec<usize> = (0..40).filter(|&n| fibonacci(&unary(n))).collect();
        assert_eq!(fib, vec![1, 2, 3, 5, 8, 13, 21, 34]);
        let g: Vec<usize> = (0..31).filter(|&n| gauss(&unary(n))).collect();
        assert_eq!(g, vec![0, 2, 6, 12, 20, 30]);
        let p: Vec<usize> = (0..1101).filter(|&n| pow(&unary(n))).collect();
        assert_eq!(p, vec![3, 6, 11, 20, 37, 70, 135, 264, 521, 1034]);
        assert!(!fibonacci(&["b"]));
    }

    #[test]
    fn string_oracles() {
        assert!(geq_star(&toks("aab")) && geq_star(&toks("aabab")) && geq_star(&[]));
        assert!(!geq_star(&toks("abb")) && !geq_star(&toks("ba")) && !geq_star(&toks("aa")));
        assert!(!geq_star(&toks("aababb")));
        assert!(marked_palindrome(&toks("abcba")) && marked_palindrome(&toks("c")));
        assert!(!marked_palindrome(&toks("abcab")) && !marked_palindrome(&toks("cc")));
        assert!(equal_counts(1)(&["a0", "a1"]));
        assert!(!equal_counts(2)(&["a0", "a0", "a1", "a2"]));
        assert!(equal_counts(2)(&[]));
        assert!(a_n_b_2n(&toks("abb")) && !a_n_b_2n(&toks("ab")));
        assert!(unary_not_multiple(3)(&toks("a")) && !unary_not_multiple(3)(&toks("aaa")));
    }

    #[test]
    fn subset_sum_oracle() {
        assert!(subset_sum(&toks("101#11#10#")));
        assert!(!subset_sum(&toks("10#11#")));
        assert!(subset_sum(&toks("0#1#")));
        assert!(!subset_sum(&toks("0#")), "needs at least one item");
        assert!(!subset_sum(&toks("1##")), "empty number");
        assert!(!subset_sum(&toks("1#1")), "missing final separator");
    }
}
