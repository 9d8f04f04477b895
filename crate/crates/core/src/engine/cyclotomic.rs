//! Exact sums of roots of unity in `Z[ζ_M]`, reduced modulo the `M`-th
//! cyclotomic polynomial.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_rational::Ratio;

fn mobius(mut n: u64) -> i8 {
    let mut result = 1i8;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Coefficients (lowest degree first) of `Φ_m`, via
/// `Φ_m = ∏_{d | m} (x^d − 1)^{μ(m/d)}`.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<i128>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i128>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return Arc::clone(p);
    }
    let divisors: Vec<u64> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
    let mut poly = vec![1i128];
    for &d in &divisors {
        if mobius(m / d) == 1 {
            poly = mul_x_pow_minus_one(&poly, d as usize);
        }
    }
    for &d in &divisors {
        if mobius(m / d) == -1 {
            poly = div_x_pow_minus_one(&poly, d as usize);
        }
    }
    let poly = Arc::new(poly);
    cache.lock().unwrap().insert(m, Arc::clone(&poly));
    poly
}

fn mul_x_pow_minus_one(p: &[i128], d: usize) -> Vec<i128> {
    let mut out = vec![0i128; p.len() + d];
    for (k, &c) in p.iter().enumerate() {
        out[k + d] += c;
        out[k] -= c;
    }
    out
}

fn div_x_pow_minus_one(p: &[i128], d: usize) -> Vec<i128> {
    // p = q·(x^d − 1); from the top: q[k] = p[k + d] + q[k + d]
    let deg_q = p.len() - 1 - d;
    let mut q = vec![0i128; deg_q + 1];
    for k in (0..=deg_q).rev() {
        let carry = if k + d <= deg_q { q[k + d] } else { 0 };
        q[k] = p[k + d] + carry;
    }
    debug_assert!(
        (0..d).all(|k| p[k] == -q.get(k).copied().unwrap_or(0)),
        "x^d − 1 does not divide the polynomial"
    );
    q
}

/// Remainder of `p` modulo the monic polynomial `modulus`.
fn reduce_mod(mut p: Vec<i128>, modulus: &[i128]) -> Vec<i128> {
    let deg = modulus.len() - 1;
    for k in (deg..p.len()).rev() {
        let c = p[k];
        if c != 0 {
            for (i, &m) in modulus.iter().enumerate() {
                p[k - deg + i] -= c * m;
            }
        }
    }
    p.truncate(deg);
    p.resize(deg, 0);
    p
}

/// `Σ count_k · ζ_M^k` for the primitive `M`-th root of unity `ζ_M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    order: u64,
    powers: BTreeMap<u64, i64>,
}

impl Cyclotomic {
    /// `Σ exp(2πi·φ)` over the given phases.
    pub fn from_phases(phases: &[Ratio<i64>]) -> Self {
        let order = phases
            .iter()
            .fold(1u64, |acc, p| acc.lcm(&(*p.denom() as u64)));
        let mut powers = BTreeMap::new();
        for p in phases {
            let k = (*p.numer() as i128 * (order as i128 / *p.denom() as i128))
                .rem_euclid(order as i128) as u64;
            *powers.entry(k).or_insert(0) += 1;
        }
        Cyclotomic { order, powers }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Canonical coordinates in the basis `1, ζ, …, ζ^{φ(M)−1}`.
    pub fn reduced_coefficients(&self) -> Vec<i128> {
        let mut p = vec![0i128; self.order as usize];
        for (&k, &c) in &self.powers {
            p[k as usize] += c as i128;
        }
        reduce_mod(p, &cyclotomic_polynomial(self.order))
    }

    pub fn is_zero(&self) -> bool {
        let nonzero: Vec<_> = self.powers.values().filter(|&&c| c != 0).collect();
        match nonzero.len() {
            0 => true,
            1 => false,
            _ => self.reduced_coefficients().iter().all(|&c| c == 0),
        }
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.reduced_coefficients();
        let terms: Vec<String> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match k {
                0 => c.to_string(),
                _ => format!("{c}·ζ{}^{k}", self.order),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
