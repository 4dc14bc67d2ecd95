//! Factorisation of univariate polynomials over `Q` (Zassenhaus: factor
//! modulo a small prime, Hensel-lift, recombine).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::{primitive_integer, Poly};

/// Monic irreducible factors over `Q` of the square-free part of `p`.
pub fn factor_rational(p: &Poly<BigRational>) -> Vec<Poly<BigRational>> {
    let sf = match p.squarefree() {
        Ok(s) => s,
        Err(_) => return Vec::new(),
    };
    if sf.is_constant() {
        return Vec::new();
    }
    let f = primitive_integer(&sf);
    let mut out: Vec<Poly<BigRational>> = factor_squarefree_z(&f)
        .into_iter()
        .map(|g| {
            let q = Poly::new(g.into_iter().map(BigRational::from_integer).collect(), BigRational::zero());
            q.monic().expect("nonzero factor")
        })
        .collect();
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    out
}

/// Rational roots of `p`, each once, in increasing order.
pub fn rational_roots(p: &Poly<BigRational>) -> Vec<BigRational> {
    let mut roots: Vec<BigRational> =
        factor_rational(p).into_iter().filter(|f| f.degree() == Some(1)).map(|f| -f.coeff(0).clone()).collect();
    roots.sort();
    roots
}

type ZPoly = Vec<BigInt>;

fn zp_trim(mut v: ZPoly) -> ZPoly {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Irreducible factors over `Z` of a square-free primitive polynomial.
fn factor_squarefree_z(f: &[BigInt]) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f[n].clone();
    let Some((p, modular)) = choose_prime(f) else {
        // no usable prime below the search limit; treat as irreducible
        return vec![f.to_vec()];
    };
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }
    let norm2 = f.iter().map(|c| c * c).fold(BigInt::zero(), |a, b| a + b);
    let bound = (BigInt::one() << (n + 1)) * (norm2.sqrt() + 1u32) * lc.abs();
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut k = 1u32;
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }
    let lifted = hensel_lift(f, &modular, p, k);
    recombine(f.to_vec(), lifted, &modulus)
}

const PRIMES: &[u64] = &[
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
    113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239,
    241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311, 313, 317, 331, 337, 347, 349, 353, 359, 367, 373, 379,
    383, 389, 397, 401, 409, 419, 421, 431, 433, 439, 443, 449, 457, 461, 463, 467, 479, 487, 491, 499, 503, 509, 521,
    523, 541, 1009, 2003, 3001, 4001, 5003, 10007, 20011, 40009, 65521,
];

/// Pick a prime keeping the degree and square-freeness; among the first few
/// candidates take the one with the fewest modular factors.
fn choose_prime(f: &[BigInt]) -> Option<(u64, Vec<Vec<u64>>)> {
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for &p in PRIMES {
        let fp = reduce_mod(f, p);
        if fp.len() != f.len() {
            continue;
        }
        let d = mp_derivative(&fp, p);
        if mp_gcd(&fp, &d, p).len() != 1 {
            continue;
        }
        let monic = mp_monic(&fp, p);
        let factors = factor_mod_p(&monic, p);
        if best.as_ref().is_none_or(|(_, b)| factors.len() < b.len()) {
            best = Some((p, factors));
        }
        tried += 1;
        if tried >= 4 {
            break;
        }
    }
    best
}

fn reduce_mod(f: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let v: Vec<u64> = f.iter().map(|c| c.mod_floor(&pb).to_u64().expect("small residue")).collect();
    mp_trim(v)
}

// ---- arithmetic in F_p[x], coefficients low to high ----

fn mp_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

fn mp_add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let v = (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect();
    mp_trim(v)
}

fn mp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let v = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    mp_trim(v)
}

fn mp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % p;
        }
    }
    mp_trim(v)
}

fn mp_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let inv = mod_inv(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * inv % p;
        q[k] = c;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - c * bj % p) % p;
        }
    }
    r.truncate(db);
    (mp_trim(q), mp_trim(r))
}

fn mp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    mp_divrem(a, b, p).1
}

fn mp_monic(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = mod_inv(l, p);
            a.iter().map(|c| c * inv % p).collect()
        }
    }
}

fn mp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = mp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    mp_monic(&a, p)
}

fn mp_derivative(a: &[u64], p: u64) -> Vec<u64> {
    let v = a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect();
    mp_trim(v)
}

fn mp_powmod(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = mp_rem(base, m, p);
    for i in 0..e.bits() {
        if e.bit(i) {
            result = mp_rem(&mp_mul(&result, &b, p), m, p);
        }
        b = mp_rem(&mp_mul(&b, &b, p), m, p);
    }
    result
}

/// Extended Euclid in `F_p[x]`: `(s, t)` with `s a + t b = 1`.
fn mp_xgcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = mp_divrem(&r0, &r1, p);
        let s = mp_sub(&s0, &mp_mul(&q, &s1, p), p);
        let t = mp_sub(&t0, &mp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = mod_inv(*r0.last().expect("coprime inputs"), p);
    let scale = |v: Vec<u64>| v.into_iter().map(|c| c * inv % p).collect::<Vec<_>>();
    (scale(s0), scale(t0))
}

/// Monic irreducible factors of a monic square-free polynomial mod `p`.
fn factor_mod_p(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let x = vec![0u64, 1];
    let pu = BigUint::from(p);
    let mut g = f.to_vec();
    let mut h = x.clone();
    let mut i = 1usize;
    // distinct-degree split
    while g.len() > 2 * i {
        h = mp_powmod(&h, &pu, &g, p);
        let d = mp_gcd(&g, &mp_sub(&h, &x, p), p);
        if d.len() > 1 {
            out.extend(equal_degree(&d, i, p));
            g = mp_divrem(&g, &d, p).0;
            h = mp_rem(&h, &g, p);
        }
        i += 1;
    }
    if g.len() > 1 {
        let deg = g.len() - 1;
        out.extend(equal_degree(&g, deg, p));
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of irreducibles of degree `d`.
fn equal_degree(f: &[u64], d: usize, p: u64) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (n as u64) ^ (p << 8));
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: Vec<u64> = mp_trim((0..n).map(|_| rng.random_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = mp_sub(&mp_powmod(&a, &e, f, p), &[1], p);
        let g = mp_gcd(f, &b, p);
        if g.len() > 1 && g.len() < f.len() {
            let other = mp_monic(&mp_divrem(f, &g, p).0, p);
            let mut out = equal_degree(&g, d, p);
            out.extend(equal_degree(&other, d, p));
            return out;
        }
    }
}

// ---- Hensel lifting over Z/p^k ----

fn zp_mod(v: &[BigInt], m: &BigInt) -> ZPoly {
    zp_trim(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn zp_mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    zp_trim(v)
}

fn zp_sub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    zp_trim((0..n).map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).collect())
}

fn to_z(v: &[u64]) -> ZPoly {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

fn to_p(v: &[BigInt], p: u64) -> Vec<u64> {
    reduce_mod(v, p)
}

/// Lift `f ≡ g h (mod p)` with `g` monic to a factorisation mod `p^k`;
/// `f` need only be known mod `p^k` and `h` must carry `f`'s leading
/// coefficient.
fn lift_pair(f: &[BigInt], g: &[u64], h: &[u64], p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (s, t) = mp_xgcd(g, h, p);
    let pb = BigInt::from(p);
    let mut gz = to_z(g);
    let mut hz = to_z(h);
    let lc = f.last().expect("nonzero").clone();
    let last = hz.len() - 1;
    hz[last] = lc;
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let diff = zp_sub(f, &zp_mul(&gz, &hz));
        let e: ZPoly = diff.iter().map(|c| c.mod_floor(&next) / &pj).collect();
        let e = to_p(&e, p);
        if !e.is_empty() {
            let (q, tau) = mp_divrem(&mp_mul(&e, &t, p), g, p);
            let sigma = mp_add(&mp_mul(&e, &s, p), &mp_mul(&q, h, p), p);
            let tau_z: ZPoly = to_z(&tau).into_iter().map(|c| c * &pj).collect();
            let sigma_z: ZPoly = to_z(&sigma).into_iter().map(|c| c * &pj).collect();
            gz = zp_mod(&add_z(&gz, &tau_z), &next);
            hz = zp_mod(&add_z(&hz, &sigma_z), &next);
        }
        pj = next;
    }
    (zp_mod(&gz, &pj), zp_mod(&hz, &pj))
}

fn add_z(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    (0..n).map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero)).collect()
}

fn hensel_lift(f: &[BigInt], factors: &[Vec<u64>], p: u64, k: u32) -> Vec<ZPoly> {
    let modulus = BigInt::from(p).pow(k);
    let lc_p = to_p(&[f.last().expect("nonzero").clone()], p)[0];
    let mut current: ZPoly = zp_mod(f, &modulus);
    let mut out = Vec::new();
    for i in 0..factors.len() - 1 {
        let g = &factors[i];
        let mut h = vec![lc_p];
        for other in &factors[i + 1..] {
            h = mp_mul(&h, other, p);
        }
        let (gl, hl) = lift_pair(&current, g, &h, p, k);
        out.push(gl);
        current = hl;
    }
    // remaining factor: make monic mod p^k
    let lc = current.last().expect("nonzero").clone();
    let inv = lc.modinv(&modulus).expect("leading coefficient coprime to p");
    out.push(zp_mod(&current.iter().map(|c| c * &inv).collect::<Vec<_>>(), &modulus));
    out
}

fn symmetric(v: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m / 2;
    v.iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

fn content_free(v: ZPoly) -> ZPoly {
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
    }
    let mut out: ZPoly = if g.is_zero() { v } else { v.into_iter().map(|c| c / &g).collect() };
    if out.last().is_some_and(|c| c.is_negative()) {
        out = out.into_iter().map(|c| -c).collect();
    }
    out
}

/// Exact division over `Z`, `None` if `d` does not divide `f`.
fn zp_divide(f: &[BigInt], d: &[BigInt]) -> Option<ZPoly> {
    let dd = d.len() - 1;
    if f.len() < d.len() {
        return None;
    }
    let mut r = f.to_vec();
    let mut q = vec![BigInt::zero(); f.len() - dd];
    let lc = &d[dd];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + dd].div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        for (j, dj) in d.iter().enumerate() {
            r[k + j] -= &c * dj;
        }
        q[k] = c;
    }
    if r.iter().all(Zero::is_zero) {
        Some(zp_trim(q))
    } else {
        None
    }
}

fn recombine(mut f: ZPoly, mut lifted: Vec<ZPoly>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut s = 1usize;
    'outer: while 2 * s <= lifted.len() {
        for subset in combinations(lifted.len(), s) {
            let lc = f.last().expect("nonzero").clone();
            let mut g = vec![lc];
            for &i in &subset {
                g = zp_mod(&zp_mul(&g, &lifted[i]), modulus);
            }
            let g = content_free(symmetric(&g, modulus));
            if g.len() < 2 {
                continue;
            }
            if let Some(q) = zp_divide(&f, &g) {
                out.push(g);
                f = q;
                let mut idx = subset.clone();
                idx.sort_unstable_by(|a, b| b.cmp(a));
                for i in idx {
                    lifted.remove(i);
                }
                continue 'outer;
            }
        }
        s += 1;
    }
    if f.len() > 1 {
        out.push(content_free(f));
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
