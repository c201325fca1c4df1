//! Brute-force single-node oracle, sharing no code with the library.
//!
//! Words are degree lists, polynomials map integer q-exponents to integers,
//! and the Ω recursion runs over a fixed generous range of `r` instead of
//! the library's structural cutoff.

#![allow(dead_code)]

use std::collections::BTreeMap;

pub type Poly = BTreeMap<i64, i128>;
pub type Vector = BTreeMap<Vec<i64>, Poly>;

pub const R_MAX: i64 = 14;

pub fn mono(e: i64, c: i128) -> Poly {
    let mut p = Poly::new();
    if c != 0 {
        p.insert(e, c);
    }
    p
}

pub fn padd(a: &mut Poly, b: &Poly, sign: i128) {
    for (&e, &c) in b {
        let v = a.entry(e).or_insert(0);
        *v += sign * c;
        if *v == 0 {
            a.remove(&e);
        }
    }
}

pub fn pmul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (&ea, &ca) in a {
        for (&eb, &cb) in b {
            padd(&mut out, &mono(ea + eb, ca * cb), 1);
        }
    }
    out
}

pub fn vadd(v: &mut Vector, w: Vec<i64>, c: &Poly) {
    let slot = v.entry(w.clone()).or_default();
    padd(slot, c, 1);
    if slot.is_empty() {
        v.remove(&w);
    }
}

/// `g(r)` for pairing 2.
pub fn g(r: i64) -> Poly {
    if r == 0 {
        mono(2, 1)
    } else {
        let mut p = mono(2 * (r + 1), 1);
        padd(&mut p, &mono(2 * (r - 1), 1), -1);
        p
    }
}

/// Normal form of a single word, degrees weakly decreasing.
pub fn straighten_word(w: &[i64]) -> Vector {
    let mut out = Vector::new();
    let pos = (0..w.len().saturating_sub(1)).find(|&p| w[p + 1] > w[p]);
    let Some(p) = pos else {
        vadd(&mut out, w.to_vec(), &mono(0, 1));
        return out;
    };
    let (u, v) = (w[p], w[p + 1]);
    let with = |a: i64, b: i64| {
        let mut x = w.to_vec();
        x[p] = a;
        x[p + 1] = b;
        x
    };
    let mut terms: Vec<(Vec<i64>, Poly)> = vec![(with(v, u), mono(2, 1))];
    if v >= u + 2 {
        terms.push((with(u + 1, v - 1), mono(2, 1)));
        terms.push((with(v - 1, u + 1), mono(0, -1)));
    }
    for (word, c) in terms {
        for (x, d) in straighten_word(&word) {
            vadd(&mut out, x, &pmul(&c, &d));
        }
    }
    out
}

pub fn straighten(v: &Vector) -> Vector {
    let mut out = Vector::new();
    for (w, c) in v {
        for (x, d) in straighten_word(w) {
            vadd(&mut out, x, &pmul(c, &d));
        }
    }
    out
}

/// Ω(m) on one word.
pub fn omega_word(m: i64, w: &[i64]) -> Vector {
    let mut out = Vector::new();
    let Some((&k1, tail)) = w.split_first() else { return out };
    if k1 == -m {
        vadd(&mut out, tail.to_vec(), &mono(0, 1));
    }
    for r in 0..=R_MAX {
        let inner = omega_word(m - r, tail);
        if inner.is_empty() {
            continue;
        }
        let mut shifted = Vector::new();
        for (x, c) in &inner {
            let mut y = vec![k1 + r];
            y.extend_from_slice(x);
            vadd(&mut shifted, y, &pmul(&g(r), c));
        }
        for (x, c) in straighten(&shifted) {
            vadd(&mut out, x, &c);
        }
    }
    out
}

pub fn omega(m: i64, v: &Vector) -> Vector {
    let mut out = Vector::new();
    for (w, c) in v {
        for (x, d) in omega_word(m, w) {
            vadd(&mut out, x, &pmul(c, &d));
        }
    }
    out
}

pub fn single(w: &[i64]) -> Vector {
    let mut v = Vector::new();
    vadd(&mut v, w.to_vec(), &mono(0, 1));
    v
}

/// `⟨u, v⟩` by peeling factors of `u` with Ω.
pub fn pair(u: &[i64], v: &[i64]) -> Poly {
    let mut cur = single(v);
    for &k in u {
        cur = omega(-k, &cur);
    }
    cur.get(&Vec::new()).cloned().unwrap_or_default()
}

/// x̃ in one node: left multiplication then normal form.
pub fn xtilde(m: i64, v: &Vector) -> Vector {
    let mut shifted = Vector::new();
    for (w, c) in v {
        let mut y = vec![m];
        y.extend_from_slice(w);
        vadd(&mut shifted, y, c);
    }
    straighten(&shifted)
}

/// Ordered A1 words of length ≤ `len` with degrees in `[lo, hi]`.
pub fn a1_words(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            let top = w.last().copied().unwrap_or(hi);
            for k in lo..=top.min(hi) {
                let mut x: Vec<i64> = w.clone();
                x.push(k);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Converts to the library representation for comparison.
pub fn to_element(v: &Vector) -> imcrystal::Element {
    use imcrystal::{Element, LaurentQ, Word};
    Element::from_terms(v.iter().map(|(w, c)| {
        let word = Word::from_pairs(&w.iter().map(|&k| (1usize, k)).collect::<Vec<_>>());
        let coeff = LaurentQ::from_pairs(c.iter().map(|(&e, &x)| (2 * e, x)));
        (word, coeff)
    }))
}

pub fn to_laurent(p: &Poly) -> imcrystal::LaurentQ {
    imcrystal::LaurentQ::from_pairs(p.iter().map(|(&e, &c)| (2 * e, c)))
}

pub fn lib_word(w: &[i64]) -> imcrystal::Word {
    imcrystal::Word::from_pairs(&w.iter().map(|&k| (1usize, k)).collect::<Vec<_>>())
}
