#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use ekor_core::weyl::{ExtAffineElement, WeylGroup};

pub fn golden(text: &str) -> Vec<ExtAffineElement> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.parse().unwrap())
        .collect()
}

/// Order of `s_i s_j` in the Coxeter group of type C̃_g (Ã_1 for g = 1);
/// `None` for infinite order.
pub fn coxeter_m(g: usize, i: usize, j: usize) -> Option<i32> {
    let (i, j) = (i.min(j), i.max(j));
    if i == j {
        return Some(1);
    }
    if g == 1 {
        return None;
    }
    if j != i + 1 {
        return Some(2);
    }
    if i == 0 || j == g {
        Some(4)
    } else {
        Some(3)
    }
}

/// Bruhat order generated by `u < u t` over affine reflections `t` with
/// `ℓ(ut) = ℓ(u) + 1`, as the set of elements below each member of `ball`.
/// `ball` must be sorted by length and closed downwards.
pub fn cover_closure(wg: &WeylGroup, ball: &[ExtAffineElement], max_len: u32) -> HashMap<ExtAffineElement, BTreeSet<ExtAffineElement>> {
    // a reflection relating two elements of length <= L has length <= 2L - 1
    let depth = max_len.saturating_sub(1);
    let mut reflections = BTreeSet::new();
    for x in wg.enumerate_ball(depth, 0) {
        for s in wg.simple_reflections() {
            reflections.insert(x.multiply(s).unwrap().multiply(&x.inverse()).unwrap());
        }
    }
    let mut below: HashMap<ExtAffineElement, BTreeSet<ExtAffineElement>> = HashMap::new();
    for w in ball {
        let lw = wg.length(w);
        let mut set = BTreeSet::from([w.clone()]);
        if lw > 0 {
            for t in &reflections {
                let u = w.multiply(t).unwrap();
                if wg.length(&u) == lw - 1 {
                    set.extend(below[&u].iter().cloned());
                }
            }
        }
        below.insert(w.clone(), set);
    }
    below
}
