//! Brute-force reference computations shared by the oracle tests and the
//! acceptance runner.

#![allow(dead_code)]

/// κ from its definition: agreement counted pair by pair, chance from the
/// two label histograms.
pub fn kappa_oracle(pairs: &[(u8, u8)]) -> Option<f64> {
    let n = pairs.len() as f64;
    let p_o = pairs.iter().filter(|(a, b)| a == b).count() as f64 / n;
    let mut p_e = 0.0;
    for c in 0..=u8::MAX {
        let a = pairs.iter().filter(|p| p.0 == c).count() as f64;
        let b = pairs.iter().filter(|p| p.1 == c).count() as f64;
        p_e += (a / n) * (b / n);
    }
    if (1.0 - p_e).abs() < 1e-15 {
        return None;
    }
    Some((p_o - p_e) / (1.0 - p_e))
}

/// α from the pairwise definition: mean within-unit pair distance over mean
/// distance between any two pairable values.
pub fn alpha_oracle(rows: &[Vec<Option<u8>>], ordinal: bool) -> Option<f64> {
    let units: Vec<Vec<u8>> = rows
        .iter()
        .map(|r| r.iter().flatten().copied().collect::<Vec<_>>())
        .filter(|u| u.len() >= 2)
        .collect();
    let all: Vec<u8> = units.iter().flatten().copied().collect();
    let n = all.len() as f64;
    let freq = |g: u8| all.iter().filter(|&&v| v == g).count() as f64;
    let delta = |a: u8, b: u8| -> f64 {
        if a == b {
            0.0
        } else if !ordinal {
            1.0
        } else {
            let (lo, hi) = (a.min(b), a.max(b));
            let s: f64 = (lo..=hi).map(freq).sum::<f64>() - (freq(a) + freq(b)) / 2.0;
            s * s
        }
    };
    let mut d_o = 0.0;
    for u in &units {
        let mut s = 0.0;
        for i in 0..u.len() {
            for j in 0..u.len() {
                if i != j {
                    s += delta(u[i], u[j]);
                }
            }
        }
        d_o += s / (u.len() as f64 - 1.0);
    }
    d_o /= n;
    let mut d_e = 0.0;
    for i in 0..all.len() {
        for j in 0..all.len() {
            if i != j {
                d_e += delta(all[i], all[j]);
            }
        }
    }
    d_e /= n * (n - 1.0);
    if d_e == 0.0 {
        return None;
    }
    Some(1.0 - d_o / d_e)
}

/// All 21 multisets of five scores from {1, 2, 3}.
pub fn five_vote_multisets() -> Vec<[u8; 5]> {
    let mut out = Vec::new();
    for a in 1..=3 {
        for b in a..=3 {
            for c in b..=3 {
                for d in c..=3 {
                    for e in d..=3 {
                        out.push([a, b, c, d, e]);
                    }
                }
            }
        }
    }
    out
}

/// The most frequent score, ties going to the lowest.
pub fn majority_oracle(votes: &[u8]) -> u8 {
    let count = |s: u8| votes.iter().filter(|&&v| v == s).count();
    let top = votes.iter().map(|&v| count(v)).max().unwrap();
    *votes.iter().filter(|&&v| count(v) == top).min().unwrap()
}

/// Micro TP, FP and FN counted cell by cell over boolean label rows.
pub fn micro_counts(gold: &[Vec<bool>], pred: &[Vec<bool>]) -> (f64, f64, f64) {
    let (mut tp, mut fp, mut fn_) = (0.0, 0.0, 0.0);
    for (g, p) in gold.iter().zip(pred) {
        for (&g, &p) in g.iter().zip(p) {
            match (g, p) {
                (true, true) => tp += 1.0,
                (false, true) => fp += 1.0,
                (true, false) => fn_ += 1.0,
                _ => {}
            }
        }
    }
    (tp, fp, fn_)
}
