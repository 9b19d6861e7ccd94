//! Brute-force reference computations over raw rows.
//!
//! Nothing in here touches the library: counts are recounted row by row,
//! partitions come from restricted growth strings, and every score is
//! recomputed from scratch. Tests compare the library against these.

#![allow(dead_code)]

pub type Row = Vec<String>;

pub fn rows(raw: &[[&str; 3]]) -> Vec<Row> {
    raw.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
}

/// Number of rows in `cluster` that agree with `point` on every attribute in `attrs`.
pub fn count(cluster: &[Row], point: &[String], attrs: &[usize]) -> u64 {
    cluster
        .iter()
        .filter(|row| attrs.iter().all(|&a| row[a] == point[a]))
        .count() as u64
}

pub fn entropy_weight(counts: &[u64]) -> f64 {
    let k = counts.len();
    if k == 1 {
        return 1.0;
    }
    let total: u64 = counts.iter().sum();
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / total as f64;
            h -= p * p.ln();
        }
    }
    1.0 - h / (k as f64).ln()
}

/// (count in cluster i, m_i, f) for the nodeset of `point` restricted to `attrs`.
pub fn stats(clusters: &[Vec<Row>], i: usize, point: &[String], attrs: &[usize]) -> (u64, u64, f64) {
    let counts: Vec<u64> = clusters.iter().map(|c| count(c, point, attrs)).collect();
    let f = if counts.iter().sum::<u64>() == 0 {
        0.0
    } else {
        entropy_weight(&counts)
    };
    (counts[i], clusters[i].len() as u64, f)
}

/// Every set partition of `0..q`, generated from restricted growth strings.
pub fn set_partitions(q: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; q];
    loop {
        let blocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut parts = vec![Vec::new(); blocks];
        for (attr, &b) in rgs.iter().enumerate() {
            parts[b].push(attr);
        }
        out.push(parts);
        // next restricted growth string
        let mut j = q;
        loop {
            if j <= 1 {
                return out;
            }
            j -= 1;
            let prefix_max = rgs[..j].iter().copied().max().unwrap_or(0);
            if rgs[j] <= prefix_max {
                rgs[j] += 1;
                for x in rgs.iter_mut().skip(j + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// Per-partition (product, expected f, expected w) for the partitions whose
/// blocks all occur in cluster i. `keep` can veto blocks (pruning).
pub fn combination_scores(
    clusters: &[Vec<Row>],
    i: usize,
    point: &[String],
    keep: &dyn Fn(&[usize]) -> bool,
) -> Vec<(Vec<Vec<usize>>, f64, f64, f64)> {
    let q = point.len();
    let mut out = Vec::new();
    for parts in set_partitions(q) {
        let mut product = 1.0;
        let mut ef = 0.0;
        let mut ew = 0.0;
        let mut valid = true;
        for block in &parts {
            let (c, m, f) = stats(clusters, i, point, block);
            if c == 0 || !keep(block) {
                valid = false;
                break;
            }
            let share = block.len() as f64 / q as f64;
            product *= c as f64 / m as f64;
            ef += share * f;
            ew += share * (c as f64 / m as f64) * f;
        }
        if valid {
            out.push((parts, product, ef, ew));
        }
    }
    out
}

pub fn nnir_resemblance(clusters: &[Vec<Row>], i: usize, point: &[String]) -> f64 {
    combination_scores(clusters, i, point, &|_| true)
        .into_iter()
        .map(|(_, p, ef, _)| p * ef)
        .fold(0.0, f64::max)
}

pub fn maxsum_resemblance(clusters: &[Vec<Row>], i: usize, point: &[String]) -> f64 {
    combination_scores(clusters, i, point, &|_| true)
        .into_iter()
        .map(|(_, _, _, ew)| ew)
        .fold(0.0, f64::max)
}

pub fn nir_resemblance(clusters: &[Vec<Row>], i: usize, point: &[String]) -> f64 {
    (0..point.len())
        .map(|a| {
            let (c, m, f) = stats(clusters, i, point, &[a]);
            c as f64 / m as f64 * f
        })
        .sum()
}

pub fn argmax(scores: &[f64]) -> Option<usize> {
    let best = scores.iter().copied().fold(0.0, f64::max);
    if best <= 0.0 {
        return None;
    }
    scores.iter().position(|&s| s == best)
}
