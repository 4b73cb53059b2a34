//! Admissibility of edge-colourings: no monochromatic K_m and no rainbow
//! K_4, plus the colour-count bounds attached to those conditions.
//!
//! Witness searches are exact and deterministic: they return the
//! lexicographically least offending vertex set or prove absence. Bound
//! comparisons that decide test verdicts are done in exact integer
//! arithmetic (both sides squared) so no floating-point doubt remains.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bitset::Bitset;
use crate::colouring::EdgeColouring;
use crate::error::Error;

/// Fixed seed used by randomized sweeps unless the caller overrides it.
pub const DEFAULT_SEED: u64 = 1;

/// Outcome of the two witness searches plus the colour bound.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub mono_witness: Option<Vec<usize>>,
    pub rainbow_witness: Option<Vec<usize>>,
    pub colour_count: u32,
    pub theorem_bound: f64,
    pub m: u32,
}

impl AdmissibilityReport {
    /// Line-oriented text form: `admissible`, `colours`, `bound`, then the
    /// optional witnesses.
    pub fn to_report_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("admissible {}\n", self.admissible));
        out.push_str(&format!("colours {}\n", self.colour_count));
        out.push_str(&format!("bound {}\n", self.theorem_bound));
        if let Some(w) = &self.mono_witness {
            let ids: Vec<String> = w.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("mono {}\n", ids.join(" ")));
        }
        if let Some(w) = &self.rainbow_witness {
            let ids: Vec<String> = w.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("rainbow {}\n", ids.join(" ")));
        }
        out
    }
}

/// Finds the lexicographically least m-set of vertices whose induced edges
/// all share one colour, or proves there is none.
pub fn find_mono_clique(
    colouring: &EdgeColouring,
    m: u32,
) -> Result<Option<Vec<usize>>, Error> {
    if m < 3 {
        return Err(Error::InvalidM(m));
    }
    let n = colouring.n();
    let m = m as usize;
    if n < m {
        return Ok(None);
    }

    let mut edges_by_colour: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
    for u in 0..n {
        for v in u + 1..n {
            edges_by_colour.entry(colouring.colour(u, v)).or_default().push((u, v));
        }
    }
    let mut colours: Vec<u32> = edges_by_colour.keys().copied().collect();
    colours.sort_unstable();

    let mut best: Option<Vec<usize>> = None;
    for c in colours {
        let edges = &edges_by_colour[&c];
        if edges.len() < m * (m - 1) / 2 {
            continue;
        }
        let mut adj = vec![Bitset::new(n); n];
        for &(u, v) in edges {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        if let Some(clique) = lex_least_clique(&adj, m) {
            if best.as_ref().is_none_or(|b| clique < *b) {
                best = Some(clique);
            }
        }
    }

    if let Some(w) = &best {
        let c = colouring.colour(w[0], w[1]);
        for i in 0..m {
            for j in i + 1..m {
                assert_eq!(colouring.colour(w[i], w[j]), c, "witness is not monochromatic");
            }
        }
    }
    Ok(best)
}

/// Lexicographically least clique of size m in a bitset-adjacency graph.
fn lex_least_clique(adj: &[Bitset], m: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut all = Bitset::new(n);
    for v in 0..n {
        if !adj[v].is_empty() {
            all.insert(v);
        }
    }
    let mut current = Vec::with_capacity(m);
    if extend_clique(adj, &all, m, &mut current) {
        Some(current)
    } else {
        None
    }
}

fn extend_clique(adj: &[Bitset], candidates: &Bitset, m: usize, current: &mut Vec<usize>) -> bool {
    if current.len() == m {
        return true;
    }
    if candidates.count() < m - current.len() {
        return false;
    }
    let mut v = candidates.next_at_or_after(0);
    while let Some(u) = v {
        let mut next = candidates.intersection(&adj[u]);
        next.remove_below(u + 1);
        current.push(u);
        if extend_clique(adj, &next, m, current) {
            return true;
        }
        current.pop();
        v = candidates.next_at_or_after(u + 1);
    }
    false
}

/// Finds the lexicographically least 4-set whose six induced edges carry
/// six distinct colours, or proves there is none.
pub fn find_rainbow_k4(colouring: &EdgeColouring) -> Result<Option<Vec<usize>>, Error> {
    let n = colouring.n();
    if n < 4 {
        return Err(Error::TooFewVertices { needed: 4, got: n });
    }
    for a in 0..n - 3 {
        for b in a + 1..n - 2 {
            let cab = colouring.colour(a, b);
            for c in b + 1..n - 1 {
                let cac = colouring.colour(a, c);
                let cbc = colouring.colour(b, c);
                if cac == cab || cbc == cab || cbc == cac {
                    continue;
                }
                for d in c + 1..n {
                    let cad = colouring.colour(a, d);
                    let cbd = colouring.colour(b, d);
                    let ccd = colouring.colour(c, d);
                    let earlier = [cab, cac, cbc];
                    if earlier.contains(&cad) || earlier.contains(&cbd) || earlier.contains(&ccd)
                    {
                        continue;
                    }
                    if cad != cbd && cad != ccd && cbd != ccd {
                        return Ok(Some(vec![a, b, c, d]));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Runs both witness searches and attaches the colour count and bound.
pub fn is_admissible(colouring: &EdgeColouring, m: u32) -> Result<AdmissibilityReport, Error> {
    let n = colouring.n();
    let mono_witness = find_mono_clique(colouring, m)?;
    let rainbow_witness = if n >= 4 { find_rainbow_k4(colouring)? } else { None };
    Ok(AdmissibilityReport {
        admissible: mono_witness.is_none() && rainbow_witness.is_none(),
        mono_witness,
        rainbow_witness,
        colour_count: colouring.colour_count(),
        theorem_bound: theorem_bound(n, m)?,
        m,
    })
}

/// The colours used on edges between A and B and nowhere else.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaQuery {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// max(|A|, |B|), the k of the bound.
    pub k: usize,
    pub sigma: u32,
    /// k^{3/2} sqrt(m), in double precision.
    pub lemma_bound: f64,
}

impl SigmaQuery {
    /// Exact comparison sigma <= k^{3/2} sqrt(m), via sigma^2 <= k^3 m.
    pub fn holds(&self, m: u32) -> bool {
        (self.sigma as u128).pow(2) <= (self.k as u128).pow(3) * m as u128
    }
}

/// Counts the colours that appear on some A-B edge and on no other edge of
/// K_n.
pub fn sigma(
    colouring: &EdgeColouring,
    a: &[usize],
    b: &[usize],
    m: u32,
) -> Result<SigmaQuery, Error> {
    if m < 3 {
        return Err(Error::InvalidM(m));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = colouring.n();
    let mut side = vec![0u8; n];
    for &v in a {
        if v >= n {
            return Err(Error::SizeMismatch { expected: n, got: v + 1 });
        }
        side[v] = 1;
    }
    for &v in b {
        if v >= n {
            return Err(Error::SizeMismatch { expected: n, got: v + 1 });
        }
        if side[v] == 1 {
            return Err(Error::OverlappingSets);
        }
        side[v] = 2;
    }

    let mut total: HashMap<u32, u32> = HashMap::new();
    let mut across: HashMap<u32, u32> = HashMap::new();
    for u in 0..n {
        for v in u + 1..n {
            let c = colouring.colour(u, v);
            *total.entry(c).or_insert(0) += 1;
            if side[u] + side[v] == 3 {
                *across.entry(c).or_insert(0) += 1;
            }
        }
    }
    let sigma = across.iter().filter(|(c, count)| total[c] == **count).count() as u32;
    let k = a.len().max(b.len());
    let lemma_bound = (k as f64).powf(1.5) * (m as f64).sqrt();
    Ok(SigmaQuery { a: a.to_vec(), b: b.to_vec(), k, sigma, lemma_bound })
}

/// Checks sigma_c(A,B) <= k^{3/2} sqrt(m) on an admissible colouring.
/// Errors if the colouring is not admissible for m; the inequality is not
/// claimed in that case.
pub fn check_lemma_bound(
    colouring: &EdgeColouring,
    a: &[usize],
    b: &[usize],
    m: u32,
) -> Result<bool, Error> {
    let report = is_admissible(colouring, m)?;
    if !report.admissible {
        return Err(Error::NotAdmissible);
    }
    Ok(sigma(colouring, a, b, m)?.holds(m))
}

/// The colour-count bound n^{3/2} sqrt(2m).
pub fn theorem_bound(n: usize, m: u32) -> Result<f64, Error> {
    if m < 3 {
        return Err(Error::InvalidM(m));
    }
    if n < 1 {
        return Err(Error::TooFewVertices { needed: 1, got: n });
    }
    Ok((n as f64).powf(1.5) * (2.0 * m as f64).sqrt())
}

/// Exact form of `colours <= n^{3/2} sqrt(2m)`: colours^2 <= 2 m n^3.
pub fn theorem_bound_holds(colours: u32, n: usize, m: u32) -> bool {
    (colours as u128).pow(2) <= 2 * m as u128 * (n as u128).pow(3)
}

/// Checks that C(n,2) < n^{3/2} sqrt(2m) for every n up to 21, in exact
/// integer arithmetic: C(n,2)^2 < 2 m n^3.
pub fn base_case_check(m: u32) -> Result<bool, Error> {
    if m < 3 {
        return Err(Error::InvalidM(m));
    }
    Ok((1..=21u128).all(|n| {
        let pairs = n * (n - 1) / 2;
        pairs * pairs < 2 * m as u128 * n.pow(3)
    }))
}

/// Result of a seeded random sweep of sigma queries.
#[derive(Clone, Debug)]
pub struct LemmaSweep {
    pub samples: u32,
    pub all_hold: bool,
    /// The query with the largest sigma seen.
    pub max_sigma: Option<SigmaQuery>,
}

/// Draws `samples` random disjoint nonempty vertex-set pairs and checks the
/// sigma bound on each. The colouring must be admissible for m.
pub fn lemma_sweep(
    colouring: &EdgeColouring,
    m: u32,
    samples: u32,
    seed: u64,
) -> Result<LemmaSweep, Error> {
    let report = is_admissible(colouring, m)?;
    if !report.admissible {
        return Err(Error::NotAdmissible);
    }
    let n = colouring.n();
    if n < 2 {
        return Err(Error::TooFewVertices { needed: 2, got: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all_hold = true;
    let mut max_sigma: Option<SigmaQuery> = None;
    for _ in 0..samples {
        let a_size = rng.gen_range(1..n);
        let b_size = rng.gen_range(1..=n - a_size);
        let mut vertices: Vec<usize> = (0..n).collect();
        // partial Fisher-Yates: enough positions for both sets
        for i in 0..(a_size + b_size) {
            let j = rng.gen_range(i..n);
            vertices.swap(i, j);
        }
        let a: Vec<usize> = vertices[..a_size].to_vec();
        let b: Vec<usize> = vertices[a_size..a_size + b_size].to_vec();
        let q = sigma(colouring, &a, &b, m)?;
        all_hold &= q.holds(m);
        if max_sigma.as_ref().is_none_or(|w| q.sigma > w.sigma) {
            max_sigma = Some(q);
        }
    }
    Ok(LemmaSweep { samples, all_hold, max_sigma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{expand_words_cyclic, WordPair};

    fn figure_one() -> EdgeColouring {
        let pair = WordPair::parse(2, "*001*1010100*", "*1010000*101*").unwrap();
        expand_words_cyclic(&pair).unwrap().colouring
    }

    #[test]
    fn mono_k4_found() {
        let c = EdgeColouring::from_fn(4, 0, |_, _| 7);
        assert_eq!(find_mono_clique(&c, 4).unwrap(), Some(vec![0, 1, 2, 3]));
    }

    #[test]
    fn rainbow_k4_found() {
        let mut next = 0;
        let c = EdgeColouring::from_fn(4, 0, |_, _| {
            next += 1;
            next - 1
        });
        assert_eq!(find_rainbow_k4(&c).unwrap(), Some(vec![0, 1, 2, 3]));
        // all distinct colours leave no mono K_3
        assert_eq!(find_mono_clique(&c, 3).unwrap(), None);
    }

    #[test]
    fn figure_one_admissible_for_m4() {
        let report = is_admissible(&figure_one(), 4).unwrap();
        assert!(report.admissible);
        assert_eq!(report.mono_witness, None);
        assert_eq!(report.rainbow_witness, None);
        assert_eq!(report.colour_count, 23);
        assert!((report.theorem_bound - 148.162).abs() < 0.01);
    }

    #[test]
    fn figure_one_m3_verdict() {
        // golden: colour 0 contains a triangle, so m=3 fails; the least
        // witness is {0, 2, 9} (two consecutive points and a line avoiding
        // both).
        let witness = find_mono_clique(&figure_one(), 3).unwrap();
        assert_eq!(witness, Some(vec![0, 2, 9]));
        let report = is_admissible(&figure_one(), 3).unwrap();
        assert!(!report.admissible);
    }

    #[test]
    fn invalid_m_rejected() {
        let c = figure_one();
        assert_eq!(find_mono_clique(&c, 2).unwrap_err(), Error::InvalidM(2));
        assert_eq!(theorem_bound(10, 1).unwrap_err(), Error::InvalidM(1));
        let small = EdgeColouring::new(3, 0);
        assert!(matches!(
            find_rainbow_k4(&small).unwrap_err(),
            Error::TooFewVertices { needed: 4, got: 3 }
        ));
    }

    #[test]
    fn sigma_points_vs_lines() {
        let c = figure_one();
        let a: Vec<usize> = (0..14).step_by(2).collect();
        let b: Vec<usize> = (1..14).step_by(2).collect();
        let q = sigma(&c, &a, &b, 4).unwrap();
        assert_eq!(q.sigma, 21);
        assert_eq!(q.k, 7);
        assert!((q.lemma_bound - 37.0405).abs() < 0.001);
        assert!(q.holds(4));
        assert!(check_lemma_bound(&c, &a, &b, 4).unwrap());
    }

    #[test]
    fn sigma_zero_when_colours_repeat_elsewhere() {
        let c = figure_one();
        // a single palette edge: colour 0 appears on many other edges
        let q = sigma(&c, &[0], &[2], 4).unwrap();
        assert_eq!(q.sigma, 0);
    }

    #[test]
    fn sigma_rejects_bad_sets() {
        let c = figure_one();
        assert_eq!(sigma(&c, &[0, 1], &[1, 2], 4).unwrap_err(), Error::OverlappingSets);
        assert_eq!(sigma(&c, &[], &[1], 4).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn lemma_precondition_enforced() {
        let mono = EdgeColouring::from_fn(5, 0, |_, _| 0);
        assert_eq!(
            check_lemma_bound(&mono, &[0, 1], &[2, 3], 4).unwrap_err(),
            Error::NotAdmissible
        );
    }

    #[test]
    fn lemma_sweep_on_figure_one() {
        let sweep = lemma_sweep(&figure_one(), 4, 200, DEFAULT_SEED).unwrap();
        assert_eq!(sweep.samples, 200);
        assert!(sweep.all_hold);
        assert!(sweep.max_sigma.unwrap().sigma <= 21);
    }

    #[test]
    fn theorem_bound_values() {
        assert!((theorem_bound(14, 4).unwrap() - 148.1621).abs() < 0.001);
        let b21 = theorem_bound(21, 3).unwrap();
        assert!((b21 - 235.73).abs() < 0.01);
        assert!(b21 > 210.0); // C(21,2)
        assert!((theorem_bound(1, 3).unwrap() - 6.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn base_cases_hold() {
        for m in [3, 4, 5, 100] {
            assert!(base_case_check(m).unwrap(), "m={m}");
        }
        assert_eq!(base_case_check(2).unwrap_err(), Error::InvalidM(2));
    }

    #[test]
    fn theorem_bound_exact_comparison() {
        assert!(theorem_bound_holds(23, 14, 4));
        assert!(!theorem_bound_holds(149, 14, 4));
        // boundary sanity: bound for (14,4) is ~148.16
        assert!(theorem_bound_holds(148, 14, 4));
    }

    /// Independent oracle: check all m-subsets directly.
    fn brute_mono(colouring: &EdgeColouring, m: usize) -> Option<Vec<usize>> {
        let n = colouring.n();
        let mut subset: Vec<usize> = (0..m).collect();
        loop {
            let mut same = true;
            let c = colouring.colour(subset[0], subset[1]);
            'pairs: for i in 0..m {
                for j in i + 1..m {
                    if colouring.colour(subset[i], subset[j]) != c {
                        same = false;
                        break 'pairs;
                    }
                }
            }
            if same {
                return Some(subset);
            }
            // next combination
            let mut i = m;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if subset[i] != i + n - m {
                    break;
                }
            }
            subset[i] += 1;
            for j in i + 1..m {
                subset[j] = subset[j - 1] + 1;
            }
        }
    }

    fn brute_rainbow(colouring: &EdgeColouring) -> Option<Vec<usize>> {
        let n = colouring.n();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        let cols = [
                            colouring.colour(a, b),
                            colouring.colour(a, c),
                            colouring.colour(a, d),
                            colouring.colour(b, c),
                            colouring.colour(b, d),
                            colouring.colour(c, d),
                        ];
                        let distinct =
                            (0..6).all(|i| (i + 1..6).all(|j| cols[i] != cols[j]));
                        if distinct {
                            return Some(vec![a, b, c, d]);
                        }
                    }
                }
            }
        }
        None
    }

    #[test]
    fn witness_search_matches_brute_force() {
        // seeded random colourings on up to 7 vertices
        let mut state = 0xfeed_5eed_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as u32
        };
        for n in 4..=7usize {
            for palette in [1, 2, 3, 6] {
                for _ in 0..40 {
                    let c = EdgeColouring::from_fn(n, 0, |_, _| next() % palette);
                    for m in [3u32, 4] {
                        if n >= m as usize {
                            assert_eq!(
                                find_mono_clique(&c, m).unwrap(),
                                brute_mono(&c, m as usize),
                                "mono n={n} palette={palette} m={m}"
                            );
                        }
                    }
                    assert_eq!(
                        find_rainbow_k4(&c).unwrap(),
                        brute_rainbow(&c),
                        "rainbow n={n} palette={palette}"
                    );
                }
            }
        }
    }

    #[test]
    fn admissibility_monotone_in_m() {
        let mut state = 0x1234_5678_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as u32
        };
        for _ in 0..60 {
            let c = EdgeColouring::from_fn(7, 0, |_, _| next() % 4);
            for m in 3..6u32 {
                let here = is_admissible(&c, m).unwrap().admissible;
                let next_m = is_admissible(&c, m + 1).unwrap().admissible;
                // a mono K_{m+1} contains a mono K_m
                assert!(!here || next_m, "m={m}");
            }
        }
    }

    #[test]
    fn report_serialization() {
        let report = is_admissible(&figure_one(), 4).unwrap();
        let text = report.to_report_string();
        assert!(text.starts_with("admissible true\ncolours 23\nbound 148.162"));
        let bad = is_admissible(&figure_one(), 3).unwrap();
        assert!(bad.to_report_string().contains("\nmono 0 2 9\n"));
    }
}
