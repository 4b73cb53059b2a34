//! Search engines: backtracking over rotational word pairs, exact brute
//! force for the maximum admissible colour count on tiny complete graphs,
//! and a DIMACS CNF export of the two-symbol word search.
//!
//! The word search enumerates assignments of palette symbols to the free
//! symmetry classes of word positions (star positions are fixed by the
//! labeling). A partial assignment is pruned as soon as some fully decided
//! vertex set realizes a monochromatic K_m, or (for palettes of three or
//! more symbols) a rainbow K_4. Work is split across workers by fixed-depth
//! assignment prefixes; results are order-normalized so the outcome does
//! not depend on the worker count.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::admissibility::{is_admissible, AdmissibilityReport};
use crate::colouring::{expand_words, expand_words_cyclic, EdgeColouring, WordPair, WordSymbol};
use crate::error::Error;
use crate::plane::{rotational_system, RotationalSystem};

/// Default backtracking budget.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// Largest plane order the word search accepts.
pub const SEARCH_Q_CAP: u64 = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Stop at the first solution in depth-first order.
    First,
    /// Collect every solution.
    All,
    /// Count solutions without materializing them.
    Count,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub q: u64,
    pub m: u32,
    pub palette: u32,
    pub mode: SearchMode,
    pub node_budget: Option<u64>,
    pub threads: usize,
}

impl SearchConfig {
    pub fn new(q: u64) -> Self {
        SearchConfig {
            q,
            m: 4,
            palette: 2,
            mode: SearchMode::First,
            node_budget: Some(DEFAULT_NODE_BUDGET),
            threads: 1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Solutions in normalized (lexicographic) order; empty in Count mode.
    pub solutions: Vec<WordPair>,
    pub solution_count: u64,
    pub nodes_explored: u64,
    /// True when the whole space was enumerated within budget.
    pub exhausted: bool,
}

/// The free symmetry classes of word positions for a labeling.
///
/// Word symmetry ties positions together: for even offsets each word
/// mirrors itself, for odd offsets the first word mirrors the second. Each
/// class lists its member positions as (word, offset) pairs; classes are
/// sorted by their smallest (offset, word) member, and stars are excluded.
#[derive(Clone, Debug)]
pub struct SymmetryClasses {
    n: usize,
    classes: Vec<Vec<(u8, usize)>>,
    class_of: [Vec<Option<usize>>; 2],
}

impl SymmetryClasses {
    pub fn of_system(sys: &RotationalSystem) -> Self {
        let n = sys.levi.n();
        let order = sys.labeling.order();
        let star = |word: usize, d: usize| -> bool {
            sys.levi.adjacent(order[word], order[(word + d) % n])
        };

        let mut keyed: Vec<(usize, u8, Vec<(u8, usize)>)> = Vec::new();
        for d in 1..n {
            if d % 2 == 0 {
                if d <= n - d {
                    for word in 0..2u8 {
                        if !star(word as usize, d) {
                            let mut members = vec![(word, d)];
                            if n - d != d {
                                members.push((word, n - d));
                            }
                            keyed.push((d, word, members));
                        }
                    }
                }
            } else if !star(0, d) {
                // (0, d) pairs with (1, n-d); key by the least member
                let members = if d <= n - d {
                    vec![(0, d), (1, n - d)]
                } else {
                    vec![(1, n - d), (0, d)]
                };
                let (key_d, key_w) = (members[0].1, members[0].0);
                if key_w == 0 || key_d != d {
                    // emit each odd class once, from its w0 side
                    keyed.push((key_d, key_w, members));
                }
            }
        }
        keyed.sort_by_key(|(d, w, _)| (*d, *w));
        keyed.dedup_by_key(|(d, w, _)| (*d, *w));

        let mut class_of = [vec![None; n], vec![None; n]];
        let mut classes = Vec::with_capacity(keyed.len());
        for (idx, (_, _, members)) in keyed.into_iter().enumerate() {
            for &(w, d) in &members {
                class_of[w as usize][d] = Some(idx);
            }
            classes.push(members);
        }
        SymmetryClasses { n, classes, class_of }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn members(&self, class: usize) -> &[(u8, usize)] {
        &self.classes[class]
    }

    /// Class of the K_n pair (i, j), or None for an incidence edge.
    pub fn class_of_pair(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = (i.min(j), i.max(j));
        self.class_of[i % 2][j - i]
    }
}

/// The free symmetry classes of the constructed labeling for q.
pub fn symmetry_classes(q: u64) -> Result<SymmetryClasses, Error> {
    Ok(SymmetryClasses::of_system(&rotational_system(q)?))
}

struct Problem {
    sys: RotationalSystem,
    classes: SymmetryClasses,
    q: u64,
    m: u32,
    t: u32,
    /// bucket[idx] = distinct class lists of the m-sets decided at idx
    mono_buckets: Vec<Vec<Vec<usize>>>,
    /// bucket[idx] = distinct class lists of the 4-sets decided at idx
    rainbow_buckets: Vec<Vec<Vec<usize>>>,
}

impl Problem {
    fn build(config: &SearchConfig) -> Result<Self, Error> {
        if config.q > SEARCH_Q_CAP {
            return Err(Error::PlaneTooLarge { q: config.q, cap: SEARCH_Q_CAP });
        }
        if config.m < 3 {
            return Err(Error::InvalidM(config.m));
        }
        if config.palette == 0 || config.palette > 36 {
            return Err(Error::BadPalette(config.palette));
        }
        let sys = rotational_system(config.q)?;
        let classes = SymmetryClasses::of_system(&sys);
        let n = classes.n();
        let class_count = classes.count();

        let mut mono_buckets = vec![Vec::new(); class_count];
        let mut rainbow_buckets = vec![Vec::new(); class_count];

        // m-sets whose edges all carry palette symbols
        for_each_combination(n, config.m as usize, |set| {
            let mut cls: Vec<usize> = Vec::with_capacity(set.len() * (set.len() - 1) / 2);
            for (ai, &a) in set.iter().enumerate() {
                for &b in &set[ai + 1..] {
                    match classes.class_of_pair(a, b) {
                        Some(c) => cls.push(c),
                        None => return, // contains an incidence edge: never monochromatic
                    }
                }
            }
            cls.sort_unstable();
            cls.dedup();
            let last = *cls.last().expect("m >= 3 gives at least one edge");
            mono_buckets[last].push(cls);
        });

        // 4-sets that could become rainbow: only relevant for t >= 3, since
        // every 4-set has at least three palette edges (girth 6) and three
        // edges over two symbols always repeat one.
        for_each_combination(n, 4, |set| {
            let mut cls: Vec<usize> = Vec::new();
            let mut stars = 0usize;
            for (ai, &a) in set.iter().enumerate() {
                for &b in &set[ai + 1..] {
                    match classes.class_of_pair(a, b) {
                        Some(c) => cls.push(c),
                        None => stars += 1,
                    }
                }
            }
            assert!(
                stars <= 3,
                "a 4-set with more than three incidence edges would be a 4-cycle"
            );
            if config.palette < 3 {
                return;
            }
            cls.sort_unstable();
            let distinct = cls.windows(2).all(|w| w[0] != w[1]);
            if !distinct {
                return; // two edges share a class: never rainbow
            }
            let last = *cls.last().expect("at most three incidence edges in a 4-set");
            rainbow_buckets[last].push(cls);
        });

        Ok(Problem {
            sys,
            classes,
            q: config.q,
            m: config.m,
            t: config.palette,
            mono_buckets,
            rainbow_buckets,
        })
    }

    /// Does assigning class `idx` complete a violation?
    fn violates(&self, assign: &[u8], idx: usize) -> bool {
        for set in &self.mono_buckets[idx] {
            let first = assign[set[0]];
            if set.iter().all(|&c| assign[c] == first) {
                return true;
            }
        }
        for set in &self.rainbow_buckets[idx] {
            let pairwise_distinct = set
                .iter()
                .enumerate()
                .all(|(i, &a)| set[i + 1..].iter().all(|&b| assign[a] != assign[b]));
            if pairwise_distinct {
                return true;
            }
        }
        false
    }

    fn words_for(&self, assign: &[u8]) -> WordPair {
        let n = self.classes.n();
        let mut w0 = Vec::with_capacity(n - 1);
        let mut w1 = Vec::with_capacity(n - 1);
        for d in 1..n {
            w0.push(match self.classes.class_of[0][d] {
                Some(c) => WordSymbol::Palette(assign[c]),
                None => WordSymbol::Star,
            });
            w1.push(match self.classes.class_of[1][d] {
                Some(c) => WordSymbol::Palette(assign[c]),
                None => WordSymbol::Star,
            });
        }
        WordPair::from_symbols(self.q, w0, w1)
            .expect("class assignments always produce structurally valid words")
    }

    /// Full re-verification of an emitted solution: it must expand to a
    /// special, rotational, admissible colouring.
    fn verify_solution(&self, pair: &WordPair) {
        let sc = expand_words(&self.sys.levi, &self.sys.labeling, pair)
            .expect("solution words must expand on the search labeling");
        let report =
            is_admissible(&sc.colouring, self.m).expect("admissibility check cannot fail here");
        assert!(report.admissible, "search emitted a non-admissible solution: {pair:?}");
        assert_eq!(sc.is_special(), Ok(true), "search emitted a non-special solution");
    }
}

/// Iterates all k-subsets of 0..n in lexicographic order.
fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut set: Vec<usize> = (0..k).collect();
    loop {
        f(&set);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if set[i] != i + n - k {
                break;
            }
        }
        set[i] += 1;
        for j in i + 1..k {
            set[j] = set[j - 1] + 1;
        }
    }
}

/// A resumable search state: which fixed-depth prefixes have been fully
/// explored, plus the accumulated counters and solutions.
#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub q: u64,
    pub m: u32,
    pub palette: u32,
    pub prefix_depth: usize,
    pub nodes: u64,
    pub solution_count: u64,
    /// Indices into the deterministic prefix enumeration.
    pub completed: Vec<usize>,
    pub solutions: Vec<WordPair>,
}

impl Checkpoint {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("search-checkpoint 1\n");
        out.push_str(&format!("q {}\n", self.q));
        out.push_str(&format!("m {}\n", self.m));
        out.push_str(&format!("palette {}\n", self.palette));
        out.push_str(&format!("prefix-depth {}\n", self.prefix_depth));
        out.push_str(&format!("nodes {}\n", self.nodes));
        out.push_str(&format!("count {}\n", self.solution_count));
        let done: Vec<String> = self.completed.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!("completed {}\n", done.join(" ")));
        for s in &self.solutions {
            out.push_str(&format!("solution {} {} {}\n", s.q(), s.w0_string(), s.w1_string()));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, Error> {
        let mut lines = text.lines().enumerate();
        let (no, header) =
            lines.next().ok_or(Error::Parse { line: 0, msg: "empty checkpoint".into() })?;
        if header != "search-checkpoint 1" {
            return Err(Error::Parse { line: no + 1, msg: "bad checkpoint header".into() });
        }
        let mut fields: HashMap<String, String> = HashMap::new();
        let mut solutions = Vec::new();
        for (no, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (tag, rest) = line
                .split_once(' ')
                .ok_or(Error::Parse { line: no + 1, msg: format!("bad line {line:?}") })?;
            if tag == "solution" {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(Error::Parse { line: no + 1, msg: "bad solution line".into() });
                }
                let q: u64 = parts[0].parse().map_err(|_| Error::Parse {
                    line: no + 1,
                    msg: "bad solution q".into(),
                })?;
                solutions.push(WordPair::parse(q, parts[1], parts[2])?);
            } else {
                fields.insert(tag.to_string(), rest.to_string());
            }
        }
        let get = |key: &str| -> Result<String, Error> {
            fields.get(key).cloned().ok_or(Error::Parse { line: 0, msg: format!("missing {key}") })
        };
        let parse_u64 = |key: &str| -> Result<u64, Error> {
            get(key)?.parse().map_err(|_| Error::Parse { line: 0, msg: format!("bad {key}") })
        };
        let completed = match fields.get("completed") {
            Some(s) if !s.trim().is_empty() => s
                .split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| Error::Parse { line: 0, msg: "bad completed".into() })
                })
                .collect::<Result<Vec<usize>, Error>>()?,
            _ => Vec::new(),
        };
        Ok(Checkpoint {
            q: parse_u64("q")?,
            m: parse_u64("m")? as u32,
            palette: parse_u64("palette")? as u32,
            prefix_depth: parse_u64("prefix-depth")? as usize,
            nodes: parse_u64("nodes")?,
            solution_count: parse_u64("count")?,
            completed,
            solutions,
        })
    }
}

/// Runs the rotational word search.
pub fn search_rotational(config: &SearchConfig) -> Result<SearchOutcome, Error> {
    Ok(search_with_checkpoint(config, None)?.0)
}

/// Runs the search, optionally resuming from a checkpoint; the returned
/// checkpoint reflects the final state and can seed a later resume.
pub fn search_with_checkpoint(
    config: &SearchConfig,
    prior: Option<&Checkpoint>,
) -> Result<(SearchOutcome, Checkpoint), Error> {
    let problem = Problem::build(config)?;
    let class_count = problem.classes.count();
    let threads = config.threads.max(1);

    // fixed-depth prefix split: enough tasks to feed the workers
    let mut prefix_depth = 0usize;
    let mut tasks = 1u64;
    while prefix_depth < class_count && tasks < 8 * threads as u64 {
        tasks = tasks.saturating_mul(config.palette as u64);
        prefix_depth += 1;
    }

    if let Some(cp) = prior {
        if (cp.q, cp.m, cp.palette, cp.prefix_depth)
            != (config.q, config.m, config.palette, prefix_depth)
        {
            return Err(Error::Parse {
                line: 0,
                msg: "checkpoint does not match this configuration".into(),
            });
        }
    }

    let nodes = AtomicU64::new(prior.map_or(0, |cp| cp.nodes));
    let budget_hit = AtomicBool::new(false);
    let budget = config.node_budget;
    let count_node = |by: u64| -> bool {
        // returns false when over budget
        let seen = nodes.fetch_add(by, Ordering::Relaxed) + by;
        match budget {
            Some(b) if seen > b => {
                budget_hit.store(true, Ordering::Relaxed);
                false
            }
            _ => true,
        }
    };

    // deterministic prefix enumeration with the same pruning as the search
    let mut prefixes: Vec<Vec<u8>> = Vec::new();
    {
        let mut assign: Vec<u8> = Vec::with_capacity(prefix_depth);
        enumerate_prefixes(&problem, prefix_depth, &mut assign, &mut prefixes, &count_node);
    }

    let skip: std::collections::HashSet<usize> =
        prior.map_or_else(Default::default, |cp| cp.completed.iter().copied().collect());

    let task_results: Vec<(usize, TaskResult)> = if config.mode == SearchMode::First {
        // depth-first order, sequential, stop at the first solution
        let mut out = Vec::new();
        for (idx, prefix) in prefixes.iter().enumerate() {
            if skip.contains(&idx) || budget_hit.load(Ordering::Relaxed) {
                continue;
            }
            let r = run_task(&problem, config, prefix, &count_node);
            let found = r.count > 0;
            out.push((idx, r));
            if found {
                break;
            }
        }
        out
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        pool.install(|| {
            prefixes
                .par_iter()
                .enumerate()
                .filter(|(idx, _)| !skip.contains(idx))
                .map(|(idx, prefix)| (idx, run_task(&problem, config, prefix, &count_node)))
                .collect()
        })
    };

    // the outcome reports everything found; the checkpoint keeps only fully
    // explored subtrees so a resume cannot double-count
    let mut solutions: Vec<WordPair> = prior.map_or_else(Vec::new, |cp| cp.solutions.clone());
    let mut solution_count: u64 = prior.map_or(0, |cp| cp.solution_count);
    let mut cp_solutions = solutions.clone();
    let mut cp_count = solution_count;
    let mut completed: Vec<usize> = prior.map_or_else(Vec::new, |cp| cp.completed.clone());
    for (idx, r) in task_results {
        solution_count += r.count;
        solutions.extend(r.solutions.iter().cloned());
        if r.complete {
            completed.push(idx);
            cp_count += r.count;
            cp_solutions.extend(r.solutions);
        }
    }
    completed.sort_unstable();
    solutions.sort();
    cp_solutions.sort();
    if config.mode == SearchMode::First {
        solutions.truncate(1);
        solution_count = solution_count.min(1);
    }

    let exhausted =
        !budget_hit.load(Ordering::Relaxed) && completed.len() == prefixes.len();

    let outcome = SearchOutcome {
        solution_count,
        solutions: if config.mode == SearchMode::Count { Vec::new() } else { solutions },
        nodes_explored: nodes.load(Ordering::Relaxed),
        exhausted,
    };
    let checkpoint = Checkpoint {
        q: config.q,
        m: config.m,
        palette: config.palette,
        prefix_depth,
        nodes: outcome.nodes_explored,
        solution_count: cp_count,
        completed,
        solutions: cp_solutions,
    };
    Ok((outcome, checkpoint))
}

fn enumerate_prefixes(
    problem: &Problem,
    depth: usize,
    assign: &mut Vec<u8>,
    out: &mut Vec<Vec<u8>>,
    count_node: &impl Fn(u64) -> bool,
) {
    if assign.len() == depth {
        out.push(assign.clone());
        return;
    }
    for s in 0..problem.t as u8 {
        if !count_node(1) {
            return;
        }
        assign.push(s);
        if !problem.violates(assign, assign.len() - 1) {
            enumerate_prefixes(problem, depth, assign, out, count_node);
        }
        assign.pop();
    }
}

struct TaskResult {
    solutions: Vec<WordPair>,
    count: u64,
    complete: bool,
}

fn run_task(
    problem: &Problem,
    config: &SearchConfig,
    prefix: &[u8],
    count_node: &impl Fn(u64) -> bool,
) -> TaskResult {
    let mut assign = prefix.to_vec();
    let mut result = TaskResult { solutions: Vec::new(), count: 0, complete: true };
    dfs(problem, config, &mut assign, &mut result, count_node);
    result
}

fn dfs(
    problem: &Problem,
    config: &SearchConfig,
    assign: &mut Vec<u8>,
    result: &mut TaskResult,
    count_node: &impl Fn(u64) -> bool,
) -> bool {
    // returns false to stop (budget or first-solution)
    if assign.len() == problem.classes.count() {
        let pair = problem.words_for(assign);
        problem.verify_solution(&pair);
        result.count += 1;
        if config.mode != SearchMode::Count {
            result.solutions.push(pair);
        }
        return config.mode != SearchMode::First;
    }
    for s in 0..config.palette as u8 {
        if !count_node(1) {
            result.complete = false;
            return false;
        }
        assign.push(s);
        let keep_going = problem.violates(assign, assign.len() - 1)
            || dfs(problem, config, assign, result, count_node);
        assign.pop();
        if !keep_going {
            result.complete = false;
            return false;
        }
    }
    true
}

/// Expands a word pair on its own star offsets and reports admissibility,
/// speciality, rotationality, colour count and the reversal property.
#[derive(Clone, Debug)]
pub struct WordReport {
    pub admissibility: AdmissibilityReport,
    pub special: bool,
    pub rotational: bool,
    pub colour_count: u32,
    pub reverse_pair: bool,
}

pub fn verify_words(q: u64, words: &WordPair, m: u32) -> Result<WordReport, Error> {
    if words.q() != q {
        return Err(Error::SizeMismatch { expected: q as usize, got: words.q() as usize });
    }
    let sc = expand_words_cyclic(words)?;
    let admissibility = is_admissible(&sc.colouring, m)?;
    let special = sc.is_special()?;
    let rotational = sc.words().is_ok();
    Ok(WordReport {
        special,
        rotational,
        colour_count: sc.colouring.colour_count(),
        reverse_pair: words.is_reverse_pair(),
        admissibility,
    })
}

/// Exact maximum number of colours of an admissible colouring, over all
/// colourings up to colour permutation, with a witness attaining it.
#[derive(Clone, Debug)]
pub struct MaxrOutcome {
    pub value: u32,
    pub witness: EdgeColouring,
}

/// Enumerates edge-set partitions as restricted-growth strings over the
/// row-major edge order, pruning branches that already realize a
/// violation or cannot beat the best colour count seen so far. The witness
/// is the lexicographically least canonical colouring attaining the
/// maximum.
pub fn brute_force_maxr(n: usize, m: u32) -> Result<MaxrOutcome, Error> {
    brute_force_maxr_threaded(n, m, 1)
}

pub fn brute_force_maxr_threaded(n: usize, m: u32, threads: usize) -> Result<MaxrOutcome, Error> {
    if !(3..=6).contains(&n) {
        return Err(Error::BruteForceRange(n));
    }
    if m < 3 {
        return Err(Error::InvalidM(m));
    }
    let edge_count = n * (n - 1) / 2;
    let edge_index = |u: usize, v: usize| -> usize {
        let (u, v) = (u.min(v), u.max(v));
        u * n - u * (u + 1) / 2 + v - u - 1
    };

    // vertex sets bucketed by the edge that completes them
    let mut mono_buckets: Vec<Vec<Vec<usize>>> = vec![Vec::new(); edge_count];
    if n >= m as usize {
        for_each_combination(n, m as usize, |set| {
            let mut edges = Vec::new();
            for (ai, &a) in set.iter().enumerate() {
                for &b in &set[ai + 1..] {
                    edges.push(edge_index(a, b));
                }
            }
            edges.sort_unstable();
            let last = *edges.last().unwrap();
            mono_buckets[last].push(edges);
        });
    }
    let mut rainbow_buckets: Vec<Vec<Vec<usize>>> = vec![Vec::new(); edge_count];
    if n >= 4 {
        for_each_combination(n, 4, |set| {
            let mut edges = Vec::new();
            for (ai, &a) in set.iter().enumerate() {
                for &b in &set[ai + 1..] {
                    edges.push(edge_index(a, b));
                }
            }
            edges.sort_unstable();
            let last = *edges.last().unwrap();
            rainbow_buckets[last].push(edges);
        });
    }

    let violates = |colours: &[u8], e: usize| -> bool {
        for set in &mono_buckets[e] {
            let first = colours[set[0]];
            if set.iter().all(|&i| colours[i] == first) {
                return true;
            }
        }
        for set in &rainbow_buckets[e] {
            let distinct = set
                .iter()
                .enumerate()
                .all(|(i, &a)| set[i + 1..].iter().all(|&b| colours[a] != colours[b]));
            if distinct {
                return true;
            }
        }
        false
    };

    let best_seen = AtomicU64::new(0);

    // prefix split over the first few edges
    let prefix_depth = edge_count.min(6);
    let mut prefixes: Vec<(Vec<u8>, u8)> = Vec::new();
    {
        let mut colours: Vec<u8> = Vec::new();
        fn generate(
            depth: usize,
            used: u8,
            colours: &mut Vec<u8>,
            violates: &impl Fn(&[u8], usize) -> bool,
            out: &mut Vec<(Vec<u8>, u8)>,
        ) {
            if colours.len() == depth {
                out.push((colours.clone(), used));
                return;
            }
            for c in 0..=used {
                colours.push(c);
                if !violates(colours, colours.len() - 1) {
                    generate(depth, used.max(c + 1), colours, violates, out);
                }
                colours.pop();
            }
        }
        generate(prefix_depth, 0, &mut colours, &violates, &mut prefixes);
    }

    let explore = |prefix: &(Vec<u8>, u8)| -> Option<(u32, Vec<u8>)> {
        let mut colours = prefix.0.clone();
        colours.resize(edge_count, 0);
        let mut local: Option<(u32, Vec<u8>)> = None;
        dfs_maxr(
            &mut colours,
            prefix.0.len(),
            prefix.1,
            edge_count,
            &violates,
            &best_seen,
            &mut local,
        );
        local
    };

    let locals: Vec<Option<(u32, Vec<u8>)>> = if threads.max(1) == 1 {
        prefixes.iter().map(explore).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        pool.install(|| prefixes.par_iter().map(explore).collect())
    };

    let mut best: Option<(u32, Vec<u8>)> = None;
    for (value, witness) in locals.into_iter().flatten() {
        let better = match &best {
            None => true,
            Some((v, w)) => value > *v || (value == *v && witness < *w),
        };
        if better {
            best = Some((value, witness));
        }
    }
    let (value, leaf) = best.expect("the all-zero prefix always yields some admissible colouring");

    let witness = {
        let mut c = EdgeColouring::new(n, 0);
        for u in 0..n {
            for v in u + 1..n {
                c.set_colour(u, v, leaf[edge_index(u, v)] as u32);
            }
        }
        c
    };
    debug_assert!(is_admissible(&witness, m).map(|r| r.admissible).unwrap_or(false));
    Ok(MaxrOutcome { value, witness })
}

#[allow(clippy::too_many_arguments)]
fn dfs_maxr(
    colours: &mut Vec<u8>,
    e: usize,
    used: u8,
    edge_count: usize,
    violates: &impl Fn(&[u8], usize) -> bool,
    best_seen: &AtomicU64,
    local: &mut Option<(u32, Vec<u8>)>,
) {
    if e == edge_count {
        let value = used as u32;
        best_seen.fetch_max(value as u64, Ordering::Relaxed);
        let better = local.as_ref().map_or(true, |(v, _)| value > *v);
        if better {
            *local = Some((value, colours.clone()));
        }
        return;
    }
    // strict bound: subtrees that cannot exceed the globally best value may
    // still tie it, and ties must stay visible for the least-witness rule
    let upper = used as u64 + (edge_count - e) as u64;
    if upper < best_seen.load(Ordering::Relaxed) {
        return;
    }
    for c in 0..=used {
        colours[e] = c;
        if !violates(colours, e) {
            dfs_maxr(colours, e + 1, used.max(c + 1), edge_count, violates, best_seen, local);
        }
    }
    colours[e] = 0;
}

/// DIMACS CNF whose models are exactly the two-symbol rotational word
/// solutions: one boolean variable per free symmetry class, and for every
/// m-set of K_{n(q)} whose edges are all palette edges, two clauses
/// forbidding the all-0 and all-1 assignments. Rainbow K_4s cannot occur
/// with two symbols (every 4-set keeps at least three palette edges), which
/// the exporter re-checks by enumeration.
pub fn encode_sat(q: u64, m: u32) -> Result<String, Error> {
    let config = SearchConfig { palette: 2, m, ..SearchConfig::new(q) };
    let problem = Problem::build(&config)?;
    let classes = &problem.classes;

    let mut clauses: Vec<Vec<i64>> = Vec::new();
    for bucket in &problem.mono_buckets {
        for set in bucket {
            let pos: Vec<i64> = set.iter().map(|&c| c as i64 + 1).collect();
            let neg: Vec<i64> = set.iter().map(|&c| -(c as i64 + 1)).collect();
            clauses.push(pos);
            clauses.push(neg);
        }
    }

    let mut out = String::new();
    for c in 0..classes.count() {
        let members: Vec<String> = classes
            .members(c)
            .iter()
            .map(|&(w, d)| format!("w{w}[{d}]"))
            .collect();
        out.push_str(&format!("c class {} {}\n", c + 1, members.join(" ")));
    }
    out.push_str(&format!("p cnf {} {}\n", classes.count(), clauses.len()));
    for clause in &clauses {
        let lits: Vec<String> = clause.iter().map(|l| l.to_string()).collect();
        out.push_str(&format!("{} 0\n", lits.join(" ")));
    }
    Ok(out)
}

/// A parsed CNF formula.
#[derive(Clone, Debug)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

pub fn parse_dimacs(text: &str) -> Result<Cnf, Error> {
    let mut vars = None;
    let mut expected_clauses = None;
    let mut clauses = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p cnf ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::Parse { line: no + 1, msg: "bad problem line".into() });
            }
            vars = Some(parts[0].parse::<usize>().map_err(|_| Error::Parse {
                line: no + 1,
                msg: "bad variable count".into(),
            })?);
            expected_clauses = Some(parts[1].parse::<usize>().map_err(|_| Error::Parse {
                line: no + 1,
                msg: "bad clause count".into(),
            })?);
            continue;
        }
        let mut clause = Vec::new();
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| Error::Parse { line: no + 1, msg: format!("bad literal {tok}") })?;
            if lit == 0 {
                break;
            }
            clause.push(lit);
        }
        clauses.push(clause);
    }
    let vars = vars.ok_or(Error::Parse { line: 0, msg: "missing problem line".into() })?;
    if let Some(expected) = expected_clauses {
        if clauses.len() != expected {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected {expected} clauses, found {}", clauses.len()),
            });
        }
    }
    Ok(Cnf { vars, clauses })
}

/// Counts satisfying assignments by enumeration; limited to 30 variables.
pub fn count_models(cnf: &Cnf) -> Result<u64, Error> {
    if cnf.vars > 30 {
        return Err(Error::TooManyVariables(cnf.vars));
    }
    let mut count = 0u64;
    for assignment in 0u64..(1 << cnf.vars) {
        let ok = cnf.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let var = lit.unsigned_abs() as usize - 1;
                let value = assignment >> var & 1 == 1;
                (lit > 0) == value
            })
        });
        if ok {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::extract_words;

    const Q2_W0: &str = "*001*1010100*";
    const Q2_W1: &str = "*1010000*101*";

    #[test]
    fn class_structure_q2() {
        let classes = symmetry_classes(2).unwrap();
        // 3 even classes per word and 4 odd classes: {2,12},{4,10},{6,8}
        // twice, plus odd offsets 3,7,9,11 paired across words
        assert_eq!(classes.count(), 10);
        assert_eq!(classes.members(0), &[(0, 2), (0, 12)]);
        assert_eq!(classes.members(1), &[(1, 2), (1, 12)]);
        let odd: Vec<_> = (0..10).filter(|&c| classes.members(c)[0].1 % 2 == 1).collect();
        assert_eq!(odd.len(), 4);
    }

    #[test]
    fn class_structure_q3() {
        let classes = symmetry_classes(3).unwrap();
        // 26 positions: 12 even offsets in 6+6 mirror classes, 13 odd
        // offsets of which 4 are stars, leaving 9 odd classes
        assert_eq!(classes.count(), 21);
    }

    #[test]
    fn q2_search_recovers_published_pair() {
        let config = SearchConfig {
            mode: SearchMode::All,
            node_budget: None,
            ..SearchConfig::new(2)
        };
        let outcome = search_rotational(&config).unwrap();
        assert!(outcome.exhausted);
        let published = WordPair::parse(2, Q2_W0, Q2_W1).unwrap();
        assert!(outcome.solutions.contains(&published));
        assert_eq!(outcome.solution_count as usize, outcome.solutions.len());
    }

    #[test]
    fn q2_search_deterministic_across_threads() {
        let base = SearchConfig {
            mode: SearchMode::All,
            node_budget: None,
            ..SearchConfig::new(2)
        };
        let one = search_rotational(&SearchConfig { threads: 1, ..base.clone() }).unwrap();
        let four = search_rotational(&SearchConfig { threads: 4, ..base.clone() }).unwrap();
        let eight = search_rotational(&SearchConfig { threads: 8, ..base }).unwrap();
        assert_eq!(one.solutions, four.solutions);
        assert_eq!(one.solutions, eight.solutions);
        assert_eq!(one.nodes_explored, four.nodes_explored);
        assert_eq!(one.nodes_explored, eight.nodes_explored);
    }

    #[test]
    fn q2_search_matches_unpruned_enumeration() {
        // independent oracle: enumerate all 2^10 assignments and filter by
        // the full admissibility check on the expansion
        let classes = symmetry_classes(2).unwrap();
        let sys = rotational_system(2).unwrap();
        let n = classes.n();
        let mut expected: Vec<WordPair> = Vec::new();
        for mask in 0u32..1 << classes.count() {
            let assign: Vec<u8> =
                (0..classes.count()).map(|c| (mask >> c & 1) as u8).collect();
            let mut w0 = Vec::new();
            let mut w1 = Vec::new();
            for d in 1..n {
                w0.push(match classes.class_of_pair(0, d) {
                    Some(c) => WordSymbol::Palette(assign[c]),
                    None => WordSymbol::Star,
                });
                w1.push(match classes.class_of_pair(1, (1 + d) % n) {
                    Some(c) => WordSymbol::Palette(assign[c]),
                    None => WordSymbol::Star,
                });
            }
            let pair = WordPair::from_symbols(2, w0, w1).unwrap();
            let sc = expand_words(&sys.levi, &sys.labeling, &pair).unwrap();
            if is_admissible(&sc.colouring, 4).unwrap().admissible {
                expected.push(pair);
            }
        }
        expected.sort();
        expected.dedup();

        let config = SearchConfig {
            mode: SearchMode::All,
            node_budget: None,
            ..SearchConfig::new(2)
        };
        let outcome = search_rotational(&config).unwrap();
        assert_eq!(outcome.solutions, expected);
    }

    #[test]
    fn q2_single_symbol_has_no_solutions() {
        let config = SearchConfig {
            palette: 1,
            mode: SearchMode::All,
            node_budget: None,
            ..SearchConfig::new(2)
        };
        let outcome = search_rotational(&config).unwrap();
        assert!(outcome.exhausted);
        assert_eq!(outcome.solution_count, 0);
    }

    #[test]
    fn first_mode_stops_early() {
        let all = search_rotational(&SearchConfig {
            mode: SearchMode::All,
            node_budget: None,
            ..SearchConfig::new(2)
        })
        .unwrap();
        let first = search_rotational(&SearchConfig {
            mode: SearchMode::First,
            node_budget: None,
            ..SearchConfig::new(2)
        })
        .unwrap();
        assert_eq!(first.solution_count, 1);
        assert!(all.solutions.contains(&first.solutions[0]));
        assert!(first.nodes_explored <= all.nodes_explored);

        // a fruitless first-solution run enumerates everything
        let none = search_rotational(&SearchConfig {
            palette: 1,
            mode: SearchMode::First,
            node_budget: None,
            ..SearchConfig::new(2)
        })
        .unwrap();
        assert_eq!(none.solution_count, 0);
        assert!(none.exhausted);
    }

    #[test]
    fn budget_interrupts_search() {
        let config = SearchConfig {
            mode: SearchMode::All,
            node_budget: Some(50),
            ..SearchConfig::new(2)
        };
        let outcome = search_rotational(&config).unwrap();
        assert!(!outcome.exhausted);
    }

    #[test]
    fn checkpoint_resume_round_trip() {
        let full = search_rotational(&SearchConfig {
            mode: SearchMode::All,
            node_budget: None,
            ..SearchConfig::new(2)
        })
        .unwrap();

        // run with a budget that stops partway, then resume to completion
        let config = SearchConfig {
            mode: SearchMode::All,
            node_budget: Some(400),
            ..SearchConfig::new(2)
        };
        let (partial, cp) = search_with_checkpoint(&config, None).unwrap();
        assert!(!partial.exhausted);
        let text = cp.to_text();
        let restored = Checkpoint::from_text(&text).unwrap();
        assert_eq!(restored, cp);

        let resume_config = SearchConfig {
            mode: SearchMode::All,
            node_budget: None,
            ..SearchConfig::new(2)
        };
        let (resumed, final_cp) = search_with_checkpoint(&resume_config, Some(&restored)).unwrap();
        assert!(resumed.exhausted);
        assert_eq!(resumed.solutions, full.solutions);
        assert_eq!(final_cp.completed.len(), final_cp.completed.iter().max().unwrap() + 1);
    }

    #[test]
    fn verify_words_published_q2() {
        let pair = WordPair::parse(2, Q2_W0, Q2_W1).unwrap();
        let report = verify_words(2, &pair, 4).unwrap();
        assert!(report.admissibility.admissible);
        assert_eq!(report.colour_count, 23);
        assert!(report.special);
        assert!(report.rotational);
        assert!(!report.reverse_pair);
    }

    #[test]
    fn config_validation() {
        assert!(matches!(
            search_rotational(&SearchConfig::new(11)),
            Err(Error::PlaneTooLarge { q: 11, cap: 9 })
        ));
        assert!(matches!(
            search_rotational(&SearchConfig { m: 2, ..SearchConfig::new(2) }),
            Err(Error::InvalidM(2))
        ));
        assert!(matches!(
            search_rotational(&SearchConfig { palette: 0, ..SearchConfig::new(2) }),
            Err(Error::BadPalette(0))
        ));
        assert!(matches!(
            search_rotational(&SearchConfig { palette: 37, ..SearchConfig::new(2) }),
            Err(Error::BadPalette(37))
        ));
    }

    // -- brute force ---------------------------------------------------------

    /// Unpruned oracle: enumerate every restricted-growth string and check
    /// each complete colouring from scratch.
    fn oracle_maxr(n: usize, m: u32) -> (u32, Vec<u8>) {
        let edge_count = n * (n - 1) / 2;
        let mut colours = vec![0u8; edge_count];
        let mut best: Option<(u32, Vec<u8>)> = None;
        fn admissible(colours: &[u8], n: usize, m: u32) -> bool {
            let edge_index = |u: usize, v: usize| -> usize {
                let (u, v) = (u.min(v), u.max(v));
                u * n - u * (u + 1) / 2 + v - u - 1
            };
            // monochromatic K_m
            let mut set: Vec<usize> = (0..m as usize).collect();
            if n >= m as usize {
                loop {
                    let c = colours[edge_index(set[0], set[1])];
                    if set.iter().enumerate().all(|(i, &a)| {
                        set[i + 1..].iter().all(|&b| colours[edge_index(a, b)] == c)
                    }) {
                        return false;
                    }
                    let mut i = set.len();
                    let mut done = false;
                    loop {
                        if i == 0 {
                            done = true;
                            break;
                        }
                        i -= 1;
                        if set[i] != i + n - set.len() {
                            break;
                        }
                    }
                    if done {
                        break;
                    }
                    set[i] += 1;
                    for j in i + 1..set.len() {
                        set[j] = set[j - 1] + 1;
                    }
                }
            }
            // rainbow K_4
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        for d in c + 1..n {
                            let cols = [
                                colours[edge_index(a, b)],
                                colours[edge_index(a, c)],
                                colours[edge_index(a, d)],
                                colours[edge_index(b, c)],
                                colours[edge_index(b, d)],
                                colours[edge_index(c, d)],
                            ];
                            if (0..6).all(|i| (i + 1..6).all(|j| cols[i] != cols[j])) {
                                return false;
                            }
                        }
                    }
                }
            }
            true
        }
        fn walk(
            colours: &mut Vec<u8>,
            e: usize,
            used: u8,
            n: usize,
            m: u32,
            best: &mut Option<(u32, Vec<u8>)>,
        ) {
            if e == colours.len() {
                if admissible(colours, n, m) {
                    let value = used as u32;
                    if best.as_ref().map_or(true, |(v, _)| value > *v) {
                        *best = Some((value, colours.clone()));
                    }
                }
                return;
            }
            for c in 0..=used {
                colours[e] = c;
                walk(colours, e + 1, used.max(c + 1), n, m, best);
            }
            colours[e] = 0;
        }
        walk(&mut colours, 0, 0, n, m, &mut best);
        best.expect("some colouring is admissible")
    }

    #[test]
    fn forced_values() {
        assert_eq!(brute_force_maxr(3, 3).unwrap().value, 3);
        assert_eq!(brute_force_maxr(4, 4).unwrap().value, 5);
    }

    #[test]
    fn witness_attains_and_is_admissible() {
        for (n, m) in [(3, 3), (4, 3), (4, 4), (5, 3), (5, 4)] {
            let out = brute_force_maxr(n, m).unwrap();
            assert_eq!(out.witness.colour_count(), out.value, "n={n} m={m}");
            let report = is_admissible(&out.witness, m).unwrap();
            assert!(report.admissible, "n={n} m={m}");
        }
    }

    #[test]
    fn matches_unpruned_oracle_small() {
        for (n, m) in [(3u32, 3u32), (4, 3), (4, 4), (5, 3), (5, 4)] {
            let n = n as usize;
            let (value, witness) = oracle_maxr(n, m);
            let out = brute_force_maxr(n, m).unwrap();
            assert_eq!(out.value, value, "n={n} m={m}");
            let witness_colours: Vec<u8> =
                out.witness.colours().iter().map(|&c| c as u8).collect();
            assert_eq!(witness_colours, witness, "n={n} m={m}");
        }
    }

    #[test]
    fn deterministic_across_threads_brute() {
        let one = brute_force_maxr_threaded(5, 3, 1).unwrap();
        let four = brute_force_maxr_threaded(5, 3, 4).unwrap();
        assert_eq!(one.value, four.value);
        assert_eq!(one.witness, four.witness);
    }

    #[test]
    fn maxr_monotone_in_m() {
        for n in 3..=5usize {
            for m in 3..5u32 {
                let lo = brute_force_maxr(n, m).unwrap().value;
                let hi = brute_force_maxr(n, m + 1).unwrap().value;
                assert!(lo <= hi, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn brute_range_errors() {
        assert_eq!(brute_force_maxr(7, 3).unwrap_err(), Error::BruteForceRange(7));
        assert_eq!(brute_force_maxr(2, 3).unwrap_err(), Error::BruteForceRange(2));
        assert_eq!(brute_force_maxr(4, 2).unwrap_err(), Error::InvalidM(2));
    }

    // -- SAT export ----------------------------------------------------------

    #[test]
    fn sat_header_and_model_count() {
        let text = encode_sat(2, 4).unwrap();
        let cnf = parse_dimacs(&text).unwrap();
        assert_eq!(cnf.vars, 10);
        assert!(text.contains(&format!("p cnf 10 {}\n", cnf.clauses.len())));

        let models = count_models(&cnf).unwrap();
        let outcome = search_rotational(&SearchConfig {
            mode: SearchMode::Count,
            node_budget: None,
            ..SearchConfig::new(2)
        })
        .unwrap();
        assert!(outcome.exhausted);
        assert_eq!(models, outcome.solution_count);
    }

    #[test]
    fn published_pair_satisfies_cnf() {
        let text = encode_sat(2, 4).unwrap();
        let cnf = parse_dimacs(&text).unwrap();
        let classes = symmetry_classes(2).unwrap();
        let pair = WordPair::parse(2, Q2_W0, Q2_W1).unwrap();
        let mut assignment = 0u64;
        for c in 0..classes.count() {
            let (w, d) = classes.members(c)[0];
            if let WordSymbol::Palette(1) = pair.symbol(w as usize, d) {
                assignment |= 1 << c;
            }
        }
        let ok = cnf.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let var = lit.unsigned_abs() as usize - 1;
                ((assignment >> var) & 1 == 1) == (lit > 0)
            })
        });
        assert!(ok);
    }

    #[test]
    fn sat_rejects_large_counter() {
        let cnf = Cnf { vars: 31, clauses: vec![] };
        assert_eq!(count_models(&cnf).unwrap_err(), Error::TooManyVariables(31));
    }

    #[test]
    fn solutions_survive_extraction() {
        let outcome = search_rotational(&SearchConfig {
            mode: SearchMode::All,
            node_budget: None,
            ..SearchConfig::new(2)
        })
        .unwrap();
        let sys = rotational_system(2).unwrap();
        for pair in &outcome.solutions {
            let sc = expand_words(&sys.levi, &sys.labeling, pair).unwrap();
            assert_eq!(&extract_words(&sc).unwrap(), pair);
        }
    }
}
