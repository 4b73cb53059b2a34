//! Edge-colourings of complete graphs and their rotational word encodings.
//!
//! A colouring of K_n on a rotational labeling is recorded by two words
//! over the palette alphabet plus '*': position d of the first word is the
//! symbol on the pair (v_0, v_d), of the second word on (v_1, v_{1+d}),
//! with '*' marking incidence-graph edges. A colouring is rotational when
//! every even vertex sees the first word and every odd vertex the second;
//! it is special when every incidence-graph edge keeps a colour of its own.
//!
//! Palette symbols are the characters 0-9 then A-Z, so palettes are capped
//! at 36 colours; '*' is reserved.

use std::collections::HashMap;

use crate::error::Error;
use crate::field::PrimePower;
use crate::plane::{rotational_system, CyclicLabeling, LeviGraph};

/// Largest supported shared palette.
pub const MAX_PALETTE: u32 = 36;

/// A symmetric colour assignment on the unordered pairs of K_n.
///
/// `palette` records how many low colour ids form the shared palette; ids
/// at and above it are the uniquely-coloured incidence edges when the
/// colouring came from a word expansion, and the field is 0 when the
/// colouring has no palette semantics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColouring {
    n: usize,
    palette: u32,
    colours: Vec<u32>,
}

impl EdgeColouring {
    /// All-zero colouring on n vertices.
    pub fn new(n: usize, palette: u32) -> Self {
        EdgeColouring { n, palette, colours: vec![0; n * (n - 1) / 2] }
    }

    pub fn from_fn(n: usize, palette: u32, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut out = EdgeColouring::new(n, palette);
        for u in 0..n {
            for v in u + 1..n {
                out.set_colour(u, v, f(u, v));
            }
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    /// Row-major upper-triangle storage of the pair colours.
    pub fn colours(&self) -> &[u32] {
        &self.colours
    }

    fn index(&self, u: usize, v: usize) -> usize {
        debug_assert!(u != v && u < self.n && v < self.n);
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        u * self.n - u * (u + 1) / 2 + v - u - 1
    }

    pub fn colour(&self, u: usize, v: usize) -> u32 {
        self.colours[self.index(u, v)]
    }

    pub fn set_colour(&mut self, u: usize, v: usize, c: u32) {
        let i = self.index(u, v);
        self.colours[i] = c;
    }

    /// Number of distinct colour ids in use.
    pub fn colour_count(&self) -> u32 {
        let mut seen: Vec<u32> = self.colours.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() as u32
    }

    /// Relabels colours by first occurrence in row-major upper-triangle
    /// order. Idempotent; two colourings are equal up to a colour
    /// permutation exactly when their canonical forms are identical.
    pub fn canonicalize(&self) -> EdgeColouring {
        let mut map = HashMap::new();
        let mut next = 0u32;
        let colours = self
            .colours
            .iter()
            .map(|&c| {
                *map.entry(c).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id
                })
            })
            .collect();
        EdgeColouring { n: self.n, palette: self.palette, colours }
    }

    /// Serializes to the `.mrc` text format.
    pub fn to_mrc(&self) -> String {
        let mut out = String::new();
        out.push_str("mrc 1\n");
        out.push_str(&format!("n {}\n", self.n));
        out.push_str(&format!("palette {}\n", self.palette));
        for u in 0..self.n.saturating_sub(1) {
            let row: Vec<String> =
                (u + 1..self.n).map(|v| self.colour(u, v).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_mrc(text: &str) -> Result<Self, Error> {
        let mut lines = text.lines().enumerate();
        let mut expect = |tag: &str| -> Result<(usize, String), Error> {
            let (no, line) = lines
                .next()
                .ok_or(Error::Parse { line: 0, msg: format!("missing `{tag}` line") })?;
            let rest = line
                .strip_prefix(tag)
                .and_then(|r| r.strip_prefix(' '))
                .ok_or(Error::Parse { line: no + 1, msg: format!("expected `{tag} ...`") })?;
            Ok((no + 1, rest.to_string()))
        };
        let (no, version) = expect("mrc")?;
        if version != "1" {
            return Err(Error::Parse { line: no, msg: format!("unsupported version {version}") });
        }
        let (no, n_str) = expect("n")?;
        let n: usize = n_str
            .parse()
            .map_err(|_| Error::Parse { line: no, msg: format!("bad vertex count {n_str}") })?;
        let (no, t_str) = expect("palette")?;
        let palette: u32 = t_str
            .parse()
            .map_err(|_| Error::Parse { line: no, msg: format!("bad palette size {t_str}") })?;

        let mut out = EdgeColouring::new(n, palette);
        for u in 0..n.saturating_sub(1) {
            let (no, line) = lines
                .next()
                .map(|(no, l)| (no + 1, l))
                .ok_or(Error::Parse { line: 0, msg: format!("missing row {u}") })?;
            let ids: Vec<&str> = line.split_whitespace().collect();
            if ids.len() != n - u - 1 {
                return Err(Error::Parse {
                    line: no,
                    msg: format!("row {u} has {} entries, expected {}", ids.len(), n - u - 1),
                });
            }
            for (off, tok) in ids.iter().enumerate() {
                let c: u32 = tok
                    .parse()
                    .map_err(|_| Error::Parse { line: no, msg: format!("bad colour id {tok}") })?;
                out.set_colour(u, u + 1 + off, c);
            }
        }
        if let Some((no, line)) = lines.next() {
            if !line.trim().is_empty() {
                return Err(Error::Parse { line: no + 1, msg: "trailing content".into() });
            }
        }
        Ok(out)
    }
}

/// Number of distinct colours used by a colouring.
pub fn colour_count(colouring: &EdgeColouring) -> u32 {
    colouring.colour_count()
}

/// Canonical form under colour permutation.
pub fn canonicalize(colouring: &EdgeColouring) -> EdgeColouring {
    colouring.canonicalize()
}

/// One symbol of a rotational word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordSymbol {
    /// A shared palette colour, 0..36.
    Palette(u8),
    /// An incidence-graph edge carrying a colour of its own.
    Star,
}

impl WordSymbol {
    pub fn from_char(c: char) -> Result<Self, Error> {
        match c {
            '*' => Ok(WordSymbol::Star),
            '0'..='9' => Ok(WordSymbol::Palette(c as u8 - b'0')),
            'A'..='Z' => Ok(WordSymbol::Palette(c as u8 - b'A' + 10)),
            _ => Err(Error::BadSymbol(c)),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            WordSymbol::Star => '*',
            WordSymbol::Palette(s) if s < 10 => (b'0' + s) as char,
            WordSymbol::Palette(s) => (b'A' + s - 10) as char,
        }
    }
}

/// The two words describing a rotational colouring of K_{n(q)}.
///
/// Construction validates the structural invariants: both words have length
/// n(q)-1, offset 1 is a star, and symmetric positions agree (for even d
/// each word mirrors itself; for odd d the words mirror each other).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WordPair {
    q: u64,
    w0: Vec<WordSymbol>,
    w1: Vec<WordSymbol>,
}

impl WordPair {
    pub fn parse(q: u64, w0: &str, w1: &str) -> Result<Self, Error> {
        let w0 = w0.chars().map(WordSymbol::from_char).collect::<Result<Vec<_>, _>>()?;
        let w1 = w1.chars().map(WordSymbol::from_char).collect::<Result<Vec<_>, _>>()?;
        Self::from_symbols(q, w0, w1)
    }

    pub fn from_symbols(q: u64, w0: Vec<WordSymbol>, w1: Vec<WordSymbol>) -> Result<Self, Error> {
        PrimePower::factor(q).ok_or(Error::NotPrimePower(q))?;
        let n = (2 * (q * q + q + 1)) as usize;
        for w in [&w0, &w1] {
            if w.len() != n - 1 {
                return Err(Error::WordLength { expected: n - 1, got: w.len() });
            }
        }
        let pair = WordPair { q, w0, w1 };
        if pair.symbol(0, 1) != WordSymbol::Star || pair.symbol(1, 1) != WordSymbol::Star {
            return Err(Error::MissingCycleStar);
        }
        for d in 1..n {
            let mirror = if d % 2 == 0 { (0, n - d) } else { (1, n - d) };
            if pair.symbol(0, d) != pair.symbol(mirror.0, mirror.1) {
                return Err(Error::SymmetryConflict { offset: d.min(n - d) });
            }
            if d % 2 == 0 && pair.symbol(1, d) != pair.symbol(1, n - d) {
                return Err(Error::SymmetryConflict { offset: d.min(n - d) });
            }
        }
        Ok(pair)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Number of vertices n(q) = 2(q^2+q+1).
    pub fn n(&self) -> usize {
        self.w0.len() + 1
    }

    /// Symbol of word 0 or 1 at offset d, 1 <= d <= n-1.
    pub fn symbol(&self, word: usize, offset: usize) -> WordSymbol {
        let w = if word % 2 == 0 { &self.w0 } else { &self.w1 };
        w[offset - 1]
    }

    /// Star offsets of the first word: the incidence offsets of even
    /// positions.
    pub fn star_offsets(&self) -> Vec<usize> {
        (1..self.n()).filter(|&d| self.symbol(0, d) == WordSymbol::Star).collect()
    }

    /// One more than the largest palette symbol in use (0 if none).
    pub fn palette_size(&self) -> u32 {
        self.w0
            .iter()
            .chain(&self.w1)
            .filter_map(|s| match s {
                WordSymbol::Palette(v) => Some(*v as u32 + 1),
                WordSymbol::Star => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn w0_string(&self) -> String {
        self.w0.iter().map(|s| s.to_char()).collect()
    }

    pub fn w1_string(&self) -> String {
        self.w1.iter().map(|s| s.to_char()).collect()
    }

    /// Is the second word the reverse of the first?
    pub fn is_reverse_pair(&self) -> bool {
        self.w1.iter().rev().eq(self.w0.iter())
    }

    /// Serializes to the word-file text format.
    pub fn to_file_string(&self) -> String {
        format!("q {}\nw0 {}\nw1 {}\n", self.q, self.w0_string(), self.w1_string())
    }

    pub fn from_file_string(text: &str) -> Result<Self, Error> {
        let mut q = None;
        let mut w0 = None;
        let mut w1 = None;
        for (no, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut it = line.splitn(2, ' ');
            let tag = it.next().unwrap_or("");
            let value = it.next().unwrap_or("").to_string();
            match tag {
                "q" => {
                    q = Some(value.parse::<u64>().map_err(|_| Error::Parse {
                        line: no + 1,
                        msg: format!("bad q value {value}"),
                    })?)
                }
                "w0" => w0 = Some(value),
                "w1" => w1 = Some(value),
                _ => {
                    return Err(Error::Parse { line: no + 1, msg: format!("unknown tag {tag}") })
                }
            }
        }
        let missing = |what: &str| Error::Parse { line: 0, msg: format!("missing `{what}` line") };
        WordPair::parse(
            q.ok_or_else(|| missing("q"))?,
            &w0.ok_or_else(|| missing("w0"))?,
            &w1.ok_or_else(|| missing("w1"))?,
        )
    }
}

/// A colouring of K_{n(q)} bundled with the incidence graph and the
/// rotational labeling it lives on.
#[derive(Clone, Debug)]
pub struct SpecialColouring {
    pub colouring: EdgeColouring,
    pub levi: LeviGraph,
    pub labeling: CyclicLabeling,
}

impl SpecialColouring {
    /// Embedding of incidence-graph vertices into K_n vertices (the inverse
    /// of the labeling order).
    pub fn embedding(&self) -> Vec<usize> {
        let mut emb = vec![0; self.labeling.n()];
        for (pos, &v) in self.labeling.order().iter().enumerate() {
            emb[v] = pos;
        }
        emb
    }

    pub fn is_special(&self) -> Result<bool, Error> {
        is_special(&self.colouring, &self.levi, &self.embedding())
    }

    pub fn words(&self) -> Result<WordPair, Error> {
        extract_words(self)
    }
}

/// Expands a word pair into the full colouring of K_{n(q)} along a given
/// labeling. Palette symbols colour the non-incidence pairs by rotation;
/// every star receives a fresh colour in lexicographic edge order starting
/// at the palette size.
pub fn expand_words(
    levi: &LeviGraph,
    labeling: &CyclicLabeling,
    words: &WordPair,
) -> Result<SpecialColouring, Error> {
    let n = levi.n();
    if labeling.n() != n {
        return Err(Error::SizeMismatch { expected: n, got: labeling.n() });
    }
    if words.n() != n {
        return Err(Error::WordLength { expected: n - 1, got: words.n() - 1 });
    }
    let order = labeling.order();

    // The words' star pattern must match incidence exactly, for every pair;
    // this also rejects labelings that are not rotational.
    for i in 0..n {
        for j in i + 1..n {
            let d = j - i;
            let sym = words.symbol(i % 2, d);
            if (sym == WordSymbol::Star) != levi.adjacent(order[i], order[j]) {
                return Err(Error::StarMismatch { offset: d });
            }
        }
    }

    let palette = words.palette_size();
    let mut colouring = EdgeColouring::new(n, palette);
    let mut next_unique = palette;
    for i in 0..n {
        for j in i + 1..n {
            match words.symbol(i % 2, j - i) {
                WordSymbol::Palette(s) => colouring.set_colour(i, j, s as u32),
                WordSymbol::Star => {
                    colouring.set_colour(i, j, next_unique);
                    next_unique += 1;
                }
            }
        }
    }
    Ok(SpecialColouring { colouring, levi: levi.clone(), labeling: labeling.clone() })
}

/// Expands a word pair on the cyclic incidence graph derived from its own
/// star offsets. This accepts the words of any valid rotational labeling,
/// not just the one our constructive labeling happens to produce.
pub fn expand_words_cyclic(words: &WordPair) -> Result<SpecialColouring, Error> {
    let levi = LeviGraph::from_star_offsets(words.q(), &words.star_offsets())?;
    let labeling = CyclicLabeling::identity(&levi);
    expand_words(&levi, &labeling, words)
}

/// Reads the two words back off a rotational colouring, verifying that
/// every pair agrees with its reference word position.
pub fn extract_words(sc: &SpecialColouring) -> Result<WordPair, Error> {
    let n = sc.levi.n();
    let order = sc.labeling.order();
    let reference = |word: usize, d: usize| -> (usize, usize) {
        // the K_n pair read by word `word` at offset d
        let i = word;
        let j = (word + d) % n;
        (i.min(j), i.max(j))
    };

    for i in 0..n {
        for j in i + 1..n {
            let d = j - i;
            let (ru, rv) = reference(i % 2, d);
            let here_star = sc.levi.adjacent(order[i], order[j]);
            let ref_star = sc.levi.adjacent(order[ru], order[rv]);
            if here_star != ref_star {
                return Err(Error::StarMismatch { offset: d });
            }
            if !here_star && sc.colouring.colour(i, j) != sc.colouring.colour(ru, rv) {
                return Err(Error::NotRotational { edge_a: (ru, rv), edge_b: (i, j) });
            }
        }
    }

    let mut words = [Vec::with_capacity(n - 1), Vec::with_capacity(n - 1)];
    for (word, out) in words.iter_mut().enumerate() {
        for d in 1..n {
            let (u, v) = reference(word, d);
            if sc.levi.adjacent(order[u], order[v]) {
                out.push(WordSymbol::Star);
            } else {
                let c = sc.colouring.colour(u, v);
                if c >= MAX_PALETTE {
                    return Err(Error::PaletteTooLarge(c));
                }
                out.push(WordSymbol::Palette(c as u8));
            }
        }
    }
    let [w0, w1] = words;
    let q = plane_order_from_vertices(n)?;
    WordPair::from_symbols(q, w0, w1)
}

fn plane_order_from_vertices(n: usize) -> Result<u64, Error> {
    // n = 2(q^2+q+1)
    let classes = (n / 2) as u64;
    (1..)
        .take_while(|&q| q * q + q + 1 <= classes)
        .find(|&q| q * q + q + 1 == classes)
        .ok_or(Error::SizeMismatch { expected: 0, got: n })
}

/// Is every colour on an embedded incidence edge unique to that edge?
pub fn is_special(
    colouring: &EdgeColouring,
    levi: &LeviGraph,
    embedding: &[usize],
) -> Result<bool, Error> {
    if embedding.len() != levi.n() {
        return Err(Error::SizeMismatch { expected: levi.n(), got: embedding.len() });
    }
    let mut seen = vec![false; colouring.n()];
    for &v in embedding {
        if v >= colouring.n() || seen[v] {
            return Err(Error::EmbeddingNotInjective);
        }
        seen[v] = true;
    }
    let mut occurrences: HashMap<u32, u32> = HashMap::new();
    for c in colouring.colours() {
        *occurrences.entry(*c).or_insert(0) += 1;
    }
    for (u, v) in levi.edges() {
        let c = colouring.colour(embedding[u], embedding[v]);
        if occurrences[&c] != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The K_14 construction found by exhaustive cycle search.
#[derive(Clone, Debug)]
pub struct FanoConstruction {
    pub colouring: SpecialColouring,
    /// The chosen 7-cycle on point positions, canonical sequence.
    pub point_cycle: Vec<usize>,
    /// The chosen 7-cycle on line positions, canonical sequence.
    pub line_cycle: Vec<usize>,
    /// How many (C, C') pairs satisfied the distance-1 condition.
    pub valid_pairs: usize,
}

/// Searches K_14 for 7-cycles C on the points and C' on the lines such that
/// every edge of C and every edge of C' are at distance 1 in L_2, then
/// colours: 0 on C, C' and the non-incident point-line pairs, 1 on the
/// remaining same-side pairs, and a fresh colour on every L_2 edge.
///
/// Among the valid pairs, the lexicographically least whose colouring is
/// rotational is chosen, so the result expands and extracts as words.
pub fn fano_construction() -> FanoConstruction {
    let sys = rotational_system(2).expect("the q=2 system always builds");
    let n = sys.levi.n();
    let order = sys.labeling.order();

    // distances between cycle positions
    let mut dist = vec![vec![0usize; n]; n];
    for (a, row) in dist.iter_mut().enumerate() {
        let by_vertex = sys.levi.bfs_distances(order[a]);
        for (b, slot) in row.iter_mut().enumerate() {
            *slot = by_vertex[order[b]];
        }
    }

    let evens: Vec<usize> = (0..n).step_by(2).collect();
    let odds: Vec<usize> = (1..n).step_by(2).collect();
    let point_cycles = seven_cycles(&evens);
    let line_cycles = seven_cycles(&odds);

    let edge_set = |cycle: &[usize]| -> Vec<(usize, usize)> {
        (0..7)
            .map(|i| {
                let (a, b) = (cycle[i], cycle[(i + 1) % 7]);
                (a.min(b), a.max(b))
            })
            .collect()
    };
    let shift_invariant = |edges: &[(usize, usize)]| -> bool {
        edges.iter().all(|&(a, b)| {
            let (x, y) = ((a + 2) % n, (b + 2) % n);
            edges.contains(&(x.min(y), x.max(y)))
        })
    };

    let mut valid_pairs = 0usize;
    let mut chosen: Option<(Vec<usize>, Vec<usize>)> = None;
    for pc in &point_cycles {
        let pe = edge_set(pc);
        for lc in &line_cycles {
            let le = edge_set(lc);
            let valid = pe.iter().all(|&(u, v)| {
                le.iter().all(|&(x, y)| {
                    dist[u][x].min(dist[u][y]).min(dist[v][x]).min(dist[v][y]) == 1
                })
            });
            if !valid {
                continue;
            }
            valid_pairs += 1;
            if chosen.is_none() && shift_invariant(&pe) && shift_invariant(&le) {
                chosen = Some((pc.clone(), lc.clone()));
            }
        }
    }
    let (point_cycle, line_cycle) = chosen.expect("a rotational valid cycle pair exists for q=2");

    let point_edges = edge_set(&point_cycle);
    let line_edges = edge_set(&line_cycle);
    let mut colouring = EdgeColouring::new(n, 2);
    let mut next_unique = 2;
    for i in 0..n {
        for j in i + 1..n {
            let c = if sys.levi.adjacent(order[i], order[j]) {
                let c = next_unique;
                next_unique += 1;
                c
            } else if i % 2 == j % 2 {
                let edges = if i % 2 == 0 { &point_edges } else { &line_edges };
                u32::from(!edges.contains(&(i, j)))
            } else {
                0 // non-incident point-line pair
            };
            colouring.set_colour(i, j, c);
        }
    }

    FanoConstruction {
        colouring: SpecialColouring { colouring, levi: sys.levi, labeling: sys.labeling },
        point_cycle,
        line_cycle,
        valid_pairs,
    }
}

/// The colouring of K_14 built by [`fano_construction`].
pub fn fano_colouring() -> SpecialColouring {
    fano_construction().colouring
}

/// All 7-cycles on the given items, as canonical sequences (start at the
/// smallest item, smaller second element than last), in lexicographic
/// order.
fn seven_cycles(items: &[usize]) -> Vec<Vec<usize>> {
    assert_eq!(items.len(), 7);
    let mut rest: Vec<usize> = items[1..].to_vec();
    rest.sort_unstable();
    let mut out = Vec::with_capacity(360);
    let mut seq = vec![items[0]];
    permute_into(&mut seq, &mut rest, &mut out);
    out
}

fn permute_into(seq: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if rest.is_empty() {
        if seq[1] < seq[6] {
            out.push(seq.clone());
        }
        return;
    }
    for i in 0..rest.len() {
        let item = rest.remove(i);
        seq.push(item);
        permute_into(seq, rest, out);
        seq.pop();
        rest.insert(i, item);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::star_offset_residues;

    pub const Q2_W0: &str = "*001*1010100*";
    pub const Q2_W1: &str = "*1010000*101*";
    pub const Q3_W0: &str = "*00001*001*1110100110010*";
    pub const Q3_W1: &str = "*0100110010111*100*10000*";

    fn q2_pair() -> WordPair {
        WordPair::parse(2, Q2_W0, Q2_W1).unwrap()
    }

    fn q3_pair() -> WordPair {
        WordPair::parse(3, Q3_W0, Q3_W1).unwrap()
    }

    #[test]
    fn published_pairs_parse() {
        assert_eq!(q2_pair().star_offsets(), vec![1, 5, 13]);
        assert_eq!(q3_pair().star_offsets(), vec![1, 7, 11, 25]);
        assert_eq!(q2_pair().palette_size(), 2);
        assert_eq!(q3_pair().palette_size(), 2);
    }

    #[test]
    fn reverse_property() {
        assert!(!q2_pair().is_reverse_pair());
        assert!(q3_pair().is_reverse_pair());
    }

    #[test]
    fn word_validation_errors() {
        assert!(matches!(
            WordPair::parse(3, Q2_W0, Q2_W1),
            Err(Error::WordLength { expected: 25, got: 13 })
        ));
        assert!(matches!(
            WordPair::parse(2, "001*10101000*", Q2_W1),
            Err(Error::MissingCycleStar)
        ));
        assert!(matches!(WordPair::parse(6, Q2_W0, Q2_W1), Err(Error::NotPrimePower(6))));
        assert!(matches!(
            WordPair::parse(2, "*001x1010100*", Q2_W1),
            Err(Error::BadSymbol('x'))
        ));
        // flip position 2 so it disagrees with position 12
        assert_eq!(
            WordPair::parse(2, "*101*1010100*", Q2_W1),
            Err(Error::SymmetryConflict { offset: 2 })
        );
    }

    #[test]
    fn expansion_against_constructed_labeling() {
        // The q=2 labeling's offsets coincide with the published stars, so
        // the strict path works directly.
        let sys = rotational_system(2).unwrap();
        let sc = expand_words(&sys.levi, &sys.labeling, &q2_pair()).unwrap();
        assert_eq!(sc.colouring.colour_count(), 23);
        assert_eq!(sc.is_special(), Ok(true));
    }

    #[test]
    fn cyclic_expansion_agrees_with_strict_path() {
        let sys = rotational_system(2).unwrap();
        let strict = expand_words(&sys.levi, &sys.labeling, &q2_pair()).unwrap();
        let cyclic = expand_words_cyclic(&q2_pair()).unwrap();
        assert_eq!(strict.colouring, cyclic.colouring);
    }

    #[test]
    fn q3_words_expand_on_their_own_offsets() {
        let sc = expand_words_cyclic(&q3_pair()).unwrap();
        // 52 incidence edges plus palette {0, 1}
        assert_eq!(sc.colouring.colour_count(), 54);
        assert_eq!(sc.is_special(), Ok(true));
    }

    #[test]
    fn expansion_rejects_foreign_star_pattern() {
        // The constructed q=3 labeling has offsets {1,5,17,25}; the printed
        // q=3 words use {1,7,11,25} and must be rejected on the strict path.
        let sys = rotational_system(3).unwrap();
        assert!(matches!(
            expand_words(&sys.levi, &sys.labeling, &q3_pair()),
            Err(Error::StarMismatch { .. })
        ));
    }

    #[test]
    fn extraction_round_trips() {
        for pair in [q2_pair(), q3_pair()] {
            let sc = expand_words_cyclic(&pair).unwrap();
            assert_eq!(extract_words(&sc).unwrap(), pair);
        }
    }

    #[test]
    fn extraction_rejects_flipped_edge() {
        let mut sc = expand_words_cyclic(&q2_pair()).unwrap();
        // flip one palette edge: (0,2) carries w0[2] = 0
        assert_eq!(sc.colouring.colour(0, 2), 0);
        sc.colouring.set_colour(0, 2, 1);
        match extract_words(&sc) {
            Err(Error::NotRotational { edge_a, edge_b }) => {
                assert_eq!(edge_a, (0, 2));
                assert_ne!(edge_a, edge_b);
            }
            other => panic!("expected NotRotational, got {other:?}"),
        }
    }

    #[test]
    fn expand_then_extract_random_pairs() {
        // seeded sweep over random valid word pairs
        let sys = rotational_system(2).unwrap();
        let n = sys.levi.n();
        let offsets: Vec<usize> = sys.labeling.offsets().to_vec();
        let mut state = 0x5eed_cafe_u64;
        let rand_symbol = |state: &mut u64| {
            *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            WordSymbol::Palette(((*state >> 33) % 2) as u8)
        };
        for _ in 0..50 {
            let mut w0 = vec![WordSymbol::Palette(0); n - 1];
            let mut w1 = vec![WordSymbol::Palette(0); n - 1];
            for d in 1..n {
                if offsets.contains(&d) {
                    w0[d - 1] = WordSymbol::Star;
                }
                if offsets.contains(&(n - d)) {
                    w1[d - 1] = WordSymbol::Star;
                }
            }
            for d in 1..n {
                if d % 2 == 0 && d <= n - d {
                    let s = rand_symbol(&mut state);
                    w0[d - 1] = s;
                    w0[n - d - 1] = s;
                    let s = rand_symbol(&mut state);
                    w1[d - 1] = s;
                    w1[n - d - 1] = s;
                } else if d % 2 == 1 && w0[d - 1] != WordSymbol::Star {
                    let s = rand_symbol(&mut state);
                    w0[d - 1] = s;
                    w1[n - d - 1] = s;
                }
            }
            let pair = WordPair::from_symbols(2, w0, w1).unwrap();
            let sc = expand_words(&sys.levi, &sys.labeling, &pair).unwrap();
            assert_eq!(extract_words(&sc).unwrap(), pair);
        }
    }

    #[test]
    fn speciality_detects_reused_colour() {
        let sc = expand_words_cyclic(&q2_pair()).unwrap();
        assert_eq!(sc.is_special(), Ok(true));
        let mut broken = sc.clone();
        // recolour one incidence edge with palette colour 0
        let (u, v) = broken.levi.edges()[0];
        let emb = broken.embedding();
        broken.colouring.set_colour(emb[u], emb[v], 0);
        assert_eq!(broken.is_special(), Ok(false));
    }

    #[test]
    fn is_special_rejects_bad_embedding() {
        let sc = expand_words_cyclic(&q2_pair()).unwrap();
        let mut emb = sc.embedding();
        emb[1] = emb[0];
        assert_eq!(
            is_special(&sc.colouring, &sc.levi, &emb),
            Err(Error::EmbeddingNotInjective)
        );
    }

    #[test]
    fn colour_counts() {
        let mono = EdgeColouring::from_fn(5, 0, |_, _| 7);
        assert_eq!(colour_count(&mono), 1);
        let mut next = 0;
        let rainbow = EdgeColouring::from_fn(4, 0, |_, _| {
            next += 1;
            next - 1
        });
        assert_eq!(colour_count(&rainbow), 6);
    }

    #[test]
    fn canonicalize_first_seen() {
        let c = EdgeColouring::from_fn(3, 0, |u, v| if (u, v) == (0, 1) { 5 } else { 9 });
        let canon = c.canonicalize();
        assert_eq!(canon.colours(), &[0, 1, 1]);
        assert_eq!(canon.canonicalize(), canon);
    }

    #[test]
    fn canonicalize_identifies_permuted_colourings() {
        let sc = fano_colouring();
        let base = sc.colouring;
        // apply two colour permutations
        let perm_a = |c: u32| (c + 7) % 23;
        let perm_b = |c: u32| (c * 5 + 3) % 23; // 5 is invertible mod 23
        let a = EdgeColouring::from_fn(base.n(), base.palette(), |u, v| perm_a(base.colour(u, v)));
        let b = EdgeColouring::from_fn(base.n(), base.palette(), |u, v| perm_b(base.colour(u, v)));
        assert_eq!(a.canonicalize(), b.canonicalize());
        assert_ne!(a, b);
    }

    #[test]
    fn fano_construction_goldens() {
        let fano = fano_construction();
        // 6096 (C, C') pairs meet the distance-1 condition; the least
        // rotational one pairs the consecutive point cycle with the step-2
        // line cycle.
        assert_eq!(fano.valid_pairs, 6096);
        assert_eq!(fano.point_cycle, vec![0, 2, 4, 6, 8, 10, 12]);
        assert_eq!(fano.line_cycle, vec![1, 5, 9, 13, 3, 7, 11]);
        assert_eq!(fano.colouring.colouring.colour_count(), 23);
        assert_eq!(fano.colouring.is_special(), Ok(true));
        let words = fano.colouring.words().unwrap();
        // same point cycle as the published drawing, so the first word
        // agrees; the line cycle is a different valid choice.
        assert_eq!(words.w0_string(), Q2_W0);
        assert_eq!(words.w1_string(), "*1000101*001*");
        assert_eq!(words.star_offsets(), vec![1, 5, 13]);
        let residues = star_offset_residues(14, &words.star_offsets());
        assert!(crate::plane::is_planar_difference_set(7, &residues));
        // the expansion of the extracted words reproduces the colouring
        let again = expand_words(&fano.colouring.levi, &fano.colouring.labeling, &words).unwrap();
        assert_eq!(again.colouring, fano.colouring.colouring);
    }

    #[test]
    fn mrc_round_trip() {
        let sc = expand_words_cyclic(&q2_pair()).unwrap();
        let text = sc.colouring.to_mrc();
        let back = EdgeColouring::from_mrc(&text).unwrap();
        assert_eq!(back, sc.colouring);
        assert_eq!(back.to_mrc(), text);
    }

    #[test]
    fn mrc_parse_errors() {
        assert!(matches!(
            EdgeColouring::from_mrc("mrc 2\nn 3\npalette 0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            EdgeColouring::from_mrc("mrc 1\nn 3\npalette 0\n0 0\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            EdgeColouring::from_mrc("mrc 1\nn 3\npalette 0\n0 0\n0\nextra\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn word_file_round_trip() {
        let pair = q3_pair();
        let text = pair.to_file_string();
        let back = WordPair::from_file_string(&text).unwrap();
        assert_eq!(back, pair);
        assert_eq!(back.to_file_string(), text);
    }
}
