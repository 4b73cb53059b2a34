use std::time::Instant;

// Unpruned oracle prototype: visit every restricted-growth string over the
// 15 edges of K6; maintain a violation counter incrementally via buckets.
fn main() {
    let n = 6usize;
    let m = 3u32;
    let edge_count = n * (n - 1) / 2;
    let edge_index = |u: usize, v: usize| -> usize {
        let (u, v) = (u.min(v), u.max(v));
        u * n - u * (u + 1) / 2 + v - u - 1
    };
    // buckets of vertex sets completed at each edge
    let mut mono: Vec<Vec<Vec<usize>>> = vec![Vec::new(); edge_count];
    let mut rain: Vec<Vec<Vec<usize>>> = vec![Vec::new(); edge_count];
    let mut combos = |k: usize, out: &mut Vec<Vec<Vec<usize>>>| {
        let mut set: Vec<usize> = (0..k).collect();
        loop {
            let mut edges = Vec::new();
            for i in 0..k { for j in i+1..k { edges.push(edge_index(set[i], set[j])); } }
            edges.sort_unstable();
            let last = *edges.last().unwrap();
            out[last].push(edges);
            let mut i = k;
            loop {
                if i == 0 { return; }
                i -= 1;
                if set[i] != i + n - k { break; }
            }
            set[i] += 1;
            for j in i+1..k { set[j] = set[j-1] + 1; }
        }
    };
    combos(m as usize, &mut mono);
    combos(4, &mut rain);

    struct S<'a> {
        colours: Vec<u8>,
        mono: &'a [Vec<Vec<usize>>],
        rain: &'a [Vec<Vec<usize>>],
        best: u32,
        best_leaf: Vec<u8>,
        leaves: u64,
    }
    fn walk(s: &mut S, e: usize, used: u8, violations: u32) {
        if e == s.colours.len() {
            s.leaves += 1;
            if violations == 0 && used as u32 > s.best {
                s.best = used as u32;
                s.best_leaf = s.colours.clone();
            }
            return;
        }
        for c in 0..=used {
            s.colours[e] = c;
            let mut newv = 0;
            for set in &s.mono[e] {
                let first = s.colours[set[0]];
                if set.iter().all(|&i| s.colours[i] == first) { newv += 1; }
            }
            for set in &s.rain[e] {
                if set.iter().enumerate().all(|(i, &a)| set[i+1..].iter().all(|&b| s.colours[a] != s.colours[b])) { newv += 1; }
            }
            walk(s, e + 1, used.max(c + 1), violations + newv);
        }
    }
    let t = Instant::now();
    let mut s = S { colours: vec![0; edge_count], mono: &mono, rain: &rain, best: 0, best_leaf: vec![], leaves: 0 };
    walk(&mut s, 0, 0, 0);
    println!("unpruned maxr({n},{m}) = {} leaves={} elapsed={:?}", s.best, s.leaves, t.elapsed());
}
