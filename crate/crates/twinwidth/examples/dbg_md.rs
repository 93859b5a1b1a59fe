// exhaustive cross-check of the decomposition against brute-force strong modules
use twinwidth::modular::{modular_decomposition, ModuleKind};
use twinwidth::Graph;

fn brute_strong_modules(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut mods = Vec::new();
    for mask in 1u64..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let is_module = (0..n).filter(|v| mask >> v & 1 == 0).all(|x| {
            let adj = g.has_edge(x, set[0]);
            set.iter().all(|&v| g.has_edge(x, v) == adj)
        });
        if is_module {
            mods.push(set);
        }
    }
    let overlaps = |a: &Vec<usize>, b: &Vec<usize>| {
        let inter = a.iter().filter(|v| b.contains(v)).count();
        inter > 0 && inter < a.len() && inter < b.len()
    };
    let mut strong: Vec<Vec<usize>> =
        mods.iter().filter(|m| mods.iter().all(|o| !overlaps(m, o))).cloned().collect();
    strong.sort();
    strong
}

fn main() {
    let n = 6usize;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut checked = 0u64;
    for mask in 0u64..1 << pairs.len() {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        let t = modular_decomposition(&g);
        let mut sets: Vec<Vec<usize>> = t.node_ids().map(|id| t.vertices(id).to_vec()).collect();
        sets.sort();
        sets.dedup();
        assert_eq!(sets, brute_strong_modules(&g), "mismatch on {edges:?}");
        for id in t.node_ids() {
            if t.kind(id) == Some(ModuleKind::Prime) {
                assert!(t.quotient(id).unwrap().n() >= 4);
            }
        }
        checked += 1;
    }
    println!("checked {checked} graphs on {n} vertices: all strong-module sets match");
}
