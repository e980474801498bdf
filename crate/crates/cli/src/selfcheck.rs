//! Randomized differential check of an engine against the oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sole::semigroup::Add;
use sole::{Dist, FacilityId, Graph, NaiveSole, Sole};

use crate::script::{render, step, Command, Names};

/// Engine wrapper that widens every query radius by one, standing in for
/// an off-by-one in the query corner.
pub struct Faulty(pub Box<dyn Sole<Add>>);

impl Sole<Add> for Faulty {
    fn add(&mut self, v: usize, f: FacilityId, w: Add, d: Dist) -> sole::Result<()> {
        self.0.add(v, f, w, d)
    }

    fn remove(&mut self, v: usize, f: FacilityId) -> sole::Result<()> {
        self.0.remove(v, f)
    }

    fn sum(&self, v: usize, d: Dist) -> sole::Result<Option<Add>> {
        self.0.sum(v, d + 1)
    }

    fn top(&self, v: usize, k: usize, d: Dist) -> sole::Result<Vec<(FacilityId, Add)>> {
        self.0.top(v, k, d + 1)
    }
}

pub struct Divergence {
    pub transcript: Vec<String>,
    pub engine: String,
    pub oracle: String,
}

/// Random script of `ops` commands: adds, removes of live facilities and
/// queries, with radii scaled to the graph's edge lengths.
pub fn random_script(g: &Graph, seed: u64, ops: usize) -> Vec<Command> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = g.edges().iter().map(|e| e.len).max().unwrap_or(1).max(1) * 4;
    let mut live: Vec<(String, usize)> = Vec::new();
    let mut next = 0;
    let mut out = Vec::with_capacity(ops);
    for _ in 0..ops {
        let v = rng.gen_range(0..g.n());
        let d = rng.gen_range(0..=span);
        let roll = rng.gen_range(0..10);
        let cmd = if roll < 4 || (roll < 6 && live.is_empty()) {
            let f = format!("f{next}");
            next += 1;
            live.push((f.clone(), v));
            Command::Add { v, f, w: rng.gen_range(-20..100), d }
        } else if roll < 6 {
            let (f, v) = live.swap_remove(rng.gen_range(0..live.len()));
            Command::Remove { v, f }
        } else if roll < 8 {
            Command::Sum { v, d }
        } else {
            Command::Top { v, k: rng.gen_range(1..=4), d }
        };
        out.push(cmd);
    }
    out
}

/// Replays `script` on both structures and stops at the first output that
/// differs.
pub fn compare(
    g: &Graph,
    engine: &mut dyn Sole<Add>,
    script: &[Command],
) -> Result<(), Divergence> {
    let mut oracle: NaiveSole<Add> = NaiveSole::new(g.clone());
    let (mut en, mut on) = (Names::default(), Names::default());
    let mut transcript = Vec::new();
    for cmd in script {
        transcript.push(render(g, cmd));
        let a = step(engine, g, &mut en, cmd);
        let b = step(&mut oracle, g, &mut on, cmd);
        if a != b {
            let show = |r: Result<Option<String>, String>| match r {
                Ok(Some(s)) => s,
                Ok(None) => "ok".to_string(),
                Err(e) => format!("error: {e}"),
            };
            return Err(Divergence {
                transcript,
                engine: show(a),
                oracle: show(b),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use sole::TreeSole;

    fn tree() -> Graph {
        Graph::parse("v a\nv b\nv c\nv d\ne a b 2\ne b c 3\ne b d 1\n").unwrap()
    }

    #[test]
    fn honest_engine_passes() {
        let g = tree();
        let mut s: TreeSole<Add> = TreeSole::new(&g).unwrap();
        assert!(compare(&g, &mut s, &random_script(&g, 3, 1000)).is_ok());
    }

    #[test]
    fn faulty_engine_is_caught() {
        let g = tree();
        let mut s = Faulty(Box::new(TreeSole::<Add>::new(&g).unwrap()));
        let Err(d) = compare(&g, &mut s, &random_script(&g, 3, 1000)) else {
            panic!("fault went unnoticed");
        };
        assert_ne!(d.engine, d.oracle);
        assert!(!d.transcript.is_empty());
    }

    #[test]
    fn zero_ops_pass() {
        let g = tree();
        let mut s: TreeSole<Add> = TreeSole::new(&g).unwrap();
        assert!(compare(&g, &mut s, &random_script(&g, 1, 0)).is_ok());
    }
}
