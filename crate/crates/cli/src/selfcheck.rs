//! Randomized comparison of the clausal operations with explicit model sets,
//! followed by a strategy and switch agreement run on two small programs.

use anyhow::{ensure, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use groundness::bool_core::{join_positional, project_onto, VarStore};
use groundness::engine::{analyze, Options, Strategy, Switches};
use groundness::frontend::{load, AbstractOptions};
use groundness::oracle::{def_hull, formula_of, models_over, ModelSet};
use groundness::Domain;

const WIDTH: usize = 5;

const PROGRAMS: [(&str, &str); 2] = [
    ("append", "app([], Y, Y).\napp([X|Xs], Y, [X|Zs]) :- app(Xs, Y, Zs).\n"),
    (
        "rotate",
        ":- entry(rot(g, any)).\nrot(X, Y) :- app(A, B, X), app(B, A, Y).\n\
         app([], Y, Y).\napp([X|Xs], Y, [X|Zs]) :- app(Xs, Y, Zs).\n",
    ),
];

fn random_def(rng: &mut ChaCha8Rng) -> ModelSet {
    let k = rng.gen_range(0..6);
    let seed: Vec<u32> = (0..k).map(|_| rng.gen_range(0..1u32 << WIDTH)).collect();
    def_hull(WIDTH, &seed)
}

fn check_pair(m1: &ModelSet, m2: &ModelSet, x: usize) -> Result<()> {
    let mut s = VarStore::new();
    let v = s.fresh_vars(WIDTH);
    let (f1, f2) = (formula_of(&mut s, m1, &v), formula_of(&mut s, m2, &v));
    ensure!(models_over(&s, &f1.meet(&f2), &v)? == m1.meet(m2), "meet of {m1:?} and {m2:?}");

    let mut s = VarStore::new();
    let (v1, v2, ys) = (s.fresh_vars(WIDTH), s.fresh_vars(WIDTH), s.fresh_vars(WIDTH));
    let (f1, f2) = (formula_of(&mut s, m1, &v1), formula_of(&mut s, m2, &v2));
    let j = join_positional(&mut s, &f1, &v1, &f2, &v2, &ys);
    ensure!(models_over(&s, &j, &ys)? == m1.join(m2), "join of {m1:?} and {m2:?}");

    let mut s = VarStore::new();
    let v = s.fresh_vars(WIDTH);
    let f = formula_of(&mut s, m1, &v);
    let keep: Vec<usize> = (0..WIDTH).filter(|&i| i != x).collect();
    let kv: Vec<_> = keep.iter().map(|&i| v[i]).collect();
    let p = project_onto(&mut s, &f, &kv);
    ensure!(models_over(&s, &p, &kv)? == m1.project_onto(&keep).restrict(&keep), "projection of {m1:?}");
    Ok(())
}

pub fn run(samples: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let m1 = random_def(&mut rng);
        let m2 = random_def(&mut rng);
        check_pair(&m1, &m2, rng.gen_range(0..WIDTH))?;
    }
    println!("operations: {samples} random pairs over {WIDTH} variables match the model oracle (seed {seed})");
    for (name, src) in PROGRAMS {
        let l = load(src, AbstractOptions::default())?;
        for domain in Domain::ALL {
            let base = analyze(&l.program, &l.entries, Options { domain, ..Options::default() })?;
            for strategy in Strategy::ALL {
                for switches in Switches::sweep() {
                    let a = analyze(&l.program, &l.entries, Options { domain, strategy, switches })?;
                    ensure!(a.equivalent(&base), "{name}: {domain} {strategy} {switches} disagrees with ord egpr");
                }
            }
        }
        println!("{name}: all strategies and switch settings agree");
    }
    Ok(true)
}
