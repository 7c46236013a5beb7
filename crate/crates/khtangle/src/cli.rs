//! Command-line interface.
//!
//! Exit codes: 0 on success, 1 when a mathematical check fails, 2 for usage,
//! parse, or I/O errors.

use crate::arc_algebra::ArcAlgebra;
use crate::burnside::{BurnsideCube, LadybugRule};
use crate::complex::TangleComplex;
use crate::corpus;
use crate::diagram::TangleDiagram;
use crate::error::KhError;
use crate::hochschild::hochschild;
use crate::homology::khovanov_homology;
use crate::matching::enumerate_matchings;
use crate::tensor::verify_gluing;
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use std::collections::BTreeMap;

#[derive(Parser)]
#[command(name = "kht", version, about = "Arc algebras, tangle complexes, and their homology")]
pub struct Cli {
    /// Number of worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Directory searched for `<name>.tgl` when an input is a bare name.
    #[arg(long, global = true)]
    pub fixtures: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// List the crossingless matchings of 2n points.
    Matchings {
        #[arg(long)]
        n: usize,
    },
    /// Describe the arc algebra H^n and optionally verify its structure.
    ArcAlgebra {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        verify: bool,
    },
    /// Build the complex of a tangle diagram and verify d² = 0 and the
    /// bimodule structure.
    Complex {
        /// Fixture name or path to a .tgl file.
        input: String,
    },
    /// Integral bigraded homology of a tangle diagram.
    Homology {
        input: String,
        /// Print the homology of each closure-matching block separately.
        #[arg(long)]
        by_matching: bool,
    },
    /// Verify the gluing isomorphism C(T1) ⊗ C(T2) ≅ C(T1 T2).
    Glue { input1: String, input2: String },
    /// Check the Burnside face and hexagon coherence of the cube.
    Coherence {
        input: String,
        /// Use the deliberately wrong ladybug pairing (expected to fail).
        #[arg(long)]
        corrupt: bool,
    },
    /// Hochschild homology of a (2n, 2n)-tangle over its arc algebra.
    Hochschild {
        input: String,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
    },
    /// Check homology invariance across the built-in Reidemeister and
    /// reindexing pairs.
    Reidemeister,
    /// List the built-in fixture diagrams.
    Fixtures {
        /// Write every fixture to `<dir>/<name>.tgl`.
        #[arg(long)]
        export: Option<std::path::PathBuf>,
    },
}

fn load(input: &str, fixtures: Option<&std::path::Path>) -> Result<TangleDiagram, KhError> {
    if let Some(dir) = fixtures {
        let candidate = dir.join(format!("{input}.tgl"));
        if candidate.is_file() {
            let text = std::fs::read_to_string(&candidate)?;
            return TangleDiagram::parse(&text);
        }
    }
    for (name, t) in corpus::standard_corpus() {
        if name == input {
            return Ok(t);
        }
    }
    let text = std::fs::read_to_string(input).map_err(|e| {
        KhError::InvalidDiagram(format!(
            "no fixture named '{input}' and cannot read it as a file: {e}"
        ))
    })?;
    TangleDiagram::parse(&text)
}

pub fn run(cli: Cli) -> i32 {
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match dispatch(cli.command, cli.fixtures.as_deref()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("kht: {e}");
            match e {
                KhError::Verification(_) => 1,
                _ => 2,
            }
        }
    }
}

fn dispatch(cmd: Command, fixtures: Option<&std::path::Path>) -> Result<(), KhError> {
    let load = |input: &str| load(input, fixtures);
    match cmd {
        Command::Matchings { n } => {
            let ms = enumerate_matchings(n);
            for m in &ms {
                println!("{m}");
            }
            println!("{} matchings of {} points", ms.len(), 2 * n);
            Ok(())
        }
        Command::ArcAlgebra { n, verify } => {
            let h = ArcAlgebra::new(n)?;
            println!("H^{n}: rank {}", h.rank());
            let mut by_q: BTreeMap<i64, usize> = BTreeMap::new();
            for i in 0..h.rank() {
                *by_q.entry(h.q_of(i)).or_insert(0) += 1;
            }
            for (q, count) in by_q {
                println!("  q={q:>3}: {count}");
            }
            if verify {
                h.verify()?;
                println!("structure verified (unital, graded, associative)");
            }
            Ok(())
        }
        Command::Complex { input } => {
            let t = load(&input)?;
            let cpx = TangleComplex::new(&t)?;
            cpx.verify()?;
            let hl = ArcAlgebra::new(t.m())?;
            let hr = ArcAlgebra::new(t.n())?;
            cpx.verify_bimodule(&hl, &hr)?;
            let (np, nm) = cpx.writhe_counts();
            println!(
                "tangle ({}, {}), {} crossings (N+={np}, N-={nm})",
                2 * t.m(),
                2 * t.n(),
                t.num_crossings()
            );
            println!("generators {}", cpx.rank());
            for i in 0..cpx.rank() {
                let g = cpx.generator(i);
                let nc = t.num_crossings();
                let v: String = (0..nc).map(|c| if g.v >> c & 1 == 1 { '1' } else { '0' }).collect();
                let cc = cpx.circle_count(g.a, g.b, g.v);
                let label: String = (0..cc)
                    .map(|c| if g.label >> c & 1 == 1 { 'X' } else { '1' })
                    .collect();
                println!(
                    "gen {i} a={} b={} v={} label={} h={} q={}",
                    cpx.left_matchings()[g.a],
                    cpx.right_matchings()[g.b],
                    if v.is_empty() { "-" } else { &v },
                    if label.is_empty() { "-" } else { &label },
                    cpx.h_of(i),
                    cpx.q_of(i)
                );
            }
            println!("differential");
            for i in 0..cpx.rank() {
                for &(j, c) in cpx.differential(i) {
                    println!("d {i} -> {j} {c:+}");
                }
            }
            println!("left_action");
            for j in 0..hl.rank() {
                for i in 0..cpx.rank() {
                    for &(i2, c) in &cpx.left_action(&hl, j, i)? {
                        println!("L {j} * {i} -> {i2} {c:+}");
                    }
                }
            }
            println!("right_action");
            for j in 0..hr.rank() {
                for i in 0..cpx.rank() {
                    for &(i2, c) in &cpx.right_action(i, &hr, j)? {
                        println!("R {i} * {j} -> {i2} {c:+}");
                    }
                }
            }
            println!("complex verified (d²=0, gradings, bimodule axioms)");
            Ok(())
        }
        Command::Homology { input, by_matching } => {
            let t = load(&input)?;
            let cpx = TangleComplex::new(&t)?;
            if by_matching {
                for a in 0..cpx.left_matchings().len() {
                    for b in 0..cpx.right_matchings().len() {
                        let h = crate::homology::khovanov_homology_at(&cpx, a, b, true)?;
                        println!(
                            "block a={} b={}:",
                            cpx.left_matchings()[a],
                            cpx.right_matchings()[b]
                        );
                        print!("{h}");
                    }
                }
            } else {
                let h = khovanov_homology(&cpx)?;
                print!("{h}");
            }
            Ok(())
        }
        Command::Glue { input1, input2 } => {
            let t1 = load(&input1)?;
            let t2 = load(&input2)?;
            let report = verify_gluing(&t1, &t2)?;
            println!(
                "gluing verified: {} tensor generators, {} relations, composite rank {}",
                report.pairs, report.relations, report.composite_rank
            );
            print!("{}", report.homology);
            Ok(())
        }
        Command::Coherence { input, corrupt } => {
            let t = load(&input)?;
            let cpx = TangleComplex::new(&t)?;
            let rule = if corrupt {
                LadybugRule::Corrupted
            } else {
                LadybugRule::Standard
            };
            let cube = BurnsideCube::new(&cpx, rule)?;
            let report = cube.check_all()?;
            println!(
                "coherence verified: {} faces ({} ladybug pairings), {} hexagons",
                report.faces_checked, report.ladybug_faces, report.hexagons_checked
            );
            Ok(())
        }
        Command::Hochschild { input, k_max } => {
            let t = load(&input)?;
            let cpx = TangleComplex::new(&t)?;
            let h = ArcAlgebra::new(t.n())?;
            let report = hochschild(&cpx, &h, k_max)?;
            println!(
                "bar truncation k ≤ {}, groups reported for t ≤ {}",
                report.k_max, report.stable_t_max
            );
            print!("{}", report.groups);
            Ok(())
        }
        Command::Reidemeister => {
            let pairs = corpus::reidemeister_pairs();
            let results: Vec<(String, Result<(), KhError>)> = pairs
                .par_iter()
                .map(|(name, t1, t2)| {
                    let check = || -> Result<(), KhError> {
                        let h1 = khovanov_homology(&TangleComplex::new(t1)?)?;
                        let h2 = khovanov_homology(&TangleComplex::new(t2)?)?;
                        if h1 != h2 {
                            return Err(KhError::Verification(format!(
                                "homology differs for {name}:\n{h1}\nvs\n{h2}"
                            )));
                        }
                        Ok(())
                    };
                    (name.to_string(), check())
                })
                .collect();
            let mut failed = false;
            for (name, r) in results {
                match r {
                    Ok(()) => println!("{name}: invariant"),
                    Err(e) => {
                        failed = true;
                        println!("{name}: FAILED ({e})");
                    }
                }
            }
            if failed {
                Err(KhError::Verification(
                    "some Reidemeister pairs disagree".into(),
                ))
            } else {
                Ok(())
            }
        }
        Command::Fixtures { export } => {
            if let Some(dir) = &export {
                std::fs::create_dir_all(dir)?;
            }
            for (name, t) in corpus::standard_corpus() {
                println!(
                    "{name}: ({}, {}) tangle, {} crossings",
                    2 * t.m(),
                    2 * t.n(),
                    t.num_crossings()
                );
                if let Some(dir) = &export {
                    std::fs::write(dir.join(format!("{name}.tgl")), t.to_text())?;
                }
            }
            Ok(())
        }
    }
}
