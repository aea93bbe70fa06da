//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::Command;

use nearby_cli::{CheckReport, MonodromyReport, SsReport, StalkReport};
use nearby_core::filtration::{
    check_admissible, constraints, psi_cofiltration, psi_filtration, weight_cofiltration_star,
    weight_filtration_shriek, Constraint, Filtration,
};
use nearby_core::kgroup::{
    all_strata, ic_to_shriek, psi_class, shriek_to_ic, verify_all, IdentityReport,
};
use nearby_core::monodromy::grid;
use nearby_core::stalks::{complex_cohomology, e2_abutment, koszul_complex};
use nearby_core::vanishing::{
    psi_chi_concentration, run_vanishing_induction, CharacterDatum, DegreeInterval, VanishingReport,
};
use nearby_core::{Characteristic, Generator, KClass, ShriekClass};
use serde::de::DeserializeOwned;
use serde::Serialize;

type Check = Result<String, String>;
type OutputCheck = fn(&[u8]) -> Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn chars(list: &[u32]) -> Vec<Characteristic> {
    list.iter()
        .map(|&c| Characteristic::new(c).unwrap())
        .collect()
}

/// Subsets of an `n`-set of size `q`, counted by brute force.
fn count_subsets(n: u32, q: u32) -> usize {
    (0u64..(1u64 << n)).filter(|m| m.count_ones() == q).count()
}

fn binary(args: &str) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_nearby"))
        .args(args.split_whitespace())
        .output()
        .expect("the nearby binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn parse<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, String> {
    serde_json::from_slice(bytes).map_err(|e| e.to_string())
}

fn four_branch_page() -> Check {
    for c in [0, 2, 3, 5] {
        let (code, out) = binary(&format!(
            "ss --r 4 --I 1,2,3,4 --d 4 --char {c} --format json"
        ));
        ensure(code == 0, || format!("char {c}: exit {code}"))?;
        let report: SsReport = parse(&out)?;
        let dims: Vec<Vec<usize>> = report
            .page
            .rows
            .iter()
            .map(|r| r.complex.dims().to_vec())
            .collect();
        ensure(
            dims == vec![vec![4, 6, 4, 1], vec![6, 4, 1], vec![4, 1], vec![1]],
            || format!("char {c}: rows {dims:?}"),
        )?;
        let twists: Vec<i32> = report.page.rows.iter().map(|r| r.twist).collect();
        ensure(twists == vec![3, 1, -1, -3], || {
            format!("char {c}: twists {twists:?}")
        })?;
        let abut: Vec<((i32, i32), i64)> = report.abutment.entries().collect();
        ensure(
            abut == vec![((0, 3), 1), ((1, 1), 3), ((2, -1), 3), ((3, -3), 1)],
            || format!("char {c}: abutment {abut:?}"),
        )?;
    }
    Ok("rows 4,6,4,1 | 6,4,1 | 4,1 | 1, abutment 1,3,3,1 over chars 0,2,3,5".into())
}

fn oracle_equivalence() -> Check {
    let mut cases = 0;
    for r in 1..=6u32 {
        for i in all_strata(r).unwrap() {
            for d in [r as i32, r as i32 + 1] {
                let n = i.len();
                let expected: Vec<((i32, i32), i64)> = (0..n)
                    .map(|q| {
                        (
                            (q as i32, d - 1 - 2 * q as i32),
                            count_subsets(n - 1, q) as i64,
                        )
                    })
                    .collect();
                for ch in chars(&[0, 2, 3, 5]) {
                    let got: Vec<_> = e2_abutment(&i, d, ch)
                        .map_err(|e| e.to_string())?
                        .entries()
                        .collect();
                    ensure(got == expected, || {
                        format!("r={r} I={i} d={d} char={}", ch.value())
                    })?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} stalks agree"))
}

fn koszul_law() -> Check {
    let mut cases = 0;
    for m in 1..=8u32 {
        for k in 1..=m {
            let c = koszul_complex(m, k).map_err(|e| e.to_string())?;
            ensure(c.squares_to_zero(), || format!("D^2 != 0 at m={m} k={k}"))?;
            let mut expected = vec![0; (m - k + 1) as usize];
            expected[0] = count_subsets(m - 1, k - 1);
            for ch in chars(&[0, 2, 3, 5, 7]) {
                let h = complex_cohomology(&c, ch).map_err(|e| e.to_string())?;
                ensure(h.dims == expected, || {
                    format!("m={m} k={k} char={}: {:?}", ch.value(), h.dims)
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} complexes"))
}

fn kgroup_round_trips() -> Check {
    for r in 1..=8u32 {
        for i in all_strata(r).unwrap() {
            for a in [-1, 0, 1] {
                let sh = ShriekClass::single(Generator::new(i, a));
                ensure(shriek_to_ic(&i, a).to_shriek() == sh, || {
                    format!("shriek r={r} I={i} a={a}")
                })?;
                ensure(
                    ic_to_shriek(&i, a).to_ic() == KClass::single(Generator::new(i, a)),
                    || format!("ic r={r} I={i} a={a}"),
                )?;
            }
        }
    }
    for r in 1..=10u32 {
        let psi = psi_class(r).map_err(|e| e.to_string())?;
        ensure(psi.dual() == psi, || format!("dual psi r={r}"))?;
        ensure(psi.len() as u64 == r as u64 * (1 << (r - 1)), || {
            format!("count r={r}: {}", psi.len())
        })?;
    }
    Ok("basis round trips r<=8, self-duality and r*2^(r-1) constituents r<=10".into())
}

fn identity_catalog() -> Check {
    let mut total = 0;
    for r in 1..=6 {
        for rep in verify_all(r).map_err(|e| e.to_string())? {
            ensure(rep.passed, || {
                format!("{} r={r}: {:?}", rep.identity, rep.counterexample)
            })?;
            total += rep.instances;
        }
    }
    Ok(format!("{total} instances across the catalog"))
}

fn filtrations_admissible() -> Check {
    for r in 1..=6u32 {
        let cs = constraints(r).map_err(|e| e.to_string())?;
        let mut all = vec![psi_filtration(r).unwrap(), psi_cofiltration(r).unwrap()];
        for i in all_strata(r).unwrap() {
            all.push(weight_filtration_shriek(&i));
            all.push(weight_cofiltration_star(&i));
        }
        for f in &all {
            let rep = check_admissible(f, &cs).map_err(|e| e.to_string())?;
            ensure(rep.admissible, || format!("{} inadmissible", f.label()))?;
        }
    }
    let mut rejected = 0;
    for r in 2..=5u32 {
        let cs: Vec<Constraint> = constraints(r).unwrap().into_iter().collect();
        let set = cs.iter().copied().collect();
        let mut all = vec![psi_filtration(r).unwrap(), psi_cofiltration(r).unwrap()];
        for i in all_strata(r).unwrap() {
            all.push(weight_filtration_shriek(&i));
            all.push(weight_cofiltration_star(&i));
        }
        for f in &all {
            for l in 0..f.len().saturating_sub(1) {
                let touches = cs.iter().any(|c| {
                    let (a, b) = (
                        f.layers()[l].mult(&c.earlier),
                        f.layers()[l + 1].mult(&c.later),
                    );
                    a > 0 && b > 0
                });
                if !touches {
                    continue;
                }
                let swapped = f.with_layers_swapped(l, l + 1).unwrap();
                let rep = check_admissible(&swapped, &set).map_err(|e| e.to_string())?;
                ensure(!rep.admissible, || {
                    format!("{} swap {l} accepted", f.label())
                })?;
                rejected += 1;
            }
        }
    }
    Ok(format!(
        "all admissible for r<=6; {rejected} constrained swaps rejected for r<=5"
    ))
}

fn monodromy() -> Check {
    for r in 1..=12u32 {
        let g = grid(r).map_err(|e| e.to_string())?;
        ensure(g.rank_n(r) == 0 && g.rank_n(r - 1) > 0, || {
            format!("nilpotency r={r}")
        })?;
        let f = psi_filtration(r).unwrap();
        let first = f.block_layers(&f.blocks()[0]);
        let mut block_cells: Vec<(u32, i32)> = first
            .iter()
            .map(|l| {
                l.pieces()
                    .next()
                    .map(|(p, _)| (p.stratum.len(), p.twist))
                    .unwrap()
            })
            .collect();
        block_cells.sort();
        let kernel: Vec<(u32, i32)> = g.kernel_n().iter().map(|c| (c.h, c.twist())).collect();
        ensure(kernel == block_cells, || format!("kernel r={r}"))?;
        let lengths: Vec<u32> = g.jordan_type().iter().map(|b| b.length).collect();
        ensure(lengths == (1..=r).collect::<Vec<_>>(), || {
            format!("jordan r={r}: {lengths:?}")
        })?;
        for a in g.arcs() {
            ensure(a.to.twist() == a.from.twist() + 2, || {
                format!("arc {} -> {}", a.from, a.to)
            })?;
        }
    }
    Ok("N^r = 0 != N^(r-1), ker N = gr^1, strings 1..r, +2 per arc, r<=12".into())
}

fn vanishing() -> Check {
    for r in 1..=6u32 {
        for i in all_strata(r).unwrap() {
            let chi = CharacterDatum::from_support(i);
            let got = run_vanishing_induction(&chi).map_err(|e| e.to_string())?;
            for j in all_strata(r).unwrap() {
                let expected = if j.is_subset(&i) {
                    let n = (i.len() - j.len()) as i32;
                    DegreeInterval::new(-n, n)
                } else {
                    DegreeInterval::Empty
                };
                ensure(got[&j] == expected, || {
                    format!("r={r} I={i} J={j}: {}", got[&j])
                })?;
            }
            let c = psi_chi_concentration(&chi).map_err(|e| e.to_string())?;
            ensure(
                c.is_subset(&DegreeInterval::symmetric(i.len() as i32 - 1)),
                || format!("r={r} I={i}: {c}"),
            )?;
            if i.len() == 1 {
                let generic = CharacterDatum::new(i, true).map_err(|e| e.to_string())?;
                let g = psi_chi_concentration(&generic).map_err(|e| e.to_string())?;
                ensure(g == DegreeInterval::new(0, 0), || {
                    format!("generic {i}: {g}")
                })?;
            }
        }
    }
    Ok("closed form on J in I, empty elsewhere; generic [0,0]".into())
}

fn round_trips<T: DeserializeOwned + Serialize>(bytes: &[u8]) -> Result<(), String> {
    let value: T = parse(bytes)?;
    let again = serde_json::to_string_pretty(&value).map_err(|e| e.to_string())? + "\n";
    ensure(again.as_bytes() == bytes, || {
        "re-serialized JSON differs".into()
    })
}

fn determinism() -> Check {
    let commands: [(&str, OutputCheck); 11] = [
        ("class psi --r 3 --format json", round_trips::<KClass>),
        (
            "class ic-shriek --r 3 --I 2 --format json",
            round_trips::<ShriekClass>,
        ),
        (
            "filtration cofil --r 4 --format json",
            round_trips::<Filtration>,
        ),
        (
            "constraints --r 3 --format json",
            round_trips::<Vec<Constraint>>,
        ),
        (
            "check psi --r 3 --swap 0,1 --format json",
            round_trips::<CheckReport>,
        ),
        (
            "stalk --r 4 --I 1,3,4 --char 3 --format json",
            round_trips::<StalkReport>,
        ),
        (
            "ss --r 4 --I 1,2,3,4 --format json",
            round_trips::<SsReport>,
        ),
        (
            "monodromy --r 5 --format json",
            round_trips::<MonodromyReport>,
        ),
        (
            "vanishing --r 4 --chi-support 1,2 --format json",
            round_trips::<VanishingReport>,
        ),
        (
            "verify --identity all --r 3 --format json",
            round_trips::<Vec<IdentityReport>>,
        ),
        ("diagram --r 4 --format dot", |_| Ok(())),
    ];
    for (args, check) in commands {
        let first = binary(args);
        let second = binary(args);
        ensure(first == second, || format!("`{args}` differs between runs"))?;
        check(&first.1).map_err(|e| format!("`{args}`: {e}"))?;
    }
    Ok(format!(
        "{} commands byte-identical across runs; JSON round trips",
        commands.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("four-branch spectral sequence", four_branch_page),
        ("abutment equals exterior-power oracle", oracle_equivalence),
        ("Koszul kernel law", koszul_law),
        ("K-group round trips", kgroup_round_trips),
        ("identity catalog r<=6", identity_catalog),
        ("filtration admissibility", filtrations_admissible),
        ("monodromy", monodromy),
        ("vanishing", vanishing),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", n + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
