//! The eight acceptance criteria, one PASS/FAIL line each.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use scalc_cli::{run_verify, Global, SpecFile};
use scalc_core::hoare::check_total;
use scalc_core::laws::{self, check_law_with, exhaustive_counts, random_predset, random_relation, LawConfig, LawKind};
use scalc_core::semantics::{denote_ite, denote_seq, denote_while};
use scalc_core::syntax::parse_pred;
use scalc_core::{verify, wp, CounterexampleKind, Mode, PredSet, Relation};
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn verify_spec(name: &str, mode: Option<Mode>) -> Result<(Value, Duration), String> {
    let global = Global {
        mode,
        json: true,
        ..Global::default()
    };
    let start = Instant::now();
    let out = run_verify(&example(name), &global).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let report: Value = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
    ensure(out.code == if report["holds"] == true { 0 } else { 1 }, "exit code disagrees with verdict")?;
    Ok((report, elapsed))
}

fn branch_program() -> Outcome {
    let (report, elapsed) = verify_spec("ex41.spec", None)?;
    ensure(report["holds"] == true, "not totally correct")?;
    ensure(report["stats"]["space_size"] == 256, "unexpected space size")?;
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("totally correct over 256 states in {elapsed:.2?}"))
}

fn factorial() -> Outcome {
    let (report, elapsed) = verify_spec("ex42.spec", None)?;
    ensure(report["holds"] == true, "not totally correct")?;
    ensure(report["stats"]["space_size"] == 2048, "unexpected space size")?;
    ensure(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;
    Ok(format!("totally correct over 2048 states in {elapsed:.2?}"))
}

fn mutations() -> Outcome {
    let (report, _) = verify_spec("ex41_bad.spec", None)?;
    let c = &report["counterexample"];
    ensure(report["holds"] == false, "mutated postcondition accepted")?;
    ensure(c["kind"] == "BadSuccessor", format!("kind {}", c["kind"]))?;
    ensure(c["final"]["a"] == 10, format!("final {}", c["final"]))?;

    let spec = SpecFile::load(&example("ex42.spec")).map_err(|e| e.to_string())?;
    let m = spec.model(1 << 24).map_err(|e| e.to_string())?;
    let weak = verify(&m.program, &parse_pred("true").unwrap(), &m.post, Mode::Total, &m.space).map_err(|e| e.to_string())?;
    let cx = weak.verdict.counterexample.ok_or("weakened precondition accepted")?;
    Ok(format!(
        "a==100 refuted with final a=10; weakened factorial refuted ({} from {})",
        cx.kind.as_str(),
        m.space.display(cx.initial)
    ))
}

fn law_suite() -> Outcome {
    let start = Instant::now();
    let config = LawConfig::default();
    let theorems = laws::law_ids(&[LawKind::Theorem]);
    for id in &theorems {
        let r = check_law_with(id, &config).map_err(|e| e.to_string())?;
        ensure(r.violation_count == 0, format!("{id}: {} violations", r.violation_count))?;
        let exhaustive = exhaustive_counts(id, &[1, 2]).map_err(|e| e.to_string())?;
        let floor = exhaustive.values().sum::<u128>() + 2 * config.trials as u128;
        ensure(r.trials as u128 >= floor, format!("{id}: only {} trials", r.trials))?;
    }
    let controls = laws::law_ids(&[LawKind::NegativeControl]);
    for id in &controls {
        let r = check_law_with(id, &config).map_err(|e| e.to_string())?;
        ensure(r.violation_count >= 1, format!("{id}: no violation found"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} laws with 0 violations, {} negative controls caught, {elapsed:.2?}",
        theorems.len(),
        controls.len()
    ))
}

fn wp_oracle() -> Outcome {
    let mut checks = 0;
    for k in 0..500u64 {
        let n = 1 + (k % 5) as usize;
        let s = random_relation(n, laws::trial_seed(5, "wp-s", n, k));
        let q = random_predset(n, laws::trial_seed(5, "wp-q", n, k));
        let w = wp(&s, &q).map_err(|e| e.to_string())?;
        ensure(check_total(&w, &s, &q).unwrap().holds, format!("instance {k}: wp is not a precondition"))?;
        for j in 0..50u64 {
            let p = random_predset(n, laws::trial_seed(5, "wp-p", n, k * 50 + j));
            let holds = check_total(&p, &s, &q).unwrap().holds;
            ensure(!holds || p.is_subset(&w), format!("instance {k}: wp is not weakest"))?;
            ensure(holds == p.is_subset(&w), format!("instance {k}: P => wp does not give the triple"))?;
            checks += 1;
        }
    }
    Ok(format!("500 instances, {checks} preconditions, 0 failures"))
}

fn fixpoint() -> Outcome {
    for k in 0..200u64 {
        let n = 1 + (laws::mix64(k) % 16) as usize;
        let b = random_predset(n, laws::trial_seed(6, "guard", n, k));
        let body = random_relation(n, laws::trial_seed(6, "body", n, k));
        let w = denote_while(&b, &body).unwrap();
        let once = denote_ite(&b, &denote_seq(&body, &w).unwrap(), &Relation::identity(n)).unwrap();
        ensure(w == once, format!("trial {k} on {n} states"))?;
        let exits: PredSet = b.complement();
        ensure(w.range().is_subset(&exits), format!("trial {k}: exit inside the guard"))?;
    }
    Ok("200 random loops on up to 16 states equal their unrolling".into())
}

fn non_termination() -> Outcome {
    let (total, _) = verify_spec("diverge.spec", Some(Mode::Total))?;
    let (partial, _) = verify_spec("diverge.spec", Some(Mode::Partial))?;
    ensure(total["holds"] == false, "total correctness accepted")?;
    ensure(
        total["counterexample"]["kind"] == CounterexampleKind::NoSuccessor.as_str(),
        format!("kind {}", total["counterexample"]["kind"]),
    )?;
    ensure(partial["holds"] == true, "partial correctness rejected")?;
    Ok("total FAIL (NoSuccessor), partial PASS".into())
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_scalc");
    let ex = |n: &str| example(n).display().to_string();
    let runs: Vec<Vec<String>> = vec![
        vec!["verify".into(), ex("ex41_bad.spec")],
        vec!["verify".into(), ex("ex42.spec")],
        vec!["wp".into(), ex("ex42.spec")],
        vec!["dump-relation".into(), ex("ex42.spec")],
        vec!["export-smt".into(), ex("ex42.spec"), "-o".into(), "-".into()],
        vec![
            "laws".into(),
            "--law".into(),
            "t17".into(),
            "--law".into(),
            "negative-control-2".into(),
            "--seed".into(),
            "7".into(),
        ],
    ];
    for args in &runs {
        let once = || Command::new(bin).args(args).output().map_err(|e| e.to_string());
        let (a, b) = (once()?, once()?);
        ensure(!a.stdout.is_empty(), format!("{args:?}: empty output"))?;
        ensure(a.stdout == b.stdout, format!("{args:?}: outputs differ"))?;
        ensure(a.status.code() == b.status.code(), format!("{args:?}: exit codes differ"))?;
    }
    Ok(format!("{} commands, byte-identical stdout", runs.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("branch program golden", branch_program),
        ("factorial golden", factorial),
        ("mutation sensitivity", mutations),
        ("law suite", law_suite),
        ("wp oracle equivalence", wp_oracle),
        ("while fixpoint", fixpoint),
        ("non-termination", non_termination),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
