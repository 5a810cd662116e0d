//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::fs;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::Request;
use http_body_util::BodyExt;
use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use tower::ServiceExt;

use common::{cli, fixture, measure, s, write_corpus};
use ucca_refine::corpus::{parse_passage, write_passage, ParseMode};
use ucca_refine::fixtures::{
    category_cases, control_passages, mechanic_implicit_under_elaborator, mechanic_missing_process,
    mechanic_primary_cycle, original_corpus, random_passage, refined_corpus, ORIGINAL_SHAPE,
    REFINED_SHAPE,
};
use ucca_refine::graph::{implicit_units, scenes, validate_graph, RuleCode};
use ucca_refine::heuristics::Engine;
use ucca_refine::refinement::{
    ogorman_mapping, resolve_priority, CategoryCandidates, ImplicitCategory, OGormanType, Treatment,
};
use ucca_refine::stats::{category_distribution, cohen_kappa};
use ucca_refine::transform::{merge_sentences, split_passage, SentenceBoundaries};
use ucca_refine_cli::{router, Session};

use ImplicitCategory::*;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mechanic_structure() -> Check {
    let started = Instant::now();
    let bytes = fs::read(fixture("mechanic.xml")).map_err(|e| e.to_string())?;
    let p = parse_passage(&bytes, ParseMode::Strict).map_err(|e| e.to_string())?;
    ensure(validate_graph(&p).ok(), || {
        "fixture does not validate".into()
    })?;
    let n_scenes = scenes(&p).map_err(|e| e.to_string())?.len();
    let n_valid = implicit_units(&p).iter().filter(|u| u.valid).count();
    let n_remote = p.remote_count();
    ensure((n_scenes, n_valid, n_remote) == (2, 2, 1), || {
        format!("scenes {n_scenes}, valid implicit {n_valid}, remote {n_remote}")
    })?;
    let mutations = [
        (
            "missing P",
            mechanic_missing_process(),
            RuleCode::SceneNoMainRelation,
        ),
        (
            "primary cycle",
            mechanic_primary_cycle(),
            RuleCode::PrimaryNotTree,
        ),
        (
            "implicit under E",
            mechanic_implicit_under_elaborator(),
            RuleCode::ImplicitNotParticipant,
        ),
    ];
    for (name, m, code) in mutations {
        let codes = validate_graph(&m).codes();
        ensure(codes == vec![code], || format!("{name}: {codes:?}"))?;
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "2 scenes, 2 valid implicit, 1 remote, 3 mutations flagged, {elapsed:.1?}"
    ))
}

fn corpus_counters() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (orig, orig_refs) = write_corpus(&dir.path().join("o"), &original_corpus());
    let (refined, refs) = write_corpus(&dir.path().join("r"), &refined_corpus());
    let rows = [
        "passages",
        "passages with implicit",
        "sentences",
        "sentences with implicit",
        "implicit units",
        "valid implicit units",
    ];
    for (path, shape) in [(&orig, ORIGINAL_SHAPE), (&refined, REFINED_SHAPE)] {
        let r = cli(&["stats", s(path), "--format", "delimited"]);
        let got = rows.map(|m| measure(&r.stdout, m) as usize);
        ensure(got == shape.row(), || {
            format!("{got:?} != {:?}", shape.row())
        })?;
    }
    let d = cli(&[
        "diff",
        s(&orig),
        s(&refined),
        "--original-refinements",
        s(&orig_refs),
        "--refinements",
        s(&refs),
        "--format",
        "delimited",
    ]);
    let valid = measure(&d.stdout, "valid implicit units");
    let with = measure(&d.stdout, "passages with implicit");
    ensure((valid, with) == (250, 13), || {
        format!("diff +{valid} / +{with}")
    })?;
    Ok(format!(
        "{:?} and {:?}, diff +250 / +13",
        ORIGINAL_SHAPE.row(),
        REFINED_SHAPE.row()
    ))
}

fn category_distribution_shares() -> Check {
    const TOLERANCE: f64 = 0.01;
    let d = category_distribution::<f64>(&refined_corpus(), true).map_err(|e| e.to_string())?;
    let published = [
        (Deictic, 61, 17.52),
        (Generic, 63, 18.10),
        (GenreBased, 89, 25.57),
        (TypeIdentifiable, 33, 9.48),
        (NonSpecific, 93, 26.72),
        (IteratedSet, 9, 2.59),
    ];
    let total: usize = published.iter().map(|(_, n, _)| n).sum();
    ensure(total == 348 && d.total() == 348, || {
        format!("total {}", d.total())
    })?;
    let mut worst = 0f64;
    for (c, n, pct) in published {
        ensure(d.count(c) == n, || format!("{c}: {} != {n}", d.count(c)))?;
        let oracle = n as f64 * 100.0 / total as f64;
        ensure((d.percentage(c) - oracle).abs() < 1e-9, || {
            format!("{c}: share")
        })?;
        let gap = (d.percentage(c) - pct).abs();
        worst = worst.max(gap);
        ensure(gap <= TOLERANCE, || {
            format!("{c}: {:.4} vs {pct}", d.percentage(c))
        })?;
    }
    let sum: f64 = ImplicitCategory::ALL
        .iter()
        .map(|c| d.rounded_percentage(*c))
        .sum();
    ensure((99.95..=100.05).contains(&sum), || format!("sum {sum}"))?;
    Ok(format!(
        "max gap {worst:.4} <= {TOLERANCE}, rounded sum {sum:.2}"
    ))
}

fn priority_resolution() -> Check {
    let mut n = 0;
    for set in CategoryCandidates::all_subsets() {
        n += 1;
        let members: Vec<_> = set.iter().collect();
        let got = resolve_priority(set).ok_or("empty result")?;
        ensure(members.contains(&got), || format!("{members:?} -> {got}"))?;
        ensure(!(members.contains(&Deictic) && got == Generic), || {
            format!("{members:?}")
        })?;
        ensure(
            !(members.contains(&GenreBased) && got == NonSpecific),
            || format!("{members:?}"),
        )?;
    }
    ensure(n == 63, || format!("{n} subsets"))?;
    Ok("63 subsets".into())
}

fn ogorman() -> Check {
    use OGormanType as T;
    let expected = [
        (T::SalientRecent, Treatment::RemoteInstead),
        (T::RememberRoles, Treatment::RemoteInstead),
        (T::ScriptInferrable, Treatment::RemoteInstead),
        (T::Deictic, Treatment::MapsTo(Deictic)),
        (T::Cataphoric, Treatment::ConditionalRemoteElse(NonSpecific)),
        (T::LowInformation, Treatment::MapsTo(NonSpecific)),
        (T::IteratedEvents, Treatment::MapsTo(IteratedSet)),
        (T::Bridging, Treatment::RemoteInstead),
        (T::GenreBased, Treatment::MapsTo(GenreBased)),
        (T::Generic, Treatment::MapsTo(Generic)),
        (T::TypeIdentifiable, Treatment::MapsTo(TypeIdentifiable)),
    ];
    ensure(OGormanType::ALL.len() == expected.len(), || {
        "input count".into()
    })?;
    for (t, want) in expected {
        let got = ogorman_mapping(t);
        ensure(got == want, || format!("{t}: {got:?}"))?;
    }
    Ok("11 inputs".into())
}

fn round_trip_and_split() -> Check {
    let mut conversions = 0;
    for seed in 0..500u64 {
        let p = random_passage(seed, &format!("p{seed}"));
        let first = write_passage(&p).map_err(|e| e.to_string())?;
        let parsed =
            parse_passage(&first, ParseMode::Strict).map_err(|e| format!("{seed}: {e}"))?;
        let second = write_passage(&parsed).map_err(|e| e.to_string())?;
        ensure(first == second && parsed == p, || {
            format!("seed {seed}: bytes differ")
        })?;

        let (parts, log) = split_passage(&p, &SentenceBoundaries::from_tokens(p.tokens()))
            .map_err(|e| format!("{seed}: {e}"))?;
        let implicit_after: usize = parts.iter().map(|x| x.implicit_count()).sum();
        ensure(implicit_after == p.implicit_count() + log.len(), || {
            format!("seed {seed}: implicit")
        })?;
        let merged = merge_sentences(&parts).map_err(|e| format!("{seed}: {e}"))?;
        ensure(merged.tokens() == p.tokens(), || {
            format!("seed {seed}: tokens")
        })?;
        conversions += log.len();
    }
    Ok(format!(
        "500 passages byte-stable, {conversions} remotes converted"
    ))
}

fn heuristics() -> Check {
    let engine = Engine::default();
    let (mut hit, mut total) = (0, 0);
    for c in category_cases() {
        let doc = engine.suggest(&c.passage).map_err(|e| e.to_string())?;
        for want in &c.expected {
            total += 1;
            let got = doc
                .suggestions
                .iter()
                .find(|x| x.site.scene == want.scene && x.site.slot == want.slot);
            if got.is_some_and(|x| x.category == want.category) {
                hit += 1;
            }
        }
    }
    let mut false_sites = 0;
    let controls = control_passages();
    for p in &controls {
        false_sites += engine
            .detect_candidates(p)
            .map_err(|e| e.to_string())?
            .len();
    }
    ensure(total == 9 && hit >= 8, || format!("{hit}/{total} sites"))?;
    ensure(controls.len() == 5 && false_sites == 0, || {
        format!("{false_sites} false sites")
    })?;
    Ok(format!("{hit}/{total} sites, 0 false sites on 5 controls"))
}

fn kappa() -> Check {
    const EPS: f64 = 1e-12;
    let labels = [Deictic, Generic, GenreBased, NonSpecific, Deictic];
    let k =
        |a: &[ImplicitCategory], b: &[ImplicitCategory]| cohen_kappa::<f64>(a, b).map(|r| r.kappa);
    let one = k(&labels, &labels).map_err(|e| e.to_string())?;
    let zero = k(
        &[Deictic, Deictic, Generic, Generic],
        &[Deictic, Generic, Deictic, Generic],
    )
    .map_err(|e| e.to_string())?;
    let minus = k(&[Deictic, Generic], &[Generic, Deictic]).map_err(|e| e.to_string())?;
    ensure(
        (one - 1.0).abs() < EPS && zero.abs() < EPS && (minus + 1.0).abs() < EPS,
        || format!("{one}, {zero}, {minus}"),
    )?;
    let mut rng = StdRng::seed_from_u64(7);
    for trial in 0..300 {
        let n = 1 + trial % 40;
        let a: Vec<_> = (0..n)
            .map(|_| *ImplicitCategory::ALL.choose(&mut rng).unwrap())
            .collect();
        let b: Vec<_> = (0..n)
            .map(|_| *ImplicitCategory::ALL.choose(&mut rng).unwrap())
            .collect();
        match (k(&a, &b), k(&b, &a)) {
            (Ok(x), Ok(y)) => ensure((x - y).abs() < EPS, || format!("trial {trial}: {x} vs {y}"))?,
            (Err(_), Err(_)) => {}
            _ => return Err(format!("trial {trial}: asymmetric error")),
        }
    }
    Ok("1, 0, -1 within 1e-12; symmetric over 300 labelings".into())
}

fn cli_contract() -> Check {
    let codes = [
        cli(&["validate", s(&fixture("mechanic.xml"))]).code,
        cli(&["validate", s(&fixture("missing_process.xml"))]).code,
        cli(&["validate", s(&fixture("dangling.xml"))]).code,
    ];
    ensure(codes == [0, 1, 2], || format!("exit statuses {codes:?}"))?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (passages, refs) = write_corpus(dir.path(), &refined_corpus());
    let out = dir.path().join("suggestions");
    let batch_stats = cli(&[
        "stats",
        s(&passages),
        "--refinements",
        s(&refs),
        "--format",
        "json",
    ])
    .stdout;
    cli(&["suggest", s(&passages), "--out", s(&out)]);
    let session = Session::open(
        &passages,
        &refs,
        Engine::default(),
        ParseMode::Strict,
        false,
    )
    .map_err(|e| e.to_string())?;
    let session = Arc::new(session);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    let get = |uri: String| {
        runtime.block_on(async {
            let req = Request::get(uri).body(Body::empty()).unwrap();
            let resp = router(session.clone()).oneshot(req).await.unwrap();
            let bytes = resp.into_body().collect().await.unwrap().to_bytes();
            String::from_utf8(bytes.to_vec()).unwrap()
        })
    };
    ensure(get("/stats".into()) == batch_stats, || {
        "stats differ".into()
    })?;
    let ids: Vec<String> = session.ids().map(str::to_string).collect();
    for id in &ids {
        let file = fs::read_to_string(out.join(format!("{id}.suggestions.json")))
            .map_err(|e| e.to_string())?;
        ensure(get(format!("/passages/{id}/suggestions")) == file, || {
            format!("{id}: suggestions differ")
        })?;
    }
    Ok(format!(
        "exit 0/1/2; stats and {} suggestion documents identical",
        ids.len()
    ))
}

fn main() {
    let checks: [Criterion; 9] = [
        (
            "mechanic passage structure and mutations",
            mechanic_structure,
        ),
        ("corpus counters and diff", corpus_counters),
        ("category distribution", category_distribution_shares),
        ("priority resolution", priority_resolution),
        ("O'Gorman mapping", ogorman),
        ("round trip and sentence split", round_trip_and_split),
        ("heuristic suggestions", heuristics),
        ("Cohen's kappa", kappa),
        ("CLI exit statuses and service parity", cli_contract),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria pass",
        checks.len() - failed,
        checks.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
