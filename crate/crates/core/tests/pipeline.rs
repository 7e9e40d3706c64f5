use hecke_trace::verify::{run_group, Check, RunConfig};

#[test]
fn g8_passes_every_default_check() {
    let r = run_group("G8", &RunConfig::default()).unwrap();
    assert!(r.pass, "{:#?}", r.stages.iter().filter(|s| !s.pass).collect::<Vec<_>>());
    assert_eq!(r.stage("det-exact").unwrap().details["determinant"], "c0^624");
    assert_eq!(r.stage("det-modular").unwrap().details["observed"], "c0^624");
    assert_eq!(r.stage("cond3").unwrap().details["tau_pi"], "c0^6");
    assert!(r.cache_hash.is_some());
}

#[test]
fn only_requested_stages_are_reported() {
    let cfg = RunConfig { checks: Some([Check::Lifting, Check::Cond3].into()), ..RunConfig::default() };
    let r = run_group("G5", &cfg).unwrap();
    let names: Vec<&str> = r.stages.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["cond3", "lifting"]);
    assert!(r.pass);
}

#[test]
fn specialized_block_for_g5_in_g7() {
    let cfg = RunConfig { checks: Some([Check::SpecializedBlock].into()), ..RunConfig::default() };
    let r = run_group("G5", &cfg).unwrap();
    let s = r.stage("specialized-block").unwrap();
    assert!(s.pass, "{}", s.details);
    let r = run_group("G9", &cfg).unwrap();
    assert!(r.stage("specialized-block").is_none(), "no stored specialization for G9");
}
