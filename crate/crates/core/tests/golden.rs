mod common;

#[test]
fn reference_outputs_match_golden_files() {
    let failures: Vec<String> = common::GOLDEN_CONFIGS
        .iter()
        .filter_map(|name| common::check_golden(name).err())
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}
