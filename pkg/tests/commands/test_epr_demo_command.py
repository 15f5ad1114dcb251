def test_epr_demo(invoke, read_summary, output_dir):
    result = invoke("epr-demo", "--d", "4", "--trials", "10000", "--seed", "1")
    assert result.exit_code == 0
    summary = read_summary(output_dir / "epr-demo.json")
    assert summary["matches"] == 10000
    assert summary["match_fraction"] == 1.0
    assert sum(summary["outcome_counts"]) == 10000
    assert len(summary["outcome_counts"]) == 4


def test_epr_demo_zero_trials(invoke, read_summary, output_dir):
    result = invoke("epr-demo", "--trials", "0")
    assert result.exit_code == 0
    assert read_summary(output_dir / "epr-demo.json")["match_fraction"] == 1.0


def test_epr_demo_rejects_dimension(invoke):
    assert invoke("epr-demo", "--d", "0").exit_code == 2
