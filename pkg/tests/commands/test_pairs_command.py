def test_pairs(invoke, read_table, read_summary, tmp_path):
    output = tmp_path / "pairs.csv"
    result = invoke("pairs", "-o", output)
    assert result.exit_code == 0
    rows = read_table(output)
    assert len(rows) == 201
    assert [int(r["n"]) for r in (rows[0], rows[100], rows[-1])] == [-100, 0, 100]
    summary = read_summary(tmp_path / "pairs.summary.json")
    assert summary["fidelity"] > 0.999
    assert 0 < summary["prob"] <= summary["max_psi2"]


def test_pairs_rejects_even_modes(invoke, tmp_path):
    result = invoke("pairs", "--modes", "200", "-o", tmp_path / "p.csv")
    assert result.exit_code == 2
