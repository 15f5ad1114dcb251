import pytest


def test_fig3_defaults(invoke, read_table, output_dir):
    result = invoke("fig3")
    assert result.exit_code == 0
    rows = read_table(output_dir / "fig3.csv")
    assert len(rows) == 75
    assert list(rows[0]) == ["dx", "gc_over_g", "sigma2"]
    narrow = [r for r in rows if abs(float(r["gc_over_g"]) - 1e-3) < 1e-12]
    assert len(narrow) == 3
    assert all(float(r["sigma2"]) < 0.05 for r in narrow)
    assert all(0 <= float(r["sigma2"]) <= 1 for r in rows)


def test_fig3_with_oracle(invoke, read_table, tmp_path):
    output = tmp_path / "fig3.csv"
    result = invoke(
        "fig3", "--dx", "0", "--gc-grid", "0.1:1:2", "--with-oracle",
        "--gamma-hz", "1e6", "-o", output,
    )
    assert result.exit_code == 0
    rows = read_table(output)
    assert len(rows) == 2
    assert all(r["oracle_agrees"] == "True" for r in rows)
    assert [float(r["gc_hz"]) for r in rows] == pytest.approx([1e5, 1e6])
