import json
import math
import os
import subprocess

import pytest

import decentral


def test_metric_examples():
    assert decentral.gini({"A": 1, "B": 3}) == pytest.approx(0.25)
    assert decentral.gini({"A": 1, "B": 1, "C": 1, "D": 97}) == pytest.approx(0.72)
    assert decentral.shannon_entropy({"A": 1, "B": 1, "C": 2}) == pytest.approx(1.5)
    assert decentral.nakamoto({"A": 0.3, "B": 0.3, "C": 0.2, "D": 0.2}) == 2
    v = decentral.compute_all({"A": 1, "B": 1})
    assert (v.gini, v.entropy_bits, v.nakamoto, v.producer_count) == (0.0, 1.0, 2, 2)


def test_errors_surface_as_decentral_error():
    with pytest.raises(decentral.DecentralError, match="EmptyTally"):
        decentral.gini({})
    with pytest.raises(decentral.DecentralError, match="InvalidThreshold"):
        decentral.nakamoto({"A": 1}, threshold=0.0)
    with pytest.raises(decentral.DecentralError, match="NonMonotonicHeight"):
        decentral.parse_stream("10,100,a\n9,200,b\n")


def test_parse_tally_roundtrip():
    text = "1,1546300800,X\n2,1546300900,X\n3,1546301000,X;Y\n"
    blocks = decentral.parse_stream(text)
    assert [b.height for b in blocks] == [1, 2, 3]
    assert decentral.tally(blocks) == {"X": 2.5, "Y": 0.5}
    assert decentral.tally(blocks, "full") == {"X": 3.0, "Y": 1.0}
    assert decentral.serialize(blocks) == text
    jsonl = decentral.serialize(blocks, "jsonl")
    assert decentral.parse_stream(jsonl, "jsonl") == blocks


def test_sliding_run_matches_window_count():
    profiles = [decentral.MinerProfile(f"m{i}", 0.25) for i in range(4)]
    blocks = decentral.generate(profiles, 1440, seed=3)
    series = decentral.run(blocks, kind="sliding", granularity="day", preset="btc", jobs=4)
    assert len(series.points) == decentral.sliding_window_count(1440, 144, 72) == 19
    assert series.summary.count == 19
    assert series.to_csv().startswith("window_label,first_height")


def test_expected_metrics():
    v = decentral.expected_metrics([decentral.MinerProfile(f"m{i}", 0.25) for i in range(4)])
    assert v.entropy_bits == pytest.approx(2.0)
    assert v.nakamoto == 3


def test_fixed_windows_and_flags():
    blocks = decentral.generate([decentral.MinerProfile("a", 0.5), decentral.MinerProfile("b", 0.5)], 144 * 10)
    assert decentral.window_labels(blocks, "fixed", "day")[0] == "2019-01-01"
    series = decentral.run(blocks, kind="fixed", granularity="day")
    assert len(series.points) == 10
    flagged = decentral.flag_anomalies(series, 3.0)
    assert all(0 <= f.window_index < 10 for f in flagged.flags)


@pytest.mark.skipif(not os.environ.get("DECENTRAL_CLI"), reason="CLI path not provided")
def test_cli_generate_and_analyze(tmp_path):
    cli = os.environ["DECENTRAL_CLI"]
    profile = tmp_path / "p.json"
    profile.write_text(json.dumps([{"id": "solo", "share": 1.0}]))
    blocks = tmp_path / "b.csv"
    subprocess.run([cli, "generate", "--profile", str(profile), "--count", "100", "--output", str(blocks)], check=True)
    assert len(blocks.read_text().splitlines()) == 100
    out = subprocess.run(
        [cli, "analyze", "--input", str(blocks), "--window-size", "10", "--out-format", "json"],
        check=True, capture_output=True, text=True,
    ).stdout
    doc = json.loads(out)
    assert len(doc["points"]) == 19
    assert all(p["nakamoto"] == 1 and p["gini"] == 0 for p in doc["points"])
    missing = subprocess.run([cli, "analyze", "--input", str(tmp_path / "nope.csv"), "--fixed", "day"],
                             capture_output=True, text=True)
    assert missing.returncode == 1
    assert "parse: cannot open" in missing.stderr
