"""CLI smoke tests through the console entry point."""

import json

from boxbench.cli import main, parse_seeds


def test_parse_seeds():
    assert parse_seeds("0..4") == [0, 1, 2, 3, 4]
    assert parse_seeds("0,3,9") == [0, 3, 9]
    assert parse_seeds("7") == [7]


def test_envs_listing(capsys):
    assert main(["envs", "--family", "GSI"]) == 0
    out = capsys.readouterr().out
    assert "gsi/cards-ascending-10" in out
    assert main(["envs", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert any(e["id"] == "cii/complex-algebra" for e in data)


def test_run_and_replay(tmp_path, capsys):
    out = tmp_path / "report.json"
    transcripts = tmp_path / "transcripts"
    code = main([
        "run",
        "--driver", "scripted:cards-ascending-optimal",
        "--env", "gsi/cards-ascending-10",
        "--budget", "1@1",
        "--seeds", "0..1",
        "--out", str(out),
        "--transcripts", str(transcripts),
    ])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["aggregates"]["GSI/Easy"]["mean_accuracy"] == 1.0
    capsys.readouterr()
    transcript = sorted(transcripts.glob("*.json"))[0]
    assert main(["replay", "--transcript", str(transcript)]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["matches_recorded"] is True


def test_csv_export(tmp_path, capsys):
    out = tmp_path / "report.csv"
    code = main([
        "run",
        "--driver", "scripted:caesar-oracle",
        "--env", "eri/caesar-8",
        "--budget", "10@1",
        "--seeds", "0",
        "--out", str(out),
        "--format", "csv",
    ])
    assert code == 0
    assert out.read_text().splitlines()[0] == "env_id,family,difficulty,seed,accuracy"
