"""End-to-end CLI behavior: payload shapes, exit codes, determinism."""

import json
import os

import pytest

from tricyclic import cli
from tricyclic.counting import SolutionCount, SystemId

M6_COUNTS = {
    "0": "1",
    "324": "4732",
    "432": "8591310",
    "468": "128432304",
    "486": "124245576",
    "504": "119277522",
    "540": "6866496",
    "648": "2548",
}


def _last_json(stream: str) -> dict:
    lines = [ln for ln in stream.strip().splitlines() if ln.startswith("{")]
    assert lines, f"no JSON line in: {stream!r}"
    return json.loads(lines[-1])


def test_weights_closed_m6(capsys):
    assert cli.main(["weights", "--m", "6"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["m"] == 6
    assert payload["l"] == 728
    assert payload["method"] == "closed"
    assert payload["counts"] == M6_COUNTS
    assert payload["total"] == "387420489"


def test_weights_rank_m2(capsys):
    assert cli.main(["weights", "--m", "2", "--method", "rank"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["counts"] == {"0": "27", "4": "324", "6": "216", "8": "162"}
    assert payload["total"] == "729"


def test_weights_csv(capsys):
    assert cli.main(["weights", "--m", "6", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "weight,count"
    assert lines[1] == "0,1"
    assert lines[2] == "324,4732"
    assert len(lines) == 9


def test_verify_all_m2(capsys):
    assert cli.main(["verify", "--m", "2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["suite"] == "all"
    assert payload["failed"] == 0
    assert payload["passed"] == len(payload["checks"]) > 0
    suites = {c["suite"] for c in payload["checks"]}
    assert suites == {"moments", "expsum", "variety", "codewords", "dual"}


def test_verify_csv_rendering(capsys):
    assert cli.main(["verify", "--m", "2", "--suite", "dual", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "suite,name,lhs,rhs,match"
    assert all(ln.startswith("dual,") and ln.endswith(",True") for ln in lines[1:])


def test_count_oracle_spec_shape(capsys):
    rc = cli.main(["count", "--system", "SYS2_HOM", "--m", "4", "--oracle"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == "1"
    assert payload["closed_form"] == "1"
    assert payload["match"] is True


def test_count_closed_only(capsys):
    assert cli.main(["count", "--system", "SYS5_HOM", "--m", "6"]) == 0
    payload = json.loads(capsys.readouterr().out)
    # 5(q-1)(8q-2p-10) + 1 at q = 729
    assert payload["count"] == str(5 * 728 * (8 * 729 - 16) + 1)


def test_count_without_closed_form_needs_oracle(capsys):
    rc = cli.main(["count", "--system", "DUAL_W3_SAME", "--m", "2"])
    assert rc == 2
    err = _last_json(capsys.readouterr().err)
    assert err["error"] == "invalid-input"
    assert "--oracle" in err["message"]


def test_count_oracle_without_closed_form(capsys):
    rc = cli.main(["count", "--system", "DUAL_W3_SAME", "--m", "2", "--oracle"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] == "4"
    assert payload["closed_form"] is None
    assert payload["match"] is None


def test_count_unknown_system(capsys):
    assert cli.main(["count", "--system", "NOPE", "--m", "2"]) == 2
    assert _last_json(capsys.readouterr().err)["error"] == "invalid-input"


def test_budget_refusal(capsys):
    rc = cli.main(["weights", "--m", "2", "--method", "rank", "--budget", "10"])
    assert rc == 2
    err = _last_json(capsys.readouterr().err)
    assert err["error"] == "budget-refused"
    assert "--budget" in err["message"]


def test_forced_mismatch_exits_1(capsys, monkeypatch):
    def wrong(system_id, p, m):
        return SolutionCount(SystemId(system_id), m, 99)

    monkeypatch.setattr(cli.counting, "closed_form_count", wrong)
    rc = cli.main(["count", "--system", "SYS2_HOM", "--m", "2", "--oracle"])
    assert rc == 1
    out, err = capsys.readouterr()
    payload = json.loads(out)
    assert payload["match"] is False
    diff = _last_json(err)
    assert diff["error"] == "verification-mismatch"
    assert diff["item"]["lhs"] == "1" and diff["item"]["rhs"] == "99"


def test_cosets_m6(capsys):
    assert cli.main(["cosets", "--m", "6"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["dimension"] == 18
    assert [(e["s"], e["size"]) for e in payload["cosets"]] == [(2, 6), (4, 6), (10, 6)]
    assert payload["cosets"][0]["elements"] == [2, 6, 18, 54, 162, 486]


def test_cosets_m2_degenerate(capsys):
    assert cli.main(["cosets", "--m", "2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["dimension"] == 3
    assert [(e["s"], e["size"]) for e in payload["cosets"]] == [(2, 2), (4, 1), (10, 2)]


def test_dump_tables(capsys):
    assert cli.main(["dump-tables"]) == 0
    payload = json.loads(capsys.readouterr().out)
    sizes = {k: (len(v["variables"]), len(v["blocks"])) for k, v in payload.items()}
    assert sizes == {"TABLE_I": (5, 40), "TABLE_II": (4, 10), "TABLE_III": (4, 8)}


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "dist.json"
    assert cli.main(["weights", "--m", "6", "--output", str(dest)]) == 0
    assert capsys.readouterr().out == ""
    payload = json.loads(dest.read_text())
    assert payload["counts"] == M6_COUNTS


def test_seed_reproducibility(capsys):
    argv = ["verify", "--m", "4", "--suite", "codewords", "--seed", "7"]
    assert cli.main(argv) == 0
    first = capsys.readouterr().out
    assert cli.main(argv) == 0
    second = capsys.readouterr().out
    assert first == second


def test_parallelism_byte_identity(capsys):
    base = ["weights", "--m", "4", "--method", "rank"]
    assert cli.main(base + ["--parallelism", "1"]) == 0
    one = capsys.readouterr().out
    assert cli.main(base + ["--parallelism", "4"]) == 0
    four = capsys.readouterr().out
    assert one == four


def test_csv_not_defined_for_count(capsys):
    rc = cli.main(["count", "--system", "SYS2_HOM", "--m", "2", "--format", "csv"])
    assert rc == 2
    assert _last_json(capsys.readouterr().err)["error"] == "invalid-input"


def test_argument_errors(capsys):
    assert cli.main(["weights"]) == 2  # missing --m
    assert _last_json(capsys.readouterr().err)["error"] == "invalid-input"
    assert cli.main([]) == 2  # missing subcommand
    assert cli.main(["weights", "--m", "2", "--parallelism", "0"]) == 2
    assert cli.main(["weights", "--m", "2", "--budget", "0"]) == 2


def test_checkpoint_dir_flag(tmp_path, capsys):
    argv = [
        "weights", "--m", "2", "--method", "rank",
        "--checkpoint-dir", str(tmp_path),
    ]
    assert cli.main(argv) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["total"] == "729"
    assert os.listdir(str(tmp_path)) == []  # checkpoint removed after completion
