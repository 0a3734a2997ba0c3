import json

from quadprimes.cli import main
from quadprimes.records import from_json_line, load_records


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_table_output(capsys, tmp_path):
    code, out, err = run(
        capsys, "analyze", "-a", "1", "-b", "1", "-c", "41", "-N", "1000",
        "--records", str(tmp_path / "r.jsonl"),
    )
    assert code == 0
    assert "x^2 + x + 41" in out
    assert "pi_f" in out and "62" in out
    assert "main term" in out
    assert err == ""


def test_analyze_records_output_parses(capsys, tmp_path):
    path = str(tmp_path / "r.jsonl")
    code, out, _ = run(
        capsys, "analyze", "-a", "1", "-b", "0", "-c", "1", "-N", "10000",
        "--format", "records", "--records", path,
    )
    assert code == 0
    rec = from_json_line(out.strip())
    assert rec.pi_f == 38 and rec.cardinality_a == 199
    assert rec.key == (1, 0, 1, 10000)
    stored = load_records(path)
    assert len(stored) == 1
    assert stored[0].payload() == rec.payload()


def test_analyze_appends_to_log(capsys, tmp_path):
    path = str(tmp_path / "r.jsonl")
    run(capsys, "analyze", "-a", "1", "-b", "0", "-c", "1", "-N", "100",
        "--records", path)
    run(capsys, "analyze", "-a", "1", "-b", "0", "-c", "1", "-N", "200",
        "--records", path)
    recs = load_records(path)
    assert [r.n_value for r in recs] == [100, 200]


def test_analyze_no_record_skips_log(capsys, tmp_path):
    path = tmp_path / "r.jsonl"
    code, _, _ = run(
        capsys, "analyze", "-a", "1", "-b", "0", "-c", "1", "-N", "100",
        "--records", str(path), "--no-record",
    )
    assert code == 0
    assert not path.exists()


def test_validation_failure_exits_2(capsys):
    code, out, err = run(capsys, "analyze", "-a", "0", "-b", "1", "-c", "1",
                         "-N", "100", "--no-record")
    assert code == 2
    assert "ZeroLeadingCoefficient" in err
    code, _, err = run(capsys, "analyze", "-a", "2", "-b", "2", "-c", "4",
                       "-N", "100", "--no-record")
    assert code == 2
    assert "CommonFactor" in err


def test_budget_failure_exits_3(capsys):
    code, _, err = run(capsys, "analyze", "-a", "1", "-b", "0", "-c", "1",
                       "-N", "100", "--budget-max-n", "50", "--no-record")
    assert code == 3
    assert "BudgetExceeded" in err
    code, _, err = run(capsys, "analyze", "-a", "1", "-b", "0", "-c", "1",
                       "-N", "1000000", "--tol", "1e-12", "--no-record")
    assert code == 3
    assert "ToleranceUnreachable" in err


def test_scan_table_skips_inadmissible(capsys, tmp_path):
    code, out, _ = run(
        capsys, "scan", "--a-range", "1:1", "--b-range", "0:1",
        "--c-range", "0:2", "-N", "500",
        "--records", str(tmp_path / "r.jsonl"),
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].lstrip().startswith("a")
    body = "\n".join(lines[1:])
    assert "skip:SquareDiscriminant" in body   # (1,0,0)
    assert "skip:ParityObstruction" in body    # (1,1,0)
    assert "ok" in body


def test_scan_records_stream(capsys, tmp_path):
    path = str(tmp_path / "r.jsonl")
    code, out, err = run(
        capsys, "scan", "--a-range", "1:1", "--b-range", "0:0",
        "--c-range", "1:2", "-N", "500", "--format", "records",
        "--records", path,
    )
    assert code == 0
    recs = [from_json_line(line) for line in out.strip().splitlines()]
    assert [(r.a, r.b, r.c) for r in recs] == [(1, 0, 1), (1, 0, 2)]
    assert len(load_records(path)) == 2
    assert "skip" not in out


def test_scan_range_parse_error_exits_2(capsys):
    code, _, err = run(capsys, "scan", "--a-range", "1--2", "-b", "0",
                       "-c", "1", "-N", "10")
    assert code == 2
    assert "SpecParseError" in err


def test_buchstab_command(capsys):
    code, out, _ = run(capsys, "buchstab", "-a", "1", "-b", "0", "-c", "1",
                       "-N", "10000", "--z", "5")
    assert code == 0
    assert "residual" in out and " 0" in out
    code, out, _ = run(capsys, "buchstab", "-a", "1", "-b", "0", "-c", "1",
                       "-N", "10000", "--z", "5", "--format", "records")
    assert code == 0
    payload = json.loads(out.strip())
    assert payload["identity_residual"] == 0
    assert payload["s_a_z"] == 99


def test_buchstab_bad_z_exits_2(capsys):
    code, _, err = run(capsys, "buchstab", "-a", "1", "-b", "0", "-c", "1",
                       "-N", "100", "--z", "50")
    assert code == 2
    assert "SpecParseError" in err


def test_lfun_command_with_oracle(capsys):
    code, out, _ = run(capsys, "lfun", "--delta", "-163", "--tol", "1e-5")
    assert code == 0
    assert "class-number oracle" in out
    code, out, _ = run(capsys, "lfun", "--delta", "-163", "--tol", "1e-5",
                       "--format", "records")
    payload = json.loads(out.strip())
    assert abs(payload["l_one"] - payload["class_number_oracle"]) <= payload["error_bound"]


def test_lfun_rejects_non_discriminant(capsys):
    code, _, err = run(capsys, "lfun", "--delta", "7")
    assert code == 2
    assert "NotADiscriminant" in err


def test_verify_suite_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "0 failed" in out
    assert out.count("ok ") >= 9


def test_settings_precedence(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "q.cfg"
    cfg.write_text("# comment\ntol = 1e-3\n")
    path = str(tmp_path / "r.jsonl")

    def bound_of(*argv):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        return from_json_line(out.strip()).l_one_bound

    base = ("analyze", "-a", "1", "-b", "0", "-c", "1", "-N", "100",
            "--format", "records", "--records", path)
    assert bound_of(*base, "--config", str(cfg)) <= 1e-3
    monkeypatch.setenv("QUADPRIMES_TOL", "1e-2")
    env_bound = bound_of(*base, "--config", str(cfg))
    assert 1e-3 < env_bound <= 1e-2  # env beats config
    flag_bound = bound_of(*base, "--config", str(cfg), "--tol", "1e-5")
    assert flag_bound <= 1e-5  # flag beats env
    monkeypatch.setenv("QUADPRIMES_CONFIG", str(cfg))
    monkeypatch.delenv("QUADPRIMES_TOL")
    assert bound_of(*base) <= 1e-3  # config path via environment


def test_config_file_errors(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense line\n")
    code, _, err = run(capsys, "analyze", "-a", "1", "-b", "0", "-c", "1",
                       "-N", "10", "--config", str(bad), "--no-record")
    assert code == 2 and "key=value" in err
    unknown = tmp_path / "unknown.cfg"
    unknown.write_text("wibble = 3\n")
    code, _, err = run(capsys, "analyze", "-a", "1", "-b", "0", "-c", "1",
                       "-N", "10", "--config", str(unknown), "--no-record")
    assert code == 2 and "unknown setting" in err


def test_repeat_runs_identical_up_to_timestamp(capsys, tmp_path):
    argv = ("analyze", "-a", "1", "-b", "1", "-c", "41", "-N", "1000",
            "--format", "records", "--records", str(tmp_path / "r.jsonl"))
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    ra, rb = from_json_line(first.strip()), from_json_line(second.strip())
    assert ra.payload() == rb.payload()
    # table mode carries no timestamp at all, so it is byte-identical
    argv_t = ("analyze", "-a", "1", "-b", "1", "-c", "41", "-N", "1000",
              "--no-record")
    _, t1, _ = run(capsys, *argv_t)
    _, t2, _ = run(capsys, *argv_t)
    assert t1 == t2


def test_cli_never_raises_across_error_taxonomy(capsys):
    import random

    rng = random.Random(30)
    cases = []
    for _ in range(120):
        cases.append(["analyze",
                      "-a", str(rng.randint(-4, 4)),
                      "-b", str(rng.randint(-6, 6)),
                      "-c", str(rng.randint(-6, 6)),
                      "-N", str(rng.choice([0, 1, 7, 100, 10**6])),
                      "--no-record"])
    cases += [
        ["analyze", "-a", "1", "-b", "0", "-c", "1", "-N", "1e99", "--no-record"],
        ["analyze", "-a", "1", "-b", "0", "-c", "1", "-N", "100",
         "--tol", "1e-15", "--no-record"],
        ["lfun", "--delta", "0"],
        ["lfun", "--delta", "49"],
        ["lfun", "--delta", "-3", "--tol", "1e-30"],
        ["buchstab", "-a", "1", "-b", "0", "-c", "1", "-N", "4", "--z", "2"],
        ["buchstab", "-a", "-1", "-b", "0", "-c", "-5", "-N", "9", "--z", "3"],
        ["scan", "-a", "1", "-b", "0", "--c-range", "0:0", "-N", "10",
         "--no-record"],
    ]
    for argv in cases:
        code = main(argv)
        capsys.readouterr()
        assert code in (0, 2, 3, 4), argv


def test_scientific_notation_accepted_for_n(capsys, tmp_path):
    code, out, _ = run(
        capsys, "analyze", "-a", "1", "-b", "0", "-c", "1", "-N", "1e4",
        "--format", "records", "--records", str(tmp_path / "r.jsonl"),
    )
    assert code == 0
    assert from_json_line(out.strip()).n_value == 10000
