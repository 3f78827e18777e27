import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from lce_tradeoff.bench import COLUMNS, SCHEMA, OracleMismatch, Workload, render, run_bench
from lce_tradeoff.cli import EXIT_COLLISION, EXIT_MISMATCH, EXIT_USAGE, main
from lce_tradeoff.dump import MAGIC, DumpError, decode, encode, read_dump, write_dump
from lce_tradeoff.mc import sample_positions
from lce_tradeoff.stats import QueryStats
from lce_tradeoff.structures import KINDS, build_structure
from lce_tradeoff.text import Text, generate, naive_lce


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def banana(tmp_path):
    path = tmp_path / "banana.txt"
    path.write_bytes(b"banana")
    return path


# dump -----------------------------------------------------------------------

def test_encode_decode_roundtrip():
    arrays = {"b": np.arange(6).reshape(2, 3), "a": np.array([-1, 2**40])}
    data = encode("det", {"n": 3, "tau": 1}, arrays)
    assert data.startswith(MAGIC)
    kind, params, back = decode(data)
    assert kind == "det" and params == {"n": 3, "tau": 1}
    assert set(back) == {"a", "b"}
    assert (back["b"] == arrays["b"]).all() and (back["a"] == arrays["a"]).all()


def test_decode_rejects_damage():
    data = encode("mc", {}, {"x": np.arange(3)})
    with pytest.raises(DumpError):
        decode(b"NOTADUMP" + data[8:])
    with pytest.raises(DumpError):
        decode(data[:-4])
    with pytest.raises(DumpError):
        decode(data + b"\0")


@pytest.mark.parametrize("kind", KINDS)
def test_dump_roundtrip_every_kind(kind, tmp_path):
    t = generate("fibonacci", 200)
    built = build_structure(kind, t, 4)
    path = tmp_path / f"{kind}.bin"
    meta = write_dump(built, path)
    assert meta["words"] == built.words
    assert json.loads((tmp_path / f"{kind}.bin.json").read_text())["kind"] == kind
    back = read_dump(path)
    assert back.words == built.words
    for i, j in [(0, 5), (3, 16), (0, 150), (199, 2), (7, 7)]:
        if kind == "nearby" and abs(i - j) > 4:
            continue
        assert back.query(i, j) == built.query(i, j)
        if kind != "dc":
            assert back.query(i, j) == naive_lce(t, i, j)


def test_read_dump_rejects_other_text(tmp_path):
    built = build_structure("det", generate("random", 64, seed=1), 4)
    write_dump(built, tmp_path / "d.bin")
    with pytest.raises(ValueError):
        read_dump(tmp_path / "d.bin", generate("random", 64, seed=2))


# cli ------------------------------------------------------------------------

def test_build_query_banana(banana, tmp_path, capsys):
    out = tmp_path / "det.bin"
    code, stdout, _ = run(capsys, "build", "--text", str(banana), "--tau", "1", "--structure", "det", "--out", str(out))
    assert code == 0 and json.loads(stdout)["kind"] == "det"
    code, stdout, _ = run(capsys, "query", str(out), "1", "3", "--checks", "oracle")
    record = json.loads(stdout)
    assert code == 0 and record["answer"] == 3 and record["oracle"] == 3
    assert "wall_time" not in record["stats"]


def test_mc_identity_query(tmp_path, capsys):
    out = tmp_path / "mc.bin"
    run(capsys, "build", "--gen", "fibonacci:n=100", "--tau", "8", "--structure", "mc", "--out", str(out))
    code, stdout, _ = run(capsys, "query", str(out), "0", "0")
    record = json.loads(stdout)
    assert record["answer"] == 100 and record["stats"]["fp_evaluations"] == 0


def test_combined_long_pair_takes_dc_path(tmp_path, capsys):
    out = tmp_path / "c.bin"
    run(capsys, "build", "--gen", "constant:n=256", "--tau", "4", "--structure", "combined", "--out", str(out))
    code, stdout, _ = run(capsys, "query", str(out), "5", "3", "--checks", "oracle")
    record = json.loads(stdout)
    assert code == 0 and record["answer"] == 251 and record["stats"]["path"] == "dc"


def test_combined_tau_n_accepted(tmp_path, capsys):
    out = tmp_path / "c.bin"
    code, stdout, _ = run(capsys, "build", "--gen", "random:n=50,seed=3", "--tau", "n",
                          "--structure", "combined", "--out", str(out))
    assert code == 0 and json.loads(stdout)["tau_eff"] == 64


def test_dc_certificate_reported_as_bound(tmp_path, capsys):
    out = tmp_path / "dc.bin"
    run(capsys, "build", "--gen", "random:n=100,seed=1", "--tau", "4", "--structure", "dc", "--out", str(out))
    code, stdout, _ = run(capsys, "query", str(out), "0", "1", "--checks", "oracle")
    record = json.loads(stdout)
    assert code == 0 and record["answer"] is None and record["bound"] == 16


def test_rebuild_is_byte_identical(tmp_path, capsys):
    for kind in ("mc", "lv", "derand", "det"):
        dumps = []
        for name in ("a", "b"):
            out = tmp_path / f"{kind}-{name}.bin"
            run(capsys, "build", "--gen", "fibonacci:n=300", "--tau", "8", "--structure", kind,
                "--seed", "5", "--out", str(out))
            dumps.append(out.read_bytes())
        assert dumps[0] == dumps[1], kind


def test_mc_dump_sample_bound(tmp_path, capsys):
    out = tmp_path / "mc.bin"
    code, stdout, _ = run(capsys, "build", "--gen", "fibonacci:n=16384", "--tau", "16", "--structure", "mc",
                          "--out", str(out))
    samples = json.loads(stdout)["samples"]
    assert samples <= 3.42 * 16384 / 16


def test_usage_errors(tmp_path, capsys, banana):
    assert run(capsys, "build", "--text", str(banana), "--tau", "0", "--structure", "det",
               "--out", str(tmp_path / "x"))[0] == EXIT_USAGE
    assert run(capsys, "build", "--text", str(banana), "--tau", "9", "--structure", "det",
               "--out", str(tmp_path / "x"))[0] == EXIT_USAGE
    assert run(capsys, "build", "--text", str(banana), "--tau", "1", "--structure", "nope",
               "--out", str(tmp_path / "x"))[0] == EXIT_USAGE
    assert run(capsys, "query", str(tmp_path / "missing.bin"), "0", "0")[0] == EXIT_USAGE
    out = tmp_path / "det.bin"
    run(capsys, "build", "--text", str(banana), "--tau", "1", "--structure", "det", "--out", str(out))
    assert run(capsys, "query", str(out), "0", "6")[0] == EXIT_USAGE
    assert run(capsys, "bench", "--gen", "constant:n=8", "--tau", "2", "--structure", "det",
               "--pairs", "0,x")[0] == EXIT_USAGE
    assert run(capsys, "bench", "--gen", "bogus:n=8", "--tau", "2", "--structure", "det")[0] == EXIT_USAGE
    assert run(capsys)[0] == EXIT_USAGE


def test_bench_empty_query_list_is_header_only(capsys):
    code, stdout, _ = run(capsys, "bench", "--gen", "random:n=64,seed=1", "--tau", "4", "--structure", "det,mc",
                          "--pairs", "")
    assert code == 0
    assert stdout == ",".join(COLUMNS) + "\n"


def test_bench_rows_and_replay(capsys):
    argv = ["bench", "--gen", "fibonacci:n=500", "--tau", "4,16,n", "--structure", "det,mc,combined,nearby",
            "--queries", "300", "--seed", "2"]
    code, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert code == 0 and first == second
    rows = list(csv.DictReader(io.StringIO(first)))
    assert len(rows) == 12
    assert all(r["schema"] == SCHEMA for r in rows)
    assert [(r["structure"], int(r["tau"])) for r in rows] == sorted((r["structure"], int(r["tau"])) for r in rows)
    for r in rows:
        if r["structure"] == "det":
            n, tau = 500, int(r["tau"])
            assert int(r["max_reduction_rounds"]) <= np.log2(n / tau) + 1 + 1e-9 or tau >= n


def test_bench_timing_columns(capsys):
    code, stdout, _ = run(capsys, "bench", "--gen", "random:n=64,seed=1", "--tau", "4", "--structure", "mc",
                          "--queries", "10", "--timing", "--format", "json")
    row = json.loads(stdout.splitlines()[0])
    assert code == 0 and "query_seconds" in row and "build_seconds" in row


def test_bench_oracle_mismatch_exit(capsys, monkeypatch):
    import lce_tradeoff.structures as structures

    def wrong(self, i, j, stats=None, debug=False):
        return 0

    monkeypatch.setattr(structures.Built, "query", wrong)
    code, _, err = run(capsys, "bench", "--gen", "constant:n=32", "--tau", "4", "--structure", "det",
                       "--queries", "5")
    assert code == EXIT_MISMATCH
    assert json.loads(err)["error"] == "oracle mismatch"


def test_run_bench_raises_with_witness():
    t = generate("constant", 32)
    w = Workload(t, [4], ["det"], pairs=[(0, 1)])
    rows = run_bench(w)
    assert rows[0]["queries"] == 1
    assert render(rows, "csv").splitlines()[0] == ",".join(COLUMNS)
    err = OracleMismatch("det", 4, 0, 1, 5, 31)
    assert err.witness["expected"] == 31


def test_verify_subcommand(capsys):
    code, stdout, _ = run(capsys, "verify", "--gen", "constant:n=64", "--tau", "4", "--seed", "1")
    assert code == 0 and json.loads(stdout)["outcome"] == "collision-free"
    argv = ["verify", "--gen", "random:n=256,sigma=2,seed=1", "--tau", "4", "--modulus", "5", "--base", "2"]
    code, stdout, _ = run(capsys, *argv)
    assert code == 0 and json.loads(stdout)["outcome"] == "collision"
    assert run(capsys, *argv, "--fail-on-collision")[0] == EXIT_COLLISION
    assert run(capsys, "verify", "--gen", "constant:n=8", "--tau", "2", "--modulus", "5")[0] == EXIT_USAGE
    assert run(capsys, "verify", "--gen", "constant:n=8", "--tau", "2", "--modulus", "6",
               "--base", "2")[0] == EXIT_USAGE


def test_derand_subcommand(capsys):
    code, stdout, _ = run(capsys, "derand", "--gen", "random:n=512,sigma=2,seed=1", "--tau", "8", "--eps", "1/2")
    record = json.loads(stdout)
    assert code == 0 and record["k_max"] == 8 and len(record["xs"]) <= 8
    assert all(r["after"] <= r["before"] for r in record["rounds"])
    assert run(capsys, "derand", "--gen", "constant:n=8", "--tau", "2", "--eps", "3/2")[0] == EXIT_USAGE


def test_generate_subcommand(tmp_path, capsys):
    out = tmp_path / "fib.txt"
    assert run(capsys, "generate", "--gen", "fibonacci:n=13", "--out", str(out))[0] == 0
    assert out.read_bytes() == b"abaababaabaab"


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "lce_tradeoff", "generate", "--gen", "constant:n=4"],
                          capture_output=True, check=False)
    assert proc.returncode == 0 and proc.stdout == b"aaaa"


def test_stats_dict_hides_wall_time():
    st = QueryStats()
    assert "wall_time" not in st.as_dict()
    assert "wall_time" in st.as_dict(timing=True)
