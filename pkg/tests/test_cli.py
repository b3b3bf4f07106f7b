import json
import subprocess
import sys


from grlab import cli, preset
from grlab.cache import DecompositionCache
from grlab.idempotents import group_algebra, primitive_decomposition
from grlab.rings import ScalarRing


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_groups_list_and_show(capsys):
    code, out, _ = run(["groups", "list"], capsys)
    assert code == 0 and "SL(2,3)" in out and "O_2: order 8" in out
    code, out, _ = run(["groups", "show", "S3"], capsys)
    assert code == 0 and json.loads(out)["class_sizes"] == [1, 3, 2]


def test_unknown_group_is_usage_error(capsys):
    code, _, err = run(["verify", "--group", "M11"], capsys)
    assert code == cli.EXIT_USAGE and "unknown preset" in err


def test_bad_flags_are_usage_errors(capsys):
    assert run(["verify", "--checks", "nope", "--group", "C2"], capsys)[0] == cli.EXIT_USAGE
    assert run(["frobnicate"], capsys)[0] == cli.EXIT_USAGE
    assert run(["verify", "--group", "S3", "--p", "5"], capsys)[0] == cli.EXIT_USAGE


def test_malformed_json_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text("{not json")
    assert run(["verify", "--config", str(cfg)], capsys)[0] == cli.EXIT_JSON
    grp = tmp_path / "g.json"
    grp.write_text("[1, 2")
    assert run(["verify", "--group", str(grp)], capsys)[0] == cli.EXIT_JSON


def test_precision_below_one(capsys):
    assert run(["verify", "--group", "C2", "--precision", "0"], capsys)[0] == cli.EXIT_PRECISION
    assert run(["decompose", "--group", "C2", "--p", "2", "--precision", "0"],
               capsys)[0] == cli.EXIT_PRECISION


def test_empty_corpus_gives_empty_report(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"corpus": []}))
    out = tmp_path / "r.json"
    code, text, _ = run(["verify", "--config", str(cfg), "--out", str(out)], capsys)
    assert code == 0 and json.loads(out.read_text()) == []
    assert "0 checks" in text


def test_verify_writes_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, text, _ = run(["verify", "--group", "S3", "--p", "2", "--out", str(out)], capsys)
    assert code == 0
    data = json.loads(out.read_text())
    names = {c["name"] for r in data for c in r["checks"]}
    assert names == set(cli.ALL_CHECKS) - {"theorem"}  # S3 has no normal 2-subgroup
    assert all(c["status"] == "pass" for r in data for c in r["checks"])
    assert "S3/p=2/x=1" in text


def test_config_file_with_custom_group(tmp_path, capsys):
    grp = tmp_path / "c5.json"
    grp.write_text(json.dumps({"name": "C5", "generators": [[1, 2, 3, 4, 0]]}))
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"corpus": [str(grp)], "k": 3, "checks": ["lin-ind", "mult-idem"]}))
    out = tmp_path / "r.json"
    code, _, _ = run(["verify", "--config", str(cfg), "--out", str(out)], capsys)
    data = json.loads(out.read_text())
    assert code == 0 and [r["instance"] for r in data] == ["C5/p=5"] + [f"C5/p=5/x={x}" for x in range(1, 5)]
    assert data[0]["checks"][0]["precision"] == 3


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"corpus": ["C2"], "colour": "red"}))
    assert run(["verify", "--config", str(cfg)], capsys)[0] == cli.EXIT_USAGE


def test_conjugate_command(capsys):
    # u = b^-1 x b in S3 for the bicyclic unit b(g=2, h=1) and x = 2
    from grlab import verify as V
    G = preset("S3")
    u = V.conjugate_unit(2, V.bicyclic_unit(G, 2, 1), V.bicyclic_inverse(G, 2, 1))
    code, out, _ = run(["conjugate", "--group", "S3", "--p", "3", "--unit", u.literal(),
                        "--target", "2"], capsys)
    data = json.loads(out)
    assert code == 0 and data["status"] == "pass" and data["mu"] is not None
    code, _, err = run(["conjugate", "--group", "S3", "--p", "3", "--unit", "(9)",
                        "--target", "2"], capsys)
    assert code == cli.EXIT_USAGE


def test_decompose_command(capsys):
    code, out, _ = run(["decompose", "--group", "S3", "--p", "2", "--precision", "4"], capsys)
    data = json.loads(out)
    assert code == 0 and data["verified"] and data["multiplicities"] == [2, 1]
    code, out, _ = run(["decompose", "--group", "S4", "--p", "3", "--x", "3"], capsys)
    assert code == 0 and json.loads(out)["tag"] == "fix<3>"


def test_deterministic_report_text(capsys):
    cfg = cli.parse_config(corpus=["A4"], seed=3, cache=False, checks=["decomp", "relproj"])
    strip = lambda s: [{**c, "millis": 0} for r in json.loads(s) for c in r["checks"]]  # noqa: E731
    a = cli.report_json(cli.run_suite(cfg))
    b = cli.report_json(cli.run_suite(cfg))
    assert strip(a) == strip(b)


def test_parallel_matches_serial():
    kw = dict(corpus=["S3", "D4"], cache=False, checks=["lin-ind", "mult-idem"])
    serial = cli.report_json(cli.run_suite(cli.parse_config(**kw)))
    parallel = cli.report_json(cli.run_suite(cli.parse_config(jobs=2, **kw)))
    clean = lambda s: [[c["witness"] for c in r["checks"]] for r in json.loads(s)]  # noqa: E731
    assert clean(serial) == clean(parallel)


def test_cache_roundtrip(tmp_path):
    G = preset("S3")
    cache = DecompositionCache(tmp_path)
    compute = lambda: primitive_decomposition(group_algebra(G, ScalarRing.padic(2, 3)))  # noqa: E731
    first = cache.get_or_compute(G, 2, 3, "RG", 0, compute)
    second = cache.get_or_compute(G, 2, 3, "RG", 0, compute)
    assert (cache.hits, cache.misses) == (1, 1)
    assert first.idempotents == second.idempotents and second.verify()
    # an entry for a different table under the same name is ignored
    path = cache.path(G, 2, 3, "RG", 0)
    data = json.loads(path.read_text())
    data["table"][0][0] = 1
    path.write_text(json.dumps(data))
    assert cache.get(G, 2, 3, "RG", 0) is None
    path.write_text("garbage")
    assert cache.get(G, 2, 3, "RG", 0) is None
    assert DecompositionCache(tmp_path, enabled=False).get(G, 2, 3, "RG", 0) is None


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "grlab.cli", "groups", "list"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "Q8" in res.stdout
