import contextlib
import io
import json
import shlex

import pytest

from cli_fixtures import FIXTURES
from milnorchow.cli import main, parse, request_from_args, run
from milnorchow.errors import ParseError

PARSEABLE = [argv for argv, code in FIXTURES if argv[0] != "tame" or "--domain" in argv]


def _invoke(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, json.loads(out.getvalue()), err.getvalue()


def _strip(report):
    return {k: v for k, v in report.items() if k != "timing_us"}


@pytest.mark.parametrize("argv", PARSEABLE, ids=lambda a: " ".join(a[:1] + a[2:3]))
def test_round_trip(argv):
    req = request_from_args(argv)
    assert parse(req.to_text()) == req


@pytest.mark.parametrize("argv,code", FIXTURES, ids=lambda x: x[0] if isinstance(x, list) else str(x))
def test_exit_codes_and_determinism(argv, code):
    c1, r1, err = _invoke(argv)
    c2, r2, _ = _invoke(argv)
    assert c1 == code == c2
    assert r1["exit_code"] == code
    assert json.dumps(_strip(r1), sort_keys=True) == json.dumps(_strip(r2), sort_keys=True)
    assert err.strip()


def test_report_values():
    _, r, _ = _invoke(FIXTURES[0][0])
    assert r["result"]["symbol"] == "{2}"
    _, r, _ = _invoke(["suslin", "--domain", "Q", "--curve", "curve(s; s, (s-1)/(s+1))"])
    assert r["result"]["symbol"] == "2{-1}" and r["result"]["verdict"] == "zero"
    _, r, _ = _invoke(["norm", "--domain", "ext(Fp(5), t^2+2, t)", "--symbol", "{t}"])
    assert r["result"]["symbol"] == "{2}"
    _, r, _ = _invoke(["eq", "--domain", "Q", "--degree", "2", "--symbol", "{-1,-1}"])
    assert r["result"]["verdict"] == "nonzero"


def test_no_floats_in_reports():
    def walk(x):
        if isinstance(x, float):
            raise AssertionError(x)
        if isinstance(x, dict):
            for k, v in x.items():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)

    for argv, _ in FIXTURES:
        walk(_strip(_invoke(argv)[1]))


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse('tame --domain "Fp(5)(t)" --place "place(t^2+)" --symbol "{t}"')
    assert (info.value.line, info.value.column) == (1, 11)
    with pytest.raises(ParseError):
        parse("frobnicate --domain Q")
    code, r, _ = _invoke(["tame", "--domain", "Fp(5)(t)", "--place", "place(t^2+)", "--symbol", "{t}"])
    assert code == 2 and r["error"]["code"] == "parse-error" and r["error"]["column"] == 11


def test_config_file(tmp_path):
    cfg = tmp_path / "req.json"
    cfg.write_text(json.dumps({"domain": "Fp(5)(t)", "place": "place(t)", "symbol": "{t, 2}"}))
    code, r, _ = _invoke(["tame", "--config", str(cfg)])
    assert code == 0 and r["result"]["symbol"] == "{2}"
    # flags override the file
    code, r, _ = _invoke(["tame", "--config", str(cfg), "--symbol", "{t, 3}"])
    assert r["result"]["symbol"] == "3{2}"  # 3 = 2^3 in F_5


def test_seed_recorded():
    argv = ["prescribe", "--domain", "Fp(7)", "--place", "place(t^2+1)", "--symbol", "{t}", "--seed", "3"]
    _, r, _ = _invoke(argv)
    assert r["seed"] == 3
    report, code = run(parse(shlex.join(argv)))
    assert code == 0 and _strip(report) == _strip(r)
