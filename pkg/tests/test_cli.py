import json
import subprocess
import sys

import pytest

from dkcat import chains as ch
from dkcat import enriched as en
from dkcat import finite_cats as fc
from dkcat import intervals as iv_mod
from dkcat import serialize as ser
from dkcat.chains import ChainComplex
from dkcat.cli import main
from dkcat.hopf import group_algebra
from dkcat.linalg import Field

Q = Field.rationals()
F2, F3, F5 = Field.prime(2), Field.prime(3), Field.prime(5)


def write(path, doc):
    path.write_text(ser.dumps(doc))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


# ------------------------------------------------------------- serialization


def test_category_document_round_trip(field):
    for A in (en.two_object(ChainComplex.disk(field, 1)), en.square_zero_category(field), en.gamma_change_base(en.unit_category(field), 2)):
        doc = json.loads(ser.dumps(ser.category_document(A)))
        B = ser.Reader(doc).category("A")
        assert B.objects == A.objects and B.homs == A.homs and B.comp == A.comp


def test_functor_document_round_trip(prime_field):
    F = en.object_inclusion(en.linearize(fc.codiscrete([0, 1]), prime_field), 0)
    doc = json.loads(ser.dumps(ser.functor_document(F)))
    G = ser.Reader(doc).functor("F")
    assert G.on_objects == F.on_objects and G.components == F.components


def test_interval_document_round_trip(field):
    for iv in (iv_mod.chain_interval(field), iv_mod.smod_interval(field, 2), iv_mod.hopf_interval(group_algebra(field, 2))):
        w = ser.Writer(field)
        w.interval(iv, "J")
        back = ser.Reader(json.loads(ser.dumps(w.doc))).interval("J")
        assert iv_mod.verify_cocategory(back).verdicts() == iv_mod.verify_cocategory(iv).verdicts()


def test_dumps_is_canonical():
    assert ser.dumps({"b": 1, "a": [1, 2]}) == ser.dumps({"a": [1, 2], "b": 1})


def test_reader_rejects_field_mismatch_and_dangling_references():
    doc = ser.category_document(en.unit_category(F2))
    with pytest.raises(ser.FormatError):
        ser.Reader(doc, F3)
    doc["categories"]["A"]["homs"][0][2] = "nowhere"
    with pytest.raises(ser.FormatError):
        ser.Reader(doc).category("A")
    with pytest.raises(ser.FormatError):
        ser.Reader({"categories": {}})


def test_non_chain_boundaries_load_but_fail_validation():
    # loading keeps the data so the validators can name the failing degree
    doc = {"field": "F2", "complexes": {"C": {"ranks": [1, 1, 1], "boundaries": [[[1]], [[1]]]}}}
    C = ser.Reader(doc).complex("C")
    assert C.validate().failing_degrees == [1]
    with pytest.raises(ser.FormatError):
        ser.Reader({"field": "F2", "complexes": {"C": {"ranks": [1, 1], "boundaries": []}}}).complex("C")


def test_rational_entries_survive_as_strings():
    A = en.two_object(ChainComplex(Q, [1, 1], [ser.matrix_from_json(Q, [["1/2"]], (1, 1))]))
    doc = json.loads(ser.dumps(ser.category_document(A)))
    assert "1/2" in json.dumps(doc)
    assert ser.Reader(doc).category("A").homs[(0, 1)] == A.homs[(0, 1)]


# ------------------------------------------------------------- verify-interval


@pytest.mark.parametrize("fld", ["Q", "F2", "F3", "F5"])
def test_builtin_chain_interval_passes(fld, capsys):
    code, rep = run(["verify-interval", "--builtin", "chain", "--field", fld], capsys)
    assert code == 0 and rep["passed"]


def test_builtin_hopf_interval_fails_strict(capsys):
    code, rep = run(["verify-interval", "--builtin", "hopf:C2", "--field", "F3"], capsys)
    assert code == 1
    verdicts = {r["axiom"]: r["verdict"] for r in rep["cocategory"]["results"]}
    assert verdicts["C3"] == "fail" and verdicts["C5"] == "pass"
    assert "h-linearity" in rep


def test_interval_file_and_report_are_byte_identical(tmp_path, capsys):
    w = ser.Writer(F3)
    w.interval(iv_mod.chain_interval(F3), "J")
    path = write(tmp_path / "iv.json", w.doc)
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(["verify-interval", path, "--report", str(out1)]) == 0
    assert main(["verify-interval", path, "--report", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()


def test_mutated_interval_file_exits_one(tmp_path, capsys):
    w = ser.Writer(F5)
    w.interval(iv_mod.report_mutation(iv_mod.chain_interval(F5), "p", 0, 0, 1), "J")
    code, rep = run(["verify-interval", write(tmp_path / "iv.json", w.doc)], capsys)
    assert code == 1 and not rep["passed"]


def test_verify_interval_input_errors(tmp_path, capsys):
    assert main(["verify-interval", "--builtin", "nonsense", "--field", "F2"]) == 2
    assert main(["verify-interval", "--builtin", "chain"]) == 2
    assert main(["verify-interval", "--builtin", "chain", "--field", "F4"]) == 2
    assert main(["verify-interval", str(tmp_path / "missing.json")]) == 2
    (tmp_path / "junk.json").write_text("{not json")
    assert main(["verify-interval", str(tmp_path / "junk.json")]) == 2
    assert main(["verify-interval", "--builtin", "chain", "--field", "F2", "--ambient", "cat"]) == 2
    assert main([]) == 2
    capsys.readouterr()


def test_cat_interval_needs_no_field(capsys):
    code, rep = run(["verify-interval", "--builtin", "cat"], capsys)
    assert code == 0 and rep["ambient"] == "cat"


# ------------------------------------------------------------- path-object


def test_path_object_on_unit_category(tmp_path, capsys):
    path = write(tmp_path / "A.json", ser.category_document(en.unit_category(F3)))
    code, rep = run(["path-object", path], capsys)
    assert code == 0 and rep["passed"]
    assert rep["bundle"]["P0-objects"] == 3 and rep["bundle"]["P-objects"] == 2
    assert rep["dk"]["i"]["dk-equiv"] and rep["dk"]["(s,t)"]["dk-fib"]


def test_path_object_trace(tmp_path, capsys):
    path = write(tmp_path / "A.json", ser.category_document(en.unit_category(F3)))
    code, rep = run(["path-object", path, "--trace", '["*","*",1]', '["*","*",2]', '["*","*",1]'], capsys)
    assert code == 0
    assert all(rep["trace"]["checks"].values())
    assert main(["path-object", path, "--trace", '["*","*",7]', '["*","*",1]', '["*","*",1]']) == 2
    capsys.readouterr()


def test_path_object_reruns_are_byte_identical(tmp_path, capsys):
    path = write(tmp_path / "A.json", ser.category_document(en.two_object(ChainComplex.disk(F2, 1))))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["path-object", path, "--report", str(a)]) == 0
    assert main(["path-object", path, "--report", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_path_object_guard_writes_nothing(tmp_path, capsys):
    path = write(tmp_path / "A.json", ser.category_document(en.linearize(fc.codiscrete([0, 1, 2]), Field.prime(11))))
    out = tmp_path / "out.json"
    assert main(["path-object", path, "--report", str(out)]) == 2
    assert not out.exists()
    assert capsys.readouterr().out == ""


def test_path_object_refuses_rationals_and_bad_categories(tmp_path, capsys):
    path = write(tmp_path / "A.json", ser.category_document(en.unit_category(Q)))
    assert main(["path-object", path]) == 2
    doc = ser.category_document(en.two_object(ChainComplex.unit(F3)))
    units = doc["categories"]["A"]["units"]
    units[0][1] = [2]
    assert main(["path-object", write(tmp_path / "B.json", doc)]) == 2
    assert main(["path-object", str(tmp_path / "nope.json")]) == 2
    capsys.readouterr()


def test_emitted_functors_feed_dk_check(tmp_path, capsys):
    path = write(tmp_path / "A.json", ser.category_document(en.two_object(ChainComplex.disk(F2, 1))))
    funcs = tmp_path / "funcs.json"
    assert main(["path-object", path, "--emit-functors", str(funcs)]) == 0
    capsys.readouterr()
    code, rep = run(["dk-check", str(funcs), "--name", "i", "--require", "dk-equiv"], capsys)
    assert code == 0 and rep["verdicts"]["dk-equiv"]
    code, rep = run(["dk-check", str(funcs), "--name", "st", "--require", "dk-fib"], capsys)
    assert code == 0 and rep["verdicts"]["dk-fib"]
    code, _ = run(["dk-check", str(funcs), "--name", "i", "--require", "dk-fib"], capsys)
    assert code == 1


# ------------------------------------------------------------- dk-check


def test_dk_check_without_requirements_reports(tmp_path, capsys):
    path = write(tmp_path / "F.json", ser.functor_document(en.collapse(ch.identity(ChainComplex.unit(F3)))))
    code, rep = run(["dk-check", path], capsys)
    assert code == 0
    assert rep["verdicts"]["locally-weq"] is False and rep["verdicts"]["pair-equal"]
    code, _ = run(["dk-check", path, "--require", "dk-equiv"], capsys)
    assert code == 1


def test_dk_check_input_errors(tmp_path, capsys):
    path = write(tmp_path / "F.json", ser.functor_document(en.identity_functor(en.unit_category(F2))))
    assert main(["dk-check", path, "--require", "nonsense"]) == 2
    assert main(["dk-check", path, "--name", "G"]) == 2
    q = write(tmp_path / "Q.json", ser.functor_document(en.identity_functor(en.unit_category(Q))))
    assert main(["dk-check", q]) == 2
    capsys.readouterr()


# ------------------------------------------------------------- dold-kan


def test_dold_kan_verb(capsys):
    code, rep = run(["dold-kan", "--trials", "10", "--seed", "3", "--max-degree", "3"], capsys)
    assert code == 0 and rep["passed"] and rep["trials"] == 10


def test_dold_kan_injected_fault(capsys):
    # unsigned shuffles only break when both factors have positive-degree chains
    code, rep = run(["dold-kan", "--trials", "20", "--seed", "0", "--inject-fault", "shuffle-sign"], capsys)
    assert code == 1
    assert rep["first-failing-trial"] == rep["failures"][0]["trial"]
    assert "shuffle is a chain map" in rep["statistics"]["failing-checks"]


def test_dold_kan_rejects_negative_trials(capsys):
    assert main(["dold-kan", "--trials", "-1"]) == 2
    capsys.readouterr()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dkcat", "verify-interval", "--builtin", "chain", "--field", "F2"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["passed"]
