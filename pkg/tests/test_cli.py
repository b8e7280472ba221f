import subprocess
import sys

import pytest

from mhcbench import algebra, certfile
from mhcbench.certificates import certificate
from mhcbench.cli import main
from mhcbench.kernel import check


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_bundled(capsys):
    code, out, _ = run(capsys, "check", "--file", "or-imp-fixpoint.cert")
    assert code == 0
    assert "ok: conclusion" in out and "REJECTED" not in out


def test_check_file_and_fragment(capsys, tmp_path):
    path = tmp_path / "x.cert"
    certfile.dump(certificate("or-imp-fixpoint"), path)
    assert run(capsys, "check", "--file", str(path))[0] == 0
    assert run(capsys, "check", "--file", str(path), "--fragment", "i,c")[0] == 1


def test_check_rejects_corrupted_file(capsys, tmp_path):
    text = certfile.dumps(certificate("lemma-p-implies-P"))
    bad = text.replace("ax i.1", "ax i.2", 1)
    path = tmp_path / "bad.cert"
    path.write_text(bad)
    code, out, _ = run(capsys, "check", "--file", str(path))
    assert code == 1 and "REJECTED" in out


def test_countermodel_separation(capsys):
    code, out, _ = run(capsys, "countermodel", "--formula", "[]p -> (((q->p)->q)->q)",
                       "--class", "mHeyting", "--require-valid", "i,m1", "--max", "3")
    assert code == 1
    m, v = algebra.loads(out)
    assert m.base.labels == ("0", "a", "1") and m.box == (2, 2, 2)
    assert {k: m.base.labels[e] for k, e in v.items()} == {"p": "0", "q": "a"}


def test_countermodel_none(capsys):
    code, out, _ = run(capsys, "countermodel", "--formula", "p -> p", "--max", "3")
    assert code == 0 and "no countermodel" in out


def test_e_below_km(capsys):
    code, _, _ = run(capsys, "countermodel", "--formula", "([]p -> p) -> p", "--class", "E", "--max", "2")
    assert code == 1


def test_kripke(capsys):
    assert run(capsys, "kripke", "--formula", "((p->q)->p)->p", "--max", "2")[0] == 1
    assert run(capsys, "kripke", "--formula", "((((p->q)->p)->p)->q)->q", "--max", "3")[0] == 0


def test_double(capsys, tmp_path):
    path = tmp_path / "b2.alg"
    path.write_text(algebra.dumps(algebra.ModalAlgebra(algebra.powerset(1), (0, 1))))
    code, out, _ = run(capsys, "double", "--file", str(path))
    assert code == 0 and "doubleton classes:" in out and "K4Grz" in out


def test_translate(capsys):
    code, out, _ = run(capsys, "translate", "--formula", "[]p", "--map", "st", "--ascii")
    assert code == 0 and out.strip() == "[](p & []p) & [][](p & []p)"
    assert run(capsys, "translate", "--formula", "O p", "--map", "t")[0] == 2


def test_transform(capsys, tmp_path):
    code, out, _ = run(capsys, "transform", "--file", "demo-e-derivation.cert", "--out-dir", str(tmp_path))
    assert code == 0
    files = sorted(tmp_path.glob("*.cert"))
    assert len(files) == 3
    assert all(check(certfile.load(f)).ok for f in files)
    assert "Int + p ⊢" in out


def test_refine_and_deduce(capsys, tmp_path):
    out_path = tmp_path / "r.cert"
    assert run(capsys, "refine", "--file", "lemma-p-implies-P-ws", "--out", str(out_path))[0] == 0
    assert check(certfile.load(out_path)).ok
    code, out, _ = run(capsys, "deduce", "--file", "lemma-p-implies-P-ws", "--premise", "1")
    assert code == 0
    d = certfile.loads(out)
    assert check(d).ok and len(d.premises) == 1


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check")[0] == 2
    assert run(capsys, "check", "--file", "no-such-thing")[0] == 2
    assert run(capsys, "countermodel", "--formula", "p ->")[0] == 2
    assert run(capsys, "countermodel", "--formula", "p", "--class", "S5")[0] == 2
    assert run(capsys, "deduce", "--file", "lemma-p-implies-P-ws", "--premise", "7")[0] == 2


def test_reports_are_stable(capsys):
    first = run(capsys, "countermodel", "--formula", "[]p -> p", "--max", "3")[1]
    second = run(capsys, "countermodel", "--formula", "[]p -> p", "--max", "3")[1]
    assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mhcbench", "check", "--file", "lemma-k-replacement"],
                          capture_output=True, text=True)
    assert proc.returncode == 0


def test_certify_all(capsys):
    code, out, _ = run(capsys, "certify-all")
    assert code == 0 and "FAIL" not in out
