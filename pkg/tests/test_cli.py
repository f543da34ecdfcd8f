import random
import shutil
import subprocess
import sys

import pytest

from sdcodes import catalog, gf2core
from sdcodes.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, run

from conftest import random_perm


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_wenum_catalog(capsys):
    code, out, _ = call(capsys, "wenum", "catalog:Gpi_R24")
    assert code == EXIT_OK
    assert "A4\t12" in out and "n=24 k=12 d=4" in out


def test_wenum_dimension_limit(capsys):
    code, _, err = call(capsys, "wenum", "catalog:Gpi_R24", "--limit", "5")
    assert code == EXIT_USAGE and "usage error" in err


def test_mindist_and_aut(capsys):
    code, out, _ = call(capsys, "mindist", "catalog:E8")
    assert code == EXIT_OK and out.startswith("d=4")
    witness = out.splitlines()[1]
    assert gf2core.vector_from_string(witness) in catalog.load("E8")
    code, out, _ = call(capsys, "aut", "catalog:E8", "--generators")
    assert out.splitlines()[0] == "order=1344" and len(out.splitlines()) > 1


def test_canon_is_invariant(capsys, tmp_path):
    code = catalog.load("G2_len16")
    moved = gf2core.permute(code, random_perm(random.Random(2), 16))
    gf2core.write_matrix(moved, tmp_path / "m.gm")
    _, a, _ = call(capsys, "canon", "catalog:G2_len16")
    _, b, _ = call(capsys, "canon", str(tmp_path / "m.gm"))
    assert a.splitlines()[0] == b.splitlines()[0]


def test_equiv_shuffled_copy(capsys, tmp_path):
    code = catalog.load("Gpi_R24")
    gf2core.write_matrix(gf2core.permute(code, random_perm(random.Random(5), 24)), tmp_path / "s.gm")
    rc, out, _ = call(capsys, "equiv", "catalog:Gpi_R24", str(tmp_path / "s.gm"), "--require")
    assert rc == EXIT_OK and out.strip() == "EQUIVALENT"
    rc, out, _ = call(capsys, "equiv", "catalog:E8", "catalog:C2_4", "--require")
    assert rc == EXIT_FAIL and out.strip() == "INEQUIVALENT"
    rc, _, _ = call(capsys, "equiv", "catalog:E8", "catalog:C2_4")
    assert rc == EXIT_OK


def test_split_and_assemble_round_trip(capsys, tmp_path):
    rc, _, _ = call(capsys, "assemble", "catalog:Gpi_R24", "catalog:Esigma_10_14_E10",
                    "--spec", "p=3,c=10,f=14", "--out", str(tmp_path / "c44.gm"))
    assert rc == EXIT_OK
    big = gf2core.read_matrix(tmp_path / "c44.gm")
    assert (big.n, big.k) == (44, 22) and gf2core.is_self_dual(big)
    rc, out, _ = call(capsys, "split", str(tmp_path / "c44.gm"), "--spec", "p=3 c=10 f=14",
                      "--out", str(tmp_path / "parts"))
    assert rc == EXIT_OK and "dim F=12 dim E=10" in out
    assert gf2core.read_matrix(tmp_path / "parts" / "C_pi.gm").same_space(catalog.load("Gpi_R24"))
    rc, _, _ = call(capsys, "assemble", str(tmp_path / "parts" / "C_pi.gm"),
                    str(tmp_path / "parts" / "C_phi.mod"), "--spec", "p=3,c=10,f=14",
                    "--out", str(tmp_path / "again.gm"))
    assert rc == EXIT_OK
    assert gf2core.read_matrix(tmp_path / "again.gm").same_space(big)


def test_split_without_automorphism_reports_witness(capsys):
    rc, _, err = call(capsys, "split", "catalog:Gpi_R24", "--spec", "p=3,c=4,f=12")
    assert rc == EXIT_FAIL and "witness" in err


def test_assemble_reports_failed_condition(capsys):
    rc, _, err = call(capsys, "assemble", "catalog:C2_4", "catalog:Esigma_10_14_E10",
                      "--spec", "p=3,c=10,f=14")
    assert rc == EXIT_FAIL and "condition (i) fails" in err


@pytest.mark.parametrize("argv", [
    ["wenum", "/no/such/file.gm"],
    ["wenum", "catalog:nope"],
    ["split", "catalog:E8", "--spec", "p=4 c=1 f=1"],
    ["split", "catalog:E8"],
    ["classify"],
    ["classify", "p=5,c=8,f=4"],
    ["frobnicate"],
    [],
    ["--threads", "0", "wenum", "catalog:E8"],
])
def test_usage_errors_exit_2(capsys, argv):
    rc, _, err = call(capsys, *argv)
    assert rc == EXIT_USAGE and "usage error" in err


def test_bad_matrix_file_is_usage_error(capsys, tmp_path):
    (tmp_path / "bad.gm").write_text("101\n1x1\n")
    rc, _, err = call(capsys, "wenum", str(tmp_path / "bad.gm"))
    assert rc == EXIT_USAGE and "bad.gm:2" in err


def test_catalog_commands(capsys, tmp_path):
    rc, out, _ = call(capsys, "catalog", "list")
    assert rc == EXIT_OK and "Gpi_R24" in out
    rc, out, _ = call(capsys, "catalog", "check", "E8")
    assert rc == EXIT_OK and out.strip() == "OK"
    rc, _, _ = call(capsys, "catalog", "export", "L_E10", "--out", str(tmp_path / "l.perm"))
    assert rc == EXIT_OK
    assert catalog.sha256_file(tmp_path / "l.perm") == catalog.get("L_E10").checksum
    rc, out, _ = call(capsys, "catalog", "show", "E8")
    assert out == catalog.get("E8").path.read_text()
    assert call(capsys, "catalog", "show")[0] == EXIT_USAGE


def test_import_command(capsys, tmp_path):
    catalog.write_dataset(catalog.golay_hyperplane_dataset(), tmp_path)
    rc, out, _ = call(capsys, "import", str(tmp_path), "--name", "sdo_23_10_8")
    assert rc == EXIT_OK and "3 codes validated" in out
    (tmp_path / "extra.gm").write_text("23 1\n" + "1" * 23 + "\n")
    rc, _, err = call(capsys, "import", str(tmp_path), "--name", "sdo_23_10_8", "--no-equiv-check")
    assert rc == EXIT_FAIL and "count mismatch" in err


def test_classify_with_expectation_and_outputs(capsys, tmp_path):
    exp = tmp_path / "b10.expect"
    exp.write_text("W1 21 1\nW1 30 1\nW1 33 1\nW1 60 1\nTOTAL 4\n")
    rc, out, _ = call(capsys, "classify", "--spec", "p=3,c=10,f=14", "--phi", "B10",
                      "--expect", str(exp), "--out", str(tmp_path / "out"))
    assert rc == EXIT_OK and "EXPECT OK" in out and "TOTAL\t\t4" in out
    assert (tmp_path / "out" / "beta_counts.png").is_file()
    assert (tmp_path / "out" / "aut_orders.png").is_file()
    assert (tmp_path / "out" / "profiles.tsv").read_text().startswith("family\tbeta\tcount")
    exp.write_text("W1 21 2\n")
    rc, _, err = call(capsys, "classify", "p=3,c=10,f=14", "--phi", "B10", "--expect", str(exp))
    assert rc == EXIT_FAIL and "EXPECT FAIL W1 21" in err


def test_classify_rejects_bad_dataset(capsys, tmp_path):
    (tmp_path / "a.gm").write_text("23 1\n" + "1" * 23 + "\n")
    rc, _, err = call(capsys, "classify", "p=7,c=3,f=23", "--dataset", str(tmp_path))
    assert rc == EXIT_FAIL and "odd weight" in err


def test_console_script_entry_point():
    exe = shutil.which("sdcodes")
    cmd = [exe] if exe else [sys.executable, "-m", "sdcodes.cli"]
    proc = subprocess.run(cmd + ["wenum", "catalog:E8"], capture_output=True, text=True)
    assert proc.returncode == 0 and "A4\t14" in proc.stdout
    proc = subprocess.run(cmd + ["wenum", "/missing"], capture_output=True, text=True)
    assert proc.returncode == 2
