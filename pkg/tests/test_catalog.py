import shutil

import pytest

from sdcodes import catalog, equiv, gf2core
from sdcodes.catalog import CatalogError, DatasetSpec, DatasetValidationError
from sdcodes.cyclotomic import ModuleCode
from sdcodes.gf2core import BinaryCode


def test_every_entry_loads_with_matching_checksum_and_params():
    names = catalog.names()
    assert len(names) == 24
    for name in names:
        entry = catalog.get(name)
        assert entry.checksum == catalog.sha256_file(entry.path)
        assert catalog.check_params(entry) == [], name


def test_payload_kinds():
    assert isinstance(catalog.load("E8"), BinaryCode)
    assert isinstance(catalog.load("M1_7_6_2_A1"), ModuleCode)
    stab = catalog.load("Stab_R24")
    assert all(sorted(p) == list(range(len(p))) for p in stab)


def test_unknown_entry_lists_available():
    with pytest.raises(CatalogError) as err:
        catalog.get("nope")
    assert "E8" in str(err.value)


@pytest.fixture
def scratch_catalog(tmp_path, monkeypatch):
    data = tmp_path / "data"
    shutil.copytree(catalog.DATA_DIR, data)
    monkeypatch.setattr(catalog, "DATA_DIR", data)
    monkeypatch.setattr(catalog, "INDEX_PATH", data / "index.toml")
    return data


def test_tampered_file_fails_checksum(scratch_catalog):
    path = scratch_catalog / "E8.gm"
    path.write_text(path.read_text() + "\n")
    with pytest.raises(catalog.ChecksumError):
        catalog.get("E8")
    assert catalog.get("E8", verify=False).payload.k == 4


def test_declared_params_mismatch_is_reported(scratch_catalog):
    # C2^4 has minimum weight 2; pretend the file held E8 instead
    (scratch_catalog / "E8.gm").write_bytes((scratch_catalog / "C2_4.gm").read_bytes())
    entry = catalog.get("E8", verify=False)
    assert any("d declared 4, found 2" in p for p in catalog.check_params(entry))


def test_export_round_trip(tmp_path):
    for name in ("Gpi_R24", "M1_7_3_23", "tau_R24_E10"):
        entry = catalog.get(name)
        out = tmp_path / entry.file
        catalog.export(entry, out)
        assert catalog.sha256_file(out) == entry.checksum


def test_permutation_list_round_trip():
    perms = catalog.load("Stab_R24")
    text = catalog.format_permutation_list(perms, 10)
    assert catalog.parse_permutation_list(text) == perms
    with pytest.raises(gf2core.MatrixFormatError):
        catalog.parse_permutation_list("(1,2)\n")
    with pytest.raises(gf2core.MatrixFormatError) as err:
        catalog.parse_permutation_list("degree 3\n(1,2)\n(1,4)\n", "p.perm")
    assert err.value.line == 3


def test_golay_dataset_codes():
    ds = catalog.golay_hyperplane_dataset()
    assert len(ds.entries) == 3 and ds.completeness == "derived"
    for code in ds.entries:
        assert (code.n, code.k) == (23, 10)
        assert gf2core.is_self_orthogonal(code)
        assert gf2core.min_weight(code) == 8
    keys = {equiv.canonical_key(c) for c in ds.entries}
    assert len(keys) == 3


def test_golay23_parameters():
    g = catalog.golay23()
    assert (g.n, g.k, gf2core.min_weight(g)) == (23, 12, 7)


def test_import_round_trip_against_manifest(tmp_path):
    ds = catalog.golay_hyperplane_dataset()
    catalog.write_dataset(ds, tmp_path)
    imported = catalog.import_dataset(tmp_path, "sdo_23_10_8")
    assert [c.rows for c in imported.entries] == [c.rows for c in ds.entries]
    assert len(imported.checksums) == 3


def test_import_rejects_odd_row_with_index(tmp_path):
    ds = catalog.golay_hyperplane_dataset()
    files = catalog.write_dataset(ds, tmp_path)
    lines = files[1].read_text().splitlines()
    # header is "n k"; flip the first bit of the fourth row
    row = lines[4]
    lines[4] = ("0" if row[0] == "1" else "1") + row[1:]
    files[1].write_text("\n".join(lines) + "\n")
    with pytest.raises(DatasetValidationError) as err:
        catalog.import_dataset(tmp_path, "sdo_23_10_8")
    assert any(files[1].name in p and "row 4 has odd weight" in p for p in err.value.problems)


def test_import_count_mismatch(tmp_path):
    ds = catalog.golay_hyperplane_dataset()
    files = catalog.write_dataset(ds, tmp_path)
    files[2].unlink()
    with pytest.raises(DatasetValidationError) as err:
        catalog.import_dataset(tmp_path, "sdo_23_10_8")
    assert any("count mismatch: 2 files" in p for p in err.value.problems)


def test_import_detects_equivalent_duplicates(tmp_path):
    ds = catalog.golay_hyperplane_dataset()
    files = catalog.write_dataset(ds, tmp_path)
    shifted = gf2core.permute(ds.entries[0], tuple((i + 1) % 23 for i in range(23)))
    gf2core.write_matrix(shifted, files[2])
    with pytest.raises(DatasetValidationError) as err:
        catalog.import_dataset(tmp_path, "sdo_23_10_8")
    assert any("equivalent to" in p for p in err.value.problems)


def test_import_wrong_dimension_and_missing_path(tmp_path):
    spec = DatasetSpec("tiny", n=8, k=4, min_weight=4, count=1)
    gf2core.write_matrix(BinaryCode.from_rows([0b11110000, 0b00001111], 8), tmp_path / "a.gm")
    with pytest.raises(DatasetValidationError) as err:
        catalog.import_dataset(tmp_path, spec)
    assert any("dimension 2, expected 4" in p for p in err.value.problems)
    with pytest.raises(DatasetValidationError):
        catalog.import_dataset(tmp_path / "missing", spec)
    with pytest.raises(CatalogError):
        catalog.import_dataset(tmp_path, "no_such_dataset")


def test_manifest_declares_external_datasets():
    manifest = catalog.external_manifest()
    assert manifest["sdo_23_10_8"].count == 3
    assert manifest["sdo_26_10_8"].count == 1768
    assert manifest["sd_24_12"].n == 24
