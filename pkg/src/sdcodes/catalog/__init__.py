"""Bundled matrices, permutation lists and dataset ingestion.

Entries live in ``data/`` and are listed in ``data/index.toml`` together with a
sha256 checksum and the parameters each payload must satisfy.
"""

from __future__ import annotations

import hashlib
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from .. import cyclotomic, gf2core
from ..cyclotomic import ModuleCode
from ..gf2core import BinaryCode
from ..perms import Perm, parse_cycles

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DATA_DIR = Path(__file__).parent / "data"
INDEX_PATH = DATA_DIR / "index.toml"
MANIFEST_PATH = DATA_DIR / "external.toml"

Payload = Union[BinaryCode, ModuleCode, List[Perm]]


class CatalogError(LookupError):
    pass


class ChecksumError(CatalogError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str
    file: str
    provenance: str
    checksum: str
    params: dict
    payload: object = field(compare=False, repr=False)

    @property
    def path(self) -> Path:
        return DATA_DIR / self.file


def sha256_file(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load_index() -> Dict[str, dict]:
    with open(INDEX_PATH, "rb") as fh:
        return tomllib.load(fh)["entry"]


def parse_permutation_list(text: str, source: str = "<string>") -> List[Perm]:
    degree = None
    perms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("degree"):
            degree = int(line.split()[1])
            continue
        if degree is None:
            raise gf2core.MatrixFormatError("missing 'degree N' line", lineno, source)
        try:
            perms.append(parse_cycles(line, degree))
        except ValueError as exc:
            raise gf2core.MatrixFormatError(str(exc), lineno, source)
    return perms


def format_permutation_list(perms: Sequence[Perm], degree: int) -> str:
    from ..perms import format_cycles
    return "\n".join([f"degree {degree}"] + [format_cycles(p) for p in perms]) + "\n"


def _parse_payload(kind: str, text: str, source: str):
    if kind == "binary-code":
        return gf2core.parse_matrix(text, source)
    if kind == "module-code":
        return cyclotomic.parse_module(text, source)
    if kind == "permutation-list":
        return parse_permutation_list(text, source)
    raise CatalogError(f"unknown entry kind {kind!r}")


def names() -> List[str]:
    return sorted(_load_index())


list_entries = names


def get(name: str, verify: bool = True) -> CatalogEntry:
    index = _load_index()
    if name not in index:
        raise CatalogError(f"unknown catalog entry {name!r}; available: {', '.join(sorted(index))}")
    meta = index[name]
    path = DATA_DIR / meta["file"]
    if verify:
        actual = sha256_file(path)
        if actual != meta["sha256"]:
            raise ChecksumError(f"checksum mismatch for {name}: index {meta['sha256'][:12]}, file {actual[:12]}")
    payload = _parse_payload(meta["kind"], path.read_text(), str(path))
    return CatalogEntry(name, meta["kind"], meta["file"], meta["provenance"], meta["sha256"],
                        dict(meta.get("params", {})), payload)


def load(name: str):
    return get(name).payload


def export(entry: CatalogEntry, path) -> None:
    Path(path).write_bytes(entry.path.read_bytes())


def check_params(entry: CatalogEntry) -> List[str]:
    """Compare a payload against the parameters declared for it in the index."""
    p, problems = entry.payload, []
    want = entry.params
    if entry.kind == "binary-code":
        got = {"n": p.n, "k": p.k}
        if "d" in want:
            got["d"] = gf2core.min_weight(p)
        if "self_dual" in want:
            got["self_dual"] = gf2core.is_self_dual(p)
        if "self_orthogonal" in want:
            got["self_orthogonal"] = gf2core.is_self_orthogonal(p)
        if "cycle_length" in want:
            q = want["cycle_length"]
            got["cycle_length"] = q if all(
                gf2core.weight((r >> (q * i)) & ((1 << q) - 1)) % 2 == 0
                for r in p.rows for i in range(p.n // q)) else -1
    elif entry.kind == "module-code":
        got = {"p": p.p, "c": p.c, "rows": len(p.rows)}
    else:
        got = {"degree": len(p[0]) if p else want.get("degree"), "count": len(p)}
    for key, value in want.items():
        if got.get(key) != value:
            problems.append(f"{entry.name}: {key} declared {value}, found {got.get(key)}")
    return problems


# --------------------------------------------------------------------------
# external datasets


@dataclass
class DatasetSpec:
    name: str
    n: int
    k: int
    min_weight: int
    self_orthogonal: bool = True
    count: Optional[int] = None
    completeness: str = "complete"
    citation: str = ""
    used_by: str = ""


@dataclass
class Dataset:
    name: str
    entries: List[BinaryCode]
    completeness: str
    sources: List[str]
    checksums: List[str]
    provenance: str = ""


class DatasetValidationError(ValueError):
    def __init__(self, problems: List[str]):
        self.problems = problems
        super().__init__("dataset validation failed:\n  " + "\n  ".join(problems))


def external_manifest() -> Dict[str, DatasetSpec]:
    with open(MANIFEST_PATH, "rb") as fh:
        raw = tomllib.load(fh)["dataset"]
    return {name: DatasetSpec(name=name, **fields) for name, fields in raw.items()}


def _dataset_files(path: Path) -> List[Path]:
    if path.is_dir():
        files = sorted(path.glob("*.gm"))
        if not files:
            raise DatasetValidationError([f"{path}: no .gm files"])
        return files
    if path.is_file():
        return [path]
    raise DatasetValidationError([f"{path}: no such file or directory"])


def _validate_rows(rows: Sequence[int], n: int, spec: DatasetSpec, label: str) -> List[str]:
    problems = []
    if n != spec.n:
        problems.append(f"{label}: length {n}, expected {spec.n}")
        return problems
    if spec.self_orthogonal:
        for i, r in enumerate(rows, start=1):
            if gf2core.weight(r) % 2:
                problems.append(f"{label}: row {i} has odd weight, so the code is not self-orthogonal")
        for i, u in enumerate(rows, start=1):
            for j in range(i, len(rows)):
                if gf2core.dot(u, rows[j]):
                    problems.append(f"{label}: rows {i} and {j + 1} are not orthogonal")
                    break
    code = BinaryCode.from_rows(rows, n)
    if code.k != spec.k:
        problems.append(f"{label}: dimension {code.k}, expected {spec.k}")
    elif not problems:
        d = gf2core.min_weight(code, early_exit_at=spec.min_weight)
        if d is None or d < spec.min_weight:
            problems.append(f"{label}: minimum weight {d} below {spec.min_weight}")
    return problems


def import_dataset(path, expected: Union[DatasetSpec, str], check_inequivalent: bool = True) -> Dataset:
    """Validate a directory (or single file) of generator matrices against ``expected``."""
    if isinstance(expected, str):
        manifest = external_manifest()
        if expected not in manifest:
            raise CatalogError(f"no manifest entry {expected!r}")
        expected = manifest[expected]
    files = _dataset_files(Path(path))
    problems: List[str] = []
    codes: List[BinaryCode] = []
    for fp in files:
        try:
            n, rows = gf2core.parse_rows(fp.read_text(), str(fp))
        except gf2core.MatrixFormatError as exc:
            problems.append(str(exc))
            continue
        local = _validate_rows(rows, n, expected, fp.name)
        problems.extend(local)
        if not local:
            codes.append(BinaryCode.from_rows(rows, n))
    if expected.count is not None and len(files) != expected.count:
        problems.append(f"count mismatch: {len(files)} files, manifest declares {expected.count}")
    if not problems and check_inequivalent and expected.completeness == "complete":
        from ..equiv import canonical_form
        seen = {}
        for fp, code in zip(files, codes):
            key = canonical_form(code).key
            if key in seen:
                problems.append(f"{fp.name} is equivalent to {seen[key]}")
            seen.setdefault(key, fp.name)
    if problems:
        raise DatasetValidationError(problems)
    return Dataset(expected.name, codes, expected.completeness, [str(f) for f in files],
                   [sha256_file(f) for f in files], expected.citation)


def write_dataset(dataset: Dataset, directory) -> List[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for i, code in enumerate(dataset.entries, start=1):
        fp = directory / f"{dataset.name}_{i:04d}.gm"
        gf2core.write_matrix(code, fp)
        out.append(fp)
    return out


# --------------------------------------------------------------------------
# derived stand-in for the three [23,10,8] self-orthogonal codes

_GOLAY23_GENERATOR = sum(1 << i for i in (0, 2, 4, 5, 6, 10, 11))


def golay23() -> BinaryCode:
    """The cyclic [23,12,7] Golay code."""
    return BinaryCode.from_rows([_GOLAY23_GENERATOR << s for s in range(12)], 23)


def golay_hyperplane_dataset() -> Dataset:
    """Three [23,10,8] self-orthogonal codes built from the even Golay [23,11,8] code.

    A 10-dimensional subcode is the kernel of a functional y -> <y, v> with v
    outside the Golay code.  Coset leaders of weight 1, 2 and 3 give the three
    orbits of such functionals under the Mathieu group M23.
    """
    g = golay23()
    even = BinaryCode.from_rows(
        gf2core.kernel_combinations(g.rows, [gf2core.weight(r) & 1 for r in g.rows]), 23)
    codes = []
    for leader in (0b1, 0b11, 0b111):
        rows = gf2core.kernel_combinations(even.rows, [gf2core.dot(r, leader) for r in even.rows])
        codes.append(BinaryCode.from_rows(rows, 23))
    return Dataset("sdo_23_10_8", codes, "derived", ["<derived: Golay hyperplanes>"] * 3,
                   [hashlib.sha256(gf2core.format_matrix(c).encode()).hexdigest() for c in codes],
                   "derived from the Golay code; stands in for the cited three-code classification")


# --------------------------------------------------------------------------
# index maintenance


def rebuild_index_checksums() -> None:
    """Rewrite the sha256 fields of index.toml from the files on disk (maintenance only)."""
    text = INDEX_PATH.read_text().splitlines()
    index = _load_index()
    out, current = [], None
    for line in text:
        stripped = line.strip()
        if stripped.startswith("[entry.") and stripped.endswith("]") and "params" not in stripped:
            current = stripped[len("[entry."):-1]
        if stripped.startswith("sha256") and current in index:
            line = f'sha256 = "{sha256_file(DATA_DIR / index[current]["file"])}"'
        out.append(line)
    INDEX_PATH.write_text("\n".join(out) + "\n")
