"""End-to-end acceptance checks.

Each criterion test records a PASS/FAIL line that is printed in the terminal
summary.  The order-7 runs take a few minutes on one core and are shared by
the criteria through session fixtures.
"""

import contextlib
import os
import random
from pathlib import Path

import pytest

from sdcodes import catalog, classify as cl, cyclotomic as cy, decomp, equiv, gf2core
from sdcodes.classify import ExtremalProfile
from sdcodes.decomp import AutomorphismSpec
from sdcodes.perms import cycles

from conftest import ACCEPTANCE, random_code, random_perm, random_self_dual

TABLES = Path(__file__).resolve().parents[1] / "tables"
EXTERNAL_ENV = "SDCODES_SDO_23_10_8"


@contextlib.contextmanager
def criterion(number, passed_detail):
    try:
        yield
    except AssertionError as exc:
        first = str(exc).strip().splitlines()[0] if str(exc).strip() else "assertion failed"
        ACCEPTANCE[number] = ("FAIL", first)
        raise
    ACCEPTANCE.setdefault(number, ("PASS", passed_detail))


def profiles(pairs):
    return {ExtremalProfile(f, b): n for f, b, n in pairs}


def order7_table():
    return cl.parse_expect((TABLES / "order7.expect").read_text())


class Run:
    def __init__(self, spec, inputs=None, tmp=None):
        label, self.candidates, meta = cl.classify_candidates(spec, inputs)
        path = tmp / f"{label.replace(' ', '_').replace('=', '')}.jsonl"
        self.checkpoint = cl.Checkpoint(path)
        self.report = cl.run_candidates(label, self.candidates, meta, self.checkpoint)

    @property
    def evaluations(self):
        return list(self.checkpoint.done.values())


@pytest.fixture(scope="session")
def run_6_2(tmp_path_factory):
    return Run(AutomorphismSpec(7, 6, 2), tmp=tmp_path_factory.mktemp("c62"))


def _dataset_for_3_23():
    external = os.environ.get(EXTERNAL_ENV)
    if external:
        return catalog.import_dataset(external, "sdo_23_10_8")
    return catalog.golay_hyperplane_dataset()


@pytest.fixture(scope="session")
def run_3_23(tmp_path_factory):
    return Run(AutomorphismSpec(7, 3, 23), {"dataset": _dataset_for_3_23()},
               tmp=tmp_path_factory.mktemp("c323"))


@pytest.fixture(scope="session")
def run_r24(tmp_path_factory):
    return {name: Run(AutomorphismSpec(3, 10, 14), {"phi": name}, tmp=tmp_path_factory.mktemp(name))
            for name in ("B10", "E10")}


def _diff(got, want):
    keys = sorted(set(got) | set(want))
    return ", ".join(f"{k.family} {k.beta}: got {got.get(k, 0)} want {want.get(k, 0)}"
                     for k in keys if got.get(k, 0) != want.get(k, 0))


# --------------------------------------------------------------------------
# criterion 1


@pytest.mark.xfail(strict=True, reason="the W2 beta=104 code has no 7-(6,2) automorphism; see the ledger")
def test_criterion_1_type_6_2_reproduces_order7_table(run_6_2):
    exp = order7_table()
    rep = run_6_2.report
    with criterion(1, "7-(6,2) alone gives 191 codes with the tabulated beta counts"):
        assert rep.total == exp.total and rep.counts == exp.counts, (
            f"7-(6,2) gives {rep.total} codes, table lists {exp.total}; differing: "
            f"{_diff(rep.counts, exp.counts)}")


def test_order7_union_reproduces_table(run_6_2, run_3_23):
    """Both order-7 types together, globally deduplicated."""
    union = cl.merge_reports("order 7", [run_6_2.report, run_3_23.report])
    exp = order7_table()
    assert union.counts == exp.counts, _diff(union.counts, exp.counts)
    assert union.total == exp.total == 191


def test_missing_code_has_no_type_6_2_automorphism(run_6_2, run_3_23):
    """The code absent from the 7-(6,2) run is the 7-(3,23) code with |Aut| = 116121600."""
    keys_62 = {r.key for r in run_6_2.report.representatives}
    extra = [r for r in run_3_23.report.representatives if r.key not in keys_62]
    assert [(r.profile, r.aut_order) for r in extra] == [(ExtremalProfile("W2", 104), 116121600)]
    # |Aut| = 116121600 = 2^13 3^4 5^2 7 has a single factor 7, so its subgroups of
    # order 7 are conjugate and all elements of order 7 share one cycle type.  The
    # layout automorphism of the 7-(3,23) construction has 3 seven-cycles, hence
    # no element of type 7-(6,2) exists.
    order = extra[0].aut_order
    assert order % 7 == 0 and order % 49 != 0
    sigma = AutomorphismSpec(7, 3, 23).permutation()
    assert equiv.is_automorphism(extra[0].code, sigma)
    assert len(cycles(sigma)) == 3


# --------------------------------------------------------------------------
# criterion 2


def test_criterion_2_case_subtotals(run_6_2):
    rep = run_6_2.report
    with criterion(2, "case I 1 (W1 38, |Aut| 8064); case II 21 + 19; case III 64 + 87"):
        case1 = rep.group_counts("case I / E8")
        assert case1 == profiles([("W1", 38, 1)]), f"case I / E8: {case1}"
        assert rep.group_counts("case I / C2^4") == {}
        assert [r.aut_order for r in rep.groups["case I / E8"].representatives] == [8064]
        sizes = {name: len(g.representatives) for name, g in rep.groups.items()}
        assert sizes["case II / C2^4"] == 21, f"case II / C2^4 gives {sizes['case II / C2^4']}"
        assert sizes["case II / E8"] == 19, f"case II / E8 gives {sizes['case II / E8']}"
        assert sizes["case III / E8"] == 64, f"case III / E8 gives {sizes['case III / E8']}"
        assert sizes["case III / C2^4"] == 87, f"case III / C2^4 gives {sizes['case III / C2^4']}"
        e8 = {(p.family, p.beta) for p in rep.group_counts("case III / E8")}
        assert e8 == {("W1", b) for b in (10, 17, 24, 31, 38, 52, 122)}, f"case III / E8 profiles {e8}"
        c24 = {(p.family, p.beta) for p in rep.group_counts("case III / C2^4")}
        assert c24 == {("W2", b) for b in (0, 7, 14, 21, 28, 35, 42, 56, 154)}, \
            f"case III / C2^4 profiles {c24}"


# --------------------------------------------------------------------------
# criterion 3


def test_criterion_3_type_3_23(run_3_23):
    rep = run_3_23.report
    source = "external dataset" if os.environ.get(EXTERNAL_ENV) else \
        f"derived Golay dataset (set {EXTERNAL_ENV} to use an external one)"
    with criterion(3, f"3 codes with the stated profiles and aut orders; {source}"):
        got = sorted((r.profile.family, r.profile.beta, r.aut_order) for r in rep.representatives)
        assert got == [("W1", 122, 3251404800), ("W2", 104, 116121600), ("W2", 154, 786839961600)], \
            f"7-(3,23) gives {got}"


# --------------------------------------------------------------------------
# criterion 4


@pytest.mark.xfail(strict=True, reason="|Aut| = 720 is impossible for the E10 beta=21 code; see the ledger")
def test_criterion_4_r24_desk_check(run_r24):
    b10 = run_r24["B10"].report
    e10 = run_r24["E10"].report
    with criterion(4, "B10: 4 codes, E10: 7 codes, betas and aut orders as stated"):
        got_b = sorted((r.profile.beta, r.aut_order) for r in b10.representatives)
        assert got_b == [(21, 48), (30, 72), (33, 432), (60, 10368)], f"B10 gives {got_b}"
        assert e10.total == 7, f"E10 gives {e10.total} codes"
        betas = sorted(r.profile.beta for r in e10.representatives)
        assert betas == sorted([42, 30, 36, 24, 42, 30, 21]), f"E10 betas {betas}"
        auts = sorted(r.aut_order for r in e10.representatives)
        want = sorted([3072, 24, 192, 36, 1152, 24, 720])
        assert auts == want, f"E10 aut orders {auts}, stated {want}"


def test_r24_desk_expect_file(run_r24):
    merged = cl.merge_reports("R24", [run_r24["B10"].report, run_r24["E10"].report])
    assert cl.check_expectation(merged, cl.parse_expect((TABLES / "r24_desk.expect").read_text())) == []


def _weight8_design_group(code):
    words = gf2core.codewords_of_weights(code, [8])
    sub = gf2core.BinaryCode.from_rows(words, code.n)
    return sub, equiv.aut_order(sub).order


def test_e10_beta21_code_cannot_have_aut_720(run_r24):
    """The weight-8 words span a subcode whose group contains Aut(C); it has order 48."""
    rep = next(r for r in run_r24["E10"].report.representatives if r.profile.beta == 21)
    sub, order = _weight8_design_group(rep.code)
    # frozen from an independent graph-isomorphism (VF2) count on the 128 supports
    assert (sub.k, order) == (21, 48)
    assert rep.aut_order == 24 and order % rep.aut_order == 0
    assert order % 720 != 0


def test_e10_beta24_design_group(run_r24):
    rep = next(r for r in run_r24["E10"].report.representatives if r.profile.beta == 24)
    _, order = _weight8_design_group(rep.code)
    # frozen from the same VF2 oracle
    assert order == 72 and rep.aut_order == 36


def test_published_e10_taus_give_the_same_codes(run_r24):
    published = cl.classify(AutomorphismSpec(3, 10, 14), {"phi": "E10", "published_tau": True})
    assert {r.key for r in published.representatives} == {r.key for r in run_r24["E10"].report.representatives}


# --------------------------------------------------------------------------
# criterion 5


def _all_runs(run_6_2, run_3_23, run_r24):
    return [run_6_2, run_3_23, run_r24["B10"], run_r24["E10"]]


def test_criterion_5a_candidates_self_dual_with_dimension_identities(run_6_2, run_3_23, run_r24):
    with criterion("5a", "every assembled candidate is self-dual with dim F = (c+f)/2, dim E = c(p-1)/2"):
        count = 0
        for run in _all_runs(run_6_2, run_3_23, run_r24):
            for cand in run.candidates:
                spec = cand.spec
                code = decomp.assemble(cand.code_pi, cand.code_phi, spec)
                assert gf2core.is_self_dual(code), f"candidate {cand.index} not self-dual"
                parts = decomp.split(code, spec)
                assert parts.fixed.k == (spec.c + spec.f) // 2
                assert parts.even.k == spec.c * (spec.p - 1) // 2
                count += 1
        assert count == 429 + 18 + 5 + 7
        ACCEPTANCE["5a"] = ("PASS", f"{count} candidates self-dual with the dimension identities")


def test_criterion_5b_profiles_resolve(run_6_2, run_3_23, run_r24):
    with criterion("5b", "beta_profile resolves for every d=8 code and A8/A10/A12 follow"):
        passed = 0
        for run in _all_runs(run_6_2, run_3_23, run_r24):
            for ev in run.evaluations:
                if ev.key is None:
                    continue
                passed += 1
                assert ev.profile is not None
        for run in _all_runs(run_6_2, run_3_23, run_r24):
            for rep in run.report.representatives:
                wd = gf2core.weight_distribution(rep.code)
                prof = cl.beta_profile(wd)
                assert prof == rep.profile
                assert wd[8] == 44 + 4 * prof.beta
                assert (wd[8], wd[10], wd[12]) == prof.coefficients()
        assert passed > 0
        ACCEPTANCE["5b"] = ("PASS", f"{passed} codes with d=8 all resolve to a profile")


def test_criterion_5c_equivalence_matches_brute_force():
    rng = random.Random(2024)
    pool = []
    for _ in range(60):
        n = rng.choice([4, 6, 8])
        pool.append(random_self_dual(rng, n) if rng.random() < 0.6 else random_code(rng, n, rng.randint(2, n - 2)))
    with criterion("5c", "canonical keys agree with brute force on 200 pairs (n <= 8)"):
        disagreements = []
        pairs = equal = 0
        while pairs < 200:
            a = rng.choice(pool)
            b = gf2core.permute(a, random_perm(rng, a.n)) if rng.random() < 0.5 else rng.choice(pool)
            if a.n != b.n:
                continue
            truth = equiv.brute_force_equiv(a, b)
            if (equiv.canonical_key(a) == equiv.canonical_key(b)) != truth or equiv.are_equivalent(a, b) != truth:
                disagreements.append((a, b))
            pairs += 1
            equal += truth
        assert not disagreements, f"{len(disagreements)} disagreements"
        assert 0 < equal < pairs
        ACCEPTANCE["5c"] = ("PASS", f"{pairs} pairs ({equal} equivalent), zero disagreements")


def test_criterion_5d_key_invariance():
    rng = random.Random(5)
    pool = [random_code(rng, rng.randint(6, 14), rng.randint(2, 6)) for _ in range(40)]
    pool += [catalog.load(n) for n in ("E8", "C2_4", "G1_len16", "G2_len16", "G3_len16")]
    pool += [random_self_dual(rng, 2 * rng.randint(4, 8)) for _ in range(5)]
    with criterion("5d", "canonical key unchanged under 1000 random permutations of each of 50 codes"):
        assert len(pool) == 50
        for idx, code in enumerate(pool):
            key = equiv.canonical_key(code)
            wd = gf2core.weight_distribution(code)
            for _ in range(1000):
                other = gf2core.permute(code, random_perm(rng, code.n))
                assert equiv.canonical_form(other, weight_distribution=wd).key == key, f"pool code {idx}"


def test_criterion_5e_structure_identities():
    rng = random.Random(32)
    with criterion("5e", "block structure identities hold on 100 random self-dual codes of length <= 32"):
        for _ in range(100):
            n = 2 * rng.randint(2, 16)
            code = random_self_dual(rng, n)
            c = rng.randint(1, n - 1)
            f = n - c
            s = decomp.structure_split(code, c, f, verify=False)
            assert decomp.structure_violations(s, code.k) == []
            assert s.k3 == gf2core.rank_of(list(s.E), c) == gf2core.rank_of(list(s.F), f)
            assert 2 * s.k2 == 2 * s.k1 + f - c
            assert gf2core.dual(gf2core.BinaryCode.from_rows(s.B + s.E, c)).same_space(
                gf2core.BinaryCode.from_rows(s.B, c))
            assert gf2core.dual(gf2core.BinaryCode.from_rows(s.D + s.F, f)).same_space(
                gf2core.BinaryCode.from_rows(s.D, f))
            assert gf2core.BinaryCode.from_rows(s.generator_rows(), n).same_space(code)


def test_criterion_5f_component_dimensions(run_6_2, run_3_23):
    with criterion("5f", "component dimensions sum to cs/2 for every order-7 C_phi"):
        seen = {}
        for run in (run_6_2, run_3_23):
            for cand in run.candidates:
                seen.setdefault(cand.code_phi, cand.spec)
        assert len(seen) == 1 + 9 + 18 + 1
        for phi, spec in seen.items():
            _, dims = cy.module_decompose(phi)
            s = cy.factor_cyclotomic(7).s
            assert sum(dims) == spec.c * s // 2
        ACCEPTANCE["5f"] = ("PASS", f"{len(seen)} distinct modules, all with sum of dimensions = cs/2")


# --------------------------------------------------------------------------
# criterion 6


NOT_TARGETS = (15621, 5453, 8738, 122787, 243927, 394916, 395555)


def test_criterion_6_scope_statement_and_length16_cases():
    with criterion(6, "order-3 production totals " + ", ".join(map(str, NOT_TARGETS))
                   + " are out of scope; length-16 fixed-pair cases = 3+2+2 = 7"):
        counts = []
        for name in ("G1_len16", "G2_len16", "G3_len16"):
            aut = equiv.aut_order(catalog.load(name)).generators
            counts.append(len(cl.orbit_reps_on_subsets(aut, 16, 2)))
        assert sum(counts) == 7, f"fixed-pair cases {counts}"
        # the production order-3 types need external data and are not wired as pipelines
        assert "p=3 c=6 f=26" not in cl.PIPELINES
