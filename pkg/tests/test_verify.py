import itertools
import math
import random

import pytest

from fpkit.presentations import (
    Kind,
    Presentation,
    Relation,
    ValidationError,
    Word,
    parse_presentation,
    parse_word,
    rename_generators,
    tietze_simplify,
)
from fpkit.rewriting import Budget
from fpkit.verify import (
    AbelianInvariants,
    CheckReport,
    CheckVerdict,
    abelianization,
    assemble_certificate,
    collapse_check,
    diagonal_of,
    embedding_spot_check,
    smith_normal_form,
)

W = parse_word


# -- independent linear-algebra oracles, kept local to the tests


def mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def bareiss_det(m):
    """Fraction-free integer determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def determinantal_divisors(m):
    """gcd of all k x k minors, brute force; d_k = g_k / g_(k-1)."""
    r, n = len(m), len(m[0]) if m else 0
    divisors = []
    for k in range(1, min(r, n) + 1):
        g = 0
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(n), k):
                minor = [[m[i][j] for j in cols] for i in rows]
                g = math.gcd(g, abs(bareiss_det(minor)))
        divisors.append(g)
    return divisors


def test_snf_hundred_random_matrices_self_check():
    rng = random.Random(2024)
    for trial in range(100):
        r = rng.randint(1, 5)
        n = rng.randint(1, 5)
        a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(r)]
        d, u, v = smith_normal_form(a)
        # exact decomposition
        assert mat_mul(mat_mul(u, a), v) == d, (trial, a)
        # unimodular transforms
        assert abs(bareiss_det(u)) == 1
        assert abs(bareiss_det(v)) == 1
        # diagonal, nonnegative, divisibility chain
        diag = diagonal_of(d)
        for i in range(len(d)):
            for j in range(len(d[0])):
                if i != j:
                    assert d[i][j] == 0
        assert all(x >= 0 for x in diag)
        nonzero = [x for x in diag if x]
        for x, y in zip(nonzero, nonzero[1:]):
            assert y % x == 0
        # canonical: brute-force determinantal divisors pin each d_k
        gk = determinantal_divisors(a)
        prev = 1
        for k, g in enumerate(gk):
            expected = 0 if g == 0 else g // prev
            assert diag[k] == expected, (trial, a, diag, gk)
            if g == 0:
                break
            prev = g


def test_abelianization_examples():
    assert abelianization(parse_presentation("group\ngens: a\nrels: a^5 = 1")) == AbelianInvariants((5,), 0)
    free_ab = parse_presentation("group\ngens: a, b\nrels: a b a^-1 b^-1 = 1")
    assert abelianization(free_ab) == AbelianInvariants((), 2)
    canonical = parse_presentation("group\ngens: a, b\nrels: a^2 = 1, b^3 = 1, a b a^-1 b^-1 = 1")
    assert abelianization(canonical) == AbelianInvariants((6,), 0)


def test_abelianization_rejects_monoids():
    with pytest.raises(ValidationError):
        abelianization(parse_presentation("monoid\ngens: g\nrels:"))


def test_abelianization_invariance_under_tietze_and_renaming():
    p = parse_presentation("group\ngens: a, b, c\nrels: c = a b, a^4 = 1, b^2 = a^2")
    inv = abelianization(p)
    assert abelianization(tietze_simplify(p)) == inv
    assert abelianization(rename_generators(p, {"a": "x", "b": "y", "c": "w"})) == inv
    shuffled = Presentation(Kind.GROUP, p.generators, p.relations[::-1])
    assert abelianization(shuffled) == inv


def test_invariants_merge_is_canonical():
    a = AbelianInvariants((2,), 1)
    b = AbelianInvariants((3,), 0)
    assert a.merge(b) == AbelianInvariants((6,), 1)
    c = AbelianInvariants((2, 4), 0)
    assert c.merge(AbelianInvariants((2,), 0)) == AbelianInvariants((2, 2, 4), 0)


def test_invariants_validation():
    with pytest.raises(ValidationError):
        AbelianInvariants((4, 2), 0)  # not a divisor chain
    with pytest.raises(ValidationError):
        AbelianInvariants((1,), 0)


def test_embedding_spot_check_identity():
    free = parse_presentation("monoid\ngens: x\nrels:")
    report = embedding_spot_check(free, free, {"x": W("x")}, cutoff=5)
    assert report.verdict is CheckVerdict.PASS


def test_embedding_spot_check_collapse_detected():
    free = parse_presentation("monoid\ngens: x\nrels:")
    idem = parse_presentation("monoid\ngens: y\nrels: y^2 = y")
    report = embedding_spot_check(free, idem, {"x": W("y")}, cutoff=3)
    assert report.verdict is CheckVerdict.FAIL
    assert report.witness == "x | x^2"


def test_collapse_check_trivial_identity():
    trivial = parse_presentation("monoid\ngens:\nrels:")
    report = collapse_check(trivial, trivial, {}, cutoff=4)
    assert report.verdict is CheckVerdict.PASS


def test_collapse_check_free_generator_fails():
    built = parse_presentation("monoid\ngens: x\nrels:")
    trivial = parse_presentation("monoid\ngens:\nrels:")
    report = collapse_check(built, trivial, {}, cutoff=4)
    assert report.verdict is CheckVerdict.FAIL
    assert report.witness == "x"


def test_check_reports_budget_blocked_is_unknown():
    hostile = parse_presentation("monoid\ngens: a, b\nrels: b a = a b, b b b = a a")
    free = parse_presentation("monoid\ngens: x\nrels:")
    report = embedding_spot_check(free, hostile, {"x": W("a")}, cutoff=2, budget=Budget(2, 4, 1))
    assert report.verdict is CheckVerdict.UNKNOWN


def test_fail_requires_witness():
    with pytest.raises(ValidationError):
        CheckReport("x", CheckVerdict.FAIL)


def _report(name, verdict):
    witness = "w" if verdict is CheckVerdict.FAIL else None
    return CheckReport(name, verdict, witness=witness)


def test_assemble_certificate_policy():
    instance = {"name": "i"}
    cert = assemble_certificate(instance, "c", [_report("a", CheckVerdict.PASS)], ["a"])
    assert cert.overall.value == "proved"
    cert = assemble_certificate(
        instance, "c", [_report("a", CheckVerdict.PASS), _report("b", CheckVerdict.FAIL)], ["a"]
    )
    assert cert.overall.value == "refuted"
    cert = assemble_certificate(
        instance, "c", [_report("a", CheckVerdict.PASS), _report("b", CheckVerdict.UNKNOWN)], ["a", "b"]
    )
    assert cert.overall.value == "unknown"
    with pytest.raises(ValidationError):
        assemble_certificate(instance, "c", [], ["a"])


def test_certificate_json_field_order():
    cert = assemble_certificate({"name": "i"}, "c", [_report("a", CheckVerdict.PASS)], ["a"])
    payload = cert.to_json()
    first = payload.index('"instance"')
    assert first < payload.index('"construction"') < payload.index('"checks"')
    assert payload.index('"overall"') < payload.index('"version"') < payload.index('"elapsed_ms"')
