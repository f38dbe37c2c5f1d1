"""Independent oracles and bounded empirical checks.

The abelianization of a group presentation is computed from the integer
relation matrix (one row per relation, exponent sums per generator) via
an exact Smith normal form.  It is the cheap decidable shadow used to
certify nontriviality, and the cross-check for every construction that
claims to preserve or compose group structure.

The two bounded checks mirror the defining lemma dichotomy of the test
constructions: `collapse_check` asks whether a built presentation falls
onto a target up to a word-length cutoff, `embedding_spot_check` whether
a factor stays faithfully embedded.  Both run on top of the budgeted
word-problem oracle and report Pass / Fail-with-witness / Unknown.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Iterable, Mapping, Sequence

from .presentations import Kind, Presentation, ValidationError, Word
from .rewriting import Budget, DEFAULT_BUDGET, Verdict, words_equal

Matrix = list[list[int]]


# ---------------------------------------------------------------------------
# Smith normal form over the integers


def _swap_rows(m: Matrix, i: int, j: int):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m: Matrix, i: int, j: int):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m: Matrix, dst: int, src: int, factor: int):
    m[dst] = [a + factor * b for a, b in zip(m[dst], m[src])]


def _add_col(m: Matrix, dst: int, src: int, factor: int):
    for row in m:
        row[dst] += factor * row[src]


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (D, U, V) with D = U*A*V diagonal, d1 | d2 | ..., di >= 0.

    U and V are unimodular (products of elementary integer operations).
    Pivots are chosen by minimal absolute value to keep entries small;
    arithmetic is exact Python integers throughout.
    """
    d = [list(map(int, row)) for row in a]
    r = len(d)
    n = len(d[0]) if r else 0
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    t = 0
    while True:
        pivot = None
        for i in range(t, r):
            for j in range(t, n):
                if d[i][j] != 0 and (pivot is None or abs(d[i][j]) < abs(d[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            _swap_rows(d, t, pi)
            _swap_rows(u, t, pi)
        if pj != t:
            _swap_cols(d, t, pj)
            _swap_cols(v, t, pj)

        while True:
            # clear column t below the pivot
            dirty = False
            for i in range(t + 1, r):
                if d[i][t] == 0:
                    continue
                q = d[i][t] // d[t][t]
                _add_row(d, i, t, -q)
                _add_row(u, i, t, -q)
                if d[i][t] != 0:  # remainder became the smaller pivot
                    _swap_rows(d, t, i)
                    _swap_rows(u, t, i)
                    dirty = True
            if dirty:
                continue
            # clear row t right of the pivot
            for j in range(t + 1, n):
                if d[t][j] == 0:
                    continue
                q = d[t][j] // d[t][t]
                _add_col(d, j, t, -q)
                _add_col(v, j, t, -q)
                if d[t][j] != 0:
                    _swap_cols(d, t, j)
                    _swap_cols(v, t, j)
                    dirty = True
            if dirty:
                continue
            # force the divisibility chain: fold a non-divisible row in
            offender = None
            for i in range(t + 1, r):
                for j in range(t + 1, n):
                    if d[i][j] % d[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            _add_row(d, t, offender, 1)
            _add_row(u, t, offender, 1)

        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
        if t >= min(r, n):
            break
    return d, u, v


def diagonal_of(d: Matrix) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


# ---------------------------------------------------------------------------
# abelianization


@dataclass(frozen=True)
class AbelianInvariants:
    """Canonical invariants of a finitely generated abelian group."""

    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValidationError(f"torsion {self.torsion} is not a divisor chain")
        if any(t < 2 for t in self.torsion):
            raise ValidationError("torsion factors must be >= 2")

    @property
    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    def merge(self, other: "AbelianInvariants") -> "AbelianInvariants":
        """Invariants of the direct sum, re-canonicalized via SNF."""
        ts = list(self.torsion) + list(other.torsion)
        if not ts:
            return AbelianInvariants((), self.free_rank + other.free_rank)
        diag = [[ts[i] if i == j else 0 for j in range(len(ts))] for i in range(len(ts))]
        d, _, _ = smith_normal_form(diag)
        torsion = tuple(x for x in diagonal_of(d) if x > 1)
        return AbelianInvariants(torsion, self.free_rank + other.free_rank)

    def __str__(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def relation_matrix(p: Presentation) -> Matrix:
    rows = []
    for rel in p.relations:
        counts = {g: 0 for g in p.generators}
        for s, e in rel.lhs.letters:
            counts[s] += e
        for s, e in rel.rhs.letters:
            counts[s] -= e
        rows.append([counts[g] for g in p.generators])
    return rows


def abelianization(p: Presentation) -> AbelianInvariants:
    """Invariant factors of the abelianized group of `p`."""
    if p.kind is not Kind.GROUP:
        raise ValidationError("abelianization is defined for group presentations")
    n = len(p.generators)
    mat = relation_matrix(p)
    if not mat:
        return AbelianInvariants((), n)
    d, _, _ = smith_normal_form(mat)
    diag = [x for x in diagonal_of(d) if x != 0]
    torsion = tuple(x for x in diag if x > 1)
    return AbelianInvariants(torsion, n - len(diag))


# ---------------------------------------------------------------------------
# bounded checks


class CheckVerdict(Enum):
    PASS = "pass"
    FAIL = "fail"
    UNKNOWN = "unknown"


@dataclass
class CheckReport:
    name: str
    verdict: CheckVerdict
    witness: str | None = None
    notes: str = ""
    budget_used: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict is CheckVerdict.FAIL and self.witness is None:
            raise ValidationError("a failing check must carry a witness")

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "witness": self.witness,
            "notes": self.notes,
            "budget_used": {k: self.budget_used[k] for k in sorted(self.budget_used)},
        }


def enumerate_words(generators: Sequence[str], max_length: int) -> list[Word]:
    """All positive words over `generators` of length 0..max_length."""
    out = [Word()]
    for k in range(1, max_length + 1):
        for combo in product(generators, repeat=k):
            out.append(Word(tuple((s, 1) for s in combo)))
    return out


def _image(w: Word, mapping: Mapping[str, Word]) -> Word:
    out = Word()
    for s, e in w.letters:
        if s not in mapping:
            raise ValidationError(f"no image for generator {s}")
        out = out * mapping[s].pow(e)
    return out


def embedding_spot_check(
    sub: Presentation,
    big: Presentation,
    inclusion: Mapping[str, Word],
    cutoff: int = 6,
    budget: Budget = DEFAULT_BUDGET,
    name: str = "embedding-spot-check",
) -> CheckReport:
    """Check that distinct `sub`-words stay distinct in `big` up to `cutoff`.

    For every pair of sub-words certified Distinct in `sub`, the images
    must not be certified Equal in `big`.  A definite violation yields
    Fail with the offending pair; any blocked comparison yields Unknown.
    """
    big_gens = set(big.generators)
    for g, img in inclusion.items():
        bad = img.symbols() - big_gens
        if bad:
            raise ValidationError(f"inclusion image of {g} uses unknown symbol {sorted(bad)[0]}")
    words = enumerate_words(sub.generators, cutoff)
    comparisons = 0
    blocked = 0
    for i, wa in enumerate(words):
        for wb in words[i + 1:]:
            inner = words_equal(sub, wa, wb, budget)
            comparisons += 1
            if inner is Verdict.UNKNOWN:
                blocked += 1
                continue
            if inner is Verdict.EQUAL:
                continue
            outer = words_equal(big, _image(wa, inclusion), _image(wb, inclusion), budget)
            if outer is Verdict.EQUAL:
                return CheckReport(
                    name,
                    CheckVerdict.FAIL,
                    witness=f"{wa} | {wb}",
                    notes="distinct words collapse in the big presentation",
                    budget_used={"comparisons": comparisons},
                )
            if outer is Verdict.UNKNOWN:
                blocked += 1
    if blocked:
        return CheckReport(
            name,
            CheckVerdict.UNKNOWN,
            notes=f"{blocked} comparisons exhausted the budget",
            budget_used={"comparisons": comparisons, "blocked": blocked},
        )
    return CheckReport(name, CheckVerdict.PASS, budget_used={"comparisons": comparisons})


def collapse_check(
    built: Presentation,
    target: Presentation,
    projection: Mapping[str, Word],
    cutoff: int = 6,
    budget: Budget = DEFAULT_BUDGET,
    name: str = "collapse-check",
) -> CheckReport:
    """Length-bounded two-sided shadow of "built is isomorphic to target".

    (a) distinct target words stay distinct in built, and (b) every
    generator of built equals a projected target word, the designated
    zero, or the identity.
    """
    built_gens = set(built.generators)
    for g, img in projection.items():
        bad = img.symbols() - built_gens
        if bad:
            raise ValidationError(f"projection image of {g} uses unknown symbol {sorted(bad)[0]}")
    twords = enumerate_words(target.generators, cutoff)
    images = [_image(w, projection) for w in twords]
    comparisons = 0
    blocked = 0
    for i, wa in enumerate(twords):
        for j in range(i + 1, len(twords)):
            inner = words_equal(target, wa, twords[j], budget)
            comparisons += 1
            if inner is Verdict.UNKNOWN:
                blocked += 1
                continue
            if inner is Verdict.EQUAL:
                continue
            outer = words_equal(built, images[i], images[j], budget)
            if outer is Verdict.EQUAL:
                return CheckReport(
                    name,
                    CheckVerdict.FAIL,
                    witness=f"{wa} | {twords[j]}",
                    notes="target words collapse in the built presentation",
                    budget_used={"comparisons": comparisons},
                )
            if outer is Verdict.UNKNOWN:
                blocked += 1
    anchors = list(images) + [Word()]
    if built.zero is not None:
        anchors.append(Word.single(built.zero))
    for g in built.generators:
        gw = Word.single(g)
        matched = False
        saw_unknown = False
        for anchor in anchors:
            verdict = words_equal(built, gw, anchor, budget)
            comparisons += 1
            if verdict is Verdict.EQUAL:
                matched = True
                break
            if verdict is Verdict.UNKNOWN:
                saw_unknown = True
        if not matched:
            if saw_unknown:
                blocked += 1
            else:
                return CheckReport(
                    name,
                    CheckVerdict.FAIL,
                    witness=str(g),
                    notes="generator does not collapse onto the target image",
                    budget_used={"comparisons": comparisons},
                )
    if blocked:
        return CheckReport(
            name,
            CheckVerdict.UNKNOWN,
            notes=f"{blocked} comparisons exhausted the budget",
            budget_used={"comparisons": comparisons, "blocked": blocked},
        )
    return CheckReport(name, CheckVerdict.PASS, budget_used={"comparisons": comparisons})


# ---------------------------------------------------------------------------
# certificates


class Overall(Enum):
    PROVED = "proved"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


@dataclass
class Certificate:
    instance: dict
    construction: str
    recipe: str | None
    xi_range: str | None
    checks: list[CheckReport]
    overall: Overall
    version: str
    elapsed_ms: int

    def to_json(self) -> str:
        payload = {
            "instance": self.instance,
            "construction": self.construction,
            "recipe": self.recipe,
            "xi_range": self.xi_range,
            "checks": [c.as_dict() for c in self.checks],
            "overall": self.overall.value,
            "version": self.version,
            "elapsed_ms": self.elapsed_ms,
        }
        return json.dumps(payload, indent=2) + "\n"


def assemble_certificate(
    instance: dict,
    construction: str,
    reports: Sequence[CheckReport],
    mandatory: Iterable[str],
    recipe: str | None = None,
    xi_range: str | None = None,
    elapsed_ms: int = 0,
) -> Certificate:
    """Fold check reports into an overall verdict.

    Any Fail refutes.  Otherwise every mandatory check must be present
    and passing to prove; a missing or Unknown mandatory check leaves
    the certificate Unknown.
    """
    from . import __version__

    reports = list(reports)
    if not reports:
        raise ValidationError("cannot assemble a certificate from zero checks")
    by_name = {r.name: r for r in reports}
    overall = Overall.PROVED
    for r in reports:
        if r.verdict is CheckVerdict.FAIL:
            overall = Overall.REFUTED
            break
    if overall is not Overall.REFUTED:
        for name in mandatory:
            rep = by_name.get(name)
            if rep is None or rep.verdict is not CheckVerdict.PASS:
                overall = Overall.UNKNOWN
                break
    return Certificate(
        instance=instance,
        construction=construction,
        recipe=recipe,
        xi_range=xi_range,
        checks=reports,
        overall=overall,
        version=__version__,
        elapsed_ms=elapsed_ms,
    )


class Stopwatch:
    def __init__(self):
        self.start = time.monotonic()

    def ms(self) -> int:
        return int((time.monotonic() - self.start) * 1000)
