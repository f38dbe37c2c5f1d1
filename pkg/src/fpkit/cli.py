"""Batch command-line front end.

Three commands: `build` writes a constructed presentation plus its audit
trail, `verify` runs the bounded check suite for one instance and emits a
certificate, `corpus` drives a manifest of instances (optionally in
parallel) and compares outcomes against expectations.

Exit codes: 0 proved / all expectations matched, 1 refuted / mismatch,
2 usage or parse error, 3 unknown.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .coset import EnumLimits, is_trivial
from .constructions import (
    GroupTestInstance,
    MarkovInstance,
    Mode,
    PropertySpec,
    XiRange,
    markov_property_reduction,
    markov_semigroup,
    triviality_test_group,
)
from .presentations import (
    Kind,
    ParseError,
    Presentation,
    PresentationError,
    Word,
    parse_presentation,
    parse_word,
    serialize_presentation,
    tietze_simplify,
)
from .rewriting import Budget, Verdict, words_equal
from .verify import (
    Certificate,
    CheckReport,
    CheckVerdict,
    Overall,
    Stopwatch,
    abelianization,
    assemble_certificate,
    collapse_check,
    embedding_spot_check,
)

EXIT_PROVED = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_UNKNOWN = 3

_EXIT_BY_OVERALL = {
    Overall.PROVED: EXIT_PROVED,
    Overall.REFUTED: EXIT_REFUTED,
    Overall.UNKNOWN: EXIT_UNKNOWN,
}


@dataclass(frozen=True)
class RunConfig:
    rewrite_budget: Budget = Budget()
    enum_limits: EnumLimits = EnumLimits()
    cutoff: int = 6
    xi_range: XiRange = XiRange.ALL_GENERATORS
    recipe: str = "rabin-ladder"
    out_dir: Path | None = None
    jobs: int = field(default_factory=lambda: os.cpu_count() or 1)

    def __post_init__(self):
        if self.cutoff <= 0 or self.jobs <= 0:
            raise ValueError("cutoff and jobs must be positive")


def _load_presentation(path: Path) -> Presentation:
    try:
        return parse_presentation(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise PresentationError(f"{path}: no such file") from None
    except ParseError as exc:
        raise PresentationError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# instance descriptions


@dataclass(frozen=True)
class MarkovJob:
    name: str
    s0: Path
    s1: Path
    s4: Path
    g_text: str
    h_text: str
    xi_range: XiRange


@dataclass(frozen=True)
class GroupTestJob:
    name: str
    base: Path
    a_text: str
    b_text: str | None
    recipe: str


@dataclass(frozen=True)
class PropertyJob:
    name: str
    property_name: str
    g_plus: Path
    g_minus: Path
    test: Path
    mode: Mode


def _markov_instance(job: MarkovJob) -> MarkovInstance:
    return MarkovInstance(
        s0=_load_presentation(job.s0),
        s1=_load_presentation(job.s1),
        s4=_load_presentation(job.s4),
        g=parse_word(job.g_text),
        h=parse_word(job.h_text),
        xi_range=job.xi_range,
    )


def _group_instance(job: GroupTestJob) -> GroupTestInstance:
    return GroupTestInstance(
        base=_load_presentation(job.base),
        a_word=parse_word(job.a_text),
        b_word=parse_word(job.b_text) if job.b_text is not None else None,
        recipe=job.recipe,
    )


# ---------------------------------------------------------------------------
# verification pipelines


def verify_markov(
    job: MarkovJob, config: RunConfig, built: Presentation | None = None
) -> Certificate:
    watch = Stopwatch()
    inst = _markov_instance(job)
    build = markov_semigroup(inst)
    target = built if built is not None else build.presentation
    budget = config.rewrite_budget

    reports: list[CheckReport] = []
    inner = words_equal(inst.s1, inst.g, inst.h, budget)
    reports.append(
        CheckReport(
            "s1-word-problem",
            CheckVerdict.PASS if inner is not Verdict.UNKNOWN else CheckVerdict.UNKNOWN,
            notes=f"G vs H in S1: {inner.value}",
        )
    )
    mandatory = ["s1-word-problem"]
    if inner is Verdict.EQUAL:
        projection = {g: Word.single(img) for g, img in build.maps["s4"].items()}
        reports.append(
            collapse_check(
                target, inst.s4, projection, config.cutoff, budget, name="collapse-onto-s4"
            )
        )
        mandatory.append("collapse-onto-s4")
    elif inner is Verdict.DISTINCT:
        inclusion = {g: Word.single(img) for g, img in build.maps["s0"].items()}
        reports.append(
            embedding_spot_check(
                inst.s0, target, inclusion, config.cutoff, budget, name="s0-embedding"
            )
        )
        mandatory.append("s0-embedding")
    instance = {
        "name": job.name,
        "type": "markov",
        "inputs": {
            "G": job.g_text,
            "H": job.h_text,
            "s0": job.s0.name,
            "s1": job.s1.name,
            "s4": job.s4.name,
        },
    }
    return assemble_certificate(
        instance,
        "markov-semigroup",
        reports,
        mandatory,
        xi_range=job.xi_range.value,
        elapsed_ms=watch.ms(),
    )


def verify_test_group(
    job: GroupTestJob, config: RunConfig, built: Presentation | None = None
) -> Certificate:
    watch = Stopwatch()
    inst = _group_instance(job)
    build = triviality_test_group(inst)
    target = built if built is not None else build.presentation

    b_word = inst.b_word if inst.b_word is not None else Word()
    inner = words_equal(inst.base, inst.a_word, b_word, config.rewrite_budget)
    triv = is_trivial(target, config.enum_limits)

    reports = [
        CheckReport(
            "base-word-problem",
            CheckVerdict.PASS if inner is not Verdict.UNKNOWN else CheckVerdict.UNKNOWN,
            notes=f"A vs B in the base: {inner.value}",
        ),
        CheckReport(
            "test-group-triviality",
            CheckVerdict.PASS if triv.definite else CheckVerdict.UNKNOWN,
            notes=f"{triv.status}" + (f" ({triv.reason})" if triv.reason else ""),
        ),
    ]
    if inner is Verdict.UNKNOWN or not triv.definite:
        reports.append(
            CheckReport("dichotomy", CheckVerdict.UNKNOWN, notes="an engine returned unknown")
        )
    elif (inner is Verdict.EQUAL) == triv.is_trivial:
        reports.append(
            CheckReport(
                "dichotomy",
                CheckVerdict.PASS,
                notes=f"words {inner.value} and test group {triv.status}",
            )
        )
    else:
        reports.append(
            CheckReport(
                "dichotomy",
                CheckVerdict.FAIL,
                witness=f"words {inner.value} but test group {triv.status}",
                notes="the two engines contradict each other",
            )
        )
    instance = {
        "name": job.name,
        "type": "test-group",
        "inputs": {
            "A": job.a_text,
            "B": job.b_text if job.b_text is not None else "1",
            "base": job.base.name,
        },
    }
    return assemble_certificate(
        instance,
        "triviality-test-group",
        reports,
        ["base-word-problem", "test-group-triviality", "dichotomy"],
        recipe=job.recipe,
        elapsed_ms=watch.ms(),
    )


def verify_property(job: PropertyJob, config: RunConfig) -> Certificate:
    watch = Stopwatch()
    spec = PropertySpec(
        name=job.property_name,
        g_plus=_load_presentation(job.g_plus),
        g_minus=_load_presentation(job.g_minus),
        mode=job.mode,
    )
    test = _load_presentation(job.test)
    build = markov_property_reduction(spec, test)
    triv = is_trivial(test, config.enum_limits)

    reports = [
        CheckReport(
            "test-triviality",
            CheckVerdict.PASS if triv.definite else CheckVerdict.UNKNOWN,
            notes=f"{triv.status}" + (f" ({triv.reason})" if triv.reason else ""),
        )
    ]
    mandatory = ["test-triviality"]
    if triv.is_trivial:
        reduced = tietze_simplify(build.presentation)
        witness = tietze_simplify(spec.g_plus)
        if reduced == witness:
            reports.append(
                CheckReport(
                    "witness-passthrough",
                    CheckVerdict.PASS,
                    notes="composition simplifies to the positive witness",
                )
            )
        elif abelianization(reduced) == abelianization(witness):
            reports.append(
                CheckReport(
                    "witness-passthrough",
                    CheckVerdict.PASS,
                    notes="abelianizations of composition and witness agree",
                )
            )
        else:
            reports.append(
                CheckReport(
                    "witness-passthrough",
                    CheckVerdict.FAIL,
                    witness=str(abelianization(reduced)),
                    notes="composition does not reduce to the witness",
                )
            )
        mandatory.append("witness-passthrough")
    elif triv.definite:
        inv = abelianization(build.presentation)
        if not inv.is_trivial:
            reports.append(
                CheckReport(
                    "obstruction-abelianization",
                    CheckVerdict.PASS,
                    notes=f"composition abelianization is {inv}",
                )
            )
        else:
            reports.append(
                CheckReport(
                    "obstruction-abelianization",
                    CheckVerdict.UNKNOWN,
                    notes="abelianization cannot see the obstruction",
                )
            )
        mandatory.append("obstruction-abelianization")
    instance = {
        "name": job.name,
        "type": "property",
        "inputs": {
            "g_minus": job.g_minus.name,
            "g_plus": job.g_plus.name,
            "mode": job.mode.value,
            "property": job.property_name,
            "test": job.test.name,
        },
    }
    return assemble_certificate(
        instance, "property-reduction", reports, mandatory, elapsed_ms=watch.ms()
    )


# ---------------------------------------------------------------------------
# corpus manifests


@dataclass(frozen=True)
class ManifestRow:
    name: str
    kind: str
    inputs: dict[str, str]
    expected: str


def parse_manifest(path: Path) -> list[ManifestRow]:
    rows = []
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise PresentationError(f"{path}: no such manifest") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise PresentationError(
                f"{path}:{lineno}: expected 4 tab-separated fields, got {len(parts)}"
            )
        name, kind, inputs_field, expected = (p.strip() for p in parts)
        if kind not in ("markov", "test-group", "property"):
            raise PresentationError(f"{path}:{lineno}: unknown instance type {kind!r}")
        if expected not in ("proved", "refuted", "unknown"):
            raise PresentationError(f"{path}:{lineno}: unknown expected verdict {expected!r}")
        inputs = {}
        for pair in inputs_field.split(";"):
            if not pair.strip():
                continue
            key, eq, value = pair.partition("=")
            if not eq:
                raise PresentationError(f"{path}:{lineno}: bad input field {pair!r}")
            inputs[key.strip()] = value.strip()
        rows.append(ManifestRow(name, kind, inputs, expected))
    return rows


def _job_from_row(row: ManifestRow, base_dir: Path, config: RunConfig):
    inp = row.inputs
    try:
        if row.kind == "markov":
            xi = XiRange(inp.get("xi", config.xi_range.value))
            return MarkovJob(
                row.name,
                base_dir / inp["s0"],
                base_dir / inp["s1"],
                base_dir / inp["s4"],
                inp["G"],
                inp["H"],
                xi,
            )
        if row.kind == "test-group":
            return GroupTestJob(
                row.name,
                base_dir / inp["base"],
                inp["w"],
                inp.get("b"),
                inp.get("recipe", config.recipe),
            )
        return PropertyJob(
            row.name,
            inp.get("property", "unnamed property"),
            base_dir / inp["gplus"],
            base_dir / inp["gminus"],
            base_dir / inp["test"],
            Mode(inp.get("mode", Mode.MARKOV.value)),
        )
    except KeyError as exc:
        raise PresentationError(f"instance {row.name}: missing input {exc}") from None


def run_job(job, config: RunConfig) -> Certificate:
    if isinstance(job, MarkovJob):
        return verify_markov(job, config)
    if isinstance(job, GroupTestJob):
        return verify_test_group(job, config)
    return verify_property(job, config)


def _run_row(args) -> tuple[str, str]:
    row, base_dir, config = args
    cert = run_job(_job_from_row(row, base_dir, config), config)
    return row.name, cert.to_json()


def cmd_corpus(manifest: Path, config: RunConfig, out=sys.stdout) -> int:
    rows = parse_manifest(manifest)
    base_dir = manifest.parent
    tasks = [(row, base_dir, config) for row in rows]
    results: list[tuple[str, str]] = []
    if config.jobs > 1 and len(tasks) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_row, tasks))
    else:
        results = [_run_row(t) for t in tasks]

    all_match = True
    print(f"{'instance':<28}{'expected':<10}{'got':<10}{'ms':>8}", file=out)
    for row, (name, cert_json) in zip(rows, results):
        payload = json.loads(cert_json)
        got = payload["overall"]
        elapsed = payload["elapsed_ms"]
        flag = "" if got == row.expected else "   << MISMATCH"
        if got != row.expected:
            all_match = False
        print(f"{name:<28}{row.expected:<10}{got:<10}{elapsed:>8}{flag}", file=out)
        if config.out_dir is not None:
            config.out_dir.mkdir(parents=True, exist_ok=True)
            (config.out_dir / f"{name}.cert.json").write_text(cert_json, encoding="utf-8")
    return EXIT_PROVED if all_match else EXIT_REFUTED


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--budget-rules", type=int, default=Budget().max_rules)
    parser.add_argument("--budget-cosets", type=int, default=EnumLimits().max_cosets)
    parser.add_argument("--cutoff", type=int, default=6)
    parser.add_argument("--xi-range", choices=["verbatim", "all"], default="all")
    parser.add_argument("--recipe", default="rabin-ladder")
    parser.add_argument("--out", type=Path, default=None)
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)


def _config(args) -> RunConfig:
    return RunConfig(
        rewrite_budget=Budget(max_rules=args.budget_rules),
        enum_limits=EnumLimits(max_cosets=args.budget_cosets),
        cutoff=args.cutoff,
        xi_range=XiRange(args.xi_range),
        recipe=args.recipe,
        out_dir=args.out,
        jobs=args.jobs,
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpkit", description="finitely presented (semi)group toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="run a construction and write its output")
    bsub = build.add_subparsers(dest="kind", required=True)
    bm = bsub.add_parser("markov")
    bm.add_argument("s0", type=Path)
    bm.add_argument("s1", type=Path)
    bm.add_argument("s4", type=Path)
    bm.add_argument("--G", required=True)
    bm.add_argument("--H", required=True)
    bm.add_argument("--name", default="s_gh")
    _add_common(bm)
    bt = bsub.add_parser("test-group")
    bt.add_argument("base", type=Path)
    bt.add_argument("--w", required=True)
    bt.add_argument("--b", default=None)
    bt.add_argument("--name", default="t")
    _add_common(bt)
    bp = bsub.add_parser("property")
    bp.add_argument("--g-plus", type=Path, required=True)
    bp.add_argument("--g-minus", type=Path, required=True)
    bp.add_argument("--test", type=Path, required=True)
    bp.add_argument("--property-name", default="being the trivial group")
    bp.add_argument("--mode", choices=[m.value for m in Mode], default="markov")
    bp.add_argument("--name", default="composite")
    _add_common(bp)

    verify = sub.add_parser("verify", help="verify one instance and emit a certificate")
    vsub = verify.add_subparsers(dest="kind", required=True)
    vm = vsub.add_parser("markov")
    vm.add_argument("s0", type=Path)
    vm.add_argument("s1", type=Path)
    vm.add_argument("s4", type=Path)
    vm.add_argument("--G", required=True)
    vm.add_argument("--H", required=True)
    vm.add_argument("--built", type=Path, default=None)
    vm.add_argument("--name", default="instance")
    _add_common(vm)
    vt = vsub.add_parser("test-group")
    vt.add_argument("base", type=Path)
    vt.add_argument("--w", required=True)
    vt.add_argument("--b", default=None)
    vt.add_argument("--built", type=Path, default=None)
    vt.add_argument("--name", default="instance")
    _add_common(vt)
    vp = vsub.add_parser("property")
    vp.add_argument("--g-plus", type=Path, required=True)
    vp.add_argument("--g-minus", type=Path, required=True)
    vp.add_argument("--test", type=Path, required=True)
    vp.add_argument("--property-name", default="being the trivial group")
    vp.add_argument("--mode", choices=[m.value for m in Mode], default="markov")
    vp.add_argument("--name", default="instance")
    _add_common(vp)

    corpus = sub.add_parser("corpus", help="run every instance of a manifest")
    corpus.add_argument(
        "manifest", type=Path, nargs="?", default=None, help="defaults to the bundled corpus"
    )
    _add_common(corpus)
    return parser


def _write_build(config: RunConfig, name: str, presentation, trail) -> None:
    out_dir = config.out_dir or Path.cwd()
    out_dir.mkdir(parents=True, exist_ok=True)
    pres_path = out_dir / f"{name}.pres"
    pres_path.write_text(serialize_presentation(presentation), encoding="utf-8")
    (out_dir / f"{name}.audit.txt").write_text(trail.to_text(), encoding="utf-8")
    print(pres_path)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config(args)
        if args.command == "build":
            if args.kind == "markov":
                job = MarkovJob(
                    args.name, args.s0, args.s1, args.s4, args.G, args.H, config.xi_range
                )
                build = markov_semigroup(_markov_instance(job))
                _write_build(config, args.name, build.presentation, build.trail)
            elif args.kind == "test-group":
                job = GroupTestJob(args.name, args.base, args.w, args.b, config.recipe)
                build = triviality_test_group(_group_instance(job))
                _write_build(config, args.name, build.presentation, build.trail)
            else:
                spec = PropertySpec(
                    args.property_name,
                    _load_presentation(args.g_plus),
                    _load_presentation(args.g_minus),
                    Mode(args.mode),
                )
                build = markov_property_reduction(spec, _load_presentation(args.test))
                _write_build(config, args.name, build.presentation, build.trail)
            return EXIT_PROVED

        if args.command == "verify":
            built = _load_presentation(args.built) if getattr(args, "built", None) else None
            if args.kind == "markov":
                job = MarkovJob(
                    args.name, args.s0, args.s1, args.s4, args.G, args.H, config.xi_range
                )
                cert = verify_markov(job, config, built)
            elif args.kind == "test-group":
                job = GroupTestJob(args.name, args.base, args.w, args.b, config.recipe)
                cert = verify_test_group(job, config, built)
            else:
                job = PropertyJob(
                    args.name,
                    args.property_name,
                    args.g_plus,
                    args.g_minus,
                    args.test,
                    Mode(args.mode),
                )
                cert = verify_property(job, config)
            if config.out_dir is not None:
                config.out_dir.mkdir(parents=True, exist_ok=True)
                (config.out_dir / f"{args.name}.cert.json").write_text(
                    cert.to_json(), encoding="utf-8"
                )
            print(f"{args.name}: {cert.overall.value}")
            return _EXIT_BY_OVERALL[cert.overall]

        manifest = args.manifest
        if manifest is None:
            from .corpus import bundled_manifest

            manifest = bundled_manifest()
        return cmd_corpus(manifest, config)
    except (PresentationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
