"""Command-line surface: file formats and the validate/synth/verify pipeline.

Files are JSON with all big numbers carried as decimal strings, so no
consumer ever pushes an exact count through a float. Exit codes: 0 for
success (and "the electorate does realize the pattern"), 1 for a verified
non-concordance, 2 for input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .errors import (
    EmptySituation,
    InvalidEpsilon,
    ParadoxForgeError,
    ParseError,
    SizeLimitExceeded,
)
from .loadshare import (
    EpsilonVector,
    check_epsilon,
    check_p_concordance,
    default_epsilon,
    make_model,
    permutation_distribution,
    winning_probabilities,
)
from .ranking import (
    CandidateSet,
    Permutation,
    RankingPattern,
    all_subsets,
    tie_index,
    validate_ranking_function,
)
from .reduce import ReductionConfig, reduce_search
from .synth import (
    strict_voter_total,
    synth_pairwise_mcgarvey,
    synth_strict,
    synth_weak,
    synth_with_voters,
)
from .tally import (
    VotingSituation,
    check_concordance,
    extract_pattern,
    ranks_from_scores,
    tally,
)

MAX_M_ENV = "PARADOX_FORGE_MAX_M"
DEFAULT_SYNTH_MAX_M = 6


def _synth_cap() -> int:
    raw = os.environ.get(MAX_M_ENV)
    if raw is None:
        return DEFAULT_SYNTH_MAX_M
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{MAX_M_ENV} must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# file formats

def pattern_to_payload(pattern: RankingPattern) -> dict:
    rankings = []
    for function in pattern.functions:
        rankings.append(
            {
                "subset": list(function.subset.members),
                "ranks": {str(c): r for c, r in function.as_map().items()},
            }
        )
    return {"m": pattern.m, "rankings": rankings}


def pattern_from_payload(payload: dict) -> RankingPattern:
    if not isinstance(payload, dict) or "m" not in payload or "rankings" not in payload:
        raise ParseError("pattern file needs top-level keys 'm' and 'rankings'")
    m = payload["m"]
    if not isinstance(m, int) or m < 2:
        raise ParseError(f"'m' must be an integer >= 2, got {m!r}")
    functions = []
    for entry in payload["rankings"]:
        try:
            members = tuple(int(c) for c in entry["subset"])
            ranks = {int(c): int(r) for c, r in entry["ranks"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed ranking entry {entry!r}: {exc}") from None
        if any(not 1 <= c <= m for c in members):
            raise ParseError(f"subset {members} out of candidate range 1..{m}")
        functions.append(validate_ranking_function(CandidateSet(members), ranks))
    return RankingPattern(m, tuple(functions))


def situation_to_payload(situation: VotingSituation) -> dict:
    counts = {
        ",".join(map(str, perm.order)): str(count)
        for perm, count in situation.entries
    }
    return {"m": situation.m, "counts": counts}


def situation_from_payload(payload: dict) -> VotingSituation:
    if not isinstance(payload, dict) or "m" not in payload or "counts" not in payload:
        raise ParseError("situation file needs top-level keys 'm' and 'counts'")
    m = payload["m"]
    if not isinstance(m, int) or m < 2:
        raise ParseError(f"'m' must be an integer >= 2, got {m!r}")
    entries = []
    for key, value in payload["counts"].items():
        try:
            order = tuple(int(c) for c in key.split(","))
            count = int(value)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"malformed count entry {key!r}: {value!r} ({exc})") from None
        if count < 0:
            raise ParseError(f"negative voter count for {key!r}")
        try:
            entries.append((Permutation(order), count))
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    try:
        return VotingSituation(m, tuple(entries))
    except ParadoxForgeError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _load_json(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from None


def load_pattern_file(path: str | Path) -> RankingPattern:
    return pattern_from_payload(_load_json(path))


def load_situation_file(path: str | Path) -> VotingSituation:
    return situation_from_payload(_load_json(path))


def _write_atomic(path: str | Path, payload: dict) -> None:
    path = Path(path)
    text = json.dumps(payload, indent=2) + "\n"
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_pattern_file(path: str | Path, pattern: RankingPattern) -> None:
    _write_atomic(path, pattern_to_payload(pattern))


def write_situation_file(path: str | Path, situation: VotingSituation) -> None:
    _write_atomic(path, situation_to_payload(situation))


# ---------------------------------------------------------------------------
# report rendering

def _frac(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _ranking_text(ranks: dict[int, int]) -> str:
    by_level: dict[int, list[int]] = {}
    for c, r in ranks.items():
        by_level.setdefault(r, []).append(c)
    groups = [
        " = ".join(map(str, sorted(cs))) for _, cs in sorted(by_level.items())
    ]
    return " > ".join(groups)


def _subset_tallies(
    situation: VotingSituation, subsets: Iterable[CandidateSet], jobs: int = 1
):
    subsets = list(subsets)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda s: tally(situation, s), subsets))
    else:
        results = [tally(situation, s) for s in subsets]
    return dict(zip(subsets, results))


def _print_tallies(situation: VotingSituation, jobs: int = 1, out=None) -> None:
    out = out if out is not None else sys.stdout
    for subset, t in _subset_tallies(situation, all_subsets(situation.m), jobs).items():
        votes = " ".join(f"{c}={t.votes[c]}" for c in subset.members)
        ranking = _ranking_text(ranks_from_scores(t.votes))
        print(f"  subset {subset.members}: {votes}  ranking: {ranking}", file=out)


# ---------------------------------------------------------------------------
# commands

def cmd_validate(args) -> int:
    pattern = load_pattern_file(args.pattern)
    print(f"valid ranking pattern: m={pattern.m}, subsets={len(pattern.functions)}")
    print(f"strict: {str(pattern.is_strict).lower()}")
    print(f"tie_index: {tie_index(pattern)}")
    return 0


def cmd_synth(args) -> int:
    pattern = load_pattern_file(args.pattern)
    cap = _synth_cap()
    if pattern.m > cap:
        raise SizeLimitExceeded(
            f"synthesis capped at m <= {cap} (set {MAX_M_ENV} to change)"
        )
    mode = args.mode
    if mode == "auto":
        mode = "strict" if pattern.is_strict else "weak"

    if args.target_voters is not None and args.mode == "mcgarvey":
        raise ParseError("--target-voters cannot be combined with --mode mcgarvey")
    if args.target_voters is not None:
        situation = synth_with_voters(pattern, args.target_voters)
        route = f"exact-total strict construction (theta={args.target_voters})"
    elif mode == "strict":
        situation = synth_strict(pattern)
        route = "closed-form strict construction"
    elif mode == "mcgarvey":
        situation = synth_pairwise_mcgarvey(pattern)
        route = "pairwise 2/1/0 construction"
    else:
        situation, trace = synth_weak(pattern)
        route = f"tie-resolution recursion ({len(trace)} steps)"

    if args.reduce:
        config = ReductionConfig() if args.seed is None else ReductionConfig(seed=args.seed)
        situation = reduce_search(situation, pattern, config)
        route += " + reduction"

    report = check_concordance(situation, pattern)
    if not report:
        print("synthesis produced a non-concordant electorate (bug):", file=sys.stderr)
        for failure in report.failures:
            print(f"  {failure}", file=sys.stderr)
        return 1

    print(f"m: {pattern.m}")
    print(f"route: {route}")
    print(f"strict: {str(pattern.is_strict).lower()}")
    print(f"tie_index: {tie_index(pattern)}")
    print(f"strict_construction_total: {strict_voter_total(pattern.m)}")
    print(f"voters: {situation.total}")
    _print_tallies(situation, jobs=args.jobs)
    print("q-concordant: yes")
    if args.output:
        write_situation_file(args.output, situation)
        print(f"wrote {args.output}")
    return 0


def cmd_verify(args) -> int:
    situation = load_situation_file(args.situation)
    pattern = load_pattern_file(args.pattern)
    report = check_concordance(situation, pattern)
    print(f"m: {pattern.m}")
    print(f"voters: {situation.total}")
    _print_tallies(situation, jobs=args.jobs)
    if report:
        print("q-concordant: yes")
        return 0
    print("q-concordant: no")
    for failure in report.failures:
        print(f"  violated: {failure}")
    return 1


def cmd_model(args) -> int:
    pattern = load_pattern_file(args.pattern)
    if args.epsilon:
        try:
            tail = [Fraction(part) for part in args.epsilon.split(",")]
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidEpsilon(f"cannot parse epsilon overrides: {exc}") from None
        eps = EpsilonVector.of(pattern.m, tail)
    else:
        eps = default_epsilon(pattern.m)
    model = make_model(pattern, eps)

    print(f"m: {pattern.m}")
    for h in range(2, pattern.m + 1):
        print(f"epsilon({h}): {_frac(eps.of_size(h))}")
    print(f"sufficiency_inequalities_hold: {str(check_epsilon(eps)).lower()}")
    for h in range(1, pattern.m + 1):
        print(f"intensity_total[{h} survivors]: {_frac(model.level_total(h))}")
    for subset in all_subsets(pattern.m):
        failed = tuple(c for c in range(1, pattern.m + 1) if c not in subset.members)
        for c in subset.members:
            mu = model.intensity(c, frozenset(failed))
            print(f"intensity[{c} | failed {failed}]: {_frac(mu)}")
    dist = permutation_distribution(model)
    for perm, p in dist.probabilities:
        print(f"p{perm.order}: {_frac(p)}")
    table = winning_probabilities(model)
    for subset in all_subsets(pattern.m):
        row = " ".join(
            f"{c}={_frac(table.of(subset, c))}" for c in subset.members
        )
        print(f"alpha{subset.members}: {row}")
    verdict = check_p_concordance(table, pattern)
    print(f"p-concordant: {'yes' if verdict else 'no'}")
    if not verdict:
        for failure in verdict.failures:
            print(f"  violated: {failure}")
        return 1
    return 0


def cmd_extract(args) -> int:
    situation = load_situation_file(args.situation)
    if situation.total == 0:
        raise EmptySituation("cannot extract a pattern from zero voters")
    pattern = extract_pattern(situation)
    print(f"m: {pattern.m}")
    print(f"strict: {str(pattern.is_strict).lower()}")
    print(f"tie_index: {tie_index(pattern)}")
    if args.output:
        write_pattern_file(args.output, pattern)
        print(f"wrote {args.output}")
    else:
        print(json.dumps(pattern_to_payload(pattern), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paradox-forge",
        description=(
            "Construct, verify, and shrink electorates that realize an "
            "arbitrary ranking pattern, paradoxes included."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a pattern file")
    p.add_argument("pattern")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("synth", help="build an electorate for a pattern")
    p.add_argument("pattern")
    p.add_argument("--mode", choices=["auto", "strict", "mcgarvey"], default="auto")
    p.add_argument("--target-voters", type=int, default=None)
    p.add_argument("--reduce", action="store_true")
    p.add_argument("--output", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="check an electorate against a pattern")
    p.add_argument("situation")
    p.add_argument("pattern")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("model", help="report the exact load-sharing model")
    p.add_argument("pattern")
    p.add_argument(
        "--epsilon",
        default=None,
        help="comma-separated rationals eps(2)..eps(m), e.g. 1/306,1/93636",
    )
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("extract", help="read off the pattern an electorate realizes")
    p.add_argument("situation")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_extract)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParadoxForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
