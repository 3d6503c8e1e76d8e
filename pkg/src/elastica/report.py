"""Inequality records shared by the geometry, bounds and competitor checks."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class InequalityEntry:
    """One evaluated inequality ``lhs <relation> rhs``.

    ``citation`` carries the human-readable statement being checked.
    Skipped entries keep ``satisfied=True`` and explain why in ``note``.
    """

    name: str
    lhs: float
    rhs: float
    relation: str
    satisfied: bool
    citation: str
    note: str = ""
    skipped: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def compare(name: str, lhs: float, rhs: float, relation: str, citation: str,
            rel_tol: float = 1e-6, abs_tol: float = 0.0, note: str = "") -> InequalityEntry:
    """Evaluate ``lhs relation rhs`` with a relative slack on ``rhs``."""
    slack = rel_tol * abs(rhs) + abs_tol
    if relation == "<=":
        ok = lhs <= rhs + slack
    elif relation == ">=":
        ok = lhs >= rhs - slack
    elif relation == "==":
        ok = abs(lhs - rhs) <= slack
    else:
        raise ValueError(f"unknown relation {relation!r}")
    return InequalityEntry(name, float(lhs), float(rhs), relation, bool(ok), citation, note)


def skipped(name: str, citation: str, reason: str) -> InequalityEntry:
    nan = float("nan")
    return InequalityEntry(name, nan, nan, "n/a", True, citation, reason, skipped=True)


def format_table(entries: Iterable[InequalityEntry]) -> str:
    """Plain-text table, one line per inequality."""
    entries = list(entries)
    w = max([28] + [len(e.name) for e in entries])
    lines = [f"{'name':<{w}} {'lhs':>14} {'rel':^4} {'rhs':>14}  {'status':<6} citation"]
    for e in entries:
        if e.skipped:
            lines.append(f"{e.name:<{w}} {'-':>14} {'':^4} {'-':>14}  {'SKIP':<6} {e.citation} ({e.note})")
            continue
        status = "PASS" if e.satisfied else "FAIL"
        lines.append(f"{e.name:<{w}} {e.lhs:>14.6g} {e.relation:^4} {e.rhs:>14.6g}  {status:<6} {e.citation}")
    return "\n".join(lines)
