"""End-to-end verification of kernel outputs against the exact oracle."""

from __future__ import annotations

import dataclasses
import time
from typing import Callable

from . import config
from .exact import decide_eds
from .graph import ModInstance
from .kernel import KernelReport, kernelize


@dataclasses.dataclass(frozen=True)
class Bound:
    name: str
    limit: int
    observed: int

    @property
    def ok(self) -> bool:
        return self.observed <= self.limit


@dataclasses.dataclass(frozen=True)
class VerifyReport:
    instance_id: str
    algorithm: str
    original_answer: bool | None
    reduced_answer: bool | None
    bounds: tuple[Bound, ...]
    elapsed: dict
    note: str = ""

    @property
    def answers_match(self) -> bool | None:
        if self.original_answer is None or self.reduced_answer is None:
            return None
        return self.original_answer == self.reduced_answer

    @property
    def passed(self) -> bool:
        # a bounds-only report (oracle cap hit) passes on its bounds alone
        return self.answers_match is not False and all(b.ok for b in self.bounds)

    def to_json(self) -> dict:
        return {
            "instance": self.instance_id,
            "algorithm": self.algorithm,
            "original_answer": self.original_answer,
            "reduced_answer": self.reduced_answer,
            "answers_match": self.answers_match,
            "bounds": [{"name": b.name, "limit": b.limit, "observed": b.observed, "pass": b.ok} for b in self.bounds],
            "elapsed": self.elapsed,
            "pass": self.passed,
            "note": self.note,
        }


def kernel_bounds(rep: KernelReport) -> list[Bound]:
    """Size bounds that the chosen algorithm guarantees for this run."""
    if rep.trivial_yes or rep.reduced is None:
        return []
    st = rep.stats
    n_after = rep.reduced.graph.n
    comps = len(rep.reduced.components())
    if rep.algorithm == "p5":
        x2 = len(rep.reduced.X)
        return [Bound("vertices <= 6|X'|", 6 * x2, n_after)]
    out = [
        Bound("kept components <= counting bound", st["bound_components"], st["kept_components"]),
        Bound("components incl. pendants", st["bound_components"] + st["X_U_h"], comps),
    ]
    biggest = max((h.n for h in rep.original.family), default=0)
    nX = st["X"]
    out.append(Bound("vertices <= |X| + |X_U^h| + max|H| * components", nX + st["X_U_h"] + biggest * st["bound_components"], n_after))
    return out


def verify_kernel(
    inst: ModInstance,
    instance_id: str = "",
    tamper: Callable[[KernelReport], KernelReport] | None = None,
    **kernel_args,
) -> VerifyReport:
    """Kernelize, then compare oracle answers and check the size bounds.

    ``tamper`` rewrites the kernel report before checking; tests use it to
    make sure a broken kernel is caught.
    """
    t0 = time.perf_counter()
    rep = kernelize(inst, **kernel_args)
    if tamper is not None:
        rep = tamper(rep)
    t1 = time.perf_counter()
    bounds = tuple(kernel_bounds(rep))
    note = ""
    try:
        before = decide_eds(inst.graph, inst.k)[0]
        if rep.trivial_yes:
            after = True
        else:
            after = decide_eds(rep.reduced.graph, rep.reduced.k)[0]
    except config.CapExceeded as exc:
        before = after = None
        note = f"bounds only: {exc}"
    t2 = time.perf_counter()
    return VerifyReport(
        instance_id=instance_id,
        algorithm=rep.algorithm,
        original_answer=before,
        reduced_answer=after,
        bounds=bounds,
        elapsed={"kernel": round(t1 - t0, 4), "oracle": round(t2 - t1, 4)},
        note=note,
    )
