"""Periodicity obstructions for integral homology spheres from the mod-r congruence."""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import FramedLinkPresentation, linking_determinant, linking_matrix
from .exactring import CyclotomicInteger
from .invariant import congruence_test, projective_invariant
from .liedata import sl2, validate_r

CONSISTENT = "consistent-with-periodicity"
OBSTRUCTED = "obstructed"


class NotHomologySphere(ValueError):
    pass


@dataclass(frozen=True)
class PrimeEntry:
    r: int
    invariant: CyclotomicInteger
    witnesses: tuple[int, ...]

    @property
    def verdict(self) -> str:
        return CONSISTENT if self.witnesses else OBSTRUCTED

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "invariant": [str(c) for c in self.invariant.coeffs],
            "witnesses": list(self.witnesses),
            "verdict": self.verdict,
        }


@dataclass
class PeriodicityReport:
    manifold: str
    entries: list[PrimeEntry] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"manifold": self.manifold, "entries": [e.to_json() for e in self.entries]}

    def table(self) -> str:
        lines = [f"manifold: {self.manifold}", f"{'r':>4}  {'verdict':<28}  witnesses"]
        for e in self.entries:
            ws = ",".join(map(str, e.witnesses)) or "-"
            lines.append(f"{e.r:>4}  {e.verdict:<28}  {ws}")
        return "\n".join(lines)


def check_homology_sphere(M: FramedLinkPresentation) -> None:
    det = linking_determinant(linking_matrix(M))
    if abs(det) != 1:
        raise NotHomologySphere(
            f"linking matrix has determinant {det}; an integral homology sphere needs +-1"
        )


def periodicity_scan(
    M: FramedLinkPresentation, primes, weight: int = 0, workers: int | None = 1
) -> PeriodicityReport:
    """For each r, an empty witness set shows that M is not r-periodic."""
    primes = list(primes)
    for r in primes:
        validate_r(sl2(), r)
    check_homology_sphere(M)
    report = PeriodicityReport(M.name or "manifold")
    for r in primes:
        res = projective_invariant(M, r, weight, workers=workers)
        x = res.integer_value
        if x is None:
            # a homology sphere has b1 = 0; with odd weight a kappa factor survives
            raise ValueError(f"projective invariant at r={r} carries a kappa factor (odd weight?)")
        report.entries.append(PrimeEntry(r, x, tuple(sorted(congruence_test(x)))))
    return report
