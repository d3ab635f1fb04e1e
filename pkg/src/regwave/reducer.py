"""Energy-guided wavelet packet reduction of counter windows.

At each level both children of the current block are computed, but only the
one holding more energy survives.  The kept branch letters form a path such
as ``"LH"``, and the discarded sibling energies are recorded so that the
reconstruction error is known without ever reconstructing: by orthonormality
it equals the sum of everything that was thrown away.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FamilyMismatchError, LengthError, PolicyError
from .wavelets import FilterPair, analysis_step, energy, synthesis_step


@dataclass(frozen=True)
class ReductionPolicy:
    """How far to descend and when to stop early.

    max_depth caps the number of analysis steps.  min_energy_ratio stops the
    descent once the winning child would hold less than that fraction of its
    parent's energy; the first step is always taken so a reduction is never
    empty.
    """

    max_depth: int = 1
    min_energy_ratio: float = 0.0

    def __post_init__(self):
        if self.max_depth < 1:
            raise PolicyError(f"max_depth must be at least 1, got {self.max_depth}")
        if not 0.0 <= self.min_energy_ratio <= 1.0:
            raise PolicyError(
                f"min_energy_ratio must lie in [0, 1], got {self.min_energy_ratio}"
            )


@dataclass(frozen=True)
class PacketNode:
    """One block in the packet tree: its path from the root and its content."""

    path: str
    coeffs: np.ndarray
    energy: float


@dataclass(frozen=True)
class ReducedRegister:
    """Single surviving branch of a packet decomposition.

    sibling_energies holds one ``(kept, discarded)`` pair per level, root
    first.  The energy of the reconstruction error equals the sum of the
    discarded entries.
    """

    original_length: int
    family: str
    path: str
    coeffs: np.ndarray
    sibling_energies: tuple[tuple[float, float], ...]

    @property
    def depth(self) -> int:
        return len(self.path)

    def discarded_energy(self) -> float:
        return sum(d for _, d in self.sibling_energies)


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def decompose(signal, filters: FilterPair, policy: ReductionPolicy) -> ReducedRegister:
    """Reduce a window to its strongest packet branch.

    The signal length must be a power of two with room for max_depth halvings.
    Ties in child energy keep the approximation branch.
    """
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1 or not _is_power_of_two(x.shape[0]) or x.shape[0] < 2:
        raise LengthError(
            f"window length must be a power of two >= 2, got shape {x.shape}"
        )
    if x.shape[0] >> policy.max_depth < 1:
        raise PolicyError(
            f"max_depth {policy.max_depth} exceeds log2 of the window length {x.shape[0]}"
        )

    node = PacketNode("", x, energy(x))
    ledger: list[tuple[float, float]] = []
    for level in range(1, policy.max_depth + 1):
        approx, detail = analysis_step(node.coeffs, filters)
        e_lo, e_hi = energy(approx), energy(detail)
        if e_hi > e_lo:
            winner = PacketNode(node.path + "H", detail, e_hi)
            kept, discarded = e_hi, e_lo
        else:
            winner = PacketNode(node.path + "L", approx, e_lo)
            kept, discarded = e_lo, e_hi
        # The energy floor only guards descents past the first level, so the
        # result always carries at least one branch letter.
        if level > 1 and kept < policy.min_energy_ratio * node.energy:
            break
        ledger.append((kept, discarded))
        node = winner

    coeffs = node.coeffs.copy()
    coeffs.setflags(write=False)
    return ReducedRegister(
        original_length=x.shape[0],
        family=filters.family,
        path=node.path,
        coeffs=coeffs,
        sibling_energies=tuple(ledger),
    )


def synthesize(reduced: ReducedRegister, filters: FilterPair) -> np.ndarray:
    """Rebuild a full-length window from the kept branch.

    Discarded siblings enter as zero blocks, so the result is the orthogonal
    projection of the original window onto the kept branch's subspace.
    """
    if filters.family != reduced.family:
        raise FamilyMismatchError(
            f"register was reduced with {reduced.family!r}, not {filters.family!r}"
        )
    if any(branch not in "LH" for branch in reduced.path):
        raise PolicyError(f"path may only contain L and H, got {reduced.path!r}")
    current = np.asarray(reduced.coeffs, dtype=np.float64)
    for branch in reversed(reduced.path):
        zeros = np.zeros_like(current)
        if branch == "L":
            current = synthesis_step(current, zeros, filters)
        else:
            current = synthesis_step(zeros, current, filters)
    if current.shape[0] != reduced.original_length:
        raise LengthError(
            f"path {reduced.path!r} with {reduced.coeffs.shape[0]} coefficients does "
            f"not rebuild {reduced.original_length} samples"
        )
    return current


def compression_ratio(reduced: ReducedRegister) -> float:
    """Fraction of samples dropped: 0.5 at depth 1, 0.75 at depth 2, and so on."""
    return 1.0 - reduced.coeffs.shape[0] / reduced.original_length
