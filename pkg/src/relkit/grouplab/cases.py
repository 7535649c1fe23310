"""A split relative case over a finite ring, realized in its classical representation."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..relcalc import RelCalc
from ..relcalc.checks import constants_invertible
from ..relcalc.ringrep import RingRealization
from ..relroots import ProjectionSpec
from ..rings import FiniteRing, parse_ring
from ..rootcore import RootSystem
from .groups import MatrixGroup


class GateError(ValueError):
    """A case violates the hypotheses of the operation it was built for."""


@dataclass
class GroupCase:
    series: str
    rank: int
    J: tuple
    ring: FiniteRing
    spec: ProjectionSpec = field(repr=False)
    calc: RelCalc = field(repr=False)
    real: RingRealization = field(repr=False)

    @property
    def label(self) -> str:
        j = ",".join(str(x) for x in self.J)
        return f"{self.series}{self.rank}/J={{{j}}}/{self.ring.name}"

    @property
    def rs(self):
        return self.calc.rs

    @property
    def roots(self) -> list:
        return list(self.rs.elements)

    def module_elements(self, alpha, nonzero: bool = True) -> np.ndarray:
        return self.real.module_elements(alpha, nonzero)

    def ideal_vectors(self, alpha, ideal) -> np.ndarray:
        """Vectors of I * V_alpha, i.e. all coordinates in I."""
        vecs = self.real.module_elements(alpha, nonzero=False)
        keep = np.all(np.isin(vecs, sorted(ideal)), axis=1)
        return vecs[keep]

    def root_matrix(self, alpha, v) -> np.ndarray:
        return self.real.X(alpha, np.asarray(v)[None])[0]

    @cached_property
    def generators(self) -> list:
        """X_alpha(g e_k) for every root, fiber coordinate and additive generator g."""
        out = []
        for alpha in self.roots:
            d = self.calc.dim(alpha)
            for k in range(d):
                for g in self.ring.additive_generators:
                    v = [self.ring.zero] * d
                    v[k] = g
                    out.append(((alpha, tuple(v)), self.root_matrix(alpha, v)))
        return out

    def elementary_group(self, max_size: int = 20_000_000) -> MatrixGroup:
        return MatrixGroup(self.ring, self.generators, max_size=max_size)


def make_case(series: str, rank: int, J, ring) -> GroupCase:
    """Build a case; J lists kept simple roots with 1-based labels.

    The structure constants must be units in the ring (Z/4 is therefore
    admitted for type A only).
    """
    ring = parse_ring(ring) if isinstance(ring, str) else ring
    base = RootSystem.build(series, rank)
    if not constants_invertible(base, ring):
        raise GateError(f"structure constants of {series}{rank} are not invertible in {ring.name}")
    J = tuple(sorted(J))
    spec = ProjectionSpec.make(base, [j - 1 for j in J])
    calc = RelCalc(spec, rep="classical")
    return GroupCase(series.upper(), rank, J, ring, spec, calc, RingRealization(calc, ring))
