"""
Surface models: the regular-octagon genus-2 group and the quaternion
family Gamma(n, p).
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint, isprime, legendre_symbol

from src.core.exceptions import BadParameters, NotInGroup, RelatorCheckFailed
from src.core.fuchsian import (
    ExactEntries,
    GroupElement,
    LengthValue,
    QuadInt,
    length_from_trace,
    mul,
)
from src.core.words import Word, homology
from src.utils.logger import get_logger

logger = get_logger(__name__)

RELATOR_TOLERANCE = 1e-8


@dataclass(frozen=True)
class SurfacePresentation:
    """Generators, relator and metadata of an enumerable model."""

    kind: str
    # None when the generators are not known to present a closed surface
    genus: Optional[int]
    generators: Tuple[GroupElement, ...]
    relator: Word
    volume: Optional[float]
    label: str = "surface group"
    systole_lb: Optional[float] = None
    systole_flag: str = "unset"
    certified_generation: bool = True
    # circumradius of a Dirichlet domain centred at i, when one is known
    domain_radius: Optional[float] = None
    parameters: Dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def letter(self, x: int) -> GroupElement:
        g = self.generators[abs(x) - 1]
        return g if x > 0 else g.inverse()

    def evaluate(self, word: Sequence[int]) -> GroupElement:
        """Float product of the letters of ``word``."""
        m = np.eye(2)
        for x in word:
            m = m @ self.letter(x).matrix
        return GroupElement(m)

    def relator_defect(self) -> float:
        """Entrywise distance of the evaluated relator from +-identity."""
        if not self.relator:
            return 0.0
        m = self.evaluate(self.relator).matrix
        return float(min(np.max(np.abs(m - np.eye(2))), np.max(np.abs(m + np.eye(2)))))

    def to_descriptor(self) -> Dict[str, Any]:
        block: Dict[str, Any] = {"kind": self.kind, "genus": self.genus}
        block.update(self.parameters)
        if self.kind == "octagon":
            block["generators"] = [
                [repr(float(v)) for v in g.matrix.ravel()] for g in self.generators
            ]
        return block

    def digest(self) -> bytes:
        """SHA-256 over the descriptor; fixes the model a table belongs to."""
        payload = {
            "kind": self.kind,
            "genus": self.genus,
            "relator": list(self.relator),
            "parameters": self.parameters,
            "generators": [
                [f"{float(v):.12e}" for v in g.matrix.ravel()] for g in self.generators
            ],
        }
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode("utf-8")).digest()

    def with_systole(self, systole: Optional[float]) -> SurfacePresentation:
        """Attach the shortest enumerated length, flagged empirical."""
        return replace(self, systole_lb=systole, systole_flag="empirical")


# ---------------------------------------------------------------- octagon

def _rotation(theta: float) -> np.ndarray:
    """Elliptic element fixing i, rotating directions by theta."""
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, s], [-s, c]])


def _boost(r: float) -> np.ndarray:
    """Moves i to e^r i along the imaginary axis."""
    return np.diag([math.exp(r / 2.0), math.exp(-r / 2.0)])


def _side_pairing(i: int, j: int, inradius: float) -> np.ndarray:
    """Orientation-preserving map sending side i of the regular octagon onto
    side j with the octagon landing across side j: the rotation taking side i
    to side j followed by the half-turn about the midpoint of side j."""
    step = math.pi / 4.0
    half_turn = _boost(inradius) @ _rotation(math.pi) @ _boost(-inradius)
    return _rotation(j * step) @ half_turn @ _rotation(-i * step)


def _commutator(x: int, y: int) -> Word:
    return (x, y, -x, -y)


OCTAGON_RELATOR: Word = _commutator(1, 2) + _commutator(3, 4)


def octagon_group() -> SurfacePresentation:
    """Genus-2 group of the regular octagon with vertex angle pi/4.

    Side i is glued to side i+2 for i in {0, 1, 4, 5}, which is the
    boundary pattern a b a^-1 b^-1 c d c^-1 d^-1. Generator orientation
    and order are fixed by searching for the assignment under which the
    relator [a,b][c,d] evaluates to +-identity.
    """
    # cosh(inradius) = cot(pi/8) for a regular octagon with angles pi/4
    inradius = math.acosh(1.0 / math.tan(math.pi / 8.0))
    # cosh(circumradius) = cot(pi/8)^2
    circumradius = math.acosh(1.0 / math.tan(math.pi / 8.0) ** 2)
    pairings = {k: _side_pairing(k, k + 2, inradius) for k in (0, 1, 4, 5)}

    def inverse(m: np.ndarray) -> np.ndarray:
        return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]])

    def choices(pair: Tuple[int, int]):
        for first, second in (pair, pair[::-1]):
            for s1, s2 in itertools.product((1, -1), repeat=2):
                a = pairings[first] if s1 > 0 else inverse(pairings[first])
                b = pairings[second] if s2 > 0 else inverse(pairings[second])
                yield a, b

    best: Optional[Tuple[float, List[np.ndarray]]] = None
    for a, b in choices((0, 1)):
        for c, d in choices((4, 5)):
            gens = [GroupElement(m) for m in (a, b, c, d)]
            candidate = SurfacePresentation(
                kind="octagon", genus=2, generators=tuple(gens),
                relator=OCTAGON_RELATOR, volume=4.0 * math.pi,
            )
            defect = candidate.relator_defect()
            if best is None or defect < best[0]:
                best = (defect, [a, b, c, d])
    defect, mats = best
    if defect > RELATOR_TOLERANCE:
        raise RelatorCheckFailed(f"Octagon relator defect {defect:.3e} exceeds {RELATOR_TOLERANCE}")
    model = SurfacePresentation(
        kind="octagon", genus=2, generators=tuple(GroupElement(m) for m in mats),
        relator=OCTAGON_RELATOR, volume=4.0 * math.pi, domain_radius=circumradius,
    )
    if any(homology(model.relator, model.rank)):
        raise RelatorCheckFailed("Surface relator must have zero homology")
    logger.debug(f"Octagon group built, relator defect {defect:.3e}")
    return model


# ------------------------------------------------------------- arithmetic

def check_arithmetic_parameters(n: int, p: int) -> None:
    """p prime, p = 1 mod 4, n a squarefree quadratic non-residue mod p."""
    if p < 2 or not isprime(p) or p % 4 != 1:
        raise BadParameters(f"p must be a prime congruent to 1 mod 4, got {p}")
    if n <= 0 or any(e > 1 for e in factorint(n).values()):
        raise BadParameters(f"n must be a positive squarefree integer, got {n}")
    if n % p == 0 or legendre_symbol(n % p, p) != -1:
        raise BadParameters(f"n = {n} must be a quadratic non-residue mod {p}")


def norm_form(a: int, b: int, c: int, d: int, n: int, p: int) -> int:
    return a * a - b * b * n - c * c * p + d * d * n * p


def arithmetic_element(a: int, b: int, c: int, d: int, n: int, p: int) -> GroupElement:
    """Exact element [[a + b sqrt n, (c + d sqrt n) sqrt p], [(c - d sqrt n) sqrt p, a - b sqrt n]]."""
    check_arithmetic_parameters(n, p)
    value = norm_form(a, b, c, d, n, p)
    if value != 1:
        raise NotInGroup(f"Norm form of ({a},{b},{c},{d}) is {value}, not 1")
    entries = ExactEntries(
        alpha=QuadInt(a, b, n),
        beta=QuadInt(c, d, n),
        gamma=QuadInt(c, -d, n),
        delta=QuadInt(a, -b, n),
        p=p,
    )
    return GroupElement.from_exact(entries)


def in_arithmetic_group(g: GroupElement, n: int, p: int) -> bool:
    """Membership test of an exact element via its quadruple's norm form."""
    e = g.exact
    if e is None or e.p != p or e.alpha.n != n:
        return False
    if e.delta != e.alpha.conj() or e.gamma != e.beta.conj():
        return False
    return norm_form(e.alpha.a, e.alpha.b, e.beta.a, e.beta.b, n, p) == 1


def xm(m: int) -> LengthValue:
    """log(2m^2 - 1 + 2m sqrt(m^2 - 1)), the length of a trace-2m element."""
    if m < 2:
        raise BadParameters(f"m must be >= 2, got {m}")
    # log of x_m = 2*arccosh(m), written stably
    return 2.0 * math.log(m + math.sqrt((m - 1.0) * (m + 1.0)))


@dataclass(frozen=True)
class ArithmeticModel:
    p: int
    n: int
    generator_set: Tuple[Tuple[int, int, int, int], ...] = ()
    certified_generation: bool = False
    volume: Optional[float] = None

    def __post_init__(self):
        check_arithmetic_parameters(self.n, self.p)
        for quad in self.generator_set:
            if norm_form(*quad, self.n, self.p) != 1:
                raise NotInGroup(f"Generator {quad} is not in Gamma({self.n},{self.p})")

    def elements(self) -> List[GroupElement]:
        return [arithmetic_element(*quad, self.n, self.p) for quad in self.generator_set]


def arithmetic_presentation(model: ArithmeticModel) -> SurfacePresentation:
    """Enumerable presentation of the subgroup generated by the supplied set."""
    if not model.generator_set:
        raise BadParameters("Arithmetic model needs at least one generator")
    gens = model.elements()
    for g in gens:
        length_from_trace(g.trace)
    if not products_stay_in_group(model):
        raise NotInGroup(f"Generator products leave Gamma({model.n},{model.p})")
    label = "surface group" if model.certified_generation else "subgroup spectrum"
    return SurfacePresentation(
        kind="arithmetic",
        genus=surface_genus(len(gens), model.certified_generation),
        generators=tuple(gens),
        relator=(),
        volume=model.volume,
        label=label,
        certified_generation=model.certified_generation,
        parameters={
            "n": model.n,
            "p": model.p,
            "generators": [list(q) for q in model.generator_set],
            "certified_generation": model.certified_generation,
        },
    )


def surface_genus(rank: int, certified_generation: bool) -> Optional[int]:
    """Genus of a closed surface presented on ``rank`` generators, if any."""
    if not certified_generation:
        return None
    if rank < 4 or rank % 2:
        raise BadParameters(
            f"A certified surface group needs an even number (>= 4) of generators, got {rank}"
        )
    return rank // 2


def products_stay_in_group(model: ArithmeticModel) -> bool:
    """Exact pairwise products of the generator set pass the membership test."""
    elems = model.elements()
    return all(
        in_arithmetic_group(mul(g, h, exact=True), model.n, model.p)
        for g in elems for h in elems
    )


def model_from_descriptor(block: Dict[str, Any]) -> SurfacePresentation:
    """Build a presentation from the JSON config block."""
    kind = block.get("kind")
    if kind == "octagon":
        return octagon_group()
    if kind == "arithmetic":
        quads = tuple(tuple(int(v) for v in q) for q in block.get("generators", []))
        volume = block.get("volume")
        model = ArithmeticModel(
            p=int(block["p"]),
            n=int(block["n"]),
            generator_set=quads,
            certified_generation=bool(block.get("certified_generation", False)),
            volume=None if volume is None else float(volume),
        )
        return arithmetic_presentation(model)
    raise BadParameters(f"Unknown model kind: {kind!r}")
