"""Complete nonsingular fans: validation, walls, wall relations, dual bases.

A fan is stored as an ordered ray list plus maximal cones given by ray
index sets.  Ray and cone order is preserved from input so every
downstream report is reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd

from .exact_linear import IntMatrix, int_det, rat_invert, solve_integral


@dataclass(frozen=True)
class Fan:
    """Validated complete nonsingular fan in a lattice of rank ``dim``."""

    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    def cone_rays(self, cone_index: int) -> tuple[tuple[int, ...], ...]:
        return tuple(self.rays[j] for j in self.max_cones[cone_index])


@dataclass(frozen=True)
class Wall:
    """Codimension-1 face shared by the maximal cones ``sigma1`` and ``sigma2``.

    ``extra1``/``extra2`` are the ray indices completing tau inside each
    cone, and ``relation`` holds the unique integers (a_1, ..., a_{n-1})
    with  v_extra1 + v_extra2 + sum a_k * v_tau[k] = 0.
    """

    tau: tuple[int, ...]
    sigma1: int
    sigma2: int
    extra1: int
    extra2: int
    relation: tuple[int, ...]


def _is_primitive(ray: tuple[int, ...]) -> bool:
    g = 0
    for x in ray:
        g = gcd(g, x)
    return g == 1


def make_fan(n: int, rays, max_cones) -> Fan:
    """Validate raw integer data into a Fan.

    Raises ValueError on: non-primitive rays, duplicate rays, cones of the
    wrong size, non-unimodular (non-smooth) cones, a facet not shared by
    exactly two maximal cones (non-complete), or a ray lying inside a cone
    it does not generate (overlapping cones).
    """
    if n < 1:
        raise ValueError("fan dimension must be at least 1")
    ray_tuples = tuple(tuple(int(x) for x in ray) for ray in rays)
    for ray in ray_tuples:
        if len(ray) != n:
            raise ValueError(f"ray {ray} does not have {n} coordinates")
        if not _is_primitive(ray):
            raise ValueError(f"non-primitive ray {ray}")
    if len(set(ray_tuples)) != len(ray_tuples):
        raise ValueError("duplicate rays")

    cone_tuples = []
    for cone in max_cones:
        idx = tuple(sorted(int(i) for i in cone))
        if len(idx) != n or len(set(idx)) != n:
            raise ValueError(f"maximal cone {tuple(cone)} must consist of {n} distinct rays")
        if idx[0] < 0 or idx[-1] >= len(ray_tuples):
            raise ValueError(f"cone {tuple(cone)} references a ray that does not exist")
        if abs(int_det([ray_tuples[i] for i in idx])) != 1:
            raise ValueError(f"non-unimodular cone {tuple(cone)}")
        cone_tuples.append(idx)
    if len(set(cone_tuples)) != len(cone_tuples):
        raise ValueError("duplicate maximal cones")

    used = {i for cone in cone_tuples for i in cone}
    if used != set(range(len(ray_tuples))):
        raise ValueError("every ray must generate some maximal cone")

    facet_count: dict[tuple[int, ...], int] = {}
    for idx in cone_tuples:
        for facet in combinations(idx, n - 1):
            facet_count[facet] = facet_count.get(facet, 0) + 1
    for facet, count in facet_count.items():
        if count != 2:
            raise ValueError(
                f"facet {facet} belongs to {count} maximal cones; a complete fan needs exactly 2"
            )

    # a foreign ray with nonnegative coordinates in a cone's basis sits inside it
    for idx in cone_tuples:
        basis_inv = rat_invert([list(col) for col in zip(*(ray_tuples[i] for i in idx))])
        for j, ray in enumerate(ray_tuples):
            if j in idx:
                continue
            coords = [sum(row[k] * ray[k] for k in range(n)) for row in basis_inv]
            if all(c >= 0 for c in coords):
                raise ValueError(f"overlapping cones: ray {j} lies inside cone {idx}")

    return Fan(n, ray_tuples, tuple(cone_tuples))


@lru_cache(maxsize=None)
def walls(fan: Fan) -> tuple[Wall, ...]:
    """All walls of the fan, in lexicographic order of their tau index sets."""
    by_facet: dict[tuple[int, ...], list[int]] = {}
    for ci, cone in enumerate(fan.max_cones):
        for facet in combinations(cone, fan.dim - 1):
            by_facet.setdefault(facet, []).append(ci)
    out = []
    for tau in sorted(by_facet):
        c1, c2 = sorted(by_facet[tau])
        (e1,) = set(fan.max_cones[c1]) - set(tau)
        (e2,) = set(fan.max_cones[c2]) - set(tau)
        target = [-(a + b) for a, b in zip(fan.rays[e1], fan.rays[e2])]
        if tau:
            cols = IntMatrix.from_rows([[fan.rays[t][r] for t in tau] for r in range(fan.dim)])
            solved = solve_integral(cols, IntMatrix.from_rows([[v] for v in target]))
            if solved is None:
                raise ValueError(f"wall relation for tau {tau} has no integral solution")
            relation = tuple(solved[0].column(0))
        else:
            if any(target):
                raise ValueError(f"opposite rays {e1}, {e2} do not cancel")
            relation = ()
        out.append(Wall(tau, c1, c2, e1, e2, relation))
    return tuple(out)


def dual_basis(fan: Fan, cone_index: int) -> tuple[tuple[int, ...], ...]:
    """Vectors e^1..e^n of the dual lattice with <e^i, v_j> = delta_ij.

    Indexed against the stored (sorted) ray order of the cone; existence is
    guaranteed by unimodularity, and the result is integral.
    """
    ray_rows = [list(r) for r in fan.cone_rays(cone_index)]
    inv = rat_invert([list(col) for col in zip(*ray_rows)])
    basis = []
    for row in inv:
        assert all(f.denominator == 1 for f in row)
        basis.append(tuple(int(f) for f in row))
    return tuple(basis)


def projective_space(n: int) -> Fan:
    """The standard fan of n-dimensional projective space."""
    if n < 1:
        raise ValueError("projective space needs dimension at least 1")
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = list(combinations(range(n + 1), n))
    return make_fan(n, rays, cones)


def parse_fan(text: str) -> Fan:
    """Parse the fan text format.

    Grammar: first content line "dim n", then "ray x1 ... xn" lines, then
    "cone i1 ... in" lines with 1-based ray indices.  '#' starts a comment;
    blank lines are ignored; anything else is rejected with a line number.
    """
    dim: int | None = None
    rays: list[list[int]] = []
    cones: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        keyword, args = parts[0], parts[1:]
        try:
            values = [int(tok) for tok in args]
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer token in {line!r}") from None
        if keyword == "dim":
            if dim is not None:
                raise ValueError(f"line {lineno}: duplicate dim line")
            if rays or cones:
                raise ValueError(f"line {lineno}: dim must come first")
            if len(values) != 1 or values[0] < 1:
                raise ValueError(f"line {lineno}: dim takes one positive integer")
            dim = values[0]
        elif keyword == "ray":
            if dim is None:
                raise ValueError(f"line {lineno}: ray before dim")
            if cones:
                raise ValueError(f"line {lineno}: ray lines must precede cone lines")
            if len(values) != dim:
                raise ValueError(f"line {lineno}: ray needs {dim} coordinates")
            rays.append(values)
        elif keyword == "cone":
            if dim is None:
                raise ValueError(f"line {lineno}: cone before dim")
            if len(values) != dim:
                raise ValueError(f"line {lineno}: cone needs {dim} ray indices")
            if any(v < 1 or v > len(rays) for v in values):
                raise ValueError(f"line {lineno}: cone index out of range")
            cones.append([v - 1 for v in values])
        else:
            raise ValueError(f"line {lineno}: unknown keyword {keyword!r}")
    if dim is None:
        raise ValueError("missing dim line")
    if not cones:
        raise ValueError("missing cone lines")
    return make_fan(dim, rays, cones)


def format_fan(fan: Fan) -> str:
    lines = [f"dim {fan.dim}"]
    lines += ["ray " + " ".join(str(x) for x in ray) for ray in fan.rays]
    lines += ["cone " + " ".join(str(i + 1) for i in cone) for cone in fan.max_cones]
    return "\n".join(lines) + "\n"
