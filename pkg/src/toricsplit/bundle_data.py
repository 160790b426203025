"""Equivariant bundle data over a fan: weight systems, pastings, Euler quotients.

A rank-r equivariant bundle is described by one multiset of r dual-lattice
weights per maximal cone plus an invertible r x r rational pasting matrix
per ordered pair of maximal cones, subject to three exact conditions
(net, cocycle, support).  Weights are stored sorted lexicographically and
pastings are permuted to match, so serialization is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .exact_linear import IntMatrix, Rat, rat_matmul, rat_rank, solve_integral
from .fan import Fan, dual_basis, walls
from .intersection import AugmentedIntersectionMatrix, principal_columns
from .splitting import SplittingSystem

PastingMatrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class KaneyamaBundleData:
    fan: Fan
    rank: int
    weight_systems: tuple[tuple[tuple[int, ...], ...], ...]
    pastings: tuple[tuple[PastingMatrix, ...], ...]

    def pasting(self, c2: int, c1: int) -> PastingMatrix:
        """Pasting matrix from cone c1's frame to cone c2's; rows index c2 weights."""
        return self.pastings[c2][c1]


def assemble_bundle(
    fan: Fan,
    weight_systems: Sequence[Sequence[Sequence[int]]],
    pasting_map: Mapping[tuple[int, int], Sequence[Sequence[Rat]]],
) -> KaneyamaBundleData:
    """Sort each weight system lexicographically and permute pastings to match."""
    n_cones = len(fan.max_cones)
    if len(weight_systems) != n_cones:
        raise ValueError("one weight system per maximal cone required")
    rank = len(weight_systems[0])
    sorted_systems = []
    perms = []
    for ws in weight_systems:
        if len(ws) != rank:
            raise ValueError("all weight systems must have the same rank")
        tagged = sorted(range(rank), key=lambda i: tuple(ws[i]))
        perms.append(tagged)
        sorted_systems.append(tuple(tuple(int(x) for x in ws[i]) for i in tagged))
    grid = []
    for c2 in range(n_cones):
        row = []
        for c1 in range(n_cones):
            if c1 == c2:
                mat = tuple(
                    tuple(Fraction(1 if i == j else 0) for j in range(rank)) for i in range(rank)
                )
            else:
                raw = pasting_map[(c2, c1)]
                mat = tuple(
                    tuple(Fraction(raw[perms[c2][i]][perms[c1][j]]) for j in range(rank))
                    for i in range(rank)
                )
            row.append(mat)
        grid.append(tuple(row))
    return KaneyamaBundleData(fan, rank, tuple(sorted_systems), tuple(grid))


def validate(data: KaneyamaBundleData) -> list[str]:
    """All violations of the net, cocycle, and support conditions (empty = valid)."""
    fan = data.fan
    r = data.rank
    violations: list[str] = []
    n_cones = len(fan.max_cones)
    if len(data.weight_systems) != n_cones:
        return ["weight system count does not match the fan"]
    for ci, ws in enumerate(data.weight_systems):
        if len(ws) != r or any(len(chi) != fan.dim for chi in ws):
            violations.append(f"weight system of cone {ci} has the wrong shape")
    for c2 in range(n_cones):
        for c1 in range(n_cones):
            p = data.pasting(c2, c1)
            if len(p) != r or any(len(row) != r for row in p):
                violations.append(f"pasting ({c2},{c1}) has the wrong shape")
                continue
            if c1 == c2:
                if any(p[i][j] != (1 if i == j else 0) for i in range(r) for j in range(r)):
                    violations.append(f"pasting ({c2},{c1}) is not the identity")
            elif rat_rank(p) < r:
                violations.append(f"pasting ({c2},{c1}) is singular")
    if violations:
        return violations

    for wall in walls(fan):
        tau_rays = [fan.rays[t] for t in wall.tau]
        c1, c2 = wall.sigma1, wall.sigma2
        key1 = sorted(tuple(_dot(chi, v) for v in tau_rays) for chi in data.weight_systems[c1])
        key2 = sorted(tuple(_dot(chi, v) for v in tau_rays) for chi in data.weight_systems[c2])
        if key1 != key2:
            violations.append(
                f"net condition fails at wall tau {wall.tau} between cones {c1} and {c2}"
            )
        for ca, cb in ((c2, c1), (c1, c2)):
            p = data.pasting(ca, cb)
            for i, chi_a in enumerate(data.weight_systems[ca]):
                for j, chi_b in enumerate(data.weight_systems[cb]):
                    if p[i][j] == 0:
                        continue
                    if any(_dot(chi_a, v) - _dot(chi_b, v) < 0 for v in tau_rays):
                        violations.append(
                            f"support fails for pasting ({ca},{cb}) entry ({i},{j}) at wall tau {wall.tau}"
                        )

    for c3 in range(n_cones):
        for c2 in range(n_cones):
            if c2 == c3:
                continue
            left = {c1: rat_matmul(data.pasting(c3, c2), data.pasting(c2, c1)) for c1 in range(n_cones) if c1 != c2}
            for c1, prod in left.items():
                target = data.pasting(c3, c1)
                if any(prod[i][j] != target[i][j] for i in range(r) for j in range(r)):
                    violations.append(f"cocycle fails for cones ({c3},{c2},{c1})")
    return violations


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def tangent_bundle(fan: Fan) -> KaneyamaBundleData:
    """Tangent bundle data: each cone's weight system is its dual basis.

    The pasting from cone c1 to cone c2 pairs c2's dual basis against c1's
    rays, which is exactly the Jacobian of the monomial chart change, so the
    cocycle condition holds identically.
    """
    duals = [dual_basis(fan, ci) for ci in range(len(fan.max_cones))]
    pasting_map = {}
    for c2 in range(len(fan.max_cones)):
        for c1 in range(len(fan.max_cones)):
            if c1 == c2:
                continue
            rays1 = fan.cone_rays(c1)
            pasting_map[(c2, c1)] = [[_dot(e, v) for v in rays1] for e in duals[c2]]
    return assemble_bundle(fan, duals, pasting_map)


def cp2_rank2(a: int, b: int, c: int) -> KaneyamaBundleData:
    """Rank-2 bundle on the projective plane with one weight pair per chart.

    Charts in cone order {0,1}, {0,2}, {1,2} carry the weight systems
    {(a,0),(0,b)}, {(a,-a),(0,-c)}, {(-b,b),(-c,0)}.  The pastings are the
    unique (up to equivalence) constant matrices with the weight-matched
    entries nonzero that satisfy the cocycle and support conditions; the
    off-match entries die in every wall limit, so the splitting numbers only
    see the matching.
    """
    if a < 1 or b < 1 or c < 1:
        raise ValueError("weights a, b, c must be positive")
    from .fan import projective_space

    fan = projective_space(2)
    w_01 = [(a, 0), (0, b)]
    w_02 = [(a, -a), (0, -c)]
    w_12 = [(-b, b), (-c, 0)]
    weights = [w_01, w_02, w_12]
    pasting_map = {
        (2, 0): [[1, 1], [1, 0]],
        (1, 2): [[1, 0], [1, -1]],
        (1, 0): [[1, 1], [0, 1]],
        (0, 2): [[0, 1], [1, -1]],
        (2, 1): [[1, 0], [1, -1]],
        (0, 1): [[1, -1], [0, 1]],
    }
    return assemble_bundle(fan, weights, pasting_map)


@dataclass(frozen=True)
class EulerBundleSpec:
    """Quotient of a sum of line bundles by a trivial subbundle.

    The data is r+1 summand divisors (ray-coefficient vectors) together
    with the homogeneous-coordinate exponent vector of the monomial section
    of each summand; the quotient bundle has rank r.
    """

    fan: Fan
    summand_divisors: tuple[tuple[int, ...], ...]
    section_exponents: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.summand_divisors) - 1


def make_euler_spec(
    fan: Fan,
    divisors: Sequence[Sequence[int]],
    exponents: Sequence[Sequence[int]],
) -> EulerBundleSpec:
    j = len(fan.rays)
    if len(divisors) != len(exponents) or len(divisors) < 2:
        raise ValueError("need one exponent vector per summand divisor, at least two summands")
    for d in divisors:
        if len(d) != j:
            raise ValueError(f"divisor {tuple(d)} needs {j} ray coefficients")
    for alpha in exponents:
        if len(alpha) != j:
            raise ValueError(f"exponent vector {tuple(alpha)} needs {j} entries")
        if any(e < 0 for e in alpha):
            raise ValueError(f"exponent vector {tuple(alpha)} must be nonnegative")
    principal = IntMatrix.from_rows([list(col) for col in zip(*principal_columns(fan))])
    for d, alpha in zip(divisors, exponents):
        diff = IntMatrix.from_rows([[e - x] for e, x in zip(alpha, d)])
        if solve_integral(principal, diff) is None:
            raise ValueError(
                f"monomial {tuple(alpha)} is not a section of the summand {tuple(d)}"
            )
    return EulerBundleSpec(
        fan,
        tuple(tuple(int(x) for x in d) for d in divisors),
        tuple(tuple(int(e) for e in alpha) for alpha in exponents),
    )


def euler_monomial_spec(fan: Fan, multiplicities: Sequence[int]) -> EulerBundleSpec:
    """Summands m_i * D(v_i) with sections z_i ** m_i, one per ray."""
    j = len(fan.rays)
    if len(multiplicities) != j:
        raise ValueError(f"need one multiplicity per ray ({j})")
    if any(m < 0 for m in multiplicities):
        raise ValueError("multiplicities must be nonnegative")
    vectors = [tuple(m if t == i else 0 for t in range(j)) for i, m in enumerate(multiplicities)]
    return make_euler_spec(fan, vectors, vectors)


def euler_splitting_system(
    spec: EulerBundleSpec, aim: AugmentedIntersectionMatrix
) -> SplittingSystem:
    """Wall-by-wall degrees of the quotient bundle.

    On each wall the summand sections restrict, by support of their
    monomials, to zero, a nonzero constant, or a power of one of the two
    wall coordinates.  A constant trivializes its summand: drop it.  With
    exactly one power of each wall coordinate and nothing else nonzero,
    those two summands merge into one of the summed degree.  Anything else
    is out of scope.
    """
    if aim.fan != spec.fan:
        raise ValueError("intersection matrix belongs to a different fan")
    taus = []
    rows = []
    for wi, wall in enumerate(aim.row_walls):
        q_row = aim.q.entries[wi]
        degs = [_dot(q_row, d) for d in spec.summand_divisors]
        tau = set(wall.tau)
        kinds = []
        for alpha in spec.section_exponents:
            support = {t for t, e in enumerate(alpha) if e > 0}
            if support & tau:
                kinds.append("zero")
            elif not support & {wall.extra1, wall.extra2}:
                kinds.append("constant")
            elif wall.extra2 not in support:
                kinds.append("power1")
            elif wall.extra1 not in support:
                kinds.append("power2")
            else:
                kinds.append("mixed")
        if "constant" in kinds:
            drop = kinds.index("constant")
            assert degs[drop] == 0
            remaining = [m for i, m in enumerate(degs) if i != drop]
        else:
            first = [i for i, k in enumerate(kinds) if k == "power1"]
            second = [i for i, k in enumerate(kinds) if k == "power2"]
            if len(first) == 1 and len(second) == 1 and "mixed" not in kinds:
                i, j2 = first[0], second[0]
                remaining = [degs[i] + degs[j2]] + [
                    m for t, m in enumerate(degs) if t not in (i, j2)
                ]
            else:
                raise ValueError("η restriction not in scope")
        taus.append(wall.tau)
        rows.append(tuple(sorted(remaining, reverse=True)))
    return SplittingSystem(tuple(taus), tuple(rows))


def format_bundle(data: KaneyamaBundleData) -> str:
    lines = [f"rank {data.rank}"]
    for ci, ws in enumerate(data.weight_systems):
        chunks = ";".join("(" + " ".join(str(x) for x in chi) + ")" for chi in ws)
        lines.append(f"weights {ci + 1}: {chunks}")
    n = len(data.fan.max_cones)
    for c2 in range(n):
        for c1 in range(n):
            if c1 == c2:
                continue
            flat = " ".join(str(x) for row in data.pasting(c2, c1) for x in row)
            lines.append(f"pasting {c2 + 1} {c1 + 1}: {flat}")
    return "\n".join(lines) + "\n"


def parse_bundle(text: str, fan: Fan) -> KaneyamaBundleData:
    """Parse the bundle text format against a fan; validates before returning.

    Grammar: "rank r", then one "weights i: (w ...);(w ...)" line per
    maximal cone (1-based), then one "pasting i j: <r*r rationals>" line per
    ordered pair of distinct maximal cones (from cone j's frame to cone i's,
    row-major).  '#' comments and blank lines are ignored.
    """
    rank: int | None = None
    n_cones = len(fan.max_cones)
    weights: dict[int, list[tuple[int, ...]]] = {}
    pastings: dict[tuple[int, int], list[list[Fraction]]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("rank"):
            if rank is not None:
                raise ValueError(f"line {lineno}: duplicate rank line")
            try:
                rank = int(line.split()[1])
            except (IndexError, ValueError):
                raise ValueError(f"line {lineno}: rank takes one integer") from None
            if rank < 1:
                raise ValueError(f"line {lineno}: rank must be positive")
        elif line.startswith("weights"):
            if rank is None:
                raise ValueError(f"line {lineno}: weights before rank")
            head, _, body = line.partition(":")
            try:
                ci = int(head.split()[1]) - 1
            except (IndexError, ValueError):
                raise ValueError(f"line {lineno}: weights needs a cone index") from None
            if not 0 <= ci < n_cones:
                raise ValueError(f"line {lineno}: cone index out of range")
            if ci in weights:
                raise ValueError(f"line {lineno}: duplicate weights for cone {ci + 1}")
            chis = []
            for chunk in body.split(";"):
                chunk = chunk.strip()
                if not (chunk.startswith("(") and chunk.endswith(")")):
                    raise ValueError(f"line {lineno}: weights must be parenthesized")
                try:
                    chi = tuple(int(tok) for tok in chunk[1:-1].split())
                except ValueError:
                    raise ValueError(f"line {lineno}: non-integer weight coordinate") from None
                if len(chi) != fan.dim:
                    raise ValueError(f"line {lineno}: weight needs {fan.dim} coordinates")
                chis.append(chi)
            if len(chis) != rank:
                raise ValueError(f"line {lineno}: expected {rank} weights")
            weights[ci] = chis
        elif line.startswith("pasting"):
            if rank is None:
                raise ValueError(f"line {lineno}: pasting before rank")
            head, _, body = line.partition(":")
            parts = head.split()
            try:
                c2, c1 = int(parts[1]) - 1, int(parts[2]) - 1
            except (IndexError, ValueError):
                raise ValueError(f"line {lineno}: pasting needs two cone indices") from None
            if not (0 <= c2 < n_cones and 0 <= c1 < n_cones) or c1 == c2:
                raise ValueError(f"line {lineno}: invalid cone pair")
            if (c2, c1) in pastings:
                raise ValueError(f"line {lineno}: duplicate pasting {c2 + 1} {c1 + 1}")
            try:
                vals = [Fraction(tok) for tok in body.split()]
            except ValueError:
                raise ValueError(f"line {lineno}: non-rational pasting entry") from None
            if len(vals) != rank * rank:
                raise ValueError(f"line {lineno}: expected {rank * rank} entries")
            pastings[(c2, c1)] = [vals[i * rank : (i + 1) * rank] for i in range(rank)]
        else:
            raise ValueError(f"line {lineno}: unknown keyword {line.split()[0]!r}")
    if rank is None:
        raise ValueError("missing rank line")
    missing_w = [ci + 1 for ci in range(n_cones) if ci not in weights]
    if missing_w:
        raise ValueError(f"missing weights for cones {missing_w}")
    missing_p = [
        (c2 + 1, c1 + 1)
        for c2 in range(n_cones)
        for c1 in range(n_cones)
        if c1 != c2 and (c2, c1) not in pastings
    ]
    if missing_p:
        raise ValueError(f"missing pastings for cone pairs {missing_p}")
    data = assemble_bundle(fan, [weights[ci] for ci in range(n_cones)], pastings)
    problems = validate(data)
    if problems:
        raise ValueError("; ".join(problems))
    return data


def format_euler(spec: EulerBundleSpec) -> str:
    lines = ["euler"]
    for d, alpha in zip(spec.summand_divisors, spec.section_exponents):
        lines.append(
            "summand " + " ".join(str(x) for x in d) + " : " + " ".join(str(e) for e in alpha)
        )
    return "\n".join(lines) + "\n"


def parse_euler(text: str, fan: Fan) -> EulerBundleSpec:
    """Parse the euler text format: line "euler", then "summand d1 .. dJ : e1 .. eJ" lines."""
    divisors: list[list[int]] = []
    exponents: list[list[int]] = []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not seen_header:
            if line != "euler":
                raise ValueError(f"line {lineno}: expected 'euler' header")
            seen_header = True
            continue
        if not line.startswith("summand"):
            raise ValueError(f"line {lineno}: unknown keyword {line.split()[0]!r}")
        body = line[len("summand") :]
        left, sep, right = body.partition(":")
        if not sep:
            raise ValueError(f"line {lineno}: summand needs 'divisor : exponents'")
        try:
            d = [int(tok) for tok in left.split()]
            alpha = [int(tok) for tok in right.split()]
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer summand entry") from None
        divisors.append(d)
        exponents.append(alpha)
    if not seen_header:
        raise ValueError("missing 'euler' header")
    return make_euler_spec(fan, divisors, exponents)


def load_bundle(text: str, fan: Fan) -> KaneyamaBundleData | EulerBundleSpec:
    """Dispatch on the first content line: 'rank' or 'euler'."""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "euler":
            return parse_euler(text, fan)
        if line.startswith("rank"):
            return parse_bundle(text, fan)
        raise ValueError(f"unrecognized bundle file header {line.split()[0]!r}")
    raise ValueError("empty bundle file")
