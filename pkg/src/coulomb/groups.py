"""Gauge group data: torus rank, matter weights, Weyl generators and roots.

Weyl matrices act on cocharacters by ``eta -> g @ eta`` and on weights by the
inverse transpose, which keeps the pairing invariant.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .graded import MULTIPLICATIVE, GradedElement
from .poly import Poly, tau, xvar

Matrix = tuple  # tuple of integer row tuples

DEFAULT_GROUP_BOUND = 10080


class GroupError(ValueError):
    pass


def pairing(nu: Sequence[int], eta: Sequence[int]) -> int:
    if len(nu) != len(eta):
        raise GroupError(f"rank mismatch: weight {tuple(nu)} vs cocharacter {tuple(eta)}")
    return sum(a * b for a, b in zip(nu, eta))


def identity(r: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(b)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(len(b[0]))) for i in range(len(a)))


def matvec(a: Matrix, v: Sequence[int]) -> tuple:
    return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def det(a: Matrix) -> Fraction:
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for k in range(c, n):
                m[r][k] -= f * m[c][k]
    return out


def inverse(a: Matrix) -> Matrix:
    """Inverse of a unimodular integer matrix."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise GroupError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        lead = m[c][c]
        m[c] = [x / lead for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    out = []
    for row in m:
        vals = row[n:]
        if any(x.denominator != 1 for x in vals):
            raise GroupError("matrix is not unimodular")
        out.append(tuple(int(x) for x in vals))
    return tuple(out)


def act_on_weight(g: Matrix, nu: Sequence[int]) -> tuple:
    return matvec(transpose(inverse(g)), nu)


def _as_vector(w, rank: int | None = None) -> tuple:
    if isinstance(w, int):
        w = (w,)
    w = tuple(int(x) for x in w)
    if rank is not None and len(w) != rank:
        raise GroupError(f"vector {w} does not have rank {rank}")
    return w


def _as_matrix(g, rank: int) -> Matrix:
    if isinstance(g, int):
        g = [[g]]
    g = tuple(tuple(int(x) for x in row) for row in g)
    if len(g) != rank or any(len(row) != rank for row in g):
        raise GroupError(f"Weyl generator {g} is not {rank}x{rank}")
    return g


def matrix_order(g: Matrix, bound: int = DEFAULT_GROUP_BOUND) -> int:
    one = identity(len(g))
    power = g
    for k in range(1, bound + 1):
        if power == one:
            return k
        power = matmul(power, g)
    raise GroupError(f"Weyl generator {g} has order exceeding {bound}")


@dataclass(frozen=True)
class GroupData:
    rank: int
    weights: tuple = ()
    weyl: tuple = ()
    roots: tuple | None = None
    pi1_torsion: int = 1
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.rank < 1:
            raise GroupError("rank must be positive")
        object.__setattr__(self, "weights", tuple(_as_vector(w, self.rank) for w in self.weights))
        object.__setattr__(self, "weyl", tuple(_as_matrix(g, self.rank) for g in self.weyl))
        if self.roots is not None:
            object.__setattr__(self, "roots", tuple(_as_vector(a, self.rank) for a in self.roots))
        self.validate()

    def validate(self) -> None:
        wcount = Counter(self.weights)
        rcount = Counter(self.roots or ())
        for g in self.weyl:
            if abs(det(g)) != 1:
                raise GroupError(f"Weyl generator {g} does not have determinant +-1")
            matrix_order(g)
            if Counter(act_on_weight(g, w) for w in self.weights) != wcount:
                raise GroupError(f"Weyl generator {g} does not permute the weights of V")
            if self.roots is not None and Counter(act_on_weight(g, a) for a in self.roots) != rcount:
                raise GroupError(f"Weyl generator {g} does not permute the roots")

    # derived data -----------------------------------------------------
    @property
    def has_weyl(self) -> bool:
        return bool(self.weyl)

    def elements(self, bound: int = DEFAULT_GROUP_BOUND) -> list:
        """Enumerate the group generated by the Weyl generators."""
        one = identity(self.rank)
        seen = {one}
        frontier = [one]
        while frontier:
            nxt = []
            for a in frontier:
                for g in self.weyl:
                    b = matmul(g, a)
                    if b not in seen:
                        seen.add(b)
                        if len(seen) > bound:
                            raise GroupError(f"Weyl group order exceeds bound {bound}")
                        nxt.append(b)
            frontier = nxt
        return sorted(seen)

    def stabilizer(self, eta: Sequence[int], bound: int = DEFAULT_GROUP_BOUND) -> list:
        eta = tuple(eta)
        return [g for g in self.elements(bound) if matvec(g, eta) == eta]

    def orbit(self, eta: Sequence[int], bound: int = DEFAULT_GROUP_BOUND) -> list:
        return sorted({matvec(g, tuple(eta)) for g in self.elements(bound)})

    def with_weights(self, weights) -> "GroupData":
        return GroupData(self.rank, tuple(weights), self.weyl, self.roots, self.pi1_torsion, self.name)

    def to_json(self) -> dict:
        out = {"rank": self.rank, "weights": [list(w) for w in self.weights]}
        if self.weyl:
            out["weyl"] = [[list(row) for row in g] for g in self.weyl]
        if self.roots is not None:
            out["roots"] = [list(a) for a in self.roots]
        if self.pi1_torsion != 1:
            out["pi1_torsion"] = self.pi1_torsion
        return out


def u1(weights: Iterable = ()) -> GroupData:
    return GroupData(1, tuple(_as_vector(w) for w in weights), name="u1")


def torus(r: int, weights: Iterable = ()) -> GroupData:
    return GroupData(r, tuple(_as_vector(w, r) for w in weights), name="torus")


def su2(weights: Iterable = (1, -1)) -> GroupData:
    """SU(2) in the coroot basis: reflection ``-1`` and roots ``{2, -2}``."""
    return GroupData(1, tuple(_as_vector(w) for w in weights), weyl=(((-1,),),), roots=((2,), (-2,)), name="su2")


def from_json(data: dict) -> GroupData:
    """Build group data from ``{"rank", "weights", "weyl", "roots"}`` or ``{"group": ...}``."""
    name = data.get("group")
    weights = data.get("weights", [])
    if name == "u1":
        g = u1(weights)
    elif name == "su2":
        g = su2(weights)
    elif name == "torus":
        g = torus(int(data["rank"]), weights)
    elif name is None:
        if "rank" not in data:
            raise GroupError("group descriptor needs 'rank' or 'group'")
        g = GroupData(
            int(data["rank"]),
            tuple(weights),
            tuple(data.get("weyl", ())),
            tuple(data["roots"]) if data.get("roots") is not None else None,
            int(data.get("pi1_torsion", 1)),
        )
    else:
        raise GroupError(f"unknown built-in group {name!r}")
    if data.get("pi1_torsion", 1) != 1 and name is not None:
        g = GroupData(g.rank, g.weights, g.weyl, g.roots, int(data["pi1_torsion"]), g.name)
    return g


def reduce_by_roots(G: GroupData) -> GroupData:
    """Remove one copy of each root from the weights; keep the Weyl generators."""
    if G.roots is None:
        raise GroupError("group has no roots")
    left = Counter(G.weights)
    for a in G.roots:
        if left[a] == 0:
            raise GroupError("weights do not contain roots")
        left[a] -= 1
    weights = tuple(sorted(left.elements()))
    return GroupData(G.rank, weights, G.weyl, None, G.pi1_torsion, name="torus")


def weyl_act(g: Matrix, f: GradedElement) -> GradedElement:
    """Act by ``g`` on a graded element: ``z^eta p(tau) -> z^(g eta) p(g^-1 tau)``."""
    r = f.rank
    g = _as_matrix(g, r)
    ginv = inverse(g)
    if f.flavor == MULTIPLICATIVE:
        # x^nu -> x^(g^-T nu): x_i -> prod_j x_j^(g^-T)_{ji}
        git = transpose(ginv)
        images = {xvar(i): Poly.monomial({xvar(j): git[j][i] for j in range(r)}) for i in range(r)}
    else:
        images = {
            tau(i): sum((Poly.monomial({tau(j): 1}, ginv[i][j]) for j in range(r) if ginv[i][j]), Poly())
            for i in range(r)
        }
    den = f.den
    sign = 1
    if any(den):
        # monomial denominators stay monomial only under signed permutations
        new_den = [0] * r
        for i, d in enumerate(den):
            if not d:
                continue
            nz = [(j, ginv[i][j]) for j in range(r) if ginv[i][j]]
            if len(nz) != 1 or abs(nz[0][1]) != 1:
                raise GroupError("Weyl action on tau-denominators needs a signed permutation")
            j, s = nz[0]
            new_den[j] += d
            sign *= s**d
        den = tuple(new_den)
    coeffs = {matvec(g, eta): p.subs(images) * sign for eta, p in f.coeffs.items()}
    return type(f)(coeffs, rank=r, den=den, flavor=f.flavor)
