"""Transport of subspaces of V (+) V* through a linear map.

For a linear map L: Q^n -> Q^m (the differential of a map of manifolds at a
point), the pullback takes subspaces of Q^{2m} to subspaces of Q^{2n} and the
pushforward goes the other way.  The dimension bookkeeping (the S / Sigma
auxiliary spaces and the predicted dimensions) is exposed so tests can verify
the counting identities independently of the solved subspaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import Matrix, Subspace, image, kernel
from .pointwise import GeometryError, orthogonal_g
from .scalars import as_fraction


@dataclass(frozen=True)
class LinearMap:
    """An m x n rational matrix acting on tangent vectors; its transpose
    moves covectors the other way."""

    n: int
    m: int
    matrix: Matrix

    def __post_init__(self):
        if (self.matrix.rows, self.matrix.cols) != (self.m, self.n):
            raise GeometryError(f"matrix shape must be {self.m}x{self.n}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "LinearMap":
        mat = Matrix([[as_fraction(x) for x in row] for row in rows])
        return cls(mat.cols, mat.rows, mat)

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls(n, n, Matrix.identity(n))

    def push(self, vector) -> tuple:
        return self.matrix.apply(vector)

    def pull(self, covector) -> tuple:
        return self.matrix.transpose().apply(covector)

    def ker_push(self) -> Subspace:
        """ker L in the source tangent space."""
        return kernel(self.matrix)

    def ker_pull(self) -> Subspace:
        """ker L^T in the target cotangent space."""
        return kernel(self.matrix.transpose())

    def image_tangent(self) -> Subspace:
        return image(self.matrix)

    def image_cotangent(self) -> Subspace:
        return image(self.matrix.transpose())

    def is_surjective(self) -> bool:
        return self.matrix.rank() == self.m

    def is_injective(self) -> bool:
        return self.matrix.rank() == self.n


def _check_ambient(space: Subspace, dim: int, what: str):
    if space.ambient_dim != 2 * dim:
        raise GeometryError(f"{what}: expected ambient dimension {2 * dim}, got {space.ambient_dim}")


def pullback_subspace(L: LinearMap, E: Subspace) -> Subspace:
    """{(X, L^T a) : (L X, a) in E} as a subspace of Q^{2n}."""
    _check_ambient(E, L.m, "pullback")
    n, m = L.n, L.m
    eqs = E.equations()  # rows annihilating E
    if eqs.rows:
        # unknowns (X, a) in Q^{n+m}; constrain (L X, a) in E
        rows = []
        for er in eqs.entries:
            row = list(L.matrix.transpose().apply(er[:m]))  # er_tan . (L X)
            row += list(er[m:])
            rows.append(row)
        solutions = Matrix(rows).kernel_rows()
    else:
        solutions = Matrix.identity(n + m).entries
    out = []
    for sol in solutions:
        x = sol[:n]
        a = L.pull(sol[n:])
        out.append(tuple(x) + tuple(a))
    return Subspace(2 * n, out)


def pushforward_subspace(L: LinearMap, E: Subspace) -> Subspace:
    """{(L X, a) : (X, L^T a) in E} as a subspace of Q^{2m}."""
    _check_ambient(E, L.n, "pushforward")
    n, m = L.n, L.m
    eqs = E.equations()
    if eqs.rows:
        rows = []
        for er in eqs.entries:
            row = list(er[:n])
            row += list(L.matrix.apply(er[n:]))  # er_cot . (L^T a)
            rows.append(row)
        solutions = Matrix(rows).kernel_rows()
    else:
        solutions = Matrix.identity(n + m).entries
    out = []
    for sol in solutions:
        x = L.push(sol[:n])
        a = sol[n:]
        out.append(tuple(x) + tuple(a))
    return Subspace(2 * m, out)


def _embed_cotangent(space: Subspace, m: int) -> Subspace:
    return Subspace(2 * m, [tuple([Fraction(0)] * m) + tuple(w) for w in space.basis])


def _embed_tangent(space: Subspace, m: int) -> Subspace:
    return Subspace(2 * m, [tuple(v) + tuple([Fraction(0)] * m) for v in space.basis])


def e_cap_ker_pull(L: LinearMap, E: Subspace) -> Subspace:
    """E n (0 (+) ker L^T) inside Q^{2m}."""
    return E.intersect(_embed_cotangent(L.ker_pull(), L.m))


def e_cap_ker_push(L: LinearMap, E: Subspace) -> Subspace:
    """E n (ker L (+) 0) inside Q^{2n}."""
    return E.intersect(_embed_tangent(L.ker_push(), L.n))


def space_S(L: LinearMap, E: Subspace) -> Subspace:
    """E n (im L (+) target covectors): the pairs that see the source."""
    _check_ambient(E, L.m, "space_S")
    m = L.m
    img = L.image_tangent()
    window = Subspace(
        2 * m,
        [tuple(v) + tuple([Fraction(0)] * m) for v in img.basis]
        + [tuple([Fraction(0)] * m) + tuple(w) for w in Matrix.identity(m).entries],
    )
    return E.intersect(window)


def space_sigma(L: LinearMap, E: Subspace) -> Subspace:
    """E n (source vectors (+) im L^T): the pairs that project to the target."""
    _check_ambient(E, L.n, "space_sigma")
    n = L.n
    img = L.image_cotangent()
    window = Subspace(
        2 * n,
        [tuple(v) + tuple([Fraction(0)] * n) for v in Matrix.identity(n).entries]
        + [tuple([Fraction(0)] * n) + tuple(w) for w in img.basis],
    )
    return E.intersect(window)


def predict_pullback_dim(L: LinearMap, E: Subspace, E_prime: Subspace | None = None) -> int:
    """n - m + k corrected by the kernel overlaps of E and E'."""
    _check_ambient(E, L.m, "predict_pullback_dim")
    if E_prime is None:
        E_prime = orthogonal_g(E)
    k = E.dim
    return (
        L.n
        - L.m
        + k
        + e_cap_ker_pull(L, E_prime).dim
        - e_cap_ker_pull(L, E).dim
    )


def predict_pushforward_dim(L: LinearMap, E: Subspace, E_prime: Subspace | None = None) -> int:
    _check_ambient(E, L.n, "predict_pushforward_dim")
    if E_prime is None:
        E_prime = orthogonal_g(E)
    k = E.dim
    return (
        L.m
        - L.n
        + k
        + e_cap_ker_push(L, E_prime).dim
        - e_cap_ker_push(L, E).dim
    )


def pushpull(L: LinearMap, E: Subspace) -> Subspace:
    """Pushforward of the pullback; equals E when L is surjective."""
    if not L.is_surjective():
        raise GeometryError("pushpull round trip requires a surjective map")
    return pushforward_subspace(L, pullback_subspace(L, E))


def pullpush(L: LinearMap, E: Subspace) -> Subspace:
    """Pullback of the pushforward; equals E when L is injective."""
    if not L.is_injective():
        raise GeometryError("pullpush round trip requires an injective map")
    return pullback_subspace(L, pushforward_subspace(L, E))
