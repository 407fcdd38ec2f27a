"""Pointwise geometry of the double space Q^m (+) (Q^m)*.

A point value of a section of TM (+) T*M is a pair (X, alpha); we store it as
a single vector of length 2m (tangent components first, covector components
in the dual coordinate basis second).  The neutral pairing g, the 2-form
omega, g-orthogonals, the characteristic triple (E, E', varpi) and its
reconstruction, and the canonical almost-Dirac extension all live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import Matrix, Subspace, complement_in, kernel
from .scalars import as_fraction


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class BigVector:
    """A tangent/cotangent pair at a point."""

    m: int
    tangent: tuple
    cotangent: tuple

    def __post_init__(self):
        object.__setattr__(self, "tangent", tuple(as_fraction(x) for x in self.tangent))
        object.__setattr__(self, "cotangent", tuple(as_fraction(x) for x in self.cotangent))
        if len(self.tangent) != self.m or len(self.cotangent) != self.m:
            raise GeometryError("component lengths must equal m")

    def as_row(self) -> tuple:
        return self.tangent + self.cotangent

    @classmethod
    def from_row(cls, row: Sequence) -> "BigVector":
        if len(row) % 2:
            raise GeometryError("row length must be even")
        m = len(row) // 2
        return cls(m, tuple(row[:m]), tuple(row[m:]))


def pairing_g(u: BigVector, v: BigVector) -> Fraction:
    """Neutral metric: half the sum of the two mixed contractions."""
    if u.m != v.m:
        raise GeometryError("dimension mismatch")
    a_y = sum(a * y for a, y in zip(u.cotangent, v.tangent))
    b_x = sum(b * x for b, x in zip(v.cotangent, u.tangent))
    return Fraction(a_y + b_x, 2)


def form_omega(u: BigVector, v: BigVector) -> Fraction:
    """The companion nondegenerate 2-form (antisymmetric counterpart of g)."""
    if u.m != v.m:
        raise GeometryError("dimension mismatch")
    a_y = sum(a * y for a, y in zip(u.cotangent, v.tangent))
    b_x = sum(b * x for b, x in zip(v.cotangent, u.tangent))
    return Fraction(a_y - b_x, 2)


def _pairing_row(row_u: Sequence, row_v: Sequence) -> Fraction:
    m = len(row_u) // 2
    a_y = sum(row_u[m + i] * row_v[i] for i in range(m))
    b_x = sum(row_v[m + i] * row_u[i] for i in range(m))
    return Fraction(a_y + b_x, 2)


def orthogonal_g(space: Subspace) -> Subspace:
    """g-orthogonal complement inside Q^{2m}."""
    if space.ambient_dim % 2:
        raise GeometryError("ambient dimension must be even")
    m = space.ambient_dim // 2
    # v orthogonal to basis row b  iff  (J b) . v = 0 with J swapping halves
    eq_rows = [tuple(row[m:]) + tuple(row[:m]) for row in space.basis]
    if not eq_rows:
        return Subspace.full(space.ambient_dim)
    return kernel(Matrix(eq_rows))


def is_isotropic(space: Subspace) -> bool:
    if space.ambient_dim % 2:
        raise GeometryError("ambient dimension must be even")
    rows = space.basis
    return all(_pairing_row(r1, r2) == 0 for i, r1 in enumerate(rows) for r2 in rows[i:])


def tangent_projection(space: Subspace) -> Subspace:
    m = space.ambient_dim // 2
    return Subspace(m, [row[:m] for row in space.basis])


def cotangent_part(space: Subspace) -> Subspace:
    """Intersection with 0 (+) (Q^m)*, reported inside (Q^m)*."""
    m = space.ambient_dim // 2
    rows = []
    for row in space.intersect(_cotangent_summand(m)).basis:
        rows.append(row[m:])
    return Subspace(m, rows)


def _tangent_summand(m: int) -> Subspace:
    rows = [[Fraction(0)] * (2 * m) for _ in range(m)]
    for i in range(m):
        rows[i][i] = Fraction(1)
    return Subspace(2 * m, rows)


def _cotangent_summand(m: int) -> Subspace:
    rows = [[Fraction(0)] * (2 * m) for _ in range(m)]
    for i in range(m):
        rows[i][m + i] = Fraction(1)
    return Subspace(2 * m, rows)


@dataclass(frozen=True)
class IsotropicData:
    """An isotropic subspace E together with its g-orthogonal E'."""

    m: int
    E: Subspace
    E_prime: Subspace

    def __post_init__(self):
        if self.E.ambient_dim != 2 * self.m or self.E_prime.ambient_dim != 2 * self.m:
            raise GeometryError("ambient dimension must be 2m")
        if self.E.dim + self.E_prime.dim != 2 * self.m:
            raise GeometryError("dim E + dim E' must equal 2m")
        if not self.E_prime.contains_subspace(self.E):
            raise GeometryError("E must be contained in E' (non-isotropic input?)")
        for r1 in self.E.basis:
            for r2 in self.E_prime.basis:
                if _pairing_row(r1, r2) != 0:
                    raise GeometryError("g does not vanish on E x E'")

    @classmethod
    def from_E(cls, E: Subspace) -> "IsotropicData":
        return cls(E.ambient_dim // 2, E, orthogonal_g(E))

    @property
    def rank(self) -> int:
        return self.E.dim


@dataclass(frozen=True)
class CharacteristicTriple:
    """Tangent projections of (E, E') plus the induced bilinear map.

    ``varpi`` holds the values on the RREF bases of cal_E x cal_E_prime, so
    equal structures produce identical triples.
    """

    m: int
    cal_E: Subspace
    cal_E_prime: Subspace
    varpi: Matrix

    def __post_init__(self):
        if not self.cal_E_prime.contains_subspace(self.cal_E):
            raise GeometryError("cal_E must be contained in cal_E_prime")
        if self.varpi.rows != self.cal_E.dim or (
            self.varpi.rows > 0 and self.varpi.cols != self.cal_E_prime.dim
        ):
            raise GeometryError("varpi shape must be dim cal_E x dim cal_E_prime")
        # restriction to cal_E x cal_E must be skew-symmetric
        r = self.cal_E.dim
        if r:
            coeffs = _coordinates_in(self.cal_E_prime, self.cal_E.basis)
            restricted = self.varpi * Matrix(coeffs).transpose()
            for i in range(r):
                for j in range(r):
                    if restricted[i, j] + restricted[j, i] != 0:
                        raise GeometryError("varpi restricted to cal_E x cal_E is not skew")

    def varpi_on(self, x_vec, y_vec) -> Fraction:
        cx = _coordinates_in(self.cal_E, [tuple(x_vec)])[0]
        cy = _coordinates_in(self.cal_E_prime, [tuple(y_vec)])[0]
        total = Fraction(0)
        for i, a in enumerate(cx):
            for j, b in enumerate(cy):
                total += a * b * self.varpi[i, j]
        return total


def _coordinates_in(space: Subspace, vectors) -> list:
    """Coordinates of each vector in the RREF basis of ``space``."""
    out = []
    if space.dim == 0:
        for v in vectors:
            if any(x != 0 for x in v):
                raise GeometryError("vector not in subspace")
            out.append(())
        return out
    basis_t = Matrix(space.basis).transpose()
    for v in vectors:
        aug = Matrix([list(row) + [val] for row, val in zip(basis_t.entries, v)])
        red, pivots, rank = aug.rref()
        if any(p == space.dim for p in pivots):
            raise GeometryError("vector not in subspace")
        coords = [Fraction(0)] * space.dim
        for r_i, p in enumerate(pivots):
            coords[p] = red[r_i, space.dim]
        out.append(tuple(coords))
    return out


def characteristic_triple(data: IsotropicData) -> CharacteristicTriple:
    """Project E, E' to the tangent factor and materialize varpi.

    varpi(X, Y) is the contraction of any E-lift covector of X with Y; the
    result is checked against the E'-side formula (-beta(X)) for every basis
    pair, which certifies well-definedness.
    """
    m = data.m
    cal_E = tangent_projection(data.E)
    cal_Ep = tangent_projection(data.E_prime)
    lifts_E = [covector_lift(data.E, x) for x in cal_E.basis]
    lifts_Ep = [covector_lift(data.E_prime, y) for y in cal_Ep.basis]
    w = []
    for x_vec, alpha in zip(cal_E.basis, lifts_E):
        row = []
        for y_vec, beta in zip(cal_Ep.basis, lifts_Ep):
            a_y = sum(a * y for a, y in zip(alpha, y_vec))
            b_x = sum(b * x for b, x in zip(beta, x_vec))
            if a_y != -b_x:
                raise GeometryError("varpi is not well defined (input not isotropic?)")
            row.append(a_y)
        w.append(row)
    return CharacteristicTriple(m, cal_E, cal_Ep, Matrix(w) if w else Matrix.zeros(0, cal_Ep.dim))


def covector_lift(space: Subspace, x_vec) -> tuple:
    """A covector alpha with (x_vec, alpha) in space (deterministic choice)."""
    m = space.ambient_dim // 2
    basis = space.basis
    aug_rows = [list(row) + [val] for row, val in zip(Matrix(basis).transpose().entries[:m], x_vec)]
    red, pivots, rank = Matrix(aug_rows).rref()
    k = len(basis)
    if any(p == k for p in pivots):
        raise GeometryError("vector has no lift in the subspace")
    coeffs = [Fraction(0)] * k
    for r_i, p in enumerate(pivots):
        coeffs[p] = red[r_i, k]
    alpha = [Fraction(0)] * m
    for c, row in zip(coeffs, basis):
        for i in range(m):
            alpha[i] += c * row[m + i]
    return tuple(alpha)


def reconstruct(triple: CharacteristicTriple) -> IsotropicData:
    """Assemble the isotropic pair determined by a characteristic triple.

    E collects the pairs (X, alpha) with X in cal_E and alpha matching
    varpi(X, .) on cal_E_prime; E' collects (Y, beta) with beta matching
    -varpi(., Y) on cal_E.
    """
    m = triple.m
    r, rp = triple.cal_E.dim, triple.cal_E_prime.dim

    # E: unknowns (c_1..c_r, alpha_1..alpha_m); equations alpha(e'_j) = varpi_ij c_i
    eq_rows = []
    for j in range(rp):
        row = [-triple.varpi[i, j] for i in range(r)]
        row += list(triple.cal_E_prime.basis[j])
        eq_rows.append(row)
    sol = Matrix(eq_rows).kernel_rows() if eq_rows else Matrix.identity(r + m).entries
    e_rows = []
    for v in sol:
        x = [Fraction(0)] * m
        for c, b in zip(v[:r], triple.cal_E.basis):
            for i in range(m):
                x[i] += c * b[i]
        e_rows.append(tuple(x) + tuple(v[r:]))
    E = Subspace(2 * m, e_rows)

    eq_rows = []
    for i in range(r):
        row = [triple.varpi[i, j] for j in range(rp)]
        row += list(triple.cal_E.basis[i])
        eq_rows.append(row)
    sol = Matrix(eq_rows).kernel_rows() if eq_rows else Matrix.identity(rp + m).entries
    ep_rows = []
    for v in sol:
        y = [Fraction(0)] * m
        for c, b in zip(v[:rp], triple.cal_E_prime.basis):
            for i in range(m):
                y[i] += c * b[i]
        ep_rows.append(tuple(y) + tuple(v[rp:]))
    E_prime = Subspace(2 * m, ep_rows)
    return IsotropicData(m, E, E_prime)


def dirac_extension(data: IsotropicData) -> Subspace:
    """The canonical almost-Dirac space E + ann(cal_E), of dimension m."""
    m = data.m
    ann = tangent_projection(data.E).annihilator()
    ann_rows = [tuple([Fraction(0)] * m) + tuple(w) for w in ann.basis]
    result = data.E.sum(Subspace(2 * m, ann_rows))
    return result


def flat_varpi_kernel(data: IsotropicData) -> Subspace:
    """Kernel of X -> varpi(X, .), which is the tangent part of E n (TM (+) 0)."""
    m = data.m
    inter = data.E.intersect(_tangent_summand(m))
    return Subspace(m, [row[:m] for row in inter.basis])


def is_graph_type(data: IsotropicData) -> bool:
    """True when E meets the tangent summand only in 0."""
    return flat_varpi_kernel(data).dim == 0


def random_subspace(rng, d: int, dim_hint: int | None = None, span: int = 3) -> Subspace:
    rows = dim_hint if dim_hint is not None else rng.randint(0, d)
    return Subspace(d, [[Fraction(rng.randint(-span, span)) for _ in range(d)] for _ in range(rows)])


def random_isotropic(rng, m: int) -> IsotropicData:
    """Sample an isotropic pair by building a random characteristic triple."""
    cal_Ep = random_subspace(rng, m)
    # random subspace of cal_Ep
    rp = cal_Ep.dim
    n_mix = rng.randint(0, rp)
    mix_rows = []
    for _ in range(n_mix):
        coeffs = [Fraction(rng.randint(-2, 2)) for _ in range(rp)]
        vec = [Fraction(0)] * m
        for c, b in zip(coeffs, cal_Ep.basis):
            for i in range(m):
                vec[i] += c * b[i]
        mix_rows.append(vec)
    cal_E = Subspace(m, mix_rows)
    r = cal_E.dim

    # varpi: skew part on cal_E x cal_E, free on a complement of cal_E in cal_Ep
    skew = [[Fraction(0)] * r for _ in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            c = Fraction(rng.randint(-3, 3))
            skew[i][j], skew[j][i] = c, -c
    comp = complement_in(cal_E, cal_Ep)
    free = [[Fraction(rng.randint(-3, 3)) for _ in range(comp.dim)] for _ in range(r)]
    # express varpi in the RREF basis of cal_Ep: columns = coordinates of that
    # basis in terms of (cal_E basis, complement basis)
    mixed_basis = list(cal_E.basis) + list(comp.basis)
    w = []
    if r:
        coords = _solve_coordinates(mixed_basis, list(cal_Ep.basis))
        for i in range(r):
            row = []
            for j in range(rp):
                val = Fraction(0)
                for t in range(r):
                    val += coords[j][t] * skew[i][t]
                for t in range(comp.dim):
                    val += coords[j][r + t] * free[i][t]
                row.append(val)
            w.append(row)
    varpi = Matrix(w) if w else Matrix.zeros(0, rp)
    return reconstruct(CharacteristicTriple(m, cal_E, cal_Ep, varpi))


def _solve_coordinates(basis_rows, vectors):
    """Coordinates of each vector in the given (not necessarily RREF) basis."""
    k = len(basis_rows)
    out = []
    basis_t = Matrix(basis_rows).transpose() if k else None
    for v in vectors:
        if k == 0:
            out.append(())
            continue
        aug = Matrix([list(row) + [val] for row, val in zip(basis_t.entries, v)])
        red, pivots, rank = aug.rref()
        if any(p == k for p in pivots):
            raise GeometryError("vector not in span")
        coords = [Fraction(0)] * k
        for r_i, p in enumerate(pivots):
            coords[p] = red[r_i, k]
        out.append(tuple(coords))
    return out
