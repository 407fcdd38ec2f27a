"""Restriction to a submanifold, projectability along a foliation, and the
reduced structure on the local leaf space.

Submanifolds are affine-linear in the ambient chart and foliations are by
fibres of a coordinate projection, which matches the chart-adapted setting
of the canonical-frame machinery.  The reduced structure is certified, not
merely constructed: pointwise pullbacks/pushforwards over a sample grid are
compared against the symbolic frames at every step.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .calculus import (
    BigSection,
    Chart,
    PolyBivector,
    PolyOneForm,
    PolyTwoForm,
    PolyVectorField,
    flat,
    lie_bracket,
    lie_derivative_oneform,
    sharp,
)
from .linalg import Matrix, Subspace
from .membership import in_span
from .scalars import Polynomial, as_fraction
from .structures import BigIsotropicStructure, Verdict, default_grid
from .transport import LinearMap, pullback_subspace, pushforward_subspace, space_S


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class SubmanifoldData:
    """An affine-linear embedded submanifold of the ambient chart."""

    ambient: Chart
    sub: Chart
    offset: tuple
    differential: LinearMap

    def __post_init__(self):
        if self.differential.m != self.ambient.dim or self.differential.n != self.sub.dim:
            raise ReductionError("differential shape does not match the charts")
        if not self.differential.is_injective():
            raise ReductionError("embedding differential must be injective")
        object.__setattr__(self, "offset", tuple(as_fraction(c) for c in self.offset))

    @classmethod
    def identity(cls, chart: Chart) -> "SubmanifoldData":
        return cls(chart, chart, (Fraction(0),) * chart.dim, LinearMap.identity(chart.dim))

    @classmethod
    def from_equations(cls, ambient: Chart, equations: Sequence[Polynomial]) -> "SubmanifoldData":
        """Solve affine equations p(x) = 0 for the submanifold they carve out.

        Coordinate-aligned solution spaces keep the surviving ambient
        coordinate names; otherwise parameter names u1..un are synthesized.
        """
        m = ambient.dim
        rows, rhs = [], []
        for p in equations:
            if p.total_degree() > 1:
                raise ReductionError(f"equation is not affine: {p}")
            row = [Fraction(0)] * m
            const = Fraction(0)
            for exps, coeff in p.terms.items():
                if sum(exps) == 0:
                    const = coeff
                else:
                    row[exps.index(1)] = coeff
            rows.append(row)
            rhs.append(-const)
        if not rows:
            return cls.identity(ambient)
        aug = Matrix([r + [b] for r, b in zip(rows, rhs)])
        red, pivots, rank = aug.rref()
        if any(p == m for p in pivots):
            raise ReductionError("equations are inconsistent")
        offset = [Fraction(0)] * m
        for r_i, p_i in enumerate(pivots):
            offset[p_i] = red[r_i, m]
        basis = Matrix(rows).kernel_rows()
        n = len(basis)
        if n == 0:
            raise ReductionError("submanifold is a single point")
        aligned_names = _aligned_names(ambient, basis)
        sub = Chart(aligned_names if aligned_names else tuple(f"u{i + 1}" for i in range(n)))
        differential = LinearMap.from_rows([[basis[j][i] for j in range(n)] for i in range(m)])
        return cls(ambient, sub, tuple(offset), differential)

    def embed_point(self, u) -> tuple:
        x = list(self.offset)
        push = self.differential.push(tuple(as_fraction(c) for c in u))
        return tuple(a + b for a, b in zip(x, push))

    def normal_equations(self) -> Matrix:
        """Rows annihilating the image of the differential (ann TN)."""
        rows = self.differential.matrix.transpose().kernel_rows()
        return Matrix(rows) if rows else Matrix(())


def _aligned_names(ambient: Chart, basis) -> tuple | None:
    names = []
    for vec in basis:
        hot = [i for i, c in enumerate(vec) if c != 0]
        if len(hot) != 1 or vec[hot[0]] != 1:
            return None
        names.append(ambient.names[hot[0]])
    return tuple(names)


@dataclass(frozen=True)
class FoliationData:
    """A foliation of a chart by fibres of a coordinate projection."""

    chart: Chart
    fibre: tuple

    def __post_init__(self):
        fibre = tuple(sorted(self.fibre))
        object.__setattr__(self, "fibre", fibre)
        if any(i < 0 or i >= self.chart.dim for i in fibre) or len(set(fibre)) != len(fibre):
            raise ReductionError("fibre indices must be distinct chart indices")

    @property
    def base(self) -> tuple:
        return tuple(i for i in range(self.chart.dim) if i not in self.fibre)

    def quotient_chart(self) -> Chart:
        return Chart(tuple(self.chart.names[i] for i in self.base))

    def projection(self) -> LinearMap:
        rows = [[1 if j == i else 0 for j in range(self.chart.dim)] for i in self.base]
        return LinearMap.from_rows(rows)

    def fibre_fields(self) -> list:
        return [PolyVectorField.coordinate(self.chart, i) for i in self.fibre]

    def tangent_space(self) -> Subspace:
        m = self.chart.dim
        return Subspace(m, [[1 if j == i else 0 for j in range(m)] for i in self.fibre])


@dataclass(frozen=True)
class RestrictedData:
    """Pointwise pullbacks of (E, E') over a sample grid of the submanifold."""

    submanifold: SubmanifoldData
    points: tuple
    pulled_E: tuple
    pulled_E_prime: tuple
    dim_window: int
    dim_window_prime: int

    @property
    def rank(self) -> int:
        return self.pulled_E[0].dim if self.pulled_E else 0


def restrict(s: BigIsotropicStructure, N: SubmanifoldData, grid=None) -> RestrictedData:
    """Pull the structure back to the submanifold at every grid point.

    The window dimensions (E against TN (+) ambient covectors, and the same
    for E') must stay constant across the grid: that is the properness
    certificate, and a jump reports the two offending points.
    """
    if N.ambient != s.chart:
        raise ReductionError("submanifold lives in a different chart")
    pts = grid if grid is not None else default_grid(N.sub.dim, cap=16)
    incl = N.differential
    pulled, pulled_prime = [], []
    window_dims, window_prime_dims = {}, {}
    for u in pts:
        data = s.evaluate_at(N.embed_point(u))
        pulled.append(pullback_subspace(incl, data.E))
        pulled_prime.append(pullback_subspace(incl, data.E_prime))
        window_dims.setdefault(space_S(incl, data.E).dim, u)
        window_prime_dims.setdefault(space_S(incl, data.E_prime).dim, u)
    for dims, label in ((window_dims, "E"), (window_prime_dims, "E'")):
        if len(dims) > 1:
            (d1, u1), (d2, u2) = list(dims.items())[:2]
            raise ReductionError(
                f"properness fails for {label}: window dimension {d1} at {u1} but {d2} at {u2}"
            )
    ranks = {sp.dim for sp in pulled}
    if len(ranks) > 1:
        raise ReductionError(f"pullback dimension jumps across the grid: {sorted(ranks)}")
    return RestrictedData(
        N,
        tuple(pts),
        tuple(pulled),
        tuple(pulled_prime),
        next(iter(window_dims)),
        next(iter(window_prime_dims)),
    )


def verify_restricted_frame(restricted: RestrictedData, frame: Sequence[BigSection]) -> Verdict:
    """A caller-supplied polynomial frame matches the pointwise pullbacks."""
    n = restricted.submanifold.sub.dim
    failures = []
    for u, expected in zip(restricted.points, restricted.pulled_E):
        rows = [sec.eval(u) for sec in frame]
        got = Subspace(2 * n, rows)
        if got != expected:
            failures.append((f"restricted frame span differs at {u}", None))
    return Verdict("restricted frame verification", not failures, tuple(failures))


def check_reducibility(
    s: BigIsotropicStructure,
    N: SubmanifoldData,
    F: FoliationData,
    restricted: RestrictedData | None = None,
) -> Verdict:
    """Leaf tangents must lift into E with conormal covectors.

    Checked two ways at every grid point: the fibre directions sit inside the
    pulled-back structure, and equivalently the ambient pairs over ann TN
    project onto the fibre tangents.
    """
    if F.chart != N.sub:
        raise ReductionError("foliation must live on the submanifold chart")
    restricted = restricted if restricted is not None else restrict(s, N)
    n = N.sub.dim
    m = N.ambient.dim
    failures = []
    ann_tn = N.normal_equations()
    fibre_amb = [N.differential.push([1 if j == i else 0 for j in range(n)]) for i in F.fibre]
    for u, pulled in zip(restricted.points, restricted.pulled_E):
        for i in F.fibre:
            vec = [Fraction(0)] * (2 * n)
            vec[i] = Fraction(1)
            if not pulled.contains(vec):
                failures.append((f"fibre direction {N.sub.names[i]} not in the pullback at {u}", None))
        # ambient-side formulation
        data = s.evaluate_at(N.embed_point(u))
        window_rows = [tuple(v) + (Fraction(0),) * m for v in fibre_amb]
        window_rows += [(Fraction(0),) * m + tuple(w) for w in ann_tn.entries]
        window = Subspace(2 * m, window_rows)
        inter = data.E.intersect(window)
        projected = Subspace(m, [row[:m] for row in inter.basis])
        target = Subspace(m, fibre_amb)
        if not projected.contains_subspace(target):
            failures.append((f"ambient lift of the fibre tangents fails at {u}", None))
    return Verdict("reducibility condition", not failures, tuple(failures))


def check_projectable(s: BigIsotropicStructure, F: FoliationData) -> Verdict:
    """Foliation tangents inside E, and fibre flows preserving the frame.

    Condition (a) is the membership of every fibre field; condition (b') is
    the membership of every fibre Lie derivative of every frame section.  For
    integrable structures (a) alone is equivalent, which tests assert.
    """
    if F.chart != s.chart:
        raise ReductionError("foliation must live on the structure chart")
    rows = s.frame_rows()
    failures = []
    zero_of = PolyOneForm.zero(s.chart)
    for Y in F.fibre_fields():
        ok, witness = in_span(rows, BigSection(Y, zero_of).as_poly_row())
        if not ok:
            failures.append(("condition a: fibre field not in E", witness))
    for Y in F.fibre_fields():
        for i, sec in enumerate(s.e_frame):
            moved = BigSection(lie_bracket(Y, sec.vf), lie_derivative_oneform(Y, sec.of))
            ok, witness = in_span(rows, moved.as_poly_row())
            if not ok:
                failures.append((f"condition b': fibre flow moves frame section {i} out of E", witness))
    return Verdict("projectability", not failures, tuple(failures))


def _restricted_frame_heuristic(s: BigIsotropicStructure, N: SubmanifoldData, prime: bool = False):
    """Restrict ambient frame sections whose tangents stay inside TN.

    The coefficients are composed with the embedding; a section survives iff
    its tangent part symbolically annihilates the conormal equations.
    """
    amb_frame = s.e_prime_frame if prime else s.e_frame
    n, m = N.sub.dim, N.ambient.dim
    # ambient coordinate i as a polynomial on the sub chart
    images = []
    for i in range(m):
        p = N.sub.constant(N.offset[i])
        for j in range(n):
            p = p + N.sub.coordinate(j) * N.differential.matrix[i, j]
        images.append(p)
    ann = N.normal_equations()
    # left inverse of the differential for solving J X = v
    jt = N.differential.matrix.transpose()
    gram_inv = (jt * N.differential.matrix).inverse()
    sections = []
    for sec in amb_frame:
        v = [c.substitute(images) for c in sec.vf.comps]
        w = [c.substitute(images) for c in sec.of.comps]
        in_tn = True
        for eq in ann.entries:
            acc = N.sub.zero()
            for coeff, comp in zip(eq, v):
                acc = acc + comp * coeff
            if not acc.is_zero():
                in_tn = False
                break
        if not in_tn:
            continue
        pre = [sum((jt[i, j] * v[j] for j in range(m)), N.sub.zero()) for i in range(n)]
        x = [sum((gram_inv[i, j] * pre[j] for j in range(n)), N.sub.zero()) for i in range(n)]
        xi = [sum((jt[i, j] * w[j] for j in range(m)), N.sub.zero()) for i in range(n)]
        sections.append(BigSection(PolyVectorField(N.sub, x), PolyOneForm(N.sub, xi)))
    return sections


def _projectable_form(frame: Sequence[BigSection], F: FoliationData):
    """Rewrite a frame as fibre fields plus fibre-independent sections.

    Subtracting fibre fields clears the fibre-tangent components; the
    leftover sections must then have no fibre covector components and only
    base-coordinate coefficients, otherwise there is no verified projectable
    frame and the caller must supply one.
    """
    chart = F.chart
    fibre_set = set(F.fibre)
    survivors = []
    for sec in frame:
        v = list(sec.vf.comps)
        for i in F.fibre:
            v[i] = chart.zero()
        trimmed = BigSection(PolyVectorField(chart, v), sec.of)
        if trimmed.is_zero():
            continue
        survivors.append(trimmed)
    base_only = {i: Fraction(0) for i in F.fibre}
    for sec in survivors:
        for comp in sec.vf.comps + sec.of.comps:
            if comp != comp.set_vars(base_only):
                raise ReductionError(
                    "no verified projectable frame: a coefficient depends on a fibre coordinate"
                )
        for i in F.fibre:
            if not sec.of.comps[i].is_zero():
                raise ReductionError(
                    "no verified projectable frame: a covector keeps a fibre component"
                )
    return survivors


def _push_section(sec: BigSection, F: FoliationData) -> BigSection:
    quotient = F.quotient_chart()
    images = {new_i: old_i for new_i, old_i in enumerate(F.base)}

    def project(p: Polynomial) -> Polynomial:
        terms = {}
        for exps, coeff in p.terms.items():
            new = [0] * quotient.dim
            for new_i, old_i in images.items():
                new[new_i] = exps[old_i]
            terms[tuple(new)] = coeff
        return Polynomial(quotient.names, terms)

    v = [project(sec.vf.comps[i]) for i in F.base]
    w = [project(sec.of.comps[i]) for i in F.base]
    return BigSection(PolyVectorField(quotient, v), PolyOneForm(quotient, w))


@dataclass(frozen=True)
class ReductionResult:
    quotient: BigIsotropicStructure
    restricted: RestrictedData
    reducibility: Verdict
    projectability: Verdict
    poisson_condition: bool  # reduced structure meets TQ only in zero


def reduce_structure(
    s: BigIsotropicStructure,
    N: SubmanifoldData,
    F: FoliationData,
    restricted_frame: Sequence[BigSection] | None = None,
    restricted_prime_frame: Sequence[BigSection] | None = None,
    grid=None,
) -> ReductionResult:
    """Full pipeline: restrict, check reducibility/projectability, quotient.

    The restricted frames are taken from the caller when given, otherwise
    recovered by restricting ambient frame sections; either way they are
    verified against the pointwise pullbacks before any quotient is built.
    """
    restricted = restrict(s, N, grid=grid)
    red_verdict = check_reducibility(s, N, F, restricted)
    if not red_verdict.ok:
        raise ReductionError(red_verdict.describe())

    frame = list(restricted_frame) if restricted_frame else _restricted_frame_heuristic(s, N)
    frame_verdict = verify_restricted_frame(restricted, frame)
    if not frame_verdict.ok or len(frame) != restricted.rank:
        raise ReductionError(
            "no verified projectable frame for the restriction; supply one "
            f"({len(frame)} candidate sections for rank {restricted.rank})"
        )
    prime = (
        list(restricted_prime_frame)
        if restricted_prime_frame
        else _restricted_frame_heuristic(s, N, prime=True)
    )
    prime_expected = 2 * N.sub.dim - restricted.rank
    prime_ok = len(prime) == prime_expected and all(
        Subspace(2 * N.sub.dim, [sec.eval(u) for sec in prime]) == expected
        for u, expected in zip(restricted.points, restricted.pulled_E_prime)
    )
    if not prime_ok:
        raise ReductionError("no verified frame for the restricted orthogonal bundle; supply one")

    on_n = BigIsotropicStructure.build(N.sub, frame, prime, grid=restricted.points)
    proj_verdict = check_projectable(on_n, F)
    if not proj_verdict.ok:
        raise ReductionError(proj_verdict.describe())

    reduced_frame = [_push_section(sec, F) for sec in _projectable_form(frame, F)]
    reduced_prime = [_push_section(sec, F) for sec in _projectable_form(prime, F)]
    quotient_chart = F.quotient_chart()
    q = quotient_chart.dim
    base_grid = sorted({tuple(u[i] for i in F.base) for u in restricted.points})
    quotient = BigIsotropicStructure.build(quotient_chart, reduced_frame, reduced_prime, grid=base_grid)

    # round trips: the quotient pulls back to the restriction and the
    # restriction pushes forward to the quotient, at every grid point
    proj = F.projection()
    for u, pulled in zip(restricted.points, restricted.pulled_E):
        base_pt = tuple(u[i] for i in F.base)
        delta = quotient.evaluate_at(base_pt).E
        if pullback_subspace(proj, delta) != pulled:
            raise ReductionError(f"quotient does not pull back to the restriction at {u}")
        if pushforward_subspace(proj, pulled) != delta:
            raise ReductionError(f"restriction does not push forward to the quotient at {u}")

    poisson = all(
        quotient.evaluate_at(pt).E.intersect(
            Subspace(2 * q, [[1 if j == i else 0 for j in range(2 * q)] for i in range(q)])
        ).dim
        == 0
        for pt in base_grid
    )
    return ReductionResult(quotient, restricted, red_verdict, proj_verdict, poisson)


# --------------------------------------------------------------------------
# foliated almost-Dirac constructors
# --------------------------------------------------------------------------

def dirac_along_foliation_P(F: FoliationData, P: PolyBivector, grid=None) -> BigIsotropicStructure:
    """Fibre tangents plus the bivector graph over the conormal covectors."""
    chart = F.chart
    zero_of = PolyOneForm.zero(chart)
    frame = [BigSection(Y, zero_of) for Y in F.fibre_fields()]
    for u in F.base:
        du = PolyOneForm.coordinate(chart, u)
        frame.append(BigSection(sharp(P, du), du))
    return BigIsotropicStructure.build(chart, frame, frame, grid=grid)


def bivector_is_projectable(F: FoliationData, P: PolyBivector) -> bool:
    """Transverse components must not vary along the fibres."""
    for u, v in itertools.combinations(F.base, 2):
        comp = P.component(u, v)
        for a in F.fibre:
            if not comp.derivative(a).is_zero():
                return False
    return True


def dirac_along_foliation_omega(
    F: FoliationData,
    omega: PolyTwoForm,
    normal_twist=None,
    grid=None,
) -> BigIsotropicStructure:
    """Fibre tangents plus the graph of a 2-form on a chosen normal bundle.

    ``normal_twist[(u, a)]`` tilts the normal field of base index u by the
    fibre direction a; the span is independent of the tilt when the form is
    foliated, which tests check by comparing two choices pointwise.
    """
    chart = F.chart
    zero_of = PolyOneForm.zero(chart)
    twist = normal_twist or {}
    frame = [BigSection(Y, zero_of) for Y in F.fibre_fields()]
    for u in F.base:
        Y = PolyVectorField.coordinate(chart, u)
        for a in F.fibre:
            t = twist.get((u, a))
            if t is not None:
                Y = Y + PolyVectorField.coordinate(chart, a).scale(t)
        frame.append(BigSection(Y, flat(omega, Y)))
    return BigIsotropicStructure.build(chart, frame, frame, grid=grid)


def twoform_is_foliated(F: FoliationData, omega: PolyTwoForm) -> bool:
    """Only base-base components, with base-only coefficients."""
    fibre_set = set(F.fibre)
    for (i, j), comp in omega.table.items():
        if i in fibre_set or j in fibre_set:
            if not comp.is_zero():
                return False
        for a in F.fibre:
            if not comp.derivative(a).is_zero():
                return False
    return True
