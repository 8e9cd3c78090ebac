"""Machine checks of the cusp-link framing computation and the multiple-point
geometry of the Morin normal forms.

Everything is exact rational arithmetic over :mod:`cuspcob.poly`.  The
transcribed formulas live in :class:`Appendix1Data` so a test can corrupt a
single entry and watch the corresponding check fail.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .poly import (
    MultiPoly,
    PolyMap,
    PolyMatrix,
    UniPoly,
    count_real_roots,
    is_even_monomial_sum,
    is_real_rooted,
    isolate_real_roots,
    rank,
    real_root_multiplicities,
    ring,
)

__all__ = [
    "Check",
    "Report",
    "VerificationFailed",
    "Appendix1Data",
    "printed_appendix1",
    "morin_normal_form",
    "jacobian",
    "verify_appendix1",
    "elementary_symmetric_map",
    "printed_jacobi_matrix",
    "verify_vandermonde_jacobian",
    "orthant_map",
    "OrthantPoint",
    "is_real_rooted",
    "multiple_point_check",
    "stratum_rank_check",
    "verify_appendix2",
    "reduce_mod_circle",
]

SYMBOLIC_VANDERMONDE_LIMIT = 6


class VerificationFailed(AssertionError):
    def __init__(self, check: "Check"):
        super().__init__(f"{check.name}: {check.detail}" + (f"\n  residual: {check.residual}" if check.residual else ""))
        self.check = check


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""
    residual: str | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "status": "pass" if self.passed else "fail", "detail": self.detail}
        if self.residual is not None:
            out["residual"] = self.residual
        return out


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def raise_on_failure(self) -> None:
        bad = self.failures()
        if bad:
            raise VerificationFailed(bad[0])

    def to_json(self) -> dict:
        return {
            "schema": "1",
            "title": self.title,
            "params": dict(self.params),
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }

    def render(self) -> str:
        width = max((len(c.name) for c in self.checks), default=0)
        lines = [self.title]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"  {status}  {c.name.ljust(width)}  {c.detail}".rstrip())
            if c.residual is not None:
                lines.append(f"        residual: {c.residual}")
        n_ok = sum(c.passed for c in self.checks)
        lines.append(f"{n_ok}/{len(self.checks)} checks passed")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# small helpers


def _zero_check(name: str, residuals: Sequence[MultiPoly], detail: str) -> Check:
    bad = [(k, p) for k, p in enumerate(residuals) if not p.is_zero]
    if not bad:
        return Check(name, True, detail)
    k, p = bad[0]
    return Check(name, False, f"{detail}; entry {k} does not vanish", str(p))


def _equal_check(name: str, got: Sequence[MultiPoly], want: Sequence[MultiPoly], detail: str) -> Check:
    if len(got) != len(want):
        return Check(name, False, f"{detail}; length {len(got)} vs {len(want)}")
    return _zero_check(name, [g - w for g, w in zip(got, want)], detail)


def _flatten(m: PolyMatrix) -> list[MultiPoly]:
    return [x for row in m.rows for x in row]


def _dot(a: Sequence[MultiPoly], b: Sequence[MultiPoly]) -> MultiPoly:
    total = MultiPoly.zero(a[0].variables)
    for x, y in zip(a, b):
        total = total + x * y
    return total


def _coefficient_in(p: MultiPoly, var: str, k: int) -> MultiPoly:
    """Coefficient of ``var**k`` in ``p``, still written over p's variables."""
    i = p.variables.index(var)
    out = {}
    for e, c in p.terms.items():
        if e[i] == k:
            f = list(e)
            f[i] = 0
            out[tuple(f)] = c
    return MultiPoly(p.variables, out)


def _limit_direction(vec: Sequence[MultiPoly], var: str) -> tuple[int, list[MultiPoly]]:
    """Leading order ``k`` and leading coefficient vector of ``vec`` as ``var → 0⁺``."""
    top = max(p.degree(var) for p in vec)
    for k in range(top + 1):
        coeffs = [_coefficient_in(p, var, k) for p in vec]
        if any(not c.is_zero for c in coeffs):
            return k, coeffs
    raise ValueError("zero vector has no limiting direction")


def _positive_multiple(vec: Sequence[MultiPoly], ref: Sequence[MultiPoly]) -> Fraction | None:
    """The constant ``c > 0`` with ``vec = c·ref``, or None."""
    pivot = next((k for k, p in enumerate(ref) if not p.is_zero), None)
    if pivot is None:
        return None
    e, c_ref = ref[pivot].leading_term()
    c = vec[pivot].terms.get(e, Fraction(0)) / c_ref
    if c <= 0:
        return None
    if all((v - r * c).is_zero for v, r in zip(vec, ref)):
        return c
    return None


def reduce_mod_circle(p: MultiPoly, t: str = "t2", x: str = "x") -> MultiPoly:
    """Normal form modulo ``t² + x² − 1``: every ``t²`` is replaced by ``1 − x²``."""
    i = p.variables.index(t)
    one_minus = MultiPoly.const(1, p.variables) - MultiPoly.var(x, p.variables) ** 2
    out = MultiPoly.zero(p.variables)
    for e, c in p.terms.items():
        q, r = divmod(e[i], 2)
        f = list(e)
        f[i] = r
        out = out + MultiPoly(p.variables, {tuple(f): c}) * one_minus**q
    return out


# ---------------------------------------------------------------------------
# normal forms


def morin_normal_form(r: int) -> PolyMap:
    """σ_r : (t₁..t_{2r−1}, x) ↦ (t₁..t_{2r−1}, z₁, z₂)."""
    if r < 1:
        raise ValueError("r must be at least 1")
    names = tuple(f"t{k}" for k in range(1, 2 * r)) + ("x",)
    gens = ring(*names)
    t, x = gens[:-1], gens[-1]
    z1 = sum((t[k - 1] * x**k for k in range(1, r + 1)), MultiPoly.zero(names))
    z2 = sum((t[r + m - 1] * x**m for m in range(1, r)), MultiPoly.zero(names)) + x ** (r + 1)
    return PolyMap(names, list(t) + [z1, z2])


def jacobian(m: PolyMap) -> PolyMatrix:
    return m.jacobian()


# ---------------------------------------------------------------------------
# the cusp: transcribed formulas

V4 = ("t1", "t2", "t3", "x")
VE = ("t2", "x", "e")  # e stands for ε
VD = ("t2", "x", "d")  # d stands for δ
VC = ("t2", "x")


@dataclass(frozen=True)
class Appendix1Data:
    dsigma2: PolyMatrix
    normal: tuple[MultiPoly, ...]
    singular_set: tuple[MultiPoly, ...]
    singular_image: tuple[MultiPoly, ...]
    curve: tuple[MultiPoly, ...]
    q_delta: tuple[MultiPoly, ...]
    v1: tuple[MultiPoly, ...]
    normal_odd: tuple[MultiPoly, ...]
    normal_even: tuple[MultiPoly, ...]
    normal_sum: tuple[MultiPoly, ...]
    normal_diff: tuple[MultiPoly, ...]
    v2: tuple[MultiPoly, ...]
    v3: tuple[MultiPoly, ...]
    inclusion: tuple[MultiPoly, ...]
    F: tuple[MultiPoly, ...]
    frame: tuple[tuple[MultiPoly, ...], ...]
    M: PolyMatrix
    det_m: MultiPoly
    sos_squares: tuple[tuple[Fraction, MultiPoly], ...]
    sos_rest: MultiPoly


def printed_appendix1() -> Appendix1Data:
    t1, t2, t3, x = ring(*V4)
    dsigma2 = PolyMatrix(
        [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [x, x**2, 0, t1 + 2 * x * t2],
            [0, 0, x, t3 + 3 * x**2],
        ],
        V4,
    )
    normal = (
        -x * (t3 + 3 * x**2),
        -(x**2) * (t3 + 3 * x**2),
        x * (t1 + 2 * x * t2),
        t3 + 3 * x**2,
        -(t1 + 2 * x * t2),
    )

    s2, sx = ring(*VC)
    singular_set = (-2 * sx * s2, s2, -3 * sx**2, sx)
    singular_image = (-2 * sx * s2, s2, -3 * sx**2, -s2 * sx**2, -2 * sx**3)

    u2, ux, e = ring(*VE)
    curve = (-2 * ux * u2, u2, -3 * ux**2 - e**2, ux + e)
    odd = (
        -6 * ux**2 - 2 * e**2,
        -6 * ux**3 - 10 * ux * e**2,
        2 * ux * u2,
        6 * ux,
        -2 * u2,
    )
    even = (-8 * ux, -14 * ux**2 - 2 * e**2, 2 * u2, MultiPoly.const(2, VE), MultiPoly.zero(VE))
    normal_sum = tuple(2 * e**2 * b for b in even)
    normal_diff = tuple(2 * e * a for a in odd)

    w2, wx, d = ring(*VD)
    q_delta = (-2 * wx * w2, w2, -3 * wx**2 - d, -w2 * (wx**2 - d), -2 * wx**3 + 2 * d * wx)

    v1 = (MultiPoly.zero(VC), MultiPoly.zero(VC), MultiPoly.const(-1, VC), s2, 2 * sx)
    v2 = (-3 * sx**2, -3 * sx**3, sx * s2, 3 * sx, -s2)
    v3 = (-4 * sx, -7 * sx**2, s2, MultiPoly.const(1, VC), MultiPoly.zero(VC))

    F = (-2 * sx * s2, s2, -3 * sx**2, -s2 * sx**2, 2 * sx * (s2**2 - 1))
    frame = (
        v1,
        (3 - 3 * s2**2 - 6 * sx**2, -3 * sx**3, sx * s2, 3 * sx, -s2),
        v3,
    )
    M = PolyMatrix(
        [
            [-2 * sx, 1, 0, -(sx**2), 4 * sx * s2],
            [s2, 0, 3 * sx, sx * s2, 1 - s2**2],
            [0, 0, -1, s2, 2 * sx],
            [3 - 3 * s2**2 - 6 * sx**2, -3 * sx**3, sx * s2, 3 * sx, -s2],
            [-4 * sx, -7 * sx**2, s2, 1, 0],
        ],
        VC,
    )
    det_m = (
        180 * sx**8 + 568 * sx**6 * s2**2 + 323 * sx**4 * s2**4 + 120 * sx**6
        - 197 * sx**4 * s2**2 + 8 * sx**2 * s2**4 + 3 * s2**6
        + 51 * sx**4 - 12 * sx**2 * s2**2 - 2 * s2**4 + 24 * sx**2 - 2 * s2**2 + 3
    )
    squares = (
        (Fraction(50), 2 * sx**2 * s2**2 - sx**2),
        (Fraction(6), sx * s2**2 - sx),
        (Fraction(2), s2**3 - s2),
        (Fraction(2), s2**2 - 1),
    )
    rest = (
        180 * sx**8 + 568 * sx**6 * s2**2 + 123 * sx**4 * s2**4 + 120 * sx**6
        + 3 * sx**4 * s2**2 + 2 * sx**2 * s2**4 + s2**6 + sx**4 + 18 * sx**2 + 1
    )
    return Appendix1Data(
        dsigma2=dsigma2,
        normal=normal,
        singular_set=singular_set,
        singular_image=singular_image,
        curve=curve,
        q_delta=q_delta,
        v1=v1,
        normal_odd=odd,
        normal_even=even,
        normal_sum=normal_sum,
        normal_diff=normal_diff,
        v2=v2,
        v3=v3,
        inclusion=singular_set,
        F=F,
        frame=frame,
        M=M,
        det_m=det_m,
        sos_squares=squares,
        sos_rest=rest,
    )


def _on(polys: Sequence[MultiPoly], point: Sequence[MultiPoly], variables: Sequence[str]) -> list[MultiPoly]:
    """Compose polynomials over V4 with a parametrized point of R⁴."""
    mapping = dict(zip(V4, point))
    return [p.subs(mapping, variables) for p in polys]


def injectivity_sample(F: Sequence[MultiPoly], steps: int = 60) -> tuple[int, int]:
    """Evaluate F on the rational grid (i/steps, j/steps) inside the unit disk.

    Returns ``(points, distinct images)``; a sanity check, not a proof.
    """
    seen = set()
    count = 0
    # F only involves a handful of monomials; precompute them per grid value
    for i in range(-steps, steps + 1):
        t2 = Fraction(i, steps)
        for j in range(-steps, steps + 1):
            x = Fraction(j, steps)
            if t2 * t2 + x * x > 1:
                continue
            count += 1
            seen.add(tuple(p.evaluate((t2, x)) for p in F))
    return count, len(seen)


def verify_appendix1(data: Appendix1Data | None = None, *, sample_steps: int = 60, strict: bool = False) -> Report:
    """Recompute every identity of the cusp-link computation from σ₂ itself."""
    data = data or printed_appendix1()
    report = Report("cusp link framing (r = 2)", params={"sample_steps": sample_steps})
    add = report.checks.append

    sigma2 = morin_normal_form(2)
    d_sigma = jacobian(sigma2)
    add(_equal_check("dsigma2-matrix", _flatten(d_sigma), _flatten(data.dsigma2), "jacobian of σ₂ equals the printed dσ₂"))

    cols = [d_sigma.column(j) for j in range(4)]
    add(_zero_check("normal-orthogonality", [_dot(data.normal, c) for c in cols], "n(p)·(column j of dσ₂) ≡ 0 for j = 1..4"))

    # Σ is where the last column of dσ₂ vanishes
    last = d_sigma.column(3)[3:]
    add(_zero_check("singular-set", _on(last, data.singular_set, VC), "t₁+2xt₂ and t₃+3x² vanish on Σ"))
    add(_zero_check(
        "normal-vanishes-on-singular-set",
        _on(data.normal, data.singular_set, VC),
        "all 5 coordinates of n(p) vanish on Σ; off Σ the last two are not both 0",
    ))
    add(_equal_check("singular-image", _on(sigma2.coords, data.singular_set, VC), data.singular_image, "σ₂(Σ) = Σ̃"))

    e = MultiPoly.var("e", VE)
    minus = {"e": -e}
    curve = list(data.curve)
    curve_neg = [c.subs(minus) for c in curve]
    base = [c.subs({"e": 0}) for c in curve]
    tangent = [c.diff("e").subs({"e": 0}) for c in curve]
    singular_lift = [p.extend(VE) for p in data.singular_set]
    on_sigma = [p.subs(dict(zip(V4, singular_lift)), VE) for p in d_sigma.column(3)]
    add(_zero_check(
        "kernel-curve",
        [b - s for b, s in zip(base, singular_lift)]
        + [tg - MultiPoly.const(int(k == 3), VE) for k, tg in enumerate(tangent)]
        + on_sigma,
        "p₀ = p, ∂p_ε/∂ε(0) = (0,0,0,1) and it lies in ker dσ₂ on Σ",
    ))

    q_at = [q.subs({"d": e**2}, VE) for q in data.q_delta]
    image_pos = _on(sigma2.coords, curve, VE)
    image_neg = _on(sigma2.coords, curve_neg, VE)
    add(_zero_check(
        "double-point-curve",
        [a - q for a, q in zip(image_pos, q_at)] + [b - q for b, q in zip(image_neg, q_at)],
        "σ₂(p_ε) = σ₂(p_₋ε) = q_{ε²}",
    ))

    v1 = [q.diff("d").subs({"d": 0}, VC) for q in data.q_delta]
    add(_equal_check("v1-tangent", v1, data.v1, "v₁ = ∂q_δ/∂δ(0)"))

    n_pos = _on(data.normal, curve, VE)
    n_neg = _on(data.normal, curve_neg, VE)
    want_pos = [e * a + e**2 * b for a, b in zip(data.normal_odd, data.normal_even)]
    want_neg = [-e * a + e**2 * b for a, b in zip(data.normal_odd, data.normal_even)]
    add(_zero_check(
        "normal-at-curve",
        [g - w for g, w in zip(n_pos + n_neg, want_pos + want_neg)],
        "n(p_±ε) = ±ε·A + ε²·B",
    ))
    n_sum = [a + b for a, b in zip(n_pos, n_neg)]
    n_diff = [a - b for a, b in zip(n_pos, n_neg)]
    add(_equal_check("normal-sum", n_sum, data.normal_sum, "n(p_ε) + n(p_₋ε)"))
    add(_equal_check("normal-difference", n_diff, data.normal_diff, "n(p_ε) − n(p_₋ε)"))

    for name, vec, ref in (("v2-limit", n_diff, data.v2), ("v3-limit", n_sum, data.v3)):
        k, lead = _limit_direction(vec, "e")
        lead = [p.subs({"e": 0}, VC) for p in lead]
        c = _positive_multiple(lead, ref)
        if c is None:
            residual = "; ".join(str(p) for p in lead)
            add(Check(name, False, f"leading coefficient (order ε^{k}) is not a positive multiple", residual))
        else:
            add(Check(name, True, f"limit direction at order ε^{k} is {c}·{name[:2]}"))

    # the extension over the disk
    F = list(data.F)
    dF_t = [p.diff("t2") for p in F]
    dF_x = [p.diff("x") * Fraction(-1, 2) for p in F]
    rows = [dF_t, dF_x] + [list(v) for v in data.frame]
    add(_equal_check("M-rows", [x for r in rows for x in r], _flatten(data.M), "M = [∂F/∂t₂; −½∂F/∂x; v₁; v₂; v₃]"))

    det_c = data.M.det_cofactor()
    det_b = data.M.det_bareiss()
    add(_zero_check("detM-cofactor-bareiss", [det_c - det_b], "cofactor expansion equals fraction-free elimination"))
    add(_zero_check("detM-expansion", [det_c - data.det_m], "det M equals the printed expansion"))
    const = det_c.evaluate((0, 0))
    add(Check(
        "detM-constant-term",
        const == 3 and data.det_m.constant_term() == 3,
        f"det M(0, 0) = {const}; printed constant term {data.det_m.constant_term()}",
    ))
    sos = data.sos_rest
    for c, base_poly in data.sos_squares:
        sos = sos + base_poly * base_poly * c
    add(_zero_check("detM-sos-identity", [det_c - sos], "det M equals the sum-of-squares regrouping"))

    rest_ok = is_even_monomial_sum(data.sos_rest)
    coeffs_ok = all(c > 0 for c, _ in data.sos_squares)
    floor = data.sos_rest.constant_term()
    cert = rest_ok and coeffs_ok and floor >= 1 and (det_c - sos).is_zero
    add(Check(
        "detM-positivity",
        cert,
        f"positive·square summands + even positive monomials + {floor} ⇒ det M ≥ {floor}",
    ))

    sigma_i = _on(sigma2.coords, data.inclusion, VC)
    raw = [f - s for f, s in zip(F, sigma_i)]
    add(_zero_check(
        "boundary-map",
        [reduce_mod_circle(p) for p in raw],
        "F ≡ σ₂∘i modulo t₂² + x² − 1",
    ))
    frame_diffs = []
    for got, want in zip(data.frame, (data.v1, data.v2, data.v3)):
        frame_diffs.extend(reduce_mod_circle(a - b) for a, b in zip(got, want))
    add(_zero_check("boundary-framing", frame_diffs, "disk framing ≡ (v₁, v₂, v₃) modulo t₂² + x² − 1"))

    pts, distinct = injectivity_sample(F, sample_steps)
    add(Check(
        "F-injective-sample",
        pts == distinct,
        f"sanity check only: {distinct} distinct images of {pts} grid points",
    ))

    if strict:
        report.raise_on_failure()
    return report


# ---------------------------------------------------------------------------
# multiple points of σ_r


def _xnames(k: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, k + 1))


def _elementary(gens: Sequence[MultiPoly], m: int, variables: Sequence[str]) -> MultiPoly:
    total = MultiPoly.zero(variables)
    if m == 0:
        return MultiPoly.const(1, variables)
    for combo in combinations(gens, m):
        term = MultiPoly.const(1, variables)
        for g in combo:
            term = term * g
        total = total + term
    return total


def elementary_symmetric_map(k: int) -> PolyMap:
    """E : (x₁..x_k) ↦ (e₁..e_k)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    names = _xnames(k)
    gens = ring(*names)
    return PolyMap(names, [_elementary(gens, m, names) for m in range(1, k + 1)])


def printed_jacobi_matrix(k: int) -> PolyMatrix:
    """Row m, column j holds e_m of the variables other than x_j (row 0 is all ones)."""
    names = _xnames(k)
    gens = ring(*names)
    rows = []
    for m in range(k):
        rows.append([_elementary(gens[:j] + gens[j + 1:], m, names) for j in range(k)])
    return PolyMatrix(rows, names)


def vandermonde_product(k: int) -> MultiPoly:
    names = _xnames(k)
    gens = ring(*names)
    out = MultiPoly.const(1, names)
    for i in range(k):
        for j in range(i + 1, k):
            out = out * (gens[i] - gens[j])
    return out


def verify_vandermonde_jacobian(k: int, *, seed: int = 0, points: int = 10) -> Check:
    """det J(x) = ∏_{i<j}(x_i − x_j), symbolically for k ≤ 6 and at random points beyond."""
    if k < 2:
        raise ValueError("k must be at least 2")
    E = elementary_symmetric_map(k)
    J = jacobian(E)
    if J != printed_jacobi_matrix(k):
        diff = [a - b for a, b in zip(_flatten(J), _flatten(printed_jacobi_matrix(k)))]
        bad = next(p for p in diff if not p.is_zero)
        return Check(f"vandermonde-k{k}", False, "jacobian of E differs from the e_m(x without x_j) pattern", str(bad))
    if k > SYMBOLIC_VANDERMONDE_LIMIT:
        rng = random.Random(seed)
        prod = vandermonde_product(k)
        for _ in range(points):
            pt = [Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(k)]
            lhs = _det_numeric(J.evaluate(pt))
            rhs = prod.evaluate(pt)
            if lhs != rhs:
                return Check(f"vandermonde-k{k}", False, f"mismatch at {pt}", str(lhs - rhs))
        return Check(f"vandermonde-k{k}", True, f"det J = ∏(x_i − x_j) at {points} random points")
    det = J.det_cofactor()
    residual = det - vandermonde_product(k)
    if not residual.is_zero:
        return Check(f"vandermonde-k{k}", False, "det J ≠ ∏(x_i − x_j)", str(residual))
    if k >= 4:
        cross = J.det_bareiss() - det
        if not cross.is_zero:
            return Check(f"vandermonde-k{k}", False, "cofactor and fraction-free determinants disagree", str(cross))
    return Check(f"vandermonde-k{k}", True, f"det J = ∏_{{i<j}}(x_i − x_j), {len(det.terms)} terms")


def _det_numeric(a: list[list[Fraction]]) -> Fraction:
    a = [row[:] for row in a]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


@dataclass(frozen=True)
class OrthantPoint:
    u: tuple[Fraction, ...]
    roots: tuple[Fraction, ...]
    poly: UniPoly
    t: tuple[Fraction, ...]  # (t_{r+1}, …, t_{2r−1})
    z2: Fraction

    @property
    def r(self) -> int:
        return len(self.u)

    def target_point(self) -> tuple[Fraction, ...]:
        """The full point (t₁..t_{2r−1}, z₁, z₂) of R^{2r+1}; lies in 𝒫."""
        return (Fraction(0),) * self.r + self.t + (Fraction(0), self.z2)

    def block_pattern(self) -> tuple[int, ...]:
        return _blocks_from_gaps(self.u)


def _blocks_from_gaps(u: Sequence[Fraction]) -> tuple[int, ...]:
    sizes = [1]
    for g in u:
        if g == 0:
            sizes[-1] += 1
        else:
            sizes.append(1)
    return tuple(sizes)


def roots_from_gaps(u: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """A(u): consecutive differences u, total sum 0."""
    r = len(u)
    partial = [Fraction(0)]
    for g in u:
        partial.append(partial[-1] + g)
    shift = sum(partial) / (r + 1)
    return tuple(p - shift for p in partial)


def _point_from_roots(roots: Sequence[Fraction]) -> tuple[UniPoly, tuple[Fraction, ...], Fraction]:
    r = len(roots) - 1
    poly = UniPoly.from_roots(roots)
    c = list(poly.coeffs) + [Fraction(0)] * (r + 2 - len(poly.coeffs))
    if c[r] != 0:
        raise ValueError("roots do not sum to zero")
    t = tuple(c[m] for m in range(1, r))
    return poly, t, -c[0]


def orthant_map(u: Sequence[Fraction | int]) -> OrthantPoint:
    """φ(u): the monic polynomial whose ordered roots have gaps u and sum 0."""
    u = tuple(Fraction(g) for g in u)
    if not u:
        raise ValueError("u must have length r ≥ 1")
    if any(g < 0 for g in u):
        raise ValueError("orthant coordinates must be nonnegative")
    roots = roots_from_gaps(u)
    poly, t, z2 = _point_from_roots(roots)
    return OrthantPoint(u, roots, poly, t, z2)


def multiple_point_check(r: int, roots: Sequence[Fraction | int]) -> Check:
    """The r+1 preimages built from ``roots`` share one σ_r-image inside 𝒫."""
    roots = tuple(Fraction(x) for x in roots)
    if r < 1 or len(roots) != r + 1:
        raise ValueError(f"need r + 1 = {r + 1} roots")
    if len(set(roots)) != len(roots):
        raise ValueError("roots must be pairwise distinct")
    if sum(roots) != 0:
        raise ValueError("roots must sum to zero")
    sigma = morin_normal_form(r)
    _, t, z2 = _point_from_roots(roots)
    params = (Fraction(0),) * r + t
    images = {sigma(params + (x,)) for x in roots}
    want = params + (Fraction(0), z2)
    name = f"multiple-point-r{r}"
    if images != {want}:
        return Check(name, False, f"images {sorted(images)} differ from {want}")
    in_p = all(v == 0 for v in want[:r]) and want[2 * r - 1] == 0
    return Check(name, in_p, f"{r + 1} preimages over x ∈ {[str(x) for x in roots]} map to one point of 𝒫")


def stratum_rank_check(k: int, partition: Sequence[int], sample: Sequence[Fraction | int]) -> Check:
    """Rank of dE on the stratum with block sizes ``partition`` at ``sample``."""
    sample = tuple(Fraction(x) for x in sample)
    partition = tuple(partition)
    if len(sample) != k or sum(partition) != k or any(b < 1 for b in partition):
        raise ValueError("partition and sample must both describe k coordinates")
    starts = [sum(partition[:i]) for i in range(len(partition))]
    values = [sample[s] for s in starts]
    for s, b in zip(starts, partition):
        if any(sample[s + i] != sample[s] for i in range(b)):
            raise ValueError("sample is not constant on a block")
    if any(a >= b for a, b in zip(values, values[1:])):
        raise ValueError("sample is not strictly increasing across blocks")
    s = len(partition)
    J = jacobian(elementary_symmetric_map(k)).evaluate(sample)
    cols = list(zip(*J))
    # tangent directions of the stratum: move a whole block at once
    tangent = [[sum(J[row][st + i] for i in range(b)) for st, b in zip(starts, partition)] for row in range(k)]
    restricted = rank(tangent)
    full = rank(J)
    coincide = all(cols[st + i] == cols[st] for st, b in zip(starts, partition) for i in range(b))
    minor = _det_numeric([[J[row][st] for st in starts] for row in range(s)])
    ok = restricted == s and full == s and coincide and minor != 0
    return Check(
        f"stratum-k{k}-{'|'.join(map(str, partition))}",
        ok,
        f"s = {s}: restricted rank {restricted}, full rank {full}, leading minor {minor}",
    )


def _random_fraction(rng: random.Random, lo: int = -9, hi: int = 9) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 4))


def _random_partition(rng: random.Random, k: int) -> tuple[int, ...]:
    cuts = sorted(c for c in range(1, k) if rng.random() < 0.5)
    bounds = [0] + cuts + [k]
    return tuple(b - a for a, b in zip(bounds, bounds[1:]))


def _stratum_sample(rng: random.Random, partition: Sequence[int]) -> tuple[Fraction, ...]:
    vals = sorted({_random_fraction(rng) for _ in range(4 * len(partition))})
    while len(vals) < len(partition):
        vals.append(vals[-1] + 1 if vals else Fraction(0))
    chosen = sorted(rng.sample(vals, len(partition)))
    out = []
    for v, b in zip(chosen, partition):
        out.extend([v] * b)
    return tuple(out)


def face_pattern_check(u: Sequence[Fraction]) -> Check:
    """φ(u) is real-rooted, its roots are A(u), and the multiplicity pattern is u's face."""
    pt = orthant_map(u)
    name = f"orthant-r{pt.r}"
    if not is_real_rooted(pt.poly):
        return Check(name, False, f"φ({[str(g) for g in u]}) is not real-rooted")
    if pt.poly.degree != pt.r + 1 or pt.poly.coeffs[pt.r] != 0:
        return Check(name, False, "x^r coefficient is not zero")
    found = real_root_multiplicities(pt.poly)
    pattern = tuple(m for _, m in found)
    distinct = sorted(set(pt.roots))
    located = all(a <= x <= b for ((a, b), _), x in zip(found, distinct)) and len(found) == len(distinct)
    ok = pattern == pt.block_pattern() and located
    return Check(name, ok, f"u = {[str(g) for g in u]}: pattern {pattern}, face {pt.block_pattern()}")


def sturm_vs_bisection(p: UniPoly) -> bool:
    return count_real_roots(p) == len(isolate_real_roots(p))


def verify_appendix2(r: int = 4, samples: int = 20, seed: int = 0, *, orthant_samples: int = 100) -> Report:
    """Vandermonde Jacobians, stratum ranks, orthant faces and multiple points up to depth r."""
    if r < 1:
        raise ValueError("r must be at least 1")
    if samples < 0 or orthant_samples < 0:
        raise ValueError("sample counts must be nonnegative")
    rng = random.Random(seed)
    report = Report(
        f"multiple-point strata of σ_r (r ≤ {r})",
        params={"r": r, "samples": samples, "seed": seed, "orthant_samples": orthant_samples},
    )
    add = report.checks.append
    kmax = r + 1

    for k in range(2, kmax + 1):
        add(verify_vandermonde_jacobian(k, seed=seed))

    bad_strata = []
    for _ in range(samples):
        k = rng.randint(1, kmax)
        part = _random_partition(rng, k)
        c = stratum_rank_check(k, part, _stratum_sample(rng, part))
        if not c.passed:
            bad_strata.append(c)
    add(bad_strata[0] if bad_strata else Check("stratum-ranks", True, f"rank = block count at {samples} sample points, k ≤ {kmax}"))

    bad_faces = []
    for _ in range(orthant_samples):
        rr = rng.randint(1, r)
        u = [Fraction(0) if rng.random() < 0.35 else Fraction(rng.randint(1, 9), rng.randint(1, 3)) for _ in range(rr)]
        c = face_pattern_check(u)
        if not c.passed:
            bad_faces.append(c)
    add(bad_faces[0] if bad_faces else Check("orthant-faces", True, f"real-rooted with face multiplicities at {orthant_samples} inputs, r ≤ {r}"))

    bad_mp = []
    for _ in range(samples):
        rr = rng.randint(1, r)
        vals = set()
        while len(vals) < rr + 1:
            vals.add(_random_fraction(rng))
        pt = roots_from_gaps(_gaps(sorted(vals)))
        c = multiple_point_check(rr, pt)
        if not c.passed:
            bad_mp.append(c)
    add(bad_mp[0] if bad_mp else Check("multiple-points", True, f"{samples} random (r+1)-tuples share one image in 𝒫, r ≤ {r}"))
    return report


def _gaps(vals: Sequence[Fraction]) -> list[Fraction]:
    return [b - a for a, b in zip(vals, vals[1:])]
