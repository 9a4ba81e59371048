"""Line configurations on polarized K3 surfaces.

A configuration is a multigraph of lines (each line v has v**2 = -2 and
v.h = 1, two lines pair by their edge multiplicity, h**2 = the polarization
degree 2d) together with optional finite-index extension data: rational
vectors in the span of the lines and h whose classes generate an isotropic
subgroup of the discriminant form.  The extension data pins down the actual
line lattice N inside the K3 lattice.

A hyperplane-section fragment is a set of 2d lines summing to h.  Pairing
that equation with a member line forces intra-subset weighted valency exactly
3, and that combinatorial condition is what the enumeration uses; the class
sum test against the radical is available separately and implies 3-regularity
on every input.

Real-structure candidates pair a graph involution with the global sign -1, so
real lines are the fixed vertices.  Admissibility of a candidate is decided
by gluing its discriminant action to a sign-reversing involution on the
transcendental side, or by the arithmetic screening rules when no
transcendental representative is supplied.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InputError
from .fqf import (
    FqfIsometry,
    isotropic_quotient,
    minus_identity_isometry,
    solve_mod,
    subgroup_form,
    subgroup_membership,
)
from .intmat import (
    inertia,
    integral_kernel,
    integral_kernel_with_complement,
    inverse_unimodular,
    mat_mul,
    matrix_rank,
    solve_exact,
    transpose,
)
from .lattices import Isometry, Lattice, discriminant_data
from .parallel import parallel_map
from .multigraph import (
    ELEMENT_CAP,
    Multigraph,
    PermutationGroup,
    canonical_certificate,
    compose_perm,
    girth,
    graph_automorphism_group,
    invert_perm,
)
from .realcrit import (
    ADMISSIBLE,
    INADMISSIBLE,
    UNKNOWN,
    TranscendentalSpec,
    Verdict,
    match_real_structure,
    t_side_involution_classes,
    totally_real_criterion,
)

K3_RANK = 22
MAX_MULTIPLICITY = 3


@dataclass(frozen=True)
class LineConfiguration:
    """A polarized line multigraph with optional lattice-extension data.

    kernel entries are rational coordinate vectors of length n+1 on the basis
    (lines..., h).  Each must pair integrally with every line and with h, have
    even self-pairing, and pair integrally with the other kernel vectors, so
    that adjoining them yields an even lattice.
    """

    degree: int
    graph: Multigraph
    kernel: tuple[tuple[Fraction, ...], ...] = ()
    transcendental: TranscendentalSpec | None = None

    def __post_init__(self):
        if self.degree < 2 or self.degree % 2:
            raise InputError("polarization degree must be an even integer >= 2")
        for row in self.graph.mult:
            for m in row:
                if m > MAX_MULTIPLICITY:
                    raise InputError(
                        f"line intersection multiplicity {m} exceeds "
                        f"{MAX_MULTIPLICITY}"
                    )
        kernel = tuple(
            tuple(Fraction(x) for x in vec) for vec in self.kernel
        )
        object.__setattr__(self, "kernel", kernel)
        n = self.graph.n
        gram = _fano_gram(self)
        pairings = []
        for vec in kernel:
            if len(vec) != n + 1:
                raise InputError(
                    f"kernel vector length {len(vec)} != line count + 1"
                )
            pair = [
                sum(Fraction(gram[i][j]) * vec[j] for j in range(n + 1))
                for i in range(n + 1)
            ]
            if any(x.denominator != 1 for x in pair):
                raise InputError(
                    "kernel vector does not pair integrally with the lines and h"
                )
            pairings.append(pair)
        for a, veca in enumerate(kernel):
            self_pair = sum(x * y for x, y in zip(pairings[a], veca))
            if self_pair.denominator != 1 or int(self_pair) % 2:
                raise InputError("kernel vector with odd or fractional square")
            for b in range(a):
                cross = sum(x * y for x, y in zip(pairings[a], kernel[b]))
                if cross.denominator != 1:
                    raise InputError(
                        "kernel vectors with fractional mutual pairing"
                    )

    @property
    def line_count(self) -> int:
        return self.graph.n


def _fano_gram(cfg: LineConfiguration) -> list[list[int]]:
    n = cfg.graph.n
    g = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        g[i][i] = -2
        for j in range(n):
            if i != j:
                g[i][j] = cfg.graph.mult[i][j]
        g[i][n] = g[n][i] = 1
    g[n][n] = cfg.degree
    return g


@dataclass(frozen=True)
class FanoData:
    gram: tuple[tuple[int, ...], ...]
    radical: tuple[tuple[int, ...], ...]
    quotient_signature: tuple[int, int]
    warnings: tuple[str, ...]


def fano_lattice(cfg: LineConfiguration) -> FanoData:
    """Gram matrix on (lines..., h), the radical of that form, and the
    signature of the quotient.  A non-hyperbolic quotient is flagged with a
    warning, not an error."""
    gram = _fano_gram(cfg)
    radical, complement = integral_kernel_with_complement(gram)
    qgram = mat_mul(mat_mul(complement, gram), transpose(complement))
    pos, neg, zero = inertia(qgram) if qgram else (0, 0, 0)
    warnings = []
    if (pos, neg) != (1, len(qgram) - 1):
        warnings.append(
            f"quotient signature ({pos},{neg}) is not hyperbolic; no polarized "
            "K3 surface realizes this configuration"
        )
    return FanoData(
        tuple(tuple(row) for row in gram),
        tuple(tuple(row) for row in radical),
        (pos, neg),
        tuple(warnings),
    )


def class_sum_in_radical(cfg: LineConfiguration, vertices) -> bool:
    """Whether sum(v in S) - h lies in the radical of the Fano form."""
    gram = _fano_gram(cfg)
    radical = integral_kernel(gram)
    n = cfg.graph.n
    x = [1 if v in set(vertices) else 0 for v in range(n)] + [-1]
    if not radical:
        return all(c == 0 for c in x)
    stacked = radical + [x]
    return matrix_rank(stacked) == matrix_rank(radical)


# -- fragments ----------------------------------------------------------------


@dataclass(frozen=True)
class Fragment:
    vertices: tuple[int, ...]
    type_label: str


def enumerate_fragments(
    cfg: LineConfiguration, threads: int | None = 1
) -> list[Fragment]:
    """All 2d-subsets with intra-subset weighted valency exactly 3 at every
    member, in lexicographic order.  The search runs one worker per leading
    vertex; the result does not depend on the thread count."""
    size = cfg.degree
    graph = cfg.graph
    n = graph.n
    if size > n:
        return []

    def branch(first: int) -> list[Fragment]:
        found: list[Fragment] = []
        chosen = [first]
        valency = [0] * n  # intra-subset valency of chosen vertices

        def extend(start: int):
            if len(chosen) == size:
                if all(valency[v] == 3 for v in chosen):
                    sub = graph.induced(chosen)
                    found.append(
                        Fragment(tuple(chosen), classify_fragment(sub))
                    )
                return
            for v in range(start, n - (size - len(chosen)) + 1):
                bump = [graph.mult[v][u] for u in chosen]
                val_v = sum(bump)
                if val_v > 3:
                    continue
                if any(valency[u] + b > 3 for u, b in zip(chosen, bump)):
                    continue
                for u, b in zip(chosen, bump):
                    valency[u] += b
                chosen.append(v)
                valency[v] = val_v
                extend(v + 1)
                chosen.pop()
                valency[v] = 0
                for u, b in zip(chosen, bump):
                    valency[u] -= b

        extend(first + 1)
        return found

    parts = parallel_map(branch, range(n - size + 1), threads)
    return [fr for part in parts for fr in part]


def _catalog_builders() -> dict[str, Multigraph]:
    def simple(n, pairs):
        return Multigraph.from_edges(n, [(a, b, 1) for a, b in pairs])

    triangle = [(0, 1), (1, 2), (0, 2)]
    return {
        "tritangent-pair": Multigraph.from_edges(2, [(0, 1, 3)]),
        "K4": simple(4, [(a, b) for a in range(4) for b in range(a + 1, 4)]),
        "prism": simple(
            6, triangle + [(3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]
        ),
        "K33": simple(6, [(i, 3 + j) for i in range(3) for j in range(3)]),
        "K3+K32": simple(
            8,
            triangle
            + [(i, j) for i in (3, 4, 5) for j in (6, 7)]
            + [(0, 3), (1, 4), (2, 5)],
        ),
        "wagner": simple(
            8, [(i, (i + 1) % 8) for i in range(8)] + [(i, i + 4) for i in range(4)]
        ),
        "cube": simple(
            8,
            [
                (a, b)
                for a in range(8)
                for b in range(a + 1, 8)
                if bin(a ^ b).count("1") == 1
            ],
        ),
    }


def catalog_graph(name: str) -> Multigraph:
    builders = _catalog_builders()
    if name not in builders:
        raise InputError(f"unknown catalog graph {name!r}")
    return builders[name]


def catalog_names() -> tuple[str, ...]:
    return tuple(_catalog_builders())


@lru_cache(maxsize=1)
def _catalog_certificates() -> dict[str, str]:
    return {
        canonical_certificate(g): name
        for name, g in _catalog_builders().items()
    }


def classify_fragment(sub: Multigraph) -> str:
    """Catalog name of a 3-regular multigraph, or its canonical certificate
    when it is none of the named types."""
    for v in range(sub.n):
        if sub.degree(v) != 3:
            raise InputError("fragment subgraph must be 3-regular")
    cert = canonical_certificate(sub)
    return _catalog_certificates().get(cert, cert)


# -- graph-level invariants ---------------------------------------------------


def graph_automorphisms(cfg) -> PermutationGroup:
    graph = cfg.graph if isinstance(cfg, LineConfiguration) else cfg
    return graph_automorphism_group(graph)


def graph_invariants(cfg) -> tuple[int, int | None, int]:
    """(rank of the lines-only Gram form, girth, automorphism group order)."""
    graph = cfg.graph if isinstance(cfg, LineConfiguration) else cfg
    n = graph.n
    lines_gram = [
        [-2 if i == j else graph.mult[i][j] for j in range(n)] for i in range(n)
    ]
    r = matrix_rank(lines_gram)
    return (r, girth(graph), graph_automorphism_group(graph).order())


# -- the polarized stabilizer -------------------------------------------------


@dataclass(frozen=True)
class PolarizedIsometry:
    permutation: tuple[int, ...]
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InputError("sign must be +1 or -1")
        if sorted(self.permutation) != list(range(len(self.permutation))):
            raise InputError("not a permutation")


@dataclass(frozen=True)
class PolarizedStabilizer:
    """Subgroup of Aut(graph) x {+-1} preserving the extension kernel.

    The sign factor acts freely (negation preserves every subgroup), so the
    group is (sigma part) x {+-1} and only the permutation part is stored.
    `sigmas` is None exactly when the kernel is empty and the whole
    automorphism group qualifies without enumeration.
    """

    group: PermutationGroup
    sigmas: tuple[tuple[int, ...], ...] | None
    order: int

    def sigma_elements(self, cap: int | None = ELEMENT_CAP):
        if self.sigmas is None:
            return tuple(self.group.elements(cap))
        return self.sigmas

    def contains(self, iso: PolarizedIsometry) -> bool:
        if self.sigmas is None:
            return self.group.contains(iso.permutation)
        return iso.permutation in self.sigmas


class _ExtensionContext:
    """Discriminant-level data of a configuration: the quotient lattice of
    the Fano form, the kernel classes inside its discriminant form, and the
    discriminant form of the extension N."""

    def __init__(self, cfg: LineConfiguration):
        self.cfg = cfg
        gram = _fano_gram(cfg)
        radical, complement = integral_kernel_with_complement(gram)
        self.gram = gram
        self.radical = radical
        self.complement = complement
        qgram = mat_mul(mat_mul(complement, gram), transpose(complement))
        self.qlattice = Lattice(tuple(tuple(row) for row in qgram))
        self.data = discriminant_data(self.qlattice)
        self.kernel_classes = tuple(
            self._class_of(vec) for vec in cfg.kernel
        )
        self.dn, self.reps = isotropic_quotient(
            self.data.form, list(self.kernel_classes)
        )
        sub, _ = subgroup_form(self.data.form, list(self.kernel_classes))
        self.kernel_order = sub.order()

    def _class_of(self, vec) -> tuple[int, ...]:
        m = len(self.gram)
        pair = [
            sum(Fraction(self.gram[i][j]) * vec[j] for j in range(m))
            for i in range(m)
        ]
        t = [
            int(sum(Fraction(row[i]) * pair[i] for i in range(m)))
            for row in self.complement
        ]
        if not t:
            return ()
        w = solve_exact(self.qlattice.gram, t)
        return self.data.coordinates(w)

    def rank_n(self) -> int:
        return self.qlattice.rank

    def det_n(self) -> int:
        det_q = self.qlattice.determinant
        det, rem = divmod(det_q, self.kernel_order**2)
        if rem:
            raise ValueError("kernel order squared does not divide det")
        return det

    def quotient_action(self, perm) -> Isometry:
        """The permutation of (lines, h fixed) descended to the quotient
        lattice."""
        m = len(self.gram)
        n = m - 1
        full = list(perm) + [n]
        stacked = self.complement + self.radical
        inv = inverse_unimodular(transpose(stacked))
        k = len(self.complement)
        cols = []
        for row in self.complement:
            permuted = [0] * m
            for i in range(m):
                permuted[full[i]] = row[i]
            coeffs = [
                sum(inv[i][j] * permuted[j] for j in range(m)) for i in range(m)
            ]
            cols.append(coeffs[:k])
        matrix = tuple(
            tuple(cols[j][i] for j in range(k)) for i in range(k)
        )
        return Isometry(self.qlattice, matrix)

    def candidate_action(self, perm) -> FqfIsometry:
        """Action of (perm, sign -1) on the discriminant form of N."""
        tau_q = self.data.act(self.quotient_action(perm))
        orders = list(self.data.form.orders)
        columns = list(self.reps) + list(self.kernel_classes)
        cols = []
        for rep in self.reps:
            image = tau_q.apply(rep)
            sol = solve_mod(columns, list(image), orders)
            if sol is None:
                raise ValueError(
                    "discriminant action does not preserve the kernel"
                )
            cols.append(self.dn.reduce(sol[: len(self.reps)]))
        descended = FqfIsometry(self.dn, self.dn, tuple(cols), anti=False)
        return minus_identity_isometry(self.dn).compose(descended)

    def preserves_kernel(self, perm) -> bool:
        m = len(self.gram)
        n = m - 1
        full = list(perm) + [n]
        images = []
        for vec in self.cfg.kernel:
            permuted = [Fraction(0)] * m
            for i in range(m):
                permuted[full[i]] = vec[i]
            images.append(self._class_of(permuted))
        form = self.data.form
        back = list(self.kernel_classes)
        return all(
            subgroup_membership(form, back, img) for img in images
        ) and all(
            subgroup_membership(form, images, cls)
            for cls in self.kernel_classes
        )


def polarized_stabilizer(cfg: LineConfiguration) -> PolarizedStabilizer:
    """The subgroup of Aut(graph) x {+-1} whose induced discriminant action
    preserves the subgroup generated by the kernel classes."""
    group = graph_automorphism_group(cfg.graph)
    if not cfg.kernel:
        return PolarizedStabilizer(group, None, 2 * group.order())
    ctx = _ExtensionContext(cfg)
    kept = tuple(
        perm for perm in group.elements() if ctx.preserves_kernel(perm)
    )
    return PolarizedStabilizer(group, kept, 2 * len(kept))


# -- fragment counting under an involution -------------------------------------


def count_fragments_under(cfg: LineConfiguration, sigma) -> tuple[int, int]:
    """(setwise-invariant fragment count, pointwise-fixed fragment count)
    under a graph involution."""
    sigma = tuple(sigma)
    n = cfg.graph.n
    if sorted(sigma) != list(range(n)):
        raise InputError("sigma is not a permutation of the vertices")
    if compose_perm(sigma, sigma) != tuple(range(n)):
        raise InputError("sigma is not an involution")
    if cfg.graph.relabel(sigma) != cfg.graph:
        raise InputError("sigma does not preserve the multigraph")
    num_r = 0
    num_rr = 0
    for frag in enumerate_fragments(cfg):
        vs = set(frag.vertices)
        if {sigma[v] for v in vs} == vs:
            num_r += 1
            if all(sigma[v] == v for v in vs):
                num_rr += 1
    return (num_r, num_rr)


# -- real-structure candidates --------------------------------------------------


@dataclass(frozen=True)
class RealCandidate:
    isometry: PolarizedIsometry
    num_r: int
    num_rr: int
    admissibility: str
    reason: str
    verdict: Verdict | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if not (0 <= self.num_rr <= self.num_r):
            raise ValueError("fragment counts violate num_rr <= num_r")


def _involution_classes_of(sigmas) -> list[tuple[int, ...]]:
    """Lexicographically minimal representatives of the conjugacy classes of
    involutions (identity included) in an explicitly listed group."""
    elems = list(sigmas)
    n = len(elems[0]) if elems else 0
    ident = tuple(range(n))
    invs = [g for g in elems if compose_perm(g, g) == ident]
    seen: set[tuple[int, ...]] = set()
    reps = []
    for g in sorted(invs):
        if g in seen:
            continue
        orbit = set()
        for a in elems:
            orbit.add(compose_perm(compose_perm(a, g), invert_perm(a)))
        seen |= orbit
        reps.append(g)
    return reps


def real_structure_candidates(
    cfg: LineConfiguration, threads: int | None = 1
) -> list[RealCandidate]:
    """Involutive candidates (sigma, -1) up to stabilizer conjugacy, each with
    its fragment counts and gluing admissibility.  Candidate analyses run in
    parallel; the result does not depend on the thread count."""
    ctx = _ExtensionContext(cfg)
    r = K3_RANK - ctx.rank_n()
    if r < 1:
        raise InputError(
            f"line lattice rank {ctx.rank_n()} leaves no transcendental "
            "directions"
        )
    det_n = ctx.det_n()
    notes: list[str] = []
    fano = fano_lattice(cfg)
    notes.extend(fano.warnings)
    spec = cfg.transcendental
    tside = None
    if spec is not None:
        if spec.rank() != r:
            notes.append(
                f"transcendental rank {spec.rank()} differs from "
                f"22 - rank N = {r}"
            )
        tside = t_side_involution_classes(spec)
    stab = polarized_stabilizer(cfg)
    sigmas = stab.sigma_elements()
    ident = tuple(range(cfg.graph.n))

    def analyze(sigma: tuple[int, ...]) -> RealCandidate:
        num_r, num_rr = count_fragments_under(cfg, sigma)
        verdict = None
        if spec is None:
            if sigma == ident:
                verdict = totally_real_criterion(ctx.dn, r, det_n)
                status = {
                    "YES_CONTAINS_2": ADMISSIBLE,
                    "YES_CONTAINS_U2": ADMISSIBLE,
                    "NO": INADMISSIBLE,
                    "UNKNOWN": UNKNOWN,
                }[verdict.kind]
                reason = f"screening rules: {verdict.kind}"
            else:
                status = UNKNOWN
                reason = (
                    "no transcendental data; only the trivial involution can "
                    "be screened arithmetically"
                )
        else:
            tau = ctx.candidate_action(sigma)
            status, reason = match_real_structure(tau, tside)
        return RealCandidate(
            PolarizedIsometry(sigma, -1),
            num_r,
            num_rr,
            status,
            reason,
            verdict,
            tuple(notes),
        )

    out = parallel_map(analyze, _involution_classes_of(sigmas), threads)
    out.sort(key=lambda c: c.isometry.permutation)
    return out
