"""Two-particle operator classification and the d(d-1) entangled bases.

Two-particle vectors use the index (n*d + k) for |n>_mu |k>_nu ("row-major mu x nu").
The entangled states are

    |b,s;c1,c2> = d^-1/2 sum_n omega^((s^2 b/2) n (n-1) - c1 n) |n>_mu |s n + c2>_nu

for prime d, b in 0..d-1 and s in 1..d-1. For d = p^n the computational-basis
entangled companion of a trace-formula MUB state is built instead.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.finite_field import Field
from ..algebra.schwinger import monomial
from ..config import get_settings
from ..errors import PuebError
from ..schemas import (
    ClusterReport,
    EigenReport,
    EntangledLabel,
    FamilyTag,
    IncidenceReport,
    MonomialLabel,
    OverlapReport,
    PartitionReport,
    ProjectionResult,
    TwoPartyLabel,
    complex_pair,
)
from ..states import DensityMatrix, StateVector
from ..utils.linalg import Particle, align_phase, dagger, max_abs, partial_trace
from ..utils.phases import nearest_exponent, roots_of_unity
from .mub import (
    _index,
    _require_odd_prime,
    computational_basis,
    mub_state,
    mub_state_pp,
    structured_basis,
)

logger = logging.getLogger(__name__)

TENSOR_CONVENTION = "row-major mu×nu"


class EntangledBasis:
    """The d^2 states |b,s;c1,c2>, indexed by c1*d + c2."""

    __slots__ = ("b", "s", "states")

    def __init__(self, b: int, s: int, states: Sequence[StateVector]) -> None:
        self.b = b
        self.s = s
        self.states = tuple(states)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def matrix(self) -> np.ndarray:
        return np.column_stack([psi.amps for psi in self.states])

    def __len__(self) -> int:
        return len(self.states)

    def __repr__(self) -> str:
        return f"EntangledBasis(b={self.b}, s={self.s}, dim={self.dim})"


def _inv(a: int, d: int) -> int:
    return pow(a % d, d - 2, d)


def _tol(tol: Optional[float], strict: bool = True) -> float:
    if tol is not None:
        return tol
    settings = get_settings()
    return settings.strict_tol if strict else settings.loose_tol


# ----------------------------------------------------------------------
# Entangled states
# ----------------------------------------------------------------------
def ent_state(d: int, lab: EntangledLabel) -> StateVector:
    _require_odd_prime(d)
    s = lab.s % d
    if s == 0:
        raise PuebError(f"s={lab.s} must be nonzero mod {d}")
    h = (d + 1) // 2
    n = np.arange(d, dtype=np.int64)
    exps = np.mod(h * s * s * lab.b * n * (n - 1) - lab.c1 * n, d)
    amps = np.zeros(d * d, dtype=complex)
    amps[n * d + (s * n + lab.c2) % d] = roots_of_unity(d)[exps] / np.sqrt(d)
    return StateVector(amps)


@lru_cache(maxsize=None)
def entangled_basis(d: int, b: int, s: int) -> EntangledBasis:
    states = [
        ent_state(d, EntangledLabel(b=b, s=s, c1=c1, c2=c2)) for c1 in range(d) for c2 in range(d)
    ]
    return EntangledBasis(b, s, states)


def all_entangled_bases(d: int) -> List[EntangledBasis]:
    """All d(d-1) bases, s outer (1..d-1) and b inner (0..d-1)."""

    _require_odd_prime(d)
    return [entangled_basis(d, b, s) for s in range(1, d) for b in range(d)]


def _zz_operator(d: int, s: int) -> np.ndarray:
    """Z^s_mu Z^-1_nu."""

    return np.kron(monomial(d, MonomialLabel.reduced(d, 0, s)), monomial(d, MonomialLabel.reduced(d, 0, -1)))


def _shift_operator(d: int, s: int, b: int) -> np.ndarray:
    """X_mu (X^s Z^(s b))_nu."""

    return np.kron(
        monomial(d, MonomialLabel.reduced(d, 1, 0)), monomial(d, MonomialLabel.reduced(d, s, s * b))
    )


def eigen_check(d: int, lab: EntangledLabel, tol: Optional[float] = None) -> EigenReport:
    """Apply Z^s_mu Z^-1_nu and X_mu (X^s Z^sb)_nu to |b,s;c1,c2> and measure the eigenvalues.

    The first eigenvalue must be omega^-c2. The second is reported as measured and
    compared with the printed claim omega^(s b c2); the algebra gives
    omega^(c1 + s b c2), which is recorded alongside.
    """

    tol = _tol(tol)
    psi = ent_state(d, lab).amps
    results = []
    for op in (_zz_operator(d, lab.s), _shift_operator(d, lab.s, lab.b)):
        image = op @ psi
        eig = complex(np.vdot(psi, image))
        results.append((eig, float(np.linalg.norm(image - eig * psi))))
    (eig1, res1), (eig2, res2) = results
    exp1, exp2 = nearest_exponent(eig1, d), nearest_exponent(eig2, d)
    expected1 = (-lab.c2) % d
    claimed2 = (lab.s * lab.b * lab.c2) % d
    derived2 = (lab.c1 + lab.s * lab.b * lab.c2) % d
    omega = roots_of_unity(d)
    passed = (
        res1 < tol
        and res2 < tol
        and exp1 == expected1
        and abs(eig1 - omega[expected1]) < tol
        and abs(eig2 - omega[exp2]) < tol
    )
    if exp2 != claimed2:
        logger.debug("Eigenvalue claim omega^%d differs from measured omega^%d for %s", claimed2, exp2, lab)
    return EigenReport(
        label=lab,
        eig1=complex_pair(eig1),
        eig2=complex_pair(eig2),
        eig1_exponent=exp1,
        eig2_exponent=exp2,
        residual1=res1,
        residual2=res2,
        expected_eig1_exponent=expected1,
        claimed_eig2_exponent=claimed2,
        derived_eig2_exponent=derived2,
        claim_holds=exp2 == claimed2,
        passed=passed,
    )


def overlap_structure(d: int, tol: Optional[float] = None) -> OverlapReport:
    """Scan all state pairs of all entangled bases and bin them by case.

    Same (b, s): orthonormality delta(c1,c1') delta(c2,c2'). Same s, different b:
    delta(c2,c2')/sqrt(d). Different s: 1/d.
    """

    tol = _tol(tol, strict=False)
    bases = all_entangled_bases(d)
    vectors = np.column_stack([basis.matrix() for basis in bases])
    labels = np.array(
        [(basis.b, basis.s, c1, c2) for basis in bases for c1 in range(d) for c2 in range(d)]
    )
    magnitudes = np.abs(dagger(vectors) @ vectors)
    b, s, c1, c2 = (labels[:, k] for k in range(4))
    same_b = b[:, None] == b[None, :]
    same_s = s[:, None] == s[None, :]
    same_c1 = c1[:, None] == c1[None, :]
    same_c2 = c2[:, None] == c2[None, :]

    same_basis = same_b & same_s
    s_equal = same_s & ~same_b
    full = ~same_s
    predicted_same = (same_c1 & same_c2).astype(float)
    predicted_s_equal = same_c2.astype(float) / np.sqrt(d)

    case_same = max_abs((magnitudes - predicted_same)[same_basis])
    case_s_equal = max_abs((magnitudes - predicted_s_equal)[s_equal])
    case_full = max_abs((magnitudes - 1.0 / d)[full])
    return OverlapReport(
        d=d,
        case_same=case_same,
        case_s_equal=case_s_equal,
        case_full=case_full,
        pair_counts={
            "same": int(same_basis.sum()),
            "s_equal": int(s_equal.sum()),
            "full": int(full.sum()),
        },
        passed=max(case_same, case_s_equal, case_full) < tol,
    )


def project_mub(
    d: int, b1: int, c: int, lab: EntangledLabel, tol: Optional[float] = None
) -> Tuple[np.ndarray, ProjectionResult]:
    """Contract the mu slot of |b,1;c1,0> with <b1;c|.

    Returns the unnormalised nu amplitudes and the match against
    (1/sqrt(d)) |b - b1; c1 - c>.
    """

    if lab.s % d != 1 or lab.c2 % d != 0:
        raise PuebError("projection is defined for s=1, c2=0")
    tol = _tol(tol, strict=False)
    psi = ent_state(d, lab).amps.reshape(d, d)
    projected = mub_state(d, b1, c).amps.conj() @ psi
    target_b, target_c = (lab.b - b1) % d, (lab.c1 - c) % d
    reference = mub_state(d, target_b, target_c).amps / np.sqrt(d)
    phase, dev = align_phase(projected, reference)
    return projected, ProjectionResult(
        target_b=target_b,
        target_c=target_c,
        phase=complex_pair(phase),
        max_dev=dev,
        passed=dev < tol,
        labels_differ=target_b != b1 % d,
    )


def projection_incidence(d: int) -> IncidenceReport:
    """Find the (b, b1) pairs whose projected label b - b1 equals b1, i.e. b = 2 b1 mod d."""

    coinciding = [(b, b1) for b in range(d) for b1 in range(d) if (b - b1) % d == b1]
    if coinciding:
        logger.warning(
            "Projected label coincides with the measured basis for %d of %d (b, b1) pairs at d=%d",
            len(coinciding),
            d * d,
            d,
        )
    return IncidenceReport(d=d, pairs_checked=d * d, coinciding=coinciding)


def reduced_density(psi: StateVector, particle: Particle) -> DensityMatrix:
    """Reduced state of ``particle`` after tracing out the other one."""

    d = int(round(np.sqrt(psi.dim)))
    if d * d != psi.dim:
        raise PuebError(f"state of dimension {psi.dim} is not bipartite d x d")
    rho = np.outer(psi.amps, psi.amps.conj())
    return DensityMatrix(partial_trace(rho, d, keep=particle))


def entanglement_deviation(psi: StateVector) -> float:
    """Max deviation of both reduced density matrices from I/d."""

    d = int(round(np.sqrt(psi.dim)))
    target = np.eye(d) / d
    return max(max_abs(reduced_density(psi, p).entries - target) for p in ("mu", "nu"))


# ----------------------------------------------------------------------
# Product bases
# ----------------------------------------------------------------------
def product_basis_matrix(d: int, left: Optional[int], right: Optional[int]) -> np.ndarray:
    """Columns |i>_mu |j>_nu at index i*d + j; None selects the computational basis.

    ``product_basis_matrix(d, None, b)`` is {|n>|b;c>} and
    ``product_basis_matrix(d, b, None)`` is {|b;c>|n>}.
    """

    def single(label: Optional[int]) -> np.ndarray:
        return (computational_basis(d) if label is None else structured_basis(d, label)).matrix()

    return np.kron(single(left), single(right))


def product_mub_deviation(d: int) -> Dict[str, float]:
    """Max deviation from 1/d of the product-basis pairs described as mutually unbiased."""

    mixed = 0.0
    for b1 in range(d):
        for b2 in range(d):
            overlaps = dagger(product_basis_matrix(d, None, b1)) @ product_basis_matrix(d, b2, None)
            mixed = max(mixed, max_abs(np.abs(overlaps) - 1.0 / d))
    computational = product_basis_matrix(d, None, None)
    both = 0.0
    for b1 in range(d):
        for b2 in range(d):
            overlaps = dagger(product_basis_matrix(d, b1, b2)) @ computational
            both = max(both, max_abs(np.abs(overlaps) - 1.0 / d))
    return {"left_vs_right": mixed, "structured_vs_computational": both}


# ----------------------------------------------------------------------
# Operator classification
# ----------------------------------------------------------------------
def classify_label(d: int, lab: TwoPartyLabel) -> FamilyTag:
    """Assign (X^m1 Z^l1)_mu (X^m2 Z^l2)_nu to its family."""

    m1, l1, m2, l2 = lab.m1 % d, lab.l1 % d, lab.m2 % d, lab.l2 % d
    if m1 and m2:
        return FamilyTag(variant="both_x", b1=l1 * _inv(m1, d) % d, b2=l2 * _inv(m2, d) % d, m1=m1, m2=m2)
    if m2:
        return FamilyTag(variant="z_left", b1=l1, b2=l2 * _inv(m2, d) % d, m2=m2)
    if m1:
        return FamilyTag(variant="z_right", b1=l1 * _inv(m1, d) % d, b2=l2, m1=m1)
    return FamilyTag(variant="both_z", b1=l1, b2=l2)


def reparameterize(d: int, lab: TwoPartyLabel) -> Tuple[int, int, int, int]:
    """(s, b, m, m1) of a both-X monomial: s m1 = m2, s m = b1, l2 = b m2 - m m1."""

    m1, l1, m2, l2 = lab.m1 % d, lab.l1 % d, lab.m2 % d, lab.l2 % d
    if not (m1 and m2):
        raise PuebError(f"{lab} is not in the both-X family")
    s = m2 * _inv(m1, d) % d
    b1 = l1 * _inv(m1, d) % d
    m = b1 * _inv(s, d) % d
    b = (l2 + m * m1) * _inv(m2, d) % d
    return s, b, m, m1


def cluster_labels(d: int, s: int, b: int) -> List[TwoPartyLabel]:
    """Monomial labels of (X_mu (X^s Z^sb)_nu (Z^s_mu Z^-1_nu)^m)^m1, up to phase."""

    return [
        TwoPartyLabel.reduced(d, m1, s * m * m1, s * m1, (s * b - m) * m1)
        for m in range(d)
        for m1 in range(1, d)
    ]


def cluster_operators(d: int, s: int, b: int) -> np.ndarray:
    """The d^2 commuting unitaries of one (s, b) cluster, identity first.

    Members are built as matrix powers of X_mu (X^s Z^sb)_nu (Z^s_mu Z^-1_nu)^m
    and of Z^s_mu Z^-1_nu, not from the classification labels.
    """

    shift = _shift_operator(d, s, b)
    zz = _zz_operator(d, s)
    ops = [np.eye(d * d, dtype=complex)]
    for m in range(d):
        generator = shift @ np.linalg.matrix_power(zz, m)
        ops.extend(np.linalg.matrix_power(generator, m1) for m1 in range(1, d))
    ops.extend(np.linalg.matrix_power(zz, r) for r in range(1, d))
    return np.stack(ops)


def verify_cluster(d: int, s: int, b: int, tol: Optional[float] = None) -> ClusterReport:
    """Pairwise commutators, Hilbert-Schmidt products and diagonality in |b,s;c1,c2>."""

    tol = _tol(tol)
    ops = cluster_operators(d, s, b)
    size, dim = ops.shape[0], ops.shape[1]
    max_comm = 0.0
    for i in range(size - 1):
        rest = ops[i + 1 :]
        max_comm = max(max_comm, max_abs(ops[i] @ rest - rest @ ops[i]))
    hs = np.einsum("aij,bij->ab", ops, ops.conj())
    offdiag = max_abs(hs - np.diag(np.diag(hs)))
    diag_dev = max_abs(np.diag(hs) - dim)
    v = entangled_basis(d, b, s).matrix()
    in_basis = dagger(v)[None] @ ops @ v[None]
    mask = ~np.eye(dim, dtype=bool)
    basis_offdiag = max_abs(in_basis[:, mask])
    return ClusterReport(
        s=s,
        b=b,
        size=size,
        max_commutator=max_comm,
        max_hs_offdiag=offdiag,
        max_hs_diag_dev=diag_dev / dim,
        max_offdiag_in_basis=basis_offdiag,
        passed=size == d * d and max(max_comm, offdiag / dim, diag_dev / dim, basis_offdiag) < tol,
    )


def expected_family_sizes(d: int) -> Dict[str, int]:
    return {
        "both_x": (d * (d - 1)) ** 2,
        "z_left": d * d * (d - 1),
        "z_right": d * d * (d - 1),
        "both_z": d * d,
    }


def z_partition_sizes(d: int) -> Dict[str, int]:
    """Split of the non-identity Z_mu Z_nu monomials into Z^sr_mu Z^-r_nu, Z^s_mu and Z^s_nu."""

    sizes: Counter = Counter()
    for l1, l2 in itertools.product(range(d), repeat=2):
        if l1 and l2:
            sizes["correlated"] += 1
        elif l1:
            sizes["mu_only"] += 1
        elif l2:
            sizes["nu_only"] += 1
    return {"correlated": sizes["correlated"], "mu_only": sizes["mu_only"], "nu_only": sizes["nu_only"]}


def classify_all(
    d: int, *, check_clusters: bool = True, tol: Optional[float] = None
) -> PartitionReport:
    """Partition all d^4 two-particle monomials and verify the counting claims."""

    _require_odd_prime(d)
    failures: List[str] = []
    owners: Dict[FamilyTag, TwoPartyLabel] = {}
    sizes: Counter = Counter()
    params: Dict[Tuple[int, int, int, int], TwoPartyLabel] = {}
    both_x: set = set()

    for exps in itertools.product(range(d), repeat=4):
        lab = TwoPartyLabel(m1=exps[0], l1=exps[1], m2=exps[2], l2=exps[3])
        tag = classify_label(d, lab)
        if tag in owners:
            failures.append(f"{lab} and {owners[tag]} share family tag {tag}")
        owners[tag] = lab
        sizes[tag.variant] += 1
        if tag.variant == "both_x":
            both_x.add(lab)
            key = reparameterize(d, lab)
            if key in params:
                failures.append(f"{lab} and {params[key]} share (s, b, m, m1) = {key}")
            params[key] = lab

    expected = expected_family_sizes(d)
    family_sizes = {name: sizes[name] for name in expected}
    for name, count in family_sizes.items():
        if count != expected[name]:
            failures.append(f"family {name} has {count} members, expected {expected[name]}")

    covered = {lab for s in range(1, d) for b in range(d) for lab in cluster_labels(d, s, b)}
    in_range = all(1 <= s < d and 0 <= b < d and 0 <= m < d and 1 <= m1 < d for s, b, m, m1 in params)
    bijective = len(params) == expected["both_x"] and covered == both_x and in_range
    if not bijective:
        failures.append("reparameterization (s, b, m, m1) does not cover the both-X family exactly once")

    z_sizes = z_partition_sizes(d)
    if sum(z_sizes.values()) + 1 != expected["both_z"]:
        failures.append("Z partition plus identity does not reproduce the both-Z family")
    total = sum(family_sizes.values())
    if total != d**4:
        failures.append(f"families cover {total} monomials, expected {d ** 4}")

    clusters: List[ClusterReport] = []
    if check_clusters:
        for s in range(1, d):
            for b in range(d):
                report = verify_cluster(d, s, b, tol)
                clusters.append(report)
                if not report.passed:
                    failures.append(f"cluster (s={s}, b={b}) fails commutation/orthogonality")
        logger.info("Verified %d operator clusters at d=%d", len(clusters), d)

    for failure in failures:
        logger.warning("Classification failure at d=%d: %s", d, failure)
    return PartitionReport(
        d=d,
        family_sizes=family_sizes,
        expected_sizes=expected,
        z_partition_sizes=z_sizes,
        total=total,
        reparameterization_bijective=bijective,
        clusters=clusters,
        failures=failures,
        passed=not failures,
    )


# ----------------------------------------------------------------------
# Prime-power companion states
# ----------------------------------------------------------------------
def ent_state_pp(f: Field, b: int, c: int) -> StateVector:
    """d^-1/2 sum_n omega_p^tr[(b/2) n^2 + c n] |n>_mu |n>_nu, labels as element indices."""

    single = mub_state_pp(f, b, c).amps
    amps = np.zeros(f.d * f.d, dtype=complex)
    n = np.arange(f.d)
    amps[n * f.d + n] = single
    return StateVector(amps)


def project_ent_pp(
    f: Field, b: int, c: int, b1: int, c1: int, tol: Optional[float] = None
) -> Tuple[np.ndarray, ProjectionResult]:
    """Contract the mu slot of the prime-power entangled state with <b1;c1|.

    The result should be (1/sqrt(d)) |b2;c2> with b1 + b2 = b and c1 + c2 = c.
    """

    tol = _tol(tol, strict=False)
    d = f.d
    psi = ent_state_pp(f, b, c).amps.reshape(d, d)
    projected = mub_state_pp(f, b1, c1).amps.conj() @ psi
    eb, ec = f.element(_index(f, b)), f.element(_index(f, c))
    target_b = (eb - f.element(_index(f, b1))).index
    target_c = (ec - f.element(_index(f, c1))).index
    reference = mub_state_pp(f, target_b, target_c).amps / np.sqrt(d)
    phase, dev = align_phase(projected, reference)
    return projected, ProjectionResult(
        target_b=target_b,
        target_c=target_c,
        phase=complex_pair(phase),
        max_dev=dev,
        passed=dev < tol,
        labels_differ=target_b != _index(f, b1),
    )
