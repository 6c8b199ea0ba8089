"""Seeded randomized verification campaigns over small exact instances."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..corr_model import TabulatedModel
from .channels import dpi_property
from .chain import INEQUALITY_TOL, check_bound, check_chain
from .cq import cq_trace_distance, gamma_map, ideal_state_dense, random_cq_state, random_density_matrix
from .distances import mixed_trace_distance
from .source import DEFAULT_DIM_CAP, ResourceLimitError, SourceSpec

EXACT_TOL = 1e-12
EPS_RANGE = (1e-6, 0.25)


@dataclass(frozen=True)
class Instance:
    J: int
    N: int
    l_e: int
    eps: tuple
    probs: tuple
    phase_kick: tuple = None

    def model(self):
        return TabulatedModel(self.eps)

    def source(self):
        return SourceSpec.from_model(self.model(), self.J, self.N - 1, probs=np.array(self.probs),
                                     phase_kick=None if self.phase_kick is None else np.array(self.phase_kick))


@dataclass(frozen=True)
class InstanceResult:
    index: int
    J: int
    N: int
    l_e: int
    phase_kick: bool
    T_exact: float
    d_bound: float
    margin: float
    bound_pass: bool
    phase_gap: float
    phase_pass: bool
    chain_rounds: int
    chain_pass: bool
    printed_exponent_ok: bool
    gamma_pass: bool
    dpi_pass: bool

    @property
    def passed(self) -> bool:
        return self.bound_pass and self.phase_pass and self.chain_pass and self.gamma_pass and self.dpi_pass

    def as_row(self) -> dict:
        row = asdict(self)
        row["pass"] = self.passed
        return row


def random_instance(rng, max_N: int = 8, max_J: int = 4, phase_kick_prob: float = 0.5) -> Instance:
    """Draw ``J``, ``N``, ``l_e``, a log-uniform ``eps`` profile and setting probabilities."""
    J = int(rng.integers(2, max_J + 1))
    N = int(rng.integers(2, max_N + 1))
    l_e = int(rng.integers(0, N))
    lo, hi = np.log(EPS_RANGE[0]), np.log(EPS_RANGE[1])
    eps = tuple(float(e) for e in np.exp(rng.uniform(lo, hi, size=N)))
    probs = tuple(float(p) for p in rng.dirichlet(np.ones(J)))
    kick = None
    if rng.random() < phase_kick_prob:
        kick = tuple(float(a) for a in rng.uniform(0, 2 * np.pi, size=N - 1))
    return Instance(J=J, N=N, l_e=l_e, eps=eps, probs=probs, phase_kick=kick)


def check_gamma(a, b, tol: float = INEQUALITY_TOL, exact_tol: float = EXACT_TOL) -> dict:
    """Weight preservation, idempotence, agreement with the direct ideal state, contraction."""
    ga, gb = gamma_map(a), gamma_map(b)
    weight_gap = abs(sum(e.weight for e in ga.entries) - 1.0)
    idem_gap = cq_trace_distance(gamma_map(ga), ga)
    labels = sorted(set(ga.labels()) | set(a.labels()))
    direct_gap = mixed_trace_distance(ga.to_dense(labels), ideal_state_dense(a, labels))
    before = cq_trace_distance(a, b)
    after = cq_trace_distance(ga, gb)
    return {
        "weight_gap": weight_gap,
        "idempotence_gap": idem_gap,
        "direct_gap": direct_gap,
        "before": before,
        "after": after,
        "passed": (weight_gap <= exact_tol and idem_gap <= exact_tol
                   and direct_gap <= exact_tol and after <= before + tol),
    }


def check_random_dpi(rng, max_dim: int = 8) -> bool:
    dim = int(rng.integers(1, max_dim + 1))
    rho = random_density_matrix(dim, rng, int(rng.integers(1, dim + 1)))
    sigma = random_density_matrix(dim, rng, int(rng.integers(1, dim + 1)))
    return dpi_property(rho, sigma, int(rng.integers(2**63)))[2]


def run_instance(index: int, inst: Instance, rng, sequences: int = 2,
                 cap: int = DEFAULT_DIM_CAP, bound_scale: float = 1.0) -> InstanceResult:
    spec = inst.source()
    bound = check_bound(spec, inst.model(), inst.N, inst.l_e, cap=cap, bound_scale=bound_scale)
    phase_gap = abs(bound.overlap_dense - bound.overlap_formula)

    chain_ok, printed_ok, rounds = True, True, 0
    for _ in range(sequences):
        settings = rng.integers(0, inst.J, size=inst.N)
        for k in range(inst.l_e + 2, inst.N + 1):
            report = check_chain(spec, inst.N, inst.l_e, k, settings, global_overlap=bound.overlap_dense)
            chain_ok &= report.passed
            printed_ok &= report.printed_exponent_ok
            rounds += 1

    eve_dim = int(rng.integers(1, 5))
    max_K = int(rng.integers(0, 4))
    gamma = check_gamma(random_cq_state(rng, max_K, eve_dim), random_cq_state(rng, max_K, eve_dim))

    return InstanceResult(
        index=index,
        J=inst.J,
        N=inst.N,
        l_e=inst.l_e,
        phase_kick=inst.phase_kick is not None,
        T_exact=bound.T_exact,
        d_bound=bound.d_bound,
        margin=bound.margin,
        bound_pass=bound.passed,
        phase_gap=phase_gap,
        phase_pass=phase_gap <= INEQUALITY_TOL,
        chain_rounds=rounds,
        chain_pass=bool(chain_ok),
        printed_exponent_ok=bool(printed_ok),
        gamma_pass=bool(gamma["passed"]),
        dpi_pass=check_random_dpi(rng),
    )


def run_campaign(seed: int, instances: int, max_N: int = 8, max_J: int = 4,
                 cap: int = DEFAULT_DIM_CAP, bound_scale: float = 1.0) -> list:
    """Run ``instances`` independent seeded instances; results come back in index order."""
    if instances < 1:
        raise ValueError("a campaign needs at least one instance")
    if max_N < 2 or max_J < 2:
        raise ValueError("need max_N >= 2 and max_J >= 2")
    if (2 * max_J) ** max_N > cap:
        raise ResourceLimitError(f"(2*max_J)^max_N = {(2 * max_J) ** max_N} exceeds the cap {cap}")
    children = np.random.SeedSequence(seed).spawn(instances)
    results = []
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        inst = random_instance(rng, max_N, max_J)
        results.append(run_instance(i, inst, rng, cap=cap, bound_scale=bound_scale))
    return results
