"""End-to-end self-checks: oracle equivalence, identities, enumerations.

Each check returns (name, ok, detail).  The CLI ``verify`` subcommand
runs them all and exits nonzero on the first failure; the test suite
runs the heavier variants with the tolerances pinned there.
"""

from __future__ import annotations

import numpy as np

from . import analytics, purity, states, stats
from .bitcomb import Bipartition
from .states import EnsembleSpec, PureState

CHECK_ENSEMBLES = ("haar", "butson:2", "butson:3", "butson:4", "hadamard")


def spec_for(label: str, n: int, seed: int = 0, stream: int = 0) -> EnsembleSpec:
    if label == "haar":
        return EnsembleSpec.haar(n, seed, stream)
    if label == "hadamard":
        return EnsembleSpec.hadamard_typical(n, seed, stream)
    if label.startswith("butson:"):
        return EnsembleSpec.butson(n, int(label.split(":", 1)[1]), seed, stream)
    raise ValueError(f"unknown ensemble label {label!r}")


def all_bipartitions(n: int) -> list[Bipartition]:
    return [Bipartition(m, n) for m in range(1, (1 << n) - 1)]


def canonical_bipartitions(n: int) -> list[Bipartition]:
    """One representative per split: masks with n_a <= n/2, tie to qubit 1."""
    out = []
    for m in range(1, (1 << n) - 1):
        b = Bipartition(m, n)
        if b.n_a < b.n_abar or (b.n_a == b.n_abar and (m & 1)):
            out.append(b)
    return out


def check_purity_oracles(states_per_ensemble: int = 20, n_lo: int = 2, n_hi: int = 6,
                         seed: int = 11, tol: float = 1e-10):
    """|purity_direct - purity_rdm| on random states, every bipartition."""
    worst = 0.0
    for n in range(n_lo, n_hi + 1):
        bips = canonical_bipartitions(n)
        for label in CHECK_ENSEMBLES:
            amps = states.sample_block(spec_for(label, n, seed), 0, states_per_ensemble)
            for row in amps:
                state = PureState(n, row)
                for bip in bips:
                    got = purity.purity_rdm(state, bip).value
                    want = purity.purity_direct(state, bip).value
                    worst = max(worst, abs(got - want))
    return "purity_direct_vs_rdm", worst < tol, f"max |diff| = {worst:.3e}"


def check_purity_me_oracles(states_per_ensemble: int = 20, n_lo: int = 2, n_hi: int = 5,
                            seed: int = 12, tol: float = 1e-10):
    """|purity_me_direct - purity_me| on random states."""
    worst = 0.0
    for n in range(n_lo, n_hi + 1):
        for label in CHECK_ENSEMBLES:
            amps = states.sample_block(spec_for(label, n, seed), 0, states_per_ensemble)
            fast = purity.purity_me_batch(amps, n)
            for row, got in zip(amps, fast):
                want = purity.purity_me_direct(PureState(n, row)).value
                worst = max(worst, abs(got - want))
    return "purity_me_direct_vs_me", worst < tol, f"max |diff| = {worst:.3e}"


def check_coupling_identity(n_max: int = 30):
    """f2star = f2 - 2 h2 + 4 exactly, in rational arithmetic."""
    for n in range(2, n_max + 1):
        lhs = analytics.f2star_sum(n).exact
        rhs = analytics.f2_sum(n).exact - 2 * analytics.h2_sum(n).exact + 4
        if lhs != rhs:
            return "f2star_identity", False, f"mismatch at n={n}: {lhs} != {rhs}"
    return "f2star_identity", True, f"exact for n = 2..{n_max}"


def check_coupling_bruteforce(n_max: int = 8, tol: float = 1e-9):
    """Closed sums equal the direct squared-coupling sums."""
    worst = 0.0
    for n in range(2, n_max + 1):
        worst = max(worst, abs(analytics.f2_sum(n).value - analytics.f2_bruteforce(n)))
        worst = max(worst, abs(analytics.f2star_sum(n).value - analytics.f2star_bruteforce(n)))
        worst = max(worst, abs(analytics.h2_sum(n).value - analytics.h2_bruteforce(n)))
    return "coupling_sums_bruteforce", worst < tol, f"max |diff| = {worst:.3e}"


def check_distance_forms(n_max: int = 20, tol: float = 1e-12):
    """Distance-indexed sums reproduce the direct closed sums."""
    worst = 0.0
    for n in range(2, n_max + 1):
        f_rel = abs(analytics.f2_by_distance(n).value / analytics.f2_sum(n).value - 1.0)
        h_rel = abs(analytics.h2_by_distance(n).value / analytics.h2_sum(n).value - 1.0)
        worst = max(worst, f_rel, h_rel)
    return "distance_forms", worst < tol, f"max rel diff = {worst:.3e}"


def enumeration_stats(n: int, q: int, statistic: str = "piME") -> stats.CumulantSummary:
    """Population summary of a statistic over the whole (n, q) ensemble."""
    dim = 1 << n
    roots = states.roots_of_unity(q)
    scale = 1.0 / np.sqrt(dim)
    summary = stats.CumulantSummary()
    mask = (1 << (n // 2)) - 1
    for expts in states.enumerate_exponent_blocks(n, q):
        amps = roots[expts] * scale
        if statistic == "piME":
            vals = purity.purity_me_batch(amps, n)
        else:
            vals = purity.purity_batch(amps, n, Bipartition(mask, n))
        summary = stats.merge(summary, stats.from_values(vals))
    return summary


def check_enumeration(n: int, q: int, statistic: str = "piME", tol: float = 1e-12):
    """Exhaustive population mean/variance against the closed forms."""
    summary = enumeration_stats(n, q, statistic)
    if statistic == "piME":
        mean = analytics.mu_me_hadamard(n).value
        var = analytics.sigma2_me_hadamard(n, q).value
    else:
        mean = analytics.mu_a_hadamard(n, n // 2).value
        var = analytics.sigma2_a_hadamard(n, n // 2, q).value
    dmean = abs(summary.mean - mean)
    dvar = abs(summary.variance(ddof=0) - var)
    ok = dmean < tol and dvar < tol
    name = f"enumeration_n{n}_q{q}_{statistic}"
    return name, ok, f"|dmean| = {dmean:.3e}, |dvar| = {dvar:.3e} over {summary.count} states"


def check_paper_constants():
    """The hypergraph bound distances round to 2.9, 3.2, 7.5, 8.4, 19."""
    shown = []
    for n in range(4, 8):
        shown.append(round(analytics.k_distance(n, 2).value, 1))
    shown.append(round(analytics.k_distance(8, 2).value))
    ok = shown == [2.9, 3.2, 7.5, 8.4, 19]
    return "k_distance_values", ok, f"n=4..8 -> {shown}"


def check_variance_orderings(n_max: int = 30):
    """Mean and variance orderings between the ensembles, exactly."""
    for n in range(2, n_max + 1):
        if not analytics.mu_me_hadamard(n).exact < analytics.mu_me_haar(n).exact:
            return "orderings", False, f"mean ordering fails at n={n}"
        s_hyper = analytics.sigma2_me_hadamard(n, 2).exact
        s_flat = analytics.sigma2_me_hadamard(n, 3).exact
        if s_hyper != 2 * s_flat:
            return "orderings", False, f"hypergraph doubling fails at n={n}"
        if n >= 4 and not s_flat < analytics.sigma2_me_haar(n).exact:
            return "orderings", False, f"variance ordering fails at n={n}"
    return "orderings", True, f"exact for n = 2..{n_max}"


def run_checks(progress=None) -> list[tuple[str, bool, str]]:
    """The full battery, sized to finish quickly on one core."""
    jobs = [
        lambda: check_purity_oracles(states_per_ensemble=10, n_hi=5),
        lambda: check_purity_me_oracles(states_per_ensemble=10),
        check_coupling_identity,
        lambda: check_coupling_bruteforce(n_max=8),
        check_distance_forms,
        lambda: check_enumeration(3, 2, "piME"),
        lambda: check_enumeration(3, 3, "piME"),
        lambda: check_enumeration(3, 2, "piA"),
        lambda: check_enumeration(4, 2, "piME"),
        check_paper_constants,
        check_variance_orderings,
    ]
    results = []
    for job in jobs:
        res = job()
        results.append(res)
        if progress is not None:
            progress(res)
    return results
