"""Pullbacks of a simplicial map along simplices and the homology-fibration test.

For ``f: X -> Y`` and an ``m``-simplex ``sigma`` of ``Y`` the pullback
``f^{-1}(sigma)`` has as ``n``-simplices the pairs ``(x, theta)`` with
``theta: [n] -> [m]`` monotone and ``f(x) = theta^*(sigma)``.  A monotone
``alpha: [k] -> [m]`` with ``alpha^*(tau) = sigma`` induces
``f^{-1}(sigma) -> f^{-1}(tau)``, ``(x, theta) -> (x, alpha ∘ theta)``.
The map ``f`` passes the test when all these induced maps are homology
isomorphisms.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import TruncationError
from .homology import homology_groups, is_homology_equivalence
from .simplicial import SimplicialMap, SimplicialSet, monotone_maps


def pullback_over_simplex(f, m, sigma, max_degree=None):
    """``f^{-1}(sigma)`` for an ``m``-simplex ``sigma`` (an id) of the target."""
    X, Y = f.source, f.target
    top = f.max_degree if max_degree is None else min(max_degree, f.max_degree)
    if not 0 <= sigma < Y.count(m):
        raise ValueError(f"no simplex {sigma} in degree {m}")
    simplices = []
    for n in range(top + 1):
        level = []
        for theta in monotone_maps(n, m):
            want = Y.operator(theta, m)[sigma]
            for x in np.nonzero(f.maps[n] == want)[0]:
                level.append((int(x), theta))
        level.sort()
        simplices.append(level)

    def face(n, i, s):
        x, theta = s
        return (int(X.face(n, i)[x]), theta[:i] + theta[i + 1:])

    def degeneracy(n, j, s):
        x, theta = s
        return (int(X.degeneracy(n, j)[x]), theta[: j + 1] + theta[j:])

    return SimplicialSet.from_labels(simplices, face, degeneracy,
                                     name=f"f^-1({Y.label(m, sigma)})")


def pullback_map(source_pullback, target_pullback, alpha):
    """The map induced by ``alpha`` between two pullbacks."""
    def fn(n, s):
        x, theta = s
        return (x, tuple(alpha[v] for v in theta))
    return SimplicialMap.from_function(source_pullback, target_pullback, fn)


@dataclass
class FibrationReport:
    degree_budget: int
    checks: list = field(default_factory=list)
    complete: bool = True
    skipped: int = 0

    @property
    def passed(self):
        return all(c["equivalence"] for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c["equivalence"]]

    def to_json(self):
        return {"degree_budget": self.degree_budget, "complete": self.complete,
                "checked": len(self.checks), "not_checked": self.skipped,
                "passed": self.passed, "failures": self.failures[:10]}


def check_homology_fibration(f, degree_budget, max_checks=None):
    """Test every induced map ``f^{-1}(sigma) -> f^{-1}(tau)`` for homology equivalence.

    ``sigma`` and ``tau`` range over simplices of the target in degrees up to
    ``degree_budget`` and ``alpha`` over all monotone maps with
    ``alpha^*(tau) = sigma``.  Pullbacks are truncated at ``degree_budget + 1``
    so homology is exact through ``degree_budget``.  When ``max_checks`` cuts
    the enumeration short the report says so (``complete = False``).
    """
    Y = f.target
    need = degree_budget + 1
    if f.max_degree < need:
        raise TruncationError(f"fibration test through degree {degree_budget} needs the map "
                              f"through degree {need}")
    report = FibrationReport(degree_budget)
    cache = {}

    def pull(m, s):
        key = (m, s)
        if key not in cache:
            cache[key] = pullback_over_simplex(f, m, s, need)
        return cache[key]

    triples = []
    for k in range(degree_budget + 1):
        for tau in range(Y.count(k)):
            for m in range(degree_budget + 1):
                for alpha in monotone_maps(m, k):
                    sigma = int(Y.operator(alpha, k)[tau])
                    triples.append((m, sigma, k, tau, alpha))
    for m, sigma, k, tau, alpha in triples:
        if max_checks is not None and len(report.checks) >= max_checks:
            report.complete = False
            report.skipped += 1
            continue
        src, tgt = pull(m, sigma), pull(k, tau)
        ok, witness = is_homology_equivalence(pullback_map(src, tgt, alpha), degree_budget)
        entry = {"sigma": [m, sigma], "tau": [k, tau], "alpha": list(alpha), "equivalence": ok}
        if not ok:
            q = witness["failing_degree"]
            entry["failing_degree"] = q
            entry["source_homology"] = str(homology_groups(src, degree_budget)[q])
            entry["target_homology"] = str(homology_groups(tgt, degree_budget)[q])
        report.checks.append(entry)
    return report
