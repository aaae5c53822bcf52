from __future__ import annotations

from hypothesis import HealthCheck, settings

from hollowspec.signedgraph import SignedGraph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def spider(*legs: int) -> SignedGraph:
    """All-positive tree with centre 0 and paths of the given lengths attached."""
    edges = []
    nxt = 1
    for length in legs:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt, 1))
            prev = nxt
            nxt += 1
    return SignedGraph(nxt, frozenset(edges))


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
