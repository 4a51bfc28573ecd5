"""Composite Gauss-Legendre quadrature helpers.

All finite-interval integrals in the package go through panel_nodes so that
results are deterministic and the node budget is stated in one place: 64
nodes per unit interval unless a caller asks for more.
"""

import numpy as np

_rule_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _rule_cache:
        _rule_cache[n] = np.polynomial.legendre.leggauss(n)
    return _rule_cache[n]


def panel_nodes(a: float, b: float, nodes_per_unit: int = 64,
                max_panel: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for int_a^b, panels no wider than max_panel.

    Each panel carries an order-16 rule; the per-unit node budget is met by
    shrinking panels, which keeps the rule well conditioned on long intervals.
    """
    if not b > a:
        raise ValueError("empty interval")
    order = 16
    per_panel_width = order / nodes_per_unit
    width = min(max_panel, per_panel_width)
    n_panels = max(1, int(np.ceil((b - a) / width)))
    edges = np.linspace(a, b, n_panels + 1)
    x0, w0 = _rule(order)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    w = (half[:, None] * w0[None, :]).ravel()
    return x, w


def integrate(f, a: float, b: float, nodes_per_unit: int = 64):
    x, w = panel_nodes(a, b, nodes_per_unit)
    return np.sum(w * f(x))
