"""Error of the 1-D quadrature against Gaussian closed forms.

Compares the clipped interval alone (tail_nodes=0) with the clipped interval
plus Gauss-Laguerre tails, across node counts and both body schemes.

    python scripts/quadrature_convergence.py > results/quadrature.csv
"""
import itertools
import sys

from transport_bregman import density as dens
from transport_bregman import gaussian as gauss
from transport_bregman import transport1d as t1d
from transport_bregman.quadrature import QuadratureConfig

SIGMAS = (0.5, 1.0, 2.0, 3.0)
FUNCS = (
    ("tkl", t1d.transport_kl_1d, gauss.transport_kl_gaussian),
    ("tjs", t1d.transport_js_1d, gauss.transport_js_gaussian),
    ("w2", t1d.wasserstein2_1d, gauss.wasserstein2_gaussian),
)


def worst_error(cfg, quad, closed):
    err = 0.0
    for sx, sy in itertools.product(SIGMAS, SIGMAS):
        p, q = dens.gaussian1d(0, sx * sx), dens.gaussian1d(0, sy * sy)
        X, Y = gauss.GaussianDensity.scalar(sx * sx), gauss.GaussianDensity.scalar(sy * sy)
        err = max(err, abs(quad(p, q, cfg) - closed(X, Y)))
    return err


def main():
    print("scheme,nodes,tail_nodes,divergence,max_abs_error")
    for scheme, nodes, tails in itertools.product(("gauss-legendre", "midpoint"), (256, 1024, 2048), (0, 32)):
        cfg = QuadratureConfig(nodes=nodes, scheme=scheme, tail_nodes=tails)
        for name, quad, closed in FUNCS:
            print(f"{scheme},{nodes},{tails},{name},{worst_error(cfg, quad, closed):.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
