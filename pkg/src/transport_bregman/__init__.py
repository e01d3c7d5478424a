"""Transport Bregman divergences: Bregman divergences of functionals on the
Wasserstein space, evaluated in closed form for one-dimensional densities
and multivariate Gaussians."""
from .bregman import BUILTIN_POTENTIALS, ScalarPotential, conjugate_value, neglog, square, xlogx
from .density import (
    Density1D,
    GridDensity,
    displacement_interpolate,
    from_grid,
    from_quantile,
    from_samples,
    gaussian1d,
    uniform1d,
)
from .errors import DegenerateQuantileError, DomainError, NoDualPointError, QuadratureError, SupportError
from .gaussian import (
    GaussianDensity,
    classical_kl_gaussian,
    ot_map_gaussian,
    transport_js_gaussian,
    transport_kl_gaussian,
    wasserstein2_gaussian,
)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .transport1d import (
    boltzmann,
    entropy_divergence,
    interaction_energy_divergence,
    linear_energy_divergence,
    quadratic_entropy,
    transport_js_1d,
    transport_kl_1d,
    wasserstein2_1d,
)

from .bregman import bregman as bregman_divergence  # keeps the submodule name free

__version__ = "0.1.0"
