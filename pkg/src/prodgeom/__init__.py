"""Product-state manifolds of multi-qudit systems in Fano coordinates.

Decompose density matrices into Fano coefficient tensors, test product
conditions across any partition of the subsystems, and compute the
Euclidean-induced metric and curvature of the product-state manifolds.
"""

from .embedding import EmbeddingMap, ManifoldCase, build_map, coordinates_of, general_case, named_case
from .fano import (
    BlochVector,
    DensityMatrix,
    FanoTensor,
    bloch_of,
    decompose,
    marginal_bloch,
    partial_trace,
    reconstruct,
    validate,
)
from .geometry import (
    curvature,
    induced_metric,
    metric_closed_form,
    scalar_curvature,
    scalar_curvature_closed_form,
)
from .lie_basis import basis_elements, su_generators
from .partition import Partition
from .separability import classify, group_coefficients, is_product, product_residual

__version__ = "0.1.0"
