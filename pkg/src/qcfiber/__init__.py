"""qcfiber: numerical quasiconformal sewing and moduli of punctured spheres.

Subsystems: uniform complex grids with FFT Cauchy/Beurling transforms
(grid), the normalized Beltrami solver and dilatation algebra (beltrami),
normalized univalent disk functions with pre-Schwarzian coordinates (oqc),
circle homeomorphisms and qc extensions (circle), punctured spheres,
riggings and cap sewing (surfaces), Schiffer variation and the holomorphy
harness (schiffer), the fiber maps and product chart (fibration), and the
batch experiment runner (cli).
"""

from .beltrami import (BeltramiCoefficient, ConvergenceError, DilatationError,
                       DiskBump, GaussianBump, NormalizedQCMap,
                       compose_dilatation, dilatation, solve_beltrami)
from .circle import CircleMap, beurling_ahlfors, douady_earle
from .fibration import (BorderedPoint, FiberPoint, RiggedPoint,
                        attach_rigging, bordered_point,
                        bordered_point_from_rigging, fiber_distance,
                        forget_rigging, perturbed_rigging, product_chart,
                        recover_rigging, rigged_sewing_map, schiffer_section,
                        sewing_map, standard_rigging)
from .grid import (ComplexField, ComplexGrid, GridError, SupportError,
                   beurling_transform, cauchy_eval, cauchy_transform,
                   make_grid)
from .mobius import INF, Mobius, cross_ratio_points, is_inf
from .oqc import (DiskFunction, PowerSeries, PreSchwarzianCoords,
                  coords_on_line, disk_schwarz_check, embed_coords,
                  geometric_series, hyperbolic_norm, named_disk_function,
                  point_evaluation, pointwise_schwarz_margin, pre_schwarzian,
                  reconstruct, seeded_disk_corpus)
from .schiffer import (SchifferCell, SchifferParams, cross_ratio,
                       holomorphy_residual, schiffer_beltrami,
                       schiffer_variation)
from .surfaces import (BorderedSphereData, BoundaryParametrization, ChartedCap,
                       PunctureChart, PuncturedSphere, RiggedSphere,
                       SewOptions, affine_cap, bordered_from_rigging,
                       charted_rigging, extend_quasisymmetric,
                       rigging_from_charted, scene_from_json, scene_to_json,
                       sew_caps, sew_caps_with_report, tau_from_cap,
                       tau_twisted, validate_rigging)

__version__ = "0.1.0"
