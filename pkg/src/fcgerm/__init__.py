"""Fast-contracting homology of PL germs."""

__version__ = "0.1.0"

from .errors import Inconclusive, InputError  # noqa: E402
from .complex import Chain, SimplicialComplex  # noqa: E402
from .geometry import GeometricComplex  # noqa: E402
from .homology import betti_numbers, homology, induced_map, kernel_subgroup, membership  # noqa: E402
from .model import StrictTransformModel, build_model, model_from_points  # noqa: E402
from .fc import class_drop, fc_group, fc_rank_table, localize_class  # noqa: E402
from .locus import conicalness, detect_non_simple, thick_components, thin_zone  # noqa: E402
from .separating import check_sc, find_separating_set, test_fc_injectivity  # noqa: E402
from .ff import PLCycle, certify_trivial, lipschitz_bound, push_off, triviality_threshold  # noqa: E402
from .certificate import verify_certificate  # noqa: E402
from .gallery import gallery, gallery_models  # noqa: E402
from .analysis import AnalysisOptions, run_analysis  # noqa: E402
from .estimators import FcHomology, GermAnalyzer, NonSimpleLocusDetector, SeparatingSetAnalyzer  # noqa: E402
