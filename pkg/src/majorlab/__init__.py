"""Majorization-type preorders on the probability simplex and their random laws."""

__version__ = "0.1.0"

from .core import (EPS_FEAS, EPS_SUM, DistributionSpec, MonotoneProfile, RngStream,
                   partial_sums, prob_vector, profile, sample, sample_dirichlet,
                   sample_uniform)
from .orders import (MAJ, UT_MAJ, WEAK_MAJ, WEAK_UT_MAJ, ExtremePointSet, Relation,
                     compare, compare_batch, extreme_points, hull_membership_2d,
                     sdominance)
from .conversion import (ConversionResult, pi_maj, pi_maj_batch, pi_ut, pi_ut_batch,
                         verify_witness)
from .exact import (BernsteinDiag, bernstein_diag, bernstein_table, bolshev, dirichlet_bound,
                    exact_cdf_pi_ut, exact_p_comparable_ut, example_cdf_n3_alpha2)
from .montecarlo import (EcdfTable, ExperimentConfig, ExperimentResult, Functional,
                         bridge_persistence_check, convergence_study, ecdf_pi,
                         estimate_comparability)
