"""Statistics of generalized Gaussian laws and of sums of two of them.

Single-law densities, tail functions, characteristic and moment generating
functions, moments, cumulants and kurtosis live in :mod:`gengauss.ggd`; the
sum of two independent laws in :mod:`gengauss.ggsum`; the Fox H machinery
behind the closed forms in :mod:`gengauss.specfun`; shape-factor
approximations in :mod:`gengauss.approx`; and brute-force reference routes
in :mod:`gengauss.oracle`.  ``gengauss.cli`` exposes everything on the
command line.
"""

from ._kernels import backend_name
from .approx import (
    ShapeEstimate,
    TailConfig,
    h_func,
    kurtosis_target,
    solve_gamma_cdf,
    solve_gamma_kurtosis,
    solve_gamma_tail,
    tail_objective,
)
from .ggd import (
    CumulantTable,
    GGDParams,
    cumulant_table,
    ggd_cdf,
    ggd_cf,
    ggd_cumulant,
    ggd_kurtosis,
    ggd_mgf,
    ggd_moment,
    ggd_pdf,
    ggd_sample,
    q_alpha,
)
from .ggsum import (
    SumParams,
    sum_ccdf,
    sum_cdf,
    sum_cf,
    sum_cumulant,
    sum_kurtosis,
    sum_mgf,
    sum_moment,
    sum_pdf,
)
from .oracle import (
    GridSpec,
    OracleReport,
    cf_quadrature,
    conv_pdf,
    mc_statistics,
    pdf_by_cf_inversion,
)
from .specfun import (
    BivFoxHSpec,
    ContourConfig,
    FoxHSpec,
    biv_fox_h,
    fox_h,
    ln_gamma_complex,
    upper_incomplete_gamma,
)

__version__ = "0.1.0"
