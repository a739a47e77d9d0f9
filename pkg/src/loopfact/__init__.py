"""Triangular factorization of polynomial SU(2) loops and the determinant formulas around it."""

from .errors import (ConsistencyError, ConvergenceError, DegenerateLoopError, DivergentIntegralError,
                     DomainError, LoopError, NumericalDegeneracyError, ParseError, TruncationError)
from .factor import (TriangularFactorization, XCoords, ZetaCoords, birkhoff_factor, factor_h,
                     factor_unipotent, l_matrix, product_loop, triple_product, x1_series_check,
                     x_from_loop, x_to_zeta, zeta_to_x)
from .iwasawa import DiskLoop, IwasawaData, build_F, recover_factors, solve_h
from .loops import (NEGATIVE, POSITIVE, CircleSampling, LaurentPoly, MatrixLoop, elementary_loop,
                    torus_loop)
from .measures import (ExponentVector, IntegralResult, closed_form_integral, criticality,
                       haar_density_word, jacobian_density, monte_carlo_integral)
from .toeplitz import (FiniteSection, SigmaValues, b_matrix, det_one_plus_bbstar, hankel_block,
                       sigma_values, toeplitz_det_product)
from .weyl import (AffineCoroot, AffineWord, cell_dimension_and_coords, diagram_automorphism,
                   exponents, haar_exponents, inversion_coroots, reflect, weyl_representative)

__version__ = "0.1.0"
