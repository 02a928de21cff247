"""Exact snakes of real morsifications from Newton-Puiseux roots."""

from .errors import *  # noqa: F401,F403
from .exact import QQ, FieldElement, NumberField, Rational
from .morse import (AreaSeries, InjectivityVerdict, IntegrationTable, MorsificationReport, Snake, Witness,
                    analyze, area_series, check_injectivity, check_discriminant_match, discriminant_tree,
                    integrated_tree, integration_table, integration_tables, pairwise_signs, sigma,
                    sigma_map, sign_of_difference, snake)
from .oracle import OracleResult, cross_check, numeric_snake
from .puiseux import INFINITY, BivarPoly, PuiseuxPoly, compose, eval_exact, integrate_y, lc, product_from_roots, real_less, val
from .trees import (BasicInterval, ContactTree, RootSystem, WedgeMap, build_contact_tree, build_embedded_trees,
                    is_planar_order, wedge, wedge_map)
from .textio import ProblemSpec, emit_dot, emit_report, format_problem, parse_input

__version__ = "0.1.0"
