"""Concrete finite group arithmetic: fields, elements, catalog groups, homomorphisms."""

from .elements import (Matrix, Permutation, ProjectiveClass, Residue, element_order, is_scalar,
                       parse_matrix, parse_permutation, power)
from .fields import GF, FiniteField, is_prime, is_prime_power, prime_power
from .groups import (ConcreteGroup, TargetGroup, gl_order, m1_exact, m1_scan, max_order_alt,
                     max_order_sym, order_histogram, parse_element, parse_target, psl_order,
                     realize, sl_order)
from .homs import Homomorphism, evaluate, evaluate_images, is_homomorphism

__all__ = [
    "GF", "FiniteField", "is_prime", "is_prime_power", "prime_power",
    "Matrix", "Permutation", "ProjectiveClass", "Residue", "element_order", "is_scalar",
    "parse_matrix", "parse_permutation", "power",
    "ConcreteGroup", "TargetGroup", "gl_order", "sl_order", "psl_order", "m1_exact", "m1_scan",
    "max_order_alt", "max_order_sym", "order_histogram", "parse_element", "parse_target", "realize",
    "Homomorphism", "evaluate", "evaluate_images", "is_homomorphism",
]
