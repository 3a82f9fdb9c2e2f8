"""Generalized q-Stirling numbers: exact normal ordering under
UV = qVU + hV^s, rook models, closed forms and q-Bell identities."""

from .scalar import H, ONE, Q, ZERO, RationalPoint, Scalar, evaluate, q_binomial, q_int
from .rewrite import normal_order, parse_word, word_from_shape
from .triangles import WeightSeq, a_table, c_table, stirling_q, verify_triangle_identity
from .rook import FerrersBoard, enumerate_placements, rook_number, rook_numbers
from .explicit import coeffs_via_difference, coeffs_via_gamma, stirling_explicit
from .bell import bell_number, bell_poly, dobinsky_check, verify_bell_identity

__version__ = "0.1.0"
