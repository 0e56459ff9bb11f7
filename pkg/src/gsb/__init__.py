"""Gröbner-Shirshov bases in free associative algebras, and their use for
Schreier extensions of groups (including extensions by HNN groups)."""

from .words import EMPTY, Alphabet, LetterClass, Polynomial, Word, show, word
from .orders import DegLex, HnnOrder, Tower, certify_monomial
from .engine import (CERTIFIED, Presentation, RewriteSystem, find_compositions, irr_enumerate,
                     normal_form, reduce, shirshov_complete)
from .groups import Automorphism, FiniteGroup, cyclic, klein, symmetric3, table_presentation

__version__ = "0.1.0"
