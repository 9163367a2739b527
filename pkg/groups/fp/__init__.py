from .coset_table import CosetTable, coset_enumerate, evaluate, perm_rep
from .words import ROTATION, STRING, Presentation, Word, free_reduce, parse_word, print_word

__all__ = [
    'CosetTable',
    'coset_enumerate',
    'evaluate',
    'perm_rep',
    'Presentation',
    'Word',
    'free_reduce',
    'parse_word',
    'print_word',
    'ROTATION',
    'STRING',
]
