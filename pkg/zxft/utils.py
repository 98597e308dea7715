# utils.py

import logging

FORMAT = 'zxft/1'

# dense oracle limits
MAX_DENSE_PORTS = 14
TOLERANCE = 1e-9
EXHAUSTIVE_LIMIT = 10
SAMPLED_ASSIGNMENTS = 256

DEFAULT_SEED = 0
DEFAULT_TABLEAU_RUNS = 1000

PAULIS = ('I', 'X', 'Y', 'Z')
_PAULI_OF_BITS = {(0, 0): 'I', (0, 1): 'X', (1, 1): 'Y', (1, 0): 'Z'}
_BITS_OF_PAULI = {p: b for b, p in _PAULI_OF_BITS.items()}


def pauli_from_bits(r: int, g: int) -> str:
    """
    Pauli letter for a highlight pair.

    Args:
        r (int): red (Z-type) bit
        g (int): green (X-type) bit
    Returns:
        pauli (str): one of 'I', 'X', 'Y', 'Z'
    """
    return _PAULI_OF_BITS[(r & 1, g & 1)]


def bits_from_pauli(pauli: str) -> tuple:
    """
    Inverse of pauli_from_bits.

    Args:
        pauli (str): one of 'I', 'X', 'Y', 'Z'
    Returns:
        bits (tuple): (r, g)
    """
    assert pauli in PAULIS, "Unknown Pauli {}".format(pauli)
    return _BITS_OF_PAULI[pauli]


def configure_logging(verbose: bool = False):
    """
    Configure root logging for command-line use.

    Args:
        verbose (bool): log at INFO instead of WARNING
    """
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
    )
