"""Desk-scale simulation of a quantum related-key attack via Simon's algorithm."""
from qrka.attack import AttackConfig, AttackOutcome, run_attack, run_campaign
from qrka.cipher import CipherParams, ToyCipher, min_unicity_pairs, verify_unicity
from qrka.gf2 import BitMatrix, BitVec
from qrka.oracle import Examiner, RelatedKeyOracle

__all__ = [
    "AttackConfig", "AttackOutcome", "BitMatrix", "BitVec", "CipherParams", "Examiner",
    "RelatedKeyOracle", "ToyCipher", "min_unicity_pairs", "run_attack", "run_campaign",
    "verify_unicity",
]
