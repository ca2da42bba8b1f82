"""Real-word spelling error detection and correction.

A toolkit with four pieces: deterministic text preparation, a backoff
trigram language model with modified Kneser-Ney discounting, a seeded
corruptor that plants real-word errors, and a noisy-channel Viterbi
corrector plus the evaluation machinery to score it.
"""

__version__ = "0.1.0"
