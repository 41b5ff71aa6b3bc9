"""Independent oracles used to freeze expected values, kept separate from the
code paths they check."""

import numpy as np


def coherent_overlap(b1: complex, b2: complex) -> complex:
    """<b1|b2> = exp(-|b1|^2/2 - |b2|^2/2 + conj(b1) b2) for coherent states."""
    return np.exp(-abs(b1) ** 2 / 2 - abs(b2) ** 2 / 2 + np.conj(b1) * b2)


def coherent_monomial_moment(coeffs, alpha_sets, powers) -> complex:
    """Moment of a normally ordered monomial on a coherent superposition.

    Uses <b1| a^dag^n a^m |b2> = conj(b1)^n b2^m <b1|b2> per mode, summed over
    all cross terms of sum_s c_s |alphas_s> and normalized by the norm.
    """
    num = 0j
    den = 0j
    for cs, als in zip(coeffs, alpha_sets):
        for ct, alt in zip(coeffs, alpha_sets):
            overlap = 1.0 + 0j
            full = 1.0 + 0j
            for (n, m), b1, b2 in zip(powers, als, alt):
                o = coherent_overlap(b1, b2)
                overlap *= o
                full *= np.conj(b1) ** n * b2 ** m * o
            num += np.conj(cs) * ct * full
            den += np.conj(cs) * ct * overlap
    return num / den


def brute_realignment(matrix: np.ndarray, d_slow: int, d_fast: int) -> np.ndarray:
    """Element-by-element realignment map, written as explicit index loops."""
    out = np.zeros((d_slow * d_slow, d_fast * d_fast), dtype=complex)
    for s in range(d_slow):
        for f in range(d_fast):
            for sp in range(d_slow):
                for fp in range(d_fast):
                    out[s * d_slow + sp, f * d_fast + fp] = matrix[
                        s * d_fast + f, sp * d_fast + fp
                    ]
    return out


def brute_factor_transpose(
    matrix: np.ndarray, d_slow: int, d_fast: int, factor: str
) -> np.ndarray:
    """Element-by-element single-factor transpose, written as explicit loops."""
    out = np.zeros_like(np.asarray(matrix, dtype=complex))
    for s in range(d_slow):
        for f in range(d_fast):
            for sp in range(d_slow):
                for fp in range(d_fast):
                    if factor == "fast":
                        out[s * d_fast + f, sp * d_fast + fp] = matrix[
                            s * d_fast + fp, sp * d_fast + f
                        ]
                    else:
                        out[s * d_fast + f, sp * d_fast + fp] = matrix[
                            sp * d_fast + f, s * d_fast + fp
                        ]
    return out
