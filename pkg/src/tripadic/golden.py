"""Published Fourier coefficients of the degree-2 Eisenstein series E4, E6.

Complete for tr(T) <= 2.  Keys are S = 2T; the q12-exponent is S12.
"""

from __future__ import annotations

from .siegel import SiegelExpansion

_E4 = {
    ((0, 0), (0, 0)): 1,
    ((2, 0), (0, 0)): 240, ((0, 0), (0, 2)): 240,
    ((4, 0), (0, 0)): 2160, ((0, 0), (0, 4)): 2160,
    ((2, -2), (-2, 2)): 240, ((2, -1), (-1, 2)): 13440, ((2, 0), (0, 2)): 30240,
    ((2, 1), (1, 2)): 13440, ((2, 2), (2, 2)): 240,
}

# the q12^-2 entry is printed as -540 in one source; symmetry S12 -> -S12
# and the restriction identity sum = 504^2 both force -504
_E6 = {
    ((0, 0), (0, 0)): 1,
    ((2, 0), (0, 0)): -504, ((0, 0), (0, 2)): -504,
    ((4, 0), (0, 0)): -16632, ((0, 0), (0, 4)): -16632,
    ((2, -2), (-2, 2)): -504, ((2, -1), (-1, 2)): 44352, ((2, 0), (0, 2)): 166320,
    ((2, 1), (1, 2)): 44352, ((2, 2), (2, 2)): -504,
}


def degree2_eisenstein(k: int) -> SiegelExpansion:
    table = {4: _E4, 6: _E6}
    if k not in table:
        raise KeyError(f"no stored degree-2 data for weight {k}")
    return SiegelExpansion(2, k, 2, table[k])
