"""Straight-line high-precision transcription of the two-mode Gaussian discord.

Kept deliberately separate from ``magnomol.measures``: no shared helpers, no
numpy, every quantity evaluated with mpmath at 50 digits.

Run as a script to print the squeezed-vacuum reference value::

    python tests/oracles/discord_reference.py 0.3
"""

import sys

import mpmath as mp

mp.mp.dps = 50


def det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def det4(v):
    return mp.det(mp.matrix(v))


def f(x):
    x = mp.mpf(x)
    if x <= mp.mpf(1) / 2:
        return mp.mpf(0)
    return (x + mp.mpf(1) / 2) * mp.log(x + mp.mpf(1) / 2) - (x - mp.mpf(1) / 2) * mp.log(x - mp.mpf(1) / 2)


def discord(v):
    v = [[mp.mpf(str(float(x))) if not isinstance(x, mp.mpf) else x for x in row] for row in v]
    phi1 = [[v[0][0], v[0][1]], [v[1][0], v[1][1]]]
    phi2 = [[v[2][2], v[2][3]], [v[3][2], v[3][3]]]
    phi3 = [[v[0][2], v[0][3]], [v[1][2], v[1][3]]]
    I1 = det2(phi1)
    I2 = det2(phi2)
    I3 = det2(phi3)
    I4 = det4(v)
    S = I1 + I2 + 2 * I3
    # radicands clamped at 0: rounded inputs can sit a hair outside the physical set
    disc = max(S**2 - 4 * I4, 0)
    nu_m = mp.sqrt((S - mp.sqrt(disc)) / 2)
    nu_p = mp.sqrt((S + mp.sqrt(disc)) / 2)
    if I3 != 0 and 4 * (I1 * I2 - I4) ** 2 / ((I2 + 4 * I4) * (1 + 4 * I1) * I3**2) <= 1:
        W = ((2 * abs(I3) + mp.sqrt(max(4 * I3**2 + (4 * I1 - 1) * (4 * I4 - I2), 0))) / (4 * I1 - 1)) ** 2
    else:
        q = I1 * I2 + I4 - I3**2
        W = (q - mp.sqrt(max(q**2 - 4 * I1 * I2 * I4, 0))) / (2 * I1)
    return f(mp.sqrt(I1)) - f(nu_m) - f(nu_p) + f(mp.sqrt(W))


def squeezed_vacuum(r):
    r = mp.mpf(r)
    c = mp.cosh(2 * r) / 2
    s = mp.sinh(2 * r) / 2
    return [[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]]


if __name__ == "__main__":
    r = sys.argv[1] if len(sys.argv) > 1 else "0.3"
    print(mp.nstr(discord(squeezed_vacuum(r)), 20))
