# SPDX-License-Identifier: Apache-2.0
#
# mimo-manifold: array-independent MIMO channel models via manifold decomposition
#
# Independent scalar/numpy evaluations used to freeze golden values in the unit
# tests. Run with: python3 tests/oracles/derive_oracles.py
import numpy as np
from scipy.special import jv

np.set_printoptions(precision=17)


def ula(n, r, phi0, phi):
    k = np.arange(n)
    return np.exp(-1j * np.pi * (2 * k - (n - 1)) * r * np.cos(phi - phi0))


def uca(n, r, phi0, phi):
    k = np.arange(n)
    return np.exp(-1j * np.pi * r * np.cos(phi - 2 * np.pi * k / n - phi0) / np.sin(np.pi / n))


def basis(m, phi):
    k = np.arange((m - 1) // 2, -(m - 1) // 2 - 1, -1)
    return np.exp(1j * k * phi) / np.sqrt(m)


def residual_sup(resp, m, grid=4096):
    phis = -np.pi + 2 * np.pi * np.arange(grid) / grid
    bs = np.stack([resp(p) for p in phis], 1)
    ds = np.stack([basis(m, p) for p in phis], 1)
    gamma = (m / grid) * bs @ ds.conj().T
    return np.max(np.linalg.norm(bs - gamma @ ds, axis=0))


print("ula N=5 r=0.5 phi0=pi/2 phi=pi/3")
for v in ula(5, 0.5, np.pi / 2, np.pi / 3):
    print(f"  {{{float(v.real)!r}, {float(v.imag)!r}}},")

print("uca N=4 r=0.5 phi0=0 phi=0 phases")
print(" ", [float(-(np.pi / 2) / np.sin(np.pi / 4) * np.cos(-2 * np.pi * n / 4)) for n in range(4)])

f = lambda p: ula(5, 0.5, np.pi / 2, p)
for m in (5, 11, 19):
    print(f"residual_sup ULA5 r=0.5 M={m}: {float(residual_sup(f, m))!r}")
# Bessel-tail cross-check: element at +-1 wavelength has coefficients J_k(2 pi).
tail = sum(abs(jv(k, 2 * np.pi)) for k in range(10, 60))
print("Bessel tail bound for the end element, |k| >= 10:", float(2 * tail))

rng = np.random.default_rng(12345)
n = 400_000
h = (rng.normal(size=(n, 5, 5)) + 1j * rng.normal(size=(n, 5, 5))) / np.sqrt(2)
h *= np.sqrt(25 / np.mean(np.sum(abs(h) ** 2, (1, 2))))
s = np.linalg.svd(h, compute_uv=False)
c = np.sum(np.log2(1 + (100 / 5) * s**2), 1)
print(f"iid 5x5 20 dB ergodic capacity: {float(c.mean())!r} stderr {float(c.std() / np.sqrt(n))!r}")
