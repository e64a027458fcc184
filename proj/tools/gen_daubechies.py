#!/usr/bin/env python3
"""Regenerates src/wavelet/daubechies_tables.cpp.

Daubechies filters via spectral factorisation of the half-band polynomial,
in 60-digit arithmetic. Extremal phase keeps every root inside the unit
circle. Least asymmetric picks the root subset whose phase response is
closest to linear (smallest max deviation after removing the best linear
fit), with ties broken towards the filter whose largest tap comes first.
"""
import itertools
import sys

import mpmath as mp

mp.mp.dps = 60


def z_roots(n):
    # P(y) = sum_k C(n-1+k, k) y^k, y = sin^2(w/2) = (2 - z - 1/z) / 4
    coeffs = [mp.binomial(n - 1 + k, k) for k in range(n)]
    if n == 1:
        return []
    ys = mp.polyroots(list(reversed(coeffs)), maxsteps=500, extraprec=400)
    pairs = []
    for y in ys:
        b = 2 - 4 * y
        disc = mp.sqrt(b * b - 4)
        r1, r2 = (b + disc) / 2, (b - disc) / 2
        inner = r1 if abs(r1) < 1 else r2
        pairs.append(inner)
    return pairs


def group_roots(inner):
    groups, used = [], [False] * len(inner)
    for i, r in enumerate(inner):
        if used[i]:
            continue
        used[i] = True
        if abs(mp.im(r)) < mp.mpf(10) ** -40:
            groups.append([mp.re(r)])
            continue
        for k in range(i + 1, len(inner)):
            if not used[k] and abs(inner[k] - mp.conj(r)) < mp.mpf(10) ** -30:
                used[k] = True
                break
        groups.append([r, mp.conj(r)])
    return groups


def build(n, roots):
    poly = [mp.mpf(1)]
    for _ in range(n):
        poly = [a + b for a, b in zip(poly + [0], [0] + poly)]
    for r in roots:
        poly = [a - r * b for a, b in zip(poly + [0], [0] + poly)]
    poly = [mp.re(c) for c in poly]
    s = sum(poly)
    return [c * mp.sqrt(2) / s for c in poly]


def phase_nonlinearity(h):
    ws = [mp.pi * (i + 0.5) / 256 for i in range(256)]
    phases, prev = [], None
    for w in ws:
        v = sum(c * mp.expj(-w * k) for k, c in enumerate(h))
        ph = mp.arg(v)
        if prev is not None:
            while ph - prev > mp.pi:
                ph -= 2 * mp.pi
            while ph - prev < -mp.pi:
                ph += 2 * mp.pi
        phases.append(ph)
        prev = ph
    mw = sum(ws) / len(ws)
    mp_ = sum(phases) / len(phases)
    slope = sum((w - mw) * (p - mp_) for w, p in zip(ws, phases)) / sum((w - mw) ** 2 for w in ws)
    return max(abs(p - mp_ - slope * (w - mw)) for w, p in zip(ws, phases))


def extremal(n):
    return build(n, z_roots(n))


def least_asymmetric(n):
    groups = group_roots(z_roots(n))
    best = None
    for flips in itertools.product([False, True], repeat=len(groups)):
        roots = []
        for g, f in zip(groups, flips):
            roots += [1 / r for r in g] if f else g
        h = build(n, roots)
        score = phase_nonlinearity(h)
        if best is None or score < best[0] - mp.mpf(10) ** -20:
            best = (score, h)
    return best[1]


def fmt(h):
    return ",\n        ".join(mp.nstr(c, 20, min_fixed=-5, max_fixed=5) for c in h)


def main():
    out = [
        "// Generated by tools/gen_daubechies.py. Do not edit by hand.",
        "",
        '#include "daubechies_tables.hpp"',
        "",
        "namespace rlsw::detail {",
        "",
    ]
    for name, fn in (("kExtremalPhase", extremal), ("kLeastAsymmetric", least_asymmetric)):
        for n in range(2, 11):
            out.append(f"static constexpr double {name}{n}[] = {{\n        {fmt(fn(n))}}};")
        out.append("")
    out.append("std::span<const double> extremal_phase_taps(int n) {")
    out.append("  switch (n) {")
    for n in range(2, 11):
        out.append(f"    case {n}: return kExtremalPhase{n};")
    out.append("    default: return {};\n  }\n}\n")
    out.append("std::span<const double> least_asymmetric_taps(int n) {")
    out.append("  switch (n) {")
    for n in range(2, 11):
        out.append(f"    case {n}: return kLeastAsymmetric{n};")
    out.append("    default: return {};\n  }\n}\n")
    out.append("}  // namespace rlsw::detail")
    sys.stdout.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
