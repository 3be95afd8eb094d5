"""Pure-Python reference implementations of the hot kernels.

``_kernels.pyx`` mirrors these functions one for one; ``kernels`` picks the
compiled build when it is importable.
"""

MASK64 = (1 << 64) - 1


def splitmix64(x):
    """One SplitMix64 output step applied to ``x`` (Steele, Lea & Flood 2014)."""
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def hash4(seed, a, b, c):
    h = splitmix64(seed & MASK64)
    h = splitmix64(h ^ (a & MASK64))
    h = splitmix64(h ^ (b & MASK64))
    return splitmix64(h ^ (c & MASK64))


def unit_disk_pairs(xs, ys, range_m):
    """Index pairs (i, j), i < j, whose Euclidean distance is <= range_m."""
    n = len(xs)
    r2 = range_m * range_m
    out = []
    for i in range(n):
        xi = xs[i]
        yi = ys[i]
        for j in range(i + 1, n):
            dx = xs[j] - xi
            dy = ys[j] - yi
            if dx * dx + dy * dy <= r2:
                out.append((i, j))
    return out
