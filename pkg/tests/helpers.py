import numpy as np
from hypothesis import strategies as st

from elastica.geometry import ConvexShape, random_convex_shape

ELLIPSE_LIKE = ConvexShape(1.0, (0.0, 0.1), (0.0, 0.0))


def random_shapes(count, seed=0, **kwargs):
    rng = np.random.default_rng(seed)
    return [random_convex_shape(rng, **kwargs) for _ in range(count)]


def interior_points(shape, count, rng, margin=1e-3):
    """Uniform points inside ``shape`` at least ``margin * a0`` from the boundary."""
    from elastica.geometry import support_distance

    pts = shape.point(np.linspace(0, 2 * np.pi, 512, endpoint=False))
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    out = []
    while len(out) < count:
        x = lo + (hi - lo) * rng.random((4 * count, 2))
        d, _ = support_distance(shape, x, grid=1024)
        out.extend(x[d > margin * shape.a0])
    return np.array(out[:count])


seeds = st.integers(min_value=0, max_value=2**32 - 1)
shapes = seeds.map(lambda s: random_convex_shape(np.random.default_rng(s)))
small_shapes = seeds.map(lambda s: random_convex_shape(np.random.default_rng(s), k_max=4))


def smooth_direction(k_max, rng):
    """Unit coefficient direction with the decay of ``random_convex_shape``.

    Central differences of the bending term along a direction loaded on the
    top harmonic have truncation error growing like ``k^6 h^2``, so checks of
    the gradient use perturbations as smooth as the shapes themselves.
    """
    k = np.arange(2, k_max + 1, dtype=float)
    decay = 1.0 / ((k**2 - 1.0) * k)
    scale = np.concatenate([[1.0, 1.0], decay, [1.0], decay])
    d = rng.normal(size=2 * k_max + 1) * scale
    return d / np.linalg.norm(d)
