"""Shared fan builders and randomized fan generators for the test suite."""

from __future__ import annotations

import random
from math import gcd

import pytest

from orbidisk.stacky import StackyFan, age_one_box_points, validate


def p2_fan() -> StackyFan:
    return StackyFan.make(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


def p1xp1_fan() -> StackyFan:
    return StackyFan.make(
        2, [(1, 0), (0, 1), (-1, 0), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)]
    )


def f2_fan() -> StackyFan:
    return StackyFan.make(
        2, [(1, 0), (0, 1), (-1, 2), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)]
    )


def f3_fan() -> StackyFan:
    return StackyFan.make(
        2, [(1, 0), (0, 1), (-1, 3), (0, -1)], [(0, 1), (1, 2), (2, 3), (0, 3)]
    )


def p2z3_bare() -> StackyFan:
    return StackyFan.make(2, [(-1, -1), (2, -1), (-1, 2)], [(0, 1), (0, 2), (1, 2)])


def p2z3_extended() -> StackyFan:
    bare = p2z3_bare()
    return StackyFan.make(
        2, bare.stacky_vectors, bare.max_cones, age_one_box_points(bare)
    )


def c2z3_chart() -> StackyFan:
    return StackyFan.make(2, [(2, -1), (-1, 2)], [(0, 1)], [(1, 0), (0, 1)])


def om2_chart() -> StackyFan:
    """Total space of the degree -2 line bundle over the projective line."""
    return StackyFan.make(2, [(1, 0), (0, 1), (-1, 2)], [(0, 1), (1, 2)])


def c3z3_chart() -> StackyFan:
    return StackyFan.make(
        3, [(1, 0, 1), (0, 1, 1), (-1, -1, 1)], [(0, 1, 2)], [(0, 0, 1)]
    )


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _half(v) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angular_cmp(u, v) -> int:
    """Exact counterclockwise comparison of nonzero 2d integer vectors."""
    if _half(u) != _half(v):
        return -1 if _half(u) < _half(v) else 1
    c = _cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


def random_complete_2d_fan(rng: random.Random) -> StackyFan:
    """Complete simplicial 2d fan with random (possibly non-primitive) rays."""
    while True:
        k = rng.randint(3, 6)
        rays = set()
        while len(rays) < k:
            v = (rng.randint(-4, 4), rng.randint(-4, 4))
            if v == (0, 0):
                continue
            g = gcd(abs(v[0]), abs(v[1]))
            direction = (v[0] // g, v[1] // g)
            if all(
                (direction[0] * r[1] - direction[1] * r[0]) != 0
                or direction[0] * r[0] + direction[1] * r[1] < 0
                for r in rays
            ):
                rays.add(v)
        from functools import cmp_to_key

        rays = sorted(rays, key=cmp_to_key(_angular_cmp))
        # consecutive pairs must turn left by less than half a turn
        ok = True
        cones = []
        for i in range(len(rays)):
            a, b = rays[i], rays[(i + 1) % len(rays)]
            if _cross(a, b) <= 0:
                ok = False
                break
            cones.append(tuple(sorted((i, (i + 1) % len(rays)))))
        if not ok:
            continue
        fan = StackyFan.make(2, rays, cones)
        if validate(fan).issues == () or validate(fan).issues == (
            "vectors do not generate the lattice (fan map not onto)",
        ):
            return fan


def random_single_cone_fan(rng: random.Random, dim: int) -> StackyFan:
    """One full-dimensional simplicial cone (an affine chart)."""
    from orbidisk.lattice import det

    while True:
        vecs = [
            tuple(rng.randint(-3, 3) for _ in range(dim)) for _ in range(dim)
        ]
        d = det(vecs)
        if d != 0 and abs(d) <= 20:
            return StackyFan.make(dim, vecs, [tuple(range(dim))])


@pytest.fixture(scope="session")
def quotient_plane_tables():
    """Shared order-12 generating functions of the quotient plane."""
    from orbidisk.mirror import disk_generating_function
    from orbidisk.stacky import DiskClassSymbol

    fan = p2z3_extended()
    cache: dict = {}
    g112 = disk_generating_function(
        fan, DiskClassSymbol.orbi((0, -1)), 12, pipeline_cache=cache
    )
    g122 = disk_generating_function(
        fan, DiskClassSymbol.orbi((1, -1)), 12, pipeline_cache=cache
    )
    return fan, g112, g122
