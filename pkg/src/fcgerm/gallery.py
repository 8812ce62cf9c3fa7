"""Deterministic example germs.

Every direction vector carries a trailing constant coordinate 1 so that no
direction is the zero vector.
"""
from __future__ import annotations

import itertools
from fractions import Fraction as F

from .errors import NotFound
from .model import StrictTransformModel, model_from_points

HEXAGON = [(2, 0), (1, 2), (-1, 2), (-2, 0), (-1, -2), (1, -2)]


def _cycle(ids):
    return [tuple(sorted((ids[i], ids[(i + 1) % len(ids)]))) for i in range(len(ids))]


# ---------------------------------------------------------------- links

def link_hexagon():
    return _cycle(list(range(6))), [p + (1,) for p in HEXAGON]


def link_octahedron():
    pts = []
    for i in range(3):
        for sgn in (1, -1):
            p = [0, 0, 0]
            p[i] = sgn
            pts.append(tuple(p))
    tris = [tuple(sorted(t)) for t in itertools.product((0, 1), (2, 3), (4, 5))]
    return tris, pts


def link_torus():
    """Seven-vertex torus; vertices on the moment curve (generic, not an embedding)."""
    tris = set()
    for i in range(7):
        tris.add(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        tris.add(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    pts = [(t, t * t, t ** 3) for t in range(1, 8)]
    return sorted(tris), pts


def link_wedge():
    """Two hexagonal circles sharing vertex 0."""
    a = [0, 1, 2, 3, 4, 5]
    b = [0, 6, 7, 8, 9, 10]
    pts = [(0, 0), (1, 1), (2, 1), (3, 0), (2, -1), (1, -1),
           (-1, 1), (-2, 1), (-3, 0), (-2, -1), (-1, -1)]
    return sorted(set(_cycle(a) + _cycle(b))), [p + (1,) for p in pts]


def link_dumbbell():
    """Two disjoint hexagons joined by one edge."""
    a = list(range(6))
    b = list(range(6, 12))
    pts = [(x - 4, y) for x, y in HEXAGON] + [(x + 4, y) for x, y in HEXAGON]
    # edge from the rightmost vertex of the first hexagon to the leftmost of the second
    return sorted(set(_cycle(a) + _cycle(b) + [(0, 9)])), [p + (1,) for p in pts]


def link_theta():
    """Two poles joined by three paths of length three."""
    s0, s1 = 0, 1
    edges = []
    pts = [(0, 3), (0, -3)]
    for j, x in enumerate((-2, 0, 2)):
        u, v = 2 + 2 * j, 3 + 2 * j
        pts += [(x, 1), (x, -1)]
        edges += [(s0, u), (u, v), (s1, v)]
    return sorted(tuple(sorted(e)) for e in edges), [p + (1,) for p in pts]


def link_sphere3():
    """Boundary of the 4-simplex."""
    tets = list(itertools.combinations(range(5), 4))
    pts = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (-1, -1, -1, -1)]
    return tets, pts


LINKS = {
    "hexagon": link_hexagon,
    "octahedron": link_octahedron,
    "torus": link_torus,
    "wedge": link_wedge,
    "dumbbell": link_dumbbell,
    "theta": link_theta,
    "sphere3": link_sphere3,
}


def prism_cells(simplex, lo: int, hi: int, offset_lo: int = 0, offset_hi: int = 0):
    """Staircase triangulation of simplex x [lo, hi] with vertex ids v+offset."""
    vs = sorted(simplex)
    out = []
    for i in range(len(vs)):
        out.append(tuple([v + offset_lo for v in vs[:i + 1]] + [v + offset_hi for v in vs[i:]]))
    return out


def cone_over_link(simplices, points, name: str = "cone", layers=(0, 1)) -> StrictTransformModel:
    """L x layers, product-triangulated; r is the layer value."""
    n = len(points)
    cells = []
    for j in range(len(layers) - 1):
        for s in simplices:
            cells += prism_cells(s, j, j + 1, j * n, (j + 1) * n)
    pts = [tuple(p) + (F(r),) for r in layers for p in points]
    return model_from_points(cells, pts, name)


def cone_over(link="hexagon") -> StrictTransformModel:
    if isinstance(link, str):
        if link not in LINKS:
            raise NotFound(f"unknown link complex {link!r}; choose from {sorted(LINKS)}")
        simplices, points = LINKS[link]()
        return cone_over_link(simplices, points, f"cone_over_{link}")
    simplices, points = link
    return cone_over_link(simplices, points)


def beta_horn(sides: int = 6) -> StrictTransformModel:
    """Disk whose only r = 0 point is the apex: a thin germ."""
    if sides < 3:
        raise ValueError("need at least 3 sides")
    ring = HEXAGON if sides == 6 else [(j, j * j) for j in range(sides)]
    pts = [(0, 0, 1, 0)] + [(x, y, 1, 1) for x, y in ring]
    tris = [(0, 1 + j, 1 + (j + 1) % sides) for j in range(sides)]
    return model_from_points(tris, pts, "beta_horn")


def pinched_handle() -> StrictTransformModel:
    """Annulus over the hexagon plus a membrane disk on its middle ring, coned at a boundary vertex q.

    Vertex 0 is q.  Ids 0-5 are the r = 0 ring, 6-11 the r = 1/2 ring, 12-17
    the r = 1 ring, 18-23 the inner membrane ring at r = 1/4.
    """
    simplices, points = link_hexagon()
    cells = []
    for j in range(2):
        for s in simplices:
            cells += prism_cells(s, j, j + 1, 6 * j, 6 * (j + 1))
    pts = [p + (0, F(r)) for r in (0, F(1, 2), 1) for p in points]
    qx, qy, _ = points[0]
    for x, y, c in points:
        pts.append((qx + F(x - qx, 2), qy + F(y - qy, 2), c, 1, F(1, 4)))
    mid, inner = 6, 18
    for i in range(6):
        j = (i + 1) % 6
        cells.append((mid + i, mid + j, inner + j))
        cells.append((mid + i, inner + i, inner + j))
        cells.append((0, inner + i, inner + j))
    return model_from_points(cells, pts, "pinched_handle")


def bridge_germ() -> StrictTransformModel:
    """Two octahedral sheets sharing the vertex p, joined above r = 0 by a tube coned at p.

    Ids: p = 0; first sphere square 1-4 and pole 5; second sphere square 6-9
    and pole 10; the r = 1 copy of vertex v >= 1 is v + 10.
    """
    sq = [(0, 1, 0), (0, 0, 1), (0, -1, 0), (0, 0, -1)]
    pts0 = [(0, 0, 0)]
    pts0 += [(-1, y, z) for _, y, z in sq] + [(-2, 0, 0)]
    pts0 += [(1, y, z) for _, y, z in sq] + [(2, 0, 0)]
    a = [1, 2, 3, 4]
    c = [6, 7, 8, 9]
    up = 10

    def sphere(square, pole):
        out = []
        for i in range(4):
            e = (square[i], square[(i + 1) % 4])
            out.append(tuple(sorted((0,) + e)))
            out.append(tuple(sorted((pole,) + e)))
        return out

    cells = []
    for square, pole in ((a, 5), (c, 10)):
        for t in sphere(square, pole):
            if 0 in t:
                continue
            cells += prism_cells(t, 0, 1, 0, up)
    # T: walls over the two squares plus an annulus joining their r = 1 copies
    T = []
    for square in (a, c):
        for i in range(4):
            e = (square[i], square[(i + 1) % 4])
            T += prism_cells(e, 0, 1, 0, up)
    for i in range(4):
        j = (i + 1) % 4
        T.append((a[i] + up, a[j] + up, c[i] + up))
        T.append((a[j] + up, c[j] + up, c[i] + up))
    cells += [(0,) + tuple(t) for t in T]
    points = [p + (1, 0) for p in pts0] + [pts0[v] + (1, 1) for v in range(1, 11)]
    return model_from_points(cells, points, "bridge_germ")


def book_germ() -> StrictTransformModel:
    """Cone over a theta graph: three sheets meet along the segments over the poles."""
    simplices, points = link_theta()
    m = cone_over_link(simplices, points, "book_germ")
    return m


def wedge_cone() -> StrictTransformModel:
    simplices, points = link_wedge()
    return cone_over_link(simplices, points, "wedge_cone")


GALLERY = {
    "cone_over": cone_over,
    "beta_horn": beta_horn,
    "pinched_handle": pinched_handle,
    "bridge_germ": bridge_germ,
    "book_germ": book_germ,
    "wedge_cone": wedge_cone,
}


def gallery(name: str, **params) -> StrictTransformModel:
    if name not in GALLERY:
        raise NotFound(f"unknown gallery model {name!r}; choose from {sorted(GALLERY)}")
    return GALLERY[name](**params)


def gallery_models() -> dict[str, StrictTransformModel]:
    """Every named germ used by the test suites."""
    out = {f"cone_over_{l}": cone_over(l) for l in ("hexagon", "octahedron", "torus", "wedge", "dumbbell")}
    for name in ("beta_horn", "pinched_handle", "bridge_germ", "book_germ", "wedge_cone"):
        out[name] = gallery(name)
    return out
