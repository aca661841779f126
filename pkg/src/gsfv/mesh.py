"""Uniform Cartesian control-volume meshes with two-point flux topology.

Cells are squares of side h covering a rectangle, numbered row-major with x
fastest: cell k = j*nx + i sits at center (origin_x + (i+1/2)h,
origin_y + (j+1/2)h). Interior faces carry a transmissibility
tau = |face| / (center distance), which is identically 1 on a uniform square
grid; it is stored explicitly so flux code keeps the general two-point form.
Boundary faces carry no flux (homogeneous Neumann boundary).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class InvalidSize(ValueError):
    """Mesh needs at least 2 cells per direction and positive side lengths."""


class NonSquareCells(ValueError):
    """Cell aspect ratio must be exactly 1, i.e. Lx/nx == Ly/ny."""


class IndexOutOfRange(IndexError):
    """Cell index outside 0 .. nx*ny - 1."""


@dataclass(frozen=True, eq=False)
class UniformMesh:
    """Immutable mesh: geometry plus the interior-face incidence arrays.

    face_k, face_l, face_tau are parallel arrays over interior faces,
    x-oriented faces first (row-major), then y-oriented faces. xc, yc are
    flat cell-center coordinates in cell order.
    """

    nx: int
    ny: int
    h: float
    origin: tuple[float, float]
    face_k: np.ndarray
    face_l: np.ndarray
    face_tau: np.ndarray
    xc: np.ndarray
    yc: np.ndarray

    @property
    def n_cells(self) -> int:
        return self.nx * self.ny

    @property
    def n_faces(self) -> int:
        return self.face_k.size

    def interior_faces(self):
        """List of (k, l, tau) triples, python scalars, storage order."""
        return [
            (int(k), int(l), float(t))
            for k, l, t in zip(self.face_k, self.face_l, self.face_tau)
        ]

    def compatible(self, other: "UniformMesh") -> bool:
        """True if other has identical resolution, spacing and origin."""
        return (
            self.nx == other.nx
            and self.ny == other.ny
            and self.h == other.h
            and self.origin == other.origin
        )


def build_mesh(nx: int, ny: int, Lx: float = 1.0, Ly: float = 1.0,
               origin: tuple[float, float] = (0.0, 0.0)) -> UniformMesh:
    """Construct a uniform mesh of nx*ny square cells on an Lx*Ly rectangle.

    Raises InvalidSize for fewer than 2 cells per direction or non-positive
    lengths, NonSquareCells when Lx/nx and Ly/ny disagree.
    """
    if nx < 2 or ny < 2:
        raise InvalidSize(f"need nx, ny >= 2, got ({nx}, {ny})")
    if Lx <= 0.0 or Ly <= 0.0:
        raise InvalidSize(f"need positive side lengths, got ({Lx}, {Ly})")
    hx = Lx / nx
    hy = Ly / ny
    if abs(hx - hy) > 1e-12 * max(hx, hy):
        raise NonSquareCells(f"cell sides differ: {hx} vs {hy}")
    h = hx

    idx = np.arange(nx * ny, dtype=np.int64).reshape(ny, nx)
    # x-oriented faces between (i, j) and (i+1, j), then y-oriented ones
    face_k = np.concatenate([idx[:, :-1].ravel(), idx[:-1, :].ravel()])
    face_l = np.concatenate([idx[:, 1:].ravel(), idx[1:, :].ravel()])
    face_tau = np.ones(face_k.size, dtype=np.float64)

    ox, oy = float(origin[0]), float(origin[1])
    x1 = ox + (np.arange(nx) + 0.5) * h
    y1 = oy + (np.arange(ny) + 0.5) * h
    X, Y = np.meshgrid(x1, y1)
    return UniformMesh(nx, ny, h, (ox, oy), face_k, face_l, face_tau,
                       X.ravel(), Y.ravel())


def cell_center(mesh: UniformMesh, k: int) -> tuple[float, float]:
    """Center coordinates of cell k; raises IndexOutOfRange off the mesh."""
    if not 0 <= k < mesh.n_cells:
        raise IndexOutOfRange(f"cell {k} outside 0..{mesh.n_cells - 1}")
    j, i = divmod(int(k), mesh.nx)
    return (mesh.origin[0] + (i + 0.5) * mesh.h,
            mesh.origin[1] + (j + 0.5) * mesh.h)
