import os
import logging
import numpy as np
from gerbecalc.mesh.base import TriangulatedSurface, build_surface, surface_from_dict
from gerbecalc.data.utils import load_json_file, save_json_file

logging.basicConfig()  # Module logger
module_logger = logging.getLogger(__name__)
module_logger.setLevel(logging.INFO)

PACKAGE_FIXTURE_DIRECTORY = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


def fixture_directory() -> str:
    """Directory of the fixture corpus, overridden by the environment variable `GERBECALC_FIXTURES`."""
    return os.environ.get("GERBECALC_FIXTURES", PACKAGE_FIXTURE_DIRECTORY)


def fixture_path(file_name: str) -> str:
    """Absolute path of a fixture file. Absolute or existing relative paths are returned unchanged."""
    if os.path.isabs(file_name) or os.path.exists(file_name):
        return file_name
    return os.path.join(fixture_directory(), file_name)


def tetrahedron_sphere() -> TriangulatedSurface:
    """Boundary of the tetrahedron, the smallest simplicial sphere."""
    return build_surface([[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]], oriented=True, name="sphere_tetra",
                         euler_characteristic=2)


def octahedron_sphere() -> TriangulatedSurface:
    """Boundary of the octahedron with poles 0 and 5."""
    faces = [[0, i, i % 4 + 1] for i in range(1, 5)] + [[5, i % 4 + 1, i] for i in range(1, 5)]
    return build_surface(faces, oriented=True, name="sphere_octa", euler_characteristic=2)


def minimal_torus() -> TriangulatedSurface:
    r"""Torus from one square :math:`[0,1]^2` cut along its diagonal, with one vertex and three edges."""
    return build_surface(
        [[0, 0, 0], [0, 0, 0]], n_vertices=1, oriented=True,
        gluings=[[0, 0, 1, 1, 1], [0, 1, 1, 2, 1], [0, 2, 1, 0, 1]], infer_gluings=False,
        euler_characteristic=0, name="torus_2f",
        metadata={"corner_coordinates": np.array([[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]],
                                                  [[0.0, 0.0], [1.0, 1.0], [0.0, 1.0]]])})


def minimal_projective_plane() -> TriangulatedSurface:
    r"""Real projective plane from a square with boundary word :math:`abab`, two vertices and three edges."""
    return build_surface(
        [[0, 1, 0], [0, 0, 1]], n_vertices=2, oriented=False,
        gluings=[[0, 0, 1, 1, 0], [0, 1, 1, 2, 0], [0, 2, 1, 0, 1]], infer_gluings=False,
        euler_characteristic=1, name="rp2_min",
        metadata={"corner_coordinates": np.array([[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]],
                                                  [[0.0, 0.0], [1.0, 1.0], [0.0, 1.0]]])})


def minimal_klein_bottle() -> TriangulatedSurface:
    r"""Klein bottle as quotient of the unit torus by :math:`(x, y) \mapsto (x + 1/2, -y)`, triangulated on the
    fundamental domain :math:`[0, 1/2] \times [0, 1]` with one vertex and three edges."""
    return build_surface(
        [[0, 0, 0], [0, 0, 0]], n_vertices=1, oriented=False,
        gluings=[[0, 0, 1, 1, 1], [0, 1, 1, 2, 0], [0, 2, 1, 0, 1]], infer_gluings=False,
        euler_characteristic=0, name="klein_min",
        metadata={"corner_coordinates": np.array([[[0.0, 0.0], [0.5, 0.0], [0.5, 1.0]],
                                                  [[0.0, 0.0], [0.5, 1.0], [0.0, 1.0]]])})


def _grid_index(i: int, j: int, n: int, m: int) -> int:
    return (i % n) * m + (j % m)


def _grid_face(i: int, j: int, upper: int, m: int) -> int:
    return 2 * (i * m + j) + upper


def torus_grid(n: int = 4, m: int = 4, name: str = None) -> TriangulatedSurface:
    r"""Torus from an `n` by `m` grid of squares on :math:`[0,1]^2`, each cut along its diagonal.

    Square `(i, j)` gives the faces `2(i m + j)` and `2(i m + j) + 1`. Corner coordinates are continuous within each
    face.
    """
    if n < 3 or m < 3:
        raise ValueError("Torus grid requires at least 3 x 3 squares, got %s x %s." % (n, m))
    faces, coordinates = [], []
    for i in range(n):
        for j in range(m):
            a, b = _grid_index(i, j, n, m), _grid_index(i + 1, j, n, m)
            c, d = _grid_index(i + 1, j + 1, n, m), _grid_index(i, j + 1, n, m)
            pa, pb = [i / n, j / m], [(i + 1) / n, j / m]
            pc, pd = [(i + 1) / n, (j + 1) / m], [i / n, (j + 1) / m]
            faces += [[a, b, c], [a, c, d]]
            coordinates += [[pa, pb, pc], [pa, pc, pd]]
    return build_surface(faces, n_vertices=n * m, oriented=True, euler_characteristic=0,
                         name=name if name is not None else "torus_%sx%s" % (n, m),
                         metadata={"corner_coordinates": np.array(coordinates)})


def split_torus(n: int = 4, m: int = 4) -> TriangulatedSurface:
    r"""Grid torus carrying the defect circle :math:`u = 0` running along :math:`v`.

    The circle is traversed from :math:`v=0` to :math:`v=1`. Cutting along it leaves a cylinder whose side bounded
    by the circle with its own direction has coordinates :math:`u = 1`, the other side :math:`u = 0`.
    """
    surface = torus_grid(n, m)
    refs = [[_grid_face(n - 1, j, 0, m), 1] for j in range(m)]
    return build_surface(surface.faces, n_vertices=surface.n_vertices, oriented=True,
                         defects=[refs], defect_separates=[False], name="split_torus_%sx%s" % (n, m),
                         metadata=surface.metadata)


def hexagon_disk(scale: float = 1.0, center=(0.0, 0.0)) -> TriangulatedSurface:
    """Disk made of six triangles around vertex 0, with planar corner coordinates of the regular hexagon."""
    angles = np.arange(6) * np.pi / 3
    points = np.array(center, dtype="float") + float(scale) * np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    faces = [[0, i + 1, (i + 1) % 6 + 1] for i in range(6)]
    coordinates = np.array([[center, points[i], points[(i + 1) % 6]] for i in range(6)], dtype="float")
    return build_surface(faces, oriented=True, euler_characteristic=1, name="disk",
                         metadata={"corner_coordinates": coordinates})


MESH_GENERATORS = {
    "sphere_tetra": tetrahedron_sphere,
    "sphere_octa": octahedron_sphere,
    "torus_2f": minimal_torus,
    "torus_fine": lambda: torus_grid(6, 6, name="torus_fine"),
    "rp2_min": minimal_projective_plane,
    "klein_min": minimal_klein_bottle,
    "disk": hexagon_disk,
    "split_torus": split_torus,
}


def load_mesh(name: str) -> TriangulatedSurface:
    """Load a mesh of the corpus by name or json file name.

    Files in the fixture directory take precedence, otherwise the mesh is generated.

    Args:
        name (str): Name like 'rp2_min' or path of a json mesh.

    Returns:
        TriangulatedSurface: Surface.
    """
    file_name = name if name.endswith(".json") else "%s.json" % name
    path = fixture_path(file_name)
    if os.path.exists(path):
        mesh = load_json_file(path)
        return surface_from_dict(mesh.get("mesh", mesh))
    key = os.path.basename(file_name)[:-len(".json")]
    if key not in MESH_GENERATORS:
        raise ValueError("Unknown mesh fixture '%s'." % name)
    return MESH_GENERATORS[key]()


def load_fixture(file_name: str):
    """Load a json fixture, resolving names relative to :obj:`fixture_directory`."""
    path = fixture_path(file_name)
    if not os.path.exists(path):
        raise ValueError("Fixture '%s' not found in '%s'." % (file_name, fixture_directory()))
    return load_json_file(path)


def export_meshes(directory: str = None, names: list = None) -> list:
    """Write generated meshes as json to `directory`. Returns the written paths."""
    directory = fixture_directory() if directory is None else directory
    os.makedirs(directory, exist_ok=True)
    names = list(MESH_GENERATORS.keys()) if names is None else names
    paths = []
    for name in names:
        path = os.path.join(directory, "%s.json" % name)
        save_json_file(MESH_GENERATORS[name]().to_dict(), path)
        paths.append(path)
    module_logger.info("Exported %s meshes to '%s'." % (len(paths), directory))
    return paths
