import numpy as np
import networkx as nx


def dual_graph(surface) -> nx.MultiGraph:
    r"""Dual complex of a triangulated surface as a :obj:`networkx.MultiGraph`. There is one node per face and one
    link per interior edge. Links carry the shared edge id under the key and in the data field 'edge', together with
    the two face-sides in 'sides'. Faces glued to themselves give self-loops and parallel links are kept, so the
    dual of the minimal 2-face torus has 2 nodes and 3 links.

    Args:
        surface (TriangulatedSurface): Surface to take the dual of.

    Returns:
        nx.MultiGraph: Dual graph with node attribute 'flag' holding the orientation flag of the face.
    """
    graph = nx.MultiGraph()
    for f in range(surface.n_faces):
        graph.add_node(f, flag=int(surface.flags[f]))
    for e, sides in enumerate(surface.edge_sides):
        if len(sides) != 2:
            continue
        (f1, j1), (f2, j2) = sides
        graph.add_edge(f1, f2, key=e, edge=e, sides=((f1, j1), (f2, j2)))
    return graph


def _links(n_faces: int, edge_sides: list, removed_edges=()) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(n_faces))
    removed = set(int(e) for e in removed_edges)
    for e, sides in enumerate(edge_sides):
        if len(sides) == 2 and e not in removed:
            graph.add_edge(sides[0][0], sides[1][0], key=e)
    return graph


def face_components(n_faces: int, edge_sides: list, removed_edges=()) -> list:
    """Connected components of faces, linked through interior edges not listed in `removed_edges`.

    Args:
        n_faces (int): Number of faces.
        edge_sides (list): Face-sides per edge as list of `(face, local_edge)` tuples.
        removed_edges (list): Edge ids that do not link their faces. Default is ().

    Returns:
        list: Sorted list of sorted face lists, ordered by smallest face id.
    """
    graph = _links(n_faces, edge_sides, removed_edges)
    comps = [sorted(c) for c in nx.connected_components(graph)]
    return sorted(comps, key=lambda c: c[0])


def orientation_violations(flags, edge_sides: list, side_sign) -> list:
    r"""List interior edges where the induced boundary directions of the two adjacent faces agree.
    Face :math:`f` induces the direction :math:`\epsilon_f \sigma_{f,j}` on its side :math:`j`, relative to the
    canonical edge direction. Consistency requires :math:`\epsilon_1 \sigma_1 = - \epsilon_2 \sigma_2`.

    Args:
        flags (np.ndarray): Orientation flags of shape `(F, )` with values +1 or -1.
        edge_sides (list): Face-sides per edge.
        side_sign (np.ndarray): Sign of each face-side relative to the canonical edge direction, shape `(F, 3)`.

    Returns:
        list: Edge ids violating orientation consistency.
    """
    out = []
    for e, sides in enumerate(edge_sides):
        if len(sides) != 2:
            continue
        (f1, j1), (f2, j2) = sides
        if flags[f1] * side_sign[f1, j1] != -flags[f2] * side_sign[f2, j2]:
            out.append(e)
    return out


def propagate_orientation(n_faces: int, edge_sides: list, side_sign, seed_flags=None):
    r"""Breadth-first orientation propagation across the dual graph. The root of every component keeps its seed
    flag, all other faces are forced by :math:`\epsilon_2 = -\epsilon_1 \sigma_1 \sigma_2`.

    Args:
        n_faces (int): Number of faces.
        edge_sides (list): Face-sides per edge.
        side_sign (np.ndarray): Sign of each face-side relative to the canonical edge direction.
        seed_flags (np.ndarray): Flags for the component roots. Default is None, which means all +1.

    Returns:
        np.ndarray: Consistent flags, or None if the surface is non-orientable.
    """
    seed_flags = np.ones(n_faces, dtype="int") if seed_flags is None else np.array(seed_flags, dtype="int")
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(n_faces))
    for e, sides in enumerate(edge_sides):
        if len(sides) == 2:
            (f1, j1), (f2, j2) = sides
            graph.add_edge(f1, f2, key=e, sign=int(side_sign[f1, j1] * side_sign[f2, j2]))
    flags = np.zeros(n_faces, dtype="int")
    for comp in sorted(nx.connected_components(graph), key=min):
        root = min(comp)
        flags[root] = seed_flags[root]
        for u, v in nx.bfs_edges(graph, root):
            sign = next(iter(graph[u][v].values()))["sign"]
            flags[v] = -flags[u] * sign
    if len(orientation_violations(flags, edge_sides, side_sign)) > 0:
        return None
    return flags


def corner_classes(n_faces: int, gluings: list) -> list:
    """Vertex classes of face corners identified by gluings `[f, j, f2, j2, opposite]`.

    Args:
        n_faces (int): Number of faces.
        gluings (list): Explicit gluing entries.

    Returns:
        list: Classes as sorted lists of `(face, corner)`, ordered by their first corner.
    """
    graph = nx.Graph()
    graph.add_nodes_from((f, c) for f in range(n_faces) for c in range(3))
    for f1, j1, f2, j2, opposite in gluings:
        if opposite:
            graph.add_edge((f1, j1), (f2, (j2 + 1) % 3))
            graph.add_edge((f1, (j1 + 1) % 3), (f2, j2))
        else:
            graph.add_edge((f1, j1), (f2, j2))
            graph.add_edge((f1, (j1 + 1) % 3), (f2, (j2 + 1) % 3))
    return sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])
