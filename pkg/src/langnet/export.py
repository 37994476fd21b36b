"""GraphML writer for Gephi and other viewers."""
from __future__ import annotations

import xml.etree.ElementTree as ET

import numpy as np

from .graph import UndirectedGraph

_NS = "http://graphml.graphdrawing.org/xmlns"
_TYPES = {"label": "string", "degree": "int", "community_id": "int", "pagerank": "double"}


def write_graphml(g: UndirectedGraph, path, communities=None, pagerank=None) -> None:
    """Write ``g`` with node attributes label and degree, plus community_id
    and pagerank when given (one value per node)."""
    attrs = {"label": [g.label(i) for i in range(g.n_nodes)],
             "degree": g.degrees().tolist()}
    if communities is not None:
        attrs["community_id"] = np.asarray(getattr(communities, "assignment", communities)).tolist()
    if pagerank is not None:
        attrs["pagerank"] = [repr(float(x)) for x in pagerank]
    for name, values in attrs.items():
        if len(values) != g.n_nodes:
            raise ValueError(f"{name} has {len(values)} values for {g.n_nodes} nodes")

    root = ET.Element("graphml", xmlns=_NS)
    for name in attrs:
        ET.SubElement(root, "key", {"id": name, "for": "node", "attr.name": name,
                                    "attr.type": _TYPES[name]})
    body = ET.SubElement(root, "graph", id="G", edgedefault="undirected")
    for i in range(g.n_nodes):
        node = ET.SubElement(body, "node", id=f"n{i}")
        for name, values in attrs.items():
            ET.SubElement(node, "data", key=name).text = str(values[i])
    for e, (u, v) in enumerate(g.edge_array()):
        ET.SubElement(body, "edge", id=f"e{e}", source=f"n{u}", target=f"n{v}")

    tree = ET.ElementTree(root)
    ET.indent(tree, space="  ")
    tree.write(path, encoding="utf-8", xml_declaration=True)
