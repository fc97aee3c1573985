"""Bundled graphs."""

from importlib import resources

from .graph import Graph, load_edge_list


def karate_club() -> Graph:
    """Zachary's karate club: 34 nodes, 78 unit-weight edges, 0-based ids."""
    with resources.as_file(resources.files(__package__) / "data" / "karate.el") as path:
        return load_edge_list(path).graph
