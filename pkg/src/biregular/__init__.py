"""Constructions and oracles for biregular bipartite labeled multigraphs."""
