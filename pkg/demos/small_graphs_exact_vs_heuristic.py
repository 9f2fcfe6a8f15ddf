"""How close does the multi-start heuristic get on graphs we can solve exactly?

We sweep every connected graph on at most six vertices, compute the
b-chromatic number three ways (brute force, the representatives model and
the heuristic with a small iteration budget) and count how often the
heuristic falls short.
"""

import networkx as nx

from bcol import Graph, MultistartConfig, m_bound, multistart_b_col
from bcol.mip import brute_force_chi_b, build_formulation, solve

short, total = [], 0
for G in nx.graph_atlas_g()[1:]:
    if G.number_of_nodes() > 6 or not nx.is_connected(G):
        continue
    g = Graph.from_networkx(G)
    total += 1
    exact = brute_force_chi_b(g)
    model = solve(build_formulation(g)).objective_value
    assert model == exact
    heur = multistart_b_col(g, MultistartConfig(it_max=20, seed=1)).best_value
    if heur < exact:
        short.append((sorted(G.edges()), heur, exact, m_bound(g)))

print(f"{total} connected graphs, model always matched brute force")
print(f"heuristic (20 iterations) fell short on {len(short)} of them")
for edges, heur, exact, m in short[:5]:
    print(f"  heuristic {heur}, optimum {exact}, m(G) {m}: {edges}")
