"""Watching the multi-start heuristic converge.

A progress callback records each iteration.  We print the iterations that
improved the incumbent, then compare a few RCL settings on the same graph.
"""

from bcol import MultistartConfig, RclParams, default_it_max, generate, m_bound, multistart_b_col

g, meta = generate("random", 120, 0.3, seed=11)
print(f"{meta.name}: |V|={g.n} |E|={g.num_edges} m(G)={m_bound(g)} it_max={default_it_max(g)}")

improvements = []
res = multistart_b_col(g, MultistartConfig(seed=3), lambda ev: ev.new_best and improvements.append(ev))
for ev in improvements:
    print(f"  iteration {ev.iteration:4d}: {ev.value} colors after {ev.timestamp:.2f}s")
print(f"best {res.best_value}, average {res.avg_value:.2f} over {res.iterations_run} iterations")

# Greedier lists converge faster but explore less.
for alpha, beta in ((0.0, 0.1), (0.0, 0.3), (0.2, 0.1), (0.5, 0.5)):
    r = multistart_b_col(g, MultistartConfig(rcl=RclParams(alpha, beta), it_max=100, seed=3))
    print(f"alpha={alpha:.1f} beta={beta:.1f}: best {r.best_value}, average {r.avg_value:.2f}")
