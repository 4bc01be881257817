"""Walk through the engine on two hand-sized instances.

Run:  python demos/small_examples.py
"""

from cubic_persistency import Instance, objective, to_cubic_multicut
from cubic_persistency.engine import fixed_labeling, reduce, stats_line, verify
from cubic_persistency.oracle import solve_exact

# Three pairs each want to be joined (-2), but joining all three costs +5.
tri = Instance(3, {(0, 1): -2, (0, 2): -2, (1, 2): -2}, {(0, 1, 2): 5})
res = solve_exact(tri)
print("minimum", res.minimum, "attained by", res.argmins)
print("all joined costs", objective(tri, (1, 1, 1)))

state = reduce(tri)
print(state.event_log(), end="")
print("stats", stats_line(state))
print("fixations consistent with an optimum:", verify(state))

# The same instance as a cubic multicut problem over cut indicators.
mc = to_cubic_multicut(tri)
z, y = mc.image(tri, (1, 0, 0))
print("multicut constant", mc.constant, "->", mc.constant - mc.objective(z, y))

# Linear costs only: one strongly attractive pair and a weak repulsion.
lin = Instance(3, {(0, 1): -5, (0, 2): 1, (1, 2): -1})
state = reduce(lin)
print(state.event_log(), end="")
x = fixed_labeling(state)
print("every edge fixed:", x, "objective", objective(lin, x), "offset", state.offset)
