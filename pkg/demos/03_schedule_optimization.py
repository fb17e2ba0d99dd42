# %% [markdown]
# # Choosing the polling order
#
# Bits a node sends depend on the nearest already-polled node. The greedy
# order (always poll the node closest to the polled set) is compared with an
# exhaustive search.

# %%
import numpy as np

from sensorpoll.field import CorrelationModel, build_field, correlation_curve, random_field
from sensorpoll.scheduling import brute_force_optimum, evaluate_schedule, greedy_schedule

# %% Bits versus distance for n = 5
for d, b in correlation_curve(5, d_max=8, step=0.5):
    print(f"d={d:4.1f}  B={b}  " + "#" * b)

# %% A three node line
line = CorrelationModel.from_field(build_field([(1, (0,)), (2, (2.5,)), (3, (6,))], n=5))
print(line.bits)
for order in [(1, 2, 3), (1, 3, 2), (3, 2, 1)]:
    ev = evaluate_schedule(line, order)
    print(order, "B:", ev.per_step_b, "queries:", ev.per_step_query, "cost:", ev.complexity)

# %% Random 7-node field
rng = np.random.default_rng(2024)
model = CorrelationModel.from_field(random_field(rng, 7, 8))
g = greedy_schedule(model)
b = brute_force_optimum(model)
print("greedy:", g.best_schedule.order, g.best_cost)
print("brute :", b.best_schedule.order, b.best_cost, f"({b.evaluated_count} schedules)")
print("greedy cost from every start:", {s: greedy_schedule(model, s).best_cost for s in model.node_ids})
