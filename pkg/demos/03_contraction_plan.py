"""Community-based order finding with slicing on a small grid circuit network."""

from zxcontract import circuit_network, execute_plan, find_order, random_grid_circuit, statevector_amplitude

c = random_grid_circuit(3, 3, 6, seed=4)
net = circuit_network(c)
for target in (26, 6, 5):
    plan = find_order(net, seed=0, target_rank=target)
    out = execute_plan(net, plan)
    print(f"target rank {target:2d}: {len(plan.slices)} sliced indices, {out.subtasks} subtasks, "
          f"predicted {plan.predicted_cost}, measured {out.measured_cost}, amplitude {out.amplitude:.3e}")
print("statevector", f"{statevector_amplitude(c):.3e}")
