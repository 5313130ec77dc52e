"""Simulated annealing over pivots on a grid circuit, scored by planned FLOPs."""

from zxcontract import AnnealConfig, PlanConfig, pipeline, random_grid_circuit, standard_pipeline

c = random_grid_circuit(3, 3, 6, seed=2)
pcfg = PlanConfig()
base = standard_pipeline(c, pcfg, contract=False).plan.predicted_cost
plain = pipeline(c, None, pcfg, contract=False).plan.predicted_cost
for mode in ("anneal", "greedy"):
    res = pipeline(c, AnnealConfig(nb_steps=30, seed=0, cost_fn="flops", mode=mode), pcfg, contract=False)
    rep = res.anneal_report
    print(f"{mode:6s}: initial {rep.initial_cost:g}, best {rep.best_cost:g} at step {rep.best_step}, "
          f"accepted {sum(r.accepted for r in rep.rows)}/{len(rep.rows)}")
print(f"standard network {base}, unoptimized ZX {plain}")
