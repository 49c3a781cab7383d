"""Run the five-model benchmark on a simulated scenario and print the report.

The same report comes from the command line. Generate the scenario, then
point a config at the masked frame:

    peanut simulate --seed 42 --out sim
    printf 'frame: sim/masked.json\nseed: 42\n' > bench.yaml
    peanut bench --config bench.yaml --out report
"""

from peanut.evaluate import standard_configs, render_report, run_benchmark
from peanut.simulate import SimulationSpec, generate

truth = generate(SimulationSpec(seed=42))
report = run_benchmark(truth.masked, standard_configs(42), k=5, seed=42)
print(render_report(report))

# Model 1 keeps the missing cells, so its forest row is NA; its OLS table
# matches Model 2 because OLS can only use complete rows.
